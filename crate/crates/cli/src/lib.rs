//! Command-line front end for `obsnum`.
//!
//! [`run`] parses the arguments, executes one subcommand and returns what
//! would be printed together with the exit status: 0 on success, 1 when an
//! input fails validation, 2 when a computed result contradicts a property
//! that must hold.

use std::fmt;

use clap::{Args, Parser, Subcommand};

mod commands;

#[derive(Debug, Parser)]
#[command(name = "obsnum", version, about = "Obstacle representations of graphs")]
pub struct Cli {
    /// Reject scenes with collinear triples instead of warning.
    #[arg(long, global = true)]
    pub strict: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct SearchArgs {
    #[arg(long)]
    pub seed: u64,
    /// Random placements tried per graph.
    #[arg(long, alias = "budget", default_value_t = 200)]
    pub placements: usize,
    /// Side of the sampling grid; defaults to 100 n^2.
    #[arg(long)]
    pub grid: Option<i64>,
    /// Also try every placement on a small grid of this side (n <= 5).
    #[arg(long)]
    pub sweep: Option<i64>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Visibility graph of a scene.
    Visibility {
        file: String,
        /// Print the scene document with the graph filled in.
        #[arg(long)]
        json: bool,
    },
    /// Check a scene, and its graph if present.
    Validate { file: String },
    /// Tangent sequence of the vertices around one convex obstacle.
    Encode {
        file: String,
        /// Obstacle number, starting at 1.
        #[arg(long, default_value_t = 1)]
        obstacle: usize,
    },
    /// Visibility predicted from a tangent sequence.
    Decode {
        sequence: String,
        /// Pattern table as printed by derive-table.
        #[arg(long, conflicts_with = "seed")]
        table: Option<String>,
        #[arg(long, required_unless_present = "table")]
        seed: Option<u64>,
        #[arg(long, default_value_t = 2000)]
        samples: u64,
    },
    /// Pattern table learned from random single-obstacle scenes.
    DeriveTable {
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = 2000)]
        samples: u64,
    },
    /// Orientation signs of the points of a scene.
    Ordertype { file: String },
    /// Order type of vertices and obstacle corners together.
    Signature { file: String },
    /// Faces of the straight-line drawing of a graph.
    Faces { file: String },
    /// Faces met by each non-edge.
    Incidence { file: String },
    /// Fewest faces meeting every non-edge.
    Cover { file: String },
    /// Upper bound on the obstacle number of a graph.
    ObsSearch {
        file: String,
        #[command(flatten)]
        search: SearchArgs,
    },
    /// Bounds along a chain of edge deletions from the complete graph.
    Chain {
        /// Target graph; defaults to the empty graph on --n vertices.
        #[arg(required_unless_present = "n")]
        file: Option<String>,
        #[arg(long, conflicts_with = "file")]
        n: Option<usize>,
        /// Delete missing edges in lexicographic order instead of shuffled.
        #[arg(long)]
        lexicographic: bool,
        #[command(flatten)]
        search: SearchArgs,
    },
    /// Count vertex groups whose hull holds no obstacle.
    PartitionCheck {
        file: String,
        /// Group size; defaults to floor(5 log2 n).
        #[arg(long)]
        k: Option<usize>,
    },
    /// Fraction of random graphs certified to need at most one obstacle.
    RandomExp {
        #[arg(long)]
        n: usize,
        #[arg(long, required_unless_present = "exhaustive")]
        trials: Option<usize>,
        /// Every labeled graph on n vertices.
        #[arg(long, conflicts_with = "trials")]
        exhaustive: bool,
        /// One line per graph.
        #[arg(long)]
        list: bool,
        #[command(flatten)]
        search: SearchArgs,
    },
    /// Smallest n where the counting bound forces a larger obstacle number.
    Bounds {
        /// Number of convex obstacles.
        #[arg(long, conflicts_with = "s", required_unless_present = "s")]
        h: Option<u64>,
        /// Total number of obstacle sides.
        #[arg(long)]
        s: Option<u64>,
        /// Constant in the sides bound, as an integer or p/q.
        #[arg(long, requires = "s")]
        c: Option<String>,
    },
}

/// A computed result that violates a property that always holds.
#[derive(Debug)]
pub struct Contradiction(pub String);

impl fmt::Display for Contradiction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "contradiction: {}", self.0)
    }
}

impl std::error::Error for Contradiction {}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Output {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Runs one invocation; `args` excludes the program name.
pub fn run<I, S>(args: I) -> Output
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let argv =
        std::iter::once(std::ffi::OsString::from("obsnum")).chain(args.into_iter().map(Into::into));
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let text = e.render().to_string();
            return if code == 0 {
                Output {
                    code,
                    stdout: text,
                    stderr: String::new(),
                }
            } else {
                Output {
                    code,
                    stdout: String::new(),
                    stderr: text,
                }
            };
        }
    };
    let mut ctx = commands::Ctx::new(cli.strict);
    let result = commands::execute(&mut ctx, &cli.command);
    let mut stderr: String = ctx
        .warnings
        .iter()
        .map(|w| format!("warning: {w}\n"))
        .collect();
    let code = match result {
        Ok(()) => 0,
        Err(e) => {
            stderr.push_str(&format!("error: {e:#}\n"));
            if e.downcast_ref::<Contradiction>().is_some() {
                2
            } else {
                1
            }
        }
    };
    Output {
        code,
        stdout: ctx.out,
        stderr,
    }
}
