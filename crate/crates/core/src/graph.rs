use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("edge ({0}, {1}) refers to a vertex outside 0..{2}")]
    OutOfRange(usize, usize, usize),
    #[error("duplicate edge ({0}, {1})")]
    Duplicate(usize, usize),
}

/// Simple undirected graph on vertices `0..n`. Edges are stored as `(i, j)`
/// with `i < j`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Graph {
    n: usize,
    edges: BTreeSet<(usize, usize)>,
}

fn ordered(i: usize, j: usize) -> (usize, usize) {
    if i < j {
        (i, j)
    } else {
        (j, i)
    }
}

impl Graph {
    pub fn empty(n: usize) -> Self {
        Graph {
            n,
            edges: BTreeSet::new(),
        }
    }

    pub fn complete(n: usize) -> Self {
        let mut g = Graph::empty(n);
        for i in 0..n {
            for j in i + 1..n {
                g.edges.insert((i, j));
            }
        }
        g
    }

    /// Cycle `0 - 1 - ... - (n-1) - 0`.
    pub fn cycle(n: usize) -> Self {
        let mut g = Graph::empty(n);
        if n >= 3 {
            for i in 0..n {
                g.edges.insert(ordered(i, (i + 1) % n));
            }
        }
        g
    }

    pub fn from_edges(
        n: usize,
        edges: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self, GraphError> {
        let mut g = Graph::empty(n);
        for (i, j) in edges {
            if i == j {
                return Err(GraphError::SelfLoop(i));
            }
            if i >= n || j >= n {
                return Err(GraphError::OutOfRange(i, j, n));
            }
            if !g.edges.insert(ordered(i, j)) {
                return Err(GraphError::Duplicate(i, j));
            }
        }
        Ok(g)
    }

    /// Builds a graph from the bits of `mask` over the pairs in
    /// lexicographic order.
    pub fn from_mask(n: usize, mask: u128) -> Self {
        let mut g = Graph::empty(n);
        for (bit, pair) in all_pairs(n).enumerate() {
            if mask >> bit & 1 == 1 {
                g.edges.insert(pair);
            }
        }
        g
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edges.iter().copied()
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        self.edges.contains(&ordered(i, j))
    }

    pub fn insert(&mut self, i: usize, j: usize) -> bool {
        assert!(
            i != j && i < self.n && j < self.n,
            "invalid edge ({i}, {j})"
        );
        self.edges.insert(ordered(i, j))
    }

    pub fn remove(&mut self, i: usize, j: usize) -> bool {
        self.edges.remove(&ordered(i, j))
    }

    /// Pairs `(i, j)`, `i < j`, that are not edges, in lexicographic order.
    pub fn non_edges(&self) -> Vec<(usize, usize)> {
        all_pairs(self.n)
            .filter(|p| !self.edges.contains(p))
            .collect()
    }

    pub fn is_complete(&self) -> bool {
        self.edges.len() == self.n * self.n.saturating_sub(1) / 2
    }

    /// Subgraph induced by `vertices`, relabelled `0..vertices.len()` in the
    /// given order.
    pub fn induced(&self, vertices: &[usize]) -> Graph {
        let mut g = Graph::empty(vertices.len());
        for (a, &u) in vertices.iter().enumerate() {
            for (b, &v) in vertices.iter().enumerate().skip(a + 1) {
                if self.has_edge(u, v) {
                    g.edges.insert((a, b));
                }
            }
        }
        g
    }
}

pub fn all_pairs(n: usize) -> impl Iterator<Item = (usize, usize)> {
    (0..n).flat_map(move |i| (i + 1..n).map(move |j| (i, j)))
}

/// Edges printed with one-based labels, e.g. `{1,2} {1,3}`.
impl fmt::Display for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, j) in &self.edges {
            if !first {
                f.write_str(" ")?;
            }
            write!(f, "{{{},{}}}", i + 1, j + 1)?;
            first = false;
        }
        Ok(())
    }
}
