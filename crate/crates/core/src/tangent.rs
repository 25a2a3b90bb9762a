//! Rotating-tangent encoding of a point set around one convex obstacle, and
//! the table-driven decoder that recovers visibility from the sequence.
//!
//! Conventions: the tangent line is oriented so that the obstacle lies on
//! its right, it rotates clockwise starting from the upward direction, and a
//! vertex gets `+` when it lies ahead of the tangency corner along the line,
//! `-` when it lies behind.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use rayon::prelude::*;
use thiserror::Error;

use crate::geom::{
    orient, segment_intersects_polygon, Location, Orientation, Point, Polygon, Segment,
};
use crate::graph::Graph;
use crate::sampling::{random_convex_scene, stream_rng};
use crate::scalar::{magnitude_bits, Coord};
use crate::visibility::Scene;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TangentError {
    #[error("obstacle is not strictly convex")]
    NotConvex,
    #[error("vertex {} lies inside or on the obstacle", .0 + 1)]
    PointInside(usize),
    #[error("vertex {} is collinear with an obstacle side", .0 + 1)]
    EdgeAligned(usize),
    #[error("vertices {} and {} produce tangent events in the same direction", .0 + 1, .1 + 1)]
    CoincidentEvents(usize, usize),
    #[error("malformed tangent sequence: {0}")]
    Malformed(String),
    #[error("pair ({}, {}) is not a pair of distinct vertices of the sequence", .0 + 1, .1 + 1)]
    BadPair(usize, usize),
    #[error("pattern {0} is not in the table")]
    UnknownPattern(Pattern),
    #[error("sample count must be at least 1")]
    NoSamples,
    #[error(
        "pattern {pattern} observed as both visible (sample {visible_sample}) and blocked (sample {blocked_sample})"
    )]
    Contradiction {
        pattern: Pattern,
        visible_sample: u64,
        blocked_sample: u64,
        witnesses: Box<(Scene<i64>, Scene<i64>)>,
    },
    #[error("scene generation failed: {0}")]
    Sampling(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    fn as_char(self) -> char {
        match self {
            Sign::Plus => '+',
            Sign::Minus => '-',
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TangentEvent {
    pub vertex: usize,
    pub sign: Sign,
}

/// Circular sequence of signed vertex symbols, stored linearly.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TangentSequence {
    events: Vec<TangentEvent>,
}

impl TangentSequence {
    /// Checks that every vertex `0..n` occurs exactly once with each sign.
    pub fn new(events: Vec<TangentEvent>) -> Result<Self, TangentError> {
        if !events.len().is_multiple_of(2) {
            return Err(TangentError::Malformed(format!(
                "odd length {}",
                events.len()
            )));
        }
        let n = events.len() / 2;
        let mut seen = vec![[false; 2]; n];
        for e in &events {
            if e.vertex >= n {
                return Err(TangentError::Malformed(format!(
                    "label {} exceeds {}",
                    e.vertex + 1,
                    n
                )));
            }
            let slot = &mut seen[e.vertex][e.sign as usize];
            if *slot {
                return Err(TangentError::Malformed(format!(
                    "{}{} occurs twice",
                    e.vertex + 1,
                    e.sign.as_char()
                )));
            }
            *slot = true;
        }
        Ok(TangentSequence { events })
    }

    pub fn events(&self) -> &[TangentEvent] {
        &self.events
    }

    pub fn n(&self) -> usize {
        self.events.len() / 2
    }

    /// Equality up to rotation.
    pub fn circular_eq(&self, other: &TangentSequence) -> bool {
        let len = self.events.len();
        if len != other.events.len() {
            return false;
        }
        if len == 0 {
            return true;
        }
        (0..len).any(|shift| (0..len).all(|k| self.events[(k + shift) % len] == other.events[k]))
    }

    pub fn rotated(&self, shift: usize) -> TangentSequence {
        let mut events = self.events.clone();
        if !events.is_empty() {
            let len = events.len();
            events.rotate_left(shift % len);
        }
        TangentSequence { events }
    }
}

/// One-based labels, no separators: `2+1-2-3+1+3-`.
impl fmt::Display for TangentSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for e in &self.events {
            write!(f, "{}{}", e.vertex + 1, e.sign.as_char())?;
        }
        Ok(())
    }
}

impl FromStr for TangentSequence {
    type Err = TangentError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut events = Vec::new();
        let mut digits = String::new();
        for c in s.trim().chars() {
            match c {
                '0'..='9' => digits.push(c),
                '+' | '-' => {
                    let label: usize = digits.parse().map_err(|_| {
                        TangentError::Malformed(format!("missing label before '{c}'"))
                    })?;
                    if label == 0 {
                        return Err(TangentError::Malformed("labels start at 1".into()));
                    }
                    let sign = if c == '+' { Sign::Plus } else { Sign::Minus };
                    events.push(TangentEvent {
                        vertex: label - 1,
                        sign,
                    });
                    digits.clear();
                }
                c if c.is_whitespace() => {}
                c => {
                    return Err(TangentError::Malformed(format!(
                        "unexpected character '{c}'"
                    )))
                }
            }
        }
        if !digits.is_empty() {
            return Err(TangentError::Malformed(
                "trailing label without sign".into(),
            ));
        }
        TangentSequence::new(events)
    }
}

/// Half-plane index then cross product: a total clockwise order of
/// directions starting at straight up.
fn cw_from_up<D: Coord>(a: &Point<D>, b: &Point<D>) -> Ordering {
    // Reflecting across y = x turns "clockwise from up" into "counterclockwise
    // from +x".
    let ra = Point::new(a.y.clone(), a.x.clone());
    let rb = Point::new(b.y.clone(), b.x.clone());
    let half = |p: &Point<D>| p.y.is_negative() || (p.y.is_zero() && p.x.is_negative());
    match (half(&ra), half(&rb)) {
        (false, true) => Ordering::Less,
        (true, false) => Ordering::Greater,
        _ => {
            let zero = D::zero();
            match D::det_sign(&zero, &zero, &ra.x, &ra.y, &rb.x, &rb.y) {
                Ordering::Greater => Ordering::Less,
                Ordering::Less => Ordering::Greater,
                Ordering::Equal => Ordering::Equal,
            }
        }
    }
}

fn sort_events<D: Coord>(
    mut events: Vec<(Point<D>, TangentEvent)>,
) -> Result<Vec<TangentEvent>, TangentError> {
    events.sort_by(|a, b| cw_from_up(&a.0, &b.0));
    for w in events.windows(2) {
        if cw_from_up(&w[0].0, &w[1].0) == Ordering::Equal {
            return Err(TangentError::CoincidentEvents(w[0].1.vertex, w[1].1.vertex));
        }
    }
    Ok(events.into_iter().map(|(_, e)| e).collect())
}

/// Records the signed vertex symbols met by a tangent line rotating
/// clockwise around the convex `obstacle`.
pub fn encode_tangent<T: Coord>(
    points: &[Point<T>],
    obstacle: &Polygon<T>,
) -> Result<TangentSequence, TangentError> {
    if !obstacle.is_convex() {
        return Err(TangentError::NotConvex);
    }
    let corners = obstacle.vertices();
    let m = corners.len();
    // (direction, event) with direction as an exact integer vector.
    let mut raw: Vec<(Point<T>, Point<T>, TangentEvent)> = Vec::with_capacity(2 * points.len());
    for (i, v) in points.iter().enumerate() {
        if obstacle.locate(v) != Location::Outside {
            return Err(TangentError::PointInside(i));
        }
        let mut found = 0;
        for k in 0..m {
            let w = &corners[k];
            let prev = &corners[(k + m - 1) % m];
            let next = &corners[(k + 1) % m];
            let o_prev = orient(w, v, prev);
            let o_next = orient(w, v, next);
            if o_prev == Orientation::Collinear || o_next == Orientation::Collinear {
                return Err(TangentError::EdgeAligned(i));
            }
            if o_prev != o_next {
                continue;
            }
            found += 1;
            // Obstacle right of the direction w -> v exactly when it is
            // clockwise of that ray.
            let event = if o_prev == Orientation::Clockwise {
                (
                    w.clone(),
                    v.clone(),
                    TangentEvent {
                        vertex: i,
                        sign: Sign::Plus,
                    },
                )
            } else {
                (
                    v.clone(),
                    w.clone(),
                    TangentEvent {
                        vertex: i,
                        sign: Sign::Minus,
                    },
                )
            };
            raw.push(event);
        }
        if found != 2 {
            return Err(TangentError::EdgeAligned(i));
        }
    }
    let fits = raw.iter().all(|(a, b, _)| {
        [&a.x, &a.y, &b.x, &b.y]
            .iter()
            .all(|c| magnitude_bits(*c) <= 62)
    });
    let events = if fits {
        sort_events(
            raw.iter()
                .map(|(from, to, e)| {
                    let d = |a: &T, b: &T| a.to_i128().unwrap() - b.to_i128().unwrap();
                    (Point::new(d(&to.x, &from.x), d(&to.y, &from.y)), *e)
                })
                .collect::<Vec<(Point<i128>, _)>>(),
        )?
    } else {
        sort_events(
            raw.iter()
                .map(|(from, to, e)| {
                    (
                        Point::new(to.x.big() - from.x.big(), to.y.big() - from.y.big()),
                        *e,
                    )
                })
                .collect::<Vec<(Point<BigInt>, _)>>(),
        )?
    };
    TangentSequence::new(events)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Role {
    P,
    Q,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PatternSymbol {
    pub role: Role,
    pub sign: Sign,
}

/// The four events of a vertex pair read cyclically, with `p` the smaller
/// label and the rotation fixed so that `q-` comes first.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Pattern(pub [PatternSymbol; 4]);

const Q_MINUS: PatternSymbol = PatternSymbol {
    role: Role::Q,
    sign: Sign::Minus,
};

impl Pattern {
    fn canonical(mut symbols: [PatternSymbol; 4]) -> Pattern {
        let start = symbols
            .iter()
            .position(|s| *s == Q_MINUS)
            .expect("q- present");
        symbols.rotate_left(start);
        Pattern(symbols)
    }

    /// The same pattern with the roles of the two vertices exchanged.
    pub fn swapped(&self) -> Pattern {
        let mut s = self.0;
        for sym in &mut s {
            sym.role = match sym.role {
                Role::P => Role::Q,
                Role::Q => Role::P,
            };
        }
        Pattern::canonical(s)
    }

    /// All six canonical patterns.
    pub fn all() -> Vec<Pattern> {
        let rest = [
            PatternSymbol {
                role: Role::P,
                sign: Sign::Plus,
            },
            PatternSymbol {
                role: Role::P,
                sign: Sign::Minus,
            },
            PatternSymbol {
                role: Role::Q,
                sign: Sign::Plus,
            },
        ];
        let perms = [
            [0, 1, 2],
            [0, 2, 1],
            [1, 0, 2],
            [1, 2, 0],
            [2, 0, 1],
            [2, 1, 0],
        ];
        let mut out: Vec<Pattern> = perms
            .iter()
            .map(|p| Pattern([Q_MINUS, rest[p[0]], rest[p[1]], rest[p[2]]]))
            .collect();
        out.sort();
        out
    }
}

impl fmt::Display for Pattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.0 {
            let r = match s.role {
                Role::P => 'p',
                Role::Q => 'q',
            };
            write!(f, "{}{}", r, s.sign.as_char())?;
        }
        Ok(())
    }
}

impl FromStr for Pattern {
    type Err = TangentError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let chars: Vec<char> = s.trim().chars().collect();
        let bad = || TangentError::Malformed(format!("bad pattern '{s}'"));
        if chars.len() != 8 {
            return Err(bad());
        }
        let mut syms = [Q_MINUS; 4];
        for (k, pair) in chars.chunks(2).enumerate() {
            let role = match pair[0] {
                'p' => Role::P,
                'q' => Role::Q,
                _ => return Err(bad()),
            };
            let sign = match pair[1] {
                '+' => Sign::Plus,
                '-' => Sign::Minus,
                _ => return Err(bad()),
            };
            syms[k] = PatternSymbol { role, sign };
        }
        let mut sorted = syms;
        sorted.sort();
        let expected = [
            PatternSymbol {
                role: Role::P,
                sign: Sign::Plus,
            },
            PatternSymbol {
                role: Role::P,
                sign: Sign::Minus,
            },
            PatternSymbol {
                role: Role::Q,
                sign: Sign::Plus,
            },
            Q_MINUS,
        ];
        if sorted != expected {
            return Err(bad());
        }
        Ok(Pattern::canonical(syms))
    }
}

pub fn pair_pattern(seq: &TangentSequence, i: usize, j: usize) -> Result<Pattern, TangentError> {
    if i == j || i >= seq.n() || j >= seq.n() {
        return Err(TangentError::BadPair(i, j));
    }
    let (p, q) = if i < j { (i, j) } else { (j, i) };
    let mut syms = [Q_MINUS; 4];
    let mut k = 0;
    for e in seq.events() {
        let role = if e.vertex == p {
            Role::P
        } else if e.vertex == q {
            Role::Q
        } else {
            continue;
        };
        syms[k] = PatternSymbol { role, sign: e.sign };
        k += 1;
    }
    Ok(Pattern::canonical(syms))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Outcome {
    Visible,
    Blocked,
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Outcome::Visible => "visible",
            Outcome::Blocked => "blocked",
        })
    }
}

/// Pattern to outcome map; single valued by construction.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct PatternTable {
    entries: BTreeMap<Pattern, Outcome>,
}

impl PatternTable {
    pub fn new() -> Self {
        Self::default()
    }

    /// Records an observation. Returns the previously recorded outcome if
    /// it disagrees, leaving the table unchanged.
    pub fn observe(&mut self, pattern: Pattern, outcome: Outcome) -> Result<(), Outcome> {
        match self.entries.get(&pattern) {
            Some(&old) if old != outcome => Err(old),
            Some(_) => Ok(()),
            None => {
                self.entries.insert(pattern, outcome);
                Ok(())
            }
        }
    }

    pub fn get(&self, pattern: &Pattern) -> Option<Outcome> {
        self.entries.get(pattern).copied()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Pattern, &Outcome)> {
        self.entries.iter()
    }

    /// Swapping the two vertex roles never changes a recorded outcome.
    pub fn is_symmetric(&self) -> bool {
        self.entries
            .iter()
            .all(|(p, o)| self.entries.get(&p.swapped()).is_none_or(|s| s == o))
    }

    /// Observes every pair of one single-obstacle scene.
    pub fn observe_scene<T: Coord>(
        &mut self,
        points: &[Point<T>],
        obstacle: &Polygon<T>,
    ) -> Result<(), TangentError> {
        for (pattern, outcome) in scene_observations(points, obstacle)? {
            if self.observe(pattern, outcome).is_err() {
                return Err(TangentError::Malformed(format!(
                    "pattern {pattern} contradicts the table"
                )));
            }
        }
        Ok(())
    }

    /// One `pattern outcome` line per entry.
    pub fn to_text(&self) -> String {
        self.entries
            .iter()
            .map(|(p, o)| format!("{p} {o}\n"))
            .collect()
    }

    pub fn from_text(text: &str) -> Result<Self, TangentError> {
        let mut table = PatternTable::new();
        for line in text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'))
        {
            let mut parts = line.split_whitespace();
            let (Some(p), Some(o), None) = (parts.next(), parts.next(), parts.next()) else {
                return Err(TangentError::Malformed(format!("bad table line '{line}'")));
            };
            let pattern: Pattern = p.parse()?;
            let outcome = match o {
                "visible" => Outcome::Visible,
                "blocked" => Outcome::Blocked,
                _ => return Err(TangentError::Malformed(format!("bad outcome '{o}'"))),
            };
            if table.observe(pattern, outcome).is_err() {
                return Err(TangentError::Malformed(format!(
                    "conflicting entries for {pattern}"
                )));
            }
        }
        Ok(table)
    }
}

/// Pattern and geometric outcome for every vertex pair.
pub fn scene_observations<T: Coord>(
    points: &[Point<T>],
    obstacle: &Polygon<T>,
) -> Result<Vec<(Pattern, Outcome)>, TangentError> {
    let seq = encode_tangent(points, obstacle)?;
    let mut out = Vec::new();
    for i in 0..points.len() {
        for j in i + 1..points.len() {
            let seg = Segment::open(points[i].clone(), points[j].clone())
                .map_err(|e| TangentError::Malformed(e.to_string()))?;
            let blocked = segment_intersects_polygon(&seg, obstacle)
                .map_err(|_| TangentError::PointInside(i))?;
            let outcome = if blocked {
                Outcome::Blocked
            } else {
                Outcome::Visible
            };
            out.push((pair_pattern(&seq, i, j)?, outcome));
        }
    }
    Ok(out)
}

/// Scenes used by [`derive_pattern_table`]: sample `index` of `seed`.
pub fn table_sample(seed: u64, index: u64) -> Result<Scene<i64>, TangentError> {
    use rand::Rng;
    let mut rng = stream_rng(seed, index);
    let n = rng.gen_range(2..=10);
    random_convex_scene(&mut rng, n, 1000).map_err(|e| TangentError::Sampling(e.to_string()))
}

type FirstSeen = BTreeMap<(Pattern, Outcome), u64>;

fn merge_first_seen(mut a: FirstSeen, b: FirstSeen) -> FirstSeen {
    for (k, v) in b {
        a.entry(k)
            .and_modify(|old| *old = (*old).min(v))
            .or_insert(v);
    }
    a
}

/// Builds the pattern table from random single-obstacle scenes, comparing
/// each pair's pattern against geometric visibility. Any pattern seen with
/// both outcomes is reported with the two earliest witness scenes.
pub fn derive_pattern_table(sample_count: u64, seed: u64) -> Result<PatternTable, TangentError> {
    if sample_count == 0 {
        return Err(TangentError::NoSamples);
    }
    let seen: FirstSeen = (0..sample_count)
        .into_par_iter()
        .map(|idx| -> Result<FirstSeen, TangentError> {
            let scene = table_sample(seed, idx)?;
            let mut local = FirstSeen::new();
            for key in scene_observations(scene.points(), &scene.obstacles()[0])? {
                local.entry(key).or_insert(idx);
            }
            Ok(local)
        })
        .try_reduce(FirstSeen::new, |a, b| Ok(merge_first_seen(a, b)))?;

    let mut table = PatternTable::new();
    for pattern in Pattern::all() {
        let visible = seen.get(&(pattern, Outcome::Visible));
        let blocked = seen.get(&(pattern, Outcome::Blocked));
        match (visible, blocked) {
            (Some(&v), Some(&b)) => {
                return Err(TangentError::Contradiction {
                    pattern,
                    visible_sample: v,
                    blocked_sample: b,
                    witnesses: Box::new((table_sample(seed, v)?, table_sample(seed, b)?)),
                })
            }
            (Some(_), None) => {
                table.observe(pattern, Outcome::Visible).ok();
            }
            (None, Some(_)) => {
                table.observe(pattern, Outcome::Blocked).ok();
            }
            (None, None) => {}
        }
    }
    Ok(table)
}

/// Visibility graph on the sequence's vertices as predicted by `table`.
pub fn decode_visibility(
    seq: &TangentSequence,
    table: &PatternTable,
) -> Result<Graph, TangentError> {
    let n = seq.n();
    let mut g = Graph::empty(n);
    for i in 0..n {
        for j in i + 1..n {
            let pattern = pair_pattern(seq, i, j)?;
            match table.get(&pattern) {
                Some(Outcome::Visible) => {
                    g.insert(i, j);
                }
                Some(Outcome::Blocked) => {}
                None => return Err(TangentError::UnknownPattern(pattern)),
            }
        }
    }
    Ok(g)
}
