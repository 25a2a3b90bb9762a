//! Exact minimum set cover for face-versus-non-edge instances.
//!
//! The optimum size comes from branch and bound on the hardest uncovered
//! element; a second search then returns the lexicographically smallest
//! sorted face list of that size.

use fixedbitset::FixedBitSet;

use crate::arrangement::CoverInstance;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoverSolution {
    /// Chosen faces, ascending.
    pub faces: Vec<usize>,
}

impl CoverSolution {
    pub fn size(&self) -> usize {
        self.faces.len()
    }
}

struct Sets {
    universe: usize,
    sets: Vec<FixedBitSet>,
    /// Faces covering each element, ascending.
    covering: Vec<Vec<usize>>,
}

impl Sets {
    fn new(universe: usize, incidence: &[Vec<usize>]) -> Self {
        let mut covering = vec![Vec::new(); universe];
        let sets = incidence
            .iter()
            .enumerate()
            .map(|(f, list)| {
                let mut b = FixedBitSet::with_capacity(universe);
                for &k in list {
                    b.insert(k);
                    covering[k].push(f);
                }
                b
            })
            .collect();
        Sets {
            universe,
            sets,
            covering,
        }
    }

    fn gain(&self, f: usize, uncovered: &FixedBitSet) -> usize {
        self.sets[f].intersection(uncovered).count()
    }
}

/// Whether the union of `faces` contains every element of `0..universe`.
pub fn is_cover(instance: &CoverInstance, faces: &[usize]) -> bool {
    let mut covered = vec![false; instance.nonedges.len()];
    for &f in faces {
        for &k in &instance.incidence[f] {
            covered[k] = true;
        }
    }
    covered.into_iter().all(|c| c)
}

fn greedy(s: &Sets) -> usize {
    let mut uncovered = FixedBitSet::with_capacity(s.universe);
    uncovered.insert_range(..);
    let mut count = 0;
    while uncovered.count_ones(..) > 0 {
        let best = (0..s.sets.len())
            .max_by_key(|&f| s.gain(f, &uncovered))
            .expect("instance is coverable");
        uncovered.difference_with(&s.sets[best]);
        count += 1;
    }
    count
}

fn lower_bound(s: &Sets, uncovered: &FixedBitSet) -> usize {
    let left = uncovered.count_ones(..);
    if left == 0 {
        return 0;
    }
    let widest = (0..s.sets.len())
        .map(|f| s.gain(f, uncovered))
        .max()
        .unwrap_or(0);
    if widest == 0 {
        usize::MAX
    } else {
        left.div_ceil(widest)
    }
}

fn branch(s: &Sets, uncovered: &FixedBitSet, depth: usize, best: &mut usize) {
    let lb = lower_bound(s, uncovered);
    if lb == 0 {
        *best = (*best).min(depth);
        return;
    }
    if depth.saturating_add(lb) >= *best {
        return;
    }
    let pivot = uncovered
        .ones()
        .min_by_key(|&e| s.covering[e].len())
        .expect("something is uncovered");
    let mut options = s.covering[pivot].clone();
    options.sort_by_key(|&f| std::cmp::Reverse(s.gain(f, uncovered)));
    for f in options {
        let mut rest = uncovered.clone();
        rest.difference_with(&s.sets[f]);
        branch(s, &rest, depth + 1, best);
    }
}

/// Faces `>= from` in increasing order; include-first, so the first hit is
/// the lexicographically smallest cover with exactly `left` more faces.
fn lex_search(
    s: &Sets,
    uncovered: &FixedBitSet,
    from: usize,
    left: usize,
    chosen: &mut Vec<usize>,
) -> bool {
    if uncovered.count_ones(..) == 0 {
        return left == 0;
    }
    if left == 0 || from >= s.sets.len() {
        return false;
    }
    // Every uncovered element still needs a face at index >= from.
    if uncovered
        .ones()
        .any(|e| s.covering[e].last().is_none_or(|&f| f < from))
    {
        return false;
    }
    let widest = (from..s.sets.len())
        .map(|f| s.gain(f, uncovered))
        .max()
        .unwrap_or(0);
    if widest == 0 || uncovered.count_ones(..).div_ceil(widest) > left {
        return false;
    }
    if s.gain(from, uncovered) > 0 {
        let mut rest = uncovered.clone();
        rest.difference_with(&s.sets[from]);
        chosen.push(from);
        if lex_search(s, &rest, from + 1, left - 1, chosen) {
            return true;
        }
        chosen.pop();
    }
    lex_search(s, uncovered, from + 1, left, chosen)
}

/// Minimum cover, lexicographically smallest among minimum covers. `None`
/// when some element lies in no set.
pub fn solve_cover(instance: &CoverInstance) -> Option<CoverSolution> {
    let s = Sets::new(instance.nonedges.len(), &instance.incidence);
    if s.covering.iter().any(Vec::is_empty) {
        return None;
    }
    if s.universe == 0 {
        return Some(CoverSolution { faces: Vec::new() });
    }
    let mut all = FixedBitSet::with_capacity(s.universe);
    all.insert_range(..);
    let mut best = greedy(&s);
    branch(&s, &all, 0, &mut best);
    let mut chosen = Vec::with_capacity(best);
    let found = lex_search(&s, &all, 0, best, &mut chosen);
    assert!(found, "a cover of the optimal size exists");
    Some(CoverSolution { faces: chosen })
}
