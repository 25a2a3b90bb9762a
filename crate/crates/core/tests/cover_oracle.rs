//! Branch and bound against brute-force subset enumeration.

use obsnum::arrangement::{build_arrangement, face_nonedge_incidence, CoverInstance, Drawing};
use obsnum::cover::{is_cover, solve_cover};
use obsnum::geom::{extends_general_position, Point};
use obsnum::graph::{all_pairs, Graph};
use obsnum::sampling::stream_rng;
use proptest::prelude::*;
use rand::Rng;

/// Smallest size first, lexicographic within a size.
fn exhaustive(inst: &CoverInstance) -> Option<Vec<usize>> {
    let f = inst.face_count();
    for k in 0..=f {
        let mut combo: Vec<usize> = (0..k).collect();
        loop {
            if is_cover(inst, &combo) {
                return Some(combo);
            }
            // Next k-combination of 0..f in lexicographic order.
            let mut i = k;
            while i > 0 && combo[i - 1] == f - k + i - 1 {
                i -= 1;
            }
            if i == 0 {
                break;
            }
            combo[i - 1] += 1;
            for j in i..k {
                combo[j] = combo[j - 1] + 1;
            }
        }
    }
    None
}

fn instance() -> impl Strategy<Value = CoverInstance> {
    (1usize..=12, 0usize..=14).prop_flat_map(|(faces, universe)| {
        prop::collection::vec(
            prop::collection::btree_set(0..universe.max(1), 0..=universe),
            faces,
        )
        .prop_map(move |sets| CoverInstance {
            nonedges: (0..universe).map(|k| (k, k + 1)).collect(),
            incidence: sets
                .into_iter()
                .map(|s| s.into_iter().filter(|&k| k < universe).collect())
                .collect(),
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(400))]

    #[test]
    fn matches_exhaustive(inst in instance()) {
        let fast = solve_cover(&inst).map(|s| s.faces);
        prop_assert_eq!(fast, exhaustive(&inst));
    }
}

#[test]
fn drawing_instances_match_exhaustive() {
    let mut checked = 0;
    let mut seed = 0;
    while checked < 100 {
        seed += 1;
        let mut rng = stream_rng(seed, 0);
        let n = rng.gen_range(3..=6);
        let mut pts: Vec<Point<i64>> = Vec::new();
        while pts.len() < n {
            let p = Point::new(rng.gen_range(0..50), rng.gen_range(0..50));
            if extends_general_position(&pts, &p) {
                pts.push(p);
            }
        }
        let edges: Vec<_> = all_pairs(n).filter(|_| rng.gen_bool(0.5)).collect();
        let g = Graph::from_edges(n, edges).unwrap();
        let fs = build_arrangement(&Drawing::new(pts, g).unwrap());
        let inst = face_nonedge_incidence(&fs);
        if inst.face_count() > 12 {
            continue;
        }
        assert_eq!(solve_cover(&inst).map(|s| s.faces), exhaustive(&inst));
        checked += 1;
    }
}
