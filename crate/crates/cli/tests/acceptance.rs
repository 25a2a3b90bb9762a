//! Acceptance suite. Runs every criterion, prints one PASS or FAIL line
//! each, and exits nonzero if any failed.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;
use std::time::{Duration, Instant};

use num_bigint::BigUint;
use obsnum::arrangement::{build_arrangement, face_nonedge_incidence, CoverInstance, Drawing};
use obsnum::bounds::{bounds_threshold, BoundsQuery};
use obsnum::cover::{is_cover, solve_cover};
use obsnum::geom::{extends_general_position, Point};
use obsnum::graph::{all_pairs, Graph};
use obsnum::order_type::{perturb_scene, scene_signature};
use obsnum::sampling::{random_convex_scene, stream_rng};
use obsnum::search::{
    edge_deletion_chain, min_obstacles_for_placement, obs_upper_bound, partition_lemma_check_faces,
    random_graph_experiment, DeletionOrder, ObsResult, SearchConfig, Trials,
};
use obsnum::tangent::{decode_visibility, derive_pattern_table, encode_tangent};
use obsnum::visibility::{visibility_graph, Scene};
use rand::seq::SliceRandom;
use rand::Rng;

type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn data(name: &str) -> String {
    let mut p = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    p.push("tests/data");
    p.push(name);
    p.to_string_lossy().into_owned()
}

fn cli(args: &[&str]) -> obsnum_cli::Output {
    obsnum_cli::run(args.iter().copied())
}

fn value<'a>(stdout: &'a str, key: &str) -> Option<&'a str> {
    stdout
        .lines()
        .find_map(|l| l.strip_prefix(key).and_then(|r| r.strip_prefix(": ")))
}

fn hexagon_example() -> Check {
    let start = Instant::now();
    let enc = cli(&["encode", &data("hexagon.json")]);
    let vis = cli(&["visibility", &data("hexagon.json")]);
    let elapsed = start.elapsed();
    ensure(enc.code == 0 && vis.code == 0, || {
        format!("exit codes {} {}", enc.code, vis.code)
    })?;
    let seq = value(&enc.stdout, "sequence").unwrap_or("");
    let expected: obsnum::tangent::TangentSequence = "2+1-2-3+1+3-".parse().unwrap();
    let got: obsnum::tangent::TangentSequence = seq.parse().map_err(|e| format!("{e}"))?;
    ensure(got.circular_eq(&expected), || format!("sequence {seq}"))?;
    ensure(value(&vis.stdout, "edges") == Some("{1,2} {1,3}"), || {
        vis.stdout.clone()
    })?;
    ensure(value(&vis.stdout, "blocked {2,3}").is_some(), || {
        vis.stdout.clone()
    })?;
    ensure(elapsed < Duration::from_secs(1), || {
        format!("took {elapsed:?}")
    })?;
    Ok(format!(
        "sequence {seq}, edges {{1,2}} {{1,3}}, {{2,3}} blocked, {} ms",
        elapsed.as_millis()
    ))
}

fn codec_equivalence() -> Check {
    let samples = 10_000;
    // The table is learned from one stream of scenes and checked on another.
    let table = derive_pattern_table(samples, 101).map_err(|e| e.to_string())?;
    ensure(table.is_symmetric(), || "table is not symmetric".into())?;
    let mut mismatches = 0;
    let mut pairs = 0;
    for i in 0..samples {
        let mut rng = stream_rng(202, i);
        let n = rng.gen_range(1..=10);
        let scene = random_convex_scene(&mut rng, n, 1000).map_err(|e| e.to_string())?;
        let seq =
            encode_tangent(scene.points(), &scene.obstacles()[0]).map_err(|e| e.to_string())?;
        pairs += n * (n - 1) / 2;
        match decode_visibility(&seq, &table) {
            Ok(g) if g == visibility_graph(&scene) => {}
            _ => mismatches += 1,
        }
    }
    ensure(mismatches == 0, || {
        format!("{mismatches} mismatching scenes")
    })?;
    Ok(format!(
        "{samples} scenes, {pairs} pairs, 0 mismatches, table single valued with {} patterns",
        table.len()
    ))
}

fn two_obstacle_scene(seed: u64) -> Option<Scene<i64>> {
    let mut rng = stream_rng(seed, 1);
    let n = rng.gen_range(2..=6);
    let first = random_convex_scene(&mut rng, n, 1000).ok()?;
    let second = random_convex_scene(&mut rng, 0, 1000).ok()?;
    let shift = 2500;
    let mut obstacles = first.obstacles().to_vec();
    let lift = rng.gen_range(-300..300);
    obstacles.push(second.obstacles()[0].map(|p| p.translate(&shift, &lift)));
    let mut points = first.points().to_vec();
    points.push(Point::new(
        2 * shift + rng.gen_range(0..500),
        rng.gen_range(-900..900),
    ));
    points.push(Point::new(
        shift + rng.gen_range(-400..400),
        rng.gen_range(1500..2500),
    ));
    Scene::new(points, obstacles).ok()
}

fn order_type_determinism() -> Check {
    let mut checked = 0;
    let mut two = 0;
    let mut seed = 0;
    while checked < 1000 {
        seed += 1;
        let scene = if seed % 2 == 0 {
            let mut rng = stream_rng(seed, 0);
            let n = rng.gen_range(2..=8);
            random_convex_scene(&mut rng, n, 1000).map_err(|e| e.to_string())?
        } else {
            match two_obstacle_scene(seed) {
                Some(s) => {
                    two += 1;
                    s
                }
                None => continue,
            }
        };
        let twin = perturb_scene(&scene, &mut stream_rng(seed, 2), 7, 2000, 300)
            .map_err(|e| e.to_string())?;
        ensure(twin != scene, || {
            format!("seed {seed}: perturbation changed nothing")
        })?;
        ensure(scene_signature(&twin) == scene_signature(&scene), || {
            format!("seed {seed}: signature changed")
        })?;
        ensure(visibility_graph(&twin) == visibility_graph(&scene), || {
            format!("seed {seed}: graphs differ")
        })?;
        checked += 1;
    }
    Ok(format!(
        "{checked} pairs ({two} with two obstacles), 0 mismatches"
    ))
}

fn random_points(rng: &mut impl Rng, n: usize, side: i64) -> Vec<Point<i64>> {
    let mut pts: Vec<Point<i64>> = Vec::new();
    while pts.len() < n {
        let p = Point::new(rng.gen_range(0..side), rng.gen_range(0..side));
        if extends_general_position(&pts, &p) {
            pts.push(p);
        }
    }
    pts
}

fn face_count(pts: Vec<Point<i64>>, g: Graph) -> usize {
    build_arrangement(&Drawing::new(pts, g).unwrap()).face_count()
}

fn arrangement_soundness() -> Check {
    let (mut connected, mut total) = (0, 0);
    for seed in 0..600u64 {
        let mut rng = stream_rng(seed, 3);
        let n = rng.gen_range(1..=12);
        let density = rng.gen_range(0.1..0.9);
        let pts = random_points(&mut rng, n, 200);
        let edges: Vec<_> = all_pairs(n).filter(|_| rng.gen_bool(density)).collect();
        let g = Graph::from_edges(n, edges).unwrap();
        let fs = build_arrangement(&Drawing::new(pts, g).unwrap());
        let chi = fs.euler_characteristic();
        let c = fs.component_count() as i64;
        ensure(chi == 1 + c, || {
            format!("seed {seed}: V - E + F = {chi} with {c} components")
        })?;
        if c == 1 {
            ensure(chi == 2, || {
                format!("seed {seed}: connected drawing has V - E + F = {chi}")
            })?;
            connected += 1;
        }
        total += 1;
    }
    let tri = vec![Point::new(0, 0), Point::new(4, 0), Point::new(1, 3)];
    ensure(face_count(tri, Graph::complete(3)) == 2, || "K3".into())?;
    let some = random_points(&mut stream_rng(9, 9), 7, 100);
    ensure(face_count(some, Graph::empty(7)) == 1, || "edgeless".into())?;
    let square = vec![
        Point::new(0, 0),
        Point::new(5, 0),
        Point::new(5, 5),
        Point::new(0, 5),
    ];
    ensure(face_count(square, Graph::complete(4)) == 5, || {
        "convex K4".into()
    })?;
    Ok(format!(
        "V - E + F = 2 on {connected} connected drawings, 1 + components on all {total}; forced counts 2, 1, 5"
    ))
}

/// Smallest size first, lexicographic within a size.
fn exhaustive_cover(inst: &CoverInstance) -> Option<Vec<usize>> {
    let f = inst.face_count();
    (0..1u32 << f)
        .map(|mask| {
            (0..f)
                .filter(|&i| mask >> i & 1 == 1)
                .collect::<Vec<usize>>()
        })
        .filter(|s| is_cover(inst, s))
        .min_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)))
}

fn cover_exactness() -> Check {
    let mut from_drawings = 0;
    for i in 0..500u64 {
        let mut rng = stream_rng(i, 5);
        let inst = if i % 2 == 0 {
            let faces = rng.gen_range(1..=12);
            let universe = rng.gen_range(0..=14);
            let density = rng.gen_range(0.05..0.6);
            CoverInstance {
                nonedges: (0..universe).map(|k| (k, k + 1)).collect(),
                incidence: (0..faces)
                    .map(|_| (0..universe).filter(|_| rng.gen_bool(density)).collect())
                    .collect(),
            }
        } else {
            let n = rng.gen_range(3..=6);
            let pts = random_points(&mut rng, n, 60);
            let edges: Vec<_> = all_pairs(n).filter(|_| rng.gen_bool(0.5)).collect();
            let fs = build_arrangement(
                &Drawing::new(pts, Graph::from_edges(n, edges).unwrap()).unwrap(),
            );
            if fs.face_count() > 12 {
                continue;
            }
            from_drawings += 1;
            face_nonedge_incidence(&fs)
        };
        let fast = solve_cover(&inst).map(|s| s.faces);
        let slow = exhaustive_cover(&inst);
        ensure(fast == slow, || {
            format!("instance {i}: {fast:?} vs {slow:?}")
        })?;
    }
    Ok(format!(
        "500 instances checked ({from_drawings} from drawings), identical optima and witnesses"
    ))
}

fn search(g: &Graph, seed: u64) -> ObsResult {
    obs_upper_bound(g, &SearchConfig::new(64, seed)).unwrap()
}

/// Witness results of criterion 6, reused by criterion 8.
fn fact_witnesses() -> Result<Vec<(Graph, ObsResult)>, String> {
    let mut out = Vec::new();
    for n in 1..=8 {
        let g = Graph::complete(n);
        let r = search(&g, n as u64);
        ensure(r.upper_bound == 0 && r.certified_exact, || {
            format!("K{n}: {r:?}")
        })?;
        out.push((g, r));
    }
    for n in 2..=6 {
        let g = Graph::empty(n);
        let r = search(&g, 10 + n as u64);
        ensure(r.upper_bound == 1 && r.certified_exact, || {
            format!("empty {n}: {}", r.upper_bound)
        })?;
        out.push((g, r));
    }
    let c4 = Graph::cycle(4);
    let mut k4e = Graph::complete(4);
    k4e.remove(0, 1);
    for (name, g) in [("C4", c4), ("K4 - e", k4e)] {
        let r = search(&g, 20);
        ensure(r.upper_bound == 1 && r.certified_exact, || {
            format!("{name}: {}", r.upper_bound)
        })?;
        out.push((g, r));
    }
    for (g, r) in &out {
        ensure(r.replays(g), || format!("witness for {g} does not replay"))?;
    }
    Ok(out)
}

fn obstacle_number_facts() -> Check {
    let witnesses = fact_witnesses()?;
    // Every incomplete graph on up to 5 vertices, plus random ones up to 8.
    let mut incomplete = 0;
    for n in 2..=5usize {
        let pairs = n * (n - 1) / 2;
        for mask in 0..(1u128 << pairs) - 1 {
            let g = Graph::from_mask(n, mask);
            let r = obs_upper_bound(&g, &SearchConfig::new(8, mask as u64)).unwrap();
            ensure(r.upper_bound >= 1 && r.replays(&g), || {
                format!("{g}: {}", r.upper_bound)
            })?;
            incomplete += 1;
        }
    }
    for seed in 0..60u64 {
        let mut rng = stream_rng(seed, 6);
        let n = rng.gen_range(6..=8);
        let mut g = Graph::complete(n);
        let drop: Vec<_> = all_pairs(n).filter(|_| rng.gen_bool(0.3)).collect();
        let first = *all_pairs(n).collect::<Vec<_>>().choose(&mut rng).unwrap();
        g.remove(first.0, first.1);
        for (i, j) in drop {
            g.remove(i, j);
        }
        let r = obs_upper_bound(&g, &SearchConfig::new(8, seed)).unwrap();
        ensure(r.upper_bound >= 1 && r.replays(&g), || {
            format!("{g}: {}", r.upper_bound)
        })?;
        incomplete += 1;
    }
    Ok(format!(
        "K1..K8 certified 0; empty graphs n = 2..6, C4, K4 - e certified 1; {} witnesses replay; {incomplete} incomplete graphs all >= 1",
        witnesses.len()
    ))
}

fn deletion_chains() -> Check {
    let cfg = |seed| SearchConfig::new(12, seed);
    let mut chains = 0;
    let mut check = |n: usize, order: DeletionOrder, seed: u64| -> Result<(), String> {
        let record =
            edge_deletion_chain(&Graph::empty(n), order, &cfg(seed)).map_err(|e| e.to_string())?;
        let b = record.bounds();
        ensure(b[0] == 0, || format!("chain starts at {}", b[0]))?;
        ensure(record.steps_up_by_at_most_one(), || format!("bounds {b:?}"))?;
        ensure(
            record
                .steps
                .iter()
                .any(|s| s.result.certified_exact && s.result.upper_bound == 1),
            || format!("no certified 1 in {b:?}"),
        )?;
        chains += 1;
        Ok(())
    };
    // Every order of the six edges of K4.
    let mut order: Vec<(usize, usize)> = all_pairs(4).collect();
    let mut count = 0u64;
    loop {
        check(4, DeletionOrder::Explicit(order.clone()), count)?;
        count += 1;
        if !next_permutation(&mut order) {
            break;
        }
    }
    check(5, DeletionOrder::Lexicographic, 0)?;
    for seed in 0..200 {
        check(5, DeletionOrder::Seeded(seed), seed)?;
    }
    Ok(format!(
        "{chains} chains: all {count} orders for n = 4, 201 orders for n = 5; each starts at 0, steps up by at most 1, reaches a certified 1"
    ))
}

fn next_permutation<T: Ord>(v: &mut [T]) -> bool {
    let Some(i) = (1..v.len()).rev().find(|&i| v[i - 1] < v[i]) else {
        return false;
    };
    let j = (i..v.len()).rev().find(|&j| v[j] > v[i - 1]).unwrap();
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

fn partition_arithmetic() -> Check {
    let witnesses = fact_witnesses()?;
    let mut reports = 0;
    for (g, r) in &witnesses {
        let pc = min_obstacles_for_placement(&r.witness.points, g).map_err(|e| e.to_string())?;
        for k in 1..=3 {
            let rep = partition_lemma_check_faces(&pc.faces, &r.witness.faces, k)
                .map_err(|e| e.to_string())?;
            let n = g.n();
            ensure(rep.groups.len() == n / k, || {
                format!("{g}: {} groups for k = {k}", rep.groups.len())
            })?;
            ensure(rep.flagged_count() + r.witness.faces.len() >= n / k, || {
                format!(
                    "{g}, k = {k}: {} flagged, {} obstacles",
                    rep.flagged_count(),
                    r.witness.faces.len()
                )
            })?;
            reports += 1;
        }
    }
    Ok(format!(
        "{reports} witness and group size combinations satisfy flagged >= floor(n/k) - m"
    ))
}

/// `2 h n log2(2n) < C(n,2)` decided by bit length: `x < 2^c` iff `x` has at most `c` bits.
fn direct_threshold(h: u64) -> u64 {
    (1u64..)
        .find(|&n| {
            let pairs = n * (n - 1) / 2;
            BigUint::from(2 * n).pow((2 * h * n) as u32).bits() <= pairs
        })
        .unwrap()
}

fn bounds_calculator() -> Check {
    let out = cli(&["bounds", "--h", "1"]);
    ensure(out.code == 0, || out.stderr.clone())?;
    let printed = value(&out.stdout, "threshold").unwrap_or("");
    ensure(printed == "24", || format!("printed {printed}"))?;
    ensure(direct_threshold(1) == 24, || {
        format!("direct evaluation gives {}", direct_threshold(1))
    })?;
    let mut last = 0;
    let mut seen = Vec::new();
    for h in 1..=10 {
        let t = bounds_threshold(&BoundsQuery::Obstacles { h }).map_err(|e| e.to_string())?;
        ensure(t == direct_threshold(h), || {
            format!("h = {h}: {t} vs {}", direct_threshold(h))
        })?;
        ensure(t > last, || format!("h = {h}: {t} not above {last}"))?;
        last = t;
        seen.push(t.to_string());
    }
    Ok(format!(
        "h = 1 gives 24; h = 1..10 gives {}",
        seen.join(", ")
    ))
}

fn experiment() -> Check {
    let cfg = SearchConfig::new(32, 0);
    let report = random_graph_experiment(3, Trials::Exhaustive, &cfg).map_err(|e| e.to_string())?;
    ensure(
        report.trials() == 8 && report.certified_at_most_one() == 8,
        || {
            format!(
                "{} of {} certified",
                report.certified_at_most_one(),
                report.trials()
            )
        },
    )?;
    let mut lines = Vec::new();
    for (n, trials) in [("4", "40"), ("5", "40")] {
        let args = [
            "random-exp",
            "--n",
            n,
            "--trials",
            trials,
            "--seed",
            "2024",
            "--list",
        ];
        let first = cli(&args);
        let second = cli(&args);
        ensure(first.code == 0, || first.stderr.clone())?;
        ensure(first == second, || format!("n = {n}: runs differ"))?;
        let single = rayon::ThreadPoolBuilder::new()
            .num_threads(1)
            .build()
            .unwrap();
        let third = single.install(|| cli(&args));
        ensure(third == first, || {
            format!("n = {n}: single-threaded run differs")
        })?;
        lines.push(format!(
            "n = {n}: {} certified of {trials}",
            value(&first.stdout, "certified_at_most_one").unwrap_or("?")
        ));
    }
    Ok(format!(
        "n = 3 exhaustive: 8 of 8 certified (fraction 1); {}; reruns byte identical",
        lines.join(", ")
    ))
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("hexagon example", hexagon_example),
        ("codec and geometry agree", codec_equivalence),
        ("order type determines visibility", order_type_determinism),
        ("arrangement soundness", arrangement_soundness),
        ("set cover exactness", cover_exactness),
        ("obstacle number facts", obstacle_number_facts),
        ("deletion chains", deletion_chains),
        ("partition arithmetic", partition_arithmetic),
        ("bounds calculator", bounds_calculator),
        ("small exhaustive experiment", experiment),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
            Err(p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panicked".into()))
        });
        let secs = start.elapsed().as_secs_f64();
        match result {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail} [{secs:.1}s]", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {why} [{secs:.1}s]", i + 1);
            }
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
