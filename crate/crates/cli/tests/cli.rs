use std::path::PathBuf;
use std::process::Command;

fn data(name: &str) -> String {
    let mut p = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    p.push("tests/data");
    p.push(name);
    p.to_string_lossy().into_owned()
}

fn obsnum(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_obsnum"))
        .args(args)
        .output()
        .expect("binary runs");
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

fn value<'a>(stdout: &'a str, key: &str) -> &'a str {
    stdout
        .lines()
        .find_map(|l| l.strip_prefix(key).and_then(|r| r.strip_prefix(": ")))
        .unwrap_or_else(|| panic!("no {key} in\n{stdout}"))
}

#[test]
fn encode_hexagon() {
    let (code, out, err) = obsnum(&["encode", &data("hexagon.json")]);
    assert_eq!(code, 0);
    assert_eq!(value(&out, "sequence"), "2+1-2-3+1+3-");
    assert!(err.contains("collinear"));
    let (code, _, err) = obsnum(&["--strict", "encode", &data("hexagon.json")]);
    assert_eq!(code, 1);
    assert!(err.contains("general position"));
}

#[test]
fn visibility_hexagon() {
    let (code, out, _) = obsnum(&["visibility", &data("hexagon.json")]);
    assert_eq!(code, 0);
    assert_eq!(value(&out, "edges"), "{1,2} {1,3}");
    assert_eq!(value(&out, "blocked {2,3}"), "obstacles 1");
}

#[test]
fn visibility_document_round_trips() {
    let (_, doc, _) = obsnum(&["visibility", "--json", &data("hexagon.json")]);
    let dir = std::env::temp_dir().join(format!("obsnum-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("hexagon_graph.json");
    std::fs::write(&path, &doc).unwrap();
    let (code, out, _) = obsnum(&["validate", path.to_str().unwrap()]);
    assert_eq!(code, 0, "{out}");
    assert_eq!(value(&out, "representation"), "valid");
    let (_, again, _) = obsnum(&["visibility", "--json", path.to_str().unwrap()]);
    assert_eq!(again, doc);
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn validate_rejects_wrong_graph() {
    let dir = std::env::temp_dir().join(format!("obsnum-cli-bad-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("wrong.json");
    std::fs::write(
        &path,
        r#"{"points": [[-2, 0], [4, 6], [6, -5]],
            "obstacles": [[[0, 0], [2, 2], [5, 2], [7, 0], [5, -2], [2, -2]]],
            "graph": {"n": 3, "edges": [[1, 2], [1, 3], [2, 3]]}}"#,
    )
    .unwrap();
    let (code, out, err) = obsnum(&["validate", path.to_str().unwrap()]);
    assert_eq!(code, 1);
    assert_eq!(value(&out, "wrongly_absent"), "{2,3}");
    assert!(err.contains("does not represent"));
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn obs_search_complete_graph() {
    let (code, out, _) = obsnum(&["obs-search", &data("k4.json"), "--seed", "5"]);
    assert_eq!(code, 0);
    assert_eq!(value(&out, "upper_bound"), "0");
    assert_eq!(value(&out, "certified"), "true");
}

#[test]
fn obs_search_uses_given_placement() {
    let (code, out, _) = obsnum(&[
        "obs-search",
        &data("c4_drawing.json"),
        "--seed",
        "1",
        "--budget",
        "4",
    ]);
    assert_eq!(code, 0);
    assert_eq!(value(&out, "upper_bound"), "1");
    assert_eq!(value(&out, "source"), "file");
}

#[test]
fn bounds_values() {
    let (code, out, _) = obsnum(&["bounds", "--h", "1"]);
    assert_eq!(code, 0);
    assert_eq!(value(&out, "threshold"), "24");
    let (_, out, _) = obsnum(&["bounds", "--s", "3"]);
    assert!(value(&out, "mode").ends_with("for the supplied constant 1"));
    assert_eq!(value(&out, "threshold"), "11");
    let (code, _, _) = obsnum(&["bounds", "--h", "1", "--s", "3"]);
    assert_eq!(code, 1);
    let (code, _, err) = obsnum(&["bounds", "--s", "3", "--c", "0"]);
    assert_eq!(code, 1);
    assert!(err.contains("positive"));
}

#[test]
fn drawing_commands() {
    let f = data("c4_drawing.json");
    let (code, out, _) = obsnum(&["faces", &f]);
    assert_eq!(code, 0);
    assert_eq!(value(&out, "faces"), "2");
    assert_eq!(value(&out, "euler"), "2");
    let (_, out, _) = obsnum(&["incidence", &f]);
    assert_eq!(value(&out, "nonedge {1,3}"), "faces 1");
    let (_, out, _) = obsnum(&["cover", &f]);
    assert_eq!(value(&out, "cover_size"), "1");
    let (code, out, _) = obsnum(&["partition-check", &f, "--k", "1"]);
    assert_eq!(code, 0);
    assert_eq!(value(&out, "count_holds"), "true");
}

#[test]
fn table_and_decode() {
    let (code, table, _) = obsnum(&["derive-table", "--seed", "3", "--samples", "400"]);
    assert_eq!(code, 0);
    assert!(table.contains("# symmetric true"));
    let dir = std::env::temp_dir().join(format!("obsnum-cli-table-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("table.txt");
    std::fs::write(&path, &table).unwrap();
    let (code, out, _) = obsnum(&["decode", "2+1-2-3+1+3-", "--table", path.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(value(&out, "edges"), "{1,2} {1,3}");
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn stochastic_commands_need_seed_and_repeat() {
    for args in [
        vec!["obs-search", "K4"],
        vec!["chain", "--n", "4"],
        vec!["random-exp", "--n", "4", "--trials", "3"],
        vec!["derive-table"],
    ] {
        let (code, _, err) = obsnum(&args);
        assert_eq!(code, 1, "{args:?}");
        assert!(err.contains("--seed"));
    }
    let args = [
        "random-exp",
        "--n",
        "5",
        "--trials",
        "12",
        "--seed",
        "9",
        "--list",
    ];
    let first = obsnum(&args);
    assert_eq!(first.0, 0);
    assert_eq!(obsnum(&args), first);
    let chain = ["chain", "--n", "5", "--seed", "4", "--placements", "12"];
    let first = obsnum(&chain);
    assert_eq!(value(&first.1, "steps_up_by_at_most_one"), "true");
    assert_eq!(obsnum(&chain), first);
}

#[test]
fn errors_are_reported() {
    let (code, _, err) = obsnum(&["frobnicate"]);
    assert_eq!(code, 1);
    assert!(err.contains("unrecognized subcommand"));
    let (code, _, err) = obsnum(&["visibility", "/nonexistent/scene.json"]);
    assert_eq!(code, 1);
    assert!(err.contains("cannot read"));
    let (code, out, _) = obsnum(&["--help"]);
    assert_eq!(code, 0);
    assert!(out.contains("partition-check"));
}

#[test]
fn exhaustive_experiment() {
    let (code, out, _) = obsnum(&["random-exp", "--n", "3", "--exhaustive", "--seed", "0"]);
    assert_eq!(code, 0);
    assert_eq!(value(&out, "trials"), "8");
    assert_eq!(value(&out, "fraction_certified"), "1");
}
