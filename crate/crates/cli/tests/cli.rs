use std::process::{Command, Output};

use qgraph_cli::run::read_csv;

fn qgraph(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qgraph"))
        .args(args)
        .output()
        .expect("spawn qgraph")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

#[test]
fn single_arc_flow_from_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("arc.txt");
    std::fs::write(&path, "N 2 1 0 1 5\n0 1 5\n").unwrap();
    let out = qgraph(&["run", "flow", "--file", path.to_str().unwrap(), "--verify"]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    assert!(stdout(&out).contains("answer    5"));
}

#[test]
fn generated_examples() {
    let csv = tempfile::NamedTempFile::new().unwrap();
    let out = qgraph(&[
        "run",
        "bipartite",
        "--gen",
        "k33",
        "--model",
        "adjacency",
        "--verify",
        "--csv",
        csv.path().to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let rec = &read_csv(std::fs::File::open(csv.path()).unwrap()).unwrap()[0];
    assert_eq!((rec.answer, rec.oracle), (3, Some(3)));
    assert!(rec.phases <= 4);

    let out = qgraph(&["run", "general", "--gen", "petersen", "--verify", "--json"]);
    assert!(out.status.success());
    let json: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(json["record"]["answer"], 5);
}

#[test]
fn exit_codes() {
    // algorithm needs a network
    assert_eq!(
        qgraph(&["run", "flow", "--gen", "k33"]).status.code(),
        Some(3)
    );
    // odd cycle is not bipartite
    assert_eq!(
        qgraph(&["run", "bipartite", "--gen", "cycle:5"])
            .status
            .code(),
        Some(3)
    );
    assert_eq!(
        qgraph(&["run", "general", "--gen", "wheel:5"])
            .status
            .code(),
        Some(3)
    );
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.txt");
    std::fs::write(&path, "G 3 2 1\n0 1\n").unwrap();
    assert_eq!(
        qgraph(&["run", "layers", "--file", path.to_str().unwrap()])
            .status
            .code(),
        Some(3)
    );
}

#[test]
fn sweep_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let spec = dir.path().join("sweep.txt");
    std::fs::write(
        &spec,
        "algo = layers\nmodel = list\nsizes = 32, 64, 128\nm_per_n = 3\nseeds = 2\n",
    )
    .unwrap();
    let run = |name: &str, jobs: &str| {
        let out_dir = dir.path().join(name);
        let out = qgraph(&[
            "sweep",
            "--spec",
            spec.to_str().unwrap(),
            "--out",
            out_dir.to_str().unwrap(),
            "--jobs",
            jobs,
        ]);
        assert!(
            out.status.success(),
            "{}",
            String::from_utf8_lossy(&out.stderr)
        );
        (
            std::fs::read(out_dir.join("runs.csv")).unwrap(),
            std::fs::read(out_dir.join("fit.json")).unwrap(),
        )
    };
    let a = run("a", "1");
    assert_eq!(a, run("b", "4"));
    let rows = read_csv(&a.0[..]).unwrap();
    assert_eq!(rows.len(), 6);
    assert!(rows
        .windows(2)
        .all(|w| (w[0].n, w[0].seed) <= (w[1].n, w[1].seed)));

    std::fs::write(&spec, "algo = layers\nsizes = 32, 64\n").unwrap();
    let out = qgraph(&[
        "sweep",
        "--spec",
        spec.to_str().unwrap(),
        "--out",
        dir.path().join("c").to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(3));
}
