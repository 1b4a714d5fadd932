//! CLI acceptance: determinism of the full pipeline (criterion 8) and the
//! exit-code contract.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_hopfglue")
}

fn run(args: &[&str]) -> Output {
    Command::new(bin())
        .args(args)
        .output()
        .expect("binary runs")
}

fn tmp(name: &str) -> PathBuf {
    let mut p = std::env::temp_dir();
    p.push(format!("hopfglue-acceptance-{}-{name}", std::process::id()));
    p
}

fn read(path: &Path) -> Vec<u8> {
    std::fs::read(path).unwrap_or_else(|e| panic!("read {}: {e}", path.display()))
}

/// Criterion 8: two runs of the full pipeline on the reference bundle
/// produce byte-identical reports for every stage.
#[test]
fn criterion_8_determinism() {
    let bundle = tmp("bundle.json");
    let status = run(&["emit-e1", "--out", bundle.to_str().unwrap()]);
    assert!(status.status.success());

    let pipeline: &[(&str, &[&str])] = &[
        ("check-covering", &[]),
        ("check-cocycle", &[]),
        ("build-pullback", &[]),
        ("build-splitting", &["--piece", "0", "--order", "0,2,1"]),
        ("synthesize-connection", &[]),
    ];
    for (cmd, extra) in pipeline {
        let out1 = tmp(&format!("{cmd}-1.json"));
        let out2 = tmp(&format!("{cmd}-2.json"));
        for out in [&out1, &out2] {
            let mut args = vec![*cmd, "--in", bundle.to_str().unwrap()];
            args.extend_from_slice(extra);
            args.extend_from_slice(&["--out", out.to_str().unwrap()]);
            let r = run(&args);
            assert!(
                r.status.success(),
                "{cmd} failed: {}",
                String::from_utf8_lossy(&r.stderr)
            );
        }
        assert_eq!(
            read(&out1),
            read(&out2),
            "{cmd} reports must be byte-identical"
        );
    }

    // partition-basis on its own bundle, twice
    let subspaces = tmp("subspaces.json");
    std::fs::write(
        &subspaces,
        serde_json::to_string(&serde_json::json!({
            "subspaces": {
                "ambient_dim": 4,
                "members": [
                    [[1, 0, 0, 0], [0, 1, 0, 0]],
                    [[0, 1, 0, 0], [0, 0, 1, 0]]
                ]
            }
        }))
        .unwrap(),
    )
    .unwrap();
    let pb1 = tmp("pb-1.json");
    let pb2 = tmp("pb-2.json");
    for out in [&pb1, &pb2] {
        let r = run(&[
            "partition-basis",
            "--in",
            subspaces.to_str().unwrap(),
            "--out",
            out.to_str().unwrap(),
        ]);
        assert!(r.status.success(), "{}", String::from_utf8_lossy(&r.stderr));
    }
    assert_eq!(read(&pb1), read(&pb2));

    // the sphere example, twice, byte-identical as well
    let s1 = tmp("sphere-1.json");
    let s2 = tmp("sphere-2.json");
    for out in [&s1, &s2] {
        let r = run(&["example-s2rt", "--out", out.to_str().unwrap()]);
        assert!(r.status.success());
    }
    assert_eq!(read(&s1), read(&s2));

    // and the emitted bundle itself is deterministic
    let b2 = tmp("bundle-2.json");
    assert!(run(&["emit-e1", "--out", b2.to_str().unwrap()])
        .status
        .success());
    assert_eq!(read(&bundle), read(&b2));

    println!("[PASS] criterion 8: full pipeline reports are byte-identical across runs");
}

#[test]
fn exit_codes_follow_the_contract() {
    let bundle = tmp("codes-bundle.json");
    assert!(run(&["emit-e1", "--out", bundle.to_str().unwrap()])
        .status
        .success());

    // malformed JSON -> 2
    let bad = tmp("bad.json");
    std::fs::write(&bad, b"{ not json").unwrap();
    let r = run(&["check-covering", "--in", bad.to_str().unwrap()]);
    assert_eq!(r.status.code(), Some(2));

    // unknown command -> 2
    let r = run(&["frobnicate"]);
    assert_eq!(r.status.code(), Some(2));

    // a failing check -> 1: duplicate one covering map so kernels
    // intersect nontrivially
    let text = std::fs::read_to_string(&bundle).unwrap();
    let mut v: serde_json::Value = serde_json::from_str(&text).unwrap();
    let maps = v["covering_maps"].as_array().unwrap().clone();
    let pieces = v["pieces"].as_array().unwrap().clone();
    let conns = v["connections"].as_array().unwrap().clone();
    v["covering_maps"] = serde_json::json!([maps[0], maps[0]]);
    v["pieces"] = serde_json::json!([pieces[0], pieces[0]]);
    v["connections"] = serde_json::json!([conns[0], conns[0]]);
    let dup = tmp("dup.json");
    std::fs::write(&dup, serde_json::to_string(&v).unwrap()).unwrap();
    let r = run(&["check-covering", "--in", dup.to_str().unwrap()]);
    assert_eq!(r.status.code(), Some(1));
    let report: serde_json::Value = serde_json::from_slice(&r.stdout).unwrap();
    assert_eq!(report["pass"], serde_json::json!(false));

    // cutoff too small -> 2
    let r = run(&["example-s2rt", "--cutoff", "3"]);
    assert_eq!(r.status.code(), Some(2));

    // non-co-commutative Hopf algebra -> 4 on synthesis
    let six = non_cocommutative_bundle();
    let path = tmp("s3.json");
    std::fs::write(&path, six).unwrap();
    let r = run(&["synthesize-connection", "--in", path.to_str().unwrap()]);
    assert_eq!(
        r.status.code(),
        Some(4),
        "stderr: {}",
        String::from_utf8_lossy(&r.stderr)
    );
}

#[test]
fn verify_connection_reports_the_failing_axiom() {
    // a hand-written failing connection: l(u) = 1 (x) 1 on the regular
    // two-dimensional comodule
    let bundle = serde_json::json!({
        "hopf": z2_hopf_json(),
        "source": {
            "dim": 2,
            "mult": [[[1, 0], [0, 1]], [[0, 1], [1, 0]]],
            "unit": [1, 0],
            "coaction": [[1, 0], [0, 0], [0, 0], [0, 1]],
        },
        "connection": {
            "tensors": [
                [[[1, 0], [1, 0]]],
                [[[1, 0], [1, 0]]]
            ]
        }
    });
    let path = tmp("failing-connection.json");
    std::fs::write(&path, serde_json::to_string(&bundle).unwrap()).unwrap();
    let r = run(&["verify-connection", "--in", path.to_str().unwrap()]);
    assert_eq!(r.status.code(), Some(1));
    let report: serde_json::Value = serde_json::from_slice(&r.stdout).unwrap();
    let failing: Vec<&str> = report["stages"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|s| s["pass"] == serde_json::json!(false))
        .map(|s| s["stage"].as_str().unwrap())
        .collect();
    assert!(failing.contains(&"right-colinearity"));

    // and the expected-file comparison of the sphere example
    let eq612 = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures/eq612.json");
    let r = run(&[
        "example-s2rt",
        "--method",
        "1",
        "--expect",
        eq612.to_str().unwrap(),
    ]);
    assert_eq!(r.status.code(), Some(0));
}

fn z2_hopf_json() -> serde_json::Value {
    serde_json::json!({
        "dim": 2,
        "mult": [[[1, 0], [0, 1]], [[0, 1], [1, 0]]],
        "unit": [1, 0],
        "comult": [[1, 0], [0, 0], [0, 0], [0, 1]],
        "counit": [1, 1],
        "antipode": [[1, 0], [0, 1]],
    })
}

/// A bundle whose Hopf algebra is the function algebra on the symmetric
/// group on three letters (not co-commutative), with the trivial coaction
/// so everything else is well-formed.
fn non_cocommutative_bundle() -> String {
    let perms: Vec<[usize; 3]> = vec![
        [0, 1, 2],
        [1, 0, 2],
        [0, 2, 1],
        [2, 1, 0],
        [1, 2, 0],
        [2, 0, 1],
    ];
    let compose = |p: &[usize; 3], q: &[usize; 3]| [p[q[0]], p[q[1]], p[q[2]]];
    let index = |r: [usize; 3]| perms.iter().position(|p| *p == r).unwrap();
    let n = 6usize;
    // function Hopf algebra on the indicator basis
    let mut mult = vec![vec![vec![0i64; n]; n]; n];
    for (i, row) in mult.iter_mut().enumerate() {
        row[i][i] = 1;
    }
    let unit = vec![1i64; n];
    let mut comult = vec![vec![0i64; n]; n * n];
    for a in 0..n {
        for b in 0..n {
            let g = index(compose(&perms[a], &perms[b]));
            comult[a * n + b][g] = 1;
        }
    }
    let mut counit = vec![0i64; n];
    counit[0] = 1;
    let mut antipode = vec![vec![0i64; n]; n];
    for a in 0..n {
        let inv = (0..n)
            .find(|&b| index(compose(&perms[a], &perms[b])) == 0)
            .unwrap();
        antipode[inv][a] = 1;
    }
    // source = the function algebra itself with the trivial coaction
    // e_i -> e_i (x) sum_g delta_g, and two identity "pieces": kernels
    // are zero, the covering checks pass, and the co-commutativity gate
    // is reached
    let mut coaction = vec![vec![0i64; n]; n * n];
    for i in 0..n {
        for g in 0..n {
            coaction[i * n + g][i] = 1;
        }
    }
    let identity: Vec<Vec<i64>> = (0..n)
        .map(|i| (0..n).map(|j| i64::from(i == j)).collect())
        .collect();
    let source = serde_json::json!({
        "dim": n, "mult": mult.clone(), "unit": unit.clone(), "coaction": coaction,
    });
    let tensors: Vec<serde_json::Value> = (0..n)
        .map(|_| serde_json::json!([[unit.clone(), unit.clone()]]))
        .collect();
    let bundle = serde_json::json!({
        "hopf": {
            "dim": n, "mult": mult, "unit": unit,
            "comult": comult, "counit": counit, "antipode": antipode,
        },
        "source": source.clone(),
        "pieces": [source.clone(), source],
        "covering_maps": [identity.clone(), identity],
        "connections": [
            { "tensors": tensors.clone() },
            { "tensors": tensors }
        ],
    });
    serde_json::to_string(&bundle).unwrap()
}
