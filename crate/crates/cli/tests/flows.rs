//! CLI flows that chain command outputs: verifying and projecting a
//! connection supplied in a bundle.

use std::path::PathBuf;
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
    p.push(format!("hopfglue-flows-{}-{name}", std::process::id()));
    p
}

/// Builds a bundle whose standalone connection is the global
/// sign-section connection `u -> tau (x) tau` on the reference source,
/// then verifies it and extracts its projector through the CLI.
#[test]
fn verify_and_project_a_supplied_connection() {
    let bundle_path = tmp("bundle.json");
    assert!(run(&["emit-e1", "--out", bundle_path.to_str().unwrap()])
        .status
        .success());
    let mut bundle: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&bundle_path).unwrap()).unwrap();
    // tau on six points: +1 on even indices, -1 on odd
    let tau: Vec<String> = (0..6)
        .map(|p| if p % 2 == 0 { "1".into() } else { "-1".into() })
        .collect();
    let one: Vec<String> = vec!["1".into(); 6];
    bundle["connection"] = serde_json::json!({
        "tensors": [
            [[one.clone(), one]],
            [[tau.clone(), tau]]
        ]
    });
    let with_conn = tmp("with-connection.json");
    std::fs::write(&with_conn, serde_json::to_string(&bundle).unwrap()).unwrap();

    let r = run(&["verify-connection", "--in", with_conn.to_str().unwrap()]);
    assert_eq!(
        r.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&r.stderr)
    );
    let report: serde_json::Value = serde_json::from_slice(&r.stdout).unwrap();
    assert_eq!(report["pass"], serde_json::json!(true));
    assert_eq!(report["stages"].as_array().unwrap().len(), 4);

    let r = run(&["chern-galois", "--in", with_conn.to_str().unwrap()]);
    assert_eq!(
        r.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&r.stderr)
    );
    let report: serde_json::Value = serde_json::from_slice(&r.stdout).unwrap();
    let artifacts = &report["stages"][0]["artifacts"];
    assert_eq!(artifacts["size"], serde_json::json!(1));
    assert_eq!(artifacts["idempotent"], serde_json::json!(true));
    assert_eq!(artifacts["coinvariant"], serde_json::json!(true));
}

/// A visiting order that does not start at the requested piece is a
/// usage error.
#[test]
fn build_splitting_rejects_bad_order() {
    let bundle = tmp("order-bundle.json");
    assert!(run(&["emit-e1", "--out", bundle.to_str().unwrap()])
        .status
        .success());
    let r = run(&[
        "build-splitting",
        "--in",
        bundle.to_str().unwrap(),
        "--piece",
        "0",
        "--order",
        "1,0,2",
    ]);
    assert_eq!(r.status.code(), Some(2));
}

/// Partition-basis on a non-distributive family fails with a clear
/// witness (exit 1), and succeeds on a distributive one.
#[test]
fn partition_basis_flow() {
    let bad = tmp("pb-bad.json");
    std::fs::write(
        &bad,
        serde_json::to_string(&serde_json::json!({
            "subspaces": {
                "ambient_dim": 2,
                "members": [[[1, 0]], [[0, 1]], [[1, 1]]]
            }
        }))
        .unwrap(),
    )
    .unwrap();
    let r = run(&["partition-basis", "--in", bad.to_str().unwrap()]);
    assert_eq!(r.status.code(), Some(1));
    let report: serde_json::Value = serde_json::from_slice(&r.stdout).unwrap();
    assert_eq!(report["pass"], serde_json::json!(false));

    let good = tmp("pb-good.json");
    std::fs::write(
        &good,
        serde_json::to_string(&serde_json::json!({
            "subspaces": {
                "ambient_dim": 3,
                "members": [[[1, 0, 0], [0, 1, 0]], [[0, 1, 0], [0, 0, 1]]]
            }
        }))
        .unwrap(),
    )
    .unwrap();
    let r = run(&["partition-basis", "--in", good.to_str().unwrap()]);
    assert_eq!(r.status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_slice(&r.stdout).unwrap();
    // the shared middle axis lands in the block of the full index set
    assert_eq!(
        report["stages"][0]["artifacts"]["blocks"]["0,1"],
        serde_json::json!([["0", "1", "0"]])
    );
}

/// The synthesize command's tensors can be pasted back into a bundle and
/// re-verified.
#[test]
fn synthesized_tensors_round_trip_through_verification() {
    let bundle_path = tmp("rt-bundle.json");
    assert!(run(&["emit-e1", "--out", bundle_path.to_str().unwrap()])
        .status
        .success());
    let synth_out = tmp("rt-synth.json");
    let r = run(&[
        "synthesize-connection",
        "--in",
        bundle_path.to_str().unwrap(),
        "--out",
        synth_out.to_str().unwrap(),
    ]);
    assert_eq!(r.status.code(), Some(0));
    let synth: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&synth_out).unwrap()).unwrap();
    let tensors = synth["stages"][0]["artifacts"]["tensors"].clone();

    let mut bundle: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&bundle_path).unwrap()).unwrap();
    bundle["connection"] = serde_json::json!({ "tensors": tensors });
    let with_conn = tmp("rt-with-connection.json");
    std::fs::write(&with_conn, serde_json::to_string(&bundle).unwrap()).unwrap();
    let r = run(&["verify-connection", "--in", with_conn.to_str().unwrap()]);
    assert_eq!(
        r.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&r.stderr)
    );
}
