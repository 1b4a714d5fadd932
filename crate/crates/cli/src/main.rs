//! Command-line verifier for glued comodule algebras: covering and
//! cocycle checks, multi-pullback construction, partitioned bases,
//! splitting and strong-connection synthesis, projector extraction, and
//! the built-in quantum-sphere reproduction.
//!
//! Exit codes: 0 all requested checks pass; 1 a check fails; 2 malformed
//! input or usage; 3 undetermined (lattice closure hit the cap); 4 the
//! co-commutativity precondition of the synthesis formula fails.

mod commands;
mod dto;
mod e1;
mod report;

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use commands::{CmdError, Resolved};
use dto::Bundle;

const USAGE: &str = "usage:
  hopfglue check-covering --in <bundle.json> [--out <report.json>] [--cap <n>]
  hopfglue check-cocycle --in <bundle.json> [--out <report.json>] [--cap <n>]
  hopfglue build-pullback --in <bundle.json> [--out <report.json>]
  hopfglue partition-basis --in <bundle.json> [--out <report.json>] [--cap <n>]
  hopfglue build-splitting --in <bundle.json> [--out <report.json>] [--piece <i>] [--order <i,j,k>]
  hopfglue synthesize-connection --in <bundle.json> [--out <report.json>]
  hopfglue verify-connection --in <bundle.json> [--out <report.json>]
  hopfglue chern-galois --in <bundle.json> [--out <report.json>]
  hopfglue example-s2rt [--method <1|2|both>] [--cutoff <n>] [--expect <file.json>] [--report <report.json>]
  hopfglue emit-e1 --out <bundle.json>";

struct Cli {
    command: String,
    input: Option<PathBuf>,
    output: Option<PathBuf>,
    cap: Option<usize>,
    piece: Option<usize>,
    order: Option<Vec<usize>>,
    method: Option<String>,
    cutoff: Option<usize>,
    expect: Option<PathBuf>,
}

fn parse_args(args: &[String]) -> Result<Cli, String> {
    let mut iter = args.iter();
    let command = iter.next().ok_or("missing command")?.clone();
    let mut cli = Cli {
        command,
        input: None,
        output: None,
        cap: None,
        piece: None,
        order: None,
        method: None,
        cutoff: None,
        expect: None,
    };
    while let Some(flag) = iter.next() {
        let mut value = || {
            iter.next()
                .cloned()
                .ok_or_else(|| format!("flag {flag} needs a value"))
        };
        match flag.as_str() {
            "--in" => cli.input = Some(PathBuf::from(value()?)),
            "--out" | "--report" => cli.output = Some(PathBuf::from(value()?)),
            "--cap" => cli.cap = Some(value()?.parse().map_err(|_| "bad --cap")?),
            "--piece" => cli.piece = Some(value()?.parse().map_err(|_| "bad --piece")?),
            "--order" => {
                let list = value()?;
                let parsed: Result<Vec<usize>, _> =
                    list.split(',').map(|p| p.trim().parse()).collect();
                cli.order = Some(parsed.map_err(|_| "bad --order")?);
            }
            "--method" => cli.method = Some(value()?),
            "--cutoff" => cli.cutoff = Some(value()?.parse().map_err(|_| "bad --cutoff")?),
            "--expect" => cli.expect = Some(PathBuf::from(value()?)),
            other => return Err(format!("unknown flag {other}")),
        }
    }
    Ok(cli)
}

fn load_bundle(cli: &Cli) -> Result<Bundle, CmdError> {
    let path = cli
        .input
        .as_ref()
        .ok_or_else(|| CmdError::schema("--in <bundle.json> is required"))?;
    let text = fs::read_to_string(path)
        .map_err(|e| CmdError::schema(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CmdError::schema(format!("invalid bundle JSON: {e}")))
}

fn resolve(cli: &Cli, bundle: Option<&Bundle>) -> Resolved {
    let opts = bundle.map(|b| &b.options);
    Resolved {
        cap: cli
            .cap
            .or(opts.and_then(|o| o.cap))
            .unwrap_or(hopfglue_core::lattice::DEFAULT_CLOSURE_CAP),
        piece: cli.piece.or(opts.and_then(|o| o.piece)).unwrap_or(0),
        order: cli.order.clone().or(opts.and_then(|o| o.order.clone())),
        method: cli
            .method
            .clone()
            .or(opts.and_then(|o| o.method.clone()))
            .unwrap_or_else(|| "both".to_string()),
        cutoff: cli.cutoff.or(opts.and_then(|o| o.cutoff)).unwrap_or(16),
    }
}

fn emit(report: &report::Report, output: Option<&PathBuf>) -> Result<(), CmdError> {
    let text = report.to_json();
    match output {
        Some(path) => fs::write(path, text)
            .map_err(|e| CmdError::schema(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(cli: &Cli) -> Result<report::Report, CmdError> {
    match cli.command.as_str() {
        "check-covering" => {
            let bundle = load_bundle(cli)?;
            commands::cmd_check_covering(&bundle, &resolve(cli, Some(&bundle)))
        }
        "check-cocycle" => {
            let bundle = load_bundle(cli)?;
            commands::cmd_check_cocycle(&bundle, &resolve(cli, Some(&bundle)))
        }
        "build-pullback" => {
            let bundle = load_bundle(cli)?;
            commands::cmd_build_pullback(&bundle, &resolve(cli, Some(&bundle)))
        }
        "partition-basis" => {
            let bundle = load_bundle(cli)?;
            commands::cmd_partition_basis(&bundle, &resolve(cli, Some(&bundle)))
        }
        "build-splitting" => {
            let bundle = load_bundle(cli)?;
            commands::cmd_build_splitting(&bundle, &resolve(cli, Some(&bundle)))
        }
        "synthesize-connection" => {
            let bundle = load_bundle(cli)?;
            commands::cmd_synthesize(&bundle, &resolve(cli, Some(&bundle)))
        }
        "verify-connection" => {
            let bundle = load_bundle(cli)?;
            commands::cmd_verify_connection(&bundle, &resolve(cli, Some(&bundle)))
        }
        "chern-galois" => {
            let bundle = load_bundle(cli)?;
            commands::cmd_chern_galois(&bundle, &resolve(cli, Some(&bundle)))
        }
        "example-s2rt" => {
            let expected = match &cli.expect {
                Some(path) => Some(fs::read_to_string(path).map_err(|e| {
                    CmdError::schema(format!("cannot read {}: {e}", path.display()))
                })?),
                None => None,
            };
            commands::cmd_example_sphere(&resolve(cli, None), expected.as_deref())
        }
        other => Err(CmdError::schema(format!(
            "unknown command {other:?}\n{USAGE}"
        ))),
    }
}

fn main() -> ExitCode {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let cli = match parse_args(&args) {
        Ok(cli) => cli,
        Err(msg) => {
            eprintln!("{msg}\n{USAGE}");
            return ExitCode::from(2);
        }
    };
    if cli.command == "emit-e1" {
        let Some(path) = cli.output.as_ref() else {
            eprintln!("emit-e1 requires --out <bundle.json>");
            return ExitCode::from(2);
        };
        return match fs::write(path, e1::e1_bundle_json()) {
            Ok(()) => ExitCode::SUCCESS,
            Err(e) => {
                eprintln!("cannot write {}: {e}", path.display());
                ExitCode::from(2)
            }
        };
    }
    match run(&cli) {
        Ok(report) => {
            if let Err(e) = emit(&report, cli.output.as_ref()) {
                eprintln!("{}", e.message);
                return ExitCode::from(2);
            }
            if report.pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("{}", e.message);
            ExitCode::from(e.code.clamp(0, 255) as u8)
        }
    }
}
