//! Subcommand implementations.
//!
//! All commands are pure functions from a parsed bundle and options to a
//! deterministic report; failures of mathematical checks are report
//! content (process exit 1), while malformed input, undetermined closures
//! and the co-commutativity precondition map to dedicated exit codes.

use std::collections::BTreeMap;

use serde_json::{json, Value};

use hopfglue_core::connection::{
    chern_galois_projector, synthesize_from_covering, verify_connection,
};
use hopfglue_core::hopf::is_colinear;
use hopfglue_core::lattice::{partitioned_basis_capped, SubspaceFamily};
use hopfglue_core::pullback::{
    canonical_gluing, check_cocycle, check_covering_morphisms, multipullback_comodule,
    CocycleReport, ComoduleGluingFamily,
};
use hopfglue_core::splitting::{covering_piece_section, covering_pipeline};
use hopfglue_core::toeplitz;
use hopfglue_core::Error as CoreError;

use crate::dto::{build_covering, Bundle};
use crate::report::{algebra_json, matrix_json, vector_json, Metadata, Report};

/// Exit taxonomy: 2 malformed input, 3 undetermined (closure cap),
/// 4 co-commutativity precondition, 1 everything else that prevents a
/// verdict.
pub struct CmdError {
    pub code: i32,
    pub message: String,
}

impl CmdError {
    pub fn schema(message: impl Into<String>) -> Self {
        CmdError {
            code: 2,
            message: message.into(),
        }
    }
}

impl From<CoreError> for CmdError {
    fn from(e: CoreError) -> Self {
        let code = match &e {
            CoreError::DimensionMismatch(_)
            | CoreError::Invalid(_)
            | CoreError::IndexOutOfRange(_)
            | CoreError::InvalidGroupTable(_)
            | CoreError::OutOfRange(_)
            | CoreError::CutoffTooSmall(_) => 2,
            CoreError::ClosureIncomplete(_) => 3,
            CoreError::NotCocommutative => 4,
            _ => 1,
        };
        CmdError {
            code,
            message: e.to_string(),
        }
    }
}

pub struct Resolved {
    pub cap: usize,
    pub piece: usize,
    pub order: Option<Vec<usize>>,
    pub method: String,
    pub cutoff: usize,
}

impl Resolved {
    pub fn metadata(&self) -> Metadata {
        let mut m = Metadata::new(self.cap);
        m.method = Some(self.method.clone());
        m.cutoff = Some(self.cutoff);
        m
    }
}

pub fn cmd_check_covering(bundle: &Bundle, opts: &Resolved) -> Result<Report, CmdError> {
    let built = build_covering(bundle).map_err(CmdError::schema)?;
    let mut report = Report::new("check-covering", Metadata::new(opts.cap));

    let mut witnesses = Vec::new();
    for (i, (piece, map)) in built.pieces.iter().zip(&built.maps).enumerate() {
        if !map.is_surjective() {
            witnesses.push(format!("map {i} is not surjective"));
        }
        if !is_colinear(&built.source, piece, &map.matrix) {
            witnesses.push(format!("map {i} is not colinear"));
        }
    }
    report.stage(
        "surjective-colinear-maps",
        witnesses.is_empty(),
        witnesses,
        Value::Null,
    );

    let covering = check_covering_morphisms(&built.maps, opts.cap)?;
    if covering.undetermined() {
        return Err(CmdError {
            code: 3,
            message: format!(
                "lattice closure exceeded the cap at {} elements",
                covering.closure_size
            ),
        });
    }
    let mut witnesses = Vec::new();
    if covering.kernel_intersection_dim != 0 {
        witnesses.push(format!(
            "kernel intersection has dimension {}",
            covering.kernel_intersection_dim
        ));
        let kernels: Vec<_> = built.maps.iter().map(|m| m.matrix.kernel()).collect();
        for i in 0..kernels.len() {
            for j in (i + 1)..kernels.len() {
                if kernels[i] == kernels[j] && !kernels[i].is_zero() {
                    witnesses.push(format!("kernels {i} and {j} coincide"));
                }
            }
        }
    }
    if covering.distributive != Some(true) {
        if let Some((a, b, c)) = covering.counterexample {
            witnesses.push(format!(
                "distributivity fails at closure triple ({a}, {b}, {c})"
            ));
        }
    }
    report.stage(
        "covering-conditions",
        covering.pass(),
        witnesses,
        json!({
            "closure_size": covering.closure_size,
            "kernel_intersection_dim": covering.kernel_intersection_dim,
        }),
    );
    Ok(report)
}

fn gluing_from_bundle(bundle: &Bundle) -> Result<ComoduleGluingFamily, CmdError> {
    if let Some(gdto) = &bundle.gluing {
        let hopf = bundle
            .hopf
            .as_ref()
            .ok_or_else(|| CmdError::schema("bundle is missing \"hopf\""))?
            .build()
            .map_err(CmdError::schema)?;
        return gdto.build(&hopf).map_err(CmdError::schema);
    }
    // fall back to the canonical gluing of a covering
    let built = build_covering(bundle).map_err(CmdError::schema)?;
    let covering = built.into_family()?;
    Ok(canonical_gluing(&covering)?.family)
}

fn cocycle_stages(report: &mut Report, cocycle: &CocycleReport) {
    let witness_line = |f: &hopfglue_core::pullback::CocycleFailure| {
        format!(
            "triple ({}, {}, {}), witness {:?}",
            f.i, f.j, f.k, f.witness
        )
    };
    report.stage(
        "cocycle-kernel-images",
        cocycle.condition1_failures.is_empty(),
        cocycle
            .condition1_failures
            .iter()
            .map(witness_line)
            .collect(),
        Value::Null,
    );
    report.stage(
        "cocycle-composition",
        cocycle.condition2_failures.is_empty(),
        cocycle
            .condition2_failures
            .iter()
            .map(witness_line)
            .collect(),
        json!({ "triples_checked": cocycle.triples_checked }),
    );
}

pub fn cmd_check_cocycle(bundle: &Bundle, opts: &Resolved) -> Result<Report, CmdError> {
    let family = gluing_from_bundle(bundle)?;
    let mut report = Report::new("check-cocycle", Metadata::new(opts.cap));
    let cocycle = check_cocycle(&family.base)?;
    cocycle_stages(&mut report, &cocycle);
    Ok(report)
}

pub fn cmd_build_pullback(bundle: &Bundle, opts: &Resolved) -> Result<Report, CmdError> {
    let family = gluing_from_bundle(bundle)?;
    let mut report = Report::new("build-pullback", Metadata::new(opts.cap));
    let (mp, total_comodule) = multipullback_comodule(&family)?;
    let surjective: Vec<bool> = mp.projections.iter().map(|p| p.is_surjective()).collect();
    report.stage(
        "projection-surjectivity",
        surjective.iter().all(|&b| b),
        surjective
            .iter()
            .enumerate()
            .filter(|(_, &b)| !b)
            .map(|(i, _)| format!("projection {i} is not surjective"))
            .collect(),
        Value::Null,
    );
    report.stage(
        "total-algebra",
        true,
        Vec::new(),
        json!({
            "total": algebra_json(&mp.total),
            "coaction": matrix_json(&total_comodule.coaction),
            "embedding": matrix_json(&mp.embedding),
            "projections": mp.projections.iter().map(|p| matrix_json(&p.matrix)).collect::<Vec<_>>(),
        }),
    );
    Ok(report)
}

pub fn cmd_partition_basis(bundle: &Bundle, opts: &Resolved) -> Result<Report, CmdError> {
    let subspaces = bundle
        .subspaces
        .as_ref()
        .ok_or_else(|| CmdError::schema("bundle is missing \"subspaces\""))?
        .build()
        .map_err(CmdError::schema)?;
    let ambient = bundle.subspaces.as_ref().expect("checked").ambient_dim;
    let family = SubspaceFamily::new(ambient, subspaces)?;
    let mut report = Report::new("partition-basis", Metadata::new(opts.cap));
    match partitioned_basis_capped(&family, opts.cap) {
        Ok(pb) => {
            let mut blocks = BTreeMap::new();
            for (gamma, block) in &pb.blocks {
                let key = gamma
                    .iter()
                    .map(usize::to_string)
                    .collect::<Vec<_>>()
                    .join(",");
                blocks.insert(key, Value::Array(block.iter().map(vector_json).collect()));
            }
            report.stage(
                "partitioned-basis",
                true,
                Vec::new(),
                json!({ "ambient_dim": pb.ambient_dim, "blocks": blocks }),
            );
        }
        Err(CoreError::NotDistributive) => {
            report.stage(
                "partitioned-basis",
                false,
                vec!["family does not generate a distributive lattice".into()],
                Value::Null,
            );
        }
        Err(e) => return Err(e.into()),
    }
    Ok(report)
}

fn covering_with_connections(
    bundle: &Bundle,
) -> Result<
    (
        hopfglue_core::pullback::CoveringFamily,
        Vec<hopfglue_core::connection::StrongConnection>,
    ),
    CmdError,
> {
    let built = build_covering(bundle).map_err(CmdError::schema)?;
    let dtos = bundle
        .connections
        .as_ref()
        .ok_or_else(|| CmdError::schema("bundle is missing \"connections\""))?;
    if dtos.len() != built.pieces.len() {
        return Err(CmdError::schema("one connection per piece"));
    }
    let connections = dtos
        .iter()
        .zip(&built.pieces)
        .map(|(dto, piece)| dto.build(&built.hopf, piece))
        .collect::<Result<Vec<_>, _>>()
        .map_err(CmdError::schema)?;
    let covering = built.into_family()?;
    Ok((covering, connections))
}

pub fn cmd_build_splitting(bundle: &Bundle, opts: &Resolved) -> Result<Report, CmdError> {
    let (covering, connections) = covering_with_connections(bundle)?;
    let n = covering.len();
    if opts.piece >= n {
        return Err(CmdError::schema(format!(
            "piece index {} out of range",
            opts.piece
        )));
    }
    let kappa = match &opts.order {
        Some(order) => order.clone(),
        None => {
            let mut k = vec![opts.piece];
            k.extend((0..n).filter(|&i| i != opts.piece));
            k
        }
    };
    let mut metadata = Metadata::new(opts.cap);
    metadata.piece = Some(opts.piece);
    metadata.order = Some(kappa.clone());
    let mut report = Report::new("build-splitting", metadata);

    let pipeline = covering_pipeline(&covering, &connections, opts.cap)?;
    let section = covering_piece_section(&pipeline, &covering, opts.piece, &kappa)?;
    report.stage(
        "splitting",
        section.unital && section.colinear,
        Vec::new(),
        json!({
            "section": matrix_json(section.full_section().expect("full domain")),
            "unital": section.unital,
            "colinear": section.colinear,
        }),
    );
    Ok(report)
}

pub fn cmd_synthesize(bundle: &Bundle, opts: &Resolved) -> Result<Report, CmdError> {
    let (covering, connections) = covering_with_connections(bundle)?;
    if !covering.source.hopf.is_cocommutative() {
        return Err(CoreError::NotCocommutative.into());
    }
    let mut report = Report::new("synthesize-connection", Metadata::new(opts.cap));
    let ell = synthesize_from_covering(&covering, &connections, opts.cap)?;
    let verification = verify_connection(&ell)?;
    let tensors: Vec<Value> = ell
        .tensors
        .iter()
        .map(|terms| {
            Value::Array(
                terms
                    .iter()
                    .map(|(l, r)| json!([vector_json(l), vector_json(r)]))
                    .collect(),
            )
        })
        .collect();
    report.stage(
        "synthesis",
        verification.pass(),
        verification
            .failures
            .iter()
            .map(|f| format!("{} fails at basis {:?}", f.axiom.name(), f.basis_index))
            .collect(),
        json!({ "tensors": tensors }),
    );
    Ok(report)
}

fn standalone_connection(
    bundle: &Bundle,
) -> Result<hopfglue_core::connection::StrongConnection, CmdError> {
    let hopf = bundle
        .hopf
        .as_ref()
        .ok_or_else(|| CmdError::schema("bundle is missing \"hopf\""))?
        .build()
        .map_err(CmdError::schema)?;
    let source = bundle
        .source
        .as_ref()
        .ok_or_else(|| CmdError::schema("bundle is missing \"source\""))?
        .build(&hopf)
        .map_err(CmdError::schema)?;
    bundle
        .connection
        .as_ref()
        .ok_or_else(|| CmdError::schema("bundle is missing \"connection\""))?
        .build(&hopf, &source)
        .map_err(CmdError::schema)
}

pub fn cmd_verify_connection(bundle: &Bundle, opts: &Resolved) -> Result<Report, CmdError> {
    let ell = standalone_connection(bundle)?;
    let mut report = Report::new("verify-connection", Metadata::new(opts.cap));
    let verification = verify_connection(&ell)?;
    for axiom in [
        hopfglue_core::connection::Axiom::Unitality,
        hopfglue_core::connection::Axiom::Collapse,
        hopfglue_core::connection::Axiom::RightColinearity,
        hopfglue_core::connection::Axiom::LeftColinearity,
    ] {
        let failures: Vec<&hopfglue_core::connection::AxiomFailure> = verification
            .failures
            .iter()
            .filter(|f| f.axiom == axiom)
            .collect();
        report.stage(
            axiom.name(),
            failures.is_empty(),
            failures
                .iter()
                .map(|f| {
                    format!(
                        "basis {:?}, residual {}",
                        f.basis_index,
                        serde_json::to_string(&vector_json(&f.residual)).expect("json"),
                    )
                })
                .collect(),
            Value::Null,
        );
    }
    Ok(report)
}

pub fn cmd_chern_galois(bundle: &Bundle, opts: &Resolved) -> Result<Report, CmdError> {
    let ell = standalone_connection(bundle)?;
    let g_entries = bundle
        .grouplike
        .as_ref()
        .ok_or_else(|| CmdError::schema("bundle is missing \"grouplike\""))?;
    let g_vec = crate::dto::vector(g_entries).map_err(CmdError::schema)?;
    let g = ell.hopf.grouplike(&g_vec)?;
    let mut report = Report::new("chern-galois", Metadata::new(opts.cap));
    let proj = chern_galois_projector(&ell, &g)?;
    let entries: Vec<Value> = proj
        .entries
        .iter()
        .map(|row| Value::Array(row.iter().map(vector_json).collect()))
        .collect();
    report.stage(
        "projector",
        proj.idempotent && proj.coinvariant,
        Vec::new(),
        json!({
            "size": proj.size,
            "idempotent": proj.idempotent,
            "coinvariant": proj.coinvariant,
            "entries": entries,
        }),
    );
    Ok(report)
}

pub fn cmd_example_sphere(opts: &Resolved, expect: Option<&str>) -> Result<Report, CmdError> {
    let mut report = Report::new("example-s2rt", opts.metadata());
    let run_one = opts.method == "1" || opts.method == "both";
    let run_two = opts.method == "2" || opts.method == "both";
    if !run_one && !run_two {
        return Err(CmdError::schema(format!(
            "unknown method {:?}",
            opts.method
        )));
    }

    let mut serialized_one = None;
    if run_one {
        let (intermediate, m1) = toeplitz::method_one()?;
        let sr = toeplitz::verify_symbolic(&m1)?;
        let independent = toeplitz::legs_independent(&m1);
        let proj = toeplitz::projector(&m1)?;
        let json_text = toeplitz::connection_to_json(&m1);
        let parsed: Value = serde_json::from_str(&json_text).expect("canonical json");
        let two_piece_terms = intermediate.two_piece.terms.len();
        report.stage(
            "method-1",
            sr.pass() && independent && proj.idempotent && proj.entries_degree_zero,
            Vec::new(),
            json!({
                "connection": parsed,
                "two_piece_intermediate_terms": two_piece_terms,
                "legs_independent": independent,
                "projector_size": proj.size,
                "projector_idempotent": proj.idempotent,
                "projector_entries_degree_zero": proj.entries_degree_zero,
            }),
        );
        serialized_one = Some(json_text);
    }
    if run_two {
        let m2 = toeplitz::method_two();
        let sr = toeplitz::verify_symbolic(&m2)?;
        let independent = toeplitz::legs_independent(&m2);
        let proj = toeplitz::projector(&m2)?;
        let parsed: Value =
            serde_json::from_str(&toeplitz::connection_to_json(&m2)).expect("canonical json");
        report.stage(
            "method-2",
            sr.pass() && independent && proj.idempotent && proj.entries_degree_zero,
            Vec::new(),
            json!({
                "connection": parsed,
                "legs_independent": independent,
                "projector_size": proj.size,
                "projector_idempotent": proj.idempotent,
                "projector_entries_degree_zero": proj.entries_degree_zero,
            }),
        );
    }

    let shift = toeplitz::verify_shift(opts.cutoff)?;
    report.stage(
        "shift-representation",
        shift.pass(),
        Vec::new(),
        json!({
            "cutoff": shift.cutoff,
            "isometry_identity": shift.isometry_identity,
            "matrix_isometry_away_from_edge": shift.matrix_isometry_away_from_edge,
            "coisometry_distinct": shift.coisometry_distinct,
            "deformation_identity": shift.deformation_identity,
        }),
    );

    if let Some(expected) = expect {
        let actual = serialized_one
            .as_deref()
            .ok_or_else(|| CmdError::schema("--expect requires method 1 to run"))?;
        let matches = actual == expected.trim_end();
        report.stage(
            "expected-serialization",
            matches,
            if matches {
                Vec::new()
            } else {
                vec!["serialized normal form differs from the expected file".into()]
            },
            Value::Null,
        );
    }
    Ok(report)
}
