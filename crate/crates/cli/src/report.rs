//! Deterministic machine-readable reports.
//!
//! Reports carry one entry per verification stage plus the metadata that
//! pins down every choice the pipeline made (visiting order, preimage
//! policy, closure cap), so a report can be re-derived bit for bit from
//! its bundle.

use serde::Serialize;
use serde_json::{json, Value};

use hopfglue_core::algebra::StructureAlgebra;
use hopfglue_core::linalg::{Matrix, Vector};
use hopfglue_core::scalar;

#[derive(Serialize)]
pub struct Report {
    pub version: u32,
    pub command: String,
    pub pass: bool,
    pub stages: Vec<Stage>,
    pub metadata: Metadata,
}

#[derive(Serialize)]
pub struct Stage {
    pub stage: String,
    pub pass: bool,
    pub witnesses: Vec<String>,
    pub artifacts: Value,
}

#[derive(Serialize)]
pub struct Metadata {
    pub cap: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub piece: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub order: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub method: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cutoff: Option<usize>,
    pub preimage_policy: &'static str,
    pub basis_convention: &'static str,
}

impl Metadata {
    pub fn new(cap: usize) -> Self {
        Metadata {
            cap,
            piece: None,
            order: None,
            method: None,
            cutoff: None,
            preimage_policy: "zero-free-variables",
            basis_convention: "reduced-row-echelon",
        }
    }
}

impl Report {
    pub fn new(command: &str, metadata: Metadata) -> Self {
        Report {
            version: 1,
            command: command.to_string(),
            pass: true,
            stages: Vec::new(),
            metadata,
        }
    }

    pub fn stage(&mut self, name: &str, pass: bool, witnesses: Vec<String>, artifacts: Value) {
        self.pass &= pass;
        self.stages.push(Stage {
            stage: name.to_string(),
            pass,
            witnesses,
            artifacts,
        });
    }

    pub fn to_json(&self) -> String {
        let mut out = serde_json::to_string_pretty(self).expect("report serializes");
        out.push('\n');
        out
    }
}

pub fn vector_json(v: &Vector) -> Value {
    Value::Array(v.iter().map(|x| Value::String(scalar::format(x))).collect())
}

pub fn matrix_json(m: &Matrix) -> Value {
    Value::Array((0..m.rows()).map(|i| vector_json(&m.row(i))).collect())
}

pub fn algebra_json(a: &StructureAlgebra) -> Value {
    let mult: Vec<Value> = (0..a.dim())
        .map(|i| {
            Value::Array(
                (0..a.dim())
                    .map(|j| vector_json(a.basis_product(i, j)))
                    .collect(),
            )
        })
        .collect();
    json!({
        "dim": a.dim(),
        "mult": mult,
        "unit": vector_json(a.unit()),
    })
}
