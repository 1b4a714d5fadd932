//! JSON problem-bundle schema and conversions into core types.
//!
//! Scalars are accepted as JSON integers or as `"p/q"` strings and are
//! always emitted as strings. Matrices are dense row-major arrays;
//! coaction matrices have `dim * hopf_dim` rows ordered by
//! `(element_index * hopf_dim + hopf_index)`.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::Deserialize;

use hopfglue_core::algebra::{AlgMorphism, StructureAlgebra};
use hopfglue_core::connection::StrongConnection;
use hopfglue_core::hopf::{ComoduleAlgebra, HopfAlgebra};
use hopfglue_core::linalg::{Matrix, Vector};
use hopfglue_core::pullback::{ComoduleGluingFamily, CoveringFamily, GluingFamily};
use hopfglue_core::scalar::{self, Scalar};
use hopfglue_core::subspace::Subspace;

/// A scalar entry: integer or exact-fraction string.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum Num {
    Int(i64),
    Str(String),
}

impl Num {
    pub fn to_scalar(&self) -> Result<Scalar, String> {
        match self {
            Num::Int(n) => Ok(scalar::int(*n)),
            Num::Str(s) => scalar::parse(s).map_err(|e| e.to_string()),
        }
    }
}

pub type MatrixDto = Vec<Vec<Num>>;

pub fn vector(entries: &[Num]) -> Result<Vector, String> {
    Ok(Vector::new(
        entries
            .iter()
            .map(Num::to_scalar)
            .collect::<Result<Vec<_>, _>>()?,
    ))
}

pub fn matrix(rows: &MatrixDto) -> Result<Matrix, String> {
    let vrows = rows
        .iter()
        .map(|r| vector(r))
        .collect::<Result<Vec<_>, _>>()?;
    if vrows.is_empty() {
        return Err("matrix must have at least one row".into());
    }
    let width = vrows[0].dim();
    if vrows.iter().any(|r| r.dim() != width) {
        return Err("ragged matrix rows".into());
    }
    Ok(Matrix::from_rows(&vrows))
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraDto {
    pub dim: usize,
    /// `mult[i][j]` is the coefficient vector of `e_i e_j`.
    pub mult: Vec<Vec<Vec<Num>>>,
    pub unit: Vec<Num>,
}

impl AlgebraDto {
    pub fn build(&self) -> Result<Arc<StructureAlgebra>, String> {
        let mult = self
            .mult
            .iter()
            .map(|row| row.iter().map(|v| vector(v)).collect::<Result<Vec<_>, _>>())
            .collect::<Result<Vec<_>, _>>()?;
        StructureAlgebra::new(self.dim, mult, vector(&self.unit)?).map_err(|e| e.to_string())
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HopfDto {
    pub dim: usize,
    pub mult: Vec<Vec<Vec<Num>>>,
    pub unit: Vec<Num>,
    pub comult: MatrixDto,
    pub counit: Vec<Num>,
    pub antipode: MatrixDto,
}

impl HopfDto {
    pub fn build(&self) -> Result<Arc<HopfAlgebra>, String> {
        let alg = AlgebraDto {
            dim: self.dim,
            mult: self.mult.clone(),
            unit: self.unit.clone(),
        }
        .build()?;
        HopfAlgebra::new(
            alg,
            matrix(&self.comult)?,
            vector(&self.counit)?,
            matrix(&self.antipode)?,
        )
        .map_err(|e| e.to_string())
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComoduleDto {
    pub dim: usize,
    pub mult: Vec<Vec<Vec<Num>>>,
    pub unit: Vec<Num>,
    pub coaction: MatrixDto,
}

impl ComoduleDto {
    pub fn build(&self, hopf: &Arc<HopfAlgebra>) -> Result<ComoduleAlgebra, String> {
        let alg = AlgebraDto {
            dim: self.dim,
            mult: self.mult.clone(),
            unit: self.unit.clone(),
        }
        .build()?;
        ComoduleAlgebra::new(alg, hopf.clone(), matrix(&self.coaction)?).map_err(|e| e.to_string())
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConnectionDto {
    /// One term list per Hopf basis index; each term is `[left, right]`.
    pub tensors: Vec<Vec<[Vec<Num>; 2]>>,
}

impl ConnectionDto {
    pub fn build(
        &self,
        hopf: &Arc<HopfAlgebra>,
        target: &ComoduleAlgebra,
    ) -> Result<StrongConnection, String> {
        let tensors = self
            .tensors
            .iter()
            .map(|terms| {
                terms
                    .iter()
                    .map(|[l, r]| Ok((vector(l)?, vector(r)?)))
                    .collect::<Result<Vec<_>, String>>()
            })
            .collect::<Result<Vec<_>, _>>()?;
        StrongConnection::new(hopf.clone(), target.clone(), tensors).map_err(|e| e.to_string())
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GluingDto {
    pub components: Vec<ComoduleDto>,
    /// Keyed `"i,j"` with `i < j`.
    pub targets: BTreeMap<String, ComoduleDto>,
    /// Keyed `"i,j"` (ordered pairs), matrix of the gluing map.
    pub maps: BTreeMap<String, MatrixDto>,
}

fn parse_pair(key: &str) -> Result<(usize, usize), String> {
    let (a, b) = key
        .split_once(',')
        .ok_or_else(|| format!("bad pair key {key:?}"))?;
    Ok((
        a.trim()
            .parse()
            .map_err(|_| format!("bad pair key {key:?}"))?,
        b.trim()
            .parse()
            .map_err(|_| format!("bad pair key {key:?}"))?,
    ))
}

impl GluingDto {
    pub fn build(&self, hopf: &Arc<HopfAlgebra>) -> Result<ComoduleGluingFamily, String> {
        let component_comodules = self
            .components
            .iter()
            .map(|c| c.build(hopf))
            .collect::<Result<Vec<_>, _>>()?;
        let components: Vec<Arc<StructureAlgebra>> =
            component_comodules.iter().map(|c| c.alg.clone()).collect();
        let mut targets = BTreeMap::new();
        let mut target_comodules = BTreeMap::new();
        for (key, dto) in &self.targets {
            let pair = parse_pair(key)?;
            let comodule = dto.build(hopf)?;
            targets.insert(pair, comodule.alg.clone());
            target_comodules.insert(pair, comodule);
        }
        let mut maps = BTreeMap::new();
        for (key, rows) in &self.maps {
            let (i, j) = parse_pair(key)?;
            let target = targets
                .get(&(i.min(j), i.max(j)))
                .ok_or_else(|| format!("map {key:?} has no target"))?;
            let dom = components
                .get(i)
                .ok_or_else(|| format!("map {key:?} has no component {i}"))?;
            let m = AlgMorphism::new(dom.clone(), target.clone(), matrix(rows)?)
                .map_err(|e| e.to_string())?;
            maps.insert((i, j), m);
        }
        let base = GluingFamily::new(components, targets, maps).map_err(|e| e.to_string())?;
        ComoduleGluingFamily::new(base, hopf.clone(), component_comodules, target_comodules)
            .map_err(|e| e.to_string())
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SubspacesDto {
    pub ambient_dim: usize,
    /// Each member is a spanning list of vectors.
    pub members: Vec<Vec<Vec<Num>>>,
}

impl SubspacesDto {
    pub fn build(&self) -> Result<Vec<Subspace>, String> {
        self.members
            .iter()
            .map(|vs| {
                let vectors = vs
                    .iter()
                    .map(|v| vector(v))
                    .collect::<Result<Vec<_>, _>>()?;
                if vectors.iter().any(|v| v.dim() != self.ambient_dim) {
                    return Err("spanning vector of wrong dimension".into());
                }
                Ok(Subspace::from_spanning(self.ambient_dim, &vectors))
            })
            .collect()
    }
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OptionsDto {
    pub cap: Option<usize>,
    pub piece: Option<usize>,
    pub order: Option<Vec<usize>>,
    pub method: Option<String>,
    pub cutoff: Option<usize>,
}

/// The problem bundle: which sections are required depends on the
/// subcommand.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Bundle {
    pub hopf: Option<HopfDto>,
    pub source: Option<ComoduleDto>,
    pub pieces: Option<Vec<ComoduleDto>>,
    /// Covering map matrices, one per piece (`piece_dim x source_dim`).
    pub covering_maps: Option<Vec<MatrixDto>>,
    pub gluing: Option<GluingDto>,
    pub subspaces: Option<SubspacesDto>,
    /// Piece connections, aligned with `pieces`.
    pub connections: Option<Vec<ConnectionDto>>,
    /// A standalone connection on `source`.
    pub connection: Option<ConnectionDto>,
    pub grouplike: Option<Vec<Num>>,
    #[serde(default)]
    pub options: OptionsDto,
}

/// Builds the covering family of a bundle (requires hopf, source, pieces,
/// covering_maps). Piece construction errors are schema-level; the
/// colinearity/surjectivity of the maps is the caller's check.
pub struct BuiltCovering {
    pub hopf: Arc<HopfAlgebra>,
    pub source: ComoduleAlgebra,
    pub pieces: Vec<ComoduleAlgebra>,
    pub maps: Vec<AlgMorphism>,
}

impl BuiltCovering {
    pub fn into_family(self) -> Result<CoveringFamily, hopfglue_core::Error> {
        CoveringFamily::new(self.source, self.pieces, self.maps)
    }
}

pub fn build_covering(bundle: &Bundle) -> Result<BuiltCovering, String> {
    let hopf = bundle
        .hopf
        .as_ref()
        .ok_or("bundle is missing \"hopf\"")?
        .build()?;
    let source = bundle
        .source
        .as_ref()
        .ok_or("bundle is missing \"source\"")?
        .build(&hopf)?;
    let pieces = bundle
        .pieces
        .as_ref()
        .ok_or("bundle is missing \"pieces\"")?
        .iter()
        .map(|p| p.build(&hopf))
        .collect::<Result<Vec<_>, _>>()?;
    let map_rows = bundle
        .covering_maps
        .as_ref()
        .ok_or("bundle is missing \"covering_maps\"")?;
    if map_rows.len() != pieces.len() {
        return Err("one covering map per piece".into());
    }
    let maps = map_rows
        .iter()
        .zip(&pieces)
        .map(|(rows, piece)| {
            AlgMorphism::new(source.alg.clone(), piece.alg.clone(), matrix(rows)?)
                .map_err(|e| e.to_string())
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(BuiltCovering {
        hopf,
        source,
        pieces,
        maps,
    })
}
