//! Ready-made reference instances.
//!
//! The main instance is the free sign-flip action on a disjoint union of
//! two-point orbits: functions on `Z2 x {0, .., m-1}` form a comodule
//! algebra over the two-dimensional Hopf algebra with group-like
//! generator `u`, covered by the restrictions to the complements of
//! single orbits. Each piece carries the strong connection
//! `u -> tau (x) tau` with `tau` the sign-section indicator. These data
//! exercise every layer of the crate and back the command-line examples.

use std::sync::Arc;

use crate::algebra::{AlgMorphism, StructureAlgebra};
use crate::connection::StrongConnection;
use crate::hopf::{group_hopf, ComoduleAlgebra, GroupLike, GroupTable, HopfAlgebra};
use crate::linalg::{tensor_index, Matrix, Vector};
use crate::pullback::CoveringFamily;
use crate::scalar::{int, rat};
use crate::{Error, Result};

/// The free two-point-orbit instance. Points of the total space are
/// indexed `2 * orbit + sign` with `sign` 0 or 1; the piece for index `i`
/// consists of the orbits other than `i`.
#[derive(Clone, Debug)]
pub struct FreeCoverInstance {
    pub hopf: Arc<HopfAlgebra>,
    pub total: ComoduleAlgebra,
    pub pieces: Vec<ComoduleAlgebra>,
    pub maps: Vec<AlgMorphism>,
    pub covering: CoveringFamily,
    /// The sign section `tau` on the total space (`+1` on sign 0, `-1` on
    /// sign 1).
    pub sign_section: Vector,
    /// The restrictions `tau_i` of the sign section to each piece.
    pub piece_signs: Vec<Vector>,
    /// Piece connections `1 -> 1 (x) 1`, `u -> tau_i (x) tau_i`.
    pub piece_connections: Vec<StrongConnection>,
}

impl FreeCoverInstance {
    /// The group-like generator `u` of the Hopf algebra.
    pub fn u(&self) -> GroupLike {
        self.hopf
            .grouplike(&Vector::unit(2, 1))
            .expect("u is group-like")
    }
}

/// Coaction matrix of the free sign flip on `points` indicator functions
/// (an even count, points paired `(2j, 2j+1)`), over the `{1, u}` basis.
fn flip_coaction(points: usize) -> Matrix {
    let mut co = Matrix::zero(points * 2, points);
    let half = rat(1, 2);
    for p in 0..points {
        let partner = p ^ 1;
        // e_p -> (e_p + e_partner)/2 (x) 1 + (e_p - e_partner)/2 (x) u
        co.set(tensor_index(p, 0, 2), p, half.clone());
        co.set(tensor_index(partner, 0, 2), p, half.clone());
        co.set(tensor_index(p, 1, 2), p, half.clone());
        co.set(tensor_index(partner, 1, 2), p, -half.clone());
    }
    co
}

/// Sign-section vector on `points` paired points: `+1` on even indices,
/// `-1` on odd.
fn sign_vector(points: usize) -> Vector {
    Vector::new(
        (0..points)
            .map(|p| if p % 2 == 0 { int(1) } else { int(-1) })
            .collect(),
    )
}

/// Builds the free-cover instance with `orbits >= 2` orbits.
pub fn z2_free_cover(orbits: usize) -> Result<FreeCoverInstance> {
    if orbits < 2 {
        return Err(Error::Invalid("need at least two orbits to cover".into()));
    }
    let hopf = group_hopf(&GroupTable::cyclic(2))?;
    let total_points = 2 * orbits;
    let total_alg = StructureAlgebra::pointwise(total_points);
    let total = ComoduleAlgebra::new(total_alg, hopf.clone(), flip_coaction(total_points))?;

    let mut pieces = Vec::with_capacity(orbits);
    let mut maps = Vec::with_capacity(orbits);
    let mut piece_signs = Vec::with_capacity(orbits);
    let mut piece_connections = Vec::with_capacity(orbits);
    for removed in 0..orbits {
        let piece_points = 2 * (orbits - 1);
        let piece_alg = StructureAlgebra::pointwise(piece_points);
        let piece =
            ComoduleAlgebra::new(piece_alg.clone(), hopf.clone(), flip_coaction(piece_points))?;
        let mut restriction = Matrix::zero(piece_points, total_points);
        let mut local = 0;
        for orbit in 0..orbits {
            if orbit == removed {
                continue;
            }
            for sign in 0..2 {
                restriction.set(2 * local + sign, 2 * orbit + sign, int(1));
            }
            local += 1;
        }
        let map = AlgMorphism::new(total.alg.clone(), piece_alg, restriction)?;
        let tau = sign_vector(piece_points);
        let ell = StrongConnection::new(
            hopf.clone(),
            piece.clone(),
            vec![
                vec![(piece.alg.unit().clone(), piece.alg.unit().clone())],
                vec![(tau.clone(), tau.clone())],
            ],
        )?;
        pieces.push(piece);
        maps.push(map);
        piece_signs.push(tau);
        piece_connections.push(ell);
    }
    let covering = CoveringFamily::new(total.clone(), pieces.clone(), maps.clone())?;
    Ok(FreeCoverInstance {
        hopf,
        total,
        pieces,
        maps,
        covering,
        sign_section: sign_vector(total_points),
        piece_signs,
        piece_connections,
    })
}

/// A free-action instance over the function Hopf algebra of an arbitrary
/// finite group, on point-indicator bases throughout. Points of the total
/// space are indexed `orbit * |G| + group_element`; the piece for index
/// `i` consists of the orbits other than `i`.
#[derive(Clone, Debug)]
pub struct FunctionCoverInstance {
    pub group: GroupTable,
    pub hopf: Arc<HopfAlgebra>,
    pub total: ComoduleAlgebra,
    pub pieces: Vec<ComoduleAlgebra>,
    pub maps: Vec<AlgMorphism>,
    pub covering: CoveringFamily,
    pub piece_connections: Vec<StrongConnection>,
}

/// Coaction of the function Hopf algebra on the indicator functions of a
/// free action on `orbits` copies of the group:
/// `e_(o, k) -> sum_g e_(o, k g^-1) (x) delta_g`.
fn translation_coaction(group: &GroupTable, orbits: usize) -> Matrix {
    let n = group.order();
    let points = orbits * n;
    let mut co = Matrix::zero(points * n, points);
    for o in 0..orbits {
        for k in 0..n {
            let p = o * n + k;
            for g in 0..n {
                let moved = o * n + group.mul(k, group.inverse(g));
                co.set(tensor_index(moved, g, n), p, int(1));
            }
        }
    }
    co
}

/// The trivialization connection on a disjoint union of free orbits:
/// `delta_g -> sum_(a b = g) E_(a^-1) (x) E_b` with `E_c` the indicator of
/// the group coordinate `c` across all orbits.
fn trivialization_connection(
    hopf: &Arc<HopfAlgebra>,
    piece: &ComoduleAlgebra,
    group: &GroupTable,
    orbits: usize,
) -> Result<StrongConnection> {
    let n = group.order();
    let coordinate = |c: usize| {
        let mut v = Vector::zero(orbits * n);
        for o in 0..orbits {
            v.set(o * n + c, int(1));
        }
        v
    };
    let mut tensors = vec![Vec::new(); n];
    for a in 0..n {
        for b in 0..n {
            let g = group.mul(a, b);
            tensors[g].push((coordinate(group.inverse(a)), coordinate(b)));
        }
    }
    StrongConnection::new(hopf.clone(), piece.clone(), tensors)
}

/// Builds the instance for a free action of `group` on
/// `orbits >= 2` orbit copies, covered by restrictions to the complements
/// of single orbits.
pub fn free_function_cover(group: &GroupTable, orbits: usize) -> Result<FunctionCoverInstance> {
    if orbits < 2 {
        return Err(Error::Invalid("need at least two orbits to cover".into()));
    }
    let n = group.order();
    let hopf = crate::hopf::function_hopf(group)?;
    let total_alg = StructureAlgebra::pointwise(orbits * n);
    let total = ComoduleAlgebra::new(total_alg, hopf.clone(), translation_coaction(group, orbits))?;
    let mut pieces = Vec::with_capacity(orbits);
    let mut maps = Vec::with_capacity(orbits);
    let mut piece_connections = Vec::with_capacity(orbits);
    for removed in 0..orbits {
        let piece_alg = StructureAlgebra::pointwise((orbits - 1) * n);
        let piece = ComoduleAlgebra::new(
            piece_alg.clone(),
            hopf.clone(),
            translation_coaction(group, orbits - 1),
        )?;
        let mut restriction = Matrix::zero((orbits - 1) * n, orbits * n);
        let mut local = 0;
        for orbit in 0..orbits {
            if orbit == removed {
                continue;
            }
            for k in 0..n {
                restriction.set(local * n + k, orbit * n + k, int(1));
            }
            local += 1;
        }
        maps.push(AlgMorphism::new(total.alg.clone(), piece_alg, restriction)?);
        piece_connections.push(trivialization_connection(&hopf, &piece, group, orbits - 1)?);
        pieces.push(piece);
    }
    let covering = CoveringFamily::new(total.clone(), pieces.clone(), maps.clone())?;
    Ok(FunctionCoverInstance {
        group: group.clone(),
        hopf,
        total,
        pieces,
        maps,
        covering,
        piece_connections,
    })
}
