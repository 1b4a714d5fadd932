//! Two-piece gluing of strong connections, transfer-map solving, and
//! cocycle failure witnesses on perturbed families.

use std::collections::BTreeMap;

use hopfglue_core::algebra::AlgMorphism;
use hopfglue_core::connection::{
    glue_two, solve_transfer, verify_connection, TransferTable, TwoPieceGluing,
};
use hopfglue_core::instances::z2_free_cover;
use hopfglue_core::linalg::{Matrix, Vector};
use hopfglue_core::pullback::{
    canonical_gluing, check_cocycle, multipullback_comodule, CoveringFamily, GluingFamily,
};
use hopfglue_core::scalar::int;

#[test]
fn glue_two_on_a_two_piece_subcover() {
    let inst = z2_free_cover(3).unwrap();
    // restrict the covering to pieces 0 and 1; their kernels already
    // intersect trivially
    let covering = CoveringFamily::new(
        inst.total.clone(),
        vec![inst.pieces[0].clone(), inst.pieces[1].clone()],
        vec![inst.maps[0].clone(), inst.maps[1].clone()],
    )
    .unwrap();
    let cg = canonical_gluing(&covering).unwrap();
    let (mp, total_comodule) = multipullback_comodule(&cg.family).unwrap();
    assert_eq!(mp.total.dim(), 6);

    let pi01 = &cg.family.base.map(0, 1).unwrap().matrix;
    let pi10 = &cg.family.base.map(1, 0).unwrap().matrix;
    let p0 = &inst.pieces[0];
    let p1 = &inst.pieces[1];
    let u = inst.u();

    // transfer values on the legs {1, tau} of the piece connections; the
    // unit goes to the unit, the sign legs are solved canonically
    let t01 = solve_transfer(p0, p1, pi01, pi10, &inst.piece_signs[0], &u).unwrap();
    let t10 = solve_transfer(p1, p0, pi10, pi01, &inst.piece_signs[1], &u).unwrap();
    let f12 = TransferTable::new(vec![
        (p0.alg.unit().clone(), p1.alg.unit().clone()),
        (inst.piece_signs[0].clone(), t01),
    ]);
    let f21 = TransferTable::new(vec![
        (p1.alg.unit().clone(), p0.alg.unit().clone()),
        (inst.piece_signs[1].clone(), t10),
    ]);
    // the transfer equations hold with zero residuals
    assert!(f12.verify(p0, p1, pi01, pi10).unwrap().is_empty());
    assert!(f21.verify(p1, p0, pi10, pi01).unwrap().is_empty());

    let membership = |x0: &Vector, x1: &Vector| mp.membership(&mp.tuple(&[x0.clone(), x1.clone()]));
    let data = TwoPieceGluing {
        total: &total_comodule,
        pieces: [p0, p1],
        over: [pi01, pi10],
        projections: [&mp.projections[0].matrix, &mp.projections[1].matrix],
        membership: &membership,
    };
    let ell = glue_two(
        &data,
        &inst.piece_connections[0],
        &inst.piece_connections[1],
        &f12,
        &f21,
    )
    .unwrap();
    assert!(verify_connection(&ell).unwrap().pass());
}

#[test]
fn identical_pieces_with_identity_transfers_glue_diagonally() {
    // glue a piece with itself along the identity; the diagonal
    // connection results
    let inst = z2_free_cover(2).unwrap();
    let p = &inst.pieces[0]; // two points
    let id = AlgMorphism::identity(&p.alg);
    let base = GluingFamily::new(
        vec![p.alg.clone(), p.alg.clone()],
        BTreeMap::from([((0, 1), p.alg.clone())]),
        BTreeMap::from([((0, 1), id.clone()), ((1, 0), id)]),
    )
    .unwrap();
    let family = hopfglue_core::pullback::ComoduleGluingFamily::new(
        base,
        inst.hopf.clone(),
        vec![p.clone(), p.clone()],
        BTreeMap::from([((0, 1), p.clone())]),
    )
    .unwrap();
    let (mp, total_comodule) = multipullback_comodule(&family).unwrap();
    assert_eq!(mp.total.dim(), 2);

    let identity = Matrix::identity(2);
    let f = TransferTable::new(vec![
        (p.alg.unit().clone(), p.alg.unit().clone()),
        (inst.piece_signs[0].clone(), inst.piece_signs[0].clone()),
    ]);
    let membership = |x0: &Vector, x1: &Vector| mp.membership(&mp.tuple(&[x0.clone(), x1.clone()]));
    let data = TwoPieceGluing {
        total: &total_comodule,
        pieces: [p, p],
        over: [&identity, &identity],
        projections: [&mp.projections[0].matrix, &mp.projections[1].matrix],
        membership: &membership,
    };
    let ell = glue_two(
        &data,
        &inst.piece_connections[0],
        &inst.piece_connections[0],
        &f,
        &f,
    )
    .unwrap();
    assert!(verify_connection(&ell).unwrap().pass());
    // the correction block vanishes: only the diagonal terms remain
    assert_eq!(ell.terms(1).len(), 1);
}

#[test]
fn solve_transfer_rejects_inhomogeneous_and_inconsistent_input() {
    let inst = z2_free_cover(3).unwrap();
    let covering = CoveringFamily::new(
        inst.total.clone(),
        vec![inst.pieces[0].clone(), inst.pieces[1].clone()],
        vec![inst.maps[0].clone(), inst.maps[1].clone()],
    )
    .unwrap();
    let cg = canonical_gluing(&covering).unwrap();
    let pi01 = &cg.family.base.map(0, 1).unwrap().matrix;
    let pi10 = &cg.family.base.map(1, 0).unwrap().matrix;
    let u = inst.u();
    // a non-homogeneous argument is rejected up front
    let mixed = inst.pieces[0].alg.unit().add(&inst.piece_signs[0]);
    assert!(solve_transfer(&inst.pieces[0], &inst.pieces[1], pi01, pi10, &mixed, &u).is_err());

    // coinvariant argument at the trivial group-like: a canonical
    // coinvariant preimage is produced
    let one = inst.hopf.grouplike(&Vector::from_i64(&[1, 0])).unwrap();
    let y = solve_transfer(
        &inst.pieces[0],
        &inst.pieces[1],
        pi01,
        pi10,
        inst.pieces[0].alg.unit(),
        &one,
    )
    .unwrap();
    assert_eq!(
        inst.pieces[1].coaction.mul_vec(&y),
        y.tensor(&Vector::from_i64(&[1, 0]))
    );
    assert_eq!(pi10.mul_vec(&y), pi01.mul_vec(inst.pieces[0].alg.unit()));
}

/// Composing one gluing map with the sign involution of its target breaks
/// the composition identity on a four-orbit cover (where triple-overlap
/// quotients are nonzero), with a witness triple reported.
#[test]
fn sign_perturbation_fails_condition_two() {
    let inst = z2_free_cover(4).unwrap();
    let cg = canonical_gluing(&inst.covering).unwrap();
    // the unperturbed four-piece family satisfies the cocycle condition
    let clean = check_cocycle(&cg.family.base).unwrap();
    assert!(clean.pass());
    assert!(clean.triples_checked > 0);

    // sign involution of the target of {0, 1}: swap the two points of
    // every remaining orbit (an algebra automorphism)
    let target = &cg.family.base.targets[&(0, 1)];
    let n = target.dim();
    let mut swap = Matrix::zero(n, n);
    for p in 0..n {
        swap.set(p ^ 1, p, int(1));
    }
    let twist = AlgMorphism::new(target.clone(), target.clone(), swap).unwrap();
    let mut maps = cg.family.base.maps.clone();
    let twisted = twist.compose(cg.family.base.map(0, 1).unwrap()).unwrap();
    maps.insert((0, 1), twisted);
    let perturbed = GluingFamily::new(
        cg.family.base.components.clone(),
        cg.family.base.targets.clone(),
        maps,
    )
    .unwrap();
    let report = check_cocycle(&perturbed).unwrap();
    assert!(report.condition1_failures.is_empty());
    assert!(!report.condition2_failures.is_empty());
    let witness = &report.condition2_failures[0];
    assert!(!witness.witness.is_zero());
    assert!(witness.i == 0 || witness.j == 0 || witness.k == 0);
}

/// The three equivalent formulations of pairwise compatibility on triple
/// overlaps agree on random elements.
#[test]
fn triple_overlap_tri_consistency() {
    use hopfglue_core::algebra::{quotient, Ideal};
    let inst = z2_free_cover(4).unwrap();
    let cg = canonical_gluing(&inst.covering).unwrap();
    let fam = &cg.family.base;
    let (i, j, k) = (0usize, 1usize, 2usize);
    let ker_ij = fam.kernel(i, j).unwrap();
    let ker_ik = fam.kernel(i, k).unwrap();
    let ker_ji = fam.kernel(j, i).unwrap();
    let ker_jk = fam.kernel(j, k).unwrap();
    let qi = quotient(
        &fam.components[i],
        &Ideal::new(fam.components[i].clone(), ker_ij.sum(&ker_ik).unwrap()).unwrap(),
    )
    .unwrap();
    let qj = quotient(
        &fam.components[j],
        &Ideal::new(fam.components[j].clone(), ker_ji.sum(&ker_jk).unwrap()).unwrap(),
    )
    .unwrap();
    let image = fam
        .map(i, j)
        .unwrap()
        .matrix
        .image_of(&fam.kernel(i, k).unwrap());
    let qt = quotient(
        &fam.targets[&(0, 1)],
        &Ideal::new(fam.targets[&(0, 1)].clone(), image.clone()).unwrap(),
    )
    .unwrap();

    // deterministic pseudo-random vectors
    let mut state = 0x3c6ef372u64;
    let mut next = move || {
        state = state
            .wrapping_mul(6364136223846793005)
            .wrapping_add(1442695040888963407);
        ((state >> 33) % 7) as i64 - 3
    };
    // the transition isomorphism realizing condition (a)
    let overlap_i = qt
        .projection
        .matrix
        .mul(&fam.map(i, j).unwrap().matrix)
        .mul(&qi.section);
    let overlap_j = qt
        .projection
        .matrix
        .mul(&fam.map(j, i).unwrap().matrix)
        .mul(&qj.section);
    let phi = overlap_i.inverse().unwrap().mul(&overlap_j);

    for _ in 0..25 {
        let ai = Vector::new((0..6).map(|_| int(next())).collect());
        let aj = Vector::new((0..6).map(|_| int(next())).collect());
        // condition (a): the class of a_i is the transition image of the
        // class of a_j
        let a = qi.projection.apply(&ai) == phi.mul_vec(&qj.projection.apply(&aj));
        // condition (b): the two quotient images agree
        let pi_ij_k = overlap_i.mul_vec(&qi.projection.apply(&ai));
        let pi_ji_k = overlap_j.mul_vec(&qj.projection.apply(&aj));
        let b = pi_ij_k == pi_ji_k;
        // condition (c): the gluing difference lies in the kernel image
        let diff = fam
            .map(i, j)
            .unwrap()
            .apply(&ai)
            .sub(&fam.map(j, i).unwrap().apply(&aj));
        let c = image.contains(&diff);
        assert_eq!(a, b);
        assert_eq!(b, c);
    }
}
