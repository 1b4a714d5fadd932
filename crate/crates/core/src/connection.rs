//! Strong connections: representation, exact axiom verification, the
//! piecewise synthesis formula, two-piece gluing, and projector
//! extraction.
//!
//! A strong connection is a linear map from the Hopf algebra into the
//! tensor square of a comodule algebra satisfying four axioms: it sends
//! the unit to `1 (x) 1`, the two legs multiply to the counit, and it is
//! right and left colinear. Here the map is stored as a list of tensor
//! terms per Hopf basis element and every axiom is checked as an exact
//! identity of vectors, with residuals reported per basis element.

use std::sync::Arc;

use crate::algebra::StructureAlgebra;
use crate::hopf::{ComoduleAlgebra, GroupLike, HopfAlgebra};
use crate::linalg::{Matrix, Vector};
use crate::splitting::Splitting;
use crate::subspace::Subspace;
use crate::{Error, Result};

/// A candidate strong connection, stored as tensor terms per Hopf basis
/// element. Construction checks shapes only; use [`verify_connection`] for
/// the axioms.
#[derive(Clone, Debug)]
pub struct StrongConnection {
    pub hopf: Arc<HopfAlgebra>,
    pub target: ComoduleAlgebra,
    /// `tensors[t]` is the term list of the image of the `t`-th basis
    /// vector: a sum of `left (x) right` pure tensors.
    pub tensors: Vec<Vec<(Vector, Vector)>>,
}

impl StrongConnection {
    pub fn new(
        hopf: Arc<HopfAlgebra>,
        target: ComoduleAlgebra,
        tensors: Vec<Vec<(Vector, Vector)>>,
    ) -> Result<Self> {
        if tensors.len() != hopf.dim() {
            return Err(Error::DimensionMismatch(
                "one term list per Hopf basis vector".into(),
            ));
        }
        let np = target.dim();
        if tensors
            .iter()
            .flatten()
            .any(|(l, r)| l.dim() != np || r.dim() != np)
        {
            return Err(Error::DimensionMismatch("tensor leg dimension".into()));
        }
        if *target.hopf != *hopf {
            return Err(Error::DimensionMismatch(
                "target comodule is over a different Hopf algebra".into(),
            ));
        }
        Ok(StrongConnection {
            hopf,
            target,
            tensors,
        })
    }

    pub fn terms(&self, basis_index: usize) -> &[(Vector, Vector)] {
        &self.tensors[basis_index]
    }

    /// Coefficient matrix of the image of `h` in the tensor square:
    /// entry `(a, b)` is the coefficient of `e_a (x) e_b`.
    pub fn tensor_matrix(&self, h: &Vector) -> Matrix {
        let np = self.target.dim();
        let mut m = Matrix::zero(np, np);
        for (t, c) in h.support() {
            for (l, r) in &self.tensors[t] {
                for (a, la) in l.support() {
                    for (b, rb) in r.support() {
                        let cur = m.get(a, b) + c * &(la * rb);
                        m.set(a, b, cur);
                    }
                }
            }
        }
        m
    }

    /// The two-leg product `l(h)^<1> l(h)^<2>` as an element of the target.
    pub fn collapse(&self, h: &Vector) -> Vector {
        let mut out = Vector::zero(self.target.dim());
        for (t, c) in h.support() {
            for (l, r) in &self.tensors[t] {
                out = out.add(&self.target.alg.mul(l, r).scale(c));
            }
        }
        out
    }
}

/// The four strong-connection axioms.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Axiom {
    Unitality,
    Collapse,
    RightColinearity,
    LeftColinearity,
}

impl Axiom {
    pub fn name(self) -> &'static str {
        match self {
            Axiom::Unitality => "unitality",
            Axiom::Collapse => "collapse",
            Axiom::RightColinearity => "right-colinearity",
            Axiom::LeftColinearity => "left-colinearity",
        }
    }
}

/// A failed axiom instance: which basis element and the residual
/// (left-hand side minus right-hand side).
#[derive(Clone, Debug)]
pub struct AxiomFailure {
    pub axiom: Axiom,
    pub basis_index: Option<usize>,
    pub residual: Vector,
}

/// Outcome of verifying all four axioms on every basis element.
#[derive(Clone, Debug, Default)]
pub struct ConnectionReport {
    pub failures: Vec<AxiomFailure>,
}

impl ConnectionReport {
    pub fn pass(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn failed_axioms(&self) -> Vec<Axiom> {
        let mut seen = Vec::new();
        for f in &self.failures {
            if !seen.contains(&f.axiom) {
                seen.push(f.axiom);
            }
        }
        seen
    }
}

/// Checks the four axioms exactly on every Hopf basis vector. Requires a
/// bijective antipode; failures are report content, not errors.
pub fn verify_connection(ell: &StrongConnection) -> Result<ConnectionReport> {
    if !ell.hopf.has_bijective_antipode() {
        return Err(Error::AntipodeNotBijective);
    }
    let h = &ell.hopf;
    let p = &ell.target;
    let (np, nh) = (p.dim(), h.dim());
    let mut report = ConnectionReport::default();

    // unitality
    let lhs = tensor_square_vector(&ell.tensor_matrix(h.unit()), np);
    let rhs = p.alg.unit().tensor(p.alg.unit());
    if lhs != rhs {
        report.failures.push(AxiomFailure {
            axiom: Axiom::Unitality,
            basis_index: None,
            residual: lhs.sub(&rhs),
        });
    }

    for t in 0..nh {
        let e_t = Vector::unit(nh, t);

        // collapse: l^<1> l^<2> = counit
        let lhs = ell.collapse(&e_t);
        let rhs = p.alg.unit().scale(h.counit.get(t));
        if lhs != rhs {
            report.failures.push(AxiomFailure {
                axiom: Axiom::Collapse,
                basis_index: Some(t),
                residual: lhs.sub(&rhs),
            });
        }

        let coproduct = h.sweedler_of(&e_t);

        // right colinearity, both sides in P (x) P (x) H with index
        // ((a, b), c) -> (a np + b) nh + c
        let mut lhs = Vector::zero(np * np * nh);
        for ((a, b), c) in &coproduct {
            for (l, r) in ell.terms(*a) {
                for (pa, la) in l.support() {
                    for (pb, rb) in r.support() {
                        let idx = (pa * np + pb) * nh + b;
                        let cur = lhs.get(idx) + c * &(la * rb);
                        lhs.set(idx, cur);
                    }
                }
            }
        }
        let mut rhs = Vector::zero(np * np * nh);
        for (l, r) in ell.terms(t) {
            let cor = p.coaction.mul_vec(r);
            for (pa, la) in l.support() {
                for (q, w) in cor.support() {
                    let (pb, hc) = (q / nh, q % nh);
                    let idx = (pa * np + pb) * nh + hc;
                    let cur = rhs.get(idx) + la * w;
                    rhs.set(idx, cur);
                }
            }
        }
        if lhs != rhs {
            report.failures.push(AxiomFailure {
                axiom: Axiom::RightColinearity,
                basis_index: Some(t),
                residual: lhs.sub(&rhs),
            });
        }

        // left colinearity, both sides in H (x) P (x) P with index
        // (c, (a, b)) -> (c np + a) np + b
        let mut lhs = Vector::zero(nh * np * np);
        for ((a, b), c) in &coproduct {
            let sa = h.antipode_of(&Vector::unit(nh, *a));
            for (l, r) in ell.terms(*b) {
                for (hc, sc) in sa.support() {
                    for (pa, la) in l.support() {
                        for (pb, rb) in r.support() {
                            let idx = (hc * np + pa) * np + pb;
                            let cur = lhs.get(idx) + c * &(sc * &(la * rb));
                            lhs.set(idx, cur);
                        }
                    }
                }
            }
        }
        let mut rhs = Vector::zero(nh * np * np);
        for (l, r) in ell.terms(t) {
            let col = p.coaction.mul_vec(l);
            for (q, w) in col.support() {
                let (pa, hc) = (q / nh, q % nh);
                for (pb, rb) in r.support() {
                    let idx = (hc * np + pa) * np + pb;
                    let cur = rhs.get(idx) + w * rb;
                    rhs.set(idx, cur);
                }
            }
        }
        if lhs != rhs {
            report.failures.push(AxiomFailure {
                axiom: Axiom::LeftColinearity,
                basis_index: Some(t),
                residual: lhs.sub(&rhs),
            });
        }
    }
    Ok(report)
}

fn tensor_square_vector(m: &Matrix, np: usize) -> Vector {
    let mut v = Vector::zero(np * np);
    for ((a, b), c) in m.support() {
        v.set(a * np + b, c.clone());
    }
    v
}

/// One glued piece: its comodule algebra, a strong connection on it, a
/// subcomodule containing all connection legs and the unit, and a unital
/// colinear splitting of the covering projection defined on that
/// subcomodule.
#[derive(Clone, Debug)]
pub struct PieceData {
    pub piece: ComoduleAlgebra,
    pub ell: StrongConnection,
    pub v: Subspace,
    /// Splitting of the projection `total -> piece`, with domain `v`.
    pub alpha: Splitting,
}

impl PieceData {
    /// Validates all hypotheses: `v` is a subcomodule containing the legs
    /// and the unit, and `alpha` is a unital colinear splitting on `v`.
    pub fn new(
        total: &ComoduleAlgebra,
        piece: ComoduleAlgebra,
        ell: StrongConnection,
        v: Subspace,
        alpha: Splitting,
    ) -> Result<Self> {
        if !piece.is_subcomodule(&v) {
            return Err(Error::CoactionAxiom(
                "designated subspace is not a subcomodule".into(),
            ));
        }
        if !v.contains(piece.alg.unit()) {
            return Err(Error::ConnectionInvalid(
                "subcomodule misses the unit".into(),
            ));
        }
        for terms in &ell.tensors {
            for (l, r) in terms {
                if !v.contains(l) || !v.contains(r) {
                    return Err(Error::ConnectionInvalid(
                        "connection legs escape the designated subcomodule".into(),
                    ));
                }
            }
        }
        if alpha.domain() != &v {
            return Err(Error::ConnectionInvalid(
                "splitting domain differs from the designated subcomodule".into(),
            ));
        }
        let one = alpha.apply(piece.alg.unit())?;
        if one != *total.alg.unit() {
            return Err(Error::NotUnital);
        }
        if !alpha.section_is_colinear(&piece, total) {
            return Err(Error::NotColinear);
        }
        Ok(PieceData {
            piece,
            ell,
            v,
            alpha,
        })
    }

    /// The default subcomodule: closure of the connection legs and the
    /// unit.
    pub fn default_subcomodule(piece: &ComoduleAlgebra, ell: &StrongConnection) -> Subspace {
        let mut vectors = vec![piece.alg.unit().clone()];
        for terms in &ell.tensors {
            for (l, r) in terms {
                vectors.push(l.clone());
                vectors.push(r.clone());
            }
        }
        piece.comodule_closure(&Subspace::from_spanning(piece.dim(), &vectors))
    }
}

/// `theta_i(h) = counit(h) 1 - alpha_i(l_i^<1>(h)) alpha_i(l_i^<2>(h))`,
/// an element of the total algebra.
pub fn theta(pd: &PieceData, total: &StructureAlgebra, h: &Vector) -> Result<Vector> {
    let mut out = total.unit().scale(&pd.ell.hopf.counit_of(h));
    for (t, c) in h.support() {
        for (l, r) in pd.ell.terms(t) {
            let al = pd.alpha.apply(l)?;
            let ar = pd.alpha.apply(r)?;
            out = out.sub(&total.mul(&al, &ar).scale(c));
        }
    }
    Ok(out)
}

/// Table of the telescoping products
/// `T_i(h) = theta_i(h^(1)) theta_{i+1}(h^(2)) ... theta_n(h^(n-i+1))`
/// on all Hopf basis vectors, with `T_{n+1} = counit`.
pub struct TelescopeTable {
    /// `values[i][t] = T_i(e_t)` for `0 <= i <= n + 1`.
    pub values: Vec<Vec<Vector>>,
}

impl TelescopeTable {
    pub fn build(pds: &[PieceData], total: &StructureAlgebra) -> Result<Self> {
        let n = pds.len();
        let hopf = &pds[0].ell.hopf;
        let nh = hopf.dim();
        let mut values = vec![vec![Vector::zero(total.dim()); nh]; n + 1];
        for t in 0..nh {
            values[n][t] = total.unit().scale(hopf.counit.get(t));
        }
        for i in (0..n).rev() {
            for t in 0..nh {
                let mut acc = Vector::zero(total.dim());
                for ((a, b), c) in hopf.sweedler_of(&Vector::unit(nh, t)) {
                    let th = theta(&pds[i], total, &Vector::unit(nh, a))?;
                    acc = acc.add(&total.mul(&th, &values[i + 1][b]).scale(&c));
                }
                values[i][t] = acc;
            }
        }
        Ok(TelescopeTable { values })
    }

    /// `T_i(h)` by linearity. Index `i` ranges over `0 ..= n + 1` where
    /// `n + 1` is the counit row (stored at position `pds.len()`).
    pub fn at(&self, i: usize, h: &Vector) -> Result<Vector> {
        let row = self.values.get(i).ok_or(Error::IndexOutOfRange(i))?;
        let dim = row[0].dim();
        let mut out = Vector::zero(dim);
        for (t, c) in h.support() {
            out = out.add(&row[t].scale(c));
        }
        Ok(out)
    }
}

/// Synthesizes a strong connection on the glued total algebra from piece
/// connections and unital colinear splittings:
/// `l(h) = sum_i alpha_i(l_i^<1>(h^(1))) (x) alpha_i(l_i^<2>(h^(1))) T_{i+1}(h^(2))`.
///
/// Hard-fails unless the Hopf algebra is co-commutative, every piece
/// connection passes verification, and the telescoping identity
/// `T_0 = 0` holds; the result is verified before being returned.
pub fn synthesize_piecewise(
    pds: &[PieceData],
    total: &ComoduleAlgebra,
) -> Result<StrongConnection> {
    if pds.is_empty() {
        return Err(Error::Invalid("no pieces".into()));
    }
    let hopf = pds[0].ell.hopf.clone();
    if !hopf.is_cocommutative() {
        return Err(Error::NotCocommutative);
    }
    for (i, pd) in pds.iter().enumerate() {
        if *pd.ell.hopf != *hopf {
            return Err(Error::DimensionMismatch(
                "pieces over different Hopf algebras".into(),
            ));
        }
        let report = verify_connection(&pd.ell)?;
        if !report.pass() {
            return Err(Error::ConnectionInvalid(format!(
                "piece {i} connection fails axiom verification"
            )));
        }
    }
    let nh = hopf.dim();
    let table = TelescopeTable::build(pds, &total.alg)?;
    for t in 0..nh {
        if !table.values[0][t].is_zero() {
            return Err(Error::ConnectionInvalid(
                "telescoping product T_0 does not vanish; covering data is inconsistent".into(),
            ));
        }
    }

    let mut tensors = vec![Vec::new(); nh];
    for t in 0..nh {
        for ((a, b), c) in hopf.sweedler_of(&Vector::unit(nh, t)) {
            for (i, pd) in pds.iter().enumerate() {
                let tail = &table.values[i + 1][b];
                if tail.is_zero() {
                    continue;
                }
                for (l, r) in pd.ell.terms(a) {
                    let left = pd.alpha.apply(l)?.scale(&c);
                    let right = total.alg.mul(&pd.alpha.apply(r)?, tail);
                    if !left.is_zero() && !right.is_zero() {
                        tensors[t].push((left, right));
                    }
                }
            }
        }
    }
    let ell = StrongConnection::new(hopf, total.clone(), tensors)?;
    let report = verify_connection(&ell)?;
    if !report.pass() {
        return Err(Error::ConnectionInvalid(format!(
            "synthesized connection fails axioms: {:?}",
            report.failed_axioms()
        )));
    }
    Ok(ell)
}

/// Synthesizes a strong connection on the covering source via the full
/// pipeline: canonical gluing, gluing splittings, global piece sections
/// in ascending visiting order, and the piecewise synthesis formula with
/// the default subcomodules.
pub fn synthesize_from_covering(
    covering: &crate::pullback::CoveringFamily,
    piece_connections: &[StrongConnection],
    cap: usize,
) -> Result<StrongConnection> {
    let pipeline = crate::splitting::covering_pipeline(covering, piece_connections, cap)?;
    let n = covering.len();
    let mut pds = Vec::with_capacity(n);
    for piece in 0..n {
        let mut kappa = vec![piece];
        kappa.extend((0..n).filter(|&k| k != piece));
        let section = crate::splitting::covering_piece_section(&pipeline, covering, piece, &kappa)?;
        let ell = piece_connections[piece].clone();
        let v = PieceData::default_subcomodule(&covering.pieces[piece], &ell);
        let alpha = section.restrict(&v)?;
        pds.push(PieceData::new(
            &covering.source,
            covering.pieces[piece].clone(),
            ell,
            v,
            alpha,
        )?);
    }
    synthesize_piecewise(&pds, &covering.source)
}

/// A transfer map between two glued pieces, given by its values on an
/// explicit list of arguments. The span of the arguments must be a
/// subcomodule; linearity, colinearity, unitality (when the unit is in
/// the span) and the gluing compatibility are all verified.
#[derive(Clone, Debug)]
pub struct TransferTable {
    pub pairs: Vec<(Vector, Vector)>,
}

impl TransferTable {
    pub fn new(pairs: Vec<(Vector, Vector)>) -> Self {
        TransferTable { pairs }
    }

    fn domain_span(&self, dim: usize) -> Subspace {
        let inputs: Vec<Vector> = self.pairs.iter().map(|(x, _)| x.clone()).collect();
        Subspace::from_spanning(dim, &inputs)
    }

    /// Value on `x`, extended linearly; `x` must lie in the span of the
    /// table inputs and the table must be consistent.
    pub fn apply(&self, x: &Vector) -> Result<Vector> {
        let inputs: Vec<Vector> = self.pairs.iter().map(|(a, _)| a.clone()).collect();
        let coeffs = Matrix::from_cols(&inputs)
            .solve(x)
            .ok_or(Error::Inconsistent)?;
        let out_dim = self.pairs[0].1.dim();
        let mut out = Vector::zero(out_dim);
        for (t, c) in coeffs.support() {
            out = out.add(&self.pairs[t].1.scale(c));
        }
        // consistency under linear dependence of inputs
        let recombined: Vector = {
            let mut acc = Vector::zero(x.dim());
            for (t, c) in coeffs.support() {
                acc = acc.add(&self.pairs[t].0.scale(c));
            }
            acc
        };
        if recombined != *x {
            return Err(Error::Inconsistent);
        }
        Ok(out)
    }

    /// Verifies the transfer constraints: the span of the inputs is a
    /// subcomodule, the table is colinear on it, maps unit to unit when
    /// the unit is in the span, and satisfies
    /// `pi_cod . f = pi_dom` on every argument. Residuals are returned
    /// per failing pair.
    pub fn verify(
        &self,
        dom: &ComoduleAlgebra,
        cod: &ComoduleAlgebra,
        pi_dom: &Matrix,
        pi_cod: &Matrix,
    ) -> Result<Vec<Vector>> {
        let span = self.domain_span(dom.dim());
        if !dom.is_subcomodule(&span) {
            return Err(Error::CoactionAxiom(
                "transfer arguments do not span a subcomodule".into(),
            ));
        }
        let nh = dom.hopf.dim();
        let mut residuals = Vec::new();
        for (x, y) in &self.pairs {
            // gluing row block
            let glue = pi_cod.mul_vec(y).sub(&pi_dom.mul_vec(x));
            if !glue.is_zero() {
                residuals.push(glue);
                continue;
            }
            // colinearity row block: coaction(f(x)) = (f (x) id)(coaction x);
            // the sweedler legs of x stay in the span, so f applies
            let lhs = cod.coaction.mul_vec(y);
            let mut rhs = Vector::zero(cod.dim() * nh);
            for (leg, j) in dom.sweedler(x) {
                let fleg = self.apply(&leg)?;
                for (r, v) in fleg.support() {
                    let idx = r * nh + j;
                    let cur = rhs.get(idx) + v;
                    rhs.set(idx, cur);
                }
            }
            let res = lhs.sub(&rhs);
            if !res.is_zero() {
                residuals.push(res);
            }
        }
        if span.contains(dom.alg.unit()) && self.apply(dom.alg.unit())? != *cod.alg.unit() {
            return Err(Error::NotUnital);
        }
        Ok(residuals)
    }
}

/// Canonical solution of the transfer equations for a single element:
/// find `y` in the codomain piece with `coaction(y) = y (x) g` and
/// `pi_cod(y) = pi_dom(x)`, given that `x` satisfies
/// `coaction(x) = x (x) g`.
pub fn solve_transfer(
    dom: &ComoduleAlgebra,
    cod: &ComoduleAlgebra,
    pi_dom: &Matrix,
    pi_cod: &Matrix,
    x: &Vector,
    g: &GroupLike,
) -> Result<Vector> {
    if dom.coaction.mul_vec(x) != x.tensor(&g.element) {
        return Err(Error::Invalid(
            "argument is not homogeneous for the given group-like".into(),
        ));
    }
    let nh = cod.hopf.dim();
    let nb = cod.dim();
    // rows: (coaction - (.) (x) g) stacked over pi_cod
    let mut hom = cod.coaction.clone();
    for q in 0..nb {
        for (hidx, c) in g.element.support() {
            let row = q * nh + hidx;
            let cur = hom.get(row, q) - c;
            hom.set(row, q, cur);
        }
    }
    let system = hom.vstack(pi_cod);
    let mut rhs = Vector::zero(system.rows());
    let target = pi_dom.mul_vec(x);
    for (r, c) in target.support() {
        rhs.set(nb * nh + r, c.clone());
    }
    system.solve(&rhs).ok_or(Error::Inconsistent)
}

/// Data of a two-piece fiber product used by [`glue_two`].
pub struct TwoPieceGluing<'a> {
    /// The glued total comodule algebra.
    pub total: &'a ComoduleAlgebra,
    /// The two pieces.
    pub pieces: [&'a ComoduleAlgebra; 2],
    /// Gluing maps of each piece into the shared overlap.
    pub over: [&'a Matrix; 2],
    /// Projections of the total onto the pieces.
    pub projections: [&'a Matrix; 2],
    /// Columns embed a pair `(x0, x1)` as an element of the total: the
    /// membership test of the fiber product.
    pub membership: &'a dyn Fn(&Vector, &Vector) -> Option<Vector>,
}

/// Glues strong connections on a two-piece fiber product:
///
/// `l(h) = (l_1^<1>, f(l_1^<1>)) (x) (l_1^<2>, f(l_1^<2>))
///       + (0, (counit(h^(1)) - f(l_1(h^(1))^<1>) f(l_1(h^(1))^<2>)) l_2(h^(2))^<1>)
///         (x) (f'(l_2(h^(2))^<2>), l_2(h^(2))^<2>)`
///
/// with `f`, `f'` the two transfer maps. The transfer constraints and the
/// axioms of the result are verified.
pub fn glue_two(
    data: &TwoPieceGluing<'_>,
    ell1: &StrongConnection,
    ell2: &StrongConnection,
    f12: &TransferTable,
    f21: &TransferTable,
) -> Result<StrongConnection> {
    let hopf = ell1.hopf.clone();
    if *ell2.hopf != *hopf {
        return Err(Error::DimensionMismatch(
            "pieces over different Hopf algebras".into(),
        ));
    }
    let res12 = f12.verify(data.pieces[0], data.pieces[1], data.over[0], data.over[1])?;
    let res21 = f21.verify(data.pieces[1], data.pieces[0], data.over[1], data.over[0])?;
    if !res12.is_empty() || !res21.is_empty() {
        return Err(Error::ConnectionInvalid(
            "transfer maps violate the gluing equations".into(),
        ));
    }
    let nh = hopf.dim();
    let p2 = data.pieces[1];
    let mut tensors = vec![Vec::new(); nh];
    for t in 0..nh {
        // first block: push the first piece's terms across the gluing
        for (l, r) in ell1.terms(t) {
            let left = pair_element(data, l, &f12.apply(l)?)?;
            let right = pair_element(data, r, &f12.apply(r)?)?;
            tensors[t].push((left, right));
        }
        // second block: the correction supported on the second piece
        for ((a, b), c) in hopf.sweedler_of(&Vector::unit(nh, t)) {
            let mut w = p2.alg.unit().scale(hopf.counit.get(a));
            for (l, r) in ell1.terms(a) {
                let fl = f12.apply(l)?;
                let fr = f12.apply(r)?;
                w = w.sub(&p2.alg.mul(&fl, &fr));
            }
            if w.is_zero() {
                continue;
            }
            for (l2, r2) in ell2.terms(b) {
                let left_second = p2.alg.mul(&w, l2).scale(&c);
                let left = pair_element(data, &Vector::zero(data.pieces[0].dim()), &left_second)?;
                let right = pair_element(data, &f21.apply(r2)?, r2)?;
                tensors[t].push((left, right));
            }
        }
    }
    let ell = StrongConnection::new(hopf, data.total.clone(), tensors)?;
    let report = verify_connection(&ell)?;
    if !report.pass() {
        return Err(Error::ConnectionInvalid(format!(
            "glued connection fails axioms: {:?}",
            report.failed_axioms()
        )));
    }
    Ok(ell)
}

fn pair_element(data: &TwoPieceGluing<'_>, x0: &Vector, x1: &Vector) -> Result<Vector> {
    (data.membership)(x0, x1).ok_or(Error::NotInPullback)
}

/// The projector built from a strong connection at a group-like element.
#[derive(Clone, Debug)]
pub struct ProjectorResult {
    pub size: usize,
    /// `entries[i][j]` is an element of the target algebra.
    pub entries: Vec<Vec<Vector>>,
    pub idempotent: bool,
    pub coinvariant: bool,
    /// Minimal-rank legs used: `l(g) = sum_t left[t] (x) right[t]`.
    pub left_legs: Vec<Vector>,
    pub right_legs: Vec<Vector>,
}

/// Extracts the associated projector `p[i][j] = r_i l_j` from the value of
/// the connection at a group-like element. The tensor is first minimized
/// by rank factorization, so both leg families are linearly independent;
/// idempotency and entrywise coinvariance are verified exactly.
pub fn chern_galois_projector(ell: &StrongConnection, g: &GroupLike) -> Result<ProjectorResult> {
    let p = &ell.target;
    let np = p.dim();
    let m = ell.tensor_matrix(&g.element);
    // rank factorization M = K R with R the nonzero RREF rows
    let (r, pivots) = m.rref_with_pivots();
    let rank = pivots.len();
    let right_legs: Vec<Vector> = (0..rank).map(|i| r.row(i)).collect();
    let r_cols = Matrix::from_rows(&right_legs).transpose();
    let mut left_legs = vec![Vector::zero(np); rank];
    for i in 0..np {
        let coeffs = r_cols.solve(&m.row(i)).ok_or(Error::Inconsistent)?;
        for (t, c) in coeffs.support() {
            left_legs[t].set(i, c.clone());
        }
    }
    // independence rank tests on both leg families
    if Matrix::from_rows(&left_legs).rank() != rank || Matrix::from_rows(&right_legs).rank() != rank
    {
        return Err(Error::DependentLegs);
    }

    let mut entries = vec![vec![Vector::zero(np); rank]; rank];
    for i in 0..rank {
        for j in 0..rank {
            entries[i][j] = p.alg.mul(&right_legs[i], &left_legs[j]);
        }
    }
    let mut idempotent = true;
    for i in 0..rank {
        for j in 0..rank {
            let mut acc = Vector::zero(np);
            for k in 0..rank {
                acc = acc.add(&p.alg.mul(&entries[i][k], &entries[k][j]));
            }
            if acc != entries[i][j] {
                idempotent = false;
            }
        }
    }
    let mut coinvariant = true;
    for row in &entries {
        for e in row {
            if p.coaction.mul_vec(e) != e.tensor(p.hopf.unit()) {
                coinvariant = false;
            }
        }
    }
    Ok(ProjectorResult {
        size: rank,
        entries,
        idempotent,
        coinvariant,
        left_legs,
        right_legs,
    })
}
