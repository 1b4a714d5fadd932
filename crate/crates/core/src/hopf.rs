//! Finite-dimensional Hopf algebras and right comodule algebras.
//!
//! Comultiplication is stored as a `dim^2 x dim` matrix against the tensor
//! index convention of [`crate::linalg::tensor_index`], the counit as the
//! vector of its values on basis elements, and the antipode as a square
//! matrix. Every Hopf and comodule axiom is checked exhaustively at
//! construction, which is affordable because all hosted algebras here are
//! finite-dimensional.

use std::sync::Arc;

use num_traits::{One, Zero};

use crate::algebra::{tensor_mul, AlgMorphism, Ideal, Quotient, StructureAlgebra};
use crate::linalg::{tensor_index, Matrix, Vector};
use crate::scalar::Scalar;
use crate::subspace::Subspace;
use crate::{Error, Result};

/// Multiplication table of a finite group, validated on construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupTable {
    n: usize,
    mul: Vec<Vec<usize>>,
    identity: usize,
}

impl GroupTable {
    pub fn new(mul: Vec<Vec<usize>>) -> Result<Self> {
        let n = mul.len();
        if n == 0 || mul.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidGroupTable(
                "table must be square and nonempty".into(),
            ));
        }
        if mul.iter().flatten().any(|&x| x >= n) {
            return Err(Error::InvalidGroupTable("entry out of range".into()));
        }
        let identity = (0..n)
            .find(|&e| (0..n).all(|g| mul[e][g] == g && mul[g][e] == g))
            .ok_or_else(|| Error::InvalidGroupTable("no identity element".into()))?;
        for g in 0..n {
            if !(0..n).any(|h| mul[g][h] == identity && mul[h][g] == identity) {
                return Err(Error::InvalidGroupTable(format!(
                    "element {g} has no inverse"
                )));
            }
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if mul[mul[a][b]][c] != mul[a][mul[b][c]] {
                        return Err(Error::InvalidGroupTable(format!(
                            "not associative at ({a}, {b}, {c})"
                        )));
                    }
                }
            }
        }
        Ok(GroupTable { n, mul, identity })
    }

    /// The cyclic group of order `n`.
    pub fn cyclic(n: usize) -> Self {
        let mul = (0..n)
            .map(|a| (0..n).map(|b| (a + b) % n).collect())
            .collect();
        GroupTable::new(mul).expect("cyclic table is a group")
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a][b]
    }

    pub fn inverse(&self, a: usize) -> usize {
        (0..self.n)
            .find(|&b| self.mul[a][b] == self.identity)
            .expect("validated group has inverses")
    }
}

/// A finite-dimensional Hopf algebra with all axioms verified.
#[derive(Clone, Debug, PartialEq)]
pub struct HopfAlgebra {
    pub alg: Arc<StructureAlgebra>,
    /// Comultiplication `H -> H (x) H` as a `dim^2 x dim` matrix.
    pub comult: Matrix,
    /// Counit values on basis vectors.
    pub counit: Vector,
    /// Antipode as a `dim x dim` matrix.
    pub antipode: Matrix,
}

impl HopfAlgebra {
    pub fn new(
        alg: Arc<StructureAlgebra>,
        comult: Matrix,
        counit: Vector,
        antipode: Matrix,
    ) -> Result<Arc<Self>> {
        let n = alg.dim();
        if comult.rows() != n * n || comult.cols() != n {
            return Err(Error::DimensionMismatch("comultiplication shape".into()));
        }
        if counit.dim() != n || antipode.rows() != n || antipode.cols() != n {
            return Err(Error::DimensionMismatch("counit or antipode shape".into()));
        }
        let h = HopfAlgebra {
            alg,
            comult,
            counit,
            antipode,
        };

        // coassociativity
        let id = Matrix::identity(n);
        let lhs = h.comult.kron(&id).mul(&h.comult);
        let rhs = id.kron(&h.comult).mul(&h.comult);
        if lhs != rhs {
            return Err(Error::CoalgebraAxiom("coassociativity".into()));
        }

        // counit laws
        let eps_row = Matrix::from_rows(std::slice::from_ref(&h.counit));
        if eps_row.kron(&id).mul(&h.comult) != id || id.kron(&eps_row).mul(&h.comult) != id {
            return Err(Error::CoalgebraAxiom("counit law".into()));
        }

        // comultiplication and counit are algebra maps
        if h.comult.mul_vec(h.alg.unit()) != h.alg.unit().tensor(h.alg.unit()) {
            return Err(Error::CoalgebraAxiom(
                "comultiplication is not unital".into(),
            ));
        }
        if !h.counit_of(h.alg.unit()).is_one() {
            return Err(Error::CoalgebraAxiom("counit is not unital".into()));
        }
        for i in 0..n {
            let di = h.comult.col(i);
            for j in 0..n {
                let dj = h.comult.col(j);
                let lhs = h.comult.mul_vec(h.alg.basis_product(i, j));
                let rhs = tensor_mul(&h.alg, &h.alg, &di, &dj);
                if lhs != rhs {
                    return Err(Error::CoalgebraAxiom(format!(
                        "comultiplication not multiplicative at ({i}, {j})"
                    )));
                }
                let e_lhs = h.counit_of(h.alg.basis_product(i, j));
                let e_rhs = h.counit_of(&Vector::unit(n, i)) * h.counit_of(&Vector::unit(n, j));
                if e_lhs != e_rhs {
                    return Err(Error::CoalgebraAxiom(format!(
                        "counit not multiplicative at ({i}, {j})"
                    )));
                }
            }
        }

        // antipode axioms: m . (S (x) id) . comult = unit . counit
        //                = m . (id (x) S) . comult
        for t in 0..n {
            let expected = h.alg.unit().scale(h.counit.get(t));
            let mut left = Vector::zero(n);
            let mut right = Vector::zero(n);
            for (p, c) in h.comult.col(t).support() {
                let (a, b) = (p / n, p % n);
                let sa = h.antipode.col(a);
                let sb = h.antipode.col(b);
                left = left.add(&h.alg.mul(&sa, &Vector::unit(n, b)).scale(c));
                right = right.add(&h.alg.mul(&Vector::unit(n, a), &sb).scale(c));
            }
            if left != expected || right != expected {
                return Err(Error::CoalgebraAxiom(format!(
                    "antipode axiom at basis {t}"
                )));
            }
        }

        Ok(Arc::new(h))
    }

    pub fn dim(&self) -> usize {
        self.alg.dim()
    }

    pub fn unit(&self) -> &Vector {
        self.alg.unit()
    }

    pub fn counit_of(&self, x: &Vector) -> Scalar {
        x.support()
            .map(|(i, c)| c * self.counit.get(i))
            .fold(Scalar::zero(), |a, b| a + b)
    }

    pub fn antipode_of(&self, x: &Vector) -> Vector {
        self.antipode.mul_vec(x)
    }

    /// Coproduct expanded as a list of basis pairs with coefficients.
    pub fn sweedler_of(&self, x: &Vector) -> Vec<((usize, usize), Scalar)> {
        let n = self.dim();
        self.comult
            .mul_vec(x)
            .support()
            .map(|(p, c)| ((p / n, p % n), c.clone()))
            .collect()
    }

    /// True iff `flip . comult = comult`.
    pub fn is_cocommutative(&self) -> bool {
        let n = self.dim();
        let mut flip = Matrix::zero(n * n, n * n);
        for i in 0..n {
            for j in 0..n {
                flip.set(tensor_index(j, i, n), tensor_index(i, j, n), Scalar::one());
            }
        }
        flip.mul(&self.comult) == self.comult
    }

    pub fn has_bijective_antipode(&self) -> bool {
        self.antipode.is_invertible()
    }

    /// Checks the group-like equations for `v` and wraps it.
    pub fn grouplike(&self, v: &Vector) -> Result<GroupLike> {
        if self.comult.mul_vec(v) != v.tensor(v) || !self.counit_of(v).is_one() {
            return Err(Error::NotGroupLike);
        }
        Ok(GroupLike { element: v.clone() })
    }
}

/// A verified group-like element: `comult(g) = g (x) g`, `counit(g) = 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupLike {
    pub element: Vector,
}

/// Hopf algebra of functions on a finite group, on the point-indicator
/// basis: products are pointwise, the coproduct dualizes the group law,
/// the counit evaluates at the identity, the antipode pulls back along
/// inversion.
pub fn function_hopf(g: &GroupTable) -> Result<Arc<HopfAlgebra>> {
    let n = g.order();
    let alg = StructureAlgebra::pointwise(n);
    let mut comult = Matrix::zero(n * n, n);
    for a in 0..n {
        for b in 0..n {
            comult.set(tensor_index(a, b, n), g.mul(a, b), Scalar::one());
        }
    }
    let mut counit = Vector::zero(n);
    counit.set(g.identity(), Scalar::one());
    let mut antipode = Matrix::zero(n, n);
    for a in 0..n {
        antipode.set(g.inverse(a), a, Scalar::one());
    }
    HopfAlgebra::new(alg, comult, counit, antipode)
}

/// Group algebra of a finite group: basis elements multiply by the group
/// law and are group-like.
pub fn group_hopf(g: &GroupTable) -> Result<Arc<HopfAlgebra>> {
    let n = g.order();
    let mut mult = vec![vec![Vector::zero(n); n]; n];
    for (a, row) in mult.iter_mut().enumerate() {
        for (b, cell) in row.iter_mut().enumerate() {
            *cell = Vector::unit(n, g.mul(a, b));
        }
    }
    let alg = StructureAlgebra::new(n, mult, Vector::unit(n, g.identity()))?;
    let mut comult = Matrix::zero(n * n, n);
    for a in 0..n {
        comult.set(tensor_index(a, a, n), a, Scalar::one());
    }
    let counit = Vector::new(vec![Scalar::one(); n]);
    let mut antipode = Matrix::zero(n, n);
    for a in 0..n {
        antipode.set(g.inverse(a), a, Scalar::one());
    }
    HopfAlgebra::new(alg, comult, counit, antipode)
}

/// Transports a Hopf algebra to the basis whose `j`-th vector is the
/// `j`-th column of the invertible matrix `p` (in old coordinates). All
/// axioms are re-verified on the transported data.
pub fn change_basis(h: &HopfAlgebra, p: &Matrix) -> Result<Arc<HopfAlgebra>> {
    let n = h.dim();
    if p.rows() != n || p.cols() != n {
        return Err(Error::DimensionMismatch("basis change matrix shape".into()));
    }
    let pinv = p.inverse()?;
    let mut mult = vec![vec![Vector::zero(n); n]; n];
    for i in 0..n {
        for j in 0..n {
            let prod = h.alg.mul(&p.col(i), &p.col(j));
            mult[i][j] = pinv.mul_vec(&prod);
        }
    }
    let alg = StructureAlgebra::new(n, mult, pinv.mul_vec(h.alg.unit()))?;
    let comult = pinv.kron(&pinv).mul(&h.comult).mul(p);
    let counit = p.transpose().mul_vec(&h.counit);
    let antipode = pinv.mul(&h.antipode).mul(p);
    HopfAlgebra::new(alg, comult, counit, antipode)
}

/// A right comodule algebra: an algebra `P` with a coaction
/// `P -> P (x) H` that is coassociative, counital and multiplicative.
#[derive(Clone, Debug, PartialEq)]
pub struct ComoduleAlgebra {
    pub alg: Arc<StructureAlgebra>,
    pub hopf: Arc<HopfAlgebra>,
    /// Coaction as a `dim(P) * dim(H) x dim(P)` matrix.
    pub coaction: Matrix,
}

impl ComoduleAlgebra {
    pub fn new(
        alg: Arc<StructureAlgebra>,
        hopf: Arc<HopfAlgebra>,
        coaction: Matrix,
    ) -> Result<Self> {
        let (np, nh) = (alg.dim(), hopf.dim());
        if coaction.rows() != np * nh || coaction.cols() != np {
            return Err(Error::DimensionMismatch("coaction shape".into()));
        }
        let p = ComoduleAlgebra {
            alg,
            hopf,
            coaction,
        };

        // coassociativity: (coaction (x) id_H) . coaction
        //                = (id_P (x) comult) . coaction
        let id_h = Matrix::identity(nh);
        let id_p = Matrix::identity(np);
        let lhs = p.coaction.kron(&id_h).mul(&p.coaction);
        let rhs = id_p.kron(&p.hopf.comult).mul(&p.coaction);
        if lhs != rhs {
            return Err(Error::CoactionAxiom("coassociativity".into()));
        }

        // counitality
        let eps_row = Matrix::from_rows(std::slice::from_ref(&p.hopf.counit));
        if id_p.kron(&eps_row).mul(&p.coaction) != id_p {
            return Err(Error::CoactionAxiom("counitality".into()));
        }

        // multiplicativity and unitality
        if p.coaction.mul_vec(p.alg.unit()) != p.alg.unit().tensor(p.hopf.unit()) {
            return Err(Error::CoactionAxiom("coaction is not unital".into()));
        }
        for i in 0..np {
            let di = p.coaction.col(i);
            for j in 0..np {
                let dj = p.coaction.col(j);
                let lhs = p.coaction.mul_vec(p.alg.basis_product(i, j));
                let rhs = tensor_mul(&p.alg, &p.hopf.alg, &di, &dj);
                if lhs != rhs {
                    return Err(Error::CoactionAxiom(format!(
                        "coaction not multiplicative at ({i}, {j})"
                    )));
                }
            }
        }

        Ok(p)
    }

    /// The regular comodule: `P = H` coacting on itself by `comult`.
    pub fn regular(hopf: &Arc<HopfAlgebra>) -> Self {
        ComoduleAlgebra::new(hopf.alg.clone(), hopf.clone(), hopf.comult.clone())
            .expect("regular coaction satisfies the axioms")
    }

    /// The trivial coaction `p -> p (x) 1`.
    pub fn trivial(alg: Arc<StructureAlgebra>, hopf: &Arc<HopfAlgebra>) -> Self {
        let m = trivial_coaction(alg.dim(), hopf);
        ComoduleAlgebra::new(alg, hopf.clone(), m).expect("trivial coaction satisfies the axioms")
    }

    pub fn dim(&self) -> usize {
        self.alg.dim()
    }

    /// Canonical Heynemann-Sweedler expansion: pairs `(leg, j)` with
    /// `coaction(x) = sum_j leg_j (x) e_j` over the Hopf basis, zero legs
    /// omitted.
    pub fn sweedler(&self, x: &Vector) -> Vec<(Vector, usize)> {
        let nh = self.hopf.dim();
        let w = self.coaction.mul_vec(x);
        let mut legs = vec![Vector::zero(self.dim()); nh];
        for (p, c) in w.support() {
            legs[p % nh].set(p / nh, c.clone());
        }
        legs.into_iter()
            .enumerate()
            .filter(|(_, leg)| !leg.is_zero())
            .map(|(j, leg)| (leg, j))
            .collect()
    }

    /// The subalgebra of coaction-invariant elements: the kernel of
    /// `coaction - ((.) (x) 1)`. Verified to contain the unit and to be
    /// multiplicatively closed.
    pub fn coinvariants(&self) -> Subspace {
        let m = self.coaction.sub(&trivial_coaction(self.dim(), &self.hopf));
        let inv = m.kernel();
        assert!(
            self.alg.is_unital_subalgebra(&inv),
            "coinvariants must form a unital subalgebra"
        );
        inv
    }

    /// Smallest subcomodule containing `seed`: iteratively adds all first
    /// legs of the coaction until the subspace stabilizes.
    pub fn comodule_closure(&self, seed: &Subspace) -> Subspace {
        assert_eq!(seed.ambient_dim(), self.dim());
        let mut current = seed.clone();
        loop {
            let mut vectors: Vec<Vector> = current.basis().to_vec();
            for v in current.basis() {
                for (leg, _) in self.sweedler(v) {
                    vectors.push(leg);
                }
            }
            let next = Subspace::from_spanning(self.dim(), &vectors);
            if next.dim() == current.dim() {
                return next;
            }
            current = next;
        }
    }

    /// True when `sub` is stable under the coaction.
    pub fn is_subcomodule(&self, sub: &Subspace) -> bool {
        sub.basis()
            .iter()
            .all(|v| self.sweedler(v).iter().all(|(leg, _)| sub.contains(leg)))
    }
}

/// Matrix of the trivial coaction `p -> p (x) 1_H`.
pub fn trivial_coaction(dim_p: usize, hopf: &HopfAlgebra) -> Matrix {
    let nh = hopf.dim();
    let mut m = Matrix::zero(dim_p * nh, dim_p);
    for i in 0..dim_p {
        for (j, c) in hopf.unit().support() {
            m.set(tensor_index(i, j, nh), i, c.clone());
        }
    }
    m
}

/// Colinearity of a linear map between comodules over the same Hopf
/// algebra: `coaction_cod . f = (f (x) id) . coaction_dom`.
pub fn is_colinear(dom: &ComoduleAlgebra, cod: &ComoduleAlgebra, f: &Matrix) -> bool {
    assert_eq!(dom.hopf, cod.hopf, "comodules over different Hopf algebras");
    let id_h = Matrix::identity(dom.hopf.dim());
    cod.coaction.mul(f) == f.kron(&id_h).mul(&dom.coaction)
}

/// Quotient of a comodule algebra by an ideal that is also a subcomodule;
/// the coaction descends to the quotient and is re-verified there.
pub fn quotient_comodule(
    p: &ComoduleAlgebra,
    ideal: &Ideal,
) -> Result<(ComoduleAlgebra, Quotient)> {
    if !p.is_subcomodule(&ideal.space) {
        return Err(Error::CoactionAxiom("ideal is not a subcomodule".into()));
    }
    let q = crate::algebra::quotient(&p.alg, ideal)?;
    let id_h = Matrix::identity(p.hopf.dim());
    let proj_tensor = q.projection.matrix.kron(&id_h);
    // well-definedness: the composite kills the ideal
    let composite = proj_tensor.mul(&p.coaction);
    for v in ideal.space.basis() {
        if !composite.mul_vec(v).is_zero() {
            return Err(Error::CoactionAxiom(
                "coaction does not descend to the quotient".into(),
            ));
        }
    }
    let coaction_q = composite.mul(&q.section);
    let comodule = ComoduleAlgebra::new(q.algebra.clone(), p.hopf.clone(), coaction_q)?;
    Ok((comodule, q))
}

/// A surjective colinear algebra morphism between comodule algebras.
#[derive(Clone, Debug)]
pub struct ComodMorphism {
    pub domain: ComoduleAlgebra,
    pub codomain: ComoduleAlgebra,
    pub morphism: AlgMorphism,
}

impl ComodMorphism {
    pub fn new(domain: ComoduleAlgebra, codomain: ComoduleAlgebra, matrix: Matrix) -> Result<Self> {
        let morphism = AlgMorphism::new(domain.alg.clone(), codomain.alg.clone(), matrix)?;
        if !is_colinear(&domain, &codomain, &morphism.matrix) {
            return Err(Error::NotColinear);
        }
        Ok(ComodMorphism {
            domain,
            codomain,
            morphism,
        })
    }

    pub fn apply(&self, x: &Vector) -> Vector {
        self.morphism.apply(x)
    }
}
