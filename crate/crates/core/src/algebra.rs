//! Finite-dimensional unital associative algebras from structure constants.
//!
//! An algebra is given by a multiplication table on a fixed basis and a
//! unit vector; associativity and the unit laws are checked exhaustively
//! at construction. Morphisms, two-sided ideals, quotients and direct
//! products all verify their defining identities when built, so a value of
//! one of these types is a certificate that the identity holds.

use std::sync::Arc;

use crate::linalg::{tensor_index, Matrix, Vector};

use crate::subspace::Subspace;
use crate::{Error, Result};

/// Unital associative algebra presented by structure constants:
/// `e_i * e_j = sum_k mult[i][j][k] e_k`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct StructureAlgebra {
    dim: usize,
    mult: Vec<Vec<Vector>>,
    unit: Vector,
}

impl StructureAlgebra {
    /// Builds an algebra, checking associativity on every basis triple and
    /// the unit laws on every basis vector.
    pub fn new(dim: usize, mult: Vec<Vec<Vector>>, unit: Vector) -> Result<Arc<Self>> {
        if mult.len() != dim
            || mult.iter().any(|row| row.len() != dim)
            || mult.iter().any(|row| row.iter().any(|v| v.dim() != dim))
            || unit.dim() != dim
        {
            return Err(Error::DimensionMismatch(
                "structure constant table shape".into(),
            ));
        }
        let alg = StructureAlgebra { dim, mult, unit };
        for i in 0..dim {
            let e = Vector::unit(dim, i);
            if alg.mul(&alg.unit, &e) != e || alg.mul(&e, &alg.unit) != e {
                return Err(Error::UnitAxiom(i));
            }
        }
        for i in 0..dim {
            for j in 0..dim {
                let ij = alg.mult[i][j].clone();
                for k in 0..dim {
                    let left = alg.mul(&ij, &Vector::unit(dim, k));
                    let right = alg.mul(&Vector::unit(dim, i), &alg.mult[j][k]);
                    if left != right {
                        return Err(Error::NotAssociative(i, j, k));
                    }
                }
            }
        }
        Ok(Arc::new(alg))
    }

    /// The commutative algebra of functions on `n` points
    /// (`e_i * e_j = delta_ij e_i`, unit = all ones).
    pub fn pointwise(n: usize) -> Arc<Self> {
        let mult = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        if i == j {
                            Vector::unit(n, i)
                        } else {
                            Vector::zero(n)
                        }
                    })
                    .collect()
            })
            .collect();
        let unit = Vector::new(vec![crate::scalar::one(); n]);
        StructureAlgebra::new(n, mult, unit).expect("pointwise algebra is associative")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn unit(&self) -> &Vector {
        &self.unit
    }

    /// Product of basis vectors `e_i * e_j` straight from the table.
    pub fn basis_product(&self, i: usize, j: usize) -> &Vector {
        &self.mult[i][j]
    }

    /// Product of two arbitrary elements.
    pub fn mul(&self, x: &Vector, y: &Vector) -> Vector {
        assert_eq!(x.dim(), self.dim);
        assert_eq!(y.dim(), self.dim);
        let mut out = Vector::zero(self.dim);
        for (i, a) in x.support() {
            for (j, b) in y.support() {
                let c = a * b;
                out = out.add(&self.mult[i][j].scale(&c));
            }
        }
        out
    }

    /// True when `sub` contains the unit and is closed under products.
    pub fn is_unital_subalgebra(&self, sub: &Subspace) -> bool {
        if sub.ambient_dim() != self.dim || !sub.contains(&self.unit) {
            return false;
        }
        sub.basis()
            .iter()
            .all(|a| sub.basis().iter().all(|b| sub.contains(&self.mul(a, b))))
    }

    /// Matrix of left multiplication by `x`.
    pub fn left_mul_matrix(&self, x: &Vector) -> Matrix {
        let cols: Vec<Vector> = (0..self.dim)
            .map(|j| self.mul(x, &Vector::unit(self.dim, j)))
            .collect();
        Matrix::from_cols(&cols)
    }

    /// Matrix of right multiplication by `x`.
    pub fn right_mul_matrix(&self, x: &Vector) -> Matrix {
        let cols: Vec<Vector> = (0..self.dim)
            .map(|j| self.mul(&Vector::unit(self.dim, j), x))
            .collect();
        Matrix::from_cols(&cols)
    }
}

/// Product on a tensor product of two algebras,
/// `(a (x) b)(c (x) d) = ac (x) bd`, computed without materializing the
/// tensor-square structure constants.
pub fn tensor_mul(a: &StructureAlgebra, b: &StructureAlgebra, x: &Vector, y: &Vector) -> Vector {
    let db = b.dim();
    assert_eq!(x.dim(), a.dim() * db);
    assert_eq!(y.dim(), a.dim() * db);
    let mut out = Vector::zero(x.dim());
    for (p, cx) in x.support() {
        let (i, k) = (p / db, p % db);
        for (q, cy) in y.support() {
            let (j, l) = (q / db, q % db);
            let coeff = cx * cy;
            let left = a.basis_product(i, j);
            let right = b.basis_product(k, l);
            for (r, lr) in left.support() {
                for (s, rs) in right.support() {
                    let idx = tensor_index(r, s, db);
                    let cur = out.get(idx) + &coeff * &(lr * rs);
                    out.set(idx, cur);
                }
            }
        }
    }
    out
}

/// Unit of the tensor product algebra.
pub fn tensor_unit(a: &StructureAlgebra, b: &StructureAlgebra) -> Vector {
    a.unit().tensor(b.unit())
}

/// An algebra homomorphism, verified multiplicative and unital at
/// construction.
#[derive(Clone, Debug)]
pub struct AlgMorphism {
    pub domain: Arc<StructureAlgebra>,
    pub codomain: Arc<StructureAlgebra>,
    pub matrix: Matrix,
}

impl AlgMorphism {
    pub fn new(
        domain: Arc<StructureAlgebra>,
        codomain: Arc<StructureAlgebra>,
        matrix: Matrix,
    ) -> Result<Self> {
        if matrix.rows() != codomain.dim() || matrix.cols() != domain.dim() {
            return Err(Error::DimensionMismatch("morphism matrix shape".into()));
        }
        if matrix.mul_vec(domain.unit()) != *codomain.unit() {
            return Err(Error::NotUnital);
        }
        for i in 0..domain.dim() {
            let fi = matrix.col(i);
            for j in 0..domain.dim() {
                let fj = matrix.col(j);
                let lhs = matrix.mul_vec(domain.basis_product(i, j));
                let rhs = codomain.mul(&fi, &fj);
                if lhs != rhs {
                    return Err(Error::NotMultiplicative(i, j));
                }
            }
        }
        Ok(AlgMorphism {
            domain,
            codomain,
            matrix,
        })
    }

    pub fn identity(alg: &Arc<StructureAlgebra>) -> Self {
        AlgMorphism {
            domain: alg.clone(),
            codomain: alg.clone(),
            matrix: Matrix::identity(alg.dim()),
        }
    }

    pub fn apply(&self, x: &Vector) -> Vector {
        self.matrix.mul_vec(x)
    }

    pub fn is_surjective(&self) -> bool {
        self.matrix.rank() == self.codomain.dim()
    }

    /// Kernel as a verified two-sided ideal of the domain.
    pub fn kernel_ideal(&self) -> Ideal {
        let space = self.matrix.kernel();
        Ideal::new(self.domain.clone(), space)
            .expect("kernel of an algebra morphism is a two-sided ideal")
    }

    /// Composition `self . g` (apply `g` first).
    pub fn compose(&self, g: &AlgMorphism) -> Result<AlgMorphism> {
        if *g.codomain != *self.domain {
            return Err(Error::DimensionMismatch("composition mismatch".into()));
        }
        AlgMorphism::new(
            g.domain.clone(),
            self.codomain.clone(),
            self.matrix.mul(&g.matrix),
        )
    }
}

/// A two-sided ideal, verified closed under left and right multiplication
/// by every basis element.
#[derive(Clone, Debug)]
pub struct Ideal {
    pub algebra: Arc<StructureAlgebra>,
    pub space: Subspace,
}

impl Ideal {
    pub fn new(algebra: Arc<StructureAlgebra>, space: Subspace) -> Result<Self> {
        if space.ambient_dim() != algebra.dim() {
            return Err(Error::DimensionMismatch("ideal ambient dimension".into()));
        }
        for (bi, b) in space.basis().iter().enumerate() {
            for i in 0..algebra.dim() {
                let e = Vector::unit(algebra.dim(), i);
                if !space.contains(&algebra.mul(&e, b)) || !space.contains(&algebra.mul(b, &e)) {
                    return Err(Error::NotAnIdeal(bi));
                }
            }
        }
        Ok(Ideal { algebra, space })
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    /// Sum of two ideals of the same algebra.
    pub fn sum(&self, other: &Ideal) -> Result<Ideal> {
        Ideal::new(self.algebra.clone(), self.space.sum(&other.space)?)
    }
}

/// A quotient algebra together with its canonical projection and the
/// solve-based linear section.
#[derive(Clone, Debug)]
pub struct Quotient {
    pub algebra: Arc<StructureAlgebra>,
    pub projection: AlgMorphism,
    /// Linear section of the projection with `projection . section = id`;
    /// columns are the canonical complement representatives.
    pub section: Matrix,
}

/// Quotient by a verified two-sided ideal. The quotient basis is the
/// canonical complement of the ideal, so class representatives are
/// deterministic.
pub fn quotient(alg: &Arc<StructureAlgebra>, ideal: &Ideal) -> Result<Quotient> {
    if !Arc::ptr_eq(alg, &ideal.algebra) && **alg != *ideal.algebra {
        return Err(Error::Invalid(
            "ideal belongs to a different algebra".into(),
        ));
    }
    let n = alg.dim();
    let complement = Subspace::full(n).complement_of(&ideal.space)?;
    let q = complement.dim();

    // projection: write e_i = (ideal part) + sum_j lambda_j c_j and keep
    // the complement coordinates.
    let ideal_cols = ideal.space.basis_cols();
    let comp_cols = complement.basis_cols();
    let decomp = ideal_cols.hstack(&comp_cols);
    let mut proj = Matrix::zero(q, n);
    for i in 0..n {
        let x = decomp
            .solve(&Vector::unit(n, i))
            .ok_or(Error::Inconsistent)?;
        for j in 0..q {
            proj.set(j, i, x.get(ideal.space.dim() + j).clone());
        }
    }

    // structure constants on the class representatives.
    let mut mult = Vec::with_capacity(q);
    for a in 0..q {
        let mut row = Vec::with_capacity(q);
        for b in 0..q {
            let prod = alg.mul(&complement.basis()[a], &complement.basis()[b]);
            row.push(proj.mul_vec(&prod));
        }
        mult.push(row);
    }
    let unit_q = proj.mul_vec(alg.unit());
    let qalg = StructureAlgebra::new(q, mult, unit_q)?;
    let projection = AlgMorphism::new(alg.clone(), qalg.clone(), proj)?;
    if projection.matrix.kernel() != ideal.space {
        return Err(Error::Invalid(
            "projection kernel differs from the ideal".into(),
        ));
    }
    Ok(Quotient {
        algebra: qalg,
        projection,
        section: comp_cols,
    })
}

/// Direct product of algebras with its component projections.
#[derive(Clone, Debug)]
pub struct DirectProduct {
    pub algebra: Arc<StructureAlgebra>,
    pub projections: Vec<AlgMorphism>,
    /// Offsets of each component inside the product coordinates.
    pub offsets: Vec<usize>,
}

pub fn direct_product(factors: &[Arc<StructureAlgebra>]) -> Result<DirectProduct> {
    if factors.is_empty() {
        return Err(Error::Invalid("direct product of an empty list".into()));
    }
    let mut offsets = Vec::with_capacity(factors.len());
    let mut total = 0;
    for f in factors {
        offsets.push(total);
        total += f.dim();
    }
    let mut mult = vec![vec![Vector::zero(total); total]; total];
    let mut unit = Vector::zero(total);
    for (f, &off) in factors.iter().zip(&offsets) {
        for i in 0..f.dim() {
            for j in 0..f.dim() {
                let mut v = Vector::zero(total);
                for (k, c) in f.basis_product(i, j).support() {
                    v.set(off + k, c.clone());
                }
                mult[off + i][off + j] = v;
            }
        }
        for (k, c) in f.unit().support() {
            unit.set(off + k, c.clone());
        }
    }
    let algebra = StructureAlgebra::new(total, mult, unit)?;
    let mut projections = Vec::with_capacity(factors.len());
    for (f, &off) in factors.iter().zip(&offsets) {
        let mut m = Matrix::zero(f.dim(), total);
        for i in 0..f.dim() {
            m.set(i, off + i, crate::scalar::one());
        }
        projections.push(AlgMorphism::new(algebra.clone(), f.clone(), m)?);
    }
    Ok(DirectProduct {
        algebra,
        projections,
        offsets,
    })
}

/// A morphism restricted to a unital subalgebra, re-expressed on the
/// subalgebra's canonical basis, with codomain the image subalgebra.
#[derive(Clone, Debug)]
pub struct RestrictedMorphism {
    pub morphism: AlgMorphism,
    /// Columns embed the restricted domain basis into the original domain.
    pub domain_inclusion: Matrix,
    /// Columns embed the image basis into the original codomain.
    pub image_inclusion: Matrix,
    pub domain_space: Subspace,
    pub image_space: Subspace,
}

/// Restricts `f` to the unital subalgebra spanned by `sub`.
pub fn subalgebra_restrict(f: &AlgMorphism, sub: &Subspace) -> Result<RestrictedMorphism> {
    if !f.domain.is_unital_subalgebra(sub) {
        return Err(Error::NotASubalgebra);
    }
    let image = f.matrix.image_of(sub);
    if !f.codomain.is_unital_subalgebra(&image) {
        return Err(Error::NotASubalgebra);
    }
    let dom_alg = algebra_on_subspace(&f.domain, sub)?;
    let img_alg = algebra_on_subspace(&f.codomain, &image)?;
    let mut m = Matrix::zero(image.dim(), sub.dim());
    for (j, b) in sub.basis().iter().enumerate() {
        let y = f.apply(b);
        let coords = image.coords_of(&y).ok_or(Error::Inconsistent)?;
        for (i, c) in coords.support() {
            m.set(i, j, c.clone());
        }
    }
    let morphism = AlgMorphism::new(dom_alg, img_alg, m)?;
    Ok(RestrictedMorphism {
        morphism,
        domain_inclusion: sub.basis_cols(),
        image_inclusion: image.basis_cols(),
        domain_space: sub.clone(),
        image_space: image,
    })
}

/// The algebra structure induced on a unital subalgebra, expressed on the
/// subspace's canonical basis.
pub fn algebra_on_subspace(
    alg: &Arc<StructureAlgebra>,
    sub: &Subspace,
) -> Result<Arc<StructureAlgebra>> {
    if !alg.is_unital_subalgebra(sub) {
        return Err(Error::NotASubalgebra);
    }
    let d = sub.dim();
    let mut mult = vec![vec![Vector::zero(d); d]; d];
    for i in 0..d {
        for j in 0..d {
            let prod = alg.mul(&sub.basis()[i], &sub.basis()[j]);
            mult[i][j] = sub.coords_of(&prod).ok_or(Error::NotASubalgebra)?;
        }
    }
    let unit = sub.coords_of(alg.unit()).ok_or(Error::NotASubalgebra)?;
    StructureAlgebra::new(d, mult, unit)
}
