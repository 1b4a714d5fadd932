//! Canonical linear subspaces.
//!
//! A [`Subspace`] stores the reduced row-echelon basis of a subspace of
//! `Q^n`. Because the RREF basis is unique, two subspaces are equal
//! exactly when their stored bases are identical, which turns subspace
//! equality into a syntactic check. All lattice computations (kernels,
//! images, sums, intersections, complements) return canonical subspaces.

use num_traits::{One, Zero};

use crate::linalg::{Matrix, Vector};
use crate::scalar::Scalar;
use crate::{Error, Result};

/// A linear subspace of `Q^ambient_dim` in canonical (RREF) form.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Subspace {
    ambient_dim: usize,
    basis: Vec<Vector>,
}

impl Subspace {
    /// Canonicalizes an arbitrary spanning set.
    pub fn from_spanning(ambient_dim: usize, vectors: &[Vector]) -> Self {
        for v in vectors {
            assert_eq!(v.dim(), ambient_dim, "spanning vector of wrong dimension");
        }
        if vectors.is_empty() {
            return Subspace {
                ambient_dim,
                basis: Vec::new(),
            };
        }
        let (r, pivots) = Matrix::from_rows(vectors).rref_with_pivots();
        let basis = (0..pivots.len()).map(|i| r.row(i)).collect();
        Subspace { ambient_dim, basis }
    }

    pub fn zero(ambient_dim: usize) -> Self {
        Subspace {
            ambient_dim,
            basis: Vec::new(),
        }
    }

    pub fn full(ambient_dim: usize) -> Self {
        Subspace {
            ambient_dim,
            basis: (0..ambient_dim)
                .map(|i| Vector::unit(ambient_dim, i))
                .collect(),
        }
    }

    /// Span of a single vector.
    pub fn line(v: &Vector) -> Self {
        Subspace::from_spanning(v.dim(), std::slice::from_ref(v))
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vector] {
        &self.basis
    }

    pub fn is_zero(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.basis.len() == self.ambient_dim
    }

    /// Matrix whose columns are the canonical basis vectors
    /// (an `ambient_dim x 0` matrix for the zero subspace).
    pub fn basis_cols(&self) -> Matrix {
        if self.basis.is_empty() {
            return Matrix::zero(self.ambient_dim, 0);
        }
        Matrix::from_cols(&self.basis)
    }

    pub fn contains(&self, v: &Vector) -> bool {
        assert_eq!(v.dim(), self.ambient_dim);
        if v.is_zero() {
            return true;
        }
        self.coords_of(v).is_some()
    }

    /// Coordinates of `v` in the canonical basis, or `None` if `v` lies
    /// outside the subspace.
    pub fn coords_of(&self, v: &Vector) -> Option<Vector> {
        if self.basis.is_empty() {
            return if v.is_zero() {
                Some(Vector::zero(0))
            } else {
                None
            };
        }
        let x = self.basis_cols().solve(v)?;
        if self.basis_cols().mul_vec(&x) == *v {
            Some(x)
        } else {
            None
        }
    }

    /// Reconstructs the ambient vector with the given canonical-basis
    /// coordinates.
    pub fn from_coords(&self, coords: &Vector) -> Vector {
        assert_eq!(coords.dim(), self.dim());
        let mut out = Vector::zero(self.ambient_dim);
        for (i, c) in coords.support() {
            out = out.add(&self.basis[i].scale(c));
        }
        out
    }

    pub fn contains_subspace(&self, other: &Subspace) -> bool {
        other.basis.iter().all(|v| self.contains(v))
    }

    /// Subspace sum, computed by stacking bases and re-canonicalizing.
    pub fn sum(&self, other: &Subspace) -> Result<Subspace> {
        self.check_ambient(other)?;
        let mut vs = self.basis.clone();
        vs.extend_from_slice(&other.basis);
        Ok(Subspace::from_spanning(self.ambient_dim, &vs))
    }

    /// Subspace intersection via a combined-kernel construction: solutions
    /// of `A x = B y` with `A`, `B` the basis-column matrices.
    pub fn intersect(&self, other: &Subspace) -> Result<Subspace> {
        self.check_ambient(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(Subspace::zero(self.ambient_dim));
        }
        let a = self.basis_cols();
        let b = other.basis_cols();
        let combined = a.hstack(&b.scale(&-Scalar::one()));
        let ker = combined.kernel();
        let vectors: Vec<Vector> = ker
            .basis()
            .iter()
            .map(|k| {
                let mut x = Vector::zero(self.dim());
                for i in 0..self.dim() {
                    x.set(i, k.get(i).clone());
                }
                a.mul_vec(&x)
            })
            .collect();
        Ok(Subspace::from_spanning(self.ambient_dim, &vectors))
    }

    /// Direct complement of `sub` inside `self`, built by greedily
    /// sweeping `self`'s canonical basis and keeping vectors independent
    /// of `sub` and of the vectors already kept.
    pub fn complement_of(&self, sub: &Subspace) -> Result<Subspace> {
        self.check_ambient(sub)?;
        if !self.contains_subspace(sub) {
            return Err(Error::ContainmentViolated);
        }
        let mut stacked: Vec<Vector> = sub.basis.clone();
        let mut kept: Vec<Vector> = Vec::new();
        let mut rank = sub.dim();
        for v in &self.basis {
            stacked.push(v.clone());
            let new_rank = Matrix::from_rows(&stacked).rank();
            if new_rank > rank {
                rank = new_rank;
                kept.push(v.clone());
            } else {
                stacked.pop();
            }
        }
        Ok(Subspace::from_spanning(self.ambient_dim, &kept))
    }

    fn check_ambient(&self, other: &Subspace) -> Result<()> {
        if self.ambient_dim != other.ambient_dim {
            return Err(Error::DimensionMismatch(format!(
                "ambient dimensions {} and {}",
                self.ambient_dim, other.ambient_dim
            )));
        }
        Ok(())
    }
}

impl Matrix {
    /// Canonical right null space. Rank-nullity holds exactly:
    /// `rank + kernel.dim() == cols`.
    pub fn kernel(&self) -> Subspace {
        let (r, pivots) = self.rref_with_pivots();
        let mut vectors = Vec::new();
        for free in (0..self.cols()).filter(|c| !pivots.contains(c)) {
            let mut v = Vector::zero(self.cols());
            v.set(free, Scalar::one());
            for (row, &pc) in pivots.iter().enumerate() {
                let coeff = r.get(row, free);
                if !coeff.is_zero() {
                    v.set(pc, -coeff);
                }
            }
            vectors.push(v);
        }
        Subspace::from_spanning(self.cols(), &vectors)
    }

    /// Column space as a canonical subspace.
    pub fn image(&self) -> Subspace {
        let cols: Vec<Vector> = (0..self.cols()).map(|j| self.col(j)).collect();
        Subspace::from_spanning(self.rows(), &cols)
    }

    /// Image of a subspace under this linear map.
    pub fn image_of(&self, s: &Subspace) -> Subspace {
        let mapped: Vec<Vector> = s.basis().iter().map(|v| self.mul_vec(v)).collect();
        Subspace::from_spanning(self.rows(), &mapped)
    }

    /// Preimage of a subspace under this linear map.
    pub fn preimage_of(&self, s: &Subspace) -> Subspace {
        // x is in the preimage iff m x lands in s, i.e. x is in the kernel
        // of (project-to-complement-of-s) . m; realized by stacking m with
        // the membership constraints of s.
        let constraints = complement_constraints(s);
        constraints.mul(self).kernel()
    }
}

/// Matrix whose kernel is exactly `s` (rows span the annihilator of `s`).
fn complement_constraints(s: &Subspace) -> Matrix {
    // The annihilator of s is the kernel of the transpose of its basis
    // matrix.
    if s.is_zero() {
        return Matrix::identity(s.ambient_dim());
    }
    let rows = Matrix::from_rows(s.basis());
    let ann = rows.kernel();
    Matrix::from_rows(ann.basis())
}

/// Canonical element of the affine solution set of `m x = v` constrained
/// to the subspace `within`: parameterizes `x = C t` over `within`'s basis
/// columns `C` and solves for the canonical `t`.
pub fn solve_in_subspace(m: &Matrix, v: &Vector, within: &Subspace) -> Option<Vector> {
    let c = within.basis_cols();
    let t = m.mul(&c).solve(v)?;
    Some(c.mul_vec(&t))
}
