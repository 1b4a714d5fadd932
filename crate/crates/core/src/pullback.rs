//! Multi-pullback algebras, cocycle and covering verification, and the
//! canonical gluing family of a covering.
//!
//! A gluing family assigns to (some) pairs of components a common target
//! algebra and a surjective morphism from each of the two components into
//! it. The multi-pullback is the subalgebra of the direct product where
//! all gluing images agree. The cocycle condition compares the triple
//! overlap isomorphisms induced on canonical quotients, realized here as
//! concrete matrices so the condition is a decidable equality.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::algebra::{
    algebra_on_subspace, direct_product, quotient, AlgMorphism, DirectProduct, Ideal, Quotient,
    StructureAlgebra,
};
use crate::hopf::{is_colinear, quotient_comodule, ComoduleAlgebra, HopfAlgebra};
use crate::lattice::{
    distributivity_counterexample, lattice_closure, SubspaceFamily, DEFAULT_CLOSURE_CAP,
};
use crate::linalg::{Matrix, Vector};
use crate::subspace::Subspace;
use crate::{Error, Result};

/// A family of gluing maps `A_i -> A_{ij}` over unordered pairs, every map
/// surjective and verified multiplicative at construction.
#[derive(Clone, Debug)]
pub struct GluingFamily {
    pub components: Vec<Arc<StructureAlgebra>>,
    /// Shared targets keyed by the unordered pair `(min, max)`.
    pub targets: BTreeMap<(usize, usize), Arc<StructureAlgebra>>,
    /// Gluing maps keyed by the ordered pair `(i, j)`, mapping `A_i` into
    /// the target of `{i, j}`.
    pub maps: BTreeMap<(usize, usize), AlgMorphism>,
}

impl GluingFamily {
    pub fn new(
        components: Vec<Arc<StructureAlgebra>>,
        targets: BTreeMap<(usize, usize), Arc<StructureAlgebra>>,
        maps: BTreeMap<(usize, usize), AlgMorphism>,
    ) -> Result<Self> {
        for (&(i, j), target) in &targets {
            if i >= j || j >= components.len() {
                return Err(Error::InvalidGluingFamily(format!(
                    "bad target pair ({i}, {j})"
                )));
            }
            for (a, b) in [(i, j), (j, i)] {
                let m = maps.get(&(a, b)).ok_or_else(|| {
                    Error::InvalidGluingFamily(format!("missing gluing map ({a}, {b})"))
                })?;
                if *m.domain != *components[a] || *m.codomain != **target {
                    return Err(Error::InvalidGluingFamily(format!(
                        "gluing map ({a}, {b}) has wrong endpoints"
                    )));
                }
                if !m.is_surjective() {
                    return Err(Error::InvalidGluingFamily(format!(
                        "gluing map ({a}, {b}) is not surjective"
                    )));
                }
            }
        }
        for &(i, j) in maps.keys() {
            let key = (i.min(j), i.max(j));
            if i == j || !targets.contains_key(&key) {
                return Err(Error::InvalidGluingFamily(format!(
                    "map ({i}, {j}) has no target"
                )));
            }
        }
        Ok(GluingFamily {
            components,
            targets,
            maps,
        })
    }

    pub fn size(&self) -> usize {
        self.components.len()
    }

    pub fn map(&self, i: usize, j: usize) -> Option<&AlgMorphism> {
        self.maps.get(&(i, j))
    }

    /// Kernel of the gluing map `A_i -> A_{ij}` as a subspace of `A_i`.
    pub fn kernel(&self, i: usize, j: usize) -> Option<Subspace> {
        self.map(i, j).map(|m| m.matrix.kernel())
    }

    /// Pairs `(i, j)` with `i < j` that carry gluing data.
    pub fn glued_pairs(&self) -> Vec<(usize, usize)> {
        self.targets.keys().copied().collect()
    }
}

/// The subalgebra of the direct product on which all gluing images agree.
#[derive(Clone, Debug)]
pub struct MultiPullback {
    pub family: GluingFamily,
    pub product: DirectProduct,
    /// The pullback as a subspace of the product coordinates.
    pub space: Subspace,
    pub total: Arc<StructureAlgebra>,
    /// Columns embed the total basis into the product coordinates.
    pub embedding: Matrix,
    /// Component projections restricted to the pullback.
    pub projections: Vec<AlgMorphism>,
}

impl MultiPullback {
    /// Assembles component vectors into product coordinates.
    pub fn tuple(&self, parts: &[Vector]) -> Vector {
        assert_eq!(parts.len(), self.family.size());
        let mut out = Vector::zero(self.product.algebra.dim());
        for ((part, &off), comp) in parts
            .iter()
            .zip(&self.product.offsets)
            .zip(&self.family.components)
        {
            assert_eq!(part.dim(), comp.dim());
            for (k, c) in part.support() {
                out.set(off + k, c.clone());
            }
        }
        out
    }

    /// Coordinates of a product vector in the pullback basis, if the
    /// vector satisfies all gluing constraints.
    pub fn membership(&self, product_vec: &Vector) -> Option<Vector> {
        self.space.coords_of(product_vec)
    }

    /// The `i`-th component of a pullback element.
    pub fn component(&self, i: usize, total_vec: &Vector) -> Vector {
        self.projections[i].apply(total_vec)
    }
}

/// Builds the multi-pullback of a gluing family with verified algebra
/// structure and component projections.
pub fn multipullback(family: &GluingFamily) -> Result<MultiPullback> {
    let product = direct_product(&family.components)?;
    let total_dim = product.algebra.dim();
    // stack the difference maps pi^i_j . pr_i - pi^j_i . pr_j
    let mut constraints = Matrix::zero(0, total_dim);
    for &(i, j) in &family.glued_pairs() {
        let mi = &family.map(i, j).expect("validated").matrix;
        let mj = &family.map(j, i).expect("validated").matrix;
        let di = mi.mul(&product.projections[i].matrix);
        let dj = mj.mul(&product.projections[j].matrix);
        constraints = constraints.vstack(&di.sub(&dj));
    }
    let space = if constraints.rows() == 0 {
        Subspace::full(total_dim)
    } else {
        constraints.kernel()
    };
    if !space.contains(product.algebra.unit()) {
        return Err(Error::InvalidGluingFamily(
            "unit tuple violates the gluing constraints".into(),
        ));
    }
    let total = algebra_on_subspace(&product.algebra, &space)?;
    let embedding = space.basis_cols();
    let mut projections = Vec::with_capacity(family.size());
    for (i, comp) in family.components.iter().enumerate() {
        let m = product.projections[i].matrix.mul(&embedding);
        projections.push(AlgMorphism::new(total.clone(), comp.clone(), m)?);
    }
    Ok(MultiPullback {
        family: family.clone(),
        product,
        space,
        total,
        embedding,
        projections,
    })
}

/// A gluing family of comodule algebras: gluing maps are additionally
/// colinear, and the pullback carries the componentwise coaction.
#[derive(Clone, Debug)]
pub struct ComoduleGluingFamily {
    pub base: GluingFamily,
    pub hopf: Arc<HopfAlgebra>,
    pub component_comodules: Vec<ComoduleAlgebra>,
    /// Target comodules keyed by the unordered pair.
    pub target_comodules: BTreeMap<(usize, usize), ComoduleAlgebra>,
}

impl ComoduleGluingFamily {
    pub fn new(
        base: GluingFamily,
        hopf: Arc<HopfAlgebra>,
        component_comodules: Vec<ComoduleAlgebra>,
        target_comodules: BTreeMap<(usize, usize), ComoduleAlgebra>,
    ) -> Result<Self> {
        if component_comodules.len() != base.size() {
            return Err(Error::InvalidGluingFamily("coaction count mismatch".into()));
        }
        for (c, a) in component_comodules.iter().zip(&base.components) {
            if *c.alg != **a {
                return Err(Error::InvalidGluingFamily(
                    "component comodule does not match component algebra".into(),
                ));
            }
        }
        for (&(i, j), m) in &base.maps {
            let key = (i.min(j), i.max(j));
            let target = target_comodules.get(&key).ok_or_else(|| {
                Error::InvalidGluingFamily(format!("missing target coaction for {key:?}"))
            })?;
            if !is_colinear(&component_comodules[i], target, &m.matrix) {
                return Err(Error::NotColinear);
            }
        }
        Ok(ComoduleGluingFamily {
            base,
            hopf,
            component_comodules,
            target_comodules,
        })
    }
}

/// Componentwise coaction on the direct product coordinates.
fn product_coaction(
    product: &DirectProduct,
    comodules: &[ComoduleAlgebra],
    hopf: &HopfAlgebra,
) -> Matrix {
    let nh = hopf.dim();
    let total = product.algebra.dim();
    let mut m = Matrix::zero(total * nh, total);
    for (c, &off) in comodules.iter().zip(&product.offsets) {
        for ((r, col), v) in c.coaction.support() {
            let (local_i, h) = (r / nh, r % nh);
            m.set((off + local_i) * nh + h, off + col, v.clone());
        }
    }
    m
}

/// Multi-pullback of a comodule gluing family; the total algebra carries
/// the componentwise coaction, verified to restrict to the pullback.
pub fn multipullback_comodule(
    family: &ComoduleGluingFamily,
) -> Result<(MultiPullback, ComoduleAlgebra)> {
    let mp = multipullback(&family.base)?;
    let nh = family.hopf.dim();
    let coaction_prod = product_coaction(&mp.product, &family.component_comodules, &family.hopf);
    let total_dim = mp.total.dim();
    let mut coaction = Matrix::zero(total_dim * nh, total_dim);
    for (b, basis_vec) in mp.space.basis().iter().enumerate() {
        let w = coaction_prod.mul_vec(basis_vec);
        // split into legs over the Hopf basis and re-express each leg in
        // pullback coordinates
        for h in 0..nh {
            let mut leg = Vector::zero(mp.product.algebra.dim());
            for (p, c) in w.support() {
                if p % nh == h {
                    leg.set(p / nh, c.clone());
                }
            }
            if leg.is_zero() {
                continue;
            }
            let coords = mp.space.coords_of(&leg).ok_or_else(|| {
                Error::CoactionAxiom("componentwise coaction escapes the pullback".into())
            })?;
            for (t, c) in coords.support() {
                coaction.set(t * nh + h, b, c.clone());
            }
        }
    }
    let comodule = ComoduleAlgebra::new(mp.total.clone(), family.hopf.clone(), coaction)?;
    Ok((mp, comodule))
}

/// One failing triple in a cocycle report, with a witness vector in the
/// relevant space.
#[derive(Clone, Debug)]
pub struct CocycleFailure {
    pub i: usize,
    pub j: usize,
    pub k: usize,
    pub witness: Vector,
}

/// Result of the cocycle-condition check.
#[derive(Clone, Debug, Default)]
pub struct CocycleReport {
    pub triples_checked: usize,
    /// Failures of the kernel-image symmetry condition.
    pub condition1_failures: Vec<CocycleFailure>,
    /// Failures of the composition identity on triple-overlap quotients.
    pub condition2_failures: Vec<CocycleFailure>,
}

impl CocycleReport {
    pub fn pass(&self) -> bool {
        self.condition1_failures.is_empty() && self.condition2_failures.is_empty()
    }
}

struct CocycleContext<'a> {
    family: &'a GluingFamily,
    /// Quotient of `A_i` by `ker pi^i_j + ker pi^i_k`, keyed by
    /// `(i, sorted {j, k})`.
    component_quotients: BTreeMap<(usize, usize, usize), Quotient>,
    /// Quotient of the target of `{i, j}` by the image of `ker pi^i_k`
    /// under `pi^i_j`, keyed by the *unordered* pair and `k`. Well-defined
    /// across orientations only when condition (1) holds.
    target_quotients: BTreeMap<(usize, usize, usize), Quotient>,
}

impl<'a> CocycleContext<'a> {
    fn new(family: &'a GluingFamily) -> Self {
        CocycleContext {
            family,
            component_quotients: BTreeMap::new(),
            target_quotients: BTreeMap::new(),
        }
    }

    fn component_quotient(&mut self, i: usize, j: usize, k: usize) -> Result<&Quotient> {
        let key = (i, j.min(k), j.max(k));
        if !self.component_quotients.contains_key(&key) {
            let kj = self
                .family
                .kernel(i, j)
                .ok_or_else(|| Error::InvalidGluingFamily(format!("no map ({i}, {j})")))?;
            let kk = self
                .family
                .kernel(i, k)
                .ok_or_else(|| Error::InvalidGluingFamily(format!("no map ({i}, {k})")))?;
            let ideal = Ideal::new(self.family.components[i].clone(), kj.sum(&kk)?)?;
            let q = quotient(&self.family.components[i], &ideal)?;
            self.component_quotients.insert(key, q);
        }
        Ok(&self.component_quotients[&key])
    }

    fn target_quotient(&mut self, i: usize, j: usize, k: usize) -> Result<&Quotient> {
        let key = (i.min(j), i.max(j), k);
        if !self.target_quotients.contains_key(&key) {
            let target = self.family.targets[&(i.min(j), i.max(j))].clone();
            let m = self
                .family
                .map(i, j)
                .ok_or_else(|| Error::InvalidGluingFamily(format!("no map ({i}, {j})")))?;
            let ker_ik = self
                .family
                .kernel(i, k)
                .ok_or_else(|| Error::InvalidGluingFamily(format!("no map ({i}, {k})")))?;
            let image = m.matrix.image_of(&ker_ik);
            let ideal = Ideal::new(target.clone(), image)?;
            let q = quotient(&target, &ideal)?;
            self.target_quotients.insert(key, q);
        }
        Ok(&self.target_quotients[&key])
    }

    /// The map `A^i_{jk} -> A_{ij} / pi^i_j(ker pi^i_k)` sending a class
    /// to the class of its gluing image; an isomorphism for surjective
    /// gluing maps.
    fn overlap_map(&mut self, i: usize, j: usize, k: usize) -> Result<Matrix> {
        let section = self.component_quotient(i, j, k)?.section.clone();
        let glue = self.family.map(i, j).expect("checked").matrix.clone();
        let proj = self.target_quotient(i, j, k)?.projection.matrix.clone();
        Ok(proj.mul(&glue).mul(&section))
    }

    /// Transition isomorphism from `A^j_{ik}` to `A^i_{jk}`.
    fn phi(&mut self, i: usize, j: usize, k: usize) -> Result<Matrix> {
        let forward = self.overlap_map(i, j, k)?;
        let backward = self.overlap_map(j, i, k)?;
        let inv = forward.inverse().map_err(|_| {
            Error::InvalidGluingFamily(format!("overlap map ({i},{j};{k}) not invertible"))
        })?;
        Ok(inv.mul(&backward))
    }
}

/// Verifies the cocycle condition of a gluing family: the kernel-image
/// symmetry for every triple, and the composition identity of the induced
/// quotient isomorphisms. Families with fewer than three components pass
/// vacuously. Failures are collected, not raised.
pub fn check_cocycle(family: &GluingFamily) -> Result<CocycleReport> {
    let n = family.size();
    let mut report = CocycleReport::default();
    let glued: Vec<(usize, usize)> = family.glued_pairs();
    let has_pair = |a: usize, b: usize| glued.contains(&(a.min(b), a.max(b)));

    // condition (1): pi^i_j(ker pi^i_k) = pi^j_i(ker pi^j_k)
    let mut condition1_ok: BTreeMap<(usize, usize, usize), bool> = BTreeMap::new();
    for i in 0..n {
        for j in (i + 1)..n {
            for k in 0..n {
                if k == i || k == j || !has_pair(i, j) || !has_pair(i, k) || !has_pair(j, k) {
                    continue;
                }
                let im_i = family
                    .map(i, j)
                    .expect("pair present")
                    .matrix
                    .image_of(&family.kernel(i, k).expect("pair present"));
                let im_j = family
                    .map(j, i)
                    .expect("pair present")
                    .matrix
                    .image_of(&family.kernel(j, k).expect("pair present"));
                let ok = im_i == im_j;
                condition1_ok.insert((i, j, k), ok);
                condition1_ok.insert((j, i, k), ok);
                if !ok {
                    let witness = im_i
                        .basis()
                        .iter()
                        .find(|v| !im_j.contains(v))
                        .or_else(|| im_j.basis().iter().find(|v| !im_i.contains(v)))
                        .cloned()
                        .unwrap_or_else(|| Vector::zero(im_i.ambient_dim()));
                    report
                        .condition1_failures
                        .push(CocycleFailure { i, j, k, witness });
                }
            }
        }
    }

    // condition (2): phi^{ik}_j = phi^{ij}_k . phi^{jk}_i on A^k_{ij}
    let mut ctx = CocycleContext::new(family);
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                if i == j || j == k || i == k {
                    continue;
                }
                if !(has_pair(i, j) && has_pair(i, k) && has_pair(j, k)) {
                    continue;
                }
                report.triples_checked += 1;
                // the quotient targets are only shared when condition (1)
                // holds on every orientation of the triple
                let all_ok = [(i, j, k), (i, k, j), (j, k, i)]
                    .iter()
                    .all(|key| *condition1_ok.get(key).unwrap_or(&false));
                if !all_ok {
                    continue;
                }
                let lhs = ctx.phi(i, k, j)?;
                let rhs = ctx.phi(i, j, k)?.mul(&ctx.phi(j, k, i)?);
                if lhs != rhs {
                    // witness: a representative in A_k of the first
                    // quotient basis vector where the maps disagree
                    let qk = ctx.component_quotient(k, i, j)?;
                    let dim = lhs.cols();
                    let col = (0..dim).find(|&c| lhs.col(c) != rhs.col(c)).unwrap_or(0);
                    let witness = qk.section.mul_vec(&Vector::unit(dim, col));
                    report
                        .condition2_failures
                        .push(CocycleFailure { i, j, k, witness });
                }
            }
        }
    }
    Ok(report)
}

/// A covering: surjective colinear comodule-algebra morphisms from a
/// common source onto the pieces.
#[derive(Clone, Debug)]
pub struct CoveringFamily {
    pub source: ComoduleAlgebra,
    pub pieces: Vec<ComoduleAlgebra>,
    pub maps: Vec<AlgMorphism>,
}

impl CoveringFamily {
    pub fn new(
        source: ComoduleAlgebra,
        pieces: Vec<ComoduleAlgebra>,
        maps: Vec<AlgMorphism>,
    ) -> Result<Self> {
        if pieces.len() != maps.len() {
            return Err(Error::DimensionMismatch("pieces/maps count".into()));
        }
        for (p, m) in pieces.iter().zip(&maps) {
            if *m.domain != *source.alg || *m.codomain != *p.alg {
                return Err(Error::DimensionMismatch("covering map endpoints".into()));
            }
            if !m.is_surjective() {
                return Err(Error::NotSurjective);
            }
            if !is_colinear(&source, p, &m.matrix) {
                return Err(Error::NotColinear);
            }
        }
        Ok(CoveringFamily {
            source,
            pieces,
            maps,
        })
    }

    pub fn len(&self) -> usize {
        self.maps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.maps.is_empty()
    }

    pub fn kernels(&self) -> Vec<Subspace> {
        self.maps.iter().map(|m| m.matrix.kernel()).collect()
    }
}

/// Result of the covering check.
#[derive(Clone, Debug)]
pub struct CoveringReport {
    pub surjective: Vec<bool>,
    /// Intersection of all kernels.
    pub kernel_intersection_dim: usize,
    pub closure_size: usize,
    pub closure_complete: bool,
    /// `None` when the closure hit the cap.
    pub distributive: Option<bool>,
    pub counterexample: Option<(usize, usize, usize)>,
}

impl CoveringReport {
    pub fn pass(&self) -> bool {
        self.surjective.iter().all(|&s| s)
            && self.kernel_intersection_dim == 0
            && self.closure_complete
            && self.distributive == Some(true)
    }

    /// True when the verdict could not be reached within the closure cap.
    pub fn undetermined(&self) -> bool {
        !self.closure_complete
    }
}

/// Checks the two covering conditions on a family of surjections given by
/// plain morphisms: trivial kernel intersection and distributivity of the
/// generated kernel lattice.
pub fn check_covering_morphisms(maps: &[AlgMorphism], cap: usize) -> Result<CoveringReport> {
    if maps.is_empty() {
        return Err(Error::Invalid("empty covering".into()));
    }
    let dim = maps[0].domain.dim();
    if maps.iter().any(|m| m.domain.dim() != dim) {
        return Err(Error::DimensionMismatch(
            "covering maps share a source".into(),
        ));
    }
    let surjective: Vec<bool> = maps.iter().map(AlgMorphism::is_surjective).collect();
    let kernels: Vec<Subspace> = maps.iter().map(|m| m.matrix.kernel()).collect();
    let mut intersection = Subspace::full(dim);
    for k in &kernels {
        intersection = intersection.intersect(k)?;
    }
    let family = SubspaceFamily::new(dim, kernels)?;
    let closure = lattice_closure(&family, cap);
    let (distributive, counterexample) = if closure.complete {
        let cex = distributivity_counterexample(&closure)?;
        (Some(cex.is_none()), cex)
    } else {
        (None, None)
    };
    Ok(CoveringReport {
        surjective,
        kernel_intersection_dim: intersection.dim(),
        closure_size: closure.len(),
        closure_complete: closure.complete,
        distributive,
        counterexample,
    })
}

/// Covering check for a [`CoveringFamily`] with the default closure cap.
pub fn check_covering(covering: &CoveringFamily) -> Result<CoveringReport> {
    check_covering_morphisms(&covering.maps, DEFAULT_CLOSURE_CAP)
}

/// The canonical gluing family of a covering: targets are the quotients of
/// the source by pairwise kernel sums, and the gluing maps send a piece
/// image to the class of any preimage (verified well-defined).
#[derive(Clone, Debug)]
pub struct CanonicalGluing {
    pub family: ComoduleGluingFamily,
    /// Quotient data of the source for each unordered pair.
    pub pair_quotients: BTreeMap<(usize, usize), Quotient>,
}

pub fn canonical_gluing(covering: &CoveringFamily) -> Result<CanonicalGluing> {
    let n = covering.len();
    let kernels = covering.kernels();
    let mut targets = BTreeMap::new();
    let mut maps = BTreeMap::new();
    let mut target_comodules = BTreeMap::new();
    let mut pair_quotients = BTreeMap::new();
    for i in 0..n {
        for j in (i + 1)..n {
            let sum = kernels[i].sum(&kernels[j])?;
            let ideal = Ideal::new(covering.source.alg.clone(), sum)?;
            let (target_comodule, q) = quotient_comodule(&covering.source, &ideal)?;
            for (a, b) in [(i, j), (j, i)] {
                // pi^a_b : P_a -> P_{ab}, pi_a(p) |-> [p]; built on
                // canonical preimages and certified by the exact identity
                // X . pi_a = [.]
                let pa = &covering.maps[a].matrix;
                let dim_piece = covering.pieces[a].dim();
                let mut x = Matrix::zero(q.algebra.dim(), dim_piece);
                for col in 0..dim_piece {
                    let pre = pa
                        .solve(&Vector::unit(dim_piece, col))
                        .ok_or(Error::NotSurjective)?;
                    let img = q.projection.apply(&pre);
                    for (r, c) in img.support() {
                        x.set(r, col, c.clone());
                    }
                }
                if x.mul(pa) != q.projection.matrix {
                    return Err(Error::InvalidGluingFamily(
                        "canonical gluing map is ill-defined; the family is not a covering".into(),
                    ));
                }
                let morphism =
                    AlgMorphism::new(covering.pieces[a].alg.clone(), q.algebra.clone(), x)?;
                if !morphism.is_surjective() {
                    return Err(Error::NotSurjective);
                }
                maps.insert((a, b), morphism);
            }
            targets.insert((i, j), q.algebra.clone());
            target_comodules.insert((i, j), target_comodule);
            pair_quotients.insert((i, j), q);
        }
    }
    let base = GluingFamily::new(
        covering.pieces.iter().map(|p| p.alg.clone()).collect(),
        targets,
        maps,
    )?;
    let family = ComoduleGluingFamily::new(
        base,
        covering.source.hopf.clone(),
        covering.pieces.clone(),
        target_comodules,
    )?;
    Ok(CanonicalGluing {
        family,
        pair_quotients,
    })
}

/// The comparison morphism `p -> (pi_i(p))` from the covering source onto
/// the multi-pullback of its canonical gluing; verified to land in the
/// pullback and checked for bijectivity.
pub fn covering_embedding(covering: &CoveringFamily, mp: &MultiPullback) -> Result<AlgMorphism> {
    let dim = covering.source.dim();
    let mut into_product = Matrix::zero(mp.product.algebra.dim(), dim);
    for (m, &off) in covering.maps.iter().zip(&mp.product.offsets) {
        for ((r, c), v) in m.matrix.support() {
            into_product.set(off + r, *c, v.clone());
        }
    }
    let mut comparison = Matrix::zero(mp.total.dim(), dim);
    for col in 0..dim {
        let tuple = into_product.col(col);
        let coords = mp.membership(&tuple).ok_or(Error::NotInPullback)?;
        for (r, v) in coords.support() {
            comparison.set(r, col, v.clone());
        }
    }
    AlgMorphism::new(covering.source.alg.clone(), mp.total.clone(), comparison)
}

/// Verification status of one piece's principality certificate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PrincipalityStatus {
    /// A supplied strong connection passed all axioms.
    Verified,
    /// A supplied strong connection failed verification.
    Failed,
    /// No connection was supplied for this piece.
    Unverified,
}

/// Report of the piecewise-principality preconditions: colinearity of the
/// covering maps, the covering property of their coinvariant
/// restrictions, and per-piece principality certificates.
#[derive(Clone, Debug)]
pub struct PiecewiseReport {
    pub colinear: Vec<bool>,
    /// Whether each restriction maps the source coinvariants *onto* the
    /// piece coinvariants.
    pub coinvariant_restriction_surjective: Vec<bool>,
    /// Covering check of the coinvariant restrictions, when all
    /// restrictions could be formed.
    pub coinvariant_covering: Option<CoveringReport>,
    pub piece_principality: Vec<PrincipalityStatus>,
}

impl PiecewiseReport {
    pub fn pass(&self) -> bool {
        self.colinear.iter().all(|&b| b)
            && self.coinvariant_restriction_surjective.iter().all(|&b| b)
            && self
                .coinvariant_covering
                .as_ref()
                .map(CoveringReport::pass)
                .unwrap_or(false)
            && self
                .piece_principality
                .iter()
                .all(|s| *s == PrincipalityStatus::Verified)
    }
}

/// Checks the piecewise-principality preconditions of a family of
/// surjections of comodule algebras: each map colinear, the coinvariant
/// restrictions forming a covering, and each piece certified principal by
/// a supplied strong connection (absence is reported, not an error).
pub fn check_piecewise_preconditions(
    source: &ComoduleAlgebra,
    pieces: &[ComoduleAlgebra],
    maps: &[AlgMorphism],
    supplied: &[Option<&crate::connection::StrongConnection>],
    cap: usize,
) -> Result<PiecewiseReport> {
    if pieces.len() != maps.len() || supplied.len() != maps.len() {
        return Err(Error::DimensionMismatch(
            "pieces/maps/connections count".into(),
        ));
    }
    let colinear: Vec<bool> = pieces
        .iter()
        .zip(maps)
        .map(|(p, m)| is_colinear(source, p, &m.matrix))
        .collect();

    let coinv = source.coinvariants();
    let mut restricted = Vec::new();
    let mut surjective = Vec::new();
    for (p, m) in pieces.iter().zip(maps) {
        match crate::algebra::subalgebra_restrict(m, &coinv) {
            Ok(r) => {
                surjective.push(r.image_space == p.coinvariants());
                restricted.push(r.morphism);
            }
            Err(_) => surjective.push(false),
        }
    }
    let coinvariant_covering = if restricted.len() == maps.len() {
        Some(check_covering_morphisms(&restricted, cap)?)
    } else {
        None
    };

    let piece_principality = supplied
        .iter()
        .zip(pieces)
        .map(|(conn, piece)| match conn {
            None => Ok(PrincipalityStatus::Unverified),
            Some(ell) => {
                if *ell.target.alg != *piece.alg {
                    return Err(Error::DimensionMismatch(
                        "supplied connection lives on a different piece".into(),
                    ));
                }
                let report = crate::connection::verify_connection(ell)?;
                Ok(if report.pass() {
                    PrincipalityStatus::Verified
                } else {
                    PrincipalityStatus::Failed
                })
            }
        })
        .collect::<Result<Vec<_>>>()?;

    Ok(PiecewiseReport {
        colinear,
        coinvariant_restriction_surjective: surjective,
        coinvariant_covering,
        piece_principality,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::int;

    /// Two copies of functions on two points glued over evaluation at a
    /// shared point.
    fn two_patch_family() -> GluingFamily {
        let a = StructureAlgebra::pointwise(2);
        let t = StructureAlgebra::pointwise(1);
        let mut ev0 = Matrix::zero(1, 2);
        ev0.set(0, 0, int(1));
        let m01 = AlgMorphism::new(a.clone(), t.clone(), ev0.clone()).unwrap();
        let m10 = AlgMorphism::new(a.clone(), t.clone(), ev0).unwrap();
        GluingFamily::new(
            vec![a.clone(), a],
            BTreeMap::from([((0, 1), t)]),
            BTreeMap::from([((0, 1), m01), ((1, 0), m10)]),
        )
        .unwrap()
    }

    #[test]
    fn pullback_of_two_patches_is_three_points() {
        let fam = two_patch_family();
        let mp = multipullback(&fam).unwrap();
        assert_eq!(mp.total.dim(), 3);
        // pointwise oracle: tuples (f, g) with f(0) = g(0)
        let good = mp.tuple(&[Vector::from_i64(&[5, 1]), Vector::from_i64(&[5, 2])]);
        assert!(mp.membership(&good).is_some());
        let bad = mp.tuple(&[Vector::from_i64(&[5, 1]), Vector::from_i64(&[4, 2])]);
        assert!(mp.membership(&bad).is_none());
        for p in &mp.projections {
            assert!(p.is_surjective());
        }
    }

    #[test]
    fn single_component_family_is_identity() {
        let a = StructureAlgebra::pointwise(3);
        let fam = GluingFamily::new(vec![a.clone()], BTreeMap::new(), BTreeMap::new()).unwrap();
        let mp = multipullback(&fam).unwrap();
        assert_eq!(mp.total.dim(), 3);
        assert!(mp.projections[0].matrix.is_invertible());
    }

    #[test]
    fn small_families_pass_cocycle_vacuously() {
        let fam = two_patch_family();
        let report = check_cocycle(&fam).unwrap();
        assert!(report.pass());
        assert_eq!(report.triples_checked, 0);
    }

    #[test]
    fn covering_failure_cases() {
        let a4 = StructureAlgebra::pointwise(4);
        let a2 = StructureAlgebra::pointwise(2);
        let mut r01 = Matrix::zero(2, 4);
        r01.set(0, 0, int(1));
        r01.set(1, 1, int(1));
        let pi = AlgMorphism::new(a4.clone(), a2.clone(), r01).unwrap();
        // a single surjection with nonzero kernel is not a covering
        let single = check_covering_morphisms(std::slice::from_ref(&pi), 64).unwrap();
        assert!(!single.pass());
        assert_eq!(single.kernel_intersection_dim, 2);
        // duplicated kernels keep the intersection nonzero
        let dup = check_covering_morphisms(&[pi.clone(), pi], 64).unwrap();
        assert!(!dup.pass());
        assert_eq!(dup.kernel_intersection_dim, 2);
    }
}
