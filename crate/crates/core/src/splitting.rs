//! Linear, subspace-respecting, colinear and global splittings of
//! surjections.
//!
//! Three layers are built here. A subspace-respecting splitting of a
//! linear surjection sends the image of each designated subspace back
//! into it, constructed from a partitioned basis of the codomain. A
//! colinear splitting upgrades a splitting of the coinvariant restriction
//! to a comodule map using a strong connection on the domain. The global
//! splitting assembles a section of a multi-pullback component projection
//! by an inductive correction recursion over the remaining components.

use std::collections::BTreeMap;

use crate::connection::{verify_connection, StrongConnection};
use crate::hopf::ComoduleAlgebra;
use crate::lattice::{
    is_distributive, lattice_closure, partitioned_basis_capped, SubspaceFamily, DEFAULT_CLOSURE_CAP,
};
use crate::linalg::{Matrix, Vector};
use crate::pullback::{check_cocycle, GluingFamily, MultiPullback};
use crate::subspace::{solve_in_subspace, Subspace};
use crate::{Error, Result};

/// A verified linear splitting: `section` is defined on the canonical
/// basis of `domain` (a subspace of the codomain of `pi`) and satisfies
/// `pi . section = id` there exactly.
#[derive(Clone, Debug)]
pub struct Splitting {
    /// The split surjection, of shape `dim(B) x dim(A)`.
    pi: Matrix,
    /// The subspace of `B` on which the section is defined.
    domain: Subspace,
    /// Section values on the canonical domain basis, shape
    /// `dim(A) x domain.dim()`.
    section: Matrix,
    pub unital: bool,
    pub colinear: bool,
    pub respected: Option<SubspaceFamily>,
}

impl Splitting {
    pub fn new(pi: Matrix, domain: Subspace, section: Matrix) -> Result<Self> {
        if domain.ambient_dim() != pi.rows()
            || section.rows() != pi.cols()
            || section.cols() != domain.dim()
        {
            return Err(Error::DimensionMismatch("splitting shapes".into()));
        }
        let round = pi.mul(&section);
        for (k, v) in domain.basis().iter().enumerate() {
            if round.col(k) != *v {
                return Err(Error::NotASplitting);
            }
        }
        Ok(Splitting {
            pi,
            domain,
            section,
            unital: false,
            colinear: false,
            respected: None,
        })
    }

    pub fn pi(&self) -> &Matrix {
        &self.pi
    }

    pub fn domain(&self) -> &Subspace {
        &self.domain
    }

    pub fn section(&self) -> &Matrix {
        &self.section
    }

    /// Section value on `b`, which must lie in the domain.
    pub fn apply(&self, b: &Vector) -> Result<Vector> {
        let coords = self.domain.coords_of(b).ok_or(Error::ContainmentViolated)?;
        Ok(self.section.mul_vec(&coords))
    }

    /// Section matrix on the standard basis when the domain is the full
    /// codomain.
    pub fn full_section(&self) -> Option<&Matrix> {
        if self.domain.is_full() {
            Some(&self.section)
        } else {
            None
        }
    }

    /// Restriction of the section to a smaller domain.
    pub fn restrict(&self, sub: &Subspace) -> Result<Splitting> {
        if !self.domain.contains_subspace(sub) {
            return Err(Error::ContainmentViolated);
        }
        let cols: Vec<Vector> = sub
            .basis()
            .iter()
            .map(|v| self.apply(v))
            .collect::<Result<_>>()?;
        let mut s = Splitting::new(self.pi.clone(), sub.clone(), Matrix::from_cols(&cols))?;
        // unitality depends on units the splitting does not carry;
        // callers re-establish the flag against the actual units
        s.unital = false;
        s.colinear = self.colinear;
        Ok(s)
    }

    /// True when the domain contains `unit_b` and the section maps it to
    /// `unit_a`.
    pub fn is_unital(&self, unit_a: &Vector, unit_b: &Vector) -> bool {
        self.domain.contains(unit_b) && self.apply(unit_b).map(|v| v == *unit_a).unwrap_or(false)
    }

    /// Exact colinearity of the section as a comodule map from its domain
    /// (in `on`) into `into`. Requires the domain to be a subcomodule.
    pub fn section_is_colinear(&self, on: &ComoduleAlgebra, into: &ComoduleAlgebra) -> bool {
        if !on.is_subcomodule(&self.domain) {
            return false;
        }
        let nh = on.hopf.dim();
        for v in self.domain.basis() {
            let s = match self.apply(v) {
                Ok(s) => s,
                Err(_) => return false,
            };
            let lhs = into.coaction.mul_vec(&s);
            let mut rhs = Vector::zero(into.dim() * nh);
            for (leg, j) in on.sweedler(v) {
                let sl = match self.apply(&leg) {
                    Ok(sl) => sl,
                    Err(_) => return false,
                };
                for (p, c) in sl.support() {
                    let idx = p * nh + j;
                    let cur = rhs.get(idx) + c;
                    rhs.set(idx, cur);
                }
            }
            if lhs != rhs {
                return false;
            }
        }
        true
    }

    /// Re-bases the section through an isomorphism of the target and a
    /// matching presentation of the projection: the new section is
    /// `iso . section` and must split `new_pi` on the same domain.
    pub fn transport(&self, iso: &Matrix, new_pi: &Matrix) -> Result<Splitting> {
        let mut s = Splitting::new(new_pi.clone(), self.domain.clone(), iso.mul(&self.section))?;
        s.unital = self.unital;
        s.colinear = self.colinear;
        s.respected = self.respected.clone();
        Ok(s)
    }
}

/// Solve-based splitting of a surjection on its full codomain; the
/// canonical preimage policy (zero free variables) makes it deterministic.
pub fn canonical_splitting(pi: &Matrix) -> Result<Splitting> {
    let cols: Vec<Vector> = (0..pi.rows())
        .map(|b| {
            pi.solve(&Vector::unit(pi.rows(), b))
                .ok_or(Error::NotSurjective)
        })
        .collect::<Result<_>>()?;
    Splitting::new(
        pi.clone(),
        Subspace::full(pi.rows()),
        Matrix::from_cols_dim(pi.cols(), &cols),
    )
}

/// Splitting of `pi : A -> B` that respects a family of subspaces of `A`:
/// the section maps the image of each family member back into it.
///
/// Requires the family together with `ker pi` to generate a distributive
/// lattice. The section is built on a partitioned basis of `B` with
/// respect to the image family, picking for each block vector the
/// canonical preimage inside the corresponding intersection.
pub fn subspace_respecting_splitting(
    pi: &Matrix,
    family: &SubspaceFamily,
    cap: usize,
) -> Result<Splitting> {
    if family.ambient_dim() != pi.cols() {
        return Err(Error::DimensionMismatch(
            "family lives in the domain".into(),
        ));
    }
    if pi.rank() != pi.rows() {
        return Err(Error::NotSurjective);
    }
    // distributivity of {A_i} together with ker pi
    let mut with_kernel = family.members().to_vec();
    with_kernel.push(pi.kernel());
    let extended = SubspaceFamily::new(pi.cols(), with_kernel)?;
    let closure = lattice_closure(&extended, cap);
    if !closure.complete {
        return Err(Error::ClosureIncomplete(closure.len()));
    }
    if !is_distributive(&closure)? {
        return Err(Error::NotDistributive);
    }

    let images: Vec<Subspace> = family.members().iter().map(|m| pi.image_of(m)).collect();
    let image_family = SubspaceFamily::new(pi.rows(), images.clone())?;
    let pb = partitioned_basis_capped(&image_family, cap)?;

    let mut basis_vectors = Vec::new();
    let mut section_values = Vec::new();
    for gamma in &pb.order {
        let a_gamma = family.intersection_over(gamma)?;
        for b in &pb.blocks[gamma] {
            let preimage = solve_in_subspace(pi, b, &a_gamma).ok_or(Error::EmptyPreimage)?;
            basis_vectors.push(b.clone());
            section_values.push(preimage);
        }
    }
    let c = Matrix::from_cols(&basis_vectors);
    let v = Matrix::from_cols(&section_values);
    let section = v.mul(&c.inverse()?);
    let mut s = Splitting::new(pi.clone(), Subspace::full(pi.rows()), section)?;
    // respected-family postcondition, verified
    for (member, image) in family.members().iter().zip(&images) {
        for b in image.basis() {
            if !member.contains(&s.apply(b)?) {
                return Err(Error::EmptyPreimage);
            }
        }
    }
    s.respected = Some(family.clone());
    Ok(s)
}

/// Corrects a splitting so the section maps `unit_b` to `unit_a`, keeping
/// it a splitting: the section is redefined on the line through the unit
/// and extended by the old values on a complement of that line.
pub fn unitalize(s: &Splitting, unit_a: &Vector, unit_b: &Vector) -> Result<Splitting> {
    if s.pi.mul_vec(unit_a) != *unit_b {
        return Err(Error::NotUnital);
    }
    if !s.domain.contains(unit_b) {
        return Err(Error::ContainmentViolated);
    }
    if s.apply(unit_b)? == *unit_a {
        let mut out = s.clone();
        out.unital = true;
        return Ok(out);
    }
    let line = Subspace::line(unit_b);
    let complement = s.domain.complement_of(&line)?;
    let decomp = line.basis_cols().hstack(&complement.basis_cols());
    let mut cols = Vec::with_capacity(s.domain.dim());
    for v in s.domain.basis() {
        let x = decomp.solve(v).ok_or(Error::Inconsistent)?;
        // v = lambda * (line basis vector) + c with c in the complement
        let lambda = x.get(0).clone();
        let mut c = Vector::zero(s.domain.ambient_dim());
        for (k, w) in x.support().skip_while(|(k, _)| *k == 0) {
            c = c.add(&complement.basis()[k - 1].scale(w));
        }
        // the line basis vector is a scalar multiple of unit_b
        let line_vec = &line.basis()[0];
        let scale = unit_scale(line_vec, unit_b);
        let value = unit_a.scale(&(lambda * scale)).add(&s.apply(&c)?);
        cols.push(value);
    }
    let mut out = Splitting::new(s.pi.clone(), s.domain.clone(), Matrix::from_cols(&cols))?;
    out.unital = true;
    Ok(out)
}

/// Scalar `c` with `line_vec = c^-1 * unit_b`, i.e. the coefficient that
/// rewrites a multiple of the unit back in terms of the unit itself.
fn unit_scale(line_vec: &Vector, unit_b: &Vector) -> crate::scalar::Scalar {
    let (i, c) = line_vec
        .support()
        .next()
        .expect("line basis vector is nonzero");
    c / unit_b.get(i)
}

/// Upgrades a splitting of the coinvariant restriction of `pi : A -> B`
/// to a colinear splitting of `pi`, using a strong connection on `A`:
///
/// `alpha(b) = alpha_coinv(b^(0) pi(l^<1>(b^(1)))) l^<2>(b^(1))`.
///
/// Every designated family member must be an ideal and a subcomodule of
/// `A`; the result is verified to be a colinear splitting mapping the
/// image of each member back into it.
pub fn colinearize(
    alpha_coinv: &Splitting,
    ell: &StrongConnection,
    cod: &ComoduleAlgebra,
    dom: &ComoduleAlgebra,
    pi: &Matrix,
    family: &[Subspace],
) -> Result<Splitting> {
    let report = verify_connection(ell)?;
    if !report.pass() {
        return Err(Error::ConnectionInvalid(
            "colinearization requires a verified strong connection".into(),
        ));
    }
    if *ell.target.alg != *dom.alg {
        return Err(Error::DimensionMismatch(
            "connection lives on the domain algebra".into(),
        ));
    }
    let coinv_cod = cod.coinvariants();
    if alpha_coinv.domain() != &coinv_cod {
        return Err(Error::Invalid(
            "coinvariant splitting must be defined on the coinvariants of the codomain".into(),
        ));
    }
    for member in family {
        crate::algebra::Ideal::new(dom.alg.clone(), member.clone())?;
        if !dom.is_subcomodule(member) {
            return Err(Error::CoactionAxiom(
                "family member is not a subcomodule".into(),
            ));
        }
    }

    let nb = cod.dim();
    let na = dom.dim();
    let mut cols = Vec::with_capacity(nb);
    for b in 0..nb {
        let basis_vec = Vector::unit(nb, b);
        // expand b^(0) pi(l^<1>(b^(1))) (x) l^<2>(b^(1)) over the domain
        // basis in the second leg; only the grouped first legs are
        // coinvariant, the individual products need not be
        let mut grouped = vec![Vector::zero(nb); na];
        for (leg, j) in cod.sweedler(&basis_vec) {
            for (l, r) in ell.terms(j) {
                let x = cod.alg.mul(&leg, &pi.mul_vec(l));
                if x.is_zero() {
                    continue;
                }
                for (a, c) in r.support() {
                    grouped[a] = grouped[a].add(&x.scale(c));
                }
            }
        }
        let mut value = Vector::zero(na);
        for (a, x) in grouped.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            let y = alpha_coinv.apply(x)?;
            value = value.add(&dom.alg.mul(&y, &Vector::unit(na, a)));
        }
        cols.push(value);
    }
    let mut s = Splitting::new(
        pi.clone(),
        Subspace::full(nb),
        Matrix::from_cols_dim(dom.dim(), &cols),
    )?;
    if !s.section_is_colinear(cod, dom) {
        return Err(Error::NotColinear);
    }
    s.colinear = true;
    for member in family {
        let image = pi.image_of(member);
        for b in image.basis() {
            if !member.contains(&s.apply(b)?) {
                return Err(Error::KernelConditionViolated(0, 0, 0));
            }
        }
    }
    if !family.is_empty() {
        s.respected = Some(SubspaceFamily::new(dom.dim(), family.to_vec())?);
    }
    s.unital = s.is_unital(dom.alg.unit(), cod.alg.unit());
    Ok(s)
}

/// Verifies the section entry condition for the global splitting: for all
/// distinct `i, j, k`, the section `alpha^i_j` maps the image of
/// `ker pi^i_k` back into `ker pi^i_k`.
pub fn verify_kernel_condition(
    family: &GluingFamily,
    alphas: &BTreeMap<(usize, usize), Splitting>,
) -> Result<()> {
    let n = family.size();
    for (&(i, j), alpha) in alphas {
        for k in 0..n {
            if k == i || k == j {
                continue;
            }
            let (Some(map_ij), Some(ker_ik)) = (family.map(i, j), family.kernel(i, k)) else {
                continue;
            };
            let image = map_ij.matrix.image_of(&ker_ik);
            for b in image.basis() {
                if !ker_ik.contains(&alpha.apply(b)?) {
                    return Err(Error::KernelConditionViolated(i, j, k));
                }
            }
        }
    }
    Ok(())
}

/// Distributivity of the kernel family of every component's gluing maps.
pub fn verify_gluing_distributivity(family: &GluingFamily, cap: usize) -> Result<()> {
    for i in 0..family.size() {
        let kernels: Vec<Subspace> = (0..family.size())
            .filter_map(|j| family.kernel(i, j))
            .collect();
        if kernels.is_empty() {
            continue;
        }
        let fam = SubspaceFamily::new(family.components[i].dim(), kernels)?;
        let closure = lattice_closure(&fam, cap);
        if !closure.complete {
            return Err(Error::ClosureIncomplete(closure.len()));
        }
        if !is_distributive(&closure)? {
            return Err(Error::NotDistributive);
        }
    }
    Ok(())
}

/// The unital splitting of a component projection of a multi-pullback,
/// built by the inductive correction recursion along the visiting order
/// `kappa` (a permutation of the components with `kappa[0]` the chosen
/// piece).
///
/// Entry preconditions are all verified: distributivity, the cocycle
/// condition, the kernel-image condition for every `alpha^i_j`, and
/// unitality of every `beta^i_j`. With `check_partial`, the pairwise
/// agreement of every partial tuple is asserted during the recursion.
pub fn global_splitting(
    mp: &MultiPullback,
    alphas: &BTreeMap<(usize, usize), Splitting>,
    betas: &BTreeMap<(usize, usize), Splitting>,
    piece: usize,
    kappa: &[usize],
    check_partial: bool,
) -> Result<Splitting> {
    let family = &mp.family;
    let n = family.size();
    if kappa.len() != n || kappa.first() != Some(&piece) {
        return Err(Error::Invalid(
            "visiting order must start at the piece".into(),
        ));
    }
    let mut seen = vec![false; n];
    for &k in kappa {
        if k >= n || seen[k] {
            return Err(Error::Invalid(
                "visiting order must be a permutation".into(),
            ));
        }
        seen[k] = true;
    }
    verify_gluing_distributivity(family, DEFAULT_CLOSURE_CAP)?;
    let cocycle = check_cocycle(family)?;
    if !cocycle.pass() {
        return Err(Error::InvalidGluingFamily(
            "cocycle condition fails; the splitting recursion is unsound".into(),
        ));
    }
    for (&(i, j), s) in alphas.iter().chain(betas.iter()) {
        let m = family
            .map(i, j)
            .ok_or_else(|| Error::InvalidGluingFamily(format!("no gluing map ({i}, {j})")))?;
        if s.pi() != &m.matrix {
            return Err(Error::Invalid(format!(
                "splitting ({i}, {j}) does not split the gluing map"
            )));
        }
    }
    verify_kernel_condition(family, alphas)?;
    for (&(i, j), beta) in betas {
        let target_key = (i.min(j), i.max(j));
        let unit_target = family.targets[&target_key].unit();
        if !beta.is_unital(family.components[i].unit(), unit_target) {
            return Err(Error::NotUnital);
        }
    }

    let piece_dim = family.components[piece].dim();
    let mut section_cols = Vec::with_capacity(piece_dim);
    for col in 0..piece_dim {
        let a = Vector::unit(piece_dim, col);
        let mut parts: Vec<Option<Vector>> = vec![None; n];
        parts[piece] = Some(a);
        for m in 0..(n - 1) {
            let tgt = kappa[m + 1];
            let start = kappa[0];
            let projected = family
                .map(start, tgt)
                .expect("complete gluing data")
                .apply(parts[start].as_ref().expect("assigned"));
            let mut cur = betas
                .get(&(tgt, start))
                .ok_or_else(|| Error::Invalid(format!("missing beta ({tgt}, {start})")))?
                .apply(&projected)?;
            for k in 0..m {
                let mid = kappa[k + 1];
                let d1 = family.map(tgt, mid).expect("complete").apply(&cur);
                let d2 = family
                    .map(mid, tgt)
                    .expect("complete")
                    .apply(parts[mid].as_ref().expect("assigned"));
                let diff = d1.sub(&d2);
                let corr = alphas
                    .get(&(tgt, mid))
                    .ok_or_else(|| Error::Invalid(format!("missing alpha ({tgt}, {mid})")))?
                    .apply(&diff)?;
                cur = cur.sub(&corr);
            }
            parts[tgt] = Some(cur);
            if check_partial {
                for x in 0..=(m + 1) {
                    for y in 0..=(m + 1) {
                        if x == y {
                            continue;
                        }
                        let (kx, ky) = (kappa[x], kappa[y]);
                        let lhs = family
                            .map(kx, ky)
                            .expect("complete")
                            .apply(parts[kx].as_ref().unwrap());
                        let rhs = family
                            .map(ky, kx)
                            .expect("complete")
                            .apply(parts[ky].as_ref().unwrap());
                        if lhs != rhs {
                            return Err(Error::NotInPullback);
                        }
                    }
                }
            }
        }
        let tuple_parts: Vec<Vector> = parts.into_iter().map(Option::unwrap).collect();
        let tuple = mp.tuple(&tuple_parts);
        let coords = mp.membership(&tuple).ok_or(Error::NotInPullback)?;
        section_cols.push(coords);
    }
    let mut s = Splitting::new(
        mp.projections[piece].matrix.clone(),
        Subspace::full(piece_dim),
        Matrix::from_cols(&section_cols),
    )?;
    if s.apply(family.components[piece].unit())? != *mp.total.unit() {
        return Err(Error::NotUnital);
    }
    s.unital = true;
    Ok(s)
}

/// The two splitting families of a canonical gluing, ready for
/// [`global_splitting`]: unital colinear `beta^i_j` and colinear
/// `alpha^i_j` satisfying the kernel-image entry condition.
#[derive(Debug)]
pub struct GluingSplittings {
    pub alphas: BTreeMap<(usize, usize), Splitting>,
    pub betas: BTreeMap<(usize, usize), Splitting>,
}

/// Builds both splitting families of a canonical gluing from the piece
/// connections.
///
/// For each gluing map the coinvariant restriction is split canonically
/// and then colinearized through the piece connection; the `beta` family
/// is additionally unitalized, while the `alpha` family starts from a
/// subspace-respecting splitting at the coinvariant level so the lifted
/// section satisfies the kernel-image condition (verified).
pub fn build_gluing_splittings(
    cg: &crate::pullback::CanonicalGluing,
    piece_connections: &[StrongConnection],
    cap: usize,
) -> Result<GluingSplittings> {
    let family = &cg.family;
    let n = family.base.size();
    if piece_connections.len() != n {
        return Err(Error::DimensionMismatch("one connection per piece".into()));
    }
    let mut alphas = BTreeMap::new();
    let mut betas = BTreeMap::new();
    for i in 0..n {
        let dom = &family.component_comodules[i];
        let dom_coinv = dom.coinvariants();
        for j in 0..n {
            if i == j {
                continue;
            }
            let key = (i.min(j), i.max(j));
            let cod = &family.target_comodules[&key];
            let pi = &family
                .base
                .map(i, j)
                .ok_or_else(|| Error::InvalidGluingFamily(format!("no map ({i}, {j})")))?
                .matrix;
            let cod_coinv = cod.coinvariants();

            // beta^i_j: canonical coinvariant splitting, unitalized, then
            // colinearized with no designated family
            let mut cols = Vec::with_capacity(cod_coinv.dim());
            for b in cod_coinv.basis() {
                cols.push(solve_in_subspace(pi, b, &dom_coinv).ok_or(Error::NotSurjective)?);
            }
            let coinv_split = Splitting::new(
                pi.clone(),
                cod_coinv.clone(),
                Matrix::from_cols_dim(dom.dim(), &cols),
            )?;
            let coinv_unital = unitalize(&coinv_split, dom.alg.unit(), cod.alg.unit())?;
            let beta = colinearize(&coinv_unital, &piece_connections[i], cod, dom, pi, &[])?;
            if !beta.is_unital(dom.alg.unit(), cod.alg.unit()) {
                return Err(Error::NotUnital);
            }
            betas.insert((i, j), beta);

            // alpha^i_j: subspace-respecting splitting at the coinvariant
            // level with respect to the other kernels, then colinearized
            // with those kernels as the designated family
            let kernels: Vec<Subspace> = (0..n)
                .filter(|&k| k != i && k != j)
                .filter_map(|k| family.base.kernel(i, k))
                .collect();
            // express the coinvariant restriction in subspace coordinates
            let mut pi_coords = Matrix::zero(cod_coinv.dim(), dom_coinv.dim());
            for (col, a) in dom_coinv.basis().iter().enumerate() {
                let y = pi.mul_vec(a);
                let coords = cod_coinv.coords_of(&y).ok_or(Error::NotColinear)?;
                for (r, c) in coords.support() {
                    pi_coords.set(r, col, c.clone());
                }
            }
            let coord_members: Vec<Subspace> = kernels
                .iter()
                .map(|k| {
                    let meet = k.intersect(&dom_coinv)?;
                    let spanning: Vec<Vector> = meet
                        .basis()
                        .iter()
                        .map(|v| dom_coinv.coords_of(v).ok_or(Error::Inconsistent))
                        .collect::<Result<_>>()?;
                    Ok(Subspace::from_spanning(dom_coinv.dim(), &spanning))
                })
                .collect::<Result<_>>()?;
            let coords_family = SubspaceFamily::new(dom_coinv.dim(), coord_members)?;
            let coords_split = subspace_respecting_splitting(&pi_coords, &coords_family, cap)?;
            let lifted_cols = dom_coinv
                .basis_cols()
                .mul(coords_split.full_section().expect("full domain"));
            let coinv_resp = Splitting::new(pi.clone(), cod_coinv.clone(), lifted_cols)?;
            let alpha = colinearize(&coinv_resp, &piece_connections[i], cod, dom, pi, &kernels)?;
            alphas.insert((i, j), alpha);
        }
    }
    Ok(GluingSplittings { alphas, betas })
}

/// Everything the covering pipeline produces on the way to piece
/// sections: the canonical gluing, its multi-pullback with the
/// componentwise coaction, the comparison isomorphism from the source,
/// and both gluing splitting families.
pub struct CoveringPipeline {
    pub canonical: crate::pullback::CanonicalGluing,
    pub mp: MultiPullback,
    pub total_comodule: ComoduleAlgebra,
    /// Source -> pullback comparison isomorphism.
    pub iso: crate::algebra::AlgMorphism,
    /// Its inverse matrix (pullback coordinates -> source).
    pub iso_inv: Matrix,
    pub splittings: GluingSplittings,
}

/// Runs the covering pipeline up to the gluing splittings.
pub fn covering_pipeline(
    covering: &crate::pullback::CoveringFamily,
    piece_connections: &[StrongConnection],
    cap: usize,
) -> Result<CoveringPipeline> {
    let canonical = crate::pullback::canonical_gluing(covering)?;
    let (mp, total_comodule) = crate::pullback::multipullback_comodule(&canonical.family)?;
    let iso = crate::pullback::covering_embedding(covering, &mp)?;
    let iso_inv = iso.matrix.inverse().map_err(|_| {
        Error::InvalidGluingFamily("source is not isomorphic to its multi-pullback".into())
    })?;
    let splittings = build_gluing_splittings(&canonical, piece_connections, cap)?;
    Ok(CoveringPipeline {
        canonical,
        mp,
        total_comodule,
        iso,
        iso_inv,
        splittings,
    })
}

/// Unital colinear splitting of the covering map `pi_piece` expressed on
/// the covering source, built by the global recursion along `kappa` and
/// transported through the comparison isomorphism. Colinearity and
/// unitality are verified on the result.
pub fn covering_piece_section(
    pipeline: &CoveringPipeline,
    covering: &crate::pullback::CoveringFamily,
    piece: usize,
    kappa: &[usize],
) -> Result<Splitting> {
    let on_pullback = global_splitting(
        &pipeline.mp,
        &pipeline.splittings.alphas,
        &pipeline.splittings.betas,
        piece,
        kappa,
        true,
    )?;
    let mut s = on_pullback.transport(&pipeline.iso_inv, &covering.maps[piece].matrix)?;
    if s.apply(covering.pieces[piece].alg.unit())? != *covering.source.alg.unit() {
        return Err(Error::NotUnital);
    }
    s.unital = true;
    if !s.section_is_colinear(&covering.pieces[piece], &covering.source) {
        return Err(Error::NotColinear);
    }
    s.colinear = true;
    Ok(s)
}
