//! Subspace-lattice analysis: closures, distributivity, partitioned bases.
//!
//! A finite family of subspaces generates a lattice under sum and
//! intersection. Distributivity of that lattice is what makes the
//! partitioned-basis construction work: the ambient space acquires a basis
//! split into blocks indexed by subsets of the family, with every iterated
//! intersection spanned by the blocks of its supersets. The closure is
//! materialized explicitly (with a cap) because the generated lattice must
//! be enumerated before it can be tested.

use std::collections::BTreeMap;

use crate::linalg::{Matrix, Vector};
use crate::subspace::Subspace;
use crate::{Error, Result};

/// Default cap on lattice closure size; incompleteness is reported, never
/// guessed.
pub const DEFAULT_CLOSURE_CAP: usize = 4096;

/// An indexed family of subspaces of a common ambient space.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubspaceFamily {
    ambient_dim: usize,
    members: Vec<Subspace>,
}

impl SubspaceFamily {
    pub fn new(ambient_dim: usize, members: Vec<Subspace>) -> Result<Self> {
        if members.iter().any(|m| m.ambient_dim() != ambient_dim) {
            return Err(Error::DimensionMismatch(
                "family members must share the ambient dimension".into(),
            ));
        }
        Ok(SubspaceFamily {
            ambient_dim,
            members,
        })
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn members(&self) -> &[Subspace] {
        &self.members
    }

    /// Iterated intersection over the index subset `gamma`; the empty
    /// subset yields the whole ambient space by convention.
    pub fn intersection_over(&self, gamma: &[usize]) -> Result<Subspace> {
        let mut acc = Subspace::full(self.ambient_dim);
        for &i in gamma {
            let m = self.members.get(i).ok_or(Error::IndexOutOfRange(i))?;
            acc = acc.intersect(m)?;
        }
        Ok(acc)
    }

    /// Sum over all members (zero subspace for the empty family).
    pub fn total_sum(&self) -> Result<Subspace> {
        let mut acc = Subspace::zero(self.ambient_dim);
        for m in &self.members {
            acc = acc.sum(m)?;
        }
        Ok(acc)
    }
}

/// The lattice generated by a family under sum and intersection, with
/// meet/join tables when the closure is complete.
#[derive(Clone, Debug)]
pub struct LatticeClosure {
    pub elements: Vec<Subspace>,
    pub complete: bool,
    /// `meet[i][j]` = index of `elements[i] ∩ elements[j]` (complete only).
    pub meet: Vec<Vec<usize>>,
    /// `join[i][j]` = index of `elements[i] + elements[j]` (complete only).
    pub join: Vec<Vec<usize>>,
}

impl LatticeClosure {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }
}

/// Iterated closure of the family (seeded with the zero and full
/// subspaces) under pairwise sum and intersection. If a fixpoint is not
/// reached within `cap` elements the closure is returned with
/// `complete = false` and no tables.
pub fn lattice_closure(family: &SubspaceFamily, cap: usize) -> LatticeClosure {
    assert!(cap >= 1, "cap must be at least 1");
    let n = family.ambient_dim();
    let mut index: BTreeMap<Subspace, usize> = BTreeMap::new();
    let mut elements: Vec<Subspace> = Vec::new();
    let push =
        |s: Subspace, elements: &mut Vec<Subspace>, index: &mut BTreeMap<Subspace, usize>| {
            if !index.contains_key(&s) {
                index.insert(s.clone(), elements.len());
                elements.push(s);
            }
        };
    push(Subspace::zero(n), &mut elements, &mut index);
    push(Subspace::full(n), &mut elements, &mut index);
    for m in family.members() {
        push(m.clone(), &mut elements, &mut index);
    }

    let mut processed = 0;
    while processed < elements.len() {
        if elements.len() > cap {
            return LatticeClosure {
                elements,
                complete: false,
                meet: Vec::new(),
                join: Vec::new(),
            };
        }
        let current = elements.len();
        // close the new element(s) against everything seen so far
        for i in processed..current {
            for j in 0..=i {
                let a = &elements[i];
                let b = &elements[j];
                let s = a.sum(b).expect("same ambient dimension");
                let m = a.intersect(b).expect("same ambient dimension");
                push(s, &mut elements, &mut index);
                push(m, &mut elements, &mut index);
            }
        }
        processed = current;
    }

    let count = elements.len();
    let mut meet = vec![vec![0usize; count]; count];
    let mut join = vec![vec![0usize; count]; count];
    for i in 0..count {
        for j in 0..=i {
            let s = elements[i].sum(&elements[j]).expect("same ambient");
            let m = elements[i].intersect(&elements[j]).expect("same ambient");
            let si = index[&s];
            let mi = index[&m];
            join[i][j] = si;
            join[j][i] = si;
            meet[i][j] = mi;
            meet[j][i] = mi;
        }
    }
    LatticeClosure {
        elements,
        complete: true,
        meet,
        join,
    }
}

/// Checks `a ∩ (b + c) = (a ∩ b) + (a ∩ c)` over all element triples of a
/// complete closure.
pub fn is_distributive(closure: &LatticeClosure) -> Result<bool> {
    Ok(distributivity_counterexample(closure)?.is_none())
}

/// First failing triple `(a, b, c)` of the distributive law, as indices
/// into `closure.elements`, if any.
pub fn distributivity_counterexample(
    closure: &LatticeClosure,
) -> Result<Option<(usize, usize, usize)>> {
    if !closure.complete {
        return Err(Error::ClosureIncomplete(closure.len()));
    }
    let n = closure.len();
    for a in 0..n {
        for b in 0..n {
            for c in b..n {
                let lhs = closure.meet[a][closure.join[b][c]];
                let rhs = closure.join[closure.meet[a][b]][closure.meet[a][c]];
                if lhs != rhs {
                    return Ok(Some((a, b, c)));
                }
            }
        }
    }
    Ok(None)
}

/// All subsets of `{0, .., index_count-1}` in the admissible total order:
/// descending cardinality, ties broken lexicographically on the sorted
/// index lists. The order refines reverse inclusion, so the full index set
/// comes first and the empty set last.
pub fn admissible_order(index_count: usize) -> Vec<Vec<usize>> {
    assert!(index_count < 26, "index sets this large are not enumerable");
    let mut subsets: Vec<Vec<usize>> = (0u64..(1 << index_count))
        .map(|mask| (0..index_count).filter(|i| mask >> i & 1 == 1).collect())
        .collect();
    subsets.sort_by(|a, b| b.len().cmp(&a.len()).then_with(|| a.cmp(b)));
    subsets
}

/// A basis of the ambient space split into blocks indexed by subsets of
/// the family, such that each iterated intersection is spanned by the
/// blocks of its supersets.
#[derive(Clone, Debug)]
pub struct PartitionedBasis {
    pub ambient_dim: usize,
    /// Blocks keyed by the sorted index subset.
    pub blocks: BTreeMap<Vec<usize>, Vec<Vector>>,
    /// The admissible order the blocks were built along.
    pub order: Vec<Vec<usize>>,
}

impl PartitionedBasis {
    /// Span of the union of blocks over all supersets of `gamma`.
    pub fn superset_span(&self, gamma: &[usize]) -> Subspace {
        let mut vectors = Vec::new();
        for (key, block) in &self.blocks {
            if gamma.iter().all(|i| key.contains(i)) {
                vectors.extend(block.iter().cloned());
            }
        }
        Subspace::from_spanning(self.ambient_dim, &vectors)
    }

    pub fn total_count(&self) -> usize {
        self.blocks.values().map(Vec::len).sum()
    }
}

/// Builds the partitioned basis of a distributive family.
///
/// Blocks are grown inductively along the admissible order: the block of
/// the full index set is the canonical basis of the total intersection,
/// and each later block extends the accumulated independent set greedily
/// by sweeping the canonical basis of its intersection. Requires the
/// generated lattice to be distributive.
pub fn partitioned_basis(family: &SubspaceFamily) -> Result<PartitionedBasis> {
    partitioned_basis_capped(family, DEFAULT_CLOSURE_CAP)
}

pub fn partitioned_basis_capped(family: &SubspaceFamily, cap: usize) -> Result<PartitionedBasis> {
    let closure = lattice_closure(family, cap);
    if !closure.complete {
        return Err(Error::ClosureIncomplete(closure.len()));
    }
    if !is_distributive(&closure)? {
        return Err(Error::NotDistributive);
    }

    let order = admissible_order(family.len());
    let mut accumulated: Vec<Vector> = Vec::new();
    let mut rank = 0usize;
    let mut blocks: BTreeMap<Vec<usize>, Vec<Vector>> = BTreeMap::new();
    for gamma in &order {
        let a_gamma = family.intersection_over(gamma)?;
        let mut block = Vec::new();
        for v in a_gamma.basis() {
            accumulated.push(v.clone());
            let new_rank = Matrix::from_rows(&accumulated).rank();
            if new_rank > rank {
                rank = new_rank;
                block.push(v.clone());
            } else {
                accumulated.pop();
            }
        }
        blocks.insert(gamma.clone(), block);
    }

    let pb = PartitionedBasis {
        ambient_dim: family.ambient_dim(),
        blocks,
        order,
    };

    // the union must be a basis of the ambient space
    if pb.total_count() != family.ambient_dim() || rank != family.ambient_dim() {
        return Err(Error::Invalid(
            "partitioned basis does not span the ambient space".into(),
        ));
    }
    // partition property: every intersection is spanned by superset blocks
    for gamma in &pb.order {
        if pb.superset_span(gamma) != family.intersection_over(gamma)? {
            return Err(Error::Invalid(format!(
                "partition property fails at subset {gamma:?}"
            )));
        }
    }
    Ok(pb)
}

/// Outcome of the image-of-intersection check for a linear map and a
/// subspace family.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ImageIntersectionReport {
    /// `ker pi ∩ (sum A_i) = sum (ker pi ∩ A_i)`.
    pub hypothesis_holds: bool,
    /// `pi(∩ A_i) = ∩ pi(A_i)`.
    pub conclusion_holds: bool,
}

/// Verifies both the hypothesis and the conclusion of the image-of-
/// intersection criterion by direct subspace computation.
pub fn check_image_intersection(
    pi: &Matrix,
    family: &SubspaceFamily,
) -> Result<ImageIntersectionReport> {
    if pi.cols() != family.ambient_dim() {
        return Err(Error::DimensionMismatch(
            "map domain does not match family ambient".into(),
        ));
    }
    let kernel = pi.kernel();
    let total = family.total_sum()?;
    let lhs = kernel.intersect(&total)?;
    let mut rhs = Subspace::zero(family.ambient_dim());
    for m in family.members() {
        rhs = rhs.sum(&kernel.intersect(m)?)?;
    }
    let hypothesis_holds = lhs == rhs;

    let all = (0..family.len()).collect::<Vec<_>>();
    let image_of_intersection = pi.image_of(&family.intersection_over(&all)?);
    let mut intersection_of_images = pi.image_of(&Subspace::full(family.ambient_dim()));
    for m in family.members() {
        intersection_of_images = intersection_of_images.intersect(&pi.image_of(m))?;
    }
    let conclusion_holds = image_of_intersection == intersection_of_images;

    Ok(ImageIntersectionReport {
        hypothesis_holds,
        conclusion_holds,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lines_q2() -> (Subspace, Subspace, Subspace) {
        (
            Subspace::line(&Vector::unit(2, 0)),
            Subspace::line(&Vector::unit(2, 1)),
            Subspace::line(&Vector::from_i64(&[1, 1])),
        )
    }

    #[test]
    fn closure_of_two_coordinate_lines() {
        let (e1, e2, _) = lines_q2();
        let fam = SubspaceFamily::new(2, vec![e1, e2]).unwrap();
        let c = lattice_closure(&fam, 64);
        assert!(c.complete);
        assert_eq!(c.len(), 4); // 0, two lines, plane
        assert!(is_distributive(&c).unwrap());
    }

    #[test]
    fn closure_of_empty_family() {
        let fam = SubspaceFamily::new(3, vec![]).unwrap();
        let c = lattice_closure(&fam, 64);
        assert!(c.complete);
        assert_eq!(c.len(), 2); // {0, ambient}
        assert!(is_distributive(&c).unwrap());
    }

    #[test]
    fn three_lines_are_not_distributive() {
        let (e1, e2, d) = lines_q2();
        let fam = SubspaceFamily::new(2, vec![e1, e2, d]).unwrap();
        let c = lattice_closure(&fam, 64);
        assert!(c.complete);
        assert_eq!(c.len(), 5); // 0, three lines, plane
        assert!(!is_distributive(&c).unwrap());
        let (a, b, cc) = distributivity_counterexample(&c).unwrap().unwrap();
        // a ∩ (b + c) != (a ∩ b) + (a ∩ c) on the witness triple
        let lhs = c.elements[a]
            .intersect(&c.elements[b].sum(&c.elements[cc]).unwrap())
            .unwrap();
        let rhs = c.elements[a]
            .intersect(&c.elements[b])
            .unwrap()
            .sum(&c.elements[a].intersect(&c.elements[cc]).unwrap())
            .unwrap();
        assert_ne!(lhs, rhs);
    }

    #[test]
    fn coordinate_subspaces_are_distributive() {
        // spans of index subsets of the standard basis of Q^5
        let coord = |idx: &[usize]| {
            Subspace::from_spanning(
                5,
                &idx.iter().map(|&i| Vector::unit(5, i)).collect::<Vec<_>>(),
            )
        };
        let fam = SubspaceFamily::new(
            5,
            vec![coord(&[0, 1, 2]), coord(&[1, 3]), coord(&[2, 3, 4])],
        )
        .unwrap();
        let c = lattice_closure(&fam, 256);
        assert!(c.complete);
        assert!(is_distributive(&c).unwrap());
    }

    #[test]
    fn distributivity_invariant_under_permutation() {
        let (e1, e2, d) = lines_q2();
        for members in [
            vec![e1.clone(), e2.clone(), d.clone()],
            vec![d.clone(), e1.clone(), e2.clone()],
            vec![e2, d, e1],
        ] {
            let fam = SubspaceFamily::new(2, members).unwrap();
            let c = lattice_closure(&fam, 64);
            assert!(!is_distributive(&c).unwrap());
        }
    }

    #[test]
    fn closure_cap_reports_incomplete() {
        let (e1, e2, d) = lines_q2();
        let fam = SubspaceFamily::new(2, vec![e1, e2, d]).unwrap();
        let c = lattice_closure(&fam, 3);
        assert!(!c.complete);
        assert!(matches!(
            is_distributive(&c),
            Err(Error::ClosureIncomplete(_))
        ));
    }

    #[test]
    fn admissible_order_examples() {
        assert_eq!(
            admissible_order(2),
            vec![vec![0, 1], vec![0], vec![1], vec![]]
        );
        assert_eq!(admissible_order(0), vec![Vec::<usize>::new()]);
        assert_eq!(admissible_order(1), vec![vec![0], vec![]]);
    }

    #[test]
    fn admissible_order_refines_reverse_inclusion() {
        let order = admissible_order(3);
        let pos = |g: &[usize]| order.iter().position(|x| x == g).unwrap();
        for g1 in &order {
            for g2 in &order {
                let superset = g2.iter().all(|i| g1.contains(i));
                if superset && g1 != g2 {
                    assert!(pos(g1) < pos(g2));
                }
                // strictly later implies the union strictly grows
                if pos(g1) > pos(g2) {
                    let mut union = g1.clone();
                    union.extend(g2.iter().copied());
                    union.sort_unstable();
                    union.dedup();
                    assert!(union.len() > g1.len() || union != *g1);
                    assert!(union != *g1);
                }
            }
        }
    }

    #[test]
    fn partitioned_basis_two_lines() {
        let (e1, e2, _) = lines_q2();
        let fam = SubspaceFamily::new(2, vec![e1, e2]).unwrap();
        let pb = partitioned_basis(&fam).unwrap();
        assert!(pb.blocks[&vec![0, 1]].is_empty());
        assert_eq!(pb.blocks[&vec![0]], vec![Vector::unit(2, 0)]);
        assert_eq!(pb.blocks[&vec![1]], vec![Vector::unit(2, 1)]);
        assert!(pb.blocks[&vec![]].is_empty());
    }

    #[test]
    fn partitioned_basis_single_full_subspace() {
        let fam = SubspaceFamily::new(2, vec![Subspace::full(2)]).unwrap();
        let pb = partitioned_basis(&fam).unwrap();
        assert_eq!(pb.blocks[&vec![0]].len(), 2);
        assert!(pb.blocks[&vec![]].is_empty());
    }

    #[test]
    fn partitioned_basis_overlapping_planes() {
        let plane01 = Subspace::from_spanning(3, &[Vector::unit(3, 0), Vector::unit(3, 1)]);
        let plane12 = Subspace::from_spanning(3, &[Vector::unit(3, 1), Vector::unit(3, 2)]);
        let fam = SubspaceFamily::new(3, vec![plane01, plane12]).unwrap();
        let pb = partitioned_basis(&fam).unwrap();
        assert_eq!(pb.blocks[&vec![0, 1]], vec![Vector::unit(3, 1)]);
        assert_eq!(pb.blocks[&vec![0]], vec![Vector::unit(3, 0)]);
        assert_eq!(pb.blocks[&vec![1]], vec![Vector::unit(3, 2)]);
        assert!(pb.blocks[&vec![]].is_empty());
        // partition property for all four subsets, as canonical equality
        for gamma in &pb.order {
            assert_eq!(
                pb.superset_span(gamma),
                fam.intersection_over(gamma).unwrap()
            );
        }
    }

    #[test]
    fn partitioned_basis_requires_distributivity() {
        let (e1, e2, d) = lines_q2();
        let fam = SubspaceFamily::new(2, vec![e1, e2, d]).unwrap();
        assert!(matches!(
            partitioned_basis(&fam),
            Err(Error::NotDistributive)
        ));
    }

    #[test]
    fn image_intersection_identity_map() {
        let (e1, _, d) = lines_q2();
        let fam = SubspaceFamily::new(2, vec![e1, d]).unwrap();
        let r = check_image_intersection(&Matrix::identity(2), &fam).unwrap();
        assert!(r.hypothesis_holds && r.conclusion_holds);
    }

    #[test]
    fn image_intersection_failing_projection() {
        // drop the second coordinate; family {span e1, span (1,1)}
        let (e1, _, d) = lines_q2();
        let fam = SubspaceFamily::new(2, vec![e1, d]).unwrap();
        let mut pi = Matrix::zero(1, 2);
        pi.set(0, 0, crate::scalar::one());
        let r = check_image_intersection(&pi, &fam).unwrap();
        assert!(!r.hypothesis_holds);
        assert!(!r.conclusion_holds);
    }

    #[test]
    fn image_intersection_coordinate_model() {
        let coord = |idx: &[usize]| {
            Subspace::from_spanning(
                4,
                &idx.iter().map(|&i| Vector::unit(4, i)).collect::<Vec<_>>(),
            )
        };
        let fam = SubspaceFamily::new(4, vec![coord(&[0, 1]), coord(&[1, 2])]).unwrap();
        // coordinate projection dropping the last coordinate
        let mut pi = Matrix::zero(3, 4);
        for i in 0..3 {
            pi.set(i, i, crate::scalar::one());
        }
        let r = check_image_intersection(&pi, &fam).unwrap();
        assert!(r.hypothesis_holds && r.conclusion_holds);
    }
}
