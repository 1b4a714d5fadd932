//! Property-based tests: exact linear-algebra invariants and rewrite
//! confluence, over randomized inputs with seeded shrinking.

use hopfglue_core::linalg::{Matrix, Vector};
use hopfglue_core::scalar::{rat, Scalar};
use hopfglue_core::subspace::Subspace;
use hopfglue_core::toeplitz::{Gen, Word};
use proptest::prelude::*;

fn scalar_strategy() -> impl Strategy<Value = Scalar> {
    (-4i64..=4, 1i64..=3).prop_map(|(n, d)| rat(n, d))
}

fn vector_strategy(dim: usize) -> impl Strategy<Value = Vector> {
    proptest::collection::vec(scalar_strategy(), dim).prop_map(Vector::new)
}

fn matrix_strategy() -> impl Strategy<Value = Matrix> {
    (1usize..=4, 1usize..=4).prop_flat_map(|(r, c)| {
        proptest::collection::vec(vector_strategy(c), r)
            .prop_map(move |rows| Matrix::from_rows(&rows))
    })
}

fn subspace_strategy(dim: usize) -> impl Strategy<Value = Subspace> {
    proptest::collection::vec(vector_strategy(dim), 0..=3)
        .prop_map(move |vs| Subspace::from_spanning(dim, &vs))
}

proptest! {
    #[test]
    fn rank_nullity_is_exact(m in matrix_strategy()) {
        prop_assert_eq!(m.rank() + m.kernel().dim(), m.cols());
    }

    #[test]
    fn kernel_vectors_annihilate(m in matrix_strategy()) {
        for v in m.kernel().basis() {
            prop_assert!(m.mul_vec(v).is_zero());
        }
    }

    #[test]
    fn solve_satisfies_the_system(m in matrix_strategy(), x in vector_strategy(4)) {
        // build a guaranteed-solvable right-hand side
        let x = Vector::new(x.iter().take(m.cols()).cloned().collect());
        let rhs = m.mul_vec(&x);
        let sol = m.solve(&rhs).expect("consistent by construction");
        prop_assert_eq!(m.mul_vec(&sol), rhs);
    }

    #[test]
    fn modular_law_holds(
        a0 in subspace_strategy(4),
        b in subspace_strategy(4),
        c in subspace_strategy(4),
    ) {
        // force a inside c
        let a = a0.intersect(&c).unwrap();
        let lhs = a.sum(&b.intersect(&c).unwrap()).unwrap();
        let rhs = a.sum(&b).unwrap().intersect(&c).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn lattice_ops_are_presentation_independent(
        vs in proptest::collection::vec(vector_strategy(4), 1..=4),
        ws in proptest::collection::vec(vector_strategy(4), 1..=4),
        perm_seed in 0usize..24,
    ) {
        let a = Subspace::from_spanning(4, &vs);
        let b = Subspace::from_spanning(4, &ws);
        // re-present a by shuffled sums of its spanning vectors
        let mut shuffled = vs.clone();
        shuffled.rotate_left(perm_seed % vs.len().max(1));
        if shuffled.len() >= 2 {
            let v0 = shuffled[0].add(&shuffled[1]);
            shuffled.push(v0);
        }
        let a2 = Subspace::from_spanning(4, &shuffled);
        prop_assert_eq!(&a, &a2);
        prop_assert_eq!(a.sum(&b).unwrap(), a2.sum(&b).unwrap());
        prop_assert_eq!(a.intersect(&b).unwrap(), a2.intersect(&b).unwrap());
    }

    #[test]
    fn sum_and_intersection_are_commutative_idempotent(
        a in subspace_strategy(3),
        b in subspace_strategy(3),
    ) {
        prop_assert_eq!(a.sum(&b).unwrap(), b.sum(&a).unwrap());
        prop_assert_eq!(a.intersect(&b).unwrap(), b.intersect(&a).unwrap());
        prop_assert_eq!(a.sum(&a).unwrap(), a.clone());
        prop_assert_eq!(a.intersect(&a).unwrap(), a.clone());
    }

    #[test]
    fn sum_and_intersection_are_associative(
        a in subspace_strategy(3),
        b in subspace_strategy(3),
        c in subspace_strategy(3),
    ) {
        prop_assert_eq!(
            a.sum(&b).unwrap().sum(&c).unwrap(),
            a.sum(&b.sum(&c).unwrap()).unwrap()
        );
        prop_assert_eq!(
            a.intersect(&b).unwrap().intersect(&c).unwrap(),
            a.intersect(&b.intersect(&c).unwrap()).unwrap()
        );
    }
}

fn letter_strategy() -> impl Strategy<Value = Gen> {
    prop_oneof![
        Just(Gen::S),
        Just(Gen::SStar),
        Just(Gen::Phi1),
        Just(Gen::Phi2),
    ]
}

/// Applies the isometry rewrite at pseudo-random redex positions until a
/// fixpoint, independently of the library's scan order.
fn normalize_random_order(mut letters: Vec<Gen>, mut seed: u64) -> Vec<Gen> {
    loop {
        let redexes: Vec<usize> = letters
            .windows(2)
            .enumerate()
            .filter(|(_, w)| *w == [Gen::SStar, Gen::S])
            .map(|(i, _)| i)
            .collect();
        if redexes.is_empty() {
            return letters;
        }
        seed = seed
            .wrapping_mul(6364136223846793005)
            .wrapping_add(1442695040888963407);
        let pick = redexes[(seed >> 33) as usize % redexes.len()];
        letters.drain(pick..pick + 2);
    }
}

proptest! {
    #[test]
    fn rewrite_is_confluent(
        letters in proptest::collection::vec(letter_strategy(), 0..=12),
        seed in any::<u64>(),
    ) {
        let canonical = Word::from_letters(&letters);
        let random_order = normalize_random_order(letters, seed);
        prop_assert_eq!(canonical.letters(), &random_order[..]);
    }

    #[test]
    fn rewrite_is_idempotent(letters in proptest::collection::vec(letter_strategy(), 0..=12)) {
        let once = Word::from_letters(&letters);
        let twice = Word::from_letters(once.letters());
        prop_assert_eq!(once, twice);
    }
}
