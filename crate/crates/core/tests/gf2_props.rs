use proptest::prelude::*;

use egz::gf2::{BitMatrix, BitVector};

fn matrix() -> impl Strategy<Value = BitMatrix> {
    (1usize..=8, 1usize..=12).prop_flat_map(|(r, c)| {
        prop::collection::vec(any::<bool>(), r * c).prop_map(move |bits| BitMatrix::from_fn(r, c, |i, j| bits[i * c + j]))
    })
}

proptest! {
    #[test]
    fn rank_nullity(m in matrix()) {
        let kernel = m.nullspace_basis();
        prop_assert_eq!(m.rank() + kernel.len(), m.cols());
        prop_assert_eq!(m.rank(), m.transpose().rank());
        for x in &kernel {
            prop_assert!(m.mul_vec(x).unwrap().is_zero());
        }
    }

    #[test]
    fn solve_hits_every_reachable_target(m in matrix(), seed in any::<u64>()) {
        let x = BitVector::from_u64(m.cols(), seed & ((1 << m.cols()) - 1));
        let target = m.mul_vec(&x).unwrap();
        let found = m.solve(&target).unwrap().expect("target is in the column space");
        prop_assert_eq!(m.mul_vec(&found).unwrap(), target);
    }

    #[test]
    fn solve_rejects_targets_outside_the_column_space(m in matrix(), seed in any::<u64>()) {
        let target = BitVector::from_u64(m.rows(), seed & ((1 << m.rows()) - 1));
        let reachable = m.with_column(&target).unwrap().rank() == m.rank();
        prop_assert_eq!(m.solve(&target).unwrap().is_some(), reachable);
    }

    #[test]
    fn text_round_trip(m in matrix()) {
        prop_assert_eq!(BitMatrix::parse(&m.to_string()).unwrap(), m);
    }
}
