use ces_core::tensor::{enumerate_level, kron};
use ces_core::{SystemShape, C64};
use proptest::prelude::*;

fn complex() -> impl Strategy<Value = C64> {
    (-2.0..2.0f64, -2.0..2.0f64).prop_map(|(re, im)| C64::new(re, im))
}

fn factors() -> impl Strategy<Value = Vec<Vec<C64>>> {
    prop::collection::vec(2usize..=4, 1..=3).prop_flat_map(|dims| {
        dims.into_iter()
            .map(|d| prop::collection::vec(complex(), d))
            .collect::<Vec<_>>()
    })
}

proptest! {
    #[test]
    fn kron_is_multilinear(fs in factors(), c in complex(), j in 0usize..3) {
        let j = j % fs.len();
        let base = kron(&fs).unwrap();
        let mut scaled = fs.clone();
        for x in scaled[j].iter_mut() {
            *x *= c;
        }
        let lhs = kron(&scaled).unwrap();
        let rhs = base.scale(c);
        for (a, b) in lhs.amplitudes().iter().zip(rhs.amplitudes()) {
            prop_assert!((a - b).norm() <= 1e-12 * (1.0 + b.norm()));
        }
    }

    #[test]
    fn level_cardinalities_sum_to_total(dims in prop::collection::vec(1usize..=4, 1..=4)) {
        let shape = SystemShape::new(dims).unwrap();
        let total: usize = (0..=shape.n_prime())
            .map(|n| enumerate_level(&shape, n).unwrap().len())
            .sum();
        prop_assert_eq!(total, shape.total_dim());
        prop_assert!(enumerate_level(&shape, shape.n_prime() + 1).is_err());
    }
}

#[test]
fn square_level_counts() {
    for d in 2..=6 {
        let shape = SystemShape::new(vec![d, d]).unwrap();
        for n in 1..=2 * d - 3 {
            let want = if n < d { n + 1 } else { 2 * d - n - 1 };
            assert_eq!(
                enumerate_level(&shape, n).unwrap().len(),
                want,
                "d={d} n={n}"
            );
        }
    }
}
