use ces_core::polyrep::{from_poly, is_conical, to_poly};
use ces_core::product::is_product;
use ces_core::tensor::kron;
use ces_core::{SystemShape, TensorVector, Tolerances, C64};
use proptest::prelude::*;

fn complex() -> impl Strategy<Value = C64> {
    (-3.0..3.0f64, -3.0..3.0f64).prop_map(|(re, im)| C64::new(re, im))
}

fn tensor() -> impl Strategy<Value = TensorVector> {
    prop::collection::vec(1usize..=4, 1..=4).prop_flat_map(|dims| {
        let shape = SystemShape::new(dims).unwrap();
        prop::collection::vec(complex(), shape.total_dim())
            .prop_map(move |a| TensorVector::new(shape.clone(), a).unwrap())
    })
}

fn nonzero_factors() -> impl Strategy<Value = Vec<Vec<C64>>> {
    prop::collection::vec(2usize..=4, 1..=3).prop_flat_map(|dims| {
        dims.into_iter()
            .map(|d| {
                // entries are zero or well above the relative zero cutoff
                let entry = prop_oneof![
                    1 => Just(C64::new(0.0, 0.0)),
                    3 => complex().prop_filter("modulus", |c| c.norm() >= 0.1),
                ];
                prop::collection::vec(entry, d)
                    .prop_filter("nonzero factor", |f| f.iter().any(|c| c.norm() > 0.0))
            })
            .collect::<Vec<_>>()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn roundtrip_is_exact(v in tensor()) {
        prop_assert_eq!(from_poly(&to_poly(&v)), v);
    }

    #[test]
    fn product_vectors_are_conical(fs in nonzero_factors()) {
        let v = kron(&fs).unwrap();
        prop_assert!(is_conical(&to_poly(&v), &Tolerances::default()).unwrap());
    }
}

#[test]
fn conical_is_not_sufficient() {
    let tol = Tolerances::default();
    let shape = SystemShape::new(vec![2, 2]).unwrap();
    let w = TensorVector::from_real(&shape, &[1.0, 0.0, 1.0, 1.0]).unwrap();
    let p = to_poly(&w);
    assert_eq!(p.to_string(), "1 + X + X Y");
    assert!(is_conical(&p, &tol).unwrap());
    assert!(is_product(&w, &tol).unwrap().is_none());
}
