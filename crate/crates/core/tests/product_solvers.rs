use ces_core::constructions::{named_space, NamedSpace, VdMParameter};
use ces_core::product::{
    enumerate_products, is_product, neat_form, ray_equal, rescale_ray, solve_2xd, solve_3x3,
    EnumerationResult, ProductIndex, ProductVector, SearchConfig,
};
use ces_core::subspace::contains;
use ces_core::tensor::kron;
use ces_core::{SystemShape, Tolerances, C64};
use proptest::prelude::*;

fn sp_lambda(dims: &[usize], lambda: C64) -> ces_core::subspace::Subspace {
    let shape = SystemShape::new(dims.to_vec()).unwrap();
    let spec = NamedSpace::sp(shape, &[VdMParameter::Finite(lambda)]).unwrap();
    named_space(&spec, &Tolerances::default()).unwrap()
}

fn same_rays(a: &[ProductVector], b: &[ProductVector]) -> bool {
    let tol = Tolerances::default();
    let has = |set: &[ProductVector], p: &ProductVector| {
        set.iter()
            .any(|q| ray_equal(&q.to_tensor(), &p.to_tensor(), &tol).unwrap())
    };
    a.len() == b.len() && a.iter().all(|p| has(b, p)) && b.iter().all(|p| has(a, p))
}

fn assert_sound(dims: &[usize], lambda: C64, r: &EnumerationResult) {
    let tol = Tolerances::default();
    let s = sp_lambda(dims, lambda);
    for ray in &r.rays {
        let v = ray.to_tensor();
        assert!(contains(&s, &v, &tol).unwrap());
        assert!(is_product(&v, &tol).unwrap().is_some());
    }
}

#[test]
fn oracle_matches_closed_forms_at_one() {
    let one = C64::new(1.0, 0.0);
    let cfg = SearchConfig::default();
    for d in 3..=7 {
        let closed = solve_2xd(d, one).unwrap();
        let found = enumerate_products(&sp_lambda(&[2, d], one), &cfg).unwrap();
        assert_sound(&[2, d], one, &closed);
        assert_sound(&[2, d], one, &found);
        assert!(same_rays(&closed.rays, &found.rays), "d={d}");
    }
    let closed = solve_3x3(one).unwrap();
    let found = enumerate_products(&sp_lambda(&[3, 3], one), &cfg).unwrap();
    assert!(same_rays(&closed.rays, &found.rays));
}

#[test]
fn rescaling_is_covariant() {
    let one = C64::new(1.0, 0.0);
    for lambda in [C64::new(2.0, 0.0), C64::new(0.0, 1.0)] {
        let base = solve_3x3(one).unwrap();
        let moved: Vec<ProductVector> = base.rays.iter().map(|p| rescale_ray(p, lambda)).collect();
        assert!(same_rays(&moved, &solve_3x3(lambda).unwrap().rays));
        let base = solve_2xd(5, one).unwrap();
        let moved: Vec<ProductVector> = base.rays.iter().map(|p| rescale_ray(p, lambda)).collect();
        let at = solve_2xd(5, lambda).unwrap();
        assert!(same_rays(&moved, &at.rays));
        assert_sound(&[2, 5], lambda, &at);
    }
}

#[test]
fn search_is_deterministic() {
    let tol = Tolerances::default();
    for text in ["U", "SV+1", "SU+0+4"] {
        let s = named_space(&NamedSpace::parse(text, None).unwrap(), &tol).unwrap();
        let cfg = SearchConfig {
            seed: 42,
            ..SearchConfig::default()
        };
        assert_eq!(
            enumerate_products(&s, &cfg).unwrap(),
            enumerate_products(&s, &cfg).unwrap()
        );
    }
}

#[test]
fn infinite_spaces_are_flagged() {
    let tol = Tolerances::default();
    let s = named_space(
        &NamedSpace::parse("SP+z(1)+z(-1)", Some(&[3, 3])).unwrap(),
        &tol,
    )
    .unwrap();
    let r = enumerate_products(&s, &SearchConfig::default()).unwrap();
    assert_eq!(r.product_index, ProductIndex::Infinite);
    assert!(r.likely_infinite());
    assert!(r.diagnostics.positive_dimensional);
}

#[test]
fn enumeration_json_roundtrip() {
    let r = solve_3x3(C64::new(0.0, 1.0)).unwrap();
    let text = serde_json::to_string(&r).unwrap();
    let back: EnumerationResult = serde_json::from_str(&text).unwrap();
    assert_eq!(back, r);
}

fn complex() -> impl Strategy<Value = C64> {
    (-2.0..2.0f64, -2.0..2.0f64).prop_map(|(re, im)| C64::new(re, im))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn closed_forms_hold_for_any_lambda(
        r in 0.3..2.0f64,
        theta in 0.0..std::f64::consts::TAU,
        d in 3usize..=6,
    ) {
        let lambda = C64::from_polar(r, theta);
        let tol = Tolerances::default();
        for (dims, res) in [(vec![2, d], solve_2xd(d, lambda).unwrap()), (vec![3, 3], solve_3x3(lambda).unwrap())] {
            let s = sp_lambda(&dims, lambda);
            for ray in &res.rays {
                prop_assert!(s.membership_residual(&ray.to_tensor()).unwrap() < 1e-8);
            }
            prop_assert!(res.residuals.iter().all(|x| *x < tol.tol_zero));
        }
    }

    #[test]
    fn neat_form_keeps_the_ray(fs in prop::collection::vec(prop::collection::vec(complex(), 2..=3), 1..=3)) {
        prop_assume!(fs.iter().all(|f| f.iter().any(|c| c.norm() > 0.1)));
        let tol = Tolerances::default();
        let p = ProductVector::new(fs.clone()).unwrap();
        let n = neat_form(&p, &tol);
        prop_assert!(ray_equal(&n.to_tensor(), &kron(&fs).unwrap(), &tol).unwrap());
        prop_assert_eq!(neat_form(&n, &tol), n.clone());
        for f in n.factors() {
            let lead = f.iter().find(|c| c.norm() > 0.0).unwrap();
            prop_assert_eq!(*lead, C64::new(1.0, 0.0));
        }
    }
}
