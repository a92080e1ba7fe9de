use ces_core::constructions::{shifts3q_upb, tiles_upb};
use ces_core::states::{
    bipartitions, is_ppt, partial_transpose_matrix, random_state, upb_complement_state,
};
use ces_core::{SystemShape, Tolerances};
use proptest::prelude::*;

fn shapes() -> Vec<SystemShape> {
    [
        vec![2, 2],
        vec![2, 3],
        vec![3, 3],
        vec![2, 2, 2],
        vec![2, 2, 3],
    ]
    .into_iter()
    .map(|d| SystemShape::new(d).unwrap())
    .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn partial_transpose_laws(which in 0usize..5, rank in 1usize..=4, seed in any::<u64>(), cut in 0usize..8) {
        let shape = &shapes()[which];
        let rho = random_state(shape, rank, seed);
        let cuts = bipartitions(shape.parts());
        let parts = &cuts[cut % cuts.len()];
        let rest: Vec<usize> = (1..=shape.parts()).filter(|j| !parts.contains(j)).collect();
        let m = rho.matrix();
        let once = partial_transpose_matrix(shape, m, parts).unwrap();
        let twice = partial_transpose_matrix(shape, &once, parts).unwrap();
        prop_assert_eq!(&twice, m);
        prop_assert!((once.trace() - m.trace()).norm() < 1e-12);
        let other = partial_transpose_matrix(shape, m, &rest).unwrap();
        prop_assert!((&once - other.transpose()).norm() < 1e-12);
    }
}

#[test]
fn bipartition_counts() {
    for k in 2..=6 {
        assert_eq!(bipartitions(k).len(), (1 << (k - 1)) - 1);
    }
    assert_eq!(bipartitions(3), vec![vec![1], vec![2], vec![3]]);
}

#[test]
fn upb_states_are_ppt_and_annihilate_the_upb() {
    let tol = Tolerances::default();
    for upb in [tiles_upb(), shifts3q_upb()] {
        let rho = upb_complement_state(&upb, &tol).unwrap();
        assert!(is_ppt(&rho, &tol).unwrap().ppt_all);
        for p in &upb {
            let v = nalgebra::DVector::from_column_slice(p.to_tensor().amplitudes());
            assert!((rho.matrix() * &v).norm() < tol.tol_eq);
        }
    }
}
