use nalgebra::DMatrix;

use super::ProductVector;
use crate::error::{Error, Result};
use crate::tensor::{inner, inner_slices, kron_in, TensorVector, C64, ONE, ZERO};
use crate::tolerances::Tolerances;

/// Matricization of `v` with rows indexed by the parts in `modes` (in the
/// given order) and columns by the remaining parts in their natural order.
pub fn unfold(v: &TensorVector, modes: &[usize]) -> Result<DMatrix<C64>> {
    let shape = v.shape();
    let k = shape.parts();
    let mut seen = vec![false; k];
    for &m in modes {
        if m >= k || seen[m] {
            return Err(Error::Argument(format!(
                "invalid mode list {modes:?} for {k} parts"
            )));
        }
        seen[m] = true;
    }
    let rest: Vec<usize> = (0..k).filter(|m| !seen[*m]).collect();
    let dims = shape.dims();
    let rows: usize = modes.iter().map(|&m| dims[m]).product();
    let cols: usize = rest.iter().map(|&m| dims[m]).product();
    let mut out = DMatrix::from_element(rows, cols, ZERO);
    for (flat, a) in v.amplitudes().iter().enumerate() {
        let t = shape.tuple_of(flat).entries;
        let r = modes.iter().fold(0, |acc, &m| acc * dims[m] + t[m]);
        let c = rest.iter().fold(0, |acc, &m| acc * dims[m] + t[m]);
        out[(r, c)] = *a;
    }
    Ok(out)
}

/// Largest singular value, its left singular vector, and the ratio `s2 / s1`.
fn leading_left(m: &DMatrix<C64>) -> (f64, Vec<C64>, f64) {
    let svd = m.clone().svd(true, false);
    let u = svd.u.expect("left vectors requested");
    let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
    order.sort_by(|&a, &b| svd.singular_values[b].total_cmp(&svd.singular_values[a]));
    let s1 = svd.singular_values[order[0]];
    let s2 = order.get(1).map_or(0.0, |&i| svd.singular_values[i]);
    let lead = u.column(order[0]).iter().copied().collect();
    (s1, lead, if s1 > 0.0 { s2 / s1 } else { 0.0 })
}

/// Factors of `v` when it is a product vector, `None` otherwise.
///
/// Every single-part unfolding must have `s2 / s1 < tol_rank`; the factors are
/// the leading left singular vectors, with the global scalar folded into the
/// first factor.
pub fn is_product(v: &TensorVector, tol: &Tolerances) -> Result<Option<ProductVector>> {
    if v.is_zero() {
        return Err(Error::Argument("product test of the zero vector".into()));
    }
    let shape = v.shape();
    let mut factors = Vec::with_capacity(shape.parts());
    for j in 0..shape.parts() {
        let (_, lead, ratio) = leading_left(&unfold(v, &[j])?);
        if ratio >= tol.tol_rank {
            return Ok(None);
        }
        factors.push(lead);
    }
    let approx = kron_in(shape, &factors)?;
    let scale = inner(&approx, v)? / inner(&approx, &approx)?.re;
    let err = v.sub(&approx.scale(scale))?.norm() / v.norm();
    if err >= tol.tol_zero {
        return Ok(None);
    }
    for c in factors[0].iter_mut() {
        *c *= scale;
    }
    Ok(Some(ProductVector::new(factors)?))
}

/// Whether `v` is a product across the bipartition `modes | rest`.
pub fn is_product_across(v: &TensorVector, modes: &[usize], tol: &Tolerances) -> Result<bool> {
    if v.is_zero() {
        return Err(Error::Argument("product test of the zero vector".into()));
    }
    let (_, _, ratio) = leading_left(&unfold(v, modes)?);
    Ok(ratio < tol.tol_rank)
}

/// Canonical ray representative: each factor divided by its lowest-index
/// nonzero coefficient. Coefficients below `tol_eq` times the factor's largest
/// modulus count as zero.
pub fn neat_form(p: &ProductVector, tol: &Tolerances) -> ProductVector {
    let factors = p
        .factors()
        .iter()
        .map(|f| {
            let max = f.iter().map(|c| c.norm()).fold(0.0, f64::max);
            let cleaned: Vec<C64> = f
                .iter()
                .map(|&c| if c.norm() < tol.tol_eq * max { ZERO } else { c })
                .collect();
            let m = cleaned
                .iter()
                .position(|c| *c != ZERO)
                .expect("factor is nonzero");
            let lead = cleaned[m];
            cleaned
                .iter()
                .enumerate()
                .map(|(t, &c)| match t {
                    t if t < m => ZERO,
                    t if t == m => ONE,
                    _ => c / lead,
                })
                .collect()
        })
        .collect();
    ProductVector::new(factors).expect("neat factors are nonzero")
}

/// Whether `v` and `w` span the same ray: `|<v,w>| >= (1 - tol_eq) |v| |w|`.
pub fn ray_equal(v: &TensorVector, w: &TensorVector, tol: &Tolerances) -> Result<bool> {
    v.check_same_shape(w)?;
    let (nv, nw) = (v.norm(), w.norm());
    if nv == 0.0 || nw == 0.0 {
        return Err(Error::Argument(
            "ray comparison with the zero vector".into(),
        ));
    }
    Ok(inner_slices(v.amplitudes(), w.amplitudes()).norm() >= (1.0 - tol.tol_eq) * nv * nw)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tensor::{kron, SystemShape};

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn re(v: &[f64]) -> Vec<C64> {
        v.iter().map(|&x| c(x, 0.0)).collect()
    }

    #[test]
    fn vandermonde_is_product() {
        let tol = Tolerances::default();
        for lam in [c(1.0, 0.0), c(0.0, 1.0), c(-2.0, 0.5)] {
            let f = vec![ONE, lam, lam * lam];
            let z = kron(&[f.clone(), f.clone()]).unwrap();
            let p = is_product(&z, &tol).unwrap().expect("product");
            let n = neat_form(&p, &tol);
            for fac in n.factors() {
                for (a, b) in fac.iter().zip(&f) {
                    assert!((a - b).norm() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn bell_pair_is_not_product() {
        let tol = Tolerances::default();
        let s = SystemShape::new(vec![2, 2]).unwrap();
        let v = TensorVector::basis(&s, &[0, 0])
            .unwrap()
            .add(&TensorVector::basis(&s, &[1, 1]).unwrap())
            .unwrap();
        assert!(is_product(&v, &tol).unwrap().is_none());
        assert!(is_product(&TensorVector::zeros(&s), &tol).is_err());
    }

    #[test]
    fn reconstruction_keeps_global_scalar() {
        let tol = Tolerances::default();
        let v = kron(&[re(&[2.0, -1.0, 2.0]), re(&[2.0, -1.0, 2.0])])
            .unwrap()
            .scale(c(0.0, 3.0));
        let p = is_product(&v, &tol).unwrap().unwrap();
        assert!(v.sub(&p.to_tensor()).unwrap().norm() < 1e-12);
    }

    #[test]
    fn neat_form_examples() {
        let tol = Tolerances::default();
        let p = ProductVector::from_real(&[&[2.0, -1.0, 2.0], &[2.0, -1.0, 2.0]]).unwrap();
        let n = neat_form(&p, &tol);
        assert_eq!(n.factors()[0], re(&[1.0, -0.5, 1.0]));
        assert_eq!(n.factors()[1], re(&[1.0, -0.5, 1.0]));
        let p = ProductVector::new(vec![vec![ZERO, c(0.0, 3.0)], re(&[1.0, 1.0])]).unwrap();
        let n = neat_form(&p, &tol);
        assert_eq!(n.factors()[0], re(&[0.0, 1.0]));
        assert_eq!(n.factors()[1], re(&[1.0, 1.0]));
        assert_eq!(neat_form(&n, &tol), n);
        // a tiny leading coefficient is treated as zero
        let p = ProductVector::from_real(&[&[1e-12, 1.0], &[1.0, 0.0]]).unwrap();
        assert_eq!(neat_form(&p, &tol).factors()[0], re(&[0.0, 1.0]));
    }

    #[test]
    fn ray_equal_examples() {
        let tol = Tolerances::default();
        let s = SystemShape::new(vec![2, 2]).unwrap();
        let v = kron(&[re(&[1.0, 2.0]), vec![c(0.0, 1.0), ONE]]).unwrap();
        assert!(ray_equal(&v, &v.scale(c(0.0, 3.0)), &tol).unwrap());
        let e00 = TensorVector::basis(&s, &[0, 0]).unwrap();
        let e11 = TensorVector::basis(&s, &[1, 1]).unwrap();
        assert!(!ray_equal(&e00, &e11, &tol).unwrap());
        assert!(ray_equal(&e00, &TensorVector::zeros(&s), &tol).is_err());
    }

    #[test]
    fn unfolding_layout() {
        let v = kron(&[re(&[1.0, 2.0]), re(&[1.0, 10.0, 100.0])]).unwrap();
        let m = unfold(&v, &[1]).unwrap();
        assert_eq!(m.shape(), (3, 2));
        assert_eq!(m[(2, 1)], c(200.0, 0.0));
        assert!(unfold(&v, &[0, 0]).is_err());
    }

    #[test]
    fn bipartite_products() {
        let tol = Tolerances::default();
        let s = SystemShape::new(vec![2, 2, 2]).unwrap();
        // |0> (x) (|00> + |11>): product across {1}|{2,3} only
        let v = TensorVector::basis(&s, &[0, 0, 0])
            .unwrap()
            .add(&TensorVector::basis(&s, &[0, 1, 1]).unwrap())
            .unwrap();
        assert!(is_product_across(&v, &[0], &tol).unwrap());
        assert!(!is_product_across(&v, &[1], &tol).unwrap());
        assert!(!is_product_across(&v, &[2], &tol).unwrap());
        assert!(is_product(&v, &tol).unwrap().is_none());
    }
}
