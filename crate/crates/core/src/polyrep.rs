//! Tensors as polynomials: basis vector `|i_1 .. i_k>` is the monomial
//! `X_1^{i_1} .. X_k^{i_k}`, so a tensor and its polynomial share one
//! coefficient array.

use std::fmt;

use crate::error::{Error, Result};
use crate::tensor::{SystemShape, TensorVector, C64, ZERO};
use crate::tolerances::Tolerances;

/// A polynomial with per-variable degree bounds `d_j - 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct PolynomialRep {
    vector: TensorVector,
}

/// Relabels a tensor as a polynomial.
pub fn to_poly(v: &TensorVector) -> PolynomialRep {
    PolynomialRep { vector: v.clone() }
}

/// Relabels a polynomial as a tensor.
pub fn from_poly(p: &PolynomialRep) -> TensorVector {
    p.vector.clone()
}

impl PolynomialRep {
    pub fn shape(&self) -> &SystemShape {
        self.vector.shape()
    }

    /// Coefficients in lexicographic exponent order.
    pub fn coefficients(&self) -> &[C64] {
        self.vector.amplitudes()
    }

    pub fn coefficient(&self, exponents: &[usize]) -> Result<C64> {
        self.vector.amplitude(exponents)
    }

    /// Total degrees carrying a coefficient of modulus at least `cut`.
    fn degrees_above(&self, cut: f64) -> Vec<usize> {
        let shape = self.shape();
        let mut deg: Vec<usize> = self
            .coefficients()
            .iter()
            .enumerate()
            .filter(|(_, c)| c.norm() >= cut && c.norm() > 0.0)
            .map(|(f, _)| shape.tuple_of(f).level())
            .collect();
        deg.sort_unstable();
        deg.dedup();
        deg
    }

    fn terms_of_degree(&self, n: usize, cut: f64) -> usize {
        let shape = self.shape();
        self.coefficients()
            .iter()
            .enumerate()
            .filter(|(f, c)| c.norm() >= cut && c.norm() > 0.0 && shape.tuple_of(*f).level() == n)
            .count()
    }
}

/// The degree-`n` homogeneous part.
pub fn homogeneous_part(p: &PolynomialRep, n: usize) -> Result<PolynomialRep> {
    let shape = p.shape();
    if n > shape.n_prime() {
        return Err(Error::Range(format!(
            "degree {n} exceeds the maximal total degree {}",
            shape.n_prime()
        )));
    }
    let mut v = p.vector.clone();
    for (f, c) in v.amplitudes_mut().iter_mut().enumerate() {
        if shape.tuple_of(f).level() != n {
            *c = ZERO;
        }
    }
    Ok(PolynomialRep { vector: v })
}

/// Lowest and highest total degrees with a nonzero coefficient.
pub fn degree_range(p: &PolynomialRep, tol: &Tolerances) -> Option<(usize, usize)> {
    let deg = p.degrees_above(cutoff(p, tol));
    Some((*deg.first()?, *deg.last()?))
}

fn cutoff(p: &PolynomialRep, tol: &Tolerances) -> f64 {
    tol.tol_eq
        * p.coefficients()
            .iter()
            .map(|c| c.norm())
            .fold(0.0, f64::max)
}

/// Whether the lowest and highest homogeneous parts are single monomials.
/// Coefficients below `tol_eq` times the largest modulus count as zero.
pub fn is_conical(p: &PolynomialRep, tol: &Tolerances) -> Result<bool> {
    if p.vector.is_zero() {
        return Err(Error::Argument(
            "the zero polynomial has no homogeneous parts".into(),
        ));
    }
    let cut = cutoff(p, tol);
    let (lo, hi) = degree_range(p, tol).expect("nonzero polynomial");
    Ok(p.terms_of_degree(lo, cut) == 1 && p.terms_of_degree(hi, cut) == 1)
}

fn variable_names(k: usize) -> Vec<String> {
    if k <= 3 {
        ["X", "Y", "Z"][..k].iter().map(|s| s.to_string()).collect()
    } else {
        (1..=k).map(|j| format!("X{j}")).collect()
    }
}

fn monomial(names: &[String], exps: &[usize]) -> String {
    exps.iter()
        .zip(names)
        .filter(|(e, _)| **e > 0)
        .map(|(e, n)| {
            if *e == 1 {
                n.clone()
            } else {
                format!("{n}^{e}")
            }
        })
        .collect::<Vec<_>>()
        .join(" ")
}

/// Terms by ascending total degree, then descending lexicographic exponents;
/// unit coefficients are omitted and signs are spaced (`1 - Y`, `X + X Y`).
impl fmt::Display for PolynomialRep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let shape = self.shape();
        let names = variable_names(shape.parts());
        let max = self
            .coefficients()
            .iter()
            .map(|c| c.norm())
            .fold(0.0, f64::max);
        let mut terms: Vec<(Vec<usize>, C64)> = self
            .coefficients()
            .iter()
            .enumerate()
            .filter(|(_, c)| c.norm() > 1e-12 * max)
            .map(|(i, c)| (shape.tuple_of(i).entries, *c))
            .collect();
        if terms.is_empty() {
            return write!(f, "0");
        }
        terms.sort_by(|(a, _), (b, _)| {
            let (la, lb) = (a.iter().sum::<usize>(), b.iter().sum::<usize>());
            la.cmp(&lb).then_with(|| b.cmp(a))
        });
        let mut out = String::new();
        for (idx, (exps, c)) in terms.iter().enumerate() {
            let mono = monomial(&names, exps);
            let real = c.im.abs() <= 1e-12 * max;
            let (negative, coef) = if real {
                let text = crate::format_complex(C64::new(c.re.abs(), 0.0));
                (c.re < 0.0, text)
            } else {
                (false, format!("({})", crate::format_complex(*c)))
            };
            let sign = match (idx, negative) {
                (0, false) => "",
                (0, true) => "-",
                (_, false) => " + ",
                (_, true) => " - ",
            };
            let body = match (coef.as_str(), mono.is_empty()) {
                (_, true) => coef.clone(),
                ("1", false) => mono,
                (_, false) => format!("{coef} {mono}"),
            };
            out.push_str(sign);
            out.push_str(&body);
        }
        write!(f, "{out}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{shifts3q_upb, tiles_upb, vdm_vector, VdMParameter};
    use crate::product::is_product;

    fn shape(d: &[usize]) -> SystemShape {
        SystemShape::new(d.to_vec()).unwrap()
    }

    fn unnormalized(v: &TensorVector) -> TensorVector {
        // scale so the largest real coefficient is one
        let m = v.amplitudes().iter().map(|c| c.norm()).fold(0.0, f64::max);
        v.scale(C64::new(1.0 / m, 0.0))
    }

    #[test]
    fn printer_matches_basis_examples() {
        let psi0 = unnormalized(&tiles_upb()[0].to_tensor());
        assert_eq!(to_poly(&psi0).to_string(), "1 - Y");
        let phi2 = unnormalized(&shifts3q_upb()[1].to_tensor());
        assert_eq!(to_poly(&phi2).to_string(), "X + X Y");
        let e11 = TensorVector::basis(&shape(&[2, 2]), &[1, 1]).unwrap();
        assert_eq!(to_poly(&e11).to_string(), "X Y");
        let w = TensorVector::from_real(&shape(&[3, 3]), &[0., 0., 0., 0., 0., 0., 0., -1., 1.])
            .unwrap();
        assert_eq!(to_poly(&w).to_string(), "-X^2 Y + X^2 Y^2");
        let four = shape(&[2, 2, 2, 2]);
        let v = TensorVector::basis(&four, &[1, 0, 0, 1])
            .unwrap()
            .scale(C64::new(0.0, 2.0));
        assert_eq!(to_poly(&v).to_string(), "(2i) X1 X4");
        assert_eq!(to_poly(&TensorVector::zeros(&four)).to_string(), "0");
    }

    #[test]
    fn homogeneous_parts() {
        let s = shape(&[2, 2]);
        let p = to_poly(&TensorVector::from_real(&s, &[1.0, 0.0, 1.0, 1.0]).unwrap());
        assert_eq!(p.to_string(), "1 + X + X Y");
        assert_eq!(homogeneous_part(&p, 0).unwrap().to_string(), "1");
        assert!(homogeneous_part(&p, 3).is_err());
        let z1 = to_poly(&vdm_vector(&shape(&[3, 3]), VdMParameter::real(1.0)).to_tensor());
        assert_eq!(
            homogeneous_part(&z1, 2).unwrap().to_string(),
            "X^2 + X Y + Y^2"
        );
        let f4 = unnormalized(&tiles_upb()[4].to_tensor());
        let low = homogeneous_part(&to_poly(&f4), 0).unwrap();
        assert_eq!(low.to_string(), "1");
        assert_eq!(
            degree_range(&to_poly(&f4), &Tolerances::default()),
            Some((0, 4))
        );
    }

    #[test]
    fn conical_examples() {
        let tol = Tolerances::default();
        let s = shape(&[2, 2]);
        let x_plus_y = TensorVector::from_real(&s, &[0.0, 1.0, 1.0, 0.0]).unwrap();
        assert!(!is_conical(&to_poly(&x_plus_y), &tol).unwrap());
        let w = TensorVector::from_real(&s, &[1.0, 0.0, 1.0, 1.0]).unwrap();
        assert!(is_conical(&to_poly(&w), &tol).unwrap());
        // conical but not a product vector
        assert!(is_product(&w, &tol).unwrap().is_none());
        for p in tiles_upb().iter().chain(shifts3q_upb().iter()) {
            assert!(is_conical(&to_poly(&p.to_tensor()), &tol).unwrap());
        }
        assert!(is_conical(&to_poly(&TensorVector::zeros(&s)), &tol).is_err());
    }

    #[test]
    fn roundtrip_is_identity() {
        let v = TensorVector::new(
            shape(&[2, 3]),
            (0..6)
                .map(|i| C64::new(i as f64, -(i as f64) / 3.0))
                .collect(),
        )
        .unwrap();
        assert_eq!(from_poly(&to_poly(&v)), v);
    }
}
