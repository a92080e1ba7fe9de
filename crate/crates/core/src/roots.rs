//! Polynomial roots from companion-matrix eigenvalues, polished by Newton steps.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::tensor::{C64, ONE, ZERO};

/// Evaluates `sum c_i x^i` (ascending coefficients) and its derivative.
pub fn eval_with_derivative(coeffs: &[C64], x: C64) -> (C64, C64) {
    let mut p = ZERO;
    let mut dp = ZERO;
    for &c in coeffs.iter().rev() {
        dp = dp * x + p;
        p = p * x + c;
    }
    (p, dp)
}

/// Evaluates `sum c_i x^i` (ascending coefficients).
pub fn eval(coeffs: &[C64], x: C64) -> C64 {
    eval_with_derivative(coeffs, x).0
}

/// All complex roots, with multiplicity, of the polynomial with ascending
/// coefficients `coeffs`. The leading coefficient must be nonzero.
pub fn roots(coeffs: &[C64]) -> Result<Vec<C64>> {
    let n = coeffs.len().saturating_sub(1);
    if n == 0 {
        return Err(Error::Argument(
            "polynomial of degree zero has no roots".into(),
        ));
    }
    let lead = coeffs[n];
    if lead == ZERO {
        return Err(Error::Argument("leading coefficient is zero".into()));
    }
    let mut comp = DMatrix::from_element(n, n, ZERO);
    for i in 1..n {
        comp[(i, i - 1)] = ONE;
    }
    for i in 0..n {
        comp[(i, n - 1)] = -coeffs[i] / lead;
    }
    let eig = comp
        .schur()
        .eigenvalues()
        .ok_or_else(|| Error::InternalConsistency("companion eigenvalues unavailable".into()))?;
    Ok(eig.iter().map(|&z| polish(coeffs, z)).collect())
}

/// A few Newton steps, kept only while they reduce `|p|`.
fn polish(coeffs: &[C64], mut z: C64) -> C64 {
    let mut best = eval(coeffs, z).norm();
    for _ in 0..8 {
        let (p, dp) = eval_with_derivative(coeffs, z);
        if dp == ZERO || p == ZERO {
            break;
        }
        let next = z - p / dp;
        let val = eval(coeffs, next).norm();
        if !(val < best) {
            break;
        }
        z = next;
        best = val;
    }
    z
}
