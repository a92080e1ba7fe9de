use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Numerical thresholds shared by every module.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Relative second-singular-value threshold for rank-1 decisions.
    pub tol_rank: f64,
    /// Relative residual-norm threshold for subspace membership.
    pub tol_zero: f64,
    /// Ray-equality and orthonormality threshold.
    pub tol_eq: f64,
    /// Eigenvalue slack for positivity checks.
    pub tol_eig: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            tol_rank: 1e-9,
            tol_zero: 1e-8,
            tol_eq: 1e-7,
            tol_eig: 1e-10,
        }
    }
}

impl Tolerances {
    pub fn validate(&self) -> Result<()> {
        let all = [self.tol_rank, self.tol_zero, self.tol_eq, self.tol_eig];
        if all.iter().any(|t| !(t.is_finite() && *t > 0.0)) {
            return Err(Error::Argument(format!(
                "tolerances must be strictly positive and finite: {self:?}"
            )));
        }
        if self.tol_rank >= 1.0 {
            return Err(Error::Argument(format!(
                "tol_rank must be below 1, got {}",
                self.tol_rank
            )));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_are_valid() {
        Tolerances::default().validate().unwrap();
    }

    #[test]
    fn rejects_nonpositive_and_large_rank() {
        let mut t = Tolerances::default();
        t.tol_zero = 0.0;
        assert!(t.validate().is_err());
        let mut t = Tolerances::default();
        t.tol_rank = 1.0;
        assert!(t.validate().is_err());
    }
}
