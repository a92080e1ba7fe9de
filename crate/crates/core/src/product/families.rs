//! One-parameter families of product vectors inside double perturbations.

use std::fmt;

use serde::{Deserialize, Serialize};

use super::{
    neat_form, ray_equal, rescale_ray, Diagnostics, EnumerationResult, Method, ProductIndex,
    ProductVector,
};
use crate::constructions::{BaseSpace, Member, NamedSpace, VdMParameter};
use crate::error::{Error, Result};
use crate::roots::roots;
use crate::subspace::Subspace;
use crate::tensor::{SystemShape, C64, ONE, ZERO};
use crate::tolerances::Tolerances;

/// A family generator. Parameters that fix the ambient space are part of the
/// name; the family parameter is passed separately.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Family {
    /// `(1, -(t+1), t) (x) |1>` in `SU+0+1`.
    Su01,
    /// `|0> (x) (1, t, 0)` in `SU+0+4`.
    Su04,
    /// `(|0>+|1>) (x) ((beta-1)|0>+|1>) (x) |0>` in `SV+1+2`, `beta` not 0 or 1.
    Sv12,
    /// `(|0> + a|d-1>) (x) (|0> - a|d-1>)` in `S_{P,0,inf}` on `d x d`.
    #[serde(rename = "SP_0INF")]
    Sp0Inf { d: usize },
    /// `(1,1,q) (x) (1,1,alpha/q)` with `q = 1 +- sqrt(1-alpha)`, `alpha` in (0,1),
    /// rescaled to `S_{P,lambda,inf}` on `3 x 3`.
    #[serde(rename = "SP_1INF_3X3")]
    Sp1Inf3x3 { lambda: C64, plus: bool },
    /// Roots of the sextic for `S_{P,lambda,mu}` on `3 x 3`, indexed by `root`
    /// (0..6); when `mu = -lambda`, `root` picks one of the two closed-form branches.
    #[serde(rename = "SP_LM_3X3")]
    SpLm3x3 { lambda: C64, mu: C64, root: usize },
    /// Roots of the cubic for `S_{P,lambda,mu}` on three qubits.
    #[serde(rename = "SP_LM_QUBITS3")]
    SpLmQubits3 { lambda: C64, mu: C64 },
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = |z: &C64| crate::format_complex(*z);
        match self {
            Family::Su01 => write!(f, "SU01"),
            Family::Su04 => write!(f, "SU04"),
            Family::Sv12 => write!(f, "SV12"),
            Family::Sp0Inf { d } => write!(f, "SP_0INF(d={d})"),
            Family::Sp1Inf3x3 { lambda, plus } => write!(
                f,
                "SP_1INF_3x3(lambda={}, branch={})",
                c(lambda),
                if *plus { "+" } else { "-" }
            ),
            Family::SpLm3x3 { lambda, mu, root } => write!(
                f,
                "SP_LM_3x3(lambda={}, mu={}, root={root})",
                c(lambda),
                c(mu)
            ),
            Family::SpLmQubits3 { lambda, mu } => {
                write!(f, "SP_LM_QUBITS3(lambda={}, mu={})", c(lambda), c(mu))
            }
        }
    }
}

impl Family {
    /// The doubly perturbed space the family lives in.
    pub fn space(&self) -> Result<NamedSpace> {
        let shape = |d: Vec<usize>| SystemShape::new(d);
        match *self {
            Family::Su01 => NamedSpace::fixed(BaseSpace::SU, vec![Member::Upb(0), Member::Upb(1)]),
            Family::Su04 => NamedSpace::fixed(BaseSpace::SU, vec![Member::Upb(0), Member::Upb(4)]),
            Family::Sv12 => NamedSpace::fixed(BaseSpace::SV, vec![Member::Upb(1), Member::Upb(2)]),
            Family::Sp0Inf { d } => NamedSpace::sp(
                shape(vec![d, d])?,
                &[VdMParameter::real(0.0), VdMParameter::Infinity],
            ),
            Family::Sp1Inf3x3 { lambda, .. } => NamedSpace::sp(
                shape(vec![3, 3])?,
                &[VdMParameter::Finite(lambda), VdMParameter::Infinity],
            ),
            Family::SpLm3x3 { lambda, mu, .. } => NamedSpace::sp(
                shape(vec![3, 3])?,
                &[VdMParameter::Finite(lambda), VdMParameter::Finite(mu)],
            ),
            Family::SpLmQubits3 { lambda, mu } => NamedSpace::sp(
                shape(vec![2, 2, 2])?,
                &[VdMParameter::Finite(lambda), VdMParameter::Finite(mu)],
            ),
        }
    }

    /// Checks the parts of the name that do not depend on the family parameter.
    fn validate(&self) -> Result<()> {
        match *self {
            Family::Sp0Inf { d } if d < 2 => Err(Error::Argument(format!("need d >= 2, got {d}"))),
            Family::Sp1Inf3x3 { lambda, .. } => nonzero(lambda, "lambda"),
            Family::SpLm3x3 { lambda, mu, root } => {
                let alpha = lm_alpha(lambda, mu)?;
                let max = if is_minus_one(alpha) { 2 } else { 6 };
                if root >= max {
                    return Err(Error::Argument(format!(
                        "root index {root} must be below {max}"
                    )));
                }
                Ok(())
            }
            Family::SpLmQubits3 { lambda, mu } => lm_alpha(lambda, mu).map(|_| ()),
            _ => Ok(()),
        }
    }
}

fn nonzero(z: C64, what: &str) -> Result<()> {
    if z.norm() == 0.0 {
        return Err(Error::Argument(format!("{what} must be nonzero")));
    }
    Ok(())
}

fn lm_alpha(lambda: C64, mu: C64) -> Result<C64> {
    nonzero(lambda, "lambda")?;
    let alpha = mu / lambda;
    if (alpha - ONE).norm() < 1e-12 {
        return Err(Error::Argument("mu must differ from lambda".into()));
    }
    Ok(alpha)
}

fn is_minus_one(alpha: C64) -> bool {
    (alpha + ONE).norm() < 1e-12
}

fn excluded(what: &str, value: C64) -> Error {
    Error::Excluded(format!("{what} (value {})", crate::format_complex(value)))
}

fn require_away(value: C64, tol: f64, what: &str) -> Result<()> {
    if value.norm() < tol {
        return Err(excluded(what, value));
    }
    Ok(())
}

fn r(x: f64) -> C64 {
    C64::new(x, 0.0)
}

/// `A_s = 1 + beta alpha^s` for `s = 0..=n`.
fn level_weights(alpha: C64, beta: C64, n: usize) -> Vec<C64> {
    (0..=n).map(|s| 1.0 + beta * alpha.powu(s as u32)).collect()
}

fn check_lm_beta(alpha: C64, beta: C64, n: usize, tol: f64) -> Result<Vec<C64>> {
    require_away(beta, tol, "beta must not be 0")?;
    require_away(beta + 1.0, tol, "beta must not be -1")?;
    let a = level_weights(alpha, beta, n);
    for (s, v) in a.iter().enumerate() {
        require_away(*v, tol, &format!("1 + beta alpha^{s} must not vanish"))?;
    }
    Ok(a)
}

// ascending-coefficient polynomial helpers
fn padd(a: &[C64], b: &[C64]) -> Vec<C64> {
    let mut out = vec![ZERO; a.len().max(b.len())];
    for (i, c) in a.iter().enumerate() {
        out[i] += c;
    }
    for (i, c) in b.iter().enumerate() {
        out[i] += c;
    }
    out
}

fn pmul(a: &[C64], b: &[C64]) -> Vec<C64> {
    let mut out = vec![ZERO; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn pscale(a: &[C64], s: C64) -> Vec<C64> {
    a.iter().map(|c| c * s).collect()
}

/// The sextic whose roots are the admissible `b_2` for `S_{P,1,alpha}` on
/// `3 x 3` at a given `beta`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SexticData {
    pub alpha: C64,
    pub beta: C64,
    /// Ascending coefficients; monic of degree 6.
    pub coefficients: Vec<C64>,
    pub roots: Vec<C64>,
    /// `((1 + beta alpha^4) / (1 + beta))^3`.
    pub expected_root_product: C64,
}

/// With `A_s = 1 + beta alpha^s`, `B = 1 + beta`, `v = x^2 - A_4/B` and
/// `r = (2/B)(A_1 x - A_3)`:
/// `q = (x^2 + A_4/B) v^2 + (2 A_1/B) r v x^2 - r^2 x^3 - 3 (A_2/B) x v^2`.
pub fn sextic_coefficients(alpha: C64, beta: C64) -> Result<SexticData> {
    let tol = Tolerances::default().tol_eq;
    let a = check_lm_beta(alpha, beta, 4, tol)?;
    let b = a[0];
    let v = vec![-a[4] / b, ZERO, ONE];
    let rr = vec![-2.0 * a[3] / b, 2.0 * a[1] / b];
    let v2 = pmul(&v, &v);
    let x2 = [ZERO, ZERO, ONE];
    let x3 = [ZERO, ZERO, ZERO, ONE];
    let mut q = pmul(&[a[4] / b, ZERO, ONE], &v2);
    q = padd(&q, &pscale(&pmul(&pmul(&rr, &v), &x2), 2.0 * a[1] / b));
    q = padd(&q, &pscale(&pmul(&pmul(&rr, &rr), &x3), -ONE));
    q = padd(&q, &pscale(&pmul(&[ZERO, ONE], &v2), -3.0 * a[2] / b));
    q.truncate(7);
    let mut rts = roots(&q)?;
    rts.sort_by(|x, y| x.re.total_cmp(&y.re).then(x.im.total_cmp(&y.im)));
    Ok(SexticData {
        alpha,
        beta,
        coefficients: q,
        roots: rts,
        expected_root_product: (a[4] / b).powu(3),
    })
}

/// Neat ray for `S_{P,1,alpha}` on `3 x 3` at `beta`, with `b_2` the chosen root.
fn lm_3x3_at_one(alpha: C64, beta: C64, root: usize) -> Result<ProductVector> {
    let tol = Tolerances::default().tol_eq;
    if is_minus_one(alpha) {
        check_lm_beta(alpha, beta, 4, tol)?;
        require_away(beta - 1.0, tol, "beta must not be 1 when mu = -lambda")?;
        let s = (-beta).sqrt();
        let sign = if root == 0 { 1.0 } else { -1.0 };
        let b1 = (1.0 - beta + sign * 2.0 * s) / (1.0 + beta);
        let c1 = (1.0 - beta - sign * 2.0 * s) / (1.0 + beta);
        return ProductVector::new(vec![vec![ONE, b1, ONE], vec![ONE, c1, ONE]]);
    }
    let a = check_lm_beta(alpha, beta, 4, tol)?;
    let b = a[0];
    // steps (i) and (v): the discarded cubic in beta
    let cubic = a[4] * a[1] * a[1] + a[3] * a[3] * b - 3.0 * a[3] * a[2] * a[1];
    require_away(cubic, tol, "A4 A1^2 + A3^2 B - 3 A3 A2 A1 must not vanish")?;
    // step (ii)
    require_away(
        beta * alpha * alpha - 1.0,
        tol,
        "beta alpha^2 must not be 1",
    )?;
    let data = sextic_coefficients(alpha, beta)?;
    let x = data.roots[root];
    let v = x * x - a[4] / b;
    require_away(v, tol, "the chosen root makes v(x) vanish")?;
    let u = 2.0 * (a[1] * x - a[3]) / (b * v);
    let b1 = u * x;
    let c1 = 2.0 * a[1] / b - b1;
    let c2 = a[4] / (b * x);
    ProductVector::new(vec![vec![ONE, b1, x], vec![ONE, c1, c2]])
}

fn lm_qubits_at_one(alpha: C64, beta: C64) -> Result<ProductVector> {
    let a = check_lm_beta(alpha, beta, 3, Tolerances::default().tol_eq)?;
    let b = a[0];
    let cubic = [-a[3] / b, 3.0 * a[2] / b, -3.0 * a[1] / b, ONE];
    let mut z = roots(&cubic)?;
    z.sort_by(|x, y| x.re.total_cmp(&y.re).then(x.im.total_cmp(&y.im)));
    ProductVector::new(z.iter().map(|&c| vec![ONE, c]).collect())
}

/// The family member at `parameter` (`t`, `beta`, `a` or `alpha` depending on
/// the family), in neat form.
pub fn family(name: Family, parameter: C64) -> Result<ProductVector> {
    name.validate()?;
    let tol = Tolerances::default();
    let p = parameter;
    let ray = match name {
        Family::Su01 => ProductVector::new(vec![vec![ONE, -(p + 1.0), p], vec![ZERO, ONE, ZERO]])?,
        Family::Su04 => ProductVector::new(vec![vec![ONE, ZERO, ZERO], vec![ONE, p, ZERO]])?,
        Family::Sv12 => {
            require_away(p, tol.tol_eq, "beta must not be 0")?;
            require_away(p - 1.0, tol.tol_eq, "beta must not be 1")?;
            ProductVector::new(vec![vec![ONE, ONE], vec![p - 1.0, ONE], vec![ONE, ZERO]])?
        }
        Family::Sp0Inf { d } => {
            let mut f = vec![ZERO; d];
            let mut g = vec![ZERO; d];
            f[0] = ONE;
            g[0] = ONE;
            f[d - 1] += p;
            g[d - 1] -= p;
            ProductVector::new(vec![f, g])?
        }
        Family::Sp1Inf3x3 { lambda, plus } => {
            if p.im.abs() > tol.tol_eq || !(p.re > 0.0 && p.re < 1.0) {
                return Err(excluded(
                    "alpha must be real and strictly between 0 and 1",
                    p,
                ));
            }
            let alpha = p.re;
            let s = (1.0 - alpha).sqrt();
            let q = if plus { 1.0 + s } else { 1.0 - s };
            let at_one =
                ProductVector::new(vec![vec![ONE, ONE, r(q)], vec![ONE, ONE, r(alpha / q)]])?;
            rescale_ray(&at_one, lambda)
        }
        Family::SpLm3x3 { lambda, mu, root } => {
            rescale_ray(&lm_3x3_at_one(mu / lambda, p, root)?, lambda)
        }
        Family::SpLmQubits3 { lambda, mu } => {
            rescale_ray(&lm_qubits_at_one(mu / lambda, p)?, lambda)
        }
    };
    Ok(neat_form(&ray, &tol))
}

/// `samples` admissible parameters: `1 + j/samples` for `j = 0, 1, ..`, skipping
/// excluded values; for `SP_1INF_3x3` the grid is `(j+1)/(samples+1)`.
pub fn family_grid(name: Family, samples: usize) -> Result<Vec<(C64, ProductVector)>> {
    name.validate()?;
    let mut out = Vec::with_capacity(samples);
    let mut j = 0usize;
    while out.len() < samples {
        if j > 10 * samples + 10 {
            return Err(Error::InternalConsistency(format!(
                "too many excluded grid points for {name}"
            )));
        }
        let p = match name {
            Family::Sp1Inf3x3 { .. } => r((j + 1) as f64 / (samples + 1) as f64),
            _ => r(1.0 + j as f64 / samples as f64),
        };
        j += 1;
        match family(name, p) {
            Ok(v) => out.push((p, v)),
            Err(Error::Excluded(_)) => continue,
            Err(e) => return Err(e),
        }
    }
    Ok(out)
}

/// Certifies infinitely many product rays in `s` by `samples` family members:
/// all must lie in `s` and be pairwise ray-distinct.
pub fn certify_infinite(s: &Subspace, name: Family, samples: usize) -> Result<EnumerationResult> {
    if samples < 2 {
        return Err(Error::Argument("need at least 2 samples".into()));
    }
    let tol = Tolerances::default();
    let grid = family_grid(name, samples)?;
    let mut members = Vec::with_capacity(samples);
    let mut residuals = Vec::with_capacity(samples);
    for (p, v) in grid {
        let t = v.to_tensor();
        let res = s.membership_residual(&t)?;
        if !(res < tol.tol_zero) {
            return Err(Error::InternalConsistency(format!(
                "{name} member at {} has membership residual {res:e}",
                crate::format_complex(p)
            )));
        }
        for (q, w) in members.iter().enumerate() {
            let w: &ProductVector = w;
            if ray_equal(&w.to_tensor(), &t, &tol)? {
                return Err(Error::InternalConsistency(format!(
                    "{name} members {q} and {} coincide",
                    members.len()
                )));
            }
        }
        members.push(v);
        residuals.push(res);
    }
    Ok(EnumerationResult {
        space: name.space()?.to_string(),
        product_index: ProductIndex::Infinite,
        rays: Vec::new(),
        residuals: Vec::new(),
        restarts_used: 0,
        seed: 0,
        family_samples: members,
        sample_residuals: residuals,
        diagnostics: Diagnostics {
            method: Method::Family,
            certified_family: Some(name.to_string()),
            positive_dimensional: true,
            ..Diagnostics::closed_form()
        },
    })
}
