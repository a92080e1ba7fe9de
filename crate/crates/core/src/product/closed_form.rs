//! Closed-form product rays of single perturbations `S_{P,lambda}`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::{neat_form, Diagnostics, EnumerationResult, ProductIndex, ProductVector};
use crate::constructions::{named_space, vdm_vector, NamedSpace, VdMParameter};
use crate::error::{Error, Result};
use crate::roots::roots;
use crate::tensor::{SystemShape, C64, ONE};
use crate::tolerances::Tolerances;

/// Which end of the van der Monde curve perturbs `S_P`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Endpoint {
    Zero,
    Infinity,
}

impl Endpoint {
    pub fn parameter(self) -> VdMParameter {
        match self {
            Endpoint::Zero => VdMParameter::real(0.0),
            Endpoint::Infinity => VdMParameter::Infinity,
        }
    }
}

/// Multiplies coefficient `t` of every factor by `lambda^t`, mapping
/// solutions for `S_{P,1}` to solutions for `S_{P,lambda}`.
pub fn rescale_ray(p: &ProductVector, lambda: C64) -> ProductVector {
    let factors = p
        .factors()
        .iter()
        .map(|f| {
            let mut pow = ONE;
            f.iter()
                .map(|&c| {
                    let out = c * pow;
                    pow *= lambda;
                    out
                })
                .collect()
        })
        .collect();
    ProductVector::new(factors).expect("rescaling by a nonzero lambda keeps factors nonzero")
}

fn finish(spec: NamedSpace, rays: Vec<ProductVector>) -> Result<EnumerationResult> {
    let tol = Tolerances::default();
    let space = named_space(&spec, &tol)?;
    let rays: Vec<ProductVector> = rays.iter().map(|r| neat_form(r, &tol)).collect();
    let residuals = rays
        .iter()
        .map(|r| space.membership_residual(&r.to_tensor()))
        .collect::<Result<Vec<_>>>()?;
    Ok(EnumerationResult {
        space: spec.to_string(),
        product_index: ProductIndex::Finite(rays.len()),
        rays,
        residuals,
        restarts_used: 0,
        seed: 0,
        family_samples: Vec::new(),
        sample_residuals: Vec::new(),
        diagnostics: Diagnostics::closed_form(),
    })
}

/// `S_{P,0}` and `S_{P,inf}` contain exactly one product ray, `z_0` or `z_inf`.
pub fn solve_sp_endpoints(shape: &SystemShape, which: Endpoint) -> Result<EnumerationResult> {
    shape.require_entangleable("an endpoint perturbation")?;
    let p = which.parameter();
    finish(
        NamedSpace::sp(shape.clone(), &[p])?,
        vec![vdm_vector(shape, p)],
    )
}

/// On `k` qubits, `S_{P,1}` contains only `z_1`.
pub fn solve_qubits_rigidity(k: usize) -> Result<EnumerationResult> {
    if k < 2 {
        return Err(Error::Argument(format!("need at least 2 qubits, got {k}")));
    }
    let shape = SystemShape::new(vec![2; k])?;
    let one = VdMParameter::real(1.0);
    finish(
        NamedSpace::sp(shape.clone(), &[one])?,
        vec![vdm_vector(&shape, one)],
    )
}

/// Solutions `(1, alpha) (x) (1, c_1, .., c_{d-1})` at `lambda = 1` besides `z_1`.
fn rays_2xd_at_one(d: usize) -> Vec<ProductVector> {
    let mut out = Vec::new();
    for t in 1..d {
        if 2 * t == d {
            continue;
        }
        let alpha = -C64::from_polar(1.0, 2.0 * PI * t as f64 / d as f64);
        let mut second = vec![ONE];
        for r in 1..d - 1 {
            let sign = if r % 2 == 0 { 1.0 } else { -1.0 };
            let c = (2.0 + sign * alpha.powu(r as u32) * (alpha - 1.0)) / (1.0 + alpha);
            second.push(c);
        }
        second.push(1.0 / alpha);
        out.push(ProductVector::new(vec![vec![ONE, alpha], second]).expect("nonzero factors"));
    }
    out
}

/// `S_{P,lambda}` on `2 (x) d` has `d` product rays for odd `d` and `d - 1` for even `d`.
pub fn solve_2xd(d: usize, lambda: C64) -> Result<EnumerationResult> {
    if d < 3 {
        return Err(Error::Argument(format!("need d >= 3, got {d}")));
    }
    nonzero_lambda(lambda)?;
    let shape = SystemShape::new(vec![2, d])?;
    let one = VdMParameter::real(1.0);
    let mut rays = vec![vdm_vector(&shape, one)];
    rays.extend(rays_2xd_at_one(d));
    let rays = rays.iter().map(|r| rescale_ray(r, lambda)).collect();
    finish(
        NamedSpace::sp(shape, &[VdMParameter::Finite(lambda)])?,
        rays,
    )
}

/// Intermediate quantities of a non-trivial `3 (x) 3` solution at `lambda = 1`:
/// `a_s = alpha_s + beta_s`, `b_s = alpha_s - beta_s`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Coordinates3x3 {
    pub beta1: C64,
    pub beta2: C64,
    pub alpha2: C64,
    pub a1: C64,
    pub b1: C64,
    pub a2: C64,
    pub b2: C64,
}

/// Solves the `3 (x) 3` level conditions
/// `a1 + b1 = 2`, `b2 + a1 b1 + a2 = 3`, `a1 b2 + a2 b1 = 2`, `a2 b2 = 1`
/// away from `z_1`. In the sum/difference coordinates `alpha_1 = 1`,
/// `alpha_2 = 1 + beta_1^2 / 2`, `beta_2 = beta_1 / 2`, and the last condition
/// leaves `beta_1^2 + 3 = 0`.
pub fn solve_3x3_coordinates() -> Result<Vec<Coordinates3x3>> {
    let mut beta1s = roots(&[C64::new(3.0, 0.0), C64::new(0.0, 0.0), ONE])?;
    beta1s.sort_by(|a, b| b.im.total_cmp(&a.im));
    Ok(beta1s
        .into_iter()
        .map(|beta1| {
            let alpha2 = 1.0 + beta1 * beta1 / 2.0;
            let beta2 = beta1 / 2.0;
            Coordinates3x3 {
                beta1,
                beta2,
                alpha2,
                a1: 1.0 + beta1,
                b1: 1.0 - beta1,
                a2: alpha2 + beta2,
                b2: alpha2 - beta2,
            }
        })
        .collect())
}

/// `S_{P,lambda}` on `3 (x) 3` has product index 3: `z_lambda` and two
/// conjugate rays.
pub fn solve_3x3(lambda: C64) -> Result<EnumerationResult> {
    nonzero_lambda(lambda)?;
    let shape = SystemShape::new(vec![3, 3])?;
    let mut rays = vec![vdm_vector(&shape, VdMParameter::real(1.0))];
    for c in solve_3x3_coordinates()? {
        rays.push(ProductVector::new(vec![
            vec![ONE, c.a1, c.a2],
            vec![ONE, c.b1, c.b2],
        ])?);
    }
    let rays = rays.iter().map(|r| rescale_ray(r, lambda)).collect();
    finish(
        NamedSpace::sp(shape, &[VdMParameter::Finite(lambda)])?,
        rays,
    )
}

fn nonzero_lambda(lambda: C64) -> Result<()> {
    if lambda.norm() == 0.0 || !lambda.re.is_finite() || !lambda.im.is_finite() {
        return Err(Error::Argument(
            "lambda must be finite and nonzero; use the endpoint solver for 0".into(),
        ));
    }
    Ok(())
}
