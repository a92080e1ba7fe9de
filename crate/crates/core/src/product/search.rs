use nalgebra::{DMatrix, DVector};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;

use super::{
    neat_form, ray_equal, Diagnostics, EnumerationResult, Method, ProductIndex, ProductVector,
    SearchConfig,
};
use crate::error::Result;
use crate::subspace::{complement, Subspace};
use crate::tensor::{SystemShape, C64, ZERO};

/// `f(u) = |(I - P_S) kron(u)|^2` for a subspace, stored as the conjugated
/// complement basis.
struct Objective {
    dims: Vec<usize>,
    tuples: Vec<Vec<usize>>,
    rows: Vec<Vec<C64>>,
}

impl Objective {
    fn new(s: &Subspace) -> Self {
        let shape = s.shape();
        let rows = complement(s)
            .basis()
            .iter()
            .map(|c| c.amplitudes().iter().map(|a| a.conj()).collect())
            .collect();
        Self {
            dims: shape.dims().to_vec(),
            tuples: (0..shape.total_dim())
                .map(|f| shape.tuple_of(f).entries)
                .collect(),
            rows,
        }
    }

    /// `A[m, s] = sum over i with i_j = s of conj(c_m[i]) prod_{l != j} u_l[i_l]`,
    /// so that `<c_m, kron(u)> = (A u_j)[m]`.
    fn mode_matrix(&self, u: &[Vec<C64>], j: usize) -> DMatrix<C64> {
        let mut a = DMatrix::from_element(self.rows.len(), self.dims[j], ZERO);
        for (flat, t) in self.tuples.iter().enumerate() {
            let mut w = C64::new(1.0, 0.0);
            for (l, &il) in t.iter().enumerate() {
                if l != j {
                    w *= u[l][il];
                }
            }
            if w == ZERO {
                continue;
            }
            for (m, row) in self.rows.iter().enumerate() {
                a[(m, t[j])] += row[flat] * w;
            }
        }
        a
    }

    fn residual(&self, u: &[Vec<C64>]) -> DVector<C64> {
        let a = self.mode_matrix(u, 0);
        &a * DVector::from_column_slice(&u[0])
    }

    /// Objective value with the factors scaled to unit norm.
    fn normalized_value(&self, u: &[Vec<C64>]) -> f64 {
        let scale: f64 = u.iter().map(|f| norm_sqr(f)).product();
        self.residual(u).norm_squared() / scale
    }
}

fn norm_sqr(f: &[C64]) -> f64 {
    f.iter().map(|c| c.norm_sqr()).sum()
}

fn normalize(f: &mut [C64]) {
    let n = norm_sqr(f).sqrt();
    for c in f.iter_mut() {
        *c /= n;
    }
}

fn random_factors(dims: &[usize], rng: &mut ChaCha8Rng) -> Vec<Vec<C64>> {
    dims.iter()
        .map(|&d| {
            let mut f: Vec<C64> = (0..d)
                .map(|_| {
                    let re: f64 = StandardNormal.sample(rng);
                    let im: f64 = StandardNormal.sample(rng);
                    C64::new(re, im)
                })
                .collect();
            normalize(&mut f);
            f
        })
        .collect()
}

/// Cyclic mode updates: each factor becomes the smallest eigenvector of
/// `A^H A`. Stops when `f` is negligible or its relative decrease stalls.
fn alternating_sweeps(obj: &Objective, u: &mut [Vec<C64>], max_iters: usize) -> usize {
    let mut prev = f64::INFINITY;
    for it in 0..max_iters {
        let mut f = 0.0;
        for j in 0..u.len() {
            let a = obj.mode_matrix(u, j);
            let eig = (a.adjoint() * &a).symmetric_eigen();
            let (idx, val) = eig
                .eigenvalues
                .iter()
                .enumerate()
                .min_by(|x, y| x.1.total_cmp(y.1))
                .expect("factor dimension is positive");
            u[j] = eig.eigenvectors.column(idx).iter().copied().collect();
            f = val.max(0.0);
        }
        if f < 1e-28 || prev - f <= 1e-4 * prev {
            return it + 1;
        }
        prev = f;
    }
    max_iters
}

/// Scales each factor so its largest entry is one; returns the pivots.
fn pin_pivots(u: &mut [Vec<C64>]) -> Vec<usize> {
    u.iter_mut()
        .map(|f| {
            let p = (0..f.len())
                .max_by(|&a, &b| f[a].norm().total_cmp(&f[b].norm()))
                .expect("nonempty factor");
            let lead = f[p];
            for c in f.iter_mut() {
                *c /= lead;
            }
            p
        })
        .collect()
}

/// Residual and Jacobian in the pinned chart; columns are the free entries.
fn chart_jacobian(
    obj: &Objective,
    u: &[Vec<C64>],
    pivots: &[usize],
) -> (DVector<C64>, DMatrix<C64>, Vec<(usize, usize)>) {
    let k = u.len();
    let modes: Vec<DMatrix<C64>> = (0..k).map(|j| obj.mode_matrix(u, j)).collect();
    let r = &modes[0] * DVector::from_column_slice(&u[0]);
    let vars: Vec<(usize, usize)> = (0..k)
        .flat_map(|j| {
            let p = pivots[j];
            (0..obj.dims[j])
                .filter(move |&s| s != p)
                .map(move |s| (j, s))
        })
        .collect();
    let jac = DMatrix::from_fn(r.len(), vars.len(), |m, c| modes[vars[c].0][(m, vars[c].1)]);
    (r, jac, vars)
}

/// Damped Gauss-Newton refinement in the chart where each factor's largest
/// entry is pinned to one. Converges linearly at singular zeros, where the
/// alternating sweeps slow to a crawl.
fn levenberg_marquardt(obj: &Objective, u: &mut [Vec<C64>], max_iters: usize) -> usize {
    let mut mu = f64::NAN;
    for it in 0..max_iters {
        let pivots = pin_pivots(u);
        let (r, jac, vars) = chart_jacobian(obj, u, &pivots);
        let g = r.norm_squared();
        if g < 1e-32 {
            return it;
        }
        let jh = jac.adjoint();
        let normal = &jh * &jac;
        let rhs = -(&jh * &r);
        if mu.is_nan() {
            let diag = (0..normal.nrows())
                .map(|i| normal[(i, i)].re)
                .fold(0.0, f64::max);
            mu = 1e-6 * diag.max(1e-300);
        }
        let mut accepted = false;
        for _ in 0..30 {
            let mut damped = normal.clone();
            for i in 0..damped.nrows() {
                damped[(i, i)] += C64::new(mu, 0.0);
            }
            let Some(step) = damped.cholesky().map(|c| c.solve(&rhs)) else {
                mu *= 4.0;
                continue;
            };
            let mut trial: Vec<Vec<C64>> = u.to_vec();
            for (c, &(j, s)) in vars.iter().enumerate() {
                trial[j][s] += step[c];
            }
            let g_new = obj.residual(&trial).norm_squared();
            if g_new < g {
                let small = step.norm() < 1e-15;
                u.clone_from_slice(&trial);
                mu = (mu / 3.0).max(1e-300);
                accepted = !(small || g - g_new < 1e-15 * g);
                break;
            }
            mu *= 4.0;
        }
        if !accepted {
            return it + 1;
        }
    }
    max_iters
}

/// `sqrt(1 - |<a, b>|)` for the normalized product tensors of two factor lists.
fn ray_distance(a: &[Vec<C64>], b: &[Vec<C64>]) -> f64 {
    let fidelity: f64 = a
        .iter()
        .zip(b)
        .map(|(x, y)| {
            let ip: C64 = x.iter().zip(y).map(|(p, q)| p.conj() * q).sum();
            ip.norm() / (norm_sqr(x) * norm_sqr(y)).sqrt()
        })
        .product();
    (1.0 - fidelity).max(0.0).sqrt()
}

/// Clusters closer than this are one ray; approximations of a zero of high
/// multiplicity scatter on roughly this scale.
const MERGE_RADIUS: f64 = 0.02;
/// Chart step used to probe the solution set around a zero.
const PROBE_STEP: f64 = 0.15;

/// Whether the zero `u` lies on a positive-dimensional set of zeros: stepping
/// along the weakest direction of the Jacobian and polishing again must land
/// on a zero that is not `u` itself.
fn on_positive_dimensional_set(obj: &Objective, u: &[Vec<C64>], tol_zero: f64) -> bool {
    let mut base = u.to_vec();
    let pivots = pin_pivots(&mut base);
    let (_, jac, vars) = chart_jacobian(obj, &base, &pivots);
    if vars.is_empty() {
        return false;
    }
    let eig = (jac.adjoint() * &jac).symmetric_eigen();
    let idx = eig
        .eigenvalues
        .iter()
        .enumerate()
        .min_by(|x, y| x.1.total_cmp(y.1))
        .map(|(i, _)| i)
        .expect("at least one variable");
    let dir = eig.eigenvectors.column(idx);
    [1.0, -1.0].iter().any(|&sign| {
        let mut trial = base.clone();
        for (c, &(j, s)) in vars.iter().enumerate() {
            trial[j][s] += dir[c] * (sign * PROBE_STEP);
        }
        levenberg_marquardt(obj, &mut trial, 200);
        obj.normalized_value(&trial).sqrt() < tol_zero && ray_distance(&trial, &base) > MERGE_RADIUS
    })
}

struct Outcome {
    factors: Vec<Vec<C64>>,
    value: f64,
    iterations: usize,
}

fn run_restart(obj: &Objective, seed: u64, max_iters: usize) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut u = random_factors(&obj.dims, &mut rng);
    if obj.rows.is_empty() {
        return Outcome {
            factors: u,
            value: 0.0,
            iterations: 0,
        };
    }
    let mut iterations = alternating_sweeps(obj, &mut u, max_iters);
    iterations += levenberg_marquardt(obj, &mut u, max_iters.min(200));
    for f in u.iter_mut() {
        normalize(f);
    }
    let value = obj.normalized_value(&u);
    Outcome {
        factors: u,
        value,
        iterations,
    }
}

/// Product rays of `s` by random-restart minimization of
/// `|(I - P_S) kron(u)|^2` over unit factors.
///
/// Each restart (seeded with `seed + index`) runs alternating smallest
/// eigenvector updates followed by a damped Gauss-Newton polish; a limit point
/// is accepted when its residual norm is below `tol_zero`. Accepted points are
/// merged by `ray_equal`. The count is reported as `tau` when no new ray
/// appeared in the final half of the restarts and fewer than
/// `infinite_threshold` rays were found; otherwise the result is tagged
/// infinite.
pub fn enumerate_products(s: &Subspace, cfg: &SearchConfig) -> Result<EnumerationResult> {
    cfg.validate()?;
    let obj = Objective::new(s);
    let tol = &cfg.tol;
    let outcomes: Vec<Outcome> = (0..cfg.restarts)
        .into_par_iter()
        .map(|i| run_restart(&obj, cfg.seed.wrapping_add(i as u64), cfg.max_iters))
        .collect();

    struct Cluster {
        factors: Vec<Vec<C64>>,
        ray: ProductVector,
        residual: f64,
    }
    let mut clusters: Vec<Cluster> = Vec::new();
    let mut converged = 0;
    let mut last_new = None;
    for (i, out) in outcomes.iter().enumerate() {
        if !(out.value.sqrt() < tol.tol_zero) {
            continue;
        }
        let ray = neat_form(&ProductVector::new(out.factors.clone())?, tol);
        let v = ray.to_tensor();
        let res = s.membership_residual(&v)?;
        if !(res < tol.tol_zero) {
            continue;
        }
        converged += 1;
        let mut matched = None;
        for (r, known) in clusters.iter().enumerate() {
            if ray_distance(&known.factors, &out.factors) < MERGE_RADIUS
                || ray_equal(&known.ray.to_tensor(), &v, tol)?
            {
                matched = Some(r);
                break;
            }
        }
        match matched {
            Some(r) if res < clusters[r].residual => {
                clusters[r] = Cluster {
                    factors: out.factors.clone(),
                    ray,
                    residual: res,
                };
            }
            Some(_) => {}
            None => {
                clusters.push(Cluster {
                    factors: out.factors.clone(),
                    ray,
                    residual: res,
                });
                last_new = Some(i);
            }
        }
    }
    let positive_dimensional = clusters
        .par_iter()
        .any(|c| on_positive_dimensional_set(&obj, &c.factors, tol.tol_zero));
    let (rays, residuals): (Vec<ProductVector>, Vec<f64>) =
        clusters.into_iter().map(|c| (c.ray, c.residual)).unzip();

    let tail_start = cfg.restarts - cfg.restarts / 2;
    let saturated = last_new.map_or(true, |i| i < tail_start);
    let product_index = if saturated && !positive_dimensional && rays.len() < cfg.infinite_threshold
    {
        ProductIndex::Finite(rays.len())
    } else {
        ProductIndex::Infinite
    };
    let mean_iterations =
        outcomes.iter().map(|o| o.iterations as f64).sum::<f64>() / cfg.restarts as f64;
    Ok(EnumerationResult {
        space: describe(s.shape(), s.dim()),
        product_index,
        rays,
        residuals,
        restarts_used: cfg.restarts,
        seed: cfg.seed,
        family_samples: Vec::new(),
        sample_residuals: Vec::new(),
        diagnostics: Diagnostics {
            method: Method::Search,
            converged_restarts: converged,
            last_new_ray_restart: last_new,
            saturated,
            positive_dimensional,
            mean_iterations,
            certified_family: None,
        },
    })
}

fn describe(shape: &SystemShape, dim: usize) -> String {
    format!("subspace of dimension {dim} in {shape}")
}
