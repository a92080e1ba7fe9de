//! The acceptance suite: fifteen numbered checks of the toolkit's claims,
//! each reported as a PASS/FAIL row.

use std::f64::consts::PI;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::constructions::{
    named_space, parthasarathy_space, shifts3q_upb, tiles_chi, tiles_upb, NamedSpace,
};
use crate::error::Result;
use crate::polyrep::{from_poly, is_conical, to_poly};
use crate::product::{
    certify_infinite, enumerate_products, is_product_across, ray_equal, rescale_ray,
    sextic_coefficients, solve_2xd, solve_3x3, solve_qubits_rigidity, solve_sp_endpoints, Endpoint,
    EnumerationResult, Family, ProductIndex, ProductVector, SearchConfig,
};
use crate::states::{
    bipartitions, certify_entangled_by_range, is_ppt, partial_transpose_matrix, random_state,
    upb_complement_state, RangeVerdict,
};
use crate::subspace::rank;
use crate::tensor::{SystemShape, TensorVector, C64, ONE};
use crate::tolerances::Tolerances;

/// Settings shared by every row. `tol` drives the search; the fixed
/// thresholds of each criterion are applied on top.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyOptions {
    pub seed: u64,
    pub restarts: usize,
    pub tol: Tolerances,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self {
            seed: 0,
            restarts: 400,
            tol: Tolerances::default(),
        }
    }
}

/// Outcome of one criterion.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CriterionRow {
    pub id: usize,
    pub claim: String,
    pub passed: bool,
    pub detail: String,
    pub seconds: f64,
    pub budget_seconds: f64,
}

impl CriterionRow {
    /// `PASS [ 2] claim: detail (0.01 s of 10 s)`.
    pub fn line(&self) -> String {
        format!(
            "{} [{:2}] {}: {} ({:.2} s of {} s)",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.claim,
            self.detail,
            self.seconds,
            self.budget_seconds
        )
    }
}

/// `(id, claim, runtime budget in seconds)` for every criterion.
pub const CRITERIA: [(usize, &str, f64); 15] = [
    (1, "dim S_P = d_1..d_k - (d_1+..+d_k) + k - 1", 1.0),
    (
        2,
        "the TILES span holds exactly six product rays, the UPB and chi",
        10.0,
    ),
    (
        3,
        "the complement of the TILES span is completely entangled",
        10.0,
    ),
    (
        4,
        "SU+0 and SU+4 each hold exactly six listed product rays",
        20.0,
    ),
    (5, "span(psi_1..psi_4) and SU+0 together fill 3 x 3", 1.0),
    (
        6,
        "the three-qubit UPB span holds only its four basis rays",
        10.0,
    ),
    (
        7,
        "SV+4 and SV+1 each hold exactly six listed product rays",
        20.0,
    ),
    (8, "S_P plus z_0 or z_inf holds only that ray", 15.0),
    (9, "on k qubits S_P plus z_1 holds only z_1", 15.0),
    (
        10,
        "on 2 x d, S_P plus z_lambda has d rays for odd d and d - 1 for even d",
        60.0,
    ),
    (
        11,
        "on 3 x 3, S_P plus z_lambda has three product rays",
        15.0,
    ),
    (12, "UPB complement states are PPT and entangled", 5.0),
    (
        13,
        "doubly perturbed spaces hold infinite product families",
        60.0,
    ),
    (
        14,
        "the sextic roots multiply to ((1 + beta alpha^4)/(1 + beta))^3",
        2.0,
    ),
    (
        15,
        "roundtrip, conical, partial transpose and determinism properties",
        30.0,
    ),
];

type Check = Result<(bool, String)>;

/// Runs one criterion; errors become a failing row.
pub fn run_criterion(id: usize, opts: &VerifyOptions) -> Option<CriterionRow> {
    let &(_, claim, budget) = CRITERIA.iter().find(|c| c.0 == id)?;
    let start = Instant::now();
    let outcome = match id {
        1 => c1_dimensions(),
        2 => c2_tiles(opts),
        3 => c3_su(opts),
        4 => c4_su_perturbations(opts),
        5 => c5_direct_sum(),
        6 => c6_three_qubits(opts),
        7 => c7_sv_perturbations(opts),
        8 => c8_endpoints(opts),
        9 => c9_qubit_rigidity(opts),
        10 => c10_two_by_d(opts),
        11 => c11_three_by_three(opts),
        12 => c12_ppt(opts),
        13 => c13_families(opts),
        14 => c14_root_product(),
        _ => c15_properties(opts),
    };
    let seconds = start.elapsed().as_secs_f64();
    let (mut passed, mut detail) = outcome.unwrap_or_else(|e| (false, format!("error: {e}")));
    if seconds > budget {
        passed = false;
        detail.push_str("; over the runtime budget");
    }
    Some(CriterionRow {
        id,
        claim: claim.to_string(),
        passed,
        detail,
        seconds,
        budget_seconds: budget,
    })
}

/// All fifteen rows in order.
pub fn run_all(opts: &VerifyOptions) -> Vec<CriterionRow> {
    CRITERIA
        .iter()
        .filter_map(|c| run_criterion(c.0, opts))
        .collect()
}

fn fixed() -> Tolerances {
    Tolerances::default()
}

fn search(opts: &VerifyOptions) -> SearchConfig {
    SearchConfig {
        seed: opts.seed,
        restarts: opts.restarts,
        tol: opts.tol,
        ..SearchConfig::default()
    }
}

fn shape(dims: &[usize]) -> Result<SystemShape> {
    SystemShape::new(dims.to_vec())
}

fn oracle(spec: &str, dims: Option<&[usize]>, opts: &VerifyOptions) -> Result<EnumerationResult> {
    let named = NamedSpace::parse(spec, dims)?;
    enumerate_products(&named_space(&named, &opts.tol)?, &search(opts))
}

fn contains_ray(set: &[ProductVector], p: &ProductVector, tol: &Tolerances) -> Result<bool> {
    let t = p.to_tensor();
    for q in set {
        if ray_equal(&q.to_tensor(), &t, tol)? {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Whether two ray lists agree as sets of rays.
fn same_rays(a: &[ProductVector], b: &[ProductVector], tol: &Tolerances) -> Result<bool> {
    if a.len() != b.len() {
        return Ok(false);
    }
    for p in a {
        if !contains_ray(b, p, tol)? {
            return Ok(false);
        }
    }
    for p in b {
        if !contains_ray(a, p, tol)? {
            return Ok(false);
        }
    }
    Ok(true)
}

fn max_of(xs: &[f64]) -> f64 {
    xs.iter().copied().fold(0.0, f64::max)
}

fn rays_from(list: &[&[&[f64]]]) -> Result<Vec<ProductVector>> {
    list.iter().map(|fs| ProductVector::from_real(fs)).collect()
}

/// Checks `spec` against an explicit list: tau = 6, set equality, residuals.
fn match_list(
    spec: &str,
    expected: &[ProductVector],
    opts: &VerifyOptions,
) -> Result<(bool, String)> {
    let r = oracle(spec, None, opts)?;
    let ok = r.product_index == ProductIndex::Finite(expected.len())
        && same_rays(&r.rays, expected, &fixed())?
        && max_of(&r.residuals) < 1e-8;
    Ok((ok, format!("{spec}: tau={}", r.product_index)))
}

fn c1_dimensions() -> Check {
    let mut ok = true;
    let mut parts = Vec::new();
    for (dims, want) in [
        (&[3, 3][..], 4),
        (&[2, 2, 2][..], 4),
        (&[2, 5][..], 4),
        (&[3, 3, 3][..], 20),
    ] {
        let s = shape(dims)?;
        let got = parthasarathy_space(&s)?.dim();
        let formula = s.total_dim() + s.parts() - 1 - dims.iter().sum::<usize>();
        ok &= got == want && formula == want;
        parts.push(format!("{dims:?}->{got}"));
    }
    Ok((ok, parts.join(", ")))
}

fn c2_tiles(opts: &VerifyOptions) -> Check {
    let r = oracle("U", None, opts)?;
    let mut expected = tiles_upb();
    expected.push(tiles_chi());
    let ok = r.product_index == ProductIndex::Finite(6)
        && same_rays(&r.rays, &expected, &fixed())?
        && max_of(&r.residuals) < 1e-8;
    Ok((
        ok,
        format!(
            "tau={}, max residual {:.1e}",
            r.product_index,
            max_of(&r.residuals)
        ),
    ))
}

fn c3_su(opts: &VerifyOptions) -> Check {
    let r = oracle("SU", None, opts)?;
    Ok((
        r.product_index == ProductIndex::Finite(0),
        format!("tau={} after {} restarts", r.product_index, r.restarts_used),
    ))
}

fn c4_su_perturbations(opts: &VerifyOptions) -> Check {
    let su0 = rays_from(&[
        &[&[1., 0., 0.], &[1., -1., 0.]],
        &[&[1., -1., 0.], &[0., 1., 0.]],
        &[&[1., 1., 0.], &[0., 1., -1.]],
        &[&[1., 1., -2.], &[0., 1., 1.]],
        &[&[2., -1., -1.], &[1., 0., 0.]],
        &[&[1., 1., 1.], &[2., -1., -1.]],
    ])?;
    let su4 = rays_from(&[
        &[&[1., 1., 1.], &[1., 1., 1.]],
        &[&[0., 1., 0.], &[0., 1., 0.]],
        &[&[1., 0., 0.], &[1., 1., 0.]],
        &[&[1., 1., 0.], &[0., 0., 1.]],
        &[&[0., 0., 1.], &[0., 1., 1.]],
        &[&[0., 1., 1.], &[1., 0., 0.]],
    ])?;
    let (a, da) = match_list("SU+0", &su0, opts)?;
    let (b, db) = match_list("SU+4", &su4, opts)?;
    Ok((a && b, format!("{da}, {db}, lists matched: {}", a && b)))
}

fn c5_direct_sum() -> Check {
    let tol = fixed();
    let su0 = named_space(&NamedSpace::parse("SU+0", None)?, &tol)?;
    let mut vectors: Vec<TensorVector> = tiles_upb()[1..].iter().map(|p| p.to_tensor()).collect();
    vectors.extend(su0.basis().iter().cloned());
    let r = rank(&vectors, &tol)?;
    Ok((r == 9, format!("rank {r} of {} vectors", vectors.len())))
}

fn random_coefficients(rng: &mut ChaCha8Rng, n: usize) -> Vec<C64> {
    loop {
        let c: Vec<C64> = (0..n)
            .map(|_| {
                if rng.random_bool(0.3) {
                    C64::new(0.0, 0.0)
                } else {
                    let re: f64 = StandardNormal.sample(rng);
                    let im: f64 = StandardNormal.sample(rng);
                    C64::new(re, im)
                }
            })
            .collect();
        if c.iter().filter(|z| z.norm() > 0.0).count() >= 2 {
            return c;
        }
    }
}

fn c6_three_qubits(opts: &VerifyOptions) -> Check {
    let tol = fixed();
    let r = oracle("V", None, opts)?;
    let phis = shifts3q_upb();
    let rays_ok = r.product_index == ProductIndex::Finite(4) && same_rays(&r.rays, &phis, &tol)?;
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let cuts = bipartitions(3);
    let mut product_hits = 0;
    for _ in 0..200 {
        let c = random_coefficients(&mut rng, phis.len());
        let mut v = TensorVector::zeros(phis[0].shape());
        for (ci, p) in c.iter().zip(&phis) {
            v = v.axpy(*ci, &p.to_tensor())?;
        }
        for cut in &cuts {
            let modes: Vec<usize> = cut.iter().map(|j| j - 1).collect();
            if is_product_across(&v, &modes, &tol)? {
                product_hits += 1;
            }
        }
    }
    Ok((
        rays_ok && product_hits == 0,
        format!(
            "tau={}, {product_hits} of 600 cut tests found a product",
            r.product_index
        ),
    ))
}

fn c7_sv_perturbations(opts: &VerifyOptions) -> Check {
    let sv4 = rays_from(&[
        &[&[1., 0.], &[1., 0.], &[1., 0.]],
        &[&[0., 1.], &[0., 1.], &[0., 1.]],
        &[&[1., -1.], &[1., -1.], &[1., -1.]],
        &[&[0., 1.], &[1., -1.], &[1., 0.]],
        &[&[1., 0.], &[0., 1.], &[1., -1.]],
        &[&[1., -1.], &[1., 0.], &[0., 1.]],
    ])?;
    let sv1 = rays_from(&[
        &[&[1., 0.], &[0., 1.], &[1., 1.]],
        &[&[1., -1.], &[1., 1.], &[0., 1.]],
        &[&[1., -1.], &[1., -1.], &[1., 1.]],
        &[&[1., 0.], &[1., 1.], &[1., 0.]],
        &[&[1., 1.], &[0., 1.], &[0., 1.]],
        &[&[1., 1.], &[1., -1.], &[1., 0.]],
    ])?;
    let (a, da) = match_list("SV+4", &sv4, opts)?;
    let (b, db) = match_list("SV+1", &sv1, opts)?;
    Ok((a && b, format!("{da}, {db}, lists matched: {}", a && b)))
}

fn c8_endpoints(opts: &VerifyOptions) -> Check {
    let mut ok = true;
    let mut parts = Vec::new();
    for dims in [&[3, 3][..], &[2, 2, 2][..], &[2, 4][..]] {
        for (spec, end) in [
            ("SP+z(0)", Endpoint::Zero),
            ("SP+z(inf)", Endpoint::Infinity),
        ] {
            let r = oracle(spec, Some(dims), opts)?;
            let closed = solve_sp_endpoints(&shape(dims)?, end)?;
            ok &= r.product_index == ProductIndex::Finite(1)
                && closed.product_index == ProductIndex::Finite(1);
            parts.push(format!("{spec} {dims:?}: {}", r.product_index));
        }
    }
    Ok((ok, parts.join(", ")))
}

fn c9_qubit_rigidity(opts: &VerifyOptions) -> Check {
    let mut ok = true;
    let mut parts = Vec::new();
    for k in 2..=4 {
        let dims = vec![2; k];
        let r = oracle("SP+z(1)", Some(&dims), opts)?;
        let closed = solve_qubits_rigidity(k)?;
        let agree =
            r.product_index == closed.product_index && same_rays(&r.rays, &closed.rays, &fixed())?;
        ok &= r.product_index == ProductIndex::Finite(1) && agree;
        parts.push(format!("k={k}: tau={} agree={agree}", r.product_index));
    }
    Ok((ok, parts.join(", ")))
}

fn c10_two_by_d(opts: &VerifyOptions) -> Check {
    let mut ok = true;
    let mut taus = Vec::new();
    for (d, want) in [(3, 3), (4, 3), (5, 5), (6, 5), (7, 7)] {
        let closed = solve_2xd(d, ONE)?;
        ok &=
            closed.product_index == ProductIndex::Finite(want) && max_of(&closed.residuals) < 1e-8;
        if d <= 5 {
            let r = oracle("SP+z(1)", Some(&[2, d]), opts)?;
            ok &= r.product_index == closed.product_index
                && same_rays(&r.rays, &closed.rays, &fixed())?;
        }
        taus.push(format!("d={d}:{}", closed.product_index));
    }
    Ok((
        ok,
        format!("{}; oracle sets equal for d <= 5", taus.join(" ")),
    ))
}

fn c11_three_by_three(opts: &VerifyOptions) -> Check {
    let tol = fixed();
    let w = C64::from_polar(1.0, 2.0 * PI / 3.0);
    let omega_rays = vec![
        ProductVector::new(vec![vec![ONE, -2.0 * w * w, w], vec![ONE, -2.0 * w, w * w]])?,
        ProductVector::new(vec![vec![ONE, -2.0 * w, w * w], vec![ONE, -2.0 * w * w, w]])?,
    ];
    let at_one = solve_3x3(ONE)?;
    let mut ok = omega_rays
        .iter()
        .map(|p| contains_ray(&at_one.rays, p, &tol))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .all(|x| x);
    let mut parts = Vec::new();
    for (label, lambda) in [
        ("1", ONE),
        ("2", C64::new(2.0, 0.0)),
        ("i", C64::new(0.0, 1.0)),
    ] {
        let closed = solve_3x3(lambda)?;
        let rescaled: Vec<ProductVector> =
            at_one.rays.iter().map(|p| rescale_ray(p, lambda)).collect();
        let r = oracle(&format!("SP+z({label})"), Some(&[3, 3]), opts)?;
        ok &= closed.product_index == ProductIndex::Finite(3)
            && r.product_index == ProductIndex::Finite(3)
            && same_rays(&closed.rays, &rescaled, &tol)?
            && same_rays(&closed.rays, &r.rays, &tol)?;
        parts.push(format!("lambda={label}: tau={}", r.product_index));
    }
    Ok((ok, parts.join(", ")))
}

fn c12_ppt(opts: &VerifyOptions) -> Check {
    let tol = fixed();
    let mut ok = true;
    let mut parts = Vec::new();
    for (name, upb, range_dim) in [("tiles", tiles_upb(), 4), ("shifts3q", shifts3q_upb(), 4)] {
        let rho = upb_complement_state(&upb, &tol)?;
        let ppt = is_ppt(&rho, &tol)?;
        let min_eig = ppt
            .cuts
            .iter()
            .map(|c| c.min_eig)
            .fold(f64::INFINITY, f64::min);
        let cert = certify_entangled_by_range(&rho, &search(opts))?;
        let cuts_ok = ppt.cuts.len() == bipartitions(upb[0].shape().parts()).len();
        ok &= cuts_ok
            && min_eig >= -1e-10
            && cert.range_dim == range_dim
            && cert.verdict == RangeVerdict::Entangled;
        parts.push(format!(
            "{name}: {} cuts, min PT eigenvalue {:.1e}, range {} {:?}",
            ppt.cuts.len(),
            min_eig,
            cert.range_dim,
            cert.verdict
        ));
    }
    Ok((ok, parts.join("; ")))
}

fn suite_families() -> Vec<Family> {
    let one = ONE;
    let two = C64::new(2.0, 0.0);
    let mut out = vec![Family::Su01, Family::Su04, Family::Sv12];
    out.extend((2..=5).map(|d| Family::Sp0Inf { d }));
    out.push(Family::Sp1Inf3x3 {
        lambda: one,
        plus: true,
    });
    out.push(Family::Sp1Inf3x3 {
        lambda: one,
        plus: false,
    });
    out.extend((0..6).map(|root| Family::SpLm3x3 {
        lambda: one,
        mu: two,
        root,
    }));
    out.extend((0..2).map(|root| Family::SpLm3x3 {
        lambda: one,
        mu: -one,
        root,
    }));
    out.push(Family::SpLmQubits3 {
        lambda: one,
        mu: two,
    });
    out
}

fn c13_families(opts: &VerifyOptions) -> Check {
    let mut failures = Vec::new();
    let families = suite_families();
    for fam in &families {
        let s = named_space(&fam.space()?, &opts.tol)?;
        let cert = match certify_infinite(&s, *fam, 50) {
            Ok(c) => c,
            Err(e) => {
                failures.push(format!("{fam}: {e}"));
                continue;
            }
        };
        let cert_ok = cert.family_samples.len() == 50 && max_of(&cert.sample_residuals) < 1e-8;
        let flagged = enumerate_products(&s, &search(opts))?.likely_infinite();
        if !(cert_ok && flagged) {
            failures.push(format!(
                "{fam}: certificate {cert_ok}, oracle flag {flagged}"
            ));
        }
    }
    let ok = failures.is_empty();
    let detail = if ok {
        format!(
            "{} families certified with 50 samples and flagged by the oracle",
            families.len()
        )
    } else {
        failures.join("; ")
    };
    Ok((ok, detail))
}

fn c14_root_product() -> Check {
    let alpha = C64::new(2.0, 0.0);
    let betas = [
        C64::new(0.3, 0.0),
        C64::new(0.7, 0.0),
        C64::new(1.5, 0.0),
        C64::new(2.5, 0.0),
        C64::new(3.0, 0.0),
        C64::new(-0.4, 0.0),
        C64::new(-2.5, 0.0),
        C64::new(0.0, 1.0),
        C64::new(1.0, 1.0),
        C64::new(0.5, -0.5),
    ];
    let mut worst: f64 = 0.0;
    for beta in betas {
        let data = sextic_coefficients(alpha, beta)?;
        let product: C64 = data.roots.iter().product();
        let err = (product - data.expected_root_product).norm()
            / data.expected_root_product.norm().max(1.0);
        worst = worst.max(err);
    }
    Ok((
        worst < 1e-8,
        format!("10 betas, worst relative error {worst:.1e}"),
    ))
}

fn random_vector(rng: &mut ChaCha8Rng, shape: &SystemShape) -> Result<TensorVector> {
    let amps = (0..shape.total_dim())
        .map(|_| {
            let re: f64 = StandardNormal.sample(rng);
            let im: f64 = StandardNormal.sample(rng);
            C64::new(re, im)
        })
        .collect();
    TensorVector::new(shape.clone(), amps)
}

/// Every product ray the suite produces, from the closed forms, the families
/// and the oracle runs on the fixed spaces.
fn suite_rays(opts: &VerifyOptions) -> Result<Vec<ProductVector>> {
    let mut rays = Vec::new();
    for spec in ["U", "SU+0", "SU+4", "V", "SV+1", "SV+4"] {
        rays.extend(oracle(spec, None, opts)?.rays);
    }
    for d in 3..=7 {
        rays.extend(solve_2xd(d, ONE)?.rays);
    }
    for lambda in [ONE, C64::new(2.0, 0.0), C64::new(0.0, 1.0)] {
        rays.extend(solve_3x3(lambda)?.rays);
    }
    for k in 2..=4 {
        rays.extend(solve_qubits_rigidity(k)?.rays);
    }
    for dims in [&[3, 3][..], &[2, 2, 2][..], &[2, 4][..]] {
        for end in [Endpoint::Zero, Endpoint::Infinity] {
            rays.extend(solve_sp_endpoints(&shape(dims)?, end)?.rays);
        }
    }
    for fam in suite_families() {
        let s = named_space(&fam.space()?, &opts.tol)?;
        rays.extend(certify_infinite(&s, fam, 50)?.family_samples);
    }
    Ok(rays)
}

fn c15_properties(opts: &VerifyOptions) -> Check {
    let tol = fixed();
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let shapes: Vec<SystemShape> = [
        &[2, 2][..],
        &[2, 3],
        &[3, 3],
        &[2, 2, 2],
        &[2, 5],
        &[3, 2, 2],
    ]
    .iter()
    .map(|d| shape(d))
    .collect::<Result<_>>()?;

    let mut roundtrip = true;
    for _ in 0..1000 {
        let s = &shapes[rng.random_range(0..shapes.len())];
        let v = random_vector(&mut rng, s)?;
        roundtrip &= from_poly(&to_poly(&v)) == v;
    }

    let rays = suite_rays(opts)?;
    let mut conical = true;
    for p in &rays {
        conical &= is_conical(&to_poly(&p.to_tensor()), &tol)?;
    }

    let mut pt_ok = true;
    for i in 0..100 {
        let s = &shapes[i % shapes.len()];
        let rho = random_state(s, 1 + i % 4, opts.seed.wrapping_add(i as u64));
        let cuts = bipartitions(s.parts());
        let cut = &cuts[i % cuts.len()];
        let once = partial_transpose_matrix(s, rho.matrix(), cut)?;
        let twice = partial_transpose_matrix(s, &once, cut)?;
        pt_ok &= (&twice - rho.matrix()).norm() < 1e-12
            && (once.trace() - rho.matrix().trace()).norm() < 1e-12;
    }

    let mut deterministic = true;
    for spec in ["U", "SV+1", "SU+0+1"] {
        deterministic &= oracle(spec, None, opts)? == oracle(spec, None, opts)?;
    }

    Ok((
        roundtrip && conical && pt_ok && deterministic,
        format!(
            "roundtrip {roundtrip}, conical on {} rays {conical}, PT {pt_ok}, determinism {deterministic}",
            rays.len()
        ),
    ))
}
