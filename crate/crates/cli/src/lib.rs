//! Commands behind the `ces-toolkit` binary and the JSON report they emit.

use std::fmt::Write as _;
use std::time::Instant;

use ces_core::constructions::{
    named_space, shifts3q_upb, tiles_upb, BaseSpace, NamedSpace, VdMParameter,
};
use ces_core::polyrep::to_poly;
use ces_core::product::{
    certify_infinite, enumerate_products, solve_2xd, solve_3x3, solve_qubits_rigidity,
    solve_sp_endpoints, Endpoint, EnumerationResult, Family, Method, ProductIndex, SearchConfig,
};
use ces_core::states::{
    certify_entangled_by_range, is_ppt, ppt_cut, upb_complement_state, PptReport, RangeCertificate,
    RangeVerdict,
};
use ces_core::verify::{run_all, CriterionRow, VerifyOptions};
use ces_core::{format_complex, Error, Tolerances, C64};
use serde::{Deserialize, Serialize};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Exit status for a run whose checks all passed.
pub const EXIT_OK: i32 = 0;
/// Exit status when a check failed.
pub const EXIT_FAILED: i32 = 1;
/// Exit status for malformed input.
pub const EXIT_USAGE: i32 = 2;

/// Settings shared by all commands.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunSettings {
    pub seed: u64,
    pub restarts: usize,
    pub tol: Tolerances,
    pub force_oracle: bool,
}

impl RunSettings {
    fn search(&self) -> SearchConfig {
        SearchConfig {
            seed: self.seed,
            restarts: self.restarts,
            tol: self.tol,
            ..SearchConfig::default()
        }
    }
}

/// The parsed space a command acted on.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResolvedSpace {
    pub spec: String,
    pub dims: Vec<usize>,
    pub dimension: usize,
}

/// Command-specific payload.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ReportBody {
    Construct {
        /// Orthonormal basis as polynomials.
        polynomials: Vec<String>,
        /// Orthonormal basis amplitudes as `[re, im]` pairs, when requested.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        basis: Option<Vec<Vec<[f64; 2]>>>,
    },
    Enumerate {
        result: EnumerationResult,
        /// The count the matching theorem predicts, when one applies.
        expected_tau: Option<ProductIndex>,
        /// Whether `result` agrees with `expected_tau`.
        pass: Option<bool>,
    },
    Ppt {
        upb: String,
        ppt: PptReport,
        certificate: RangeCertificate,
        entangled: bool,
    },
    VerifyAll {
        rows: Vec<CriterionRow>,
        all_passed: bool,
    },
}

/// Machine-readable record of one CLI run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub command: String,
    pub space: Option<ResolvedSpace>,
    pub body: ReportBody,
    pub wall_seconds: f64,
    pub version: String,
    pub seed: u64,
}

impl RunReport {
    /// Exit status implied by the report.
    pub fn exit_code(&self) -> i32 {
        let ok = match &self.body {
            ReportBody::Construct { .. } => true,
            ReportBody::Enumerate { pass, .. } => pass.unwrap_or(true),
            ReportBody::Ppt { ppt, entangled, .. } => ppt.ppt_all && *entangled,
            ReportBody::VerifyAll { all_passed, .. } => *all_passed,
        };
        if ok {
            EXIT_OK
        } else {
            EXIT_FAILED
        }
    }
}

/// A failed command: usage errors map to exit status 2.
#[derive(Debug)]
pub struct CommandError {
    pub message: String,
    pub code: i32,
}

impl From<Error> for CommandError {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Parse(_) | Error::Argument(_) | Error::Range(_) | Error::Excluded(_) => {
                EXIT_USAGE
            }
            _ => EXIT_FAILED,
        };
        Self {
            message: e.to_string(),
            code,
        }
    }
}

fn usage(message: String) -> CommandError {
    CommandError {
        message,
        code: EXIT_USAGE,
    }
}

fn resolve(spec: &str, dims: Option<&[usize]>) -> Result<NamedSpace, CommandError> {
    NamedSpace::parse(spec, dims).map_err(|e| {
        usage(format!(
            "{e}\nspace grammar: {}",
            ces_core::constructions::GRAMMAR
        ))
    })
}

fn report(
    command: &str,
    space: Option<ResolvedSpace>,
    body: ReportBody,
    start: Instant,
    seed: u64,
) -> RunReport {
    RunReport {
        command: command.to_string(),
        space,
        body,
        wall_seconds: start.elapsed().as_secs_f64(),
        version: VERSION.to_string(),
        seed,
    }
}

/// Builds a named space and reports its dimension and basis.
pub fn cmd_construct(
    command: &str,
    spec: &str,
    dims: Option<&[usize]>,
    with_basis: bool,
    settings: &RunSettings,
) -> Result<RunReport, CommandError> {
    let start = Instant::now();
    let named = resolve(spec, dims)?;
    let s = named_space(&named, &settings.tol)?;
    let polynomials = s.basis().iter().map(|v| to_poly(v).to_string()).collect();
    let basis = with_basis.then(|| {
        s.basis()
            .iter()
            .map(|v| v.amplitudes().iter().map(|c| [c.re, c.im]).collect())
            .collect()
    });
    let space = ResolvedSpace {
        spec: named.to_string(),
        dims: named.shape.dims().to_vec(),
        dimension: s.dim(),
    };
    Ok(report(
        command,
        Some(space),
        ReportBody::Construct { polynomials, basis },
        start,
        settings.seed,
    ))
}

fn finite_params(named: &NamedSpace) -> Option<Vec<VdMParameter>> {
    if named.base != BaseSpace::SP || named.members.is_empty() {
        return None;
    }
    Some(named.vdm_parameters())
}

fn is_zero(p: VdMParameter) -> bool {
    matches!(p, VdMParameter::Finite(z) if z.norm() == 0.0)
}

fn finite_nonzero(p: VdMParameter) -> Option<C64> {
    match p {
        VdMParameter::Finite(z) if z.norm() > 0.0 => Some(z),
        _ => None,
    }
}

/// A closed-form solver for a singly perturbed `S_P` whose hypotheses hold.
fn closed_form(named: &NamedSpace) -> Option<ces_core::Result<EnumerationResult>> {
    let params = finite_params(named)?;
    let [p] = params.as_slice() else {
        return None;
    };
    let shape = &named.shape;
    let dims = shape.dims();
    if is_zero(*p) {
        return Some(solve_sp_endpoints(shape, Endpoint::Zero));
    }
    let Some(lambda) = finite_nonzero(*p) else {
        return Some(solve_sp_endpoints(shape, Endpoint::Infinity));
    };
    if dims.iter().all(|&d| d == 2) && lambda == C64::new(1.0, 0.0) {
        return Some(solve_qubits_rigidity(dims.len()));
    }
    match dims {
        [2, d] if *d >= 3 => Some(solve_2xd(*d, lambda)),
        [3, 3] => Some(solve_3x3(lambda)),
        _ => None,
    }
}

/// The infinite family whose hypotheses the doubly perturbed space meets.
fn matching_family(named: &NamedSpace) -> Option<Family> {
    let mut upb = named.upb_indices();
    upb.sort_unstable();
    match (named.base, upb.as_slice(), named.members.len()) {
        (BaseSpace::SU, [0, 1], 2) => return Some(Family::Su01),
        (BaseSpace::SU, [0, 4], 2) => return Some(Family::Su04),
        (BaseSpace::SV, [1, 2], 2) => return Some(Family::Sv12),
        _ => {}
    }
    let params = finite_params(named)?;
    let [a, b] = params.as_slice() else {
        return None;
    };
    let dims = named.shape.dims();
    let square = dims.len() == 2 && dims[0] == dims[1];
    let endpoints = |x: VdMParameter, y: VdMParameter| is_zero(x) && y == VdMParameter::Infinity;
    if square && (endpoints(*a, *b) || endpoints(*b, *a)) {
        return Some(Family::Sp0Inf { d: dims[0] });
    }
    match (finite_nonzero(*a), finite_nonzero(*b), dims) {
        (Some(lambda), None, [3, 3]) if *b == VdMParameter::Infinity => {
            Some(Family::Sp1Inf3x3 { lambda, plus: true })
        }
        (None, Some(lambda), [3, 3]) if *a == VdMParameter::Infinity => {
            Some(Family::Sp1Inf3x3 { lambda, plus: true })
        }
        (Some(lambda), Some(mu), [3, 3]) if lambda != mu => Some(Family::SpLm3x3 {
            lambda,
            mu,
            root: 0,
        }),
        (Some(lambda), Some(mu), [2, 2, 2]) if lambda != mu => {
            Some(Family::SpLmQubits3 { lambda, mu })
        }
        _ => None,
    }
}

/// The product index a theorem predicts for the named space, if any.
pub fn expected_tau(named: &NamedSpace) -> Option<ProductIndex> {
    use ProductIndex::{Finite, Infinite};
    if matching_family(named).is_some() {
        return Some(Infinite);
    }
    let upb = named.upb_indices();
    let only_upb = named.members.len() == upb.len();
    match (named.base, upb.as_slice()) {
        (BaseSpace::U, []) if only_upb => return Some(Finite(6)),
        (BaseSpace::SU, []) if only_upb => return Some(Finite(0)),
        (BaseSpace::SU, [0]) | (BaseSpace::SU, [4]) if only_upb => return Some(Finite(6)),
        (BaseSpace::V, []) if only_upb => return Some(Finite(4)),
        (BaseSpace::SV, []) if only_upb => return Some(Finite(0)),
        (BaseSpace::SV, [1]) | (BaseSpace::SV, [4]) if only_upb => return Some(Finite(6)),
        (BaseSpace::SP, []) if named.members.is_empty() => return Some(Finite(0)),
        _ => {}
    }
    let params = finite_params(named)?;
    let [p] = params.as_slice() else {
        return None;
    };
    let dims = named.shape.dims();
    let Some(lambda) = finite_nonzero(*p) else {
        return Some(Finite(1));
    };
    if dims.iter().all(|&d| d == 2) && lambda == C64::new(1.0, 0.0) {
        return Some(Finite(1));
    }
    match dims {
        [2, d] if *d >= 3 => Some(Finite(if d % 2 == 1 { *d } else { d - 1 })),
        [3, 3] => Some(Finite(3)),
        _ => None,
    }
}

/// Product rays of a named space: a closed form or family certificate when a
/// theorem applies, the search oracle otherwise or with `force_oracle`.
pub fn cmd_enumerate(
    command: &str,
    spec: &str,
    dims: Option<&[usize]>,
    settings: &RunSettings,
) -> Result<RunReport, CommandError> {
    let start = Instant::now();
    let named = resolve(spec, dims)?;
    let s = named_space(&named, &settings.tol)?;
    let mut result = None;
    if !settings.force_oracle {
        if let Some(r) = closed_form(&named) {
            result = Some(r?);
        } else if let Some(fam) = matching_family(&named) {
            // excluded parameters fall through to the oracle
            result = certify_infinite(&s, fam, 50).ok();
        }
    }
    let result = match result {
        Some(r) => r,
        None => {
            let mut r = enumerate_products(&s, &settings.search())?;
            r.space = named.to_string();
            r
        }
    };
    let expected = expected_tau(&named);
    let pass = expected.map(|e| e == result.product_index);
    let space = ResolvedSpace {
        spec: named.to_string(),
        dims: named.shape.dims().to_vec(),
        dimension: s.dim(),
    };
    Ok(report(
        command,
        Some(space),
        ReportBody::Enumerate {
            result,
            expected_tau: expected,
            pass,
        },
        start,
        settings.seed,
    ))
}

/// PPT and range-criterion report for the state built from a UPB.
pub fn cmd_ppt(
    command: &str,
    upb_name: &str,
    cut: Option<&[usize]>,
    settings: &RunSettings,
) -> Result<RunReport, CommandError> {
    let start = Instant::now();
    let upb = match upb_name {
        "tiles" => tiles_upb(),
        "shifts3q" => shifts3q_upb(),
        other => {
            return Err(usage(format!(
                "unknown UPB {other:?}; expected \"tiles\" or \"shifts3q\""
            )))
        }
    };
    let rho = upb_complement_state(&upb, &settings.tol)?;
    let ppt = match cut {
        Some(parts) => {
            let c = ppt_cut(&rho, parts, &settings.tol)?;
            PptReport {
                ppt_all: c.ppt,
                cuts: vec![c],
            }
        }
        None => is_ppt(&rho, &settings.tol)?,
    };
    let certificate = certify_entangled_by_range(&rho, &settings.search())?;
    let entangled = certificate.verdict == RangeVerdict::Entangled;
    Ok(report(
        command,
        None,
        ReportBody::Ppt {
            upb: upb_name.to_string(),
            ppt,
            certificate,
            entangled,
        },
        start,
        settings.seed,
    ))
}

/// Runs the acceptance suite.
pub fn cmd_verify_all(command: &str, settings: &RunSettings) -> RunReport {
    let start = Instant::now();
    let rows = run_all(&VerifyOptions {
        seed: settings.seed,
        restarts: settings.restarts,
        tol: settings.tol,
    });
    let all_passed = rows.iter().all(|r| r.passed);
    report(
        command,
        None,
        ReportBody::VerifyAll { rows, all_passed },
        start,
        settings.seed,
    )
}

fn method_name(r: &EnumerationResult) -> &'static str {
    match r.diagnostics.method {
        Method::Search => "search oracle",
        Method::ClosedForm => "closed form",
        Method::Family => "family certificate",
    }
}

/// Human-readable rendering of a report.
pub fn render_text(r: &RunReport) -> String {
    let mut out = String::new();
    if let Some(s) = &r.space {
        let dims: Vec<String> = s.dims.iter().map(|d| d.to_string()).collect();
        let _ = writeln!(
            out,
            "space: {} on {} (dimension {})",
            s.spec,
            dims.join(" x "),
            s.dimension
        );
    }
    match &r.body {
        ReportBody::Construct { polynomials, basis } => {
            let _ = writeln!(out, "orthonormal basis as polynomials:");
            for (i, p) in polynomials.iter().enumerate() {
                let _ = writeln!(out, "  {:>3}. {p}", i + 1);
            }
            if let Some(basis) = basis {
                let _ = writeln!(out, "orthonormal basis amplitudes:");
                for (i, v) in basis.iter().enumerate() {
                    let amps: Vec<String> = v
                        .iter()
                        .map(|[re, im]| format_complex(C64::new(*re, *im)))
                        .collect();
                    let _ = writeln!(out, "  {:>3}. [{}]", i + 1, amps.join(", "));
                }
            }
        }
        ReportBody::Enumerate {
            result,
            expected_tau,
            pass,
        } => {
            let _ = writeln!(out, "method: {}", method_name(result));
            match (&result.product_index, &result.diagnostics.certified_family) {
                (ProductIndex::Infinite, Some(f)) => {
                    let _ = writeln!(out, "tau: INFINITE (certified by {f})");
                }
                (ProductIndex::Infinite, None) => {
                    let _ = writeln!(out, "tau: INFINITE (likely; search did not saturate)");
                }
                (t, _) => {
                    let _ = writeln!(out, "tau: {t}");
                }
            }
            if let (Some(e), Some(p)) = (expected_tau, pass) {
                let verdict = if *p { "PASS" } else { "FAIL" };
                let _ = writeln!(out, "expected tau: {e} {verdict}");
            }
            if !result.rays.is_empty() {
                let _ = writeln!(out, "rays (neat form):");
                let shown = match result.product_index {
                    ProductIndex::Infinite => 5,
                    ProductIndex::Finite(_) => usize::MAX,
                };
                let pairs = result.rays.iter().zip(&result.residuals);
                for (i, (ray, res)) in pairs.enumerate().take(shown) {
                    let _ = writeln!(out, "  {:>3}. {ray}   residual {res:.1e}", i + 1);
                }
                if result.rays.len() > shown {
                    let _ = writeln!(out, "       ... {} more", result.rays.len() - shown);
                }
            }
            if !result.family_samples.is_empty() {
                let _ = writeln!(
                    out,
                    "family samples: {} pairwise distinct, max residual {:.1e}; first three:",
                    result.family_samples.len(),
                    result.sample_residuals.iter().copied().fold(0.0, f64::max)
                );
                for ray in result.family_samples.iter().take(3) {
                    let _ = writeln!(out, "       {ray}");
                }
            }
            if result.diagnostics.method == Method::Search {
                let _ = writeln!(
                    out,
                    "search: {} restarts from seed {}, {} converged, last new ray at restart {}",
                    result.restarts_used,
                    result.seed,
                    result.diagnostics.converged_restarts,
                    result
                        .diagnostics
                        .last_new_ray_restart
                        .map_or("-".to_string(), |i| i.to_string())
                );
            }
        }
        ReportBody::Ppt {
            upb,
            ppt,
            certificate,
            entangled,
        } => {
            let _ = writeln!(
                out,
                "state: normalized projector onto the complement of the {upb} UPB span"
            );
            for c in &ppt.cuts {
                let parts: Vec<String> = c.parts.iter().map(|p| p.to_string()).collect();
                let _ = writeln!(
                    out,
                    "  cut {{{}}}: min PT eigenvalue {:.3e}  PPT {}",
                    parts.join(","),
                    c.min_eig,
                    c.ppt
                );
            }
            let _ = writeln!(out, "PPT: {}", ppt.ppt_all);
            let _ = writeln!(
                out,
                "range: dimension {}, product rays {}",
                certificate.range_dim, certificate.enumeration.product_index
            );
            let _ = writeln!(out, "entangled (range criterion): {entangled}");
        }
        ReportBody::VerifyAll { rows, all_passed } => {
            for row in rows {
                let _ = writeln!(out, "{}", row.line());
            }
            let passed = rows.iter().filter(|r| r.passed).count();
            let _ = writeln!(
                out,
                "{passed} of {} criteria passed{}",
                rows.len(),
                if *all_passed { "" } else { " (FAIL)" }
            );
        }
    }
    let _ = writeln!(
        out,
        "wall time {:.2} s, seed {}, version {}",
        r.wall_seconds, r.seed, r.version
    );
    out
}
