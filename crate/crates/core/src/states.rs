//! Density operators, partial transposition and entanglement certificates.

use nalgebra::DMatrix;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::product::{
    enumerate_products, EnumerationResult, ProductIndex, ProductVector, SearchConfig,
};
use crate::subspace::Subspace;
use crate::tensor::{inner, SystemShape, TensorVector, C64, ZERO};
use crate::tolerances::Tolerances;

/// A unit-trace positive semidefinite operator on a multipartite space.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityOperator {
    shape: SystemShape,
    matrix: DMatrix<C64>,
}

impl DensityOperator {
    /// Validates hermiticity and unit trace (within `tol_eq`) and positivity
    /// (smallest eigenvalue at least `-tol_eig`).
    pub fn new(shape: SystemShape, matrix: DMatrix<C64>, tol: &Tolerances) -> Result<Self> {
        let d = shape.total_dim();
        if matrix.shape() != (d, d) {
            return Err(Error::Shape(format!(
                "expected a {d}x{d} matrix, got {:?}",
                matrix.shape()
            )));
        }
        let herm = (&matrix - matrix.adjoint()).norm();
        if herm > tol.tol_eq {
            return Err(Error::Argument(format!(
                "matrix is not Hermitian (defect {herm:e})"
            )));
        }
        let tr = matrix.trace();
        if (tr - 1.0).norm() > tol.tol_eq {
            return Err(Error::Argument(format!("trace is {tr}, not 1")));
        }
        let min = min_eigenvalue(&matrix);
        if min < -tol.tol_eig {
            return Err(Error::Argument(format!("negative eigenvalue {min:e}")));
        }
        Ok(Self { shape, matrix })
    }

    /// `|v><v| / <v,v>`.
    pub fn pure(v: &TensorVector) -> Result<Self> {
        let u = v.normalize()?;
        let col = DMatrix::from_column_slice(u.amplitudes().len(), 1, u.amplitudes());
        Ok(Self {
            shape: v.shape().clone(),
            matrix: &col * col.adjoint(),
        })
    }

    /// `I / D`.
    pub fn maximally_mixed(shape: &SystemShape) -> Self {
        let d = shape.total_dim();
        Self {
            shape: shape.clone(),
            matrix: DMatrix::identity(d, d) * C64::new(1.0 / d as f64, 0.0),
        }
    }

    pub fn shape(&self) -> &SystemShape {
        &self.shape
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.matrix
    }

    /// Eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> Vec<f64> {
        sorted_eigenvalues(&self.matrix)
    }

    /// Orthonormal basis of the eigenvectors with eigenvalue above `tol_eig`.
    pub fn range(&self, tol: &Tolerances) -> Result<Subspace> {
        let eig = self.matrix.clone().symmetric_eigen();
        let basis: Vec<TensorVector> = eig
            .eigenvalues
            .iter()
            .enumerate()
            .filter(|(_, &l)| l > tol.tol_eig)
            .map(|(i, _)| {
                TensorVector::new(
                    self.shape.clone(),
                    eig.eigenvectors.column(i).iter().copied().collect(),
                )
            })
            .collect::<Result<_>>()?;
        Subspace::from_orthonormal(&self.shape, basis, tol)
    }
}

fn sorted_eigenvalues(m: &DMatrix<C64>) -> Vec<f64> {
    let mut v: Vec<f64> = m
        .clone()
        .symmetric_eigen()
        .eigenvalues
        .iter()
        .copied()
        .collect();
    v.sort_by(f64::total_cmp);
    v
}

/// Smallest eigenvalue of a Hermitian matrix.
pub fn min_eigenvalue(m: &DMatrix<C64>) -> f64 {
    sorted_eigenvalues(m).first().copied().unwrap_or(0.0)
}

/// `(I - sum |psi_s><psi_s|) / (D - d)` for orthonormal `psi_1 .. psi_d`.
pub fn upb_complement_state(upb: &[ProductVector], tol: &Tolerances) -> Result<DensityOperator> {
    let first = upb
        .first()
        .ok_or_else(|| Error::Argument("empty product basis".into()))?;
    let shape = first.shape().clone();
    let total = shape.total_dim();
    let vs: Vec<TensorVector> = upb.iter().map(ProductVector::to_tensor).collect();
    if vs.iter().any(|v| v.shape() != &shape) {
        return Err(Error::Shape("members have different shapes".into()));
    }
    if vs.len() >= total {
        return Err(Error::Argument(format!(
            "{} members leave no complement in dimension {total}",
            vs.len()
        )));
    }
    for (i, a) in vs.iter().enumerate() {
        for (j, b) in vs.iter().enumerate().skip(i) {
            let g = inner(a, b)?;
            let e = if i == j { 1.0 } else { 0.0 };
            if (g - e).norm() > tol.tol_eq {
                return Err(Error::Argument(format!(
                    "members {i} and {j} are not orthonormal (inner product {g})"
                )));
            }
        }
    }
    let mut m = DMatrix::<C64>::identity(total, total);
    for v in &vs {
        let col = DMatrix::from_column_slice(total, 1, v.amplitudes());
        m -= &col * col.adjoint();
    }
    m *= C64::new(1.0 / (total - vs.len()) as f64, 0.0);
    DensityOperator::new(shape, m, tol)
}

fn check_parts(shape: &SystemShape, parts: &[usize]) -> Result<Vec<bool>> {
    let k = shape.parts();
    let mut sel = vec![false; k];
    for &p in parts {
        if p == 0 || p > k || sel[p - 1] {
            return Err(Error::Argument(format!(
                "invalid part list {parts:?} for {k} parts (parts are numbered from 1)"
            )));
        }
        sel[p - 1] = true;
    }
    if parts.is_empty() || parts.len() == k {
        return Err(Error::Argument(
            "partial transpose needs a nonempty proper subset of the parts".into(),
        ));
    }
    Ok(sel)
}

/// Transposes the indices of the selected parts (numbered from 1) of a
/// `D x D` matrix on `shape`.
pub fn partial_transpose_matrix(
    shape: &SystemShape,
    m: &DMatrix<C64>,
    parts: &[usize],
) -> Result<DMatrix<C64>> {
    let sel = check_parts(shape, parts)?;
    let d = shape.total_dim();
    if m.shape() != (d, d) {
        return Err(Error::Shape(format!("expected a {d}x{d} matrix")));
    }
    let tuples: Vec<Vec<usize>> = (0..d).map(|f| shape.tuple_of(f).entries).collect();
    let strides = shape.strides();
    let mut out = DMatrix::from_element(d, d, ZERO);
    for row in 0..d {
        for col in 0..d {
            let (mut r2, mut c2) = (row, col);
            for (j, &on) in sel.iter().enumerate() {
                if on {
                    let (a, b) = (tuples[row][j], tuples[col][j]);
                    r2 = r2 - a * strides[j] + b * strides[j];
                    c2 = c2 - b * strides[j] + a * strides[j];
                }
            }
            out[(r2, c2)] = m[(row, col)];
        }
    }
    Ok(out)
}

/// Partial transpose of `rho` on the selected parts (numbered from 1).
pub fn partial_transpose(rho: &DensityOperator, parts: &[usize]) -> Result<DMatrix<C64>> {
    partial_transpose_matrix(&rho.shape, &rho.matrix, parts)
}

/// The `2^(k-1) - 1` inequivalent bipartitions, each named by its smaller
/// side (the side containing part 1 on ties), parts numbered from 1.
pub fn bipartitions(k: usize) -> Vec<Vec<usize>> {
    let mut cuts = Vec::new();
    for mask in 1u64..(1u64 << k) - 1 {
        let side: Vec<usize> = (0..k)
            .filter(|j| mask >> j & 1 == 1)
            .map(|j| j + 1)
            .collect();
        let other = k - side.len();
        let keep = side.len() < other || (side.len() == other && side[0] == 1);
        if keep {
            cuts.push(side);
        }
    }
    cuts.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    cuts
}

/// Smallest eigenvalue of the partial transpose across one cut.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CutReport {
    pub parts: Vec<usize>,
    pub min_eig: f64,
    pub ppt: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PptReport {
    pub cuts: Vec<CutReport>,
    pub ppt_all: bool,
}

/// PPT test across one cut.
pub fn ppt_cut(rho: &DensityOperator, parts: &[usize], tol: &Tolerances) -> Result<CutReport> {
    let min_eig = min_eigenvalue(&partial_transpose(rho, parts)?);
    Ok(CutReport {
        parts: parts.to_vec(),
        min_eig,
        ppt: min_eig >= -tol.tol_eig,
    })
}

/// PPT test across every inequivalent bipartition.
pub fn is_ppt(rho: &DensityOperator, tol: &Tolerances) -> Result<PptReport> {
    let cuts = bipartitions(rho.shape.parts())
        .iter()
        .map(|c| ppt_cut(rho, c, tol))
        .collect::<Result<Vec<_>>>()?;
    let ppt_all = cuts.iter().all(|c| c.ppt);
    Ok(PptReport { cuts, ppt_all })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RangeVerdict {
    /// The range holds no product vector, so the state is not separable.
    Entangled,
    /// The range holds product vectors; the criterion says nothing.
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RangeCertificate {
    pub range_dim: usize,
    pub verdict: RangeVerdict,
    pub enumeration: EnumerationResult,
}

/// Searches the range of `rho` for product vectors; none certifies entanglement.
pub fn certify_entangled_by_range(
    rho: &DensityOperator,
    cfg: &SearchConfig,
) -> Result<RangeCertificate> {
    let range = rho.range(&cfg.tol)?;
    let mut enumeration = enumerate_products(&range, cfg)?;
    enumeration.space = format!("range of the state ({} dimensions)", range.dim());
    let verdict = if enumeration.product_index == ProductIndex::Finite(0) {
        RangeVerdict::Entangled
    } else {
        RangeVerdict::Inconclusive
    };
    Ok(RangeCertificate {
        range_dim: range.dim(),
        verdict,
        enumeration,
    })
}

/// A random state `G G^H / tr(G G^H)` with `G` a `D x rank` complex Gaussian matrix.
pub fn random_state(shape: &SystemShape, rank: usize, seed: u64) -> DensityOperator {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let d = shape.total_dim();
    let g = DMatrix::from_fn(d, rank.max(1), |_, _| {
        let re: f64 = StandardNormal.sample(&mut rng);
        let im: f64 = StandardNormal.sample(&mut rng);
        C64::new(re, im)
    });
    let m = &g * g.adjoint();
    let tr = m.trace();
    DensityOperator {
        shape: shape.clone(),
        matrix: m / tr,
    }
}
