//! Linear subspaces of a multipartite space, held as orthonormal bases.

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::tensor::{inner_slices, SystemShape, TensorVector, C64, ONE, ZERO};
use crate::tolerances::Tolerances;

/// A subspace `T` of the space with the given shape, with an orthonormal basis of `t` vectors.
#[derive(Debug, Clone, PartialEq)]
pub struct Subspace {
    shape: SystemShape,
    basis: Vec<TensorVector>,
}

impl Subspace {
    /// The zero subspace.
    pub fn zero(shape: &SystemShape) -> Self {
        Self {
            shape: shape.clone(),
            basis: Vec::new(),
        }
    }

    /// The whole space, with the standard basis.
    pub fn full(shape: &SystemShape) -> Self {
        let basis = (0..shape.total_dim())
            .map(|f| {
                let mut v = TensorVector::zeros(shape);
                v.amplitudes_mut()[f] = ONE;
                v
            })
            .collect();
        Self {
            shape: shape.clone(),
            basis,
        }
    }

    /// Wraps a basis that is already orthonormal, checking it.
    pub fn from_orthonormal(
        shape: &SystemShape,
        basis: Vec<TensorVector>,
        tol: &Tolerances,
    ) -> Result<Self> {
        for (i, b) in basis.iter().enumerate() {
            if b.shape() != shape {
                return Err(Error::Shape(format!(
                    "basis vector {i} has shape {}, expected {shape}",
                    b.shape()
                )));
            }
            for (j, c) in basis.iter().enumerate().skip(i) {
                let expect = if i == j { ONE } else { ZERO };
                let g = inner_slices(b.amplitudes(), c.amplitudes());
                if (g - expect).norm() > tol.tol_eq {
                    return Err(Error::Argument(format!(
                        "basis is not orthonormal at ({i},{j}): {g}"
                    )));
                }
            }
        }
        Ok(Self {
            shape: shape.clone(),
            basis,
        })
    }

    pub fn shape(&self) -> &SystemShape {
        &self.shape
    }

    pub fn basis(&self) -> &[TensorVector] {
        &self.basis
    }

    /// Dimension `t`.
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Orthogonal projection onto the subspace.
    pub fn project(&self, v: &TensorVector) -> Result<TensorVector> {
        self.check_shape(v)?;
        let mut out = vec![ZERO; v.amplitudes().len()];
        for b in &self.basis {
            let c = inner_slices(b.amplitudes(), v.amplitudes());
            for (o, x) in out.iter_mut().zip(b.amplitudes()) {
                *o += c * x;
            }
        }
        TensorVector::new(self.shape.clone(), out)
    }

    /// `||(I - P) v|| / ||v||`.
    pub fn membership_residual(&self, v: &TensorVector) -> Result<f64> {
        self.check_shape(v)?;
        let n = v.norm();
        if n == 0.0 {
            return Err(Error::Argument("membership of the zero vector".into()));
        }
        let r = v.sub(&self.project(v)?)?;
        Ok(r.norm() / n)
    }

    fn check_shape(&self, v: &TensorVector) -> Result<()> {
        if v.shape() != &self.shape {
            return Err(Error::Shape(format!(
                "vector shape {} vs subspace shape {}",
                v.shape(),
                self.shape
            )));
        }
        Ok(())
    }
}

/// Two modified Gram-Schmidt passes of `v` against `basis`; returns the residual.
fn orthogonalize(basis: &[TensorVector], v: &[C64]) -> Vec<C64> {
    let mut r = v.to_vec();
    for _pass in 0..2 {
        for b in basis {
            let c = inner_slices(b.amplitudes(), &r);
            for (x, y) in r.iter_mut().zip(b.amplitudes()) {
                *x -= c * y;
            }
        }
    }
    r
}

fn norm(v: &[C64]) -> f64 {
    v.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
}

/// Extends an orthonormal basis by the independent directions among `vectors`.
fn extend(
    shape: &SystemShape,
    mut basis: Vec<TensorVector>,
    vectors: &[TensorVector],
    tol: &Tolerances,
) -> Result<Vec<TensorVector>> {
    for v in vectors {
        if v.shape() != shape {
            return Err(Error::Shape(format!(
                "vector shape {} vs {shape}",
                v.shape()
            )));
        }
        let n = v.norm();
        if n == 0.0 {
            continue;
        }
        let r = orthogonalize(&basis, v.amplitudes());
        let rn = norm(&r);
        if rn < tol.tol_zero * n {
            continue;
        }
        let inv = C64::new(1.0 / rn, 0.0);
        basis.push(TensorVector::new(
            shape.clone(),
            r.into_iter().map(|x| x * inv).collect(),
        )?);
    }
    Ok(basis)
}

/// Linear span, orthonormalized by modified Gram-Schmidt with re-orthogonalization.
pub fn span(vectors: &[TensorVector], tol: &Tolerances) -> Result<Subspace> {
    let first = vectors
        .first()
        .ok_or_else(|| Error::Argument("span of an empty list".into()))?;
    let shape = first.shape().clone();
    let basis = extend(&shape, Vec::new(), vectors, tol)?;
    Ok(Subspace { shape, basis })
}

/// Numerical rank of a list of vectors.
pub fn rank(vectors: &[TensorVector], tol: &Tolerances) -> Result<usize> {
    Ok(span(vectors, tol)?.dim())
}

/// Orthogonal complement, with dimension `D - t`.
///
/// Columns of `I - P` are orthonormalized with largest-residual pivoting, so
/// exactly `D - t` directions are selected.
pub fn complement(s: &Subspace) -> Subspace {
    let shape = s.shape.clone();
    let dd = shape.total_dim();
    let target = dd - s.dim();
    // residual[c] = (I - P) e_c
    let mut residual: Vec<Vec<C64>> = (0..dd)
        .map(|c| {
            let mut col = vec![ZERO; dd];
            col[c] = ONE;
            for b in &s.basis {
                let coef = b.amplitudes()[c].conj();
                for (x, y) in col.iter_mut().zip(b.amplitudes()) {
                    *x -= coef * y;
                }
            }
            col
        })
        .collect();
    let mut out: Vec<TensorVector> = Vec::with_capacity(target);
    let mut used = vec![false; dd];
    while out.len() < target {
        let (pivot, _) = residual
            .iter()
            .enumerate()
            .filter(|(c, _)| !used[*c])
            .map(|(c, r)| (c, norm(r)))
            .fold(
                (usize::MAX, -1.0),
                |acc, x| if x.1 > acc.1 { x } else { acc },
            );
        used[pivot] = true;
        let mut q = orthogonalize(&s.basis, &residual[pivot]);
        q = orthogonalize(&out, &q);
        let qn = norm(&q);
        let inv = C64::new(1.0 / qn, 0.0);
        q.iter_mut().for_each(|x| *x *= inv);
        for (c, r) in residual.iter_mut().enumerate() {
            if used[c] {
                continue;
            }
            let coef = inner_slices(&q, r);
            for (x, y) in r.iter_mut().zip(&q) {
                *x -= coef * y;
            }
        }
        out.push(TensorVector::new(shape.clone(), q).expect("length matches shape"));
    }
    Subspace { shape, basis: out }
}

/// Whether `v` lies in `s`: relative residual below `tol_zero`.
pub fn contains(s: &Subspace, v: &TensorVector, tol: &Tolerances) -> Result<bool> {
    Ok(s.membership_residual(v)? < tol.tol_zero)
}

/// Span of `s` together with `extras`.
pub fn perturb(s: &Subspace, extras: &[TensorVector], tol: &Tolerances) -> Result<Subspace> {
    let basis = extend(&s.shape, s.basis.clone(), extras, tol)?;
    Ok(Subspace {
        shape: s.shape.clone(),
        basis,
    })
}

/// Equality as subspaces, by dimension and mutual containment.
pub fn subspace_equal(a: &Subspace, b: &Subspace, tol: &Tolerances) -> Result<bool> {
    if a.shape != b.shape {
        return Err(Error::Shape(format!(
            "subspace shapes differ: {} vs {}",
            a.shape, b.shape
        )));
    }
    if a.dim() != b.dim() {
        return Ok(false);
    }
    for v in &a.basis {
        if !contains(b, v, tol)? {
            return Ok(false);
        }
    }
    for v in &b.basis {
        if !contains(a, v, tol)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// True when the sum of the subspaces is direct: `dim(A + B) = dim A + dim B`.
pub fn intersect_trivially(a: &Subspace, b: &Subspace, tol: &Tolerances) -> Result<bool> {
    Ok(perturb(a, &b.basis, tol)?.dim() == a.dim() + b.dim())
}

#[derive(Serialize, Deserialize)]
struct SubspaceJson {
    dims: Vec<usize>,
    basis: Vec<TensorVector>,
}

impl Serialize for Subspace {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        SubspaceJson {
            dims: self.shape.dims().to_vec(),
            basis: self.basis.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Subspace {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let j = SubspaceJson::deserialize(d)?;
        let shape = SystemShape::new(j.dims).map_err(serde::de::Error::custom)?;
        Subspace::from_orthonormal(&shape, j.basis, &Tolerances::default())
            .map_err(serde::de::Error::custom)
    }
}
