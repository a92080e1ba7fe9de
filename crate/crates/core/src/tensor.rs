//! Multipartite index bookkeeping and dense tensor-vector arithmetic.
//!
//! Amplitudes are stored in lexicographic order of the index tuples
//! `(i_1, .., i_k)`, i.e. row-major with the last part varying fastest.

use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

pub type C64 = Complex64;

pub(crate) const ZERO: C64 = C64::new(0.0, 0.0);
pub(crate) const ONE: C64 = C64::new(1.0, 0.0);

/// Local dimensions `(d_1, .., d_k)` of a multipartite system.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SystemShape {
    dims: Vec<usize>,
}

impl SystemShape {
    pub fn new(dims: Vec<usize>) -> Result<Self> {
        if dims.is_empty() {
            return Err(Error::Shape("a system needs at least one part".into()));
        }
        if dims.iter().any(|&d| d == 0) {
            return Err(Error::Shape(format!(
                "local dimensions must be positive: {dims:?}"
            )));
        }
        Ok(Self { dims })
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    /// Number of parts `k`.
    pub fn parts(&self) -> usize {
        self.dims.len()
    }

    /// Total dimension `D`.
    pub fn total_dim(&self) -> usize {
        self.dims.iter().product()
    }

    /// `N = sum(d_j - 1) + 1`, the dimension of the span of van der Monde vectors.
    pub fn n(&self) -> usize {
        self.n_prime() + 1
    }

    /// `N' = N - 1`, the largest level.
    pub fn n_prime(&self) -> usize {
        self.dims.iter().map(|d| d - 1).sum()
    }

    /// True when every part has dimension at least two and there are at least two parts.
    pub fn is_entangleable(&self) -> bool {
        self.dims.len() >= 2 && self.dims.iter().all(|&d| d >= 2)
    }

    pub(crate) fn require_entangleable(&self, what: &str) -> Result<()> {
        if self.is_entangleable() {
            Ok(())
        } else {
            Err(Error::Argument(format!(
                "{what} needs at least two parts of dimension >= 2, got {self}"
            )))
        }
    }

    /// Row-major strides.
    pub fn strides(&self) -> Vec<usize> {
        let mut strides = vec![1; self.dims.len()];
        for j in (0..self.dims.len().saturating_sub(1)).rev() {
            strides[j] = strides[j + 1] * self.dims[j + 1];
        }
        strides
    }

    /// Index tuple of a flat position.
    pub fn tuple_of(&self, mut flat: usize) -> IndexTuple {
        let mut entries = vec![0; self.dims.len()];
        for j in (0..self.dims.len()).rev() {
            entries[j] = flat % self.dims[j];
            flat /= self.dims[j];
        }
        IndexTuple { entries }
    }

    /// Flat position of an index tuple.
    pub fn flat_of(&self, tuple: &[usize]) -> Result<usize> {
        if tuple.len() != self.dims.len() {
            return Err(Error::Shape(format!(
                "tuple {tuple:?} does not match shape {self}"
            )));
        }
        let mut flat = 0;
        for (&i, &d) in tuple.iter().zip(&self.dims) {
            if i >= d {
                return Err(Error::Range(format!(
                    "tuple {tuple:?} out of bounds for shape {self}"
                )));
            }
            flat = flat * d + i;
        }
        Ok(flat)
    }

    /// Level `|i|` of every flat position.
    pub fn levels(&self) -> Vec<usize> {
        (0..self.total_dim())
            .map(|f| self.tuple_of(f).level())
            .collect()
    }
}

impl fmt::Display for SystemShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.dims.iter().map(|d| d.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

impl Serialize for SystemShape {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.dims.serialize(s)
    }
}

impl<'de> Deserialize<'de> for SystemShape {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let dims = Vec::<usize>::deserialize(d)?;
        SystemShape::new(dims).map_err(serde::de::Error::custom)
    }
}

/// A basis label `(i_1, .., i_k)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IndexTuple {
    pub entries: Vec<usize>,
}

impl IndexTuple {
    pub fn level(&self) -> usize {
        self.entries.iter().sum()
    }
}

/// All tuples of level `n`, in lexicographic order.
pub fn enumerate_level(shape: &SystemShape, n: usize) -> Result<Vec<IndexTuple>> {
    if n > shape.n_prime() {
        return Err(Error::Range(format!(
            "level {n} outside [0, {}] for shape {shape}",
            shape.n_prime()
        )));
    }
    Ok((0..shape.total_dim())
        .map(|f| shape.tuple_of(f))
        .filter(|t| t.level() == n)
        .collect())
}

/// Dense complex amplitude array over a multipartite basis.
#[derive(Debug, Clone, PartialEq)]
pub struct TensorVector {
    shape: SystemShape,
    amps: Vec<C64>,
}

impl TensorVector {
    pub fn new(shape: SystemShape, amps: Vec<C64>) -> Result<Self> {
        if amps.len() != shape.total_dim() {
            return Err(Error::Shape(format!(
                "{} amplitudes for shape {shape} of dimension {}",
                amps.len(),
                shape.total_dim()
            )));
        }
        Ok(Self { shape, amps })
    }

    pub fn zeros(shape: &SystemShape) -> Self {
        Self {
            amps: vec![ZERO; shape.total_dim()],
            shape: shape.clone(),
        }
    }

    /// Standard basis vector `e_i`.
    pub fn basis(shape: &SystemShape, tuple: &[usize]) -> Result<Self> {
        let mut v = Self::zeros(shape);
        let f = shape.flat_of(tuple)?;
        v.amps[f] = ONE;
        Ok(v)
    }

    /// Builds a vector from real amplitudes.
    pub fn from_real(shape: &SystemShape, amps: &[f64]) -> Result<Self> {
        Self::new(
            shape.clone(),
            amps.iter().map(|&x| C64::new(x, 0.0)).collect(),
        )
    }

    pub fn shape(&self) -> &SystemShape {
        &self.shape
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amps
    }

    pub fn amplitudes_mut(&mut self) -> &mut [C64] {
        &mut self.amps
    }

    pub fn into_amplitudes(self) -> Vec<C64> {
        self.amps
    }

    pub fn amplitude(&self, tuple: &[usize]) -> Result<C64> {
        Ok(self.amps[self.shape.flat_of(tuple)?])
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn is_zero(&self) -> bool {
        self.amps.iter().all(|a| *a == ZERO)
    }

    /// Unit vector along `self`.
    pub fn normalize(&self) -> Result<Self> {
        let n = self.norm();
        if n == 0.0 || !n.is_finite() {
            return Err(Error::Argument("cannot normalize a zero vector".into()));
        }
        Ok(self.scale(C64::new(1.0 / n, 0.0)))
    }

    pub fn scale(&self, c: C64) -> Self {
        Self {
            shape: self.shape.clone(),
            amps: self.amps.iter().map(|a| a * c).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same_shape(other)?;
        Ok(Self {
            shape: self.shape.clone(),
            amps: self
                .amps
                .iter()
                .zip(&other.amps)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(-ONE))
    }

    /// `self + c * other`.
    pub fn axpy(&self, c: C64, other: &Self) -> Result<Self> {
        self.add(&other.scale(c))
    }

    pub(crate) fn check_same_shape(&self, other: &Self) -> Result<()> {
        if self.shape != other.shape {
            return Err(Error::Shape(format!(
                "shapes differ: {} vs {}",
                self.shape, other.shape
            )));
        }
        Ok(())
    }
}

/// Hermitian inner product, conjugate-linear in `v`.
pub fn inner(v: &TensorVector, w: &TensorVector) -> Result<C64> {
    v.check_same_shape(w)?;
    Ok(inner_slices(&v.amps, &w.amps))
}

pub(crate) fn inner_slices(v: &[C64], w: &[C64]) -> C64 {
    v.iter().zip(w).map(|(a, b)| a.conj() * b).sum()
}

/// Tensor product of local coefficient vectors; the shape is read off the factor lengths.
pub fn kron(factors: &[Vec<C64>]) -> Result<TensorVector> {
    let shape = SystemShape::new(factors.iter().map(Vec::len).collect())?;
    kron_in(&shape, factors)
}

/// Tensor product of local coefficient vectors for a given shape.
pub fn kron_in(shape: &SystemShape, factors: &[Vec<C64>]) -> Result<TensorVector> {
    if factors.len() != shape.parts()
        || factors.iter().zip(shape.dims()).any(|(f, &d)| f.len() != d)
    {
        let lens: Vec<usize> = factors.iter().map(Vec::len).collect();
        return Err(Error::Shape(format!(
            "factor lengths {lens:?} do not match shape {shape}"
        )));
    }
    let mut amps = vec![ONE];
    for f in factors {
        amps = amps
            .iter()
            .flat_map(|a| f.iter().map(move |b| a * b))
            .collect();
    }
    Ok(TensorVector {
        shape: shape.clone(),
        amps,
    })
}

#[derive(Serialize, Deserialize)]
struct TensorVectorJson {
    dims: Vec<usize>,
    re: Vec<f64>,
    im: Vec<f64>,
}

impl Serialize for TensorVector {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        TensorVectorJson {
            dims: self.shape.dims.clone(),
            re: self.amps.iter().map(|a| a.re).collect(),
            im: self.amps.iter().map(|a| a.im).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for TensorVector {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let j = TensorVectorJson::deserialize(d)?;
        if j.re.len() != j.im.len() {
            return Err(serde::de::Error::custom("re and im lengths differ"));
        }
        let shape = SystemShape::new(j.dims).map_err(serde::de::Error::custom)?;
        let amps =
            j.re.iter()
                .zip(&j.im)
                .map(|(&r, &i)| C64::new(r, i))
                .collect();
        TensorVector::new(shape, amps).map_err(serde::de::Error::custom)
    }
}
