//! Product vectors: detection, canonical form, enumeration inside a subspace,
//! closed-form solvers for perturbed Parthasarathy spaces, and infinite families.

mod closed_form;
mod detect;
mod families;
mod search;

use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::tensor::{kron_in, SystemShape, TensorVector, C64};
use crate::tolerances::Tolerances;

pub use closed_form::{
    rescale_ray, solve_2xd, solve_3x3, solve_3x3_coordinates, solve_qubits_rigidity,
    solve_sp_endpoints, Coordinates3x3, Endpoint,
};
pub use detect::{is_product, is_product_across, neat_form, ray_equal, unfold};
pub use families::{
    certify_infinite, family, family_grid, sextic_coefficients, Family, SexticData,
};
pub use search::enumerate_products;

/// A product vector `b_1 (x) .. (x) b_k` held by its local factors.
#[derive(Debug, Clone, PartialEq)]
pub struct ProductVector {
    shape: SystemShape,
    factors: Vec<Vec<C64>>,
}

impl ProductVector {
    pub fn new(factors: Vec<Vec<C64>>) -> Result<Self> {
        let shape = SystemShape::new(factors.iter().map(Vec::len).collect())?;
        if let Some(j) = factors
            .iter()
            .position(|f| f.iter().all(|c| *c == C64::new(0.0, 0.0)))
        {
            return Err(Error::Argument(format!("factor {j} is zero")));
        }
        Ok(Self { shape, factors })
    }

    /// Factors given as real coefficients.
    pub fn from_real(factors: &[&[f64]]) -> Result<Self> {
        Self::new(
            factors
                .iter()
                .map(|f| f.iter().map(|&x| C64::new(x, 0.0)).collect())
                .collect(),
        )
    }

    pub fn shape(&self) -> &SystemShape {
        &self.shape
    }

    pub fn factors(&self) -> &[Vec<C64>] {
        &self.factors
    }

    pub fn to_tensor(&self) -> TensorVector {
        kron_in(&self.shape, &self.factors).expect("factor lengths define the shape")
    }

    /// Same ray with every factor scaled to unit norm.
    pub fn normalized(&self) -> Self {
        let factors = self
            .factors
            .iter()
            .map(|f| {
                let n = f.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
                f.iter().map(|c| c / n).collect()
            })
            .collect();
        Self {
            shape: self.shape.clone(),
            factors,
        }
    }
}

impl fmt::Display for ProductVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .factors
            .iter()
            .map(|fac| {
                let c: Vec<String> = fac.iter().map(|c| crate::format_complex(*c)).collect();
                format!("({})", c.join(", "))
            })
            .collect();
        write!(f, "{}", parts.join(" x "))
    }
}

#[derive(Serialize, Deserialize)]
struct FactorJson {
    re: Vec<f64>,
    im: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
struct ProductVectorJson {
    dims: Vec<usize>,
    factors: Vec<FactorJson>,
}

impl Serialize for ProductVector {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        ProductVectorJson {
            dims: self.shape.dims().to_vec(),
            factors: self
                .factors
                .iter()
                .map(|f| FactorJson {
                    re: f.iter().map(|c| c.re).collect(),
                    im: f.iter().map(|c| c.im).collect(),
                })
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for ProductVector {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let j = ProductVectorJson::deserialize(d)?;
        let factors: Vec<Vec<C64>> = j
            .factors
            .into_iter()
            .map(|f| {
                f.re.into_iter()
                    .zip(f.im)
                    .map(|(r, i)| C64::new(r, i))
                    .collect()
            })
            .collect();
        let p = ProductVector::new(factors).map_err(serde::de::Error::custom)?;
        if p.shape.dims() != j.dims.as_slice() {
            return Err(serde::de::Error::custom("dims do not match factor lengths"));
        }
        Ok(p)
    }
}

/// The product index `tau`, or the tag for infinitely many product rays.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProductIndex {
    Finite(usize),
    Infinite,
}

impl fmt::Display for ProductIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ProductIndex::Finite(n) => write!(f, "{n}"),
            ProductIndex::Infinite => write!(f, "infinite"),
        }
    }
}

impl Serialize for ProductIndex {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            ProductIndex::Finite(n) => s.serialize_u64(*n as u64),
            ProductIndex::Infinite => s.serialize_str("infinite"),
        }
    }
}

impl<'de> Deserialize<'de> for ProductIndex {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        match serde_json::Value::deserialize(d)? {
            serde_json::Value::Number(n) => n
                .as_u64()
                .map(|n| ProductIndex::Finite(n as usize))
                .ok_or_else(|| serde::de::Error::custom("tau must be a non-negative integer")),
            serde_json::Value::String(s) if s == "infinite" => Ok(ProductIndex::Infinite),
            other => Err(serde::de::Error::custom(format!("invalid tau {other}"))),
        }
    }
}

/// How an enumeration result was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    /// Random-restart alternating minimization.
    Search,
    /// A closed-form solver.
    ClosedForm,
    /// A family generator certificate.
    Family,
}

/// Search and certification statistics.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Diagnostics {
    pub method: Method,
    /// Restarts whose limit point was accepted.
    pub converged_restarts: usize,
    /// Restart index at which the last new ray appeared.
    pub last_new_ray_restart: Option<usize>,
    /// Whether the saturation rule fired.
    pub saturated: bool,
    /// Whether some zero was found to lie on a curve or larger set of zeros.
    #[serde(default)]
    pub positive_dimensional: bool,
    /// Mean iteration count per restart.
    pub mean_iterations: f64,
    /// Family that certifies an infinite result, when one was run.
    pub certified_family: Option<String>,
}

impl Diagnostics {
    pub(crate) fn closed_form() -> Self {
        Self {
            method: Method::ClosedForm,
            converged_restarts: 0,
            last_new_ray_restart: None,
            saturated: true,
            positive_dimensional: false,
            mean_iterations: 0.0,
            certified_family: None,
        }
    }
}

/// Product rays found in a subspace.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnumerationResult {
    pub space: String,
    #[serde(rename = "tau")]
    pub product_index: ProductIndex,
    pub rays: Vec<ProductVector>,
    /// Membership residual of each ray.
    pub residuals: Vec<f64>,
    pub restarts_used: usize,
    pub seed: u64,
    #[serde(default)]
    pub family_samples: Vec<ProductVector>,
    /// Membership residual of each family sample.
    #[serde(default)]
    pub sample_residuals: Vec<f64>,
    pub diagnostics: Diagnostics,
}

impl EnumerationResult {
    /// True for an infinite verdict backed only by the search heuristic.
    pub fn likely_infinite(&self) -> bool {
        self.product_index == ProductIndex::Infinite && self.diagnostics.certified_family.is_none()
    }
}

/// Parameters of the random-restart search.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchConfig {
    pub restarts: usize,
    pub max_iters: usize,
    pub seed: u64,
    pub infinite_threshold: usize,
    pub tol: Tolerances,
}

impl Default for SearchConfig {
    fn default() -> Self {
        Self {
            restarts: 400,
            max_iters: 500,
            seed: 0,
            infinite_threshold: 25,
            tol: Tolerances::default(),
        }
    }
}

impl SearchConfig {
    pub fn validate(&self) -> Result<()> {
        if self.restarts < 1 {
            return Err(Error::Argument("restarts must be at least 1".into()));
        }
        if self.max_iters < 10 {
            return Err(Error::Argument("max_iters must be at least 10".into()));
        }
        self.tol.validate()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn product_vector_rejects_zero_factor() {
        assert!(ProductVector::from_real(&[&[1.0, 0.0], &[0.0, 0.0]]).is_err());
    }

    #[test]
    fn product_index_json() {
        assert_eq!(
            serde_json::to_string(&ProductIndex::Finite(6)).unwrap(),
            "6"
        );
        assert_eq!(
            serde_json::to_string(&ProductIndex::Infinite).unwrap(),
            "\"infinite\""
        );
        let t: ProductIndex = serde_json::from_str("\"infinite\"").unwrap();
        assert_eq!(t, ProductIndex::Infinite);
        assert!(serde_json::from_str::<ProductIndex>("-1").is_err());
    }

    #[test]
    fn product_vector_json_roundtrip() {
        let p = ProductVector::new(vec![
            vec![C64::new(1.0, 0.0), C64::new(0.0, -2.0)],
            vec![C64::new(0.5, 0.5), C64::new(1.0, 0.0), C64::new(0.0, 0.0)],
        ])
        .unwrap();
        let back: ProductVector =
            serde_json::from_str(&serde_json::to_string(&p).unwrap()).unwrap();
        assert_eq!(back, p);
    }

    #[test]
    fn search_config_validation() {
        SearchConfig::default().validate().unwrap();
        let cfg = SearchConfig {
            max_iters: 5,
            ..SearchConfig::default()
        };
        assert!(cfg.validate().is_err());
    }
}
