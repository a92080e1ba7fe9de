//! Builders for the named objects: the TILES basis and its sixth product
//! vector, the three-qubit shifts basis, van der Monde vectors, their span `F`,
//! the Parthasarathy space `S_P = F^perp`, and perturbations of these.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::product::ProductVector;
use crate::subspace::{complement, perturb, span, Subspace};
use crate::tensor::{enumerate_level, SystemShape, TensorVector, C64, ONE, ZERO};
use crate::tolerances::Tolerances;

/// Parameter of a van der Monde vector: a finite `lambda` or infinity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum VdMParameter {
    Finite(C64),
    Infinity,
}

impl VdMParameter {
    pub fn real(x: f64) -> Self {
        VdMParameter::Finite(C64::new(x, 0.0))
    }
}

impl fmt::Display for VdMParameter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VdMParameter::Finite(c) => write!(f, "{}", crate::format_complex(*c)),
            VdMParameter::Infinity => write!(f, "inf"),
        }
    }
}

impl FromStr for VdMParameter {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "inf" | "infinity" | "∞" => Ok(VdMParameter::Infinity),
            other => crate::parse_complex(other).map(VdMParameter::Finite),
        }
    }
}

impl Serialize for VdMParameter {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for VdMParameter {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        String::deserialize(d)?
            .parse()
            .map_err(serde::de::Error::custom)
    }
}

fn r(x: f64) -> C64 {
    C64::new(x, 0.0)
}

fn factor(v: &[f64]) -> Vec<C64> {
    v.iter().map(|&x| r(x)).collect()
}

fn shape_of(dims: &[usize]) -> SystemShape {
    SystemShape::new(dims.to_vec()).expect("fixed shapes are valid")
}

/// The five TILES vectors `psi_0 .. psi_4` on `3 x 3`, normalized.
pub fn tiles_upb() -> Vec<ProductVector> {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let t = 1.0 / 3f64.sqrt();
    [
        [factor(&[1.0, 0.0, 0.0]), factor(&[h, -h, 0.0])],
        [factor(&[0.0, 0.0, 1.0]), factor(&[0.0, h, -h])],
        [factor(&[h, -h, 0.0]), factor(&[0.0, 0.0, 1.0])],
        [factor(&[0.0, -h, h]), factor(&[1.0, 0.0, 0.0])],
        [factor(&[t, t, t]), factor(&[t, t, t])],
    ]
    .into_iter()
    .map(|fs| ProductVector::new(fs.to_vec()).expect("nonzero factors"))
    .collect()
}

/// The sixth product vector in the TILES span, `(2,-1,2)/3 (x) (2,-1,2)/3`.
pub fn tiles_chi() -> ProductVector {
    let f = factor(&[2.0 / 3.0, -1.0 / 3.0, 2.0 / 3.0]);
    ProductVector::new(vec![f.clone(), f]).expect("nonzero factors")
}

/// The three-qubit basis `|0,1,+>, |1,+,0>, |+,0,1>, |-,-,->`.
pub fn shifts3q_upb() -> Vec<ProductVector> {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let zero = factor(&[1.0, 0.0]);
    let one = factor(&[0.0, 1.0]);
    let plus = factor(&[h, h]);
    let minus = factor(&[h, -h]);
    [
        vec![zero.clone(), one.clone(), plus.clone()],
        vec![one.clone(), plus.clone(), zero.clone()],
        vec![plus, zero, one],
        vec![minus.clone(), minus.clone(), minus],
    ]
    .into_iter()
    .map(|fs| ProductVector::new(fs).expect("nonzero factors"))
    .collect()
}

/// Van der Monde vector: factor `(1, l, .., l^(d_j - 1))` per part, or
/// `|d_j - 1>` per part at infinity.
pub fn vdm_vector(shape: &SystemShape, p: VdMParameter) -> ProductVector {
    let factors = shape
        .dims()
        .iter()
        .map(|&d| match p {
            VdMParameter::Finite(l) => {
                let mut f = Vec::with_capacity(d);
                let mut pow = ONE;
                for _ in 0..d {
                    f.push(pow);
                    pow *= l;
                }
                f
            }
            VdMParameter::Infinity => {
                let mut f = vec![ZERO; d];
                f[d - 1] = ONE;
                f
            }
        })
        .collect();
    ProductVector::new(factors).expect("leading or trailing coefficient is one")
}

/// Level-sum vector `w_n = sum over |i| = n of e_i`.
pub fn level_sum(shape: &SystemShape, n: usize) -> Result<TensorVector> {
    let mut v = TensorVector::zeros(shape);
    for t in enumerate_level(shape, n)? {
        let f = shape.flat_of(&t.entries)?;
        v.amplitudes_mut()[f] = ONE;
    }
    Ok(v)
}

/// The span `F` of all van der Monde vectors, of dimension `N`.
pub fn f_span(shape: &SystemShape) -> Result<Subspace> {
    shape.require_entangleable("the van der Monde span")?;
    let sums = (0..=shape.n_prime())
        .map(|n| level_sum(shape, n))
        .collect::<Result<Vec<_>>>()?;
    span(&sums, &Tolerances::default())
}

/// The Parthasarathy space `S_P = F^perp`, of dimension `D - N`, built from
/// differences of lexicographically consecutive tuples within each level.
pub fn parthasarathy_space(shape: &SystemShape) -> Result<Subspace> {
    shape.require_entangleable("the Parthasarathy space")?;
    let mut diffs = Vec::new();
    for n in 0..=shape.n_prime() {
        let level = enumerate_level(shape, n)?;
        for pair in level.windows(2) {
            let mut v = TensorVector::zeros(shape);
            v.amplitudes_mut()[shape.flat_of(&pair[0].entries)?] = ONE;
            v.amplitudes_mut()[shape.flat_of(&pair[1].entries)?] = -ONE;
            diffs.push(v);
        }
    }
    if diffs.is_empty() {
        return Ok(Subspace::zero(shape));
    }
    span(&diffs, &Tolerances::default())
}

/// Base objects that can be named and perturbed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum BaseSpace {
    /// Span of the TILES basis.
    U,
    /// Orthogonal complement of `U`.
    SU,
    /// Span of the three-qubit shifts basis.
    V,
    /// Orthogonal complement of `V`.
    SV,
    /// Span of the van der Monde vectors.
    F,
    /// The Parthasarathy space.
    SP,
}

impl BaseSpace {
    fn name(self) -> &'static str {
        match self {
            BaseSpace::U => "U",
            BaseSpace::SU => "SU",
            BaseSpace::V => "V",
            BaseSpace::SV => "SV",
            BaseSpace::F => "F",
            BaseSpace::SP => "SP",
        }
    }

    fn fixed_dims(self) -> Option<&'static [usize]> {
        match self {
            BaseSpace::U | BaseSpace::SU => Some(&[3, 3]),
            BaseSpace::V | BaseSpace::SV => Some(&[2, 2, 2]),
            BaseSpace::F | BaseSpace::SP => None,
        }
    }

    fn is_tiles(self) -> bool {
        matches!(self, BaseSpace::U | BaseSpace::SU)
    }

    fn is_shifts(self) -> bool {
        matches!(self, BaseSpace::V | BaseSpace::SV)
    }
}

/// A vector added to a base space.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Member {
    /// Basis member by index: `psi_0 .. psi_4` for TILES, `phi_1 .. phi_4` for the shifts basis.
    Upb(usize),
    /// The sixth TILES product vector.
    Chi,
    /// A van der Monde vector.
    Vdm(VdMParameter),
}

impl fmt::Display for Member {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Member::Upb(i) => write!(f, "{i}"),
            Member::Chi => write!(f, "chi"),
            Member::Vdm(p) => write!(f, "z({p})"),
        }
    }
}

/// A base space with a list of perturbing members, e.g. `SU+0+1` or `SP+z(1)+z(inf)`.
#[derive(Debug, Clone, PartialEq)]
pub struct NamedSpace {
    pub base: BaseSpace,
    pub members: Vec<Member>,
    pub shape: SystemShape,
}

pub const GRAMMAR: &str = "NAME(\"+\" MEMBER)* with NAME in {U, SU, V, SV, F, SP} and MEMBER \
one of: a basis index (0-4 for U/SU, 1-4 for V/SV), \"chi\" (U/SU), or \"z(EXPR)\" (F/SP) \
where EXPR is a complex number \"a+bi\" or \"inf\"; F and SP need --dims";

impl NamedSpace {
    pub fn new(base: BaseSpace, members: Vec<Member>, shape: SystemShape) -> Result<Self> {
        let spec = Self {
            base,
            members,
            shape,
        };
        spec.validate()?;
        Ok(spec)
    }

    /// Named space with the base's fixed shape (`U`, `SU`, `V`, `SV`).
    pub fn fixed(base: BaseSpace, members: Vec<Member>) -> Result<Self> {
        let dims = base
            .fixed_dims()
            .ok_or_else(|| Error::Argument(format!("{} needs explicit dimensions", base.name())))?;
        Self::new(base, members, shape_of(dims))
    }

    /// `S_P` perturbed by van der Monde vectors.
    pub fn sp(shape: SystemShape, params: &[VdMParameter]) -> Result<Self> {
        Self::new(
            BaseSpace::SP,
            params.iter().map(|&p| Member::Vdm(p)).collect(),
            shape,
        )
    }

    /// Parses `NAME(+MEMBER)*`; `dims` is required for `F` and `SP`.
    pub fn parse(text: &str, dims: Option<&[usize]>) -> Result<Self> {
        let pieces = split_top_level(text.trim())?;
        let base = match pieces[0].as_str() {
            "U" => BaseSpace::U,
            "SU" => BaseSpace::SU,
            "V" => BaseSpace::V,
            "SV" => BaseSpace::SV,
            "F" => BaseSpace::F,
            "SP" => BaseSpace::SP,
            other => {
                return Err(Error::Parse(format!(
                    "unknown space name {other:?}; grammar: {GRAMMAR}"
                )))
            }
        };
        let members = pieces[1..]
            .iter()
            .map(|m| parse_member(m))
            .collect::<Result<Vec<_>>>()?;
        let shape = match (base.fixed_dims(), dims) {
            (Some(fixed), Some(given)) if fixed != given => {
                return Err(Error::Parse(format!(
                    "{} lives on dims {fixed:?}, not {given:?}",
                    base.name()
                )))
            }
            (Some(fixed), _) => shape_of(fixed),
            (None, Some(given)) => SystemShape::new(given.to_vec())?,
            (None, None) => {
                return Err(Error::Parse(format!(
                    "{} needs --dims; grammar: {GRAMMAR}",
                    base.name()
                )))
            }
        };
        Self::new(base, members, shape)
    }

    fn validate(&self) -> Result<()> {
        if let Some(fixed) = self.base.fixed_dims() {
            if self.shape.dims() != fixed {
                return Err(Error::Argument(format!(
                    "{} lives on dims {fixed:?}",
                    self.base.name()
                )));
            }
        } else {
            self.shape.require_entangleable(self.base.name())?;
        }
        for m in &self.members {
            let ok = match m {
                Member::Upb(i) if self.base.is_tiles() => *i <= 4,
                Member::Upb(i) if self.base.is_shifts() => (1..=4).contains(i),
                Member::Chi => self.base.is_tiles(),
                Member::Vdm(_) => matches!(self.base, BaseSpace::F | BaseSpace::SP),
                Member::Upb(_) => false,
            };
            if !ok {
                return Err(Error::Argument(format!(
                    "member {m} is not valid for {}",
                    self.base.name()
                )));
            }
        }
        Ok(())
    }

    /// Van der Monde parameters among the members.
    pub fn vdm_parameters(&self) -> Vec<VdMParameter> {
        self.members
            .iter()
            .filter_map(|m| match m {
                Member::Vdm(p) => Some(*p),
                _ => None,
            })
            .collect()
    }

    /// Basis indices among the members, sorted.
    pub fn upb_indices(&self) -> Vec<usize> {
        let mut v: Vec<usize> = self
            .members
            .iter()
            .filter_map(|m| match m {
                Member::Upb(i) => Some(*i),
                _ => None,
            })
            .collect();
        v.sort_unstable();
        v
    }

    /// The vector a member stands for.
    pub fn member_vector(&self, m: &Member) -> Result<TensorVector> {
        Ok(match m {
            Member::Upb(i) if self.base.is_tiles() => tiles_upb()[*i].to_tensor(),
            Member::Upb(i) => shifts3q_upb()[*i - 1].to_tensor(),
            Member::Chi => tiles_chi().to_tensor(),
            Member::Vdm(p) => vdm_vector(&self.shape, *p).to_tensor(),
        })
    }
}

impl fmt::Display for NamedSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.base.name())?;
        for m in &self.members {
            write!(f, "+{m}")?;
        }
        Ok(())
    }
}

fn split_top_level(text: &str) -> Result<Vec<String>> {
    let mut out = vec![String::new()];
    let mut depth = 0i32;
    for ch in text.chars() {
        match ch {
            '(' => depth += 1,
            ')' => depth -= 1,
            _ => {}
        }
        if depth < 0 {
            return Err(Error::Parse(format!("unbalanced parentheses in {text:?}")));
        }
        if ch == '+' && depth == 0 {
            out.push(String::new());
        } else if !ch.is_whitespace() {
            out.last_mut().expect("nonempty").push(ch);
        }
    }
    if depth != 0 || out.iter().any(String::is_empty) {
        return Err(Error::Parse(format!(
            "malformed space {text:?}; grammar: {GRAMMAR}"
        )));
    }
    Ok(out)
}

fn parse_member(m: &str) -> Result<Member> {
    if m == "chi" {
        return Ok(Member::Chi);
    }
    if let Some(inner) = m.strip_prefix("z(").and_then(|s| s.strip_suffix(')')) {
        return inner.parse().map(Member::Vdm);
    }
    m.parse::<usize>()
        .map(Member::Upb)
        .map_err(|_| Error::Parse(format!("bad member {m:?}; grammar: {GRAMMAR}")))
}

/// Builds the subspace a [`NamedSpace`] names.
pub fn named_space(spec: &NamedSpace, tol: &Tolerances) -> Result<Subspace> {
    spec.validate()?;
    let base = match spec.base {
        BaseSpace::U => tiles_span(tol)?,
        BaseSpace::SU => complement(&tiles_span(tol)?),
        BaseSpace::V => shifts_span(tol)?,
        BaseSpace::SV => complement(&shifts_span(tol)?),
        BaseSpace::F => f_span(&spec.shape)?,
        BaseSpace::SP => parthasarathy_space(&spec.shape)?,
    };
    let extras = spec
        .members
        .iter()
        .map(|m| spec.member_vector(m))
        .collect::<Result<Vec<_>>>()?;
    perturb(&base, &extras, tol)
}

/// Span of the TILES basis.
pub fn tiles_span(tol: &Tolerances) -> Result<Subspace> {
    let v: Vec<TensorVector> = tiles_upb().iter().map(ProductVector::to_tensor).collect();
    span(&v, tol)
}

/// Span of the three-qubit shifts basis.
pub fn shifts_span(tol: &Tolerances) -> Result<Subspace> {
    let v: Vec<TensorVector> = shifts3q_upb()
        .iter()
        .map(ProductVector::to_tensor)
        .collect();
    span(&v, tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::product::is_product;
    use crate::subspace::{contains, rank, subspace_equal};
    use crate::tensor::inner;

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    fn shape(d: &[usize]) -> SystemShape {
        SystemShape::new(d.to_vec()).unwrap()
    }

    fn gram_is_identity(vs: &[ProductVector]) {
        for (i, a) in vs.iter().enumerate() {
            for (j, b) in vs.iter().enumerate() {
                let g = inner(&a.to_tensor(), &b.to_tensor()).unwrap();
                let e = if i == j { 1.0 } else { 0.0 };
                assert!((g - r(e)).norm() < 1e-12, "({i},{j}) -> {g}");
            }
        }
    }

    #[test]
    fn tiles_basis() {
        let t = tiles_upb();
        gram_is_identity(&t);
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let psi0 = t[0].to_tensor();
        assert!((psi0.amplitude(&[0, 0]).unwrap() - r(h)).norm() < 1e-15);
        assert!((psi0.amplitude(&[0, 1]).unwrap() + r(h)).norm() < 1e-15);
        assert_eq!(tiles_span(&tol()).unwrap().dim(), 5);
    }

    #[test]
    fn chi_expansion_and_membership() {
        let t = tiles_upb();
        let chi = tiles_chi().to_tensor();
        assert!((chi.norm() - 1.0).abs() < 1e-15);
        let s2 = 2f64.sqrt() / 3.0;
        // with psi_1 = |2>(|1> - |2>)/sqrt2 its coefficient carries a minus sign
        let expected = [s2, -s2, s2, s2, 1.0 / 3.0];
        for (psi, e) in t.iter().zip(expected) {
            let c = inner(&psi.to_tensor(), &chi).unwrap();
            assert!((c - r(e)).norm() < 1e-14, "{c} vs {e}");
        }
        assert!(contains(&tiles_span(&tol()).unwrap(), &chi, &tol()).unwrap());
        let p = is_product(&chi, &tol()).unwrap().unwrap();
        for f in p.normalized().factors() {
            let phase = f[0] / f[0].norm();
            for (a, b) in f.iter().zip([2.0, -1.0, 2.0]) {
                assert!((a / phase - r(b / 3.0)).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn shifts_basis() {
        let v = shifts3q_upb();
        gram_is_identity(&v);
        let h = std::f64::consts::FRAC_1_SQRT_2;
        assert_eq!(v[3].factors()[0], factor(&[h, -h]));
        assert_eq!(shifts_span(&tol()).unwrap().dim(), 4);
    }

    #[test]
    fn vdm_examples() {
        let s = shape(&[3, 3]);
        let z0 = vdm_vector(&s, VdMParameter::real(0.0)).to_tensor();
        assert_eq!(z0, TensorVector::basis(&s, &[0, 0]).unwrap());
        let zi = vdm_vector(&s, VdMParameter::Infinity).to_tensor();
        assert_eq!(zi, TensorVector::basis(&s, &[2, 2]).unwrap());
        let z1 = vdm_vector(&shape(&[2, 2]), VdMParameter::real(1.0)).to_tensor();
        assert!(z1.amplitudes().iter().all(|a| *a == ONE));
    }

    #[test]
    fn f_and_sp_dimensions() {
        for (d, f_dim, sp_dim) in [
            (vec![3, 3], 5, 4),
            (vec![2, 2, 2], 4, 4),
            (vec![2, 5], 6, 4),
            (vec![3, 3, 3], 7, 20),
            (vec![2, 2], 3, 1),
        ] {
            let s = shape(&d);
            assert_eq!(f_span(&s).unwrap().dim(), f_dim, "{d:?}");
            assert_eq!(parthasarathy_space(&s).unwrap().dim(), sp_dim, "{d:?}");
        }
        assert!(f_span(&shape(&[3])).is_err());
        assert!(parthasarathy_space(&shape(&[1, 3])).is_err());
    }

    #[test]
    fn vdm_vectors_lie_in_f_and_are_orthogonal_to_sp() {
        let s = shape(&[3, 3]);
        let f = f_span(&s).unwrap();
        let sp = parthasarathy_space(&s).unwrap();
        let params = [
            VdMParameter::real(0.0),
            VdMParameter::real(1.0),
            VdMParameter::real(2.0),
            VdMParameter::Finite(C64::new(0.0, 1.0)),
            VdMParameter::Infinity,
        ];
        for p in params {
            let z = vdm_vector(&s, p).to_tensor();
            assert!(contains(&f, &z, &tol()).unwrap(), "{p}");
            for b in sp.basis() {
                assert!(inner(&z, b).unwrap().norm() < 1e-12);
            }
        }
        assert!(!contains(
            &sp,
            &vdm_vector(&s, VdMParameter::real(1.0)).to_tensor(),
            &tol()
        )
        .unwrap());
    }

    #[test]
    fn f_is_complement_of_sp_and_matches_sampled_vdm_span() {
        for d in [vec![3, 3], vec![2, 2, 2], vec![2, 5], vec![2, 3, 4]] {
            let s = shape(&d);
            let f = f_span(&s).unwrap();
            let sp = parthasarathy_space(&s).unwrap();
            assert!(subspace_equal(&f, &complement(&sp), &tol()).unwrap());
            // N van der Monde vectors at roots of unity span F
            let n = s.n();
            let sampled: Vec<TensorVector> = (0..n)
                .map(|j| {
                    let th = 2.0 * std::f64::consts::PI * j as f64 / n as f64;
                    vdm_vector(&s, VdMParameter::Finite(C64::from_polar(1.0, th))).to_tensor()
                })
                .collect();
            let g = span(&sampled, &tol()).unwrap();
            assert_eq!(g.dim(), n);
            assert!(subspace_equal(&f, &g, &tol()).unwrap());
        }
    }

    #[test]
    fn vandermonde_independence() {
        for d in [vec![3, 3], vec![2, 2, 2], vec![2, 5]] {
            let s = shape(&d);
            let n = s.n();
            let vs: Vec<TensorVector> = (0..n)
                .map(|j| vdm_vector(&s, VdMParameter::real(0.5 + 0.25 * j as f64)).to_tensor())
                .collect();
            assert_eq!(rank(&vs, &tol()).unwrap(), n, "{d:?}");
        }
    }

    #[test]
    fn parse_and_display() {
        for text in ["U", "SU+0", "SU+0+1", "SV+1+2", "U+chi"] {
            assert_eq!(NamedSpace::parse(text, None).unwrap().to_string(), text);
        }
        let s = NamedSpace::parse("SP+z(1+2i)+z(inf)", Some(&[3, 3])).unwrap();
        assert_eq!(
            s.vdm_parameters(),
            vec![
                VdMParameter::Finite(C64::new(1.0, 2.0)),
                VdMParameter::Infinity
            ]
        );
        assert_eq!(s.to_string(), "SP+z(1+2i)+z(inf)");
        assert!(matches!(
            NamedSpace::parse("SP", None),
            Err(Error::Parse(_))
        ));
        assert!(NamedSpace::parse("SU+5", None).is_err());
        assert!(NamedSpace::parse("SV+0", None).is_err());
        assert!(NamedSpace::parse("SP+3", Some(&[3, 3])).is_err());
        assert!(NamedSpace::parse("SU", Some(&[2, 2])).is_err());
        assert!(matches!(NamedSpace::parse("W", None), Err(Error::Parse(_))));
        assert!(NamedSpace::parse("SU++0", None).is_err());
        assert!(NamedSpace::parse("SP+z(1", Some(&[3, 3])).is_err());
    }

    #[test]
    fn named_dimensions() {
        let t = tol();
        let dim = |text: &str, dims: Option<&[usize]>| {
            named_space(&NamedSpace::parse(text, dims).unwrap(), &t)
                .unwrap()
                .dim()
        };
        assert_eq!(dim("U", None), 5);
        assert_eq!(dim("SU", None), 4);
        assert_eq!(dim("SU+0", None), 5);
        assert_eq!(dim("SU+4", None), 5);
        assert_eq!(dim("SU+0+1", None), 6);
        assert_eq!(dim("SV", None), 4);
        assert_eq!(dim("SV+1", None), 5);
        assert_eq!(dim("SV+1+2", None), 6);
        assert_eq!(dim("SP+z(0)+z(inf)", Some(&[3, 3])), 6);
        assert_eq!(dim("SP+z(1)+z(i)", Some(&[3, 3])), 6);
        assert_eq!(dim("SP+z(2)", Some(&[2, 5])), 5);
        assert_eq!(dim("SP+z(inf)", Some(&[2, 2])), 2);
        // adding a vector already in the space changes nothing
        assert_eq!(dim("U+chi", None), 5);
    }

    #[test]
    fn sv4_coincides_with_sv_plus_extreme_basis_vectors() {
        let t = tol();
        let sv4 = named_space(&NamedSpace::parse("SV+4", None).unwrap(), &t).unwrap();
        let sv = named_space(&NamedSpace::parse("SV", None).unwrap(), &t).unwrap();
        let s = shape(&[2, 2, 2]);
        for corner in [[0, 0, 0], [1, 1, 1]] {
            let other = perturb(&sv, &[TensorVector::basis(&s, &corner).unwrap()], &t).unwrap();
            assert!(subspace_equal(&sv4, &other, &t).unwrap());
        }
    }
}
