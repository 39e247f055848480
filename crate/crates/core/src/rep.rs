//! Representations of the dihedral group `D_2p` in characteristic two.
//!
//! A module is described by a [`ModuleSpec`]: a direct sum of two-dimensional
//! blocks `W_{m_1}, ..., W_{m_r}`, `s` copies of `W_0` and `t` trivial
//! summands. Points use the coordinate order `a_1..a_r, b_1..b_r, c_1..c_s,
//! d_1..d_s, e_1..e_t`, where `rho` scales `(a_i, b_i)` by
//! `(lambda^{-m_i}, lambda^{m_i})` and `sigma` swaps `a_i <-> b_i` and
//! `c_j <-> d_j`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::Deref;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::gf2m::{Field, FieldElement, FieldError, FieldParams};
use crate::linalg::Matrix;
use crate::poly::{rho_character, Polynomial, VariableLayout};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RepError {
    #[error("invalid module spec: {0}")]
    InvalidSpec(String),
    #[error("field was built for p={field_p} but the module has p={spec_p}")]
    FieldMismatch { spec_p: u32, field_p: u32 },
    #[error("shape mismatch: expected length {expected}, got {got}")]
    Shape { expected: usize, got: usize },
    #[error("invalid representation: {0}")]
    InvalidRepresentation(String),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error("cannot parse representation: {0}")]
    Parse(String),
}

/// `V = W_{m_1} + ... + W_{m_r} + s W_0 + t (trivial)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ModuleSpec {
    pub p: u32,
    pub weights: Vec<u32>,
    #[serde(default)]
    pub s: usize,
    #[serde(default)]
    pub t: usize,
}

impl ModuleSpec {
    pub fn new(p: u32, weights: Vec<u32>, s: usize, t: usize) -> Self {
        Self { p, weights, s, t }
    }

    pub fn from_json(json: &str) -> Result<Self, RepError> {
        let spec: Self = serde_json::from_str(json).map_err(|e| RepError::Parse(e.to_string()))?;
        spec.validate()?;
        Ok(spec)
    }

    /// Checks `p` odd `>= 3` and `0 < m_i <= (p-1)/2`, naming the violated
    /// condition.
    pub fn validate(&self) -> Result<(), RepError> {
        if self.p < 3 || self.p.is_multiple_of(2) {
            return Err(RepError::InvalidSpec(format!(
                "p must be an odd integer >= 3 (got p={})",
                self.p
            )));
        }
        let max = (self.p - 1) / 2;
        if let Some((i, &w)) = self
            .weights
            .iter()
            .enumerate()
            .find(|(_, &w)| w == 0 || w > max)
        {
            return Err(RepError::InvalidSpec(format!(
                "weight m_{} = {w} violates 0 < m_i <= (p-1)/2 = {max}",
                i + 1
            )));
        }
        Ok(())
    }

    pub fn r(&self) -> usize {
        self.weights.len()
    }

    pub fn dimension(&self) -> usize {
        2 * self.r() + 2 * self.s + self.t
    }

    pub fn layout(&self) -> VariableLayout {
        VariableLayout::new(self.r(), self.s, self.t)
    }

    pub fn is_reduced(&self) -> bool {
        self.t == 0
    }

    pub fn is_faithful(&self) -> bool {
        self.weights.iter().any(|&w| gcd(w, self.p) == 1)
    }

    /// Multiset of indecomposable summands.
    pub fn summands(&self) -> Decomposition {
        let mut d = Decomposition::default();
        for &w in &self.weights {
            d.insert(Indecomposable::W(w), 1);
        }
        d.insert(Indecomposable::W(0), self.s);
        d.insert(Indecomposable::Trivial, self.t);
        d
    }
}

fn gcd(mut a: u32, mut b: u32) -> u32 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// `rho^j sigma^eps`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupElement {
    pub j: u32,
    pub eps: bool,
}

impl GroupElement {
    pub const IDENTITY: Self = Self { j: 0, eps: false };

    pub fn rho() -> Self {
        Self { j: 1, eps: false }
    }

    pub fn sigma() -> Self {
        Self { j: 0, eps: true }
    }

    pub fn new(j: u32, eps: bool, p: u32) -> Self {
        Self { j: j % p, eps }
    }

    /// `self * other`, using `sigma rho sigma = rho^{-1}`.
    pub fn compose(self, other: Self, p: u32) -> Self {
        let j = if self.eps {
            (self.j + p - other.j) % p
        } else {
            (self.j + other.j) % p
        };
        Self {
            j,
            eps: self.eps ^ other.eps,
        }
    }

    pub fn inverse(self, p: u32) -> Self {
        if self.eps {
            self
        } else {
            Self {
                j: (p - self.j) % p,
                eps: false,
            }
        }
    }

    /// All `2p` elements: rotations first, then reflections.
    pub fn all(p: u32) -> impl Iterator<Item = Self> {
        [false, true]
            .into_iter()
            .flat_map(move |eps| (0..p).map(move |j| Self { j, eps }))
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.j, self.eps) {
            (0, false) => write!(f, "1"),
            (0, true) => write!(f, "sigma"),
            (j, false) => write!(f, "rho^{j}"),
            (j, true) => write!(f, "rho^{j} sigma"),
        }
    }
}

/// Coordinates of a vector in `V`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Point(pub Vec<FieldElement>);

impl Point {
    pub fn zero(dim: usize) -> Self {
        Self(vec![FieldElement::ZERO; dim])
    }

    pub fn from_bits(bits: &[u32]) -> Self {
        Self(
            bits.iter()
                .map(|&b| FieldElement::from_bits_unchecked(b))
                .collect(),
        )
    }

    pub fn bits(&self) -> Vec<u32> {
        self.0.iter().map(|e| e.bits()).collect()
    }
}

impl Deref for Point {
    type Target = [FieldElement];

    fn deref(&self) -> &[FieldElement] {
        &self.0
    }
}

/// A validated module together with the field it lives over.
#[derive(Clone, Debug)]
pub struct DihedralModule {
    spec: ModuleSpec,
    field: Arc<Field>,
    layout: VariableLayout,
}

impl DihedralModule {
    pub fn new(spec: ModuleSpec, field: Arc<Field>) -> Result<Self, RepError> {
        spec.validate()?;
        if field.p() != spec.p {
            return Err(RepError::FieldMismatch {
                spec_p: spec.p,
                field_p: field.p(),
            });
        }
        let layout = spec.layout();
        Ok(Self {
            spec,
            field,
            layout,
        })
    }

    /// Uses the smallest field containing a primitive `p`-th root of unity.
    pub fn with_default_field(spec: ModuleSpec) -> Result<Self, RepError> {
        spec.validate()?;
        let field = Arc::new(Field::for_p(spec.p)?);
        Self::new(spec, field)
    }

    pub fn spec(&self) -> &ModuleSpec {
        &self.spec
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn shared_field(&self) -> Arc<Field> {
        Arc::clone(&self.field)
    }

    pub fn layout(&self) -> &VariableLayout {
        &self.layout
    }

    pub fn p(&self) -> u32 {
        self.spec.p
    }

    pub fn dimension(&self) -> usize {
        self.spec.dimension()
    }

    fn check_point(&self, v: &[FieldElement]) -> Result<(), RepError> {
        if v.len() != self.dimension() {
            return Err(RepError::Shape {
                expected: self.dimension(),
                got: v.len(),
            });
        }
        Ok(())
    }

    pub fn act_on_point(&self, g: GroupElement, v: &Point) -> Result<Point, RepError> {
        self.check_point(v)?;
        let mut out = v.clone();
        self.act_in_place(g, &mut out.0);
        Ok(out)
    }

    /// `sigma^eps` first, then `rho^j`.
    pub(crate) fn act_in_place(&self, g: GroupElement, v: &mut [FieldElement]) {
        let l = &self.layout;
        let f = &*self.field;
        if g.eps {
            for i in 0..l.r {
                v.swap(l.x(i), l.y(i));
            }
            for j in 0..l.s {
                v.swap(l.z(j), l.w(j));
            }
        }
        if g.j != 0 {
            for (i, &w) in self.spec.weights.iter().enumerate() {
                let shift = g.j as i64 * w as i64;
                v[l.x(i)] = f.mul(f.lambda_pow(-shift), v[l.x(i)]);
                v[l.y(i)] = f.mul(f.lambda_pow(shift), v[l.y(i)]);
            }
        }
    }

    /// Left action on polynomials, `g(f) = f o g^{-1}`: `rho(x_i) =
    /// lambda^{m_i} x_i`, `rho(y_i) = lambda^{-m_i} y_i`, `sigma` swaps.
    pub fn act_on_polynomial(
        &self,
        g: GroupElement,
        f: &Polynomial,
    ) -> Result<Polynomial, RepError> {
        if f.nvars() != self.layout.nvars() {
            return Err(RepError::Shape {
                expected: self.layout.nvars(),
                got: f.nvars(),
            });
        }
        let field = &*self.field;
        let mut out = Polynomial::zero(f.nvars());
        for (m, c) in f.terms() {
            let image = if g.eps {
                m.sigma_image(&self.layout)
            } else {
                m.clone()
            };
            let chi = rho_character(&image, &self.spec) as i64;
            let scale = field.lambda_pow(g.j as i64 * chi);
            out.add_term(image, field.mul(scale, c));
        }
        Ok(out)
    }

    /// Fixed by both generators, hence by the whole group.
    pub fn is_invariant(&self, f: &Polynomial) -> Result<bool, RepError> {
        Ok(&self.act_on_polynomial(GroupElement::rho(), f)? == f
            && &self.act_on_polynomial(GroupElement::sigma(), f)? == f)
    }

    /// The orbit `{g v}`, deduplicated and sorted lexicographically.
    pub fn orbit_of_point(&self, v: &Point) -> Result<Vec<Point>, RepError> {
        self.check_point(v)?;
        let mut orbit: Vec<Point> = GroupElement::all(self.p())
            .map(|g| {
                let mut w = v.clone();
                self.act_in_place(g, &mut w.0);
                w
            })
            .collect();
        orbit.sort();
        orbit.dedup();
        Ok(orbit)
    }

    /// Lexicographically smallest point of the orbit.
    pub(crate) fn orbit_min(&self, v: &[FieldElement]) -> Vec<FieldElement> {
        let mut best = v.to_vec();
        let mut w = v.to_vec();
        for g in GroupElement::all(self.p()).skip(1) {
            w.copy_from_slice(v);
            self.act_in_place(g, &mut w);
            if w < best {
                best.copy_from_slice(&w);
            }
        }
        best
    }

    /// Matrices of `rho` and `sigma` in the point coordinates; `M(g) v =
    /// act_on_point(g, v)`.
    pub fn matrices(&self) -> MatrixRep {
        let n = self.dimension();
        let l = &self.layout;
        let f = &*self.field;
        let mut rho = Matrix::identity(n);
        let mut sigma = Matrix::zeros(n, n);
        for (i, &w) in self.spec.weights.iter().enumerate() {
            rho[(l.x(i), l.x(i))] = f.lambda_pow(-(w as i64));
            rho[(l.y(i), l.y(i))] = f.lambda_pow(w as i64);
        }
        for idx in 0..n {
            sigma[(l.sigma_var(idx), idx)] = FieldElement::ONE;
        }
        MatrixRep { rho, sigma }
    }
}

/// An indecomposable `D_2p`-module.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Indecomposable {
    /// `W_i`, with `W_0` the swap module.
    W(u32),
    Trivial,
}

impl fmt::Display for Indecomposable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Indecomposable::W(i) => write!(f, "W_{i}"),
            Indecomposable::Trivial => write!(f, "trivial"),
        }
    }
}

/// Multiset of indecomposable summands.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Decomposition(BTreeMap<Indecomposable, usize>);

impl Decomposition {
    pub fn insert(&mut self, label: Indecomposable, count: usize) {
        if count > 0 {
            *self.0.entry(label).or_default() += count;
        }
    }

    pub fn multiplicity(&self, label: Indecomposable) -> usize {
        self.0.get(&label).copied().unwrap_or(0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (Indecomposable, usize)> + '_ {
        self.0.iter().map(|(&k, &v)| (k, v))
    }

    pub fn dimension(&self) -> usize {
        self.iter()
            .map(|(l, n)| match l {
                Indecomposable::W(_) => 2 * n,
                Indecomposable::Trivial => n,
            })
            .sum()
    }

    /// `{"W_0": 1, "W_1": 2, "trivial": 0}`-style map with string keys.
    pub fn to_labels(&self) -> BTreeMap<String, usize> {
        self.iter().map(|(l, n)| (l.to_string(), n)).collect()
    }
}

impl Serialize for Decomposition {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeMap;
        let mut map = serializer.serialize_map(Some(self.0.len()))?;
        for (l, n) in self.iter() {
            map.serialize_entry(&l.to_string(), &n)?;
        }
        map.end()
    }
}

impl fmt::Display for Decomposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.iter().map(|(l, n)| format!("{l}:{n}")).collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

/// Matrices of the generators `rho` and `sigma`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatrixRep {
    pub rho: Matrix,
    pub sigma: Matrix,
}

#[derive(Serialize, Deserialize)]
struct MatrixRepFile {
    field: FieldParams,
    rho: Vec<Vec<u64>>,
    sigma: Vec<Vec<u64>>,
}

impl MatrixRep {
    pub fn size(&self) -> usize {
        self.rho.rows()
    }

    /// `rho^p = 1`, `sigma^2 = 1` and `sigma rho sigma = rho^{-1}`.
    pub fn validate(&self, field: &Field) -> Result<(), RepError> {
        let n = self.rho.rows();
        if !self.rho.is_square() || !self.sigma.is_square() || self.sigma.rows() != n {
            return Err(RepError::InvalidRepresentation(
                "rho and sigma must be square matrices of equal size".into(),
            ));
        }
        let id = Matrix::identity(n);
        if self.rho.pow(field.p() as u64, field) != id {
            return Err(RepError::InvalidRepresentation(format!(
                "relation rho^{} = 1 fails",
                field.p()
            )));
        }
        if self.sigma.mul(&self.sigma, field) != id {
            return Err(RepError::InvalidRepresentation(
                "relation sigma^2 = 1 fails".into(),
            ));
        }
        let srs = self.sigma.mul(&self.rho, field).mul(&self.sigma, field);
        if srs.mul(&self.rho, field) != id {
            return Err(RepError::InvalidRepresentation(
                "relation sigma rho sigma = rho^-1 fails".into(),
            ));
        }
        Ok(())
    }

    /// `P^{-1} M P` for both generators.
    pub fn conjugate(&self, p: &Matrix, field: &Field) -> Option<Self> {
        let inv = p.inverse(field)?;
        Some(Self {
            rho: inv.mul(&self.rho, field).mul(p, field),
            sigma: inv.mul(&self.sigma, field).mul(p, field),
        })
    }

    pub fn to_json(&self, field: &Field) -> String {
        let enc = |m: &Matrix| {
            m.to_rows()
                .into_iter()
                .map(|r| r.into_iter().map(|e| e.bits() as u64).collect())
                .collect()
        };
        let file = MatrixRepFile {
            field: field.params().clone(),
            rho: enc(&self.rho),
            sigma: enc(&self.sigma),
        };
        serde_json::to_string(&file).expect("plain data serializes")
    }

    /// Parses `{"field": {...}, "rho": [[..]], "sigma": [[..]]}` and rebuilds
    /// the field from its parameters. Relations are not checked here.
    pub fn from_json(json: &str) -> Result<(Self, Field), RepError> {
        let file: MatrixRepFile =
            serde_json::from_str(json).map_err(|e| RepError::Parse(e.to_string()))?;
        let field = Field::from_params(&file.field)?;
        let dec = |rows: Vec<Vec<u64>>, name: &str| -> Result<Matrix, RepError> {
            let rows = rows
                .into_iter()
                .map(|r| r.into_iter().map(|b| field.element(b)).collect())
                .collect::<Result<Vec<Vec<_>>, _>>()?;
            Matrix::from_rows(rows)
                .ok_or_else(|| RepError::Parse(format!("{name} has rows of unequal length")))
        };
        let rho = dec(file.rho, "rho")?;
        let sigma = dec(file.sigma, "sigma")?;
        Ok((Self { rho, sigma }, field))
    }
}

/// The regular representation `F[D_2p]`: left multiplication on the basis of
/// group elements, indexed `j + p * eps`.
pub fn regular_representation(field: &Field) -> MatrixRep {
    let p = field.p();
    let n = 2 * p as usize;
    let index = |g: GroupElement| g.j as usize + if g.eps { p as usize } else { 0 };
    let left_mult = |h: GroupElement| {
        let mut m = Matrix::zeros(n, n);
        for g in GroupElement::all(p) {
            m[(index(h.compose(g, p)), index(g))] = FieldElement::ONE;
        }
        m
    };
    MatrixRep {
        rho: left_mult(GroupElement::rho()),
        sigma: left_mult(GroupElement::sigma()),
    }
}

/// Splits a representation into indecomposables.
///
/// The eigenprojector `pi_k = sum_j lambda^{-kj} rho^j` (the usual `1/p`
/// factor is `1` in characteristic two) has image `Eig(rho, lambda^k)`.
/// `sigma` identifies `Eig(lambda^k)` with `Eig(lambda^{-k})`, so `W_i` occurs
/// `dim Eig(lambda^i)` times for `1 <= i <= (p-1)/2`. On `Eig(rho, 1)` the
/// involution `sigma = 1 + N` has `N^2 = 0`; each Jordan block of size two is
/// a `W_0` and the remainder is trivial.
pub fn decompose(rep: &MatrixRep, field: &Field) -> Result<Decomposition, RepError> {
    rep.validate(field)?;
    let p = field.p();
    let n = rep.size();
    let mut powers = Vec::with_capacity(p as usize);
    let mut acc = Matrix::identity(n);
    for _ in 0..p {
        powers.push(acc.clone());
        acc = acc.mul(&rep.rho, field);
    }
    let projector = |k: u32| {
        powers
            .iter()
            .enumerate()
            .fold(Matrix::zeros(n, n), |sum, (j, pw)| {
                let c = field.lambda_pow(-(k as i64) * j as i64);
                sum.add(&pw.scale(c, field), field)
            })
    };

    let mut out = Decomposition::default();
    let mut total = 0;
    for i in 1..=(p - 1) / 2 {
        let up = projector(i).rank(field);
        let down = projector(p - i).rank(field);
        if up != down {
            return Err(RepError::InvalidRepresentation(format!(
                "eigenspaces for lambda^{i} and lambda^-{i} differ in dimension"
            )));
        }
        out.insert(Indecomposable::W(i), up);
        total += 2 * up;
    }

    let fixed_basis = projector(0).column_space(field);
    let d = fixed_basis.cols();
    let n_part = rep.sigma.add(&Matrix::identity(n), field);
    let jordan_pairs = n_part.mul(&fixed_basis, field).rank(field);
    out.insert(Indecomposable::W(0), jordan_pairs);
    out.insert(Indecomposable::Trivial, d - 2 * jordan_pairs);
    total += d;
    if total != n {
        return Err(RepError::InvalidRepresentation(format!(
            "eigenspaces of rho span dimension {total}, expected {n}"
        )));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn module(p: u32, weights: Vec<u32>, s: usize, t: usize) -> DihedralModule {
        DihedralModule::with_default_field(ModuleSpec::new(p, weights, s, t)).unwrap()
    }

    #[test]
    fn spec_validation_names_violation() {
        let err = ModuleSpec::new(4, vec![1], 0, 0).validate().unwrap_err();
        assert!(err.to_string().contains("odd"));
        let err = ModuleSpec::new(7, vec![1, 4], 0, 0).validate().unwrap_err();
        assert!(err.to_string().contains("m_2 = 4"), "{err}");
        let err = ModuleSpec::new(7, vec![0], 0, 0).validate().unwrap_err();
        assert!(err.to_string().contains("m_1"));
    }

    #[test]
    fn spec_properties() {
        let spec = ModuleSpec::from_json(r#"{"p":7,"weights":[1,2],"s":1,"t":0}"#).unwrap();
        assert_eq!(spec.dimension(), 6);
        assert!(spec.is_reduced());
        assert!(spec.is_faithful());
        let spec = ModuleSpec::new(9, vec![3], 0, 2);
        assert!(!spec.is_faithful());
        assert!(!spec.is_reduced());
        assert_eq!(spec.dimension(), 4);
    }

    #[test]
    fn group_law() {
        for p in [3u32, 5, 7] {
            let elems: Vec<_> = GroupElement::all(p).collect();
            assert_eq!(elems.len(), 2 * p as usize);
            let r = GroupElement::rho();
            let s = GroupElement::sigma();
            assert_eq!(
                s.compose(r, p).compose(s, p),
                r.inverse(p),
                "sigma rho sigma = rho^-1"
            );
            for &g in &elems {
                assert_eq!(g.compose(g.inverse(p), p), GroupElement::IDENTITY);
                for &h in &elems {
                    for &k in &elems {
                        assert_eq!(g.compose(h, p).compose(k, p), g.compose(h.compose(k, p), p));
                    }
                }
            }
        }
    }

    #[test]
    fn sigma_swaps_coordinates() {
        let m = module(3, vec![1], 1, 0);
        let v = Point::from_bits(&[0, 1, 1, 0]);
        let w = m.act_on_point(GroupElement::sigma(), &v).unwrap();
        assert_eq!(w, Point::from_bits(&[1, 0, 0, 1]));
        assert_eq!(m.act_on_point(GroupElement::IDENTITY, &v).unwrap(), v);
    }

    #[test]
    fn rho_scales_coordinates() {
        let m = module(3, vec![1], 1, 0);
        let f = m.field();
        let lam = f.lambda();
        let v = Point::from_bits(&[1, 1, 2, 3]);
        let w = m.act_on_point(GroupElement::rho(), &v).unwrap();
        // lambda^{-1} = lambda^2 for p = 3
        assert_eq!(w[0], f.mul(lam, lam));
        assert_eq!(w[1], lam);
        assert_eq!(&w[2..], &v[2..]);
    }

    #[test]
    fn shape_errors() {
        let m = module(3, vec![1], 1, 0);
        assert!(matches!(
            m.act_on_point(GroupElement::rho(), &Point::zero(3)),
            Err(RepError::Shape {
                expected: 4,
                got: 3
            })
        ));
        assert!(m
            .act_on_polynomial(GroupElement::rho(), &Polynomial::one(2))
            .is_err());
        assert!(m.orbit_of_point(&Point::zero(5)).is_err());
    }

    #[test]
    fn action_composes() {
        let m = module(5, vec![1, 2], 1, 1);
        let v = Point::from_bits(&[3, 7, 11, 0, 5, 9, 14]);
        let p = m.p();
        for g in GroupElement::all(p) {
            for h in GroupElement::all(p) {
                let gh = m.act_on_point(g.compose(h, p), &v).unwrap();
                let g_h = m.act_on_point(g, &m.act_on_point(h, &v).unwrap()).unwrap();
                assert_eq!(gh, g_h, "g={g} h={h}");
            }
        }
    }

    #[test]
    fn polynomial_action_examples() {
        let m = module(3, vec![1], 0, 0);
        let f = m.field();
        let l = *m.layout();
        let x = Polynomial::variable(l.x(0), 2);
        let y = Polynomial::variable(l.y(0), 2);
        let xy = x.mul(&y, f).unwrap();
        assert_eq!(m.act_on_polynomial(GroupElement::sigma(), &xy).unwrap(), xy);
        let x3 = x.mul(&x, f).unwrap().mul(&x, f).unwrap();
        assert_eq!(m.act_on_polynomial(GroupElement::rho(), &x3).unwrap(), x3);
        assert_eq!(
            m.act_on_polynomial(GroupElement::rho(), &x).unwrap(),
            x.scale(f.lambda(), f)
        );
    }

    // Oracle: enumerate the 6 group elements by hand-rolled coordinate maps.
    #[test]
    fn orbit_examples() {
        let m = module(3, vec![1], 1, 0);
        assert_eq!(m.orbit_of_point(&Point::zero(4)).unwrap().len(), 1);
        let orbit = m.orbit_of_point(&Point::from_bits(&[0, 1, 1, 0])).unwrap();
        assert_eq!(orbit.len(), 6);
        let fixed = Point::from_bits(&[1, 1, 0, 0]);
        assert_eq!(
            m.act_on_point(GroupElement::sigma(), &fixed).unwrap(),
            fixed
        );
        assert_eq!(m.orbit_of_point(&fixed).unwrap().len(), 3);
        let orbit = m.orbit_of_point(&fixed).unwrap();
        assert!(orbit.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn matrices_match_point_action() {
        let m = module(7, vec![1, 3], 1, 1);
        let rep = m.matrices();
        let f = m.field();
        rep.validate(f).unwrap();
        let v = Point::from_bits(&[1, 2, 3, 4, 5, 6, 7]);
        let image = rep.rho.mul_vec(&v, f);
        assert_eq!(
            Point(image),
            m.act_on_point(GroupElement::rho(), &v).unwrap()
        );
        let image = rep.sigma.mul_vec(&v, f);
        assert_eq!(
            Point(image),
            m.act_on_point(GroupElement::sigma(), &v).unwrap()
        );
    }

    #[test]
    fn regular_representation_is_valid() {
        for p in [3, 5, 7] {
            let f = Field::for_p(p).unwrap();
            let rep = regular_representation(&f);
            assert_eq!(rep.size(), 2 * p as usize);
            rep.validate(&f).unwrap();
            assert_ne!(rep.rho, Matrix::identity(rep.size()));
            for i in 0..rep.size() {
                assert!(rep.sigma[(i, i)].is_zero(), "sigma fixes no basis vector");
            }
        }
    }

    #[test]
    fn decompose_examples() {
        let f = Field::for_p(3).unwrap();
        let reg = decompose(&regular_representation(&f), &f).unwrap();
        assert_eq!(reg.to_string(), "{W_0:1, W_1:2}");
        let id = MatrixRep {
            rho: Matrix::identity(2),
            sigma: Matrix::identity(2),
        };
        assert_eq!(decompose(&id, &f).unwrap().to_string(), "{trivial:2}");
        let m = module(3, vec![1], 1, 0);
        assert_eq!(
            decompose(&m.matrices(), m.field()).unwrap(),
            m.spec().summands()
        );
    }

    #[test]
    fn decompose_rejects_broken_relations() {
        let f = Field::for_p(3).unwrap();
        let mut rep = module(3, vec![1], 0, 0).matrices();
        rep.sigma = Matrix::identity(2);
        let err = decompose(&rep, &f).unwrap_err();
        assert!(err.to_string().contains("sigma rho sigma"), "{err}");
        let bad = MatrixRep {
            rho: Matrix::from_rows(vec![
                vec![FieldElement::ONE, FieldElement::ONE],
                vec![FieldElement::ZERO, FieldElement::ONE],
            ])
            .unwrap(),
            sigma: Matrix::identity(2),
        };
        assert!(decompose(&bad, &f)
            .unwrap_err()
            .to_string()
            .contains("rho^3"));
    }

    #[test]
    fn json_round_trip() {
        let f = Field::for_p(5).unwrap();
        let rep = regular_representation(&f);
        let (back, f2) = MatrixRep::from_json(&rep.to_json(&f)).unwrap();
        assert_eq!(back, rep);
        assert_eq!(f2, f);
        assert!(MatrixRep::from_json("{}").is_err());
    }
}
