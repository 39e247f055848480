//! Sparse multivariate polynomials over GF(2^m).
//!
//! Variables follow the layout `x_1..x_r, y_1..y_r, z_1..z_s, w_1..w_s,
//! e_1..e_t`. Monomials are ordered degree-lexicographically with that
//! variable order, and every printed polynomial lists its terms in
//! descending order.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::gf2m::{parse_encoding, Field, FieldElement};
use crate::rep::ModuleSpec;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolyError {
    #[error("shape mismatch: expected {expected} variables, got {got}")]
    Shape { expected: usize, got: usize },
    #[error("cannot parse polynomial: {0}")]
    Parse(String),
}

/// Number of variables of each kind.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct VariableLayout {
    pub r: usize,
    pub s: usize,
    pub t: usize,
}

/// The five kinds of coordinate function.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum VarKind {
    X,
    Y,
    Z,
    W,
    E,
}

impl VarKind {
    fn letter(self) -> char {
        match self {
            VarKind::X => 'x',
            VarKind::Y => 'y',
            VarKind::Z => 'z',
            VarKind::W => 'w',
            VarKind::E => 'e',
        }
    }
}

impl VariableLayout {
    pub fn new(r: usize, s: usize, t: usize) -> Self {
        Self { r, s, t }
    }

    pub fn nvars(&self) -> usize {
        2 * self.r + 2 * self.s + self.t
    }

    pub fn x(&self, i: usize) -> usize {
        debug_assert!(i < self.r);
        i
    }

    pub fn y(&self, i: usize) -> usize {
        debug_assert!(i < self.r);
        self.r + i
    }

    pub fn z(&self, j: usize) -> usize {
        debug_assert!(j < self.s);
        2 * self.r + j
    }

    pub fn w(&self, j: usize) -> usize {
        debug_assert!(j < self.s);
        2 * self.r + self.s + j
    }

    pub fn e(&self, k: usize) -> usize {
        debug_assert!(k < self.t);
        2 * self.r + 2 * self.s + k
    }

    fn count(&self, kind: VarKind) -> usize {
        match kind {
            VarKind::X | VarKind::Y => self.r,
            VarKind::Z | VarKind::W => self.s,
            VarKind::E => self.t,
        }
    }

    /// Kind and zero-based block index of variable `idx`.
    pub fn classify(&self, idx: usize) -> (VarKind, usize) {
        let (r, s) = (self.r, self.s);
        if idx < r {
            (VarKind::X, idx)
        } else if idx < 2 * r {
            (VarKind::Y, idx - r)
        } else if idx < 2 * r + s {
            (VarKind::Z, idx - 2 * r)
        } else if idx < 2 * r + 2 * s {
            (VarKind::W, idx - 2 * r - s)
        } else {
            (VarKind::E, idx - 2 * r - 2 * s)
        }
    }

    fn index_of(&self, kind: VarKind, i: usize) -> usize {
        match kind {
            VarKind::X => self.x(i),
            VarKind::Y => self.y(i),
            VarKind::Z => self.z(i),
            VarKind::W => self.w(i),
            VarKind::E => self.e(i),
        }
    }

    /// Image of a variable index under `sigma`.
    pub fn sigma_var(&self, idx: usize) -> usize {
        match self.classify(idx) {
            (VarKind::X, i) => self.y(i),
            (VarKind::Y, i) => self.x(i),
            (VarKind::Z, j) => self.w(j),
            (VarKind::W, j) => self.z(j),
            (VarKind::E, _) => idx,
        }
    }

    pub fn var_name(&self, idx: usize) -> String {
        let (kind, i) = self.classify(idx);
        format!("{}{}", kind.letter(), i + 1)
    }

    /// Resolves `x3`, `w1`, ... to a variable index. A bare letter is accepted
    /// when its block has exactly one variable.
    pub fn parse_var(&self, name: &str) -> Option<usize> {
        let mut chars = name.chars();
        let kind = match chars.next()? {
            'x' => VarKind::X,
            'y' => VarKind::Y,
            'z' => VarKind::Z,
            'w' => VarKind::W,
            'e' => VarKind::E,
            _ => return None,
        };
        let rest = chars.as_str();
        let one_based = if rest.is_empty() {
            (self.count(kind) == 1).then_some(1)?
        } else {
            rest.parse::<usize>().ok()?
        };
        if one_based == 0 || one_based > self.count(kind) {
            return None;
        }
        Some(self.index_of(kind, one_based - 1))
    }

    /// Block id of a variable for locality scans: `x_i`/`y_i` share block
    /// `i`, `z_j`/`w_j` share block `r + j`, and `e_k` is block `r + s + k`.
    pub fn summand_of(&self, idx: usize) -> usize {
        match self.classify(idx) {
            (VarKind::X | VarKind::Y, i) => i,
            (VarKind::Z | VarKind::W, j) => self.r + j,
            (VarKind::E, k) => self.r + self.s + k,
        }
    }

    pub fn format_monomial(&self, m: &Monomial) -> String {
        let factors: Vec<String> = m
            .exponents()
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(i, &e)| {
                if e == 1 {
                    self.var_name(i)
                } else {
                    format!("{}^{}", self.var_name(i), e)
                }
            })
            .collect();
        if factors.is_empty() {
            "1".into()
        } else {
            factors.join("*")
        }
    }
}

/// Exponent vector. The derived ordering is degree-lexicographic: total
/// degree first, then the first differing exponent in variable order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial {
    degree: u32,
    exps: Vec<u32>,
}

impl Monomial {
    pub fn new(exps: Vec<u32>) -> Self {
        Self {
            degree: exps.iter().sum(),
            exps,
        }
    }

    pub fn one(nvars: usize) -> Self {
        Self::new(vec![0; nvars])
    }

    pub fn variable(idx: usize, nvars: usize) -> Self {
        let mut exps = vec![0; nvars];
        exps[idx] = 1;
        Self { degree: 1, exps }
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn nvars(&self) -> usize {
        self.exps.len()
    }

    pub fn exponents(&self) -> &[u32] {
        &self.exps
    }

    pub fn exponent(&self, idx: usize) -> u32 {
        self.exps[idx]
    }

    pub fn mul(&self, other: &Self) -> Self {
        debug_assert_eq!(self.exps.len(), other.exps.len());
        Self {
            degree: self.degree + other.degree,
            exps: self
                .exps
                .iter()
                .zip(&other.exps)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn divides(&self, other: &Self) -> bool {
        self.exps.iter().zip(&other.exps).all(|(a, b)| a <= b)
    }

    /// `other / self`, if `self` divides `other`.
    pub fn quotient_of(&self, other: &Self) -> Option<Self> {
        self.divides(other).then(|| Self {
            degree: other.degree - self.degree,
            exps: other
                .exps
                .iter()
                .zip(&self.exps)
                .map(|(b, a)| b - a)
                .collect(),
        })
    }

    /// Swaps the `x_i`/`y_i` and `z_j`/`w_j` exponents.
    pub fn sigma_image(&self, layout: &VariableLayout) -> Self {
        let mut exps = vec![0; self.exps.len()];
        for (idx, &e) in self.exps.iter().enumerate() {
            exps[layout.sigma_var(idx)] = e;
        }
        Self {
            degree: self.degree,
            exps,
        }
    }

    pub fn is_sigma_fixed(&self, layout: &VariableLayout) -> bool {
        (0..layout.r).all(|i| self.exps[layout.x(i)] == self.exps[layout.y(i)])
            && (0..layout.s).all(|j| self.exps[layout.z(j)] == self.exps[layout.w(j)])
    }
}

/// Residue `sum_i m_i (a_i - b_i) mod p` by which `rho` scales the monomial
/// (as a power of `lambda`). Zero iff the monomial is `rho`-invariant.
pub fn rho_character(m: &Monomial, spec: &ModuleSpec) -> u32 {
    let p = spec.p as i64;
    let r = spec.weights.len();
    let total: i64 = spec
        .weights
        .iter()
        .enumerate()
        .map(|(i, &w)| w as i64 * (m.exps[i] as i64 - m.exps[r + i] as i64))
        .sum();
    total.rem_euclid(p) as u32
}

/// Sparse polynomial: monomial to nonzero coefficient.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Polynomial {
    nvars: usize,
    terms: BTreeMap<Monomial, FieldElement>,
}

impl Polynomial {
    pub fn zero(nvars: usize) -> Self {
        Self {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(nvars: usize) -> Self {
        Self::from_monomial(Monomial::one(nvars))
    }

    pub fn constant(c: FieldElement, nvars: usize) -> Self {
        Self::term(c, Monomial::one(nvars))
    }

    pub fn variable(idx: usize, nvars: usize) -> Self {
        Self::from_monomial(Monomial::variable(idx, nvars))
    }

    pub fn from_monomial(m: Monomial) -> Self {
        Self::term(FieldElement::ONE, m)
    }

    pub fn term(c: FieldElement, m: Monomial) -> Self {
        let mut f = Self::zero(m.nvars());
        if !c.is_zero() {
            f.terms.insert(m, c);
        }
        f
    }

    /// Sum of monomials, cancelling repeats in pairs.
    pub fn from_monomials(nvars: usize, monomials: impl IntoIterator<Item = Monomial>) -> Self {
        let mut f = Self::zero(nvars);
        for m in monomials {
            f.add_term(m, FieldElement::ONE);
        }
        f
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in descending deglex order.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, FieldElement)> {
        self.terms.iter().rev().map(|(m, &c)| (m, c))
    }

    pub fn coefficient(&self, m: &Monomial) -> FieldElement {
        self.terms.get(m).copied().unwrap_or_default()
    }

    pub fn leading_term(&self) -> Option<(&Monomial, FieldElement)> {
        self.terms.iter().next_back().map(|(m, &c)| (m, c))
    }

    pub fn degree(&self) -> Option<u32> {
        self.leading_term().map(|(m, _)| m.degree())
    }

    /// The common degree of all terms, if the polynomial is nonzero and
    /// homogeneous.
    pub fn homogeneous_degree(&self) -> Option<u32> {
        let d = self.degree()?;
        self.terms.keys().all(|m| m.degree() == d).then_some(d)
    }

    pub fn add_term(&mut self, m: Monomial, c: FieldElement) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                let sum = FieldElement::from_bits_unchecked(o.get().bits() ^ c.bits());
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    fn check_shape(&self, other: &Self) -> Result<(), PolyError> {
        if self.nvars != other.nvars {
            return Err(PolyError::Shape {
                expected: self.nvars,
                got: other.nvars,
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self, PolyError> {
        self.check_shape(other)?;
        let mut out = self.clone();
        out.add_assign(other);
        Ok(out)
    }

    /// In-place sum; both operands must share a layout.
    pub fn add_assign(&mut self, other: &Self) {
        debug_assert_eq!(self.nvars, other.nvars);
        for (m, &c) in &other.terms {
            self.add_term(m.clone(), c);
        }
    }

    pub fn mul(&self, other: &Self, field: &Field) -> Result<Self, PolyError> {
        self.check_shape(other)?;
        Ok(self.mul_unchecked(other, field))
    }

    pub(crate) fn mul_unchecked(&self, other: &Self, field: &Field) -> Self {
        let mut out = Self::zero(self.nvars);
        for (ma, &ca) in &self.terms {
            for (mb, &cb) in &other.terms {
                out.add_term(ma.mul(mb), field.mul(ca, cb));
            }
        }
        out
    }

    pub fn mul_monomial(&self, m: &Monomial) -> Self {
        Self {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(k, &c)| (k.mul(m), c)).collect(),
        }
    }

    pub fn scale(&self, c: FieldElement, field: &Field) -> Self {
        if c.is_zero() {
            return Self::zero(self.nvars);
        }
        Self {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(m, &a)| (m.clone(), field.mul(c, a)))
                .collect(),
        }
    }

    /// Applies a coefficient-preserving monomial map (e.g. `sigma`), merging
    /// collisions.
    pub fn map_monomials(&self, mut f: impl FnMut(&Monomial) -> Monomial) -> Self {
        let mut out = Self::zero(self.nvars);
        for (m, &c) in &self.terms {
            out.add_term(f(m), c);
        }
        out
    }

    pub fn eval(&self, point: &[FieldElement], field: &Field) -> Result<FieldElement, PolyError> {
        if point.len() != self.nvars {
            return Err(PolyError::Shape {
                expected: self.nvars,
                got: point.len(),
            });
        }
        Ok(self.eval_unchecked(point, field))
    }

    pub(crate) fn eval_unchecked(&self, point: &[FieldElement], field: &Field) -> FieldElement {
        let mut acc = FieldElement::ZERO;
        for (m, &c) in &self.terms {
            let mut v = c;
            for (&x, &e) in point.iter().zip(&m.exps) {
                if e > 0 {
                    v = field.mul(v, field.pow(x, e as u64));
                    if v.is_zero() {
                        break;
                    }
                }
            }
            acc = field.add(acc, v);
        }
        acc
    }

    /// Indices of variables occurring in some term.
    pub fn support_variables(&self) -> Vec<usize> {
        let mut used = vec![false; self.nvars];
        for m in self.terms.keys() {
            for (i, &e) in m.exps.iter().enumerate() {
                used[i] |= e > 0;
            }
        }
        (0..self.nvars).filter(|&i| used[i]).collect()
    }

    pub fn display<'a>(&'a self, layout: &'a VariableLayout) -> DisplayPolynomial<'a> {
        DisplayPolynomial { poly: self, layout }
    }
}

/// Text rendering, e.g. `x1^3 + y1^3 + 2*z1`.
pub struct DisplayPolynomial<'a> {
    poly: &'a Polynomial,
    layout: &'a VariableLayout,
}

impl fmt::Display for DisplayPolynomial<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.poly.is_zero() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.poly.terms().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            let mono = self.layout.format_monomial(m);
            match (c == FieldElement::ONE, m.degree() == 0) {
                (true, _) => write!(f, "{mono}")?,
                (false, true) => write!(f, "{c}")?,
                (false, false) => write!(f, "{c}*{mono}")?,
            }
        }
        Ok(())
    }
}

/// Parses the text format produced by [`Polynomial::display`]. Coefficients
/// are decimal or hex encodings and may appear as any factor of a term.
pub fn parse_polynomial(
    text: &str,
    layout: &VariableLayout,
    field: &Field,
) -> Result<Polynomial, PolyError> {
    let nvars = layout.nvars();
    let mut out = Polynomial::zero(nvars);
    let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    if compact.is_empty() {
        return Err(PolyError::Parse("empty input".into()));
    }
    for term in compact.split('+') {
        if term.is_empty() {
            return Err(PolyError::Parse(format!("empty term in {text:?}")));
        }
        let mut coef = FieldElement::ONE;
        let mut exps = vec![0u32; nvars];
        for factor in term.split('*') {
            if factor.starts_with(|c: char| c.is_ascii_digit()) {
                let c = parse_encoding(factor)
                    .and_then(|b| field.element(b))
                    .map_err(|e| PolyError::Parse(e.to_string()))?;
                coef = field.mul(coef, c);
                continue;
            }
            let (name, exp) = match factor.split_once('^') {
                Some((n, e)) => (
                    n,
                    e.parse::<u32>()
                        .map_err(|_| PolyError::Parse(format!("bad exponent in {factor:?}")))?,
                ),
                None => (factor, 1),
            };
            let idx = layout
                .parse_var(name)
                .ok_or_else(|| PolyError::Parse(format!("unknown variable {name:?}")))?;
            exps[idx] += exp;
        }
        out.add_term(Monomial::new(exps), coef);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf4() -> Field {
        Field::for_p(3).unwrap()
    }

    // x, y in a single W block
    fn xy_layout() -> VariableLayout {
        VariableLayout::new(1, 0, 0)
    }

    #[test]
    fn characteristic_two_ring_identities() {
        let f = gf4();
        let l = xy_layout();
        let x = Polynomial::variable(l.x(0), 2);
        let y = Polynomial::variable(l.y(0), 2);
        let s = x.add(&y).unwrap();
        assert!(s.add(&s).unwrap().is_zero());
        let sq = s.mul(&s, &f).unwrap();
        assert_eq!(sq.display(&l).to_string(), "x1^2 + y1^2");
        let xy = x.mul(&y, &f).unwrap();
        assert_eq!(
            s.mul(&xy, &f).unwrap().display(&l).to_string(),
            "x1^2*y1 + x1*y1^2"
        );
    }

    #[test]
    fn shape_errors() {
        let f = gf4();
        let a = Polynomial::one(2);
        let b = Polynomial::one(3);
        assert!(matches!(a.add(&b), Err(PolyError::Shape { .. })));
        assert!(a.mul(&b, &f).is_err());
        assert!(a.eval(&[FieldElement::ONE], &f).is_err());
    }

    #[test]
    fn evaluation() {
        let f = gf4();
        let l = VariableLayout::new(1, 1, 0);
        let one = Polynomial::one(4);
        let pt = [2, 3, 1, 0].map(FieldElement::from_bits_unchecked);
        assert_eq!(one.eval(&pt, &f).unwrap(), FieldElement::ONE);
        let xy = parse_polynomial("x*y", &l, &f).unwrap();
        assert_eq!(xy.eval(&pt, &f).unwrap(), f.mul(pt[0], pt[1]));
    }

    #[test]
    fn h_separates_witness_points() {
        let f = gf4();
        let l = VariableLayout::new(1, 1, 0);
        let h = parse_polynomial("z1*x1^3 + w1*y1^3", &l, &f).unwrap();
        let v1 = [0, 1, 1, 0].map(FieldElement::from_bits_unchecked);
        let v2 = [0, 1, 0, 1].map(FieldElement::from_bits_unchecked);
        assert_eq!(h.eval(&v1, &f).unwrap(), FieldElement::ZERO);
        assert_eq!(h.eval(&v2, &f).unwrap(), FieldElement::ONE);
    }

    #[test]
    fn rho_character_values() {
        let spec = ModuleSpec::new(3, vec![1], 1, 0);
        let l = spec.layout();
        let m = |s: &str| {
            parse_polynomial(s, &l, &gf4())
                .unwrap()
                .leading_term()
                .unwrap()
                .0
                .clone()
        };
        assert_eq!(rho_character(&m("x1^3"), &spec), 0);
        // 2*1 - 1*1 = 1
        assert_eq!(rho_character(&m("x1^2*y1"), &spec), 1);
        assert_eq!(rho_character(&m("x1*y1*z1^2*w1"), &spec), 0);
        assert_eq!(rho_character(&m("x1^2*z1"), &spec), 2);
    }

    #[test]
    fn sigma_image_swaps_pairs() {
        let l = VariableLayout::new(1, 1, 1);
        let m = Monomial::new(vec![2, 0, 1, 0, 3]);
        let s = m.sigma_image(&l);
        assert_eq!(s.exponents(), &[0, 2, 0, 1, 3]);
        assert_eq!(s.sigma_image(&l), m);
        let xy = Monomial::new(vec![1, 1, 0, 0, 0]);
        assert_eq!(xy.sigma_image(&l), xy);
        assert!(xy.is_sigma_fixed(&l));
        assert!(!m.is_sigma_fixed(&l));
    }

    #[test]
    fn deglex_order() {
        let a = Monomial::new(vec![3, 0]); // x^3
        let b = Monomial::new(vec![0, 3]); // y^3
        let c = Monomial::new(vec![1, 1]); // xy
        assert!(a > b && b > c);
        assert!(Monomial::new(vec![2, 1]) > Monomial::new(vec![1, 2]));
    }

    #[test]
    fn text_format_round_trip() {
        let f = Field::for_p(5).unwrap();
        let l = VariableLayout::new(2, 1, 1);
        let src = "  3 * x2 ^2*y1 + x1*x1 + 0xf + e1 + 7*z1*w1 + e1 ";
        let p = parse_polynomial(src, &l, &f).unwrap();
        let printed = p.display(&l).to_string();
        assert_eq!(printed, "3*x2^2*y1 + x1^2 + 7*z1*w1 + 15");
        assert_eq!(parse_polynomial(&printed, &l, &f).unwrap(), p);
        assert_eq!(parse_polynomial("0", &l, &f).unwrap(), Polynomial::zero(7));
    }

    #[test]
    fn parser_rejects_garbage() {
        let f = gf4();
        let l = xy_layout();
        for bad in ["", "x1 +", "q1", "x2", "x^a", "99*x", "x0"] {
            assert!(parse_polynomial(bad, &l, &f).is_err(), "{bad:?}");
        }
    }
}
