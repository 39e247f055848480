//! Exact arithmetic in GF(2^m).
//!
//! Elements use the polynomial-basis encoding: bit `i` of the integer is the
//! coefficient of `x^i`. The modulus is the irreducible polynomial of degree
//! `m` with the smallest integer encoding and the distinguished root of unity
//! is the element of order `p` with the smallest encoding, so every encoding
//! produced here is reproducible across implementations.
//!
//! For `m <= 16` multiplication goes through log/antilog tables; larger
//! fields fall back to carry-less multiply and reduction.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Largest supported extension degree.
pub const MAX_DEGREE: u32 = 32;

const TABLE_MAX_DEGREE: u32 = 16;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("invalid field parameter: {0}")]
    InvalidParameter(String),
    #[error("element {bits} is not an element of GF(2^{m})")]
    IncompatibleField { bits: u64, m: u32 },
    #[error("division by zero")]
    DivisionByZero,
    #[error("zero has no multiplicative order")]
    ZeroOrder,
    #[error("cannot parse field element {0:?}")]
    Parse(String),
}

/// An element of GF(2^m) in polynomial-basis integer encoding.
#[derive(
    Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize,
)]
#[serde(transparent)]
pub struct FieldElement(u32);

impl FieldElement {
    pub const ZERO: Self = Self(0);
    pub const ONE: Self = Self(1);

    /// Wraps an encoding without checking it against a field. Prefer
    /// [`Field::element`] for untrusted input.
    pub const fn from_bits_unchecked(bits: u32) -> Self {
        Self(bits)
    }

    pub const fn bits(self) -> u32 {
        self.0
    }

    pub const fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Parses a decimal or `0x`-prefixed hexadecimal encoding.
pub fn parse_encoding(s: &str) -> Result<u64, FieldError> {
    let s = s.trim();
    let parsed = if let Some(hex) = s.strip_prefix("0x").or_else(|| s.strip_prefix("0X")) {
        u64::from_str_radix(hex, 16)
    } else {
        u64::from_str(s)
    };
    parsed.map_err(|_| FieldError::Parse(s.to_string()))
}

/// Serializable description of a field together with its root of unity.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FieldParams {
    pub p: u32,
    pub m: u32,
    pub modulus: u64,
    pub lambda: u32,
}

/// Carry-less arithmetic on polynomials over GF(2) packed into integers.
pub mod gf2poly {
    /// Degree of a nonzero polynomial.
    pub fn degree(a: u128) -> Option<u32> {
        if a == 0 {
            None
        } else {
            Some(127 - a.leading_zeros())
        }
    }

    pub fn clmul(a: u64, b: u64) -> u128 {
        let a = a as u128;
        let mut b = b;
        let mut acc = 0u128;
        let mut shift = 0;
        while b != 0 {
            if b & 1 == 1 {
                acc ^= a << shift;
            }
            b >>= 1;
            shift += 1;
        }
        acc
    }

    /// Remainder of `a` modulo the nonzero polynomial `f`.
    pub fn rem(mut a: u128, f: u64) -> u64 {
        let df = degree(f as u128).expect("modulus must be nonzero");
        let f = f as u128;
        while let Some(da) = degree(a) {
            if da < df {
                break;
            }
            a ^= f << (da - df);
        }
        a as u64
    }

    pub fn mulmod(a: u64, b: u64, f: u64) -> u64 {
        rem(clmul(a, b), f)
    }

    pub fn gcd(mut a: u64, mut b: u64) -> u64 {
        while b != 0 {
            let r = rem(a as u128, b);
            a = b;
            b = r;
        }
        a
    }

    /// Irreducibility over GF(2): `f` has no factor of degree `k <= deg/2`,
    /// checked via `gcd(f, x^(2^k) - x) = 1`.
    pub fn is_irreducible(f: u64) -> bool {
        let Some(m) = degree(f as u128) else {
            return false;
        };
        if m == 0 {
            return false;
        }
        let mut h = 0b10u64; // x
        for _ in 0..m / 2 {
            h = mulmod(h, h, f);
            if gcd(f, h ^ 0b10) != 1 {
                return false;
            }
        }
        true
    }

    /// The irreducible polynomial of degree `m` with the smallest encoding.
    pub fn smallest_irreducible(m: u32) -> u64 {
        let lo = 1u64 << m;
        (lo..lo << 1)
            .find(|&f| is_irreducible(f))
            .expect("irreducible polynomials exist in every degree")
    }
}

/// Multiplicative order of 2 modulo the odd number `p`.
pub fn order_of_two_mod(p: u32) -> u32 {
    let p = p as u64;
    let mut acc = 2 % p;
    let mut n = 1;
    while acc != 1 {
        acc = acc * 2 % p;
        n += 1;
    }
    n
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut q = 2;
    while q * q <= n {
        if n.is_multiple_of(q) {
            out.push(q);
            while n.is_multiple_of(q) {
                n /= q;
            }
        }
        q += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

fn gcd_u64(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

#[derive(Clone, Debug)]
struct LogTables {
    log: Vec<u32>,
    // Doubled so that exp[log a + log b] needs no reduction.
    exp: Vec<u32>,
}

/// GF(2^m) with a distinguished primitive `p`-th root of unity.
///
/// Immutable after construction.
#[derive(Clone, Debug)]
pub struct Field {
    params: FieldParams,
    group_order: u64,
    order_primes: Vec<u64>,
    tables: Option<LogTables>,
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        self.params == other.params
    }
}

impl Eq for Field {}

fn check_p(p: u32) -> Result<(), FieldError> {
    if p < 3 || p.is_multiple_of(2) {
        return Err(FieldError::InvalidParameter(format!(
            "p must be an odd integer >= 3, got {p}"
        )));
    }
    Ok(())
}

impl Field {
    /// The smallest field GF(2^m) containing a primitive `p`-th root of unity.
    pub fn for_p(p: u32) -> Result<Self, FieldError> {
        Self::for_p_with_multiplier(p, 1)
    }

    /// GF(2^(k*m)) with `m = ord_p(2)`, used for stress runs over larger fields.
    pub fn for_p_with_multiplier(p: u32, k: u32) -> Result<Self, FieldError> {
        check_p(p)?;
        if k == 0 {
            return Err(FieldError::InvalidParameter(
                "field multiplier must be >= 1".into(),
            ));
        }
        let m = order_of_two_mod(p)
            .checked_mul(k)
            .filter(|&m| m <= MAX_DEGREE)
            .ok_or_else(|| {
                FieldError::InvalidParameter(format!(
                    "GF(2^m) for p={p} and multiplier {k} exceeds m <= {MAX_DEGREE}"
                ))
            })?;
        let modulus = gf2poly::smallest_irreducible(m);
        let mut field = Self::skeleton(p, m, modulus);
        field.params.lambda = field.smallest_element_of_order(p as u64).0;
        Ok(field)
    }

    /// Rebuilds a field from serialized parameters, validating all of them.
    pub fn from_params(params: &FieldParams) -> Result<Self, FieldError> {
        check_p(params.p)?;
        let m = params.m;
        if m == 0 || m > MAX_DEGREE {
            return Err(FieldError::InvalidParameter(format!(
                "m must lie in 1..={MAX_DEGREE}, got {m}"
            )));
        }
        if gf2poly::degree(params.modulus as u128) != Some(m)
            || !gf2poly::is_irreducible(params.modulus)
        {
            return Err(FieldError::InvalidParameter(format!(
                "modulus {} is not an irreducible polynomial of degree {m}",
                params.modulus
            )));
        }
        if !((1u64 << m) - 1).is_multiple_of(params.p as u64) {
            return Err(FieldError::InvalidParameter(format!(
                "2^{m} - 1 is not divisible by p={}",
                params.p
            )));
        }
        let field = Self::skeleton(params.p, m, params.modulus);
        let lambda = field.element(params.lambda as u64)?;
        if lambda.is_zero() || field.element_order(lambda)? != params.p as u64 {
            return Err(FieldError::InvalidParameter(format!(
                "lambda {} does not have multiplicative order {}",
                params.lambda, params.p
            )));
        }
        Ok(Self {
            params: params.clone(),
            ..field
        })
    }

    fn skeleton(p: u32, m: u32, modulus: u64) -> Self {
        let group_order = (1u64 << m) - 1;
        let mut field = Self {
            params: FieldParams {
                p,
                m,
                modulus,
                lambda: 1,
            },
            group_order,
            order_primes: prime_factors(group_order),
            tables: None,
        };
        if m <= TABLE_MAX_DEGREE {
            field.tables = Some(field.build_tables());
        }
        field
    }

    fn build_tables(&self) -> LogTables {
        let n = self.group_order as usize;
        let generator = (1..=self.group_order)
            .map(|b| FieldElement(b as u32))
            .find(|&g| self.element_order(g).ok() == Some(self.group_order))
            .expect("multiplicative group is cyclic");
        let mut log = vec![0u32; n + 1];
        let mut exp = vec![0u32; 2 * n];
        let mut acc = 1u64;
        for (i, slot) in exp.iter_mut().take(n).enumerate() {
            *slot = acc as u32;
            log[acc as usize] = i as u32;
            acc = gf2poly::mulmod(acc, generator.0 as u64, self.params.modulus);
        }
        for i in n..2 * n {
            exp[i] = exp[i - n];
        }
        LogTables { log, exp }
    }

    fn smallest_element_of_order(&self, order: u64) -> FieldElement {
        let cofactor = self.group_order / order;
        let base = (2..=self.group_order)
            .map(|a| self.pow(FieldElement(a as u32), cofactor))
            .find(|&b| self.element_order(b).ok() == Some(order))
            .expect("cyclic group has elements of every order dividing it");
        (1..order)
            .filter(|&k| gcd_u64(k, order) == 1)
            .map(|k| self.pow(base, k))
            .min()
            .expect("order >= 2")
    }

    pub fn params(&self) -> &FieldParams {
        &self.params
    }

    pub fn p(&self) -> u32 {
        self.params.p
    }

    pub fn degree(&self) -> u32 {
        self.params.m
    }

    /// Number of field elements, `2^m`.
    pub fn size(&self) -> u64 {
        self.group_order + 1
    }

    /// The distinguished primitive `p`-th root of unity.
    pub fn lambda(&self) -> FieldElement {
        FieldElement(self.params.lambda)
    }

    /// `lambda^k` for any integer `k`.
    pub fn lambda_pow(&self, k: i64) -> FieldElement {
        let p = self.params.p as i64;
        self.pow(self.lambda(), k.rem_euclid(p) as u64)
    }

    /// Validates an encoding against this field.
    pub fn element(&self, bits: u64) -> Result<FieldElement, FieldError> {
        if bits > self.group_order {
            return Err(FieldError::IncompatibleField {
                bits,
                m: self.params.m,
            });
        }
        Ok(FieldElement(bits as u32))
    }

    pub fn parse_element(&self, s: &str) -> Result<FieldElement, FieldError> {
        self.element(parse_encoding(s)?)
    }

    /// All elements in increasing encoding order.
    pub fn elements(&self) -> impl Iterator<Item = FieldElement> {
        (0..=self.group_order).map(|b| FieldElement(b as u32))
    }

    pub fn contains(&self, a: FieldElement) -> bool {
        a.0 as u64 <= self.group_order
    }

    #[inline]
    pub fn add(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        FieldElement(a.0 ^ b.0)
    }

    /// Addition that rejects encodings from a larger field.
    pub fn try_add(&self, a: FieldElement, b: FieldElement) -> Result<FieldElement, FieldError> {
        self.element(a.0 as u64)?;
        self.element(b.0 as u64)?;
        Ok(self.add(a, b))
    }

    #[inline]
    pub fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        if a.0 == 0 || b.0 == 0 {
            return FieldElement::ZERO;
        }
        match &self.tables {
            Some(t) => FieldElement(t.exp[(t.log[a.0 as usize] + t.log[b.0 as usize]) as usize]),
            None => {
                FieldElement(gf2poly::mulmod(a.0 as u64, b.0 as u64, self.params.modulus) as u32)
            }
        }
    }

    pub fn try_mul(&self, a: FieldElement, b: FieldElement) -> Result<FieldElement, FieldError> {
        self.element(a.0 as u64)?;
        self.element(b.0 as u64)?;
        Ok(self.mul(a, b))
    }

    pub fn pow(&self, a: FieldElement, k: u64) -> FieldElement {
        if k == 0 {
            return FieldElement::ONE;
        }
        if a.is_zero() {
            return FieldElement::ZERO;
        }
        if let Some(t) = &self.tables {
            let e = (t.log[a.0 as usize] as u128 * k as u128 % self.group_order as u128) as usize;
            return FieldElement(t.exp[e]);
        }
        let mut k = k % self.group_order;
        let mut base = a;
        let mut acc = FieldElement::ONE;
        while k > 0 {
            if k & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            k >>= 1;
        }
        acc
    }

    pub fn inv(&self, a: FieldElement) -> Result<FieldElement, FieldError> {
        if a.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        Ok(self.pow(a, self.group_order - 1))
    }

    /// Least `n >= 1` with `a^n = 1`.
    pub fn element_order(&self, a: FieldElement) -> Result<u64, FieldError> {
        if a.is_zero() {
            return Err(FieldError::ZeroOrder);
        }
        let mut n = self.group_order;
        for &q in &self.order_primes {
            while n.is_multiple_of(q) && self.pow_slow(a, n / q) == FieldElement::ONE {
                n /= q;
            }
        }
        Ok(n)
    }

    // Square-and-multiply without the tables, usable while they are built.
    fn pow_slow(&self, a: FieldElement, mut k: u64) -> FieldElement {
        let f = self.params.modulus;
        let mut base = a.0 as u64;
        let mut acc = 1u64;
        while k > 0 {
            if k & 1 == 1 {
                acc = gf2poly::mulmod(acc, base, f);
            }
            base = gf2poly::mulmod(base, base, f);
            k >>= 1;
        }
        FieldElement(acc as u32)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    // Independent order oracle: repeated multiplication by 2 modulo p.
    fn order_by_powering(p: u32) -> u32 {
        (1..p).find(|&n| (1u64 << n) % p as u64 == 1).unwrap()
    }

    #[test]
    fn extension_degree_matches_order_of_two() {
        for (p, m) in [(3, 2), (7, 3), (5, 4)] {
            assert_eq!(order_by_powering(p), m);
            let f = Field::for_p(p).unwrap();
            assert_eq!(f.degree(), m, "p={p}");
        }
        for p in (3..60).step_by(2) {
            assert_eq!(order_of_two_mod(p), order_by_powering(p));
        }
    }

    #[test]
    fn rejects_even_or_small_p() {
        for p in [0, 1, 2, 4, 10] {
            assert!(matches!(
                Field::for_p(p),
                Err(FieldError::InvalidParameter(_))
            ));
        }
    }

    #[test]
    fn modulus_is_smallest_irreducible() {
        assert_eq!(gf2poly::smallest_irreducible(2), 0b111);
        assert_eq!(gf2poly::smallest_irreducible(3), 0b1011);
        assert_eq!(gf2poly::smallest_irreducible(4), 0b10011);
        assert_eq!(gf2poly::smallest_irreducible(8), 0x11b);
        assert!(!gf2poly::is_irreducible(0b101));
        assert!(gf2poly::is_irreducible(0b11001));
    }

    #[test]
    fn irreducibility_agrees_with_trial_division() {
        for f in 2u64..1 << 9 {
            let d = gf2poly::degree(f as u128).unwrap();
            let has_factor = (2u64..f).any(|g| {
                let dg = gf2poly::degree(g as u128).unwrap();
                dg >= 1 && dg < d && gf2poly::rem(f as u128, g) == 0
            });
            assert_eq!(
                gf2poly::is_irreducible(f),
                d >= 1 && !has_factor,
                "f={f:#b}"
            );
        }
    }

    #[test]
    fn addition_is_xor() {
        let f = Field::for_p(3).unwrap();
        assert_eq!(f.params().modulus, 0b111);
        for a in f.elements() {
            assert_eq!(f.add(a, a), FieldElement::ZERO);
            assert_eq!(f.add(a, FieldElement::ZERO), a);
        }
        assert_eq!(f.add(FieldElement(2), FieldElement(3)), FieldElement(1));
    }

    #[test]
    fn mixed_fields_are_rejected() {
        let gf4 = Field::for_p(3).unwrap();
        let gf16 = Field::for_p(5).unwrap();
        let big = gf16.element(9).unwrap();
        assert!(matches!(
            gf4.try_add(FieldElement::ONE, big),
            Err(FieldError::IncompatibleField { bits: 9, m: 2 })
        ));
        assert!(gf4.try_mul(big, big).is_err());
    }

    #[test]
    fn lambda_has_order_p() {
        for p in [3, 5, 7, 9, 11, 13, 15, 17, 21] {
            let f = Field::for_p(p).unwrap();
            let lambda = f.lambda();
            assert_eq!(f.element_order(lambda).unwrap(), p as u64, "p={p}");
            assert_eq!(f.pow(lambda, p as u64), FieldElement::ONE);
            // smallest encoding among elements of order p
            let smallest = f
                .elements()
                .skip(1)
                .find(|&a| f.element_order(a).unwrap() == p as u64)
                .unwrap();
            assert_eq!(lambda, smallest, "p={p}");
        }
    }

    #[test]
    fn inverse_and_division_by_zero() {
        for p in [3, 5, 7, 17] {
            let f = Field::for_p(p).unwrap();
            for a in f.elements().skip(1) {
                assert_eq!(f.mul(a, f.inv(a).unwrap()), FieldElement::ONE);
            }
            assert_eq!(f.inv(FieldElement::ZERO), Err(FieldError::DivisionByZero));
        }
    }

    #[test]
    fn table_and_carryless_paths_agree() {
        let f = Field::for_p(17).unwrap(); // GF(256)
        let m = f.params().modulus;
        for a in f.elements() {
            for b in f.elements().step_by(7) {
                let slow = gf2poly::mulmod(a.0 as u64, b.0 as u64, m) as u32;
                assert_eq!(f.mul(a, b).0, slow);
            }
        }
    }

    #[test]
    fn exhaustive_field_laws_small_fields() {
        for p in [3, 7, 5, 31, 17] {
            let f = Field::for_p(p).unwrap();
            assert!(f.degree() <= 8);
            for a in f.elements() {
                for b in f.elements() {
                    if !a.is_zero() && !b.is_zero() {
                        assert!(!f.mul(a, b).is_zero());
                    }
                    let s = f.add(a, b);
                    assert_eq!(f.mul(s, s), f.add(f.mul(a, a), f.mul(b, b)));
                }
            }
        }
    }

    #[test]
    fn large_field_without_tables() {
        // ord_29(2) = 28, ord_47(2) = 23
        for p in [29, 47] {
            let f = Field::for_p(p).unwrap();
            assert!(f.tables.is_none());
            let lambda = f.lambda();
            assert_eq!(f.element_order(lambda).unwrap(), p as u64);
            let a = f.element(0x1234567 % f.size()).unwrap();
            assert_eq!(f.mul(a, f.inv(a).unwrap()), FieldElement::ONE);
        }
    }

    #[test]
    fn multiplier_extends_degree() {
        let f = Field::for_p_with_multiplier(3, 2).unwrap();
        assert_eq!(f.degree(), 4);
        assert_eq!(f.element_order(f.lambda()).unwrap(), 3);
        assert!(Field::for_p_with_multiplier(3, 0).is_err());
        assert!(Field::for_p_with_multiplier(3, 17).is_err());
    }

    #[test]
    fn params_round_trip_and_validation() {
        let f = Field::for_p(7).unwrap();
        let json = serde_json::to_string(f.params()).unwrap();
        assert_eq!(json, r#"{"p":7,"m":3,"modulus":11,"lambda":2}"#);
        let back: FieldParams = serde_json::from_str(&json).unwrap();
        assert_eq!(Field::from_params(&back).unwrap(), f);

        let mut bad = back.clone();
        bad.lambda = 1;
        assert!(Field::from_params(&bad).is_err());
        let mut bad = back.clone();
        bad.modulus = 0b1001; // x^3+1 = (x+1)(x^2+x+1)
        assert!(Field::from_params(&bad).is_err());
        // another root of unity is acceptable
        let mut alt = back;
        alt.lambda = f.pow(f.lambda(), 3).bits();
        assert!(Field::from_params(&alt).is_ok());
    }

    #[test]
    fn parse_decimal_and_hex() {
        let f = Field::for_p(5).unwrap();
        assert_eq!(f.parse_element("0xf").unwrap(), FieldElement(15));
        assert_eq!(f.parse_element(" 7 ").unwrap(), FieldElement(7));
        assert!(f.parse_element("16").is_err());
        assert!(f.parse_element("seven").is_err());
    }
}
