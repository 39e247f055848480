//! Explicit separating sets and a brute-force separation checker.
//!
//! A set `S` of invariants separates when `f(u) = f(v)` for all `f` in `S`
//! forces `u` and `v` into the same orbit. Over a finite field this is
//! decidable by enumerating points and comparing evaluation signatures with
//! canonical orbit representatives.

use std::collections::HashMap;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::gf2m::FieldElement;
use crate::invariants::invariant_basis;
use crate::poly::{
    parse_polynomial, rho_character, Monomial, PolyError, Polynomial, VariableLayout,
};
use crate::rep::{DihedralModule, ModuleSpec, Point, RepError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SeparatingError {
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("exhaustive scan needs {required} points but the budget is {budget}")]
    BudgetExceeded { required: u128, budget: u64 },
    #[error("set element {index} is not G-invariant")]
    NotInvariant { index: usize },
    #[error("line {line}: {source}")]
    SetFile { line: usize, source: PolyError },
    #[error(transparent)]
    Rep(#[from] RepError),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// Where an element of a separating set came from. `r` is the number of
/// non-trivial two-dimensional blocks at the recursion level that emitted it;
/// indices are 1-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Provenance {
    XyBlock {
        r: usize,
    },
    FrobeniusBlock {
        r: usize,
    },
    F {
        i: usize,
        r: usize,
    },
    G {
        i: usize,
        r: usize,
    },
    Fij {
        i: usize,
        j: usize,
        r: usize,
    },
    H {
        j: usize,
        r: usize,
    },
    W0Block,
    TrivialCoordinate {
        k: usize,
    },
    /// Read from a file or built by hand.
    Supplied,
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Self::XyBlock { r } => write!(f, "xy-block r={r}"),
            Self::FrobeniusBlock { r } => write!(f, "frobenius-block r={r}"),
            Self::F { i, r } => write!(f, "f_{i} r={r}"),
            Self::G { i, r } => write!(f, "g_{i} r={r}"),
            Self::Fij { i, j, r } => write!(f, "f_{i},{j} r={r}"),
            Self::H { j, r } => write!(f, "h_{j} r={r}"),
            Self::W0Block => write!(f, "w0-block"),
            Self::TrivialCoordinate { k } => write!(f, "trivial-coordinate e{k}"),
            Self::Supplied => write!(f, "supplied"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeparatingSet {
    pub polynomials: Vec<Polynomial>,
    pub provenance: Vec<Provenance>,
}

impl SeparatingSet {
    pub fn new() -> Self {
        Self {
            polynomials: Vec::new(),
            provenance: Vec::new(),
        }
    }

    pub fn from_polynomials(polynomials: Vec<Polynomial>) -> Self {
        let provenance = vec![Provenance::Supplied; polynomials.len()];
        Self {
            polynomials,
            provenance,
        }
    }

    pub fn push(&mut self, f: Polynomial, origin: Provenance) {
        self.polynomials.push(f);
        self.provenance.push(origin);
    }

    pub fn len(&self) -> usize {
        self.polynomials.len()
    }

    pub fn is_empty(&self) -> bool {
        self.polynomials.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Polynomial, Provenance)> {
        self.polynomials.iter().zip(self.provenance.iter().copied())
    }

    /// The set with element `index` removed.
    pub fn without(&self, index: usize) -> Self {
        let mut out = self.clone();
        out.polynomials.remove(index);
        out.provenance.remove(index);
        out
    }

    pub fn max_degree(&self) -> u32 {
        self.polynomials
            .iter()
            .filter_map(Polynomial::degree)
            .max()
            .unwrap_or(0)
    }

    /// One polynomial per line, provenance as a trailing comment. The output
    /// parses back with [`parse_set_file`].
    pub fn to_text(&self, layout: &VariableLayout) -> String {
        self.iter()
            .map(|(f, origin)| format!("{}  # {origin}\n", f.display(layout)))
            .collect()
    }
}

impl Default for SeparatingSet {
    fn default() -> Self {
        Self::new()
    }
}

/// Parses one polynomial per line; `#` starts a comment, blank lines are skipped.
pub fn parse_set_file(
    text: &str,
    module: &DihedralModule,
) -> Result<SeparatingSet, SeparatingError> {
    let mut polys = Vec::new();
    for (n, line) in text.lines().enumerate() {
        let body = line.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let f = parse_polynomial(body, module.layout(), module.field()).map_err(|source| {
            SeparatingError::SetFile {
                line: n + 1,
                source,
            }
        })?;
        polys.push(f);
    }
    Ok(SeparatingSet::from_polynomials(polys))
}

fn is_prime(n: u32) -> bool {
    n >= 2
        && (2..)
            .take_while(|d| d * d <= n)
            .all(|d| !n.is_multiple_of(d))
}

fn inverse_mod(a: u32, p: u32) -> u32 {
    (1..p)
        .find(|&x| (a as u64 * x as u64) % p as u64 == 1)
        .expect("p is prime")
}

/// `{z_j + w_j, z_j w_j} + {z_j w_k + z_k w_j : j < k}` on the `W_0` block.
pub fn w0_separating_set(layout: &VariableLayout) -> Vec<Polynomial> {
    let n = layout.nvars();
    let var = |idx| Monomial::variable(idx, n);
    let mut out = Vec::new();
    for j in 0..layout.s {
        let (z, w) = (var(layout.z(j)), var(layout.w(j)));
        out.push(Polynomial::from_monomials(n, [z.clone(), w.clone()]));
        out.push(Polynomial::from_monomial(z.mul(&w)));
    }
    for j in 0..layout.s {
        for k in j + 1..layout.s {
            out.push(Polynomial::from_monomials(
                n,
                [
                    var(layout.z(j)).mul(&var(layout.w(k))),
                    var(layout.z(k)).mul(&var(layout.w(j))),
                ],
            ));
        }
    }
    out
}

/// Separating set built by peeling off the last weight at each step: the
/// block invariants `x_r y_r`, `x_r^p + y_r^p` and the cross terms
/// `f_i, g_i, f_{i,j}, h_j` linking `x_r, y_r` to the remaining blocks.
/// Requires `p` prime.
pub fn separating_set(module: &DihedralModule) -> Result<SeparatingSet, SeparatingError> {
    let spec = module.spec();
    let p = spec.p;
    if !is_prime(p) {
        return Err(SeparatingError::Unsupported(format!(
            "separating sets are constructed only for prime p (got p={p})"
        )));
    }
    let layout = module.layout();
    let n = layout.nvars();
    let var = |idx| Monomial::variable(idx, n);
    let pow = |idx, e| Monomial::new((0..n).map(|k| if k == idx { e } else { 0 }).collect());
    let pair = |a: Monomial, b: Monomial| Polynomial::from_monomials(n, [a, b]);

    let mut set = SeparatingSet::new();
    for r in (1..=layout.r).rev() {
        let last = r - 1;
        let (xr, yr) = (layout.x(last), layout.y(last));
        let mr = spec.weights[last];
        set.push(
            Polynomial::from_monomial(var(xr).mul(&var(yr))),
            Provenance::XyBlock { r },
        );
        set.push(
            pair(pow(xr, p), pow(yr, p)),
            Provenance::FrobeniusBlock { r },
        );
        for i in 0..last {
            let (xi, yi) = (layout.x(i), layout.y(i));
            let ni = (mr as u64 * inverse_mod(spec.weights[i], p) as u64 % p as u64) as u32;
            let ni = if ni == 0 { p } else { ni };
            let f_lead = var(xr).mul(&pow(yi, ni));
            debug_assert_eq!(rho_character(&f_lead, spec), 0);
            set.push(
                pair(f_lead.clone(), var(yr).mul(&pow(xi, ni))),
                Provenance::F { i: i + 1, r },
            );
            set.push(
                pair(var(xr).mul(&pow(xi, p - ni)), var(yr).mul(&pow(yi, p - ni))),
                Provenance::G { i: i + 1, r },
            );
            for j in 0..layout.s {
                set.push(
                    pair(
                        f_lead.mul(&var(layout.z(j))),
                        var(yr).mul(&pow(xi, ni)).mul(&var(layout.w(j))),
                    ),
                    Provenance::Fij {
                        i: i + 1,
                        j: j + 1,
                        r,
                    },
                );
            }
        }
        for j in 0..layout.s {
            set.push(
                pair(
                    pow(xr, p).mul(&var(layout.z(j))),
                    pow(yr, p).mul(&var(layout.w(j))),
                ),
                Provenance::H { j: j + 1, r },
            );
        }
    }
    for f in w0_separating_set(layout) {
        set.push(f, Provenance::W0Block);
    }
    for k in 0..layout.t {
        set.push(
            Polynomial::variable(layout.e(k), n),
            Provenance::TrivialCoordinate { k: k + 1 },
        );
    }
    for (index, f) in set.polynomials.iter().enumerate() {
        if !module.is_invariant(f)? {
            return Err(SeparatingError::NotInvariant { index });
        }
    }
    Ok(set)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Exhaustive,
    Sampled,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Separating,
    Counterexample,
    InconclusiveSampled,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SeparationReport {
    pub mode: Mode,
    pub points: u64,
    pub classes: u64,
    pub verdict: Verdict,
    /// Two points with equal signatures in different orbits.
    pub counterexample: Option<[Point; 2]>,
    pub seed: Option<u64>,
}

/// Points per parallel block; blocks are merged in scan order.
const BLOCK: u64 = 1 << 14;

struct Scan<'a> {
    module: &'a DihedralModule,
    set: &'a SeparatingSet,
    /// signature -> (orbit minimum, first point seen)
    classes: HashMap<Vec<FieldElement>, (Vec<FieldElement>, Vec<FieldElement>)>,
    counterexample: Option<[Point; 2]>,
}

impl<'a> Scan<'a> {
    fn signature(&self, v: &[FieldElement]) -> Vec<FieldElement> {
        let field = self.module.field();
        self.set
            .polynomials
            .iter()
            .map(|f| f.eval_unchecked(v, field))
            .collect()
    }

    fn examine(
        &self,
        v: Vec<FieldElement>,
    ) -> (Vec<FieldElement>, Vec<FieldElement>, Vec<FieldElement>) {
        let sig = self.signature(&v);
        let min = self.module.orbit_min(&v);
        (sig, min, v)
    }

    fn merge(&mut self, batch: Vec<(Vec<FieldElement>, Vec<FieldElement>, Vec<FieldElement>)>) {
        for (sig, min, v) in batch {
            match self.classes.get(&sig) {
                None => {
                    self.classes.insert(sig, (min, v));
                }
                Some((seen_min, first)) => {
                    if *seen_min != min && self.counterexample.is_none() {
                        self.counterexample = Some([Point(first.clone()), Point(v)]);
                    }
                }
            }
        }
    }
}

fn check_set(module: &DihedralModule, set: &SeparatingSet) -> Result<(), SeparatingError> {
    for (index, f) in set.polynomials.iter().enumerate() {
        if f.nvars() != module.layout().nvars() {
            return Err(PolyError::Shape {
                expected: module.layout().nvars(),
                got: f.nvars(),
            }
            .into());
        }
        if !module.is_invariant(f)? {
            return Err(SeparatingError::NotInvariant { index });
        }
    }
    Ok(())
}

/// Checks whether `set` separates the orbits of `F^dim` for the module's
/// field `F`.
///
/// Exhaustive mode scans every point in lexicographic order of the encoded
/// coordinates and refuses when there are more than `budget` points. Sampled
/// mode draws `budget` uniform points from a generator seeded with `seed`;
/// without a collision it can only report an inconclusive verdict.
pub fn verify_separating(
    module: &DihedralModule,
    set: &SeparatingSet,
    mode: Mode,
    budget: u64,
    seed: u64,
) -> Result<SeparationReport, SeparatingError> {
    check_set(module, set)?;
    let q = module.field().size();
    let dim = module.dimension();
    let mut scan = Scan {
        module,
        set,
        classes: HashMap::new(),
        counterexample: None,
    };
    let points = match mode {
        Mode::Exhaustive => {
            let required = (0..dim).try_fold(1u128, |acc, _| acc.checked_mul(q as u128));
            let total = match required {
                Some(n) if n <= budget as u128 => n as u64,
                other => {
                    return Err(SeparatingError::BudgetExceeded {
                        required: other.unwrap_or(u128::MAX),
                        budget,
                    })
                }
            };
            let decode = |mut idx: u64| {
                let mut v = vec![FieldElement::ZERO; dim];
                for slot in v.iter_mut().rev() {
                    *slot = FieldElement::from_bits_unchecked((idx % q) as u32);
                    idx /= q;
                }
                v
            };
            let mut start = 0;
            while start < total {
                let end = (start + BLOCK).min(total);
                let batch: Vec<_> = (start..end)
                    .into_par_iter()
                    .map(|i| scan.examine(decode(i)))
                    .collect();
                scan.merge(batch);
                start = end;
            }
            total
        }
        Mode::Sampled => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut left = budget;
            while left > 0 {
                let n = left.min(BLOCK);
                let draws: Vec<Vec<FieldElement>> = (0..n)
                    .map(|_| {
                        (0..dim)
                            .map(|_| FieldElement::from_bits_unchecked(rng.gen_range(0..q) as u32))
                            .collect()
                    })
                    .collect();
                let batch: Vec<_> = draws.into_par_iter().map(|v| scan.examine(v)).collect();
                scan.merge(batch);
                left -= n;
            }
            budget
        }
    };
    let verdict = match (&scan.counterexample, mode) {
        (Some(_), _) => Verdict::Counterexample,
        (None, Mode::Exhaustive) => Verdict::Separating,
        (None, Mode::Sampled) => Verdict::InconclusiveSampled,
    };
    Ok(SeparationReport {
        mode,
        points,
        classes: scan.classes.len() as u64,
        verdict,
        counterexample: scan.counterexample,
        seed: (mode == Mode::Sampled).then_some(seed),
    })
}

/// Outcome of the degree `p + 1` separation witness on `W_1 + W_0`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BetaSepWitness {
    pub p: u32,
    pub v1: Point,
    pub v2: Point,
    /// `z x^p + w y^p` takes different values at `v1` and `v2`.
    pub separated_at_p_plus_1: bool,
    /// Some invariant of degree at most `p` takes different values.
    pub separated_at_le_p: bool,
    pub distinct_orbits: bool,
}

/// Compares `v1 = (0, 1, 1, 0)` and `v2 = (0, 1, 0, 1)` on `W_1 + W_0`.
/// Orbit sums of degree `<= p` span the invariants of those degrees, so
/// checking them decides the second flag.
pub fn beta_sep_witness(p: u32) -> Result<BetaSepWitness, SeparatingError> {
    let module = DihedralModule::with_default_field(ModuleSpec::new(p, vec![1], 1, 0))?;
    let field = module.field();
    let v1 = Point::from_bits(&[0, 1, 1, 0]);
    let v2 = Point::from_bits(&[0, 1, 0, 1]);
    let high = Polynomial::from_monomials(
        4,
        [
            Monomial::new(vec![p, 0, 1, 0]),
            Monomial::new(vec![0, p, 0, 1]),
        ],
    );
    let separated_at_p_plus_1 = high.eval_unchecked(&v1, field) != high.eval_unchecked(&v2, field);
    let separated_at_le_p = (1..=p).any(|d| {
        invariant_basis(&module, d).iter().any(|o| {
            o.polynomial.eval_unchecked(&v1, field) != o.polynomial.eval_unchecked(&v2, field)
        })
    });
    let distinct_orbits = module.orbit_of_point(&v1)? != module.orbit_of_point(&v2)?;
    Ok(BetaSepWitness {
        p,
        v1,
        v2,
        separated_at_p_plus_1,
        separated_at_le_p,
        distinct_orbits,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct BoundComparison {
    /// Generators of `F[V]^G` live in degree `<= s + max(r, p)`.
    pub paper_bound: u32,
    /// `dim V * (|G| - 1)`.
    pub symonds_bound: u32,
    pub beta_sep_bound: u32,
}

pub fn bound_comparison(spec: &ModuleSpec) -> BoundComparison {
    BoundComparison {
        paper_bound: spec.s as u32 + (spec.r() as u32).max(spec.p),
        symonds_bound: spec.dimension() as u32 * (2 * spec.p - 1),
        beta_sep_bound: spec.p + 1,
    }
}
