//! Constructive splitting of high-degree orbit sums.
//!
//! For a `rho`-invariant monomial `m = m1 * m2` with both factors
//! `rho`-invariant, `o(m) = o(m1) o(m2) + f`, and in each case below `f` is
//! divisible by an invariant quadratic `q` with `f / q` invariant. That makes
//! `o(m)` expressible through invariants of smaller degree.
//!
//! Cases, tried in order:
//! 1. a trivial coordinate `e_k` divides `m` (then `f = 0`);
//! 2. `x_i y_i` or `z_j w_j` divides `m` (then `f = 0`);
//! 3. `z_j^2` or `w_j^2` divides `m`: split off that single variable;
//! 4. the `x`/`y` part has degree `>= p + 1` with a repeated variable: a
//!    zero-sum split of the characters gives `m1`, `m2` sharing that variable.

use serde::Serialize;

use super::{degree_bound, is_expressible, orbit_sum, zero_sum_split, InvariantError};
use crate::poly::{rho_character, Monomial, Polynomial, VariableLayout};
use crate::rep::DihedralModule;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SplitCase {
    TrivialFactor,
    InvariantQuadratic,
    RepeatedW0Variable,
    ZeroSum,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SplitWitness {
    pub m1: Monomial,
    pub m2: Monomial,
}

/// A split together with the identity `o(m) = o(m1) o(m2) + residual`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SplitCertificate {
    pub monomial: Monomial,
    pub case: SplitCase,
    pub witness: SplitWitness,
    /// Invariant quadratic dividing the residual, when the residual is nonzero.
    pub quadratic: Option<Monomial>,
    pub residual: Polynomial,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Reduction {
    Split(SplitCertificate),
    /// Confirmed by an exact membership test in the monomial's multidegree.
    Inexpressible,
}

/// The invariant quadratics `x_i y_i` and `z_j w_j`.
pub fn invariant_quadratics(layout: &VariableLayout) -> Vec<Monomial> {
    let n = layout.nvars();
    let pair = |a: usize, b: usize| {
        let mut e = vec![0; n];
        e[a] = 1;
        e[b] = 1;
        Monomial::new(e)
    };
    (0..layout.r)
        .map(|i| pair(layout.x(i), layout.y(i)))
        .chain((0..layout.s).map(|j| pair(layout.z(j), layout.w(j))))
        .collect()
}

/// Membership of `f` in the ideal generated by the invariant quadratics.
/// The ideal is monomial, so its degree slice is spanned by the monomials
/// divisible by some generator and membership is decided term by term.
pub fn in_quadratic_ideal(f: &Polynomial, layout: &VariableLayout) -> bool {
    let qs = invariant_quadratics(layout);
    f.terms().all(|(m, _)| qs.iter().any(|q| q.divides(m)))
}

impl SplitCertificate {
    /// Re-derives every claim of the certificate from scratch.
    pub fn verify(&self, module: &DihedralModule) -> Result<(), String> {
        let spec = module.spec();
        let layout = module.layout();
        let field = module.field();
        let SplitWitness { m1, m2 } = &self.witness;
        if m1.mul(m2) != self.monomial {
            return Err("m1 * m2 != m".into());
        }
        if m1.degree() == 0 || m2.degree() == 0 {
            return Err("a factor has degree zero".into());
        }
        if rho_character(m1, spec) != 0 || rho_character(m2, spec) != 0 {
            return Err("a factor is not rho-invariant".into());
        }
        let o = |m: &Monomial| orbit_sum(module, m).map(|o| o.polynomial);
        let (om, o1, o2) = match (o(&self.monomial), o(m1), o(m2)) {
            (Ok(a), Ok(b), Ok(c)) => (a, b, c),
            _ => return Err("orbit sums unavailable".into()),
        };
        let mut residual = o1.mul_unchecked(&o2, field);
        residual.add_assign(&om);
        if residual != self.residual {
            return Err("recorded residual differs from o(m) + o(m1) o(m2)".into());
        }
        if !in_quadratic_ideal(&residual, layout) {
            return Err("residual is outside the invariant-quadratic ideal".into());
        }
        match &self.quadratic {
            None if residual.is_zero() => Ok(()),
            None => Err("nonzero residual without a quadratic".into()),
            Some(q) => {
                if !invariant_quadratics(layout).contains(q) {
                    return Err("recorded quadratic is not x_i y_i or z_j w_j".into());
                }
                let mut quotient = Polynomial::zero(layout.nvars());
                for (m, c) in residual.terms() {
                    let Some(rest) = q.quotient_of(m) else {
                        return Err("quadratic does not divide the residual".into());
                    };
                    quotient.add_term(rest, c);
                }
                match module.is_invariant(&quotient) {
                    Ok(true) => Ok(()),
                    _ => Err("residual / quadratic is not invariant".into()),
                }
            }
        }
    }
}

/// Splits `m` following the case analysis in the module docs, regardless of
/// its degree. `None` when no case applies.
pub fn split_monomial(
    module: &DihedralModule,
    m: &Monomial,
) -> Result<Option<SplitCertificate>, InvariantError> {
    let spec = module.spec();
    let layout = module.layout();
    let n = layout.nvars();
    let chi = rho_character(m, spec);
    if chi != 0 {
        return Err(InvariantError::NotRhoInvariant(chi));
    }
    if m.degree() < 2 {
        return Ok(None);
    }
    let var = |idx: usize| Monomial::variable(idx, n);
    let exp = |idx: usize| m.exponent(idx);

    let found = (|| {
        for k in 0..layout.t {
            if exp(layout.e(k)) > 0 {
                return Some((SplitCase::TrivialFactor, var(layout.e(k)), None));
            }
        }
        for q in invariant_quadratics(layout) {
            if q.divides(m) && q != *m {
                return Some((SplitCase::InvariantQuadratic, q, None));
            }
        }
        for j in 0..layout.s {
            let q = var(layout.z(j)).mul(&var(layout.w(j)));
            if exp(layout.z(j)) >= 2 {
                return Some((SplitCase::RepeatedW0Variable, var(layout.z(j)), Some(q)));
            }
            if exp(layout.w(j)) >= 2 {
                return Some((SplitCase::RepeatedW0Variable, var(layout.w(j)), Some(q)));
            }
        }
        None
    })();
    let (case, m1, quadratic) = match found {
        Some(hit) => hit,
        None => match zero_sum_factor(module, m)? {
            Some((m1, q)) => (SplitCase::ZeroSum, m1, Some(q)),
            None => return Ok(None),
        },
    };

    let m2 = m1.quotient_of(m).expect("m1 divides m by construction");
    let o = |x: &Monomial| orbit_sum(module, x).map(|o| o.polynomial);
    let mut residual = o(&m1)?.mul_unchecked(&o(&m2)?, module.field());
    residual.add_assign(&o(m)?);
    let quadratic = if residual.is_zero() { None } else { quadratic };
    Ok(Some(SplitCertificate {
        monomial: m.clone(),
        case,
        witness: SplitWitness { m1, m2 },
        quadratic,
        residual,
    }))
}

/// The `x`/`y` case: `m` has no `x_i y_i`, `z_j w_j`, `z_j^2`, `w_j^2` or
/// `e_k` factor. Returns `m1` and the quadratic `x_a y_a` of the anchor.
fn zero_sum_factor(
    module: &DihedralModule,
    m: &Monomial,
) -> Result<Option<(Monomial, Monomial)>, InvariantError> {
    let spec = module.spec();
    let layout = module.layout();
    let r = layout.r;
    let xy_degree: u32 = (0..2 * r).map(|i| m.exponent(i)).sum();
    if xy_degree < spec.p + 1 {
        return Ok(None);
    }
    // The first anchor works whenever p is prime; composite p may need others.
    let anchors = (0..r).filter(|&i| m.exponent(layout.x(i)) + m.exponent(layout.y(i)) >= 2);
    for anchor in anchors {
        // Normalize so the anchor's exponent sits on x; undo with sigma afterwards.
        let flipped = m.exponent(layout.x(anchor)) == 0;
        let work = if flipped {
            m.sigma_image(layout)
        } else {
            m.clone()
        };

        let p = spec.p as i64;
        let mut terms = Vec::with_capacity(2 * r);
        for (i, &w) in spec.weights.iter().enumerate() {
            terms.push((w as i64, work.exponent(layout.x(i))));
        }
        for (i, &w) in spec.weights.iter().enumerate() {
            terms.push(((-(w as i64)).rem_euclid(p), work.exponent(layout.y(i))));
        }
        let sub = match zero_sum_split(&terms, layout.x(anchor), spec.p) {
            Ok(sub) => sub,
            Err(InvariantError::Infeasible(_)) => continue,
            Err(e) => return Err(e),
        };
        let mut exps = work.exponents().to_vec();
        exps[..2 * r].copy_from_slice(&sub);
        let mut m1 = Monomial::new(exps);
        if flipped {
            m1 = m1.sigma_image(layout);
        }
        let n = layout.nvars();
        let q =
            Monomial::variable(layout.x(anchor), n).mul(&Monomial::variable(layout.y(anchor), n));
        return Ok(Some((m1, q)));
    }
    Ok(None)
}

/// Splits a `rho`-invariant monomial of degree at least `s + max(r, p) + 1`.
pub fn reduce_monomial(module: &DihedralModule, m: &Monomial) -> Result<Reduction, InvariantError> {
    let required = degree_bound(module) + 1;
    if m.degree() < required {
        return Err(InvariantError::Precondition(format!(
            "degree {} is below s + max(r, p) + 1 = {required}",
            m.degree()
        )));
    }
    if let Some(cert) = split_monomial(module, m)? {
        return Ok(Reduction::Split(cert));
    }
    // No certificate: only report Inexpressible when linear algebra confirms it.
    if is_expressible(module, m)? {
        return Err(InvariantError::Infeasible(format!(
            "no split certificate for an expressible monomial of degree {}",
            m.degree()
        )));
    }
    Ok(Reduction::Inexpressible)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::invariants::enumerate_rho_invariant_monomials;
    use crate::rep::ModuleSpec;

    fn module(p: u32, weights: Vec<u32>, s: usize, t: usize) -> DihedralModule {
        DihedralModule::with_default_field(ModuleSpec::new(p, weights, s, t)).unwrap()
    }

    fn split(m: &DihedralModule, exps: &[u32]) -> SplitCertificate {
        match reduce_monomial(m, &Monomial::new(exps.to_vec())).unwrap() {
            Reduction::Split(c) => {
                c.verify(m).unwrap();
                c
            }
            Reduction::Inexpressible => panic!("no split for {exps:?}"),
        }
    }

    #[test]
    fn invariant_quadratic_case() {
        let m = module(3, vec![1], 0, 0);
        let c = split(&m, &[4, 1]);
        assert_eq!(c.case, SplitCase::InvariantQuadratic);
        assert_eq!(c.witness.m1.exponents(), &[1, 1]);
        assert_eq!(c.witness.m2.exponents(), &[3, 0]);
        assert!(c.residual.is_zero());
    }

    #[test]
    fn repeated_w0_variable_case() {
        // z1^2 x1^3 over W_1 + W_0
        let m = module(3, vec![1], 1, 0);
        let c = split(&m, &[3, 0, 2, 0]);
        assert_eq!(c.case, SplitCase::RepeatedW0Variable);
        assert_eq!(c.witness.m1.exponents(), &[0, 0, 1, 0]);
        assert_eq!(c.witness.m2.exponents(), &[3, 0, 1, 0]);
        let l = m.layout();
        assert_eq!(c.residual.display(l).to_string(), "x1^3*z1*w1 + y1^3*z1*w1");
        // the same with the roles of z and w exchanged
        let c = split(&m, &[0, 3, 0, 2]);
        assert_eq!(c.witness.m1.exponents(), &[0, 0, 0, 1]);
    }

    #[test]
    fn zero_sum_case() {
        let m = module(3, vec![1], 0, 0);
        // x1^4 has character 1, so it is not a valid input
        assert_eq!(
            reduce_monomial(&m, &Monomial::new(vec![4, 0])),
            Err(InvariantError::NotRhoInvariant(1))
        );
        let c = split(&m, &[6, 0]);
        assert_eq!(c.case, SplitCase::ZeroSum);
        assert_eq!(c.witness.m1.exponents(), &[3, 0]);
        assert_eq!(c.witness.m2.exponents(), &[3, 0]);
        // the sigma-normalized mirror image
        let c = split(&m, &[0, 6]);
        assert_eq!(c.witness.m1.exponents(), &[0, 3]);

        // x1^4 x2^3 with weights 1, 2 mod 5: smallest split is x1 x2^2
        let m = module(5, vec![1, 2], 0, 0);
        let c = split(&m, &[4, 3, 0, 0]);
        assert_eq!(c.case, SplitCase::ZeroSum);
        assert_eq!(c.witness.m1.exponents(), &[1, 2, 0, 0]);
        assert_eq!(c.witness.m2.exponents(), &[3, 1, 0, 0]);
    }

    #[test]
    fn trivial_factor_case() {
        let m = module(3, vec![1], 0, 1);
        let c = split(&m, &[3, 0, 1]);
        assert_eq!(c.case, SplitCase::TrivialFactor);
        assert!(c.residual.is_zero());
    }

    #[test]
    fn preconditions() {
        let m = module(3, vec![1], 0, 0);
        assert!(matches!(
            reduce_monomial(&m, &Monomial::new(vec![3, 0])),
            Err(InvariantError::Precondition(_))
        ));
        assert!(matches!(
            reduce_monomial(&m, &Monomial::new(vec![2, 2])),
            Ok(Reduction::Split(_))
        ));
        assert!(matches!(
            reduce_monomial(&m, &Monomial::new(vec![5, 0])),
            Err(InvariantError::NotRhoInvariant(2))
        ));
    }

    #[test]
    fn low_degree_generators_do_not_split() {
        let m = module(3, vec![1], 0, 0);
        assert!(split_monomial(&m, &Monomial::new(vec![3, 0]))
            .unwrap()
            .is_none());
        assert!(split_monomial(&m, &Monomial::new(vec![1, 1]))
            .unwrap()
            .is_none());
        assert!(split_monomial(&m, &Monomial::new(vec![2, 2]))
            .unwrap()
            .is_some());
    }

    #[test]
    fn tampered_certificate_fails() {
        let m = module(3, vec![1], 1, 0);
        let mut c = split(&m, &[3, 0, 2, 0]);
        c.residual = Polynomial::zero(4);
        assert!(c.verify(&m).is_err());
    }

    #[test]
    fn every_monomial_past_the_bound_splits() {
        for (p, w, s, t) in [
            (3, vec![1], 0, 0),
            (3, vec![1, 1], 1, 0),
            (5, vec![1, 2], 1, 0),
            (5, vec![2], 2, 1),
            (7, vec![1, 3], 0, 0),
            (9, vec![3, 1], 0, 0),
        ] {
            let m = module(p, w, s, t);
            let bound = degree_bound(&m);
            for d in bound + 1..=bound + 3 {
                for mono in enumerate_rho_invariant_monomials(&m, d) {
                    let c = match reduce_monomial(&m, &mono).unwrap() {
                        Reduction::Split(c) => c,
                        Reduction::Inexpressible => panic!("{mono:?} did not split"),
                    };
                    c.verify(&m).unwrap();
                }
            }
        }
    }

    #[test]
    fn composite_modulus_allows_generators_past_the_bound() {
        // p = 9: x1^3 x2 x3 x4 x5 x6 x7 y8 has degree 10 > 9 and no split
        let m = module(9, vec![1, 3, 3, 3, 3, 3, 3, 3], 0, 0);
        let mut exps = vec![0; 16];
        exps[..7].copy_from_slice(&[3, 1, 1, 1, 1, 1, 1]);
        exps[15] = 1;
        let mono = Monomial::new(exps);
        assert_eq!(mono.degree(), degree_bound(&m) + 1);
        assert_eq!(split_monomial(&m, &mono).unwrap(), None);
        assert!(!is_expressible(&m, &mono).unwrap());
        assert_eq!(
            reduce_monomial(&m, &mono).unwrap(),
            Reduction::Inexpressible
        );
    }
}
