//! Invariants of `D_2p` acting on `F[V]`.
//!
//! `rho` scales every monomial, so `F[V]^G` is spanned by the orbit sums
//! `o(m)` of `rho`-invariant monomials: `m` itself when `sigma` fixes it, and
//! `m + sigma(m)` otherwise. Distinct orbit sums have disjoint supports, so
//! the orbit sums of a degree form a basis of that degree slice.

mod echelon;
mod expressible;
mod generators;
mod reduce;
mod zero_sum;

use thiserror::Error;

use crate::poly::{rho_character, Monomial, PolyError, Polynomial};
use crate::rep::{DihedralModule, RepError};

pub use echelon::Echelon;
pub use expressible::is_expressible;
pub use generators::{
    minimal_generator_degrees, subalgebra_degree_slice, DegreeRow, GeneratorTable, SliceBasis,
};
pub use reduce::{
    in_quadratic_ideal, invariant_quadratics, reduce_monomial, split_monomial, Reduction,
    SplitCase, SplitCertificate, SplitWitness,
};
pub use zero_sum::zero_sum_split;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum InvariantError {
    #[error("monomial is not rho-invariant (character {0})")]
    NotRhoInvariant(u32),
    #[error("generator {0} is not homogeneous of positive degree")]
    NonHomogeneous(usize),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("no zero-sum split exists: {0}")]
    Infeasible(String),
    #[error(transparent)]
    Rep(#[from] RepError),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// Degree bound `s + max(r, p)` for generators of `F[V]^G`.
pub fn degree_bound(module: &DihedralModule) -> u32 {
    let spec = module.spec();
    spec.s as u32 + (spec.r() as u32).max(spec.p)
}

/// All monomials of degree `d` in `nvars` variables, descending deglex.
pub fn monomials_of_degree(nvars: usize, d: u32) -> Vec<Monomial> {
    fn rec(i: usize, left: u32, exps: &mut Vec<u32>, out: &mut Vec<Monomial>) {
        if i + 1 == exps.len() {
            exps[i] = left;
            out.push(Monomial::new(exps.clone()));
            return;
        }
        for e in (0..=left).rev() {
            exps[i] = e;
            rec(i + 1, left - e, exps, out);
        }
        exps[i] = 0;
    }
    if nvars == 0 {
        return if d == 0 {
            vec![Monomial::one(0)]
        } else {
            Vec::new()
        };
    }
    let mut out = Vec::new();
    rec(0, d, &mut vec![0; nvars], &mut out);
    out
}

/// `rho`-invariant monomials of degree `d`, in descending deglex order.
pub fn enumerate_rho_invariant_monomials(module: &DihedralModule, d: u32) -> Vec<Monomial> {
    monomials_of_degree(module.layout().nvars(), d)
        .into_iter()
        .filter(|m| rho_character(m, module.spec()) == 0)
        .collect()
}

/// `o(m)` with its representative, the deglex-smaller of `m` and `sigma(m)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbitSum {
    pub representative: Monomial,
    pub polynomial: Polynomial,
}

impl OrbitSum {
    pub fn degree(&self) -> u32 {
        self.representative.degree()
    }
}

pub fn orbit_sum(module: &DihedralModule, m: &Monomial) -> Result<OrbitSum, InvariantError> {
    let layout = module.layout();
    if m.nvars() != layout.nvars() {
        return Err(PolyError::Shape {
            expected: layout.nvars(),
            got: m.nvars(),
        }
        .into());
    }
    let chi = rho_character(m, module.spec());
    if chi != 0 {
        return Err(InvariantError::NotRhoInvariant(chi));
    }
    let image = m.sigma_image(layout);
    let polynomial = Polynomial::from_monomials(
        layout.nvars(),
        if &image == m {
            vec![m.clone()]
        } else {
            vec![m.clone(), image.clone()]
        },
    );
    Ok(OrbitSum {
        representative: image.min(m.clone()),
        polynomial,
    })
}

/// One orbit sum per `sigma`-orbit of degree-`d` `rho`-invariant monomials:
/// a basis of `F[V]^G_d`, ordered by descending representative.
pub fn invariant_basis(module: &DihedralModule, d: u32) -> Vec<OrbitSum> {
    let layout = module.layout();
    enumerate_rho_invariant_monomials(module, d)
        .into_iter()
        .filter(|m| *m <= m.sigma_image(layout))
        .map(|m| orbit_sum(module, &m).expect("enumerated monomials are rho-invariant"))
        .collect()
}
