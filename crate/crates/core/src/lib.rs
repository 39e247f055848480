//! Invariant theory of the dihedral group `D_2p` (`p` odd) over fields of
//! characteristic two.
//!
//! * [`gf2m`]: exact GF(2^m) arithmetic with a primitive `p`-th root of unity.
//! * [`rep`]: modules, the group action, and decomposition into
//!   indecomposables.
//! * [`poly`]: sparse polynomials on the coordinate layout of a module.
//! * [`invariants`]: orbit sums, generator degrees, and the constructive
//!   splitting of high-degree invariant monomials.
//! * [`separating`]: explicit separating sets and exhaustive or sampled
//!   verification against true orbits.

pub mod gf2m;
pub mod invariants;
pub mod linalg;
pub mod poly;
pub mod rep;
pub mod separating;

pub use gf2m::{Field, FieldElement, FieldError, FieldParams};
pub use poly::{Monomial, PolyError, Polynomial, VariableLayout};
pub use rep::{DihedralModule, GroupElement, ModuleSpec, Point, RepError};
