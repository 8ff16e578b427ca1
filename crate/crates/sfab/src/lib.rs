//! Exact harmonic analysis on locally finite regular affine buildings.
//!
//! The crate computes, in exact arithmetic over the rationals (with formal
//! square roots of the building parameters), the objects attached to a
//! regular affine building of irreducible type: vertex counts `N_lambda`,
//! Macdonald spherical functions `P_lambda`, structure constants of the
//! vertex-averaging algebra, Plancherel densities on the torus of algebra
//! homomorphisms, boundary horocycle data, and operator norms. Rank-one
//! buildings (homogeneous and semi-homogeneous trees) are materialized
//! explicitly and serve as ground-truth oracles for the general formulas.
//!
//! Modules follow the mathematical layering:
//!
//! - [`qlaurent`]: Laurent polynomials in the parameter square roots
//!   `z_i = q_i^(1/2)` with rational coefficients, plus exact division.
//! - [`torus`]: Laurent polynomials in torus exponentials `x^lambda` with
//!   [`qlaurent::QLaurent`] coefficients, and numeric evaluation points.
//! - [`root_datum`]: irreducible root systems (reduced and `BC_n`),
//!   coweight lattices, and finite Weyl groups.
//! - [`parameters`]: validated building parameter systems, `tau` tables,
//!   translation lengths, Poincare polynomials, and the `r`-homomorphism.
//! - [`spherical`]: the spherical functions, their exact monomial
//!   expansions, the `c`-function, and evaluation.
//! - [`hecke`]: vertex counts, saturated coweight sets, structure
//!   constants, the boundary-integral homomorphism, and horocycle counts.
//! - [`plancherel`]: Plancherel densities (standard and exceptional),
//!   torus quadrature, orthogonality and triple-product integrals.
//! - [`tree`]: explicit truncated trees realizing rank-one buildings.
//! - [`selftest`]: the cross-verification suite wired into both
//!   `cargo test` and the CLI `selftest` subcommand.

pub mod context;
pub mod hecke;
pub mod parameters;
pub mod plancherel;
pub mod qlaurent;
pub mod root_datum;
pub mod selftest;
pub mod spherical;
pub mod torus;
pub mod tree;

pub use context::Context;
pub use qlaurent::{QLaurent, QRatio, Rat};
pub use root_datum::{Coweight, RootSystem, RsType, WeylElement, WeylGroup};

/// Crate-wide error type.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("unsupported root system: type {0} of rank {1}")]
    UnsupportedType(String, usize),
    #[error("Weyl group enumeration would exceed the cap of {cap} elements ({order} needed)")]
    EnumerationCap { cap: usize, order: usize },
    #[error("coweight {0:?} is not dominant")]
    NotDominant(Vec<i64>),
    #[error("parameter mismatch: q_{i} = {qi} and q_{j} = {qj} must agree (conjugate reflection class {{{class:?}}})")]
    ParamClassMismatch {
        i: usize,
        j: usize,
        qi: String,
        qj: String,
        class: Vec<usize>,
    },
    #[error("parameters must satisfy q_i >= 1; got q_{0} = {1}")]
    ParamOutOfRange(usize, String),
    #[error("a BC root system requires q_0 != q_n; for equal parameters use type {0} instead")]
    BcEqualParameters(String),
    #[error("exact division failed: nonzero remainder")]
    NonzeroRemainder,
    #[error("division by zero polynomial")]
    DivisionByZero,
    #[error("evaluation hit a vanishing c-function denominator (factor {0})")]
    SingularPoint(usize),
    #[error("tree truncation too shallow: {0}")]
    Truncation(String),
    #[error("tree size guard: {0} nodes requested, cap is {1}")]
    TreeSize(u64, u64),
    #[error("quadrature did not converge: residual {residual} after grid {grid}")]
    NoConvergence { residual: f64, grid: usize },
    #[error("count {0} is not a nonnegative integer (identity {1})")]
    NonIntegerCount(String, &'static str),
    #[error("internal consistency failure ({identity}): {detail}")]
    Inconsistent {
        identity: &'static str,
        detail: String,
    },
    #[error("bad input: {0}")]
    BadInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;
