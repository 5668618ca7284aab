//! Constrained differential equations whose fast variables relax onto the
//! critical set of an elementary catastrophe potential.
//!
//! The crate covers the full pipeline: the seven polynomial potentials and
//! their constraint geometry ([`family`]), charts on the critical manifold and
//! the adjugate-based desingularized slow field ([`chart`], [`desing`]),
//! event-aware integration of the reduced dynamics ([`integrate`]), finite
//! jumps along fast fibers ([`jumps`]), three-parameter normal forms and
//! spectral classification ([`classify`]), stiff slow-fast integration and
//! convergence studies against the reduced limit ([`slowfast`]), and
//! Thom–Boardman strata with parametrized samplers ([`strata`]).
//!
//! Sampling sweeps are data-parallel through [`par`]; the `parallel` feature
//! (default) backs them with rayon, and disabling it falls back to sequential
//! iteration with identical results.

pub mod chart;
pub mod classify;
pub mod desing;
pub mod error;
pub mod family;
pub mod integrate;
pub mod jumps;
pub mod models;
pub mod par;
pub mod poly;
pub mod roots;
pub mod slowfast;
pub mod strata;
pub mod tol;

pub use chart::{chart_dim, chart_names, lift_to_constraint, total_to_chart, ChartPoint};
pub use desing::{CdeSpec, PolynomialMap};
pub use error::{CdeError, Result};
pub use family::{
    classify_membership, eval_potential, grad_fast, hessian_fast, Attracting, CatastropheFamily,
    FamilyTag, SetMembership, TotalPoint,
};
pub use tol::Tolerances;
