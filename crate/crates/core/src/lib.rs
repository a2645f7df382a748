//! First-order sensitivity analysis of robust linear and second-order-cone
//! programs under scaled uncertainty sets.
//!
//! Given a nominal conic program, a nominal optimum `x̄`, and structured
//! uncertainty in the constraint data, the crate assembles and solves the
//! tangential problem
//!
//! ```text
//! min  c^T γ   s.t.   A_i γ + L_i(ΔU_i) ⊆ T_{Q_i}(A_i x̄ - b_i)
//! ```
//!
//! whose solution `(γ̄, ṽ)` predicts the robust optimum to first order when
//! the uncertainty is scaled by ε: the robust value behaves like
//! `v̄ + ε ṽ + o(ε)` and the robust solution like `x̄ + ε γ̄ + o(ε)`. Exact
//! robust counterparts and an ε-sweep harness verify the prediction, and an
//! uncertainty-set calculus probes how tangential values behave under
//! scaling, translation and Minkowski sums.
//!
//! All numerics are generic over the scalar type ([`scalar::Scalar`], i.e.
//! `f32` or `f64`); the `*64` aliases at the crate root are what the CLI and
//! JSON layers use.

pub mod cones;
pub mod cutting;
pub mod linalg;
pub mod lp;
pub mod options;
pub mod program;
pub mod scalar;
pub mod tangential;
pub mod uncertainty;

pub use cones::{Cone, TangentCone};
pub use lp::{LpProblem, LpSolution, LpStatus};
pub use options::{SolveOptions, Tolerances};
pub use program::{Block, ConicProgram, NominalSolution};
pub use scalar::Scalar;
pub use tangential::{TangentialProblem, TangentialSolution};
pub use uncertainty::{LMap, UncertaintySet};

/// Concrete double-precision aliases.
pub type Cone64 = cones::Cone<f64>;
pub type TangentCone64 = cones::TangentCone<f64>;
pub type UncertaintySet64 = uncertainty::UncertaintySet<f64>;
pub type LMap64 = uncertainty::LMap<f64>;
pub type LpProblem64 = lp::LpProblem<f64>;
pub type LpSolution64 = lp::LpSolution<f64>;
