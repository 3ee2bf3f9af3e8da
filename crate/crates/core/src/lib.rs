//! L1 discretization of the Caputo fractional derivative.
//!
//! The crate is split along the lines of the computation:
//!
//! * [`special_fn`]: gamma and Riemann zeta on the real ranges the constants need.
//! * [`testbed`]: Hölder test functions `(t - 1/2)^k |t - 1/2|^β` and empirical
//!   estimators for the Hölder seminorm and the modulus of continuity.
//! * [`l1`]: the L1 weights, the scheme itself and the piecewise-linear interpolant.
//! * [`oracle`]: reference values of the Caputo derivative by singularity-aware
//!   quadrature, plus the closed-form Caputo derivative of the interpolant.
//! * [`analysis`]: explicit truncation-error constants, interpolation bounds and
//!   the nested-grid convergence-order estimator.
//! * [`experiments`]: order tables and bound-verification sweeps built on the above.

// `!(x > 0.0)` style checks are deliberate: they reject NaN as well.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
mod error;
pub mod experiments;
pub mod l1;
pub mod oracle;
pub mod special_fn;
pub mod testbed;

pub use analysis::{
    asymptotic_optimal_constant, caputo_wellposed_bound, error_constant, estimate_order, interpolation_bound,
    interpolation_bound_with_modulus, truncation_bound, ErrorConstantParams, OrderEstimate,
};
pub use error::{Error, Result};
pub use l1::{interpolate, l1_apply, l1_apply_all, weights, L1Weights, SampledFunction, UniformGrid};
pub use oracle::{caputo_of_interpolant, caputo_reference, CaputoEstimate, QuadratureConfig};
pub use special_fn::{gamma, riemann_zeta};
pub use testbed::{
    holder_seminorm, make_test_function, modulus_of_continuity, y_test, HolderFunction, TestFunctionSpec,
};
