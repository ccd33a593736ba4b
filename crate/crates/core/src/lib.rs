//! Fractional SIS epidemic models.
//!
//! Two models share the standard-incidence SIS field:
//!
//! * a mixed-order Caputo system, `D^α1 S = f`, `D^α2 I = −f`, solved with
//!   an explicit L1 memory scheme ([`solve_caputo`]), together with the
//!   existence horizons, invariance boxes and delayed-Picard approximants
//!   of the [`existence`] module;
//! * a Caputo-Fabrizio system where only `S` carries the fractional
//!   operator. It reduces exactly to a scalar ODE for `I`
//!   ([`solve_cf`]), with closed-form equilibria and order inversion.
//!
//! All numerics are generic over [`Scalar`] (`f32`, `f64`); the `*F64`
//! aliases below are the usual entry points.

// `!(x > 0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod caputo;
pub mod cf;
pub mod error;
pub mod existence;
pub mod integrate;
pub mod scalar;
pub mod sis;
pub mod special;

pub use caputo::{l1_weights, solve_caputo, solve_caputo_generic, GridSpec, L1Weights};
pub use cf::{
    cf_constants, cf_equilibria, cf_invariant, cf_reduced_rhs, g_alpha, g_alpha_prime,
    g_alpha_second, invert_alpha, invert_alpha_with_scaling, solve_cf, solve_cf_with, CfConstants,
    EquilibriumReport, Monotonicity,
};
pub use error::{Error, Result};
pub use existence::{
    existence_horizon, g_bound, invariance_box, picard_approximant, BoxRegime, InvarianceBox,
};
pub use integrate::{integrate_scalar, IntegratorConfig, Method};
pub use scalar::Scalar;
pub use sis::{sis_field, CaputoOrders, CfOrder, EpidemicParams, ModelTag, Trajectory};
pub use special::gamma;

pub type EpidemicParamsF64 = EpidemicParams<f64>;
pub type CaputoOrdersF64 = CaputoOrders<f64>;
pub type CfOrderF64 = CfOrder<f64>;
pub type GridSpecF64 = GridSpec<f64>;
pub type TrajectoryF64 = Trajectory<f64>;
pub type L1WeightsF64 = L1Weights<f64>;
pub type CfConstantsF64 = CfConstants<f64>;
pub type EquilibriumReportF64 = EquilibriumReport<f64>;
pub type InvarianceBoxF64 = InvarianceBox<f64>;
pub type IntegratorConfigF64 = IntegratorConfig<f64>;

pub type EpidemicParamsF32 = EpidemicParams<f32>;
pub type CaputoOrdersF32 = CaputoOrders<f32>;
pub type CfOrderF32 = CfOrder<f32>;
pub type GridSpecF32 = GridSpec<f32>;
pub type TrajectoryF32 = Trajectory<f32>;
