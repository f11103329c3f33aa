//! Multiobject Grover search: a dense state-vector simulator, the exact
//! invariant-subspace reductions, the closed-form success model and the
//! restart-strategy solver.
//!
//! The numeric types are generic over [`Scalar`] (`f32` or `f64`); the
//! aliases below fix the precision for the common cases. The tolerances
//! quoted throughout the documentation refer to `f64`.

pub mod error;
pub mod fullsim;
pub mod instance;
pub mod reduced;
pub mod restart;
pub mod rng;
pub mod scalar;

pub use error::{GroverError, Result};
pub use fullsim::{
    evolve, evolve_state, orthocomplement_residual, IterationTrace, MeasurementSampler, SimConfig,
    StateVector, DEFAULT_MEMORY_CAP,
};
pub use instance::{classical_expected_queries, classical_expected_queries_exact, SearchInstance};
pub use reduced::{
    asymptotic_iterations, optimal_iterations, predicted_trace, reduced_step_matrix,
    restricted_diffusion_matrix, restricted_grover_matrix, success_probability, AnglesSummary,
    MatrixBasis, RestrictedMatrix, Rotation2, SpectralAngles, DEFAULT_DENSE_CAP,
};
pub use restart::{
    expected_cost, first_order_seed, integer_stop_point, refine_stop_point, simulate_restarts,
    stationarity_residual, MonteCarloReport, PlanMethod, RestartPlan,
};
pub use scalar::Scalar;

pub type StateVector64 = StateVector<f64>;
pub type StateVector32 = StateVector<f32>;
pub type IterationTrace64 = IterationTrace<f64>;
pub type IterationTrace32 = IterationTrace<f32>;
pub type SpectralAngles64 = SpectralAngles<f64>;
pub type SpectralAngles32 = SpectralAngles<f32>;
pub type Rotation64 = Rotation2<f64>;
pub type RestrictedMatrix64 = RestrictedMatrix<f64>;
pub type RestartPlan64 = RestartPlan<f64>;
pub type RestartPlan32 = RestartPlan<f32>;
pub type MonteCarloReport64 = MonteCarloReport<f64>;

/// Exact rational for the classical baseline.
pub type Rational = num_rational::Ratio<u64>;
