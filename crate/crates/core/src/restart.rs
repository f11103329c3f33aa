//! Restart strategy: run `j` iterations, measure, check with the oracle, and
//! start over on failure.
//!
//! With per-trial success probability `p = cos^2(j theta - alpha)` the number
//! of trials is geometric with mean `1/p`, so the expected total number of
//! iterations is
//!
//! ```text
//! E(j) = j sec^2(j theta - alpha)
//! ```
//!
//! `E'(j) = 0` reduces to `2 j theta = -cot(j theta - alpha)`. The smallest
//! positive root below the single-shot peak `alpha/theta` is found with the
//! fixed-point map
//!
//! ```text
//! j <- (alpha - atan(1 / (2 theta j))) / theta
//! ```
//!
//! seeded by the first-order root `(alpha + sqrt(alpha^2 - 2)) / (2 theta)`.

// Negated comparisons below are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{GroverError, Result};
use crate::fullsim::{evolve_state, MeasurementSampler, SimConfig};
use crate::instance::SearchInstance;
use crate::reduced::{optimal_iterations, success_probability, SpectralAngles};
use crate::rng;
use crate::scalar::Scalar;

pub const DEFAULT_TOL: f64 = 1e-12;
pub const DEFAULT_MAX_ITER: usize = 200;

/// Guard band around the zeros of `cos` and `sin`.
const SINGULAR_EPS: f64 = 1e-15;

/// How a [`RestartPlan`] was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PlanMethod {
    /// Converged fixed point of the stationarity equation.
    FixedPoint,
    /// `E` has no interior stationary point below `alpha/theta`; the plan
    /// takes the cheaper of `j = 1` and the single-shot optimum.
    Boundary,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RestartPlan<T: Scalar = f64> {
    pub j_continuous: T,
    pub j_integer: usize,
    pub expected_cost: T,
    pub success_probability_per_trial: T,
    /// `2 j theta + cot(j theta - alpha)` at `j_continuous`; `None` for
    /// boundary plans, which have no stationary point.
    pub residual: Option<T>,
    pub iterations_used: usize,
    pub method: PlanMethod,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MonteCarloReport<T: Scalar = f64> {
    pub trials: usize,
    pub j: usize,
    pub mean_trials_to_success: T,
    pub mean_total_iterations: T,
    pub empirical_success_rate: T,
    /// Marked probability of the simulated `j`-step state.
    pub simulated_success_probability: T,
    pub seed: u64,
}

fn offset<T: Scalar>(angles: &SpectralAngles<T>, j: T) -> T {
    j * angles.theta - angles.alpha
}

/// `E(j) = j / cos^2(j theta - alpha)`.
pub fn expected_cost<T: Scalar>(angles: &SpectralAngles<T>, j: T) -> Result<T> {
    let c = offset(angles, j).cos();
    if c.abs() < T::lit(SINGULAR_EPS) {
        return Err(GroverError::SingularCost {
            j: j.to_f64().unwrap_or(f64::NAN),
        });
    }
    Ok(j / (c * c))
}

/// `2 j theta + cot(j theta - alpha)`; zero exactly at stationary points of `E`.
pub fn stationarity_residual<T: Scalar>(angles: &SpectralAngles<T>, j: T) -> Result<T> {
    let (s, c) = offset(angles, j).sin_cos();
    if s.abs() < T::lit(SINGULAR_EPS) {
        return Err(GroverError::SingularCotangent {
            j: j.to_f64().unwrap_or(f64::NAN),
        });
    }
    Ok(T::lit(2.0) * j * angles.theta + c / s)
}

/// The same condition written with the half angle `v = theta/2`:
/// `4 v j - tan((2j + 1) v)`.
pub fn half_angle_residual<T: Scalar>(angles: &SpectralAngles<T>, j: T) -> T {
    let half = angles.theta / T::lit(2.0);
    T::lit(4.0) * half * j - ((T::lit(2.0) * j + T::one()) * half).tan()
}

/// `E'(j) = sec^2(x) (1 + 2 j theta tan x)` with `x = j theta - alpha`.
pub fn cost_derivative<T: Scalar>(angles: &SpectralAngles<T>, j: T) -> T {
    let x = offset(angles, j);
    let c = x.cos();
    (T::one() + T::lit(2.0) * j * angles.theta * x.tan()) / (c * c)
}

/// Closed-form root of the first-order expansion; needs `alpha^2 >= 2`,
/// i.e. `ell/n <= cos^2(sqrt 2)`.
pub fn first_order_seed<T: Scalar>(angles: &SpectralAngles<T>) -> Result<T> {
    let alpha_sq = angles.alpha * angles.alpha;
    let disc = alpha_sq - T::lit(2.0);
    if disc < T::zero() {
        return Err(GroverError::OutOfValidityRegion {
            alpha_sq: alpha_sq.to_f64().unwrap_or(f64::NAN),
        });
    }
    Ok((angles.alpha + disc.sqrt()) / (T::lit(2.0) * angles.theta))
}

/// Seed used where the first-order root is undefined: `max(1, alpha/(2 theta))`.
pub fn fallback_seed<T: Scalar>(angles: &SpectralAngles<T>) -> T {
    (angles.peak() / T::lit(2.0)).max(T::one())
}

/// One application of `j <- (alpha - atan(1/(2 theta j))) / theta`.
pub fn fixed_point_map<T: Scalar>(angles: &SpectralAngles<T>, j: T) -> T {
    let inner = (T::one() / (T::lit(2.0) * angles.theta * j)).atan();
    (angles.alpha - inner) / angles.theta
}

/// Cheapest of the integer candidates; ties go to the earlier candidate.
fn cheapest<T: Scalar>(angles: &SpectralAngles<T>, candidates: &[usize]) -> Result<(usize, T, T)> {
    let mut best: Option<(usize, T, T)> = None;
    for &j in candidates {
        let jf = T::from_count(j);
        // fail on a singular candidate before using the j/p form
        expected_cost(angles, jf)?;
        let p = success_probability(angles, j);
        let cost = jf / p;
        if best.is_none_or(|(_, c, _)| cost < c) {
            best = Some((j, cost, p));
        }
    }
    Ok(best.expect("at least one candidate"))
}

/// Iterates the fixed-point map from `j0` until `|dj| <= tol * max(1, j)`,
/// then picks the cheaper of the two neighbouring integers.
pub fn refine_stop_point<T: Scalar>(
    angles: &SpectralAngles<T>,
    j0: T,
    tol: T,
    max_iter: usize,
) -> Result<RestartPlan<T>> {
    if !(j0 > T::zero()) || !(tol > T::zero()) {
        return Err(GroverError::InvalidArgument(
            "refine_stop_point needs j0 > 0 and tol > 0".into(),
        ));
    }
    let mut j = j0;
    let mut step = T::infinity();
    let mut used = 0;
    while used < max_iter {
        used += 1;
        let next = fixed_point_map(angles, j);
        if !next.is_finite() || next <= T::zero() {
            return Err(GroverError::NoStationaryPoint { iteration: used });
        }
        step = (next - j).abs();
        j = next;
        if step <= tol * j.max(T::one()) {
            break;
        }
    }
    if !(step <= tol * j.max(T::one())) {
        return Err(GroverError::NoConvergence {
            iterations: used,
            last_step: step.to_f64().unwrap_or(f64::NAN),
        });
    }
    let lo = j.floor().to_usize().unwrap_or(0).max(1);
    let hi = j.ceil().to_usize().unwrap_or(lo).max(1);
    let candidates = if hi == lo { vec![lo] } else { vec![lo, hi] };
    let (j_integer, expected_cost, p) = cheapest(angles, &candidates)?;
    Ok(RestartPlan {
        j_continuous: j,
        j_integer,
        expected_cost,
        success_probability_per_trial: p,
        residual: Some(stationarity_residual(angles, j)?),
        iterations_used: used,
        method: PlanMethod::FixedPoint,
    })
}

/// Seed, refine and integerize with the default tolerance and cap.
///
/// When the map leaves `(0, alpha/theta)` the cost has no interior stationary
/// point there and is increasing up to the single-shot peak; the plan then
/// compares `j = 1` with the single-shot optimum.
pub fn integer_stop_point<T: Scalar>(angles: &SpectralAngles<T>) -> Result<RestartPlan<T>> {
    let seed = first_order_seed(angles).unwrap_or_else(|_| fallback_seed(angles));
    match refine_stop_point(angles, seed, T::lit(DEFAULT_TOL), DEFAULT_MAX_ITER) {
        Err(GroverError::NoStationaryPoint { iteration }) => {
            let (m_opt, _) = optimal_iterations(angles);
            let mut candidates = vec![1];
            if m_opt > 1 {
                candidates.push(m_opt);
            }
            let (j_integer, expected_cost, p) = cheapest(angles, &candidates)?;
            Ok(RestartPlan {
                j_continuous: T::from_count(j_integer),
                j_integer,
                expected_cost,
                success_probability_per_trial: p,
                residual: None,
                iterations_used: iteration,
                method: PlanMethod::Boundary,
            })
        }
        other => other,
    }
}

/// Monte Carlo check of the geometric-expectation argument.
///
/// The `j`-step state is simulated once (it is deterministic); each trial
/// then re-measures it until the oracle accepts the outcome. Trial `t` draws
/// from ChaCha8 stream `t` of `seed`, and the integer totals are reduced
/// exactly, so the report does not depend on scheduling.
pub fn simulate_restarts<T: Scalar>(
    inst: &SearchInstance,
    j: usize,
    trials: usize,
    seed: u64,
    config: &SimConfig,
) -> Result<MonteCarloReport<T>> {
    if j == 0 || trials == 0 {
        return Err(GroverError::InvalidArgument(
            "simulate_restarts needs j >= 1 and trials >= 1".into(),
        ));
    }
    let state = evolve_state::<T>(inst, j, config)?;
    let p = state.marked_probability(inst)?;
    if !(p > T::zero()) {
        return Err(GroverError::SingularCost { j: j as f64 });
    }
    let sampler = MeasurementSampler::new(&state);
    let total_measurements: u64 = (0..trials as u64)
        .into_par_iter()
        .map(|t| {
            let mut generator = rng::stream(seed, t);
            let mut count = 0u64;
            loop {
                count += 1;
                let outcome = sampler.draw(&mut generator);
                if inst.oracle(outcome) == Ok(1) {
                    return count;
                }
            }
        })
        .sum();
    let total = T::from_u64(total_measurements).expect("count representable");
    let trials_f = T::from_count(trials);
    let mean_trials = total / trials_f;
    Ok(MonteCarloReport {
        trials,
        j,
        mean_trials_to_success: mean_trials,
        mean_total_iterations: T::from_count(j) * mean_trials,
        empirical_success_rate: trials_f / total,
        simulated_success_probability: p,
        seed,
    })
}
