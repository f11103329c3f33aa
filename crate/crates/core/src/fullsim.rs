//! Dense real state-vector simulation of the Grover iteration `U = -I_s I_L`.
//!
//! All operators involved are real-orthogonal in the computational basis and
//! the start state is real, so amplitudes are stored as plain reals. The
//! diffusion `-I_s = 2|s><s| - I` is applied in O(n) as the inversion about
//! the mean, `a_i <- 2*mean - a_i`.
//!
//! Nothing here renormalizes: drift is observable, not corrected.

use rand::Rng;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::error::{GroverError, Result};
use crate::instance::SearchInstance;
use crate::rng;
use crate::scalar::{pairwise_sum, pairwise_sum_map, Scalar};

/// Default cap on the number of amplitudes (2^26, about 0.5 GB of `f64`).
pub const DEFAULT_MEMORY_CAP: usize = 1 << 26;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SimConfig {
    pub memory_cap: usize,
}

impl Default for SimConfig {
    fn default() -> Self {
        SimConfig {
            memory_cap: DEFAULT_MEMORY_CAP,
        }
    }
}

impl SimConfig {
    pub fn check(&self, n: usize) -> Result<()> {
        if n > self.memory_cap {
            return Err(GroverError::BudgetExceeded {
                n,
                cap: self.memory_cap,
            });
        }
        Ok(())
    }
}

/// Real amplitudes on the computational basis `|0>, ..., |n-1>`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StateVector<T: Scalar = f64> {
    amplitudes: Vec<T>,
}

impl<T: Scalar> StateVector<T> {
    /// The uniform superposition `|s>`: every amplitude `1/sqrt(n)`.
    pub fn uniform(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(GroverError::SizeTooSmall { n, min: 1 });
        }
        let a = T::one() / T::from_count(n).sqrt();
        Ok(StateVector {
            amplitudes: vec![a; n],
        })
    }

    /// Basis vector `|index>`.
    pub fn basis(n: usize, index: usize) -> Result<Self> {
        if index >= n {
            return Err(GroverError::IndexOutOfRange { index, n });
        }
        let mut amplitudes = vec![T::zero(); n];
        amplitudes[index] = T::one();
        Ok(StateVector { amplitudes })
    }

    /// Wraps raw amplitudes. The operators are linear, so unnormalized probe
    /// vectors are accepted; callers that need a physical state own the norm.
    pub fn from_amplitudes(amplitudes: Vec<T>) -> Self {
        StateVector { amplitudes }
    }

    pub fn n(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[T] {
        &self.amplitudes
    }

    pub fn into_amplitudes(self) -> Vec<T> {
        self.amplitudes
    }

    pub fn norm(&self) -> T {
        pairwise_sum_map(&self.amplitudes, |a| a * a).sqrt()
    }

    pub fn mean(&self) -> T {
        pairwise_sum(&self.amplitudes) / T::from_count(self.n())
    }

    fn check_dims(&self, inst: &SearchInstance) -> Result<()> {
        if self.n() != inst.n() {
            return Err(GroverError::DimensionMismatch {
                state: self.n(),
                instance: inst.n(),
            });
        }
        Ok(())
    }

    /// `I_L`: negate the amplitude of every marked index.
    pub fn apply_oracle_reflection(&mut self, inst: &SearchInstance) -> Result<()> {
        self.check_dims(inst)?;
        for &i in inst.marked() {
            self.amplitudes[i] = -self.amplitudes[i];
        }
        Ok(())
    }

    /// `-I_s`: inversion about the mean amplitude.
    pub fn apply_average_inversion(&mut self) {
        let twice_mean = self.mean() + self.mean();
        for a in &mut self.amplitudes {
            *a = twice_mean - *a;
        }
    }

    /// One Grover iteration: oracle reflection, then inversion about the mean.
    pub fn grover_step(&mut self, inst: &SearchInstance) -> Result<()> {
        self.apply_oracle_reflection(inst)?;
        self.apply_average_inversion();
        Ok(())
    }

    /// Probability of observing a marked index.
    pub fn marked_probability(&self, inst: &SearchInstance) -> Result<T> {
        self.check_dims(inst)?;
        let marked: Vec<T> = inst.marked().iter().map(|&i| self.amplitudes[i]).collect();
        Ok(pairwise_sum_map(&marked, |a| a * a))
    }

    /// `count` independent measurements in the computational basis.
    pub fn sample_measurement(&self, seed: u64, count: usize) -> Vec<usize> {
        let sampler = MeasurementSampler::new(self);
        let mut generator = rng::seeded(seed);
        (0..count).map(|_| sampler.draw(&mut generator)).collect()
    }
}

/// Inverse-CDF sampler over the squared amplitudes of a fixed state.
///
/// A uniform draw `u` in `(0, 1]` selects the first index whose cumulative
/// weight reaches `u * total`; a draw landing exactly on a bin edge resolves
/// to the lower index, and zero-weight bins are never selected.
#[derive(Debug, Clone)]
pub struct MeasurementSampler<T: Scalar = f64> {
    cumulative: Vec<T>,
}

impl<T: Scalar> MeasurementSampler<T> {
    pub fn new(state: &StateVector<T>) -> Self {
        let mut acc = T::zero();
        let cumulative = state
            .amplitudes()
            .iter()
            .map(|&a| {
                acc = acc + a * a;
                acc
            })
            .collect();
        MeasurementSampler { cumulative }
    }

    pub fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        let total = *self.cumulative.last().expect("non-empty state");
        let u = 1.0 - rng.random::<f64>();
        let target = T::lit(u) * total;
        let idx = self.cumulative.partition_point(|&c| c < target);
        idx.min(self.cumulative.len() - 1)
    }
}

/// Marked-subspace probability after each of `0..=m_max` iterations from `|s>`.
#[derive(Debug, Clone, PartialEq)]
pub struct IterationTrace<T: Scalar = f64> {
    pub probabilities: Vec<T>,
    pub amplitudes_final: Option<StateVector<T>>,
}

impl<T: Scalar> IterationTrace<T> {
    pub fn m_max(&self) -> usize {
        self.probabilities.len().saturating_sub(1)
    }

    /// `m,probability` rows with shortest round-trip floats.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("m,probability\n");
        for (m, p) in self.probabilities.iter().enumerate() {
            out.push_str(&format!("{},{}\n", m, p.to_shortest()));
        }
        out
    }
}

impl<T: Scalar> Serialize for IterationTrace<T> {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("IterationTrace", 2)?;
        s.serialize_field("m_max", &self.m_max())?;
        s.serialize_field("probabilities", &self.probabilities)?;
        s.end()
    }
}

/// The state `U^steps |s>`.
pub fn evolve_state<T: Scalar>(
    inst: &SearchInstance,
    steps: usize,
    config: &SimConfig,
) -> Result<StateVector<T>> {
    config.check(inst.n())?;
    let mut state = StateVector::uniform(inst.n())?;
    for _ in 0..steps {
        state.grover_step(inst)?;
    }
    Ok(state)
}

/// Iterates `U` from `|s>` and records the marked probability at every step.
pub fn evolve<T: Scalar>(
    inst: &SearchInstance,
    m_max: usize,
    keep_final: bool,
    config: &SimConfig,
) -> Result<IterationTrace<T>> {
    config.check(inst.n())?;
    let mut state = StateVector::<T>::uniform(inst.n())?;
    let mut probabilities = Vec::with_capacity(m_max + 1);
    probabilities.push(state.marked_probability(inst)?);
    for _ in 0..m_max {
        state.grover_step(inst)?;
        probabilities.push(state.marked_probability(inst)?);
    }
    Ok(IterationTrace {
        probabilities,
        amplitudes_final: keep_final.then_some(state),
    })
}

/// Largest `||U v + v||` over random unit vectors `v` supported on unmarked
/// indices with zero amplitude sum, i.e. vectors orthogonal to both the marked
/// basis states and `|r>`. On that subspace `U` acts as `-1`.
///
/// Returns zero when fewer than two unmarked indices exist (empty probe space).
pub fn orthocomplement_residual<T: Scalar>(
    inst: &SearchInstance,
    trials: usize,
    seed: u64,
) -> Result<T> {
    let n = inst.n();
    if n - inst.ell() < 2 {
        return Ok(T::zero());
    }
    let unmarked: Vec<usize> = (0..n).filter(|&i| !inst.is_marked(i)).collect();
    let mut worst = T::zero();
    for trial in 0..trials {
        let mut generator = rng::stream(seed, trial as u64);
        let raw: Vec<T> = unmarked
            .iter()
            .map(|_| T::lit(generator.random_range(-1.0..1.0)))
            .collect();
        let mean = pairwise_sum(&raw) / T::from_count(raw.len());
        let mut amplitudes = vec![T::zero(); n];
        for (&i, &x) in unmarked.iter().zip(&raw) {
            amplitudes[i] = x - mean;
        }
        let mut probe = StateVector::from_amplitudes(amplitudes);
        let norm = probe.norm();
        if norm == T::zero() {
            continue;
        }
        for a in &mut probe.amplitudes {
            *a = *a / norm;
        }
        let mut image = probe.clone();
        image.grover_step(inst)?;
        let residual: Vec<T> = image
            .amplitudes
            .iter()
            .zip(&probe.amplitudes)
            .map(|(&u, &v)| u + v)
            .collect();
        worst = worst.max(pairwise_sum_map(&residual, |x| x * x).sqrt());
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: &[f64], b: &[f64], tol: f64) -> bool {
        a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).abs() <= tol)
    }

    #[test]
    fn uniform_values() {
        let s = StateVector::<f64>::uniform(4).unwrap();
        assert_eq!(s.amplitudes(), &[0.5, 0.5, 0.5, 0.5]);
        assert_eq!(StateVector::<f64>::uniform(1).unwrap().amplitudes(), &[1.0]);
        let big = StateVector::<f64>::uniform(1 << 20).unwrap();
        assert!(big.amplitudes().iter().all(|&a| a == 2f64.powi(-10)));
        assert!((big.norm() - 1.0).abs() < 1e-12);
        assert!(StateVector::<f64>::uniform(0).is_err());
    }

    #[test]
    fn oracle_reflection_flips_marked_only() {
        let inst = SearchInstance::new(8, &[3, 5]).unwrap();
        let mut s = StateVector::<f64>::uniform(8).unwrap();
        let original = s.clone();
        s.apply_oracle_reflection(&inst).unwrap();
        let a = 1.0 / 8f64.sqrt();
        for (i, &x) in s.amplitudes().iter().enumerate() {
            let expected = if i == 3 || i == 5 { -a } else { a };
            assert_eq!(x, expected);
        }
        s.apply_oracle_reflection(&inst).unwrap();
        assert_eq!(s, original);

        let mut off = StateVector::<f64>::basis(8, 0).unwrap();
        off.apply_oracle_reflection(&inst).unwrap();
        assert_eq!(off, StateVector::basis(8, 0).unwrap());
    }

    #[test]
    fn dimension_mismatch() {
        let inst = SearchInstance::new(8, &[3]).unwrap();
        let mut s = StateVector::<f64>::uniform(4).unwrap();
        assert_eq!(
            s.apply_oracle_reflection(&inst),
            Err(GroverError::DimensionMismatch {
                state: 4,
                instance: 8
            })
        );
        assert!(s.grover_step(&inst).is_err());
        assert!(s.marked_probability(&inst).is_err());
    }

    #[test]
    fn average_inversion_examples() {
        let mut s = StateVector::<f64>::uniform(4).unwrap();
        s.apply_average_inversion();
        assert!(close(s.amplitudes(), &[0.5; 4], 1e-15));

        let mut e = StateVector::<f64>::basis(4, 0).unwrap();
        e.apply_average_inversion();
        assert!(close(e.amplitudes(), &[-0.5, 0.5, 0.5, 0.5], 1e-15));

        let v = vec![0.5, -0.5, 0.25, -0.25];
        let mut z = StateVector::from_amplitudes(v.clone());
        z.apply_average_inversion();
        let negated: Vec<f64> = v.iter().map(|x| -x).collect();
        assert_eq!(z.amplitudes(), negated.as_slice());
    }

    #[test]
    fn single_step_reaches_certainty() {
        let inst = SearchInstance::new(8, &[3, 5]).unwrap();
        let mut s = StateVector::<f64>::uniform(8).unwrap();
        s.grover_step(&inst).unwrap();
        let h = 1.0 / 2f64.sqrt();
        let expected = [0.0, 0.0, 0.0, h, 0.0, h, 0.0, 0.0];
        assert!(close(s.amplitudes(), &expected, 1e-12));
        assert!((s.marked_probability(&inst).unwrap() - 1.0).abs() < 1e-12);

        let inst = SearchInstance::new(4, &[2]).unwrap();
        let mut s = StateVector::<f64>::uniform(4).unwrap();
        s.grover_step(&inst).unwrap();
        assert!(close(s.amplitudes(), &[0.0, 0.0, 1.0, 0.0], 1e-12));
    }

    #[test]
    fn unmarked_difference_is_negated() {
        let inst = SearchInstance::new(8, &[3, 5]).unwrap();
        let mut v = vec![0.0; 8];
        v[1] = 1.0;
        v[6] = -1.0;
        let mut s = StateVector::from_amplitudes(v.clone());
        s.grover_step(&inst).unwrap();
        let negated: Vec<f64> = v.iter().map(|x| -x).collect();
        assert!(close(s.amplitudes(), &negated, 1e-12));
    }

    #[test]
    fn evolve_examples() {
        let cfg = SimConfig::default();
        let t = evolve::<f64>(&SearchInstance::new(4, &[1]).unwrap(), 1, false, &cfg).unwrap();
        assert!(close(&t.probabilities, &[0.25, 1.0], 1e-12));
        assert!(t.amplitudes_final.is_none());

        let t = evolve::<f64>(&SearchInstance::new(2, &[0]).unwrap(), 3, true, &cfg).unwrap();
        assert!(close(&t.probabilities, &[0.5; 4], 1e-12));
        assert_eq!(t.amplitudes_final.unwrap().n(), 2);

        let inst = SearchInstance::random(100, 4, 1).unwrap();
        let t = evolve::<f64>(&inst, 3, false, &cfg).unwrap();
        assert!((t.probabilities[3] - 0.9742).abs() < 1e-4);
    }

    #[test]
    fn evolve_respects_budget() {
        let inst = SearchInstance::new(64, &[1]).unwrap();
        let cfg = SimConfig { memory_cap: 32 };
        assert_eq!(
            evolve::<f64>(&inst, 1, false, &cfg),
            Err(GroverError::BudgetExceeded { n: 64, cap: 32 })
        );
    }

    #[test]
    fn marked_probability_examples() {
        let inst = SearchInstance::new(16, &[0, 7, 9]).unwrap();
        let s = StateVector::<f64>::uniform(16).unwrap();
        assert!((s.marked_probability(&inst).unwrap() - 3.0 / 16.0).abs() < 1e-12);
        let off = StateVector::<f64>::basis(16, 1).unwrap();
        assert_eq!(off.marked_probability(&inst).unwrap(), 0.0);
    }

    #[test]
    fn sampling_point_mass_and_determinism() {
        let e3 = StateVector::<f64>::basis(8, 3).unwrap();
        assert!(e3.sample_measurement(99, 1000).iter().all(|&i| i == 3));

        let s = StateVector::<f64>::uniform(16).unwrap();
        assert_eq!(s.sample_measurement(5, 200), s.sample_measurement(5, 200));
    }

    #[test]
    fn sampling_skips_zero_weight_bins() {
        let s = StateVector::from_amplitudes(vec![0.0, 0.0, 0.6, 0.0, 0.8, 0.0]);
        for i in s.sample_measurement(3, 5000) {
            assert!(i == 2 || i == 4);
        }
    }

    #[test]
    fn uniform_sampling_frequencies() {
        let draws = StateVector::<f64>::uniform(4)
            .unwrap()
            .sample_measurement(2024, 100_000);
        let mut counts = [0usize; 4];
        for i in draws {
            counts[i] += 1;
        }
        let sigma = (0.25f64 * 0.75 / 1e5).sqrt();
        for c in counts {
            assert!((c as f64 / 1e5 - 0.25).abs() <= 3.0 * sigma, "{counts:?}");
        }
    }

    #[test]
    fn orthocomplement_examples() {
        let inst = SearchInstance::new(8, &[3, 5]).unwrap();
        assert!(orthocomplement_residual::<f64>(&inst, 100, 1).unwrap() <= 1e-12);

        let inst = SearchInstance::new(4, &[0, 1, 2]).unwrap();
        assert_eq!(orthocomplement_residual::<f64>(&inst, 10, 1).unwrap(), 0.0);

        let inst = SearchInstance::random(1 << 12, 1, 3).unwrap();
        assert!(orthocomplement_residual::<f64>(&inst, 20, 4).unwrap() <= 1e-11);
    }

    #[test]
    fn trace_renderings() {
        let t = IterationTrace {
            probabilities: vec![0.25f64, 1.0],
            amplitudes_final: None,
        };
        assert_eq!(t.to_csv(), "m,probability\n0,0.25\n1,1.0\n");
        assert_eq!(
            serde_json::to_string(&t).unwrap(),
            r#"{"m_max":1,"probabilities":[0.25,1.0]}"#
        );
    }

    #[test]
    fn single_precision_step() {
        let inst = SearchInstance::new(8, &[3, 5]).unwrap();
        let mut s = StateVector::<f32>::uniform(8).unwrap();
        s.grover_step(&inst).unwrap();
        assert!((s.marked_probability(&inst).unwrap() - 1.0).abs() < 1e-6);
    }
}
