//! Independent reference computations shared by the integration tests.
//! Nothing here calls into the library's numerical routines.
#![allow(dead_code)]

use num_rational::Ratio;

/// Angles from the arcsine/arccosine definitions (valid for `ell <= n/2`).
pub fn reference_angles(n: usize, ell: usize) -> (f64, f64) {
    let (nf, lf) = (n as f64, ell as f64);
    let theta = (2.0 * (lf * (nf - lf)).sqrt() / nf).asin();
    let alpha = (lf / nf).sqrt().acos();
    (theta, alpha)
}

/// Root of `2 j theta + cot(j theta - alpha)` on `(alpha/(2 theta), alpha/theta)`
/// by plain bisection.
pub fn bisection_root(theta: f64, alpha: f64) -> f64 {
    let f = |j: f64| {
        let x = j * theta - alpha;
        2.0 * j * theta + x.cos() / x.sin()
    };
    let mut lo = alpha / (2.0 * theta);
    let mut hi = alpha / theta * (1.0 - 1e-12);
    assert!(f(lo) > 0.0 && f(hi) < 0.0, "root not bracketed");
    for _ in 0..400 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if f(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Average 1-based position of the first marked slot over every placement of
/// `ell` marked items among `n` slots.
pub fn brute_force_first_hit(n: usize, ell: usize) -> Ratio<u64> {
    let mut total = 0u64;
    let mut count = 0u64;
    for mask in 0u32..(1 << n) {
        if mask.count_ones() as usize == ell {
            total += mask.trailing_zeros() as u64 + 1;
            count += 1;
        }
    }
    Ratio::new(total, count)
}

/// Truncated series `sum_k k p (1-p)^(k-1)`.
pub fn geometric_mean_series(p: f64) -> f64 {
    let mut sum = 0.0;
    let mut tail = 1.0;
    for k in 1..200_000 {
        sum += k as f64 * p * tail;
        tail *= 1.0 - p;
        if tail < 1e-300 {
            break;
        }
    }
    sum
}

/// Log-uniform integer in `[lo, hi]`.
pub fn log_uniform<R: rand::Rng>(rng: &mut R, lo: usize, hi: usize) -> usize {
    let x = rng.random_range((lo as f64).ln()..=(hi as f64).ln()).exp();
    (x.round() as usize).clamp(lo, hi)
}
