//! Exact low-dimensional models of the Grover dynamics.
//!
//! With `L~ = span{|w_1>, ..., |w_ell>, |r>}` the iteration `U` leaves `L~`
//! invariant and acts as `-1` on its complement. On `L~` both `I_s` and `U`
//! have explicit `(ell+1) x (ell+1)` matrices, and on the plane spanned by
//! `|w~> = sum|w_i>/sqrt(ell)` and `|r>` the iteration is the rotation
//!
//! ```text
//! [  cos t  sin t ]      cos t = (n - 2 ell)/n
//! [ -sin t  cos t ]      sin t = 2 sqrt(ell (n - ell))/n
//! ```
//!
//! Starting from `|s> = cos a |w~> + sin a |r>` with `cos a = sqrt(ell/n)`, the
//! success probability after `m` steps is `cos^2(m t - a)`.

use serde::Serialize;

use crate::error::{GroverError, Result};
use crate::fullsim::IterationTrace;
use crate::scalar::Scalar;

/// Default largest order for the dense restricted matrices.
pub const DEFAULT_DENSE_CAP: usize = 4097;

/// Rotation angle `theta` and initial angle `alpha` for `ell` targets among `n`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SpectralAngles<T: Scalar = f64> {
    pub theta: T,
    pub alpha: T,
    pub n: usize,
    pub ell: usize,
}

impl<T: Scalar> SpectralAngles<T> {
    /// `theta` comes from the two-argument arctangent of
    /// `(2 sqrt(ell (n - ell)), n - 2 ell)`, which stays on the right branch
    /// for `ell > n/2`. `alpha = arccos(sqrt(ell/n))`, evaluated as
    /// `atan2(sqrt(n - ell), sqrt(ell))` for accuracy near `ell = n`.
    pub fn new(n: usize, ell: usize) -> Result<Self> {
        if n < 2 {
            return Err(GroverError::SizeTooSmall { n, min: 2 });
        }
        if ell == 0 || ell > n {
            return Err(GroverError::EllOutOfRange { ell, n });
        }
        let nf = T::from_count(n);
        let lf = T::from_count(ell);
        let rest = T::from_count(n - ell);
        let two = T::lit(2.0);
        let theta = (two * (lf * rest).sqrt()).atan2(nf - two * lf);
        let alpha = rest.sqrt().atan2(lf.sqrt());
        Ok(SpectralAngles {
            theta,
            alpha,
            n,
            ell,
        })
    }

    /// Marked fraction `ell / n`.
    pub fn marked_fraction(&self) -> T {
        T::from_count(self.ell) / T::from_count(self.n)
    }

    /// `alpha / theta`, the continuous single-shot optimum.
    pub fn peak(&self) -> T {
        self.alpha / self.theta
    }
}

/// The 2x2 rotation `[[cos t, sin t], [-sin t, cos t]]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Rotation2<T: Scalar = f64> {
    pub entries: [[T; 2]; 2],
}

impl<T: Scalar> Rotation2<T> {
    pub fn from_angle(theta: T) -> Self {
        let (s, c) = theta.sin_cos();
        Rotation2 {
            entries: [[c, s], [-s, c]],
        }
    }

    pub fn identity() -> Self {
        Self::from_angle(T::zero())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let a = &self.entries;
        let b = &other.entries;
        let mut out = [[T::zero(); 2]; 2];
        for (i, row) in out.iter_mut().enumerate() {
            for (j, cell) in row.iter_mut().enumerate() {
                *cell = a[i][0] * b[0][j] + a[i][1] * b[1][j];
            }
        }
        Rotation2 { entries: out }
    }

    pub fn transpose(&self) -> Self {
        let e = &self.entries;
        Rotation2 {
            entries: [[e[0][0], e[1][0]], [e[0][1], e[1][1]]],
        }
    }

    pub fn determinant(&self) -> T {
        let e = &self.entries;
        e[0][0] * e[1][1] - e[0][1] * e[1][0]
    }

    /// `m`-fold product by repeated multiplication.
    pub fn power(&self, m: usize) -> Self {
        let mut acc = Self::identity();
        for _ in 0..m {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn apply(&self, v: [T; 2]) -> [T; 2] {
        let e = &self.entries;
        [
            e[0][0] * v[0] + e[0][1] * v[1],
            e[1][0] * v[0] + e[1][1] * v[1],
        ]
    }

    pub fn max_abs_diff(&self, other: &Self) -> T {
        let mut worst = T::zero();
        for i in 0..2 {
            for j in 0..2 {
                worst = worst.max((self.entries[i][j] - other.entries[i][j]).abs());
            }
        }
        worst
    }
}

/// U restricted to the plane `{|w~>, |r>}`.
pub fn reduced_step_matrix<T: Scalar>(angles: &SpectralAngles<T>) -> Rotation2<T> {
    Rotation2::from_angle(angles.theta)
}

/// Which operator a [`RestrictedMatrix`] represents on `L~`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum MatrixBasis {
    /// `I_s` restricted to `L~`.
    Diffusion,
    /// `U = -I_s I_L` restricted to `L~`.
    Grover,
}

/// Dense `(ell+1) x (ell+1)` matrix in the basis `{|w_1>, ..., |w_ell>, |r>}`,
/// stored row-major; column `j` is the image of basis vector `j`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RestrictedMatrix<T: Scalar = f64> {
    pub order: usize,
    pub entries: Vec<T>,
    pub basis_label: MatrixBasis,
}

impl<T: Scalar> RestrictedMatrix<T> {
    fn from_fn(order: usize, basis_label: MatrixBasis, f: impl Fn(usize, usize) -> T) -> Self {
        let mut entries = Vec::with_capacity(order * order);
        for i in 0..order {
            for j in 0..order {
                entries.push(f(i, j));
            }
        }
        RestrictedMatrix {
            order,
            entries,
            basis_label,
        }
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> T {
        self.entries[i * self.order + j]
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.order, self.basis_label, |i, j| self.get(j, i))
    }

    /// Product `self * other`; the label of `self` is kept.
    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.order, other.order, "order mismatch");
        let k = self.order;
        let mut entries = vec![T::zero(); k * k];
        for i in 0..k {
            for l in 0..k {
                let a = self.get(i, l);
                if a == T::zero() {
                    continue;
                }
                for j in 0..k {
                    entries[i * k + j] = entries[i * k + j] + a * other.get(l, j);
                }
            }
        }
        RestrictedMatrix {
            order: k,
            entries,
            basis_label: self.basis_label,
        }
    }

    /// Right-multiplication by a diagonal matrix.
    pub fn scale_columns(&self, diag: &[T]) -> Self {
        Self::from_fn(self.order, self.basis_label, |i, j| {
            self.get(i, j) * diag[j]
        })
    }

    pub fn max_abs_diff(&self, other: &Self) -> T {
        self.entries
            .iter()
            .zip(&other.entries)
            .fold(T::zero(), |w, (&a, &b)| w.max((a - b).abs()))
    }

    /// `max |M^T M - I|`.
    pub fn orthogonality_defect(&self) -> T {
        let gram = self.transpose().matmul(self);
        let k = self.order;
        let mut worst = T::zero();
        for i in 0..k {
            for j in 0..k {
                let target = if i == j { T::one() } else { T::zero() };
                worst = worst.max((gram.get(i, j) - target).abs());
            }
        }
        worst
    }

    /// `max |M - M^T|`.
    pub fn symmetry_defect(&self) -> T {
        self.max_abs_diff(&self.transpose())
    }

    /// Determinant by Gaussian elimination with partial pivoting.
    pub fn determinant(&self) -> T {
        let k = self.order;
        let mut a = self.entries.clone();
        let mut det = T::one();
        for col in 0..k {
            let pivot = (col..k)
                .max_by(|&x, &y| {
                    a[x * k + col]
                        .abs()
                        .partial_cmp(&a[y * k + col].abs())
                        .expect("finite entries")
                })
                .expect("non-empty range");
            if a[pivot * k + col] == T::zero() {
                return T::zero();
            }
            if pivot != col {
                for j in 0..k {
                    a.swap(pivot * k + j, col * k + j);
                }
                det = -det;
            }
            let p = a[col * k + col];
            det = det * p;
            for row in col + 1..k {
                let factor = a[row * k + col] / p;
                if factor == T::zero() {
                    continue;
                }
                for j in col..k {
                    a[row * k + j] = a[row * k + j] - factor * a[col * k + j];
                }
            }
        }
        det
    }

    /// Compresses onto the plane `{|w~>, |r>}`: `Q^T M Q` where the columns of
    /// `Q` are `|w~> = (1, ..., 1, 0)/sqrt(ell)` and `|r> = (0, ..., 0, 1)`.
    pub fn compress_to_plane(&self) -> Rotation2<T> {
        let ell = self.order - 1;
        let lf = T::from_count(ell);
        let root = lf.sqrt();
        let mut block = T::zero();
        let mut top_right = T::zero();
        let mut bottom_left = T::zero();
        for i in 0..ell {
            for j in 0..ell {
                block = block + self.get(i, j);
            }
            top_right = top_right + self.get(i, ell);
            bottom_left = bottom_left + self.get(ell, i);
        }
        Rotation2 {
            entries: [
                [block / lf, top_right / root],
                [bottom_left / root, self.get(ell, ell)],
            ],
        }
    }

    /// Row-major CSV, one matrix row per line.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for i in 0..self.order {
            let row: Vec<String> = (0..self.order)
                .map(|j| self.get(i, j).to_shortest())
                .collect();
            out.push_str(&row.join(","));
            out.push('\n');
        }
        out
    }
}

fn check_dense(n: usize, ell: usize, cap: usize) -> Result<()> {
    if n < 2 {
        return Err(GroverError::SizeTooSmall { n, min: 2 });
    }
    if ell == 0 || ell > n {
        return Err(GroverError::EllOutOfRange { ell, n });
    }
    if ell + 1 > cap {
        return Err(GroverError::CapExceeded {
            order: ell + 1,
            cap,
        });
    }
    Ok(())
}

/// `I_s` restricted to `L~`:
/// `delta_ij - 2/n` on the marked block, `-2 sqrt(n - ell)/n` on the last
/// row and column off the diagonal, `2 ell/n - 1` in the corner.
pub fn restricted_diffusion_matrix<T: Scalar>(
    n: usize,
    ell: usize,
    cap: usize,
) -> Result<RestrictedMatrix<T>> {
    check_dense(n, ell, cap)?;
    let nf = T::from_count(n);
    let two = T::lit(2.0);
    let block = two / nf;
    let edge = two * T::from_count(n - ell).sqrt() / nf;
    let corner = two * T::from_count(ell) / nf - T::one();
    Ok(RestrictedMatrix::from_fn(
        ell + 1,
        MatrixBasis::Diffusion,
        |i, j| match (i == ell, j == ell) {
            (false, false) if i == j => T::one() - block,
            (false, false) => -block,
            (true, true) => corner,
            _ => -edge,
        },
    ))
}

/// `U` restricted to `L~`:
/// `delta_ij - 2/n` on the marked block, `+2 sqrt(n - ell)/n` in the last
/// column, `-2 sqrt(n - ell)/n` in the last row, `1 - 2 ell/n` in the corner.
pub fn restricted_grover_matrix<T: Scalar>(
    n: usize,
    ell: usize,
    cap: usize,
) -> Result<RestrictedMatrix<T>> {
    check_dense(n, ell, cap)?;
    let nf = T::from_count(n);
    let two = T::lit(2.0);
    let block = two / nf;
    let edge = two * T::from_count(n - ell).sqrt() / nf;
    let corner = T::one() - two * T::from_count(ell) / nf;
    Ok(RestrictedMatrix::from_fn(
        ell + 1,
        MatrixBasis::Grover,
        |i, j| match (i == ell, j == ell) {
            (false, false) if i == j => T::one() - block,
            (false, false) => -block,
            (true, true) => corner,
            (false, true) => edge,
            (true, false) => -edge,
        },
    ))
}

/// `I_L` restricted to `L~`: `diag(-1, ..., -1, +1)`.
pub fn restricted_oracle_diagonal<T: Scalar>(ell: usize) -> Vec<T> {
    let mut d = vec![-T::one(); ell + 1];
    d[ell] = T::one();
    d
}

/// `P_m = cos^2(m theta - alpha)`.
pub fn success_probability<T: Scalar>(angles: &SpectralAngles<T>, m: usize) -> T {
    let c = (T::from_count(m) * angles.theta - angles.alpha).cos();
    c * c
}

/// Probability-maximizing integer among `floor(alpha/theta)` and
/// `ceil(alpha/theta)`; ties go to the smaller count.
pub fn optimal_iterations<T: Scalar>(angles: &SpectralAngles<T>) -> (usize, T) {
    let peak = angles.peak();
    let lo = peak.floor().to_usize().unwrap_or(0);
    let hi = peak.ceil().to_usize().unwrap_or(lo);
    let p_lo = success_probability(angles, lo);
    if hi == lo {
        return (lo, p_lo);
    }
    let p_hi = success_probability(angles, hi);
    // values equal up to rounding count as a tie
    let slack = T::lit(4.0) * T::epsilon();
    if p_hi > p_lo + slack {
        (hi, p_hi)
    } else {
        (lo, p_lo)
    }
}

/// `(pi/4) sqrt(n/ell)`; only meaningful for small `ell/n`.
pub fn asymptotic_iterations<T: Scalar>(n: usize, ell: usize) -> T {
    T::FRAC_PI_4() * (T::from_count(n) / T::from_count(ell)).sqrt()
}

/// Closed-form trace `cos^2(m theta - alpha)` for `m = 0..=m_max`.
pub fn predicted_trace<T: Scalar>(angles: &SpectralAngles<T>, m_max: usize) -> IterationTrace<T> {
    IterationTrace {
        probabilities: (0..=m_max)
            .map(|m| success_probability(angles, m))
            .collect(),
        amplitudes_final: None,
    }
}

/// Per-`(n, ell)` summary used by the CLI and sweeps.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AnglesSummary<T: Scalar = f64> {
    pub n: usize,
    pub ell: usize,
    pub theta: T,
    pub alpha: T,
    pub m_opt: usize,
    pub p_opt: T,
    pub m_asymptotic: T,
}

impl<T: Scalar> AnglesSummary<T> {
    pub fn new(angles: &SpectralAngles<T>) -> Self {
        let (m_opt, p_opt) = optimal_iterations(angles);
        AnglesSummary {
            n: angles.n,
            ell: angles.ell,
            theta: angles.theta,
            alpha: angles.alpha,
            m_opt,
            p_opt,
            m_asymptotic: asymptotic_iterations(angles.n, angles.ell),
        }
    }
}
