//! Generic scalar abstraction for the floating-point kernels.
//!
//! Every numeric kernel (profile evaluation, quadrature, slice volumes,
//! the Reeb minimizer) is written against [`Real`] so it instantiates at
//! `f32` or `f64`; the exact cone combinatorics use rational arithmetic
//! instead and live in [`crate::cone`]. The documented tolerances assume
//! the `f64` instantiation, which is what the CLI and the acceptance
//! suite use.

use num_traits::{Float, FromPrimitive, ToPrimitive};
use std::fmt::{Debug, Display, LowerExp};

/// Floating-point scalar with the transcendental functions the closed-form
/// profiles need (`ln_1p`, `exp_m1`, ...).
pub trait Real: Float + FromPrimitive + ToPrimitive + Debug + Display + LowerExp + 'static {
    /// Lift an `f64` literal into the scalar type.
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("finite literal")
    }

    /// Lift a small integer into the scalar type.
    fn int(n: i64) -> Self {
        Self::from_i64(n).expect("small integer")
    }

    fn as_f64(self) -> f64 {
        self.to_f64().expect("scalar convertible to f64")
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// Neumaier compensated sum of a short sequence of terms.
///
/// Used for cancellation-prone accumulations: the soliton boundary
/// constant and the barycenter/volume sums.
pub fn compensated_sum<F: Real>(terms: impl IntoIterator<Item = F>) -> F {
    let mut sum = F::zero();
    let mut comp = F::zero();
    for t in terms {
        let fresh = sum + t;
        if sum.abs() >= t.abs() {
            comp = comp + ((sum - fresh) + t);
        } else {
            comp = comp + ((t - fresh) + sum);
        }
        sum = fresh;
    }
    sum + comp
}

/// `(1 + tau)^(-m)` evaluated as `exp(-m log1p(tau))`, accurate for tiny tau.
pub fn inv_pow1p<F: Real>(tau: F, m: u32) -> F {
    (-F::int(m as i64) * tau.ln_1p()).exp()
}

/// `(1 + tau)^a - (1 + tau)^b` for integer exponents, via `expm1`/`log1p`
/// so the difference does not cancel near tau = 0.
pub fn pow1p_diff<F: Real>(tau: F, a: i64, b: i64) -> F {
    let l = tau.ln_1p();
    // x^a - x^b = x^b (x^(a-b) - 1) with x = 1 + tau
    (F::int(b) * l).exp() * (F::int(a - b) * l).exp_m1()
}

/// `n!` as an exact integer for small n.
pub fn factorial(n: u32) -> u128 {
    (1..=n as u128).product()
}

/// 200-point log-spaced grid on [lo, hi], endpoints included.
pub fn log_grid<F: Real>(lo: F, hi: F, n: usize) -> Vec<F> {
    assert!(n >= 2 && lo > F::zero() && hi > lo);
    let (a, b) = (lo.ln(), hi.ln());
    (0..n)
        .map(|i| {
            let t = F::from_usize(i).unwrap() / F::from_usize(n - 1).unwrap();
            (a + (b - a) * t).exp()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pow1p_diff_matches_naive_away_from_zero() {
        let tau = 0.7_f64;
        let naive = (1.0 + tau).powi(2) - (1.0 + tau).powi(-3);
        assert!((pow1p_diff(tau, 2, -3) - naive).abs() < 1e-14);
    }

    #[test]
    fn pow1p_diff_no_cancellation_at_tiny_tau() {
        // (1+tau) - (1+tau)^{-1} = 2 tau + O(tau^2)
        let tau = 1e-12_f64;
        let d = pow1p_diff(tau, 1, -1);
        assert!((d / (2.0 * tau) - 1.0).abs() < 1e-9);
    }

    #[test]
    fn compensated_sum_cancels_exactly() {
        let s: f64 = compensated_sum([1e16, 1.0, -1e16]);
        assert_eq!(s, 1.0);
    }

    #[test]
    fn factorial_small_values() {
        assert_eq!(factorial(0), 1);
        assert_eq!(factorial(5), 120);
    }
}
