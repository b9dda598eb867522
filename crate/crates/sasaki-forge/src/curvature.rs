//! Two-form algebra in the split basis `{omega^T, i dt wedge dbar t}`:
//! the Kahler form and Ricci form of the momentum construction, the
//! Einstein/soliton residuals, the volume density, D-homothetic
//! bookkeeping, and the asymptotic-decay orders of the Ricci-flat family.
//!
//! All curvature coefficients use the analytic profile derivatives; the
//! finite-difference route through the volume density exists only as a
//! testing oracle.

use crate::error::{Error, Result};
use crate::profiles::Profile;
use crate::real::Real;
use num_traits::Num;

/// Coefficients of a 2-form `c_transverse omega^T + c_vertical i dt dbar t`
/// at the evaluation point `tau`. (`dt wedge d^c t = i dt wedge dbar t`,
/// so the transverse correction terms live in the same basis.)
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SplitForm<F> {
    pub c_transverse: F,
    pub c_vertical: F,
    pub tau: F,
}

/// The Kahler form of the construction: `(1 + tau, phi(tau))`.
pub fn omega_phi<F: Real>(profile: &Profile<F>, tau: F) -> Result<SplitForm<F>> {
    let jet = profile.eval_phi(tau)?;
    Ok(SplitForm {
        c_transverse: F::one() + tau,
        c_vertical: jet.phi,
        tau,
    })
}

/// The Ricci form:
///
/// ```text
/// rho = ( kappa - (m phi + (1+tau) phi') / (1+tau) ) omega^T
///     - ( (m phi / (1+tau))' + phi'' ) phi  i dt dbar t
/// ```
pub fn ricci_phi<F: Real>(profile: &Profile<F>, tau: F) -> Result<SplitForm<F>> {
    let jet = profile.eval_phi(tau)?;
    let mf = F::int(profile.m() as i64);
    let one_tau = F::one() + tau;
    let c_transverse = profile.kappa() - (mf * jet.phi + one_tau * jet.dphi) / one_tau;
    // (m phi/(1+tau))' = m (phi' (1+tau) - phi) / (1+tau)^2
    let d_ratio = mf * (jet.dphi * one_tau - jet.phi) / (one_tau * one_tau);
    let c_vertical = -(d_ratio + jet.d2phi) * jet.phi;
    Ok(SplitForm {
        c_transverse,
        c_vertical,
        tau,
    })
}

/// Componentwise soliton residual `rho - alpha omega + (mu phi, (mu phi)' phi)`,
/// identically `(0, 0)` for the closed-form soliton profiles.
pub fn soliton_residual<F: Real>(profile: &Profile<F>, tau: F) -> Result<SplitForm<F>> {
    let Some(sol) = profile.soliton() else {
        return Err(Error::InvalidConfig(
            "soliton_residual needs a soliton profile".into(),
        ));
    };
    let mu = sol.mu();
    let alpha = profile.alpha();
    let jet = profile.eval_phi(tau)?;
    let rho = ricci_phi(profile, tau)?;
    let omega = omega_phi(profile, tau)?;
    Ok(SplitForm {
        c_transverse: rho.c_transverse - alpha * omega.c_transverse + mu * jet.phi,
        c_vertical: rho.c_vertical - alpha * omega.c_vertical + mu * jet.dphi * jet.phi,
        tau,
    })
}

/// The volume density `(m+1) (1+tau)^m phi(tau)` of
/// `omega_phi^{m+1}` against the reference volume element.
pub fn volume_density<F: Real>(profile: &Profile<F>, tau: F) -> Result<F> {
    let jet = profile.eval_phi(tau)?;
    let m = profile.m();
    let pow = (F::int(m as i64) * tau.ln_1p()).exp();
    Ok(F::int(m as i64 + 1) * pow * jet.phi)
}

/// D-homothetic transform data: `r -> r^a` maps a transverse Einstein
/// constant `kappa` to `kappa / a`. Generic over the scalar so rational
/// instantiations stay exact.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomotheticParams<T> {
    pub a: T,
    pub kappa_in: T,
    pub kappa_out: T,
}

/// `kappa' = kappa / a` for positive `kappa` and `a`.
pub fn d_homothetic<T>(kappa: T, a: T) -> Result<HomotheticParams<T>>
where
    T: Num + PartialOrd + Clone,
{
    if a <= T::zero() {
        return Err(Error::NonPositiveInput(
            "homothetic exponent a must be positive".into(),
        ));
    }
    if kappa <= T::zero() {
        return Err(Error::NonPositiveInput(
            "transverse Einstein constant kappa must be positive".into(),
        ));
    }
    let kappa_out = kappa.clone() / a.clone();
    Ok(HomotheticParams {
        a,
        kappa_in: kappa,
        kappa_out,
    })
}

/// Difference of the transverse coefficients of the constructed Ricci-flat
/// metric and the reference cone metric at radius `r`:
/// `(m+1) [ (r^{2(m+1)} + 1)^{1/(m+1)} - r^2 ]`, of order `r^{-2m}`.
pub fn first_term_difference<F: Real>(m: u32, r: F) -> F {
    let m1 = F::int(m as i64 + 1);
    let x = r.powi(-2 * (m as i32 + 1));
    m1 * r * r * (x.ln_1p() / m1).exp_m1()
}

/// Difference of the radial coefficients: the construction gives
/// `2(m+1) (1 + r^{-2(m+1)})^{-m/(m+1)}` against the cone's `2(m+1)`,
/// so the difference is of order `r^{-(2m+2)}`.
pub fn second_term_difference<F: Real>(m: u32, r: F) -> F {
    let m1 = F::int(m as i64 + 1);
    let x = r.powi(-2 * (m as i32 + 1));
    F::int(2) * m1 * (-F::int(m as i64) * x.ln_1p() / m1).exp_m1()
}

/// Fitted decay orders of the two coefficient differences, sampled at
/// `r in {10, 10^2, 10^3, 10^4}`.
#[derive(Debug, Clone)]
pub struct DecayReport<F> {
    /// Least-squares slope of `log |Delta_1|` vs `log r`; tends to `-2m`.
    pub first_order: F,
    /// `r^{2m} Delta_1` at the largest sample; tends to `1`.
    pub first_constant: F,
    /// Slope of `log |Delta_2|` vs `log r`; tends to `-(2m+2)`.
    pub second_order: F,
    /// The sampled radii.
    pub radii: Vec<F>,
}

/// Fit the decay orders of the Ricci-flat (`k = p`) comparison with the
/// reference cone metric for base dimension `m`.
pub fn asymptotic_decay<F: Real>(m: u32) -> DecayReport<F> {
    let radii: Vec<F> = [1e1, 1e2, 1e3, 1e4].iter().map(|&r| F::lit(r)).collect();
    let xs: Vec<F> = radii.iter().map(|&r| r.ln()).collect();
    let y1: Vec<F> = radii
        .iter()
        .map(|&r| first_term_difference(m, r).abs().ln())
        .collect();
    let y2: Vec<F> = radii
        .iter()
        .map(|&r| second_term_difference(m, r).abs().ln())
        .collect();
    let r_top = radii[radii.len() - 1];
    DecayReport {
        first_order: ls_slope(&xs, &y1),
        first_constant: r_top.powi(2 * m as i32) * first_term_difference(m, r_top),
        second_order: ls_slope(&xs, &y2),
        radii,
    }
}

fn ls_slope<F: Real>(xs: &[F], ys: &[F]) -> F {
    let n = F::int(xs.len() as i64);
    let mean = |v: &[F]| v.iter().fold(F::zero(), |a, &b| a + b) / n;
    let (mx, my) = (mean(xs), mean(ys));
    let mut num = F::zero();
    let mut den = F::zero();
    for (&x, &y) in xs.iter().zip(ys) {
        num = num + (x - mx) * (y - my);
        den = den + (x - mx) * (x - mx);
    }
    num / den
}
