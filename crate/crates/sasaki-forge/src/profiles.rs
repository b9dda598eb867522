//! Closed-form momentum-construction profiles.
//!
//! The Einstein profile solves
//!
//! ```text
//! kappa - (m phi + (1+tau) phi') / (1+tau) = alpha (1+tau),  phi(0) = 0
//! ```
//!
//! in closed form, and the soliton profile solves
//!
//! ```text
//! phi' + (m/(1+tau) - mu) phi + (kappa - 2) tau - 2 = 0,     phi(0) = 0
//! ```
//!
//! Both families satisfy `phi'(0) = 2`, the condition under which the
//! metric they generate extends over the zero section; for the Einstein
//! family this forces `alpha = kappa - 2`. Every evaluator returns analytic
//! first and second derivatives, no finite differencing.

use crate::error::{Error, Result};
use crate::real::{compensated_sum, factorial, inv_pow1p, pow1p_diff, Real};

/// Value and first two derivatives of a profile at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhiJet<F> {
    pub phi: F,
    pub dphi: F,
    pub d2phi: F,
}

/// Asymptotic growth of a profile as tau goes to infinity.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GrowthClass {
    Linear,
    Quadratic,
}

/// Soliton family, named by the sign of the Einstein constant offset:
/// `kappa < 2` expanding, `kappa = 2` steady, `kappa > 2` shrinking
/// (equivalently `k > p`, `k = p`, `k < p`).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolitonFamily {
    Expanding,
    Steady,
    Shrinking,
}

/// Kahler-Einstein profile on the total space of `L^k` with `K_M = L^p`:
/// `kappa = 2p/k` and `alpha = kappa - 2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KeProfile<F> {
    m: u32,
    p: u32,
    k: u32,
    kappa: F,
    alpha: F,
}

/// Build the closed-form Einstein profile
///
/// ```text
/// phi(tau) = kappa/(m+1) ((1+tau) - (1+tau)^-m)
///          - alpha/(m+2) ((1+tau)^2 - (1+tau)^-m)
/// ```
///
/// valid (positive on tau > 0) exactly in the regime `k >= p`.
pub fn ke_profile<F: Real>(m: u32, p: u32, k: u32) -> Result<KeProfile<F>> {
    if m < 1 || p < 1 || k < 1 {
        return Err(Error::DimensionMismatch(format!(
            "m, p, k must be positive integers, got ({m}, {p}, {k})"
        )));
    }
    if k < p {
        return Err(Error::PositivityViolation { p, k });
    }
    let kappa = F::int(2) * F::int(p as i64) / F::int(k as i64);
    let alpha = kappa - F::int(2);
    Ok(KeProfile {
        m,
        p,
        k,
        kappa,
        alpha,
    })
}

impl<F: Real> KeProfile<F> {
    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn kappa(&self) -> F {
        self.kappa
    }

    pub fn alpha(&self) -> F {
        self.alpha
    }

    fn jet(&self, tau: F) -> PhiJet<F> {
        let m = self.m;
        let mf = F::int(m as i64);
        let one_tau = F::one() + tau;
        let inv = inv_pow1p(tau, m); // (1+tau)^{-m}
        let inv1 = inv / one_tau; // (1+tau)^{-m-1}
        let inv2 = inv1 / one_tau; // (1+tau)^{-m-2}

        // a = (1+tau) - (1+tau)^{-m}, b = (1+tau)^2 - (1+tau)^{-m}
        let a = pow1p_diff(tau, 1, -(m as i64));
        let b = pow1p_diff(tau, 2, -(m as i64));
        let da = F::one() + mf * inv1;
        let db = F::int(2) * one_tau + mf * inv1;
        let mm1 = mf * (mf + F::one());
        let d2a = -mm1 * inv2;
        let d2b = F::int(2) - mm1 * inv2;

        let ka = self.kappa / (mf + F::one());
        let ab = self.alpha / (mf + F::int(2));
        PhiJet {
            phi: ka * a - ab * b,
            dphi: ka * da - ab * db,
            d2phi: ka * d2a - ab * d2b,
        }
    }
}

/// Soliton profile: the closed-form solution of the first-order linear
/// soliton ODE with `phi(0) = 0`, namely
///
/// ```text
/// phi(tau) = nu e^{mu(1+tau)} / (1+tau)^m
///          + (kappa-2)(1+tau)/mu
///          + (kappa - 2 - kappa mu/(m+1)) / mu^{m+2}
///            * sum_{j=0}^{m} (m+1)!/j! mu^j (1+tau)^{j-m}
/// ```
///
/// with `nu` pinned by `phi(0) = 0`. For the shrinking family `mu` is the
/// unique positive root of `nu(kappa, mu) = 0` and the exponential term is
/// dropped exactly.
#[derive(Debug, Clone, PartialEq)]
pub struct SolitonProfile<F> {
    m: u32,
    kappa: F,
    mu: F,
    nu: F,
    family: SolitonFamily,
    /// Coefficient of the linear term `(1+tau)`.
    lin: F,
    /// Common factor of the inverse-power tail.
    tail: F,
    /// `(m+1)!/j! mu^j` for `j = 0..=m`.
    coeffs: Vec<F>,
}

/// The boundary constant `nu(kappa, mu)` that makes the closed-form
/// soliton solution vanish at tau = 0:
///
/// ```text
/// nu = e^{-mu} [ (2-kappa)/mu
///              + (2 - kappa + kappa mu/(m+1)) / mu^{m+2}
///                * sum_{j=0}^{m} (m+1)!/j! mu^j ]
/// ```
pub fn soliton_nu<F: Real>(m: u32, kappa: F, mu: F) -> Result<F> {
    if mu == F::zero() {
        return Err(Error::MuZero);
    }
    let two = F::int(2);
    let m1 = F::int(m as i64 + 1);
    let s = compensated_sum((0..=m).map(|j| {
        let c = factorial(m + 1) / factorial(j);
        F::lit(c as f64) * mu.powi(j as i32)
    }));
    let head = (two - kappa) / mu;
    let tail = (two - kappa + kappa * mu / m1) * s / mu.powi(m as i32 + 2);
    Ok((-mu).exp() * compensated_sum([head, tail]))
}

/// The unique positive root of `nu(kappa, mu) = 0` for `kappa > 2`:
/// bracket expansion (nu is negative near 0+ and eventually positive),
/// bisection to width 1e-14, one Newton polish.
pub fn solve_soliton_mu<F: Real>(m: u32, kappa: F) -> Result<F> {
    let mut lo = F::lit(1e-6);
    let f_lo = soliton_nu(m, kappa, lo)?;
    if f_lo >= F::zero() {
        // for kappa <= 2 the residual is already positive at 0+
        return Err(Error::BracketFailure {
            kappa: kappa.as_f64(),
            upper: lo.as_f64(),
        });
    }
    let mut hi = F::lit(64.0);
    let cap = F::lit((1u64 << 20) as f64);
    while soliton_nu(m, kappa, hi)? <= F::zero() {
        hi = hi * F::int(2);
        if hi > cap {
            return Err(Error::BracketFailure {
                kappa: kappa.as_f64(),
                upper: cap.as_f64(),
            });
        }
    }
    let width = F::lit(1e-14);
    while hi - lo > width {
        let mid = F::lit(0.5) * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if soliton_nu(m, kappa, mid)? < F::zero() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let mut root = F::lit(0.5) * (lo + hi);
    // one Newton polish with a central-difference slope
    let h = F::lit(1e-7) * root;
    let slope =
        (soliton_nu(m, kappa, root + h)? - soliton_nu(m, kappa, root - h)?) / (F::int(2) * h);
    if slope != F::zero() {
        let polished = root - soliton_nu(m, kappa, root)? / slope;
        if polished > lo - width && polished < hi + width {
            root = polished;
        }
    }
    Ok(root)
}

/// Build a soliton profile, tagging the family from the `(kappa, mu)`
/// signs. For the shrinking family `mu` must already solve
/// `nu(kappa, mu) = 0` (use [`solve_soliton_mu`]).
pub fn soliton_profile<F: Real>(m: u32, kappa: F, mu: F) -> Result<SolitonProfile<F>> {
    if m < 1 {
        return Err(Error::DimensionMismatch(format!(
            "m must be a positive integer, got {m}"
        )));
    }
    if mu == F::zero() {
        return Err(Error::MuZero);
    }
    let two = F::int(2);
    let nu = soliton_nu(m, kappa, mu)?;
    // evaluating nu at a true root leaves roundoff that scales with the
    // inner sum over mu^{m+2}, which blows up toward the steady limit
    let noise_scale = {
        let s_abs =
            compensated_sum((0..=m).map(|j| {
                F::lit((factorial(m + 1) / factorial(j)) as f64) * mu.abs().powi(j as i32)
            }));
        (s_abs / mu.abs().powi(m as i32 + 2)).max(F::one())
    };
    let family = if kappa < two && mu < F::zero() {
        SolitonFamily::Expanding
    } else if kappa == two && mu < F::zero() {
        SolitonFamily::Steady
    } else if kappa > two && mu > F::zero() && nu.abs() <= F::lit(1e-12) * noise_scale {
        SolitonFamily::Shrinking
    } else {
        return Err(Error::InvalidFamily {
            kappa: kappa.as_f64(),
            mu: mu.as_f64(),
        });
    };
    // the shrinking solution drops the exponential term exactly; keeping
    // the ~1e-16 residual nu would overflow e^{mu tau} at large tau
    let nu = if family == SolitonFamily::Shrinking {
        F::zero()
    } else {
        nu
    };
    let m1 = F::int(m as i64 + 1);
    let lin = (kappa - two) / mu;
    let tail = (kappa - two - kappa * mu / m1) / mu.powi(m as i32 + 2);
    let coeffs = (0..=m)
        .map(|j| F::lit((factorial(m + 1) / factorial(j)) as f64) * mu.powi(j as i32))
        .collect();
    Ok(SolitonProfile {
        m,
        kappa,
        mu,
        nu,
        family,
        lin,
        tail,
        coeffs,
    })
}

impl<F: Real> SolitonProfile<F> {
    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn kappa(&self) -> F {
        self.kappa
    }

    pub fn mu(&self) -> F {
        self.mu
    }

    /// The stored exponential coefficient (exactly zero for shrinking).
    pub fn nu(&self) -> F {
        self.nu
    }

    pub fn family(&self) -> SolitonFamily {
        self.family
    }

    fn jet(&self, tau: F) -> PhiJet<F> {
        let mf = F::int(self.m as i64);
        let one_tau = F::one() + tau;
        let l = tau.ln_1p();

        let mut phi_terms = Vec::with_capacity(self.m as usize + 3);
        let mut dphi_terms = Vec::with_capacity(self.m as usize + 3);
        let mut d2_terms = Vec::with_capacity(self.m as usize + 3);

        if self.nu != F::zero() {
            let e = self.nu * (self.mu * one_tau).exp() * inv_pow1p(tau, self.m);
            let w = self.mu - mf / one_tau;
            phi_terms.push(e);
            dphi_terms.push(e * w);
            d2_terms.push(e * (w * w + mf / (one_tau * one_tau)));
        }

        phi_terms.push(self.lin * one_tau);
        dphi_terms.push(self.lin);

        for (j, &c) in self.coeffs.iter().enumerate() {
            let e = F::int(j as i64 - self.m as i64); // exponent j - m
            let p = self.tail * c * (e * l).exp();
            phi_terms.push(p);
            dphi_terms.push(p * e / one_tau);
            d2_terms.push(p * e * (e - F::one()) / (one_tau * one_tau));
        }

        PhiJet {
            phi: compensated_sum(phi_terms),
            dphi: compensated_sum(dphi_terms),
            d2phi: compensated_sum(d2_terms),
        }
    }
}

/// Either profile family, with the shared evaluation surface.
#[derive(Debug, Clone, PartialEq)]
pub enum Profile<F> {
    Ke(KeProfile<F>),
    Soliton(SolitonProfile<F>),
}

impl<F: Real> Profile<F> {
    pub fn m(&self) -> u32 {
        match self {
            Profile::Ke(p) => p.m,
            Profile::Soliton(p) => p.m,
        }
    }

    pub fn kappa(&self) -> F {
        match self {
            Profile::Ke(p) => p.kappa,
            Profile::Soliton(p) => p.kappa,
        }
    }

    /// `alpha = kappa - 2`, the Einstein constant of the resulting metric.
    pub fn alpha(&self) -> F {
        self.kappa() - F::int(2)
    }

    pub fn soliton(&self) -> Option<&SolitonProfile<F>> {
        match self {
            Profile::Ke(_) => None,
            Profile::Soliton(s) => Some(s),
        }
    }

    /// `phi`, `phi'`, `phi''` at `tau >= 0`, all analytic.
    pub fn eval_phi(&self, tau: F) -> Result<PhiJet<F>> {
        if tau < F::zero() {
            return Err(Error::NegativeTau(tau.as_f64()));
        }
        Ok(match self {
            Profile::Ke(p) => p.jet(tau),
            Profile::Soliton(p) => p.jet(tau),
        })
    }

    /// Left-minus-right of the governing ODE at `tau`; identically zero for
    /// every profile constructed by this module.
    pub fn residual(&self, tau: F) -> F {
        let jet = match self {
            Profile::Ke(p) => p.jet(tau),
            Profile::Soliton(p) => p.jet(tau),
        };
        let one_tau = F::one() + tau;
        let mf = F::int(self.m() as i64);
        match self {
            Profile::Ke(p) => {
                p.kappa - (mf * jet.phi + one_tau * jet.dphi) / one_tau - p.alpha * one_tau
            }
            Profile::Soliton(p) => {
                jet.dphi + (mf / one_tau - p.mu) * jet.phi + (p.kappa - F::int(2)) * tau - F::int(2)
            }
        }
    }

    /// Linear or quadratic growth of `phi` as tau grows. Quadratic exactly
    /// when the Einstein `alpha < 0` term is present (`k > p`); the ratio
    /// `phi / tau^deg` is checked to have settled on `[1e3, 1e6]`.
    pub fn growth_class(&self) -> GrowthClass {
        let class = match self {
            Profile::Ke(p) if p.k > p.p => GrowthClass::Quadratic,
            _ => GrowthClass::Linear,
        };
        let deg = match class {
            GrowthClass::Linear => 1,
            GrowthClass::Quadratic => 2,
        };
        debug_assert!({
            let r = |tau: F| self.eval_phi(tau).unwrap().phi / tau.powi(deg);
            let (a, b) = (r(F::lit(1e5)), r(F::lit(1e6)));
            (a - b).abs() <= F::lit(1e-2) * (F::one() + b.abs())
        });
        class
    }

    /// Limit of `phi(tau) / tau^deg` for the growth class: `-alpha/(m+2)`
    /// in the quadratic case, `kappa/(m+1)` for the Einstein linear case,
    /// `(kappa-2)/mu` for solitons (zero for steady).
    pub fn asymptotic_coefficient(&self) -> F {
        match self {
            Profile::Ke(p) if p.k > p.p => -p.alpha / F::int(p.m as i64 + 2),
            Profile::Ke(p) => p.kappa / F::int(p.m as i64 + 1),
            Profile::Soliton(p) => (p.kappa - F::int(2)) / p.mu,
        }
    }
}

#[cfg(test)]
pub(crate) fn perturbed_soliton_for_tests<F: Real>(
    m: u32,
    kappa: F,
    mu: F,
    nu_shift: F,
) -> SolitonProfile<F> {
    let mut s = soliton_profile(m, kappa, mu).expect("valid base profile");
    s.nu = s.nu + nu_shift;
    s
}

impl<F> From<KeProfile<F>> for Profile<F> {
    fn from(p: KeProfile<F>) -> Self {
        Profile::Ke(p)
    }
}

impl<F> From<SolitonProfile<F>> for Profile<F> {
    fn from(p: SolitonProfile<F>) -> Self {
        Profile::Soliton(p)
    }
}
