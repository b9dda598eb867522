//! The coordinate change between the cone coordinate `t = log r` and the
//! momentum coordinate `tau`, the potential `F`, and the zero-section
//! scaling constant `e^{c0}`.
//!
//! The change of variables is
//!
//! ```text
//! t(tau) = integral_{tau0}^{tau} dx / phi(x)
//! F(t)   = integral_{tau0}^{tau(t)} x dx / phi(x)
//! ```
//!
//! Since `phi(x) = 2x + O(x^2)`, the integrand `1/phi` has a `1/(2x)`
//! singularity at the origin; that part is integrated exactly and only the
//! smooth remainder `1/phi - 1/(2x)` goes to quadrature, which makes every
//! integral here absolutely convergent.

use crate::error::{Error, Result};
use crate::profiles::Profile;
use crate::quadrature;
use crate::real::Real;

/// Tolerance on `|phi'(0) - 2|` beyond which a profile does not extend
/// over the zero section.
const EXTENDABILITY_TOL: f64 = 1e-10;

/// Crossover below which the smooth remainder `2/phi - 1/x` is integrated
/// by a two-point rule anchored at its analytic limit `-phi''(0)/4`.
const NEAR_ORIGIN: f64 = 1e-5;

/// Saturation bound for inverting `t -> tau` past the finite horizon of
/// quadratically growing profiles (where `sup t < infinity`).
const TAU_CAP: f64 = 1e18;

/// The anchored diffeomorphism `t <-> tau` for one profile.
///
/// `tau0` is the anchor with `t(tau0) = 0`. [`CoordinateMap::canonical`]
/// anchors at `2^{1/(m+1)} - 1`, the normalization under which the
/// zero-section constant of the Ricci-flat family is exactly `1/(m+1)`.
#[derive(Debug, Clone)]
pub struct CoordinateMap<'a, F: Real> {
    profile: &'a Profile<F>,
    tau0: F,
    quad_tol: F,
    max_subdivisions: usize,
}

/// The canonical anchor `2^{1/(m+1)} - 1`.
pub fn canonical_anchor<F: Real>(m: u32) -> F {
    (F::lit(std::f64::consts::LN_2) / F::int(m as i64 + 1)).exp_m1()
}

impl<'a, F: Real> CoordinateMap<'a, F> {
    pub fn new(profile: &'a Profile<F>, tau0: F) -> Result<Self> {
        if tau0 <= F::zero() {
            return Err(Error::NonPositiveTau(tau0.as_f64()));
        }
        Ok(CoordinateMap {
            profile,
            tau0,
            quad_tol: F::lit(quadrature::DEFAULT_TOL),
            max_subdivisions: quadrature::MAX_SUBDIVISIONS,
        })
    }

    /// Map anchored at the canonical `tau0 = 2^{1/(m+1)} - 1`.
    pub fn canonical(profile: &'a Profile<F>) -> Result<Self> {
        Self::new(profile, canonical_anchor(profile.m()))
    }

    pub fn tau0(&self) -> F {
        self.tau0
    }

    pub fn profile(&self) -> &Profile<F> {
        self.profile
    }

    fn phi(&self, x: F) -> F {
        self.profile
            .eval_phi(x)
            .expect("tau > 0 inside quadrature")
            .phi
    }

    /// `t(tau) = integral_{tau0}^{tau} dx/phi(x)`, with the logarithmic
    /// endpoint singularity split off exactly:
    /// `t = (1/2) log(tau/tau0) + integral of (1/phi - 1/(2x))`.
    pub fn t_of_tau(&self, tau: F) -> Result<F> {
        if tau <= F::zero() {
            return Err(Error::NonPositiveTau(tau.as_f64()));
        }
        let log_part = F::lit(0.5) * (tau.ln() - self.tau0.ln());
        let smooth = quadrature::integrate(
            |x| self.phi(x).recip() - (F::int(2) * x).recip(),
            self.tau0,
            tau,
            self.quad_tol,
            self.max_subdivisions,
        )?;
        Ok(log_part + smooth)
    }

    /// Monotone inversion of [`Self::t_of_tau`] by bracketed Newton.
    ///
    /// For quadratically growing profiles `t` has a finite supremum; inputs
    /// at or past that horizon saturate at a large cap instead of failing.
    pub fn tau_of_t(&self, t: F) -> Result<F> {
        let mut lo = self.tau0;
        let mut f_lo = -t; // t_of_tau(tau0) = 0
        while f_lo > F::zero() {
            lo = lo * F::lit(0.25);
            if lo < F::lit(1e-300) {
                return Ok(lo);
            }
            f_lo = self.t_of_tau(lo)? - t;
        }
        let mut hi = self.tau0;
        let mut f_hi = -t;
        while f_hi < F::zero() {
            hi = hi * F::int(4);
            if hi > F::lit(TAU_CAP) {
                return Ok(F::lit(TAU_CAP));
            }
            f_hi = self.t_of_tau(hi)? - t;
        }
        if f_lo == F::zero() {
            return Ok(lo);
        }
        if f_hi == F::zero() {
            return Ok(hi);
        }

        let mut tau = F::lit(0.5) * (lo + hi);
        for _ in 0..200 {
            let f = self.t_of_tau(tau)? - t;
            if f.abs() <= F::lit(1e-13) * (F::one() + t.abs()) {
                return Ok(tau);
            }
            if f > F::zero() {
                hi = tau;
            } else {
                lo = tau;
            }
            // Newton step dtau = -f * phi(tau), safeguarded by the bracket
            let next = tau - f * self.phi(tau);
            tau = if next > lo && next < hi {
                next
            } else {
                F::lit(0.5) * (lo + hi)
            };
            if hi - lo <= F::lit(1e-15) * hi {
                return Ok(tau);
            }
        }
        Ok(tau)
    }

    /// The potential `F(t) = integral_{tau0}^{tau(t)} x dx / phi(x)`;
    /// the integrand extends to `1/2` at the origin, so plain quadrature
    /// applies. Satisfies `F'(t) = tau(t)` and `F''(t) = phi(tau(t))`.
    pub fn potential_f(&self, t: F) -> Result<F> {
        let tau = self.tau_of_t(t)?;
        quadrature::integrate(
            |x| x / self.phi(x),
            self.tau0,
            tau,
            self.quad_tol,
            self.max_subdivisions,
        )
    }
}

fn check_extendable<F: Real>(profile: &Profile<F>) -> Result<F> {
    let jet = profile.eval_phi(F::zero())?;
    if (jet.dphi - F::int(2)).abs() > F::lit(EXTENDABILITY_TOL) {
        return Err(Error::ProfileNotExtendable {
            dphi0: jet.dphi.as_f64(),
        });
    }
    Ok(jet.d2phi)
}

/// `e^{c0}`, the zero-section scaling constant
/// `(1/2) lim_{tau -> 0} phi(tau)/r^2` for the canonical coordinate map.
///
/// Evaluated through the quadrature route
///
/// ```text
/// e^{c0} = s e^{-2 t(s)} exp( integral_0^s (2/phi(x) - 1/x) dx )
/// ```
///
/// whose value is independent of the split point `s`; here `s = tau0`, so
/// the `t(s)` factor drops out. For the Ricci-flat family this equals
/// `1/(m+1)` for every `m`.
pub fn scaling_constant_e_c0<F: Real>(profile: &Profile<F>) -> Result<F> {
    let map = CoordinateMap::canonical(profile)?;
    scaling_constant_e_c0_at_split(&map, map.tau0())
}

/// The same constant evaluated by splitting the integral at an arbitrary
/// `s` in `(0, b)`; the result does not depend on `s`, which the two-anchor
/// consistency checks exercise.
pub fn scaling_constant_e_c0_at_split<F: Real>(map: &CoordinateMap<'_, F>, split: F) -> Result<F> {
    if split <= F::zero() {
        return Err(Error::NonPositiveTau(split.as_f64()));
    }
    let d2phi0 = check_extendable(map.profile)?;

    // g(x) = 2/phi - 1/x extends continuously to g(0) = -phi''(0)/4;
    // below the crossover integrate by the trapezoid anchored at that limit
    let g = |x: F| F::int(2) / map.phi(x) - x.recip();
    let g0 = -d2phi0 * F::lit(0.25);
    let delta = F::lit(NEAR_ORIGIN).min(split);
    let near = delta * (g0 + g(delta)) * F::lit(0.5);
    let far = quadrature::integrate(g, delta, split, map.quad_tol, map.max_subdivisions)?;

    let t_split = if split == map.tau0() {
        F::zero()
    } else {
        map.t_of_tau(split)?
    };
    Ok(split * (near + far - F::int(2) * t_split).exp())
}

/// Coefficient pair of the limiting form at the zero section in the basis
/// `{omega^T, i dr wedge dbar r}`: always `(1, 2 e^{c0})`.
pub fn zero_section_limit<F: Real>(profile: &Profile<F>) -> Result<(F, F)> {
    let e_c0 = scaling_constant_e_c0(profile)?;
    Ok((F::one(), F::int(2) * e_c0))
}
