//! Volume minimization over the Reeb hyperplane and regularity
//! classification of the critical Reeb vector.
//!
//! The functional `xi -> Vol(P_xi)` is proper and convex on the slice
//! `{ <xi, beta> = m+1 }` of the interior of the dual cone, so it has a
//! unique critical point, reached here by projected Newton descent with
//! finite-difference derivatives. Criticality is declared through the
//! geometric criterion: the barycenter of the slice polytope equals beta.

use crate::cone::{
    barycenter, gorenstein_point, slice_polytope, volume_functional, GorensteinPoint, MomentCone,
    ReebVector,
};
use crate::error::{Error, Result};
use crate::real::Real;

/// Iteration cap for the descent loop.
pub const MAX_ITERATIONS: usize = 500;

/// Default denominator bound used when classifying the minimizer.
pub const DEFAULT_DENOMINATOR_BOUND: u64 = 10_000;

/// Rational-or-irrational verdict for the direction of a Reeb vector.
///
/// A genuinely irrational certificate is impossible in floating point, so
/// the irrational variant carries the denominator bound that was searched.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Regularity {
    /// Some scaling of xi is within 1e-9 of this primitive integer vector.
    RationalDirection { direction: Vec<i64> },
    /// No integer direction with entries up to the bound approximates xi.
    IrrationalDirection { denominator_bound: u64 },
}

/// Output of [`minimize_volume`].
#[derive(Debug, Clone)]
pub struct CriticalReebResult<F> {
    pub xi_star: ReebVector<F>,
    pub volume: F,
    /// Euclidean norm of `barycenter(P_xi*) - beta`.
    pub criticality_residual: F,
    pub iterations: usize,
    pub regularity: Regularity,
}

/// Solve a small dense system by Gaussian elimination with partial
/// pivoting. Returns `None` when the matrix is numerically singular.
fn solve_dense<F: Real>(mut a: Vec<Vec<F>>, mut b: Vec<F>) -> Option<Vec<F>> {
    let n = a.len();
    for c in 0..n {
        let mut p = c;
        for r in (c + 1)..n {
            if a[r][c].abs() > a[p][c].abs() {
                p = r;
            }
        }
        if a[p][c].abs() <= F::lit(1e-300) {
            return None;
        }
        a.swap(p, c);
        b.swap(p, c);
        for r in (c + 1)..n {
            let f = a[r][c] / a[c][c];
            for k in c..n {
                let sub = f * a[c][k];
                a[r][k] = a[r][k] - sub;
            }
            let sub = f * b[c];
            b[r] = b[r] - sub;
        }
    }
    let mut x = vec![F::zero(); n];
    for r in (0..n).rev() {
        let mut acc = b[r];
        for k in (r + 1)..n {
            let sub = a[r][k] * x[k];
            acc = acc - sub;
        }
        x[r] = acc / a[r][r];
    }
    Some(x)
}

fn dot<F: Real>(a: &[F], b: &[F]) -> F {
    a.iter().zip(b).fold(F::zero(), |acc, (&x, &y)| acc + x * y)
}

fn norm<F: Real>(a: &[F]) -> F {
    dot(a, a).sqrt()
}

/// Orthonormal basis of the tangent space `{ v : <v, beta> = 0 }`,
/// built deterministically from the coordinate directions.
fn tangent_basis<F: Real>(beta: &[F]) -> Vec<Vec<F>> {
    let n = beta.len();
    let bn = norm(beta);
    let bhat: Vec<F> = beta.iter().map(|&x| x / bn).collect();
    let mut basis: Vec<Vec<F>> = Vec::with_capacity(n - 1);
    for i in 0..n {
        let mut v: Vec<F> = vec![F::zero(); n];
        v[i] = F::one();
        let c = dot(&v, &bhat);
        for (vk, &bk) in v.iter_mut().zip(&bhat) {
            *vk = *vk - c * bk;
        }
        for e in &basis {
            let c = dot(&v, e);
            for (vk, &ek) in v.iter_mut().zip(e) {
                *vk = *vk - c * ek;
            }
        }
        let nv = norm(&v);
        if nv > F::lit(1e-10) {
            basis.push(v.iter().map(|&x| x / nv).collect());
            if basis.len() == n - 1 {
                break;
            }
        }
    }
    basis
}

/// A strictly interior starting Reeb vector on the hyperplane
/// `<xi, beta> = m + 1`.
///
/// Uses the projection `(m+1) beta / <beta, beta>` when that is interior;
/// otherwise maximizes the minimum margin over unit rays (a small exact
/// active-set LP), which lands strictly inside the dual cone.
pub fn initial_reeb<F: Real>(cone: &MomentCone) -> Result<ReebVector<F>> {
    let beta = gorenstein_point(cone)?;
    let beta_f: Vec<F> = beta.to_f64().iter().map(|&x| F::lit(x)).collect();
    let level = F::int(cone.dim() as i64);

    let bb = dot(&beta_f, &beta_f);
    let candidate: Vec<F> = beta_f.iter().map(|&x| x * level / bb).collect();
    if let Ok(xi) = ReebVector::interior(cone, candidate) {
        return Ok(xi);
    }

    // Chebyshev-style analytic center: maximize t subject to
    // <xi, ray_hat> >= t over all rays and <xi, beta> = m + 1
    let rays: Vec<Vec<F>> = cone
        .rays_f64()
        .iter()
        .map(|r| {
            let v: Vec<F> = r.iter().map(|&x| F::lit(x)).collect();
            let nr = norm(&v);
            v.iter().map(|&x| x / nr).collect()
        })
        .collect();
    let n = cone.dim();
    let k = rays.len();

    let mut best: Option<(F, Vec<F>)> = None;
    for subset in subsets(k, n) {
        // unknowns (xi, t): <xi, ray_i> - t = 0 for i in subset, <xi, beta> = m+1
        let mut a: Vec<Vec<F>> = Vec::with_capacity(n + 1);
        let mut b: Vec<F> = Vec::with_capacity(n + 1);
        for &i in &subset {
            let mut row: Vec<F> = rays[i].clone();
            row.push(-F::one());
            a.push(row);
            b.push(F::zero());
        }
        let mut row = beta_f.clone();
        row.push(F::zero());
        a.push(row);
        b.push(level);
        let Some(sol) = solve_dense(a, b) else {
            continue;
        };
        let (xi, t) = (sol[..n].to_vec(), sol[n]);
        let slack = F::lit(1e-9) * (F::one() + t.abs());
        let feasible = rays.iter().all(|r| dot(&xi, r) >= t - slack);
        if feasible && best.as_ref().is_none_or(|(bt, _)| t > *bt) {
            best = Some((t, xi));
        }
    }
    match best {
        Some((t, xi)) if t > F::zero() => ReebVector::interior(cone, xi),
        _ => Err(Error::EmptyInterior),
    }
}

fn subsets(k: usize, size: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(size);
    fn rec(start: usize, k: usize, size: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == size {
            out.push(cur.clone());
            return;
        }
        for i in start..k {
            cur.push(i);
            rec(i + 1, k, size, cur, out);
            cur.pop();
        }
    }
    rec(0, k, size, &mut cur, &mut out);
    out
}

struct Objective<'a, F> {
    cone: &'a MomentCone,
    center: Vec<F>,
    basis: Vec<Vec<F>>,
}

impl<'a, F: Real> Objective<'a, F> {
    fn embed(&self, u: &[F]) -> Vec<F> {
        let mut x = self.center.clone();
        for (ui, e) in u.iter().zip(&self.basis) {
            for (xk, &ek) in x.iter_mut().zip(e) {
                *xk = *xk + *ui * ek;
            }
        }
        x
    }

    /// Volume at tangent coordinates `u`; infinite outside the dual cone,
    /// which makes the functional a barrier for the line search.
    fn eval(&self, u: &[F]) -> F {
        let x = self.embed(u);
        match ReebVector::interior(self.cone, x) {
            Ok(xi) => volume_functional(self.cone, &xi).unwrap_or_else(|_| F::infinity()),
            Err(_) => F::infinity(),
        }
    }

    /// Richardson-extrapolated central difference gradient, step `h`.
    fn gradient(&self, u: &[F], h: F) -> Vec<F> {
        let dim = self.basis.len();
        let mut g = vec![F::zero(); dim];
        let four = F::lit(4.0);
        let three = F::lit(3.0);
        for i in 0..dim {
            let central = |step: F| {
                let mut up = u.to_vec();
                let mut dn = u.to_vec();
                up[i] = up[i] + step;
                dn[i] = dn[i] - step;
                (self.eval(&up) - self.eval(&dn)) / (F::lit(2.0) * step)
            };
            let d_h = central(h);
            let d_h2 = central(h * F::lit(0.5));
            g[i] = (four * d_h2 - d_h) / three;
        }
        g
    }

    /// Central second-difference Hessian, step `h`.
    fn hessian(&self, u: &[F], h: F) -> Vec<Vec<F>> {
        let dim = self.basis.len();
        let f0 = self.eval(u);
        let mut hess = vec![vec![F::zero(); dim]; dim];
        for i in 0..dim {
            let mut up = u.to_vec();
            let mut dn = u.to_vec();
            up[i] = up[i] + h;
            dn[i] = dn[i] - h;
            hess[i][i] = (self.eval(&up) - F::lit(2.0) * f0 + self.eval(&dn)) / (h * h);
        }
        for i in 0..dim {
            for j in (i + 1)..dim {
                let mut pp = u.to_vec();
                let mut pm = u.to_vec();
                let mut mp = u.to_vec();
                let mut mm = u.to_vec();
                pp[i] = pp[i] + h;
                pp[j] = pp[j] + h;
                pm[i] = pm[i] + h;
                pm[j] = pm[j] - h;
                mp[i] = mp[i] - h;
                mp[j] = mp[j] + h;
                mm[i] = mm[i] - h;
                mm[j] = mm[j] - h;
                let v = (self.eval(&pp) - self.eval(&pm) - self.eval(&mp) + self.eval(&mm))
                    / (F::lit(4.0) * h * h);
                hess[i][j] = v;
                hess[j][i] = v;
            }
        }
        hess
    }
}

fn barycenter_residual<F: Real>(cone: &MomentCone, beta_f: &[F], x: &[F]) -> Result<F> {
    let xi = ReebVector::interior(cone, x.to_vec())?;
    let poly = slice_polytope(cone, &xi)?;
    let b = barycenter(&poly)?;
    let diff: Vec<F> = b.iter().zip(beta_f).map(|(&a, &c)| a - c).collect();
    Ok(norm(&diff))
}

/// Finite-difference gradient of the volume functional restricted to the
/// Reeb hyperplane, in tangent coordinates at `xi`. Diagnostic companion
/// to the barycenter criticality criterion.
pub fn volume_gradient_on_hyperplane<F: Real>(
    cone: &MomentCone,
    xi: &ReebVector<F>,
) -> Result<Vec<F>> {
    let beta = gorenstein_point(cone)?;
    let beta_f: Vec<F> = beta.to_f64().iter().map(|&x| F::lit(x)).collect();
    let obj = Objective {
        cone,
        center: xi.components().to_vec(),
        basis: tangent_basis(&beta_f),
    };
    let dim = obj.basis.len();
    let h = F::lit(1e-5) * (F::one() + norm(xi.components()));
    Ok(obj.gradient(&vec![F::zero(); dim], h))
}

/// Minimize the volume functional over `Xi_beta`, starting from
/// [`initial_reeb`]. See [`minimize_volume_from`].
pub fn minimize_volume<F: Real>(cone: &MomentCone, tol: F) -> Result<CriticalReebResult<F>> {
    let start = initial_reeb(cone)?;
    minimize_volume_from(cone, start, tol)
}

/// Minimize the volume functional over the Reeb hyperplane from a given
/// strictly interior starting point.
///
/// Projected Newton descent with Richardson-extrapolated central
/// differences (relative step 1e-5) and a backtracking line search that
/// keeps every iterate strictly inside the dual cone. Terminates when the
/// barycenter residual `|barycenter(P_xi) - beta|` drops below `tol`;
/// a final damped fixed-point polish on the barycenter equation pushes the
/// residual toward machine precision.
pub fn minimize_volume_from<F: Real>(
    cone: &MomentCone,
    start: ReebVector<F>,
    tol: F,
) -> Result<CriticalReebResult<F>> {
    if !(tol >= F::lit(1e-12) && tol <= F::lit(1e-4)) {
        return Err(Error::InvalidConfig(format!(
            "tol must lie in [1e-12, 1e-4], got {}",
            tol.as_f64()
        )));
    }
    let beta = gorenstein_point(cone)?;
    let beta_f: Vec<F> = beta.to_f64().iter().map(|&x| F::lit(x)).collect();
    let basis = tangent_basis(&beta_f);
    let dim = basis.len();

    let mut center = start.components().to_vec();
    let mut iterations = 0;
    let mut stalled = false;

    for it in 0..=MAX_ITERATIONS {
        iterations = it;
        let res = barycenter_residual(cone, &beta_f, &center)?;
        if res <= tol || stalled {
            if res <= tol {
                return finish(cone, beta, center, res, iterations);
            }
            return Err(Error::MaxIterationsExceeded {
                max_iterations: it,
                residual: res.as_f64(),
                tol: tol.as_f64(),
            });
        }
        if it == MAX_ITERATIONS {
            break;
        }

        let obj = Objective {
            cone,
            center: center.clone(),
            basis: basis.clone(),
        };
        let u0 = vec![F::zero(); dim];
        let h = F::lit(1e-5) * (F::one() + norm(&center));
        let g = obj.gradient(&u0, h);
        let hess = obj.hessian(&u0, h);

        let step = match solve_dense(hess, g.iter().map(|&x| -x).collect()) {
            Some(s) if dot(&s, &g) < F::zero() => s,
            _ => g.iter().map(|&x| -x).collect(),
        };

        // fraction-to-boundary cap keeps the iterate strictly interior
        let dir = obj
            .embed(&step)
            .iter()
            .zip(&center)
            .map(|(&a, &b)| a - b)
            .collect::<Vec<F>>();
        let mut t_max = F::infinity();
        for ray in &cone.rays_f64() {
            let rf: Vec<F> = ray.iter().map(|&x| F::lit(x)).collect();
            let slope = dot(&dir, &rf);
            if slope < F::zero() {
                let margin = dot(&center, &rf);
                let bound = -F::lit(0.99) * margin / slope;
                t_max = t_max.min(bound);
            }
        }
        if t_max <= F::zero() {
            return Err(Error::LeftInterior);
        }

        let f0 = obj.eval(&u0);
        let slope = dot(&g, &step);
        let mut t = t_max.min(F::one());
        let mut accepted = false;
        while t > F::lit(1e-18) {
            let trial: Vec<F> = step.iter().map(|&s| s * t).collect();
            let ft = obj.eval(&trial);
            if ft <= f0 + F::lit(1e-4) * t * slope {
                center = obj.embed(&trial);
                accepted = true;
                break;
            }
            t = t * F::lit(0.5);
        }
        if !accepted {
            // Newton direction exhausted at FD noise level: one last
            // residual check, then polish directly on the barycenter map
            center = polish_on_barycenter(cone, &beta_f, &basis, center, tol);
            stalled = true;
        }
    }

    let res = barycenter_residual(cone, &beta_f, &center)?;
    if res <= tol {
        return finish(cone, beta, center, res, iterations);
    }
    Err(Error::MaxIterationsExceeded {
        max_iterations: MAX_ITERATIONS,
        residual: res.as_f64(),
        tol: tol.as_f64(),
    })
}

/// Damped Newton iteration on `barycenter(P_xi) - beta = 0` in tangent
/// coordinates. The barycenter is evaluated directly (no differencing of
/// the volume), so this refines past the FD noise floor of the descent.
fn polish_on_barycenter<F: Real>(
    cone: &MomentCone,
    beta_f: &[F],
    basis: &[Vec<F>],
    mut center: Vec<F>,
    tol: F,
) -> Vec<F> {
    let dim = basis.len();
    let embed = |c: &[F], u: &[F]| {
        let mut x = c.to_vec();
        for (ui, e) in u.iter().zip(basis) {
            for (xk, &ek) in x.iter_mut().zip(e) {
                *xk = *xk + *ui * ek;
            }
        }
        x
    };
    let residual_vec = |x: &[F]| -> Option<Vec<F>> {
        let xi = ReebVector::interior(cone, x.to_vec()).ok()?;
        let poly = slice_polytope(cone, &xi).ok()?;
        let b = barycenter(&poly).ok()?;
        // project onto tangent coordinates
        Some(
            basis
                .iter()
                .map(|e| {
                    e.iter()
                        .zip(b.iter().zip(beta_f))
                        .fold(F::zero(), |acc, (&ek, (&bk, &betak))| {
                            acc + ek * (bk - betak)
                        })
                })
                .collect(),
        )
    };

    for _ in 0..12 {
        let Some(r0) = residual_vec(&center) else {
            return center;
        };
        let r0n = norm(&r0);
        if r0n <= tol * F::lit(0.01) {
            return center;
        }
        let h = F::lit(1e-6) * (F::one() + norm(&center));
        let mut jac = vec![vec![F::zero(); dim]; dim];
        for j in 0..dim {
            let mut up = vec![F::zero(); dim];
            let mut dn = vec![F::zero(); dim];
            up[j] = h;
            dn[j] = -h;
            let (Some(rp), Some(rm)) = (
                residual_vec(&embed(&center, &up)),
                residual_vec(&embed(&center, &dn)),
            ) else {
                return center;
            };
            for i in 0..dim {
                jac[i][j] = (rp[i] - rm[i]) / (F::lit(2.0) * h);
            }
        }
        let Some(step) = solve_dense(jac, r0.iter().map(|&x| -x).collect()) else {
            return center;
        };
        let mut t = F::one();
        let mut improved = false;
        while t > F::lit(1e-6) {
            let trial = embed(&center, &step.iter().map(|&s| s * t).collect::<Vec<F>>());
            if let Some(rt) = residual_vec(&trial) {
                if norm(&rt) < r0n {
                    center = trial;
                    improved = true;
                    break;
                }
            }
            t = t * F::lit(0.5);
        }
        if !improved {
            return center;
        }
    }
    center
}

fn finish<F: Real>(
    cone: &MomentCone,
    _beta: GorensteinPoint,
    center: Vec<F>,
    res: F,
    iterations: usize,
) -> Result<CriticalReebResult<F>> {
    let xi = ReebVector::interior(cone, center)?;
    let volume = volume_functional(cone, &xi)?;
    let regularity = classify_regularity(xi.components(), DEFAULT_DENOMINATOR_BOUND)?;
    Ok(CriticalReebResult {
        xi_star: xi,
        volume,
        criticality_residual: res,
        iterations,
        regularity,
    })
}

/// Decide whether some scaling of `xi` is within 1e-9 of an integer vector
/// with entries bounded by `max_denominator`.
///
/// Scans every candidate multiplier `q = 1..=max_denominator` applied to
/// the component ratios `xi_i / xi_1`; this certifies the bound exactly,
/// which a convergent-only continued-fraction search would not (a valid
/// `q` need not be a convergent denominator of any single ratio).
pub fn classify_regularity<F: Real>(xi: &[F], max_denominator: u64) -> Result<Regularity> {
    let lead = xi[0];
    if lead == F::zero() || !lead.is_finite() {
        return Err(Error::ZeroLeadingComponent);
    }
    let ratios: Vec<f64> = xi.iter().map(|&x| (x / lead).as_f64()).collect();
    let tol = 1e-9;
    for q in 1..=max_denominator {
        let mut ints: Vec<i64> = Vec::with_capacity(ratios.len());
        let mut ok = true;
        for &r in &ratios {
            let scaled = q as f64 * r;
            let nearest = scaled.round();
            if (scaled - nearest).abs() > tol || nearest.abs() > max_denominator as f64 {
                ok = false;
                break;
            }
            ints.push(nearest as i64);
        }
        if ok {
            let g = ints
                .iter()
                .fold(0i64, |acc, &x| num_integer::gcd(acc, x.abs()));
            if g > 0 {
                for x in ints.iter_mut() {
                    *x /= g;
                }
            }
            return Ok(Regularity::RationalDirection { direction: ints });
        }
    }
    Ok(Regularity::IrrationalDirection {
        denominator_bound: max_denominator,
    })
}
