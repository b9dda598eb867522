//! Command-line front end: cone analysis, Reeb minimization, profile
//! construction, verification suites, decay fits, and the full pipeline,
//! all emitting deterministic JSON reports (plus optional CSV grids).

use crate::cone::{build_cone, gorenstein_point, MomentCone};
use crate::coordinates::{
    scaling_constant_e_c0, scaling_constant_e_c0_at_split, zero_section_limit, CoordinateMap,
};
use crate::curvature::{asymptotic_decay, d_homothetic, omega_phi, ricci_phi, soliton_residual};
use crate::error::{Error, Result};
use crate::profiles::{
    ke_profile, soliton_profile, solve_soliton_mu, GrowthClass, Profile, SolitonFamily,
};
use crate::real::log_grid;
use crate::reeb::{minimize_volume, CriticalReebResult, Regularity, DEFAULT_DENOMINATOR_BOUND};
use crate::report;
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_rational::Rational64;
use num_traits::ToPrimitive;
use serde_json::{json, Value};
use std::path::PathBuf;
use std::str::FromStr;

const VERIFY_GRID_LO: f64 = 1e-6;
const VERIFY_GRID_HI: f64 = 1e6;
const VERIFY_GRID_N: usize = 200;
const SCALED_RESIDUAL_TOL: f64 = 1e-10;
const ROUNDTRIP_TOL: f64 = 1e-9;
const SPLIT_CONSISTENCY_TOL: f64 = 1e-10;
const BOUNDARY_PHI_TOL: f64 = 1e-12;
const BOUNDARY_DPHI_TOL: f64 = 1e-10;

#[derive(Parser, Debug)]
#[command(
    name = "sasaki-forge",
    version,
    about = "Volume-minimizing Reeb vectors on toric moment cones and closed-form \
             Einstein/soliton profiles, with numerical certification of the defining equations.",
    after_help = "Reports are deterministic: identical inputs give byte-identical JSON.\n\
                  The environment variable SASAKI_FORGE_SEED is reserved for the Monte-Carlo \
                  volume oracle in the test suite; no core path uses randomness."
)]
pub struct Cli {
    #[command(subcommand)]
    pub task: Task,
}

#[derive(Subcommand, Debug)]
pub enum Task {
    /// Validate a cone, enumerate its rays, and solve for the Gorenstein point.
    ConeAnalyze {
        #[command(flatten)]
        cone: ConeArgs,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Minimize the slice volume over the Reeb hyperplane and classify the minimizer.
    ReebMinimize {
        #[command(flatten)]
        cone: ConeArgs,
        /// Barycenter-residual tolerance (in [1e-12, 1e-4]).
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Closed-form Einstein profile on L^k with K_M = L^p (requires k >= p).
    ProfileKe {
        /// Base complex dimension.
        #[arg(long)]
        m: u32,
        /// Power with K_M = L^p.
        #[arg(long)]
        p: u32,
        /// Bundle power k (k >= p).
        #[arg(long)]
        k: u32,
        /// Sample grid lo:hi:n (n intervals, n+1 rows).
        #[arg(long)]
        grid: Option<GridSpec>,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Closed-form soliton profile (expanding/steady need --mu < 0; shrinking solves mu).
    ProfileSoliton {
        /// Base complex dimension.
        #[arg(long)]
        m: u32,
        /// Transverse Einstein constant kappa (alternative to --p/--k).
        #[arg(long, conflicts_with_all = ["p", "k"])]
        kappa: Option<f64>,
        /// Power with K_M = L^p (with --k, sets kappa = 2p/k).
        #[arg(long, requires = "k")]
        p: Option<u32>,
        /// Bundle power k.
        #[arg(long, requires = "p")]
        k: Option<u32>,
        /// Soliton parameter; required (negative) for kappa <= 2, optional for kappa > 2.
        #[arg(long, allow_hyphen_values = true)]
        mu: Option<f64>,
        /// Sample grid lo:hi:n (n intervals, n+1 rows).
        #[arg(long)]
        grid: Option<GridSpec>,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Run the residual/identity/positivity/round-trip suite on a profile.
    Verify {
        #[command(flatten)]
        profile: ProfileArgs,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Fit the asymptotic decay orders of the Ricci-flat comparison.
    Asymptotics {
        /// Base complex dimension.
        #[arg(long)]
        m: u32,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Chain cone -> Reeb minimization -> profile -> verification -> decay.
    FullPipeline {
        #[command(flatten)]
        cone: ConeArgs,
        /// Power with K_M = L^p.
        #[arg(long)]
        p: u32,
        /// Bundle power k (k >= p gives Einstein, k < p shrinking soliton).
        #[arg(long)]
        k: u32,
        /// Barycenter-residual tolerance for the Reeb step.
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        /// Sample grid lo:hi:n for CSV emission.
        #[arg(long)]
        grid: Option<GridSpec>,
        #[command(flatten)]
        out: OutArgs,
    },
}

/// Cone source: a named preset or a JSON file `{"dim": n, "normals": [...]}`.
#[derive(Args, Debug)]
pub struct ConeArgs {
    /// Named cone preset.
    #[arg(long, value_enum)]
    pub preset: Option<Preset>,
    /// JSON cone description (alternative to --preset).
    #[arg(long, conflicts_with = "preset")]
    pub normals_file: Option<PathBuf>,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
pub enum Preset {
    /// First quadrant in R^2 (cone of C^2 over CP^1).
    Quadrant,
    /// First octant in R^3 (cone of C^3 over CP^2).
    Simplex3,
    /// The conifold cone over the quadrilateral with normals (1,0,0),(1,1,0),(1,1,1),(1,0,1).
    Conifold,
    /// Cone over the first del Pezzo surface; its critical Reeb vector is irrational.
    Delpezzo1,
}

impl Preset {
    pub fn name(self) -> &'static str {
        match self {
            Preset::Quadrant => "quadrant",
            Preset::Simplex3 => "simplex3",
            Preset::Conifold => "conifold",
            Preset::Delpezzo1 => "delpezzo1",
        }
    }

    pub fn normals(self) -> Vec<Vec<i64>> {
        match self {
            Preset::Quadrant => vec![vec![1, 0], vec![0, 1]],
            Preset::Simplex3 => vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]],
            Preset::Conifold => vec![vec![1, 0, 0], vec![1, 1, 0], vec![1, 1, 1], vec![1, 0, 1]],
            Preset::Delpezzo1 => vec![vec![1, 1, 0], vec![1, 0, 1], vec![1, -1, -1], vec![1, 1, 1]],
        }
    }
}

/// Profile selection shared by `verify`.
#[derive(Args, Debug)]
pub struct ProfileArgs {
    /// Profile family.
    #[arg(long, value_enum, default_value_t = ProfileKind::Ke)]
    pub profile: ProfileKind,
    /// Base complex dimension.
    #[arg(long, required_unless_present = "profile_file")]
    pub m: Option<u32>,
    /// Power with K_M = L^p.
    #[arg(long)]
    pub p: Option<u32>,
    /// Bundle power k.
    #[arg(long)]
    pub k: Option<u32>,
    /// Transverse Einstein constant (soliton alternative to --p/--k).
    #[arg(long)]
    pub kappa: Option<f64>,
    /// Soliton parameter.
    #[arg(long, allow_hyphen_values = true)]
    pub mu: Option<f64>,
    /// Profile spec JSON {"type": "ke"|"soliton", "m": .., "p": .., "k": .., "mu": ..}
    /// (alternative to the inline flags).
    #[arg(long, conflicts_with_all = ["profile", "m", "p", "k", "kappa", "mu"])]
    pub profile_file: Option<PathBuf>,
}

/// The profile spec JSON accepted by `--profile-file`.
#[derive(serde::Deserialize)]
struct ProfileSpecFile {
    #[serde(rename = "type")]
    kind: String,
    m: u32,
    p: Option<u32>,
    k: Option<u32>,
    kappa: Option<f64>,
    mu: Option<f64>,
}

fn build_profile_from_args(args: &ProfileArgs) -> Result<(Profile<f64>, Value)> {
    if let Some(path) = &args.profile_file {
        let text = std::fs::read_to_string(path)?;
        let spec: ProfileSpecFile = serde_json::from_str(&text)
            .map_err(|e| Error::InvalidConfig(format!("bad profile file: {e}")))?;
        let (profile, mut inputs) = match spec.kind.as_str() {
            "ke" => {
                let (p, k) = match (spec.p, spec.k) {
                    (Some(p), Some(k)) => (p, k),
                    _ => {
                        return Err(Error::InvalidConfig(
                            "profile file type \"ke\" needs p and k".into(),
                        ))
                    }
                };
                let profile: Profile<f64> = ke_profile(spec.m, p, k)?.into();
                (
                    profile,
                    json!({"profile": "ke", "m": spec.m, "p": p, "k": k}),
                )
            }
            "soliton" => {
                let (profile, mut inputs) =
                    build_soliton(spec.m, spec.kappa, spec.p, spec.k, spec.mu)?;
                inputs["profile"] = json!("soliton");
                (profile, inputs)
            }
            other => {
                return Err(Error::InvalidConfig(format!(
                    "profile file type must be \"ke\" or \"soliton\", got {other:?}"
                )))
            }
        };
        inputs["profile_file"] = json!(path.display().to_string());
        return Ok((profile, inputs));
    }
    let m = args
        .m
        .ok_or_else(|| Error::InvalidConfig("--m is required".into()))?;
    match args.profile {
        ProfileKind::Ke => {
            let (p, k) = match (args.p, args.k) {
                (Some(p), Some(k)) => (p, k),
                _ => {
                    return Err(Error::InvalidConfig(
                        "verify --profile ke needs --p and --k".into(),
                    ))
                }
            };
            let profile: Profile<f64> = ke_profile(m, p, k)?.into();
            Ok((profile, json!({"profile": "ke", "m": m, "p": p, "k": k})))
        }
        ProfileKind::Soliton => {
            let (profile, mut inputs) = build_soliton(m, args.kappa, args.p, args.k, args.mu)?;
            inputs["profile"] = json!("soliton");
            Ok((profile, inputs))
        }
    }
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum ProfileKind {
    Ke,
    Soliton,
}

/// Output destination and format.
#[derive(Args, Debug)]
pub struct OutArgs {
    /// Directory for report files.
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
    /// Emit JSON reports, CSV grids, or both.
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
    Both,
}

/// Inclusive sample grid `lo:hi:n` with `n` intervals (`n + 1` points).
#[derive(Debug, Clone, Copy)]
pub struct GridSpec {
    pub lo: f64,
    pub hi: f64,
    pub n: usize,
}

impl GridSpec {
    pub fn points(&self) -> Vec<f64> {
        (0..=self.n)
            .map(|i| self.lo + (self.hi - self.lo) * i as f64 / self.n as f64)
            .collect()
    }
}

impl FromStr for GridSpec {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        let parts: Vec<&str> = s.split(':').collect();
        if parts.len() != 3 {
            return Err(format!("grid must be lo:hi:n, got '{s}'"));
        }
        let lo: f64 = parts[0].parse().map_err(|e| format!("bad grid lo: {e}"))?;
        let hi: f64 = parts[1].parse().map_err(|e| format!("bad grid hi: {e}"))?;
        let n: usize = parts[2].parse().map_err(|e| format!("bad grid n: {e}"))?;
        if !(lo >= 0.0 && hi > lo && n >= 1) {
            return Err(format!("grid needs 0 <= lo < hi and n >= 1, got '{s}'"));
        }
        Ok(GridSpec { lo, hi, n })
    }
}

#[derive(serde::Deserialize)]
struct ConeFile {
    dim: usize,
    normals: Vec<Vec<i64>>,
}

fn resolve_cone(args: &ConeArgs) -> Result<(Vec<Vec<i64>>, Value)> {
    match (&args.preset, &args.normals_file) {
        (Some(p), None) => Ok((
            p.normals(),
            json!({"preset": p.name(), "normals": p.normals()}),
        )),
        (None, Some(path)) => {
            let text = std::fs::read_to_string(path)?;
            let file: ConeFile = serde_json::from_str(&text)
                .map_err(|e| Error::InvalidConfig(format!("bad cone file: {e}")))?;
            for row in &file.normals {
                if row.len() != file.dim {
                    return Err(Error::InvalidConfig(format!(
                        "cone file: normal {row:?} does not match dim {}",
                        file.dim
                    )));
                }
            }
            Ok((
                file.normals.clone(),
                json!({"normals_file": path.display().to_string(), "normals": file.normals}),
            ))
        }
        _ => Err(Error::InvalidConfig(
            "exactly one of --preset or --normals-file is required".into(),
        )),
    }
}

fn regularity_json(reg: &Regularity) -> Value {
    match reg {
        Regularity::RationalDirection { direction } => {
            json!({"type": "rational", "direction": direction})
        }
        Regularity::IrrationalDirection { denominator_bound } => {
            json!({"type": "irrational", "denominator_bound": denominator_bound})
        }
    }
}

fn cone_json(cone: &MomentCone, beta: Option<&crate::cone::GorensteinPoint>) -> Value {
    let rays: Vec<Vec<i64>> = cone
        .rays()
        .iter()
        .map(|r| r.iter().map(|x| x.to_i64().expect("small ray")).collect())
        .collect();
    json!({
        "dim": cone.dim(),
        "m": cone.m(),
        "normals": cone.normals(),
        "rays": rays,
        "gorenstein": beta.is_some(),
        "beta": beta.map(|b| b.to_strings()),
        "beta_float": beta.map(|b| b.to_f64()),
    })
}

fn reeb_json(out: &CriticalReebResult<f64>, tol: f64) -> Value {
    json!({
        "xi": out.xi_star.components(),
        "volume": out.volume,
        "residual": out.criticality_residual,
        "iterations": out.iterations,
        "regularity": regularity_json(&out.regularity),
        "tolerances": {
            "barycenter_residual": tol,
            "denominator_bound": DEFAULT_DENOMINATOR_BOUND,
        },
    })
}

fn family_name(f: SolitonFamily) -> &'static str {
    match f {
        SolitonFamily::Expanding => "expanding",
        SolitonFamily::Steady => "steady",
        SolitonFamily::Shrinking => "shrinking",
    }
}

fn profile_json(profile: &Profile<f64>) -> Result<Value> {
    let jet0 = profile.eval_phi(0.0)?;
    let e_c0 = scaling_constant_e_c0(profile)?;
    let (transverse, radial) = zero_section_limit(profile)?;
    let growth = match profile.growth_class() {
        GrowthClass::Linear => "linear",
        GrowthClass::Quadratic => "quadratic",
    };
    let mut v = json!({
        "m": profile.m(),
        "kappa": profile.kappa(),
        "alpha": profile.alpha(),
        "growth": growth,
        "asymptotic_coefficient": profile.asymptotic_coefficient(),
        "boundary": {"phi0": jet0.phi, "dphi0": jet0.dphi},
        "e_c0": e_c0,
        "zero_section": {"transverse": transverse, "radial": radial},
    });
    if let Profile::Soliton(s) = profile {
        v["type"] = json!("soliton");
        v["family"] = json!(family_name(s.family()));
        v["mu"] = json!(s.mu());
        v["nu"] = json!(s.nu());
    } else {
        v["type"] = json!("ke");
    }
    Ok(v)
}

/// Max scaled residuals, positivity, boundary conditions, and the
/// round-trip error for one profile; the shared core of `verify` and the
/// pipeline. Returns the JSON block and the overall pass flag.
fn residual_suite(profile: &Profile<f64>) -> Result<(Value, bool)> {
    let mut ode_max: f64 = 0.0;
    let mut identity_max: f64 = 0.0;
    let mut min_phi = f64::INFINITY;
    let is_soliton = profile.soliton().is_some();
    let alpha = profile.alpha();

    for tau in log_grid(VERIFY_GRID_LO, VERIFY_GRID_HI, VERIFY_GRID_N) {
        let scale = (1.0 + tau) * (1.0 + tau);
        ode_max = ode_max.max(profile.residual(tau).abs() / scale);
        let id = if is_soliton {
            let r = soliton_residual(profile, tau)?;
            r.c_transverse.abs().max(r.c_vertical.abs())
        } else {
            let rho = ricci_phi(profile, tau)?;
            let w = omega_phi(profile, tau)?;
            (rho.c_transverse - alpha * w.c_transverse)
                .abs()
                .max((rho.c_vertical - alpha * w.c_vertical).abs())
        };
        identity_max = identity_max.max(id / scale);
        min_phi = min_phi.min(profile.eval_phi(tau)?.phi);
    }

    let jet0 = profile.eval_phi(0.0)?;
    let map = CoordinateMap::canonical(profile)?;
    let mut roundtrip_max: f64 = 0.0;
    for tau in log_grid(1e-6, 1e4, 20) {
        let t = map.t_of_tau(tau)?;
        let back = map.tau_of_t(t)?;
        roundtrip_max = roundtrip_max.max((back - tau).abs() / tau);
    }
    let e_a = scaling_constant_e_c0_at_split(&map, 0.1)?;
    let e_b = scaling_constant_e_c0_at_split(&map, 1.0)?;
    let split_diff = (e_a - e_b).abs();

    let checks = [
        ode_max <= SCALED_RESIDUAL_TOL,
        identity_max <= SCALED_RESIDUAL_TOL,
        min_phi > 0.0,
        jet0.phi.abs() <= BOUNDARY_PHI_TOL,
        (jet0.dphi - 2.0).abs() <= BOUNDARY_DPHI_TOL,
        roundtrip_max <= ROUNDTRIP_TOL,
        split_diff <= SPLIT_CONSISTENCY_TOL,
    ];
    let pass = checks.iter().all(|&c| c);

    let identity_key = if is_soliton {
        "soliton_identity_max_scaled"
    } else {
        "einstein_identity_max_scaled"
    };
    let block = json!({
        "grid": {"lo": VERIFY_GRID_LO, "hi": VERIFY_GRID_HI, "n": VERIFY_GRID_N, "spacing": "log"},
        "ode_residual_max_scaled": ode_max,
        identity_key: identity_max,
        "min_phi": min_phi,
        "boundary": {"phi0": jet0.phi, "dphi0_minus_two": jet0.dphi - 2.0},
        "roundtrip_max_rel": roundtrip_max,
        "e_c0_split_difference": split_diff,
        "tolerances": {
            "scaled_residual": SCALED_RESIDUAL_TOL,
            "boundary_phi0": BOUNDARY_PHI_TOL,
            "boundary_dphi0": BOUNDARY_DPHI_TOL,
            "roundtrip_rel": ROUNDTRIP_TOL,
            "e_c0_split": SPLIT_CONSISTENCY_TOL,
        },
        "pass": pass,
    });
    Ok((block, pass))
}

fn build_soliton(
    m: u32,
    kappa: Option<f64>,
    p: Option<u32>,
    k: Option<u32>,
    mu: Option<f64>,
) -> Result<(Profile<f64>, Value)> {
    let (kappa, source): (f64, Value) = match (kappa, p, k) {
        (Some(kp), None, None) => (kp, json!({"kappa": kp})),
        (None, Some(p), Some(k)) => {
            let kp = 2.0 * p as f64 / k as f64;
            (kp, json!({"p": p, "k": k, "kappa": kp}))
        }
        _ => {
            return Err(Error::InvalidConfig(
                "give either --kappa or both --p and --k".into(),
            ))
        }
    };
    if kappa <= 0.0 {
        return Err(Error::NonPositiveInput("kappa must be positive".into()));
    }
    let (mu, solved) = if kappa > 2.0 {
        match mu {
            Some(mu) => (mu, false),
            None => (solve_soliton_mu(m, kappa)?, true),
        }
    } else {
        match mu {
            Some(mu) if mu < 0.0 => (mu, false),
            Some(mu) => {
                return Err(Error::InvalidConfig(format!(
                    "kappa = {kappa} <= 2 (expanding/steady) needs mu < 0, got {mu}"
                )))
            }
            None => {
                return Err(Error::InvalidConfig(format!(
                    "kappa = {kappa} <= 2 (expanding/steady) needs an explicit --mu < 0"
                )))
            }
        }
    };
    let profile: Profile<f64> = soliton_profile(m, kappa, mu)?.into();
    let mut inputs = source;
    inputs["m"] = json!(m);
    inputs["mu"] = json!(mu);
    inputs["mu_solved"] = json!(solved);
    Ok((profile, inputs))
}

/// Per-tau residual table over the verification grid: the ODE residual and
/// both components of the Einstein (or soliton) identity residual.
fn residual_table(profile: &Profile<f64>) -> Result<CsvTable> {
    let is_soliton = profile.soliton().is_some();
    let alpha = profile.alpha();
    let mut rows = Vec::with_capacity(VERIFY_GRID_N);
    for tau in log_grid(VERIFY_GRID_LO, VERIFY_GRID_HI, VERIFY_GRID_N) {
        let ode = profile.residual(tau);
        let (rt, rv) = if is_soliton {
            let r = soliton_residual(profile, tau)?;
            (r.c_transverse, r.c_vertical)
        } else {
            let rho = ricci_phi(profile, tau)?;
            let w = omega_phi(profile, tau)?;
            (
                rho.c_transverse - alpha * w.c_transverse,
                rho.c_vertical - alpha * w.c_vertical,
            )
        };
        rows.push(vec![tau, ode, rt, rv]);
    }
    Ok((
        "residuals".into(),
        "tau,ode_residual,identity_transverse,identity_vertical".into(),
        rows,
    ))
}

fn grid_csvs(profile: &Profile<f64>, grid: &GridSpec) -> Result<Vec<CsvTable>> {
    let mut sample_rows = Vec::with_capacity(grid.n + 1);
    for tau in grid.points() {
        let jet = profile.eval_phi(tau)?;
        sample_rows.push(vec![
            tau,
            jet.phi,
            jet.dphi,
            jet.d2phi,
            profile.residual(tau),
        ]);
    }
    let map = CoordinateMap::canonical(profile)?;
    let mut coord_rows = Vec::new();
    for tau in grid.points() {
        if tau <= 0.0 {
            continue; // t(0) = -infinity
        }
        let t = map.t_of_tau(tau)?;
        let f = map.potential_f(t)?;
        let phi = profile.eval_phi(tau)?.phi;
        coord_rows.push(vec![t, tau, f, phi]);
    }
    Ok(vec![
        (
            "grid".into(),
            "tau,phi,dphi,d2phi,residual".into(),
            sample_rows,
        ),
        ("coords".into(), "t,tau,F,phi".into(), coord_rows),
    ])
}

/// Name, header, and rows of one CSV artifact.
type CsvTable = (String, String, Vec<Vec<f64>>);

struct TaskOutput {
    name: &'static str,
    report: Value,
    csvs: Vec<CsvTable>,
    exit: i32,
}

fn run_task(task: &Task) -> Result<(TaskOutput, OutSettings)> {
    match task {
        Task::ConeAnalyze { cone, out } => {
            let (normals, inputs) = resolve_cone(cone)?;
            let built = build_cone(&normals)?;
            let beta = gorenstein_point(&built).ok();
            let report = json!({
                "task": "cone-analyze",
                "inputs": inputs,
                "cone": cone_json(&built, beta.as_ref()),
            });
            Ok((
                TaskOutput {
                    name: "cone_analyze",
                    report,
                    csvs: vec![],
                    exit: 0,
                },
                out.into(),
            ))
        }
        Task::ReebMinimize { cone, tol, out } => {
            let (normals, inputs) = resolve_cone(cone)?;
            let built = build_cone(&normals)?;
            let beta = gorenstein_point(&built)?;
            let result = minimize_volume(&built, *tol)?;
            let mut report = reeb_json(&result, *tol);
            report["task"] = json!("reeb-minimize");
            report["inputs"] = inputs;
            report["cone"] = cone_json(&built, Some(&beta));
            Ok((
                TaskOutput {
                    name: "reeb_minimize",
                    report,
                    csvs: vec![],
                    exit: 0,
                },
                out.into(),
            ))
        }
        Task::ProfileKe { m, p, k, grid, out } => {
            let profile: Profile<f64> = ke_profile(*m, *p, *k)?.into();
            let report = json!({
                "task": "profile-ke",
                "inputs": {"m": m, "p": p, "k": k},
                "profile": profile_json(&profile)?,
                "e_c0": scaling_constant_e_c0(&profile)?,
                "tolerances": {"quadrature_abs": crate::quadrature::DEFAULT_TOL},
            });
            let csvs = match grid {
                Some(g) => grid_csvs(&profile, g)?,
                None => vec![],
            };
            Ok((
                TaskOutput {
                    name: "profile_ke",
                    report,
                    csvs,
                    exit: 0,
                },
                out.into(),
            ))
        }
        Task::ProfileSoliton {
            m,
            kappa,
            p,
            k,
            mu,
            grid,
            out,
        } => {
            let (profile, inputs) = build_soliton(*m, *kappa, *p, *k, *mu)?;
            let nu_residual = crate::profiles::soliton_nu(
                *m,
                profile.kappa(),
                profile.soliton().expect("soliton").mu(),
            )?;
            let report = json!({
                "task": "profile-soliton",
                "inputs": inputs,
                "profile": profile_json(&profile)?,
                "nu_residual": nu_residual,
                "e_c0": scaling_constant_e_c0(&profile)?,
                "tolerances": {"quadrature_abs": crate::quadrature::DEFAULT_TOL},
            });
            let csvs = match grid {
                Some(g) => grid_csvs(&profile, g)?,
                None => vec![],
            };
            Ok((
                TaskOutput {
                    name: "profile_soliton",
                    report,
                    csvs,
                    exit: 0,
                },
                out.into(),
            ))
        }
        Task::Verify { profile: args, out } => {
            let (profile, inputs) = build_profile_from_args(args)?;
            let (suite, pass) = residual_suite(&profile)?;
            let report = json!({
                "task": "verify",
                "inputs": inputs,
                "profile": profile_json(&profile)?,
                "verification": suite,
                "pass": pass,
            });
            Ok((
                TaskOutput {
                    name: "verify",
                    report,
                    csvs: vec![residual_table(&profile)?],
                    exit: if pass { 0 } else { 2 },
                },
                out.into(),
            ))
        }
        Task::Asymptotics { m, out } => {
            let decay = asymptotic_decay::<f64>(*m);
            let expect1 = -2.0 * *m as f64;
            let expect2 = -(2.0 * *m as f64 + 2.0);
            let pass = (decay.first_order - expect1).abs() <= 0.01 * expect1.abs()
                && (decay.first_constant - 1.0).abs() <= 0.01
                && (decay.second_order - expect2).abs() <= 0.02 * expect2.abs();
            let report = json!({
                "task": "asymptotics",
                "inputs": {"m": m},
                "decay": {
                    "radii": decay.radii,
                    "first_order": decay.first_order,
                    "first_order_expected": expect1,
                    "first_constant": decay.first_constant,
                    "first_constant_expected": 1.0,
                    "second_order": decay.second_order,
                    "second_order_expected": expect2,
                },
                "tolerances": {"first_order_rel": 0.01, "first_constant": 0.01, "second_order_rel": 0.02},
                "pass": pass,
            });
            Ok((
                TaskOutput {
                    name: "asymptotics",
                    report,
                    csvs: vec![],
                    exit: if pass { 0 } else { 2 },
                },
                out.into(),
            ))
        }
        Task::FullPipeline {
            cone,
            p,
            k,
            tol,
            grid,
            out,
        } => {
            let (normals, inputs) = resolve_cone(cone)?;
            let built = build_cone(&normals)?;
            let beta = gorenstein_point(&built)?;
            let m = built.m() as u32;
            let reeb = minimize_volume(&built, *tol)?;

            // exact D-homothetic bookkeeping: kappa = 2p/k, a = p/(k(m+1))
            let kappa_rat = Rational64::new(2 * *p as i64, *k as i64);
            let a_rat = Rational64::new(*p as i64, *k as i64 * (m as i64 + 1));
            let homothetic = d_homothetic(kappa_rat, a_rat)?;
            let kappa_prime = homothetic.kappa_out;

            let (profile, mu_solved): (Profile<f64>, Option<f64>) = if k >= p {
                (ke_profile(m, *p, *k)?.into(), None)
            } else {
                let kappa = 2.0 * *p as f64 / *k as f64;
                let mu = solve_soliton_mu(m, kappa)?;
                (soliton_profile(m, kappa, mu)?.into(), Some(mu))
            };
            let (suite, pass) = residual_suite(&profile)?;

            let mut report = json!({
                "task": "full-pipeline",
                "inputs": inputs,
                "p": p,
                "k": k,
                "cone": cone_json(&built, Some(&beta)),
                "reeb": reeb_json(&reeb, *tol),
                "homothetic": {
                    "kappa": kappa_rat.to_f64().unwrap(),
                    "a": a_rat.to_f64().unwrap(),
                    "kappa_prime": kappa_prime.to_f64().unwrap(),
                    "kappa_prime_expected": 2.0 * (m as f64 + 1.0),
                    "exact": kappa_prime == Rational64::from_integer(2 * (m as i64 + 1)),
                },
                "profile": profile_json(&profile)?,
                "verification": suite,
                "e_c0": scaling_constant_e_c0(&profile)?,
                "pass": pass,
            });
            if let Some(mu) = mu_solved {
                report["mu"] = json!(mu);
            }
            if k == p {
                let decay = asymptotic_decay::<f64>(m);
                report["decay"] = json!({
                    "radii": decay.radii,
                    "first_order": decay.first_order,
                    "first_constant": decay.first_constant,
                    "second_order": decay.second_order,
                });
            }
            let csvs = match grid {
                Some(g) => grid_csvs(&profile, g)?,
                None => vec![],
            };
            Ok((
                TaskOutput {
                    name: "pipeline",
                    report,
                    csvs,
                    exit: if pass { 0 } else { 2 },
                },
                out.into(),
            ))
        }
    }
}

struct OutSettings {
    dir: PathBuf,
    format: Format,
}

impl From<&OutArgs> for OutSettings {
    fn from(o: &OutArgs) -> Self {
        OutSettings {
            dir: o.out.clone(),
            format: o.format,
        }
    }
}

/// Execute a parsed command line: run the task, write its artifacts, print
/// a short summary, and return the process exit code.
pub fn run(cli: &Cli) -> Result<i32> {
    let (output, settings) = run_task(&cli.task)?;
    if settings.format != Format::Csv {
        let path = report::write_json(&settings.dir, output.name, &output.report)?;
        println!("report: {}", path.display());
    }
    if settings.format != Format::Json {
        for (name, header, rows) in &output.csvs {
            let path = report::write_csv(&settings.dir, name, header, rows)?;
            println!("csv: {}", path.display());
        }
    }
    println!(
        "{}: {}",
        output.name,
        if output.exit == 0 {
            "ok"
        } else {
            "CHECKS FAILED"
        }
    );
    Ok(output.exit)
}
