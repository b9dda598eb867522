//! Error type shared by every module of the crate.

use thiserror::Error;

/// Everything that can go wrong, from malformed cone data to numerical
/// failures of the iterative solvers. Messages name the violated invariant.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// Facet normals of inconsistent length, unsupported dimension, or a
    /// zero normal vector.
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    /// The cone contains a line (the normals do not have full rank).
    #[error("cone is not pointed: normals span a {rank}-dimensional subspace of R^{dim}")]
    NotPointed { rank: usize, dim: usize },

    /// The cone has empty interior.
    #[error("cone is not full-dimensional: its extreme rays span only {rank} of {dim} dimensions")]
    NotFullDimensional { rank: usize, dim: usize },

    /// The system <lambda_j, beta> = 1 has no solution.
    #[error("cone is not Gorenstein: the system <lambda_j, beta> = 1 is inconsistent")]
    NotGorenstein,

    /// The solved beta is not interior to the cone.
    #[error("Gorenstein point lies on the boundary of the cone")]
    BetaNotInterior,

    /// The Reeb vector is not in the interior of the dual cone, so the
    /// hyperplane section of the cone is unbounded.
    #[error("slice is unbounded: <xi, ray> = {margin:.3e} <= 0 for ray #{ray_index}")]
    UnboundedSlice { ray_index: usize, margin: f64 },

    /// The slice polytope does not have full dimension in its hyperplane.
    #[error("degenerate polytope: affine hull has dimension {found}, expected {expected}")]
    DegeneratePolytope { found: usize, expected: usize },

    /// Volume minimization did not reach the requested residual.
    #[error("volume minimization stopped after {max_iterations} iterations without reaching tol (residual {residual:.3e} > tol {tol:.3e})")]
    MaxIterationsExceeded {
        max_iterations: usize,
        residual: f64,
        tol: f64,
    },

    /// The line search could not keep the iterate inside the dual cone.
    #[error("line search left the interior of the dual cone; the cone data is likely malformed")]
    LeftInterior,

    /// The dual cone slice has no interior point.
    #[error("the Reeb hyperplane meets the dual cone in a set with empty interior")]
    EmptyInterior,

    /// Regularity classification needs a nonzero leading component.
    #[error("cannot form component ratios: leading component of xi is zero")]
    ZeroLeadingComponent,

    /// ke_profile called outside the k >= p positivity regime.
    #[error("positivity violation: k = {k} < p = {p}; the closed-form Einstein profile is only positive for k >= p (use the shrinking soliton instead)")]
    PositivityViolation { p: u32, k: u32 },

    /// Profile evaluation requested at a negative momentum value.
    #[error("negative tau: profile domain is tau >= 0, got {0}")]
    NegativeTau(f64),

    /// Soliton formulas are singular at mu = 0.
    #[error("soliton parameter mu must be nonzero")]
    MuZero,

    /// The (kappa, mu) sign pattern matches no soliton family.
    #[error("invalid soliton family: kappa = {kappa}, mu = {mu} matches no family (expanding: kappa<2, mu<0; steady: kappa=2, mu<0; shrinking: kappa>2, mu>0 with nu = 0)")]
    InvalidFamily { kappa: f64, mu: f64 },

    /// The bracket expansion for the shrinking-soliton root never found a
    /// sign change.
    #[error("bracket failure: nu(kappa, mu) has no sign change on (0, {upper:.3e}]; kappa = {kappa} is likely <= 2")]
    BracketFailure { kappa: f64, upper: f64 },

    /// Coordinate-change quadrature needs tau > 0.
    #[error("nonpositive tau: coordinate change is defined for tau > 0, got {0}")]
    NonPositiveTau(f64),

    /// The profile does not extend over the zero section.
    #[error("profile not extendable: phi'(0) = {dphi0} != 2")]
    ProfileNotExtendable { dphi0: f64 },

    /// D-homothetic transform needs positive inputs.
    #[error("nonpositive input: {0}")]
    NonPositiveInput(String),

    /// Adaptive quadrature hit the subdivision cap before converging.
    #[error("quadrature failure: error estimate {error:.3e} > tol {tol:.3e} after {subdivisions} subdivisions")]
    QuadratureFailure {
        error: f64,
        tol: f64,
        subdivisions: usize,
    },

    /// Bad run configuration (CLI flags, config file, grid syntax).
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    /// Report or CSV output could not be written.
    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    /// Process exit code class: 1 for validation errors, 2 for numerical
    /// failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::MaxIterationsExceeded { .. }
            | Error::LeftInterior
            | Error::BracketFailure { .. }
            | Error::QuadratureFailure { .. } => 2,
            _ => 1,
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
