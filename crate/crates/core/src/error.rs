use thiserror::Error;

/// Errors raised across the geometry pipeline.
///
/// Hypothesis violations (mean convexity, positivity of `σ_p`) are kept apart
/// from domain and configuration errors so callers can map them to distinct
/// exit statuses.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("profile evaluation failed at r = {r}: {reason}")]
    ProfileDomain { r: f64, reason: String },

    #[error("invalid profile parameters: {0}")]
    InvalidProfile(String),

    #[error("no horizon root: {0}")]
    NoHorizon(String),

    #[error("kappa = {kappa} too large: potential has no positive region beyond the horizon")]
    KappaTooLarge { kappa: f64 },

    #[error("unknown profile family `{0}`")]
    UnknownProfile(String),

    #[error("malformed profile block: {0}")]
    ProfileBlock(String),

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("invalid surface: {0}")]
    InvalidSurface(String),

    #[error("pole singularity at node {node}: non-finite covariant Hessian")]
    PoleSingularity { node: usize },

    #[error("surface node {node} has r = {r}, outside the admissible range ({lo}, {hi})")]
    OutOfDomain { node: usize, r: f64, lo: f64, hi: f64 },

    #[error("field length {got} does not match grid size {expected}")]
    FieldLength { expected: usize, got: usize },

    #[error("index {index} out of range for curvature vector of length {len}")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("order p = {p} not admissible for dimension n = {n}")]
    InvalidOrder { p: usize, n: usize },

    #[error("curvature vector not in the Garding cone of order {k} (cone level {level})")]
    NotInCone { k: usize, level: usize },

    #[error("mean convexity violated: H = {value} at node {node}")]
    NotMeanConvex { node: usize, value: f64 },

    #[error("sigma_{p} = {value} <= 0 at node {node}")]
    SigmaNotPositive { p: usize, node: usize, value: f64 },

    #[error("operation requires an axisymmetric grid")]
    NotAxisymmetric,

    #[error("no slice with sigma_{p} = {c} inside the domain")]
    NoSliceRoot { p: usize, c: f64 },

    #[error("singular Jacobian at iteration {iteration} (condition estimate {condition:e})")]
    SingularJacobian { iteration: usize, condition: f64 },

    #[error("no admissible Newton step at iteration {iteration}")]
    NoAdmissibleStep { iteration: usize },

    #[error("invalid solver input: {0}")]
    SolverInput(String),
}

impl Error {
    /// True for errors meaning a hypothesis of an inequality was not met,
    /// rather than a malformed input.
    pub fn is_hypothesis_violation(&self) -> bool {
        matches!(
            self,
            Error::NotMeanConvex { .. } | Error::SigmaNotPositive { .. } | Error::NotInCone { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
