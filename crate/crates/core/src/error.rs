use thiserror::Error;

/// Errors reported by the numerical routines.
///
/// Every failure mode is explicit; no routine silently degrades its output.
#[derive(Error, Debug, Clone)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("matrix is not symmetric: max |a_ij - a_ji| = {asym:.3e} exceeds {tol:.3e}")]
    NotSymmetric { asym: f64, tol: f64 },

    #[error("linear system is singular or ill-conditioned (condition estimate {cond:.3e})")]
    IllConditioned { cond: f64 },

    #[error("eigenvalue iteration failed to converge")]
    EigenNoConvergence,

    #[error("ODE step size underflow at t = {t} (problem too stiff for this integrator)")]
    Stiffness { t: f64 },

    #[error("Newton iteration did not converge: residual {residual:.3e} after {iters} iterations")]
    NewtonNoConvergence {
        residual: f64,
        iters: usize,
        /// Best iterate found so far.
        best: Vec<f64>,
    },

    #[error("argument out of validated range: {0}")]
    OutOfRange(String),

    #[error("unsupported potential: {0}")]
    UnsupportedPotential(String),

    #[error("constraint infeasible: {0}")]
    ConstraintInfeasible(String),

    #[error("quadrature resolution insufficient: {0}")]
    ResolutionInsufficient(String),

    #[error("resolvent ill-conditioned: 1 - lambda_max = {margin:.3e} below gate {gate:.3e}")]
    IllConditionedResolvent { margin: f64, gate: f64 },

    #[error("internal consistency check failed: {0}")]
    InternalConsistency(String),
}
