//! Exact constants and numerical verification for radial
//! Poincaré–Hardy–Rellich inequalities on the hyperbolic space `H^N`.
//!
//! The crate is organised in six layers, each usable on its own:
//!
//! * [`hypgeom`] — scalar special functions of the radial geometry: the
//!   volume function `G` of geodesic balls, its inverse `F`, the weight
//!   `g(r) = (r·coth r − 1)/r²`, and the growth ratio that governs where
//!   the space starts to look genuinely hyperbolic.
//! * [`radial_calculus`] — truncated-Taylor ("jet") arithmetic for radial
//!   functions, the radial gradient/Laplacian/iterated-gradient operators,
//!   and a library of admissible test functions.
//! * [`measure_quadrature`] — adaptive Gauss–Legendre quadrature for
//!   weighted integrals against the hyperbolic volume measure and for
//!   half-line integrals with power-law tails.
//! * [`coefficients`] — every constant in the inequality family, computed
//!   in exact rational arithmetic with endpoint cross-checks against the
//!   printed closed forms.
//! * [`sharpness`] — the extremising sequence: the piecewise profile on the
//!   volume variable, the inverse-Laplacian iteration, the lift back to
//!   `H^N`, and Rayleigh-quotient sweeps.
//! * [`harness`] — uniform inequality checks over the test-function
//!   library, suite runners, and machine-readable reports.

pub mod coefficients;
pub mod harness;
pub mod hypgeom;
pub mod measure_quadrature;
pub mod radial_calculus;
pub mod sharpness;

/// Crate-wide error type.
///
/// Variants map onto the process exit codes used by the CLI:
/// `Domain`/`Hypothesis` are caller errors (exit code 2), `NonConvergence`
/// is a numerical failure (exit code 3).
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// An argument lies outside the mathematical domain of an operation
    /// (e.g. a negative radius, or an unsupported dimension).
    #[error("domain error: {0}")]
    Domain(String),

    /// Structural hypotheses of an inequality are violated
    /// (e.g. `alpha`/`beta`/`k`/`l`/`n` outside the admissible range).
    #[error("hypothesis violation: {0}")]
    Hypothesis(String),

    /// An iterative numerical method failed to reach its tolerance.
    #[error("non-convergence: {0}")]
    NonConvergence(String),

    /// Filesystem or serialization failure while emitting a report.
    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Process exit code the CLI maps this error to.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Domain(_) | Error::Hypothesis(_) | Error::Io { .. } => 2,
            Error::NonConvergence(_) => 3,
        }
    }
}
