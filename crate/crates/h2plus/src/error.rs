use thiserror::Error;

/// Errors produced by the solver library.
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("point coincides with nucleus {nucleus} within 1e-14 bohr; use the focal limit point instead")]
    NucleusCoincidence { nucleus: u8 },

    #[error("non-finite input: {what}")]
    NonFiniteInput { what: &'static str },

    #[error("truncation not converged: tail estimate {tail:.3e} > {tol:.1e} at cap {cap}")]
    TruncationNotConverged { tail: f64, tol: f64, cap: usize },

    #[error("separation constant A = {a:.6e} < 0: sqrt(A) imaginary, ansatz path unavailable")]
    ImaginaryRoot { a: f64 },

    #[error("bound state requires E < 0, got E = {e}")]
    NonBoundEnergy { e: f64 },

    #[error("no sign change of the solvability defect in the energy window [{lo}, {hi}]")]
    BracketingFailed {
        lo: f64,
        hi: f64,
        /// (E, defect) samples from the failed scan, for diagnosis.
        scan: Vec<(f64, f64)>,
    },

    #[error("root refinement did not converge within {max_iter} iterations")]
    ConvergenceFailed { max_iter: usize },

    #[error("no matching eigenvalue A in the scanned window [{lo}, {hi}]")]
    MatchFailed { lo: f64, hi: f64 },

    #[error("quadrature tail bound {tail:.3e} exceeds 1e-12 of the integral")]
    QuadratureNotConverged { tail: f64 },

    #[error("need at least {need} samples, got {got}")]
    TooFewSamples { need: usize, got: usize },

    #[error("cusp radii must be >= 4 values inside [1e-4, 1e-2] bohr")]
    RadiiOutOfRange,
}

pub type Result<T> = std::result::Result<T, Error>;
