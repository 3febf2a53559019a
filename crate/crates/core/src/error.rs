use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("degenerate momentum: |p| = {norm}")]
    DegenerateMomentum { norm: f64 },

    #[error("guarded singularity: {what} = {value:e} is not above guard {guard:e}")]
    GuardedSingularity {
        what: &'static str,
        value: f64,
        guard: f64,
    },

    #[error("chart domain violated: {0}")]
    ChartDomain(String),

    #[error("coset decomposition is singular: kappa3' = {kappa3:.3e} reaches the cut locus")]
    DecompositionSingular { kappa3: f64 },

    #[error("flow left the guard domain at step {step} of {steps} (1 + kappa3 = {margin:e})")]
    FlowSingular { step: usize, steps: usize, margin: f64 },

    #[error("finite rotation is singular: {0}")]
    SingularRotation(String),

    #[error("gauge transformation requires integer helicity, got lambda = {0}")]
    NonIntegerHelicity(f64),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}

pub type Result<T> = std::result::Result<T, Error>;
