use thiserror::Error;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("degree has length {found}, expected {expected}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("elements belong to different algebra specs")]
    SpecMismatch,
    #[error("element is not homogeneous")]
    NonHomogeneous,
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
    #[error("invalid spec: {0}")]
    InvalidSpec(String),
    #[error("rewriting did not terminate within {steps} steps")]
    IterationCap { steps: usize },
    #[error("completion produced a non-unit leading coefficient at {0}")]
    NonUnitLead(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("matrix dimensions {0}x{1} and {2}x{3} are incompatible")]
    Dimension(usize, usize, usize, usize),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("spec has no ambient frame")]
    NoFrame,
    #[error("unsupported: {0}")]
    Unsupported(String),
}

impl AlgebraError {
    /// Reduction failures are inconclusive rather than wrong.
    pub fn is_inconclusive(&self) -> bool {
        matches!(self, AlgebraError::IterationCap { .. })
    }
}
