use thiserror::Error;

pub type Result<T> = std::result::Result<T, DucciError>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DucciError {
    #[error("invalid ring parameters: {0}")]
    InvalidParams(String),

    #[error("dimension mismatch: Z_{left_m}^{left_n} vs Z_{right_m}^{right_n}")]
    DimensionMismatch {
        left_n: usize,
        left_m: u64,
        right_n: usize,
        right_m: u64,
    },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("cannot parse tuple `{input}`: {reason}")]
    Parse { input: String, reason: String },

    #[error("step budget of {budget} exceeded after {steps} steps")]
    StepBudget { budget: u64, steps: u64 },

    #[error("state space of {states} states exceeds the cap of {cap}")]
    StateCap { states: u128, cap: u64 },

    #[error("component exceeds the node cap of {cap}")]
    NodeCap { cap: usize },

    #[error("exponent {r} exceeds the exact-arithmetic budget of {max}")]
    ExactBudget { r: u64, max: u64 },
}

impl DucciError {
    /// True for the errors raised when a configured cap is hit.
    pub fn is_resource(&self) -> bool {
        matches!(
            self,
            DucciError::StepBudget { .. }
                | DucciError::StateCap { .. }
                | DucciError::NodeCap { .. }
                | DucciError::ExactBudget { .. }
        )
    }
}
