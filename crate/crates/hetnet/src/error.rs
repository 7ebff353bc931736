use std::fmt;

/// A single model-invariant violation, pointing at the offending tier when
/// the problem is tier-local.
#[derive(Debug, Clone, PartialEq)]
pub struct Violation {
    /// 0-based tier index, `None` for model-level problems.
    pub tier: Option<usize>,
    pub message: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.tier {
            Some(k) => write!(f, "tier {}: {}", k, self.message),
            None => write!(f, "{}", self.message),
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid model: {}", format_violations(.0))]
    InvalidModel(Vec<Violation>),

    #[error("{name} out of domain: {reason}")]
    Domain { name: &'static str, reason: String },

    #[error("tier index {index} out of range for {count} tiers")]
    TierIndex { index: usize, count: usize },

    #[error("numerical failure in {context}: {reason}")]
    Numeric {
        context: &'static str,
        reason: String,
    },
}

fn format_violations(vs: &[Violation]) -> String {
    vs.iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join("; ")
}

pub type Result<T> = std::result::Result<T, Error>;
