use thiserror::Error;

/// Errors produced by the analytic and simulation routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{name} = {value} is outside [{lo}, {hi}]")]
    Domain {
        name: &'static str,
        value: f64,
        lo: f64,
        hi: f64,
    },
    #[error("invalid ROC curve: {0}")]
    InvalidCurve(String),
    #[error("pool is empty")]
    EmptyPool,
    #[error("pool has only positive samples; the false-positive rate is undefined")]
    AllPositive,
    #[error("pool has only negative samples; the true-positive rate is undefined")]
    AllNegative,
    #[error("invalid sample at index {index}: {reason}")]
    InvalidSample { index: usize, reason: String },
    #[error("acceptance probability is zero at F = {0}")]
    ZeroAcceptance(f64),
    #[error("compute budget {budget} is outside [1, {max}]")]
    BudgetOutOfRange { budget: f64, max: f64 },
    #[error("F = {0} is a breakpoint of the ROC curve; only one-sided slopes exist")]
    KinkPoint(f64),
    #[error("budget {budget} is not below the cost {limit} at the smallest observed F")]
    BudgetTooLarge { budget: f64, limit: f64 },
    #[error("observed accuracy at the budget is zero; no perfect extension exists")]
    ZeroAccuracyPrefix,
    #[error("binomial-sum ({binomial}) and single-integral ({integral}) accuracies disagree at N = {n}")]
    RepresentationMismatch { n: u64, binomial: f64, integral: f64 },
    #[error("no pool sample reaches threshold {0}")]
    NoAcceptingSample(f64),
    #[error("enumeration of {0} tuples exceeds the limit of 1e6")]
    TooLarge(u128),
    #[error("input is empty")]
    EmptyInput,
    #[error("invalid configuration: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_unit(name: &'static str, value: f64) -> Result<()> {
    if (0.0..=1.0).contains(&value) {
        Ok(())
    } else {
        Err(Error::Domain {
            name,
            value,
            lo: 0.0,
            hi: 1.0,
        })
    }
}
