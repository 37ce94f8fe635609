use thiserror::Error;

use crate::expansion::Word;
use crate::normalize::UniversalRun;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("polynomial has no root in the given interval")]
    NoRootInInterval,
    #[error("polynomial has {0} roots in the given interval; expected exactly one")]
    MultipleRootsInInterval(usize),
    #[error("base must lie strictly between 1 and 2")]
    RootOutsideUnitRange,
    #[error("decimal working precision must be at least 64 bits (got {0})")]
    PrecisionTooLow(u32),
    #[error("operands belong to different bases")]
    MixedBase,
    #[error("division by zero")]
    DivisionByZero,
    #[error("element is not invertible modulo the defining polynomial (is it reducible?)")]
    NotInvertible,
    #[error("sign undecided at the current working precision")]
    Undecided,
    #[error("value outside the admissible domain: {0}")]
    OutOfDomain(String),
    #[error("could not certify the result within a horizon of {0} digits")]
    UndeterminedWithinHorizon(usize),
    #[error("word value exceeds one")]
    ValueExceedsOne,
    #[error("no admissible increment found within {0} digits")]
    HorizonExhausted(usize),
    #[error("word {0} is not admissible")]
    NotAdmissible(Word),
    #[error("cover word {cover} for target {target} not found within {horizon} digits")]
    OccurrenceNotFound {
        target: Word,
        cover: Word,
        horizon: usize,
    },
    #[error("digit budget exhausted after embedding {} target words", partial.report.len())]
    BudgetExhausted { partial: Box<UniversalRun> },
    #[error("operation requires the algebraic backend")]
    BackendUnsupported,
    #[error("length {len} exceeds the configured cap {cap}")]
    LengthCapExceeded { len: usize, cap: usize },
    #[error("normalization of {0} is not finite within its own length")]
    NotFinitary(Word),
    #[error("tree exceeded the node budget of {0}")]
    NodeBudgetExceeded(usize),
    #[error("exact quasi-greedy expansion of one is not available")]
    QuasiGreedyUnavailable,
    #[error("requested precision exceeds the cap of {0} digits")]
    PrecisionCapExceeded(usize),
}

impl Error {
    /// True for failures that more working precision may cure.
    pub fn is_precision_related(&self) -> bool {
        matches!(self, Error::Undecided | Error::UndeterminedWithinHorizon(_))
    }
}
