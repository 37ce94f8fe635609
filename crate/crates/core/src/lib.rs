//! Expansions of reals in a non-integer base `β ∈ (1, 2)`.
//!
//! * [`numeric`]: the base and exact/interval arithmetic over it;
//! * [`expansion`]: greedy and lazy digits, admissibility, word values;
//! * [`normalize`]: normalization, cover words and universal expansions;
//! * [`branching`]: expansion trees, uniqueness and the Thue–Morse apparatus;
//! * [`stats`]: factor complexity, block frequencies and samplers.

pub mod branching;
pub mod error;
pub mod expansion;
pub mod normalize;
pub mod numeric;
pub mod stats;

pub use error::{Error, Result};
pub use expansion::{EventuallyPeriodicSeq, Word};
pub use numeric::{Beta, FieldValue};
