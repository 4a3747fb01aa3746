//! Exact arithmetic in truncated one- and two-variable Laurent series.

pub mod laurent;
pub mod twolocal;

pub use laurent::{LaurentSeries, SeriesError};
pub use twolocal::{NormalForm, Rank2Val, TwoLocalElement};
