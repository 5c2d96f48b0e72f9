//! Power-law measure checks and box-counting dimension estimates.

mod digits;
mod dimension;
mod power;

pub use digits::{ba_digit_set_oracle, digit_cylinders, dimension_of_ba_digits, BaDigitOracle, BA_DIGITS_BASE};
pub use dimension::{box_counts, box_dimension, fit_slope, CantorOracle, DimensionEstimate, FinitePoints, SetOracle, UnitInterval};
pub use power::{cantor_function, power_law_check, CantorMeasure, LebesgueMeasure, MeasureOracle, PowerLawReport, Rejection, ScaleRow};
pub use power::{cantor_samples, DEFAULT_STABILITY_TOLERANCE};

use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum AnalysisError {
    #[error("{0}")]
    Domain(String),
    /// The oracle's word-length budget cannot resolve the queried interval.
    #[error("digit depth {depth} too small to resolve an interval of width {width:e}")]
    Refused { depth: u32, width: f64 },
}
