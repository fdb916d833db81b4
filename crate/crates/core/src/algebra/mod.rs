//! Scalars, polynomials, rational functions and truncated Laurent series.

pub mod expr;
pub mod logs;
pub mod partial_fractions;
pub mod poly;
pub mod ratfun;
pub mod roots;
pub mod scalar;
pub mod series;

pub use logs::LogValue;
pub use partial_fractions::{partial_fractions, PartialFractions};
pub use poly::Polynomial;
pub use ratfun::RationalFunction;
pub use roots::{poly_roots, Root};
pub use scalar::{Prec, Scalar, C, DEFAULT_PRECISION, Q};
pub use series::LaurentSeries;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AlgebraError {
    #[error("ZeroPolynomial: operation undefined for the zero polynomial")]
    ZeroPolynomial,
    #[error("IrrationalRootsInExactMode: polynomial has roots outside Q; rerun in numeric mode")]
    IrrationalRootsInExactMode,
    #[error("BadValuation: {0}")]
    BadValuation(String),
    #[error("TruncationTooShort: need order {needed}, have {available}")]
    TruncationTooShort { needed: i64, available: i64 },
    #[error("ResidueObstruction: cannot integrate a series with a degree -1 term")]
    ResidueObstruction,
    #[error("LogOfZeroValuation: log needs valuation 0, got {0}")]
    LogValuation(i64),
    #[error("NonZeroConstant: exp needs a series without constant term")]
    NonZeroConstant,
    #[error("NotInvertible: leading coefficient is zero or has no inverse")]
    NotInvertible,
    #[error("MissingPole: denominator root {0} not among the listed poles")]
    MissingPole(String),
    #[error("RootFindingFailed: {0}")]
    RootFindingFailed(String),
    #[error("ParseError: {0}")]
    Parse(String),
}

impl AlgebraError {
    /// Stable identifier used in machine-readable error reports.
    pub fn kind(&self) -> &'static str {
        match self {
            AlgebraError::ZeroPolynomial => "ZeroPolynomial",
            AlgebraError::IrrationalRootsInExactMode => "IrrationalRootsInExactMode",
            AlgebraError::BadValuation(_) => "BadValuation",
            AlgebraError::TruncationTooShort { .. } => "TruncationTooShort",
            AlgebraError::ResidueObstruction => "ResidueObstruction",
            AlgebraError::LogValuation(_) => "LogOfZeroValuation",
            AlgebraError::NonZeroConstant => "NonZeroConstant",
            AlgebraError::NotInvertible => "NotInvertible",
            AlgebraError::MissingPole(_) => "MissingPole",
            AlgebraError::RootFindingFailed(_) => "RootFindingFailed",
            AlgebraError::Parse(_) => "ParseError",
        }
    }
}
