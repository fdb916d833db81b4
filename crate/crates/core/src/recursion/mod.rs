//! Topological recursion on a genus-zero spectral curve.

pub mod basis;
pub mod free_energy;
pub mod omega;

pub use basis::{kernel_expansion, LocalBasis, RecursionKernel, ResidueFrame};
pub use free_energy::{free_energy, free_energy_terms};
pub use omega::{CheckReport, Label, MeromorphicForm, OmegaTable, RecursionConfig};

use thiserror::Error;

use crate::algebra::AlgebraError;
use crate::curve::CurveError;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RecursionError {
    #[error(transparent)]
    Curve(#[from] CurveError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("UnstablePair: ({0},{1}) is initial data, not a recursion output")]
    UnstablePair(u32, u32),
    #[error("GenusTooLow: free energies are computed for g >= 2, got g = {0}")]
    GenusTooLow(u32),
    #[error("InvariantViolation: {0}")]
    Invariant(String),
}

impl RecursionError {
    pub fn kind(&self) -> &'static str {
        match self {
            RecursionError::Curve(e) => e.kind(),
            RecursionError::Algebra(e) => e.kind(),
            RecursionError::UnstablePair(..) => "UnstablePair",
            RecursionError::GenusTooLow(_) => "GenusTooLow",
            RecursionError::Invariant(_) => "InvariantViolation",
        }
    }

    pub fn is_config_error(&self) -> bool {
        match self {
            RecursionError::Curve(e) => e.is_config_error(),
            RecursionError::Algebra(AlgebraError::IrrationalRootsInExactMode) => true,
            RecursionError::UnstablePair(..) => true,
            _ => false,
        }
    }
}

/// `2(3g - 3 + n) + 2`, the largest pole order of `ω_{g,n}` at a
/// ramification point.
pub fn max_pole_order(g: u32, n: u32) -> usize {
    (2 * (3 * g as i64 - 3 + n as i64) + 2).max(0) as usize
}

/// Default expansion order `K(g, n) = 2(3g - 3 + n) + 12`.
pub fn default_order(g: u32, n: u32) -> i64 {
    2 * (3 * g as i64 - 3 + n as i64) + 12
}
