//! Piecewise-linear torus loops, their central extensions, reparametrization
//! cochains and the bicoloured loop groups of a span.

mod bicoloured;
mod path;
pub mod random;
mod reparam;
mod support;
mod unicoloured;

use thiserror::Error;

use crate::foundation::Angle;
use crate::span::SpanError;

pub use bicoloured::{BicolouredGroup, BicolouredLoop, Embedding};
pub use path::PLPath;
pub use reparam::PLReparam;
pub use support::{Arc, CircleSet};
pub use unicoloured::{Coboundary, Decomposition, LoopGroup, PLLoop};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LoopError {
    #[error("malformed path: {0}")]
    BadPath(&'static str),
    #[error("malformed reparametrization: {0}")]
    BadReparam(&'static str),
    #[error("winding element is not in the lattice")]
    WindingNotIntegral,
    #[error("winding element is not in Λw−Λb")]
    WindingNotInSum,
    #[error("value at q does not glue to the white and black paths")]
    EndpointMismatch,
    #[error("operands belong to different groups")]
    Mismatch,
    #[error("supports are not in complementary intervals")]
    SupportOverlap,
    #[error("loop is not supported in the required half")]
    SupportViolation,
    #[error("matrix is not an isometry of the lattice")]
    NotIsometry,
    #[error("span level must divide the cover of the reparametrization")]
    PeriodMismatch,
    #[error(transparent)]
    Span(#[from] SpanError),
}

/// An element (γ, z) of a central extension by ℚ/ℤ.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtensionElement<L> {
    pub base: L,
    pub phase: Angle,
}

impl<L> ExtensionElement<L> {
    pub fn new(base: L, phase: Angle) -> Self {
        ExtensionElement { base, phase }
    }
}
