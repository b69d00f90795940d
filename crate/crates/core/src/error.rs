use thiserror::Error;

use crate::state_space::SiteId;

/// Errors raised by every module of the crate.
///
/// Variant names are part of the machine-readable interface: the CLI reports
/// them verbatim through [`Error::kind`].
#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("edge ({0}, {1}) has no reverse edge")]
    NotSymmetric(SiteId, SiteId),
    #[error("graph is not simple: {0}")]
    NotSimple(String),
    #[error("graph is not connected: site {0} is unreachable from site {1}")]
    NotConnected(SiteId, SiteId),
    #[error("torus side length {0} is smaller than 3")]
    SizeTooSmall(i64),
    #[error("configuration space has more than {cap} states ({states}^{sites})")]
    SpaceTooLarge {
        states: usize,
        sites: usize,
        cap: usize,
    },
    #[error("edge ({0}, {1}) does not lie in the site set")]
    EdgeOutsideSiteSet(SiteId, SiteId),
    #[error("group element moves site {0} outside the represented window")]
    ActionLeavesWindow(SiteId),
    #[error("site set is empty")]
    EmptySet,
    #[error("site set is not a subset of the ambient site set")]
    NotSubset,
    #[error("site sets of the operands differ")]
    SiteSetMismatch,
    #[error("operation requires a product measure")]
    NonProductMeasure,
    #[error("expansion over {sites} sites exceeds the subset cap {cap}")]
    TooManySubsets { sites: usize, cap: usize },
    #[error("form is not closed: witness cycle has integral {integral}")]
    NotClosed {
        start: usize,
        edges: Vec<(SiteId, SiteId)>,
        integral: String,
    },
    #[error("malformed form: {0}")]
    MalformedForm(String),
    #[error("invalid path: {0}")]
    InvalidPath(String),
    #[error("measure is not ordinary on the requested chain")]
    NotOrdinary,
    #[error("window too small: {0}")]
    WindowTooSmall(String),
    #[error("form is not invariant under generator {generator} on the interior")]
    NotInvariant { generator: usize },
    #[error(
        "cocycle image for generator {generator} is not in the span of the conserved quantities"
    )]
    ResidueNotConserved { generator: usize },
    #[error("unknown site {0}")]
    UnknownSite(SiteId),
    #[error("invalid measure: {0}")]
    InvalidMeasure(String),
    #[error("invalid interaction: {0}")]
    InvalidInteraction(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

impl Error {
    /// The variant name, used as the stable error identifier in JSON reports.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::NotSymmetric(..) => "NotSymmetric",
            Error::NotSimple(_) => "NotSimple",
            Error::NotConnected(..) => "NotConnected",
            Error::SizeTooSmall(_) => "SizeTooSmall",
            Error::SpaceTooLarge { .. } => "SpaceTooLarge",
            Error::EdgeOutsideSiteSet(..) => "EdgeOutsideSiteSet",
            Error::ActionLeavesWindow(_) => "ActionLeavesWindow",
            Error::EmptySet => "EmptySet",
            Error::NotSubset => "NotSubset",
            Error::SiteSetMismatch => "SiteSetMismatch",
            Error::NonProductMeasure => "NonProductMeasure",
            Error::TooManySubsets { .. } => "TooManySubsets",
            Error::NotClosed { .. } => "NotClosed",
            Error::MalformedForm(_) => "MalformedForm",
            Error::InvalidPath(_) => "InvalidPath",
            Error::NotOrdinary => "NotOrdinary",
            Error::WindowTooSmall(_) => "WindowTooSmall",
            Error::NotInvariant { .. } => "NotInvariant",
            Error::ResidueNotConserved { .. } => "ResidueNotConserved",
            Error::UnknownSite(_) => "UnknownSite",
            Error::InvalidMeasure(_) => "InvalidMeasure",
            Error::InvalidInteraction(_) => "InvalidInteraction",
            Error::InvalidInput(_) => "InvalidInput",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
