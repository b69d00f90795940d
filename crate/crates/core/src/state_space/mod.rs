//! Locales, interactions, configuration spaces and their transition structure.

mod group;
mod interaction;
pub mod lattice;
mod locale;
mod space;
mod transitions;

pub use group::{group_act, GroupActable, GroupAction, SiteMapping, Symmetry};
pub use interaction::{Interaction, InteractionReport, InteractionViolation};
pub use lattice::{Lattice, LatticeShape};
pub use locale::{Edge, Locale};
pub use space::{Caps, Config, ConfigSpace, SiteSet};
pub use transitions::{Components, System, Transition, TransitionGraph};

/// Integer site identifier; see [`lattice`] for the encoding of lattice points.
pub type SiteId = i64;
