//! Local functions, co-local chains, Martingale expansions and conserved quantities.

mod chain;
mod conserved;
mod expansion;
mod table;

pub use chain::{build_chain, iota_restrict, CoLocalChain};
pub use conserved::{
    check_iq, conserved_colocal, conserved_quantities, ConservedQuantity, IqLocaleReport, IqReport,
    IqWitness,
};
pub use expansion::{expand_martingale, uniform_radius, Expansion};
pub use table::FnTable;
