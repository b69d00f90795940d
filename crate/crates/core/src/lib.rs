//! Conserved quantities, co-local functions and closed forms for
//! interacting particle systems on finite locales.

pub mod error;
pub mod forms;
pub mod functions;
pub mod io;
pub mod l2;
pub mod linalg;
pub mod measure;
pub mod scalar;
pub mod state_space;
mod union_find;
pub mod varadhan;

pub use error::{Error, Result};
pub use forms::{
    cycle_basis, differential, is_closed, kernel_basis, path_integral, project_form,
    project_form_unchecked, solve_potential, Form, FormDimensions, KernelBasis, Path,
};
pub use functions::*;
pub use l2::{l2_norm, martingale_chain_report, L2Norm, MartingaleReport};
pub use measure::*;
pub use scalar::{format_rational, parse_rational, Scalar, Q};
pub use state_space::*;
pub use varadhan::{
    cocycle_identity_at, decompose_invariant_form, fundamental_domain, omega_from_cocycle,
    theta_from_cocycle, trivial_action_holds, verify_cocycle_identity, BoxWindow, Cocycle,
    CocycleCheck, DecomposeOptions, Decomposition, FundamentalDomain, InvariantForm, Strategy,
};
