//! Dense density-matrix simulation of redundant system records in small
//! qubit environments.
//!
//! A system qubit `S` couples to fragments `A1..An` through
//! `H_SA = J Σ σ_z^S σ_z^{Ai}` and to an unmonitored environment `E`, either
//! through repeated collisions ([`collision`]) or a master equation
//! ([`lindblad`]). Mutual information between `S` and fragment subsets,
//! rescaled by the system entropy ([`metrics`]), measures how redundantly
//! the environment holds information about the system's pointer basis.
//!
//! ```
//! use objectivity::collision::{run_collision_sim, CollisionConfig};
//!
//! let config = CollisionConfig { steps: 200, ..Default::default() };
//! let profiles = run_collision_sim(&config).unwrap();
//! assert_eq!(profiles.len(), 200);
//! ```

// `!(x <= tol)` is used on purpose so that NaN fails the check.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod collision;
pub mod error;
pub mod linalg;
pub mod lindblad;
pub mod metrics;
pub mod space;
pub mod state;

/// Largest total Hilbert-space dimension any register may have.
pub const MAX_DIM: usize = 32;

pub use collision::{collision_step, run_collision_sim, CollisionConfig, CollisionModel, Interaction, StroboscopicState};
pub use error::{Error, Result};
pub use linalg::{hermitian_eig, kron, unitary_from_hamiltonian, ComplexMatrix, C64};
pub use lindblad::{integrate, integrate_nonmarkov, Bath, LindbladConfig, TrajectoryRecord};
pub use metrics::{mi_profile, mutual_information, rescaled_mi, FragmentPolicy, FragmentRecord, FragmentSelection, MIProfile};
pub use space::{embed, TensorSpace};
pub use state::{gibbs_qubit, partial_trace, trace_distance, von_neumann_entropy, DensityMatrix};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/states.md")]
    mod states {}
    #[doc = include_str!("../../../book/src/information.md")]
    mod information {}
    #[doc = include_str!("../../../book/src/collisions.md")]
    mod collisions {}
    #[doc = include_str!("../../../book/src/master-equation.md")]
    mod master_equation {}
    #[doc = include_str!("../../../book/src/non-markovian.md")]
    mod non_markovian {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
