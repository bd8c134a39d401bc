//! Brute-force references for the closed-form decoherence factor.
//!
//! [`mode_overlap_oracle`] evolves every mode pair explicitly with its 2x2
//! block; [`exact_diag_oracle`] works directly with the spin Hamiltonian
//! and never passes through the fermion picture.

mod exact_diag;
mod mode_block;

pub use exact_diag::{
    chain_hamiltonian, exact_diag_oracle, full_hamiltonian, ExactEvolution, Parity, MAX_EXACT_SITES, MAX_FULL_SITES,
};
pub use mode_block::{build_mode_block, mode_overlap_oracle, ModeBlock};
