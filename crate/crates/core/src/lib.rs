//! Geometric phase of a central qubit coupled to an anisotropic XY spin
//! chain with three-spin interaction.
//!
//! The pipeline runs bottom-up:
//!
//! * [`chain`] holds the model parameters and per-mode spectra,
//! * [`decoherence`] evaluates `|F(t)|` as a product over modes,
//! * [`geophase`] turns `|F|` into the reduced-state spectrum and the phase,
//! * [`approx`] is the weak-coupling closed form,
//! * [`oracle`] checks `|F|` by brute force,
//! * [`sweep`], [`output`], [`config`] and [`verify`] drive batch runs.

// `!(x > 0.0)` is deliberate: it rejects NaN along with the ordered failures.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod approx;
pub mod chain;
pub mod config;
pub mod decoherence;
pub mod error;
pub mod geophase;
pub mod oracle;
pub mod output;
pub mod quadrature;
pub mod stats;
pub mod sweep;
pub mod verify;

pub use chain::{Field, ModelParams};
pub use error::{Error, Result};
pub use geophase::GpResult;
