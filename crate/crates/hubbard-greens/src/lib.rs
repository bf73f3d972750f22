//! Simulator and exact-oracle toolkit for the zero-temperature spectral
//! function of the two-site Fermi-Hubbard model, computed the way a photonic
//! variational experiment computes it: a six-dimensional polarization (x)
//! path state space, trigonometric-fit VQE for the ground and excited
//! states, projective transition-amplitude measurements with multinomial
//! shot noise, and an independent full-Fock-space oracle validating every
//! stage.

pub mod error;
pub mod fock;
pub mod greens;
pub mod linalg;
pub mod model;
pub mod oracle;
pub mod photonic;
pub mod run;
pub mod vqe;

pub mod cli;

pub use error::{Error, Result};
