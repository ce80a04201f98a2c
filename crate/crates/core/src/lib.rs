//! Finite operational quantum theories, their ontological models, and
//! machine-checked certificates for the preparation, measurement and
//! transformation contextuality no-go theorems in a qubit.
//!
//! The crate is organized bottom-up:
//!
//! - [`qmath`]: complex matrices, density operators, POVMs, Kraus channels,
//!   Bloch vectors and Choi matrices.
//! - [`operational`]: labeled procedures, operational equivalence, convex
//!   mixtures and the canonical six-state qubit instance.
//! - [`ontomodel`]: finite ontic spaces, distributions, indicator sets,
//!   transition matrices and the prediction rule.
//! - [`nogo`]: exact constraint systems, the pointwise feasibility certifier
//!   and the no-go drivers.
//! - [`bbmodel`]: the ray-valued ontological model with seeded sampling.
//! - [`kraus`]: unitary remixing of operator-sum representations.
//! - [`figure`]: SVG rendering of the six states and their decompositions.
//! - [`cli`]: the command front end used by the `contextuality` binary.
//!
//! Runnable walkthroughs for each capability live in `examples/`.

pub mod bbmodel;
pub mod cli;
pub mod error;
pub mod figure;
pub mod kraus;
pub mod nogo;
pub mod ontomodel;
pub mod operational;
pub mod qmath;
pub mod rational;

pub use error::{Error, Result};
