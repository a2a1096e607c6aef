//! Numerical toolkit for entangled pure states of two two-level atoms.
//!
//! The crate builds the general bipartite state from six real superposition
//! constants, computes coordinate-frame-independent spin uncertainties,
//! von Neumann entropies, and spin/spectroscopic squeezing parameters, and
//! cross-checks every closed form against a brute-force dense-matrix route.
//!
//! Module map:
//!
//! - [`linalg`] — dense complex matrices, Kronecker product, partial trace,
//!   Hermitian eigensolvers.
//! - [`spin`] — single-atom and collective pseudo-spin operators.
//! - [`state`] — the six-constant state family and its reduced densities.
//! - [`frame`] — mean spin vector and the rotation aligning it with z′.
//! - [`metrics`] — uncertainties, entropies, squeezing parameters, and the
//!   entropy↔squeezing inversions.
//! - [`sweep`] — parameter sweeps, crossing detection, CSV/JSON emitters.
//! - [`verify`] — seeded random verification of all module invariants.

pub mod error;
pub mod frame;
pub mod linalg;
pub mod metrics;
pub mod spin;
pub mod state;
pub mod sweep;
pub mod tol;
pub mod verify;

pub use error::{Error, Result};
pub use frame::MeanSpinFrame;
pub use linalg::{C64, ComplexMatrix, StateVector, Subsystem};
pub use metrics::{EntropyReport, SqueezingReport, UncertaintyPair};
pub use spin::{EnsembleSpec, SpinOperatorSet};
pub use state::{Amplitudes, BipartiteParams};
pub use sweep::{AnalysisReport, BasisConstants, SweepConfig};
