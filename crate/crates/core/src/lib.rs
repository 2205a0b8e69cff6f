//! Exact thermal solver for the spin-1/2 Ising-XXZ chain of the heterotrimetallic
//! Fe-Mn-Cu coordination polymer with a single impurity dimer.
//!
//! Each unit cell holds a Mn-Cu Heisenberg dimer bonded to two classical Fe nodal
//! spins. The nodal spins are traced out with 2x2 transfer matrices, which leaves
//! the reduced state of the impurity dimer as a two-qubit X state. Everything else
//! (concurrence, l1 coherence, correlators, quantum Fisher information,
//! teleportation fidelities) is computed from that X state.
//!
//! Module layout:
//!
//! - [`model`]: parameters, dimer Hamiltonian blocks, spectra and Boltzmann weights.
//! - [`xfer`]: transfer matrices, partition functions and reduced density matrices.
//! - [`oracle`]: brute-force enumeration and the generic Wootters concurrence.
//! - [`measures`]: quantum-information quantities of an X state.
//! - [`teleport`]: standard teleportation through two copies of the thermal channel.
//! - [`cli`]: sweep configuration, grid runner, CSV output, finders and presets.

pub mod cli;
pub mod error;
pub mod measures;
pub mod model;
pub mod oracle;
pub mod teleport;
pub mod xfer;

mod numeric;

pub use error::{Error, Result};
pub use measures::MeasureBundle;
pub use model::{CellKind, DimerEigensystem, ModelParams, NodalSector};
pub use teleport::{InputState, TeleportOutput};
pub use xfer::{ScaledTransferMatrix, TmEigen, XState};
