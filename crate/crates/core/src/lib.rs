//! Deterministic, unit-fidelity teleportation of a `d`-level state through a
//! partially entangled `n`-level pure resource.
//!
//! The crate is `no_std` (it needs `alloc`) and covers the algorithmic side:
//!
//! - [`linalg`]: dense complex vectors and matrices, SVD and Schmidt decomposition.
//! - [`spectrum`]: Schmidt spectra, optionally carrying exact rationals.
//! - [`phases`]: phase factors `θ_mk` whose weighted phasor sums are orthogonal.
//! - [`protocol`]: the coefficient table `V^(j)_mk`, Alice's measurement basis
//!   and Bob's correcting unitaries.
//! - [`sim`]: exact statevector simulation of the four protocol steps.
//! - [`bounds`]: entanglement measures and classical-communication-cost bounds.
//!
//! Composite registers are laid out big-endian: the first subsystem index is
//! the most significant one, so `|m⟩₁|k⟩₂` lives at offset `m·n + k`.

#![no_std]

extern crate alloc;

pub mod bounds;
pub mod error;
pub mod linalg;
pub mod phases;
pub mod protocol;
pub mod sim;
pub mod spectrum;

pub use error::{Error, Result};
pub use linalg::{BipartiteShape, ComplexMat, ComplexVec, C64};
pub use phases::{Partition, PhaseMatrix};
pub use protocol::{BobUnitarySet, Construction, MeasurementBasis, Method, Protocol, ProtocolTable};
pub use sim::{InputQudit, SimulationTrace};
pub use spectrum::SchmidtSpectrum;
