//! Simulator for quantum Zeno engines and heat pumps: thermodynamic Otto-type
//! cycles on a 1D harmonic oscillator in which the adiabatic strokes are
//! replaced by *Zeno strokes* — trap-frequency ramps during which the
//! instantaneous target eigenstate is projectively measured at a fixed rate,
//! freezing the level populations.
//!
//! Everything is dimensionless: distances in units of the harmonic oscillator
//! length at the reference frequency, energies in units of `2πħf`, and time in
//! units of `1/f` (or `1/ω`, see [`units::UnitConvention`]). In these units the
//! Hamiltonian during a ramp is `H(t) = p²/2 + (f(t)·x)²/2` with level energies
//! `Eₙ(f) = f(n + 1/2)`.
//!
//! The crate is organised in layers:
//!
//! * [`grid`], [`state`], [`eigen`], [`ops`] — spatial grid, wavefunctions,
//!   oscillator eigenstates and the operator algebra (ladder, projector,
//!   energy);
//! * [`propagate`] — second-order split-step propagation under a
//!   [`protocol::TrapProtocol`], plus an independent eigenbasis integrator in
//!   [`oracle`] used for cross-validation;
//! * [`stroke`] — a single Zeno stroke (ramp + M projective measurements);
//! * [`cycle`] — heat-pump and engine cycles with heat/work accounting;
//! * [`predict`] — closed-form leakage and survival estimates;
//! * [`sweep`] — parameter sweeps over (K, T, M) grids.
//!
//! A narrative guide with runnable examples lives in the `book/` directory of
//! the repository.

pub mod cycle;
pub mod eigen;
mod error;
pub mod grid;
pub mod ops;
pub mod oracle;
pub mod predict;
pub mod propagate;
pub mod protocol;
mod spectral;
pub mod state;
pub mod stroke;
pub mod sweep;
pub mod units;

pub use error::{Error, Result};
pub use grid::Grid;
pub use protocol::TrapProtocol;
pub use state::Wavefunction;
pub use units::UnitConvention;
