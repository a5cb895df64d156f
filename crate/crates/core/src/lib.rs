//! Grover search with an oracle that marks each solution with its own
//! phase, simulated exactly in the reduced basis closed by the dynamics,
//! plus the semiempirical machinery built on top of it: Monte Carlo
//! filtering of phase pairs, superellipse and asymmetric-Hill fits, and
//! the robustness scan that finds phases keeping the success probability
//! high past the standard iteration count.

pub mod error;
pub mod fitting;
pub mod kinematics;
pub mod montecarlo;
pub mod robustness;
pub mod simulator;

pub use error::{Error, Result};
pub use kinematics::RegisterShape;
pub use simulator::PhaseAssignment;
