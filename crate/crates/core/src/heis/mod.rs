//! Discrete Heisenberg groups, their induced representations and characters,
//! theta series and lattice theta functions.

mod character;
mod group;
mod intlat;
mod lattice;
mod polar;
mod rep;
mod trace;

pub use character::{equivalence_test, stabilizer, Character, Equivalence, Stabilizer};
pub use group::{AbelianGroup, GroupElement, HeisenbergSpec};
pub use lattice::{asymptotic_check, functional_equation_check, lattice_theta, AsymptoticReport, Lattice, ThetaValue, MAX_LATTICE_TERMS};
pub use polar::{Polar, PolarSum};
pub use rep::{finite_homomorphism_check, finite_rep_trace, FiniteTrace, MonomialMatrix, RepVector, Representation};
pub use trace::{extended_trace, limit_check, theta_series, LimitReport, LimitSample, TraceValue, MAX_RANK, MAX_TERMS, TRACE_EPSILON};
