//! Adelic theory of `P^1` over a finite field at finite level.

mod fourier;
mod linalg;
mod place;
mod rr;
mod window;
mod zeta;

pub use fourier::{
    finite_fourier_poisson, finite_fourier_poisson_on, plancherel_rr_check, Cyclotomic, FourierWindow, SubgroupSpec,
    MAX_ENUMERATION,
};
pub use place::{DivisorOnCurve, Place};
pub use rr::{riemann_roch_basis, rr_cohomology, Cohomology, MAX_WIDENING};
pub use window::{canonical_divisor, divisor_max, AdeleWindow, FiniteLevelAdele};
pub use zeta::{closed_point_counts, poisson_residue_check, zeta_series, ZetaSeries};
