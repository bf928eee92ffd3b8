//! affinekit: the computable core of integral affine geometry for regular
//! Poisson manifolds of compact types.
//!
//! The crate provides exact integral affine group and lattice arithmetic,
//! developing maps and holonomy on combinatorial atlases, linear variation
//! of leafwise symplectic classes, period-lattice extraction from
//! integrable systems, Duistermaat-Heckman and integral affine measures
//! with Monte Carlo verification, and Cech cohomology of local systems on
//! finite nerves including Dixmier-Douady cocycle checks.

pub mod exact;

pub use exact::lattice::{ClosedSubgroup, Discreteness, IndexVerdict, Lattice};
pub use exact::{ExactError, ExactScalar, ExactVector, PeriodBasis, Symbol};
