//! Discrete circle complexes: an integrable matrix evolution on lattices,
//! its Plücker line-geometry avatar, Lie circle geometry with Möbius,
//! hyperbolic and Laguerre subgeometries, and lattice-scale constructions of
//! point-circle, geodesic-circle and line-circle complexes with their
//! incidence theorems.
//!
//! The crate is organised as a library; see the `examples/` directory for a
//! runnable tour of each capability and `src/bin` for the thin command-line
//! front end.

pub mod complexes;
pub mod hypercomplex;
pub mod liecircle;
pub mod linalg;
pub mod linegeom;
pub mod msystem;
pub mod scalar;

pub use hypercomplex::{cross_ratio, multi_ratio, Epsilon, GCNum, GC};
pub use linegeom::{HPoint, LinearComplex, PlueckerVec, ProjLine};
pub use msystem::MState;
