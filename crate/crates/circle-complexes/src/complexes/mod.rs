//! Lattice-scale constructions: fundamental point-circle complexes and their
//! hyperbolic and Laguerre counterparts, built from one-dimensional Cauchy
//! data by the nine-point evolution; orientation assignment by correlation;
//! hypercube extension; and the incidence-theorem machinery that underwrites
//! all of it.

pub mod assembly;
pub mod build;
pub mod gcplane;
pub mod lattice;
pub mod ninepoint;
pub mod theorems;

pub use assembly::{run_assembly, AssemblyData, AssemblyOutcome};
pub use build::{
    build_point_circle_complex, build_subgeometry_complex, clifford_extend, orient_complex,
    CauchyData1D,
};
pub use gcplane::{GCircle, GCPlaneError};
pub use lattice::{ComplexReport, Flag, LatticeComplex, Site};
pub use ninepoint::{nine_point_evolve, NinePointError};
pub use theorems::{
    build_miquel_figure, clifford_c4_residual, verify_miquel, verify_rhombic_dodecahedron,
};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ComplexError {
    #[error("concurrency failure at {site:?}: residual {residual}")]
    ConcurrencyFailure { site: [i64; 3], residual: f64 },
    #[error("degenerate triangle at {0:?}")]
    DegenerateTriangle([i64; 3]),
    #[error("Cauchy data is missing site {0:?}")]
    MissingData([i64; 3]),
    #[error("correlation conflict at cube {site:?}: mismatch {mismatch}")]
    CorrelationConflict { site: [i64; 3], mismatch: f64 },
    #[error("hypercube extension failed at {site:?}: residual {residual}")]
    CliffordFailure { site: [i64; 4], residual: f64 },
    #[error("seed circle must pass through the chosen base point")]
    BadSeedCircle,
    #[error("horizontal line in Laguerre data")]
    HorizontalLine,
    #[error(transparent)]
    NinePoint(#[from] NinePointError),
    #[error(transparent)]
    Plane(#[from] GCPlaneError),
    #[error(transparent)]
    Theorem(#[from] theorems::TheoremError),
    #[error(transparent)]
    Assembly(#[from] assembly::AssemblyError),
    #[error(transparent)]
    Lie(#[from] crate::liecircle::LieError),
}
