//! Exact computations for K-stability of Fano threefolds: rational
//! piecewise polynomials, lattice discriminant forms, Zariski chambers,
//! S- and β-invariants, and toric barycenter checks.

#![allow(clippy::needless_range_loop)]

pub mod exact;
pub mod intersect;
pub mod k3cat;
pub mod kstab;
pub mod lattice;
pub mod model_file;
pub mod toric;
pub mod zariski;

pub use exact::rational::Rational;
pub use exact::{ExactError, PiecewisePolynomial, Polynomial};
pub use intersect::{AffineClass, Chamber, IntersectError, NamedClass, SurfaceModel, ThreefoldModel};
pub use kstab::{Classification, DivisorialVerdict, FlagReport, KstabError};
pub use lattice::{DiscriminantGroup, GramLattice, LatticeError};
pub use model_file::{ModelFile, ModelFileError};
pub use toric::{LatticePolytope, ToricError};
pub use zariski::{ZariskiError, ZariskiResult};
