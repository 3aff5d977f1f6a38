//! Exact-arithmetic workbench for point–curve incidences in R³.
//!
//! Lines and circles with rational data, brute-force and partitioned
//! incidence counting, container (plane/sphere) clustering, closed-form
//! incidence bounds, extremal generators, and similar-triangle counting
//! through circle loci.

pub mod bounds;
pub mod containers;
pub mod error;
pub mod generators;
pub mod geom;
pub mod incidence;
pub mod partition;
pub mod rat;
pub mod real;
pub mod triangles;

pub use error::{Error, Result};
pub use geom::{Circle3, Curve, CurveKind, Line3, Plane, Point3, Sphere, Surface};
pub use incidence::{CurveSet, IncidenceReport, PointSet};
pub use rat::Rat;
pub use real::Real;
