//! Exact rational geometry: objects in canonical form and the incidence,
//! containment and intersection predicates built on them.

mod algebraic;
mod construct;
mod curve;
mod point;
mod prepared;
mod surface;

pub use algebraic::{sign_root, sign_root2, Surd};
pub use construct::{circle_through, solve3};
pub use curve::{
    incident, intersection_count, plane_intersection, Circle3, Curve, CurveKind, Intersection,
    Line3,
};
pub use point::Point3;
pub use prepared::IncidenceKernel;
pub use surface::{on_surface, Plane, Sphere, Surface};
