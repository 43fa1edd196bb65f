//! Polyhedral spaces, their singular curvature, and convex Steiner shells.

mod complex;
mod families;
mod hull;
mod io;
mod polytope;
mod quad;

pub use complex::{
    pair_measure, BoundCheck, Geometry, HyperedgeReport, MeasureAtom, PolyhedralComplex, PseudomanifoldReport, SingularMeasure,
    MIN_SIMPLEX_VOLUME,
};
pub use families::{builtin_complex, builtin_polytope, flat_torus, random_polytope, saddle, BUILTIN_COMPLEXES};
pub use hull::convex_hull;
pub use io::{parse_complex, parse_off, ComplexDoc, OffMesh};
pub use polytope::{
    convex_approximate, fibonacci_sphere, Approximation, ConvexBody, ConvexPolytope, Facet, PolytopeEdge, SteinerCoefficients, Weight,
};
