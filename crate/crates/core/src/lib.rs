//! Exact combinatorics of stable ribbon graphs and the cell complex of metric ribbon graphs,
//! with cellwise differential forms and exact integration of the tautological curvature forms.

pub mod cells;
pub mod enumerate;
pub mod intersect;
pub mod linalg;
pub mod model0;
pub mod perm;
pub mod permgraph;
pub mod polyform;
pub mod polytope;
pub mod random;
pub mod rational;
pub mod stable;
pub mod suite;
