//! Simplicial complexes, lower-star sublevel persistence over `Z/2`,
//! bottleneck distances between diagrams, and Betti and Euler curves.

mod complex;
mod curves;
mod diagram;
mod reduction;

pub use complex::{build_rips, build_rips_with, SimplicialComplex, MAX_RIPS_DIM, MAX_SIMPLICES};
pub use curves::{betti_curve, euler_curve, lp_distance, total_persistence, StepFunction};
pub use diagram::{bottleneck_distance, graded_bottleneck, GradedDiagram, PersistencePair};
pub use reduction::{compute_persistence, lower_star, Filtration};
