//! Triangulated marked surfaces and the lattices attached to them.

pub mod lattices;
pub mod triangulation;

pub use lattices::{
    balanced_lattice, central_sublattice, definitional_kernel, is_balanced, k_boundary, pi_degree,
    pi_degree_from_index, refined_lattice, wp_form, wp_pair, BalancedLattice, CentralSublattice,
    PiDegreeReport, RefinedLattice, RefinedReport,
};
pub use triangulation::{build_sigma_g_star, standard_triangulation, Slot, Triangulation, TriangulationJson};
