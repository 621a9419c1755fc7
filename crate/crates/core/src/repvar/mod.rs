//! The classical layer: SL2 representations of π_1(Σ_g,1), moment map,
//! cells and leaves, Poisson brackets, and finite mapping-class orbits.

pub mod orbits;
pub mod poisson;
pub mod sl2;

pub use orbits::{
    binary_tetrahedral_generators, enumerate_hom_to_finite, group_closure, orbit_closure, quaternion_generators,
    rep_dimension, reduced_cell_example, rep_dimension_formula, torus_twists, OrbitData, OrbitSummary,
};
pub use poisson::{check_jacobi, poisson_bracket, verify_r_matrix_expansion, JacobiReport, Poly, RMatrixReport, Variant};
pub use sl2::{
    classify_cell, classify_double_leaf, classify_sts_leaf, moment_map, toric_action, Cell, RepJson, SL2Mat, SL2Rep,
    StsLeaf,
};
