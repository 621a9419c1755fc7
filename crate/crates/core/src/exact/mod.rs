//! Exact scalars and integer lattice algorithms.

pub mod cyclotomic;
pub mod dual;
pub mod intmat;
pub mod lattice;

pub use cyclotomic::{rat, Cyclotomic};
pub use dual::DualNumber;
pub use intmat::{hermite_rows, smith_normal_form, IntMatrix, Smith};
pub use lattice::{
    form_kernel_mod, kernel_mod, skew_normal_form, sublattice_index, Index, Lattice, SkewLattice,
};
