//! Exact computations around stated skein algebras at odd roots of unity:
//! balanced lattices of triangulated surfaces, quantum tori and their
//! irreducible representations, quantum-trace supports of simple closed
//! curves, SL2 representation varieties, and a kernel-detection pipeline
//! for mapping-class-group representations.

pub mod error;
pub mod curves;
pub mod detect;
pub mod exact;
pub mod qtorus;
pub mod repvar;
pub mod selftest;
pub mod surface;

pub use error::{Error, Result};
