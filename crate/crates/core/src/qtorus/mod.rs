//! Quantum tori over a skew lattice and their irreducible representations.

pub mod element;
pub mod irrep;

pub use element::{chebyshev_apply, chebyshev_coefficients, frobenius, is_central, QuantumTorus, TorusElement};
pub use irrep::{build_irrep, CentralCharacter, CycloMatrix, IrrepCheck, TorusIrrep};
