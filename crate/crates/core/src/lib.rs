//! Exact bookkeeping for Seiberg–Witten basic classes on closed four-manifolds:
//! intersection lattices, SW polynomials, spin^u index arithmetic, the
//! vanishing relations coming from the SO(3)-monopole cobordism, and Witten's
//! formula for Donaldson invariants.
//!
//! Nothing here uses floating point.

pub mod algebra;
pub mod cobordism;
pub mod lattice;
pub mod manifold;
pub mod swseries;
