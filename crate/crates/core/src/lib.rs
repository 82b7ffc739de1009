//! Pluri-Lagrangian structure of the discrete KP equation on the root lattice
//! Q(A_N) and on Z^N.
//!
//! The numeric modules are generic over [`Real`] (`f32` or `f64`); the
//! aliases below fix the scalar to `f64`, which is what the verifier uses.

pub mod cell_complex;
pub mod dkp;
pub mod error;
pub mod io;
pub mod lagrangian;
pub mod scalar;
pub mod special;
pub mod verifier;

pub use cell_complex::{Cell, CellKind, Chain, LatticeKind, OrientedCell, Point, Sign};
pub use error::{Error, Result};
pub use scalar::Real;

pub type Field64 = dkp::Field<f64>;
pub type Field32 = dkp::Field<f32>;
pub type CornerQuantity64 = lagrangian::CornerQuantity<f64>;
pub type BranchReport64 = verifier::BranchReport;
