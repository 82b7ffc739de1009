//! Integer combinatorics of Q(A_N) and Z^N: points, oriented cells, chains,
//! flowers and their decomposition into 4D corners.

mod cell;
mod chain;
mod flower;
mod point;
pub mod projection;

pub use cell::{Cell, CellKind, LatticeKind, OrientedCell, Sign};
pub use chain::Chain;
pub use flower::{
    check_interior, corner_chain_sum, cubic_flower, decompose_flower, flower, root_flower, Corner,
    FlowerDecomposition,
};
pub use point::{CubicLatticePoint, Point, RootLatticePoint};

/// Largest lattice rank accepted by the verifier and CLI unless overridden.
pub const DEFAULT_MAX_RANK: usize = 10;
