//! Concrete Banach-ring instances and towers.

mod complex;
mod descriptor;
pub mod linalg;
mod matrix;
pub mod random;
mod sampled;
mod sequence;
mod tower;

pub use complex::ComplexScalars;
pub use descriptor::{Descriptor, DynElem, DynRing};
pub use matrix::{MatrixAlgebra, MatrixNorm};
pub use random::random_almost_idempotent;
pub use sampled::SampledFunctionAlgebra;
pub use sequence::{SequenceAlgebra, SequenceMode};
pub use tower::{
    make_cantor_tower, make_uhf_tower, CantorTower, ConstantTower, Tower, TowerDescriptor,
    UhfTower,
};
