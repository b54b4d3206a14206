//! Spectral dimension of the spheres `SU(n+1)/SU(n)`, `SO(2n+1)/SO(2n)` and
//! `SO(2n)/SO(2n-1)`, computed from growth graphs on the spherical spectrum
//! and the associated length operators.

pub mod error;
pub mod root_systems;
pub mod spectrum;
pub mod norms;
pub mod polynomial;
pub mod growth_graph;
pub mod tensor_branching;
pub mod length_operator;
pub mod lie_action;
pub mod verify;
pub mod cli;

pub use error::{Error, Result};
