//! The universal affine vertex algebra of a Lie algebra with a form.

mod engine;
mod state;
pub mod suites;
mod text;

pub use engine::AffineVertexAlgebra;
pub use state::{Factor, Monomial, State};
pub use text::{format_state, parse_state};
