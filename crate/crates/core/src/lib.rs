pub mod bridge;
pub mod cg;
pub mod error;
pub mod field;
pub mod lie;
pub mod linalg;
pub mod report;
pub mod vertex;

pub use error::{Error, Result};
pub use field::{Field, Scalar};
