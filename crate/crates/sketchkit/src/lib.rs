pub mod error;
pub mod linalg;
pub mod rng;
pub mod sketch;

pub use error::{Result, SketchError};
