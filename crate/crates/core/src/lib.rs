pub mod error;
pub mod corpus;
pub mod exponent;
pub mod grid;
pub mod lab;
pub mod linalg;
pub mod operators;
pub mod profiles;
pub mod spaces;
pub mod stft;
pub mod torus;
pub mod weights;

pub use error::{Error, Result};
pub use exponent::Exponent;
pub use grid::{GridSpec, Point, SampledField, SupportBox};
