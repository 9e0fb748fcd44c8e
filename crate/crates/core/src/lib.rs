pub mod dendrite;
pub mod error;
pub mod geometry;
pub mod ifs;
pub mod registry;
pub mod scattered;
pub mod shark_teeth;
pub mod snake;

pub use error::{Error, Result};
