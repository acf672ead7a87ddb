pub mod algebra;
pub mod bundles;
pub mod catalog;
pub mod error;
pub mod index;
pub mod linalg;
pub mod spectral;
pub mod verify;

pub use error::{Error, Result};
