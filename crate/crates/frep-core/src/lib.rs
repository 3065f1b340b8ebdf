pub mod error;
pub mod eval;
pub mod finset;
pub mod homology;
pub mod linalg;
pub mod presentation;
pub mod qf;
pub mod resolve;
pub mod squish;
pub mod symfun;

pub use error::{Error, Result};
