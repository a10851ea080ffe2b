//! Numerics for large gaps between critical-line zeros of even primitive
//! Dirichlet L-functions.

pub mod characters;
pub mod cli;
pub mod error;
pub mod kappacoeffs;
pub mod lfunc;
pub mod localconst;
pub mod mp;
pub mod series;
pub mod shiftframe;
pub mod weights;
pub mod zeros;

pub use error::{Error, Result};
