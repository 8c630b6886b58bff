//! Numerical tools for homogeneous Herz spaces and the Herz-type
//! Triebel-Lizorkin scale: dyadic sequence norms, grid Herz norms,
//! Littlewood-Paley machinery and embedding experiments.

pub mod container;
pub mod dyadic;
pub mod embed;
pub mod error;
pub mod grid;
pub mod herz;
pub mod lp;
pub mod numeric;
pub mod params;
pub mod seq;

pub use dyadic::{AnnulusIndex, CoeffField, DyadicIndex, TruncationWindow};
pub use error::{HerzError, Result};
pub use params::{Exponent, HerzParams, SmoothParams, StarParams};
