//! Littlewood-Paley analysis on grids: filter banks, Herz-type
//! Triebel-Lizorkin norms, the φ-transform pair, local means and power weights.

mod bank;
mod bump;
mod fj;
mod fourier;
mod local_means;
mod norms;
mod transform;
mod weighted;

pub use bank::{build_filter_bank, max_bank_level, FilterBank};
pub use bump::{plateau, STANDARD_STEEPNESS};
pub use fj::{band_lower_bound, big_profile, build_fj_system, calderon_sum, small_profile, FJSystem, FJ_STEEPNESS};
pub use fourier::{FourierGrid, Spectrum};
pub use local_means::{local_mean_norm, LocalMeanKernel};
pub use norms::{ktl_norm, lbeta_combine, tl_norm};
pub use transform::{inverse_phi_transform, max_transform_level, phi_transform, roundtrip_error};
pub use weighted::{origin_cell_weight, weighted_tl_norm, WeightedReport};
