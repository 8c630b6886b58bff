//! Sequence-space quasi-norms, Peetre maximal sequences and discrete Hardy sums.

mod hardy;
mod norm;
mod star;

pub use hardy::{hardy_bound, hardy_sums, read_sequence, HardyReport};
pub use norm::{seq_norm, seq_norm_unchecked};
pub use star::{lambda_equiv_report, lambda_star, star_exponent, EquivReport, MAX_STAR_POSITIONS, STAR_DROP_TOL};
