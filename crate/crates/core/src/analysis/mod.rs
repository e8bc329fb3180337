//! Spectral estimation, roll-off fitting, error counting and operation counts.

mod analytic;
mod ber;
mod complexity;
mod slope;
mod welch;

pub use analytic::{analytic_psd, analytic_psd_with, g_term, AnalyticPsdParams};
pub use ber::{ber, bit_errors};
pub use complexity::{complexity_counts, ComplexityReport, ComplexityScheme};
pub use slope::{slope_fit, two_sided_slope};
pub use welch::{to_db, welch_psd, welch_psd_with, Normalization, PsdEstimate, DB_FLOOR};
