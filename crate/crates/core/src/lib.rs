//! OFDM waveform lab: plain CP-OFDM, frequency-domain N-continuous precoding
//! and a low-interference time-domain smoother, with channel models and
//! spectral/BER analysis.

// `!(x > 0.0)` style checks are used on purpose so that NaN is rejected too
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod channel;
pub mod error;
pub mod exec;
pub mod experiment;
pub mod nc_freq;
pub mod numerics;
pub mod ofdm;
pub mod params;
pub mod qam;
pub mod rng;
pub mod smoother;

pub use error::{Error, Result};
pub use numerics::{ComplexMatrix, C64};
pub use params::SystemParams;
