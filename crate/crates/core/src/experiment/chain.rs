//! Transmit chains shared by the experiments.

use rand::Rng;

use crate::error::Result;
use crate::exec::{map_indexed, Exec};
use crate::nc_freq::{build_precoder, precode_stream, PrecoderContext};
use crate::numerics::C64;
use crate::ofdm::{modulate, TimeSymbol};
use crate::params::SystemParams;
use crate::qam::QamOrder;
use crate::rng::{rng_for, Stream};
use crate::smoother::{apply_smoother_with, build_smoother_aligned, BasisAlignment, SmootherContext, WindowKind};

use super::config::Scheme;

/// Random bits and their QAM symbols for one frame of `count` OFDM symbols.
#[derive(Debug, Clone)]
pub struct Frame {
    pub bits: Vec<u8>,
    pub symbols: Vec<Vec<C64>>,
}

/// Draws `count` symbols; symbol `j` uses the generator for index `first + j`,
/// so frames can be drawn independently and in any order.
pub fn random_frame(k: usize, count: usize, qam: QamOrder, seed: u64, first: u64) -> Frame {
    let bps = qam.bits_per_symbol();
    let mut bits = Vec::with_capacity(count * k * bps);
    let mut symbols = Vec::with_capacity(count);
    for j in 0..count {
        let mut rng = rng_for(seed, Stream::Data, first + j as u64);
        let sym = (0..k)
            .map(|_| {
                let label = rng.random_range(0..qam.order() as usize);
                bits.extend((0..bps).rev().map(|b| ((label >> b) & 1) as u8));
                qam.point(label)
            })
            .collect();
        symbols.push(sym);
    }
    Frame { bits, symbols }
}

/// One of the three transmitters with its precomputed context.
#[derive(Debug, Clone)]
pub enum Transmitter {
    Ofdm(SystemParams),
    NcOfdm(SystemParams, PrecoderContext),
    LowInterference(SmootherContext),
}

/// Output of a transmitter for one frame.
#[derive(Debug, Clone)]
pub struct TxFrame {
    /// Frequency-domain symbols actually modulated (precoded for NC-OFDM).
    pub modulated: Vec<Vec<C64>>,
    /// Time symbols; one extra trailing symbol for the smoothed scheme.
    pub symbols: Vec<TimeSymbol>,
}

impl Transmitter {
    pub fn new(scheme: Scheme, p: &SystemParams, window: WindowKind, alignment: BasisAlignment) -> Result<Self> {
        Ok(match scheme {
            Scheme::Ofdm => Transmitter::Ofdm(p.clone()),
            Scheme::NcOfdm => Transmitter::NcOfdm(p.clone(), build_precoder(p)?),
            Scheme::LowInterference => Transmitter::LowInterference(build_smoother_aligned(p, window, alignment)?),
        })
    }

    pub fn params(&self) -> &SystemParams {
        match self {
            Transmitter::Ofdm(p) | Transmitter::NcOfdm(p, _) => p,
            Transmitter::LowInterference(ctx) => &ctx.params,
        }
    }

    pub fn transmit(&self, exec: Exec, xs: &[Vec<C64>]) -> Result<TxFrame> {
        let p = self.params();
        let modulated = match self {
            Transmitter::NcOfdm(_, ctx) if !xs.is_empty() => precode_stream(xs, ctx)?,
            _ => xs.to_vec(),
        };
        let ys: Vec<TimeSymbol> = map_indexed(exec, modulated.len(), |i| modulate(&modulated[i], p))
            .into_iter()
            .collect::<Result<_>>()?;
        let symbols = match self {
            Transmitter::LowInterference(ctx) => apply_smoother_with(exec, &ys, &modulated, ctx)?,
            _ => ys,
        };
        Ok(TxFrame { modulated, symbols })
    }
}
