//! Gray-coded square QAM.
//!
//! A label of `2b` bits is read big-endian: the first `b` bits select the
//! in-phase level, the last `b` bits the quadrature level. Per axis, level
//! index `j` (amplitude `S−1−2j`, descending) carries Gray label `j ^ (j>>1)`,
//! so for QPSK the bits `00` map to `(1+j)/√2`.

use crate::error::{Error, Result};
use crate::numerics::C64;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QamOrder {
    Qam4,
    Qam16,
    Qam64,
}

impl QamOrder {
    pub fn from_order(order: u32) -> Result<Self> {
        match order {
            4 => Ok(QamOrder::Qam4),
            16 => Ok(QamOrder::Qam16),
            64 => Ok(QamOrder::Qam64),
            other => Err(Error::invalid(format!("unsupported QAM order {other} (expected 4, 16 or 64)"))),
        }
    }

    pub fn order(self) -> u32 {
        match self {
            QamOrder::Qam4 => 4,
            QamOrder::Qam16 => 16,
            QamOrder::Qam64 => 64,
        }
    }

    pub fn bits_per_symbol(self) -> usize {
        self.order().trailing_zeros() as usize
    }

    fn bits_per_axis(self) -> usize {
        self.bits_per_symbol() / 2
    }

    /// Levels per axis.
    fn side(self) -> usize {
        1 << self.bits_per_axis()
    }

    /// `1/√E_avg` for the unnormalised odd-integer grid.
    fn scale(self) -> f64 {
        let s = self.side() as f64;
        (1.5 / (s * s - 1.0)).sqrt()
    }

    fn level(self, label: usize) -> f64 {
        let j = gray_decode(label);
        (self.side() - 1) as f64 - 2.0 * j as f64
    }

    fn decide_axis(self, v: f64) -> usize {
        let s = self.side();
        let t = ((s - 1) as f64 - v / self.scale()) / 2.0;
        let t = t.clamp(0.0, (s - 1) as f64);
        let lo = t.floor() as usize;
        let frac = t - lo as f64;
        let j = if frac > 0.5 {
            lo + 1
        } else if frac < 0.5 || lo + 1 >= s {
            lo
        } else {
            // exact midpoint: smaller Gray label wins
            let (a, b) = (gray_encode(lo), gray_encode(lo + 1));
            if a <= b {
                lo
            } else {
                lo + 1
            }
        };
        gray_encode(j.min(s - 1))
    }

    /// Constellation point for a `bits_per_symbol()`-bit label.
    pub fn point(self, label: usize) -> C64 {
        let b = self.bits_per_axis();
        let mask = (1 << b) - 1;
        C64::new(self.level(label >> b), self.level(label & mask)) * self.scale()
    }

    /// Hard minimum-distance decision returning the label.
    pub fn decide(self, sym: C64) -> usize {
        (self.decide_axis(sym.re) << self.bits_per_axis()) | self.decide_axis(sym.im)
    }

    pub fn constellation(self) -> Vec<C64> {
        (0..self.order() as usize).map(|l| self.point(l)).collect()
    }
}

fn gray_encode(j: usize) -> usize {
    j ^ (j >> 1)
}

fn gray_decode(mut g: usize) -> usize {
    let mut j = g;
    while g > 1 {
        g >>= 1;
        j ^= g;
    }
    j
}

/// Maps bits to symbols, `k` symbols per OFDM symbol.
pub fn qam_map(bits: &[u8], order: QamOrder, k: usize) -> Result<Vec<Vec<C64>>> {
    let bps = order.bits_per_symbol();
    if k == 0 || !bits.len().is_multiple_of(bps * k) {
        return Err(Error::invalid(format!(
            "bit count {} not a multiple of {bps} bits x {k} subcarriers",
            bits.len()
        )));
    }
    Ok(bits
        .chunks(bps * k)
        .map(|frame| {
            frame
                .chunks(bps)
                .map(|label_bits| order.point(label_bits.iter().fold(0, |acc, &b| (acc << 1) | (b as usize & 1))))
                .collect()
        })
        .collect())
}

/// Hard-decision demapper, inverse of [`qam_map`] in the noiseless case.
pub fn qam_demap(symbols: &[Vec<C64>], order: QamOrder) -> Vec<u8> {
    let bps = order.bits_per_symbol();
    let mut bits = Vec::with_capacity(symbols.iter().map(Vec::len).sum::<usize>() * bps);
    for &s in symbols.iter().flatten() {
        let label = order.decide(s);
        bits.extend((0..bps).rev().map(|i| ((label >> i) & 1) as u8));
    }
    bits
}
