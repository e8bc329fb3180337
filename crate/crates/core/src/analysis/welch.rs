use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::exec::{map_chunks, Exec};
use crate::numerics::{dft_in_place, C64};

/// dB value reported for zero power.
pub const DB_FLOOR: f64 = -300.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Normalization {
    /// Power per DFT bin; white noise of variance σ² reads σ².
    Absolute,
    /// Scaled so the largest value is 1 (0 dB).
    Peak,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PsdEstimate {
    /// Hz, strictly increasing.
    pub freqs: Vec<f64>,
    /// Linear, nonnegative.
    pub power: Vec<f64>,
    pub normalization: Normalization,
    pub seg_len: usize,
    pub overlap: usize,
    pub window: &'static str,
}

impl PsdEstimate {
    pub fn len(&self) -> usize {
        self.freqs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.freqs.is_empty()
    }

    pub fn peak(&self) -> f64 {
        self.power.iter().copied().fold(0.0, f64::max)
    }

    /// Copy scaled to a 0 dB peak. An all-zero estimate stays zero.
    pub fn peak_normalized(&self) -> PsdEstimate {
        let peak = self.peak();
        let scale = if peak > 0.0 { 1.0 / peak } else { 1.0 };
        PsdEstimate {
            power: self.power.iter().map(|p| p * scale).collect(),
            normalization: Normalization::Peak,
            ..self.clone()
        }
    }

    pub fn db(&self) -> Vec<f64> {
        self.power.iter().map(|&p| to_db(p)).collect()
    }

    /// Index of the grid point closest to `f`.
    pub fn nearest(&self, f: f64) -> usize {
        let i = self.freqs.partition_point(|&x| x < f);
        match i {
            0 => 0,
            i if i == self.freqs.len() => i - 1,
            i if (self.freqs[i] - f).abs() < (f - self.freqs[i - 1]).abs() => i,
            i => i - 1,
        }
    }

    /// Points with `lo <= f <= hi`.
    pub fn select(&self, lo: f64, hi: f64) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.freqs
            .iter()
            .zip(&self.power)
            .filter(move |(f, _)| **f >= lo && **f <= hi)
            .map(|(f, p)| (*f, *p))
    }
}

pub fn to_db(p: f64) -> f64 {
    if p > 0.0 {
        (10.0 * p.log10()).max(DB_FLOOR)
    } else {
        DB_FLOOR
    }
}

/// Periodic Hann window of length `n`.
fn hann(n: usize) -> Vec<f64> {
    (0..n).map(|i| 0.5 - 0.5 * (2.0 * PI * i as f64 / n as f64).cos()).collect()
}

/// Averaged modified periodogram with a Hann window and hop `seg_len − overlap`.
///
/// The output grid is two-sided and centred (`−fs/2 … fs/2 − fs/seg_len`), in
/// absolute per-bin normalisation.
pub fn welch_psd(signal: &[C64], seg_len: usize, overlap: usize, sample_rate: f64) -> Result<PsdEstimate> {
    welch_psd_with(Exec::default(), signal, seg_len, overlap, sample_rate)
}

pub fn welch_psd_with(
    exec: Exec,
    signal: &[C64],
    seg_len: usize,
    overlap: usize,
    sample_rate: f64,
) -> Result<PsdEstimate> {
    if seg_len == 0 || overlap >= seg_len {
        return Err(Error::invalid(format!("need 0 <= overlap < seg_len, got {overlap} and {seg_len}")));
    }
    if signal.len() < seg_len {
        return Err(Error::invalid(format!(
            "signal of {} samples is shorter than one {seg_len}-sample segment",
            signal.len()
        )));
    }
    let hop = seg_len - overlap;
    let segments = (signal.len() - seg_len) / hop + 1;
    let window = hann(seg_len);
    let win_energy: f64 = window.iter().map(|w| w * w).sum();

    // fixed chunking keeps the summation order independent of the pool size
    let partials = map_chunks(exec, segments, 16, |range| {
        let mut acc = vec![0.0; seg_len];
        let mut buf = vec![C64::new(0.0, 0.0); seg_len];
        for s in range {
            let start = s * hop;
            for ((b, x), w) in buf.iter_mut().zip(&signal[start..start + seg_len]).zip(&window) {
                *b = x * w;
            }
            dft_in_place(&mut buf).expect("nonempty segment");
            acc.iter_mut().zip(&buf).for_each(|(a, b)| *a += b.norm_sqr());
        }
        acc
    });
    let mut total = vec![0.0; seg_len];
    for part in partials {
        total.iter_mut().zip(part).for_each(|(t, p)| *t += p);
    }
    let scale = 1.0 / (win_energy * segments as f64);
    let half = seg_len / 2;
    let (freqs, power) = (0..seg_len)
        .map(|i| {
            let bin = (i + seg_len - half) % seg_len;
            let f = (i as f64 - half as f64) * sample_rate / seg_len as f64;
            (f, total[bin] * scale)
        })
        .unzip();
    Ok(PsdEstimate {
        freqs,
        power,
        normalization: Normalization::Absolute,
        seg_len,
        overlap,
        window: "hann",
    })
}
