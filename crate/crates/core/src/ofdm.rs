//! Plain CP-OFDM synthesis and the common one-tap receiver.

use crate::error::{Error, Result};
use crate::numerics::{dft_in_place, idft_in_place, C64, ZERO};
use crate::params::SystemParams;

/// Frequency-domain data of one OFDM symbol, one entry per subcarrier.
pub type SymbolVector = Vec<C64>;

/// One CP-prefixed symbol. Index 0 is `m = −M_cp`.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeSymbol {
    pub samples: Vec<C64>,
}

impl TimeSymbol {
    pub fn zeros(p: &SystemParams) -> Self {
        TimeSymbol {
            samples: vec![ZERO; p.symbol_len()],
        }
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    /// Sample at signed index `m ∈ {−M_cp, …, M−1}`.
    pub fn at(&self, m: i64, p: &SystemParams) -> C64 {
        self.samples[(m + p.m_cp as i64) as usize]
    }

    /// The `M` samples after the cyclic prefix.
    pub fn core<'a>(&'a self, p: &SystemParams) -> &'a [C64] {
        &self.samples[p.m_cp..]
    }

    pub fn energy(&self) -> f64 {
        self.samples.iter().map(|s| s.norm_sqr()).sum()
    }
}

/// Concatenates symbols into one sample stream.
pub fn concat(symbols: &[TimeSymbol]) -> Vec<C64> {
    symbols.iter().flat_map(|s| s.samples.iter().copied()).collect()
}

/// `y(m) = (1/M) Σ_r x_r e^{j2π k_r m / M}` for `m ∈ {−M_cp, …, M−1}`.
pub fn modulate(x: &[C64], p: &SystemParams) -> Result<TimeSymbol> {
    if x.len() != p.k() {
        return Err(Error::invalid(format!("symbol has {} entries, expected K={}", x.len(), p.k())));
    }
    let mut grid = vec![ZERO; p.m];
    for (&k, &v) in p.subcarriers().iter().zip(x) {
        grid[p.bin(k)] = v;
    }
    idft_in_place(&mut grid)?;
    let mut samples = Vec::with_capacity(p.symbol_len());
    samples.extend_from_slice(&grid[p.m - p.m_cp..]);
    samples.extend_from_slice(&grid);
    Ok(TimeSymbol { samples })
}

/// Strips the CP, transforms and equalises the occupied bins by `channel_freq`.
pub fn demodulate(rx: &TimeSymbol, channel_freq: &[C64], p: &SystemParams) -> Result<Vec<C64>> {
    if rx.len() != p.symbol_len() {
        return Err(Error::invalid(format!("received symbol has {} samples, expected {}", rx.len(), p.symbol_len())));
    }
    if channel_freq.len() != p.m {
        return Err(Error::invalid(format!("channel response has {} bins, expected M={}", channel_freq.len(), p.m)));
    }
    let mut grid = rx.core(p).to_vec();
    dft_in_place(&mut grid)?;
    p.subcarriers()
        .iter()
        .map(|&k| {
            let bin = p.bin(k);
            let h = channel_freq[bin];
            if h.norm() < 1e-12 {
                Err(Error::DeepFade {
                    bin,
                    magnitude: h.norm(),
                })
            } else {
                Ok(grid[bin] / h)
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::max_abs_diff;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn small() -> SystemParams {
        SystemParams::new(16, 64, 8, 1, 8, 15e3).unwrap()
    }

    fn random_symbol(rng: &mut ChaCha8Rng, k: usize) -> Vec<C64> {
        (0..k)
            .map(|_| C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
            .collect()
    }

    #[test]
    fn zero_symbol_modulates_to_zero() {
        let p = small();
        let y = modulate(&vec![ZERO; 16], &p).unwrap();
        assert_eq!(y, TimeSymbol::zeros(&p));
    }

    #[test]
    fn single_tone() {
        let p = SystemParams::with_subcarriers(vec![3], 64, 8, 0, 4, 15e3).unwrap();
        let y = modulate(&[C64::new(1.0, 0.0)], &p).unwrap();
        for m in -8i64..64 {
            let want = C64::from_polar(1.0 / 64.0, 2.0 * std::f64::consts::PI * 3.0 * m as f64 / 64.0);
            assert!((y.at(m, &p) - want).norm() < 1e-15);
        }
        for m in -8i64..0 {
            assert_eq!(y.at(m, &p), y.at(m + 64, &p));
        }
    }

    #[test]
    fn cyclic_prefix_property() {
        let p = small();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let y = modulate(&random_symbol(&mut rng, 16), &p).unwrap();
        for m in -(p.m_cp as i64)..0 {
            assert!((y.at(m, &p) - y.at(m + p.m as i64, &p)).norm() < 1e-12);
        }
    }

    #[test]
    fn identity_and_flat_channel() {
        let p = small();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let x = random_symbol(&mut rng, 16);
        let y = modulate(&x, &p).unwrap();
        let back = demodulate(&y, &vec![C64::new(1.0, 0.0); p.m], &p).unwrap();
        assert!(max_abs_diff(&back, &x) < 1e-10);

        let g = C64::from_polar(0.5, std::f64::consts::FRAC_PI_4);
        let scaled = TimeSymbol {
            samples: y.samples.iter().map(|s| s * g).collect(),
        };
        let back = demodulate(&scaled, &vec![g; p.m], &p).unwrap();
        assert!(max_abs_diff(&back, &x) < 1e-10);
    }

    #[test]
    fn two_tap_channel_absorbed_by_cp() {
        let p = small();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let x = random_symbol(&mut rng, 16);
        let y = modulate(&x, &p).unwrap();
        let taps = [C64::new(0.8, 0.1), C64::new(0.0, 0.0), C64::new(-0.3, 0.4)];
        // naive linear convolution truncated to the symbol
        let rx: Vec<C64> = (0..y.len())
            .map(|n| (0..taps.len()).filter(|&d| d <= n).map(|d| taps[d] * y.samples[n - d]).sum())
            .collect();
        let mut padded = vec![ZERO; p.m];
        padded[..taps.len()].copy_from_slice(&taps);
        let h = crate::numerics::naive_dft(&padded).unwrap();
        let back = demodulate(&TimeSymbol { samples: rx }, &h, &p).unwrap();
        assert!(max_abs_diff(&back, &x) < 1e-9);
    }

    #[test]
    fn deep_fade_is_reported() {
        let p = small();
        let y = TimeSymbol::zeros(&p);
        let mut h = vec![C64::new(1.0, 0.0); p.m];
        h[p.bin(-2)] = ZERO;
        assert!(matches!(demodulate(&y, &h, &p), Err(Error::DeepFade { .. })));
    }
}
