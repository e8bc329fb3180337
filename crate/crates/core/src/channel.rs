//! Tapped-delay-line Rayleigh channel and AWGN.

use std::path::Path;

use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::numerics::{dft_in_place, C64, ZERO};
use crate::params::SystemParams;
use crate::rng::{rng_for, Stream};

const EVA_TABLE: &str = include_str!("../data/eva.txt");

/// Power delay profile with powers normalised to unit sum.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelProfile {
    /// Seconds, nonnegative and strictly increasing.
    pub tap_delays: Vec<f64>,
    /// Linear power per tap.
    pub tap_powers: Vec<f64>,
}

impl ChannelProfile {
    /// Builds a profile from delays in seconds and linear powers, normalising
    /// the powers.
    pub fn new(tap_delays: Vec<f64>, tap_powers: Vec<f64>) -> Result<Self> {
        if tap_delays.is_empty() || tap_delays.len() != tap_powers.len() {
            return Err(Error::invalid(format!(
                "profile needs matching nonempty delay/power lists, got {} and {}",
                tap_delays.len(),
                tap_powers.len()
            )));
        }
        if tap_delays.iter().any(|d| !d.is_finite() || *d < 0.0) {
            return Err(Error::invalid("tap delays must be finite and nonnegative"));
        }
        if tap_delays.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::invalid("tap delays must be strictly increasing"));
        }
        if tap_powers.iter().any(|p| !p.is_finite() || *p < 0.0) {
            return Err(Error::invalid("tap powers must be finite and nonnegative"));
        }
        let total: f64 = tap_powers.iter().sum();
        if total <= 0.0 {
            return Err(Error::invalid("profile has zero total power"));
        }
        Ok(ChannelProfile {
            tap_delays,
            tap_powers: tap_powers.iter().map(|p| p / total).collect(),
        })
    }

    /// A single unit-power tap at zero delay.
    pub fn flat() -> Self {
        ChannelProfile {
            tap_delays: vec![0.0],
            tap_powers: vec![1.0],
        }
    }

    pub fn num_taps(&self) -> usize {
        self.tap_delays.len()
    }

    /// Parses `delay_ns power_db` lines; `#` starts a comment.
    pub fn parse(text: &str) -> Result<Self> {
        let mut delays = Vec::new();
        let mut powers = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split_whitespace().collect();
            let parsed = match fields.as_slice() {
                [d, p] => d.parse::<f64>().ok().zip(p.parse::<f64>().ok()),
                _ => None,
            };
            let Some((delay_ns, power_db)) = parsed else {
                return Err(Error::config(format!(
                    "channel profile line {}: expected `delay_ns power_db`, got `{raw}`",
                    lineno + 1
                )));
            };
            delays.push(delay_ns * 1e-9);
            powers.push(10f64.powf(power_db / 10.0));
        }
        Self::new(delays, powers).map_err(|e| Error::config(format!("channel profile: {e}")))
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    /// Largest delay in samples after rounding at `sample_rate`.
    pub fn max_delay_samples(&self, sample_rate: f64) -> usize {
        self.tap_delays
            .iter()
            .map(|d| (d * sample_rate).round() as usize)
            .max()
            .unwrap_or(0)
    }
}

/// The LTE Extended Vehicular A profile (9 taps, 2.51 µs spread).
pub fn eva_profile() -> ChannelProfile {
    ChannelProfile::parse(EVA_TABLE).expect("bundled EVA table is valid")
}

/// One block-fading draw of a profile.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelRealization {
    /// Complex gains on a sample-spaced delay line, index = delay in samples.
    pub taps: Vec<C64>,
    /// DFT of the zero-padded taps, length `M`.
    pub freq_response: Vec<C64>,
    /// Set when the delay line is longer than the cyclic prefix.
    pub exceeds_cp: bool,
}

impl ChannelRealization {
    /// Deterministic realization from explicit taps.
    pub fn from_taps(taps: Vec<C64>, p: &SystemParams) -> Result<Self> {
        if taps.is_empty() || taps.len() > p.m {
            return Err(Error::invalid(format!("need 1..=M taps, got {}", taps.len())));
        }
        let mut freq_response = vec![ZERO; p.m];
        freq_response[..taps.len()].copy_from_slice(&taps);
        dft_in_place(&mut freq_response)?;
        Ok(ChannelRealization {
            exceeds_cp: taps.len() - 1 > p.m_cp,
            taps,
            freq_response,
        })
    }

    pub fn identity(p: &SystemParams) -> Self {
        Self::from_taps(vec![C64::new(1.0, 0.0)], p).expect("one tap fits")
    }
}

/// Draws circular complex Gaussian tap gains with the profile's powers.
/// Delays are rounded to the sample grid of `p.sample_rate()`; taps landing on
/// the same sample merge and their powers add.
pub fn realize(profile: &ChannelProfile, p: &SystemParams, seed: u64) -> Result<ChannelRealization> {
    realize_with(profile, p, &mut rng_for(seed, Stream::Channel, 0))
}

pub fn realize_with<R: Rng + ?Sized>(
    profile: &ChannelProfile,
    p: &SystemParams,
    rng: &mut R,
) -> Result<ChannelRealization> {
    let fs = p.sample_rate();
    let len = profile.max_delay_samples(fs) + 1;
    if len > p.m {
        return Err(Error::invalid(format!("delay spread of {len} samples exceeds M={}", p.m)));
    }
    let mut power = vec![0.0; len];
    for (d, pw) in profile.tap_delays.iter().zip(&profile.tap_powers) {
        power[(d * fs).round() as usize] += pw;
    }
    let taps = power
        .iter()
        .map(|&pw| if pw > 0.0 { complex_gaussian(rng, pw) } else { ZERO })
        .collect();
    ChannelRealization::from_taps(taps, p)
}

pub(crate) fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R, variance: f64) -> C64 {
    let s = (variance / 2.0).sqrt();
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    C64::new(re * s, im * s)
}

/// Linear convolution with the delay line, truncated to the input length.
pub fn apply_channel(signal: &[C64], ch: &ChannelRealization) -> Vec<C64> {
    let mut out = convolve_full(signal, &ch.taps);
    out.truncate(signal.len());
    out
}

/// Full linear convolution, length `signal.len() + taps.len() − 1`.
pub fn convolve_full(signal: &[C64], taps: &[C64]) -> Vec<C64> {
    if signal.is_empty() || taps.is_empty() {
        return Vec::new();
    }
    let mut out = vec![ZERO; signal.len() + taps.len() - 1];
    for (d, &h) in taps.iter().enumerate() {
        if h == ZERO {
            continue;
        }
        for (o, &s) in out[d..].iter_mut().zip(signal) {
            *o += h * s;
        }
    }
    out
}

pub fn mean_power(signal: &[C64]) -> f64 {
    if signal.is_empty() {
        return 0.0;
    }
    signal.iter().map(|s| s.norm_sqr()).sum::<f64>() / signal.len() as f64
}

/// Noise variance giving `snr_db` against `signal_power`; zero for `+∞`.
pub fn noise_variance(signal_power: f64, snr_db: f64) -> Result<f64> {
    if snr_db == f64::INFINITY {
        return Ok(0.0);
    }
    if snr_db.is_nan() {
        return Err(Error::invalid("SNR is NaN"));
    }
    if !(signal_power > 0.0) {
        return Err(Error::invalid("SNR is undefined for a zero-power signal"));
    }
    Ok(signal_power / 10f64.powf(snr_db / 10.0))
}

/// Adds noise at `snr_db` relative to the measured power of `signal`.
/// `snr_db = +∞` returns the input unchanged.
pub fn add_awgn(signal: &[C64], snr_db: f64, seed: u64) -> Result<Vec<C64>> {
    if signal.is_empty() {
        return Err(Error::invalid("cannot add noise to an empty signal"));
    }
    let var = noise_variance(mean_power(signal), snr_db)?;
    let mut out = signal.to_vec();
    add_noise(&mut out, var, &mut rng_for(seed, Stream::Noise, 0));
    Ok(out)
}

/// Adds circular complex Gaussian noise of the given variance in place.
pub fn add_noise<R: Rng + ?Sized>(signal: &mut [C64], variance: f64, rng: &mut R) {
    if variance == 0.0 {
        return;
    }
    for s in signal {
        *s += complex_gaussian(rng, variance);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{max_abs_diff, naive_dft};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn params() -> SystemParams {
        SystemParams::lte_like(2)
    }

    #[test]
    fn eva_table() {
        let eva = eva_profile();
        assert_eq!(eva.num_taps(), 9);
        assert!((eva.tap_powers.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        assert_eq!(eva.tap_delays[0], 0.0);
        assert!(eva.tap_delays.windows(2).all(|w| w[1] > w[0]));
        assert!((eva.tap_delays[8] - 2.51e-6).abs() < 1e-15);
        // CP covers the delay spread at 30.72 MHz
        assert_eq!(eva.max_delay_samples(params().sample_rate()), 77);
    }

    #[test]
    fn parse_errors() {
        assert!(ChannelProfile::parse("0 0\n10").unwrap_err().is_config());
        assert!(ChannelProfile::parse("# nothing").is_err());
        assert!(ChannelProfile::parse("10 0\n5 0").is_err());
        let one = ChannelProfile::parse("0 3.0 # comment\n").unwrap();
        assert_eq!(one.tap_powers, vec![1.0]);
    }

    #[test]
    fn flat_profile_is_flat() {
        let p = params();
        let ch = realize(&ChannelProfile::flat(), &p, 7).unwrap();
        assert_eq!(ch.taps.len(), 1);
        let mag = ch.freq_response[0].norm();
        assert!(ch.freq_response.iter().all(|h| (h.norm() - mag).abs() < 1e-12));
        assert!(!ch.exceeds_cp);
    }

    #[test]
    fn realization_is_deterministic_and_matches_dft() {
        let p = params();
        let a = realize(&eva_profile(), &p, 11).unwrap();
        assert_eq!(a, realize(&eva_profile(), &p, 11).unwrap());
        assert_ne!(a, realize(&eva_profile(), &p, 12).unwrap());
        let mut padded = vec![ZERO; p.m];
        padded[..a.taps.len()].copy_from_slice(&a.taps);
        assert!(max_abs_diff(&a.freq_response, &naive_dft(&padded).unwrap()) < 1e-9);
    }

    #[test]
    fn colliding_taps_add_power() {
        let p = params();
        // 10 ns and 20 ns both round to sample 0 at 30.72 MHz
        let prof = ChannelProfile::new(vec![0.0, 10e-9, 1e-6], vec![1.0, 1.0, 2.0]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let n = 20_000;
        let mut e0 = 0.0;
        for _ in 0..n {
            e0 += realize_with(&prof, &p, &mut rng).unwrap().taps[0].norm_sqr();
        }
        assert!((e0 / n as f64 - 0.5).abs() < 0.03 * 0.5);
    }

    #[test]
    fn unit_tap_power_monte_carlo() {
        let p = params();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let n = 10_000;
        let e: f64 = (0..n)
            .map(|_| realize_with(&ChannelProfile::flat(), &p, &mut rng).unwrap().taps[0].norm_sqr())
            .sum::<f64>()
            / n as f64;
        assert!((e - 1.0).abs() < 0.03, "{e}");
    }

    #[test]
    fn channel_preserves_expected_power() {
        let p = params();
        let signal: Vec<C64> = (0..256).map(|i| C64::from_polar(1.0, i as f64 * 0.37)).collect();
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let trials = 10_000;
        let total: f64 = (0..trials)
            .map(|_| {
                let ch = realize_with(&eva_profile(), &p, &mut rng).unwrap();
                mean_power(&apply_channel(&signal[..], &ch)[100..])
            })
            .sum::<f64>()
            / trials as f64;
        assert!((total - 1.0).abs() < 0.03, "{total}");
    }

    #[test]
    fn convolution_basics() {
        let p = params();
        let x: Vec<C64> = (0..10).map(|i| C64::new(i as f64, -(i as f64))).collect();
        assert_eq!(apply_channel(&x, &ChannelRealization::identity(&p)), x);
        let delay = ChannelRealization::from_taps(vec![ZERO, C64::new(1.0, 0.0)], &p).unwrap();
        let y = apply_channel(&x, &delay);
        assert_eq!(y[0], ZERO);
        assert_eq!(y[1..], x[..9]);

        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let taps = vec![complex_gaussian(&mut rng, 1.0), complex_gaussian(&mut rng, 1.0)];
        let ch = ChannelRealization::from_taps(taps.clone(), &p).unwrap();
        let y = apply_channel(&x, &ch);
        let naive: Vec<C64> = (0..x.len())
            .map(|n| taps[0] * x[n] + if n > 0 { taps[1] * x[n - 1] } else { ZERO })
            .collect();
        assert!(max_abs_diff(&y, &naive) < 1e-12);
    }

    #[test]
    fn long_delay_line_sets_flag() {
        let p = SystemParams::new(16, 64, 8, 0, 4, 15e3).unwrap();
        let ch = ChannelRealization::from_taps(vec![C64::new(1.0, 0.0); 12], &p).unwrap();
        assert!(ch.exceeds_cp);
    }

    #[test]
    fn awgn() {
        let x: Vec<C64> = (0..100).map(|i| C64::new(1.0, i as f64 * 0.01)).collect();
        assert_eq!(add_awgn(&x, f64::INFINITY, 1).unwrap(), x);
        assert!(add_awgn(&[ZERO; 10], 10.0, 1).is_err());
        assert!(add_awgn(&[], 10.0, 1).is_err());

        let n = 1_000_000;
        let x = vec![C64::new(1.0, 0.0); n];
        let y = add_awgn(&x, 10.0, 2).unwrap();
        let noise: Vec<C64> = y.iter().zip(&x).map(|(a, b)| a - b).collect();
        let snr = 10.0 * (1.0 / mean_power(&noise)).log10();
        assert!((snr - 10.0).abs() < 0.1, "{snr}");
        assert_eq!(y, add_awgn(&x, 10.0, 2).unwrap());
    }
}
