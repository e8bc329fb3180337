use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::numerics::C64;

/// Static scalars of the waveform.
///
/// Time is measured in samples of `T_samp = T_s / M` wherever a derivative is
/// taken with respect to the sample index `m`.
#[derive(Debug, Clone, PartialEq)]
pub struct SystemParams {
    subcarriers: Vec<i64>,
    /// Samples per core symbol.
    pub m: usize,
    /// Cyclic prefix samples.
    pub m_cp: usize,
    /// Highest continuous derivative order.
    pub n: usize,
    /// Smoother support length in samples.
    pub l: usize,
    /// Subcarrier spacing in Hz.
    pub delta_f: f64,
}

/// Contiguous block of `k` indices centred on DC, optionally without DC itself.
pub fn centered_subcarriers(k: usize, dc_null: bool) -> Vec<i64> {
    let k = k as i64;
    if dc_null {
        let lo = (k + 1) / 2;
        let hi = k / 2;
        (-lo..0).chain(1..=hi).collect()
    } else {
        let lo = k / 2;
        (-lo..k - lo).collect()
    }
}

impl SystemParams {
    /// Centred contiguous layout including DC.
    pub fn new(k: usize, m: usize, m_cp: usize, n: usize, l: usize, delta_f: f64) -> Result<Self> {
        Self::with_subcarriers(centered_subcarriers(k, false), m, m_cp, n, l, delta_f)
    }

    pub fn with_subcarriers(
        subcarriers: Vec<i64>,
        m: usize,
        m_cp: usize,
        n: usize,
        l: usize,
        delta_f: f64,
    ) -> Result<Self> {
        let p = SystemParams {
            subcarriers,
            m,
            m_cp,
            n,
            l,
            delta_f,
        };
        p.validate()?;
        Ok(p)
    }

    /// The configuration used throughout the experiments: K=256, M=2048,
    /// M_cp=L=144, Δf=15 kHz.
    pub fn lte_like(n: usize) -> Self {
        Self::new(256, 2048, 144, n, 144, 15e3).expect("valid defaults")
    }

    pub fn with_order(&self, n: usize) -> Self {
        SystemParams { n, ..self.clone() }
    }

    pub fn with_support(&self, l: usize) -> Result<Self> {
        let p = SystemParams { l, ..self.clone() };
        p.validate()?;
        Ok(p)
    }

    fn validate(&self) -> Result<()> {
        let k = self.subcarriers.len();
        if k == 0 {
            return Err(Error::invalid("subcarrier set is empty"));
        }
        if self.m == 0 || k > self.m {
            return Err(Error::invalid(format!("need 0 < K <= M, got K={k}, M={}", self.m)));
        }
        if !(self.l > 0 && self.l <= self.m_cp && self.m_cp <= self.m) {
            return Err(Error::invalid(format!(
                "need 0 < L <= M_cp <= M, got L={}, M_cp={}, M={}",
                self.l, self.m_cp, self.m
            )));
        }
        if !(self.delta_f.is_finite() && self.delta_f > 0.0) {
            return Err(Error::invalid(format!("subcarrier spacing must be positive, got {}", self.delta_f)));
        }
        let half = self.m as i64 / 2;
        let mut sorted = self.subcarriers.clone();
        sorted.sort_unstable();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::invalid("subcarrier indices must be distinct"));
        }
        if let Some(bad) = self.subcarriers.iter().find(|&&k| k.abs() >= half.max(1) && self.m > 1) {
            return Err(Error::invalid(format!("subcarrier {bad} outside |k| < M/2 = {half}")));
        }
        Ok(())
    }

    pub fn k(&self) -> usize {
        self.subcarriers.len()
    }

    pub fn subcarriers(&self) -> &[i64] {
        &self.subcarriers
    }

    /// DFT bin of subcarrier index `k` (modulo M).
    pub fn bin(&self, k: i64) -> usize {
        k.rem_euclid(self.m as i64) as usize
    }

    pub fn bins(&self) -> Vec<usize> {
        self.subcarriers.iter().map(|&k| self.bin(k)).collect()
    }

    /// Samples per CP-prefixed symbol.
    pub fn symbol_len(&self) -> usize {
        self.m + self.m_cp
    }

    /// `β = T_cp / T_s`.
    pub fn beta(&self) -> f64 {
        self.m_cp as f64 / self.m as f64
    }

    /// `φ = −2πβ`.
    pub fn phi(&self) -> f64 {
        -2.0 * PI * self.beta()
    }

    pub fn t_s(&self) -> f64 {
        1.0 / self.delta_f
    }

    pub fn t_cp(&self) -> f64 {
        self.beta() * self.t_s()
    }

    pub fn t_samp(&self) -> f64 {
        self.t_s() / self.m as f64
    }

    /// Full symbol duration `T_s + T_cp`.
    pub fn t_total(&self) -> f64 {
        self.t_s() + self.t_cp()
    }

    pub fn sample_rate(&self) -> f64 {
        self.m as f64 * self.delta_f
    }

    /// Diagonal of Φ: `e^{jφ k_r}`.
    pub fn phase_diag(&self) -> Vec<C64> {
        let phi = self.phi();
        self.subcarriers
            .iter()
            .map(|&k| C64::from_polar(1.0, phi * k as f64))
            .collect()
    }

    /// Occupied band edges in Hz: outer subcarriers widened by half a spacing.
    pub fn occupied_band(&self) -> (f64, f64) {
        let lo = *self.subcarriers.iter().min().unwrap() as f64 - 0.5;
        let hi = *self.subcarriers.iter().max().unwrap() as f64 + 0.5;
        (lo * self.delta_f, hi * self.delta_f)
    }
}
