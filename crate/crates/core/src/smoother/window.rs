use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::params::SystemParams;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WindowKind {
    Blackman,
    Hanning,
    Triangular,
}

impl WindowKind {
    pub fn parse(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "blackman" => Ok(WindowKind::Blackman),
            "hanning" | "hann" => Ok(WindowKind::Hanning),
            "triangular" | "bartlett" => Ok(WindowKind::Triangular),
            other => Err(Error::invalid(format!("unknown window `{other}`"))),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            WindowKind::Blackman => "blackman",
            WindowKind::Hanning => "hanning",
            WindowKind::Triangular => "triangular",
        }
    }

    /// `(a0, a1, a2)` of `a0 − a1 cos θ + a2 cos 2θ`, when the window is a
    /// cosine series.
    pub fn cosine_coefficients(self) -> Option<[f64; 3]> {
        match self {
            WindowKind::Blackman => Some([0.42, 0.5, 0.08]),
            WindowKind::Hanning => Some([0.5, 0.5, 0.0]),
            WindowKind::Triangular => None,
        }
    }
}

/// Descending half of a symmetric window of length `2L − 1`, sampled on the
/// smoother support `ℓ = 0 … L−1`: value 1 at `ℓ = 0`, 0 at `ℓ = L−1`.
///
/// For the cosine-series kinds the phase is `θ(ℓ) = π(ℓ + L − 1)/(L − 1)`,
/// i.e. `2πρτ` with `τ = (ℓ + L − 1)·T_samp` and `ρ = 1/((2L − 2)·T_samp)`.
/// Derivatives are taken with respect to the sample index.
#[derive(Debug, Clone, PartialEq)]
pub struct WindowSpec {
    pub kind: WindowKind,
    pub l: usize,
    /// `ρ` in Hz.
    pub rho: f64,
    /// `g^{(j)}(0)` for `j = 0 … 2N`.
    pub derivative_table: Vec<f64>,
}

impl WindowSpec {
    pub fn new(kind: WindowKind, p: &SystemParams) -> Result<Self> {
        if p.l < 2 {
            return Err(Error::invalid(format!(
                "smoother support L={} is too short: the window rate ρ needs L >= 2",
                p.l
            )));
        }
        let mut spec = WindowSpec {
            kind,
            l: p.l,
            rho: 1.0 / ((2 * p.l - 2) as f64 * p.t_samp()),
            derivative_table: Vec::new(),
        };
        spec.derivative_table = (0..=2 * p.n).map(|j| spec.derivative(j, 0.0)).collect();
        Ok(spec)
    }

    /// Phase rate `dθ/dℓ = π/(L−1)`.
    fn rate(&self) -> f64 {
        PI / (self.l - 1) as f64
    }

    pub fn value(&self, ell: f64) -> f64 {
        self.derivative(0, ell)
    }

    /// `g^{(j)}(ℓ)`, defined on `0 ≤ ℓ ≤ L−1`.
    pub fn derivative(&self, j: usize, ell: f64) -> f64 {
        match self.kind.cosine_coefficients() {
            Some([a0, a1, a2]) => {
                let a = self.rate();
                let theta = a * (ell + (self.l - 1) as f64);
                let dc = if j == 0 { a0 } else { 0.0 };
                dc - a1 * a.powi(j as i32) * cos_derivative(theta, j)
                    + a2 * (2.0 * a).powi(j as i32) * cos_derivative(2.0 * theta, j)
            }
            None => match j {
                0 => 1.0 - ell / (self.l - 1) as f64,
                1 => -1.0 / (self.l - 1) as f64,
                _ => 0.0,
            },
        }
    }
}

/// `d^j/dx^j cos(x)`.
fn cos_derivative(x: f64, j: usize) -> f64 {
    match j % 4 {
        0 => x.cos(),
        1 => -x.sin(),
        2 => -x.cos(),
        _ => x.sin(),
    }
}
