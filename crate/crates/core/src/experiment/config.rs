//! Flat `key = value` experiment configuration.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use crate::analysis::Normalization;
use crate::channel::{eva_profile, ChannelProfile};
use crate::error::{Error, Result};
use crate::params::{centered_subcarriers, SystemParams};
use crate::qam::QamOrder;
use crate::smoother::{BasisAlignment, WindowKind};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scheme {
    Ofdm,
    NcOfdm,
    LowInterference,
}

impl Scheme {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "ofdm" => Ok(Scheme::Ofdm),
            "nc_ofdm" => Ok(Scheme::NcOfdm),
            "low_interference" | "li" => Ok(Scheme::LowInterference),
            other => Err(Error::config(format!(
                "unknown scheme `{other}` (expected ofdm, nc_ofdm or low_interference)"
            ))),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Scheme::Ofdm => "ofdm",
            Scheme::NcOfdm => "nc_ofdm",
            Scheme::LowInterference => "low_interference",
        }
    }
}

/// Channel used by the BER chain.
#[derive(Debug, Clone, PartialEq)]
pub enum ChannelChoice {
    /// Bundled EVA profile, block Rayleigh fading.
    Eva,
    /// Single Rayleigh tap.
    Flat,
    /// No fading at all.
    Identity,
    /// Profile file in `delay_ns power_db` format.
    File(PathBuf),
}

impl ChannelChoice {
    fn parse(s: &str) -> Self {
        match s {
            "eva" => ChannelChoice::Eva,
            "flat" => ChannelChoice::Flat,
            "identity" | "none" => ChannelChoice::Identity,
            path => ChannelChoice::File(PathBuf::from(path)),
        }
    }

    fn name(&self) -> String {
        match self {
            ChannelChoice::Eva => "eva".into(),
            ChannelChoice::Flat => "flat".into(),
            ChannelChoice::Identity => "identity".into(),
            ChannelChoice::File(p) => p.display().to_string(),
        }
    }

    /// `None` for the identity channel.
    pub fn profile(&self) -> Result<Option<ChannelProfile>> {
        Ok(match self {
            ChannelChoice::Eva => Some(eva_profile()),
            ChannelChoice::Flat => Some(ChannelProfile::flat()),
            ChannelChoice::Identity => None,
            ChannelChoice::File(p) => Some(ChannelProfile::load(p).map_err(|e| match e {
                Error::Io(io) => Error::config(format!("channel profile {}: {io}", p.display())),
                other => other,
            })?),
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub scheme: Scheme,
    pub k: usize,
    /// Explicit `M`; otherwise `oversampling · K`.
    pub m: Option<usize>,
    pub m_cp: usize,
    pub n: usize,
    pub l: usize,
    pub delta_f: f64,
    pub dc_null: bool,
    pub qam_order: u32,
    pub window: WindowKind,
    pub basis_alignment: BasisAlignment,
    pub num_symbols: usize,
    pub snr_db: Vec<f64>,
    pub seed: u64,
    pub oversampling: usize,
    pub out_dir: PathBuf,
    pub welch_segment: usize,
    pub welch_overlap: usize,
    pub normalization: Normalization,
    pub analytic_draws: usize,
    pub analytic_blocks: usize,
    /// Analytic PSD is evaluated on the Welch grid points with `|f|` up to this.
    pub analytic_span_hz: f64,
    pub max_errors: u64,
    pub max_bits: u64,
    pub batch_symbols: usize,
    pub channel: ChannelChoice,
    /// Lets the continuity audit run on plain OFDM as a negative control.
    pub allow_unsmoothed: bool,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            scheme: Scheme::LowInterference,
            k: 256,
            m: None,
            m_cp: 144,
            n: 2,
            l: 144,
            delta_f: 15e3,
            dc_null: false,
            qam_order: 16,
            window: WindowKind::Blackman,
            basis_alignment: BasisAlignment::Junction,
            num_symbols: 1000,
            snr_db: vec![10.0, 15.0, 20.0, 25.0, 30.0],
            seed: 1,
            oversampling: 8,
            out_dir: PathBuf::from("out"),
            welch_segment: 2048,
            welch_overlap: 512,
            normalization: Normalization::Peak,
            analytic_draws: 64,
            analytic_blocks: 512,
            analytic_span_hz: 4e6,
            max_errors: 100,
            max_bits: 1_000_000,
            batch_symbols: 32,
            channel: ChannelChoice::Eva,
            allow_unsmoothed: false,
        }
    }
}

fn num<T: std::str::FromStr>(key: &str, value: &str) -> Result<T> {
    value
        .parse()
        .map_err(|_| Error::config(format!("`{key}`: cannot parse `{value}`")))
}

fn boolean(key: &str, value: &str) -> Result<bool> {
    match value {
        "true" | "yes" | "1" => Ok(true),
        "false" | "no" | "0" => Ok(false),
        _ => Err(Error::config(format!("`{key}`: expected true or false, got `{value}`"))),
    }
}

fn snr_value(v: &str) -> Result<f64> {
    match v {
        "inf" | "+inf" | "infinity" => Ok(f64::INFINITY),
        _ => num("snr_db", v),
    }
}

fn fmt_snr(v: f64) -> String {
    if v == f64::INFINITY {
        "inf".into()
    } else {
        format!("{v}")
    }
}

impl ExperimentConfig {
    /// Parses a config file body on top of the defaults.
    pub fn parse(text: &str) -> Result<Self> {
        let mut cfg = Self::default();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::config(format!("line {}: expected `key = value`, got `{raw}`", lineno + 1)))?;
            cfg.set(key.trim(), value.trim())
                .map_err(|e| Error::config(format!("line {}: {}", lineno + 1, strip(e))))?;
        }
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::config(format!("cannot read config {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    /// Applies a `key=value` override.
    pub fn apply_override(&mut self, assignment: &str) -> Result<()> {
        let (key, value) = assignment
            .split_once('=')
            .ok_or_else(|| Error::config(format!("override `{assignment}` is not `key=value`")))?;
        self.set(key.trim(), value.trim())
    }

    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        match key.to_ascii_lowercase().as_str() {
            "scheme" => self.scheme = Scheme::parse(value)?,
            "k" => self.k = num(key, value)?,
            "m" => self.m = Some(num(key, value)?),
            "m_cp" => self.m_cp = num(key, value)?,
            "n" => self.n = num(key, value)?,
            "l" => self.l = num(key, value)?,
            "delta_f" => self.delta_f = num(key, value)?,
            "dc_null" => self.dc_null = boolean(key, value)?,
            "qam_order" => self.qam_order = num(key, value)?,
            "window" => self.window = WindowKind::parse(value).map_err(|e| Error::config(strip(e)))?,
            "basis_alignment" => {
                self.basis_alignment = BasisAlignment::parse(value).map_err(|e| Error::config(strip(e)))?
            }
            "num_symbols" => self.num_symbols = num(key, value)?,
            "snr_db" => {
                self.snr_db = value
                    .split(',')
                    .map(str::trim)
                    .filter(|s| !s.is_empty())
                    .map(snr_value)
                    .collect::<Result<_>>()?
            }
            "seed" => self.seed = num(key, value)?,
            "oversampling" => self.oversampling = num(key, value)?,
            "out_dir" => self.out_dir = PathBuf::from(value),
            "welch_segment" => self.welch_segment = num(key, value)?,
            "welch_overlap" => self.welch_overlap = num(key, value)?,
            "normalization" => {
                self.normalization = match value {
                    "peak" => Normalization::Peak,
                    "absolute" => Normalization::Absolute,
                    _ => return Err(Error::config(format!("`normalization`: expected peak or absolute, got `{value}`"))),
                }
            }
            "analytic_draws" => self.analytic_draws = num(key, value)?,
            "analytic_blocks" => self.analytic_blocks = num(key, value)?,
            "analytic_span_hz" => self.analytic_span_hz = num(key, value)?,
            "max_errors" => self.max_errors = num(key, value)?,
            "max_bits" => self.max_bits = num::<f64>(key, value).map(|v| v as u64)?,
            "batch_symbols" => self.batch_symbols = num(key, value)?,
            "channel" => self.channel = ChannelChoice::parse(value),
            "allow_unsmoothed" => self.allow_unsmoothed = boolean(key, value)?,
            other => return Err(Error::config(format!("unknown key `{other}`"))),
        }
        Ok(())
    }

    pub fn resolved_m(&self) -> usize {
        self.m.unwrap_or(self.oversampling * self.k)
    }

    /// Waveform parameters implied by the config.
    pub fn system_params(&self) -> Result<SystemParams> {
        if self.oversampling == 0 {
            return Err(Error::config("oversampling must be positive"));
        }
        if let Some(m) = self.m {
            if m != self.oversampling * self.k {
                return Err(Error::config(format!(
                    "M={m} does not equal oversampling x K = {} x {}",
                    self.oversampling, self.k
                )));
            }
        }
        SystemParams::with_subcarriers(
            centered_subcarriers(self.k, self.dc_null),
            self.resolved_m(),
            self.m_cp,
            self.n,
            self.l,
            self.delta_f,
        )
        .map_err(|e| Error::config(strip(e)))
    }

    pub fn qam(&self) -> Result<QamOrder> {
        QamOrder::from_order(self.qam_order).map_err(|e| Error::config(strip(e)))
    }

    /// Checks everything that can be checked before computing.
    pub fn validate(&self) -> Result<SystemParams> {
        let p = self.system_params()?;
        self.qam()?;
        if self.num_symbols == 0 {
            return Err(Error::config("num_symbols must be at least 1"));
        }
        match self.scheme {
            Scheme::LowInterference if self.l < 2 * self.n + 2 => {
                return Err(Error::config(format!(
                    "low_interference needs L >= 2N+2, got L={}, N={}",
                    self.l, self.n
                )))
            }
            Scheme::LowInterference | Scheme::NcOfdm if self.k <= self.n => {
                return Err(Error::config(format!("need K > N, got K={}, N={}", self.k, self.n)))
            }
            _ => {}
        }
        if self.welch_segment == 0 || self.welch_overlap >= self.welch_segment {
            return Err(Error::config("need 0 <= welch_overlap < welch_segment"));
        }
        if self.batch_symbols == 0 || self.analytic_draws == 0 || self.analytic_blocks == 0 {
            return Err(Error::config("batch_symbols, analytic_draws and analytic_blocks must be positive"));
        }
        if !(self.analytic_span_hz > 0.0) {
            return Err(Error::config("analytic_span_hz must be positive"));
        }
        Ok(p)
    }

    /// Resolved config as `key = value` lines, in a fixed order.
    pub fn manifest(&self) -> String {
        let mut s = String::new();
        let norm = match self.normalization {
            Normalization::Peak => "peak",
            Normalization::Absolute => "absolute",
        };
        let snr: Vec<String> = self.snr_db.iter().map(|&v| fmt_snr(v)).collect();
        let entries: Vec<(&str, String)> = vec![
            ("scheme", self.scheme.name().into()),
            ("K", self.k.to_string()),
            ("M", self.resolved_m().to_string()),
            ("M_cp", self.m_cp.to_string()),
            ("N", self.n.to_string()),
            ("L", self.l.to_string()),
            ("delta_f", self.delta_f.to_string()),
            ("dc_null", self.dc_null.to_string()),
            ("qam_order", self.qam_order.to_string()),
            ("window", self.window.name().into()),
            ("basis_alignment", self.basis_alignment.name().into()),
            ("num_symbols", self.num_symbols.to_string()),
            ("snr_db", snr.join(",")),
            ("seed", self.seed.to_string()),
            ("oversampling", self.oversampling.to_string()),
            ("out_dir", self.out_dir.display().to_string()),
            ("welch_segment", self.welch_segment.to_string()),
            ("welch_overlap", self.welch_overlap.to_string()),
            ("normalization", norm.into()),
            ("analytic_draws", self.analytic_draws.to_string()),
            ("analytic_blocks", self.analytic_blocks.to_string()),
            ("analytic_span_hz", self.analytic_span_hz.to_string()),
            ("max_errors", self.max_errors.to_string()),
            ("max_bits", self.max_bits.to_string()),
            ("batch_symbols", self.batch_symbols.to_string()),
            ("channel", self.channel.name()),
            ("allow_unsmoothed", self.allow_unsmoothed.to_string()),
        ];
        for (k, v) in entries {
            let _ = writeln!(s, "{k} = {v}");
        }
        s
    }
}

/// Drops the variant prefix so wrapped messages read naturally.
fn strip(e: Error) -> String {
    match e {
        Error::InvalidArgument(m) | Error::Config(m) => m,
        other => other.to_string(),
    }
}
