//! Experiment orchestration: PSD and BER sweeps, continuity audit and
//! complexity report, each written as CSV plus a manifest.

mod chain;
mod config;

pub use chain::{random_frame, Frame, Transmitter, TxFrame};
pub use config::{ChannelChoice, ExperimentConfig, Scheme};

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use crate::analysis::{
    analytic_psd_with, bit_errors, complexity_counts, welch_psd_with, AnalyticPsdParams, ComplexityReport,
    ComplexityScheme, Normalization, PsdEstimate,
};
use crate::channel::{add_noise, convolve_full, mean_power, noise_variance, realize_with, ChannelProfile, ChannelRealization};
use crate::error::{Error, Result};
use crate::exec::{map_indexed, Exec};
use crate::numerics::ZERO;
use crate::ofdm::{concat, demodulate, TimeSymbol};
use crate::qam::{qam_demap, QamOrder};
use crate::rng::{rng_for, Stream};
use crate::smoother::{junction_residuals, plain_junction_residuals, stream_coeffs_with, JunctionResidual};

/// Index range of the data generator reserved for noise-power calibration.
const CALIBRATION_FIRST: u64 = 1 << 40;
const CALIBRATION_SYMBOLS: usize = 64;
/// BER batches evaluated per parallel round; fixed so the stopping point does
/// not depend on the worker count.
const BER_ROUND: usize = 8;

#[derive(Debug, Clone)]
pub struct PsdCurves {
    pub welch: PsdEstimate,
    /// Present for the smoothed scheme with a cosine-series window.
    pub analytic: Option<PsdEstimate>,
}

/// Simulated (and, for the smoothed scheme, analytic) PSD of a configuration.
pub fn psd_curves(exec: Exec, cfg: &ExperimentConfig) -> Result<PsdCurves> {
    let p = cfg.validate()?;
    let qam = cfg.qam()?;
    let frame = random_frame(p.k(), cfg.num_symbols, qam, cfg.seed, 0);
    let tx = Transmitter::new(cfg.scheme, &p, cfg.window, cfg.basis_alignment)?;
    let stream = concat(&tx.transmit(exec, &frame.symbols)?.symbols);
    let welch = welch_psd_with(exec, &stream, cfg.welch_segment, cfg.welch_overlap, p.sample_rate())?;

    let analytic = if cfg.scheme == Scheme::LowInterference && cfg.window.cosine_coefficients().is_some() {
        let freqs: Vec<f64> = welch
            .freqs
            .iter()
            .copied()
            .filter(|f| f.abs() <= cfg.analytic_span_hz && (p.n == 0 || *f != 0.0))
            .collect();
        let mut ap = AnalyticPsdParams::new(p.clone(), cfg.window, freqs);
        ap.alignment = cfg.basis_alignment;
        ap.draws = cfg.analytic_draws;
        ap.blocks = cfg.analytic_blocks;
        ap.qam = qam;
        Some(analytic_psd_with(exec, &ap, cfg.seed)?)
    } else {
        None
    };
    let norm = |e: PsdEstimate| match cfg.normalization {
        Normalization::Peak => e.peak_normalized(),
        Normalization::Absolute => e,
    };
    Ok(PsdCurves {
        welch: norm(welch),
        analytic: analytic.map(norm),
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct BerPoint {
    pub snr_db: f64,
    pub ber: f64,
    pub bits: u64,
    pub errors: u64,
    /// Symbols skipped because the channel had a null on an occupied bin.
    pub erased_symbols: u64,
}

#[derive(Debug, Default, Clone, Copy)]
struct BatchTally {
    errors: u64,
    bits: u64,
    erased: u64,
}

struct BerSetup<'a> {
    tx: &'a Transmitter,
    profile: Option<&'a ChannelProfile>,
    qam: QamOrder,
    cfg: &'a ExperimentConfig,
}

impl BerSetup<'_> {
    /// One independent frame of `batch_symbols` symbols through channel,
    /// noise and receiver.
    fn run_batch(&self, batch: usize, variance: f64) -> Result<BatchTally> {
        let p = self.tx.params();
        let n_sym = self.cfg.batch_symbols;
        let frame = random_frame(p.k(), n_sym, self.qam, self.cfg.seed, (batch * n_sym) as u64);
        let tx = self.tx.transmit(Exec::Sequential, &frame.symbols)?;
        let sym_len = p.symbol_len();

        // block fading: each symbol (and the trailing one) sees its own draw,
        // and its delayed tail spills into the next symbol's prefix
        let first_channel = (batch * (n_sym + 1)) as u64;
        let channels: Vec<ChannelRealization> = (0..tx.symbols.len())
            .map(|i| match self.profile {
                Some(prof) => realize_with(prof, p, &mut rng_for(self.cfg.seed, Stream::Channel, first_channel + i as u64)),
                None => Ok(ChannelRealization::identity(p)),
            })
            .collect::<Result<_>>()?;
        let max_taps = channels.iter().map(|c| c.taps.len()).max().unwrap_or(1);
        let mut rx = vec![ZERO; tx.symbols.len() * sym_len + max_taps - 1];
        for (i, (sym, ch)) in tx.symbols.iter().zip(&channels).enumerate() {
            for (o, v) in rx[i * sym_len..].iter_mut().zip(convolve_full(&sym.samples, &ch.taps)) {
                *o += v;
            }
        }

        let mut tally = BatchTally::default();
        let bps = self.qam.bits_per_symbol();
        for i in 0..n_sym {
            let mut window = rx[i * sym_len..(i + 1) * sym_len].to_vec();
            add_noise(&mut window, variance, &mut rng_for(self.cfg.seed, Stream::Noise, first_channel + i as u64));
            match demodulate(&TimeSymbol { samples: window }, &channels[i].freq_response, p) {
                Ok(eq) => {
                    let rx_bits = qam_demap(&[eq], self.qam);
                    let tx_bits = &frame.bits[i * p.k() * bps..(i + 1) * p.k() * bps];
                    tally.errors += bit_errors(tx_bits, &rx_bits)?;
                    tally.bits += rx_bits.len() as u64;
                }
                Err(Error::DeepFade { .. }) => tally.erased += 1,
                Err(e) => return Err(e),
            }
        }
        Ok(tally)
    }
}

/// Mean transmit power of the scheme over a calibration frame, CP included.
pub fn reference_power(tx: &Transmitter, qam: QamOrder, seed: u64) -> Result<f64> {
    let frame = random_frame(tx.params().k(), CALIBRATION_SYMBOLS, qam, seed, CALIBRATION_FIRST);
    Ok(mean_power(&concat(&tx.transmit(Exec::Sequential, &frame.symbols)?.symbols)))
}

/// BER per configured SNR point.
pub fn ber_curve(exec: Exec, cfg: &ExperimentConfig) -> Result<Vec<BerPoint>> {
    let p = cfg.validate()?;
    if cfg.snr_db.is_empty() {
        return Err(Error::config("snr_db list is empty"));
    }
    let qam = cfg.qam()?;
    let tx = Transmitter::new(cfg.scheme, &p, cfg.window, cfg.basis_alignment)?;
    let profile = cfg.channel.profile()?;
    let setup = BerSetup {
        tx: &tx,
        profile: profile.as_ref(),
        qam,
        cfg,
    };
    let power = reference_power(&tx, qam, cfg.seed)?;

    cfg.snr_db
        .iter()
        .map(|&snr_db| {
            let variance = noise_variance(power, snr_db)?;
            let mut total = BatchTally::default();
            let mut next = 0;
            'rounds: loop {
                let round = map_indexed(exec, BER_ROUND, |j| setup.run_batch(next + j, variance));
                for t in round {
                    let t = t?;
                    total.errors += t.errors;
                    total.bits += t.bits;
                    total.erased += t.erased;
                    // erased symbols count against the budget so total fades still terminate
                    let spent = total.bits + total.erased * (p.k() * qam.bits_per_symbol()) as u64;
                    if total.errors >= cfg.max_errors || spent >= cfg.max_bits {
                        break 'rounds;
                    }
                }
                next += BER_ROUND;
            }
            if total.bits == 0 {
                return Err(Error::Unsupported(format!("every symbol was erased at {snr_db} dB")));
            }
            Ok(BerPoint {
                snr_db,
                ber: total.errors as f64 / total.bits as f64,
                bits: total.bits,
                errors: total.errors,
                erased_symbols: total.erased,
            })
        })
        .collect()
}

/// Junction residuals in front of each data symbol (`M_s` junctions, the
/// first against the implicit zero symbol).
pub fn continuity_residuals(exec: Exec, cfg: &ExperimentConfig) -> Result<Vec<JunctionResidual>> {
    let p = cfg.validate()?;
    if cfg.scheme == Scheme::Ofdm && !cfg.allow_unsmoothed {
        return Err(Error::config(
            "the continuity audit of plain ofdm is a negative control; set allow_unsmoothed = true",
        ));
    }
    let frame = random_frame(p.k(), cfg.num_symbols, cfg.qam()?, cfg.seed, 0);
    let tx = Transmitter::new(cfg.scheme, &p, cfg.window, cfg.basis_alignment)?;
    Ok(match &tx {
        Transmitter::LowInterference(ctx) => {
            let bs = stream_coeffs_with(exec, &frame.symbols, ctx)?;
            let mut r = junction_residuals(&frame.symbols, &bs, ctx);
            r.truncate(frame.symbols.len());
            r
        }
        _ => plain_junction_residuals(&tx.transmit(exec, &frame.symbols)?.modulated, &p, p.n),
    })
}

/// Table of operation counts for all three schemes.
pub fn complexity_table(cfg: &ExperimentConfig) -> Result<Vec<ComplexityReport>> {
    ComplexityScheme::ALL
        .iter()
        .map(|&s| complexity_counts(s, cfg.k as u64, cfg.n as u64, cfg.l as u64).map_err(|e| Error::config(e.to_string())))
        .collect()
}

fn write_file(path: &Path, body: &str) -> Result<()> {
    if let Some(dir) = path.parent() {
        std::fs::create_dir_all(dir)?;
    }
    std::fs::write(path, body)?;
    Ok(())
}

fn psd_csv(est: &PsdEstimate) -> String {
    let mut s = String::from("freq_hz,psd_db\n");
    for (f, db) in est.freqs.iter().zip(est.db()) {
        let _ = writeln!(s, "{f},{db:.6}");
    }
    s
}

fn write_manifest(cfg: &ExperimentConfig, command: &str, outputs: &[PathBuf], notes: &[String]) -> Result<PathBuf> {
    let mut s = format!("command = {command}\nversion = {}\n", env!("CARGO_PKG_VERSION"));
    s.push_str(&cfg.manifest());
    let names: Vec<String> = outputs
        .iter()
        .filter_map(|p| p.file_name().map(|n| n.to_string_lossy().into_owned()))
        .collect();
    let _ = writeln!(s, "outputs = {}", names.join(","));
    for n in notes {
        let _ = writeln!(s, "# {n}");
    }
    let path = cfg.out_dir.join(format!("{command}_{}_manifest.txt", cfg.scheme.name()));
    write_file(&path, &s)?;
    Ok(path)
}

/// Writes the Welch curve (and the analytic one where defined).
pub fn run_psd(exec: Exec, cfg: &ExperimentConfig) -> Result<Vec<PathBuf>> {
    let curves = psd_curves(exec, cfg)?;
    let scheme = cfg.scheme.name();
    let mut files = vec![cfg.out_dir.join(format!("psd_welch_{scheme}.csv"))];
    write_file(&files[0], &psd_csv(&curves.welch))?;
    let mut notes = Vec::new();
    if let Some(a) = &curves.analytic {
        let path = cfg.out_dir.join(format!("psd_analytic_{scheme}.csv"));
        write_file(&path, &psd_csv(a))?;
        files.push(path);
    } else if cfg.scheme == Scheme::LowInterference {
        notes.push(format!("no analytic curve: window `{}` is not a cosine series", cfg.window.name()));
    }
    let manifest = write_manifest(cfg, "psd", &files, &notes)?;
    files.push(manifest);
    Ok(files)
}

pub fn run_ber(exec: Exec, cfg: &ExperimentConfig) -> Result<Vec<PathBuf>> {
    let points = ber_curve(exec, cfg)?;
    let mut s = String::from("snr_db,ber,bits_measured,scheme\n");
    for pt in &points {
        let snr = if pt.snr_db == f64::INFINITY { "inf".to_string() } else { pt.snr_db.to_string() };
        let _ = writeln!(s, "{snr},{:e},{},{}", pt.ber, pt.bits, cfg.scheme.name());
    }
    let path = cfg.out_dir.join(format!("ber_{}.csv", cfg.scheme.name()));
    write_file(&path, &s)?;
    let notes: Vec<String> = points
        .iter()
        .filter(|pt| pt.erased_symbols > 0)
        .map(|pt| format!("{} dB: {} symbols erased by deep fades", pt.snr_db, pt.erased_symbols))
        .collect();
    let manifest = write_manifest(cfg, "ber", std::slice::from_ref(&path), &notes)?;
    Ok(vec![path, manifest])
}

pub fn run_continuity_audit(exec: Exec, cfg: &ExperimentConfig) -> Result<Vec<PathBuf>> {
    let residuals = continuity_residuals(exec, cfg)?;
    let mut s = String::from("junction,order,residual,relative_residual\n");
    for (j, r) in residuals.iter().enumerate() {
        for (n, (abs, rel)) in r.absolute.iter().zip(&r.relative).enumerate() {
            let _ = writeln!(s, "{j},{n},{abs:e},{rel:e}");
        }
    }
    let path = cfg.out_dir.join(format!("continuity_{}.csv", cfg.scheme.name()));
    write_file(&path, &s)?;
    let manifest = write_manifest(cfg, "continuity", std::slice::from_ref(&path), &[])?;
    Ok(vec![path, manifest])
}

pub fn run_complexity(cfg: &ExperimentConfig) -> Result<Vec<PathBuf>> {
    if cfg.k == 0 || cfg.l == 0 {
        return Err(Error::config("complexity needs K >= 1 and L >= 1"));
    }
    let table = complexity_table(cfg)?;
    let mut counts = String::from("scheme,real_mults,real_adds,total\n");
    for r in &table {
        let _ = writeln!(counts, "{},{},{},{}", r.scheme.name(), r.real_mults, r.real_adds, r.total());
    }
    let find = |s: ComplexityScheme| table.iter().find(|r| r.scheme == s).expect("all schemes present");
    let li = find(ComplexityScheme::LowInterference);
    let mut ratios = String::from("numerator,denominator,mult_ratio,total_ratio\n");
    for other in [ComplexityScheme::NcOfdm, ComplexityScheme::NcspOfdm] {
        let o = find(other);
        let _ = writeln!(
            ratios,
            "{},{},{:.3},{:.3}",
            li.scheme.name(),
            o.scheme.name(),
            li.real_mults as f64 / o.real_mults as f64,
            li.total() as f64 / o.total() as f64
        );
    }
    let files = vec![cfg.out_dir.join("complexity.csv"), cfg.out_dir.join("complexity_ratios.csv")];
    write_file(&files[0], &counts)?;
    write_file(&files[1], &ratios)?;
    let manifest = cfg.out_dir.join("complexity_manifest.txt");
    let mut s = format!("command = complexity\nversion = {}\n", env!("CARGO_PKG_VERSION"));
    let _ = writeln!(s, "K = {}\nN = {}\nL = {}\noutputs = complexity.csv,complexity_ratios.csv", cfg.k, cfg.n, cfg.l);
    write_file(&manifest, &s)?;
    let mut all = files;
    all.push(manifest);
    Ok(all)
}
