//! Low-interference time-domain smoothing.
//!
//! Each CP-prefixed symbol gets a short correction `w_i` on its first `L`
//! samples so that the transmitted stream and its first `N` derivatives are
//! continuous across every symbol junction. The correction is a combination
//! of `N+1` windowed basis pulses
//!
//! ```text
//! w_i(ℓ) = Σ_n b_{i,n} f^{(n)}(ℓ) g(ℓ),   ℓ = 0 … L−1
//! f^{(n)}(ℓ) = (1/M)(j2π/M)^n Σ_r k_r^n e^{jψ k_r} e^{j2π k_r ℓ / M}
//! ```
//!
//! and `b_i = P_f̃⁻¹ (P₁ x_{i−1} − P₂ x_i)`. The basis phase `ψ` depends on
//! [`BasisAlignment`]. After the last data symbol a trailing symbol holding
//! only `w_{M_s}` (computed against `x = 0`) is emitted.

mod window;

pub use window::{WindowKind, WindowSpec};

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::exec::{map_indexed, Exec};
use crate::numerics::{ComplexMatrix, C64, ZERO};
use crate::ofdm::{modulate, TimeSymbol};
use crate::params::SystemParams;

/// Where the basis pulses `f^{(n)}` peak relative to the smoother support.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum BasisAlignment {
    /// Pulses peak at the junction (`ℓ = 0`, `ψ = 0`).
    #[default]
    Junction,
    /// Pulses peak at the start of the core symbol (`ℓ = M_cp`, `ψ = φ`).
    /// Numerically degenerate whenever `K·M_cp/M` is an integer.
    CoreStart,
}

impl BasisAlignment {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "junction" => Ok(BasisAlignment::Junction),
            "core_start" | "core-start" => Ok(BasisAlignment::CoreStart),
            other => Err(Error::invalid(format!("unknown basis alignment `{other}`"))),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            BasisAlignment::Junction => "junction",
            BasisAlignment::CoreStart => "core_start",
        }
    }

    fn phase(self, p: &SystemParams) -> f64 {
        match self {
            BasisAlignment::Junction => 0.0,
            BasisAlignment::CoreStart => p.phi(),
        }
    }
}

/// `f^{(ñ)}(ℓ)`; `ell` may be fractional to evaluate the continuous pulse.
pub fn basis_f(n_tilde: usize, ell: f64, p: &SystemParams, align: BasisAlignment) -> C64 {
    let m = p.m as f64;
    let psi = align.phase(p);
    let sum: C64 = p
        .subcarriers()
        .iter()
        .map(|&k| {
            let kf = k as f64;
            C64::from_polar(kf.powi(n_tilde as i32), psi * kf + 2.0 * PI * kf * ell / m)
        })
        .sum();
    C64::new(0.0, 2.0 * PI / m).powi(n_tilde as i32) * sum / m
}

/// Binomial coefficient for the small orders used here.
pub(crate) fn binomial(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// `(P₁, P₂)` with `P₁[n][r] = (1/M)(j2π k_r/M)^n` and `P₂ = P₁Φ`.
///
/// `P₁ x` is the vector of derivatives `n = 0 … order` of the symbol at its
/// tail (`m = M`), `P₂ x` the same at its head (`m = −M_cp`).
pub fn edge_operators(p: &SystemParams, order: usize) -> (ComplexMatrix, ComplexMatrix) {
    let m = p.m as f64;
    let p1 = ComplexMatrix::from_fn(order + 1, p.k(), |n, r| {
        C64::new(0.0, 2.0 * PI * p.subcarriers()[r] as f64 / m).powi(n as i32) / m
    });
    let p2 = p1.scale_columns(&p.phase_diag()).expect("K columns");
    (p1, p2)
}

/// Precomputed matrices for smoothing a stream with fixed parameters.
#[derive(Debug, Clone)]
pub struct SmootherContext {
    pub params: SystemParams,
    pub window: WindowSpec,
    pub alignment: BasisAlignment,
    /// `L×(N+1)`; column `n` is `f^{(n)}(ℓ)·g(ℓ)`.
    pub q: ComplexMatrix,
    /// `P_f̃[n][n'] = Σ_j C(n,j) f^{(n'+j)}(0) g^{(n−j)}(0)`.
    pub pf: ComplexMatrix,
    pub pf_inv: ComplexMatrix,
    pub p1: ComplexMatrix,
    pub p2: ComplexMatrix,
    /// `f^{(j)}(0)` for `j = 0 … 2N`.
    pub basis_table: Vec<C64>,
}

/// Coefficients `b_{i,0} … b_{i,N}` of one smoothing pulse.
#[derive(Debug, Clone, PartialEq)]
pub struct SmoothCoeffs(pub Vec<C64>);

impl SmoothCoeffs {
    pub fn zeros(n: usize) -> Self {
        SmoothCoeffs(vec![ZERO; n + 1])
    }

    pub fn as_slice(&self) -> &[C64] {
        &self.0
    }
}

pub fn build_smoother(p: &SystemParams, kind: WindowKind) -> Result<SmootherContext> {
    build_smoother_aligned(p, kind, BasisAlignment::default())
}

pub fn build_smoother_aligned(
    p: &SystemParams,
    kind: WindowKind,
    alignment: BasisAlignment,
) -> Result<SmootherContext> {
    let n = p.n;
    if p.l < 2 * n + 2 {
        return Err(Error::invalid(format!(
            "smoother support L={} too short for N={n}: need L >= 2N+2 = {}",
            p.l,
            2 * n + 2
        )));
    }
    if p.k() <= n {
        return Err(Error::invalid(format!("need K > N, got K={}, N={n}", p.k())));
    }
    let window = WindowSpec::new(kind, p)?;
    let basis_table: Vec<C64> = (0..=2 * n).map(|j| basis_f(j, 0.0, p, alignment)).collect();

    let pf = ComplexMatrix::from_fn(n + 1, n + 1, |row, col| {
        (0..=row)
            .map(|j| basis_table[col + j] * (binomial(row, j) * window.derivative_table[row - j]))
            .sum()
    });
    // Equilibrate by the largest attainable |f^{(n)}| so the singularity test
    // sees the basis scale rather than the (possibly tiny) matrix entries.
    let m = p.m as f64;
    let reach: Vec<f64> = (0..=n)
        .map(|j| {
            let s: f64 = p.subcarriers().iter().map(|&k| (k.unsigned_abs() as f64).powi(j as i32)).sum();
            (2.0 * PI / m).powi(j as i32) * s / m
        })
        .collect();
    let scaled = ComplexMatrix::from_fn(n + 1, n + 1, |r, c| pf[(r, c)] / (reach[r] * reach[c]));
    let pf_inv = scaled.inverse_with_scale("P_f̃", 1.0).map_err(|e| match e {
        Error::Singular {
            matrix, pivot, scale, ..
        } => Error::Singular {
            matrix,
            pivot,
            scale,
            hint: "; try a longer support L or a different window",
        },
        other => other,
    })?;
    let pf_inv = ComplexMatrix::from_fn(n + 1, n + 1, |r, c| pf_inv[(r, c)] / (reach[r] * reach[c]));

    let q = ComplexMatrix::from_fn(p.l, n + 1, |ell, col| {
        basis_f(col, ell as f64, p, alignment) * window.value(ell as f64)
    });
    let (p1, p2) = edge_operators(p, n);
    Ok(SmootherContext {
        params: p.clone(),
        window,
        alignment,
        q,
        pf,
        pf_inv,
        p1,
        p2,
        basis_table,
    })
}

impl SmootherContext {
    pub fn order(&self) -> usize {
        self.params.n
    }

    /// Smoothing signal `w = Q_f̃ b` on the support.
    pub fn smooth_signal(&self, b: &SmoothCoeffs) -> Vec<C64> {
        self.q.matvec_unchecked(&b.0)
    }

    /// Continuous-index evaluation of `w(ℓ)` for `0 ≤ ℓ ≤ L−1`.
    pub fn smooth_signal_at(&self, b: &SmoothCoeffs, ell: f64) -> C64 {
        let g = self.window.value(ell);
        b.0.iter()
            .enumerate()
            .map(|(n, &bn)| bn * basis_f(n, ell, &self.params, self.alignment) * g)
            .sum()
    }

    /// `w^{(n)}(0)` for `n = 0 … N`, expanded by the product rule from the
    /// basis and window derivatives directly (independent of `P_f̃`).
    pub fn smooth_derivatives_at_start(&self, b: &SmoothCoeffs) -> Vec<C64> {
        let p = &self.params;
        (0..=p.n)
            .map(|n| {
                b.0.iter()
                    .enumerate()
                    .map(|(col, &bc)| {
                        let d: C64 = (0..=n)
                            .map(|j| {
                                basis_f(col + j, 0.0, p, self.alignment)
                                    * (binomial(n, j) * self.window.derivative(n - j, 0.0))
                            })
                            .sum();
                        bc * d
                    })
                    .sum()
            })
            .collect()
    }
}

fn check_len(x: &[C64], ctx: &SmootherContext) -> Result<()> {
    if x.len() != ctx.params.k() {
        return Err(Error::invalid(format!("symbol has {} entries, expected K={}", x.len(), ctx.params.k())));
    }
    Ok(())
}

/// `b = P_f̃⁻¹ (P₁ x_prev − P₂ x_cur)`.
pub fn smooth_coeffs(x_prev: &[C64], x_cur: &[C64], ctx: &SmootherContext) -> Result<SmoothCoeffs> {
    check_len(x_prev, ctx)?;
    check_len(x_cur, ctx)?;
    let tail = ctx.p1.matvec_unchecked(x_prev);
    let head = ctx.p2.matvec_unchecked(x_cur);
    let rhs: Vec<C64> = tail.iter().zip(&head).map(|(a, b)| a - b).collect();
    Ok(SmoothCoeffs(ctx.pf_inv.matvec_unchecked(&rhs)))
}

/// Coefficients for every junction of a stream, including the trailing one
/// (`M_s + 1` entries; `x_{−1} = 0` and `x_{M_s} = 0`).
pub fn stream_coeffs(xs: &[Vec<C64>], ctx: &SmootherContext) -> Result<Vec<SmoothCoeffs>> {
    stream_coeffs_with(Exec::default(), xs, ctx)
}

pub fn stream_coeffs_with(exec: Exec, xs: &[Vec<C64>], ctx: &SmootherContext) -> Result<Vec<SmoothCoeffs>> {
    let zero = vec![ZERO; ctx.params.k()];
    map_indexed(exec, xs.len() + 1, |i| {
        let prev = if i == 0 { &zero } else { &xs[i - 1] };
        let cur = xs.get(i).unwrap_or(&zero);
        smooth_coeffs(prev, cur, ctx)
    })
    .into_iter()
    .collect()
}

/// Overlays the smoothing pulses on a modulated stream.
///
/// Returns `M_s + 1` symbols: symbol `i < M_s` has `Q_f̃ b_i` added to its first
/// `L` samples, and a trailing symbol carries `Q_f̃ b_{M_s}` zero-padded.
pub fn apply_smoother(ys: &[TimeSymbol], xs: &[Vec<C64>], ctx: &SmootherContext) -> Result<Vec<TimeSymbol>> {
    apply_smoother_with(Exec::default(), ys, xs, ctx)
}

pub fn apply_smoother_with(
    exec: Exec,
    ys: &[TimeSymbol],
    xs: &[Vec<C64>],
    ctx: &SmootherContext,
) -> Result<Vec<TimeSymbol>> {
    if ys.len() != xs.len() {
        return Err(Error::invalid(format!(
            "{} time symbols but {} frequency symbols",
            ys.len(),
            xs.len()
        )));
    }
    let p = &ctx.params;
    if let Some(bad) = ys.iter().find(|y| y.len() != p.symbol_len()) {
        return Err(Error::invalid(format!("time symbol of length {}, expected {}", bad.len(), p.symbol_len())));
    }
    let bs = stream_coeffs_with(exec, xs, ctx)?;
    let zero = TimeSymbol::zeros(p);
    Ok(map_indexed(exec, bs.len(), |i| {
        let mut out = ys.get(i).unwrap_or(&zero).clone();
        for (s, w) in out.samples.iter_mut().zip(ctx.smooth_signal(&bs[i])) {
            *s += w;
        }
        out
    }))
}

/// Streaming transmitter: modulates and smooths one symbol at a time.
#[derive(Debug, Clone)]
pub struct LiSmoother<'a> {
    ctx: &'a SmootherContext,
    prev: Vec<C64>,
}

impl<'a> LiSmoother<'a> {
    pub fn new(ctx: &'a SmootherContext) -> Self {
        LiSmoother {
            ctx,
            prev: vec![ZERO; ctx.params.k()],
        }
    }

    pub fn push(&mut self, x: &[C64]) -> Result<TimeSymbol> {
        let b = smooth_coeffs(&self.prev, x, self.ctx)?;
        let mut y = modulate(x, &self.ctx.params)?;
        for (s, w) in y.samples.iter_mut().zip(self.ctx.smooth_signal(&b)) {
            *s += w;
        }
        self.prev = x.to_vec();
        Ok(y)
    }

    /// The trailing smooth-only symbol.
    pub fn finish(self) -> Result<TimeSymbol> {
        let zero = vec![ZERO; self.ctx.params.k()];
        let b = smooth_coeffs(&self.prev, &zero, self.ctx)?;
        let mut y = TimeSymbol::zeros(&self.ctx.params);
        for (s, w) in y.samples.iter_mut().zip(self.ctx.smooth_signal(&b)) {
            *s = w;
        }
        Ok(y)
    }
}

/// Derivative mismatch at one junction, orders `0 … N`.
#[derive(Debug, Clone, PartialEq)]
pub struct JunctionResidual {
    pub absolute: Vec<f64>,
    /// `absolute` over the larger data-only one-sided value; zero when the
    /// residual is exactly zero.
    pub relative: Vec<f64>,
}

impl JunctionResidual {
    pub fn max_relative(&self) -> f64 {
        self.relative.iter().copied().fold(0.0, f64::max)
    }
}

/// Compares one-sided derivatives at a junction. `w_head` holds the smoothing
/// derivatives at the head of the right-hand symbol, if any.
pub fn edge_mismatch(
    x_prev: &[C64],
    x_cur: &[C64],
    w_head: Option<&[C64]>,
    p1: &ComplexMatrix,
    p2: &ComplexMatrix,
) -> JunctionResidual {
    let left = p1.matvec_unchecked(x_prev);
    let data_right = p2.matvec_unchecked(x_cur);
    let mut right = data_right.clone();
    if let Some(w) = w_head {
        right.iter_mut().zip(w).for_each(|(r, w)| *r += w);
    }
    let absolute: Vec<f64> = left.iter().zip(&right).map(|(a, b)| (a - b).norm()).collect();
    // scale by the data-only one-sided values, which the smoothing drives to agree
    let relative = absolute
        .iter()
        .zip(left.iter().zip(&data_right))
        .map(|(&d, (a, b))| {
            let scale = a.norm().max(b.norm());
            if d == 0.0 {
                0.0
            } else {
                d / scale
            }
        })
        .collect();
    JunctionResidual { absolute, relative }
}

/// Residuals of the N-continuity constraint at every junction of a smoothed
/// stream. `bs[i]` smooths the junction before symbol `i`; junction `M_s`
/// (if `bs` has `M_s + 1` entries) is the trailing one.
///
/// The left side uses the tail derivatives of `y_{i−1}` (the smoothing never
/// reaches the tail because `L ≤ M_cp`); the right side adds the product-rule
/// derivatives of `w_i` to the head derivatives of `y_i`.
pub fn junction_residuals(xs: &[Vec<C64>], bs: &[SmoothCoeffs], ctx: &SmootherContext) -> Vec<JunctionResidual> {
    let zero = vec![ZERO; ctx.params.k()];
    bs.iter()
        .enumerate()
        .map(|(i, b)| {
            let prev = if i == 0 { &zero } else { &xs[i - 1] };
            let cur = xs.get(i).unwrap_or(&zero);
            let w = ctx.smooth_derivatives_at_start(b);
            edge_mismatch(prev, cur, Some(&w), &ctx.p1, &ctx.p2)
        })
        .collect()
}

/// Residuals for an unsmoothed stream (plain or frequency-domain precoded),
/// junctions `0 … M_s−1`, the first against `x_{−1} = 0`.
pub fn plain_junction_residuals(xs: &[Vec<C64>], p: &SystemParams, order: usize) -> Vec<JunctionResidual> {
    let (p1, p2) = edge_operators(p, order);
    let zero = vec![ZERO; p.k()];
    (0..xs.len())
        .map(|i| {
            let prev = if i == 0 { &zero } else { &xs[i - 1] };
            edge_mismatch(prev, &xs[i], None, &p1, &p2)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::max_abs_diff;
    use crate::qam::QamOrder;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn qam_symbol(rng: &mut ChaCha8Rng, k: usize) -> Vec<C64> {
        (0..k).map(|_| QamOrder::Qam16.point(rng.random_range(0..16))).collect()
    }

    #[test]
    fn basis_single_dc_subcarrier() {
        let p = SystemParams::with_subcarriers(vec![0], 8, 4, 0, 2, 15e3).unwrap();
        for align in [BasisAlignment::Junction, BasisAlignment::CoreStart] {
            assert!((basis_f(0, 0.0, &p, align) - C64::new(0.125, 0.0)).norm() < 1e-15);
            for ell in 0..2 {
                assert_eq!(basis_f(1, ell as f64, &p, align), ZERO);
            }
        }
    }

    #[test]
    fn basis_single_subcarrier_direct_formula() {
        let p = SystemParams::with_subcarriers(vec![1], 8, 2, 0, 2, 15e3).unwrap();
        let j2pi8 = C64::new(0.0, 2.0 * PI / 8.0);
        let core = basis_f(1, 0.0, &p, BasisAlignment::CoreStart);
        let want = j2pi8 * C64::from_polar(1.0, p.phi()) / 8.0;
        assert!((core - want).norm() < 1e-15);
        let junction = basis_f(1, 0.0, &p, BasisAlignment::Junction);
        assert!((junction - j2pi8 / 8.0).norm() < 1e-15);
    }

    #[test]
    fn core_start_alignment_is_degenerate_for_dc_order() {
        // K·M_cp/M = 18 is an integer, so f(0) sums a full period of roots of unity
        let p = SystemParams::lte_like(0);
        let err = build_smoother_aligned(&p, WindowKind::Blackman, BasisAlignment::CoreStart).unwrap_err();
        assert!(matches!(err, Error::Singular { .. }), "{err}");
        assert!(err.to_string().contains("longer support"));
        assert!(build_smoother(&p, WindowKind::Blackman).is_ok());
    }

    #[test]
    fn product_rule_entries() {
        let p = SystemParams::new(16, 64, 40, 0, 36, 15e3).unwrap();
        let ctx = build_smoother(&p, WindowKind::Blackman).unwrap();
        assert_eq!(ctx.pf.shape(), (1, 1));
        assert!((ctx.pf[(0, 0)] - basis_f(0, 0.0, &p, ctx.alignment)).norm() < 1e-15);

        let ctx = build_smoother(&p.with_order(2), WindowKind::Blackman).unwrap();
        // g(0) = 1, g'(0) = 0
        assert!((ctx.pf[(1, 0)] - ctx.basis_table[1]).norm() < 1e-15);
        assert!((ctx.p2.sub(&ctx.p1.scale_columns(&p.phase_diag()).unwrap())).unwrap().max_abs() == 0.0);
    }

    #[test]
    fn support_and_order_checks() {
        let p = SystemParams::new(16, 64, 40, 3, 7, 15e3).unwrap();
        assert!(build_smoother(&p, WindowKind::Blackman).is_err());
        let p = SystemParams::with_subcarriers(vec![1, 2], 64, 40, 2, 36, 15e3).unwrap();
        assert!(build_smoother(&p, WindowKind::Blackman).is_err());
    }

    #[test]
    fn q_matrix_layout() {
        let p = SystemParams::new(16, 64, 40, 2, 36, 15e3).unwrap();
        let ctx = build_smoother(&p, WindowKind::Blackman).unwrap();
        assert_eq!(ctx.q.shape(), (36, 3));
        for c in 0..3 {
            assert!(ctx.q[(35, c)].norm() < 1e-15);
            let want = basis_f(c, 10.0, &p, ctx.alignment) * ctx.window.value(10.0);
            assert!((ctx.q[(10, c)] - want).norm() < 1e-15);
        }
    }

    #[test]
    fn zero_and_already_continuous_inputs_give_zero_coeffs() {
        let p = SystemParams::new(16, 64, 40, 2, 36, 15e3).unwrap();
        let ctx = build_smoother(&p, WindowKind::Blackman).unwrap();
        let zero = vec![ZERO; 16];
        assert!(smooth_coeffs(&zero, &zero, &ctx).unwrap().0.iter().all(|b| *b == ZERO));
        // x_cur = Φᴴ x_prev makes P₂ x_cur = P₁ x_prev
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let prev = qam_symbol(&mut rng, 16);
        let cur: Vec<C64> = prev.iter().zip(p.phase_diag()).map(|(x, ph)| x * ph.conj()).collect();
        let b = smooth_coeffs(&prev, &cur, &ctx).unwrap();
        assert!(b.0.iter().all(|v| v.norm() < 1e-12));
    }

    #[test]
    fn constraint_residual_small_system() {
        let p = SystemParams::new(16, 64, 40, 2, 36, 15e3).unwrap();
        let ctx = build_smoother(&p, WindowKind::Blackman).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..20 {
            let xs = vec![qam_symbol(&mut rng, 16), qam_symbol(&mut rng, 16)];
            let bs = stream_coeffs(&xs, &ctx).unwrap();
            for r in junction_residuals(&xs, &bs, &ctx) {
                assert!(r.max_relative() <= 1e-9, "{r:?}");
            }
        }
    }

    #[test]
    fn locality_and_trailing_symbol() {
        let p = SystemParams::new(16, 64, 40, 1, 20, 15e3).unwrap();
        let ctx = build_smoother(&p, WindowKind::Hanning).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let xs: Vec<Vec<C64>> = (0..5).map(|_| qam_symbol(&mut rng, 16)).collect();
        let ys: Vec<TimeSymbol> = xs.iter().map(|x| modulate(x, &p).unwrap()).collect();
        let out = apply_smoother(&ys, &xs, &ctx).unwrap();
        assert_eq!(out.len(), 6);
        for (a, b) in out.iter().zip(&ys) {
            assert_eq!(a.samples[p.l..], b.samples[p.l..]);
        }
        assert!(out[5].samples[p.l..].iter().all(|s| *s == ZERO));
        assert!(out[5].samples[..p.l].iter().any(|s| *s != ZERO));

        // the streaming transmitter produces the same samples
        let mut tx = LiSmoother::new(&ctx);
        for (i, x) in xs.iter().enumerate() {
            assert!(max_abs_diff(&tx.push(x).unwrap().samples, &out[i].samples) < 1e-15);
        }
        assert!(max_abs_diff(&tx.finish().unwrap().samples, &out[5].samples) < 1e-15);
    }

    #[test]
    fn single_zero_symbol_stream() {
        let p = SystemParams::new(16, 64, 40, 1, 20, 15e3).unwrap();
        let ctx = build_smoother(&p, WindowKind::Blackman).unwrap();
        let xs = vec![vec![ZERO; 16]];
        let ys = vec![modulate(&xs[0], &p).unwrap()];
        let out = apply_smoother(&ys, &xs, &ctx).unwrap();
        assert_eq!(out, vec![ys[0].clone(), TimeSymbol::zeros(&p)]);
        assert!(apply_smoother(&ys, &[], &ctx).is_err());
    }

    #[test]
    fn plain_stream_is_discontinuous() {
        let p = SystemParams::new(16, 64, 40, 2, 36, 15e3).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let xs: Vec<Vec<C64>> = (0..3).map(|_| qam_symbol(&mut rng, 16)).collect();
        for r in plain_junction_residuals(&xs, &p, 2) {
            assert!(r.relative.iter().all(|&v| v > 1e-2), "{r:?}");
        }
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(4, 2), 6.0);
        assert_eq!(binomial(3, 0), 1.0);
        assert_eq!(binomial(2, 3), 0.0);
    }
}
