//! Frequency-domain N-continuous precoding.
//!
//! `x̄_0 = x_0`, `x̄_i = (I − P) x_i + P Φᴴ x̄_{i−1}` with the projector
//! `P = Φᴴ Aᴴ (A Aᴴ)⁻¹ A Φ` and `A[n][r] = k_r^n`.

use crate::error::{Error, Result};
use crate::numerics::{ComplexMatrix, C64};
use crate::params::SystemParams;

#[derive(Debug, Clone)]
pub struct PrecoderContext {
    /// `(N+1)×K` constraint matrix. Row `n` holds `(k_r / s)^n` with
    /// `s = max |k_r|`; the row scaling leaves `P` unchanged.
    pub a: ComplexMatrix,
    /// Diagonal of Φ.
    pub phi: Vec<C64>,
    /// `K×K` projector.
    pub p: ComplexMatrix,
    pub i_minus_p: ComplexMatrix,
    // low-rank factors: P v = Bᴴ (G⁻¹ B v)
    b: ComplexMatrix,
    g_inv_b: ComplexMatrix,
}

pub fn build_precoder(params: &SystemParams) -> Result<PrecoderContext> {
    let k = params.k();
    let rank = params.n + 1;
    if k < rank {
        return Err(Error::invalid(format!(
            "frequency-domain precoding needs K >= N+1, got K={k}, N={}",
            params.n
        )));
    }
    let scale = params.subcarriers().iter().map(|k| k.unsigned_abs()).max().unwrap_or(0).max(1) as f64;
    // 0^0 = 1 via powi(0)
    let a = ComplexMatrix::from_fn(rank, k, |n, r| {
        C64::new((params.subcarriers()[r] as f64 / scale).powi(n as i32), 0.0)
    });
    let phi = params.phase_diag();
    let b = a.scale_columns(&phi)?;
    let gram = b.matmul(&b.adjoint())?;
    let g_inv_b = gram.inverse("A·Aᴴ")?.matmul(&b)?;
    let p = b.adjoint().matmul(&g_inv_b)?;
    let i_minus_p = ComplexMatrix::identity(k).sub(&p)?;
    Ok(PrecoderContext {
        a,
        phi,
        p,
        i_minus_p,
        b,
        g_inv_b,
    })
}

impl PrecoderContext {
    pub fn k(&self) -> usize {
        self.phi.len()
    }

    /// `P v` through the rank-(N+1) factorisation.
    pub fn project(&self, v: &[C64]) -> Vec<C64> {
        let coeffs = self.g_inv_b.matvec_unchecked(v);
        let bh = &self.b;
        (0..bh.cols())
            .map(|c| (0..bh.rows()).map(|r| bh[(r, c)].conj() * coeffs[r]).sum())
            .collect()
    }

    /// One recursion step: `x̄ = x − P(x − Φᴴ x̄_prev)`.
    pub fn precode_next(&self, x: &[C64], prev: Option<&[C64]>) -> Result<Vec<C64>> {
        if x.len() != self.k() {
            return Err(Error::invalid(format!("symbol has {} entries, expected K={}", x.len(), self.k())));
        }
        let Some(prev) = prev else {
            return Ok(x.to_vec());
        };
        let diff: Vec<C64> = x
            .iter()
            .zip(prev)
            .zip(&self.phi)
            .map(|((xi, pi), ph)| xi - ph.conj() * pi)
            .collect();
        let corr = self.project(&diff);
        Ok(x.iter().zip(corr).map(|(xi, c)| xi - c).collect())
    }
}

/// Applies the recursion to a whole stream, starting from `x̄_0 = x_0`.
pub fn precode_stream(xs: &[Vec<C64>], ctx: &PrecoderContext) -> Result<Vec<Vec<C64>>> {
    if xs.is_empty() {
        return Err(Error::invalid("precode_stream needs at least one symbol"));
    }
    let mut out: Vec<Vec<C64>> = Vec::with_capacity(xs.len());
    for x in xs {
        let next = ctx.precode_next(x, out.last().map(Vec::as_slice))?;
        out.push(next);
    }
    Ok(out)
}

/// Stateful form of [`precode_stream`] for streaming transmitters.
#[derive(Debug, Clone)]
pub struct NcPrecoder<'a> {
    ctx: &'a PrecoderContext,
    prev: Option<Vec<C64>>,
}

impl<'a> NcPrecoder<'a> {
    pub fn new(ctx: &'a PrecoderContext) -> Self {
        NcPrecoder { ctx, prev: None }
    }

    pub fn push(&mut self, x: &[C64]) -> Result<Vec<C64>> {
        let out = self.ctx.precode_next(x, self.prev.as_deref())?;
        self.prev = Some(out.clone());
        Ok(out)
    }
}
