//! Small complex linear algebra and the DFT pair used across the crate.
//!
//! Scaling convention: `idft` carries the `1/M` factor (subcarriers to time),
//! `dft` is unscaled, so `dft(idft(x)) == x`.

use std::cell::RefCell;
use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};

pub type C64 = Complex64;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);

/// Relative pivot threshold below which a matrix is reported as singular.
pub const SINGULAR_PIVOT_RATIO: f64 = 1e-12;

type Plans = (Arc<dyn Fft<f64>>, Arc<dyn Fft<f64>>);

thread_local! {
    static PLANS: RefCell<(FftPlanner<f64>, HashMap<usize, Plans>)> =
        RefCell::new((FftPlanner::new(), HashMap::new()));
}

fn plans(len: usize) -> Plans {
    PLANS.with(|cell| {
        let mut guard = cell.borrow_mut();
        let (planner, cache) = &mut *guard;
        cache
            .entry(len)
            .or_insert_with(|| (planner.plan_fft_forward(len), planner.plan_fft_inverse(len)))
            .clone()
    })
}

/// In-place unscaled forward transform.
pub fn dft_in_place(buf: &mut [C64]) -> Result<()> {
    if buf.is_empty() {
        return Err(Error::invalid("dft of an empty vector"));
    }
    plans(buf.len()).0.process(buf);
    Ok(())
}

/// In-place inverse transform including the `1/M` factor.
pub fn idft_in_place(buf: &mut [C64]) -> Result<()> {
    if buf.is_empty() {
        return Err(Error::invalid("idft of an empty vector"));
    }
    plans(buf.len()).1.process(buf);
    let scale = 1.0 / buf.len() as f64;
    buf.iter_mut().for_each(|v| *v *= scale);
    Ok(())
}

/// `X(k) = Σ_m x(m) e^{-j2πkm/M}`.
pub fn dft(signal: &[C64]) -> Result<Vec<C64>> {
    let mut out = signal.to_vec();
    dft_in_place(&mut out)?;
    Ok(out)
}

/// `x(m) = (1/M) Σ_k X(k) e^{j2πkm/M}`.
pub fn idft(spectrum: &[C64]) -> Result<Vec<C64>> {
    let mut out = spectrum.to_vec();
    idft_in_place(&mut out)?;
    Ok(out)
}

/// Direct O(M²) evaluation of [`dft`]; kept as a reference implementation.
pub fn naive_dft(signal: &[C64]) -> Result<Vec<C64>> {
    naive_transform(signal, -1.0, 1.0)
}

/// Direct O(M²) evaluation of [`idft`].
pub fn naive_idft(spectrum: &[C64]) -> Result<Vec<C64>> {
    naive_transform(spectrum, 1.0, 1.0 / spectrum.len().max(1) as f64)
}

fn naive_transform(input: &[C64], sign: f64, scale: f64) -> Result<Vec<C64>> {
    let m = input.len();
    if m == 0 {
        return Err(Error::invalid("transform of an empty vector"));
    }
    Ok((0..m)
        .map(|k| {
            input
                .iter()
                .enumerate()
                .map(|(n, &x)| {
                    // reduce the product modulo M before forming the angle
                    let idx = (k * n) % m;
                    x * C64::from_polar(1.0, sign * 2.0 * std::f64::consts::PI * idx as f64 / m as f64)
                })
                .sum::<C64>()
                * scale
        })
        .collect())
}

/// Dense row-major complex matrix.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            writeln!(f, "  {:?}", self.row(r))?;
        }
        write!(f, "]")
    }
}

impl ComplexMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        ComplexMatrix {
            rows,
            cols,
            data: vec![ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = ONE;
        }
        m
    }

    pub fn from_vec(rows: usize, cols: usize, data: Vec<C64>) -> Result<Self> {
        if rows == 0 || cols == 0 || rows * cols != data.len() {
            return Err(Error::DimensionMismatch(format!(
                "{rows}x{cols} matrix from {} entries",
                data.len()
            )));
        }
        Ok(ComplexMatrix { rows, cols, data })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        ComplexMatrix { rows, cols, data }
    }

    pub fn diag(values: &[C64]) -> Self {
        let mut m = Self::zeros(values.len(), values.len());
        for (i, &v) in values.iter().enumerate() {
            m[(i, i)] = v;
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn as_slice(&self) -> &[C64] {
        &self.data
    }

    pub fn row(&self, r: usize) -> &[C64] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<C64> {
        (0..self.rows).map(|r| self[(r, c)]).collect()
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self[(c, r)].conj())
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    pub fn trace(&self) -> C64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        if self.shape() != other.shape() {
            return Err(Error::DimensionMismatch(format!(
                "{:?} - {:?}",
                self.shape(),
                other.shape()
            )));
        }
        Ok(ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect(),
        })
    }

    /// Multiplies every column `c` by `d[c]` (right product with a diagonal).
    pub fn scale_columns(&self, d: &[C64]) -> Result<Self> {
        if d.len() != self.cols {
            return Err(Error::DimensionMismatch(format!(
                "{:?} times diag of length {}",
                self.shape(),
                d.len()
            )));
        }
        Ok(Self::from_fn(self.rows, self.cols, |r, c| self[(r, c)] * d[c]))
    }

    pub fn matmul(&self, rhs: &Self) -> Result<Self> {
        if self.cols != rhs.rows {
            return Err(Error::DimensionMismatch(format!(
                "{:?} x {:?}",
                self.shape(),
                rhs.shape()
            )));
        }
        let mut out = Self::zeros(self.rows, rhs.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(r, k)];
                if a == ZERO {
                    continue;
                }
                let src = rhs.row(k);
                let dst = &mut out.data[r * rhs.cols..(r + 1) * rhs.cols];
                for (d, &b) in dst.iter_mut().zip(src) {
                    *d += a * b;
                }
            }
        }
        Ok(out)
    }

    pub fn matvec(&self, v: &[C64]) -> Result<Vec<C64>> {
        if self.cols != v.len() {
            return Err(Error::DimensionMismatch(format!(
                "{:?} x vector of length {}",
                self.shape(),
                v.len()
            )));
        }
        Ok(self.matvec_unchecked(v))
    }

    pub(crate) fn matvec_unchecked(&self, v: &[C64]) -> Vec<C64> {
        (0..self.rows)
            .map(|r| self.row(r).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// Solves `self · v = rhs` by LU with partial pivoting.
    ///
    /// `label` names the matrix in the singular-matrix error.
    pub fn solve(&self, rhs: &[C64], label: &str) -> Result<Vec<C64>> {
        let lu = Lu::factor_with_scale(self, label, self.max_abs())?;
        if rhs.len() != self.rows {
            return Err(Error::DimensionMismatch(format!(
                "{:?} system with rhs of length {}",
                self.shape(),
                rhs.len()
            )));
        }
        Ok(lu.solve(rhs))
    }

    pub fn inverse(&self, label: &str) -> Result<Self> {
        self.inverse_with_scale(label, self.max_abs())
    }

    /// Like [`inverse`](Self::inverse), but pivots are judged against the
    /// caller's `scale` instead of the largest entry.
    pub fn inverse_with_scale(&self, label: &str, scale: f64) -> Result<Self> {
        let lu = Lu::factor_with_scale(self, label, scale)?;
        let n = self.rows;
        let mut inv = Self::zeros(n, n);
        let mut e = vec![ZERO; n];
        for c in 0..n {
            e.iter_mut().for_each(|v| *v = ZERO);
            e[c] = ONE;
            for (r, v) in lu.solve(&e).into_iter().enumerate() {
                inv[(r, c)] = v;
            }
        }
        Ok(inv)
    }
}

impl std::ops::Index<(usize, usize)> for ComplexMatrix {
    type Output = C64;
    fn index(&self, (r, c): (usize, usize)) -> &C64 {
        &self.data[r * self.cols + c]
    }
}

impl std::ops::IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut C64 {
        &mut self.data[r * self.cols + c]
    }
}

struct Lu {
    n: usize,
    lu: Vec<C64>,
    perm: Vec<usize>,
}

impl Lu {
    fn factor_with_scale(a: &ComplexMatrix, label: &str, scale: f64) -> Result<Self> {
        if a.rows != a.cols {
            return Err(Error::DimensionMismatch(format!(
                "`{label}` must be square, got {:?}",
                a.shape()
            )));
        }
        let n = a.rows;
        let mut lu = a.data.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        for k in 0..n {
            let (p, pivot) = (k..n)
                .map(|r| (r, lu[r * n + k].norm()))
                .fold((k, -1.0), |best, cur| if cur.1 > best.1 { cur } else { best });
            if !(pivot > SINGULAR_PIVOT_RATIO * scale) {
                return Err(Error::Singular {
                    matrix: label.to_string(),
                    pivot,
                    scale,
                    hint: "",
                });
            }
            if p != k {
                for c in 0..n {
                    lu.swap(k * n + c, p * n + c);
                }
                perm.swap(k, p);
            }
            let d = lu[k * n + k];
            for r in k + 1..n {
                let factor = lu[r * n + k] / d;
                lu[r * n + k] = factor;
                for c in k + 1..n {
                    let t = lu[k * n + c];
                    lu[r * n + c] -= factor * t;
                }
            }
        }
        Ok(Lu { n, lu, perm })
    }

    fn solve(&self, rhs: &[C64]) -> Vec<C64> {
        let n = self.n;
        let mut x: Vec<C64> = self.perm.iter().map(|&p| rhs[p]).collect();
        for r in 0..n {
            for c in 0..r {
                let t = x[c];
                x[r] -= self.lu[r * n + c] * t;
            }
        }
        for r in (0..n).rev() {
            for c in r + 1..n {
                let t = x[c];
                x[r] -= self.lu[r * n + c] * t;
            }
            x[r] /= self.lu[r * n + r];
        }
        x
    }
}

pub fn norm_sqr(v: &[C64]) -> f64 {
    v.iter().map(|c| c.norm_sqr()).sum()
}

pub fn norm(v: &[C64]) -> f64 {
    norm_sqr(v).sqrt()
}

/// Largest absolute entry-wise difference.
pub fn max_abs_diff(a: &[C64], b: &[C64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}
