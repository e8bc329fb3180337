use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ComplexityScheme {
    NcOfdm,
    NcspOfdm,
    LowInterference,
}

impl ComplexityScheme {
    pub const ALL: [ComplexityScheme; 3] = [
        ComplexityScheme::NcOfdm,
        ComplexityScheme::NcspOfdm,
        ComplexityScheme::LowInterference,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ComplexityScheme::NcOfdm => "nc_ofdm",
            ComplexityScheme::NcspOfdm => "ncsp_ofdm",
            ComplexityScheme::LowInterference => "low_interference",
        }
    }
}

/// Real multiplications and additions per symbol.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ComplexityReport {
    pub scheme: ComplexityScheme,
    pub real_mults: u64,
    pub real_adds: u64,
}

impl ComplexityReport {
    pub fn total(&self) -> u64 {
        self.real_mults + self.real_adds
    }
}

/// Leading-order operation counts per symbol:
///
/// | scheme           | multiplications   | additions               |
/// |------------------|-------------------|-------------------------|
/// | nc_ofdm          | 4(N+1)K           | 2(N+1)(2K−1)            |
/// | ncsp_ofdm        | 8(N+1)K           | 8(N+1)K − 4(N+1)        |
/// | low_interference | 2NK + (N+1)L      | (N+1)(2K + L + N − 2)   |
pub fn complexity_counts(scheme: ComplexityScheme, k: u64, n: u64, l: u64) -> Result<ComplexityReport> {
    if k == 0 || l == 0 {
        return Err(Error::invalid(format!("need K >= 1 and L >= 1, got K={k}, L={l}")));
    }
    let r = n + 1;
    let (real_mults, real_adds) = match scheme {
        ComplexityScheme::NcOfdm => (4 * r * k, 2 * r * (2 * k - 1)),
        ComplexityScheme::NcspOfdm => (8 * r * k, 8 * r * k - 4 * r),
        // 2K + L + N − 2 >= 1 for K, L >= 1
        ComplexityScheme::LowInterference => (2 * n * k + r * l, r * (2 * k + l + n - 2)),
    };
    Ok(ComplexityReport {
        scheme,
        real_mults,
        real_adds,
    })
}
