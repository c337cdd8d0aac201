//! Breakpoints, discretization and the precomputed lookup tables.
//!
//! Symbols are 0-based internally: symbol `a` of an alphabet of size `A`
//! covers `[lower(a), upper(a))` with `lower(0) = -inf` and
//! `upper(A - 1) = +inf`. Every table entry for a pair of symbols is the
//! distance between the nearest edges of their intervals, which keeps all
//! tables consistent with that single convention.

use std::f64::consts::{PI, SQRT_2};

use crate::error::{Error, Result};
use crate::tsax::{phi_max, trend_scale};

/// 0-based symbol index.
pub type Symbol = u16;

/// Largest supported alphabet (lookup tables stay below 4 MB of 32-bit cells).
pub const MAX_ALPHABET: usize = 1024;

/// Alphabet size `A`, validated to `2..=1024`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub struct Alphabet(usize);

impl Alphabet {
    pub fn new(size: usize) -> Result<Self> {
        if !(2..=MAX_ALPHABET).contains(&size) {
            return Err(Error::InvalidAlphabet(size));
        }
        Ok(Alphabet(size))
    }

    pub fn size(self) -> usize {
        self.0
    }

    /// Bits per symbol, fractional for non-powers of two.
    pub fn bits(self) -> f64 {
        (self.0 as f64).log2()
    }
}

/// Display form of a symbol: letters for small alphabets, 1-based numbers otherwise.
pub fn symbol_label(symbol: Symbol, alphabet_size: usize) -> String {
    if alphabet_size <= 26 {
        char::from(b'a' + symbol as u8).to_string()
    } else {
        (symbol as usize + 1).to_string()
    }
}

/// Sorted interval boundaries `b_1 < ... < b_{A-1}`.
#[derive(Debug, Clone, PartialEq)]
pub struct BreakpointVector {
    bounds: Vec<f64>,
}

impl BreakpointVector {
    /// Builds a vector from explicit bounds. An empty vector yields a
    /// single-symbol alphabet, which only degenerate code paths use.
    pub fn new(bounds: Vec<f64>) -> Result<Self> {
        if bounds.len() >= MAX_ALPHABET {
            return Err(Error::InvalidAlphabet(bounds.len() + 1));
        }
        let sorted = bounds.iter().all(|b| b.is_finite())
            && bounds.windows(2).all(|w| w[0] < w[1]);
        if !sorted {
            return Err(Error::UnsortedBreakpoints);
        }
        Ok(BreakpointVector { bounds })
    }

    pub fn bounds(&self) -> &[f64] {
        &self.bounds
    }

    pub fn alphabet_size(&self) -> usize {
        self.bounds.len() + 1
    }

    /// Lower edge of the interval of `symbol` (`-inf` for the first one).
    pub fn lower(&self, symbol: Symbol) -> f64 {
        match symbol as usize {
            0 => f64::NEG_INFINITY,
            s => self.bounds[s - 1],
        }
    }

    /// Upper edge of the interval of `symbol` (`+inf` for the last one).
    pub fn upper(&self, symbol: Symbol) -> f64 {
        self.bounds
            .get(symbol as usize)
            .copied()
            .unwrap_or(f64::INFINITY)
    }

    /// Symbol whose half-open interval contains `value`.
    pub fn symbol(&self, value: f64) -> Symbol {
        self.bounds.partition_point(|&b| b <= value) as Symbol
    }
}

/// Maps `value` onto its symbol under `breakpoints`.
pub fn discretize(value: f64, breakpoints: &BreakpointVector) -> Symbol {
    breakpoints.symbol(value)
}

/// Standard normal CDF.
pub fn normal_cdf(x: f64) -> f64 {
    0.5 * libm::erfc(-x / SQRT_2)
}

/// Standard normal quantile: Acklam's rational approximation followed by a
/// Halley step against the erfc-based CDF.
pub fn normal_quantile(p: f64) -> Result<f64> {
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::OutOfDomain(p));
    }
    if p == 0.5 {
        return Ok(0.0);
    }
    // Work in the lower tail so that p stays exactly representable.
    if p > 0.5 {
        return Ok(-lower_tail_quantile(1.0 - p));
    }
    Ok(lower_tail_quantile(p))
}

fn lower_tail_quantile(p: f64) -> f64 {
    const A: [f64; 6] = [
        -3.969_683_028_665_376e1,
        2.209_460_984_245_205e2,
        -2.759_285_104_469_687e2,
        1.383_577_518_672_69e2,
        -3.066_479_806_614_716e1,
        2.506_628_277_459_239,
    ];
    const B: [f64; 5] = [
        -5.447_609_879_822_406e1,
        1.615_858_368_580_409e2,
        -1.556_989_798_598_866e2,
        6.680_131_188_771_972e1,
        -1.328_068_155_288_572e1,
    ];
    const C: [f64; 6] = [
        -7.784_894_002_430_293e-3,
        -3.223_964_580_411_365e-1,
        -2.400_758_277_161_838,
        -2.549_732_539_343_734,
        4.374_664_141_464_968,
        2.938_163_982_698_783,
    ];
    const D: [f64; 4] = [
        7.784_695_709_041_462e-3,
        3.224_671_290_700_398e-1,
        2.445_134_137_142_996,
        3.754_408_661_907_416,
    ];
    const P_LOW: f64 = 0.02425;

    let x = if p < P_LOW {
        let q = (-2.0 * p.ln()).sqrt();
        (((((C[0] * q + C[1]) * q + C[2]) * q + C[3]) * q + C[4]) * q + C[5])
            / ((((D[0] * q + D[1]) * q + D[2]) * q + D[3]) * q + 1.0)
    } else {
        let q = p - 0.5;
        let r = q * q;
        (((((A[0] * r + A[1]) * r + A[2]) * r + A[3]) * r + A[4]) * r + A[5]) * q
            / (((((B[0] * r + B[1]) * r + B[2]) * r + B[3]) * r + B[4]) * r + 1.0)
    };

    let e = normal_cdf(x) - p;
    let u = e * (2.0 * PI).sqrt() * (x * x / 2.0).exp();
    x - u / (1.0 + x * u / 2.0)
}

/// Breakpoints splitting `N(0, sd)` into `alphabet` equiprobable regions.
pub fn gaussian_breakpoints(alphabet: usize, sd: f64) -> Result<BreakpointVector> {
    let alphabet = Alphabet::new(alphabet)?;
    if !(sd > 0.0 && sd.is_finite()) {
        return Err(Error::InvalidSd(sd));
    }
    let a = alphabet.size();
    let bounds = (1..a)
        .map(|k| normal_quantile(k as f64 / a as f64).map(|q| sd * q))
        .collect::<Result<Vec<_>>>()?;
    BreakpointVector::new(bounds)
}

/// Equal-width breakpoints over `[lo, hi]`.
pub fn uniform_breakpoints(alphabet: usize, lo: f64, hi: f64) -> Result<BreakpointVector> {
    let alphabet = Alphabet::new(alphabet)?;
    if !(lo < hi && lo.is_finite() && hi.is_finite()) {
        return Err(Error::InvalidRange { lo, hi });
    }
    let a = alphabet.size();
    let width = hi - lo;
    let bounds = (1..a).map(|k| lo + width * k as f64 / a as f64).collect();
    BreakpointVector::new(bounds)
}

/// Square table indexed by a pair of symbols.
#[derive(Debug, Clone, PartialEq)]
struct SquareTable {
    size: usize,
    entries: Vec<f64>,
}

impl SquareTable {
    fn build(size: usize, f: impl Fn(Symbol, Symbol) -> f64) -> Self {
        let mut entries = Vec::with_capacity(size * size);
        for a in 0..size {
            for b in 0..size {
                entries.push(f(a as Symbol, b as Symbol));
            }
        }
        SquareTable { size, entries }
    }

    #[inline]
    fn get(&self, a: Symbol, b: Symbol) -> f64 {
        self.entries[a as usize * self.size + b as usize]
    }
}

/// Minimum distance between the intervals of two symbols (SAX `cell`).
#[derive(Debug, Clone, PartialEq)]
pub struct CellTable(SquareTable);

impl CellTable {
    pub fn new(breakpoints: &BreakpointVector) -> Self {
        CellTable(SquareTable::build(breakpoints.alphabet_size(), |a, b| {
            let (lo, hi) = (a.min(b), a.max(b));
            if hi - lo <= 1 {
                0.0
            } else {
                breakpoints.lower(hi) - breakpoints.upper(lo)
            }
        }))
    }

    #[inline]
    pub fn get(&self, a: Symbol, b: Symbol) -> f64 {
        self.0.get(a, b)
    }

    pub fn alphabet_size(&self) -> usize {
        self.0.size
    }
}

pub fn build_cell_table(breakpoints: &BreakpointVector) -> CellTable {
    CellTable::new(breakpoints)
}

/// `lower(a) - upper(a')`, the smallest possible signed difference between a
/// value in interval `a` and a value in interval `a'`. Entries touching an
/// unbounded edge are `-inf`.
#[derive(Debug, Clone, PartialEq)]
pub struct SignedBoundTable(SquareTable);

impl SignedBoundTable {
    pub fn new(breakpoints: &BreakpointVector) -> Self {
        SignedBoundTable(SquareTable::build(breakpoints.alphabet_size(), |a, b| {
            breakpoints.lower(a) - breakpoints.upper(b)
        }))
    }

    #[inline]
    pub fn get(&self, a: Symbol, b: Symbol) -> f64 {
        self.0.get(a, b)
    }

    pub fn alphabet_size(&self) -> usize {
        self.0.size
    }
}

pub fn build_signed_bound_table(breakpoints: &BreakpointVector) -> SignedBoundTable {
    SignedBoundTable::new(breakpoints)
}

/// Minimum Euclidean distance between two full-length trend components whose
/// angles fall in the given trend symbols.
///
/// For a normalized series of length `T` the trend is determined by its angle
/// alone: `tr_t = tan(phi) * ((t - 1) - (T - 1) / 2)`. Two trends therefore
/// differ by `|tan(phi) - tan(phi')| * sqrt(T (T^2 - 1) / 12)`, and `tan` is
/// monotone, so the minimum over two non-adjacent intervals is attained at
/// their facing edges.
#[derive(Debug, Clone, PartialEq)]
pub struct TrendCellTable {
    table: SquareTable,
    series_len: usize,
}

impl TrendCellTable {
    pub fn new(breakpoints: &BreakpointVector, series_len: usize) -> Result<Self> {
        let limit = phi_max(series_len)?;
        if let Some(&value) = breakpoints.bounds().iter().find(|b| b.abs() >= limit) {
            return Err(Error::BreakpointOutOfRange { value, limit });
        }
        let kappa = trend_scale(series_len);
        let table = SquareTable::build(breakpoints.alphabet_size(), |a, b| {
            let (lo, hi) = (a.min(b), a.max(b));
            if hi - lo <= 1 {
                0.0
            } else {
                kappa * (breakpoints.lower(hi).tan() - breakpoints.upper(lo).tan())
            }
        });
        Ok(TrendCellTable { table, series_len })
    }

    #[inline]
    pub fn get(&self, a: Symbol, b: Symbol) -> f64 {
        self.table.get(a, b)
    }

    pub fn alphabet_size(&self) -> usize {
        self.table.size
    }

    pub fn series_len(&self) -> usize {
        self.series_len
    }
}

pub fn build_trend_cell_table(
    breakpoints: &BreakpointVector,
    series_len: usize,
) -> Result<TrendCellTable> {
    TrendCellTable::new(breakpoints, series_len)
}
