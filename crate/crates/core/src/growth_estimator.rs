//! Brute-force growth fitting.
//!
//! A positive sequence `a_n` is modelled as `log a_n = n log ρ + s log n + c`
//! and fitted by least squares after discarding a transient head. The fit
//! is the numerical counterpart of the exact answers in [`crate::exact_linalg`]
//! and is used to cross-check them.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::exact_linalg::ExactMatrix;

/// Shortest sequence (and shortest fitting window) accepted.
pub const MIN_LEN: usize = 8;

pub const DEFAULT_DROP_HEAD: f64 = 0.25;

pub const DEFAULT_T_GRID: [f64; 5] = [-1.0, -0.5, 0.0, 0.5, 1.0];

/// Residuals above this suggest that the limit in the model does not exist.
pub const RESIDUAL_CAVEAT: f64 = 0.1;

/// Natural logarithm of a positive big integer, valid far beyond `f64` range.
pub fn ln_bigint(x: &BigInt) -> f64 {
    let bits = x.bits();
    if bits <= 1000 {
        return x.to_f64().unwrap_or(f64::NAN).ln();
    }
    let shift = bits - 64;
    let top: BigInt = x >> shift as usize;
    top.to_f64().unwrap_or(f64::NAN).ln() + shift as f64 * std::f64::consts::LN_2
}

/// Natural logarithm of `|q|`; `-inf` for zero.
pub fn ln_abs(q: &BigRational) -> f64 {
    if q.is_zero() {
        return f64::NEG_INFINITY;
    }
    ln_bigint(&q.numer().abs()) - ln_bigint(q.denom())
}

/// A positive sequence `a_n`, `n = n_start, n_start + 1, ...`, stored as
/// `ln a_n` so that exponentially growing data never overflows.
#[derive(Clone, Debug, PartialEq)]
pub struct PositiveSequence {
    n_start: usize,
    logs: Vec<f64>,
}

impl PositiveSequence {
    pub fn new(n_start: usize, values: &[f64]) -> Result<Self> {
        let logs = values
            .iter()
            .enumerate()
            .map(|(i, &v)| {
                if v > 0.0 && v.is_finite() {
                    Ok(v.ln())
                } else {
                    Err(Error::NonPositiveValue { n: n_start + i })
                }
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_logs(n_start, logs)
    }

    pub fn from_logs(n_start: usize, logs: Vec<f64>) -> Result<Self> {
        if n_start == 0 {
            return Err(Error::InvalidInput("sequences are indexed from n >= 1".into()));
        }
        if let Some(i) = logs.iter().position(|l| !l.is_finite()) {
            return Err(Error::NonPositiveValue { n: n_start + i });
        }
        if logs.len() < MIN_LEN {
            return Err(Error::WindowTooShort {
                len: logs.len(),
                min: MIN_LEN,
            });
        }
        Ok(PositiveSequence { n_start, logs })
    }

    /// Exact positive rationals, `a_{n_start + i} = values[i]`.
    pub fn from_exact(n_start: usize, values: &[BigRational]) -> Result<Self> {
        let logs = values
            .iter()
            .enumerate()
            .map(|(i, v)| {
                if v.is_positive() {
                    Ok(ln_abs(v))
                } else {
                    Err(Error::NonPositiveValue { n: n_start + i })
                }
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_logs(n_start, logs)
    }

    pub fn n_start(&self) -> usize {
        self.n_start
    }

    pub fn n_end(&self) -> usize {
        self.n_start + self.logs.len() - 1
    }

    pub fn len(&self) -> usize {
        self.logs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.logs.is_empty()
    }

    pub fn logs(&self) -> &[f64] {
        &self.logs
    }

    /// Values as doubles; may overflow to infinity.
    pub fn values(&self) -> Vec<f64> {
        self.logs.iter().map(|l| l.exp()).collect()
    }

    /// The sequence `c * a_n`.
    pub fn scaled(&self, c: f64) -> Result<Self> {
        if !(c > 0.0 && c.is_finite()) {
            return Err(Error::InvalidInput(format!("scale factor {c} is not positive")));
        }
        let lc = c.ln();
        Ok(PositiveSequence {
            n_start: self.n_start,
            logs: self.logs.iter().map(|l| l + lc).collect(),
        })
    }
}

/// `k -> dim Hom(M, N[k])`, finitely supported.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ExtTable {
    pub dims: BTreeMap<i64, u64>,
}

impl ExtTable {
    pub fn new(dims: impl IntoIterator<Item = (i64, u64)>) -> Self {
        let mut t = ExtTable::default();
        for (k, d) in dims {
            *t.dims.entry(k).or_insert(0) += d;
        }
        t.dims.retain(|_, d| *d > 0);
        t
    }

    pub fn is_empty(&self) -> bool {
        self.dims.is_empty()
    }

    /// Direct sum: graded dimensions add.
    pub fn direct_sum(&self, other: &ExtTable) -> ExtTable {
        ExtTable::new(self.dims.iter().chain(&other.dims).map(|(&k, &d)| (k, d)))
    }
}

/// `sum_k dims[k] e^{-kt}`.
pub fn eval_ext_distance(table: &ExtTable, t: f64) -> f64 {
    table
        .dims
        .iter()
        .map(|(&k, &d)| d as f64 * (-(k as f64) * t).exp())
        .sum()
}

/// `ln eval_ext_distance(table, t)` by log-sum-exp; `-inf` for an empty table.
pub fn ln_ext_distance(table: &ExtTable, t: f64) -> f64 {
    let terms: Vec<f64> = table
        .dims
        .iter()
        .map(|(&k, &d)| (d as f64).ln() - k as f64 * t)
        .collect();
    let top = terms.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if top == f64::NEG_INFINITY {
        return top;
    }
    top + terms.iter().map(|x| (x - top).exp()).sum::<f64>().ln()
}

#[derive(Clone, Debug)]
pub struct FitOptions {
    pub n_lo: Option<usize>,
    pub n_hi: Option<usize>,
    pub drop_head_fraction: f64,
}

impl Default for FitOptions {
    fn default() -> Self {
        FitOptions {
            n_lo: None,
            n_hi: None,
            drop_head_fraction: DEFAULT_DROP_HEAD,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct EstimatedSignature {
    pub rho_hat: f64,
    pub log_rho_hat: f64,
    pub s_hat: f64,
    pub intercept: f64,
    /// Root-mean-square residual of the log-space fit.
    pub residual: f64,
    pub window: (usize, usize),
}

impl EstimatedSignature {
    /// The regression presumes a limit; a large residual says it may not exist.
    pub fn limit_doubtful(&self) -> bool {
        self.residual > RESIDUAL_CAVEAT
    }
}

pub fn fit_growth(seq: &PositiveSequence, opts: &FitOptions) -> Result<EstimatedSignature> {
    let lo = opts.n_lo.unwrap_or(seq.n_start()).max(seq.n_start());
    let hi = opts.n_hi.unwrap_or(seq.n_end()).min(seq.n_end());
    if hi < lo {
        return Err(Error::WindowTooShort { len: 0, min: MIN_LEN });
    }
    let frac = opts.drop_head_fraction;
    if !(0.0..1.0).contains(&frac) {
        return Err(Error::InvalidInput(format!(
            "drop_head_fraction {frac} outside [0, 1)"
        )));
    }
    let full = hi - lo + 1;
    let lo = lo + (full as f64 * frac).floor() as usize;
    let len = hi + 1 - lo;
    if len < MIN_LEN {
        return Err(Error::WindowTooShort { len, min: MIN_LEN });
    }

    let xs: Vec<(f64, f64, f64)> = (lo..=hi)
        .map(|n| (n as f64, (n as f64).ln(), seq.logs[n - seq.n_start]))
        .collect();
    let m = len as f64;
    let (mx, ml, my) = xs.iter().fold((0.0, 0.0, 0.0), |a, x| {
        (a.0 + x.0 / m, a.1 + x.1 / m, a.2 + x.2 / m)
    });
    let (mut sxx, mut sxl, mut sll, mut sxy, mut sly) = (0.0, 0.0, 0.0, 0.0, 0.0);
    for &(x, l, y) in &xs {
        let (dx, dl, dy) = (x - mx, l - ml, y - my);
        sxx += dx * dx;
        sxl += dx * dl;
        sll += dl * dl;
        sxy += dx * dy;
        sly += dl * dy;
    }
    let det = sxx * sll - sxl * sxl;
    let log_rho = (sxy * sll - sly * sxl) / det;
    let s = (sxx * sly - sxl * sxy) / det;
    let c = my - log_rho * mx - s * ml;
    let sq: f64 = xs
        .iter()
        .map(|&(x, l, y)| {
            let r = y - (log_rho * x + s * l + c);
            r * r
        })
        .sum();
    Ok(EstimatedSignature {
        rho_hat: log_rho.exp(),
        log_rho_hat: log_rho,
        s_hat: s,
        intercept: c,
        residual: (sq / m).sqrt(),
        window: (lo, hi),
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct EntropyEstimate {
    pub t: f64,
    pub h_t_hat: f64,
    pub h_pol_t_hat: f64,
    pub residual: f64,
}

/// Fits `n -> ε_t(tables[n - 1])` for each `t`, in grid order. `tables[0]`
/// is the `n = 1` table.
pub fn entropy_from_ext_sequence(
    tables: &[ExtTable],
    t_grid: &[f64],
    opts: &FitOptions,
) -> Result<Vec<EntropyEstimate>> {
    t_grid
        .iter()
        .map(|&t| {
            let logs: Vec<f64> = tables.iter().map(|tb| ln_ext_distance(tb, t)).collect();
            let seq = PositiveSequence::from_logs(1, logs)?;
            let fit = fit_growth(&seq, opts)?;
            Ok(EntropyEstimate {
                t,
                h_t_hat: fit.log_rho_hat,
                h_pol_t_hat: fit.s_hat,
                residual: fit.residual,
            })
        })
        .collect()
}

/// `a_n = |v^T gram F^n w|` for `n = 1..=n_max`.
pub fn pairing_sequence(
    gram: &ExactMatrix,
    f: &ExactMatrix,
    v: &[BigRational],
    w: &[BigRational],
    n_max: usize,
) -> Result<PositiveSequence> {
    let d = gram.dim();
    for found in [f.dim(), v.len(), w.len()] {
        if found != d {
            return Err(Error::DimensionMismatch { expected: d, found });
        }
    }
    // v^T gram, fixed
    let row: Vec<BigRational> = (0..d)
        .map(|j| (0..d).map(|i| &v[i] * gram.get(i, j)).sum())
        .collect();
    let mut x = w.to_vec();
    let mut logs = Vec::with_capacity(n_max);
    for n in 1..=n_max {
        x = f.mul_vec(&x);
        let val: BigRational = row.iter().zip(&x).map(|(a, b)| a * b).sum();
        if val.is_zero() {
            return Err(Error::ZeroPairingAt(n));
        }
        logs.push(ln_abs(&val));
    }
    PositiveSequence::from_logs(1, logs)
}

/// `a_n = sum of |entries of M^n|` for `n = 1..=n_max`.
pub fn entry_sum_sequence(m: &ExactMatrix, n_max: usize) -> Result<PositiveSequence> {
    let mut power = m.clone();
    let mut vals = Vec::with_capacity(n_max);
    for n in 1..=n_max {
        let total = power.abs_sum();
        if total.is_zero() {
            return Err(Error::NonPositiveValue { n });
        }
        vals.push(total);
        power = &power * m;
    }
    PositiveSequence::from_exact(1, &vals)
}
