//! Entropy of shifts, fractional Calabi–Yau Serre functors, spherical twists
//! and P-twists.
//!
//! For the twists only bounds on `ε_t(G', T^n G)` are available. Each bound
//! has a recurrence (an explicit partial sum) and a closed form; both are
//! provided so that the closed forms can be checked against the sums.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::error::{Error, Result};

/// `|t|` below this is treated as exactly zero.
pub const T_SNAP: f64 = 1e-12;

/// `h_t = slope * t` and `h_pol = 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearEntropy {
    pub slope: BigRational,
    pub h_pol: u32,
}

/// The shift `[m]`.
pub fn shift_report(m: i64) -> LinearEntropy {
    LinearEntropy {
        slope: BigRational::from_integer(BigInt::from(m)),
        h_pol: 0,
    }
}

/// A Serre functor with `S^n = [m]`.
pub fn fractional_cy_report(n: u64, m: i64) -> Result<LinearEntropy> {
    if n == 0 {
        return Err(Error::InvalidInput("fractional CY exponent n must be positive".into()));
    }
    Ok(LinearEntropy {
        slope: BigRational::new(BigInt::from(m), BigInt::from(n)),
        h_pol: 0,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TwistKind {
    Spherical,
    PTwist,
}

impl FromStr for TwistKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "spherical" => Ok(TwistKind::Spherical),
            "ptwist" | "p-twist" => Ok(TwistKind::PTwist),
            other => Err(Error::Parse(format!("unknown twist kind {other:?}"))),
        }
    }
}

impl fmt::Display for TwistKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TwistKind::Spherical => "spherical",
            TwistKind::PTwist => "ptwist",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct TwistParams {
    pub kind: TwistKind,
    pub d: u32,
    pub t: f64,
    pub a: f64,
    pub b: f64,
    /// Whether the orthogonal complement of the twisting object is nonzero.
    pub orth_nonempty: bool,
    /// The twist is one of the 3-spherical twists of the A2 quiver CY3 category.
    pub a2_context: bool,
}

impl TwistParams {
    pub fn new(kind: TwistKind, d: u32, t: f64, a: f64, b: f64, orth_nonempty: bool) -> Result<Self> {
        if d == 0 {
            return Err(Error::InvalidInput("d must be at least 1".into()));
        }
        if !t.is_finite() {
            return Err(Error::InvalidInput("t must be finite".into()));
        }
        if !(a > 0.0 && a.is_finite()) {
            return Err(Error::InvalidInput(format!("A = {a} must be positive")));
        }
        if !(b >= 0.0 && b.is_finite()) {
            return Err(Error::InvalidInput(format!("B = {b} must be nonnegative")));
        }
        Ok(TwistParams {
            kind,
            d,
            t,
            a,
            b,
            orth_nonempty,
            a2_context: false,
        })
    }

    pub fn with_a2_context(mut self) -> Self {
        self.a2_context = true;
        self
    }

    /// `t` with tiny values snapped to zero, and a warning if it was.
    pub fn snapped_t(&self) -> (f64, Option<String>) {
        if self.t != 0.0 && self.t.abs() < T_SNAP {
            (0.0, Some(format!("t = {:e} treated as 0", self.t)))
        } else {
            (self.t, None)
        }
    }

    fn check(&self, kind: TwistKind) {
        assert_eq!(self.kind, kind, "parameters are for a {} twist", self.kind);
    }
}

/// Closed-form bound for `ε_t(G', T_E^n G)`. Branch order: `d = 1`, then
/// `t = 0`, then the sign of `t`.
pub fn spherical_bound(p: &TwistParams, n: u64) -> f64 {
    p.check(TwistKind::Spherical);
    let (t, _) = p.snapped_t();
    let (d, n) = (p.d as f64, n as f64);
    if p.d == 1 {
        n * t.exp() * p.a + p.b
    } else if t == 0.0 {
        n * p.a + p.b
    } else if t < 0.0 {
        ((1.0 - d) * n * t).exp() / (((1.0 - d) * t).exp() - 1.0) * p.a + p.b
    } else {
        t.exp() / (1.0 - ((1.0 - d) * t).exp()) * p.a + p.b
    }
}

/// `B + A sum_{i=1}^n e^{((1-d)i + d)t}`, term by term.
pub fn spherical_recurrence(p: &TwistParams, n: u64) -> f64 {
    p.check(TwistKind::Spherical);
    let (t, _) = p.snapped_t();
    let d = p.d as f64;
    let sum: f64 = (1..=n).map(|i| (((1.0 - d) * i as f64 + d) * t).exp()).sum();
    p.b + p.a * sum
}

/// The same partial sum as [`spherical_recurrence`] in closed form,
/// `B + A e^t (r^n - 1)/(r - 1)` with `r = e^{(1-d)t}`.
pub fn spherical_geometric_sum(p: &TwistParams, n: u64) -> f64 {
    p.check(TwistKind::Spherical);
    let (t, _) = p.snapped_t();
    let lr = (1.0 - p.d as f64) * t;
    p.b + p.a * t.exp() * geometric(lr, n)
}

/// `(r^n - 1)/(r - 1)` for `r = e^{lr}`, stable near `r = 1`.
fn geometric(lr: f64, n: u64) -> f64 {
    if lr == 0.0 {
        n as f64
    } else {
        (lr * n as f64).exp_m1() / lr.exp_m1()
    }
}

pub fn ptwist_bound(p: &TwistParams, n: u64) -> f64 {
    p.check(TwistKind::PTwist);
    let (t, _) = p.snapped_t();
    let (d, n) = (p.d as f64, n as f64);
    if t == 0.0 {
        n * p.a + p.b
    } else if t < 0.0 {
        (-2.0 * d * n * t).exp() / ((-2.0 * d * t).exp() - 1.0) * p.a + p.b
    } else {
        t.exp() / (1.0 - (-2.0 * d * t).exp()) * p.a + p.b
    }
}

/// `B + A sum_{i=0}^{n-1} e^{(1 - 2di)t}`, term by term.
pub fn ptwist_recurrence(p: &TwistParams, n: u64) -> f64 {
    p.check(TwistKind::PTwist);
    let (t, _) = p.snapped_t();
    let d = p.d as f64;
    let sum: f64 = (0..n).map(|i| ((1.0 - 2.0 * d * i as f64) * t).exp()).sum();
    p.b + p.a * sum
}

/// `B + A e^t (r^n - 1)/(r - 1)` with `r = e^{-2dt}`.
pub fn ptwist_geometric_sum(p: &TwistParams, n: u64) -> f64 {
    p.check(TwistKind::PTwist);
    let (t, _) = p.snapped_t();
    p.b + p.a * t.exp() * geometric(-2.0 * p.d as f64 * t, n)
}

pub fn bound(p: &TwistParams, n: u64) -> f64 {
    match p.kind {
        TwistKind::Spherical => spherical_bound(p, n),
        TwistKind::PTwist => ptwist_bound(p, n),
    }
}

pub fn recurrence(p: &TwistParams, n: u64) -> f64 {
    match p.kind {
        TwistKind::Spherical => spherical_recurrence(p, n),
        TwistKind::PTwist => ptwist_recurrence(p, n),
    }
}

pub fn geometric_sum(p: &TwistParams, n: u64) -> f64 {
    match p.kind {
        TwistKind::Spherical => spherical_geometric_sum(p, n),
        TwistKind::PTwist => ptwist_geometric_sum(p, n),
    }
}

/// Whether the closed-form bound is the partial sum itself rather than an
/// `n`-uniform majorant of it.
pub fn bound_is_exact(p: &TwistParams) -> bool {
    let (t, _) = p.snapped_t();
    t == 0.0 || (p.kind == TwistKind::Spherical && p.d == 1)
}

fn log_add(a: f64, b: f64) -> f64 {
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    if lo == f64::NEG_INFINITY {
        hi
    } else {
        hi + (lo - hi).exp().ln_1p()
    }
}

/// `ln((r^n - 1)/(r - 1))` for `r = e^{lr}`.
fn ln_geometric(lr: f64, n: u64) -> f64 {
    let nf = n as f64;
    if lr == 0.0 {
        nf.ln()
    } else if lr > 0.0 {
        (nf - 1.0) * lr + (-(-nf * lr).exp_m1()).ln() - (-(-lr).exp_m1()).ln()
    } else {
        ((nf * lr).exp_m1() / lr.exp_m1()).ln()
    }
}

/// Per-step log ratio `ln r` of the twist's geometric sum.
fn log_ratio(p: &TwistParams, t: f64) -> f64 {
    match p.kind {
        TwistKind::Spherical => (1.0 - p.d as f64) * t,
        TwistKind::PTwist => -2.0 * p.d as f64 * t,
    }
}

/// `ln` of [`bound`], finite where the plain value overflows.
pub fn ln_bound(p: &TwistParams, n: u64) -> f64 {
    let (t, _) = p.snapped_t();
    let (la, lb, nf) = (p.a.ln(), p.b.ln(), n as f64);
    let main = if p.kind == TwistKind::Spherical && p.d == 1 {
        nf.ln() + t + la
    } else if t == 0.0 {
        nf.ln() + la
    } else {
        let lr = log_ratio(p, t);
        if t < 0.0 {
            nf * lr - lr.exp_m1().ln() + la
        } else {
            t - (-lr.exp_m1()).ln() + la
        }
    };
    log_add(main, lb)
}

/// `ln` of [`recurrence`], summed term by term in log space.
pub fn ln_recurrence(p: &TwistParams, n: u64) -> f64 {
    let (t, _) = p.snapped_t();
    let lr = log_ratio(p, t);
    let exps: Vec<f64> = (0..n).map(|i| t + i as f64 * lr).collect();
    let m = exps.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let s: f64 = exps.iter().map(|e| (e - m).exp()).sum();
    log_add(p.a.ln() + m + s.ln(), p.b.ln())
}

/// `ln` of [`geometric_sum`].
pub fn ln_geometric_sum(p: &TwistParams, n: u64) -> f64 {
    let (t, _) = p.snapped_t();
    log_add(p.a.ln() + t + ln_geometric(log_ratio(p, t), n), p.b.ln())
}

#[derive(Clone, Debug, PartialEq)]
pub enum ValueOrInterval {
    Value(f64),
    /// `hi = None` is unbounded above.
    Interval { lo: f64, hi: Option<f64> },
}

impl fmt::Display for ValueOrInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ValueOrInterval::Value(v) => write!(f, "{v}"),
            ValueOrInterval::Interval { lo, hi: Some(hi) } => write!(f, "[{lo}, {hi}]"),
            ValueOrInterval::Interval { lo, hi: None } => write!(f, "[{lo}, inf)"),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct TwistEntropyReport {
    pub kind: TwistKind,
    pub d: u32,
    pub t: f64,
    /// `h_t` at the given `t`.
    pub h_t: f64,
    /// Whether `h_t` is only an upper bound.
    pub h_t_is_bound: bool,
    /// Piecewise formula for `h_t`.
    pub h_t_formula: String,
    pub h_pol: ValueOrInterval,
    /// No value is known on this branch.
    pub unknown: bool,
    pub branch: String,
    pub notes: Vec<String>,
    pub warnings: Vec<String>,
}

fn times_t(c: i64) -> String {
    match c {
        0 => "0".into(),
        1 => "t".into(),
        -1 => "-t".into(),
        c => format!("{c}t"),
    }
}

pub fn twist_entropy_report(p: &TwistParams) -> TwistEntropyReport {
    let (t, snap) = p.snapped_t();
    let d = p.d as f64;
    let unit = ValueOrInterval::Interval { lo: 0.0, hi: Some(1.0) };
    let open = ValueOrInterval::Interval { lo: 0.0, hi: None };
    let mut notes = Vec::new();
    let (h_t, h_t_is_bound, h_t_formula, h_pol, unknown, branch) = match p.kind {
        TwistKind::Spherical => {
            let h = if t <= 0.0 { (1.0 - d) * t } else { 0.0 };
            let formula = format!("h_t = {} for t <= 0, 0 for t > 0", times_t(1 - p.d as i64));
            let (v, unknown, branch) = if p.d == 1 {
                (unit, false, "d = 1")
            } else if t == 0.0 {
                (unit, false, "t = 0")
            } else if t < 0.0 {
                (ValueOrInterval::Value(0.0), false, "d >= 2, t < 0")
            } else if p.orth_nonempty {
                (ValueOrInterval::Value(0.0), false, "d >= 2, t > 0, orthogonal complement nonzero")
            } else {
                (open, true, "d >= 2, t > 0, orthogonal complement zero")
            };
            if p.a2_context {
                notes.push(if t == 0.0 {
                    "A2 quiver twist: h_pol = 1 at t = 0".to_string()
                } else {
                    "A2 quiver twist: h_pol = 1 at t = 0, so h_pol jumps there".to_string()
                });
            }
            (h, false, formula, v, unknown, branch)
        }
        TwistKind::PTwist => {
            let h = if t < 0.0 { -2.0 * d * t } else { 0.0 };
            let formula = format!("h_t <= {} for t <= 0, 0 for t > 0", times_t(-2 * p.d as i64));
            let (v, unknown, branch) = if t == 0.0 {
                (unit, false, "t = 0")
            } else if t < 0.0 {
                (ValueOrInterval::Value(0.0), false, "t < 0")
            } else if p.orth_nonempty {
                (ValueOrInterval::Value(0.0), false, "t > 0, orthogonal complement nonzero")
            } else {
                (open, true, "t > 0, orthogonal complement zero")
            };
            (h, true, formula, v, unknown, branch)
        }
    };
    if unknown {
        notes.push("no value is known without a nonzero orthogonal complement".to_string());
    }
    TwistEntropyReport {
        kind: p.kind,
        d: p.d,
        t,
        h_t,
        h_t_is_bound,
        h_t_formula,
        h_pol,
        unknown,
        branch: branch.to_string(),
        notes,
        warnings: snap.into_iter().collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sph(d: u32, t: f64, a: f64, b: f64) -> TwistParams {
        TwistParams::new(TwistKind::Spherical, d, t, a, b, true).unwrap()
    }

    fn pt(d: u32, t: f64, a: f64, b: f64) -> TwistParams {
        TwistParams::new(TwistKind::PTwist, d, t, a, b, true).unwrap()
    }

    #[test]
    fn shifts_and_serre() {
        assert_eq!(shift_report(-3).slope, BigRational::from_integer((-3).into()));
        assert_eq!(shift_report(0).h_pol, 0);
        let r = fractional_cy_report(2, 1).unwrap();
        assert_eq!(r.slope, BigRational::new(1.into(), 2.into()));
        assert!(fractional_cy_report(0, 1).is_err());
        assert_eq!(fractional_cy_report(1, 2).unwrap().slope, BigRational::from_integer(2.into()));
        assert_eq!(fractional_cy_report(3, 0).unwrap().slope, BigRational::from_integer(0.into()));
    }

    #[test]
    fn recurrence_growth_rate() {
        use crate::growth_estimator::{fit_growth, FitOptions, PositiveSequence};
        let p = sph(3, -0.5, 1.0, 1.0);
        let vals: Vec<f64> = (1..=60).map(|n| spherical_recurrence(&p, n)).collect();
        let seq = PositiveSequence::new(1, &vals).unwrap();
        let fit = fit_growth(&seq, &FitOptions::default()).unwrap();
        assert!((fit.log_rho_hat - 1.0).abs() < 1e-3, "{fit:?}");
        assert!(fit.s_hat.abs() < 0.05);
        let r = twist_entropy_report(&p);
        assert!((r.h_t - fit.log_rho_hat).abs() < 1e-3);
    }

    #[test]
    fn spherical_examples() {
        assert_eq!(spherical_bound(&sph(2, 0.0, 1.0, 1.0), 10), 11.0);
        assert_eq!(spherical_bound(&sph(1, 0.0, 2.0, 3.0), 5), 13.0);
        let v = spherical_bound(&sph(3, 0.5, 1.0, 0.0), 7);
        assert!((v - 2.608239).abs() < 1e-5);
        assert_eq!(v, spherical_bound(&sph(3, 0.5, 1.0, 0.0), 70));
        let r = spherical_recurrence(&sph(2, -1.0, 1.0, 0.0), 3);
        let e = std::f64::consts::E;
        assert!((r - (e + 1.0 + 1.0 / e)).abs() < 1e-12);
        let p = sph(4, 0.3, 2.0, 1.5);
        assert!((spherical_recurrence(&p, 1) - (1.5 + 2.0 * 0.3f64.exp())).abs() < 1e-12);
    }

    #[test]
    fn ptwist_examples() {
        assert_eq!(ptwist_bound(&pt(1, 0.0, 1.0, 1.0), 7), 8.0);
        let v = ptwist_bound(&pt(1, 0.5, 1.0, 0.0), 3);
        assert!((v - 2.608239).abs() < 1e-5);
        assert!((ptwist_recurrence(&pt(2, 0.7, 1.0, 2.0), 1) - (2.0 + 0.7f64.exp())).abs() < 1e-12);
    }

    #[test]
    fn closed_forms_against_sums() {
        for kind in [TwistKind::Spherical, TwistKind::PTwist] {
            for d in 1..=4 {
                for t in [-1.0, -0.1, 0.0, 0.1, 1.0] {
                    for (a, b) in [(0.5, 0.5), (1.0, 10.0), (10.0, 1.0), (1.0, 0.0)] {
                        let p = TwistParams::new(kind, d, t, a, b, true).unwrap();
                        for n in [1, 2, 17, 200] {
                            let r = ln_recurrence(&p, n);
                            assert!((ln_geometric_sum(&p, n) - r).abs() <= 1e-12, "{p:?} n={n}");
                            if bound_is_exact(&p) {
                                assert!((ln_bound(&p, n) - r).abs() <= 1e-12);
                            } else {
                                assert!(ln_bound(&p, n) >= r - 1e-12, "{p:?} n={n}");
                            }
                            if n <= 17 {
                                let rr = recurrence(&p, n);
                                assert!((geometric_sum(&p, n) - rr).abs() <= 1e-12 * rr);
                                assert!((r.exp() - rr).abs() <= 1e-12 * rr);
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn entropy_branches() {
        let r = twist_entropy_report(&sph(3, -1.0, 1.0, 1.0));
        assert_eq!((r.h_t, &r.h_pol), (2.0, &ValueOrInterval::Value(0.0)));
        let r = twist_entropy_report(&sph(2, 0.0, 1.0, 1.0));
        assert_eq!(r.h_t, 0.0);
        assert_eq!(r.h_pol, ValueOrInterval::Interval { lo: 0.0, hi: Some(1.0) });
        let r = twist_entropy_report(&pt(1, 0.3, 1.0, 1.0));
        assert_eq!(r.h_pol, ValueOrInterval::Value(0.0));
        let q = TwistParams::new(TwistKind::Spherical, 2, 0.5, 1.0, 1.0, false).unwrap();
        let r = twist_entropy_report(&q);
        assert!(r.unknown);
        assert_eq!(r.h_pol, ValueOrInterval::Interval { lo: 0.0, hi: None });
    }

    #[test]
    fn discontinuity_at_zero() {
        let below = twist_entropy_report(&sph(3, -1e-3, 1.0, 1.0).with_a2_context());
        let at = twist_entropy_report(&sph(3, 0.0, 1.0, 1.0).with_a2_context());
        assert_eq!(below.h_pol, ValueOrInterval::Value(0.0));
        assert_ne!(below.h_pol, at.h_pol);
        assert!(!at.notes.is_empty());
    }

    #[test]
    fn tiny_t_snaps() {
        let p = sph(2, 1e-14, 1.0, 1.0);
        assert_eq!(spherical_bound(&p, 10), 11.0);
        let r = twist_entropy_report(&p);
        assert_eq!(r.t, 0.0);
        assert_eq!(r.warnings.len(), 1);
        assert!(TwistParams::new(TwistKind::Spherical, 0, 0.0, 1.0, 1.0, true).is_err());
        assert!(TwistParams::new(TwistKind::Spherical, 1, 0.0, 0.0, 1.0, true).is_err());
    }
}
