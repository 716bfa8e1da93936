//! Twist words in `SL(2, Z)` and the elliptic / parabolic / hyperbolic
//! trichotomy of their entropies.
//!
//! Two contexts share the machinery: the braid generators `T1`, `T2` acting
//! on the lattice of the A2 quiver 3-Calabi–Yau category, and the generators
//! `T`, `S` of the autoequivalence group of an elliptic curve. Shifts `[m]`
//! may appear in words; they do not affect the classification.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::exact_linalg::{growth_signature, ExactMatrix};
use crate::growth_estimator::ln_bigint;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Context {
    A2Cy3,
    Elliptic,
}

impl Context {
    /// Generator names, indexed by generator id 1 and 2.
    pub fn names(self) -> [&'static str; 2] {
        match self {
            Context::A2Cy3 => ["T1", "T2"],
            Context::Elliptic => ["T", "S"],
        }
    }

    pub fn generator(self, id: u8) -> [[i64; 2]; 2] {
        match (self, id) {
            (Context::A2Cy3, 1) => [[1, 1], [0, 1]],
            (Context::A2Cy3, 2) => [[1, 0], [-1, 1]],
            (Context::Elliptic, 1) => [[1, 0], [1, 1]],
            (Context::Elliptic, 2) => [[0, 1], [-1, 0]],
            _ => panic!("generator id must be 1 or 2"),
        }
    }
}

impl FromStr for Context {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "a2cy3" => Ok(Context::A2Cy3),
            "elliptic" => Ok(Context::Elliptic),
            other => Err(Error::Parse(format!("unknown context {other:?}"))),
        }
    }
}

impl fmt::Display for Context {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Context::A2Cy3 => "a2cy3",
            Context::Elliptic => "elliptic",
        })
    }
}

/// Reduced word: adjacent letters with the same generator are merged and
/// zero exponents dropped. Shifts are central and collected separately.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwistWord {
    letters: Vec<(u8, i64)>,
    shift: i64,
    context: Context,
}

impl TwistWord {
    pub fn new(context: Context, letters: impl IntoIterator<Item = (u8, i64)>, shift: i64) -> Self {
        let mut w = TwistWord {
            letters: Vec::new(),
            shift,
            context,
        };
        for (g, e) in letters {
            w.push(g, e);
        }
        w
    }

    fn push(&mut self, g: u8, e: i64) {
        assert!(g == 1 || g == 2, "generator id must be 1 or 2");
        if e == 0 {
            return;
        }
        match self.letters.last_mut() {
            Some((lg, le)) if *lg == g => {
                *le += e;
                if *le == 0 {
                    self.letters.pop();
                }
            }
            _ => self.letters.push((g, e)),
        }
    }

    /// Parses whitespace-separated tokens such as `T1`, `T2^-1`, `S`, `[3]`.
    pub fn parse(context: Context, input: &str) -> Result<Self> {
        let tokens: Vec<&str> = input.split_whitespace().collect();
        Self::parse_tokens(context, &tokens)
    }

    pub fn parse_tokens<S: AsRef<str>>(context: Context, tokens: &[S]) -> Result<Self> {
        if tokens.is_empty() {
            return Err(Error::Parse("empty word".into()));
        }
        let names = context.names();
        let mut w = TwistWord::new(context, [], 0);
        for tok in tokens {
            let tok = tok.as_ref();
            if let Some(inner) = tok.strip_prefix('[').and_then(|t| t.strip_suffix(']')) {
                let m: i64 = inner
                    .trim()
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad shift token {tok:?}")))?;
                w.shift += m;
                continue;
            }
            let (name, exp) = match tok.split_once('^') {
                Some((n, e)) => {
                    let e: i64 = e
                        .parse()
                        .map_err(|_| Error::Parse(format!("bad exponent in {tok:?}")))?;
                    (n, e)
                }
                None => (tok, 1),
            };
            let id = names
                .iter()
                .position(|n| *n == name)
                .ok_or_else(|| {
                    Error::Parse(format!(
                        "unknown generator {name:?} in context {context} (expected {} or {})",
                        names[0], names[1]
                    ))
                })?;
            w.push(id as u8 + 1, exp);
        }
        Ok(w)
    }

    pub fn context(&self) -> Context {
        self.context
    }

    pub fn letters(&self) -> &[(u8, i64)] {
        &self.letters
    }

    pub fn shift(&self) -> i64 {
        self.shift
    }

    pub fn concat(&self, other: &TwistWord) -> TwistWord {
        assert_eq!(self.context, other.context, "words from different contexts");
        TwistWord::new(
            self.context,
            self.letters.iter().chain(&other.letters).copied(),
            self.shift + other.shift,
        )
    }

    pub fn inverse(&self) -> TwistWord {
        TwistWord::new(
            self.context,
            self.letters.iter().rev().map(|&(g, e)| (g, -e)),
            -self.shift,
        )
    }

    pub fn pow(&self, m: usize) -> TwistWord {
        (0..m).fold(TwistWord::new(self.context, [], 0), |acc, _| acc.concat(self))
    }
}

impl fmt::Display for TwistWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = self.context.names();
        let mut parts: Vec<String> = self
            .letters
            .iter()
            .map(|&(g, e)| {
                let n = names[g as usize - 1];
                if e == 1 {
                    n.to_string()
                } else {
                    format!("{n}^{e}")
                }
            })
            .collect();
        if self.shift != 0 {
            parts.push(format!("[{}]", self.shift));
        }
        if parts.is_empty() {
            parts.push("id".into());
        }
        f.write_str(&parts.join(" "))
    }
}

/// Integer 2x2 matrix of determinant 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Sl2Element {
    m: [[BigInt; 2]; 2],
}

impl Sl2Element {
    pub fn new(m: [[BigInt; 2]; 2]) -> Result<Self> {
        let det = &m[0][0] * &m[1][1] - &m[0][1] * &m[1][0];
        if !det.is_one() {
            return Err(Error::InvalidInput(format!("determinant {det} is not 1")));
        }
        Ok(Sl2Element { m })
    }

    pub fn from_i64(m: [[i64; 2]; 2]) -> Result<Self> {
        Self::new(m.map(|r| r.map(BigInt::from)))
    }

    pub fn identity() -> Self {
        Sl2Element::from_i64([[1, 0], [0, 1]]).unwrap()
    }

    pub fn entries(&self) -> &[[BigInt; 2]; 2] {
        &self.m
    }

    pub fn trace(&self) -> BigInt {
        &self.m[0][0] + &self.m[1][1]
    }

    pub fn is_central(&self) -> bool {
        let m = &self.m;
        m[0][1].is_zero() && m[1][0].is_zero() && m[0][0] == m[1][1] && m[0][0].abs().is_one()
    }

    pub fn mul(&self, o: &Sl2Element) -> Sl2Element {
        let (a, b) = (&self.m, &o.m);
        let e = |i: usize, j: usize| &a[i][0] * &b[0][j] + &a[i][1] * &b[1][j];
        Sl2Element {
            m: [[e(0, 0), e(0, 1)], [e(1, 0), e(1, 1)]],
        }
    }

    pub fn inverse(&self) -> Sl2Element {
        let m = &self.m;
        Sl2Element {
            m: [
                [m[1][1].clone(), -m[0][1].clone()],
                [-m[1][0].clone(), m[0][0].clone()],
            ],
        }
    }

    pub fn pow(&self, e: i64) -> Sl2Element {
        let base = if e < 0 { self.inverse() } else { self.clone() };
        let mut acc = Sl2Element::identity();
        let mut sq = base;
        let mut k = e.unsigned_abs();
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&sq);
            }
            k >>= 1;
            if k > 0 {
                sq = sq.mul(&sq);
            }
        }
        acc
    }

    pub fn to_matrix(&self) -> ExactMatrix {
        ExactMatrix::from_fn(2, |i, j| self.m[i][j].clone().into())
    }
}

impl fmt::Display for Sl2Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let m = &self.m;
        write!(f, "[[{}, {}], [{}, {}]]", m[0][0], m[0][1], m[1][0], m[1][1])
    }
}

pub fn word_to_matrix(w: &TwistWord) -> Sl2Element {
    let ctx = w.context();
    w.letters().iter().fold(Sl2Element::identity(), |acc, &(g, e)| {
        let gen = Sl2Element::from_i64(ctx.generator(g)).unwrap();
        acc.mul(&gen.pow(e))
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Sl2Class {
    EllipticOrCentral,
    ParabolicNonCentral,
    Hyperbolic,
}

impl Sl2Class {
    pub fn as_str(self) -> &'static str {
        match self {
            Sl2Class::EllipticOrCentral => "elliptic",
            Sl2Class::ParabolicNonCentral => "parabolic",
            Sl2Class::Hyperbolic => "hyperbolic",
        }
    }
}

impl fmt::Display for Sl2Class {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

pub fn classify_sl2(g: &Sl2Element) -> Sl2Class {
    let tr = g.trace().abs();
    let two = BigInt::from(2);
    if tr < two || g.is_central() {
        Sl2Class::EllipticOrCentral
    } else if tr == two {
        Sl2Class::ParabolicNonCentral
    } else {
        Sl2Class::Hyperbolic
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct TrichotomyReport {
    pub classification: Sl2Class,
    /// Closed form of the categorical entropy.
    pub h_cat_exact: String,
    pub h_cat: f64,
    pub h_pol: u32,
    pub pseudo_anosov: bool,
    pub trace: BigInt,
    pub matrix: Sl2Element,
}

/// `log((|tr| + sqrt(tr^2 - 4)) / 2)` for `|tr| > 2`, without overflow.
pub fn hyperbolic_entropy(trace: &BigInt) -> f64 {
    let t = trace.abs();
    match t.to_f64() {
        Some(x) if x < 1e150 => ((x + (x * x - 4.0).sqrt()) / 2.0).ln(),
        _ => ln_bigint(&t),
    }
}

pub fn trichotomy_report(w: &TwistWord) -> TrichotomyReport {
    let g = word_to_matrix(w);
    let class = classify_sl2(&g);
    let trace = g.trace();
    let (h_cat_exact, h_cat, h_pol) = match class {
        Sl2Class::Hyperbolic => {
            let t = trace.abs();
            let disc = &t * &t - BigInt::from(4);
            (
                format!("log(({t}+sqrt({disc}))/2)"),
                hyperbolic_entropy(&trace),
                0,
            )
        }
        Sl2Class::ParabolicNonCentral => ("0".to_string(), 0.0, 1),
        Sl2Class::EllipticOrCentral => ("0".to_string(), 0.0, 0),
    };
    TrichotomyReport {
        classification: class,
        h_cat_exact,
        h_cat,
        h_pol,
        pseudo_anosov: class == Sl2Class::Hyperbolic && w.context() == Context::A2Cy3,
        trace,
        matrix: g,
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct LatticeCrosscheck {
    pub consistent: bool,
    pub h_cat: f64,
    pub log_rho: f64,
    pub h_pol: u32,
    pub s: usize,
    pub details: String,
}

pub const CROSSCHECK_TOL: f64 = 1e-9;

/// Recomputes `(log ρ, s)` of the word's matrix with the general exact
/// machinery and compares with the trace-based report.
pub fn crosscheck_with_lattice(w: &TwistWord) -> Result<LatticeCrosscheck> {
    let report = trichotomy_report(w);
    let sig = growth_signature(&report.matrix.to_matrix())?;
    let log_rho = sig.log_rho();
    let cat_ok = (report.h_cat - log_rho).abs() <= CROSSCHECK_TOL * log_rho.abs().max(1.0);
    let pol_ok = report.h_pol as usize == sig.s;
    let details = format!(
        "trace rule: h_cat = {:.12}, h_pol = {}; lattice: log rho = {:.12}, s = {}",
        report.h_cat, report.h_pol, log_rho, sig.s
    );
    Ok(LatticeCrosscheck {
        consistent: cat_ok && pol_ok,
        h_cat: report.h_cat,
        log_rho,
        h_pol: report.h_pol,
        s: sig.s,
        details,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a2(s: &str) -> TwistWord {
        TwistWord::parse(Context::A2Cy3, s).unwrap()
    }

    fn m(rows: [[i64; 2]; 2]) -> Sl2Element {
        Sl2Element::from_i64(rows).unwrap()
    }

    #[test]
    fn generator_images() {
        assert_eq!(word_to_matrix(&a2("T1")), m([[1, 1], [0, 1]]));
        assert_eq!(word_to_matrix(&a2("T1 T2^-1")), m([[2, 1], [1, 1]]));
        let s = TwistWord::parse(Context::Elliptic, "S").unwrap();
        assert_eq!(word_to_matrix(&s), m([[0, 1], [-1, 0]]));
    }

    #[test]
    fn parsing_merges_and_rejects() {
        let w = a2("T1 T1^2 T2 T2^-1 [3] T1^-3");
        assert!(w.letters().is_empty());
        assert_eq!(w.shift(), 3);
        assert_eq!(a2("T1 T2^-1").to_string(), "T1 T2^-1");
        assert!(matches!(TwistWord::parse(Context::A2Cy3, "S"), Err(Error::Parse(_))));
        assert!(matches!(TwistWord::parse(Context::A2Cy3, "T1^x"), Err(Error::Parse(_))));
        assert!(TwistWord::parse(Context::A2Cy3, "").is_err());
        assert!(TwistWord::parse(Context::Elliptic, "T^-2 S [1]").is_ok());
    }

    #[test]
    fn classification_examples() {
        assert_eq!(classify_sl2(&m([[0, 1], [-1, 0]])), Sl2Class::EllipticOrCentral);
        assert_eq!(classify_sl2(&m([[1, 0], [1, 1]])), Sl2Class::ParabolicNonCentral);
        assert_eq!(classify_sl2(&m([[2, 1], [1, 1]])), Sl2Class::Hyperbolic);
        assert_eq!(classify_sl2(&m([[-1, 0], [0, -1]])), Sl2Class::EllipticOrCentral);
        assert!(Sl2Element::from_i64([[1, 1], [1, 1]]).is_err());
    }

    #[test]
    fn reports() {
        let r = trichotomy_report(&a2("T1"));
        assert_eq!((r.classification, r.h_cat, r.h_pol), (Sl2Class::ParabolicNonCentral, 0.0, 1));
        let r = trichotomy_report(&a2("T1 T2 T1 T2 T1 T2"));
        assert_eq!(r.matrix, m([[-1, 0], [0, -1]]));
        assert_eq!((r.classification, r.h_pol), (Sl2Class::EllipticOrCentral, 0));
        let r = trichotomy_report(&a2("T1 T2^-1"));
        assert_eq!(r.classification, Sl2Class::Hyperbolic);
        assert!((r.h_cat - 0.9624236501192069).abs() < 1e-12);
        assert_eq!(r.h_cat_exact, "log((3+sqrt(5))/2)");
        assert!(r.pseudo_anosov);
        let t = TwistWord::parse(Context::Elliptic, "T").unwrap();
        let r = trichotomy_report(&t);
        assert_eq!((r.classification, r.h_pol, r.pseudo_anosov), (Sl2Class::ParabolicNonCentral, 1, false));
    }

    #[test]
    fn crosschecks() {
        for w in ["T1", "T1 T2^-1", "T2^5 T1^-2 T2 [4]"] {
            assert!(crosscheck_with_lattice(&a2(w)).unwrap().consistent, "{w}");
        }
        let s = TwistWord::parse(Context::Elliptic, "S").unwrap();
        let c = crosscheck_with_lattice(&s).unwrap();
        assert!(c.consistent);
        assert_eq!(c.s, 0);
    }

    #[test]
    fn huge_traces() {
        let w = a2("T1^40 T2^-40 T1^40 T2^-40 T1^40 T2^-40");
        let r = trichotomy_report(&w);
        let c = crosscheck_with_lattice(&w).unwrap();
        assert!(c.consistent, "{}", c.details);
        assert!(r.h_cat > 20.0);
    }
}
