//! Dynamical degrees of surjective endomorphisms, given by their pullback
//! matrices on the numerical cycle groups `N^p`, and the polynomial entropy
//! of tensoring by a line bundle.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive};

use crate::error::{Error, Result};
use crate::exact_linalg::{
    exp_nilpotent, growth_signature, nilpotency_index, tensor_product, ExactMatrix, GrowthSignature,
};
use crate::growth_estimator::{fit_growth, EstimatedSignature, FitOptions, PositiveSequence};

/// Relative slack when comparing dynamical degrees as doubles.
const REL_TOL: f64 = 1e-9;

/// Pullback `f^*` on `N^p(X)` for `p = 0..=dim`.
#[derive(Clone, Debug, PartialEq)]
pub struct EndoAction {
    dim: usize,
    actions: Vec<ExactMatrix>,
    labels: Option<Vec<Vec<String>>>,
}

impl EndoAction {
    pub fn new(dim: usize, actions: Vec<ExactMatrix>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidInput("dimension must be at least 1".into()));
        }
        if actions.len() != dim + 1 {
            return Err(Error::DimensionMismatch {
                expected: dim + 1,
                found: actions.len(),
            });
        }
        if let Some(p) = actions.iter().position(|m| !m.is_integer()) {
            return Err(Error::InvalidInput(format!("action on N^{p} has non-integer entries")));
        }
        if actions[0] != ExactMatrix::identity(1) {
            return Err(Error::InvalidInput("action on N^0 must be [[1]]".into()));
        }
        let top = &actions[dim];
        if top.dim() != 1 || !top.get(0, 0).is_positive() {
            return Err(Error::InvalidInput(format!(
                "action on N^{dim} must be 1x1 with positive entry (the topological degree)"
            )));
        }
        Ok(EndoAction {
            dim,
            actions,
            labels: None,
        })
    }

    pub fn with_labels(mut self, labels: Vec<Vec<String>>) -> Result<Self> {
        if labels.len() != self.dim + 1 {
            return Err(Error::DimensionMismatch {
                expected: self.dim + 1,
                found: labels.len(),
            });
        }
        for (p, (l, m)) in labels.iter().zip(&self.actions).enumerate() {
            if l.len() != m.dim() {
                return Err(Error::InvalidInput(format!(
                    "{} labels for N^{p} of rank {}",
                    l.len(),
                    m.dim()
                )));
            }
        }
        self.labels = Some(labels);
        Ok(self)
    }

    /// `f^*` acting as a scalar `k^p` on each `N^p` of rank one, e.g. the
    /// degree-`k` power map on projective space.
    pub fn scalar_powers(dim: usize, k: i64) -> Self {
        let actions = (0..=dim)
            .map(|p| ExactMatrix::from_i64(&[&[k.pow(p as u32)]]))
            .collect();
        EndoAction::new(dim, actions).expect("k >= 1")
    }

    pub fn identity(ranks: &[usize]) -> Result<Self> {
        let dim = ranks.len().saturating_sub(1);
        Self::new(dim, ranks.iter().map(|&r| ExactMatrix::identity(r)).collect())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn actions(&self) -> &[ExactMatrix] {
        &self.actions
    }

    pub fn labels(&self) -> Option<&[Vec<String>]> {
        self.labels.as_deref()
    }

    /// The `m`-th iterate.
    pub fn iterate(&self, m: u64) -> Self {
        EndoAction {
            dim: self.dim,
            actions: self.actions.iter().map(|a| a.pow(m)).collect(),
            labels: self.labels.clone(),
        }
    }

    /// `f^*` on all of `N^*(X)` as one block-diagonal matrix.
    pub fn total(&self) -> ExactMatrix {
        ExactMatrix::block_diag(&self.actions)
    }
}

#[derive(Clone, Debug)]
pub struct DegreeTable {
    pub signatures: Vec<GrowthSignature>,
    pub d: Vec<f64>,
    pub s: Vec<usize>,
    /// Codimensions where the dynamical degree is maximal.
    pub plateau: (usize, usize),
}

impl DegreeTable {
    pub fn max_degree(&self) -> f64 {
        self.d[self.plateau.0]
    }

    pub fn on_plateau(&self, p: usize) -> bool {
        self.plateau.0 <= p && p <= self.plateau.1
    }
}

/// Indices whose enclosure may reach the largest value.
fn maximal_indices(sigs: &[GrowthSignature]) -> Vec<usize> {
    let max_lo = sigs
        .iter()
        .map(|g| g.rho_interval.0.clone())
        .max()
        .expect("at least one codimension");
    (0..sigs.len())
        .filter(|&p| sigs[p].rho_interval.1 >= max_lo)
        .collect()
}

pub fn degree_table(e: &EndoAction) -> Result<DegreeTable> {
    let signatures = e
        .actions
        .iter()
        .map(growth_signature)
        .collect::<Result<Vec<_>>>()?;
    let top = maximal_indices(&signatures);
    let plateau = (*top.first().unwrap(), *top.last().unwrap());
    Ok(DegreeTable {
        d: signatures.iter().map(|g| g.rho_float).collect(),
        s: signatures.iter().map(|g| g.s).collect(),
        signatures,
        plateau,
    })
}

/// Log-concavity of the degrees and concavity of `s_p` on the plateau.
/// Violations mean the data cannot come from a surjective endomorphism of
/// a smooth projective variety; they are reported, not rejected.
pub fn validate_geometric(e: &EndoAction) -> Result<Vec<String>> {
    let table = degree_table(e)?;
    let mut warnings = Vec::new();
    let d = &table.d;
    for p in 1..d.len().saturating_sub(1) {
        if d[p] * d[p] < d[p - 1] * d[p + 1] * (1.0 - REL_TOL) {
            warnings.push(format!(
                "log-concavity fails at p = {p}: d_{p}^2 = {} < d_{}*d_{} = {}",
                d[p] * d[p],
                p - 1,
                p + 1,
                d[p - 1] * d[p + 1]
            ));
        }
    }
    let top = maximal_indices(&table.signatures);
    if top.len() != table.plateau.1 - table.plateau.0 + 1 {
        warnings.push(format!(
            "maximal dynamical degree is attained at non-contiguous codimensions {top:?}"
        ));
    }
    let (p0, p1) = table.plateau;
    for p in p0 + 1..p1 {
        let s = &table.s;
        if 2 * s[p] < s[p - 1] + s[p + 1] {
            warnings.push(format!("s_p is not concave on the plateau at p = {p}"));
        }
    }
    Ok(warnings)
}

#[derive(Clone, Debug)]
pub struct PullbackEntropy {
    pub h_cat: f64,
    pub h_pol: usize,
    /// `s` of the whole action on `N^*`, which must equal `h_pol`.
    pub s_total: usize,
    pub table: DegreeTable,
}

pub fn pullback_entropy_report(e: &EndoAction) -> Result<PullbackEntropy> {
    let table = degree_table(e)?;
    let h_cat = table.max_degree().ln();
    let (p0, p1) = table.plateau;
    let h_pol = (p0..=p1).map(|p| table.s[p]).max().unwrap();
    let s_total = growth_signature(&e.total())?.s;
    if s_total != h_pol {
        return Err(Error::InternalInconsistency(format!(
            "s of the total action is {s_total}, plateau maximum is {h_pol}"
        )));
    }
    Ok(PullbackEntropy {
        h_cat,
        h_pol,
        s_total,
        table,
    })
}

#[derive(Clone, Debug)]
pub struct KuennethReport {
    pub product: EndoAction,
    pub table: DegreeTable,
    /// `max_l d_l d_{k-l}`.
    pub expected_d: Vec<f64>,
    /// `max (s_l + s_{k-l})` over the `l` attaining `expected_d[k]`.
    pub expected_s: Vec<usize>,
    pub mismatches: Vec<String>,
}

impl KuennethReport {
    pub fn passed(&self) -> bool {
        self.mismatches.is_empty()
    }
}

/// The action of `(f, f)` on `X x X`, with `N^k(X x X) = ⊕_l N^l ⊗ N^{k-l}`.
pub fn kuenneth_self_product(e: &EndoAction) -> Result<KuennethReport> {
    let d = e.dim;
    let actions: Vec<ExactMatrix> = (0..=2 * d)
        .map(|k| {
            let blocks: Vec<ExactMatrix> = (k.saturating_sub(d)..=k.min(d))
                .map(|l| tensor_product(&e.actions[l], &e.actions[k - l]))
                .collect();
            ExactMatrix::block_diag(&blocks)
        })
        .collect();
    let product = EndoAction::new(2 * d, actions)?;
    let base = degree_table(e)?;
    let table = degree_table(&product)?;

    let mut expected_d = Vec::with_capacity(2 * d + 1);
    let mut expected_s = Vec::with_capacity(2 * d + 1);
    let mut mismatches = Vec::new();
    for k in 0..=2 * d {
        let ls: Vec<usize> = (k.saturating_sub(d)..=k.min(d)).collect();
        let prods: Vec<f64> = ls.iter().map(|&l| base.d[l] * base.d[k - l]).collect();
        let best = prods.iter().copied().fold(f64::MIN, f64::max);
        let s = ls
            .iter()
            .zip(&prods)
            .filter(|(_, &v)| v >= best * (1.0 - REL_TOL))
            .map(|(&l, _)| base.s[l] + base.s[k - l])
            .max()
            .unwrap();
        if (table.d[k] - best).abs() > REL_TOL * best {
            mismatches.push(format!("d_{k}: product has {}, expected {best}", table.d[k]));
        }
        if table.s[k] != s {
            mismatches.push(format!("s_{k}: product has {}, expected {s}", table.s[k]));
        }
        expected_d.push(best);
        expected_s.push(s);
    }
    Ok(KuennethReport {
        product,
        table,
        expected_d,
        expected_s,
        mismatches,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NefFlag {
    Nef,
    AntiNef,
    Unknown,
}

impl FromStr for NefFlag {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "nef" => Ok(NefFlag::Nef),
            "antinef" | "anti-nef" => Ok(NefFlag::AntiNef),
            "unknown" => Ok(NefFlag::Unknown),
            other => Err(Error::Parse(format!("unknown nef flag {other:?}"))),
        }
    }
}

impl fmt::Display for NefFlag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            NefFlag::Nef => "nef",
            NefFlag::AntiNef => "antinef",
            NefFlag::Unknown => "unknown",
        })
    }
}

/// Multiplication by `c_1(L)` on `N^*(X)`, with optional observed
/// cohomology dimensions `n -> h^k(X, F ⊗ L^n)`.
#[derive(Clone, Debug)]
pub struct LineBundleData {
    dim: usize,
    c1_action: ExactMatrix,
    nef: NefFlag,
    cohomology: BTreeMap<usize, PositiveSequence>,
}

impl LineBundleData {
    pub fn new(
        dim: usize,
        c1_action: ExactMatrix,
        nef: NefFlag,
        cohomology: BTreeMap<usize, PositiveSequence>,
    ) -> Result<Self> {
        let index = nilpotency_index(&c1_action).ok_or(Error::NotNilpotent)?;
        if index > dim + 1 {
            return Err(Error::InvalidInput(format!(
                "c1 has nilpotency index {index}, more than dim + 1 = {}",
                dim + 1
            )));
        }
        Ok(LineBundleData {
            dim,
            c1_action,
            nef,
            cohomology,
        })
    }

    /// Hyperplane class on projective `d`-space: the shift on the basis
    /// `1, H, ..., H^d`.
    pub fn hyperplane(d: usize, nef: NefFlag) -> Self {
        let c1 = ExactMatrix::from_fn(d + 1, |i, j| {
            if i == j + 1 {
                BigRational::one()
            } else {
                BigRational::from_integer(0.into())
            }
        });
        Self::new(d, c1, nef, BTreeMap::new()).unwrap()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn c1_action(&self) -> &ExactMatrix {
        &self.c1_action
    }

    pub fn nef(&self) -> NefFlag {
        self.nef
    }

    pub fn cohomology(&self) -> &BTreeMap<usize, PositiveSequence> {
        &self.cohomology
    }

    pub fn with_cohomology(mut self, k: usize, seq: PositiveSequence) -> Self {
        self.cohomology.insert(k, seq);
        self
    }
}

/// `max{m : c_1(L)^m ≠ 0}`.
pub fn numerical_dimension(lb: &LineBundleData) -> Result<usize> {
    let index = nilpotency_index(&lb.c1_action).ok_or(Error::NotNilpotent)?;
    Ok(index - 1)
}

#[derive(Clone, Debug)]
pub struct LineBundleReport {
    pub h_cat: f64,
    pub nu: usize,
    pub h_pol_lower: usize,
    pub h_pol_upper: usize,
    pub h_pol_exact: Option<usize>,
    pub exp_signature: GrowthSignature,
    /// Fit of each supplied cohomology sequence, by degree.
    pub fits: Vec<(usize, EstimatedSignature)>,
    /// Largest fitted `s` over the supplied sequences.
    pub empirical_h_pol: Option<f64>,
}

pub fn line_bundle_report(lb: &LineBundleData) -> Result<LineBundleReport> {
    let nu = numerical_dimension(lb)?;
    let exp_signature = growth_signature(&exp_nilpotent(&lb.c1_action)?)?;
    if !exp_signature.rho_is_one() || exp_signature.s != nu {
        return Err(Error::InternalInconsistency(format!(
            "exp(c1) has rho = {}, s = {}; expected 1 and {nu}",
            exp_signature.rho_float, exp_signature.s
        )));
    }
    let fits = lb
        .cohomology
        .iter()
        .map(|(&k, seq)| Ok((k, fit_growth(seq, &FitOptions::default())?)))
        .collect::<Result<Vec<_>>>()?;
    let empirical_h_pol = fits.iter().map(|(_, f)| f.s_hat).reduce(f64::max);
    Ok(LineBundleReport {
        h_cat: 0.0,
        nu,
        h_pol_lower: nu,
        h_pol_upper: lb.dim,
        h_pol_exact: (lb.nef != NefFlag::Unknown).then_some(nu),
        exp_signature,
        fits,
        empirical_h_pol,
    })
}

#[derive(Clone, Debug)]
pub struct SerreReport {
    /// `h_t(S_X) = dim * t`.
    pub h_t_slope: usize,
    pub omega: LineBundleReport,
}

pub fn serre_functor_report(dim: usize, omega: &LineBundleData) -> Result<SerreReport> {
    if omega.dim != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            found: omega.dim,
        });
    }
    Ok(SerreReport {
        h_t_slope: dim,
        omega: line_bundle_report(omega)?,
    })
}

/// `n -> C(n + d, d)` for `n = 1..=n_max`: sections of `O(n)` on projective
/// `d`-space.
pub fn binomial_sections(d: usize, n_max: usize) -> Result<PositiveSequence> {
    let vals: Vec<BigRational> = (1..=n_max)
        .map(|n| {
            let mut c = num_bigint::BigInt::one();
            for i in 1..=d {
                c = c * (n + i) / i;
            }
            BigRational::from_integer(c)
        })
        .collect();
    PositiveSequence::from_exact(1, &vals)
}

/// Rational degrees, when every signature has a rational spectral radius.
pub fn exact_degrees(table: &DegreeTable) -> Option<Vec<BigRational>> {
    table
        .signatures
        .iter()
        .map(|g| match &g.rho_exact {
            Some(crate::exact_linalg::RhoExact::Rational(r)) => Some(r.clone()),
            _ => None,
        })
        .collect()
}

/// `d_p` as doubles for display, from exact values where available.
pub fn degree_floats(table: &DegreeTable) -> Vec<f64> {
    match exact_degrees(table) {
        Some(v) => v.iter().map(|r| r.to_f64().unwrap_or(f64::NAN)).collect(),
        None => table.d.clone(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_linalg::exterior_power;

    fn abelian_parabolic() -> EndoAction {
        let j = ExactMatrix::from_i64(&[&[1, 1], &[0, 1]]);
        let h1 = ExactMatrix::block_diag(&[j.clone(), j]);
        let n1 = exterior_power(&h1, 2).unwrap();
        EndoAction::new(2, vec![ExactMatrix::identity(1), n1, ExactMatrix::identity(1)]).unwrap()
    }

    #[test]
    fn power_map_table() {
        let t = degree_table(&EndoAction::scalar_powers(3, 2)).unwrap();
        assert_eq!(t.d, vec![1.0, 2.0, 4.0, 8.0]);
        assert_eq!(t.s, vec![0; 4]);
        assert_eq!(t.plateau, (3, 3));
        let id = EndoAction::identity(&[1, 2, 1]).unwrap();
        assert_eq!(degree_table(&id).unwrap().plateau, (0, 2));
    }

    #[test]
    fn abelian_surface() {
        let e = abelian_parabolic();
        let t = degree_table(&e).unwrap();
        assert_eq!(t.s, vec![0, 2, 0]);
        assert_eq!(t.plateau, (0, 2));
        let r = pullback_entropy_report(&e).unwrap();
        assert_eq!((r.h_cat, r.h_pol), (0.0, 2));
        let k = kuenneth_self_product(&e).unwrap();
        assert!(k.passed(), "{:?}", k.mismatches);
        assert_eq!(k.table.s[2], 4);
    }

    #[test]
    fn power_map_entropy_and_product() {
        let r = pullback_entropy_report(&EndoAction::scalar_powers(2, 2)).unwrap();
        assert!((r.h_cat - 4f64.ln()).abs() < 1e-12);
        assert_eq!(r.h_pol, 0);
        let k = kuenneth_self_product(&EndoAction::scalar_powers(1, 2)).unwrap();
        assert_eq!(k.table.d, vec![1.0, 2.0, 4.0]);
        assert_eq!(k.table.s, vec![0, 0, 0]);
        assert!(k.passed());
    }

    #[test]
    fn geometric_validation() {
        assert!(validate_geometric(&EndoAction::scalar_powers(3, 3)).unwrap().is_empty());
        let crafted = EndoAction::new(
            3,
            vec![
                ExactMatrix::from_i64(&[&[1]]),
                ExactMatrix::from_i64(&[&[3]]),
                ExactMatrix::from_i64(&[&[2]]),
                ExactMatrix::from_i64(&[&[9]]),
            ],
        )
        .unwrap();
        let w = validate_geometric(&crafted).unwrap();
        assert_eq!(w.len(), 1);
        assert!(w[0].contains("p = 2"));
    }

    #[test]
    fn invalid_actions_rejected() {
        let bad = EndoAction::new(1, vec![ExactMatrix::from_i64(&[&[2]]), ExactMatrix::from_i64(&[&[2]])]);
        assert!(bad.is_err());
        let bad = EndoAction::new(1, vec![ExactMatrix::identity(1), ExactMatrix::from_i64(&[&[0]])]);
        assert!(bad.is_err());
        assert!(EndoAction::new(2, vec![ExactMatrix::identity(1)]).is_err());
    }

    #[test]
    fn line_bundles() {
        let o1 = LineBundleData::hyperplane(3, NefFlag::Nef)
            .with_cohomology(0, binomial_sections(3, 400).unwrap());
        let r = line_bundle_report(&o1).unwrap();
        assert_eq!((r.nu, r.h_pol_exact), (3, Some(3)));
        assert!((r.empirical_h_pol.unwrap() - 3.0).abs() < 0.15);
        let triv = LineBundleData::new(2, ExactMatrix::zero(3), NefFlag::Nef, BTreeMap::new()).unwrap();
        assert_eq!(line_bundle_report(&triv).unwrap().h_pol_exact, Some(0));
        assert!(matches!(
            LineBundleData::new(1, ExactMatrix::identity(2), NefFlag::Nef, BTreeMap::new()),
            Err(Error::NotNilpotent)
        ));
    }

    #[test]
    fn serre_functor() {
        let general = LineBundleData::hyperplane(2, NefFlag::Nef);
        let r = serre_functor_report(2, &general).unwrap();
        assert_eq!((r.h_t_slope, r.omega.h_pol_exact), (2, Some(2)));
        // a fibre class F with F^2 = 0 on the basis 1, F, pt
        let fibre = LineBundleData::new(
            2,
            ExactMatrix::from_i64(&[&[0, 0, 0], &[1, 0, 0], &[0, 0, 0]]),
            NefFlag::Nef,
            BTreeMap::new(),
        )
        .unwrap();
        assert_eq!(serre_functor_report(2, &fibre).unwrap().omega.h_pol_exact, Some(1));
        assert!(serre_functor_report(3, &fibre).is_err());
    }
}
