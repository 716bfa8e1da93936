//! Euler forms and Coxeter transformations of acyclic quivers, and the
//! comparison of `h_pol(F)` with the Jordan data of an isometry of the Euler
//! lattice.

use std::collections::VecDeque;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exact_linalg::{growth_signature, ExactMatrix, GrowthSignature};
use crate::growth_estimator::{
    fit_growth, ln_abs, EstimatedSignature, FitOptions, PositiveSequence,
};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Quiver {
    vertex_count: usize,
    arrows: Vec<(usize, usize)>,
    topo_order: Vec<usize>,
}

impl Quiver {
    /// Vertices are `0..n`. Fails on loops, out of range endpoints or
    /// oriented cycles.
    pub fn new(vertex_count: usize, arrows: Vec<(usize, usize)>) -> Result<Self> {
        if vertex_count == 0 {
            return Err(Error::InvalidQuiver("quiver has no vertices".into()));
        }
        for &(i, j) in &arrows {
            if i >= vertex_count || j >= vertex_count {
                return Err(Error::InvalidQuiver(format!(
                    "arrow ({i}, {j}) out of range for {vertex_count} vertices"
                )));
            }
            if i == j {
                return Err(Error::InvalidQuiver(format!("loop at vertex {i}")));
            }
        }
        let mut indeg = vec![0usize; vertex_count];
        for &(_, j) in &arrows {
            indeg[j] += 1;
        }
        let mut queue: VecDeque<usize> = (0..vertex_count).filter(|&v| indeg[v] == 0).collect();
        let mut topo_order = Vec::with_capacity(vertex_count);
        while let Some(v) = queue.pop_front() {
            topo_order.push(v);
            for &(i, j) in &arrows {
                if i == v {
                    indeg[j] -= 1;
                    if indeg[j] == 0 {
                        queue.push_back(j);
                    }
                }
            }
        }
        if topo_order.len() < vertex_count {
            return Err(Error::InvalidQuiver("quiver has an oriented cycle".into()));
        }
        Ok(Quiver {
            vertex_count,
            arrows,
            topo_order,
        })
    }

    /// Same as [`Quiver::new`] with vertices numbered from 1.
    pub fn from_one_based(vertex_count: usize, arrows: &[(usize, usize)]) -> Result<Self> {
        let arrows = arrows
            .iter()
            .map(|&(i, j)| {
                if i == 0 || j == 0 {
                    Err(Error::InvalidQuiver(format!("vertex 0 in arrow ({i}, {j}); indices are 1-based")))
                } else {
                    Ok((i - 1, j - 1))
                }
            })
            .collect::<Result<Vec<_>>>()?;
        Quiver::new(vertex_count, arrows)
    }

    /// `1 -> 2 -> ... -> n`.
    pub fn linear_a(n: usize) -> Result<Self> {
        Quiver::new(n, (1..n).map(|i| (i - 1, i)).collect())
    }

    /// Two vertices with `m` parallel arrows.
    pub fn kronecker(m: usize) -> Self {
        Quiver::new(2, vec![(0, 1); m]).expect("kronecker quiver is acyclic")
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn arrows(&self) -> &[(usize, usize)] {
        &self.arrows
    }

    pub fn topological_order(&self) -> &[usize] {
        &self.topo_order
    }

    pub fn arrow_count(&self, i: usize, j: usize) -> usize {
        self.arrows.iter().filter(|&&a| a == (i, j)).count()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BasisTag {
    Simples,
    Projectives,
    UserSupplied,
}

impl fmt::Display for BasisTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BasisTag::Simples => "simples",
            BasisTag::Projectives => "projectives",
            BasisTag::UserSupplied => "user",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct EulerLattice {
    pub gram: ExactMatrix,
    pub basis_tag: BasisTag,
}

impl EulerLattice {
    pub fn user(gram: ExactMatrix) -> Self {
        EulerLattice {
            gram,
            basis_tag: BasisTag::UserSupplied,
        }
    }

    pub fn rank(&self) -> usize {
        self.gram.dim()
    }

    /// `χ(x, y) = xᵀ G y`.
    pub fn pair(&self, x: &[BigRational], y: &[BigRational]) -> BigRational {
        let gy = self.gram.mul_vec(y);
        x.iter().zip(&gy).map(|(a, b)| a * b).sum()
    }
}

/// Gram matrix of the Euler form in the basis of simples.
pub fn euler_form(q: &Quiver) -> EulerLattice {
    let n = q.vertex_count();
    let mut counts = vec![0i64; n * n];
    for &(i, j) in q.arrows() {
        counts[i * n + j] += 1;
    }
    let gram = ExactMatrix::from_fn(n, |i, j| {
        if i == j {
            BigRational::one()
        } else {
            BigRational::from_integer(BigInt::from(-counts[i * n + j]))
        }
    });
    EulerLattice {
        gram,
        basis_tag: BasisTag::Simples,
    }
}

/// `Φ = -G^{-T} G`.
pub fn coxeter_matrix(q: &Quiver) -> ExactMatrix {
    let g = euler_form(q).gram;
    let ginv_t = g
        .inverse()
        .expect("Euler form of an acyclic quiver is unimodular")
        .transpose();
    -&(&ginv_t * &g)
}

/// `Fᵀ G F == G`.
pub fn check_isometry(lat: &EulerLattice, f: &ExactMatrix) -> Result<bool> {
    if f.dim() != lat.rank() {
        return Err(Error::DimensionMismatch {
            expected: lat.rank(),
            found: f.dim(),
        });
    }
    Ok(&(&f.transpose() * &lat.gram) * f == lat.gram)
}

pub const CROSSCHECK_N_MAX: usize = 200;
pub const CROSSCHECK_RHO_REL_TOL: f64 = 1e-3;
pub const CROSSCHECK_S_TOL: f64 = 0.15;

#[derive(Clone, Debug, PartialEq)]
pub struct PairingCrosscheck {
    pub fit: EstimatedSignature,
    /// Pairs `(i, j)` whose sequence `|χ(e_i, Fⁿ e_j)|` hits zero.
    pub skipped_pairs: Vec<(usize, usize)>,
    pub n_max: usize,
    pub passed: bool,
    /// The lattice is not known to come from a hereditary algebra, so the
    /// sequence only bounds the growth from below.
    pub heuristic: bool,
}

#[derive(Clone, Debug)]
pub struct HereditaryReport {
    pub h_cat: f64,
    pub h_pol: usize,
    pub signature: GrowthSignature,
    pub crosscheck: PairingCrosscheck,
    pub notes: Vec<String>,
}

pub fn hereditary_report(lat: &EulerLattice, f: &ExactMatrix) -> Result<HereditaryReport> {
    hereditary_report_with(lat, f, CROSSCHECK_N_MAX)
}

pub fn hereditary_report_with(lat: &EulerLattice, f: &ExactMatrix, n_max: usize) -> Result<HereditaryReport> {
    if !check_isometry(lat, f)? {
        return Err(Error::NotAnIsometry);
    }
    if !f.is_integer() {
        return Err(Error::NonIntegerEntries);
    }
    let signature = growth_signature(f)?;
    let crosscheck = pairing_crosscheck(lat, f, &signature, n_max)?;
    let mut notes = vec!["the equality with mass growth assumes a numerical stability condition".to_string()];
    if crosscheck.heuristic {
        notes.push("user lattice: the pairing crosscheck is a lower-bound heuristic".to_string());
    }
    Ok(HereditaryReport {
        h_cat: signature.log_rho(),
        h_pol: signature.s,
        signature,
        crosscheck,
        notes,
    })
}

/// Fits `n -> sum_{i,j} |χ(e_i, Fⁿ e_j)|`. Single pairs can vanish along
/// subsequences (they do for every Dynkin quiver), the sum over all pairs
/// cannot unless the Gram matrix is singular.
fn pairing_crosscheck(
    lat: &EulerLattice,
    f: &ExactMatrix,
    sig: &GrowthSignature,
    n_max: usize,
) -> Result<PairingCrosscheck> {
    let d = lat.rank();
    // entry (i, j) of gram * F^n is χ(e_i, Fⁿ e_j)
    let mut vanished = vec![false; d * d];
    let mut power = f.clone();
    let mut logs = Vec::with_capacity(n_max);
    for _ in 1..=n_max {
        let pairings = &lat.gram * &power;
        for (k, e) in pairings.entries().iter().enumerate() {
            vanished[k] |= e.is_zero();
        }
        let total = pairings.abs_sum();
        if total.is_zero() {
            return Err(Error::AllPairingsDegenerate);
        }
        logs.push(ln_abs(&total));
        power = &power * f;
    }
    let skipped_pairs = (0..d * d).filter(|&k| vanished[k]).map(|k| (k / d, k % d)).collect();
    let seq = PositiveSequence::from_logs(1, logs)?;
    let fit = fit_growth(&seq, &FitOptions::default())?;
    let rho = sig.rho_float;
    let passed = (fit.rho_hat - rho).abs() <= CROSSCHECK_RHO_REL_TOL * rho
        && (fit.s_hat - sig.s as f64).abs() <= CROSSCHECK_S_TOL;
    Ok(PairingCrosscheck {
        fit,
        skipped_pairs,
        n_max,
        passed,
        heuristic: lat.basis_tag == BasisTag::UserSupplied,
    })
}

/// Smallest `h ≤ bound` with `Φ^h = ±I`.
pub fn order_up_to_sign(f: &ExactMatrix, bound: u64) -> Option<u64> {
    let mut p = f.clone();
    for h in 1..=bound {
        if p.is_identity() || (-&p).is_identity() {
            return Some(h);
        }
        p = &p * f;
    }
    None
}

impl HereditaryReport {
    pub fn summary(&self) -> String {
        format!(
            "h_cat = {}, h_pol = {}, crosscheck {}",
            self.h_cat,
            self.h_pol,
            if self.crosscheck.passed { "ok" } else { "FAILED" }
        )
    }
}
