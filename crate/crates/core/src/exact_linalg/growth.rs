//! Spectral radius and polynomial growth rate of a linear endomorphism.
//!
//! For `φ` with spectral radius `ρ > 0`, `‖φ^n‖` grows like `ρ^n n^s`,
//! where `s + 1` is the largest Jordan block among eigenvalues of modulus
//! `ρ`. The Jordan block sizes are read off the minimal polynomial: a
//! squarefree part of multiplicity `j` contributes blocks of size exactly
//! `j` (and smaller) for each of its roots.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{FromPrimitive, One, ToPrimitive, Zero};

use super::matrix::ExactMatrix;
use super::poly::{squarefree_decomposition, ExactPoly};
use super::roots::{isolate_joint, Separation, DEFAULT_MAX_BITS, DEFAULT_START_BITS};
use super::spectral::{min_poly, nilpotency_index, quasi_unipotent_order};
use crate::error::{Error, Result};

#[derive(Clone, Debug)]
pub struct GrowthOptions {
    /// Starting precision of root isolation, in bits.
    pub precision_bits: u32,
    /// Escalation cap.
    pub max_precision_bits: u32,
    /// Largest acceptable width of the spectral radius enclosure.
    pub tolerance: f64,
}

impl Default for GrowthOptions {
    fn default() -> Self {
        GrowthOptions {
            precision_bits: DEFAULT_START_BITS,
            max_precision_bits: DEFAULT_MAX_BITS,
            tolerance: 1e-12,
        }
    }
}

impl GrowthOptions {
    fn start_bits(&self) -> u32 {
        let from_tol = if self.tolerance > 0.0 && self.tolerance.is_finite() {
            (-self.tolerance.log2()).ceil().max(0.0) as u32 + 2
        } else {
            DEFAULT_START_BITS
        };
        self.precision_bits.max(from_tol).min(self.max_precision_bits)
    }
}

/// Closed form of the spectral radius, when one is available.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RhoExact {
    Rational(BigRational),
    /// `ρ` is the modulus of the `rank`-th largest-modulus root of `factor`
    /// (`rank` 0 is the largest).
    RootOfFactor { factor: ExactPoly, rank: usize },
}

#[derive(Clone, Debug)]
pub struct GrowthSignature {
    pub rho_interval: (BigRational, BigRational),
    pub rho_float: f64,
    pub rho_exact: Option<RhoExact>,
    pub s: usize,
    /// Squarefree parts of the minimal polynomial with a root of modulus
    /// `ρ`, with their multiplicity.
    pub dominant_factors: Vec<(ExactPoly, usize)>,
    pub quasi_unipotent_order: Option<u64>,
    /// Roots of different modulus could not be separated at the precision
    /// cap; `s` is then the conservative (largest) candidate.
    pub tied_moduli: bool,
    pub warnings: Vec<String>,
}

impl GrowthSignature {
    pub fn log_rho(&self) -> f64 {
        self.rho_float.ln()
    }

    /// Exactly one.
    pub fn rho_is_one(&self) -> bool {
        matches!(&self.rho_exact, Some(RhoExact::Rational(r)) if r.is_one())
    }
}

pub fn growth_signature(m: &ExactMatrix) -> Result<GrowthSignature> {
    growth_signature_with(m, &GrowthOptions::default())
}

pub fn growth_signature_with(m: &ExactMatrix, opts: &GrowthOptions) -> Result<GrowthSignature> {
    let mp = min_poly(m);
    if mp.strip_zero_roots().degree() == 0 {
        return Err(Error::NilpotentInput);
    }
    let parts: Vec<(ExactPoly, usize)> = squarefree_decomposition(&mp)?
        .into_iter()
        .map(|(h, j)| (h.strip_zero_roots(), j))
        .filter(|(h, _)| h.degree() > 0)
        .collect();

    let qu = if m.is_integer() {
        quasi_unipotent_order(m)?
    } else {
        None
    };
    if let Some(k) = qu {
        let shifted = &m.pow(k) - &ExactMatrix::identity(m.dim());
        let index = nilpotency_index(&shifted).ok_or_else(|| {
            Error::InternalInconsistency("M^k - I should be nilpotent".into())
        })?;
        let s = index - 1;
        let max_mult = parts.iter().map(|(_, j)| *j).max().unwrap_or(1);
        if max_mult != s + 1 {
            return Err(Error::InternalInconsistency(format!(
                "Jordan size {index} from nilpotency disagrees with minimal polynomial multiplicity {max_mult}"
            )));
        }
        return Ok(GrowthSignature {
            rho_interval: (BigRational::one(), BigRational::one()),
            rho_float: 1.0,
            rho_exact: Some(RhoExact::Rational(BigRational::one())),
            s,
            dominant_factors: parts,
            quasi_unipotent_order: Some(k),
            tied_moduli: false,
            warnings: Vec::new(),
        });
    }

    let factors: Vec<ExactPoly> = parts.iter().map(|(h, _)| h.clone()).collect();
    let joint = isolate_joint(
        &factors,
        opts.start_bits(),
        opts.max_precision_bits,
        Separation::Dominant,
    )?;
    let top = joint.top_classes();
    let dominant: Vec<usize> = (0..factors.len())
        .filter(|&f| joint.class_of[f].iter().any(|c| top.contains(c)))
        .collect();
    let mults: Vec<usize> = dominant.iter().map(|&f| parts[f].1).collect();
    let s = mults.iter().copied().max().unwrap_or(1) - 1;
    let mut warnings = Vec::new();
    let tied = top.len() > 1;
    if tied && mults.iter().any(|&j| j != s + 1) {
        warnings.push(format!(
            "root moduli tied at {} bits; reporting the conservative s = {s}",
            joint.bits
        ));
    }

    let lo = top
        .iter()
        .map(|&c| joint.class_interval[c].0.clone())
        .max()
        .unwrap();
    let hi = top
        .iter()
        .map(|&c| joint.class_interval[c].1.clone())
        .max()
        .unwrap();
    let rho_exact = if top.len() == 1 {
        match &joint.class_exact[top[0]] {
            Some(r) => Some(RhoExact::Rational(r.clone())),
            None => dominant.first().map(|&f| RhoExact::RootOfFactor {
                factor: factors[f].clone(),
                rank: 0,
            }),
        }
    } else {
        None
    };
    let rho_float = match &rho_exact {
        Some(RhoExact::Rational(r)) => r.to_f64().unwrap_or(f64::NAN),
        _ => ((&lo + &hi) / BigRational::from_integer(BigInt::from(2)))
            .to_f64()
            .unwrap_or(f64::NAN),
    };
    // keep the float inside the reported enclosure
    let (lo, hi) = match BigRational::from_f64(rho_float) {
        Some(f) if !f.is_zero() => (lo.clone().min(f.clone()), hi.clone().max(f)),
        _ => (lo, hi),
    };
    Ok(GrowthSignature {
        rho_interval: (lo, hi),
        rho_float,
        rho_exact,
        s,
        dominant_factors: dominant.iter().map(|&f| parts[f].clone()).collect(),
        quasi_unipotent_order: None,
        tied_moduli: tied,
        warnings,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_linalg::products::{exterior_power, tensor_product};

    fn q(v: i64) -> BigRational {
        BigRational::from_integer(v.into())
    }

    #[test]
    fn unipotent_block() {
        let g = growth_signature(&ExactMatrix::from_i64(&[&[1, 1], &[0, 1]])).unwrap();
        assert!(g.rho_is_one());
        assert_eq!(g.s, 1);
        assert_eq!(g.quasi_unipotent_order, Some(1));
    }

    #[test]
    fn identity_and_rotation() {
        let g = growth_signature(&ExactMatrix::identity(4)).unwrap();
        assert!(g.rho_is_one());
        assert_eq!(g.s, 0);
        let g = growth_signature(&ExactMatrix::from_i64(&[&[0, -1], &[1, 0]])).unwrap();
        assert!(g.rho_is_one());
        assert_eq!(g.s, 0);
        assert_eq!(g.quasi_unipotent_order, Some(4));
    }

    #[test]
    fn cat_map() {
        let g = growth_signature(&ExactMatrix::from_i64(&[&[2, 1], &[1, 1]])).unwrap();
        let golden = (3.0 + 5f64.sqrt()) / 2.0;
        assert!((g.rho_float - golden).abs() < 1e-12);
        assert_eq!(g.s, 0);
        assert!(g.rho_interval.0 <= g.rho_interval.1);
        let width = (&g.rho_interval.1 - &g.rho_interval.0).to_f64().unwrap();
        assert!(width <= 1e-12);
        assert_eq!(
            g.rho_exact,
            Some(RhoExact::RootOfFactor {
                factor: ExactPoly::from_i64(&[1, -3, 1]),
                rank: 0
            })
        );
        assert!(!g.tied_moduli);
    }

    #[test]
    fn nilpotent_rejected() {
        assert!(matches!(
            growth_signature(&ExactMatrix::from_i64(&[&[0, 1], &[0, 0]])),
            Err(Error::NilpotentInput)
        ));
        assert!(matches!(
            growth_signature(&ExactMatrix::zero(2)),
            Err(Error::NilpotentInput)
        ));
    }

    #[test]
    fn zero_eigenvalue_with_unit_radius() {
        // diag(J_2(1), 0): not quasi-unipotent but rho = 1 exactly
        let m = ExactMatrix::from_i64(&[&[1, 1, 0], &[0, 1, 0], &[0, 0, 0]]);
        let g = growth_signature(&m).unwrap();
        assert!(g.rho_is_one());
        assert_eq!(g.s, 1);
        assert_eq!(g.quasi_unipotent_order, None);
    }

    #[test]
    fn opposite_real_eigenvalues_are_tied_exactly() {
        // eigenvalues 2 (block of size 2) and -2 (size 1)
        let m = ExactMatrix::from_i64(&[&[2, 1, 0], &[0, 2, 0], &[0, 0, -2]]);
        let g = growth_signature(&m).unwrap();
        assert_eq!(g.rho_exact, Some(RhoExact::Rational(q(2))));
        assert_eq!(g.s, 1);
        assert_eq!(g.dominant_factors.len(), 2);
        assert!(g.warnings.is_empty());
    }

    #[test]
    fn rational_matrix() {
        let half = BigRational::new(1.into(), 2.into());
        let m = ExactMatrix::from_i64(&[&[3, 1], &[0, 3]]).scale(&half);
        let g = growth_signature(&m).unwrap();
        assert_eq!(g.rho_exact, Some(RhoExact::Rational(BigRational::new(3.into(), 2.into()))));
        assert_eq!(g.s, 1);
    }

    #[test]
    fn complex_dominant_pair() {
        // eigenvalues 1 +- 2i (modulus sqrt 5) dominate 2
        let m = ExactMatrix::block_diag(&[
            ExactMatrix::from_i64(&[&[1, -2], &[2, 1]]),
            ExactMatrix::from_i64(&[&[2]]),
        ]);
        let g = growth_signature(&m).unwrap();
        assert!((g.rho_float - 5f64.sqrt()).abs() < 1e-12);
        assert_eq!(g.s, 0);
        // squarefree parts are not split further: (x^2 - 2x + 5)(x - 2)
        assert_eq!(g.dominant_factors, vec![(ExactPoly::from_i64(&[-10, 9, -4, 1]), 1)]);
    }

    #[test]
    fn tensor_and_exterior_examples() {
        let j = ExactMatrix::from_i64(&[&[1, 1], &[0, 1]]);
        let t = tensor_product(&j, &j);
        assert_eq!(growth_signature(&t).unwrap().s, 2);
        let b = ExactMatrix::block_diag(&[j.clone(), j.clone()]);
        let l2 = exterior_power(&b, 2).unwrap();
        assert_eq!(l2.dim(), 6);
        assert_eq!(growth_signature(&l2).unwrap().s, 2);
    }

    #[test]
    fn float_lies_in_interval() {
        let m = ExactMatrix::from_i64(&[&[0, 1, 0], &[0, 0, 1], &[1, 1, 0]]);
        let g = growth_signature(&m).unwrap();
        let f = BigRational::from_f64(g.rho_float).unwrap();
        assert!(g.rho_interval.0 <= f && f <= g.rho_interval.1);
        // plastic number
        assert!((g.rho_float - 1.324717957244746).abs() < 1e-12);
    }
}
