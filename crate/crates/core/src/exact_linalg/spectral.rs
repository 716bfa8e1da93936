//! Characteristic and minimal polynomials, nilpotency and quasi-unipotence.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::matrix::{int_mul, ExactMatrix};
use super::poly::{is_cyclotomic_product, squarefree_decomposition, ExactPoly};
use crate::error::{Error, Result};

/// `det(xI - M)`, monic of degree `n`.
///
/// Integer matrices go through the division-free Berkowitz recursion, which
/// never leaves `Z`; rational matrices through Faddeev–LeVerrier.
pub fn char_poly(m: &ExactMatrix) -> ExactPoly {
    match m.to_integer_entries() {
        Some(a) => ExactPoly::from_bigints(char_poly_berkowitz(&a, m.dim())),
        None => char_poly_faddeev(m),
    }
}

/// Berkowitz: the coefficient vector of each trailing principal submatrix
/// is a Toeplitz matrix times that of the next smaller one. Returns the
/// coefficients lowest degree first.
pub fn char_poly_berkowitz(a: &[BigInt], n: usize) -> Vec<BigInt> {
    let at = |i: usize, j: usize| &a[i * n + j];
    // highest degree first
    let mut vec = vec![BigInt::one(), -at(n - 1, n - 1)];
    for k in (0..n - 1).rev() {
        let m = n - k;
        let mut diag = Vec::with_capacity(m + 1);
        diag.push(BigInt::one());
        diag.push(-at(k, k));
        let mut d: Vec<BigInt> = (k + 1..n).map(|i| at(i, k).clone()).collect();
        for step in 0..m - 1 {
            let q: BigInt = (k + 1..n).zip(&d).map(|(j, dj)| at(k, j) * dj).sum();
            diag.push(-q);
            if step + 1 < m - 1 {
                d = (k + 1..n)
                    .map(|i| (k + 1..n).zip(&d).map(|(j, dj)| at(i, j) * dj).sum())
                    .collect();
            }
        }
        vec = (0..=m)
            .map(|i| (0..m.min(i + 1)).map(|j| &diag[i - j] * &vec[j]).sum())
            .collect();
    }
    vec.reverse();
    vec
}

/// Fraction-free elimination on `xI - M`. Every leading principal minor
/// of `xI - M` is monic, so no pivoting is needed and each division by the
/// previous pivot is exact.
pub fn char_poly_bareiss(m: &ExactMatrix) -> ExactPoly {
    let n = m.dim();
    let mut a: Vec<ExactPoly> = (0..n * n)
        .map(|idx| {
            let (i, j) = (idx / n, idx % n);
            let c = ExactPoly::constant(-m.get(i, j).clone());
            if i == j {
                &c + &ExactPoly::monomial(1)
            } else {
                c
            }
        })
        .collect();
    let mut prev = ExactPoly::one();
    for k in 0..n.saturating_sub(1) {
        let pivot = a[k * n + k].clone();
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &(&pivot * &a[i * n + j]) - &(&a[i * n + k] * &a[k * n + j]);
                a[i * n + j] = num.exact_div(&prev);
            }
        }
        prev = pivot;
    }
    a[n * n - 1].clone()
}

/// Faddeev–LeVerrier recursion.
pub fn char_poly_faddeev(m: &ExactMatrix) -> ExactPoly {
    let n = m.dim();
    let mut coeffs = vec![BigRational::zero(); n + 1];
    coeffs[n] = BigRational::one();
    let ident = ExactMatrix::identity(n);
    let mut mk = ExactMatrix::zero(n);
    for k in 1..=n {
        mk = &(m * &mk) + &ident.scale(&coeffs[n - k + 1]);
        let am = m * &mk;
        coeffs[n - k] = -am.trace() / BigRational::from_integer(BigInt::from(k));
    }
    ExactPoly::new(coeffs)
}

/// Monic annihilating polynomial of least degree, found as the first
/// linear dependency among `I, M, M^2, ...`.
///
/// Elimination is fraction-free over `Z`; a rational `M` is first scaled
/// by the common denominator `D` of its entries and the result rescaled,
/// since `q(x) = p(Dx)` annihilates `M` whenever `p` annihilates `DM`.
pub fn min_poly(m: &ExactMatrix) -> ExactPoly {
    let n = m.dim();
    let den = m
        .entries()
        .iter()
        .fold(BigInt::one(), |acc, e| acc.lcm(e.denom()));
    let scaled: Vec<BigInt> = m
        .entries()
        .iter()
        .map(|e| (e * BigRational::from_integer(den.clone())).to_integer())
        .collect();
    // echelon rows: (vector, pivot column, combination over powers)
    let mut basis: Vec<(Vec<BigInt>, usize, Vec<BigInt>)> = Vec::new();
    let mut power: Vec<BigInt> = (0..n * n)
        .map(|i| if i % (n + 1) == 0 { BigInt::one() } else { BigInt::zero() })
        .collect();
    for k in 0..=n {
        let mut v = power.clone();
        let mut comb = vec![BigInt::zero(); n + 1];
        comb[k] = BigInt::one();
        for (b, piv, bcomb) in &basis {
            if v[*piv].is_zero() {
                continue;
            }
            let g = v[*piv].gcd(&b[*piv]);
            let fv = &b[*piv] / &g;
            let fb = &v[*piv] / &g;
            for (x, y) in v.iter_mut().zip(b) {
                *x = &fv * &*x - &fb * y;
            }
            for (x, y) in comb.iter_mut().zip(bcomb) {
                *x = &fv * &*x - &fb * y;
            }
            let content = v
                .iter()
                .chain(comb.iter())
                .fold(BigInt::zero(), |acc, x| acc.gcd(x));
            if !content.is_zero() && !content.is_one() {
                v.iter_mut().for_each(|x| *x /= &content);
                comb.iter_mut().for_each(|x| *x /= &content);
            }
        }
        match v.iter().position(|x| !x.is_zero()) {
            None => {
                let p = ExactPoly::from_bigints(comb).monic();
                let deg = p.degree();
                let mut scale = BigRational::one();
                let dq = BigRational::from_integer(den.clone());
                let coeffs: Vec<BigRational> = (0..=deg)
                    .map(|i| {
                        let c = p.coeff(i) * &scale;
                        scale *= &dq;
                        c
                    })
                    .collect();
                return ExactPoly::new(coeffs).monic();
            }
            Some(piv) => basis.push((v, piv, comb)),
        }
        power = int_mul(&power, &scaled, n);
    }
    unreachable!("Cayley–Hamilton bounds the minimal polynomial degree by n")
}

/// Smallest `j` with `M^j = 0`, if `M` is nilpotent.
pub fn nilpotency_index(m: &ExactMatrix) -> Option<usize> {
    let n = m.dim();
    let mut power = m.clone();
    for j in 1..=n {
        if power.is_zero() {
            return Some(j);
        }
        power = &power * m;
    }
    None
}

/// Search bound for [`quasi_unipotent_order`]: `2 n^2`.
pub fn quasi_unipotent_search_bound(n: usize) -> u64 {
    2 * (n as u64) * (n as u64)
}

/// Smallest `k <= 2 n^2` with `M^k - I` nilpotent.
///
/// Non-quasi-unipotent input is rejected early: every eigenvalue must be a
/// root of unity, i.e. the radical of the characteristic polynomial must
/// be a product of cyclotomic polynomials.
pub fn quasi_unipotent_order(m: &ExactMatrix) -> Result<Option<u64>> {
    let n = m.dim();
    let entries = m.to_integer_entries().ok_or(Error::NonIntegerEntries)?;
    let cp = char_poly(m);
    let radical = squarefree_decomposition(&cp)?
        .into_iter()
        .fold(ExactPoly::one(), |acc, (h, _)| &acc * &h);
    if !is_cyclotomic_product(&radical) {
        return Ok(None);
    }
    let ident: Vec<BigInt> = (0..n * n)
        .map(|i| if i % (n + 1) == 0 { BigInt::one() } else { BigInt::zero() })
        .collect();
    let mut power = ident.clone();
    for k in 1..=quasi_unipotent_search_bound(n) {
        power = int_mul(&power, &entries, n);
        let shifted: Vec<BigInt> = power.iter().zip(&ident).map(|(a, b)| a - b).collect();
        if int_nilpotent(&shifted, n) {
            return Ok(Some(k));
        }
    }
    Ok(None)
}

/// `A^n = 0`, checked by repeated squaring.
fn int_nilpotent(a: &[BigInt], n: usize) -> bool {
    let mut p = a.to_vec();
    let mut reach = 1;
    while reach < n {
        p = int_mul(&p, &p, n);
        reach *= 2;
    }
    p.iter().all(Zero::is_zero)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> ExactPoly {
        ExactPoly::from_i64(c)
    }

    /// Leibniz expansion of `det(xI - M)` over all permutations.
    fn char_poly_leibniz(m: &ExactMatrix) -> ExactPoly {
        let n = m.dim();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut total = ExactPoly::zero();
        loop {
            let inversions = (0..n)
                .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
                .filter(|&(i, j)| perm[i] > perm[j])
                .count();
            let mut term = ExactPoly::constant(if inversions % 2 == 0 {
                BigRational::one()
            } else {
                -BigRational::one()
            });
            for (i, &j) in perm.iter().enumerate() {
                let mut e = ExactPoly::constant(-m.get(i, j).clone());
                if i == j {
                    e = &e + &ExactPoly::monomial(1);
                }
                term = &term * &e;
            }
            total = &total + &term;
            // next permutation
            let Some(i) = (0..n.saturating_sub(1)).rev().find(|&i| perm[i] < perm[i + 1]) else {
                break;
            };
            let j = (i + 1..n).rev().find(|&j| perm[j] > perm[i]).unwrap();
            perm.swap(i, j);
            perm[i + 1..].reverse();
        }
        total
    }

    #[test]
    fn char_poly_examples() {
        assert_eq!(
            char_poly(&ExactMatrix::from_i64(&[&[1, 1], &[0, 1]])),
            p(&[1, -2, 1])
        );
        assert_eq!(
            char_poly(&ExactMatrix::from_i64(&[&[2, 1], &[1, 1]])),
            p(&[1, -3, 1])
        );
        assert_eq!(char_poly(&ExactMatrix::identity(3)), p(&[-1, 1]).pow(3));
    }

    #[test]
    fn char_poly_routes_agree_with_leibniz() {
        let m = ExactMatrix::from_i64(&[
            &[3, -1, 0, 2],
            &[1, 0, 4, -2],
            &[0, 5, -1, 1],
            &[2, 2, 0, -3],
        ]);
        let brute = char_poly_leibniz(&m);
        assert_eq!(char_poly(&m), brute);
        assert_eq!(char_poly_bareiss(&m), brute);
        assert_eq!(char_poly_faddeev(&m), brute);
        let half = BigRational::new(1.into(), 2.into());
        let r = m.scale(&half);
        assert_eq!(char_poly(&r), char_poly_leibniz(&r));
    }

    #[test]
    fn min_poly_examples() {
        assert_eq!(min_poly(&ExactMatrix::identity(3)), p(&[-1, 1]));
        assert_eq!(
            min_poly(&ExactMatrix::from_i64(&[&[1, 1], &[0, 1]])),
            p(&[-1, 1]).pow(2)
        );
        assert_eq!(
            min_poly(&ExactMatrix::from_i64(&[&[2, 0], &[0, 2]])),
            p(&[-2, 1])
        );
    }

    #[test]
    fn min_poly_of_rational_matrices() {
        let half = BigRational::new(1.into(), 2.into());
        let j = ExactMatrix::from_i64(&[&[1, 2], &[0, 1]]).scale(&half);
        let lin = ExactPoly::new(vec![-half.clone(), BigRational::one()]);
        assert_eq!(min_poly(&j), lin.pow(2));
        let d = ExactMatrix::identity(3).scale(&BigRational::new(2.into(), 3.into()));
        assert_eq!(min_poly(&d).degree(), 1);
        assert!(min_poly(&d).eval(&BigRational::new(2.into(), 3.into())).is_zero());
    }

    #[test]
    fn berkowitz_small_cases() {
        assert_eq!(char_poly(&ExactMatrix::from_i64(&[&[5]])), p(&[-5, 1]));
        let m = ExactMatrix::from_i64(&[&[0, 0, 1], &[1, 0, 0], &[0, 1, 0]]);
        assert_eq!(char_poly(&m), p(&[-1, 0, 0, 1]));
        assert_eq!(char_poly(&m), char_poly_leibniz(&m));
    }

    #[test]
    fn nilpotency_examples() {
        assert_eq!(nilpotency_index(&ExactMatrix::from_i64(&[&[0, 1], &[0, 0]])), Some(2));
        assert_eq!(nilpotency_index(&ExactMatrix::zero(3)), Some(1));
        assert_eq!(nilpotency_index(&ExactMatrix::identity(2)), None);
    }

    #[test]
    fn quasi_unipotent_examples() {
        let rot = ExactMatrix::from_i64(&[&[0, -1], &[1, 0]]);
        assert_eq!(quasi_unipotent_order(&rot).unwrap(), Some(4));
        let unip = ExactMatrix::from_i64(&[&[1, 1], &[0, 1]]);
        assert_eq!(quasi_unipotent_order(&unip).unwrap(), Some(1));
        let cat = ExactMatrix::from_i64(&[&[2, 1], &[1, 1]]);
        assert_eq!(quasi_unipotent_order(&cat).unwrap(), None);
        let half = ExactMatrix::identity(2).scale(&BigRational::new(1.into(), 2.into()));
        assert!(matches!(quasi_unipotent_order(&half), Err(Error::NonIntegerEntries)));
        // zero eigenvalue: never unipotent
        let proj = ExactMatrix::from_i64(&[&[1, 0], &[0, 0]]);
        assert_eq!(quasi_unipotent_order(&proj).unwrap(), None);
    }

    #[test]
    fn quasi_unipotent_order_is_the_lcm_of_eigenvalue_orders() {
        // orders 3, 4 and 5 -> 60, within the 2 n^2 = 128 bound for n = 8
        let blocks = [
            ExactMatrix::companion(&p(&[1, 1, 1])),
            ExactMatrix::companion(&p(&[1, 0, 1])),
            ExactMatrix::companion(&p(&[1, 1, 1, 1, 1])),
        ];
        let m = ExactMatrix::block_diag(&blocks);
        assert_eq!(m.dim(), 8);
        assert_eq!(quasi_unipotent_order(&m).unwrap(), Some(60));
        assert_eq!(quasi_unipotent_search_bound(8), 128);
    }

    #[test]
    fn min_poly_divides_char_poly() {
        let m = ExactMatrix::from_i64(&[&[2, 1, 0], &[0, 2, 0], &[0, 0, 2]]);
        let (_, rem) = char_poly(&m).div_rem(&min_poly(&m));
        assert!(rem.is_zero());
        assert_eq!(min_poly(&m), p(&[-2, 1]).pow(2));
    }
}
