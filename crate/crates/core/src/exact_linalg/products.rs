use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

use super::matrix::ExactMatrix;
use super::spectral::nilpotency_index;
use crate::error::{Error, Result};

/// Kronecker product with row-major block layout: entry
/// `((i1, i2), (j1, j2))` is `A[i1][j1] * B[i2][j2]`.
pub fn tensor_product(a: &ExactMatrix, b: &ExactMatrix) -> ExactMatrix {
    let nb = b.dim();
    ExactMatrix::from_fn(a.dim() * nb, |i, j| {
        a.get(i / nb, j / nb) * b.get(i % nb, j % nb)
    })
}

/// `k`-subsets of `0..n` in lexicographic order.
pub fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// Matrix of `Λ^k M` in the lexicographic basis of `k`-subsets: the entry
/// at `(I, J)` is the minor of `M` on rows `I` and columns `J`.
pub fn exterior_power(m: &ExactMatrix, k: usize) -> Result<ExactMatrix> {
    let n = m.dim();
    if k == 0 || k > n {
        return Err(Error::ExteriorDegree { k, n });
    }
    let basis = subsets(n, k);
    let minor = |rows: &[usize], cols: &[usize]| {
        ExactMatrix::from_fn(k, |i, j| m.get(rows[i], cols[j]).clone()).det()
    };
    Ok(ExactMatrix::from_fn(basis.len(), |i, j| {
        minor(&basis[i], &basis[j])
    }))
}

/// `exp(N) = sum N^k / k!`, a finite sum for nilpotent `N`.
pub fn exp_nilpotent(n: &ExactMatrix) -> Result<ExactMatrix> {
    let index = nilpotency_index(n).ok_or(Error::NotNilpotent)?;
    let mut acc = ExactMatrix::identity(n.dim());
    let mut term = ExactMatrix::identity(n.dim());
    for k in 1..index {
        term = (&term * n).scale(&BigRational::new(BigInt::one(), BigInt::from(k)));
        acc = &acc + &term;
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tensor_examples() {
        assert_eq!(
            tensor_product(&ExactMatrix::identity(2), &ExactMatrix::identity(3)),
            ExactMatrix::identity(6)
        );
        let j = ExactMatrix::from_i64(&[&[1, 1], &[0, 1]]);
        assert_eq!(tensor_product(&j, &ExactMatrix::from_i64(&[&[1]])), j);
        let ab = ExactMatrix::from_i64(&[&[1, 2], &[3, 4]]);
        let t = tensor_product(&ab, &j);
        assert_eq!(
            t,
            ExactMatrix::from_i64(&[
                &[1, 1, 2, 2],
                &[0, 1, 0, 2],
                &[3, 3, 4, 4],
                &[0, 3, 0, 4],
            ])
        );
    }

    #[test]
    fn tensor_is_multiplicative() {
        let a = ExactMatrix::from_i64(&[&[1, 2], &[0, -1]]);
        let b = ExactMatrix::from_i64(&[&[0, 1, 1], &[2, 0, 1], &[1, 1, 0]]);
        let c = ExactMatrix::from_i64(&[&[3, 0], &[1, 1]]);
        let d = ExactMatrix::from_i64(&[&[1, 0, 2], &[0, 1, 0], &[1, 0, 1]]);
        assert_eq!(
            &tensor_product(&a, &b) * &tensor_product(&c, &d),
            tensor_product(&(&a * &c), &(&b * &d))
        );
    }

    #[test]
    fn exterior_examples() {
        let m = ExactMatrix::from_i64(&[&[1, 2, 0], &[3, 4, 1], &[0, 1, 5]]);
        assert_eq!(exterior_power(&m, 1).unwrap(), m);
        let diag = ExactMatrix::from_i64(&[&[3, 0], &[0, 7]]);
        assert_eq!(exterior_power(&diag, 2).unwrap(), ExactMatrix::from_i64(&[&[21]]));
        // top exterior power is the determinant
        assert_eq!(
            exterior_power(&m, 3).unwrap(),
            ExactMatrix::scalar(m.det())
        );
        assert!(matches!(
            exterior_power(&m, 4),
            Err(Error::ExteriorDegree { k: 4, n: 3 })
        ));
        assert!(exterior_power(&m, 0).is_err());
        assert_eq!(subsets(4, 2).len(), 6);
    }

    #[test]
    fn exterior_power_is_functorial() {
        let a = ExactMatrix::from_i64(&[&[1, 2, 0, 1], &[0, 1, 1, 0], &[2, 0, 1, 1], &[1, 1, 0, 1]]);
        let b = ExactMatrix::from_i64(&[&[0, 1, 0, 0], &[1, 0, 0, 2], &[0, 0, 1, 0], &[3, 0, 1, 1]]);
        for k in 1..=4 {
            assert_eq!(
                exterior_power(&(&a * &b), k).unwrap(),
                &exterior_power(&a, k).unwrap() * &exterior_power(&b, k).unwrap()
            );
        }
    }

    #[test]
    fn exp_of_shift() {
        let n = ExactMatrix::from_i64(&[&[0, 1, 0], &[0, 0, 1], &[0, 0, 0]]);
        let e = exp_nilpotent(&n).unwrap();
        let half = BigRational::new(1.into(), 2.into());
        assert_eq!(e.get(0, 2), &half);
        assert_eq!(e.get(0, 1), &BigRational::one());
        assert!(matches!(
            exp_nilpotent(&ExactMatrix::identity(2)),
            Err(Error::NotNilpotent)
        ));
    }
}
