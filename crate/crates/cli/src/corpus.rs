//! Seeded generators and fixed examples shared by `selftest` and the
//! acceptance tests.

use std::collections::BTreeMap;

use catdyn::exact_linalg::poly::{cyclotomic, totient};
use catdyn::exact_linalg::{exterior_power, ExactMatrix};
use catdyn::quiver_hereditary::Quiver;
use catdyn::sl2z_dynamics::{Context, TwistWord};
use catdyn::variety_dynamics::{binomial_sections, EndoAction, LineBundleData, NefFlag};
use catdyn::growth_estimator::PositiveSequence;
use num_bigint::BigInt;
use num_rational::BigRational;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn int(x: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(x))
}

/// Product of random elementary row operations, a row permutation and
/// sign flips. Determinant is `±1`.
pub fn random_unimodular<R: Rng>(rng: &mut R, n: usize) -> ExactMatrix {
    let mut rows: Vec<Vec<i64>> = (0..n)
        .map(|i| (0..n).map(|j| i64::from(i == j)).collect())
        .collect();
    if n > 1 {
        for _ in 0..2 * n {
            let i = rng.gen_range(0..n);
            let mut j = rng.gen_range(0..n - 1);
            if j >= i {
                j += 1;
            }
            let c = *[-2i64, -1, 1, 2].choose(rng).unwrap();
            for k in 0..n {
                rows[i][k] += c * rows[j][k];
            }
        }
    }
    rows.shuffle(rng);
    for r in rows.iter_mut() {
        if rng.gen_bool(0.3) {
            r.iter_mut().for_each(|x| *x = -*x);
        }
    }
    ExactMatrix::from_fn(n, |i, j| int(rows[i][j]))
}

/// Orders `k` whose cyclotomic polynomial has degree at most 4.
const SMALL_ORDERS: [u64; 9] = [1, 2, 3, 4, 5, 6, 8, 10, 12];

/// `U J U^{-1}` with `J` block diagonal of companions of `Φ_k^j`, together
/// with the largest `j`.
#[derive(Clone, Debug)]
pub struct QuasiUnipotentSample {
    pub matrix: ExactMatrix,
    pub j_star: usize,
    pub blocks: Vec<(u64, usize)>,
}

pub fn random_quasi_unipotent<R: Rng>(rng: &mut R, max_dim: usize) -> QuasiUnipotentSample {
    let target = rng.gen_range(1..=max_dim);
    let mut blocks = Vec::new();
    let mut size = 0;
    while size < target {
        let room = target - size;
        let k = *SMALL_ORDERS
            .iter()
            .filter(|&&k| totient(k) as usize <= room)
            .collect::<Vec<_>>()
            .choose(rng)
            .unwrap();
        let phi = totient(*k) as usize;
        let j = rng.gen_range(1..=room / phi);
        blocks.push((*k, j));
        size += phi * j;
    }
    let j_star = blocks.iter().map(|&(_, j)| j).max().unwrap();
    let parts: Vec<ExactMatrix> = blocks
        .iter()
        .map(|&(k, j)| ExactMatrix::companion(&cyclotomic(k).pow(j as u64)))
        .collect();
    let jm = ExactMatrix::block_diag(&parts);
    let u = random_unimodular(rng, size);
    let uinv = u.inverse().expect("unimodular");
    QuasiUnipotentSample {
        matrix: &(&u * &jm) * &uinv,
        j_star,
        blocks,
    }
}

/// Acyclic quiver on at most `max_vertices` vertices with at most
/// `max_parallel` arrows between any two.
pub fn random_acyclic_quiver<R: Rng>(rng: &mut R, max_vertices: usize, max_parallel: usize) -> Quiver {
    let n = rng.gen_range(1..=max_vertices);
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let mut arrows = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            if rng.gen_bool(0.5) {
                continue;
            }
            for _ in 0..rng.gen_range(1..=max_parallel) {
                arrows.push((order[a], order[b]));
            }
        }
    }
    Quiver::new(n, arrows).expect("arrows follow a linear order")
}

/// Every orientation of the `A_n` Dynkin diagram.
pub fn a_n_orientations(n: usize) -> Vec<Quiver> {
    let edges = n.saturating_sub(1);
    (0..1u32 << edges)
        .map(|mask| {
            let arrows = (0..edges)
                .map(|e| if mask >> e & 1 == 1 { (e + 1, e) } else { (e, e + 1) })
                .collect();
            Quiver::new(n, arrows).unwrap()
        })
        .collect()
}

/// A word in `T1^{±1}, T2^{±1}` (exponents up to 2) with at most `max_len`
/// letters and an occasional shift.
pub fn random_a2_word<R: Rng>(rng: &mut R, max_len: usize) -> TwistWord {
    let len = rng.gen_range(1..=max_len);
    let letters: Vec<(u8, i64)> = (0..len)
        .map(|_| (rng.gen_range(1..=2u8), *[-2i64, -1, 1, 2].choose(rng).unwrap()))
        .collect();
    let shift = if rng.gen_bool(0.2) { rng.gen_range(-3..=3) } else { 0 };
    TwistWord::new(Context::A2Cy3, letters, shift)
}

/// The eight matrices of the trichotomy table with their expected class and
/// `h_pol`.
pub fn trichotomy_table() -> Vec<([[i64; 2]; 2], &'static str, u32)> {
    vec![
        ([[1, 0], [0, 1]], "elliptic", 0),
        ([[-1, 0], [0, -1]], "elliptic", 0),
        ([[1, 1], [0, 1]], "parabolic", 1),
        ([[1, 0], [1, 1]], "parabolic", 1),
        ([[0, 1], [-1, 0]], "elliptic", 0),
        ([[1, 1], [-1, 0]], "elliptic", 0),
        ([[2, 1], [1, 1]], "hyperbolic", 0),
        ([[1, -1], [1, 0]], "elliptic", 0),
    ]
}

/// Translation by a parabolic element on a product of two elliptic curves:
/// `f^*` on `N^1` is `Λ²` of two Jordan blocks of size 2.
pub fn abelian_parabolic() -> EndoAction {
    let j = ExactMatrix::from_i64(&[&[1, 1], &[0, 1]]);
    let h1 = ExactMatrix::block_diag(&[j.clone(), j]);
    let n1 = exterior_power(&h1, 2).expect("rank 4");
    EndoAction::new(2, vec![ExactMatrix::identity(1), n1, ExactMatrix::identity(1)]).unwrap()
}

/// `O(1)` on projective `d`-space with `h^0(O(n)) = C(n+d, d)`.
pub fn hyperplane_bundle(d: usize, n_max: usize) -> LineBundleData {
    LineBundleData::hyperplane(d, NefFlag::Nef).with_cohomology(0, binomial_sections(d, n_max).unwrap())
}

/// A surface class `D = H' + E` on the basis `1, H', E, pt` with `D^2 = 0`
/// numerically, so `ν = 1`, while the pulled-back sections still grow like
/// `(n+1)(n+2)/2`.
pub fn nu_one_surface(n_max: usize) -> LineBundleData {
    let c1 = ExactMatrix::from_i64(&[&[0, 0, 0, 0], &[1, 0, 0, 0], &[1, 0, 0, 0], &[0, 1, -1, 0]]);
    let sections: Vec<BigRational> = (1..=n_max as i64).map(|n| int((n + 1) * (n + 2) / 2)).collect();
    let mut coh = BTreeMap::new();
    coh.insert(0, PositiveSequence::from_exact(1, &sections).unwrap());
    LineBundleData::new(2, c1, NefFlag::Unknown, coh).unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;
    use catdyn::exact_linalg::growth_signature;

    #[test]
    fn unimodular_determinant() {
        let mut r = rng(1);
        for n in 1..=8 {
            let u = random_unimodular(&mut r, n);
            let d = u.det();
            assert!(d == int(1) || d == int(-1));
        }
    }

    #[test]
    fn quasi_unipotent_samples() {
        let mut r = rng(2);
        for _ in 0..10 {
            let s = random_quasi_unipotent(&mut r, 8);
            assert!(s.matrix.dim() <= 8 && s.matrix.is_integer());
            let g = growth_signature(&s.matrix).unwrap();
            assert!(g.rho_is_one());
            assert_eq!(g.s, s.j_star - 1, "{:?}", s.blocks);
        }
    }

    #[test]
    fn orientations() {
        assert_eq!(a_n_orientations(1).len(), 1);
        assert_eq!(a_n_orientations(5).len(), 16);
        let mut r = rng(3);
        for _ in 0..20 {
            let q = random_acyclic_quiver(&mut r, 6, 3);
            assert!(q.vertex_count() <= 6);
        }
    }
}
