//! Certified enclosures for the moduli of the complex roots of squarefree
//! rational polynomials.
//!
//! Roots are approximated by Weierstrass (Durand–Kerner) iteration in
//! binary fixed point, seeded by a double-precision Aberth run. Each
//! approximation `z_i` is then certified with exact rational arithmetic:
//! the disk of radius `deg * |W_i|` around `z_i`, where `W_i` is the
//! Weierstrass correction, contains a root, and pairwise disjoint disks
//! contain exactly one root each.
//!
//! Roots whose moduli are provably equal (complex conjugates, roots
//! swapped by `x -> -x` for even or odd factors, rational roots, roots of
//! cyclotomic factors) are grouped into modulus classes. Only distinct
//! classes need separating intervals.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::poly::{is_cyclotomic_product, ExactPoly};
use crate::error::{Error, Result};

pub const DEFAULT_START_BITS: u32 = 64;
pub const DEFAULT_MAX_BITS: u32 = 1024;

/// One root of a factor, with an enclosure of its modulus.
#[derive(Clone, Debug)]
pub struct RootEstimate {
    pub re: f64,
    pub im: f64,
    pub modulus_lo: BigRational,
    pub modulus_hi: BigRational,
    /// Set when the modulus is known in closed form.
    pub exact_modulus: Option<BigRational>,
}

impl RootEstimate {
    pub fn modulus_f64(&self) -> f64 {
        match &self.exact_modulus {
            Some(m) => m.to_f64().unwrap_or(f64::NAN),
            None => ((&self.modulus_lo + &self.modulus_hi) / BigRational::from_integer(2.into()))
                .to_f64()
                .unwrap_or(f64::NAN),
        }
    }
}

/// All roots of a family of pairwise coprime squarefree factors.
#[derive(Clone, Debug)]
pub struct JointRoots {
    /// `roots[f]` holds the roots of factor `f`.
    pub roots: Vec<Vec<RootEstimate>>,
    /// Modulus class of each root, indexed like `roots`.
    pub class_of: Vec<Vec<usize>>,
    /// Enclosure of each class's modulus (intersection over its members).
    pub class_interval: Vec<(BigRational, BigRational)>,
    pub class_exact: Vec<Option<BigRational>>,
    /// Working precision reached.
    pub bits: u32,
    /// Whether the requested separation was achieved.
    pub separated: bool,
}

impl JointRoots {
    /// Classes that may attain the largest modulus.
    pub fn top_classes(&self) -> Vec<usize> {
        let max_lo = self
            .class_interval
            .iter()
            .map(|(lo, _)| lo.clone())
            .max()
            .unwrap_or_else(BigRational::zero);
        (0..self.class_interval.len())
            .filter(|&c| self.class_interval[c].1 >= max_lo)
            .collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Separation {
    /// Every pair of distinct modulus classes must have disjoint intervals.
    All,
    /// Only the class of largest modulus must be isolated from the rest.
    Dominant,
}

/// Moduli of all complex roots of a squarefree polynomial, each enclosed
/// in an interval of width at most `2^-precision`.
///
/// Fails with [`Error::PrecisionExhausted`] when two roots of different
/// modulus cannot be told apart at the escalation cap; callers may treat
/// them as tied.
pub fn root_moduli(h: &ExactPoly, precision: u32) -> Result<Vec<RootEstimate>> {
    if h.is_zero() || h.degree() == 0 {
        return Err(Error::InvalidInput("root_moduli needs degree >= 1".into()));
    }
    let cap = DEFAULT_MAX_BITS.max(precision);
    let joint = isolate_joint(
        std::slice::from_ref(h),
        precision.max(1),
        cap,
        Separation::All,
    )?;
    if !joint.separated {
        return Err(Error::PrecisionExhausted { bits: joint.bits });
    }
    Ok(joint.roots.into_iter().next().unwrap())
}

/// Isolates the roots of every factor jointly, doubling the precision
/// from `start_bits` until the separation goal holds or `max_bits` is
/// reached. Interval widths are at most `2^-start_bits`.
pub fn isolate_joint(
    factors: &[ExactPoly],
    start_bits: u32,
    max_bits: u32,
    goal: Separation,
) -> Result<JointRoots> {
    let mut isolators = factors
        .iter()
        .map(|f| {
            if f.is_zero() || f.degree() == 0 {
                Err(Error::InvalidInput("factor of degree 0".into()))
            } else if f.gcd(&f.derivative()).degree() > 0 {
                Err(Error::InvalidInput(format!("factor {f} is not squarefree")))
            } else {
                Ok(Isolator::new(f))
            }
        })
        .collect::<Result<Vec<_>>>()?;

    let mut bits = start_bits.max(8);
    loop {
        let mut roots = Vec::with_capacity(factors.len());
        for iso in isolators.iter_mut() {
            roots.push(iso.certified(bits));
        }
        let joint = classify(&isolators, roots, bits);
        let done = match goal {
            Separation::All => all_separated(&joint),
            Separation::Dominant => joint.top_classes().len() == 1,
        };
        if done || bits >= max_bits {
            return Ok(JointRoots {
                separated: done,
                ..joint
            });
        }
        bits = (bits * 2).min(max_bits);
    }
}

fn all_separated(j: &JointRoots) -> bool {
    let iv = &j.class_interval;
    for a in 0..iv.len() {
        for b in a + 1..iv.len() {
            if iv[a].0 <= iv[b].1 && iv[b].0 <= iv[a].1 {
                return false;
            }
        }
    }
    true
}

/// Complex number `(re + i im) / 2^scale`.
#[derive(Clone, Debug, PartialEq)]
struct Fixed {
    re: BigInt,
    im: BigInt,
}

struct Isolator {
    poly: ExactPoly,
    /// Primitive integer coefficients, lowest first.
    int_coeffs: Vec<BigInt>,
    cyclotomic: bool,
    symmetric: bool,
    /// Fixed-point approximations at `scale` fractional bits.
    approx: Vec<Fixed>,
    scale: u32,
    exact_roots: Vec<Option<BigRational>>,
}

/// Disk around one approximation.
struct Disk {
    center: (BigRational, BigRational),
    radius_sq: BigRational,
    radius_hi: BigRational,
    modulus: (BigRational, BigRational),
}

fn pow2(bits: u32) -> BigInt {
    BigInt::one() << bits as usize
}

fn ratio(num: BigInt, den_bits: u32) -> BigRational {
    BigRational::new(num, pow2(den_bits))
}

fn f64_to_fixed(x: f64, scale: u32) -> BigInt {
    if !x.is_finite() || x == 0.0 {
        return BigInt::zero();
    }
    let bits = x.to_bits();
    let sign = if bits >> 63 == 0 { 1 } else { -1 };
    let exp = ((bits >> 52) & 0x7ff) as i64;
    let mant = if exp == 0 {
        (bits & 0xfffffffffffff) << 1
    } else {
        (bits & 0xfffffffffffff) | 0x10000000000000
    };
    // x = mant * 2^(exp - 1075)
    let shift = exp - 1075 + scale as i64;
    let m = BigInt::from(mant) * sign;
    if shift >= 0 {
        m << shift as usize
    } else {
        m >> (-shift) as usize
    }
}

/// Floor of the square root of a nonnegative rational, to `bits`
/// fractional bits; returns `(lo, hi)` with `lo <= sqrt(q) <= hi`.
fn sqrt_bounds(q: &BigRational, bits: u32) -> (BigRational, BigRational) {
    if q.is_zero() {
        return (BigRational::zero(), BigRational::zero());
    }
    let scaled = (q.numer() << (2 * bits as usize)) / q.denom();
    let s = scaled.sqrt();
    let exact = &s * &s == scaled && (q.numer() << (2 * bits as usize)).is_multiple_of(q.denom());
    let lo = ratio(s.clone(), bits);
    let hi = if exact { lo.clone() } else { ratio(s + 1, bits) };
    (lo, hi)
}

impl Isolator {
    fn new(poly: &ExactPoly) -> Self {
        let int_coeffs = poly.primitive_part();
        let reflected = poly.reflect();
        let symmetric = reflected == *poly || reflected == -poly;
        Isolator {
            poly: poly.clone(),
            int_coeffs,
            cyclotomic: is_cyclotomic_product(poly),
            symmetric,
            approx: Vec::new(),
            scale: 0,
            exact_roots: Vec::new(),
        }
    }

    fn degree(&self) -> usize {
        self.int_coeffs.len() - 1
    }

    fn initial_guess(&mut self) {
        let d = self.degree();
        let scale = 64;
        if d == 1 {
            let root = -BigRational::new(self.int_coeffs[0].clone(), self.int_coeffs[1].clone());
            let re = (root.numer() << scale as usize) / root.denom();
            self.approx = vec![Fixed {
                re,
                im: BigInt::zero(),
            }];
            self.scale = scale;
            return;
        }
        let roots = aberth_f64(&self.int_coeffs);
        self.approx = roots
            .iter()
            .map(|&(re, im)| Fixed {
                re: f64_to_fixed(re, scale),
                im: f64_to_fixed(im, scale),
            })
            .collect();
        self.scale = scale;
        // conjugate-symmetric seeds stay symmetric under the iteration
        self.perturb();
    }

    fn rescale(&mut self, scale: u32) {
        if scale > self.scale {
            let s = (scale - self.scale) as usize;
            for z in &mut self.approx {
                z.re <<= s;
                z.im <<= s;
            }
        } else if scale < self.scale {
            let s = (self.scale - scale) as usize;
            for z in &mut self.approx {
                z.re >>= s;
                z.im >>= s;
            }
        }
        self.scale = scale;
    }

    /// One Gauss–Seidel sweep of Weierstrass corrections; returns the
    /// largest correction magnitude as a fixed-point squared norm.
    fn weierstrass_sweep(&mut self) -> BigInt {
        let scale = self.scale as usize;
        let d = self.degree();
        let coeffs: Vec<BigInt> = self.int_coeffs.iter().map(|c| c << scale).collect();
        let lc = &self.int_coeffs[d];
        let mut worst = BigInt::zero();
        for i in 0..d {
            let z = self.approx[i].clone();
            // Horner in fixed point
            let (mut ar, mut ai) = (coeffs[d].clone(), BigInt::zero());
            for k in (0..d).rev() {
                let nr = (&ar * &z.re - &ai * &z.im) >> scale;
                let ni = (&ar * &z.im + &ai * &z.re) >> scale;
                ar = nr + &coeffs[k];
                ai = ni;
            }
            // lc * prod (z_i - z_j), kept as fixed point
            let (mut pr, mut pi) = (lc << scale, BigInt::zero());
            for j in 0..d {
                if j == i {
                    continue;
                }
                let mut dr = &z.re - &self.approx[j].re;
                let di = &z.im - &self.approx[j].im;
                if dr.is_zero() && di.is_zero() {
                    dr = BigInt::one();
                }
                let nr = (&pr * &dr - &pi * &di) >> scale;
                let ni = (&pr * &di + &pi * &dr) >> scale;
                pr = nr;
                pi = ni;
            }
            let den = &pr * &pr + &pi * &pi;
            if den.is_zero() {
                continue;
            }
            let wr = ((&ar * &pr + &ai * &pi) << scale) / &den;
            let wi = ((&ai * &pr - &ar * &pi) << scale) / &den;
            let mag = &wr * &wr + &wi * &wi;
            if mag > worst {
                worst = mag;
            }
            self.approx[i].re -= wr;
            self.approx[i].im -= wi;
        }
        worst
    }

    fn iterate_until(&mut self, target_bits: u32) {
        if self.degree() == 1 {
            return;
        }
        // stop once corrections are below 2^-target
        let threshold = pow2(2 * (self.scale.saturating_sub(target_bits)));
        for _ in 0..400 {
            let worst = self.weierstrass_sweep();
            if worst <= threshold {
                break;
            }
        }
    }

    /// Exact disks around the current approximations.
    fn disks(&self) -> Option<Vec<Disk>> {
        let d = self.degree();
        let scale = self.scale;
        let lc = &self.int_coeffs[d];
        let mut out = Vec::with_capacity(d);
        for i in 0..d {
            let z = &self.approx[i];
            let center = (ratio(z.re.clone(), scale), ratio(z.im.clone(), scale));
            // P(z) * 2^(scale * d), integer Horner
            let (mut ar, mut ai) = (self.int_coeffs[d].clone(), BigInt::zero());
            for (m, k) in (0..d).rev().enumerate() {
                let nr = &ar * &z.re - &ai * &z.im;
                let ni = &ar * &z.im + &ai * &z.re;
                ar = nr + (&self.int_coeffs[k] << (scale as usize * (m + 1)));
                ai = ni;
            }
            // prod (z_i - z_j) * 2^(scale (d - 1))
            let (mut pr, mut pi) = (BigInt::one(), BigInt::zero());
            for j in 0..d {
                if j == i {
                    continue;
                }
                let dr = &z.re - &self.approx[j].re;
                let di = &z.im - &self.approx[j].im;
                let nr = &pr * &dr - &pi * &di;
                let ni = &pr * &di + &pi * &dr;
                pr = nr;
                pi = ni;
            }
            let prod_sq = &pr * &pr + &pi * &pi;
            if prod_sq.is_zero() {
                return None;
            }
            let val_sq = &ar * &ar + &ai * &ai;
            // |W|^2 = |P(z)|^2 / (lc^2 |prod|^2), with the powers of two collected
            let deg_sq = BigInt::from(d * d);
            let radius_sq = BigRational::new(
                val_sq * deg_sq,
                lc * lc * prod_sq * pow2(2 * scale),
            );
            let (_, radius_hi) = sqrt_bounds(&radius_sq, scale + 8);
            let abs_sq = ratio(&z.re * &z.re + &z.im * &z.im, 2 * scale);
            let (m_lo, m_hi) = sqrt_bounds(&abs_sq, scale + 8);
            let lo = &m_lo - &radius_hi;
            let modulus = (
                if lo.is_negative() {
                    BigRational::zero()
                } else {
                    lo
                },
                m_hi + &radius_hi,
            );
            out.push(Disk {
                center,
                radius_sq,
                radius_hi,
                modulus,
            });
        }
        Some(out)
    }

    fn disks_disjoint(disks: &[Disk]) -> bool {
        for a in 0..disks.len() {
            for b in a + 1..disks.len() {
                if disk_overlap(&disks[a], &disks[b].center, &disks[b].radius_hi) {
                    return false;
                }
            }
        }
        true
    }

    /// Refines until every disk is disjoint and every modulus interval
    /// has width at most `2^-bits`.
    fn certified(&mut self, bits: u32) -> Vec<RootEstimate> {
        if self.approx.is_empty() {
            self.initial_guess();
        }
        let width_goal = BigRational::new(BigInt::one(), pow2(bits));
        let cap = 4 * (bits + 32);
        let mut work = (bits + 32).max(self.scale).min(cap);
        for attempt in 1..=12 {
            self.rescale(work);
            self.iterate_until(bits + 16);
            if let Some(disks) = self.disks() {
                let tight = disks
                    .iter()
                    .all(|dk| &dk.modulus.1 - &dk.modulus.0 <= width_goal);
                if (tight && Self::disks_disjoint(&disks)) || attempt == 12 {
                    // on the last attempt the intervals are still valid, only wide
                    return self.finish(disks);
                }
            }
            if work >= cap || attempt > 4 {
                self.perturb();
            }
            work = (work * 2).min(cap);
        }
        panic!("root refinement failed for {}", self.poly)
    }

    fn perturb(&mut self) {
        let s = self.scale as usize;
        for (k, z) in self.approx.iter_mut().enumerate() {
            z.re += BigInt::from(k as i64 + 1) << s.saturating_sub(40);
            z.im += BigInt::from(2 * k as i64 + 1) << s.saturating_sub(41);
        }
    }

    fn finish(&mut self, disks: Vec<Disk>) -> Vec<RootEstimate> {
        self.exact_roots = disks.iter().map(|dk| self.rational_root_in(dk)).collect();
        disks
            .iter()
            .zip(&self.exact_roots)
            .map(|(dk, exact)| {
                let exact_modulus = match exact {
                    Some(r) => Some(r.abs()),
                    None if self.cyclotomic => Some(BigRational::one()),
                    None => None,
                };
                let (lo, hi) = match &exact_modulus {
                    Some(m) => (m.clone(), m.clone()),
                    None => dk.modulus.clone(),
                };
                let (re, im) = match exact {
                    Some(r) => (r.to_f64().unwrap_or(f64::NAN), 0.0),
                    None => (
                        dk.center.0.to_f64().unwrap_or(f64::NAN),
                        dk.center.1.to_f64().unwrap_or(f64::NAN),
                    ),
                };
                RootEstimate {
                    re,
                    im,
                    modulus_lo: lo,
                    modulus_hi: hi,
                    exact_modulus,
                }
            })
            .collect()
    }

    /// A rational root inside the disk, found by continued-fraction
    /// reconstruction of the real part with denominators dividing the
    /// leading coefficient.
    fn rational_root_in(&self, dk: &Disk) -> Option<BigRational> {
        let (cr, ci) = &dk.center;
        // the disk must reach the real axis
        if ci * ci > dk.radius_sq {
            return None;
        }
        let lc = self.int_coeffs.last().unwrap().abs();
        for cand in convergents(cr, &lc) {
            if !lc.is_multiple_of(cand.denom()) {
                continue;
            }
            let dr = &cand - cr;
            if &dr * &dr + ci * ci > dk.radius_sq {
                continue;
            }
            if self.poly.eval(&cand).is_zero() {
                return Some(cand);
            }
        }
        None
    }
}

fn disk_overlap(a: &Disk, center: &(BigRational, BigRational), radius_hi: &BigRational) -> bool {
    let dr = &a.center.0 - &center.0;
    let di = &a.center.1 - &center.1;
    let dist_sq = &dr * &dr + &di * &di;
    let reach = &a.radius_hi + radius_hi;
    dist_sq <= &reach * &reach
}

/// Continued-fraction convergents of `x` with denominators up to `max_den`.
fn convergents(x: &BigRational, max_den: &BigInt) -> Vec<BigRational> {
    let mut out = Vec::new();
    let (mut h0, mut h1) = (BigInt::zero(), BigInt::one());
    let (mut k0, mut k1) = (BigInt::one(), BigInt::zero());
    let mut rest = x.clone();
    for _ in 0..64 {
        let a = rest.floor().to_integer();
        let h2 = &a * &h1 + &h0;
        let k2 = &a * &k1 + &k0;
        if &k2 > max_den {
            break;
        }
        out.push(BigRational::new(h2.clone(), k2.clone()));
        // also try the neighbouring integers for the first step
        if out.len() == 1 {
            out.push(BigRational::from_integer(&h2 + 1));
        }
        h0 = std::mem::replace(&mut h1, h2);
        k0 = std::mem::replace(&mut k1, k2);
        let frac = &rest - BigRational::from_integer(a);
        if frac.is_zero() {
            break;
        }
        rest = frac.recip();
    }
    out
}

/// Groups roots into classes of provably equal modulus.
fn classify(
    isolators: &[Isolator],
    roots: Vec<Vec<RootEstimate>>,
    bits: u32,
) -> JointRoots {
    let offsets: Vec<usize> = roots
        .iter()
        .scan(0, |acc, r| {
            let o = *acc;
            *acc += r.len();
            Some(o)
        })
        .collect();
    let total: usize = roots.iter().map(Vec::len).sum();
    let mut uf = UnionFind::new(total);

    for (f, iso) in isolators.iter().enumerate() {
        let Some(disks) = iso.disks() else { continue };
        for (i, dk) in disks.iter().enumerate() {
            let conj = (dk.center.0.clone(), -dk.center.1.clone());
            partner(&disks, &conj, &dk.radius_hi)
                .into_iter()
                .for_each(|j| uf.union(offsets[f] + i, offsets[f] + j));
            if iso.symmetric {
                let neg = (-dk.center.0.clone(), -dk.center.1.clone());
                partner(&disks, &neg, &dk.radius_hi)
                    .into_iter()
                    .for_each(|j| uf.union(offsets[f] + i, offsets[f] + j));
            }
        }
    }
    // equal closed-form moduli, across factors too
    let flat: Vec<(usize, &RootEstimate)> = roots
        .iter()
        .enumerate()
        .flat_map(|(f, rs)| rs.iter().enumerate().map(move |(i, r)| (f, i, r)))
        .map(|(f, i, r)| (offsets[f] + i, r))
        .collect();
    for a in 0..flat.len() {
        for b in a + 1..flat.len() {
            if let (Some(x), Some(y)) = (&flat[a].1.exact_modulus, &flat[b].1.exact_modulus) {
                if x == y {
                    uf.union(flat[a].0, flat[b].0);
                }
            }
        }
    }

    let mut class_id = vec![usize::MAX; total];
    let mut class_interval: Vec<(BigRational, BigRational)> = Vec::new();
    let mut class_exact: Vec<Option<BigRational>> = Vec::new();
    for (g, r) in &flat {
        let root = uf.find(*g);
        if class_id[root] == usize::MAX {
            class_id[root] = class_interval.len();
            class_interval.push((r.modulus_lo.clone(), r.modulus_hi.clone()));
            class_exact.push(r.exact_modulus.clone());
        } else {
            let c = class_id[root];
            let iv = &mut class_interval[c];
            if r.modulus_lo > iv.0 {
                iv.0 = r.modulus_lo.clone();
            }
            if r.modulus_hi < iv.1 {
                iv.1 = r.modulus_hi.clone();
            }
            if class_exact[c].is_none() {
                class_exact[c] = r.exact_modulus.clone();
            }
        }
    }
    for (c, ex) in class_exact.iter().enumerate() {
        if let Some(m) = ex {
            class_interval[c] = (m.clone(), m.clone());
        }
    }
    let class_of = roots
        .iter()
        .enumerate()
        .map(|(f, rs)| {
            (0..rs.len())
                .map(|i| class_id[uf.find(offsets[f] + i)])
                .collect()
        })
        .collect();
    JointRoots {
        roots,
        class_of,
        class_interval,
        class_exact,
        bits,
        separated: false,
    }
}

/// Index of the unique disk meeting the image disk, if unique.
fn partner(disks: &[Disk], center: &(BigRational, BigRational), radius_hi: &BigRational) -> Option<usize> {
    let hits: Vec<usize> = disks
        .iter()
        .enumerate()
        .filter(|(_, d)| disk_overlap(d, center, radius_hi))
        .map(|(j, _)| j)
        .collect();
    (hits.len() == 1).then(|| hits[0])
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb);
        }
    }
}

/// Aberth–Ehrlich iteration in double precision, used only to seed the
/// exact refinement. Falls back to points on a circle when the
/// coefficients do not fit in an `f64`.
fn aberth_f64(int_coeffs: &[BigInt]) -> Vec<(f64, f64)> {
    let d = int_coeffs.len() - 1;
    let lc = int_coeffs[d].to_f64().unwrap_or(f64::INFINITY);
    let c: Vec<f64> = int_coeffs
        .iter()
        .map(|x| x.to_f64().unwrap_or(f64::INFINITY) / lc)
        .collect();
    let finite = c.iter().all(|x| x.is_finite());
    let radius = if finite {
        // Fujiwara-type bound
        (0..d)
            .map(|k| c[k].abs().powf(1.0 / (d - k) as f64))
            .fold(0.0_f64, f64::max)
            .max(1e-3)
            * 2.0
    } else {
        let bits = int_coeffs.iter().map(|x| x.bits()).max().unwrap_or(1) as f64;
        2f64.powf(bits / d as f64).min(1e150)
    };
    let mut z: Vec<(f64, f64)> = (0..d)
        .map(|k| {
            let theta = 2.0 * std::f64::consts::PI * (k as f64 + 0.25) / d as f64 + 0.4;
            (radius * theta.cos(), radius * theta.sin())
        })
        .collect();
    if !finite {
        return z;
    }
    let cmul = |a: (f64, f64), b: (f64, f64)| (a.0 * b.0 - a.1 * b.1, a.0 * b.1 + a.1 * b.0);
    let cdiv = |a: (f64, f64), b: (f64, f64)| {
        let den = b.0 * b.0 + b.1 * b.1;
        ((a.0 * b.0 + a.1 * b.1) / den, (a.1 * b.0 - a.0 * b.1) / den)
    };
    for _ in 0..500 {
        let mut moved = 0.0_f64;
        for i in 0..d {
            let zi = z[i];
            let (mut p, mut dp) = ((1.0, 0.0), (0.0, 0.0));
            for k in (0..d).rev() {
                dp = cmul(dp, zi);
                dp = (dp.0 + p.0, dp.1 + p.1);
                p = cmul(p, zi);
                p = (p.0 + c[k], p.1);
            }
            if p == (0.0, 0.0) {
                continue;
            }
            let ratio_ = cdiv(p, dp);
            let mut s = (0.0, 0.0);
            for (j, zj) in z.iter().enumerate() {
                if j != i {
                    let diff = (zi.0 - zj.0, zi.1 - zj.1);
                    let inv = cdiv((1.0, 0.0), diff);
                    s = (s.0 + inv.0, s.1 + inv.1);
                }
            }
            let denom = {
                let t = cmul(ratio_, s);
                (1.0 - t.0, -t.1)
            };
            let step = cdiv(ratio_, denom);
            if !(step.0.is_finite() && step.1.is_finite()) {
                continue;
            }
            z[i] = (zi.0 - step.0, zi.1 - step.1);
            let scale = zi.0.hypot(zi.1).max(1.0);
            moved = moved.max(step.0.hypot(step.1) / scale);
        }
        if moved < 1e-15 {
            break;
        }
    }
    z
}
