//! The invariant corpus behind `catdyn selftest`.

use catdyn::exact_linalg::poly::ExactPoly;
use catdyn::exact_linalg::{growth_signature, min_poly, tensor_product, ExactMatrix};
use catdyn::growth_estimator::{
    entry_sum_sequence, fit_growth, ln_ext_distance, ExtTable, FitOptions, PositiveSequence,
};
use catdyn::quiver_hereditary::{
    check_isometry, coxeter_matrix, euler_form, hereditary_report, order_up_to_sign, Quiver,
};
use catdyn::sl2z_dynamics::{
    classify_sl2, crosscheck_with_lattice, hyperbolic_entropy, trichotomy_report, Sl2Class, Sl2Element,
};
use catdyn::twist_zoo::{self, TwistKind, TwistParams};
use catdyn::variety_dynamics::{
    kuenneth_self_product, line_bundle_report, pullback_entropy_report, validate_geometric, EndoAction,
};
use num_bigint::BigInt;
use num_rational::BigRational;
use serde_json::{json, Value};

use crate::corpus;

#[derive(Clone, Copy, Debug, Default)]
pub struct SelftestOptions {
    /// Negative control: perturb one Gram entry before the isometry checks.
    pub corrupt_gram: bool,
}

type CheckFn = fn(&SelftestOptions) -> Result<String, String>;

pub struct Check {
    pub module: &'static str,
    pub anchor: &'static str,
    pub name: &'static str,
    run: CheckFn,
}

#[derive(Clone, Debug)]
pub struct CheckResult {
    pub module: &'static str,
    pub anchor: &'static str,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

pub fn checks() -> Vec<Check> {
    vec![
        Check { module: "exact_linalg", anchor: "jordan-growth", name: "quasi-unipotent oracle", run: jordan_oracle },
        Check { module: "exact_linalg", anchor: "jordan-growth", name: "power law", run: power_law },
        Check { module: "exact_linalg", anchor: "jordan-growth", name: "tensor additivity", run: tensor_additivity },
        Check { module: "exact_linalg", anchor: "minimal-polynomial", name: "annihilates", run: min_poly_annihilates },
        Check { module: "growth_estimator", anchor: "growth-fit", name: "recovery grid", run: fit_grid },
        Check { module: "growth_estimator", anchor: "growth-fit", name: "scale invariance", run: fit_scaling },
        Check { module: "growth_estimator", anchor: "ext-distance", name: "direct sum additivity", run: ext_additivity },
        Check { module: "sl2z", anchor: "sl2-trichotomy", name: "eight matrix table", run: trichotomy },
        Check { module: "sl2z", anchor: "sl2-trichotomy", name: "exhaustive small entries", run: exhaustive_sl2 },
        Check { module: "sl2z", anchor: "braid-lattice", name: "random A2 words", run: braid_words },
        Check { module: "sl2z", anchor: "braid-lattice", name: "conjugation invariance", run: braid_conjugation },
        Check { module: "variety", anchor: "dynamical-degrees", name: "power maps", run: power_maps },
        Check { module: "variety", anchor: "dynamical-degrees", name: "abelian surface", run: abelian },
        Check { module: "variety", anchor: "kuenneth", name: "self products", run: kuenneth },
        Check { module: "variety", anchor: "line-bundle", name: "hyperplane bundles", run: hyperplanes },
        Check { module: "variety", anchor: "line-bundle", name: "numerical dimension one", run: nu_one },
        Check { module: "twist", anchor: "twist-bounds", name: "closed forms vs sums", run: twist_grid },
        Check { module: "twist", anchor: "twist-bounds", name: "growth of partial sums", run: twist_growth },
        Check { module: "twist", anchor: "shift-serre", name: "linear slopes", run: shift_serre },
        Check { module: "quiver", anchor: "coxeter-isometry", name: "random acyclic quivers", run: coxeter_isometry },
        Check { module: "quiver", anchor: "euler-unimodular", name: "determinant one", run: unimodular },
        Check { module: "quiver", anchor: "hereditary-growth", name: "Dynkin finite order", run: dynkin },
        Check { module: "quiver", anchor: "hereditary-growth", name: "pairing crosscheck", run: hereditary },
    ]
}

/// Runs every check whose module contains `filter`.
pub fn run(filter: Option<&str>, opts: &SelftestOptions) -> Vec<CheckResult> {
    checks()
        .into_iter()
        .filter(|c| filter.map_or(true, |f| c.module.contains(f) || c.anchor.contains(f)))
        .map(|c| {
            let (passed, detail) = match (c.run)(opts) {
                Ok(d) => (true, d),
                Err(d) => (false, d),
            };
            CheckResult {
                module: c.module,
                anchor: c.anchor,
                name: c.name,
                passed,
                detail,
            }
        })
        .collect()
}

pub fn results_json(results: &[CheckResult]) -> Value {
    json!({
        "passed": results.iter().all(|r| r.passed),
        "checks": results.iter().map(|r| json!({
            "module": r.module,
            "anchor": r.anchor,
            "name": r.name,
            "passed": r.passed,
            "detail": r.detail,
        })).collect::<Vec<_>>(),
    })
}

pub fn results_table(results: &[CheckResult]) -> String {
    let wm = results.iter().map(|r| r.module.len()).max().unwrap_or(0).max(6);
    let wa = results.iter().map(|r| r.anchor.len()).max().unwrap_or(0).max(6);
    let wn = results.iter().map(|r| r.name.len()).max().unwrap_or(0).max(5);
    let mut out = format!("{:<wm$}  {:<wa$}  {:<wn$}  result  detail\n", "module", "anchor", "check");
    for r in results {
        out.push_str(&format!(
            "{:<wm$}  {:<wa$}  {:<wn$}  {:<6}  {}\n",
            r.module,
            r.anchor,
            r.name,
            if r.passed { "PASS" } else { "FAIL" },
            r.detail
        ));
    }
    let failed = results.iter().filter(|r| !r.passed).count();
    out.push_str(&format!("{} checks, {} failed\n", results.len(), failed));
    out
}

fn int(x: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(x))
}

fn jordan_oracle(_: &SelftestOptions) -> Result<String, String> {
    let mut rng = corpus::rng(11);
    for i in 0..40 {
        let s = corpus::random_quasi_unipotent(&mut rng, 8);
        let g = growth_signature(&s.matrix).map_err(|e| e.to_string())?;
        ensure!(g.rho_is_one(), "sample {i}: rho = {} for blocks {:?}", g.rho_float, s.blocks);
        ensure!(g.s == s.j_star - 1, "sample {i}: s = {}, expected {}", g.s, s.j_star - 1);
    }
    Ok("40 samples".into())
}

fn power_law(_: &SelftestOptions) -> Result<String, String> {
    let mut rng = corpus::rng(12);
    for i in 0..15 {
        let s = corpus::random_quasi_unipotent(&mut rng, 6);
        let g = growth_signature(&s.matrix.pow(3)).map_err(|e| e.to_string())?;
        ensure!(g.rho_is_one() && g.s == s.j_star - 1, "sample {i}: cube has s = {}", g.s);
    }
    let m = ExactMatrix::from_i64(&[&[2, 1], &[1, 1]]);
    let rho = growth_signature(&m).map_err(|e| e.to_string())?.rho_float;
    let rho3 = growth_signature(&m.pow(3)).map_err(|e| e.to_string())?.rho_float;
    ensure!((rho3 - rho.powi(3)).abs() <= 1e-9 * rho3, "rho(M^3) = {rho3}, rho(M)^3 = {}", rho.powi(3));
    Ok("16 matrices".into())
}

fn tensor_additivity(_: &SelftestOptions) -> Result<String, String> {
    let mut rng = corpus::rng(13);
    for i in 0..10 {
        let a = corpus::random_quasi_unipotent(&mut rng, 3);
        let b = corpus::random_quasi_unipotent(&mut rng, 3);
        let g = growth_signature(&tensor_product(&a.matrix, &b.matrix)).map_err(|e| e.to_string())?;
        let want = a.j_star + b.j_star - 2;
        ensure!(g.rho_is_one() && g.s == want, "pair {i}: s = {}, expected {want}", g.s);
    }
    let h = ExactMatrix::from_i64(&[&[2, 1], &[1, 1]]);
    let j = ExactMatrix::from_i64(&[&[1, 1], &[0, 1]]);
    let g = growth_signature(&tensor_product(&h, &j)).map_err(|e| e.to_string())?;
    let rho = (3.0 + 5f64.sqrt()) / 2.0;
    ensure!(g.s == 1 && (g.rho_float - rho).abs() < 1e-9, "hyperbolic x parabolic: {}", g.s);
    Ok("11 products".into())
}

fn eval_at_matrix(p: &ExactPoly, m: &ExactMatrix) -> ExactMatrix {
    let mut acc = ExactMatrix::zero(m.dim());
    for c in p.coeffs().iter().rev() {
        acc = &(&acc * m) + &ExactMatrix::identity(m.dim()).scale(c);
    }
    acc
}

fn min_poly_annihilates(_: &SelftestOptions) -> Result<String, String> {
    let mut rng = corpus::rng(14);
    for i in 0..15 {
        let s = corpus::random_quasi_unipotent(&mut rng, 6);
        let p = min_poly(&s.matrix);
        ensure!(eval_at_matrix(&p, &s.matrix).is_zero(), "sample {i}: minimal polynomial does not annihilate");
    }
    Ok("15 matrices".into())
}

fn fit_grid(_: &SelftestOptions) -> Result<String, String> {
    for rho in [1.0f64, 1.5, 2.0, 3.0] {
        for s in 0..=3 {
            let logs: Vec<f64> = (1..=400).map(|n| n as f64 * rho.ln() + s as f64 * (n as f64).ln()).collect();
            let seq = PositiveSequence::from_logs(1, logs).map_err(|e| e.to_string())?;
            let f = fit_growth(&seq, &FitOptions::default()).map_err(|e| e.to_string())?;
            ensure!((f.rho_hat - rho).abs() <= 1e-3 * rho, "rho {rho}, s {s}: rho_hat = {}", f.rho_hat);
            ensure!((f.s_hat - s as f64).abs() <= 0.15, "rho {rho}, s {s}: s_hat = {}", f.s_hat);
        }
    }
    Ok("16 sequences".into())
}

fn fit_scaling(_: &SelftestOptions) -> Result<String, String> {
    let m = ExactMatrix::from_i64(&[&[1, 1, 0], &[0, 1, 1], &[0, 0, 1]]);
    let seq = entry_sum_sequence(&m, 300).map_err(|e| e.to_string())?;
    let f = fit_growth(&seq, &FitOptions::default()).map_err(|e| e.to_string())?;
    let g = fit_growth(&seq.scaled(1e6).map_err(|e| e.to_string())?, &FitOptions::default())
        .map_err(|e| e.to_string())?;
    ensure!((f.s_hat - 2.0).abs() <= 0.15, "s_hat = {}", f.s_hat);
    ensure!((f.s_hat - g.s_hat).abs() < 1e-9 && (f.rho_hat - g.rho_hat).abs() < 1e-9, "scaling changed the fit");
    Ok(format!("s_hat = {:.4}", f.s_hat))
}

fn ext_additivity(_: &SelftestOptions) -> Result<String, String> {
    let a = ExtTable::new([(0, 2), (1, 1), (-3, 4)]);
    let b = ExtTable::new([(1, 5), (2, 1)]);
    for t in [-1.0, -0.5, 0.0, 0.5, 1.0] {
        let (la, lb) = (ln_ext_distance(&a, t), ln_ext_distance(&b, t));
        let want = la.max(lb) + (-(la - lb).abs()).exp().ln_1p();
        let got = ln_ext_distance(&a.direct_sum(&b), t);
        ensure!((got - want).abs() < 1e-12, "t = {t}: {got} vs {want}");
    }
    Ok("5 values of t".into())
}

fn trichotomy(_: &SelftestOptions) -> Result<String, String> {
    let log_golden = ((3.0 + 5f64.sqrt()) / 2.0).ln();
    for (m, class, h_pol) in corpus::trichotomy_table() {
        let g = Sl2Element::from_i64(m).map_err(|e| e.to_string())?;
        let c = classify_sl2(&g);
        ensure!(c.as_str() == class, "{m:?}: {c}, expected {class}");
        let sig = growth_signature(&g.to_matrix()).map_err(|e| e.to_string())?;
        ensure!(sig.s as u32 == h_pol, "{m:?}: s = {}", sig.s);
        let h = if c == Sl2Class::Hyperbolic { hyperbolic_entropy(&g.trace()) } else { 0.0 };
        let want = if class == "hyperbolic" { log_golden } else { 0.0 };
        ensure!((h - want).abs() < 1e-9 && (sig.log_rho() - want).abs() < 1e-9, "{m:?}: h = {h}");
    }
    Ok("8 matrices".into())
}

fn exhaustive_sl2(_: &SelftestOptions) -> Result<String, String> {
    let mut count = 0;
    for a in -3i64..=3 {
        for b in -3i64..=3 {
            for c in -3i64..=3 {
                for d in -3i64..=3 {
                    if a * d - b * c != 1 {
                        continue;
                    }
                    count += 1;
                    let g = Sl2Element::from_i64([[a, b], [c, d]]).unwrap();
                    let sig = growth_signature(&g.to_matrix()).map_err(|e| e.to_string())?;
                    let (h, s) = match classify_sl2(&g) {
                        Sl2Class::EllipticOrCentral => (0.0, 0),
                        Sl2Class::ParabolicNonCentral => (0.0, 1),
                        Sl2Class::Hyperbolic => (hyperbolic_entropy(&g.trace()), 0),
                    };
                    ensure!(sig.s == s, "{g}: s = {}, expected {s}", sig.s);
                    ensure!((sig.log_rho() - h).abs() <= 1e-9, "{g}: log rho = {}", sig.log_rho());
                }
            }
        }
    }
    Ok(format!("{count} matrices"))
}

fn braid_words(_: &SelftestOptions) -> Result<String, String> {
    let mut rng = corpus::rng(21);
    for _ in 0..100 {
        let w = corpus::random_a2_word(&mut rng, 12);
        let c = crosscheck_with_lattice(&w).map_err(|e| e.to_string())?;
        ensure!(c.consistent, "{w}: {}", c.details);
    }
    Ok("100 words".into())
}

fn braid_conjugation(_: &SelftestOptions) -> Result<String, String> {
    let mut rng = corpus::rng(22);
    for _ in 0..20 {
        let w = corpus::random_a2_word(&mut rng, 12);
        let r = trichotomy_report(&w);
        for _ in 0..10 {
            let u = corpus::random_a2_word(&mut rng, 6);
            let conj = u.concat(&w).concat(&u.inverse());
            let rc = trichotomy_report(&conj);
            ensure!(
                rc.classification == r.classification && rc.h_pol == r.h_pol && rc.h_cat_exact == r.h_cat_exact,
                "{w} conjugated by {u} changed the report"
            );
        }
    }
    Ok("200 conjugates".into())
}

fn power_maps(_: &SelftestOptions) -> Result<String, String> {
    for k in [2i64, 3] {
        for d in 1..=3usize {
            let e = EndoAction::scalar_powers(d, k);
            let r = pullback_entropy_report(&e).map_err(|e| e.to_string())?;
            for p in 0..=d {
                let want = (k as f64).powi(p as i32);
                ensure!((r.table.d[p] - want).abs() < 1e-9 * want, "k {k}, d {d}: d_{p} = {}", r.table.d[p]);
            }
            ensure!(
                (r.h_cat - d as f64 * (k as f64).ln()).abs() < 1e-12 && r.h_pol == 0,
                "k {k}, d {d}: h_cat = {}, h_pol = {}",
                r.h_cat,
                r.h_pol
            );
            let w = validate_geometric(&e).map_err(|e| e.to_string())?;
            ensure!(w.is_empty(), "k {k}, d {d}: {w:?}");
        }
    }
    Ok("6 maps".into())
}

fn abelian(_: &SelftestOptions) -> Result<String, String> {
    let r = pullback_entropy_report(&corpus::abelian_parabolic()).map_err(|e| e.to_string())?;
    ensure!(r.h_cat == 0.0 && r.h_pol == 2, "h_cat = {}, h_pol = {}", r.h_cat, r.h_pol);
    Ok("h_pol = 2".into())
}

fn kuenneth(_: &SelftestOptions) -> Result<String, String> {
    let mut cases: Vec<EndoAction> = Vec::new();
    for k in [2, 3] {
        for d in 1..=3 {
            cases.push(EndoAction::scalar_powers(d, k));
        }
    }
    cases.push(corpus::abelian_parabolic());
    for (i, e) in cases.iter().enumerate() {
        let k = kuenneth_self_product(e).map_err(|e| e.to_string())?;
        ensure!(k.passed(), "case {i}: {:?}", k.mismatches);
    }
    Ok(format!("{} products", cases.len()))
}

fn hyperplanes(_: &SelftestOptions) -> Result<String, String> {
    for d in 1..=4 {
        let r = line_bundle_report(&corpus::hyperplane_bundle(d, 400)).map_err(|e| e.to_string())?;
        ensure!(r.h_pol_exact == Some(d), "d {d}: h_pol = {:?}", r.h_pol_exact);
        let s = r.empirical_h_pol.unwrap_or(f64::NAN);
        ensure!((s - d as f64).abs() <= 0.15, "d {d}: s_hat = {s}");
    }
    Ok("d = 1..4".into())
}

fn nu_one(_: &SelftestOptions) -> Result<String, String> {
    let r = line_bundle_report(&corpus::nu_one_surface(400)).map_err(|e| e.to_string())?;
    ensure!(r.nu == 1 && (r.h_pol_lower, r.h_pol_upper) == (1, 2), "nu = {}", r.nu);
    let s = r.empirical_h_pol.unwrap_or(f64::NAN);
    ensure!((s - 2.0).abs() <= 0.15, "s_hat = {s}");
    Ok(format!("nu = 1, s_hat = {s:.4}"))
}

fn twist_grid(_: &SelftestOptions) -> Result<String, String> {
    let mut count = 0;
    for kind in [TwistKind::Spherical, TwistKind::PTwist] {
        for d in 1..=4 {
            for t in [-1.0, -0.1, 0.0, 0.1, 1.0] {
                for (a, b) in [(0.5, 0.5), (1.0, 10.0), (10.0, 1.0)] {
                    let p = TwistParams::new(kind, d, t, a, b, true).map_err(|e| e.to_string())?;
                    for n in [1, 2, 3, 10, 50, 200] {
                        count += 1;
                        let r = twist_zoo::ln_recurrence(&p, n);
                        let g = twist_zoo::ln_geometric_sum(&p, n);
                        ensure!((g - r).abs() <= 1e-12, "{kind} d {d} t {t} n {n}: sum {r}, closed {g}");
                        let bound = twist_zoo::ln_bound(&p, n);
                        if twist_zoo::bound_is_exact(&p) {
                            ensure!((bound - r).abs() <= 1e-12, "{kind} d {d} t {t} n {n}: bound differs");
                        } else {
                            ensure!(bound >= r - 1e-12, "{kind} d {d} t {t} n {n}: bound below sum");
                        }
                    }
                }
            }
        }
    }
    Ok(format!("{count} cases"))
}

fn twist_growth(_: &SelftestOptions) -> Result<String, String> {
    for d in 2..=4u32 {
        for t in [-1.0, -0.5, -0.1] {
            let p = TwistParams::new(TwistKind::Spherical, d, t, 1.0, 1.0, true).map_err(|e| e.to_string())?;
            let logs: Vec<f64> = (1..=200).map(|n| twist_zoo::ln_recurrence(&p, n)).collect();
            let seq = PositiveSequence::from_logs(1, logs).map_err(|e| e.to_string())?;
            let f = fit_growth(&seq, &FitOptions::default()).map_err(|e| e.to_string())?;
            let rho = ((1.0 - d as f64) * t).exp();
            ensure!((f.rho_hat - rho).abs() <= 1e-3 * rho, "d {d} t {t}: rho_hat = {}", f.rho_hat);
            ensure!(f.s_hat.abs() <= 0.15, "d {d} t {t}: s_hat = {}", f.s_hat);
        }
    }
    Ok("9 sequences".into())
}

fn shift_serre(_: &SelftestOptions) -> Result<String, String> {
    for m in -3..=3 {
        ensure!(twist_zoo::shift_report(m).slope == int(m), "shift {m}");
    }
    let r = twist_zoo::fractional_cy_report(2, 1).map_err(|e| e.to_string())?;
    ensure!(r.slope == BigRational::new(1.into(), 2.into()) && r.h_pol == 0, "S^2 = [1]");
    Ok("slopes exact".into())
}

fn corpus_quivers() -> Vec<Quiver> {
    let mut rng = corpus::rng(31);
    (0..60).map(|_| corpus::random_acyclic_quiver(&mut rng, 6, 3)).collect()
}

fn coxeter_isometry(opts: &SelftestOptions) -> Result<String, String> {
    for (i, q) in corpus_quivers().iter().enumerate() {
        let mut lat = euler_form(q);
        if opts.corrupt_gram {
            let v = lat.gram.get(0, 0) + int(1);
            lat.gram.set(0, 0, v);
        }
        let ok = check_isometry(&lat, &coxeter_matrix(q)).map_err(|e| e.to_string())?;
        ensure!(ok, "quiver {i} ({} vertices): Coxeter matrix is not an isometry", q.vertex_count());
    }
    Ok("60 quivers".into())
}

fn unimodular(_: &SelftestOptions) -> Result<String, String> {
    for (i, q) in corpus_quivers().iter().enumerate() {
        let det = euler_form(q).gram.det();
        ensure!(det == int(1), "quiver {i}: det = {det}");
    }
    Ok("60 quivers".into())
}

fn dynkin(_: &SelftestOptions) -> Result<String, String> {
    let mut count = 0;
    for n in 1..=5 {
        for q in corpus::a_n_orientations(n) {
            count += 1;
            let phi = coxeter_matrix(&q);
            ensure!(order_up_to_sign(&phi, 2 * (n as u64 + 1)).is_some(), "A_{n} {:?}: infinite order", q.arrows());
            let sig = growth_signature(&phi).map_err(|e| e.to_string())?;
            ensure!(sig.rho_is_one() && sig.s == 0, "A_{n}: s = {}", sig.s);
        }
    }
    Ok(format!("{count} orientations"))
}

fn hereditary(_: &SelftestOptions) -> Result<String, String> {
    let mut quivers: Vec<(String, Quiver)> = Vec::new();
    for n in 1..=5 {
        for q in corpus::a_n_orientations(n) {
            quivers.push((format!("A_{n} {:?}", q.arrows()), q));
        }
    }
    quivers.push(("2-Kronecker".into(), Quiver::kronecker(2)));
    quivers.push(("3-Kronecker".into(), Quiver::kronecker(3)));
    for (name, q) in &quivers {
        let r = hereditary_report(&euler_form(q), &coxeter_matrix(q)).map_err(|e| e.to_string())?;
        ensure!(
            r.crosscheck.passed,
            "{name}: exact (log rho {}, s {}) vs fit (rho_hat {}, s_hat {})",
            r.h_cat,
            r.h_pol,
            r.crosscheck.fit.rho_hat,
            r.crosscheck.fit.s_hat
        );
    }
    Ok(format!("{} quivers", quivers.len()))
}
