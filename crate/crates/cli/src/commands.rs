//! One function per subcommand. Each returns the report envelope and a
//! plain-text rendering of it.

use catdyn::exact_linalg::{growth_signature_with, GrowthOptions, GrowthSignature, RhoExact};
use catdyn::growth_estimator::{fit_growth, EstimatedSignature, FitOptions, RESIDUAL_CAVEAT};
use catdyn::quiver_hereditary::{
    check_isometry, coxeter_matrix, euler_form, hereditary_report_with, order_up_to_sign,
};
use catdyn::sl2z_dynamics::{crosscheck_with_lattice, trichotomy_report, Context, TwistWord};
use catdyn::twist_zoo::{self, TwistKind, TwistParams, ValueOrInterval};
use catdyn::variety_dynamics::{
    exact_degrees, kuenneth_self_product, line_bundle_report, pullback_entropy_report, validate_geometric,
};
use catdyn::Error;
use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde_json::{json, Value};

use crate::error::{CliError, CliResult};
use crate::format::{self, float, float_text, table, ReportEnvelope};
use crate::input;

#[derive(Clone, Debug, Default)]
pub struct GlobalOpts {
    pub tol: Option<f64>,
    pub precision: Option<u32>,
}

impl GlobalOpts {
    fn growth_options(&self) -> GrowthOptions {
        let mut o = GrowthOptions::default();
        if let Some(t) = self.tol {
            o.tolerance = t;
        }
        if let Some(p) = self.precision {
            o.precision_bits = p;
            o.max_precision_bits = o.max_precision_bits.max(p);
        }
        o
    }

    fn json(&self) -> Value {
        json!({"tol": self.tol.map(float), "precision": self.precision})
    }
}

pub struct Outcome {
    pub envelope: ReportEnvelope,
    pub human: String,
}

fn outcome(command: &str, inputs: Value, results: Value, warnings: Vec<String>, mut human: String) -> Outcome {
    for w in &warnings {
        human.push_str(&format!("warning: {w}\n"));
    }
    Outcome {
        envelope: ReportEnvelope::new(command, &inputs, results, warnings),
        human,
    }
}

fn bigint_json(x: &BigInt) -> Value {
    match x.to_i64() {
        Some(v) => json!(v),
        None => json!(x.to_string()),
    }
}

fn rho_exact_text(r: &Option<RhoExact>) -> Option<String> {
    r.as_ref().map(|r| match r {
        RhoExact::Rational(q) => q.to_string(),
        RhoExact::RootOfFactor { factor, rank } => {
            format!("modulus of root {rank} (by decreasing modulus) of {factor}")
        }
    })
}

fn signature_json(sig: &GrowthSignature) -> Value {
    json!({
        "rho": float(sig.rho_float),
        "rho_interval": [float(f64_of(&sig.rho_interval.0)), float(f64_of(&sig.rho_interval.1))],
        "rho_exact": rho_exact_text(&sig.rho_exact),
        "log_rho": float(sig.log_rho()),
        "s": sig.s,
        "dominant_factors": sig.dominant_factors.iter()
            .map(|(p, j)| json!({"factor": p.to_string(), "multiplicity": j}))
            .collect::<Vec<_>>(),
        "quasi_unipotent_order": sig.quasi_unipotent_order,
        "tied_moduli": sig.tied_moduli,
    })
}

fn f64_of(q: &num_rational::BigRational) -> f64 {
    q.to_f64().unwrap_or(f64::NAN)
}

fn fit_json(f: &EstimatedSignature) -> Value {
    json!({
        "rho_hat": float(f.rho_hat),
        "log_rho_hat": float(f.log_rho_hat),
        "s_hat": float(f.s_hat),
        "intercept": float(f.intercept),
        "residual": float(f.residual),
        "window": [f.window.0, f.window.1],
        "limit_doubtful": f.limit_doubtful(),
    })
}

fn fit_warnings(f: &EstimatedSignature, what: &str) -> Vec<String> {
    if f.limit_doubtful() {
        vec![format!(
            "{what}: fit residual {} exceeds {RESIDUAL_CAVEAT}; the growth limit may not exist",
            float_text(f.residual)
        )]
    } else {
        vec![]
    }
}

pub fn growth(path: &str, opts: &GlobalOpts) -> CliResult<Outcome> {
    let m = input::parse_matrix(&input::parse_json(&input::read_source(path)?)?)?;
    let inputs = json!({"matrix": input::matrix_json(&m), "options": opts.json()});
    let sig = growth_signature_with(&m, &opts.growth_options())?;
    let human = table(&[
        ("rho".into(), float_text(sig.rho_float)),
        ("rho exact".into(), rho_exact_text(&sig.rho_exact).unwrap_or_else(|| "-".into())),
        ("log rho".into(), float_text(sig.log_rho())),
        ("s".into(), sig.s.to_string()),
        (
            "quasi-unipotent order".into(),
            sig.quasi_unipotent_order.map_or("-".into(), |k| k.to_string()),
        ),
        (
            "dominant factors".into(),
            sig.dominant_factors
                .iter()
                .map(|(p, j)| format!("({p})^{j}"))
                .collect::<Vec<_>>()
                .join(", "),
        ),
    ]);
    Ok(outcome("growth", inputs, signature_json(&sig), sig.warnings.clone(), human))
}

pub fn classify(context: &str, tokens: &[String]) -> CliResult<Outcome> {
    let ctx: Context = context.parse()?;
    let word = TwistWord::parse_tokens(ctx, tokens)?;
    let inputs = json!({"context": ctx.to_string(), "word": word.to_string()});
    let r = trichotomy_report(&word);
    let c = crosscheck_with_lattice(&word)?;
    if !c.consistent {
        return Err(Error::InternalInconsistency(c.details).into());
    }
    let e = r.matrix.entries();
    let results = json!({
        "word": word.to_string(),
        "matrix": [[bigint_json(&e[0][0]), bigint_json(&e[0][1])], [bigint_json(&e[1][0]), bigint_json(&e[1][1])]],
        "trace": bigint_json(&r.trace),
        "classification": r.classification.as_str(),
        "h_cat": float(r.h_cat),
        "h_cat_exact": r.h_cat_exact,
        "h_pol": r.h_pol,
        "pseudo_anosov": r.pseudo_anosov,
        "crosscheck": {
            "consistent": c.consistent,
            "log_rho": float(c.log_rho),
            "s": c.s,
        },
    });
    let human = table(&[
        ("word".into(), word.to_string()),
        ("matrix".into(), r.matrix.to_string()),
        ("class".into(), r.classification.to_string()),
        ("h_cat".into(), format!("{} = {}", r.h_cat_exact, float_text(r.h_cat))),
        ("h_pol".into(), r.h_pol.to_string()),
        ("lattice check".into(), c.details),
    ]);
    Ok(outcome("classify", inputs, results, vec![], human))
}

pub fn endo(path: &str, kuenneth: bool) -> CliResult<Outcome> {
    let e = input::parse_endo(&input::parse_json(&input::read_source(path)?)?)?;
    let inputs = json!({"endo": input::endo_json(&e), "kuenneth": kuenneth});
    let mut warnings = validate_geometric(&e)?;
    let r = pullback_entropy_report(&e)?;
    let exact = exact_degrees(&r.table).map(|v| v.iter().map(format::rational).collect::<Vec<_>>());
    let mut results = json!({
        "h_cat": float(r.h_cat),
        "h_pol": r.h_pol,
        "s_total": r.s_total,
        "degrees": format::floats(&r.table.d),
        "degrees_exact": exact,
        "polynomial_degrees": r.table.s,
        "plateau": [r.table.plateau.0, r.table.plateau.1],
    });
    let mut rows: Vec<(String, String)> = (0..r.table.d.len())
        .map(|p| {
            (
                format!("p = {p}"),
                format!("d_p = {}, s_p = {}", float_text(r.table.d[p]), r.table.s[p]),
            )
        })
        .collect();
    rows.push(("h_cat".into(), float_text(r.h_cat)));
    rows.push(("h_pol".into(), r.h_pol.to_string()));
    if kuenneth {
        let k = kuenneth_self_product(&e)?;
        if !k.passed() {
            warnings.extend(k.mismatches.iter().map(|m| format!("product check: {m}")));
        }
        results["kuenneth"] = json!({
            "passed": k.passed(),
            "degrees": format::floats(&k.table.d),
            "polynomial_degrees": k.table.s,
            "expected_degrees": format::floats(&k.expected_d),
            "expected_polynomial_degrees": k.expected_s,
        });
        rows.push(("product check".into(), if k.passed() { "ok" } else { "FAILED" }.into()));
    }
    Ok(outcome("endo", inputs, results, warnings, table(&rows)))
}

pub fn linebundle(path: &str) -> CliResult<Outcome> {
    let lb = input::parse_linebundle(&input::parse_json(&input::read_source(path)?)?)?;
    let inputs = json!({"line_bundle": input::linebundle_json(&lb)});
    let r = line_bundle_report(&lb)?;
    let mut warnings = Vec::new();
    for (k, f) in &r.fits {
        warnings.extend(fit_warnings(f, &format!("h^{k}")));
    }
    if r.h_pol_exact.is_none() {
        warnings.push(format!(
            "neither L nor its dual is known to be nef; h_pol is only bounded by [{}, {}]",
            r.h_pol_lower, r.h_pol_upper
        ));
    }
    let fits: Vec<Value> = r
        .fits
        .iter()
        .map(|(k, f)| {
            let mut v = fit_json(f);
            v["degree"] = json!(k);
            v
        })
        .collect();
    let results = json!({
        "h_cat": float(r.h_cat),
        "nu": r.nu,
        "nef": lb.nef().to_string(),
        "h_pol_lower": r.h_pol_lower,
        "h_pol_upper": r.h_pol_upper,
        "h_pol_exact": r.h_pol_exact,
        "exp_c1": signature_json(&r.exp_signature),
        "fits": fits,
        "empirical_h_pol": r.empirical_h_pol.map(float),
    });
    let mut rows = vec![
        ("h_cat".to_string(), float_text(r.h_cat)),
        ("numerical dimension".into(), r.nu.to_string()),
        ("h_pol bounds".into(), format!("[{}, {}]", r.h_pol_lower, r.h_pol_upper)),
        ("h_pol".into(), r.h_pol_exact.map_or("unknown".into(), |x| x.to_string())),
    ];
    for (k, f) in &r.fits {
        rows.push((format!("h^{k} fit"), format!("s_hat = {}", float_text(f.s_hat))));
    }
    Ok(outcome("linebundle", inputs, results, warnings, table(&rows)))
}

#[derive(Clone, Debug, Default)]
pub struct TwistArgs {
    pub kind: String,
    pub d: Option<u32>,
    pub t: Option<f64>,
    pub a: Option<f64>,
    pub b: Option<f64>,
    pub n: Option<u64>,
    pub m: Option<i64>,
    pub orth: bool,
    pub a2: bool,
}

fn required<T>(x: Option<T>, flag: &str, kind: &str) -> CliResult<T> {
    x.ok_or_else(|| CliError::Core(Error::Parse(format!("--{flag} is required for --kind {kind}"))))
}

fn value_or_interval(v: &ValueOrInterval) -> Value {
    match v {
        ValueOrInterval::Value(x) => json!({"value": float(*x)}),
        ValueOrInterval::Interval { lo, hi } => json!({"lo": float(*lo), "hi": hi.map(float)}),
    }
}

pub fn twist(a: &TwistArgs) -> CliResult<Outcome> {
    let kind = a.kind.to_ascii_lowercase();
    match kind.as_str() {
        "shift" => {
            let m = required(a.m, "m", "shift")?;
            let r = twist_zoo::shift_report(m);
            let results = json!({"h_t_slope": format::rational(&r.slope), "h_pol": r.h_pol});
            let human = table(&[("h_t".into(), format!("{} t", r.slope)), ("h_pol".into(), "0".into())]);
            return Ok(outcome("twist", json!({"kind": "shift", "m": m}), results, vec![], human));
        }
        "fcy" | "serre" => {
            let n = required(a.n, "n", "fcy")?;
            let m = required(a.m, "m", "fcy")?;
            let r = twist_zoo::fractional_cy_report(n, m)?;
            let results = json!({"h_t_slope": format::rational(&r.slope), "h_pol": r.h_pol});
            let human = table(&[("h_t".into(), format!("({}) t", r.slope)), ("h_pol".into(), "0".into())]);
            return Ok(outcome("twist", json!({"kind": "fcy", "n": n, "m": m}), results, vec![], human));
        }
        _ => {}
    }
    let kind: TwistKind = kind.parse()?;
    let name = kind.to_string();
    let d = required(a.d, "d", &name)?;
    let t = required(a.t, "t", &name)?;
    let big_a = required(a.a, "A", &name)?;
    let big_b = required(a.b, "B", &name)?;
    let n = a.n.unwrap_or(1);
    if n == 0 {
        return Err(Error::InvalidInput("--n must be at least 1".into()).into());
    }
    let mut p = TwistParams::new(kind, d, t, big_a, big_b, a.orth)?;
    if a.a2 {
        p = p.with_a2_context();
    }
    let inputs = json!({
        "kind": name, "d": d, "t": float(t), "A": float(big_a), "B": float(big_b),
        "n": n, "orth": a.orth, "a2": a.a2,
    });
    let r = twist_zoo::twist_entropy_report(&p);
    let bound = twist_zoo::bound(&p, n);
    let rec = twist_zoo::recurrence(&p, n);
    let results = json!({
        "n": n,
        "bound": float(bound),
        "recurrence": float(rec),
        "geometric_sum": float(twist_zoo::geometric_sum(&p, n)),
        "ln_bound": float(twist_zoo::ln_bound(&p, n)),
        "ln_recurrence": float(twist_zoo::ln_recurrence(&p, n)),
        "bound_is_exact": twist_zoo::bound_is_exact(&p),
        "entropy": {
            "t": float(r.t),
            "h_t": float(r.h_t),
            "h_t_is_upper_bound": r.h_t_is_bound,
            "h_t_formula": r.h_t_formula,
            "h_pol": value_or_interval(&r.h_pol),
            "unknown": r.unknown,
            "branch": r.branch,
            "notes": r.notes,
        },
    });
    let mut rows = vec![
        (format!("bound (n = {n})"), float_text(bound)),
        ("partial sum".into(), float_text(rec)),
        ("h_t".into(), format!("{}  [{}]", float_text(r.h_t), r.h_t_formula)),
        ("h_pol".into(), format!("{}{}", r.h_pol, if r.unknown { " (unknown)" } else { "" })),
        ("branch".into(), r.branch.clone()),
    ];
    for note in &r.notes {
        rows.push(("note".into(), note.clone()));
    }
    Ok(outcome("twist", inputs, results, r.warnings.clone(), table(&rows)))
}

pub fn quiver(path: &str, isometry: Option<&str>, n_max: usize) -> CliResult<Outcome> {
    let q = input::parse_quiver(&input::parse_json(&input::read_source(path)?)?)?;
    let lat = euler_form(&q);
    let (f, source) = match isometry {
        Some(p) => (input::parse_matrix(&input::parse_json(&input::read_source(p)?)?)?, "user"),
        None => (coxeter_matrix(&q), "coxeter"),
    };
    let inputs = json!({
        "quiver": input::quiver_json(&q),
        "isometry": if source == "user" { input::matrix_json(&f) } else { json!("coxeter") },
        "n_max": n_max,
    });
    if !check_isometry(&lat, &f)? {
        return Err(Error::NotAnIsometry.into());
    }
    let r = hereditary_report_with(&lat, &f, n_max)?;
    let mut warnings = Vec::new();
    if !r.crosscheck.passed {
        warnings.push(format!(
            "pairing crosscheck disagrees: rho_hat = {}, s_hat = {}",
            float_text(r.crosscheck.fit.rho_hat),
            float_text(r.crosscheck.fit.s_hat)
        ));
    }
    warnings.extend(r.signature.warnings.iter().cloned());
    let order = order_up_to_sign(&f, 120);
    let results = json!({
        "gram": input::matrix_json(&lat.gram),
        "basis": lat.basis_tag.to_string(),
        "gram_det": format::rational(&lat.gram.det()),
        "isometry": input::matrix_json(&f),
        "isometry_source": source,
        "order_up_to_sign": order,
        "h_cat": float(r.h_cat),
        "h_pol": r.h_pol,
        "signature": signature_json(&r.signature),
        "crosscheck": {
            "passed": r.crosscheck.passed,
            "fit": fit_json(&r.crosscheck.fit),
            "skipped_pairs": r.crosscheck.skipped_pairs.iter().map(|&(i, j)| [i + 1, j + 1]).collect::<Vec<_>>(),
            "n_max": r.crosscheck.n_max,
            "heuristic": r.crosscheck.heuristic,
        },
        "notes": r.notes,
    });
    let human = table(&[
        ("vertices".into(), q.vertex_count().to_string()),
        ("arrows".into(), q.arrows().len().to_string()),
        ("isometry".into(), f.to_string()),
        ("order up to sign".into(), order.map_or("infinite or > 120".into(), |h| h.to_string())),
        ("h_cat".into(), float_text(r.h_cat)),
        ("h_pol".into(), r.h_pol.to_string()),
        (
            "crosscheck".into(),
            format!(
                "{} (rho_hat = {}, s_hat = {})",
                if r.crosscheck.passed { "ok" } else { "FAILED" },
                float_text(r.crosscheck.fit.rho_hat),
                float_text(r.crosscheck.fit.s_hat)
            ),
        ),
    ]);
    Ok(outcome("quiver", inputs, results, warnings, human))
}

pub fn estimate(path: &str, fit: &FitOptions) -> CliResult<Outcome> {
    let seq = input::parse_sequence_text(&input::read_source(path)?)?;
    let inputs = json!({
        "sequence": input::sequence_json(&seq),
        "n_lo": fit.n_lo, "n_hi": fit.n_hi, "drop_head": float(fit.drop_head_fraction),
    });
    let f = fit_growth(&seq, fit)?;
    let warnings = fit_warnings(&f, "sequence");
    let human = table(&[
        ("rho_hat".into(), float_text(f.rho_hat)),
        ("h_hat = log rho_hat".into(), float_text(f.log_rho_hat)),
        ("s_hat".into(), float_text(f.s_hat)),
        ("residual".into(), float_text(f.residual)),
        ("window".into(), format!("[{}, {}]", f.window.0, f.window.1)),
    ]);
    Ok(outcome("estimate", inputs, fit_json(&f), warnings, human))
}
