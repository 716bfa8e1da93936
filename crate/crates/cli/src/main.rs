use std::io::Write;
use std::process::ExitCode;

use catdyn::growth_estimator::{FitOptions, DEFAULT_DROP_HEAD};
use catdyn_cli::commands::{self, GlobalOpts, Outcome, TwistArgs};
use catdyn_cli::error::{CliResult, EXIT_INTERNAL, EXIT_OK, EXIT_SELFTEST_FAILED};
use catdyn_cli::format::ReportEnvelope;
use catdyn_cli::selftest::{self, SelftestOptions};
use clap::{Parser, Subcommand};
use serde_json::json;

/// Categorical and polynomial entropy from numerical invariants.
#[derive(Parser, Debug)]
#[command(name = "catdyn", version, allow_negative_numbers = true)]
struct Cli {
    /// Print the report envelope as JSON.
    #[arg(long, global = true)]
    json: bool,
    /// Largest acceptable width of the spectral radius enclosure.
    #[arg(long, global = true, value_name = "FLOAT")]
    tol: Option<f64>,
    /// Starting precision of root isolation.
    #[arg(long, global = true, value_name = "BITS")]
    precision: Option<u32>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Spectral radius and polynomial growth rate of a matrix.
    Growth {
        /// Matrix file, `-` for stdin.
        file: String,
    },
    /// Classify a word in the twist group through its SL(2,Z) image.
    #[command(allow_hyphen_values = true)]
    Classify {
        #[arg(long, default_value = "a2cy3")]
        context: String,
        #[arg(required = true, num_args = 1..)]
        tokens: Vec<String>,
    },
    /// Dynamical degrees and entropy of a surjective endomorphism.
    Endo {
        file: String,
        /// Also check the self-product.
        #[arg(long)]
        kuenneth: bool,
    },
    /// Polynomial entropy of tensoring by a line bundle.
    Linebundle { file: String },
    /// Entropy and complexity bounds of shifts, Serre functors and twists.
    #[command(allow_negative_numbers = true)]
    Twist {
        /// spherical, ptwist, shift or fcy.
        #[arg(long)]
        kind: String,
        #[arg(long)]
        d: Option<u32>,
        #[arg(long)]
        t: Option<f64>,
        #[arg(long = "A")]
        a: Option<f64>,
        #[arg(long = "B")]
        b: Option<f64>,
        /// Iterate count, or the exponent n in S^n = [m] for fcy.
        #[arg(long)]
        n: Option<u64>,
        #[arg(long)]
        m: Option<i64>,
        /// The orthogonal complement of the twisting object is nonzero.
        #[arg(long)]
        orth: bool,
        /// The twist is one of the A2 quiver CY3 twists.
        #[arg(long)]
        a2: bool,
    },
    /// Euler form, Coxeter matrix and entropy of an isometry for an acyclic quiver.
    Quiver {
        file: String,
        /// Matrix file of the isometry; defaults to the Coxeter matrix.
        #[arg(long)]
        isometry: Option<String>,
        #[arg(long, default_value_t = 200)]
        n_max: usize,
    },
    /// Fit rho^n n^s to a positive sequence.
    #[command(allow_negative_numbers = true)]
    Estimate {
        file: String,
        #[arg(long)]
        n_lo: Option<usize>,
        #[arg(long)]
        n_hi: Option<usize>,
        #[arg(long, default_value_t = DEFAULT_DROP_HEAD)]
        drop_head: f64,
    },
    /// Run the invariant corpus.
    Selftest {
        /// Only modules or anchors containing this string.
        #[arg(long)]
        filter: Option<String>,
        #[arg(long, hide = true)]
        corrupt_gram: bool,
    },
}

fn run(cli: &Cli) -> CliResult<(Outcome, i32)> {
    let opts = GlobalOpts {
        tol: cli.tol,
        precision: cli.precision,
    };
    let outcome = match &cli.command {
        Command::Growth { file } => commands::growth(file, &opts)?,
        Command::Classify { context, tokens } => commands::classify(context, tokens)?,
        Command::Endo { file, kuenneth } => commands::endo(file, *kuenneth)?,
        Command::Linebundle { file } => commands::linebundle(file)?,
        Command::Twist { kind, d, t, a, b, n, m, orth, a2 } => commands::twist(&TwistArgs {
            kind: kind.clone(),
            d: *d,
            t: *t,
            a: *a,
            b: *b,
            n: *n,
            m: *m,
            orth: *orth,
            a2: *a2,
        })?,
        Command::Quiver { file, isometry, n_max } => commands::quiver(file, isometry.as_deref(), *n_max)?,
        Command::Estimate { file, n_lo, n_hi, drop_head } => commands::estimate(
            file,
            &FitOptions {
                n_lo: *n_lo,
                n_hi: *n_hi,
                drop_head_fraction: *drop_head,
            },
        )?,
        Command::Selftest { filter, corrupt_gram } => {
            let results = selftest::run(filter.as_deref(), &SelftestOptions { corrupt_gram: *corrupt_gram });
            let passed = results.iter().all(|r| r.passed);
            let warnings = results
                .iter()
                .filter(|r| !r.passed)
                .map(|r| format!("{} / {} failed: {}", r.anchor, r.name, r.detail))
                .collect();
            let inputs = json!({"filter": filter, "corrupt_gram": corrupt_gram});
            let outcome = Outcome {
                envelope: ReportEnvelope::new("selftest", &inputs, selftest::results_json(&results), warnings),
                human: selftest::results_table(&results),
            };
            return Ok((outcome, if passed { EXIT_OK } else { EXIT_SELFTEST_FAILED }));
        }
    };
    Ok((outcome, EXIT_OK))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok((outcome, code)) => {
            let text = if cli.json {
                format!("{}\n", outcome.envelope.to_json())
            } else {
                outcome.human
            };
            // a closed pipe (e.g. `| head`) is not an error worth a panic
            let mut out = std::io::stdout().lock();
            match out.write_all(text.as_bytes()).and_then(|_| out.flush()) {
                Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => {
                    eprintln!("catdyn: {e}");
                    ExitCode::from(EXIT_INTERNAL as u8)
                }
                _ => ExitCode::from(code as u8),
            }
        }
        Err(e) => {
            eprintln!("catdyn: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
