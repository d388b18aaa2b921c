use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use oscgauss::scurve::TraceOptions;
use oscgauss::{Error, Result};
use oscgauss_cli::commands::{self, QuadArgs};
use oscgauss_cli::config::Config;
use oscgauss_cli::criteria::{self, Suite};
use oscgauss_cli::{exit_code, EXIT_TOLERANCE};

/// Complex Gaussian quadrature for e^{i omega x^r} and the asymptotics of
/// the associated orthogonal polynomials.
#[derive(Parser)]
#[command(name = "oscgauss", version)]
struct Cli {
    /// Flat TOML file with defaults for any flag; flags win.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Write here instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Reported decimal digits (at least 30).
    #[arg(long, global = true)]
    precision: Option<u32>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Moments M_k of e^{i z^r} as CSV.
    Moments {
        #[arg(long)]
        r: Option<u32>,
        #[arg(long)]
        kmax: Option<usize>,
    },
    /// Nodes and weights of the n-point rule as CSV.
    Opq {
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        r: Option<u32>,
    },
    /// gamma, gamma_1 and gamma_2 as a JSON array.
    Curve {
        /// Largest step of the tracer.
        #[arg(long)]
        step: Option<f64>,
        /// Local error bound per step.
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Equilibrium density and cdf on gamma.
    Measure {
        /// Curve JSON from `curve`; traced afresh when absent.
        #[arg(long)]
        curve: Option<PathBuf>,
        #[arg(long)]
        samples: Option<usize>,
    },
    /// Asymptotic formulas against the exact P_n.
    Asymp {
        #[arg(long)]
        n: Option<usize>,
        /// Probe points as "x,y;x,y;..."; a fixed set when absent.
        #[arg(long)]
        probes: Option<String>,
    },
    /// The integral of f(x) e^{i omega x^r} over [a, b].
    Quad {
        #[arg(long, allow_hyphen_values = true)]
        a: Option<String>,
        #[arg(long)]
        b: Option<String>,
        #[arg(long)]
        omega: Option<String>,
        #[arg(long)]
        r: Option<u32>,
        /// Points of both rules unless overridden below.
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        n_endpoint: Option<usize>,
        #[arg(long)]
        n_stationary: Option<usize>,
        /// constant[:c], monomial:k, polynomial:c0,c1,..., exp or cos.
        #[arg(long)]
        amplitude: Option<String>,
    },
    /// A scalar field (ReD, ImD, ReQ, ImQ, RePhi2) on a grid as CSV.
    Fields {
        #[arg(long)]
        which: Option<String>,
        /// "x_min,x_max,nx,y_min,y_max,ny".
        #[arg(long, allow_hyphen_values = true)]
        grid: Option<String>,
    },
    /// Run acceptance criteria; nonzero exit on failure.
    Verify {
        /// curve, measure, zeros, asymp, quad, oracles, integral or all.
        #[arg(long)]
        suite: Option<String>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e) as u8)
        }
    }
}

fn run(cli: Cli) -> Result<i32> {
    let cfg = match &cli.config {
        Some(p) => Config::load(p)?,
        None => Config::default(),
    };
    let out_path = cfg.value("out", cli.out.clone())?;
    let mut sink: Box<dyn Write> = match &out_path {
        Some(p) => Box::new(BufWriter::new(File::create(p).map_err(|e| Error::Io(format!("{}: {e}", p.display())))?)),
        None => Box::new(io::stdout().lock()),
    };
    let out: &mut dyn Write = sink.as_mut();
    let digits = cfg.value("precision", cli.precision)?;
    let ctx = || commands::context(digits.unwrap_or(30));
    let mut code = 0;
    match cli.command {
        Command::Moments { r, kmax } => {
            commands::moments(cfg.value_or("r", r, 3)?, cfg.value_or("kmax", kmax, 10)?, &ctx()?, out)?;
        }
        Command::Opq { n, r } => {
            let n = cfg.value_or("n", n, 10)?;
            commands::opq(n, cfg.value_or("r", r, 3)?, digits, out)?;
        }
        Command::Curve { step, tol } => {
            let d = TraceOptions::default();
            let opts = TraceOptions {
                max_step: cfg.value_or("step", step, d.max_step)?,
                step_tolerance: cfg.value_or("tol", tol, d.step_tolerance)?,
                ..d
            };
            commands::curve(&opts, &ctx()?, out)?;
        }
        Command::Measure { curve, samples } => {
            let doc = match cfg.value("curve", curve)? {
                Some(p) => {
                    let text = std::fs::read_to_string(&p).map_err(|e| Error::Io(format!("{}: {e}", p.display())))?;
                    Some(serde_json::from_str(&text)?)
                }
                None => None,
            };
            commands::measure(doc.as_ref(), cfg.value_or("samples", samples, 101)?, &ctx()?, out)?;
        }
        Command::Asymp { n, probes } => {
            let probes = cfg.string("probes", probes);
            commands::asymp(cfg.value_or("n", n, 20)?, probes.as_deref(), &ctx()?, out)?;
        }
        Command::Quad {
            a,
            b,
            omega,
            r,
            n,
            n_endpoint,
            n_stationary,
            amplitude,
        } => {
            let n = cfg.value_or("n", n, 6)?;
            let a = cfg.string("a", a).unwrap_or_else(|| "-1".into());
            let b = cfg.string("b", b).unwrap_or_else(|| "1".into());
            let omega = cfg.string("omega", omega).unwrap_or_else(|| "100".into());
            let amplitude = cfg.string("amplitude", amplitude).unwrap_or_else(|| "constant".into());
            let args = QuadArgs {
                a: &a,
                b: &b,
                omega: &omega,
                r: cfg.value_or("r", r, 3)?,
                n_endpoint: cfg.value_or("n-endpoint", n_endpoint, n)?,
                n_stationary: cfg.value_or("n-stationary", n_stationary, n)?,
                amplitude: &amplitude,
            };
            commands::quad(&args, &ctx()?, out)?;
        }
        Command::Fields { which, grid } => {
            let which = cfg.string("which", which).unwrap_or_else(|| "ReD".into());
            let grid = cfg.string("grid", grid).unwrap_or_else(|| "-3,3,61,-3,3,61".into());
            commands::fields(&which, &commands::parse_grid(&grid)?, &ctx()?, out)?;
        }
        Command::Verify { suite } => {
            let suite = Suite::parse(&cfg.string("suite", suite).unwrap_or_else(|| "all".into()))?;
            let outcomes = criteria::run(suite);
            for o in &outcomes {
                eprintln!("{}", o.summary_line());
            }
            let report: Vec<_> = outcomes.iter().map(|o| o.to_json()).collect();
            commands::write_json(out, &serde_json::json!({ "criteria": report }))?;
            if let Some(e) = outcomes.iter().find_map(|o| o.error.as_ref()) {
                code = exit_code(e);
            } else if outcomes.iter().any(|o| !o.pass) {
                code = EXIT_TOLERANCE;
            }
        }
    }
    out.flush()?;
    Ok(code)
}
