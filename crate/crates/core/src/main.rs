#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;

use polyspec::esd::{distance_report, esd_of_polynomial, merge, DistanceSettings, LimitLaw};
use polyspec::harness::{
    export_result, export_verification, render_scatter, run_experiment, run_verification, ExperimentConfig,
    HarnessError, OutputFormat, Regime,
};
use polyspec::matpoly::sample_monic_gaussian;
use polyspec::RngStream;

const EXIT_VALIDATION: u8 = 1;
const EXIT_RUNTIME: u8 = 2;
const EXIT_CHECK_FAILED: u8 = 3;

/// Spectra of random Gaussian monic matrix polynomials.
#[derive(Parser)]
#[command(name = "polyspec", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sample one polynomial and print it as JSON.
    Sample {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Write to this file instead of standard output.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Eigenvalues of independent samples: points CSV plus a distance report on standard output.
    Esd {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 1)]
        trials: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// grow-n scales by n^(-1/2) and compares with the disc mixture; grow-k is unscaled against the unit circle.
        #[arg(long, default_value = "grow-n")]
        regime: Regime,
        #[arg(long, default_value_t = 0.2)]
        atom_radius: f64,
        /// Points CSV path.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a convergence experiment and export its outputs.
    Experiment(RunArgs),
    /// Run the theorem, tail and lemma checks. Exits with 3 on a deterministic violation.
    Verify(RunArgs),
    /// Scatter plot of a points CSV.
    Plot {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Omit the unit circle overlay.
        #[arg(long)]
        no_circle: bool,
    },
}

#[derive(Args)]
struct RunArgs {
    /// JSON config; flags override its fields.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    regime: Option<Regime>,
    /// n values (repeat or comma-separate).
    #[arg(long, value_delimiter = ',')]
    n: Vec<usize>,
    /// k values (repeat or comma-separate).
    #[arg(long, value_delimiter = ',')]
    k: Vec<usize>,
    /// Trials per cell (experiment) or per size (verify).
    #[arg(long)]
    trials: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// Shift as `re,im` (repeatable).
    #[arg(long, value_parser = parse_complex)]
    z: Vec<Complex64>,
    #[arg(long)]
    atom_radius: Option<f64>,
    /// Output directory.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    format: Option<OutputFormat>,
}

fn parse_complex(s: &str) -> Result<Complex64, String> {
    let mut parts = s.split(',');
    let re = parts.next().unwrap_or("").trim();
    let im = parts.next().unwrap_or("0").trim();
    if parts.next().is_some() {
        return Err(format!("expected `re,im`, got `{s}`"));
    }
    let parse = |v: &str| v.parse::<f64>().map_err(|e| format!("`{v}`: {e}"));
    Ok(Complex64::new(parse(re)?, parse(im)?))
}

impl RunArgs {
    /// Config file (or regime defaults), then flags.
    fn resolve(&self) -> Result<ExperimentConfig, HarnessError> {
        let mut cfg = match &self.config {
            Some(path) => ExperimentConfig::from_json_file(path)?,
            None => ExperimentConfig::default_for(self.regime.unwrap_or(Regime::GrowN)),
        };
        if let Some(regime) = self.regime {
            cfg.regime = regime;
        }
        if !self.n.is_empty() {
            cfg.n_values = self.n.clone();
        }
        if !self.k.is_empty() {
            cfg.k_values = self.k.clone();
        }
        if let Some(seed) = self.seed {
            cfg.seed = seed;
        }
        if !self.z.is_empty() {
            cfg.z_values = self.z.clone();
        }
        if let Some(r) = self.atom_radius {
            cfg.atom_radius = r;
        }
        if let Some(out) = &self.out {
            cfg.output_dir = out.clone();
        }
        if let Some(format) = self.format {
            cfg.format = format;
        }
        Ok(cfg)
    }
}

enum Failure {
    Validation(String),
    Runtime(String),
    Check(String),
}

impl From<HarnessError> for Failure {
    fn from(e: HarnessError) -> Self {
        if e.is_validation() {
            Failure::Validation(e.to_string())
        } else {
            Failure::Runtime(e.to_string())
        }
    }
}

fn write_output(out: Option<&PathBuf>, text: &str) -> Result<(), Failure> {
    match out {
        Some(path) => std::fs::write(path, text).map_err(|e| Failure::Runtime(format!("{}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Sample { n, k, seed, out } => {
            if n == 0 || k == 0 {
                return Err(Failure::Validation("n and k must be positive".into()));
            }
            let p =
                sample_monic_gaussian(n, k, &RngStream::new(seed, 0)).map_err(|e| Failure::Runtime(e.to_string()))?;
            write_output(out.as_ref(), &format!("{}\n", p.to_json()))
        }
        Command::Esd {
            n,
            k,
            trials,
            seed,
            regime,
            atom_radius,
            out,
        } => {
            if n == 0 || k == 0 || trials == 0 {
                return Err(Failure::Validation("n, k and trials must be positive".into()));
            }
            if !(atom_radius > 0.0) {
                return Err(Failure::Validation("atom radius must be positive".into()));
            }
            let (scale, law) = match regime {
                Regime::GrowN => (1.0 / (n as f64).sqrt(), LimitLaw::DiscMixture { k }),
                Regime::GrowK => (1.0, LimitLaw::UnitCircle),
            };
            let root = RngStream::new(seed, 0);
            let runtime = |e: &dyn std::fmt::Display| Failure::Runtime(e.to_string());
            let esds = (0..trials as u64)
                .map(|t| {
                    let p = sample_monic_gaussian(n, k, &root.substream(t)).map_err(|e| runtime(&e))?;
                    esd_of_polynomial(&p, scale).map_err(|e| runtime(&e))
                })
                .collect::<Result<Vec<_>, _>>()?;
            let esd = merge(&esds).map_err(|e| runtime(&e))?;
            if let Some(path) = &out {
                let mut buf = Vec::new();
                esd.write_csv(&mut buf).map_err(|e| runtime(&e))?;
                std::fs::write(path, buf).map_err(|e| Failure::Runtime(format!("{}: {e}", path.display())))?;
                log::info!("wrote {} points to {}", esd.len(), path.display());
            }
            let settings = DistanceSettings {
                atom_radius,
                ..DistanceSettings::default()
            };
            let report = distance_report(&esd, &law, &settings).map_err(|e| runtime(&e))?;
            println!("{}", serde_json::to_string_pretty(&report).expect("report serializes"));
            Ok(())
        }
        Command::Experiment(args) => {
            let mut cfg = args.resolve()?;
            if let Some(t) = args.trials {
                cfg.trials = Some(t);
            }
            cfg.validate()?;
            let mut result = run_experiment(&cfg)?;
            for path in export_result(&mut result, &cfg.output_dir, cfg.format)? {
                println!("{}", path.display());
            }
            Ok(())
        }
        Command::Verify(args) => {
            let mut cfg = args.resolve()?;
            if let Some(t) = args.trials {
                cfg.verify.regime_n.trials = t;
                cfg.verify.regime_k.trials = t;
            }
            let result = run_verification(&cfg, &RngStream::new(cfg.seed, 0))?;
            for path in export_verification(&result, &cfg.output_dir)? {
                println!("{}", path.display());
            }
            if result.passed() {
                if result.probabilistic_violations > 0 {
                    log::warn!("{} probabilistic bound violations", result.probabilistic_violations);
                }
                Ok(())
            } else {
                Err(Failure::Check(format!(
                    "{} deterministic violations",
                    result.deterministic_violations
                )))
            }
        }
        Command::Plot { input, out, no_circle } => {
            let path = render_scatter(&input, &out, !no_circle)?;
            println!("{}", path.display());
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info"))
        .target(env_logger::Target::Stderr)
        .init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(EXIT_VALIDATION)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Validation(m)) => {
            log::error!("{m}");
            ExitCode::from(EXIT_VALIDATION)
        }
        Err(Failure::Runtime(m)) => {
            log::error!("{m}");
            ExitCode::from(EXIT_RUNTIME)
        }
        Err(Failure::Check(m)) => {
            log::error!("{m}");
            ExitCode::from(EXIT_CHECK_FAILED)
        }
    }
}
