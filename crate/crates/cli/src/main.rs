//! `splab`: batch runner for the verification suites and estimate scans.

mod config;
mod output;
mod suites;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use config::ExperimentConfig;

#[derive(Parser)]
#[command(
    name = "splab",
    version,
    about = "Pseudo-spectral Schrödinger laboratory"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Identity checks with pass/fail thresholds.
    Verify {
        suite: VerifySuite,
        #[command(flatten)]
        opts: Overrides,
    },
    /// Ratio scans over families and exponents.
    Scan {
        suite: ScanSuite,
        #[command(flatten)]
        opts: Overrides,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum VerifySuite {
    Extension,
    Parity,
    Partition,
    Propagator,
    Commutators,
}

#[derive(Clone, Copy, ValueEnum)]
enum ScanSuite {
    Strichartz,
    Smoothing,
    StrichartzSmoothing,
    EndpointPipeline,
    KFunctional,
}

fn suite_name(v: impl ValueEnum) -> String {
    v.to_possible_value()
        .expect("no skipped variants")
        .get_name()
        .to_string()
}

/// Flags override the config file, which overrides the defaults.
#[derive(Args)]
struct Overrides {
    /// TOML experiment config.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output root; defaults to $SPLAB_OUTDIR, then ./splab-out.
    #[arg(long)]
    outdir: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    /// Worker threads.
    #[arg(long)]
    workers: Option<usize>,
    #[arg(long)]
    geometry: Option<String>,
    #[arg(long)]
    eps: Option<f64>,
    /// free, dirichlet or neumann.
    #[arg(long)]
    bc: Option<String>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    size: Option<usize>,
    #[arg(long)]
    box_len: Option<f64>,
    #[arg(long)]
    t_max: Option<f64>,
    #[arg(long)]
    steps: Option<usize>,
    /// Integrate over [0, T] only.
    #[arg(long)]
    one_sided: bool,
    /// Regularity, e.g. 0 or 1/4.
    #[arg(long)]
    s: Option<String>,
    #[arg(long)]
    pairs: Option<usize>,
    /// Time exponent; `inf` allowed.
    #[arg(long)]
    p: Option<String>,
    /// Space exponent; `inf` allowed.
    #[arg(long)]
    q: Option<String>,
    /// Family size.
    #[arg(long)]
    count: Option<usize>,
}

impl Overrides {
    fn resolve(self, suite: String) -> Result<ExperimentConfig, config::ConfigError> {
        let mut c = match &self.config {
            Some(path) => ExperimentConfig::load(path)?,
            None => ExperimentConfig::default(),
        };
        c.suite = suite;
        macro_rules! set {
            ($flag:expr => $($field:tt)+) => {
                if let Some(v) = $flag {
                    c.$($field)+ = v;
                }
            };
        }
        set!(self.seed => seed);
        set!(self.workers => workers);
        set!(self.geometry => geometry);
        set!(self.eps => eps);
        set!(self.bc => bc);
        set!(self.n => grid.n);
        set!(self.size => grid.size);
        set!(self.t_max => time.t_max);
        set!(self.steps => time.steps);
        set!(self.s => exponents.s);
        set!(self.pairs => exponents.pairs);
        set!(self.count => family.count);
        if self.outdir.is_some() {
            c.outdir = self.outdir;
        }
        if self.box_len.is_some() {
            c.grid.box_len = self.box_len;
        }
        if self.p.is_some() {
            c.exponents.p = self.p;
        }
        if self.q.is_some() {
            c.exponents.q = self.q;
        }
        if self.one_sided {
            c.time.two_sided = false;
        }
        Ok(c)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (command, suite, opts) = match cli.command {
        Command::Verify { suite, opts } => ("verify", suite_name(suite), opts),
        Command::Scan { suite, opts } => ("scan", suite_name(suite), opts),
    };
    let cfg = match opts.resolve(suite).and_then(|c| c.validate().map(|_| c)) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    match execute(command, &cfg) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(3)
        }
    }
}

/// Runs the suite and writes every artifact; `Ok(false)` when an assertion
/// failed.
fn execute(command: &str, cfg: &ExperimentConfig) -> anyhow::Result<bool> {
    let started = output::timestamp();
    let dir = output::run_dir(&cfg.output_root(), &cfg.suite, &started)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.workers)
        .build()?;
    let result = pool.install(|| suites::run(cfg));
    let (status, failures) = match &result {
        Ok(out) => {
            output::write_outputs(&dir, out)?;
            (
                if out.failures.is_empty() {
                    "pass"
                } else {
                    "fail"
                },
                out.failures.clone(),
            )
        }
        Err(e) => ("error", vec![format!("{e:#}")]),
    };
    let manifest = output::Manifest {
        command,
        suite: &cfg.suite,
        started,
        finished: output::timestamp(),
        seed: cfg.seed,
        config_sha256: output::config_hash(cfg),
        versions: output::versions(),
        status,
        failures: &failures,
        config: cfg,
    };
    output::write_json(&dir.join("manifest.json"), &manifest)?;
    let rows = result.as_ref().map(|o| o.rows.len()).unwrap_or(0);
    println!(
        "{command} {}: {} ({rows} rows) -> {}",
        cfg.suite,
        status.to_uppercase(),
        dir.display()
    );
    for f in &failures {
        eprintln!("  {f}");
    }
    match result {
        Ok(out) => Ok(out.failures.is_empty()),
        Err(e) => Err(e),
    }
}
