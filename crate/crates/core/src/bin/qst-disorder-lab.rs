use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use qst_disorder_lab::commands::{self, RunOptions};
use qst_disorder_lab::config::{Overrides, SweepConfig, WORKERS_ENV};
use qst_disorder_lab::QstError;

/// Fidelity statistics of state transfer through disordered spin chains.
///
/// Grids accept comma lists (0,0.05,0.1) or inclusive ranges (0:0.25:0.025).
#[derive(Debug, Parser)]
#[command(name = "qst-disorder-lab", version)]
struct Cli {
    /// histogram | sweep-beta | sweep-n | sweep-disorder | fmin-map | prob-window
    #[arg(long)]
    mode: Option<String>,
    /// Chain length(s)
    #[arg(long)]
    n: Option<String>,
    /// Chain lengths as start:stop[:step]
    #[arg(long = "n-range")]
    n_range: Option<String>,
    /// Diagonal disorder strength(s)
    #[arg(long = "sigma-eta")]
    sigma_eta: Option<String>,
    /// Relative coupling disorder strength(s)
    #[arg(long = "sigma-xi")]
    sigma_xi: Option<String>,
    /// Grid used for both disorder axes unless they are given separately
    #[arg(long = "sigma-grid")]
    sigma_grid: Option<String>,
    #[arg(long)]
    realizations: Option<String>,
    /// Input weights |beta|^2
    #[arg(long = "beta2-grid")]
    beta2_grid: Option<String>,
    /// Tolerance of the p ~ F_min window
    #[arg(long)]
    epsilon: Option<String>,
    #[arg(long)]
    seed: Option<String>,
    /// Output file (standard output when omitted)
    #[arg(long)]
    out: Option<PathBuf>,
    /// Flat key = value configuration file
    #[arg(long)]
    config: Option<PathBuf>,
    /// csv | json
    #[arg(long)]
    format: Option<String>,
    #[arg(long = "base-energy")]
    base_energy: Option<String>,
    #[arg(long = "bin-width")]
    bin_width: Option<String>,
    /// Transfer probabilities for fmin-map
    #[arg(long = "p-grid")]
    p_grid: Option<String>,
    /// Phases for fmin-map, within [-pi, pi]
    #[arg(long = "delta-phi-grid")]
    delta_phi_grid: Option<String>,
    /// Suppress per-cell progress on standard error
    #[arg(long, short)]
    quiet: bool,
}

impl Cli {
    fn pairs(&self) -> Vec<(&'static str, String)> {
        let mut pairs = Vec::new();
        let mut put = |k: &'static str, v: &Option<String>| {
            if let Some(v) = v {
                pairs.push((k, v.clone()));
            }
        };
        put("mode", &self.mode);
        put("n_range", &self.n_range);
        put("n", &self.n);
        put("sigma_grid", &self.sigma_grid);
        put("sigma_eta", &self.sigma_eta);
        put("sigma_xi", &self.sigma_xi);
        put("realizations", &self.realizations);
        put("beta2_grid", &self.beta2_grid);
        put("epsilon", &self.epsilon);
        put("seed", &self.seed);
        put("format", &self.format);
        put("base_energy", &self.base_energy);
        put("bin_width", &self.bin_width);
        put("p_grid", &self.p_grid);
        put("delta_phi_grid", &self.delta_phi_grid);
        if let Some(out) = &self.out {
            pairs.push(("out", out.display().to_string()));
        }
        pairs
    }
}

fn workers_from_env() -> Result<Option<usize>, QstError> {
    match std::env::var(WORKERS_ENV) {
        Ok(v) if !v.trim().is_empty() => v
            .trim()
            .parse::<usize>()
            .map(Some)
            .map_err(|_| QstError::Config(format!("{WORKERS_ENV}='{v}' is not a worker count"))),
        _ => Ok(None),
    }
}

fn run(cli: Cli) -> Result<(), QstError> {
    let file = match &cli.config {
        Some(path) => Overrides::from_file(path)?,
        None => Overrides::default(),
    };
    let cfg = SweepConfig::resolve(Overrides::from_pairs(&cli.pairs())?.over(file))?;
    let opts = RunOptions {
        workers: workers_from_env()?,
        progress: !cli.quiet,
    };
    let table = commands::run(&cfg, opts)?;
    let bytes = commands::render(&table, cfg.format)?;
    match &cfg.output_path {
        Some(path) => commands::write_output(&bytes, path)?,
        None => std::io::stdout()
            .write_all(&bytes)
            .map_err(|source| QstError::Io {
                path: "<stdout>".into(),
                source,
            })?,
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
