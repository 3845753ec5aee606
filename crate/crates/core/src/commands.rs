//! One experiment per output mode. Every command is a pure function of its
//! [`SweepConfig`]: each `(N, σ_η, σ_ξ)` cell reuses the same master seed, and
//! realizations are seeded per index, so the worker count never shows up in
//! the output.

use std::path::Path;

use crate::chain::{ChainSpec, DisorderSpec};
use crate::config::{Mode, OutputFormat, SweepConfig};
use crate::ensemble::{simulate, EnsembleConfig, EnsembleStats, Quantity};
use crate::error::{QstError, Result};
use crate::fidelity::{fmin_maps, CLASSICAL_THRESHOLD};
use crate::table::{Cell, Table};

/// Execution knobs that must not influence results.
#[derive(Debug, Clone, Copy, Default)]
pub struct RunOptions {
    /// Worker threads; `None` uses rayon's default.
    pub workers: Option<usize>,
    /// Emit per-cell progress on standard error.
    pub progress: bool,
}

fn beta_tag(b: f64) -> String {
    format!("b{b}")
}

fn ensemble_config(
    cfg: &SweepConfig,
    n: usize,
    sigma_eta: f64,
    sigma_xi: f64,
) -> Result<EnsembleConfig> {
    let chain = ChainSpec::pst(n)?.with_base_energy(cfg.base_energy);
    let mut e = EnsembleConfig::new(chain, DisorderSpec::new(sigma_eta, sigma_xi)?);
    e.realizations = cfg.realizations;
    e.beta2_grid = cfg.beta2_grid.clone();
    e.master_seed = cfg.master_seed;
    e.histogram_bin_width = cfg.bin_width;
    e.epsilon = cfg.epsilon;
    Ok(e)
}

fn single<T: Copy>(name: &str, values: &[T], mode: Mode) -> Result<T> {
    match values {
        [v] => Ok(*v),
        _ => Err(QstError::config(format!(
            "mode {mode} takes a single {name}, got {} values",
            values.len()
        ))),
    }
}

struct Runner<'a> {
    cfg: &'a SweepConfig,
    opts: RunOptions,
}

impl Runner<'_> {
    fn stats(&self, n: usize, sigma_eta: f64, sigma_xi: f64) -> Result<EnsembleStats> {
        let e = ensemble_config(self.cfg, n, sigma_eta, sigma_xi)?;
        let (_, stats) = simulate(&e)?;
        if self.opts.progress {
            eprintln!(
                "[{}] N={n} sigma_eta={sigma_eta} sigma_xi={sigma_xi}: <F_avg>={:.4}",
                self.cfg.mode, stats.mean_f_avg
            );
        }
        Ok(stats)
    }
}

pub fn cmd_histogram(cfg: &SweepConfig, opts: RunOptions) -> Result<Table> {
    let n = single("chain length", &cfg.n_list, cfg.mode)?;
    let se = single("sigma_eta", &cfg.sigma_eta_grid, cfg.mode)?;
    let sx = single("sigma_xi", &cfg.sigma_xi_grid, cfg.mode)?;
    let stats = Runner { cfg, opts }.stats(n, se, sx)?;
    let mut t = Table::new(
        cfg.mode.name(),
        ["quantity", "beta2", "bin_low", "bin_high", "count"]
            .map(String::from)
            .to_vec(),
    );
    for th in &stats.histograms {
        let (name, beta) = match th.quantity {
            Quantity::InputFidelity(b) => ("f_psi", Cell::from(b)),
            Quantity::AverageFidelity => ("f_avg", Cell::Empty),
        };
        for (i, &count) in th.histogram.counts.iter().enumerate() {
            let (lo, hi) = th.histogram.bin_edges(i);
            t.push(vec![
                name.into(),
                beta.clone(),
                lo.into(),
                hi.into(),
                count.into(),
            ]);
        }
    }
    Ok(t)
}

pub fn cmd_sweep_beta(cfg: &SweepConfig, opts: RunOptions) -> Result<Table> {
    let se = single("sigma_eta", &cfg.sigma_eta_grid, cfg.mode)?;
    let sx = single("sigma_xi", &cfg.sigma_xi_grid, cfg.mode)?;
    let runner = Runner { cfg, opts };
    let mut t = Table::new(
        cfg.mode.name(),
        [
            "N",
            "beta2",
            "mean_f_psi",
            "std_f_psi",
            "mean_f_avg",
            "std_f_avg",
            "f_cl",
        ]
        .map(String::from)
        .to_vec(),
    );
    for &n in &cfg.n_list {
        let s = runner.stats(n, se, sx)?;
        for (j, &b) in s.beta2_grid.iter().enumerate() {
            t.push(vec![
                n.into(),
                b.into(),
                s.mean_f_psi[j].into(),
                s.std_f_psi[j].into(),
                s.mean_f_avg.into(),
                s.std_f_avg.into(),
                CLASSICAL_THRESHOLD.into(),
            ]);
        }
    }
    Ok(t)
}

pub fn cmd_sweep_n(cfg: &SweepConfig, opts: RunOptions) -> Result<Table> {
    let se = single("sigma_eta", &cfg.sigma_eta_grid, cfg.mode)?;
    let sx = single("sigma_xi", &cfg.sigma_xi_grid, cfg.mode)?;
    let runner = Runner { cfg, opts };
    let mut columns = vec!["N".to_string()];
    for &b in &cfg.beta2_grid {
        let tag = beta_tag(b);
        columns.push(format!("mean_f_psi_{tag}"));
        columns.push(format!("std_f_psi_{tag}"));
        columns.push(format!("fail_prob_f_psi_{tag}"));
    }
    columns.extend(
        [
            "mean_f_avg",
            "std_f_avg",
            "fail_prob_f_avg",
            "delta_0",
            "delta_1",
        ]
        .map(String::from),
    );
    let mut t = Table::new(cfg.mode.name(), columns);
    for &n in &cfg.n_list {
        let s = runner.stats(n, se, sx)?;
        let mut row = vec![Cell::from(n)];
        for j in 0..s.beta2_grid.len() {
            row.push(s.mean_f_psi[j].into());
            row.push(s.std_f_psi[j].into());
            row.push(s.fail_prob_f_psi[j].into());
        }
        row.extend([
            s.mean_f_avg.into(),
            s.std_f_avg.into(),
            s.fail_prob_f_avg.into(),
            s.delta_0().into(),
            s.delta_1().into(),
        ]);
        t.push(row);
    }
    Ok(t)
}

pub fn cmd_sweep_disorder(cfg: &SweepConfig, opts: RunOptions) -> Result<Table> {
    let runner = Runner { cfg, opts };
    let mut columns: Vec<String> = ["N", "sigma_eta", "sigma_xi", "mean_f_avg", "std_f_avg"]
        .map(String::from)
        .to_vec();
    for &b in &cfg.beta2_grid {
        columns.push(format!("mean_f_psi_{}", beta_tag(b)));
    }
    columns.push("fail_prob_f_avg".into());
    for &b in &cfg.beta2_grid {
        columns.push(format!("fail_prob_f_psi_{}", beta_tag(b)));
    }
    columns.extend(["delta_0", "delta_1", "prob_window"].map(String::from));
    let mut t = Table::new(cfg.mode.name(), columns);
    for &n in &cfg.n_list {
        for &se in &cfg.sigma_eta_grid {
            for &sx in &cfg.sigma_xi_grid {
                let s = runner.stats(n, se, sx)?;
                let mut row: Vec<Cell> = vec![
                    n.into(),
                    se.into(),
                    sx.into(),
                    s.mean_f_avg.into(),
                    s.std_f_avg.into(),
                ];
                row.extend(s.mean_f_psi.iter().map(|&v| Cell::from(v)));
                row.push(s.fail_prob_f_avg.into());
                row.extend(s.fail_prob_f_psi.iter().map(|&v| Cell::from(v)));
                row.extend([s.delta_0().into(), s.delta_1().into(), s.prob_window.into()]);
                t.push(row);
            }
        }
    }
    Ok(t)
}

pub fn cmd_prob_window(cfg: &SweepConfig, opts: RunOptions) -> Result<Table> {
    let runner = Runner { cfg, opts };
    let mut t = Table::new(
        cfg.mode.name(),
        [
            "N",
            "sigma_eta",
            "sigma_xi",
            "epsilon",
            "mean_p",
            "prob_window",
            "prob_window_f_avg",
        ]
        .map(String::from)
        .to_vec(),
    );
    for &n in &cfg.n_list {
        for &se in &cfg.sigma_eta_grid {
            for &sx in &cfg.sigma_xi_grid {
                let s = runner.stats(n, se, sx)?;
                t.push(vec![
                    n.into(),
                    se.into(),
                    sx.into(),
                    cfg.epsilon.into(),
                    s.mean_p.into(),
                    s.prob_window.into(),
                    s.prob_window_average.into(),
                ]);
            }
        }
    }
    Ok(t)
}

pub fn cmd_fmin_map(cfg: &SweepConfig) -> Result<Table> {
    let maps = fmin_maps(&cfg.p_grid, &cfg.delta_phi_grid)?;
    let mut t = Table::new(
        cfg.mode.name(),
        [
            "p",
            "delta_phi",
            "argmin_beta2",
            "fmin_minus_p",
            "fmin_minus_favg",
        ]
        .map(String::from)
        .to_vec(),
    );
    for (i, &p) in maps.p_grid.iter().enumerate() {
        for (j, &phi) in maps.delta_phi_grid.iter().enumerate() {
            t.push(vec![
                p.into(),
                phi.into(),
                maps.argmin_beta2[i][j].into(),
                maps.fmin_minus_p[i][j].into(),
                maps.fmin_minus_favg[i][j].into(),
            ]);
        }
    }
    Ok(t)
}

fn dispatch(cfg: &SweepConfig, opts: RunOptions) -> Result<Table> {
    match cfg.mode {
        Mode::Histogram => cmd_histogram(cfg, opts),
        Mode::SweepBeta => cmd_sweep_beta(cfg, opts),
        Mode::SweepN => cmd_sweep_n(cfg, opts),
        Mode::SweepDisorder => cmd_sweep_disorder(cfg, opts),
        Mode::ProbWindow => cmd_prob_window(cfg, opts),
        Mode::FminMap => cmd_fmin_map(cfg),
    }
}

/// Run the configured mode, on a dedicated pool when a worker count is given.
pub fn run(cfg: &SweepConfig, opts: RunOptions) -> Result<Table> {
    cfg.validate()?;
    match opts.workers {
        Some(w) => rayon::ThreadPoolBuilder::new()
            .num_threads(w.max(1))
            .build()
            .map_err(|e| QstError::ThreadPool(e.to_string()))?
            .install(|| dispatch(cfg, opts)),
        None => dispatch(cfg, opts),
    }
}

/// Serialize in the configured format.
pub fn render(table: &Table, format: OutputFormat) -> Result<Vec<u8>> {
    match format {
        OutputFormat::Csv => table.to_csv(),
        OutputFormat::Json => Ok(table.to_json()),
    }
}

pub fn write_output(bytes: &[u8], path: &Path) -> Result<()> {
    std::fs::write(path, bytes).map_err(|source| QstError::Io {
        path: path.to_path_buf(),
        source,
    })
}
