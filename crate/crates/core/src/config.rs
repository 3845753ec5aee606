//! Sweep configuration: a flat `key = value` file, command-line overrides,
//! and per-mode defaults. Precedence is command line > file > defaults.
//!
//! Grids are written either as comma lists (`0,0.05,0.1`) or inclusive
//! ranges `start:stop[:step]` (`0:0.25:0.025`, `4:80`).

use std::f64::consts::PI;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use crate::ensemble::{default_beta2_grid, DEFAULT_BIN_WIDTH, DEFAULT_EPSILON, FEATURED_BETA2};
use crate::error::{QstError, Result};

pub const DEFAULT_SIGMA: f64 = 0.1;
pub const DEFAULT_SEED: u64 = 20_130_417;
/// Environment variable overriding the number of worker threads.
pub const WORKERS_ENV: &str = "QST_WORKERS";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Histogram,
    SweepBeta,
    SweepN,
    SweepDisorder,
    FminMap,
    ProbWindow,
}

impl Mode {
    pub const ALL: [Mode; 6] = [
        Mode::Histogram,
        Mode::SweepBeta,
        Mode::SweepN,
        Mode::SweepDisorder,
        Mode::FminMap,
        Mode::ProbWindow,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Mode::Histogram => "histogram",
            Mode::SweepBeta => "sweep-beta",
            Mode::SweepN => "sweep-n",
            Mode::SweepDisorder => "sweep-disorder",
            Mode::FminMap => "fmin-map",
            Mode::ProbWindow => "prob-window",
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Mode {
    type Err = QstError;

    fn from_str(s: &str) -> Result<Self> {
        Mode::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| {
                let names: Vec<_> = Mode::ALL.iter().map(|m| m.name()).collect();
                QstError::config(format!(
                    "unknown mode '{s}' (expected one of {})",
                    names.join(", ")
                ))
            })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

impl FromStr for OutputFormat {
    type Err = QstError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            other => Err(QstError::config(format!(
                "unknown format '{other}' (csv or json)"
            ))),
        }
    }
}

fn round_grid(x: f64) -> f64 {
    (x * 1e12).round() / 1e12
}

/// Parse a comma list or an inclusive `start:stop[:step]` range of reals.
pub fn parse_real_grid(s: &str) -> Result<Vec<f64>> {
    let s = s.trim();
    if s.contains(':') {
        let parts: Vec<&str> = s.split(':').map(str::trim).collect();
        let nums = parts
            .iter()
            .map(|p| parse_f64(p))
            .collect::<Result<Vec<f64>>>()?;
        let (start, stop, step) = match nums.as_slice() {
            [a, b, c] => (*a, *b, *c),
            _ => {
                return Err(QstError::config(format!(
                    "real range '{s}' needs start:stop:step"
                )))
            }
        };
        if !(step > 0.0) || stop < start {
            return Err(QstError::config(format!("bad range '{s}'")));
        }
        let count = ((stop - start) / step + 1e-9).floor() as usize + 1;
        Ok((0..count)
            .map(|i| round_grid(start + i as f64 * step))
            .collect())
    } else {
        s.split(',').map(|p| parse_f64(p.trim())).collect()
    }
}

/// Parse a comma list or an inclusive `start:stop[:step]` range of integers.
pub fn parse_int_grid(s: &str) -> Result<Vec<usize>> {
    let s = s.trim();
    if s.contains(':') {
        let nums = s
            .split(':')
            .map(|p| parse_usize(p.trim()))
            .collect::<Result<Vec<usize>>>()?;
        let (start, stop, step) = match nums.as_slice() {
            [a, b] => (*a, *b, 1),
            [a, b, c] => (*a, *b, *c),
            _ => {
                return Err(QstError::config(format!(
                    "integer range '{s}' needs start:stop[:step]"
                )))
            }
        };
        if step == 0 || stop < start {
            return Err(QstError::config(format!("bad range '{s}'")));
        }
        Ok((start..=stop).step_by(step).collect())
    } else {
        s.split(',').map(|p| parse_usize(p.trim())).collect()
    }
}

fn parse_f64(s: &str) -> Result<f64> {
    let v = match s {
        "pi" => PI,
        "-pi" => -PI,
        _ => s
            .parse::<f64>()
            .map_err(|_| QstError::config(format!("'{s}' is not a number")))?,
    };
    if !v.is_finite() {
        return Err(QstError::config(format!("'{s}' is not finite")));
    }
    Ok(v)
}

fn parse_usize(s: &str) -> Result<usize> {
    s.parse()
        .map_err(|_| QstError::config(format!("'{s}' is not a non-negative integer")))
}

/// Read `key = value` pairs; blank lines and `#` comments are ignored.
pub fn parse_key_values(text: &str) -> Result<Vec<(String, String)>> {
    let mut pairs = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line.split_once('=').ok_or_else(|| {
            QstError::config(format!(
                "line {}: expected key = value, got '{raw}'",
                lineno + 1
            ))
        })?;
        pairs.push((k.trim().to_string(), v.trim().to_string()));
    }
    Ok(pairs)
}

/// One layer of optional settings (a config file or the command line).
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Overrides {
    pub mode: Option<Mode>,
    pub n_list: Option<Vec<usize>>,
    pub sigma_eta_grid: Option<Vec<f64>>,
    pub sigma_xi_grid: Option<Vec<f64>>,
    pub realizations: Option<usize>,
    pub beta2_grid: Option<Vec<f64>>,
    pub epsilon: Option<f64>,
    pub master_seed: Option<u64>,
    pub output_path: Option<PathBuf>,
    pub format: Option<OutputFormat>,
    pub base_energy: Option<f64>,
    pub bin_width: Option<f64>,
    pub p_grid: Option<Vec<f64>>,
    pub delta_phi_grid: Option<Vec<f64>>,
}

impl Overrides {
    /// Build a layer from flat keys. Both the field names (`n_list`,
    /// `master_seed`, …) and the flag spellings (`n`, `seed`, `n-range`, …)
    /// are accepted. A specific key (`sigma_eta`) beats the shared
    /// `sigma_grid` within the same layer.
    pub fn from_pairs<K: AsRef<str>, V: AsRef<str>>(pairs: &[(K, V)]) -> Result<Self> {
        let mut o = Overrides::default();
        let mut shared_sigma = None;
        for (k, v) in pairs {
            let key = k.as_ref().trim().replace('-', "_");
            let v = v.as_ref().trim();
            match key.as_str() {
                "mode" => o.mode = Some(v.parse()?),
                "n" | "n_list" | "n_range" => o.n_list = Some(parse_int_grid(v)?),
                "sigma_eta" | "sigma_eta_grid" => o.sigma_eta_grid = Some(parse_real_grid(v)?),
                "sigma_xi" | "sigma_xi_grid" => o.sigma_xi_grid = Some(parse_real_grid(v)?),
                "sigma_grid" => shared_sigma = Some(parse_real_grid(v)?),
                "realizations" => o.realizations = Some(parse_usize(v)?),
                "beta2_grid" => o.beta2_grid = Some(parse_real_grid(v)?),
                "epsilon" => o.epsilon = Some(parse_f64(v)?),
                "seed" | "master_seed" => {
                    o.master_seed = Some(
                        v.parse()
                            .map_err(|_| QstError::config(format!("bad seed '{v}'")))?,
                    )
                }
                "out" | "output_path" => o.output_path = Some(PathBuf::from(v)),
                "format" => o.format = Some(v.parse()?),
                "base_energy" => o.base_energy = Some(parse_f64(v)?),
                "bin_width" | "histogram_bin_width" => o.bin_width = Some(parse_f64(v)?),
                "p_grid" => o.p_grid = Some(parse_real_grid(v)?),
                "delta_phi_grid" => o.delta_phi_grid = Some(parse_real_grid(v)?),
                other => return Err(QstError::config(format!("unknown key '{other}'"))),
            }
        }
        if let Some(g) = shared_sigma {
            o.sigma_eta_grid.get_or_insert_with(|| g.clone());
            o.sigma_xi_grid.get_or_insert(g);
        }
        Ok(o)
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| QstError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::from_pairs(&parse_key_values(&text)?)
    }

    /// Fields set in `self` win over those in `lower`.
    pub fn over(self, lower: Overrides) -> Overrides {
        Overrides {
            mode: self.mode.or(lower.mode),
            n_list: self.n_list.or(lower.n_list),
            sigma_eta_grid: self.sigma_eta_grid.or(lower.sigma_eta_grid),
            sigma_xi_grid: self.sigma_xi_grid.or(lower.sigma_xi_grid),
            realizations: self.realizations.or(lower.realizations),
            beta2_grid: self.beta2_grid.or(lower.beta2_grid),
            epsilon: self.epsilon.or(lower.epsilon),
            master_seed: self.master_seed.or(lower.master_seed),
            output_path: self.output_path.or(lower.output_path),
            format: self.format.or(lower.format),
            base_energy: self.base_energy.or(lower.base_energy),
            bin_width: self.bin_width.or(lower.bin_width),
            p_grid: self.p_grid.or(lower.p_grid),
            delta_phi_grid: self.delta_phi_grid.or(lower.delta_phi_grid),
        }
    }
}

/// A fully resolved experiment description.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub mode: Mode,
    pub n_list: Vec<usize>,
    pub sigma_eta_grid: Vec<f64>,
    pub sigma_xi_grid: Vec<f64>,
    pub realizations: usize,
    pub beta2_grid: Vec<f64>,
    pub epsilon: f64,
    pub master_seed: u64,
    pub output_path: Option<PathBuf>,
    pub format: OutputFormat,
    pub base_energy: f64,
    pub bin_width: f64,
    pub p_grid: Vec<f64>,
    pub delta_phi_grid: Vec<f64>,
}

fn disorder_map_grid() -> Vec<f64> {
    (0..=10).map(|i| round_grid(i as f64 * 0.025)).collect()
}

impl SweepConfig {
    /// Defaults for `mode`: 1000 realizations, σ = 0.1, ε = 10⁻², N = 12 for
    /// histograms and N = 15 for disorder maps.
    pub fn defaults(mode: Mode) -> Self {
        let (n_list, sigma, beta2_grid) = match mode {
            Mode::Histogram => (vec![12], vec![DEFAULT_SIGMA], FEATURED_BETA2.to_vec()),
            Mode::SweepBeta => (
                vec![12, 18, 25, 31],
                vec![DEFAULT_SIGMA],
                default_beta2_grid(),
            ),
            Mode::SweepN => (
                (4..=80).collect(),
                vec![DEFAULT_SIGMA],
                FEATURED_BETA2.to_vec(),
            ),
            Mode::SweepDisorder => (vec![15], disorder_map_grid(), vec![0.8, 0.6, 0.4]),
            Mode::ProbWindow => (vec![12, 21], disorder_map_grid(), vec![1.0]),
            Mode::FminMap => (vec![2], vec![0.0], vec![1.0]),
        };
        SweepConfig {
            mode,
            n_list,
            sigma_eta_grid: sigma.clone(),
            sigma_xi_grid: sigma,
            realizations: crate::ensemble::DEFAULT_REALIZATIONS,
            beta2_grid,
            epsilon: DEFAULT_EPSILON,
            master_seed: DEFAULT_SEED,
            output_path: None,
            format: OutputFormat::Csv,
            base_energy: 0.0,
            bin_width: DEFAULT_BIN_WIDTH,
            p_grid: (0..=100).map(|i| round_grid(i as f64 * 0.01)).collect(),
            delta_phi_grid: (0..=100).map(|i| i as f64 * PI / 100.0).collect(),
        }
    }

    /// Apply `layer` on top of the mode defaults and validate.
    pub fn resolve(layer: Overrides) -> Result<Self> {
        let mode = layer.mode.ok_or_else(|| {
            QstError::config("no mode given (use --mode or 'mode =' in the config file)")
        })?;
        let d = Self::defaults(mode);
        let cfg = SweepConfig {
            mode,
            n_list: layer.n_list.unwrap_or(d.n_list),
            sigma_eta_grid: layer.sigma_eta_grid.unwrap_or(d.sigma_eta_grid),
            sigma_xi_grid: layer.sigma_xi_grid.unwrap_or(d.sigma_xi_grid),
            realizations: layer.realizations.unwrap_or(d.realizations),
            beta2_grid: layer.beta2_grid.unwrap_or(d.beta2_grid),
            epsilon: layer.epsilon.unwrap_or(d.epsilon),
            master_seed: layer.master_seed.unwrap_or(d.master_seed),
            output_path: layer.output_path.or(d.output_path),
            format: layer.format.unwrap_or(d.format),
            base_energy: layer.base_energy.unwrap_or(d.base_energy),
            bin_width: layer.bin_width.unwrap_or(d.bin_width),
            p_grid: layer.p_grid.unwrap_or(d.p_grid),
            delta_phi_grid: layer.delta_phi_grid.unwrap_or(d.delta_phi_grid),
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        let grids: [(&str, usize); 6] = [
            ("n_list", self.n_list.len()),
            ("sigma_eta_grid", self.sigma_eta_grid.len()),
            ("sigma_xi_grid", self.sigma_xi_grid.len()),
            ("beta2_grid", self.beta2_grid.len()),
            ("p_grid", self.p_grid.len()),
            ("delta_phi_grid", self.delta_phi_grid.len()),
        ];
        for (name, len) in grids {
            if len == 0 {
                return Err(QstError::config(format!("{name} must not be empty")));
            }
        }
        if let Some(&n) = self.n_list.iter().find(|&&n| n < 2) {
            return Err(QstError::config(format!("chain length {n} < 2")));
        }
        if let Some(s) = self
            .sigma_eta_grid
            .iter()
            .chain(&self.sigma_xi_grid)
            .find(|&&s| s < 0.0)
        {
            return Err(QstError::config(format!("negative disorder strength {s}")));
        }
        if self.realizations == 0 {
            return Err(QstError::config("realizations must be >= 1"));
        }
        if let Some(b) = self.beta2_grid.iter().find(|b| !(0.0..=1.0).contains(*b)) {
            return Err(QstError::config(format!("beta2 value {b} outside [0, 1]")));
        }
        if let Some(p) = self.p_grid.iter().find(|p| !(0.0..=1.0).contains(*p)) {
            return Err(QstError::config(format!("p value {p} outside [0, 1]")));
        }
        if let Some(phi) = self
            .delta_phi_grid
            .iter()
            .find(|phi| !(-PI..=PI).contains(*phi))
        {
            return Err(QstError::config(format!(
                "phase value {phi} outside [-pi, pi]"
            )));
        }
        if !(self.epsilon > 0.0) {
            return Err(QstError::config("epsilon must be > 0"));
        }
        if !(self.bin_width > 0.0 && self.bin_width <= 1.0) {
            return Err(QstError::config("bin_width must lie in (0, 1]"));
        }
        Ok(())
    }
}
