//! Seeded Monte Carlo sweeps over `(n, p)` grids.
//!
//! Every trial draws its own seed from `(master seed, cell index, trial
//! index)`, so rows are reproducible one by one and appending cells never
//! changes existing rows. Rows are emitted in `(cell, trial)` order whatever
//! the execution schedule.

use std::fmt;
use std::fs;
use std::path::PathBuf;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use super::verdict::{classify_trial, FreeVerdict, TVerdict, Thresholds, TrialVerdict};
use crate::spectra::CERTIFICATE_MARGIN;
use crate::words::{sample_binomial, WordError};

/// Edge probability as a function of the generator count.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PExpr {
    /// `c/n^2`
    OverSquare(f64),
    /// `c*log(n)/n^2`, natural log.
    LogOverSquare(f64),
    /// `abs:<p>`
    Absolute(f64),
}

impl PExpr {
    pub fn eval(&self, n: u32) -> f64 {
        let n = f64::from(n);
        match *self {
            PExpr::OverSquare(c) => c / (n * n),
            PExpr::LogOverSquare(c) => c * n.ln() / (n * n),
            PExpr::Absolute(p) => p,
        }
    }

    /// `p * n^2`, the constant in front of `1/n^2`.
    pub fn scaled(&self, n: u32) -> f64 {
        self.eval(n) * f64::from(n) * f64::from(n)
    }
}

impl fmt::Display for PExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PExpr::OverSquare(c) => write!(f, "{c}/n^2"),
            PExpr::LogOverSquare(c) => write!(f, "{c}*log(n)/n^2"),
            PExpr::Absolute(p) => write!(f, "abs:{p}"),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("bad p-expression {0:?}; expected `c/n^2`, `c*log(n)/n^2` or `abs:<p>`")]
pub struct PExprError(pub String);

impl FromStr for PExpr {
    type Err = PExprError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || PExprError(s.to_owned());
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let number = |t: &str| {
            t.parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(err)
        };
        if let Some(p) = compact.strip_prefix("abs:") {
            return number(p).map(PExpr::Absolute);
        }
        if let Some(head) = compact.strip_suffix("log(n)/n^2") {
            return match head {
                "" => Ok(PExpr::LogOverSquare(1.0)),
                _ => number(head.strip_suffix('*').ok_or_else(err)?).map(PExpr::LogOverSquare),
            };
        }
        if let Some(head) = compact.strip_suffix("/n^2") {
            return number(head).map(PExpr::OverSquare);
        }
        Err(err())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Cell {
    pub n: u32,
    pub p: PExpr,
    pub trials: u32,
    pub spectra: bool,
}

/// Regime constants: free below `c/n^2`, (T) above `C log n/n^2`,
/// Euler-characteristic witness above `C'/n^2`, isolated-generator witness
/// below `c' log n/n^2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegimeConstants {
    pub free_c: f64,
    pub t_c: f64,
    pub chi_c: f64,
    pub isolation_c: f64,
}

impl Default for RegimeConstants {
    fn default() -> Self {
        Self {
            free_c: 1.0 / 48.0,
            t_c: 30.0,
            chi_c: 3.0,
            isolation_c: 1.0 / 25.0,
        }
    }
}

impl RegimeConstants {
    /// Regimes whose hypotheses hold at `(n, p)`.
    pub fn regimes(&self, n: u32, p: &PExpr) -> Vec<&'static str> {
        let r = p.scaled(n);
        let log_n = f64::from(n).ln();
        let mut out = Vec::new();
        if r <= self.free_c {
            out.push("free");
        }
        if r >= self.chi_c {
            out.push("chi-witness");
        }
        if r <= self.isolation_c * log_n {
            out.push("isolation-witness");
        }
        if r >= self.t_c * log_n {
            out.push("property-t");
        }
        out
    }

    /// Smallest `n` at which both witnesses can apply at once:
    /// `C' <= c' log n`.
    pub fn middle_window_min_log_n(&self) -> f64 {
        self.chi_c / self.isolation_c
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub cells: Vec<Cell>,
    pub master_seed: u64,
    pub margin: f64,
    pub parallel: bool,
    pub timing: bool,
    pub output: Option<PathBuf>,
    pub constants: RegimeConstants,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            cells: Vec::new(),
            master_seed: 0,
            margin: CERTIFICATE_MARGIN,
            parallel: true,
            timing: false,
            output: None,
            constants: RegimeConstants::default(),
        }
    }
}

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("line {line}: expected `key = value`")]
    Syntax { line: usize },
    #[error("line {line}: unknown key {key:?}")]
    UnknownKey { line: usize, key: String },
    #[error("line {line}: bad value for {key}: {value:?}")]
    BadValue {
        line: usize,
        key: String,
        value: String,
    },
    #[error("line {line}: {source}")]
    PExpr {
        line: usize,
        #[source]
        source: PExprError,
    },
    #[error("cell n={n} p={p}: probability {value} outside [0, 1]")]
    ProbabilityOutOfRange { n: u32, p: PExpr, value: f64 },
}

impl SweepConfig {
    /// Parse the flat `key = value` format:
    ///
    /// ```text
    /// seed = 2024
    /// margin = 1e-8
    /// parallel = true
    /// timing = false
    /// output = sweep.csv
    /// # cell = <n> <p-expression> <trials> [spectra|nospectra]
    /// cell = 100 0.01/n^2 200 nospectra
    /// ```
    ///
    /// Regime constants are `free_c`, `t_c`, `chi_c` and `isolation_c`.
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let mut cfg = SweepConfig::default();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let trimmed = raw.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            let (key, value) = trimmed
                .split_once('=')
                .ok_or(ConfigError::Syntax { line })?;
            let (key, value) = (key.trim(), value.trim());
            let bad = || ConfigError::BadValue {
                line,
                key: key.to_owned(),
                value: value.to_owned(),
            };
            let float = || {
                value
                    .parse::<f64>()
                    .ok()
                    .filter(|v| v.is_finite())
                    .ok_or_else(bad)
            };
            let flag = || value.parse::<bool>().map_err(|_| bad());
            match key {
                "seed" => cfg.master_seed = value.parse().map_err(|_| bad())?,
                "margin" => cfg.margin = float()?,
                "parallel" => cfg.parallel = flag()?,
                "timing" => cfg.timing = flag()?,
                "output" => cfg.output = Some(PathBuf::from(value)),
                "free_c" => cfg.constants.free_c = float()?,
                "t_c" => cfg.constants.t_c = float()?,
                "chi_c" => cfg.constants.chi_c = float()?,
                "isolation_c" => cfg.constants.isolation_c = float()?,
                "cell" => cfg
                    .cells
                    .push(parse_cell(value, line).map_err(|e| e.unwrap_or_else(bad))?),
                _ => {
                    return Err(ConfigError::UnknownKey {
                        line,
                        key: key.to_owned(),
                    })
                }
            }
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        for cell in &self.cells {
            let value = cell.p.eval(cell.n);
            if !(0.0..=1.0).contains(&value) {
                return Err(ConfigError::ProbabilityOutOfRange {
                    n: cell.n,
                    p: cell.p,
                    value,
                });
            }
        }
        Ok(())
    }
}

fn parse_cell(value: &str, line: usize) -> Result<Cell, Option<ConfigError>> {
    let parts: Vec<&str> = value.split_whitespace().collect();
    if !(3..=4).contains(&parts.len()) {
        return Err(None);
    }
    let n: u32 = parts[0].parse().ok().filter(|&n| n >= 1).ok_or(None)?;
    let p: PExpr = parts[1]
        .parse()
        .map_err(|source| Some(ConfigError::PExpr { line, source }))?;
    let trials: u32 = parts[2].parse().map_err(|_| None)?;
    let spectra = match parts.get(3) {
        None | Some(&"spectra") => true,
        Some(&"nospectra") => false,
        Some(_) => return Err(None),
    };
    Ok(Cell {
        n,
        p,
        trials,
        spectra,
    })
}

/// Seed of one trial: a SplitMix64-style mix of the three coordinates.
pub fn trial_seed(master: u64, cell: u64, trial: u64) -> u64 {
    fn mix(mut z: u64) -> u64 {
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        z ^ (z >> 31)
    }
    const GAMMA: u64 = 0x9e37_79b9_7f4a_7c15;
    let a = mix(master.wrapping_add(GAMMA));
    let b = mix(a ^ cell.wrapping_add(GAMMA).wrapping_mul(GAMMA));
    mix(b ^ trial.wrapping_add(GAMMA.wrapping_mul(3)))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub n: u32,
    pub p: f64,
    pub seed: u64,
    pub trial: u32,
    pub t: Option<usize>,
    pub free_cert: &'static str,
    pub rank: Option<u32>,
    pub chi: Option<i64>,
    pub chi_witness: bool,
    pub isolated_count: usize,
    pub connected: bool,
    pub lambda2: Option<f64>,
    pub t_cert: &'static str,
    pub max_h_component: Option<usize>,
    pub degree_dev: Option<f64>,
    pub error: Option<String>,
    pub elapsed_ms: Option<u64>,
}

/// Column order of the sweep CSV.
pub const CSV_COLUMNS: [&str; 17] = [
    "n",
    "p",
    "seed",
    "trial",
    "t",
    "free_cert",
    "rank",
    "chi",
    "chi_witness",
    "isolated_count",
    "connected",
    "lambda2",
    "t_cert",
    "max_h_component",
    "degree_dev",
    "error",
    "elapsed_ms",
];

impl SweepRow {
    fn from_verdict(n: u32, p: f64, seed: u64, trial: u32, v: &TrialVerdict) -> Self {
        let error = match &v.t_cert {
            TVerdict::Failed { error, .. } => Some(error.clone()),
            _ => None,
        };
        Self {
            n,
            p,
            seed,
            trial,
            t: Some(v.stats.relations),
            free_cert: match v.free {
                FreeVerdict::Certified { .. } => "certified",
                FreeVerdict::Inconclusive => "inconclusive",
            },
            rank: match v.free {
                FreeVerdict::Certified { rank } => Some(rank),
                FreeVerdict::Inconclusive => None,
            },
            chi: Some(v.chi),
            chi_witness: v.not_free_witness.is_some(),
            isolated_count: v.not_t_witness.as_ref().map_or(0, |w| w.generators.len()),
            connected: v.t_cert.connected(),
            lambda2: v.t_cert.lambda2(),
            t_cert: v.t_cert.label(),
            max_h_component: Some(v.stats.max_h_component),
            degree_dev: Some(v.stats.degree_deviation),
            error,
            elapsed_ms: v.stats.elapsed_ms,
        }
    }

    fn sampling_failure(n: u32, p: f64, seed: u64, trial: u32, e: &WordError) -> Self {
        Self {
            n,
            p,
            seed,
            trial,
            t: None,
            free_cert: "error",
            rank: None,
            chi: None,
            chi_witness: false,
            isolated_count: 0,
            connected: false,
            lambda2: None,
            t_cert: "error",
            max_h_component: None,
            degree_dev: None,
            error: Some(e.to_string()),
            elapsed_ms: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CellSummary {
    pub n: u32,
    pub p_expr: String,
    pub p: f64,
    pub trials: u32,
    pub spectra: bool,
    pub regimes: Vec<&'static str>,
    pub free_certified: u32,
    pub chi_witness: u32,
    pub isolation_witness: u32,
    pub t_certified: u32,
    pub errors: u32,
    pub mean_relations: f64,
}

impl CellSummary {
    pub fn rate(&self, count: u32) -> f64 {
        if self.trials == 0 {
            0.0
        } else {
            f64::from(count) / f64::from(self.trials)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepSummary {
    pub cells: Vec<CellSummary>,
    /// `C'/c'`: the neither-free-nor-(T) window is empty while `log n` is
    /// below this.
    pub middle_window_min_log_n: f64,
}

impl fmt::Display for SweepSummary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "{:>6} {:>22} {:>12} {:>6} {:>8} {:>8} {:>8} {:>8} {:>6}  regimes",
            "n", "p", "p value", "trials", "free", "chi>0", "isolated", "T", "errors"
        )?;
        for c in &self.cells {
            writeln!(
                f,
                "{:>6} {:>22} {:>12.4e} {:>6} {:>8.3} {:>8.3} {:>8.3} {:>8} {:>6}  {}",
                c.n,
                c.p_expr,
                c.p,
                c.trials,
                c.rate(c.free_certified),
                c.rate(c.chi_witness),
                c.rate(c.isolation_witness),
                if c.spectra {
                    format!("{:.3}", c.rate(c.t_certified))
                } else {
                    "skipped".into()
                },
                c.errors,
                c.regimes.join(",")
            )?;
        }
        writeln!(
            f,
            "note: the neither-free-nor-(T) window C'/n^2 <= p <= c' log n/n^2 is empty until log n >= {:.0}; \
             the Euler-characteristic and isolated-generator witnesses are demonstrated in separate cells.",
            self.middle_window_min_log_n
        )
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepOutcome {
    pub rows: Vec<SweepRow>,
    pub csv: Vec<u8>,
    pub summary: SweepSummary,
}

#[derive(Debug, Error)]
pub enum SweepError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("writing {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("csv encoding: {0}")]
    Csv(#[from] csv::Error),
}

fn run_trial(cfg: &SweepConfig, cell_index: usize, trial: u32) -> SweepRow {
    let cell = &cfg.cells[cell_index];
    let p = cell.p.eval(cell.n);
    let seed = trial_seed(cfg.master_seed, cell_index as u64, u64::from(trial));
    let thresholds = Thresholds {
        margin: cfg.margin,
        spectra: cell.spectra,
        timing: cfg.timing,
    };
    let start = std::time::Instant::now();
    match sample_binomial(cell.n, p, seed) {
        Ok(pres) => {
            let verdict = classify_trial(&pres, &thresholds);
            let mut row = SweepRow::from_verdict(cell.n, p, seed, trial, &verdict);
            if cfg.timing {
                row.elapsed_ms = Some(start.elapsed().as_millis() as u64);
            }
            row
        }
        Err(e) => SweepRow::sampling_failure(cell.n, p, seed, trial, &e),
    }
}

/// Run every trial of every cell and encode the rows as CSV.
///
/// The CSV is a pure function of the config unless `timing` is on.
pub fn run_sweep(cfg: &SweepConfig) -> Result<SweepOutcome, SweepError> {
    cfg.validate()?;
    let jobs: Vec<(usize, u32)> = cfg
        .cells
        .iter()
        .enumerate()
        .flat_map(|(i, c)| (0..c.trials).map(move |t| (i, t)))
        .collect();
    let rows: Vec<SweepRow> = if cfg.parallel {
        jobs.par_iter()
            .map(|&(c, t)| run_trial(cfg, c, t))
            .collect()
    } else {
        jobs.iter().map(|&(c, t)| run_trial(cfg, c, t)).collect()
    };

    let mut writer = csv::WriterBuilder::new()
        .has_headers(false)
        .from_writer(Vec::new());
    writer.write_record(CSV_COLUMNS)?;
    for row in &rows {
        writer.serialize(row)?;
    }
    let csv = writer.into_inner().map_err(|e| SweepError::Io {
        path: PathBuf::from("<memory>"),
        source: e.into_error(),
    })?;

    let summary = summarize(cfg, &rows);
    Ok(SweepOutcome { rows, csv, summary })
}

/// [`run_sweep`], then write the CSV to the configured output path.
pub fn run_sweep_to_file(cfg: &SweepConfig) -> Result<SweepOutcome, SweepError> {
    let outcome = run_sweep(cfg)?;
    if let Some(path) = &cfg.output {
        fs::write(path, &outcome.csv).map_err(|source| SweepError::Io {
            path: path.clone(),
            source,
        })?;
    }
    Ok(outcome)
}

fn summarize(cfg: &SweepConfig, rows: &[SweepRow]) -> SweepSummary {
    let mut cells: Vec<CellSummary> = cfg
        .cells
        .iter()
        .map(|c| CellSummary {
            n: c.n,
            p_expr: c.p.to_string(),
            p: c.p.eval(c.n),
            trials: c.trials,
            spectra: c.spectra,
            regimes: cfg.constants.regimes(c.n, &c.p),
            free_certified: 0,
            chi_witness: 0,
            isolation_witness: 0,
            t_certified: 0,
            errors: 0,
            mean_relations: 0.0,
        })
        .collect();
    let mut offset = 0;
    for (summary, cell) in cells.iter_mut().zip(&cfg.cells) {
        let cell_rows = &rows[offset..offset + cell.trials as usize];
        offset += cell.trials as usize;
        let count =
            |f: &dyn Fn(&SweepRow) -> bool| cell_rows.iter().filter(|r| f(r)).count() as u32;
        summary.free_certified = count(&|r| r.free_cert == "certified");
        summary.chi_witness = count(&|r| r.chi_witness);
        summary.isolation_witness = count(&|r| r.isolated_count > 0);
        summary.t_certified = count(&|r| r.t_cert == "certified");
        summary.errors = count(&|r| r.error.is_some());
        if !cell_rows.is_empty() {
            summary.mean_relations =
                cell_rows.iter().filter_map(|r| r.t).sum::<usize>() as f64 / cell_rows.len() as f64;
        }
    }
    SweepSummary {
        cells,
        middle_window_min_log_n: cfg.constants.middle_window_min_log_n(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn p_expressions() {
        assert_eq!(
            "0.01/n^2".parse::<PExpr>().unwrap(),
            PExpr::OverSquare(0.01)
        );
        assert_eq!(
            "30*log(n)/n^2".parse::<PExpr>().unwrap(),
            PExpr::LogOverSquare(30.0)
        );
        assert_eq!(
            "30 * log(n) / n^2".parse::<PExpr>().unwrap(),
            PExpr::LogOverSquare(30.0)
        );
        assert_eq!(
            "log(n)/n^2".parse::<PExpr>().unwrap(),
            PExpr::LogOverSquare(1.0)
        );
        assert_eq!("abs:0.25".parse::<PExpr>().unwrap(), PExpr::Absolute(0.25));
        assert!("0.3".parse::<PExpr>().is_err());
        assert!("30log(n)/n^2".parse::<PExpr>().is_err());
        assert!("x/n^2".parse::<PExpr>().is_err());
        assert_eq!(PExpr::OverSquare(4.0).eval(200), 1e-4);
        let e = PExpr::LogOverSquare(0.02);
        assert!((e.eval(500) - 500f64.ln() / (50.0 * 250_000.0)).abs() < 1e-20);
        for s in ["0.01/n^2", "30*log(n)/n^2", "abs:0.5"] {
            assert_eq!(s.parse::<PExpr>().unwrap().to_string(), s);
        }
    }

    #[test]
    fn config_parsing() {
        let cfg = SweepConfig::parse(
            "# demo\nseed = 7\nmargin = 1e-6\nparallel = false\ncell = 10 0.5/n^2 3\ncell = 12 abs:0.001 2 nospectra\n",
        )
        .unwrap();
        assert_eq!(cfg.master_seed, 7);
        assert_eq!(cfg.margin, 1e-6);
        assert!(!cfg.parallel);
        assert_eq!(cfg.cells.len(), 2);
        assert!(cfg.cells[0].spectra);
        assert!(!cfg.cells[1].spectra);

        assert!(matches!(
            SweepConfig::parse("seed 7\n"),
            Err(ConfigError::Syntax { line: 1 })
        ));
        assert!(matches!(
            SweepConfig::parse("colour = red\n"),
            Err(ConfigError::UnknownKey { .. })
        ));
        assert!(matches!(
            SweepConfig::parse("cell = 10 q 3\n"),
            Err(ConfigError::PExpr { line: 1, .. })
        ));
        assert!(matches!(
            SweepConfig::parse("cell = 10 0.1/n^2\n"),
            Err(ConfigError::BadValue { .. })
        ));
        assert!(matches!(
            SweepConfig::parse("cell = 2 abs:1.5 1\n"),
            Err(ConfigError::ProbabilityOutOfRange { .. })
        ));
        assert!(matches!(
            SweepConfig::parse("cell = 1 8/n^2 1\n"),
            Err(ConfigError::ProbabilityOutOfRange { .. })
        ));
    }

    #[test]
    fn seeds_are_stable_and_distinct() {
        let a = trial_seed(1, 0, 0);
        assert_eq!(a, trial_seed(1, 0, 0));
        let mut all: Vec<u64> = (0..4)
            .flat_map(|c| (0..50).map(move |t| trial_seed(1, c, t)))
            .collect();
        all.sort_unstable();
        all.dedup();
        assert_eq!(all.len(), 200);
        assert_ne!(trial_seed(1, 0, 0), trial_seed(2, 0, 0));
    }

    #[test]
    fn zero_trials_give_header_only() {
        let cfg = SweepConfig::parse("cell = 10 1/n^2 0\n").unwrap();
        let out = run_sweep(&cfg).unwrap();
        assert_eq!(
            String::from_utf8(out.csv).unwrap(),
            format!("{}\n", CSV_COLUMNS.join(","))
        );
        assert_eq!(out.summary.cells[0].rate(0), 0.0);
    }

    #[test]
    fn adding_cells_keeps_existing_rows() {
        let one = SweepConfig::parse("seed = 3\ncell = 12 2/n^2 4\n").unwrap();
        let two = SweepConfig::parse("seed = 3\ncell = 12 2/n^2 4\ncell = 9 1/n^2 2\n").unwrap();
        let a = run_sweep(&one).unwrap();
        let b = run_sweep(&two).unwrap();
        assert_eq!(a.rows[..], b.rows[..4]);
    }

    #[test]
    fn regime_labels() {
        let k = RegimeConstants::default();
        assert_eq!(
            k.regimes(100, &PExpr::OverSquare(0.01)),
            vec!["free", "isolation-witness"]
        );
        assert_eq!(k.regimes(200, &PExpr::OverSquare(4.0)), vec!["chi-witness"]);
        assert_eq!(
            k.regimes(150, &PExpr::LogOverSquare(30.0)),
            vec!["chi-witness", "property-t"]
        );
        assert_eq!(k.middle_window_min_log_n(), 75.0);
    }
}
