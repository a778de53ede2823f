//! The four subcommands as library functions: each `run_*` computes a
//! result, each `cmd_*` also writes it as CSV.

use std::fmt;
use std::hint::black_box;
use std::io::Write;
use std::path::PathBuf;
use std::str::FromStr;
use std::time::{Duration, Instant};

use jacobi_mimo_core::capacity::{capacity, evaluate};
use jacobi_mimo_core::haar::{DensityCheck, DEFAULT_SAMPLES};
use jacobi_mimo_core::{
    CapacityMethod, ChannelConfig, Corner, MonteCarloEstimate, Snr, DEFAULT_NODES,
};
use rayon::prelude::*;

use crate::cache::RuleCache;
use crate::csv::{format_db, format_value, CsvWriter};
use crate::error::{Error, Result};
use crate::parallel;

/// `|z|` above this fails a validation run.
pub const Z_LIMIT: f64 = 5.0;

/// Equally spaced SNR values in dB, both ends included.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SnrGrid {
    pub start: f64,
    pub stop: f64,
    pub step: f64,
}

impl SnrGrid {
    pub fn new(start: f64, stop: f64, step: f64) -> Result<Self> {
        let grid = Self { start, stop, step };
        if !(start.is_finite() && stop.is_finite() && step.is_finite()) {
            return Err(Error::Argument(format!("SNR grid {grid} is not finite")));
        }
        if step <= 0.0 {
            return Err(Error::Argument(format!(
                "SNR step must be positive in {grid}"
            )));
        }
        if start > stop {
            return Err(Error::Argument(format!("SNR start exceeds stop in {grid}")));
        }
        Ok(grid)
    }

    pub fn single(db: f64) -> Result<Self> {
        Self::new(db, db, 1.0)
    }

    pub fn points(&self) -> Vec<f64> {
        // tolerate rounding in (stop - start) / step so the stop is kept
        let n = ((self.stop - self.start) / self.step + 1e-9).floor() as usize + 1;
        (0..n).map(|i| self.start + i as f64 * self.step).collect()
    }

    pub fn snrs(&self) -> Result<Vec<(f64, Snr)>> {
        self.points()
            .into_iter()
            .map(|db| Ok((db, Snr::from_db(db)?)))
            .collect()
    }
}

impl Default for SnrGrid {
    fn default() -> Self {
        Self {
            start: 0.0,
            stop: 30.0,
            step: 1.0,
        }
    }
}

impl fmt::Display for SnrGrid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}", self.start, self.stop, self.step)
    }
}

impl FromStr for SnrGrid {
    type Err = Error;

    /// `start:stop:step` or a single value.
    fn from_str(s: &str) -> Result<Self> {
        let num = |t: &str| {
            t.trim()
                .parse::<f64>()
                .map_err(|_| Error::Argument(format!("bad SNR value {t:?} in {s:?}")))
        };
        let parts: Vec<&str> = s.split(':').collect();
        match parts.as_slice() {
            [single] => Self::single(num(single)?),
            [start, stop, step] => Self::new(num(start)?, num(stop)?, num(step)?),
            _ => Err(Error::Argument(format!(
                "SNR grid {s:?} is not start:stop:step or a single value"
            ))),
        }
    }
}

/// Parses `mt:mr[,mt:mr...]`.
pub fn parse_pairs(s: &str) -> Result<Vec<(u32, u32)>> {
    let pairs = s
        .split(',')
        .map(|p| {
            let bad = || Error::Argument(format!("bad pair {p:?}; expected mt:mr"));
            let (mt, mr) = p.trim().split_once(':').ok_or_else(bad)?;
            let mt = mt.trim().parse().map_err(|_| bad())?;
            let mr = mr.trim().parse().map_err(|_| bad())?;
            Ok((mt, mr))
        })
        .collect::<Result<Vec<_>>>()?;
    if pairs.is_empty() {
        return Err(Error::Argument("no pairs given".into()));
    }
    Ok(pairs)
}

/// Parses a comma-separated list of method names, rejecting duplicates.
pub fn parse_methods(s: &str) -> Result<Vec<CapacityMethod>> {
    let mut methods = Vec::new();
    for name in s.split(',') {
        let method = CapacityMethod::from_name(name.trim()).ok_or_else(|| {
            Error::Argument(format!(
                "unknown method {name:?}; expected one of sum, cd, lb, lowsnr, mc"
            ))
        })?;
        if methods.contains(&method) {
            return Err(Error::Argument(format!("method {method} listed twice")));
        }
        methods.push(method);
    }
    Ok(methods)
}

/// One configuration per pair; an invalid pair is reported by name.
pub fn configs(m: u32, pairs: &[(u32, u32)]) -> Result<Vec<ChannelConfig>> {
    if pairs.is_empty() {
        return Err(Error::Argument("no pairs given".into()));
    }
    pairs
        .iter()
        .map(|&(mt, mr)| {
            ChannelConfig::new(m, mt, mr).map_err(|e| match e {
                jacobi_mimo_core::Error::InvalidConfig { reason, .. } => {
                    Error::Argument(format!("pair {mt}:{mr} is invalid for m={m}: {reason}"))
                }
                other => other.into(),
            })
        })
        .collect()
}

/// Where CSV goes: standard output or a file.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub enum Output {
    #[default]
    Stdout,
    File(PathBuf),
}

impl Output {
    pub fn write(&self, text: &str) -> Result<()> {
        match self {
            Output::Stdout => {
                let mut out = std::io::stdout().lock();
                out.write_all(text.as_bytes())
                    .and_then(|_| out.flush())
                    .map_err(|source| Error::Io {
                        path: "<stdout>".into(),
                        source,
                    })
            }
            Output::File(path) => std::fs::write(path, text).map_err(|source| Error::Io {
                path: path.clone(),
                source,
            }),
        }
    }
}

impl FromStr for Output {
    type Err = std::convert::Infallible;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        Ok(if s == "-" {
            Output::Stdout
        } else {
            Output::File(s.into())
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub m: u32,
    pub pairs: Vec<(u32, u32)>,
    pub snr_db: SnrGrid,
    pub methods: Vec<CapacityMethod>,
    pub mc_samples: usize,
    pub seed: u64,
    pub nodes: usize,
}

impl SweepSpec {
    pub fn new(m: u32, pairs: Vec<(u32, u32)>) -> Self {
        Self {
            m,
            pairs,
            snr_db: SnrGrid::default(),
            methods: vec![CapacityMethod::CdForm],
            mc_samples: DEFAULT_SAMPLES,
            seed: 0,
            nodes: DEFAULT_NODES,
        }
    }

    /// Checks the sweep settings and returns the configurations in pair order.
    pub fn validate(&self) -> Result<Vec<ChannelConfig>> {
        SnrGrid::new(self.snr_db.start, self.snr_db.stop, self.snr_db.step)?;
        if self.methods.is_empty() {
            return Err(Error::Argument("no methods given".into()));
        }
        if self.methods.contains(&CapacityMethod::MonteCarlo) && self.mc_samples < 2 {
            return Err(Error::Argument("mc needs at least 2 samples".into()));
        }
        if self.nodes == 0 {
            return Err(Error::Argument("quadrature needs at least one node".into()));
        }
        configs(self.m, &self.pairs)
    }

    /// CSV column names after `m, m_t, m_r, snr_db`.
    pub fn value_columns(&self) -> Vec<&'static str> {
        let mut cols = Vec::new();
        for method in &self.methods {
            cols.push(method.name());
            if *method == CapacityMethod::MonteCarlo {
                cols.push("mc_stderr");
            }
        }
        cols
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub config: ChannelConfig,
    pub snr_db: f64,
    /// Aligned with [`SweepSpec::value_columns`].
    pub values: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepTable {
    pub columns: Vec<&'static str>,
    pub rows: Vec<SweepRow>,
}

impl SweepTable {
    pub fn to_csv(&self) -> String {
        let mut header = vec!["m", "m_t", "m_r", "snr_db"];
        header.extend(&self.columns);
        let mut w = CsvWriter::new(&header);
        for row in &self.rows {
            let c = &row.config;
            let mut fields = vec![
                c.m().to_string(),
                c.m_t().to_string(),
                c.m_r().to_string(),
                format_db(row.snr_db),
            ];
            fields.extend(row.values.iter().map(|&v| format_value(v)));
            w.row(&fields);
        }
        w.finish()
    }
}

/// Evaluates every requested method on every `(pair, snr)` point. Points are
/// computed in parallel; rows come out pair-major, SNR-minor.
pub fn run_sweep(spec: &SweepSpec) -> Result<SweepTable> {
    let configs = spec.validate()?;
    let rules = RuleCache::new(spec.nodes);
    let snrs = spec.snr_db.snrs()?;
    let snr_values: Vec<Snr> = snrs.iter().map(|&(_, s)| s).collect();

    let mc: Vec<Vec<MonteCarloEstimate>> = if spec.methods.contains(&CapacityMethod::MonteCarlo) {
        configs
            .iter()
            .map(|c| {
                parallel::mc_capacity_grid(
                    c,
                    &snr_values,
                    spec.mc_samples,
                    spec.seed,
                    Corner::UpperLeft,
                )
            })
            .collect::<jacobi_mimo_core::Result<_>>()?
    } else {
        Vec::new()
    };

    let points: Vec<(usize, usize)> = (0..configs.len())
        .flat_map(|i| (0..snrs.len()).map(move |j| (i, j)))
        .collect();
    let rows = points
        .par_iter()
        .map(|&(i, j)| {
            let (config, (db, snr)) = (&configs[i], snrs[j]);
            let mut values = Vec::with_capacity(spec.methods.len() + 1);
            for &method in &spec.methods {
                if method == CapacityMethod::MonteCarlo {
                    values.push(mc[i][j].mean);
                    values.push(mc[i][j].std_error);
                } else {
                    values.push(evaluate(method, config, snr, &rules)?);
                }
            }
            Ok(SweepRow {
                config: *config,
                snr_db: db,
                values,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SweepTable {
        columns: spec.value_columns(),
        rows,
    })
}

pub fn cmd_sweep(spec: &SweepSpec, out: &Output) -> Result<SweepTable> {
    let table = run_sweep(spec)?;
    out.write(&table.to_csv())?;
    Ok(table)
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchSpec {
    pub m: u32,
    pub pairs: Vec<(u32, u32)>,
    pub snr_db: SnrGrid,
    pub reps: usize,
    pub nodes: usize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BenchmarkRecord {
    pub config: ChannelConfig,
    /// [`CapacityMethod::SumForm`] or [`CapacityMethod::CdForm`].
    pub method: CapacityMethod,
    /// Seconds.
    pub wall_time_per_eval: f64,
    pub n_evals: usize,
    /// Mean capacity over the SNR grid.
    pub result_checksum: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BenchComparison {
    pub sum: BenchmarkRecord,
    pub cd: BenchmarkRecord,
}

impl BenchComparison {
    /// Sum-form time over cd-form time.
    pub fn speedup(&self) -> f64 {
        self.sum.wall_time_per_eval / self.cd.wall_time_per_eval
    }

    pub fn checksum_gap(&self) -> f64 {
        (self.sum.result_checksum - self.cd.result_checksum).abs()
            / self.sum.result_checksum.abs().max(f64::MIN_POSITIVE)
    }
}

/// Checksums must agree this closely for a benchmark to count.
pub const CHECKSUM_TOLERANCE: f64 = 1e-9;

/// Times both kernel forms on one configuration, sequentially, with rules
/// already in `rules`. Repetitions alternate between the forms.
pub fn bench_config(
    config: &ChannelConfig,
    snrs: &[Snr],
    reps: usize,
    rules: &RuleCache,
) -> Result<BenchComparison> {
    if snrs.is_empty() || reps == 0 {
        return Err(Error::Argument(
            "benchmark needs at least one SNR and one repetition".into(),
        ));
    }
    let methods = [CapacityMethod::SumForm, CapacityMethod::CdForm];
    let mut checksums = [0.0; 2];
    // warm-up also fills the rule cache, keeping rule builds out of the timing
    for (k, method) in methods.iter().enumerate() {
        for &snr in snrs {
            checksums[k] += evaluate(*method, config, snr, rules)?;
        }
        checksums[k] /= snrs.len() as f64;
    }
    let mut elapsed = [Duration::ZERO; 2];
    for _ in 0..reps {
        for (k, method) in methods.iter().enumerate() {
            let start = Instant::now();
            for &snr in snrs {
                black_box(evaluate(*method, black_box(config), snr, rules)?);
            }
            elapsed[k] += start.elapsed();
        }
    }
    let n_evals = reps * snrs.len();
    let record = |k: usize| BenchmarkRecord {
        config: *config,
        method: methods[k],
        wall_time_per_eval: elapsed[k].as_secs_f64() / n_evals as f64,
        n_evals,
        result_checksum: checksums[k],
    };
    let cmp = BenchComparison {
        sum: record(0),
        cd: record(1),
    };
    if cmp.checksum_gap() > CHECKSUM_TOLERANCE {
        return Err(Error::ChecksumMismatch {
            config: config.to_string(),
            sum: cmp.sum.result_checksum,
            cd: cmp.cd.result_checksum,
            relative: cmp.checksum_gap(),
        });
    }
    Ok(cmp)
}

pub fn run_bench(spec: &BenchSpec) -> Result<Vec<BenchComparison>> {
    let configs = configs(spec.m, &spec.pairs)?;
    if spec.nodes == 0 {
        return Err(Error::Argument("quadrature needs at least one node".into()));
    }
    let rules = RuleCache::new(spec.nodes);
    let snrs: Vec<Snr> = spec.snr_db.snrs()?.into_iter().map(|(_, s)| s).collect();
    configs
        .iter()
        .map(|c| bench_config(c, &snrs, spec.reps, &rules))
        .collect()
}

pub fn bench_csv(results: &[BenchComparison]) -> String {
    let mut w = CsvWriter::new(&[
        "m",
        "m_t",
        "m_r",
        "r",
        "n_evals",
        "sum_seconds_per_eval",
        "cd_seconds_per_eval",
        "speedup",
        "sum_checksum",
        "cd_checksum",
    ]);
    for cmp in results {
        let c = &cmp.sum.config;
        w.row(&[
            c.m().to_string(),
            c.m_t().to_string(),
            c.m_r().to_string(),
            c.r().to_string(),
            cmp.sum.n_evals.to_string(),
            format_value(cmp.sum.wall_time_per_eval),
            format_value(cmp.cd.wall_time_per_eval),
            format_value(cmp.speedup()),
            format_value(cmp.sum.result_checksum),
            format_value(cmp.cd.result_checksum),
        ]);
    }
    w.finish()
}

pub fn cmd_bench(spec: &BenchSpec, out: &Output) -> Result<Vec<BenchComparison>> {
    let results = run_bench(spec)?;
    out.write(&bench_csv(&results))?;
    Ok(results)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ValidateSpec {
    pub m: u32,
    pub pairs: Vec<(u32, u32)>,
    pub snr_db: SnrGrid,
    pub samples: usize,
    pub seed: u64,
    pub nodes: usize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ValidationRow {
    pub config: ChannelConfig,
    pub snr_db: f64,
    pub analytic: f64,
    pub mc: MonteCarloEstimate,
    /// `(analytic - mean) / std_error`; zero when the estimate is exact.
    pub z: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ValidationReport {
    pub rows: Vec<ValidationRow>,
}

impl ValidationReport {
    pub fn max_abs_z(&self) -> f64 {
        self.rows.iter().map(|r| r.z.abs()).fold(0.0, f64::max)
    }

    pub fn passed(&self) -> bool {
        self.max_abs_z() <= Z_LIMIT
    }

    pub fn to_csv(&self) -> String {
        let mut w = CsvWriter::new(&[
            "m",
            "m_t",
            "m_r",
            "snr_db",
            "analytic",
            "mc_mean",
            "mc_stderr",
            "z",
        ]);
        for row in &self.rows {
            let c = &row.config;
            w.row(&[
                c.m().to_string(),
                c.m_t().to_string(),
                c.m_r().to_string(),
                format_db(row.snr_db),
                format_value(row.analytic),
                format_value(row.mc.mean),
                format_value(row.mc.std_error),
                format_value(row.z),
            ]);
        }
        w.finish()
    }
}

/// z-score of an estimate against the analytic value. An estimate with no
/// spread (for instance a full unitary channel) must match to 1e-10.
pub fn z_score(
    config: &ChannelConfig,
    snr_db: f64,
    analytic: f64,
    mc: &MonteCarloEstimate,
) -> Result<f64> {
    let diff = analytic - mc.mean;
    if mc.std_error <= 1e-12 * mc.mean.abs().max(1.0) {
        if diff.abs() <= 1e-10 * analytic.abs().max(1.0) {
            return Ok(0.0);
        }
        return Err(Error::Nonconvergent {
            config: config.to_string(),
            snr_db,
            mc: mc.mean,
            analytic,
        });
    }
    Ok(diff / mc.std_error)
}

pub fn run_validate(spec: &ValidateSpec) -> Result<ValidationReport> {
    let configs = configs(spec.m, &spec.pairs)?;
    if spec.samples < 2 {
        return Err(Error::Argument(
            "validation needs at least 2 samples".into(),
        ));
    }
    let rules = RuleCache::new(spec.nodes);
    let snrs = spec.snr_db.snrs()?;
    let snr_values: Vec<Snr> = snrs.iter().map(|&(_, s)| s).collect();
    let mut rows = Vec::with_capacity(configs.len() * snrs.len());
    for config in &configs {
        let estimates = parallel::mc_capacity_grid(
            config,
            &snr_values,
            spec.samples,
            spec.seed,
            Corner::UpperLeft,
        )?;
        for (&(db, snr), mc) in snrs.iter().zip(estimates) {
            let analytic = capacity(config, snr, &rules)?;
            let z = z_score(config, db, analytic, &mc)?;
            rows.push(ValidationRow {
                config: *config,
                snr_db: db,
                analytic,
                mc,
                z,
            });
        }
    }
    Ok(ValidationReport { rows })
}

/// Writes the report, then fails with [`Error::ValidationFailed`] if any
/// `|z|` exceeds [`Z_LIMIT`].
pub fn cmd_validate(spec: &ValidateSpec, out: &Output) -> Result<ValidationReport> {
    let report = run_validate(spec)?;
    out.write(&report.to_csv())?;
    if !report.passed() {
        return Err(Error::ValidationFailed(format!(
            "max |z| = {:.3} exceeds {Z_LIMIT}",
            report.max_abs_z()
        )));
    }
    Ok(report)
}

#[derive(Debug, Clone, PartialEq)]
pub struct DensitySpec {
    pub m: u32,
    pub pairs: Vec<(u32, u32)>,
    pub samples: usize,
    pub seed: u64,
    pub bins: usize,
    pub nodes: usize,
}

pub fn run_density(spec: &DensitySpec) -> Result<Vec<(ChannelConfig, DensityCheck)>> {
    let configs = configs(spec.m, &spec.pairs)?;
    let rules = RuleCache::new(spec.nodes);
    configs
        .into_iter()
        .map(|c| {
            let check =
                parallel::eigenvalue_density_check(&c, spec.samples, spec.seed, spec.bins, &rules)?;
            Ok((c, check))
        })
        .collect()
}

pub fn density_csv(checks: &[(ChannelConfig, DensityCheck)]) -> String {
    let mut w = CsvWriter::new(&[
        "m",
        "m_t",
        "m_r",
        "bin_lo",
        "bin_hi",
        "count",
        "empirical",
        "expected",
        "sigma",
        "z",
        "sparse",
    ]);
    for (c, check) in checks {
        for (j, bin) in check.bins.iter().enumerate() {
            w.row(&[
                c.m().to_string(),
                c.m_t().to_string(),
                c.m_r().to_string(),
                format_value(bin.lo),
                format_value(bin.hi),
                bin.count.to_string(),
                format_value(bin.empirical),
                format_value(bin.expected),
                format_value(bin.sigma),
                format_value(bin.z_score()),
                check.sparse_bins.contains(&j).to_string(),
            ]);
        }
    }
    w.finish()
}

pub fn cmd_density(spec: &DensitySpec, out: &Output) -> Result<Vec<(ChannelConfig, DensityCheck)>> {
    let checks = run_density(spec)?;
    out.write(&density_csv(&checks))?;
    Ok(checks)
}
