//! The ratio sweep: parallel within a point, rows emitted in ratio order.

use std::io::Write;

use rayon::prelude::*;
use splitlp_core::experiment::{measure, ratio_points, summarize, sweep_config, ExperimentError, HeadPolicy, Ratio, SweepPoint};

pub const CSV_HEADER: [&str; 6] = ["ratio", "mean_min_split", "median_min_split", "samples", "num_vars", "seed"];

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SweepConfig {
    pub num_vars: u32,
    pub from: Ratio,
    pub to: Ratio,
    pub step: Ratio,
    pub per_point: usize,
    pub seed: u64,
    pub head_policy: HeadPolicy,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig {
            num_vars: 20,
            from: Ratio::new(2, 1).unwrap(),
            to: Ratio::new(6, 1).unwrap(),
            step: Ratio::new(1, 4).unwrap(),
            per_point: 100,
            seed: 1,
            head_policy: HeadPolicy::NonEmpty,
        }
    }
}

/// One point; programs are measured in parallel and collected in index order.
pub fn sweep_point(cfg: &SweepConfig, ratio_index: usize, ratio: Ratio) -> Result<SweepPoint, ExperimentError> {
    if cfg.per_point == 0 {
        return Err(ExperimentError::InvalidRange("at least one program per point".into()));
    }
    let sizes = (0..cfg.per_point)
        .into_par_iter()
        .map(|i| measure(&sweep_config(cfg.num_vars, ratio, cfg.seed, ratio_index, i, cfg.head_policy), i))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(summarize(ratio, &sizes))
}

/// Runs every point in order, handing each to `emit` as soon as it is done.
pub fn run_sweep(
    cfg: &SweepConfig,
    mut emit: impl FnMut(&SweepPoint) -> std::io::Result<()>,
) -> Result<Vec<SweepPoint>, SweepError> {
    let mut out = Vec::new();
    for (i, ratio) in ratio_points(cfg.from, cfg.to, cfg.step)?.into_iter().enumerate() {
        let point = sweep_point(cfg, i, ratio)?;
        emit(&point)?;
        out.push(point);
    }
    Ok(out)
}

#[derive(Debug, thiserror::Error)]
pub enum SweepError {
    #[error(transparent)]
    Experiment(#[from] ExperimentError),
    #[error("writing results: {0}")]
    Io(#[from] std::io::Error),
    #[error("writing results: {0}")]
    Csv(#[from] csv::Error),
}

pub fn csv_row(cfg: &SweepConfig, p: &SweepPoint) -> [String; 6] {
    [
        p.ratio.to_string(),
        format!("{:.2}", p.mean_min_split_size),
        format!("{:.1}", p.median_min_split_size),
        p.samples.to_string(),
        cfg.num_vars.to_string(),
        cfg.seed.to_string(),
    ]
}

/// Runs the sweep and writes the CSV to `w`, flushing after every row.
pub fn write_sweep_csv<W: Write>(cfg: &SweepConfig, w: W) -> Result<Vec<SweepPoint>, SweepError> {
    let mut csv = csv::Writer::from_writer(w);
    csv.write_record(CSV_HEADER)?;
    csv.flush()?;
    run_sweep(cfg, |p| {
        csv.write_record(csv_row(cfg, p)).map_err(std::io::Error::other)?;
        csv.flush()
    })
}

/// What a sweep report states about how its programs were made.
pub fn assumptions(cfg: &SweepConfig) -> Vec<String> {
    vec![
        format!("head policy: {}", cfg.head_policy),
        format!("{} variables, 3 distinct variables per rule, duplicate rules allowed", cfg.num_vars),
        "no negation; rule count is round(ratio * variables), halves rounded up".into(),
        format!("ratios {} to {} step {}, {} programs per point, seed {}", cfg.from, cfg.to, cfg.step, cfg.per_point, cfg.seed),
        "program seed: mix64(mix64(seed ^ mix64(ratio_index)) ^ program_index), mix64 = SplitMix64".into(),
    ]
}
