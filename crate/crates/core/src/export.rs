//! File formats produced and consumed by the command line interface.
//!
//! Writers are deterministic: the same in-memory value always produces the
//! same bytes (wall-clock fields inside campaign summaries are the one
//! source of variation between campaign executions).

use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::firefly::{GenerationTrace, RunResult};
use crate::harness::{CampaignResult, CampaignSpec, SweepPointResult};
use crate::oracle::GridSpec;
use crate::problem::{Candidate, FeasibilityReport, Scenario};

/// Ties an error to the file it occurred on, so CLI users see which of
/// their paths failed.
fn in_file<T>(path: &Path, outcome: Result<T>) -> Result<T> {
    outcome.map_err(|e| Error::File {
        path: path.display().to_string(),
        source: Box::new(e),
    })
}

pub fn read_json<T: DeserializeOwned>(path: impl AsRef<Path>) -> Result<T> {
    let path = path.as_ref();
    in_file(
        path,
        (|| {
            let file = File::open(path)?;
            Ok(serde_json::from_reader(BufReader::new(file))?)
        })(),
    )
}

pub fn write_json<T: Serialize>(path: impl AsRef<Path>, value: &T) -> Result<()> {
    let path = path.as_ref();
    in_file(
        path,
        (|| {
            let file = File::create(path)?;
            let mut out = BufWriter::new(file);
            serde_json::to_writer_pretty(&mut out, value)?;
            out.write_all(b"\n")?;
            out.flush()?;
            Ok(())
        })(),
    )
}

/// On-disk form of a search result: everything except the trace, which
/// lives in its own CSV.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunResultFile {
    pub best: Candidate,
    pub best_min_gain: f64,
    pub feasibility: FeasibilityReport,
    pub evaluations: u64,
}

impl From<&RunResult> for RunResultFile {
    fn from(r: &RunResult) -> Self {
        RunResultFile {
            best: r.best.clone(),
            best_min_gain: r.best_min_gain,
            feasibility: r.feasibility.clone(),
            evaluations: r.evaluations,
        }
    }
}

pub fn write_run_result(path: impl AsRef<Path>, result: &RunResult) -> Result<()> {
    write_json(path, &RunResultFile::from(result))
}

pub fn read_run_result(path: impl AsRef<Path>) -> Result<RunResultFile> {
    read_json(path)
}

pub fn write_trace_csv(path: impl AsRef<Path>, trace: &[GenerationTrace]) -> Result<()> {
    let path = path.as_ref();
    in_file(
        path,
        (|| {
            let mut w = csv::Writer::from_path(path)?;
            for row in trace {
                w.serialize(row)?;
            }
            w.flush()?;
            Ok(())
        })(),
    )
}

#[derive(Serialize)]
struct PatternRow {
    angle_deg: f64,
    gain: f64,
}

pub fn write_pattern_csv(path: impl AsRef<Path>, rows: &[(f64, f64)]) -> Result<()> {
    let path = path.as_ref();
    in_file(
        path,
        (|| {
            let mut w = csv::Writer::from_path(path)?;
            for &(angle_deg, gain) in rows {
                w.serialize(PatternRow { angle_deg, gain })?;
            }
            w.flush()?;
            Ok(())
        })(),
    )
}

/// Frozen output of the exhaustive grid search, for regression baselines.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OracleFixture {
    pub scenario: Scenario,
    pub grid: GridSpec,
    pub best: Candidate,
    pub achieved_min_gain: f64,
}

pub fn write_oracle_fixture(path: impl AsRef<Path>, fixture: &OracleFixture) -> Result<()> {
    write_json(path, fixture)
}

pub fn read_oracle_fixture(path: impl AsRef<Path>) -> Result<OracleFixture> {
    read_json(path)
}

#[derive(Serialize)]
struct GainVsNaRow {
    na: usize,
    i0: f64,
    mean_gain: Option<f64>,
}

#[derive(Serialize)]
struct GainVsQRow {
    q: usize,
    i0: f64,
    mean_gain: Option<f64>,
}

#[derive(Serialize)]
struct GainVsOmegaRow {
    omega: usize,
    na: usize,
    i0: f64,
    mean_gain: Option<f64>,
}

#[derive(Serialize)]
struct GainVsRRow {
    r: usize,
    omega: usize,
    i0: f64,
    mean_gain: Option<f64>,
}

#[derive(Serialize)]
struct CampaignSummaryFile<'a> {
    spec: &'a CampaignSpec,
    points: &'a [SweepPointResult],
}

/// Strongest run across all points, feasible runs first.
fn campaign_best(result: &CampaignResult) -> Option<&crate::harness::PointBest> {
    result
        .points
        .iter()
        .filter_map(|p| p.best.as_ref())
        .max_by(|a, b| {
            (a.feasible, a.best_min_gain)
                .partial_cmp(&(b.feasible, b.best_min_gain))
                .expect("gains are finite")
        })
}

/// Writes the campaign file set into `dir` (created if missing): the four
/// sweep projections, `summary.json`, and, when any run succeeded,
/// `pattern.csv` with the campaign-best candidate's response at one-degree
/// resolution.
pub fn write_campaign_outputs(
    dir: impl AsRef<Path>,
    spec: &CampaignSpec,
    result: &CampaignResult,
) -> Result<()> {
    let dir = dir.as_ref();
    in_file(dir, std::fs::create_dir_all(dir).map_err(Into::into))?;

    let csv_writer = |name: &str| {
        let path = dir.join(name);
        in_file(&path, csv::Writer::from_path(&path).map_err(Into::into))
    };
    let mut na = csv_writer("gain_vs_na.csv")?;
    let mut q = csv_writer("gain_vs_q.csv")?;
    let mut omega = csv_writer("gain_vs_omega.csv")?;
    let mut r = csv_writer("gain_vs_r.csv")?;
    for p in &result.points {
        let s = &p.settings;
        na.serialize(GainVsNaRow {
            na: s.n_antennas,
            i0: s.interference_threshold,
            mean_gain: p.overall_mean_gain,
        })?;
        q.serialize(GainVsQRow {
            q: s.q_unintended,
            i0: s.interference_threshold,
            mean_gain: p.overall_mean_gain,
        })?;
        omega.serialize(GainVsOmegaRow {
            omega: s.population,
            na: s.n_antennas,
            i0: s.interference_threshold,
            mean_gain: p.overall_mean_gain,
        })?;
        r.serialize(GainVsRRow {
            r: s.max_generations,
            omega: s.population,
            i0: s.interference_threshold,
            mean_gain: p.overall_mean_gain,
        })?;
    }
    na.flush()?;
    q.flush()?;
    omega.flush()?;
    r.flush()?;

    write_json(
        dir.join("summary.json"),
        &CampaignSummaryFile {
            spec,
            points: &result.points,
        },
    )?;

    if let Some(best) = campaign_best(result) {
        let grid: Vec<f64> = (0..=180).map(f64::from).collect();
        let rows = crate::array::pattern_sweep(&best.candidate.w, &best.candidate.d, &grid)?;
        write_pattern_csv(dir.join("pattern.csv"), &rows)?;
    }
    Ok(())
}
