//! Monte Carlo campaigns over random direction distributions.
//!
//! A campaign fixes an array geometry, draws `n_distributions` direction
//! sets from an angular grid (or takes one fixed set), runs the firefly
//! search `runs_per_distribution` times per set with derived seeds, and
//! aggregates worst-case-gain statistics. Optional sweep axes (antenna
//! count, unintended-direction count, interference threshold, population,
//! generation budget) expand into a cross product of campaign points, all
//! sharing the same per-distribution direction draws so that points are
//! directly comparable.
//!
//! Runs execute in parallel; the `MAA_WORKERS` environment variable caps
//! the worker count. Results are aggregated in job order, so a campaign's
//! output is independent of scheduling. A failed run is recorded with its
//! error and excluded from the means instead of aborting the campaign.

use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::firefly::{self, FaConfig};
use crate::problem::{Candidate, Scenario};

/// Evenly spaced candidate arrival angles, inclusive of both ends.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AngleGrid {
    pub start_deg: f64,
    pub stop_deg: f64,
    pub step_deg: f64,
}

impl Default for AngleGrid {
    fn default() -> Self {
        AngleGrid {
            start_deg: 0.0,
            stop_deg: 180.0,
            step_deg: 5.0,
        }
    }
}

impl AngleGrid {
    pub fn validate(&self) -> Result<()> {
        let in_range = |a: f64| a.is_finite() && (0.0..=180.0).contains(&a);
        if !in_range(self.start_deg) || !in_range(self.stop_deg) {
            return Err(Error::invalid(format!(
                "angle grid [{}, {}] outside [0, 180] degrees",
                self.start_deg, self.stop_deg
            )));
        }
        if self.start_deg > self.stop_deg {
            return Err(Error::invalid("angle grid start exceeds stop"));
        }
        if !self.step_deg.is_finite() || self.step_deg <= 0.0 {
            return Err(Error::invalid(format!(
                "angle grid step must be positive, got {}",
                self.step_deg
            )));
        }
        Ok(())
    }

    /// Grid points `start, start + step, ...` up to and including `stop`
    /// (the final point is clamped onto `stop` when it lands within
    /// rounding dust).
    pub fn angles(&self) -> Vec<f64> {
        let mut v = Vec::new();
        let mut i = 0usize;
        loop {
            let a = self.start_deg + i as f64 * self.step_deg;
            if a > self.stop_deg + self.step_deg * 1e-9 {
                break;
            }
            v.push(a.min(self.stop_deg));
            i += 1;
        }
        v
    }
}

/// Scenario fields shared by every campaign point; directions are filled in
/// per distribution.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScenarioBase {
    pub n_antennas: usize,
    pub segment_length_wl: f64,
    pub min_spacing_wl: f64,
    #[serde(default = "default_wavelength")]
    pub wavelength: f64,
    pub interference_threshold: f64,
}

fn default_wavelength() -> f64 {
    1.0
}

/// One sweep axis: a scenario or search parameter and the values it takes.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "parameter", content = "values", rename_all = "snake_case")]
pub enum SweepAxis {
    NAntennas(Vec<usize>),
    QUnintended(Vec<usize>),
    InterferenceThreshold(Vec<f64>),
    Population(Vec<usize>),
    MaxGenerations(Vec<usize>),
}

impl SweepAxis {
    fn name(&self) -> &'static str {
        match self {
            SweepAxis::NAntennas(_) => "n_antennas",
            SweepAxis::QUnintended(_) => "q_unintended",
            SweepAxis::InterferenceThreshold(_) => "interference_threshold",
            SweepAxis::Population(_) => "population",
            SweepAxis::MaxGenerations(_) => "max_generations",
        }
    }

    fn len(&self) -> usize {
        match self {
            SweepAxis::NAntennas(v) => v.len(),
            SweepAxis::QUnintended(v) => v.len(),
            SweepAxis::InterferenceThreshold(v) => v.len(),
            SweepAxis::Population(v) => v.len(),
            SweepAxis::MaxGenerations(v) => v.len(),
        }
    }
}

fn default_n_distributions() -> usize {
    50
}

fn default_runs_per_distribution() -> usize {
    50
}

/// Full campaign description, deserializable from JSON.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CampaignSpec {
    pub base_scenario: ScenarioBase,
    #[serde(default = "default_n_distributions")]
    pub n_distributions: usize,
    #[serde(default = "default_runs_per_distribution")]
    pub runs_per_distribution: usize,
    /// Intended directions drawn per distribution. Required unless fixed
    /// directions are given.
    #[serde(default)]
    pub t_intended: Option<usize>,
    /// Unintended directions drawn per distribution. Required unless fixed
    /// directions are given.
    #[serde(default)]
    pub q_unintended: Option<usize>,
    #[serde(default)]
    pub angle_grid: AngleGrid,
    /// Pins the intended directions instead of sampling them; requires
    /// `n_distributions = 1`.
    #[serde(default)]
    pub fixed_intended_deg: Option<Vec<f64>>,
    /// Pins the unintended directions; only valid together with
    /// `fixed_intended_deg`.
    #[serde(default)]
    pub fixed_unintended_deg: Option<Vec<f64>>,
    /// Search parameters. `rng_seed` is ignored: per-run seeds derive from
    /// `master_seed`, the distribution index, and the run index.
    #[serde(default)]
    pub fa_config: FaConfig,
    #[serde(default)]
    pub sweep: Vec<SweepAxis>,
    #[serde(default)]
    pub master_seed: u64,
}

impl CampaignSpec {
    pub fn validate(&self) -> Result<()> {
        if self.n_distributions == 0 {
            return Err(Error::invalid("n_distributions must be at least 1"));
        }
        if self.runs_per_distribution == 0 {
            return Err(Error::invalid("runs_per_distribution must be at least 1"));
        }
        self.angle_grid.validate()?;
        self.fa_config.validate()?;

        if let Some(intended) = &self.fixed_intended_deg {
            if self.n_distributions != 1 {
                return Err(Error::invalid(
                    "fixed directions require n_distributions = 1",
                ));
            }
            if let Some(t) = self.t_intended {
                if t != intended.len() {
                    return Err(Error::invalid(format!(
                        "t_intended = {t} conflicts with {} fixed intended directions",
                        intended.len()
                    )));
                }
            }
            let q_fixed = self.fixed_unintended_deg.as_ref().map_or(0, Vec::len);
            if let Some(q) = self.q_unintended {
                if q != q_fixed {
                    return Err(Error::invalid(format!(
                        "q_unintended = {q} conflicts with {q_fixed} fixed unintended directions"
                    )));
                }
            }
            if self
                .sweep
                .iter()
                .any(|a| matches!(a, SweepAxis::QUnintended(_)))
            {
                return Err(Error::invalid(
                    "cannot sweep q_unintended with fixed directions",
                ));
            }
        } else {
            if self.fixed_unintended_deg.is_some() {
                return Err(Error::invalid(
                    "fixed_unintended_deg requires fixed_intended_deg",
                ));
            }
            let t = self
                .t_intended
                .ok_or_else(|| Error::invalid("t_intended is required when sampling directions"))?;
            if t == 0 {
                return Err(Error::invalid("t_intended must be at least 1"));
            }
            if self.q_unintended.is_none() {
                return Err(Error::invalid(
                    "q_unintended is required when sampling directions",
                ));
            }
        }

        let mut seen = Vec::new();
        for axis in &self.sweep {
            if axis.len() == 0 {
                return Err(Error::invalid(format!(
                    "sweep axis {} has no values",
                    axis.name()
                )));
            }
            if seen.contains(&axis.name()) {
                return Err(Error::invalid(format!(
                    "duplicate sweep axis {}",
                    axis.name()
                )));
            }
            seen.push(axis.name());
        }
        Ok(())
    }
}

/// Settings of one campaign point after sweep overrides.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PointSettings {
    pub n_antennas: usize,
    pub q_unintended: usize,
    pub interference_threshold: f64,
    pub population: usize,
    pub max_generations: usize,
}

/// Outcome of a single search run inside a campaign.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub distribution_index: usize,
    pub run_index: usize,
    pub seed: u64,
    /// Worst-case intended gain of the run's best candidate; absent when
    /// the run failed.
    pub best_min_gain: Option<f64>,
    pub feasible: Option<bool>,
    pub evaluations: Option<u64>,
    pub wall_clock_secs: f64,
    pub error: Option<String>,
}

/// Gain statistics for one direction distribution, successful runs only.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DistributionSummary {
    pub distribution_index: usize,
    pub intended_deg: Vec<f64>,
    pub unintended_deg: Vec<f64>,
    pub mean_best_min_gain: Option<f64>,
    pub min_best_min_gain: Option<f64>,
    pub max_best_min_gain: Option<f64>,
    pub feasibility_rate: Option<f64>,
    pub failed_runs: usize,
}

/// The strongest run of a campaign point.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PointBest {
    pub distribution_index: usize,
    pub run_index: usize,
    pub best_min_gain: f64,
    pub feasible: bool,
    pub candidate: Candidate,
}

/// Aggregated results for one point of the sweep cross product.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepPointResult {
    pub settings: PointSettings,
    pub distributions: Vec<DistributionSummary>,
    pub runs: Vec<RunRecord>,
    /// Mean over every successful run of the point.
    pub overall_mean_gain: Option<f64>,
    /// Mean of the per-distribution means, weighting distributions equally.
    pub mean_of_distribution_means: Option<f64>,
    pub feasibility_rate: Option<f64>,
    pub mean_wall_clock_secs: f64,
    pub failed_runs: usize,
    /// Feasible runs outrank infeasible ones; ties in feasibility resolve
    /// by gain, then by job order.
    pub best: Option<PointBest>,
}

/// All campaign output, one entry per sweep point in cross-product order.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CampaignResult {
    pub points: Vec<SweepPointResult>,
}

fn splitmix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

const RUN_STREAM: u64 = 0x52;
const DIRECTION_STREAM: u64 = 0xD1;

/// Stable per-run seed: a hash chain over the master seed, a stream tag,
/// and two indices.
fn derive_seed(master: u64, stream: u64, a: u64, b: u64) -> u64 {
    splitmix(splitmix(splitmix(master ^ stream).wrapping_add(a)).wrapping_add(b))
}

/// Draws `t` intended plus `q` unintended directions from `grid_deg`
/// without replacement, so the two sets are disjoint. Both come back
/// sorted ascending.
pub fn sample_directions(
    grid_deg: &[f64],
    t: usize,
    q: usize,
    rng: &mut impl rand::Rng,
) -> Result<(Vec<f64>, Vec<f64>)> {
    if t == 0 {
        return Err(Error::invalid("at least one intended direction required"));
    }
    if t + q > grid_deg.len() {
        return Err(Error::invalid(format!(
            "cannot draw {} + {} directions from a {}-point grid",
            t,
            q,
            grid_deg.len()
        )));
    }
    for &a in grid_deg {
        if !a.is_finite() || !(0.0..=180.0).contains(&a) {
            return Err(Error::invalid(format!(
                "grid angle {a} outside [0, 180] degrees"
            )));
        }
    }
    let mut sorted = grid_deg.to_vec();
    sorted.sort_by(f64::total_cmp);
    if sorted.windows(2).any(|p| p[0] == p[1]) {
        return Err(Error::invalid("angle grid contains duplicate values"));
    }

    let picks = rand::seq::index::sample(rng, grid_deg.len(), t + q);
    let mut intended: Vec<f64> = picks.iter().take(t).map(|i| grid_deg[i]).collect();
    let mut unintended: Vec<f64> = picks.iter().skip(t).map(|i| grid_deg[i]).collect();
    intended.sort_by(f64::total_cmp);
    unintended.sort_by(f64::total_cmp);
    Ok((intended, unintended))
}

fn expand_points(spec: &CampaignSpec) -> Vec<PointSettings> {
    let q_default = spec
        .fixed_unintended_deg
        .as_ref()
        .map(Vec::len)
        .or(spec.q_unintended)
        .unwrap_or(0);
    let base = PointSettings {
        n_antennas: spec.base_scenario.n_antennas,
        q_unintended: q_default,
        interference_threshold: spec.base_scenario.interference_threshold,
        population: spec.fa_config.population,
        max_generations: spec.fa_config.max_generations,
    };
    let mut points = vec![base];
    for axis in &spec.sweep {
        let mut next = Vec::with_capacity(points.len() * axis.len());
        for p in &points {
            match axis {
                SweepAxis::NAntennas(vs) => {
                    next.extend(vs.iter().map(|&v| PointSettings {
                        n_antennas: v,
                        ..*p
                    }));
                }
                SweepAxis::QUnintended(vs) => {
                    next.extend(vs.iter().map(|&v| PointSettings {
                        q_unintended: v,
                        ..*p
                    }));
                }
                SweepAxis::InterferenceThreshold(vs) => {
                    next.extend(vs.iter().map(|&v| PointSettings {
                        interference_threshold: v,
                        ..*p
                    }));
                }
                SweepAxis::Population(vs) => {
                    next.extend(vs.iter().map(|&v| PointSettings {
                        population: v,
                        ..*p
                    }));
                }
                SweepAxis::MaxGenerations(vs) => {
                    next.extend(vs.iter().map(|&v| PointSettings {
                        max_generations: v,
                        ..*p
                    }));
                }
            }
        }
        points = next;
    }
    points
}

/// Directions for one distribution index. Sampling depends only on the
/// master seed and the distribution index, never on sweep settings, so
/// every sweep point sees the same draw for a given index.
fn directions_for(
    spec: &CampaignSpec,
    settings: &PointSettings,
    dist: usize,
) -> Result<(Vec<f64>, Vec<f64>)> {
    if let Some(intended) = &spec.fixed_intended_deg {
        let unintended = spec.fixed_unintended_deg.clone().unwrap_or_default();
        return Ok((intended.clone(), unintended));
    }
    let t = spec.t_intended.expect("validated");
    let grid = spec.angle_grid.angles();
    let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(
        spec.master_seed,
        DIRECTION_STREAM,
        dist as u64,
        0,
    ));
    sample_directions(&grid, t, settings.q_unintended, &mut rng)
}

struct Job {
    dist: usize,
    run: usize,
    seed: u64,
    scenario: Scenario,
    config: FaConfig,
}

struct JobOutput {
    record: RunRecord,
    candidate: Option<(Candidate, f64, bool)>,
}

fn execute(job: &Job) -> JobOutput {
    let started = Instant::now();
    match firefly::run(&job.scenario, &job.config) {
        Ok(result) => JobOutput {
            record: RunRecord {
                distribution_index: job.dist,
                run_index: job.run,
                seed: job.seed,
                best_min_gain: Some(result.best_min_gain),
                feasible: Some(result.feasibility.feasible),
                evaluations: Some(result.evaluations),
                wall_clock_secs: started.elapsed().as_secs_f64(),
                error: None,
            },
            candidate: Some((
                result.best,
                result.best_min_gain,
                result.feasibility.feasible,
            )),
        },
        Err(e) => JobOutput {
            record: RunRecord {
                distribution_index: job.dist,
                run_index: job.run,
                seed: job.seed,
                best_min_gain: None,
                feasible: None,
                evaluations: None,
                wall_clock_secs: started.elapsed().as_secs_f64(),
                error: Some(e.to_string()),
            },
            candidate: None,
        },
    }
}

fn mean(values: impl Iterator<Item = f64>) -> Option<f64> {
    let mut sum = 0.0;
    let mut count = 0usize;
    for v in values {
        sum += v;
        count += 1;
    }
    (count > 0).then(|| sum / count as f64)
}

fn summarize_point(
    settings: PointSettings,
    directions: &[(Vec<f64>, Vec<f64>)],
    outputs: Vec<JobOutput>,
    runs_per_distribution: usize,
) -> SweepPointResult {
    let mut best: Option<PointBest> = None;
    for output in &outputs {
        if let Some((candidate, gain, feasible)) = &output.candidate {
            let wins = match &best {
                None => true,
                Some(b) => (*feasible, *gain) > (b.feasible, b.best_min_gain),
            };
            if wins {
                best = Some(PointBest {
                    distribution_index: output.record.distribution_index,
                    run_index: output.record.run_index,
                    best_min_gain: *gain,
                    feasible: *feasible,
                    candidate: candidate.clone(),
                });
            }
        }
    }

    let runs: Vec<RunRecord> = outputs.into_iter().map(|o| o.record).collect();
    let distributions: Vec<DistributionSummary> = directions
        .iter()
        .enumerate()
        .map(|(dist, (intended, unintended))| {
            let slice = &runs[dist * runs_per_distribution..(dist + 1) * runs_per_distribution];
            let gains = || slice.iter().filter_map(|r| r.best_min_gain);
            let successes = gains().count();
            DistributionSummary {
                distribution_index: dist,
                intended_deg: intended.clone(),
                unintended_deg: unintended.clone(),
                mean_best_min_gain: mean(gains()),
                min_best_min_gain: gains().min_by(f64::total_cmp),
                max_best_min_gain: gains().max_by(f64::total_cmp),
                feasibility_rate: (successes > 0).then(|| {
                    slice.iter().filter(|r| r.feasible == Some(true)).count() as f64
                        / successes as f64
                }),
                failed_runs: slice.iter().filter(|r| r.error.is_some()).count(),
            }
        })
        .collect();

    let successes = runs.iter().filter(|r| r.best_min_gain.is_some()).count();
    SweepPointResult {
        settings,
        overall_mean_gain: mean(runs.iter().filter_map(|r| r.best_min_gain)),
        mean_of_distribution_means: mean(distributions.iter().filter_map(|d| d.mean_best_min_gain)),
        feasibility_rate: (successes > 0).then(|| {
            runs.iter().filter(|r| r.feasible == Some(true)).count() as f64 / successes as f64
        }),
        mean_wall_clock_secs: mean(runs.iter().map(|r| r.wall_clock_secs)).unwrap_or(0.0),
        failed_runs: runs.iter().filter(|r| r.error.is_some()).count(),
        distributions,
        runs,
        best,
    }
}

pub(crate) fn parse_workers(raw: Option<&str>) -> Result<Option<usize>> {
    match raw {
        None => Ok(None),
        Some(s) => {
            let n: usize = s.trim().parse().map_err(|_| {
                Error::invalid(format!("MAA_WORKERS must be a positive integer, got {s:?}"))
            })?;
            if n == 0 {
                return Err(Error::invalid("MAA_WORKERS must be at least 1"));
            }
            Ok(Some(n))
        }
    }
}

/// Runs the full campaign: every sweep point, every distribution, every
/// seed. Deterministic apart from wall-clock fields.
pub fn run_campaign(spec: &CampaignSpec) -> Result<CampaignResult> {
    spec.validate()?;
    let points = expand_points(spec);

    let mut jobs: Vec<Job> = Vec::new();
    let mut point_directions: Vec<Vec<(Vec<f64>, Vec<f64>)>> = Vec::with_capacity(points.len());
    for settings in &points {
        let mut directions = Vec::with_capacity(spec.n_distributions);
        for dist in 0..spec.n_distributions {
            let (intended, unintended) = directions_for(spec, settings, dist)?;
            let scenario = Scenario {
                n_antennas: settings.n_antennas,
                segment_length_wl: spec.base_scenario.segment_length_wl,
                min_spacing_wl: spec.base_scenario.min_spacing_wl,
                wavelength: spec.base_scenario.wavelength,
                intended_deg: intended.clone(),
                unintended_deg: unintended.clone(),
                interference_threshold: settings.interference_threshold,
            };
            scenario.validate()?;
            for run in 0..spec.runs_per_distribution {
                let seed = derive_seed(spec.master_seed, RUN_STREAM, dist as u64, run as u64);
                let config = FaConfig {
                    population: settings.population,
                    max_generations: settings.max_generations,
                    rng_seed: seed,
                    ..spec.fa_config.clone()
                };
                config.validate()?;
                jobs.push(Job {
                    dist,
                    run,
                    seed,
                    scenario: scenario.clone(),
                    config,
                });
            }
            directions.push((intended, unintended));
        }
        point_directions.push(directions);
    }

    let workers = parse_workers(std::env::var("MAA_WORKERS").ok().as_deref())?;
    let run_all = || jobs.par_iter().map(execute).collect::<Vec<JobOutput>>();
    let mut outputs = match workers {
        Some(cap) => rayon::ThreadPoolBuilder::new()
            .num_threads(cap)
            .build()
            .map_err(|e| Error::invalid(format!("worker pool: {e}")))?
            .install(run_all),
        None => run_all(),
    };

    let per_point = spec.n_distributions * spec.runs_per_distribution;
    let mut result = CampaignResult {
        points: Vec::with_capacity(points.len()),
    };
    for (settings, directions) in points.iter().zip(&point_directions).rev() {
        let tail = outputs.split_off(outputs.len() - per_point);
        result.points.push(summarize_point(
            *settings,
            directions,
            tail,
            spec.runs_per_distribution,
        ));
    }
    result.points.reverse();
    Ok(result)
}
