//! Firefly search over candidate weight/position pairs.
//!
//! A swarm of `population` candidates is scored by penalized brightness.
//! Each generation runs the classic double loop: every firefly `j` compares
//! itself against every firefly `k` and, when `k` is brighter, moves toward
//! it with attractiveness `beta0 * exp(-gamma * r^2)` (computed separately
//! for the weight and position blocks, each with its own distance `r`) plus
//! a random walk scaled by `alpha0 * alpha_decay^n`. Moves are applied in
//! place, so later comparisons in the same generation see the updated
//! firefly, and a moved firefly is rescored immediately. After the loop the
//! swarm is sorted brightest first.
//!
//! Penalty multipliers follow a schedule: by default all of them equal
//! `n^2` at generation `n`, tightening constraints as the search ages. The
//! best candidate ever seen (the incumbent) is tracked across generations
//! and rescored whenever multipliers change, so comparisons always happen
//! under the current weights.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::array::{BeamformingVector, PositionVector};
use crate::error::{Error, Result};
use crate::problem::{Candidate, Evaluator, FeasibilityReport, PenaltyWeights, Scenario};

/// Penalty multiplier schedule over generations.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ScheduleRepr", into = "ScheduleRepr")]
pub enum PenaltySchedule {
    /// All multipliers equal `n^2` at generation `n`.
    NSquared,
    /// All multipliers frozen at the given value.
    Fixed(f64),
}

impl PenaltySchedule {
    pub fn multiplier_at(&self, generation: usize) -> f64 {
        match self {
            PenaltySchedule::NSquared => {
                let n = generation as f64;
                n * n
            }
            PenaltySchedule::Fixed(v) => *v,
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum ScheduleRepr {
    Name(String),
    Value(f64),
}

impl TryFrom<ScheduleRepr> for PenaltySchedule {
    type Error = String;

    fn try_from(r: ScheduleRepr) -> std::result::Result<Self, String> {
        match r {
            ScheduleRepr::Name(s) if s == "n_squared" => Ok(PenaltySchedule::NSquared),
            ScheduleRepr::Name(s) => Err(format!(
                "unknown penalty schedule {s:?}, expected \"n_squared\" or a number"
            )),
            ScheduleRepr::Value(v) => Ok(PenaltySchedule::Fixed(v)),
        }
    }
}

impl From<PenaltySchedule> for ScheduleRepr {
    fn from(s: PenaltySchedule) -> ScheduleRepr {
        match s {
            PenaltySchedule::NSquared => ScheduleRepr::Name("n_squared".into()),
            PenaltySchedule::Fixed(v) => ScheduleRepr::Value(v),
        }
    }
}

/// Distribution of the random-walk draws.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RandomizationKind {
    /// Centered uniform draws on [-0.5, 0.5).
    Uniform,
    /// Standard normal draws.
    Gaussian,
}

fn default_population() -> usize {
    40
}

fn default_max_generations() -> usize {
    500
}

fn default_beta0() -> f64 {
    1.0
}

fn default_gamma() -> f64 {
    1.0
}

fn default_alpha0() -> f64 {
    0.07
}

fn default_alpha_decay() -> f64 {
    0.989
}

fn default_schedule() -> PenaltySchedule {
    PenaltySchedule::NSquared
}

fn default_seed() -> u64 {
    1
}

fn default_randomization() -> RandomizationKind {
    RandomizationKind::Uniform
}

fn default_position_noise_scale() -> f64 {
    1.0
}

/// Search parameters. The defaults reproduce the reference configuration:
/// 40 fireflies, 500 generations, `beta0 = gamma = 1`, random-walk scale
/// `0.07 * 0.989^n`, squared-generation penalty multipliers.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct FaConfig {
    pub population: usize,
    pub max_generations: usize,
    pub beta0: f64,
    pub gamma: f64,
    pub alpha0: f64,
    pub alpha_decay: f64,
    pub penalty_schedule: PenaltySchedule,
    pub rng_seed: u64,
    pub randomization: RandomizationKind,
    pub position_noise_scale: f64,
}

impl Default for FaConfig {
    fn default() -> Self {
        FaConfig {
            population: default_population(),
            max_generations: default_max_generations(),
            beta0: default_beta0(),
            gamma: default_gamma(),
            alpha0: default_alpha0(),
            alpha_decay: default_alpha_decay(),
            penalty_schedule: default_schedule(),
            rng_seed: default_seed(),
            randomization: default_randomization(),
            position_noise_scale: default_position_noise_scale(),
        }
    }
}

impl FaConfig {
    pub fn validate(&self) -> Result<()> {
        if self.population < 2 {
            return Err(Error::invalid(format!(
                "population must be at least 2, got {}",
                self.population
            )));
        }
        if self.max_generations == 0 {
            return Err(Error::invalid("max_generations must be at least 1"));
        }
        for (name, v) in [
            ("beta0", self.beta0),
            ("gamma", self.gamma),
            ("alpha0", self.alpha0),
            ("alpha_decay", self.alpha_decay),
            ("position_noise_scale", self.position_noise_scale),
        ] {
            if !v.is_finite() || v < 0.0 {
                return Err(Error::invalid(format!(
                    "{name} must be finite and non-negative, got {v}"
                )));
            }
        }
        if self.alpha_decay > 1.0 {
            return Err(Error::invalid(format!(
                "alpha_decay must not exceed 1, got {}",
                self.alpha_decay
            )));
        }
        if let PenaltySchedule::Fixed(v) = self.penalty_schedule {
            if !v.is_finite() || v < 0.0 {
                return Err(Error::invalid(format!(
                    "fixed penalty multiplier must be finite and non-negative, got {v}"
                )));
            }
        }
        Ok(())
    }

    fn alpha_at(&self, generation: usize) -> f64 {
        self.alpha0 * self.alpha_decay.powi(generation as i32)
    }
}

/// Per-generation snapshot of the incumbent.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GenerationTrace {
    pub generation: usize,
    pub best_brightness: f64,
    pub best_min_gain: f64,
    pub best_feasible: bool,
    pub alpha: f64,
    pub penalty_weight: f64,
}

/// Outcome of one search run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunResult {
    pub best: Candidate,
    pub best_min_gain: f64,
    pub feasibility: FeasibilityReport,
    pub trace: Vec<GenerationTrace>,
    pub evaluations: u64,
}

fn draw(rng: &mut impl Rng, kind: RandomizationKind) -> f64 {
    match kind {
        RandomizationKind::Uniform => rng.random_range(-0.5..0.5),
        RandomizationKind::Gaussian => rng.sample(StandardNormal),
    }
}

/// Random initial swarm. Positions are drawn uniformly on the segment and
/// sorted; spacing is deliberately not repaired, so candidates may start with
/// adjacent antennas closer than the floor and the penalty drives them apart.
/// Weights are complex Gaussian draws normalized to unit norm. Every
/// candidate therefore starts inside the segment and on the norm budget;
/// spacing and interference constraints may start violated.
pub fn initialize_population(
    scenario: &Scenario,
    config: &FaConfig,
    rng: &mut impl Rng,
) -> Result<Vec<Candidate>> {
    scenario.validate()?;
    config.validate()?;
    let n = scenario.n_antennas;
    let l = scenario.segment_length_wl;
    let mut swarm = Vec::with_capacity(config.population);
    for _ in 0..config.population {
        let d = {
            let mut d: Vec<f64> = (0..n).map(|_| rng.random_range(0.0..=l)).collect();
            d.sort_by(f64::total_cmp);
            d
        };
        let w = loop {
            let raw: Vec<Complex64> = (0..n)
                .map(|_| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
                .collect();
            let norm = raw.iter().map(Complex64::norm_sqr).sum::<f64>().sqrt();
            if norm > 1e-12 {
                break raw.into_iter().map(|v| v / norm).collect::<Vec<_>>();
            }
        };
        swarm.push(Candidate {
            w: BeamformingVector::from_raw(w),
            d: PositionVector::from_raw(d),
        });
    }
    Ok(swarm)
}

/// One attraction step of `mover` toward a brighter `target`. The weight and
/// position blocks use their own squared distances; the random walk adds
/// `alpha_n` times a centered draw per component (complex draws for weights,
/// real draws scaled by `position_noise_scale` for positions). The result is
/// not repaired: constraint handling is left to the penalty.
pub fn move_firefly(
    mover: &Candidate,
    target: &Candidate,
    alpha_n: f64,
    config: &FaConfig,
    rng: &mut impl Rng,
) -> Result<Candidate> {
    let n = mover.w.len();
    if n != mover.d.len() || target.w.len() != n || target.d.len() != n {
        return Err(Error::invalid(format!(
            "mismatched firefly dimensions {}x{} vs {}x{}",
            mover.w.len(),
            mover.d.len(),
            target.w.len(),
            target.d.len()
        )));
    }
    let wj = mover.w.as_slice();
    let wk = target.w.as_slice();
    let dj = mover.d.as_slice();
    let dk = target.d.as_slice();

    let r2_w: f64 = wj.iter().zip(wk).map(|(a, b)| (b - a).norm_sqr()).sum();
    let attr_w = config.beta0 * (-config.gamma * r2_w).exp();
    let w = wj
        .iter()
        .zip(wk)
        .map(|(a, b)| {
            let step = Complex64::new(
                draw(rng, config.randomization),
                draw(rng, config.randomization),
            );
            a + attr_w * (b - a) + alpha_n * step
        })
        .collect();

    let r2_d: f64 = dj.iter().zip(dk).map(|(a, b)| (b - a) * (b - a)).sum();
    let attr_d = config.beta0 * (-config.gamma * r2_d).exp();
    let noise = alpha_n * config.position_noise_scale;
    let d = dj
        .iter()
        .zip(dk)
        .map(|(a, b)| a + attr_d * (b - a) + noise * draw(rng, config.randomization))
        .collect();

    Ok(Candidate {
        w: BeamformingVector::from_raw(w),
        d: PositionVector::from_raw(d),
    })
}

struct Firefly {
    candidate: Candidate,
    brightness: f64,
}

/// Swarm state between generations. Kept separate from [`run`] so tests can
/// step single generations and inspect invariants.
struct Search<'a> {
    evaluator: Evaluator<'a>,
    config: &'a FaConfig,
    rng: ChaCha8Rng,
    swarm: Vec<Firefly>,
    multipliers: PenaltyWeights,
    multiplier_value: f64,
    incumbent: Candidate,
    incumbent_brightness: f64,
    evaluations: u64,
}

impl<'a> Search<'a> {
    fn new(scenario: &'a Scenario, config: &'a FaConfig) -> Result<Self> {
        let evaluator = Evaluator::new(scenario)?;
        config.validate()?;
        let mut rng = ChaCha8Rng::seed_from_u64(config.rng_seed);
        let population = initialize_population(scenario, config, &mut rng)?;

        // Initial scoring happens under the first generation's multipliers.
        let multiplier_value = config.penalty_schedule.multiplier_at(1);
        let multipliers = PenaltyWeights::uniform(multiplier_value, scenario);
        let mut evaluations = 0u64;
        let mut swarm = Vec::with_capacity(population.len());
        for candidate in population {
            let brightness = evaluator.brightness(&candidate, &multipliers)?;
            evaluations += 1;
            if !brightness.is_finite() {
                return Err(Error::NumericFailure { generation: 0 });
            }
            swarm.push(Firefly {
                candidate,
                brightness,
            });
        }
        swarm.sort_by(|a, b| b.brightness.total_cmp(&a.brightness));
        let incumbent = swarm[0].candidate.clone();
        let incumbent_brightness = swarm[0].brightness;
        Ok(Search {
            evaluator,
            config,
            rng,
            swarm,
            multipliers,
            multiplier_value,
            incumbent,
            incumbent_brightness,
            evaluations,
        })
    }

    fn rescore(&mut self, generation: usize) -> Result<()> {
        for f in &mut self.swarm {
            f.brightness = self.evaluator.brightness(&f.candidate, &self.multipliers)?;
            self.evaluations += 1;
            if !f.brightness.is_finite() {
                return Err(Error::NumericFailure { generation });
            }
        }
        self.incumbent_brightness = self
            .evaluator
            .brightness(&self.incumbent, &self.multipliers)?;
        self.evaluations += 1;
        if !self.incumbent_brightness.is_finite() {
            return Err(Error::NumericFailure { generation });
        }
        Ok(())
    }

    fn generation(&mut self, generation: usize) -> Result<GenerationTrace> {
        let alpha = self.config.alpha_at(generation);
        let value = self.config.penalty_schedule.multiplier_at(generation);
        if value != self.multiplier_value {
            self.multiplier_value = value;
            self.multipliers = PenaltyWeights::uniform(value, self.evaluator.scenario());
            self.rescore(generation)?;
        }

        let size = self.swarm.len();
        for j in 0..size {
            for k in 0..size {
                if self.swarm[j].brightness > self.incumbent_brightness {
                    self.incumbent_brightness = self.swarm[j].brightness;
                    self.incumbent = self.swarm[j].candidate.clone();
                }
                if self.swarm[k].brightness > self.incumbent_brightness {
                    self.incumbent_brightness = self.swarm[k].brightness;
                    self.incumbent = self.swarm[k].candidate.clone();
                }
                if self.swarm[k].brightness > self.swarm[j].brightness {
                    let moved = move_firefly(
                        &self.swarm[j].candidate,
                        &self.swarm[k].candidate,
                        alpha,
                        self.config,
                        &mut self.rng,
                    )?;
                    let brightness = self.evaluator.brightness(&moved, &self.multipliers)?;
                    self.evaluations += 1;
                    if !brightness.is_finite() {
                        return Err(Error::NumericFailure { generation });
                    }
                    self.swarm[j] = Firefly {
                        candidate: moved,
                        brightness,
                    };
                }
            }
        }

        self.swarm
            .sort_by(|a, b| b.brightness.total_cmp(&a.brightness));
        if self.swarm[0].brightness > self.incumbent_brightness {
            self.incumbent_brightness = self.swarm[0].brightness;
            self.incumbent = self.swarm[0].candidate.clone();
        }

        Ok(GenerationTrace {
            generation,
            best_brightness: self.incumbent_brightness,
            best_min_gain: self.evaluator.min_intended_gain(&self.incumbent)?,
            best_feasible: self.evaluator.feasibility(&self.incumbent)?.feasible,
            alpha,
            penalty_weight: self.multiplier_value,
        })
    }

    fn finish(self) -> Result<RunResult> {
        let best_min_gain = self.evaluator.min_intended_gain(&self.incumbent)?;
        let feasibility = self.evaluator.feasibility(&self.incumbent)?;
        Ok(RunResult {
            best: self.incumbent,
            best_min_gain,
            feasibility,
            trace: Vec::new(),
            evaluations: self.evaluations,
        })
    }
}

/// Full search: seeded initialization, `max_generations` double-loop
/// generations, one trace row per generation. Identical inputs give
/// identical results, including the trace and the evaluation count.
pub fn run(scenario: &Scenario, config: &FaConfig) -> Result<RunResult> {
    let mut search = Search::new(scenario, config)?;
    let mut trace = Vec::with_capacity(config.max_generations);
    for n in 1..=config.max_generations {
        trace.push(search.generation(n)?);
    }
    let mut result = search.finish()?;
    result.trace = trace;
    Ok(result)
}

/// Predicted work per the complexity model: each generation costs
/// `population^2 * n_antennas` for the double loop plus
/// `population * ceil(log2(population))` for the sort.
pub fn count_operations(scenario: &Scenario, config: &FaConfig) -> u64 {
    let omega = config.population as u64;
    let n = scenario.n_antennas as u64;
    let log = if config.population <= 1 {
        0
    } else {
        u64::from(usize::BITS - (config.population - 1).leading_zeros())
    };
    config.max_generations as u64 * (omega * omega * n + omega * log)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn scenario() -> Scenario {
        Scenario {
            n_antennas: 4,
            segment_length_wl: 8.0,
            min_spacing_wl: 0.5,
            wavelength: 1.0,
            intended_deg: vec![100.0, 145.0],
            unintended_deg: vec![125.0, 165.0],
            interference_threshold: 0.1,
        }
    }

    fn small_config() -> FaConfig {
        FaConfig {
            population: 8,
            max_generations: 12,
            rng_seed: 7,
            ..FaConfig::default()
        }
    }

    #[test]
    fn config_defaults_match_reference_values() {
        let c = FaConfig::default();
        assert_eq!(c.population, 40);
        assert_eq!(c.max_generations, 500);
        assert_eq!(c.beta0, 1.0);
        assert_eq!(c.gamma, 1.0);
        assert_eq!(c.alpha0, 0.07);
        assert_eq!(c.alpha_decay, 0.989);
        assert_eq!(c.penalty_schedule, PenaltySchedule::NSquared);
        assert_eq!(c.randomization, RandomizationKind::Uniform);
        assert_eq!(c.position_noise_scale, 1.0);
        assert!(c.validate().is_ok());
    }

    #[test]
    fn config_validation_rejects_degenerate_values() {
        for mutate in [
            Box::new(|c: &mut FaConfig| c.population = 1) as Box<dyn Fn(&mut FaConfig)>,
            Box::new(|c| c.max_generations = 0),
            Box::new(|c| c.beta0 = -1.0),
            Box::new(|c| c.gamma = f64::NAN),
            Box::new(|c| c.alpha0 = -0.1),
            Box::new(|c| c.alpha_decay = 1.5),
            Box::new(|c| c.position_noise_scale = -1.0),
            Box::new(|c| c.penalty_schedule = PenaltySchedule::Fixed(-2.0)),
        ] {
            let mut c = FaConfig::default();
            mutate(&mut c);
            assert!(c.validate().is_err());
        }
    }

    #[test]
    fn schedule_serde_roundtrips_both_forms() {
        let fixed: PenaltySchedule = serde_json::from_str("2.5").unwrap();
        assert_eq!(fixed, PenaltySchedule::Fixed(2.5));
        let squared: PenaltySchedule = serde_json::from_str("\"n_squared\"").unwrap();
        assert_eq!(squared, PenaltySchedule::NSquared);
        assert!(serde_json::from_str::<PenaltySchedule>("\"cubed\"").is_err());
        assert_eq!(
            serde_json::to_string(&PenaltySchedule::NSquared).unwrap(),
            "\"n_squared\""
        );
        assert_eq!(
            serde_json::to_string(&PenaltySchedule::Fixed(3.0)).unwrap(),
            "3.0"
        );
        assert_eq!(PenaltySchedule::NSquared.multiplier_at(7), 49.0);
        assert_eq!(PenaltySchedule::Fixed(3.0).multiplier_at(7), 3.0);
    }

    #[test]
    fn initial_population_is_sorted_in_segment_with_unit_norm() {
        let s = scenario();
        let mut cfg = small_config();
        cfg.population = 64;
        let mut rng = ChaCha8Rng::seed_from_u64(123);
        let swarm = initialize_population(&s, &cfg, &mut rng).unwrap();
        assert_eq!(swarm.len(), 64);
        for c in &swarm {
            let report = crate::problem::evaluate_feasibility(c, &s).unwrap();
            assert_eq!(report.c1_violation, 0.0);
            assert_eq!(report.c2_violation, 0.0);
            assert!(report.norm_violation <= 1e-9);
            assert_relative_eq!(c.w.norm(), 1.0, max_relative = 1e-12);
            let d = c.d.as_slice();
            assert!(d.windows(2).all(|p| p[0] <= p[1]));
        }
    }

    #[test]
    fn initial_spacing_is_not_repaired() {
        // Spacing starts violated for essentially every draw on a tight
        // segment; the search, not the sampler, must resolve it. A silent
        // repair step here would mask that behavior.
        let s = Scenario {
            n_antennas: 4,
            segment_length_wl: 1.6,
            min_spacing_wl: 0.5,
            wavelength: 1.0,
            intended_deg: vec![90.0],
            unintended_deg: vec![],
            interference_threshold: 0.1,
        };
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let swarm = initialize_population(&s, &small_config(), &mut rng).unwrap();
        let mut violated = 0;
        for c in &swarm {
            let d = c.d.as_slice();
            assert!(d[0] >= 0.0);
            assert!(*d.last().unwrap() <= 1.6);
            let report = crate::problem::evaluate_feasibility(c, &s).unwrap();
            if report.spacing_violations.iter().any(|&v| v > 0.0) {
                violated += 1;
            }
        }
        assert!(violated > 0);
    }

    #[test]
    fn move_with_zero_alpha_is_pure_attraction() {
        let cfg = FaConfig {
            alpha0: 0.0,
            ..FaConfig::default()
        };
        let mover = Candidate {
            w: BeamformingVector::from_raw(vec![Complex64::new(1.0, 0.0); 2]),
            d: PositionVector::from_raw(vec![0.0, 1.0]),
        };
        let target = Candidate {
            w: BeamformingVector::from_raw(vec![Complex64::new(0.0, 1.0); 2]),
            d: PositionVector::from_raw(vec![1.0, 3.0]),
        };
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let moved = move_firefly(&mover, &target, 0.0, &cfg, &mut rng).unwrap();

        // r2 over weights: 2 * |i - 1|^2 = 4; over positions: 1 + 4 = 5.
        let aw = (-4.0f64).exp();
        let ad = (-5.0f64).exp();
        for e in moved.w.as_slice() {
            assert_relative_eq!(e.re, 1.0 - aw, max_relative = 1e-12);
            assert_relative_eq!(e.im, aw, max_relative = 1e-12);
        }
        assert_relative_eq!(moved.d.as_slice()[0], ad, max_relative = 1e-12);
        assert_relative_eq!(moved.d.as_slice()[1], 1.0 + 2.0 * ad, max_relative = 1e-12);
    }

    #[test]
    fn move_toward_self_with_zero_alpha_is_identity() {
        let cfg = FaConfig::default();
        let c = Candidate {
            w: BeamformingVector::from_raw(vec![
                Complex64::new(0.3, -0.4),
                Complex64::new(-0.1, 0.2),
            ]),
            d: PositionVector::from_raw(vec![0.5, 2.0]),
        };
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let moved = move_firefly(&c, &c, 0.0, &cfg, &mut rng).unwrap();
        assert_eq!(moved, c);
    }

    #[test]
    fn move_steps_shrink_with_alpha() {
        // With identical mover and target only the random walk remains, and
        // its size is proportional to alpha.
        let cfg = FaConfig::default();
        let c = Candidate {
            w: BeamformingVector::from_raw(vec![Complex64::new(0.1, 0.1); 3]),
            d: PositionVector::from_raw(vec![0.0, 1.0, 2.0]),
        };
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let big = move_firefly(&c, &c, 0.2, &cfg, &mut rng).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let small = move_firefly(&c, &c, 0.02, &cfg, &mut rng).unwrap();
        // Same rng seed means identical draws, so displacements scale by 10.
        for i in 0..3 {
            let db = big.d.as_slice()[i] - c.d.as_slice()[i];
            let ds = small.d.as_slice()[i] - c.d.as_slice()[i];
            assert_relative_eq!(db, 10.0 * ds, max_relative = 1e-9);
        }
    }

    #[test]
    fn move_rejects_mismatched_dimensions() {
        let cfg = FaConfig::default();
        let a = Candidate {
            w: BeamformingVector::from_raw(vec![Complex64::new(1.0, 0.0); 2]),
            d: PositionVector::from_raw(vec![0.0, 1.0]),
        };
        let b = Candidate {
            w: BeamformingVector::from_raw(vec![Complex64::new(1.0, 0.0); 3]),
            d: PositionVector::from_raw(vec![0.0, 1.0, 2.0]),
        };
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        assert!(move_firefly(&a, &b, 0.1, &cfg, &mut rng).is_err());
    }

    #[test]
    fn runs_are_deterministic_given_seed() {
        let s = scenario();
        let cfg = small_config();
        let a = run(&s, &cfg).unwrap();
        let b = run(&s, &cfg).unwrap();
        assert_eq!(a.best, b.best);
        assert_eq!(a.trace, b.trace);
        assert_eq!(a.evaluations, b.evaluations);

        let mut other = cfg.clone();
        other.rng_seed = 8;
        let c = run(&s, &other).unwrap();
        assert_ne!(a.best, c.best, "different seeds should explore differently");
    }

    #[test]
    fn trace_has_one_row_per_generation_with_schedule_values() {
        let s = scenario();
        let cfg = small_config();
        let r = run(&s, &cfg).unwrap();
        assert_eq!(r.trace.len(), cfg.max_generations);
        for (i, row) in r.trace.iter().enumerate() {
            let n = i + 1;
            assert_eq!(row.generation, n);
            assert_eq!(row.penalty_weight, (n * n) as f64);
            assert_relative_eq!(
                row.alpha,
                cfg.alpha0 * cfg.alpha_decay.powi(n as i32),
                max_relative = 1e-12
            );
        }
    }

    #[test]
    fn incumbent_brightness_never_drops_under_fixed_multipliers() {
        let s = scenario();
        let cfg = FaConfig {
            population: 10,
            max_generations: 25,
            penalty_schedule: PenaltySchedule::Fixed(50.0),
            rng_seed: 3,
            ..FaConfig::default()
        };
        let r = run(&s, &cfg).unwrap();
        for pair in r.trace.windows(2) {
            assert!(
                pair[1].best_brightness >= pair[0].best_brightness - 1e-12,
                "incumbent regressed: {pair:?}"
            );
        }
    }

    #[test]
    fn incumbent_dominates_final_swarm() {
        let s = scenario();
        let cfg = small_config();
        let mut search = Search::new(&s, &cfg).unwrap();
        for n in 1..=cfg.max_generations {
            search.generation(n).unwrap();
            assert!(
                search.incumbent_brightness >= search.swarm[0].brightness,
                "swarm out-briefed the incumbent at generation {n}"
            );
            for pair in search.swarm.windows(2) {
                assert!(pair[0].brightness >= pair[1].brightness);
            }
        }
    }

    #[test]
    fn result_reports_its_own_feasibility() {
        let s = scenario();
        let r = run(&s, &small_config()).unwrap();
        let audit = crate::problem::evaluate_feasibility(&r.best, &s).unwrap();
        assert_eq!(audit, r.feasibility);
        assert_eq!(
            crate::problem::min_intended_gain(&r.best, &s).unwrap(),
            r.best_min_gain
        );
    }

    #[test]
    fn evaluation_count_tracks_population_and_moves() {
        let s = scenario();
        let cfg = small_config();
        let r = run(&s, &cfg).unwrap();
        // At minimum the initial scoring, at most init + per-generation
        // rescores + every (j, k) pair moving every generation.
        let omega = cfg.population as u64;
        let gens = cfg.max_generations as u64;
        let min = omega + gens * (omega + 1);
        let max = omega + gens * (omega + 1) + gens * omega * omega;
        assert!(r.evaluations >= min, "{} < {min}", r.evaluations);
        assert!(r.evaluations <= max, "{} > {max}", r.evaluations);
    }

    #[test]
    fn fixed_schedule_skips_rescoring() {
        let s = scenario();
        let fixed = FaConfig {
            population: 6,
            max_generations: 10,
            penalty_schedule: PenaltySchedule::Fixed(25.0),
            rng_seed: 2,
            ..FaConfig::default()
        };
        let squared = FaConfig {
            penalty_schedule: PenaltySchedule::NSquared,
            ..fixed.clone()
        };
        let rf = run(&s, &fixed).unwrap();
        let rs = run(&s, &squared).unwrap();
        // The squared schedule rescores population + incumbent every
        // generation after the first; the fixed schedule never does.
        assert!(rs.evaluations > rf.evaluations);
    }

    #[test]
    fn operation_count_follows_the_model() {
        let s = scenario();
        let mut cfg = FaConfig {
            population: 2,
            max_generations: 1,
            ..FaConfig::default()
        };
        assert_eq!(count_operations(&s, &cfg), 2 * 2 * 4 + 2);
        cfg.population = 40;
        cfg.max_generations = 500;
        let mut s8 = s.clone();
        s8.n_antennas = 8;
        assert_eq!(count_operations(&s8, &cfg), 6_520_000);
    }

    #[test]
    fn search_rejects_invalid_inputs() {
        let mut s = scenario();
        s.n_antennas = 1;
        assert!(run(&s, &small_config()).is_err());
        let s = scenario();
        let mut cfg = small_config();
        cfg.population = 0;
        assert!(run(&s, &cfg).is_err());
    }
}
