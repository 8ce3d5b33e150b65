//! Constrained max-min beamforming problem and its penalty reformulation.
//!
//! A [`Scenario`] fixes the segment, the spacing floor, the intended and
//! unintended directions, and the interference threshold. A [`Candidate`]
//! pairs weights with positions. The constraints are
//!
//! * C1: `d_1 >= 0`
//! * C2: `d_N <= L`
//! * C3: `d_i - d_{i-1} >= L0` for `i = 2..N`, evaluated in index order
//! * C4: gain toward each unintended direction at most `I0`
//! * C5: `|w|_2 <= 1`
//!
//! [`penalty`] turns each violation `v` into a quadratic term `weight * v^2`
//! and [`brightness`] subtracts the sum from the worst-case intended gain,
//! giving the scalar score the swarm maximizes.

use serde::{Deserialize, Serialize};

use crate::array::{gain_with_wavenumber, BeamformingVector, PositionVector};
use crate::error::{Error, Result};

/// Slack below which a constraint violation still counts as feasible.
pub const FEASIBILITY_TOLERANCE: f64 = 1e-6;

fn default_wavelength() -> f64 {
    1.0
}

/// Problem instance: geometry, directions, and the interference budget.
/// Lengths are in wavelength units (`wavelength` only matters to callers
/// converting from metric positions).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Scenario {
    pub n_antennas: usize,
    pub segment_length_wl: f64,
    pub min_spacing_wl: f64,
    #[serde(default = "default_wavelength")]
    pub wavelength: f64,
    pub intended_deg: Vec<f64>,
    pub unintended_deg: Vec<f64>,
    pub interference_threshold: f64,
}

impl Scenario {
    /// Checks every scenario invariant, returning the first violation.
    pub fn validate(&self) -> Result<()> {
        if self.n_antennas < 2 {
            return Err(Error::invalid(format!(
                "n_antennas must be at least 2, got {}",
                self.n_antennas
            )));
        }
        if !self.segment_length_wl.is_finite() || self.segment_length_wl <= 0.0 {
            return Err(Error::invalid(format!(
                "segment_length_wl must be positive, got {}",
                self.segment_length_wl
            )));
        }
        if !self.min_spacing_wl.is_finite() || self.min_spacing_wl <= 0.0 {
            return Err(Error::invalid(format!(
                "min_spacing_wl must be positive, got {}",
                self.min_spacing_wl
            )));
        }
        if !self.wavelength.is_finite() || self.wavelength <= 0.0 {
            return Err(Error::invalid(format!(
                "wavelength must be positive, got {}",
                self.wavelength
            )));
        }
        let needed = (self.n_antennas - 1) as f64 * self.min_spacing_wl;
        if needed > self.segment_length_wl {
            return Err(Error::invalid(format!(
                "{} antennas with spacing {} need {} wavelengths, segment is {}",
                self.n_antennas, self.min_spacing_wl, needed, self.segment_length_wl
            )));
        }
        if self.intended_deg.is_empty() {
            return Err(Error::invalid("at least one intended direction required"));
        }
        for &a in self.intended_deg.iter().chain(&self.unintended_deg) {
            if !a.is_finite() || !(0.0..=180.0).contains(&a) {
                return Err(Error::invalid(format!(
                    "direction {a} outside [0, 180] degrees"
                )));
            }
        }
        for i in &self.intended_deg {
            if self.unintended_deg.contains(i) {
                return Err(Error::invalid(format!(
                    "direction {i} listed as both intended and unintended"
                )));
            }
        }
        if !self.interference_threshold.is_finite() || self.interference_threshold <= 0.0 {
            return Err(Error::invalid(format!(
                "interference_threshold must be positive, got {}",
                self.interference_threshold
            )));
        }
        Ok(())
    }
}

/// One point of the search space: weights plus positions.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Candidate {
    pub w: BeamformingVector,
    pub d: PositionVector,
}

impl Candidate {
    pub fn new(w: BeamformingVector, d: PositionVector) -> Result<Self> {
        if w.len() != d.len() {
            return Err(Error::invalid(format!(
                "{} weights against {} positions",
                w.len(),
                d.len()
            )));
        }
        Ok(Candidate { w, d })
    }
}

/// Multipliers for the quadratic penalty terms, one per constraint
/// (`beta3` has an entry per spacing gap, `rho` one per unintended
/// direction).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PenaltyWeights {
    pub beta1: f64,
    pub beta2: f64,
    pub beta3: Vec<f64>,
    pub rho: Vec<f64>,
    pub lambda_w: f64,
}

impl PenaltyWeights {
    /// All multipliers set to the same value, shaped for `scenario`.
    pub fn uniform(value: f64, scenario: &Scenario) -> Self {
        PenaltyWeights {
            beta1: value,
            beta2: value,
            beta3: vec![value; scenario.n_antennas.saturating_sub(1)],
            rho: vec![value; scenario.unintended_deg.len()],
            lambda_w: value,
        }
    }

    fn validate_for(&self, scenario: &Scenario) -> Result<()> {
        if self.beta3.len() != scenario.n_antennas - 1 {
            return Err(Error::invalid(format!(
                "{} spacing multipliers for {} antennas",
                self.beta3.len(),
                scenario.n_antennas
            )));
        }
        if self.rho.len() != scenario.unintended_deg.len() {
            return Err(Error::invalid(format!(
                "{} interference multipliers for {} unintended directions",
                self.rho.len(),
                scenario.unintended_deg.len()
            )));
        }
        let all_finite = [self.beta1, self.beta2, self.lambda_w]
            .into_iter()
            .chain(self.beta3.iter().copied())
            .chain(self.rho.iter().copied())
            .all(|v| v.is_finite() && v >= 0.0);
        if !all_finite {
            return Err(Error::invalid(
                "penalty multipliers must be finite and non-negative",
            ));
        }
        Ok(())
    }
}

/// Per-constraint violation magnitudes for one candidate. Zero means the
/// constraint holds exactly; `feasible` applies [`FEASIBILITY_TOLERANCE`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FeasibilityReport {
    pub c1_violation: f64,
    pub c2_violation: f64,
    pub spacing_violations: Vec<f64>,
    pub interference_violations: Vec<f64>,
    pub norm_violation: f64,
    pub feasible: bool,
}

impl FeasibilityReport {
    /// Largest violation across all constraints.
    pub fn max_violation(&self) -> f64 {
        let mut m = self
            .c1_violation
            .max(self.c2_violation)
            .max(self.norm_violation);
        for &v in self
            .spacing_violations
            .iter()
            .chain(&self.interference_violations)
        {
            m = m.max(v);
        }
        m
    }
}

#[inline]
fn lower_bound_violation(d_first: f64) -> f64 {
    (-d_first).max(0.0)
}

#[inline]
fn upper_bound_violation(d_last: f64, segment: f64) -> f64 {
    (d_last - segment).max(0.0)
}

#[inline]
fn spacing_violation(prev: f64, next: f64, min_spacing: f64) -> f64 {
    (min_spacing - next + prev).max(0.0)
}

#[inline]
fn interference_violation(gain: f64, threshold: f64) -> f64 {
    (gain - threshold).max(0.0)
}

#[inline]
fn norm_violation(norm: f64) -> f64 {
    (norm - 1.0).max(0.0)
}

/// Precomputed per-scenario state for repeated candidate evaluation. The
/// free functions below build one per call; the swarm reuses a single
/// instance, which yields identical floating-point results because the
/// cached values are exactly the ones the free path recomputes.
pub struct Evaluator<'a> {
    scenario: &'a Scenario,
    k_intended: Vec<f64>,
    k_unintended: Vec<f64>,
}

impl<'a> Evaluator<'a> {
    pub fn new(scenario: &'a Scenario) -> Result<Self> {
        scenario.validate()?;
        let wavenumber = |deg: &f64| std::f64::consts::TAU * deg.to_radians().cos();
        Ok(Evaluator {
            scenario,
            k_intended: scenario.intended_deg.iter().map(wavenumber).collect(),
            k_unintended: scenario.unintended_deg.iter().map(wavenumber).collect(),
        })
    }

    pub fn scenario(&self) -> &Scenario {
        self.scenario
    }

    fn check_candidate(&self, c: &Candidate) -> Result<()> {
        if c.w.len() != self.scenario.n_antennas || c.d.len() != self.scenario.n_antennas {
            return Err(Error::invalid(format!(
                "candidate sized {}x{} for a {}-antenna scenario",
                c.w.len(),
                c.d.len(),
                self.scenario.n_antennas
            )));
        }
        Ok(())
    }

    /// Worst-case gain over the intended directions.
    pub fn min_intended_gain(&self, c: &Candidate) -> Result<f64> {
        self.check_candidate(c)?;
        let w = c.w.as_slice();
        let d = c.d.as_slice();
        let mut min = f64::INFINITY;
        for &k in &self.k_intended {
            min = min.min(gain_with_wavenumber(w, d, k));
        }
        Ok(min)
    }

    /// Violation magnitudes for every constraint, plus the tolerance-based
    /// feasible flag.
    pub fn feasibility(&self, c: &Candidate) -> Result<FeasibilityReport> {
        self.check_candidate(c)?;
        let d = c.d.as_slice();
        let w = c.w.as_slice();
        let s = self.scenario;
        let spacing_violations: Vec<f64> = (1..d.len())
            .map(|i| spacing_violation(d[i - 1], d[i], s.min_spacing_wl))
            .collect();
        let interference_violations: Vec<f64> = self
            .k_unintended
            .iter()
            .map(|&k| {
                interference_violation(gain_with_wavenumber(w, d, k), s.interference_threshold)
            })
            .collect();
        let report = FeasibilityReport {
            c1_violation: lower_bound_violation(d[0]),
            c2_violation: upper_bound_violation(d[d.len() - 1], s.segment_length_wl),
            spacing_violations,
            interference_violations,
            norm_violation: norm_violation(c.w.norm()),
            feasible: false,
        };
        let feasible = report.max_violation() <= FEASIBILITY_TOLERANCE;
        Ok(FeasibilityReport { feasible, ..report })
    }

    /// Weighted sum of squared violations. Computes the same violation
    /// values as [`Evaluator::feasibility`] without allocating.
    pub fn penalty(&self, c: &Candidate, weights: &PenaltyWeights) -> Result<f64> {
        self.check_candidate(c)?;
        weights.validate_for(self.scenario)?;
        let d = c.d.as_slice();
        let w = c.w.as_slice();
        let s = self.scenario;

        let mut p = weights.beta1 * lower_bound_violation(d[0]).powi(2);
        p += weights.beta2 * upper_bound_violation(d[d.len() - 1], s.segment_length_wl).powi(2);
        for i in 1..d.len() {
            p += weights.beta3[i - 1] * spacing_violation(d[i - 1], d[i], s.min_spacing_wl).powi(2);
        }
        for (&k, &rho) in self.k_unintended.iter().zip(&weights.rho) {
            let g = gain_with_wavenumber(w, d, k);
            p += rho * interference_violation(g, s.interference_threshold).powi(2);
        }
        p += weights.lambda_w * norm_violation(c.w.norm()).powi(2);
        Ok(p)
    }

    /// Penalty-reformulated objective: worst intended gain minus the
    /// penalty sum. Higher is better.
    pub fn brightness(&self, c: &Candidate, weights: &PenaltyWeights) -> Result<f64> {
        Ok(self.min_intended_gain(c)? - self.penalty(c, weights)?)
    }
}

/// Worst-case gain over the scenario's intended directions.
pub fn min_intended_gain(c: &Candidate, scenario: &Scenario) -> Result<f64> {
    Evaluator::new(scenario)?.min_intended_gain(c)
}

/// Constraint audit for one candidate.
pub fn evaluate_feasibility(c: &Candidate, scenario: &Scenario) -> Result<FeasibilityReport> {
    Evaluator::new(scenario)?.feasibility(c)
}

/// Weighted sum of squared constraint violations.
pub fn penalty(c: &Candidate, scenario: &Scenario, weights: &PenaltyWeights) -> Result<f64> {
    Evaluator::new(scenario)?.penalty(c, weights)
}

/// Worst intended gain minus the penalty sum.
pub fn brightness(c: &Candidate, scenario: &Scenario, weights: &PenaltyWeights) -> Result<f64> {
    Evaluator::new(scenario)?.brightness(c, weights)
}
