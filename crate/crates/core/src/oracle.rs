//! Exhaustive grid search for very small arrays.
//!
//! The oracle discretizes positions to multiples of `position_step` on the
//! segment, weight amplitudes to `amplitude_levels` even steps on [0, 1],
//! and weight phases to multiples of `phase_step` on [0, 2*pi), with the
//! first weight's phase pinned to zero (a global phase does not change any
//! gain). Every raw weight tuple is normalized onto the unit-norm budget
//! before scoring.
//!
//! Each enumerated candidate is kept only if it satisfies every constraint
//! with zero slack under exactly the arithmetic `evaluate_feasibility`
//! uses, so the winner always audits clean. Among feasible candidates the
//! one with the highest worst-case intended gain wins; ties keep the first
//! candidate in enumeration order (positions outermost, then amplitudes,
//! then phases).

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::array::{gain_against_steering, BeamformingVector, PositionVector};
use crate::error::{Error, Result};
use crate::problem::{evaluate_feasibility, Candidate, Scenario};

/// Largest array the exhaustive search accepts.
pub const MAX_ORACLE_ANTENNAS: usize = 3;

fn default_position_step() -> f64 {
    0.05
}

fn default_phase_step() -> f64 {
    PI / 36.0
}

fn default_amplitude_levels() -> usize {
    8
}

fn default_max_evaluations() -> u64 {
    100_000_000
}

/// Discretization of the candidate space.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct GridSpec {
    /// Spacing of the position grid, wavelength units.
    pub position_step: f64,
    /// Spacing of the weight phase grid, radians.
    pub phase_step: f64,
    /// Number of evenly spaced amplitude values on [0, 1].
    pub amplitude_levels: usize,
    /// Upper bound on grid cardinality before the search refuses to run.
    pub max_evaluations: u64,
}

impl Default for GridSpec {
    fn default() -> Self {
        GridSpec {
            position_step: default_position_step(),
            phase_step: default_phase_step(),
            amplitude_levels: default_amplitude_levels(),
            max_evaluations: default_max_evaluations(),
        }
    }
}

impl GridSpec {
    fn validate(&self) -> Result<()> {
        if !self.position_step.is_finite() || self.position_step <= 0.0 {
            return Err(Error::invalid(format!(
                "position_step must be positive, got {}",
                self.position_step
            )));
        }
        if !self.phase_step.is_finite() || self.phase_step <= 0.0 {
            return Err(Error::invalid(format!(
                "phase_step must be positive, got {}",
                self.phase_step
            )));
        }
        if self.amplitude_levels == 0 {
            return Err(Error::invalid("amplitude_levels must be at least 1"));
        }
        if self.max_evaluations == 0 {
            return Err(Error::invalid("max_evaluations must be at least 1"));
        }
        Ok(())
    }
}

/// Multiples of `step` covering [0, l]. A final value within rounding dust
/// of `l` is clamped onto it so the segment end stays reachable.
fn position_values(l: f64, step: f64) -> Vec<f64> {
    let mut values = Vec::new();
    let mut i = 0usize;
    loop {
        let x = i as f64 * step;
        if x > l + step * 1e-9 {
            break;
        }
        values.push(x.min(l));
        i += 1;
    }
    values
}

/// Number of phase-grid points in [0, 2*pi), robust to steps that divide
/// the circle exactly up to rounding.
fn phase_count(step: f64) -> usize {
    let ratio = TAU / step;
    let n = if (ratio - ratio.round()).abs() < 1e-9 {
        ratio.round()
    } else {
        ratio.ceil()
    };
    (n as usize).max(1)
}

fn amplitude_values(levels: usize) -> Vec<f64> {
    if levels == 1 {
        vec![1.0]
    } else {
        (0..levels)
            .map(|i| i as f64 / (levels - 1) as f64)
            .collect()
    }
}

/// Feasible position tuples, found by value-level checks identical to the
/// ones `evaluate_feasibility` applies.
fn feasible_position_tuples(scenario: &Scenario, values: &[f64]) -> Vec<Vec<f64>> {
    let n = scenario.n_antennas;
    let l = scenario.segment_length_wl;
    let l0 = scenario.min_spacing_wl;
    let mut tuples = Vec::new();
    let mut current = Vec::with_capacity(n);

    fn extend(
        values: &[f64],
        current: &mut Vec<f64>,
        n: usize,
        l: f64,
        l0: f64,
        out: &mut Vec<Vec<f64>>,
    ) {
        if current.len() == n {
            out.push(current.clone());
            return;
        }
        for &v in values {
            if let Some(&prev) = current.last() {
                if l0 - v + prev > 0.0 {
                    continue;
                }
            } else if -v > 0.0 {
                continue;
            }
            if v - l > 0.0 {
                continue;
            }
            current.push(v);
            extend(values, current, n, l, l0, out);
            current.pop();
        }
    }

    extend(values, &mut current, n, l, l0, &mut tuples);
    tuples
}

/// Odometer increment over fixed-radix digits, most significant first.
/// Returns false on wrap-around.
fn increment(digits: &mut [usize], radix: usize) -> bool {
    for d in digits.iter_mut().rev() {
        *d += 1;
        if *d < radix {
            return true;
        }
        *d = 0;
    }
    false
}

fn weight_norm(w: &[Complex64]) -> f64 {
    w.iter().map(Complex64::norm_sqr).sum::<f64>().sqrt()
}

/// Scales `w` onto the unit ball so the norm constraint holds with zero
/// slack under the exact arithmetic the audit uses.
fn normalize_onto_budget(w: &mut [Complex64]) -> bool {
    let norm = weight_norm(w);
    if !(norm > 1e-12) {
        return false;
    }
    for e in w.iter_mut() {
        *e /= norm;
    }
    for _ in 0..64 {
        if weight_norm(w) <= 1.0 {
            return true;
        }
        for e in w.iter_mut() {
            *e *= 1.0 - 1e-15;
        }
    }
    false
}

struct GridBest {
    value: f64,
    tuple_index: usize,
    combo_index: u64,
    w: Vec<Complex64>,
    d: Vec<f64>,
}

/// Exhaustive search over the discretized candidate space. Returns the
/// feasible candidate with the highest worst-case intended gain together
/// with that gain, preferring earlier enumeration order on exact ties.
pub fn brute_force_solve(scenario: &Scenario, grid: &GridSpec) -> Result<(Candidate, f64)> {
    scenario.validate()?;
    grid.validate()?;
    let n = scenario.n_antennas;
    if n > MAX_ORACLE_ANTENNAS {
        return Err(Error::UnsupportedArraySize {
            got: n,
            max: MAX_ORACLE_ANTENNAS,
        });
    }

    let values = position_values(scenario.segment_length_wl, grid.position_step);
    let tuples = feasible_position_tuples(scenario, &values);
    let amplitudes = amplitude_values(grid.amplitude_levels);
    let phases = phase_count(grid.phase_step);

    let amp_tuples = (amplitudes.len() as u128).pow(n as u32);
    let zero_amp_tuples = u128::from(amplitudes.contains(&0.0));
    let phase_tuples = (phases as u128).pow(n as u32 - 1);
    let combos = (amp_tuples - zero_amp_tuples) * phase_tuples;
    let cardinality = tuples.len() as u128 * combos;
    if cardinality > u128::from(grid.max_evaluations) {
        return Err(Error::GridTooLarge {
            cardinality,
            cap: u128::from(grid.max_evaluations),
        });
    }
    if cardinality == 0 {
        return Err(Error::NoFeasibleGridPoint);
    }

    let phase_phasors: Vec<Complex64> = (0..phases)
        .map(|i| {
            let (sin, cos) = (i as f64 * grid.phase_step).sin_cos();
            Complex64::new(cos, sin)
        })
        .collect();
    let k_intended: Vec<f64> = scenario
        .intended_deg
        .iter()
        .map(|deg| TAU * deg.to_radians().cos())
        .collect();
    let k_unintended: Vec<f64> = scenario
        .unintended_deg
        .iter()
        .map(|deg| TAU * deg.to_radians().cos())
        .collect();

    let best = tuples
        .par_iter()
        .enumerate()
        .filter_map(|(tuple_index, d)| {
            search_weights(
                d,
                tuple_index,
                &amplitudes,
                &phase_phasors,
                &k_intended,
                &k_unintended,
                scenario.interference_threshold,
            )
        })
        .reduce_with(|a, b| {
            if b.value > a.value
                || (b.value == a.value
                    && (b.tuple_index, b.combo_index) < (a.tuple_index, a.combo_index))
            {
                b
            } else {
                a
            }
        });

    match best {
        Some(found) => {
            let candidate = Candidate {
                w: BeamformingVector::from_raw(found.w),
                d: PositionVector::from_raw(found.d),
            };
            let audit = evaluate_feasibility(&candidate, scenario)?;
            debug_assert_eq!(audit.max_violation(), 0.0);
            if audit.max_violation() != 0.0 {
                return Err(Error::NoFeasibleGridPoint);
            }
            Ok((candidate, found.value))
        }
        None => Err(Error::NoFeasibleGridPoint),
    }
}

#[allow(clippy::too_many_arguments)]
fn search_weights(
    d: &[f64],
    tuple_index: usize,
    amplitudes: &[f64],
    phase_phasors: &[Complex64],
    k_intended: &[f64],
    k_unintended: &[f64],
    threshold: f64,
) -> Option<GridBest> {
    let n = d.len();
    let steer = |k: f64| -> Vec<Complex64> {
        d.iter()
            .map(|&di| {
                let (sin, cos) = (k * di).sin_cos();
                Complex64::new(cos, sin)
            })
            .collect()
    };
    let s_intended: Vec<Vec<Complex64>> = k_intended.iter().map(|&k| steer(k)).collect();
    let s_unintended: Vec<Vec<Complex64>> = k_unintended.iter().map(|&k| steer(k)).collect();

    let mut amp_idx = vec![0usize; n];
    let mut phase_idx = vec![0usize; n - 1];
    let mut w = vec![Complex64::new(0.0, 0.0); n];
    let mut best: Option<GridBest> = None;
    let mut combo_index = 0u64;

    loop {
        let all_zero = amp_idx.iter().all(|&a| amplitudes[a] == 0.0);
        if !all_zero {
            w[0] = Complex64::new(amplitudes[amp_idx[0]], 0.0);
            for i in 1..n {
                w[i] = amplitudes[amp_idx[i]] * phase_phasors[phase_idx[i - 1]];
            }
            if normalize_onto_budget(&mut w) {
                let feasible = s_unintended
                    .iter()
                    .all(|s| gain_against_steering(&w, s) - threshold <= 0.0);
                if feasible {
                    let mut value = f64::INFINITY;
                    for s in &s_intended {
                        value = value.min(gain_against_steering(&w, s));
                    }
                    let better = match &best {
                        Some(b) => value > b.value,
                        None => true,
                    };
                    if better {
                        best = Some(GridBest {
                            value,
                            tuple_index,
                            combo_index,
                            w: w.clone(),
                            d: d.to_vec(),
                        });
                    }
                }
            }
        }
        combo_index += 1;
        if increment(&mut phase_idx, phase_phasors.len()) {
            continue;
        }
        if increment(&mut amp_idx, amplitudes.len()) {
            continue;
        }
        break;
    }
    best
}
