//! Signal model of a linear array with movable elements.
//!
//! Antennas sit at positions `d = [d_1, ..., d_N]` along a line. A planar
//! wavefront arriving from angle `theta` (measured against the array axis,
//! so 0 and 180 degrees are endfire and 90 degrees is broadside) reaches
//! element `i` with phase lead `2*pi/wl * d_i * cos(theta)` relative to the
//! origin, where `wl` is the carrier wavelength. Collecting those phasors
//! gives the steering vector `s(d, theta)`; a receive weight vector `w`
//! then yields the beamforming gain `|w^H s|^2`.
//!
//! Throughout the crate positions are stored in wavelength units, so the
//! gain routines fix `wl = 1`. [`steering_vector`] takes an explicit
//! wavelength for callers holding positions in other units.
//!
//! With `|s_i| = 1` the gain is bounded by `N * |w|^2` (Cauchy-Schwarz),
//! reached when `w` is proportional to `s`.

use std::f64::consts::TAU;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Element positions along the array axis, one entry per antenna.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct PositionVector(Vec<f64>);

impl PositionVector {
    /// Wraps raw positions. Entries must be finite and the vector non-empty;
    /// ordering and spacing are deliberately not enforced here, since
    /// candidates mid-search routinely violate them.
    pub fn new(positions: Vec<f64>) -> Result<Self> {
        if positions.is_empty() {
            return Err(Error::invalid("position vector must not be empty"));
        }
        if let Some(x) = positions.iter().find(|x| !x.is_finite()) {
            return Err(Error::invalid(format!("non-finite position {x}")));
        }
        Ok(PositionVector(positions))
    }

    pub(crate) fn from_raw(positions: Vec<f64>) -> Self {
        PositionVector(positions)
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.0
    }
}

impl TryFrom<Vec<f64>> for PositionVector {
    type Error = Error;

    fn try_from(v: Vec<f64>) -> Result<Self> {
        PositionVector::new(v)
    }
}

impl From<PositionVector> for Vec<f64> {
    fn from(v: PositionVector) -> Vec<f64> {
        v.0
    }
}

/// Complex receive weights, one entry per antenna.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Complex64>", into = "Vec<Complex64>")]
pub struct BeamformingVector(Vec<Complex64>);

impl BeamformingVector {
    /// Wraps raw weights. Entries must be finite and the vector non-empty;
    /// the unit-norm budget is a problem constraint, not a type invariant.
    pub fn new(weights: Vec<Complex64>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::invalid("weight vector must not be empty"));
        }
        if let Some(w) = weights
            .iter()
            .find(|w| !w.re.is_finite() || !w.im.is_finite())
        {
            return Err(Error::invalid(format!("non-finite weight {w}")));
        }
        Ok(BeamformingVector(weights))
    }

    pub(crate) fn from_raw(weights: Vec<Complex64>) -> Self {
        BeamformingVector(weights)
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn into_vec(self) -> Vec<Complex64> {
        self.0
    }

    /// Euclidean norm of the weight vector.
    pub fn norm(&self) -> f64 {
        self.0.iter().map(Complex64::norm_sqr).sum::<f64>().sqrt()
    }
}

impl TryFrom<Vec<Complex64>> for BeamformingVector {
    type Error = Error;

    fn try_from(v: Vec<Complex64>) -> Result<Self> {
        BeamformingVector::new(v)
    }
}

impl From<BeamformingVector> for Vec<Complex64> {
    fn from(v: BeamformingVector) -> Vec<Complex64> {
        v.0
    }
}

/// Unit-modulus array response for one arrival angle. Only produced by
/// [`steering_vector`], so every entry has modulus 1 up to rounding.
#[derive(Clone, Debug, PartialEq)]
pub struct SteeringVector(Vec<Complex64>);

impl SteeringVector {
    pub fn as_slice(&self) -> &[Complex64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn into_vec(self) -> Vec<Complex64> {
        self.0
    }
}

fn check_angle(theta_deg: f64) -> Result<()> {
    if !theta_deg.is_finite() || !(0.0..=180.0).contains(&theta_deg) {
        return Err(Error::invalid(format!(
            "angle {theta_deg} outside [0, 180] degrees"
        )));
    }
    Ok(())
}

/// Array response `s_i = exp(j * 2*pi/wavelength * d_i * cos(theta))` for a
/// plane wave from `theta_deg`. Positions and `wavelength` must share one
/// length unit.
pub fn steering_vector(
    positions: &PositionVector,
    theta_deg: f64,
    wavelength: f64,
) -> Result<SteeringVector> {
    check_angle(theta_deg)?;
    if !wavelength.is_finite() || wavelength <= 0.0 {
        return Err(Error::invalid(format!(
            "wavelength {wavelength} must be positive"
        )));
    }
    let k = TAU / wavelength * theta_deg.to_radians().cos();
    let entries = positions
        .as_slice()
        .iter()
        .map(|&d| {
            let (sin, cos) = (k * d).sin_cos();
            Complex64::new(cos, sin)
        })
        .collect();
    Ok(SteeringVector(entries))
}

/// Shared kernel: `|w^H s|^2` with the steering phasors generated on the fly
/// from `k = 2*pi*cos(theta)` and wavelength-unit positions. Kept free of
/// allocation; this is the innermost call of the whole search.
pub(crate) fn gain_with_wavenumber(w: &[Complex64], d: &[f64], k: f64) -> f64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for (wi, &di) in w.iter().zip(d) {
        let (sin, cos) = (k * di).sin_cos();
        acc += wi.conj() * Complex64::new(cos, sin);
    }
    acc.norm_sqr()
}

/// Same accumulation as [`gain_with_wavenumber`], but against precomputed
/// steering phasors. The two agree bit for bit when the phasors came from
/// the same `k * d` products.
pub(crate) fn gain_against_steering(w: &[Complex64], s: &[Complex64]) -> f64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for (wi, si) in w.iter().zip(s) {
        acc += wi.conj() * si;
    }
    acc.norm_sqr()
}

/// Beamforming gain `|w^H s(d, theta)|^2` for wavelength-unit positions.
pub fn beamforming_gain(
    weights: &BeamformingVector,
    positions: &PositionVector,
    theta_deg: f64,
) -> Result<f64> {
    if weights.len() != positions.len() {
        return Err(Error::invalid(format!(
            "{} weights against {} positions",
            weights.len(),
            positions.len()
        )));
    }
    check_angle(theta_deg)?;
    let k = TAU * theta_deg.to_radians().cos();
    Ok(gain_with_wavenumber(
        weights.as_slice(),
        positions.as_slice(),
        k,
    ))
}

/// Gain evaluated over a grid of angles, returned as `(angle_deg, gain)`
/// rows in grid order.
pub fn pattern_sweep(
    weights: &BeamformingVector,
    positions: &PositionVector,
    grid_deg: &[f64],
) -> Result<Vec<(f64, f64)>> {
    if grid_deg.is_empty() {
        return Err(Error::invalid("empty angle grid"));
    }
    grid_deg
        .iter()
        .map(|&theta| Ok((theta, beamforming_gain(weights, positions, theta)?)))
        .collect()
}
