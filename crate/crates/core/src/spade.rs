//! Binary spatial-mode sorter: one detector behind the Gaussian mode
//! aligned with the known source, one collecting everything else.
//!
//! Under H₁ every photon lands in the Gaussian mode. Under H₂ the
//! Gaussian-mode fraction is `(1 + δ² + 2δc) / (2(1 + δc))`, which is the
//! `⟨0|ρ₂|0⟩` entry. A click on the non-Gaussian detector therefore proves
//! H₂; the rule only errs by missing H₂.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::helstrom::direct_error;
use crate::state::{check_prior, normalization, ScenarioParams};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Hypothesis {
    /// One source.
    H1,
    /// Two sources.
    H2,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Switch {
    On,
    Off,
}

/// Detector outcome `(gaussian, non-gaussian)` for one registered photon.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct DetectorEvent {
    pub gaussian_detector: Switch,
    pub nongaussian_detector: Switch,
}

impl DetectorEvent {
    pub const ON_OFF: Self = Self::new(Switch::On, Switch::Off);
    pub const ON_ON: Self = Self::new(Switch::On, Switch::On);
    pub const OFF_OFF: Self = Self::new(Switch::Off, Switch::Off);
    pub const OFF_ON: Self = Self::new(Switch::Off, Switch::On);

    pub const fn new(gaussian_detector: Switch, nongaussian_detector: Switch) -> Self {
        Self {
            gaussian_detector,
            nongaussian_detector,
        }
    }
}

/// Joint event probabilities for one hypothesis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ProbTable {
    pub p_on_off: f64,
    pub p_on_on: f64,
    pub p_off_off: f64,
    pub p_off_on: f64,
}

impl ProbTable {
    pub fn total(&self) -> f64 {
        self.p_on_off + self.p_on_on + self.p_off_off + self.p_off_on
    }

    pub fn prob(&self, event: DetectorEvent) -> f64 {
        match (event.gaussian_detector, event.nongaussian_detector) {
            (Switch::On, Switch::Off) => self.p_on_off,
            (Switch::On, Switch::On) => self.p_on_on,
            (Switch::Off, Switch::Off) => self.p_off_off,
            (Switch::Off, Switch::On) => self.p_off_on,
        }
    }

    /// Inverse-CDF draw from a uniform `u ∈ [0, 1)`.
    pub fn sample(&self, u: f64) -> DetectorEvent {
        let mut acc = self.p_on_off;
        if u < acc {
            return DetectorEvent::ON_OFF;
        }
        acc += self.p_on_on;
        if u < acc {
            return DetectorEvent::ON_ON;
        }
        acc += self.p_off_off;
        if u < acc {
            return DetectorEvent::OFF_OFF;
        }
        DetectorEvent::OFF_ON
    }
}

/// Fraction of H₂ photons that land in the Gaussian mode.
pub fn gaussian_fraction(delta: f64, c: f64) -> Result<f64> {
    let n = normalization(delta, c)?;
    let frac = n * (1.0 + delta * delta + 2.0 * delta * c);
    Ok(frac.clamp(0.0, 1.0))
}

pub fn event_probs(hypothesis: Hypothesis, delta: f64, c: f64) -> Result<ProbTable> {
    let stay = match hypothesis {
        Hypothesis::H1 => {
            normalization(delta, c)?;
            1.0
        }
        Hypothesis::H2 => gaussian_fraction(delta, c)?,
    };
    Ok(ProbTable {
        p_on_off: stay,
        p_on_on: 0.0,
        p_off_off: 0.0,
        p_off_on: 1.0 - stay,
    })
}

/// A non-Gaussian click means two sources; a Gaussian click means one.
pub fn decide(event: DetectorEvent) -> Result<Hypothesis> {
    match (event.gaussian_detector, event.nongaussian_detector) {
        (Switch::Off, Switch::On) => Ok(Hypothesis::H2),
        (Switch::On, Switch::Off) => Ok(Hypothesis::H1),
        (g, n) => Err(Error::InvalidEvent(format!(
            "({g:?}, {n:?}) cannot occur for a single registered photon"
        ))),
    }
}

/// Error probability of the fixed rule: `p · Pr(On, Off | H₂)`.
pub fn spade_error(delta: f64, c: f64, p: f64) -> Result<f64> {
    check_prior(p)?;
    Ok(p * gaussian_fraction(delta, c)?)
}

/// `D_err / P_err` for the mode sorter. A vanishing sorter error with a
/// nonzero prior error gives `+∞`; both vanishing gives 1.
pub fn spade_advantage(params: &ScenarioParams) -> Result<f64> {
    let d_err = direct_error(params.p())?;
    let p_err = spade_error(params.delta(), params.coherence(), params.p())?;
    Ok(match (d_err > 0.0, p_err > 0.0) {
        (_, true) => d_err / p_err,
        (true, false) => f64::INFINITY,
        (false, false) => 1.0,
    })
}
