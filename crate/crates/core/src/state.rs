//! Scenario parameters and the two hypothesis states.
//!
//! Both single-photon PSF states live in the two-dimensional span of
//! `|ψ₀⟩` and `|ψ_s⟩`. After Gram-Schmidt, `|0⟩ = |ψ₀⟩` and
//! `|1⟩ ∝ |ψ_s⟩ − δ|0⟩`, every operator in the problem is a real symmetric
//! 2×2 matrix, stored here as three numbers.

use std::f64::consts::TAU;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::EXACT_TOL;

/// Physical and statistical configuration of one discrimination problem.
///
/// `p` is the prior probability of the two-source hypothesis H₂.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScenarioParams {
    k: f64,
    gamma: f64,
    theta: f64,
    p: f64,
}

impl ScenarioParams {
    /// Validates the parameters and rejects the single degenerate point
    /// `k = 0, γ = 1, θ = π` where the normalization diverges.
    pub fn new(k: f64, gamma: f64, theta: f64, p: f64) -> Result<Self> {
        check_separation(k)?;
        check_gamma(gamma)?;
        if !theta.is_finite() || !(0.0..TAU).contains(&theta) {
            return Err(Error::Domain(format!(
                "theta must lie in [0, 2pi), got {theta}"
            )));
        }
        check_prior(p)?;
        let params = Self { k, gamma, theta, p };
        normalization(params.delta(), params.coherence())?;
        Ok(params)
    }

    pub fn k(&self) -> f64 {
        self.k
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    /// Same scene with a different prior.
    pub fn with_prior(&self, p: f64) -> Result<Self> {
        check_prior(p)?;
        Ok(Self { p, ..*self })
    }

    /// PSF overlap δ for this separation.
    pub fn delta(&self) -> f64 {
        (-self.k * self.k / 8.0).exp()
    }

    /// Effective coherence `c = γ·cosθ`.
    pub fn coherence(&self) -> f64 {
        self.gamma * self.theta.cos()
    }
}

fn check_separation(k: f64) -> Result<()> {
    if !k.is_finite() || k < 0.0 {
        return Err(Error::Domain(format!(
            "separation k must be finite and >= 0, got {k}"
        )));
    }
    Ok(())
}

fn check_gamma(gamma: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&gamma) {
        return Err(Error::Domain(format!(
            "gamma must lie in [0, 1], got {gamma}"
        )));
    }
    Ok(())
}

pub(crate) fn check_prior(p: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::Domain(format!(
            "prior p must lie in [0, 1], got {p}"
        )));
    }
    Ok(())
}

fn check_delta_c(delta: f64, c: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&delta) {
        return Err(Error::Domain(format!(
            "overlap delta must lie in [0, 1], got {delta}"
        )));
    }
    if !(-1.0..=1.0).contains(&c) {
        return Err(Error::Domain(format!(
            "effective coherence c must lie in [-1, 1], got {c}"
        )));
    }
    Ok(())
}

/// Overlap `⟨ψ_s|ψ₀⟩ = exp(−k²/8)` of two Gaussian PSF states `k` widths apart.
pub fn overlap(k: f64) -> Result<f64> {
    check_separation(k)?;
    Ok((-k * k / 8.0).exp())
}

pub fn effective_coherence(gamma: f64, theta: f64) -> Result<f64> {
    check_gamma(gamma)?;
    if !theta.is_finite() {
        return Err(Error::Domain(format!("theta must be finite, got {theta}")));
    }
    Ok(gamma * theta.cos())
}

/// Trace normalization `N = 1 / (2(1 + δc))` of the two-source state.
pub fn normalization(delta: f64, c: f64) -> Result<f64> {
    check_delta_c(delta, c)?;
    let denominator = 1.0 + delta * c;
    if denominator <= EXACT_TOL {
        return Err(Error::Degenerate {
            delta,
            c,
            denominator,
        });
    }
    Ok(0.5 / denominator)
}

/// Real symmetric 2×2 matrix `[[a11, a12], [a12, a22]]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Observable2 {
    pub a11: f64,
    pub a12: f64,
    pub a22: f64,
}

impl Observable2 {
    pub fn new(a11: f64, a12: f64, a22: f64) -> Result<Self> {
        if !(a11.is_finite() && a12.is_finite() && a22.is_finite()) {
            return Err(Error::Domain(format!(
                "matrix entries must be finite, got [{a11}, {a12}, {a22}]"
            )));
        }
        Ok(Self { a11, a12, a22 })
    }

    pub fn trace(&self) -> f64 {
        self.a11 + self.a22
    }

    pub fn det(&self) -> f64 {
        self.a11 * self.a22 - self.a12 * self.a12
    }

    pub fn scale(&self, s: f64) -> Self {
        Self {
            a11: s * self.a11,
            a12: s * self.a12,
            a22: s * self.a22,
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self {
            a11: self.a11 - other.a11,
            a12: self.a12 - other.a12,
            a22: self.a22 - other.a22,
        }
    }

    /// Largest entrywise absolute difference.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        (self.a11 - other.a11)
            .abs()
            .max((self.a12 - other.a12).abs())
            .max((self.a22 - other.a22).abs())
    }
}

/// A unit-trace, positive-semidefinite [`Observable2`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(transparent)]
pub struct DensityMatrix2(Observable2);

impl DensityMatrix2 {
    /// Checks unit trace and positivity to within [`EXACT_TOL`].
    pub fn new(a11: f64, a12: f64, a22: f64) -> Result<Self> {
        let m = Observable2::new(a11, a12, a22)?;
        if (m.trace() - 1.0).abs() > EXACT_TOL {
            return Err(Error::Domain(format!(
                "density matrix trace is {}, not 1",
                m.trace()
            )));
        }
        if a11 < -EXACT_TOL || a22 < -EXACT_TOL || m.det() < -EXACT_TOL {
            return Err(Error::Domain(format!(
                "density matrix [{a11}, {a12}, {a22}] is not positive semidefinite"
            )));
        }
        Ok(Self(m))
    }

    pub fn as_observable(&self) -> &Observable2 {
        &self.0
    }

    pub fn a11(&self) -> f64 {
        self.0.a11
    }

    pub fn a12(&self) -> f64 {
        self.0.a12
    }

    pub fn a22(&self) -> f64 {
        self.0.a22
    }
}

/// Single-source state `|ψ₀⟩⟨ψ₀| = |0⟩⟨0|`.
pub fn rho1() -> DensityMatrix2 {
    DensityMatrix2(Observable2 {
        a11: 1.0,
        a12: 0.0,
        a22: 0.0,
    })
}

/// Two-source state `N(|ψ₀⟩⟨ψ₀| + |ψ_s⟩⟨ψ_s| + c(|ψ₀⟩⟨ψ_s| + |ψ_s⟩⟨ψ₀|))`
/// expressed in the orthogonalized basis.
pub fn rho2(delta: f64, c: f64) -> Result<DensityMatrix2> {
    let n = normalization(delta, c)?;
    let one_minus_sq = 1.0 - delta * delta;
    let a22 = n * one_minus_sq;
    // N(1 + δ² + 2δc) = 1 − N(1 − δ²); this form keeps the trace exact and
    // gives ρ₂ = ρ₁ bit-for-bit at δ = 1
    let a11 = 1.0 - a22;
    let a12 = n * (delta + c) * one_minus_sq.sqrt();
    DensityMatrix2::new(a11, a12, a22)
}

/// Helstrom operator `Λ = p·ρ₂ − (1 − p)·ρ₁`.
pub fn lambda_matrix(params: &ScenarioParams) -> Result<Observable2> {
    let p = params.p();
    let r2 = rho2(params.delta(), params.coherence())?;
    Ok(r2
        .as_observable()
        .scale(p)
        .sub(&rho1().as_observable().scale(1.0 - p)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_3, PI};

    #[test]
    fn overlap_values() {
        assert_eq!(overlap(0.0).unwrap(), 1.0);
        assert!(overlap(10.0).unwrap() < 1e-5);
        assert!((overlap(10.0).unwrap() - (-12.5f64).exp()).abs() < 1e-18);
        assert!((overlap(2.0).unwrap() - 0.606_530_66).abs() < 1e-8);
        assert!(overlap(-1.0).is_err());
        assert!(overlap(f64::NAN).is_err());
        assert!(overlap(f64::INFINITY).is_err());
    }

    #[test]
    fn coherence_values() {
        assert!((effective_coherence(0.1, 0.0).unwrap() - 0.1).abs() < 1e-15);
        assert!((effective_coherence(0.9, PI).unwrap() + 0.9).abs() < 1e-15);
        assert!((effective_coherence(0.9, FRAC_PI_3).unwrap() - 0.45).abs() < 1e-15);
        assert!(effective_coherence(1.1, 0.0).is_err());
        assert!(effective_coherence(-0.1, 0.0).is_err());
    }

    #[test]
    fn normalization_values() {
        assert_eq!(normalization(1.0, 0.0).unwrap(), 0.5);
        // 1/(2(1 + 0.606531·0.45))
        assert!((normalization(0.606531, 0.45).unwrap() - 0.392_791_8).abs() < 1e-7);
        // guard is at 1e-12: this is steep but finite
        assert!((normalization(1.0, -0.999999).unwrap() - 5.0e5).abs() < 1e-2);
        assert!(matches!(
            normalization(1.0, -1.0),
            Err(Error::Degenerate { .. })
        ));
        assert!(normalization(1.0, -1.5).is_err());
    }

    #[test]
    fn rho1_is_projector() {
        let r = rho1();
        assert_eq!((r.a11(), r.a12(), r.a22()), (1.0, 0.0, 0.0));
        assert_eq!(r.as_observable().trace(), 1.0);
        assert_eq!(r.as_observable().det(), 0.0);
    }

    #[test]
    fn rho2_limits() {
        for c in [-0.99, -0.3, 0.0, 0.5, 1.0] {
            let r = rho2(1.0, c).unwrap();
            assert!(r.as_observable().max_abs_diff(rho1().as_observable()) <= EXACT_TOL);
        }
        let r = rho2(0.0, 0.0).unwrap();
        assert_eq!((r.a11(), r.a12(), r.a22()), (0.5, 0.0, 0.5));
    }

    #[test]
    fn rho2_at_k2_incoherent() {
        let r = rho2((-0.5f64).exp(), 0.0).unwrap();
        assert!((r.a11() - 0.683_939_72).abs() < 1e-6);
        assert!((r.a12() - 0.241_114_16).abs() < 1e-6);
        assert!((r.a22() - 0.316_060_28).abs() < 1e-6);
    }

    #[test]
    fn lambda_values() {
        let pr = ScenarioParams::new(2.0, 0.0, 0.0, 0.5).unwrap();
        let l = lambda_matrix(&pr).unwrap();
        assert!((l.a11 + 0.158_030_14).abs() < 1e-6);
        assert!((l.a12 - 0.120_557_08).abs() < 1e-6);
        assert!((l.a22 - 0.158_030_14).abs() < 1e-6);

        let one = ScenarioParams::new(1.3, 0.4, 1.0, 1.0).unwrap();
        let r2 = rho2(one.delta(), one.coherence()).unwrap();
        assert_eq!(lambda_matrix(&one).unwrap(), *r2.as_observable());

        let zero = one.with_prior(0.0).unwrap();
        let l0 = lambda_matrix(&zero).unwrap();
        assert_eq!((l0.a11, l0.a12, l0.a22), (-1.0, 0.0, 0.0));
    }

    #[test]
    fn rejects_bad_params() {
        assert!(ScenarioParams::new(-0.1, 0.5, 0.0, 0.5).is_err());
        assert!(ScenarioParams::new(1.0, 1.5, 0.0, 0.5).is_err());
        assert!(ScenarioParams::new(1.0, 0.5, 7.0, 0.5).is_err());
        assert!(ScenarioParams::new(1.0, 0.5, 0.0, 1.2).is_err());
        assert!(matches!(
            ScenarioParams::new(0.0, 1.0, PI, 0.5),
            Err(Error::Degenerate { .. })
        ));
        // same phase but separated sources: fine
        assert!(ScenarioParams::new(1.0, 1.0, PI, 0.5).is_ok());
    }
}
