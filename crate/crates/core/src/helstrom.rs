//! Helstrom bound and the quantum-optimal detection advantage.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::state::{check_prior, lambda_matrix, normalization, Observable2, ScenarioParams};
use crate::{EXACT_TOL, UNIT_ADVANTAGE_TOL};

/// Optimal vs. prior-only error probabilities at one scenario.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundReport {
    pub o_err: f64,
    pub d_err: f64,
    pub a_qod: f64,
    pub useless: bool,
}

/// Eigenvalues of a symmetric 2×2 matrix, ascending.
pub fn eigenvalues_sym2(m: &Observable2) -> Result<(f64, f64)> {
    let m = Observable2::new(m.a11, m.a12, m.a22)?;
    let mean = 0.5 * m.trace();
    let radius = (0.5 * (m.a11 - m.a22)).hypot(m.a12);
    Ok((mean - radius, mean + radius))
}

/// Sum of absolute eigenvalues.
pub fn trace_norm(m: &Observable2) -> Result<f64> {
    let (lo, hi) = eigenvalues_sym2(m)?;
    Ok(lo.abs() + hi.abs())
}

/// Minimum error probability over all measurements, `(1 − ‖Λ‖₁)/2`.
///
/// Clamped into `[0, min(p, 1 − p)]`: `‖Λ‖₁ ≥ |2p − 1|` exactly, so anything
/// above the direct-decision error is rounding.
pub fn helstrom_bound(params: &ScenarioParams) -> Result<f64> {
    let norm = trace_norm(&lambda_matrix(params)?)?;
    Ok((0.5 * (1.0 - norm)).clamp(0.0, direct_error(params.p())?))
}

/// Error of deciding from the prior alone, `min(p, 1 − p)`.
pub fn direct_error(p: f64) -> Result<f64> {
    check_prior(p)?;
    Ok(p.min(1.0 - p))
}

fn ratio(d_err: f64, o_err: f64) -> f64 {
    match (d_err > 0.0, o_err > 0.0) {
        (_, true) => d_err / o_err,
        (true, false) => f64::INFINITY,
        // both vanish at a deterministic prior
        (false, false) => 1.0,
    }
}

/// `D_err / O_err`. Returns `+∞` when only the bound vanishes and 1 when
/// both errors vanish.
pub fn qod_advantage(params: &ScenarioParams) -> Result<f64> {
    Ok(ratio(direct_error(params.p())?, helstrom_bound(params)?))
}

/// Prior above which no measurement beats the direct decision,
/// `p* = (2 + 2δc) / (3 + 2δc − c²)`.
pub fn useless_boundary(delta: f64, c: f64) -> Result<f64> {
    normalization(delta, c)?;
    let dc = delta * c;
    Ok((2.0 + 2.0 * dc) / (3.0 + 2.0 * dc - c * c))
}

/// Closed-form test `p ≥ p*`. The boundary itself counts as useless.
pub fn in_useless_region(params: &ScenarioParams) -> Result<bool> {
    let p_star = useless_boundary(params.delta(), params.coherence())?;
    let useless = params.p() >= p_star;
    if cfg!(debug_assertions) && params.p() > p_star + UNIT_ADVANTAGE_TOL {
        let (lo, _) = eigenvalues_sym2(&lambda_matrix(params)?)?;
        debug_assert!(
            lo >= -EXACT_TOL,
            "Λ has eigenvalue {lo} above p* = {p_star}"
        );
    }
    Ok(useless)
}

pub fn bound_report(params: &ScenarioParams) -> Result<BoundReport> {
    let o_err = helstrom_bound(params)?;
    let d_err = direct_error(params.p())?;
    let a_qod = ratio(d_err, o_err);
    let useless = in_useless_region(params)? || (a_qod - 1.0).abs() <= UNIT_ADVANTAGE_TOL;
    Ok(BoundReport {
        o_err,
        d_err,
        a_qod,
        useless,
    })
}

/// Fails when the optimal error exceeds the prior-only error, which would
/// mean the state construction is broken.
pub fn check_optimality(report: &BoundReport) -> Result<()> {
    if report.o_err > report.d_err + EXACT_TOL {
        return Err(Error::Accuracy(format!(
            "Helstrom bound {} exceeds direct error {}",
            report.o_err, report.d_err
        )));
    }
    Ok(())
}
