//! Brute-force cross-check of the closed forms.
//!
//! The PSF states are sampled on a uniform grid, inner products use the
//! trapezoid rule, the two-source operator is assembled from its rank-two
//! definition, and the Helstrom operator is diagonalized with a Jacobi
//! rotation. Nothing here calls into the closed-form `state`/`helstrom` code
//! except for parameter validation.

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::state::{DensityMatrix2, ScenarioParams};

pub const DEFAULT_GRID_POINTS: usize = 4001;
pub const MIN_GRID_POINTS: usize = 1001;
/// Margin beyond each source, in PSF widths.
pub const DEFAULT_MARGIN: f64 = 8.0;
pub const MAX_SPACING: f64 = 0.02;

/// Uniform grid in units of the PSF width σ = 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpatialGrid {
    pub x_min: f64,
    pub x_max: f64,
    pub n_points: usize,
}

impl SpatialGrid {
    /// `[−8, 8 + k]` with `n_points` samples, symmetric about `k/2`.
    pub fn for_separation(k: f64, n_points: usize) -> Result<Self> {
        let grid = Self {
            x_min: -DEFAULT_MARGIN,
            x_max: DEFAULT_MARGIN + k,
            n_points,
        };
        grid.validate(k)?;
        Ok(grid)
    }

    pub fn spacing(&self) -> f64 {
        (self.x_max - self.x_min) / (self.n_points - 1) as f64
    }

    /// Checks that the grid resolves both sources at separation `k`.
    pub fn validate(&self, k: f64) -> Result<()> {
        if self.n_points < MIN_GRID_POINTS {
            return Err(Error::Accuracy(format!(
                "{} grid points, need at least {MIN_GRID_POINTS}",
                self.n_points
            )));
        }
        let extent = self.x_max - self.x_min;
        if extent.is_nan() || extent < 12.0 + k {
            return Err(Error::Accuracy(format!(
                "grid extent {extent} < 12 + k = {}",
                12.0 + k
            )));
        }
        if self.x_min > -6.0 || self.x_max < k + 6.0 {
            return Err(Error::Accuracy(format!(
                "grid [{}, {}] does not cover both sources at 0 and {k}",
                self.x_min, self.x_max
            )));
        }
        if self.spacing() > MAX_SPACING {
            return Err(Error::Accuracy(format!(
                "grid spacing {} exceeds {MAX_SPACING}",
                self.spacing()
            )));
        }
        Ok(())
    }

    pub fn points(&self) -> impl Iterator<Item = f64> + '_ {
        let h = self.spacing();
        (0..self.n_points).map(move |i| self.x_min + i as f64 * h)
    }

    fn weight(&self, i: usize) -> f64 {
        let h = self.spacing();
        if i == 0 || i + 1 == self.n_points {
            0.5 * h
        } else {
            h
        }
    }

    /// Trapezoid-rule `∫ a(x) b(x) dx`.
    pub fn inner(&self, a: &[f64], b: &[f64]) -> f64 {
        a.iter()
            .zip(b)
            .enumerate()
            .map(|(i, (x, y))| self.weight(i) * x * y)
            .sum()
    }
}

/// Sampled real wavefunction.
#[derive(Debug, Clone, PartialEq)]
pub struct GridState {
    pub amplitudes: Vec<f64>,
}

impl GridState {
    /// Gaussian PSF amplitude `(2π)^(−1/4) exp(−(x − center)²/4)`,
    /// renormalized on the grid.
    pub fn psf(grid: &SpatialGrid, center: f64) -> Self {
        let amp = (2.0 * PI).powf(-0.25);
        let raw: Vec<f64> = grid
            .points()
            .map(|x| amp * (-(x - center) * (x - center) / 4.0).exp())
            .collect();
        let norm = grid.inner(&raw, &raw).sqrt();
        Self {
            amplitudes: raw.into_iter().map(|a| a / norm).collect(),
        }
    }

    pub fn norm_sq(&self, grid: &SpatialGrid) -> f64 {
        grid.inner(&self.amplitudes, &self.amplitudes)
    }
}

pub fn grid_overlap(k: f64, grid: &SpatialGrid) -> Result<f64> {
    grid.validate(k)?;
    let psi0 = GridState::psf(grid, 0.0);
    let psis = GridState::psf(grid, k);
    Ok(grid.inner(&psi0.amplitudes, &psis.amplitudes))
}

/// Below this residual norm the two PSF states are treated as identical.
const SPAN_TOL: f64 = 1e-9;

/// The two PSF states and an orthonormal basis of their span.
struct Span {
    grid: SpatialGrid,
    psi0: Vec<f64>,
    psis: Vec<f64>,
    basis: Vec<Vec<f64>>,
}

impl Span {
    fn new(k: f64, grid: &SpatialGrid) -> Result<Self> {
        grid.validate(k)?;
        let psi0 = GridState::psf(grid, 0.0).amplitudes;
        let psis = GridState::psf(grid, k).amplitudes;
        let e0 = psi0.clone();
        // classical Gram-Schmidt plus one re-orthogonalization pass
        let mut r = psis.clone();
        for _ in 0..2 {
            let proj = grid.inner(&e0, &r);
            r.iter_mut().zip(&e0).for_each(|(ri, ei)| *ri -= proj * ei);
        }
        let rn = grid.inner(&r, &r).sqrt();
        let mut basis = vec![e0];
        if rn > SPAN_TOL {
            basis.push(r.into_iter().map(|v| v / rn).collect());
        }
        Ok(Self {
            grid: *grid,
            psi0,
            psis,
            basis,
        })
    }

    /// `⟨e_i| (Σ_t w_t |u_t⟩⟨v_t|) |e_j⟩` over the orthonormal basis, zero
    /// padded to 2×2.
    fn project(&self, terms: &[(f64, &[f64], &[f64])]) -> [[f64; 2]; 2] {
        let g = &self.grid;
        let mut m = [[0.0; 2]; 2];
        for (i, ei) in self.basis.iter().enumerate() {
            for (j, ej) in self.basis.iter().enumerate() {
                m[i][j] = terms
                    .iter()
                    .map(|(w, u, v)| w * g.inner(ei, u) * g.inner(v, ej))
                    .sum();
            }
        }
        m
    }

    /// Unnormalized two-source operator, `|ψ₀⟩⟨ψ₀| + |ψ_s⟩⟨ψ_s| + c(...)`.
    fn two_source_terms(&self, c: f64) -> [(f64, &[f64], &[f64]); 4] {
        [
            (1.0, &self.psi0, &self.psi0),
            (1.0, &self.psis, &self.psis),
            (c, &self.psi0, &self.psis),
            (c, &self.psis, &self.psi0),
        ]
    }
}

/// Two-source density matrix reconstructed on the grid, in the numerically
/// orthogonalized basis.
pub fn grid_rho2(k: f64, c: f64, grid: &SpatialGrid) -> Result<DensityMatrix2> {
    let span = Span::new(k, grid)?;
    let m = span.project(&span.two_source_terms(c));
    let trace = m[0][0] + m[1][1];
    if trace <= 1e-12 {
        return Err(Error::Degenerate {
            delta: grid_overlap(k, grid)?,
            c,
            denominator: trace / 2.0,
        });
    }
    let sym = 0.5 * (m[0][1] + m[1][0]);
    DensityMatrix2::new(m[0][0] / trace, sym / trace, m[1][1] / trace)
}

/// Eigenvalues of a symmetric 2×2 matrix via one Jacobi rotation.
pub fn jacobi_eigenvalues(a: f64, b: f64, d: f64) -> (f64, f64) {
    if b == 0.0 {
        return (a.min(d), a.max(d));
    }
    let angle = 0.5 * (2.0 * b).atan2(a - d);
    let (s, c) = angle.sin_cos();
    let l1 = a * c * c + 2.0 * b * s * c + d * s * s;
    let l2 = a * s * s - 2.0 * b * s * c + d * c * c;
    (l1.min(l2), l1.max(l2))
}

/// Helstrom bound from the grid-space operator `pρ₂ − (1 − p)ρ₁`.
pub fn grid_helstrom(params: &ScenarioParams, grid: &SpatialGrid) -> Result<f64> {
    let (k, c, p) = (params.k(), params.coherence(), params.p());
    let span = Span::new(k, grid)?;
    let two = span.two_source_terms(c);
    let unnormalized = span.project(&two);
    let n = 1.0 / (unnormalized[0][0] + unnormalized[1][1]);
    let mut terms: Vec<(f64, &[f64], &[f64])> =
        two.iter().map(|&(w, u, v)| (p * n * w, u, v)).collect();
    terms.push((-(1.0 - p), &span.psi0, &span.psi0));
    let m = span.project(&terms);
    let (lo, hi) = jacobi_eigenvalues(m[0][0], 0.5 * (m[0][1] + m[1][0]), m[1][1]);
    Ok((0.5 * (1.0 - lo.abs() - hi.abs())).clamp(0.0, 0.5))
}

/// Maximum discrepancies between the grid oracle and the closed forms.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct VerifyReport {
    pub grid_points: usize,
    pub n_scenarios: usize,
    pub max_overlap_diff: f64,
    pub max_rho2_diff: f64,
    pub max_helstrom_diff: f64,
}

impl VerifyReport {
    pub fn passes(&self, tol: f64) -> bool {
        self.max_overlap_diff <= tol && self.max_rho2_diff <= tol && self.max_helstrom_diff <= tol
    }
}

/// `(γ, θ)` realizing a signed effective coherence `c`.
pub fn gamma_theta_for(c: f64) -> (f64, f64) {
    if c < 0.0 {
        (-c, PI)
    } else {
        (c, 0.0)
    }
}

fn linspace(lo: f64, hi: f64, n: usize) -> impl Iterator<Item = f64> {
    (0..n).map(move |i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
}

/// Runs the 5×5×5 equivalence grid over `k ∈ [0, 4]`, `c ∈ [−0.9, 0.9]`,
/// `p ∈ [0.1, 0.9]`.
pub fn verify_grid(n_points: usize) -> Result<VerifyReport> {
    use crate::helstrom::helstrom_bound;
    use crate::state::rho2;

    let mut report = VerifyReport {
        grid_points: n_points,
        n_scenarios: 0,
        max_overlap_diff: 0.0,
        max_rho2_diff: 0.0,
        max_helstrom_diff: 0.0,
    };
    for k in linspace(0.0, 4.0, 5) {
        let grid = SpatialGrid::for_separation(k, n_points)?;
        let delta = (-k * k / 8.0).exp();
        report.max_overlap_diff = report
            .max_overlap_diff
            .max((grid_overlap(k, &grid)? - delta).abs());
        for c in linspace(-0.9, 0.9, 5) {
            let (gamma, theta) = gamma_theta_for(c);
            let closed = rho2(delta, gamma * theta.cos())?;
            let numeric = grid_rho2(k, gamma * theta.cos(), &grid)?;
            report.max_rho2_diff = report
                .max_rho2_diff
                .max(closed.as_observable().max_abs_diff(numeric.as_observable()));
            for p in linspace(0.1, 0.9, 5) {
                let params = ScenarioParams::new(k, gamma, theta, p)?;
                let diff = (grid_helstrom(&params, &grid)? - helstrom_bound(&params)?).abs();
                report.max_helstrom_diff = report.max_helstrom_diff.max(diff);
                report.n_scenarios += 1;
            }
        }
    }
    Ok(report)
}
