//! Discriminating one point source from two partially coherent point sources
//! in the weak-source (single-photon) regime.
//!
//! The crate is split along the computation:
//!
//! - [`state`]: scenario parameters, PSF overlap and the two hypothesis
//!   density matrices in the orthogonalized two-dimensional basis.
//! - [`helstrom`]: Helstrom bound, direct-decision error, optimal advantage
//!   and the closed-form detection-useless boundary.
//! - [`spade`]: the binary Gaussian / non-Gaussian mode sorter, its decision
//!   rule and error probability.
//! - [`montecarlo`]: seeded per-photon simulation of the mode sorter.
//! - [`oracle`]: brute-force reconstruction on a sampled spatial grid, used to
//!   cross-check the closed forms.
//! - [`sweep`]: parameter grids and fixed-format output rows.

pub mod error;
pub mod helstrom;
pub mod montecarlo;
pub mod oracle;
pub mod spade;
pub mod state;
pub mod sweep;

pub use error::{Error, Result};
pub use helstrom::BoundReport;
pub use spade::{DetectorEvent, Hypothesis, ProbTable, Switch};
pub use state::{DensityMatrix2, Observable2, ScenarioParams};

/// Tolerance for identities that hold exactly in real arithmetic.
pub const EXACT_TOL: f64 = 1e-12;

/// Relative tolerance for classifying an advantage as exactly one.
pub const UNIT_ADVANTAGE_TOL: f64 = 1e-10;
