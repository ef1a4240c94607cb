//! Per-photon simulation of the binary mode sorter.
//!
//! Trials are split into fixed-size shards. Shard `i` draws from a ChaCha8
//! stream keyed by `(seed, i)`, so a run is bit-reproducible regardless of how
//! many worker threads execute it.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Geometric};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::spade::{decide, event_probs, spade_error, DetectorEvent, Hypothesis, ProbTable};
use crate::state::ScenarioParams;

/// Registered photons per RNG shard.
pub const SHARD_SIZE: u64 = 1 << 16;

/// Largest mean photon number accepted for vacuum modeling.
pub const MAX_EPSILON: f64 = 0.1;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrialConfig {
    pub params: ScenarioParams,
    pub n_photons: u64,
    pub seed: u64,
    /// Mean photon number per emission attempt; `None` skips vacuum modeling.
    pub epsilon: Option<f64>,
}

impl TrialConfig {
    pub fn new(params: ScenarioParams, n_photons: u64, seed: u64) -> Self {
        Self {
            params,
            n_photons,
            seed,
            epsilon: None,
        }
    }

    pub fn with_epsilon(mut self, epsilon: f64) -> Self {
        self.epsilon = Some(epsilon);
        self
    }

    fn validate(&self) -> Result<()> {
        if self.n_photons == 0 {
            return Err(Error::Domain("n_photons must be at least 1".into()));
        }
        if let Some(eps) = self.epsilon {
            if !(eps > 0.0 && eps <= MAX_EPSILON) {
                return Err(Error::Domain(format!(
                    "epsilon must lie in (0, {MAX_EPSILON}], got {eps}"
                )));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EmpiricalResult {
    pub n_trials: u64,
    pub n_errors: u64,
    /// Emission attempts including vacuum; equals `n_trials` without vacuum modeling.
    pub n_emissions: u64,
    pub error_rate: f64,
    pub std_err: f64,
    pub analytic_p_err: f64,
    pub z_score: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Trial {
    pub truth: Hypothesis,
    pub event: DetectorEvent,
    pub decision: Hypothesis,
}

/// Event tables for both hypotheses, computed once per run.
#[derive(Debug, Clone, Copy)]
struct Tables {
    p: f64,
    h1: ProbTable,
    h2: ProbTable,
}

impl Tables {
    fn new(params: &ScenarioParams) -> Result<Self> {
        let (delta, c) = (params.delta(), params.coherence());
        Ok(Self {
            p: params.p(),
            h1: event_probs(Hypothesis::H1, delta, c)?,
            h2: event_probs(Hypothesis::H2, delta, c)?,
        })
    }

    fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> Trial {
        let truth = if rng.random::<f64>() < self.p {
            Hypothesis::H2
        } else {
            Hypothesis::H1
        };
        let table = match truth {
            Hypothesis::H1 => &self.h1,
            Hypothesis::H2 => &self.h2,
        };
        let event = table.sample(rng.random::<f64>());
        let decision = decide(event).expect("single-photon tables only produce legal events");
        Trial {
            truth,
            event,
            decision,
        }
    }
}

/// Draws the true hypothesis from the prior, then a detector event from that
/// hypothesis' table, then applies the decision rule.
pub fn sample_trial<R: Rng + ?Sized>(params: &ScenarioParams, rng: &mut R) -> Result<Trial> {
    Ok(Tables::new(params)?.draw(rng))
}

/// RNG for one shard of a run.
pub fn shard_rng(seed: u64, shard: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(shard);
    rng
}

#[derive(Default)]
struct Tally {
    trials: u64,
    errors: u64,
    emissions: u64,
}

fn run_shard(tables: &Tables, vacuum: Option<&Geometric>, seed: u64, shard: u64, n: u64) -> Tally {
    let mut rng = shard_rng(seed, shard);
    let mut tally = Tally::default();
    for _ in 0..n {
        // failed emission attempts before the photon that registers
        tally.emissions += 1 + vacuum.map_or(0, |g| g.sample(&mut rng));
        let trial = tables.draw(&mut rng);
        tally.trials += 1;
        tally.errors += u64::from(trial.decision != trial.truth);
    }
    tally
}

pub fn run_simulation(config: &TrialConfig) -> Result<EmpiricalResult> {
    config.validate()?;
    let tables = Tables::new(&config.params)?;
    let vacuum = config
        .epsilon
        .map(|eps| Geometric::new(eps).map_err(|e| Error::Domain(e.to_string())))
        .transpose()?;
    let n_shards = config.n_photons.div_ceil(SHARD_SIZE);
    let tally = (0..n_shards)
        .into_par_iter()
        .map(|shard| {
            let start = shard * SHARD_SIZE;
            let n = SHARD_SIZE.min(config.n_photons - start);
            run_shard(&tables, vacuum.as_ref(), config.seed, shard, n)
        })
        .reduce(Tally::default, |a, b| Tally {
            trials: a.trials + b.trials,
            errors: a.errors + b.errors,
            emissions: a.emissions + b.emissions,
        });

    let params = &config.params;
    let analytic = spade_error(params.delta(), params.coherence(), params.p())?;
    let n = tally.trials as f64;
    let error_rate = tally.errors as f64 / n;
    let std_err = (analytic * (1.0 - analytic) / n).sqrt();
    let diff = error_rate - analytic;
    let z_score = if std_err > 0.0 {
        diff / std_err
    } else if diff == 0.0 {
        0.0
    } else {
        diff.signum() * f64::INFINITY
    };
    Ok(EmpiricalResult {
        n_trials: tally.trials,
        n_errors: tally.errors,
        n_emissions: tally.emissions,
        error_rate,
        std_err,
        analytic_p_err: analytic,
        z_score,
    })
}
