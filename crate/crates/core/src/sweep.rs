//! Rectangular `(k, p)` sweeps at fixed coherence, and their fixed-format
//! CSV rows.

use std::str::FromStr;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::helstrom::bound_report;
use crate::spade::{spade_advantage, spade_error};
use crate::state::ScenarioParams;

pub const CSV_HEADER: &str = "k,p,gamma,theta,delta,o_err,d_err,a_qod,p_err_spade,a_d,useless";

/// Significant digits in every emitted number.
pub const SIG_DIGITS: i32 = 9;

/// Inclusive range `MIN:MAX:STEPS`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Range {
    pub min: f64,
    pub max: f64,
    pub steps: usize,
}

impl Range {
    pub fn new(min: f64, max: f64, steps: usize) -> Result<Self> {
        if !(min.is_finite() && max.is_finite()) || min > max {
            return Err(Error::Domain(format!("invalid range {min}:{max}")));
        }
        if steps == 0 || (min < max && steps < 2) {
            return Err(Error::Domain(format!(
                "range {min}:{max} needs at least {} steps, got {steps}",
                if min < max { 2 } else { 1 }
            )));
        }
        Ok(Self { min, max, steps })
    }

    pub fn single(v: f64) -> Self {
        Self {
            min: v,
            max: v,
            steps: 1,
        }
    }

    pub fn values(&self) -> Vec<f64> {
        if self.steps == 1 {
            return vec![self.min];
        }
        let last = (self.steps - 1) as f64;
        // endpoints are hit exactly
        (0..self.steps)
            .map(|i| {
                if i + 1 == self.steps {
                    self.max
                } else {
                    self.min + (self.max - self.min) * i as f64 / last
                }
            })
            .collect()
    }
}

impl FromStr for Range {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        let [min, max, steps] = parts.as_slice() else {
            return Err(Error::Domain(format!("expected MIN:MAX:STEPS, got {s:?}")));
        };
        let num = |t: &str| {
            t.trim()
                .parse::<f64>()
                .map_err(|e| Error::Domain(format!("{t:?}: {e}")))
        };
        let steps = steps
            .trim()
            .parse::<usize>()
            .map_err(|e| Error::Domain(format!("{steps:?}: {e}")))?;
        Range::new(num(min)?, num(max)?, steps)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepSpec {
    pub k: Range,
    pub p: Range,
    pub gamma: f64,
    pub theta: f64,
}

impl SweepSpec {
    pub fn validate(&self) -> Result<()> {
        if self.k.min < 0.0 {
            return Err(Error::Domain(format!(
                "k range starts below zero: {}",
                self.k.min
            )));
        }
        if self.p.min < 0.0 || self.p.max > 1.0 {
            return Err(Error::Domain(format!(
                "p range {}:{} leaves [0, 1]",
                self.p.min, self.p.max
            )));
        }
        // checks gamma and theta once, away from the degenerate corner
        ScenarioParams::new(1.0, self.gamma, self.theta, 0.5).map(|_| ())
    }

    pub fn len(&self) -> usize {
        self.k.steps * self.p.steps
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Evaluates every grid point, `k` outer and `p` inner.
    pub fn run(&self) -> Result<Vec<SweepRow>> {
        self.validate()?;
        let ks = self.k.values();
        let ps = self.p.values();
        let points: Vec<(f64, f64)> = ks
            .iter()
            .flat_map(|&k| ps.iter().map(move |&p| (k, p)))
            .collect();
        points
            .par_iter()
            .map(|&(k, p)| SweepRow::evaluate(k, p, self.gamma, self.theta))
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Metrics {
    pub delta: f64,
    pub o_err: f64,
    pub d_err: f64,
    pub a_qod: f64,
    pub p_err_spade: f64,
    pub a_d: f64,
    pub useless: bool,
}

/// One grid point. `metrics` is `None` at the degenerate corner.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    pub k: f64,
    pub p: f64,
    pub gamma: f64,
    pub theta: f64,
    pub metrics: Option<Metrics>,
}

impl SweepRow {
    pub fn evaluate(k: f64, p: f64, gamma: f64, theta: f64) -> Result<Self> {
        let params = match ScenarioParams::new(k, gamma, theta, p) {
            Ok(params) => params,
            Err(Error::Degenerate { .. }) => {
                return Ok(Self {
                    k,
                    p,
                    gamma,
                    theta,
                    metrics: None,
                });
            }
            Err(e) => return Err(e),
        };
        let bound = bound_report(&params)?;
        let delta = params.delta();
        let metrics = Metrics {
            delta,
            o_err: bound.o_err,
            d_err: bound.d_err,
            a_qod: bound.a_qod,
            p_err_spade: spade_error(delta, params.coherence(), p)?,
            a_d: spade_advantage(&params)?,
            useless: bound.useless,
        };
        Ok(Self {
            k,
            p,
            gamma,
            theta,
            metrics: Some(metrics),
        })
    }

    pub fn to_csv(&self) -> String {
        let mut line = String::new();
        for v in [self.k, self.p, self.gamma, self.theta] {
            line.push_str(&format_number(v));
            line.push(',');
        }
        match &self.metrics {
            Some(m) => {
                for v in [m.delta, m.o_err, m.d_err, m.a_qod, m.p_err_spade, m.a_d] {
                    line.push_str(&format_number(v));
                    line.push(',');
                }
                line.push_str(if m.useless { "true" } else { "false" });
            }
            None => line.push_str(",,,,,,degenerate"),
        }
        line
    }
}

/// Full CSV document: header plus one LF-terminated line per row.
pub fn to_csv(rows: &[SweepRow]) -> String {
    let mut out = String::with_capacity(96 * (rows.len() + 1));
    out.push_str(CSV_HEADER);
    out.push('\n');
    for row in rows {
        out.push_str(&row.to_csv());
        out.push('\n');
    }
    out
}

/// Plain decimal with [`SIG_DIGITS`] significant digits. Zero prints as
/// `0`; non-finite values print as `inf`, `-inf` or `nan`.
pub fn format_number(v: f64) -> String {
    if v == 0.0 {
        return "0".to_string();
    }
    if !v.is_finite() {
        return if v.is_nan() {
            "nan".into()
        } else if v > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        };
    }
    let decimals = |mag: i32| (SIG_DIGITS - 1 - mag).max(0) as usize;
    let mag = v.abs().log10().floor() as i32;
    let s = format!("{:.*}", decimals(mag), v);
    // rounding can carry into the next decade, e.g. 0.9999999999 -> 1.000000000
    let rounded: f64 = s.parse().expect("formatted float parses");
    if rounded != 0.0 && rounded.abs().log10().floor() as i32 > mag {
        return format!("{:.*}", decimals(mag + 1), v);
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn number_format() {
        assert_eq!(format_number(0.0), "0");
        assert_eq!(format_number(0.5), "0.500000000");
        assert_eq!(format_number(1.0), "1.00000000");
        assert_eq!(format_number(0.301_234_975_594), "0.301234976");
        assert_eq!(format_number(1.659_833_819_14), "1.65983382");
        assert_eq!(format_number(-0.158_030_139_7), "-0.158030140");
        assert_eq!(format_number(3.726_653_172e-6), "0.00000372665317");
        assert_eq!(format_number(123.456), "123.456000");
        assert_eq!(format_number(9.999_999_999_6), "10.0000000");
        assert_eq!(format_number(0.999_999_999_999_9), "1.00000000");
        assert_eq!(format_number(f64::INFINITY), "inf");
    }

    #[test]
    fn ranges() {
        let r: Range = "0:5:101".parse().unwrap();
        let v = r.values();
        assert_eq!(v.len(), 101);
        assert_eq!((v[0], v[100]), (0.0, 5.0));
        assert!((v[20] - 1.0).abs() < 1e-15);
        assert_eq!("0.5:0.5:1".parse::<Range>().unwrap().values(), vec![0.5]);
        assert!("0:1:1".parse::<Range>().is_err());
        assert!("1:0:5".parse::<Range>().is_err());
        assert!("0:1".parse::<Range>().is_err());
        assert!("a:1:3".parse::<Range>().is_err());
    }

    #[test]
    fn two_by_two_sweep() {
        let spec = SweepSpec {
            k: Range::new(0.0, 2.0, 2).unwrap(),
            p: Range::new(0.3, 0.7, 2).unwrap(),
            gamma: 0.1,
            theta: 0.0,
        };
        let rows = spec.run().unwrap();
        assert_eq!(rows.len(), 4);
        let order: Vec<(f64, f64)> = rows.iter().map(|r| (r.k, r.p)).collect();
        assert_eq!(order, vec![(0.0, 0.3), (0.0, 0.7), (2.0, 0.3), (2.0, 0.7)]);
        assert_eq!(to_csv(&rows).lines().count(), 5);
    }

    #[test]
    fn incoherent_useless_above_two_thirds() {
        let spec = SweepSpec {
            k: Range::new(0.25, 5.0, 20).unwrap(),
            p: Range::new(0.0, 1.0, 31).unwrap(),
            gamma: 0.0,
            theta: 0.0,
        };
        for row in spec.run().unwrap() {
            let m = row.metrics.unwrap();
            if (row.p - 2.0 / 3.0).abs() < 1e-9 {
                continue;
            }
            if row.p > 2.0 / 3.0 {
                assert!(m.useless, "{row:?}");
            } else if row.p > 0.0 {
                assert!(!m.useless, "{row:?}");
            }
        }
    }

    #[test]
    fn degenerate_corner_is_flagged() {
        let spec = SweepSpec {
            k: Range::new(0.0, 1.0, 2).unwrap(),
            p: Range::single(0.5),
            gamma: 1.0,
            theta: PI,
        };
        let rows = spec.run().unwrap();
        assert!(rows[0].metrics.is_none());
        assert_eq!(
            rows[0].to_csv(),
            "0,0.500000000,1.00000000,3.14159265,,,,,,,degenerate"
        );
        assert!(rows[1].metrics.is_some());
    }
}
