//! Pacing functions: how many of the lowest-scored examples are available at
//! each optimizer step.
//!
//! With `r = t / (aT)` the raw sizes are
//!
//! | family    | raw `g(t)`                                         |
//! |-----------|----------------------------------------------------|
//! | log       | `Nb + N(1-b)(1 + 0.1 ln(r + e^-10))`               |
//! | exp       | `Nb + N(1-b)(e^(10r) - 1) / (e^10 - 1)`            |
//! | step      | `Nb + N(1-b) [t >= aT]`                            |
//! | root      | `Nb + N(1-b) r^(1/2)`                              |
//! | linear    | `Nb + N(1-b) r`                                    |
//! | quadratic | `Nb + N(1-b) r^2`                                  |
//!
//! Raw values are rounded half-up and clamped to `[max(1, round(Nb)), N]`.
//! Any spec with `a = 0` or `b = 1` is standard training: `g(t) = N`.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PacingFamily {
    Log,
    Exp,
    Step,
    Linear,
    Quadratic,
    Root,
}

impl PacingFamily {
    pub const ALL: [PacingFamily; 6] = [
        PacingFamily::Log,
        PacingFamily::Exp,
        PacingFamily::Step,
        PacingFamily::Linear,
        PacingFamily::Quadratic,
        PacingFamily::Root,
    ];

    pub fn name(self) -> &'static str {
        match self {
            PacingFamily::Log => "log",
            PacingFamily::Exp => "exp",
            PacingFamily::Step => "step",
            PacingFamily::Linear => "linear",
            PacingFamily::Quadratic => "quadratic",
            PacingFamily::Root => "root",
        }
    }
}

impl std::fmt::Display for PacingFamily {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for PacingFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        PacingFamily::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown pacing family {s:?}")))
    }
}

pub const DEFAULT_A_VALUES: [f64; 6] = [0.01, 0.1, 0.2, 0.4, 0.8, 1.6];
pub const DEFAULT_B_VALUES: [f64; 5] = [0.0025, 0.1, 0.2, 0.4, 0.8];
/// The wider grid that also reaches `a = 1` and `b = 1`.
pub const APPENDIX_A_VALUES: [f64; 6] = [0.01, 0.1, 0.2, 0.4, 1.0, 1.6];
pub const APPENDIX_B_VALUES: [f64; 5] = [0.0025, 0.1, 0.2, 0.4, 1.0];

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PacingSpec {
    pub family: PacingFamily,
    pub a: f64,
    pub b: f64,
    /// Full training-set size.
    pub n: usize,
    /// Total optimizer steps.
    pub total_steps: usize,
}

fn round_half_up(x: f64) -> f64 {
    (x + 0.5).floor()
}

impl PacingSpec {
    pub fn new(family: PacingFamily, a: f64, b: f64, n: usize, total_steps: usize) -> Result<Self> {
        let spec = PacingSpec {
            family,
            a,
            b,
            n,
            total_steps,
        };
        spec.validate()?;
        Ok(spec)
    }

    /// Constant pool of all `n` examples.
    pub fn standard(n: usize, total_steps: usize) -> Result<Self> {
        PacingSpec::new(PacingFamily::Linear, 0.0, 1.0, n, total_steps)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 || self.total_steps == 0 {
            return Err(Error::InvalidArgument(format!(
                "pacing needs N >= 1 and T >= 1, got N = {}, T = {}",
                self.n, self.total_steps
            )));
        }
        if !(self.a >= 0.0 && self.a.is_finite()) {
            return Err(Error::InvalidArgument(format!("pacing a must be >= 0, got {}", self.a)));
        }
        if !(0.0..=1.0).contains(&self.b) {
            return Err(Error::InvalidArgument(format!(
                "pacing b must lie in [0, 1], got {}",
                self.b
            )));
        }
        Ok(())
    }

    pub fn is_standard(&self) -> bool {
        self.a == 0.0 || self.b == 1.0
    }

    /// Smallest size the schedule may take.
    pub fn floor(&self) -> usize {
        (round_half_up(self.n as f64 * self.b) as usize).clamp(1, self.n)
    }

    /// Unrounded, unclamped value of the closed form.
    pub fn raw(&self, t: usize) -> f64 {
        let n = self.n as f64;
        let b = self.b;
        let span = self.a * self.total_steps as f64;
        let r = t as f64 / span;
        let growth = match self.family {
            PacingFamily::Log => 1.0 + 0.1 * (r + (-10.0f64).exp()).ln(),
            PacingFamily::Exp => ((10.0 * r).exp() - 1.0) / (10.0f64.exp() - 1.0),
            PacingFamily::Step => {
                if t as f64 >= span {
                    1.0
                } else {
                    0.0
                }
            }
            PacingFamily::Linear => r,
            PacingFamily::Quadratic => r * r,
            PacingFamily::Root => r.sqrt(),
        };
        n * b + n * (1.0 - b) * growth
    }

    /// Training-set size at step `t ∈ [1, T]`.
    pub fn eval(&self, t: usize) -> Result<usize> {
        if t == 0 || t > self.total_steps {
            return Err(Error::OutOfRange {
                what: "step",
                detail: format!("t = {t} outside [1, {}]", self.total_steps),
            });
        }
        if self.is_standard() {
            return Ok(self.n);
        }
        let raw = round_half_up(self.raw(t));
        let floor = self.floor() as f64;
        Ok(raw.clamp(floor, self.n as f64) as usize)
    }

    /// Sizes for `t = 1..=T`.
    pub fn schedule(&self) -> Vec<usize> {
        (1..=self.total_steps)
            .map(|t| self.eval(t).expect("t within range"))
            .collect()
    }
}

pub fn eval_pacing(spec: &PacingSpec, t: usize) -> Result<usize> {
    spec.eval(t)
}

pub fn pacing_schedule(spec: &PacingSpec) -> Vec<usize> {
    spec.schedule()
}

/// Cartesian product in family-major, then `a`, then `b` order.
pub fn pacing_grid(
    a_values: &[f64],
    b_values: &[f64],
    families: &[PacingFamily],
    n: usize,
    total_steps: usize,
) -> Result<Vec<PacingSpec>> {
    if a_values.is_empty() || b_values.is_empty() || families.is_empty() {
        return Err(Error::InvalidArgument("pacing grid axes must be nonempty".into()));
    }
    let mut specs = Vec::with_capacity(families.len() * a_values.len() * b_values.len());
    for &family in families {
        for &a in a_values {
            for &b in b_values {
                specs.push(PacingSpec::new(family, a, b, n, total_steps)?);
            }
        }
    }
    Ok(specs)
}

/// The 6 families × 6 `a` × 5 `b` = 180 default specs.
pub fn default_grid(n: usize, total_steps: usize) -> Result<Vec<PacingSpec>> {
    pacing_grid(&DEFAULT_A_VALUES, &DEFAULT_B_VALUES, &PacingFamily::ALL, n, total_steps)
}

/// Long-format curves: `family,a,b,t,size`, `T` rows per spec.
pub fn write_schedule_csv<W: Write>(specs: &[PacingSpec], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["family", "a", "b", "t", "size"])?;
    for spec in specs {
        for (i, size) in spec.schedule().into_iter().enumerate() {
            w.write_record([
                spec.family.name().to_string(),
                spec.a.to_string(),
                spec.b.to_string(),
                (i + 1).to_string(),
                size.to_string(),
            ])?;
        }
    }
    w.flush()?;
    Ok(())
}
