use serde::{Deserialize, Serialize};

use super::diagram::GradedDiagram;
use crate::error::{Error, Result};

/// A right-continuous step function with compact support: `values[i]` holds
/// on `[breakpoints[i], breakpoints[i + 1])` and the function is zero
/// outside `[breakpoints[0], breakpoints[last])`.
///
/// Canonical form: breakpoints strictly increasing, adjacent values distinct,
/// first and last values nonzero.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct StepFunction {
    breakpoints: Vec<f64>,
    values: Vec<f64>,
}

impl StepFunction {
    /// Builds from jumps `(position, delta)` accumulated left to right.
    pub fn from_jumps(mut jumps: Vec<(f64, f64)>) -> Self {
        jumps.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut breakpoints: Vec<f64> = Vec::new();
        let mut values: Vec<f64> = Vec::new();
        let mut level = 0.0;
        let mut i = 0;
        while i < jumps.len() {
            let x = jumps[i].0;
            while i < jumps.len() && jumps[i].0 == x {
                level += jumps[i].1;
                i += 1;
            }
            breakpoints.push(x);
            values.push(level);
        }
        Self::canonical(breakpoints, values)
    }

    /// `values.len()` must equal `breakpoints.len()`; the last value is the
    /// one to the right of the last breakpoint and must be zero.
    fn canonical(breakpoints: Vec<f64>, values: Vec<f64>) -> Self {
        let mut bp: Vec<f64> = Vec::with_capacity(breakpoints.len());
        let mut vals: Vec<f64> = Vec::with_capacity(values.len());
        let mut prev = 0.0;
        for (x, v) in breakpoints.into_iter().zip(values) {
            if v != prev {
                bp.push(x);
                vals.push(v);
                prev = v;
            }
        }
        debug_assert_eq!(vals.last().copied().unwrap_or(0.0), 0.0);
        vals.pop();
        Self { breakpoints: bp, values: vals }
    }

    /// A step function from breakpoints and the values between them.
    pub fn new(breakpoints: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if breakpoints.is_empty() && values.is_empty() {
            return Ok(Self::default());
        }
        if values.len() + 1 != breakpoints.len() {
            return Err(Error::DimensionMismatch { expected: breakpoints.len().saturating_sub(1), got: values.len() });
        }
        if breakpoints.windows(2).any(|w| !(w[0] < w[1])) || breakpoints.iter().any(|x| !x.is_finite()) {
            return Err(Error::param("breakpoints must be finite and strictly increasing"));
        }
        let mut vals = values;
        vals.push(0.0);
        Ok(Self::canonical(breakpoints, vals))
    }

    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    /// Values on the intervals between consecutive breakpoints.
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn is_zero(&self) -> bool {
        self.values.is_empty()
    }

    pub fn eval(&self, t: f64) -> f64 {
        match self.breakpoints.partition_point(|&x| x <= t) {
            0 => 0.0,
            i if i > self.values.len() => 0.0,
            i => self.values[i - 1],
        }
    }

    /// CSV `breakpoint,value`: the value holds from that breakpoint to the next.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("breakpoint,value\n");
        for (i, x) in self.breakpoints.iter().enumerate() {
            out.push_str(&format!("{},{}\n", x, self.values.get(i).copied().unwrap_or(0.0)));
        }
        out
    }
}

fn check_horizon(diag: &GradedDiagram, horizon: f64) -> Result<()> {
    match diag.max_finite_value() {
        Some(m) if !(horizon >= m) => {
            Err(Error::param(format!("horizon {horizon} lies below the largest finite diagram value {m}")))
        }
        _ if !horizon.is_finite() => Err(Error::param("horizon must be finite")),
        _ => Ok(()),
    }
}

fn curve(diag: &GradedDiagram, horizon: f64, weight: impl Fn(usize) -> f64) -> Result<StepFunction> {
    check_horizon(diag, horizon)?;
    let mut jumps = Vec::with_capacity(2 * diag.len());
    for p in diag.pairs() {
        let w = weight(p.dim);
        if w != 0.0 {
            jumps.push((p.birth, w));
            jumps.push((p.death.min(horizon), -w));
        }
    }
    Ok(StepFunction::from_jumps(jumps))
}

/// `beta_dim(t)`: number of bars of degree `dim` alive at `t`, essential bars
/// ending at `horizon`.
pub fn betti_curve(diag: &GradedDiagram, dim: usize, horizon: f64) -> Result<StepFunction> {
    curve(diag, horizon, |d| if d == dim { 1.0 } else { 0.0 })
}

/// `chi(t) = sum_k (-1)^k beta_k(t)`.
pub fn euler_curve(diag: &GradedDiagram, horizon: f64) -> Result<StepFunction> {
    curve(diag, horizon, |d| if d % 2 == 0 { 1.0 } else { -1.0 })
}

/// `(integral |s1 - s2|^p)^{1/p}`, evaluated exactly.
pub fn lp_distance(s1: &StepFunction, s2: &StepFunction, p: f64) -> Result<f64> {
    if !(p > 0.0) || !p.is_finite() {
        return Err(Error::param(format!("exponent p must be positive and finite, got {p}")));
    }
    let mut xs: Vec<f64> = s1.breakpoints.iter().chain(&s2.breakpoints).copied().collect();
    xs.sort_by(f64::total_cmp);
    xs.dedup();
    let integral: f64 = xs
        .windows(2)
        .map(|w| {
            let diff = (s1.eval(w[0]) - s2.eval(w[0])).abs();
            if diff == 0.0 {
                0.0
            } else {
                diff.powf(p) * (w[1] - w[0])
            }
        })
        .sum();
    Ok(integral.powf(1.0 / p))
}

/// `sum over finite pairs with per > t of per^q`, `per = (death - birth)/2`.
pub fn total_persistence(diag: &GradedDiagram, q: f64, t: f64) -> Result<f64> {
    if !(q > 0.0) || !(t >= 0.0) {
        return Err(Error::param(format!("need q > 0 and t >= 0, got q = {q}, t = {t}")));
    }
    Ok(diag
        .pairs()
        .iter()
        .filter(|p| p.is_finite())
        .map(|p| p.persistence())
        .filter(|&per| per > t)
        .map(|per| per.powf(q))
        .sum())
}
