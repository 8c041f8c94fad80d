use serde::{Deserialize, Serialize};

use super::MetricMeasureSpace;
use crate::error::{Error, Result};

/// Lower volume growth `mu(B(x, s)) >= a s^b` for every point `x` and `s <= r`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AbStandardness {
    pub a: f64,
    pub b: f64,
    pub r: f64,
}

impl AbStandardness {
    pub fn new(a: f64, b: f64, r: f64) -> Result<Self> {
        if !(a > 0.0 && b >= 0.0 && r > 0.0 && a.is_finite() && b.is_finite() && r.is_finite()) {
            return Err(Error::param(format!("(a, b, r) = ({a}, {b}, {r}) must be positive and finite")));
        }
        Ok(Self { a, b, r })
    }

    /// `a r^b`, the guaranteed mass of any ball of radius `r`.
    pub fn ball_mass(&self) -> f64 {
        self.a * self.r.powf(self.b)
    }
}

/// Smallest mass of a closed ball of radius `s`, over all centers.
pub fn min_ball_mass(mms: &MetricMeasureSpace, s: f64) -> f64 {
    let n = mms.n();
    let mu = mms.measure();
    (0..n)
        .map(|x| {
            let col = mms.dist().column(x);
            col.iter().zip(mu).filter(|(&d, _)| d <= s).map(|(_, &m)| m).sum::<f64>()
        })
        .fold(f64::INFINITY, f64::min)
}

/// Fits `log v(s) = log a + b log s` by least squares, where `v(s)` is the
/// smallest ball mass at radius `s`, then lowers `a` until `a s^b <= v(s)`
/// holds at every sampled radius. `r` is the largest radius.
pub fn estimate_ab(mms: &MetricMeasureSpace, radii: &[f64]) -> Result<AbStandardness> {
    if radii.is_empty() {
        return Err(Error::param("radii must be nonempty"));
    }
    if radii.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::param("radii must be sorted"));
    }
    let diam = mms.diam();
    if let Some(&bad) = radii.iter().find(|&&s| !(s > 0.0) || (diam > 0.0 && s > diam)) {
        return Err(Error::param(format!("radius {bad} must lie in (0, diam = {diam}]")));
    }

    let vols: Vec<f64> = radii.iter().map(|&s| min_ball_mass(mms, s)).collect();
    if let Some(i) = vols.iter().position(|&v| !(v > 0.0)) {
        // every ball contains its center, whose mass is positive
        panic!("ball of radius {} has zero mass in a validated space", radii[i]);
    }

    let xs: Vec<f64> = radii.iter().map(|s| s.ln()).collect();
    let ys: Vec<f64> = vols.iter().map(|v| v.ln()).collect();
    let m = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / m;
    let my = ys.iter().sum::<f64>() / m;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    // v is nondecreasing in s, so the exact slope is >= 0
    let b = if sxx > 0.0 { (sxy / sxx).max(0.0) } else { 0.0 };
    let a = radii.iter().zip(&vols).map(|(&s, &v)| v / s.powf(b)).fold(f64::INFINITY, f64::min);
    let r = *radii.last().unwrap();
    AbStandardness::new(a, b, r)
}
