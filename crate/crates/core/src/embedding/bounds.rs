//! Upper-bound evaluators. Each is a pure formula in spectral and measure
//! data; none is clamped to an observed quantity.
//!
//! Eigenvalue indices are 0-based; truncation dimensions `k` count coordinates.

use serde::{Deserialize, Serialize};

use super::{error_summary, hausdorff_l2, Embedding};
use crate::error::{Error, Result};
use crate::mmspace::AbStandardness;
use crate::spectral::{Spectrum, TIE_REL, ZERO_REL};

/// `|lambda_{k+1}| / sqrt(mu(x_i) mu(x_j))`; zero once `k >= n`.
pub fn trunc_error_bound(spectrum: &Spectrum, k: usize, i: usize, j: usize) -> f64 {
    let mu = spectrum.measure();
    spectrum.effective(k).abs() / (mu[i] * mu[j]).sqrt()
}

/// Two readings of the embedding norm bound at a point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EmbedNormBound {
    /// `sqrt|lambda_1| / mu(x)`. Fails on small non-uniform examples.
    pub as_printed: f64,
    /// `sqrt|lambda_1| / sqrt(mu(x))`, which follows from `|row_x|_2 = 1/sqrt(mu(x))`.
    pub via_row_norm: f64,
}

pub fn embed_norm_bound(spectrum: &Spectrum, i: usize) -> EmbedNormBound {
    let top = spectrum.effective(0).abs().sqrt();
    let m = spectrum.measure()[i];
    EmbedNormBound { as_printed: top / m, via_row_norm: top / m.sqrt() }
}

/// Terms of `2 eps min(B_X, B_Y) + A_X + A_Y + eps^2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GeneralGhBound {
    pub epsilon: f64,
    pub a_x: f64,
    pub a_y: f64,
    pub b_x: f64,
    pub b_y: f64,
    pub value: f64,
}

pub fn gh_bound_general(x: &Embedding, y: &Embedding) -> Result<GeneralGhBound> {
    let epsilon = hausdorff_l2(x, y)?;
    let (sx, sy) = (error_summary(x), error_summary(y));
    let value = 2.0 * epsilon * sx.b.min(sy.b) + sx.a + sy.a + epsilon * epsilon;
    Ok(GeneralGhBound { epsilon, a_x: sx.a, a_y: sy.a, b_x: sx.b, b_y: sy.b, value })
}

/// `2 eps min(sqrt|lambda_1|, sqrt|nu_1|)/theta + eps^2 + (|lambda_{k+1}| + |nu_{k+1}|)/theta`
/// with `theta` the smallest atom over both spaces.
pub fn gh_bound_finite(x: &Spectrum, y: &Spectrum, k: usize, epsilon: f64) -> Result<f64> {
    if k == 0 || k > x.n().min(y.n()) {
        return Err(Error::param(format!("k = {k} must lie in 1..={}", x.n().min(y.n()))));
    }
    check_epsilon(epsilon)?;
    let theta = x.space().min_mass().min(y.space().min_mass());
    let top = x.effective(0).abs().sqrt().min(y.effective(0).abs().sqrt());
    let tail = x.effective(k).abs() + y.effective(k).abs();
    Ok(2.0 * epsilon * top / theta + epsilon * epsilon + tail / theta)
}

fn check_epsilon(epsilon: f64) -> Result<()> {
    if epsilon.is_finite() && epsilon >= 0.0 {
        Ok(())
    } else {
        Err(Error::param(format!("epsilon must be finite and nonnegative, got {epsilon}")))
    }
}

/// Rejects zero or (nearly) repeated absolute values among the first `k`.
fn check_distinct(bound: &'static str, name: &str, vals: &[f64], k: usize) -> Result<()> {
    if k > vals.len() {
        return Err(Error::param(format!("k = {k} exceeds the {} eigenvalues of {name}", vals.len())));
    }
    let top = vals.first().map_or(0.0, |l| l.abs());
    for i in 0..k {
        if vals[i].abs() <= ZERO_REL * top {
            return Err(Error::hypothesis(bound, format!("eigenvalue {} of {name} is zero", i + 1)));
        }
        if i + 1 < k && (vals[i].abs() - vals[i + 1].abs()).abs() < TIE_REL * top {
            return Err(Error::hypothesis(
                bound,
                format!("eigenvalues {} and {} of {name} have equal absolute value", i + 1, i + 2),
            ));
        }
    }
    Ok(())
}

/// `min_{i != j <= k} |lambda_i^2 - nu_j^2|`, `+inf` when `k = 1`.
pub fn intertwining(lx: &[f64], ly: &[f64], k: usize) -> f64 {
    let mut delta = f64::INFINITY;
    for i in 0..k {
        for j in 0..k {
            if i != j {
                delta = delta.min((lx[i] * lx[i] - ly[j] * ly[j]).abs());
            }
        }
    }
    delta
}

/// Hausdorff stability bound between the `k`-truncated embeddings of two
/// spaces whose (generalized) bottleneck distance is `epsilon`:
///
/// `sqrt(k) 4 sqrt(2) (eps + tau_1)/Delta_k sqrt(tau_1) eps + sqrt(k) 2 sqrt(2) sqrt((eps + tau_1)/tau_k) sqrt(eps)`
///
/// with `tau_1 = min(|lambda_1|, |nu_1|)` and `tau_k = max(|lambda_k|, |nu_k|)`.
pub fn stability_bound(lx: &[f64], ly: &[f64], k: usize, epsilon: f64) -> Result<f64> {
    const NAME: &str = "stability";
    if k == 0 {
        return Err(Error::param("k must be at least 1"));
    }
    check_epsilon(epsilon)?;
    check_distinct(NAME, "X", lx, k)?;
    check_distinct(NAME, "Y", ly, k)?;
    let delta = intertwining(lx, ly, k);
    if delta == 0.0 {
        return Err(Error::hypothesis(NAME, "intertwining Delta_k is zero"));
    }
    let tau1 = lx[0].abs().min(ly[0].abs());
    let tauk = lx[k - 1].abs().max(ly[k - 1].abs());
    let sk = (k as f64).sqrt();
    let s2 = std::f64::consts::SQRT_2;
    let first =
        if delta.is_infinite() { 0.0 } else { sk * 4.0 * s2 * (epsilon + tau1) / delta * tau1.sqrt() * epsilon };
    let second = sk * 2.0 * s2 * ((epsilon + tau1) / tauk).sqrt() * epsilon.sqrt();
    Ok(first + second)
}

/// Per-index eigenvalue and eigenvector perturbation bounds for symmetric
/// matrices whose difference has spectral norm at most `epsilon`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WeylDkBound {
    /// Bound on `|lambda_i^2 - nu_i^2|`: `eps (eps + 2 |lambda_1|)`.
    pub eigen_gap: f64,
    /// `min_{j != i} |lambda_i^2 - nu_j^2|` over both full spectra.
    pub delta: f64,
    /// Bound on the sine of the angle between the `i`-th eigenvectors.
    pub sin_theta: f64,
}

pub fn weyl_dk_bounds(lx: &[f64], ly: &[f64], k: usize, epsilon: f64) -> Result<Vec<WeylDkBound>> {
    const NAME: &str = "weyl-davis-kahan";
    check_epsilon(epsilon)?;
    check_distinct(NAME, "X", lx, k)?;
    check_distinct(NAME, "Y", ly, k)?;
    let m = lx.len().min(ly.len());
    let eigen_gap = epsilon * (epsilon + 2.0 * lx[0].abs());
    (0..k)
        .map(|i| {
            let delta =
                (0..m).filter(|&j| j != i).map(|j| (lx[i] * lx[i] - ly[j] * ly[j]).abs()).fold(f64::INFINITY, f64::min);
            if delta == 0.0 {
                return Err(Error::hypothesis(NAME, format!("Delta_{} is zero", i + 1)));
            }
            let sin_theta = if delta.is_infinite() { 0.0 } else { eigen_gap / delta };
            Ok(WeylDkBound { eigen_gap, delta, sin_theta })
        })
        .collect()
}

fn nonzero_prefix(bound: &'static str, spectrum: &Spectrum, k: usize) -> Result<Vec<f64>> {
    if k == 0 || k > spectrum.len() {
        return Err(Error::param(format!("k = {k} must lie in 1..={}", spectrum.len())));
    }
    (0..k)
        .map(|i| match spectrum.effective(i).abs() {
            l if l > 0.0 => Ok(l),
            _ => Err(Error::hypothesis(bound, format!("eigenvalue {} is zero", i + 1))),
        })
        .collect()
}

/// `1/(sqrt(a) r^{b/2}) + r sqrt(vol)/|lambda_i|`, bounding `max |e_i|`.
pub fn eigenfunction_sup_bound(spectrum: &Spectrum, ab: &AbStandardness, i: usize) -> Result<f64> {
    let l = *nonzero_prefix("eigenfunction sup", spectrum, i + 1)?.last().expect("nonempty");
    let vol = spectrum.space().vol();
    Ok(1.0 / (ab.a.sqrt() * ab.r.powf(ab.b / 2.0)) + ab.r * vol.sqrt() / l)
}

/// Analytic bounds on the sup error `A` and the embedding norm `B`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AnalyticBounds {
    pub a_bound: f64,
    pub b_bound: f64,
    /// `K = sqrt(2) + sum K_i`, the Lipschitz constant of the truncated kernel.
    pub lipschitz: f64,
    /// `Lambda_{k+1} = sum_{i > k} lambda_i^2`.
    pub tail: f64,
}

pub fn analytic_bounds(spectrum: &Spectrum, ab: &AbStandardness, k: usize) -> Result<AnalyticBounds> {
    let head = nonzero_prefix("analytic", spectrum, k)?;
    let vol = spectrum.space().vol();
    let s2 = std::f64::consts::SQRT_2;
    let root_ball = ab.a.sqrt() * ab.r.powf(ab.b / 2.0);
    let b_bound = head
        .iter()
        .map(|&l| {
            let t = l.sqrt() / root_ball + ab.r * vol.sqrt() / l.sqrt();
            t * t
        })
        .sum::<f64>()
        .sqrt();
    let lipschitz = s2 + head.iter().map(|&l| s2 * (vol.sqrt() / root_ball + ab.r * vol / l)).sum::<f64>();
    let tail: f64 = (k..spectrum.len()).map(|i| spectrum.effective(i).powi(2)).sum();
    let a_bound = tail.sqrt() / ab.ball_mass() + ab.r * lipschitz;
    Ok(AnalyticBounds { a_bound, b_bound, lipschitz, tail })
}
