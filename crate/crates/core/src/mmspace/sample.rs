//! Seeded samplers for the model manifolds: round spheres, the embedded torus
//! and lens spaces `L(p, q)` with their spherical quotient metric.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use super::{MetricMeasureSpace, TriangleCheck};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MetricMode {
    /// Great-circle distance on the unit sphere.
    Geodesic,
    /// Euclidean distance in the ambient space.
    Chordal,
}

impl std::str::FromStr for MetricMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "geodesic" => Ok(MetricMode::Geodesic),
            "chordal" => Ok(MetricMode::Chordal),
            other => Err(Error::param(format!("unknown metric mode `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SphereDim {
    /// S^2 in R^3.
    Two,
    /// S^3 in R^4.
    Three,
}

impl SphereDim {
    pub fn from_dim(dim: usize) -> Result<Self> {
        match dim {
            2 => Ok(SphereDim::Two),
            3 => Ok(SphereDim::Three),
            d => Err(Error::param(format!("sphere dimension must be 2 or 3, got {d}"))),
        }
    }

    pub fn ambient(self) -> usize {
        match self {
            SphereDim::Two => 3,
            SphereDim::Three => 4,
        }
    }
}

/// `n` i.i.d. uniform points on the unit sphere in `R^ambient`, as normalized
/// Gaussian vectors. Degenerate (near-zero) draws are redrawn.
pub fn sphere_points(n: usize, ambient: usize, seed: u64) -> Vec<Vec<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| loop {
            let v: Vec<f64> = (0..ambient).map(|_| rng.sample(StandardNormal)).collect();
            let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
            if norm > 1e-12 {
                break v.into_iter().map(|x| x / norm).collect();
            }
        })
        .collect()
}

/// Unit vectors of `S^3`, read as `(z1, z2) = (x0 + i x1, x2 + i x3)`.
pub fn s3_points(n: usize, seed: u64) -> Vec<[f64; 4]> {
    sphere_points(n, 4, seed).into_iter().map(|v| [v[0], v[1], v[2], v[3]]).collect()
}

fn euclid(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

fn norm_sum(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x + y) * (x + y)).sum::<f64>().sqrt()
}

/// Angle between unit vectors. Uses `2 atan2(|a-b|, |a+b|)`, which equals
/// `arccos <a,b>` but stays accurate near 0 and pi.
pub fn great_circle(a: &[f64], b: &[f64]) -> f64 {
    2.0 * euclid(a, b).atan2(norm_sum(a, b))
}

fn pairwise<P>(points: &[P], f: impl Fn(&P, &P) -> f64) -> DMatrix<f64> {
    let n = points.len();
    let mut d = DMatrix::zeros(n, n);
    for i in 0..n {
        for j in (i + 1)..n {
            let v = f(&points[i], &points[j]);
            d[(i, j)] = v;
            d[(j, i)] = v;
        }
    }
    d
}

fn uniform_space(dist: DMatrix<f64>, label: String) -> Result<MetricMeasureSpace> {
    let n = dist.nrows();
    Ok(MetricMeasureSpace::with_check(dist, vec![1.0 / n as f64; n], TriangleCheck::Auto)?.with_label(label))
}

pub fn sample_sphere(n: usize, dim: SphereDim, mode: MetricMode, seed: u64) -> Result<MetricMeasureSpace> {
    if n == 0 {
        return Err(Error::param("sample size must be at least 1"));
    }
    let pts = sphere_points(n, dim.ambient(), seed);
    let dist = match mode {
        MetricMode::Geodesic => pairwise(&pts, |a, b| great_circle(a, b)),
        MetricMode::Chordal => pairwise(&pts, |a, b| euclid(a, b)),
    };
    let d = dim.ambient() - 1;
    uniform_space(dist, format!("S{d}-{mode:?}-n{n}-seed{seed}").to_lowercase())
}

/// `n` points on the torus of revolution with radii `major > minor > 0`,
/// uniform with respect to area.
pub fn torus_points(n: usize, major: f64, minor: f64, seed: u64) -> Result<Vec<[f64; 3]>> {
    if !(major > minor && minor > 0.0) {
        return Err(Error::param(format!("torus needs R > r > 0, got R = {major}, r = {minor}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok((0..n)
        .map(|_| {
            // area element is proportional to R + r cos(theta)
            let theta = loop {
                let t = rng.random::<f64>() * 2.0 * PI;
                let u = rng.random::<f64>();
                if u * (major + minor) <= major + minor * t.cos() {
                    break t;
                }
            };
            let phi = rng.random::<f64>() * 2.0 * PI;
            let w = major + minor * theta.cos();
            [w * phi.cos(), w * phi.sin(), minor * theta.sin()]
        })
        .collect())
}

/// Samples the torus of revolution uniformly with respect to area, with the
/// Euclidean metric of `R^3`.
pub fn sample_torus(n: usize, major: f64, minor: f64, seed: u64) -> Result<MetricMeasureSpace> {
    if n == 0 {
        return Err(Error::param("sample size must be at least 1"));
    }
    let pts = torus_points(n, major, minor, seed)?;
    let dist = pairwise(&pts, |a, b| euclid(a, b));
    uniform_space(dist, format!("torus-R{major}-r{minor}-n{n}-seed{seed}"))
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

/// Applies `g^m` to `x`, where `g (z1, z2) = (zeta z1, zeta^q z2)` and
/// `zeta = exp(2 pi i / p)`.
pub fn lens_act(x: &[f64; 4], p: u32, q: i64, m: i64) -> [f64; 4] {
    let rot = |re: f64, im: f64, k: i64| {
        let a = 2.0 * PI * (k.rem_euclid(p as i64)) as f64 / p as f64;
        let (s, c) = a.sin_cos();
        (c * re - s * im, s * re + c * im)
    };
    let (a, b) = rot(x[0], x[1], m);
    let (c, d) = rot(x[2], x[3], q * m);
    [a, b, c, d]
}

/// Quotient distance on `L(p, q)`: the smallest great-circle distance from `x`
/// to the orbit of `y`.
pub fn lens_distance(x: &[f64; 4], y: &[f64; 4], p: u32, q: i64) -> f64 {
    let table = rotation_table(p, q);
    lens_distance_with(x, y, &table)
}

fn rotation_table(p: u32, q: i64) -> Vec<[(f64, f64); 2]> {
    (0..p as i64)
        .map(|m| {
            let a1 = 2.0 * PI * m as f64 / p as f64;
            let a2 = 2.0 * PI * (q * m).rem_euclid(p as i64) as f64 / p as f64;
            [a1.sin_cos(), a2.sin_cos()]
        })
        .collect()
}

fn lens_distance_with(x: &[f64; 4], y: &[f64; 4], table: &[[(f64, f64); 2]]) -> f64 {
    // The identity element is applied exactly, so p = 1 reproduces the sphere.
    let mut best = great_circle(x, y);
    for rot in &table[1..] {
        let [(s1, c1), (s2, c2)] = *rot;
        let gy = [c1 * y[0] - s1 * y[1], s1 * y[0] + c1 * y[1], c2 * y[2] - s2 * y[3], s2 * y[2] + c2 * y[3]];
        best = best.min(great_circle(x, &gy));
    }
    best
}

/// Samples `L(p, q) = S^3 / Z_p` by projecting uniform points of `S^3`.
pub fn sample_lens(n: usize, p: u32, q: i64, seed: u64) -> Result<MetricMeasureSpace> {
    if n == 0 {
        return Err(Error::param("sample size must be at least 1"));
    }
    if p == 0 {
        return Err(Error::param("lens space order p must be positive"));
    }
    if gcd(p as i64, q) != 1 {
        return Err(Error::param(format!("lens space needs gcd(p, q) = 1, got p = {p}, q = {q}")));
    }
    let pts = s3_points(n, seed);
    let table = rotation_table(p, q);
    let dist = pairwise(&pts, |a, b| lens_distance_with(a, b, &table));
    uniform_space(dist, format!("L({p},{q})-n{n}-seed{seed}"))
}
