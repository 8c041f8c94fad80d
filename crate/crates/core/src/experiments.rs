//! Drivers that assemble spaces, spectra, embeddings and bounds into the
//! tables and histograms reported by the command-line tool.

use std::path::PathBuf;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::embedding::{
    analytic_bounds, bottleneck_matching, embed, embed_norm_bound, error_summary, hausdorff_l2, Embedding,
};
use crate::error::{Error, Result};
use crate::mmspace::{
    estimate_ab, great_circle, lens_distance, s3_points, sample_lens, sample_sphere, sample_torus, sphere_points,
    torus_points, AbStandardness, MetricMeasureSpace, MetricMode, SphereDim,
};
use crate::spectral::{eigendecompose, eigenvalues, KernelMatrix, Spectrum};

/// A reproducible description of a space: a seeded sample or a file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum SpaceSpec {
    Sphere {
        dim: usize,
        n: usize,
        #[serde(default = "geodesic")]
        metric: MetricMode,
        seed: u64,
    },
    Torus {
        n: usize,
        #[serde(default = "default_major")]
        major: f64,
        #[serde(default = "default_minor")]
        minor: f64,
        seed: u64,
    },
    Lens {
        n: usize,
        p: u32,
        q: i64,
        seed: u64,
    },
    /// A space in the CSV or JSON format of [`MetricMeasureSpace`].
    File {
        path: PathBuf,
    },
}

fn geodesic() -> MetricMode {
    MetricMode::Geodesic
}

fn default_major() -> f64 {
    2.5
}

fn default_minor() -> f64 {
    1.0
}

impl SpaceSpec {
    pub fn build(&self) -> Result<MetricMeasureSpace> {
        match self {
            SpaceSpec::Sphere { dim, n, metric, seed } => sample_sphere(*n, SphereDim::from_dim(*dim)?, *metric, *seed),
            SpaceSpec::Torus { n, major, minor, seed } => sample_torus(*n, *major, *minor, *seed),
            SpaceSpec::Lens { n, p, q, seed } => sample_lens(*n, *p, *q, *seed),
            SpaceSpec::File { path } => {
                let text = std::fs::read_to_string(path)?;
                let space = if path.extension().is_some_and(|e| e == "json") {
                    MetricMeasureSpace::from_json(&text)?
                } else {
                    MetricMeasureSpace::from_csv(&text)?
                };
                Ok(space.with_label(path.display().to_string()))
            }
        }
    }
}

/// Bottleneck distance between two seeded samples of the same space, measured
/// in that space's metric. `None` when the specs describe different spaces,
/// different sample sizes, or files (whose points are unknown).
pub fn sample_bottleneck(a: &SpaceSpec, b: &SpaceSpec) -> Result<Option<f64>> {
    let euclid = |x: &[f64], y: &[f64]| x.iter().zip(y).map(|(p, q)| (p - q) * (p - q)).sum::<f64>().sqrt();
    match (a, b) {
        (
            SpaceSpec::Sphere { dim, n, metric, seed },
            SpaceSpec::Sphere { dim: dim_b, n: n_b, metric: metric_b, seed: seed_b },
        ) if dim == dim_b && n == n_b && metric == metric_b => {
            let ambient = SphereDim::from_dim(*dim)?.ambient();
            let (pa, pb) = (sphere_points(*n, ambient, *seed), sphere_points(*n, ambient, *seed_b));
            let d = match metric {
                MetricMode::Geodesic => bottleneck_matching(&pa, &pb, |x, y| great_circle(x, y)),
                MetricMode::Chordal => bottleneck_matching(&pa, &pb, |x, y| euclid(x, y)),
            };
            d.map(Some)
        }
        (
            SpaceSpec::Torus { n, major, minor, seed },
            SpaceSpec::Torus { n: n_b, major: major_b, minor: minor_b, seed: seed_b },
        ) if n == n_b && major == major_b && minor == minor_b => {
            let pa = torus_points(*n, *major, *minor, *seed)?;
            let pb = torus_points(*n, *major, *minor, *seed_b)?;
            bottleneck_matching(&pa, &pb, |x, y| euclid(x, y)).map(Some)
        }
        (SpaceSpec::Lens { n, p, q, seed }, SpaceSpec::Lens { n: n_b, p: p_b, q: q_b, seed: seed_b })
            if n == n_b && p == p_b && q == q_b =>
        {
            let (pa, pb) = (s3_points(*n, *seed), s3_points(*n, *seed_b));
            bottleneck_matching(&pa, &pb, |x, y| lens_distance(x, y, *p, *q)).map(Some)
        }
        _ => Ok(None),
    }
}

/// First `count` eigenvalues of the space rescaled to total mass 1, i.e. of
/// the distance matrix divided by `n` for a uniform sample.
pub fn normalized_spectrum(space: &MetricMeasureSpace, count: usize) -> Result<Vec<f64>> {
    let scale = 1.0 / space.vol();
    let unit = MetricMeasureSpace::with_check(
        space.dist().clone(),
        space.measure().iter().map(|m| m * scale).collect(),
        crate::mmspace::TriangleCheck::Never,
    )?;
    let mut vals = eigenvalues(&KernelMatrix::build(unit))?;
    vals.truncate(count);
    Ok(vals)
}

pub fn spectrum_of(space: impl Into<Arc<MetricMeasureSpace>>) -> Result<Spectrum> {
    eigendecompose(&KernelMatrix::build(space))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HausdorffRow {
    pub left: String,
    pub right: String,
    pub k: usize,
    pub distance: f64,
}

/// Hausdorff distance between the `k`-truncated embeddings of every pair of
/// spectra, for every `k` in `ks`.
pub fn hausdorff_table(spectra: &[(String, Spectrum)], ks: &[usize]) -> Result<Vec<HausdorffRow>> {
    let kmax = ks.iter().copied().max().unwrap_or(0);
    if kmax == 0 {
        return Ok(Vec::new());
    }
    let full: Vec<Embedding> = spectra.iter().map(|(_, s)| embed(s, kmax)).collect::<Result<_>>()?;
    let mut rows = Vec::new();
    for (i, (li, _)) in spectra.iter().enumerate() {
        for (j, (lj, _)) in spectra.iter().enumerate().skip(i + 1) {
            for &k in ks {
                let distance = hausdorff_l2(&full[i].truncated(k)?, &full[j].truncated(k)?)?;
                rows.push(HausdorffRow { left: li.clone(), right: lj.clone(), k, distance });
            }
        }
    }
    Ok(rows)
}

/// Measured constants and their analytic bounds at one truncation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundsRow {
    pub k: usize,
    pub a: f64,
    pub b: f64,
    pub a_bound: f64,
    pub b_bound: f64,
    /// `max_x sqrt|lambda_1| / sqrt(mu(x))`.
    pub norm_bound_via_row_norm: f64,
    /// `max_x sqrt|lambda_1| / mu(x)`.
    pub norm_bound_as_printed: f64,
    /// Points where `|Phi_k(x)|_2` exceeds the pointwise `as_printed` bound.
    pub as_printed_violations: usize,
}

pub fn bounds_table(spectrum: &Spectrum, ab: &AbStandardness, ks: &[usize]) -> Result<Vec<BoundsRow>> {
    let n = spectrum.n();
    let norm_bounds: Vec<_> = (0..n).map(|i| embed_norm_bound(spectrum, i)).collect();
    ks.iter()
        .map(|&k| {
            let emb = embed(spectrum, k)?;
            let summary = error_summary(&emb);
            let analytic = analytic_bounds(spectrum, ab, k)?;
            let as_printed_violations = (0..n).filter(|&i| emb.row_norm(i) > norm_bounds[i].as_printed + 1e-9).count();
            Ok(BoundsRow {
                k,
                a: summary.a,
                b: summary.b,
                a_bound: analytic.a_bound,
                b_bound: analytic.b_bound,
                norm_bound_via_row_norm: norm_bounds.iter().map(|b| b.via_row_norm).fold(0.0, f64::max),
                norm_bound_as_printed: norm_bounds.iter().map(|b| b.as_printed).fold(0.0, f64::max),
                as_printed_violations,
            })
        })
        .collect()
}

/// Geometric radii from `diam/16` to `diam/4`, the default probe set for [`estimate_ab`].
pub fn default_radii(space: &MetricMeasureSpace, count: usize) -> Vec<f64> {
    let d = space.diam();
    if count < 2 {
        return vec![d / 4.0];
    }
    (0..count).map(|i| d / 16.0 * 4f64.powf(i as f64 / (count - 1) as f64)).collect()
}

pub fn estimate_default_ab(space: &MetricMeasureSpace) -> Result<AbStandardness> {
    if space.diam() == 0.0 {
        return estimate_ab(space, &[1.0]);
    }
    estimate_ab(space, &default_radii(space, 8))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Histogram {
    /// `bins + 1` increasing edges.
    pub edges: Vec<f64>,
    pub counts: Vec<usize>,
    pub min: f64,
    pub max: f64,
}

/// Equal-width histogram over `[min, max]`; the last bin is closed.
pub fn histogram(values: &[f64], bins: usize) -> Result<Histogram> {
    if bins == 0 || values.is_empty() {
        return Err(Error::param("histogram needs at least one bin and one value"));
    }
    if values.iter().any(|v| !v.is_finite()) {
        return Err(Error::param("histogram values must be finite"));
    }
    let min = values.iter().copied().fold(f64::INFINITY, f64::min);
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let width = (max - min) / bins as f64;
    let edges: Vec<f64> = (0..=bins).map(|i| if i == bins { max } else { min + width * i as f64 }).collect();
    let mut counts = vec![0; bins];
    for &v in values {
        let b = if width > 0.0 { (((v - min) / width) as usize).min(bins - 1) } else { 0 };
        counts[b] += 1;
    }
    Ok(Histogram { edges, counts, min, max })
}

/// Histogram of `|e_i(x)|` over the points.
pub fn eigenfunction_histogram(spectrum: &Spectrum, i: usize, bins: usize) -> Result<Histogram> {
    if i >= spectrum.len() {
        return Err(Error::param(format!("eigenfunction index {i} out of range")));
    }
    let vals: Vec<f64> = spectrum.vectors().column(i).iter().map(|v| v.abs()).collect();
    histogram(&vals, bins)
}

/// Histogram of `|Phi_k(x)|_2` over the points.
pub fn embedding_norm_histogram(emb: &Embedding, bins: usize) -> Result<Histogram> {
    let vals: Vec<f64> = (0..emb.n()).map(|i| emb.row_norm(i)).collect();
    histogram(&vals, bins)
}
