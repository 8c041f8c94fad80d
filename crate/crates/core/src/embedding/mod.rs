//! The distance kernel embedding `Phi_k(x) = (alpha_1(x), ..., alpha_k(x))`
//! with `alpha_i = sqrt(lambda_i) e_i`, the square root of a negative
//! eigenvalue taken on the positive imaginary axis.

mod bounds;
mod hausdorff;

pub use bounds::{
    analytic_bounds, eigenfunction_sup_bound, embed_norm_bound, gh_bound_finite, gh_bound_general, stability_bound,
    trunc_error_bound, weyl_dk_bounds, AnalyticBounds, EmbedNormBound, GeneralGhBound, WeylDkBound,
};
pub use hausdorff::{bottleneck_matching, directed_hausdorff, hausdorff_l2};

use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mmspace::MetricMeasureSpace;
use crate::spectral::Spectrum;

/// Largest imaginary residue tolerated when reading a reconstructed distance.
pub const IMAG_TOL: f64 = 1e-9;

#[derive(Debug, Clone)]
pub struct Embedding {
    k: usize,
    /// Row-major `n x k`.
    coords: Vec<Complex64>,
    eigenvalues: Vec<f64>,
    space: Arc<MetricMeasureSpace>,
}

/// `sqrt(lambda)` with the positive-imaginary branch for negative `lambda`.
pub fn coord_scale(lambda: f64) -> Complex64 {
    if lambda >= 0.0 {
        Complex64::new(lambda.sqrt(), 0.0)
    } else {
        Complex64::new(0.0, (-lambda).sqrt())
    }
}

/// The first `k` coordinates. Eigenvalues under the zero threshold give zero columns.
pub fn embed(spectrum: &Spectrum, k: usize) -> Result<Embedding> {
    let n = spectrum.n();
    if k == 0 || k > spectrum.len() {
        return Err(Error::param(format!("embedding dimension k = {k} must lie in 1..={}", spectrum.len())));
    }
    let eigenvalues: Vec<f64> = (0..k).map(|j| spectrum.effective(j)).collect();
    let scales: Vec<Complex64> = eigenvalues.iter().map(|&l| coord_scale(l)).collect();
    let v = spectrum.vectors();
    let mut coords = Vec::with_capacity(n * k);
    for i in 0..n {
        for (j, s) in scales.iter().enumerate() {
            coords.push(s * v[(i, j)]);
        }
    }
    Ok(Embedding { k, coords, eigenvalues, space: spectrum.space().clone() })
}

/// `[v, w] = sum v_i w_i`, without conjugation.
pub fn bilinear(v: &[Complex64], w: &[Complex64]) -> Result<Complex64> {
    if v.len() != w.len() {
        return Err(Error::DimensionMismatch { expected: v.len(), got: w.len() });
    }
    Ok(bilinear_unchecked(v, w))
}

#[inline]
fn bilinear_unchecked(v: &[Complex64], w: &[Complex64]) -> Complex64 {
    v.iter().zip(w).map(|(a, b)| a * b).sum()
}

pub fn l2_norm(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

impl Embedding {
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn n(&self) -> usize {
        self.space.n()
    }

    pub fn row(&self, i: usize) -> &[Complex64] {
        &self.coords[i * self.k..(i + 1) * self.k]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[Complex64]> {
        self.coords.chunks_exact(self.k)
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn space(&self) -> &Arc<MetricMeasureSpace> {
        &self.space
    }

    /// The first `k` coordinates of this embedding.
    pub fn truncated(&self, k: usize) -> Result<Embedding> {
        if k == 0 || k > self.k {
            return Err(Error::param(format!("cannot truncate a {}-dimensional embedding to {k}", self.k)));
        }
        let coords = self.rows().flat_map(|r| r[..k].iter().copied()).collect();
        Ok(Embedding { k, coords, eigenvalues: self.eigenvalues[..k].to_vec(), space: self.space.clone() })
    }

    /// `Re [Phi(x_i), Phi(x_j)]`. Columns are purely real or purely imaginary,
    /// so the imaginary part vanishes up to rounding.
    pub fn reconstruct_distance(&self, i: usize, j: usize) -> f64 {
        let z = bilinear_unchecked(self.row(i), self.row(j));
        debug_assert!(z.im.abs() <= IMAG_TOL, "imaginary residue {}", z.im);
        z.re
    }

    /// `|[Phi(x_i), Phi(x_j)] - d(x_i, x_j)|`.
    pub fn pair_error(&self, i: usize, j: usize) -> f64 {
        (self.reconstruct_distance(i, j) - self.space.d(i, j)).abs()
    }

    pub fn row_norm(&self, i: usize) -> f64 {
        l2_norm(self.row(i))
    }

    /// Largest absolute value of any real or imaginary coordinate.
    pub fn coordinate_sup(&self) -> f64 {
        self.coords.iter().map(|z| z.re.abs().max(z.im.abs())).fold(0.0, f64::max)
    }

    /// Points of `R^{2k}`: real parts followed by imaginary parts.
    pub fn real_points(&self) -> Vec<Vec<f64>> {
        self.rows().map(|r| r.iter().map(|z| z.re).chain(r.iter().map(|z| z.im)).collect()).collect()
    }

    /// CSV with columns `re_1, im_1, ..., re_k, im_k`.
    pub fn to_csv(&self) -> String {
        let header: Vec<String> = (1..=self.k).flat_map(|j| [format!("re_{j}"), format!("im_{j}")]).collect();
        let mut out = header.join(",");
        out.push('\n');
        for r in self.rows() {
            let line: Vec<String> = r.iter().flat_map(|z| [z.re.to_string(), z.im.to_string()]).collect();
            out.push_str(&line.join(","));
            out.push('\n');
        }
        out
    }

    pub fn to_json_value(&self) -> EmbeddingJson {
        EmbeddingJson {
            k: self.k,
            eigenvalues: self.eigenvalues.clone(),
            rows: self.rows().map(|r| r.iter().flat_map(|z| [z.re, z.im]).collect()).collect(),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EmbeddingJson {
    pub k: usize,
    pub eigenvalues: Vec<f64>,
    /// Each row interleaves `re, im` per coordinate, as in the CSV.
    pub rows: Vec<Vec<f64>>,
}

/// `A = sup |E_{X,k}|` and `B = max_x |Phi_k(x)|_2`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ErrorSummary {
    pub a: f64,
    pub b: f64,
    /// Row-major `n x n` error matrix, when requested.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub errors: Option<Vec<f64>>,
}

pub fn error_summary(emb: &Embedding) -> ErrorSummary {
    summary(emb, false)
}

pub fn error_summary_with_matrix(emb: &Embedding) -> ErrorSummary {
    summary(emb, true)
}

fn summary(emb: &Embedding, keep: bool) -> ErrorSummary {
    let n = emb.n();
    let mut errors = keep.then(|| vec![0.0; n * n]);
    let mut a = 0.0f64;
    for i in 0..n {
        for j in i..n {
            let e = emb.pair_error(i, j);
            a = a.max(e);
            if let Some(m) = errors.as_mut() {
                m[i * n + j] = e;
                m[j * n + i] = e;
            }
        }
    }
    let b = (0..n).map(|i| emb.row_norm(i)).fold(0.0, f64::max);
    ErrorSummary { a, b, errors }
}
