//! Kernel transforms: persistence diagrams and Euler curves of the height
//! functions `f(x) = sum u_i Re alpha_i(x) + v_i Im alpha_i(x)` over directions
//! `(u, v)` on the unit sphere of `R^{2k}`.
//!
//! The intrinsic transforms filter a complex built on the original space; the
//! embedded ones filter a Rips complex on the image of the embedding.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::embedding::Embedding;
use crate::error::{Error, Result};
use crate::mmspace::sphere_points;
use crate::persistence::{
    build_rips_with, compute_persistence, euler_curve, graded_bottleneck, lower_star, lp_distance, GradedDiagram,
    SimplicialComplex, StepFunction,
};

/// Embedded points closer than this (relative to the coordinate sup norm)
/// are identified.
pub const DUPLICATE_REL: f64 = 1e-9;
/// Directions of two transforms must agree to this tolerance to be compared.
pub const DIRECTION_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Direction {
    pub u: Vec<f64>,
    pub v: Vec<f64>,
}

impl Direction {
    /// Normalizes `(u, v)`; rejects mismatched lengths and the zero vector.
    pub fn new(u: Vec<f64>, v: Vec<f64>) -> Result<Self> {
        if u.len() != v.len() {
            return Err(Error::DimensionMismatch { expected: u.len(), got: v.len() });
        }
        let norm = u.iter().chain(&v).map(|x| x * x).sum::<f64>().sqrt();
        if !(norm > 0.0) || !norm.is_finite() {
            return Err(Error::param("direction must be a nonzero finite vector"));
        }
        Ok(Self { u: u.iter().map(|x| x / norm).collect(), v: v.iter().map(|x| x / norm).collect() })
    }

    /// Splits a vector of `R^{2k}` as `(u, v)`.
    pub fn from_vector(w: &[f64]) -> Result<Self> {
        if w.len() % 2 != 0 {
            return Err(Error::param("direction vector must have even length"));
        }
        let k = w.len() / 2;
        Self::new(w[..k].to_vec(), w[k..].to_vec())
    }

    /// The `i`-th real or imaginary axis.
    pub fn axis(k: usize, i: usize, imaginary: bool) -> Result<Self> {
        if i >= k {
            return Err(Error::param(format!("axis {i} out of range for k = {k}")));
        }
        let mut w = vec![0.0; 2 * k];
        w[if imaginary { k + i } else { i }] = 1.0;
        Self::from_vector(&w)
    }

    pub fn k(&self) -> usize {
        self.u.len()
    }

    pub fn to_vector(&self) -> Vec<f64> {
        self.u.iter().chain(&self.v).copied().collect()
    }

    pub fn negated(&self) -> Self {
        Self { u: self.u.iter().map(|x| -x).collect(), v: self.v.iter().map(|x| -x).collect() }
    }

    pub fn l1_distance(&self, other: &Self) -> f64 {
        self.u.iter().chain(&self.v).zip(other.u.iter().chain(&other.v)).map(|(a, b)| (a - b).abs()).sum()
    }
}

/// `count` seeded uniform directions on `S^{2k-1}`.
pub fn direction_grid(k: usize, count: usize, seed: u64) -> Result<Vec<Direction>> {
    if k == 0 {
        return Err(Error::param("k must be at least 1"));
    }
    sphere_points(count, 2 * k, seed).iter().map(|w| Direction::from_vector(w)).collect()
}

/// `f(x_j) = sum_i u_i Re alpha_i(x_j) + v_i Im alpha_i(x_j)`.
pub fn height_function(emb: &Embedding, dir: &Direction) -> Result<Vec<f64>> {
    if dir.k() != emb.k() {
        return Err(Error::DimensionMismatch { expected: emb.k(), got: dir.k() });
    }
    Ok(emb
        .rows()
        .map(|r| r.iter().zip(dir.u.iter().zip(&dir.v)).map(|(z, (u, v))| u * z.re + v * z.im).sum())
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TransformKind {
    IPkt,
    EPkt,
    IEkt,
    EEkt,
}

impl TransformKind {
    pub fn is_euler(self) -> bool {
        matches!(self, TransformKind::IEkt | TransformKind::EEkt)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TransformEntry {
    pub direction: Direction,
    pub diagram: GradedDiagram,
    /// Euler curve, for the Euler transforms.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub curve: Option<StepFunction>,
    /// Maximum height plus one; essential bars end here in the curve.
    pub horizon: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TransformResult {
    pub kind: TransformKind,
    pub k: usize,
    /// Rips scale of the embedded complex; `None` for intrinsic transforms.
    pub rips_scale: Option<f64>,
    /// Simplex counts per dimension of the filtered complex.
    pub f_vector: Vec<usize>,
    pub entries: Vec<TransformEntry>,
}

/// The Rips complex on the embedded point set, after identifying duplicates.
#[derive(Debug, Clone)]
pub struct EmbeddedComplex {
    pub complex: Arc<SimplicialComplex>,
    /// Original point index of each vertex.
    pub representatives: Vec<usize>,
    /// Vertex of each original point.
    pub vertex_of: Vec<usize>,
    pub scale: f64,
}

impl EmbeddedComplex {
    pub fn build(emb: &Embedding, scale: f64, maxdim: usize) -> Result<Self> {
        let pts = emb.real_points();
        let tol = DUPLICATE_REL * emb.coordinate_sup().max(f64::MIN_POSITIVE);
        let mut representatives: Vec<usize> = Vec::new();
        let mut vertex_of = Vec::with_capacity(pts.len());
        for (i, p) in pts.iter().enumerate() {
            match representatives.iter().position(|&r| euclid(&pts[r], p) <= tol) {
                Some(v) => vertex_of.push(v),
                None => {
                    vertex_of.push(representatives.len());
                    representatives.push(i);
                }
            }
        }
        let complex = build_rips_with(
            representatives.len(),
            |a, b| euclid(&pts[representatives[a]], &pts[representatives[b]]),
            scale,
            maxdim,
        )?;
        Ok(Self { complex: Arc::new(complex), representatives, vertex_of, scale })
    }

    /// True when no points were identified and the complex equals `intrinsic`
    /// under the identity vertex map, in which case intrinsic and embedded
    /// transforms coincide.
    pub fn matches(&self, intrinsic: &SimplicialComplex) -> bool {
        self.representatives.len() == intrinsic.n_vertices()
            && self.representatives.iter().enumerate().all(|(v, &r)| v == r)
            && self.complex.simplices() == intrinsic.simplices()
    }
}

fn euclid(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

fn run(
    kind: TransformKind,
    emb: &Embedding,
    complex: &Arc<SimplicialComplex>,
    vertex_heights: impl Fn(&[f64]) -> Vec<f64>,
    dirs: &[Direction],
    rips_scale: Option<f64>,
) -> Result<TransformResult> {
    let maxdim = complex.dim().unwrap_or(0);
    let entries = dirs
        .iter()
        .map(|dir| {
            let h = vertex_heights(&height_function(emb, dir)?);
            let diagram = compute_persistence(&lower_star(complex.clone(), &h)?, maxdim);
            let horizon = h.iter().copied().fold(f64::NEG_INFINITY, f64::max) + 1.0;
            let curve = if kind.is_euler() { Some(euler_curve(&diagram, horizon)?) } else { None };
            Ok(TransformEntry { direction: dir.clone(), diagram, curve, horizon })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(TransformResult { kind, k: emb.k(), rips_scale, f_vector: complex.f_vector(), entries })
}

fn check_vertices(emb: &Embedding, complex: &SimplicialComplex) -> Result<()> {
    if complex.n_vertices() != emb.n() {
        return Err(Error::DimensionMismatch { expected: emb.n(), got: complex.n_vertices() });
    }
    Ok(())
}

/// Intrinsic persistence transform on a complex over the points of the space.
pub fn ipkt(emb: &Embedding, complex: &Arc<SimplicialComplex>, dirs: &[Direction]) -> Result<TransformResult> {
    check_vertices(emb, complex)?;
    run(TransformKind::IPkt, emb, complex, <[f64]>::to_vec, dirs, None)
}

/// Intrinsic Euler transform.
pub fn iekt(emb: &Embedding, complex: &Arc<SimplicialComplex>, dirs: &[Direction]) -> Result<TransformResult> {
    check_vertices(emb, complex)?;
    run(TransformKind::IEkt, emb, complex, <[f64]>::to_vec, dirs, None)
}

fn embedded(kind: TransformKind, emb: &Embedding, ec: &EmbeddedComplex, dirs: &[Direction]) -> Result<TransformResult> {
    let reps = &ec.representatives;
    run(kind, emb, &ec.complex, |h| reps.iter().map(|&r| h[r]).collect(), dirs, Some(ec.scale))
}

/// Embedded persistence transform: a Rips complex of dimension `maxdim` at
/// `rips_scale` on the image of the embedding in `R^{2k}`.
pub fn epkt(emb: &Embedding, dirs: &[Direction], rips_scale: f64, maxdim: usize) -> Result<TransformResult> {
    embedded(TransformKind::EPkt, emb, &EmbeddedComplex::build(emb, rips_scale, maxdim)?, dirs)
}

/// Embedded Euler transform.
pub fn eekt(emb: &Embedding, dirs: &[Direction], rips_scale: f64, maxdim: usize) -> Result<TransformResult> {
    embedded(TransformKind::EEkt, emb, &EmbeddedComplex::build(emb, rips_scale, maxdim)?, dirs)
}

/// Embedded transform on a prebuilt embedded complex.
pub fn embedded_transform(
    kind: TransformKind,
    emb: &Embedding,
    ec: &EmbeddedComplex,
    dirs: &[Direction],
) -> Result<TransformResult> {
    if !matches!(kind, TransformKind::EPkt | TransformKind::EEkt) {
        return Err(Error::param("embedded_transform needs an embedded kind"));
    }
    embedded(kind, emb, ec, dirs)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "mode")]
pub enum TransformDistance {
    /// Graded bottleneck distance between diagrams.
    Bottleneck,
    /// `L^p` distance between Euler curves, both truncated at the larger horizon.
    EulerLp { p: f64 },
}

/// Per-direction distances between two transforms over the same directions.
pub fn transform_distances(a: &TransformResult, b: &TransformResult, mode: TransformDistance) -> Result<Vec<f64>> {
    if a.entries.len() != b.entries.len() {
        return Err(Error::DimensionMismatch { expected: a.entries.len(), got: b.entries.len() });
    }
    a.entries
        .iter()
        .zip(&b.entries)
        .map(|(x, y)| {
            let same = x.direction.k() == y.direction.k() && x.direction.l1_distance(&y.direction) <= DIRECTION_TOL;
            if !same {
                return Err(Error::param("transforms were evaluated on different directions"));
            }
            match mode {
                TransformDistance::Bottleneck => Ok(graded_bottleneck(&x.diagram, &y.diagram)),
                TransformDistance::EulerLp { p } => {
                    // separate horizons would leave an artificial tail on essential classes
                    let horizon = x.horizon.max(y.horizon);
                    lp_distance(&euler_curve(&x.diagram, horizon)?, &euler_curve(&y.diagram, horizon)?, p)
                }
            }
        })
        .collect()
}

/// Maximum of [`transform_distances`] over the directions; 0 for none.
pub fn transform_distance(a: &TransformResult, b: &TransformResult, mode: TransformDistance) -> Result<f64> {
    Ok(transform_distances(a, b, mode)?.into_iter().fold(0.0, f64::max))
}

/// Outcome of comparing two embedded transforms on sampled directions.
/// Equality on finitely many directions does not prove equality of the
/// transforms; `gh_bound` is the distance bound that equality would imply.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EqualityReport {
    pub directions: usize,
    pub max_distance: f64,
    /// No sampled direction distinguishes the two transforms.
    pub not_falsified: bool,
    /// `|E_{X,k}|_inf + |E_{Y,k}|_inf`.
    pub gh_bound: f64,
}

pub fn equality_report(
    a: &TransformResult,
    b: &TransformResult,
    mode: TransformDistance,
    sup_error_x: f64,
    sup_error_y: f64,
) -> Result<EqualityReport> {
    let max_distance = transform_distance(a, b, mode)?;
    Ok(EqualityReport {
        directions: a.entries.len(),
        max_distance,
        not_falsified: max_distance == 0.0,
        gh_bound: sup_error_x + sup_error_y,
    })
}
