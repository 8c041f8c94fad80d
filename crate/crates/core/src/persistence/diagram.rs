use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matching::min_feasible_threshold;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PersistencePair {
    pub dim: usize,
    pub birth: f64,
    /// `f64::INFINITY` for an essential class.
    #[serde(with = "death_serde")]
    pub death: f64,
}

impl PersistencePair {
    /// `l_inf` distance to the diagonal.
    pub fn persistence(&self) -> f64 {
        (self.death - self.birth) / 2.0
    }

    pub fn is_finite(&self) -> bool {
        self.death.is_finite()
    }
}

/// JSON has no infinity; essential deaths are written as `null`.
mod death_serde {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
        if v.is_finite() {
            s.serialize_f64(*v)
        } else {
            s.serialize_none()
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        Ok(Option::<f64>::deserialize(d)?.unwrap_or(f64::INFINITY))
    }
}

/// Persistence pairs across all homological degrees, sorted by
/// `(dim, birth, death)`.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct GradedDiagram {
    pairs: Vec<PersistencePair>,
}

impl GradedDiagram {
    pub fn new(mut pairs: Vec<PersistencePair>) -> Self {
        pairs.sort_by(|a, b| a.dim.cmp(&b.dim).then(a.birth.total_cmp(&b.birth)).then(a.death.total_cmp(&b.death)));
        Self { pairs }
    }

    /// Builds a diagram, rejecting `death < birth` and non-finite births.
    pub fn from_pairs(pairs: Vec<PersistencePair>) -> Result<Self> {
        for p in &pairs {
            if !p.birth.is_finite() || p.death.is_nan() || p.death < p.birth {
                return Err(Error::param(format!("invalid pair ({}, {}) in degree {}", p.birth, p.death, p.dim)));
            }
        }
        Ok(Self::new(pairs))
    }

    pub fn pairs(&self) -> &[PersistencePair] {
        &self.pairs
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// Highest degree present.
    pub fn max_dim(&self) -> Option<usize> {
        self.pairs.iter().map(|p| p.dim).max()
    }

    /// `(birth, death)` of the pairs in degree `dim`.
    pub fn degree(&self, dim: usize) -> Vec<(f64, f64)> {
        self.pairs.iter().filter(|p| p.dim == dim).map(|p| (p.birth, p.death)).collect()
    }

    /// Largest finite coordinate, or `None` if there is none.
    pub fn max_finite_value(&self) -> Option<f64> {
        self.pairs.iter().flat_map(|p| [p.birth, p.death]).filter(|v| v.is_finite()).reduce(f64::max)
    }

    /// CSV `dim,birth,death` with `inf` for essential classes.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("dim,birth,death\n");
        for p in &self.pairs {
            let death = if p.death.is_finite() { p.death.to_string() } else { "inf".into() };
            out.push_str(&format!("{},{},{}\n", p.dim, p.birth, death));
        }
        out
    }
}

/// Bottleneck distance between the degree-`dim` parts of two diagrams under
/// the `l_inf` metric, unmatched points going to the diagonal. Essential
/// classes are matched only with each other; different counts give `+inf`.
pub fn bottleneck_distance(a: &GradedDiagram, b: &GradedDiagram, dim: usize) -> f64 {
    let (fa, ia) = split(a, dim);
    let (fb, ib) = split(b, dim);
    if ia.len() != ib.len() {
        return f64::INFINITY;
    }
    // sorted births pair up optimally on the line
    let essential = ia.iter().zip(&ib).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
    essential.max(finite_bottleneck(&fa, &fb))
}

/// Maximum of [`bottleneck_distance`] over all degrees present in either diagram.
pub fn graded_bottleneck(a: &GradedDiagram, b: &GradedDiagram) -> f64 {
    let top = a.max_dim().max(b.max_dim());
    top.map_or(0.0, |t| (0..=t).map(|d| bottleneck_distance(a, b, d)).fold(0.0, f64::max))
}

fn split(d: &GradedDiagram, dim: usize) -> (Vec<(f64, f64)>, Vec<f64>) {
    let mut finite = Vec::new();
    let mut essential = Vec::new();
    for p in d.pairs.iter().filter(|p| p.dim == dim) {
        if p.is_finite() {
            finite.push((p.birth, p.death));
        } else {
            essential.push(p.birth);
        }
    }
    essential.sort_by(f64::total_cmp);
    (finite, essential)
}

/// Standard reduction to a square assignment: left is `A` followed by the
/// diagonal projections of `B`, right is `B` followed by those of `A`.
pub(crate) fn finite_bottleneck(a: &[(f64, f64)], b: &[(f64, f64)]) -> f64 {
    let (p, q) = (a.len(), b.len());
    let per = |x: &(f64, f64)| (x.1 - x.0) / 2.0;
    let linf = |x: &(f64, f64), y: &(f64, f64)| (x.0 - y.0).abs().max((x.1 - y.1).abs());
    let cost = |u: usize, v: usize| match (u < p, v < q) {
        (true, true) => linf(&a[u], &b[v]),
        (true, false) => {
            if v - q == u {
                per(&a[u])
            } else {
                f64::INFINITY
            }
        }
        (false, true) => {
            if u - p == v {
                per(&b[v])
            } else {
                f64::INFINITY
            }
        }
        (false, false) => 0.0,
    };
    let mut candidates: Vec<f64> = a
        .iter()
        .flat_map(|x| b.iter().map(move |y| linf(x, y)))
        .chain(a.iter().map(per))
        .chain(b.iter().map(per))
        .collect();
    candidates.push(0.0);
    min_feasible_threshold(p + q, &mut candidates, cost).expect("matching everything to the diagonal is feasible")
}
