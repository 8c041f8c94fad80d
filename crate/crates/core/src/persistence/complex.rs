use std::collections::{HashMap, HashSet};

use crate::error::{Error, Result};
use crate::mmspace::MetricMeasureSpace;

/// Upper limit on the number of simplices any builder will produce.
pub const MAX_SIMPLICES: usize = 10_000_000;
/// Highest simplex dimension a Rips complex may be built to.
pub const MAX_RIPS_DIM: usize = 3;

/// A finite abstract simplicial complex on vertices `0..n`.
///
/// Simplices are sorted vertex tuples, stored in (dimension, lexicographic)
/// order; `boundary[s]` lists the indices of the codimension-one faces of `s`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimplicialComplex {
    n: usize,
    simplices: Vec<Vec<usize>>,
    boundary: Vec<Vec<usize>>,
}

impl SimplicialComplex {
    /// The closure under faces of `simplices`. Vertex tuples may be unsorted
    /// and repeated; every vertex `0..n` is included.
    pub fn from_simplices(n: usize, simplices: &[Vec<usize>]) -> Result<Self> {
        let mut all: HashSet<Vec<usize>> = (0..n).map(|v| vec![v]).collect();
        for s in simplices {
            let mut s = s.clone();
            s.sort_unstable();
            s.dedup();
            if s.is_empty() {
                continue;
            }
            if let Some(&v) = s.last().filter(|&&v| v >= n) {
                return Err(Error::param(format!("vertex {v} out of range for {n} vertices")));
            }
            insert_faces(&s, &mut all);
            if all.len() > MAX_SIMPLICES {
                return Err(Error::ComplexTooLarge { count: all.len(), limit: MAX_SIMPLICES });
            }
        }
        Ok(Self::from_closed(n, all.into_iter().collect()))
    }

    /// Builds from a face-closed, duplicate-free list in any order.
    fn from_closed(n: usize, mut simplices: Vec<Vec<usize>>) -> Self {
        simplices.sort_unstable_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        let index: HashMap<&[usize], usize> = simplices.iter().enumerate().map(|(i, s)| (s.as_slice(), i)).collect();
        let boundary = simplices
            .iter()
            .map(|s| {
                if s.len() < 2 {
                    return Vec::new();
                }
                let mut face = Vec::with_capacity(s.len() - 1);
                let mut b: Vec<usize> = (0..s.len())
                    .map(|skip| {
                        face.clear();
                        face.extend(s.iter().enumerate().filter(|&(i, _)| i != skip).map(|(_, &v)| v));
                        index[face.as_slice()]
                    })
                    .collect();
                b.sort_unstable();
                b
            })
            .collect();
        Self { n, simplices, boundary }
    }

    pub fn n_vertices(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.simplices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.simplices.is_empty()
    }

    pub fn simplices(&self) -> &[Vec<usize>] {
        &self.simplices
    }

    pub fn simplex(&self, i: usize) -> &[usize] {
        &self.simplices[i]
    }

    /// Dimension of simplex `i`.
    pub fn simplex_dim(&self, i: usize) -> usize {
        self.simplices[i].len() - 1
    }

    pub fn boundary(&self, i: usize) -> &[usize] {
        &self.boundary[i]
    }

    /// Top simplex dimension, or `None` for the empty complex.
    pub fn dim(&self) -> Option<usize> {
        self.simplices.last().map(|s| s.len() - 1)
    }

    /// Number of simplices in each dimension.
    pub fn f_vector(&self) -> Vec<usize> {
        let mut f = vec![0; self.dim().map_or(0, |d| d + 1)];
        for s in &self.simplices {
            f[s.len() - 1] += 1;
        }
        f
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.f_vector().iter().enumerate().map(|(d, &c)| if d % 2 == 0 { c as i64 } else { -(c as i64) }).sum()
    }

    /// Edges as vertex pairs.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.simplices.iter().filter(|s| s.len() == 2).map(|s| (s[0], s[1]))
    }
}

fn insert_faces(s: &[usize], all: &mut HashSet<Vec<usize>>) {
    if !all.insert(s.to_vec()) || s.len() == 1 {
        return;
    }
    for skip in 0..s.len() {
        let face: Vec<usize> = s.iter().enumerate().filter(|&(i, _)| i != skip).map(|(_, &v)| v).collect();
        insert_faces(&face, all);
    }
}

/// Vietoris-Rips complex of a metric measure space.
pub fn build_rips(mms: &MetricMeasureSpace, scale: f64, maxdim: usize) -> Result<SimplicialComplex> {
    build_rips_with(mms.n(), |i, j| mms.d(i, j), scale, maxdim)
}

/// Vietoris-Rips complex of `n` points under `dist`: every simplex of
/// dimension `<= maxdim` whose pairwise distances are all `<= scale`.
pub fn build_rips_with(
    n: usize,
    dist: impl Fn(usize, usize) -> f64,
    scale: f64,
    maxdim: usize,
) -> Result<SimplicialComplex> {
    if !(scale >= 0.0) {
        return Err(Error::param(format!("Rips scale must be nonnegative, got {scale}")));
    }
    if maxdim > MAX_RIPS_DIM {
        return Err(Error::param(format!("Rips dimension {maxdim} exceeds {MAX_RIPS_DIM}")));
    }
    let upper: Vec<Vec<usize>> = (0..n).map(|i| (i + 1..n).filter(|&j| dist(i, j) <= scale).collect()).collect();
    let mut out: Vec<Vec<usize>> = Vec::new();
    let mut clique = Vec::with_capacity(maxdim + 1);
    for v in 0..n {
        clique.push(v);
        expand(&upper, &mut clique, &upper[v], maxdim, &mut out)?;
        clique.pop();
    }
    Ok(SimplicialComplex::from_closed(n, out))
}

/// Emits `clique` and every extension by vertices of `common`, which holds
/// the neighbours above the clique's largest vertex shared by all its members.
fn expand(
    upper: &[Vec<usize>],
    clique: &mut Vec<usize>,
    common: &[usize],
    maxdim: usize,
    out: &mut Vec<Vec<usize>>,
) -> Result<()> {
    out.push(clique.clone());
    if out.len() > MAX_SIMPLICES {
        return Err(Error::ComplexTooLarge { count: out.len(), limit: MAX_SIMPLICES });
    }
    if clique.len() > maxdim {
        return Ok(());
    }
    for (pos, &w) in common.iter().enumerate() {
        let next: Vec<usize> = intersect(&common[pos + 1..], &upper[w]);
        clique.push(w);
        expand(upper, clique, &next, maxdim, out)?;
        clique.pop();
    }
    Ok(())
}

fn intersect(a: &[usize], b: &[usize]) -> Vec<usize> {
    let (mut i, mut j, mut out) = (0, 0, Vec::new());
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                out.push(a[i]);
                i += 1;
                j += 1;
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn binom(n: usize, k: usize) -> usize {
        (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
    }

    #[test]
    fn closure_and_boundaries() {
        let c = SimplicialComplex::from_simplices(4, &[vec![2, 0, 1], vec![1, 2]]).unwrap();
        assert_eq!(c.f_vector(), vec![4, 3, 1]);
        assert_eq!(c.simplices().last().unwrap(), &vec![0, 1, 2]);
        let tri = c.len() - 1;
        let faces: Vec<&[usize]> = c.boundary(tri).iter().map(|&i| c.simplex(i)).collect();
        assert_eq!(faces, vec![&[0, 1][..], &[0, 2][..], &[1, 2][..]]);
        assert_eq!(c.euler_characteristic(), 2);
        assert!(SimplicialComplex::from_simplices(2, &[vec![0, 2]]).is_err());
    }

    #[test]
    fn rips_extremes() {
        let n = 6;
        let d = |i: usize, j: usize| if i == j { 0.0 } else { 1.0 + (i + j) as f64 * 0.01 };
        let isolated = build_rips_with(n, d, 0.5, 2).unwrap();
        assert_eq!(isolated.f_vector(), vec![n]);
        let full = build_rips_with(n, d, 10.0, 2).unwrap();
        assert_eq!(full.len(), n + binom(n, 2) + binom(n, 3));
        let full3 = build_rips_with(n, d, 10.0, 3).unwrap();
        assert_eq!(full3.f_vector(), vec![6, 15, 20, 15]);
        assert!(build_rips_with(n, d, -1.0, 1).is_err());
        assert!(build_rips_with(n, d, 1.0, 4).is_err());
    }

    #[test]
    fn unit_square_is_a_four_cycle() {
        let p = [(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)];
        let d = |i: usize, j: usize| {
            let (a, b): ((f64, f64), (f64, f64)) = (p[i], p[j]);
            ((a.0 - b.0).powi(2) + (a.1 - b.1).powi(2)).sqrt()
        };
        let c = build_rips_with(4, d, 1.0, 2).unwrap();
        let edges: Vec<(usize, usize)> = c.edges().collect();
        assert_eq!(edges, vec![(0, 1), (0, 3), (1, 2), (2, 3)]);
        assert_eq!(c.dim(), Some(1));
    }
}
