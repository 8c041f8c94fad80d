use std::sync::Arc;

use super::complex::SimplicialComplex;
use super::diagram::{GradedDiagram, PersistencePair};
use crate::error::{Error, Result};

/// A lower-star filtration: each simplex enters at the largest value of its
/// vertices. Ties are broken by dimension, then lexicographically.
#[derive(Debug, Clone)]
pub struct Filtration {
    complex: Arc<SimplicialComplex>,
    values: Vec<f64>,
    /// Simplex indices in filtration order.
    order: Vec<usize>,
}

pub fn lower_star(complex: impl Into<Arc<SimplicialComplex>>, f: &[f64]) -> Result<Filtration> {
    let complex = complex.into();
    if f.len() != complex.n_vertices() {
        return Err(Error::DimensionMismatch { expected: complex.n_vertices(), got: f.len() });
    }
    if let Some(i) = f.iter().position(|v| !v.is_finite()) {
        return Err(Error::param(format!("vertex function is not finite at vertex {i}")));
    }
    let values: Vec<f64> =
        complex.simplices().iter().map(|s| s.iter().map(|&v| f[v]).fold(f64::NEG_INFINITY, f64::max)).collect();
    // complex order is already (dimension, lexicographic)
    let mut order: Vec<usize> = (0..complex.len()).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]).then(a.cmp(&b)));
    Ok(Filtration { complex, values, order })
}

impl Filtration {
    pub fn complex(&self) -> &Arc<SimplicialComplex> {
        &self.complex
    }

    /// Filtration value of simplex `i` (complex index).
    pub fn value(&self, i: usize) -> f64 {
        self.values[i]
    }

    pub fn order(&self) -> &[usize] {
        &self.order
    }

    /// Every face enters no later than its cofaces.
    pub fn is_monotone(&self) -> bool {
        let mut pos = vec![0; self.order.len()];
        for (p, &s) in self.order.iter().enumerate() {
            pos[s] = p;
        }
        (0..self.complex.len())
            .all(|s| self.complex.boundary(s).iter().all(|&f| pos[f] < pos[s] && self.values[f] <= self.values[s]))
    }
}

/// Symmetric difference of two sorted columns.
fn add_column(target: &mut Vec<usize>, other: &[usize], scratch: &mut Vec<usize>) {
    scratch.clear();
    let (mut i, mut j) = (0, 0);
    while i < target.len() && j < other.len() {
        match target[i].cmp(&other[j]) {
            std::cmp::Ordering::Less => {
                scratch.push(target[i]);
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                scratch.push(other[j]);
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                i += 1;
                j += 1;
            }
        }
    }
    scratch.extend_from_slice(&target[i..]);
    scratch.extend_from_slice(&other[j..]);
    std::mem::swap(target, scratch);
}

/// Sublevel persistence over `Z/2` in degrees `0..=maxdim`, by column
/// reduction of the boundary matrix with clearing. Zero-length bars are dropped.
pub fn compute_persistence(filtration: &Filtration, maxdim: usize) -> GradedDiagram {
    let cx = &filtration.complex;
    let m = cx.len();
    let mut pos = vec![0usize; m];
    for (p, &s) in filtration.order.iter().enumerate() {
        pos[s] = p;
    }
    let top = cx.dim().unwrap_or(0);
    // columns and pivots indexed by filtration position
    let mut columns: Vec<Vec<usize>> = vec![Vec::new(); m];
    let mut pivot_of: Vec<usize> = vec![usize::MAX; m];
    let mut paired = vec![false; m];
    let mut scratch = Vec::new();
    let mut pairs = Vec::new();

    // process high dimensions first so that positive columns are cleared
    for d in (1..=top).rev() {
        for (p, &s) in filtration.order.iter().enumerate() {
            if cx.simplex_dim(s) != d || paired[p] {
                continue;
            }
            let mut col: Vec<usize> = cx.boundary(s).iter().map(|&f| pos[f]).collect();
            col.sort_unstable();
            while let Some(&low) = col.last() {
                let owner = pivot_of[low];
                if owner == usize::MAX {
                    break;
                }
                add_column(&mut col, &columns[owner], &mut scratch);
            }
            if let Some(&low) = col.last() {
                pivot_of[low] = p;
                paired[low] = true;
                paired[p] = true;
                let (birth_s, death_s) = (filtration.order[low], s);
                let dim = d - 1;
                if dim <= maxdim {
                    pairs.push(PersistencePair {
                        dim,
                        birth: filtration.values[birth_s],
                        death: filtration.values[death_s],
                    });
                }
                columns[p] = col;
            }
        }
    }
    for (p, &s) in filtration.order.iter().enumerate() {
        let dim = cx.simplex_dim(s);
        if !paired[p] && dim <= maxdim {
            pairs.push(PersistencePair { dim, birth: filtration.values[s], death: f64::INFINITY });
        }
    }
    GradedDiagram::new(pairs.into_iter().filter(|p| p.death > p.birth).collect())
}
