//! The distance kernel operator `D = A Q` of a finite space and its spectrum.
//!
//! `D` is not symmetric, but it is self-adjoint for `<v, w>_Q = v^T Q w`.
//! Eigenpairs are computed from the symmetric similarity `S = Q^{1/2} A Q^{1/2}`:
//! if `S w = lambda w` then `e = Q^{-1/2} w` satisfies `D e = lambda e`, and an
//! orthonormal `w` basis maps to a `Q`-orthonormal `e` basis.

use std::sync::Arc;

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mmspace::MetricMeasureSpace;

/// Eigenvalues with `|lambda| <= ZERO_REL * |lambda_1|` are treated as zero.
pub const ZERO_REL: f64 = 1e-12;
/// Adjacent `|lambda|` closer than `TIE_REL * |lambda_1|` are reported as ties.
pub const TIE_REL: f64 = 1e-10;
/// Threshold below which a sign-convention functional counts as zero.
pub const SIGN_TOL: f64 = 1e-9;

#[derive(Debug, Clone)]
pub struct KernelMatrix {
    space: Arc<MetricMeasureSpace>,
    d: DMatrix<f64>,
}

impl KernelMatrix {
    /// `D_ij = d(x_i, x_j) mu(x_j)`.
    pub fn build(space: impl Into<Arc<MetricMeasureSpace>>) -> Self {
        let space = space.into();
        let mu = space.measure();
        let d = DMatrix::from_fn(space.n(), space.n(), |i, j| space.d(i, j) * mu[j]);
        Self { space, d }
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.d
    }

    /// Diagonal of `Q`.
    pub fn measure(&self) -> &[f64] {
        self.space.measure()
    }

    pub fn space(&self) -> &Arc<MetricMeasureSpace> {
        &self.space
    }

    fn symmetrized(&self) -> DMatrix<f64> {
        let sq: Vec<f64> = self.measure().iter().map(|m| m.sqrt()).collect();
        let n = self.space.n();
        DMatrix::from_fn(n, n, |i, j| sq[i] * self.space.d(i, j) * sq[j])
    }
}

/// Which rule fixed the sign of an eigenvector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SignRule {
    /// `<e, |e|>_Q > 0`.
    MassBalance,
    /// The strictly largest entry in absolute value is positive.
    DominantEntry,
    /// `<1, e>_Q > 0`.
    ConstantFunction,
    /// First entry of largest absolute value is positive.
    FirstLargest,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TieKind {
    /// Two (numerically) equal eigenvalues: the eigenvector basis is not unique.
    Repeated,
    /// `lambda` and `-lambda` both occur: fine for the embedding, but bounds
    /// that need distinct absolute values reject it.
    Opposite,
}

/// Adjacent indices `(index, index + 1)` whose absolute values nearly coincide.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MultiplicityWarning {
    pub index: usize,
    pub gap: f64,
    pub kind: TieKind,
}

#[derive(Debug, Clone)]
pub struct Spectrum {
    space: Arc<MetricMeasureSpace>,
    eigenvalues: Vec<f64>,
    /// Columns are the `Q`-orthonormal eigenvectors.
    vectors: DMatrix<f64>,
    sign_rules: Vec<SignRule>,
    warnings: Vec<MultiplicityWarning>,
}

/// Order of eigenvalues: decreasing `|lambda|`, the positive member of a `+-`
/// pair first.
fn ordering(eigs: &[f64]) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..eigs.len()).collect();
    idx.sort_by(|&a, &b| eigs[b].abs().total_cmp(&eigs[a].abs()).then(eigs[b].total_cmp(&eigs[a])).then(a.cmp(&b)));
    let top = idx.first().map_or(0.0, |&i| eigs[i].abs());
    let tol = TIE_REL * top;
    // exact sorting can put -|l| ahead of +|l| when they differ by rounding only
    for p in 0..idx.len().saturating_sub(1) {
        let (x, y) = (eigs[idx[p]], eigs[idx[p + 1]]);
        if x < 0.0 && y > 0.0 && x.abs() - y.abs() <= tol {
            idx.swap(p, p + 1);
        }
    }
    idx
}

fn tie_warnings(eigs: &[f64]) -> Vec<MultiplicityWarning> {
    let top = eigs.first().map_or(0.0, |l| l.abs());
    let zero = ZERO_REL * top;
    eigs.windows(2)
        .enumerate()
        .filter_map(|(index, w)| {
            let gap = (w[0].abs() - w[1].abs()).abs();
            let both_zero = w[0].abs() <= zero && w[1].abs() <= zero;
            (gap < TIE_REL * top && !both_zero).then(|| MultiplicityWarning {
                index,
                gap,
                kind: if w[0].signum() == w[1].signum() { TieKind::Repeated } else { TieKind::Opposite },
            })
        })
        .collect()
}

/// Builds the symmetric similarity, solves it and returns the ordered,
/// sign-fixed spectrum.
pub fn eigendecompose(kernel: &KernelMatrix) -> Result<Spectrum> {
    let n = kernel.space.n();
    let s = kernel.symmetrized();
    let eig = SymmetricEigen::try_new(s, f64::EPSILON, 200 * n.max(10)).ok_or(Error::EigenNonConvergence { n })?;
    let order = ordering(eig.eigenvalues.as_slice());
    let inv_sq: Vec<f64> = kernel.measure().iter().map(|m| 1.0 / m.sqrt()).collect();
    let eigenvalues: Vec<f64> = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = DMatrix::from_fn(n, n, |row, col| eig.eigenvectors[(row, order[col])] * inv_sq[row]);
    let warnings = tie_warnings(&eigenvalues);
    let spectrum = Spectrum {
        space: kernel.space.clone(),
        eigenvalues,
        vectors,
        sign_rules: vec![SignRule::MassBalance; n],
        warnings,
    };
    Ok(fix_signs(spectrum))
}

/// Eigenvalues only, in spectrum order. Much cheaper than a full decomposition.
pub fn eigenvalues(kernel: &KernelMatrix) -> Result<Vec<f64>> {
    let n = kernel.space.n();
    let vals = kernel.symmetrized().symmetric_eigenvalues();
    if vals.iter().any(|v| !v.is_finite()) {
        return Err(Error::EigenNonConvergence { n });
    }
    let order = ordering(vals.as_slice());
    Ok(order.into_iter().map(|i| vals[i]).collect())
}

fn sign_rule(col: &[f64], mu: &[f64]) -> (SignRule, bool) {
    let mass: f64 = col.iter().zip(mu).map(|(e, m)| e * e.abs() * m).sum();
    if mass.abs() > SIGN_TOL {
        return (SignRule::MassBalance, mass < 0.0);
    }
    let (imax, vmax) =
        col.iter().enumerate().fold((0, 0.0f64), |acc, (i, &v)| if v.abs() > acc.1.abs() { (i, v) } else { acc });
    let runner_up = col.iter().enumerate().filter(|&(i, _)| i != imax).map(|(_, v)| v.abs()).fold(0.0, f64::max);
    if vmax.abs() - runner_up > SIGN_TOL {
        return (SignRule::DominantEntry, vmax < 0.0);
    }
    let total: f64 = col.iter().zip(mu).map(|(e, m)| e * m).sum();
    if total.abs() > SIGN_TOL {
        return (SignRule::ConstantFunction, total < 0.0);
    }
    (SignRule::FirstLargest, vmax < 0.0)
}

/// Applies the sign convention column by column and records the rule used.
pub fn fix_signs(mut spectrum: Spectrum) -> Spectrum {
    let n = spectrum.vectors.nrows();
    let mu = spectrum.space.measure().to_vec();
    for c in 0..spectrum.vectors.ncols() {
        let col: Vec<f64> = spectrum.vectors.column(c).iter().copied().collect();
        let (rule, flip) = sign_rule(&col, &mu);
        if flip {
            for r in 0..n {
                spectrum.vectors[(r, c)] = -spectrum.vectors[(r, c)];
            }
        }
        spectrum.sign_rules[c] = rule;
    }
    spectrum
}

/// `diam(X) vol(X)`, an upper bound on `|lambda_1|`.
pub fn top_eigenvalue_bound(mms: &MetricMeasureSpace) -> f64 {
    mms.diam() * mms.vol()
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SpectrumJson {
    pub eigenvalues: Vec<f64>,
    /// Column-major: `vectors[i]` is the i-th eigenvector.
    pub vectors: Vec<Vec<f64>>,
    pub sign_rule: Vec<SignRule>,
}

impl Spectrum {
    /// Assembles a spectrum from eigenpairs of `D` (columns of `vectors`),
    /// reordering them and applying the sign convention. The vectors must
    /// already be `Q`-orthonormal.
    pub fn from_parts(
        space: impl Into<Arc<MetricMeasureSpace>>,
        eigenvalues: Vec<f64>,
        vectors: DMatrix<f64>,
    ) -> Result<Self> {
        let space = space.into();
        let n = space.n();
        if vectors.nrows() != n || vectors.ncols() != eigenvalues.len() {
            return Err(Error::DimensionMismatch { expected: n, got: vectors.nrows() });
        }
        let order = ordering(&eigenvalues);
        let vals: Vec<f64> = order.iter().map(|&i| eigenvalues[i]).collect();
        let vecs = DMatrix::from_fn(n, order.len(), |r, c| vectors[(r, order[c])]);
        let warnings = tie_warnings(&vals);
        Ok(fix_signs(Spectrum {
            space,
            sign_rules: vec![SignRule::MassBalance; vals.len()],
            eigenvalues: vals,
            vectors: vecs,
            warnings,
        }))
    }

    pub fn n(&self) -> usize {
        self.space.n()
    }

    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }

    pub fn space(&self) -> &Arc<MetricMeasureSpace> {
        &self.space
    }

    pub fn measure(&self) -> &[f64] {
        self.space.measure()
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn vectors(&self) -> &DMatrix<f64> {
        &self.vectors
    }

    pub fn vector(&self, i: usize) -> DVector<f64> {
        self.vectors.column(i).into_owned()
    }

    pub fn sign_rules(&self) -> &[SignRule] {
        &self.sign_rules
    }

    pub fn warnings(&self) -> &[MultiplicityWarning] {
        &self.warnings
    }

    pub fn zero_threshold(&self) -> f64 {
        ZERO_REL * self.eigenvalues.first().map_or(0.0, |l| l.abs())
    }

    /// Eigenvalue `i` (0-based) with the zero threshold applied.
    pub fn effective(&self, i: usize) -> f64 {
        let l = self.eigenvalues.get(i).copied().unwrap_or(0.0);
        if l.abs() <= self.zero_threshold() {
            0.0
        } else {
            l
        }
    }

    /// `A^T Q A - I`, largest absolute entry.
    pub fn orthonormality_defect(&self) -> f64 {
        let q = DMatrix::from_diagonal(&DVector::from_column_slice(self.measure()));
        let g = self.vectors.transpose() * q * &self.vectors;
        let id = DMatrix::<f64>::identity(g.nrows(), g.ncols());
        (g - id).abs().max()
    }

    /// Euclidean norm of row `i` of the eigenvector matrix.
    pub fn row_norm(&self, i: usize) -> f64 {
        self.vectors.row(i).norm()
    }

    pub fn to_json_value(&self) -> SpectrumJson {
        SpectrumJson {
            eigenvalues: self.eigenvalues.clone(),
            vectors: self.vectors.column_iter().map(|c| c.iter().copied().collect()).collect(),
            sign_rule: self.sign_rules.clone(),
        }
    }

    pub fn eigenvalues_csv(&self) -> String {
        eigenvalues_csv(&self.eigenvalues)
    }
}

pub fn eigenvalues_csv(vals: &[f64]) -> String {
    let mut out = String::from("index,eigenvalue\n");
    for (i, v) in vals.iter().enumerate() {
        out.push_str(&format!("{},{}\n", i + 1, v));
    }
    out
}
