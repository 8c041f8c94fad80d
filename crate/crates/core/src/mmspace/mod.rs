//! Finite metric measure spaces: a symmetric distance matrix together with
//! strictly positive point masses.

mod io;
mod sample;
mod standard;

pub use io::MmsJson;
pub use sample::{
    great_circle, lens_act, lens_distance, s3_points, sample_lens, sample_sphere, sample_torus, sphere_points,
    torus_points, MetricMode, SphereDim,
};
pub use standard::{estimate_ab, min_ball_mass, AbStandardness};

use nalgebra::DMatrix;

use crate::error::{Error, Result, Violation};

/// Relative tolerance (times the diameter) for the triangle inequality.
pub const TRIANGLE_TOL: f64 = 1e-9;
/// Relative tolerance (times the diameter) for symmetry and zero diagonal.
pub const SYMMETRY_TOL: f64 = 1e-12;
/// Above this size the O(n^3) triangle scan is skipped unless forced.
pub const TRIANGLE_CHECK_LIMIT: usize = 2000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TriangleCheck {
    /// Check when `n <= TRIANGLE_CHECK_LIMIT`.
    #[default]
    Auto,
    Always,
    Never,
}

impl TriangleCheck {
    fn enabled(self, n: usize) -> bool {
        match self {
            TriangleCheck::Auto => n <= TRIANGLE_CHECK_LIMIT,
            TriangleCheck::Always => true,
            TriangleCheck::Never => false,
        }
    }
}

/// All invariant violations found in a candidate space. Empty iff valid.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
    pub triangle_checked: bool,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MetricMeasureSpace {
    dist: DMatrix<f64>,
    measure: Vec<f64>,
    label: String,
}

impl MetricMeasureSpace {
    /// Validates and builds a space. Fails on the first violation found.
    pub fn new(dist: DMatrix<f64>, measure: Vec<f64>) -> Result<Self> {
        Self::with_check(dist, measure, TriangleCheck::Auto)
    }

    pub fn with_check(dist: DMatrix<f64>, measure: Vec<f64>, check: TriangleCheck) -> Result<Self> {
        let report = validate_parts(&dist, &measure, check);
        if let Some(v) = report.violations.into_iter().next() {
            return Err(Error::InvalidSpace(v));
        }
        Ok(Self { dist, measure, label: String::new() })
    }

    pub fn from_rows(rows: &[Vec<f64>], measure: Vec<f64>) -> Result<Self> {
        let n = rows.len();
        if let Some(bad) = rows.iter().find(|r| r.len() != n) {
            return Err(Error::InvalidSpace(Violation::Shape { rows: n, cols: bad.len(), measure_len: measure.len() }));
        }
        let dist = DMatrix::from_fn(n, n, |i, j| rows[i][j]);
        Self::new(dist, measure)
    }

    /// Uniform measure with the given total mass.
    pub fn uniform(dist: DMatrix<f64>, total_mass: f64) -> Result<Self> {
        let n = dist.nrows();
        if n == 0 {
            return Err(Error::param("a space needs at least one point"));
        }
        Self::new(dist, vec![total_mass / n as f64; n])
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn n(&self) -> usize {
        self.measure.len()
    }

    pub fn dist(&self) -> &DMatrix<f64> {
        &self.dist
    }

    #[inline]
    pub fn d(&self, i: usize, j: usize) -> f64 {
        self.dist[(i, j)]
    }

    pub fn measure(&self) -> &[f64] {
        &self.measure
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn vol(&self) -> f64 {
        self.measure.iter().sum()
    }

    pub fn diam(&self) -> f64 {
        self.dist.iter().copied().fold(0.0, f64::max)
    }

    pub fn min_mass(&self) -> f64 {
        self.measure.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn validate(&self) -> ValidationReport {
        validate_parts(&self.dist, &self.measure, TriangleCheck::Always)
    }

    /// The induced subspace on `indices`. With `total_mass`, the subspace gets
    /// the uniform measure of that mass, otherwise it keeps the original atoms.
    pub fn subspace(&self, indices: &[usize], total_mass: Option<f64>) -> Result<Self> {
        if indices.is_empty() {
            return Err(Error::param("subspace needs at least one index"));
        }
        if let Some(&bad) = indices.iter().find(|&&i| i >= self.n()) {
            return Err(Error::param(format!("index {bad} out of range for n = {}", self.n())));
        }
        let m = indices.len();
        let dist = DMatrix::from_fn(m, m, |a, b| self.dist[(indices[a], indices[b])]);
        let measure = match total_mass {
            Some(c) => vec![c / m as f64; m],
            None => indices.iter().map(|&i| self.measure[i]).collect(),
        };
        Ok(Self::with_check(dist, measure, TriangleCheck::Never)?.with_label(self.label.clone()))
    }

    /// Relabels points so that new point `a` is old point `perm[a]`.
    pub fn permuted(&self, perm: &[usize]) -> Result<Self> {
        let mut seen = vec![false; self.n()];
        if perm.len() != self.n() || perm.iter().any(|&p| p >= self.n() || std::mem::replace(&mut seen[p], true)) {
            return Err(Error::param("not a permutation"));
        }
        self.subspace(perm, None)
    }
}

/// Lists every invariant violation of `(dist, measure)`.
pub fn validate_metric(dist: &DMatrix<f64>, measure: &[f64], check: TriangleCheck) -> ValidationReport {
    validate_parts(dist, measure, check)
}

fn validate_parts(dist: &DMatrix<f64>, measure: &[f64], check: TriangleCheck) -> ValidationReport {
    let mut report = ValidationReport::default();
    let n = dist.nrows();
    if dist.ncols() != n || measure.len() != n || n == 0 {
        report.violations.push(Violation::Shape { rows: n, cols: dist.ncols(), measure_len: measure.len() });
        return report;
    }

    let mut finite = true;
    for j in 0..n {
        for i in 0..n {
            if !dist[(i, j)].is_finite() {
                report.violations.push(Violation::NonFinite { i, j });
                finite = false;
            }
        }
    }
    for (i, &m) in measure.iter().enumerate() {
        if !(m > 0.0 && m.is_finite()) {
            report.violations.push(Violation::NonPositiveMeasure { i, value: m });
        }
    }
    if !finite {
        return report;
    }

    let diam = dist.iter().copied().fold(0.0, f64::max);
    let sym_tol = SYMMETRY_TOL * diam;
    for i in 0..n {
        let v = dist[(i, i)];
        if v.abs() > sym_tol {
            report.violations.push(Violation::NonzeroDiagonal { i, value: v });
        }
    }
    for i in 0..n {
        for j in 0..n {
            let v = dist[(i, j)];
            if v < 0.0 {
                report.violations.push(Violation::Negative { i, j, value: v });
            }
            if i < j {
                let diff = (v - dist[(j, i)]).abs();
                if diff > sym_tol {
                    report.violations.push(Violation::Asymmetric { i, j, diff });
                }
            }
        }
    }

    if check.enabled(n) {
        report.triangle_checked = true;
        let tol = TRIANGLE_TOL * diam;
        // Columns of a column-major matrix are contiguous; d(i,l) = d(l,i) is read
        // from column i, d(l,j) from column j.
        for i in 0..n {
            let ci = dist.column(i);
            let ci = ci.as_slice();
            for j in (i + 1)..n {
                let cj = dist.column(j);
                let cj = cj.as_slice();
                let thr = dist[(i, j)] - tol;
                let mut bad = false;
                for (a, b) in ci.iter().zip(cj) {
                    bad |= a + b < thr;
                }
                if bad {
                    let (via, best) = ci
                        .iter()
                        .zip(cj)
                        .map(|(a, b)| a + b)
                        .enumerate()
                        .fold((0, f64::INFINITY), |acc, (l, s)| if s < acc.1 { (l, s) } else { acc });
                    report.violations.push(Violation::Triangle { i, j, via, excess: dist[(i, j)] - best });
                }
            }
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mat(rows: &[&[f64]]) -> DMatrix<f64> {
        let n = rows.len();
        DMatrix::from_fn(n, n, |i, j| rows[i][j])
    }

    #[test]
    fn two_point_space() {
        let m = MetricMeasureSpace::new(mat(&[&[0.0, 1.0], &[1.0, 0.0]]), vec![1.0, 4.0]).unwrap();
        assert_eq!(m.n(), 2);
        assert_eq!(m.vol(), 5.0);
        assert_eq!(m.diam(), 1.0);
    }

    #[test]
    fn one_point_space() {
        let m = MetricMeasureSpace::new(mat(&[&[0.0]]), vec![1.0]).unwrap();
        assert_eq!(m.diam(), 0.0);
        assert!(m.validate().is_valid());
    }

    #[test]
    fn triangle_violation_is_rejected() {
        let d = mat(&[&[0.0, 3.0, 1.0], &[3.0, 0.0, 1.0], &[1.0, 1.0, 0.0]]);
        match MetricMeasureSpace::new(d, vec![1.0; 3]) {
            Err(Error::InvalidSpace(Violation::Triangle { i: 0, j: 1, via: 2, excess })) => {
                assert!((excess - 1.0).abs() < 1e-15)
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn each_violation_kind_is_distinct() {
        let base = mat(&[&[0.0, 1.0, 1.0], &[1.0, 0.0, 1.0], &[1.0, 1.0, 0.0]]);
        assert!(validate_metric(&base, &[1.0; 3], TriangleCheck::Always).is_valid());

        let mut asym = base.clone();
        asym[(0, 1)] = 1.5;
        let r = validate_metric(&asym, &[1.0; 3], TriangleCheck::Always);
        assert!(r.violations.iter().any(|v| matches!(v, Violation::Asymmetric { i: 0, j: 1, .. })));

        let mut diag = base.clone();
        diag[(2, 2)] = 0.5;
        let r = validate_metric(&diag, &[1.0; 3], TriangleCheck::Never);
        assert_eq!(r.violations, vec![Violation::NonzeroDiagonal { i: 2, value: 0.5 }]);

        let mut neg = base.clone();
        neg[(1, 2)] = -1.0;
        neg[(2, 1)] = -1.0;
        let r = validate_metric(&neg, &[1.0; 3], TriangleCheck::Never);
        assert!(r.violations.contains(&Violation::Negative { i: 1, j: 2, value: -1.0 }));

        let r = validate_metric(&base, &[1.0, 0.0, 2.0], TriangleCheck::Never);
        assert_eq!(r.violations, vec![Violation::NonPositiveMeasure { i: 1, value: 0.0 }]);

        let r = validate_metric(&base, &[1.0; 2], TriangleCheck::Never);
        assert!(matches!(r.violations[0], Violation::Shape { measure_len: 2, .. }));
    }

    #[test]
    fn subspace_and_permutation() {
        let d = mat(&[&[0.0, 1.0, 2.0], &[1.0, 0.0, 1.5], &[2.0, 1.5, 0.0]]);
        let m = MetricMeasureSpace::new(d, vec![1.0, 2.0, 3.0]).unwrap();
        let s = m.subspace(&[2, 0], Some(1.0)).unwrap();
        assert_eq!(s.d(0, 1), 2.0);
        assert_eq!(s.measure(), &[0.5, 0.5]);
        let p = m.permuted(&[1, 2, 0]).unwrap();
        assert_eq!(p.d(0, 1), 1.5);
        assert_eq!(p.measure(), &[2.0, 3.0, 1.0]);
        assert!(m.permuted(&[0, 0, 1]).is_err());
    }
}
