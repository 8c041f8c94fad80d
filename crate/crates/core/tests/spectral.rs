mod common;

use dke_core::experiments::spectrum_of;
use dke_core::spectral::{eigenvalues, top_eigenvalue_bound, KernelMatrix, TIE_REL};
use dke_core::MetricMeasureSpace;
use nalgebra::DVector;
use rand::seq::SliceRandom;

#[test]
fn eigenpairs_solve_the_kernel_equation() {
    for m in common::corpus(101, 40, 40) {
        let s = spectrum_of(m.clone()).unwrap();
        let d = KernelMatrix::build(m.clone());
        let scale = s.eigenvalues()[0].abs().max(1.0);
        for i in 0..s.len() {
            let v = s.vector(i);
            let r: DVector<f64> = d.matrix() * &v - &v * s.eigenvalues()[i];
            assert!(r.amax() <= 1e-8 * scale * (1.0 + v.amax()), "residual {} at {i}", r.amax());
        }
    }
}

#[test]
fn q_orthonormal_with_row_norm_identity() {
    for m in common::corpus(102, 60, 60) {
        let s = spectrum_of(m.clone()).unwrap();
        assert!(s.orthonormality_defect() <= 1e-9);
        for i in 0..m.n() {
            assert!((s.row_norm(i) - 1.0 / m.measure()[i].sqrt()).abs() <= 1e-9);
        }
    }
}

#[test]
fn ordering_and_top_bound() {
    for m in common::corpus(103, 60, 30) {
        let vals = eigenvalues(&KernelMatrix::build(m.clone())).unwrap();
        assert!(vals.windows(2).all(|w| w[0].abs() >= w[1].abs() - TIE_REL * vals[0].abs()));
        assert!(vals[0].abs() <= top_eigenvalue_bound(&m) + 1e-9);
    }
}

#[test]
fn spectrum_is_label_invariant() {
    let mut r = common::rng(104);
    for m in common::corpus(105, 30, 25) {
        let mut perm: Vec<usize> = (0..m.n()).collect();
        perm.shuffle(&mut r);
        let a = eigenvalues(&KernelMatrix::build(m.clone())).unwrap();
        let b = eigenvalues(&KernelMatrix::build(m.permuted(&perm).unwrap())).unwrap();
        let scale = a[0].abs().max(1.0);
        assert!(a.iter().zip(&b).all(|(x, y)| (x - y).abs() <= 1e-10 * scale));
    }
}

#[test]
fn eigenvalues_scale_with_the_measure() {
    for m in common::corpus(106, 20, 20) {
        let heavy = MetricMeasureSpace::new(m.dist().clone(), m.measure().iter().map(|x| 3.0 * x).collect()).unwrap();
        let a = eigenvalues(&KernelMatrix::build(m)).unwrap();
        let b = eigenvalues(&KernelMatrix::build(heavy)).unwrap();
        let scale = a[0].abs().max(1.0);
        assert!(a.iter().zip(&b).all(|(x, y)| (3.0 * x - y).abs() <= 1e-10 * scale));
    }
}

#[test]
fn decomposition_is_deterministic() {
    let m = common::corpus(107, 1, 50).remove(0);
    let a = spectrum_of(m.clone()).unwrap();
    let b = spectrum_of(m).unwrap();
    assert_eq!(a.eigenvalues(), b.eigenvalues());
    assert_eq!(a.vectors(), b.vectors());
}
