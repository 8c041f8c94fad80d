mod common;

use std::sync::Arc;

use dke_core::embedding::embed;
use dke_core::experiments::spectrum_of;
use dke_core::mmspace::sample_torus;
use dke_core::persistence::{build_rips, euler_curve, graded_bottleneck};
use dke_core::transforms::{
    direction_grid, embedded_transform, height_function, iekt, ipkt, transform_distance, transform_distances,
    Direction, EmbeddedComplex, TransformDistance, TransformKind,
};
use rand::Rng;

fn torus_embedding(n: usize, k: usize, seed: u64) -> dke_core::embedding::Embedding {
    embed(&spectrum_of(sample_torus(n, 2.5, 1.0, seed).unwrap()).unwrap(), k).unwrap()
}

/// A direction within roughly `step` of `d`, renormalized onto the sphere.
fn nearby(r: &mut impl Rng, d: &Direction, step: f64) -> Direction {
    let w: Vec<f64> = d.to_vector().iter().map(|x| x + r.random_range(-step..step)).collect();
    Direction::from_vector(&w).unwrap()
}

#[test]
fn intrinsic_transform_is_lipschitz_in_the_direction() {
    let emb = torus_embedding(80, 3, 401);
    let cx = Arc::new(build_rips(emb.space(), 1.2, 2).unwrap());
    let c = emb.coordinate_sup();
    let mut r = common::rng(402);
    for d in direction_grid(3, 30, 403).unwrap() {
        let e = nearby(&mut r, &d, 0.05);
        let eps = d.l1_distance(&e);
        let a = ipkt(&emb, &cx, &[d]).unwrap();
        let b = ipkt(&emb, &cx, &[e]).unwrap();
        let db = graded_bottleneck(&a.entries[0].diagram, &b.entries[0].diagram);
        assert!(db <= c * eps + 1e-9, "{db} > {c} * {eps}");
    }
}

#[test]
fn heights_are_linear_in_the_direction() {
    let emb = torus_embedding(40, 4, 404);
    let pts = emb.real_points();
    let mut r = common::rng(405);
    for _ in 0..20 {
        let w: Vec<f64> = (0..8).map(|_| r.random_range(-1.0..1.0)).collect();
        let d = Direction::from_vector(&w).unwrap();
        let unit = d.to_vector();
        let h = height_function(&emb, &d).unwrap();
        let neg = height_function(&emb, &d.negated()).unwrap();
        for (j, p) in pts.iter().enumerate() {
            let direct: f64 = p.iter().zip(&unit).map(|(a, b)| a * b).sum();
            assert!((h[j] - direct).abs() <= 1e-12);
            assert_eq!(neg[j], -h[j]);
        }
    }
    let wrong = Direction::axis(3, 0, false).unwrap();
    assert!(height_function(&emb, &wrong).is_err());
}

#[test]
fn euler_transform_is_the_alternating_sum_of_its_diagram() {
    let emb = torus_embedding(60, 3, 406);
    let cx = Arc::new(build_rips(emb.space(), 1.0, 2).unwrap());
    let res = iekt(&emb, &cx, &direction_grid(3, 8, 407).unwrap()).unwrap();
    assert_eq!(res.kind, TransformKind::IEkt);
    for e in &res.entries {
        assert_eq!(e.curve.as_ref().unwrap(), &euler_curve(&e.diagram, e.horizon).unwrap());
        // every vertex is present above the horizon, so chi is the Euler characteristic there
        assert_eq!(e.curve.as_ref().unwrap().eval(e.horizon - 0.5), cx.euler_characteristic() as f64);
    }
}

#[test]
fn euler_distance_is_controlled_by_bottleneck() {
    let emb = torus_embedding(50, 3, 408);
    let cx = Arc::new(build_rips(emb.space(), 1.0, 2).unwrap());
    let dirs_a = direction_grid(3, 20, 409).unwrap();
    let mut r = common::rng(410);
    let dirs_b: Vec<Direction> = dirs_a.iter().map(|d| nearby(&mut r, d, 0.2)).collect();
    let a = iekt(&emb, &cx, &dirs_a).unwrap();
    let b = iekt(&emb, &cx, &dirs_b).unwrap();
    for (x, y) in a.entries.iter().zip(&b.entries) {
        let db = graded_bottleneck(&x.diagram, &y.diagram);
        let points = x.diagram.len().max(y.diagram.len()) as f64;
        let horizon = x.horizon.max(y.horizon);
        let l1 = dke_core::persistence::lp_distance(
            &euler_curve(&x.diagram, horizon).unwrap(),
            &euler_curve(&y.diagram, horizon).unwrap(),
            1.0,
        )
        .unwrap();
        assert!(l1 <= 4.0 * points * db + 1e-9, "{l1} > 4 * {points} * {db}");
    }
}

#[test]
fn intrinsic_and_embedded_agree_on_matching_complexes() {
    let emb = torus_embedding(30, 30, 411);
    let dirs = direction_grid(30, 6, 412).unwrap();
    let mut matched = 0;
    for scale in [0.0, 0.05, 0.1, 0.2, 0.4, 0.8] {
        let ec = EmbeddedComplex::build(&emb, scale, 2).unwrap();
        let intrinsic = Arc::new(build_rips(emb.space(), scale, 2).unwrap());
        if !ec.matches(&intrinsic) {
            continue;
        }
        matched += 1;
        let e = embedded_transform(TransformKind::EPkt, &emb, &ec, &dirs).unwrap();
        let i = ipkt(&emb, &intrinsic, &dirs).unwrap();
        assert_eq!(transform_distance(&e, &i, TransformDistance::Bottleneck).unwrap(), 0.0);
    }
    assert!(matched >= 1);
}

#[test]
fn distances_need_the_same_directions() {
    let emb = torus_embedding(30, 2, 413);
    let cx = Arc::new(build_rips(emb.space(), 1.0, 1).unwrap());
    let a = ipkt(&emb, &cx, &direction_grid(2, 4, 1).unwrap()).unwrap();
    let b = ipkt(&emb, &cx, &direction_grid(2, 4, 2).unwrap()).unwrap();
    assert!(transform_distances(&a, &b, TransformDistance::Bottleneck).is_err());
    assert_eq!(transform_distance(&a, &a, TransformDistance::EulerLp { p: 1.0 }).unwrap(), 0.0);
}

#[test]
fn transforms_are_deterministic() {
    let a = torus_embedding(40, 3, 414);
    let b = torus_embedding(40, 3, 414);
    let dirs = direction_grid(3, 5, 415).unwrap();
    let cx = Arc::new(build_rips(a.space(), 1.0, 2).unwrap());
    assert_eq!(ipkt(&a, &cx, &dirs).unwrap(), ipkt(&b, &cx, &dirs).unwrap());
}
