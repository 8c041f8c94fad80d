mod common;

use std::sync::Arc;

use common::{as_triples, oracle_diagram, random_complex, tied_function};
use dke_core::persistence::{
    bottleneck_distance, compute_persistence, euler_curve, graded_bottleneck, lower_star, lp_distance, GradedDiagram,
    PersistencePair, SimplicialComplex,
};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::Rng;

fn diagram(cx: &Arc<SimplicialComplex>, f: &[f64]) -> GradedDiagram {
    compute_persistence(&lower_star(cx.clone(), f).unwrap(), cx.dim().unwrap_or(0))
}

/// Every assignment of the values `0..levels` to the vertices, as a base-`levels` counter.
fn all_functions(n: usize, levels: usize) -> impl Iterator<Item = Vec<f64>> {
    (0..levels.pow(n as u32)).map(move |mut c| {
        (0..n)
            .map(|_| {
                let v = c % levels;
                c /= levels;
                v as f64
            })
            .collect()
    })
}

#[test]
fn matches_rank_oracle_on_all_small_filtrations() {
    let mut r = common::rng(201);
    for _ in 0..50 {
        let n = r.random_range(2..=7);
        let cx = Arc::new(random_complex(&mut r, n));
        // three levels cover every weak order of the vertices on up to 3 values;
        // distinct-value orderings are covered by the permutation pass below
        for f in all_functions(n, 3) {
            assert_eq!(as_triples(&diagram(&cx, &f)), oracle_diagram(&cx, &f));
        }
        let mut perm: Vec<usize> = (0..n).collect();
        for _ in 0..20 {
            perm.shuffle(&mut r);
            let f: Vec<f64> = perm.iter().map(|&p| p as f64).collect();
            assert_eq!(as_triples(&diagram(&cx, &f)), oracle_diagram(&cx, &f));
        }
    }
}

#[test]
fn ties_do_not_depend_on_vertex_labels() {
    let mut r = common::rng(202);
    for _ in 0..100 {
        let n = r.random_range(3..=7);
        let cx = random_complex(&mut r, n);
        let f = tied_function(&mut r, n, 2);
        let mut relabel: Vec<usize> = (0..n).collect();
        relabel.shuffle(&mut r);
        let moved: Vec<Vec<usize>> = cx.simplices().iter().map(|s| s.iter().map(|&v| relabel[v]).collect()).collect();
        let cy = Arc::new(SimplicialComplex::from_simplices(n, &moved).unwrap());
        let mut g = vec![0.0; n];
        for v in 0..n {
            g[relabel[v]] = f[v];
        }
        assert_eq!(diagram(&Arc::new(cx), &f), diagram(&cy, &g));
    }
}

#[test]
fn functional_stability() {
    let mut r = common::rng(203);
    for _ in 0..500 {
        let n = r.random_range(2..=9);
        let cx = Arc::new(random_complex(&mut r, n));
        let f: Vec<f64> = (0..n).map(|_| r.random_range(0.0..1.0)).collect();
        let g: Vec<f64> = f.iter().map(|x| x + r.random_range(-0.2..0.2)).collect();
        let sup = f.iter().zip(&g).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        assert!(graded_bottleneck(&diagram(&cx, &f), &diagram(&cx, &g)) <= sup + 1e-9);
    }
}

#[test]
fn euler_curve_matches_alternating_simplex_count() {
    let mut r = common::rng(204);
    for _ in 0..100 {
        let n = r.random_range(2..=9);
        let cx = Arc::new(random_complex(&mut r, n));
        let f = tied_function(&mut r, n, 4);
        let chi = euler_curve(&diagram(&cx, &f), 10.0).unwrap();
        let vals: Vec<f64> =
            cx.simplices().iter().map(|s| s.iter().map(|&v| f[v]).fold(f64::NEG_INFINITY, f64::max)).collect();
        for t in [-0.25, 0.0, 0.25, 0.5, 0.75, 1.0, 1.25, 1.5, 5.0] {
            let count: i64 =
                (0..cx.len()).filter(|&s| vals[s] <= t).map(|s| if cx.simplex_dim(s) % 2 == 0 { 1 } else { -1 }).sum();
            assert_eq!(chi.eval(t), count as f64, "t = {t}");
        }
    }
}

fn random_diagram(r: &mut impl Rng, max_points: usize) -> GradedDiagram {
    let count = r.random_range(0..=max_points);
    let mut pairs: Vec<PersistencePair> = (0..count)
        .map(|_| {
            let birth = r.random_range(0.0..1.0);
            PersistencePair { dim: r.random_range(0..2), birth, death: birth + r.random_range(0.0..1.0) }
        })
        .collect();
    pairs.push(PersistencePair { dim: 0, birth: r.random_range(0.0..0.5), death: f64::INFINITY });
    GradedDiagram::new(pairs)
}

#[test]
fn euler_curves_are_stable_in_lp() {
    let mut r = common::rng(205);
    for _ in 0..300 {
        let a = random_diagram(&mut r, 6);
        let b = random_diagram(&mut r, 6);
        let db = graded_bottleneck(&a, &b);
        let points = a.len().max(b.len()) as f64;
        let horizon = 3.0;
        let (ca, cb) = (euler_curve(&a, horizon).unwrap(), euler_curve(&b, horizon).unwrap());
        for p in [1.0, 2.0, 3.5] {
            let lhs = lp_distance(&ca, &cb, p).unwrap();
            let rhs = 2f64.powf(1.0 + 1.0 / p) * points * db.powf(1.0 / p);
            assert!(lhs <= rhs + 1e-9, "p = {p}: {lhs} > {rhs}");
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn diagram_bottleneck_matches_enumeration(
        a in prop::collection::vec((0.0f64..1.0, 0.0f64..1.0), 0..6),
        b in prop::collection::vec((0.0f64..1.0, 0.0f64..1.0), 0..6),
    ) {
        let to_diag = |v: &[(f64, f64)]| {
            GradedDiagram::new(v.iter().map(|&(s, l)| PersistencePair { dim: 1, birth: s, death: s + l }).collect())
        };
        let pa: Vec<(f64, f64)> = a.iter().map(|&(s, l)| (s, s + l)).collect();
        let pb: Vec<(f64, f64)> = b.iter().map(|&(s, l)| (s, s + l)).collect();
        let d = bottleneck_distance(&to_diag(&a), &to_diag(&b), 1);
        prop_assert_eq!(d, common::brute_diagram_bottleneck(&pa, &pb));
    }

    #[test]
    fn lp_distance_is_a_metric(seed in any::<u64>()) {
        let mut r = common::rng(seed);
        let curves: Vec<_> = (0..3).map(|_| euler_curve(&random_diagram(&mut r, 5), 3.0).unwrap()).collect();
        let d = |i: usize, j: usize| lp_distance(&curves[i], &curves[j], 1.5).unwrap();
        prop_assert_eq!(d(0, 0), 0.0);
        prop_assert!((d(0, 1) - d(1, 0)).abs() <= 1e-12);
        prop_assert!(d(0, 2) <= d(0, 1) + d(1, 2) + 1e-12);
    }
}
