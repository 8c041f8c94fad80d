//! Shared generators and brute-force oracles for the integration tests.
#![allow(dead_code)]

use dke_core::persistence::{GradedDiagram, SimplicialComplex};
use dke_core::MetricMeasureSpace;
use nalgebra::DMatrix;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn euclidean(pts: &[Vec<f64>]) -> DMatrix<f64> {
    let n = pts.len();
    DMatrix::from_fn(n, n, |i, j| pts[i].iter().zip(&pts[j]).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt())
}

/// Random Euclidean cloud of `n` points in dimension 1..=4 with either a
/// uniform or a random positive measure.
pub fn random_space(rng: &mut ChaCha8Rng, n: usize) -> MetricMeasureSpace {
    let dim = rng.random_range(1..=4);
    let pts: Vec<Vec<f64>> = (0..n).map(|_| (0..dim).map(|_| rng.random_range(-1.0..1.0)).collect()).collect();
    let measure: Vec<f64> = if rng.random_bool(0.3) {
        vec![1.0 / n as f64; n]
    } else {
        (0..n).map(|_| rng.random_range(0.05..2.0)).collect()
    };
    MetricMeasureSpace::new(euclidean(&pts), measure).unwrap()
}

/// The randomized corpus: `count` spaces with `2 <= n <= max_n`.
pub fn corpus(seed: u64, count: usize, max_n: usize) -> Vec<MetricMeasureSpace> {
    let mut r = rng(seed);
    (0..count)
        .map(|_| {
            let n = r.random_range(2..=max_n);
            random_space(&mut r, n)
        })
        .collect()
}

/// Random complex on `n` vertices from a few random top simplices.
pub fn random_complex(rng: &mut ChaCha8Rng, n: usize) -> SimplicialComplex {
    let mut tops = Vec::new();
    for _ in 0..rng.random_range(1..=n + 3) {
        let size = rng.random_range(2..=4.min(n));
        let mut verts: Vec<usize> = (0..n).collect();
        verts.shuffle(rng);
        tops.push(verts[..size].to_vec());
    }
    SimplicialComplex::from_simplices(n, &tops).unwrap()
}

/// Vertex function with values drawn from a small set, so ties are common.
pub fn tied_function(rng: &mut ChaCha8Rng, n: usize, levels: usize) -> Vec<f64> {
    (0..n).map(|_| rng.random_range(0..levels) as f64 * 0.5).collect()
}

// ---------------------------------------------------------------------------
// Persistence oracle: persistent Betti numbers by GF(2) rank computations on
// bitmask chains, then diagram multiplicities by inclusion-exclusion.

fn rank(vectors: &[u128]) -> usize {
    let mut basis: Vec<u128> = Vec::new();
    for &v in vectors {
        let mut v = v;
        for &b in &basis {
            v = v.min(v ^ b);
        }
        if v != 0 {
            basis.push(v);
            basis.sort_unstable_by(|a, b| b.cmp(a));
        }
    }
    basis.len()
}

fn boundary_mask(cx: &SimplicialComplex, s: usize) -> u128 {
    cx.boundary(s).iter().fold(0u128, |m, &f| m | (1u128 << f))
}

/// Basis of the `p`-cycles among simplices accepted by `alive`.
fn cycles(cx: &SimplicialComplex, p: usize, alive: &dyn Fn(usize) -> bool) -> Vec<u128> {
    // eliminate boundaries while tracking combinations
    let mut rows: Vec<(u128, u128)> = (0..cx.len())
        .filter(|&s| cx.simplex_dim(s) == p && alive(s))
        .map(|s| (if p == 0 { 0 } else { boundary_mask(cx, s) }, 1u128 << s))
        .collect();
    let mut out = Vec::new();
    let mut pivots: Vec<(u128, u128)> = Vec::new();
    for (mut b, mut c) in rows.drain(..) {
        loop {
            if b == 0 {
                out.push(c);
                break;
            }
            let hi = 127 - b.leading_zeros();
            match pivots.iter().find(|(pb, _)| 127 - pb.leading_zeros() == hi) {
                Some(&(pb, pc)) => {
                    b ^= pb;
                    c ^= pc;
                }
                None => {
                    pivots.push((b, c));
                    break;
                }
            }
        }
    }
    out
}

fn boundaries(cx: &SimplicialComplex, p: usize, alive: &dyn Fn(usize) -> bool) -> Vec<u128> {
    (0..cx.len()).filter(|&s| cx.simplex_dim(s) == p + 1 && alive(s)).map(|s| boundary_mask(cx, s)).collect()
}

/// Diagram of the lower-star filtration of `f`, as sorted `(dim, birth, death)`.
///
/// Persistent Betti numbers `beta_p^{i,j} = rank(Z_p(K_i) + B_p(K_j)) - rank B_p(K_j)`
/// over the sublevel complexes, then multiplicities by inclusion-exclusion.
pub fn oracle_diagram(cx: &SimplicialComplex, f: &[f64]) -> Vec<(usize, f64, f64)> {
    assert!(cx.len() <= 127, "oracle handles at most 127 simplices");
    let vals: Vec<f64> =
        cx.simplices().iter().map(|s| s.iter().map(|&v| f[v]).fold(f64::NEG_INFINITY, f64::max)).collect();
    let mut levels: Vec<f64> = vals.clone();
    levels.sort_by(f64::total_cmp);
    levels.dedup();
    let m = levels.len();
    let top = cx.dim().unwrap_or(0);
    let mut out = Vec::new();
    for p in 0..=top {
        let z: Vec<Vec<u128>> = levels.iter().map(|&a| cycles(cx, p, &|s| vals[s] <= a)).collect();
        let bd: Vec<Vec<u128>> = levels.iter().map(|&b| boundaries(cx, p, &|s| vals[s] <= b)).collect();
        let bd_rank: Vec<usize> = bd.iter().map(|b| rank(b)).collect();
        // beta[i][j] with 1-based levels; row 0 is the empty complex
        let mut beta = vec![vec![0i64; m + 1]; m + 1];
        for i in 1..=m {
            for j in i..=m {
                let mut both = z[i - 1].clone();
                both.extend_from_slice(&bd[j - 1]);
                beta[i][j] = (rank(&both) - bd_rank[j - 1]) as i64;
            }
        }
        let b = |i: usize, j: usize| if i == 0 { 0 } else { beta[i][j] };
        for i in 1..=m {
            for j in i + 1..=m {
                let mult = b(i, j - 1) - b(i, j) - b(i - 1, j - 1) + b(i - 1, j);
                assert!(mult >= 0);
                for _ in 0..mult {
                    out.push((p, levels[i - 1], levels[j - 1]));
                }
            }
            let inf = b(i, m) - b(i - 1, m);
            assert!(inf >= 0);
            for _ in 0..inf {
                out.push((p, levels[i - 1], f64::INFINITY));
            }
        }
    }
    out.sort_by(|a, b| a.0.cmp(&b.0).then(a.1.total_cmp(&b.1)).then(a.2.total_cmp(&b.2)));
    out
}

/// Every weak ordering of `n` vertices, as functions onto `0..m` for some `m`.
pub fn weak_orderings(n: usize) -> Vec<Vec<f64>> {
    let mut out = Vec::new();
    let mut f = vec![0usize; n];
    loop {
        let m = f.iter().max().map_or(0, |x| x + 1);
        let mut seen = vec![false; m];
        f.iter().for_each(|&v| seen[v] = true);
        if seen.iter().all(|&s| s) {
            out.push(f.iter().map(|&v| v as f64).collect());
        }
        // next function into 0..n in base-n counting
        let mut i = 0;
        while i < n && f[i] == n - 1 {
            f[i] = 0;
            i += 1;
        }
        if i == n {
            return out;
        }
        f[i] += 1;
    }
}

pub fn as_triples(d: &GradedDiagram) -> Vec<(usize, f64, f64)> {
    d.pairs().iter().map(|p| (p.dim, p.birth, p.death)).collect()
}

// ---------------------------------------------------------------------------
// Brute-force matchings.

/// Minimum over bijections of the maximum cost, by enumeration.
pub fn brute_bijection(m: usize, cost: &dyn Fn(usize, usize) -> f64) -> f64 {
    fn rec(i: usize, m: usize, used: &mut [bool], cur: f64, best: &mut f64, cost: &dyn Fn(usize, usize) -> f64) {
        if cur >= *best {
            return;
        }
        if i == m {
            *best = cur;
            return;
        }
        for j in 0..m {
            if !used[j] {
                used[j] = true;
                rec(i + 1, m, used, cur.max(cost(i, j)), best, cost);
                used[j] = false;
            }
        }
    }
    let mut best = f64::INFINITY;
    rec(0, m, &mut vec![false; m], 0.0, &mut best, cost);
    if m == 0 {
        0.0
    } else {
        best
    }
}

/// Bottleneck distance between finite diagrams by enumerating every partial
/// matching; unmatched points pay their distance to the diagonal.
pub fn brute_diagram_bottleneck(a: &[(f64, f64)], b: &[(f64, f64)]) -> f64 {
    fn per(x: (f64, f64)) -> f64 {
        (x.1 - x.0) / 2.0
    }
    fn rec(i: usize, a: &[(f64, f64)], b: &[(f64, f64)], used: &mut [bool], cur: f64, best: &mut f64) {
        if cur >= *best {
            return;
        }
        if i == a.len() {
            let rest = b.iter().zip(used.iter()).filter(|(_, &u)| !u).map(|(&y, _)| per(y)).fold(0.0, f64::max);
            *best = best.min(cur.max(rest));
            return;
        }
        rec(i + 1, a, b, used, cur.max(per(a[i])), best);
        for j in 0..b.len() {
            if !used[j] {
                used[j] = true;
                let c = (a[i].0 - b[j].0).abs().max((a[i].1 - b[j].1).abs());
                rec(i + 1, a, b, used, cur.max(c), best);
                used[j] = false;
            }
        }
    }
    let mut best = f64::INFINITY;
    rec(0, a, b, &mut vec![false; b.len()], 0.0, &mut best);
    best
}
