use num_complex::Complex64;

use super::Embedding;
use crate::error::{Error, Result};
use crate::matching::min_feasible_threshold;

fn sq_dist(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm_sqr()).sum()
}

/// `max_{a in A} min_{b in B} |a - b|_2` over the rows of two embeddings.
pub fn directed_hausdorff(a: &Embedding, b: &Embedding) -> Result<f64> {
    if a.k() != b.k() {
        return Err(Error::DimensionMismatch { expected: a.k(), got: b.k() });
    }
    let mut worst = 0.0f64;
    for ra in a.rows() {
        let mut best = f64::INFINITY;
        for rb in b.rows() {
            best = best.min(sq_dist(ra, rb));
            // this row can no longer raise the maximum
            if best <= worst {
                break;
            }
        }
        worst = worst.max(best);
    }
    Ok(worst.sqrt())
}

/// Hausdorff distance between the embedded point sets under the complex `l2` norm.
pub fn hausdorff_l2(a: &Embedding, b: &Embedding) -> Result<f64> {
    Ok(directed_hausdorff(a, b)?.max(directed_hausdorff(b, a)?))
}

/// Minimum over bijections `A -> B` of the largest matched distance.
pub fn bottleneck_matching<P>(a: &[P], b: &[P], dist: impl Fn(&P, &P) -> f64) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::DimensionMismatch { expected: a.len(), got: b.len() });
    }
    let m = a.len();
    let table: Vec<f64> = a.iter().flat_map(|p| b.iter().map(|q| dist(p, q))).collect();
    let mut candidates = table.clone();
    min_feasible_threshold(m, &mut candidates, |u, v| table[u * m + v])
        .ok_or_else(|| Error::param("bottleneck matching: no finite matching exists"))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_force(a: &[f64], b: &[f64]) -> f64 {
        fn rec(a: &[f64], b: &[f64], used: &mut Vec<bool>, i: usize, cur: f64, best: &mut f64) {
            if cur >= *best {
                return;
            }
            if i == a.len() {
                *best = cur;
                return;
            }
            for j in 0..b.len() {
                if !used[j] {
                    used[j] = true;
                    rec(a, b, used, i + 1, cur.max((a[i] - b[j]).abs()), best);
                    used[j] = false;
                }
            }
        }
        let mut best = f64::INFINITY;
        rec(a, b, &mut vec![false; b.len()], 0, 0.0, &mut best);
        best
    }

    #[test]
    fn line_examples() {
        let d = |x: &f64, y: &f64| (x - y).abs();
        assert_eq!(bottleneck_matching(&[0.0, 10.0], &[1.0, 10.0], d).unwrap(), 1.0);
        assert_eq!(bottleneck_matching(&[3.0, -1.0], &[3.0, -1.0], d).unwrap(), 0.0);
        assert_eq!(bottleneck_matching::<f64>(&[], &[], d).unwrap(), 0.0);
        assert!(bottleneck_matching(&[0.0], &[], d).is_err());
    }

    #[test]
    fn agrees_with_enumeration() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            let a: Vec<f64> = (0..7).map(|_| rng.random_range(-5.0..5.0)).collect();
            let b: Vec<f64> = (0..7).map(|_| rng.random_range(-5.0..5.0)).collect();
            let got = bottleneck_matching(&a, &b, |x, y| (x - y).abs()).unwrap();
            assert_eq!(got, brute_force(&a, &b));
        }
    }
}
