//! Maximum bipartite matching (Hopcroft-Karp) and the threshold search used
//! by both bottleneck distances.

use std::collections::VecDeque;

const FREE: usize = usize::MAX;

/// Size of a maximum matching in the bipartite graph with `left` vertices on
/// one side and `right` on the other; `adj[u]` lists the right neighbours of `u`.
pub fn max_matching(adj: &[Vec<usize>], right: usize) -> usize {
    let left = adj.len();
    let mut match_l = vec![FREE; left];
    let mut match_r = vec![FREE; right];
    let mut dist = vec![0usize; left];
    let mut size = 0;

    loop {
        // BFS layers from free left vertices
        let mut queue = VecDeque::new();
        for u in 0..left {
            if match_l[u] == FREE {
                dist[u] = 0;
                queue.push_back(u);
            } else {
                dist[u] = usize::MAX;
            }
        }
        let mut found = false;
        while let Some(u) = queue.pop_front() {
            for &v in &adj[u] {
                let w = match_r[v];
                if w == FREE {
                    found = true;
                } else if dist[w] == usize::MAX {
                    dist[w] = dist[u] + 1;
                    queue.push_back(w);
                }
            }
        }
        if !found {
            return size;
        }
        for u in 0..left {
            if match_l[u] == FREE && augment(u, adj, &mut match_l, &mut match_r, &mut dist) {
                size += 1;
            }
        }
    }
}

fn augment(u: usize, adj: &[Vec<usize>], match_l: &mut [usize], match_r: &mut [usize], dist: &mut [usize]) -> bool {
    for &v in &adj[u] {
        let w = match_r[v];
        if w == FREE || (dist[w] == dist[u] + 1 && augment(w, adj, match_l, match_r, dist)) {
            match_l[u] = v;
            match_r[v] = u;
            return true;
        }
    }
    dist[u] = usize::MAX;
    false
}

/// Smallest candidate `t` such that the graph with edges `{(u, v) : cost(u, v) <= t}`
/// has a perfect matching of the `size x size` square, found by binary search
/// over the sorted, deduplicated `candidates`. Returns `None` if even the
/// largest candidate is infeasible.
pub fn min_feasible_threshold(
    size: usize,
    candidates: &mut Vec<f64>,
    cost: impl Fn(usize, usize) -> f64,
) -> Option<f64> {
    if size == 0 {
        return Some(0.0);
    }
    candidates.retain(|c| c.is_finite());
    candidates.sort_by(f64::total_cmp);
    candidates.dedup();
    let feasible = |t: f64| {
        let adj: Vec<Vec<usize>> = (0..size).map(|u| (0..size).filter(|&v| cost(u, v) <= t).collect()).collect();
        max_matching(&adj, size) == size
    };
    let (mut lo, mut hi) = (0usize, candidates.len());
    // invariant: candidates[hi] feasible (or hi = len meaning unknown)
    if hi == 0 || !feasible(candidates[hi - 1]) {
        return None;
    }
    hi -= 1;
    while lo < hi {
        let mid = (lo + hi) / 2;
        if feasible(candidates[mid]) {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    Some(candidates[hi])
}
