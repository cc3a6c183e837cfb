//! Rural postman for a connected set of required edges over a metric
//! closure, with an open walk from a fixed (or free) start.
//!
//! Deadheads are a minimum T-join, found as a perfect matching on the odd
//! vertices of the required multigraph plus a start node and one free end
//! node. Matching the free end to an odd vertex makes that vertex the end
//! of the walk; matching it to the start adds the cheapest opening leg.

use super::matching::min_weight_perfect_matching;
use super::{bonds_connected, BondError, BondWalk, CrystalMetric};

/// Minimum-length walk covering every required edge as a consecutive pair.
pub fn rural_postman_connected(
    metric: &CrystalMetric,
    required: &[(usize, usize)],
) -> Result<BondWalk, BondError> {
    let r = metric.between.len();
    if required.is_empty() {
        return Ok(BondWalk {
            sequence: Vec::new(),
            length: 0.0,
        });
    }
    if let Some(&(a, b)) = required.iter().find(|&&(a, b)| a >= r || b >= r) {
        return Err(BondError::BondOutOfRange(a, b));
    }
    if !bonds_connected(r, required) {
        return Err(BondError::DisconnectedBonds);
    }

    let mut degree = vec![0usize; r];
    for &(a, b) in required {
        degree[a] += 1;
        degree[b] += 1;
    }
    let odd: Vec<usize> = (0..r).filter(|&v| degree[v] % 2 == 1).collect();
    let touched: Vec<usize> = (0..r).filter(|&v| degree[v] > 0).collect();

    // multigraph vertex r stands for the start tile
    let start_node = r;
    let mut edges: Vec<(usize, usize)> = required.to_vec();

    if metric.free_start {
        // nodes: odd vertices, then two free ends joined at zero cost
        let k = odd.len();
        let n = k + 2;
        let mut w = vec![vec![0.0; n]; n];
        for i in 0..k {
            for j in 0..k {
                w[i][j] = metric.between[odd[i]][odd[j]];
            }
        }
        let (_, pairs) = min_weight_perfect_matching(&w);
        for (i, j) in pairs {
            if j < k {
                edges.push((odd[i], odd[j]));
            }
        }
    } else {
        let entry = *touched
            .iter()
            .min_by(|&&x, &&y| metric.start_leg[x].total_cmp(&metric.start_leg[y]))
            .expect("required edges touch some crystal");
        // nodes: start, odd vertices, free end
        let k = odd.len();
        let n = k + 2;
        let (s, z) = (0, k + 1);
        let mut w = vec![vec![0.0; n]; n];
        for i in 0..k {
            w[s][i + 1] = metric.start_leg[odd[i]];
            w[i + 1][s] = w[s][i + 1];
            for j in 0..k {
                w[i + 1][j + 1] = metric.between[odd[i]][odd[j]];
            }
        }
        w[s][z] = metric.start_leg[entry];
        w[z][s] = w[s][z];
        let (_, pairs) = min_weight_perfect_matching(&w);
        for (i, j) in pairs {
            let node = |x: usize| odd[x - 1];
            match (i == s, j == z) {
                (true, true) => edges.push((start_node, entry)),
                (true, false) => edges.push((start_node, node(j))),
                (false, false) => edges.push((node(i), node(j))),
                (false, true) => {}
            }
        }
    }

    let origin = if metric.free_start {
        let mut deg = vec![0usize; r];
        for &(a, b) in &edges {
            deg[a] += 1;
            deg[b] += 1;
        }
        (0..r).find(|&v| deg[v] % 2 == 1).unwrap_or(touched[0])
    } else {
        start_node
    };
    let mut sequence = euler_trail(r + 1, &edges, origin);
    if sequence.first() == Some(&start_node) {
        sequence.remove(0);
    }
    let length = metric.walk_length(&sequence);
    Ok(BondWalk { sequence, length })
}

/// Hierholzer's algorithm; the caller guarantees an Euler trail from `origin`.
fn euler_trail(n: usize, edges: &[(usize, usize)], origin: usize) -> Vec<usize> {
    let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
    for (id, &(a, b)) in edges.iter().enumerate() {
        adj[a].push((b, id));
        adj[b].push((a, id));
    }
    let mut used = vec![false; edges.len()];
    let mut next = vec![0usize; n];
    let mut stack = vec![origin];
    let mut trail = Vec::with_capacity(edges.len() + 1);
    while let Some(&v) = stack.last() {
        while next[v] < adj[v].len() && used[adj[v][next[v]].1] {
            next[v] += 1;
        }
        if next[v] == adj[v].len() {
            trail.push(v);
            stack.pop();
        } else {
            let (u, id) = adj[v][next[v]];
            used[id] = true;
            stack.push(u);
        }
    }
    trail.reverse();
    debug_assert_eq!(trail.len(), edges.len() + 1);
    trail
}
