//! Graph ranking.
//!
//! Canonical damped random-walk scoring over the weighted sentence graph:
//!
//! ```text
//! WS(Vi) = (1 - d) + d * sum over Vj adjacent to Vi of
//!          w(j,i) / (sum over Vk adjacent to Vj of w(j,k)) * WS(Vj)
//! ```
//!
//! Undirected edges count in both directions. Scores start at 1.0 and
//! update by Jacobi iteration (each round reads only the previous round's
//! scores) until the largest per-node change drops below the tolerance or
//! the iteration budget runs out. A node with no edges keeps the fixed
//! score 1 - d.

use super::graph::TextGraph;

#[derive(Debug, Clone, PartialEq)]
pub struct RankOutcome {
    pub scores: Vec<f64>,
    pub iterations: usize,
    pub converged: bool,
}

pub fn rank_nodes(
    graph: &TextGraph,
    damping: f64,
    tolerance: f64,
    max_iterations: usize,
) -> RankOutcome {
    let n = graph.nodes;
    // neighbors[i]: (j, w(i,j)) for every edge touching i.
    let mut neighbors: Vec<Vec<(usize, f64)>> = vec![Vec::new(); n];
    for &(i, j, w) in &graph.edges {
        neighbors[i].push((j, w));
        neighbors[j].push((i, w));
    }
    let out_sum: Vec<f64> = neighbors
        .iter()
        .map(|adj| adj.iter().map(|&(_, w)| w).sum())
        .collect();

    let mut scores = vec![1.0f64; n];
    let mut iterations = 0;
    let mut converged = n == 0;
    while iterations < max_iterations {
        iterations += 1;
        let mut next = vec![0.0f64; n];
        for i in 0..n {
            let incoming: f64 = neighbors[i]
                .iter()
                .map(|&(j, w)| {
                    if out_sum[j] > 0.0 {
                        w / out_sum[j] * scores[j]
                    } else {
                        0.0
                    }
                })
                .sum();
            next[i] = (1.0 - damping) + damping * incoming;
        }
        let delta = scores
            .iter()
            .zip(next.iter())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0f64, f64::max);
        scores = next;
        if delta < tolerance {
            converged = true;
            break;
        }
    }
    RankOutcome {
        scores,
        iterations,
        converged,
    }
}
