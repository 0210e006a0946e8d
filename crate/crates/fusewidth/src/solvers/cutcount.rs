//! Cut&Count solvers: Connected Vertex Cover and Connected Dominating Set on
//! normalized multi-expressions. Both are randomized, never report below the
//! true optimum, and miss a solution per trial with probability at most 1/2.

use std::collections::BTreeMap;

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use crate::graph::LabeledGraph;

/// Per-run context: pinned vertex, isolation weights, RNG seed, trial count.
#[derive(Debug, Clone)]
pub struct CutCountContext {
    pub pinned: String,
    pub weights: BTreeMap<String, usize>,
    pub seed: u64,
    pub trials: u32,
}

impl CutCountContext {
    /// Sample uniform weights in 1..=2n for every vertex.
    pub fn sample(g: &LabeledGraph, pinned: &str, rng: &mut ChaCha8Rng) -> Self {
        let n = g.vertex_count().max(1);
        let weights = g
            .titles()
            .map(|t| (t.to_string(), rng.gen_range(1..=2 * n)))
            .collect();
        CutCountContext { pinned: pinned.to_string(), weights, seed: 0, trials: 1 }
    }

    /// All weights equal; handy for tests and the parity oracle.
    pub fn fixed_weights(g: &LabeledGraph, pinned: &str, w: usize) -> Self {
        let weights = g.titles().map(|t| (t.to_string(), w)).collect();
        CutCountContext { pinned: pinned.to_string(), weights, seed: 0, trials: 1 }
    }

    pub fn weight(&self, title: &str) -> usize {
        self.weights[title]
    }
}
