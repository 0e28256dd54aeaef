use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::Poset;

pub(crate) struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect() }
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Merges the classes of `a` and `b`; false if they were already merged.
    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.parent[ra] = rb;
        true
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TreeStrategy {
    /// Scan covers by (degree of upper endpoint, input order).
    Deterministic,
    /// Try `trials` scan orders and keep the one with the smallest degree set.
    /// The first trial is always the deterministic order, so more trials
    /// never give a worse result.
    Sampled { seed: u64, trials: usize },
}

/// A maximal tree of the Hasse diagram and the degrees it leaves out.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TreeDecomposition {
    tree: Vec<usize>,
    removed: Vec<usize>,
    degree_set: BTreeSet<usize>,
}

impl TreeDecomposition {
    /// Indices into [`Poset::covers`] of the covers kept in the tree.
    pub fn tree(&self) -> &[usize] {
        &self.tree
    }

    /// Indices into [`Poset::covers`] of the covers outside the tree.
    pub fn removed(&self) -> &[usize] {
        &self.removed
    }

    /// Degrees of the upper endpoints of removed covers.
    pub fn degree_set(&self) -> &BTreeSet<usize> {
        &self.degree_set
    }

    /// `2 * #D + 1`: higher limits vanish strictly above this degree.
    pub fn bound(&self) -> usize {
        2 * self.degree_set.len() + 1
    }
}

impl Poset {
    pub fn maximal_tree(&self, strategy: TreeStrategy) -> TreeDecomposition {
        let mut order: Vec<usize> = (0..self.covers().len()).collect();
        order.sort_by_key(|&k| (self.degree(self.covers()[k].1), k));
        match strategy {
            TreeStrategy::Deterministic => self.spanning_forest(&order),
            TreeStrategy::Sampled { seed, trials } => {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let mut best = self.spanning_forest(&order);
                for _ in 1..trials {
                    order.shuffle(&mut rng);
                    let candidate = self.spanning_forest(&order);
                    let key = |t: &TreeDecomposition| (t.degree_set.len(), t.removed.len());
                    if key(&candidate) < key(&best) {
                        best = candidate;
                    }
                }
                best
            }
        }
    }

    fn spanning_forest(&self, scan: &[usize]) -> TreeDecomposition {
        let mut uf = UnionFind::new(self.len());
        let mut tree = Vec::new();
        let mut removed = Vec::new();
        for &k in scan {
            let (a, b) = self.covers()[k];
            if uf.union(a, b) {
                tree.push(k);
            } else {
                removed.push(k);
            }
        }
        tree.sort_unstable();
        removed.sort_unstable();
        let degree_set = removed.iter().map(|&k| self.degree(self.covers()[k].1)).collect();
        TreeDecomposition { tree, removed, degree_set }
    }
}
