//! Finite filtered posets given by their cover relations.
//!
//! Elements are opaque string identifiers; internally they are indexed in
//! input order. The degree of an element is the length of the longest chain
//! ending at it, so the filtration is always the canonical one.

mod labelling;
mod tree;

use std::collections::{HashMap, HashSet};
use std::fmt::Write as _;

pub use labelling::Labelling;
pub use tree::{TreeDecomposition, TreeStrategy};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Poset {
    ids: Vec<String>,
    index: HashMap<String, usize>,
    covers: Vec<(usize, usize)>,
    lower_covers: Vec<Vec<usize>>,
    upper_covers: Vec<Vec<usize>>,
    /// Row `a` holds the bitset of all `b` with `a <= b`.
    up: Vec<Vec<u64>>,
    degree: Vec<usize>,
    by_degree: Vec<usize>,
}

fn bit(set: &[u64], i: usize) -> bool {
    set[i / 64] >> (i % 64) & 1 == 1
}

impl Poset {
    /// Builds and validates a poset from elements and cover pairs `(lower, upper)`.
    pub fn new<S: AsRef<str>>(elements: &[S], covers: &[(S, S)]) -> Result<Self> {
        let ids: Vec<String> = elements.iter().map(|e| e.as_ref().to_string()).collect();
        let mut index = HashMap::with_capacity(ids.len());
        for (i, id) in ids.iter().enumerate() {
            if index.insert(id.clone(), i).is_some() {
                return Err(Error::DuplicateElement(id.clone()));
            }
        }
        let lookup = |s: &str| index.get(s).copied().ok_or_else(|| Error::UnknownElement(s.into()));
        let mut pairs = Vec::with_capacity(covers.len());
        let mut seen = HashSet::new();
        for (lo, hi) in covers {
            let (a, b) = (lookup(lo.as_ref())?, lookup(hi.as_ref())?);
            if a == b {
                return Err(Error::CycleDetected(ids[a].clone()));
            }
            if !seen.insert((a, b)) {
                return Err(Error::DuplicateCover(ids[a].clone(), ids[b].clone()));
            }
            pairs.push((a, b));
        }
        let poset = Self::assemble(ids, index, pairs)?;
        for &(a, b) in &poset.covers {
            if let Some(&x) = poset.upper_covers[a].iter().find(|&&x| x != b && poset.leq(x, b)) {
                return Err(Error::NotACover(
                    poset.ids[a].clone(),
                    poset.ids[b].clone(),
                    poset.ids[x].clone(),
                ));
            }
        }
        Ok(poset)
    }

    /// Derived data from already-resolved covers; fails only on cycles.
    fn assemble(
        ids: Vec<String>,
        index: HashMap<String, usize>,
        covers: Vec<(usize, usize)>,
    ) -> Result<Self> {
        let n = ids.len();
        let mut lower_covers = vec![Vec::new(); n];
        let mut upper_covers = vec![Vec::new(); n];
        for &(a, b) in &covers {
            upper_covers[a].push(b);
            lower_covers[b].push(a);
        }

        // Kahn's algorithm, smallest index first.
        let mut pending: Vec<usize> = lower_covers.iter().map(Vec::len).collect();
        let mut ready: std::collections::BTreeSet<usize> =
            (0..n).filter(|&i| pending[i] == 0).collect();
        let mut topo = Vec::with_capacity(n);
        while let Some(a) = ready.pop_first() {
            topo.push(a);
            for &b in &upper_covers[a] {
                pending[b] -= 1;
                if pending[b] == 0 {
                    ready.insert(b);
                }
            }
        }
        if topo.len() < n {
            let stuck = (0..n).find(|&i| pending[i] > 0).expect("some element is on a cycle");
            return Err(Error::CycleDetected(ids[stuck].clone()));
        }

        let mut degree = vec![0usize; n];
        for &b in &topo {
            degree[b] = lower_covers[b].iter().map(|&a| degree[a] + 1).max().unwrap_or(0);
        }

        let words = n.div_ceil(64).max(1);
        let mut up = vec![vec![0u64; words]; n];
        for &a in topo.iter().rev() {
            up[a][a / 64] |= 1 << (a % 64);
            for &b in &upper_covers[a] {
                let row_b = up[b].clone();
                for (x, y) in up[a].iter_mut().zip(&row_b) {
                    *x |= y;
                }
            }
        }

        let mut by_degree: Vec<usize> = (0..n).collect();
        by_degree.sort_by_key(|&i| (degree[i], i));

        Ok(Poset { ids, index, covers, lower_covers, upper_covers, up, degree, by_degree })
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn ids(&self) -> &[String] {
        &self.ids
    }

    pub fn id(&self, i: usize) -> &str {
        &self.ids[i]
    }

    pub fn index_of(&self, id: &str) -> Result<usize> {
        self.index.get(id).copied().ok_or_else(|| Error::UnknownElement(id.to_string()))
    }

    /// Cover pairs `(lower, upper)` in input order.
    pub fn covers(&self) -> &[(usize, usize)] {
        &self.covers
    }

    /// Position of the cover `(a, b)` in [`Poset::covers`].
    pub fn cover_index(&self, a: usize, b: usize) -> Option<usize> {
        self.covers.iter().position(|&c| c == (a, b))
    }

    /// Elements covered by `p`.
    pub fn lower_covers(&self, p: usize) -> &[usize] {
        &self.lower_covers[p]
    }

    /// Elements covering `p`.
    pub fn upper_covers(&self, p: usize) -> &[usize] {
        &self.upper_covers[p]
    }

    pub fn leq(&self, a: usize, b: usize) -> bool {
        bit(&self.up[a], b)
    }

    pub fn lt(&self, a: usize, b: usize) -> bool {
        a != b && self.leq(a, b)
    }

    pub fn degree(&self, p: usize) -> usize {
        self.degree[p]
    }

    /// Maximum degree, `None` for the empty poset.
    pub fn length(&self) -> Option<usize> {
        self.degree.iter().copied().max()
    }

    /// All elements sorted by degree, ties broken by input order.
    pub fn by_degree(&self) -> &[usize] {
        &self.by_degree
    }

    /// Indices of `{q | q < p}` in input order.
    pub fn strict_down(&self, p: usize) -> Vec<usize> {
        (0..self.len()).filter(|&q| self.lt(q, p)).collect()
    }

    /// The induced subposet on `{q | q < p}`.
    pub fn strict_down_set(&self, p: &str) -> Result<Poset> {
        let p = self.index_of(p)?;
        Ok(self.induced(&self.strict_down(p)))
    }

    /// The induced subposet on `members`, with covers recomputed inside it.
    ///
    /// Elements keep their relative input order. Covers that were already
    /// covers of `self` come first in their original order.
    pub fn induced(&self, members: &[usize]) -> Poset {
        let mut members = members.to_vec();
        members.sort_unstable();
        members.dedup();
        let local: HashMap<usize, usize> = members.iter().enumerate().map(|(i, &m)| (m, i)).collect();
        let is_cover = |a: usize, b: usize| {
            self.lt(a, b) && !members.iter().any(|&c| c != a && c != b && self.lt(a, c) && self.lt(c, b))
        };
        let mut covers: Vec<(usize, usize)> = self
            .covers
            .iter()
            .filter(|(a, b)| local.contains_key(a) && local.contains_key(b))
            .map(|&(a, b)| (local[&a], local[&b]))
            .collect();
        let original: HashSet<(usize, usize)> = covers.iter().copied().collect();
        for &a in &members {
            for &b in &members {
                let pair = (local[&a], local[&b]);
                if !original.contains(&pair) && is_cover(a, b) {
                    covers.push(pair);
                }
            }
        }
        let ids: Vec<String> = members.iter().map(|&m| self.ids[m].clone()).collect();
        let index = ids.iter().enumerate().map(|(i, s)| (s.clone(), i)).collect();
        Self::assemble(ids, index, covers).expect("subposet of an acyclic poset is acyclic")
    }

    /// Whether `p` closes a circuit in `subset`: some connected component of
    /// the induced subposet on `subset` has two or more maximal elements.
    pub fn closes_circuit(&self, p: &str, subset: &[&str]) -> Result<bool> {
        let p = self.index_of(p)?;
        let mut members = Vec::with_capacity(subset.len());
        for s in subset {
            let s = self.index_of(s)?;
            if !self.lt(s, p) {
                return Err(Error::SNotBelowP(self.ids[s].clone(), self.ids[p].clone()));
            }
            members.push(s);
        }
        Ok(self.has_component_with_two_maxima(&members))
    }

    /// Connectivity is that of the comparability graph on `members`.
    pub(crate) fn has_component_with_two_maxima(&self, members: &[usize]) -> bool {
        let k = members.len();
        let mut parent: Vec<usize> = (0..k).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        for i in 0..k {
            for j in i + 1..k {
                let (a, b) = (members[i], members[j]);
                if self.leq(a, b) || self.leq(b, a) {
                    let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                    parent[ri] = rj;
                }
            }
        }
        let mut maxima_per_root: HashMap<usize, usize> = HashMap::new();
        for i in 0..k {
            let maximal = !members.iter().any(|&t| self.lt(members[i], t));
            if maximal {
                let root = find(&mut parent, i);
                let count = maxima_per_root.entry(root).or_default();
                *count += 1;
                if *count >= 2 {
                    return true;
                }
            }
        }
        false
    }

    /// Number of connected components of the undirected Hasse diagram.
    pub fn components(&self) -> usize {
        let mut uf = tree::UnionFind::new(self.len());
        let mut count = self.len();
        for &(a, b) in &self.covers {
            if uf.union(a, b) {
                count -= 1;
            }
        }
        count
    }

    /// True iff the undirected Hasse diagram has no cycles.
    pub fn is_filtered_tree(&self) -> bool {
        self.covers.len() + self.components() == self.len()
    }

    /// Graphviz rendering: nodes annotated with degree and label, covers
    /// pointing upward, covers removed by `tree` drawn dashed.
    pub fn to_dot(&self, tree: Option<&TreeDecomposition>) -> String {
        let labels = self.labelling();
        let removed: HashSet<usize> = tree.map(|t| t.removed().iter().copied().collect()).unwrap_or_default();
        let quote = |s: &str| s.replace('\\', "\\\\").replace('"', "\\\"");
        let mut out = String::from("digraph poset {\n  rankdir=BT;\n");
        for (i, id) in self.ids.iter().enumerate() {
            let _ = writeln!(
                out,
                "  \"{}\" [label=\"{} (d={}, B={})\"];",
                quote(id),
                quote(id),
                self.degree[i],
                labels.label(i)
            );
        }
        for (k, &(a, b)) in self.covers.iter().enumerate() {
            let style = if removed.contains(&k) { " [style=dashed]" } else { "" };
            let _ = writeln!(out, "  \"{}\" -> \"{}\"{};", quote(&self.ids[a]), quote(&self.ids[b]), style);
        }
        out.push_str("}\n");
        out
    }
}

/// Small posets used across the test suites.
#[cfg(test)]
pub(crate) mod fixtures {
    use super::Poset;

    pub fn chain(n: usize) -> Poset {
        let ids: Vec<String> = (0..n).map(|i| i.to_string()).collect();
        let covers: Vec<(String, String)> =
            (1..n).map(|i| (ids[i - 1].clone(), ids[i].clone())).collect();
        Poset::new(&ids, &covers).unwrap()
    }

    pub fn circle() -> Poset {
        Poset::new(
            &["v1", "v2", "e1", "e2"],
            &[("v1", "e1"), ("v2", "e1"), ("v1", "e2"), ("v2", "e2")],
        )
        .unwrap()
    }

    pub fn circle_with_top() -> Poset {
        Poset::new(
            &["v1", "v2", "e1", "e2", "t"],
            &[("v1", "e1"), ("v2", "e1"), ("v1", "e2"), ("v2", "e2"), ("e1", "t"), ("e2", "t")],
        )
        .unwrap()
    }

    /// The nine-element poset with labels 0,1,1,1,1,1,1,2,2.
    pub fn labelling_figure() -> Poset {
        Poset::new(
            &["p0", "p1", "p2", "p3", "p4", "p5", "p6", "p7", "p8"],
            &[
                ("p0", "p1"),
                ("p0", "p2"),
                ("p0", "p3"),
                ("p1", "p4"),
                ("p2", "p5"),
                ("p3", "p6"),
                ("p4", "p7"),
                ("p5", "p7"),
                ("p6", "p8"),
                ("p7", "p8"),
            ],
        )
        .unwrap()
    }
}
