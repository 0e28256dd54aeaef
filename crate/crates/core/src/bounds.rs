//! Combinatorial vanishing bounds for higher limits, and the inductive
//! criterion relating them to the fibrant replacement.

use serde::Serialize;

use crate::complex::Height;
use crate::diagram::{FibrantReplacement, ModuleDiagram};
use crate::error::{Error, Result};
use crate::exactla::Field;
use crate::oracle::oracle_higher_limits;
use crate::poset::{Labelling, Poset, TreeDecomposition, TreeStrategy};

/// Degrees above which `H^k(P; F)` must vanish, for any functor `F`.
///
/// Each bound is a guarantee, not a claim of sharpness.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BoundsReport {
    pub sup_b: usize,
    /// `length(P)`; `None` for the empty poset.
    pub max_degree: Option<usize>,
    /// `2 #D + 1` for the best tree found.
    pub tree_bound: usize,
    pub degree_set: Vec<usize>,
    pub removed_covers: usize,
    pub labels: Vec<usize>,
    /// `h(RF)` when a functor was supplied.
    pub realized_height: Option<Height>,
    pub element_heights: Option<Vec<Height>>,
}

/// Bounds that depend on the poset only.
pub fn vanishing_bounds(poset: &Poset, strategy: TreeStrategy) -> BoundsReport {
    let labelling: Labelling = poset.labelling();
    let tree: TreeDecomposition = poset.maximal_tree(strategy);
    BoundsReport {
        sup_b: labelling.sup(),
        max_degree: poset.length(),
        tree_bound: tree.bound(),
        degree_set: tree.degree_set().iter().copied().collect(),
        removed_covers: tree.removed().len(),
        labels: labelling.labels().to_vec(),
        realized_height: None,
        element_heights: None,
    }
}

/// `TreeStrategy` for a number of sampled trees: one trial is the
/// deterministic scan.
pub fn tree_strategy(trials: usize, seed: u64) -> TreeStrategy {
    if trials <= 1 {
        TreeStrategy::Deterministic
    } else {
        TreeStrategy::Sampled { seed, trials }
    }
}

impl BoundsReport {
    pub fn with_heights<F: Field>(mut self, rf: &FibrantReplacement<F>) -> Self {
        self.realized_height = Some(rf.height());
        self.element_heights = Some(rf.heights());
        self
    }

    /// The smallest bound: `H^k = 0` for every `k` above it.
    pub fn vanishing_degree(&self) -> usize {
        let mut best = self.sup_b.min(self.tree_bound);
        if let Some(l) = self.max_degree {
            best = best.min(l);
        }
        if let Some(Some(h)) = self.realized_height {
            best = best.min(h);
        }
        best
    }
}

/// The three conditions of the inductive criterion for a given `n >= 1`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InductiveReport {
    pub n: usize,
    /// `H^k(P_{<p}; F) = 0` for every `p` and every `k >= n`.
    pub all_above: bool,
    /// `H^n(P_{<p}; F) = 0` for every `p`.
    pub at_n: bool,
    /// `h(RF) <= n`.
    pub height: bool,
    /// `H^*(P_{<p}; F)` per element.
    pub below: Vec<Vec<usize>>,
    pub higher_limits: Vec<usize>,
}

impl InductiveReport {
    pub fn holds(&self) -> bool {
        self.all_above
    }
}

/// Evaluates the three conditions independently and checks that they agree,
/// and that when they hold `H^k(P; F) = 0` for `k > n`.
///
/// With `cross_check`, every `H^*(P_{<p}; F)` is recomputed by the oracle.
pub fn inductive_check<F: Field>(
    f: &ModuleDiagram<F>,
    rf: &FibrantReplacement<F>,
    n: usize,
    cross_check: bool,
) -> Result<InductiveReport> {
    if n == 0 {
        return Err(Error::InvalidArgument("the inductive criterion needs n >= 1".into()));
    }
    let poset = f.poset();
    let mut below = Vec::with_capacity(poset.len());
    for p in 0..poset.len() {
        let h = rf.limit_below(p).limit().cohomology_dims();
        if cross_check {
            let o = oracle_higher_limits(f, Some(poset.id(p)))?;
            if o != h {
                return Err(Error::internal(format!(
                    "below `{}`: fibrant route gives {h:?}, oracle gives {o:?}",
                    poset.id(p)
                )));
            }
        }
        below.push(h);
    }
    let all_above = below.iter().all(|h| h.len() <= n);
    let at_n = below.iter().all(|h| h.get(n).copied().unwrap_or(0) == 0);
    let height = rf.height() <= Some(n);
    if all_above != at_n || at_n != height {
        return Err(Error::EquivalenceViolated { n, c1: all_above, c2: at_n, c3: height });
    }
    let higher_limits = rf.higher_limits()?;
    if all_above && higher_limits.len() > n + 1 {
        return Err(Error::internal(format!(
            "criterion holds for n = {n} but higher limits are {higher_limits:?}"
        )));
    }
    Ok(InductiveReport { n, all_above, at_n, height, below, higher_limits })
}

/// Outcome of the cutoff variant for one `m`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CutoffReport {
    pub m: usize,
    /// Smallest `n` with `H^k(P_{<p}; F) = 0` for all `k >= n` and all `p`
    /// of degree at most `m`.
    pub n: usize,
    /// `n + length(P) - m`.
    pub bound: usize,
    pub height: Height,
    pub higher_limits: Vec<usize>,
}

impl CutoffReport {
    pub fn holds(&self) -> bool {
        self.height <= Some(self.bound) && self.higher_limits.len() <= self.bound + 1
    }
}

/// Builds the replacement with truncation restricted to degrees `<= m` and
/// compares its height with `n + length - m`, where `n` is the best value
/// satisfying the hypothesis (read off `rf`, the unrestricted replacement).
pub fn cutoff_check<F: Field>(f: &ModuleDiagram<F>, rf: &FibrantReplacement<F>, m: usize) -> Result<CutoffReport> {
    let poset = f.poset();
    let Some(length) = poset.length() else {
        return Err(Error::InvalidArgument("the cutoff variant needs a nonempty poset".into()));
    };
    if m > length {
        return Err(Error::InvalidArgument(format!("cutoff {m} exceeds the length {length}")));
    }
    let n = (0..poset.len())
        .filter(|&p| poset.degree(p) <= m)
        .map(|p| rf.limit_below(p).limit().cohomology_dims().len())
        .max()
        .unwrap_or(0);
    let cut = f.fibrant_replacement(Some(m))?;
    Ok(CutoffReport { m, n, bound: n + length - m, height: cut.height(), higher_limits: cut.higher_limits()? })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::fixtures::*;
    use crate::exactla::Rationals;
    use crate::poset::fixtures as pf;

    #[test]
    fn tree_bounds() {
        let r = vanishing_bounds(&pf::chain(5), TreeStrategy::Deterministic);
        assert_eq!((r.sup_b, r.tree_bound, r.max_degree), (1, 1, Some(4)));
        assert_eq!(r.vanishing_degree(), 1);
    }

    #[test]
    fn circle_with_top_bounds() {
        let p = pf::circle_with_top();
        let det = vanishing_bounds(&p, tree_strategy(1, 0));
        assert_eq!((det.sup_b, det.tree_bound, det.degree_set.clone()), (2, 5, vec![1, 2]));
        let sampled = vanishing_bounds(&p, tree_strategy(64, 7));
        assert_eq!(sampled.tree_bound, 3);
    }

    #[test]
    fn labelling_beats_length() {
        let r = vanishing_bounds(&pf::labelling_figure(), TreeStrategy::Deterministic);
        assert_eq!((r.sup_b, r.max_degree), (2, Some(4)));
    }

    #[test]
    fn heights_are_recorded() {
        let f = chain3_zero();
        let rf = f.fibrant_replacement(None).unwrap();
        let r = vanishing_bounds(f.poset(), TreeStrategy::Deterministic).with_heights(&rf);
        assert_eq!(r.realized_height, Some(Some(1)));
        assert_eq!(r.element_heights, Some(vec![Some(0), Some(1), Some(1)]));
        assert_eq!(r.vanishing_degree(), 1);
    }

    #[test]
    fn inductive_on_fibrant_functor() {
        let f = constant(pf::labelling_figure(), &Rationals, 1);
        let rf = f.fibrant_replacement(None).unwrap();
        let r = inductive_check(&f, &rf, 1, true).unwrap();
        assert!(r.all_above && r.at_n && r.height);
        assert!(matches!(inductive_check(&f, &rf, 0, false), Err(Error::InvalidArgument(_))));
    }

    /// Vertices and edges of a square: each down-set is discrete or empty.
    #[test]
    fn inductive_on_hollow_square() {
        let p = Poset::new(
            &["a", "b", "c", "d", "ab", "bc", "cd", "da"],
            &[("a", "ab"), ("b", "ab"), ("b", "bc"), ("c", "bc"), ("c", "cd"), ("d", "cd"), ("d", "da"), ("a", "da")],
        )
        .unwrap();
        let f = constant(p, &Rationals, 1);
        let rf = f.fibrant_replacement(None).unwrap();
        let r = inductive_check(&f, &rf, 1, true).unwrap();
        assert!(r.holds());
        assert_eq!(r.higher_limits, vec![1, 1]);
    }

    /// The square with its 2-cell: the boundary of the cell is a circle, so
    /// the criterion fails at n = 1 and holds at n = 2.
    #[test]
    fn inductive_on_filled_square() {
        let p = Poset::new(
            &["a", "b", "c", "d", "ab", "bc", "cd", "da", "f"],
            &[
                ("a", "ab"), ("b", "ab"), ("b", "bc"), ("c", "bc"), ("c", "cd"), ("d", "cd"), ("d", "da"), ("a", "da"),
                ("ab", "f"), ("bc", "f"), ("cd", "f"), ("da", "f"),
            ],
        )
        .unwrap();
        let f = constant(p, &Rationals, 1);
        let rf = f.fibrant_replacement(None).unwrap();
        assert!(!inductive_check(&f, &rf, 1, true).unwrap().holds());
        let r = inductive_check(&f, &rf, 2, true).unwrap();
        assert!(r.holds());
        assert_eq!(r.higher_limits, vec![1]);
    }

    #[test]
    fn cutoff_on_zero_chain() {
        let f = chain3_zero();
        let rf = f.fibrant_replacement(None).unwrap();
        for m in 0..=2 {
            let r = cutoff_check(&f, &rf, m).unwrap();
            assert!(r.holds(), "{r:?}");
            assert_eq!(r.higher_limits, vec![1]);
        }
        assert!(cutoff_check(&f, &rf, 3).is_err());
    }
}
