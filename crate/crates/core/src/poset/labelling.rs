use serde::Serialize;

use super::Poset;

/// The labelling function `B` of a filtered poset.
///
/// `B(p) = d(p)` in degrees 0 and 1. Above that, with `m` the largest label
/// strictly below `p`, `B(p) = m + 1` if `p` closes a circuit in the set of
/// elements below `p` labelled `m - 1` or `m`, and `B(p) = m` otherwise.
/// `sup B` bounds the degrees in which higher limits can be nonzero.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Labelling {
    labels: Vec<usize>,
    sup: usize,
}

impl Labelling {
    pub fn label(&self, p: usize) -> usize {
        self.labels[p]
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    /// Largest label; 0 for the empty poset.
    pub fn sup(&self) -> usize {
        self.sup
    }
}

impl Poset {
    pub fn labelling(&self) -> Labelling {
        let mut labels = vec![0usize; self.len()];
        for &p in self.by_degree() {
            let d = self.degree(p);
            labels[p] = if d <= 1 {
                d
            } else {
                let below = self.strict_down(p);
                let m = below.iter().map(|&q| labels[q]).max().expect("degree >= 2 has elements below");
                let band: Vec<usize> =
                    below.into_iter().filter(|&s| labels[s] + 1 >= m && labels[s] <= m).collect();
                if self.has_component_with_two_maxima(&band) {
                    m + 1
                } else {
                    m
                }
            };
        }
        let sup = labels.iter().copied().max().unwrap_or(0);
        Labelling { labels, sup }
    }
}
