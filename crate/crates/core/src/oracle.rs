//! Independent ground truth: the cochain complex of the order complex.
//!
//! `C^n` is the sum over strict chains `p0 < ... < pn` of `F(p0)`, with
//!
//! ```text
//! (dφ)(p0 < ... < p{n+1}) = F(p0 <= p1) φ(p1 < ... < p{n+1})
//!                           + Σ_{i >= 1} (-1)^i φ(chain without p_i)
//! ```
//!
//! Its cohomology is `H^*(P; F)`. Only nondegenerate chains are used.

use std::collections::HashMap;

use crate::complex::CochainComplex;
use crate::diagram::ModuleDiagram;
use crate::error::{Error, Result};
use crate::exactla::{Field, Matrix};

/// Strict chains of a subset, grouped by length and listed in lexicographic
/// order of element indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainBasis {
    chains: Vec<Vec<Vec<usize>>>,
}

impl ChainBasis {
    pub fn new(poset: &crate::poset::Poset, members: &[usize]) -> Self {
        let mut members = members.to_vec();
        members.sort_unstable();
        let mut chains: Vec<Vec<Vec<usize>>> = Vec::new();
        let mut current: Vec<Vec<usize>> = members.iter().map(|&p| vec![p]).collect();
        while !current.is_empty() {
            let mut next = Vec::new();
            for c in &current {
                let last = *c.last().expect("chains are nonempty");
                for &q in &members {
                    if poset.lt(last, q) {
                        let mut longer = c.clone();
                        longer.push(q);
                        next.push(longer);
                    }
                }
            }
            chains.push(current);
            current = next;
        }
        ChainBasis { chains }
    }

    /// Chains with `n + 1` elements.
    pub fn degree(&self, n: usize) -> &[Vec<usize>] {
        self.chains.get(n).map_or(&[], Vec::as_slice)
    }

    /// Number of nonempty degrees.
    pub fn len(&self) -> usize {
        self.chains.len()
    }

    pub fn is_empty(&self) -> bool {
        self.chains.is_empty()
    }
}

/// The order-complex cochain complex of `f` over the whole poset, or over
/// the given subset.
pub fn order_cochain<F: Field>(f: &ModuleDiagram<F>, over: Option<&[usize]>) -> Result<CochainComplex<F>> {
    let field = f.field();
    let all: Vec<usize>;
    let members = match over {
        Some(m) => m,
        None => {
            all = (0..f.poset().len()).collect();
            &all
        }
    };
    let basis = ChainBasis::new(f.poset(), members);
    let mut offsets: Vec<HashMap<&[usize], usize>> = Vec::with_capacity(basis.len());
    let mut dims = Vec::with_capacity(basis.len());
    for n in 0..basis.len() {
        let mut at = HashMap::new();
        let mut total = 0;
        for c in basis.degree(n) {
            at.insert(c.as_slice(), total);
            total += f.dim(c[0]);
        }
        offsets.push(at);
        dims.push(total);
    }

    let mut diffs = Vec::with_capacity(basis.len().saturating_sub(1));
    for n in 0..basis.len().saturating_sub(1) {
        let mut d = Matrix::zeros(field, dims[n + 1], dims[n]);
        for sigma in basis.degree(n + 1) {
            let row = offsets[n + 1][sigma.as_slice()];
            let tail = &sigma[1..];
            let restrict = f.composite(sigma[0], sigma[1]).expect("chain is increasing");
            d.set_block(row, offsets[n][tail], restrict);
            for i in 1..sigma.len() {
                let mut face = sigma.clone();
                face.remove(i);
                let col = offsets[n][face.as_slice()];
                let sign = if i % 2 == 0 { field.one() } else { field.neg(&field.one()) };
                for j in 0..f.dim(sigma[0]) {
                    let v = field.add(d.get(row + j, col + j), &sign);
                    d.set(row + j, col + j, v);
                }
            }
        }
        diffs.push(d);
    }
    CochainComplex::new(field, dims, diffs).map_err(|e| Error::internal(format!("order cochain complex: {e}")))
}

/// `H^*(P; F)` from the order complex, or `H^*(P_{<p}; F)` when `at` names `p`.
pub fn oracle_higher_limits<F: Field>(f: &ModuleDiagram<F>, at: Option<&str>) -> Result<Vec<usize>> {
    let c = match at {
        Some(id) => {
            let p = f.poset().index_of(id)?;
            order_cochain(f, Some(&f.poset().strict_down(p)))?
        }
        None => order_cochain(f, None)?,
    };
    Ok(c.cohomology_dims())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::fixtures::*;
    use crate::exactla::Rationals;
    use crate::poset::fixtures as pf;
    use crate::poset::Poset;

    #[test]
    fn single_point() {
        let f = constant(Poset::new(&["a"], &[]).unwrap(), &Rationals, 1);
        let c = order_cochain(&f, None).unwrap();
        assert_eq!(c.dims(), &[1]);
        assert_eq!(oracle_higher_limits(&f, None).unwrap(), vec![1]);
    }

    #[test]
    fn circle_is_a_circle() {
        let f = constant(pf::circle(), &Rationals, 1);
        let c = order_cochain(&f, None).unwrap();
        assert_eq!(c.dims(), &[4, 4]);
        assert_eq!(c.differential(0).rank(), 3);
        assert_eq!(c.cohomology_dims(), vec![1, 1]);
    }

    #[test]
    fn two_chain_with_zero_restriction() {
        let p = pf::chain(2);
        let f = ModuleDiagram::new(p, &Rationals, vec![1, 1], vec![Matrix::zeros(&Rationals, 1, 1)]).unwrap();
        let c = order_cochain(&f, None).unwrap();
        assert_eq!(c.dims(), &[2, 1]);
        assert_eq!(c.cohomology_dims(), vec![1]);
    }

    #[test]
    fn restricted_and_empty() {
        let f = constant(pf::circle_with_top(), &Rationals, 1);
        assert_eq!(oracle_higher_limits(&f, Some("t")).unwrap(), vec![1, 1]);
        assert_eq!(oracle_higher_limits(&f, None).unwrap(), vec![1]);
        let empty = constant(Poset::new::<&str>(&[], &[]).unwrap(), &Rationals, 1);
        assert!(oracle_higher_limits(&empty, None).unwrap().is_empty());
    }

    #[test]
    fn chain_basis_counts() {
        let b = ChainBasis::new(&pf::chain(3), &[0, 1, 2]);
        let counts: Vec<usize> = (0..b.len()).map(|n| b.degree(n).len()).collect();
        assert_eq!(counts, vec![3, 3, 1]);
        assert_eq!(b.degree(1), &[vec![0, 1], vec![0, 2], vec![1, 2]]);
    }

    #[test]
    fn agrees_with_fibrant_route_on_fixtures() {
        for f in [constant(pf::labelling_figure(), &Rationals, 1), constant(pf::circle_with_top(), &Rationals, 2)] {
            assert_eq!(oracle_higher_limits(&f, None).unwrap(), f.higher_limits(None).unwrap());
            for id in f.poset().ids() {
                assert_eq!(oracle_higher_limits(&f, Some(id)).unwrap(), f.higher_limits(Some(id)).unwrap());
            }
        }
        let z = chain3_zero();
        assert_eq!(oracle_higher_limits(&z, None).unwrap(), vec![1]);
    }
}
