use std::fmt;

use serde::Serialize;

use super::{ComplexDiagram, LimitPresentation, ModuleDiagram};
use crate::complex::{
    is_truncatable, mapping_cocylinder, truncated_mapping_cocylinder, ChainMap, CochainComplex, Height,
};
use crate::error::{Error, Result};
use crate::exactla::Field;

/// How the replacement was built at an element.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Case {
    /// Locally fibrant: the value is kept as is.
    Trivial,
    /// Truncated mapping cocylinder of the matching map.
    Truncated,
    /// Mapping cocylinder of the matching map.
    Cocylinder,
}

impl fmt::Display for Case {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Case::Trivial => "trivial",
            Case::Truncated => "truncated",
            Case::Cocylinder => "cocylinder",
        })
    }
}

/// A fibrant diagram of complexes `RF` with an objectwise quasi-isomorphism
/// `F -> RF`.
///
/// Built one element at a time in nondecreasing degree. At `p` the map
/// `ε_p: F(p) -> lim_{<p} RF` is factored as a quasi-isomorphism followed by
/// an epimorphism, and the restrictions out of `RF(p)` are the limit
/// projections composed with that epimorphism.
#[derive(Debug, Clone)]
pub struct FibrantReplacement<F: Field> {
    rf: ComplexDiagram<F>,
    cases: Vec<Case>,
    comparison: Vec<ChainMap<F>>,
    matching: Vec<ChainMap<F>>,
    epsilon: Vec<ChainMap<F>>,
    limits_below: Vec<LimitPresentation<F>>,
    locally_fibrant: Vec<bool>,
    cutoff: Option<usize>,
}

impl<F: Field> ModuleDiagram<F> {
    /// With `cutoff = Some(m)`, truncated cocylinders are only used at
    /// elements of degree at most `m`.
    pub fn fibrant_replacement(&self, cutoff: Option<usize>) -> Result<FibrantReplacement<F>> {
        let poset = self.poset();
        let field = self.field();
        let n = poset.len();
        let locally_fibrant = self.local_fibrancy()?;

        let mut values = vec![CochainComplex::zero(field); n];
        let mut restrictions: Vec<Option<ChainMap<F>>> = vec![None; poset.covers().len()];
        let mut cases = vec![Case::Trivial; n];
        let mut comparison: Vec<Option<ChainMap<F>>> = vec![None; n];
        let mut matching: Vec<Option<ChainMap<F>>> = vec![None; n];
        let mut epsilon: Vec<Option<ChainMap<F>>> = vec![None; n];
        let mut limits_below: Vec<Option<LimitPresentation<F>>> = vec![None; n];

        for &p in poset.by_degree() {
            let below = poset.strict_down(p);
            let lim = LimitPresentation::compute(field, poset, &below, &values, |k| {
                restrictions[k].as_ref().expect("restrictions below p are built")
            })?;
            let source = self.value(p);
            let e0 = lim
                .coordinates_of_cone(0, self.dim(p), |q| {
                    let eta = comparison[q].as_ref().expect("comparison below p is built");
                    eta.component(0).mul(self.composite(q, p).expect("q < p"))
                })
                .ok_or_else(|| Error::NotInLimit(poset.id(p).to_string()))?;
            let eps = ChainMap::new(source.clone(), lim.limit().clone(), vec![e0])
                .map_err(|e| Error::internal(format!("matching map at `{}`: {e}", poset.id(p))))?;

            let truncation_allowed = cutoff.is_none_or(|m| poset.degree(p) <= m);
            let (case, value, eta, pi) = if locally_fibrant[p] {
                (Case::Trivial, source.clone(), ChainMap::identity(&source), eps.clone())
            } else if truncation_allowed && is_truncatable(&eps) {
                let c = truncated_mapping_cocylinder(&eps)?;
                (Case::Truncated, c.complex, c.inclusion, c.projection)
            } else {
                let c = mapping_cocylinder(&eps);
                (Case::Cocylinder, c.complex, c.inclusion, c.projection)
            };

            for &q in poset.lower_covers(p) {
                let k = poset.cover_index(q, p).expect("lower cover");
                let comps = (0..value.len()).map(|j| lim.projection_component(q, j).mul(&pi.component(j))).collect();
                let r = ChainMap::new(value.clone(), values[q].clone(), comps).map_err(|e| {
                    Error::internal(format!("restriction `{}` < `{}`: {e}", poset.id(q), poset.id(p)))
                })?;
                restrictions[k] = Some(r);
            }
            values[p] = value;
            cases[p] = case;
            comparison[p] = Some(eta);
            matching[p] = Some(pi);
            epsilon[p] = Some(eps);
            limits_below[p] = Some(lim);
        }

        let unwrap_all = |v: Vec<Option<ChainMap<F>>>| v.into_iter().map(|x| x.expect("every element built")).collect();
        let restrictions = restrictions.into_iter().map(|r| r.expect("every cover built")).collect();
        Ok(FibrantReplacement {
            rf: ComplexDiagram::from_parts_unchecked(poset.clone(), field, values, restrictions),
            cases,
            comparison: unwrap_all(comparison),
            matching: unwrap_all(matching),
            epsilon: unwrap_all(epsilon),
            limits_below: limits_below.into_iter().map(|l| l.expect("every element built")).collect(),
            locally_fibrant,
            cutoff,
        })
    }
}

impl<F: Field> FibrantReplacement<F> {
    pub fn rf(&self) -> &ComplexDiagram<F> {
        &self.rf
    }

    pub fn case(&self, p: usize) -> Case {
        self.cases[p]
    }

    pub fn cases(&self) -> &[Case] {
        &self.cases
    }

    /// The quasi-isomorphism `F(p) -> RF(p)`.
    pub fn comparison(&self, p: usize) -> &ChainMap<F> {
        &self.comparison[p]
    }

    /// The epimorphism `RF(p) -> lim_{<p} RF`.
    pub fn matching(&self, p: usize) -> &ChainMap<F> {
        &self.matching[p]
    }

    /// `ε_p: F(p) -> lim_{<p} RF`, equal to `matching(p) ∘ comparison(p)`.
    pub fn epsilon(&self, p: usize) -> &ChainMap<F> {
        &self.epsilon[p]
    }

    /// `lim_{<p} RF`, whose cohomology is `H^*(P_{<p}; F)`.
    pub fn limit_below(&self, p: usize) -> &LimitPresentation<F> {
        &self.limits_below[p]
    }

    pub fn locally_fibrant(&self) -> &[bool] {
        &self.locally_fibrant
    }

    pub fn cutoff(&self) -> Option<usize> {
        self.cutoff
    }

    pub fn heights(&self) -> Vec<Height> {
        self.rf.values().iter().map(CochainComplex::height).collect()
    }

    /// `h(RF)`, the largest height of a value.
    pub fn height(&self) -> Height {
        self.rf.height()
    }

    /// `H^*(P; F) = H^*(lim RF)`.
    pub fn higher_limits(&self) -> Result<Vec<usize>> {
        Ok(self.rf.limit()?.limit().cohomology_dims())
    }

    pub fn report(&self) -> ReplacementReport {
        let poset = self.rf.poset();
        let elements = (0..poset.len())
            .map(|p| ElementReport {
                id: poset.id(p).to_string(),
                case: self.cases[p],
                dims: self.rf.value(p).dims().to_vec(),
                height: self.rf.value(p).height(),
                matching_ranks: self.matching[p].ranks(),
            })
            .collect();
        ReplacementReport { cutoff: self.cutoff, elements }
    }
}

/// Per-element summary of a replacement.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ReplacementReport {
    pub cutoff: Option<usize>,
    pub elements: Vec<ElementReport>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ElementReport {
    pub id: String,
    pub case: Case,
    pub dims: Vec<usize>,
    /// `None` for a zero value.
    pub height: Height,
    /// Ranks of the matching map, one per degree of the limit below.
    pub matching_ranks: Vec<usize>,
}

#[cfg(test)]
mod tests {
    use super::super::fixtures::*;
    use super::*;
    use crate::exactla::{Matrix, PrimeField, Rationals};
    use crate::poset::fixtures as pf;

    fn check_certificates<F: Field>(rf: &FibrantReplacement<F>) {
        for p in 0..rf.cases().len() {
            assert!(rf.matching(p).is_degreewise_epi());
            assert!(rf.comparison(p).is_quasi_iso());
            assert_eq!(&rf.matching(p).after(rf.comparison(p)).unwrap(), rf.epsilon(p));
        }
        rf.rf().validate_functor().unwrap();
    }

    #[test]
    fn circle_constant() {
        let f = constant(pf::circle(), &Rationals, 1);
        let rf = f.fibrant_replacement(None).unwrap();
        assert_eq!(rf.cases(), &[Case::Trivial, Case::Trivial, Case::Cocylinder, Case::Cocylinder]);
        assert_eq!(rf.rf().value(0).dims(), &[1]);
        assert_eq!(rf.rf().value(2).dims(), &[3, 2]);
        assert_eq!(rf.rf().value(3).dims(), &[3, 2]);
        assert_eq!(rf.epsilon(2).component(0).into_owned(), Matrix::from_i64_rows(&Rationals, &[&[1], &[1]]));
        assert_eq!(rf.higher_limits().unwrap(), vec![1, 1]);
        check_certificates(&rf);
    }

    #[test]
    fn chain_with_zero_restrictions() {
        let f = chain3_zero();
        let rf = f.fibrant_replacement(None).unwrap();
        assert_eq!(rf.cases(), &[Case::Trivial, Case::Cocylinder, Case::Truncated]);
        assert_eq!(rf.rf().value(1).dims(), &[2, 1]);
        assert_eq!(rf.rf().value(2).dims(), &[3, 2]);
        assert_eq!(rf.limit_below(2).limit().dims(), &[2, 1]);
        assert!(rf.epsilon(2).component(0).is_zero());
        assert_eq!(rf.higher_limits().unwrap(), vec![1]);
        check_certificates(&rf);
    }

    #[test]
    fn cutoff_disables_truncation_above() {
        let rf = chain3_zero().fibrant_replacement(Some(1)).unwrap();
        assert_eq!(rf.cases(), &[Case::Trivial, Case::Cocylinder, Case::Cocylinder]);
        assert_eq!(rf.height(), Some(2));
        assert_eq!(rf.higher_limits().unwrap(), vec![1]);
        check_certificates(&rf);
    }

    #[test]
    fn constant_with_initial_object_is_its_own_replacement() {
        let f = constant(pf::labelling_figure(), &PrimeField::new(5).unwrap(), 2);
        let rf = f.fibrant_replacement(None).unwrap();
        assert!(rf.cases().iter().all(|&c| c == Case::Trivial));
        assert_eq!(rf.rf(), &f.as_complex_diagram());
        assert_eq!(rf.higher_limits().unwrap(), vec![2]);
    }

    #[test]
    fn chains_only_see_the_top() {
        let p = pf::chain(4);
        let maps = vec![
            Matrix::from_i64_rows(&Rationals, &[&[1, 0]]),
            Matrix::from_i64_rows(&Rationals, &[&[0, 0], &[1, 1]]),
            Matrix::from_i64_rows(&Rationals, &[&[2], &[1]]),
        ];
        let f = ModuleDiagram::new(p, &Rationals, vec![1, 2, 2, 1], maps).unwrap();
        assert_eq!(f.higher_limits(None).unwrap(), vec![1]);
        assert_eq!(f.higher_limits(Some("3")).unwrap(), vec![2]);
        assert!(f.higher_limits(Some("0")).unwrap().is_empty());
        check_certificates(&f.fibrant_replacement(None).unwrap());
    }

    #[test]
    fn report_lists_every_element() {
        let rep = chain3_zero().fibrant_replacement(None).unwrap().report();
        assert_eq!(rep.elements.len(), 3);
        assert_eq!(rep.elements[2].case, Case::Truncated);
        assert_eq!(rep.elements[2].dims, vec![3, 2]);
        assert_eq!(rep.elements[2].height, Some(1));
        assert_eq!(rep.elements[0].matching_ranks, Vec::<usize>::new());
    }
}
