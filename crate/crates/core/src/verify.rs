//! Checks every invariant of the engine on one functor: agreement of the
//! two backends, fibrancy certificates, vanishing bounds, no-jump, and the
//! inductive and cutoff criteria.

use std::fmt;

use serde::Serialize;

use crate::bounds::{cutoff_check, inductive_check, tree_strategy, vanishing_bounds};
use crate::complex::{CochainComplex, Height};
use crate::diagram::{Case, ModuleDiagram};
use crate::error::Result;
use crate::exactla::Field;
use crate::oracle::{oracle_higher_limits, order_cochain};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Property {
    /// Fibrant route and order complex give the same `H^*(P; F)`.
    OracleAgreement,
    /// The same for every `P_{<p}`.
    RestrictedAgreement,
    /// `H^0` equals `dim lim F` computed as a kernel.
    LimitDegreeZero,
    MatchingEpi,
    ComparisonQuasiIso,
    DifferentialSquaresZero,
    /// `matching ∘ comparison = ε` at every element.
    Factorization,
    /// `RF` composites agree along all factorizations.
    Functoriality,
    /// `H^*(RF(p)) = F(p)` in degree 0.
    ComparisonCohomology,
    TruncatedNotFibrant,
    BoundSupB,
    BoundLength,
    BoundTree,
    LabelBelowTree,
    HeightBelowLabel,
    HeightBelowDegree,
    /// Filtered trees only: nothing above degree 1.
    TreeVanishing,
    NoJump,
    InductiveEquivalence,
    CutoffBound,
    /// Higher limits over the locally fibrant elements vanish in positive degrees.
    LocallyFibrantVanishing,
}

impl Property {
    pub const ALL: [Property; 21] = [
        Property::OracleAgreement,
        Property::RestrictedAgreement,
        Property::LimitDegreeZero,
        Property::MatchingEpi,
        Property::ComparisonQuasiIso,
        Property::DifferentialSquaresZero,
        Property::Factorization,
        Property::Functoriality,
        Property::ComparisonCohomology,
        Property::TruncatedNotFibrant,
        Property::BoundSupB,
        Property::BoundLength,
        Property::BoundTree,
        Property::LabelBelowTree,
        Property::HeightBelowLabel,
        Property::HeightBelowDegree,
        Property::TreeVanishing,
        Property::NoJump,
        Property::InductiveEquivalence,
        Property::CutoffBound,
        Property::LocallyFibrantVanishing,
    ];
}

impl fmt::Display for Property {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = serde_json::to_value(self).expect("unit variants serialize");
        f.write_str(s.as_str().expect("unit variants serialize as strings"))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub property: Property,
    /// `None` when the property holds.
    pub failure: Option<String>,
}

impl Verdict {
    pub fn passed(&self) -> bool {
        self.failure.is_none()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Summary {
    pub elements: usize,
    pub covers: usize,
    pub length: Option<usize>,
    pub higher_limits: Vec<usize>,
    pub height: Height,
    pub sup_b: usize,
    pub tree_bound: usize,
    pub filtered_tree: bool,
    pub truncated: usize,
    pub cocylinder: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Outcome {
    pub summary: Summary,
    pub verdicts: Vec<Verdict>,
}

impl Outcome {
    pub fn passed(&self) -> bool {
        self.verdicts.iter().all(Verdict::passed)
    }

    pub fn verdict(&self, p: Property) -> Option<&Verdict> {
        self.verdicts.iter().find(|v| v.property == p)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Verdict> {
        self.verdicts.iter().filter(|v| !v.passed())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerifyOptions {
    pub tree_trials: usize,
    pub tree_seed: u64,
    /// Recompute every `H^*(P_{<p}; F)` by the oracle inside the inductive check.
    pub cross_check: bool,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions { tree_trials: 16, tree_seed: 0, cross_check: true }
    }
}

struct Recorder(Vec<Verdict>);

impl Recorder {
    fn check(&mut self, property: Property, failure: Option<String>) {
        match self.0.iter_mut().find(|v| v.property == property) {
            Some(v) => {
                if v.failure.is_none() {
                    v.failure = failure;
                }
            }
            None => self.0.push(Verdict { property, failure }),
        }
    }

    fn ensure(&mut self, property: Property, ok: bool, why: impl FnOnce() -> String) {
        self.check(property, (!ok).then(why));
    }
}

fn squares_to_zero<F: Field>(c: &CochainComplex<F>) -> bool {
    (1..c.len()).all(|k| c.differential(k).mul(&c.differential(k - 1)).is_zero())
}

/// Runs every check on `f`. Errors are internal failures of a construction
/// itself; everything else is reported as verdicts.
pub fn verify<F: Field>(f: &ModuleDiagram<F>, opts: &VerifyOptions) -> Result<Outcome> {
    let poset = f.poset();
    let id = |p: usize| poset.id(p).to_string();
    let mut r = Recorder(Vec::new());
    let rf = f.fibrant_replacement(None)?;
    let h = rf.higher_limits()?;

    let oracle = oracle_higher_limits(f, None)?;
    r.ensure(Property::OracleAgreement, h == oracle, || format!("fibrant {h:?}, oracle {oracle:?}"));
    r.check(Property::RestrictedAgreement, None);
    for p in 0..poset.len() {
        let fib = rf.limit_below(p).limit().cohomology_dims();
        let orc = oracle_higher_limits(f, Some(poset.id(p)))?;
        r.ensure(Property::RestrictedAgreement, fib == orc, || {
            format!("below `{}`: fibrant {fib:?}, oracle {orc:?}", id(p))
        });
    }
    let lim0 = f.limit_dim()?;
    r.ensure(Property::LimitDegreeZero, h.first().copied().unwrap_or(0) == lim0, || {
        format!("H^0 = {:?}, dim lim F = {lim0}", h.first())
    });

    for prop in [
        Property::MatchingEpi,
        Property::ComparisonQuasiIso,
        Property::Factorization,
        Property::ComparisonCohomology,
        Property::TruncatedNotFibrant,
        Property::HeightBelowLabel,
        Property::HeightBelowDegree,
    ] {
        r.check(prop, None);
    }
    let full = rf.rf().limit()?;
    let mut complexes: Vec<&CochainComplex<F>> = rf.rf().values().iter().collect();
    complexes.extend((0..poset.len()).map(|p| rf.limit_below(p).limit()));
    complexes.push(full.limit());
    let order = order_cochain(f, None)?;
    complexes.push(&order);
    r.ensure(Property::DifferentialSquaresZero, complexes.iter().all(|c| squares_to_zero(c)), || {
        "a constructed differential does not square to zero".into()
    });
    r.ensure(Property::Functoriality, rf.rf().validate_functor().is_ok(), || {
        format!("{}", rf.rf().validate_functor().unwrap_err())
    });

    let bounds = vanishing_bounds(poset, tree_strategy(opts.tree_trials, opts.tree_seed)).with_heights(&rf);
    let labels = &bounds.labels;
    let heights = rf.heights();
    for p in 0..poset.len() {
        r.ensure(Property::MatchingEpi, rf.matching(p).is_degreewise_epi(), || {
            format!("matching map at `{}` is not onto", id(p))
        });
        r.ensure(Property::ComparisonQuasiIso, rf.comparison(p).is_quasi_iso(), || {
            format!("comparison at `{}` is not a quasi-isomorphism", id(p))
        });
        let composed = rf.matching(p).after(rf.comparison(p))?;
        r.ensure(Property::Factorization, &composed == rf.epsilon(p), || {
            format!("matching ∘ comparison differs from ε at `{}`", id(p))
        });
        let expected: Vec<usize> = if f.dim(p) == 0 { vec![] } else { vec![f.dim(p)] };
        let got = rf.rf().value(p).cohomology_dims();
        r.ensure(Property::ComparisonCohomology, got == expected, || {
            format!("H(RF(`{}`)) = {got:?}, F has dimension {}", id(p), f.dim(p))
        });
        let truncatable_at_fibrant = rf.locally_fibrant()[p] && crate::complex::is_truncatable(rf.epsilon(p));
        r.ensure(
            Property::TruncatedNotFibrant,
            !truncatable_at_fibrant && !(rf.case(p) == Case::Truncated && rf.locally_fibrant()[p]),
            || format!("`{}` is locally fibrant yet ε is truncatable", id(p)),
        );
        r.ensure(Property::HeightBelowLabel, heights[p] <= Some(labels[p]), || {
            format!("h(RF(`{}`)) = {:?} > B = {}", id(p), heights[p], labels[p])
        });
        r.ensure(Property::HeightBelowDegree, heights[p] <= Some(poset.degree(p)), || {
            format!("h(RF(`{}`)) = {:?} > d = {}", id(p), heights[p], poset.degree(p))
        });
    }

    let above = |bound: usize| h.len() <= bound + 1;
    r.ensure(Property::BoundSupB, above(bounds.sup_b), || format!("H = {h:?}, sup B = {}", bounds.sup_b));
    let length = poset.length().unwrap_or(0);
    r.ensure(Property::BoundLength, above(length), || format!("H = {h:?}, length = {length}"));
    r.ensure(Property::BoundTree, above(bounds.tree_bound), || {
        format!("H = {h:?}, tree bound = {}", bounds.tree_bound)
    });
    r.ensure(Property::LabelBelowTree, bounds.sup_b <= bounds.tree_bound, || {
        format!("sup B = {} > tree bound {}", bounds.sup_b, bounds.tree_bound)
    });
    if poset.is_filtered_tree() {
        r.ensure(Property::TreeVanishing, h.len() <= 2, || format!("filtered tree with H = {h:?}"));
    }

    if let Some(m) = rf.height() {
        let missing: Vec<usize> = (0..=m).filter(|&k| !heights.contains(&Some(k))).collect();
        r.ensure(Property::NoJump, missing.is_empty(), || format!("height {m} reached but {missing:?} skipped"));
    } else {
        r.check(Property::NoJump, None);
    }

    r.check(Property::InductiveEquivalence, None);
    for n in 1..=length + 1 {
        if let Err(e) = inductive_check(f, &rf, n, opts.cross_check && n == 1) {
            r.check(Property::InductiveEquivalence, Some(e.to_string()));
        }
    }

    r.check(Property::CutoffBound, None);
    if !poset.is_empty() {
        for m in 0..=length {
            let c = cutoff_check(f, &rf, m)?;
            r.ensure(Property::CutoffBound, c.holds(), || {
                format!("cutoff m = {m}, n = {}: height {:?} above {}", c.n, c.height, c.bound)
            });
        }
    }

    let fibrant: Vec<usize> = (0..poset.len()).filter(|&p| rf.locally_fibrant()[p]).collect();
    let hq = order_cochain(f, Some(&fibrant))?.cohomology_dims();
    r.ensure(Property::LocallyFibrantVanishing, hq.len() <= 1, || {
        format!("higher limits over the locally fibrant part are {hq:?}")
    });

    let count = |c: Case| rf.cases().iter().filter(|&&x| x == c).count();
    let summary = Summary {
        elements: poset.len(),
        covers: poset.covers().len(),
        length: poset.length(),
        higher_limits: h,
        height: rf.height(),
        sup_b: bounds.sup_b,
        tree_bound: bounds.tree_bound,
        filtered_tree: poset.is_filtered_tree(),
        truncated: count(Case::Truncated),
        cocylinder: count(Case::Cocylinder),
    };
    Ok(Outcome { summary, verdicts: r.0 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::fixtures::*;
    use crate::diagram::{random_instance, RandomParams};
    use crate::exactla::{PrimeField, Rationals};
    use crate::poset::fixtures as pf;

    #[test]
    fn fixtures_pass_everything() {
        for f in [chain3_zero(), constant(pf::circle(), &Rationals, 1), constant(pf::labelling_figure(), &Rationals, 1)] {
            let o = verify(&f, &VerifyOptions::default()).unwrap();
            assert!(o.passed(), "{:?}", o.failures().collect::<Vec<_>>());
        }
    }

    #[test]
    fn random_instances_pass() {
        let f2 = PrimeField::new(2).unwrap();
        for seed in 0..10 {
            let f = random_instance(&f2, seed, &RandomParams::default());
            let o = verify(&f, &VerifyOptions::default()).unwrap();
            assert!(o.passed(), "seed {seed}: {:?}", o.failures().collect::<Vec<_>>());
        }
    }

    #[test]
    fn property_names() {
        assert_eq!(Property::OracleAgreement.to_string(), "oracle_agreement");
        assert_eq!(Property::ALL.len(), 21);
    }
}
