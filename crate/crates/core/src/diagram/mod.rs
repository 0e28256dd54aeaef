//! Functors `P^op -> Vect` and `P^op -> Ch`, their limits over down-sets,
//! and the fibrant replacement that computes higher limits.

mod fibrant;
mod limit;
mod random;

use std::borrow::Cow;
use std::collections::HashMap;

pub use fibrant::{Case, ElementReport, FibrantReplacement, ReplacementReport};
pub use limit::LimitPresentation;
pub use random::{random_instance, RandomParams, Shape};

use crate::complex::{ChainMap, CochainComplex};
use crate::error::{Error, Result};
use crate::exactla::{Field, Matrix};
use crate::poset::Poset;

/// `comp[p][q] = F(p <= q)` for every comparable pair, `None` elsewhere.
pub(crate) type Composites<F> = Vec<Vec<Option<Matrix<F>>>>;

/// Composes cover maps into `F(p <= q)` for all `p <= q`, checking that all
/// factorizations through different upper covers of `p` agree.
///
/// Elements are visited in decreasing degree, so every upper cover already
/// knows its composites.
pub(crate) fn composites<'a, F: Field>(
    poset: &Poset,
    field: &F,
    dims: &[usize],
    cover_map: impl Fn(usize) -> Cow<'a, Matrix<F>>,
) -> Result<Composites<F>> {
    let n = poset.len();
    let cover_of: HashMap<(usize, usize), usize> =
        poset.covers().iter().enumerate().map(|(k, &c)| (c, k)).collect();
    let mut comp: Composites<F> = vec![vec![None; n]; n];
    let mut via = vec![vec![usize::MAX; n]; n];
    for &p in poset.by_degree().iter().rev() {
        comp[p][p] = Some(Matrix::identity(field, dims[p]));
        for &x in poset.upper_covers(p) {
            let m = cover_map(cover_of[&(p, x)]);
            for q in (0..n).filter(|&q| poset.leq(x, q)) {
                let candidate = m.mul(comp[x][q].as_ref().expect("upper cover processed first"));
                match &comp[p][q] {
                    None => {
                        comp[p][q] = Some(candidate);
                        via[p][q] = x;
                    }
                    Some(existing) if *existing != candidate => {
                        return Err(Error::NonCommutingSquare {
                            p: poset.id(p).to_string(),
                            q: poset.id(q).to_string(),
                            via_first: poset.id(via[p][q]).to_string(),
                            via_second: poset.id(x).to_string(),
                        });
                    }
                    Some(_) => {}
                }
            }
        }
    }
    Ok(comp)
}

/// A functor `F: P^op -> Vect` given by one matrix per cover.
///
/// The matrix for the cover `p < q` represents `F(p <= q): F(q) -> F(p)` and
/// has shape `dim F(p) x dim F(q)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModuleDiagram<F: Field> {
    poset: Poset,
    field: F,
    dims: Vec<usize>,
    maps: Vec<Matrix<F>>,
    composites: Composites<F>,
}

impl<F: Field> ModuleDiagram<F> {
    pub fn new(poset: Poset, field: &F, dims: Vec<usize>, maps: Vec<Matrix<F>>) -> Result<Self> {
        if dims.len() != poset.len() {
            return Err(Error::ShapeMismatch(format!(
                "{} dimensions for {} elements",
                dims.len(),
                poset.len()
            )));
        }
        if maps.len() != poset.covers().len() {
            return Err(Error::ShapeMismatch(format!(
                "{} maps for {} covers",
                maps.len(),
                poset.covers().len()
            )));
        }
        for (&(p, q), m) in poset.covers().iter().zip(&maps) {
            if m.shape() != (dims[p], dims[q]) {
                return Err(Error::ShapeMismatch(format!(
                    "map for `{}` < `{}` has shape {:?}, expected {:?}",
                    poset.id(p),
                    poset.id(q),
                    m.shape(),
                    (dims[p], dims[q])
                )));
            }
        }
        let composites = composites(&poset, field, &dims, |k| Cow::Borrowed(&maps[k]))?;
        Ok(ModuleDiagram { poset, field: field.clone(), dims, maps, composites })
    }

    pub fn poset(&self) -> &Poset {
        &self.poset
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn dim(&self, p: usize) -> usize {
        self.dims[p]
    }

    /// Matrices indexed like [`Poset::covers`].
    pub fn maps(&self) -> &[Matrix<F>] {
        &self.maps
    }

    /// `F(p <= q)`, or `None` when `p` is not below `q`.
    pub fn composite(&self, p: usize, q: usize) -> Option<&Matrix<F>> {
        self.composites[p][q].as_ref()
    }

    /// Re-checks functoriality from the stored cover maps.
    pub fn validate_functor(&self) -> Result<()> {
        composites(&self.poset, &self.field, &self.dims, |k| Cow::Borrowed(&self.maps[k])).map(|_| ())
    }

    /// `F(p)` as a complex concentrated in degree 0.
    pub fn value(&self, p: usize) -> CochainComplex<F> {
        CochainComplex::concentrated(&self.field, self.dims[p])
    }

    /// The same functor viewed as a diagram of complexes in degree 0.
    pub fn as_complex_diagram(&self) -> ComplexDiagram<F> {
        let values: Vec<_> = (0..self.poset.len()).map(|p| self.value(p)).collect();
        let restrictions = self
            .poset
            .covers()
            .iter()
            .zip(&self.maps)
            .map(|(&(p, q), m)| {
                ChainMap::new(values[q].clone(), values[p].clone(), vec![m.clone()]).expect("degree-0 map")
            })
            .collect();
        ComplexDiagram { poset: self.poset.clone(), field: self.field.clone(), values, restrictions }
    }

    /// `dim lim F`, computed directly as a kernel.
    pub fn limit_dim(&self) -> Result<usize> {
        let all: Vec<usize> = (0..self.poset.len()).collect();
        Ok(self.as_complex_diagram().limit_over(&all)?.limit().dim(0))
    }

    /// For each element, whether every matching map `F(q) -> lim_{<q} F`
    /// with `q <= p` is onto.
    pub fn local_fibrancy(&self) -> Result<Vec<bool>> {
        let cd = self.as_complex_diagram();
        let mut fibrant = vec![false; self.poset.len()];
        for &p in self.poset.by_degree() {
            let below = self.poset.strict_down(p);
            let lim = cd.limit_over(&below)?;
            let eps = lim.coordinates_of_cone(0, self.dims[p], |q| self.composite(q, p).expect("q < p").clone())
                .ok_or_else(|| Error::NotInLimit(self.poset.id(p).to_string()))?;
            let onto = eps.is_epimorphism();
            fibrant[p] = onto && self.poset.lower_covers(p).iter().all(|&q| fibrant[q]);
        }
        Ok(fibrant)
    }

    pub fn is_locally_fibrant(&self, p: &str) -> Result<bool> {
        let p = self.poset.index_of(p)?;
        Ok(self.local_fibrancy()?[p])
    }

    /// `H^*(P; F)`, or `H^*(P_{<p}; F)` when `at` names an element.
    pub fn higher_limits(&self, at: Option<&str>) -> Result<Vec<usize>> {
        let at = at.map(|id| self.poset.index_of(id)).transpose()?;
        let rf = self.fibrant_replacement(None)?;
        match at {
            Some(p) => Ok(rf.limit_below(p).limit().cohomology_dims()),
            None => rf.higher_limits(),
        }
    }
}

/// A functor `P^op -> Ch` given by one chain map per cover, from the value
/// at the upper element to the value at the lower one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComplexDiagram<F: Field> {
    poset: Poset,
    field: F,
    values: Vec<CochainComplex<F>>,
    restrictions: Vec<ChainMap<F>>,
}

impl<F: Field> ComplexDiagram<F> {
    /// Checks that each restriction runs between the right values and that
    /// composites agree degreewise.
    pub fn new(
        poset: Poset,
        field: &F,
        values: Vec<CochainComplex<F>>,
        restrictions: Vec<ChainMap<F>>,
    ) -> Result<Self> {
        if values.len() != poset.len() || restrictions.len() != poset.covers().len() {
            return Err(Error::InvalidDiagram(format!(
                "{} values and {} restrictions for {} elements and {} covers",
                values.len(),
                restrictions.len(),
                poset.len(),
                poset.covers().len()
            )));
        }
        for (&(p, q), r) in poset.covers().iter().zip(&restrictions) {
            if r.source() != &values[q] || r.target() != &values[p] {
                return Err(Error::InvalidDiagram(format!(
                    "restriction for `{}` < `{}` does not run from the value at `{}` to the value at `{}`",
                    poset.id(p),
                    poset.id(q),
                    poset.id(q),
                    poset.id(p)
                )));
            }
        }
        let d = ComplexDiagram { poset, field: field.clone(), values, restrictions };
        d.validate_functor()?;
        Ok(d)
    }

    pub(crate) fn from_parts_unchecked(
        poset: Poset,
        field: &F,
        values: Vec<CochainComplex<F>>,
        restrictions: Vec<ChainMap<F>>,
    ) -> Self {
        ComplexDiagram { poset, field: field.clone(), values, restrictions }
    }

    pub fn validate_functor(&self) -> Result<()> {
        let top = self.values.iter().map(CochainComplex::len).max().unwrap_or(0);
        for k in 0..top {
            let dims: Vec<usize> = self.values.iter().map(|v| v.dim(k)).collect();
            composites(&self.poset, &self.field, &dims, |c| self.restrictions[c].component(k))?;
        }
        Ok(())
    }

    pub fn poset(&self) -> &Poset {
        &self.poset
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn value(&self, p: usize) -> &CochainComplex<F> {
        &self.values[p]
    }

    pub fn values(&self) -> &[CochainComplex<F>] {
        &self.values
    }

    /// Restriction for the cover with index `k` in [`Poset::covers`].
    pub fn restriction(&self, k: usize) -> &ChainMap<F> {
        &self.restrictions[k]
    }

    /// Largest height of a value.
    pub fn height(&self) -> crate::complex::Height {
        self.values.iter().map(CochainComplex::height).max().flatten()
    }

    /// The limit over a down-set of the poset.
    ///
    /// Inside a down-set every cover of the induced order is a cover of the
    /// whole poset, and every relation is a composite of covers, so
    /// compatibility along covers suffices.
    pub fn limit_over(&self, members: &[usize]) -> Result<LimitPresentation<F>> {
        let mut inside = vec![false; self.poset.len()];
        for &m in members {
            inside[m] = true;
        }
        if let Some(&(a, b)) = self.poset.covers().iter().find(|&&(a, b)| inside[b] && !inside[a]) {
            return Err(Error::InvalidDiagram(format!(
                "limit over a set that is not a down-set: `{}` < `{}`",
                self.poset.id(a),
                self.poset.id(b)
            )));
        }
        LimitPresentation::compute(&self.field, &self.poset, members, &self.values, |k| &self.restrictions[k])
    }

    /// The limit over the whole poset.
    pub fn limit(&self) -> Result<LimitPresentation<F>> {
        let all: Vec<usize> = (0..self.poset.len()).collect();
        self.limit_over(&all)
    }
}

#[cfg(test)]
pub(crate) mod fixtures {
    use super::*;
    use crate::exactla::Rationals;
    use crate::poset::fixtures as pf;

    pub fn constant<F: Field>(poset: Poset, field: &F, dim: usize) -> ModuleDiagram<F> {
        let maps = poset.covers().iter().map(|_| Matrix::identity(field, dim)).collect();
        ModuleDiagram::new(poset.clone(), field, vec![dim; poset.len()], maps).unwrap()
    }

    /// `0 < 1 < 2`, each value `ℚ`, both restrictions zero.
    pub fn chain3_zero() -> ModuleDiagram<Rationals> {
        let p = pf::chain(3);
        let maps = vec![Matrix::zeros(&Rationals, 1, 1); 2];
        ModuleDiagram::new(p, &Rationals, vec![1, 1, 1], maps).unwrap()
    }

    pub fn diamond() -> Poset {
        Poset::new(&["0", "a", "b", "1"], &[("0", "a"), ("0", "b"), ("a", "1"), ("b", "1")]).unwrap()
    }
}
