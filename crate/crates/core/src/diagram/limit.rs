use std::borrow::Cow;

use crate::complex::{ChainMap, CochainComplex};
use crate::error::{Error, Result};
use crate::exactla::{Field, Matrix, Subspace};
use crate::poset::Poset;

/// The limit of a diagram of complexes over a down-set, presented as a
/// subcomplex of the product of the values.
///
/// In degree `k` the product stacks `value(q)^k` for the members `q` in
/// input order, and the limit is the kernel of
/// `(x_q) ↦ (x_a - r_{a<b}(x_b))` over the covers `a < b` inside the set,
/// held in the canonical basis of [`Subspace`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LimitPresentation<F: Field> {
    members: Vec<usize>,
    values: Vec<CochainComplex<F>>,
    /// `offsets[k][i]`: first product row of member `i` in degree `k`.
    offsets: Vec<Vec<usize>>,
    subspaces: Vec<Subspace<F>>,
    limit: CochainComplex<F>,
}

impl<F: Field> LimitPresentation<F> {
    /// `members` must be a down-set; `values` and `restriction` are indexed
    /// by element and by cover of the whole poset.
    pub(crate) fn compute<'a>(
        field: &F,
        poset: &Poset,
        members: &[usize],
        values: &[CochainComplex<F>],
        restriction: impl Fn(usize) -> &'a ChainMap<F>,
    ) -> Result<Self> {
        let mut members = members.to_vec();
        members.sort_unstable();
        let mut slot = vec![usize::MAX; poset.len()];
        for (i, &m) in members.iter().enumerate() {
            slot[m] = i;
        }
        let inner: Vec<(usize, usize, usize)> = poset
            .covers()
            .iter()
            .enumerate()
            .filter(|(_, &(_, b))| slot[b] != usize::MAX)
            .map(|(k, &(a, b))| (k, slot[a], slot[b]))
            .collect();
        let member_values: Vec<CochainComplex<F>> = members.iter().map(|&m| values[m].clone()).collect();
        let top = member_values.iter().map(CochainComplex::len).max().unwrap_or(0);

        let mut offsets = Vec::with_capacity(top);
        let mut subspaces = Vec::with_capacity(top);
        for k in 0..top {
            let mut off = Vec::with_capacity(members.len() + 1);
            let mut n = 0;
            for v in &member_values {
                off.push(n);
                n += v.dim(k);
            }
            let rows: usize = inner.iter().map(|&(_, a, _)| member_values[a].dim(k)).sum();
            let mut compat = Matrix::zeros(field, rows, n);
            let mut r0 = 0;
            for &(c, a, b) in &inner {
                let da = member_values[a].dim(k);
                compat.set_block(r0, off[a], &Matrix::identity(field, da));
                compat.set_block(r0, off[b], &restriction(c).component(k).neg());
                r0 += da;
            }
            off.push(n);
            offsets.push(off);
            subspaces.push(Subspace::kernel_of(&compat));
        }

        let mut diffs = Vec::with_capacity(top.saturating_sub(1));
        for k in 0..top.saturating_sub(1) {
            let (off, next) = (&offsets[k], &offsets[k + 1]);
            let mut prod = Matrix::zeros(field, next[members.len()], off[members.len()]);
            for (i, v) in member_values.iter().enumerate() {
                prod.set_block(next[i], off[i], &v.differential(k));
            }
            let image = prod.mul(subspaces[k].basis());
            let d = subspaces[k + 1].coordinates(&image).ok_or_else(|| {
                Error::internal(format!("product differential leaves the limit in degree {k}"))
            })?;
            diffs.push(d);
        }
        let dims = subspaces.iter().map(Subspace::dim).collect();
        let limit = CochainComplex::new(field, dims, diffs).map_err(|e| Error::internal(e.to_string()))?;
        Ok(LimitPresentation { members, values: member_values, offsets, subspaces, limit })
    }

    pub fn limit(&self) -> &CochainComplex<F> {
        &self.limit
    }

    /// Members of the down-set, in input order.
    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn product_dim(&self, k: usize) -> usize {
        self.offsets.get(k).map_or(0, |o| o[self.members.len()])
    }

    /// Columns of the canonical basis of the limit inside the product, degree `k`.
    pub fn inclusion(&self, k: usize) -> Cow<'_, Matrix<F>> {
        match self.subspaces.get(k) {
            Some(s) => Cow::Borrowed(s.basis()),
            None => Cow::Owned(Matrix::zeros(self.limit.field(), 0, 0)),
        }
    }

    fn slot(&self, q: usize) -> usize {
        self.members.binary_search(&q).expect("projection onto a non-member")
    }

    /// Degree-`k` block of the projection onto member `q`.
    pub fn projection_component(&self, q: usize, k: usize) -> Matrix<F> {
        let i = self.slot(q);
        match self.subspaces.get(k) {
            Some(s) => s.basis().block(self.offsets[k][i], 0, self.values[i].dim(k), s.dim()),
            None => Matrix::zeros(self.limit.field(), self.values[i].dim(k), self.limit.dim(k)),
        }
    }

    /// The projection `lim -> value(q)` as a chain map.
    pub fn projection(&self, q: usize) -> ChainMap<F> {
        let i = self.slot(q);
        let comps = (0..self.limit.len()).map(|k| self.projection_component(q, k)).collect();
        ChainMap::new(self.limit.clone(), self.values[i].clone(), comps).expect("limit projections are chain maps")
    }

    /// Coordinates in the limit basis of the degree-`k` map whose leg into
    /// member `q` is `leg(q)`, a `dim value(q)^k x cols` matrix. `None` if the
    /// legs are not compatible.
    pub fn coordinates_of_cone(&self, k: usize, cols: usize, mut leg: impl FnMut(usize) -> Matrix<F>) -> Option<Matrix<F>> {
        let field = self.limit.field();
        let Some(s) = self.subspaces.get(k) else {
            return Some(Matrix::zeros(field, 0, cols));
        };
        let mut stacked = Matrix::zeros(field, self.product_dim(k), cols);
        for (i, &q) in self.members.iter().enumerate() {
            let m = leg(q);
            assert_eq!(m.shape(), (self.values[i].dim(k), cols), "cone leg shape");
            stacked.set_block(self.offsets[k][i], 0, &m);
        }
        s.coordinates(&stacked)
    }
}
