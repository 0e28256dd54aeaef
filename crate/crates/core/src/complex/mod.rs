//! Bounded, nonnegatively graded cochain complexes of finite-dimensional
//! vector spaces and the chain maps between them.

mod cocylinder;

use std::borrow::Cow;

pub use cocylinder::{is_truncatable, mapping_cocylinder, truncated_mapping_cocylinder, Cocylinder};

use crate::error::{Error, Result};
use crate::exactla::{Field, Matrix};

/// Height of a complex: the top nonzero degree, `None` standing for minus
/// infinity (the zero complex). `None` orders below every `Some`.
pub type Height = Option<usize>;

/// Renders a height, using `-inf` for the zero complex.
pub fn fmt_height(h: Height) -> String {
    h.map_or_else(|| "-inf".to_string(), |n| n.to_string())
}

/// `C^0 -> C^1 -> ... -> C^N`, with trailing zero degrees trimmed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CochainComplex<F: Field> {
    field: F,
    dims: Vec<usize>,
    /// `diffs[k]` maps degree `k` to degree `k + 1`, shape `dims[k+1] x dims[k]`.
    diffs: Vec<Matrix<F>>,
}

impl<F: Field> CochainComplex<F> {
    /// Validates shapes and `∂∘∂ = 0`, then trims trailing zero degrees.
    pub fn new(field: &F, dims: Vec<usize>, diffs: Vec<Matrix<F>>) -> Result<Self> {
        if diffs.len() + 1 != dims.len().max(1) {
            return Err(Error::InvalidComplex(format!(
                "{} degrees need {} differentials, got {}",
                dims.len(),
                dims.len().saturating_sub(1),
                diffs.len()
            )));
        }
        for (k, d) in diffs.iter().enumerate() {
            if d.shape() != (dims[k + 1], dims[k]) {
                return Err(Error::InvalidComplex(format!(
                    "differential {k} has shape {:?}, expected {:?}",
                    d.shape(),
                    (dims[k + 1], dims[k])
                )));
            }
        }
        for k in 1..diffs.len() {
            if !diffs[k].mul(&diffs[k - 1]).is_zero() {
                return Err(Error::InvalidComplex(format!("d{k} ∘ d{} is nonzero", k - 1)));
            }
        }
        let mut c = CochainComplex { field: field.clone(), dims, diffs };
        while c.dims.last() == Some(&0) {
            c.dims.pop();
            c.diffs.pop();
        }
        Ok(c)
    }

    pub fn zero(field: &F) -> Self {
        CochainComplex { field: field.clone(), dims: Vec::new(), diffs: Vec::new() }
    }

    /// A single vector space of dimension `dim` sitting in degree 0.
    pub fn concentrated(field: &F, dim: usize) -> Self {
        CochainComplex::new(field, vec![dim], Vec::new()).expect("one-term complex")
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    /// Dimensions in degrees `0..=height`.
    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    /// Dimension in degree `k`, zero past the top.
    pub fn dim(&self, k: usize) -> usize {
        self.dims.get(k).copied().unwrap_or(0)
    }

    /// Number of stored degrees (`height + 1`, or 0 for the zero complex).
    #[allow(clippy::len_without_is_empty)] // `is_zero` is the emptiness test
    pub fn len(&self) -> usize {
        self.dims.len()
    }

    pub fn is_zero(&self) -> bool {
        self.dims.is_empty()
    }

    /// The differential from degree `k` to `k + 1`.
    pub fn differential(&self, k: usize) -> Cow<'_, Matrix<F>> {
        match self.diffs.get(k) {
            Some(d) => Cow::Borrowed(d),
            None => Cow::Owned(Matrix::zeros(&self.field, self.dim(k + 1), self.dim(k))),
        }
    }

    pub fn height(&self) -> Height {
        self.dims.len().checked_sub(1)
    }

    /// `dim H^k = dim ker ∂^k - rank ∂^{k-1}` for `k = 0..=height`, trailing
    /// zeros trimmed.
    pub fn cohomology_dims(&self) -> Vec<usize> {
        let ranks: Vec<usize> = self.diffs.iter().map(Matrix::rank).collect();
        let mut h: Vec<usize> = (0..self.len())
            .map(|k| {
                let out = ranks.get(k).copied().unwrap_or(0);
                let inc = if k == 0 { 0 } else { ranks[k - 1] };
                self.dims[k] - out - inc
            })
            .collect();
        while h.last() == Some(&0) {
            h.pop();
        }
        h
    }

    pub fn is_acyclic(&self) -> bool {
        self.cohomology_dims().is_empty()
    }

    /// Truncation keeping degrees `0..=n` unchanged and zeroing everything above.
    pub fn truncate(&self, n: usize) -> Self {
        let keep = self.len().min(n + 1);
        CochainComplex::new(&self.field, self.dims[..keep].to_vec(), self.diffs[..keep.saturating_sub(1)].to_vec())
            .expect("truncation of a valid complex")
    }
}

/// Degreewise matrices `f^k: source^k -> target^k` commuting with the differentials.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainMap<F: Field> {
    source: CochainComplex<F>,
    target: CochainComplex<F>,
    components: Vec<Matrix<F>>,
}

impl<F: Field> ChainMap<F> {
    /// Validates shapes and `f^{k+1} ∂ = ∂ f^k`. Missing trailing components
    /// are taken to be zero.
    pub fn new(
        source: CochainComplex<F>,
        target: CochainComplex<F>,
        mut components: Vec<Matrix<F>>,
    ) -> Result<Self> {
        let f = source.field().clone();
        let n = source.len().max(target.len());
        if components.len() > n {
            if components[n..].iter().any(|m| !m.is_zero() || m.rows() + m.cols() > 0) {
                return Err(Error::InvalidChainMap(format!(
                    "{} components supplied, complexes live in degrees below {n}",
                    components.len()
                )));
            }
            components.truncate(n);
        }
        while components.len() < n {
            let k = components.len();
            components.push(Matrix::zeros(&f, target.dim(k), source.dim(k)));
        }
        for (k, m) in components.iter().enumerate() {
            if m.shape() != (target.dim(k), source.dim(k)) {
                return Err(Error::InvalidChainMap(format!(
                    "component {k} has shape {:?}, expected {:?}",
                    m.shape(),
                    (target.dim(k), source.dim(k))
                )));
            }
        }
        let map = ChainMap { source, target, components };
        for k in 0..n {
            let lhs = map.component(k + 1).mul(&map.source.differential(k));
            let rhs = map.target.differential(k).mul(&map.components[k]);
            if lhs != rhs {
                return Err(Error::InvalidChainMap(format!("square at degree {k} does not commute")));
            }
        }
        Ok(map)
    }

    pub fn identity(c: &CochainComplex<F>) -> Self {
        let components = c.dims().iter().map(|&d| Matrix::identity(c.field(), d)).collect();
        ChainMap { source: c.clone(), target: c.clone(), components }
    }

    pub fn zero(source: &CochainComplex<F>, target: &CochainComplex<F>) -> Self {
        ChainMap::new(source.clone(), target.clone(), Vec::new()).expect("zero map")
    }

    pub fn source(&self) -> &CochainComplex<F> {
        &self.source
    }

    pub fn target(&self) -> &CochainComplex<F> {
        &self.target
    }

    /// Component in degree `k`, zero outside the stored range.
    pub fn component(&self, k: usize) -> Cow<'_, Matrix<F>> {
        match self.components.get(k) {
            Some(m) => Cow::Borrowed(m),
            None => Cow::Owned(Matrix::zeros(self.source.field(), self.target.dim(k), self.source.dim(k))),
        }
    }

    pub fn components(&self) -> &[Matrix<F>] {
        &self.components
    }

    /// `self ∘ first`.
    pub fn after(&self, first: &ChainMap<F>) -> Result<Self> {
        if first.target != self.source {
            return Err(Error::InvalidChainMap("composition of non-composable chain maps".into()));
        }
        let n = first.source.len().max(self.target.len());
        let components = (0..n).map(|k| self.component(k).mul(&first.component(k))).collect();
        Ok(ChainMap { source: first.source.clone(), target: self.target.clone(), components })
    }

    pub fn is_degreewise_epi(&self) -> bool {
        self.components.iter().all(Matrix::is_epimorphism)
    }

    /// Degreewise ranks, one per degree of the target.
    pub fn ranks(&self) -> Vec<usize> {
        (0..self.target.len()).map(|k| self.component(k).rank()).collect()
    }

    /// Whether the map induces isomorphisms on all cohomology groups,
    /// tested by acyclicity of the mapping cone.
    pub fn is_quasi_iso(&self) -> bool {
        self.mapping_cone().is_acyclic()
    }

    /// The mapping cone `C^{k+1} ⊕ D^k` with `∂(c, d) = (-∂c, f(c) + ∂d)`,
    /// shifted up by one so the complex starts in degree 0.
    fn mapping_cone(&self) -> CochainComplex<F> {
        let f = self.source.field();
        let (c, d) = (&self.source, &self.target);
        let n = c.len().max(d.len() + 1);
        let dims: Vec<usize> = (0..n).map(|j| c.dim(j) + if j == 0 { 0 } else { d.dim(j - 1) }).collect();
        let mut diffs = Vec::with_capacity(n.saturating_sub(1));
        for j in 0..n.saturating_sub(1) {
            let mut m = Matrix::zeros(f, dims[j + 1], dims[j]);
            let c_in = c.dim(j);
            m.set_block(0, 0, &c.differential(j).neg());
            m.set_block(c.dim(j + 1), 0, &self.component(j));
            if j > 0 {
                m.set_block(c.dim(j + 1), c_in, &d.differential(j - 1));
            }
            diffs.push(m);
        }
        CochainComplex::new(f, dims, diffs).expect("mapping cone of a chain map is a complex")
    }
}
