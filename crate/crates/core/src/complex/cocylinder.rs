use super::{ChainMap, CochainComplex};
use crate::error::{Error, Result};
use crate::exactla::{Field, Matrix};

/// A factorization `f = π ∘ i` with `i` a quasi-isomorphism and `π` a
/// degreewise epimorphism.
///
/// Degree `k` of the middle complex is `C^k ⊕ D^{k-1} ⊕ D^k`, blocks in that
/// order, with `∂(c, d, d') = (∂c, d' - f(c) - ∂d, ∂d')`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cocylinder<F: Field> {
    pub complex: CochainComplex<F>,
    /// `c ↦ (c, 0, f(c))`.
    pub inclusion: ChainMap<F>,
    pub projection: ChainMap<F>,
}

struct Layout {
    c: Vec<usize>,
    d: Vec<usize>,
}

impl Layout {
    fn c(&self, k: usize) -> usize {
        self.c.get(k).copied().unwrap_or(0)
    }
    fn d(&self, k: usize) -> usize {
        self.d.get(k).copied().unwrap_or(0)
    }
    /// `D^{k-1}`, zero in degree 0.
    fn shifted(&self, k: usize) -> usize {
        if k == 0 {
            0
        } else {
            self.d(k - 1)
        }
    }
    fn dim(&self, k: usize) -> usize {
        self.c(k) + self.shifted(k) + self.d(k)
    }
}

fn cocylinder_complex<F: Field>(f: &ChainMap<F>) -> (Layout, CochainComplex<F>) {
    let field = f.source().field();
    let (src, tgt) = (f.source(), f.target());
    let lay = Layout { c: src.dims().to_vec(), d: tgt.dims().to_vec() };
    let top = src.len().max(tgt.len() + usize::from(!tgt.is_zero()));
    let dims: Vec<usize> = (0..top).map(|k| lay.dim(k)).collect();
    let mut diffs = Vec::with_capacity(top.saturating_sub(1));
    for k in 0..top.saturating_sub(1) {
        let mut m = Matrix::zeros(field, dims[k + 1], dims[k]);
        let (row_shift, row_d) = (lay.c(k + 1), lay.c(k + 1) + lay.d(k));
        let (col_shift, col_d) = (lay.c(k), lay.c(k) + lay.shifted(k));
        m.set_block(0, 0, &src.differential(k));
        m.set_block(row_shift, 0, &f.component(k).neg());
        if k > 0 {
            m.set_block(row_shift, col_shift, &tgt.differential(k - 1).neg());
        }
        m.set_block(row_shift, col_d, &Matrix::identity(field, lay.d(k)));
        m.set_block(row_d, col_d, &tgt.differential(k));
        diffs.push(m);
    }
    let cocyl = CochainComplex::new(field, dims, diffs).expect("cocylinder differential squares to zero");
    (lay, cocyl)
}

fn inclusion<F: Field>(f: &ChainMap<F>, lay: &Layout, cocyl: &CochainComplex<F>) -> ChainMap<F> {
    let field = f.source().field();
    let components = (0..f.source().len())
        .map(|k| {
            let mut m = Matrix::zeros(field, lay.dim(k), lay.c(k));
            m.set_block(0, 0, &Matrix::identity(field, lay.c(k)));
            m.set_block(lay.c(k) + lay.shifted(k), 0, &f.component(k));
            m
        })
        .collect();
    ChainMap::new(f.source().clone(), cocyl.clone(), components).expect("cocylinder inclusion is a chain map")
}

/// The mapping cocylinder of `f: C -> D`.
pub fn mapping_cocylinder<F: Field>(f: &ChainMap<F>) -> Cocylinder<F> {
    let field = f.source().field();
    let (lay, complex) = cocylinder_complex(f);
    let inclusion = inclusion(f, &lay, &complex);
    let components = (0..f.target().len())
        .map(|k| {
            let mut m = Matrix::zeros(field, lay.d(k), lay.dim(k));
            m.set_block(0, lay.c(k) + lay.shifted(k), &Matrix::identity(field, lay.d(k)));
            m
        })
        .collect();
    let projection = ChainMap::new(complex.clone(), f.target().clone(), components)
        .expect("cocylinder projection is a chain map");
    Cocylinder { complex, inclusion, projection }
}

/// `h(C) < h(D)` and the top differential of `D` is onto.
pub fn is_truncatable<F: Field>(f: &ChainMap<F>) -> bool {
    match f.target().height() {
        Some(h) if h >= 1 && f.source().height() < Some(h) => f.target().differential(h - 1).is_epimorphism(),
        _ => false,
    }
}

/// The cocylinder of `C -> TD`, where `TD` drops the top degree `n + 1` of `D`,
/// with a projection back onto all of `D` that is `∂^n` on the shifted block in
/// degree `n + 1`. Its height is `h(D)` rather than `h(D) + 1`.
pub fn truncated_mapping_cocylinder<F: Field>(f: &ChainMap<F>) -> Result<Cocylinder<F>> {
    if !is_truncatable(f) {
        return Err(Error::NotTruncatable);
    }
    let field = f.source().field();
    let top = f.target().height().expect("truncatable targets are nonzero");
    let n = top - 1;
    let truncated_target = f.target().truncate(n);
    let tf = ChainMap::new(f.source().clone(), truncated_target, f.components()[..=n].to_vec())?;
    let (lay, complex) = cocylinder_complex(&tf);
    let inclusion = inclusion(&tf, &lay, &complex);
    let mut components: Vec<Matrix<F>> = (0..=n)
        .map(|k| {
            let mut m = Matrix::zeros(field, lay.d(k), lay.dim(k));
            m.set_block(0, lay.c(k) + lay.shifted(k), &Matrix::identity(field, lay.d(k)));
            m
        })
        .collect();
    let mut last = Matrix::zeros(field, f.target().dim(top), lay.dim(top));
    last.set_block(0, lay.c(top), &f.target().differential(n));
    components.push(last);
    let projection = ChainMap::new(complex.clone(), f.target().clone(), components)
        .expect("truncated cocylinder projection is a chain map");
    Ok(Cocylinder { complex, inclusion, projection })
}

#[cfg(test)]
mod tests {
    use super::super::tests::q_complex;
    use super::*;
    use crate::exactla::Rationals;

    fn q(rows: &[&[i64]]) -> Matrix<Rationals> {
        Matrix::from_i64_rows(&Rationals, rows)
    }

    fn check_factorization(c: &Cocylinder<Rationals>, f: &ChainMap<Rationals>) {
        assert_eq!(&c.projection.after(&c.inclusion).unwrap(), f);
        assert!(c.inclusion.is_quasi_iso());
        assert!(c.projection.is_degreewise_epi());
        assert_eq!(c.complex.cohomology_dims(), f.source().cohomology_dims());
    }

    #[test]
    fn cocylinder_of_identity() {
        let one = q_complex(&[1], &[]);
        let f = ChainMap::identity(&one);
        let c = mapping_cocylinder(&f);
        assert_eq!(c.complex.dims(), &[2, 1]);
        assert_eq!(c.complex.differential(0).into_owned(), q(&[&[-1, 1]]));
        assert_eq!(c.complex.cohomology_dims(), vec![1]);
        check_factorization(&c, &f);
    }

    #[test]
    fn cocylinder_of_zero_source() {
        let zero = CochainComplex::zero(&Rationals);
        let one = q_complex(&[1], &[]);
        let f = ChainMap::zero(&zero, &one);
        let c = mapping_cocylinder(&f);
        assert_eq!(c.complex.dims(), &[1, 1]);
        assert_eq!(c.complex.differential(0).into_owned(), q(&[&[1]]));
        assert!(c.complex.cohomology_dims().is_empty());
        check_factorization(&c, &f);
    }

    #[test]
    fn cocylinder_of_diagonal() {
        let f = ChainMap::new(q_complex(&[1], &[]), q_complex(&[2], &[]), vec![q(&[&[1], &[1]])]).unwrap();
        let c = mapping_cocylinder(&f);
        assert_eq!(c.complex.dims(), &[3, 2]);
        assert_eq!(c.complex.differential(0).into_owned(), q(&[&[-1, 1, 0], &[-1, 0, 1]]));
        assert_eq!(c.complex.cohomology_dims(), vec![1]);
        check_factorization(&c, &f);
    }

    #[test]
    fn cocylinder_of_two_term_map() {
        let src = q_complex(&[1, 1], &[&[&[0]]]);
        let tgt = q_complex(&[2, 1], &[&[&[1, -1]]]);
        let f = ChainMap::new(src, tgt, vec![q(&[&[1], &[1]]), q(&[&[0]])]).unwrap();
        let c = mapping_cocylinder(&f);
        assert_eq!(c.complex.dims(), &[3, 4, 1]);
        assert_eq!(c.complex.height(), Some(2));
        check_factorization(&c, &f);
    }

    #[test]
    fn truncatability() {
        let one = q_complex(&[1], &[]);
        let epi = q_complex(&[1, 1], &[&[&[1]]]);
        let flat = q_complex(&[1, 1], &[&[&[0]]]);
        assert!(is_truncatable(&ChainMap::zero(&one, &epi)));
        assert!(!is_truncatable(&ChainMap::identity(&one)));
        assert!(!is_truncatable(&ChainMap::zero(&one, &flat)));
        let zero = CochainComplex::zero(&Rationals);
        assert!(!is_truncatable(&ChainMap::zero(&one, &zero)));
        assert!(matches!(truncated_mapping_cocylinder(&ChainMap::identity(&one)), Err(Error::NotTruncatable)));
    }

    #[test]
    fn truncated_cocylinder_into_identity_differential() {
        let one = q_complex(&[1], &[]);
        let epi = q_complex(&[1, 1], &[&[&[1]]]);
        // Degree-0 maps into an acyclic two-term complex are forced to vanish.
        let f = ChainMap::zero(&one, &epi);
        let c = truncated_mapping_cocylinder(&f).unwrap();
        assert_eq!(c.complex.dims(), &[2, 1]);
        assert_eq!(c.projection.component(1).into_owned(), q(&[&[1]]));
        assert_eq!(c.complex.height(), f.target().height());
        check_factorization(&c, &f);
    }

    #[test]
    fn truncated_cocylinder_of_zero_map_into_two_term_limit() {
        let one = q_complex(&[1], &[]);
        let tgt = q_complex(&[2, 1], &[&[&[-1, 1]]]);
        let f = ChainMap::zero(&one, &tgt);
        let c = truncated_mapping_cocylinder(&f).unwrap();
        assert_eq!(c.complex.dims(), &[3, 2]);
        check_factorization(&c, &f);
    }
}
