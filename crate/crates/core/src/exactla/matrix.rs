use std::fmt;

use crate::error::{Error, Result};
use crate::exactla::field::Field;

/// Dense row-major matrix over an exact field.
///
/// A `rows x cols` matrix is a linear map from `cols`-space to `rows`-space
/// acting on column vectors.
#[derive(Clone, PartialEq, Eq)]
pub struct Matrix<F: Field> {
    field: F,
    rows: usize,
    cols: usize,
    data: Vec<F::Elem>,
}

impl<F: Field> fmt::Debug for Matrix<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            if r > 0 {
                write!(f, "; ")?;
            }
            let row: Vec<String> = self.row(r).iter().map(|x| self.field.format(x)).collect();
            write!(f, "{}", row.join(" "))?;
        }
        write!(f, "]")
    }
}

impl<F: Field> Matrix<F> {
    pub fn zeros(field: &F, rows: usize, cols: usize) -> Self {
        Matrix { field: field.clone(), rows, cols, data: vec![field.zero(); rows * cols] }
    }

    pub fn identity(field: &F, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.data[i * n + i] = field.one();
        }
        m
    }

    /// Builds a matrix from row-major data; `data.len()` must equal `rows * cols`.
    pub fn from_vec(field: &F, rows: usize, cols: usize, data: Vec<F::Elem>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::ShapeMismatch(format!(
                "{} entries supplied for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(Matrix { field: field.clone(), rows, cols, data })
    }

    /// Convenience constructor from small integer rows. All rows must share a length.
    pub fn from_i64_rows(field: &F, rows: &[&[i64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        let mut data = Vec::with_capacity(rows.len() * cols);
        for row in rows {
            assert_eq!(row.len(), cols, "ragged rows");
            data.extend(row.iter().map(|&v| field.from_i64(v)));
        }
        Matrix { field: field.clone(), rows: rows.len(), cols, data }
    }

    pub fn field(&self) -> &F {
        &self.field
    }
    pub fn rows(&self) -> usize {
        self.rows
    }
    pub fn cols(&self) -> usize {
        self.cols
    }
    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn get(&self, r: usize, c: usize) -> &F::Elem {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: F::Elem) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[F::Elem] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| self.field.is_zero(x))
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(&self.field, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.data[c * self.rows + r] = self.get(r, c).clone();
            }
        }
        t
    }

    /// Exact product `self · rhs`.
    pub fn compose(&self, rhs: &Self) -> Result<Self> {
        if self.cols != rhs.rows {
            return Err(Error::ShapeMismatch(format!(
                "cannot compose {}x{} with {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        Ok(self.mul(rhs))
    }

    /// Product for shapes already known to agree.
    pub(crate) fn mul(&self, rhs: &Self) -> Self {
        assert_eq!(self.cols, rhs.rows, "matrix product shape");
        let f = &self.field;
        let mut out = Self::zeros(f, self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if f.is_zero(a) {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = rhs.get(k, j);
                    if f.is_zero(b) {
                        continue;
                    }
                    let idx = i * rhs.cols + j;
                    out.data[idx] = f.add(&out.data[idx], &f.mul(a, b));
                }
            }
        }
        out
    }

    pub fn add(&self, rhs: &Self) -> Result<Self> {
        self.zip_with(rhs, |f, a, b| f.add(a, b))
    }

    pub fn sub(&self, rhs: &Self) -> Result<Self> {
        self.zip_with(rhs, |f, a, b| f.sub(a, b))
    }

    fn zip_with(&self, rhs: &Self, op: impl Fn(&F, &F::Elem, &F::Elem) -> F::Elem) -> Result<Self> {
        if self.shape() != rhs.shape() {
            return Err(Error::ShapeMismatch(format!(
                "{}x{} vs {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let data = self.data.iter().zip(&rhs.data).map(|(a, b)| op(&self.field, a, b)).collect();
        Ok(Matrix { field: self.field.clone(), rows: self.rows, cols: self.cols, data })
    }

    pub fn neg(&self) -> Self {
        let data = self.data.iter().map(|a| self.field.neg(a)).collect();
        Matrix { field: self.field.clone(), rows: self.rows, cols: self.cols, data }
    }

    /// Copies `block` into `self` with its top-left corner at `(r0, c0)`.
    pub fn set_block(&mut self, r0: usize, c0: usize, block: &Self) {
        assert!(r0 + block.rows <= self.rows && c0 + block.cols <= self.cols, "block out of range");
        for r in 0..block.rows {
            let dst = (r0 + r) * self.cols + c0;
            self.data[dst..dst + block.cols].clone_from_slice(block.row(r));
        }
    }

    /// The `rows x cols` submatrix starting at `(r0, c0)`.
    pub fn block(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Self {
        assert!(r0 + rows <= self.rows && c0 + cols <= self.cols, "block out of range");
        let mut data = Vec::with_capacity(rows * cols);
        for r in r0..r0 + rows {
            data.extend_from_slice(&self.row(r)[c0..c0 + cols]);
        }
        Matrix { field: self.field.clone(), rows, cols, data }
    }

    /// Stacks matrices with equal column counts on top of each other.
    pub fn vstack(field: &F, cols: usize, parts: &[&Self]) -> Self {
        let rows = parts.iter().map(|m| m.rows).sum();
        let mut out = Self::zeros(field, rows, cols);
        let mut r0 = 0;
        for m in parts {
            assert_eq!(m.cols, cols, "vstack column mismatch");
            out.set_block(r0, 0, m);
            r0 += m.rows;
        }
        out
    }

    pub fn rank(&self) -> usize {
        self.rref().pivots.len()
    }

    /// Rank and a canonical basis of the null space.
    ///
    /// The kernel basis has one column per non-pivot column `j` of the
    /// reduced row echelon form, ordered by `j`. Column `j` has entry 1 at
    /// row `j`, zero at every other free row, and its last nonzero entry is
    /// that 1. This is the reduced column echelon form with pivots taken at
    /// the lowest entry, so it depends only on the null space.
    pub fn rank_and_kernel(&self) -> (usize, Self) {
        let f = &self.field;
        let reduced = self.rref();
        let rank = reduced.pivots.len();
        let mut is_pivot = vec![false; self.cols];
        for &c in &reduced.pivots {
            is_pivot[c] = true;
        }
        let free: Vec<usize> = (0..self.cols).filter(|&c| !is_pivot[c]).collect();
        let mut kernel = Self::zeros(f, self.cols, free.len());
        for (k, &j) in free.iter().enumerate() {
            kernel.set(j, k, f.one());
            for (i, &pc) in reduced.pivots.iter().enumerate() {
                let v = reduced.matrix.get(i, j);
                if !f.is_zero(v) {
                    kernel.set(pc, k, f.neg(v));
                }
            }
        }
        (rank, kernel)
    }

    /// True iff the map is surjective onto `rows`-space.
    pub fn is_epimorphism(&self) -> bool {
        self.rank() == self.rows
    }

    pub fn inverse(&self) -> Option<Self> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        let mut aug = Self::zeros(&self.field, n, 2 * n);
        aug.set_block(0, 0, self);
        aug.set_block(0, n, &Self::identity(&self.field, n));
        let reduced = aug.rref();
        // Invertible iff the left half reduces to the identity.
        if reduced.pivots.iter().take_while(|&&c| c < n).count() < n {
            return None;
        }
        Some(reduced.matrix.block(0, n, n, n))
    }

    /// Reduced row echelon form with the list of pivot columns.
    pub(crate) fn rref(&self) -> Rref<F> {
        let f = &self.field;
        let mut m = self.clone();
        let (rows, cols) = (m.rows, m.cols);
        let mut pivots = Vec::new();
        let mut pr = 0;
        for c in 0..cols {
            if pr == rows {
                break;
            }
            let Some(sel) = (pr..rows).find(|&r| !f.is_zero(m.get(r, c))) else {
                continue;
            };
            if sel != pr {
                for j in c..cols {
                    m.data.swap(sel * cols + j, pr * cols + j);
                }
            }
            let inv = f.inv(m.get(pr, c));
            for j in c..cols {
                let idx = pr * cols + j;
                if !f.is_zero(&m.data[idx]) {
                    m.data[idx] = f.mul(&m.data[idx], &inv);
                }
            }
            let pivot_row: Vec<F::Elem> = m.data[pr * cols + c..(pr + 1) * cols].to_vec();
            for r in 0..rows {
                if r == pr {
                    continue;
                }
                let factor = m.get(r, c).clone();
                if f.is_zero(&factor) {
                    continue;
                }
                for (off, pv) in pivot_row.iter().enumerate() {
                    if f.is_zero(pv) {
                        continue;
                    }
                    f.sub_mul_assign(&mut m.data[r * cols + c + off], &factor, pv);
                }
            }
            pivots.push(c);
            pr += 1;
        }
        Rref { matrix: m, pivots }
    }
}

pub(crate) struct Rref<F: Field> {
    pub matrix: Matrix<F>,
    pub pivots: Vec<usize>,
}

/// A subspace of `F^n` held in canonical form.
///
/// Each basis column has its last nonzero entry equal to 1 in a distinct
/// "pivot" row, every other basis column vanishes in that row, and columns
/// are sorted by pivot row. Coordinates of a vector in the subspace are
/// therefore just its entries at the pivot rows.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subspace<F: Field> {
    basis: Matrix<F>,
    pivots: Vec<usize>,
}

impl<F: Field> Subspace<F> {
    /// The null space of `m`, using the basis of [`Matrix::rank_and_kernel`].
    pub fn kernel_of(m: &Matrix<F>) -> Self {
        let (_, basis) = m.rank_and_kernel();
        let pivots = (0..basis.cols()).map(|k| last_nonzero_row(&basis, k)).collect();
        Subspace { basis, pivots }
    }

    /// The column span of `m`, canonicalized.
    pub fn span_of(m: &Matrix<F>) -> Self {
        let f = m.field().clone();
        let n = m.rows();
        // Row-reduce the transpose with coordinates reversed, so each pivot
        // lands on the last nonzero coordinate of the original vectors.
        let mut rev = Matrix::zeros(&f, m.cols(), n);
        for r in 0..n {
            for c in 0..m.cols() {
                rev.set(c, n - 1 - r, m.get(r, c).clone());
            }
        }
        let reduced = rev.rref();
        let k = reduced.pivots.len();
        let mut basis = Matrix::zeros(&f, n, k);
        let mut pivots = Vec::with_capacity(k);
        for (col, i) in (0..k).rev().enumerate() {
            for r in 0..n {
                basis.set(r, col, reduced.matrix.get(i, n - 1 - r).clone());
            }
            pivots.push(n - 1 - reduced.pivots[i]);
        }
        Subspace { basis, pivots }
    }

    pub fn ambient_dim(&self) -> usize {
        self.basis.rows()
    }
    pub fn dim(&self) -> usize {
        self.basis.cols()
    }
    pub fn basis(&self) -> &Matrix<F> {
        &self.basis
    }
    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Coordinates of the columns of `v` in this basis, or `None` if some
    /// column lies outside the subspace.
    pub fn coordinates(&self, v: &Matrix<F>) -> Option<Matrix<F>> {
        assert_eq!(v.rows(), self.ambient_dim(), "vector length");
        let f = v.field();
        let mut coords = Matrix::zeros(f, self.dim(), v.cols());
        for (i, &p) in self.pivots.iter().enumerate() {
            for c in 0..v.cols() {
                coords.set(i, c, v.get(p, c).clone());
            }
        }
        (self.basis.mul(&coords) == *v).then_some(coords)
    }
}

fn last_nonzero_row<F: Field>(m: &Matrix<F>, col: usize) -> usize {
    (0..m.rows()).rev().find(|&r| !m.field().is_zero(m.get(r, col))).expect("zero basis column")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactla::field::{PrimeField, Rationals};

    #[test]
    fn kernel_of_row_vector_is_canonical() {
        let m = Matrix::from_i64_rows(&Rationals, &[&[1, 1]]);
        let (rank, ker) = m.rank_and_kernel();
        assert_eq!(rank, 1);
        assert_eq!(ker, Matrix::from_i64_rows(&Rationals, &[&[-1], &[1]]));
    }

    #[test]
    fn kernel_of_identity_and_empty() {
        let id = Matrix::identity(&Rationals, 2);
        let (rank, ker) = id.rank_and_kernel();
        assert_eq!((rank, ker.shape()), (2, (2, 0)));

        let empty = Matrix::zeros(&Rationals, 0, 3);
        let (rank, ker) = empty.rank_and_kernel();
        assert_eq!(rank, 0);
        assert_eq!(ker, Matrix::identity(&Rationals, 3));

        let wide = Matrix::zeros(&Rationals, 3, 0);
        assert_eq!(wide.rank_and_kernel().1.shape(), (0, 0));
    }

    #[test]
    fn epimorphism_checks() {
        let q = Rationals;
        assert!(Matrix::from_i64_rows(&q, &[&[1, 1]]).is_epimorphism());
        assert!(!Matrix::from_i64_rows(&q, &[&[1], &[1]]).is_epimorphism());
        assert!(Matrix::zeros(&q, 0, 4).is_epimorphism());
        assert!(!Matrix::zeros(&q, 1, 0).is_epimorphism());
    }

    #[test]
    fn compose_examples() {
        let q = Rationals;
        let a = Matrix::from_i64_rows(&q, &[&[2]]);
        let b = Matrix::from_i64_rows(&q, &[&[3]]);
        assert_eq!(a.compose(&b).unwrap(), Matrix::from_i64_rows(&q, &[&[6]]));

        let a = Matrix::zeros(&q, 2, 0);
        let b = Matrix::zeros(&q, 0, 3);
        assert_eq!(a.compose(&b).unwrap(), Matrix::zeros(&q, 2, 3));

        let f5 = PrimeField::new(5).unwrap();
        let a = Matrix::from_i64_rows(&f5, &[&[3]]);
        let b = Matrix::from_i64_rows(&f5, &[&[4]]);
        assert_eq!(a.compose(&b).unwrap(), Matrix::from_i64_rows(&f5, &[&[2]]));

        assert!(matches!(
            Matrix::zeros(&q, 2, 2).compose(&Matrix::zeros(&q, 3, 1)),
            Err(Error::ShapeMismatch(_))
        ));
    }

    #[test]
    fn span_canonical_form_matches_kernel_form() {
        let q = Rationals;
        let m = Matrix::from_i64_rows(&q, &[&[1, 2, 0, 1], &[0, 0, 1, 3]]);
        let ker = Subspace::kernel_of(&m);
        // Any other spanning set of the same subspace canonicalizes identically.
        let mixed = ker.basis().mul(&Matrix::from_i64_rows(&q, &[&[2, 1], &[1, 1]]));
        assert_eq!(Subspace::span_of(&mixed), ker);
        assert_eq!(ker.pivots(), &[1, 3]);
    }

    #[test]
    fn coordinates_detect_membership() {
        let q = Rationals;
        let s = Subspace::span_of(&Matrix::from_i64_rows(&q, &[&[1], &[1]]));
        let inside = Matrix::from_i64_rows(&q, &[&[3], &[3]]);
        assert_eq!(s.coordinates(&inside).unwrap(), Matrix::from_i64_rows(&q, &[&[3]]));
        assert!(s.coordinates(&Matrix::from_i64_rows(&q, &[&[1], &[0]])).is_none());
    }

    #[test]
    fn inverse_round_trip() {
        let q = Rationals;
        let m = Matrix::from_i64_rows(&q, &[&[2, 1], &[1, 1]]);
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv), Matrix::identity(&q, 2));
        assert!(Matrix::from_i64_rows(&q, &[&[1, 1], &[1, 1]]).inverse().is_none());
        assert_eq!(Matrix::<Rationals>::zeros(&q, 0, 0).inverse().unwrap().shape(), (0, 0));
    }
}
