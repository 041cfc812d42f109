//! Dense exact linear algebra over `Q(i)`.
//!
//! Subspaces are always kept in reduced row echelon form (pivot = lowest
//! index), so two `Subspace` values are equal iff they are the same space.

use std::fmt;

use num_rational::BigRational;

use crate::scalar::Scalar;

pub type Vector = Vec<Scalar>;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Mat {
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

impl fmt::Debug for Mat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Mat{}x{}", self.rows, self.cols)?;
        f.debug_list().entries((0..self.rows).map(|i| self.row(i))).finish()
    }
}

impl Mat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Mat { rows, cols, data: vec![Scalar::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Mat::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Scalar::one());
        }
        m
    }

    pub fn scalar_identity(n: usize, c: &Scalar) -> Self {
        let mut m = Mat::zeros(n, n);
        for i in 0..n {
            m.set(i, i, c.clone());
        }
        m
    }

    /// Panics if the rows are ragged.
    pub fn from_rows(rows: usize, cols: usize, entries: Vec<Vec<Scalar>>) -> Self {
        assert_eq!(entries.len(), rows, "row count");
        let mut data = Vec::with_capacity(rows * cols);
        for r in entries {
            assert_eq!(r.len(), cols, "ragged matrix");
            data.extend(r);
        }
        Mat { rows, cols, data }
    }

    pub fn from_cols(rows: usize, cols: &[Vector]) -> Self {
        let mut m = Mat::zeros(rows, cols.len());
        for (j, c) in cols.iter().enumerate() {
            assert_eq!(c.len(), rows, "column length");
            for (i, x) in c.iter().enumerate() {
                m.set(i, j, x.clone());
            }
        }
        m
    }

    pub fn from_i64(rows: usize, cols: usize, entries: &[i64]) -> Self {
        assert_eq!(entries.len(), rows * cols);
        Mat { rows, cols, data: entries.iter().map(|&x| Scalar::int(x)).collect() }
    }

    pub fn column(v: &[Scalar]) -> Self {
        Mat::from_cols(v.len(), &[v.to_vec()])
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, x: Scalar) {
        self.data[i * self.cols + j] = x;
    }

    pub fn row(&self, i: usize) -> Vector {
        self.data[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn col(&self, j: usize) -> Vector {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn col_vectors(&self) -> Vec<Vector> {
        (0..self.cols).map(|j| self.col(j)).collect()
    }

    pub fn row_vectors(&self) -> Vec<Vector> {
        (0..self.rows).map(|i| self.row(i)).collect()
    }

    pub fn entries(&self) -> impl Iterator<Item = &Scalar> {
        self.data.iter()
    }

    pub fn transpose(&self) -> Mat {
        let mut t = Mat::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn conj(&self) -> Mat {
        Mat { rows: self.rows, cols: self.cols, data: self.data.iter().map(Scalar::conj).collect() }
    }

    pub fn map(&self, f: impl Fn(&Scalar) -> Scalar) -> Mat {
        Mat { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    pub fn scale(&self, c: &Scalar) -> Mat {
        self.map(|x| x * c)
    }

    pub fn neg(&self) -> Mat {
        self.map(|x| -x)
    }

    pub fn add(&self, other: &Mat) -> Mat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "shape mismatch in add");
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect();
        Mat { rows: self.rows, cols: self.cols, data }
    }

    pub fn sub(&self, other: &Mat) -> Mat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "shape mismatch in sub");
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect();
        Mat { rows: self.rows, cols: self.cols, data }
    }

    pub fn mul(&self, other: &Mat) -> Mat {
        assert_eq!(self.cols, other.rows, "shape mismatch in mul");
        let mut out = Mat::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let idx = i * out.cols + j;
                    out.data[idx] += &(a * b);
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Scalar]) -> Vector {
        assert_eq!(self.cols, v.len(), "shape mismatch in mul_vec");
        (0..self.rows)
            .map(|i| {
                let mut acc = Scalar::zero();
                for (k, x) in v.iter().enumerate() {
                    if !x.is_zero() {
                        acc += &(self.get(i, k) * x);
                    }
                }
                acc
            })
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Scalar::is_zero)
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols && *self == Mat::identity(self.rows)
    }

    pub fn is_rational(&self) -> bool {
        self.data.iter().all(Scalar::is_rational)
    }

    pub fn hstack(&self, other: &Mat) -> Mat {
        assert_eq!(self.rows, other.rows, "hstack row mismatch");
        let mut out = Mat::zeros(self.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(i, j, self.get(i, j).clone());
            }
            for j in 0..other.cols {
                out.set(i, self.cols + j, other.get(i, j).clone());
            }
        }
        out
    }

    pub fn vstack(&self, other: &Mat) -> Mat {
        assert_eq!(self.cols, other.cols, "vstack column mismatch");
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        Mat { rows: self.rows + other.rows, cols: self.cols, data }
    }

    pub fn block_diag(&self, other: &Mat) -> Mat {
        let mut out = Mat::zeros(self.rows + other.rows, self.cols + other.cols);
        out.set_block(0, 0, self);
        out.set_block(self.rows, self.cols, other);
        out
    }

    pub fn set_block(&mut self, r0: usize, c0: usize, block: &Mat) {
        for i in 0..block.rows {
            for j in 0..block.cols {
                self.set(r0 + i, c0 + j, block.get(i, j).clone());
            }
        }
    }

    pub fn block(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Mat {
        let mut out = Mat::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                out.set(i, j, self.get(r0 + i, c0 + j).clone());
            }
        }
        out
    }

    pub fn select_cols(&self, idx: &[usize]) -> Mat {
        let cols: Vec<Vector> = idx.iter().map(|&j| self.col(j)).collect();
        Mat::from_cols(self.rows, &cols)
    }

    pub fn select_rows(&self, idx: &[usize]) -> Mat {
        let rows = idx.iter().map(|&i| self.row(i)).collect();
        Mat::from_rows(idx.len(), self.cols, rows)
    }

    /// Reduced row echelon form together with the pivot columns. Among the
    /// candidate pivot rows the sparsest one is used, which keeps fill-in low
    /// on the sparse systems built by the hom solver.
    pub fn rref(&self) -> (Mat, Vec<usize>) {
        let mut a = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..a.cols {
            if r == a.rows {
                break;
            }
            let nnz = |a: &Mat, i: usize| (c..a.cols).filter(|&j| !a.get(i, j).is_zero()).count();
            let Some(p) = (r..a.rows).filter(|&i| !a.get(i, c).is_zero()).min_by_key(|&i| (nnz(&a, i), i)) else {
                continue;
            };
            a.swap_rows(r, p);
            let inv = a.get(r, c).inv().expect("nonzero pivot");
            let support: Vec<usize> = (c..a.cols).filter(|&j| !a.get(r, j).is_zero()).collect();
            if !inv.is_one() {
                for &j in &support {
                    let x = a.get(r, j) * &inv;
                    a.set(r, j, x);
                }
            }
            for i in 0..a.rows {
                if i == r || a.get(i, c).is_zero() {
                    continue;
                }
                let factor = a.get(i, c).clone();
                for &j in &support {
                    let x = a.get(i, j) - &(&factor * a.get(r, j));
                    a.set(i, j, x);
                }
            }
            pivots.push(c);
            r += 1;
        }
        (a, pivots)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    pub fn inverse(&self) -> Option<Mat> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        if n == 0 {
            return Some(Mat::zeros(0, 0));
        }
        let (r, piv) = self.hstack(&Mat::identity(n)).rref();
        if piv.len() < n || piv[n - 1] != n - 1 {
            return None;
        }
        Some(r.block(0, n, n, n))
    }

    pub fn kernel(&self) -> Subspace {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let vecs = free.iter().map(|&fc| {
            let mut v = vec![Scalar::zero(); self.cols];
            v[fc] = Scalar::one();
            for (k, &pc) in pivots.iter().enumerate() {
                v[pc] = -r.get(k, fc);
            }
            v
        });
        Subspace::span(self.cols, vecs)
    }

    pub fn image(&self) -> Subspace {
        Subspace::span(self.rows, self.col_vectors())
    }

    /// One solution of `self * x = y`, free variables set to zero.
    pub fn solve(&self, y: &[Scalar]) -> Option<Vector> {
        assert_eq!(y.len(), self.rows, "solve: rhs length");
        let (r, pivots) = self.hstack(&Mat::column(y)).rref();
        if pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![Scalar::zero(); self.cols];
        for (k, &pc) in pivots.iter().enumerate() {
            x[pc] = r.get(k, self.cols).clone();
        }
        Some(x)
    }

    /// Column-by-column `solve`: returns `X` with `self * X = rhs`.
    pub fn solve_mat(&self, rhs: &Mat) -> Option<Mat> {
        assert_eq!(rhs.rows, self.rows, "solve_mat: rhs rows");
        let (r, pivots) = self.hstack(rhs).rref();
        if pivots.iter().any(|&p| p >= self.cols) {
            return None;
        }
        let mut x = Mat::zeros(self.cols, rhs.cols);
        for (k, &pc) in pivots.iter().enumerate() {
            for j in 0..rhs.cols {
                x.set(pc, j, r.get(k, self.cols + j).clone());
            }
        }
        Some(x)
    }

    /// The `Q`-linear map `Q^cols -> Q^(2 rows)` obtained by splitting each
    /// entry into real and imaginary parts.
    pub fn realify(&self) -> Mat {
        let re = self.map(|x| Scalar::from_rational(x.re()));
        let im = self.map(|x| Scalar::from_rational(x.im()));
        re.vstack(&im)
    }

    /// Rank of the columns as vectors over `Q`.
    pub fn rational_rank(&self) -> usize {
        self.realify().rank()
    }
}

pub fn dot(a: &[Scalar], b: &[Scalar]) -> Scalar {
    assert_eq!(a.len(), b.len());
    let mut acc = Scalar::zero();
    for (x, y) in a.iter().zip(b) {
        if !x.is_zero() && !y.is_zero() {
            acc += &(x * y);
        }
    }
    acc
}

/// A linear subspace of `K^ambient` in canonical reduced echelon form.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Subspace {
    ambient: usize,
    basis: Vec<Vector>,
    pivots: Vec<usize>,
}

impl fmt::Debug for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Subspace(K^{}; {:?})", self.ambient, self.basis)
    }
}

impl Subspace {
    pub fn span<I: IntoIterator<Item = Vector>>(ambient: usize, vectors: I) -> Self {
        let rows: Vec<Vector> = vectors.into_iter().collect();
        for r in &rows {
            assert_eq!(r.len(), ambient, "vector length mismatch");
        }
        let n = rows.len();
        let (r, pivots) = Mat::from_rows(n, ambient, rows).rref();
        let basis = (0..pivots.len()).map(|k| r.row(k)).collect();
        Subspace { ambient, basis, pivots }
    }

    pub fn zero(ambient: usize) -> Self {
        Subspace { ambient, basis: Vec::new(), pivots: Vec::new() }
    }

    pub fn full(ambient: usize) -> Self {
        let id = Mat::identity(ambient);
        Subspace { ambient, basis: id.row_vectors(), pivots: (0..ambient).collect() }
    }

    pub fn coordinate(ambient: usize, idx: &[usize]) -> Self {
        let id = Mat::identity(ambient);
        Subspace::span(ambient, idx.iter().map(|&i| id.row(i)))
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn is_zero(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.dim() == self.ambient
    }

    pub fn basis(&self) -> &[Vector] {
        &self.basis
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Basis vectors as the columns of an `ambient x dim` matrix.
    pub fn basis_matrix(&self) -> Mat {
        Mat::from_cols(self.ambient, &self.basis)
    }

    pub fn is_rational(&self) -> bool {
        self.basis.iter().flatten().all(Scalar::is_rational)
    }

    /// Coefficients of `v` in the canonical basis, if `v` lies in the space.
    pub fn coordinates(&self, v: &[Scalar]) -> Option<Vector> {
        assert_eq!(v.len(), self.ambient);
        let c: Vector = self.pivots.iter().map(|&p| v[p].clone()).collect();
        let mut rest = v.to_vec();
        for (coef, b) in c.iter().zip(&self.basis) {
            if coef.is_zero() {
                continue;
            }
            for (x, y) in rest.iter_mut().zip(b) {
                *x -= &(coef * y);
            }
        }
        rest.iter().all(Scalar::is_zero).then_some(c)
    }

    /// Coordinates of each column of `m` (which must lie in the space).
    pub fn coordinates_mat(&self, m: &Mat) -> Option<Mat> {
        let cols = m.col_vectors().iter().map(|c| self.coordinates(c)).collect::<Option<Vec<_>>>()?;
        Some(Mat::from_cols(self.dim(), &cols))
    }

    pub fn contains(&self, v: &[Scalar]) -> bool {
        self.coordinates(v).is_some()
    }

    pub fn contains_space(&self, other: &Subspace) -> bool {
        assert_eq!(self.ambient, other.ambient, "ambient mismatch");
        other.basis.iter().all(|b| self.contains(b))
    }

    pub fn sum(&self, other: &Subspace) -> Subspace {
        assert_eq!(self.ambient, other.ambient, "ambient mismatch");
        Subspace::span(self.ambient, self.basis.iter().chain(&other.basis).cloned())
    }

    pub fn intersect(&self, other: &Subspace) -> Subspace {
        assert_eq!(self.ambient, other.ambient, "ambient mismatch");
        let a = self.basis_matrix();
        let coeffs = Quotient::new(other.clone()).projection().mul(&a).kernel();
        Subspace::span(self.ambient, coeffs.basis.iter().map(|c| a.mul_vec(c)))
    }

    /// `m(self)` for a map `m : K^ambient -> K^rows(m)`.
    pub fn image_under(&self, m: &Mat) -> Subspace {
        assert_eq!(m.cols(), self.ambient, "image_under: shape");
        Subspace::span(m.rows(), self.basis.iter().map(|b| m.mul_vec(b)))
    }

    /// `{x : m x in self}`.
    pub fn preimage(&self, m: &Mat) -> Subspace {
        assert_eq!(m.rows(), self.ambient, "preimage: shape");
        Quotient::new(self.clone()).projection().mul(m).kernel()
    }

    pub fn conj(&self) -> Subspace {
        Subspace::span(self.ambient, self.basis.iter().map(|b| b.iter().map(Scalar::conj).collect()))
    }

    /// Functionals vanishing on the space, in dual coordinates.
    pub fn annihilator(&self) -> Subspace {
        Mat::from_rows(self.dim(), self.ambient, self.basis.clone()).kernel()
    }

    /// Complement spanned by the standard vectors at non-pivot indices.
    pub fn complement(&self) -> Subspace {
        Subspace::coordinate(self.ambient, &self.non_pivots())
    }

    pub fn non_pivots(&self) -> Vec<usize> {
        (0..self.ambient).filter(|c| !self.pivots.contains(c)).collect()
    }

    /// Vectors of `outer`'s canonical basis, taken greedily in order, that
    /// extend `self` to a basis of `outer`.
    pub fn complement_within(&self, outer: &Subspace) -> Result<Vec<Vector>, crate::Error> {
        if self.ambient != outer.ambient {
            return Err(crate::Error::AmbientMismatch);
        }
        if !outer.contains_space(self) {
            return Err(crate::Error::NotContained);
        }
        let mut acc = self.clone();
        let mut out = Vec::new();
        for b in &outer.basis {
            if !acc.contains(b) {
                acc = Subspace::span(self.ambient, acc.basis.iter().chain([b]).cloned());
                out.push(b.clone());
            }
        }
        Ok(out)
    }

    /// Rational points, when the space is given over `K`: the largest
    /// `Q`-subspace `S` with `S (x) K` contained in the space.
    pub fn rational_part(&self) -> Subspace {
        let p = Quotient::new(self.clone()).projection();
        p.realify().kernel()
    }
}

/// `K^n / sub`, coordinatised by the standard vectors at the non-pivot
/// indices of `sub`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Quotient {
    sub: Subspace,
    comp: Vec<usize>,
}

impl Quotient {
    pub fn new(sub: Subspace) -> Self {
        let comp = sub.non_pivots();
        Quotient { sub, comp }
    }

    pub fn sub(&self) -> &Subspace {
        &self.sub
    }

    pub fn dim(&self) -> usize {
        self.comp.len()
    }

    pub fn ambient(&self) -> usize {
        self.sub.ambient
    }

    /// `dim x ambient` matrix sending a vector to its quotient coordinates.
    pub fn projection(&self) -> Mat {
        let n = self.sub.ambient;
        let mut p = Mat::zeros(self.comp.len(), n);
        for (row, &j) in self.comp.iter().enumerate() {
            p.set(row, j, Scalar::one());
            for (b, &pc) in self.sub.basis.iter().zip(&self.sub.pivots) {
                if !b[j].is_zero() {
                    p.set(row, pc, -&b[j]);
                }
            }
        }
        p
    }

    /// `ambient x dim` matrix of the chosen section (standard complement).
    pub fn lift(&self) -> Mat {
        Mat::identity(self.sub.ambient).select_cols(&self.comp)
    }

    /// Image of a subspace of the ambient space in quotient coordinates.
    pub fn image_of(&self, s: &Subspace) -> Subspace {
        s.image_under(&self.projection())
    }
}

/// Convenience for tests and literals: a column vector of Gaussian integers.
pub fn gvec(entries: &[(i64, i64)]) -> Vector {
    entries.iter().map(|&(a, b)| Scalar::from_ints(a, b)).collect()
}

pub fn rational_vec(entries: &[BigRational]) -> Vector {
    entries.iter().cloned().map(Scalar::from_rational).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kernel_examples() {
        assert!(Mat::identity(2).kernel().is_zero());
        assert!(Mat::zeros(2, 2).kernel().is_full());
        // [[1, i]] has kernel spanned by (-i, 1); check by multiplying
        let m = Mat::from_rows(1, 2, vec![gvec(&[(1, 0), (0, 1)])]);
        let k = m.kernel();
        assert_eq!(k.dim(), 1);
        let v = gvec(&[(0, -1), (1, 0)]);
        assert!(m.mul_vec(&v).iter().all(Scalar::is_zero));
        assert!(k.contains(&v));
    }

    #[test]
    fn subspace_examples() {
        let e1 = Subspace::span(2, [gvec(&[(1, 0), (0, 0)])]);
        let e2 = Subspace::span(2, [gvec(&[(0, 0), (1, 0)])]);
        let d = Subspace::span(2, [gvec(&[(1, 0), (1, 0)])]);
        assert!(e1.intersect(&e2).is_zero());
        assert!(e1.sum(&d).is_full());
        let a = Subspace::span(2, [gvec(&[(1, 0), (0, 1)])]);
        let c = a.complement();
        assert_eq!(c, e2);
        assert!(a.sum(&c).is_full() && a.intersect(&c).is_zero());
    }

    #[test]
    fn complement_within_errors() {
        let e1 = Subspace::coordinate(2, &[0]);
        let e2 = Subspace::coordinate(2, &[1]);
        assert!(matches!(e1.complement_within(&e2), Err(crate::Error::NotContained)));
        assert!(matches!(e1.complement_within(&Subspace::full(3)), Err(crate::Error::AmbientMismatch)));
        let ext = e1.complement_within(&Subspace::full(2)).unwrap();
        assert_eq!(ext, vec![gvec(&[(0, 0), (1, 0)])]);
    }

    #[test]
    fn solve_examples() {
        let y = gvec(&[(2, 1), (-3, 0)]);
        assert_eq!(Mat::identity(2).solve(&y), Some(y.clone()));
        assert_eq!(Mat::zeros(2, 2).solve(&y), None);
        let m = Mat::from_i64(1, 2, &[1, 1]);
        let x = m.solve(&[Scalar::int(3)]).unwrap();
        assert_eq!(x, vec![Scalar::int(3), Scalar::int(0)]);
        assert_eq!(m.mul_vec(&x), vec![Scalar::int(3)]);
    }

    #[test]
    fn quotient_projection_and_lift() {
        let s = Subspace::span(3, [gvec(&[(1, 0), (2, 0), (0, 1)])]);
        let q = Quotient::new(s.clone());
        let p = q.projection();
        assert!(p.mul(&s.basis_matrix()).is_zero());
        assert!(p.mul(&q.lift()).is_identity());
    }

    #[test]
    fn rational_part_of_complex_line() {
        // span{(1, i)} contains no nonzero rational vector
        let s = Subspace::span(2, [gvec(&[(1, 0), (0, 1)])]);
        assert!(s.rational_part().is_zero());
        let r = Subspace::span(2, [gvec(&[(2, 0), (1, 0)])]);
        assert_eq!(r.rational_part(), r);
    }
}
