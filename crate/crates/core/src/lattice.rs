//! Finitely generated abelian groups and integer matrix normal forms.
//!
//! A group is always held in the canonical presentation
//! `Z^rank (+) Z/d_1 (+) ... (+) Z/d_k` with `1 < d_1 | d_2 | ... | d_k`;
//! generators are ordered free-first. Homomorphisms are integer matrices on
//! these generators, with torsion coordinates reduced into `[0, d_i)`.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::linalg::{Mat, Subspace};
use crate::scalar::Scalar;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMat {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl fmt::Debug for IntMat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IntMat{}x{}", self.rows, self.cols)?;
        f.debug_list()
            .entries((0..self.rows).map(|i| self.row(i).iter().map(|x| x.to_string()).collect::<Vec<_>>()))
            .finish()
    }
}

impl IntMat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMat { rows, cols, data: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = IntMat::zeros(n, n);
        for i in 0..n {
            m.set(i, i, BigInt::one());
        }
        m
    }

    pub fn from_i64(rows: usize, cols: usize, entries: &[i64]) -> Self {
        assert_eq!(entries.len(), rows * cols);
        IntMat { rows, cols, data: entries.iter().map(|&x| BigInt::from(x)).collect() }
    }

    pub fn from_rows(rows: usize, cols: usize, entries: Vec<Vec<BigInt>>) -> Self {
        assert_eq!(entries.len(), rows);
        let mut data = Vec::with_capacity(rows * cols);
        for r in entries {
            assert_eq!(r.len(), cols, "ragged integer matrix");
            data.extend(r);
        }
        IntMat { rows, cols, data }
    }

    pub fn from_cols(rows: usize, cols: &[Vec<BigInt>]) -> Self {
        let mut m = IntMat::zeros(rows, cols.len());
        for (j, c) in cols.iter().enumerate() {
            assert_eq!(c.len(), rows);
            for (i, x) in c.iter().enumerate() {
                m.set(i, j, x.clone());
            }
        }
        m
    }

    /// Exact conversion from a matrix whose entries are all integers.
    pub fn from_mat(m: &Mat) -> Option<Self> {
        let data = m.entries().map(Scalar::to_integer).collect::<Option<Vec<_>>>()?;
        Some(IntMat { rows: m.rows(), cols: m.cols(), data })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, x: BigInt) {
        self.data[i * self.cols + j] = x;
    }

    pub fn row(&self, i: usize) -> Vec<BigInt> {
        self.data[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn col(&self, j: usize) -> Vec<BigInt> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn col_vectors(&self) -> Vec<Vec<BigInt>> {
        (0..self.cols).map(|j| self.col(j)).collect()
    }

    pub fn row_vectors(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows).map(|i| self.row(i)).collect()
    }

    pub fn to_mat(&self) -> Mat {
        let rows = (0..self.rows).map(|i| self.row(i).iter().map(Scalar::from_bigint).collect()).collect();
        Mat::from_rows(self.rows, self.cols, rows)
    }

    pub fn transpose(&self) -> IntMat {
        let mut t = IntMat::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn mul(&self, other: &IntMat) -> IntMat {
        assert_eq!(self.cols, other.rows, "integer mul shape");
        let mut out = IntMat::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let idx = i * out.cols + j;
                    out.data[idx] += a * other.get(k, j);
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(self.cols, v.len());
        (0..self.rows).map(|i| (0..self.cols).map(|k| self.get(i, k) * &v[k]).sum()).collect()
    }

    pub fn add(&self, other: &IntMat) -> IntMat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect();
        IntMat { rows: self.rows, cols: self.cols, data }
    }

    pub fn scale(&self, c: &BigInt) -> IntMat {
        IntMat { rows: self.rows, cols: self.cols, data: self.data.iter().map(|x| x * c).collect() }
    }

    pub fn hstack(&self, other: &IntMat) -> IntMat {
        assert_eq!(self.rows, other.rows);
        let mut cols = self.col_vectors();
        cols.extend(other.col_vectors());
        IntMat::from_cols(self.rows, &cols)
    }

    pub fn block_diag(&self, other: &IntMat) -> IntMat {
        let mut out = IntMat::zeros(self.rows + other.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(i, j, self.get(i, j).clone());
            }
        }
        for i in 0..other.rows {
            for j in 0..other.cols {
                out.set(self.rows + i, self.cols + j, other.get(i, j).clone());
            }
        }
        out
    }

    pub fn block(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> IntMat {
        let mut out = IntMat::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                out.set(i, j, self.get(r0 + i, c0 + j).clone());
            }
        }
        out
    }

    pub fn select_cols(&self, idx: &[usize]) -> IntMat {
        let cols: Vec<_> = idx.iter().map(|&j| self.col(j)).collect();
        IntMat::from_cols(self.rows, &cols)
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// row[dst] += c * row[src]
    fn add_row(&mut self, dst: usize, src: usize, c: &BigInt) {
        for j in 0..self.cols {
            let x = self.get(src, j) * c;
            self.data[dst * self.cols + j] += x;
        }
    }

    /// col[dst] += c * col[src]
    fn add_col(&mut self, dst: usize, src: usize, c: &BigInt) {
        for i in 0..self.rows {
            let x = self.get(i, src) * c;
            self.data[i * self.cols + dst] += x;
        }
    }

    fn negate_row(&mut self, r: usize) {
        for j in 0..self.cols {
            let idx = r * self.cols + j;
            self.data[idx] = -self.data[idx].clone();
        }
    }

    /// Inverse of a unimodular matrix.
    pub fn unimodular_inverse(&self) -> Option<IntMat> {
        let inv = self.to_mat().inverse()?;
        IntMat::from_mat(&inv)
    }

    pub fn rank(&self) -> usize {
        self.to_mat().rank()
    }
}

/// Smith normal form `U * m * V = D` with `U`, `V` unimodular and the
/// diagonal of `D` a nonnegative divisibility chain (zeros last).
#[derive(Clone, Debug)]
pub struct Smith {
    pub u: IntMat,
    pub d: IntMat,
    pub v: IntMat,
}

impl Smith {
    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.d.rows.min(self.d.cols)).map(|i| self.d.get(i, i).clone()).collect()
    }

    pub fn rank(&self) -> usize {
        self.diagonal().iter().filter(|x| !x.is_zero()).count()
    }
}

pub fn snf(m: &IntMat) -> Smith {
    let (rows, cols) = (m.rows, m.cols);
    let mut a = m.clone();
    let mut u = IntMat::identity(rows);
    let mut v = IntMat::identity(cols);
    for t in 0..rows.min(cols) {
        loop {
            // smallest nonzero entry in the trailing block
            let mut best: Option<(usize, usize)> = None;
            for i in t..rows {
                for j in t..cols {
                    let x = a.get(i, j);
                    if x.is_zero() {
                        continue;
                    }
                    if best.is_none_or(|(bi, bj)| x.abs() < a.get(bi, bj).abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else {
                return finish(a, u, v);
            };
            if pi != t {
                a.swap_rows(pi, t);
                u.swap_rows(pi, t);
            }
            if pj != t {
                a.swap_cols(pj, t);
                v.swap_cols(pj, t);
            }
            let mut dirty = false;
            for i in t + 1..rows {
                if a.get(i, t).is_zero() {
                    continue;
                }
                let q = -a.get(i, t).div_floor(a.get(t, t));
                a.add_row(i, t, &q);
                u.add_row(i, t, &q);
                dirty |= !a.get(i, t).is_zero();
            }
            for j in t + 1..cols {
                if a.get(t, j).is_zero() {
                    continue;
                }
                let q = -a.get(t, j).div_floor(a.get(t, t));
                a.add_col(j, t, &q);
                v.add_col(j, t, &q);
                dirty |= !a.get(t, j).is_zero();
            }
            if dirty {
                continue;
            }
            // divisibility: pull a non-multiple into the pivot row
            let pivot = a.get(t, t).clone();
            let bad = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| !a.get(i, j).is_multiple_of(&pivot)));
            match bad {
                Some(i) => {
                    a.add_row(t, i, &BigInt::one());
                    u.add_row(t, i, &BigInt::one());
                }
                None => break,
            }
        }
        if a.get(t, t).is_negative() {
            a.negate_row(t);
            u.negate_row(t);
        }
    }
    finish(a, u, v)
}

fn finish(d: IntMat, u: IntMat, v: IntMat) -> Smith {
    Smith { u, d, v }
}

/// Canonical Hermite basis of the lattice spanned by the columns of `gens`:
/// returned as columns, in echelon form with positive pivots and reduced
/// entries above each pivot.
pub fn hermite_basis(gens: &IntMat) -> IntMat {
    let n = gens.rows;
    let mut a = gens.transpose(); // rows = generators
    let mut r = 0;
    for c in 0..n {
        if r == a.rows {
            break;
        }
        loop {
            let mut best: Option<usize> = None;
            for i in r..a.rows {
                if !a.get(i, c).is_zero() && best.is_none_or(|b| a.get(i, c).abs() < a.get(b, c).abs()) {
                    best = Some(i);
                }
            }
            let Some(b) = best else { break };
            a.swap_rows(b, r);
            let mut done = true;
            for i in r + 1..a.rows {
                if a.get(i, c).is_zero() {
                    continue;
                }
                let q = -a.get(i, c).div_floor(a.get(r, c));
                a.add_row(i, r, &q);
                done &= a.get(i, c).is_zero();
            }
            if done {
                break;
            }
        }
        if a.get(r, c).is_zero() {
            continue;
        }
        if a.get(r, c).is_negative() {
            a.negate_row(r);
        }
        for k in 0..r {
            let q = -a.get(k, c).div_floor(a.get(r, c));
            a.add_row(k, r, &q);
        }
        r += 1;
    }
    let rows: Vec<Vec<BigInt>> = (0..r).map(|i| a.row(i)).collect();
    IntMat::from_cols(n, &rows)
}

/// Integer kernel of `m` as the columns of a basis matrix.
pub fn integer_kernel(m: &IntMat) -> IntMat {
    let s = snf(m);
    let k = s.rank();
    let idx: Vec<usize> = (k..m.cols).collect();
    hermite_basis(&s.v.select_cols(&idx))
}

/// Some integer solution of `m x = y`.
pub fn int_solve(m: &IntMat, y: &[BigInt]) -> Option<Vec<BigInt>> {
    assert_eq!(y.len(), m.rows);
    let s = snf(m);
    let uy = s.u.mul_vec(y);
    let diag = s.diagonal();
    let mut z = vec![BigInt::zero(); m.cols];
    for (i, val) in uy.iter().enumerate() {
        let d = diag.get(i).cloned().unwrap_or_else(BigInt::zero);
        if d.is_zero() {
            if !val.is_zero() {
                return None;
            }
        } else {
            if !val.is_multiple_of(&d) {
                return None;
            }
            z[i] = val / &d;
        }
    }
    Some(s.v.mul_vec(&z))
}

/// Column-wise `int_solve`.
pub fn int_solve_mat(m: &IntMat, rhs: &IntMat) -> Option<IntMat> {
    let cols = rhs.col_vectors().iter().map(|c| int_solve(m, c)).collect::<Option<Vec<_>>>()?;
    Some(IntMat::from_cols(m.cols, &cols))
}

/// Same lattice spanned by both column sets.
pub fn same_lattice(a: &IntMat, b: &IntMat) -> bool {
    hermite_basis(a) == hermite_basis(b)
}

/// `S cap Z^n` for a rational subspace `S` of `Q^n`, as a basis matrix.
pub fn lattice_points(s: &Subspace) -> IntMat {
    assert!(s.is_rational(), "lattice_points needs a rational subspace");
    let n = s.ambient();
    let cols: Vec<Vec<BigInt>> = s
        .basis()
        .iter()
        .map(|v| {
            let den = v.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.re().denom()));
            v.iter().map(|x| (x.re() * &den).to_integer()).collect()
        })
        .collect();
    saturate_columns(&IntMat::from_cols(n, &cols))
}

fn saturate_columns(m: &IntMat) -> IntMat {
    let s = snf(m);
    let k = s.rank();
    let uinv = s.u.unimodular_inverse().expect("unimodular");
    hermite_basis(&uinv.select_cols(&(0..k).collect::<Vec<_>>()))
}

/// A finitely generated abelian group `Z^rank (+) (+)_i Z/torsion_i`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FgAbGroup {
    rank: usize,
    torsion: Vec<BigInt>,
}

impl FgAbGroup {
    pub fn new(rank: usize, torsion: Vec<BigInt>) -> Result<Self> {
        for (k, d) in torsion.iter().enumerate() {
            if *d < BigInt::from(2) {
                return Err(Error::IllDefinedOnTorsion(format!("invariant factor {d} < 2")));
            }
            if k > 0 && !d.is_multiple_of(&torsion[k - 1]) {
                return Err(Error::IllDefinedOnTorsion("invariant factors must divide in sequence".into()));
            }
        }
        Ok(FgAbGroup { rank, torsion })
    }

    pub fn free(rank: usize) -> Self {
        FgAbGroup { rank, torsion: Vec::new() }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn torsion(&self) -> &[BigInt] {
        &self.torsion
    }

    pub fn is_free(&self) -> bool {
        self.torsion.is_empty()
    }

    pub fn is_trivial(&self) -> bool {
        self.rank == 0 && self.torsion.is_empty()
    }

    pub fn num_gens(&self) -> usize {
        self.rank + self.torsion.len()
    }

    /// Order of generator `k`, zero for free generators.
    pub fn order(&self, k: usize) -> BigInt {
        if k < self.rank {
            BigInt::zero()
        } else {
            self.torsion[k - self.rank].clone()
        }
    }

    /// Relation lattice inside `Z^num_gens`.
    pub fn relations(&self) -> IntMat {
        let n = self.num_gens();
        let mut r = IntMat::zeros(n, self.torsion.len());
        for (k, d) in self.torsion.iter().enumerate() {
            r.set(self.rank + k, k, d.clone());
        }
        r
    }

    /// Reduce torsion coordinates of each column into `[0, d)`.
    pub fn reduce(&self, m: &IntMat) -> IntMat {
        assert_eq!(m.rows, self.num_gens());
        let mut out = m.clone();
        for (k, d) in self.torsion.iter().enumerate() {
            for j in 0..m.cols {
                let x = out.get(self.rank + k, j).mod_floor(d);
                out.set(self.rank + k, j, x);
            }
        }
        out
    }

    /// Direct sum, re-presented canonically.
    pub fn direct_sum(&self, other: &FgAbGroup) -> (FgAbGroup, IntMat, IntMat) {
        let n = self.num_gens() + other.num_gens();
        let rels = self.relations().block_diag(&other.relations());
        let sq = SubQuotient::new(&IntMat::identity(n), &rels);
        let left = sq.coords_mat(&IntMat::identity(n).select_cols(&(0..self.num_gens()).collect::<Vec<_>>()));
        let right = sq.coords_mat(&IntMat::identity(n).select_cols(&(self.num_gens()..n).collect::<Vec<_>>()));
        (sq.group.clone(), left.expect("in group"), right.expect("in group"))
    }
}

/// `G / R` for lattices `R <= G <= Z^n`, presented canonically.
#[derive(Clone, Debug)]
pub struct SubQuotient {
    pub group: FgAbGroup,
    basis: IntMat,
    /// rows of `U` giving coordinates w.r.t. the new generators
    coord_rows: IntMat,
    /// the new generators as vectors of `Z^n`
    pub gens: IntMat,
}

impl SubQuotient {
    pub fn new(gens: &IntMat, rels: &IntMat) -> Self {
        let n = gens.rows;
        let basis = hermite_basis(gens);
        let p = basis.cols;
        let x = int_solve_mat(&basis, rels).expect("relations must lie in the generated lattice");
        let s = snf(&x);
        let diag = s.diagonal();
        let uinv = s.u.unimodular_inverse().expect("unimodular");
        let mut free = Vec::new();
        let mut tors = Vec::new();
        for i in 0..p {
            let d = diag.get(i).cloned().unwrap_or_else(BigInt::zero);
            if d.is_zero() {
                free.push(i);
            } else if !d.is_one() {
                tors.push((i, d));
            }
        }
        let order: Vec<usize> = free.iter().copied().chain(tors.iter().map(|(i, _)| *i)).collect();
        let group = FgAbGroup { rank: free.len(), torsion: tors.into_iter().map(|(_, d)| d).collect() };
        let coord_rows = IntMat::from_rows(order.len(), p, order.iter().map(|&i| s.u.row(i)).collect());
        let gens_out = basis.mul(&uinv.select_cols(&order));
        let _ = n;
        SubQuotient { group, basis, coord_rows, gens: gens_out }
    }

    /// Coordinates of a vector of `G` in the canonical generators.
    pub fn coords(&self, y: &[BigInt]) -> Option<Vec<BigInt>> {
        let c = int_solve(&self.basis, y)?;
        let mut out = self.coord_rows.mul_vec(&c);
        for (k, d) in self.group.torsion.iter().enumerate() {
            let idx = self.group.rank + k;
            out[idx] = out[idx].mod_floor(d);
        }
        Some(out)
    }

    pub fn coords_mat(&self, m: &IntMat) -> Option<IntMat> {
        let cols = m.col_vectors().iter().map(|c| self.coords(c)).collect::<Option<Vec<_>>>()?;
        Some(IntMat::from_cols(self.group.num_gens(), &cols))
    }
}

/// A homomorphism between canonically presented groups.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LatticeMap {
    source: FgAbGroup,
    target: FgAbGroup,
    matrix: IntMat,
}

impl LatticeMap {
    pub fn new(source: FgAbGroup, target: FgAbGroup, matrix: IntMat) -> Result<Self> {
        if matrix.rows != target.num_gens() || matrix.cols != source.num_gens() {
            return Err(Error::Shape(format!(
                "lattice map {}x{} between groups with {} and {} generators",
                matrix.rows,
                matrix.cols,
                source.num_gens(),
                target.num_gens()
            )));
        }
        let matrix = target.reduce(&matrix);
        for j in source.rank..source.num_gens() {
            let d = source.order(j);
            let image: Vec<BigInt> = matrix.col(j).iter().map(|x| x * &d).collect();
            for (i, x) in image.iter().enumerate() {
                let ok = if i < target.rank { x.is_zero() } else { x.is_multiple_of(&target.order(i)) };
                if !ok {
                    return Err(Error::IllDefinedOnTorsion(format!("generator {j} of order {d}")));
                }
            }
        }
        Ok(LatticeMap { source, target, matrix })
    }

    pub fn identity(g: &FgAbGroup) -> Self {
        LatticeMap { source: g.clone(), target: g.clone(), matrix: IntMat::identity(g.num_gens()) }
    }

    pub fn zero(source: &FgAbGroup, target: &FgAbGroup) -> Self {
        LatticeMap {
            source: source.clone(),
            target: target.clone(),
            matrix: IntMat::zeros(target.num_gens(), source.num_gens()),
        }
    }

    pub fn source(&self) -> &FgAbGroup {
        &self.source
    }

    pub fn target(&self) -> &FgAbGroup {
        &self.target
    }

    pub fn matrix(&self) -> &IntMat {
        &self.matrix
    }

    /// `self` after `first`.
    pub fn compose(&self, first: &LatticeMap) -> Result<LatticeMap> {
        if first.target != self.source {
            return Err(Error::NotComposable("lattice groups differ".into()));
        }
        LatticeMap::new(first.source.clone(), self.target.clone(), self.matrix.mul(&first.matrix))
    }

    pub fn is_zero(&self) -> bool {
        self.matrix.is_zero()
    }

    /// Rational extension `H_Q -> H'_Q` (the free-by-free block).
    pub fn rational_matrix(&self) -> Mat {
        self.matrix.block(0, 0, self.target.rank, self.source.rank).to_mat()
    }

    /// Sublattice of `Z^{target gens}` that represents the image (relations included).
    fn image_lattice(&self) -> IntMat {
        self.matrix.hstack(&self.target.relations())
    }

    /// Sublattice of `Z^{source gens}` representing the kernel (relations included).
    fn kernel_lattice(&self) -> IntMat {
        let a = self.matrix.hstack(&self.target.relations().scale(&-BigInt::one()));
        let k = integer_kernel(&a);
        let ns = self.source.num_gens();
        let proj = k.block(0, 0, ns, k.cols);
        proj.hstack(&self.source.relations())
    }

    pub fn kernel(&self) -> (FgAbGroup, LatticeMap) {
        let sq = SubQuotient::new(&self.kernel_lattice(), &self.source.relations());
        let emb = self.source.reduce(&sq.gens);
        let g = sq.group.clone();
        (g.clone(), LatticeMap { source: g, target: self.source.clone(), matrix: emb })
    }

    pub fn image(&self) -> (FgAbGroup, LatticeMap) {
        let sq = SubQuotient::new(&self.image_lattice(), &self.target.relations());
        let emb = self.target.reduce(&sq.gens);
        let g = sq.group.clone();
        (g.clone(), LatticeMap { source: g, target: self.target.clone(), matrix: emb })
    }

    /// Cokernel with its projection and a set-theoretic section of generators.
    pub fn cokernel(&self) -> (FgAbGroup, LatticeMap, IntMat) {
        let n = self.target.num_gens();
        let sq = SubQuotient::new(&IntMat::identity(n), &self.image_lattice());
        let proj = sq.coords_mat(&IntMat::identity(n)).expect("full lattice");
        let g = sq.group.clone();
        (g.clone(), LatticeMap { source: self.target.clone(), target: g, matrix: proj }, sq.gens.clone())
    }

    /// Solve `self * x = y` with `x` in the source group.
    pub fn preimage_of(&self, y: &[BigInt]) -> Option<Vec<BigInt>> {
        let a = self.matrix.hstack(&self.target.relations());
        let x = int_solve(&a, y)?;
        let xs = IntMat::from_cols(self.source.num_gens(), &[x[..self.source.num_gens()].to_vec()]);
        Some(self.source.reduce(&xs).col(0))
    }

    /// Does `self` factor as `mono * h`? Returns `h` if so.
    pub fn factor_through(&self, mono: &LatticeMap) -> Option<LatticeMap> {
        if mono.target != self.target {
            return None;
        }
        let cols = self.matrix.col_vectors().iter().map(|c| mono.preimage_of(c)).collect::<Option<Vec<_>>>()?;
        let h = IntMat::from_cols(mono.source.num_gens(), &cols);
        LatticeMap::new(self.source.clone(), mono.source.clone(), h).ok()
    }

    /// `im(self) == ker(next)` as subgroups of the middle group.
    pub fn exact_before(&self, next: &LatticeMap) -> bool {
        same_lattice(&self.image_lattice(), &next.kernel_lattice())
    }

    pub fn is_injective(&self) -> bool {
        self.kernel().0.is_trivial()
    }

    pub fn is_surjective(&self) -> bool {
        self.cokernel().0.is_trivial()
    }

    /// Dual map `Hom(target, Z) -> Hom(source, Z)`; free groups only.
    pub fn dual(&self) -> Result<LatticeMap> {
        if !self.source.is_free() || !self.target.is_free() {
            return Err(Error::TorsionInput);
        }
        Ok(LatticeMap { source: self.target.clone(), target: self.source.clone(), matrix: self.matrix.transpose() })
    }
}

/// Smallest saturated sublattice of a free `Z^n` containing the image of an
/// injective embedding.
pub fn saturate(emb: &LatticeMap) -> Result<LatticeMap> {
    if !emb.source.is_free() || !emb.target.is_free() {
        return Err(Error::TorsionInput);
    }
    if emb.matrix.rank() != emb.matrix.cols {
        return Err(Error::NotInjective);
    }
    let b = saturate_columns(&emb.matrix);
    Ok(LatticeMap { source: FgAbGroup::free(b.cols), target: emb.target.clone(), matrix: b })
}

/// Extend a basis `b` of a saturated sublattice of `Z^n` to a basis of
/// `Z^n`; returns the extra columns.
pub fn complete_basis(b: &IntMat) -> IntMat {
    let s = snf(b);
    let k = s.rank();
    let uinv = s.u.unimodular_inverse().expect("unimodular");
    uinv.select_cols(&(k..b.rows).collect::<Vec<_>>())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    fn check_smith(m: &IntMat) -> Smith {
        let s = snf(m);
        assert_eq!(s.u.mul(m).mul(&s.v), s.d);
        assert!(s.u.unimodular_inverse().is_some());
        assert!(s.v.unimodular_inverse().is_some());
        let diag = s.diagonal();
        for w in diag.windows(2) {
            if !w[1].is_zero() {
                assert!(w[1].is_multiple_of(&w[0]));
            }
        }
        s
    }

    #[test]
    fn smith_examples() {
        let s = check_smith(&IntMat::identity(3));
        assert_eq!(s.d, IntMat::identity(3));
        let s = check_smith(&IntMat::from_i64(2, 2, &[2, 0, 0, 3]));
        assert_eq!(s.diagonal(), big(&[1, 6]));
        let s = check_smith(&IntMat::zeros(2, 3));
        assert!(s.d.is_zero());
    }

    #[test]
    fn kernel_image_cokernel_examples() {
        let z = FgAbGroup::free(1);
        let two = LatticeMap::new(z.clone(), z.clone(), IntMat::from_i64(1, 1, &[2])).unwrap();
        assert!(two.kernel().0.is_trivial());
        assert_eq!(two.cokernel().0, FgAbGroup::new(0, big(&[2])).unwrap());

        let z2 = FgAbGroup::free(2);
        let pr = LatticeMap::new(z2.clone(), z.clone(), IntMat::from_i64(1, 2, &[1, 0])).unwrap();
        let (k, emb) = pr.kernel();
        assert_eq!(k, FgAbGroup::free(1));
        assert_eq!(emb.matrix().col(0), big(&[0, 1]));
        assert!(pr.cokernel().0.is_trivial());
    }

    #[test]
    fn cokernel_against_enumeration() {
        // Z^2 / im [[2,1],[0,2]]: enumerate residues of representatives in
        // [0,4)^2 modulo the image lattice; the group has order |det| = 4.
        let z2 = FgAbGroup::free(2);
        let m = IntMat::from_i64(2, 2, &[2, 1, 0, 2]);
        let f = LatticeMap::new(z2.clone(), z2, m.clone()).unwrap();
        let mut classes: Vec<Vec<BigInt>> = Vec::new();
        for a in 0..4 {
            for b in 0..4 {
                let v = big(&[a, b]);
                if !classes.iter().any(|c| {
                    let diff: Vec<BigInt> = v.iter().zip(c).map(|(x, y)| x - y).collect();
                    int_solve(&m, &diff).is_some()
                }) {
                    classes.push(v);
                }
            }
        }
        assert_eq!(classes.len(), 4);
        // cyclic: some representative has order 4
        let cyclic = classes
            .iter()
            .any(|c| (1..4).all(|k| int_solve(&m, &c.iter().map(|x| x * k).collect::<Vec<_>>()).is_none()));
        assert!(cyclic);
        assert_eq!(f.cokernel().0, FgAbGroup::new(0, big(&[4])).unwrap());
    }

    #[test]
    fn saturation_examples() {
        let z1 = FgAbGroup::free(1);
        let z2 = FgAbGroup::free(2);
        let emb = |v: &[i64]| LatticeMap::new(z1.clone(), z2.clone(), IntMat::from_i64(2, 1, v)).unwrap();
        assert_eq!(saturate(&emb(&[2, 0])).unwrap().matrix().col(0), big(&[1, 0]));
        assert_eq!(saturate(&emb(&[1, 1])).unwrap().matrix().col(0), big(&[1, 1]));
        let s = saturate(&emb(&[2, 4])).unwrap();
        assert_eq!(s.matrix().col(0), big(&[1, 2]));
        let q = LatticeMap::new(z1.clone(), z2.clone(), s.matrix().clone()).unwrap().cokernel().0;
        assert!(q.is_free());
        let bad = LatticeMap::new(z2.clone(), z2.clone(), IntMat::from_i64(2, 2, &[1, 2, 2, 4])).unwrap();
        assert_eq!(saturate(&bad), Err(Error::NotInjective));
    }

    #[test]
    fn torsion_maps_checked() {
        let z2t = FgAbGroup::new(0, big(&[2])).unwrap();
        let z = FgAbGroup::free(1);
        assert!(LatticeMap::new(z2t.clone(), z, IntMat::from_i64(1, 1, &[1])).is_err());
        let z4 = FgAbGroup::new(0, big(&[4])).unwrap();
        assert!(LatticeMap::new(z2t, z4, IntMat::from_i64(1, 1, &[2])).is_ok());
    }
}
