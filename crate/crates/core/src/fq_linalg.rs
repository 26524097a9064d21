//! Matrices over `F_q`, row reduction, canonical subspaces, and enumeration of
//! `GL_n(F_q)` together with the parabolic subgroups `P_λ`, `U_λ` and their
//! transposes.
//!
//! For a partition `λ` of `n`, index `i` (0-based) sits in row `row_of(i)` of
//! the row-reading tableau of shape `λ`. `P_λ` consists of the invertible `g`
//! with `g[i][j] = 0` whenever `row_of(i) > row_of(j)`; `U_λ` is its unipotent
//! radical.

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};

use rand::Rng;

use crate::budget::Budget;
use crate::combinatorics::Partition;
use crate::error::{Error, Result};
use crate::finite_field::{Field, FqScalar};

/// A vector in `F_q^n`.
#[derive(Clone)]
pub struct FqVector {
    field: Field,
    data: Vec<u8>,
}

impl FqVector {
    pub fn zero(field: Field, n: usize) -> Self {
        FqVector { field, data: vec![0; n] }
    }

    /// The `i`-th standard basis vector (0-based).
    pub fn unit(field: Field, n: usize, i: usize) -> Self {
        let mut v = FqVector::zero(field, n);
        v.data[i] = 1;
        v
    }

    pub fn from_scalars(field: Field, entries: &[FqScalar]) -> Result<Self> {
        if entries.iter().any(|e| !std::ptr::eq(e.field(), field)) {
            return Err(Error::MixedFields);
        }
        Ok(FqVector { field, data: entries.iter().map(|e| e.raw()).collect() })
    }

    pub(crate) fn from_raw(field: Field, data: Vec<u8>) -> Self {
        FqVector { field, data }
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn get(&self, i: usize) -> FqScalar {
        FqScalar::from_raw(self.field, self.data[i])
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    pub fn add(&self, other: &FqVector) -> FqVector {
        let f = self.field;
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| f.add_raw(a, b)).collect();
        FqVector { field: f, data }
    }

    pub fn scale(&self, c: FqScalar) -> FqVector {
        let f = self.field;
        let data = self.data.iter().map(|&a| f.mul_raw(a, c.raw())).collect();
        FqVector { field: f, data }
    }

    pub fn neg(&self) -> FqVector {
        let f = self.field;
        FqVector { field: f, data: self.data.iter().map(|&a| f.neg_raw(a)).collect() }
    }

    /// Parses comma-separated scalar encodings.
    pub fn parse(s: &str, field: Field) -> Result<Self> {
        let data = s
            .split(',')
            .map(|t| {
                let v: u32 = t
                    .trim()
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad scalar {t:?}")))?;
                Ok(field.element(v)?.raw())
            })
            .collect::<Result<Vec<u8>>>()?;
        Ok(FqVector { field, data })
    }
}

impl PartialEq for FqVector {
    fn eq(&self, other: &Self) -> bool {
        std::ptr::eq(self.field, other.field) && self.data == other.data
    }
}

impl Eq for FqVector {}

impl Hash for FqVector {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.data.hash(state);
    }
}

impl fmt::Debug for FqVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{self}]")
    }
}

impl fmt::Display for FqVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.data.iter().map(|x| x.to_string()).collect();
        f.write_str(&s.join(","))
    }
}

/// A dense `rows × cols` matrix over `F_q`, row-major.
#[derive(Clone)]
pub struct FqMatrix {
    field: Field,
    rows: usize,
    cols: usize,
    data: Vec<u8>,
}

impl FqMatrix {
    pub fn zero(field: Field, rows: usize, cols: usize) -> Self {
        FqMatrix { field, rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(field: Field, n: usize) -> Self {
        let mut m = FqMatrix::zero(field, n, n);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    /// `I + α E_{ij}` (0-based indices).
    pub fn elementary(field: Field, n: usize, i: usize, j: usize, alpha: FqScalar) -> Self {
        let mut m = FqMatrix::identity(field, n);
        m.data[i * n + j] = field.add_raw(m.data[i * n + j], alpha.raw());
        m
    }

    pub fn diagonal(field: Field, diag: &[FqScalar]) -> Self {
        let n = diag.len();
        let mut m = FqMatrix::zero(field, n, n);
        for (i, d) in diag.iter().enumerate() {
            m.data[i * n + i] = d.raw();
        }
        m
    }

    pub fn from_rows(field: Field, rows: &[Vec<FqScalar>]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        let mut data = Vec::with_capacity(r * c);
        for e in rows.iter().flatten() {
            if !std::ptr::eq(e.field(), field) {
                return Err(Error::MixedFields);
            }
            data.push(e.raw());
        }
        Ok(FqMatrix { field, rows: r, cols: c, data })
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(field: Field, cols: &[FqVector]) -> Result<Self> {
        let n = cols.first().map_or(0, FqVector::len);
        if cols.iter().any(|c| c.len() != n) {
            return Err(Error::DimensionMismatch("columns of unequal length".into()));
        }
        let mut m = FqMatrix::zero(field, n, cols.len());
        for (j, c) in cols.iter().enumerate() {
            for i in 0..n {
                m.data[i * cols.len() + j] = c.data[i];
            }
        }
        Ok(m)
    }

    pub(crate) fn from_raw(field: Field, rows: usize, cols: usize, data: Vec<u8>) -> Self {
        debug_assert_eq!(data.len(), rows * cols);
        FqMatrix { field, rows, cols, data }
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> FqScalar {
        FqScalar::from_raw(self.field, self.data[i * self.cols + j])
    }

    pub fn set(&mut self, i: usize, j: usize, v: FqScalar) {
        self.data[i * self.cols + j] = v.raw();
    }

    pub fn row(&self, i: usize) -> FqVector {
        FqVector::from_raw(self.field, self.data[i * self.cols..(i + 1) * self.cols].to_vec())
    }

    pub fn column(&self, j: usize) -> FqVector {
        FqVector::from_raw(self.field, (0..self.rows).map(|i| self.data[i * self.cols + j]).collect())
    }

    pub fn transpose(&self) -> FqMatrix {
        let mut t = FqMatrix::zero(self.field, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j * self.rows + i] = self.data[i * self.cols + j];
            }
        }
        t
    }

    pub fn mul(&self, other: &FqMatrix) -> Result<FqMatrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        if !std::ptr::eq(self.field, other.field) {
            return Err(Error::MixedFields);
        }
        let f = self.field;
        let mut out = FqMatrix::zero(f, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.data[i * self.cols + k];
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    let idx = i * other.cols + j;
                    out.data[idx] = f.add_raw(out.data[idx], f.mul_raw(a, other.data[k * other.cols + j]));
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &FqVector) -> Result<FqVector> {
        if self.cols != v.len() {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} times vector of length {}",
                self.rows,
                self.cols,
                v.len()
            )));
        }
        let f = self.field;
        let data = (0..self.rows)
            .map(|i| {
                (0..self.cols).fold(0u8, |acc, k| f.add_raw(acc, f.mul_raw(self.data[i * self.cols + k], v.data[k])))
            })
            .collect();
        Ok(FqVector::from_raw(f, data))
    }

    /// Reduced row echelon form and rank.
    pub fn rref(&self) -> (FqMatrix, usize) {
        let mut m = self.clone();
        let rank = m.rref_in_place();
        (m, rank)
    }

    /// Returns the rank; leaves `self` in reduced row echelon form.
    fn rref_in_place(&mut self) -> usize {
        let f = self.field;
        let (rows, cols) = (self.rows, self.cols);
        let mut r = 0;
        for c in 0..cols {
            if r == rows {
                break;
            }
            let Some(piv) = (r..rows).find(|&i| self.data[i * cols + c] != 0) else {
                continue;
            };
            if piv != r {
                for j in 0..cols {
                    self.data.swap(piv * cols + j, r * cols + j);
                }
            }
            let inv = f.inv_raw(self.data[r * cols + c]);
            for j in 0..cols {
                self.data[r * cols + j] = f.mul_raw(self.data[r * cols + j], inv);
            }
            for i in 0..rows {
                let factor = self.data[i * cols + c];
                if i == r || factor == 0 {
                    continue;
                }
                let nf = f.neg_raw(factor);
                for j in 0..cols {
                    let v = f.mul_raw(nf, self.data[r * cols + j]);
                    self.data[i * cols + j] = f.add_raw(self.data[i * cols + j], v);
                }
            }
            r += 1;
        }
        r
    }

    pub fn rank(&self) -> usize {
        self.rref().1
    }

    pub fn is_invertible(&self) -> bool {
        self.is_square() && self.rank() == self.rows
    }

    pub fn inverse(&self) -> Result<FqMatrix> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch("inverse of a non-square matrix".into()));
        }
        let n = self.rows;
        let mut aug = FqMatrix::zero(self.field, n, 2 * n);
        for i in 0..n {
            aug.data[i * 2 * n..i * 2 * n + n].copy_from_slice(&self.data[i * n..(i + 1) * n]);
            aug.data[i * 2 * n + n + i] = 1;
        }
        aug.rref_in_place();
        for i in 0..n {
            if aug.data[i * 2 * n + i] != 1 {
                return Err(Error::NotInvertible);
            }
        }
        let mut inv = FqMatrix::zero(self.field, n, n);
        for i in 0..n {
            inv.data[i * n..(i + 1) * n].copy_from_slice(&aug.data[i * 2 * n + n..(i + 1) * 2 * n]);
        }
        Ok(inv)
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| (0..self.cols).all(|j| self.data[i * self.cols + j] == u8::from(i == j)))
    }

    /// Parses the `;`-separated row format.
    pub fn parse(s: &str, field: Field) -> Result<Self> {
        let rows: Vec<FqVector> = s.split(';').map(|r| FqVector::parse(r, field)).collect::<Result<_>>()?;
        let cols = rows.first().map_or(0, FqVector::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::Parse(format!("ragged matrix {s:?}")));
        }
        let data = rows.iter().flat_map(|r| r.data.iter().copied()).collect();
        Ok(FqMatrix { field, rows: rows.len(), cols, data })
    }
}

impl PartialEq for FqMatrix {
    fn eq(&self, other: &Self) -> bool {
        std::ptr::eq(self.field, other.field)
            && self.rows == other.rows
            && self.cols == other.cols
            && self.data == other.data
    }
}

impl Eq for FqMatrix {}

impl Hash for FqMatrix {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.rows.hash(state);
        self.cols.hash(state);
        self.data.hash(state);
    }
}

impl Ord for FqMatrix {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.rows, self.cols, &self.data).cmp(&(other.rows, other.cols, &other.data))
    }
}

impl PartialOrd for FqMatrix {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for FqMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{self}]")
    }
}

impl fmt::Display for FqMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = (0..self.rows).map(|i| self.row(i).to_string()).collect();
        f.write_str(&rows.join(";"))
    }
}

/// A subspace of `F_q^n`, stored as its reduced row echelon basis.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subspace {
    ambient: usize,
    basis: FqMatrix,
}

impl Subspace {
    pub fn zero(field: Field, ambient: usize) -> Self {
        Subspace { ambient, basis: FqMatrix::zero(field, 0, ambient) }
    }

    pub fn full(field: Field, ambient: usize) -> Self {
        Subspace { ambient, basis: FqMatrix::identity(field, ambient) }
    }

    pub fn span(field: Field, ambient: usize, vectors: &[FqVector]) -> Result<Self> {
        if vectors.iter().any(|v| v.len() != ambient) {
            return Err(Error::DimensionMismatch("vectors of different lengths".into()));
        }
        let mut m = FqMatrix::zero(field, vectors.len(), ambient);
        for (i, v) in vectors.iter().enumerate() {
            m.data[i * ambient..(i + 1) * ambient].copy_from_slice(&v.data);
        }
        Ok(Subspace::row_space(&m))
    }

    /// Row space of `m`.
    pub fn row_space(m: &FqMatrix) -> Self {
        let (mut r, rank) = m.rref();
        r.data.truncate(rank * r.cols);
        r.rows = rank;
        Subspace { ambient: m.cols, basis: r }
    }

    pub(crate) fn from_rref_unchecked(basis: FqMatrix) -> Self {
        Subspace { ambient: basis.cols, basis }
    }

    pub fn dim(&self) -> usize {
        self.basis.rows
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    /// RREF basis matrix (one row per basis vector).
    pub fn basis(&self) -> &FqMatrix {
        &self.basis
    }

    pub fn basis_vectors(&self) -> Vec<FqVector> {
        (0..self.dim()).map(|i| self.basis.row(i)).collect()
    }

    pub fn contains(&self, v: &FqVector) -> bool {
        let f = self.basis.field;
        let n = self.ambient;
        let mut w = v.data.clone();
        for r in 0..self.dim() {
            let row = &self.basis.data[r * n..(r + 1) * n];
            let pivot = row.iter().position(|&x| x != 0).unwrap();
            let c = w[pivot];
            if c != 0 {
                let nc = f.neg_raw(c);
                for j in 0..n {
                    w[j] = f.add_raw(w[j], f.mul_raw(nc, row[j]));
                }
            }
        }
        w.iter().all(|&x| x == 0)
    }

    pub fn contains_subspace(&self, other: &Subspace) -> bool {
        other.basis_vectors().iter().all(|v| self.contains(v))
    }

    /// `g · V` for a square matrix `g` acting on column vectors.
    pub fn image(&self, g: &FqMatrix) -> Subspace {
        let moved = self.basis.mul(&g.transpose()).expect("dimension checked by caller");
        Subspace::row_space(&moved)
    }
}

impl fmt::Debug for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "span{{{}}}", self.basis)
    }
}

/// All subspaces of `F_q^n` of dimension `d`, in increasing RREF order.
pub fn subspaces_of_dim(field: Field, n: usize, d: usize) -> Vec<Subspace> {
    let q = field.q() as u8;
    let mut out = Vec::new();
    let mut pivots = Vec::with_capacity(d);
    fn choose(n: usize, d: usize, start: usize, pivots: &mut Vec<usize>, f: &mut dyn FnMut(&[usize])) {
        if pivots.len() == d {
            f(pivots);
            return;
        }
        for c in start..n {
            pivots.push(c);
            choose(n, d, c + 1, pivots, f);
            pivots.pop();
        }
    }
    choose(n, d, 0, &mut pivots, &mut |piv| {
        let free: Vec<(usize, usize)> = (0..d)
            .flat_map(|r| ((piv[r] + 1)..n).filter(|c| !piv.contains(c)).map(move |c| (r, c)))
            .collect();
        let mut counter = vec![0u8; free.len()];
        loop {
            let mut m = FqMatrix::zero(field, d, n);
            for (r, &c) in piv.iter().enumerate() {
                m.data[r * n + c] = 1;
            }
            for (&(r, c), &v) in free.iter().zip(&counter) {
                m.data[r * n + c] = v;
            }
            out.push(Subspace::from_rref_unchecked(m));
            if !odometer(&mut counter, q) {
                break;
            }
        }
    });
    out.sort();
    out
}

/// Advances a base-`q` counter with the last digit fastest; false on wrap.
fn odometer(counter: &mut [u8], q: u8) -> bool {
    for d in counter.iter_mut().rev() {
        *d += 1;
        if *d < q {
            return true;
        }
        *d = 0;
    }
    false
}

/// `|GL_n(F_q)| = Π_{i<n} (q^n - q^i)`.
pub fn gl_order(n: usize, q: u64) -> u128 {
    let qn = (q as u128).pow(n as u32);
    (0..n).map(|i| qn - (q as u128).pow(i as u32)).product()
}

/// Every invertible `n × n` matrix exactly once, in lexicographic order of
/// the row-major entry sequence.
pub fn gl_enumerate(n: usize, field: Field, budget: &Budget) -> Result<GlIter> {
    budget.check_elements(&format!("GL_{n}(F_{})", field.q()), gl_order(n, field.q() as u64))?;
    Ok(GlIter::new(n, field))
}

pub struct GlIter {
    field: Field,
    n: usize,
    /// All vectors of `F_q^n` in lexicographic order.
    vectors: Vec<Vec<u8>>,
    /// Chosen row (index into `vectors`) per depth.
    choice: Vec<usize>,
    /// `spans[d]` marks vectors in the span of the first `d` rows.
    spans: Vec<Vec<bool>>,
    started: bool,
    done: bool,
}

impl GlIter {
    fn new(n: usize, field: Field) -> Self {
        let q = field.q() as usize;
        let count = q.pow(n as u32);
        let vectors: Vec<Vec<u8>> = (0..count)
            .map(|mut x| {
                let mut v = vec![0u8; n];
                for slot in v.iter_mut().rev() {
                    *slot = (x % q) as u8;
                    x /= q;
                }
                v
            })
            .collect();
        let mut span0 = vec![false; count];
        span0[0] = true;
        let mut spans = vec![vec![false; count]; n + 1];
        spans[0] = span0;
        GlIter { field, n, vectors, choice: vec![0; n], spans, started: false, done: n == 0 }
    }

    fn index_of(&self, v: &[u8]) -> usize {
        let q = self.field.q() as usize;
        v.iter().fold(0, |acc, &x| acc * q + x as usize)
    }

    fn extend_span(&mut self, depth: usize) {
        let f = self.field;
        let row = self.vectors[self.choice[depth]].clone();
        let mut next = vec![false; self.vectors.len()];
        for (idx, inside) in self.spans[depth].iter().enumerate() {
            if !inside {
                continue;
            }
            for c in 0..f.q() as u8 {
                let w: Vec<u8> = self.vectors[idx]
                    .iter()
                    .zip(&row)
                    .map(|(&a, &b)| f.add_raw(a, f.mul_raw(c, b)))
                    .collect();
                next[self.index_of(&w)] = true;
            }
        }
        self.spans[depth + 1] = next;
    }

    /// Sets `choice[depth]` to the first admissible vector at or after `from`.
    fn seek(&mut self, depth: usize, from: usize) -> bool {
        match (from..self.vectors.len()).find(|&i| !self.spans[depth][i]) {
            Some(i) => {
                self.choice[depth] = i;
                true
            }
            None => false,
        }
    }

    /// Fills depths `depth..n` with the smallest admissible choices.
    fn descend(&mut self, mut depth: usize) {
        while depth < self.n {
            let ok = self.seek(depth, 0);
            debug_assert!(ok, "fewer than n independent vectors");
            if depth + 1 < self.n {
                self.extend_span(depth);
            }
            depth += 1;
        }
    }

    fn current(&self) -> FqMatrix {
        let data = self.choice.iter().flat_map(|&i| self.vectors[i].iter().copied()).collect();
        FqMatrix::from_raw(self.field, self.n, self.n, data)
    }
}

impl Iterator for GlIter {
    type Item = FqMatrix;

    fn next(&mut self) -> Option<FqMatrix> {
        if self.done {
            return None;
        }
        if !self.started {
            self.started = true;
            self.descend(0);
            return Some(self.current());
        }
        let mut depth = self.n - 1;
        loop {
            if self.seek(depth, self.choice[depth] + 1) {
                if depth + 1 < self.n {
                    self.extend_span(depth);
                }
                self.descend(depth + 1);
                return Some(self.current());
            }
            if depth == 0 {
                self.done = true;
                return None;
            }
            depth -= 1;
        }
    }
}

/// Row of index `i` in the row-reading tableau of shape `lambda`.
pub fn row_reading_rows(lambda: &Partition) -> Vec<usize> {
    lambda
        .parts()
        .iter()
        .enumerate()
        .flat_map(|(r, &len)| std::iter::repeat_n(r, len))
        .collect()
}

/// Positions `(i, j)` with `i` strictly above `j` in the row-reading tableau,
/// in row-major order: the free entries of `U_λ`.
pub fn u_lambda_positions(lambda: &Partition) -> Vec<(usize, usize)> {
    let rows = row_reading_rows(lambda);
    let n = rows.len();
    (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .filter(|&(i, j)| rows[i] < rows[j])
        .collect()
}

/// Enumerates unipotent matrices `I + Σ x_{ij} E_{ij}` over a fixed set of
/// free positions.
pub struct UnipotentIter {
    base: FqMatrix,
    positions: Vec<(usize, usize)>,
    counter: Vec<u8>,
    done: bool,
}

impl UnipotentIter {
    fn new(field: Field, n: usize, positions: Vec<(usize, usize)>) -> Self {
        UnipotentIter {
            base: FqMatrix::identity(field, n),
            counter: vec![0; positions.len()],
            positions,
            done: false,
        }
    }
}

impl Iterator for UnipotentIter {
    type Item = FqMatrix;

    fn next(&mut self) -> Option<FqMatrix> {
        if self.done {
            return None;
        }
        let n = self.base.cols;
        let mut m = self.base.clone();
        for (&(i, j), &v) in self.positions.iter().zip(&self.counter) {
            m.data[i * n + j] = v;
        }
        let q = self.base.field.q() as u8;
        self.done = !odometer(&mut self.counter, q);
        Some(m)
    }
}

fn unipotent_count(field: Field, free: usize) -> u128 {
    (field.q() as u128).saturating_pow(free as u32)
}

/// All elements of `U_λ`.
pub fn u_lambda_elements(lambda: &Partition, field: Field, budget: &Budget) -> Result<UnipotentIter> {
    let positions = u_lambda_positions(lambda);
    budget.check_elements(&format!("U_({lambda})"), unipotent_count(field, positions.len()))?;
    Ok(UnipotentIter::new(field, lambda.size(), positions))
}

/// All elements of `U_λ^- = (U_λ)^t`.
pub fn u_lambda_minus_elements(lambda: &Partition, field: Field, budget: &Budget) -> Result<UnipotentIter> {
    let mut positions: Vec<(usize, usize)> = u_lambda_positions(lambda).into_iter().map(|(i, j)| (j, i)).collect();
    positions.sort();
    budget.check_elements(&format!("U_({lambda})^-"), unipotent_count(field, positions.len()))?;
    Ok(UnipotentIter::new(field, lambda.size(), positions))
}

/// A uniformly random element of `U_λ`.
pub fn random_u_lambda<R: Rng>(lambda: &Partition, field: Field, rng: &mut R) -> FqMatrix {
    let n = lambda.size();
    let mut m = FqMatrix::identity(field, n);
    for (i, j) in u_lambda_positions(lambda) {
        m.data[i * n + j] = rng.gen_range(0..field.q()) as u8;
    }
    m
}

/// A uniformly random element of `GL_n(F_q)`.
pub fn random_gl<R: Rng>(n: usize, field: Field, rng: &mut R) -> FqMatrix {
    loop {
        let data = (0..n * n).map(|_| rng.gen_range(0..field.q()) as u8).collect();
        let m = FqMatrix::from_raw(field, n, n, data);
        if m.is_invertible() {
            return m;
        }
    }
}

fn check_square(g: &FqMatrix, lambda: &Partition) -> Result<()> {
    if !g.is_square() || g.rows != lambda.size() {
        return Err(Error::DimensionMismatch(format!(
            "{}x{} matrix against a partition of {}",
            g.rows,
            g.cols,
            lambda.size()
        )));
    }
    Ok(())
}

/// Membership in `P_λ`.
pub fn p_lambda_contains(g: &FqMatrix, lambda: &Partition) -> Result<bool> {
    check_square(g, lambda)?;
    let rows = row_reading_rows(lambda);
    let n = g.rows;
    let shape_ok = (0..n).all(|i| (0..n).all(|j| rows[i] <= rows[j] || g.data[i * n + j] == 0));
    Ok(shape_ok && g.is_invertible())
}

/// Membership in `P_λ^- = (P_λ)^t`.
pub fn p_lambda_minus_contains(g: &FqMatrix, lambda: &Partition) -> Result<bool> {
    p_lambda_contains(&g.transpose(), lambda)
}

/// Membership in `U_λ`.
pub fn u_lambda_contains(g: &FqMatrix, lambda: &Partition) -> Result<bool> {
    check_square(g, lambda)?;
    let rows = row_reading_rows(lambda);
    let n = g.rows;
    Ok((0..n).all(|i| {
        (0..n).all(|j| {
            let x = g.data[i * n + j];
            if i == j {
                x == 1
            } else {
                rows[i] < rows[j] || x == 0
            }
        })
    }))
}

/// Membership in `U_λ^-`.
pub fn u_lambda_minus_contains(g: &FqMatrix, lambda: &Partition) -> Result<bool> {
    u_lambda_contains(&g.transpose(), lambda)
}

/// `|P_λ| = q^{d} Π_i |GL_{λ_i}(F_q)|`.
pub fn p_lambda_order(lambda: &Partition, q: u64) -> u128 {
    let levi: u128 = lambda.parts().iter().map(|&m| gl_order(m, q)).product();
    levi * (q as u128).pow(u_lambda_positions(lambda).len() as u32)
}

/// Every element of `P_λ` as a product `l · u` of a block-diagonal Levi
/// element and an element of the unipotent radical.
pub fn p_lambda_elements(lambda: &Partition, field: Field, budget: &Budget) -> Result<PIter> {
    budget.check_elements(&format!("P_({lambda})"), p_lambda_order(lambda, field.q() as u64))?;
    Ok(PIter::new(lambda.clone(), field))
}

pub struct PIter {
    lambda: Partition,
    field: Field,
    blocks: Vec<GlIter>,
    current: Vec<FqMatrix>,
    levi: FqMatrix,
    radical: UnipotentIter,
    done: bool,
}

impl PIter {
    fn new(lambda: Partition, field: Field) -> Self {
        let mut blocks: Vec<GlIter> = lambda.parts().iter().map(|&m| GlIter::new(m, field)).collect();
        let current: Vec<FqMatrix> = blocks.iter_mut().map(|b| b.next().expect("GL_m is nonempty")).collect();
        let levi = block_diag(field, &current);
        let radical = UnipotentIter::new(field, lambda.size(), u_lambda_positions(&lambda));
        PIter { lambda, field, blocks, current, levi, radical, done: false }
    }

    fn advance_levi(&mut self) -> bool {
        for b in (0..self.blocks.len()).rev() {
            if let Some(m) = self.blocks[b].next() {
                self.current[b] = m;
                self.levi = block_diag(self.field, &self.current);
                return true;
            }
            self.blocks[b] = GlIter::new(self.lambda.part(b), self.field);
            self.current[b] = self.blocks[b].next().expect("GL_m is nonempty");
        }
        false
    }
}

impl Iterator for PIter {
    type Item = FqMatrix;

    fn next(&mut self) -> Option<FqMatrix> {
        loop {
            if self.done {
                return None;
            }
            if let Some(u) = self.radical.next() {
                return Some(self.levi.mul(&u).expect("square"));
            }
            if !self.advance_levi() {
                self.done = true;
                return None;
            }
            self.radical = UnipotentIter::new(self.field, self.lambda.size(), u_lambda_positions(&self.lambda));
        }
    }
}

fn block_diag(field: Field, blocks: &[FqMatrix]) -> FqMatrix {
    let n: usize = blocks.iter().map(|b| b.rows).sum();
    let mut m = FqMatrix::zero(field, n, n);
    let mut off = 0;
    for b in blocks {
        for i in 0..b.rows {
            for j in 0..b.cols {
                m.data[(off + i) * n + off + j] = b.data[i * b.cols + j];
            }
        }
        off += b.rows;
    }
    m
}

/// Generators of `GL_n(F_q)`: the transvections `I + αE_{ij}` with `α` in
/// the `F_p`-basis `1, x, …, x^{k-1}`, and `diag(γ, 1, …, 1)` for the cached
/// primitive element `γ` (omitted when `γ = 1`).
pub fn gl_generators(n: usize, field: Field) -> Vec<FqMatrix> {
    let mut gens = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            for alpha in field.prime_basis() {
                gens.push(FqMatrix::elementary(field, n, i, j, alpha));
            }
        }
    }
    let gamma = field.primitive_element();
    if n > 0 && gamma != field.one() {
        let mut diag = vec![field.one(); n];
        diag[0] = gamma;
        gens.push(FqMatrix::diagonal(field, &diag));
    }
    gens
}
