//! The permutation module `M^λ` on λ-flags, the vectors `m_T` and `e_T`, the
//! operator `k_T`, the submodule `S^λ` and its bilinear form.
//!
//! A λ-flag is the chain `V_c = span{entries of T in columns ≥ c}` for
//! `c = 2, …, λ_1` (`V_1` is always the whole space and is not stored). Flags
//! are numbered by their position in [`FlagSpace`], which sorts them by the
//! concatenated RREF entries of their members; every vector of `M^λ` is a
//! coefficient vector over these indices.

use std::collections::{BTreeMap, HashMap, VecDeque};
use std::fmt::Write as _;

use crate::budget::Budget;
use crate::coeff_field::{CoeffField, KMatrix, KScalar};
use crate::combinatorics::Partition;
use crate::error::{Error, Result};
use crate::finite_field::Field;
use crate::fq_linalg::{gl_generators, gl_order, p_lambda_order, subspaces_of_dim, FqMatrix, FqVector, Subspace};
use crate::tableaux::FqTableau;

/// Bit length above which echelon coefficients are treated as runaway.
pub const MAX_COEFF_BITS: u64 = 4096;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Flag {
    spaces: Vec<Subspace>,
}

impl Flag {
    pub fn spaces(&self) -> &[Subspace] {
        &self.spaces
    }

    pub fn dims(&self) -> Vec<usize> {
        self.spaces.iter().map(Subspace::dim).collect()
    }

    /// `g · F`, member by member.
    pub fn image(&self, g: &FqMatrix) -> Flag {
        Flag { spaces: self.spaces.iter().map(|v| v.image(g)).collect() }
    }
}

/// The flag of `T`; it depends only on the `P(T)`-orbit of `T`.
pub fn flag_of(t: &FqTableau) -> Flag {
    let spaces = (1..t.num_columns())
        .map(|c| {
            let vs: Vec<FqVector> = (0..t.n()).filter(|&i| t.column_of(i) >= c).map(|i| t.entry(i).clone()).collect();
            Subspace::span(t.field(), t.n(), &vs).expect("entries have length n")
        })
        .collect();
    Flag { spaces }
}

/// `[G : P_{λ'}]`, the number of λ-flags in `F_q^n`.
pub fn flag_count(shape: &Partition, q: u64) -> u128 {
    gl_order(shape.size(), q) / p_lambda_order(&shape.conjugate(), q)
}

/// The basis of `M^λ`.
#[derive(Debug, Clone)]
pub struct FlagSpace {
    shape: Partition,
    field: Field,
    flags: Vec<Flag>,
    index: HashMap<Flag, usize>,
}

/// All λ-flags of `F_q^n` in increasing order.
pub fn enumerate_flags(shape: &Partition, field: Field, budget: &Budget) -> Result<FlagSpace> {
    budget.check_flags(&format!("M^({shape})"), flag_count(shape, field.q() as u64))?;
    let n = shape.size();
    let conj = shape.conjugate();
    // dims[c] = dim V_{c+2}
    let dims: Vec<usize> = (1..conj.len()).map(|c| conj.parts()[c..].iter().sum()).collect();
    let mut chains: Vec<Vec<Subspace>> = vec![Vec::new()];
    let full = Subspace::full(field, n);
    for &d in &dims {
        let mut next = Vec::new();
        for chain in &chains {
            let container = chain.last().unwrap_or(&full);
            let basis = container.basis();
            for sub in subspaces_of_dim(field, container.dim(), d) {
                let inside = Subspace::row_space(&sub.basis().mul(basis)?);
                let mut extended = chain.clone();
                extended.push(inside);
                next.push(extended);
            }
        }
        chains = next;
    }
    let mut flags: Vec<Flag> = chains.into_iter().map(|spaces| Flag { spaces }).collect();
    flags.sort();
    let index = flags.iter().cloned().enumerate().map(|(i, f)| (f, i)).collect();
    Ok(FlagSpace { shape: shape.clone(), field, flags, index })
}

impl FlagSpace {
    pub fn shape(&self) -> &Partition {
        &self.shape
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn len(&self) -> usize {
        self.flags.len()
    }

    pub fn is_empty(&self) -> bool {
        self.flags.is_empty()
    }

    pub fn flags(&self) -> &[Flag] {
        &self.flags
    }

    pub fn flag(&self, i: usize) -> &Flag {
        &self.flags[i]
    }

    pub fn index_of(&self, flag: &Flag) -> Result<usize> {
        self.index
            .get(flag)
            .copied()
            .ok_or_else(|| Error::InvalidPartition(format!("flag with dimensions {:?} is not a ({}) flag", flag.dims(), self.shape)))
    }

    fn check_matrix(&self, g: &FqMatrix) -> Result<()> {
        if !g.is_square() || g.rows() != self.shape.size() {
            return Err(Error::DimensionMismatch(format!("{}x{} matrix acting on M^({})", g.rows(), g.cols(), self.shape)));
        }
        Ok(())
    }

    /// Index of `g · flag(i)`.
    pub fn image_index(&self, i: usize, g: &FqMatrix) -> Result<usize> {
        self.check_matrix(g)?;
        self.index_of(&self.flags[i].image(g))
    }

    /// The permutation of flag indices induced by `g`.
    pub fn permutation(&self, g: &FqMatrix) -> Result<Vec<usize>> {
        self.check_matrix(g)?;
        self.flags.iter().map(|f| self.index_of(&f.image(g))).collect()
    }
}

/// A vector of `M^λ`, sparse over flag indices with no stored zeros.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct MVector {
    coeffs: BTreeMap<usize, KScalar>,
}

impl MVector {
    pub fn new() -> Self {
        MVector::default()
    }

    pub fn basis_vector(i: usize, k: &CoeffField) -> Self {
        let mut v = MVector::new();
        v.add_term(i, &k.one());
        v
    }

    pub fn from_dense(dense: &[KScalar]) -> Self {
        let coeffs = dense.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(i, c)| (i, c.clone())).collect();
        MVector { coeffs }
    }

    pub fn to_dense(&self, len: usize, k: &CoeffField) -> Vec<KScalar> {
        let mut out = vec![k.zero(); len];
        for (&i, c) in &self.coeffs {
            out[i] = c.clone();
        }
        out
    }

    pub fn get(&self, i: usize) -> Option<&KScalar> {
        self.coeffs.get(&i)
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, &KScalar)> {
        self.coeffs.iter().map(|(&i, c)| (i, c))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn add_term(&mut self, i: usize, c: &KScalar) {
        if c.is_zero() {
            return;
        }
        match self.coeffs.get_mut(&i) {
            Some(existing) => {
                let sum = existing.add(c);
                if sum.is_zero() {
                    self.coeffs.remove(&i);
                } else {
                    *existing = sum;
                }
            }
            None => {
                self.coeffs.insert(i, c.clone());
            }
        }
    }

    pub fn add(&self, other: &MVector) -> MVector {
        let mut out = self.clone();
        for (i, c) in other.iter() {
            out.add_term(i, c);
        }
        out
    }

    pub fn scale(&self, c: &KScalar) -> MVector {
        if c.is_zero() {
            return MVector::new();
        }
        MVector { coeffs: self.coeffs.iter().map(|(&i, x)| (i, x.mul(c))).collect() }
    }

    /// `g · v`.
    pub fn act(&self, g: &FqMatrix, space: &FlagSpace) -> Result<MVector> {
        let mut out = MVector::new();
        for (i, c) in self.iter() {
            out.add_term(space.image_index(i, g)?, c);
        }
        Ok(out)
    }

    /// Lines `flag-id: coefficient`.
    pub fn dump(&self) -> String {
        let mut s = String::new();
        for (i, c) in self.iter() {
            writeln!(s, "{i}: {c}").unwrap();
        }
        s
    }
}

/// `[v, w]` for the form making the flags orthonormal.
pub fn bilinear(v: &MVector, w: &MVector, k: &CoeffField) -> KScalar {
    let (small, large) = if v.len() <= w.len() { (v, w) } else { (w, v) };
    small
        .iter()
        .filter_map(|(i, a)| large.get(i).map(|b| a.mul(b)))
        .fold(k.zero(), |acc, x| acc.add(&x))
}

/// `m_T`: the basis vector of the flag of `T`.
pub fn m_vector(t: &FqTableau, space: &FlagSpace, k: &CoeffField) -> Result<MVector> {
    Ok(MVector::basis_vector(space.index_of(&flag_of(t))?, k))
}

/// `e_T = Σ_{u ∈ U(T)} ψ_T(u^{-1}) m_{uT}`.
pub fn e_vector(t: &FqTableau, space: &FlagSpace, k: &CoeffField, budget: &Budget) -> Result<MVector> {
    let flag = flag_of(t);
    let mut out = MVector::new();
    for u in t.u_elements(budget)? {
        let coeff = k.theta(-t.psi_exponent(&u)?)?;
        out.add_term(space.index_of(&flag.image(&u))?, &coeff);
    }
    Ok(out)
}

/// `k_T v = Σ_{u ∈ U(T)} ψ_T(u^{-1}) u·v`, for `v` in any `M^μ` with `|μ| = n`.
pub fn k_apply(t: &FqTableau, v: &MVector, space: &FlagSpace, k: &CoeffField, budget: &Budget) -> Result<MVector> {
    let mut out = MVector::new();
    for u in t.u_elements(budget)? {
        let coeff = k.theta(-t.psi_exponent(&u)?)?;
        for (i, c) in v.iter() {
            out.add_term(space.image_index(i, &u)?, &c.mul(&coeff));
        }
    }
    Ok(out)
}

/// A subspace of `M^λ` held as a fully reduced echelon basis: each row has a
/// leading coefficient 1 at its pivot flag, pivots strictly increase, and
/// every other row vanishes at each pivot. The coordinate of a vector of the
/// span on row `r` is therefore its entry at `pivots[r]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpanBasis {
    field: CoeffField,
    ambient: usize,
    rows: Vec<Vec<KScalar>>,
    pivots: Vec<usize>,
}

impl SpanBasis {
    pub fn new(field: &CoeffField, ambient: usize) -> Self {
        SpanBasis { field: field.clone(), ambient, rows: Vec::new(), pivots: Vec::new() }
    }

    pub fn field(&self) -> &CoeffField {
        &self.field
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Vec<KScalar>] {
        &self.rows
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn row_vector(&self, r: usize) -> MVector {
        MVector::from_dense(&self.rows[r])
    }

    /// `v` minus its projection along the pivots.
    pub fn reduce(&self, v: &[KScalar]) -> Vec<KScalar> {
        let mut w = v.to_vec();
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if w[p].is_zero() {
                continue;
            }
            let c = w[p].clone();
            for (x, y) in w.iter_mut().zip(row) {
                if !y.is_zero() {
                    *x = x.sub(&c.mul(y));
                }
            }
        }
        w
    }

    pub fn contains(&self, v: &[KScalar]) -> bool {
        self.reduce(v).iter().all(KScalar::is_zero)
    }

    /// Coordinates of `v` in the basis; fails with [`Error::LeftSpan`] if `v`
    /// is not in the span.
    pub fn coordinates(&self, v: &[KScalar]) -> Result<Vec<KScalar>> {
        if !self.contains(v) {
            return Err(Error::LeftSpan);
        }
        Ok(self.pivots.iter().map(|&p| v[p].clone()).collect())
    }

    /// Adds `v` to the span, returning whether the rank grew.
    pub fn insert(&mut self, v: &[KScalar]) -> Result<bool> {
        if v.len() != self.ambient {
            return Err(Error::DimensionMismatch(format!("vector of length {} in M of dimension {}", v.len(), self.ambient)));
        }
        let w = self.reduce(v);
        let Some(p) = w.iter().position(|x| !x.is_zero()) else {
            return Ok(false);
        };
        let inv = w[p].inv()?;
        let w: Vec<KScalar> = w.iter().map(|x| x.mul(&inv)).collect();
        let bits = w.iter().map(KScalar::bits).max().unwrap_or(0);
        if bits > MAX_COEFF_BITS {
            return Err(Error::CoefficientBlowup { bits });
        }
        for row in &mut self.rows {
            if row[p].is_zero() {
                continue;
            }
            let c = row[p].clone();
            for (x, y) in row.iter_mut().zip(&w) {
                if !y.is_zero() {
                    *x = x.sub(&c.mul(y));
                }
            }
        }
        let at = self.pivots.partition_point(|&q| q < p);
        self.pivots.insert(at, p);
        self.rows.insert(at, w);
        Ok(true)
    }

    /// The smallest subspace containing `seeds` and stable under `gens`,
    /// built breadth-first.
    pub fn closure(space: &FlagSpace, k: &CoeffField, seeds: &[MVector], gens: &[FqMatrix]) -> Result<SpanBasis> {
        let perms = gens.iter().map(|g| space.permutation(g)).collect::<Result<Vec<_>>>()?;
        let mut basis = SpanBasis::new(k, space.len());
        let mut queue = VecDeque::new();
        for s in seeds {
            let dense = s.to_dense(space.len(), k);
            if basis.insert(&dense)? {
                queue.push_back(dense);
            }
        }
        while let Some(v) = queue.pop_front() {
            for perm in &perms {
                let moved = permute(&v, perm, k);
                if basis.insert(&moved)? {
                    queue.push_back(moved);
                }
            }
        }
        Ok(basis)
    }

    /// Coefficient matrix as TSV, one row per basis vector.
    pub fn to_tsv(&self) -> String {
        let mut s = String::new();
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|x| x.to_string()).collect();
            writeln!(s, "{}", cells.join("\t")).unwrap();
        }
        s
    }
}

/// `w[perm[i]] = v[i]`.
pub fn permute(v: &[KScalar], perm: &[usize], k: &CoeffField) -> Vec<KScalar> {
    let mut out = vec![k.zero(); v.len()];
    for (i, x) in v.iter().enumerate() {
        out[perm[i]] = x.clone();
    }
    out
}

/// `S^λ` as the `G`-span of `e_{T₀}`, closed under [`gl_generators`].
pub fn s_basis_from(t0: &FqTableau, space: &FlagSpace, k: &CoeffField, budget: &Budget) -> Result<SpanBasis> {
    let e = e_vector(t0, space, k, budget)?;
    SpanBasis::closure(space, k, &[e], &gl_generators(t0.n(), space.field()))
}

/// `S^λ` seeded by the standard-basis tableau.
pub fn s_basis(space: &FlagSpace, k: &CoeffField, budget: &Budget) -> Result<SpanBasis> {
    s_basis_from(&FqTableau::standard(space.shape(), space.field()), space, k, budget)
}

/// The Gram matrix of a basis of `S^λ`, its rank `dim D^λ`, and a basis of
/// the radical `S^λ ∩ (S^λ)^⊥` as vectors of `M^λ`.
#[derive(Debug, Clone)]
pub struct GramData {
    pub gram: KMatrix,
    pub rank: usize,
    pub radical: Vec<Vec<KScalar>>,
}

pub fn gram_and_radical(basis: &SpanBasis) -> Result<GramData> {
    let k = basis.field();
    let r = basis.rank();
    let mut gram = KMatrix::zero(k, r, r);
    for i in 0..r {
        for j in i..r {
            let v = basis.rows[i]
                .iter()
                .zip(&basis.rows[j])
                .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                .fold(k.zero(), |acc, (a, b)| acc.add(&a.mul(b)));
            gram.set(j, i, v.clone());
            gram.set(i, j, v);
        }
    }
    let rank = gram.rank();
    let radical = gram
        .kernel()
        .into_iter()
        .map(|coords| {
            let mut v = vec![k.zero(); basis.ambient];
            for (c, row) in coords.iter().zip(&basis.rows) {
                if c.is_zero() {
                    continue;
                }
                for (x, y) in v.iter_mut().zip(row) {
                    *x = x.add(&c.mul(y));
                }
            }
            v
        })
        .collect();
    Ok(GramData { gram, rank, radical })
}

/// A basis of `{x ∈ M^λ : [x, s] = 0 for all s ∈ basis}`.
pub fn perp(basis: &SpanBasis) -> Result<Vec<Vec<KScalar>>> {
    if basis.rank() == 0 {
        let k = basis.field();
        return Ok((0..basis.ambient).map(|i| MVector::basis_vector(i, k).to_dense(basis.ambient, k)).collect());
    }
    Ok(KMatrix::from_rows(basis.field(), basis.rows.clone())?.kernel())
}

/// `(dim M^λ, dim S^λ, dim D^λ)` for one shape.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DimRow {
    pub shape: Partition,
    pub dims: Result<(usize, usize, usize)>,
}

/// One row per partition of `n`; a failing row does not stop the others.
pub fn dimension_table(n: usize, field: Field, k: &CoeffField, budget: &Budget) -> Vec<DimRow> {
    crate::combinatorics::partitions_of(n)
        .into_iter()
        .map(|shape| {
            let dims = enumerate_flags(&shape, field, budget).and_then(|space| {
                let basis = s_basis(&space, k, budget)?;
                let gram = gram_and_radical(&basis)?;
                Ok((space.len(), basis.rank(), gram.rank))
            });
            DimRow { shape, dims }
        })
        .collect()
}
