//! `F_q^n`-tableaux: Young diagrams filled with linearly independent vectors.
//!
//! Entries are numbered top to bottom, then left to right, giving the ordered
//! basis `B(T) = (v_1, …, v_n)`; indices are 0-based in code. `A` is the
//! matrix with columns `v_1, …, v_n`, so `A^{-1} g A` is the matrix of `g` in
//! the basis `B(T)`.

use std::fmt;

use crate::budget::Budget;
use crate::coeff_field::{CoeffField, KScalar};
use crate::combinatorics::Partition;
use crate::error::{Error, Result};
use crate::finite_field::{Field, FqScalar};
use crate::fq_linalg::{u_lambda_elements, FqMatrix, FqVector, Subspace, UnipotentIter};

#[derive(Clone)]
pub struct FqTableau {
    shape: Partition,
    entries: Vec<FqVector>,
    row_of: Vec<usize>,
    col_of: Vec<usize>,
    basis: FqMatrix,
    basis_inv: FqMatrix,
}

impl PartialEq for FqTableau {
    fn eq(&self, other: &Self) -> bool {
        self.shape == other.shape && self.entries == other.entries
    }
}

impl Eq for FqTableau {}

/// `(row, column)` of each index in column-major numbering.
fn cells(shape: &Partition) -> (Vec<usize>, Vec<usize>) {
    let conj = shape.conjugate();
    let mut rows = Vec::with_capacity(shape.size());
    let mut cols = Vec::with_capacity(shape.size());
    for (c, &height) in conj.parts().iter().enumerate() {
        for r in 0..height {
            rows.push(r);
            cols.push(c);
        }
    }
    (rows, cols)
}

impl FqTableau {
    pub fn new(shape: Partition, entries: Vec<FqVector>) -> Result<Self> {
        let n = shape.size();
        if entries.len() != n {
            return Err(Error::SizeMismatch { left: n, right: entries.len() });
        }
        if entries.iter().any(|v| v.len() != n) {
            return Err(Error::DimensionMismatch(format!("entries must lie in F_q^{n}")));
        }
        let field = entries
            .first()
            .map(FqVector::field)
            .ok_or_else(|| Error::InvalidPartition("empty shape".into()))?;
        if entries.iter().any(|v| !std::ptr::eq(v.field(), field)) {
            return Err(Error::MixedFields);
        }
        let basis = FqMatrix::from_columns(field, &entries)?;
        let basis_inv = basis.inverse().map_err(|_| Error::LinearlyDependent)?;
        let (row_of, col_of) = cells(&shape);
        Ok(FqTableau { shape, entries, row_of, col_of, basis, basis_inv })
    }

    /// The tableau whose `i`-th entry is the `i`-th standard basis vector.
    pub fn standard(shape: &Partition, field: Field) -> Self {
        let n = shape.size();
        let entries = (0..n).map(|i| FqVector::unit(field, n, i)).collect();
        FqTableau::new(shape.clone(), entries).expect("standard basis is independent")
    }

    pub fn shape(&self) -> &Partition {
        &self.shape
    }

    pub fn n(&self) -> usize {
        self.entries.len()
    }

    pub fn field(&self) -> Field {
        self.basis.field()
    }

    pub fn entries(&self) -> &[FqVector] {
        &self.entries
    }

    pub fn entry(&self, i: usize) -> &FqVector {
        &self.entries[i]
    }

    pub fn row_of(&self, i: usize) -> usize {
        self.row_of[i]
    }

    pub fn column_of(&self, i: usize) -> usize {
        self.col_of[i]
    }

    pub fn num_columns(&self) -> usize {
        self.shape.part(0)
    }

    /// The matrix `A` with columns `v_1, …, v_n`.
    pub fn basis_matrix(&self) -> &FqMatrix {
        &self.basis
    }

    pub fn basis_inverse(&self) -> &FqMatrix {
        &self.basis_inv
    }

    /// `g · T`, entry by entry.
    pub fn act(&self, g: &FqMatrix) -> Result<FqTableau> {
        if !g.is_square() || g.rows() != self.n() {
            return Err(Error::DimensionMismatch(format!("{}x{} matrix acting on F_q^{}", g.rows(), g.cols(), self.n())));
        }
        let moved = g.mul(&self.basis)?;
        let entries = (0..self.n()).map(|j| moved.column(j)).collect();
        FqTableau::new(self.shape.clone(), entries)
    }

    /// The unique `g` with `g · other = self` (same shape required).
    pub fn transporter_from(&self, other: &FqTableau) -> Result<FqMatrix> {
        if self.shape != other.shape {
            return Err(Error::InvalidPartition(format!("shapes {} and {} differ", self.shape, other.shape)));
        }
        self.basis.mul(&other.basis_inv)
    }

    /// Pairs `(i, j)` with `v_i` directly left of `v_j`, sorted.
    pub fn x_pairs(&self) -> Vec<(usize, usize)> {
        let n = self.n();
        let mut pairs: Vec<(usize, usize)> = (0..n)
            .flat_map(|i| (0..n).map(move |j| (i, j)))
            .filter(|&(i, j)| self.row_of[i] == self.row_of[j] && self.col_of[i] + 1 == self.col_of[j])
            .collect();
        pairs.sort();
        pairs
    }

    /// `|U(T)| = q^d` where `d` counts pairs of entries in different columns.
    pub fn u_order(&self) -> u128 {
        let n = self.n();
        let d = (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).filter(|&(i, j)| self.col_of[i] < self.col_of[j]).count();
        (self.field().q() as u128).saturating_pow(d as u32)
    }

    /// All of `U(T) = A U_{λ'} A^{-1}`.
    pub fn u_elements(&self, budget: &Budget) -> Result<impl Iterator<Item = FqMatrix> + '_> {
        let inner: UnipotentIter = u_lambda_elements(&self.shape.conjugate(), self.field(), budget)?;
        Ok(inner.map(move |u| self.conjugate_in(&u)))
    }

    /// `A u A^{-1}`: the element acting on `B(T)` as `u` acts on the
    /// standard basis.
    pub fn conjugate_in(&self, u: &FqMatrix) -> FqMatrix {
        self.basis.mul(u).and_then(|m| m.mul(&self.basis_inv)).expect("square matrices of equal size")
    }

    /// `A^{-1} g A`.
    pub fn coordinates_of(&self, g: &FqMatrix) -> FqMatrix {
        self.basis_inv.mul(g).and_then(|m| m.mul(&self.basis)).expect("square matrices of equal size")
    }

    fn left_span(&self, j: usize) -> Subspace {
        let vs: Vec<FqVector> = (0..self.n()).filter(|&i| self.col_of[i] < self.col_of[j]).map(|i| self.entries[i].clone()).collect();
        Subspace::span(self.field(), self.n(), &vs).expect("entries have length n")
    }

    fn right_span(&self, j: usize) -> Subspace {
        let vs: Vec<FqVector> = (0..self.n()).filter(|&i| self.col_of[i] >= self.col_of[j]).map(|i| self.entries[i].clone()).collect();
        Subspace::span(self.field(), self.n(), &vs).expect("entries have length n")
    }

    fn check_dim(&self, g: &FqMatrix) -> Result<()> {
        if !g.is_square() || g.rows() != self.n() {
            return Err(Error::DimensionMismatch(format!("{}x{} matrix against a tableau in F_q^{}", g.rows(), g.cols(), self.n())));
        }
        Ok(())
    }

    /// Membership in `U(T)`: `g v_j − v_j` lies in the span of the entries
    /// strictly left of `v_j`, for every `j`.
    pub fn u_contains(&self, g: &FqMatrix) -> Result<bool> {
        self.check_dim(g)?;
        for j in 0..self.n() {
            let moved = g.mul_vec(&self.entries[j])?;
            if !self.left_span(j).contains(&moved.add(&self.entries[j].neg())) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Membership in `P(T)`: `g v_j` lies in the span of the entries
    /// nonstrictly right of `v_j`, for every `j`.
    pub fn p_contains(&self, g: &FqMatrix) -> Result<bool> {
        self.check_dim(g)?;
        if !g.is_invertible() {
            return Ok(false);
        }
        for j in 0..self.n() {
            if !self.right_span(j).contains(&g.mul_vec(&self.entries[j])?) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// `Σ_{(i,j) ∈ X(T)} c_{ij}(u)`, where `c_{ij}(u)` is the coefficient of
    /// `v_i` in `u v_j`.
    pub fn psi_exponent(&self, u: &FqMatrix) -> Result<FqScalar> {
        self.check_dim(u)?;
        let c = self.coordinates_of(u);
        let n = self.n();
        let in_u = (0..n).all(|i| {
            (0..n).all(|j| {
                let x = c.get(i, j);
                if i == j {
                    x == self.field().one()
                } else {
                    self.col_of[i] < self.col_of[j] || x.is_zero()
                }
            })
        });
        if !in_u {
            return Err(Error::NotInSubgroup("U(T)".into()));
        }
        Ok(self.x_pairs().into_iter().fold(self.field().zero(), |acc, (i, j)| acc + c.get(i, j)))
    }

    /// `ψ_T(u) = θ(Σ_{(i,j) ∈ X(T)} c_{ij}(u))`.
    pub fn psi(&self, u: &FqMatrix, k: &CoeffField) -> Result<KScalar> {
        k.theta(self.psi_exponent(u)?)
    }

    /// `T̄`: entries in odd-numbered columns negated.
    pub fn bar(&self) -> FqTableau {
        let entries = self
            .entries
            .iter()
            .enumerate()
            .map(|(i, v)| if self.col_of[i].is_multiple_of(2) { v.neg() } else { v.clone() })
            .collect();
        FqTableau::new(self.shape.clone(), entries).expect("negation preserves independence")
    }

    /// Parses `"shape | v1; v2; …; vn"`.
    pub fn parse(s: &str, field: Field) -> Result<FqTableau> {
        let (shape, vectors) = s.split_once('|').ok_or_else(|| Error::Parse(format!("missing '|' in {s:?}")))?;
        let shape: Partition = shape.trim().parse()?;
        let entries = vectors.split(';').map(|v| FqVector::parse(v.trim(), field)).collect::<Result<Vec<_>>>()?;
        FqTableau::new(shape, entries)
    }
}

impl fmt::Display for FqTableau {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let entries: Vec<String> = self.entries.iter().map(|v| v.to_string()).collect();
        write!(f, "{} | {}", self.shape, entries.join("; "))
    }
}

impl fmt::Debug for FqTableau {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[cfg(test)]
mod tests {
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    use super::*;
    use crate::finite_field::make_field;
    use crate::fq_linalg::{
        gl_enumerate, p_lambda_minus_contains, random_gl, random_u_lambda, u_lambda_contains,
    };

    fn part(s: &str) -> Partition {
        s.parse().unwrap()
    }

    #[test]
    fn construction_errors() {
        let f2 = make_field(2).unwrap();
        let e1 = FqVector::unit(f2, 2, 0);
        assert!(FqTableau::new(part("1"), vec![FqVector::unit(f2, 1, 0)]).is_ok());
        assert_eq!(FqTableau::new(part("2"), vec![e1.clone(), e1.clone()]).unwrap_err(), Error::LinearlyDependent);
        assert!(matches!(FqTableau::new(part("2"), vec![e1]), Err(Error::SizeMismatch { .. })));
    }

    #[test]
    fn worked_example_4221() {
        let f3 = make_field(3).unwrap();
        let lambda = part("4,2,2,1");
        let t = FqTableau::standard(&lambda, f3);
        let one_based: Vec<(usize, usize)> = t.x_pairs().into_iter().map(|(i, j)| (i + 1, j + 1)).collect();
        assert_eq!(one_based, vec![(1, 5), (2, 6), (3, 7), (5, 8), (8, 9)]);

        // T̄ = (−v1, −v2, −v3, −v4, v5, v6, v7, −v8, v9)
        let bar = t.bar();
        let signs = [-1i32, -1, -1, -1, 1, 1, 1, -1, 1];
        for (i, s) in signs.iter().enumerate() {
            let e = FqVector::unit(f3, 9, i);
            assert_eq!(bar.entry(i), &if *s < 0 { e.neg() } else { e });
        }

        // U(T) = U_{λ'} and P(T) = P_{λ'}^-, sampled since n = 9
        let conj = lambda.conjugate();
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        for _ in 0..200 {
            let mut g = random_u_lambda(&conj, f3, &mut rng);
            if rng.gen_bool(0.5) {
                let (i, j) = (rng.gen_range(0..9), rng.gen_range(0..9));
                g.set(i, j, f3.element(rng.gen_range(0..3)).unwrap());
            }
            assert_eq!(t.u_contains(&g).unwrap(), u_lambda_contains(&g, &conj).unwrap());
            if g.is_invertible() {
                assert_eq!(t.p_contains(&g).unwrap(), p_lambda_minus_contains(&g, &conj).unwrap());
                let gt = g.transpose();
                assert_eq!(t.p_contains(&gt).unwrap(), p_lambda_minus_contains(&gt, &conj).unwrap());
            }
        }
    }

    #[test]
    fn standard_p_matches_parabolic_exhaustively() {
        let f2 = make_field(2).unwrap();
        for lambda in [part("3"), part("2,1"), part("1,1,1")] {
            let t = FqTableau::standard(&lambda, f2);
            for g in gl_enumerate(3, f2, &Budget::default()).unwrap() {
                assert_eq!(t.p_contains(&g).unwrap(), p_lambda_minus_contains(&g, &lambda.conjugate()).unwrap());
                assert_eq!(t.u_contains(&g).unwrap(), u_lambda_contains(&g, &lambda.conjugate()).unwrap());
            }
        }
    }

    #[test]
    fn small_u_and_psi() {
        let f2 = make_field(2).unwrap();
        let k = CoeffField::cyclotomic(2).unwrap();
        let t = FqTableau::standard(&part("2"), f2);
        let us: Vec<FqMatrix> = t.u_elements(&Budget::default()).unwrap().collect();
        let e12 = FqMatrix::elementary(f2, 2, 0, 1, f2.one());
        assert_eq!(us, vec![FqMatrix::identity(f2, 2), e12.clone()]);
        assert!(k.theta(f2.zero()).unwrap().is_one());
        assert_eq!(t.psi(&e12, &k).unwrap(), k.from_int(-1));
        assert!(!t.p_contains(&e12).unwrap());
        assert!(matches!(t.psi(&e12.transpose(), &k), Err(Error::NotInSubgroup(_))));

        let moved = t.act(&e12).unwrap();
        assert_eq!(moved.entry(0), &FqVector::unit(f2, 2, 0));
        assert_eq!(moved.entry(1), &FqVector::parse("1,1", f2).unwrap());

        let column = FqTableau::standard(&part("1,1,1"), f2);
        assert!(column.x_pairs().is_empty());
        assert_eq!(column.u_elements(&Budget::default()).unwrap().count(), 1);
    }

    #[test]
    fn bar_properties() {
        let f2 = make_field(2).unwrap();
        let t2 = FqTableau::standard(&part("2,1"), f2);
        assert_eq!(t2.bar(), t2);
        let f3 = make_field(3).unwrap();
        let k = CoeffField::cyclotomic(3).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for lambda in [part("2,1"), part("3"), part("2,2")] {
            let t = FqTableau::standard(&lambda, f3).act(&random_gl(lambda.size(), f3, &mut rng)).unwrap();
            let bar = t.bar();
            assert_eq!(bar.bar(), t);
            for u in t.u_elements(&Budget::default()).unwrap() {
                assert!(bar.u_contains(&u).unwrap());
                let inv = u.inverse().unwrap();
                assert_eq!(bar.psi(&u, &k).unwrap(), t.psi(&inv, &k).unwrap());
            }
            // bar(T) = p·T with p ∈ P(T)
            assert!(t.p_contains(&bar.transporter_from(&t).unwrap()).unwrap());
        }
    }

    #[test]
    fn conjugation_equivariance() {
        let f3 = make_field(3).unwrap();
        let k = CoeffField::cyclotomic(3).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let lambda = part("2,1");
        let t = FqTableau::standard(&lambda, f3);
        for _ in 0..5 {
            let g = random_gl(3, f3, &mut rng);
            let gi = g.inverse().unwrap();
            let gt = t.act(&g).unwrap();
            for u in t.u_elements(&Budget::default()).unwrap() {
                let c = g.mul(&u).unwrap().mul(&gi).unwrap();
                assert!(gt.u_contains(&c).unwrap());
                assert_eq!(gt.psi(&c, &k).unwrap(), t.psi(&u, &k).unwrap());
            }
            assert_eq!(gt.u_elements(&Budget::default()).unwrap().count() as u128, gt.u_order());
        }
    }

    #[test]
    fn psi_is_multiplicative() {
        let f4 = make_field(4).unwrap();
        let k = CoeffField::cyclotomic(2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let lambda = part("2,1");
        let t = FqTableau::standard(&lambda, f4).act(&random_gl(3, f4, &mut rng)).unwrap();
        let us: Vec<FqMatrix> = t.u_elements(&Budget::default()).unwrap().collect();
        for _ in 0..100 {
            let a = &us[rng.gen_range(0..us.len())];
            let b = &us[rng.gen_range(0..us.len())];
            let ab = a.mul(b).unwrap();
            assert_eq!(t.psi(&ab, &k).unwrap(), t.psi(a, &k).unwrap().mul(&t.psi(b, &k).unwrap()));
        }
    }

    #[test]
    fn text_round_trip() {
        let f3 = make_field(3).unwrap();
        let t = FqTableau::parse("2,1 | 1,0,0; 0,2,0; 1,1,1", f3).unwrap();
        assert_eq!(t.to_string(), "2,1 | 1,0,0; 0,2,0; 1,1,1");
        assert_eq!(FqTableau::parse(&t.to_string(), f3).unwrap(), t);
        assert!(FqTableau::parse("2,1 1,0,0", f3).is_err());
    }
}
