//! The coefficient field `K`: either the cyclotomic field `Q(ζ_p)` with exact
//! rational coefficients, or a prime field `F_ℓ` with `p | ℓ - 1`. Both hold a
//! fixed primitive `p`-th root of unity `ζ`, and `θ(α) = ζ^{Tr(α)}` is the
//! additive character of `F_q` used throughout.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::finite_field::{absolute_trace, FqScalar};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CoeffMode {
    Cyclotomic,
    Modular { ell: u64 },
}

impl fmt::Display for CoeffMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CoeffMode::Cyclotomic => f.write_str("cyclotomic"),
            CoeffMode::Modular { ell } => write!(f, "mod:{ell}"),
        }
    }
}

impl FromStr for CoeffMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "cyclotomic" {
            return Ok(CoeffMode::Cyclotomic);
        }
        let ell = s
            .strip_prefix("mod:")
            .and_then(|l| l.parse::<u64>().ok())
            .ok_or_else(|| Error::Parse(format!("coefficient mode {s:?} is neither cyclotomic nor mod:L")))?;
        Ok(CoeffMode::Modular { ell })
    }
}

/// The field `K` together with its fixed `p`-th root of unity.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CoeffField {
    p: u32,
    mode: CoeffMode,
    /// Residue of `ζ` in modular mode.
    zeta: u64,
}

fn is_prime(n: u64) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d))
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = (acc as u128 * b as u128 % m as u128) as u64;
        }
        b = (b as u128 * b as u128 % m as u128) as u64;
        e >>= 1;
    }
    acc
}

impl CoeffField {
    pub fn new(mode: CoeffMode, p: u32) -> Result<Self> {
        if !is_prime(p as u64) {
            return Err(Error::InvalidCoeffField(format!("{p} is not prime")));
        }
        match mode {
            CoeffMode::Cyclotomic => Ok(CoeffField { p, mode, zeta: 0 }),
            CoeffMode::Modular { ell } => {
                if !is_prime(ell) {
                    return Err(Error::InvalidCoeffField(format!("{ell} is not prime")));
                }
                if ell == p as u64 {
                    return Err(Error::InvalidCoeffField(format!("characteristic {ell} equals p")));
                }
                if (ell - 1) % p as u64 != 0 {
                    return Err(Error::InvalidCoeffField(format!("{p} does not divide {ell} - 1")));
                }
                // smallest element of multiplicative order exactly p
                let zeta = (2..ell)
                    .find(|&z| pow_mod(z, p as u64, ell) == 1)
                    .expect("F_ell has a primitive p-th root when p | ell - 1");
                Ok(CoeffField { p, mode, zeta })
            }
        }
    }

    pub fn cyclotomic(p: u32) -> Result<Self> {
        CoeffField::new(CoeffMode::Cyclotomic, p)
    }

    pub fn modular(p: u32, ell: u64) -> Result<Self> {
        CoeffField::new(CoeffMode::Modular { ell }, p)
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn mode(&self) -> CoeffMode {
        self.mode
    }

    /// Characteristic of `K` (0 in cyclotomic mode).
    pub fn characteristic(&self) -> u64 {
        match self.mode {
            CoeffMode::Cyclotomic => 0,
            CoeffMode::Modular { ell } => ell,
        }
    }

    pub fn zero(&self) -> KScalar {
        self.from_int(0)
    }

    pub fn one(&self) -> KScalar {
        self.from_int(1)
    }

    pub fn from_int(&self, v: i64) -> KScalar {
        self.from_rational(BigRational::from_integer(BigInt::from(v)))
            .expect("integers embed in every mode")
    }

    /// Image of a rational; fails in modular mode when the denominator is
    /// divisible by `ℓ`.
    pub fn from_rational(&self, r: BigRational) -> Result<KScalar> {
        match self.mode {
            CoeffMode::Cyclotomic => {
                let mut coeffs = vec![BigRational::zero(); self.p as usize - 1];
                coeffs[0] = r;
                Ok(KScalar::Cyclotomic(coeffs))
            }
            CoeffMode::Modular { ell } => {
                let m = BigInt::from(ell);
                let reduce = |x: &BigInt| -> u64 { ((x % &m + &m) % &m).to_u64().unwrap() };
                let num = reduce(r.numer());
                let den = reduce(r.denom());
                if den == 0 {
                    return Err(Error::DivisionByZero);
                }
                let value = (num as u128 * pow_mod(den, ell - 2, ell) as u128 % ell as u128) as u64;
                Ok(KScalar::Modular { ell, value })
            }
        }
    }

    /// `ζ^k`.
    pub fn zeta_pow(&self, k: u64) -> KScalar {
        let k = (k % self.p as u64) as usize;
        match self.mode {
            CoeffMode::Cyclotomic => {
                let len = self.p as usize - 1;
                let mut coeffs = vec![BigRational::zero(); len];
                if k < len {
                    coeffs[k] = BigRational::one();
                } else {
                    // ζ^{p-1} = -(1 + ζ + … + ζ^{p-2})
                    coeffs.iter_mut().for_each(|c| *c = -BigRational::one());
                }
                KScalar::Cyclotomic(coeffs)
            }
            CoeffMode::Modular { ell } => KScalar::Modular { ell, value: pow_mod(self.zeta, k as u64, ell) },
        }
    }

    pub fn zeta(&self) -> KScalar {
        self.zeta_pow(1)
    }

    /// `θ(α) = ζ^{Tr(α)}`.
    pub fn theta(&self, alpha: FqScalar) -> Result<KScalar> {
        if alpha.field().p() != self.p {
            return Err(Error::MixedFields);
        }
        Ok(self.zeta_pow(absolute_trace(alpha) as u64))
    }

    /// Parses the text format of [`KScalar`].
    pub fn parse(&self, s: &str) -> Result<KScalar> {
        match self.mode {
            CoeffMode::Modular { ell } => {
                let v: u64 = s.trim().parse().map_err(|_| Error::Parse(format!("bad residue {s:?}")))?;
                if v >= ell {
                    return Err(Error::Parse(format!("{v} is not reduced mod {ell}")));
                }
                Ok(KScalar::Modular { ell, value: v })
            }
            CoeffMode::Cyclotomic => {
                let mut acc = self.zero();
                for term in s.split(" + ") {
                    let term = term.trim();
                    let (coef, power) = match term.split_once("*z") {
                        None => (term, 0u64),
                        Some((c, rest)) => {
                            let k = if rest.is_empty() {
                                1
                            } else {
                                rest.strip_prefix('^')
                                    .and_then(|k| k.parse().ok())
                                    .ok_or_else(|| Error::Parse(format!("bad power in {term:?}")))?
                            };
                            (c, k)
                        }
                    };
                    let r: BigRational =
                        coef.parse().map_err(|_| Error::Parse(format!("bad rational {coef:?}")))?;
                    let t = self.from_rational(r)?.mul(&self.zeta_pow(power));
                    acc = acc.add(&t);
                }
                Ok(acc)
            }
        }
    }
}

/// An element of `K`.
///
/// Cyclotomic elements are coefficient vectors on `1, ζ, …, ζ^{p-2}`, which
/// is a basis of `Q(ζ_p)`; the vector length therefore determines `p`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum KScalar {
    Cyclotomic(Vec<BigRational>),
    Modular { ell: u64, value: u64 },
}

impl KScalar {
    fn same_field(&self, other: &KScalar) -> Result<()> {
        match (self, other) {
            (KScalar::Cyclotomic(a), KScalar::Cyclotomic(b)) if a.len() == b.len() => Ok(()),
            (KScalar::Modular { ell: a, .. }, KScalar::Modular { ell: b, .. }) if a == b => Ok(()),
            _ => Err(Error::MixedFields),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            KScalar::Cyclotomic(c) => c.iter().all(Zero::is_zero),
            KScalar::Modular { value, .. } => *value == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            KScalar::Cyclotomic(c) => c[0].is_one() && c[1..].iter().all(Zero::is_zero),
            KScalar::Modular { value, .. } => *value == 1,
        }
    }

    pub fn checked_add(&self, other: &KScalar) -> Result<KScalar> {
        self.same_field(other)?;
        Ok(match (self, other) {
            (KScalar::Cyclotomic(a), KScalar::Cyclotomic(b)) => {
                KScalar::Cyclotomic(a.iter().zip(b).map(|(x, y)| x + y).collect())
            }
            (KScalar::Modular { ell, value: a }, KScalar::Modular { value: b, .. }) => {
                KScalar::Modular { ell: *ell, value: ((*a as u128 + *b as u128) % *ell as u128) as u64 }
            }
            _ => unreachable!(),
        })
    }

    pub fn add(&self, other: &KScalar) -> KScalar {
        self.checked_add(other).expect("mixed coefficient fields")
    }

    pub fn neg(&self) -> KScalar {
        match self {
            KScalar::Cyclotomic(a) => KScalar::Cyclotomic(a.iter().map(|x| -x).collect()),
            KScalar::Modular { ell, value } => KScalar::Modular { ell: *ell, value: (ell - value) % ell },
        }
    }

    pub fn sub(&self, other: &KScalar) -> KScalar {
        self.add(&other.neg())
    }

    pub fn checked_mul(&self, other: &KScalar) -> Result<KScalar> {
        self.same_field(other)?;
        Ok(match (self, other) {
            (KScalar::Cyclotomic(a), KScalar::Cyclotomic(b)) => KScalar::Cyclotomic(cyclo_mul(a, b)),
            (KScalar::Modular { ell, value: a }, KScalar::Modular { value: b, .. }) => {
                KScalar::Modular { ell: *ell, value: (*a as u128 * *b as u128 % *ell as u128) as u64 }
            }
            _ => unreachable!(),
        })
    }

    pub fn mul(&self, other: &KScalar) -> KScalar {
        self.checked_mul(other).expect("mixed coefficient fields")
    }

    pub fn inv(&self) -> Result<KScalar> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(match self {
            KScalar::Cyclotomic(a) => {
                // a^{-1} = Π_{k=2}^{p-1} σ_k(a) / N(a)
                let p = a.len() as u64 + 1;
                let mut prod = unit(a.len());
                for k in 2..p {
                    prod = cyclo_mul(&prod, &galois(a, k));
                }
                let norm = cyclo_mul(a, &prod);
                debug_assert!(norm[1..].iter().all(Zero::is_zero));
                let n = norm[0].clone();
                KScalar::Cyclotomic(prod.iter().map(|c| c / &n).collect())
            }
            KScalar::Modular { ell, value } => KScalar::Modular { ell: *ell, value: pow_mod(*value, ell - 2, *ell) },
        })
    }

    pub fn div(&self, other: &KScalar) -> Result<KScalar> {
        self.checked_mul(&other.inv()?)
    }

    pub fn pow(&self, mut e: u64) -> KScalar {
        let mut base = self.clone();
        let mut acc = match self {
            KScalar::Cyclotomic(a) => KScalar::Cyclotomic(unit(a.len())),
            KScalar::Modular { ell, .. } => KScalar::Modular { ell: *ell, value: 1 % ell },
        };
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    /// The automorphism `ζ ↦ ζ^{-1}`; the identity in modular mode, where it
    /// is only used on values of characters.
    pub fn conj(&self) -> KScalar {
        match self {
            KScalar::Cyclotomic(a) => KScalar::Cyclotomic(galois(a, a.len() as u64)),
            m => m.clone(),
        }
    }

    /// The rational value, if the element lies in the prime field `Q`.
    pub fn as_rational(&self) -> Option<BigRational> {
        match self {
            KScalar::Cyclotomic(a) if a[1..].iter().all(Zero::is_zero) => Some(a[0].clone()),
            _ => None,
        }
    }

    /// The value as a non-negative integer (cyclotomic mode only).
    pub fn as_nonneg_integer(&self) -> Result<u64> {
        self.as_rational()
            .filter(|r| r.is_integer() && !r.is_negative())
            .and_then(|r| r.to_integer().to_u64())
            .ok_or_else(|| Error::NotAnInteger(self.to_string()))
    }

    /// Largest bit length among numerators and denominators.
    pub fn bits(&self) -> u64 {
        match self {
            KScalar::Cyclotomic(a) => a.iter().map(|c| c.numer().bits().max(c.denom().bits())).max().unwrap_or(0),
            KScalar::Modular { ell, .. } => 64 - ell.leading_zeros() as u64,
        }
    }
}

fn unit(len: usize) -> Vec<BigRational> {
    let mut u = vec![BigRational::zero(); len];
    u[0] = BigRational::one();
    u
}

/// Reduces a coefficient vector of length `p` (powers `0..p` of `ζ`, using
/// `ζ^p = 1`) to the basis `1, …, ζ^{p-2}`.
fn reduce_full(mut full: Vec<BigRational>) -> Vec<BigRational> {
    let top = full.pop().unwrap();
    if !top.is_zero() {
        full.iter_mut().for_each(|c| *c -= &top);
    }
    full
}

fn cyclo_mul(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let p = a.len() + 1;
    let mut full = vec![BigRational::zero(); p];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            if y.is_zero() {
                continue;
            }
            full[(i + j) % p] += x * y;
        }
    }
    reduce_full(full)
}

/// `σ_k : ζ ↦ ζ^k`.
fn galois(a: &[BigRational], k: u64) -> Vec<BigRational> {
    let p = a.len() + 1;
    let mut full = vec![BigRational::zero(); p];
    for (i, x) in a.iter().enumerate() {
        full[(i as u64 * k % p as u64) as usize] += x;
    }
    reduce_full(full)
}

impl fmt::Display for KScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            KScalar::Modular { value, .. } => write!(f, "{value}"),
            KScalar::Cyclotomic(a) => {
                let terms: Vec<String> = a
                    .iter()
                    .enumerate()
                    .filter(|(_, c)| !c.is_zero())
                    .map(|(i, c)| match i {
                        0 => c.to_string(),
                        1 => format!("{c}*z"),
                        _ => format!("{c}*z^{i}"),
                    })
                    .collect();
                if terms.is_empty() {
                    f.write_str("0")
                } else {
                    f.write_str(&terms.join(" + "))
                }
            }
        }
    }
}

impl fmt::Debug for KScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Dense matrix over `K`.
#[derive(Clone, PartialEq, Eq)]
pub struct KMatrix {
    field: CoeffField,
    rows: usize,
    cols: usize,
    data: Vec<KScalar>,
}

impl KMatrix {
    pub fn zero(field: &CoeffField, rows: usize, cols: usize) -> Self {
        KMatrix { field: field.clone(), rows, cols, data: vec![field.zero(); rows * cols] }
    }

    pub fn identity(field: &CoeffField, n: usize) -> Self {
        let mut m = KMatrix::zero(field, n, n);
        for i in 0..n {
            m.data[i * n + i] = field.one();
        }
        m
    }

    pub fn from_rows(field: &CoeffField, rows: Vec<Vec<KScalar>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        Ok(KMatrix { field: field.clone(), rows: r, cols: c, data: rows.into_iter().flatten().collect() })
    }

    pub fn field(&self) -> &CoeffField {
        &self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &KScalar {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: KScalar) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[KScalar] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn mul(&self, other: &KMatrix) -> Result<KMatrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = KMatrix::zero(&self.field, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self.data[i * self.cols + k];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other.data[k * other.cols + j];
                    if b.is_zero() {
                        continue;
                    }
                    let idx = i * other.cols + j;
                    out.data[idx] = out.data[idx].add(&a.mul(b));
                }
            }
        }
        Ok(out)
    }

    pub fn trace(&self) -> KScalar {
        (0..self.rows.min(self.cols)).fold(self.field.zero(), |acc, i| acc.add(self.get(i, i)))
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| (0..self.cols).all(|j| {
                let x = self.get(i, j);
                if i == j {
                    x.is_one()
                } else {
                    x.is_zero()
                }
            }))
    }

    /// Reduced row echelon form, returning the pivot columns.
    pub fn rref(&self) -> (KMatrix, Vec<usize>) {
        let mut m = self.clone();
        let (rows, cols) = (m.rows, m.cols);
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..cols {
            if r == rows {
                break;
            }
            let Some(piv) = (r..rows).find(|&i| !m.data[i * cols + c].is_zero()) else {
                continue;
            };
            if piv != r {
                for j in 0..cols {
                    m.data.swap(piv * cols + j, r * cols + j);
                }
            }
            let inv = m.data[r * cols + c].inv().expect("pivot is nonzero");
            for j in c..cols {
                m.data[r * cols + j] = m.data[r * cols + j].mul(&inv);
            }
            for i in 0..rows {
                if i == r || m.data[i * cols + c].is_zero() {
                    continue;
                }
                let factor = m.data[i * cols + c].clone();
                for j in c..cols {
                    let v = factor.mul(&m.data[r * cols + j]);
                    m.data[i * cols + j] = m.data[i * cols + j].sub(&v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of `{x : M x = 0}`.
    pub fn kernel(&self) -> Vec<Vec<KScalar>> {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut x = vec![self.field.zero(); self.cols];
                x[f] = self.field.one();
                for (row, &pc) in pivots.iter().enumerate() {
                    x[pc] = r.get(row, f).neg();
                }
                x
            })
            .collect()
    }

    pub fn determinant(&self) -> Result<KScalar> {
        if self.rows != self.cols {
            return Err(Error::DimensionMismatch("determinant of a non-square matrix".into()));
        }
        let n = self.rows;
        let mut m = self.data.clone();
        let mut det = self.field.one();
        for c in 0..n {
            let Some(piv) = (c..n).find(|&i| !m[i * n + c].is_zero()) else {
                return Ok(self.field.zero());
            };
            if piv != c {
                for j in 0..n {
                    m.swap(piv * n + j, c * n + j);
                }
                det = det.neg();
            }
            let pv = m[c * n + c].clone();
            det = det.mul(&pv);
            let inv = pv.inv()?;
            for i in c + 1..n {
                if m[i * n + c].is_zero() {
                    continue;
                }
                let factor = m[i * n + c].mul(&inv);
                for j in c..n {
                    let v = factor.mul(&m[c * n + j]);
                    m[i * n + j] = m[i * n + j].sub(&v);
                }
            }
        }
        Ok(det)
    }
}

impl fmt::Debug for KMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = (0..self.rows)
            .map(|i| self.row(i).iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", "))
            .collect();
        write!(f, "[{}]", rows.join("; "))
    }
}

#[cfg(test)]
mod tests {
    use proptest::prelude::*;

    use super::*;
    use crate::finite_field::make_field;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn make_examples() {
        let q = CoeffField::cyclotomic(2).unwrap();
        assert_eq!(q.zeta(), q.from_int(-1));
        let f3 = CoeffField::modular(2, 3).unwrap();
        assert_eq!(f3.zeta(), KScalar::Modular { ell: 3, value: 2 });
        assert!(matches!(CoeffField::modular(3, 5), Err(Error::InvalidCoeffField(_))));
        assert!(matches!(CoeffField::modular(3, 3), Err(Error::InvalidCoeffField(_))));
        assert!(CoeffField::modular(2, 9).is_err());
        assert_eq!(CoeffField::modular(3, 7).unwrap().zeta(), KScalar::Modular { ell: 7, value: 2 });
    }

    #[test]
    fn mode_text_format() {
        assert_eq!("cyclotomic".parse::<CoeffMode>().unwrap(), CoeffMode::Cyclotomic);
        assert_eq!("mod:7".parse::<CoeffMode>().unwrap(), CoeffMode::Modular { ell: 7 });
        assert!("mod:x".parse::<CoeffMode>().is_err());
        assert_eq!(CoeffMode::Modular { ell: 7 }.to_string(), "mod:7");
    }

    #[test]
    fn cyclotomic_relations() {
        for p in [2u32, 3, 5, 7] {
            let k = CoeffField::cyclotomic(p).unwrap();
            let sum = (1..p as u64).fold(k.zero(), |acc, i| acc.add(&k.zeta_pow(i)));
            assert_eq!(sum, k.from_int(-1), "p = {p}");
            assert!(k.zeta().mul(&k.zeta_pow(p as u64 - 1)).is_one());
            assert!(k.zeta().pow(p as u64).is_one());
            assert!(k.one().add(&k.from_int(-1)).is_zero());
        }
    }

    #[test]
    fn inverse_and_division_by_zero() {
        let k = CoeffField::cyclotomic(5).unwrap();
        let a = k.from_int(2).add(&k.zeta_pow(3)).add(&k.from_rational(rat(1, 3)).unwrap().mul(&k.zeta()));
        assert!(a.mul(&a.inv().unwrap()).is_one());
        assert_eq!(k.zero().inv().unwrap_err(), Error::DivisionByZero);
        let m = CoeffField::modular(3, 7).unwrap();
        assert_eq!(m.zero().inv().unwrap_err(), Error::DivisionByZero);
        assert!(m.from_int(3).mul(&m.from_int(3).inv().unwrap()).is_one());
    }

    #[test]
    fn theta_examples() {
        let f2 = make_field(2).unwrap();
        let f4 = make_field(4).unwrap();
        let k = CoeffField::cyclotomic(2).unwrap();
        assert!(k.theta(f2.zero()).unwrap().is_one());
        assert_eq!(k.theta(f2.one()).unwrap(), k.from_int(-1));
        assert_eq!(k.theta(f4.element(2).unwrap()).unwrap(), k.from_int(-1));
        let k3 = CoeffField::cyclotomic(3).unwrap();
        assert_eq!(k3.theta(f2.one()).unwrap_err(), Error::MixedFields);
    }

    #[test]
    fn theta_is_a_nontrivial_character() {
        for q in [2u64, 3, 4, 5, 7, 8, 9] {
            let f = make_field(q).unwrap();
            let modes = [
                CoeffField::cyclotomic(f.p()).unwrap(),
                CoeffField::modular(f.p(), (2..).map(|m| m * f.p() as u64 + 1).find(|&l| is_prime(l)).unwrap()).unwrap(),
            ];
            for k in modes {
                let mut sum = k.zero();
                for a in f.elements() {
                    sum = sum.add(&k.theta(a).unwrap());
                    for b in f.elements() {
                        assert_eq!(k.theta(a + b).unwrap(), k.theta(a).unwrap().mul(&k.theta(b).unwrap()));
                    }
                }
                assert!(sum.is_zero(), "q = {q}, {:?}", k.mode());
                assert!(f.elements().any(|a| !k.theta(a).unwrap().is_one()));
            }
        }
    }

    #[test]
    fn text_format() {
        let k = CoeffField::cyclotomic(3).unwrap();
        let a = k.from_rational(rat(-3, 2)).unwrap().add(&k.zeta().mul(&k.from_int(4)));
        assert_eq!(a.to_string(), "-3/2 + 4*z");
        assert_eq!(k.parse("-3/2 + 4*z").unwrap(), a);
        assert_eq!(k.parse("1*z^2").unwrap(), k.zeta_pow(2));
        assert_eq!(k.zero().to_string(), "0");
        let m = CoeffField::modular(2, 7).unwrap();
        assert_eq!(m.parse("5").unwrap().to_string(), "5");
        assert!(m.parse("9").is_err());
    }

    #[test]
    fn kmatrix_rank_kernel_det() {
        let k = CoeffField::cyclotomic(2).unwrap();
        let rows = vec![
            vec![k.from_int(1), k.from_int(2), k.from_int(3)],
            vec![k.from_int(2), k.from_int(4), k.from_int(6)],
            vec![k.from_int(0), k.from_int(1), k.from_int(1)],
        ];
        let m = KMatrix::from_rows(&k, rows).unwrap();
        assert_eq!(m.rank(), 2);
        let ker = m.kernel();
        assert_eq!(ker.len(), 1);
        let x = KMatrix::from_rows(&k, ker.iter().map(|v| v.to_vec()).collect()).unwrap();
        let prod = m.mul(&transpose(&x)).unwrap();
        assert!((0..3).all(|i| prod.get(i, 0).is_zero()));
        assert!(m.determinant().unwrap().is_zero());
        let id = KMatrix::identity(&k, 3);
        assert!(id.determinant().unwrap().is_one());
        assert_eq!(id.trace(), k.from_int(3));
    }

    fn transpose(m: &KMatrix) -> KMatrix {
        let mut t = KMatrix::zero(m.field(), m.cols(), m.rows());
        for i in 0..m.rows() {
            for j in 0..m.cols() {
                t.set(j, i, m.get(i, j).clone());
            }
        }
        t
    }

    fn arb_cyclo(p: u32) -> impl Strategy<Value = KScalar> {
        prop::collection::vec((-9i64..10, 1i64..5), p as usize - 1).prop_map(move |cs| {
            KScalar::Cyclotomic(cs.into_iter().map(|(n, d)| rat(n, d)).collect())
        })
    }

    proptest! {
        #[test]
        fn conj_is_a_field_automorphism(a in arb_cyclo(5), b in arb_cyclo(5)) {
            prop_assert_eq!(a.add(&b).conj(), a.conj().add(&b.conj()));
            prop_assert_eq!(a.mul(&b).conj(), a.conj().mul(&b.conj()));
            prop_assert_eq!(a.conj().conj(), a.clone());
        }

        #[test]
        fn field_axioms_in_q_zeta3(a in arb_cyclo(3), b in arb_cyclo(3), c in arb_cyclo(3)) {
            prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
            prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
            if !a.is_zero() {
                prop_assert!(a.mul(&a.inv().unwrap()).is_one());
            }
        }
    }
}
