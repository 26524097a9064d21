//! Arithmetic in `F_q`, `q = p^k`, as polynomials over `F_p` modulo a fixed
//! irreducible polynomial.
//!
//! An element is encoded as the integer `Σ c_i p^i` of its coefficient vector
//! (constant term least significant); this is also its text format. Addition
//! and multiplication tables are filled once per field from the polynomial
//! arithmetic, and every field lives in a process-wide registry keyed by `q`,
//! so scalars of the same `q` always share one [`FieldSpec`].

use std::collections::HashMap;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Mutex, OnceLock};

use crate::error::{Error, Result};

/// Default upper bound on `q` accepted by [`make_field`].
pub const DEFAULT_FIELD_BOUND: u64 = 16;

/// Largest `q` that fits the `u8` element encoding.
const HARD_FIELD_BOUND: u64 = 256;

#[derive(Debug)]
pub struct FieldSpec {
    p: u32,
    k: u32,
    q: u32,
    /// Monic modulus, coefficients `c_0..=c_k`.
    modulus: Vec<u32>,
    add: Vec<u8>,
    mul: Vec<u8>,
    neg: Vec<u8>,
    inv: Vec<u8>,
    trace: Vec<u8>,
    primitive: u8,
}

/// Handle to a registered field.
pub type Field = &'static FieldSpec;

impl FieldSpec {
    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    /// Monic modulus, constant term first.
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    #[inline]
    pub(crate) fn add_raw(&self, a: u8, b: u8) -> u8 {
        self.add[a as usize * self.q as usize + b as usize]
    }

    #[inline]
    pub(crate) fn mul_raw(&self, a: u8, b: u8) -> u8 {
        self.mul[a as usize * self.q as usize + b as usize]
    }

    #[inline]
    pub(crate) fn neg_raw(&self, a: u8) -> u8 {
        self.neg[a as usize]
    }

    #[inline]
    pub(crate) fn sub_raw(&self, a: u8, b: u8) -> u8 {
        self.add_raw(a, self.neg_raw(b))
    }

    /// Inverse of a nonzero raw element; 0 maps to 0.
    #[inline]
    pub(crate) fn inv_raw(&self, a: u8) -> u8 {
        self.inv[a as usize]
    }

    #[inline]
    pub(crate) fn trace_raw(&self, a: u8) -> u8 {
        self.trace[a as usize]
    }

    pub fn zero(&'static self) -> FqScalar {
        FqScalar { field: self, value: 0 }
    }

    pub fn one(&'static self) -> FqScalar {
        FqScalar { field: self, value: 1 }
    }

    /// Element with the given integer encoding.
    pub fn element(&'static self, value: u32) -> Result<FqScalar> {
        if value >= self.q {
            return Err(Error::Parse(format!("{value} is not an element of F_{}", self.q)));
        }
        Ok(FqScalar { field: self, value: value as u8 })
    }

    /// All elements in encoding order.
    pub fn elements(&'static self) -> impl Iterator<Item = FqScalar> {
        (0..self.q).map(move |v| FqScalar { field: self, value: v as u8 })
    }

    /// Cached generator of the multiplicative group.
    pub fn primitive_element(&'static self) -> FqScalar {
        FqScalar { field: self, value: self.primitive }
    }

    /// `1, x, …, x^{k-1}`: an `F_p`-basis of `F_q`.
    pub fn prime_basis(&'static self) -> Vec<FqScalar> {
        (0..self.k)
            .map(|i| FqScalar { field: self, value: self.p.pow(i) as u8 })
            .collect()
    }

    fn build(p: u32, k: u32, modulus: Vec<u32>) -> FieldSpec {
        let q = p.pow(k);
        let qs = q as usize;
        let digits = |v: u32| -> Vec<u32> {
            let mut d = vec![0; k as usize];
            let mut v = v;
            for slot in d.iter_mut() {
                *slot = v % p;
                v /= p;
            }
            d
        };
        let encode = |d: &[u32]| -> u32 { d.iter().rev().fold(0, |acc, &c| acc * p + c) };
        let poly_mul = |a: &[u32], b: &[u32]| -> Vec<u32> { poly_mul_mod(a, b, &modulus, p) };

        let mut add = vec![0u8; qs * qs];
        let mut mul = vec![0u8; qs * qs];
        for a in 0..q {
            let da = digits(a);
            for b in 0..q {
                let db = digits(b);
                let sum: Vec<u32> = da.iter().zip(&db).map(|(x, y)| (x + y) % p).collect();
                add[(a * q + b) as usize] = encode(&sum) as u8;
                mul[(a * q + b) as usize] = encode(&poly_mul(&da, &db)) as u8;
            }
        }
        let mut neg = vec![0u8; qs];
        let mut inv = vec![0u8; qs];
        for a in 0..qs {
            neg[a] = (0..qs).find(|&b| add[a * qs + b] == 0).unwrap() as u8;
            if a != 0 {
                inv[a] = (1..qs).find(|&b| mul[a * qs + b] == 1).unwrap() as u8;
            }
        }
        // Tr(a) = a + a^p + … + a^{p^{k-1}}
        let mut trace = vec![0u8; qs];
        for (a, slot) in trace.iter_mut().enumerate() {
            let mut frob = a as u8;
            let mut acc = 0u8;
            for _ in 0..k {
                acc = add[acc as usize * qs + frob as usize];
                let mut pw = 1u8;
                for _ in 0..p {
                    pw = mul[pw as usize * qs + frob as usize];
                }
                frob = pw;
            }
            *slot = acc;
        }
        let order = |a: usize| -> u32 {
            let mut x = a as u8;
            let mut n = 1;
            while x != 1 {
                x = mul[x as usize * qs + a];
                n += 1;
            }
            n
        };
        let primitive = (1..qs).find(|&a| order(a) == q - 1).unwrap() as u8;
        FieldSpec { p, k, q, modulus, add, mul, neg, inv, trace, primitive }
    }
}

fn poly_mul_mod(a: &[u32], b: &[u32], modulus: &[u32], p: u32) -> Vec<u32> {
    let k = modulus.len() - 1;
    let mut prod = vec![0u32; 2 * k.max(1)];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x * y) % p;
        }
    }
    for d in (k..prod.len()).rev() {
        let c = prod[d];
        if c != 0 {
            for (i, &m) in modulus.iter().enumerate().take(k) {
                let idx = d - k + i;
                prod[idx] = (prod[idx] + (p - c) * m % p) % p;
            }
            prod[d] = 0;
        }
    }
    prod.truncate(k);
    prod.resize(k, 0);
    prod
}

fn is_prime(n: u64) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d))
}

pub(crate) fn prime_power(q: u64) -> Option<(u32, u32)> {
    if q < 2 {
        return None;
    }
    let p = (2..=q).find(|d| q.is_multiple_of(*d))?;
    let (mut m, mut k) = (q, 0);
    while m % p == 0 {
        m /= p;
        k += 1;
    }
    (m == 1 && is_prime(p)).then_some((p as u32, k))
}

/// Remainder of `a` modulo the monic polynomial `m` over `F_p`.
fn poly_rem(a: &[u32], m: &[u32], p: u32) -> Vec<u32> {
    let mut r = a.to_vec();
    let dm = m.len() - 1;
    while r.len() > dm {
        let c = *r.last().unwrap();
        let shift = r.len() - 1 - dm;
        for (i, &mi) in m.iter().enumerate() {
            r[shift + i] = (r[shift + i] + (p - c) * mi % p) % p;
        }
        r.pop();
    }
    r
}

/// Monic polynomial of degree `deg` whose lower coefficients encode `code`.
fn monic_from_code(code: u32, deg: u32, p: u32) -> Vec<u32> {
    let mut c = Vec::with_capacity(deg as usize + 1);
    let mut v = code;
    for _ in 0..deg {
        c.push(v % p);
        v /= p;
    }
    c.push(1);
    c
}

/// Irreducibility by trial division with every monic polynomial of degree at
/// most `deg / 2`.
fn is_irreducible(poly: &[u32], p: u32) -> bool {
    let deg = poly.len() as u32 - 1;
    for d in 1..=deg / 2 {
        for code in 0..p.pow(d) {
            let f = monic_from_code(code, d, p);
            if poly_rem(poly, &f, p).iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

/// Smallest monic irreducible polynomial of degree `k`, ordering candidates
/// by the integer encoding of their lower coefficients.
fn smallest_irreducible(p: u32, k: u32) -> Vec<u32> {
    (0..p.pow(k))
        .map(|code| monic_from_code(code, k, p))
        .find(|f| is_irreducible(f, p))
        .expect("irreducible polynomials exist in every degree")
}

fn registry() -> &'static Mutex<HashMap<u32, Field>> {
    static REGISTRY: OnceLock<Mutex<HashMap<u32, Field>>> = OnceLock::new();
    REGISTRY.get_or_init(|| Mutex::new(HashMap::new()))
}

/// The field with `q` elements, `q ≤ 16`.
pub fn make_field(q: u64) -> Result<Field> {
    make_field_with_bound(q, DEFAULT_FIELD_BOUND)
}

pub fn make_field_with_bound(q: u64, bound: u64) -> Result<Field> {
    let (p, k) = prime_power(q).ok_or(Error::NotPrimePower(q))?;
    let bound = bound.min(HARD_FIELD_BOUND);
    if q > bound {
        return Err(Error::FieldTooLarge { q, bound });
    }
    let mut reg = registry().lock().unwrap_or_else(|e| e.into_inner());
    if let Some(f) = reg.get(&(q as u32)) {
        return Ok(*f);
    }
    let modulus = if k == 1 { vec![0, 1] } else { smallest_irreducible(p, k) };
    let spec: Field = Box::leak(Box::new(FieldSpec::build(p, k, modulus)));
    reg.insert(q as u32, spec);
    Ok(spec)
}

/// An element of `F_q`.
#[derive(Clone, Copy)]
pub struct FqScalar {
    field: Field,
    value: u8,
}

impl FqScalar {
    pub(crate) fn from_raw(field: Field, value: u8) -> Self {
        FqScalar { field, value }
    }

    pub fn field(&self) -> Field {
        self.field
    }

    /// Integer encoding.
    pub fn value(&self) -> u32 {
        self.value as u32
    }

    pub(crate) fn raw(&self) -> u8 {
        self.value
    }

    pub fn is_zero(&self) -> bool {
        self.value == 0
    }

    fn same_field(&self, other: &FqScalar) -> Result<()> {
        if std::ptr::eq(self.field, other.field) {
            Ok(())
        } else {
            Err(Error::MixedFields)
        }
    }

    pub fn checked_add(self, other: FqScalar) -> Result<FqScalar> {
        self.same_field(&other)?;
        Ok(FqScalar { field: self.field, value: self.field.add_raw(self.value, other.value) })
    }

    pub fn checked_sub(self, other: FqScalar) -> Result<FqScalar> {
        self.same_field(&other)?;
        Ok(FqScalar { field: self.field, value: self.field.sub_raw(self.value, other.value) })
    }

    pub fn checked_mul(self, other: FqScalar) -> Result<FqScalar> {
        self.same_field(&other)?;
        Ok(FqScalar { field: self.field, value: self.field.mul_raw(self.value, other.value) })
    }

    pub fn inv(self) -> Result<FqScalar> {
        if self.value == 0 {
            return Err(Error::DivisionByZero);
        }
        Ok(FqScalar { field: self.field, value: self.field.inv_raw(self.value) })
    }

    pub fn pow(self, mut e: u64) -> FqScalar {
        let mut base = self;
        let mut acc = self.field.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base;
            }
            base = base * base;
            e >>= 1;
        }
        acc
    }

    /// Multiplicative order of a nonzero element.
    pub fn order(self) -> Result<u64> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let mut x = self;
        let mut n = 1;
        while x.value != 1 {
            x = x * self;
            n += 1;
        }
        Ok(n)
    }
}

/// `Tr(a) = a + a^p + … + a^{p^{k-1}}`, returned as a residue mod `p`.
pub fn absolute_trace(a: FqScalar) -> u32 {
    a.field.trace_raw(a.value) as u32
}

impl PartialEq for FqScalar {
    fn eq(&self, other: &Self) -> bool {
        std::ptr::eq(self.field, other.field) && self.value == other.value
    }
}

impl Eq for FqScalar {}

impl Hash for FqScalar {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.field.q.hash(state);
        self.value.hash(state);
    }
}

impl fmt::Debug for FqScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}@F{}", self.value, self.field.q)
    }
}

impl fmt::Display for FqScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

impl Add for FqScalar {
    type Output = FqScalar;
    fn add(self, rhs: FqScalar) -> FqScalar {
        self.checked_add(rhs).expect("mixed fields")
    }
}

impl Sub for FqScalar {
    type Output = FqScalar;
    fn sub(self, rhs: FqScalar) -> FqScalar {
        self.checked_sub(rhs).expect("mixed fields")
    }
}

impl Mul for FqScalar {
    type Output = FqScalar;
    fn mul(self, rhs: FqScalar) -> FqScalar {
        self.checked_mul(rhs).expect("mixed fields")
    }
}

impl Neg for FqScalar {
    type Output = FqScalar;
    fn neg(self) -> FqScalar {
        FqScalar { field: self.field, value: self.field.neg_raw(self.value) }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_field_two() {
        let f = make_field(2).unwrap();
        assert_eq!((f.p(), f.k(), f.q()), (2, 1, 2));
        assert_eq!(f.one() + f.one(), f.zero());
    }

    #[test]
    fn f4_modulus_and_omega() {
        let f = make_field(4).unwrap();
        assert_eq!(f.modulus(), &[1, 1, 1]);
        let w = f.element(2).unwrap();
        assert_eq!(w * w.pow(2), f.one());
        assert_eq!(w * w, w + f.one());
    }

    #[test]
    fn chosen_moduli() {
        assert_eq!(make_field(8).unwrap().modulus(), &[1, 1, 0, 1]);
        assert_eq!(make_field(9).unwrap().modulus(), &[1, 0, 1]);
        assert_eq!(make_field(16).unwrap().modulus(), &[1, 1, 0, 0, 1]);
    }

    #[test]
    fn rejects_bad_orders() {
        assert_eq!(make_field(6).unwrap_err(), Error::NotPrimePower(6));
        assert_eq!(make_field(1).unwrap_err(), Error::NotPrimePower(1));
        assert!(matches!(make_field(32), Err(Error::FieldTooLarge { .. })));
        assert!(make_field_with_bound(32, 32).is_ok());
    }

    #[test]
    fn registry_shares_specs() {
        let a = make_field(9).unwrap();
        let b = make_field(9).unwrap();
        assert!(std::ptr::eq(a, b));
    }

    #[test]
    fn division_by_zero_and_mixed_fields() {
        let f2 = make_field(2).unwrap();
        let f3 = make_field(3).unwrap();
        assert_eq!(f2.zero().inv().unwrap_err(), Error::DivisionByZero);
        assert_eq!(f2.one().checked_add(f3.one()).unwrap_err(), Error::MixedFields);
        assert_eq!(f2.element(2).unwrap_err(), Error::Parse("2 is not an element of F_2".into()));
    }

    #[test]
    fn trace_examples() {
        let f = make_field(4).unwrap();
        assert_eq!(absolute_trace(f.zero()), 0);
        assert_eq!(absolute_trace(f.one()), 0);
        assert_eq!(absolute_trace(f.element(2).unwrap()), 1);
    }

    #[test]
    fn field_axioms_and_cyclic_group() {
        for q in [2, 3, 4, 5, 7, 8, 9, 11, 13, 16] {
            let f = make_field(q).unwrap();
            let g = f.primitive_element();
            assert_eq!(g.order().unwrap(), q - 1, "q = {q}");
            for a in f.elements() {
                assert_eq!(a + (-a), f.zero());
                if !a.is_zero() {
                    assert_eq!(a * a.inv().unwrap(), f.one());
                }
                for b in f.elements() {
                    assert_eq!(a + b, b + a);
                    assert_eq!(a * b, b * a);
                    assert_eq!(absolute_trace(a + b), (absolute_trace(a) + absolute_trace(b)) % f.p());
                    for c in f.elements() {
                        assert_eq!(a * (b + c), a * b + a * c);
                        assert_eq!((a * b) * c, a * (b * c));
                    }
                }
            }
            assert!(f.elements().any(|a| absolute_trace(a) != 0));
        }
    }
}
