//! Characters of the modules `S^λ`, inner products of class functions, and
//! multiplicities of `χ^μ` in parabolic and Gelfand–Graev characters,
//! all computed by Frobenius reciprocity as sums over a subgroup.

use std::collections::HashMap;
use std::fs::{self, File, OpenOptions};
use std::io::{Read, Write};
use std::path::{Path, PathBuf};
use std::sync::{Mutex, RwLock};

use crate::budget::Budget;
use crate::coeff_field::{CoeffField, CoeffMode, KMatrix, KScalar};
use crate::combinatorics::Partition;
use crate::error::{Error, Result};
use crate::finite_field::Field;
use crate::flag_modules::{enumerate_flags, permute, s_basis, FlagSpace, SpanBasis};
use crate::fq_linalg::{gl_enumerate, gl_order, p_lambda_elements, p_lambda_order, u_lambda_elements, FqMatrix};
use crate::tableaux::FqTableau;

/// `S^λ` together with the flag basis of `M^λ` it lives in.
#[derive(Debug, Clone)]
pub struct UnipotentModule {
    space: FlagSpace,
    basis: SpanBasis,
}

impl UnipotentModule {
    pub fn new(shape: &Partition, field: Field, k: &CoeffField, budget: &Budget) -> Result<Self> {
        let space = enumerate_flags(shape, field, budget)?;
        let basis = s_basis(&space, k, budget)?;
        Ok(UnipotentModule { space, basis })
    }

    pub fn from_parts(space: FlagSpace, basis: SpanBasis) -> Self {
        UnipotentModule { space, basis }
    }

    pub fn shape(&self) -> &Partition {
        self.space.shape()
    }

    pub fn space(&self) -> &FlagSpace {
        &self.space
    }

    pub fn basis(&self) -> &SpanBasis {
        &self.basis
    }

    pub fn coeff_field(&self) -> &CoeffField {
        self.basis.field()
    }

    pub fn dim(&self) -> usize {
        self.basis.rank()
    }

    /// Matrix of `g` on the echelon basis: column `r` holds the coordinates
    /// of `g · b_r`.
    pub fn action_matrix(&self, g: &FqMatrix) -> Result<KMatrix> {
        let k = self.coeff_field();
        let perm = self.space.permutation(g)?;
        let d = self.dim();
        let mut m = KMatrix::zero(k, d, d);
        for (r, row) in self.basis.rows().iter().enumerate() {
            let coords = self.basis.coordinates(&permute(row, &perm, k))?;
            for (s, c) in coords.into_iter().enumerate() {
                m.set(s, r, c);
            }
        }
        Ok(m)
    }

    /// `χ_{S^λ}(g)`. The diagonal entry for row `r` is the entry of `g·b_r`
    /// at the pivot flag `p_r`, which is the entry of `b_r` at `g^{-1}·p_r`.
    pub fn char_value(&self, g: &FqMatrix) -> Result<KScalar> {
        let k = self.coeff_field();
        let g_inv = g.inverse()?;
        let mut acc = k.zero();
        for (row, &p) in self.basis.rows().iter().zip(self.basis.pivots()) {
            acc = acc.add(&row[self.space.image_index(p, &g_inv)?]);
        }
        Ok(acc)
    }
}

/// A `K`-valued class function on `GL_n(F_q)`.
pub trait ClassFunction {
    fn value(&self, g: &FqMatrix) -> Result<KScalar>;
}

impl ClassFunction for UnipotentModule {
    fn value(&self, g: &FqMatrix) -> Result<KScalar> {
        self.char_value(g)
    }
}

/// The trivial character.
pub struct TrivialCharacter(pub CoeffField);

impl ClassFunction for TrivialCharacter {
    fn value(&self, _g: &FqMatrix) -> Result<KScalar> {
        Ok(self.0.one())
    }
}

/// A character of `S^λ` that consults a persistent cache first.
pub struct CachedCharacter<'a> {
    pub module: &'a UnipotentModule,
    pub cache: Option<&'a CharCache>,
}

impl ClassFunction for CachedCharacter<'_> {
    fn value(&self, g: &FqMatrix) -> Result<KScalar> {
        let Some(cache) = self.cache else {
            return self.module.char_value(g);
        };
        let shape = self.module.shape();
        if let Some(v) = cache.get(g, shape) {
            return Ok(v);
        }
        let v = self.module.char_value(g)?;
        cache.insert(g, shape, &v)?;
        Ok(v)
    }
}

fn order_scalar(k: &CoeffField, order: u128) -> Result<KScalar> {
    let v = i64::try_from(order).map_err(|_| Error::NotAnInteger(format!("group order {order} overflows")))?;
    k.from_int(v).inv()
}

/// `⟨f1, f2⟩ = |G|^{-1} Σ_{g ∈ G} f1(g) f2(g^{-1})`.
pub fn inner_product(
    f1: &dyn ClassFunction,
    f2: &dyn ClassFunction,
    n: usize,
    field: Field,
    k: &CoeffField,
    budget: &Budget,
) -> Result<KScalar> {
    let mut acc = k.zero();
    for g in gl_enumerate(n, field, budget)? {
        acc = acc.add(&f1.value(&g)?.mul(&f2.value(&g.inverse()?)?));
    }
    Ok(acc.mul(&order_scalar(k, gl_order(n, field.q() as u64))?))
}

/// The matrix `[⟨f_i, f_j⟩]`, evaluating each function once per element.
pub fn inner_product_matrix(
    fs: &[&dyn ClassFunction],
    n: usize,
    field: Field,
    k: &CoeffField,
    budget: &Budget,
) -> Result<Vec<Vec<KScalar>>> {
    let elements: Vec<FqMatrix> = gl_enumerate(n, field, budget)?.collect();
    let position: HashMap<&FqMatrix, usize> = elements.iter().enumerate().map(|(i, g)| (g, i)).collect();
    let inverse_pos = elements
        .iter()
        .map(|g| position.get(&g.inverse()?).copied().ok_or(Error::NotInvertible))
        .collect::<Result<Vec<usize>>>()?;
    let values = fs
        .iter()
        .map(|f| elements.iter().map(|g| f.value(g)).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    let scale = order_scalar(k, elements.len() as u128)?;
    let mut out = Vec::with_capacity(fs.len());
    for a in &values {
        let mut row = Vec::with_capacity(fs.len());
        for b in &values {
            let sum = (0..elements.len()).fold(k.zero(), |acc, i| acc.add(&a[i].mul(&b[inverse_pos[i]])));
            row.push(sum.mul(&scale));
        }
        out.push(row);
    }
    Ok(out)
}

fn require_char_zero(k: &CoeffField) -> Result<()> {
    if k.mode() != CoeffMode::Cyclotomic {
        return Err(Error::InvalidCoeffField("multiplicities need characteristic zero".into()));
    }
    Ok(())
}

/// `⟨Ind_{P_λ}^G(1), χ^μ⟩ = |P_λ|^{-1} Σ_{g ∈ P_λ} χ^μ(g)`.
pub fn parabolic_multiplicity(lambda_par: &Partition, chi: &dyn ClassFunction, k: &CoeffField, field: Field, budget: &Budget) -> Result<u64> {
    require_char_zero(k)?;
    let mut acc = k.zero();
    for g in p_lambda_elements(lambda_par, field, budget)? {
        acc = acc.add(&chi.value(&g)?);
    }
    acc.mul(&order_scalar(k, p_lambda_order(lambda_par, field.q() as u64))?).as_nonneg_integer()
}

/// `⟨Γ^λ, χ^μ⟩ = |U(T)|^{-1} Σ_{u ∈ U(T)} ψ_T(u^{-1}) χ^μ(u)` with `T` the
/// standard-basis tableau of shape `λ`.
pub fn ggg_multiplicity(lambda: &Partition, chi: &dyn ClassFunction, k: &CoeffField, field: Field, budget: &Budget) -> Result<u64> {
    require_char_zero(k)?;
    let t = FqTableau::standard(lambda, field);
    let mut acc = k.zero();
    for u in t.u_elements(budget)? {
        acc = acc.add(&t.psi(&u.inverse()?, k)?.mul(&chi.value(&u)?));
    }
    acc.mul(&order_scalar(k, t.u_order())?).as_nonneg_integer()
}

/// The set `D(λ) = {λ_1, λ_1 + λ_2, …}` of 1-based block boundaries.
pub fn block_boundaries(lambda: &Partition) -> Vec<usize> {
    lambda
        .parts()
        .iter()
        .scan(0, |s, &p| {
            *s += p;
            Some(*s)
        })
        .collect()
}

/// `φ_λ(u) = θ(Σ_{i ∉ D(λ)} u_{i,i+1})` on upper unitriangular `u`.
pub fn dgg_linear_character(lambda: &Partition, u: &FqMatrix, k: &CoeffField) -> Result<KScalar> {
    let bounds = block_boundaries(lambda);
    let n = lambda.size();
    let field = u.field();
    let s = (1..n).filter(|i| !bounds.contains(i)).fold(field.zero(), |acc, i| acc + u.get(i - 1, i));
    k.theta(s)
}

/// `⟨Ψ^λ, χ^μ⟩ = |UT_n|^{-1} Σ_{u ∈ UT_n} φ_λ(u^{-1}) χ^μ(u)`.
pub fn dgg_multiplicity(lambda: &Partition, chi: &dyn ClassFunction, k: &CoeffField, field: Field, budget: &Budget) -> Result<u64> {
    require_char_zero(k)?;
    let n = lambda.size();
    let borel = Partition::column(n);
    let mut acc = k.zero();
    let mut count: u128 = 0;
    for u in u_lambda_elements(&borel, field, budget)? {
        acc = acc.add(&dgg_linear_character(lambda, &u.inverse()?, k)?.mul(&chi.value(&u)?));
        count += 1;
    }
    acc.mul(&order_scalar(k, count)?).as_nonneg_integer()
}

/// Append-only on-disk store of character values, one file per
/// `(n, q, coefficient mode)` holding records `matrix TAB λ TAB value`.
pub struct CharCache {
    path: PathBuf,
    field: CoeffField,
    values: RwLock<HashMap<(String, String), KScalar>>,
    file: Mutex<File>,
}

impl CharCache {
    pub fn open(dir: &Path, n: usize, q: u64, k: &CoeffField) -> Result<CharCache> {
        fs::create_dir_all(dir)?;
        let mode = match k.mode() {
            CoeffMode::Cyclotomic => "cyclotomic".to_string(),
            CoeffMode::Modular { ell } => format!("mod{ell}"),
        };
        let path = dir.join(format!("chars-n{n}-q{q}-{mode}.tsv"));
        let mut values = HashMap::new();
        if path.exists() {
            let mut bytes = Vec::new();
            File::open(&path)?.read_to_end(&mut bytes)?;
            let mut valid = 0usize;
            for line in bytes.split_inclusive(|&b| b == b'\n') {
                let Some(record) = parse_record(line, k) else { break };
                values.insert((record.0, record.1), record.2);
                valid += line.len();
            }
            if valid < bytes.len() {
                OpenOptions::new().write(true).open(&path)?.set_len(valid as u64)?;
            }
        }
        let file = OpenOptions::new().create(true).append(true).open(&path)?;
        Ok(CharCache { path, field: k.clone(), values: RwLock::new(values), file: Mutex::new(file) })
    }

    pub fn path(&self) -> &Path {
        &self.path
    }

    pub fn len(&self) -> usize {
        self.values.read().expect("cache lock poisoned").len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn get(&self, g: &FqMatrix, shape: &Partition) -> Option<KScalar> {
        self.values.read().expect("cache lock poisoned").get(&(g.to_string(), shape.to_string())).cloned()
    }

    pub fn insert(&self, g: &FqMatrix, shape: &Partition, value: &KScalar) -> Result<()> {
        if value.clone().checked_add(&self.field.zero()).is_err() {
            return Err(Error::MixedFields);
        }
        let key = (g.to_string(), shape.to_string());
        let mut file = self.file.lock().expect("cache lock poisoned");
        let mut values = self.values.write().expect("cache lock poisoned");
        if values.contains_key(&key) {
            return Ok(());
        }
        writeln!(file, "{}\t{}\t{}", key.0, key.1, value)?;
        file.flush()?;
        values.insert(key, value.clone());
        Ok(())
    }
}

fn parse_record(line: &[u8], k: &CoeffField) -> Option<(String, String, KScalar)> {
    let text = std::str::from_utf8(line).ok()?.strip_suffix('\n')?;
    let mut parts = text.split('\t');
    let (matrix, shape, value) = (parts.next()?, parts.next()?, parts.next()?);
    if parts.next().is_some() {
        return None;
    }
    shape.parse::<Partition>().ok()?;
    let value = k.parse(value).ok()?;
    Some((matrix.to_string(), shape.to_string(), value))
}
