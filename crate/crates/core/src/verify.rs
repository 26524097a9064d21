//! Named brute-force checks of the identities satisfied by tableaux, the
//! modules `S^λ` and their characters.
//!
//! Group elements are taken exhaustively when `|G| ≤ exhaustive_limit` and
//! otherwise as a seeded random sample.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::budget::Budget;
use crate::characters::{
    dgg_multiplicity, ggg_multiplicity, inner_product_matrix, parabolic_multiplicity, CachedCharacter, CharCache,
    ClassFunction, UnipotentModule,
};
use crate::coeff_field::{CoeffField, CoeffMode, KScalar};
use crate::combinatorics::{dominates, kostka_number, kostka_polynomial, partitions_of, Partition};
use crate::error::{Error, Result};
use crate::finite_field::Field;
use crate::flag_modules::{
    bilinear, e_vector, enumerate_flags, flag_count, k_apply, m_vector, perp, s_basis, s_basis_from, FlagSpace, MVector,
    SpanBasis,
};
use crate::fq_linalg::{gl_enumerate, gl_generators, gl_order, p_lambda_elements, random_gl, FqMatrix};
use crate::tableaux::FqTableau;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Lemmas,
    Characters,
    Kostka,
    All,
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "lemmas" => Ok(Suite::Lemmas),
            "characters" => Ok(Suite::Characters),
            "kostka" => Ok(Suite::Kostka),
            "all" => Ok(Suite::All),
            other => Err(Error::Parse(format!("unknown suite {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckResult {
    pub name: String,
    pub context: String,
    pub cases: u64,
    pub failure: Option<String>,
}

impl CheckResult {
    pub fn passed(&self) -> bool {
        self.failure.is_none()
    }
}

impl fmt::Display for CheckResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.passed() { "PASS" } else { "FAIL" };
        write!(f, "{status}\t{}\t{}\t{} cases", self.name, self.context, self.cases)?;
        if let Some(why) = &self.failure {
            write!(f, "\t{why}")?;
        }
        Ok(())
    }
}

/// Accumulates cases of one named check.
struct Check {
    name: &'static str,
    context: String,
    cases: u64,
    failure: Option<String>,
}

impl Check {
    fn new(name: &'static str, context: &str) -> Self {
        Check { name, context: context.to_string(), cases: 0, failure: None }
    }

    fn record(&mut self, ok: bool, detail: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok && self.failure.is_none() {
            self.failure = Some(detail());
        }
    }

    fn finish(self) -> CheckResult {
        CheckResult { name: self.name.to_string(), context: self.context, cases: self.cases, failure: self.failure }
    }
}

#[derive(Debug, Clone)]
pub struct VerifyConfig {
    pub n: usize,
    pub field: Field,
    pub coeff: CoeffField,
    pub budget: Budget,
    pub seed: u64,
    /// Largest `|G|` enumerated in full.
    pub exhaustive_limit: u128,
    /// Sample size used above the limit.
    pub samples: usize,
    /// Random tableaux per shape for the per-tableau identities.
    pub random_tableaux: usize,
    /// Random cyclic submodules per shape.
    pub dichotomy_vectors: usize,
}

impl VerifyConfig {
    pub fn new(n: usize, field: Field, coeff: CoeffField) -> Self {
        VerifyConfig {
            n,
            field,
            coeff,
            budget: Budget::default(),
            seed: 0,
            exhaustive_limit: 2000,
            samples: 64,
            random_tableaux: 3,
            dichotomy_vectors: 20,
        }
    }

    fn context(&self, shape: Option<&Partition>) -> String {
        let base = format!("n={} q={} K={}", self.n, self.field.q(), self.coeff.mode());
        match shape {
            Some(s) => format!("{base} lambda=({s})"),
            None => base,
        }
    }

    fn rng(&self, salt: u64) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.seed ^ salt.wrapping_mul(0x9e37_79b9_7f4a_7c15))
    }

    fn group_sample(&self) -> Result<Vec<FqMatrix>> {
        if gl_order(self.n, self.field.q() as u64) <= self.exhaustive_limit {
            return Ok(gl_enumerate(self.n, self.field, &self.budget)?.collect());
        }
        let mut rng = self.rng(1);
        Ok((0..self.samples).map(|_| random_gl(self.n, self.field, &mut rng)).collect())
    }
}

pub fn run_suite(suite: Suite, cfg: &VerifyConfig, cache: Option<&CharCache>) -> Result<Vec<CheckResult>> {
    Ok(match suite {
        Suite::Lemmas => lemma_suite(cfg)?,
        Suite::Characters => character_suite(cfg, cache)?,
        Suite::Kostka => kostka_suite(cfg, cache)?,
        Suite::All => {
            let mut out = lemma_suite(cfg)?;
            out.extend(character_suite(cfg, cache)?);
            out.extend(kostka_suite(cfg, cache)?);
            out
        }
    })
}

/// `P(T) = A P_{λ'}^- A^{-1}`.
fn p_elements(t: &FqTableau, budget: &Budget) -> Result<Vec<FqMatrix>> {
    Ok(p_lambda_elements(&t.shape().conjugate(), t.field(), budget)?
        .map(|p| t.conjugate_in(&p.transpose()))
        .collect())
}

fn psi_set(t: &FqTableau, us: &[FqMatrix], k: &CoeffField) -> Result<Vec<KScalar>> {
    let mut out: Vec<KScalar> = Vec::new();
    for u in us {
        let v = t.psi(u, k)?;
        if !out.contains(&v) {
            out.push(v);
        }
    }
    Ok(out)
}

fn order_in_k(k: &CoeffField, order: u128) -> KScalar {
    k.from_int(order as i64)
}

/// The tableau identities, for every shape of size `n`.
pub fn lemma_suite(cfg: &VerifyConfig) -> Result<Vec<CheckResult>> {
    let k = &cfg.coeff;
    let b = &cfg.budget;
    let sample = cfg.group_sample()?;
    let shapes = partitions_of(cfg.n);
    let spaces = shapes.iter().map(|s| enumerate_flags(s, cfg.field, b)).collect::<Result<Vec<_>>>()?;
    let mut out = Vec::new();
    for (li, lambda) in shapes.iter().enumerate() {
        let ctx = cfg.context(Some(lambda));
        let space = &spaces[li];
        let t0 = FqTableau::standard(lambda, cfg.field);
        let us0: Vec<FqMatrix> = t0.u_elements(b)?.collect();
        let p0 = p_elements(&t0, b)?;
        let e0 = e_vector(&t0, space, k, b)?;
        let psi0 = psi_set(&t0, &us0, k)?;

        let mut u_conj = Check::new("U(gT) = gU(T)g^-1", &ctx);
        let mut p_conj = Check::new("P(gT) = gP(T)g^-1", &ctx);
        let mut e_equiv = Check::new("g.e_T = e_gT", &ctx);
        let mut psi_conj = Check::new("psi_gT(gug^-1) = psi_T(u)", &ctx);
        let mut k_in_line = Check::new("k_T m_T' in K e_T", &ctx);
        let mut dichotomy = Check::new("uT = pT' iff U(T) meets P(T') trivially", &ctx);
        let mut nontrivial = Check::new("psi_T nontrivial on U(T) meet P(T')", &ctx);
        let mut vanishing = Check::new("k_T m_T' = 0 unless mu dominates lambda", &ctx);

        let x_sample: Vec<&FqMatrix> = sample.iter().take(200).collect();
        for g in &sample {
            let g_inv = g.inverse()?;
            let t = t0.act(g)?;
            let conj = |u: &FqMatrix| g.mul(u).and_then(|m| m.mul(&g_inv));

            let expected: HashSet<FqMatrix> = us0.iter().map(conj).collect::<Result<_>>()?;
            let actual: HashSet<FqMatrix> = t.u_elements(b)?.collect();
            let direct = expected.iter().map(|u| t.u_contains(u)).collect::<Result<Vec<bool>>>()?;
            u_conj.record(expected == actual && direct.iter().all(|&x| x), || format!("g = {g}"));

            let mut p_ok = p0.iter().map(|p| t.p_contains(&conj(p)?)).collect::<Result<Vec<bool>>>()?.into_iter().all(|x| x);
            for x in &x_sample {
                let back = g_inv.mul(x)?.mul(g)?;
                p_ok &= t.p_contains(x)? == t0.p_contains(&back)?;
            }
            p_conj.record(p_ok, || format!("g = {g}"));

            e_equiv.record(e0.act(g, space)? == e_vector(&t, space, k, b)?, || format!("g = {g}"));

            let mut psi_ok = true;
            for u in &us0 {
                psi_ok &= t.psi(&conj(u)?, k)? == t0.psi(u, k)?;
            }
            psi_conj.record(psi_ok, || format!("g = {g}"));

            // T = T0 against T' = gT0
            let km = k_apply(&t0, &m_vector(&t, space, k)?, space, k, b)?;
            let in_line = km.is_zero() || psi0.iter().any(|c| e0.scale(c) == km);
            k_in_line.record(in_line, || format!("T' = {t}"));

            let mut meets = Vec::new();
            for u in &us0 {
                if !u.is_identity() && t.p_contains(u)? {
                    meets.push(u.clone());
                }
            }
            let mut transported = false;
            for u in &us0 {
                if t.p_contains(&t0.act(u)?.transporter_from(&t)?)? {
                    transported = true;
                    break;
                }
            }
            dichotomy.record(transported == meets.is_empty(), || format!("T' = {t}"));
            dichotomy.record(transported == !km.is_zero(), || format!("k_T m_T' vs transport, T' = {t}"));
            if !meets.is_empty() {
                let found = meets.iter().map(|u| t0.psi(u, k)).collect::<Result<Vec<_>>>()?.iter().any(|v| !v.is_one());
                nontrivial.record(found, || format!("T' = {t}"));
            }

            for (mi, mu) in shapes.iter().enumerate() {
                if dominates(mu, lambda)? {
                    continue;
                }
                let t_mu = FqTableau::standard(mu, cfg.field).act(g)?;
                let km = k_apply(&t0, &m_vector(&t_mu, &spaces[mi], k)?, &spaces[mi], k, b)?;
                vanishing.record(km.is_zero(), || format!("mu = ({mu}), T' = {t_mu}"));
            }
        }

        let mut m_orbit = Check::new("m_pT = m_T", &ctx);
        let mut e_twist = Check::new("e_uT = psi_T(u) e_T", &ctx);
        let mut bar_psi = Check::new("psi_Tbar(u) = psi_T(u^-1)", &ctx);
        let mut bar_u = Check::new("U(Tbar) = U(T) and Tbar in P(T)T", &ctx);
        let mut k_e = Check::new("k_T e_T = |U(T)| e_T", &ctx);
        let mut form = Check::new("[e_T, e_Tbar] = |U(T)|", &ctx);
        let mut rng = cfg.rng(2 + li as u64);
        let mut tableaux = vec![t0.clone()];
        for _ in 0..cfg.random_tableaux {
            tableaux.push(t0.act(&random_gl(cfg.n, cfg.field, &mut rng))?);
        }
        for t in &tableaux {
            let m = m_vector(t, space, k)?;
            for p in p_elements(t, b)? {
                m_orbit.record(t.p_contains(&p)? && m_vector(&t.act(&p)?, space, k)? == m, || format!("T = {t}, p = {p}"));
            }
            let e = e_vector(t, space, k, b)?;
            let us: Vec<FqMatrix> = t.u_elements(b)?.collect();
            let bar = t.bar();
            for u in &us {
                let ut = t.act(u)?;
                e_twist.record(e_vector(&ut, space, k, b)? == e.scale(&t.psi(u, k)?), || format!("T = {t}, u = {u}"));
                bar_psi.record(bar.psi(u, k)? == t.psi(&u.inverse()?, k)?, || format!("T = {t}, u = {u}"));
            }
            let us_set: HashSet<&FqMatrix> = us.iter().collect();
            let bar_us: Vec<FqMatrix> = bar.u_elements(b)?.collect();
            let same_u = bar_us.len() == us.len() && bar_us.iter().all(|u| us_set.contains(u));
            bar_u.record(same_u && t.p_contains(&bar.transporter_from(t)?)?, || format!("T = {t}"));
            let order = order_in_k(k, t.u_order());
            k_e.record(k_apply(t, &e, space, k, b)? == e.scale(&order), || format!("T = {t}"));
            let e_bar = e_vector(&bar, space, k, b)?;
            form.record(bilinear(&e, &e_bar, k) == order, || format!("T = {t}"));
        }

        let basis = s_basis(space, k, b)?;
        let mut seeds = Check::new("dim S^lambda independent of seed tableau", &ctx);
        for t in tableaux.iter().skip(1) {
            let other = s_basis_from(t, space, k, b)?;
            seeds.record(other == basis, || format!("T0 = {t}: rank {} vs {}", other.rank(), basis.rank()));
        }

        let sub = submodule_dichotomy(space, &basis, k, cfg.dichotomy_vectors, &mut cfg.rng(100 + li as u64), &ctx)?;

        out.extend(
            [u_conj, p_conj, e_equiv, psi_conj, m_orbit, e_twist, bar_psi, bar_u, k_in_line, k_e, form, dichotomy, nontrivial, vanishing, seeds]
                .into_iter()
                .map(Check::finish),
        );
        out.push(sub);
    }
    Ok(out)
}

fn random_combination(rows: &[Vec<KScalar>], k: &CoeffField, len: usize, rng: &mut ChaCha8Rng) -> Vec<KScalar> {
    let mut v = vec![k.zero(); len];
    for row in rows {
        let c = k.from_int(rng.gen_range(-2..=2));
        if c.is_zero() {
            continue;
        }
        for (x, y) in v.iter_mut().zip(row) {
            *x = x.add(&c.mul(y));
        }
    }
    v
}

/// For random `x`, the submodule `V = KG·x` satisfies `S ⊆ V` or
/// `V ⊆ S^⊥`. A third of the vectors are drawn from `S^⊥` and a third from
/// `S` so that both alternatives are exercised.
pub fn submodule_dichotomy(
    space: &FlagSpace,
    s: &SpanBasis,
    k: &CoeffField,
    count: usize,
    rng: &mut ChaCha8Rng,
    ctx: &str,
) -> Result<CheckResult> {
    let mut check = Check::new("S^lambda in V or V in (S^lambda)^perp", ctx);
    let n = space.len();
    let identity: Vec<Vec<KScalar>> = (0..n).map(|i| MVector::basis_vector(i, k).to_dense(n, k)).collect();
    let perp_rows = perp(s)?;
    let gens = gl_generators(space.shape().size(), space.field());
    for i in 0..count {
        let source = match i % 3 {
            0 => &identity,
            1 => &perp_rows,
            _ => s.rows(),
        };
        let x = random_combination(source, k, n, rng);
        let v = SpanBasis::closure(space, k, &[MVector::from_dense(&x)], &gens)?;
        let contains_s = s.rows().iter().all(|r| v.contains(r));
        let orthogonal = v.rows().iter().all(|a| {
            s.rows().iter().all(|b| bilinear(&MVector::from_dense(a), &MVector::from_dense(b), k).is_zero())
        });
        check.record(contains_s || orthogonal, || format!("dim V = {}", v.rank()));
    }
    Ok(check.finish())
}

fn modules(cfg: &VerifyConfig) -> Result<Vec<UnipotentModule>> {
    partitions_of(cfg.n).iter().map(|s| UnipotentModule::new(s, cfg.field, &cfg.coeff, &cfg.budget)).collect()
}

/// Orthonormality, degree consistency and the trivial/Steinberg anchors.
pub fn character_suite(cfg: &VerifyConfig, cache: Option<&CharCache>) -> Result<Vec<CheckResult>> {
    if cfg.coeff.mode() != CoeffMode::Cyclotomic {
        return Err(Error::InvalidCoeffField("character suites need characteristic zero".into()));
    }
    let k = &cfg.coeff;
    let q = cfg.field.q() as u64;
    let ctx = cfg.context(None);
    let shapes = partitions_of(cfg.n);
    let mods = modules(cfg)?;
    let chars: Vec<CachedCharacter> = mods.iter().map(|m| CachedCharacter { module: m, cache }).collect();
    let fs: Vec<&dyn ClassFunction> = chars.iter().map(|c| c as &dyn ClassFunction).collect();
    let mut out = Vec::new();

    let mut ortho = Check::new("<chi^lambda, chi^mu> = delta", &ctx);
    let gram = inner_product_matrix(&fs, cfg.n, cfg.field, k, &cfg.budget)?;
    for (i, row) in gram.iter().enumerate() {
        for (j, v) in row.iter().enumerate() {
            let ok = if i == j { v.is_one() } else { v.is_zero() };
            ortho.record(ok, || format!("<({}), ({})> = {v}", shapes[i], shapes[j]));
        }
    }
    out.push(ortho.finish());

    let mut degrees = Check::new("sum f^lambda dim S^lambda = #complete flags", &ctx);
    let column = Partition::column(cfg.n);
    let mut total: u128 = 0;
    for (s, m) in shapes.iter().zip(&mods) {
        total += kostka_number(s, &column)? as u128 * m.dim() as u128;
    }
    let complete = flag_count(&Partition::row(cfg.n), q);
    degrees.record(total == complete, || format!("{total} vs {complete}"));
    out.push(degrees.finish());

    let mut anchors = Check::new("chi^(1^n) trivial, dim chi^(n) = q^(n(n-1)/2)", &ctx);
    let steinberg = &mods[0];
    let expected = (q as u128).pow((cfg.n * (cfg.n - 1) / 2) as u32);
    anchors.record(steinberg.dim() as u128 == expected, || format!("dim = {}", steinberg.dim()));
    let trivial = &mods[mods.len() - 1];
    for g in cfg.group_sample()? {
        anchors.record(chars[mods.len() - 1].value(&g)?.is_one(), || format!("chi^(1^n)({g}) != 1"));
    }
    anchors.record(trivial.dim() == 1, || format!("dim = {}", trivial.dim()));
    out.push(anchors.finish());

    let mut class = Check::new("chi(hgh^-1) = chi(g), rho(gh) = rho(g)rho(h)", &ctx);
    let mut rng = cfg.rng(7);
    for m in &mods {
        for _ in 0..5 {
            let g = random_gl(cfg.n, cfg.field, &mut rng);
            let h = random_gl(cfg.n, cfg.field, &mut rng);
            let conj = h.mul(&g)?.mul(&h.inverse()?)?;
            class.record(m.char_value(&conj)? == m.char_value(&g)?, || format!("({}) at {g}", m.shape()));
            let prod = m.action_matrix(&g.mul(&h)?)?;
            class.record(prod == m.action_matrix(&g)?.mul(&m.action_matrix(&h)?)?, || format!("({}) at {g}, {h}", m.shape()));
        }
    }
    out.push(class.finish());
    Ok(out)
}

/// `⟨Γ^λ, χ^μ⟩ = K_{μλ}(q)`, `⟨Ψ^λ, χ^μ⟩ = K_{μλ}`,
/// `⟨Ind_{P_λ}^G 1, χ^μ⟩ = K_{μ'λ}`.
pub fn kostka_suite(cfg: &VerifyConfig, cache: Option<&CharCache>) -> Result<Vec<CheckResult>> {
    let k = &cfg.coeff;
    let b = &cfg.budget;
    let q = cfg.field.q() as u64;
    let ctx = cfg.context(None);
    let shapes = partitions_of(cfg.n);
    let mods = modules(cfg)?;
    let mut ggg = Check::new("<Gamma^lambda, chi^mu> = K_mu,lambda(q)", &ctx);
    let mut dgg = Check::new("<Psi^lambda, chi^mu> = K_mu,lambda", &ctx);
    let mut par = Check::new("<Ind_P_lambda 1, chi^mu> = K_mu',lambda", &ctx);
    for (mu, m) in shapes.iter().zip(&mods) {
        let chi = CachedCharacter { module: m, cache };
        for lambda in &shapes {
            let want = kostka_polynomial(mu, lambda)?.eval(q);
            let got = ggg_multiplicity(lambda, &chi, k, cfg.field, b)?;
            ggg.record(got as u128 == want, || format!("lambda=({lambda}) mu=({mu}): {got} vs {want}"));
            let want = kostka_number(mu, lambda)?;
            let got = dgg_multiplicity(lambda, &chi, k, cfg.field, b)?;
            dgg.record(got == want, || format!("lambda=({lambda}) mu=({mu}): {got} vs {want}"));
            let want = kostka_number(&mu.conjugate(), lambda)?;
            let got = parabolic_multiplicity(lambda, &chi, k, cfg.field, b)?;
            par.record(got == want, || format!("lambda=({lambda}) mu=({mu}): {got} vs {want}"));
        }
    }
    Ok(vec![ggg.finish(), dgg.finish(), par.finish()])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finite_field::make_field;

    #[test]
    fn suites_pass_for_gl2_f2() {
        let f2 = make_field(2).unwrap();
        let cfg = VerifyConfig::new(2, f2, CoeffField::cyclotomic(2).unwrap());
        let results = run_suite(Suite::All, &cfg, None).unwrap();
        for r in &results {
            assert!(r.passed(), "{r}");
        }
        assert!(results.iter().filter(|r| r.name.starts_with("<Gamma")).all(|r| r.cases == 4));
    }

    #[test]
    fn lemmas_pass_in_modular_mode() {
        let f2 = make_field(2).unwrap();
        let cfg = VerifyConfig::new(2, f2, CoeffField::modular(2, 3).unwrap());
        for r in lemma_suite(&cfg).unwrap() {
            assert!(r.passed(), "{r}");
        }
        assert!(character_suite(&cfg, None).is_err());
    }

    #[test]
    fn suite_names_parse() {
        assert_eq!("all".parse::<Suite>().unwrap(), Suite::All);
        assert!("bogus".parse::<Suite>().is_err());
    }
}
