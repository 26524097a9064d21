//! Acceptance gate: every criterion is checked exactly and reported on one
//! line. Criterion 8 is a stretch goal and does not affect the exit status.

use std::process::ExitCode;
use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use unipotent::budget::Budget;
use unipotent::coeff_field::CoeffField;
use unipotent::combinatorics::{kostka_number, partitions_of, Partition};
use unipotent::error::Result;
use unipotent::finite_field::make_field;
use unipotent::flag_modules::{dimension_table, enumerate_flags, flag_count, s_basis};
use unipotent::verify::{character_suite, kostka_suite, lemma_suite, submodule_dichotomy, CheckResult, VerifyConfig};

/// `(n, ℓ, shape, dim S, dim D)` over `F_2`, frozen from the oracle in
/// `tests/module_oracle.rs`.
const FROZEN_MODULAR: &[(usize, u64, &str, usize, usize)] = &[
    (2, 3, "2", 2, 1),
    (2, 3, "1,1", 1, 1),
    (3, 7, "3", 8, 3),
    (3, 7, "2,1", 6, 5),
    (3, 7, "1,1,1", 1, 1),
];

/// Char-0 `dim S^λ` over `F_2` for `n = 3`, in the order (3), (2,1), (1,1,1).
const FROZEN_DIMS_N3_Q2: [usize; 3] = [8, 6, 1];

struct Outcome {
    ok: bool,
    detail: String,
}

fn from_checks(results: &[CheckResult]) -> Outcome {
    let failed: Vec<&CheckResult> = results.iter().filter(|r| !r.passed()).collect();
    let cases: u64 = results.iter().map(|r| r.cases).sum();
    match failed.first() {
        None => Outcome { ok: true, detail: format!("{} checks, {cases} cases", results.len()) },
        Some(first) => Outcome { ok: false, detail: format!("{} of {} checks failed; first: {first}", failed.len(), results.len()) },
    }
}

fn config(n: usize, q: u64) -> Result<VerifyConfig> {
    let field = make_field(q)?;
    Ok(VerifyConfig::new(n, field, CoeffField::cyclotomic(field.p())?))
}

fn lemmas() -> Result<Outcome> {
    let mut all = Vec::new();
    for (n, q) in [(2, 2), (2, 3), (3, 2)] {
        all.extend(lemma_suite(&config(n, q)?)?);
    }
    Ok(from_checks(&all))
}

fn dimensions() -> Result<Outcome> {
    let mut problems = Vec::new();
    for q in [2u64, 3] {
        for n in 1..=3 {
            let cfg = config(n, q)?;
            let rows = dimension_table(n, cfg.field, &cfg.coeff, &cfg.budget);
            let mut dims = Vec::new();
            for row in &rows {
                dims.push(row.dims.clone()?.1);
            }
            let shapes = partitions_of(n);
            let steinberg = (q as usize).pow((n * (n - 1) / 2) as u32);
            if dims[0] != steinberg {
                problems.push(format!("n={n} q={q}: dim S^({}) = {}", shapes[0], dims[0]));
            }
            if dims[dims.len() - 1] != 1 {
                problems.push(format!("n={n} q={q}: dim S^(1^n) = {}", dims[dims.len() - 1]));
            }
            if n == 3 && dims[1] != (q * q + q) as usize {
                problems.push(format!("q={q}: dim S^(2,1) = {}", dims[1]));
            }
            let column = Partition::column(n);
            let mut total: u128 = 0;
            for (s, d) in shapes.iter().zip(&dims) {
                total += kostka_number(s, &column)? as u128 * *d as u128;
            }
            if total != flag_count(&Partition::row(n), q) {
                problems.push(format!("n={n} q={q}: sum f^lambda dim S^lambda = {total}"));
            }
            if n == 3 && q == 2 && (dims.as_slice() != FROZEN_DIMS_N3_Q2 || total != 21) {
                problems.push(format!("n=3 q=2: dims {dims:?}, total {total}"));
            }
        }
    }
    Ok(Outcome { ok: problems.is_empty(), detail: if problems.is_empty() { "n<=3, q in {2,3}; n=3 q=2 total 21".into() } else { problems.join("; ") } })
}

fn orthonormality() -> Result<Outcome> {
    let mut all = Vec::new();
    for (n, q) in [(1, 2), (2, 2), (3, 2), (2, 3)] {
        all.extend(character_suite(&config(n, q)?, None)?.into_iter().filter(|r| r.name.starts_with("<chi")));
    }
    Ok(from_checks(&all))
}

fn kostka_checks() -> Result<(Vec<CheckResult>, Vec<CheckResult>)> {
    let mut ggg = Vec::new();
    let mut q2 = Vec::new();
    for q in [2u64, 3] {
        for n in 1..=3 {
            for r in kostka_suite(&config(n, q)?, None)? {
                if r.name.starts_with("<Gamma") {
                    ggg.push(r);
                } else if q == 2 {
                    q2.push(r);
                }
            }
        }
    }
    Ok((ggg, q2))
}

fn modular() -> Result<Outcome> {
    let f2 = make_field(2)?;
    let b = Budget::default();
    let mut problems = Vec::new();
    for &(n, ell, shape, dim_s, dim_d) in FROZEN_MODULAR {
        let k = CoeffField::modular(2, ell)?;
        let rows = dimension_table(n, f2, &k, &b);
        let row = rows.iter().find(|r| r.shape.to_string() == shape).expect("shape listed");
        let (_, s, d) = row.dims.clone()?;
        if (s, d) != (dim_s, dim_d) {
            problems.push(format!("ell={ell} ({shape}): ({s}, {d}) vs ({dim_s}, {dim_d})"));
        }
        if !(1 <= d && d <= s) {
            problems.push(format!("ell={ell} ({shape}): dim D = {d} outside [1, {s}]"));
        }
        if shape.split(',').all(|p| p == "1") && d != 1 {
            problems.push(format!("ell={ell} ({shape}): dim D^(1^n) = {d}"));
        }
    }
    Ok(Outcome { ok: problems.is_empty(), detail: if problems.is_empty() { "(2,2,3) and (3,2,7) match frozen values".into() } else { problems.join("; ") } })
}

fn dichotomy() -> Result<Outcome> {
    let f2 = make_field(2)?;
    let k = CoeffField::cyclotomic(2)?;
    let b = Budget::default();
    let mut all = Vec::new();
    for n in 1..=3 {
        for (i, lambda) in partitions_of(n).iter().enumerate() {
            let space = enumerate_flags(lambda, f2, &b)?;
            let s = s_basis(&space, &k, &b)?;
            let mut rng = ChaCha8Rng::seed_from_u64((n * 16 + i) as u64);
            all.push(submodule_dichotomy(&space, &s, &k, 20, &mut rng, &format!("n={n} q=2 lambda=({lambda})"))?);
        }
    }
    Ok(from_checks(&all))
}

fn stretch() -> Result<Outcome> {
    let cfg = config(4, 2)?;
    let rows = dimension_table(4, cfg.field, &cfg.coeff, &cfg.budget);
    let mut cells = Vec::new();
    for row in &rows {
        let (m, s, d) = row.dims.clone()?;
        cells.push(format!("({}): {m} {s} {d}", row.shape));
    }
    Ok(Outcome { ok: true, detail: cells.join(", ") })
}

fn report(gating: &mut bool, label: &str, is_gating: bool, run: impl FnOnce() -> Result<Outcome>) {
    let start = Instant::now();
    let outcome = run().unwrap_or_else(|e| Outcome { ok: false, detail: format!("error: {e}") });
    let status = if outcome.ok { "PASS" } else { "FAIL" };
    let suffix = if is_gating { "" } else { " (not gating)" };
    println!("{status} {label}{suffix} [{:.1}s] {}", start.elapsed().as_secs_f64(), outcome.detail);
    if is_gating && !outcome.ok {
        *gating = false;
    }
}

fn main() -> ExitCode {
    let mut ok = true;
    report(&mut ok, "1 lemma suite", true, lemmas);
    report(&mut ok, "2 dimensions", true, dimensions);
    report(&mut ok, "3 orthonormality", true, orthonormality);
    let kostka = kostka_checks();
    let (ggg, q2) = match kostka {
        Ok(pair) => (Ok(pair.0), Ok(pair.1)),
        Err(e) => (Err(e.clone()), Err(e)),
    };
    report(&mut ok, "4 Gelfand-Graev vs Kostka polynomials", true, || ggg.map(|r| from_checks(&r)));
    report(&mut ok, "5 parabolic and degenerate Gelfand-Graev", true, || q2.map(|r| from_checks(&r)));
    report(&mut ok, "6 modular heads", true, modular);
    report(&mut ok, "7 submodule dichotomy", true, dichotomy);
    report(&mut ok, "8 dims n=4 q=2", false, stretch);
    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
