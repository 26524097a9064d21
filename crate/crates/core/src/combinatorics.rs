//! Partitions, dominance order, semistandard tableaux and Kostka quantities.
//!
//! Partitions are stored without trailing zeros. Kostka polynomials are
//! computed from the charge statistic of the reading word, where the reading
//! word of a tableau lists its rows left to right, starting with the bottom
//! row and ending with the top row.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// A weakly decreasing sequence of positive integers.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Partition {
    parts: Vec<usize>,
}

impl Partition {
    pub fn new(parts: Vec<usize>) -> Result<Self> {
        if parts.is_empty() {
            return Err(Error::InvalidPartition("empty".into()));
        }
        if parts.contains(&0) {
            return Err(Error::InvalidPartition(format!("{parts:?} has a zero part")));
        }
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::InvalidPartition(format!(
                "{parts:?} is not weakly decreasing"
            )));
        }
        Ok(Partition { parts })
    }

    /// The one-row partition `(n)`.
    pub fn row(n: usize) -> Self {
        Partition { parts: vec![n] }
    }

    /// The one-column partition `(1^n)`.
    pub fn column(n: usize) -> Self {
        Partition { parts: vec![1; n] }
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    /// The number being partitioned.
    pub fn size(&self) -> usize {
        self.parts.iter().sum()
    }

    /// Number of nonzero parts.
    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// The `i`-th part (0-based), zero past the end.
    pub fn part(&self, i: usize) -> usize {
        self.parts.get(i).copied().unwrap_or(0)
    }

    pub fn conjugate(&self) -> Partition {
        let width = self.parts[0];
        let parts = (1..=width)
            .map(|i| self.parts.iter().filter(|&&p| p >= i).count())
            .collect();
        Partition { parts }
    }

    /// `n(λ) = Σ (i-1) λ_i`.
    pub fn n_statistic(&self) -> usize {
        self.parts.iter().enumerate().map(|(i, p)| i * p).sum()
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.parts.iter().map(|p| p.to_string()).collect();
        f.write_str(&s.join(","))
    }
}

impl FromStr for Partition {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parts = s
            .trim()
            .trim_start_matches('(')
            .trim_end_matches(')')
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<usize>()
                    .map_err(|_| Error::Parse(format!("bad partition part {t:?} in {s:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Partition::new(parts)
    }
}

/// Decreasing lexicographic order, so `(3) < (2,1)` is false.
impl Ord for Partition {
    fn cmp(&self, other: &Self) -> Ordering {
        other.parts.cmp(&self.parts)
    }
}

impl PartialOrd for Partition {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Outcome of comparing two partitions in dominance order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Dominance {
    /// `μ ⪯ λ`.
    BelowOrEqual,
    /// `μ ≻ λ`.
    Above,
    Incomparable,
}

/// Compares `mu` against `lambda` in dominance order.
pub fn dominance_leq(mu: &Partition, lambda: &Partition) -> Result<Dominance> {
    if mu.size() != lambda.size() {
        return Err(Error::SizeMismatch {
            left: mu.size(),
            right: lambda.size(),
        });
    }
    let len = mu.len().max(lambda.len());
    let (mut sm, mut sl) = (0usize, 0usize);
    let (mut mu_le, mut mu_ge) = (true, true);
    for i in 0..len {
        sm += mu.part(i);
        sl += lambda.part(i);
        mu_le &= sm <= sl;
        mu_ge &= sm >= sl;
    }
    Ok(if mu_le {
        Dominance::BelowOrEqual
    } else if mu_ge {
        Dominance::Above
    } else {
        Dominance::Incomparable
    })
}

/// True iff `a ⪰ b` in dominance order.
pub fn dominates(a: &Partition, b: &Partition) -> Result<bool> {
    Ok(dominance_leq(b, a)? == Dominance::BelowOrEqual)
}

/// All partitions of `n` in decreasing lexicographic order.
pub fn partitions_of(n: usize) -> Vec<Partition> {
    fn go(rest: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Partition>) {
        if rest == 0 {
            out.push(Partition { parts: cur.clone() });
            return;
        }
        for p in (1..=max.min(rest)).rev() {
            cur.push(p);
            go(rest - p, p, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if n > 0 {
        go(n, n, &mut Vec::new(), &mut out);
    }
    out
}

/// A semistandard Young tableau; entries start at 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SemistandardTableau {
    shape: Partition,
    rows: Vec<Vec<usize>>,
}

impl SemistandardTableau {
    pub fn new(rows: Vec<Vec<usize>>) -> Result<Self> {
        let shape = Partition::new(rows.iter().map(Vec::len).collect())?;
        let t = SemistandardTableau { shape, rows };
        if !t.is_semistandard() {
            return Err(Error::InvalidPartition(format!(
                "{:?} is not semistandard",
                t.rows
            )));
        }
        Ok(t)
    }

    pub fn shape(&self) -> &Partition {
        &self.shape
    }

    pub fn rows(&self) -> &[Vec<usize>] {
        &self.rows
    }

    fn is_semistandard(&self) -> bool {
        let rows_ok = self
            .rows
            .iter()
            .all(|r| r.iter().all(|&x| x >= 1) && r.windows(2).all(|w| w[0] <= w[1]));
        let cols_ok = self
            .rows
            .windows(2)
            .all(|w| w[1].iter().zip(&w[0]).all(|(lo, hi)| hi < lo));
        rows_ok && cols_ok
    }

    /// Multiplicities of the entries 1, 2, ….
    pub fn content(&self) -> Vec<usize> {
        let max = self.rows.iter().flatten().copied().max().unwrap_or(0);
        let mut c = vec![0; max];
        for &x in self.rows.iter().flatten() {
            c[x - 1] += 1;
        }
        c
    }

    /// Rows left to right, bottom row first.
    pub fn reading_word(&self) -> Vec<usize> {
        self.rows.iter().rev().flatten().copied().collect()
    }
}

/// Semistandard tableaux of shape `shape` and content `content`, built as a
/// chain of horizontal strips (one per entry value).
pub fn semistandard_tableaux(shape: &Partition, content: &Partition) -> Result<Vec<SemistandardTableau>> {
    if shape.size() != content.size() {
        return Err(Error::SizeMismatch {
            left: shape.size(),
            right: content.size(),
        });
    }
    let outer = shape.parts().to_vec();
    let mut out = Vec::new();
    let mut rows = vec![Vec::new(); outer.len()];
    let inner = vec![0; outer.len()];
    strips(&outer, content.parts(), 0, &inner, &mut rows, &mut out);
    Ok(out)
}

fn strips(
    outer: &[usize],
    content: &[usize],
    letter: usize,
    inner: &[usize],
    rows: &mut Vec<Vec<usize>>,
    out: &mut Vec<SemistandardTableau>,
) {
    if letter == content.len() {
        out.push(SemistandardTableau {
            shape: Partition {
                parts: outer.to_vec(),
            },
            rows: rows.clone(),
        });
        return;
    }
    let mut next = inner.to_vec();
    place(outer, content, letter, inner, &mut next, 0, content[letter], rows, out);
}

#[allow(clippy::too_many_arguments)]
fn place(
    outer: &[usize],
    content: &[usize],
    letter: usize,
    inner: &[usize],
    next: &mut Vec<usize>,
    row: usize,
    remaining: usize,
    rows: &mut Vec<Vec<usize>>,
    out: &mut Vec<SemistandardTableau>,
) {
    if row == outer.len() {
        if remaining == 0 {
            strips(outer, content, letter + 1, next, rows, out);
        }
        return;
    }
    // horizontal strip: row may grow up to the old length of the row above
    let cap = if row == 0 { outer[0] } else { inner[row - 1].min(outer[row]) };
    let room = cap.saturating_sub(inner[row]);
    for add in 0..=room.min(remaining) {
        next[row] = inner[row] + add;
        rows[row].extend(std::iter::repeat_n(letter + 1, add));
        place(outer, content, letter, inner, next, row + 1, remaining - add, rows, out);
        let len = rows[row].len();
        rows[row].truncate(len - add);
    }
    next[row] = inner[row];
}

/// Number of semistandard tableaux of shape `mu` and content `lambda`.
pub fn kostka_number(mu: &Partition, lambda: &Partition) -> Result<u64> {
    Ok(semistandard_tableaux(mu, lambda)?.len() as u64)
}

/// Charge of a word whose content is a partition (letter 1 occurs at least as
/// often as letter 2, and so on).
///
/// Standard subwords are peeled off by scanning right to left cyclically for
/// 1, 2, 3, …; each letter is indexed by the number of wrap-arounds needed to
/// reach it, and the charge is the total of all indices.
pub fn charge(word: &[usize]) -> u64 {
    let mut used = vec![false; word.len()];
    let mut left = word.len();
    let mut total = 0u64;
    while left > 0 {
        let mut pos = word.len();
        let mut index = 0u64;
        let mut letter = 1;
        loop {
            let found = (0..pos)
                .rev()
                .find(|&i| !used[i] && word[i] == letter)
                .or_else(|| {
                    let hit = (pos..word.len())
                        .rev()
                        .find(|&i| !used[i] && word[i] == letter);
                    if hit.is_some() && letter > 1 {
                        index += 1;
                    }
                    hit
                });
            match found {
                Some(i) => {
                    used[i] = true;
                    left -= 1;
                    total += index;
                    pos = i;
                    letter += 1;
                }
                None => break,
            }
        }
        if letter == 1 {
            // content was not a partition; remaining letters cannot start a subword
            break;
        }
    }
    total
}

/// Polynomial in `t` with non-negative integer coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct IntPolynomial {
    coeffs: Vec<u64>,
}

impl IntPolynomial {
    pub fn from_coeffs(mut coeffs: Vec<u64>) -> Self {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        IntPolynomial { coeffs }
    }

    pub fn zero() -> Self {
        IntPolynomial::default()
    }

    /// `t^k`.
    pub fn monomial(k: usize) -> Self {
        let mut coeffs = vec![0; k + 1];
        coeffs[k] = 1;
        IntPolynomial { coeffs }
    }

    /// Coefficients, index = power of `t`.
    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn add_monomial(&mut self, k: usize) {
        if self.coeffs.len() <= k {
            self.coeffs.resize(k + 1, 0);
        }
        self.coeffs[k] += 1;
    }

    pub fn eval(&self, t: u64) -> u128 {
        self.coeffs
            .iter()
            .rev()
            .fold(0u128, |acc, &c| acc * t as u128 + c as u128)
    }
}

impl fmt::Display for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(k, &c)| match (k, c) {
                (0, c) => c.to_string(),
                (1, 1) => "t".into(),
                (1, c) => format!("{c}*t"),
                (k, 1) => format!("t^{k}"),
                (k, c) => format!("{c}*t^{k}"),
            })
            .collect();
        f.write_str(&terms.join(" + "))
    }
}

/// `K_{μλ}(t)`: sum of `t^charge` over semistandard tableaux of shape `mu`
/// and content `lambda`.
pub fn kostka_polynomial(mu: &Partition, lambda: &Partition) -> Result<IntPolynomial> {
    let mut poly = IntPolynomial::zero();
    for t in semistandard_tableaux(mu, lambda)? {
        poly.add_monomial(charge(&t.reading_word()) as usize);
    }
    Ok(poly)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Partition {
        s.parse().unwrap()
    }

    #[test]
    fn conjugates() {
        assert_eq!(Partition::row(5).conjugate(), Partition::column(5));
        assert_eq!(p("4,3,1,1").conjugate(), p("4,2,2,1"));
        assert_eq!(p("2,1").conjugate(), p("2,1"));
    }

    #[test]
    fn rejects_bad_partitions() {
        assert!(Partition::new(vec![1, 2]).is_err());
        assert!(Partition::new(vec![2, 0]).is_err());
        assert!(Partition::new(vec![]).is_err());
        assert!("2,x".parse::<Partition>().is_err());
    }

    #[test]
    fn text_format_round_trips() {
        let l = p("4,3,1,1");
        assert_eq!(l.to_string(), "4,3,1,1");
        assert_eq!(l.to_string().parse::<Partition>().unwrap(), l);
    }

    #[test]
    fn dominance_examples() {
        assert_eq!(dominance_leq(&p("2,2"), &p("3,1")).unwrap(), Dominance::BelowOrEqual);
        assert_eq!(dominance_leq(&p("3,1"), &p("2,2")).unwrap(), Dominance::Above);
        assert_eq!(dominance_leq(&p("2,1"), &p("2,1")).unwrap(), Dominance::BelowOrEqual);
        assert_eq!(
            dominance_leq(&p("3,1,1,1"), &p("2,2,2")).unwrap(),
            Dominance::Incomparable
        );
        assert!(matches!(
            dominance_leq(&p("2"), &p("2,1")),
            Err(Error::SizeMismatch { .. })
        ));
    }

    #[test]
    fn enumerates_partitions() {
        assert_eq!(partitions_of(1), vec![p("1")]);
        assert_eq!(partitions_of(3), vec![p("3"), p("2,1"), p("1,1,1")]);
        assert_eq!(partitions_of(4).len(), 5);
        let counts: Vec<usize> = (1..=8).map(|n| partitions_of(n).len()).collect();
        assert_eq!(counts, vec![1, 2, 3, 5, 7, 11, 15, 22]);
    }

    #[test]
    fn kostka_number_examples() {
        for l in partitions_of(4) {
            assert_eq!(kostka_number(&l, &l).unwrap(), 1);
        }
        assert_eq!(kostka_number(&p("2,1"), &p("1,1,1")).unwrap(), 2);
        assert_eq!(kostka_number(&p("1,1"), &p("2")).unwrap(), 0);
        assert!(kostka_number(&p("1,1"), &p("3")).is_err());
    }

    #[test]
    fn tableaux_are_semistandard_with_right_content() {
        for t in semistandard_tableaux(&p("3,2,1"), &p("2,2,1,1")).unwrap() {
            assert!(t.is_semistandard());
            assert_eq!(t.content(), vec![2, 2, 1, 1]);
            assert_eq!(t.shape(), &p("3,2,1"));
        }
    }

    #[test]
    fn charge_of_small_words() {
        assert_eq!(charge(&[1, 2]), 1);
        assert_eq!(charge(&[2, 1]), 0);
        assert_eq!(charge(&[1, 2, 3]), 3);
        assert_eq!(charge(&[3, 1, 2]), 2);
        assert_eq!(charge(&[2, 1, 3]), 1);
        assert_eq!(charge(&[1, 1, 2]), 1);
    }

    #[test]
    fn kostka_polynomial_examples() {
        assert_eq!(kostka_polynomial(&p("2,1"), &p("2,1")).unwrap(), IntPolynomial::monomial(0));
        assert_eq!(kostka_polynomial(&p("2"), &p("1,1")).unwrap(), IntPolynomial::monomial(1));
        assert_eq!(kostka_polynomial(&p("1,1"), &p("1,1")).unwrap(), IntPolynomial::monomial(0));
        assert_eq!(
            kostka_polynomial(&p("2,1"), &p("1,1,1")).unwrap(),
            IntPolynomial::from_coeffs(vec![0, 1, 1])
        );
    }

    #[test]
    fn polynomial_display_and_eval() {
        let poly = IntPolynomial::from_coeffs(vec![1, 1, 2, 0]);
        assert_eq!(poly.to_string(), "1 + t + 2*t^2");
        assert_eq!(poly.eval(1), 4);
        assert_eq!(poly.eval(3), 1 + 3 + 18);
        assert_eq!(IntPolynomial::zero().to_string(), "0");
    }
}
