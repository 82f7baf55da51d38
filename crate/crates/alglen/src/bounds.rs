//! Length and dimension bounds for descendingly alternative and descendingly
//! flexible algebras, and an auditor that checks computed data against them.
//!
//! All formulas are integer-exact; logarithms are realized by comparisons of
//! powers of two.

use serde::Serialize;

use crate::algebra::Algebra;
use crate::canonical::{canonical_alt_form, canonical_flex_form, Blocks, Shape};
use crate::error::{Error, Result};
use crate::identities::ClassificationReport;
use crate::spans::{lin_k, DiffSequence};
use crate::words::{eval_unchecked, enumerate_restricted, count_restricted, GeneratorSet};

/// Restricted words examined per set when looking for a new word.
pub const WORD_SEARCH_CAP: u128 = 20_000;

fn pow2(e: usize) -> Result<u128> {
    if e >= 127 {
        return Err(Error::DomainError(format!("2^{e} does not fit")));
    }
    Ok(1u128 << e)
}

/// `2^(n-1) + n - 2`: least `dim A - d_0` for a descendingly alternative
/// algebra of length `n`.
pub fn alt_min_dim(n: usize) -> Result<u128> {
    if n < 2 {
        return Err(Error::DomainError(format!("n = {n} < 2")));
    }
    Ok(pow2(n - 1)? + n as u128 - 2)
}

/// `⌈log_2 d⌉` for `d >= 3`.
pub fn alt_max_length(d: u128) -> Result<u32> {
    if d < 3 {
        return Err(Error::DomainError(format!("dim - d0 = {d} < 3")));
    }
    Ok(128 - (d - 1).leading_zeros())
}

pub fn flex_min_dim(n: usize) -> Result<u128> {
    match n {
        0 => Err(Error::DomainError("n = 0".into())),
        1 | 2 => Ok(n as u128),
        3..=5 => Ok(2 * n as u128 - 1),
        _ => Ok(3 * pow2(n - 4)? + n as u128 - 3),
    }
}

/// `⌈d/2⌉` for `3 <= d <= 10`; otherwise `⌈log_2 d + log_2(8/3)⌉`, which is
/// the least `n` with `3 * 2^(n-3) >= d`.
pub fn flex_max_length(d: u128) -> Result<u32> {
    match d {
        0..=2 => Err(Error::DomainError(format!("dim - d0 = {d} < 3"))),
        3..=10 => Ok(d.div_ceil(2) as u32),
        _ => {
            let mut n = 3u32;
            while 3 * (1u128 << (n - 3)) < d {
                n += 1;
            }
            Ok(n)
        }
    }
}

/// Largest `n` with `flex_min_dim(n) <= d`; never weaker than
/// [`flex_max_length`].
pub fn flex_theorem_max_length(d: u128) -> Result<u32> {
    if d == 0 {
        return Err(Error::DomainError("dim - d0 = 0".into()));
    }
    let mut n = 1usize;
    while flex_min_dim(n + 1)? <= d {
        n += 1;
    }
    Ok(n as u32)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum QuickClass {
    Alt,
    Flex,
}

/// `l(S) <= 2 d_1` (alternative) or `l(S) <= 3 d_1 - 1` (flexible).
pub fn quick_set_bounds(d1: usize, class: QuickClass) -> usize {
    match (d1, class) {
        (0, _) => 0,
        (_, QuickClass::Alt) => 2 * d1,
        (_, QuickClass::Flex) => 3 * d1 - 1,
    }
}

/// `max{k, n-k} + 2^n - 2^k - 2^(n-k) + 1`.
pub fn alt_word_dim_bound(n: usize, k: usize) -> Result<u128> {
    if k == 0 || k >= n {
        return Err(Error::DomainError(format!("need 1 <= k <= n - 1, got n = {n}, k = {k}")));
    }
    Ok(k.max(n - k) as u128 + pow2(n)? - pow2(k)? - pow2(n - k)? + 1)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Relation {
    #[serde(rename = "<=")]
    Le,
    #[serde(rename = ">=")]
    Ge,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BoundEntry {
    pub name: String,
    /// Which data the entry was computed from.
    pub source: String,
    /// Human-readable inequality with the quantities named.
    pub inequality: String,
    pub lhs: u128,
    pub relation: Relation,
    pub rhs: u128,
    pub pass: bool,
    pub tight: bool,
}

impl BoundEntry {
    fn new(name: &str, source: &str, inequality: String, lhs: u128, relation: Relation, rhs: u128) -> Self {
        let pass = match relation {
            Relation::Le => lhs <= rhs,
            Relation::Ge => lhs >= rhs,
        };
        BoundEntry {
            name: name.into(),
            source: source.into(),
            inequality,
            lhs,
            relation,
            rhs,
            pass,
            tight: lhs == rhs,
        }
    }

    pub fn line(&self) -> String {
        let rel = match self.relation {
            Relation::Le => "<=",
            Relation::Ge => ">=",
        };
        let status = if self.pass { "pass" } else { "FAIL" };
        let eq = if self.tight && self.pass { " (equality)" } else { "" };
        format!("{status}{eq}  {} [{}]: {} : {} {rel} {}", self.name, self.source, self.inequality, self.lhs, self.rhs)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct BoundReport {
    pub entries: Vec<BoundEntry>,
}

impl BoundReport {
    pub fn all_pass(&self) -> bool {
        self.entries.iter().all(|e| e.pass)
    }

    pub fn failures(&self) -> Vec<&BoundEntry> {
        self.entries.iter().filter(|e| !e.pass).collect()
    }
}

/// One computed difference sequence.
#[derive(Debug, Clone)]
pub struct SetRun {
    pub label: String,
    pub set: GeneratorSet,
    pub seq: DiffSequence,
}

#[derive(Debug, Clone, Default)]
pub struct LengthData {
    pub sets: Vec<SetRun>,
    /// `l(A)` when it is known exactly.
    pub algebra_length: Option<usize>,
}

/// A restricted word of length `n` outside `Lin_{n-1}(S)`, if one is found
/// within [`WORD_SEARCH_CAP`] words.
fn find_new_word(alg: &Algebra, set: &GeneratorSet, n: usize) -> Result<Option<crate::words::WordTree>> {
    match count_restricted(set.len(), n) {
        Some(c) if c <= WORD_SEARCH_CAP => {}
        _ => return Ok(None),
    }
    let lin = lin_k(alg, set, n - 1)?;
    for w in enumerate_restricted(set.len(), n)? {
        let v = eval_unchecked(alg, set, &w)?;
        if !lin.contains(&v)? {
            return Ok(Some(w));
        }
    }
    Ok(None)
}

/// Checks every applicable bound against the supplied data. Entries appear
/// only for classes the report says hold.
pub fn audit(alg: &Algebra, report: &ClassificationReport, data: &LengthData) -> Result<BoundReport> {
    let da = report.descendingly_alternative.holds();
    let df = report.descendingly_flexible.holds();
    let slow = report.mixing_or_sliding();
    let d0 = alg.d0();
    let dim_rel = (alg.dim() - d0) as u128;
    let mut out = BoundReport::default();
    let mut push = |e: BoundEntry| out.entries.push(e);

    for run in &data.sets {
        let src = format!("set {}", run.label);
        let seq = &run.seq;
        let l = seq.length_of_set;
        let d1 = seq.d.get(1).copied().unwrap_or(0);
        let total: u128 = seq.d.iter().skip(1).map(|&x| x as u128).sum();
        if slow {
            push(BoundEntry::new("slow growth", &src, "l(S) <= dim A - d0".into(), l as u128, Relation::Le, dim_rel));
        }
        if da {
            let q = quick_set_bounds(d1, QuickClass::Alt) as u128;
            push(BoundEntry::new("alt quick bound", &src, format!("l(S) <= 2 d1, d1 = {d1}"), l as u128, Relation::Le, q));
            if l >= 2 {
                push(BoundEntry::new(
                    "alt dimension",
                    &src,
                    format!("dim Lin_l(S) - d0 >= 2^(l-1) + l - 2, l = {l}"),
                    total,
                    Relation::Ge,
                    alt_min_dim(l)?,
                ));
            }
            if seq.generating && dim_rel >= 3 {
                push(BoundEntry::new(
                    "alt log bound",
                    &src,
                    format!("l(S) <= ceil(log2(dim A - d0)), dim A - d0 = {dim_rel}"),
                    l as u128,
                    Relation::Le,
                    alt_max_length(dim_rel)? as u128,
                ));
            }
        }
        if df {
            let q = quick_set_bounds(d1, QuickClass::Flex) as u128;
            push(BoundEntry::new("flex quick bound", &src, format!("l(S) <= 3 d1 - 1, d1 = {d1}"), l as u128, Relation::Le, q));
            if l >= 1 {
                push(BoundEntry::new(
                    "flex dimension",
                    &src,
                    format!("dim Lin_l(S) - d0 >= flex_min_dim(l), l = {l}"),
                    total,
                    Relation::Ge,
                    flex_min_dim(l)?,
                ));
            }
            if l == 3 || l == 4 {
                let least = seq.d[1..l].iter().copied().min().unwrap_or(0) as u128;
                push(BoundEntry::new(
                    "flex low levels",
                    &src,
                    format!("min d_k over 1 <= k <= {} >= 2", l - 1),
                    least,
                    Relation::Ge,
                    2,
                ));
            }
            if seq.generating && dim_rel >= 3 {
                push(BoundEntry::new(
                    "flex theorem bound",
                    &src,
                    format!("l(S) <= max{{n : flex_min_dim(n) <= {dim_rel}}}"),
                    l as u128,
                    Relation::Le,
                    flex_theorem_max_length(dim_rel)? as u128,
                ));
            }
        }

        // word-level lemmas need the letters of S to be independent modulo Lin_0
        if (da || df) && d1 == run.set.len() && l >= 2 {
            if let Some(w) = find_new_word(alg, &run.set, l)? {
                if da {
                    let c = canonical_alt_form(&w)?;
                    if let Blocks::Alt { x, .. } = &c.blocks {
                        push(BoundEntry::new(
                            "alt word dimension",
                            &src,
                            format!("dim Lin_n(S) - d0 >= bound(n, k) for {w} with n = {l}, k = {}", x.len()),
                            total,
                            Relation::Ge,
                            alt_word_dim_bound(l, x.len())?,
                        ));
                    }
                }
                if df && l >= 3 {
                    let c = canonical_flex_form(&w)?;
                    if let Blocks::Flex { shape, x, y, z, .. } = &c.blocks {
                        let (j, k, ll) = (x.len(), y.len(), z.len());
                        if matches!(shape, Shape::Eoo | Shape::Oee | Shape::O11) {
                            let d2 = seq.d.get(2).copied().unwrap_or(0) as u128;
                            let want = (j * k).max(k * ll).max(j * ll) as u128;
                            push(BoundEntry::new(
                                "flex short length d2",
                                &src,
                                format!("d2 >= max(jk, kl, jl) for {w}, (j,k,l) = ({j},{k},{ll})"),
                                d2,
                                Relation::Ge,
                                want,
                            ));
                            push(BoundEntry::new(
                                "flex short length d1",
                                &src,
                                format!("d1 >= max(j, k, l) for {w}"),
                                d1 as u128,
                                Relation::Ge,
                                j.max(k).max(ll) as u128,
                            ));
                        }
                        if k == 1 && ll == 1 {
                            push(BoundEntry::new(
                                "flex single-letter blocks",
                                &src,
                                format!("dim Lin_n(S) - d0 >= 2^(n-2) + n - 2 for {w}, n = {l}"),
                                total,
                                Relation::Ge,
                                pow2(l - 2)? + l as u128 - 2,
                            ));
                        }
                    }
                }
            }
        }
    }

    if let Some(l) = data.algebra_length {
        let src = "algebra";
        if da {
            if l >= 2 {
                push(BoundEntry::new(
                    "alt theorem",
                    src,
                    format!("dim A - d0 >= 2^(l-1) + l - 2, l(A) = {l}"),
                    dim_rel,
                    Relation::Ge,
                    alt_min_dim(l)?,
                ));
            }
            if dim_rel >= 3 {
                push(BoundEntry::new(
                    "alt corollary",
                    src,
                    format!("l(A) <= ceil(log2(dim A - d0)), dim A - d0 = {dim_rel}"),
                    l as u128,
                    Relation::Le,
                    alt_max_length(dim_rel)? as u128,
                ));
            }
        }
        if df {
            if l >= 1 {
                push(BoundEntry::new(
                    "flex theorem",
                    src,
                    format!("dim A - d0 >= flex_min_dim(l), l(A) = {l}"),
                    dim_rel,
                    Relation::Ge,
                    flex_min_dim(l)?,
                ));
            }
            if dim_rel >= 3 {
                push(BoundEntry::new(
                    "flex corollary",
                    src,
                    format!("l(A) <= corollary bound of dim A - d0 = {dim_rel}"),
                    l as u128,
                    Relation::Le,
                    flex_max_length(dim_rel)? as u128,
                ));
                push(BoundEntry::new(
                    "flex theorem bound",
                    src,
                    format!("l(A) <= max{{n : flex_min_dim(n) <= {dim_rel}}}"),
                    l as u128,
                    Relation::Le,
                    flex_theorem_max_length(dim_rel)? as u128,
                ));
            }
        }
        if slow {
            push(BoundEntry::new("slow growth", src, "l(A) <= dim A - d0".into(), l as u128, Relation::Le, dim_rel));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn formulas() {
        assert_eq!(alt_min_dim(2).unwrap(), 2);
        assert_eq!(alt_min_dim(3).unwrap(), 5);
        assert_eq!(alt_min_dim(10).unwrap(), 520);
        assert!(alt_min_dim(1).is_err());
        assert_eq!(alt_max_length(4).unwrap(), 2);
        assert_eq!(alt_max_length(8).unwrap(), 3);
        assert_eq!(alt_max_length(9).unwrap(), 4);
        assert!(alt_max_length(2).is_err());
        assert_eq!(flex_min_dim(2).unwrap(), 2);
        assert_eq!(flex_min_dim(3).unwrap(), 5);
        assert_eq!(flex_min_dim(6).unwrap(), 15);
        assert!(flex_min_dim(0).is_err());
        assert_eq!(flex_max_length(5).unwrap(), 3);
        assert_eq!(flex_max_length(10).unwrap(), 5);
        assert_eq!(flex_max_length(11).unwrap(), 5);
        assert_eq!(flex_max_length(12).unwrap(), 5);
        assert_eq!(flex_max_length(13).unwrap(), 6);
        assert_eq!(quick_set_bounds(2, QuickClass::Alt), 4);
        assert_eq!(quick_set_bounds(2, QuickClass::Flex), 5);
        assert_eq!(quick_set_bounds(0, QuickClass::Flex), 0);
        assert_eq!(alt_word_dim_bound(3, 1).unwrap(), 5);
        assert_eq!(alt_word_dim_bound(4, 2).unwrap(), 11);
        assert_eq!(alt_word_dim_bound(2, 1).unwrap(), 2);
    }

    #[test]
    fn theorem_form_is_never_weaker() {
        for d in 3..2000u128 {
            assert!(flex_theorem_max_length(d).unwrap() <= flex_max_length(d).unwrap(), "d = {d}");
        }
        assert_eq!(flex_theorem_max_length(5).unwrap(), 3);
        assert_eq!(flex_theorem_max_length(15).unwrap(), 6);
    }

    #[test]
    fn alt_word_bound_minimum_is_theorem_value() {
        for n in 2..20 {
            let least = (1..n).map(|k| alt_word_dim_bound(n, k).unwrap()).min().unwrap();
            assert_eq!(least, alt_min_dim(n).unwrap());
        }
    }
}
