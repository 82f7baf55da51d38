//! Bracketed words over a generator list.
//!
//! Letters are stored 0-based; the textual syntax `((1 2) 3)` is 1-based.

use std::fmt;

use crate::algebra::{Algebra, Element};
use crate::error::{Error, Result};

/// Default cap on the number of words a single enumeration may produce.
pub const DEFAULT_WORD_CAP: u128 = 5_000_000;

/// A generator set `S`, kept in input order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratorSet {
    pub elements: Vec<Element>,
    pub labels: Option<Vec<String>>,
}

impl GeneratorSet {
    pub fn new(elements: Vec<Element>) -> Self {
        GeneratorSet { elements, labels: None }
    }

    /// The basis vectors with the given 1-based indices.
    pub fn from_basis_indices(alg: &Algebra, indices: &[usize]) -> Result<Self> {
        let elements = indices.iter().map(|&i| alg.basis(i)).collect::<Result<Vec<_>>>()?;
        Ok(GeneratorSet::new(elements))
    }

    /// All basis vectors `b_1..b_n`.
    pub fn full_basis(alg: &Algebra) -> Self {
        let idx: Vec<usize> = (1..=alg.dim()).collect();
        Self::from_basis_indices(alg, &idx).expect("indices in range")
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// True when some element occurs twice; allowed, but worth reporting.
    pub fn has_duplicates(&self) -> bool {
        let e = &self.elements;
        (0..e.len()).any(|i| (i + 1..e.len()).any(|j| e[i] == e[j]))
    }

    pub fn check_against(&self, alg: &Algebra) -> Result<()> {
        for e in &self.elements {
            if e.dim() != alg.dim() {
                return Err(Error::DimensionMismatch { expected: alg.dim(), got: e.dim() });
            }
            if !e.coords().iter().all(|c| alg.field().owns(c)) {
                return Err(Error::FieldMismatch);
            }
        }
        Ok(())
    }
}

/// A bracketing of letters: a full binary tree whose leaves are letter indices.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum WordTree {
    Leaf(usize),
    Node(Box<WordTree>, Box<WordTree>),
}

impl WordTree {
    pub fn leaf(i: usize) -> Self {
        WordTree::Leaf(i)
    }

    pub fn node(l: WordTree, r: WordTree) -> Self {
        WordTree::Node(Box::new(l), Box::new(r))
    }

    /// Number of leaves.
    pub fn len(&self) -> usize {
        match self {
            WordTree::Leaf(_) => 1,
            WordTree::Node(l, r) => l.len() + r.len(),
        }
    }

    pub fn is_leaf(&self) -> bool {
        matches!(self, WordTree::Leaf(_))
    }

    /// Letters in left-to-right order.
    pub fn letters(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.len());
        self.collect_letters(&mut out);
        out
    }

    fn collect_letters(&self, out: &mut Vec<usize>) {
        match self {
            WordTree::Leaf(i) => out.push(*i),
            WordTree::Node(l, r) => {
                l.collect_letters(out);
                r.collect_letters(out);
            }
        }
    }

    pub fn map_letters(&self, f: &impl Fn(usize) -> usize) -> WordTree {
        match self {
            WordTree::Leaf(i) => WordTree::Leaf(f(*i)),
            WordTree::Node(l, r) => WordTree::node(l.map_letters(f), r.map_letters(f)),
        }
    }

    /// Replaces leaves, in left-to-right order, by the given letters.
    pub fn with_letters(&self, letters: &[usize]) -> WordTree {
        let mut it = letters.iter().copied();
        let t = self.fill(&mut it);
        debug_assert!(it.next().is_none());
        t
    }

    fn fill(&self, it: &mut impl Iterator<Item = usize>) -> WordTree {
        match self {
            WordTree::Leaf(_) => WordTree::Leaf(it.next().expect("enough letters")),
            WordTree::Node(l, r) => {
                let l = l.fill(it);
                let r = r.fill(it);
                WordTree::node(l, r)
            }
        }
    }

    pub fn max_letter(&self) -> usize {
        self.letters().into_iter().max().unwrap_or(0)
    }

    /// Parses `((1 2) 3)` style syntax with 1-based letters.
    pub fn parse(text: &str) -> Result<WordTree> {
        let tokens = tokenize(text)?;
        let mut pos = 0;
        let t = parse_tree(&tokens, &mut pos)?;
        if pos != tokens.len() {
            return Err(Error::Parse(format!("trailing input in word `{text}`")));
        }
        Ok(t)
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Open,
    Close,
    Num(usize),
}

fn tokenize(text: &str) -> Result<Vec<Tok>> {
    let mut out = Vec::new();
    let chars: Vec<char> = text.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        match c {
            '(' => out.push(Tok::Open),
            ')' => out.push(Tok::Close),
            c if c.is_whitespace() || c == '*' || c == '·' || c == ',' => {}
            c if c.is_ascii_digit() => {
                let start = i;
                while i + 1 < chars.len() && chars[i + 1].is_ascii_digit() {
                    i += 1;
                }
                let s: String = chars[start..=i].iter().collect();
                let n: usize = s.parse().map_err(|_| Error::Parse(format!("bad letter `{s}`")))?;
                if n == 0 {
                    return Err(Error::Parse("letters are 1-based".into()));
                }
                out.push(Tok::Num(n - 1));
            }
            other => return Err(Error::Parse(format!("unexpected character `{other}` in word"))),
        }
        i += 1;
    }
    if out.is_empty() {
        return Err(Error::Parse("empty word".into()));
    }
    Ok(out)
}

fn parse_tree(tokens: &[Tok], pos: &mut usize) -> Result<WordTree> {
    match tokens.get(*pos) {
        Some(Tok::Num(n)) => {
            *pos += 1;
            Ok(WordTree::Leaf(*n))
        }
        Some(Tok::Open) => {
            *pos += 1;
            let mut items = Vec::new();
            while tokens.get(*pos) != Some(&Tok::Close) {
                if *pos >= tokens.len() {
                    return Err(Error::Parse("unbalanced parentheses".into()));
                }
                items.push(parse_tree(tokens, pos)?);
            }
            *pos += 1;
            match items.len() {
                1 => Ok(items.pop().unwrap()),
                2 => {
                    let r = items.pop().unwrap();
                    let l = items.pop().unwrap();
                    Ok(WordTree::node(l, r))
                }
                k => Err(Error::Parse(format!("a bracket must hold 2 factors, found {k}"))),
            }
        }
        Some(Tok::Close) => Err(Error::Parse("unexpected `)`".into())),
        None => Err(Error::Parse("unexpected end of word".into())),
    }
}

impl fmt::Display for WordTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WordTree::Leaf(i) => write!(f, "{}", i + 1),
            WordTree::Node(l, r) => write!(f, "({l} {r})"),
        }
    }
}

/// Evaluates `w` in `alg` with letter `i` bound to `S[i]`.
pub fn evaluate(alg: &Algebra, set: &GeneratorSet, w: &WordTree) -> Result<Element> {
    set.check_against(alg)?;
    eval_unchecked(alg, set, w)
}

pub(crate) fn eval_unchecked(alg: &Algebra, set: &GeneratorSet, w: &WordTree) -> Result<Element> {
    match w {
        WordTree::Leaf(i) => set
            .elements
            .get(*i)
            .cloned()
            .ok_or(Error::IndexOutOfRange { index: i + 1, bound: set.len() }),
        WordTree::Node(l, r) => {
            let a = eval_unchecked(alg, set, l)?;
            let b = eval_unchecked(alg, set, r)?;
            Ok(alg.mul(&a, &b))
        }
    }
}

/// Catalan number `C_n`, or `None` on overflow.
pub fn catalan(n: usize) -> Option<u128> {
    let mut c: u128 = 1;
    for i in 0..n as u128 {
        // C_{i+1} = C_i * 2(2i+1) / (i+2)
        c = c.checked_mul(2 * (2 * i + 1))? / (i + 2);
    }
    Some(c)
}

fn check_cap(count: Option<u128>, cap: u128, what: &str) -> Result<()> {
    match count {
        Some(c) if c <= cap => Ok(()),
        _ => Err(Error::ResourceLimit(format!("{what} exceeds the cap of {cap} words"))),
    }
}

/// All bracketing shapes with `m` leaves (leaves labelled 0), in the fixed order:
/// split point ascending, then left shape, then right shape.
pub fn shapes(m: usize) -> Vec<WordTree> {
    let mut memo: Vec<Vec<WordTree>> = vec![Vec::new(), vec![WordTree::Leaf(0)]];
    for size in 2..=m {
        let mut v = Vec::new();
        for left in 1..size {
            for l in &memo[left] {
                for r in &memo[size - left] {
                    v.push(WordTree::node(l.clone(), r.clone()));
                }
            }
        }
        memo.push(v);
    }
    if m == 0 {
        Vec::new()
    } else {
        memo.swap_remove(m)
    }
}

/// Mixed-radix odometer, last digit fastest.
#[derive(Debug, Clone)]
struct Odometer {
    digits: Vec<usize>,
    bases: Vec<usize>,
    fresh: bool,
}

impl Odometer {
    fn new(m: usize, base: usize) -> Self {
        Self::mixed(vec![base; m])
    }

    fn mixed(bases: Vec<usize>) -> Self {
        Odometer { digits: vec![0; bases.len()], bases, fresh: true }
    }

    fn advance(&mut self) -> bool {
        if self.fresh {
            self.fresh = false;
            return self.bases.iter().all(|&b| b > 0);
        }
        for (d, &b) in self.digits.iter_mut().zip(&self.bases).rev() {
            *d += 1;
            if *d < b {
                return true;
            }
            *d = 0;
        }
        false
    }
}

/// Stream of every word in `S^m`, all bracketings times all letter assignments.
pub struct FullWords {
    shapes: Vec<WordTree>,
    shape: usize,
    letters: Odometer,
    s: usize,
    m: usize,
}

impl Iterator for FullWords {
    type Item = WordTree;

    fn next(&mut self) -> Option<WordTree> {
        loop {
            if self.shape >= self.shapes.len() {
                return None;
            }
            if self.letters.advance() {
                return Some(self.shapes[self.shape].with_letters(&self.letters.digits));
            }
            self.shape += 1;
            self.letters = Odometer::new(self.m, self.s);
        }
    }
}

pub fn count_full(s: usize, m: usize) -> Option<u128> {
    if m == 0 {
        return Some(0);
    }
    catalan(m - 1)?.checked_mul((s as u128).checked_pow(m as u32)?)
}

pub fn enumerate_full(s: usize, m: usize) -> Result<FullWords> {
    enumerate_full_capped(s, m, DEFAULT_WORD_CAP)
}

pub fn enumerate_full_capped(s: usize, m: usize, cap: u128) -> Result<FullWords> {
    if m == 0 {
        return Err(Error::DomainError("word length must be at least 1".into()));
    }
    check_cap(count_full(s, m), cap, "full enumeration")?;
    Ok(FullWords { shapes: shapes(m), shape: 0, letters: Odometer::new(m, s), s, m })
}

/// Side on which a letter multiplies: `L_s(w) = s w`, `R_s(w) = w s`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Side {
    L,
    R,
}

/// A restricted word read from the inside out: the innermost pair `(p q)`
/// (or a single letter) followed by one-letter multiplications, inner first.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Chain {
    pub base: ChainBase,
    pub ops: Vec<(Side, usize)>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ChainBase {
    Single(usize),
    Pair(usize, usize),
}

impl Chain {
    /// Reads `w` as a chain; fails unless every node has a leaf child.
    pub fn from_tree(w: &WordTree) -> Result<Chain> {
        let mut ops = Vec::new();
        let mut cur = w;
        loop {
            match cur {
                WordTree::Leaf(p) => {
                    ops.reverse();
                    return Ok(Chain { base: ChainBase::Single(*p), ops });
                }
                WordTree::Node(l, r) => match (&**l, &**r) {
                    (WordTree::Leaf(p), WordTree::Leaf(q)) => {
                        ops.reverse();
                        return Ok(Chain { base: ChainBase::Pair(*p, *q), ops });
                    }
                    (WordTree::Leaf(s), t) => {
                        ops.push((Side::L, *s));
                        cur = t;
                    }
                    (t, WordTree::Leaf(s)) => {
                        ops.push((Side::R, *s));
                        cur = t;
                    }
                    _ => return Err(Error::NotRestrictedForm),
                },
            }
        }
    }

    pub fn to_tree(&self) -> WordTree {
        let mut t = match self.base {
            ChainBase::Single(p) => WordTree::Leaf(p),
            ChainBase::Pair(p, q) => WordTree::node(WordTree::Leaf(p), WordTree::Leaf(q)),
        };
        for &(side, s) in &self.ops {
            t = match side {
                Side::L => WordTree::node(WordTree::Leaf(s), t),
                Side::R => WordTree::node(t, WordTree::Leaf(s)),
            };
        }
        t
    }

    pub fn len(&self) -> usize {
        let b = match self.base {
            ChainBase::Single(_) => 1,
            ChainBase::Pair(..) => 2,
        };
        b + self.ops.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

pub fn is_restricted(w: &WordTree) -> bool {
    Chain::from_tree(w).is_ok()
}

/// Distinct words of `S^(m)`: `s` words for `m = 1`, `2^(m-2) s^m` for `m >= 2`.
pub struct RestrictedWords {
    s: usize,
    /// digits: p, q, then one digit in `0..2s` per further letter (side * s + letter)
    odo: Odometer,
    digits_base_pair: bool,
}

impl Iterator for RestrictedWords {
    type Item = WordTree;

    fn next(&mut self) -> Option<WordTree> {
        if !self.odo.advance() {
            return None;
        }
        let d = &self.odo.digits;
        if !self.digits_base_pair {
            return Some(WordTree::Leaf(d[0]));
        }
        let ops = d[2..]
            .iter()
            .map(|&x| if x < self.s { (Side::L, x) } else { (Side::R, x - self.s) })
            .collect();
        Some(Chain { base: ChainBase::Pair(d[0], d[1]), ops }.to_tree())
    }
}

pub fn count_restricted(s: usize, m: usize) -> Option<u128> {
    match m {
        0 => Some(0),
        1 => Some(s as u128),
        _ => 2u128.checked_pow(m as u32 - 2)?.checked_mul((s as u128).checked_pow(m as u32)?),
    }
}

pub fn enumerate_restricted(s: usize, m: usize) -> Result<RestrictedWords> {
    enumerate_restricted_capped(s, m, DEFAULT_WORD_CAP)
}

pub fn enumerate_restricted_capped(s: usize, m: usize, cap: u128) -> Result<RestrictedWords> {
    if m == 0 {
        return Err(Error::DomainError("word length must be at least 1".into()));
    }
    check_cap(count_restricted(s, m), cap, "restricted enumeration")?;
    if m == 1 {
        return Ok(RestrictedWords { s, odo: Odometer::new(1, s), digits_base_pair: false });
    }
    let mut bases = vec![s, s];
    bases.extend(std::iter::repeat(2 * s).take(m - 2));
    Ok(RestrictedWords { s, odo: Odometer::mixed(bases), digits_base_pair: true })
}

/// An application sequence `X_1 X_2 ... X_{m-1} s_m` with `X_i` in `{L, R}`
/// acting on the innermost letter; `ops[0]` is the outermost operator.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LrWord {
    pub ops: Vec<(Side, usize)>,
    pub inner: usize,
}

impl LrWord {
    pub fn to_tree(&self) -> WordTree {
        let mut t = WordTree::Leaf(self.inner);
        for &(side, s) in self.ops.iter().rev() {
            t = match side {
                Side::L => WordTree::node(WordTree::Leaf(s), t),
                Side::R => WordTree::node(t, WordTree::Leaf(s)),
            };
        }
        t
    }
}

/// Every operator sequence of length `m - 1`, `2^(m-1) s^m` in total. Different
/// sequences may give the same tree (`L_a b = R_b a`).
pub fn enumerate_lr_sequences(s: usize, m: usize) -> Result<impl Iterator<Item = LrWord>> {
    if m == 0 {
        return Err(Error::DomainError("word length must be at least 1".into()));
    }
    let count = 2u128
        .checked_pow(m as u32 - 1)
        .and_then(|x| x.checked_mul((s as u128).checked_pow(m as u32)?));
    check_cap(count, DEFAULT_WORD_CAP, "operator sequence enumeration")?;
    let mut bases = vec![2 * s; m - 1];
    bases.push(s);
    let mut odo = Odometer::mixed(bases);
    Ok(std::iter::from_fn(move || {
        if !odo.advance() {
            return None;
        }
        let d = &odo.digits;
        let ops = d[..m - 1]
            .iter()
            .map(|&x| if x < s { (Side::L, x) } else { (Side::R, x - s) })
            .collect();
        Some(LrWord { ops, inner: d[m - 1] })
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldSpec;
    use std::collections::HashSet;

    #[test]
    fn catalan_numbers() {
        let c: Vec<u128> = (0..8).map(|n| catalan(n).unwrap()).collect();
        assert_eq!(c, vec![1, 1, 2, 5, 14, 42, 132, 429]);
    }

    #[test]
    fn full_counts() {
        assert_eq!(enumerate_full(2, 2).unwrap().count(), 4);
        assert_eq!(enumerate_full(1, 4).unwrap().count(), 5);
        assert_eq!(enumerate_full(2, 3).unwrap().count(), 16);
        assert_eq!(enumerate_full(3, 1).unwrap().count(), 3);
    }

    #[test]
    fn full_order_is_fixed() {
        let words: Vec<String> = enumerate_full(2, 2).unwrap().map(|w| w.to_string()).collect();
        assert_eq!(words, ["(1 1)", "(1 2)", "(2 1)", "(2 2)"]);
        let first: Vec<String> = enumerate_full(1, 3).unwrap().map(|w| w.to_string()).collect();
        assert_eq!(first, ["(1 (1 1))", "((1 1) 1)"]);
    }

    #[test]
    fn restricted_counts() {
        assert_eq!(enumerate_restricted(2, 1).unwrap().count(), 2);
        assert_eq!(enumerate_restricted(2, 2).unwrap().count(), 4);
        assert_eq!(enumerate_restricted(1, 3).unwrap().count(), 2);
        assert_eq!(enumerate_lr_sequences(1, 3).unwrap().count(), 4);
        assert_eq!(enumerate_restricted(2, 4).unwrap().count(), 64);
    }

    #[test]
    fn restricted_words_are_distinct_and_restricted() {
        let ws: Vec<WordTree> = enumerate_restricted(2, 5).unwrap().collect();
        let set: HashSet<_> = ws.iter().cloned().collect();
        assert_eq!(set.len(), ws.len());
        assert!(ws.iter().all(|w| is_restricted(w) && w.len() == 5));
        // the operator sequences cover exactly the same trees
        let from_seq: HashSet<_> = enumerate_lr_sequences(2, 5).unwrap().map(|x| x.to_tree()).collect();
        assert_eq!(from_seq, set);
    }

    #[test]
    fn chain_round_trip() {
        let w = WordTree::parse("(3 ((1 2) 4))").unwrap();
        let c = Chain::from_tree(&w).unwrap();
        assert_eq!(c.base, ChainBase::Pair(0, 1));
        assert_eq!(c.ops, vec![(Side::R, 3), (Side::L, 2)]);
        assert_eq!(c.to_tree(), w);
        let bad = WordTree::parse("((1 2) (3 4))").unwrap();
        assert_eq!(Chain::from_tree(&bad), Err(Error::NotRestrictedForm));
    }

    #[test]
    fn parse_and_print() {
        let w = WordTree::parse("((1 2) 3)").unwrap();
        assert_eq!(w.to_string(), "((1 2) 3)");
        assert_eq!(w.letters(), vec![0, 1, 2]);
        assert!(WordTree::parse("(1 2 3)").is_err());
        assert!(WordTree::parse("(1 2").is_err());
        assert!(WordTree::parse("(0 1)").is_err());
    }

    #[test]
    fn evaluation_respects_brackets() {
        let f = FieldSpec::Rational;
        let mut a = Algebra::new(f, 3).unwrap();
        a.add_product_i64(1, 1, 2, 1).unwrap();
        a.add_product_i64(2, 1, 3, 1).unwrap();
        let s = GeneratorSet::from_basis_indices(&a, &[1]).unwrap();
        let left = evaluate(&a, &s, &WordTree::parse("((1 1) 1)").unwrap()).unwrap();
        let right = evaluate(&a, &s, &WordTree::parse("(1 (1 1))").unwrap()).unwrap();
        assert_eq!(left, a.basis(3).unwrap());
        assert!(right.is_zero());
        assert!(matches!(
            evaluate(&a, &s, &WordTree::parse("(1 2)").unwrap()),
            Err(Error::IndexOutOfRange { .. })
        ));
    }

    #[test]
    fn cap_is_enforced() {
        assert!(matches!(enumerate_full_capped(3, 6, 100), Err(Error::ResourceLimit(_))));
    }
}
