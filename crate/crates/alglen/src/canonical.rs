//! Normal forms of one-letter-at-a-time words under the descending
//! equivalences, and the induced classes of pairwise swappable letters.
//!
//! Everything here is formal: letters are generator indices and no algebra is
//! consulted. [`verify_equivalence`] checks a normal form against a concrete
//! algebra.
//!
//! Blocks are stored as letter lists, inner letter first.

use std::fmt;

use serde::Serialize;

use crate::algebra::Algebra;
use crate::error::{Error, Result};
use crate::identities::Variant;
use crate::spans::{lin_k, SpanBasis};
use crate::words::{eval_unchecked, Chain, ChainBase, GeneratorSet, Side, WordTree};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Shape {
    #[serde(rename = "EOO")]
    Eoo,
    #[serde(rename = "OEE")]
    Oee,
    #[serde(rename = "O11")]
    O11,
    #[serde(rename = "OO")]
    Oo,
    #[serde(rename = "OE")]
    Oe,
}

impl fmt::Display for Shape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Shape::Eoo => "EOO",
            Shape::Oee => "OEE",
            Shape::O11 => "O11",
            Shape::Oo => "OO",
            Shape::Oe => "OE",
        };
        f.write_str(s)
    }
}

/// `(xy)z` or its mirror `z(yx)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Orientation {
    Xyz,
    Zyx,
}

/// Which side the outermost letter of a swapping block multiplies from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Kind {
    Left,
    Right,
}

/// A swapping block: letters alternate sides, ending with `kind` outermost.
fn block_tree(letters: &[usize], kind: Kind) -> WordTree {
    let n = letters.len();
    let mut t = WordTree::leaf(letters[0]);
    for (i, &s) in letters.iter().enumerate().skip(1) {
        let left = (kind == Kind::Left) == ((n - 1 - i) % 2 == 0);
        t = if left { WordTree::node(WordTree::leaf(s), t) } else { WordTree::node(t, WordTree::leaf(s)) };
    }
    t
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
#[serde(tag = "variant", rename_all = "kebab-case")]
pub enum Blocks {
    /// `(((x_1 x_2) ...) x_k) (y_{m-k} (... (y_2 y_1)))`.
    Alt { x: Vec<usize>, y: Vec<usize> },
    /// `(xy)z` with `x` left swapping and `y, z` right swapping, or the mirror
    /// `z(yx)` with `z, y` left swapping and `x` right swapping.
    Flex { orientation: Orientation, shape: Shape, x: Vec<usize>, y: Vec<usize>, z: Vec<usize> },
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct CanonicalWord {
    pub sign: i8,
    pub blocks: Blocks,
    /// Letters grouped into pairwise swappable classes.
    pub partition: Vec<Vec<usize>>,
}

impl CanonicalWord {
    pub fn variant(&self) -> Variant {
        match self.blocks {
            Blocks::Alt { .. } => Variant::Alt,
            Blocks::Flex { .. } => Variant::Flex,
        }
    }

    pub fn shape(&self) -> Option<Shape> {
        match self.blocks {
            Blocks::Flex { shape, .. } => Some(shape),
            Blocks::Alt { .. } => None,
        }
    }

    pub fn len(&self) -> usize {
        match &self.blocks {
            Blocks::Alt { x, y } => x.len() + y.len(),
            Blocks::Flex { x, y, z, .. } => x.len() + y.len() + z.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// The unsigned normal-form word.
    pub fn tree(&self) -> WordTree {
        match &self.blocks {
            Blocks::Alt { x, y } => {
                let mut xt = WordTree::leaf(x[0]);
                for &s in &x[1..] {
                    xt = WordTree::node(xt, WordTree::leaf(s));
                }
                let mut yt = WordTree::leaf(y[0]);
                for &s in &y[1..] {
                    yt = WordTree::node(WordTree::leaf(s), yt);
                }
                WordTree::node(xt, yt)
            }
            Blocks::Flex { orientation, x, y, z, .. } => match orientation {
                Orientation::Xyz => WordTree::node(
                    WordTree::node(block_tree(x, Kind::Left), block_tree(y, Kind::Right)),
                    block_tree(z, Kind::Right),
                ),
                Orientation::Zyx => WordTree::node(
                    block_tree(z, Kind::Left),
                    WordTree::node(block_tree(y, Kind::Left), block_tree(x, Kind::Right)),
                ),
            },
        }
    }

    pub fn largest_class(&self) -> usize {
        self.partition.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// Some class holds the same letter twice.
    pub fn has_repeated_letter_in_class(&self) -> bool {
        self.partition.iter().any(|c| {
            let mut v = c.clone();
            v.sort_unstable();
            v.windows(2).any(|w| w[0] == w[1])
        })
    }
}

impl fmt::Display for CanonicalWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = if self.sign < 0 { "-" } else { "+" };
        write!(f, "{sign}{}", self.tree())?;
        if let Some(s) = self.shape() {
            write!(f, " [{s}]")?;
        }
        Ok(())
    }
}

fn chain_of(w: &WordTree) -> Result<(usize, usize, Vec<(Side, usize)>)> {
    let chain = Chain::from_tree(w)?;
    match chain.base {
        ChainBase::Pair(p, q) => Ok((p, q, chain.ops)),
        ChainBase::Single(_) => Err(Error::WordTooShort(1)),
    }
}

/// Two-block normal form. The innermost product of up to three letters is
/// read literally; every further letter enters by `(xy)s ~ -(xs)y` or
/// `s(xy) ~ -x(sy)`.
pub fn canonical_alt_form(w: &WordTree) -> Result<CanonicalWord> {
    let (p, q, ops) = chain_of(w)?;
    let (mut x, mut y) = (vec![p], vec![q]);
    let mut sign = 1i8;
    for (n, &(side, s)) in ops.iter().enumerate() {
        match (n, side) {
            (0, Side::R) => {
                x.push(q);
                y = vec![s];
            }
            (0, Side::L) => {
                x = vec![s];
                y = vec![q, p];
            }
            (_, Side::R) => {
                x.push(s);
                sign = -sign;
            }
            (_, Side::L) => {
                y.push(s);
                sign = -sign;
            }
        }
    }
    let mut first = vec![y[0]];
    first.extend_from_slice(&x[1..]);
    let mut second = vec![x[0]];
    second.extend_from_slice(&y[1..]);
    Ok(CanonicalWord { sign, blocks: Blocks::Alt { x, y }, partition: vec![first, second] })
}

#[derive(Debug, Clone, PartialEq, Eq)]
struct Form {
    orient: Orientation,
    sign: i8,
    x: Vec<usize>,
    y: Vec<usize>,
    z: Vec<usize>,
}

impl Form {
    fn xyz(sign: i8, x: Vec<usize>, y: Vec<usize>, z: Vec<usize>) -> Form {
        Form { orient: Orientation::Xyz, sign, x, y, z }
    }

    fn zyx(sign: i8, x: Vec<usize>, y: Vec<usize>, z: Vec<usize>) -> Form {
        Form { orient: Orientation::Zyx, sign, x, y, z }
    }

    /// The opposite-algebra image; block lists are unchanged.
    fn mirror(mut self) -> Form {
        self.orient = match self.orient {
            Orientation::Xyz => Orientation::Zyx,
            Orientation::Zyx => Orientation::Xyz,
        };
        self
    }

    fn lens(&self) -> (usize, usize, usize) {
        (self.x.len(), self.y.len(), self.z.len())
    }

    /// Multiplies by one more letter and restores block form:
    /// `((xy)z)s ~ -(sz)(xy)` and `s((xy)z) ~ -x((sy)z)`, mirrored for `z(yx)`.
    fn apply(self, side: Side, s: usize) -> Form {
        if self.orient == Orientation::Zyx {
            let flipped = match side {
                Side::L => Side::R,
                Side::R => Side::L,
            };
            return self.mirror().apply(flipped, s).mirror();
        }
        let Form { sign, x, mut y, mut z, .. } = self;
        match side {
            Side::R => {
                z.push(s);
                Form::zyx(-sign, y, x, z)
            }
            Side::L => {
                y.push(s);
                Form::zyx(-sign, z, y, x)
            }
        }
    }
}

fn shape_of(j: usize, k: usize, l: usize) -> Option<Shape> {
    let odd = |n: usize| n % 2 == 1;
    if odd(j) && k == 1 && l == 1 {
        Some(Shape::O11)
    } else if j == 1 && !odd(k) && odd(l) {
        Some(Shape::Oo)
    } else if odd(j) && odd(k) && k >= 3 && l == 1 {
        Some(Shape::Oe)
    } else if !odd(j) && odd(k) && odd(l) {
        Some(Shape::Eoo)
    } else if odd(j) && !odd(k) && !odd(l) {
        Some(Shape::Oee)
    } else {
        None
    }
}

/// Pulls outer letters of `y` and `z` out in pairs down to length 1 or 2,
/// resolves the four small cases, and pushes the letters back. The result has
/// lengths of type EOO, OO or all odd.
fn phase1(f: Form) -> Form {
    if f.orient == Orientation::Zyx {
        return phase1(f.mirror()).mirror();
    }
    let (j, k, l) = f.lens();
    if k >= 3 {
        let Form { sign, x, mut y, z, .. } = f;
        let y1 = y.pop().expect("k >= 3");
        let y2 = y.pop().expect("k >= 3");
        return phase1(Form::xyz(sign, x, y, z)).apply(Side::L, y2).apply(Side::R, y1);
    }
    if l >= 3 {
        let Form { sign, x, y, mut z, .. } = f;
        let z1 = z.pop().expect("l >= 3");
        let z2 = z.pop().expect("l >= 3");
        return phase1(Form::xyz(sign, x, y, z)).apply(Side::R, z2).apply(Side::L, z1);
    }
    let Form { sign, x, y, z, .. } = f;
    match (k, l) {
        (1, 1) => Form::xyz(sign, x, y, z),
        // (xy)(z_in z_out) ~ -z_out(z_in(xy))
        (1, 2) => {
            let mut xs = x;
            xs.push(y[0]);
            phase1(Form::zyx(-sign, xs, vec![z[0]], vec![z[1]]))
        }
        (2, 1) if j == 1 => Form::xyz(sign, x, y, z),
        // ((x_1 x')y)z ~ -(zy)(x_1 x')
        (2, 1) => {
            let mut xs = x;
            let x1 = xs.pop().expect("j >= 2");
            let mut zs = y;
            zs.push(z[0]);
            phase1(Form::zyx(-sign, xs, vec![x1], zs))
        }
        // (xy)(z_in z_out) ~ -(x z_in)(y z_out), with y re-read as left swapping
        (2, 2) => phase1(Form::xyz(-sign, x, vec![z[0]], vec![y[1], y[0], z[1]])),
        _ => unreachable!("block lengths are at least 1"),
    }
}

/// Resolves the all-odd case by pulling one letter out, normalizing the
/// even-length remainder, and pushing the letter back in.
fn phase2(f: Form) -> Form {
    let (j, k, l) = f.lens();
    if shape_of(j, k, l).is_some() {
        return f;
    }
    if f.orient == Orientation::Zyx {
        return phase2(f.mirror()).mirror();
    }
    let Form { sign, x, mut y, mut z, .. } = f;
    if k >= 2 {
        // (x(y' s))z ~ -(x(y' z))s
        let s = y.pop().expect("k >= 2");
        let core = phase1(Form::zyx(-sign, z, y, x));
        if core.orient == Orientation::Xyz && shape_of(core.x.len(), core.y.len(), core.z.len()) == Some(Shape::Oo) {
            // ((x y) z) s read literally: x y becomes one left swapping block
            let Form { sign, x, mut y, z, .. } = core;
            y.push(x[0]);
            return Form::xyz(sign, y, z, vec![s]);
        }
        core.apply(Side::R, s)
    } else {
        // (xy)(z' s) ~ -s(z'(xy))
        let s = z.pop().expect("l >= 3");
        let core = phase1(Form::zyx(-sign, y, x, z));
        if core.orient == Orientation::Zyx && shape_of(core.x.len(), core.y.len(), core.z.len()) == Some(Shape::Oo) {
            let Form { sign, mut x, y, z, .. } = core;
            let x0 = x.pop().expect("single letter");
            let mut xs = y;
            xs.push(x0);
            return Form::zyx(sign, xs, z, vec![s]);
        }
        core.apply(Side::L, s)
    }
}

fn flex_partition(shape: Shape, x: &[usize], y: &[usize], z: &[usize]) -> Vec<Vec<usize>> {
    let cat = |parts: &[&[usize]]| parts.concat();
    let mut classes = match shape {
        Shape::Eoo | Shape::O11 => {
            let first = cat(&[&x[..1], &z[1..]]);
            let second = cat(&[&x[1..], &y[..1]]);
            let third = cat(&[&y[1..], &z[..1]]);
            if x.len() + y.len() + z.len() == 3 {
                // (xy)z = R_z L_x y, so x and z are swappable
                vec![cat(&[&first, &third]), second]
            } else {
                vec![first, second, third]
            }
        }
        Shape::Oee => vec![
            cat(&[&x[..1], &y[1..]]),
            cat(&[&y[..1], &z[1..]]),
            cat(&[&x[1..], &z[..1]]),
        ],
        Shape::Oo => vec![cat(&[&y[1..], x, &z[..1]]), cat(&[&y[..1], &z[1..]])],
        Shape::Oe => vec![cat(&[&y[1..], z, &x[..1]]), cat(&[&y[..1], &x[1..]])],
    };
    classes.retain(|c| !c.is_empty());
    classes
}

/// Three-block normal form, normalized to one of the five shapes.
pub fn canonical_flex_form(w: &WordTree) -> Result<CanonicalWord> {
    let m = w.len();
    if m < 3 {
        return Err(Error::WordTooShort(m));
    }
    let (p, q, ops) = chain_of(w)?;
    let mut form = match ops[0] {
        (Side::R, s) => Form::xyz(1, vec![p], vec![q], vec![s]),
        (Side::L, s) => Form::zyx(1, vec![q], vec![p], vec![s]),
    };
    for &(side, s) in &ops[1..] {
        form = form.apply(side, s);
    }
    let form = phase2(phase1(form));
    let (j, k, l) = form.lens();
    let shape = shape_of(j, k, l)
        .ok_or_else(|| Error::Internal(format!("normalization ended at block lengths ({j}, {k}, {l})")))?;
    let partition = flex_partition(shape, &form.x, &form.y, &form.z);
    Ok(CanonicalWord {
        sign: form.sign,
        blocks: Blocks::Flex { orientation: form.orient, shape, x: form.x, y: form.y, z: form.z },
        partition,
    })
}

pub fn canonical_form(variant: Variant, w: &WordTree) -> Result<CanonicalWord> {
    match variant {
        Variant::Alt => canonical_alt_form(w),
        Variant::Flex => canonical_flex_form(w),
    }
}

/// Whether `w - sign * c` lies in `Lin_{m-1}(S)` in `alg`.
pub fn verify_equivalence(alg: &Algebra, set: &GeneratorSet, w: &WordTree, c: &CanonicalWord) -> Result<bool> {
    let lin = lin_k(alg, set, w.len().saturating_sub(1))?;
    verify_equivalence_in(alg, set, &lin, w, c)
}

/// As [`verify_equivalence`], with `Lin_{m-1}(S)` supplied by the caller.
pub fn verify_equivalence_in(
    alg: &Algebra,
    set: &GeneratorSet,
    lin: &SpanBasis,
    w: &WordTree,
    c: &CanonicalWord,
) -> Result<bool> {
    set.check_against(alg)?;
    if w.max_letter() >= set.len() {
        return Err(Error::IndexOutOfRange { index: w.max_letter() + 1, bound: set.len() });
    }
    let lhs = eval_unchecked(alg, set, w)?;
    let rhs = eval_unchecked(alg, set, &c.tree())?;
    let sign = alg.field().from_i64(i64::from(c.sign));
    let diff = lhs.sub(&rhs.scale(&sign));
    lin.contains(&diff)
}

/// Number of subword index pairs `(I, J)`: `(2^k - 1)(2^(m-k) - 1)`.
pub fn alt_subword_count(k: usize, m: usize) -> Result<u128> {
    if k == 0 || k >= m || m > 127 {
        return Err(Error::DomainError(format!("need 1 <= k <= m - 1 and m <= 127, got k = {k}, m = {m}")));
    }
    let a = (1u128 << k) - 1;
    let b = (1u128 << (m - k)) - 1;
    a.checked_mul(b).ok_or_else(|| Error::DomainError("count overflows".into()))
}

/// All pairs of nonempty index sets `I ⊆ {1..k}`, `J ⊆ {1..m-k}` (1-based,
/// ascending), ordered by the bitmask of `I`, then of `J`.
pub fn alt_subword_family(k: usize, m: usize) -> Result<impl Iterator<Item = (Vec<usize>, Vec<usize>)>> {
    alt_subword_count(k, m)?;
    if k >= 64 || m - k >= 64 {
        return Err(Error::ResourceLimit("index sets beyond 63 letters".into()));
    }
    let expand = |mask: u64| (0..64).filter(|b| mask >> b & 1 == 1).map(|b| b + 1).collect::<Vec<usize>>();
    let (ka, kb) = (k as u32, (m - k) as u32);
    Ok((1u64..(1u64 << ka)).flat_map(move |i| (1u64..(1u64 << kb)).map(move |j| (expand(i), expand(j)))))
}

/// The subword `w_{I,J} = (((y_{j_1} x_{i_2}) ...) x_{i_l}) (y_{j_m} (... (y_{j_2} x_{i_1})))`
/// of a two-block form, with 1-based index sets.
pub fn alt_subword(x: &[usize], y: &[usize], i: &[usize], j: &[usize]) -> Result<WordTree> {
    let bad = |v: &[usize], n: usize| v.is_empty() || v.iter().any(|&t| t == 0 || t > n);
    if bad(i, x.len()) || bad(j, y.len()) {
        return Err(Error::DomainError("index sets must be nonempty and in range".into()));
    }
    let mut left = WordTree::leaf(y[j[0] - 1]);
    for &t in &i[1..] {
        left = WordTree::node(left, WordTree::leaf(x[t - 1]));
    }
    let mut right = WordTree::leaf(x[i[0] - 1]);
    for &t in &j[1..] {
        right = WordTree::node(WordTree::leaf(y[t - 1]), right);
    }
    Ok(WordTree::node(left, right))
}

/// Serializable summary with 1-based letters.
#[derive(Debug, Clone, Serialize)]
pub struct CanonicalReport {
    pub input: String,
    pub variant: Variant,
    pub sign: i8,
    pub word: String,
    pub shape: Option<Shape>,
    pub orientation: Option<Orientation>,
    pub blocks: Vec<Vec<usize>>,
    pub partition: Vec<Vec<usize>>,
    pub verified: Option<bool>,
}

impl CanonicalReport {
    pub fn new(w: &WordTree, c: &CanonicalWord, verified: Option<bool>) -> Self {
        let one = |v: &[usize]| v.iter().map(|&t| t + 1).collect::<Vec<_>>();
        let (orientation, blocks) = match &c.blocks {
            Blocks::Alt { x, y } => (None, vec![one(x), one(y)]),
            Blocks::Flex { orientation, x, y, z, .. } => (Some(*orientation), vec![one(x), one(y), one(z)]),
        };
        CanonicalReport {
            input: w.to_string(),
            variant: c.variant(),
            sign: c.sign,
            word: c.tree().to_string(),
            shape: c.shape(),
            orientation,
            blocks,
            partition: c.partition.iter().map(|p| one(p)).collect(),
            verified,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::examples::{make_a_alt, make_a_flex};
    use crate::field::FieldSpec;
    use crate::words::enumerate_restricted;

    fn w(s: &str) -> WordTree {
        WordTree::parse(s).unwrap()
    }

    #[test]
    fn alt_examples() {
        let c = canonical_alt_form(&w("((1 2) 3)")).unwrap();
        assert_eq!(c.sign, 1);
        assert_eq!(c.tree(), w("((1 2) 3)"));
        let c = canonical_alt_form(&w("(((1 2) 3) 4)")).unwrap();
        assert_eq!((c.sign, c.tree()), (-1, w("(((1 2) 4) 3)")));
        let c = canonical_alt_form(&w("(4 ((1 2) 3))")).unwrap();
        assert_eq!((c.sign, c.tree()), (-1, w("((1 2) (4 3))")));
        assert_eq!(c.partition, vec![vec![2, 1], vec![0, 3]]);
    }

    #[test]
    fn flex_examples() {
        let c = canonical_flex_form(&w("((1 2) 3)")).unwrap();
        assert_eq!(c.shape(), Some(Shape::O11));
        assert_eq!(c.sign, 1);
        assert_eq!(c.largest_class(), 2);
        assert!(matches!(canonical_flex_form(&w("(1 2)")), Err(Error::WordTooShort(2))));
        assert!(matches!(canonical_flex_form(&w("((1 2) (3 4))")), Err(Error::NotRestrictedForm)));
    }

    #[test]
    fn forms_keep_letters_and_class_sizes() {
        for m in 3..=8 {
            for word in enumerate_restricted(if m <= 6 { 3 } else { 2 }, m).unwrap() {
                let mut letters = word.letters();
                letters.sort_unstable();
                for v in [Variant::Alt, Variant::Flex] {
                    let c = canonical_form(v, &word).unwrap();
                    let mut got = c.tree().letters();
                    got.sort_unstable();
                    assert_eq!(got, letters);
                    let mut part: Vec<usize> = c.partition.concat();
                    part.sort_unstable();
                    assert_eq!(part, letters);
                    if v == Variant::Flex {
                        assert!(c.partition.len() <= 3);
                        assert!(c.largest_class() >= m / 3 + 1, "{word} -> {c}");
                    } else {
                        assert_eq!(c.partition.len(), 2);
                    }
                }
            }
        }
    }

    #[test]
    fn verified_on_separating_examples() {
        let q = FieldSpec::Rational;
        for (alg, variant) in [(make_a_alt(q), Variant::Alt), (make_a_flex(q), Variant::Flex)] {
            let set = GeneratorSet::from_basis_indices(&alg, &[1, 2]).unwrap();
            for m in 3..=5 {
                let lin = lin_k(&alg, &set, m - 1).unwrap();
                for word in enumerate_restricted(2, m).unwrap() {
                    let c = canonical_form(variant, &word).unwrap();
                    assert!(verify_equivalence_in(&alg, &set, &lin, &word, &c).unwrap(), "{word} -> {c}");
                }
            }
        }
    }

    #[test]
    fn flipped_sign_is_rejected() {
        let alg = make_a_alt(FieldSpec::Rational);
        let set = GeneratorSet::from_basis_indices(&alg, &[1, 2]).unwrap();
        // f1 (f2 f1) = f4, which Lin_2 misses
        let word = w("(1 (2 1))");
        let mut c = canonical_alt_form(&word).unwrap();
        assert!(verify_equivalence(&alg, &set, &word, &c).unwrap());
        c.sign = -c.sign;
        assert!(!verify_equivalence(&alg, &set, &word, &c).unwrap());
    }

    #[test]
    fn subword_family_counts() {
        assert_eq!(alt_subword_count(1, 2).unwrap(), 1);
        assert_eq!(alt_subword_count(2, 5).unwrap(), 21);
        assert_eq!(alt_subword_family(3, 6).unwrap().count(), 49);
        assert!(alt_subword_count(0, 3).is_err());
        let x = [0, 1, 2];
        let y = [3, 4];
        let t = alt_subword(&x, &y, &[1, 3], &[2]).unwrap();
        assert_eq!(t, WordTree::parse("((5 3) 1)").unwrap());
    }
}
