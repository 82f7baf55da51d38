//! Membership tests for the identity classes, with witnesses on failure.
//!
//! Flexibility and alternativity are quadratic in one argument and linear in
//! the other, so checking basis vectors and sums of two basis vectors decides
//! them exactly. The remaining classes have argument-dependent spans on the
//! right-hand side; they are checked on every basis tuple and on seeded random
//! samples, and the verdict says so.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::algebra::{Algebra, Element};
use crate::error::Result;
use crate::field::Scalar;
use crate::spans::{solve_system, SpanBasis};

pub const DEFAULT_SAMPLES: usize = 64;
pub const DEFAULT_SEED: u64 = 0;
/// Sample floor over characteristic 2.
pub const CHAR2_MIN_SAMPLES: usize = 256;
/// Random `b` values per sufficient-condition run, besides the basis vectors.
pub const SUFFICIENT_B_GROUPS: usize = 8;

pub const TAG_FLEXIBLE: &str = "(ab)a = a(ba)";
pub const TAG_ALT_LEFT: &str = "a(ab) = (aa)b";
pub const TAG_ALT_RIGHT: &str = "(ba)a = b(aa)";
pub const TAG_LEFT_SLIDING: &str = "(xy)z in Lin1(Q_l(x,y,z))";
pub const TAG_RIGHT_SLIDING: &str = "z(xy) in Lin1(Q_r(x,y,z))";
pub const TAG_MIXING_LEFT: &str = "(xy)z in Lin1(P(x,y,z))";
pub const TAG_MIXING_RIGHT: &str = "z(xy) in Lin1(P(x,y,z))";
pub const TAG_DF_PAIR_1: &str = "(ab)a in Lin1(a,b,aa,ab,ba)";
pub const TAG_DF_PAIR_2: &str = "a(ba) in Lin1(a,b,aa,ab,ba)";
pub const TAG_DF_TRIPLE_1: &str = "(ab)c+(cb)a in Lin'2(a,b,c)";
pub const TAG_DF_TRIPLE_2: &str = "a(bc)+c(ba) in Lin'2(a,b,c)";
pub const TAG_DA_PAIR_1: &str = "(ba)a in Lin1(a,b,aa,ab,ba)";
pub const TAG_DA_PAIR_2: &str = "a(ab) in Lin1(a,b,aa,ab,ba)";
pub const TAG_DA_TRIPLE_1: &str = "(ab)c+(ac)b in Lin'2(a,b,c)";
pub const TAG_DA_TRIPLE_2: &str = "a(bc)+b(ac) in Lin'2(a,b,c)";
pub const TAG_COEFF_PREFIX: &str = "aa-coefficient depends on a: ";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CheckConfig {
    pub seed: u64,
    pub samples: usize,
}

impl Default for CheckConfig {
    fn default() -> Self {
        CheckConfig { seed: DEFAULT_SEED, samples: DEFAULT_SAMPLES }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub tag: String,
    pub elements: Vec<Element>,
    pub value: Element,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum Verdict {
    HoldsExhaustive,
    HoldsRandomized { samples: usize, caveat: Option<String> },
    Fails { witness: Witness },
    Inconclusive { reason: String },
}

impl Verdict {
    pub fn holds(&self) -> bool {
        matches!(self, Verdict::HoldsExhaustive | Verdict::HoldsRandomized { .. })
    }

    pub fn fails(&self) -> bool {
        matches!(self, Verdict::Fails { .. })
    }

    pub fn witness(&self) -> Option<&Witness> {
        match self {
            Verdict::Fails { witness } => Some(witness),
            _ => None,
        }
    }

    pub fn label(&self) -> String {
        match self {
            Verdict::HoldsExhaustive => "holds (exhaustive)".into(),
            Verdict::HoldsRandomized { samples, .. } => format!("holds (basis + {samples} random samples)"),
            Verdict::Fails { witness } => format!("fails: {}", witness.tag),
            Verdict::Inconclusive { reason } => format!("inconclusive: {reason}"),
        }
    }
}

/// The random stream for sample `index`: same seed and index, same draws.
pub fn sample_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

pub fn random_element(alg: &Algebra, rng: &mut ChaCha8Rng) -> Element {
    let f = alg.field();
    Element::from_coords((0..alg.dim()).map(|_| f.random(rng)).collect())
}

/// Effective sample count and caveat for this field.
fn sampling(alg: &Algebra, cfg: &CheckConfig) -> (usize, Option<String>) {
    if alg.field().is_char_two() {
        (
            cfg.samples.max(CHAR2_MIN_SAMPLES),
            Some("characteristic 2: random points cover little of the space".into()),
        )
    } else {
        (cfg.samples, None)
    }
}

fn basis(alg: &Algebra) -> Vec<Element> {
    (1..=alg.dim()).map(|i| alg.basis(i).expect("in range")).collect()
}

/// `Lin_1` of a list: its span, plus the unity when there is one.
fn lin1(alg: &Algebra, list: &[&Element]) -> SpanBasis {
    let mut s = SpanBasis::new(alg.field(), alg.dim());
    if let Some(e) = alg.unity() {
        s.insert(e).expect("dimension checked");
    }
    for v in list {
        s.insert(v).expect("dimension checked");
    }
    s
}

fn member(span: &SpanBasis, v: &Element) -> bool {
    span.contains(v).expect("dimension checked")
}

fn witness(tag: &str, elements: &[&Element], value: Element) -> Witness {
    Witness { tag: tag.into(), elements: elements.iter().map(|e| (*e).clone()).collect(), value }
}

/// Runs `check` over basis tuples, then over random samples; the first failure
/// in the fixed order wins.
fn run_sampled<F>(alg: &Algebra, cfg: &CheckConfig, arity: usize, check: F) -> Verdict
where
    F: Fn(&[Element]) -> Option<Witness> + Sync,
{
    let b = basis(alg);
    let n = alg.dim();
    let total = n.pow(arity as u32);
    let from_basis = (0..total).into_par_iter().find_map_first(|mut code| {
        let mut tuple = vec![b[0].clone(); arity];
        for slot in (0..arity).rev() {
            tuple[slot] = b[code % n].clone();
            code /= n;
        }
        check(&tuple)
    });
    if let Some(w) = from_basis {
        return Verdict::Fails { witness: w };
    }
    let (samples, caveat) = sampling(alg, cfg);
    let from_samples = (0..samples).into_par_iter().find_map_first(|i| {
        let mut rng = sample_rng(cfg.seed, i as u64);
        let tuple: Vec<Element> = (0..arity).map(|_| random_element(alg, &mut rng)).collect();
        check(&tuple)
    });
    match from_samples {
        Some(w) => Verdict::Fails { witness: w },
        None => Verdict::HoldsRandomized { samples, caveat },
    }
}

/// Exact test of an identity `q(a, b) = 0` that is quadratic in `a` and linear
/// in `b`: basis values, then sums of two basis vectors for the polar form.
fn quadratic_identity<Q>(alg: &Algebra, tag: &str, q: Q) -> Option<Witness>
where
    Q: Fn(&Element, &Element) -> Element + Sync,
{
    let b = basis(alg);
    let n = alg.dim();
    let diag = (0..n * n).into_par_iter().find_map_first(|c| {
        let (i, j) = (c / n, c % n);
        let v = q(&b[i], &b[j]);
        (!v.is_zero()).then(|| witness(tag, &[&b[i], &b[j]], v))
    });
    if diag.is_some() {
        return diag;
    }
    (0..n * n * n).into_par_iter().find_map_first(|c| {
        let (i, k, j) = (c / (n * n), (c / n) % n, c % n);
        if i >= k {
            return None;
        }
        let a = b[i].add(&b[k]);
        let v = q(&a, &b[j]);
        (!v.is_zero()).then(|| witness(tag, &[&a, &b[j]], v))
    })
}

pub fn check_flexible(alg: &Algebra) -> Verdict {
    let m = |x: &Element, y: &Element| alg.mul(x, y);
    let q = |a: &Element, b: &Element| m(&m(a, b), a).sub(&m(a, &m(b, a)));
    match quadratic_identity(alg, TAG_FLEXIBLE, q) {
        Some(w) => Verdict::Fails { witness: w },
        None => Verdict::HoldsExhaustive,
    }
}

pub fn check_alternative(alg: &Algebra) -> Verdict {
    let m = |x: &Element, y: &Element| alg.mul(x, y);
    let left = |a: &Element, b: &Element| m(a, &m(a, b)).sub(&m(&m(a, a), b));
    let right = |a: &Element, b: &Element| m(&m(b, a), a).sub(&m(b, &m(a, a)));
    if let Some(w) = quadratic_identity(alg, TAG_ALT_LEFT, left) {
        return Verdict::Fails { witness: w };
    }
    match quadratic_identity(alg, TAG_ALT_RIGHT, right) {
        Some(w) => Verdict::Fails { witness: w },
        None => Verdict::HoldsExhaustive,
    }
}

/// Degree-2 monomials in distinct letters plus the letters themselves.
fn low_monomials(alg: &Algebra, x: &Element, y: &Element, z: &Element) -> Vec<Element> {
    let m = |p: &Element, q: &Element| alg.mul(p, q);
    vec![m(x, y), m(y, x), m(x, z), m(z, x), m(y, z), m(z, y), x.clone(), y.clone(), z.clone()]
}

fn q_l_cubic(alg: &Algebra, x: &Element, y: &Element, z: &Element) -> Vec<Element> {
    let m = |p: &Element, q: &Element| alg.mul(p, q);
    vec![m(x, &m(z, y)), m(x, &m(y, z)), m(y, &m(x, z)), m(y, &m(z, x))]
}

fn q_r_cubic(alg: &Algebra, x: &Element, y: &Element, z: &Element) -> Vec<Element> {
    let m = |p: &Element, q: &Element| alg.mul(p, q);
    vec![m(&m(x, z), y), m(&m(z, x), y), m(&m(y, z), x), m(&m(z, y), x)]
}

/// Violation of left sliding at `(x, y, z)`, if any.
pub fn left_sliding_violation(alg: &Algebra, x: &Element, y: &Element, z: &Element) -> Option<Witness> {
    let mut list = q_l_cubic(alg, x, y, z);
    list.extend(low_monomials(alg, x, y, z));
    let span = lin1(alg, &list.iter().collect::<Vec<_>>());
    let t = alg.mul(&alg.mul(x, y), z);
    (!member(&span, &t)).then(|| witness(TAG_LEFT_SLIDING, &[x, y, z], t))
}

pub fn right_sliding_violation(alg: &Algebra, x: &Element, y: &Element, z: &Element) -> Option<Witness> {
    let mut list = q_r_cubic(alg, x, y, z);
    list.extend(low_monomials(alg, x, y, z));
    let span = lin1(alg, &list.iter().collect::<Vec<_>>());
    let t = alg.mul(z, &alg.mul(x, y));
    (!member(&span, &t)).then(|| witness(TAG_RIGHT_SLIDING, &[x, y, z], t))
}

pub fn mixing_violation(alg: &Algebra, x: &Element, y: &Element, z: &Element) -> Option<Witness> {
    let mut list = q_l_cubic(alg, x, y, z);
    list.extend(q_r_cubic(alg, x, y, z));
    list.extend(low_monomials(alg, x, y, z));
    let span = lin1(alg, &list.iter().collect::<Vec<_>>());
    let xy = alg.mul(x, y);
    let t1 = alg.mul(&xy, z);
    if !member(&span, &t1) {
        return Some(witness(TAG_MIXING_LEFT, &[x, y, z], t1));
    }
    let t2 = alg.mul(z, &xy);
    (!member(&span, &t2)).then(|| witness(TAG_MIXING_RIGHT, &[x, y, z], t2))
}

pub fn check_left_sliding(alg: &Algebra, cfg: &CheckConfig) -> Verdict {
    run_sampled(alg, cfg, 3, |t| left_sliding_violation(alg, &t[0], &t[1], &t[2]))
}

pub fn check_right_sliding(alg: &Algebra, cfg: &CheckConfig) -> Verdict {
    run_sampled(alg, cfg, 3, |t| right_sliding_violation(alg, &t[0], &t[1], &t[2]))
}

pub fn check_mixing(alg: &Algebra, cfg: &CheckConfig) -> Verdict {
    run_sampled(alg, cfg, 3, |t| mixing_violation(alg, &t[0], &t[1], &t[2]))
}

/// `Lin_1(a, b, aa, ab, ba)`.
fn pair_span(alg: &Algebra, a: &Element, b: &Element) -> SpanBasis {
    let aa = alg.mul(a, a);
    let ab = alg.mul(a, b);
    let ba = alg.mul(b, a);
    lin1(alg, &[a, b, &aa, &ab, &ba])
}

/// `Lin'_2(a, b, c)`: words of length at most two except `aa`, `bb`, `cc`.
fn lin2_prime(alg: &Algebra, a: &Element, b: &Element, c: &Element) -> SpanBasis {
    let list = low_monomials(alg, a, b, c);
    lin1(alg, &list.iter().collect::<Vec<_>>())
}

pub fn df_pair_violation(alg: &Algebra, a: &Element, b: &Element) -> Option<Witness> {
    let span = pair_span(alg, a, b);
    let ab = alg.mul(a, b);
    let t1 = alg.mul(&ab, a);
    if !member(&span, &t1) {
        return Some(witness(TAG_DF_PAIR_1, &[a, b], t1));
    }
    let t2 = alg.mul(a, &alg.mul(b, a));
    (!member(&span, &t2)).then(|| witness(TAG_DF_PAIR_2, &[a, b], t2))
}

pub fn da_pair_violation(alg: &Algebra, a: &Element, b: &Element) -> Option<Witness> {
    let span = pair_span(alg, a, b);
    let t1 = alg.mul(&alg.mul(b, a), a);
    if !member(&span, &t1) {
        return Some(witness(TAG_DA_PAIR_1, &[a, b], t1));
    }
    let t2 = alg.mul(a, &alg.mul(a, b));
    (!member(&span, &t2)).then(|| witness(TAG_DA_PAIR_2, &[a, b], t2))
}

pub fn df_triple_violation(alg: &Algebra, a: &Element, b: &Element, c: &Element) -> Option<Witness> {
    let m = |p: &Element, q: &Element| alg.mul(p, q);
    let span = lin2_prime(alg, a, b, c);
    let t1 = m(&m(a, b), c).add(&m(&m(c, b), a));
    if !member(&span, &t1) {
        return Some(witness(TAG_DF_TRIPLE_1, &[a, b, c], t1));
    }
    let t2 = m(a, &m(b, c)).add(&m(c, &m(b, a)));
    (!member(&span, &t2)).then(|| witness(TAG_DF_TRIPLE_2, &[a, b, c], t2))
}

pub fn da_triple_violation(alg: &Algebra, a: &Element, b: &Element, c: &Element) -> Option<Witness> {
    let m = |p: &Element, q: &Element| alg.mul(p, q);
    let span = lin2_prime(alg, a, b, c);
    let t1 = m(&m(a, b), c).add(&m(&m(a, c), b));
    if !member(&span, &t1) {
        return Some(witness(TAG_DA_TRIPLE_1, &[a, b, c], t1));
    }
    let t2 = m(a, &m(b, c)).add(&m(b, &m(a, c)));
    (!member(&span, &t2)).then(|| witness(TAG_DA_TRIPLE_2, &[a, b, c], t2))
}

/// Shared driver: the pair condition (characteristic 2 only, where the triple
/// conditions do not imply it) on basis pairs, then triples on basis triples,
/// then random samples of both.
fn check_descending<P, T>(alg: &Algebra, cfg: &CheckConfig, pair: P, triple: T) -> Verdict
where
    P: Fn(&Algebra, &Element, &Element) -> Option<Witness> + Sync,
    T: Fn(&Algebra, &Element, &Element, &Element) -> Option<Witness> + Sync,
{
    let with_pairs = alg.field().is_char_two();
    if with_pairs {
        let b = basis(alg);
        let n = alg.dim();
        if let Some(w) = (0..n * n).into_par_iter().find_map_first(|c| pair(alg, &b[c / n], &b[c % n])) {
            return Verdict::Fails { witness: w };
        }
    }
    let b = basis(alg);
    let n = alg.dim();
    let basis_fail = (0..n * n * n)
        .into_par_iter()
        .find_map_first(|c| triple(alg, &b[c / (n * n)], &b[(c / n) % n], &b[c % n]));
    if let Some(w) = basis_fail {
        return Verdict::Fails { witness: w };
    }
    let (samples, caveat) = sampling(alg, cfg);
    let sample_fail = (0..samples).into_par_iter().find_map_first(|i| {
        let mut rng = sample_rng(cfg.seed, i as u64);
        let a = random_element(alg, &mut rng);
        let bb = random_element(alg, &mut rng);
        let c = random_element(alg, &mut rng);
        if with_pairs {
            if let Some(w) = pair(alg, &a, &bb) {
                return Some(w);
            }
        }
        triple(alg, &a, &bb, &c)
    });
    match sample_fail {
        Some(w) => Verdict::Fails { witness: w },
        None => Verdict::HoldsRandomized { samples, caveat },
    }
}

pub fn check_descendingly_flexible(alg: &Algebra, cfg: &CheckConfig) -> Verdict {
    check_descending(alg, cfg, df_pair_violation, df_triple_violation)
}

pub fn check_descendingly_alternative(alg: &Algebra, cfg: &CheckConfig) -> Verdict {
    check_descending(alg, cfg, da_pair_violation, da_triple_violation)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Variant {
    Flex,
    Alt,
}

/// Outcome of representing one product over `Lin_1(a, b, aa, ab, ba)`.
enum Representation {
    Outside,
    /// `aa` is independent of the other spanning vectors, so its coefficient is unique.
    Unique(Scalar),
    /// `aa` lies in the span of the others; any coefficient works.
    Free,
}

fn represent(alg: &Algebra, a: &Element, b: &Element, target: &Element) -> Representation {
    let aa = alg.mul(a, a);
    let ab = alg.mul(a, b);
    let ba = alg.mul(b, a);
    let mut list: Vec<&Element> = vec![&aa, a, b, &ab, &ba];
    if let Some(e) = alg.unity() {
        list.push(e);
    }
    let others = lin1(alg, &list[1..]);
    let full = lin1(alg, &list);
    if !member(&full, target) {
        return Representation::Outside;
    }
    if member(&others, &aa) {
        return Representation::Free;
    }
    // columns are the spanning vectors, rows the coordinates
    let rows: Vec<Vec<Scalar>> =
        (0..alg.dim()).map(|r| list.iter().map(|v| v.coords()[r].clone()).collect()).collect();
    let x = solve_system(alg.field(), &rows, target.coords()).expect("target is in the span");
    Representation::Unique(x[0].clone())
}

fn targets(alg: &Algebra, variant: Variant, a: &Element, b: &Element) -> [(String, Element); 2] {
    let m = |p: &Element, q: &Element| alg.mul(p, q);
    match variant {
        Variant::Flex => [
            ("(ab)a".into(), m(&m(a, b), a)),
            ("a(ba)".into(), m(a, &m(b, a))),
        ],
        Variant::Alt => [
            ("(ba)a".into(), m(&m(b, a), a)),
            ("a(ab)".into(), m(a, &m(a, b))),
        ],
    }
}

/// Per-`b` sample of the sufficient condition. `Err` carries a failure.
fn sufficient_group(
    alg: &Algebra,
    variant: Variant,
    b: &Element,
    a_values: &[Element],
) -> std::result::Result<usize, Witness> {
    let mut seen: [Option<(Element, Scalar)>; 2] = [None, None];
    let mut unique = 0;
    for a in a_values {
        for (slot, (name, t)) in targets(alg, variant, a, b).into_iter().enumerate() {
            match represent(alg, a, b, &t) {
                Representation::Outside => {
                    let tag = format!("{name} in Lin1(a,b,aa,ab,ba)");
                    return Err(Witness { tag, elements: vec![a.clone(), b.clone()], value: t });
                }
                Representation::Free => {}
                Representation::Unique(c) => {
                    unique += 1;
                    match &seen[slot] {
                        None => seen[slot] = Some((a.clone(), c)),
                        Some((a0, c0)) if *c0 != c => {
                            let tag = format!("{TAG_COEFF_PREFIX}{name} ({c0} vs {c})");
                            return Err(Witness {
                                tag,
                                elements: vec![a0.clone(), a.clone(), b.clone()],
                                value: t,
                            });
                        }
                        Some(_) => {}
                    }
                }
            }
        }
    }
    Ok(unique)
}

/// Samples the hypothesis "`(ab)a, a(ba)` (resp. `(ba)a, a(ab)`) lie in
/// `Lin_1(a, b, aa, ab, ba)` with an `aa`-coefficient depending only on `b`".
///
/// Samples are grouped by `b`: every basis vector, then
/// [`SUFFICIENT_B_GROUPS`] random vectors; each group pairs `b` with all basis
/// vectors and a batch of random `a`. Where `aa` is dependent on the other
/// spanning vectors its coefficient is unconstrained and imposes nothing.
pub fn check_sufficient_condition(alg: &Algebra, variant: Variant, cfg: &CheckConfig) -> Verdict {
    let (samples, mut caveat) = sampling(alg, cfg);
    let per_group = (samples / SUFFICIENT_B_GROUPS).max(4);
    let base = basis(alg);
    let groups = base.len() + SUFFICIENT_B_GROUPS;
    let outcomes: Vec<(usize, std::result::Result<usize, Witness>)> = (0..groups)
        .into_par_iter()
        .map(|g| {
            let mut rng = sample_rng(cfg.seed, (1u64 << 32) + g as u64);
            let b = if g < base.len() { base[g].clone() } else { random_element(alg, &mut rng) };
            let mut a_values = base.clone();
            a_values.extend((0..per_group).map(|_| random_element(alg, &mut rng)));
            let n = a_values.len();
            (n, sufficient_group(alg, variant, &b, &a_values))
        })
        .collect();
    let mut total = 0;
    let mut unique = 0;
    for (n, r) in outcomes {
        match r {
            Err(w) => return Verdict::Fails { witness: w },
            Ok(u) => {
                total += n;
                unique += u;
            }
        }
    }
    if total == 0 {
        return Verdict::Inconclusive { reason: "no samples".into() };
    }
    if unique == 0 {
        let note = "aa-coefficient never determined; g = 0 is consistent".to_string();
        caveat = Some(match caveat {
            Some(c) => format!("{c}; {note}"),
            None => note,
        });
    }
    Verdict::HoldsRandomized { samples: total, caveat }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClassificationReport {
    pub field: String,
    pub characteristic: u64,
    pub characteristic_note: Option<String>,
    pub seed: u64,
    pub samples: usize,
    pub flexible: Verdict,
    pub alternative: Verdict,
    pub left_sliding: Verdict,
    pub right_sliding: Verdict,
    pub mixing: Verdict,
    pub descendingly_flexible: Verdict,
    pub descendingly_alternative: Verdict,
    pub sufficient_condition_flex: Verdict,
    pub sufficient_condition_alt: Verdict,
    /// Descending classes are mixing; a violation here means a checker bug.
    pub implications_consistent: bool,
}

impl ClassificationReport {
    pub fn mixing_or_sliding(&self) -> bool {
        self.mixing.holds() || self.left_sliding.holds() || self.right_sliding.holds()
    }

    pub fn entries(&self) -> Vec<(&'static str, &Verdict)> {
        vec![
            ("flexible", &self.flexible),
            ("alternative", &self.alternative),
            ("left sliding", &self.left_sliding),
            ("right sliding", &self.right_sliding),
            ("mixing", &self.mixing),
            ("descendingly flexible", &self.descendingly_flexible),
            ("descendingly alternative", &self.descendingly_alternative),
            ("sufficient condition (flex)", &self.sufficient_condition_flex),
            ("sufficient condition (alt)", &self.sufficient_condition_alt),
        ]
    }
}

pub fn classify(alg: &Algebra, cfg: &CheckConfig) -> ClassificationReport {
    let (samples, _) = sampling(alg, cfg);
    let characteristic_note = if alg.field().is_char_two() {
        Some("characteristic 2: pair conditions checked explicitly; sample count raised".into())
    } else {
        Some("characteristic is not 2: pair conditions follow from the triple conditions".into())
    };
    let mixing = check_mixing(alg, cfg);
    let descendingly_flexible = check_descendingly_flexible(alg, cfg);
    let descendingly_alternative = check_descendingly_alternative(alg, cfg);
    let implications_consistent =
        !((descendingly_flexible.holds() || descendingly_alternative.holds()) && mixing.fails());
    ClassificationReport {
        field: alg.field().to_string(),
        characteristic: alg.field().characteristic(),
        characteristic_note,
        seed: cfg.seed,
        samples,
        flexible: check_flexible(alg),
        alternative: check_alternative(alg),
        left_sliding: check_left_sliding(alg, cfg),
        right_sliding: check_right_sliding(alg, cfg),
        mixing,
        descendingly_flexible,
        descendingly_alternative,
        sufficient_condition_flex: check_sufficient_condition(alg, Variant::Flex, cfg),
        sufficient_condition_alt: check_sufficient_condition(alg, Variant::Alt, cfg),
        implications_consistent,
    }
}

/// Re-evaluates a witness from scratch; true when the violation reproduces.
pub fn replay_witness(alg: &Algebra, w: &Witness) -> Result<bool> {
    for e in &w.elements {
        alg.multiply(e, e)?;
    }
    let el = &w.elements;
    let m = |p: &Element, q: &Element| alg.mul(p, q);
    let tag = w.tag.as_str();
    let reproduced = match (tag, el.len()) {
        (TAG_FLEXIBLE, 2) => {
            let (a, b) = (&el[0], &el[1]);
            !m(&m(a, b), a).sub(&m(a, &m(b, a))).is_zero()
        }
        (TAG_ALT_LEFT, 2) => {
            let (a, b) = (&el[0], &el[1]);
            !m(a, &m(a, b)).sub(&m(&m(a, a), b)).is_zero()
        }
        (TAG_ALT_RIGHT, 2) => {
            let (a, b) = (&el[0], &el[1]);
            !m(&m(b, a), a).sub(&m(b, &m(a, a))).is_zero()
        }
        (TAG_LEFT_SLIDING, 3) => left_sliding_violation(alg, &el[0], &el[1], &el[2]).is_some(),
        (TAG_RIGHT_SLIDING, 3) => right_sliding_violation(alg, &el[0], &el[1], &el[2]).is_some(),
        (TAG_MIXING_LEFT | TAG_MIXING_RIGHT, 3) => mixing_violation(alg, &el[0], &el[1], &el[2]).is_some(),
        (TAG_DF_PAIR_1 | TAG_DF_PAIR_2, 2) => df_pair_violation(alg, &el[0], &el[1]).is_some(),
        (TAG_DA_PAIR_1 | TAG_DA_PAIR_2, 2) => da_pair_violation(alg, &el[0], &el[1]).is_some(),
        (TAG_DF_TRIPLE_1 | TAG_DF_TRIPLE_2, 3) => df_triple_violation(alg, &el[0], &el[1], &el[2]).is_some(),
        (TAG_DA_TRIPLE_1 | TAG_DA_TRIPLE_2, 3) => da_triple_violation(alg, &el[0], &el[1], &el[2]).is_some(),
        (t, 2) if t.ends_with("in Lin1(a,b,aa,ab,ba)") => {
            let span = pair_span(alg, &el[0], &el[1]);
            !member(&span, &w.value)
        }
        (t, 3) if t.starts_with(TAG_COEFF_PREFIX) => {
            let variant = if t.contains("(ab)a") || t.contains("a(ba)") { Variant::Flex } else { Variant::Alt };
            let slot = usize::from(t.contains("a(ba)") || t.contains("a(ab)"));
            let b = &el[2];
            let coeff = |a: &Element| {
                let t = targets(alg, variant, a, b)[slot].1.clone();
                match represent(alg, a, b, &t) {
                    Representation::Unique(c) => Some(c),
                    _ => None,
                }
            };
            match (coeff(&el[0]), coeff(&el[1])) {
                (Some(x), Some(y)) => x != y,
                _ => false,
            }
        }
        _ => false,
    };
    Ok(reproduced)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::examples::*;
    use crate::field::FieldSpec;

    fn cfg() -> CheckConfig {
        CheckConfig::default()
    }

    #[test]
    fn separating_examples_over_q() {
        let q = FieldSpec::Rational;
        let f = make_a_flex(q);
        assert!(check_descendingly_flexible(&f, &cfg()).holds());
        let v = check_descendingly_alternative(&f, &cfg());
        let w = v.witness().expect("fails");
        let e = |i| f.basis(i).unwrap();
        assert_eq!(w.tag, TAG_DA_TRIPLE_2);
        assert_eq!(w.elements, vec![e(1), e(1), e(2)]);
        assert_eq!(w.value, e(4).scale(&q.from_i64(2)));

        let a = make_a_alt(q);
        assert!(check_descendingly_alternative(&a, &cfg()).holds());
        let w = check_descendingly_flexible(&a, &cfg()).witness().cloned().expect("fails");
        let fb = |i| a.basis(i).unwrap();
        assert_eq!(w.tag, TAG_DF_TRIPLE_2);
        assert_eq!(w.elements, vec![fb(1), fb(1), fb(2)]);
        assert_eq!(w.value, fb(4).neg());
    }

    #[test]
    fn separating_examples_over_gf2_give_pair_witnesses() {
        let gf2 = FieldSpec::Prime(2);
        let f = make_a_flex(gf2);
        let w = check_descendingly_alternative(&f, &cfg()).witness().cloned().unwrap();
        assert_eq!(w.tag, TAG_DA_PAIR_2);
        assert_eq!(w.elements, vec![f.basis(1).unwrap(), f.basis(2).unwrap()]);
        assert_eq!(w.value, f.basis(4).unwrap());
        let a = make_a_alt(gf2);
        let w = check_descendingly_flexible(&a, &cfg()).witness().cloned().unwrap();
        assert_eq!(w.tag, TAG_DF_PAIR_2);
        assert_eq!(w.elements, vec![a.basis(1).unwrap(), a.basis(2).unwrap()]);
        assert_eq!(w.value, a.basis(4).unwrap());
    }

    #[test]
    fn matrix_triple_violates_both() {
        let m = make_matrix_algebra(4, FieldSpec::Rational).unwrap();
        let e = |i, j| m.basis(matrix_unit(4, i, j)).unwrap();
        let (a, b, c) = (e(1, 2), e(2, 3), e(3, 4));
        let w = df_triple_violation(&m, &a, &b, &c).unwrap();
        assert_eq!(w.value, e(1, 4));
        assert!(da_triple_violation(&m, &a, &b, &c).is_some());
    }

    #[test]
    fn associative_is_flexible_and_alternative() {
        let m = make_matrix_algebra(3, FieldSpec::Rational).unwrap();
        assert_eq!(check_flexible(&m), Verdict::HoldsExhaustive);
        assert_eq!(check_alternative(&m), Verdict::HoldsExhaustive);
    }

    #[test]
    fn spin_is_flexible() {
        let s = make_spin_factor(3, FieldSpec::Rational).unwrap();
        assert_eq!(check_flexible(&s), Verdict::HoldsExhaustive);
        assert!(check_sufficient_condition(&s, Variant::Flex, &cfg()).holds());
        assert!(check_sufficient_condition(&s, Variant::Alt, &cfg()).holds());
    }

    #[test]
    fn chain_algebra_is_mixing() {
        // (xy)z and (xz)y coincide in this algebra, so P always contains (xy)z
        let c = make_chain3(FieldSpec::Rational);
        assert!(check_mixing(&c, &cfg()).holds());
        assert!(check_right_sliding(&c, &cfg()).holds());
        let w = check_left_sliding(&c, &cfg()).witness().cloned().unwrap();
        assert!(replay_witness(&c, &w).unwrap());
    }

    #[test]
    fn squaring_chain_is_not_mixing() {
        let c = make_squaring_chain(FieldSpec::Rational);
        let v = check_mixing(&c, &cfg());
        let w = v.witness().unwrap();
        assert!(replay_witness(&c, w).unwrap());
        assert!(check_left_sliding(&c, &cfg()).fails());
        assert!(check_right_sliding(&c, &cfg()).fails());
    }

    #[test]
    fn witnesses_replay() {
        let q = FieldSpec::Rational;
        for alg in [make_a_flex(q), make_a_alt(q), make_chain3(q)] {
            let r = classify(&alg, &cfg());
            for (_, v) in r.entries() {
                if let Some(w) = v.witness() {
                    assert!(replay_witness(&alg, w).unwrap(), "{}", w.tag);
                }
            }
            assert!(r.implications_consistent);
        }
    }

    #[test]
    fn sufficient_condition_failure_is_caught() {
        // the flex variant fails on the alternative example, since DF fails there
        let a = make_a_alt(FieldSpec::Rational);
        let v = check_sufficient_condition(&a, Variant::Flex, &cfg());
        assert!(v.fails());
        assert!(replay_witness(&a, v.witness().unwrap()).unwrap());
    }

    #[test]
    fn deterministic_reports() {
        let a = make_a_flex(FieldSpec::Prime(3));
        assert_eq!(classify(&a, &cfg()), classify(&a, &cfg()));
    }
}
