//! Normal forms against a formal rewriting search, plus the numerical
//! consequences of swappable classes.

use std::collections::{HashSet, VecDeque};

use alglen::canonical::{canonical_form, verify_equivalence_in, CanonicalWord};
use alglen::examples::{make_a_alt, make_a_flex, make_unital_hull};
use alglen::identities::{check_descendingly_alternative, check_descendingly_flexible, CheckConfig, Variant};
use alglen::spans::lin_k;
use alglen::words::{enumerate_lr_sequences, enumerate_restricted, evaluate};
use alglen::{Algebra, FieldSpec, GeneratorSet, WordTree};

/// Signed rewrites of a top-level triple, valid modulo shorter words in the
/// respective class.
fn top_rewrites(t: &WordTree, v: Variant) -> Vec<WordTree> {
    let WordTree::Node(l, r) = t else { return Vec::new() };
    let mut out = Vec::new();
    if let WordTree::Node(a, b) = l.as_ref() {
        let (a, b, c) = ((**a).clone(), (**b).clone(), (**r).clone());
        out.push(match v {
            // (ab)c ~ -(cb)a
            Variant::Flex => WordTree::node(WordTree::node(c, b), a),
            // (ab)c ~ -(ac)b
            Variant::Alt => WordTree::node(WordTree::node(a, c), b),
        });
    }
    if let WordTree::Node(b, c) = r.as_ref() {
        let (a, b, c) = ((**l).clone(), (**b).clone(), (**c).clone());
        out.push(match v {
            // a(bc) ~ -c(ba)
            Variant::Flex => WordTree::node(c, WordTree::node(b, a)),
            // a(bc) ~ -b(ac)
            Variant::Alt => WordTree::node(b, WordTree::node(a, c)),
        });
    }
    out
}

/// Every tree obtained by one rewrite at some node; each flips the sign.
fn neighbours(t: &WordTree, v: Variant) -> Vec<WordTree> {
    let mut out = top_rewrites(t, v);
    if let WordTree::Node(l, r) = t {
        for nl in neighbours(l, v) {
            out.push(WordTree::node(nl, (**r).clone()));
        }
        for nr in neighbours(r, v) {
            out.push(WordTree::node((**l).clone(), nr));
        }
    }
    out
}

fn orbit(w: &WordTree, v: Variant) -> HashSet<(i8, WordTree)> {
    let mut seen = HashSet::new();
    let mut queue = VecDeque::new();
    seen.insert((1i8, w.clone()));
    queue.push_back((1i8, w.clone()));
    while let Some((s, t)) = queue.pop_front() {
        for n in neighbours(&t, v) {
            if seen.insert((-s, n.clone())) {
                queue.push_back((-s, n));
            }
        }
    }
    seen
}

fn distinct_letter_words(m: usize) -> Vec<WordTree> {
    let letters: Vec<usize> = (0..m).collect();
    let mut seen = HashSet::new();
    for lr in enumerate_lr_sequences(1, m).unwrap() {
        seen.insert(lr.to_tree().with_letters(&letters));
    }
    let mut v: Vec<WordTree> = seen.into_iter().collect();
    v.sort_by_key(|t| t.to_string());
    v
}

#[test]
fn normal_forms_are_reachable_by_rewriting() {
    for (v, ms) in [(Variant::Alt, 2..=6), (Variant::Flex, 3..=6)] {
        for m in ms {
            for w in distinct_letter_words(m) {
                let c = canonical_form(v, &w).unwrap();
                let o = orbit(&w, v);
                assert!(o.contains(&(c.sign, c.tree())), "{v:?} {w} -> {} {}", c.sign, c.tree());
            }
        }
    }
}

struct Case {
    label: &'static str,
    alg: Algebra,
    variant: Variant,
}

fn cases() -> Vec<Case> {
    let mut out = Vec::new();
    for f in [FieldSpec::Rational, FieldSpec::Prime(2), FieldSpec::Prime(3)] {
        out.push(Case { label: "A_alt", alg: make_a_alt(f), variant: Variant::Alt });
        out.push(Case { label: "A_flex", alg: make_a_flex(f), variant: Variant::Flex });
        out.push(Case { label: "hull of A_alt", alg: make_unital_hull(&make_a_alt(f)).unwrap(), variant: Variant::Alt });
        out.push(Case {
            label: "hull of A_flex",
            alg: make_unital_hull(&make_a_flex(f)).unwrap(),
            variant: Variant::Flex,
        });
    }
    out
}

fn in_class(c: &Case) -> bool {
    let cfg = CheckConfig::default();
    match c.variant {
        Variant::Alt => check_descendingly_alternative(&c.alg, &cfg).holds(),
        Variant::Flex => check_descendingly_flexible(&c.alg, &cfg).holds(),
    }
}

/// The generators of the separating examples are b_1, b_2 (also in the hull).
fn sets() -> Vec<Vec<usize>> {
    vec![vec![1, 2], vec![1, 2, 3], vec![2, 1]]
}

fn check_all_words(c: &Case, set: &[usize], max_m: usize, mut f: impl FnMut(&WordTree, &CanonicalWord, bool)) {
    let s = GeneratorSet::from_basis_indices(&c.alg, set).unwrap();
    let min_m = if c.variant == Variant::Flex { 3 } else { 2 };
    for m in min_m..=max_m {
        let lin = lin_k(&c.alg, &s, m - 1).unwrap();
        for w in enumerate_restricted(s.len(), m).unwrap() {
            let cw = canonical_form(c.variant, &w).unwrap();
            assert!(verify_equivalence_in(&c.alg, &s, &lin, &w, &cw).unwrap(), "{} {set:?}: {w}", c.label);
            let shorter = lin.contains(&evaluate(&c.alg, &s, &w).unwrap()).unwrap();
            f(&w, &cw, shorter);
        }
    }
}

#[test]
fn classes_hold_where_expected() {
    for c in cases() {
        assert!(in_class(&c), "{} is not in its class", c.label);
    }
}

#[test]
fn repeated_letter_in_a_class_collapses() {
    for c in cases() {
        for set in sets() {
            let max_m = if set.len() == 2 { 5 } else { 4 };
            let mut collapsed = 0;
            check_all_words(&c, &set, max_m, |w, cw, shorter| {
                if cw.has_repeated_letter_in_class() {
                    assert!(shorter, "{} {set:?}: {w} has a repeated letter in a class but is new", c.label);
                    collapsed += 1;
                }
            });
            assert!(collapsed > 0);
        }
    }
}

#[test]
fn class_larger_than_the_set_collapses() {
    for c in cases() {
        for set in sets() {
            let max_m = if set.len() == 2 { 5 } else { 4 };
            check_all_words(&c, &set, max_m, |w, cw, shorter| {
                if cw.largest_class() > set.len() {
                    assert!(shorter, "{} {set:?}: {w}", c.label);
                }
            });
        }
    }
}

#[test]
fn class_sizes() {
    for m in 3..=7 {
        for w in distinct_letter_words(m) {
            let a = canonical_form(Variant::Alt, &w).unwrap();
            let sizes: Vec<usize> = a.partition.iter().map(Vec::len).collect();
            assert_eq!(sizes.len(), 2);
            assert_eq!(sizes.iter().sum::<usize>(), m);
            assert!(sizes.iter().all(|&k| k >= 1));
            let f = canonical_form(Variant::Flex, &w).unwrap();
            assert!(f.largest_class() >= m / 3 + 1, "{w}");
            assert_eq!(f.partition.iter().map(Vec::len).sum::<usize>(), m);
            let mut letters = f.tree().letters();
            letters.sort_unstable();
            assert_eq!(letters, (0..m).collect::<Vec<_>>());
        }
    }
}
