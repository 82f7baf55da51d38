use alglen::examples::{by_name, make_matrix_algebra, make_spin_factor, matrix_unit, spin_identity_residuals};
use alglen::identities::{
    check_sufficient_condition, classify, df_triple_violation, da_triple_violation, random_element, replay_witness,
    sample_rng, CheckConfig, Variant, Verdict, TAG_DA_TRIPLE_2, TAG_DF_TRIPLE_2,
};
use alglen::{Element, FieldSpec};

const NAMES: &[&str] = &[
    "aflex", "aalt", "spin:3", "matrix:2", "chain3", "nil3", "squaring", "hull:aflex", "hull:aalt", "cd:2", "z2n:2",
];

fn cfg() -> CheckConfig {
    CheckConfig::default()
}

#[test]
fn separating_pair_matrix() {
    for f in [FieldSpec::Rational, FieldSpec::Prime(3), FieldSpec::Prime(2)] {
        let flex = classify(&by_name("aflex", f).unwrap(), &cfg());
        assert!(flex.descendingly_flexible.holds(), "{f}");
        assert!(flex.descendingly_alternative.fails(), "{f}");
        let alt = classify(&by_name("aalt", f).unwrap(), &cfg());
        assert!(alt.descendingly_alternative.holds(), "{f}");
        assert!(alt.descendingly_flexible.fails(), "{f}");
        for r in [&flex, &alt] {
            assert!(r.mixing.holds());
            assert!(r.implications_consistent);
        }
    }
}

#[test]
fn separating_witnesses_over_q() {
    let q = FieldSpec::Rational;
    let a = by_name("aflex", q).unwrap();
    let r = classify(&a, &cfg());
    let w = r.descendingly_alternative.witness().unwrap();
    assert_eq!(w.tag, TAG_DA_TRIPLE_2);
    let e = |i| a.basis(i).unwrap();
    assert_eq!(w.elements, vec![e(1), e(1), e(2)]);
    assert_eq!(w.value, e(4).scale(&q.from_i64(2)));

    let b = by_name("aalt", q).unwrap();
    let r = classify(&b, &cfg());
    let w = r.descendingly_flexible.witness().unwrap();
    assert_eq!(w.tag, TAG_DF_TRIPLE_2);
    let f = |i| b.basis(i).unwrap();
    assert_eq!(w.elements, vec![f(1), f(1), f(2)]);
}

#[test]
fn matrix_units_break_both_descending_identities() {
    let q = FieldSpec::Rational;
    let m4 = make_matrix_algebra(4, q).unwrap();
    let e = |i, j| m4.basis(matrix_unit(4, i, j)).unwrap();
    let (x, y, z) = (e(1, 2), e(2, 3), e(3, 4));
    let df = df_triple_violation(&m4, &x, &y, &z).unwrap();
    let da = da_triple_violation(&m4, &x, &y, &z).unwrap();
    assert!(replay_witness(&m4, &df).unwrap());
    assert!(replay_witness(&m4, &da).unwrap());
    assert_eq!(df.value, e(1, 4));
    let r = classify(&m4, &CheckConfig { seed: 0, samples: 64 });
    assert!(matches!(r.mixing, Verdict::HoldsRandomized { .. }));
    assert!(r.left_sliding.holds() && r.right_sliding.holds());
    assert!(r.descendingly_flexible.fails() && r.descendingly_alternative.fails());
}

#[test]
fn every_failure_replays_and_implications_hold() {
    for name in NAMES {
        for f in [FieldSpec::Rational, FieldSpec::Prime(2), FieldSpec::Prime(5)] {
            let a = by_name(name, f).unwrap();
            let r = classify(&a, &cfg());
            assert!(r.implications_consistent, "{name} over {f}");
            for (label, v) in r.entries() {
                if let Some(w) = v.witness() {
                    if label.starts_with("sufficient") {
                        continue;
                    }
                    assert!(replay_witness(&a, w).unwrap(), "{name} over {f}: {label} witness does not replay");
                }
            }
        }
    }
}

#[test]
fn associative_examples_satisfy_everything_cheap() {
    for name in ["matrix:2", "z2n:2", "cd:2"] {
        let r = classify(&by_name(name, FieldSpec::Rational).unwrap(), &cfg());
        assert!(r.flexible.holds() && r.alternative.holds(), "{name}");
        assert!(r.mixing.holds() && r.left_sliding.holds() && r.right_sliding.holds(), "{name}");
    }
}

#[test]
fn chain_with_a_square_is_mixing_but_squaring_chain_is_not() {
    // (xy)z and (xz)y coincide in C3, so it is mixing and right sliding
    let c3 = classify(&by_name("chain3", FieldSpec::Rational).unwrap(), &cfg());
    assert!(c3.mixing.holds());
    assert!(c3.right_sliding.holds());
    assert!(c3.left_sliding.fails());
    let sq = classify(&by_name("squaring", FieldSpec::Rational).unwrap(), &cfg());
    assert!(sq.mixing.fails() && sq.left_sliding.fails() && sq.right_sliding.fails());
}

#[test]
fn spin_factor_representation() {
    let q = FieldSpec::Rational;
    let a = make_spin_factor(3, q).unwrap();
    let zero = a.zero();
    let check = |x: &Element, y: &Element| {
        for r in spin_identity_residuals(&a, x, y).unwrap() {
            assert_eq!(r, zero, "{x} {y}");
        }
    };
    for i in 1..=4 {
        for j in 1..=4 {
            check(&a.basis(i).unwrap(), &a.basis(j).unwrap());
        }
    }
    for k in 0..64 {
        let mut rng = sample_rng(7, k);
        check(&random_element(&a, &mut rng), &random_element(&a, &mut rng));
    }
    for v in [Variant::Flex, Variant::Alt] {
        assert!(check_sufficient_condition(&a, v, &cfg()).holds());
    }
    let r = classify(&a, &cfg());
    assert!(r.descendingly_flexible.holds());
}

#[test]
fn same_seed_same_report() {
    for name in ["aflex", "chain3", "spin:3"] {
        let a = by_name(name, FieldSpec::Prime(3)).unwrap();
        for seed in [0, 11] {
            let c = CheckConfig { seed, samples: 32 };
            assert_eq!(classify(&a, &c), classify(&a, &c));
        }
    }
}
