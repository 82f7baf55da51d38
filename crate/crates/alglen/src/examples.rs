//! Concrete algebras: group algebras of `Z_2^n`, the two five-dimensional
//! separating examples, spin factors, matrix algebras, small nilpotent
//! controls, unital hulls and Cayley–Dickson doubles.

use crate::algebra::{Algebra, Element};
use crate::error::{Error, Result};
use crate::field::{FieldSpec, Scalar};

pub const Z2N_CAP: usize = 6;
pub const MATRIX_CAP: usize = 6;
pub const CAYLEY_DICKSON_CAP: usize = 4;

/// `F_2[Z_2^n]` with `e_x e_y = e_{x+y}`. The group element with bit pattern
/// `x` is basis vector `x + 1`, so the unity `e_0` is `b_1`.
pub fn make_group_algebra_z2n(n: usize) -> Result<Algebra> {
    if n == 0 {
        return Err(Error::DomainError("n must be at least 1".into()));
    }
    if n > Z2N_CAP {
        return Err(Error::ResourceLimit(format!("n = {n} exceeds the cap {Z2N_CAP}")));
    }
    let f = FieldSpec::Prime(2);
    let dim = 1usize << n;
    let mut a = Algebra::new(f, dim)?;
    for x in 0..dim {
        for y in 0..dim {
            a.add_product_i64(x + 1, y + 1, (x ^ y) + 1, 1)?;
        }
    }
    a.set_labels(Some((0..dim).map(|x| format!("e{:0width$b}", x, width = n)).collect()))?;
    a.set_unity_checked(a.basis(1)?)?;
    Ok(a)
}

/// 1-based index of `e_{f_i}` for the standard basis vector `f_i` of `Z_2^n`.
pub fn z2n_letter(i: usize) -> usize {
    (1usize << (i - 1)) + 1
}

pub fn make_a_flex(field: FieldSpec) -> Algebra {
    let mut a = Algebra::new(field, 5).expect("dim 5");
    for &(i, j, k, c) in &[(1, 1, 5, 1), (1, 2, 3, 1), (1, 3, 4, 1), (2, 5, 4, -1)] {
        a.add_product_i64(i, j, k, c).expect("valid entry");
    }
    a.set_labels(Some((1..=5).map(|i| format!("e{i}")).collect())).expect("5 labels");
    a
}

pub fn make_a_alt(field: FieldSpec) -> Algebra {
    let mut a = Algebra::new(field, 5).expect("dim 5");
    for &(i, j, k, c) in &[(1, 1, 5, 1), (1, 3, 4, 1), (2, 1, 3, 1), (2, 5, 4, -1)] {
        a.add_product_i64(i, j, k, c).expect("valid entry");
    }
    a.set_labels(Some((1..=5).map(|i| format!("f{i}")).collect())).expect("5 labels");
    a
}

/// `F 1 ⊕ F^n`; `b_1` is the unity and `b_{i+1}` is `v_i`.
pub fn make_spin_factor(n: usize, field: FieldSpec) -> Result<Algebra> {
    if n == 0 {
        return Err(Error::DomainError("n must be at least 1".into()));
    }
    let mut a = Algebra::new(field, n + 1)?;
    for i in 1..=n + 1 {
        a.add_product_i64(1, i, i, 1)?;
        if i > 1 {
            a.add_product_i64(i, 1, i, 1)?;
            a.add_product_i64(i, i, 1, 1)?;
        }
    }
    let mut labels = vec!["1".to_string()];
    labels.extend((1..=n).map(|i| format!("v{i}")));
    a.set_labels(Some(labels))?;
    a.set_unity_checked(a.basis(1)?)?;
    Ok(a)
}

/// `M_n(F)` with `E_ij` at index `(i-1)n + j`.
pub fn make_matrix_algebra(n: usize, field: FieldSpec) -> Result<Algebra> {
    if n == 0 {
        return Err(Error::DomainError("n must be at least 1".into()));
    }
    if n > MATRIX_CAP {
        return Err(Error::ResourceLimit(format!("n = {n} exceeds the cap {MATRIX_CAP}")));
    }
    let idx = |i: usize, j: usize| (i - 1) * n + j;
    let mut a = Algebra::new(field, n * n)?;
    for i in 1..=n {
        for j in 1..=n {
            for l in 1..=n {
                a.add_product_i64(idx(i, j), idx(j, l), idx(i, l), 1)?;
            }
        }
    }
    let mut labels = Vec::new();
    for i in 1..=n {
        for j in 1..=n {
            labels.push(format!("E{i}{j}"));
        }
    }
    a.set_labels(Some(labels))?;
    let mut e = a.zero();
    for i in 1..=n {
        e = e.add(&a.basis(idx(i, i))?);
    }
    a.set_unity_checked(e)?;
    Ok(a)
}

/// Index of the matrix unit `E_ij` in [`make_matrix_algebra`].
pub fn matrix_unit(n: usize, i: usize, j: usize) -> usize {
    (i - 1) * n + j
}

fn abc(field: FieldSpec, products: &[(usize, usize, usize)]) -> Algebra {
    let mut a = Algebra::new(field, 3).expect("dim 3");
    for &(i, j, k) in products {
        a.add_product_i64(i, j, k, 1).expect("valid entry");
    }
    a.set_labels(Some(vec!["a".into(), "b".into(), "c".into()])).expect("3 labels");
    a
}

/// `a a = b`, `b a = c`: nilpotent of index 4. Mixing and right sliding,
/// since `(xy)z = (xz)y` here; not left sliding.
pub fn make_chain3(field: FieldSpec) -> Algebra {
    abc(field, &[(1, 1, 2), (2, 1, 3)])
}

/// `a a = b` only, so the cube of the algebra vanishes.
pub fn make_nil3(field: FieldSpec) -> Algebra {
    abc(field, &[(1, 1, 2)])
}

/// `a a = b`, `b b = c`: `d_3 = 0` but `d_4 = 1` for `S = {a}`.
pub fn make_squaring_chain(field: FieldSpec) -> Algebra {
    abc(field, &[(1, 1, 2), (2, 2, 3)])
}

/// `F ⊕ A` with the adjoined unity appended as the last basis vector.
pub fn make_unital_hull(alg: &Algebra) -> Result<Algebra> {
    if alg.is_unital() {
        return Err(Error::AlreadyUnital);
    }
    let n = alg.dim();
    let mut h = Algebra::new(alg.field(), n + 1)?;
    for (i, j, k, c) in alg.structure_constants() {
        h.add_product(i, j, k, c)?;
    }
    let e = n + 1;
    for i in 1..=n + 1 {
        h.add_product_i64(e, i, i, 1)?;
        if i != e {
            h.add_product_i64(i, e, i, 1)?;
        }
    }
    if let Some(l) = alg.labels() {
        let mut l = l.to_vec();
        l.push("e".into());
        h.set_labels(Some(l))?;
    }
    h.set_unity_checked(h.basis(e)?)?;
    Ok(h)
}

/// Doubling product on coordinate vectors of length `2^level`:
/// `(a, b)(c, d) = (ac + γ d̄ b, d a + b c̄)`.
fn cd_mul(x: &[Scalar], y: &[Scalar], gammas: &[Scalar]) -> Vec<Scalar> {
    if x.len() == 1 {
        return vec![&x[0] * &y[0]];
    }
    let h = x.len() / 2;
    let g = &gammas[gammas.len() - 1];
    let rest = &gammas[..gammas.len() - 1];
    let (a, b) = x.split_at(h);
    let (c, d) = y.split_at(h);
    let ac = cd_mul(a, c, rest);
    let db = cd_mul(&cd_conj(d), b, rest);
    let da = cd_mul(d, a, rest);
    let bc = cd_mul(b, &cd_conj(c), rest);
    let mut out: Vec<Scalar> = ac.iter().zip(&db).map(|(p, q)| p + &(g * q)).collect();
    out.extend(da.iter().zip(&bc).map(|(p, q)| p + q));
    out
}

fn cd_conj(x: &[Scalar]) -> Vec<Scalar> {
    if x.len() == 1 {
        return x.to_vec();
    }
    let h = x.len() / 2;
    let mut out = cd_conj(&x[..h]);
    out.extend(x[h..].iter().map(|s| -s));
    out
}

/// Iterated Cayley–Dickson doubling of the ground field with parameters
/// `gammas[0..level]` (the first doubling uses `gammas[0]`).
pub fn make_cayley_dickson(level: usize, gammas: &[Scalar], field: FieldSpec) -> Result<Algebra> {
    if level > CAYLEY_DICKSON_CAP {
        return Err(Error::DomainError(format!("level {level} exceeds {CAYLEY_DICKSON_CAP}")));
    }
    if gammas.len() != level {
        return Err(Error::DomainError(format!("expected {level} parameters, got {}", gammas.len())));
    }
    if gammas.iter().any(|g| g.is_zero() || !field.owns(g)) {
        return Err(Error::DomainError("parameters must be nonzero elements of the field".into()));
    }
    let dim = 1usize << level;
    let mut a = Algebra::new(field, dim)?;
    for i in 1..=dim {
        for j in 1..=dim {
            let x = a.basis(i)?;
            let y = a.basis(j)?;
            let p = cd_mul(x.coords(), y.coords(), gammas);
            for (k, c) in p.into_iter().enumerate() {
                if !c.is_zero() {
                    a.add_product(i, j, k + 1, c)?;
                }
            }
        }
    }
    a.set_unity_checked(a.basis(1)?)?;
    Ok(a)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TwistSide {
    Left,
    Right,
    Both,
}

/// Replaces the product by `x̄ y`, `x ȳ` or `x̄ ȳ`, where `x̄ = (x_1, -x_2, ..., -x_n)`
/// relative to a unity in position 1. The result is generally non-unital.
pub fn twist_conjugation(alg: &Algebra, side: TwistSide) -> Result<Algebra> {
    let one = alg.basis(1)?;
    if alg.unity() != Some(&one) {
        return Err(Error::DomainError("twisting needs the unity as basis vector 1".into()));
    }
    let n = alg.dim();
    let conj = |e: &Element| -> Element {
        let mut c: Vec<Scalar> = e.coords().iter().map(|s| -s).collect();
        c[0] = e.coords()[0].clone();
        Element::from_coords(c)
    };
    let mut t = Algebra::new(alg.field(), n)?;
    for i in 1..=n {
        for j in 1..=n {
            let mut x = alg.basis(i)?;
            let mut y = alg.basis(j)?;
            if matches!(side, TwistSide::Left | TwistSide::Both) {
                x = conj(&x);
            }
            if matches!(side, TwistSide::Right | TwistSide::Both) {
                y = conj(&y);
            }
            let p = alg.multiply(&x, &y)?;
            for (k, c) in p.coords().iter().enumerate() {
                if !c.is_zero() {
                    t.add_product(i, j, k + 1, c.clone())?;
                }
            }
        }
    }
    Ok(t)
}

/// In `Spin_n` with `a = α + v`, `b = β + w`: the four products `(ab)a`,
/// `a(ba)`, `(ba)a`, `a(ab)` minus `(⟨v,w⟩ - αβ) a + β aa + α ab`.
pub fn spin_identity_residuals(alg: &Algebra, a: &Element, b: &Element) -> Result<[Element; 4]> {
    let ab = alg.multiply(a, b)?;
    let ba = alg.multiply(b, a)?;
    let aa = alg.multiply(a, a)?;
    let alpha = &a.coords()[0];
    let beta = &b.coords()[0];
    let mut vw = alg.field().zero();
    for (x, y) in a.coords()[1..].iter().zip(&b.coords()[1..]) {
        vw = &vw + &(x * y);
    }
    let c = &vw - &(alpha * beta);
    let rhs = a.scale(&c).add(&aa.scale(beta)).add(&ab.scale(alpha));
    Ok([
        alg.multiply(&ab, a)?.sub(&rhs),
        alg.multiply(a, &ba)?.sub(&rhs),
        alg.multiply(&ba, a)?.sub(&rhs),
        alg.multiply(a, &ab)?.sub(&rhs),
    ])
}

/// Builds an example by name: `z2n:N`, `aflex`, `aalt`, `spin:N`, `matrix:N`,
/// `chain3`, `nil3`, `squaring`, `hull:NAME`, `cd:LEVEL` (all parameters -1).
pub fn by_name(name: &str, field: FieldSpec) -> Result<Algebra> {
    let (head, arg) = match name.split_once(':') {
        Some((h, a)) => (h, Some(a)),
        None => (name, None),
    };
    let num = || -> Result<usize> {
        arg.ok_or_else(|| Error::Parse(format!("`{head}` needs a parameter, e.g. `{head}:3`")))?
            .parse()
            .map_err(|_| Error::Parse(format!("bad parameter in `{name}`")))
    };
    match head {
        "z2n" => make_group_algebra_z2n(num()?),
        "aflex" => Ok(make_a_flex(field)),
        "aalt" => Ok(make_a_alt(field)),
        "spin" => make_spin_factor(num()?, field),
        "matrix" => make_matrix_algebra(num()?, field),
        "chain3" => Ok(make_chain3(field)),
        "nil3" => Ok(make_nil3(field)),
        "squaring" => Ok(make_squaring_chain(field)),
        "hull" => {
            let inner = arg.ok_or_else(|| Error::Parse("`hull` needs an inner name".into()))?;
            make_unital_hull(&by_name(inner, field)?)
        }
        "cd" => {
            let level = num()?;
            let g = vec![field.from_i64(-1); level];
            make_cayley_dickson(level, &g, field)
        }
        _ => Err(Error::Parse(format!("unknown example `{name}`"))),
    }
}
