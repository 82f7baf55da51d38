//! Spans of words: `Lin_k(S)`, difference sequences, and exact `l(A)` over
//! prime fields.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algebra::{Algebra, Element};
use crate::error::{Error, Result};
use crate::field::{FieldSpec, Scalar};
use crate::words::GeneratorSet;

/// Rows in reduced row-echelon form, sorted by pivot column.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SpanBasis {
    field: FieldSpec,
    dim: usize,
    rows: Vec<Vec<Scalar>>,
    pivots: Vec<usize>,
}

impl SpanBasis {
    pub fn new(field: FieldSpec, dim: usize) -> Self {
        SpanBasis { field, dim, rows: Vec::new(), pivots: Vec::new() }
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Vec<Scalar>] {
        &self.rows
    }

    pub fn pivot_cols(&self) -> &[usize] {
        &self.pivots
    }

    pub fn row_elements(&self) -> Vec<Element> {
        self.rows.iter().map(|r| Element::from_coords(r.clone())).collect()
    }

    pub fn is_full(&self) -> bool {
        self.rank() == self.dim
    }

    /// Residual of `v` after elimination against the basis.
    fn reduce(&self, v: &[Scalar]) -> Vec<Scalar> {
        let mut r = v.to_vec();
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if r[p].is_zero() {
                continue;
            }
            let c = r[p].clone();
            for (x, y) in r.iter_mut().zip(row) {
                if !y.is_zero() {
                    *x = &*x - &(&c * y);
                }
            }
        }
        r
    }

    pub fn contains(&self, v: &Element) -> Result<bool> {
        self.check(v)?;
        Ok(self.reduce(v.coords()).iter().all(Scalar::is_zero))
    }

    fn check(&self, v: &Element) -> Result<()> {
        if v.dim() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, got: v.dim() });
        }
        Ok(())
    }

    /// Adds `v` to the span; returns whether the rank grew.
    pub fn insert(&mut self, v: &Element) -> Result<bool> {
        self.check(v)?;
        Ok(self.insert_coords(v.coords()))
    }

    fn insert_coords(&mut self, v: &[Scalar]) -> bool {
        let mut r = self.reduce(v);
        let Some(p) = r.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = r[p].inv().expect("nonzero pivot");
        for x in r.iter_mut() {
            if !x.is_zero() {
                *x = &*x * &inv;
            }
        }
        for row in self.rows.iter_mut() {
            if row[p].is_zero() {
                continue;
            }
            let c = row[p].clone();
            for (x, y) in row.iter_mut().zip(&r) {
                if !y.is_zero() {
                    *x = &*x - &(&c * y);
                }
            }
        }
        let at = self.pivots.partition_point(|&q| q < p);
        self.pivots.insert(at, p);
        self.rows.insert(at, r);
        true
    }

    pub fn from_elements<'a>(
        field: FieldSpec,
        dim: usize,
        elems: impl IntoIterator<Item = &'a Element>,
    ) -> Result<Self> {
        let mut b = SpanBasis::new(field, dim);
        for e in elems {
            b.insert(e)?;
        }
        Ok(b)
    }

    /// True when every row of `self` lies in `other`.
    pub fn is_subspace_of(&self, other: &SpanBasis) -> bool {
        self.rows.iter().all(|r| other.reduce(r).iter().all(Scalar::is_zero))
    }
}

/// Functional form of [`SpanBasis::insert`].
pub fn rref_insert(basis: &SpanBasis, v: &Element) -> Result<(SpanBasis, bool)> {
    let mut b = basis.clone();
    let added = b.insert(v)?;
    Ok((b, added))
}

/// One solution of `rows * x = rhs` (free unknowns set to zero), or `None`.
/// `rows[e][t]` is the coefficient of unknown `t` in equation `e`.
pub fn solve_system(field: FieldSpec, rows: &[Vec<Scalar>], rhs: &[Scalar]) -> Option<Vec<Scalar>> {
    let n = rows.first().map_or(0, Vec::len);
    let mut aug: Vec<Vec<Scalar>> = rows
        .iter()
        .zip(rhs)
        .map(|(r, b)| {
            let mut v = r.clone();
            v.push(b.clone());
            v
        })
        .collect();
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..n {
        let Some(sel) = (row..aug.len()).find(|&i| !aug[i][col].is_zero()) else {
            continue;
        };
        aug.swap(row, sel);
        let inv = aug[row][col].inv().ok()?;
        for x in aug[row].iter_mut() {
            *x = &*x * &inv;
        }
        for i in 0..aug.len() {
            if i != row && !aug[i][col].is_zero() {
                let c = aug[i][col].clone();
                let pr = aug[row].clone();
                for (x, y) in aug[i].iter_mut().zip(&pr) {
                    *x = &*x - &(&c * y);
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    if aug[row..].iter().any(|r| !r[n].is_zero()) {
        return None;
    }
    let mut x = vec![field.zero(); n];
    for (i, &c) in pivots.iter().enumerate() {
        x[c] = aug[i][n].clone();
    }
    Some(x)
}

/// How a span computation decides it has stabilized.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Stabilization {
    /// First `d_m = 0`; sound only for mixing or sliding algebras.
    MixingCriterion,
    /// `Lin_m(S) Lin_m(S) ⊆ Lin_m(S)`.
    ClosureCriterion,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SpanMode {
    General,
    Mixing,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiffSequence {
    pub d: Vec<usize>,
    pub length_of_set: usize,
    pub stabilized_by: Stabilization,
    pub generating: bool,
}

/// Default bound on the number of levels in general mode.
pub const DEFAULT_MAX_LEVEL: usize = 256;

/// Incremental computation of `Lin_0 ⊆ Lin_1 ⊆ ...`.
///
/// `new_parts[k]` holds the vectors that raised the rank at level `k`, stored
/// as they were produced (products of earlier new parts, or elements of `S`).
pub struct SpanEngine<'a> {
    alg: &'a Algebra,
    set: GeneratorSet,
    mode: SpanMode,
    span: SpanBasis,
    new_parts: Vec<Vec<Element>>,
    d: Vec<usize>,
}

impl<'a> SpanEngine<'a> {
    /// Starts at level 0 (`Lin_0` is `F e` or zero).
    pub fn new(alg: &'a Algebra, set: &GeneratorSet, mode: SpanMode) -> Result<Self> {
        set.check_against(alg)?;
        let mut span = SpanBasis::new(alg.field(), alg.dim());
        if let Some(e) = alg.unity() {
            span.insert(e)?;
        }
        let d0 = span.rank();
        Ok(SpanEngine { alg, set: set.clone(), mode, span, new_parts: vec![Vec::new()], d: vec![d0] })
    }

    pub fn level(&self) -> usize {
        self.d.len() - 1
    }

    pub fn span(&self) -> &SpanBasis {
        &self.span
    }

    pub fn d(&self) -> &[usize] {
        &self.d
    }

    pub fn new_part(&self, k: usize) -> &[Element] {
        &self.new_parts[k]
    }

    /// Computes the next level and returns its `d`.
    pub fn step(&mut self) -> Result<usize> {
        let m = self.level() + 1;
        let candidates: Vec<Element> = if m == 1 {
            self.set.elements.clone()
        } else {
            let pairs: Vec<(usize, usize)> = match self.mode {
                SpanMode::General => (1..m).map(|i| (i, m - i)).collect(),
                SpanMode::Mixing => {
                    if m == 2 {
                        vec![(1, 1)]
                    } else {
                        vec![(m - 1, 1), (1, m - 1)]
                    }
                }
            };
            let mut jobs = Vec::new();
            for (i, j) in pairs {
                for u in &self.new_parts[i] {
                    for v in &self.new_parts[j] {
                        jobs.push((u, v));
                    }
                }
            }
            let alg = self.alg;
            jobs.par_iter().map(|(u, v)| alg.mul(u, v)).collect()
        };
        let mut added = Vec::new();
        for c in candidates {
            if self.span.insert(&c)? {
                added.push(c);
            }
        }
        let dm = added.len();
        self.new_parts.push(added);
        self.d.push(dm);
        if m == 1 {
            let mut check = SpanBasis::new(self.alg.field(), self.alg.dim());
            if let Some(e) = self.alg.unity() {
                check.insert(e)?;
            }
            for s in &self.set.elements {
                check.insert(s)?;
            }
            let expect = check.rank() - self.d[0];
            if expect != dm {
                return Err(Error::Internal(format!("d_1 = {dm} but rank gives {expect}")));
            }
        }
        Ok(dm)
    }

    /// Whether the current span is closed under multiplication. Products
    /// `N_i N_j` with `i + j <= level` already lie in the span.
    pub fn is_closed(&self) -> bool {
        let m = self.level();
        let mut jobs = Vec::new();
        for i in 1..=m {
            for j in 1..=m {
                if i + j <= m {
                    continue;
                }
                for u in &self.new_parts[i] {
                    for v in &self.new_parts[j] {
                        jobs.push((u, v));
                    }
                }
            }
        }
        let alg = self.alg;
        let span = &self.span;
        jobs.par_iter().all(|(u, v)| span.reduce(alg.mul(u, v).coords()).iter().all(Scalar::is_zero))
    }

    fn finish(&self, by: Stabilization) -> DiffSequence {
        let l = self.d.iter().enumerate().skip(1).filter(|(_, &x)| x != 0).map(|(k, _)| k).max().unwrap_or(0);
        let d: Vec<usize> = self.d[..=l].to_vec();
        let generating = self.span.rank() == self.alg.dim();
        DiffSequence { d, length_of_set: l, stabilized_by: by, generating }
    }
}

/// The difference sequence of `S` with the default level cap.
pub fn diff_sequence(alg: &Algebra, set: &GeneratorSet, mode: SpanMode) -> Result<DiffSequence> {
    diff_sequence_capped(alg, set, mode, DEFAULT_MAX_LEVEL)
}

pub fn diff_sequence_capped(
    alg: &Algebra,
    set: &GeneratorSet,
    mode: SpanMode,
    max_level: usize,
) -> Result<DiffSequence> {
    let mut eng = SpanEngine::new(alg, set, mode)?;
    match mode {
        SpanMode::General => loop {
            if eng.level() >= 1 && eng.is_closed() {
                return Ok(eng.finish(Stabilization::ClosureCriterion));
            }
            if eng.level() >= max_level {
                return Err(Error::ResourceLimit(format!("no stabilization within {max_level} levels")));
            }
            eng.step()?;
        },
        SpanMode::Mixing => loop {
            if eng.level() > alg.dim() + 1 {
                return Err(Error::Internal("mixing-mode run exceeded dim + 1 levels".into()));
            }
            if eng.step()? == 0 {
                return Ok(eng.finish(Stabilization::MixingCriterion));
            }
        },
    }
}

/// `Lin_k(S)`: span of the unity (if any) and all words of length at most `k`.
pub fn lin_k(alg: &Algebra, set: &GeneratorSet, k: usize) -> Result<SpanBasis> {
    let mut eng = SpanEngine::new(alg, set, SpanMode::General)?;
    while eng.level() < k {
        eng.step()?;
    }
    Ok(eng.span().clone())
}

/// `l(S)` computed in general mode.
pub fn length_of_set(alg: &Algebra, set: &GeneratorSet) -> Result<usize> {
    Ok(diff_sequence(alg, set, SpanMode::General)?.length_of_set)
}

/// Default cap on the number of subspaces enumerated.
pub const DEFAULT_SUBSPACE_BUDGET: u128 = 2_000_000;

/// Number of `r`-dimensional subspaces of `F_p^n`.
pub fn gaussian_binomial(n: usize, r: usize, p: u64) -> Option<u128> {
    if r > n {
        return Some(0);
    }
    let p = p as u128;
    let mut num: u128 = 1;
    let mut den: u128 = 1;
    for i in 0..r {
        num = num.checked_mul(p.checked_pow((n - i) as u32)?.checked_sub(1)?)?;
        den = den.checked_mul(p.checked_pow((i + 1) as u32)?.checked_sub(1)?)?;
    }
    Some(num / den)
}

pub fn count_subspaces(n: usize, p: u64) -> Option<u128> {
    (0..=n).try_fold(0u128, |acc, r| acc.checked_add(gaussian_binomial(n, r, p)?))
}

/// Every subspace of `F_p^n` as its RREF basis: rank ascending, pivot sets in
/// lexicographic order, free entries by odometer (last entry fastest).
pub struct Subspaces {
    p: u64,
    n: usize,
    rank: usize,
    pivots: Option<Vec<usize>>,
    free: Vec<(usize, usize)>,
    digits: Vec<u64>,
    fresh: bool,
    must_contain: Option<Element>,
}

impl Subspaces {
    fn load_free(&mut self) {
        let piv = self.pivots.as_ref().expect("pivots set");
        self.free.clear();
        for (i, &pc) in piv.iter().enumerate() {
            for c in pc + 1..self.n {
                if !piv.contains(&c) {
                    self.free.push((i, c));
                }
            }
        }
        self.digits = vec![0; self.free.len()];
        self.fresh = true;
    }

    fn next_pivots(&mut self) -> bool {
        let n = self.n;
        if let Some(piv) = self.pivots.as_mut() {
            let r = piv.len();
            // next combination in lexicographic order
            let mut i = r;
            while i > 0 {
                i -= 1;
                if piv[i] < n - r + i {
                    piv[i] += 1;
                    for t in i + 1..r {
                        piv[t] = piv[t - 1] + 1;
                    }
                    return true;
                }
            }
        }
        self.rank += 1;
        if self.rank > n {
            return false;
        }
        self.pivots = Some((0..self.rank).collect());
        true
    }

    fn advance_digits(&mut self) -> bool {
        if self.fresh {
            self.fresh = false;
            return true;
        }
        for d in self.digits.iter_mut().rev() {
            *d += 1;
            if *d < self.p {
                return true;
            }
            *d = 0;
        }
        false
    }

    fn current(&self) -> SpanBasis {
        let field = FieldSpec::Prime(self.p);
        let piv = self.pivots.clone().expect("pivots set");
        let mut rows = vec![vec![field.zero(); self.n]; piv.len()];
        for (i, &c) in piv.iter().enumerate() {
            rows[i][c] = field.one();
        }
        for (&(i, c), &v) in self.free.iter().zip(&self.digits) {
            rows[i][c] = field.from_i64(v as i64);
        }
        SpanBasis { field, dim: self.n, rows, pivots: piv }
    }
}

impl Iterator for Subspaces {
    type Item = SpanBasis;

    fn next(&mut self) -> Option<SpanBasis> {
        loop {
            if self.pivots.is_none() {
                // rank-0 subspace first
                self.pivots = Some(Vec::new());
                self.load_free();
            }
            if !self.advance_digits() {
                if !self.next_pivots() {
                    return None;
                }
                self.load_free();
                continue;
            }
            let b = self.current();
            if let Some(v) = &self.must_contain {
                if !b.contains(v).unwrap_or(false) {
                    continue;
                }
            }
            return Some(b);
        }
    }
}

pub fn enumerate_subspaces(field: FieldSpec, n: usize, must_contain: Option<&Element>) -> Result<Subspaces> {
    enumerate_subspaces_budget(field, n, must_contain, DEFAULT_SUBSPACE_BUDGET)
}

pub fn enumerate_subspaces_budget(
    field: FieldSpec,
    n: usize,
    must_contain: Option<&Element>,
    budget: u128,
) -> Result<Subspaces> {
    let FieldSpec::Prime(p) = field else {
        return Err(Error::NotFiniteField);
    };
    if let Some(v) = must_contain {
        if v.dim() != n {
            return Err(Error::DimensionMismatch { expected: n, got: v.dim() });
        }
    }
    match count_subspaces(n, p) {
        Some(c) if c <= budget => {}
        _ => {
            return Err(Error::ResourceLimit(format!(
                "F_{p}^{n} has more than {budget} subspaces"
            )))
        }
    }
    Ok(Subspaces {
        p,
        n,
        rank: 0,
        pivots: None,
        free: Vec::new(),
        digits: Vec::new(),
        fresh: true,
        must_contain: must_contain.cloned(),
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactLength {
    pub length: usize,
    pub witness: GeneratorSet,
    pub witness_sequence: DiffSequence,
    pub subspaces_examined: usize,
    pub generating_subspaces: usize,
}

/// `l(A)` over a prime field: the maximum of `l(S)` over generating sets,
/// where `S` ranges over bases of subspaces (containing `e` when unital).
pub fn exact_algebra_length(alg: &Algebra) -> Result<ExactLength> {
    exact_algebra_length_budget(alg, DEFAULT_SUBSPACE_BUDGET)
}

pub fn exact_algebra_length_budget(alg: &Algebra, budget: u128) -> Result<ExactLength> {
    let subs = enumerate_subspaces_budget(alg.field(), alg.dim(), alg.unity(), budget)?;
    let results: Vec<Result<Option<(usize, usize, DiffSequence)>>> = subs
        .enumerate()
        .par_bridge()
        .map(|(idx, w)| {
            let set = GeneratorSet::new(w.row_elements());
            let ds = diff_sequence(alg, &set, SpanMode::General)?;
            Ok(ds.generating.then(|| (ds.length_of_set, idx, ds)))
        })
        .collect();
    let mut examined = 0;
    let mut generating = 0;
    let mut best: Option<(usize, usize, DiffSequence)> = None;
    for r in results {
        examined += 1;
        if let Some((l, idx, ds)) = r? {
            generating += 1;
            let better = match &best {
                None => true,
                Some((bl, bi, _)) => l > *bl || (l == *bl && idx < *bi),
            };
            if better {
                best = Some((l, idx, ds));
            }
        }
    }
    let (length, idx, ds) = best.ok_or_else(|| Error::Internal("no generating subspace".into()))?;
    let witness_space = enumerate_subspaces_budget(alg.field(), alg.dim(), alg.unity(), budget)?
        .nth(idx)
        .ok_or_else(|| Error::Internal("witness index out of range".into()))?;
    Ok(ExactLength {
        length,
        witness: GeneratorSet::new(witness_space.row_elements()),
        witness_sequence: ds,
        subspaces_examined: examined,
        generating_subspaces: generating,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(xs: &[i64]) -> Element {
        Element::from_i64s(FieldSpec::Rational, xs)
    }

    #[test]
    fn insertion_examples() {
        let mut b = SpanBasis::new(FieldSpec::Rational, 3);
        assert!(b.insert(&q(&[1, 0, 0])).unwrap());
        assert!(!b.insert(&q(&[2, 0, 0])).unwrap());
        assert_eq!(b.rank(), 1);

        let mut b = SpanBasis::new(FieldSpec::Rational, 3);
        b.insert(&q(&[1, 1, 0])).unwrap();
        b.insert(&q(&[0, 1, 0])).unwrap();
        assert_eq!(b.row_elements(), vec![q(&[1, 0, 0]), q(&[0, 1, 0])]);
        assert_eq!(b.pivot_cols(), &[0, 1]);
        assert!(matches!(b.insert(&q(&[1, 0])), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn solve_small_system() {
        let f = FieldSpec::Rational;
        let rows = vec![vec![f.from_i64(1), f.from_i64(1)], vec![f.from_i64(1), f.from_i64(-1)]];
        let x = solve_system(f, &rows, &[f.from_i64(3), f.from_i64(1)]).unwrap();
        assert_eq!(x, vec![f.from_i64(2), f.from_i64(1)]);
        let bad = vec![vec![f.from_i64(1)], vec![f.from_i64(1)]];
        assert!(solve_system(f, &bad, &[f.from_i64(1), f.from_i64(2)]).is_none());
    }

    #[test]
    fn subspace_counts() {
        let gf2 = FieldSpec::prime(2).unwrap();
        assert_eq!(enumerate_subspaces(gf2, 2, None).unwrap().count(), 5);
        assert_eq!(enumerate_subspaces(gf2, 3, None).unwrap().count(), 16);
        let v = Element::from_i64s(gf2, &[1, 1]);
        // only <(1,1)> and the whole plane contain (1,1)
        assert_eq!(enumerate_subspaces(gf2, 2, Some(&v)).unwrap().count(), 2);
        let gf3 = FieldSpec::prime(3).unwrap();
        assert_eq!(
            enumerate_subspaces(gf3, 3, None).unwrap().count() as u128,
            count_subspaces(3, 3).unwrap()
        );
        assert!(matches!(enumerate_subspaces(FieldSpec::Rational, 2, None), Err(Error::NotFiniteField)));
    }

    #[test]
    fn empty_set_non_unital() {
        let a = Algebra::new(FieldSpec::Rational, 2).unwrap();
        let ds = diff_sequence(&a, &GeneratorSet::new(vec![]), SpanMode::General).unwrap();
        assert_eq!(ds.d, vec![0]);
        assert_eq!(ds.length_of_set, 0);
        assert!(!ds.generating);
    }

    #[test]
    fn squaring_chain_needs_closure_test() {
        // a a = b, b b = c: nothing new at level 3, c appears at level 4
        let f = FieldSpec::Rational;
        let mut a = Algebra::new(f, 3).unwrap();
        a.add_product_i64(1, 1, 2, 1).unwrap();
        a.add_product_i64(2, 2, 3, 1).unwrap();
        let s = GeneratorSet::from_basis_indices(&a, &[1]).unwrap();
        let ds = diff_sequence(&a, &s, SpanMode::General).unwrap();
        assert_eq!(ds.d, vec![0, 1, 1, 0, 1]);
        assert_eq!(ds.length_of_set, 4);
        assert_eq!(ds.stabilized_by, Stabilization::ClosureCriterion);
        let mixed = diff_sequence(&a, &s, SpanMode::Mixing).unwrap();
        assert_eq!(mixed.length_of_set, 2);
    }

    #[test]
    fn one_dimensional_idempotent() {
        let gf2 = FieldSpec::prime(2).unwrap();
        let mut a = Algebra::new(gf2, 1).unwrap();
        a.add_product_i64(1, 1, 1, 1).unwrap();
        assert_eq!(exact_algebra_length(&a).unwrap().length, 1);
    }
}
