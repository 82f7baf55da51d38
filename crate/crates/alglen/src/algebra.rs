//! Finite-dimensional algebras given by sparse structure constants.
//!
//! External indices are 1-based (`b_1 .. b_n`); the internal table is 0-based.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{FieldSpec, Scalar};

/// Coordinates of an algebra element in the fixed basis.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Element {
    coords: Vec<Scalar>,
}

impl Element {
    pub fn zero(field: FieldSpec, dim: usize) -> Self {
        Element { coords: vec![field.zero(); dim] }
    }

    /// The basis vector `b_i`, 1-based.
    pub fn basis(field: FieldSpec, dim: usize, i: usize) -> Result<Self> {
        if i == 0 || i > dim {
            return Err(Error::IndexOutOfRange { index: i, bound: dim });
        }
        let mut e = Element::zero(field, dim);
        e.coords[i - 1] = field.one();
        Ok(e)
    }

    pub fn from_coords(coords: Vec<Scalar>) -> Self {
        Element { coords }
    }

    pub fn from_i64s(field: FieldSpec, xs: &[i64]) -> Self {
        Element { coords: xs.iter().map(|&x| field.from_i64(x)).collect() }
    }

    pub fn coords(&self) -> &[Scalar] {
        &self.coords
    }

    pub fn into_coords(self) -> Vec<Scalar> {
        self.coords
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Scalar::is_zero)
    }

    /// Indices (0-based) of nonzero coordinates.
    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.coords.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(i, _)| i)
    }

    pub fn add(&self, other: &Element) -> Element {
        Element { coords: self.coords.iter().zip(&other.coords).map(|(a, b)| a + b).collect() }
    }

    pub fn sub(&self, other: &Element) -> Element {
        Element { coords: self.coords.iter().zip(&other.coords).map(|(a, b)| a - b).collect() }
    }

    pub fn neg(&self) -> Element {
        Element { coords: self.coords.iter().map(|a| -a).collect() }
    }

    pub fn scale(&self, c: &Scalar) -> Element {
        Element { coords: self.coords.iter().map(|a| a * c).collect() }
    }

    /// `self += c * other`
    pub fn add_scaled(&mut self, c: &Scalar, other: &Element) {
        if c.is_zero() {
            return;
        }
        for (a, b) in self.coords.iter_mut().zip(&other.coords) {
            if !b.is_zero() {
                *a = &*a + &(c * b);
            }
        }
    }

    /// Human-readable linear combination such as `e1 - 2e3`, using 1-based
    /// default names unless labels are given.
    pub fn pretty(&self, labels: Option<&[String]>) -> String {
        let mut out = String::new();
        for i in self.support() {
            let name = labels.map(|l| l[i].clone()).unwrap_or_else(|| format!("e{}", i + 1));
            let c = &self.coords[i];
            let s = c.to_string();
            let (neg, mag) = match s.strip_prefix('-') {
                Some(m) => (true, m.to_string()),
                None => (false, s),
            };
            if out.is_empty() {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            if mag != "1" {
                out.push_str(&mag);
                out.push('*');
            }
            out.push_str(&name);
        }
        if out.is_empty() {
            out.push('0');
        }
        out
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

impl Serialize for Element {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        self.coords.serialize(ser)
    }
}

/// Result of checking a declared unity.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum UnityStatus {
    NonUnital,
    Verified,
    /// 1-based basis index on which the declared unity misbehaves.
    Fails(usize),
}

/// An algebra over `field` with basis `b_1..b_n` and `b_i b_j = sum_k c_ijk b_k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Algebra {
    field: FieldSpec,
    dim: usize,
    /// `table[i * dim + j]` lists `(k, c_ijk)` with nonzero `c`, sorted by `k` (all 0-based).
    table: Vec<Vec<(usize, Scalar)>>,
    unity: Option<Element>,
    labels: Option<Vec<String>>,
}

impl Algebra {
    /// The zero product on an `n`-dimensional space.
    pub fn new(field: FieldSpec, dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::DomainError("dimension must be positive".into()));
        }
        Ok(Algebra { field, dim, table: vec![Vec::new(); dim * dim], unity: None, labels: None })
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn unity(&self) -> Option<&Element> {
        self.unity.as_ref()
    }

    pub fn is_unital(&self) -> bool {
        self.unity.is_some()
    }

    /// `dim Lin_0`, which depends only on the algebra.
    pub fn d0(&self) -> usize {
        usize::from(self.is_unital())
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn set_labels(&mut self, labels: Option<Vec<String>>) -> Result<()> {
        if let Some(l) = &labels {
            if l.len() != self.dim {
                return Err(Error::DimensionMismatch { expected: self.dim, got: l.len() });
            }
        }
        self.labels = labels;
        Ok(())
    }

    fn check_index(&self, i: usize) -> Result<()> {
        if i == 0 || i > self.dim {
            Err(Error::IndexOutOfRange { index: i, bound: self.dim })
        } else {
            Ok(())
        }
    }

    fn check_element(&self, a: &Element) -> Result<()> {
        if a.dim() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, got: a.dim() });
        }
        if !a.coords.iter().all(|c| self.field.owns(c)) {
            return Err(Error::FieldMismatch);
        }
        Ok(())
    }

    /// Adds `c` to the coefficient `c_ijk` (1-based indices).
    pub fn add_product(&mut self, i: usize, j: usize, k: usize, c: Scalar) -> Result<()> {
        self.check_index(i)?;
        self.check_index(j)?;
        self.check_index(k)?;
        if !self.field.owns(&c) {
            return Err(Error::FieldMismatch);
        }
        let cell = &mut self.table[(i - 1) * self.dim + (j - 1)];
        match cell.binary_search_by_key(&(k - 1), |(kk, _)| *kk) {
            Ok(pos) => {
                let v = &cell[pos].1 + &c;
                if v.is_zero() {
                    cell.remove(pos);
                } else {
                    cell[pos].1 = v;
                }
            }
            Err(pos) => {
                if !c.is_zero() {
                    cell.insert(pos, (k - 1, c));
                }
            }
        }
        Ok(())
    }

    /// Convenience wrapper over [`Algebra::add_product`] with an integer coefficient.
    pub fn add_product_i64(&mut self, i: usize, j: usize, k: usize, c: i64) -> Result<()> {
        let s = self.field.from_i64(c);
        self.add_product(i, j, k, s)
    }

    /// `c_ijk`, 1-based.
    pub fn structure_constant(&self, i: usize, j: usize, k: usize) -> Result<Scalar> {
        self.check_index(i)?;
        self.check_index(j)?;
        self.check_index(k)?;
        let cell = &self.table[(i - 1) * self.dim + (j - 1)];
        Ok(cell
            .iter()
            .find(|(kk, _)| *kk == k - 1)
            .map(|(_, c)| c.clone())
            .unwrap_or_else(|| self.field.zero()))
    }

    /// Nonzero constants as `(i, j, k, c)` with 1-based indices, sorted.
    pub fn structure_constants(&self) -> Vec<(usize, usize, usize, Scalar)> {
        let mut out = Vec::new();
        for i in 0..self.dim {
            for j in 0..self.dim {
                for (k, c) in &self.table[i * self.dim + j] {
                    out.push((i + 1, j + 1, k + 1, c.clone()));
                }
            }
        }
        out
    }

    pub fn basis(&self, i: usize) -> Result<Element> {
        Element::basis(self.field, self.dim, i)
    }

    pub fn zero(&self) -> Element {
        Element::zero(self.field, self.dim)
    }

    /// Declares the unity; `verify_unity` reports whether it actually is one.
    pub fn set_unity(&mut self, unity: Option<Element>) -> Result<()> {
        if let Some(u) = &unity {
            self.check_element(u)?;
        }
        self.unity = unity;
        Ok(())
    }

    /// Declares the unity and rejects it unless it acts as the identity.
    pub fn set_unity_checked(&mut self, unity: Element) -> Result<()> {
        self.set_unity(Some(unity))?;
        if let UnityStatus::Fails(i) = self.verify_unity() {
            self.unity = None;
            return Err(Error::UnityFails(i));
        }
        Ok(())
    }

    /// Bilinear product.
    pub fn multiply(&self, a: &Element, b: &Element) -> Result<Element> {
        self.check_element(a)?;
        self.check_element(b)?;
        Ok(self.mul(a, b))
    }

    /// Product without dimension checks, for internal hot loops.
    pub(crate) fn mul(&self, a: &Element, b: &Element) -> Element {
        let n = self.dim;
        let mut out = vec![self.field.zero(); n];
        let bs: Vec<usize> = b.support().collect();
        for i in a.support() {
            let ai = &a.coords[i];
            for &j in &bs {
                let cell = &self.table[i * n + j];
                if cell.is_empty() {
                    continue;
                }
                let ab = ai * &b.coords[j];
                for (k, c) in cell {
                    out[*k] = &out[*k] + &(&ab * c);
                }
            }
        }
        Element { coords: out }
    }

    /// Checks `e b_i = b_i = b_i e` for every basis vector.
    pub fn verify_unity(&self) -> UnityStatus {
        let Some(u) = &self.unity else {
            return UnityStatus::NonUnital;
        };
        for i in 1..=self.dim {
            let b = self.basis(i).expect("index in range");
            if self.mul(u, &b) != b || self.mul(&b, u) != b {
                return UnityStatus::Fails(i);
            }
        }
        UnityStatus::Verified
    }

    /// Looks for a two-sided identity by solving the linear system
    /// `e b_i = b_i`, `b_i e = b_i`. Diagnostic only; never applied automatically.
    pub fn infer_unity(&self) -> Option<Element> {
        let n = self.dim;
        // unknown e = sum_t x_t b_t; equation rows are indexed by (i, k)
        let mut rows = Vec::new();
        let mut rhs = Vec::new();
        for i in 0..n {
            for k in 0..n {
                let target = if i == k { self.field.one() } else { self.field.zero() };
                // (e b_i)_k = sum_t x_t c_{t i k}
                let left: Vec<Scalar> =
                    (0..n).map(|t| self.coef0(t, i, k)).collect();
                rows.push(left);
                rhs.push(target.clone());
                let right: Vec<Scalar> =
                    (0..n).map(|t| self.coef0(i, t, k)).collect();
                rows.push(right);
                rhs.push(target);
            }
        }
        crate::spans::solve_system(self.field, &rows, &rhs).map(Element::from_coords)
    }

    fn coef0(&self, i: usize, j: usize, k: usize) -> Scalar {
        self.table[i * self.dim + j]
            .iter()
            .find(|(kk, _)| *kk == k)
            .map(|(_, c)| c.clone())
            .unwrap_or_else(|| self.field.zero())
    }

    /// The algebra with the opposite product `a * b := b a`.
    pub fn opposite(&self) -> Algebra {
        let mut op = self.clone();
        let n = self.dim;
        for i in 0..n {
            for j in 0..n {
                op.table[i * n + j] = self.table[j * n + i].clone();
            }
        }
        op
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn flex() -> Algebra {
        let mut a = Algebra::new(FieldSpec::Rational, 5).unwrap();
        a.add_product_i64(1, 1, 5, 1).unwrap();
        a.add_product_i64(1, 2, 3, 1).unwrap();
        a.add_product_i64(1, 3, 4, 1).unwrap();
        a.add_product_i64(2, 5, 4, -1).unwrap();
        a
    }

    #[test]
    fn basis_products() {
        let a = flex();
        let e = |i| a.basis(i).unwrap();
        assert_eq!(a.multiply(&e(1), &e(2)).unwrap(), e(3));
        assert_eq!(a.multiply(&e(2), &e(5)).unwrap(), e(4).neg());
        assert!(a.multiply(&e(3), &e(1)).unwrap().is_zero());
    }

    #[test]
    fn dimension_checked() {
        let a = flex();
        let short = Element::zero(FieldSpec::Rational, 3);
        assert_eq!(
            a.multiply(&short, &a.basis(1).unwrap()),
            Err(Error::DimensionMismatch { expected: 5, got: 3 })
        );
        assert!(matches!(a.basis(6), Err(Error::IndexOutOfRange { .. })));
    }

    #[test]
    fn wrong_unity_reports_witness() {
        let mut a = flex();
        assert_eq!(a.verify_unity(), UnityStatus::NonUnital);
        a.set_unity(Some(a.basis(1).unwrap())).unwrap();
        // e1 e1 = e5 != e1 already fails on b_1
        assert_eq!(a.verify_unity(), UnityStatus::Fails(1));
        assert!(a.clone().set_unity_checked(a.basis(1).unwrap()).is_err());
    }

    #[test]
    fn cancelling_products_are_dropped() {
        let mut a = Algebra::new(FieldSpec::Rational, 2).unwrap();
        a.add_product_i64(1, 1, 2, 3).unwrap();
        a.add_product_i64(1, 1, 2, -3).unwrap();
        assert!(a.structure_constants().is_empty());
    }

    #[test]
    fn pretty_printing() {
        let f = FieldSpec::Rational;
        let x = Element::from_i64s(f, &[1, 0, -2, 0, 1]);
        assert_eq!(x.pretty(None), "e1 - 2*e3 + e5");
        assert_eq!(Element::zero(f, 2).pretty(None), "0");
    }
}
