use std::collections::btree_map::Entry;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::{Grading, Monomial, Parity, VariableId};

pub type Coeff = BigRational;

pub fn rat(n: i64, d: i64) -> Coeff {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Coeff {
    BigRational::from_integer(BigInt::from(n))
}

/// Grading of a whole polynomial.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PolyGrading {
    Zero,
    Homogeneous(Grading),
    Mixed,
}

/// An element of the graded-commutative polynomial algebra over ℚ.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct GradedPoly {
    terms: BTreeMap<Monomial, Coeff>,
}

impl GradedPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(Coeff::one())
    }

    pub fn constant(c: Coeff) -> Self {
        Self::term(Monomial::one(), c)
    }

    pub fn integer(n: i64) -> Self {
        Self::constant(int(n))
    }

    pub fn var(v: VariableId) -> Self {
        Self::term(Monomial::var(v), Coeff::one())
    }

    pub fn term(m: Monomial, c: Coeff) -> Self {
        let mut p = Self::zero();
        p.add_term(m, c);
        p
    }

    /// The ordered product of generators with coefficient `c`.
    pub fn product<I: IntoIterator<Item = VariableId>>(c: Coeff, vars: I) -> Self {
        match Monomial::from_product(vars) {
            Some((negate, m)) => Self::term(m, if negate { -c } else { c }),
            None => Self::zero(),
        }
    }

    pub fn add_term(&mut self, m: Monomial, c: Coeff) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Coeff)> + '_ {
        self.terms.iter()
    }

    pub fn into_terms(self) -> impl Iterator<Item = (Monomial, Coeff)> {
        self.terms.into_iter()
    }

    pub fn coefficient(&self, m: &Monomial) -> Coeff {
        self.terms.get(m).cloned().unwrap_or_else(Coeff::zero)
    }

    /// The coefficient of the constant monomial.
    pub fn constant_term(&self) -> Coeff {
        self.coefficient(&Monomial::one())
    }

    pub fn as_constant(&self) -> Option<Coeff> {
        match self.terms.len() {
            0 => Some(Coeff::zero()),
            1 => self.terms.get(&Monomial::one()).cloned(),
            _ => None,
        }
    }

    pub fn scale(&self, c: &Coeff) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        GradedPoly {
            terms: self
                .terms
                .iter()
                .map(|(m, k)| (m.clone(), k * c))
                .collect(),
        }
    }

    pub fn scale_int(&self, n: i64) -> Self {
        self.scale(&int(n))
    }

    pub fn pow(&self, n: u32) -> Self {
        (0..n).fold(Self::one(), |acc, _| &acc * self)
    }

    pub fn grading(&self) -> PolyGrading {
        let mut it = self.terms.keys().map(Monomial::grading);
        let Some(first) = it.next() else {
            return PolyGrading::Zero;
        };
        if it.all(|g| g == first) {
            PolyGrading::Homogeneous(first)
        } else {
            PolyGrading::Mixed
        }
    }

    /// Parity if every term agrees; the zero polynomial counts as even.
    pub fn parity(&self) -> Option<Parity> {
        let mut it = self.terms.keys().map(Monomial::parity);
        let Some(first) = it.next() else {
            return Some(Parity::Even);
        };
        it.all(|p| p == first).then_some(first)
    }

    /// The part of `self` of the given parity.
    pub fn parity_part(&self, parity: Parity) -> Self {
        self.filter(|m| m.parity() == parity)
    }

    pub fn filter(&self, mut keep: impl FnMut(&Monomial) -> bool) -> Self {
        GradedPoly {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| keep(m))
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn variables(&self) -> BTreeSet<VariableId> {
        self.terms
            .keys()
            .flat_map(|m| m.variables().cloned())
            .collect()
    }

    pub fn max_jet_order(&self) -> usize {
        self.terms
            .keys()
            .flat_map(|m| m.variables().map(VariableId::jet_order))
            .max()
            .unwrap_or(0)
    }

    /// Left partial derivative `∂/∂v`.
    pub fn left_partial(&self, v: &VariableId) -> Self {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            if let Some((k, negate, rest)) = m.left_derivative(v) {
                let mut c = c * int(k);
                if negate {
                    c = -c;
                }
                out.add_term(rest, c);
            }
        }
        out
    }

    /// Right partial derivative `∂⃖/∂v`.
    pub fn right_partial(&self, v: &VariableId) -> Self {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            if let Some((k, negate, rest)) = m.right_derivative(v) {
                let mut c = c * int(k);
                if negate {
                    c = -c;
                }
                out.add_term(rest, c);
            }
        }
        out
    }

    /// Replace generators by polynomials of the same parity; `None` keeps the
    /// generator.
    pub fn substitute(&self, mut f: impl FnMut(&VariableId) -> Option<GradedPoly>) -> Self {
        let mut cache: BTreeMap<VariableId, GradedPoly> = BTreeMap::new();
        let mut image = |v: &VariableId| -> GradedPoly {
            cache
                .entry(v.clone())
                .or_insert_with(|| f(v).unwrap_or_else(|| GradedPoly::var(v.clone())))
                .clone()
        };
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            let mut acc = Self::constant(c.clone());
            for (v, e) in m.even_part() {
                acc = &acc * &image(v).pow(*e);
            }
            for v in m.odd_part() {
                acc = &acc * &image(v);
            }
            out += acc;
        }
        out
    }

    /// Largest absolute coefficient, a cheap residual size.
    pub fn max_abs_coeff(&self) -> Coeff {
        self.terms
            .values()
            .map(|c| c.abs())
            .max()
            .unwrap_or_else(Coeff::zero)
    }

    pub fn residual_f64(&self) -> f64 {
        use num_traits::ToPrimitive;
        self.max_abs_coeff().to_f64().unwrap_or(f64::INFINITY)
    }

    /// Same polynomial with every generator passed through `f`.
    pub fn map_vars(&self, mut f: impl FnMut(&VariableId) -> VariableId) -> Self {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            if let Some((negate, m2)) = m.map_vars(&mut f) {
                out.add_term(m2, if negate { -c.clone() } else { c.clone() });
            }
        }
        out
    }
}

impl From<VariableId> for GradedPoly {
    fn from(v: VariableId) -> Self {
        GradedPoly::var(v)
    }
}

impl From<i64> for GradedPoly {
    fn from(n: i64) -> Self {
        GradedPoly::integer(n)
    }
}

impl AddAssign<GradedPoly> for GradedPoly {
    fn add_assign(&mut self, rhs: GradedPoly) {
        if self.terms.is_empty() {
            *self = rhs;
            return;
        }
        for (m, c) in rhs.terms {
            self.add_term(m, c);
        }
    }
}

impl AddAssign<&GradedPoly> for GradedPoly {
    fn add_assign(&mut self, rhs: &GradedPoly) {
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), c.clone());
        }
    }
}

impl SubAssign<&GradedPoly> for GradedPoly {
    fn sub_assign(&mut self, rhs: &GradedPoly) {
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), -c.clone());
        }
    }
}

impl SubAssign<GradedPoly> for GradedPoly {
    fn sub_assign(&mut self, rhs: GradedPoly) {
        for (m, c) in rhs.terms {
            self.add_term(m, -c);
        }
    }
}

impl Add<&GradedPoly> for &GradedPoly {
    type Output = GradedPoly;
    fn add(self, rhs: &GradedPoly) -> GradedPoly {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Add for GradedPoly {
    type Output = GradedPoly;
    fn add(mut self, rhs: GradedPoly) -> GradedPoly {
        self += rhs;
        self
    }
}

impl Sub<&GradedPoly> for &GradedPoly {
    type Output = GradedPoly;
    fn sub(self, rhs: &GradedPoly) -> GradedPoly {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Sub for GradedPoly {
    type Output = GradedPoly;
    fn sub(mut self, rhs: GradedPoly) -> GradedPoly {
        self -= rhs;
        self
    }
}

impl Neg for &GradedPoly {
    type Output = GradedPoly;
    fn neg(self) -> GradedPoly {
        GradedPoly {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), -c.clone()))
                .collect(),
        }
    }
}

impl Neg for GradedPoly {
    type Output = GradedPoly;
    fn neg(mut self) -> GradedPoly {
        for c in self.terms.values_mut() {
            *c = -c.clone();
        }
        self
    }
}

impl Mul<&GradedPoly> for &GradedPoly {
    type Output = GradedPoly;
    fn mul(self, rhs: &GradedPoly) -> GradedPoly {
        let mut out = GradedPoly::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                if let Some((negate, m)) = ma.mul(mb) {
                    let c = ca * cb;
                    out.add_term(m, if negate { -c } else { c });
                }
            }
        }
        out
    }
}

impl Mul for GradedPoly {
    type Output = GradedPoly;
    fn mul(self, rhs: GradedPoly) -> GradedPoly {
        &self * &rhs
    }
}

impl fmt::Debug for GradedPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            if m.is_one() {
                write!(f, "{c}")?;
            } else if c.is_one() {
                write!(f, "{m:?}")?;
            } else {
                write!(f, "({c})*{m:?}")?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::VarKind;

    fn odd(slot: u32) -> GradedPoly {
        GradedPoly::var(VariableId::new(
            VarKind::Ghost,
            slot,
            Grading::new(Parity::Odd, 1, 0),
        ))
    }

    #[test]
    fn graded_commutativity() {
        let a = odd(0);
        let b = odd(1);
        assert_eq!(&a * &b, -(&b * &a));
        assert!((&a * &a).is_zero());
        let y = GradedPoly::var(VariableId::even_field(0));
        assert_eq!(&a * &y, &y * &a);
    }

    #[test]
    fn gradings() {
        let a = odd(0);
        assert_eq!(
            a.grading(),
            PolyGrading::Homogeneous(Grading::new(Parity::Odd, 1, 0))
        );
        let mixed = &a + &GradedPoly::one();
        assert_eq!(mixed.grading(), PolyGrading::Mixed);
        assert_eq!(GradedPoly::zero().grading(), PolyGrading::Zero);
        assert_eq!(mixed.parity(), None);
    }

    #[test]
    fn partials_of_odd_product() {
        let (a, b) = (odd(0), odd(1));
        let ab = &a * &b;
        let va = VariableId::new(VarKind::Ghost, 0, Grading::new(Parity::Odd, 1, 0));
        let vb = VariableId::new(VarKind::Ghost, 1, Grading::new(Parity::Odd, 1, 0));
        assert_eq!(ab.left_partial(&va), b);
        assert_eq!(ab.left_partial(&vb), -&a);
        assert_eq!(ab.right_partial(&vb), a);
        assert_eq!(ab.right_partial(&va), -&b);
    }

    #[test]
    fn substitution_respects_order() {
        let (a, b, c) = (odd(0), odd(1), odd(2));
        let ab = &a * &b;
        let swapped = ab.substitute(|v| (v.slot() == 0).then(|| c.clone()));
        assert_eq!(swapped, &c * &b);
    }
}
