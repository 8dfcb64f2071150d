use std::cmp::Ordering;
use std::fmt;

use super::{Grading, Parity, VariableId};

/// A normalised graded monomial: a product of even powers followed by a
/// strictly increasing run of distinct odd generators.
///
/// The canonical odd order is ascending [`VariableId`] order; multiplication
/// returns the transposition sign needed to reach it.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct Monomial {
    even: Vec<(VariableId, u32)>,
    odd: Vec<VariableId>,
}

/// Sign of a permutation written as a sequence with distinct, comparable items.
fn sort_sign<T: Ord>(items: &mut [T]) -> Option<bool> {
    // insertion sort: counts inversions and reports repeats
    let mut negate = false;
    for i in 1..items.len() {
        let mut j = i;
        while j > 0 {
            match items[j - 1].cmp(&items[j]) {
                Ordering::Greater => {
                    items.swap(j - 1, j);
                    negate = !negate;
                    j -= 1;
                }
                Ordering::Equal => return None,
                Ordering::Less => break,
            }
        }
    }
    Some(negate)
}

impl Monomial {
    pub fn one() -> Self {
        Self::default()
    }

    pub fn var(v: VariableId) -> Self {
        if v.is_odd() {
            Monomial {
                even: Vec::new(),
                odd: vec![v],
            }
        } else {
            Monomial {
                even: vec![(v, 1)],
                odd: Vec::new(),
            }
        }
    }

    /// Builds a monomial from a product of generators in the given order.
    /// Returns `None` if an odd generator repeats, else the sign flag.
    pub fn from_product<I: IntoIterator<Item = VariableId>>(vars: I) -> Option<(bool, Self)> {
        let mut even: Vec<(VariableId, u32)> = Vec::new();
        let mut odd = Vec::new();
        for v in vars {
            if v.is_odd() {
                odd.push(v);
            } else {
                match even.binary_search_by(|(w, _)| w.cmp(&v)) {
                    Ok(pos) => even[pos].1 += 1,
                    Err(pos) => even.insert(pos, (v, 1)),
                }
            }
        }
        let negate = sort_sign(&mut odd)?;
        Some((negate, Monomial { even, odd }))
    }

    pub fn is_one(&self) -> bool {
        self.even.is_empty() && self.odd.is_empty()
    }

    pub fn even_part(&self) -> &[(VariableId, u32)] {
        &self.even
    }

    pub fn odd_part(&self) -> &[VariableId] {
        &self.odd
    }

    pub fn parity(&self) -> Parity {
        Parity::from_bit(self.odd.len())
    }

    pub fn grading(&self) -> Grading {
        let mut g = Grading::even();
        for (v, e) in &self.even {
            let vg = v.grading();
            g.pure_ghost += vg.pure_ghost * e;
            g.antifield += vg.antifield * e;
        }
        for v in &self.odd {
            g = g + v.grading();
        }
        g
    }

    /// Total degree, counting each generator with multiplicity.
    pub fn degree(&self) -> u32 {
        self.even.iter().map(|(_, e)| *e).sum::<u32>() + self.odd.len() as u32
    }

    /// Degree counted only over generators selected by `pred`.
    pub fn degree_in(&self, mut pred: impl FnMut(&VariableId) -> bool) -> u32 {
        let e: u32 = self
            .even
            .iter()
            .filter(|(v, _)| pred(v))
            .map(|(_, e)| *e)
            .sum();
        e + self.odd.iter().filter(|v| pred(v)).count() as u32
    }

    pub fn exponent(&self, v: &VariableId) -> u32 {
        if v.is_odd() {
            self.odd.contains(v) as u32
        } else {
            self.even
                .binary_search_by(|(w, _)| w.cmp(v))
                .map_or(0, |pos| self.even[pos].1)
        }
    }

    /// Every generator occurring, each once.
    pub fn variables(&self) -> impl Iterator<Item = &VariableId> + '_ {
        self.even.iter().map(|(v, _)| v).chain(self.odd.iter())
    }

    /// The product in the given order, as `(negate, monomial)`, or `None` if it
    /// vanishes because an odd generator repeats.
    pub fn mul(&self, rhs: &Monomial) -> Option<(bool, Monomial)> {
        let mut odd = Vec::with_capacity(self.odd.len() + rhs.odd.len());
        // merge two sorted runs, counting crossings
        let (mut i, mut j) = (0, 0);
        let mut negate = false;
        while i < self.odd.len() && j < rhs.odd.len() {
            match self.odd[i].cmp(&rhs.odd[j]) {
                Ordering::Less => {
                    odd.push(self.odd[i].clone());
                    i += 1;
                }
                Ordering::Greater => {
                    odd.push(rhs.odd[j].clone());
                    j += 1;
                    if (self.odd.len() - i) % 2 == 1 {
                        negate = !negate;
                    }
                }
                Ordering::Equal => return None,
            }
        }
        odd.extend_from_slice(&self.odd[i..]);
        odd.extend_from_slice(&rhs.odd[j..]);

        let mut even = Vec::with_capacity(self.even.len() + rhs.even.len());
        let (mut i, mut j) = (0, 0);
        while i < self.even.len() && j < rhs.even.len() {
            match self.even[i].0.cmp(&rhs.even[j].0) {
                Ordering::Less => {
                    even.push(self.even[i].clone());
                    i += 1;
                }
                Ordering::Greater => {
                    even.push(rhs.even[j].clone());
                    j += 1;
                }
                Ordering::Equal => {
                    even.push((self.even[i].0.clone(), self.even[i].1 + rhs.even[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        even.extend_from_slice(&self.even[i..]);
        even.extend_from_slice(&rhs.even[j..]);
        Some((negate, Monomial { even, odd }))
    }

    /// Left derivative `∂/∂v` of the monomial: `(coefficient, rest)` with the
    /// generator moved to the far left before removal.
    pub fn left_derivative(&self, v: &VariableId) -> Option<(i64, bool, Monomial)> {
        if v.is_odd() {
            let pos = self.odd.iter().position(|w| w == v)?;
            let mut odd = self.odd.clone();
            odd.remove(pos);
            Some((
                1,
                pos % 2 == 1,
                Monomial {
                    even: self.even.clone(),
                    odd,
                },
            ))
        } else {
            let pos = self.even.binary_search_by(|(w, _)| w.cmp(v)).ok()?;
            let mut even = self.even.clone();
            let e = even[pos].1;
            if e == 1 {
                even.remove(pos);
            } else {
                even[pos].1 -= 1;
            }
            Some((
                e as i64,
                false,
                Monomial {
                    even,
                    odd: self.odd.clone(),
                },
            ))
        }
    }

    /// Right derivative `∂⃖/∂v`: the generator is moved to the far right.
    pub fn right_derivative(&self, v: &VariableId) -> Option<(i64, bool, Monomial)> {
        if v.is_odd() {
            let pos = self.odd.iter().position(|w| w == v)?;
            let after = self.odd.len() - 1 - pos;
            let (c, _, rest) = self.left_derivative(v)?;
            Some((c, after % 2 == 1, rest))
        } else {
            self.left_derivative(v)
        }
    }

    /// Replace every generator through `f`, re-normalising; used for relabelling.
    pub fn map_vars(&self, mut f: impl FnMut(&VariableId) -> VariableId) -> Option<(bool, Monomial)> {
        let vars = self
            .even
            .iter()
            .flat_map(|(v, e)| std::iter::repeat_n(v, *e as usize))
            .chain(self.odd.iter())
            .map(&mut f)
            .collect::<Vec<_>>();
        Monomial::from_product(vars)
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.even.cmp(&other.even))
            .then_with(|| self.odd.cmp(&other.odd))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return f.write_str("1");
        }
        let mut first = true;
        for (v, e) in &self.even {
            if !first {
                f.write_str("*")?;
            }
            first = false;
            write!(f, "{v:?}")?;
            if *e > 1 {
                write!(f, "^{e}")?;
            }
        }
        for v in &self.odd {
            if !first {
                f.write_str("*")?;
            }
            first = false;
            write!(f, "{v:?}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::VarKind;

    fn odd(slot: u32) -> VariableId {
        VariableId::new(VarKind::Ghost, slot, Grading::new(Parity::Odd, 1, 0))
    }

    #[test]
    fn odd_square_vanishes() {
        let a = Monomial::var(odd(0));
        assert!(a.mul(&a).is_none());
        assert!(Monomial::from_product([odd(1), odd(0), odd(1)]).is_none());
    }

    #[test]
    fn transposition_sign() {
        let (n, ab) = Monomial::var(odd(0)).mul(&Monomial::var(odd(1))).unwrap();
        let (m, ba) = Monomial::var(odd(1)).mul(&Monomial::var(odd(0))).unwrap();
        assert_eq!(ab, ba);
        assert!(!n);
        assert!(m);
        let (s, _) = Monomial::from_product([odd(2), odd(1), odd(0)]).unwrap();
        assert!(s);
    }

    #[test]
    fn merge_sign_matches_sort_sign() {
        let left = Monomial::from_product([odd(1), odd(4)]).unwrap().1;
        let right = Monomial::from_product([odd(0), odd(3), odd(5)]).unwrap().1;
        let (n, prod) = left.mul(&right).unwrap();
        let (m, direct) = Monomial::from_product([odd(1), odd(4), odd(0), odd(3), odd(5)]).unwrap();
        assert_eq!(prod, direct);
        assert_eq!(n, m);
    }

    #[test]
    fn derivative_signs() {
        let m = Monomial::from_product([odd(0), odd(1), odd(2)]).unwrap().1;
        let (_, l, _) = m.left_derivative(&odd(1)).unwrap();
        let (_, r, _) = m.right_derivative(&odd(1)).unwrap();
        assert!(l);
        assert!(r);
        let (_, l, _) = m.left_derivative(&odd(2)).unwrap();
        let (_, r, _) = m.right_derivative(&odd(2)).unwrap();
        assert!(!l);
        assert!(!r);
        let (_, l, _) = m.left_derivative(&odd(0)).unwrap();
        assert!(!l);
    }

    #[test]
    fn even_powers() {
        let y = VariableId::even_field(0);
        let (_, m) = Monomial::from_product([y.clone(), odd(0), y.clone()]).unwrap();
        assert_eq!(m.exponent(&y), 2);
        let (c, neg, rest) = m.left_derivative(&y).unwrap();
        assert_eq!((c, neg), (2, false));
        assert_eq!(rest.exponent(&y), 1);
        assert_eq!(m.degree(), 3);
    }
}
