//! A rational exterior algebra tensored with a polynomial ring, with odd
//! generators stored as a bitmask. Signs are computed by bit counting and do
//! not share code with the engine.

use std::collections::BTreeMap;

use jetvar::algebra::{Coeff, GradedPoly, VariableId};
use num_traits::Zero;

/// Basis key: even exponents by generator number, odd generators as a mask.
pub type Key = (BTreeMap<usize, u32>, u64);

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Ext {
    pub terms: BTreeMap<Key, Coeff>,
}

fn add_into(map: &mut BTreeMap<Key, Coeff>, k: Key, c: Coeff) {
    let e = map.entry(k.clone()).or_insert_with(Coeff::zero);
    *e += c;
    if e.is_zero() {
        map.remove(&k);
    }
}

/// Number of pairs (i in a, j in b) with i > j: the sign of concatenating
/// two ascending odd words.
fn crossing_parity(a: u64, b: u64) -> bool {
    let mut n = 0u32;
    for j in 0..64 {
        if b >> j & 1 == 1 {
            n += (a >> (j + 1)).count_ones();
        }
    }
    n % 2 == 1
}

impl Ext {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn mul(&self, rhs: &Ext) -> Ext {
        let mut out = BTreeMap::new();
        for ((ea, oa), ca) in &self.terms {
            for ((eb, ob), cb) in &rhs.terms {
                if oa & ob != 0 {
                    continue;
                }
                let mut e = ea.clone();
                for (k, v) in eb {
                    *e.entry(*k).or_default() += v;
                }
                let mut c = ca * cb;
                if crossing_parity(*oa, *ob) {
                    c = -c;
                }
                add_into(&mut out, (e, oa | ob), c);
            }
        }
        Ext { terms: out }
    }

    pub fn add(&self, rhs: &Ext) -> Ext {
        let mut out = self.terms.clone();
        for (k, c) in &rhs.terms {
            add_into(&mut out, k.clone(), c.clone());
        }
        Ext { terms: out }
    }

    pub fn scale(&self, s: &Coeff) -> Ext {
        let mut out = BTreeMap::new();
        for (k, c) in &self.terms {
            add_into(&mut out, k.clone(), c * s);
        }
        Ext { terms: out }
    }

    /// Left derivative by odd generator `bit`.
    pub fn left_odd(&self, bit: usize) -> Ext {
        let mut out = BTreeMap::new();
        for ((e, o), c) in &self.terms {
            if o >> bit & 1 == 0 {
                continue;
            }
            let below = (o & ((1u64 << bit) - 1)).count_ones();
            let c = if below % 2 == 1 { -c.clone() } else { c.clone() };
            add_into(&mut out, (e.clone(), o & !(1 << bit)), c);
        }
        Ext { terms: out }
    }

    /// Right derivative by odd generator `bit`.
    pub fn right_odd(&self, bit: usize) -> Ext {
        let mut out = BTreeMap::new();
        for ((e, o), c) in &self.terms {
            if o >> bit & 1 == 0 {
                continue;
            }
            let above = (o >> (bit + 1)).count_ones();
            let c = if above % 2 == 1 { -c.clone() } else { c.clone() };
            add_into(&mut out, (e.clone(), o & !(1 << bit)), c);
        }
        Ext { terms: out }
    }

    pub fn partial_even(&self, g: usize) -> Ext {
        let mut out = BTreeMap::new();
        for ((e, o), c) in &self.terms {
            let Some(&n) = e.get(&g) else { continue };
            let mut e2 = e.clone();
            if n == 1 {
                e2.remove(&g);
            } else {
                e2.insert(g, n - 1);
            }
            add_into(&mut out, (e2, *o), c * Coeff::from_integer((n as i64).into()));
        }
        Ext { terms: out }
    }
}

/// A dictionary between engine generators and oracle slots. Odd generators
/// are assigned bits in a scrambled order so the oracle's canonical order
/// differs from the engine's.
pub struct Dictionary {
    pub even: Vec<VariableId>,
    pub odd: Vec<VariableId>,
}

impl Dictionary {
    pub fn new(even: Vec<VariableId>, mut odd: Vec<VariableId>, scramble: u64) -> Self {
        assert!(odd.len() <= 64);
        let n = odd.len().max(1);
        odd.rotate_left(scramble as usize % n);
        if scramble % 2 == 1 {
            odd.reverse();
        }
        Dictionary { even, odd }
    }

    fn even_slot(&self, v: &VariableId) -> usize {
        self.even.iter().position(|w| w == v).expect("even generator in dictionary")
    }

    pub fn odd_bit(&self, v: &VariableId) -> usize {
        self.odd.iter().position(|w| w == v).expect("odd generator in dictionary")
    }

    pub fn even_slot_of(&self, v: &VariableId) -> usize {
        self.even_slot(v)
    }

    /// Translates a polynomial by multiplying its generators one at a time in
    /// the engine's printed order.
    pub fn embed(&self, p: &GradedPoly) -> Ext {
        let mut out = Ext::zero();
        for (m, c) in p.terms() {
            let mut t = Ext {
                terms: [((BTreeMap::new(), 0u64), c.clone())].into_iter().collect(),
            };
            for (v, e) in m.even_part() {
                for _ in 0..*e {
                    t = t.mul(&self.single(v));
                }
            }
            for v in m.odd_part() {
                t = t.mul(&self.single(v));
            }
            out = out.add(&t);
        }
        out
    }

    pub fn single(&self, v: &VariableId) -> Ext {
        let key = if v.is_odd() {
            (BTreeMap::new(), 1u64 << self.odd_bit(v))
        } else {
            ([(self.even_slot(v), 1)].into_iter().collect(), 0)
        };
        Ext {
            terms: [(key, Coeff::from_integer(1.into()))].into_iter().collect(),
        }
    }
}
