//! Random graded polynomials over a small fixed roster.

use jetvar::algebra::{int, GradedPoly, Grading, MultiIndex, Parity, VarKind, VariableId};
use jetvar::symmetry::Derivation;
use proptest::prelude::*;

pub const DIM: usize = 2;

pub fn even_fields() -> Vec<VariableId> {
    (0..2).map(VariableId::even_field).collect()
}

pub fn odd_fields() -> Vec<VariableId> {
    (0..2)
        .map(|s| VariableId::new(VarKind::Ghost, s, Grading::new(Parity::Odd, 1, 0)))
        .collect()
}

pub fn base_generators() -> Vec<VariableId> {
    even_fields().into_iter().chain(odd_fields()).collect()
}

/// Base generators with jets of order at most `order`.
pub fn jet_generators(order: usize) -> Vec<VariableId> {
    let mut out = Vec::new();
    for v in base_generators() {
        for k in 0..=order {
            for m in MultiIndex::all_of_order(DIM, k) {
                out.push(v.with_jet(m));
            }
        }
    }
    out
}

/// Sums of up to `terms` monomials of degree ≤ `degree` in jets up to `order`,
/// with small integer coefficients.
pub fn poly(order: usize, degree: usize, terms: usize) -> impl Strategy<Value = GradedPoly> {
    let gens = jet_generators(order);
    let n = gens.len();
    prop::collection::vec((-3i64..=3, prop::collection::vec(0..n, 0..=degree)), 1..=terms).prop_map(
        move |ts| {
            let mut p = GradedPoly::zero();
            for (c, idx) in ts {
                p += GradedPoly::product(int(c), idx.into_iter().map(|i| gens[i].clone()));
            }
            p
        },
    )
}

/// A parity-homogeneous polynomial of the requested parity.
pub fn homogeneous(order: usize, degree: usize, terms: usize, parity: Parity) -> impl Strategy<Value = GradedPoly> {
    poly(order, degree, terms).prop_map(move |p| p.parity_part(parity))
}

/// Polynomials in the even generators only.
pub fn even_poly(order: usize, degree: usize, terms: usize) -> impl Strategy<Value = GradedPoly> {
    poly(order, degree, terms).prop_map(|p| p.filter(|m| m.odd_part().is_empty()))
}

/// An evolutionary derivation of the given parity with components on every
/// base generator.
pub fn derivation(parity: Parity) -> impl Strategy<Value = Derivation> {
    prop::collection::vec(poly(1, 2, 3), 4).prop_map(move |comps| {
        let mut d = Derivation::new(parity);
        for (v, c) in base_generators().into_iter().zip(comps) {
            d.set(v.clone(), c.parity_part(v.parity() + parity));
        }
        d
    })
}
