//! Property bodies shared by the proptest suites and the acceptance gate.

use jetvar::algebra::{GradedPoly, Parity};
use jetvar::brst::gauge_density;
use jetvar::calculus::JetSpace;
use jetvar::symmetry::Derivation;
use proptest::prelude::*;
use proptest::test_runner::{Config, TestCaseError, TestRunner};

use super::strategies::{base_generators, derivation, poly, DIM};

pub fn js() -> JetSpace {
    JetSpace::new(DIM).with_max_order(8)
}

pub fn total_derivatives_commute(p: &GradedPoly, l: usize, m: usize) -> Result<(), TestCaseError> {
    let js = js();
    let lm = js.total_derivative(&js.total_derivative(p, m).unwrap(), l).unwrap();
    let ml = js.total_derivative(&js.total_derivative(p, l).unwrap(), m).unwrap();
    prop_assert_eq!(lm, ml);
    Ok(())
}

pub fn el_kills_divergences(q: &GradedPoly, l: usize) -> Result<(), TestCaseError> {
    let js = js();
    let exact = js.total_derivative(q, l).unwrap();
    let el = js.euler_lagrange(&exact, &base_generators()).unwrap();
    prop_assert!(el.is_zero(), "EL of d_{} q is nonzero: {:?}", l, el.components);
    Ok(())
}

pub fn vertical_commutes_with_total(d: &Derivation, p: &GradedPoly, l: usize) -> Result<(), TestCaseError> {
    let js = js();
    let a = d.apply(&js, &js.total_derivative(p, l).unwrap()).unwrap();
    let b = js.total_derivative(&d.apply(&js, p).unwrap(), l).unwrap();
    prop_assert_eq!(a, b);
    Ok(())
}

/// `υ(ℒ) = Σ υ^A E_A + d_λ Σ (d_Λ υ^A) Ξ^{A,Λ,λ}`.
pub fn first_variational_formula(d: &Derivation, l: &GradedPoly) -> Result<(), TestCaseError> {
    let js = js();
    let lhs = d.apply(&js, l).unwrap();
    let dec = js.lepage_decompose(l).unwrap();
    let boundary = js.contract(d.components(), &dec.boundary).unwrap();
    let rhs = gauge_density(d, &dec.euler_lagrange) + js.divergence(&boundary).unwrap();
    prop_assert_eq!(lhs, rhs);
    Ok(())
}

/// Runs each calculus property on `cases` random instances; returns the
/// first failure.
pub fn run_calculus_suite(cases: u32) -> Result<(), String> {
    let config = Config {
        cases,
        failure_persistence: None,
        ..Config::default()
    };
    let mut runner = TestRunner::new_with_rng(config.clone(), proptest::test_runner::TestRng::deterministic_rng(config.rng_algorithm));
    let idx = 0..DIM;
    runner
        .run(&(poly(2, 3, 4), idx.clone(), idx.clone()), |(p, l, m)| total_derivatives_commute(&p, l, m))
        .map_err(|e| format!("d_λ d_μ = d_μ d_λ: {e}"))?;
    runner
        .run(&(poly(2, 3, 4), idx.clone()), |(q, l)| el_kills_divergences(&q, l))
        .map_err(|e| format!("δ∘d_H = 0: {e}"))?;
    let parity = prop_oneof![Just(Parity::Even), Just(Parity::Odd)];
    runner
        .run(
            &(parity.clone().prop_flat_map(derivation), poly(2, 3, 4), idx),
            |(d, p, l)| vertical_commutes_with_total(&d, &p, l),
        )
        .map_err(|e| format!("[υ, d_λ] = 0: {e}"))?;
    runner
        .run(&(parity.prop_flat_map(derivation), poly(2, 3, 4)), |(d, l)| {
            first_variational_formula(&d, &l.parity_part(Parity::Even))
        })
        .map_err(|e| format!("first variational formula: {e}"))?;
    Ok(())
}
