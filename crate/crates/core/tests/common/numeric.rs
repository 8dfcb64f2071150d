//! Floating-point evaluation of even polynomials and a finite-difference
//! Euler–Lagrange oracle for first-order Lagrangians.

use std::collections::BTreeMap;

use jetvar::algebra::{GradedPoly, MultiIndex, VariableId};
use num_traits::ToPrimitive;

pub fn eval(p: &GradedPoly, at: &dyn Fn(&VariableId) -> f64) -> f64 {
    p.terms()
        .map(|(m, c)| {
            assert!(m.odd_part().is_empty(), "numeric evaluation needs even polynomials");
            let mut v = c.to_f64().expect("finite coefficient");
            for (g, e) in m.even_part() {
                v *= at(g).powi(*e as i32);
            }
            v
        })
        .sum()
}

/// A field configuration `y^A(x) = Σ_k coeffs[A][k] · x^(powers[k])`, a
/// polynomial in the base coordinates, with exact derivatives.
pub struct Configuration {
    pub dim: usize,
    /// Per field: monomials as (coefficient, exponent per base direction).
    pub fields: BTreeMap<VariableId, Vec<(f64, Vec<u32>)>>,
}

impl Configuration {
    /// `∂_Λ y^A` at `x`.
    pub fn jet(&self, base: &VariableId, multi: &MultiIndex, x: &[f64]) -> f64 {
        let Some(terms) = self.fields.get(base) else { return 0.0 };
        terms
            .iter()
            .map(|(c, pows)| {
                let mut v = *c;
                for l in 0..self.dim {
                    let k = multi.count(l) as u32;
                    let p = pows[l];
                    if k > p {
                        return 0.0;
                    }
                    let falling: f64 = (0..k).map(|i| (p - i) as f64).product();
                    v *= falling * x[l].powi((p - k) as i32);
                }
                v
            })
            .sum()
    }

    pub fn value_of(&self, v: &VariableId, x: &[f64]) -> f64 {
        if v.is_coordinate() {
            return x[v.slot() as usize];
        }
        self.jet(&v.base(), v.jet(), x)
    }
}

/// `∂ℒ/∂s^A_Λ` at the one-jet of the configuration at `x`, by a central
/// difference in the jet value.
fn jet_partial(l: &GradedPoly, cfg: &Configuration, target: &VariableId, x: &[f64], h: f64) -> f64 {
    let at = |shift: f64| {
        eval(l, &|v: &VariableId| {
            let base = cfg.value_of(v, x);
            if v == target {
                base + shift
            } else {
                base
            }
        })
    };
    (at(h) - at(-h)) / (2.0 * h)
}

/// `E_A = ∂ℒ/∂y^A − Σ_λ ∂_λ(∂ℒ/∂y^A_λ)` along the configuration, with every
/// derivative replaced by a central difference.
pub fn finite_difference_el(l: &GradedPoly, cfg: &Configuration, base: &VariableId, x: &[f64]) -> f64 {
    let h = 1e-4;
    let mut e = jet_partial(l, cfg, base, x, h);
    for lam in 0..cfg.dim {
        let target = base.prolong(lam);
        let mut xp = x.to_vec();
        let mut xm = x.to_vec();
        xp[lam] += h;
        xm[lam] -= h;
        let dp = jet_partial(l, cfg, &target, &xp, h);
        let dm = jet_partial(l, cfg, &target, &xm, h);
        e -= (dp - dm) / (2.0 * h);
    }
    e
}
