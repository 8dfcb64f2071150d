use std::collections::{BTreeMap, BTreeSet};

use crate::algebra::{int, Coeff, GradedPoly, MultiIndex, Parity, VariableId};
use crate::Result;

use super::JetSpace;

/// A density `ℒ ω` on an `n`-dimensional base; only `ℒ` is stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Density {
    pub coefficient: GradedPoly,
    pub dim: usize,
}

impl Density {
    pub fn new(coefficient: GradedPoly, dim: usize) -> Self {
        assert!(dim >= 1);
        Density { coefficient, dim }
    }

    pub fn zero(dim: usize) -> Self {
        Density::new(GradedPoly::zero(), dim)
    }

    pub fn parity(&self) -> Option<Parity> {
        self.coefficient.parity()
    }
}

/// Euler–Lagrange components `E_A`, keyed by the jet-free generator `s^A`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct EulerLagrangeResult {
    pub components: BTreeMap<VariableId, GradedPoly>,
}

impl EulerLagrangeResult {
    pub fn get(&self, v: &VariableId) -> GradedPoly {
        self.components.get(v).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.components.values().all(GradedPoly::is_zero)
    }
}

/// Jet-free generators, other than base coordinates, that a polynomial depends on.
pub fn base_generators(p: &GradedPoly) -> BTreeSet<VariableId> {
    p.variables()
        .into_iter()
        .filter(|v| !v.is_coordinate())
        .map(|v| v.base())
        .collect()
}

/// Sign helper `(−1)^k`.
pub(crate) fn alternating(k: usize) -> Coeff {
    int(if k.is_multiple_of(2) { 1 } else { -1 })
}

impl JetSpace {
    fn variational(&self, l: &GradedPoly, base: &VariableId, right: bool) -> Result<GradedPoly> {
        let jets: Vec<VariableId> = l
            .variables()
            .into_iter()
            .filter(|v| v.base() == *base)
            .collect();
        let mut out = GradedPoly::zero();
        for v in jets {
            let p = if right {
                l.right_partial(&v)
            } else {
                l.left_partial(&v)
            };
            let term = self.iterated_total(&p, v.jet())?;
            out += term.scale(&alternating(v.jet_order()));
        }
        Ok(out)
    }

    /// `δℒ/δs^A = Σ_Λ (−1)^{|Λ|} d_Λ(∂^Λ_A ℒ)` with left partials.
    pub fn variational_derivative(&self, l: &GradedPoly, base: &VariableId) -> Result<GradedPoly> {
        self.variational(l, base, false)
    }

    /// The same with right partials, `δ⃖ℒ/δs^A`.
    pub fn right_variational_derivative(&self, l: &GradedPoly, base: &VariableId) -> Result<GradedPoly> {
        self.variational(l, base, true)
    }

    /// Euler–Lagrange components over the requested jet-free generators.
    pub fn euler_lagrange<'a, I>(&self, l: &GradedPoly, over: I) -> Result<EulerLagrangeResult>
    where
        I: IntoIterator<Item = &'a VariableId>,
    {
        let components = over
            .into_iter()
            .map(|v| Ok((v.base(), self.variational_derivative(l, &v.base())?)))
            .collect::<Result<_>>()?;
        Ok(EulerLagrangeResult { components })
    }

    /// Right-derivative Euler–Lagrange components.
    pub fn right_euler_lagrange<'a, I>(&self, l: &GradedPoly, over: I) -> Result<EulerLagrangeResult>
    where
        I: IntoIterator<Item = &'a VariableId>,
    {
        let components = over
            .into_iter()
            .map(|v| Ok((v.base(), self.right_variational_derivative(l, &v.base())?)))
            .collect::<Result<_>>()?;
        Ok(EulerLagrangeResult { components })
    }

    /// True iff every Euler–Lagrange component of `ℒ` vanishes identically.
    pub fn is_variationally_trivial(&self, l: &GradedPoly) -> Result<bool> {
        for base in base_generators(l) {
            if !self.variational_derivative(l, &base)?.is_zero() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// The first non-vanishing Euler–Lagrange component, as a residual.
    pub fn triviality_residual(&self, l: &GradedPoly) -> Result<Option<(VariableId, GradedPoly)>> {
        for base in base_generators(l) {
            let e = self.variational_derivative(l, &base)?;
            if !e.is_zero() {
                return Ok(Some((base, e)));
            }
        }
        Ok(None)
    }
}

/// Helper for tests and models: the generator `base` with jet `Λ` as a polynomial.
pub fn jet_var(base: &VariableId, multi: &MultiIndex) -> GradedPoly {
    GradedPoly::var(base.with_jet(multi.clone()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{rat, Grading, VarKind};

    #[test]
    fn harmonic_oscillator() {
        let js = JetSpace::new(1);
        let y = VariableId::even_field(0);
        let y0 = GradedPoly::var(y.prolong(0));
        let l = y0.pow(2).scale(&rat(1, 2));
        let e = js.variational_derivative(&l, &y).unwrap();
        assert_eq!(e, -GradedPoly::var(y.prolong(0).prolong(0)));
    }

    #[test]
    fn constants_and_divergences_are_trivial() {
        let js = JetSpace::new(2);
        assert!(js.is_variationally_trivial(&GradedPoly::integer(7)).unwrap());
        let y = GradedPoly::var(VariableId::even_field(0));
        let c0 = GradedPoly::var(VariableId::new(VarKind::Ghost, 0, Grading::new(Parity::Odd, 1, 0)));
        let c1 = GradedPoly::var(VariableId::new(VarKind::Ghost, 1, Grading::new(Parity::Odd, 1, 0)));
        let inner = &y.pow(3) + &(&(&c0 * &c1) * &y);
        let div = js.total_derivative(&inner, 0).unwrap();
        assert!(js.is_variationally_trivial(&div).unwrap());
        assert!(!js.is_variationally_trivial(&y.pow(2)).unwrap());
    }
}
