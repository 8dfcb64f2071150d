//! Evolutionary derivations acting on jet polynomials by prolongation.

use std::collections::{BTreeMap, HashMap};

use crate::algebra::{int, GradedPoly, Parity, PolyGrading, VariableId};
use crate::calculus::{Density, JetSpace};
use crate::{Error, Result};

/// A vertical derivation `ϑ = Σ_Λ (d_Λ υ^A) ∂^Λ_A` given by its generating
/// components `υ^A` on jet-free generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Derivation {
    components: BTreeMap<VariableId, GradedPoly>,
    parity: Parity,
}

impl Derivation {
    pub fn new(parity: Parity) -> Self {
        Derivation {
            components: BTreeMap::new(),
            parity,
        }
    }

    pub fn zero() -> Self {
        Derivation::new(Parity::Even)
    }

    pub fn from_components(parity: Parity, components: BTreeMap<VariableId, GradedPoly>) -> Self {
        let mut d = Derivation::new(parity);
        for (v, p) in components {
            d.set(v, p);
        }
        d
    }

    /// Sets `υ^v`; zero components are not stored.
    pub fn set(&mut self, v: VariableId, p: GradedPoly) {
        assert!(v.jet().is_empty(), "components live on jet-free generators");
        if p.is_zero() {
            self.components.remove(&v);
        } else {
            self.components.insert(v, p);
        }
    }

    pub fn with(mut self, v: VariableId, p: GradedPoly) -> Self {
        self.set(v, p);
        self
    }

    pub fn parity(&self) -> Parity {
        self.parity
    }

    pub fn components(&self) -> &BTreeMap<VariableId, GradedPoly> {
        &self.components
    }

    pub fn component(&self, v: &VariableId) -> GradedPoly {
        self.components.get(v).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.components.is_empty()
    }

    /// Components whose parity disagrees with `[ϑ] + [A]`.
    pub fn parity_violations(&self) -> Vec<VariableId> {
        self.components
            .iter()
            .filter(|(v, p)| p.parity() != Some(self.parity + v.parity()))
            .map(|(v, _)| v.clone())
            .collect()
    }

    /// Common shift of ghost number, if every component agrees.
    pub fn ghost_shift(&self) -> Option<i64> {
        let mut shift = None;
        for (v, p) in &self.components {
            let PolyGrading::Homogeneous(g) = p.grading() else {
                return None;
            };
            let s = g.ghost_number() - v.grading().ghost_number();
            if *shift.get_or_insert(s) != s {
                return None;
            }
        }
        shift
    }

    /// `ϑ(p)`, extending the components to jets by `ϑ(s_Λ) = d_Λ υ`.
    pub fn apply(&self, js: &JetSpace, p: &GradedPoly) -> Result<GradedPoly> {
        let mut cache: HashMap<VariableId, GradedPoly> = HashMap::new();
        let mut out = GradedPoly::zero();
        for (m, c) in p.terms() {
            for v in m.variables() {
                let Some(upsilon) = self.components.get(&v.base()) else {
                    continue;
                };
                if v.is_coordinate() {
                    continue;
                }
                if !cache.contains_key(v) {
                    cache.insert(v.clone(), js.iterated_total(upsilon, v.jet())?);
                }
                let image = &cache[v];
                if image.is_zero() {
                    continue;
                }
                let (k, negate, rest) = m.left_derivative(v).expect("variable occurs");
                let mut coeff = c.clone() * int(k);
                if negate {
                    coeff = -coeff;
                }
                out += image * &GradedPoly::term(rest, coeff);
            }
        }
        Ok(out)
    }

    /// Lie derivative of a density; on coefficients this is [`Derivation::apply`].
    pub fn lie_derivative(&self, js: &JetSpace, l: &Density) -> Result<Density> {
        Ok(Density::new(self.apply(js, &l.coefficient)?, l.dim))
    }

    /// True iff the Lie derivative of `ℒ` is variationally trivial.
    pub fn is_variational_symmetry(&self, js: &JetSpace, l: &GradedPoly) -> Result<bool> {
        js.is_variationally_trivial(&self.apply(js, l)?)
    }

    /// Graded commutator `[ϑ₁, ϑ₂]^A = ϑ₁(υ₂^A) − (−1)^{[ϑ₁][ϑ₂]} ϑ₂(υ₁^A)`.
    pub fn commutator(&self, js: &JetSpace, other: &Derivation) -> Result<Derivation> {
        let sign = if self.parity.koszul(other.parity) {
            int(-1)
        } else {
            int(1)
        };
        let mut out = Derivation::new(self.parity + other.parity);
        let keys: std::collections::BTreeSet<_> = self
            .components
            .keys()
            .chain(other.components.keys())
            .cloned()
            .collect();
        for v in keys {
            let a = self.apply(js, &other.component(&v))?;
            let b = other.apply(js, &self.component(&v))?;
            out.set(v, &a - &b.scale(&sign));
        }
        Ok(out)
    }

    /// `ϑ(ϑ(g))` for every generator with a component; other generators are
    /// annihilated, so these are all that can fail.
    pub fn square_residuals(&self, js: &JetSpace) -> Result<BTreeMap<VariableId, GradedPoly>> {
        let mut out = BTreeMap::new();
        for (v, p) in &self.components {
            let r = self.apply(js, p)?;
            if !r.is_zero() {
                out.insert(v.clone(), r);
            }
        }
        Ok(out)
    }

    /// Nilpotency test for odd derivations.
    pub fn is_nilpotent(&self, js: &JetSpace) -> Result<bool> {
        if self.parity == Parity::Even {
            return Err(Error::EvenDerivation);
        }
        Ok(self.square_residuals(js)?.is_empty())
    }

    /// Sum of two derivations of equal parity.
    pub fn plus(&self, other: &Derivation) -> Derivation {
        assert_eq!(self.parity, other.parity, "adding derivations of different parity");
        let mut out = self.clone();
        for (v, p) in &other.components {
            let sum = &out.component(v) + p;
            out.set(v.clone(), sum);
        }
        out
    }

    /// Same derivation restricted to generators selected by `keep`.
    pub fn restrict(&self, mut keep: impl FnMut(&VariableId) -> bool) -> Derivation {
        Derivation {
            components: self
                .components
                .iter()
                .filter(|(v, _)| keep(v))
                .map(|(v, p)| (v.clone(), p.clone()))
                .collect(),
            parity: self.parity,
        }
    }

    /// Replace every component through `f`.
    pub fn map_components(&self, mut f: impl FnMut(&GradedPoly) -> GradedPoly) -> Derivation {
        Derivation::from_components(
            self.parity,
            self.components
                .iter()
                .map(|(v, p)| (v.clone(), f(p)))
                .collect(),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{Grading, MultiIndex, VarKind};

    fn y() -> VariableId {
        VariableId::even_field(0)
    }

    #[test]
    fn shift_kills_higher_jets() {
        let js = JetSpace::new(1);
        let d = Derivation::new(Parity::Even).with(y(), GradedPoly::one());
        let y00 = GradedPoly::var(y().with_jet(MultiIndex::from_indices([0, 0])));
        assert!(d.apply(&js, &y00).unwrap().is_zero());
        let l = GradedPoly::var(y()).pow(2);
        assert!(!d.is_variational_symmetry(&js, &l).unwrap());
    }

    #[test]
    fn scaling_on_gradients() {
        let js = JetSpace::new(1);
        let d = Derivation::new(Parity::Even).with(y(), GradedPoly::var(y()));
        let y0y0 = GradedPoly::var(y().prolong(0)).pow(2);
        assert_eq!(d.apply(&js, &y0y0).unwrap(), y0y0.scale(&int(2)));
        assert!(d.commutator(&js, &d).unwrap().is_zero());
    }

    #[test]
    fn abelian_brst_squares_to_zero() {
        let js = JetSpace::new(2);
        let a = |l| VariableId::new(VarKind::Field, l, Grading::even());
        let c = VariableId::new(VarKind::Ghost, 9, Grading::new(Parity::Odd, 1, 0));
        let mut b = Derivation::new(Parity::Odd);
        for l in 0..2 {
            b.set(a(l), GradedPoly::var(c.prolong(l as usize)));
        }
        assert!(b.is_nilpotent(&js).unwrap());
        assert!(b.commutator(&js, &b).unwrap().is_zero());
        assert!(matches!(
            Derivation::new(Parity::Even).is_nilpotent(&js),
            Err(Error::EvenDerivation)
        ));
        assert_eq!(b.ghost_shift(), Some(1));
    }
}
