use std::collections::BTreeMap;

use crate::algebra::{int, rat, Coeff, GradedPoly, Monomial, MultiIndex, VariableId};
use crate::Result;

use super::variational::{alternating, base_generators};
use super::{EulerLagrangeResult, JetSpace};

/// One `(n−1)`-form density per base direction: `J^λ` is the coefficient of
/// `ω_λ = ∂_λ ⌋ ω`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CurrentVector {
    pub components: Vec<GradedPoly>,
}

impl CurrentVector {
    pub fn zero(dim: usize) -> Self {
        CurrentVector {
            components: vec![GradedPoly::zero(); dim],
        }
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(GradedPoly::is_zero)
    }
}

impl std::ops::Sub for &CurrentVector {
    type Output = CurrentVector;
    fn sub(self, rhs: &CurrentVector) -> CurrentVector {
        CurrentVector {
            components: self
                .components
                .iter()
                .zip(&rhs.components)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

/// Boundary data `Ξ`, keyed by `(s^A, Λ, λ)`: the coefficient of
/// `(d_Λ υ^A) ω_λ` in the boundary term of the first variational formula.
pub type BoundaryData = BTreeMap<(VariableId, MultiIndex, usize), GradedPoly>;

/// Output of [`JetSpace::lepage_decompose`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LepageDecomposition {
    pub euler_lagrange: EulerLagrangeResult,
    pub boundary: BoundaryData,
}

impl JetSpace {
    /// Integrates `Σ (d_Λ υ^A) ∂^Λ_A ℒ` by parts, highest jet order first, into
    /// `Σ υ^A E_A + d_λ(Σ (d_Λ υ^A) Ξ^{A,Λ,λ})`.
    pub fn lepage_decompose(&self, l: &GradedPoly) -> Result<LepageDecomposition> {
        // pending coefficients of d_Λ υ^A
        let mut pending: BTreeMap<(VariableId, MultiIndex), GradedPoly> = BTreeMap::new();
        for v in l.variables() {
            if v.is_coordinate() {
                continue;
            }
            let p = l.left_partial(&v);
            if !p.is_zero() {
                pending.insert((v.base(), v.jet().clone()), p);
            }
        }
        let mut boundary = BoundaryData::new();
        let top = pending.keys().map(|(_, j)| j.order()).max().unwrap_or(0);
        for order in (1..=top).rev() {
            let layer: Vec<_> = pending
                .keys()
                .filter(|(_, j)| j.order() == order)
                .cloned()
                .collect();
            for key in layer {
                let p = pending.remove(&key).expect("present");
                let (base, multi) = key;
                let lambda = multi.first_index().expect("non-empty jet");
                let rest = multi.without_index(lambda).expect("contains λ");
                let dp = self.total_derivative(&p, lambda)?;
                *boundary
                    .entry((base.clone(), rest.clone(), lambda))
                    .or_default() += &p;
                *pending.entry((base, rest)).or_default() -= dp;
            }
        }
        let mut components: BTreeMap<VariableId, GradedPoly> = base_generators(l)
            .into_iter()
            .map(|b| (b, GradedPoly::zero()))
            .collect();
        for ((base, multi), p) in pending {
            debug_assert!(multi.is_empty());
            *components.entry(base).or_default() += p;
        }
        boundary.retain(|_, p| !p.is_zero());
        Ok(LepageDecomposition {
            euler_lagrange: EulerLagrangeResult { components },
            boundary,
        })
    }

    /// `contract(υ, Ξ)^λ = Σ_{A,Λ} (d_Λ υ^A) Ξ^{A,Λ,λ}`.
    pub fn contract(
        &self,
        components: &BTreeMap<VariableId, GradedPoly>,
        boundary: &BoundaryData,
    ) -> Result<CurrentVector> {
        let mut out = CurrentVector::zero(self.dim());
        let mut prolonged: BTreeMap<(VariableId, MultiIndex), GradedPoly> = BTreeMap::new();
        for ((base, multi, lambda), xi) in boundary {
            let Some(upsilon) = components.get(base) else {
                continue;
            };
            let key = (base.clone(), multi.clone());
            if !prolonged.contains_key(&key) {
                prolonged.insert(key.clone(), self.iterated_total(upsilon, multi)?);
            }
            out.components[*lambda] += &prolonged[&key] * xi;
        }
        Ok(out)
    }

    /// `Σ_λ d_λ J^λ`.
    pub fn divergence(&self, current: &CurrentVector) -> Result<GradedPoly> {
        let mut out = GradedPoly::zero();
        for (lambda, j) in current.components.iter().enumerate() {
            out += self.total_derivative(j, lambda)?;
        }
        Ok(out)
    }

    /// The η-transform of a coefficient family `f^Σ`:
    /// `η(f)^Λ = Σ_Σ (−1)^{|Σ+Λ|} w(Σ,Λ) d_Σ f^{Σ+Λ}`, where `w` counts the
    /// embeddings of `Λ` in `Σ+Λ` as multisets.
    pub fn eta(&self, f: &BTreeMap<MultiIndex, GradedPoly>) -> Result<BTreeMap<MultiIndex, GradedPoly>> {
        let mut out: BTreeMap<MultiIndex, GradedPoly> = BTreeMap::new();
        for (top, coeff) in f {
            let sign = alternating(top.order());
            for lam in top.sub_multi_indices() {
                let sigma = top.difference(&lam).expect("sub-multiset");
                let weight = int(top.embedding_weight(&lam) as i64) * &sign;
                let term = self.iterated_total(coeff, &sigma)?.scale(&weight);
                *out.entry(lam).or_default() += term;
            }
        }
        out.retain(|_, p| !p.is_zero());
        Ok(out)
    }

    /// A current `σ` with `Σ d_λ σ^λ = ℒ`, or `None` when `ℒ` is not
    /// variationally trivial.
    ///
    /// Each part of polynomial degree `k > 0` in the non-coordinate generators is
    /// integrated with the scaling derivation `υ^A = s^A`, which acts on it as
    /// multiplication by `k`; the part depending on coordinates alone is
    /// integrated in `x⁰`.
    pub fn horizontal_antiderivative(&self, l: &GradedPoly) -> Result<Option<CurrentVector>> {
        if !self.is_variationally_trivial(l)? {
            return Ok(None);
        }
        let mut by_degree: BTreeMap<u32, GradedPoly> = BTreeMap::new();
        for (m, c) in l.terms() {
            let k = m.degree_in(|v| !v.is_coordinate());
            by_degree.entry(k).or_default().add_term(m.clone(), c.clone());
        }
        let mut sigma = CurrentVector::zero(self.dim());
        for (k, part) in by_degree {
            if k == 0 {
                sigma.components[0] += integrate_x0(&part);
                continue;
            }
            let decomposition = self.lepage_decompose(&part)?;
            let scaling: BTreeMap<VariableId, GradedPoly> = base_generators(&part)
                .into_iter()
                .map(|b| (b.clone(), GradedPoly::var(b)))
                .collect();
            let current = self.contract(&scaling, &decomposition.boundary)?;
            let inv = rat(1, k as i64);
            for (acc, j) in sigma.components.iter_mut().zip(current.components) {
                *acc += j.scale(&inv);
            }
        }
        Ok(Some(sigma))
    }
}

fn integrate_x0(p: &GradedPoly) -> GradedPoly {
    let x0 = VariableId::coordinate(0);
    let mut out = GradedPoly::zero();
    for (m, c) in p.terms() {
        let e = m.exponent(&x0) as i64;
        let (neg, lifted) = Monomial::var(x0.clone()).mul(m).expect("even factor");
        debug_assert!(!neg);
        out.add_term(lifted, c.clone() * Coeff::new(1.into(), (e + 1).into()));
    }
    out
}
