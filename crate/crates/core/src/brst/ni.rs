use std::collections::{BTreeMap, BTreeSet};

use crate::algebra::{GradedPoly, MultiIndex, VariableId};

/// One identity generator `Δ_r = Σ Δ^{t,Λ} t_Λ + h`, where the targets `t` are
/// antifields of the previous stage (`s̄_A` at stage 0).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NiGenerator {
    /// The ghost `c^r` parameterising the corresponding gauge symmetry.
    pub ghost: VariableId,
    /// The antifield `c̄_r` on which the KT differential produces `Δ_r`.
    pub antifield: VariableId,
    pub coefficients: BTreeMap<(VariableId, MultiIndex), GradedPoly>,
    /// Terms not linear in the targets (the `h` part of higher stages).
    pub correction: GradedPoly,
}

impl NiGenerator {
    /// Splits an antifield polynomial into target coefficients and the
    /// remainder.
    pub fn from_poly(
        ghost: VariableId,
        antifield: VariableId,
        delta: &GradedPoly,
        targets: &BTreeSet<VariableId>,
    ) -> Self {
        let mut coefficients: BTreeMap<(VariableId, MultiIndex), GradedPoly> = BTreeMap::new();
        let mut correction = GradedPoly::zero();
        for (m, c) in delta.terms() {
            let hits: Vec<&VariableId> = m
                .variables()
                .filter(|v| targets.contains(&v.base()))
                .collect();
            let linear = hits.len() == 1 && m.exponent(hits[0]) == 1;
            if !linear {
                correction.add_term(m.clone(), c.clone());
                continue;
            }
            let t = hits[0];
            let coeff = GradedPoly::term(m.clone(), c.clone()).right_partial(t);
            *coefficients
                .entry((t.base(), t.jet().clone()))
                .or_default() += coeff;
        }
        coefficients.retain(|_, p| !p.is_zero());
        NiGenerator {
            ghost,
            antifield,
            coefficients,
            correction,
        }
    }

    /// `Σ Δ^{t,Λ} t_Λ + h`.
    pub fn to_poly(&self) -> GradedPoly {
        let mut out = self.correction.clone();
        for ((t, multi), coeff) in &self.coefficients {
            out += coeff * &GradedPoly::var(t.with_jet(multi.clone()));
        }
        out
    }

    /// Coefficient families `Λ ↦ Δ^{t,Λ}` grouped by target.
    pub fn families(&self) -> BTreeMap<VariableId, BTreeMap<MultiIndex, GradedPoly>> {
        let mut out: BTreeMap<VariableId, BTreeMap<MultiIndex, GradedPoly>> = BTreeMap::new();
        for ((t, multi), coeff) in &self.coefficients {
            out.entry(t.clone())
                .or_default()
                .insert(multi.clone(), coeff.clone());
        }
        out
    }

    /// Highest jet order of any target.
    pub fn order(&self) -> usize {
        self.coefficients
            .keys()
            .map(|(_, m)| m.order())
            .max()
            .unwrap_or(0)
    }
}

/// All generators of one stage of the tower.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NoetherIdentityData {
    pub stage: usize,
    pub generators: Vec<NiGenerator>,
}

impl NoetherIdentityData {
    pub fn new(stage: usize, generators: Vec<NiGenerator>) -> Self {
        NoetherIdentityData { stage, generators }
    }
}

