//! Noether identities, the Koszul–Tate differential, gauge and BRST
//! operators, the antibracket and the classical master equation.

mod ni;

use std::collections::{BTreeMap, BTreeSet};

use crate::algebra::{int, GradedPoly, Parity, VariableId};
use crate::calculus::{base_generators, CurrentVector, EulerLagrangeResult, JetSpace};
use crate::symmetry::Derivation;
use crate::{Error, Result};

pub use ni::{NiGenerator, NoetherIdentityData};

/// Field–antifield pairs `(z^a, z̄_a)` on jet-free generators.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Pairing {
    pairs: Vec<(VariableId, VariableId)>,
}

impl Pairing {
    pub fn new(pairs: Vec<(VariableId, VariableId)>) -> Self {
        Pairing { pairs }
    }

    pub fn pairs(&self) -> &[(VariableId, VariableId)] {
        &self.pairs
    }

    pub fn field_of(&self, antifield: &VariableId) -> Option<&VariableId> {
        self.pairs
            .iter()
            .find(|(_, a)| a == antifield)
            .map(|(z, _)| z)
    }

    pub fn antifield_of(&self, field: &VariableId) -> Option<&VariableId> {
        self.pairs.iter().find(|(z, _)| z == field).map(|(_, a)| a)
    }

    fn check_covers(&self, p: &GradedPoly) -> Result<()> {
        for v in base_generators(p) {
            if v.kind().is_antifield() && self.field_of(&v).is_none() {
                return Err(Error::UnpairedAntifield(format!("{v:?}")));
            }
        }
        Ok(())
    }
}

/// A Lagrangian theory with its fields, ghost/antifield pairing and NI tower.
#[derive(Clone, Debug)]
pub struct ExtendedTheory {
    pub jet_space: JetSpace,
    pub lagrangian: GradedPoly,
    pub fields: Vec<VariableId>,
    pub pairing: Pairing,
    pub tower: Vec<NoetherIdentityData>,
}

impl ExtendedTheory {
    pub fn euler_lagrange(&self) -> Result<EulerLagrangeResult> {
        self.jet_space.euler_lagrange(&self.lagrangian, &self.fields)
    }

    /// The target antifield `t` must be paired and, at stage 0, pair with a
    /// dynamical field.
    fn partner(&self, target: &VariableId, stage: usize) -> Result<VariableId> {
        let z = self.pairing.field_of(target).ok_or_else(|| {
            Error::RosterMismatch(format!("identity target {target:?} has no paired generator"))
        })?;
        if stage == 0 && !self.fields.contains(z) {
            return Err(Error::RosterMismatch(format!(
                "stage-0 identity target {target:?} is not the antifield of a field"
            )));
        }
        Ok(z.clone())
    }

    /// The KT differential as a left derivation `D(g) = (−1)^{[g]} (g)δ`, where
    /// `δ = ∂⃖^A E_A + Σ_k ∂⃖^{r_k} Δ_{r_k}` acts from the right.
    pub fn kt_differential(&self) -> Result<Derivation> {
        let el = self.euler_lagrange()?;
        let mut d = Derivation::new(Parity::Odd);
        for field in &self.fields {
            let antifield = self.pairing.antifield_of(field).ok_or_else(|| {
                Error::RosterMismatch(format!("field {field:?} has no antifield"))
            })?;
            let e = el.get(field);
            d.set(antifield.clone(), signed(antifield.parity(), &e));
        }
        for (k, stage) in self.tower.iter().enumerate() {
            if stage.stage != k {
                return Err(Error::RosterMismatch(format!(
                    "tower entry {k} declares stage {}",
                    stage.stage
                )));
            }
            for g in &stage.generators {
                for (target, _) in g.coefficients.keys() {
                    self.partner(target, k)?;
                }
                d.set(g.antifield.clone(), signed(g.antifield.parity(), &g.to_poly()));
            }
        }
        Ok(d)
    }

    /// The gauge operator `u + Σ u_(k)` assembled from the tower by the η-transform.
    pub fn gauge_operator(&self) -> Result<Derivation> {
        let js = &self.jet_space;
        let mut u = Derivation::new(Parity::Odd);
        for (k, stage) in self.tower.iter().enumerate() {
            for g in &stage.generators {
                for (target, family) in g.families() {
                    let z = self.partner(&target, k)?;
                    let eta = js.eta(&family)?;
                    let mut comp = u.component(&z);
                    for (multi, coeff) in eta {
                        let ghost = GradedPoly::var(g.ghost.with_jet(multi));
                        comp += &ghost * &coeff;
                    }
                    u.set(z, comp);
                }
            }
        }
        Ok(u)
    }
}

fn signed(parity: Parity, p: &GradedPoly) -> GradedPoly {
    match parity {
        Parity::Even => p.clone(),
        Parity::Odd => -p,
    }
}

/// `Σ_{A,Λ} Δ^{A,Λ} d_Λ E_A` for each stage-0 generator; all zero iff the
/// identities hold.
pub fn verify_ni(
    js: &JetSpace,
    ni: &NoetherIdentityData,
    el: &EulerLagrangeResult,
    pairing: &Pairing,
) -> Result<Vec<GradedPoly>> {
    ni.generators
        .iter()
        .map(|g| {
            let mut acc = GradedPoly::zero();
            for ((target, multi), coeff) in &g.coefficients {
                let field = pairing.field_of(target).ok_or_else(|| {
                    Error::RosterMismatch(format!("identity target {target:?} is unpaired"))
                })?;
                let e = js.iterated_total(&el.get(field), multi)?;
                acc += coeff * &e;
            }
            Ok(acc)
        })
        .collect()
}

/// Residuals `D(D(g))` of a KT differential; empty iff it is nilpotent.
pub fn kt_residuals(js: &JetSpace, kt: &Derivation) -> Result<BTreeMap<VariableId, GradedPoly>> {
    if kt.parity() == Parity::Even {
        return Err(Error::EvenDerivation);
    }
    kt.square_residuals(js)
}

pub fn check_kt_nilpotency(js: &JetSpace, kt: &Derivation) -> Result<bool> {
    kt.is_nilpotent(js)
}

/// `Σ_A u^A E_A`, the density whose triviality is the gauge condition.
pub fn gauge_density(u: &Derivation, el: &EulerLagrangeResult) -> GradedPoly {
    let mut acc = GradedPoly::zero();
    for (field, e) in &el.components {
        let comp = u.component(field);
        if !comp.is_zero() {
            acc += &comp * e;
        }
    }
    acc
}

pub fn check_gauge_condition(js: &JetSpace, u: &Derivation, el: &EulerLagrangeResult) -> Result<bool> {
    js.is_variationally_trivial(&gauge_density(u, el))
}

/// The antibracket
/// `{L₁,L₂} = Σ_a [δ⃖L₁/δz̄_a · δL₂/δz^a + (−1)^{[L₁][L₂]} δ⃖L₂/δz̄_a · δL₁/δz^a]`.
pub fn antibracket(js: &JetSpace, l1: &GradedPoly, l2: &GradedPoly, pairing: &Pairing) -> Result<GradedPoly> {
    pairing.check_covers(l1)?;
    pairing.check_covers(l2)?;
    let mut out = GradedPoly::zero();
    for p1 in [Parity::Even, Parity::Odd] {
        let a = l1.parity_part(p1);
        if a.is_zero() {
            continue;
        }
        for p2 in [Parity::Even, Parity::Odd] {
            let b = l2.parity_part(p2);
            if b.is_zero() {
                continue;
            }
            let sign = if p1.koszul(p2) { int(-1) } else { int(1) };
            for (z, zbar) in pairing.pairs() {
                let first = &js.right_variational_derivative(&a, zbar)? * &js.variational_derivative(&b, z)?;
                let second = &js.right_variational_derivative(&b, zbar)? * &js.variational_derivative(&a, z)?;
                out += first;
                out += second.scale(&sign);
            }
        }
    }
    Ok(out)
}

/// True iff `{L,L}` is variationally trivial.
pub fn check_master_equation(js: &JetSpace, l: &GradedPoly, pairing: &Pairing) -> Result<bool> {
    js.is_variationally_trivial(&antibracket(js, l, l, pairing)?)
}

/// `L + b(Σ_a z^a z̄_a)` over every pair, fields and ghosts alike.
pub fn extend_lagrangian(js: &JetSpace, l: &GradedPoly, b: &Derivation, pairing: &Pairing) -> Result<GradedPoly> {
    if b.parity() != Parity::Odd || !b.is_nilpotent(js)? {
        return Err(Error::NotNilpotent);
    }
    let mut sum = GradedPoly::zero();
    for (z, zbar) in pairing.pairs() {
        sum += &GradedPoly::var(z.clone()) * &GradedPoly::var(zbar.clone());
    }
    Ok(l + &b.apply(js, &sum)?)
}

/// The Noether current `J = σ − contract(υ, Ξ)` of a variational symmetry,
/// where `d_H σ = ϑ(ℒ)`, so that `Σ d_λ J^λ = Σ υ^A E_A`.
pub fn noether_current(js: &JetSpace, d: &Derivation, l: &GradedPoly) -> Result<CurrentVector> {
    let lie = d.apply(js, l)?;
    let sigma = js
        .horizontal_antiderivative(&lie)?
        .ok_or(Error::NotASymmetry)?;
    let decomposition = js.lepage_decompose(l)?;
    let boundary = js.contract(d.components(), &decomposition.boundary)?;
    Ok(&sigma - &boundary)
}

/// `Σ_A υ^A E_A` over the generators the derivation touches.
pub fn symmetry_density(js: &JetSpace, d: &Derivation, l: &GradedPoly) -> Result<GradedPoly> {
    let over: BTreeSet<VariableId> = d.components().keys().cloned().collect();
    let el = js.euler_lagrange(l, &over)?;
    Ok(gauge_density(d, &el))
}
