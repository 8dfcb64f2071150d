use std::collections::{BTreeMap, BTreeSet};

use crate::algebra::{GradedPoly, VariableId};
use crate::brst::{extend_lagrangian, ExtendedTheory, NiGenerator, NoetherIdentityData};
use crate::calculus::{Density, EulerLagrangeResult, JetSpace};
use crate::symmetry::Derivation;
use crate::{Error, Result};

use super::{ParamTensor, Role, Roster};

/// A declared field theory with its optional gauge data.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TheoryModel {
    pub name: String,
    pub dim: usize,
    pub max_jet_order: Option<usize>,
    /// Render indices 1-based in LaTeX output.
    pub physics_display: bool,
    pub params: Vec<ParamTensor>,
    pub roster: Roster,
    pub lagrangian: GradedPoly,
    pub tower: Vec<NoetherIdentityData>,
    pub gauge: Option<Derivation>,
    pub brst: Option<Derivation>,
    pub extended: Option<GradedPoly>,
    pub derivations: BTreeMap<String, Derivation>,
}

impl TheoryModel {
    pub fn new(name: &str, dim: usize) -> Self {
        TheoryModel {
            name: name.to_string(),
            dim,
            max_jet_order: None,
            physics_display: false,
            params: Vec::new(),
            roster: Roster::new(),
            lagrangian: GradedPoly::zero(),
            tower: Vec::new(),
            gauge: None,
            brst: None,
            extended: None,
            derivations: BTreeMap::new(),
        }
    }

    pub fn jet_space(&self) -> JetSpace {
        let js = JetSpace::new(self.dim);
        match self.max_jet_order {
            Some(n) => js.with_max_order(n),
            None => js,
        }
    }

    pub fn density(&self) -> Density {
        Density::new(self.lagrangian.clone(), self.dim)
    }

    pub fn param(&self, name: &str) -> Option<&ParamTensor> {
        self.params.iter().find(|p| p.name == name)
    }

    pub fn extended_theory(&self) -> ExtendedTheory {
        ExtendedTheory {
            jet_space: self.jet_space(),
            lagrangian: self.lagrangian.clone(),
            fields: self.roster.fields(),
            pairing: self.roster.pairing(),
            tower: self.tower.clone(),
        }
    }

    pub fn euler_lagrange(&self) -> Result<EulerLagrangeResult> {
        self.jet_space()
            .euler_lagrange(&self.lagrangian, &self.roster.fields())
    }

    /// The declared extended Lagrangian, or `L + b(Σ z z̄)` from the BRST operator.
    pub fn extended_lagrangian(&self) -> Result<GradedPoly> {
        if let Some(le) = &self.extended {
            return Ok(le.clone());
        }
        let b = self.brst.as_ref().ok_or_else(|| Error::MissingData {
            model: self.name.clone(),
            what: "BRST operator",
        })?;
        extend_lagrangian(&self.jet_space(), &self.lagrangian, b, &self.roster.pairing())
    }

    /// An identity generator for `ghost` from its antifield polynomial. Stage-0
    /// ghosts target field antifields; stage-k ghosts target the antifields of
    /// stage-(k−1) ghosts.
    pub fn ni_generator(&self, ghost: &VariableId, delta: &GradedPoly) -> Result<NiGenerator> {
        let (decl, idx) = self
            .roster
            .describe(ghost)
            .filter(|(d, _)| d.role == Role::Ghost)
            .ok_or_else(|| Error::RosterMismatch(format!("{ghost:?} is not a ghost")))?;
        let antifield = self
            .roster
            .antifield_of(&decl.name)
            .ok_or_else(|| Error::UnpairedAntifield(decl.name.clone()))?
            .variable(&idx);
        let targets: BTreeSet<VariableId> = if decl.stage == 0 {
            self.roster.generators(Role::Antifield).into_iter().collect()
        } else {
            self.roster
                .decls()
                .iter()
                .filter(|d| d.role == Role::GhostAntifield && d.stage + 1 == decl.stage)
                .flat_map(|d| d.components().into_iter().map(move |i| d.variable(&i)))
                .collect()
        };
        Ok(NiGenerator::from_poly(ghost.clone(), antifield, delta, &targets))
    }

    pub fn derivation(&self, name: &str) -> Result<&Derivation> {
        match name {
            "gauge" => self.gauge.as_ref(),
            "brst" => self.brst.as_ref(),
            _ => self.derivations.get(name),
        }
        .ok_or_else(|| Error::MissingData {
            model: self.name.clone(),
            what: "derivation of that name",
        })
    }
}
