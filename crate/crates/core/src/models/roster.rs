use std::collections::BTreeMap;

use crate::algebra::{rat, Coeff, GradedPoly, Grading, Parity, VarKind, VariableId};
use crate::brst::Pairing;

/// What a declared family of generators is.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Role {
    Field,
    Ghost,
    Antifield,
    GhostAntifield,
}

impl Role {
    pub fn kind(self) -> VarKind {
        match self {
            Role::Field => VarKind::Field,
            Role::Ghost => VarKind::Ghost,
            Role::Antifield => VarKind::Antifield,
            Role::GhostAntifield => VarKind::GhostAntifield,
        }
    }

    pub fn keyword(self) -> &'static str {
        match self {
            Role::Field => "field",
            Role::Ghost => "ghost",
            Role::Antifield | Role::GhostAntifield => "antifield",
        }
    }
}

/// One declared tensor family of generators, e.g. `a^r_λ` or `c̄_r`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FieldDecl {
    pub name: String,
    pub role: Role,
    pub shape: Vec<usize>,
    /// Components are symmetric under any permutation of indices.
    pub symmetric: bool,
    pub parity: Parity,
    /// Ghost stage `k` (ghost number `k+1`); for ghost antifields, the stage of the partner.
    pub stage: u32,
    /// For antifields, the paired field or ghost.
    pub partner: Option<String>,
    first_slot: u32,
}

impl FieldDecl {
    pub fn new(name: &str, role: Role, shape: Vec<usize>, parity: Parity) -> Self {
        FieldDecl {
            name: name.to_string(),
            role,
            shape,
            symmetric: false,
            parity,
            stage: 0,
            partner: None,
            first_slot: 0,
        }
    }

    pub fn symmetric(mut self) -> Self {
        self.symmetric = true;
        self
    }

    pub fn stage(mut self, stage: u32) -> Self {
        self.stage = stage;
        self
    }

    pub fn grading(&self) -> Grading {
        match self.role {
            Role::Field => Grading::new(self.parity, 0, 0),
            Role::Ghost => Grading::new(self.parity, self.stage + 1, 0),
            Role::Antifield => Grading::new(self.parity, 0, 1),
            Role::GhostAntifield => Grading::new(self.parity, 0, self.stage + 2),
        }
    }

    pub fn len(&self) -> usize {
        self.shape.iter().product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// All index tuples, canonical ones only for symmetric families.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new()];
        for &n in &self.shape {
            out = out
                .into_iter()
                .flat_map(|prefix: Vec<usize>| {
                    (0..n).map(move |i| {
                        let mut p = prefix.clone();
                        p.push(i);
                        p
                    })
                })
                .collect();
        }
        if self.symmetric {
            out.retain(|idx| idx.windows(2).all(|w| w[0] <= w[1]));
        }
        out
    }

    fn canonical(&self, idx: &[usize]) -> Vec<usize> {
        let mut idx = idx.to_vec();
        if self.symmetric {
            idx.sort_unstable();
        }
        idx
    }

    fn flat(&self, idx: &[usize]) -> usize {
        idx.iter()
            .zip(&self.shape)
            .fold(0, |acc, (&i, &n)| acc * n + i)
    }

    /// Antifields of symmetric fields are dual tensors: the generator paired
    /// with `σ^{(αβ)}` stands for the sum over orderings of `σ̄_{αβ}`.
    pub fn is_dual_symmetric(&self) -> bool {
        self.symmetric && matches!(self.role, Role::Antifield | Role::GhostAntifield)
    }

    /// Number of distinct orderings of a canonical index tuple.
    pub fn multiplicity(idx: &[usize]) -> usize {
        let mut counts: BTreeMap<usize, usize> = BTreeMap::new();
        for &i in idx {
            *counts.entry(i).or_default() += 1;
        }
        let fact = |n: usize| (1..=n).product::<usize>();
        fact(idx.len()) / counts.values().map(|&c| fact(c)).product::<usize>()
    }

    pub fn variable(&self, idx: &[usize]) -> VariableId {
        let canon = self.canonical(idx);
        VariableId::new(
            self.role.kind(),
            self.first_slot + self.flat(&canon) as u32,
            self.grading(),
        )
    }

    /// The component as a polynomial, including the dual-tensor weight.
    pub fn component(&self, idx: &[usize]) -> GradedPoly {
        let v = GradedPoly::var(self.variable(idx));
        if self.is_dual_symmetric() {
            let canon = self.canonical(idx);
            v.scale(&rat(1, Self::multiplicity(&canon) as i64))
        } else {
            v
        }
    }

    /// Weight by which a printed generator must be scaled so that re-reading
    /// the component reproduces it.
    pub fn print_weight(&self, idx: &[usize]) -> Coeff {
        if self.is_dual_symmetric() {
            rat(Self::multiplicity(idx) as i64, 1)
        } else {
            rat(1, 1)
        }
    }

    fn unflatten(&self, mut flat: usize) -> Vec<usize> {
        let mut idx = vec![0; self.shape.len()];
        for (slot, &n) in idx.iter_mut().zip(&self.shape).rev() {
            *slot = flat % n;
            flat /= n;
        }
        idx
    }
}

/// Why a declaration was refused.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RosterError {
    Duplicate(String),
    UnknownPartner(String),
    BadPartner(String),
    ParityMismatch(String),
    NotSquare(String),
}

/// The declared generators of a theory, in declaration order.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Roster {
    decls: Vec<FieldDecl>,
    next_slot: u32,
}

impl Roster {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn decls(&self) -> &[FieldDecl] {
        &self.decls
    }

    pub fn get(&self, name: &str) -> Option<&FieldDecl> {
        self.decls.iter().find(|d| d.name == name)
    }

    /// Adds a declaration, completing antifield roles, stages and symmetry
    /// from the partner.
    pub fn declare(&mut self, mut decl: FieldDecl) -> Result<&FieldDecl, RosterError> {
        if self.get(&decl.name).is_some() {
            return Err(RosterError::Duplicate(decl.name));
        }
        if decl.symmetric && decl.shape.windows(2).any(|w| w[0] != w[1]) {
            return Err(RosterError::NotSquare(decl.name));
        }
        if let Some(partner) = &decl.partner {
            let p = self
                .get(partner)
                .ok_or_else(|| RosterError::UnknownPartner(partner.clone()))?;
            decl.role = match p.role {
                Role::Field => Role::Antifield,
                Role::Ghost => Role::GhostAntifield,
                _ => return Err(RosterError::BadPartner(partner.clone())),
            };
            if decl.parity != p.parity.flip() {
                return Err(RosterError::ParityMismatch(decl.name));
            }
            decl.stage = p.stage;
            decl.shape = p.shape.clone();
            decl.symmetric = p.symmetric;
        } else if matches!(decl.role, Role::Antifield | Role::GhostAntifield) {
            return Err(RosterError::UnknownPartner(decl.name));
        }
        decl.first_slot = self.next_slot;
        self.next_slot += decl.len().max(1) as u32;
        self.decls.push(decl);
        Ok(self.decls.last().expect("just pushed"))
    }

    /// The declaration and index tuple behind a generator.
    pub fn describe(&self, v: &VariableId) -> Option<(&FieldDecl, Vec<usize>)> {
        self.decls.iter().find_map(|d| {
            let n = d.len().max(1) as u32;
            (d.role.kind() == v.kind() && v.slot() >= d.first_slot && v.slot() < d.first_slot + n)
                .then(|| (d, d.unflatten((v.slot() - d.first_slot) as usize)))
        })
    }

    pub fn generators(&self, role: Role) -> Vec<VariableId> {
        self.decls
            .iter()
            .filter(|d| d.role == role)
            .flat_map(|d| d.components().into_iter().map(move |i| d.variable(&i)))
            .collect()
    }

    pub fn fields(&self) -> Vec<VariableId> {
        self.generators(Role::Field)
    }

    /// All field/antifield and ghost/antifield pairs.
    pub fn pairing(&self) -> Pairing {
        let mut pairs = Vec::new();
        for d in &self.decls {
            let Some(partner) = &d.partner else { continue };
            let p = self.get(partner).expect("validated partner");
            for idx in d.components() {
                pairs.push((p.variable(&idx), d.variable(&idx)));
            }
        }
        pairs.sort();
        Pairing::new(pairs)
    }

    /// The antifield declaration paired with `name`.
    pub fn antifield_of(&self, name: &str) -> Option<&FieldDecl> {
        self.decls
            .iter()
            .find(|d| d.partner.as_deref() == Some(name))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn symmetric_components_share_generators() {
        let mut r = Roster::new();
        r.declare(FieldDecl::new("sigma", Role::Field, vec![4, 4], Parity::Even).symmetric())
            .unwrap();
        let mut bar = FieldDecl::new("sbar", Role::Antifield, vec![], Parity::Odd);
        bar.partner = Some("sigma".into());
        r.declare(bar).unwrap();
        let s = r.get("sigma").unwrap();
        assert_eq!(s.variable(&[1, 2]), s.variable(&[2, 1]));
        assert_eq!(s.components().len(), 10);
        let sb = r.get("sbar").unwrap();
        assert_eq!(sb.component(&[1, 2]), GradedPoly::var(sb.variable(&[1, 2])).scale(&rat(1, 2)));
        assert_eq!(sb.component(&[3, 3]), GradedPoly::var(sb.variable(&[3, 3])));
        assert_eq!(r.pairing().pairs().len(), 10);
        let (d, idx) = r.describe(&sb.variable(&[2, 1])).unwrap();
        assert_eq!((d.name.as_str(), idx), ("sbar", vec![1, 2]));
    }

    #[test]
    fn antifield_parity_is_checked() {
        let mut r = Roster::new();
        r.declare(FieldDecl::new("c", Role::Ghost, vec![3], Parity::Odd)).unwrap();
        let mut bad = FieldDecl::new("cbar", Role::Antifield, vec![], Parity::Odd);
        bad.partner = Some("c".into());
        assert_eq!(r.declare(bad).unwrap_err(), RosterError::ParityMismatch("cbar".into()));
        let mut good = FieldDecl::new("cbar", Role::Antifield, vec![], Parity::Even);
        good.partner = Some("c".into());
        let d = r.declare(good).unwrap();
        assert_eq!(d.role, Role::GhostAntifield);
        assert_eq!(d.grading().ghost_number(), -2);
    }
}
