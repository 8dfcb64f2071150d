use std::fmt;
use std::ops::Add;

use serde::{Deserialize, Serialize};

use super::MultiIndex;

/// Grassmann parity.
#[derive(Copy, Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    #[default]
    Even,
    Odd,
}

impl Parity {
    pub fn is_odd(self) -> bool {
        self == Parity::Odd
    }

    pub fn from_bit(bit: usize) -> Self {
        if bit.is_multiple_of(2) {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    pub fn bit(self) -> usize {
        self as usize
    }

    pub fn flip(self) -> Self {
        match self {
            Parity::Even => Parity::Odd,
            Parity::Odd => Parity::Even,
        }
    }

    /// `(−1)^(self·other)` as a boolean "negate" flag.
    pub fn koszul(self, other: Parity) -> bool {
        self.is_odd() && other.is_odd()
    }
}

impl Add for Parity {
    type Output = Parity;
    fn add(self, rhs: Parity) -> Parity {
        Parity::from_bit(self.bit() + rhs.bit())
    }
}

impl fmt::Display for Parity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Parity::Even => "even",
            Parity::Odd => "odd",
        })
    }
}

/// Parity, pure ghost number and antifield number of a homogeneous element.
///
/// The total ghost number is `pure_ghost − antifield`, so an antifield `s̄_A`
/// carries ghost number −1 and a stage-k ghost antifield carries −(k+2).
#[derive(Copy, Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Grading {
    pub parity: Parity,
    pub pure_ghost: u32,
    pub antifield: u32,
}

impl Grading {
    pub const fn even() -> Self {
        Grading {
            parity: Parity::Even,
            pure_ghost: 0,
            antifield: 0,
        }
    }

    pub fn new(parity: Parity, pure_ghost: u32, antifield: u32) -> Self {
        Grading {
            parity,
            pure_ghost,
            antifield,
        }
    }

    pub fn ghost_number(&self) -> i64 {
        self.pure_ghost as i64 - self.antifield as i64
    }
}

impl Add for Grading {
    type Output = Grading;
    fn add(self, rhs: Grading) -> Grading {
        Grading {
            parity: self.parity + rhs.parity,
            pure_ghost: self.pure_ghost + rhs.pure_ghost,
            antifield: self.antifield + rhs.antifield,
        }
    }
}

/// What a generator stands for. Declaration order is the first key of the
/// total order on [`VariableId`].
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum VarKind {
    Coordinate,
    Field,
    Ghost,
    Antifield,
    GhostAntifield,
}

impl VarKind {
    pub fn is_antifield(self) -> bool {
        matches!(self, VarKind::Antifield | VarKind::GhostAntifield)
    }
}

/// One generator `s^A_Λ`, `x^λ`, a ghost jet or an antifield jet.
///
/// Identity is `(kind, slot, jet)`; the grading rides along so sign rules can
/// be applied without consulting a roster. The derived order compares fields in
/// declaration order, which makes `grading` a tie-breaker that never fires for
/// generators coming from one roster.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VariableId {
    kind: VarKind,
    slot: u32,
    jet: MultiIndex,
    grading: Grading,
}

impl VariableId {
    pub fn new(kind: VarKind, slot: u32, grading: Grading) -> Self {
        VariableId {
            kind,
            slot,
            jet: MultiIndex::empty(),
            grading,
        }
    }

    /// The base coordinate `x^λ`.
    pub fn coordinate(lambda: usize) -> Self {
        VariableId::new(VarKind::Coordinate, lambda as u32, Grading::even())
    }

    pub fn even_field(slot: u32) -> Self {
        VariableId::new(VarKind::Field, slot, Grading::even())
    }

    pub fn kind(&self) -> VarKind {
        self.kind
    }

    pub fn slot(&self) -> u32 {
        self.slot
    }

    pub fn jet(&self) -> &MultiIndex {
        &self.jet
    }

    pub fn grading(&self) -> Grading {
        self.grading
    }

    pub fn parity(&self) -> Parity {
        self.grading.parity
    }

    pub fn is_odd(&self) -> bool {
        self.grading.parity.is_odd()
    }

    pub fn is_coordinate(&self) -> bool {
        self.kind == VarKind::Coordinate
    }

    /// The generator with its jet stripped: `s^A_Λ ↦ s^A`.
    pub fn base(&self) -> VariableId {
        VariableId {
            jet: MultiIndex::empty(),
            ..self.clone()
        }
    }

    pub fn with_jet(&self, jet: MultiIndex) -> VariableId {
        assert!(
            !(self.is_coordinate() && !jet.is_empty()),
            "base coordinates carry no jet"
        );
        VariableId {
            jet,
            ..self.clone()
        }
    }

    /// `s^A_Λ ↦ s^A_{λ+Λ}`.
    pub fn prolong(&self, lambda: usize) -> VariableId {
        self.with_jet(self.jet.with_index(lambda))
    }

    pub fn jet_order(&self) -> usize {
        self.jet.order()
    }
}

impl fmt::Debug for VariableId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = match self.kind {
            VarKind::Coordinate => "x",
            VarKind::Field => "s",
            VarKind::Ghost => "c",
            VarKind::Antifield => "s̄",
            VarKind::GhostAntifield => "c̄",
        };
        write!(f, "{tag}{}", self.slot)?;
        if !self.jet.is_empty() {
            write!(f, "_{:?}", self.jet)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn jets_preserve_parity() {
        let c = VariableId::new(VarKind::Ghost, 0, Grading::new(Parity::Odd, 1, 0));
        let cj = c.prolong(2).prolong(0);
        assert_eq!(cj.parity(), Parity::Odd);
        assert_eq!(cj.jet_order(), 2);
        assert_eq!(cj.base(), c);
    }

    #[test]
    fn total_order_is_kind_slot_jet() {
        let y = VariableId::even_field(1);
        let y0 = y.prolong(0);
        let z = VariableId::even_field(2);
        let x = VariableId::coordinate(3);
        assert!(x < y);
        assert!(y < y0);
        assert!(y0 < z);
    }

    #[test]
    fn antifield_ghost_number() {
        let g = Grading::new(Parity::Odd, 0, 1);
        assert_eq!(g.ghost_number(), -1);
        let cbar = Grading::new(Parity::Even, 0, 2);
        assert_eq!((Grading::new(Parity::Odd, 1, 0) + cbar).ghost_number(), -1);
    }

    #[test]
    #[should_panic]
    fn coordinates_have_no_jets() {
        let _ = VariableId::coordinate(0).prolong(0);
    }
}
