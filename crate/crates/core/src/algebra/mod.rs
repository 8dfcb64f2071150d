//! Graded-commutative polynomials over exact rationals in jet generators.

mod monomial;
mod multi_index;
mod poly;
mod variable;

pub use monomial::Monomial;
pub use multi_index::MultiIndex;
pub use poly::{int, rat, Coeff, GradedPoly, PolyGrading};
pub use variable::{Grading, Parity, VarKind, VariableId};

/// Canonical form of a raw product `coeff · Π vᵢ^{eᵢ}`, or `None` when an odd
/// generator occurs twice or the coefficient vanishes.
pub fn normalize(raw: &[(VariableId, u32)], coeff: Coeff) -> Option<(Monomial, Coeff)> {
    use num_traits::Zero;
    if coeff.is_zero() {
        return None;
    }
    let expanded = raw
        .iter()
        .flat_map(|(v, e)| std::iter::repeat_n(v.clone(), *e as usize));
    let (negate, m) = Monomial::from_product(expanded)?;
    Some((m, if negate { -coeff } else { coeff }))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ghost(slot: u32) -> VariableId {
        VariableId::new(VarKind::Ghost, slot, Grading::new(Parity::Odd, 1, 0))
    }

    #[test]
    fn normalize_examples() {
        let (m, c) = normalize(&[(ghost(1), 1), (ghost(0), 1)], int(1)).unwrap();
        assert_eq!(c, int(-1));
        assert_eq!(m.odd_part(), &[ghost(0), ghost(1)]);
        assert!(normalize(&[(ghost(0), 1), (ghost(0), 1)], int(1)).is_none());
        let y = VariableId::even_field(0);
        let (m, c) = normalize(&[(y.clone(), 1), (ghost(0), 1), (y.clone(), 1)], int(3)).unwrap();
        assert_eq!(c, int(3));
        assert_eq!(m.exponent(&y), 2);
        let again = normalize(&[(y.clone(), 2), (ghost(0), 1)], int(3)).unwrap();
        assert_eq!(again, (m, c));
    }

    #[test]
    fn difference_of_squares_with_nilpotent() {
        let y = GradedPoly::var(VariableId::even_field(0));
        let cc = &GradedPoly::var(ghost(0)) * &GradedPoly::var(ghost(1));
        let prod = &(&y + &cc) * &(&y - &cc);
        assert_eq!(prod, &y * &y);
    }
}
