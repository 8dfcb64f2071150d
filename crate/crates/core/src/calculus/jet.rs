use crate::algebra::{GradedPoly, Monomial, MultiIndex, VariableId};
use crate::{Error, Result};

/// Default cap on the jet order of any generator produced by a computation.
pub const DEFAULT_MAX_JET_ORDER: usize = 10;

/// Environment variable overriding [`DEFAULT_MAX_JET_ORDER`].
pub const MAX_JET_ORDER_ENV: &str = "JETVAR_MAX_JET_ORDER";

/// The base dimension together with the jet-order cap.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct JetSpace {
    dim: usize,
    max_order: usize,
}

impl JetSpace {
    /// A jet space over an `n`-dimensional base, with the cap read from the
    /// environment or defaulted.
    pub fn new(dim: usize) -> Self {
        assert!(dim >= 1, "base dimension must be positive");
        let max_order = std::env::var(MAX_JET_ORDER_ENV)
            .ok()
            .and_then(|s| s.trim().parse().ok())
            .unwrap_or(DEFAULT_MAX_JET_ORDER);
        JetSpace { dim, max_order }
    }

    pub fn with_max_order(mut self, max_order: usize) -> Self {
        self.max_order = max_order;
        self
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn max_order(&self) -> usize {
        self.max_order
    }

    fn prolong_checked(&self, v: &VariableId, lambda: usize) -> Result<VariableId> {
        let order = v.jet_order() + 1;
        if order > self.max_order {
            return Err(Error::JetOrderExceeded {
                order,
                cap: self.max_order,
            });
        }
        Ok(v.prolong(lambda))
    }

    /// `d_λ p`, an even derivation with `d_λ x^μ = δ^μ_λ` and `d_λ s_Λ = s_{λ+Λ}`.
    pub fn total_derivative(&self, p: &GradedPoly, lambda: usize) -> Result<GradedPoly> {
        assert!(lambda < self.dim, "base index {lambda} out of range");
        let mut out = GradedPoly::zero();
        for (m, c) in p.terms() {
            for v in m.variables() {
                let (k, negate, rest) = m.left_derivative(v).expect("variable occurs");
                let coeff = if negate { -c.clone() } else { c.clone() } * crate::algebra::int(k);
                if v.is_coordinate() {
                    if v.slot() as usize == lambda {
                        out.add_term(rest, coeff);
                    }
                    continue;
                }
                let lifted = Monomial::var(self.prolong_checked(v, lambda)?);
                if let Some((neg, prod)) = lifted.mul(&rest) {
                    out.add_term(prod, if neg { -coeff } else { coeff });
                }
            }
        }
        Ok(out)
    }

    /// `d_Λ p`, applied one index at a time.
    pub fn iterated_total(&self, p: &GradedPoly, multi: &MultiIndex) -> Result<GradedPoly> {
        let mut acc = p.clone();
        for lambda in multi.indices() {
            if acc.is_zero() {
                break;
            }
            acc = self.total_derivative(&acc, lambda)?;
        }
        Ok(acc)
    }

    /// Left graded partial `∂/∂v`.
    pub fn partial(&self, p: &GradedPoly, v: &VariableId) -> GradedPoly {
        p.left_partial(v)
    }

    /// Right graded partial `∂⃖/∂v`.
    pub fn right_partial(&self, p: &GradedPoly, v: &VariableId) -> GradedPoly {
        p.right_partial(v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{int, Grading, Parity, VarKind};

    fn ghost(slot: u32) -> VariableId {
        VariableId::new(VarKind::Ghost, slot, Grading::new(Parity::Odd, 1, 0))
    }

    #[test]
    fn first_jets_and_coordinates() {
        let js = JetSpace::new(2);
        let y = VariableId::even_field(0);
        let p = GradedPoly::var(y.clone());
        assert_eq!(js.total_derivative(&p, 1).unwrap(), GradedPoly::var(y.prolong(1)));
        let x1 = GradedPoly::var(VariableId::coordinate(1));
        assert_eq!(js.total_derivative(&x1, 1).unwrap(), GradedPoly::one());
        assert!(js.total_derivative(&x1, 0).unwrap().is_zero());
    }

    #[test]
    fn odd_leibniz() {
        let js = JetSpace::new(1);
        let (a, b) = (ghost(0), ghost(1));
        let ab = &GradedPoly::var(a.clone()) * &GradedPoly::var(b.clone());
        let expect = &(&GradedPoly::var(a.prolong(0)) * &GradedPoly::var(b.clone()))
            + &(&GradedPoly::var(a) * &GradedPoly::var(b.prolong(0)));
        assert_eq!(js.total_derivative(&ab, 0).unwrap(), expect);
    }

    #[test]
    fn second_derivative_of_square() {
        let js = JetSpace::new(1);
        let y = VariableId::even_field(0);
        let yy = GradedPoly::var(y.clone()).pow(2);
        let got = js.iterated_total(&yy, &MultiIndex::from_indices([0, 0])).unwrap();
        let y0 = GradedPoly::var(y.prolong(0));
        let y00 = GradedPoly::var(y.prolong(0).prolong(0));
        let expect = &y0.pow(2).scale(&int(2)) + &(&GradedPoly::var(y) * &y00).scale(&int(2));
        assert_eq!(got, expect);
    }

    #[test]
    fn cap_is_enforced() {
        let js = JetSpace::new(1).with_max_order(1);
        let y0 = GradedPoly::var(VariableId::even_field(0).prolong(0));
        assert!(matches!(
            js.total_derivative(&y0, 0),
            Err(Error::JetOrderExceeded { order: 2, cap: 1 })
        ));
    }
}
