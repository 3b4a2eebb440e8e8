//! Amplitudes `a = a⁰ + ħa¹ + …` whose levels are joint polynomials in
//! `(x, ξ)`, and extraction of their asymptotic symbol.

use super::symbol::FormalSymbol;
use super::xi_poly::XiPolynomial;
use crate::error::{AlgebraError, Result};
use crate::function_algebra::{GaussianRational, MultiIndex};

/// Levels carry no grading restriction.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Amplitude {
    dim: usize,
    levels: Vec<XiPolynomial>,
}

impl Amplitude {
    pub fn new(levels: Vec<XiPolynomial>) -> Result<Self> {
        let dim = levels.first().map(XiPolynomial::dim).ok_or_else(|| {
            AlgebraError::InvalidDegree("amplitude needs at least one level".into())
        })?;
        if let Some(bad) = levels.iter().find(|l| l.dim() != dim) {
            return Err(AlgebraError::DimensionMismatch {
                expected: dim,
                found: bad.dim(),
            });
        }
        Ok(Self { dim, levels })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn order(&self) -> usize {
        self.levels.len() - 1
    }

    pub fn level(&self, n: usize) -> &XiPolynomial {
        &self.levels[n]
    }

    /// Inverse of [`Amplitude::asymptotic_symbol`] on graded symbols: the
    /// term `f ξ^α` at symbol level `n` moves to amplitude level `n - |α|`.
    pub fn from_symbol(p: &FormalSymbol) -> Self {
        let dim = p.dim();
        let mut levels = vec![XiPolynomial::zero(dim); p.order() + 1];
        for (n, level) in p.levels().iter().enumerate() {
            for (alpha, f) in level.terms() {
                levels[n - alpha.degree() as usize].add_term(alpha.clone(), f);
            }
        }
        Self { dim, levels }
    }

    /// `Pⁿ = Σ_{|α|≤n} (1/α!) (∂_ξ^α a^{n-|α|})(x, 0) ξ^α` for `n ≤ order`.
    pub fn asymptotic_symbol(&self, order: usize) -> Result<FormalSymbol> {
        if self.order() < order {
            return Err(AlgebraError::OrderMismatch {
                left: self.order(),
                right: order,
            });
        }
        let mut levels = Vec::with_capacity(order + 1);
        for n in 0..=order {
            let mut level = XiPolynomial::zero(self.dim);
            for alpha in MultiIndex::all_up_to(self.dim, n as u32) {
                let source = &self.levels[n - alpha.degree() as usize];
                if source.is_zero() {
                    continue;
                }
                let taylor = source.xi_partial(&alpha).at_xi_zero();
                if taylor.is_zero() {
                    continue;
                }
                let inv_fact =
                    GaussianRational::from_ratio(1, alpha.factorial() as i64);
                level.add_term(alpha, &taylor.scale(&inv_fact));
            }
            levels.push(level);
        }
        FormalSymbol::from_levels(levels)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::function_algebra::PolyFunction;

    fn x() -> PolyFunction {
        PolyFunction::var(1, 0)
    }

    #[test]
    fn xi_free_amplitude_is_its_own_symbol() {
        let a0 = &x() + &PolyFunction::one(1);
        let amp = Amplitude::new(vec![XiPolynomial::from_poly(a0.clone()), XiPolynomial::zero(1)])
            .unwrap();
        let p = amp.asymptotic_symbol(1).unwrap();
        assert_eq!(p, FormalSymbol::from_poly(a0, 1));
    }

    #[test]
    fn linear_xi_shifts_up_one_level() {
        let amp = Amplitude::new(vec![XiPolynomial::xi(1, 0), XiPolynomial::zero(1), XiPolynomial::zero(1)])
            .unwrap();
        let p = amp.asymptotic_symbol(2).unwrap();
        assert!(p.level(0).is_zero());
        assert_eq!(p.level(1), &XiPolynomial::xi(1, 0));
        assert!(p.level(2).is_zero());
    }

    #[test]
    fn x_xi_squared_example() {
        let a0 = XiPolynomial::monomial(MultiIndex(vec![2]), x());
        let a1 = XiPolynomial::from_poly(x());
        let amp = Amplitude::new(vec![a0.clone(), a1, XiPolynomial::zero(1)]).unwrap();
        let p = amp.asymptotic_symbol(2).unwrap();
        assert!(p.level(0).is_zero());
        assert_eq!(p.level(1), &XiPolynomial::from_poly(x()));
        assert_eq!(p.level(2), &a0);
    }

    #[test]
    fn multinomial_factorial_in_two_dimensions() {
        // a⁰ = ξ₁ξ₂: Taylor coefficient with 1/α! = 1, giving P² = ξ₁ξ₂.
        let a0 = XiPolynomial::monomial(MultiIndex(vec![1, 1]), PolyFunction::one(2));
        let amp = Amplitude::new(vec![a0.clone(), XiPolynomial::zero(2), XiPolynomial::zero(2)])
            .unwrap();
        assert_eq!(amp.asymptotic_symbol(2).unwrap().level(2), &a0);
    }

    #[test]
    fn too_short_amplitude_rejected() {
        let amp = Amplitude::new(vec![XiPolynomial::one(1)]).unwrap();
        assert!(amp.asymptotic_symbol(2).is_err());
    }
}
