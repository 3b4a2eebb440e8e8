//! Truncated formal symbols `P = Σ_{n≤N} ħⁿ Pⁿ(x, ξ)` with `deg_ξ Pⁿ ≤ n`,
//! the operators `Op(P, φ)` they define, and the composition law between
//! them.

use std::fmt;

use super::xi_poly::XiPolynomial;
use crate::error::{AlgebraError, Result};
use crate::function_algebra::{AffineDiffeo, GaussianRational, PolyFunction};

/// An element of the symbol space truncated at `ħ^N`. Every level obeys the
/// grading `deg_ξ Pⁿ ≤ n`, so `P⁰` is `ξ`-free.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FormalSymbol {
    dim: usize,
    levels: Vec<XiPolynomial>,
}

/// A truncated formal function `ψ⁰ + ħψ¹ + … + ħ^N ψ^N`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FormalFunction {
    dim: usize,
    levels: Vec<PolyFunction>,
}

impl FormalFunction {
    pub fn new(levels: Vec<PolyFunction>) -> Result<Self> {
        let dim = levels.first().map(PolyFunction::dim).ok_or_else(|| {
            AlgebraError::InvalidDegree("formal function needs at least one level".into())
        })?;
        if let Some(bad) = levels.iter().find(|l| l.dim() != dim) {
            return Err(AlgebraError::DimensionMismatch {
                expected: dim,
                found: bad.dim(),
            });
        }
        Ok(Self { dim, levels })
    }

    /// `ψ` placed at `ħ⁰` and padded with zeros up to order `order`.
    pub fn constant_in_hbar(psi: PolyFunction, order: usize) -> Self {
        let dim = psi.dim();
        let mut levels = vec![psi];
        levels.resize(order + 1, PolyFunction::zero(dim));
        Self { dim, levels }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn order(&self) -> usize {
        self.levels.len() - 1
    }

    pub fn levels(&self) -> &[PolyFunction] {
        &self.levels
    }

    pub fn level(&self, n: usize) -> &PolyFunction {
        &self.levels[n]
    }
}

impl FormalSymbol {
    /// Validates the grading invariant.
    pub fn from_levels(levels: Vec<XiPolynomial>) -> Result<Self> {
        let dim = levels.first().map(XiPolynomial::dim).ok_or_else(|| {
            AlgebraError::InvalidDegree("formal symbol needs at least one level".into())
        })?;
        for (n, level) in levels.iter().enumerate() {
            if level.dim() != dim {
                return Err(AlgebraError::DimensionMismatch {
                    expected: dim,
                    found: level.dim(),
                });
            }
            if let Some(deg) = level.xi_degree() {
                if deg as usize > n {
                    return Err(AlgebraError::GradingViolation {
                        level: n,
                        degree: deg as usize,
                    });
                }
            }
        }
        Ok(Self { dim, levels })
    }

    pub fn zero(dim: usize, order: usize) -> Self {
        Self {
            dim,
            levels: vec![XiPolynomial::zero(dim); order + 1],
        }
    }

    pub fn one(dim: usize, order: usize) -> Self {
        Self::constant(dim, order, GaussianRational::from_integer(1))
    }

    pub fn constant(dim: usize, order: usize, c: GaussianRational) -> Self {
        Self::from_poly(PolyFunction::constant(dim, c), order)
    }

    /// A `ξ`- and `ħ`-independent symbol `f(x)`.
    pub fn from_poly(f: PolyFunction, order: usize) -> Self {
        let mut s = Self::zero(f.dim(), order);
        s.levels[0] = XiPolynomial::from_poly(f);
        s
    }

    /// `ħⁿ p`, erroring if `p` violates the grading at level `n`.
    pub fn homogeneous(p: XiPolynomial, n: usize, order: usize) -> Result<Self> {
        let mut levels = vec![XiPolynomial::zero(p.dim()); order + 1];
        if n > order {
            return Err(AlgebraError::OrderMismatch { left: n, right: order });
        }
        levels[n] = p;
        Self::from_levels(levels)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Truncation order `N`.
    pub fn order(&self) -> usize {
        self.levels.len() - 1
    }

    pub fn levels(&self) -> &[XiPolynomial] {
        &self.levels
    }

    pub fn level(&self, n: usize) -> &XiPolynomial {
        &self.levels[n]
    }

    pub fn is_zero(&self) -> bool {
        self.levels.iter().all(XiPolynomial::is_zero)
    }

    pub fn is_one(&self) -> bool {
        *self == Self::one(self.dim, self.order())
    }

    pub fn is_xi_independent(&self) -> bool {
        self.levels.iter().all(XiPolynomial::is_xi_free)
    }

    pub fn is_hbar_free(&self) -> bool {
        self.levels[1..].iter().all(XiPolynomial::is_zero)
    }

    /// Largest `x`-degree over all levels.
    pub fn x_degree(&self) -> Option<u32> {
        self.levels.iter().filter_map(XiPolynomial::x_degree).max()
    }

    /// Re-truncates (or zero-pads) to `order`.
    pub fn with_order(&self, order: usize) -> Self {
        let mut levels = self.levels.clone();
        levels.resize(order + 1, XiPolynomial::zero(self.dim));
        Self {
            dim: self.dim,
            levels,
        }
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.dim != other.dim {
            return Err(AlgebraError::DimensionMismatch {
                expected: self.dim,
                found: other.dim,
            });
        }
        if self.order() != other.order() {
            return Err(AlgebraError::OrderMismatch {
                left: self.order(),
                right: other.order(),
            });
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        Ok(self.add_unchecked(other, &GaussianRational::from_integer(1)))
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        Ok(self.add_unchecked(other, &GaussianRational::from_integer(-1)))
    }

    fn add_unchecked(&self, other: &Self, c: &GaussianRational) -> Self {
        let levels = self
            .levels
            .iter()
            .zip(&other.levels)
            .map(|(a, b)| {
                let mut s = a.clone();
                s.add_scaled(b, c);
                s
            })
            .collect();
        Self {
            dim: self.dim,
            levels,
        }
    }

    /// `self += c · other`; both must share dimension and order.
    pub fn add_scaled(&mut self, other: &Self, c: &GaussianRational) {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        assert_eq!(self.order(), other.order(), "order mismatch");
        for (a, b) in self.levels.iter_mut().zip(&other.levels) {
            a.add_scaled(b, c);
        }
    }

    pub fn scale(&self, c: &GaussianRational) -> Self {
        Self {
            dim: self.dim,
            levels: self.levels.iter().map(|l| l.scale(c)).collect(),
        }
    }

    /// `Op(P, φ)ψ = Σ_m ħ^m Σ_{n+k=m} Σ_α f^n_α(x) · (D^α ψ^k)(φ⁻¹(x))`.
    ///
    /// The coefficients `f_α` are evaluated at `x`, only the differentiated
    /// argument is pulled back. The result is truncated at the smaller of
    /// the two orders.
    pub fn op_apply(&self, phi: &AffineDiffeo, psi: &FormalFunction) -> Result<FormalFunction> {
        if psi.dim() != self.dim || phi.dim() != self.dim {
            return Err(AlgebraError::DimensionMismatch {
                expected: self.dim,
                found: if psi.dim() != self.dim { psi.dim() } else { phi.dim() },
            });
        }
        let order = self.order().min(psi.order());
        let inv = phi.invert();
        let mut out = vec![PolyFunction::zero(self.dim); order + 1];
        for (n, level) in self.levels.iter().enumerate().take(order + 1) {
            for (k, psi_k) in psi.levels().iter().enumerate().take(order + 1 - n) {
                for (alpha, f_alpha) in level.terms() {
                    let dpsi = psi_k
                        .partial_multi(alpha)?
                        .scale(&GaussianRational::minus_i_pow(alpha.degree() as usize));
                    if dpsi.is_zero() {
                        continue;
                    }
                    let pulled = dpsi.compose_affine(&inv)?;
                    out[n + k] = &out[n + k] + &(f_alpha * &pulled);
                }
            }
        }
        FormalFunction::new(out)
    }

    /// The symbol `P φ₁⋆φ₂ K` with `Op(P,φ₁)∘Op(K,φ₂) = Op(P⋆K, φ₁∘φ₂)`.
    ///
    /// Writing `Op(P, φ) = T_φ ∘ Q_P` with `T_φψ = ψ∘φ⁻¹` and `Q_P` the
    /// differential operator with coefficients `f_α∘φ`, the composite is
    /// `T_{φ₁φ₂} ∘ (Q̃_P ∘ Q_K)` where `Q̃_P` is `Q_P` conjugated past
    /// `T_{φ₂}`. Level `m` is `Σ_{n+k=m}` of the level products; the
    /// coefficients are finally moved back by `(φ₁φ₂)⁻¹`.
    pub fn star_compose(
        &self,
        phi1: &AffineDiffeo,
        other: &Self,
        phi2: &AffineDiffeo,
    ) -> Result<Self> {
        self.check_compatible(other)?;
        if phi1.dim() != self.dim || phi2.dim() != self.dim {
            return Err(AlgebraError::DimensionMismatch {
                expected: self.dim,
                found: if phi1.dim() != self.dim { phi1.dim() } else { phi2.dim() },
            });
        }
        let order = self.order();
        let left: Vec<XiPolynomial> = self
            .levels
            .iter()
            .map(|p| p.pull_coefficients(phi1)?.conjugate_by_diffeo(phi2))
            .collect::<Result<_>>()?;
        let right: Vec<XiPolynomial> = other
            .levels
            .iter()
            .map(|k| k.pull_coefficients(phi2))
            .collect::<Result<_>>()?;
        let back = phi1.compose(phi2)?.invert();
        let mut levels = Vec::with_capacity(order + 1);
        for m in 0..=order {
            let mut acc = XiPolynomial::zero(self.dim);
            for n in 0..=m {
                if left[n].is_zero() || right[m - n].is_zero() {
                    continue;
                }
                let prod = left[n].compose(&right[m - n])?;
                acc.add_scaled(&prod, &GaussianRational::from_integer(1));
            }
            levels.push(acc.pull_coefficients(&back)?);
        }
        Self::from_levels(levels)
    }

    /// Star product at `φ₁ = φ₂ = id`: the standard composition.
    pub fn star(&self, other: &Self) -> Result<Self> {
        let id = AffineDiffeo::identity(self.dim);
        self.star_compose(&id, other, &id)
    }

    /// Two-sided inverse for `⋆` at the identity diffeomorphism. Requires
    /// `u⁰` to be a nonzero constant.
    pub fn invert_unit(&self) -> Result<Self> {
        let lead = self.levels[0].xi_free_part();
        if !self.levels[0].is_xi_free() || !lead.is_constant() || lead.is_zero() {
            return Err(AlgebraError::NotInvertible(format!(
                "leading term {} is not a nonzero constant",
                self.levels[0]
            )));
        }
        let c_inv = lead.constant_term().inverse()?;
        let neg_c_inv = -&c_inv;
        let mut inv = vec![XiPolynomial::constant(self.dim, c_inv)];
        for m in 1..=self.order() {
            let mut acc = XiPolynomial::zero(self.dim);
            for n in 1..=m {
                if self.levels[n].is_zero() || inv[m - n].is_zero() {
                    continue;
                }
                let prod = self.levels[n].compose(&inv[m - n])?;
                acc.add_scaled(&prod, &GaussianRational::from_integer(1));
            }
            inv.push(acc.scale(&neg_c_inv));
        }
        let inv = Self::from_levels(inv)?;
        let one = Self::one(self.dim, self.order());
        if self.star(&inv)? != one || inv.star(self)? != one {
            return Err(AlgebraError::Inconsistent(
                "unit inverse failed verification".into(),
            ));
        }
        Ok(inv)
    }
}

impl fmt::Display for FormalSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut wrote = false;
        for (n, level) in self.levels.iter().enumerate() {
            if level.is_zero() {
                continue;
            }
            if wrote {
                write!(f, " + ")?;
            }
            wrote = true;
            match n {
                0 => write!(f, "[{level}]")?,
                1 => write!(f, "h*[{level}]")?,
                _ => write!(f, "h^{n}*[{level}]")?,
            }
        }
        if !wrote {
            write!(f, "0")?;
        }
        write!(f, " + O(h^{})", self.order() + 1)
    }
}

impl fmt::Debug for FormalSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FormalSymbol[d={}]({})", self.dim, self)
    }
}
