//! Polynomials in `ξ` with polynomial coefficients in `x`, read as
//! differential operators `P(x, D) = Σ f_α(x) D^α` with `D_j = -i ∂_j`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use crate::function_algebra::affine::{transpose, Matrix};
use crate::function_algebra::{AffineDiffeo, GaussianRational, MultiIndex, PolyFunction, PowerTable};
use crate::error::{AlgebraError, Result};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct XiPolynomial {
    dim: usize,
    terms: BTreeMap<MultiIndex, PolyFunction>,
}

impl XiPolynomial {
    pub fn zero(dim: usize) -> Self {
        Self {
            dim,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(dim: usize) -> Self {
        Self::from_poly(PolyFunction::one(dim))
    }

    /// A `ξ`-free symbol.
    pub fn from_poly(f: PolyFunction) -> Self {
        Self::monomial(MultiIndex::zero(f.dim()), f)
    }

    pub fn constant(dim: usize, c: GaussianRational) -> Self {
        Self::from_poly(PolyFunction::constant(dim, c))
    }

    /// `f(x) ξ^alpha`.
    pub fn monomial(alpha: MultiIndex, f: PolyFunction) -> Self {
        let mut p = Self::zero(f.dim());
        p.add_term(alpha, &f);
        p
    }

    /// `ξ_axis`.
    pub fn xi(dim: usize, axis: usize) -> Self {
        Self::monomial(MultiIndex::unit(dim, axis), PolyFunction::one(dim))
    }

    pub fn from_terms<I>(dim: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (MultiIndex, PolyFunction)>,
    {
        let mut p = Self::zero(dim);
        for (alpha, f) in terms {
            if alpha.dim() != dim || f.dim() != dim {
                return Err(AlgebraError::DimensionMismatch {
                    expected: dim,
                    found: if alpha.dim() != dim { alpha.dim() } else { f.dim() },
                });
            }
            p.add_term(alpha, &f);
        }
        Ok(p)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, &PolyFunction)> {
        self.terms.iter()
    }

    pub fn coeff(&self, alpha: &MultiIndex) -> PolyFunction {
        self.terms
            .get(alpha)
            .cloned()
            .unwrap_or_else(|| PolyFunction::zero(self.dim))
    }

    /// `max |α|` over nonzero `f_α`; `None` for zero.
    pub fn xi_degree(&self) -> Option<u32> {
        self.terms.keys().map(MultiIndex::degree).max()
    }

    /// Largest total `x`-degree among the coefficients.
    pub fn x_degree(&self) -> Option<u32> {
        self.terms.values().filter_map(PolyFunction::degree).max()
    }

    pub fn is_xi_free(&self) -> bool {
        self.terms.keys().all(MultiIndex::is_zero)
    }

    /// The `ξ⁰` coefficient.
    pub fn xi_free_part(&self) -> PolyFunction {
        self.coeff(&MultiIndex::zero(self.dim))
    }

    pub fn add_term(&mut self, alpha: MultiIndex, f: &PolyFunction) {
        assert_eq!(f.dim(), self.dim, "dimension mismatch");
        if f.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(alpha) {
            Entry::Vacant(v) => {
                v.insert(f.clone());
            }
            Entry::Occupied(mut o) => {
                o.get_mut().add_scaled(f, &GaussianRational::one());
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add_scaled(&mut self, other: &Self, c: &GaussianRational) {
        if c.is_zero() {
            return;
        }
        for (alpha, f) in &other.terms {
            self.add_term(alpha.clone(), &f.scale(c));
        }
    }

    pub fn scale(&self, c: &GaussianRational) -> Self {
        let mut out = Self::zero(self.dim);
        out.add_scaled(self, c);
        out
    }

    /// Pointwise product of symbols (as functions of `(x, ξ)`).
    pub fn mul_symbol(&self, other: &Self) -> Self {
        let mut out = Self::zero(self.dim);
        for (a1, f1) in &self.terms {
            for (a2, f2) in &other.terms {
                out.add_term(a1.add(a2), &(f1 * f2));
            }
        }
        out
    }

    /// `∂_ξ^alpha`.
    pub fn xi_partial(&self, alpha: &MultiIndex) -> Self {
        let mut out = Self::zero(self.dim);
        'terms: for (a, f) in &self.terms {
            let mut c = GaussianRational::one();
            let mut rest = a.clone();
            for (j, &k) in alpha.0.iter().enumerate() {
                if rest.0[j] < k {
                    continue 'terms;
                }
                for t in 0..k {
                    c = &c * &GaussianRational::from_integer((rest.0[j] - t) as i64);
                }
                rest.0[j] -= k;
            }
            out.add_term(rest, &f.scale(&c));
        }
        out
    }

    /// `∂_x^alpha`, applied to every coefficient.
    pub fn x_partial(&self, alpha: &MultiIndex) -> Self {
        let mut out = Self::zero(self.dim);
        for (a, f) in &self.terms {
            let df = f.partial_multi(alpha).expect("dimension checked");
            out.add_term(a.clone(), &df);
        }
        out
    }

    /// Evaluates at `ξ = 0`.
    pub fn at_xi_zero(&self) -> PolyFunction {
        self.xi_free_part()
    }

    /// `P(x, D) f = Σ_α f_α (-i)^{|α|} ∂^α f`.
    pub fn apply(&self, f: &PolyFunction) -> Result<PolyFunction> {
        if f.dim() != self.dim {
            return Err(AlgebraError::DimensionMismatch {
                expected: self.dim,
                found: f.dim(),
            });
        }
        let mut out = PolyFunction::zero(self.dim);
        for (alpha, coeff) in &self.terms {
            let df = f.partial_multi(alpha)?;
            if df.is_zero() {
                continue;
            }
            let df = df.scale(&GaussianRational::minus_i_pow(alpha.degree() as usize));
            out = &out + &(coeff * &df);
        }
        Ok(out)
    }

    /// Precomposes every coefficient with `φ`: `f_α ↦ f_α ∘ φ`.
    pub fn pull_coefficients(&self, phi: &AffineDiffeo) -> Result<Self> {
        if phi.is_identity() {
            return Ok(self.clone());
        }
        let table = PowerTable::for_affine(phi, self.x_degree().unwrap_or(0));
        let mut out = Self::zero(self.dim);
        for (alpha, f) in &self.terms {
            out.add_term(alpha.clone(), &table.apply(f)?);
        }
        Ok(out)
    }

    /// `P(x, M ξ)` for a constant matrix `M`.
    pub fn substitute_xi(&self, m: &Matrix) -> Result<Self> {
        let d = self.dim;
        if m.len() != d {
            return Err(AlgebraError::DimensionMismatch {
                expected: d,
                found: m.len(),
            });
        }
        // (M ξ)_j as linear forms in ξ, reusing the x-polynomial machinery.
        let forms: Vec<PolyFunction> = m
            .iter()
            .map(|row| {
                let mut f = PolyFunction::zero(d);
                for (k, entry) in row.iter().enumerate() {
                    f.add_scaled(&PolyFunction::var(d, k), entry);
                }
                f
            })
            .collect();
        let table = PowerTable::new(&forms, self.xi_degree().unwrap_or(0));
        let mut out = Self::zero(d);
        for (alpha, f) in &self.terms {
            let expanded = table.apply(&PolyFunction::monomial(alpha.clone(), GaussianRational::one()))?;
            for (gamma, c) in expanded.terms() {
                out.add_term(gamma.clone(), &f.scale(c));
            }
        }
        Ok(out)
    }

    /// The symbol `P̃(y, ξ) = P(φ(y), Cᵀ ξ)` satisfying
    /// `P(x, D) ∘ T_φ = T_φ ∘ P̃(y, D)` where `T_φ ψ = ψ ∘ φ⁻¹`.
    pub fn conjugate_by_diffeo(&self, phi: &AffineDiffeo) -> Result<Self> {
        if phi.dim() != self.dim {
            return Err(AlgebraError::DimensionMismatch {
                expected: self.dim,
                found: phi.dim(),
            });
        }
        if phi.is_identity() {
            return Ok(self.clone());
        }
        let pulled = self.pull_coefficients(phi)?;
        if phi.is_linear_identity() {
            return Ok(pulled);
        }
        pulled.substitute_xi(&transpose(phi.inverse_matrix()))
    }

    /// Symbol of `P(x, D) ∘ K(x, D)`:
    /// `Σ_α (1/α!) ∂_ξ^α P · (-i)^{|α|} ∂_x^α K`.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        if other.dim != self.dim {
            return Err(AlgebraError::DimensionMismatch {
                expected: self.dim,
                found: other.dim,
            });
        }
        let mut out = Self::zero(self.dim);
        let Some(max) = self.xi_degree() else {
            return Ok(out);
        };
        for alpha in MultiIndex::all_up_to(self.dim, max) {
            let dp = self.xi_partial(&alpha);
            if dp.is_zero() {
                continue;
            }
            let dk = other.x_partial(&alpha);
            if dk.is_zero() {
                continue;
            }
            let factor = &GaussianRational::minus_i_pow(alpha.degree() as usize)
                / &GaussianRational::from_integer(alpha.factorial() as i64);
            out.add_scaled(&dp.mul_symbol(&dk), &factor);
        }
        Ok(out)
    }
}

impl fmt::Display for XiPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (alpha, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({c})")?;
            for (j, &e) in alpha.0.iter().enumerate() {
                match e {
                    0 => {}
                    1 => write!(f, "*xi{}", j + 1)?,
                    _ => write!(f, "*xi{}^{}", j + 1, e)?,
                }
            }
        }
        Ok(())
    }
}

impl fmt::Debug for XiPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "XiPolynomial[d={}]({})", self.dim, self)
    }
}

impl<'a> Add<&'a XiPolynomial> for &'a XiPolynomial {
    type Output = XiPolynomial;
    fn add(self, rhs: &XiPolynomial) -> XiPolynomial {
        let mut out = self.clone();
        out.add_scaled(rhs, &GaussianRational::one());
        out
    }
}

impl<'a> Sub<&'a XiPolynomial> for &'a XiPolynomial {
    type Output = XiPolynomial;
    fn sub(self, rhs: &XiPolynomial) -> XiPolynomial {
        let mut out = self.clone();
        out.add_scaled(rhs, &-GaussianRational::one());
        out
    }
}

impl<'a> Mul<&'a XiPolynomial> for &'a XiPolynomial {
    type Output = XiPolynomial;
    fn mul(self, rhs: &XiPolynomial) -> XiPolynomial {
        self.mul_symbol(rhs)
    }
}

impl Neg for &XiPolynomial {
    type Output = XiPolynomial;
    fn neg(self) -> XiPolynomial {
        self.scale(&-GaussianRational::one())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x() -> PolyFunction {
        PolyFunction::var(1, 0)
    }

    fn c(n: i64) -> GaussianRational {
        n.into()
    }

    fn xpow(k: u32) -> PolyFunction {
        x().pow(k)
    }

    fn xi() -> XiPolynomial {
        XiPolynomial::xi(1, 0)
    }

    #[test]
    fn diff_op_apply_examples() {
        // ξ x² = -i ∂ x² = -2i x
        let got = xi().apply(&xpow(2)).unwrap();
        assert_eq!(got, x().scale(&(&GaussianRational::i() * &c(-2))));
        let f = &xpow(3) + &PolyFunction::one(1);
        assert_eq!(XiPolynomial::one(1).apply(&f).unwrap(), f);
        // ξ² x³ = (-i)² 6x = -6x
        assert_eq!(xi().mul_symbol(&xi()).apply(&xpow(3)).unwrap(), x().scale(&c(-6)));
    }

    #[test]
    fn compose_examples() {
        // ξ ∘ x = xξ - i
        let k = XiPolynomial::from_poly(x());
        let got = xi().compose(&k).unwrap();
        let want = &XiPolynomial::monomial(MultiIndex(vec![1]), x())
            - &XiPolynomial::constant(1, GaussianRational::i());
        assert_eq!(got, want);
        let one = XiPolynomial::one(1);
        assert_eq!(one.compose(&k).unwrap(), k);
        assert_eq!(k.compose(&one).unwrap(), k);
        assert_eq!(xi().compose(&xi()).unwrap(), xi().mul_symbol(&xi()));
    }

    /// Applying `P∘K` to `x^m` must match applying `K` then `P`.
    #[test]
    fn compose_matches_operator_application() {
        let p = &XiPolynomial::monomial(MultiIndex(vec![2]), x()) + &xi();
        let k = &XiPolynomial::monomial(MultiIndex(vec![1]), xpow(2))
            + &XiPolynomial::from_poly(&x() + &PolyFunction::constant(1, GaussianRational::i()));
        let pk = p.compose(&k).unwrap();
        for m in 0..=5 {
            let f = xpow(m);
            assert_eq!(pk.apply(&f).unwrap(), p.apply(&k.apply(&f).unwrap()).unwrap());
        }
    }

    #[test]
    fn conjugate_examples() {
        let id = AffineDiffeo::identity(1);
        let p = XiPolynomial::monomial(MultiIndex(vec![1]), x());
        assert_eq!(p.conjugate_by_diffeo(&id).unwrap(), p);

        let reflect = AffineDiffeo::scalar(c(-1), c(0)).unwrap();
        assert_eq!(xi().conjugate_by_diffeo(&reflect).unwrap(), xi().scale(&c(-1)));

        let dilate = AffineDiffeo::scalar(c(2), c(0)).unwrap();
        assert_eq!(p.conjugate_by_diffeo(&dilate).unwrap(), p);
    }

    /// Contract: `P(x,D)(ψ∘φ⁻¹) = (P̃(y,D)ψ)∘φ⁻¹`.
    #[test]
    fn conjugate_contract_on_monomials() {
        let phi = AffineDiffeo::new(
            vec![vec![c(1), c(2)], vec![c(0), c(-1)]],
            vec![c(3), GaussianRational::from_ratio(1, 2)],
        )
        .unwrap();
        let d = 2;
        let p = XiPolynomial::from_terms(
            d,
            vec![
                (MultiIndex(vec![1, 1]), PolyFunction::var(d, 0)),
                (MultiIndex(vec![0, 2]), PolyFunction::one(d)),
                (MultiIndex(vec![1, 0]), PolyFunction::var(d, 1)),
            ],
        )
        .unwrap();
        let pt = p.conjugate_by_diffeo(&phi).unwrap();
        let inv = phi.invert();
        for beta in MultiIndex::all_up_to(d, 3) {
            let psi = PolyFunction::monomial(beta, c(1));
            let lhs = p.apply(&psi.compose_affine(&inv).unwrap()).unwrap();
            let rhs = pt.apply(&psi).unwrap().compose_affine(&inv).unwrap();
            assert_eq!(lhs, rhs);
        }
    }
}
