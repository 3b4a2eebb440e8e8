//! Multivariate polynomials in `x ∈ R^d` over `Q(i)`.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::affine::AffineDiffeo;
use super::scalar::GaussianRational;
use crate::error::{AlgebraError, Result};

/// Exponent vector. Ordered graded-lexicographically: total degree first,
/// then lexicographically on the exponents.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct MultiIndex(pub Vec<u32>);

impl MultiIndex {
    pub fn zero(dim: usize) -> Self {
        Self(vec![0; dim])
    }

    pub fn unit(dim: usize, axis: usize) -> Self {
        let mut e = vec![0; dim];
        e[axis] = 1;
        Self(e)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn add(&self, other: &Self) -> Self {
        Self(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// `α!` = product of the componentwise factorials.
    pub fn factorial(&self) -> u64 {
        self.0
            .iter()
            .map(|&e| (1..=e as u64).product::<u64>())
            .product()
    }

    /// All multi-indices of dimension `dim` with total degree `≤ max_deg`,
    /// in graded-lex order.
    pub fn all_up_to(dim: usize, max_deg: u32) -> Vec<Self> {
        let mut out = Vec::new();
        for deg in 0..=max_deg {
            let mut cur = vec![0u32; dim];
            fill_degree(&mut out, &mut cur, 0, deg);
        }
        out.sort();
        out
    }

    /// Multi-indices `γ ≤ self` componentwise.
    pub fn divisors(&self) -> Vec<Self> {
        let mut out = vec![Vec::with_capacity(self.dim())];
        for &e in &self.0 {
            out = out
                .into_iter()
                .flat_map(|prefix| {
                    (0..=e).map(move |k| {
                        let mut p = prefix.clone();
                        p.push(k);
                        p
                    })
                })
                .collect();
        }
        out.into_iter().map(Self).collect()
    }
}

fn fill_degree(out: &mut Vec<MultiIndex>, cur: &mut Vec<u32>, pos: usize, remaining: u32) {
    if cur.is_empty() {
        if remaining == 0 {
            out.push(MultiIndex(Vec::new()));
        }
        return;
    }
    if pos == cur.len() - 1 {
        cur[pos] = remaining;
        out.push(MultiIndex(cur.clone()));
        cur[pos] = 0;
        return;
    }
    for k in 0..=remaining {
        cur[pos] = k;
        fill_degree(out, cur, pos + 1, remaining - k);
    }
    cur[pos] = 0;
}

impl Ord for MultiIndex {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for MultiIndex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A polynomial function on `R^d`. Zero coefficients are never stored.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PolyFunction {
    dim: usize,
    terms: BTreeMap<MultiIndex, GaussianRational>,
}

impl PolyFunction {
    pub fn zero(dim: usize) -> Self {
        Self {
            dim,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(dim: usize) -> Self {
        Self::constant(dim, GaussianRational::one())
    }

    pub fn constant(dim: usize, c: GaussianRational) -> Self {
        Self::monomial(MultiIndex::zero(dim), c)
    }

    pub fn monomial(beta: MultiIndex, c: GaussianRational) -> Self {
        let mut p = Self::zero(beta.dim());
        if !c.is_zero() {
            p.terms.insert(beta, c);
        }
        p
    }

    /// The coordinate function `x_axis` (0-based).
    pub fn var(dim: usize, axis: usize) -> Self {
        Self::monomial(MultiIndex::unit(dim, axis), GaussianRational::one())
    }

    /// Builds from `(exponents, coefficient)` pairs, merging duplicates.
    pub fn from_terms<I>(dim: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vec<u32>, GaussianRational)>,
    {
        let mut p = Self::zero(dim);
        for (beta, c) in terms {
            if beta.len() != dim {
                return Err(AlgebraError::DimensionMismatch {
                    expected: dim,
                    found: beta.len(),
                });
            }
            p.add_term(MultiIndex(beta), &c);
        }
        Ok(p)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, &GaussianRational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, beta: &MultiIndex) -> GaussianRational {
        self.terms.get(beta).cloned().unwrap_or_default()
    }

    /// Total degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(MultiIndex::degree).max()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(MultiIndex::is_zero)
    }

    pub fn constant_term(&self) -> GaussianRational {
        self.coeff(&MultiIndex::zero(self.dim))
    }

    /// Adds `c · x^beta` in place.
    pub fn add_term(&mut self, beta: MultiIndex, c: &GaussianRational) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(beta) {
            Entry::Vacant(v) => {
                v.insert(c.clone());
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    /// `self += c · other`.
    pub fn add_scaled(&mut self, other: &Self, c: &GaussianRational) {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        if c.is_zero() {
            return;
        }
        if c.is_one() {
            for (beta, v) in &other.terms {
                self.add_term(beta.clone(), v);
            }
            return;
        }
        for (beta, v) in &other.terms {
            self.add_term(beta.clone(), &(v * c));
        }
    }

    pub fn scale(&self, c: &GaussianRational) -> Self {
        if c.is_zero() {
            return Self::zero(self.dim);
        }
        Self {
            dim: self.dim,
            terms: self
                .terms
                .iter()
                .map(|(b, v)| (b.clone(), v * c))
                .collect(),
        }
    }

    fn check_dim(&self, other: &Self) -> Result<()> {
        if self.dim != other.dim {
            return Err(AlgebraError::DimensionMismatch {
                expected: self.dim,
                found: other.dim,
            });
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        let mut out = self.clone();
        for (beta, v) in &other.terms {
            out.add_term(beta.clone(), v);
        }
        Ok(out)
    }

    /// Exact product.
    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        let mut out = Self::zero(self.dim);
        for (b1, c1) in &self.terms {
            for (b2, c2) in &other.terms {
                out.add_term(b1.add(b2), &(c1 * c2));
            }
        }
        Ok(out)
    }

    /// `∂f/∂x_axis` (0-based axis).
    pub fn partial(&self, axis: usize) -> Result<Self> {
        if axis >= self.dim {
            return Err(AlgebraError::AxisOutOfRange {
                axis,
                dim: self.dim,
            });
        }
        let mut out = Self::zero(self.dim);
        for (beta, c) in &self.terms {
            let e = beta.0[axis];
            if e == 0 {
                continue;
            }
            let mut b = beta.clone();
            b.0[axis] -= 1;
            out.add_term(b, &(c * &GaussianRational::from_integer(e as i64)));
        }
        Ok(out)
    }

    /// `∂^alpha f`.
    pub fn partial_multi(&self, alpha: &MultiIndex) -> Result<Self> {
        self.check_dim(&Self::zero(alpha.dim()))?;
        let mut out = Self::zero(self.dim);
        'terms: for (beta, c) in &self.terms {
            let mut coeff = c.clone();
            let mut b = beta.clone();
            for (j, &a) in alpha.0.iter().enumerate() {
                if b.0[j] < a {
                    continue 'terms;
                }
                for t in 0..a {
                    coeff = &coeff * &GaussianRational::from_integer((b.0[j] - t) as i64);
                }
                b.0[j] -= a;
            }
            out.add_term(b, &coeff);
        }
        Ok(out)
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::one(self.dim);
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// Substitutes `x_j ↦ forms[j]`. The forms may live in a different
    /// dimension than `self`; the result lives in theirs.
    pub fn substitute(&self, forms: &[PolyFunction]) -> Result<Self> {
        if forms.len() != self.dim {
            return Err(AlgebraError::DimensionMismatch {
                expected: self.dim,
                found: forms.len(),
            });
        }
        PowerTable::new(forms, self.degree().unwrap_or(0)).apply(self)
    }

    /// `f ∘ φ`, i.e. `x ↦ f(A x + b)`. Total degree is preserved because
    /// `A` is invertible.
    pub fn compose_affine(&self, phi: &AffineDiffeo) -> Result<Self> {
        if phi.dim() != self.dim {
            return Err(AlgebraError::DimensionMismatch {
                expected: self.dim,
                found: phi.dim(),
            });
        }
        if phi.is_identity() {
            return Ok(self.clone());
        }
        PowerTable::for_affine(phi, self.degree().unwrap_or(0)).apply(self)
    }
}

/// Powers `forms[j]^e` for `e ≤ max_exp`, built once and reused to
/// substitute into many polynomials.
pub struct PowerTable {
    target: usize,
    powers: Vec<Vec<PolyFunction>>,
}

impl PowerTable {
    pub fn new(forms: &[PolyFunction], max_exp: u32) -> Self {
        let target = forms.first().map_or(0, |f| f.dim);
        let powers = forms
            .iter()
            .map(|f| {
                let mut v = vec![PolyFunction::one(target)];
                for e in 1..=max_exp as usize {
                    let next = &v[e - 1] * f;
                    v.push(next);
                }
                v
            })
            .collect();
        Self { target, powers }
    }

    /// Coordinate forms of `φ`, so that applying the table is `f ↦ f ∘ φ`.
    pub fn for_affine(phi: &AffineDiffeo, max_exp: u32) -> Self {
        Self::new(&phi.coordinate_forms(), max_exp)
    }

    /// `f(forms)`; exponents beyond the table are rejected.
    pub fn apply(&self, f: &PolyFunction) -> Result<PolyFunction> {
        if f.dim != self.powers.len() {
            return Err(AlgebraError::DimensionMismatch {
                expected: self.powers.len(),
                found: f.dim,
            });
        }
        let mut out = PolyFunction::zero(self.target);
        for (beta, c) in &f.terms {
            let mut term: Option<PolyFunction> = None;
            for (j, &e) in beta.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let p = self.powers[j].get(e as usize).ok_or_else(|| {
                    AlgebraError::InvalidDegree(format!("exponent {e} exceeds the power table"))
                })?;
                term = Some(match term {
                    None => p.clone(),
                    Some(t) => &t * p,
                });
            }
            match term {
                None => out.add_term(MultiIndex::zero(self.target), c),
                Some(t) => out.add_scaled(&t, c),
            }
        }
        Ok(out)
    }
}

impl fmt::Display for PolyFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (beta, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "{c}")?;
            for (j, &e) in beta.0.iter().enumerate() {
                match e {
                    0 => {}
                    1 => write!(f, "*x{}", j + 1)?,
                    _ => write!(f, "*x{}^{}", j + 1, e)?,
                }
            }
        }
        Ok(())
    }
}

impl fmt::Debug for PolyFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PolyFunction[d={}]({})", self.dim, self)
    }
}

impl<'a> Add<&'a PolyFunction> for &'a PolyFunction {
    type Output = PolyFunction;
    fn add(self, rhs: &PolyFunction) -> PolyFunction {
        self.checked_add(rhs).expect("dimension mismatch")
    }
}

impl<'a> Sub<&'a PolyFunction> for &'a PolyFunction {
    type Output = PolyFunction;
    fn sub(self, rhs: &PolyFunction) -> PolyFunction {
        let mut out = self.clone();
        out.add_scaled(rhs, &-GaussianRational::one());
        out
    }
}

impl<'a> Mul<&'a PolyFunction> for &'a PolyFunction {
    type Output = PolyFunction;
    fn mul(self, rhs: &PolyFunction) -> PolyFunction {
        self.checked_mul(rhs).expect("dimension mismatch")
    }
}

impl Neg for &PolyFunction {
    type Output = PolyFunction;
    fn neg(self) -> PolyFunction {
        self.scale(&-GaussianRational::one())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x(dim: usize, j: usize) -> PolyFunction {
        PolyFunction::var(dim, j)
    }

    fn c(n: i64) -> PolyFunction {
        PolyFunction::constant(1, n.into())
    }

    #[test]
    fn mul_examples() {
        let x1 = x(1, 0);
        assert_eq!(&x1 * &x1, PolyFunction::monomial(MultiIndex(vec![2]), 1.into()));
        assert_eq!(&x1 * &c(1), x1);
        let lhs = &(&c(1) + &x1) * &(&c(1) - &x1);
        assert_eq!(lhs, &c(1) - &(&x1 * &x1));
    }

    #[test]
    fn mul_dimension_mismatch() {
        let err = x(1, 0).checked_mul(&x(2, 0)).unwrap_err();
        assert_eq!(err, AlgebraError::DimensionMismatch { expected: 1, found: 2 });
    }

    #[test]
    fn partial_examples() {
        let x1 = x(1, 0);
        assert_eq!((&x1 * &x1).partial(0).unwrap(), x1.scale(&2.into()));
        assert!(c(7).partial(0).unwrap().is_zero());
        let x1x2 = &x(2, 0) * &x(2, 1);
        assert_eq!(x1x2.partial(1).unwrap(), x(2, 0));
        assert!(x1x2.partial(2).is_err());
    }

    #[test]
    fn degree_of_product() {
        let f = &(&x(2, 0) * &x(2, 1)) + &PolyFunction::one(2);
        let g = &x(2, 1) + &x(2, 1).pow(3);
        assert_eq!((&f * &g).degree(), Some(5));
        assert_eq!(PolyFunction::zero(2).degree(), None);
    }

    #[test]
    fn multi_index_enumeration() {
        let all = MultiIndex::all_up_to(2, 2);
        let as_vecs: Vec<Vec<u32>> = all.iter().map(|m| m.0.clone()).collect();
        assert_eq!(
            as_vecs,
            vec![vec![0, 0], vec![0, 1], vec![1, 0], vec![0, 2], vec![1, 1], vec![2, 0]]
        );
        assert_eq!(MultiIndex(vec![2, 3]).factorial(), 12);
        assert_eq!(MultiIndex(vec![1, 2]).divisors().len(), 6);
    }

    #[test]
    fn partial_multi_matches_iterated() {
        let f = PolyFunction::from_terms(
            2,
            vec![(vec![3, 2], 5.into()), (vec![1, 1], GaussianRational::i())],
        )
        .unwrap();
        let a = MultiIndex(vec![2, 1]);
        let iterated = f.partial(0).unwrap().partial(0).unwrap().partial(1).unwrap();
        assert_eq!(f.partial_multi(&a).unwrap(), iterated);
    }

    #[test]
    fn power_table_matches_substitute_and_bounds_exponents() {
        let one = PolyFunction::one(2);
        let forms = vec![&x(2, 0) + &x(2, 1), &x(2, 1) - &one];
        let f = PolyFunction::from_terms(2, vec![(vec![2, 1], 3.into()), (vec![0, 0], 1.into())]).unwrap();
        let table = PowerTable::new(&forms, 2);
        let expected = &(&forms[0].pow(2) * &forms[1]).scale(&3.into()) + &one;
        assert_eq!(table.apply(&f).unwrap(), expected);
        assert_eq!(f.substitute(&forms).unwrap(), expected);
        let cube = PolyFunction::monomial(MultiIndex(vec![3, 0]), 1.into());
        assert!(table.apply(&cube).is_err());
    }
}
