//! Cochains `G^k → 𝒫`, the differential, the graded star product and the
//! twisted differential.

use std::sync::Arc;

use num_traits::One;
use rayon::prelude::*;

use crate::error::{AlgebraError, Result};
use crate::formal_symbols::FormalSymbol;
use crate::function_algebra::GaussianRational;
use crate::group_model::{AffineAction, FiniteGroup};

/// A degree-`k` cochain stored as a table over `G^k` in
/// [`FiniteGroup::enumerate_tuples`] order. All values share dimension and
/// truncation order. Degree 0 holds a single symbol.
#[derive(Clone, Debug)]
pub struct Cochain {
    degree: usize,
    action: Arc<AffineAction>,
    order: usize,
    values: Vec<FormalSymbol>,
}

impl PartialEq for Cochain {
    fn eq(&self, other: &Self) -> bool {
        self.degree == other.degree
            && self.order == other.order
            && same_context(&self.action, &other.action)
            && self.values == other.values
    }
}

fn same_context(a: &Arc<AffineAction>, b: &Arc<AffineAction>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

impl Cochain {
    pub fn new(action: Arc<AffineAction>, degree: usize, values: Vec<FormalSymbol>) -> Result<Self> {
        let expected = action.group().order().pow(degree as u32);
        if values.len() != expected {
            return Err(AlgebraError::InvalidDegree(format!(
                "degree-{degree} cochain needs {expected} values, got {}",
                values.len()
            )));
        }
        let dim = action.dim();
        let order = values[0].order();
        for v in &values {
            if v.dim() != dim {
                return Err(AlgebraError::DimensionMismatch {
                    expected: dim,
                    found: v.dim(),
                });
            }
            if v.order() != order {
                return Err(AlgebraError::OrderMismatch {
                    left: order,
                    right: v.order(),
                });
            }
        }
        Ok(Self {
            degree,
            action,
            order,
            values,
        })
    }

    /// Tabulates `f` over `G^degree`. Evaluation is parallel; the table is
    /// assembled in enumeration order.
    pub fn from_fn<F>(action: Arc<AffineAction>, degree: usize, order: usize, f: F) -> Result<Self>
    where
        F: Fn(&[usize]) -> Result<FormalSymbol> + Sync,
    {
        let group = action.group();
        let total = group.order().pow(degree as u32);
        let values = (0..total)
            .into_par_iter()
            .map(|idx| f(&group.tuple_at(degree, idx)))
            .collect::<Result<Vec<_>>>()?;
        let c = Self::new(action, degree, values)?;
        if c.order != order {
            return Err(AlgebraError::OrderMismatch {
                left: order,
                right: c.order,
            });
        }
        Ok(c)
    }

    pub fn zero(action: Arc<AffineAction>, degree: usize, order: usize) -> Self {
        let total = action.group().order().pow(degree as u32);
        let dim = action.dim();
        Self {
            degree,
            action,
            order,
            values: vec![FormalSymbol::zero(dim, order); total],
        }
    }

    /// Every value equal to the unit symbol `1`.
    pub fn unit(action: Arc<AffineAction>, degree: usize, order: usize) -> Self {
        let total = action.group().order().pow(degree as u32);
        let dim = action.dim();
        Self {
            degree,
            action,
            order,
            values: vec![FormalSymbol::one(dim, order); total],
        }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn dim(&self) -> usize {
        self.action.dim()
    }

    pub fn action(&self) -> &Arc<AffineAction> {
        &self.action
    }

    pub fn group(&self) -> &FiniteGroup {
        self.action.group()
    }

    pub fn values(&self) -> &[FormalSymbol] {
        &self.values
    }

    pub fn value(&self, tuple: &[usize]) -> &FormalSymbol {
        debug_assert_eq!(tuple.len(), self.degree);
        &self.values[self.group().tuple_index(tuple)]
    }

    /// `(tuple, value)` pairs in enumeration order.
    pub fn entries(&self) -> impl Iterator<Item = (Vec<usize>, &FormalSymbol)> {
        let g = self.group();
        self.values
            .iter()
            .enumerate()
            .map(move |(i, v)| (g.tuple_at(self.degree, i), v))
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(FormalSymbol::is_zero)
    }

    /// Value at `(e, …, e)` equals `1`.
    pub fn is_normalized(&self) -> bool {
        let e = self.group().identity();
        self.value(&vec![e; self.degree]).is_one()
    }

    /// Tuples with a nonzero value.
    pub fn support(&self) -> Vec<Vec<usize>> {
        self.entries()
            .filter(|(_, v)| !v.is_zero())
            .map(|(t, _)| t)
            .collect()
    }

    pub fn with_order(&self, order: usize) -> Self {
        Self {
            degree: self.degree,
            action: self.action.clone(),
            order,
            values: self.values.iter().map(|v| v.with_order(order)).collect(),
        }
    }

    /// Keeps only ħ-level `n` of every value.
    pub fn level_part(&self, n: usize) -> Self {
        self.map_values(|v| {
            FormalSymbol::homogeneous(v.level(n).clone(), n, self.order).expect("grading preserved")
        })
    }

    /// Removes ħ-level 0 from every value.
    pub fn without_leading(&self) -> Self {
        self.map_values(|v| {
            let mut levels = v.levels().to_vec();
            levels[0] = crate::formal_symbols::XiPolynomial::zero(v.dim());
            FormalSymbol::from_levels(levels).expect("grading preserved")
        })
    }

    pub fn max_x_degree(&self) -> Option<u32> {
        self.values.iter().filter_map(FormalSymbol::x_degree).max()
    }

    fn map_values<F: Fn(&FormalSymbol) -> FormalSymbol>(&self, f: F) -> Self {
        Self {
            degree: self.degree,
            action: self.action.clone(),
            order: self.order,
            values: self.values.iter().map(f).collect(),
        }
    }

    pub fn check_compatible(&self, other: &Self) -> Result<()> {
        if !same_context(&self.action, &other.action) {
            return Err(AlgebraError::ContextMismatch(
                "cochains are over different actions".into(),
            ));
        }
        if self.order != other.order {
            return Err(AlgebraError::OrderMismatch {
                left: self.order,
                right: other.order,
            });
        }
        Ok(())
    }

    fn check_same_degree(&self, other: &Self) -> Result<()> {
        self.check_compatible(other)?;
        if self.degree != other.degree {
            return Err(AlgebraError::InvalidDegree(format!(
                "cannot add degrees {} and {}",
                self.degree, other.degree
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.combine(other, &GaussianRational::one())
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.combine(other, &-GaussianRational::one())
    }

    /// `self + c · other`.
    pub fn combine(&self, other: &Self, c: &GaussianRational) -> Result<Self> {
        self.check_same_degree(other)?;
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| {
                let mut s = a.clone();
                s.add_scaled(b, c);
                s
            })
            .collect();
        Ok(Self {
            degree: self.degree,
            action: self.action.clone(),
            order: self.order,
            values,
        })
    }

    pub fn scale(&self, c: &GaussianRational) -> Self {
        self.map_values(|v| v.scale(c))
    }

    /// `(da)(g₁,…,g_{k+1}) = Σ_{i=1}^{k} (-1)^i a(g₁,…,g_i g_{i+1},…,g_{k+1})`,
    /// evaluated at one tuple of length `k + 1`.
    pub fn differential_at(&self, tuple: &[usize]) -> FormalSymbol {
        let k = self.degree;
        debug_assert_eq!(tuple.len(), k + 1);
        let g = self.group();
        let mut out = FormalSymbol::zero(self.dim(), self.order);
        let mut face = Vec::with_capacity(k);
        for i in 0..k {
            face.clear();
            face.extend_from_slice(&tuple[..i]);
            face.push(g.mul(tuple[i], tuple[i + 1]));
            face.extend_from_slice(&tuple[i + 2..]);
            let sign = if i % 2 == 0 { -1 } else { 1 };
            let v = self.value(&face);
            if !v.is_zero() {
                out.add_scaled(v, &GaussianRational::from_integer(sign));
            }
        }
        out
    }

    /// The differential `d`: inner faces only. Degree 0 maps to zero.
    pub fn differential(&self) -> Self {
        Self::from_fn(self.action.clone(), self.degree + 1, self.order, |t| {
            Ok(self.differential_at(t))
        })
        .expect("differential preserves shape")
    }

    /// `(a⋆b)(g₁…g_{k+l}) = a(g₁…g_k) φ_{g₁⋯g_k}⋆φ_{g_{k+1}⋯g_{k+l}} b(g_{k+1}…)`
    /// at one tuple.
    pub fn cup_star_at(&self, other: &Self, tuple: &[usize]) -> Result<FormalSymbol> {
        let (head, tail) = tuple.split_at(self.degree);
        let a = self.value(head);
        let b = other.value(tail);
        if a.is_zero() || b.is_zero() {
            return Ok(FormalSymbol::zero(self.dim(), self.order));
        }
        a.star_compose(self.action.phi_of(head), b, self.action.phi_of(tail))
    }

    /// The graded star product `⋆ : 𝒫^k × 𝒫^l → 𝒫^{k+l}`.
    pub fn cup_star(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        Self::from_fn(
            self.action.clone(),
            self.degree + other.degree,
            self.order,
            |t| self.cup_star_at(other, t),
        )
    }

    /// `d_{P⁰}a = da + P⁰⋆a − (−1)^{|a|} a⋆P⁰` at one tuple; `p0` must be a
    /// degree-1 cochain of the same shape.
    pub fn twisted_differential_at(&self, p0: &Cochain, tuple: &[usize]) -> Result<FormalSymbol> {
        let mut out = self.differential_at(tuple);
        let left = p0.cup_star_at(self, tuple)?;
        let right = self.cup_star_at(p0, tuple)?;
        out.add_scaled(&left, &GaussianRational::one());
        let sign = if self.degree % 2 == 0 { -1 } else { 1 };
        out.add_scaled(&right, &GaussianRational::from_integer(sign));
        Ok(out)
    }

    /// Twisted differential against an arbitrary degree-1 cochain; callers
    /// wanting the MC precondition enforced use
    /// [`crate::amplitude_dga::twisted_differential`].
    pub fn twisted_differential_unchecked(&self, p0: &Cochain) -> Result<Self> {
        self.check_compatible(p0)?;
        if p0.degree != 1 {
            return Err(AlgebraError::InvalidDegree("twisting cochain must have degree 1".into()));
        }
        Self::from_fn(self.action.clone(), self.degree + 1, self.order, |t| {
            self.twisted_differential_at(p0, t)
        })
    }
}

/// First tuple (in enumeration order) carrying a nonzero value.
pub fn first_nonzero(c: &Cochain) -> Option<Vec<usize>> {
    c.entries().find(|(_, v)| !v.is_zero()).map(|(t, _)| t)
}

impl Cochain {
    /// A degree-0 cochain holding `u`.
    pub fn degree_zero(action: Arc<AffineAction>, u: FormalSymbol) -> Result<Self> {
        Self::new(action, 0, vec![u])
    }

    /// A degree-1 cochain from per-element values.
    pub fn degree_one(action: Arc<AffineAction>, values: Vec<FormalSymbol>) -> Result<Self> {
        Self::new(action, 1, values)
    }
}
