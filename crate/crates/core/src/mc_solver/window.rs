//! Finite windows of the level-`n` complex and coordinates on them.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_traits::Zero;
use rayon::prelude::*;

use super::linalg::ExactMatrix;
use crate::amplitude_dga::{Cochain, MCElement};
use crate::error::{AlgebraError, Result};
use crate::formal_symbols::{FormalSymbol, XiPolynomial};
use crate::function_algebra::{GaussianRational, MultiIndex, PolyFunction};
use crate::group_model::AffineAction;

/// Monomials `x^β ξ^α` with `|α| ≤ n`, `|β| ≤ D`, ordered by `α` then `β`
/// (both graded-lex).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GradedBasis {
    dim: usize,
    xi_degree: u32,
    x_degree: u32,
    monomials: Vec<(MultiIndex, MultiIndex)>,
    index: BTreeMap<(MultiIndex, MultiIndex), usize>,
}

impl GradedBasis {
    pub fn new(dim: usize, xi_degree: u32, x_degree: u32) -> Self {
        let betas = MultiIndex::all_up_to(dim, x_degree);
        let monomials: Vec<_> = MultiIndex::all_up_to(dim, xi_degree)
            .into_iter()
            .flat_map(|a| betas.iter().map(move |b| (a.clone(), b.clone())))
            .collect();
        let index = monomials.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
        Self {
            dim,
            xi_degree,
            x_degree,
            monomials,
            index,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn xi_degree(&self) -> u32 {
        self.xi_degree
    }

    pub fn x_degree(&self) -> u32 {
        self.x_degree
    }

    pub fn len(&self) -> usize {
        self.monomials.len()
    }

    pub fn is_empty(&self) -> bool {
        self.monomials.is_empty()
    }

    pub fn monomials(&self) -> &[(MultiIndex, MultiIndex)] {
        &self.monomials
    }

    /// The basis element `x^β ξ^α` at position `i`.
    pub fn element(&self, i: usize) -> XiPolynomial {
        let (alpha, beta) = &self.monomials[i];
        XiPolynomial::monomial(
            alpha.clone(),
            PolyFunction::monomial(beta.clone(), GaussianRational::from_integer(1)),
        )
    }

    /// Coordinates of `p`; fails if `p` leaves the window.
    pub fn coords(&self, p: &XiPolynomial) -> Result<Vec<GaussianRational>> {
        let mut out = vec![GaussianRational::zero(); self.len()];
        for (alpha, f) in p.terms() {
            for (beta, c) in f.terms() {
                let i = self.index.get(&(alpha.clone(), beta.clone())).ok_or_else(|| {
                    AlgebraError::InvalidDegree(format!(
                        "term xi^{:?} x^{:?} lies outside the window (n={}, D={})",
                        alpha.0, beta.0, self.xi_degree, self.x_degree
                    ))
                })?;
                out[*i] = c.clone();
            }
        }
        Ok(out)
    }

    pub fn from_coords(&self, coords: &[GaussianRational]) -> XiPolynomial {
        let mut p = XiPolynomial::zero(self.dim);
        for (c, (alpha, beta)) in coords.iter().zip(&self.monomials) {
            if !c.is_zero() {
                p.add_term(alpha.clone(), &PolyFunction::monomial(beta.clone(), c.clone()));
            }
        }
        p
    }
}

/// A level-`n` homogeneous `k`-cochain in coordinates: `|G|^k` blocks of
/// [`GradedBasis`] coordinates in tuple enumeration order.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CochainVector {
    pub degree: usize,
    pub group_order: usize,
    pub basis: GradedBasis,
    pub coords: Vec<GaussianRational>,
}

impl CochainVector {
    pub fn len_for(group_order: usize, degree: usize, basis: &GradedBasis) -> usize {
        group_order.pow(degree as u32) * basis.len()
    }

    /// Level `level` of `c` in coordinates of `basis`, which must have
    /// `ξ`-degree cap equal to that level.
    pub fn from_cochain(c: &Cochain, basis: &GradedBasis) -> Result<Self> {
        let level = basis.xi_degree() as usize;
        let mut coords = Vec::with_capacity(Self::len_for(c.group().order(), c.degree(), basis));
        for v in c.values() {
            if level > v.order() {
                coords.extend(std::iter::repeat_n(GaussianRational::zero(), basis.len()));
            } else {
                coords.extend(basis.coords(v.level(level))?);
            }
        }
        Ok(Self {
            degree: c.degree(),
            group_order: c.group().order(),
            basis: basis.clone(),
            coords,
        })
    }

    /// Back to a cochain whose values are homogeneous of ħ-level `n` at the
    /// given truncation order.
    pub fn to_cochain(&self, action: Arc<AffineAction>, order: usize) -> Result<Cochain> {
        if action.group().order() != self.group_order {
            return Err(AlgebraError::ContextMismatch("group order differs from the vector's".into()));
        }
        let level = self.basis.xi_degree() as usize;
        if level > order {
            return Err(AlgebraError::OrderMismatch {
                left: order,
                right: level,
            });
        }
        let len = self.basis.len();
        let values = (0..self.group_order.pow(self.degree as u32))
            .map(|b| {
                let block = &self.coords[b * len..(b + 1) * len];
                FormalSymbol::homogeneous(self.basis.from_coords(block), level, order)
            })
            .collect::<Result<Vec<_>>>()?;
        Cochain::new(action, self.degree, values)
    }
}

/// Window data of a map `C^k(n, D_in) → C^{k+1}(n, D_out)`.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct Window {
    pub n: usize,
    pub k: usize,
    pub d_in: u32,
    pub d_out: u32,
}

impl Window {
    /// `d_{P⁰}` maps the window into itself.
    pub fn is_closed(&self) -> bool {
        self.d_in == self.d_out
    }
}

/// An exact matrix between two cochain windows.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct LinearMap {
    pub window: Window,
    pub domain: GradedBasis,
    pub codomain: GradedBasis,
    pub group_order: usize,
    pub matrix: ExactMatrix,
}

impl LinearMap {
    pub fn domain_len(&self) -> usize {
        self.matrix.cols()
    }

    pub fn codomain_len(&self) -> usize {
        self.matrix.rows()
    }
}

/// Extra `x`-degree that `d_{P⁰}` can add: the top `x`-degree of `P⁰`.
pub fn degree_growth(p0: &MCElement) -> u32 {
    p0.cochain().max_x_degree().unwrap_or(0)
}

/// The matrix of `d_{P⁰}` from level-`n` `k`-cochains with `x`-degree ≤
/// `d_in` to level-`n` `(k+1)`-cochains in the exactly computed codomain
/// window. Columns are obtained by applying the twisted differential to
/// basis cochains.
pub fn matrix_of_twisted_d(p0: &MCElement, n: usize, k: usize, d_in: u32) -> Result<LinearMap> {
    let p0 = leading(p0, n)?;
    let action = p0.cochain().action().clone();
    let dim = action.dim();
    let d_out = d_in + degree_growth(&p0);
    let domain = GradedBasis::new(dim, n as u32, d_in);
    let codomain = GradedBasis::new(dim, n as u32, d_out);
    let order_g = action.group().order();
    let blocks = order_g.pow(k as u32);
    let cols = blocks * domain.len();
    let rows = CochainVector::len_for(order_g, k + 1, &codomain);
    let columns = (0..cols)
        .into_par_iter()
        .map(|j| {
            let (block, local) = (j / domain.len(), j % domain.len());
            let mut values = vec![FormalSymbol::zero(dim, n); blocks];
            values[block] = FormalSymbol::homogeneous(domain.element(local), n, n)?;
            let a = Cochain::new(action.clone(), k, values)?;
            let image = crate::amplitude_dga::twisted_differential(&p0, &a)?;
            let v = CochainVector::from_cochain(&image, &codomain)?;
            Ok(v.coords)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(LinearMap {
        window: Window { n, k, d_in, d_out },
        domain,
        codomain,
        group_order: order_g,
        matrix: ExactMatrix::from_columns(rows, columns),
    })
}

/// `P⁰` re-truncated to order `n`; it must be ħ-free.
pub(crate) fn leading(p0: &MCElement, n: usize) -> Result<MCElement> {
    if !p0.cochain().without_leading().is_zero() {
        return Err(AlgebraError::InvalidDegree("twisting element must be ħ-free".into()));
    }
    Ok(p0.with_order(n))
}
