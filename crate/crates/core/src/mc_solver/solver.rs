//! Order-by-order construction of Maurer–Cartan extensions and of gauges
//! back to the leading term.

use num_traits::One;
use thiserror::Error;

use super::linalg::LinearObstruction;
use super::window::{degree_growth, leading, matrix_of_twisted_d, CochainVector, LinearMap, Window};
use crate::amplitude_dga::{gauge_relation_check, twisted_differential, Cochain, MCElement};
use crate::error::AlgebraError;
use crate::formal_symbols::FormalSymbol;
use crate::function_algebra::GaussianRational;

/// Source of the matrices of `d_{P⁰}` used by the linear solves.
pub trait DifferentialProvider: Sync {
    fn matrix(&self, p0: &MCElement, n: usize, k: usize, d_in: u32) -> crate::Result<LinearMap>;
}

/// The matrices of the actual twisted differential.
#[derive(Clone, Copy, Debug, Default)]
pub struct TwistedDifferential;

impl DifferentialProvider for TwistedDifferential {
    fn matrix(&self, p0: &MCElement, n: usize, k: usize, d_in: u32) -> crate::Result<LinearMap> {
        matrix_of_twisted_d(p0, n, k, d_in)
    }
}

/// Evidence that `d_{P⁰} x = rhs` has no solution in the window: the
/// offending cocycle, its coordinates, ranks, and a left null vector `y`
/// of the matrix with `y · rhs ≠ 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct ObstructionCertificate {
    pub window: Window,
    pub cocycle: Cochain,
    pub rhs_coords: Vec<GaussianRational>,
    pub rank: usize,
    pub rank_augmented: usize,
    pub left_null: Vec<GaussianRational>,
}

#[derive(Debug, Error)]
pub enum SolveError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("order {} is obstructed in window (n={}, k={}, D={}): rank {} < {}",
        .0.window.n, .0.window.n, .0.window.k, .0.window.d_in, .0.rank, .0.rank_augmented)]
    Obstructed(Box<ObstructionCertificate>),
}

/// One solved linear step.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolvedStep {
    pub order: usize,
    pub window: Window,
    pub rank: usize,
    pub rhs_zero: bool,
}

/// Solves `d_{P⁰} x = rhs` for a level-`n` `k`-cochain `x`, where `rhs` is
/// a level-`n` `(k+1)`-cochain. The right side must be closed. Windows are
/// tried from the smallest one whose image can contain `rhs`; the chosen
/// solution has all free coordinates zero and is re-verified.
pub fn solve_in_window(
    provider: &dyn DifferentialProvider,
    p0: &MCElement,
    rhs: &Cochain,
    n: usize,
    k: usize,
) -> Result<(Cochain, SolvedStep), SolveError> {
    let p0 = leading(p0, n)?;
    let rhs = rhs.with_order(n);
    if rhs.degree() != k + 1 {
        return Err(AlgebraError::InvalidDegree(format!(
            "right-hand side has degree {}, expected {}",
            rhs.degree(),
            k + 1
        ))
        .into());
    }
    if !twisted_differential(&p0, &rhs)?.is_zero() {
        return Err(AlgebraError::Inconsistent(format!(
            "right-hand side at order {n} is not closed under the twisted differential"
        ))
        .into());
    }
    let growth = degree_growth(&p0);
    let d_rhs = rhs.max_x_degree().unwrap_or(0);
    let action = rhs.action().clone();
    let mut last = None;
    for d_in in d_rhs.saturating_sub(growth)..=d_rhs + growth {
        let map = provider.matrix(&p0, n, k, d_in)?;
        if map.window.d_out < d_rhs {
            continue;
        }
        let b = CochainVector::from_cochain(&rhs, &map.codomain)?.coords;
        match map.matrix.solve(&b) {
            Ok(x) => {
                let rank = map.matrix.rank();
                let v = CochainVector {
                    degree: k,
                    group_order: map.group_order,
                    basis: map.domain.clone(),
                    coords: x,
                };
                let sol = v.to_cochain(action.clone(), n)?;
                if twisted_differential(&p0, &sol)? != rhs {
                    return Err(AlgebraError::Inconsistent(format!(
                        "solution at order {n} does not reproduce the right-hand side"
                    ))
                    .into());
                }
                let step = SolvedStep {
                    order: n,
                    window: map.window,
                    rank,
                    rhs_zero: rhs.is_zero(),
                };
                return Ok((sol, step));
            }
            Err(LinearObstruction {
                rank,
                rank_augmented,
                left_null,
            }) => {
                last = Some(ObstructionCertificate {
                    window: map.window,
                    cocycle: rhs.clone(),
                    rhs_coords: b,
                    rank,
                    rank_augmented,
                    left_null,
                });
            }
        }
    }
    let cert = last.ok_or_else(|| AlgebraError::Inconsistent("no admissible window".into()))?;
    Err(SolveError::Obstructed(Box::new(cert)))
}

/// `−Σ_{i+j=n, i,j≥1} Pⁱ⋆Pʲ` at order `n`; `partial[i-1]` holds `Pⁱ`.
pub fn mc_rhs(partial: &[Cochain], n: usize) -> crate::Result<Cochain> {
    let first = partial
        .first()
        .ok_or_else(|| AlgebraError::InvalidDegree("need at least P¹".into()))?;
    let mut acc = Cochain::zero(first.action().clone(), 2, n);
    for i in 1..n {
        let (pi, pj) = (&partial[i - 1], &partial[n - i - 1]);
        let prod = pi.with_order(n).cup_star(&pj.with_order(n))?;
        acc = acc.sub(&prod)?;
    }
    Ok(acc.level_part(n))
}

/// Solves `d_{P⁰}Pⁿ = −Σ_{i+j=n, i,j≥1} Pⁱ⋆Pʲ` given `P¹ … P^{n−1}`.
pub fn solve_order(
    p0: &MCElement,
    partial: &[Cochain],
    n: usize,
) -> Result<(Cochain, SolvedStep), SolveError> {
    solve_order_with(&TwistedDifferential, p0, partial, n)
}

pub fn solve_order_with(
    provider: &dyn DifferentialProvider,
    p0: &MCElement,
    partial: &[Cochain],
    n: usize,
) -> Result<(Cochain, SolvedStep), SolveError> {
    if n < 2 || partial.len() < n - 1 {
        return Err(AlgebraError::InvalidDegree(format!(
            "order {n} needs P¹ through P^{}",
            n.saturating_sub(1)
        ))
        .into());
    }
    let rhs = mc_rhs(&partial[..n - 1], n)?;
    solve_in_window(provider, p0, &rhs, n, 1)
}

/// An MC element `ω = P⁰ + ħP¹ + …` with the solved steps.
#[derive(Clone, Debug, PartialEq)]
pub struct Extension {
    pub omega: MCElement,
    pub steps: Vec<SolvedStep>,
}

fn check_homogeneous(c: &Cochain, level: usize, what: &str) -> crate::Result<()> {
    if c.order() < level || c.level_part(level) != *c {
        return Err(AlgebraError::InvalidDegree(format!(
            "{what} must be homogeneous of ħ-order {level}"
        )));
    }
    Ok(())
}

/// Extends `P⁰ + ħP¹` to an MC element through `ħ^order`.
pub fn mc_extend(p0: &MCElement, p1: &Cochain, order: usize) -> Result<Extension, SolveError> {
    mc_extend_with(&TwistedDifferential, p0, p1, order)
}

pub fn mc_extend_with(
    provider: &dyn DifferentialProvider,
    p0: &MCElement,
    p1: &Cochain,
    order: usize,
) -> Result<Extension, SolveError> {
    let p0 = leading(p0, order.max(1))?;
    let p1 = p1.with_order(order.max(1));
    check_homogeneous(&p1, 1, "P¹")?;
    if p1.degree() != 1 {
        return Err(AlgebraError::InvalidDegree("P¹ must have degree 1".into()).into());
    }
    if !twisted_differential(&p0, &p1)?.is_zero() {
        return Err(AlgebraError::Inconsistent("P¹ is not closed under the twisted differential".into()).into());
    }
    let mut partial = vec![p1];
    let mut steps = Vec::new();
    for n in 2..=order {
        let (pn, step) = solve_order_with(provider, &p0, &partial, n)?;
        partial.push(pn);
        steps.push(step);
    }
    let mut omega = p0.cochain().with_order(order);
    for p in &partial {
        omega = omega.add(&p.with_order(order))?;
    }
    Ok(Extension {
        omega: MCElement::new(omega)?,
        steps,
    })
}

/// A unit `u = 1 + ħu¹ + …` with `a_g ⋆ u = u ⋆ P⁰_g`, and the solved steps.
#[derive(Clone, Debug, PartialEq)]
pub struct Gauge {
    pub u: FormalSymbol,
    pub steps: Vec<SolvedStep>,
}

/// Gauges `a` back to its leading term through `ħ^order`, solving
/// `d_{P⁰}uᵐ = −Σ_{i=1}^{m} aⁱ ⋆ u^{m−i}` at each order.
pub fn rigidity_gauge(a: &MCElement, order: usize) -> Result<Gauge, SolveError> {
    rigidity_gauge_with(&TwistedDifferential, a, order)
}

pub fn rigidity_gauge_with(
    provider: &dyn DifferentialProvider,
    a: &MCElement,
    order: usize,
) -> Result<Gauge, SolveError> {
    let a = a.with_order(order);
    let p0 = a.leading_term();
    let action = a.cochain().action().clone();
    let dim = action.dim();
    let levels: Vec<Cochain> = (0..=order).map(|i| a.cochain().level_part(i)).collect();
    let mut u_parts = vec![Cochain::unit(action.clone(), 0, order).level_part(0)];
    let mut steps = Vec::new();
    for m in 1..=order {
        let mut rhs = Cochain::zero(action.clone(), 1, order);
        for i in 1..=m {
            rhs = rhs.sub(&levels[i].cup_star(&u_parts[m - i])?)?;
        }
        let (um, step) = solve_in_window(provider, &p0, &rhs.level_part(m), m, 0)?;
        u_parts.push(um.with_order(order));
        steps.push(step);
    }
    let mut u = FormalSymbol::zero(dim, order);
    for part in &u_parts {
        u.add_scaled(part.value(&[]), &GaussianRational::one());
    }
    let report = gauge_relation_check(&a, &p0.with_order(order), &u)?;
    if !report.passes() {
        return Err(AlgebraError::Inconsistent("constructed gauge fails the intertwining check".into()).into());
    }
    Ok(Gauge { u, steps })
}
