//! For a trivial action and `P⁰ = 1` the twisted differential acts on each
//! `ξ^α`-coefficient separately as the group-cohomology differential.

use std::collections::BTreeSet;
use std::sync::Arc;

use super::window::CochainVector;
use crate::amplitude_dga::{twisted_differential, Cochain, MCElement};
use crate::error::{AlgebraError, Result};
use crate::formal_symbols::{FormalSymbol, XiPolynomial};
use crate::function_algebra::{MultiIndex, PolyFunction};
use crate::group_model::AffineAction;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SplitReport {
    /// Tuples where the two computations differ.
    pub mismatches: Vec<Vec<usize>>,
}

impl SplitReport {
    pub fn passes(&self) -> bool {
        self.mismatches.is_empty()
    }
}

/// `δ̃f(g₁…g_{k+1}) = f(g₂…) + Σ(−1)^i f(…g_ig_{i+1}…) + (−1)^{k+1} f(g₁…g_k)`
/// on a table of polynomials indexed like [`crate::group_model::FiniteGroup::enumerate_tuples`].
pub fn group_coboundary(
    action: &AffineAction,
    k: usize,
    f: &[PolyFunction],
    tuple: &[usize],
) -> PolyFunction {
    let g = action.group();
    let at = |t: &[usize]| &f[g.tuple_index(t)];
    let mut out = at(&tuple[1..]).clone();
    for i in 0..k {
        let mut face = tuple[..i].to_vec();
        face.push(g.mul(tuple[i], tuple[i + 1]));
        face.extend_from_slice(&tuple[i + 2..]);
        let v = at(&face);
        out = if i % 2 == 0 { &out - v } else { &out + v };
    }
    let tail = at(&tuple[..k]);
    if k % 2 == 0 {
        &out - tail
    } else {
        &out + tail
    }
}

/// Compares `d₁P` computed by the twisted differential with
/// `Σ_α (δ̃f_α) ξ^α` computed coefficientwise.
pub fn trivial_action_split_check(action: Arc<AffineAction>, p: &CochainVector) -> Result<SplitReport> {
    if !action.is_trivial() {
        return Err(AlgebraError::InvalidAction("splitting needs the trivial action".into()));
    }
    let n = p.basis.xi_degree() as usize;
    let k = p.degree;
    let a = p.to_cochain(action.clone(), n)?;
    let unit = MCElement::unit(action.clone(), n);
    let lhs = twisted_differential(&unit, &a)?;

    let alphas: BTreeSet<MultiIndex> = a
        .values()
        .iter()
        .flat_map(|v| v.level(n).terms().map(|(al, _)| al.clone()).collect::<Vec<_>>())
        .collect();
    let tables: Vec<(MultiIndex, Vec<PolyFunction>)> = alphas
        .into_iter()
        .map(|al| {
            let table = a.values().iter().map(|v| v.level(n).coeff(&al)).collect();
            (al, table)
        })
        .collect();
    let rhs = Cochain::from_fn(action.clone(), k + 1, n, |t| {
        let mut level = XiPolynomial::zero(action.dim());
        for (al, table) in &tables {
            level.add_term(al.clone(), &group_coboundary(&action, k, table, t));
        }
        FormalSymbol::homogeneous(level, n, n)
    })?;
    let mismatches = lhs
        .entries()
        .zip(rhs.values())
        .filter(|((_, l), r)| l != r)
        .map(|((t, _), _)| t)
        .collect();
    Ok(SplitReport { mismatches })
}
