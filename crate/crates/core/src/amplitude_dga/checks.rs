//! Maurer–Cartan elements and the report-valued checks built on them.

use std::sync::Arc;

use num_traits::One;

use super::cochain::{first_nonzero, Cochain};
use crate::error::{AlgebraError, Result};
use crate::formal_symbols::FormalSymbol;
use crate::function_algebra::{AffineDiffeo, GaussianRational, PolyFunction};
use crate::group_model::AffineAction;

/// A failing tuple together with the symbol that should have vanished.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub tuple: Vec<usize>,
    pub difference: FormalSymbol,
}

/// A degree-1, normalized cochain with vanishing MC residual.
#[derive(Clone, Debug, PartialEq)]
pub struct MCElement {
    cochain: Cochain,
}

impl MCElement {
    pub fn new(cochain: Cochain) -> Result<Self> {
        if cochain.degree() != 1 {
            return Err(AlgebraError::InvalidDegree(format!(
                "MC elements have degree 1, got {}",
                cochain.degree()
            )));
        }
        if !cochain.is_normalized() {
            return Err(AlgebraError::NotNormalized);
        }
        let residual = mc_residual(&cochain)?;
        if let Some(t) = first_nonzero(&residual) {
            return Err(AlgebraError::NotMaurerCartan(cochain.group().format_tuple(&t)));
        }
        Ok(Self { cochain })
    }

    /// The pullback representation `a ≡ 1`.
    pub fn unit(action: Arc<AffineAction>, order: usize) -> Self {
        Self {
            cochain: Cochain::unit(action, 1, order),
        }
    }

    pub fn cochain(&self) -> &Cochain {
        &self.cochain
    }

    pub fn into_cochain(self) -> Cochain {
        self.cochain
    }

    pub fn order(&self) -> usize {
        self.cochain.order()
    }

    /// The same element re-truncated (or zero-padded) to `order`; MC is
    /// preserved because truncation commutes with `d` and `⋆`.
    pub fn with_order(&self, order: usize) -> Self {
        Self {
            cochain: self.cochain.with_order(order),
        }
    }

    /// `P⁰`: the ħ-level-0 part, itself MC.
    pub fn leading_term(&self) -> Self {
        Self {
            cochain: self.cochain.level_part(0),
        }
    }
}

/// The differential `d` of the complex.
pub fn differential_d(a: &Cochain) -> Cochain {
    a.differential()
}

pub fn cup_star(a: &Cochain, b: &Cochain) -> Result<Cochain> {
    a.cup_star(b)
}

/// `da + a⋆a` for a degree-1 cochain.
pub fn mc_residual(a: &Cochain) -> Result<Cochain> {
    if a.degree() != 1 {
        return Err(AlgebraError::InvalidDegree("MC residual needs degree 1".into()));
    }
    a.differential().add(&a.cup_star(a)?)
}

/// `d_{P⁰}a = da + P⁰⋆a − (−1)^{|a|} a⋆P⁰`, with `P⁰` truncated or padded to
/// the order of `a`.
pub fn twisted_differential(p0: &MCElement, a: &Cochain) -> Result<Cochain> {
    let p0 = p0.cochain().with_order(a.order());
    a.twisted_differential_unchecked(&p0)
}

/// Like [`twisted_differential`] but first re-verifies that `p0` is MC.
pub fn twisted_differential_checked(p0: &Cochain, a: &Cochain) -> Result<Cochain> {
    let p0 = MCElement::new(p0.clone())?;
    twisted_differential(&p0, a)
}

#[derive(Clone, Debug, PartialEq)]
pub struct RepresentationReport {
    /// `(g₁, g₂)` with `a_{g₁} ⋆ a_{g₂} ≠ a_{g₁g₂}`; difference is
    /// `a_{g₁}⋆a_{g₂} − a_{g₁g₂}`.
    pub failures: Vec<Witness>,
    /// The failing pairs and differences coincide with the nonzero entries of
    /// the MC residual.
    pub residual_agrees: bool,
}

impl RepresentationReport {
    pub fn passes(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Checks `Op(a_{g₁},φ_{g₁})∘Op(a_{g₂},φ_{g₂}) = Op(a_{g₁g₂},φ_{g₁g₂})` pairwise.
pub fn representation_check(a: &Cochain) -> Result<RepresentationReport> {
    if a.degree() != 1 {
        return Err(AlgebraError::InvalidDegree("representation check needs degree 1".into()));
    }
    let g = a.group();
    let action = a.action();
    let mut failures = Vec::new();
    for t in g.enumerate_tuples(2) {
        let (g1, g2) = (t[0], t[1]);
        let composed =
            a.value(&[g1]).star_compose(action.phi(g1), a.value(&[g2]), action.phi(g2))?;
        let diff = composed.checked_sub(a.value(&[g.mul(g1, g2)]))?;
        if !diff.is_zero() {
            failures.push(Witness {
                tuple: t,
                difference: diff,
            });
        }
    }
    let residual = mc_residual(a)?;
    let from_residual: Vec<Witness> = residual
        .entries()
        .filter(|(_, v)| !v.is_zero())
        .map(|(t, v)| Witness {
            tuple: t,
            difference: v.clone(),
        })
        .collect();
    let residual_agrees = from_residual == failures;
    Ok(RepresentationReport {
        failures,
        residual_agrees,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct GaugeReport {
    /// Elements `g` with `a_g ⋆ u ≠ u ⋆ b_g`; difference is the left minus
    /// the right side.
    pub failures: Vec<Witness>,
}

impl GaugeReport {
    pub fn passes(&self) -> bool {
        self.failures.is_empty()
    }
}

fn unit_at(u: &FormalSymbol, order: usize) -> Result<FormalSymbol> {
    if u.order() < order {
        return Err(AlgebraError::OrderMismatch {
            left: u.order(),
            right: order,
        });
    }
    Ok(u.with_order(order))
}

/// Checks the intertwining `a_g φ_g⋆id u = u id⋆φ_g b_g` for every `g`.
pub fn gauge_relation_check(a: &MCElement, b: &MCElement, u: &FormalSymbol) -> Result<GaugeReport> {
    let (a, b) = (a.cochain(), b.cochain());
    a.check_compatible(b)?;
    let u = unit_at(u, a.order())?;
    u.invert_unit()?;
    let action = a.action();
    let id = AffineDiffeo::identity(a.dim());
    let mut failures = Vec::new();
    for g in 0..a.group().order() {
        let lhs = a.value(&[g]).star_compose(action.phi(g), &u, &id)?;
        let rhs = u.star_compose(&id, b.value(&[g]), action.phi(g))?;
        let diff = lhs.checked_sub(&rhs)?;
        if !diff.is_zero() {
            failures.push(Witness {
                tuple: vec![g],
                difference: diff,
            });
        }
    }
    Ok(GaugeReport { failures })
}

/// `b_g = u⁻¹ ⋆ a_g ⋆ u`, re-verified as an MC element.
pub fn conjugate_by_unit(a: &MCElement, u: &FormalSymbol) -> Result<MCElement> {
    let c = a.cochain();
    let u = unit_at(u, c.order())?;
    let u_inv = u.invert_unit()?;
    let action = c.action().clone();
    let id = AffineDiffeo::identity(c.dim());
    let values = (0..c.group().order())
        .map(|g| {
            let phi = action.phi(g);
            u_inv
                .star_compose(&id, c.value(&[g]), phi)?
                .star_compose(phi, &u, &id)
        })
        .collect::<Result<Vec<_>>>()?;
    MCElement::new(Cochain::degree_one(action, values)?)
}

#[derive(Clone, Debug, PartialEq)]
pub struct CocycleReport {
    /// Failing tuples with the polynomial `lhs − rhs`.
    pub failures: Vec<(Vec<usize>, PolyFunction)>,
}

impl CocycleReport {
    pub fn passes(&self) -> bool {
        self.failures.is_empty()
    }
}

/// `a_{g₁g₂}(x) = a_{g₁}(x) a_{g₂}(φ_{g₁}⁻¹(x))`, checked directly as a
/// polynomial identity on a `ξ`-free, `ħ`-free cochain.
pub fn xi_multiplicative_cocycle_check(a: &Cochain) -> Result<CocycleReport> {
    if a.degree() != 1 {
        return Err(AlgebraError::InvalidDegree("cocycle check needs degree 1".into()));
    }
    if let Some((t, _)) = a
        .entries()
        .find(|(_, v)| !v.is_xi_independent() || !v.is_hbar_free())
    {
        return Err(AlgebraError::NotXiIndependent(format!(
            "value at {} depends on xi or hbar",
            a.group().format_tuple(&t)
        )));
    }
    let g = a.group();
    let action = a.action();
    let f = |h: usize| a.value(&[h]).level(0).xi_free_part();
    let mut failures = Vec::new();
    for t in g.enumerate_tuples(2) {
        let (g1, g2) = (t[0], t[1]);
        let rhs = &f(g1) * &f(g2).compose_affine(&action.phi(g1).invert())?;
        let diff = &f(g.mul(g1, g2)) - &rhs;
        if !diff.is_zero() {
            failures.push((t, diff));
        }
    }
    Ok(CocycleReport { failures })
}

/// `S_{g₁g₂} = S_{g₁} + S_{g₂} ∘ φ_{g₁}⁻¹` for a table `g ↦ S_g`.
pub fn additive_cocycle_check(action: &AffineAction, s: &[PolyFunction]) -> Result<CocycleReport> {
    let g = action.group();
    check_table(action, s)?;
    let mut failures = Vec::new();
    for t in g.enumerate_tuples(2) {
        let (g1, g2) = (t[0], t[1]);
        let rhs = &s[g1] + &s[g2].compose_affine(&action.phi(g1).invert())?;
        let diff = &s[g.mul(g1, g2)] - &rhs;
        if !diff.is_zero() {
            failures.push((t, diff));
        }
    }
    Ok(CocycleReport { failures })
}

fn check_table(action: &AffineAction, s: &[PolyFunction]) -> Result<()> {
    if s.len() != action.group().order() {
        return Err(AlgebraError::InvalidDegree(format!(
            "phase table needs {} entries, got {}",
            action.group().order(),
            s.len()
        )));
    }
    if let Some(f) = s.iter().find(|f| f.dim() != action.dim()) {
        return Err(AlgebraError::DimensionMismatch {
            expected: action.dim(),
            found: f.dim(),
        });
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq)]
pub struct IntertwinerReport {
    pub s_is_cocycle: bool,
    pub s_tilde_is_cocycle: bool,
    /// Elements `g` where `S̃_g − S_g ≠ K∘φ_g⁻¹ − K`, with the discrepancy.
    pub failures: Vec<(usize, PolyFunction)>,
}

impl IntertwinerReport {
    pub fn passes(&self) -> bool {
        self.s_is_cocycle && self.s_tilde_is_cocycle && self.failures.is_empty()
    }
}

/// `S̃_g − S_g = (δK)_g = K∘φ_g⁻¹ − K`: the phases of
/// `Op(e^{iS_g},φ_g)∘K̂ = K̂∘Op(e^{iS̃_g},φ_g)` tracked additively.
pub fn coboundary_intertwiner_check(
    action: &AffineAction,
    s: &[PolyFunction],
    s_tilde: &[PolyFunction],
    k: &PolyFunction,
) -> Result<IntertwinerReport> {
    let s_is_cocycle = additive_cocycle_check(action, s)?.passes();
    let s_tilde_is_cocycle = additive_cocycle_check(action, s_tilde)?.passes();
    let mut failures = Vec::new();
    for g in 0..action.group().order() {
        let delta_k = &k.compose_affine(&action.phi(g).invert())? - k;
        let diff = &(&s_tilde[g] - &s[g]) - &delta_k;
        if !diff.is_zero() {
            failures.push((g, diff));
        }
    }
    Ok(IntertwinerReport {
        s_is_cocycle,
        s_tilde_is_cocycle,
        failures,
    })
}

/// A `ξ`-independent degree-1 cochain `g ↦ c_g(x)` at the given order.
pub fn xi_free_cochain(
    action: Arc<AffineAction>,
    values: Vec<PolyFunction>,
    order: usize,
) -> Result<Cochain> {
    let values = values
        .into_iter()
        .map(|f| FormalSymbol::from_poly(f, order))
        .collect();
    Cochain::degree_one(action, values)
}

/// The degree-1 cochain with constant value `c` at every `g ≠ e` and `1` at `e`.
pub fn constant_cochain(action: Arc<AffineAction>, c: GaussianRational, order: usize) -> Cochain {
    let dim = action.dim();
    let e = action.group().identity();
    let values = (0..action.group().order())
        .map(|g| {
            let v = if g == e { GaussianRational::one() } else { c.clone() };
            FormalSymbol::constant(dim, order, v)
        })
        .collect();
    Cochain::degree_one(action, values).expect("shape is consistent")
}
