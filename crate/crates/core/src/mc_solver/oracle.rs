//! Checks that do not go through the star product: the averaging homotopy
//! and the character formula for `H⁰`, both available when every value of
//! `P⁰` is a constant.
//!
//! With constants `c_g`, left and right multiplication by `P⁰` act on a
//! symbol `v` as `L_g v = c_g · v(φ_g⁻¹x, ξ)` and `R_g v = c_g · v(x, C_gᵀξ)`
//! (`C_g` the inverse linear part). The twisted complex is then the bar
//! complex of this bimodule, and `f(t) = R_{(∏t)⁻¹} a(t)` turns it into the
//! standard complex of the left module `g∗v = L_g R_{g⁻¹} v`, where
//! averaging over the last argument is a contracting homotopy.

use num_traits::{One, Zero};

use super::linalg::ExactMatrix;
use super::window::GradedBasis;
use crate::amplitude_dga::Cochain;
use crate::error::{AlgebraError, Result};
use crate::formal_symbols::{FormalSymbol, XiPolynomial};
use crate::function_algebra::affine::transpose;
use crate::function_algebra::GaussianRational;

/// Result of an oracle that may decline.
#[derive(Clone, Debug, PartialEq)]
pub enum OracleOutcome<T> {
    Certified(T),
    Declined(String),
}

impl<T> OracleOutcome<T> {
    pub fn certified(self) -> Option<T> {
        match self {
            OracleOutcome::Certified(t) => Some(t),
            OracleOutcome::Declined(_) => None,
        }
    }
}

struct Bimodule<'a> {
    p0: &'a Cochain,
    constants: Vec<GaussianRational>,
}

impl<'a> Bimodule<'a> {
    fn new(p0: &'a Cochain) -> std::result::Result<Self, String> {
        if p0.degree() != 1 {
            return Err("twisting cochain must have degree 1".into());
        }
        let mut constants = Vec::with_capacity(p0.values().len());
        for (t, v) in p0.entries() {
            let lead = v.level(0);
            let higher_zero = (1..=v.order()).all(|n| v.level(n).is_zero());
            if !higher_zero || !lead.is_xi_free() || !lead.xi_free_part().is_constant() {
                return Err(format!(
                    "value at {} is not a constant; averaging does not apply",
                    p0.group().format_tuple(&t)
                ));
            }
            constants.push(lead.xi_free_part().constant_term());
        }
        Ok(Self { p0, constants })
    }

    fn map(v: &FormalSymbol, f: impl Fn(&XiPolynomial) -> Result<XiPolynomial>) -> Result<FormalSymbol> {
        FormalSymbol::from_levels(v.levels().iter().map(f).collect::<Result<_>>()?)
    }

    fn left(&self, g: usize, v: &FormalSymbol) -> Result<FormalSymbol> {
        let inv = self.p0.action().phi(g).invert();
        Self::map(v, |l| Ok(l.pull_coefficients(&inv)?.scale(&self.constants[g])))
    }

    fn right(&self, g: usize, v: &FormalSymbol) -> Result<FormalSymbol> {
        let ct = transpose(self.p0.action().phi(g).inverse_matrix());
        Self::map(v, |l| Ok(l.substitute_xi(&ct)?.scale(&self.constants[g])))
    }

    /// `g∗v = L_g R_{g⁻¹} v`.
    fn star_action(&self, g: usize, v: &FormalSymbol) -> Result<FormalSymbol> {
        self.left(g, &self.right(self.p0.group().inv(g), v)?)
    }

    /// `L_{g₁}a(g₂…) + Σ(−1)^i a(…g_ig_{i+1}…) + (−1)^{k+1} R_{g_{k+1}} a(g₁…g_k)`.
    fn differential(&self, a: &Cochain) -> Result<Cochain> {
        let k = a.degree();
        Cochain::from_fn(a.action().clone(), k + 1, a.order(), |t| {
            let mut out = a.differential_at(t);
            out.add_scaled(&self.left(t[0], a.value(&t[1..]))?, &GaussianRational::one());
            let sign = if k % 2 == 0 { -1 } else { 1 };
            out.add_scaled(
                &self.right(t[k], a.value(&t[..k]))?,
                &GaussianRational::from_integer(sign),
            );
            Ok(out)
        })
    }

    fn to_left_module(&self, a: &Cochain, inverse: bool) -> Result<Cochain> {
        let g = a.group();
        Cochain::from_fn(a.action().clone(), a.degree(), a.order(), |t| {
            let p = g.product(t);
            self.right(if inverse { p } else { g.inv(p) }, a.value(t))
        })
    }
}

/// A primitive `w` with `d_{P⁰} w = z` built by averaging, for a cocycle `z`
/// of degree ≥ 1. Declines unless every `P⁰` value is constant. The
/// primitive is re-verified against the closed-form differential.
pub fn averaging_homotopy_oracle(p0: &Cochain, z: &Cochain) -> Result<OracleOutcome<Cochain>> {
    if z.degree() == 0 {
        return Err(AlgebraError::InvalidDegree("averaging needs a cocycle of degree at least 1".into()));
    }
    let p0_at = p0.with_order(z.order());
    let bimodule = match Bimodule::new(&p0_at) {
        Ok(b) => b,
        Err(reason) => return Ok(OracleOutcome::Declined(reason)),
    };
    p0_at.check_compatible(z)?;
    if !bimodule.differential(z)?.is_zero() {
        return Err(AlgebraError::Inconsistent("averaging input is not a cocycle".into()));
    }
    let k = z.degree();
    let g = z.group();
    let f = bimodule.to_left_module(z, false)?;
    let scale = GaussianRational::from_ratio(if k % 2 == 0 { 1 } else { -1 }, g.order() as i64);
    let averaged = Cochain::from_fn(z.action().clone(), k - 1, z.order(), |t| {
        let mut acc = FormalSymbol::zero(z.dim(), z.order());
        let mut full = t.to_vec();
        full.push(0);
        for h in 0..g.order() {
            full[k - 1] = h;
            acc.add_scaled(f.value(&full), &GaussianRational::one());
        }
        Ok(acc.scale(&scale))
    })?;
    let w = bimodule.to_left_module(&averaged, true)?;
    if bimodule.differential(&w)? != *z {
        return Err(AlgebraError::Inconsistent("averaged primitive failed verification".into()));
    }
    Ok(OracleOutcome::Certified(w))
}

/// `d_{P⁰}` computed from the closed forms of left and right multiplication
/// by constant `P⁰` values. Declines otherwise.
pub fn closed_form_twisted_differential(p0: &Cochain, a: &Cochain) -> Result<OracleOutcome<Cochain>> {
    let p0_at = p0.with_order(a.order());
    match Bimodule::new(&p0_at) {
        Ok(b) => Ok(OracleOutcome::Certified(b.differential(a)?)),
        Err(reason) => Ok(OracleOutcome::Declined(reason)),
    }
}

fn action_matrix(b: &Bimodule<'_>, g: usize, basis: &GradedBasis, n: usize) -> Result<ExactMatrix> {
    let columns = (0..basis.len())
        .map(|j| {
            let v = FormalSymbol::homogeneous(basis.element(j), n, n)?;
            basis.coords(b.star_action(g, &v)?.level(n))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ExactMatrix::from_columns(basis.len(), columns))
}

/// `dim H⁰ = (1/|G|) Σ_g tr(g∗)` on the level-`n` window of `x`-degree ≤ `d`.
pub fn h0_character_formula(p0: &Cochain, n: usize, d: u32) -> Result<OracleOutcome<usize>> {
    let p0_at = p0.with_order(n);
    let b = match Bimodule::new(&p0_at) {
        Ok(b) => b,
        Err(reason) => return Ok(OracleOutcome::Declined(reason)),
    };
    let basis = GradedBasis::new(p0.dim(), n as u32, d);
    let mut total = GaussianRational::zero();
    for g in 0..p0.group().order() {
        let m = action_matrix(&b, g, &basis, n)?;
        for i in 0..basis.len() {
            total += m.get(i, i);
        }
    }
    let avg = &total / &GaussianRational::from_integer(p0.group().order() as i64);
    if !avg.is_real() || !avg.re().is_integer() {
        return Err(AlgebraError::Inconsistent(format!("character average {avg} is not an integer")));
    }
    let value: i64 = avg.re().to_integer().try_into().map_err(|_| {
        AlgebraError::Inconsistent("character average out of range".into())
    })?;
    Ok(OracleOutcome::Certified(value as usize))
}

/// Dimension of the common fixed space of all `g∗` on the window.
pub fn h0_fixed_points(p0: &Cochain, n: usize, d: u32) -> Result<OracleOutcome<usize>> {
    let p0_at = p0.with_order(n);
    let b = match Bimodule::new(&p0_at) {
        Ok(b) => b,
        Err(reason) => return Ok(OracleOutcome::Declined(reason)),
    };
    let basis = GradedBasis::new(p0.dim(), n as u32, d);
    let len = basis.len();
    let mut rows = Vec::new();
    for g in 0..p0.group().order() {
        let m = action_matrix(&b, g, &basis, n)?;
        for i in 0..len {
            let mut row = m.row(i).to_vec();
            row[i] -= &GaussianRational::one();
            rows.push(row);
        }
    }
    if len == 0 {
        return Ok(OracleOutcome::Certified(0));
    }
    Ok(OracleOutcome::Certified(len - ExactMatrix::from_rows(rows).rank()))
}
