//! Fixture actions and seeded random generators shared by tests.

use std::sync::Arc;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::amplitude_dga::Cochain;
use crate::formal_symbols::{FormalSymbol, XiPolynomial};
use crate::function_algebra::{AffineDiffeo, GaussianRational, Matrix, MultiIndex, PolyFunction};
use crate::group_model::{AffineAction, FiniteGroup};

pub fn q(n: i64) -> GaussianRational {
    GaussianRational::from_integer(n)
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `Z/2` acting on `R` by `x ↦ −x`.
pub fn z2_reflection() -> AffineAction {
    let s = AffineDiffeo::scalar(q(-1), q(0)).expect("invertible");
    AffineAction::new(FiniteGroup::z2(), vec![AffineDiffeo::identity(1), s]).expect("valid action")
}

/// `Z/3` acting on `R²` by the order-3 integer matrix `[[0,−1],[1,−1]]`
/// about the point `center`.
pub fn z3_rotation(center: [i64; 2]) -> AffineAction {
    let r: Matrix = vec![vec![q(0), q(-1)], vec![q(1), q(-1)]];
    let c = [q(center[0]), q(center[1])];
    let mut maps = vec![AffineDiffeo::identity(2)];
    let mut m = r.clone();
    for _ in 1..3 {
        let mc = crate::function_algebra::affine::mat_vec(&m, &c);
        let offset = vec![&c[0] - &mc[0], &c[1] - &mc[1]];
        maps.push(AffineDiffeo::new(m.clone(), offset).expect("invertible"));
        m = crate::function_algebra::affine::mat_mul(&r, &m);
    }
    AffineAction::new(FiniteGroup::cyclic(3), maps).expect("valid action")
}

/// `S₃` permuting coordinates of `R³` about the point `center`:
/// `x ↦ P_σ x + (c − P_σ c)` with `(P_σ)_{σ(j), j} = 1`.
pub fn s3_affine_action(center: [i64; 3]) -> AffineAction {
    let c: Vec<GaussianRational> = center.iter().map(|&v| q(v)).collect();
    let maps = FiniteGroup::s3_permutations()
        .iter()
        .map(|p| {
            let mut m = vec![vec![q(0); 3]; 3];
            for j in 0..3 {
                m[p[j]][j] = q(1);
            }
            let mc = crate::function_algebra::affine::mat_vec(&m, &c);
            let offset = c.iter().zip(&mc).map(|(a, b)| a - b).collect();
            AffineDiffeo::new(m, offset).expect("permutation matrices are invertible")
        })
        .collect();
    AffineAction::new(FiniteGroup::symmetric3(), maps).expect("valid action")
}

pub fn s3_permutation_action() -> AffineAction {
    s3_affine_action([0, 0, 0])
}

pub fn shared(action: AffineAction) -> Arc<AffineAction> {
    Arc::new(action)
}

/// A small Gaussian rational: real part in `[-3, 3]` over `{1, 2, 3}`, and
/// an imaginary part a quarter of the time.
pub fn random_scalar<R: Rng>(rng: &mut R) -> GaussianRational {
    let re = GaussianRational::from_ratio(rng.gen_range(-3..=3), rng.gen_range(1..=3));
    if rng.gen_bool(0.25) {
        let im = GaussianRational::from_ratio(rng.gen_range(-2..=2), rng.gen_range(1..=2));
        &re + &(&im * &GaussianRational::i())
    } else {
        re
    }
}

/// A sparse random polynomial of degree at most `max_deg`.
pub fn random_poly<R: Rng>(rng: &mut R, dim: usize, max_deg: u32, terms: usize) -> PolyFunction {
    let monomials = MultiIndex::all_up_to(dim, max_deg);
    let mut f = PolyFunction::zero(dim);
    for _ in 0..terms {
        let beta = monomials[rng.gen_range(0..monomials.len())].clone();
        f.add_term(beta, &random_scalar(rng));
    }
    f
}

/// A random graded symbol: level `n` has `ξ`-degree at most `n`.
pub fn random_symbol<R: Rng>(rng: &mut R, dim: usize, order: usize, max_x_deg: u32) -> FormalSymbol {
    let levels = (0..=order)
        .map(|n| {
            let mut level = XiPolynomial::zero(dim);
            for alpha in MultiIndex::all_up_to(dim, n as u32) {
                if rng.gen_bool(0.4) {
                    level.add_term(alpha, &random_poly(rng, dim, max_x_deg, 2));
                }
            }
            level
        })
        .collect();
    FormalSymbol::from_levels(levels).expect("grading holds by construction")
}

/// A random cochain; with `normalized` the value at `(e, …, e)` is `1`.
pub fn random_cochain<R: Rng>(
    rng: &mut R,
    action: &Arc<AffineAction>,
    degree: usize,
    order: usize,
    max_x_deg: u32,
    normalized: bool,
) -> Cochain {
    let g = action.group();
    let e = g.identity();
    let values = g
        .enumerate_tuples(degree)
        .into_iter()
        .map(|t| {
            if normalized && t.iter().all(|&h| h == e) {
                FormalSymbol::one(action.dim(), order)
            } else {
                random_symbol(rng, action.dim(), order, max_x_deg)
            }
        })
        .collect();
    Cochain::new(action.clone(), degree, values).expect("shape is consistent")
}

/// A random invertible affine map with small integer entries.
pub fn random_affine<R: Rng>(rng: &mut R, dim: usize) -> AffineDiffeo {
    loop {
        let m: Matrix = (0..dim)
            .map(|_| (0..dim).map(|_| q(rng.gen_range(-2..=2))).collect())
            .collect();
        let b = (0..dim).map(|_| q(rng.gen_range(-2..=2))).collect();
        if let Ok(phi) = AffineDiffeo::new(m, b) {
            return phi;
        }
    }
}
