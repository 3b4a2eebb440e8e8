//! Exact dimensions of the level-`n` twisted complex on finite windows.

use super::window::{degree_growth, matrix_of_twisted_d, Window};
use crate::amplitude_dga::MCElement;
use crate::error::{AlgebraError, Result};

/// Ranks around `C^k(n, D)`. When `window_closed` is false the differential
/// leaves the window and the numbers bound the window-relative complex only.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CohomologyReport {
    pub window: Window,
    pub dim_cochains: usize,
    pub rank_in: usize,
    pub rank_out: usize,
    pub dim_ker: usize,
    pub dim_im: usize,
    pub h_dim: usize,
    pub window_closed: bool,
}

/// `dim H^k` of `(Pol^•(n), d_{P⁰})` restricted to `x`-degree ≤ `d`: the
/// outgoing map starts at `d`, the incoming one at `d − growth` so that its
/// image lies in the window.
pub fn cohomology_report(p0: &MCElement, n: usize, k: usize, d: u32) -> Result<CohomologyReport> {
    let growth = degree_growth(p0);
    let out = matrix_of_twisted_d(p0, n, k, d)?;
    let rank_out = out.matrix.rank();
    let dim_cochains = out.domain_len();
    let rank_in = if k == 0 || growth > d {
        0
    } else {
        matrix_of_twisted_d(p0, n, k - 1, d - growth)?.matrix.rank()
    };
    let dim_ker = dim_cochains - rank_out;
    if rank_in > dim_ker {
        return Err(AlgebraError::Inconsistent(format!(
            "image of rank {rank_in} exceeds kernel of dimension {dim_ker}"
        )));
    }
    Ok(CohomologyReport {
        window: out.window,
        dim_cochains,
        rank_in,
        rank_out,
        dim_ker,
        dim_im: rank_in,
        h_dim: dim_ker - rank_in,
        window_closed: out.window.is_closed(),
    })
}
