//! JSON shapes of the scenario objects and their conversion to and from
//! the exact core types. Rationals travel as `"p/q"` strings.

use std::collections::BTreeMap;

use gamp_core::formal_symbols::{FormalSymbol, XiPolynomial};
use gamp_core::function_algebra::scalar::{format_rational, parse_rational};
use gamp_core::function_algebra::{AffineDiffeo, GaussianRational, MultiIndex, PolyFunction};
use gamp_core::group_model::{AffineAction, FiniteGroup};
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::InputError;

/// A scalar: `"p/q"` when real, `{"re": "p/q", "im": "p/q"}` otherwise.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ScalarRepr {
    Real(String),
    Complex {
        re: String,
        #[serde(default = "zero_string")]
        im: String,
    },
}

fn zero_string() -> String {
    "0".into()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermRepr {
    pub beta: Vec<u32>,
    pub coeff: ScalarRepr,
}

pub type PolyRepr = Vec<TermRepr>;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct XiTermRepr {
    pub alpha: Vec<u32>,
    pub poly: PolyRepr,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LevelRepr {
    pub n: usize,
    pub terms: Vec<XiTermRepr>,
}

/// A truncated symbol; only nonzero levels are listed.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SymbolRepr {
    pub order: usize,
    pub levels: Vec<LevelRepr>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AffineRepr {
    #[serde(rename = "A")]
    pub matrix: Vec<Vec<ScalarRepr>>,
    #[serde(rename = "b")]
    pub offset: Vec<ScalarRepr>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GroupRepr {
    /// `"Z2"`, `"Z3"`, `"S3"` or `"Z<n>"`.
    Named { named: String },
    Table {
        elements: Vec<String>,
        /// Keys `"g,h"`, values the product label.
        table: BTreeMap<String, String>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ActionRepr {
    Trivial { trivial: bool },
    Maps { maps: BTreeMap<String, AffineRepr> },
}

/// A cochain table keyed by comma-joined element labels; omitted tuples
/// are zero. Degree 0 uses the key `""`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CochainRepr {
    pub degree: usize,
    pub values: BTreeMap<String, SymbolRepr>,
}

fn invalid(location: &str, message: impl Into<String>) -> InputError {
    InputError::Invalid {
        location: location.to_string(),
        message: message.into(),
    }
}

pub fn scalar_to_repr(c: &GaussianRational) -> ScalarRepr {
    if c.is_real() {
        ScalarRepr::Real(format_rational(c.re()))
    } else {
        ScalarRepr::Complex {
            re: format_rational(c.re()),
            im: format_rational(c.im()),
        }
    }
}

pub fn scalar_from_repr(r: &ScalarRepr, at: &str) -> Result<GaussianRational, InputError> {
    let parse = |s: &str| parse_rational(s).map_err(|e| invalid(at, e.to_string()));
    Ok(match r {
        ScalarRepr::Real(s) => GaussianRational::new(parse(s)?, Zero::zero()),
        ScalarRepr::Complex { re, im } => GaussianRational::new(parse(re)?, parse(im)?),
    })
}

pub fn poly_to_repr(f: &PolyFunction) -> PolyRepr {
    f.terms()
        .map(|(beta, c)| TermRepr {
            beta: beta.0.clone(),
            coeff: scalar_to_repr(c),
        })
        .collect()
}

pub fn poly_from_repr(r: &PolyRepr, dim: usize, at: &str) -> Result<PolyFunction, InputError> {
    let mut f = PolyFunction::zero(dim);
    for (i, t) in r.iter().enumerate() {
        let here = format!("{at}[{i}]");
        if t.beta.len() != dim {
            return Err(invalid(&here, format!("beta has {} entries, dimension is {dim}", t.beta.len())));
        }
        f.add_term(MultiIndex(t.beta.clone()), &scalar_from_repr(&t.coeff, &here)?);
    }
    Ok(f)
}

pub fn symbol_to_repr(p: &FormalSymbol) -> SymbolRepr {
    let levels = p
        .levels()
        .iter()
        .enumerate()
        .filter(|(_, l)| !l.is_zero())
        .map(|(n, l)| LevelRepr {
            n,
            terms: l
                .terms()
                .map(|(alpha, f)| XiTermRepr {
                    alpha: alpha.0.clone(),
                    poly: poly_to_repr(f),
                })
                .collect(),
        })
        .collect();
    SymbolRepr {
        order: p.order(),
        levels,
    }
}

pub fn symbol_from_repr(r: &SymbolRepr, dim: usize, at: &str) -> Result<FormalSymbol, InputError> {
    let mut levels = vec![XiPolynomial::zero(dim); r.order + 1];
    for (i, l) in r.levels.iter().enumerate() {
        let here = format!("{at}.levels[{i}]");
        if l.n > r.order {
            return Err(invalid(&here, format!("level {} exceeds order {}", l.n, r.order)));
        }
        for (j, t) in l.terms.iter().enumerate() {
            let there = format!("{here}.terms[{j}]");
            if t.alpha.len() != dim {
                return Err(invalid(&there, format!("alpha has {} entries, dimension is {dim}", t.alpha.len())));
            }
            let f = poly_from_repr(&t.poly, dim, &format!("{there}.poly"))?;
            levels[l.n].add_term(MultiIndex(t.alpha.clone()), &f);
        }
    }
    FormalSymbol::from_levels(levels).map_err(|e| invalid(at, e.to_string()))
}

pub fn affine_to_repr(phi: &AffineDiffeo) -> AffineRepr {
    AffineRepr {
        matrix: phi.matrix().iter().map(|row| row.iter().map(scalar_to_repr).collect()).collect(),
        offset: phi.offset().iter().map(scalar_to_repr).collect(),
    }
}

/// Inverses are recomputed, never read.
pub fn affine_from_repr(r: &AffineRepr, dim: usize, at: &str) -> Result<AffineDiffeo, InputError> {
    if r.matrix.len() != dim || r.matrix.iter().any(|row| row.len() != dim) || r.offset.len() != dim {
        return Err(invalid(at, format!("affine map must be {dim}x{dim} with a length-{dim} offset")));
    }
    let matrix = r
        .matrix
        .iter()
        .enumerate()
        .map(|(i, row)| {
            row.iter()
                .enumerate()
                .map(|(j, v)| scalar_from_repr(v, &format!("{at}.A[{i}][{j}]")))
                .collect()
        })
        .collect::<Result<Vec<Vec<_>>, _>>()?;
    let offset = r
        .offset
        .iter()
        .enumerate()
        .map(|(i, v)| scalar_from_repr(v, &format!("{at}.b[{i}]")))
        .collect::<Result<Vec<_>, _>>()?;
    AffineDiffeo::new(matrix, offset).map_err(|e| invalid(at, e.to_string()))
}

pub fn group_from_repr(r: &GroupRepr, at: &str) -> Result<FiniteGroup, InputError> {
    match r {
        GroupRepr::Named { named } => match named.as_str() {
            "Z2" => Ok(FiniteGroup::z2()),
            "S3" => Ok(FiniteGroup::symmetric3()),
            other => other
                .strip_prefix('Z')
                .and_then(|n| n.parse::<usize>().ok())
                .filter(|&n| n >= 1)
                .map(FiniteGroup::cyclic)
                .ok_or_else(|| invalid(at, format!("unknown group name {other:?}"))),
        },
        GroupRepr::Table { elements, table } => {
            let mut pairs = BTreeMap::new();
            for (key, value) in table {
                let (a, b) = key
                    .split_once(',')
                    .ok_or_else(|| invalid(&format!("{at}.table.{key:?}"), "key must be \"g,h\""))?;
                pairs.insert((a.trim().to_string(), b.trim().to_string()), value.clone());
            }
            FiniteGroup::build(elements.clone(), &pairs).map_err(|e| invalid(at, e.to_string()))
        }
    }
}

pub fn group_to_repr(g: &FiniteGroup) -> GroupRepr {
    let mut table = BTreeMap::new();
    for a in 0..g.order() {
        for b in 0..g.order() {
            table.insert(format!("{},{}", g.label(a), g.label(b)), g.label(g.mul(a, b)).to_string());
        }
    }
    GroupRepr::Table {
        elements: g.labels().to_vec(),
        table,
    }
}

pub fn action_from_repr(
    r: &ActionRepr,
    group: FiniteGroup,
    dim: usize,
    at: &str,
) -> Result<AffineAction, InputError> {
    match r {
        ActionRepr::Trivial { trivial: true } => Ok(AffineAction::trivial(group, dim)),
        ActionRepr::Trivial { trivial: false } => {
            Err(invalid(at, "\"trivial\": false needs explicit maps"))
        }
        ActionRepr::Maps { maps } => {
            for key in maps.keys() {
                if group.index_of(key).is_none() {
                    return Err(invalid(&format!("{at}.maps.{key}"), "not an element of the group"));
                }
            }
            let phis = group
                .labels()
                .iter()
                .map(|label| {
                    let here = format!("{at}.maps.{label}");
                    let m = maps
                        .get(label)
                        .ok_or_else(|| invalid(&here, format!("missing map for element {label:?}")))?;
                    affine_from_repr(m, dim, &here)
                })
                .collect::<Result<Vec<_>, _>>()?;
            AffineAction::new(group, phis).map_err(|e| invalid(at, e.to_string()))
        }
    }
}

pub fn action_to_repr(action: &AffineAction) -> ActionRepr {
    let g = action.group();
    ActionRepr::Maps {
        maps: (0..g.order())
            .map(|h| (g.label(h).to_string(), affine_to_repr(action.phi(h))))
            .collect(),
    }
}

pub fn cochain_to_repr(c: &gamp_core::amplitude_dga::Cochain) -> CochainRepr {
    let g = c.group();
    CochainRepr {
        degree: c.degree(),
        values: c
            .entries()
            .filter(|(_, v)| !v.is_zero())
            .map(|(t, v)| (g.format_tuple(&t), symbol_to_repr(v)))
            .collect(),
    }
}

/// Builds the table, filling omitted tuples with zero at `order`.
pub fn cochain_from_repr(
    r: &CochainRepr,
    action: std::sync::Arc<AffineAction>,
    order: usize,
    at: &str,
) -> Result<gamp_core::amplitude_dga::Cochain, InputError> {
    let g = action.group().clone();
    let dim = action.dim();
    let mut values = vec![FormalSymbol::zero(dim, order); g.order().pow(r.degree as u32)];
    for (key, sym) in &r.values {
        let here = format!("{at}.values.{key:?}");
        let tuple = g
            .parse_tuple(key)
            .filter(|t| t.len() == r.degree)
            .ok_or_else(|| invalid(&here, format!("not a {}-tuple of group elements", r.degree)))?;
        let s = symbol_from_repr(sym, dim, &here)?;
        if s.order() != order {
            return Err(invalid(
                &here,
                format!("truncation order {} differs from the scenario order {order}", s.order()),
            ));
        }
        values[g.tuple_index(&tuple)] = s;
    }
    gamp_core::amplitude_dga::Cochain::new(action, r.degree, values).map_err(|e| invalid(at, e.to_string()))
}
