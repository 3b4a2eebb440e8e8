//! Finite groups given by multiplication tables and their exact affine
//! actions on `R^d`.

use std::collections::{BTreeMap, HashMap};

use thiserror::Error;

use crate::error::{AlgebraError, Result};
use crate::function_algebra::AffineDiffeo;

/// Group-axiom violations, each carrying the labels that witness it.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupError {
    #[error("group has no elements")]
    Empty,
    #[error("duplicate element label {0:?}")]
    DuplicateLabel(String),
    #[error("table entry for ({0}, {1}) is missing")]
    MissingEntry(String, String),
    #[error("table entry for ({0}, {1}) names unknown element {2:?}")]
    UnknownElement(String, String, String),
    #[error("no identity element")]
    NoIdentity,
    #[error("element {0} has no inverse")]
    NoInverse(String),
    #[error("not associative: ({0}{1}){2} != {0}({1}{2})")]
    NonAssociative(String, String, String),
}

/// A validated finite group. Elements are referred to by index into
/// `labels`; index order is the enumeration order for cochain tuples.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteGroup {
    labels: Vec<String>,
    table: Vec<Vec<usize>>,
    identity: usize,
    inverse: Vec<usize>,
}

impl FiniteGroup {
    /// Validates `table[a][b] = a·b` (indices) against the group axioms.
    pub fn from_table(labels: Vec<String>, table: Vec<Vec<usize>>) -> Result<Self, GroupError> {
        let n = labels.len();
        if n == 0 {
            return Err(GroupError::Empty);
        }
        let mut seen = HashMap::new();
        for (i, l) in labels.iter().enumerate() {
            if seen.insert(l.clone(), i).is_some() {
                return Err(GroupError::DuplicateLabel(l.clone()));
            }
        }
        for a in 0..n {
            for b in 0..n {
                match table.get(a).and_then(|row| row.get(b)) {
                    None => {
                        return Err(GroupError::MissingEntry(labels[a].clone(), labels[b].clone()))
                    }
                    Some(&c) if c >= n => {
                        return Err(GroupError::UnknownElement(
                            labels[a].clone(),
                            labels[b].clone(),
                            format!("#{c}"),
                        ))
                    }
                    Some(_) => {}
                }
            }
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if table[table[a][b]][c] != table[a][table[b][c]] {
                        return Err(GroupError::NonAssociative(
                            labels[a].clone(),
                            labels[b].clone(),
                            labels[c].clone(),
                        ));
                    }
                }
            }
        }
        let identity = (0..n)
            .find(|&e| (0..n).all(|g| table[e][g] == g && table[g][e] == g))
            .ok_or(GroupError::NoIdentity)?;
        let inverse = (0..n)
            .map(|g| {
                (0..n)
                    .find(|&h| table[g][h] == identity && table[h][g] == identity)
                    .ok_or_else(|| GroupError::NoInverse(labels[g].clone()))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Self {
            labels,
            table,
            identity,
            inverse,
        })
    }

    /// Builds from labels and a product table keyed by label pairs.
    pub fn build(
        elements: Vec<String>,
        table: &BTreeMap<(String, String), String>,
    ) -> Result<Self, GroupError> {
        let index: HashMap<&str, usize> = elements
            .iter()
            .enumerate()
            .map(|(i, l)| (l.as_str(), i))
            .collect();
        let mut rows = Vec::with_capacity(elements.len());
        for a in &elements {
            let mut row = Vec::with_capacity(elements.len());
            for b in &elements {
                let prod = table
                    .get(&(a.clone(), b.clone()))
                    .ok_or_else(|| GroupError::MissingEntry(a.clone(), b.clone()))?;
                let &idx = index.get(prod.as_str()).ok_or_else(|| {
                    GroupError::UnknownElement(a.clone(), b.clone(), prod.clone())
                })?;
                row.push(idx);
            }
            rows.push(row);
        }
        Self::from_table(elements, rows)
    }

    /// `Z/n` with elements `e, g, g^2, …`.
    pub fn cyclic(n: usize) -> Self {
        let labels = (0..n)
            .map(|k| match k {
                0 => "e".to_string(),
                1 => "g".to_string(),
                _ => format!("g{k}"),
            })
            .collect();
        let table = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
        Self::from_table(labels, table).expect("cyclic group table is valid")
    }

    /// `Z/2` labelled `e, s`.
    pub fn z2() -> Self {
        Self::from_table(
            vec!["e".into(), "s".into()],
            vec![vec![0, 1], vec![1, 0]],
        )
        .expect("Z/2 table is valid")
    }

    /// `S₃` as permutations of `{0,1,2}` composed right-to-left.
    pub fn symmetric3() -> Self {
        let perms = Self::s3_permutations();
        let labels = perms
            .iter()
            .map(|p| format!("[{}{}{}]", p[0], p[1], p[2]))
            .map(|l| if l == "[012]" { "e".to_string() } else { l })
            .collect();
        let table = perms
            .iter()
            .map(|s| {
                perms
                    .iter()
                    .map(|t| {
                        let st = [s[t[0]], s[t[1]], s[t[2]]];
                        perms.iter().position(|p| *p == st).expect("closed")
                    })
                    .collect()
            })
            .collect();
        Self::from_table(labels, table).expect("S3 table is valid")
    }

    /// The permutations underlying [`FiniteGroup::symmetric3`], in element order.
    pub fn s3_permutations() -> Vec<[usize; 3]> {
        vec![
            [0, 1, 2],
            [0, 2, 1],
            [1, 0, 2],
            [1, 2, 0],
            [2, 0, 1],
            [2, 1, 0],
        ]
    }

    pub fn order(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, g: usize) -> &str {
        &self.labels[g]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }

    pub fn inv(&self, g: usize) -> usize {
        self.inverse[g]
    }

    /// `g₁ g₂ ⋯ g_k`; the identity for the empty tuple.
    pub fn product(&self, tuple: &[usize]) -> usize {
        tuple.iter().fold(self.identity, |acc, &g| self.table[acc][g])
    }

    /// All of `G^k` in lexicographic order of element indices.
    pub fn enumerate_tuples(&self, k: usize) -> Vec<Vec<usize>> {
        let n = self.order();
        let total = n.pow(k as u32);
        (0..total).map(|idx| self.tuple_at(k, idx)).collect()
    }

    /// Position of `tuple` in [`FiniteGroup::enumerate_tuples`].
    pub fn tuple_index(&self, tuple: &[usize]) -> usize {
        tuple.iter().fold(0, |acc, &g| acc * self.order() + g)
    }

    pub fn tuple_at(&self, k: usize, mut idx: usize) -> Vec<usize> {
        let n = self.order();
        let mut t = vec![0; k];
        for slot in t.iter_mut().rev() {
            *slot = idx % n;
            idx /= n;
        }
        t
    }

    pub fn format_tuple(&self, tuple: &[usize]) -> String {
        tuple
            .iter()
            .map(|&g| self.labels[g].as_str())
            .collect::<Vec<_>>()
            .join(",")
    }

    /// Parses `"g1,g2,…"` (empty string for the empty tuple).
    pub fn parse_tuple(&self, s: &str) -> Option<Vec<usize>> {
        if s.trim().is_empty() {
            return Some(Vec::new());
        }
        s.split(',').map(|l| self.index_of(l.trim())).collect()
    }
}

/// Outcome of checking that `g ↦ φ_g` is a left action.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ActionReport {
    pub identity_ok: bool,
    /// Pairs `(g₁, g₂)` with `φ_{g₁g₂} ≠ φ_{g₁}∘φ_{g₂}`.
    pub failing_pairs: Vec<(usize, usize)>,
}

impl ActionReport {
    pub fn is_valid(&self) -> bool {
        self.identity_ok && self.failing_pairs.is_empty()
    }
}

/// A validated left action `φ_{g₁g₂} = φ_{g₁}∘φ_{g₂}` by affine maps.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineAction {
    group: FiniteGroup,
    maps: Vec<AffineDiffeo>,
}

/// Checks identity and homomorphism properties without building an action.
pub fn action_validate(group: &FiniteGroup, maps: &[AffineDiffeo]) -> ActionReport {
    let identity_ok = maps[group.identity()].is_identity();
    let mut failing_pairs = Vec::new();
    for a in 0..group.order() {
        for b in 0..group.order() {
            let ok = maps[a]
                .compose(&maps[b])
                .map(|c| c == maps[group.mul(a, b)])
                .unwrap_or(false);
            if !ok {
                failing_pairs.push((a, b));
            }
        }
    }
    ActionReport {
        identity_ok,
        failing_pairs,
    }
}

impl AffineAction {
    pub fn new(group: FiniteGroup, maps: Vec<AffineDiffeo>) -> Result<Self> {
        if maps.len() != group.order() {
            return Err(AlgebraError::InvalidAction(format!(
                "expected {} maps, got {}",
                group.order(),
                maps.len()
            )));
        }
        let dim = maps[0].dim();
        if let Some(m) = maps.iter().find(|m| m.dim() != dim) {
            return Err(AlgebraError::DimensionMismatch {
                expected: dim,
                found: m.dim(),
            });
        }
        let report = action_validate(&group, &maps);
        if !report.identity_ok {
            return Err(AlgebraError::InvalidAction(format!(
                "identity {} does not act trivially",
                group.label(group.identity())
            )));
        }
        if let Some(&(a, b)) = report.failing_pairs.first() {
            return Err(AlgebraError::InvalidAction(format!(
                "phi_{{{}{}}} != phi_{} o phi_{}",
                group.label(a),
                group.label(b),
                group.label(a),
                group.label(b)
            )));
        }
        Ok(Self { group, maps })
    }

    /// Every element acts as the identity.
    pub fn trivial(group: FiniteGroup, dim: usize) -> Self {
        let maps = vec![AffineDiffeo::identity(dim); group.order()];
        Self { group, maps }
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn dim(&self) -> usize {
        self.maps[0].dim()
    }

    pub fn phi(&self, g: usize) -> &AffineDiffeo {
        &self.maps[g]
    }

    pub fn maps(&self) -> &[AffineDiffeo] {
        &self.maps
    }

    /// `φ_{g₁⋯g_k}`.
    pub fn phi_of(&self, tuple: &[usize]) -> &AffineDiffeo {
        &self.maps[self.group.product(tuple)]
    }

    pub fn is_trivial(&self) -> bool {
        self.maps.iter().all(AffineDiffeo::is_identity)
    }
}
