//! Scenario files: a group, an action, named objects and a task list.
//! Objects are given inline or as paths relative to the scenario file.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use gamp_core::amplitude_dga::Cochain;
use gamp_core::formal_symbols::FormalSymbol;
use gamp_core::function_algebra::PolyFunction;
use gamp_core::group_model::AffineAction;
use serde::de::DeserializeOwned;
use serde::Deserialize;
use sha2::{Digest, Sha256};

use crate::error::InputError;
use crate::format::{
    action_from_repr, cochain_from_repr, group_from_repr, poly_from_repr, symbol_from_repr,
    ActionRepr, CochainRepr, GroupRepr, PolyRepr, SymbolRepr,
};

pub const FORMAT_VERSION: u32 = 1;

/// Inline object or a path to a JSON file holding it (plus `format_version`).
#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
pub enum Ref<T> {
    Path(String),
    Inline(T),
}

#[derive(Clone, Debug, PartialEq, Eq, Deserialize, serde::Serialize)]
#[serde(tag = "task", rename_all = "snake_case", deny_unknown_fields)]
pub enum TaskSpec {
    CheckDga,
    CheckMc {
        cochain: String,
    },
    Representation {
        cochain: String,
    },
    CocycleMultiplicative {
        cochain: String,
    },
    CocycleAdditive {
        phase: String,
    },
    Intertwiner {
        s: String,
        s_tilde: String,
        k: String,
    },
    Gauge {
        a: String,
        b: String,
        u: String,
    },
    SolveMc {
        #[serde(default)]
        p0: Option<String>,
        p1: String,
        order: usize,
    },
    SolveRigidity {
        #[serde(default)]
        cochain: Option<String>,
        #[serde(default)]
        p1: Option<String>,
        order: usize,
    },
    Cohomology {
        #[serde(default)]
        p0: Option<String>,
        xi_degree: usize,
        cochain_degree: usize,
        x_degree: u32,
    },
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ScenarioFile {
    format_version: u32,
    name: String,
    #[serde(default)]
    #[allow(dead_code)]
    description: Option<String>,
    dimension: usize,
    order: usize,
    group: Ref<GroupRepr>,
    action: Ref<ActionRepr>,
    #[serde(default)]
    cochains: BTreeMap<String, Ref<CochainRepr>>,
    #[serde(default)]
    symbols: BTreeMap<String, Ref<SymbolRepr>>,
    #[serde(default)]
    polys: BTreeMap<String, PolyRepr>,
    /// Tables `g ↦ S_g` for additive cocycle checks.
    #[serde(default)]
    phases: BTreeMap<String, BTreeMap<String, PolyRepr>>,
    #[serde(default)]
    tasks: Vec<TaskSpec>,
}

/// A loaded and validated scenario.
#[derive(Clone, Debug)]
pub struct Scenario {
    pub name: String,
    pub path: PathBuf,
    pub sha256: String,
    pub order: usize,
    pub action: Arc<AffineAction>,
    pub cochains: BTreeMap<String, Cochain>,
    pub symbols: BTreeMap<String, FormalSymbol>,
    pub polys: BTreeMap<String, PolyFunction>,
    pub phases: BTreeMap<String, Vec<PolyFunction>>,
    pub tasks: Vec<TaskSpec>,
}

struct Loader {
    base: PathBuf,
    hasher: Sha256,
}

impl Loader {
    fn read(&mut self, path: &Path) -> Result<Vec<u8>, InputError> {
        let bytes = fs::read(path).map_err(|source| InputError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        self.hasher.update(&bytes);
        Ok(bytes)
    }

    fn resolve<T: DeserializeOwned>(&mut self, r: Ref<T>, at: &str) -> Result<T, InputError> {
        match r {
            Ref::Inline(t) => Ok(t),
            Ref::Path(rel) => {
                let path = self.base.join(&rel);
                let bytes = self.read(&path)?;
                let mut value: serde_json::Value =
                    serde_json::from_slice(&bytes).map_err(|e| InputError::json(&path, e))?;
                let version = value
                    .as_object_mut()
                    .and_then(|o| o.remove("format_version"))
                    .and_then(|v| v.as_u64());
                if version != Some(FORMAT_VERSION as u64) {
                    return Err(InputError::invalid(
                        format!("{} (referenced from {at})", path.display()),
                        format!("expected \"format_version\": {FORMAT_VERSION}"),
                    ));
                }
                serde_json::from_value(value).map_err(|e| {
                    InputError::invalid(format!("{} (referenced from {at})", path.display()), e.to_string())
                })
            }
        }
    }
}

/// Degree ≥ 1 tables must be normalized: the identity tuple carries `1`, or
/// `0` for a table living purely in positive ħ-order (an increment `Pⁿ`).
fn check_normalized(c: &Cochain, at: &str) -> Result<(), InputError> {
    if c.degree() == 0 {
        return Ok(());
    }
    let e = vec![c.group().identity(); c.degree()];
    let value = c.value(&e);
    let ok = if c.level_part(0).is_zero() {
        value.is_zero()
    } else {
        value.is_one()
    };
    if ok {
        Ok(())
    } else {
        Err(InputError::invalid(
            format!("{at}.values.{:?}", c.group().format_tuple(&e)),
            "identity tuple must carry 1 (or 0 for a pure higher-order term)",
        ))
    }
}

impl Scenario {
    pub fn load(path: &Path) -> Result<Self, InputError> {
        let mut loader = Loader {
            base: path.parent().map(Path::to_path_buf).unwrap_or_default(),
            hasher: Sha256::new(),
        };
        let bytes = loader.read(path)?;
        let file: ScenarioFile = serde_json::from_slice(&bytes).map_err(|e| InputError::json(path, e))?;
        let loc = |s: &str| format!("{}:{s}", path.display());
        if file.format_version != FORMAT_VERSION {
            return Err(InputError::invalid(
                loc("format_version"),
                format!("unsupported version {}", file.format_version),
            ));
        }
        let dim = file.dimension;
        if dim == 0 {
            return Err(InputError::invalid(loc("dimension"), "must be at least 1"));
        }
        let group_repr = loader.resolve(file.group, &loc("group"))?;
        let group = group_from_repr(&group_repr, &loc("group"))?;
        let action_repr = loader.resolve(file.action, &loc("action"))?;
        let action = Arc::new(action_from_repr(&action_repr, group, dim, &loc("action"))?);

        let mut cochains = BTreeMap::new();
        for (name, r) in file.cochains {
            let at = loc(&format!("cochains.{name}"));
            let repr = loader.resolve(r, &at)?;
            let c = cochain_from_repr(&repr, action.clone(), file.order, &at)?;
            check_normalized(&c, &at)?;
            cochains.insert(name, c);
        }
        let mut symbols = BTreeMap::new();
        for (name, r) in file.symbols {
            let at = loc(&format!("symbols.{name}"));
            let repr = loader.resolve(r, &at)?;
            let s = symbol_from_repr(&repr, dim, &at)?;
            if s.order() != file.order {
                return Err(InputError::invalid(
                    at,
                    format!("truncation order {} differs from the scenario order {}", s.order(), file.order),
                ));
            }
            symbols.insert(name, s);
        }
        let mut polys = BTreeMap::new();
        for (name, r) in &file.polys {
            polys.insert(name.clone(), poly_from_repr(r, dim, &loc(&format!("polys.{name}")))?);
        }
        let mut phases = BTreeMap::new();
        for (name, table) in &file.phases {
            let at = loc(&format!("phases.{name}"));
            let g = action.group();
            for key in table.keys() {
                if g.index_of(key).is_none() {
                    return Err(InputError::invalid(format!("{at}.{key}"), "not an element of the group"));
                }
            }
            let values = g
                .labels()
                .iter()
                .map(|l| match table.get(l) {
                    Some(r) => poly_from_repr(r, dim, &format!("{at}.{l}")),
                    None => Ok(PolyFunction::zero(dim)),
                })
                .collect::<Result<Vec<_>, _>>()?;
            phases.insert(name.clone(), values);
        }

        let scenario = Scenario {
            name: file.name,
            path: path.to_path_buf(),
            sha256: hex::encode(loader.hasher.finalize()),
            order: file.order,
            action,
            cochains,
            symbols,
            polys,
            phases,
            tasks: file.tasks,
        };
        for (i, t) in scenario.tasks.iter().enumerate() {
            scenario.check_refs(t, &loc(&format!("tasks[{i}]")))?;
        }
        Ok(scenario)
    }

    pub fn cochain(&self, name: &str, at: &str) -> Result<&Cochain, InputError> {
        self.cochains
            .get(name)
            .ok_or_else(|| InputError::invalid(at, format!("unknown cochain {name:?}")))
    }

    pub fn symbol(&self, name: &str, at: &str) -> Result<&FormalSymbol, InputError> {
        self.symbols
            .get(name)
            .ok_or_else(|| InputError::invalid(at, format!("unknown symbol {name:?}")))
    }

    pub fn poly(&self, name: &str, at: &str) -> Result<&PolyFunction, InputError> {
        self.polys
            .get(name)
            .ok_or_else(|| InputError::invalid(at, format!("unknown polynomial {name:?}")))
    }

    pub fn phase(&self, name: &str, at: &str) -> Result<&[PolyFunction], InputError> {
        self.phases
            .get(name)
            .map(Vec::as_slice)
            .ok_or_else(|| InputError::invalid(at, format!("unknown phase table {name:?}")))
    }

    /// Every name a task mentions must resolve.
    pub fn check_refs(&self, task: &TaskSpec, at: &str) -> Result<(), InputError> {
        match task {
            TaskSpec::CheckDga => {}
            TaskSpec::CheckMc { cochain }
            | TaskSpec::Representation { cochain }
            | TaskSpec::CocycleMultiplicative { cochain } => {
                self.cochain(cochain, at)?;
            }
            TaskSpec::CocycleAdditive { phase } => {
                self.phase(phase, at)?;
            }
            TaskSpec::Intertwiner { s, s_tilde, k } => {
                self.phase(s, at)?;
                self.phase(s_tilde, at)?;
                self.poly(k, at)?;
            }
            TaskSpec::Gauge { a, b, u } => {
                self.cochain(a, at)?;
                self.cochain(b, at)?;
                self.symbol(u, at)?;
            }
            TaskSpec::SolveMc { p0, p1, .. } => {
                if let Some(p0) = p0 {
                    self.cochain(p0, at)?;
                }
                self.cochain(p1, at)?;
            }
            TaskSpec::SolveRigidity { cochain, p1, .. } => {
                match (cochain, p1) {
                    (Some(c), None) => {
                        self.cochain(c, at)?;
                    }
                    (None, Some(p1)) => {
                        self.cochain(p1, at)?;
                    }
                    _ => {
                        return Err(InputError::invalid(at, "give exactly one of \"cochain\" or \"p1\""));
                    }
                }
            }
            TaskSpec::Cohomology { p0, .. } => {
                if let Some(p0) = p0 {
                    self.cochain(p0, at)?;
                }
            }
        }
        Ok(())
    }
}
