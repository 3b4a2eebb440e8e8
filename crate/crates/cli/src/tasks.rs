//! Execution of scenario tasks against the core library.

use std::sync::Arc;
use std::time::Instant;

use gamp_core::amplitude_dga::{
    additive_cocycle_check, coboundary_intertwiner_check, cup_star, differential_d,
    gauge_relation_check, mc_residual, representation_check, xi_multiplicative_cocycle_check,
    Cochain, MCElement, Witness,
};
use gamp_core::group_model::AffineAction;
use gamp_core::mc_solver::{
    averaging_homotopy_oracle, cohomology_report, h0_character_formula, mc_extend, rigidity_gauge,
    Extension, ObstructionCertificate, OracleOutcome, SolveError, SolvedStep, Window,
};
use gamp_core::AlgebraError;
use serde_json::{json, Value};

use crate::error::InputError;
use crate::format::{cochain_to_repr, poly_to_repr, scalar_to_repr, symbol_to_repr};
use crate::report::{Difference, Outcome, Report, TaskReport, WitnessRepr};
use crate::scenario::{Scenario, TaskSpec};

/// Set to `timing` to add wall-clock times to reports.
pub const VERBOSITY_ENV: &str = "GAMP_REPORT_VERBOSITY";

fn timing_enabled() -> bool {
    std::env::var(VERBOSITY_ENV).map(|v| v == "timing").unwrap_or(false)
}

/// Runs `tasks` in order and assembles the report.
pub fn run_tasks(scenario: &Scenario, tasks: &[TaskSpec]) -> Report {
    let timing = timing_enabled();
    let reports = tasks
        .iter()
        .map(|t| {
            let start = Instant::now();
            let mut r = run_task(scenario, t);
            if timing {
                r.elapsed_ms = Some(start.elapsed().as_millis());
            }
            r
        })
        .collect();
    Report::new(&scenario.name, &scenario.sha256, reports)
}

pub fn run_scenario(scenario: &Scenario) -> Report {
    run_tasks(scenario, &scenario.tasks)
}

fn task_name(t: &TaskSpec) -> &'static str {
    match t {
        TaskSpec::CheckDga => "check_dga",
        TaskSpec::CheckMc { .. } => "check_mc",
        TaskSpec::Representation { .. } => "representation",
        TaskSpec::CocycleMultiplicative { .. } => "cocycle_multiplicative",
        TaskSpec::CocycleAdditive { .. } => "cocycle_additive",
        TaskSpec::Intertwiner { .. } => "intertwiner",
        TaskSpec::Gauge { .. } => "gauge",
        TaskSpec::SolveMc { .. } => "solve_mc",
        TaskSpec::SolveRigidity { .. } => "solve_rigidity",
        TaskSpec::Cohomology { .. } => "cohomology",
    }
}

/// A task-level failure that is not a failed check.
enum TaskError {
    Input(InputError),
    Algebra(AlgebraError),
}

impl From<InputError> for TaskError {
    fn from(e: InputError) -> Self {
        TaskError::Input(e)
    }
}

impl From<AlgebraError> for TaskError {
    fn from(e: AlgebraError) -> Self {
        TaskError::Algebra(e)
    }
}

pub fn run_task(scenario: &Scenario, task: &TaskSpec) -> TaskReport {
    let name = task_name(task);
    match execute(scenario, task) {
        Ok(r) => r,
        Err(TaskError::Input(e)) => TaskReport::new(name, "", Outcome::Error, e.to_string()),
        Err(TaskError::Algebra(e)) => TaskReport::new(name, "", Outcome::Error, e.to_string()),
    }
}

fn witnesses(action: &AffineAction, ws: &[Witness]) -> Vec<WitnessRepr> {
    ws.iter()
        .map(|w| WitnessRepr {
            tuple: labels(action, &w.tuple),
            difference: Difference::Symbol(symbol_to_repr(&w.difference)),
        })
        .collect()
}

fn labels(action: &AffineAction, tuple: &[usize]) -> Vec<String> {
    tuple.iter().map(|&g| action.group().label(g).to_string()).collect()
}

fn pass_or_fail(ok: bool) -> Outcome {
    if ok {
        Outcome::Pass
    } else {
        Outcome::Fail
    }
}

fn p0_or_unit(scenario: &Scenario, p0: &Option<String>, at: &str) -> Result<MCElement, TaskError> {
    match p0 {
        Some(name) => Ok(MCElement::new(scenario.cochain(name, at)?.clone())?),
        None => Ok(MCElement::unit(scenario.action.clone(), scenario.order)),
    }
}

fn window_json(w: &Window) -> Value {
    json!({"n": w.n, "k": w.k, "d_in": w.d_in, "d_out": w.d_out})
}

fn step_json(s: &SolvedStep) -> Value {
    json!({
        "order": s.order,
        "status": "solved",
        "window": window_json(&s.window),
        "rank": s.rank,
        "rhs_zero": s.rhs_zero,
    })
}

fn certificate_json(c: &ObstructionCertificate) -> Value {
    json!({
        "window": window_json(&c.window),
        "rank": c.rank,
        "rank_augmented": c.rank_augmented,
        "cocycle": cochain_to_repr(&c.cocycle),
        "rhs_coords": c.rhs_coords.iter().map(scalar_to_repr).collect::<Vec<_>>(),
        "left_null": c.left_null.iter().map(scalar_to_repr).collect::<Vec<_>>(),
    })
}

fn solve_failure(name: &str, target: &str, e: SolveError) -> Result<TaskReport, TaskError> {
    match e {
        SolveError::Obstructed(cert) => Ok(TaskReport::new(
            name,
            target,
            Outcome::Fail,
            format!("obstructed at order {}", cert.window.n),
        )
        .with_details(json!({ "obstruction": certificate_json(&cert) }))),
        SolveError::Algebra(e) => Err(e.into()),
    }
}

fn extension_orders(ext: &Extension) -> Vec<Value> {
    let mut orders = vec![json!({"order": 1, "status": "given"})];
    orders.extend(ext.steps.iter().map(step_json));
    orders
}

fn execute(scenario: &Scenario, task: &TaskSpec) -> Result<TaskReport, TaskError> {
    let name = task_name(task);
    let action = &scenario.action;
    match task {
        TaskSpec::CheckDga => check_dga(scenario),
        TaskSpec::CheckMc { cochain } => {
            let c = scenario.cochain(cochain, name)?;
            let residual = mc_residual(c)?;
            let ws: Vec<Witness> = residual
                .entries()
                .filter(|(_, v)| !v.is_zero())
                .map(|(t, v)| Witness {
                    tuple: t,
                    difference: v.clone(),
                })
                .collect();
            let pairs = action.group().order().pow(2);
            let summary = if ws.is_empty() {
                format!("residual da + a*a vanishes on all {pairs} pairs")
            } else {
                format!("residual nonzero at {} of {pairs} pairs", ws.len())
            };
            Ok(TaskReport::new(name, cochain.as_str(), pass_or_fail(ws.is_empty()), summary)
                .with_witnesses(witnesses(action, &ws)))
        }
        TaskSpec::Representation { cochain } => {
            let c = scenario.cochain(cochain, name)?;
            let rep = representation_check(c)?;
            if !rep.residual_agrees {
                return Err(AlgebraError::Inconsistent(
                    "representation failures disagree with the MC residual".into(),
                )
                .into());
            }
            let summary = if rep.passes() {
                "Op(a_g1)Op(a_g2) = Op(a_g1g2) for all pairs".to_string()
            } else {
                format!("composition law fails at {} pair(s)", rep.failures.len())
            };
            Ok(TaskReport::new(name, cochain.as_str(), pass_or_fail(rep.passes()), summary)
                .with_witnesses(witnesses(action, &rep.failures))
                .with_details(json!({"residual_agrees": rep.residual_agrees})))
        }
        TaskSpec::CocycleMultiplicative { cochain } => {
            let c = scenario.cochain(cochain, name)?;
            let rep = xi_multiplicative_cocycle_check(c)?;
            let ws = rep
                .failures
                .iter()
                .map(|(t, d)| WitnessRepr {
                    tuple: labels(action, t),
                    difference: Difference::Poly(poly_to_repr(d)),
                })
                .collect();
            let summary = if rep.passes() {
                "a_g1g2(x) = a_g1(x) a_g2(phi_g1^-1 x) for all pairs".to_string()
            } else {
                format!("multiplicative cocycle identity fails at {} pair(s)", rep.failures.len())
            };
            Ok(TaskReport::new(name, cochain.as_str(), pass_or_fail(rep.passes()), summary).with_witnesses(ws))
        }
        TaskSpec::CocycleAdditive { phase } => {
            let s = scenario.phase(phase, name)?;
            let rep = additive_cocycle_check(action, s)?;
            let ws = rep
                .failures
                .iter()
                .map(|(t, d)| WitnessRepr {
                    tuple: labels(action, t),
                    difference: Difference::Poly(poly_to_repr(d)),
                })
                .collect();
            let summary = if rep.passes() {
                "S_g1g2 = S_g1 + S_g2 o phi_g1^-1 for all pairs".to_string()
            } else {
                format!("additive cocycle identity fails at {} pair(s)", rep.failures.len())
            };
            Ok(TaskReport::new(name, phase.as_str(), pass_or_fail(rep.passes()), summary).with_witnesses(ws))
        }
        TaskSpec::Intertwiner { s, s_tilde, k } => {
            let rep = coboundary_intertwiner_check(
                action,
                scenario.phase(s, name)?,
                scenario.phase(s_tilde, name)?,
                scenario.poly(k, name)?,
            )?;
            let ws = rep
                .failures
                .iter()
                .map(|(g, d)| WitnessRepr {
                    tuple: labels(action, &[*g]),
                    difference: Difference::Poly(poly_to_repr(d)),
                })
                .collect();
            let summary = if rep.passes() {
                "S~_g - S_g = K o phi_g^-1 - K for all g".to_string()
            } else {
                "phases are not related by the coboundary of K".to_string()
            };
            Ok(TaskReport::new(name, format!("{s},{s_tilde},{k}"), pass_or_fail(rep.passes()), summary)
                .with_witnesses(ws)
                .with_details(json!({
                    "s_is_cocycle": rep.s_is_cocycle,
                    "s_tilde_is_cocycle": rep.s_tilde_is_cocycle,
                })))
        }
        TaskSpec::Gauge { a, b, u } => {
            let ma = MCElement::new(scenario.cochain(a, name)?.clone())?;
            let mb = MCElement::new(scenario.cochain(b, name)?.clone())?;
            let rep = gauge_relation_check(&ma, &mb, scenario.symbol(u, name)?)?;
            let summary = if rep.passes() {
                "a_g * u = u * b_g for all g".to_string()
            } else {
                format!("intertwining fails at {} element(s)", rep.failures.len())
            };
            Ok(TaskReport::new(name, format!("{a},{b},{u}"), pass_or_fail(rep.passes()), summary)
                .with_witnesses(witnesses(action, &rep.failures)))
        }
        TaskSpec::SolveMc { p0, p1, order } => {
            let p0m = p0_or_unit(scenario, p0, name)?;
            let target = p1.as_str();
            let ext = match mc_extend(&p0m, scenario.cochain(p1, name)?, *order) {
                Ok(ext) => ext,
                Err(e) => return solve_failure(name, target, e),
            };
            let residual_zero = mc_residual(ext.omega.cochain())?.is_zero();
            Ok(TaskReport::new(
                name,
                target,
                pass_or_fail(residual_zero),
                format!("extended through order {order}; residual vanishes exactly"),
            )
            .with_details(json!({
                "order": order,
                "orders": extension_orders(&ext),
                "residual_zero": residual_zero,
                "omega": cochain_to_repr(ext.omega.cochain()),
            })))
        }
        TaskSpec::SolveRigidity { cochain, p1, order } => {
            let (a, target, extension) = match (cochain, p1) {
                (Some(c), _) => (MCElement::new(scenario.cochain(c, name)?.clone())?, c.clone(), None),
                (None, Some(p1)) => {
                    let p0 = MCElement::unit(action.clone(), scenario.order);
                    match mc_extend(&p0, scenario.cochain(p1, name)?, *order) {
                        Ok(ext) => (ext.omega.clone(), format!("extension of {p1}"), Some(ext)),
                        Err(e) => return solve_failure(name, p1, e),
                    }
                }
                (None, None) => {
                    return Err(InputError::invalid(name, "needs \"cochain\" or \"p1\"").into());
                }
            };
            let gauge = match rigidity_gauge(&a, *order) {
                Ok(g) => g,
                Err(e) => return solve_failure(name, &target, e),
            };
            let mut details = json!({
                "order": order,
                "u": symbol_to_repr(&gauge.u),
                "orders": gauge.steps.iter().map(step_json).collect::<Vec<_>>(),
            });
            if let Some(ext) = extension {
                details["extension_orders"] = Value::Array(extension_orders(&ext));
            }
            Ok(TaskReport::new(
                name,
                target,
                Outcome::Pass,
                format!("gauged to the leading term through order {order}"),
            )
            .with_details(details))
        }
        TaskSpec::Cohomology {
            p0,
            xi_degree,
            cochain_degree,
            x_degree,
        } => {
            let p0m = p0_or_unit(scenario, p0, name)?;
            let rep = cohomology_report(&p0m, *xi_degree, *cochain_degree, *x_degree)?;
            let mut details = json!({
                "window": window_json(&rep.window),
                "dim_cochains": rep.dim_cochains,
                "rank_in": rep.rank_in,
                "rank_out": rep.rank_out,
                "dim_ker": rep.dim_ker,
                "dim_im": rep.dim_im,
                "h_dim": rep.h_dim,
                "window_closed": rep.window_closed,
                "scope": if rep.window_closed { "exact" } else { "window-relative bound" },
            });
            let mut agrees = true;
            if *cochain_degree == 0 {
                if let OracleOutcome::Certified(chi) =
                    h0_character_formula(p0m.cochain(), *xi_degree, *x_degree)?
                {
                    details["h0_character_formula"] = json!(chi);
                    agrees = chi == rep.h_dim;
                }
            }
            let summary = format!(
                "H^{} = {} on window n={}, D={}{}",
                cochain_degree,
                rep.h_dim,
                xi_degree,
                x_degree,
                if rep.window_closed { "" } else { " (window-relative bound)" }
            );
            Ok(TaskReport::new(name, "", pass_or_fail(agrees), summary).with_details(details))
        }
    }
}

/// `d∘d = 0`, Leibniz and associativity on the scenario's cochains and the
/// unit cochains, for all combinations of total degree at most 3.
fn check_dga(scenario: &Scenario) -> Result<TaskReport, TaskError> {
    let action: &Arc<AffineAction> = &scenario.action;
    let mut pool: Vec<(String, Cochain)> = scenario
        .cochains
        .iter()
        .map(|(n, c)| (n.clone(), c.clone()))
        .collect();
    pool.push(("unit0".into(), Cochain::unit(action.clone(), 0, scenario.order)));
    pool.push(("unit1".into(), Cochain::unit(action.clone(), 1, scenario.order)));
    let mut failures = Vec::new();
    let mut checks = 0usize;
    for (n, c) in &pool {
        checks += 1;
        if !differential_d(&differential_d(c)).is_zero() {
            failures.push(format!("d(d({n})) != 0"));
        }
    }
    for (na, a) in &pool {
        for (nb, b) in &pool {
            if a.degree() + b.degree() > 3 {
                continue;
            }
            checks += 1;
            let lhs = differential_d(&cup_star(a, b)?);
            let sign = if a.degree() % 2 == 0 { 1 } else { -1 };
            let rhs = cup_star(&differential_d(a), b)?.combine(
                &cup_star(a, &differential_d(b))?,
                &gamp_core::function_algebra::GaussianRational::from_integer(sign),
            )?;
            if lhs != rhs {
                failures.push(format!("Leibniz fails for ({na}, {nb})"));
            }
            for (nc, c) in &pool {
                if a.degree() + b.degree() + c.degree() > 3 {
                    continue;
                }
                checks += 1;
                if cup_star(&cup_star(a, b)?, c)? != cup_star(a, &cup_star(b, c)?)? {
                    failures.push(format!("associativity fails for ({na}, {nb}, {nc})"));
                }
            }
        }
    }
    let summary = if failures.is_empty() {
        format!("{checks} identities hold exactly")
    } else {
        format!("{} of {checks} identities fail", failures.len())
    };
    Ok(TaskReport::new("check_dga", "", pass_or_fail(failures.is_empty()), summary)
        .with_details(json!({"checks": checks, "failures": failures})))
}

/// The averaging oracle's verdict on `z` for constant twists, for reports
/// that want an independent exactness certificate.
pub fn averaging_certifies(p0: &MCElement, z: &Cochain) -> Result<Option<bool>, AlgebraError> {
    Ok(match averaging_homotopy_oracle(p0.cochain(), z)? {
        OracleOutcome::Certified(_) => Some(true),
        OracleOutcome::Declined(_) => None,
    })
}
