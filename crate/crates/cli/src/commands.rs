use std::collections::HashSet;
use std::fs::{self, File};
use std::io::{self, Write};
use std::path::Path;
use std::time::Instant;

use log::{info, warn};
use serde::Serialize;

use loadfair::assign::{
    budgeted_fair_assignment_with, budgeted_mlkc_assignment, fair_assignment_with, mlkc_assignment_with,
    Artifacts, BudgetedOutcome, DecisionOptions, DecisionTrace, SearchTrace,
};
use loadfair::centers::CenterOptions;
use loadfair::gen::{generate, GenParams};
use loadfair::model::io::{digest, read_csv, read_json, to_json_string, CsvParams};
use loadfair::model::{parse_fraction, Center, Fraction, Instance, ValidationOptions};
use loadfair::oracle::{
    brute_force_fair_assignment, brute_force_fair_kmedian, brute_force_fmlkc, OracleCaps, OracleResult,
};
use loadfair::par::Execution;
use loadfair::report::AssignmentReport;
use loadfair::solver::{solve_fmlkc, CandidateRecord, Mode, SolveConfig, SolveTrace};

use crate::args::{AssignArgs, GenArgs, InputArgs, ModeArg, OracleArgs, SolveArgs};
use crate::error::CliError;
use crate::manifest::RunManifest;

/// Settings shared by every subcommand.
pub struct Context {
    pub execution: Execution,
    pub timing: bool,
    pub started: Instant,
}

impl Context {
    fn finish(&self, manifest: &mut RunManifest) {
        if self.timing {
            manifest.wall_time_ms = Some(self.started.elapsed().as_millis() as u64);
        }
    }
}

fn load(input: &InputArgs) -> Result<Instance, CliError> {
    let options = ValidationOptions { check_triangle: !input.no_triangle_check };
    let is_csv = input.instance.extension().is_some_and(|e| e.eq_ignore_ascii_case("csv"));
    let points = File::open(&input.instance)
        .map_err(|e| CliError::Input(format!("{}: {e}", input.instance.display())))?;
    if !is_csv {
        return Ok(read_json(points, options)?);
    }
    let missing = |flag: &str| CliError::Input(format!("csv input needs --{flag}"));
    let fac_path = input.facilities.as_ref().ok_or_else(|| missing("facilities"))?;
    let facilities =
        File::open(fac_path).map_err(|e| CliError::Input(format!("{}: {e}", fac_path.display())))?;
    let params = CsvParams {
        k: input.k.ok_or_else(|| missing("k"))?,
        alpha: fractions(input.alpha.as_deref().ok_or_else(|| missing("alpha"))?)?,
        beta: fractions(input.beta.as_deref().ok_or_else(|| missing("beta"))?)?,
    };
    Ok(read_csv(points, facilities, params, options)?)
}

fn fractions(list: &str) -> Result<Vec<Fraction>, CliError> {
    list.split(',')
        .map(|s| parse_fraction(s.trim()).ok_or_else(|| CliError::Input(format!("not a fraction: {s:?}"))))
        .collect()
}

fn resolve_centers(inst: &Instance, list: &str) -> Result<Vec<Center>, CliError> {
    let mut seen = HashSet::new();
    let mut centers = Vec::new();
    for id in list.split(',').map(str::trim) {
        if !seen.insert(id) {
            return Err(CliError::Input(format!("duplicate center id {id:?}")));
        }
        let f = inst.facility_index(id).ok_or_else(|| CliError::Input(format!("unknown center id {id:?}")))?;
        centers.push(Center::Facility(f));
    }
    Ok(centers)
}

fn emit(report: &impl Serialize, out: Option<&Path>) -> Result<(), CliError> {
    let mut text = serde_json::to_string_pretty(report).map_err(|e| CliError::Internal(e.to_string()))?;
    text.push('\n');
    match out {
        Some(path) => fs::write(path, text).map_err(|e| CliError::Input(format!("{}: {e}", path.display()))),
        None => Ok(io::stdout().lock().write_all(text.as_bytes())?),
    }
}

fn report_of(inst: &Instance, a: &loadfair::model::Assignment) -> Result<AssignmentReport, CliError> {
    Ok(AssignmentReport::new(inst, a)?)
}

#[derive(Serialize)]
struct SolveReport {
    manifest: RunManifest,
    cost: f64,
    #[serde(flatten)]
    assignment: AssignmentReport,
    candidates: Vec<CandidateRecord>,
    trace: SolveTrace,
}

pub fn solve(ctx: &Context, args: &SolveArgs) -> Result<(), CliError> {
    let inst = load(&args.input)?;
    let cfg = SolveConfig {
        eps: args.epsilon,
        mode: match args.mode {
            ModeArg::Metric => Mode::Metric,
            ModeArg::Euclidean => Mode::Euclidean,
            ModeArg::Exhaustive => Mode::Exhaustive,
        },
        repetitions: args.reps,
        seed: args.seed,
        execution: ctx.execution,
        centers: CenterOptions { max_sets: args.max_sets, execution: ctx.execution, ..Default::default() },
        ..Default::default()
    };
    let result = solve_fmlkc(&inst, &cfg)?;
    info!("solved with cost {} over {} candidate sets", result.cost, result.candidates.len());
    let mut manifest = RunManifest::new("solve", args, Some(args.seed), Some(digest(&inst)));
    ctx.finish(&mut manifest);
    let report = SolveReport {
        manifest,
        cost: result.cost,
        assignment: report_of(&inst, &result.assignment)?,
        candidates: result.candidates,
        trace: result.trace,
    };
    emit(&report, args.out.as_deref())
}

#[derive(Serialize)]
#[serde(untagged)]
enum AssignTrace {
    Decision(DecisionTrace),
    Search(SearchTrace),
}

#[derive(Serialize)]
struct AssignReport {
    manifest: RunManifest,
    /// `None` in optimization mode.
    budget: Option<f64>,
    feasible: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    cost: Option<f64>,
    #[serde(flatten, skip_serializing_if = "Option::is_none")]
    assignment: Option<AssignmentReport>,
    trace: AssignTrace,
}

fn dump(dir: &Path, artifacts: Option<&Artifacts>) -> Result<(), CliError> {
    let Some(art) = artifacts else {
        warn!("nothing to dump: the answer did not come from a solved program");
        return Ok(());
    };
    fs::create_dir_all(dir)?;
    fs::write(dir.join("model.lp"), &art.lp)?;
    for (g, dot) in art.networks.iter().enumerate() {
        fs::write(dir.join(format!("group_{g}.dot")), dot)?;
    }
    Ok(())
}

pub fn assign(ctx: &Context, args: &AssignArgs) -> Result<(), CliError> {
    let inst = load(&args.input)?;
    let centers = resolve_centers(&inst, &args.centers)?;
    let options = DecisionOptions {
        execution: ctx.execution,
        capture_artifacts: args.dump_dir.is_some(),
        ..Default::default()
    };
    let vacuous = inst.fairness_is_vacuous();
    let mut manifest = RunManifest::new("assign", args, None, Some(digest(&inst)));
    let report = match args.budget {
        Some(budget) => {
            let outcome = if vacuous {
                budgeted_mlkc_assignment(&inst, &centers, budget, args.epsilon, &options)?
            } else {
                budgeted_fair_assignment_with(&inst, &centers, budget, args.epsilon, &options)?
            };
            match outcome {
                BudgetedOutcome::Feasible { assignment, cost, trace, artifacts, .. } => {
                    if let Some(dir) = &args.dump_dir {
                        dump(dir, artifacts.as_deref())?;
                    }
                    ctx.finish(&mut manifest);
                    AssignReport {
                        manifest,
                        budget: Some(budget),
                        feasible: true,
                        cost: Some(cost),
                        assignment: Some(report_of(&inst, &assignment)?),
                        trace: AssignTrace::Decision(trace),
                    }
                }
                BudgetedOutcome::Infeasible { trace } => {
                    ctx.finish(&mut manifest);
                    AssignReport {
                        manifest,
                        budget: Some(budget),
                        feasible: false,
                        cost: None,
                        assignment: None,
                        trace: AssignTrace::Decision(trace),
                    }
                }
            }
        }
        None => {
            let out = if vacuous {
                mlkc_assignment_with(&inst, &centers, args.epsilon, &options)?
            } else {
                fair_assignment_with(&inst, &centers, args.epsilon, &options)?
            };
            if let Some(dir) = &args.dump_dir {
                dump(dir, out.artifacts.as_deref())?;
            }
            ctx.finish(&mut manifest);
            AssignReport {
                manifest,
                budget: None,
                feasible: true,
                cost: Some(out.cost),
                assignment: Some(report_of(&inst, &out.assignment)?),
                trace: AssignTrace::Search(out.trace),
            }
        }
    };
    emit(&report, args.out.as_deref())
}

pub fn gen(ctx: &Context, args: &GenArgs) -> Result<(), CliError> {
    let params = GenParams {
        n: args.n,
        k: args.k,
        ell: args.ell,
        facilities: args.facilities.unwrap_or(args.k.max(args.n / 2)),
        dim: args.dim,
        slack: args.slack,
        seed: args.seed,
    };
    let inst = generate(&params)?;
    let mut manifest = RunManifest::new("gen", args, Some(args.seed), Some(digest(&inst)));
    ctx.finish(&mut manifest);
    info!("generated instance {}", manifest.instance_digest.as_deref().unwrap_or_default());
    let mut text = to_json_string(&inst);
    text.push('\n');
    match &args.out {
        Some(path) => fs::write(path, text).map_err(|e| CliError::Input(format!("{}: {e}", path.display()))),
        None => Ok(io::stdout().lock().write_all(text.as_bytes())?),
    }
}

#[derive(Clone, Copy, Serialize)]
#[serde(rename_all = "snake_case")]
enum Objective {
    Fmlkc,
    FairAssignment,
    FairKmedian,
}

#[derive(Serialize)]
struct OracleReport {
    manifest: RunManifest,
    objective: Objective,
    /// `null` when no fair assignment exists.
    opt: Option<f64>,
    optima: u64,
    #[serde(flatten, skip_serializing_if = "Option::is_none")]
    assignment: Option<AssignmentReport>,
}

pub fn oracle(ctx: &Context, args: &OracleArgs) -> Result<(), CliError> {
    let inst = load(&args.input)?;
    let caps = OracleCaps { max_points: args.max_points, max_k: args.max_k, max_maps: args.max_maps };
    let (objective, result): (Objective, Option<OracleResult>) = match (&args.centers, args.kmedian) {
        (None, true) => return Err(CliError::Input("--kmedian needs --centers".into())),
        (None, false) => (Objective::Fmlkc, brute_force_fmlkc(&inst, &caps, ctx.execution)?),
        (Some(list), kmedian) => {
            let centers = resolve_centers(&inst, list)?;
            if kmedian {
                (Objective::FairKmedian, brute_force_fair_kmedian(&inst, &centers, &caps, ctx.execution)?)
            } else {
                (Objective::FairAssignment, brute_force_fair_assignment(&inst, &centers, &caps, ctx.execution)?)
            }
        }
    };
    let mut manifest = RunManifest::new("oracle", args, None, Some(digest(&inst)));
    ctx.finish(&mut manifest);
    let feasible = result.is_some();
    let report = OracleReport {
        manifest,
        objective,
        opt: result.as_ref().map(|r| r.cost),
        optima: result.as_ref().map_or(0, |r| r.optima),
        assignment: result.as_ref().map(|r| report_of(&inst, &r.assignment)).transpose()?,
    };
    emit(&report, args.out.as_deref())?;
    if feasible {
        Ok(())
    } else {
        Err(CliError::InfeasibleFairness("no assignment satisfies the fairness bounds".into()))
    }
}
