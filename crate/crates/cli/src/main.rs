//! `cde`: command-line front end for the constrained-dynamics library.
//! Subcommand style; every run prints a JSON summary (with the full
//! tolerance manifest) to stdout and optionally writes plot-ready CSV/JSON
//! files under `--out`. Exit codes: 0 success, 2 invalid input, 3 numerical
//! failure.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use cde_core::chart::total_var_names;
use cde_core::classify::{classify_cde, find_equilibria, Equilibrium};
use cde_core::desing::ChartModel;
use cde_core::family::{CatastropheFamily, FamilyTag};
use cde_core::integrate::{integrate_cde, IntegrateOptions, Trajectory};
use cde_core::jumps::{sample_departure_points, search_finite_jump};
use cde_core::models::{builtin, builtin_names, BuiltinModel};
use cde_core::par::par_map;
use cde_core::slowfast::{convergence_study, SlowFastOptions};
use cde_core::strata::{sample_stratum, strata_for, StratumLabel};
use cde_core::{CdeError, CdeSpec, ChartPoint, Tolerances};

#[derive(Parser)]
#[command(
    name = "cde",
    version,
    about = "Simulate, classify and sample constrained systems with catastrophe potentials"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Integrate the reduced flow and write a trajectory CSV with an event log.
    Simulate(SimulateArgs),
    /// Print the catalogue label and spectrum of a system.
    Classify(ClassifyArgs),
    /// Sample fold points of a family and search for admissible finite jumps.
    JumpSearch(JumpSearchArgs),
    /// Compare the stiff two-timescale system against the reduced flow over a ladder of eps.
    EpsCompare(EpsCompareArgs),
    /// Sample the stratified singular sets of a family.
    StrataSample(StrataSampleArgs),
    /// Locate equilibria of the desingularized reduced field.
    Equilibria(EquilibriaArgs),
    /// Run a built-in model end to end: simulate, equilibria, classify.
    Demo(DemoArgs),
}

#[derive(Args)]
struct Common {
    /// Directory for output files; without it results only go to stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Seed for every randomized sweep.
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Tolerance override, repeatable: `--tol newton=1e-10` or `--tol.newton 1e-10`.
    #[arg(long = "tol", value_name = "NAME=VALUE")]
    tol: Vec<String>,
}

#[derive(Args)]
struct Source {
    /// Spec JSON file describing the system.
    #[arg(long, value_name = "FILE")]
    spec: Option<PathBuf>,
    /// Built-in model name (see `demo --list`), e.g. `zeeman_nerve` or `fold/source`.
    #[arg(long, conflicts_with = "spec")]
    model: Option<String>,
}

#[derive(Args)]
struct SimulateArgs {
    #[command(flatten)]
    source: Source,
    /// Starting chart coordinates, comma separated.
    #[arg(long, value_name = "C1,C2,...", allow_hyphen_values = true)]
    start: Option<String>,
    /// Reduced-time horizon.
    #[arg(long)]
    horizon: Option<f64>,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct ClassifyArgs {
    #[command(flatten)]
    source: Source,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct JumpSearchArgs {
    /// Family whose fold points are probed.
    #[arg(long)]
    family: String,
    /// Number of fold points to sample.
    #[arg(long, default_value_t = 200)]
    samples: usize,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct EpsCompareArgs {
    #[command(flatten)]
    source: Source,
    #[arg(long, value_name = "C1,C2,...", allow_hyphen_values = true)]
    start: Option<String>,
    #[arg(long)]
    horizon: Option<f64>,
    /// Comma-separated singular-perturbation parameters.
    #[arg(long, default_value = "1e-1,1e-2,1e-3", allow_hyphen_values = true)]
    epsilons: String,
    /// Comparison grid points over the horizon.
    #[arg(long, default_value_t = 400)]
    samples: usize,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct StrataSampleArgs {
    #[arg(long)]
    family: String,
    /// Restrict to one stratum (regular, fold, cusp, swallowtail_point, umbilic_point).
    #[arg(long)]
    stratum: Option<String>,
    /// Samples per stratum.
    #[arg(long, default_value_t = 100)]
    samples: usize,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct EquilibriaArgs {
    #[command(flatten)]
    source: Source,
    /// Half-width of the centered search box in chart coordinates.
    #[arg(long, default_value_t = 2.0)]
    region: f64,
    /// Seeds per chart dimension.
    #[arg(long, default_value_t = 8)]
    grid: usize,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct DemoArgs {
    /// Built-in model name.
    #[arg(required_unless_present = "list")]
    model: Option<String>,
    /// List the built-in model names and exit.
    #[arg(long)]
    list: bool,
    #[arg(long)]
    horizon: Option<f64>,
    #[command(flatten)]
    common: Common,
}

/// Failure that already knows its exit code.
#[derive(Debug)]
enum Failure {
    Validation(String),
    Numerical(String),
}

impl From<CdeError> for Failure {
    fn from(e: CdeError) -> Self {
        match e.exit_code() {
            3 => Failure::Numerical(e.to_string()),
            _ => Failure::Validation(e.to_string()),
        }
    }
}

type CliResult<T> = Result<T, Failure>;

fn invalid(msg: impl Into<String>) -> Failure {
    Failure::Validation(msg.into())
}

fn main() -> ExitCode {
    let args = rewrite_tol_flags(std::env::args().collect());
    let cli = Cli::parse_from(args);
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Validation(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Numerical(m)) => {
            eprintln!("numerical failure: {m}");
            ExitCode::from(3)
        }
    }
}

/// Accept `--tol.<name> <value>` and `--tol.<name>=<value>` by rewriting
/// them into the canonical `--tol <name>=<value>` before clap sees them.
fn rewrite_tol_flags(args: Vec<String>) -> Vec<String> {
    let mut out = Vec::with_capacity(args.len());
    let mut pending: Option<String> = None;
    for a in args {
        if let Some(name) = pending.take() {
            out.push(format!("{name}={a}"));
            continue;
        }
        match a.strip_prefix("--tol.") {
            Some(rest) if rest.contains('=') => {
                out.push("--tol".into());
                out.push(rest.to_string());
            }
            Some(rest) if !rest.is_empty() => {
                out.push("--tol".into());
                pending = Some(rest.to_string());
            }
            _ => out.push(a),
        }
    }
    if let Some(name) = pending {
        // trailing `--tol.<name>` with no value: let clap report it
        out.push(name);
    }
    out
}

fn run(command: Command) -> CliResult<()> {
    match command {
        Command::Simulate(a) => simulate_cmd(a),
        Command::Classify(a) => classify_cmd(a),
        Command::JumpSearch(a) => jump_search_cmd(a),
        Command::EpsCompare(a) => eps_compare_cmd(a),
        Command::StrataSample(a) => strata_sample_cmd(a),
        Command::Equilibria(a) => equilibria_cmd(a),
        Command::Demo(a) => demo_cmd(a),
    }
}

fn parse_tols(overrides: &[String]) -> CliResult<Tolerances> {
    let mut tols = Tolerances::default();
    for item in overrides {
        let (name, value) = item
            .split_once('=')
            .ok_or_else(|| invalid(format!("tolerance override `{item}` is not NAME=VALUE")))?;
        let value: f64 = value
            .parse()
            .map_err(|_| invalid(format!("tolerance `{name}` has non-numeric value `{value}`")))?;
        tols.set(name, value)?;
    }
    Ok(tols)
}

fn parse_floats(s: &str, what: &str) -> CliResult<Vec<f64>> {
    s.split(',')
        .map(|p| {
            p.trim()
                .parse::<f64>()
                .map_err(|_| invalid(format!("bad {what} entry `{p}` in `{s}`")))
        })
        .collect()
}

/// Resolve `--spec`/`--model` into a system, keeping the model defaults.
fn load_source(source: &Source) -> CliResult<(CdeSpec, Option<BuiltinModel>, Value)> {
    match (&source.spec, &source.model) {
        (Some(path), None) => {
            let text = fs::read_to_string(path).map_err(|e| {
                invalid(format!("cannot read spec file {}: {e}", path.display()))
            })?;
            let spec = CdeSpec::from_json_str(&text)
                .map_err(|e| invalid(format!("spec file {}: {e}", path.display())))?;
            let origin = json!({ "spec": path.display().to_string() });
            Ok((spec, None, origin))
        }
        (None, Some(name)) => {
            let model = builtin(name)?;
            let origin = json!({ "model": name });
            Ok((model.spec.clone(), Some(model), origin))
        }
        _ => Err(invalid("give exactly one of --spec <file> or --model <name>")),
    }
}

fn parse_start(
    flag: &Option<String>,
    model: &Option<BuiltinModel>,
    spec: &CdeSpec,
) -> CliResult<ChartPoint> {
    let dim = cde_core::chart_dim(&spec.family);
    if let Some(s) = flag {
        let coords = parse_floats(s, "start coordinate")?;
        if coords.len() != dim {
            return Err(invalid(format!(
                "start has {} coordinates, chart needs {dim}",
                coords.len()
            )));
        }
        return Ok(ChartPoint::new(coords));
    }
    if let Some(m) = model {
        return Ok(m.start.clone());
    }
    Err(invalid("--start is required when the system comes from --spec"))
}

fn manifest(command: &str, inputs: Value, seed: u64, tols: &Tolerances) -> Value {
    json!({
        "command": command,
        "version": env!("CARGO_PKG_VERSION"),
        "seed": seed,
        "inputs": inputs,
        "tolerances": serde_json::to_value(tols).expect("tolerances serialize"),
    })
}

/// Write `content` under the output directory, if one was requested.
fn write_out(out: &Option<PathBuf>, name: &str, content: &str) -> CliResult<Option<String>> {
    let Some(dir) = out else { return Ok(None) };
    fs::create_dir_all(dir)
        .map_err(|e| invalid(format!("cannot create {}: {e}", dir.display())))?;
    let path = dir.join(name);
    fs::write(&path, content).map_err(|e| invalid(format!("cannot write {}: {e}", path.display())))?;
    Ok(Some(path.display().to_string()))
}

fn emit(mut summary: Value, man: Value, out: &Option<PathBuf>) -> CliResult<()> {
    let man_path = write_out(out, "manifest.json", &pretty(&man))?;
    let obj = summary.as_object_mut().expect("summary is an object");
    if let Some(p) = man_path {
        obj.insert("manifest_file".into(), json!(p));
    }
    obj.insert("manifest".into(), man);
    println!("{}", pretty(&summary));
    Ok(())
}

fn pretty(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("value serializes")
}

fn fmt(v: f64) -> String {
    format!("{v:.12e}")
}

// ---------------------------------------------------------------------------
// simulate / demo

struct SimOutput {
    csv: String,
    events_json: String,
    end_reason: Value,
    final_time: f64,
    rows: usize,
    events: usize,
}

fn run_simulation(
    spec: &CdeSpec,
    start: &ChartPoint,
    horizon: f64,
    tols: &Tolerances,
) -> CliResult<SimOutput> {
    let mut opts = IntegrateOptions::default();
    opts.tols = tols.clone();
    opts.horizon = horizon;
    let traj = integrate_cde(spec, start, &opts)?;
    let chart = ChartModel::build(&spec.family)?;
    Ok(build_sim_output(spec, &chart, &traj))
}

fn build_sim_output(spec: &CdeSpec, chart: &ChartModel, traj: &Trajectory) -> SimOutput {
    let chart_cols = cde_core::chart_names(&spec.family).expect("chart names");
    let total_cols = total_var_names(&spec.family);
    let mut csv = String::from("t");
    for c in &chart_cols {
        csv.push_str(&format!(",{c}"));
    }
    for c in &total_cols {
        csv.push_str(&format!(",lift_{c}"));
    }
    csv.push_str(",det_proj,event_flag\n");

    let mut rows = 0usize;
    let mut next_event = 0usize;
    for seg in &traj.segments {
        for (i, s) in seg.samples.iter().enumerate() {
            let mut flag = 0usize;
            if i + 1 == seg.samples.len()
                && next_event < traj.events.len()
                && (traj.events[next_event].t - s.t).abs() <= 1e-9 * (1.0 + s.t.abs())
            {
                flag = next_event + 1;
                next_event += 1;
            }
            let lifted = chart.lift_point(&s.u).flat();
            let mut row = fmt(s.t);
            for u in &s.u {
                row.push_str(&format!(",{}", fmt(*u)));
            }
            for x in &lifted {
                row.push_str(&format!(",{}", fmt(*x)));
            }
            row.push_str(&format!(",{},{flag}\n", fmt(chart.det_at(&s.u))));
            csv.push_str(&row);
            rows += 1;
        }
    }
    SimOutput {
        csv,
        events_json: pretty(&serde_json::to_value(&traj.events).expect("events serialize")),
        end_reason: serde_json::to_value(&traj.end_reason).expect("end reason"),
        final_time: traj.final_time(),
        rows,
        events: traj.events.len(),
    }
}

fn simulate_cmd(a: SimulateArgs) -> CliResult<()> {
    let tols = parse_tols(&a.common.tol)?;
    let (spec, model, origin) = load_source(&a.source)?;
    let start = parse_start(&a.start, &model, &spec)?;
    let horizon = a
        .horizon
        .or_else(|| model.as_ref().map(|m| m.horizon))
        .unwrap_or(10.0);
    let sim = run_simulation(&spec, &start, horizon, &tols)?;
    let csv_path = write_out(&a.common.out, "trajectory.csv", &sim.csv)?;
    let ev_path = write_out(&a.common.out, "events.json", &sim.events_json)?;
    let inputs = json!({
        "source": origin,
        "start": start.coords,
        "horizon": horizon,
    });
    let summary = json!({
        "command": "simulate",
        "end_reason": sim.end_reason,
        "final_time": sim.final_time,
        "rows": sim.rows,
        "events": sim.events,
        "files": { "trajectory": csv_path, "events": ev_path },
    });
    emit(summary, manifest("simulate", inputs, a.common.seed, &tols), &a.common.out)
}

// ---------------------------------------------------------------------------
// classify

fn classify_cmd(a: ClassifyArgs) -> CliResult<()> {
    let tols = parse_tols(&a.common.tol)?;
    let (spec, _, origin) = load_source(&a.source)?;
    let report = classify_cde(&spec, &tols)?;
    let mut summary = report.to_json();
    summary
        .as_object_mut()
        .expect("classification is an object")
        .insert("command".into(), json!("classify"));
    let inputs = json!({ "source": origin });
    emit(summary, manifest("classify", inputs, a.common.seed, &tols), &a.common.out)
}

// ---------------------------------------------------------------------------
// jump-search

fn jump_search_cmd(a: JumpSearchArgs) -> CliResult<()> {
    let tols = parse_tols(&a.common.tol)?;
    let tag = FamilyTag::from_name(&a.family)?;
    let family = CatastropheFamily::new(tag);
    if !strata_for(&family)?.contains(&StratumLabel::Fold) {
        return Err(invalid(format!("{} has no fold points to jump from", tag.name())));
    }
    // Jumps depend on the potential alone: probe with a frozen drift, from
    // fold points a trajectory on the attracting sheet can actually reach.
    let n = family.total_dim();
    let g = vec![cde_core::poly::MultiPoly::zero(n); family.slow_dim];
    let spec = CdeSpec::new(family.clone(), g)?;
    let points = sample_departure_points(&family, a.samples, a.common.seed, &tols)?;
    let results = par_map(&points, |p| search_finite_jump(&spec, p, &tols))
        .into_iter()
        .collect::<cde_core::Result<Vec<_>>>()?;

    let total_cols = total_var_names(&family);
    let mut csv = total_cols.join(",");
    csv.push_str(",admissible,drop\n");
    let mut admissible_points = 0usize;
    let mut examples = Vec::new();
    for (p, cands) in points.iter().zip(&results) {
        let best = cands.iter().filter(|c| c.admissible).max_by(|x, y| {
            x.potential_drop.total_cmp(&y.potential_drop)
        });
        let coords = p.flat().iter().map(|v| fmt(*v)).collect::<Vec<_>>().join(",");
        match best {
            Some(c) => {
                admissible_points += 1;
                if examples.len() < 5 {
                    examples.push(json!({
                        "from": p.flat(),
                        "to": c.to.flat(),
                        "potential_drop": c.potential_drop,
                    }));
                }
                csv.push_str(&format!("{coords},1,{}\n", fmt(c.potential_drop)));
            }
            None => csv.push_str(&format!("{coords},0,\n")),
        }
    }
    let csv_path = write_out(&a.common.out, "jumps.csv", &csv)?;
    let inputs = json!({ "family": tag.name(), "samples": a.samples });
    let summary = json!({
        "command": "jump-search",
        "family": tag.name(),
        "samples": points.len(),
        "admissible_points": admissible_points,
        "examples": examples,
        "files": { "jumps": csv_path },
    });
    emit(summary, manifest("jump-search", inputs, a.common.seed, &tols), &a.common.out)
}

// ---------------------------------------------------------------------------
// eps-compare

fn eps_compare_cmd(a: EpsCompareArgs) -> CliResult<()> {
    let tols = parse_tols(&a.common.tol)?;
    let (spec, model, origin) = load_source(&a.source)?;
    let start = parse_start(&a.start, &model, &spec)?;
    let horizon = a
        .horizon
        .or_else(|| model.as_ref().map(|m| m.horizon))
        .unwrap_or(5.0);
    let epsilons = parse_floats(&a.epsilons, "eps")?;
    let mut cde_opts = IntegrateOptions::default();
    cde_opts.tols = tols.clone();
    let table = convergence_study(
        &spec,
        &start,
        horizon,
        &epsilons,
        a.samples,
        &SlowFastOptions::default(),
        &cde_opts,
    )?;
    let csv_path = write_out(&a.common.out, "eps_compare.csv", &table.to_csv())?;
    let rows: Vec<Value> = table
        .rows
        .iter()
        .map(|r| {
            json!({
                "epsilon": r.epsilon,
                "sup_slow_error": r.sup_slow_error,
                "runtime_ms": r.runtime_ms,
                "excluded_points": r.excluded_points,
                "windows": r.windows.iter().map(|(lo, hi)| json!([lo, hi])).collect::<Vec<_>>(),
            })
        })
        .collect();
    let inputs = json!({
        "source": origin,
        "start": start.coords,
        "horizon": horizon,
        "epsilons": epsilons,
        "samples": a.samples,
    });
    let summary = json!({
        "command": "eps-compare",
        "horizon": table.horizon,
        "rows": rows,
        "monotone": table.monotone(1e-8),
        "files": { "table": csv_path },
    });
    emit(summary, manifest("eps-compare", inputs, a.common.seed, &tols), &a.common.out)
}

// ---------------------------------------------------------------------------
// strata-sample

fn strata_sample_cmd(a: StrataSampleArgs) -> CliResult<()> {
    let tols = parse_tols(&a.common.tol)?;
    let tag = FamilyTag::from_name(&a.family)?;
    let family = CatastropheFamily::new(tag);
    let labels: Vec<StratumLabel> = match &a.stratum {
        Some(name) => vec![StratumLabel::from_name(name)?],
        None => strata_for(&family)?.to_vec(),
    };
    let total_cols = total_var_names(&family);
    let mut csv = String::from("family,stratum,");
    csv.push_str(&total_cols.join(","));
    csv.push('\n');
    let mut counts = serde_json::Map::new();
    for label in &labels {
        let points = sample_stratum(&family, *label, a.samples, a.common.seed)?;
        counts.insert(label.name().to_string(), json!(points.len()));
        for p in &points {
            let coords = p.flat().iter().map(|v| fmt(*v)).collect::<Vec<_>>().join(",");
            csv.push_str(&format!("{},{},{coords}\n", tag.name(), label.name()));
        }
    }
    let csv_path = write_out(&a.common.out, "strata.csv", &csv)?;
    let inputs = json!({
        "family": tag.name(),
        "stratum": a.stratum,
        "samples": a.samples,
    });
    let summary = json!({
        "command": "strata-sample",
        "family": tag.name(),
        "counts": Value::Object(counts),
        "files": { "strata": csv_path },
    });
    emit(summary, manifest("strata-sample", inputs, a.common.seed, &tols), &a.common.out)
}

// ---------------------------------------------------------------------------
// equilibria

fn equilibria_json(eqs: &[Equilibrium]) -> Vec<Value> {
    eqs.iter()
        .map(|e| {
            json!({
                "chart": e.chart,
                "residual": e.residual,
                "on_singular": e.on_singular,
            })
        })
        .collect()
}

fn equilibria_cmd(a: EquilibriaArgs) -> CliResult<()> {
    let tols = parse_tols(&a.common.tol)?;
    let (spec, _, origin) = load_source(&a.source)?;
    if !(a.region.is_finite() && a.region > 0.0) {
        return Err(invalid(format!("--region must be positive, got {}", a.region)));
    }
    let dim = cde_core::chart_dim(&spec.family);
    let region = vec![(-a.region, a.region); dim];
    let eqs = find_equilibria(&spec, &region, a.grid, &tols)?;
    let eq_values = equilibria_json(&eqs);
    let eq_path = write_out(
        &a.common.out,
        "equilibria.json",
        &pretty(&Value::Array(eq_values.clone())),
    )?;
    let inputs = json!({
        "source": origin,
        "region_halfwidth": a.region,
        "grid": a.grid,
    });
    let summary = json!({
        "command": "equilibria",
        "count": eqs.len(),
        "equilibria": eq_values,
        "files": { "equilibria": eq_path },
    });
    emit(summary, manifest("equilibria", inputs, a.common.seed, &tols), &a.common.out)
}

// ---------------------------------------------------------------------------
// demo

fn demo_cmd(a: DemoArgs) -> CliResult<()> {
    if a.list {
        println!("{}", pretty(&json!({ "models": builtin_names() })));
        return Ok(());
    }
    let name = a.model.as_deref().expect("clap enforces model unless --list");
    let tols = parse_tols(&a.common.tol)?;
    let model = builtin(name)?;
    let spec = model.spec.clone();
    let horizon = a.horizon.unwrap_or(model.horizon);
    let out = a.common.out.clone().or_else(|| Some(PathBuf::from("cde-out")));

    let sim = run_simulation(&spec, &model.start, horizon, &tols)?;
    let dim = cde_core::chart_dim(&spec.family);
    let region = vec![(-2.0, 2.0); dim];
    let eqs = find_equilibria(&spec, &region, 9, &tols)?;
    let label = classify_cde(&spec, &tols)?.label_string();

    let csv_path = write_out(&out, "trajectory.csv", &sim.csv)?;
    let ev_path = write_out(&out, "events.json", &sim.events_json)?;
    let eq_values = equilibria_json(&eqs);
    let eq_path = write_out(&out, "equilibria.json", &pretty(&Value::Array(eq_values.clone())))?;

    let inputs = json!({
        "model": name,
        "start": model.start.coords,
        "horizon": horizon,
    });
    let summary = json!({
        "command": "demo",
        "model": name,
        "description": model.description,
        "label": label,
        "end_reason": sim.end_reason,
        "final_time": sim.final_time,
        "events": sim.events,
        "equilibria": eq_values,
        "files": { "trajectory": csv_path, "events": ev_path, "equilibria": eq_path },
    });
    emit(summary, manifest("demo", inputs, a.common.seed, &tols), &out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tol_flag_rewrites_cover_both_spellings() {
        let args = |v: &[&str]| v.iter().map(|s| s.to_string()).collect::<Vec<_>>();
        assert_eq!(
            rewrite_tol_flags(args(&["cde", "--tol.newton=1e-9"])),
            args(&["cde", "--tol", "newton=1e-9"])
        );
        assert_eq!(
            rewrite_tol_flags(args(&["cde", "--tol.newton", "1e-9", "--seed", "7"])),
            args(&["cde", "--tol", "newton=1e-9", "--seed", "7"])
        );
        assert_eq!(
            rewrite_tol_flags(args(&["cde", "--tol", "psd=1e-6"])),
            args(&["cde", "--tol", "psd=1e-6"])
        );
    }

    #[test]
    fn tolerance_overrides_apply_and_reject_unknown_names() {
        let tols = parse_tols(&["newton=1e-9".into(), "psd=2e-6".into()]).unwrap();
        assert_eq!(tols.newton, 1e-9);
        assert_eq!(tols.psd, 2e-6);
        assert!(parse_tols(&["bogus=1".into()]).is_err());
        assert!(parse_tols(&["newton".into()]).is_err());
    }
}
