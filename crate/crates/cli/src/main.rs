//! `geoplace`: validate, solve, sweep, simulate and compare engine placements.
//!
//! Exit codes: 0 success, 1 semantic failure (invalid workflow, infeasible
//! request, deadlock), 2 unreadable or malformed input, 3 internal
//! inconsistency (oracle or model/simulation mismatch).

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use geoplace::cost::{cost_up_to, DeploymentPlan};
use geoplace::model::{
    parse_cost_matrix, parse_workflow, serialize_cost_matrix, serialize_workflow,
};
use geoplace::optimizer::{
    solve_branch_and_bound_with, solve_brute_force_with, solve_centralized, speedup,
    sweep_overhead, Solution, SolveRequest, SolverOptions,
};
use geoplace::plan_io::{
    parse_deployment_plan, serialize_deployment_plan, serialize_execution_plan,
    serialize_invocation_description, stub_hosts,
};
use geoplace::sim::{plan_from_solution, simulate, SimTrace};
use geoplace::workgen::{
    load_cost_matrix, load_workflow, region_names, synthetic_cost_matrix, GeoModel,
    WorkflowGenerator,
};
use geoplace::{CostMatrix, Error, LocationId, Rational, Workflow};

#[derive(Parser)]
#[command(
    name = "geoplace",
    version,
    about = "Place orchestration engines for geo-distributed workflows"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Tsv,
    Text,
}

#[derive(clap::Args)]
struct Inputs {
    /// Workflow file (`service` and `edge` lines).
    workflow: PathBuf,
    /// Cost matrix file (`locations` header, one row per location).
    matrix: PathBuf,
}

#[derive(clap::Args)]
struct Search {
    /// Penalty per engine beyond the first.
    #[arg(long, default_value = "0")]
    overhead: Rational,
    /// Worker threads for the branch-and-bound search.
    #[arg(long, default_value_t = 1)]
    threads: usize,
    /// Give up after this many search nodes.
    #[arg(long, default_value_t = SolverOptions::default().node_budget)]
    node_budget: u64,
}

impl Search {
    fn options(&self) -> SolverOptions {
        SolverOptions {
            node_budget: self.node_budget,
            threads: self.threads.max(1),
            ..SolverOptions::default()
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Check a workflow and cost matrix; prints OK or every violation.
    Validate(Inputs),
    /// Print the optimal deployment plan, followed by its cost report as comments.
    Solve {
        #[command(flatten)]
        inputs: Inputs,
        #[command(flatten)]
        search: Search,
        /// Use at most this many engines.
        #[arg(long)]
        max_engines: Option<usize>,
        /// Re-solve by exhaustive enumeration and fail on any disagreement.
        #[arg(long)]
        oracle: bool,
    },
    /// Solve once per overhead rate: rate, engines, movement, total.
    Sweep {
        #[command(flatten)]
        inputs: Inputs,
        /// Comma-separated overhead rates, e.g. `0,5,10`.
        #[arg(long)]
        rates: String,
        #[arg(long, value_enum, default_value = "tsv")]
        format: Format,
        #[arg(long, default_value_t = 1)]
        threads: usize,
    },
    /// Replay a deployment plan; prints per-service completion times and the makespan.
    Simulate {
        #[command(flatten)]
        inputs: Inputs,
        /// Deployment plan file (`SERVICE --> REGION` lines).
        plan: PathBuf,
        /// Also print the per-step trace.
        #[arg(long)]
        trace: bool,
        /// Write the generated invocation description and execution plan here.
        #[arg(long)]
        emit: Option<PathBuf>,
    },
    /// Compare a single-region baseline with the optimal placement.
    Compare {
        #[command(flatten)]
        inputs: Inputs,
        #[arg(long)]
        baseline_region: LocationId,
        #[command(flatten)]
        search: Search,
    },
    /// Write a synthetic workflow and cost matrix.
    Generate {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 8)]
        regions: usize,
        /// Exact service count; drawn from 8 to 11 when omitted.
        #[arg(long)]
        services: Option<usize>,
        #[arg(long)]
        workflow: PathBuf,
        #[arg(long)]
        matrix: PathBuf,
    },
}

/// Why a command failed, and the exit code it maps to.
enum Failure {
    Semantic(String),
    Input(String),
    Mismatch(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Semantic(_) => 1,
            Failure::Input(_) => 2,
            Failure::Mismatch(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Semantic(m) | Failure::Input(m) | Failure::Mismatch(m) => m,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Io { .. }
            | Error::Parse { .. }
            | Error::Invalid { .. }
            | Error::BadNumber(_)
            | Error::InvalidToken(_) => Failure::Input(e.to_string()),
            _ => Failure::Semantic(e.to_string()),
        }
    }
}

type Outcome = Result<String, Failure>;

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn load(inputs: &Inputs) -> Result<(Workflow, CostMatrix), Failure> {
    Ok((
        load_workflow(&inputs.workflow)?,
        load_cost_matrix(&inputs.matrix)?,
    ))
}

fn validate(inputs: &Inputs) -> Outcome {
    let w = parse_workflow(&read(&inputs.workflow)?)?;
    let cm = parse_cost_matrix(&read(&inputs.matrix)?)?;
    let mut problems: Vec<String> = w.validate().iter().map(|v| v.to_string()).collect();
    for s in w.services() {
        if !cm.contains(s.location.as_str()) {
            problems.push(format!(
                "service {} is located in {}, which the cost matrix lacks",
                s.id, s.location
            ));
        }
    }
    if problems.is_empty() {
        Ok("OK\n".into())
    } else {
        Err(Failure::Semantic(problems.join("\n")))
    }
}

fn render_solution(sol: &Solution) -> String {
    let mut out = serialize_deployment_plan(&sol.plan.assignment);
    for line in sol.report.to_kv().lines() {
        writeln!(out, "# {line}").unwrap();
    }
    writeln!(out, "# optimal {}", sol.proven_optimal).unwrap();
    out
}

fn solve(inputs: &Inputs, search: &Search, max_engines: Option<usize>, oracle: bool) -> Outcome {
    let (w, cm) = load(inputs)?;
    let req = SolveRequest::new(w, cm)
        .with_overhead(search.overhead)
        .with_max_engines(max_engines);
    let opts = search.options();
    let sol = solve_branch_and_bound_with(&req, &opts)?;
    if !sol.proven_optimal {
        eprintln!("warning: node budget exhausted; plan is the best found, not proven optimal");
    }
    if oracle {
        let check = solve_brute_force_with(&req, &opts)?;
        if check.plan != sol.plan || check.report.total_cost != sol.report.total_cost {
            return Err(Failure::Mismatch(format!(
                "oracle disagrees: branch-and-bound cost {} vs exhaustive {}\n{}",
                sol.report.total_cost,
                check.report.total_cost,
                serialize_deployment_plan(&check.plan.assignment)
            )));
        }
    }
    Ok(render_solution(&sol))
}

fn parse_rates(text: &str) -> Result<Vec<Rational>, Failure> {
    let rates: Vec<Rational> = text
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| s.parse::<Rational>())
        .collect::<Result<_, _>>()?;
    if rates.is_empty() {
        return Err(Failure::Input("--rates needs at least one value".into()));
    }
    Ok(rates)
}

fn sweep(inputs: &Inputs, rates: &str, format: Format, threads: usize) -> Outcome {
    let rates = parse_rates(rates)?;
    let (w, cm) = load(inputs)?;
    let opts = SolverOptions {
        threads: threads.max(1),
        ..SolverOptions::default()
    };
    let rows = sweep_overhead(&SolveRequest::new(w, cm), &rates, &opts)?;
    let table: Vec<[String; 4]> = rows
        .iter()
        .map(|(rate, s)| {
            [
                rate.to_string(),
                s.report.engines_used.to_string(),
                s.report.total_movement.to_string(),
                s.report.total_cost.to_string(),
            ]
        })
        .collect();
    let header = ["rate", "engines", "movement", "total"].map(String::from);
    let mut out = String::new();
    match format {
        Format::Tsv => {
            for row in std::iter::once(&header).chain(&table) {
                writeln!(out, "{}", row.join("\t")).unwrap();
            }
        }
        Format::Text => {
            let mut widths = header.clone().map(|h| h.len());
            for row in &table {
                for (w, cell) in widths.iter_mut().zip(row) {
                    *w = (*w).max(cell.len());
                }
            }
            for row in std::iter::once(&header).chain(&table) {
                let cells: Vec<String> = row
                    .iter()
                    .zip(widths)
                    .map(|(c, w)| format!("{c:>w$}"))
                    .collect();
                writeln!(out, "{}", cells.join("  ")).unwrap();
            }
        }
    }
    Ok(out)
}

/// Simulates `plan` and insists the trace agrees with the cost model.
fn replay(
    w: &Workflow,
    cm: &CostMatrix,
    plan: &DeploymentPlan,
    emit: Option<&Path>,
) -> Result<(SimTrace, Vec<(String, Rational)>), Failure> {
    let (inv, exec, cfg) = plan_from_solution(w, cm, plan, &stub_hosts(cm.locations()))?;
    if let Some(dir) = emit {
        fs::create_dir_all(dir).map_err(|e| Failure::Input(format!("{}: {e}", dir.display())))?;
        write(
            &dir.join("invocation.txt"),
            &serialize_invocation_description(&inv),
        )?;
        write(&dir.join("execution.txt"), &serialize_execution_plan(&exec))?;
    }
    let trace = simulate(&exec, &cfg)?;
    let done = trace.service_completions(&exec);
    let model = cost_up_to(w, plan, cm)?;
    let mut per_service = Vec::with_capacity(w.len());
    for s in w.services() {
        let (sim, expected) = (done[s.id.as_str()], model[s.id.as_str()]);
        if sim != expected {
            return Err(Failure::Mismatch(format!(
                "service {} finishes at {sim} in simulation but {expected} in the cost model",
                s.id
            )));
        }
        per_service.push((s.id.to_string(), sim));
    }
    let movement = model.values().copied().max().unwrap_or_default();
    if trace.makespan != movement {
        return Err(Failure::Mismatch(format!(
            "makespan {} differs from modelled movement {movement}",
            trace.makespan
        )));
    }
    Ok((trace, per_service))
}

fn simulate_cmd(
    inputs: &Inputs,
    plan_path: &Path,
    show_trace: bool,
    emit: Option<&Path>,
) -> Outcome {
    let (w, cm) = load(inputs)?;
    let assignment = parse_deployment_plan(&read(plan_path)?)?;
    let plan = DeploymentPlan::new(assignment, Rational::ZERO);
    plan.check(&w, &cm)?;
    let (trace, per_service) = replay(&w, &cm, &plan, emit)?;
    let mut out = String::new();
    for (id, t) in per_service {
        writeln!(out, "service {id} done {t}").unwrap();
    }
    if show_trace {
        out.push_str(&trace.to_text());
    } else {
        writeln!(out, "makespan {}", trace.makespan).unwrap();
    }
    Ok(out)
}

fn compare(inputs: &Inputs, baseline_region: &LocationId, search: &Search) -> Outcome {
    let (w, cm) = load(inputs)?;
    let req = SolveRequest::new(w.clone(), cm.clone()).with_overhead(search.overhead);
    let baseline = solve_centralized(&req, baseline_region)?;
    let optimized = solve_branch_and_bound_with(&req, &search.options())?;
    let (base_trace, _) = replay(&w, &cm, &baseline.plan, None)?;
    let (opt_trace, _) = replay(&w, &cm, &optimized.plan, None)?;
    let mut out = String::new();
    writeln!(
        out,
        "baseline {baseline_region} engines 1 movement {}",
        base_trace.makespan
    )
    .unwrap();
    writeln!(
        out,
        "optimized engines {} movement {} total {}",
        optimized.report.engines_used, opt_trace.makespan, optimized.report.total_cost
    )
    .unwrap();
    let ratio = speedup(&baseline, &optimized)?;
    let exact = ratio.to_string();
    if exact.contains('/') {
        writeln!(out, "speedup {exact} (~{:.4})", ratio.to_f64()).unwrap();
    } else {
        writeln!(out, "speedup {exact}").unwrap();
    }
    Ok(out)
}

fn generate(
    seed: u64,
    regions: usize,
    services: Option<usize>,
    wf_path: &Path,
    cm_path: &Path,
) -> Outcome {
    let names = region_names(regions);
    let mut gen = WorkflowGenerator::new(names.clone());
    if let Some(n) = services {
        gen.n_services = n..=n;
    }
    let w = gen.generate(seed)?;
    let cm = synthetic_cost_matrix(seed, &names, &GeoModel::default());
    write(wf_path, &serialize_workflow(&w))?;
    write(cm_path, &serialize_cost_matrix(&cm))?;
    Ok(format!("{} services over {} regions\n", w.len(), cm.len()))
}

fn run(cli: Cli) -> Outcome {
    match cli.command {
        Command::Validate(inputs) => validate(&inputs),
        Command::Solve {
            inputs,
            search,
            max_engines,
            oracle,
        } => solve(&inputs, &search, max_engines, oracle),
        Command::Sweep {
            inputs,
            rates,
            format,
            threads,
        } => sweep(&inputs, &rates, format, threads),
        Command::Simulate {
            inputs,
            plan,
            trace,
            emit,
        } => simulate_cmd(&inputs, &plan, trace, emit.as_deref()),
        Command::Compare {
            inputs,
            baseline_region,
            search,
        } => compare(&inputs, &baseline_region, &search),
        Command::Generate {
            seed,
            regions,
            services,
            workflow,
            matrix,
        } => generate(seed, regions, services, &workflow, &matrix),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}
