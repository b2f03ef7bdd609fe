//! The `dmplan` command line: structural diagnosis, resolution plans,
//! block-wise solving and Graphviz export for constraint files.

pub mod dot;
pub mod report;
pub mod text;

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use dmplan_core::decomposition::{resolution_plan, ResolutionPlan, Verdict};
use dmplan_core::graph::{maximum_matching, orient, strongly_connected_components, BipartiteGraph};
use dmplan_core::solver::{execute_plan, solve_monolithic, SolveError, SolverConfig};
use dmplan_core::system::{parse_system, EquationSystem};

use report::{Report, SolutionReport};
use text::Style;

/// Exit codes.
pub mod exit {
    pub const OK: i32 = 0;
    pub const INPUT_ERROR: i32 = 1;
    pub const OVER: i32 = 2;
    pub const UNDER: i32 = 3;
    pub const OVER_AND_UNDER: i32 = 4;
    pub const DISCARDED_FAILED: i32 = 5;
    pub const NO_SOLUTION: i32 = 6;
}

pub const COLOR_ENV: &str = "DMPLAN_COLOR";

#[derive(Debug, Parser)]
#[command(name = "dmplan", version, about = "Decompose, plan and solve systems of constraint equations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Classify the system into well-, over- and under-constrained parts
    Analyze(AnalyzeArgs),
    /// List irreducible blocks in resolution order
    Plan(PlanArgs),
    /// Solve the system block by block
    Solve(SolveArgs),
    /// Export a graph in Graphviz DOT format
    Dot(DotArgs),
}

#[derive(Debug, Args)]
struct AnalyzeArgs {
    file: PathBuf,
    /// Emit the JSON report instead of a text summary
    #[arg(long)]
    json: bool,
    /// Record wall-clock timings in the report
    #[arg(long)]
    timings: bool,
}

#[derive(Debug, Args)]
struct PlanArgs {
    file: PathBuf,
    #[arg(long, conflicts_with = "dot")]
    json: bool,
    /// Emit the block dependency DAG in DOT format
    #[arg(long)]
    dot: bool,
    #[arg(long)]
    timings: bool,
}

#[derive(Debug, Args)]
struct SolveArgs {
    file: PathBuf,
    /// Bind a free unknown or override a parameter (repeatable)
    #[arg(long = "param", value_name = "NAME=VALUE", value_parser = parse_binding)]
    params: Vec<(String, f64)>,
    /// Final box width
    #[arg(long, value_name = "REAL")]
    tol: Option<f64>,
    /// Residual tolerance for accepting solutions and discarded equations
    #[arg(long, value_name = "REAL")]
    residual_tol: Option<f64>,
    /// Box budget per block
    #[arg(long, value_name = "INT")]
    max_boxes: Option<usize>,
    /// Solve all equations as one block
    #[arg(long)]
    monolithic: bool,
    /// Accepted for symmetry; solve always writes JSON
    #[arg(long)]
    json: bool,
    #[arg(long)]
    timings: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum GraphKind {
    Bipartite,
    Oriented,
    Condensation,
}

#[derive(Debug, Args)]
struct DotArgs {
    file: PathBuf,
    #[arg(long, value_enum, default_value = "bipartite")]
    graph: GraphKind,
}

fn parse_binding(s: &str) -> Result<(String, f64), String> {
    let (name, value) = s.split_once('=').ok_or_else(|| format!("expected NAME=VALUE, got `{s}`"))?;
    let value: f64 = value
        .trim()
        .parse()
        .map_err(|_| format!("`{}` is not a number", value.trim()))?;
    if !value.is_finite() {
        return Err(format!("`{s}` is not finite"));
    }
    Ok((name.trim().to_string(), value))
}

/// What a command produced.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn fail(code: i32, message: impl Into<String>) -> Self {
        let mut stderr = message.into();
        if !stderr.ends_with('\n') {
            stderr.push('\n');
        }
        Self {
            code,
            stdout: String::new(),
            stderr,
        }
    }

    fn ok(code: i32, stdout: String) -> Self {
        Self {
            code,
            stdout,
            stderr: String::new(),
        }
    }
}

/// Whether text output gets ANSI colors, from the `DMPLAN_COLOR` value.
pub fn use_color(setting: Option<&str>, stdout_is_terminal: bool) -> bool {
    match setting {
        Some("never") => false,
        _ => stdout_is_terminal,
    }
}

/// Runs the command line `args` (program name first).
pub fn run<I, T>(args: I, color: bool) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { exit::INPUT_ERROR } else { exit::OK };
            let rendered = e.render().to_string();
            return if e.use_stderr() {
                Outcome::fail(code, rendered)
            } else {
                Outcome::ok(code, rendered)
            };
        }
    };
    let style = Style { color };
    match cli.command {
        Command::Analyze(a) => analyze(&a, &style),
        Command::Plan(a) => plan(&a, &style),
        Command::Solve(a) => solve(&a),
        Command::Dot(a) => dot(&a),
    }
}

struct Loaded {
    system: EquationSystem,
    graph: BipartiteGraph,
}

fn load(path: &PathBuf) -> Result<Loaded, Outcome> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Outcome::fail(exit::INPUT_ERROR, format!("error: cannot read {}: {e}", path.display())))?;
    let system = parse_system(&text)
        .map_err(|e| Outcome::fail(exit::INPUT_ERROR, format!("{}:{}:{}: {}", path.display(), e.line, e.column, e.kind)))?;
    if system.equations.is_empty() {
        return Err(Outcome::fail(
            exit::INPUT_ERROR,
            format!("error: {} contains no equations", path.display()),
        ));
    }
    let graph = system
        .graph()
        .map_err(|e| Outcome::fail(exit::INPUT_ERROR, format!("error: {e}")))?;
    Ok(Loaded { system, graph })
}

fn verdict_code(v: Verdict) -> i32 {
    match v {
        Verdict::Well => exit::OK,
        Verdict::Over => exit::OVER,
        Verdict::Under => exit::UNDER,
        Verdict::Mixed => exit::OVER_AND_UNDER,
    }
}

fn elapsed_ms(t: Instant) -> f64 {
    t.elapsed().as_secs_f64() * 1e3
}

fn planned(input: &Loaded, timings: bool) -> (ResolutionPlan, Report) {
    let t = Instant::now();
    let plan = resolution_plan(&input.graph);
    let ms = elapsed_ms(t);
    let mut report = Report::new(&input.system, &plan);
    if timings {
        report.timings.decompose_ms = Some(ms);
    }
    (plan, report)
}

fn json(report: &Report) -> String {
    let mut s = serde_json::to_string_pretty(report).expect("report serializes");
    s.push('\n');
    s
}

fn analyze(a: &AnalyzeArgs, style: &Style) -> Outcome {
    let input = match load(&a.file) {
        Ok(i) => i,
        Err(o) => return o,
    };
    let (_, report) = planned(&input, a.timings);
    let out = if a.json { json(&report) } else { text::analysis(&report, style) };
    Outcome::ok(verdict_code(report.verdict), out)
}

fn plan(a: &PlanArgs, style: &Style) -> Outcome {
    let input = match load(&a.file) {
        Ok(i) => i,
        Err(o) => return o,
    };
    let (plan, report) = planned(&input, a.timings);
    let out = if a.dot {
        dot::plan(&input.system, &plan)
    } else if a.json {
        json(&report)
    } else {
        text::plan(&report, style)
    };
    Outcome::ok(verdict_code(report.verdict), out)
}

fn solve(a: &SolveArgs) -> Outcome {
    let input = match load(&a.file) {
        Ok(i) => i,
        Err(o) => return o,
    };
    let mut config = SolverConfig::<f64>::default();
    if let Some(t) = a.tol {
        if !(t > 0.0) {
            return Outcome::fail(exit::INPUT_ERROR, "error: --tol must be positive");
        }
        config.tol_width = t;
    }
    if let Some(t) = a.residual_tol {
        if !(t > 0.0) {
            return Outcome::fail(exit::INPUT_ERROR, "error: --residual-tol must be positive");
        }
        config.tol_residual = t;
    }
    if let Some(m) = a.max_boxes {
        config.max_boxes = m;
    }
    let mut overrides = BTreeMap::new();
    for (name, value) in &a.params {
        if overrides.insert(name.clone(), *value).is_some() {
            return Outcome::fail(exit::INPUT_ERROR, format!("error: --param {name} given twice"));
        }
    }

    let (plan, mut report) = planned(&input, a.timings);
    let t = Instant::now();
    let result = if a.monolithic {
        solve_monolithic(&input.system, &overrides, &config)
    } else {
        execute_plan(&plan, &input.system, &overrides, &config)
    };
    let solve_ms = elapsed_ms(t);
    let solutions = match result {
        Ok(s) => s,
        Err(SolveError::UnboundParameters(names)) => {
            return Outcome::fail(
                exit::INPUT_ERROR,
                format!(
                    "error: under-constrained, bind the free parameters with --param: {}",
                    names.join(", ")
                ),
            )
        }
        Err(e) => return Outcome::fail(exit::INPUT_ERROR, format!("error: {e}")),
    };
    if a.timings {
        report.timings.solve_ms = Some(solve_ms);
    }
    let discarded = if a.monolithic { Vec::new() } else { report.discarded_equations.clone() };
    report.solutions = solutions
        .iter()
        .map(|s| SolutionReport::new(s, &discarded, config.tol_residual))
        .collect();

    let (code, stderr) = if report.solutions.is_empty() {
        (exit::NO_SOLUTION, "no solutions found\n".to_string())
    } else if report.solutions.iter().any(|s| s.discarded_ok) {
        (exit::OK, String::new())
    } else {
        let mut failing: Vec<String> = report
            .solutions
            .iter()
            .flat_map(|s| s.failing_equations.iter().cloned())
            .collect();
        failing.sort();
        failing.dedup();
        (
            exit::DISCARDED_FAILED,
            format!("conflicting constraints: not satisfied by any solution: {}\n", failing.join(", ")),
        )
    };
    Outcome {
        code,
        stdout: json(&report),
        stderr,
    }
}

fn dot(a: &DotArgs) -> Outcome {
    let input = match load(&a.file) {
        Ok(i) => i,
        Err(o) => return o,
    };
    let m = maximum_matching(&input.graph);
    let out = match a.graph {
        GraphKind::Bipartite => dot::bipartite(&input.system, &input.graph, &m),
        GraphKind::Oriented => dot::oriented(&input.system, &orient(&input.graph, &m).expect("own matching")),
        GraphKind::Condensation => {
            let plan = resolution_plan(&input.graph);
            let dg = orient(&input.graph, &plan.decomposition.matching).expect("own matching");
            dot::condensation(&input.system, &strongly_connected_components(&dg), &plan.decomposition)
        }
    };
    Outcome::ok(exit::OK, out)
}
