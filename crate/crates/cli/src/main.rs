use std::fs;
use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use switchquest::formulas::{evaluate, FORMULA_NAMES};
use switchquest::game::{
    best_response_rounds_with, run_match, worst_case_rounds_with, BestResponseConfig, WorstCaseConfig,
    DEFAULT_WORST_CASE_CAP,
};
use switchquest::generators::{
    gen_alg_b_example, gen_gpy_complete, gen_gpy_grid, gen_hl, gen_pyramid, gen_tree, gen_tree_of_h, gen_tree_remark,
    random_cyclic, random_dag,
};
use switchquest::reduce::{
    lex_least_longest_path, longest_generalized_path, reduce_multi, reduce_simple, PathSpec, GENERALIZED_PATH_CAP,
};
use switchquest::solver::{solve_exact, SolverConfig};
use switchquest::strategies::{adversary_by_name, questioner_by_name, Adversary, FixedAssignment};
use switchquest::verify::{run_suite, Budget, DEFAULT_SEED, SUITE_NAMES};
use switchquest::{Goal, Graph, SwitchAssignment};

#[derive(Parser)]
#[command(name = "switchquest", version, about = "Switch-search games on single-source DAGs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Input {
    /// Graph JSON file; stdin when omitted or `-`.
    #[arg(short, long)]
    input: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Simple,
    Multi,
}

#[derive(Clone, Copy, ValueEnum)]
enum GoalArg {
    Sink,
    Path,
}

impl From<GoalArg> for Goal {
    fn from(g: GoalArg) -> Goal {
        match g {
            GoalArg::Sink => Goal::Sink,
            GoalArg::Path => Goal::Path,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Generate a graph family: tree D N, pyramid N, gpy_complete D N, gpy_grid D N,
    /// hl K L, algb K L, tree_remark N, tree_of_h K L, random_dag N MAX MIN, random_cyclic N MAX MIN.
    Gen {
        family: String,
        params: Vec<usize>,
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Parallel edges allowed (random_dag).
        #[arg(long)]
        multigraph: bool,
        #[arg(long, env = "SWITCHQUEST_SEED", default_value_t = DEFAULT_SEED)]
        seed: u64,
    },
    /// Merge out-degree-1 vertices into their successors.
    Reduce {
        #[arg(long, value_enum)]
        mode: Mode,
        #[command(flatten)]
        input: Input,
    },
    /// Longest path from the source.
    Lp {
        #[command(flatten)]
        input: Input,
    },
    /// Longest generalized path from the source.
    Glp {
        #[command(flatten)]
        input: Input,
    },
    /// Exact optimal number of rounds.
    Solve {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        k: usize,
        #[arg(long, value_enum)]
        goal: GoalArg,
        #[arg(long, default_value_t = 16)]
        max_askable: usize,
        /// Search root question sets on all cores.
        #[arg(long)]
        parallel: bool,
        /// Identify mirror-image pyramid states.
        #[arg(long)]
        symmetry: bool,
    },
    /// Play one match.
    Match {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        k: usize,
        #[arg(long, value_enum)]
        goal: GoalArg,
        #[arg(long)]
        questioner: String,
        #[arg(long, required_unless_present = "assignment", conflicts_with = "assignment")]
        adversary: Option<String>,
        /// Switch assignment JSON answering every question.
        #[arg(long)]
        assignment: Option<PathBuf>,
    },
    /// Worst case of a questioner, or best response to an adversary.
    Eval {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        k: usize,
        #[arg(long, value_enum)]
        goal: GoalArg,
        #[arg(long, requires = "questioner", conflicts_with = "best_response")]
        worst_case: bool,
        #[arg(long, requires = "adversary", required_unless_present = "worst_case")]
        best_response: bool,
        #[arg(long)]
        questioner: Option<String>,
        #[arg(long)]
        adversary: Option<String>,
        /// Askable-vertex cap for exhaustive enumeration.
        #[arg(long)]
        cap: Option<usize>,
        /// Sample this many assignments when over the cap (worst case only).
        #[arg(long)]
        sample: Option<usize>,
        #[arg(long, env = "SWITCHQUEST_SEED", default_value_t = DEFAULT_SEED)]
        seed: u64,
    },
    /// Evaluate a closed-form bound.
    Formula { name: String, params: Vec<usize> },
    /// Run a verification suite.
    Verify {
        suite: String,
        #[arg(long, env = "SWITCHQUEST_SEED", default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long, env = "SWITCHQUEST_BUDGET", default_value = "small")]
        budget: String,
    },
    /// Re-emit a graph as DOT or canonical JSON.
    Export {
        #[arg(long, conflicts_with = "json", required_unless_present = "json")]
        dot: bool,
        #[arg(long)]
        json: bool,
        #[command(flatten)]
        input: Input,
    },
}

fn read_graph(input: &Input) -> Result<Graph> {
    let text = match input.input.as_deref() {
        Some(p) if p.as_os_str() != "-" => fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?,
        _ => {
            let mut s = String::new();
            io::stdin().read_to_string(&mut s).context("reading stdin")?;
            s
        }
    };
    Graph::from_json(&text).map_err(|e| anyhow!("invalid graph: {e}"))
}

fn emit(text: &str, output: Option<&PathBuf>) -> Result<()> {
    match output {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => io::stdout().write_all(text.as_bytes()).context("writing stdout"),
    }
}

fn emit_json(value: serde_json::Value) -> Result<()> {
    emit(&format!("{}\n", serde_json::to_string_pretty(&value)?), None)
}

fn generate(family: &str, p: &[usize], multigraph: bool, seed: u64) -> Result<Graph> {
    let arity = |n: usize| {
        if p.len() == n {
            Ok(())
        } else {
            Err(anyhow!("family `{family}` takes {n} parameters, got {}", p.len()))
        }
    };
    let g = match family {
        "tree" => arity(2).and_then(|_| Ok(gen_tree(p[0], p[1])?)),
        "pyramid" => arity(1).and_then(|_| Ok(gen_pyramid(p[0])?)),
        "gpy_complete" => arity(2).and_then(|_| Ok(gen_gpy_complete(p[0], p[1])?)),
        "gpy_grid" => arity(2).and_then(|_| Ok(gen_gpy_grid(p[0], p[1])?)),
        "hl" => arity(2).and_then(|_| Ok(gen_hl(p[0], p[1])?)),
        "algb" => arity(2).and_then(|_| Ok(gen_alg_b_example(p[0], p[1])?)),
        "tree_remark" => arity(1).and_then(|_| Ok(gen_tree_remark(p[0])?)),
        "tree_of_h" => arity(2).and_then(|_| Ok(gen_tree_of_h(p[0], p[1])?)),
        "random_dag" => arity(3).and_then(|_| Ok(random_dag(p[0], p[1], p[2], multigraph, seed)?)),
        "random_cyclic" => arity(3).and_then(|_| Ok(random_cyclic(p[0], p[1], p[2], seed)?)),
        _ => bail!(
            "unknown family `{family}`; known: tree, pyramid, gpy_complete, gpy_grid, hl, algb, tree_remark, \
             tree_of_h, random_dag, random_cyclic"
        ),
    }?;
    if multigraph && family != "random_dag" {
        bail!("--multigraph only applies to random_dag");
    }
    Ok(g)
}

fn path_json(g: &Graph, p: &PathSpec) -> serde_json::Value {
    json!({
        "length": p.len(),
        "vertices": p.vertices.iter().map(|&v| g.id(v)).collect::<Vec<_>>(),
        "edges": p.edges.iter().map(|&e| g.edge_id(e)).collect::<Vec<_>>(),
        "closing": p.closing.map(|e| g.edge_id(e)),
    })
}

/// Runs a command; `Ok(false)` means a verification failed.
fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Gen { family, params, output, multigraph, seed } => {
            let g = generate(&family, &params, multigraph, seed)?;
            eprintln!("{}: {} vertices, {} edges", g.name(), g.vertex_count(), g.edge_count());
            emit(&g.to_json(), output.as_ref())?;
        }
        Command::Reduce { mode, input } => {
            let g = read_graph(&input)?;
            let r = match mode {
                Mode::Simple => reduce_simple(&g)?,
                Mode::Multi => reduce_multi(&g),
            };
            eprintln!("reduced {} to {} vertices", g.vertex_count(), r.graph.vertex_count());
            emit(&r.to_json(&g), None)?;
        }
        Command::Lp { input } => {
            let g = read_graph(&input)?;
            emit_json(path_json(&g, &lex_least_longest_path(&g)?))?;
        }
        Command::Glp { input } => {
            let g = read_graph(&input)?;
            emit_json(path_json(&g, &longest_generalized_path(&g, GENERALIZED_PATH_CAP)?))?;
        }
        Command::Solve { input, k, goal, max_askable, parallel, symmetry } => {
            let g = read_graph(&input)?;
            let cfg = SolverConfig { max_askable, symmetry_reduction: symmetry, parallel };
            let r = solve_exact(&g, k, goal.into(), &cfg)?;
            eprintln!("{} k={k}: {} rounds ({} states, {} ms)", g.name(), r.value, r.stats.states, r.stats.ms);
            emit(&r.to_json(&g), None)?;
        }
        Command::Match { input, k, goal, questioner, adversary, assignment } => {
            let g = read_graph(&input)?;
            let mut q = questioner_by_name(&questioner).map_err(|e| anyhow!(e))?;
            let mut a: Box<dyn Adversary> = match (adversary, assignment) {
                (_, Some(path)) => {
                    let text = fs::read_to_string(&path).with_context(|| format!("reading {}", path.display()))?;
                    let a = SwitchAssignment::from_json(&g, &text).map_err(|e| anyhow!("invalid assignment: {e}"))?;
                    Box::new(FixedAssignment::new(a))
                }
                (Some(name), None) => adversary_by_name(&name).map_err(|e| anyhow!(e))?,
                (None, None) => bail!("an adversary or an assignment is required"),
            };
            let r = run_match(&g, k, q.as_mut(), a.as_mut(), goal.into())?;
            eprintln!("{} vs {}: {} rounds", q.name(), a.name(), r.rounds);
            emit(&r.to_json(&g), None)?;
        }
        Command::Eval { input, k, goal, worst_case, questioner, adversary, cap, sample, seed, .. } => {
            let g = read_graph(&input)?;
            if worst_case {
                let name = questioner.expect("clap requires --questioner");
                let q = questioner_by_name(&name).map_err(|e| anyhow!(e))?;
                let cfg = WorstCaseConfig {
                    cap: cap.unwrap_or(DEFAULT_WORST_CASE_CAP),
                    sample: sample.map(|n| (n, seed)),
                };
                let w = worst_case_rounds_with(&g, k, q.as_ref(), goal.into(), &cfg)?;
                eprintln!("worst case of {name}: {} rounds", w.rounds);
                emit_json(json!({"mode": "worst_case", "strategy": name, "rounds": w.rounds, "exhaustive": w.exhaustive}))?;
            } else {
                let name = adversary.expect("clap requires --adversary");
                let a = adversary_by_name(&name).map_err(|e| anyhow!(e))?;
                let cfg = BestResponseConfig { max_askable: cap.unwrap_or(16) };
                let rounds = best_response_rounds_with(&g, k, a.as_ref(), goal.into(), &cfg)?;
                eprintln!("best response to {name}: {rounds} rounds");
                emit_json(json!({"mode": "best_response", "strategy": name, "rounds": rounds, "exhaustive": true}))?;
            }
        }
        Command::Formula { name, params } => {
            if !FORMULA_NAMES.contains(&name.as_str()) {
                bail!("unknown formula `{name}`; known: {}", FORMULA_NAMES.join(", "));
            }
            let (value, kind) = evaluate(&name, &params).map_err(|e| anyhow!(e.to_string()))?;
            emit_json(json!({"name": name, "params": params, "value": value, "kind": kind}))?;
        }
        Command::Verify { suite, seed, budget } => {
            let budget: Budget = budget.parse().map_err(|e: String| anyhow!(e))?;
            if !SUITE_NAMES.contains(&suite.as_str()) {
                bail!("unknown suite `{suite}`; known: {}", SUITE_NAMES.join(", "));
            }
            let report = run_suite(&suite, seed, budget).map_err(|e| anyhow!(e))?;
            for c in report.checks.iter().filter(|c| !c.pass) {
                eprintln!("FAIL {}: expected {}, got {}", c.name, c.expected, c.actual);
            }
            eprintln!(
                "{suite}: {}/{} checks passed{}",
                report.total - report.failed,
                report.total,
                if report.complete { "" } else { " (incomplete: time limit reached)" }
            );
            emit(&report.to_json(), None)?;
            return Ok(report.passed);
        }
        Command::Export { dot, input, .. } => {
            let g = read_graph(&input)?;
            emit(&if dot { g.to_dot() } else { g.to_json() }, None)?;
        }
    }
    Ok(true)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
