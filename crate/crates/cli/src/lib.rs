//! Command implementations behind the `kset` binary.
//!
//! Every command returns a [`CommandResult`]: exit code 0 for a clean result,
//! 1 for a mathematical finding (a witness, a failed check) and 2 for usage,
//! parse or cap errors. Machine-readable output goes to stdout, diagnostics to
//! stderr.

use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use kset_core::kuhn::DecisionColoring;
use kset_core::oracle;
use kset_core::protocol::Simulator;
use kset_core::{
    bound, closure, flood_solve, inp, min_rounds, primitive_simplices, refute, vertices,
    Algorithm, Builtin, DynamicGraphSpec, Error, InputConfig, LatticeVertex, NodeAssigner, Value,
};
use serde::Serialize;
use serde_json::json;

#[derive(Debug, Parser)]
#[command(name = "kset", version, about = "Tight round bounds for k-set agreement in known dynamic networks")]
pub struct Cli {
    /// Worker threads (defaults to all cores); never changes the output.
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    /// Pretty-print JSON output.
    #[arg(long, global = true)]
    pub pretty: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Smallest r with a dominating set of size <= k in H_r.
    Bound {
        #[command(flatten)]
        target: Target,
        #[arg(long, default_value_t = 64)]
        max_rounds: usize,
    },
    /// Run the flooding algorithm at its bound on one configuration.
    Solve {
        #[command(flatten)]
        target: Target,
        /// Digit string, node 1 first.
        #[arg(long)]
        inputs: String,
        #[arg(long, default_value_t = 64)]
        max_rounds: usize,
    },
    /// Build a verified violation witness for an algorithm below the bound.
    Refute {
        #[command(flatten)]
        target: Target,
        #[arg(long)]
        alg: String,
        #[arg(long)]
        budget: usize,
        #[arg(long, default_value_t = 64)]
        max_rounds: usize,
    },
    /// Emit the Kuhn triangulation with inputs, node assignment and colors.
    Triangulate {
        /// Side length; taken from the graph when one is given.
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        graph: Option<PathBuf>,
        #[arg(long, requires = "graph")]
        budget: Option<usize>,
        #[arg(long, requires = "budget")]
        alg: Option<String>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        #[arg(long, default_value_t = 64)]
        max_rounds: usize,
    },
    /// Print the information-flow closure H_r.
    Closure {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long = "r", visible_alias = "rounds")]
        rounds: usize,
        #[arg(long)]
        dot: bool,
    },
    /// Check an algorithm on every configuration, or on a seeded sample.
    Check {
        #[command(flatten)]
        target: Target,
        #[arg(long)]
        alg: String,
        #[arg(long)]
        budget: usize,
        #[arg(long)]
        exhaustive: bool,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 64)]
        max_rounds: usize,
    },
}

#[derive(Debug, Args)]
pub struct Target {
    /// Graph sequence file (JSON).
    #[arg(long)]
    pub graph: PathBuf,
    #[arg(long)]
    pub k: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Tsv,
    Dot,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CommandResult {
    pub exit_code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl CommandResult {
    fn error(e: impl std::fmt::Display) -> Self {
        CommandResult {
            exit_code: 2,
            stdout: String::new(),
            stderr: format!("error: {e}\n"),
        }
    }
}

struct Output {
    pretty: bool,
}

impl Output {
    fn json<T: Serialize>(&self, code: i32, payload: &T) -> CommandResult {
        let mut stdout = if self.pretty {
            serde_json::to_string_pretty(payload)
        } else {
            serde_json::to_string(payload)
        }
        .expect("payload serializes");
        stdout.push('\n');
        CommandResult {
            exit_code: code,
            stdout,
            stderr: String::new(),
        }
    }

    fn text(&self, stdout: String) -> CommandResult {
        CommandResult {
            exit_code: 0,
            stdout,
            stderr: String::new(),
        }
    }
}

pub fn execute(cli: &Cli) -> CommandResult {
    let out = Output { pretty: cli.pretty };
    let result = match &cli.command {
        Command::Bound { target, max_rounds } => cmd_bound(&out, target, *max_rounds),
        Command::Solve {
            target,
            inputs,
            max_rounds,
        } => cmd_solve(&out, target, inputs, *max_rounds),
        Command::Refute {
            target,
            alg,
            budget,
            max_rounds,
        } => cmd_refute(&out, target, alg, *budget, *max_rounds),
        Command::Triangulate {
            n,
            k,
            graph,
            budget,
            alg,
            format,
            max_rounds,
        } => cmd_triangulate(&out, *n, *k, graph.as_ref(), *budget, alg.as_deref(), *format, *max_rounds),
        Command::Closure { graph, rounds, dot } => cmd_closure(&out, graph, *rounds, *dot),
        Command::Check {
            target,
            alg,
            budget,
            exhaustive,
            samples,
            seed,
            max_rounds,
        } => cmd_check(&out, target, alg, *budget, *exhaustive, *samples, *seed, *max_rounds),
    };
    result.unwrap_or_else(CommandResult::error)
}

fn check_k(k: usize) -> Result<(), Error> {
    if k == 0 {
        return Err(Error::InvalidInput("k must be at least 1".into()));
    }
    Ok(())
}

fn load(target: &Target) -> Result<DynamicGraphSpec, Error> {
    check_k(target.k)?;
    DynamicGraphSpec::load(&target.graph)
}

/// Resolves a builtin name; bare `flood_dominator` is pinned to the bound.
fn resolve_alg(
    name: &str,
    spec: &DynamicGraphSpec,
    k: usize,
    max_rounds: usize,
) -> Result<Box<dyn Algorithm>, Error> {
    match name.parse::<Builtin>()? {
        Builtin::FloodDominator(None) => {
            let r = min_rounds(spec, k, max_rounds)?;
            Ok(Builtin::FloodDominator(Some(r)).instantiate())
        }
        b => Ok(b.instantiate()),
    }
}

fn cmd_bound(out: &Output, target: &Target, max_rounds: usize) -> Result<CommandResult, Error> {
    let spec = load(target)?;
    let b = bound(&spec, target.k, max_rounds)?;
    Ok(out.json(
        0,
        &json!({
            "r": b.rounds,
            "dominating_set": b.dominating_set,
            "gamma_by_round": b.gamma_by_round,
        }),
    ))
}

fn cmd_solve(out: &Output, target: &Target, inputs: &str, max_rounds: usize) -> Result<CommandResult, Error> {
    let spec = load(target)?;
    let config = InputConfig::parse_for(&spec, inputs, target.k)?;
    let sol = flood_solve(&spec, target.k, &config, max_rounds)?;
    let outputs = InputConfig::from(sol.report.outputs.clone()).to_string();
    Ok(out.json(
        0,
        &json!({
            "inputs": config,
            "outputs": outputs,
            "r": sol.rounds,
            "dominating_set": sol.dominating_set,
            "valid": sol.report.valid,
            "agreeing": sol.report.agreeing,
            "distinct_count": sol.report.distinct_count,
        }),
    ))
}

fn cmd_refute(
    out: &Output,
    target: &Target,
    alg: &str,
    budget: usize,
    max_rounds: usize,
) -> Result<CommandResult, Error> {
    let spec = load(target)?;
    let alg = resolve_alg(alg, &spec, target.k, max_rounds)?;
    let witness = refute(&spec, target.k, alg.as_ref(), budget)?;
    let mut result = out.json(1, &witness);
    result.stderr = format!(
        "{}: {:?} on {} at nodes {:?}\n",
        alg.name(),
        witness.kind,
        witness.config,
        witness.nodes
    );
    Ok(result)
}

const TRIANGULATION_CAP: u128 = 200_000;

#[derive(Serialize)]
struct VertexRow {
    id: usize,
    coords: Vec<usize>,
    inp: InputConfig,
    #[serde(skip_serializing_if = "Option::is_none")]
    node: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    color: Option<Value>,
}

#[derive(Serialize)]
struct SimplexRow {
    base: Vec<usize>,
    perm: Vec<usize>,
    vertex_ids: Vec<usize>,
}

#[allow(clippy::too_many_arguments)]
fn cmd_triangulate(
    out: &Output,
    n: Option<usize>,
    k: usize,
    graph: Option<&PathBuf>,
    budget: Option<usize>,
    alg: Option<&str>,
    format: Format,
    max_rounds: usize,
) -> Result<CommandResult, Error> {
    check_k(k)?;
    let spec = graph.map(DynamicGraphSpec::load).transpose()?;
    let n = match (&spec, n) {
        (Some(s), Some(n)) if s.n() != n => {
            return Err(Error::InvalidInput(format!("--n {n} disagrees with the graph's {} nodes", s.n())))
        }
        (Some(s), _) => s.n(),
        (None, Some(n)) if n >= 1 => n,
        _ => return Err(Error::InvalidInput("give --n >= 1 or --graph".into())),
    };
    let count = (1..=k as u128).fold(1u128, |acc, i| acc * (n as u128 + i) / i);
    if count > TRIANGULATION_CAP {
        return Err(Error::CapExceeded {
            what: "triangulation vertex count",
            size: count,
            cap: TRIANGULATION_CAP,
        });
    }

    let verts: Vec<LatticeVertex> = vertices(n, k).collect();
    let alg = match (&spec, alg) {
        (Some(s), Some(name)) => Some(resolve_alg(name, s, k, max_rounds)?),
        _ => None,
    };
    let mut rows: Vec<VertexRow> = verts
        .iter()
        .enumerate()
        .map(|(id, v)| VertexRow {
            id,
            coords: v.coords.clone(),
            inp: inp(v, n),
            node: None,
            color: None,
        })
        .collect();
    if let (Some(spec), Some(budget)) = (&spec, budget) {
        let assigner = NodeAssigner::new(spec, k, budget)?;
        for (row, v) in rows.iter_mut().zip(&verts) {
            row.node = Some(assigner.assign(v)?);
        }
        if let Some(alg) = &alg {
            let coloring = DecisionColoring::new(spec, k, budget, alg.as_ref())?;
            for (row, v) in rows.iter_mut().zip(&verts) {
                row.color = Some(coloring.color(v)?);
            }
        }
    }

    let index: std::collections::HashMap<&LatticeVertex, usize> =
        verts.iter().enumerate().map(|(i, v)| (v, i)).collect();
    let simplices: Vec<SimplexRow> = primitive_simplices(n, k)
        .map(|s| SimplexRow {
            vertex_ids: s.vertices().iter().map(|y| index[y]).collect(),
            base: s.base.coords.clone(),
            perm: s.perm.clone(),
        })
        .collect();

    Ok(match format {
        Format::Json => out.json(
            0,
            &json!({ "n": n, "k": k, "budget": budget, "vertices": rows, "simplices": simplices }),
        ),
        Format::Tsv => out.text(triangulation_tsv(&rows, &simplices)),
        Format::Dot if k == 2 => out.text(triangulation_dot(&rows, &simplices)),
        Format::Dot => return Err(Error::InvalidInput("DOT export is only drawn for k = 2".into())),
    })
}

fn dash<T: ToString>(x: Option<T>) -> String {
    x.map_or_else(|| "-".into(), |v| v.to_string())
}

fn triangulation_tsv(rows: &[VertexRow], simplices: &[SimplexRow]) -> String {
    let mut s = String::new();
    for row in rows {
        let coords: Vec<String> = row.coords.iter().map(|c| c.to_string()).collect();
        let _ = writeln!(
            s,
            "{}\t{}\t{}\t{}",
            coords.join(","),
            row.inp,
            dash(row.node),
            dash(row.color)
        );
    }
    for simplex in simplices {
        let ids: Vec<String> = simplex.vertex_ids.iter().map(|i| i.to_string()).collect();
        let _ = writeln!(s, "{}", ids.join("\t"));
    }
    s
}

fn triangulation_dot(rows: &[VertexRow], simplices: &[SimplexRow]) -> String {
    const PALETTE: [&str; 3] = ["forestgreen", "firebrick", "blue"];
    let mut s = String::from("graph T {\n  node [shape=circle, fontsize=9];\n");
    for row in rows {
        let label = match row.node {
            Some(node) => format!("{}\\n{}", row.inp, node),
            None => row.inp.to_string(),
        };
        let color = row.color.map_or("black", |c| PALETTE[c as usize % PALETTE.len()]);
        let _ = writeln!(
            s,
            "  v{} [label=\"{label}\", pos=\"{},{}!\", color={color}];",
            row.id, row.coords[0], row.coords[1]
        );
    }
    let mut edges = std::collections::BTreeSet::new();
    for simplex in simplices {
        let ids = &simplex.vertex_ids;
        for i in 0..ids.len() {
            for j in i + 1..ids.len() {
                edges.insert((ids[i].min(ids[j]), ids[i].max(ids[j])));
            }
        }
    }
    for (a, b) in edges {
        let _ = writeln!(s, "  v{a} -- v{b};");
    }
    s.push_str("}\n");
    s
}

fn cmd_closure(out: &Output, graph: &PathBuf, rounds: usize, dot: bool) -> Result<CommandResult, Error> {
    let spec = DynamicGraphSpec::load(graph)?;
    let h = closure(&spec, rounds);
    if dot {
        return Ok(out.text(h.to_dot(&format!("H{rounds}"))));
    }
    let arcs: Vec<[usize; 2]> = h.arcs().map(|(u, v)| [u, v]).collect();
    Ok(out.json(0, &json!({ "n": spec.n(), "r": rounds, "arc_count": arcs.len(), "arcs": arcs })))
}

#[allow(clippy::too_many_arguments)]
fn cmd_check(
    out: &Output,
    target: &Target,
    alg: &str,
    budget: usize,
    exhaustive: bool,
    samples: usize,
    seed: u64,
    max_rounds: usize,
) -> Result<CommandResult, Error> {
    let spec = load(target)?;
    let k = target.k;
    let alg = resolve_alg(alg, &spec, k, max_rounds)?;

    let (total, failures) = if exhaustive {
        let report = oracle::exhaustive_check(&spec, k, alg.as_ref(), budget)?;
        (report.total_configs, report.failures)
    } else {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let sim = Simulator::new(&spec, k, budget);
        let mut failures = Vec::new();
        for _ in 0..samples {
            let config: InputConfig = (0..spec.n())
                .map(|_| rng.random_range(0..=k as Value))
                .collect::<Vec<_>>()
                .into();
            let report = sim.run(alg.as_ref(), &config)?;
            if !report.solved() {
                failures.push(oracle::Failure { config, report });
            }
        }
        (samples as u128, failures)
    };

    let code = if failures.is_empty() { 0 } else { 1 };
    let mut result = out.json(
        code,
        &json!({
            "algorithm": alg.name(),
            "budget": budget,
            "exhaustive": exhaustive,
            "total_configs": total,
            "failure_count": failures.len(),
            "first_failure": failures.first(),
            "failures": failures,
        }),
    );
    if let Some(f) = failures.first() {
        result.stderr = format!(
            "{} fails on {}: outputs {}\n",
            alg.name(),
            f.config,
            InputConfig::from(f.report.outputs.clone())
        );
    }
    Ok(result)
}
