//! `gseq`: G-closures, densities, continuity and the theorem verifier from
//! the command line.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use gseq::continuity::{
    decide_continuity, is_continuous_bounded, ContinuityScope, TabulatedFunction, DEFAULT_SEQUENCE_BUDGET,
};
use gseq::density::{lacunary_density, statistical_density, LacunaryScheme, Radius};
use gseq::exec::Execution;
use gseq::topology;
use gseq::verifier::{self, Status, SuiteConfig};
use gseq::{evaluate, is_regular_on, EvPerSeq, GroupElement, GroupModel, MethodDescriptor, PointSet};
use serde_json::{json, Value};

#[derive(Parser, Debug)]
#[command(name = "gseq", version, about = "Sequential convergence methods on eventually periodic sequences")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    #[arg(long, value_enum, default_value_t = Output::Human, global = true)]
    output: Output,

    /// `q` for the rational line or `z<n>` for the integers mod n.
    #[arg(long, global = true)]
    universe: Option<String>,

    /// Method in compact syntax (`kernel:1/2,1/2`, `lim+cesaro`) or JSON.
    #[arg(long, global = true)]
    method: Option<String>,

    /// JSON file supplying `method`, `universe`, `set`, `seq` or `function`.
    #[arg(long, global = true)]
    input: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Output {
    Human,
    Json,
}

#[derive(Args, Debug, Clone)]
struct SetArg {
    /// Comma separated elements, e.g. `0,1/2,1`.
    #[arg(long)]
    set: Option<String>,
}

#[derive(Args, Debug, Clone)]
struct DensityArgs {
    /// Comma separated prefix terms.
    #[arg(long, conflicts_with = "seq")]
    prefix: Option<String>,
    /// Sequence `pre:[..];cyc:[..]`, truncated to `--n` terms.
    #[arg(long, requires = "n")]
    seq: Option<String>,
    #[arg(long)]
    n: Option<usize>,
    /// The limit being tested.
    #[arg(long, default_value = "0")]
    ell: String,
    /// Radius of the open ball on `q`, or `discrete` on `z<n>`.
    #[arg(long)]
    radius: Option<String>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate the method on a sequence.
    Eval {
        #[arg(long)]
        seq: Option<String>,
    },
    /// G-closure of a finite set.
    Closure(SetArg),
    /// The first k iterated closures.
    Iterate {
        #[command(flatten)]
        set: SetArg,
        #[arg(long, default_value_t = 2)]
        k: usize,
    },
    CheckClosed(SetArg),
    CheckOpen(SetArg),
    Interior(SetArg),
    Boundary(SetArg),
    Dense(SetArg),
    /// Whether the method fixes every constant sequence.
    Regular,
    StatDensity(DensityArgs),
    LacunaryDensity {
        #[command(flatten)]
        density: DensityArgs,
        /// Explicit breakpoints `k_1,k_2,...`.
        #[arg(long, conflicts_with = "geometric")]
        breakpoints: Option<String>,
        /// Geometric breakpoints `RATIO:COUNT`, i.e. `k_r = RATIO^r`.
        #[arg(long)]
        geometric: Option<String>,
        #[arg(long)]
        r: usize,
    },
    /// G-sequential continuity of a map on Z_n given by its table.
    Continuity {
        /// Images of `0,1,...,n-1`.
        #[arg(long)]
        function: Option<String>,
        /// Only sequences converging to this point.
        #[arg(long)]
        point: Option<String>,
        /// Only sequences with terms in this set.
        #[arg(long)]
        domain: Option<String>,
        /// Enumerate periodic sequences up to this period instead of the exact decision.
        #[arg(long)]
        period_bound: Option<usize>,
    },
    /// Run the theorem checks; NDJSON records with `--output json`.
    Verify {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        /// Disable the data-parallel scheduler.
        #[arg(long)]
        sequential: bool,
    },
    /// Replay the rational-line counterexample next to its pinned values.
    Demo,
}

/// What `run` hands back for printing.
enum Rendered {
    Document { json: Value, human: String },
    Suite { lines: String, passed: bool },
}

struct Inputs {
    file: Value,
    universe: Option<String>,
    method: Option<String>,
}

impl Inputs {
    fn load(cli: &Cli) -> Result<Self> {
        let file = match &cli.input {
            Some(path) => {
                let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
                serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?
            }
            None => Value::Null,
        };
        Ok(Inputs { file, universe: cli.universe.clone(), method: cli.method.clone() })
    }

    /// A flag value, falling back to the `--input` document. Arrays in the
    /// document are joined with commas, objects are passed through as JSON.
    fn text(&self, flag: Option<&String>, key: &str) -> Option<String> {
        if let Some(v) = flag {
            return Some(v.clone());
        }
        match self.file.get(key)? {
            Value::String(s) => Some(s.clone()),
            Value::Array(items) => Some(
                items
                    .iter()
                    .map(|v| v.as_str().map(String::from).unwrap_or_else(|| v.to_string()))
                    .collect::<Vec<_>>()
                    .join(","),
            ),
            other => Some(other.to_string()),
        }
    }

    fn universe(&self) -> Result<GroupModel> {
        match self.text(self.universe.as_ref(), "universe") {
            Some(u) => Ok(u.parse()?),
            None => Ok(GroupModel::RationalLine),
        }
    }

    fn method(&self, model: GroupModel) -> Result<MethodDescriptor> {
        let text = self.text(self.method.as_ref(), "method").ok_or_else(|| anyhow!("--method is required"))?;
        let method: MethodDescriptor = text.parse()?;
        method.check_model(model)?;
        Ok(method)
    }

    fn set(&self, arg: &SetArg, model: GroupModel) -> Result<PointSet> {
        let text = self.text(arg.set.as_ref(), "set").ok_or_else(|| anyhow!("--set is required"))?;
        Ok(PointSet::parse(model, &text)?)
    }
}

fn set_json(set: &PointSet) -> Value {
    serde_json::to_value(set).expect("sets serialize")
}

fn bool_doc(key: &str, value: bool) -> Rendered {
    Rendered::Document { json: json!({ key: value }), human: format!("{key}: {value}") }
}

fn set_doc(key: &str, set: &PointSet) -> Rendered {
    Rendered::Document { json: json!({ key: set_json(set) }), human: format!("{key}: {set}") }
}

fn radius(text: Option<&String>, model: GroupModel) -> Result<Radius> {
    match (text.map(String::as_str), model) {
        (None | Some("discrete"), GroupModel::Cyclic { .. }) => Ok(Radius::Discrete),
        (Some(r), GroupModel::RationalLine) => Ok(Radius::Ball(r.parse()?)),
        (None, GroupModel::RationalLine) => bail!("--radius is required on the rational line"),
        (Some(r), _) => bail!("Z_n only supports --radius discrete, got {r}"),
    }
}

fn prefix(inputs: &Inputs, args: &DensityArgs, model: GroupModel) -> Result<Vec<GroupElement>> {
    if let Some(seq) = inputs.text(args.seq.as_ref(), "seq") {
        let n = args.n.ok_or_else(|| anyhow!("--seq needs --n"))?;
        return Ok(EvPerSeq::parse(model, &seq)?.prefix(n));
    }
    let text = inputs.text(args.prefix.as_ref(), "prefix").ok_or_else(|| anyhow!("--prefix or --seq is required"))?;
    Ok(model.parse_list(&text)?)
}

fn scheme(breakpoints: Option<&String>, geometric: Option<&String>) -> Result<LacunaryScheme> {
    match (breakpoints, geometric) {
        (Some(b), None) => {
            let points = b.split(',').map(|k| k.trim().parse::<u64>()).collect::<Result<Vec<_>, _>>()?;
            Ok(LacunaryScheme::new(points)?)
        }
        (None, Some(g)) => {
            let (ratio, count) = g.split_once(':').ok_or_else(|| anyhow!("--geometric expects RATIO:COUNT"))?;
            Ok(LacunaryScheme::geometric(ratio.trim().parse()?, count.trim().parse()?)?)
        }
        _ => bail!("give exactly one of --breakpoints and --geometric"),
    }
}

fn demo() -> Result<Rendered> {
    let q = GroupModel::RationalLine;
    let avg = MethodDescriptor::averaging();
    let a = PointSet::parse(q, "0,1")?;
    let iterates = topology::closure_iterate(&avg, &a, 2)?;
    let pinned_first = PointSet::parse(q, "0,1/2,1")?;
    let pinned_second = PointSet::parse(q, "0,1/4,1/2,3/4,1")?;
    let closed = |s: &str| -> Result<bool> { Ok(topology::is_closed(&avg, &PointSet::parse(q, s)?)?) };
    let verdicts = [("{0}", closed("0")?, true), ("{1}", closed("1")?, true), ("{0, 1}", closed("0,1")?, false)];

    let mut human = vec![format!("method {avg} on the rational line")];
    let row = |label: &str, expected: &dyn std::fmt::Display, computed: &dyn std::fmt::Display, ok: bool| {
        format!("{label:<22} expected {expected:<24} computed {computed:<24} {}", if ok { "ok" } else { "MISMATCH" })
    };
    human.push(row("closure of {0, 1}", &pinned_first, &iterates[0], iterates[0] == pinned_first));
    human.push(row("second iterate", &pinned_second, &iterates[1], iterates[1] == pinned_second));
    let mut closed_json = serde_json::Map::new();
    for (label, got, want) in verdicts {
        human.push(row(&format!("{label} closed"), &want, &got, got == want));
        closed_json.insert(label.to_string(), json!({ "expected": want, "computed": got }));
    }
    let all_match = iterates[0] == pinned_first
        && iterates[1] == pinned_second
        && verdicts.iter().all(|(_, got, want)| got == want);
    human.push(format!("union of closed sets {{0}} and {{1}} is closed: {}", verdicts[2].1));
    let json = json!({
        "method": avg.to_string(),
        "closure": { "expected": set_json(&pinned_first), "computed": set_json(&iterates[0]) },
        "second_iterate": { "expected": set_json(&pinned_second), "computed": set_json(&iterates[1]) },
        "closed": closed_json,
        "match": all_match,
    });
    if !all_match {
        bail!("demo values do not match the pinned ones:\n{}", human.join("\n"));
    }
    Ok(Rendered::Document { json, human: human.join("\n") })
}

fn run(cli: &Cli) -> Result<Rendered> {
    let inputs = Inputs::load(cli)?;
    match &cli.command {
        Command::Demo => demo(),
        Command::Verify { seed, trials, sequential } => {
            let universes = match inputs.text(inputs.universe.as_ref(), "universe") {
                Some(list) => list.split(',').map(|u| u.trim().parse()).collect::<Result<Vec<GroupModel>, _>>()?,
                None => verifier::default_universes(),
            };
            let methods = match inputs.text(inputs.method.as_ref(), "method") {
                Some(list) => {
                    list.split(';').map(|m| m.trim().parse()).collect::<Result<Vec<MethodDescriptor>, _>>()?
                }
                None => verifier::default_methods(),
            };
            let execution = if *sequential { Execution::Sequential } else { Execution::Parallel };
            // Mixed lists may skip some pairs, but a method no universe accepts is a usage error.
            for m in &methods {
                if let Some(err) = universes.iter().map(|&u| m.check_model(u)).find_map(Result::err) {
                    if universes.iter().all(|&u| m.check_model(u).is_err()) {
                        return Err(err.into());
                    }
                }
            }
            let config = SuiteConfig { universes, methods, trials: *trials, seed: *seed, execution };
            let reports = verifier::run_suite(&config)?;
            let summary = verifier::summarize(&reports);
            let lines = match cli.output {
                Output::Json => verifier::to_ndjson(&reports),
                Output::Human => {
                    let mut out: String = reports
                        .iter()
                        .filter(|r| r.status != Status::Verified)
                        .map(|r| {
                            let detail = r
                                .witness
                                .as_ref()
                                .map(|w| serde_json::to_string(w).expect("witness serializes"))
                                .or_else(|| r.reason.clone())
                                .unwrap_or_default();
                            format!(
                                "{:?} {:?} {} {} {}: {detail}\n",
                                r.status, r.expectation, r.check, r.universe, r.method
                            )
                        })
                        .collect();
                    out.push_str(&summary.to_string());
                    out.push('\n');
                    out
                }
            };
            if cli.output == Output::Json {
                eprintln!("{summary}");
            }
            Ok(Rendered::Suite { lines, passed: summary.passed() })
        }
        command => {
            let model = inputs.universe()?;
            run_single(command, &inputs, model)
        }
    }
}

fn run_single(command: &Command, inputs: &Inputs, model: GroupModel) -> Result<Rendered> {
    Ok(match command {
        Command::Eval { seq } => {
            let method = inputs.method(model)?;
            let text = inputs.text(seq.as_ref(), "seq").ok_or_else(|| anyhow!("--seq is required"))?;
            let x = EvPerSeq::parse(model, &text)?;
            let value = evaluate(&method, &x)?;
            let human = match &value {
                Some(v) => format!("value: {v}"),
                None => "value: undefined (outside the domain)".into(),
            };
            Rendered::Document { json: json!({ "value": value.map(|v| v.to_string()) }), human }
        }
        Command::Closure(arg) => {
            let method = inputs.method(model)?;
            let closure = topology::closure(&method, &inputs.set(arg, model)?)?;
            let human =
                format!("closure: {}{}", closure.set, if closure.complete { "" } else { " (lower approximation)" });
            Rendered::Document { json: serde_json::to_value(&closure)?, human }
        }
        Command::Iterate { set, k } => {
            let method = inputs.method(model)?;
            let iterates = topology::closure_iterate(&method, &inputs.set(set, model)?, *k)?;
            let human =
                iterates.iter().enumerate().map(|(i, s)| format!("{}: {s}", i + 1)).collect::<Vec<_>>().join("\n");
            Rendered::Document { json: Value::Array(iterates.iter().map(set_json).collect()), human }
        }
        Command::CheckClosed(arg) => {
            let method = inputs.method(model)?;
            bool_doc("closed", topology::is_closed(&method, &inputs.set(arg, model)?)?)
        }
        Command::CheckOpen(arg) => {
            let method = inputs.method(model)?;
            bool_doc("open", topology::is_open(&method, &inputs.set(arg, model)?)?)
        }
        Command::Interior(arg) => {
            let method = inputs.method(model)?;
            set_doc("interior", &topology::interior(&method, &inputs.set(arg, model)?)?)
        }
        Command::Boundary(arg) => {
            let method = inputs.method(model)?;
            set_doc("boundary", &topology::boundary(&method, &inputs.set(arg, model)?)?)
        }
        Command::Dense(arg) => {
            let method = inputs.method(model)?;
            bool_doc("dense", topology::is_dense(&method, &inputs.set(arg, model)?)?)
        }
        Command::Regular => {
            let method = inputs.method(model)?;
            bool_doc("regular", is_regular_on(&method, model)?)
        }
        Command::StatDensity(args) => {
            let terms = prefix(inputs, args, model)?;
            let ell = model.parse_element(&args.ell)?;
            let d = statistical_density(model, &terms, &ell, &radius(args.radius.as_ref(), model)?)?;
            Rendered::Document {
                json: json!({ "density": d.to_string(), "n": terms.len() }),
                human: format!("density: {d}"),
            }
        }
        Command::LacunaryDensity { density, breakpoints, geometric, r } => {
            let terms = prefix(inputs, density, model)?;
            let ell = model.parse_element(&density.ell)?;
            let scheme = scheme(breakpoints.as_ref(), geometric.as_ref())?;
            let (start, end) = scheme.block(*r)?;
            let d = lacunary_density(model, &terms, &scheme, *r, &ell, &radius(density.radius.as_ref(), model)?)?;
            Rendered::Document {
                json: json!({ "density": d.to_string(), "block": [start, end] }),
                human: format!("density on ({start}, {end}]: {d}"),
            }
        }
        Command::Continuity { function, point, domain, period_bound } => {
            let method = inputs.method(model)?;
            let table = inputs.text(function.as_ref(), "function").ok_or_else(|| anyhow!("--function is required"))?;
            let f = TabulatedFunction::parse(model, &table)?;
            let verdict = match period_bound {
                Some(bound) => {
                    if point.is_some() || domain.is_some() {
                        bail!("--period-bound checks every point on the whole universe");
                    }
                    is_continuous_bounded(&method, &f, *bound, DEFAULT_SEQUENCE_BUDGET)?
                }
                None => {
                    let point = point.as_deref().map(|p| model.parse_element(p)).transpose()?;
                    let domain = domain.as_deref().map(|d| PointSet::parse(model, d)).transpose()?;
                    if domain.as_ref().is_some_and(PointSet::is_empty) {
                        bail!("--domain must not be empty");
                    }
                    decide_continuity(&method, &f, &ContinuityScope { domain: domain.as_ref(), at: point.as_ref() })?
                }
            };
            let mut human = format!(
                "continuous: {} (periods up to {} covered{})",
                verdict.continuous,
                verdict.verified_up_to_period,
                if verdict.complete { ", complete" } else { "" }
            );
            if let Some(w) = &verdict.witness {
                let image = w.image_value.as_ref().map_or("undefined".to_string(), ToString::to_string);
                human.push_str(&format!(
                    "\nwitness: {} -> {}, but f(x) -> {image}, f({}) = {}",
                    w.sequence,
                    w.point,
                    w.point,
                    f.apply(&w.point)
                ));
            }
            Rendered::Document { json: serde_json::to_value(&verdict)?, human }
        }
        Command::Demo | Command::Verify { .. } => unreachable!("handled in run"),
    })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(Rendered::Document { json, human }) => {
            match cli.output {
                Output::Json => println!("{json}"),
                Output::Human => println!("{human}"),
            }
            ExitCode::SUCCESS
        }
        Ok(Rendered::Suite { lines, passed }) => {
            print!("{lines}");
            if passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
