//! `convord`: build, list, compare and verify convex orders on affine root systems.

use std::fs;
use std::io::{self, Read};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use convord_core::chains::enumerate_chains;
use convord_core::json::{element_to_ids, ChainJson, OrderSpecJson, ParamJson, RootJson};
use convord_core::notation::{format_root, parse_root};
use convord_core::orders::{sample_order_spec, verify_spec};
use convord_core::{fixtures, AffineSystem, BiconvexParam, CartanType, NodeSet, OrderSpec, Root, Window};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

const MAX_BOUND: usize = 10;

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("bound exceeded: {0}")]
    Bound(String),
    #[error("order is not convex")]
    Violation,
}

impl From<convord_core::Error> for CliError {
    fn from(e: convord_core::Error) -> Self {
        match e {
            convord_core::Error::BoundExceeded(m) => CliError::Bound(m),
            other => CliError::Usage(other.to_string()),
        }
    }
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Violation => 1,
            CliError::Usage(_) => 2,
            CliError::Bound(_) => 3,
        }
    }
}

type CliResult<T> = Result<T, CliError>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Parser)]
#[command(name = "convord", version, about = "Convex orders on affine root systems")]
struct Cli {
    /// Finite type letter: A..G.
    #[arg(long = "type", default_value = "A", global = true)]
    type_label: String,
    #[arg(long, default_value_t = 2, global = true)]
    rank: usize,
    /// Window depth: roots up to this level are listed or checked.
    #[arg(long, default_value_t = 6, global = true)]
    depth: i64,
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    /// Seed for random sampling.
    #[arg(long, default_value_t = 42, global = true)]
    seed: u64,
    /// Largest number of items any command may produce.
    #[arg(long, default_value_t = 100_000, global = true)]
    cap: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List the positive roots up to the window depth.
    Roots,
    #[command(subcommand)]
    Order(OrderCmd),
    #[command(subcommand)]
    Enumerate(EnumCmd),
}

#[derive(Args)]
struct Source {
    /// Built-in A2 order: a2-one-row, a2-two-row or a2-two-row-s2s1.
    #[arg(long, conflicts_with = "input")]
    fixture: Option<String>,
    /// OrderSpec JSON file; `-` reads stdin.
    #[arg(long)]
    input: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ZoneArg {
    Negative,
    Positive,
}

#[derive(Subcommand)]
enum OrderCmd {
    /// Write an order as canonical JSON.
    Build {
        #[command(flatten)]
        source: Source,
        /// Sample an order at random (uses --seed) instead of reading one.
        #[arg(long, conflicts_with_all = ["fixture", "input"])]
        random: bool,
        /// Length bound on the chain elements when sampling.
        #[arg(long, default_value_t = 2)]
        bound: usize,
    },
    /// Check convexity on the window; exit 1 on a violation.
    Verify {
        #[command(flatten)]
        source: Source,
    },
    /// Print the first roots of one row.
    Prefix {
        #[command(flatten)]
        source: Source,
        #[arg(long, default_value_t = 1)]
        row: usize,
        #[arg(long, default_value_t = 12)]
        count: usize,
        #[arg(long, value_enum, default_value_t = ZoneArg::Negative)]
        zone: ZoneArg,
    },
    /// Compare two positive roots, e.g. "2 d + a2" "1 d - a1".
    Compare {
        #[command(flatten)]
        source: Source,
        #[arg(allow_hyphen_values = true)]
        a: String,
        #[arg(allow_hyphen_values = true)]
        b: String,
    },
}

#[derive(Subcommand)]
enum EnumCmd {
    /// Minimal coset representatives of W̊_J / W̊_K.
    CosetReps {
        /// Nodes such as "1,2"; all nodes by default.
        #[arg(long)]
        j: Option<String>,
        #[arg(long)]
        k: String,
    },
    /// Parameters (K, u, y) of ∇ sets with ℓ_K(y) ≤ bound.
    Biconvex {
        #[arg(long)]
        j: Option<String>,
        /// A single K; every K ⊆ J when omitted.
        #[arg(long)]
        k: Option<String>,
        #[arg(long, default_value_t = 2)]
        bound: usize,
    },
    /// Chains (K_•, y_•) for w with every ℓ(y_i) ≤ bound.
    Chains {
        #[arg(long)]
        j: Option<String>,
        /// Reduced word of w, e.g. "2,1"; identity by default.
        #[arg(long, value_delimiter = ',')]
        w: Vec<usize>,
        #[arg(long, default_value_t = 2)]
        bound: usize,
        /// Keep only chains with this many rows.
        #[arg(long)]
        rows: Option<usize>,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(&cli) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err((out, e)) => {
            print!("{out}");
            eprintln!("convord: {e}");
            ExitCode::from(e.code())
        }
    }
}

fn run(cli: &Cli) -> Result<String, (String, CliError)> {
    let window = Window::new(cli.depth).map_err(|e| (String::new(), e.into()))?;
    let result = match &cli.command {
        Command::Roots => system(cli).and_then(|s| cmd_roots(cli, &s, window)),
        Command::Order(cmd) => cmd_order(cli, cmd, window),
        Command::Enumerate(what) => system(cli).and_then(|s| cmd_enumerate(cli, &s, what)),
    };
    result.map_err(|e| (String::new(), e)).and_then(|(out, verdict)| match verdict {
        Some(e) => Err((out, e)),
        None => Ok(out),
    })
}

type Output = (String, Option<CliError>);

fn system(cli: &Cli) -> CliResult<AffineSystem> {
    let t: CartanType = cli.type_label.parse()?;
    Ok(AffineSystem::build(t, cli.rank)?)
}

fn check_cap(cli: &Cli, n: usize, what: &str) -> CliResult<()> {
    if n > cli.cap {
        return Err(CliError::Bound(format!("{n} {what} exceed the cap of {}", cli.cap)));
    }
    Ok(())
}

fn check_window(cli: &Cli, sys: &AffineSystem) -> CliResult<()> {
    let per_level = sys.fin.roots().len() as i64 + 1;
    let n = per_level.saturating_mul(cli.depth).saturating_add(per_level) as usize;
    check_cap(cli, n, "roots in the window")
}

fn render(cli: &Cli, text: String, value: Value) -> String {
    match cli.format {
        Format::Text => text,
        Format::Json => format!("{}\n", serde_json::to_string_pretty(&value).expect("plain JSON")),
    }
}

fn root_lines(roots: &[Root]) -> String {
    roots.iter().map(|b| format!("{}\n", format_root(b))).collect()
}

fn roots_json(sys: &AffineSystem, roots: &[Root]) -> Value {
    json!(roots.iter().map(|b| RootJson::from_root(b, sys.rank())).collect::<Vec<_>>())
}

fn cmd_roots(cli: &Cli, sys: &AffineSystem, window: Window) -> CliResult<Output> {
    check_window(cli, sys)?;
    let roots = sys.positive_roots_window(window.max_level);
    let mut text = root_lines(&roots);
    let mut levels = Vec::new();
    for m in 0..=window.max_level {
        let real = roots.iter().filter(|b| b.level == m && !b.is_imaginary()).count();
        let imaginary = roots.iter().filter(|b| b.level == m && b.is_imaginary()).count();
        text.push_str(&format!("level {m}: {real} real, {imaginary} imaginary\n"));
        levels.push(json!({"level": m, "real": real, "imaginary": imaginary}));
    }
    text.push_str(&format!("total: {}\n", roots.len()));
    let value = json!({"roots": roots_json(sys, &roots), "levels": levels, "total": roots.len()});
    Ok((render(cli, text, value), None))
}

fn load_spec(cli: &Cli, source: &Source) -> CliResult<(AffineSystem, OrderSpec)> {
    match (&source.fixture, &source.input) {
        (Some(name), _) => {
            if cli.type_label != "A" || cli.rank != 2 {
                return Err(CliError::Usage("fixtures live in type A rank 2".into()));
            }
            let sys = fixtures::a2();
            let spec = fixtures::spec(&sys, name)?;
            Ok((sys, spec))
        }
        (None, Some(path)) => {
            let text = if path == "-" {
                let mut buf = String::new();
                io::stdin().read_to_string(&mut buf).map_err(|e| CliError::Usage(format!("stdin: {e}")))?;
                buf
            } else {
                fs::read_to_string(path).map_err(|e| CliError::Usage(format!("{path}: {e}")))?
            };
            let doc: OrderSpecJson =
                serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("malformed order JSON: {e}")))?;
            Ok(doc.to_spec()?)
        }
        (None, None) => Err(CliError::Usage("give --fixture NAME or --input FILE".into())),
    }
}

fn cmd_order(cli: &Cli, cmd: &OrderCmd, window: Window) -> CliResult<Output> {
    match cmd {
        OrderCmd::Build { source, random, bound } => {
            let (sys, spec) = if *random {
                if *bound > MAX_BOUND {
                    return Err(CliError::Bound(format!("bound {bound} is above {MAX_BOUND}")));
                }
                let sys = system(cli)?;
                let mut rng = ChaCha8Rng::seed_from_u64(cli.seed);
                let spec = sample_order_spec(&sys, *bound, 3, &mut rng)?;
                (sys, spec)
            } else {
                load_spec(cli, source)?
            };
            let doc = OrderSpecJson::from_spec(&sys, &spec)?;
            let text = serde_json::to_string_pretty(&doc).expect("plain JSON");
            Ok((format!("{text}\n"), None))
        }
        OrderCmd::Verify { source } => {
            let (sys, spec) = load_spec(cli, source)?;
            check_window(cli, &sys)?;
            let rep = verify_spec(&sys, &spec, window);
            let verdict = match &rep.violation {
                None => format!(
                    "pass: window {}, {} comparisons checked, {} pairs beyond the window\n",
                    rep.window, rep.checked, rep.unchecked_pairs
                ),
                Some(v) => format!("violation: {v}\n"),
            };
            let value = serde_json::to_value(&rep).expect("plain JSON");
            let out = render(cli, verdict, json!({"pass": rep.pass(), "report": value}));
            Ok((out, (!rep.pass()).then_some(CliError::Violation)))
        }
        OrderCmd::Prefix { source, row, count, zone } => {
            let (sys, spec) = load_spec(cli, source)?;
            check_cap(cli, *count, "roots")?;
            let rows = match zone {
                ZoneArg::Negative => &spec.negative,
                ZoneArg::Positive => &spec.positive,
            };
            let roots = convord_core::orders::enumerate_prefix(&sys, rows, *row, *count)?;
            Ok((render(cli, root_lines(&roots), roots_json(&sys, &roots)), None))
        }
        OrderCmd::Compare { source, a, b } => {
            let (sys, spec) = load_spec(cli, source)?;
            let ra = parse_root(a, sys.rank())?;
            let rb = parse_root(b, sys.rank())?;
            let sign = match spec.compare(&sys, &ra, &rb)? {
                std::cmp::Ordering::Less => "<",
                std::cmp::Ordering::Equal => "=",
                std::cmp::Ordering::Greater => ">",
            };
            let value = json!({"a": format_root(&ra), "b": format_root(&rb), "order": sign});
            Ok((render(cli, format!("{sign}\n"), value), None))
        }
    }
}

fn parse_nodes(sys: &AffineSystem, text: &str) -> CliResult<NodeSet> {
    let mut set = NodeSet::EMPTY;
    for part in text.split(',').map(str::trim).filter(|p| !p.is_empty() && *p != "none") {
        let i: usize = part.parse().map_err(|_| CliError::Usage(format!("bad node '{part}'")))?;
        if i == 0 || i > sys.rank() {
            return Err(CliError::Usage(format!("node {i} out of range 1..={}", sys.rank())));
        }
        set.insert(i);
    }
    Ok(set)
}

fn parse_j(sys: &AffineSystem, j: &Option<String>) -> CliResult<NodeSet> {
    let j = match j {
        Some(t) => parse_nodes(sys, t)?,
        None => sys.nodes(),
    };
    if j.is_empty() {
        return Err(CliError::Usage("J must be non-empty".into()));
    }
    Ok(j)
}

fn word_text(word: &[usize]) -> String {
    if word.is_empty() {
        "1".into()
    } else {
        word.iter().map(|i| format!("s{i}")).collect::<Vec<_>>().join(" ")
    }
}

fn ids_text(ids: &[String]) -> String {
    if ids.is_empty() {
        "1".into()
    } else {
        ids.join(" ")
    }
}

fn check_bound(bound: usize) -> CliResult<()> {
    if bound > MAX_BOUND {
        return Err(CliError::Bound(format!("bound {bound} is above {MAX_BOUND}")));
    }
    Ok(())
}

fn listing(cli: &Cli, lines: Vec<String>, items: Vec<Value>) -> String {
    let n = items.len();
    let mut text: String = lines.into_iter().map(|l| l + "\n").collect();
    text.push_str(&format!("count: {n}\n"));
    render(cli, text, json!({"items": items, "count": n}))
}

fn cmd_enumerate(cli: &Cli, sys: &AffineSystem, what: &EnumCmd) -> CliResult<Output> {
    match what {
        EnumCmd::CosetReps { j, k } => {
            let j = parse_j(sys, j)?;
            let k = parse_nodes(sys, k)?;
            let reps = sys.fin.minimal_coset_reps(j, k)?;
            check_cap(cli, reps.len(), "representatives")?;
            let words: Vec<Vec<usize>> = reps.iter().map(|u| sys.fin.reduced_word(u)).collect();
            let lines = words.iter().map(|w| word_text(w)).collect();
            Ok((listing(cli, lines, words.into_iter().map(|w| json!(w)).collect()), None))
        }
        EnumCmd::Biconvex { j, k, bound } => {
            check_bound(*bound)?;
            let j = parse_j(sys, j)?;
            let ks = match k {
                Some(t) => vec![parse_nodes(sys, t)?],
                None => j.subsets(),
            };
            let mut lines = Vec::new();
            let mut items = Vec::new();
            for k in ks {
                let ys = if k.is_empty() {
                    vec![sys.identity()]
                } else {
                    sys.subsystem(k)?.ball(sys, *bound).into_iter().map(|(y, _)| y).collect()
                };
                let us = sys.fin.minimal_coset_reps(j, k)?;
                check_cap(cli, items.len() + us.len() * ys.len(), "parameters")?;
                for u in &us {
                    for y in &ys {
                        let p = BiconvexParam::new(sys, j, k, *u, *y)?;
                        let doc = ParamJson::from_param(sys, &p)?;
                        lines.push(format!("K={} u={} y={}", k, word_text(&doc.u), ids_text(&doc.y)));
                        items.push(serde_json::to_value(&doc).expect("plain JSON"));
                    }
                }
            }
            Ok((listing(cli, lines, items), None))
        }
        EnumCmd::Chains { j, w, bound, rows } => {
            check_bound(*bound)?;
            let j = parse_j(sys, j)?;
            if let Some(&bad) = w.iter().find(|&&i| i == 0 || i > sys.rank()) {
                return Err(CliError::Usage(format!("letter {bad} out of range 1..={}", sys.rank())));
            }
            let w = sys.fin.from_word(w);
            let chains = enumerate_chains(sys, j, &w, *bound)?;
            check_cap(cli, chains.len(), "chains")?;
            let mut lines = Vec::new();
            let mut items = Vec::new();
            for c in chains.iter().filter(|c| rows.is_none_or(|n| c.len() == n)) {
                let ks: Vec<String> = c.ks.iter().map(|k| k.to_string()).collect();
                let ys =
                    c.ks.iter()
                        .zip(&c.ys)
                        .map(|(k, y)| element_to_ids(sys, *k, y).map(|ids| ids_text(&ids)))
                        .collect::<Result<Vec<_>, _>>()?;
                lines.push(format!("K: {}  y: {}", ks.join(" > "), ys.join(" | ")));
                items.push(serde_json::to_value(ChainJson::from_chain(sys, c)?).expect("plain JSON"));
            }
            Ok((listing(cli, lines, items), None))
        }
    }
}
