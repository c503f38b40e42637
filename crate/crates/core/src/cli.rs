//! Command-line surface. [`run`] parses arguments, performs one command and
//! returns the process exit code: 0 on success, 1 when a solver or
//! validation step fails, 2 on usage or input errors.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::decomposition::{
    branchdec_from_order, heuristic_order, hypergraph_of, induced_width, primal_graph, pseudo_tree_from_order,
    treedec_from_order, width_of, OrderHeuristic, PseudoTree,
};
use crate::dpll::{complete_static_order, OrderPolicy, OrderVariant};
use crate::engine::{count_formula, solution_line, solve_instance, Algorithm, EngineError, Outcome};
use crate::formula::{Formula, Var};
use crate::generators::{gen_blocks, gen_pearls, gen_random};
use crate::io::{
    emit_stats, parse_decomp, parse_dimacs, parse_factor_file, serialize_decomp, serialize_dimacs, DecompDoc, IoError,
    RunReport,
};
use crate::semiring::Semiring;

#[derive(Parser, Debug)]
#[command(
    name = "dpllcache",
    version,
    about = "Exact model counting and sum-of-products solving"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Count the models of a DIMACS CNF (weighted when `c w` lines are present).
    Count(CountArgs),
    /// Build a decomposition of a CNF's hypergraph with a greedy heuristic.
    Decompose(DecomposeArgs),
    /// Validate a decomposition against a CNF and print its width.
    Width(WidthArgs),
    /// Write a benchmark formula.
    Generate(GenerateArgs),
    /// Solve a factor-file instance over a chosen semiring.
    Sumprod(SumprodArgs),
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum CountAlgo {
    Dpll,
    SimpleCache,
    CompCache,
    CompSpace,
    Ve,
    RcSpace,
    RcCache,
    AoSpace,
    AoCache,
    Brute,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum SumprodAlgo {
    Ve,
    RcSpace,
    RcCache,
    AoSpace,
    AoCache,
    DpllCache,
    Brute,
}

fn algorithm(name: &str) -> Algorithm {
    name.parse().expect("command-line names match the engine")
}

#[derive(Args, Debug)]
struct CountArgs {
    cnf: PathBuf,
    #[arg(long, value_enum, default_value = "comp-cache")]
    algo: CountAlgo,
    /// `dynamic`, `random:<seed>` or `static-file:<path>`.
    #[arg(long, default_value = "dynamic")]
    order: String,
    /// Structure for the solver: order (ve), branch (rc-*), pseudotree
    /// (ao-*), or an order or branch decomposition giving a static order.
    #[arg(long)]
    decomp: Option<PathBuf>,
    /// Disable unit propagation in the search counters.
    #[arg(long)]
    no_up: bool,
    /// Write a JSON run report here.
    #[arg(long)]
    stats: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Method {
    MinFill,
    MinDegree,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Emit {
    Order,
    Treedec,
    Branchdec,
    Pseudotree,
}

#[derive(Args, Debug)]
struct DecomposeArgs {
    cnf: PathBuf,
    #[arg(long, value_enum)]
    method: Method,
    /// Break heuristic ties with a seeded random choice.
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, value_enum)]
    emit: Emit,
    /// Output path; standard output when absent.
    #[arg(short = 'o', long = "output")]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum WidthKind {
    Branch,
    Tree,
    Order,
}

#[derive(Args, Debug)]
struct WidthArgs {
    #[arg(long, value_enum)]
    kind: WidthKind,
    #[arg(long)]
    decomp: PathBuf,
    #[arg(long)]
    cnf: PathBuf,
}

#[derive(Args, Debug)]
struct GenerateArgs {
    #[command(subcommand)]
    family: Family,
}

#[derive(Args, Debug)]
struct Output {
    /// Output path; standard output when absent.
    #[arg(short = 'o', long = "output")]
    output: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Family {
    /// String-of-pearls formula with `n` holes and `m` pearls.
    Pearls {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        m: u32,
        #[command(flatten)]
        out: Output,
    },
    /// `k` disjoint 3-clauses.
    Blocks {
        #[arg(long)]
        k: u32,
        #[command(flatten)]
        out: Output,
    },
    /// Seeded random k-CNF.
    Random {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        m: u32,
        #[arg(long)]
        k: u32,
        #[arg(long)]
        seed: u64,
        #[command(flatten)]
        out: Output,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum SemiringArg {
    Count,
    Bool,
    MaxProduct,
    MaxSum,
}

impl From<SemiringArg> for Semiring {
    fn from(s: SemiringArg) -> Self {
        match s {
            SemiringArg::Count => Semiring::SumProduct,
            SemiringArg::Bool => Semiring::Boolean,
            SemiringArg::MaxProduct => Semiring::MaxProduct,
            SemiringArg::MaxSum => Semiring::MaxSum,
        }
    }
}

#[derive(Args, Debug)]
struct SumprodArgs {
    factors: PathBuf,
    #[arg(long, value_enum)]
    semiring: SemiringArg,
    #[arg(long, value_enum, default_value = "ve")]
    algo: SumprodAlgo,
    /// Structure for the solver: order (ve), branch (rc-*), pseudotree (ao-*).
    #[arg(long)]
    decomp: Option<PathBuf>,
    /// Branching policy for dpll-cache: `dynamic` or `random:<seed>`.
    #[arg(long, default_value = "dynamic")]
    order: String,
    #[arg(long)]
    stats: Option<PathBuf>,
}

/// A failure with the exit code it maps to.
struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure {
            code: 2,
            message: message.into(),
        }
    }

    fn solver(message: impl Into<String>) -> Self {
        Failure {
            code: 1,
            message: message.into(),
        }
    }
}

impl From<IoError> for Failure {
    fn from(e: IoError) -> Self {
        Failure::usage(e.to_string())
    }
}

impl From<EngineError> for Failure {
    fn from(e: EngineError) -> Self {
        match e {
            EngineError::Io(io) => io.into(),
            other => Failure::solver(other.to_string()),
        }
    }
}

type CmdResult = Result<(), Failure>;

/// Runs one command. `args` includes the program name.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 {
                out.write_all(text.as_bytes())
            } else {
                err.write_all(text.as_bytes())
            };
            return code;
        }
    };
    let result = match cli.command {
        Command::Count(a) => count(a, out),
        Command::Decompose(a) => decompose(a, out),
        Command::Width(a) => width(a, out),
        Command::Generate(a) => generate(a, out),
        Command::Sumprod(a) => sumprod(a, out),
    };
    match result {
        Ok(()) => 0,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::usage(format!("cannot read {}: {e}", path.display())))
}

fn write_output(path: Option<&Path>, text: &str, out: &mut dyn Write) -> CmdResult {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| Failure::solver(format!("cannot write {}: {e}", p.display()))),
        None => out
            .write_all(text.as_bytes())
            .map_err(|e| Failure::solver(e.to_string())),
    }
}

fn say(out: &mut dyn Write, line: &str) -> CmdResult {
    writeln!(out, "{line}").map_err(|e| Failure::solver(e.to_string()))
}

fn parse_policy(spec: &str, num_vars: u32, allow_static: bool) -> Result<OrderVariant, Failure> {
    if spec == "dynamic" {
        return Ok(OrderVariant::DynamicMaxOccurrence);
    }
    if let Some(seed) = spec.strip_prefix("random:") {
        let seed = seed
            .parse()
            .map_err(|_| Failure::usage(format!("bad seed in `{spec}`")))?;
        return Ok(OrderVariant::Random(seed));
    }
    if let Some(path) = spec.strip_prefix("static-file:").filter(|_| allow_static) {
        let text = read(Path::new(path))?;
        let list: Vec<Var> = if text.trim_start().starts_with('{') {
            parse_decomp(&text)?.into_order()?.into_vec()
        } else {
            text.split_whitespace()
                .map(|t| {
                    t.parse()
                        .map_err(|_| Failure::usage(format!("bad variable `{t}` in {path}")))
                })
                .collect::<Result<_, _>>()?
        };
        if let Some(v) = list.iter().find(|&&v| v == 0 || v > num_vars) {
            return Err(Failure::usage(format!(
                "variable {v} in {path} is outside 1..={num_vars}"
            )));
        }
        return Ok(OrderVariant::StaticList(complete_static_order(&list, num_vars)));
    }
    Err(Failure::usage(format!("unknown order `{spec}`")))
}

fn load_cnf(path: &Path) -> Result<Formula, Failure> {
    Ok(parse_dimacs(&read(path)?)?)
}

fn load_decomp(path: Option<&PathBuf>) -> Result<Option<DecompDoc>, Failure> {
    path.map(|p| Ok(parse_decomp(&read(p)?)?)).transpose()
}

fn report(
    out: &mut dyn Write,
    path: Option<&Path>,
    instance: &Path,
    algo: Algorithm,
    o: &Outcome,
    ms: u64,
) -> CmdResult {
    let line = solution_line(&o.value);
    say(out, &line)?;
    say(out, &format!("c algo {algo} policy {}", o.policy))?;
    let s = &o.stats;
    say(
        out,
        &format!(
            "c decisions {} cache_hits {} cache_stores {} cache_peak {} components {} conflicts {}",
            s.decisions, s.cache_hits, s.cache_stores, s.cache_peak, s.components_created, s.conflicts
        ),
    )?;
    if let Some(p) = path {
        let value = line.split_whitespace().nth(2).unwrap_or_default().to_string();
        let r = RunReport::new(&instance.display().to_string(), algo.name(), &o.policy, value, s, ms);
        emit_stats(&r, p).map_err(|e| Failure::solver(format!("cannot write {}: {e}", p.display())))?;
    }
    Ok(())
}

fn count(a: CountArgs, out: &mut dyn Write) -> CmdResult {
    let f = load_cnf(&a.cnf)?;
    let decomp = load_decomp(a.decomp.as_ref())?;
    let policy = OrderPolicy {
        variant: parse_policy(&a.order, f.num_vars(), true)?,
        unit_propagation: !a.no_up,
    };
    let algo = algorithm(a.algo.to_possible_value().expect("value enum variant").get_name());
    let start = Instant::now();
    let o = count_formula(&f, algo, &policy, decomp.as_ref())?;
    report(
        out,
        a.stats.as_deref(),
        &a.cnf,
        algo,
        &o,
        start.elapsed().as_millis() as u64,
    )
}

fn sumprod(a: SumprodArgs, out: &mut dyn Write) -> CmdResult {
    let inst = parse_factor_file(&read(&a.factors)?, a.semiring.into())?;
    let decomp = load_decomp(a.decomp.as_ref())?;
    let policy = OrderPolicy {
        variant: parse_policy(&a.order, 0, false)?,
        unit_propagation: false,
    };
    let algo = algorithm(a.algo.to_possible_value().expect("value enum variant").get_name());
    let start = Instant::now();
    let o = solve_instance(&inst, algo, &policy, decomp.as_ref())?;
    report(
        out,
        a.stats.as_deref(),
        &a.factors,
        algo,
        &o,
        start.elapsed().as_millis() as u64,
    )
}

fn depth(t: &PseudoTree) -> usize {
    t.vertices().map(|v| t.ancestors(v).len() + 1).max().unwrap_or(0)
}

fn decompose(a: DecomposeArgs, out: &mut dyn Write) -> CmdResult {
    let f = load_cnf(&a.cnf)?;
    let h = hypergraph_of(&f);
    let method = match a.method {
        Method::MinFill => OrderHeuristic::MinFill,
        Method::MinDegree => OrderHeuristic::MinDegree,
    };
    let pi = heuristic_order(&h, method, a.seed);
    let solver = |e: crate::decomposition::DecompError| Failure::solver(e.to_string());
    let (doc, summary) = match a.emit {
        Emit::Order => {
            let (w, _) = induced_width(&h, &pi).map_err(solver)?;
            (DecompDoc::Order(pi), format!("c order width {w}"))
        }
        Emit::Treedec => {
            let t = treedec_from_order(&h, &pi).map_err(solver)?;
            let w = width_of(&t, &h).map_err(solver)?;
            (DecompDoc::Tree(t), format!("c tree width {w}"))
        }
        Emit::Branchdec => {
            let b = branchdec_from_order(&h, &pi).map_err(solver)?;
            let w = width_of(&b, &h).map_err(solver)?;
            (DecompDoc::Branch(b), format!("c branch width {w}"))
        }
        Emit::Pseudotree => {
            let t = pseudo_tree_from_order(&primal_graph(&h), &pi).map_err(solver)?;
            let d = depth(&t);
            (DecompDoc::PseudoTree(t), format!("c pseudotree depth {d}"))
        }
    };
    write_output(a.output.as_deref(), &serialize_decomp(&doc), out)?;
    if a.output.is_some() {
        say(out, &summary)?;
    }
    Ok(())
}

fn width(a: WidthArgs, out: &mut dyn Write) -> CmdResult {
    let f = load_cnf(&a.cnf)?;
    let h = hypergraph_of(&f);
    let doc = parse_decomp(&read(&a.decomp)?)?;
    let solver = |e: crate::decomposition::DecompError| Failure::solver(e.to_string());
    let w = match a.kind {
        WidthKind::Order => induced_width(&h, &doc.into_order()?).map_err(solver)?.0,
        WidthKind::Tree => width_of(&doc.into_tree()?, &h).map_err(solver)?,
        WidthKind::Branch => width_of(&doc.into_branch()?, &h).map_err(solver)?,
    };
    say(out, &w.to_string())
}

fn generate(a: GenerateArgs, out: &mut dyn Write) -> CmdResult {
    let bad = |e: crate::generators::GeneratorError| Failure::usage(e.to_string());
    let (f, o) = match a.family {
        Family::Pearls { n, m, out: o } => (gen_pearls(m, n).map_err(bad)?, o),
        Family::Blocks { k, out: o } => (gen_blocks(k).map_err(bad)?, o),
        Family::Random { n, m, k, seed, out: o } => (gen_random(n, m, k, seed).map_err(bad)?, o),
    };
    write_output(o.output.as_deref(), &serialize_dimacs(&f), out)
}
