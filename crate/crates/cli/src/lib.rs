//! The `ualg` command line: argument parsing, file loading and report rendering.
//!
//! Exit codes: 0 for success or a true verdict, 1 for a false verdict, 2 for
//! usage, parse and evaluation errors.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};

use ualg_core::clone::{clone_n, DEFAULT_CLONE_BUDGET};
use ualg_core::free::{build_truncated, search_bounded_retraction, SearchStep};
use ualg_core::generation::{directed_union_check, finiteness_report, generate};
use ualg_core::io::{parse_algebra_file, parse_equation_file, parse_term, serialize_algebra};
use ualg_core::logic::{eval_term_counted, satisfies_all, SatisfactionReport};
use ualg_core::morphism::{
    check_isomorphism, enumerate_homomorphisms, find_retractions_onto, HomMode, Morphism, DEFAULT_SEARCH_BUDGET,
};
use ualg_core::presets::preset;
use ualg_core::product::{direct_product, verify_universal_property, Naming};
use ualg_core::reduced::{
    adjoin_generate, canonicalize_names, coordinate_retraction, preservation_suite, EpSequence,
    DEFAULT_EXTENSION_BUDGET,
};
use ualg_core::{EquationSet, Error, FiniteAlgebra};

pub const BUDGET_ENV: &str = "UALG_BUDGET";

#[derive(Parser, Debug)]
#[command(name = "ualg", version, about = "Finite universal algebra toolkit")]
struct Cli {
    /// Emit JSON instead of text
    #[arg(long, global = true)]
    json: bool,

    /// Search or closure budget (overrides UALG_BUDGET)
    #[arg(long, global = true)]
    budget: Option<u64>,

    /// Seed for sampled checks
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Worker threads for parallel searches
    #[arg(long, global = true)]
    workers: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Parse and validate an algebra file
    Check {
        file: PathBuf,
        #[arg(long)]
        algebra: Option<String>,
    },
    /// Evaluate a term at a binding
    Eval {
        file: PathBuf,
        term: String,
        #[arg(long)]
        algebra: Option<String>,
        /// Declared variables, comma separated
        #[arg(long, value_delimiter = ',')]
        vars: Vec<String>,
        /// Element bound to each variable, comma separated
        #[arg(long, value_delimiter = ',')]
        at: Vec<String>,
    },
    /// Check every equation of a file or `preset:<name>`
    Satisfies {
        file: PathBuf,
        equations: String,
        #[arg(long)]
        algebra: Option<String>,
    },
    /// Generate the subalgebra of a seed set
    Gen {
        file: PathBuf,
        #[arg(long)]
        algebra: Option<String>,
        #[arg(long, value_delimiter = ',')]
        gens: Vec<String>,
        /// Also compare with the union over finite subsets of the seed
        #[arg(long)]
        directed: bool,
        /// Minimum generating set and subuniverse lattice
        #[arg(long)]
        report: bool,
    },
    /// Term operations of a given arity
    Clone {
        file: PathBuf,
        #[arg(long)]
        algebra: Option<String>,
        #[arg(long, default_value_t = 1)]
        arity: usize,
    },
    /// Enumerate homomorphisms
    Homs {
        file: PathBuf,
        #[arg(long)]
        from: String,
        #[arg(long)]
        to: String,
        #[arg(long, conflicts_with = "first")]
        count: bool,
        #[arg(long)]
        first: bool,
    },
    /// Search for an isomorphism between two algebras
    Iso {
        file: PathBuf,
        #[arg(long, value_delimiter = ',', num_args = 1..)]
        algebras: Vec<String>,
    },
    /// Retractions onto a subuniverse
    Retracts {
        file: PathBuf,
        #[arg(long)]
        algebra: Option<String>,
        #[arg(long, value_delimiter = ',')]
        onto: Vec<String>,
    },
    /// Keep only the listed operations
    Reduct {
        file: PathBuf,
        #[arg(long)]
        algebra: Option<String>,
        #[arg(long, value_delimiter = ',')]
        keep: Vec<String>,
        #[arg(long)]
        name: Option<String>,
    },
    /// Direct product with fresh element names
    Product {
        file: PathBuf,
        #[arg(long, value_delimiter = ',', num_args = 1..)]
        algebras: Vec<String>,
        #[arg(long, conflicts_with = "elements")]
        prefix: Option<String>,
        #[arg(long, value_delimiter = ',')]
        elements: Option<Vec<String>>,
        #[arg(long, default_value = "P")]
        name: String,
        /// Check the universal property against the factors and the product
        #[arg(long)]
        verify: bool,
    },
    /// Bounded retraction search on a truncated free semigroup
    FreeRetract {
        #[arg(long)]
        gens: usize,
        #[arg(long)]
        bound: usize,
        #[arg(long)]
        image_bound: usize,
    },
    /// Eventually periodic sequences modulo cofinite agreement
    Rp {
        #[command(subcommand)]
        command: RpCommand,
    },
}

#[derive(Subcommand, Debug)]
enum RpCommand {
    /// Closure of the constants and the given sequences
    Adjoin {
        file: PathBuf,
        #[arg(long)]
        algebra: Option<String>,
        /// `pre a b | per c d` or `per c d`; repeatable
        #[arg(long = "gen")]
        gens: Vec<String>,
    },
    /// Evaluation at one index, as a map onto the constants
    Retract {
        file: PathBuf,
        #[arg(long)]
        algebra: Option<String>,
        #[arg(long = "gen")]
        gens: Vec<String>,
        #[arg(long, default_value_t = 0)]
        index: usize,
    },
    /// Equations of the base checked on the generated extension
    Preserve {
        file: PathBuf,
        equations: String,
        #[arg(long)]
        algebra: Option<String>,
        #[arg(long = "gen")]
        gens: Vec<String>,
    },
}

/// Captured result of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Output {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

struct Report {
    verdict: bool,
    text: String,
    json: Value,
}

impl Report {
    fn new(verdict: bool, text: String, json: Value) -> Self {
        Report { verdict, text, json }
    }
}

#[derive(Debug)]
struct Failure(String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure(e.to_string())
    }
}

type Outcome = std::result::Result<Report, Failure>;

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I) -> Output
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let rendered = e.render().to_string();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => {
                    Output { code: 0, stdout: rendered, stderr: String::new() }
                }
                _ => Output { code: 2, stdout: String::new(), stderr: rendered },
            };
        }
    };
    let outcome = match cli.workers {
        Some(0) => Err(Failure("--workers must be at least 1".into())),
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
            Ok(pool) => pool.install(|| dispatch(&cli)),
            Err(e) => Err(Failure(e.to_string())),
        },
        None => dispatch(&cli),
    };
    match outcome {
        Ok(r) => {
            let stdout = if cli.json {
                let mut s = serde_json::to_string_pretty(&r.json).expect("json values serialize");
                s.push('\n');
                s
            } else {
                r.text
            };
            Output { code: if r.verdict { 0 } else { 1 }, stdout, stderr: String::new() }
        }
        Err(Failure(msg)) => Output { code: 2, stdout: String::new(), stderr: format!("error: {msg}\n") },
    }
}

fn budget(cli: &Cli, default: u64) -> u64 {
    cli.budget
        .or_else(|| std::env::var(BUDGET_ENV).ok().and_then(|v| v.trim().parse().ok()))
        .unwrap_or(default)
}

fn load(path: &Path) -> std::result::Result<Vec<Arc<FiniteAlgebra>>, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| match e.kind() {
        std::io::ErrorKind::NotFound => Failure(format!("file not found: {}", path.display())),
        _ => Failure(format!("{}: {e}", path.display())),
    })?;
    let algs = parse_algebra_file(&text).map_err(|e| Failure(format!("{}:{e}", path.display())))?;
    Ok(algs.into_iter().map(Arc::new).collect())
}

fn select(algs: &[Arc<FiniteAlgebra>], name: Option<&str>) -> std::result::Result<Arc<FiniteAlgebra>, Failure> {
    let names = || algs.iter().map(|a| a.name()).collect::<Vec<_>>().join(", ");
    match name {
        Some(n) => algs
            .iter()
            .find(|a| a.name() == n)
            .cloned()
            .ok_or_else(|| Failure(format!("no algebra `{n}` (available: {})", names()))),
        None if algs.len() == 1 => Ok(algs[0].clone()),
        None if algs.is_empty() => Err(Failure("file holds no algebras".into())),
        None => Err(Failure(format!("choose one with --algebra: {}", names()))),
    }
}

fn load_one(path: &Path, name: Option<&str>) -> std::result::Result<Arc<FiniteAlgebra>, Failure> {
    select(&load(path)?, name)
}

fn equations(source: &str) -> std::result::Result<EquationSet, Failure> {
    if let Some(name) = source.strip_prefix("preset:") {
        return Ok(preset(name)?);
    }
    let path = Path::new(source);
    let text = std::fs::read_to_string(path).map_err(|e| match e.kind() {
        std::io::ErrorKind::NotFound => Failure(format!("file not found: {source}")),
        _ => Failure(format!("{source}: {e}")),
    })?;
    let name = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    parse_equation_file(&text, &name).map_err(|e| Failure(format!("{source}:{e}")))
}

fn names(alg: &FiniteAlgebra, idx: &[usize]) -> Vec<String> {
    idx.iter().map(|&i| alg.element(i).to_string()).collect()
}

fn set(items: &[String]) -> String {
    format!("{{{}}}", items.join(", "))
}

fn to_json<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("report types serialize")
}

fn map_text(m: &Morphism) -> String {
    m.named().0.iter().map(|(a, b)| format!("{a}->{b}")).collect::<Vec<_>>().join(" ")
}

fn dispatch(cli: &Cli) -> Outcome {
    match &cli.command {
        Command::Check { file, algebra } => check(file, algebra.as_deref()),
        Command::Eval { file, term, algebra, vars, at } => eval(file, algebra.as_deref(), term, vars, at),
        Command::Satisfies { file, equations: eqs, algebra } => satisfies(file, algebra.as_deref(), eqs),
        Command::Gen { file, algebra, gens, directed, report } => {
            gen(cli, file, algebra.as_deref(), gens, *directed, *report)
        }
        Command::Clone { file, algebra, arity } => clone(cli, file, algebra.as_deref(), *arity),
        Command::Homs { file, from, to, count, first } => homs(cli, file, from, to, *count, *first),
        Command::Iso { file, algebras } => iso(cli, file, algebras),
        Command::Retracts { file, algebra, onto } => retracts(cli, file, algebra.as_deref(), onto),
        Command::Reduct { file, algebra, keep, name } => reduct(file, algebra.as_deref(), keep, name.as_deref()),
        Command::Product { file, algebras, prefix, elements, name, verify } => {
            product(cli, file, algebras, prefix.as_deref(), elements.as_deref(), name, *verify)
        }
        Command::FreeRetract { gens, bound, image_bound } => free_retract(*gens, *bound, *image_bound),
        Command::Rp { command } => match command {
            RpCommand::Adjoin { file, algebra, gens } => rp_adjoin(cli, file, algebra.as_deref(), gens),
            RpCommand::Retract { file, algebra, gens, index } => {
                rp_retract(cli, file, algebra.as_deref(), gens, *index)
            }
            RpCommand::Preserve { file, equations: eqs, algebra, gens } => {
                rp_preserve(cli, file, algebra.as_deref(), eqs, gens)
            }
        },
    }
}

fn describe(alg: &FiniteAlgebra) -> Value {
    let sig: Vec<Value> =
        alg.signature().symbols().iter().map(|s| json!({"name": s.name, "arity": s.arity})).collect();
    json!({"name": alg.name(), "size": alg.size(), "elements": alg.carrier(), "signature": sig})
}

fn check(file: &Path, algebra: Option<&str>) -> Outcome {
    let algs = load(file)?;
    let chosen = match algebra {
        Some(_) => vec![select(&algs, algebra)?],
        None => algs,
    };
    let mut text = String::new();
    for a in &chosen {
        let _ = writeln!(text, "{}: {} elements, signature {}", a.name(), a.size(), a.signature());
    }
    let _ = writeln!(text, "ok: {} algebra(s) valid", chosen.len());
    let json = json!({"valid": true, "algebras": chosen.iter().map(|a| describe(a)).collect::<Vec<_>>()});
    Ok(Report::new(true, text, json))
}

fn eval(file: &Path, algebra: Option<&str>, term: &str, vars: &[String], at: &[String]) -> Outcome {
    let alg = load_one(file, algebra)?;
    if vars.len() != at.len() {
        return Err(Failure(format!("{} variables but {} values", vars.len(), at.len())));
    }
    let t = parse_term(term, vars).map_err(|e| Failure(format!("term {e}")))?;
    let binding = alg.indices_of(at)?;
    let (value, lookups) = eval_term_counted(&alg, &t, &binding)?;
    let shown = t.display(vars).to_string();
    let bound: Vec<String> = vars.iter().zip(at).map(|(v, e)| format!("{v}={e}")).collect();
    let text = format!("{shown} = {} at {}\n", alg.element(value), if bound.is_empty() { "()".into() } else { bound.join(", ") });
    let binding_json: serde_json::Map<String, Value> =
        vars.iter().zip(at).map(|(v, e)| (v.clone(), Value::String(e.clone()))).collect();
    let json = json!({
        "algebra": alg.name(),
        "term": shown,
        "binding": binding_json,
        "value": alg.element(value),
        "lookups": lookups,
    });
    Ok(Report::new(true, text, json))
}

fn satisfaction_text(r: &SatisfactionReport) -> String {
    let mut text = String::new();
    for v in &r.verdicts {
        if v.holds {
            let _ = writeln!(text, "pass  {}", v.equation);
        } else {
            let b = v.counterexample.as_ref().map(|b| {
                b.0.iter().map(|(x, e)| format!("{x}={e}")).collect::<Vec<_>>().join(", ")
            });
            let _ = writeln!(
                text,
                "FAIL  {}  at {}: {} vs {}",
                v.equation,
                b.unwrap_or_default(),
                v.lhs.as_deref().unwrap_or("?"),
                v.rhs.as_deref().unwrap_or("?")
            );
        }
    }
    let passed = r.verdicts.iter().filter(|v| v.holds).count();
    let _ = writeln!(
        text,
        "{} {} {} ({passed}/{} equations)",
        r.algebra,
        if r.member { "satisfies" } else { "does not satisfy" },
        r.equations,
        r.verdicts.len()
    );
    text
}

fn satisfies(file: &Path, algebra: Option<&str>, source: &str) -> Outcome {
    let alg = load_one(file, algebra)?;
    let eqs = equations(source)?;
    let r = satisfies_all(&alg, &eqs)?;
    Ok(Report::new(r.member, satisfaction_text(&r), to_json(&r)))
}

fn gen(cli: &Cli, file: &Path, algebra: Option<&str>, gens: &[String], directed: bool, report: bool) -> Outcome {
    let alg = load_one(file, algebra)?;
    let seed = alg.indices_of(gens)?;
    let g = generate(&alg, &seed)?;
    let mut text = String::new();
    for (i, s) in g.trace.stages.iter().enumerate() {
        let _ = writeln!(text, "stage {i}: {}", set(&names(&alg, s)));
    }
    let _ = writeln!(text, "generated: {}", g.describe(&alg));
    let mut json = json!({
        "algebra": alg.name(),
        "generators": names(&alg, &g.trace.generators),
        "stages": g.trace.stages.iter().map(|s| names(&alg, s)).collect::<Vec<_>>(),
        "members": names(&alg, &g.members),
        "empty": g.is_empty(),
        "fixpoint": g.trace.fixpoint,
    });
    let mut verdict = true;
    if directed {
        let ok = directed_union_check(&alg, &seed, cli.seed)?;
        verdict &= ok;
        let _ = writeln!(text, "union over finite subsets: {}", if ok { "equal" } else { "DIFFERS" });
        json["directed_union"] = json!(ok);
    }
    if report {
        let r = finiteness_report(&alg)?;
        let _ = writeln!(text, "minimum generating set: {}", set(&r.minimum_generating_set));
        match &r.subuniverse_lattice {
            Some(lat) => {
                let _ = writeln!(text, "subuniverses ({}):", lat.members.len());
                for m in &lat.members {
                    let _ = writeln!(text, "  {}", set(m));
                }
            }
            None => {
                let _ = writeln!(text, "subuniverse lattice: {}", r.lattice_refused.as_deref().unwrap_or("skipped"));
            }
        }
        json["finiteness"] = to_json(&r);
    }
    Ok(Report::new(verdict, text, json))
}

fn clone(cli: &Cli, file: &Path, algebra: Option<&str>, arity: usize) -> Outcome {
    let alg = load_one(file, algebra)?;
    let limit = budget(cli, DEFAULT_CLONE_BUDGET as u64).min(usize::MAX as u64) as usize;
    let c = clone_n(&alg, arity, limit)?;
    let views = c.views(&alg);
    let mut text = format!(
        "{} term operations of arity {arity} on {}{}\n",
        c.len(),
        alg.name(),
        if c.complete { "" } else { " (incomplete: budget reached)" }
    );
    for v in &views {
        let _ = writeln!(text, "  {}  [{}]", v.witness, v.table.join(" "));
    }
    let json = json!({
        "algebra": alg.name(),
        "arity": arity,
        "complete": c.complete,
        "count": c.len(),
        "members": views,
    });
    Ok(Report::new(c.complete, text, json))
}

fn homs(cli: &Cli, file: &Path, from: &str, to: &str, count: bool, first: bool) -> Outcome {
    let algs = load(file)?;
    let (src, dst) = (select(&algs, Some(from))?, select(&algs, Some(to))?);
    let mode = if count {
        HomMode::Count
    } else if first {
        HomMode::First
    } else {
        HomMode::List
    };
    let e = enumerate_homomorphisms(&src, &dst, mode, budget(cli, DEFAULT_SEARCH_BUDGET))?;
    let maps: Vec<Morphism> =
        e.maps.into_iter().map(|m| Morphism::new(src.clone(), dst.clone(), m)).collect::<ualg_core::Result<_>>()?;
    let mut text = String::new();
    for m in &maps {
        let _ = writeln!(text, "{}", map_text(m));
    }
    let _ = writeln!(text, "{} homomorphism(s) {from} -> {to}", e.count);
    let mode_name = match mode {
        HomMode::Count => "count",
        HomMode::First => "first",
        HomMode::List => "list",
    };
    let json = json!({
        "from": from,
        "to": to,
        "mode": mode_name,
        "count": e.count,
        "maps": maps.iter().map(|m| to_json(&m.named())).collect::<Vec<_>>(),
    });
    Ok(Report::new(e.count > 0, text, json))
}

fn iso(cli: &Cli, file: &Path, pair: &[String]) -> Outcome {
    if pair.len() != 2 {
        return Err(Failure("--algebras takes exactly two names".into()));
    }
    let algs = load(file)?;
    let (a, b) = (select(&algs, Some(&pair[0]))?, select(&algs, Some(&pair[1]))?);
    let found = check_isomorphism(&a, &b, budget(cli, DEFAULT_SEARCH_BUDGET))?;
    let text = match &found {
        Some(m) => format!("isomorphic: {}\n", map_text(m)),
        None => format!("{} and {} are not isomorphic\n", a.name(), b.name()),
    };
    let json = json!({
        "algebras": pair,
        "isomorphic": found.is_some(),
        "map": found.as_ref().map(|m| to_json(&m.named())),
    });
    Ok(Report::new(found.is_some(), text, json))
}

fn retracts(cli: &Cli, file: &Path, algebra: Option<&str>, onto: &[String]) -> Outcome {
    let alg = load_one(file, algebra)?;
    let rs = find_retractions_onto(&alg, onto, budget(cli, DEFAULT_SEARCH_BUDGET))?;
    let mut text = String::new();
    for r in &rs {
        let _ = writeln!(text, "{}", map_text(r));
    }
    let _ = writeln!(text, "{} retraction(s) of {} onto {}", rs.len(), alg.name(), set(onto));
    let json = json!({
        "algebra": alg.name(),
        "onto": onto,
        "count": rs.len(),
        "retractions": rs.iter().map(|r| to_json(&r.named())).collect::<Vec<_>>(),
    });
    Ok(Report::new(!rs.is_empty(), text, json))
}

fn reduct(file: &Path, algebra: Option<&str>, keep: &[String], name: Option<&str>) -> Outcome {
    let alg = load_one(file, algebra)?;
    let mut r = alg.reduct(keep)?;
    if let Some(n) = name {
        r = r.with_name(n);
    }
    let text = serialize_algebra(&r);
    let json = json!({"algebra": describe(&r), "file": text});
    Ok(Report::new(true, text, json))
}

fn product(
    cli: &Cli,
    file: &Path,
    factors: &[String],
    prefix: Option<&str>,
    elements: Option<&[String]>,
    name: &str,
    verify: bool,
) -> Outcome {
    let algs = load(file)?;
    let chosen: Vec<Arc<FiniteAlgebra>> =
        factors.iter().map(|f| select(&algs, Some(f))).collect::<std::result::Result<_, _>>()?;
    let naming = match (elements, prefix) {
        (Some(list), _) => Naming::Explicit(list.to_vec()),
        (None, Some(p)) => Naming::Prefix(p.to_string()),
        (None, None) => Naming::Prefix("p".to_string()),
    };
    let p = direct_product(&chosen, naming, name)?;
    let mut text = serialize_algebra(&p.product);
    for (e, parts) in p.relabel_map() {
        let _ = writeln!(text, "# {e} = ({})", parts.join(", "));
    }
    let relabel: serde_json::Map<String, Value> =
        p.relabel_map().into_iter().map(|(e, parts)| (e, json!(parts))).collect();
    let projections: Vec<Value> = p
        .projections
        .iter()
        .map(|pr| json!({"factor": pr.target().name(), "map": to_json(&pr.named())}))
        .collect();
    let mut json = json!({
        "algebra": describe(&p.product),
        "file": serialize_algebra(&p.product),
        "relabel": relabel,
        "projections": projections,
    });
    let mut verdict = true;
    if verify {
        let mut apices = chosen.clone();
        apices.push(p.product.clone());
        let r = verify_universal_property(&p, &apices, budget(cli, DEFAULT_SEARCH_BUDGET))?;
        for a in &r.apices {
            let _ = writeln!(text, "# apex {}: {}/{} cones factor, uniqueness {:?}", a.apex, a.passed, a.cones, a.uniqueness);
        }
        let _ = writeln!(text, "# universal property: {}", if r.holds { "holds" } else { "FAILS" });
        verdict = r.holds;
        json["universal_property"] = to_json(&r);
    }
    Ok(Report::new(verdict, text, json))
}

fn generator_names(n: usize) -> std::result::Result<Vec<String>, Failure> {
    match n {
        0 => Err(Failure("--gens must be at least 1".into())),
        1 => Ok(vec!["g".into()]),
        2..=26 => Ok((0..n).map(|i| ((b'a' + i as u8) as char).to_string()).collect()),
        _ => Ok((0..n).map(|i| format!("g{i}")).collect()),
    }
}

fn free_retract(gens: usize, bound: usize, image_bound: usize) -> Outcome {
    let t = build_truncated(&generator_names(gens)?, bound)?;
    let r = search_bounded_retraction(&t, image_bound)?;
    let mut text = format!(
        "{} words over {{{}}} up to length {bound}; image bound {image_bound}\n",
        t.len(),
        t.generators().join(", ")
    );
    for step in &r.transcript {
        let line = match step {
            SearchStep::Forced { word, left, right, image } => format!("forced  r({word}) = r({left})r({right}) = {image}"),
            SearchStep::Choice { word, image } => format!("choose  r({word}) = {image}"),
            SearchStep::Conflict { word, left, right, product, length, reason } => {
                format!("CONFLICT  r({word}) = r({left})r({right}) = {product} (length {length}): {reason}")
            }
        };
        let _ = writeln!(text, "{line}");
    }
    match (&r.retraction, r.first_conflict_length) {
        (Some(_), _) => text.push_str("retraction found\n"),
        (None, Some(m)) => {
            let _ = writeln!(text, "no retraction: first contradiction at word length {m}");
        }
        (None, None) => text.push_str("no retraction\n"),
    }
    Ok(Report::new(r.retraction.is_some(), text, to_json(&r)))
}

fn sequences(base: &Arc<FiniteAlgebra>, gens: &[String]) -> std::result::Result<Vec<EpSequence>, Failure> {
    Ok(gens.iter().map(|g| canonicalize_names(base, g)).collect::<ualg_core::Result<_>>()?)
}

fn rp_adjoin(cli: &Cli, file: &Path, algebra: Option<&str>, gens: &[String]) -> Outcome {
    let base = load_one(file, algebra)?;
    let seqs = sequences(&base, gens)?;
    let limit = budget(cli, DEFAULT_EXTENSION_BUDGET as u64).min(usize::MAX as u64) as usize;
    let ext = adjoin_generate(&base, &seqs, limit)?;
    let mut text = format!("{} members generated over {}\n", ext.members.len(), base.name());
    for (name, s) in ext.relabel_map() {
        let _ = writeln!(text, "  {name} = {s}");
    }
    text.push_str(&serialize_algebra(&ext.view));
    let members: Vec<Value> =
        ext.relabel_map().into_iter().map(|(n, s)| json!({"name": n, "sequence": to_json(s)})).collect();
    let json = json!({
        "base": base.name(),
        "generators": to_json(&ext.generators),
        "members": members,
        "algebra": describe(&ext.view),
        "file": serialize_algebra(&ext.view),
    });
    Ok(Report::new(true, text, json))
}

fn rp_retract(cli: &Cli, file: &Path, algebra: Option<&str>, gens: &[String], index: usize) -> Outcome {
    let base = load_one(file, algebra)?;
    let seqs = sequences(&base, gens)?;
    let limit = budget(cli, DEFAULT_EXTENSION_BUDGET as u64).min(usize::MAX as u64) as usize;
    let ext = adjoin_generate(&base, &seqs, limit)?;
    let r = coordinate_retraction(&ext, index)?;
    let status = r.status()?;
    let text = format!(
        "{}\nhomomorphism: {}, idempotent: {}\n",
        map_text(&r),
        if status.homomorphism { "yes" } else { "no" },
        if status.idempotent == Some(true) { "yes" } else { "no" }
    );
    let json = json!({
        "base": base.name(),
        "index": index,
        "map": to_json(&r.named()),
        "status": to_json(&status),
    });
    Ok(Report::new(status.homomorphism, text, json))
}

fn rp_preserve(cli: &Cli, file: &Path, algebra: Option<&str>, source: &str, gens: &[String]) -> Outcome {
    let base = load_one(file, algebra)?;
    let eqs = equations(source)?;
    let seqs = sequences(&base, gens)?;
    let limit = budget(cli, DEFAULT_EXTENSION_BUDGET as u64).min(usize::MAX as u64) as usize;
    let r = preservation_suite(&base, &eqs, &seqs, limit)?;
    let text = format!("extension of {} with {} members\n{}", r.base, r.members, satisfaction_text(&r.report));
    Ok(Report::new(r.report.member, text, to_json(&r)))
}
