//! Command-line front end for the `oabp` library.

mod config;

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use oabp::abp::{
    check_oblivious, check_order, evaluate, expand, infer_order, stats, validate, AbpFile,
};
use oabp::families::{
    build_fullrank, build_ryser, build_separation, build_symm, read_lower_bound, verify_full_rank,
    Weights, FULLRANK_PRIME,
};
use oabp::generator::{build_f, choose_k, eval_f, points_needed, seed_len};
use oabp::normalize::{
    cut_decompose, derivative_abp, derivative_decomposition, obliviate, reduce_independent,
};
use oabp::pit::{self, algorithm1, compose_test, random_probe, HitsetOptions, PitVerdict, Witness};
use oabp::{Abp, Elem, Exec, Field, FieldConfig, Permutation, SparsePoly, VarSpace};

use config::{parse_field, CliConfig, OutputMode};

#[derive(Parser, Debug)]
#[command(
    name = "oabp",
    version,
    about = "Identity testing and transforms for ordered ABPs"
)]
struct Cli {
    /// Machine-readable output.
    #[arg(long, global = true)]
    json: bool,
    /// Config file; overrides the OABP_CONFIG environment variable.
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Write the result here instead of stdout.
    #[arg(short, long, global = true, value_name = "PATH")]
    output: Option<PathBuf>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Check an ABP file against the format rules.
    Validate {
        file: PathBuf,
        /// Print the canonical re-serialization of a valid file.
        #[arg(long)]
        canonical: bool,
    },
    /// Size, depth, width, reads and order information.
    Stats { file: PathBuf },
    /// Evaluate at a point given as comma-separated field elements.
    Eval {
        file: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        point: String,
    },
    /// Expand to a sparse polynomial.
    Expand {
        file: PathBuf,
        /// Print the polynomial as text instead of the file format.
        #[arg(long)]
        print: bool,
    },
    /// Rewrite as an oblivious program in the same order.
    Obliviate {
        file: PathBuf,
        /// Image list of the order, or "identity"; defaults to the file's order.
        #[arg(long)]
        order: Option<String>,
    },
    /// Program for the partial derivative in x_VAR.
    Derivative {
        file: PathBuf,
        #[arg(long)]
        var: usize,
    },
    /// Independent decomposition of the derivative in x_VAR, or of the
    /// program itself at a cut level.
    Decompose {
        file: PathBuf,
        #[arg(long, conflicts_with = "level")]
        var: Option<usize>,
        #[arg(long)]
        level: Option<usize>,
    },
    /// Build or evaluate the generator F^{k,r}.
    Gen {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        r: usize,
        /// One line per component instead of the file format.
        #[arg(long)]
        print: bool,
        /// Evaluate at a comma-separated seed point.
        #[arg(long, allow_hyphen_values = true)]
        eval: Option<String>,
        #[arg(long)]
        field: Option<String>,
    },
    /// Identity test.
    Pit(PitArgs),
    /// Read lower bound from the middle-partition rank.
    Rank {
        file: PathBuf,
        #[arg(long)]
        order: Option<String>,
    },
    /// Emit a standard family member.
    Family {
        #[command(subcommand)]
        which: Family,
    },
    /// Compare the polynomials of two files.
    Equal { a: PathBuf, b: PathBuf },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ModeArg {
    Hitset,
    Compose,
    Random,
}

#[derive(Args, Debug)]
struct PitArgs {
    file: PathBuf,
    #[arg(long, value_enum, default_value = "hitset")]
    mode: ModeArg,
    /// Read bound; defaults to the program's read.
    #[arg(long)]
    read: Option<usize>,
    /// Image list of the order, or "identity"; defaults to the file's order.
    #[arg(long)]
    order: Option<String>,
    /// Grid budget for hitset, term budget for compose.
    #[arg(long)]
    budget: Option<u64>,
    /// Use the component degree bound for the grid.
    #[arg(long)]
    paper_degree_bound: bool,
    /// Explicit grid degree bound G.
    #[arg(long, conflicts_with = "paper_degree_bound")]
    degree: Option<u64>,
    #[arg(long, default_value_t = 100)]
    trials: u64,
    /// Sample space size for random probes.
    #[arg(long, default_value_t = 1 << 20)]
    space: u64,
    #[arg(long)]
    seed: Option<u64>,
    /// Disable the parallel grid scan.
    #[arg(long)]
    sequential: bool,
}

#[derive(Subcommand, Debug)]
enum Family {
    /// Elementary symmetric polynomial S_n^k.
    Symm {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        field: Option<String>,
    },
    /// Ryser program for the n x n permanent.
    Ryser {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        field: Option<String>,
    },
    /// Read-once program whose read grows under a different order.
    #[command(visible_alias = "t7")]
    Separation {
        #[arg(long)]
        n: usize,
        /// Emit the polynomial and both orders instead of the program.
        #[arg(long)]
        poly: bool,
        #[arg(long)]
        field: Option<String>,
    },
    /// Full-rank polynomial f_{1,2n+1} with seeded weights over F_{2^31-1}.
    Fullrank {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        seed: Option<u64>,
        /// Check every derivative's rank under all balanced splits instead.
        #[arg(long)]
        verify: bool,
        #[arg(long, default_value_t = 4)]
        attempts: usize,
    },
}

enum Failure {
    Usage(String),
    Runtime(anyhow::Error),
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Runtime(e)
    }
}

impl From<oabp::Error> for Failure {
    fn from(e: oabp::Error) -> Self {
        Failure::Runtime(e.into())
    }
}

type Res<T> = Result<T, Failure>;

fn usage<T>(msg: impl Into<String>) -> Res<T> {
    Err(Failure::Usage(msg.into()))
}

struct Ctx {
    cfg: CliConfig,
    json: bool,
}

/// What a command produced: text for humans and a JSON value.
enum Out {
    Text(String),
    Json(Value),
    Both { text: String, json: Value },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Runtime(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: &Cli) -> Res<()> {
    let cfg = CliConfig::load(cli.config.as_deref()).map_err(Failure::Usage)?;
    let json = cli.json || cfg.output == OutputMode::Json;
    let ctx = Ctx { cfg, json };
    let out = dispatch(&ctx, &cli.cmd)?;
    let mut text = match (out, ctx.json) {
        (Out::Text(t), _) | (Out::Both { text: t, .. }, false) => t,
        (Out::Json(v), _) | (Out::Both { json: v, .. }, true) => {
            serde_json::to_string_pretty(&v).expect("serializable")
        }
    };
    if !text.ends_with('\n') {
        text.push('\n');
    }
    match &cli.output {
        Some(path) => std::fs::write(path, text)
            .with_context(|| format!("cannot write {}", path.display()))?,
        None => print!("{text}"),
    }
    Ok(())
}

fn dispatch(ctx: &Ctx, cmd: &Cmd) -> Res<Out> {
    let budget = ctx.cfg.expansion_budget;
    match cmd {
        Cmd::Validate { file, canonical } => {
            let parsed = read_abp_file(file)?;
            let report = validate(&parsed);
            if !report.is_ok() {
                return Err(anyhow!("{}: invalid ABP\n{report}", file.display()).into());
            }
            let a = Abp::from_file(&parsed)?;
            if *canonical {
                return Ok(Out::Text(a.to_json_string()));
            }
            Ok(Out::Both {
                text: "ok".into(),
                json: json!({ "valid": true }),
            })
        }
        Cmd::Stats { file } => {
            let a = load_abp(file)?;
            Ok(stats_out(&a))
        }
        Cmd::Eval { file, point } => {
            let obj = load_any(file)?;
            let x = parse_point(obj.field(), point, obj.num_vars())?;
            let v = match &obj {
                Loaded::Abp(a) => evaluate(a, &x),
                Loaded::Poly(p) => p.eval(&x),
            };
            let f = obj.field();
            Ok(Out::Both {
                text: f.format(&v),
                json: json!({ "value": f.to_json(&v) }),
            })
        }
        Cmd::Expand { file, print } => {
            let p = load_any(file)?.expand(budget)?;
            if *print {
                return Ok(Out::Text(p.to_string()));
            }
            Ok(Out::Json(p.to_json()))
        }
        Cmd::Obliviate { file, order } => {
            let a = load_abp(file)?;
            let pi = match order {
                Some(s) => parse_order(s, a.num_vars())?,
                None => pit::program_order(&a)?,
            };
            Ok(Out::Text(obliviate(&a, &pi)?.to_json_string()))
        }
        Cmd::Derivative { file, var } => {
            let a = oblivious(load_abp(file)?)?;
            check_var(*var, a.num_vars())?;
            Ok(Out::Text(derivative_abp(&a, *var)?.to_json_string()))
        }
        Cmd::Decompose { file, var, level } => {
            let a = oblivious(load_abp(file)?)?;
            let dec = match (var, level) {
                (Some(i), _) => {
                    check_var(*i, a.num_vars())?;
                    derivative_decomposition(&a, *i, budget)?
                }
                (None, Some(l)) => {
                    let (fs, gs) = cut_decompose(&a, *l, budget)?;
                    let mut d = reduce_independent(&fs, &gs, budget)?;
                    d.cut_level = Some(*l);
                    d
                }
                (None, None) => return usage("decompose needs --var or --level"),
            };
            let mut text = format!("w' = {}\n", dec.w_prime);
            for (f, g) in dec.fs.iter().zip(&dec.gs) {
                let _ = writeln!(text, "({f}) * ({g})");
            }
            Ok(Out::Both {
                text,
                json: dec.to_json(),
            })
        }
        Cmd::Gen {
            k,
            r,
            print,
            eval,
            field,
        } => {
            let f = field_from(ctx, field.as_deref())?;
            if *r == 0 {
                return usage("--r must be at least 1");
            }
            if let Some(s) = eval {
                let seed = parse_point(&f, s, seed_len(*k, *r))?;
                let out = eval_f(&f, *k, *r, &seed)?;
                return Ok(Out::Both {
                    text: format!(
                        "({})",
                        out.iter()
                            .map(|e| f.format(e))
                            .collect::<Vec<_>>()
                            .join(", ")
                    ),
                    json: json!({ "outputs": out.iter().map(|e| f.to_json(e)).collect::<Vec<_>>() }),
                });
            }
            let map = build_f(&f, *k, *r, budget)?;
            if *print {
                return Ok(Out::Text(map.to_string()));
            }
            Ok(Out::Json(map.to_json()))
        }
        Cmd::Pit(args) => run_pit(ctx, args),
        Cmd::Rank { file, order } => {
            let obj = load_any(file)?;
            let n = obj.num_vars();
            let pi = match (order, &obj) {
                (Some(s), _) => parse_order(s, n)?,
                (None, Loaded::Abp(a)) => pit::program_order(a)?,
                (None, Loaded::Poly(_)) => Permutation::identity(n),
            };
            let p = obj.expand(budget)?;
            let bound = read_lower_bound(&p, &pi)?;
            let mut json = json!({ "bound": bound, "order": pi.image() });
            let mut text = format!("read lower bound: {bound}");
            if let Loaded::Abp(a) = &obj {
                let read = stats(a).read;
                json["read"] = json!(read);
                let _ = write!(text, "\nprogram read: {read}");
            }
            Ok(Out::Both { text, json })
        }
        Cmd::Family { which } => family(ctx, which),
        Cmd::Equal { a, b } => {
            let (a, b) = (load_any(a)?, load_any(b)?);
            if a.field().config() != b.field().config() {
                return Err(anyhow!(
                    "field mismatch: {} vs {}",
                    a.field().config(),
                    b.field().config()
                )
                .into());
            }
            let n = a.num_vars().max(b.num_vars());
            let (pa, pb) = (widen(a.expand(budget)?, n), widen(b.expand(budget)?, n));
            let equal = pa == pb;
            Ok(Out::Both {
                text: if equal { "EQUAL" } else { "DIFFERENT" }.into(),
                json: json!({ "equal": equal }),
            })
        }
    }
}

fn run_pit(ctx: &Ctx, args: &PitArgs) -> Res<Out> {
    let mut a = load_abp(&args.file)?;
    if let Some(s) = &args.order {
        let pi = parse_order(s, a.num_vars())?;
        if !check_order(&a, &pi) {
            return Err(anyhow!("the program does not respect the order {pi}").into());
        }
        a = a.with_order(Some(pi));
    }
    let read = args.read.unwrap_or_else(|| stats(&a).read.max(1));
    if read == 0 {
        return usage("--read must be at least 1");
    }
    let seed = args.seed.unwrap_or(ctx.cfg.seed);
    let exec = if args.sequential {
        Exec::Sequential
    } else {
        Exec::default()
    };
    let n = a.num_vars();
    let (verdict, a) = match args.mode {
        ModeArg::Hitset => {
            let pi = pit::program_order(&a)?;
            let opts = HitsetOptions {
                grid_budget: args.budget.unwrap_or(ctx.cfg.grid_budget),
                paper_degree_bound: args.paper_degree_bound,
                degree_override: args.degree,
                exec,
            };
            let side = match args.degree {
                Some(g) => g.saturating_add(1),
                None => pit::grid_size(n, read, args.paper_degree_bound).0,
            };
            let needed = side.max(points_needed(choose_k(n), read) as u64);
            let a = fit_field(a, needed, ctx.cfg.max_extension_degree)?;
            (algorithm1(&a, read, &pi, &opts)?, a)
        }
        ModeArg::Compose => {
            let budget = match args.budget {
                Some(b) => usize::try_from(b).unwrap_or(usize::MAX),
                None => ctx.cfg.expansion_budget,
            };
            let needed = points_needed(choose_k(n), read) as u64;
            let a = fit_field(a, needed, ctx.cfg.max_extension_degree)?;
            (compose_test(&a, read, budget)?, a)
        }
        ModeArg::Random => (random_probe(&a, args.trials, args.space, seed), a),
    };
    Ok(verdict_out(&verdict, &a, read))
}

fn verdict_out(v: &PitVerdict, a: &Abp, read: usize) -> Out {
    let f = a.field();
    let space = match (&v.witness, v.k) {
        (Some(Witness::Monomial { .. }), Some(k)) => VarSpace::Seed {
            ell: oabp::generator::ell(k, read),
            k,
        },
        _ => VarSpace::X,
    };
    let mut json = v.to_json(f, space);
    json["field"] = json!(f.config());
    json["read"] = json!(read);
    let mut text = format!("{}\nmode: {}\nqueries: {}\n", v.verdict, v.mode, v.queries);
    if v.probabilistic {
        text.push_str("note: ZERO from random probes only\n");
    }
    let fmt = |xs: &[Elem]| {
        xs.iter()
            .map(|e| f.format(e))
            .collect::<Vec<_>>()
            .join(", ")
    };
    match &v.witness {
        Some(Witness::Point { x, seed }) => {
            let _ = writeln!(text, "witness: ({})", fmt(x));
            if let Some(s) = seed {
                let _ = writeln!(text, "seed: ({})", fmt(s));
            }
        }
        Some(Witness::Monomial { exps, coeff }) => {
            let names: Vec<String> = exps
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(i, &e)| {
                    if e == 1 {
                        space.name(i)
                    } else {
                        format!("{}^{e}", space.name(i))
                    }
                })
                .collect();
            let mono = if names.is_empty() {
                "1".into()
            } else {
                names.join("*")
            };
            let _ = writeln!(text, "witness monomial: {} * {mono}", f.format(coeff));
        }
        None => {}
    }
    Out::Both { text, json }
}

/// Moves a program over a too-small prime field into the smallest extension
/// with at least `needed` elements.
fn fit_field(a: Abp, needed: u64, max_degree: usize) -> Res<Abp> {
    if a.field().has_at_least(needed) {
        return Ok(a);
    }
    let p = match a.field().config() {
        FieldConfig::Prime { p } => *p,
        _ => return Ok(a),
    };
    let mut size: u128 = p as u128;
    for d in 2..=max_degree {
        size = size.saturating_mul(p as u128);
        if size >= needed as u128 {
            let f = Field::new(FieldConfig::extension(p, d)?)?;
            return Ok(a.lift(&f)?);
        }
    }
    Ok(a)
}

fn family(ctx: &Ctx, which: &Family) -> Res<Out> {
    match which {
        Family::Symm { n, k, field } => {
            let f = field_from(ctx, field.as_deref())?;
            Ok(Out::Text(build_symm(&f, *n, *k)?.to_json_string()))
        }
        Family::Ryser { n, field } => {
            let f = field_from(ctx, field.as_deref())?;
            Ok(Out::Text(build_ryser(&f, *n)?.to_json_string()))
        }
        Family::Separation { n, poly, field } => {
            let f = field_from(ctx, field.as_deref())?;
            let t = build_separation(&f, *n)?;
            if *poly {
                let mut v = t.poly.to_json();
                v["num_vars"] = json!(t.poly.nvars());
                return Ok(Out::Json(json!({
                    "poly": v,
                    "pi": t.pi.image(),
                    "pi_prime": t.pi_prime.image(),
                })));
            }
            Ok(Out::Text(t.abp.to_json_string()))
        }
        Family::Fullrank {
            n,
            seed,
            verify,
            attempts,
        } => {
            let seed = seed.unwrap_or(ctx.cfg.seed);
            if *verify {
                let rep = verify_full_rank(*n, seed, *attempts, Exec::default())?;
                let text = format!(
                    "{}: {} rank checks, expected rank {}, {} attempt(s), {} rejected",
                    if rep.ok { "ok" } else { "FAILED" },
                    rep.checks,
                    rep.expected_rank,
                    rep.attempts,
                    rep.deficient.len()
                );
                return Ok(Out::Both {
                    text,
                    json: serde_json::to_value(&rep).expect("serializable"),
                });
            }
            let f = Field::prime(FULLRANK_PRIME)?;
            let m = 2 * n + 1;
            let w = Weights::seeded(&f, m, seed);
            Ok(Out::Json(
                build_fullrank(m, 1, m, &w, ctx.cfg.expansion_budget)?.to_json(),
            ))
        }
    }
}

fn stats_out(a: &Abp) -> Out {
    let s = stats(a);
    let declared = a.order().map(|p| check_order(a, p));
    let inferred = infer_order(a);
    let oblivious = check_oblivious(a).is_ok();
    let json = json!({
        "field": a.field().config(),
        "num_vars": a.num_vars(),
        "size": s.size,
        "depth": s.depth,
        "width": s.width,
        "edges": a.num_edges(),
        "reads": s.reads,
        "read": s.read,
        "order": a.order().map(|p| p.image().to_vec()),
        "respects_order": declared,
        "inferred_order": inferred.as_ref().map(|p| p.image().to_vec()),
        "oblivious": oblivious,
    });
    let mut text = String::new();
    let _ = writeln!(text, "field: {}", a.field().config());
    let _ = writeln!(text, "variables: {}", a.num_vars());
    let _ = writeln!(
        text,
        "size: {}  depth: {}  width: {}  edges: {}",
        s.size,
        s.depth,
        s.width,
        a.num_edges()
    );
    let _ = writeln!(text, "read: {}  reads: {:?}", s.read, s.reads);
    match (a.order(), declared) {
        (Some(p), Some(ok)) => {
            let _ = writeln!(
                text,
                "order: {p} ({})",
                if ok { "respected" } else { "VIOLATED" }
            );
        }
        _ => {
            let _ = writeln!(text, "order: none declared");
        }
    }
    match &inferred {
        Some(p) => {
            let _ = writeln!(text, "consistent order: {p}");
        }
        None => {
            let _ = writeln!(text, "consistent order: none");
        }
    }
    let _ = writeln!(text, "oblivious: {}", if oblivious { "yes" } else { "no" });
    Out::Both { text, json }
}

enum Loaded {
    Abp(Abp),
    Poly(SparsePoly),
}

impl Loaded {
    fn field(&self) -> &Field {
        match self {
            Loaded::Abp(a) => a.field(),
            Loaded::Poly(p) => p.field(),
        }
    }

    fn num_vars(&self) -> usize {
        match self {
            Loaded::Abp(a) => a.num_vars(),
            Loaded::Poly(p) => p.nvars(),
        }
    }

    fn expand(&self, budget: usize) -> Res<SparsePoly> {
        Ok(match self {
            Loaded::Abp(a) => expand(a, budget)?,
            Loaded::Poly(p) => p.clone(),
        })
    }
}

fn read_json(path: &Path) -> Res<Value> {
    let text =
        std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    Ok(serde_json::from_str(&text)
        .with_context(|| format!("{}: not valid JSON", path.display()))?)
}

fn read_abp_file(path: &Path) -> Res<AbpFile> {
    let text =
        std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    Ok(serde_json::from_str(&text).with_context(|| format!("{}: schema error", path.display()))?)
}

fn load_abp(path: &Path) -> Res<Abp> {
    let file = read_abp_file(path)?;
    Ok(Abp::from_file(&file).with_context(|| path.display().to_string())?)
}

fn load_any(path: &Path) -> Res<Loaded> {
    let v = read_json(path)?;
    if v.get("levels").is_some() {
        return Ok(Loaded::Abp(load_abp(path)?));
    }
    if v.get("terms").is_some() {
        let p =
            SparsePoly::from_json(&v, VarSpace::X).with_context(|| path.display().to_string())?;
        return Ok(Loaded::Poly(p));
    }
    Err(anyhow!("{}: neither an ABP nor a polynomial file", path.display()).into())
}

/// Brings a program into oblivious form along its order if it is not already.
fn oblivious(a: Abp) -> Res<Abp> {
    if check_oblivious(&a).is_ok() {
        return Ok(a);
    }
    let pi = pit::program_order(&a)?;
    Ok(obliviate(&a, &pi)?)
}

fn widen(p: SparsePoly, n: usize) -> SparsePoly {
    if p.nvars() == n {
        return p;
    }
    let map: Vec<usize> = (0..p.nvars()).collect();
    p.remap(n, &map)
}

fn check_var(i: usize, n: usize) -> Res<()> {
    if i == 0 || i > n {
        return usage(format!("variable x{i} out of range 1..={n}"));
    }
    Ok(())
}

fn parse_order(s: &str, n: usize) -> Res<Permutation> {
    Permutation::parse(s, n).map_err(|e| Failure::Usage(e.to_string()))
}

fn parse_point(f: &Field, s: &str, n: usize) -> Res<Vec<Elem>> {
    let parts: Vec<&str> = if s.trim().is_empty() {
        Vec::new()
    } else {
        s.split(',').collect()
    };
    if parts.len() != n {
        return usage(format!("point has {} entries, expected {n}", parts.len()));
    }
    parts
        .iter()
        .map(|t| f.parse(t).map_err(|e| Failure::Usage(e.to_string())))
        .collect()
}

fn field_from(ctx: &Ctx, flag: Option<&str>) -> Res<Field> {
    let cfg = parse_field(flag.unwrap_or(&ctx.cfg.field)).map_err(Failure::Usage)?;
    Field::new(cfg).map_err(|e| Failure::Usage(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cli_definition_is_consistent() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }

    #[test]
    fn field_strings() {
        assert_eq!(parse_field("rational").unwrap(), FieldConfig::Rational);
        assert_eq!(parse_field("prime:7").unwrap(), FieldConfig::prime(7));
        assert!(matches!(
            parse_field("ext:2:3").unwrap(),
            FieldConfig::Extension { p: 2, deg: 3, .. }
        ));
        assert!(parse_field("reals").is_err());
    }
}
