//! Command-line front door: parse, check, normalize, evaluate, count,
//! encode/decode, reduce, compare, and generate formulas.
//!
//! Exit codes: 0 on success (a `false` answer is a success), 2 on usage
//! errors, 3 when a guard or limit refuses the work, 4 on parse or type
//! errors.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use hoq::classify::classify;
use hoq::encode::{counts, decode_with, encode, BitCode};
use hoq::error::EvalError;
use hoq::eval::{eval, Environment};
use hoq::formula::Formula;
use hoq::gen;
use hoq::limits::Limits;
use hoq::normalize;
use hoq::oracle::equivalent;
use hoq::parse::{load_formula, parse_type};
use hoq::print::print_formula;
use hoq::reduce;
use hoq::structure::{load_structure, structure_to_string, Vocabulary};

#[derive(Parser)]
#[command(
    name = "hoq",
    version,
    about = "higher-order logic workbench over finite structures"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Emit one JSON document instead of human-readable lines.
    #[arg(long, global = true)]
    json: bool,
    /// Cap on quantifier search spaces (tuples per type).
    #[arg(long, global = true)]
    max_enum: Option<u64>,
    /// Cap on code and count bit lengths.
    #[arg(long, global = true)]
    max_code_bits: Option<u64>,
    /// Cap on the order reducer's target universe.
    #[arg(long, global = true)]
    max_target_universe: Option<u64>,
    /// Worker threads for the equivalence grid (0 = all cores).
    #[arg(long, global = true, default_value_t = 0)]
    jobs: usize,
}

#[derive(Subcommand)]
enum Command {
    /// Type-check a formula and print its fragment report.
    Check(CheckArgs),
    /// Evaluate a formula over a structure.
    Eval(EvalArgs),
    /// Rewrite a formula into a normal form.
    Normalize(NormalizeArgs),
    /// Print the counting report C/N/T/B for a uniform type.
    Count(CountArgs),
    /// Print the canonical code of a symbol's interpretation.
    Encode(EncodeArgs),
    /// Decode a canonical code back into a relation literal.
    Decode(DecodeArgs),
    /// Lower a formula and structure one order.
    Reduce(ReduceArgs),
    /// Compare two formulas over every small structure.
    Equiv(EquivArgs),
    /// Emit one of the generated predicate formulas.
    Gen(GenArgs),
}

#[derive(Args)]
struct CheckArgs {
    /// Formula file.
    formula: PathBuf,
    /// Vocabulary file (a structure file works; only its vocabulary is
    /// read).
    #[arg(long)]
    vocab: Option<PathBuf>,
}

#[derive(Args)]
struct EvalArgs {
    formula: PathBuf,
    structure: PathBuf,
}

#[derive(Args)]
struct NormalizeArgs {
    formula: PathBuf,
    /// Which form to produce.
    #[arg(long, value_parser = ["pnf", "snf", "anf", "dnf", "full"], default_value = "full")]
    form: String,
}

#[derive(Args)]
struct CountArgs {
    /// Uniform type such as "(i,i)" or "((i))".
    #[arg(long = "type")]
    ty: String,
    #[arg(long)]
    n: u64,
}

#[derive(Args)]
struct EncodeArgs {
    structure: PathBuf,
    #[arg(long)]
    symbol: String,
}

#[derive(Args)]
struct DecodeArgs {
    #[arg(long = "type")]
    ty: String,
    #[arg(long)]
    n: u64,
    #[arg(long)]
    bits: String,
}

#[derive(Args)]
struct ReduceArgs {
    formula: PathBuf,
    structure: PathBuf,
    /// Also evaluate both sides and report agreement.
    #[arg(long)]
    check: bool,
}

#[derive(Args)]
struct EquivArgs {
    lhs: PathBuf,
    rhs: PathBuf,
    #[arg(long)]
    vocab: PathBuf,
    #[arg(long, default_value_t = 2)]
    max_n: u64,
}

#[derive(Args)]
struct GenArgs {
    /// One of: plus, lt, lt-tuple, eq, bit, card, overflow, plus-mod,
    /// plus-tuple, const.
    which: String,
    #[arg(long, default_value_t = 1)]
    arity: usize,
    #[arg(long, default_value_t = 2)]
    order: u32,
    /// For card: the bound k.
    #[arg(long, default_value_t = 1)]
    k: u64,
    /// For card: one of le, ge, eq. For const: zero, one, max.
    #[arg(long, default_value = "eq")]
    op: String,
    /// For card: the subject's type.
    #[arg(long = "type", default_value = "(i)")]
    ty: String,
}

enum Failure {
    Usage(String),
    Guard(String),
    Input(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 2,
            Failure::Guard(_) => 3,
            Failure::Input(_) => 4,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::Guard(m) | Failure::Input(m) => m,
        }
    }
}

fn input_err(e: impl std::fmt::Display) -> Failure {
    Failure::Input(e.to_string())
}

fn guard_err(e: impl std::fmt::Display) -> Failure {
    Failure::Guard(e.to_string())
}

fn eval_failure(e: EvalError) -> Failure {
    match e {
        EvalError::SearchSpaceTooLarge { .. } | EvalError::CountOverflow { .. } => guard_err(e),
        other => input_err(other),
    }
}

fn reduce_failure(e: hoq::error::ReduceError) -> Failure {
    use hoq::error::ReduceError;
    match e {
        ReduceError::TargetTooLarge { .. } => guard_err(e),
        ReduceError::Eval(inner) => eval_failure(inner),
        other => input_err(other),
    }
}

fn load_vocab(path: &std::path::Path) -> Result<Vocabulary, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    // Accept either a full structure document or a bare vocabulary map.
    if let Ok((vocab, _)) = hoq::structure::structure_from_str(&text) {
        return Ok(vocab);
    }
    let map: std::collections::BTreeMap<String, String> =
        serde_json::from_str(&text).map_err(input_err)?;
    let mut symbols = Vec::new();
    for (name, ty) in map {
        symbols.push((name, parse_type(&ty).map_err(input_err)?));
    }
    Vocabulary::new(symbols).map_err(input_err)
}

fn checked_formula(path: &std::path::Path, vocab: &Vocabulary) -> Result<Formula, Failure> {
    let f = load_formula(path).map_err(input_err)?;
    hoq::typecheck::typecheck(&f, vocab).map_err(|errs| {
        input_err(
            errs.iter()
                .map(|e| e.to_string())
                .collect::<Vec<_>>()
                .join("; "),
        )
    })?;
    Ok(f)
}

fn run(cli: &Cli, limits: &Limits) -> Result<(), Failure> {
    match &cli.command {
        Command::Check(args) => {
            let vocab = match &args.vocab {
                Some(path) => load_vocab(path)?,
                None => Vocabulary::empty(),
            };
            let f = checked_formula(&args.formula, &vocab)?;
            let report = classify(&f, &vocab);
            if cli.json {
                println!(
                    "{}",
                    serde_json::to_string_pretty(&json!({
                        "command": "check",
                        "formula": print_formula(&f),
                        "report": report,
                    }))
                    .unwrap()
                );
            } else {
                println!("order: {}", report.max_quantified_order);
                println!(
                    "alternation blocks: {} (prenex {})",
                    report.alternation_blocks, report.alternation_blocks_prenex
                );
                println!("leading universal: {}", report.leading_universal);
                println!("max free order: {}", report.max_free_order);
                println!("monadic: {}", report.monadic);
                println!("prenex: {}", report.prenex);
                println!("operator free: {}", report.operator_free);
            }
            Ok(())
        }
        Command::Eval(args) => {
            let (vocab, structure) = load_structure(&args.structure).map_err(input_err)?;
            let f = checked_formula(&args.formula, &vocab)?;
            let (truth, stats) =
                eval(&structure, &Environment::new(), &f, limits).map_err(eval_failure)?;
            if cli.json {
                println!(
                    "{}",
                    serde_json::to_string_pretty(&json!({
                        "command": "eval",
                        "value": truth,
                        "stats": stats,
                    }))
                    .unwrap()
                );
            } else {
                println!("{truth}");
                println!(
                    "stats: {} quantifier expansions, {} fixpoint stages, {} tree nodes",
                    stats.quantifier_expansions, stats.fixpoint_stages, stats.tree_nodes
                );
            }
            Ok(())
        }
        Command::Normalize(args) => {
            let f = load_formula(&args.formula).map_err(input_err)?;
            let renamed = hoq::formula::alpha_rename(&f);
            let r = renamed.max_bound_order().max(1);
            let out = match args.form.as_str() {
                "pnf" => normalize::to_pnf(r, &renamed),
                "snf" => normalize::to_snf(&renamed),
                "anf" => normalize::to_anf(&normalize::to_snf(&renamed)),
                "dnf" => {
                    let prenexed = normalize::to_pnf(r, &renamed);
                    normalize::to_dnf(&prenexed).map_err(input_err)?
                }
                _ => normalize::full_pipeline(&renamed).map_err(input_err)?,
            };
            let report = normalize::report(&f, &out);
            if cli.json {
                println!(
                    "{}",
                    serde_json::to_string_pretty(&json!({
                        "command": "normalize",
                        "form": args.form,
                        "formula": print_formula(&out),
                        "report": report,
                    }))
                    .unwrap()
                );
            } else {
                println!("{}", print_formula(&out));
                println!(
                    "pnf: {} snf: {} anf: {} dnf: {} operator-nf: {}",
                    report.pnf, report.snf, report.anf, report.dnf, report.operator_nf
                );
            }
            Ok(())
        }
        Command::Count(args) => {
            let ty = parse_type(&args.ty).map_err(input_err)?;
            if !ty.is_uniform() {
                return Err(Failure::Input(format!(
                    "type {ty} is not uniform; counts need arity normal form"
                )));
            }
            let report = counts(ty.order(), ty.arity(), args.n, limits).map_err(eval_failure)?;
            if cli.json {
                println!(
                    "{}",
                    serde_json::to_string_pretty(&json!({
                        "command": "count",
                        "r": report.r,
                        "a": report.a,
                        "n": report.n,
                        "C": report.max_cardinality.as_ref().map(|c| c.to_string()),
                        "N": report.relations.to_string(),
                        "T": report.tuples.to_string(),
                        "B": report.code_bits.to_string(),
                        "first_order": report.first_order,
                    }))
                    .unwrap()
                );
            } else {
                println!("{report}");
            }
            Ok(())
        }
        Command::Encode(args) => {
            let (vocab, structure) = load_structure(&args.structure).map_err(input_err)?;
            let value = structure
                .get(&args.symbol)
                .ok_or_else(|| Failure::Input(format!("no symbol {}", args.symbol)))?;
            let _ = vocab;
            let code = encode(value, structure.universe, limits).map_err(input_err)?;
            if cli.json {
                println!(
                    "{}",
                    serde_json::to_string_pretty(&json!({
                        "command": "encode",
                        "symbol": args.symbol,
                        "bits": code.to_string(),
                    }))
                    .unwrap()
                );
            } else {
                println!("{code}");
            }
            Ok(())
        }
        Command::Decode(args) => {
            let ty = parse_type(&args.ty).map_err(input_err)?;
            let code = BitCode::from_str_bits(&args.bits, ty, args.n).map_err(input_err)?;
            let value = decode_with(&code, limits).map_err(input_err)?;
            // Print as the structure-file literal.
            let rendered = serde_json::to_string(&value_literal(&value)).unwrap();
            if cli.json {
                println!(
                    "{}",
                    serde_json::to_string_pretty(&json!({
                        "command": "decode",
                        "value": value_literal(&value),
                    }))
                    .unwrap()
                );
            } else {
                println!("{rendered}");
            }
            Ok(())
        }
        Command::Reduce(args) => {
            let (vocab, structure) = load_structure(&args.structure).map_err(input_err)?;
            let f = checked_formula(&args.formula, &vocab)?;
            let p = reduce::plan(&vocab, &f, structure.universe, limits).map_err(reduce_failure)?;
            let (target, reduced) =
                reduce::reduced_pair(&p, &structure, &f).map_err(reduce_failure)?;
            let agreement = if args.check {
                Some(reduce::check_reduction(&p, &structure, &f, limits).map_err(reduce_failure)?)
            } else {
                None
            };
            if cli.json {
                println!(
                    "{}",
                    serde_json::to_string_pretty(&json!({
                        "command": "reduce",
                        "target_universe": p.target_universe,
                        "formula": print_formula(&reduced),
                        "structure": serde_json::from_str::<serde_json::Value>(
                            &structure_to_string(&p.target, &target)
                        ).unwrap(),
                        "agreement": agreement,
                    }))
                    .unwrap()
                );
            } else {
                println!("{}", print_formula(&reduced));
                println!("{}", structure_to_string(&p.target, &target));
                if let Some(ok) = agreement {
                    println!("agreement: {ok}");
                }
            }
            Ok(())
        }
        Command::Equiv(args) => {
            let vocab = load_vocab(&args.vocab)?;
            let f = checked_formula(&args.lhs, &vocab)?;
            let g = checked_formula(&args.rhs, &vocab)?;
            let verdict = equivalent(&f, &g, &vocab, args.max_n, limits).map_err(eval_failure)?;
            if cli.json {
                let ce = verdict.counterexample.as_ref().map(|ce| {
                    json!({
                        "structure": serde_json::from_str::<serde_json::Value>(
                            &structure_to_string(&vocab, &ce.structure)
                        ).unwrap(),
                        "lhs": ce.lhs,
                        "rhs": ce.rhs,
                    })
                });
                println!(
                    "{}",
                    serde_json::to_string_pretty(&json!({
                        "command": "equiv",
                        "equivalent": verdict.equivalent,
                        "counterexample": ce,
                    }))
                    .unwrap()
                );
            } else {
                println!(
                    "{}",
                    if verdict.equivalent {
                        "equivalent"
                    } else {
                        "inequivalent"
                    }
                );
                if let Some(ce) = &verdict.counterexample {
                    println!("counterexample (lhs={}, rhs={}):", ce.lhs, ce.rhs);
                    println!("{}", structure_to_string(&vocab, &ce.structure));
                }
            }
            Ok(())
        }
        Command::Gen(args) => {
            let formula = match args.which.as_str() {
                "plus" => gen::gen_plus(args.arity, args.order),
                "lt" => gen::gen_lt(args.arity, args.order),
                "lt-tuple" => gen::gen_lt_tuple(args.arity, args.order),
                "eq" => gen::gen_eq(args.arity, args.order),
                "bit" => gen::gen_bit(args.arity, args.order),
                "overflow" => gen::gen_overflow(args.arity, args.order),
                "plus-mod" => gen::gen_plus_mod(args.arity, args.order),
                "plus-tuple" => gen::gen_plus_tuple(args.arity, args.order),
                "card" => {
                    let ty = parse_type(&args.ty).map_err(input_err)?;
                    let op = match args.op.as_str() {
                        "le" => gen::CardOp::AtMost,
                        "ge" => gen::CardOp::AtLeast,
                        "eq" => gen::CardOp::Exactly,
                        other => return Err(Failure::Usage(format!("unknown card op {other}"))),
                    };
                    gen::gen_card(op, args.k, &ty, &hoq::formula::Term::var("X"))
                }
                "const" => {
                    let kind = match args.op.as_str() {
                        "zero" => gen::ConstKind::Zero,
                        "one" => gen::ConstKind::One,
                        "max" => gen::ConstKind::Max,
                        other => return Err(Failure::Usage(format!("unknown const {other}"))),
                    };
                    gen::gen_const(kind, &hoq::formula::Term::var("x"))
                }
                other => return Err(Failure::Usage(format!("unknown generator {other}"))),
            };
            if cli.json {
                println!(
                    "{}",
                    serde_json::to_string_pretty(&json!({
                        "command": "gen",
                        "which": args.which,
                        "formula": print_formula(&formula),
                    }))
                    .unwrap()
                );
            } else {
                println!("{}", print_formula(&formula));
            }
            Ok(())
        }
    }
}

fn value_literal(value: &hoq::relation::RelationValue) -> serde_json::Value {
    match value {
        hoq::relation::RelationValue::Element(e) => json!(e),
        hoq::relation::RelationValue::Set { tuples, .. } => serde_json::Value::Array(
            tuples
                .iter()
                .map(|t| serde_json::Value::Array(t.iter().map(value_literal).collect()))
                .collect(),
        ),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut limits = Limits::from_env();
    if let Some(v) = cli.max_enum {
        limits.max_enum = v;
    }
    if let Some(v) = cli.max_code_bits {
        limits.max_code_bits = v;
    }
    if let Some(v) = cli.max_target_universe {
        limits.max_target_universe = v;
    }
    if cli.jobs > 0 {
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(cli.jobs)
            .build_global();
    }
    match run(&cli, &limits) {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            eprintln!("error: {}", failure.message());
            ExitCode::from(failure.code())
        }
    }
}
