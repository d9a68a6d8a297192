//! `taquin`: counting tableaux, evaluating symmetric group characters,
//! tracing jeu de taquin slides, and deriving content-evaluation formulas
//! verified against exhaustive oracles.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use num::BigInt;

use taquin_core::characters::{chi_mn, chi_via_skew, chi_via_skew_with};
use taquin_core::derivation::{
    skew_count_from_expression, verify_formula, DerivationEngine, FormulaRecord, FormulaTarget,
    SkewFormula,
};
use taquin_core::forest;
use taquin_core::jdt::{bijection_forward, Filling};
use taquin_core::partition::{Cell, Partition, SkewShape};
use taquin_core::selftest;
use taquin_core::tableau::{SkewTableau, StandardTableau};
use taquin_core::{count_skew, count_standard};

#[derive(Parser)]
#[command(
    name = "taquin",
    version,
    about = "Young tableaux, jeu de taquin and character formulas"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Tsv,
    Json,
    Dot,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum CharMethod {
    /// Ribbon-rule evaluation.
    Mn,
    /// Reduction to enumerated skew-tableau counts.
    Skew,
    /// Reduction to derived content-evaluation formulas.
    Formula,
}

#[derive(Subcommand)]
enum Command {
    /// Number of standard tableaux of a shape.
    CountStandard {
        #[arg(long)]
        shape: String,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Number of skew tableaux of `outer/inner`.
    CountSkew {
        #[arg(long)]
        shape: String,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Irreducible character value for a shape and a class.
    Char {
        #[arg(long)]
        shape: String,
        #[arg(long)]
        class: String,
        #[arg(long, value_enum, default_value = "mn")]
        method: CharMethod,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Full character table of the symmetric group of degree n.
    CharTable {
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value = "tsv")]
        format: Format,
    },
    /// Slide entries out of a tableau, printing the steps.
    Jdt {
        /// Optional shape cross-check for the tableau file.
        #[arg(long)]
        shape: Option<String>,
        /// Tableau file: rows bottom first, separated by `/` or newlines.
        #[arg(long)]
        tableau: std::path::PathBuf,
        /// Entries to slide out, in order, e.g. `12,5`.
        #[arg(long)]
        remove: String,
        /// Print every intermediate tableau and slide path.
        #[arg(long)]
        trace: bool,
    },
    /// The trace forest of a (standard or skew) tableau.
    TraceForest {
        /// Shape of the tableau; required when it is skew, e.g. `5,3,3,2/2,1`.
        #[arg(long)]
        shape: Option<String>,
        #[arg(long)]
        tableau: std::path::PathBuf,
        /// Shortcut for `--format dot`.
        #[arg(long)]
        dot: bool,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Derive a normalized count or character formula.
    Derive {
        /// Row length for the chained scheme, e.g. `--hook 4`.
        #[arg(long, conflicts_with = "mu")]
        hook: Option<usize>,
        /// Inner shape, derived through conjugation and growth relations.
        #[arg(long)]
        mu: Option<String>,
        /// Emit the character column for the class instead of the count.
        #[arg(long, requires = "mu")]
        char: bool,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Check a derived formula against the oracle on all shapes up to a
    /// size; nonzero exit on any mismatch.
    Verify {
        #[arg(long)]
        mu: String,
        #[arg(long)]
        nmax: usize,
        /// Verify the character column instead of the skew count.
        #[arg(long)]
        char: bool,
        #[arg(long, value_enum, default_value = "tsv")]
        format: Format,
    },
    /// Run the full acceptance suite; nonzero exit on any failure.
    Selftest {
        #[arg(long, default_value = "8060330")]
        seed: u64,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

fn run(command: Command) -> Result<ExitCode> {
    match command {
        Command::CountStandard { shape, format } => {
            let shape: Partition = shape.parse()?;
            emit_count(&shape.to_string(), count_standard(&shape), format);
            Ok(ExitCode::SUCCESS)
        }
        Command::CountSkew { shape, format } => {
            let shape: SkewShape = shape.parse()?;
            emit_count(&shape.to_string(), count_skew(&shape), format);
            Ok(ExitCode::SUCCESS)
        }
        Command::Char {
            shape,
            class,
            method,
            format,
        } => {
            let shape: Partition = shape.parse()?;
            let class: Partition = class.parse()?;
            let value = char_value(&shape, &class, method)?;
            match format {
                Format::Json => println!(
                    "{}",
                    serde_json::json!({
                        "schema": "taquin/char/1",
                        "shape": shape.to_string(),
                        "class": class.to_string(),
                        "value": value.to_string(),
                    })
                ),
                _ => println!("{value}"),
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::CharTable { n, format } => {
            let table = char_table(n)?;
            match format {
                Format::Json => println!("{}", char_table_json(n, &table)),
                _ => print!("{}", char_table_tsv(n, &table)),
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Jdt {
            shape,
            tableau,
            remove,
            trace,
        } => {
            let t = read_standard_tableau(&tableau, shape.as_deref())?;
            let removals = parse_entry_list(&remove)?;
            run_jdt(&t, &removals, trace)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::TraceForest {
            shape,
            tableau,
            dot,
            format,
        } => {
            let filling = read_filling(&tableau, shape.as_deref())?;
            let forest = forest::build(&filling);
            if dot || format == Format::Dot {
                print!("{}", forest.to_dot(&filling));
            } else {
                println!("roots: {}", join_cells(forest.roots()));
                for &c in forest.cells() {
                    if let Some(p) = forest.parent(c) {
                        println!("{c} -> {p}");
                    }
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Derive {
            hook,
            mu,
            char,
            format,
        } => run_derive(hook, mu, char, format),
        Command::Verify {
            mu,
            nmax,
            char,
            format,
        } => run_verify(&mu, nmax, char, format),
        Command::Selftest { seed } => {
            let outcomes = selftest::run_all(seed);
            let mut all_ok = true;
            for o in &outcomes {
                println!(
                    "criterion {:>2} ({}): {} — {}",
                    o.id,
                    o.name,
                    if o.passed { "PASS" } else { "FAIL" },
                    o.detail
                );
                all_ok &= o.passed;
            }
            Ok(if all_ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            })
        }
    }
}

fn emit_count(shape: &str, count: BigInt, format: Format) {
    match format {
        Format::Json => println!(
            "{}",
            serde_json::json!({
                "schema": "taquin/count/1",
                "shape": shape,
                "count": count.to_string(),
            })
        ),
        _ => println!("{count}"),
    }
}

fn char_value(shape: &Partition, class: &Partition, method: CharMethod) -> Result<BigInt> {
    match method {
        CharMethod::Mn => Ok(chi_mn(shape, class)?),
        CharMethod::Skew => {
            let mu = strip_trailing_ones(class)?;
            Ok(chi_via_skew(shape, &mu)?)
        }
        CharMethod::Formula => {
            let mu = strip_trailing_ones(class)?;
            let mut engine = DerivationEngine::new();
            let family = engine.derive_skew_family(mu.size())?;
            let value = chi_via_skew_with(shape, &mu, |lam, nu| {
                skew_count_from_expression(&family[nu].expression, lam, nu.size())
            })?;
            Ok(value)
        }
    }
}

/// Splits a padded class `(mu, 1^(n-k))` into its non-trivial prefix; the
/// skew and formula methods reduce over the trailing ones.
fn strip_trailing_ones(class: &Partition) -> Result<Partition> {
    let parts = class.parts();
    let ones = parts.iter().rev().take_while(|&&p| p == 1).count();
    if ones == 0 {
        bail!("class {class} has no trailing 1 to reduce over; use --method mn");
    }
    Ok(Partition::new(parts[..parts.len() - ones].to_vec())?)
}

fn char_table(n: usize) -> Result<BTreeMap<(Partition, Partition), BigInt>> {
    let shapes = Partition::all_of(n);
    let mut table = BTreeMap::new();
    for lam in &shapes {
        for mu in &shapes {
            table.insert((lam.clone(), mu.clone()), chi_mn(lam, mu)?);
        }
    }
    Ok(table)
}

fn char_table_tsv(n: usize, table: &BTreeMap<(Partition, Partition), BigInt>) -> String {
    let shapes = Partition::all_of(n);
    let mut out = String::from("lambda\\mu");
    for mu in &shapes {
        let _ = write!(out, "\t{mu}");
    }
    out.push('\n');
    for lam in &shapes {
        let _ = write!(out, "{lam}");
        for mu in &shapes {
            let _ = write!(out, "\t{}", table[&(lam.clone(), mu.clone())]);
        }
        out.push('\n');
    }
    out
}

fn char_table_json(n: usize, table: &BTreeMap<(Partition, Partition), BigInt>) -> String {
    let shapes = Partition::all_of(n);
    let rows: Vec<serde_json::Value> = shapes
        .iter()
        .map(|lam| {
            serde_json::json!({
                "shape": lam.to_string(),
                "values": shapes
                    .iter()
                    .map(|mu| table[&(lam.clone(), mu.clone())].to_string())
                    .collect::<Vec<_>>(),
            })
        })
        .collect();
    serde_json::json!({
        "schema": "taquin/char-table/1",
        "n": n,
        "classes": shapes.iter().map(Partition::to_string).collect::<Vec<_>>(),
        "rows": rows,
    })
    .to_string()
}

fn parse_entry_list(s: &str) -> Result<Vec<u32>> {
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<u32>()
                .with_context(|| format!("bad entry {t:?}"))
        })
        .collect()
}

fn read_rows(path: &std::path::Path) -> Result<String> {
    let raw = std::fs::read_to_string(path)
        .with_context(|| format!("cannot read tableau file {}", path.display()))?;
    let raw = raw.trim();
    Ok(if raw.contains('/') {
        raw.to_string()
    } else {
        raw.lines().collect::<Vec<_>>().join(" / ")
    })
}

fn read_standard_tableau(path: &std::path::Path, shape: Option<&str>) -> Result<StandardTableau> {
    let rows = read_rows(path)?;
    let t = StandardTableau::parse(&rows)?;
    if let Some(shape) = shape {
        let shape: Partition = shape.parse()?;
        if t.shape() != &shape {
            bail!("tableau has shape {}, expected {shape}", t.shape());
        }
    }
    Ok(t)
}

fn read_filling(path: &std::path::Path, shape: Option<&str>) -> Result<Filling> {
    let rows = read_rows(path)?;
    match shape {
        Some(shape) => {
            let shape: SkewShape = shape.parse()?;
            if shape.inner.is_empty() {
                let t = StandardTableau::parse(&rows)?;
                if t.shape() != &shape.outer {
                    bail!("tableau has shape {}, expected {}", t.shape(), shape.outer);
                }
                Ok(Filling::from_standard(&t))
            } else {
                Ok(Filling::from_skew(&SkewTableau::parse(shape, &rows)?))
            }
        }
        None => Ok(Filling::from_standard(&StandardTableau::parse(&rows)?)),
    }
}

fn join_cells(cells: &[Cell]) -> String {
    cells
        .iter()
        .map(Cell::to_string)
        .collect::<Vec<_>>()
        .join(" ")
}

fn run_jdt(t: &StandardTableau, removals: &[u32], trace: bool) -> Result<()> {
    let mut filling = Filling::from_standard(t);
    println!("start: {filling}");
    let mut exits = Vec::new();
    for &entry in removals {
        let path = filling
            .in_slide(entry)
            .with_context(|| format!("sliding entry {entry}"))?;
        let exit = *path.last().ok_or_else(|| anyhow!("empty slide path"))?;
        if trace {
            println!("slide {entry}: path {}", join_cells(&path));
            println!("  {filling}");
        }
        filling.take(exit);
        exits.push(exit);
    }
    let img = bijection_forward(t, removals)?;
    println!("skew shape: {}", img.skew.shape());
    println!("skew tableau: {}", img.skew);
    println!("exit order: {}", img.exit_order);
    println!("exit cells: {}", join_cells(&exits));
    Ok(())
}

fn describe_family_routes(family: &BTreeMap<Partition, SkewFormula>, up_to: usize) -> String {
    family
        .values()
        .filter(|f| f.mu.size() <= up_to)
        .map(|f| format!("  {}: {}", f.mu, f.route))
        .collect::<Vec<_>>()
        .join("\n")
}

fn record_json(record: &FormulaRecord, inductive: Option<serde_json::Value>) -> serde_json::Value {
    let (kind, mu) = match &record.target {
        FormulaTarget::SkewCount { mu } => ("skew-count", mu),
        FormulaTarget::CharacterColumn { mu } => ("character-column", mu),
    };
    let mut v = serde_json::json!({
        "schema": "taquin/derive/1",
        "target": kind,
        "mu": mu.to_string(),
        "normalization": "expression = (n)_k * target / f^lambda",
        "expression": record.expression.to_json(),
    });
    if let Some(inductive) = inductive {
        v["inductive_form"] = inductive;
    }
    v
}

fn run_derive(
    hook: Option<usize>,
    mu: Option<String>,
    char_col: bool,
    format: Format,
) -> Result<ExitCode> {
    let mut engine = DerivationEngine::new();
    match (hook, mu) {
        (Some(k), None) => {
            let g = engine.derive_hook(k)?;
            let record = FormulaRecord {
                target: FormulaTarget::SkewCount { mu: g.mu.clone() },
                expression: g.closed_form.clone(),
            };
            match format {
                Format::Json => {
                    println!("{}", record_json(&record, Some(g.inductive_form.to_json())))
                }
                _ => {
                    println!("target: (n)_{k} f^(lambda/{}) / f^lambda", g.mu);
                    println!("expression: {}", g.closed_form);
                    println!("inductive form: {}", g.inductive_form);
                    println!("serialized: {}", g.closed_form.to_json());
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        (None, Some(mu)) => {
            let mu: Partition = mu.parse()?;
            if mu.is_empty() {
                bail!("--mu must be a nonempty shape");
            }
            let family = engine.derive_skew_family(mu.size())?;
            let record = if char_col {
                engine.character_formula(&mu)?
            } else {
                FormulaRecord {
                    target: FormulaTarget::SkewCount { mu: mu.clone() },
                    expression: family[&mu].expression.clone(),
                }
            };
            match format {
                Format::Json => println!("{}", record_json(&record, None)),
                _ => {
                    let k = mu.size();
                    match &record.target {
                        FormulaTarget::SkewCount { .. } => {
                            println!("target: (n)_{k} f^(lambda/{mu}) / f^lambda")
                        }
                        FormulaTarget::CharacterColumn { .. } => {
                            println!("target: (n)_{k} chi^lambda_({mu},1^(n-{k})) / f^lambda")
                        }
                    }
                    println!("expression: {}", record.expression);
                    println!("serialized: {}", record.expression.to_json());
                    println!("derivation routes:");
                    println!("{}", describe_family_routes(&family, k));
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        _ => bail!("pass exactly one of --hook K or --mu SHAPE"),
    }
}

fn run_verify(mu: &str, nmax: usize, char_col: bool, format: Format) -> Result<ExitCode> {
    let mu: Partition = mu.parse()?;
    if nmax < mu.size() {
        bail!("--nmax must be at least |mu| = {}", mu.size());
    }
    let mut engine = DerivationEngine::new();
    let record = if char_col {
        engine.character_formula(&mu)?
    } else {
        engine.skew_formula(&mu)?
    };
    let report = verify_formula(&record, nmax);
    match format {
        Format::Json => {
            let rows: Vec<serde_json::Value> = report
                .rows
                .iter()
                .map(|r| {
                    serde_json::json!({
                        "lambda": r.lambda.to_string(),
                        "formula_value": r.formula_value.to_string(),
                        "oracle": r.oracle.to_string(),
                        "ok": r.ok,
                    })
                })
                .collect();
            println!(
                "{}",
                serde_json::json!({
                    "schema": "taquin/verify/1",
                    "mu": mu.to_string(),
                    "target": if char_col { "character-column" } else { "skew-count" },
                    "nmax": nmax,
                    "rows": rows,
                    "mismatches": report.mismatches().len(),
                })
            );
        }
        _ => {
            println!("lambda\tformula_value\toracle\tok");
            for r in &report.rows {
                println!("{}\t{}\t{}\t{}", r.lambda, r.formula_value, r.oracle, r.ok);
            }
        }
    }
    Ok(if report.all_ok() {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    })
}
