//! `ternalg`: classification, commutator tables, decompositions and
//! structure-constant tools for ternary algebras of cubic matrices.
//!
//! Exit codes: 0 success, 1 a check failed, 2 usage or input error.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use ternalg_core::associativity::{
    check_exact, check_random, classify, AssocRelation, ClassifyParams, RelationVerdict, TotalKind,
    MAX_EXACT_ORDER,
};
use ternalg_core::bimodule::{run_all, LieParams, SigmaForm};
use ternalg_core::brackets::{
    build_table, compare_golden, pauli, span_report, square_ternary_bracket, BracketKind,
    Generator, GoldenTable,
};
use ternalg_core::cubic::{CubicMatrix, SymClass};
use ternalg_core::patterns::{named_product, ContractionPattern};
use ternalg_core::scalars::{Ring, Scalar, DEFAULT_PRIME};
use ternalg_core::structure::TernaryStructure;
use ternalg_core::Status;

#[derive(Parser)]
#[command(
    name = "ternalg",
    version,
    about = "Exact ternary algebras of cubic matrices"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Pretty,
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    First,
    Second,
}

impl From<Kind> for TotalKind {
    fn from(k: Kind) -> Self {
        match k {
            Kind::First => TotalKind::First,
            Kind::Second => TotalKind::Second,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Bracket {
    J,
    J2,
    Anti,
}

impl From<Bracket> for BracketKind {
    fn from(b: Bracket) -> Self {
        match b {
            Bracket::J => BracketKind::J,
            Bracket::J2 => BracketKind::J2,
            Bracket::Anti => BracketKind::Anti,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Classify all canonical contraction patterns by total associativity.
    Classify {
        #[arg(long, value_enum)]
        kind: Option<Kind>,
        /// Order of the exact basis check.
        #[arg(long, default_value_t = 2)]
        order: usize,
        /// Orders of the randomized confirmation.
        #[arg(long, value_delimiter = ',', default_value = "3,4")]
        confirm: Vec<usize>,
        #[arg(long, default_value_t = 20)]
        trials: u32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Build a commutator table of the order-2 generators.
    Table {
        #[arg(long, value_enum, default_value = "j")]
        bracket: Bracket,
        /// Compare against a golden table file instead of printing the table.
        #[arg(long)]
        golden: Option<PathBuf>,
        /// Print the span report instead of the table.
        #[arg(long)]
        span: bool,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Check the associativity relations of one pattern.
    CheckAssoc {
        /// Pattern text or a named product (T1..T4, CIRC).
        #[arg(long)]
        pattern: String,
        #[arg(long, default_value_t = 2)]
        order: usize,
        /// Also decide total associativity of this kind; exit 1 if it fails.
        #[arg(long, value_enum)]
        kind: Option<Kind>,
        #[arg(long, default_value_t = 20)]
        trials: u32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Split a cubic matrix into its j-skew, j²-skew and cyclic parts.
    Decompose {
        #[arg(long)]
        input: PathBuf,
        /// Directory for the component files; defaults to the input's.
        #[arg(long)]
        out_dir: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Emit the structure constants of a pattern product.
    Structure {
        #[arg(long)]
        pattern: String,
        #[arg(long, default_value_t = 2)]
        order: usize,
        /// Emit the constants of this bracket of the product instead.
        #[arg(long, value_enum)]
        bracket: Option<Bracket>,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Randomized checks of the rectangular-matrix algebra and its Lie algebra.
    Lie {
        #[arg(long, default_value_t = 2)]
        m: usize,
        #[arg(long, default_value_t = 3)]
        n: usize,
        #[arg(long, default_value_t = 200)]
        samples: u32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// The ternary bracket of Pauli matrices.
    Pauli {
        #[arg(long, value_enum, default_value = "j")]
        bracket: Bracket,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
}

/// Outcome of a command: what to print and whether its checks passed.
struct Output {
    text: String,
    passed: bool,
}

impl Output {
    fn ok(text: String) -> Self {
        Output { text, passed: true }
    }
}

#[derive(Debug)]
struct UsageError(String);

impl<E: std::fmt::Display> From<E> for UsageError {
    fn from(e: E) -> Self {
        UsageError(e.to_string())
    }
}

type Res = Result<Output, UsageError>;

fn to_json<T: Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("serializable") + "\n"
}

fn no_csv(format: Format, what: &str) -> Result<(), UsageError> {
    if format == Format::Csv {
        return Err(UsageError(format!(
            "csv output is not available for {what}"
        )));
    }
    Ok(())
}

fn parse_pattern(text: &str) -> Result<ContractionPattern, UsageError> {
    named_product(text)
        .or_else(|_| text.parse::<ContractionPattern>())
        .map_err(|e| UsageError(format!("invalid pattern {text:?}: {e}")))
}

fn status_name(s: Status) -> &'static str {
    match s {
        Status::HoldsExact => "holds_exact",
        Status::HoldsProbable => "holds_probable",
        Status::Fails => "fails",
    }
}

fn run_classify(
    kind: Option<Kind>,
    order: usize,
    confirm: Vec<usize>,
    trials: u32,
    seed: u64,
    format: Format,
) -> Res {
    eprintln!("seed: {seed}");
    let params = ClassifyParams {
        n_exact: order,
        confirm,
        trials,
        seed,
        ..ClassifyParams::default()
    };
    let report = classify(&params)?;
    let passed = report.inconsistencies.is_empty();
    let mut value = serde_json::to_value(&report)?;
    let obj = value.as_object_mut().expect("report is an object");
    let drop: &[&str] = match kind {
        Some(Kind::First) => &[
            "second_kind_cross",
            "second_kind_self",
            "second_kind_theorem_shape",
        ],
        Some(Kind::Second) => &["first_kind"],
        None => &[],
    };
    for key in drop {
        obj.remove(*key);
    }
    let lists = [
        "first_kind",
        "second_kind_cross",
        "second_kind_self",
        "second_kind_theorem_shape",
    ];
    let text = match format {
        Format::Json => to_json(&value),
        Format::Csv => {
            let mut out = String::from("group,pattern\n");
            for key in lists {
                for p in obj.get(key).and_then(Value::as_array).into_iter().flatten() {
                    out.push_str(&format!("{key},{}\n", p.as_str().unwrap_or_default()));
                }
            }
            out
        }
        Format::Pretty => {
            let mut out = format!("patterns: {}\n", report.total);
            for key in lists {
                if let Some(ps) = obj.get(key).and_then(Value::as_array) {
                    out.push_str(&format!("{key}: {}\n", ps.len()));
                    for p in ps {
                        out.push_str(&format!("  {}\n", p.as_str().unwrap_or_default()));
                    }
                }
            }
            out.push_str(&format!(
                "chain failures: {}, inconsistencies: {}\n",
                report.chain_failures.len(),
                report.inconsistencies.len()
            ));
            out
        }
    };
    Ok(Output { text, passed })
}

fn run_table(bracket: Bracket, golden: Option<PathBuf>, span: bool, format: Format) -> Res {
    let table = build_table(bracket.into());
    if let Some(path) = golden {
        no_csv(format, "golden comparison")?;
        let text = fs::read_to_string(&path)
            .map_err(|e| UsageError(format!("{}: {e}", path.display())))?;
        let golden = GoldenTable::from_json(&text)?;
        let diff = compare_golden(&table, &golden)?;
        let text = match format {
            Format::Pretty => {
                let mut out = format!("{} rows, {} mismatches\n", diff.rows, diff.mismatches.len());
                for m in &diff.mismatches {
                    out.push_str(&format!(
                        "  row {} {:?}: expected {}, computed {}\n",
                        m.row,
                        m.args.map(|g| g.name()),
                        json!(m.expected),
                        json!(m.computed)
                    ));
                }
                out
            }
            _ => to_json(&diff),
        };
        return Ok(Output {
            text,
            passed: diff.is_clean(),
        });
    }
    if span {
        no_csv(format, "span reports")?;
        let report = span_report(&table);
        let text = match format {
            Format::Pretty => format!(
                "{} bracket, claimed span {:?}: {} zero, {} proportional, {} mixed, {} outside\n",
                report.bracket,
                report.claimed.iter().map(|g| g.name()).collect::<Vec<_>>(),
                report.zero,
                report.proportional,
                report.mixed,
                report.outside
            ),
            _ => to_json(&report),
        };
        return Ok(Output {
            text,
            passed: report.within_span(),
        });
    }
    let text = match format {
        Format::Json => to_json(&table.to_json()),
        Format::Csv => table.to_csv(),
        Format::Pretty => {
            let mut out = String::new();
            for (args, coords) in &table.entries {
                let terms: Vec<String> = Generator::ALL
                    .iter()
                    .zip(coords)
                    .filter(|(_, v)| !v.is_zero())
                    .map(|(g, v)| format!("({v})·{g}"))
                    .collect();
                let rhs = if terms.is_empty() {
                    "0".to_string()
                } else {
                    terms.join(" + ")
                };
                out.push_str(&format!(
                    "[{}, {}, {}] = {rhs}\n",
                    args[0], args[1], args[2]
                ));
            }
            out
        }
    };
    Ok(Output::ok(text))
}

fn run_check_assoc(
    pattern: &str,
    order: usize,
    kind: Option<Kind>,
    trials: u32,
    seed: u64,
    format: Format,
) -> Res {
    no_csv(format, "check-assoc")?;
    let p = parse_pattern(pattern)?;
    let exact = order <= MAX_EXACT_ORDER;
    if !exact {
        eprintln!("seed: {seed}");
    }
    let relations: Vec<RelationVerdict> = AssocRelation::ALL
        .into_iter()
        .map(|relation| {
            let verdict = if exact {
                check_exact(&p, relation, order)?
            } else {
                check_random(&p, relation, order, trials, seed)?
            };
            Ok::<_, UsageError>(RelationVerdict { relation, verdict })
        })
        .collect::<Result<_, _>>()?;
    let holds = |r: AssocRelation| {
        relations
            .iter()
            .any(|v| v.relation == r && v.verdict.holds())
    };
    let first = TotalKind::First.holds(holds);
    let second = TotalKind::Second.holds(holds);
    let passed = match kind {
        Some(Kind::First) => first,
        Some(Kind::Second) => second,
        None => true,
    };
    let text = match format {
        Format::Pretty => {
            let mut out = format!(
                "{p} at order {order} ({})\n",
                if exact { "exact" } else { "randomized" }
            );
            for v in &relations {
                out.push_str(&format!(
                    "  {}: {}\n",
                    v.relation,
                    status_name(v.verdict.status)
                ));
            }
            out.push_str(&format!(
                "  total first kind: {first}\n  total second kind: {second}\n"
            ));
            out
        }
        _ => to_json(&json!({
            "pattern": p.to_string(),
            "order": order,
            "method": if exact { "exact" } else { "random" },
            "seed": if exact { None } else { Some(seed) },
            "modulus": if exact { None } else { Some(DEFAULT_PRIME) },
            "relations": relations,
            "total_first_kind": first,
            "total_second_kind": second,
        })),
    };
    Ok(Output { text, passed })
}

const COMPONENTS: [SymClass; 3] = [SymClass::JSkew, SymClass::J2Skew, SymClass::CyclicSymmetric];

fn run_decompose(input: &Path, out_dir: Option<PathBuf>, format: Format) -> Res {
    no_csv(format, "decompose")?;
    let text =
        fs::read_to_string(input).map_err(|e| UsageError(format!("{}: {e}", input.display())))?;
    let a: CubicMatrix =
        serde_json::from_str(&text).map_err(|e| UsageError(format!("{}: {e}", input.display())))?;
    let n = a.n();
    let dir = out_dir.unwrap_or_else(|| input.parent().map(Path::to_path_buf).unwrap_or_default());
    let stem = input
        .file_stem()
        .and_then(|s| s.to_str())
        .unwrap_or("matrix");
    fs::create_dir_all(&dir).map_err(|e| UsageError(format!("{}: {e}", dir.display())))?;

    let mut parts = Vec::new();
    let mut sum = CubicMatrix::zeros(n);
    for class in COMPONENTS {
        let part = class.project(&a);
        sum = sum.add(&part)?;
        let path = dir.join(format!("{stem}.{}.json", class.name()));
        fs::write(&path, to_json(&part))
            .map_err(|e| UsageError(format!("{}: {e}", path.display())))?;
        parts.push(json!({
            "class": class.name(),
            "file": path.display().to_string(),
            "nonzero_entries": part.nonzero_entries().count(),
            "dimension": class.dimension(n),
        }));
    }
    let complete = sum == a;
    let dims: Vec<Value> = SymClass::SUMMANDS
        .iter()
        .map(|c| json!({ "class": c.name(), "dimension": c.dimension(n) }))
        .collect();
    let text = match format {
        Format::Pretty => {
            let mut out = format!("order {n}, total dimension {}\n", n * n * n);
            for p in &parts {
                out.push_str(&format!(
                    "  {}: {} nonzero entries -> {}\n",
                    p["class"].as_str().unwrap_or_default(),
                    p["nonzero_entries"],
                    p["file"].as_str().unwrap_or_default()
                ));
            }
            for d in &dims {
                out.push_str(&format!(
                    "  dim {} = {}\n",
                    d["class"].as_str().unwrap_or_default(),
                    d["dimension"]
                ));
            }
            out.push_str(&format!("  components sum to input: {complete}\n"));
            out
        }
        _ => to_json(&json!({
            "n": n,
            "components": parts,
            "dimensions": dims,
            "sum_equals_input": complete,
        })),
    };
    Ok(Output {
        text,
        passed: complete,
    })
}

fn run_structure(pattern: &str, order: usize, bracket: Option<Bracket>, format: Format) -> Res {
    no_csv(format, "structure")?;
    let p = parse_pattern(pattern)?;
    if order == 0 {
        return Err(UsageError("order must be positive".into()));
    }
    let mut s = TernaryStructure::from_pattern(&p, order)?;
    if let Some(b) = bracket {
        s = s.bracket(b.into());
    }
    let text = match format {
        Format::Pretty => {
            let mut out = format!("dimension {}\n", s.dim());
            for (d, a, b, c, v) in s.nonzero_constants() {
                out.push_str(&format!(
                    "  C^{}_({},{},{}) = {v}\n",
                    d + 1,
                    a + 1,
                    b + 1,
                    c + 1
                ));
            }
            out
        }
        _ => to_json(&s),
    };
    Ok(Output::ok(text))
}

fn run_lie(m: usize, n: usize, samples: u32, seed: u64, format: Format) -> Res {
    no_csv(format, "lie")?;
    eprintln!("seed: {seed}");
    let params = LieParams {
        m,
        n,
        samples,
        seed,
    };
    let outcomes = run_all(&params)?;
    let passed = outcomes
        .iter()
        .filter(|o| o.sigma == SigmaForm::Symmetric)
        .all(|o| o.verdict.holds());
    let text = match format {
        Format::Pretty => {
            let mut out = format!("m = {m}, n = {n}, {samples} samples, seed {seed}\n");
            for o in &outcomes {
                let detail = o
                    .verdict
                    .witness
                    .as_ref()
                    .map(|w| format!(" ({} at sample {})", w.relation, w.sample))
                    .unwrap_or_default();
                out.push_str(&format!(
                    "  {:<14} sigma={:<9} {}{detail}\n",
                    o.check.name(),
                    o.sigma.name(),
                    status_name(o.verdict.status)
                ));
            }
            out
        }
        _ => to_json(&json!({ "params": params, "checks": outcomes })),
    };
    Ok(Output { text, passed })
}

fn run_pauli(bracket: Bracket, format: Format) -> Res {
    no_csv(format, "pauli")?;
    let kind: BracketKind = bracket.into();
    let i = Scalar::i();
    let [s1, s2, _] = pauli();
    let (is1, is2) = (s1.scale(&i), s2.scale(&i));
    let two = Scalar::from_i64(2);
    let cases = [
        ("[i s1, i s2, i s1]", [&is1, &is2, &is1], is2.scale(&two)),
        ("[i s2, i s1, i s2]", [&is2, &is1, &is2], is1.scale(&two)),
    ];
    let mut passed = true;
    let mut rows = Vec::new();
    for (label, [x, y, z], expected) in cases {
        let got = square_ternary_bracket(kind, x, y, z)?;
        let matches = got == expected;
        if kind == BracketKind::J {
            passed &= matches;
        }
        rows.push(json!({ "bracket": label, "result": got, "equals_2_i_sigma": matches }));
    }
    let text = match format {
        Format::Pretty => rows
            .iter()
            .map(|r| {
                format!(
                    "{} ({kind}): equals 2·iσ: {}\n",
                    r["bracket"].as_str().unwrap_or_default(),
                    r["equals_2_i_sigma"]
                )
            })
            .collect(),
        _ => to_json(&json!({ "kind": kind, "cases": rows })),
    };
    Ok(Output { text, passed })
}

fn configure_threads() -> Result<(), UsageError> {
    if let Ok(v) = std::env::var("TERNALG_THREADS") {
        let n: usize = v.parse().map_err(|_| {
            UsageError(format!(
                "TERNALG_THREADS must be a positive integer, got {v:?}"
            ))
        })?;
        if n == 0 {
            return Err(UsageError("TERNALG_THREADS must be positive".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()?;
    }
    Ok(())
}

fn run(cli: Cli) -> Res {
    configure_threads()?;
    match cli.command {
        Command::Classify {
            kind,
            order,
            confirm,
            trials,
            seed,
            format,
        } => run_classify(kind, order, confirm, trials, seed, format),
        Command::Table {
            bracket,
            golden,
            span,
            format,
        } => run_table(bracket, golden, span, format),
        Command::CheckAssoc {
            pattern,
            order,
            kind,
            trials,
            seed,
            format,
        } => run_check_assoc(&pattern, order, kind, trials, seed, format),
        Command::Decompose {
            input,
            out_dir,
            format,
        } => run_decompose(&input, out_dir, format),
        Command::Structure {
            pattern,
            order,
            bracket,
            format,
        } => run_structure(&pattern, order, bracket, format),
        Command::Lie {
            m,
            n,
            samples,
            seed,
            format,
        } => run_lie(m, n, samples, seed, format),
        Command::Pauli { bracket, format } => run_pauli(bracket, format),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(out) => {
            print!("{}", out.text);
            if out.passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(UsageError(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
