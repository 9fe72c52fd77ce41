use std::fmt::Display;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use psl2max::arith;
use psl2max::classifier::{classify, theorem_fixture, Fixture, GroupSpec, MaxSubgroupDescriptor, OuterSpec, Theorem};
use psl2max::oracle::{self, Budgets, Level, Report};
use serde_json::json;

const EXIT_FAIL: u8 = 1;
const EXIT_INVALID: u8 = 2;
const EXIT_BUDGET: u8 = 3;

#[derive(Parser)]
#[command(name = "psl2max", version, about = "Maximal subgroups of PSL(2,q) ≤ G ≤ PΓL(2,q)")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Tsv,
}

#[derive(Clone, Copy, ValueEnum)]
enum LevelArg {
    Orders,
    Maximality,
    Completeness,
}

impl From<LevelArg> for Level {
    fn from(l: LevelArg) -> Level {
        match l {
            LevelArg::Orders => Level::Orders,
            LevelArg::Maximality => Level::Maximality,
            LevelArg::Completeness => Level::Completeness,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Print the maximal subgroups of G = T.H not containing T.
    Classify {
        #[arg(long)]
        q: u64,
        /// PSL, PGL, PSigmaL, PGammaL, M(s), or generators "i,j;i,j".
        #[arg(long, default_value = "PSL")]
        group: String,
        #[arg(long, value_enum, default_value = "tsv")]
        format: Format,
    },
    /// Check the classification against explicitly built subgroups.
    Verify {
        #[arg(long)]
        q: u64,
        /// A group spec as for `classify`, or `all` for every H ≤ Out(T).
        #[arg(long, default_value = "PSL")]
        group: String,
        #[arg(long, value_enum, default_value = "orders")]
        level: LevelArg,
        /// Element budget for group closures (overrides PSL2MAX_BUDGET).
        #[arg(long)]
        budget: Option<usize>,
        /// Largest |G| for which the full subgroup lattice is enumerated.
        #[arg(long)]
        lattice_budget: Option<usize>,
        /// Write the JSON report here as well as to stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print a transcribed theorem list over a range of q.
    Table {
        /// Thm2.1, Thm2.2, Thm3.5, Thm1.2, Thm1.3, Thm1.4, Table1 or Cor1.2.
        #[arg(long)]
        theorem: String,
        /// Inclusive range A..B.
        #[arg(long)]
        q_range: String,
        #[arg(long, value_enum, default_value = "tsv")]
        format: Format,
    },
}

fn invalid(msg: impl Display) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(EXIT_INVALID)
}

fn parse_group(q: u64, spec: &str) -> Result<OuterSpec, String> {
    let g: GroupSpec = spec.parse().map_err(|e| format!("{e}"))?;
    OuterSpec::from_group_spec(q, &g).map_err(|e| e.to_string())
}

fn tsv_field(s: Option<&str>) -> &str {
    s.unwrap_or("-")
}

fn print_descriptors(rows: &[MaxSubgroupDescriptor], format: Format) {
    match format {
        Format::Json => println!("{}", serde_json::to_string_pretty(rows).expect("descriptors serialize")),
        Format::Tsv => {
            println!("family\tstructure\tm0_order\tm_order\tclasses\tnovelty");
            for d in rows {
                println!(
                    "{}\t{}\t{}\t{}\t{}\t{}",
                    d.family,
                    tsv_field(d.structure.as_deref()),
                    d.m0_order,
                    d.m_order,
                    d.class_count,
                    d.novelty
                );
            }
        }
    }
}

fn cmd_classify(q: u64, group: &str, format: Format) -> ExitCode {
    let h = match parse_group(q, group) {
        Ok(h) => h,
        Err(e) => return invalid(e),
    };
    match classify(q, &h) {
        Ok(rows) => {
            print_descriptors(&rows, format);
            ExitCode::SUCCESS
        }
        Err(e) => invalid(e),
    }
}

fn cmd_verify(
    q: u64,
    group: &str,
    level: Level,
    budget: Option<usize>,
    lattice_budget: Option<usize>,
    out: Option<PathBuf>,
) -> ExitCode {
    let mut budgets = Budgets::from_env();
    if let Some(b) = budget {
        budgets.elements = b;
    }
    if let Some(b) = lattice_budget {
        budgets.lattice = b;
    }
    if budgets.elements == 0 || budgets.lattice == 0 {
        return invalid("budgets must be positive");
    }
    let all = group.eq_ignore_ascii_case("all");
    let groups = if all {
        match OuterSpec::all_subgroups(q) {
            Ok(g) => g,
            Err(e) => return invalid(e),
        }
    } else {
        match parse_group(q, group) {
            Ok(h) => vec![h],
            Err(e) => return invalid(e),
        }
    };

    // One thread per H; results are joined in H-order.
    let results: Vec<Result<Report, oracle::OracleError>> = std::thread::scope(|s| {
        let handles: Vec<_> = groups
            .iter()
            .map(|h| s.spawn(move || oracle::verify_classification(q, h, level, &budgets)))
            .collect();
        handles.into_iter().map(|h| h.join().expect("verification thread panicked")).collect()
    });
    let mut reports = Vec::with_capacity(results.len());
    for r in results {
        match r {
            Ok(r) => reports.push(r),
            Err(e) => return invalid(e),
        }
    }

    let value = if all { json!(reports) } else { json!(reports[0]) };
    let text = serde_json::to_string_pretty(&value).expect("reports serialize");
    println!("{text}");
    if let Some(path) = out {
        if let Err(e) = std::fs::write(&path, format!("{text}\n")) {
            eprintln!("error: cannot write {}: {e}", path.display());
            return ExitCode::from(EXIT_FAIL);
        }
    }
    if reports.iter().any(|r| r.budget_exhausted) {
        ExitCode::from(EXIT_BUDGET)
    } else if reports.iter().all(|r| r.pass) {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_FAIL)
    }
}

fn parse_range(s: &str) -> Result<(u64, u64), String> {
    let (a, b) = s.split_once("..").ok_or_else(|| format!("range {s:?} must look like A..B"))?;
    let a = a.trim().parse().map_err(|_| format!("bad range start {a:?}"))?;
    let b = b.trim().parse().map_err(|_| format!("bad range end {b:?}"))?;
    Ok((a, b))
}

fn cmd_table(theorem: &str, range: &str, format: Format) -> ExitCode {
    let theorem: Theorem = match theorem.parse() {
        Ok(t) => t,
        Err(e) => return invalid(e),
    };
    let (lo, hi) = match parse_range(range) {
        Ok(r) => r,
        Err(e) => return invalid(e),
    };
    let mut rows = Vec::new();
    for q in lo.max(4)..=hi {
        let Some((_, f)) = arith::prime_power(q) else { continue };
        let variants: Vec<Theorem> = match theorem {
            Theorem::Msq(_) => (1..=f / 2).filter(|s| f % 2 == 0 && (f / 2) % s == 0).map(Theorem::Msq).collect(),
            t => vec![t],
        };
        for t in variants {
            let Ok(fixture) = theorem_fixture(t, q) else { continue };
            let group = t.preset().map(|p| p.to_string()).unwrap_or_default();
            match fixture {
                Fixture::Descriptors(ds) => rows.extend(ds.into_iter().map(|d| {
                    json!({
                        "q": q, "group": group, "family": d.family, "q0": d.q0,
                        "m0_order": d.m0_order, "m_order": d.m_order, "classes": d.class_count,
                    })
                })),
                Fixture::Novelties(ns) => rows.extend(ns.into_iter().map(|n| {
                    json!({ "q": n.q, "group": n.group, "family": n.family, "structure": n.structure, "m_order": n.m_order })
                })),
                Fixture::Holds(b) => rows.push(json!({ "q": q, "holds": b })),
            }
        }
    }
    if rows.is_empty() {
        return invalid(format!("no row of {theorem} applies for q in {lo}..{hi}"));
    }
    match format {
        Format::Json => println!("{}", serde_json::to_string_pretty(&rows).expect("rows serialize")),
        Format::Tsv => {
            let columns: Vec<String> = rows[0].as_object().unwrap().keys().cloned().collect();
            let columns = order_columns(columns);
            println!("{}", columns.join("\t"));
            for r in &rows {
                let cells: Vec<String> = columns
                    .iter()
                    .map(|c| match &r[c] {
                        serde_json::Value::Null => "-".to_string(),
                        serde_json::Value::String(s) => s.clone(),
                        v => v.to_string(),
                    })
                    .collect();
                println!("{}", cells.join("\t"));
            }
        }
    }
    ExitCode::SUCCESS
}

fn order_columns(mut cols: Vec<String>) -> Vec<String> {
    const ORDER: [&str; 9] = ["q", "group", "family", "q0", "structure", "m0_order", "m_order", "classes", "holds"];
    cols.sort_by_key(|c| ORDER.iter().position(|o| o == c).unwrap_or(ORDER.len()));
    cols
}

fn main() -> ExitCode {
    match Cli::parse().command {
        Command::Classify { q, group, format } => cmd_classify(q, &group, format),
        Command::Verify { q, group, level, budget, lattice_budget, out } => {
            cmd_verify(q, &group, level.into(), budget, lattice_budget, out)
        }
        Command::Table { theorem, q_range, format } => cmd_table(&theorem, &q_range, format),
    }
}
