//! `mntkit` — command-line frontend for the MNT family toolkit.
//!
//! Every subcommand dispatches to `mntkit-core` and emits its result in one
//! of three formats (`json`, `csv`, `table`) on standard output or to a
//! file; logs go to standard error. Exit codes: `0` success, `1` invalid
//! input, `2` internal invariant violation (the violated invariant's name is
//! printed).

use std::io::{Read, Write};
use std::panic::{self, AssertUnwindSafe};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use serde_json::json;

use mntkit_core::families::{self, EmbeddingDegree, Family};
use mntkit_core::pell::PellInstance;
use mntkit_core::table::{audit_reference_table, reconcile_against_generated, RowFinding};
use mntkit_core::{
    census_with_jobs, class_representatives, counting, density_profile, fundamental_unit,
    is_ambiguous, orbit_solutions, pell_search, reduce, sweep_with_jobs, CurveInstance, LinPoly,
    QuadPoly, SearchReport,
};

// --- command-line grammar ---------------------------------------------------

#[derive(Parser)]
#[command(
    name = "mntkit",
    version,
    about = "Toolkit for near prime-order MNT elliptic-curve families",
    propagate_version = true
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Enumerate all families for one embedding degree up to a cofactor bound
    Generate(GenerateArgs),
    /// Tabulate the candidate-class count N_d per content divisor d
    Count(CountArgs),
    /// Reduce family CM equations to generalized Pell form y² − g·m² = f
    ReducePell(ReduceArgs),
    /// Solve y² − g·m² = f exactly: unit, solution classes, orbit solutions
    SolvePell(SolvePellArgs),
    /// Search a family for concrete curve instances
    Search(SearchArgs),
    /// Density statistics: C_p, ρ(m), admissible classes, Euler products
    Stats(StatsArgs),
    /// Audit the embedded reference table against the generator
    VerifyTable(VerifyTableArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Table,
}

#[derive(Args)]
struct OutputArgs {
    /// Output format
    #[arg(long, value_enum, default_value_t = Format::Table)]
    format: Format,
    /// Write data to this file instead of standard output
    #[arg(long, short = 'o')]
    output: Option<PathBuf>,
}

/// Family selection shared by `reduce-pell`, `search`, and `stats`: either
/// generate the list for an embedding degree or read families from JSON.
#[derive(Args)]
#[command(group(clap::ArgGroup::new("source").required(true).args(["k", "input"])))]
struct SelectArgs {
    /// Embedding degree (3, 4, or 6): select from the generated family list
    #[arg(long)]
    k: Option<u64>,
    /// Cofactor bound for --k: families with h ≤ HMAX
    #[arg(long, default_value_t = 6, conflicts_with = "input")]
    hmax: u64,
    /// JSON file holding a family or an array of families ('-' = standard input)
    #[arg(long)]
    input: Option<PathBuf>,
    /// Pick a single family by its position in the selected list
    #[arg(long)]
    index: Option<usize>,
}

#[derive(Args)]
struct GenerateArgs {
    /// Embedding degree: 3, 4, or 6
    #[arg(long)]
    k: u64,
    /// Enumerate families with cofactor h ≤ HMAX
    #[arg(long, default_value_t = 6)]
    hmax: u64,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Args)]
#[command(group(clap::ArgGroup::new("range").required(true).args(["h", "d_max"])))]
struct CountArgs {
    /// Embedding degree: 3, 4, or 6
    #[arg(long)]
    k: u64,
    /// Tabulate d ≤ 4·H, the content range relevant at cofactor H
    #[arg(long)]
    h: Option<u64>,
    /// Tabulate d ≤ D_MAX
    #[arg(long)]
    d_max: Option<u64>,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Args)]
struct ReduceArgs {
    #[command(flatten)]
    select: SelectArgs,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Args)]
struct SolvePellArgs {
    /// Pell modulus g (positive non-square)
    #[arg(long, allow_hyphen_values = true)]
    g: BigInt,
    /// Right-hand side f (nonzero)
    #[arg(long, allow_hyphen_values = true)]
    f: BigInt,
    /// Also enumerate the orbit solutions with |y| ≤ Y_LIMIT
    #[arg(long, allow_hyphen_values = true)]
    y_limit: Option<BigInt>,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SearchMode {
    /// Evaluate the family on every seed in [x-min, x-max]
    Sweep,
    /// Solve the Pell equation per square-free discriminant D ≤ d-max
    Pell,
}

#[derive(Args)]
struct SearchArgs {
    #[command(flatten)]
    select: SelectArgs,
    /// Search strategy
    #[arg(long, value_enum, default_value_t = SearchMode::Sweep)]
    mode: SearchMode,
    /// Smallest seed x (sweep mode)
    #[arg(long, allow_negative_numbers = true)]
    x_min: Option<i64>,
    /// Largest seed x (sweep mode)
    #[arg(long, allow_negative_numbers = true)]
    x_max: Option<i64>,
    /// Largest admissible square-free CM discriminant D
    #[arg(long)]
    d_max: u64,
    /// Smallest discriminant D (pell mode)
    #[arg(long, default_value_t = 1)]
    d_min: u64,
    /// Root bound 0 < y ≤ Y_LIMIT (pell mode)
    #[arg(long)]
    y_limit: Option<BigInt>,
    /// Worker threads for the sweep
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Args)]
struct StatsArgs {
    #[command(flatten)]
    select: SelectArgs,
    /// Report C_p for primes p ≤ C_BOUND
    #[arg(long, default_value_t = 100)]
    c_bound: u64,
    /// Report ρ(m) for m ≤ RHO_BOUND
    #[arg(long, default_value_t = 60)]
    rho_bound: u64,
    /// Truncate the Euler products at primes ≤ EULER_P
    #[arg(long, default_value_t = 10_000)]
    euler_p: u64,
    /// Also count instances with CM discriminant ≤ Z (census)
    #[arg(long, requires = "census_x_max")]
    census_z: Option<u64>,
    /// Census seed half-range: seeds x ∈ [−X, X]
    #[arg(long, requires = "census_z")]
    census_x_max: Option<i64>,
    /// Worker threads for the census sweep
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Args)]
struct VerifyTableArgs {
    /// Audit the embedded reference table
    #[arg(long)]
    builtin: bool,
    #[command(flatten)]
    out: OutputArgs,
}

// --- entry point and exit-code contract --------------------------------------

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // --help/--version arrive as Err but are success paths; anything
            // else is invalid input and must exit 1 with the usage text.
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(1),
            };
            let _ = e.print();
            return code;
        }
    };
    // A panic past argument parsing means a violated internal invariant; the
    // default hook's backtrace noise is replaced by the invariant's name.
    panic::set_hook(Box::new(|_| {}));
    match panic::catch_unwind(AssertUnwindSafe(|| run(cli))) {
        Ok(Ok(())) => ExitCode::SUCCESS,
        Ok(Err(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
        Err(payload) => {
            let name = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unnamed panic".to_string());
            eprintln!("internal invariant violation: {name}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Generate(args) => cmd_generate(args),
        Command::Count(args) => cmd_count(args),
        Command::ReducePell(args) => cmd_reduce_pell(args),
        Command::SolvePell(args) => cmd_solve_pell(args),
        Command::Search(args) => cmd_search(args),
        Command::Stats(args) => cmd_stats(args),
        Command::VerifyTable(args) => cmd_verify_table(args),
    }
}

// --- shared plumbing ----------------------------------------------------------

fn embedding_degree(k: u64) -> Result<EmbeddingDegree> {
    EmbeddingDegree::try_from_value(k).map_err(|e| anyhow::anyhow!(e))
}

impl SelectArgs {
    /// The families this selection denotes, in deterministic order.
    fn resolve(&self) -> Result<Vec<Family>> {
        let mut list = match (&self.input, self.k) {
            (Some(path), _) => read_families(path)?,
            (None, Some(k)) => families::generate(embedding_degree(k)?, self.hmax)?,
            (None, None) => unreachable!("clap enforces the source group"),
        };
        if let Some(index) = self.index {
            if index >= list.len() {
                bail!(
                    "--index {index} is out of range: the selection holds {} families",
                    list.len()
                );
            }
            list = vec![list.swap_remove(index)];
        }
        Ok(list)
    }

    /// Exactly one family, demanding `--index` when the list is larger.
    fn resolve_single(&self) -> Result<Family> {
        let mut list = self.resolve()?;
        match list.len() {
            1 => Ok(list.pop().expect("length checked")),
            n => bail!("the selection holds {n} families; pick one with --index"),
        }
    }
}

/// Reads one family or an array of families from a JSON file ('-' = stdin).
fn read_families(path: &PathBuf) -> Result<Vec<Family>> {
    let text = if path.as_os_str() == "-" {
        let mut buf = String::new();
        std::io::stdin()
            .read_to_string(&mut buf)
            .context("reading families from standard input")?;
        buf
    } else {
        std::fs::read_to_string(path)
            .with_context(|| format!("reading families from {}", path.display()))?
    };
    if let Ok(list) = serde_json::from_str::<Vec<Family>>(&text) {
        return Ok(list);
    }
    let single: Family = serde_json::from_str(&text)
        .with_context(|| format!("{} holds neither a family nor an array of families", path.display()))?;
    Ok(vec![single])
}

/// Renders rows in the requested format and writes them to the destination.
fn emit(
    out: &OutputArgs,
    json: serde_json::Value,
    header: &[&str],
    rows: &[Vec<String>],
) -> Result<()> {
    let text = match out.format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&json).context("rendering JSON")?;
            s.push('\n');
            s
        }
        Format::Csv => render_csv(header, rows)?,
        Format::Table => render_table(header, rows),
    };
    match &out.output {
        Some(path) => std::fs::write(path, text)
            .with_context(|| format!("writing to {}", path.display())),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .and_then(|()| stdout.flush())
                .context("writing to standard output")
        }
    }
}

fn render_csv(header: &[&str], rows: &[Vec<String>]) -> Result<String> {
    let mut writer = csv::Writer::from_writer(Vec::new());
    writer.write_record(header).context("writing CSV header")?;
    for row in rows {
        writer.write_record(row).context("writing CSV row")?;
    }
    let bytes = writer.into_inner().context("flushing CSV")?;
    String::from_utf8(bytes).context("CSV output is UTF-8")
}

fn render_table(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut widths: Vec<usize> = header.iter().map(|h| h.chars().count()).collect();
    for row in rows {
        for (i, cell) in row.iter().enumerate() {
            widths[i] = widths[i].max(cell.chars().count());
        }
    }
    let mut text = String::new();
    let mut push_row = |cells: &[String]| {
        for (i, cell) in cells.iter().enumerate() {
            if i > 0 {
                text.push_str("  ");
            }
            text.push_str(cell);
            if i + 1 < cells.len() {
                for _ in cell.chars().count()..widths[i] {
                    text.push(' ');
                }
            }
        }
        text.push('\n');
    };
    let header_cells: Vec<String> = header.iter().map(|h| h.to_string()).collect();
    push_row(&header_cells);
    let rule: Vec<String> = widths.iter().map(|w| "-".repeat(*w)).collect();
    push_row(&rule);
    for row in rows {
        push_row(row);
    }
    text
}

/// Ascending-coefficient bracket list `[b, a]` for `a·x + b`.
fn bracket_lin(p: &LinPoly) -> String {
    format!("[{}, {}]", p.b, p.a)
}

/// Ascending-coefficient bracket list `[c0, c1, c2]`.
fn bracket_quad(p: &QuadPoly) -> String {
    format!("[{}, {}, {}]", p.c0, p.c1, p.c2)
}

/// One tabular row per family; CSV gets bracket lists, tables the usual
/// human-readable polynomial rendering.
fn family_cells(family: &Family, format: Format) -> Vec<String> {
    let (t, r, q) = match format {
        Format::Csv => (
            bracket_lin(family.t()),
            bracket_quad(family.r()),
            bracket_quad(family.q()),
        ),
        _ => (
            family.t().to_string(),
            family.r().to_string(),
            family.q().to_string(),
        ),
    };
    vec![
        family.k().value().to_string(),
        family.h().to_string(),
        family.d().to_string(),
        t,
        r,
        q,
    ]
}

// --- subcommands ---------------------------------------------------------------

fn cmd_generate(args: GenerateArgs) -> Result<()> {
    let k = embedding_degree(args.k)?;
    let list = families::generate(k, args.hmax)?;
    eprintln!(
        "generated {} families of embedding degree {} with cofactor h <= {}",
        list.len(),
        args.k,
        args.hmax
    );
    let rows: Vec<Vec<String>> = list
        .iter()
        .map(|f| family_cells(f, args.out.format))
        .collect();
    let json = serde_json::to_value(&list).context("encoding families")?;
    emit(&args.out, json, &["k", "h", "d", "t", "r", "q"], &rows)
}

fn cmd_count(args: CountArgs) -> Result<()> {
    let k = embedding_degree(args.k)?;
    let d_max = match (args.h, args.d_max) {
        (Some(h), None) => {
            if h == 0 {
                bail!("--h must be positive");
            }
            4 * h
        }
        (None, Some(d)) => d,
        _ => unreachable!("clap enforces the range group"),
    };
    let counts: Vec<(u64, u64)> = (1..=d_max)
        .map(|d| (d, counting::n_d_formula(k, d)))
        .collect();
    let rows: Vec<Vec<String>> = counts
        .iter()
        .map(|(d, n)| vec![d.to_string(), n.to_string()])
        .collect();
    let json = json!({
        "k": args.k,
        "d_max": d_max,
        "counts": counts.iter().map(|(d, n)| json!({"d": d, "n": n})).collect::<Vec<_>>(),
    });
    emit(&args.out, json, &["d", "n"], &rows)
}

fn reduction_json(instance: &PellInstance) -> serde_json::Value {
    json!({
        "family": instance.family(),
        "w0": instance.w0().to_string(),
        "w1": instance.w1().to_string(),
        "w2": instance.w2().to_string(),
        "u": instance.u().to_string(),
        "f": instance.f().to_string(),
    })
}

fn cmd_reduce_pell(args: ReduceArgs) -> Result<()> {
    let list = args.select.resolve()?;
    let mut rows = Vec::new();
    let mut reductions = Vec::new();
    for family in &list {
        let instance = reduce(family)?;
        let mut cells = family_cells(family, args.out.format);
        cells.extend([
            instance.w0().to_string(),
            instance.w1().to_string(),
            instance.w2().to_string(),
            instance.u().to_string(),
            instance.f().to_string(),
        ]);
        rows.push(cells);
        reductions.push(reduction_json(&instance));
    }
    eprintln!("reduced {} families to Pell form", list.len());
    emit(
        &args.out,
        serde_json::Value::Array(reductions),
        &["k", "h", "d", "t", "r", "q", "w0", "w1", "w2", "u", "f"],
        &rows,
    )
}

fn cmd_solve_pell(args: SolvePellArgs) -> Result<()> {
    let unit = fundamental_unit(&args.g)?;
    let classes = class_representatives(&args.g, &args.f)?;
    let solutions = args
        .y_limit
        .as_ref()
        .map(|cap| orbit_solutions(&args.g, &unit, &classes, cap));
    eprintln!(
        "g = {}, f = {}: fundamental unit ({}, {}), {} solution classes",
        args.g,
        args.f,
        unit.0,
        unit.1,
        classes.len()
    );
    let json = json!({
        "g": args.g.to_string(),
        "f": args.f.to_string(),
        "unit": {"t": unit.0.to_string(), "u": unit.1.to_string()},
        "classes": classes
            .iter()
            .map(|c| json!({
                "y": c.y().to_string(),
                "m": c.m().to_string(),
                "primitive": c.is_primitive(),
                "ambiguous": is_ambiguous(c),
            }))
            .collect::<Vec<_>>(),
        "solutions": solutions.as_ref().map(|sols| {
            sols.iter()
                .map(|(y, m)| json!({"y": y.to_string(), "m": m.to_string()}))
                .collect::<Vec<_>>()
        }),
    });
    let (header, rows): (&[&str], Vec<Vec<String>>) = match &solutions {
        Some(sols) => (
            &["g", "f", "y", "m"],
            sols.iter()
                .map(|(y, m)| {
                    vec![
                        args.g.to_string(),
                        args.f.to_string(),
                        y.to_string(),
                        m.to_string(),
                    ]
                })
                .collect(),
        ),
        None => (
            &["g", "f", "y", "m", "primitive", "ambiguous"],
            classes
                .iter()
                .map(|c| {
                    vec![
                        args.g.to_string(),
                        args.f.to_string(),
                        c.y().to_string(),
                        c.m().to_string(),
                        c.is_primitive().to_string(),
                        is_ambiguous(c).to_string(),
                    ]
                })
                .collect(),
        ),
    };
    emit(&args.out, json, header, &rows)
}

fn cmd_search(args: SearchArgs) -> Result<()> {
    let family = args.select.resolve_single()?;
    if args.jobs == 0 {
        bail!("--jobs must be at least 1");
    }
    let report: SearchReport = match args.mode {
        SearchMode::Sweep => {
            let (x_min, x_max) = match (args.x_min, args.x_max) {
                (Some(lo), Some(hi)) if lo <= hi => (lo, hi),
                (Some(lo), Some(hi)) => bail!("--x-min {lo} exceeds --x-max {hi}"),
                _ => bail!("sweep mode needs both --x-min and --x-max"),
            };
            sweep_with_jobs(&family, x_min, x_max, args.d_max, args.jobs)
        }
        SearchMode::Pell => {
            let y_limit = args
                .y_limit
                .as_ref()
                .context("pell mode needs --y-limit")?;
            pell_search(&family, args.d_min, args.d_max, y_limit)?
        }
    };
    eprintln!(
        "examined {} candidates, found {} instances ({} indeterminate)",
        report.examined,
        report.instances.len(),
        report.indeterminate_seeds.len()
    );
    let rows: Vec<Vec<String>> = report
        .instances
        .iter()
        .map(|i| i.csv_record().to_vec())
        .collect();
    let json = json!({"family": family, "report": report});
    let header: Vec<&str> = CurveInstance::CSV_HEADER.to_vec();
    emit(&args.out, json, &header, &rows)
}

fn cmd_stats(args: StatsArgs) -> Result<()> {
    let family = args.select.resolve_single()?;
    if args.jobs == 0 {
        bail!("--jobs must be at least 1");
    }
    let profile = density_profile(&family, args.c_bound, args.rho_bound, args.euler_p)?;
    let census = match (args.census_z, args.census_x_max) {
        (Some(z), Some(x_max)) => {
            if x_max < 0 {
                bail!("--census-x-max must be non-negative");
            }
            Some(census_with_jobs(&family, z, x_max, args.jobs))
        }
        _ => None,
    };

    // Flat (section, key, value) triples carry the heterogeneous report in
    // the line-oriented formats; JSON keeps the full structure.
    let mut rows: Vec<Vec<String>> = Vec::new();
    let mut put = |section: &str, key: String, value: String| {
        rows.push(vec![section.to_string(), key, value]);
    };
    put("family", "k".into(), family.k().value().to_string());
    put("family", "h".into(), family.h().to_string());
    put("family", "d".into(), family.d().to_string());
    put("family", "t".into(), family.t().to_string());
    put("family", "r".into(), family.r().to_string());
    put("family", "q".into(), family.q().to_string());
    put("reduction", "w0".into(), profile.w0.clone());
    put("reduction", "w1".into(), profile.w1.clone());
    put("reduction", "w2".into(), profile.w2.clone());
    put("reduction", "u".into(), profile.u.clone());
    put(
        "reduction",
        "delta".into(),
        format!("[{}]", profile.delta.join(", ")),
    );
    for (p, c) in &profile.c {
        put("c_p", p.to_string(), c.to_string());
    }
    for (m, rho) in &profile.rho {
        put("rho", m.to_string(), rho.to_string());
    }
    put(
        "admissible",
        "modulus".into(),
        profile.admissible.modulus.to_string(),
    );
    put(
        "admissible",
        "character".into(),
        profile.admissible.character.to_string(),
    );
    put(
        "admissible",
        "odd_conductor".into(),
        profile.admissible.odd_conductor.to_string(),
    );
    put(
        "admissible",
        "classes".into(),
        format!(
            "[{}]",
            profile
                .admissible
                .classes
                .iter()
                .map(u64::to_string)
                .collect::<Vec<_>>()
                .join(", ")
        ),
    );
    put(
        "euler",
        "truncation".into(),
        profile.euler.truncation.to_string(),
    );
    put("euler", "s1".into(), profile.euler.s1.clone());
    put("euler", "s2".into(), profile.euler.s2.clone());
    put("euler", "s0".into(), profile.euler.s0.clone());
    put(
        "euler",
        "s0_at_half".into(),
        profile.euler.s0_at_half.clone(),
    );
    put("euler", "delta".into(), format!("{:e}", profile.euler.delta));
    put(
        "euler",
        "obstructed_at".into(),
        profile
            .euler
            .obstructed_at
            .map_or_else(|| "none".to_string(), |p| p.to_string()),
    );
    if let Some(census) = &census {
        put("census", "z".into(), census.z.to_string());
        put("census", "x_max".into(), census.x_max.to_string());
        put("census", "count".into(), census.count.to_string());
        put(
            "census",
            "indeterminate".into(),
            census.indeterminate.to_string(),
        );
    }

    let json = json!({"profile": profile, "census": census});
    emit(&args.out, json, &["section", "key", "value"], &rows)
}

fn finding_cells(finding: &RowFinding) -> (String, String) {
    match finding {
        RowFinding::Consistent => ("consistent".into(), String::new()),
        RowFinding::MisplacedCofactor { true_h } => {
            ("misplaced-cofactor".into(), format!("true h = {true_h}"))
        }
        RowFinding::MisprintedSubgroup { corrected_r } => (
            "misprinted-subgroup".into(),
            format!("corrected r = {corrected_r}"),
        ),
        RowFinding::MalformedPolynomial { corrected_q } => (
            "malformed-polynomial".into(),
            format!("corrected q = {corrected_q}"),
        ),
    }
}

fn cmd_verify_table(args: VerifyTableArgs) -> Result<()> {
    if !args.builtin {
        bail!("pass --builtin to audit the embedded reference table");
    }
    // The embedded table is part of the build; failure to audit or reconcile
    // it is an internal defect, not user error.
    let audit = audit_reference_table().expect("embedded reference table audits cleanly");
    let reconciliation = reconcile_against_generated(&audit, 6)
        .expect("embedded reference table generation succeeds");
    assert!(
        reconciliation.unmatched_rows.is_empty(),
        "embedded table reconciliation violated"
    );

    let mut rows = Vec::new();
    let mut tally = std::collections::BTreeMap::new();
    for (index, row_audit) in audit.audits.iter().enumerate() {
        let (verdict, detail) = finding_cells(&row_audit.finding);
        *tally.entry(verdict.clone()).or_insert(0u64) += 1;
        rows.push(vec![
            (index + 1).to_string(),
            row_audit.row.k.to_string(),
            row_audit.row.h.to_string(),
            row_audit.row.q.to_string(),
            row_audit.row.r.to_string(),
            row_audit.row.t.to_string(),
            verdict,
            detail,
        ]);
    }
    for (verdict, count) in &tally {
        eprintln!("{count} rows {verdict}");
    }
    eprintln!(
        "all {} printed rows reconcile with the generator; {} generated families have no printed row",
        audit.audits.len(),
        reconciliation.absent_families.len()
    );
    let json = json!({
        "rows": audit
            .audits
            .iter()
            .enumerate()
            .map(|(index, a)| {
                let (verdict, detail) = finding_cells(&a.finding);
                json!({
                    "row": index + 1,
                    "k": a.row.k,
                    "h": a.row.h,
                    "q": a.row.q,
                    "r": a.row.r,
                    "t": a.row.t,
                    "verdict": verdict,
                    "detail": detail,
                    "family": a.family,
                })
            })
            .collect::<Vec<_>>(),
        "summary": {
            "tally": tally,
            "absent_families": reconciliation.absent_families,
        },
    });
    emit(
        &args.out,
        json,
        &["row", "k", "h", "q", "r", "t", "verdict", "detail"],
        &rows,
    )
}
