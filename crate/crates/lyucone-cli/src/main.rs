//! Batch front end: parse ideal files, run table / compare / veronese /
//! oracle-check jobs, and emit deterministic output.
//!
//! Exit codes: 0 success, 2 input error, 3 resource cap exceeded,
//! 4 oracle mismatch.

use std::path::PathBuf;
use std::time::{Duration, Instant};

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use lyucone::embeddings::{
    compare_invariants, linear_augment, veronese_ideal, ComparisonReport,
    EmbeddingPresentation, Provenance,
};
use lyucone::input::{parse_input_with_field, render_input};
use lyucone::lyubeznik::{compute_tables_jobs, CellFilter, ConeInput, TableSet};
use lyucone::oracle::oracle_lyubeznik_monomial;
use lyucone::Error;

#[derive(Parser)]
#[command(name = "lyucone", version, about = "Lyubeznik tables of cone vertices in positive characteristic")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Pretty,
    Tsv,
    Json,
}

#[derive(Parser)]
struct CommonArgs {
    /// Ideal file (grammar: `ring <p> <k> <names…>`, then one generator per line)
    input: PathBuf,
    /// Override the characteristic from the ring line
    #[arg(long)]
    field: Option<u64>,
    /// Restrict to a cell block, e.g. `0..1,0..2`
    #[arg(long)]
    cells: Option<String>,
    #[arg(long, value_enum, default_value_t = Format::Pretty)]
    format: Format,
    /// Worker threads for table columns
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    /// Print per-phase wall times to stderr
    #[arg(long)]
    timings: bool,
    /// Refuse rings with more variables than this
    #[arg(long, default_value_t = 16)]
    max_vars: usize,
    /// Give up (exit 3) when the computation exceeds this budget
    #[arg(long)]
    time_budget_secs: Option<u64>,
}

#[derive(Subcommand)]
enum Command {
    /// λ table of the cone over Proj(R/I)
    Table(CommonArgs),
    /// dim (M_0) table (embedding-independent bound for λ)
    M0(CommonArgs),
    /// Print the ideal of the t-uple Veronese re-embedding as an ideal file
    Veronese {
        input: PathBuf,
        #[arg(long = "veronese-t")]
        t: u32,
        #[arg(long)]
        field: Option<u64>,
        #[arg(long, default_value_t = 16)]
        max_vars: usize,
        #[arg(long)]
        timings: bool,
    },
    /// Compare invariant tables across embeddings of one scheme
    Compare {
        /// Two or more ideal files, or one file plus generated re-embeddings
        inputs: Vec<PathBuf>,
        /// Also compare against the Veronese re-embedding of the first input
        #[arg(long = "veronese-t")]
        veronese_t: Option<u32>,
        /// Also compare against the linear augmentation of the first input
        #[arg(long)]
        linear_augment: bool,
        #[arg(long)]
        field: Option<u64>,
        #[arg(long, value_enum, default_value_t = Format::Pretty)]
        format: Format,
        #[arg(long, default_value_t = 16)]
        max_vars: usize,
        #[arg(long)]
        timings: bool,
    },
    /// Run the pipeline and the Taylor oracle; exit 4 on mismatch
    OracleCheck {
        input: PathBuf,
        #[arg(long)]
        field: Option<u64>,
        #[arg(long, value_enum, default_value_t = Format::Pretty)]
        format: Format,
        #[arg(long)]
        timings: bool,
        /// Give up (exit 3) when the check exceeds this budget; the dense
        /// oracle is desk-scale and grows quickly past three variables
        #[arg(long)]
        time_budget_secs: Option<u64>,
    },
}

struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn input(msg: impl Into<String>) -> Failure {
        Failure { code: 2, message: msg.into() }
    }

    fn resource(msg: impl Into<String>) -> Failure {
        Failure { code: 3, message: msg.into() }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        let code = match e {
            Error::ResourceCap { .. } | Error::OracleInconclusive => 3,
            _ => 2,
        };
        Failure { code, message: e.to_string() }
    }
}

fn main() {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => {}
        Err(f) => {
            eprintln!("error: {}", f.message);
            std::process::exit(f.code);
        }
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Table(args) => table_command(args, TableKind::Lambda),
        Command::M0(args) => table_command(args, TableKind::M0),
        Command::Veronese { input, t, field, max_vars, timings } => {
            veronese_command(input, t, field, max_vars, timings)
        }
        Command::Compare {
            inputs,
            veronese_t,
            linear_augment: aug,
            field,
            format,
            max_vars,
            timings,
        } => compare_command(inputs, veronese_t, aug, field, format, max_vars, timings),
        Command::OracleCheck { input, field, format, timings, time_budget_secs } => {
            oracle_command(input, field, format, timings, time_budget_secs)
        }
    }
}

fn load_cone(path: &PathBuf, field: Option<u64>, max_vars: usize) -> Result<ConeInput, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::input(format!("cannot read {}: {e}", path.display())))?;
    let cone = parse_input_with_field(&text, field)?;
    if cone.ring().nvars() > max_vars {
        return Err(Failure::resource(format!(
            "ring has {} variables (cap {max_vars})",
            cone.ring().nvars()
        )));
    }
    Ok(cone)
}

fn parse_cells(spec: &str) -> Result<CellFilter, Failure> {
    let bad = || Failure::input(format!("invalid --cells `{spec}`; expected i0..i1,j0..j1"));
    let (ispec, jspec) = spec.split_once(',').ok_or_else(bad)?;
    let parse_range = |s: &str| -> Result<(usize, usize), Failure> {
        let (a, b) = s.split_once("..").ok_or_else(bad)?;
        let a = a.trim().parse().map_err(|_| bad())?;
        let b = b.trim().parse().map_err(|_| bad())?;
        if a > b {
            return Err(bad());
        }
        Ok((a, b))
    };
    let (i0, i1) = parse_range(ispec)?;
    let (j0, j1) = parse_range(jspec)?;
    Ok(CellFilter { i0, i1, j0, j1 })
}

/// Run a closure under an optional wall-clock budget; the worker thread is
/// abandoned on timeout and the process exits with code 3.
fn with_budget<T: Send + 'static>(
    budget: Option<u64>,
    f: impl FnOnce() -> T + Send + 'static,
) -> Result<T, Failure> {
    let Some(secs) = budget else {
        return Ok(f());
    };
    let (tx, rx) = std::sync::mpsc::channel();
    std::thread::spawn(move || {
        let _ = tx.send(f());
    });
    rx.recv_timeout(Duration::from_secs(secs))
        .map_err(|_| Failure::resource(format!("time budget of {secs}s exceeded")))
}

#[derive(Clone, Copy)]
enum TableKind {
    Lambda,
    M0,
}

#[derive(Serialize)]
struct RingDoc {
    p: u32,
    vars: Vec<String>,
}

#[derive(Serialize)]
struct ProvenanceDoc {
    command: String,
    input: String,
    field_override: Option<u64>,
    cells: (usize, usize, usize, usize),
    jobs: usize,
}

#[derive(Serialize)]
struct VersionsDoc {
    lyucone: &'static str,
}

#[derive(Serialize)]
struct TableDoc {
    ring: RingDoc,
    ideal: Vec<String>,
    d: usize,
    lambda: Vec<Vec<u64>>,
    m0: Vec<Vec<u64>>,
    provenance: ProvenanceDoc,
    versions: VersionsDoc,
}

fn subgrid(entries: &[Vec<u64>], set: &TableSet) -> Vec<Vec<u64>> {
    (set.i_range.0..=set.i_range.1)
        .map(|i| (set.j_range.0..=set.j_range.1).map(|j| entries[i][j]).collect())
        .collect()
}

fn render_pretty_table(set: &TableSet, kind: TableKind, cone: &ConeInput) -> String {
    use std::fmt::Write;
    let entries = match kind {
        TableKind::Lambda => &set.lambda.entries,
        TableKind::M0 => &set.m0.entries,
    };
    let name = match kind {
        TableKind::Lambda => "lambda",
        TableKind::M0 => "m0",
    };
    let mut s = String::new();
    writeln!(
        s,
        "{name} table: d = {}, p = {}, vars = {}",
        set.d,
        cone.ring().p(),
        cone.ring().names().join(" ")
    )
    .unwrap();
    let width = entries
        .iter()
        .flatten()
        .map(|v| v.to_string().len())
        .chain(std::iter::once((set.d + 1).to_string().len()))
        .max()
        .unwrap_or(1)
        .max(3);
    write!(s, "{:>width$}", "i\\j").unwrap();
    for j in set.j_range.0..=set.j_range.1 {
        write!(s, " {j:>width$}").unwrap();
    }
    s.push('\n');
    #[allow(clippy::needless_range_loop)]
    for i in set.i_range.0..=set.i_range.1 {
        write!(s, "{i:>width$}").unwrap();
        for j in set.j_range.0..=set.j_range.1 {
            write!(s, " {:>width$}", entries[i][j]).unwrap();
        }
        s.push('\n');
    }
    s
}

fn table_command(args: CommonArgs, kind: TableKind) -> Result<(), Failure> {
    let t0 = Instant::now();
    let cone = load_cone(&args.input, args.field, args.max_vars)?;
    let t_parse = t0.elapsed();

    let filter = match &args.cells {
        Some(spec) => parse_cells(spec)?,
        None => CellFilter::full(cone.d()),
    };
    let jobs = args.jobs.max(1);
    let t1 = Instant::now();
    let cone_for_worker = cone.clone();
    let set = with_budget(args.time_budget_secs, move || {
        compute_tables_jobs(&cone_for_worker, true, filter, jobs)
    })??;
    let t_compute = t1.elapsed();

    match args.format {
        Format::Pretty => print!("{}", render_pretty_table(&set, kind, &cone)),
        Format::Tsv => {
            let entries = match kind {
                TableKind::Lambda => &set.lambda.entries,
                TableKind::M0 => &set.m0.entries,
            };
            for row in subgrid(entries, &set) {
                println!(
                    "{}",
                    row.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("\t")
                );
            }
        }
        Format::Json => {
            let doc = TableDoc {
                ring: RingDoc { p: cone.ring().p(), vars: cone.ring().names().to_vec() },
                ideal: cone.ideal().generators().iter().map(|g| g.to_string()).collect(),
                d: set.d,
                lambda: subgrid(&set.lambda.entries, &set),
                m0: subgrid(&set.m0.entries, &set),
                provenance: ProvenanceDoc {
                    command: match kind {
                        TableKind::Lambda => "table".into(),
                        TableKind::M0 => "m0".into(),
                    },
                    // File name only, so output does not depend on the
                    // invocation directory.
                    input: args
                        .input
                        .file_name()
                        .map(|s| s.to_string_lossy().into_owned())
                        .unwrap_or_default(),
                    field_override: args.field,
                    cells: (set.i_range.0, set.i_range.1, set.j_range.0, set.j_range.1),
                    jobs,
                },
                versions: VersionsDoc { lyucone: env!("CARGO_PKG_VERSION") },
            };
            println!("{}", serde_json::to_string_pretty(&doc).expect("serializable"));
        }
    }
    if args.timings {
        eprintln!("timing: parse {t_parse:?}");
        eprintln!("timing: compute {t_compute:?}");
        eprintln!("timing: total {:?}", t0.elapsed());
    }
    Ok(())
}

fn veronese_command(
    input: PathBuf,
    t: u32,
    field: Option<u64>,
    max_vars: usize,
    timings: bool,
) -> Result<(), Failure> {
    let t0 = Instant::now();
    if t < 1 {
        return Err(Failure::input("--veronese-t must be at least 1"));
    }
    let cone = load_cone(&input, field, max_vars)?;
    let re = veronese_ideal(&cone, t, max_vars)?;
    print!("{}", render_input(&re));
    if timings {
        eprintln!("timing: total {:?}", t0.elapsed());
    }
    Ok(())
}

#[derive(Serialize)]
struct CompareDoc {
    command: String,
    report: ComparisonReport,
    versions: VersionsDoc,
}

#[allow(clippy::too_many_arguments)]
fn compare_command(
    inputs: Vec<PathBuf>,
    veronese_t: Option<u32>,
    aug: bool,
    field: Option<u64>,
    format: Format,
    max_vars: usize,
    timings: bool,
) -> Result<(), Failure> {
    let t0 = Instant::now();
    if inputs.is_empty() {
        return Err(Failure::input("compare needs at least one input file"));
    }
    let mut embeddings = Vec::new();
    for path in &inputs {
        let cone = load_cone(path, field, max_vars)?;
        embeddings.push(EmbeddingPresentation::original(cone));
    }
    if let Some(t) = veronese_t {
        let re = veronese_ideal(&embeddings[0].cone, t, max_vars)?;
        embeddings
            .push(EmbeddingPresentation { cone: re, provenance: Provenance::Veronese { t } });
    }
    if aug {
        let re = linear_augment(&embeddings[0].cone);
        embeddings
            .push(EmbeddingPresentation { cone: re, provenance: Provenance::LinearAugment });
    }
    if embeddings.len() < 2 {
        return Err(Failure::input(
            "compare needs at least two embeddings (more files, --veronese-t, or --linear-augment)",
        ));
    }
    let report = compare_invariants(&embeddings)?;
    match format {
        Format::Pretty => print!("{}", report.to_text()),
        Format::Tsv => {
            println!("m0_equal\t{}", report.m0_verdict.equal);
            println!("lambda_equal\t{}", report.lambda_verdict.equal);
        }
        Format::Json => {
            let doc = CompareDoc {
                command: "compare".into(),
                report,
                versions: VersionsDoc { lyucone: env!("CARGO_PKG_VERSION") },
            };
            println!("{}", serde_json::to_string_pretty(&doc).expect("serializable"));
        }
    }
    if timings {
        eprintln!("timing: total {:?}", t0.elapsed());
    }
    Ok(())
}

fn oracle_command(
    input: PathBuf,
    field: Option<u64>,
    format: Format,
    timings: bool,
    time_budget_secs: Option<u64>,
) -> Result<(), Failure> {
    let t0 = Instant::now();
    let cone = load_cone(&input, field, 16)?;
    let cone_worker = cone.clone();
    let (set, oracle) = with_budget(time_budget_secs, move || {
        let set = compute_tables_jobs(&cone_worker, true, CellFilter::full(cone_worker.d()), 1)?;
        let oracle = oracle_lyubeznik_monomial(&cone_worker)?;
        Ok::<_, Error>((set, oracle))
    })??;
    let matches = set.lambda == oracle;
    match format {
        Format::Pretty => {
            if matches {
                println!("oracle-check: MATCH");
            } else {
                println!("oracle-check: MISMATCH");
            }
            for i in 0..=set.d + 1 {
                for j in 0..=set.d + 1 {
                    if set.lambda.entries[i][j] != oracle.entries[i][j] {
                        println!(
                            "cell ({i},{j}): pipeline {} vs oracle {}",
                            set.lambda.entries[i][j], oracle.entries[i][j]
                        );
                    }
                }
            }
        }
        Format::Tsv => println!("match\t{matches}"),
        Format::Json => {
            #[derive(Serialize)]
            struct OracleDoc {
                command: String,
                matches: bool,
                pipeline: Vec<Vec<u64>>,
                oracle: Vec<Vec<u64>>,
                versions: VersionsDoc,
            }
            let doc = OracleDoc {
                command: "oracle-check".into(),
                matches,
                pipeline: set.lambda.entries.clone(),
                oracle: oracle.entries.clone(),
                versions: VersionsDoc { lyucone: env!("CARGO_PKG_VERSION") },
            };
            println!("{}", serde_json::to_string_pretty(&doc).expect("serializable"));
        }
    }
    if timings {
        eprintln!("timing: total {:?}", t0.elapsed());
    }
    if matches {
        Ok(())
    } else {
        Err(Failure { code: 4, message: "pipeline and oracle tables differ".into() })
    }
}
