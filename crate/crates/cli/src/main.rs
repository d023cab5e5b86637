//! Command-line front end: computes invariants, reproduces the instanton
//! tables, and exports fixed-point graph catalogs.
//!
//! Exit codes: 0 success, 2 invalid arguments, 3 degenerate weights after
//! all fallbacks, 4 integrality violation in the instanton inversion.

use std::io::Write;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use bott_core::rational::{bigint_to_i64, parse_rational, to_i64};
use bott_core::{
    cicy_reports, count_fixed_graphs, decorated_shapes, enumerate_labelings, lines_report, CYType,
    Error, InvariantReport, WeightVector, DEFAULT_MAX_DEGREE,
};

/// Environment variable providing the default worker count.
const JOBS_ENV: &str = "BOTT_JOBS";

#[derive(Parser)]
#[command(
    name = "bott",
    version,
    about = "Exact rational-curve counts on Calabi-Yau threefolds via torus localization"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Invariants N_d and instanton numbers n_d of the quintic threefold.
    Quintic {
        /// Curve degree d.
        #[arg(long)]
        degree: u32,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Invariants of a complete-intersection Calabi-Yau threefold.
    Cicy {
        /// Intersection type as comma-separated degrees, e.g. 3,3 or 2,2,2,2.
        #[arg(long = "type", value_name = "D1,D2,...")]
        ty: String,
        /// Curve degree d.
        #[arg(long)]
        degree: u32,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Lines on a general hypersurface of degree 2r-3 in P^r.
    Lines {
        /// Ambient projective dimension r (at least 2).
        #[arg(long)]
        dim: usize,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Count or list the torus-fixed graphs for (r, d).
    Graphs {
        /// Ambient projective dimension r.
        #[arg(long)]
        dim: usize,
        /// Curve degree d.
        #[arg(long)]
        degree: u32,
        /// Print only the number of graphs.
        #[arg(long, conflicts_with = "list")]
        count: bool,
        /// Print one catalog record per graph.
        #[arg(long)]
        list: bool,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Reproduce an instanton-number table.
    Table {
        /// 1 for the quintic table, 2 for the four remaining types.
        #[arg(long)]
        which: u8,
        /// Last curve degree row.
        #[arg(long)]
        max_degree: u32,
        #[command(flatten)]
        common: CommonArgs,
    },
}

#[derive(Args)]
struct CommonArgs {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Worker threads; defaults to BOTT_JOBS or all cores.
    #[arg(long)]
    jobs: Option<usize>,
    /// Torus weights: pow10, primes, or an explicit comma-separated list.
    #[arg(long, default_value = "pow10")]
    weights: String,
    /// Allow curve degrees above the default cap of 6.
    #[arg(long)]
    allow_high_degree: bool,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

/// One invariant, serialized. Field order is the wire format; numeric
/// companions appear only when the value is integral and fits in 64 bits.
#[derive(Serialize, Deserialize)]
struct JsonReport {
    command: String,
    r: usize,
    degree: u32,
    #[serde(rename = "type")]
    ty: Option<Vec<u32>>,
    #[serde(rename = "N")]
    gw: String,
    n: Option<String>,
    graph_count: u64,
    weight_strategy: String,
    jobs: usize,
    elapsed_ms: u64,
    #[serde(rename = "N_int", skip_serializing_if = "Option::is_none", default)]
    gw_int: Option<i64>,
    #[serde(rename = "n_int", skip_serializing_if = "Option::is_none", default)]
    n_int: Option<i64>,
}

impl JsonReport {
    fn from_report(
        command: &str,
        ty: Option<Vec<u32>>,
        report: &InvariantReport,
        jobs: usize,
    ) -> Self {
        JsonReport {
            command: command.to_string(),
            r: report.r,
            degree: report.degree,
            ty,
            gw: report.gw.to_string(),
            n: report.instanton.as_ref().map(|n| n.to_string()),
            graph_count: report.graph_count,
            weight_strategy: report.weight_strategy.to_string(),
            jobs,
            elapsed_ms: report.elapsed.as_millis() as u64,
            gw_int: to_i64(&report.gw),
            n_int: report.instanton.as_ref().and_then(bigint_to_i64),
        }
    }
}

#[derive(Serialize, Deserialize)]
struct GraphCountJson {
    command: String,
    r: usize,
    degree: u32,
    graph_count: u64,
    elapsed_ms: u64,
}

fn main() {
    let cli = Cli::parse();
    if let Err(e) = run(cli) {
        eprintln!("error: {e}");
        std::process::exit(match e {
            Error::DegenerateWeights { .. } => 3,
            Error::IntegralityViolation { .. } => 4,
            _ => 2,
        });
    }
}

fn run(cli: Cli) -> Result<(), Error> {
    match cli.command {
        Command::Quintic { degree, common } => {
            invariant_command("quintic", CYType::new(vec![5])?, degree, &common)
        }
        Command::Cicy { ty, degree, common } => {
            let ty = parse_type(&ty)?;
            invariant_command("cicy", ty, degree, &common)
        }
        Command::Lines { dim, common } => lines_command(dim, &common),
        Command::Graphs {
            dim,
            degree,
            count,
            list,
            common,
        } => graphs_command(dim, degree, count, list, &common),
        Command::Table {
            which,
            max_degree,
            common,
        } => table_command(which, max_degree, &common),
    }
}

fn invariant_command(
    command: &str,
    ty: CYType,
    degree: u32,
    common: &CommonArgs,
) -> Result<(), Error> {
    check_degree(degree, common)?;
    let r = ty.ambient_dim();
    let w = resolve_weights(&common.weights, r)?;
    let jobs = resolve_jobs(common);
    let reports = in_pool(jobs, || cicy_reports(&ty, degree, &w))?;
    let report = reports.last().expect("degree >= 1");
    match common.format {
        Format::Text => {
            println!("N_{} = {}", report.degree, report.gw);
            println!(
                "n_{} = {}",
                report.degree,
                report.instanton.as_ref().expect("inverted")
            );
        }
        Format::Json => {
            let json = JsonReport::from_report(
                command,
                Some(ty.degrees().to_vec()),
                report,
                jobs_used(jobs),
            );
            println!(
                "{}",
                serde_json::to_string(&json).expect("serializable report")
            );
        }
    }
    Ok(())
}

fn lines_command(dim: usize, common: &CommonArgs) -> Result<(), Error> {
    if dim < 2 {
        return Err(Error::InvalidInput(format!(
            "lines need --dim at least 2, got {dim}"
        )));
    }
    let w = resolve_weights(&common.weights, dim)?;
    let jobs = resolve_jobs(common);
    let report = in_pool(jobs, || lines_report(dim, &w))?;
    match common.format {
        Format::Text => println!("lines = {}", report.gw),
        Format::Json => {
            let hyper_degree = 2 * dim as u32 - 3;
            let json = JsonReport::from_report(
                "lines",
                Some(vec![hyper_degree]),
                &report,
                jobs_used(jobs),
            );
            println!(
                "{}",
                serde_json::to_string(&json).expect("serializable report")
            );
        }
    }
    Ok(())
}

fn graphs_command(
    dim: usize,
    degree: u32,
    count: bool,
    list: bool,
    common: &CommonArgs,
) -> Result<(), Error> {
    if dim < 1 {
        return Err(Error::InvalidInput("graphs need --dim at least 1".into()));
    }
    if !count && !list {
        return Err(Error::InvalidInput(
            "graphs needs one of --count or --list".into(),
        ));
    }
    check_degree(degree, common)?;
    let start = Instant::now();
    if list {
        let stdout = std::io::stdout();
        let mut out = stdout.lock();
        for shape in decorated_shapes(degree) {
            for g in enumerate_labelings(&shape, dim) {
                writeln!(out, "{}", g.catalog_line())
                    .map_err(|e| Error::InvalidInput(format!("write failed: {e}")))?;
            }
        }
        return Ok(());
    }
    let total = count_fixed_graphs(dim, degree);
    match common.format {
        Format::Text => println!("{total}"),
        Format::Json => {
            let json = GraphCountJson {
                command: "graphs".into(),
                r: dim,
                degree,
                graph_count: total,
                elapsed_ms: start.elapsed().as_millis() as u64,
            };
            println!(
                "{}",
                serde_json::to_string(&json).expect("serializable report")
            );
        }
    }
    Ok(())
}

fn table_command(which: u8, max_degree: u32, common: &CommonArgs) -> Result<(), Error> {
    check_degree(max_degree, common)?;
    let types: Vec<CYType> = match which {
        1 => vec![CYType::new(vec![5])?],
        2 => vec![
            CYType::new(vec![4, 2])?,
            CYType::new(vec![3, 3])?,
            CYType::new(vec![3, 2, 2])?,
            CYType::new(vec![2, 2, 2, 2])?,
        ],
        other => {
            return Err(Error::InvalidInput(format!(
                "table --which must be 1 or 2, got {other}"
            )));
        }
    };
    let jobs = resolve_jobs(common);
    let mut columns = Vec::new();
    for ty in &types {
        let w = resolve_weights(&common.weights, ty.ambient_dim())?;
        columns.push(in_pool(jobs, || cicy_reports(ty, max_degree, &w))?);
    }
    match common.format {
        Format::Text => {
            let header: Vec<String> = std::iter::once("d".to_string())
                .chain(types.iter().map(|t| t.to_string()))
                .collect();
            println!("{}", header.join("\t"));
            for d in 0..max_degree as usize {
                let row: Vec<String> = std::iter::once((d + 1).to_string())
                    .chain(
                        columns
                            .iter()
                            .map(|c| c[d].instanton.as_ref().expect("inverted").to_string()),
                    )
                    .collect();
                println!("{}", row.join("\t"));
            }
        }
        Format::Json => {
            let reports: Vec<JsonReport> = columns
                .iter()
                .zip(&types)
                .flat_map(|(column, ty)| {
                    column.iter().map(|report| {
                        JsonReport::from_report(
                            "table",
                            Some(ty.degrees().to_vec()),
                            report,
                            jobs_used(jobs),
                        )
                    })
                })
                .collect();
            println!(
                "{}",
                serde_json::to_string(&reports).expect("serializable report")
            );
        }
    }
    Ok(())
}

fn parse_type(spec: &str) -> Result<CYType, Error> {
    let degrees = spec
        .split(',')
        .map(|part| {
            part.trim()
                .parse::<u32>()
                .map_err(|e| Error::InvalidType(format!("bad degree {part:?}: {e}")))
        })
        .collect::<Result<Vec<_>, _>>()?;
    CYType::new(degrees)
}

fn resolve_weights(spec: &str, r: usize) -> Result<WeightVector, Error> {
    match spec {
        "pow10" => Ok(WeightVector::pow10(r)),
        "primes" => Ok(WeightVector::primes(r)),
        list => {
            let weights = list
                .split(',')
                .map(parse_rational)
                .collect::<Result<Vec<_>, _>>()
                .map_err(|e| Error::InvalidWeights(e.to_string()))?;
            if weights.len() != r + 1 {
                return Err(Error::InvalidWeights(format!(
                    "need {} weights for r = {r}, got {}",
                    r + 1,
                    weights.len()
                )));
            }
            WeightVector::custom(weights)
        }
    }
}

fn check_degree(degree: u32, common: &CommonArgs) -> Result<(), Error> {
    if degree < 1 {
        return Err(Error::InvalidInput("degree must be at least 1".into()));
    }
    if degree > DEFAULT_MAX_DEGREE {
        if !common.allow_high_degree {
            return Err(Error::InvalidInput(format!(
                "degree {degree} exceeds the default cap of {DEFAULT_MAX_DEGREE}; \
                 pass --allow-high-degree to run it anyway"
            )));
        }
        eprintln!(
            "warning: degree {degree} exceeds {DEFAULT_MAX_DEGREE}; runtimes grow steeply and \
             instanton numbers are reported without asserting they count curves"
        );
    }
    Ok(())
}

fn resolve_jobs(common: &CommonArgs) -> Option<usize> {
    common.jobs.or_else(|| {
        std::env::var(JOBS_ENV)
            .ok()
            .and_then(|v| v.parse::<usize>().ok())
            .filter(|&n| n > 0)
    })
}

fn jobs_used(jobs: Option<usize>) -> usize {
    jobs.unwrap_or_else(rayon::current_num_threads)
}

/// Runs `f` on a dedicated pool of `jobs` workers, or on the default pool.
fn in_pool<T: Send>(jobs: Option<usize>, f: impl FnOnce() -> T + Send) -> T {
    match jobs {
        None => f(),
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .expect("worker pool")
            .install(f),
    }
}
