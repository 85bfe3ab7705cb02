mod render;

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;
use std::time::Instant;

use censtab_core::presentation::ModulePresentation;
use censtab_core::relations::{relations_report, RelationsRequest};
use censtab_core::stability::{
    check_central_stability, check_d_step, check_reducing_idempotent, empirical_prd, CheckOptions,
};
use censtab_core::{BuiltinParams, Category, CategorySpec, Degree, Error};
use censtab_linalg::{rank, smith_normal_form, LinalgError, Matrix, RingSpec};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use render::Report;

#[derive(Parser, Debug)]
#[command(name = "censtab", version, about = "Central stability and relation checks for graded modules over combinatorial categories")]
struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Human, global = true)]
    format: Format,
    /// Largest hom-set the run may enumerate.
    #[arg(long = "hom-cap", default_value_t = censtab_core::category::DEFAULT_HOM_CAP, global = true)]
    hom_cap: usize,
    /// Include wall-clock time in the report.
    #[arg(long, global = true)]
    timing: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Human,
    Json,
}

#[derive(Args, Debug)]
struct CategoryArgs {
    /// Built-in family id (fi, fi_a, oi_a, fs_op, vi, plactic, counterexample) or a JSON file.
    #[arg(long)]
    category: String,
    #[arg(long)]
    a: Option<u8>,
    #[arg(long)]
    q: Option<u8>,
    /// Comma-separated letters, e.g. 1,2,3.
    #[arg(long, value_delimiter = ',')]
    alphabet: Option<Vec<u8>>,
}

#[derive(Args, Debug)]
struct ModuleArgs {
    /// Module presentation file (JSON).
    #[arg(long)]
    module: PathBuf,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Hom-set sizes |hom(m,n)| for m ≤ n ≤ n-max.
    HomStat {
        #[command(flatten)]
        cat: CategoryArgs,
        #[arg(long = "n-max", default_value_t = 4)]
        n_max: Degree,
    },
    /// Central stability at truncation N in degrees 0..=n-max.
    CheckStability {
        #[command(flatten)]
        module: ModuleArgs,
        /// Defaults to the presentation degree bound of the file.
        #[arg(long = "N")]
        big_n: Option<Degree>,
        /// Defaults to the presentation degree bound plus 4.
        #[arg(long = "n-max")]
        n_max: Option<Degree>,
        /// Also build the tensor construction and compare.
        #[arg(long = "cross-check")]
        cross_check: bool,
    },
    /// d-step central stability for the window [N-(d-1), N].
    CheckDstep {
        #[command(flatten)]
        module: ModuleArgs,
        #[arg(long, default_value_t = 2)]
        d: usize,
        #[arg(long = "N")]
        big_n: Option<Degree>,
        #[arg(long = "n-max")]
        n_max: Option<Degree>,
        #[arg(long = "cross-check")]
        cross_check: bool,
    },
    /// Least N for which central stability holds up to n-max.
    Prd {
        #[command(flatten)]
        module: ModuleArgs,
        /// Defaults to the presentation degree bound plus 1.
        #[arg(long = "N-max")]
        big_n_max: Option<Degree>,
        #[arg(long = "n-max")]
        n_max: Option<Degree>,
    },
    /// Degree-d generation of the ideal of relations over each ring.
    CheckRelations {
        #[command(flatten)]
        cat: CategoryArgs,
        #[arg(long, default_value_t = 2)]
        d: usize,
        /// Restrict to a single source degree.
        #[arg(long)]
        m: Option<Degree>,
        /// Restrict to a single target degree.
        #[arg(long)]
        n: Option<Degree>,
        #[arg(long = "n-max", default_value_t = 4)]
        n_max: Degree,
        /// Rings to test; defaults to F2, F3 and Z.
        #[arg(long, value_delimiter = ',')]
        ring: Option<Vec<String>>,
    },
    /// Conditions (i) and (ii) of the sufficiency criterion.
    CheckConditions {
        #[command(flatten)]
        cat: CategoryArgs,
        #[arg(long, default_value_t = 2)]
        d: usize,
        #[arg(long)]
        m: Option<Degree>,
        #[arg(long = "n-max", default_value_t = 4)]
        n_max: Degree,
    },
    /// Restriction along the reducing idempotent e_{m+1,N} ≤ e_{m,N} in degree n.
    ReduceIdempotent {
        #[command(flatten)]
        module: ModuleArgs,
        #[arg(long, default_value_t = 0)]
        m: Degree,
        #[arg(long = "N")]
        big_n: Degree,
        #[arg(long)]
        n: Degree,
        #[arg(long, default_value_t = 2)]
        d: usize,
    },
    /// Smith normal form of an integer matrix, or rank over F_p.
    Snf {
        /// Rows as JSON, e.g. "[[2,4],[6,8]]".
        #[arg(long)]
        matrix: String,
        #[arg(long, default_value = "Z")]
        ring: String,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::HomStat { .. } => "hom-stat",
            Command::CheckStability { .. } => "check-stability",
            Command::CheckDstep { .. } => "check-dstep",
            Command::Prd { .. } => "prd",
            Command::CheckRelations { .. } => "check-relations",
            Command::CheckConditions { .. } => "check-conditions",
            Command::ReduceIdempotent { .. } => "reduce-idempotent",
            Command::Snf { .. } => "snf",
        }
    }
}

/// Outcome of a run that produced a report.
enum Status {
    Pass,
    Fail,
    Capped,
}

impl Status {
    fn of(passed: bool, complete: bool) -> Status {
        match (complete, passed) {
            (false, _) => Status::Capped,
            (true, true) => Status::Pass,
            (true, false) => Status::Fail,
        }
    }
}

fn load_category(args: &CategoryArgs, cap: usize) -> Result<Arc<Category>, Error> {
    let path = Path::new(&args.category);
    let spec = if args.category.ends_with(".json") || path.is_file() {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Input(format!("{}: {e}", path.display())))?;
        let value: Value = serde_json::from_str(&text).map_err(|e| Error::Input(format!("{}: {e}", path.display())))?;
        CategorySpec::from_json(&value).map_err(|e| match e {
            Error::Input(msg) => Error::Input(format!("{}: {msg}", path.display())),
            other => other,
        })?
    } else {
        let params = BuiltinParams { a: args.a, q: args.q, alphabet: args.alphabet.clone() };
        CategorySpec::builtin(&args.category, &params)?
    };
    Ok(Arc::new(Category::with_cap(spec, cap)?))
}

fn load_module(args: &ModuleArgs, cap: usize) -> Result<ModulePresentation, Error> {
    let path = &args.module;
    let text = std::fs::read_to_string(path).map_err(|e| Error::Input(format!("{}: {e}", path.display())))?;
    ModulePresentation::from_json(&text, cap).map_err(|e| match e {
        Error::Input(msg) => Error::Input(format!("{}: {msg}", path.display())),
        Error::InvalidPresentation(msg) => Error::InvalidPresentation(format!("{}: {msg}", path.display())),
        other => other,
    })
}

fn parse_ring(s: &str) -> Result<RingSpec, Error> {
    s.parse::<RingSpec>().map_err(Error::from)
}

fn run(cli: &Cli) -> Result<(Report, Status), Error> {
    let cap = cli.hom_cap;
    match &cli.command {
        Command::HomStat { cat, n_max } => {
            let cat = load_category(cat, cap)?;
            let mut rows = Vec::new();
            let mut capped = None;
            'outer: for m in 0..=*n_max {
                for n in m..=*n_max {
                    if cat.objects_max().is_some_and(|top| n > top) {
                        break;
                    }
                    match cat.hom_size(m, n) {
                        Ok(size) => rows.push(json!({"m": m, "n": n, "size": size})),
                        Err(e) if e.is_resource_limit() => {
                            capped = Some(e.to_string());
                            break 'outer;
                        }
                        Err(e) => return Err(e),
                    }
                }
            }
            let complete = capped.is_none();
            let body = json!({"category": cat.id(), "n_max": n_max, "hom_sizes": rows, "complete": complete, "stopped_by": capped});
            Ok((Report::HomStat(body), Status::of(true, complete)))
        }
        Command::CheckStability { module, big_n, n_max, cross_check } => {
            let p = load_module(module, cap)?;
            let big_n = big_n.unwrap_or_else(|| p.max_degree());
            let n_max = n_max.unwrap_or_else(|| p.max_degree() + 4);
            let r = check_central_stability(&p, big_n, n_max, CheckOptions { cross_check: *cross_check })?;
            let status = Status::of(r.all_iso, r.complete);
            Ok((Report::Stability(r), status))
        }
        Command::CheckDstep { module, d, big_n, n_max, cross_check } => {
            let p = load_module(module, cap)?;
            let big_n = big_n.unwrap_or_else(|| p.max_degree() + 1);
            let n_max = n_max.unwrap_or_else(|| p.max_degree() + 4);
            let r = check_d_step(&p, *d, big_n, n_max, CheckOptions { cross_check: *cross_check })?;
            let status = Status::of(r.all_iso, r.complete);
            Ok((Report::Stability(r), status))
        }
        Command::Prd { module, big_n_max, n_max } => {
            let p = load_module(module, cap)?;
            let big_n_max = big_n_max.unwrap_or_else(|| p.max_degree() + 1);
            let n_max = n_max.unwrap_or_else(|| p.max_degree() + 4);
            let r = empirical_prd(&p, big_n_max, n_max)?;
            let status = Status::of(r.prd.is_some(), r.complete);
            Ok((Report::Prd(r), status))
        }
        Command::CheckRelations { cat, d, m, n, n_max, ring } => {
            let cat = load_category(cat, cap)?;
            let rings = match ring {
                Some(list) => list.iter().map(|s| parse_ring(s)).collect::<Result<Vec<_>, _>>()?,
                None => vec![RingSpec::PrimeField(2), RingSpec::PrimeField(3), RingSpec::Integers],
            };
            let n_max = n.unwrap_or(*n_max);
            let req = RelationsRequest {
                d: *d,
                m_min: m.unwrap_or(0),
                m_max: m.unwrap_or(n_max),
                n_min: n.unwrap_or(0),
                n_max,
                generation: true,
                conditions: false,
            };
            let r = relations_report(cat, &rings, req)?;
            let status = Status::of(r.passed, r.complete);
            Ok((Report::Relations(r), status))
        }
        Command::CheckConditions { cat, d, m, n_max } => {
            let cat = load_category(cat, cap)?;
            let req = RelationsRequest {
                d: *d,
                m_min: m.unwrap_or(0),
                m_max: m.unwrap_or(*n_max),
                n_min: 0,
                n_max: *n_max,
                generation: false,
                conditions: true,
            };
            let r = relations_report(cat, &[], req)?;
            let status = Status::of(r.passed, r.complete);
            Ok((Report::Relations(r), status))
        }
        Command::ReduceIdempotent { module, m, big_n, n, d } => {
            let p = load_module(module, cap)?;
            let r = check_reducing_idempotent(&p, *m, *big_n, *n, *d)?;
            let status = Status::of(r.verdict.is_iso(), true);
            Ok((Report::Idempotent(r), status))
        }
        Command::Snf { matrix, ring } => {
            let ring = parse_ring(ring)?;
            let mat = Matrix::parse(ring, matrix).map_err(|e| match e {
                LinalgError::Parse(msg) => Error::Input(format!("--matrix: {msg}")),
                other => Error::from(other),
            })?;
            let body = if ring == RingSpec::Integers {
                let s = smith_normal_form(&mat)?;
                json!({"ring": ring, "rows": mat.rows(), "cols": mat.cols(), "rank": s.rank, "diagonal": s.diagonal(),
                       "d": s.d, "u": s.u, "v": s.v})
            } else {
                let r = rank(&mat);
                json!({"ring": ring, "rows": mat.rows(), "cols": mat.cols(), "rank": r, "diagonal": vec![1; r]})
            };
            Ok((Report::Snf(body), Status::Pass))
        }
    }
}

fn exit_code_for(e: &Error) -> u8 {
    if e.is_resource_limit() { 3 } else { 2 }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    match run(&cli) {
        Ok((report, status)) => {
            let elapsed = cli.timing.then(|| start.elapsed());
            let out = match cli.format {
                Format::Json => {
                    let mut doc = report.to_json(cli.command.name());
                    if let Some(t) = elapsed {
                        doc["wall_time_ms"] = json!(t.as_millis() as u64);
                    }
                    let mut s = serde_json::to_string_pretty(&doc).expect("reports serialize");
                    s.push('\n');
                    s
                }
                Format::Human => {
                    let mut s = report.to_human();
                    if let Some(t) = elapsed {
                        s.push_str(&format!("wall time: {:.3} s\n", t.as_secs_f64()));
                    }
                    s
                }
            };
            print!("{out}");
            ExitCode::from(match status {
                Status::Pass => 0,
                Status::Fail => 1,
                Status::Capped => 3,
            })
        }
        Err(e) => {
            eprintln!("censtab {}: {e}", cli.command.name());
            ExitCode::from(exit_code_for(&e))
        }
    }
}
