//! `pers`: command-line front end for strict interleavings, filtered
//! complexes and barcodes. All interchange is JSON with exact rationals
//! written as strings.
//!
//! Exit codes: 0 ok, 1 property violated, 2 schema error, 3 budget
//! exceeded, 4 precondition not met.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};
use pers_core::category::{Category, CategoryTag, Complex, F2Vec, FinSet};
use pers_core::distances::{bottleneck, stability_audit};
use pers_core::filtered::{
    degree_rips, function_rips, is_filtered, sq_gadget, vietoris_rips, FilteredComplex, MetricInput, SquareDiagram,
};
use pers_core::invariants::{barcode, homology, pi0, Barcode};
use pers_core::persist::{
    covering_window, floor_roundtrip_certificate, interleaving_distance, Interleaving, PersistentObject,
};
use pers_core::rectify::zigzag;
use pers_core::sample;
use pers_core::{Error, Grade, Rational};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

const DEFAULT_MAX_ENUM: u64 = 2_000_000;
const DEFAULT_WINDOW: i64 = 64;

#[derive(Parser)]
#[command(name = "pers", version, about = "Strict interleavings, filtered complexes and barcodes")]
struct Cli {
    /// Write the result here instead of standard output.
    #[arg(short, long, global = true)]
    output: Option<PathBuf>,

    /// Budget for brute-force searches (maps tried per candidate shift).
    #[arg(long, global = true, default_value_t = DEFAULT_MAX_ENUM)]
    max_enum: u64,

    /// Largest integer window width accepted by reindexing commands.
    #[arg(long, global = true, default_value_t = DEFAULT_WINDOW)]
    window: i64,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Distance matrix to its Vietoris-Rips filtered complex.
    Rips {
        input: PathBuf,
        #[arg(long, default_value_t = 2)]
        max_dim: usize,
    },
    /// Distance matrix with vertex values to the function-Rips bifiltration.
    Frips {
        input: PathBuf,
        #[arg(long, default_value_t = 2)]
        max_dim: usize,
    },
    /// Distance matrix to the degree-Rips persistent complex.
    DegreeRips {
        input: PathBuf,
        #[arg(long, default_value_t = 2)]
        max_dim: usize,
    },
    /// Checks that a filtered complex is closed under faces with monotone grades.
    Validate { input: PathBuf },
    /// Decides whether a persistent complex is filtered.
    IsFiltered { input: PathBuf },
    /// The `n`-skeleton of a filtered complex.
    Skeleton {
        input: PathBuf,
        #[arg(long)]
        dim: usize,
    },
    /// Persistent set of connected components.
    Pi0 { input: PathBuf },
    /// Persistent F2-homology in one degree (one parameter).
    Homology {
        input: PathBuf,
        #[arg(long)]
        dim: usize,
    },
    /// Barcode of a module, or of `H_dim` of a complex.
    Barcode {
        input: PathBuf,
        #[arg(long, default_value_t = 0)]
        dim: usize,
    },
    /// Bottleneck distance of two barcodes with an optimal matching.
    Bottleneck { left: PathBuf, right: PathBuf },
    /// Checks an interleaving certificate.
    InterleaveCheck { input: PathBuf },
    /// Least certified interleaving shift of two sets or modules (one parameter).
    InterleaveDist { left: PathBuf, right: PathBuf },
    /// Zig-zag rectification of an m-interleaving of integer-indexed objects.
    Rectify {
        input: PathBuf,
        /// Print only the composite certificate.
        #[arg(long)]
        composite_only: bool,
    },
    /// Certificate that an object is 1-interleaved with its integer floor extension.
    RoundtripFloor { input: PathBuf },
    /// Bottleneck stability audit of a certificate between persistent complexes.
    StabilityAudit {
        input: PathBuf,
        #[arg(long, default_value_t = 0)]
        dim: usize,
    },
    /// The two-parameter object built from a commuting square of complexes.
    SqGadget { input: PathBuf },
    /// The self-interleaving of an object by its structure maps.
    SelfInterleave {
        input: PathBuf,
        #[arg(long, default_value = "0")]
        shift: String,
    },
    /// Seeded random inputs.
    Sample {
        #[arg(value_enum)]
        kind: SampleKind,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Points for `points`, largest object size otherwise.
        #[arg(long, default_value_t = 4)]
        size: usize,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum SampleKind {
    /// A 1-interleaving certificate of integer-indexed finite sets.
    ZPair,
    /// A rational-indexed persistent F2-module.
    Module,
    /// A distance matrix of integer points in the plane.
    Points,
    /// A barcode.
    Barcode,
}

/// A failure carrying its exit code.
struct Failure {
    code: u8,
    kind: &'static str,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let (code, kind) = match &e {
            Error::Parse(_) => (2, "schema"),
            Error::BudgetExceeded { .. } => (3, "budget"),
            Error::Precondition(_)
            | Error::Unsupported(_)
            | Error::InvalidScale(_)
            | Error::NegativeShift(_)
            | Error::ObjectMismatch(_)
            | Error::InvalidCertificate(_) => (4, "precondition"),
            Error::NotNatural { .. } => (1, "violation"),
            _ => (2, "schema"),
        };
        Failure { code, kind, message: e.to_string() }
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Failure { code: 2, kind: "schema", message: e.to_string() }
    }
}

fn io_failure(path: &Path, e: std::io::Error) -> Failure {
    Failure { code: 2, kind: "io", message: format!("{}: {e}", path.display()) }
}

type Outcome = Result<(Value, bool), Failure>;

fn read_json(path: &Path) -> Result<Value, Failure> {
    let text = fs::read_to_string(path).map_err(|e| io_failure(path, e))?;
    Ok(serde_json::from_str(&text)?)
}

fn format_of(v: &Value) -> &str {
    v.get("format").and_then(Value::as_str).unwrap_or("")
}

fn category_of(v: &Value) -> Result<CategoryTag, Failure> {
    Ok(serde_json::from_value(v.get("category").cloned().unwrap_or(Value::Null))?)
}

fn parse<T: serde::de::DeserializeOwned>(v: Value) -> Result<T, Failure> {
    Ok(serde_json::from_value(v)?)
}

fn to_value<T: Serialize>(t: &T) -> Result<Value, Failure> {
    Ok(serde_json::to_value(t)?)
}

/// A persistent complex, from either a filtered complex or a persistent object.
fn load_complex(v: Value) -> Result<PersistentObject<Complex>, Failure> {
    match format_of(&v) {
        pers_core::filtered::FILTERED_FORMAT => Ok(parse::<FilteredComplex>(v)?.to_persistent()?),
        _ => parse(v),
    }
}

fn precondition(message: impl Into<String>) -> Failure {
    Failure { code: 4, kind: "precondition", message: message.into() }
}

fn check_window<C: Category>(x: &PersistentObject<C>, limit: i64) -> Result<(), Failure> {
    let (lo, hi) = covering_window(x);
    if hi - lo > limit {
        return Err(Failure {
            code: 3,
            kind: "budget",
            message: format!("window [{lo}, {hi}] is wider than --window {limit}"),
        });
    }
    Ok(())
}

fn check_cert<C: Category>(v: Value) -> Outcome {
    let cert: Interleaving<C> = parse(v)?;
    let report = cert.check()?;
    let ok = report.valid;
    Ok((to_value(&report)?, ok))
}

fn rectify<C: Category>(v: Value, window: i64, composite_only: bool) -> Outcome {
    let cert: Interleaving<C> = parse(v)?;
    check_window(cert.x(), window)?;
    check_window(cert.y(), window)?;
    let z = zigzag(&cert)?;
    let report = z.composite.check()?;
    let ok = report.valid && z.even_part_matches && z.odd_part_matches;
    if composite_only {
        return Ok((to_value(&z.composite)?, ok));
    }
    let mut out = to_value(&z)?;
    out["composite_report"] = to_value(&report)?;
    Ok((out, ok))
}

fn roundtrip<C: Category>(v: Value, window: i64) -> Outcome {
    let x: PersistentObject<C> = parse(v)?;
    check_window(&x, window)?;
    let cert = floor_roundtrip_certificate(&Arc::new(x))?;
    let ok = cert.is_valid()?;
    Ok((to_value(&cert)?, ok))
}

fn self_interleave<C: Category>(v: Value, shift: &Rational) -> Outcome {
    let x: PersistentObject<C> = parse(v)?;
    let delta = Grade::diagonal(x.m(), shift.clone());
    let cert = Interleaving::self_interleaving(Arc::new(x), &delta)?;
    Ok((to_value(&cert)?, true))
}

fn distance<C: pers_core::category::Enumerable>(left: Value, right: Value, budget: u64) -> Outcome {
    let x: Arc<PersistentObject<C>> = Arc::new(parse(left)?);
    let y: Arc<PersistentObject<C>> = Arc::new(parse(right)?);
    let search = interleaving_distance(&x, &y, budget)?;
    Ok((to_value(&search)?, true))
}

fn barcode_of(v: Value, dim: usize) -> Result<Barcode, Failure> {
    let is_module = format_of(&v) == pers_core::persist::OBJECT_FORMAT && category_of(&v)? == CategoryTag::F2Vec;
    let module = if is_module { parse(v)? } else { homology(&load_complex(v)?, dim)? };
    Ok(barcode(&module)?)
}

fn run(cli: Cli) -> Outcome {
    let budget = cli.max_enum;
    let window = cli.window;
    match cli.command {
        Command::Rips { input, max_dim } => {
            let metric: MetricInput = parse(read_json(&input)?)?;
            Ok((to_value(&vietoris_rips(&metric, max_dim)?)?, true))
        }
        Command::Frips { input, max_dim } => {
            let metric: MetricInput = parse(read_json(&input)?)?;
            Ok((to_value(&function_rips(&metric, max_dim)?)?, true))
        }
        Command::DegreeRips { input, max_dim } => {
            let metric: MetricInput = parse(read_json(&input)?)?;
            Ok((to_value(&degree_rips(&metric, max_dim)?)?, true))
        }
        Command::Validate { input } => {
            let k: FilteredComplex = parse(read_json(&input)?)?;
            let report = k.validate();
            let ok = report.valid;
            Ok((to_value(&report)?, ok))
        }
        Command::IsFiltered { input } => {
            let report = is_filtered(&load_complex(read_json(&input)?)?)?;
            let ok = report.filtered;
            Ok((to_value(&report)?, ok))
        }
        Command::Skeleton { input, dim } => {
            let k: FilteredComplex = parse(read_json(&input)?)?;
            Ok((to_value(&k.skeleton(dim))?, true))
        }
        Command::Pi0 { input } => Ok((to_value(&pi0(&load_complex(read_json(&input)?)?)?)?, true)),
        Command::Homology { input, dim } => {
            Ok((to_value(&homology(&load_complex(read_json(&input)?)?, dim)?)?, true))
        }
        Command::Barcode { input, dim } => Ok((to_value(&barcode_of(read_json(&input)?, dim)?)?, true)),
        Command::Bottleneck { left, right } => {
            let a: Barcode = parse(read_json(&left)?)?;
            let b: Barcode = parse(read_json(&right)?)?;
            Ok((to_value(&bottleneck(&a, &b))?, true))
        }
        Command::InterleaveCheck { input } => {
            let v = read_json(&input)?;
            match category_of(&v)? {
                CategoryTag::FinSet => check_cert::<FinSet>(v),
                CategoryTag::F2Vec => check_cert::<F2Vec>(v),
                CategoryTag::Complex => check_cert::<Complex>(v),
            }
        }
        Command::InterleaveDist { left, right } => {
            let (l, r) = (read_json(&left)?, read_json(&right)?);
            match (category_of(&l)?, category_of(&r)?) {
                (CategoryTag::FinSet, CategoryTag::FinSet) => distance::<FinSet>(l, r, budget),
                (CategoryTag::F2Vec, CategoryTag::F2Vec) => distance::<F2Vec>(l, r, budget),
                (a, b) => Err(precondition(format!("cannot search interleavings between {a} and {b} objects"))),
            }
        }
        Command::Rectify { input, composite_only } => {
            let v = read_json(&input)?;
            match category_of(&v)? {
                CategoryTag::FinSet => rectify::<FinSet>(v, window, composite_only),
                CategoryTag::F2Vec => rectify::<F2Vec>(v, window, composite_only),
                CategoryTag::Complex => rectify::<Complex>(v, window, composite_only),
            }
        }
        Command::RoundtripFloor { input } => {
            let v = read_json(&input)?;
            match category_of(&v)? {
                CategoryTag::FinSet => roundtrip::<FinSet>(v, window),
                CategoryTag::F2Vec => roundtrip::<F2Vec>(v, window),
                CategoryTag::Complex => roundtrip::<Complex>(v, window),
            }
        }
        Command::StabilityAudit { input, dim } => {
            let cert: Interleaving<Complex> = parse(read_json(&input)?)?;
            let report = stability_audit(&cert, dim)?;
            let ok = report.holds;
            Ok((to_value(&report)?, ok))
        }
        Command::SqGadget { input } => {
            let d: SquareDiagram = parse(read_json(&input)?)?;
            Ok((to_value(&sq_gadget(&d)?)?, true))
        }
        Command::SelfInterleave { input, shift } => {
            let shift: Rational = shift.parse()?;
            let v = read_json(&input)?;
            match category_of(&v)? {
                CategoryTag::FinSet => self_interleave::<FinSet>(v, &shift),
                CategoryTag::F2Vec => self_interleave::<F2Vec>(v, &shift),
                CategoryTag::Complex => self_interleave::<Complex>(v, &shift),
            }
        }
        Command::Sample { kind, seed, size } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let out = match kind {
                SampleKind::ZPair => {
                    let a = Arc::new(sample::random_z_object::<FinSet, _>(&mut rng, -4, 4, size)?);
                    to_value(&sample::reindexed_partner(&mut rng, &a)?)?
                }
                SampleKind::Module => to_value(&sample::random_r_object::<F2Vec, _>(&mut rng, 4, size)?)?,
                SampleKind::Points => to_value(&sample::random_points(&mut rng, size, 2, 4)?)?,
                SampleKind::Barcode => to_value(&sample::random_barcode(&mut rng, size, 4, 2, 0.2))?,
            };
            Ok((out, true))
        }
    }
}

fn emit(path: Option<&Path>, value: &Value) -> Result<(), Failure> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    match path {
        Some(p) => fs::write(p, text).map_err(|e| io_failure(p, e)),
        None => std::io::stdout().write_all(text.as_bytes()).map_err(|e| io_failure(Path::new("<stdout>"), e)),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let output = cli.output.clone();
    let result = run(cli).and_then(|(value, ok)| emit(output.as_deref(), &value).map(|()| ok));
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(f) => {
            let report = json!({ "error": f.kind, "exit_code": f.code, "message": f.message });
            eprintln!("{report}");
            ExitCode::from(f.code)
        }
    }
}
