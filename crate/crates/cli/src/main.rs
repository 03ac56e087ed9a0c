use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use k3picard::certificate::{Certificate, Status};
use k3picard::enumerate::{enumerate_classes, oracle_enumerate, EnumerationError};
use k3picard::family::{LatticeFamilyParams, Shape};
use k3picard::io::{ClassSpec, EnumerationOut, FamilyOut, IoError, LatticeSpec, QueryFile};
use k3picard::verify::{build_family, claim_shape, verify_claim, verify_table, ClaimId, VerifyError};

#[derive(Parser)]
#[command(name = "k3picard", version, about = "Verify linear-system claims on Picard lattices of K3 surfaces")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sweep every table row up to the caps and replay the matching claims.
    VerifyTable {
        #[arg(long, default_value_t = 10)]
        h_max: i64,
        #[arg(long, default_value_t = 12)]
        k_max: i64,
        /// Worker threads (defaults to the number of CPUs).
        #[arg(long)]
        jobs: Option<usize>,
        /// Write the JSON report here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Replay one claim, e.g. `3.10` or `Claim3.10`, and print its certificate.
    VerifyClaim {
        id: String,
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Build a family lattice and write it with its orthogonal-root certificate.
    Build {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run a complete enumeration described by a query file.
    Query { file: PathBuf },
    /// Brute-force scan of a query file over a coordinate box.
    Oracle {
        file: PathBuf,
        #[arg(long = "box")]
        half_width: Option<u32>,
    },
}

#[derive(Args)]
struct ParamArgs {
    #[arg(long, allow_negative_numbers = true)]
    j: i64,
    #[arg(long, allow_negative_numbers = true)]
    k: i64,
    #[arg(long, allow_negative_numbers = true)]
    h: i64,
    /// Lattice rank (2 or 3); inferred from the parameters when omitted.
    #[arg(long)]
    rank: Option<u8>,
    /// Allow parameters outside the admissible ranges.
    #[arg(long)]
    explore: bool,
}

enum Failure {
    Input(String),
    Verification(String),
}

impl From<IoError> for Failure {
    fn from(e: IoError) -> Self {
        Failure::Input(e.to_string())
    }
}

impl From<VerifyError> for Failure {
    fn from(e: VerifyError) -> Self {
        match e {
            VerifyError::NotPolarized { .. }
            | VerifyError::ReplayFailed(_)
            | VerifyError::Geometry(_)
            | VerifyError::Enumeration(_) => Failure::Verification(e.to_string()),
            _ => Failure::Input(e.to_string()),
        }
    }
}

impl From<EnumerationError> for Failure {
    fn from(e: EnumerationError) -> Self {
        match e {
            EnumerationError::FinitenessNotCertified => Failure::Input(
                "the query is not certifiably finite: add an `eq` or `range` pairing with a class of positive square"
                    .into(),
            ),
            other => Failure::Input(other.to_string()),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Verification(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
        Err(Failure::Input(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
    }
}

/// Returns whether verification passed.
fn run(command: Command) -> Result<bool, Failure> {
    match command {
        Command::VerifyTable { h_max, k_max, jobs, out } => {
            let mut pool = rayon::ThreadPoolBuilder::new();
            if let Some(n) = jobs {
                pool = pool.num_threads(n);
            }
            let pool = pool.build().map_err(|e| Failure::Input(e.to_string()))?;
            let report = pool.install(|| verify_table(h_max, k_max));
            for r in &report.rows {
                println!(
                    "row {} i={} j={} k={} h={} rank {}  disc {} (formula {})  H = {}  g = {} (formula {})  {}  {}",
                    r.row,
                    r.i,
                    r.j,
                    r.k,
                    r.h,
                    r.rank,
                    r.disc,
                    r.disc_formula,
                    r.hyperplane,
                    r.genus,
                    r.genus_formula,
                    r.claim,
                    r.status
                );
            }
            let s = &report.summary;
            println!(
                "{} rows: {} verified, {} verified with assumptions, {} failed",
                s.rows, s.verified, s.verified_with_assumptions, s.failed
            );
            if let Some(path) = out {
                write_json(&path, &report)?;
            }
            Ok(report.all_passed())
        }
        Command::VerifyClaim { id, params, out } => {
            let claim: ClaimId = id.parse()?;
            let p = resolve_params(&params, claim_shape(claim))?;
            let cert = verify_claim(&id, p, params.explore)?;
            emit_certificate(&cert, out.as_deref())?;
            Ok(cert.status() != Status::Failed)
        }
        Command::Build { params, out } => {
            let p = resolve_params(&params, None)?;
            let f = build_family(p, params.explore)?;
            let lattice = f.polarized.lattice();
            let (pos, neg) = lattice.signature();
            let doc = FamilyOut {
                params: p,
                lattice: LatticeSpec::from_lattice(lattice),
                ample: ClassSpec::from_class(f.polarized.ample()),
                disc: lattice.discriminant().into(),
                signature: [pos, neg],
                certificate: f.certificate,
            };
            write_json(&out, &doc)?;
            eprintln!("{p}: disc {}, signature ({pos}, {neg}), written to {}", lattice.discriminant(), out.display());
            Ok(true)
        }
        Command::Query { file } => {
            let q = QueryFile::load(&file)?;
            let r = enumerate_classes(&q.lattice, &q.query)?;
            print_enumeration(&EnumerationOut::new(&q.lattice, &q.query, &r))?;
            Ok(true)
        }
        Command::Oracle { file, half_width } => {
            let q = QueryFile::load(&file)?;
            let w = half_width
                .or(q.half_width)
                .ok_or_else(|| Failure::Input("no box given: pass --box or set `box` in the file".into()))?;
            let r = oracle_enumerate(&q.lattice, &q.query, w)?;
            print_enumeration(&EnumerationOut::new(&q.lattice, &q.query, &r))?;
            Ok(true)
        }
    }
}

fn resolve_params(a: &ParamArgs, shape: Option<Shape>) -> Result<LatticeFamilyParams, Failure> {
    let shape = match (a.rank, shape) {
        (Some(2), _) => Shape::Rank2,
        (Some(3), _) => Shape::Rank3,
        (Some(r), _) => return Err(Failure::Input(format!("rank must be 2 or 3, got {r}"))),
        (None, Some(s)) => s,
        (None, None) => match LatticeFamilyParams::admissible(a.j, a.k, a.h) {
            Some(p) => p.shape,
            None => {
                return Err(Failure::Input(format!(
                    "(j, k, h) = ({}, {}, {}) is outside the admissible ranges; pass --rank with --explore",
                    a.j, a.k, a.h
                )))
            }
        },
    };
    Ok(match shape {
        Shape::Rank2 => LatticeFamilyParams::rank2(a.j, a.k, a.h),
        Shape::Rank3 => LatticeFamilyParams::rank3(a.j, a.k, a.h),
    })
}

fn emit_certificate(cert: &Certificate, out: Option<&Path>) -> Result<(), Failure> {
    match out {
        Some(path) => write_json(path, cert)?,
        None => println!("{}", to_json(cert)?),
    }
    eprintln!("{}: {}", cert.claim_id(), cert.status());
    Ok(())
}

fn print_enumeration(e: &EnumerationOut) -> Result<(), Failure> {
    println!("{}: {} solutions", e.query, e.count);
    for s in &e.solutions {
        println!("  {}", s.class);
    }
    println!("{}", to_json(e)?);
    Ok(())
}

fn to_json<T: serde::Serialize>(v: &T) -> Result<String, Failure> {
    serde_json::to_string_pretty(v).map_err(|e| Failure::Input(e.to_string()))
}

fn write_json<T: serde::Serialize>(path: &Path, v: &T) -> Result<(), Failure> {
    let text = to_json(v)?;
    fs::write(path, text + "\n").map_err(|e| Failure::Input(format!("cannot write {}: {e}", path.display())))
}
