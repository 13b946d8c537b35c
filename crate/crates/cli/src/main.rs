//! Command-line front end: construct the explicit ROABP families, analyze
//! polynomials and ROABPs (Nisan profiles, partial-derivative dimension),
//! report the coefficient-matrix ring structure, convert commutative
//! ROABPs to diagonal ones, and verify equality of two computations.
//!
//! Exit codes: 0 success, 1 verification failure, 2 input or parameter
//! error.

use clap::{Parser, Subcommand, ValueEnum};
use roabp_core::convert::{comm_to_curve, curve_to_diag, verify_equal, Computation};
use roabp_core::dualspace::build_dual_basis;
use roabp_core::json::{computation_from_value, ring_report, CommRoabpJson, DiagRoabpJson};
use roabp_core::roabp::{
    construct_esym_comm, construct_esym_diag, construct_power_comm, construct_power_diag,
    nisan_profile,
};
use roabp_core::waring::dpd;
use roabp_core::{QPoly, Rational, Scalar};
use serde::Serialize;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "roabp", about = "Structured ROABP toolkit", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Construct an explicit ROABP family and write it as JSON.
    Construct {
        /// Polynomial family.
        family: Family,
        /// Number of variables.
        n: usize,
        /// Degree of the family polynomial.
        d: u32,
        /// Commutative (coefficient-matrix) or diagonal form.
        variant: Variant,
        /// Output file; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Nisan profiles, partial-derivative dimension, and degree stats.
    Analyze {
        /// Input file (polynomial or ROABP JSON).
        #[arg(long = "in")]
        input: PathBuf,
        /// Profile the given (identity) order only, or all n! orders.
        #[arg(long, value_enum, default_value_t = Orders::Given)]
        orders: Orders,
    },
    /// Ring structure of a commutative ROABP: normal set, border basis,
    /// variety, dual spaces, and the dual-basis condition number.
    Ring {
        /// Input commutative ROABP file.
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        #[arg(long, default_value_t = 42)]
        seed: u64,
    },
    /// Convert a commutative ROABP into a diagonal one and verify the
    /// round trip.
    Convert {
        /// Input commutative ROABP file.
        #[arg(long = "in")]
        input: PathBuf,
        /// Output file for the diagonal ROABP.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Output file for the conversion report; stdout when omitted.
        #[arg(long)]
        report: Option<PathBuf>,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        trials: usize,
    },
    /// Randomized equality check of two computation files.
    Verify {
        /// First computation file.
        #[arg(long)]
        a: PathBuf,
        /// Second computation file.
        #[arg(long)]
        b: PathBuf,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Family {
    Esym,
    Power,
}

#[derive(Clone, Copy, ValueEnum)]
enum Variant {
    Comm,
    Diag,
}

#[derive(Clone, Copy, ValueEnum)]
enum Orders {
    Given,
    All,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode, String> {
    match cli.command {
        Command::Construct { family, n, d, variant, out } => {
            cmd_construct(family, n, d, variant, out)
        }
        Command::Analyze { input, orders } => cmd_analyze(&input, orders),
        Command::Ring { input, out, tol, seed } => cmd_ring(&input, out, tol, seed),
        Command::Convert { input, out, report, tol, seed, trials } => {
            cmd_convert(&input, out, report, tol, seed, trials)
        }
        Command::Verify { a, b, trials, seed, tol } => cmd_verify(&a, &b, trials, seed, tol),
    }
}

fn write_json<T: Serialize>(value: &T, out: Option<&Path>) -> Result<(), String> {
    let text = serde_json::to_string_pretty(value).map_err(|e| e.to_string())?;
    match out {
        Some(path) => std::fs::write(path, text + "\n").map_err(|e| e.to_string()),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn load_computation(path: &Path) -> Result<Computation, String> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    let value: serde_json::Value =
        serde_json::from_str(&text).map_err(|e| format!("{}: {e}", path.display()))?;
    computation_from_value(&value).map_err(|e| format!("{}: {e}", path.display()))
}

fn cmd_construct(
    family: Family,
    n: usize,
    d: u32,
    variant: Variant,
    out: Option<PathBuf>,
) -> Result<ExitCode, String> {
    match (family, variant) {
        (Family::Esym, Variant::Comm) => {
            let r = construct_esym_comm(n, d).map_err(|e| e.to_string())?;
            eprintln!(
                "commutative ROABP for the degree-{d} elementary symmetric polynomial in {n} variables; width {}",
                r.w
            );
            write_json(&CommRoabpJson::from_comm(&r), out.as_deref())?;
        }
        (Family::Esym, Variant::Diag) => {
            let nodes: Vec<Rational> = (0..=n as i64).map(Rational::from_i64).collect();
            let r = construct_esym_diag(n, d, &nodes).map_err(|e| e.to_string())?;
            eprintln!(
                "diagonal ROABP for the degree-{d} elementary symmetric polynomial in {n} variables; width {}",
                r.width()
            );
            write_json(&DiagRoabpJson::from_diag_q(&r), out.as_deref())?;
        }
        (Family::Power, Variant::Comm) => {
            let r = construct_power_comm(n, d).map_err(|e| e.to_string())?;
            eprintln!(
                "commutative ROABP for the {d}-th power of the sum of {n} variables; width {}",
                r.w
            );
            write_json(&CommRoabpJson::from_comm(&r), out.as_deref())?;
        }
        (Family::Power, Variant::Diag) => {
            let nodes: Vec<Rational> =
                (0..=(n as i64 * d as i64)).map(Rational::from_i64).collect();
            let r = construct_power_diag(n, d, &nodes).map_err(|e| e.to_string())?;
            eprintln!(
                "diagonal ROABP for the {d}-th power of the sum of {n} variables; width {}",
                r.width()
            );
            write_json(&DiagRoabpJson::from_diag_q(&r), out.as_deref())?;
        }
    }
    Ok(ExitCode::SUCCESS)
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct ProfileJson {
    order: Vec<usize>,
    ranks: Vec<usize>,
    size: usize,
    width: usize,
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct AnalyzeReport {
    n: usize,
    total_degree: u32,
    individual_degrees: Vec<u32>,
    num_terms: usize,
    dpd: usize,
    profiles: Vec<ProfileJson>,
}

const MAX_ALL_ORDERS_VARS: usize = 8;

fn cmd_analyze(input: &Path, orders: Orders) -> Result<ExitCode, String> {
    let f = expandable_polynomial(load_computation(input)?)?;
    let n = f.vars();
    let order_list: Vec<Vec<usize>> = match orders {
        Orders::Given => vec![(0..n).collect()],
        Orders::All => {
            if n > MAX_ALL_ORDERS_VARS {
                return Err(format!(
                    "all-orders analysis is limited to {MAX_ALL_ORDERS_VARS} variables"
                ));
            }
            permutations(n)
        }
    };
    let profiles = order_list
        .iter()
        .map(|order| {
            let p = nisan_profile(&f, order).map_err(|e| e.to_string())?;
            Ok(ProfileJson { order: p.order, ranks: p.ranks, size: p.size, width: p.width })
        })
        .collect::<Result<Vec<_>, String>>()?;
    let report = AnalyzeReport {
        n,
        total_degree: f.total_degree(),
        individual_degrees: f.individual_degrees(),
        num_terms: f.num_terms(),
        dpd: dpd(&f).map_err(|e| e.to_string())?,
        profiles,
    };
    write_json(&report, None)?;
    Ok(ExitCode::SUCCESS)
}

fn expandable_polynomial(c: Computation) -> Result<QPoly, String> {
    match c {
        Computation::PolyQ(p) => Ok(p),
        Computation::Roabp(r) => r.expand().map_err(|e| e.to_string()),
        Computation::Comm(r) => r.expand().map_err(|e| e.to_string()),
        Computation::DiagQ(r) => r.expand().map_err(|e| e.to_string()),
        _ => Err("analysis needs an exact (rational) polynomial or ROABP".into()),
    }
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current: Vec<usize> = (0..n).collect();
    fn heap(k: usize, current: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if k <= 1 {
            out.push(current.clone());
            return;
        }
        for i in 0..k {
            heap(k - 1, current, out);
            if k.is_multiple_of(2) {
                current.swap(i, k - 1);
            } else {
                current.swap(0, k - 1);
            }
        }
    }
    heap(n, &mut current, &mut out);
    out
}

fn cmd_ring(input: &Path, out: Option<PathBuf>, tol: f64, seed: u64) -> Result<ExitCode, String> {
    let Computation::Comm(cr) = load_computation(input)? else {
        return Err("ring analysis needs a commutative ROABP file".into());
    };
    let (ring, _cf) = comm_to_curve(&cr).map_err(|e| e.to_string())?;
    let db = build_dual_basis(&ring, tol, seed).map_err(|e| e.to_string())?;
    write_json(&ring_report(&ring, &db), out.as_deref())?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_convert(
    input: &Path,
    out: Option<PathBuf>,
    report_path: Option<PathBuf>,
    tol: f64,
    seed: u64,
    trials: usize,
) -> Result<ExitCode, String> {
    let Computation::Comm(cr) = load_computation(input)? else {
        return Err("conversion needs a commutative ROABP file".into());
    };
    let (ring, cf) = comm_to_curve(&cr).map_err(|e| e.to_string())?;
    let (diag, mut report) =
        curve_to_diag(&ring, &cf, cr.n, tol, seed).map_err(|e| e.to_string())?;
    let verification = verify_equal(
        &Computation::Comm(cr),
        &Computation::DiagC(diag.clone()),
        trials,
        seed,
        tol.max(1e-6),
    )
    .map_err(|e| e.to_string())?;
    let pass = verification.pass;
    let residual = verification.max_residual;
    report.verification = Some(verification);
    write_json(&DiagRoabpJson::from_diag_c(&diag), out.as_deref())?;
    write_json(&report, report_path.as_deref())?;
    if pass {
        eprintln!(
            "converted to width {} (max verification residual {:.3e})",
            report.output_width, residual
        );
        Ok(ExitCode::SUCCESS)
    } else {
        eprintln!("verification FAILED: max residual {residual:.3e}");
        Ok(ExitCode::from(1))
    }
}

fn cmd_verify(a: &Path, b: &Path, trials: usize, seed: u64, tol: f64) -> Result<ExitCode, String> {
    let pa = load_computation(a)?;
    let pb = load_computation(b)?;
    let vr = verify_equal(&pa, &pb, trials, seed, tol).map_err(|e| e.to_string())?;
    write_json(&vr, None)?;
    if vr.pass {
        eprintln!("PASS (max residual {:.3e} over {} trials)", vr.max_residual, vr.trials);
        Ok(ExitCode::SUCCESS)
    } else {
        eprintln!("FAIL (max residual {:.3e} over {} trials)", vr.max_residual, vr.trials);
        Ok(ExitCode::from(1))
    }
}
