//! Command-line surface: `verify` runs the claim checkers over curves,
//! `eisenstein` prints an eigenseries with its eigencheck, `screen` applies
//! the conductor-pq torsion exclusion.
//!
//! Exit codes, stable across commands: 0 all pass, 1 at least one claim
//! failed, 2 usage or input error.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};

use eiscong::arith::is_prime;
use eiscong::corpus::{self, CorpusEntry};
use eiscong::curves::WeierstrassCurve;
use eiscong::eisenstein::{build_e_spec, verify_eigen, EisensteinSpec};
use eiscong::series::{reduce_mod, QExpansion};
use eiscong::verify::{cuspidal_screen, verify_curve, ClaimStatus, VerifyOptions};

use eiscong_cli::report::ReportDocument;

#[derive(Parser)]
#[command(
    name = "eiscong",
    version,
    about = "Eisenstein congruences for semistable elliptic curves: exact q-expansions, torsion, and claim verification"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Verify every applicable claim for one curve or a corpus
    Verify(VerifyArgs),
    /// Build an Eisenstein eigenseries and print its coefficients
    Eisenstein(EisensteinArgs),
    /// Exclude torsion primes for conductor p*q via the divisibility screen
    Screen(ScreenArgs),
}

#[derive(Args)]
struct VerifyArgs {
    /// Single curve, e.g. "[0,-1,1,-10,-20]"
    #[arg(long, value_name = "COEFFS")]
    curve: Option<String>,
    /// Corpus file in the line format (see README)
    #[arg(long, value_name = "PATH")]
    file: Option<PathBuf>,
    /// Use the built-in corpus
    #[arg(long)]
    builtin: bool,
    /// Write the JSON report here
    #[arg(long, value_name = "PATH")]
    json: Option<PathBuf>,
    /// Write the CSV report here
    #[arg(long, value_name = "PATH")]
    csv: Option<PathBuf>,
    /// Check the good-prime congruence for all l <= this bound
    #[arg(long, value_name = "B", default_value_t = 1000)]
    prime_bound: u64,
    /// Extra coefficients beyond the Sturm-type truncation index
    #[arg(long, value_name = "K", default_value_t = 10)]
    precision_slack: usize,
}

#[derive(Args)]
struct EisensteinArgs {
    /// Square-free level N
    #[arg(long, value_name = "N")]
    level: u64,
    /// Delta choices per prime of N, e.g. "2=1,7=7"
    #[arg(long, value_name = "P=D,...")]
    deltas: String,
    /// Precision: print a_0..a_P
    #[arg(long, value_name = "P")]
    prec: usize,
    /// Reduce coefficients modulo this prime
    #[arg(long = "mod", value_name = "R")]
    modulus: Option<u64>,
    /// Check T_l eigenvalues for primes l up to this bound
    #[arg(long, value_name = "B", default_value_t = 20)]
    eigen_bound: u64,
}

#[derive(Args)]
struct ScreenArgs {
    /// First conductor prime
    #[arg(long)]
    p: u64,
    /// Second conductor prime
    #[arg(long)]
    q: u64,
    /// Torsion prime to test; default tests 5 and 7
    #[arg(long)]
    r: Option<u64>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 2,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let command_echo = std::env::args().skip(1).collect::<Vec<_>>().join(" ");
    let outcome = match cli.command {
        Command::Verify(args) => cmd_verify(args, command_echo),
        Command::Eisenstein(args) => cmd_eisenstein(args),
        Command::Screen(args) => cmd_screen(args),
    };
    match outcome {
        Ok(code) => code,
        Err(message) => {
            eprintln!("error: {}", message);
            ExitCode::from(2)
        }
    }
}

fn cmd_verify(args: VerifyArgs, command_echo: String) -> Result<ExitCode, String> {
    let selected = [args.curve.is_some(), args.file.is_some(), args.builtin]
        .iter()
        .filter(|&&b| b)
        .count();
    if selected != 1 {
        return Err("exactly one of --curve, --file, --builtin must be given".into());
    }

    let mut input_error = false;
    let curves: Vec<WeierstrassCurve> = if let Some(text) = &args.curve {
        let coeffs = corpus::parse_coefficient_list(text).map_err(|e| e.to_string())?;
        vec![WeierstrassCurve::new(coeffs)
            .map_err(|e| e.to_string())?
            .with_label(text)]
    } else if let Some(path) = &args.file {
        let text = std::fs::read_to_string(path)
            .map_err(|e| format!("cannot read {}: {}", path.display(), e))?;
        let load = corpus::parse_corpus(&text);
        for (line, error) in &load.errors {
            eprintln!("{}:{}: {}", path.display(), line, error);
        }
        input_error = !load.errors.is_empty();
        load.entries.iter().map(CorpusEntry::curve).collect()
    } else {
        corpus::builtin_corpus()
            .iter()
            .map(CorpusEntry::curve)
            .collect()
    };

    let options = VerifyOptions {
        prime_bound: args.prime_bound,
        precision_slack: args.precision_slack,
    };
    let mut reports = Vec::with_capacity(curves.len());
    for curve in &curves {
        let report = verify_curve(curve, &options)
            .map_err(|e| format!("{}: {}", curve.label().unwrap_or("<unlabeled>"), e))?;
        reports.push(report);
    }

    let document = ReportDocument::new(command_echo, &reports);
    print!("{}", document.render_text());
    if let Some(path) = &args.json {
        write_file(path, &document.to_json())?;
    }
    if let Some(path) = &args.csv {
        write_file(path, &document.to_csv())?;
    }
    if input_error {
        // some lines were rejected: the run is still reported, but flagged
        // as an input error
        return Ok(ExitCode::from(2));
    }
    Ok(if document.any_fail() {
        ExitCode::from(1)
    } else {
        ExitCode::SUCCESS
    })
}

fn write_file(path: &Path, content: &str) -> Result<(), String> {
    std::fs::write(path, content).map_err(|e| format!("cannot write {}: {}", path.display(), e))
}

fn parse_deltas(text: &str) -> Result<std::collections::BTreeMap<u64, u64>, String> {
    let mut deltas = std::collections::BTreeMap::new();
    for part in text.split(',') {
        let (p, d) = part
            .split_once('=')
            .ok_or_else(|| format!("delta `{}` must look like p=d", part))?;
        let p: u64 = p
            .trim()
            .parse()
            .map_err(|_| format!("delta prime `{}` is not an integer", p))?;
        let d: u64 = d
            .trim()
            .parse()
            .map_err(|_| format!("delta value `{}` is not an integer", d))?;
        if deltas.insert(p, d).is_some() {
            return Err(format!("delta for prime {} given twice", p));
        }
    }
    Ok(deltas)
}

fn cmd_eisenstein(args: EisensteinArgs) -> Result<ExitCode, String> {
    let deltas = parse_deltas(&args.deltas)?;
    let spec = EisensteinSpec::new(args.level, deltas).map_err(|e| e.to_string())?;
    let series = build_e_spec(&spec, args.prec).map_err(|e| e.to_string())?;
    let printed: QExpansion = match args.modulus {
        Some(r) => reduce_mod(&series, r).map_err(|e| e.to_string())?,
        None => series.clone(),
    };
    let domain_note = args
        .modulus
        .map(|r| format!(" (mod {})", r))
        .unwrap_or_default();
    println!("{}", printed.render_coeffs());
    println!(
        "# a_0..a_{} of the level-{} eigenseries{}, deltas {}",
        args.prec,
        spec.level(),
        domain_note,
        spec.deltas()
            .iter()
            .map(|(p, d)| format!("{}={}", p, d))
            .collect::<Vec<_>>()
            .join(","),
    );
    match verify_eigen(&series, &spec, args.eigen_bound) {
        Ok(report) => {
            for check in &report.checks {
                println!(
                    "# {}: eigenvalue {}, compared a_0..a_{}: {}",
                    check.operator,
                    check.eigenvalue,
                    check.compared_precision,
                    if check.pass { "ok" } else { "MISMATCH" }
                );
            }
            if !report.all_pass() {
                return Ok(ExitCode::from(1));
            }
        }
        Err(e) => println!("# eigencheck skipped: {}", e),
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_screen(args: ScreenArgs) -> Result<ExitCode, String> {
    for v in [args.p, args.q] {
        if !is_prime(v) {
            return Err(format!("{} is not prime", v));
        }
    }
    if let Some(r) = args.r {
        if !is_prime(r) {
            return Err(format!("{} is not prime", r));
        }
    }
    let rs: Vec<u64> = match args.r {
        Some(r) => vec![r],
        None => vec![5, 7],
    };
    for r in rs {
        let claim = cuspidal_screen(args.p, args.q, r).map_err(|e| e.to_string())?;
        let verdict = match claim.status {
            ClaimStatus::Pass => "excluded",
            _ => "not-excluded",
        };
        println!("r={}: {}  {}", r, verdict, claim.detail.render());
    }
    Ok(ExitCode::SUCCESS)
}
