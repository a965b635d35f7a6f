use clap::{Parser, Subcommand};
use eudoxus::expr::{evaluate_source, Evaluation};
use eudoxus::verify::{self, Scale};
use eudoxus::{limits, Error};
use num_bigint::BigInt;
use num_rational::BigRational;
use std::fs::File;
use std::io::{self, BufRead, Write};
use std::process::ExitCode;

/// Exact real arithmetic with certified error bounds.
#[derive(Parser)]
#[command(name = "eudoxus", version, about)]
struct Cli {
    /// Override the evaluation index cap (also read from MAX_INDEX).
    #[arg(long, global = true)]
    max_index: Option<BigInt>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate an expression and print a certified decimal.
    Eval {
        /// Expression, e.g. "sqrt(2) * pi - 1/3".
        expr: String,
        /// Decimal places to render.
        #[arg(long, default_value_t = 10)]
        digits: u32,
        /// Emit the full result record as JSON.
        #[arg(long)]
        json: bool,
    },
    /// Read expressions from stdin, one per line.
    Repl {
        #[arg(long, default_value_t = 10)]
        digits: u32,
    },
    /// Run the verification suites and report each check.
    Verify {
        /// small finishes in under a minute; full widens every range.
        #[arg(long, default_value = "small")]
        scale: String,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Tolerance for equality-style checks, as "p/q".
        #[arg(long)]
        eps: Option<String>,
        /// Write the per-check JSONL report here.
        #[arg(long)]
        report: Option<String>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();

    if let Some(cap) = cli
        .max_index
        .clone()
        .or_else(|| std::env::var("MAX_INDEX").ok().and_then(|s| s.parse().ok()))
    {
        limits::set_index_cap(cap);
    }

    match cli.command {
        Command::Eval { expr, digits, json } => match evaluate_source(&expr, digits) {
            Ok(record) => {
                print_record(&record, json);
                ExitCode::SUCCESS
            }
            Err(err) => {
                eprintln!("error: {err}");
                ExitCode::from(1)
            }
        },
        Command::Repl { digits } => repl(digits),
        Command::Verify {
            scale,
            seed,
            eps,
            report,
        } => run_verify(&scale, seed, eps.as_deref(), report.as_deref()),
    }
}

fn print_record(record: &Evaluation, json: bool) {
    if json {
        println!(
            "{}",
            serde_json::to_string(record).expect("record serializes")
        );
    } else {
        println!("{}", record.decimal);
        println!(
            "  certificate: defect bound {} ({}), error <= {} at index {}",
            record.certificate.bound,
            record.certificate.class,
            record.error_bound,
            record.index_used
        );
    }
}

fn repl(mut digits: u32) -> ExitCode {
    let stdin = io::stdin();
    let interactive = atty_stdout();
    if interactive {
        println!("enter expressions; :digits N sets precision, :quit exits");
    }
    for line in stdin.lock().lines() {
        let line = match line {
            Ok(l) => l,
            Err(_) => break,
        };
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix(':') {
            let mut parts = rest.split_whitespace();
            match parts.next() {
                Some("quit") | Some("q") => break,
                Some("digits") => match parts.next().and_then(|d| d.parse().ok()) {
                    Some(d) => {
                        digits = d;
                        println!("digits = {digits}");
                    }
                    None => eprintln!("usage: :digits N"),
                },
                other => eprintln!("unknown command {other:?}"),
            }
            continue;
        }
        match evaluate_source(line, digits) {
            Ok(record) => print_record(&record, false),
            Err(err) => eprintln!("error: {err}"),
        }
    }
    ExitCode::SUCCESS
}

fn atty_stdout() -> bool {
    use std::io::IsTerminal;
    io::stdin().is_terminal()
}

fn run_verify(
    scale: &str,
    seed: u64,
    eps: Option<&str>,
    report_path: Option<&str>,
) -> ExitCode {
    let scale = match scale {
        "small" => Scale::Small,
        "full" => Scale::Full,
        other => {
            eprintln!("error: unknown scale {other:?}; use small or full");
            return ExitCode::from(2);
        }
    };
    let eps = match eps.map(parse_rational).transpose() {
        Ok(e) => e,
        Err(err) => {
            eprintln!("error: {err}");
            return ExitCode::from(2);
        }
    };
    let reports = match verify::run_all(seed, scale, eps) {
        Ok(r) => r,
        Err(err) => {
            eprintln!("error: verification run aborted: {err}");
            return ExitCode::from(3);
        }
    };
    if let Some(path) = report_path {
        let write = File::create(path)
            .map_err(|e| e.to_string())
            .and_then(|mut f| verify::write_jsonl(&reports, &mut f).map_err(|e| e.to_string()));
        if let Err(err) = write {
            eprintln!("error: cannot write report to {path}: {err}");
            return ExitCode::from(3);
        }
    }
    print!("{}", verify::summarize(&reports));
    io::stdout().flush().ok();
    if reports.iter().any(|r| r.failed()) {
        ExitCode::from(3)
    } else {
        ExitCode::SUCCESS
    }
}

fn parse_rational(s: &str) -> Result<BigRational, Error> {
    let bad = || Error::Invalid(format!("expected a rational like 1/1000000, got {s:?}"));
    match s.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().map_err(|_| bad())?;
            let q: BigInt = q.trim().parse().map_err(|_| bad())?;
            if q <= BigInt::from(0) || p <= BigInt::from(0) {
                return Err(bad());
            }
            Ok(BigRational::new(p, q))
        }
        None => {
            let p: BigInt = s.trim().parse().map_err(|_| bad())?;
            if p <= BigInt::from(0) {
                return Err(bad());
            }
            Ok(BigRational::from_integer(p))
        }
    }
}
