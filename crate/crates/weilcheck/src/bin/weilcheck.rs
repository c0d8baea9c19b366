use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde::Serialize;

use weilcheck::harness::{run_suite, verify_main_theorem, InstanceSpec, SuiteConfig, VerifyOptions};
use weilcheck::Error;

#[derive(Parser)]
#[command(name = "weilcheck", version, about = "Check e(G)·γ(Q_V, ψ) against ε_L(X₊(T) − X₊(T₀), ψ)")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
    /// relative precision for p-adic and Laurent arithmetic
    #[arg(long, global = true)]
    precision: Option<u32>,
    /// override the conductor level of ψ
    #[arg(long = "psi-level", global = true, allow_hyphen_values = true)]
    psi_level: Option<i64>,
    /// also check the intermediate identities
    #[arg(long, global = true)]
    intermediates: bool,
    /// write the JSON report here
    #[arg(long, global = true)]
    json: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Cmd {
    /// verify a single instance file
    Verify { instance: PathBuf },
    /// run the suites listed in a config file
    Suite { config: PathBuf },
}

const EXIT_FAIL: u8 = 1;
const EXIT_ERROR: u8 = 2;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(EXIT_FAIL),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_ERROR)
        }
    }
}

fn read(p: &Path) -> Result<String, Error> {
    std::fs::read_to_string(p).map_err(|e| Error::Invalid(format!("{}: {e}", p.display())))
}

fn emit<T: Serialize>(cli: &Cli, v: &T) -> Result<(), Error> {
    if let Some(p) = &cli.json {
        let s = serde_json::to_string_pretty(v).map_err(|e| Error::Invalid(e.to_string()))?;
        std::fs::write(p, s + "\n").map_err(|e| Error::Invalid(format!("{}: {e}", p.display())))?;
    }
    Ok(())
}

fn run(cli: &Cli) -> Result<bool, Error> {
    match &cli.cmd {
        Cmd::Verify { instance } => {
            let spec = InstanceSpec::from_json(&read(instance)?)?;
            let opts = VerifyOptions {
                precision: cli.precision,
                psi_level: cli.psi_level,
                intermediates: cli.intermediates || spec.intermediates,
                ..Default::default()
            };
            let rep = verify_main_theorem(&spec, &opts)?;
            println!("{}", rep.summary_line());
            for (k, v) in &rep.intermediates {
                println!("  {} {k}", if *v { "ok  " } else { "FAIL" });
            }
            emit(cli, &rep)?;
            Ok(rep.all_pass())
        }
        Cmd::Suite { config } => {
            let cfg = SuiteConfig::from_json(&read(config)?)?;
            let rep = run_suite(&cfg)?;
            for s in &rep.suites {
                println!(
                    "{} {}: {} checks, {} failed, {} skipped",
                    if s.pass() { "PASS" } else { "FAIL" },
                    s.name,
                    s.checks,
                    s.failed,
                    s.skipped
                );
                for n in &s.notes {
                    println!("  {n}");
                }
                for f in &s.failures {
                    println!("  - {f}");
                }
            }
            emit(cli, &rep)?;
            Ok(rep.pass)
        }
    }
}
