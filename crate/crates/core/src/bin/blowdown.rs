use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use blowdown_core::report::{
    check_against_reference, plumbing_summary, run_main1, run_main2, run_main3, run_scenario_file,
    Report, ReportError,
};

/// Exact rational blow-down computations.
#[derive(Parser)]
#[command(name = "blowdown", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a built-in computation chain.
    Report {
        which: Which,
        #[arg(long)]
        json: bool,
    },
    /// Print P, Q = P^-1 and the boundary lens space of C_p.
    Plumbing {
        #[arg(long)]
        p: i64,
        #[arg(long)]
        json: bool,
    },
    /// Run the pipeline on a scenario file.
    Verify {
        file: PathBuf,
        /// Also compare against the reference values of a built-in scenario.
        #[arg(long)]
        expect_paper: bool,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Which {
    Main1,
    Main2,
    Main3,
}

fn fail(e: &ReportError) -> ExitCode {
    eprintln!("error: {e}");
    ExitCode::from(e.exit_code() as u8)
}

/// Writes to stdout, ignoring a closed pipe (`blowdown ... | head`).
fn emit(text: &str) {
    let _ = std::io::stdout().lock().write_all(text.as_bytes());
}

fn print(report: &Report, json: bool) {
    if json {
        emit(&format!("{}\n", report.to_json()));
    } else {
        emit(&report.to_text());
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match cli.command {
        Command::Report { which, json } => {
            let run = match which {
                Which::Main1 => run_main1,
                Which::Main2 => run_main2,
                Which::Main3 => run_main3,
            };
            match run() {
                Ok(r) => {
                    print(&r, json);
                    ExitCode::SUCCESS
                }
                Err(e) => fail(&e),
            }
        }
        Command::Plumbing { p, json } => match plumbing_summary(p) {
            Ok(s) if json => {
                emit(&format!("{}\n", s.to_json()));
                ExitCode::SUCCESS
            }
            Ok(s) => {
                emit(&s.to_text());
                ExitCode::SUCCESS
            }
            Err(e) => fail(&e),
        },
        Command::Verify { file, expect_paper, json } => {
            let report = match run_scenario_file(&file) {
                Ok(r) => r,
                Err(e) => return fail(&e),
            };
            if !expect_paper {
                print(&report, json);
                return ExitCode::SUCCESS;
            }
            let Some(checks) = check_against_reference(&report) else {
                eprintln!("error: no reference values for this scenario (use name = C7-main or C5-main)");
                return ExitCode::from(2);
            };
            let ok = checks.iter().all(|c| c.ok);
            if json {
                let doc = serde_json::json!({ "report": report, "reference_checks": checks, "reference_ok": ok });
                emit(&format!("{}\n", serde_json::to_string_pretty(&doc).expect("serializes")));
            } else {
                let mut out = report.to_text();
                out.push_str("\nReference checks:\n");
                for c in &checks {
                    let mark = if c.ok { "ok  " } else { "FAIL" };
                    out.push_str(&format!("  [{mark}] {}: expected {}, found {}\n", c.item, c.expected, c.found));
                }
                emit(&out);
            }
            if ok {
                ExitCode::SUCCESS
            } else {
                eprintln!("error: report disagrees with reference values");
                ExitCode::from(1)
            }
        }
    }
}
