use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use handlecalc::surface::{classify, normalize_with_budget, SurfaceWord};
use handlecalc_dsl::trace::{TraceBody, TraceRecord};
use handlecalc_dsl::{check_trace, exec_script, parse_script, render_traces, ExecOptions};

#[derive(Parser)]
#[command(name = "handlecalc", version, about = "Handle calculus scripts and move traces")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a script and print one line per result.
    Run {
        script: PathBuf,
        /// Write the move traces produced by the script to this file.
        #[arg(long)]
        trace_out: Option<PathBuf>,
        #[arg(long, default_value_t = handlecalc_dsl::exec::DEFAULT_MAX_STEPS)]
        max_steps: usize,
    },
    /// Replay every trace in a trace file.
    Check {
        trace: PathBuf,
        /// Expected initial object, as surface word or matrix text.
        #[arg(long)]
        initial: Option<String>,
        /// Expected final object.
        #[arg(long = "final")]
        final_text: Option<String>,
    },
    /// Normalize a closed surface word and print its trace.
    Normalize {
        word: String,
        #[arg(long, default_value_t = handlecalc_dsl::exec::DEFAULT_MAX_STEPS)]
        max_steps: usize,
    },
}

fn read(path: &PathBuf) -> Result<String, ExitCode> {
    fs::read_to_string(path).map_err(|e| {
        eprintln!("error: cannot read {}: {e}", path.display());
        ExitCode::from(2)
    })
}

fn run(script: PathBuf, trace_out: Option<PathBuf>, max_steps: usize) -> Result<ExitCode, ExitCode> {
    let text = read(&script)?;
    let parsed = parse_script(&text).map_err(|e| {
        eprintln!("{}:{e}", script.display());
        if !e.expected.is_empty() {
            eprintln!("  expected one of: {}", e.expected.join(", "));
        }
        ExitCode::from(2)
    })?;
    let report = exec_script(&parsed, &ExecOptions { max_steps });
    print!("{}", report.render());
    if let Some(f) = &report.failure {
        eprintln!("{}:{f}", script.display());
    }
    if let Some(path) = trace_out {
        fs::write(&path, render_traces(&report.traces)).map_err(|e| {
            eprintln!("error: cannot write {}: {e}", path.display());
            ExitCode::from(2)
        })?;
    }
    Ok(ExitCode::from(report.exit_code() as u8))
}

fn check(trace: PathBuf, initial: Option<String>, final_text: Option<String>) -> Result<ExitCode, ExitCode> {
    let text = read(&trace)?;
    let outcomes = check_trace(&text, initial.as_deref(), final_text.as_deref()).map_err(|e| {
        eprintln!("{}: {e}", trace.display());
        ExitCode::from(2)
    })?;
    for (i, o) in outcomes.iter().enumerate() {
        println!("trace {}: {o}", i + 1);
    }
    Ok(if outcomes.iter().all(|o| o.accepted()) {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn normalize(word: &str, max_steps: usize) -> Result<ExitCode, ExitCode> {
    let fail = |e: &dyn std::fmt::Display| {
        eprintln!("error: {e}");
        ExitCode::from(2)
    };
    let w: SurfaceWord = word.parse().map_err(|e| fail(&e))?;
    let class = classify(&w).map_err(|e| fail(&e))?;
    let (out, trace) = normalize_with_budget(&w, max_steps).map_err(|e| fail(&e))?;
    println!("{out}");
    println!("{class}");
    print!(
        "{}",
        TraceRecord {
            line: 0,
            name: "word".into(),
            body: TraceBody::Surface(trace),
        }
    );
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Run {
            script,
            trace_out,
            max_steps,
        } => run(script, trace_out, max_steps),
        Command::Check {
            trace,
            initial,
            final_text,
        } => check(trace, initial, final_text),
        Command::Normalize { word, max_steps } => normalize(&word, max_steps),
    };
    result.unwrap_or_else(|code| code)
}
