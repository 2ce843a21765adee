use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use engine_cli::spec::OutputMode;
use engine_cli::{load, run, Command};

#[derive(Parser)]
#[command(name = "engine", version, about = "Exact combinatorics of integral affine Weyl groups and Hecke algebroids")]
struct Cli {
    #[command(subcommand)]
    cmd: Sub,
}

#[derive(clap::Args)]
struct Opts {
    /// Job spec (JSON, schema_version 1).
    #[arg(long)]
    spec: PathBuf,
    /// Emit JSON instead of text.
    #[arg(long)]
    json: bool,
    /// Enumeration radius for samples.
    #[arg(long, default_value_t = 2)]
    bound: i64,
}

#[derive(clap::Args)]
struct SoergelOpts {
    #[arg(long)]
    spec: Option<PathBuf>,
    #[arg(long)]
    json: bool,
    /// Longest word length in the battery.
    #[arg(long, default_value_t = 3)]
    bound: i64,
}

#[derive(Subcommand)]
enum Sub {
    /// Root datum, simple affine coroots and Ω.
    Info(Opts),
    /// Integral coroots, S_χ, Coxeter matrix, stabilizer and Ω_χ.
    Integral(Opts),
    /// Endoscopic group H, its dual, rescale factors and the bullet comparison.
    Metaplectic(Opts),
    /// ι, the alcove matching, 𝒢 and i_κ.
    Duality(Opts),
    /// Bott–Samelson product of the spec's word.
    Hecke(Opts),
    /// Graph characters against Hecke coefficients.
    SoergelCheck(SoergelOpts),
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let (cmd, spec, json, bound) = match cli.cmd {
        Sub::Info(o) => (Command::Info, Some(o.spec), o.json, o.bound),
        Sub::Integral(o) => (Command::Integral, Some(o.spec), o.json, o.bound),
        Sub::Metaplectic(o) => (Command::Metaplectic, Some(o.spec), o.json, o.bound),
        Sub::Duality(o) => (Command::Duality, Some(o.spec), o.json, o.bound),
        Sub::Hecke(o) => (Command::Hecke, Some(o.spec), o.json, o.bound),
        Sub::SoergelCheck(o) => (Command::SoergelCheck, o.spec, o.json, o.bound),
    };
    let default_spec = r#"{"schema_version":1,"root_datum":{"preset":"SL","n":2}}"#.to_string();
    let text = match spec {
        Some(p) => match std::fs::read_to_string(&p) {
            Ok(t) => t,
            Err(e) => {
                eprintln!("engine: cannot read {}: {e}", p.display());
                return ExitCode::from(2);
            }
        },
        None => default_spec,
    };
    let job = match load(&text) {
        Ok(j) => j,
        Err(e) => {
            eprintln!("engine: {e}");
            return ExitCode::from(2);
        }
    };
    let json = json || job.spec.output == Some(OutputMode::Json);
    let report = match run(cmd, &job, bound) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("engine: {e}");
            return ExitCode::from(1);
        }
    };
    if json {
        println!("{}", serde_json::to_string_pretty(&report.value).expect("json"));
    } else {
        print!("{}", report.text);
    }
    if report.failures.is_empty() {
        ExitCode::SUCCESS
    } else {
        for f in &report.failures {
            eprintln!("verification failed: {f}");
        }
        ExitCode::from(1)
    }
}
