use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand};
use qgraph_cli::run::{run_once, with_model, write_csv, InputError, RunConfig};
use qgraph_cli::sweep::{run_sweep, write_sweep, SweepSpec, VerificationError};
use qgraph_cli::{exit_code, Algo, GenSpec};
use qgraph_core::graph::io;
use qgraph_core::{Amplification, Model};

#[derive(Parser)]
#[command(
    name = "qgraph",
    version,
    about = "Emulated quantum query algorithms for graph problems"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one algorithm on one instance.
    Run(RunArgs),
    /// Run a scaling sweep described by a keyfile.
    Sweep {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Worker threads (0 = all cores); overrides the keyfile.
        #[arg(long)]
        jobs: Option<usize>,
    },
}

#[derive(Args)]
struct RunArgs {
    algo: Algo,
    /// Instance file in the edge-list text format.
    #[arg(long, conflicts_with = "gen", required_unless_present = "gen")]
    file: Option<PathBuf>,
    /// Generated instance, e.g. `k33`, `gnp:40,0.2`, `network:20,60,3`.
    #[arg(long)]
    gen: Option<String>,
    #[arg(long, default_value = "list")]
    model: Model,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value = "logn")]
    amp: Amplification,
    /// Check the answer and the structural bounds; exit 2 on failure.
    #[arg(long)]
    verify: bool,
    /// Print the full run report as JSON.
    #[arg(long)]
    json: bool,
    /// Also write the run record to this CSV file.
    #[arg(long)]
    csv: Option<PathBuf>,
}

fn run(args: RunArgs) -> anyhow::Result<()> {
    let instance = match (&args.file, &args.gen) {
        (Some(path), _) => io::read_instance(path, args.model)
            .with_context(|| format!("reading {}", path.display()))?,
        (None, Some(text)) => {
            let spec: GenSpec = text
                .parse()
                .map_err(|e: anyhow::Error| InputError(e.to_string()))?;
            with_model(&spec.build(args.seed)?, args.model)
        }
        (None, None) => unreachable!("clap requires one of --file and --gen"),
    };
    let cfg = RunConfig {
        algo: args.algo,
        seed: args.seed,
        amplification: args.amp,
        verify: args.verify,
    };
    let outcome = run_once(&instance, &cfg, "")?;
    if args.json {
        println!("{}", serde_json::to_string_pretty(&outcome)?);
    } else {
        let r = &outcome.record;
        println!("algo      {} ({} model)", r.algo, r.model);
        println!("instance  n = {}, m = {}", r.n, r.m);
        println!("answer    {}", r.answer);
        if let Some(oracle) = r.oracle {
            println!("oracle    {oracle}");
        }
        println!(
            "queries   {} charged, {} raw probes",
            r.charged_queries, r.raw_probes
        );
        println!("phases    {} (max depth {})", r.phases, r.max_depth);
        if args.verify {
            println!("checks    {}", r.verdicts);
        }
    }
    if let Some(path) = &args.csv {
        let file =
            std::fs::File::create(path).with_context(|| format!("creating {}", path.display()))?;
        write_csv(file, std::slice::from_ref(&outcome.record))?;
    }
    if args.verify && !outcome.passed() {
        return Err(VerificationError(format!(
            "failed checks: {}",
            outcome.failed_checks().join(", ")
        ))
        .into());
    }
    Ok(())
}

fn sweep(spec: PathBuf, out: PathBuf, jobs: Option<usize>) -> anyhow::Result<()> {
    let text = std::fs::read_to_string(&spec)
        .map_err(|e| InputError(format!("reading {}: {e}", spec.display())))?;
    let mut spec = SweepSpec::parse(&text)?;
    if let Some(j) = jobs {
        spec.jobs = j;
    }
    let result = run_sweep(&spec)?;
    write_sweep(&result, &out)?;
    let f = &result.fit;
    println!(
        "sweep {}: {} runs, slope {:.3} (predicted {:.3}), wrote {}",
        result.sweep_id,
        result.records.len(),
        f.slope,
        f.predicted,
        out.display()
    );
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Run(args) => run(args),
        Command::Sweep { spec, out, jobs } => sweep(spec, out, jobs),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit_code(&err) as u8)
        }
    }
}
