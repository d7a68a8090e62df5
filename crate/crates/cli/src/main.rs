use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use irs_marl::harness::{run_scenario, write_outputs, Scenario, SimConfig};
use irs_marl::Error;

#[derive(Parser)]
#[command(name = "irs-marl", version, about = "Multi-agent DQN control of IRS-assisted uplink cellular networks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one simulation and write per-slot CSVs and a summary.
    Run(RunArgs),
    /// Print the full default configuration as JSON.
    Template,
}

#[derive(clap::Args)]
struct RunArgs {
    /// JSON configuration; every field is optional.
    #[arg(long)]
    config: Option<PathBuf>,
    /// dqn1, dqn2, dqn3, rrr, mrr, mrm, frm, rrm or mm-noirs.
    #[arg(long)]
    scenario: Option<Scenario>,
    #[arg(long)]
    seed: Option<u64>,
    /// Number of slots to simulate.
    #[arg(long)]
    slots: Option<usize>,
    /// Output directory.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    dump_topology: bool,
    #[arg(long)]
    dump_codebooks: bool,
}

fn load_config(args: &RunArgs) -> Result<SimConfig, Error> {
    let mut config = match &args.config {
        Some(path) => SimConfig::load(path)?,
        None => SimConfig::default(),
    };
    if let Some(s) = args.scenario {
        config.scenario = s;
        config.policies = None;
    }
    if let Some(seed) = args.seed {
        config.seed = seed;
    }
    if let Some(slots) = args.slots {
        config.horizon = slots;
    }
    if let Some(out) = &args.out {
        config.output.dir = Some(out.clone());
    }
    config.output.dump_topology |= args.dump_topology;
    config.output.dump_codebooks |= args.dump_codebooks;
    config.validate()?;
    Ok(config)
}

fn run(args: RunArgs) -> Result<(), Error> {
    let config = load_config(&args)?;
    let dir = config.output.dir.clone().unwrap_or_else(|| PathBuf::from("out"));
    let output = run_scenario(&config)?;
    let written = write_outputs(&dir, &output, config.output.dump_topology, config.output.dump_codebooks)?;
    let s = &output.summary;
    println!(
        "{} slots={} final_ma_rate={} mean_rate={} hash={}",
        s.scheme,
        s.slots,
        s.final_ma_rate.map_or("n/a".into(), |v| format!("{v:.4}")),
        s.mean_rate_all_ue.map_or("n/a".into(), |v| format!("{v:.4}")),
        s.config_hash
    );
    for path in written {
        println!("wrote {}", path.display());
    }
    Ok(())
}

fn exit_code(err: &Error) -> u8 {
    match err {
        Error::Config(_) | Error::InvalidArgument(_) | Error::Json(_) => 2,
        Error::Numerical { .. } | Error::Domain(_) | Error::InvalidState(_) => 3,
        Error::Io(_) => 1,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Run(args) => run(args),
        Command::Template => {
            println!("{}", SimConfig::default().to_json_pretty());
            Ok(())
        }
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(exit_code(&err))
        }
    }
}
