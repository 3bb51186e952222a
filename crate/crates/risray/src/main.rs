use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use risray::commands::{self, MapTarget};
use risray::config::{load_scenario, ScenarioConfig};
use risray::formats;
use risray_core::Policy;

/// 2D image-source ray tracer for rooms with a rotatable reflecting panel.
#[derive(Parser)]
#[command(name = "risray", version)]
struct Cli {
    /// Scenario file; the built-in reference scene when omitted.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Print the effective scenario and exit.
    #[arg(long)]
    dump_config: bool,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Option<Command>,
}

#[derive(Subcommand)]
enum Command {
    /// Received-power map over the scene bounds.
    Map(MapArgs),
    /// Receiver powers for every panel setting.
    Sweep {
        #[arg(long, default_value = "sweep.csv")]
        out: PathBuf,
    },
    /// Simulate a control policy and write its trace and metrics.
    Run(RunArgs),
    /// Statistic differences between a baseline trace and another trace.
    Compare {
        baseline: PathBuf,
        trace: PathBuf,
        /// Leading steps excluded from both traces.
        #[arg(long, default_value_t = 0)]
        skip: usize,
        /// Output file; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct MapArgs {
    /// Panel angle offset in degrees; the configured static angle by default.
    #[arg(long, conflicts_with = "baseline", allow_negative_numbers = true)]
    angle: Option<f64>,
    /// Draw the panel as a plain wall at its base orientation.
    #[arg(long)]
    baseline: bool,
    /// Cell size in meters.
    #[arg(long)]
    resolution: Option<f64>,
    #[arg(long, default_value = "map.csv")]
    out: PathBuf,
}

#[derive(Args)]
struct RunArgs {
    /// static, sweep or context.
    #[arg(long)]
    policy: Option<String>,
    #[arg(long)]
    dwell: Option<usize>,
    #[arg(long)]
    intervals: Option<usize>,
    /// Angle held by the static policy, degrees.
    #[arg(long, allow_negative_numbers = true)]
    angle: Option<f64>,
    /// Comma-separated receiver ids driving the context policy.
    #[arg(long, value_delimiter = ',')]
    objectives: Option<Vec<String>>,
    #[arg(long, default_value = "trace.csv")]
    out: PathBuf,
    #[arg(long, default_value = "metrics.json")]
    metrics: PathBuf,
    /// Also write the plain-wall trace over the same steps.
    #[arg(long)]
    baseline_out: Option<PathBuf>,
}

fn write(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn run_command(mut cfg: ScenarioConfig, args: RunArgs) -> Result<()> {
    let sim = &mut cfg.simulation;
    if let Some(p) = args.policy {
        sim.policy = match Policy::parse(&p) {
            Some(p) => p,
            None => bail!("unknown policy {p:?} (expected static, sweep or context)"),
        };
    }
    if let Some(d) = args.dwell {
        sim.dwell = d;
    }
    if let Some(n) = args.intervals {
        sim.intervals = n;
    }
    if let Some(a) = args.angle {
        sim.static_angle_deg = a;
    }
    if let Some(o) = args.objectives {
        sim.objectives = o.into_iter().map(|s| s.trim().to_string()).collect();
    }
    let out = commands::run(&cfg)?;
    write(&args.out, &formats::trace_csv(&out.trace))?;
    write(&args.metrics, &formats::metrics_json(&out.metrics))?;
    if let Some(path) = args.baseline_out {
        write(&path, &formats::trace_csv(&out.baseline))?;
    }
    Ok(())
}

fn execute(cli: Cli) -> Result<()> {
    if let Some(n) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .context("configuring worker threads")?;
    }
    let cfg = match &cli.config {
        Some(path) => load_scenario(path)?,
        None => ScenarioConfig::default(),
    };
    if cli.dump_config {
        print!("{}", cfg.dump());
        return Ok(());
    }
    let Some(command) = cli.command else {
        bail!("no command given (try --help)");
    };
    match command {
        Command::Map(args) => {
            let target = if args.baseline {
                MapTarget::Baseline
            } else {
                MapTarget::Angle(args.angle.unwrap_or(cfg.simulation.static_angle_deg))
            };
            let res = args.resolution.unwrap_or(cfg.simulation.resolution);
            let map = commands::map(&cfg, target, res)?;
            write(&args.out, &formats::power_map_csv(&map))
        }
        Command::Sweep { out } => {
            let report = commands::sweep(&cfg)?;
            write(
                &out,
                &formats::probe_csv(&report, &cfg.scene.ris.angle_set_deg),
            )
        }
        Command::Run(args) => run_command(cfg, args),
        Command::Compare {
            baseline,
            trace,
            skip,
            out,
        } => {
            let json = commands::compare(&read(&baseline)?, &read(&trace)?, skip)?;
            match out {
                Some(path) => write(&path, &json),
                None => {
                    print!("{json}");
                    Ok(())
                }
            }
        }
    }
}

fn main() -> ExitCode {
    match execute(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
