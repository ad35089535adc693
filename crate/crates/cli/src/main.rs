use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use imdd_ic::commands::{cmd_gdof, cmd_p2p, cmd_region, cmd_scenario, load_scenario};
use imdd_ic::format::sig9;
use imdd_ic::gdof::Bound;
use imdd_ic::ic::{ChannelConfig, SweepGrid};
use imdd_ic::Error;

/// Capacity bounds for the two-user optical intensity interference channel.
#[derive(Parser)]
#[command(name = "imdd-ic", version)]
struct Cli {
    /// Reserved; every command is deterministic and ignores it.
    #[arg(long, global = true)]
    seed: Option<u64>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Point-to-point lower and upper capacity bounds (σ = 1), as JSON.
    P2p {
        #[arg(long)]
        peak_ratio: f64,
        #[arg(long)]
        alpha: f64,
    },
    /// Rate-region vertex lists, one CSV per bound.
    Region {
        /// Channel JSON: {"peak", "sigma", "alpha": [a1, a2], "gains": [[h11, h12], [h21, h22]]}.
        #[arg(long, conflicts_with_all = ["peak_ratio", "alpha", "cross_gain"])]
        config: Option<PathBuf>,
        /// Symmetric channel with unit direct gains: A/σ.
        #[arg(long, requires_all = ["alpha", "cross_gain"])]
        peak_ratio: Option<f64>,
        #[arg(long)]
        alpha: Option<f64>,
        #[arg(long)]
        cross_gain: Option<f64>,
        /// Comma-separated subset of tin, hk, z, genie.
        #[arg(long, value_delimiter = ',', default_value = "tin,hk,z,genie")]
        bounds: Vec<String>,
        #[command(flatten)]
        grid: GridArgs,
        /// Output directory.
        #[arg(long)]
        out: PathBuf,
    },
    /// Normalized sum-rate of every bound against the closed-form GDoF, as CSV.
    Gdof {
        #[arg(long)]
        peak_ratio: f64,
        #[arg(long)]
        alpha: f64,
        #[arg(long, default_value_t = 0.0)]
        delta_min: f64,
        #[arg(long, default_value_t = 2.0)]
        delta_max: f64,
        #[arg(long, default_value_t = 81)]
        steps: usize,
        #[command(flatten)]
        grid: GridArgs,
        /// Output CSV file.
        #[arg(long)]
        out: PathBuf,
    },
    /// Optical wireless scenario: `onchip`, `indoor`, or a scenario JSON file.
    Scenario {
        scenario: String,
        #[command(flatten)]
        grid: GridArgs,
        /// Output directory for sweep.csv and/or table.json.
        #[arg(long)]
        out: PathBuf,
    },
}

/// Overrides of the allocation grid.
#[derive(Args)]
struct GridArgs {
    #[arg(long)]
    peak_steps: Option<usize>,
    #[arg(long)]
    ratio_steps: Option<usize>,
    #[arg(long)]
    ratio_floor: Option<f64>,
    #[arg(long)]
    fine_peak_steps: Option<usize>,
}

impl GridArgs {
    fn apply(&self, base: SweepGrid) -> imdd_ic::Result<SweepGrid> {
        SweepGrid::new(
            self.peak_steps.unwrap_or(base.peak_steps),
            self.ratio_steps.unwrap_or(base.ratio_steps),
            self.ratio_floor.unwrap_or(base.ratio_floor),
            self.fine_peak_steps.unwrap_or(base.fine_peak_steps),
        )
    }
}

fn run(cli: Cli) -> imdd_ic::Result<()> {
    match cli.command {
        Command::P2p { peak_ratio, alpha } => {
            let rec = cmd_p2p(peak_ratio, alpha)?;
            println!("{}", serde_json::to_string(&rec)?);
        }
        Command::Region {
            config,
            peak_ratio,
            alpha,
            cross_gain,
            bounds,
            grid,
            out,
        } => {
            let cfg = match (config, peak_ratio, alpha, cross_gain) {
                (Some(path), ..) => ChannelConfig::from_json(&std::fs::read_to_string(path)?)?,
                (None, Some(p), Some(a), Some(g)) => ChannelConfig::symmetric(p, 1.0, a, g)?,
                _ => {
                    return Err(Error::Config {
                        field: "config".into(),
                        reason: "give --config or all of --peak-ratio, --alpha, --cross-gain".into(),
                    })
                }
            };
            let bounds = bounds.iter().map(|b| b.trim().parse()).collect::<imdd_ic::Result<Vec<Bound>>>()?;
            let grid = grid.apply(SweepGrid::default())?;
            for r in cmd_region(&cfg, &bounds, &grid, &out)? {
                println!("{}\tsum_rate={}\t{}", r.bound.name(), sig9(r.sum_rate), r.path.display());
            }
        }
        Command::Gdof {
            peak_ratio,
            alpha,
            delta_min,
            delta_max,
            steps,
            grid,
            out,
        } => {
            let grid = grid.apply(SweepGrid::default())?;
            let points = cmd_gdof(peak_ratio, alpha, delta_min, delta_max, steps, &grid, &out)?;
            println!("{} points\t{}", points.len(), out.display());
        }
        Command::Scenario { scenario, grid, out } => {
            let mut s = load_scenario(&scenario)?;
            s.grid = grid.apply(s.grid)?;
            let res = cmd_scenario(&s, &out)?;
            if let Some((path, cells)) = res.sweep {
                let valid = cells.iter().filter(|c| c.rates.is_some()).count();
                println!("sweep\t{valid}/{} cells\t{}", cells.len(), path.display());
            }
            if let Some((path, _)) = res.table {
                println!("table\t{}", path.display());
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(match e {
                ref e if e.is_validation() => 2,
                Error::NoConvergence { .. } => 3,
                _ => 1,
            })
        }
    }
}
