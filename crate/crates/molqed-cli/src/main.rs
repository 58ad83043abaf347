//! Scenario runner for the molqed simulator: reproduces the reference
//! figures and numbers as CSV artifacts.
//!
//! Exit codes: 0 on success, 2 on configuration errors, 3 on numerical
//! failures.

mod config;
mod csvout;
mod scenarios;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use config::Config;
use scenarios::RunError;

#[derive(Parser)]
#[command(name = "molqed", version, about = "waveguide-QED hybrid interface simulator")]
struct Cli {
    #[command(subcommand)]
    scenario: Scenario,
}

#[derive(Args)]
struct Common {
    /// Configuration file with [params], [geometry], [scenario] sections.
    #[arg(long)]
    config: Option<PathBuf>,

    /// Override any configuration key: --set section.key=value (repeatable).
    #[arg(long = "set", value_name = "KEY=VALUE")]
    sets: Vec<String>,

    /// Random seed for Monte-Carlo scenarios.
    #[arg(long)]
    seed: Option<u64>,

    /// Output CSV path (defaults to <scenario>.csv).
    #[arg(long)]
    out: Option<PathBuf>,

    /// Numerical tolerance override (integrator / relaxation).
    #[arg(long)]
    tol: Option<f64>,

    /// Suppress the timestamp comment line, for byte-identical reruns.
    #[arg(long)]
    no_timestamp: bool,
}

#[derive(Subcommand)]
enum Scenario {
    /// Normalized Raman probability curves vs coupling difference.
    Fig2b {
        #[command(flatten)]
        common: Common,
    },
    /// Bell fidelity and success probability vs mean photon number.
    Fig3b {
        #[command(flatten)]
        common: Common,
        /// Largest mean photon number of the sweep.
        #[arg(long)]
        nbar_max: Option<f64>,
    },
    /// CHSH parameter and success probability vs mean photon number.
    Fig3c {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        nbar_max: Option<f64>,
    },
    /// Finite-difference field vs island distance (two waveguide heights,
    /// three molecule positions).
    #[command(name = "figS1b", alias = "figs1b")]
    FigS1b {
        #[command(flatten)]
        common: Common,
        /// Waveguide heights in nm (repeatable).
        #[arg(short = 'H', long = "height")]
        heights: Vec<f64>,
        /// Grid spacing in nm.
        #[arg(long)]
        grid: Option<f64>,
        /// Number of distance samples.
        #[arg(long)]
        points: Option<usize>,
    },
    /// Bell success probability vs V/omega_q.
    #[command(name = "figS4", alias = "figs4")]
    FigS4 {
        #[command(flatten)]
        common: Common,
    },
    /// Dump every derived rate at the operating point.
    Rates {
        #[command(flatten)]
        common: Common,
    },
    /// Closed-form vs integrated ground-manifold evolution.
    Evolve {
        #[command(flatten)]
        common: Common,
    },
    /// Monte-Carlo protocol estimate.
    Montecarlo {
        #[command(flatten)]
        common: Common,
        /// Protocol: bell or chsh.
        #[arg(long)]
        protocol: Option<String>,
        /// Mean photon number.
        #[arg(long)]
        nbar: Option<f64>,
        /// Number of trials.
        #[arg(long)]
        trials: Option<u64>,
    },
    /// Analytic point-charge field and Stark coupling vs distance.
    Estark {
        #[command(flatten)]
        common: Common,
    },
    /// Closed-form CHSH numbers at one operating point.
    Chsh {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        nbar: Option<f64>,
    },
    /// Closed-form Bell-pair numbers at one operating point.
    Bell {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        nbar: Option<f64>,
    },
}

impl Scenario {
    fn name(&self) -> &'static str {
        match self {
            Scenario::Fig2b { .. } => "fig2b",
            Scenario::Fig3b { .. } => "fig3b",
            Scenario::Fig3c { .. } => "fig3c",
            Scenario::FigS1b { .. } => "figs1b",
            Scenario::FigS4 { .. } => "figs4",
            Scenario::Rates { .. } => "rates",
            Scenario::Evolve { .. } => "evolve",
            Scenario::Montecarlo { .. } => "montecarlo",
            Scenario::Estark { .. } => "estark",
            Scenario::Chsh { .. } => "chsh",
            Scenario::Bell { .. } => "bell",
        }
    }

    fn common(&self) -> &Common {
        match self {
            Scenario::Fig2b { common }
            | Scenario::Fig3b { common, .. }
            | Scenario::Fig3c { common, .. }
            | Scenario::FigS1b { common, .. }
            | Scenario::FigS4 { common }
            | Scenario::Rates { common }
            | Scenario::Evolve { common }
            | Scenario::Montecarlo { common, .. }
            | Scenario::Estark { common }
            | Scenario::Chsh { common, .. }
            | Scenario::Bell { common, .. } => common,
        }
    }

    /// Subcommand flags override config keys.
    fn apply_flags(&self, cfg: &mut Config) {
        match self {
            Scenario::Fig3b { nbar_max, .. } | Scenario::Fig3c { nbar_max, .. } => {
                if let Some(v) = nbar_max {
                    cfg.set_kv("scenario.nbar_max", v.to_string());
                }
            }
            Scenario::FigS1b {
                heights,
                grid,
                points,
                ..
            } => {
                if !heights.is_empty() {
                    let list: Vec<String> = heights.iter().map(|h| h.to_string()).collect();
                    cfg.set_kv("scenario.heights_nm", list.join(","));
                }
                if let Some(g) = grid {
                    cfg.set_kv("geometry.grid_nm", g.to_string());
                }
                if let Some(pts) = points {
                    cfg.set_kv("scenario.points", pts.to_string());
                }
            }
            Scenario::Montecarlo {
                protocol,
                nbar,
                trials,
                ..
            } => {
                if let Some(p) = protocol {
                    cfg.set_kv("scenario.protocol", p.clone());
                }
                if let Some(v) = nbar {
                    cfg.set_kv("scenario.nbar", v.to_string());
                }
                if let Some(v) = trials {
                    cfg.set_kv("scenario.trials", v.to_string());
                }
            }
            Scenario::Chsh { nbar, .. } | Scenario::Bell { nbar, .. } => {
                if let Some(v) = nbar {
                    cfg.set_kv("scenario.nbar", v.to_string());
                }
            }
            _ => {}
        }
    }
}

fn build_config(scenario: &Scenario) -> Result<Config, String> {
    let common = scenario.common();
    let mut cfg = match &common.config {
        Some(path) => Config::from_file(path).map_err(|e| e.to_string())?,
        None => Config::default(),
    };
    for assignment in &common.sets {
        cfg.set(assignment).map_err(|e| e.to_string())?;
    }
    scenario.apply_flags(&mut cfg);
    if let Some(seed) = common.seed {
        cfg.set_kv("scenario.seed", seed.to_string());
    }
    if let Some(tol) = common.tol {
        cfg.set_kv("scenario.tol", tol.to_string());
    }
    cfg.set_kv("scenario.name", scenario.name().to_string());
    Ok(cfg)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let name = cli.scenario.name();
    let cfg = match build_config(&cli.scenario) {
        Ok(cfg) => cfg,
        Err(msg) => {
            eprintln!("error: {msg}");
            return ExitCode::from(2);
        }
    };
    let common = cli.scenario.common();
    let out = common
        .out
        .clone()
        .unwrap_or_else(|| PathBuf::from(format!("{name}.csv")));

    match scenarios::run(name, &cfg, &out, !common.no_timestamp) {
        Ok(()) => {
            println!("wrote {}", out.display());
            ExitCode::SUCCESS
        }
        Err(RunError::Config(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(RunError::Numerical(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
    }
}
