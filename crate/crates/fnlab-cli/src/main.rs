//! `fnlab` - analysis of directed FitzHugh-Nagumo neuron networks from the
//! command line: region maps and boundary curves of the drive plane,
//! singularity inventories of the desingularized slow flow, network
//! simulation, trajectory classification, and per-node Hopf inputs.
//!
//! Exit codes: 0 success, 2 invalid input, 3 numerical failure.

mod run;

use clap::{Args, Parser, Subcommand};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "fnlab",
    version,
    about = "Directed FitzHugh-Nagumo network analysis"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Args)]
struct ParamArgs {
    /// Model constants as `a,b,epsilon` (defaults to the standard set
    /// 0.875,0.8,0.08)
    #[arg(long, value_name = "A,B,EPS")]
    params: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Tag a grid of (I, gamma) points with their behavior region (1-7, 0
    /// on boundaries); CSV `I,gamma,region`
    Regions {
        #[command(flatten)]
        params: ParamArgs,
        /// Input-axis sampling `min:max:count`, endpoints included
        #[arg(long = "I", value_name = "MIN:MAX:N", default_value = "0:2.5:251")]
        i_range: String,
        /// Coupling-axis sampling `min:max:count`
        #[arg(long = "gamma", value_name = "MIN:MAX:N", default_value = "0:1.2:121")]
        gamma_range: String,
        /// Output file (stdout when omitted)
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Sample the analytic region boundaries and codimension-two markers;
    /// CSV `curve,param,I,gamma`
    Curves {
        #[command(flatten)]
        params: ParamArgs,
        /// Which curves: all, hopf-a, hopf-b, lock, istar, markers
        #[arg(long, default_value = "all")]
        set: String,
        #[arg(long = "I", value_name = "MIN:MAX:N", default_value = "0:2.5:400")]
        i_range: String,
        #[arg(long = "gamma", value_name = "MIN:MAX:N", default_value = "0:1.2:400")]
        gamma_range: String,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Singularity inventory of the desingularized flow at one drive
    /// point (JSON), optionally with a sampled phase field (CSV)
    Desing {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long = "I")]
        i: f64,
        #[arg(long)]
        gamma: f64,
        #[arg(short, long)]
        out: Option<PathBuf>,
        /// Also write the sampled field `yA,yB,rho1,rho2` to this file
        #[arg(long)]
        field: Option<PathBuf>,
        /// Field window on the yA axis
        #[arg(
            long,
            value_name = "MIN:MAX",
            default_value = "-2:2",
            allow_hyphen_values = true
        )]
        window_ya: String,
        /// Field window on the yB axis
        #[arg(
            long,
            value_name = "MIN:MAX",
            default_value = "-2:2",
            allow_hyphen_values = true
        )]
        window_yb: String,
        /// Field grid resolution per axis
        #[arg(long, default_value_t = 400)]
        n: usize,
    },
    /// Integrate a network file; CSV `t,y_<id>,z_<id>,...`
    Simulate {
        /// Network JSON file
        #[arg(long)]
        net: PathBuf,
        /// Override the root node's external input
        #[arg(long = "I")]
        i: Option<f64>,
        /// Override every edge coupling
        #[arg(long)]
        gamma: Option<f64>,
        #[arg(long, default_value_t = 2000.0)]
        t_end: f64,
        #[arg(long, default_value_t = 0.01)]
        dt: f64,
        /// Integrator: rk4 (fixed step) or rk45 (adaptive)
        #[arg(long, default_value = "rk4")]
        method: String,
        /// Keep every Nth sample
        #[arg(long, default_value_t = 1)]
        thin: usize,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Classify the channels of a trajectory file; JSON report per channel
    Analyze {
        /// Trajectory CSV produced by `simulate`
        #[arg(long)]
        traj: PathBuf,
        /// Channels to classify (all non-reference channels when omitted)
        #[arg(long)]
        channel: Vec<String>,
        /// Reference channel for phase locking and canard driving
        /// (defaults to the first channel)
        #[arg(long = "ref")]
        reference: Option<String>,
        /// Discard samples before this time
        #[arg(long, default_value_t = 500.0)]
        transient: f64,
        #[command(flatten)]
        params: ParamArgs,
        /// Drive-plane coordinates of the run; enables the canard report
        #[arg(long = "I")]
        i: Option<f64>,
        #[arg(long)]
        gamma: Option<f64>,
        /// Spike threshold and re-arm level
        #[arg(long, default_value_t = 0.0)]
        spike_threshold: f64,
        #[arg(long, default_value_t = -0.5)]
        rearm: f64,
        /// Minimum peak prominence entering amplitude clustering
        #[arg(long, default_value_t = 0.2)]
        min_prominence: f64,
        /// Canard distance threshold in units of epsilon
        #[arg(long, default_value_t = 5.0)]
        k: f64,
        /// Minimum slow-time duration for the canard flag
        #[arg(long, default_value_t = 0.1)]
        min_slow_duration: f64,
        /// Lock tolerance as a fraction of the reference period
        #[arg(long, default_value_t = 0.02)]
        lock_tolerance: f64,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Per-node Hopf input values of a network file (JSON)
    TreeHopf {
        #[arg(long)]
        net: PathBuf,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    if let Ok(threads) = std::env::var("FNLAB_THREADS") {
        if let Ok(n) = threads.parse::<usize>() {
            let _ = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build_global();
        }
    }
    let cli = Cli::parse();
    match run::dispatch(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(run::CliError::Invalid(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
        Err(run::CliError::Numeric(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(3)
        }
    }
}
