use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

mod commands;

#[derive(Parser, Debug)]
#[command(name = "angelesco", version, about = "Spectral curves, Szegő functions and strong asymptotics of Angelesco systems")]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// Geometry file; defaults to [-1,-1/3] ∪ [1/3,1].
    #[arg(long, global = true)]
    pub geometry: Option<PathBuf>,
    /// Weights file; defaults to Lebesgue measure on both intervals.
    #[arg(long, global = true)]
    pub weights: Option<PathBuf>,
    /// Working precision in bits.
    #[arg(long, global = true, env = "ANGELESCO_BITS", default_value_t = 256)]
    pub bits: u32,
    /// Output file; standard output when absent.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Write values at full precision instead of 17 significant digits.
    #[arg(long, global = true)]
    pub full_precision: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Curve parameters at one ratio or along a sweep.
    Curve {
        #[arg(long, conflicts_with = "sweep", required_unless_present = "sweep")]
        c: Option<String>,
        /// A:B:STEP
        #[arg(long)]
        sweep: Option<String>,
    },
    /// Phase thresholds c* and c**.
    Thresholds,
    /// Integrates the parameter flow and cross-checks it against the solver.
    Ode {
        /// A:B:STEP inside one pushed regime.
        #[arg(long)]
        sweep: String,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
    },
    /// Equilibrium densities and masses.
    Measure {
        #[arg(long)]
        c: String,
        /// Grid points per interval.
        #[arg(long, default_value_t = 33)]
        points: usize,
    },
    /// Surface Szegő function values.
    Szego {
        #[arg(long)]
        c: String,
        /// Comma-separated complex probes.
        #[arg(long, value_delimiter = ',', default_value = "2,2+1i,-3+2i")]
        probes: Vec<String>,
    },
    /// Oracle polynomials for one multi-index.
    Mop {
        /// N1,N2
        #[arg(long, value_delimiter = ',', required = true)]
        n: Vec<u32>,
    },
    /// Error table of one theorem along an index schedule.
    Verify {
        /// 1 (type II), 2 (type I and h) or 3 (recurrence coefficients).
        #[arg(long)]
        thm: u8,
        /// diagonal, ray:P:Q, alternating:R1:R2 or drifting.
        #[arg(long, default_value = "diagonal")]
        schedule: String,
        /// Last k of the schedule; k starts at 2.
        #[arg(long, default_value_t = 12)]
        kmax: u32,
        /// Comma-separated complex probes; a default set when absent.
        #[arg(long, value_delimiter = ',')]
        probes: Option<Vec<String>>,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let common = cli.common;
    let result = match cli.command {
        Command::Curve { c, sweep } => commands::curve(&common, c.as_deref(), sweep.as_deref()),
        Command::Thresholds => commands::thresholds(&common),
        Command::Ode { sweep, tol } => commands::ode(&common, &sweep, tol),
        Command::Measure { c, points } => commands::measure(&common, &c, points),
        Command::Szego { c, probes } => commands::szego(&common, &c, &probes),
        Command::Mop { n } => commands::mop(&common, &n),
        Command::Verify { thm, schedule, kmax, probes } => commands::verify(&common, thm, &schedule, kmax, probes.as_deref()),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
