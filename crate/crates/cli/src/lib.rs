//! Command-line front end: argument parsing, campaign dispatch and report output.

mod campaigns;
mod output;

use clap::{Args, Parser, Subcommand};
use nslab::kernels::KernelKind;
use nslab::ledger::DeltaParam;
use nslab::packets::Geometry;
use std::ffi::OsString;
use std::path::PathBuf;

pub use campaigns::Outcome;
pub use output::write_outcome;

#[derive(Parser, Debug)]
#[command(name = "nslab", version, about = "Verification campaigns for off-diagonal frequency interactions in 3D Navier-Stokes")]
pub struct Cli {
    #[command(flatten)]
    pub common: Common,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// Output directory for CSV/JSON artifacts.
    #[arg(long, global = true, env = "NSLAB_OUT", default_value = "nslab-out")]
    pub out: PathBuf,
    /// Seed for sampled checks and initial data [default: 7].
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// δ as `p/q` or a decimal, in (1/3, 5/8].
    #[arg(long, global = true, value_parser = parse_delta)]
    pub delta: Option<DeltaParam>,
    /// Dyad exponents `k0..k1` (inclusive).
    #[arg(long, global = true, value_parser = parse_dyads)]
    pub dyads: Option<(u32, u32)>,
    /// Smaller problem sizes.
    #[arg(long, global = true)]
    pub quick: bool,
    /// Run independent campaigns concurrently.
    #[arg(long, global = true)]
    pub parallel: bool,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Exact exponent bookkeeping.
    #[command(subcommand)]
    Ledger(LedgerCmd),
    /// Frequency geometry invariants.
    #[command(subcommand)]
    Freqgeo(FreqgeoCmd),
    /// Phase Hessian, integration-by-parts gain and Duhamel checks.
    #[command(subcommand)]
    Phase(PhaseCmd),
    /// Null-form symbol on the narrow corona.
    #[command(subcommand)]
    Symbols(SymbolsCmd),
    /// Kernel sup/L3/L6 scans.
    #[command(subcommand)]
    Kernels(KernelsCmd),
    /// Gaussian packet experiments.
    #[command(subcommand)]
    Packets(PacketsCmd),
    /// Navier-Stokes runs and the off-diagonal scaling fit.
    #[command(subcommand)]
    Fields(FieldsCmd),
    /// Every module's suite.
    All,
}

#[derive(Subcommand, Debug)]
pub enum LedgerCmd {
    /// Recompute every balance table; writes ledger_verify.json and ledger_tables.json.
    Verify,
    /// Partial sum and tail bound of Σ_{k0 ≤ k ≤ kmax} 2^{-αk}; writes ledger_sum.json.
    Sum {
        #[arg(long, allow_hyphen_values = true)]
        alpha: String,
        #[arg(long, allow_hyphen_values = true)]
        k0: i64,
        #[arg(long, allow_hyphen_values = true)]
        kmax: i64,
    },
}

#[derive(Subcommand, Debug)]
pub enum FreqgeoCmd {
    /// Tiling, zone and partition invariants; writes freqgeo_check.json and
    /// tiling_N<N>.csv (center_x, center_y, center_z, radius).
    Check {
        #[arg(long = "N", default_value_t = 256)]
        n: u32,
        #[arg(long, default_value_t = 2000)]
        samples: usize,
    },
}

#[derive(Subcommand, Debug)]
pub enum PhaseCmd {
    /// Writes phase_verify.json.
    Verify {
        #[arg(long = "N", default_value_t = 1024)]
        n: u32,
    },
}

#[derive(Subcommand, Debug)]
pub enum SymbolsCmd {
    /// Writes symbols_corona.json and symbols_corona.csv
    /// (N, delta, max_ratio, zeta_scale, eta_scale, angle_frac).
    Corona {
        #[arg(long = "N", default_value_t = 1024)]
        n: u32,
        #[arg(long, default_value_t = 4000)]
        samples: usize,
    },
}

#[derive(Subcommand, Debug)]
pub enum KernelsCmd {
    /// Writes kernels_<kind>.json and kernels_<kind>.csv
    /// (N, sup_ratio, L3_ratio, L6_ratio, fitted_exponent).
    Scan {
        #[arg(long, default_value = "schrodinger")]
        kind: KernelKind,
    },
}

#[derive(Subcommand, Debug)]
pub enum PacketsCmd {
    /// Writes packets_decoupling.json and packets_decoupling.csv (N, angleAB, ratio, L3, L6F, L6G).
    Decoupling {
        #[arg(long, default_value = "orthogonal")]
        geometry: Geometry,
        #[arg(long, default_value_t = 4)]
        trials: usize,
    },
}

#[derive(Subcommand, Debug)]
pub enum FieldsCmd {
    /// Runs the solver from a JSON config; writes fields_run.json and the
    /// trajectory directory (manifest.json plus snap_*.bin).
    Run {
        #[arg(long)]
        config: Option<PathBuf>,
    },
    /// Scaling fit on a saved trajectory; writes fields_scaling.json and
    /// fields_scaling.csv (N, A_N, r_N, then a `# slope` line).
    Scaling {
        #[arg(long)]
        traj: PathBuf,
    },
}

fn parse_delta(s: &str) -> Result<DeltaParam, String> {
    DeltaParam::parse(s).map_err(|e| e.to_string())
}

fn parse_dyads(s: &str) -> Result<(u32, u32), String> {
    let (a, b) = s.split_once("..").ok_or_else(|| format!("expected k0..k1, got `{s}`"))?;
    let a: u32 = a.trim().parse().map_err(|_| format!("bad dyad exponent `{a}`"))?;
    let b: u32 = b.trim().parse().map_err(|_| format!("bad dyad exponent `{b}`"))?;
    if a > b || b > 20 {
        return Err(format!("need k0 ≤ k1 ≤ 20, got {a}..{b}"));
    }
    Ok((a, b))
}

/// Parses `argv` (program name first), runs the campaign and returns the exit
/// code: 0 when every pass/fail check passes, 1 when one fails, 2 on usage or
/// configuration errors.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    match campaigns::dispatch(&cli) {
        Ok(outcomes) => {
            let mut ok = true;
            for o in &outcomes {
                if let Err(e) = write_outcome(o, &cli.common.out) {
                    eprintln!("error: {e:#}");
                    return 2;
                }
                print!("{}", o.report.summary());
                ok &= o.report.all_pass();
            }
            if ok {
                0
            } else {
                1
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            2
        }
    }
}
