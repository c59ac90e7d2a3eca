//! `qint`: evaluate q-numbers, run identity checks and print tables.

mod commands;
mod table;

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

/// Exit code for malformed invocations and unparsable input.
pub const EXIT_USAGE: u8 = 3;

#[derive(Parser, Debug)]
#[command(name = "qint", version, about = "Exact quantum integers over pluggable rings")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// Ring, e.g. "Z/8", "Z[t]", "Q(t)", "Cyclo(5)", "Z/2[X]/(X^2+X+1)", "Q(t^(1/6))"
    #[arg(long, global = true, default_value = "Z[t]")]
    pub ring: String,
    /// The element q; defaults to the ring's variable, or 1 when it has none
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub q: Option<String>,
    /// Emit one JSON object instead of text
    #[arg(long, global = true)]
    pub json: bool,
    /// Iteration bound for q-characteristic and flatness searches
    #[arg(long, global = true, default_value_t = qint_core::qnum::DEFAULT_BOUND)]
    pub bound: u64,
}

#[derive(Args, Debug, Clone, Default)]
pub struct Twist {
    /// Comma-separated generator names of the polynomial algebra
    #[arg(long, default_value = "x")]
    pub gens: String,
    /// Comma-separated images of the generators under sigma; defaults to x -> q*x + h
    #[arg(long, allow_hyphen_values = true)]
    pub sigma: Option<String>,
    /// Shift h of the default affine sigma
    #[arg(long, allow_hyphen_values = true, default_value = "0")]
    pub h: String,
}

#[derive(Args, Debug, Clone, Copy, Default)]
pub struct RangeArgs {
    /// Largest n; overrides the identity's default
    #[arg(long)]
    pub n_max: Option<u64>,
    /// Largest k
    #[arg(long)]
    pub k_max: Option<u64>,
    /// Largest m
    #[arg(long)]
    pub m_max: Option<u64>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// (m)_q; negative m after `--`
    Qint { m: i64 },
    /// (n)_q!
    Qfact { n: u64 },
    /// The q-binomial C(n,k)_q
    Qbinom { n: u64, k: u64 },
    /// Symmetric state [n]_v, or the symmetric binomial when k is given
    Qsym { n: i64, k: Option<u64> },
    /// Rational state (r)_q for r = m/n
    Qrat {
        r: String,
        /// Root q_n as n=ELEM; repeatable. Without roots the natural system is used
        #[arg(long = "root", allow_hyphen_values = true)]
        roots: Vec<String>,
    },
    /// Quantum characteristic
    Qchar,
    /// Flatness and divisibility certificate
    Qflat,
    /// Twisted power f^(n) under sigma
    Tpow {
        f: String,
        n: u64,
        #[command(flatten)]
        twist: Twist,
    },
    /// Expansion of f in the twisted power basis x^(i)
    Expand {
        f: String,
        #[command(flatten)]
        twist: Twist,
    },
    /// Check an identity exhaustively over its ranges
    Verify {
        /// Catalog name, e.g. pascal, lucas, cyclo_binom, sigit
        identity: String,
        #[command(flatten)]
        ranges: RangeArgs,
        /// Check only N cases drawn with --seed
        #[arg(long)]
        sample: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// CSV (or JSON) tables: gauss_triangle, qstate_orbit, cyclo_factors
    Table {
        kind: String,
        #[command(flatten)]
        ranges: RangeArgs,
        /// Single index for cyclo_factors (rows 1..=n)
        #[arg(long)]
        n: Option<u64>,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match commands::run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
