//! `quasi`: command-line front end for the quasianalytic library.

mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

const DEFAULTS: &str = "Defaults: horizon 10000, 3 doubling windows, eps_div 1e-3, min window ratio 0.75, \
eps_conv 1e-3, liminf tolerance 1e-3, grid 1000 points, truncation order J = 40. \
Exit status: 0 success, 1 error, 2 inconclusive classification.";

#[derive(Parser)]
#[command(name = "quasi", version, about = "Denjoy-Carleman weight sequences, Bang norms, majorants and Gontcharoff expansions", after_help = DEFAULTS)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Log-convex regularization of a weight sequence
    Regularize(RegularizeArgs),
    /// Heuristic quasi-analyticity verdict from a sequence prefix
    Classify(ClassifyArgs),
    /// Bang norm of a vector, or its trajectory t -> ||X_f(t)|| for a function
    BangNorm(BangNormArgs),
    /// Exact Gontcharoff polynomial of a node list
    Gontcharoff(GontcharoffArgs),
    /// Generalized Taylor expansion of a catalog function
    Expand(ExpandArgs),
    /// Majorant profile B_{f,n}(t) on a grid, with its structural checks
    Profile(ProfileArgs),
    /// Sampled search for a negative derivative
    Certify(CertifyArgs),
    /// Carleman's inequality on a positive vector
    CarlemanCheck(CarlemanArgs),
}

/// Exactly one sequence source.
#[derive(Args)]
#[group(required = true, multiple = false)]
pub struct SeqSource {
    /// Canonical sequence: factorial, n_pow_n, denjoy_loglinear, denjoy_loglog, factorial_squared, constant
    #[arg(long)]
    pub seq: Option<String>,
    /// Inline JSON {"M": [...], "label": "..."}
    #[arg(long)]
    pub json: Option<String>,
    /// JSON file in the same format
    #[arg(long)]
    pub input: Option<PathBuf>,
}

/// Exactly one function source.
#[derive(Args)]
#[group(required = true, multiple = false)]
pub struct OracleSource {
    /// Catalog name: exp_scaled, sin, cos, rational_pole, polynomial, flat, zero
    #[arg(long)]
    pub function: Option<String>,
    /// Inline JSON {"name": "...", "params": {...}, "interval": [a, b]}
    #[arg(long)]
    pub oracle: Option<String>,
}

#[derive(Args)]
pub struct OracleArgs {
    #[command(flatten)]
    pub source: OracleSource,
    /// Interval "a,b" for --function; `pi` is accepted (e.g. 0,pi)
    #[arg(long, default_value = "0,1", allow_hyphen_values = true)]
    pub interval: String,
    /// Parameters for --function as JSON, e.g. {"c": 2, "scale": 0.5}
    #[arg(long)]
    pub params: Option<String>,
}

#[derive(Args)]
pub struct RegularizeArgs {
    #[command(flatten)]
    pub source: SeqSource,
    /// Prefix length N for --seq (entries 0..=N)
    #[arg(long, default_value_t = 50, requires = "seq")]
    pub n: usize,
    /// Write the JSON report here instead of stdout
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Args)]
pub struct ClassifyArgs {
    #[command(flatten)]
    pub source: SeqSource,
    /// Prefix length N for --seq (entries 0..=N)
    #[arg(long, default_value_t = 10_000, requires = "seq")]
    pub n: usize,
    #[arg(long, default_value_t = 10_000)]
    pub horizon: usize,
    #[arg(long, default_value_t = 3)]
    pub windows: usize,
    #[arg(long, default_value_t = 1e-3)]
    pub eps_div: f64,
    #[arg(long, default_value_t = 0.75)]
    pub min_window_ratio: f64,
    #[arg(long, default_value_t = 1e-3)]
    pub eps_conv: f64,
    #[arg(long, default_value_t = 1e-3)]
    pub liminf_tol: f64,
    /// CSV trace "m,S1,S2,S3"
    #[arg(long)]
    pub trace: Option<PathBuf>,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

/// A vector, or a function whose trajectory is traced.
#[derive(Args)]
#[group(required = true, multiple = false)]
pub struct BangSource {
    /// Inline JSON {"entries": [...], "P": [...]}
    #[arg(long)]
    pub vector: Option<String>,
    /// Catalog name for a trajectory
    #[arg(long)]
    pub function: Option<String>,
    /// Inline oracle JSON for a trajectory
    #[arg(long)]
    pub oracle: Option<String>,
}

#[derive(Args)]
pub struct BangNormArgs {
    #[command(flatten)]
    pub source: BangSource,
    #[arg(long, default_value = "0,1", allow_hyphen_values = true)]
    pub interval: String,
    #[arg(long)]
    pub params: Option<String>,
    /// Canonical weight sequence regularized into M^c
    #[arg(long, default_value = "factorial")]
    pub weights: String,
    /// Largest derivative order K in X_f(t)
    #[arg(long, default_value_t = 40)]
    pub order_cap: usize,
    #[arg(long, default_value_t = 1000)]
    pub grid: usize,
    /// CSV trajectory "t,norm,achieving_index"
    #[arg(long)]
    pub trace: Option<PathBuf>,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Args)]
#[group(required = true, multiple = false)]
pub struct NodeSource {
    /// Comma-separated nodes x_0,...,x_{n-1}, parsed exactly (decimals or p/q)
    #[arg(long, allow_hyphen_values = true)]
    pub nodes: Option<String>,
    /// Inline JSON {"nodes": [...], "interval": [a, b]}
    #[arg(long)]
    pub json: Option<String>,
}

#[derive(Args)]
pub struct GontcharoffArgs {
    #[command(flatten)]
    pub source: NodeSource,
    /// Report Q^{(m)}(x_m) for every leading sub-list
    #[arg(long)]
    pub check_boundary: bool,
    /// CSV of the boundary residuals "degree,m,residual"
    #[arg(long)]
    pub boundary_csv: Option<PathBuf>,
    /// Check the sandwich bound at this x
    #[arg(long, allow_hyphen_values = true)]
    pub sandwich_at: Option<f64>,
    /// Node following the list, used for the sandwich upper bound
    #[arg(long, allow_hyphen_values = true, requires = "sandwich_at")]
    pub next_node: Option<f64>,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Args)]
pub struct ExpandArgs {
    #[command(flatten)]
    pub oracle: OracleArgs,
    /// Comma-separated nodes, at least order + 1 of them
    #[arg(long, allow_hyphen_values = true)]
    pub nodes: String,
    #[arg(long)]
    pub order: usize,
    #[arg(long, allow_hyphen_values = true)]
    pub x: f64,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Args)]
pub struct ProfileArgs {
    #[command(flatten)]
    pub oracle: OracleArgs,
    /// Canonical weight sequence M
    #[arg(long, default_value = "factorial")]
    pub weights: String,
    /// Truncation order J of the supremum
    #[arg(long, default_value_t = 40)]
    pub order: usize,
    #[arg(long, default_value_t = 1000)]
    pub grid: usize,
    /// CSV profile "t,n,B"
    #[arg(long)]
    pub trace: Option<PathBuf>,
    /// CSV of grid sup norms "n,Mn" for n <= J
    #[arg(long)]
    pub sup_norms: Option<PathBuf>,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Args)]
pub struct CertifyArgs {
    #[command(flatten)]
    pub oracle: OracleArgs,
    #[arg(long, default_value_t = 20)]
    pub max_order: usize,
    #[arg(long, default_value_t = 1000)]
    pub grid: usize,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Args)]
#[group(required = true, multiple = false)]
pub struct TermsSource {
    /// Comma-separated positive terms
    #[arg(long)]
    pub values: Option<String>,
    /// JSON file holding an array of positive terms
    #[arg(long)]
    pub input: Option<PathBuf>,
}

#[derive(Args)]
pub struct CarlemanArgs {
    #[command(flatten)]
    pub source: TermsSource,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            print!("{e}");
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let rendered = e.render().to_string();
            eprint!("error[usage]: {}", rendered.trim_start_matches("error: "));
            return ExitCode::from(1);
        }
    };
    let result = match cli.command {
        Command::Regularize(a) => commands::regularize(a),
        Command::Classify(a) => commands::classify(a),
        Command::BangNorm(a) => commands::bang_norm_command(a),
        Command::Gontcharoff(a) => commands::gontcharoff(a),
        Command::Expand(a) => commands::expand(a),
        Command::Profile(a) => commands::profile(a),
        Command::Certify(a) => commands::certify(a),
        Command::CarlemanCheck(a) => commands::carleman_check(a),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(1)
        }
    }
}
