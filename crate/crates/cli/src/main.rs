mod reports;
mod sweep;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::de::DeserializeOwned;
use serde::Serialize;

use brauerkit::error::Error;

#[derive(Parser)]
#[command(
    name = "brauerkit",
    version,
    about = "Exact divisibility obstructions and certificates for topologically trivial \
             Brauer classes on products of elliptic curves"
)]
struct Cli {
    /// Print the full JSON report to stdout instead of the summary.
    #[arg(long, global = true)]
    json: bool,
    /// Also write the JSON report to this file.
    #[arg(long, global = true, value_name = "FILE")]
    out: Option<PathBuf>,
    /// JSON file mirroring the subcommand flags; explicit flags win.
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide whether the obstruction allows the index to divide e.
    Obstruct(ObstructArgs),
    /// Obstruction at e = n^(t-1) for the standard class; pins the index to
    /// n^t for prime powers n not dividing (t-1)!.
    Sharpness(SharpnessArgs),
    /// The mod-4 congruence b^2 = 2bc + d for period-2 classes.
    Kresch(KreschArgs),
    /// Threefold congruences: (n/2)b^2 + bc + d = 0 (mod n), or with --sharp
    /// the stronger (n-1)b^2 = 2bc + d (mod 2n).
    Threefold(ThreefoldArgs),
    /// The two characteristic vanishing degrees of the obstruction.
    Vanishing(VanishingArgs),
    /// Non-algebraic integral Hodge class on a Severi-Brauer variety.
    Ihc(IhcArgs),
    /// Non-algebraic integral Tate class; dimension ell^ell + ell.
    Itc(ItcArgs),
    /// Positive generator of the achievable fibral degrees.
    HodgeIndex(HodgeIndexArgs),
    /// Conditional period-index exponent from cycle data.
    UpperBound(UpperBoundArgs),
    /// Run a parameter grid and persist the verdicts.
    Sweep(SweepArgs),
    /// Re-check the certificates embedded in a report or store offline.
    Verify(VerifyArgs),
}

#[derive(Args, Serialize, serde::Deserialize, Default)]
struct ObstructArgs {
    #[arg(long)]
    g: Option<usize>,
    /// "standard(t)", "@file.json", or inline class JSON.
    #[arg(long)]
    b: Option<String>,
    #[arg(long)]
    n: Option<u64>,
    #[arg(long)]
    e: Option<u64>,
    /// Work in the local ring at this prime instead of over the integers.
    #[arg(long)]
    ell: Option<u64>,
}

#[derive(Args, Serialize, serde::Deserialize, Default)]
struct SharpnessArgs {
    #[arg(long)]
    g: Option<usize>,
    #[arg(long)]
    t: Option<usize>,
    #[arg(long)]
    n: Option<u64>,
    #[arg(long)]
    ell: Option<u64>,
}

#[derive(Args, Serialize, serde::Deserialize, Default)]
struct KreschArgs {
    #[arg(long)]
    g: Option<usize>,
    #[arg(long)]
    b: Option<String>,
    /// Accepted for symmetry; must be 2.
    #[arg(long)]
    n: Option<u64>,
}

#[derive(Args, Serialize, serde::Deserialize, Default)]
struct ThreefoldArgs {
    #[arg(long)]
    b: Option<String>,
    #[arg(long)]
    n: Option<u64>,
    /// Use the sharper mod-2n congruence.
    #[arg(long, default_value_t = false)]
    sharp: bool,
}

#[derive(Args, Serialize, serde::Deserialize, Default)]
struct VanishingArgs {
    #[arg(long)]
    dim: Option<usize>,
    #[arg(long)]
    n: Option<u64>,
}

#[derive(Args, Serialize, serde::Deserialize, Default)]
struct IhcArgs {
    #[arg(long)]
    g: Option<usize>,
    #[arg(long)]
    n: Option<u64>,
}

#[derive(Args, Serialize, serde::Deserialize, Default)]
struct ItcArgs {
    #[arg(long)]
    ell: Option<u64>,
    /// Characteristic marker; any prime different from ell. Defaults to the
    /// smallest prime distinct from ell.
    #[arg(long)]
    p: Option<u64>,
}

#[derive(Args, Serialize, serde::Deserialize, Default)]
struct HodgeIndexArgs {
    #[arg(long)]
    g: Option<usize>,
    #[arg(long)]
    b: Option<String>,
    #[arg(long)]
    n: Option<u64>,
    /// Relative dimension of the Severi-Brauer variety.
    #[arg(long)]
    r: Option<usize>,
    /// Compute the Tate-theoretic variant at this prime.
    #[arg(long)]
    ell: Option<u64>,
}

#[derive(Args, Serialize, serde::Deserialize, Default)]
struct UpperBoundArgs {
    /// Path to the inputs JSON ({"dim":..,"h2_torsion":..,"h3_torsion":..,
    /// "denominator_lcm":..,"degrees":[..]}).
    #[arg(long, value_name = "FILE")]
    r#in: Option<String>,
}

#[derive(Args, Serialize, serde::Deserialize, Default)]
struct SweepArgs {
    /// Path to the sweep specification JSON.
    #[arg(long, value_name = "FILE")]
    spec: Option<String>,
}

#[derive(Args, Serialize, serde::Deserialize, Default)]
struct VerifyArgs {
    /// Report or store file to re-check.
    #[arg(long, value_name = "FILE")]
    r#in: Option<String>,
}

/// Fills unset optional fields from the config file section for the command;
/// flags given on the command line always win.
fn merge_config<T: Serialize + DeserializeOwned>(
    args: T,
    config: Option<&serde_json::Value>,
    section: &str,
) -> Result<T, Error> {
    let Some(config) = config else { return Ok(args) };
    let Some(section_value) = config.get(section) else { return Ok(args) };
    let mut merged = section_value.clone();
    let cli_value =
        serde_json::to_value(&args).map_err(|e| Error::Internal(format!("config merge: {e}")))?;
    let serde_json::Value::Object(cli_map) = cli_value else {
        return Err(Error::Internal("argument structs serialize to objects".into()));
    };
    let serde_json::Value::Object(merged_map) = &mut merged else {
        return Err(Error::Input(format!("config section {section:?} must be an object")));
    };
    for (k, v) in cli_map {
        if !v.is_null() && v != serde_json::Value::Bool(false) {
            merged_map.insert(k, v);
        }
    }
    serde_json::from_value(merged)
        .map_err(|e| Error::Input(format!("bad config for {section}: {e}")))
}

fn load_config(path: &Option<PathBuf>) -> Result<Option<serde_json::Value>, Error> {
    let Some(path) = path else { return Ok(None) };
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Input(format!("cannot read config {}: {e}", path.display())))?;
    let value =
        serde_json::from_str(&text).map_err(|e| Error::Input(format!("bad config JSON: {e}")))?;
    Ok(Some(value))
}

fn run(cli: Cli) -> Result<(), Error> {
    let config = load_config(&cli.config)?;
    let output = reports::OutputOptions { json: cli.json, out: cli.out.clone() };
    match cli.command {
        Command::Obstruct(args) => {
            reports::cmd_obstruct(merge_config(args, config.as_ref(), "obstruct")?, &output)
        }
        Command::Sharpness(args) => {
            reports::cmd_sharpness(merge_config(args, config.as_ref(), "sharpness")?, &output)
        }
        Command::Kresch(args) => {
            reports::cmd_kresch(merge_config(args, config.as_ref(), "kresch")?, &output)
        }
        Command::Threefold(args) => {
            reports::cmd_threefold(merge_config(args, config.as_ref(), "threefold")?, &output)
        }
        Command::Vanishing(args) => {
            reports::cmd_vanishing(merge_config(args, config.as_ref(), "vanishing")?, &output)
        }
        Command::Ihc(args) => reports::cmd_ihc(merge_config(args, config.as_ref(), "ihc")?, &output),
        Command::Itc(args) => reports::cmd_itc(merge_config(args, config.as_ref(), "itc")?, &output),
        Command::HodgeIndex(args) => {
            reports::cmd_hodge_index(merge_config(args, config.as_ref(), "hodge-index")?, &output)
        }
        Command::UpperBound(args) => {
            reports::cmd_upper_bound(merge_config(args, config.as_ref(), "upper-bound")?, &output)
        }
        Command::Sweep(args) => sweep::cmd_sweep(merge_config(args, config.as_ref(), "sweep")?, &output),
        Command::Verify(args) => {
            reports::cmd_verify(merge_config(args, config.as_ref(), "verify")?, &output)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Error::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Error::Internal(msg)) => {
            eprintln!("internal error: {msg}");
            ExitCode::from(2)
        }
    }
}
