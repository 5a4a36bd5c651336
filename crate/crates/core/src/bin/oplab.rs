use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{ArgAction, Args, Parser, Subcommand};
use serde::de::DeserializeOwned;

use oplab::campaign::{run_check, run_counterexample, run_fuzz, CampaignConfig, CheckKind, DimRange, ExplicitInputs};
use oplab::report::SpectralRadiusReport;
use oplab::{ComplexMatrix, Error, HypothesisMode, Result, ToleranceProfile};

#[derive(Parser)]
#[command(name = "oplab", version, about = "Check operator inequalities on random and explicit matrices")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a registered check and report the worst margin.
    Check(CampaignArgs),
    /// Search for violations; same options as `check`.
    Fuzz(CampaignArgs),
    /// Evaluate a named counterexample: quasinormal-shift, squaring-noncommuting.
    Counterexample(CounterexampleArgs),
    /// Print the Gelfand iterate table of a matrix.
    SpectralRadius(SpectralArgs),
}

#[derive(Args)]
struct ToleranceArgs {
    #[arg(long = "tol-predicate", value_name = "R")]
    predicate: Option<f64>,
    #[arg(long = "tol-rank", value_name = "R")]
    rank: Option<f64>,
    #[arg(long = "tol-gelfand", value_name = "R")]
    gelfand: Option<f64>,
    #[arg(long = "tol-gelfand-max-squarings", value_name = "N")]
    gelfand_max_squarings: Option<u32>,
    #[arg(long = "tol-jacobi", value_name = "R")]
    jacobi: Option<f64>,
    #[arg(long = "tol-jacobi-max-sweeps", value_name = "N")]
    jacobi_max_sweeps: Option<u32>,
}

impl ToleranceArgs {
    fn profile(&self) -> Result<ToleranceProfile> {
        let d = ToleranceProfile::default();
        ToleranceProfile {
            predicate_tol: self.predicate.unwrap_or(d.predicate_tol),
            rank_tol: self.rank.unwrap_or(d.rank_tol),
            gelfand_tol: self.gelfand.unwrap_or(d.gelfand_tol),
            gelfand_max_squarings: self.gelfand_max_squarings.unwrap_or(d.gelfand_max_squarings),
            jacobi_tol: self.jacobi.unwrap_or(d.jacobi_tol),
            jacobi_max_sweeps: self.jacobi_max_sweeps.unwrap_or(d.jacobi_max_sweeps),
        }
        .validate()
        .map_err(|e| Error::Usage(e.to_string()))
    }
}

#[derive(Args)]
struct CampaignArgs {
    /// reid, halmos-reid, kittaneh, sqrt-monotone, inverse-antitone,
    /// power-monotone, norm-power, douglas, stochel or induction-chain.
    name: CheckKind,
    /// Dimension `N` or inclusive range `A..B`.
    #[arg(long, default_value = "4")]
    dim: DimRange,
    #[arg(long, default_value_t = 100)]
    trials: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// classic, normal, co-hyponormal or none.
    #[arg(long, default_value = "classic")]
    mode: HypothesisMode,
    #[arg(long)]
    alpha: Option<f64>,
    /// Probe vectors per trial for pointwise checks.
    #[arg(long, default_value_t = 10)]
    vectors: u64,
    /// Draw commuting pairs for power-monotone.
    #[arg(long, default_value_t = true, action = ArgAction::Set)]
    commuting: bool,
    /// Depth of the induction chain.
    #[arg(long = "n-max", default_value_t = 10)]
    n_max: usize,
    #[arg(long = "A", value_name = "FILE")]
    a: Option<PathBuf>,
    #[arg(long = "B", value_name = "FILE")]
    b: Option<PathBuf>,
    #[arg(long = "K", value_name = "FILE")]
    k: Option<PathBuf>,
    #[arg(long = "T", value_name = "FILE")]
    t: Option<PathBuf>,
    #[arg(long = "x", value_name = "FILE")]
    x: Option<PathBuf>,
    /// Also write the report to this file.
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
    #[command(flatten)]
    tol: ToleranceArgs,
}

#[derive(Args)]
struct CounterexampleArgs {
    name: String,
    #[arg(long)]
    dim: Option<usize>,
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
    #[command(flatten)]
    tol: ToleranceArgs,
}

#[derive(Args)]
struct SpectralArgs {
    #[arg(long = "K", value_name = "FILE")]
    k: PathBuf,
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
    #[command(flatten)]
    tol: ToleranceArgs,
}

fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path).map_err(|e| Error::Usage(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Error::Usage(format!("{}: {e}", path.display())))
}

fn read_matrix(path: &Option<PathBuf>) -> Result<Option<ComplexMatrix>> {
    path.as_deref().map(read_json).transpose()
}

fn emit(json: &str, out: &Option<PathBuf>) -> Result<()> {
    // a closed pipe (`oplab ... | head`) is not an error
    match writeln!(io::stdout().lock(), "{json}") {
        Err(e) if e.kind() != io::ErrorKind::BrokenPipe => return Err(e.into()),
        _ => {}
    }
    if let Some(path) = out {
        fs::write(path, format!("{json}\n"))?;
    }
    Ok(())
}

fn campaign(args: CampaignArgs, fuzz: bool) -> Result<i32> {
    let config = CampaignConfig {
        check: args.name,
        mode: args.mode,
        dims: args.dim,
        trials: args.trials,
        vectors: args.vectors,
        seed: args.seed,
        alpha: args.alpha,
        commuting: args.commuting,
        n_max: args.n_max,
        profile: args.tol.profile()?,
        inputs: ExplicitInputs {
            a: read_matrix(&args.a)?,
            b: read_matrix(&args.b)?,
            k: read_matrix(&args.k)?,
            t: read_matrix(&args.t)?,
            x: args.x.as_deref().map(read_json).transpose()?,
        },
    };
    let report = if fuzz { run_fuzz(&config)? } else { run_check(&config)? };
    emit(&report.to_json(), &args.out)?;
    Ok(report.exit_code())
}

fn dispatch(cli: Cli) -> Result<i32> {
    match cli.command {
        Command::Check(args) => campaign(args, false),
        Command::Fuzz(args) => campaign(args, true),
        Command::Counterexample(args) => {
            let report = run_counterexample(&args.name, args.dim, &args.tol.profile()?)?;
            emit(&report.to_json(), &args.out)?;
            Ok(report.exit_code())
        }
        Command::SpectralRadius(args) => {
            let k: ComplexMatrix = read_json(&args.k)?;
            let report = SpectralRadiusReport::new(&k, &args.tol.profile()?);
            emit(&report.to_json(), &args.out)?;
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("oplab: {e}");
            ExitCode::from(2)
        }
    }
}
