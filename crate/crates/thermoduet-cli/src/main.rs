use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use thermoduet::thermo::DEFAULT_TOL_QUAD;
use thermoduet_cli::commands::{self, Context};
use thermoduet_cli::{CliError, CliResult, ExitStatus, ScenarioConfig};

#[derive(Parser)]
#[command(name = "thermoduet", version, about = "Thermodynamics of two coupled sets of bosonic modes")]
struct Cli {
    /// Output directory for CSV files
    #[arg(long, global = true, env = "THERMODUET_OUT", default_value = ".")]
    out: PathBuf,

    /// Worker threads (default: all cores)
    #[arg(long, global = true)]
    workers: Option<usize>,

    /// Relative quadrature tolerance for md heat and work
    #[arg(long, global = true, default_value_t = DEFAULT_TOL_QUAD)]
    tol_quad: f64,

    /// Frequency-sampling seed, overriding the config
    #[arg(long, global = true)]
    seed: Option<u64>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute a trajectory and write it as CSV
    Run { config: PathBuf },
    /// Compare the numeric pipeline with the homogeneous closed forms
    VerifyAnalytic {
        config: PathBuf,
        /// Break the Hamiltonian symmetry first; the check is expected to fail
        #[arg(long)]
        negative_control: bool,
    },
    /// Compare Gaussian moments with truncated Fock-space evolution
    VerifyFock { config: PathBuf },
    /// Run one trajectory per value of the `[sweep]` axis
    Sweep { config: PathBuf },
    /// Print the coupling and collectivity regime
    Classify { config: PathBuf },
}

fn load(path: &Path, seed: Option<u64>) -> CliResult<ScenarioConfig> {
    let mut cfg = ScenarioConfig::from_path(path)?;
    if let Some(s) = seed {
        cfg.params.seed = s;
    }
    Ok(cfg)
}

fn stem(path: &Path) -> String {
    path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| "run".into())
}

fn execute(cli: Cli) -> CliResult<()> {
    if !(cli.tol_quad.is_finite() && cli.tol_quad > 0.0) {
        return Err(CliError::config(format!("--tol-quad must be > 0, got {}", cli.tol_quad)));
    }
    let ctx = Context { out_dir: cli.out, workers: cli.workers, tol_quad: cli.tol_quad };
    match cli.command {
        Command::Run { config } => {
            let cfg = load(&config, cli.seed)?;
            let out = commands::run(&cfg, &stem(&config), &ctx)?;
            println!("{}", out.regime);
            println!("wrote {} ({} rows)", out.csv.display(), cfg.n_points);
            if out.missing_md > 0 {
                eprintln!("warning: {} md samples missing near singular times", out.missing_md);
            }
        }
        Command::VerifyAnalytic { config, negative_control } => {
            let cfg = load(&config, cli.seed)?;
            let report = commands::verify_analytic(&cfg, &ctx, negative_control)?;
            println!("{report}");
            if !report.passed() {
                let worst = report.worst().map(|c| c.name.clone()).unwrap_or_default();
                return Err(CliError::Verification(format!("worst check: {worst}")));
            }
        }
        Command::VerifyFock { config } => {
            let cfg = load(&config, cli.seed)?;
            let out = commands::verify_fock(&cfg)?;
            println!("n_max = {}, tail bound = {:.3e}, window = {:.6}", out.n_max, out.tail_bound, out.window);
            println!("{}", out.report);
            if !out.report.passed() {
                return Err(CliError::Verification("Fock oracle disagrees with the Gaussian engine".into()));
            }
        }
        Command::Sweep { config } => {
            let cfg = load(&config, cli.seed)?;
            let (rows, summary) = commands::sweep(&cfg, &stem(&config), &ctx)?;
            let failed = rows.iter().filter(|r| r.outcome.is_err()).count();
            for r in &rows {
                match &r.outcome {
                    Ok(m) => println!("point {} = {:e}: {}", r.index, r.value, m.csv.display()),
                    Err(e) => eprintln!("point {} = {:e}: {e}", r.index, r.value),
                }
            }
            println!("wrote {}", summary.display());
            if failed > 0 {
                eprintln!("warning: {failed} of {} points failed", rows.len());
            }
        }
        Command::Classify { config } => {
            let cfg = load(&config, cli.seed)?;
            println!("{}", commands::classify(&cfg));
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli) {
        Ok(()) => ExitCode::from(ExitStatus::Ok.code() as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.status().code() as u8)
        }
    }
}
