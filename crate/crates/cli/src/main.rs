use clap::{Args, Parser, Subcommand};
use collar_cli::commands::{bessel_csv, bessel_table, cmd_report, cmd_solve, cmd_sweep, write_file, Method};
use collar_cli::{CliError, CliResult, ExperimentConfig, Overrides, Preset};
use collar_core::helmholtz::BoundaryCondition;
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::Arc;

#[derive(Parser)]
#[command(name = "collar", version, about = "Hankel-mode scaling experiments on the collar outside the unit ball")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Tabulate J, Y and |H|² by one or more evaluation routes
    Bessel {
        #[arg(long)]
        nu: f64,
        /// arguments, comma separated or repeated
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
        z: Vec<f64>,
        #[arg(long, value_delimiter = ',', default_value = "auto")]
        method: Vec<Method>,
        /// also write bessel.csv here
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Solve single modes and write solution CSV plus residual metadata
    Solve {
        #[command(flatten)]
        common: Common,
        /// angular degrees, comma separated (default from the config)
        #[arg(long, value_delimiter = ',')]
        l: Vec<u32>,
        /// frequency for the solve (default lambda-min)
        #[arg(long)]
        lambda: Option<f64>,
    },
    /// Run the configured sweeps and write report.json, CSV and SVG
    Sweep {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum)]
        preset: Option<Preset>,
    },
    /// Summarise a written report
    Report {
        /// report file, or a directory holding report.json
        #[arg(long, default_value = "collar-out")]
        out: PathBuf,
        /// regenerate the SVG plots
        #[arg(long)]
        plot: bool,
    },
}

#[derive(Args)]
struct Common {
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    beta: Option<f64>,
    #[arg(long)]
    epsilon0: Option<f64>,
    #[arg(long)]
    lambda_min: Option<f64>,
    #[arg(long)]
    lambda_max: Option<f64>,
    #[arg(long, value_parser = parse_bc)]
    bc: Option<BoundaryCondition>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    plot: bool,
}

fn parse_bc(s: &str) -> Result<BoundaryCondition, String> {
    match s {
        "dirichlet" => Ok(BoundaryCondition::Dirichlet),
        "neumann" => Ok(BoundaryCondition::Neumann),
        other => Err(format!("expected dirichlet or neumann, got {other}")),
    }
}

impl Common {
    fn resolve(&self, preset: Option<Preset>) -> CliResult<ExperimentConfig> {
        let flags = Overrides {
            alpha: self.alpha,
            beta: self.beta,
            epsilon0: self.epsilon0,
            lambda_min: self.lambda_min,
            lambda_max: self.lambda_max,
            bc: self.bc,
            out: self.out.clone(),
            plot: self.plot,
            preset,
        };
        ExperimentConfig::resolve(self.config.as_deref(), &flags)
    }
}

fn run(cli: Cli) -> CliResult<u8> {
    match cli.command {
        Command::Bessel { nu, z, method, out } => {
            let rows = bessel_table(nu, &z, &method)?;
            let csv = bessel_csv(&rows);
            print!("{csv}");
            if let Some(dir) = out {
                write_file(&dir.join("bessel.csv"), &csv)?;
            }
            Ok(0)
        }
        Command::Solve { common, l, lambda } => {
            let mut config = common.resolve(None)?;
            if lambda.is_some() {
                config.solve.lambda = lambda;
                config.validate()?;
            }
            let modes = if l.is_empty() { config.solve.modes.clone() } else { l };
            let outcome = cmd_solve(&config, &modes)?;
            for line in &outcome.lines {
                println!("{line}");
            }
            if outcome.failures.is_empty() {
                Ok(0)
            } else {
                for f in &outcome.failures {
                    eprintln!("residual check failed: {f}");
                }
                Ok(3)
            }
        }
        Command::Sweep { common, preset } => {
            let config = common.resolve(preset)?;
            let stop = Arc::new(AtomicBool::new(false));
            let flag = stop.clone();
            // first Ctrl-C finishes the running sweep and flushes; a second one aborts
            ctrlc::set_handler(move || {
                if flag.swap(true, Ordering::SeqCst) {
                    std::process::exit(130);
                }
                eprintln!("interrupt: finishing the current sweep and writing a partial report");
            })
            .map_err(|e| CliError::Config(format!("cannot install signal handler: {e}")))?;
            let report = cmd_sweep(&config, &stop, &mut |line| eprintln!("{line}"))?;
            print!("{}", report.table());
            Ok(report.exit_code())
        }
        Command::Report { out, plot } => {
            let path = if out.is_dir() { out.join("report.json") } else { out };
            let (table, code) = cmd_report(&path, plot)?;
            print!("{table}");
            Ok(code)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("collar: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
