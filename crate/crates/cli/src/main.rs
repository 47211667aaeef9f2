use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use gravcat_cli::error::CliError;
use gravcat_cli::figures;
use gravcat_cli::format::OutputFormat;
use gravcat_cli::report::{cycle_report, point_report};
use gravcat_cli::sweep::{parse_pair, run_sweep, Axis, SweepSpec, DEFAULT_TEMP_FLOOR};

#[derive(Parser)]
#[command(
    name = "gravcat",
    version,
    about = "Quantum estimation bounds and Stirling-cycle thermodynamics for a gravitationally coupled qubit pair"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate everything at one (omega, gamma, temp) point
    Point {
        #[arg(long, allow_negative_numbers = true)]
        omega: f64,
        #[arg(long, allow_negative_numbers = true)]
        gamma: f64,
        #[arg(long, allow_negative_numbers = true)]
        temp: f64,
        /// Estimation pair: gamma,temp | omega,temp | omega,gamma
        #[arg(long, default_value = "gamma,temp")]
        pair: String,
        /// Machine-readable output instead of key = value lines
        #[arg(long, value_enum)]
        format: Option<OutputFormat>,
        /// Write to a file instead of stdout
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Sweep one axis and emit one table row per grid point
    Sweep {
        /// omega | gamma | temp | omega-b
        #[arg(long)]
        axis: String,
        #[arg(long, allow_negative_numbers = true)]
        start: f64,
        #[arg(long, allow_negative_numbers = true)]
        stop: f64,
        #[arg(long)]
        points: usize,
        /// Logarithmic instead of linear spacing
        #[arg(long)]
        log: bool,
        /// Floor applied to temperature-axis grids
        #[arg(long, default_value_t = DEFAULT_TEMP_FLOOR)]
        tmin: f64,
        #[arg(long, allow_negative_numbers = true)]
        omega: Option<f64>,
        #[arg(long, allow_negative_numbers = true)]
        gamma: Option<f64>,
        #[arg(long, allow_negative_numbers = true)]
        temp: Option<f64>,
        #[arg(long, allow_negative_numbers = true)]
        omega_a: Option<f64>,
        #[arg(long, allow_negative_numbers = true)]
        omega_b: Option<f64>,
        #[arg(long, allow_negative_numbers = true)]
        t_hot: Option<f64>,
        #[arg(long, allow_negative_numbers = true)]
        t_cold: Option<f64>,
        /// Estimation pair, required for Fisher/bound quantities
        #[arg(long)]
        pair: Option<String>,
        /// Comma-separated output columns
        #[arg(long)]
        quantities: Option<String>,
        #[arg(long, value_enum, default_value = "csv")]
        format: OutputFormat,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write the CSV files of one catalogued figure family
    Figure {
        /// Recipe id such as 1a, 7b or 10a
        id: String,
        /// Output directory for the CSV files
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
    /// Evaluate one Stirling cycle
    Cycle {
        #[arg(long, allow_negative_numbers = true)]
        gamma: f64,
        #[arg(long, allow_negative_numbers = true)]
        omega_a: f64,
        #[arg(long, allow_negative_numbers = true)]
        omega_b: f64,
        #[arg(long, allow_negative_numbers = true)]
        t_hot: f64,
        #[arg(long, allow_negative_numbers = true)]
        t_cold: f64,
        #[arg(long, value_enum)]
        format: Option<OutputFormat>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print the version
    Version,
}

fn configure_threads() {
    if let Ok(raw) = std::env::var("GRAVCAT_THREADS") {
        if let Ok(n) = raw.trim().parse::<usize>() {
            if n >= 1 {
                let _ = rayon::ThreadPoolBuilder::new()
                    .num_threads(n)
                    .build_global();
            }
        }
    }
}

fn open_output(out: Option<&PathBuf>) -> Result<Box<dyn Write>, CliError> {
    match out {
        Some(path) => Ok(Box::new(std::fs::File::create(path)?)),
        None => Ok(Box::new(std::io::stdout().lock())),
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Point {
            omega,
            gamma,
            temp,
            pair,
            format,
            out,
        } => {
            let pair = parse_pair(&pair)?;
            let report = point_report(omega, gamma, temp, pair)?;
            report.write(format, &mut *open_output(out.as_ref())?)?;
        }
        Command::Sweep {
            axis,
            start,
            stop,
            points,
            log,
            tmin,
            omega,
            gamma,
            temp,
            omega_a,
            omega_b,
            t_hot,
            t_cold,
            pair,
            quantities,
            format,
            out,
        } => {
            let spec = SweepSpec {
                axis: Axis::parse(&axis)?,
                start,
                stop,
                points,
                log,
                tmin,
                omega,
                gamma,
                temp,
                omega_a,
                omega_b,
                t_hot,
                t_cold,
                pair: pair.as_deref().map(parse_pair).transpose()?,
                quantities,
            };
            run_sweep(spec, format, &mut *open_output(out.as_ref())?)?;
        }
        Command::Figure { id, out } => {
            figures::run_figure(&id, &out, &mut std::io::stdout().lock())?;
        }
        Command::Cycle {
            gamma,
            omega_a,
            omega_b,
            t_hot,
            t_cold,
            format,
            out,
        } => {
            let report = cycle_report(gamma, omega_a, omega_b, t_hot, t_cold)?;
            report.write(format, &mut *open_output(out.as_ref())?)?;
        }
        Command::Version => {
            println!("gravcat {}", env!("CARGO_PKG_VERSION"));
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    configure_threads();
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {}", err.message);
            ExitCode::from(err.code)
        }
    }
}
