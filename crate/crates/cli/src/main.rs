use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use salpeter::spectral::OracleGrid;
use salpeter::Tolerance;
use salpeter_cli::commands::{self, Outcome, Range};
use salpeter_cli::config::ProblemConfig;
use salpeter_cli::discrepancy;
use salpeter_cli::report::{to_json, Format};
use salpeter_cli::CliError;

#[derive(Parser)]
#[command(name = "salpeter", version, about = "Bound states of the spinless Salpeter equation with separable potentials")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

#[derive(Args)]
struct Common {
    /// Output file; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "csv")]
    format: FormatArg,
    #[arg(long, default_value_t = 1e-12, allow_negative_numbers = true)]
    tol_abs: f64,
    #[arg(long, default_value_t = 1e-10, allow_negative_numbers = true)]
    tol_rel: f64,
    /// Append convention findings to this markdown file.
    #[arg(long)]
    discrepancy_log: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Ground state of a configured problem.
    Solve {
        #[arg(long)]
        config: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Ground energy over a range of masses.
    SweepMass {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, default_value_t = 0.0)]
        m_min: f64,
        #[arg(long, default_value_t = 10.0)]
        m_max: f64,
        #[arg(long, default_value_t = 41)]
        steps: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Reciprocal coupling (or secular determinant) against energy.
    CouplingCurve {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, allow_negative_numbers = true)]
        e_min: Option<f64>,
        #[arg(long, allow_negative_numbers = true)]
        e_max: Option<f64>,
        #[arg(long, default_value_t = 50)]
        steps: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Per-particle N-boson bounds against u = (N-1)v.
    Nboson {
        #[arg(long, default_value_t = 0.3)]
        u_min: f64,
        #[arg(long, default_value_t = 3.0)]
        u_max: f64,
        #[arg(long, default_value_t = 28)]
        steps: usize,
        /// Extra upper-bound column at this lambda = (N-1)/N.
        #[arg(long, conflicts_with = "particles")]
        lambda: Option<f64>,
        /// Extra upper-bound column for this particle number.
        #[arg(long)]
        particles: Option<u32>,
        #[command(flatten)]
        common: Common,
    },
    /// Critical coupling of a single-term config, or the N-boson u_c.
    Critical {
        #[arg(long)]
        config: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
    /// Dense-grid cross-check of the solver.
    Oracle {
        #[arg(long)]
        config: PathBuf,
        /// Coarse grid size; the fine grid doubles it.
        #[arg(long, default_value_t = 400)]
        grid: usize,
        /// Truncate the momentum axis at this value instead of mapping it.
        #[arg(long)]
        kmax: Option<f64>,
        /// Scale of the tangent map k = s tan(pi t / 2).
        #[arg(long, default_value_t = 2.0, conflicts_with = "kmax")]
        kscale: f64,
        #[command(flatten)]
        common: Common,
    },
}

fn tolerance(c: &Common) -> Result<Tolerance, CliError> {
    Ok(Tolerance::new(c.tol_abs, c.tol_rel)?)
}

fn emit(common: &Common, command: &str, text: String, outcome_findings: &[discrepancy::Finding]) -> Result<(), CliError> {
    match &common.out {
        Some(path) => std::fs::write(path, text)?,
        None => print!("{text}"),
    }
    if let Some(log) = &common.discrepancy_log {
        discrepancy::append(log, command, outcome_findings)?;
    }
    Ok(())
}

fn format_of(c: &Common) -> Format {
    match c.format {
        FormatArg::Csv => Format::Csv,
        FormatArg::Json => Format::Json,
    }
}

fn finish_table(common: &Common, command: &str, out: Outcome<salpeter_cli::report::Table>) -> Result<(), CliError> {
    let text = match format_of(common) {
        Format::Csv => out.value.to_csv(),
        Format::Json => to_json(&out.value),
    };
    emit(common, command, text, &out.findings)?;
    out.failure.map_or(Ok(()), Err)
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Solve { config, common } => {
            let mut cfg = ProblemConfig::load(&config)?;
            let out = commands::solve(&cfg, tolerance(&common)?)?;
            let text = match format_of(&common) {
                Format::Csv => out.value.to_table().to_csv(),
                Format::Json => {
                    cfg.result = Some(out.value.clone());
                    to_json(&cfg)
                }
            };
            emit(&common, "solve", text, &out.findings)
        }
        Command::SweepMass {
            config,
            m_min,
            m_max,
            steps,
            common,
        } => {
            let cfg = ProblemConfig::load(&config)?;
            let range = Range::new("mass", m_min, m_max, steps)?;
            let out = commands::sweep_mass(&cfg, tolerance(&common)?, range)?;
            finish_table(&common, "sweep-mass", out)
        }
        Command::CouplingCurve {
            config,
            e_min,
            e_max,
            steps,
            common,
        } => {
            let cfg = ProblemConfig::load(&config)?;
            let out = commands::coupling_curve(&cfg, tolerance(&common)?, e_min, e_max, steps)?;
            finish_table(&common, "coupling-curve", out)
        }
        Command::Nboson {
            u_min,
            u_max,
            steps,
            lambda,
            particles,
            common,
        } => {
            let range = Range::new("u", u_min, u_max, steps)?;
            let extra = match particles {
                Some(n) if n < 2 => return Err(CliError::Config("particles must be >= 2".into())),
                Some(n) => Some((n as f64 - 1.0) / n as f64),
                None => lambda,
            };
            let out = commands::nboson(range, extra)?;
            finish_table(&common, "nboson", out)
        }
        Command::Critical { config, common } => {
            let cfg = config.as_deref().map(ProblemConfig::load).transpose()?;
            let out = commands::critical(cfg.as_ref(), tolerance(&common)?)?;
            finish_table(&common, "critical", out)
        }
        Command::Oracle {
            config,
            grid,
            kmax,
            kscale,
            common,
        } => {
            let cfg = ProblemConfig::load(&config)?;
            let grid = match kmax {
                Some(k) => OracleGrid::truncated(k, grid),
                None => OracleGrid::tangent(kscale, grid),
            };
            let out = commands::oracle(&cfg, tolerance(&common)?, grid)?;
            let text = match format_of(&common) {
                Format::Csv => out.value.to_table().to_csv(),
                Format::Json => to_json(&out.value),
            };
            emit(&common, "oracle", text, &out.findings)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 3 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            if let CliError::Core(salpeter::Error::NoBoundState {
                critical_coupling: Some(vc),
                ..
            }) = &e
            {
                eprintln!("critical coupling v_c = {vc}");
            }
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
