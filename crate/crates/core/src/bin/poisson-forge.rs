use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use poisson_forge::cli::{self, write_atomic};
use poisson_forge::config::{ConfigError, RunConfig};

const EXIT_CHECK_FAILED: u8 = 1;
const EXIT_CONFIG: u8 = 2;

#[derive(Parser)]
#[command(name = "poisson-forge", version, about = "Exact Poisson bracket verifier and holonomy integrator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run every task in the config and emit a JSON report.
    Verify {
        config: PathBuf,
        /// Run independent tasks concurrently.
        #[arg(long)]
        parallel: bool,
        /// Report path (overrides `output.report`).
        #[arg(long)]
        report: Option<PathBuf>,
        /// Artifact directory (overrides `output.dir`).
        #[arg(long)]
        out_dir: Option<PathBuf>,
    },
    /// Print the Poisson bracket {F, G} under the configured structure.
    Bracket {
        config: PathBuf,
        #[arg(short = 'F')]
        f: String,
        #[arg(short = 'G')]
        g: String,
        /// Emit JSON with the term list instead of plain text.
        #[arg(long)]
        json: bool,
    },
    /// Integrate the configured Hamiltonian flow and write CSV.
    Flow {
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Integrate the holonomy of the configured potential and write CSV.
    Holonomy {
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Describe a named check.
    Explain { check: String },
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match dispatch(Cli::parse().command) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_CONFIG)
        }
    }
}

fn emit(out: Option<&PathBuf>, text: &str) -> Result<(), ConfigError> {
    match out {
        Some(path) => write_atomic(path, text.as_bytes())
            .map_err(|e| ConfigError::new(path.display().to_string(), e)),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn dispatch(cmd: Command) -> Result<u8, ConfigError> {
    match cmd {
        Command::Verify {
            config,
            parallel,
            report,
            out_dir,
        } => {
            let mut cfg = RunConfig::load(&config)?;
            if out_dir.is_some() {
                cfg.output.dir = out_dir;
            }
            let target = report.or_else(|| cfg.output.report.clone());
            let report = cli::run(&cfg, parallel)?;
            let mut json = report.to_json();
            json.push('\n');
            emit(target.as_ref(), &json)?;
            for c in report.checks.iter().filter(|c| c.status != cli::Status::Pass) {
                match &c.detail {
                    Some(d) => eprintln!("{:?}: {}: {d}", c.status, c.name),
                    None => eprintln!("{:?}: {}", c.status, c.name),
                }
            }
            Ok(if report.passed() { 0 } else { EXIT_CHECK_FAILED })
        }
        Command::Bracket { config, f, g, json } => {
            let cfg = RunConfig::load(&config)?;
            let resolved = cfg.resolve_structure()?;
            let b = cli::bracket_of(&resolved, &f, &g)?;
            if json {
                let value = serde_json::json!({
                    "F": f,
                    "G": g,
                    "bracket": b.display_with(Some(&resolved.variables)),
                    "terms": b.to_wire(),
                });
                println!("{}", serde_json::to_string_pretty(&value).expect("plain data"));
            } else {
                println!("{}", b.display_with(Some(&resolved.variables)));
            }
            Ok(0)
        }
        Command::Flow { config, out } => {
            let cfg = RunConfig::load(&config)?;
            if cfg.flow.is_none() {
                return Err(ConfigError::new("flow", "section missing"));
            }
            match cli::flow_of(&cfg) {
                Ok((traj, drifts)) => {
                    emit(out.as_ref(), &traj.to_csv())?;
                    let mut code = 0;
                    for (name, drift) in drifts {
                        eprintln!("drift {name}: {drift:e}");
                        if !(drift < cfg.tolerances.casimir) {
                            code = EXIT_CHECK_FAILED;
                        }
                    }
                    Ok(code)
                }
                Err(e) => {
                    eprintln!("flow failed: {e}");
                    Ok(EXIT_CHECK_FAILED)
                }
            }
        }
        Command::Holonomy { config, out } => {
            let cfg = RunConfig::load(&config)?;
            if cfg.holonomy.is_none() {
                return Err(ConfigError::new("holonomy", "section missing"));
            }
            match cli::holonomy_csv(&cfg) {
                Ok(csv) => {
                    emit(out.as_ref(), &csv)?;
                    Ok(0)
                }
                Err(e) => {
                    eprintln!("holonomy failed: {e}");
                    Ok(EXIT_CHECK_FAILED)
                }
            }
        }
        Command::Explain { check } => match cli::explain(&check) {
            Some(info) => {
                println!("{}\n  anchor:   {}\n  identity: {}", info.name, info.anchor, info.identity);
                Ok(0)
            }
            None => {
                let known: Vec<_> = cli::CHECKS.iter().map(|c| c.name).collect();
                Err(ConfigError::new(
                    "check",
                    format!("unknown check {check:?}; known: {}", known.join(", ")),
                ))
            }
        },
    }
}
