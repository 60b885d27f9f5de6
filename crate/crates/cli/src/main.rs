use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use intramorph::registry::{all_mutants, campaign_names, campaigns, find};
use intramorph::{run_campaign, run_detection_matrix, CampaignConfig};

mod report;

use report::{Format, MatrixDocument, ReportDocument};

const DEFAULT_SEED: u64 = 42;

#[derive(Parser)]
#[command(
    name = "intramorph",
    version,
    about = "Run intramorphic testing campaigns"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List registered campaigns and their transformation descriptors.
    List,
    /// List the mutants catalogued for a campaign.
    Mutants {
        #[arg(long)]
        campaign: String,
    },
    /// Run one campaign and emit a report.
    Run {
        #[arg(long)]
        campaign: String,
        #[arg(long)]
        mutant: Option<String>,
        #[arg(long, env = "INTRAMORPH_SEED", default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long, default_value_t = 1000)]
        iterations: u64,
        /// Write the report here instead of stdout.
        #[arg(long)]
        report: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        /// Repetitions per side for statistical relations (odd).
        #[arg(long)]
        k: Option<u32>,
    },
    /// Run every campaign against every catalogued mutant.
    Matrix {
        #[arg(long, env = "INTRAMORPH_SEED", default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long, default_value_t = 1000)]
        iterations: u64,
        #[arg(long)]
        report: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
}

enum Failure {
    Usage(String),
}

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure::Usage(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            if !e.use_stderr() {
                let _ = e.print();
                return ExitCode::SUCCESS;
            }
            let msg = e.to_string();
            let line = msg.lines().next().unwrap_or("invalid arguments");
            eprintln!("{}", line.trim_start_matches("error: "));
            return ExitCode::from(2);
        }
    };
    match execute(cli.command) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("intramorph: {msg}");
            ExitCode::from(2)
        }
    }
}

/// Returns whether the run was clean.
fn execute(command: Command) -> Result<bool, Failure> {
    match command {
        Command::List => {
            let mut out = io::stdout().lock();
            for c in campaigns() {
                let info = c.info();
                let descriptor = match info.descriptor {
                    Some(d) => d.to_string(),
                    None => "black-box".to_string(),
                };
                writeln!(
                    out,
                    "{:<26} {:<12} {:<13} {}",
                    info.name,
                    info.case_study.name(),
                    info.technique.name(),
                    descriptor
                )?;
            }
            Ok(true)
        }
        Command::Mutants { campaign } => {
            let info = *find(&campaign)?.info();
            let mut out = io::stdout().lock();
            for m in info.mutants {
                let status = if m.blind_spot {
                    "blind-spot"
                } else if m.expected_detected_by(info.name) {
                    "detected"
                } else {
                    "undetected"
                };
                writeln!(out, "{:<28} {:<11} {}", m.name, status, m.summary)?;
            }
            Ok(true)
        }
        Command::Run {
            campaign,
            mutant,
            seed,
            iterations,
            report,
            format,
            k,
        } => {
            let mut config = CampaignConfig::new(&campaign, seed, iterations);
            config.mutant = mutant;
            config.repetitions = k;
            let result = run_campaign(&config)?;
            let doc = ReportDocument::from(&result);
            emit(report.as_deref(), |w| doc.write(format, w))?;
            if report.is_some() {
                println!(
                    "{}: {} violation(s) in {} iteration(s)",
                    result.campaign, result.violations, result.iterations_run
                );
            }
            Ok(result.violations == 0)
        }
        Command::Matrix {
            seed,
            iterations,
            report,
            format,
        } => {
            let names = campaign_names();
            let mutants: Vec<&str> = all_mutants().iter().map(|(_, m)| m.name).collect();
            let matrix = run_detection_matrix(&names, &mutants, seed, iterations)?;
            let doc = MatrixDocument::from(&matrix);
            emit(report.as_deref(), |w| doc.write(format, w))?;
            let mismatches = matrix.cells.iter().filter(|c| !c.as_expected()).count();
            if mismatches > 0 {
                eprintln!("intramorph: {mismatches} cell(s) differ from the mutant catalog");
            }
            Ok(mismatches == 0)
        }
    }
}

fn emit(
    path: Option<&Path>,
    write: impl FnOnce(&mut dyn Write) -> io::Result<()>,
) -> Result<(), Failure> {
    match path {
        Some(p) => {
            let file = File::create(p).map_err(|e| format!("{}: {e}", p.display()))?;
            let mut w = BufWriter::new(file);
            write(&mut w).map_err(|e| format!("{}: {e}", p.display()))?;
            w.flush().map_err(|e| format!("{}: {e}", p.display()))?;
        }
        None => write(&mut io::stdout().lock())?,
    }
    Ok(())
}
