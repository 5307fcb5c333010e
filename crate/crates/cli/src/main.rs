use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Duration;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};
use posetlab::json::{read_assignment, read_poset};
use posetlab::SearchLimits;
use posetlab_cli::commands::{self, exit, Basis, Family, Format, Mode, Output, SearchArgs};
use posetlab_cli::verify::{self, VerifyOptions};

/// Flag vectors, ab/cd-indexes and R-labeling search for finite graded posets.
#[derive(Parser)]
#[command(name = "posetlab", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args, Clone, Copy)]
struct Budget {
    /// Search node budget.
    #[arg(long, default_value_t = 100_000_000)]
    max_nodes: u64,
    /// Search wall-clock budget in seconds.
    #[arg(long, default_value_t = 300)]
    timeout_s: u64,
    /// Worker threads for the search.
    #[arg(long, default_value_t = 1)]
    jobs: usize,
}

impl Budget {
    fn limits(self) -> SearchLimits {
        SearchLimits {
            max_nodes: Some(self.max_nodes),
            timeout: Some(Duration::from_secs(self.timeout_s)),
            jobs: self.jobs,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Write a poset from one of the built-in families.
    Gen {
        #[arg(value_enum)]
        family: Family,
        n: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Flag f- and h-vectors.
    Flag {
        poset: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// ab-index, or cd-index when it exists (exit 3 otherwise).
    Index {
        poset: PathBuf,
        #[arg(long, value_enum, default_value_t = Basis::Ab)]
        basis: Basis,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Search for a triple assignment: exit 0 found, 1 proven none, 2 inconclusive.
    Search {
        poset: PathBuf,
        #[arg(long, value_enum, default_value_t = Mode::First)]
        mode: Mode,
        #[command(flatten)]
        budget: Budget,
        /// Write the witness assignment here.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Write the induced R-labeling here.
        #[arg(long)]
        labeling_out: Option<PathBuf>,
        /// Include node and propagation counts and elapsed time.
        #[arg(long)]
        stats: bool,
    },
    /// Maximal chains, with weights and descents under an assignment.
    Chains {
        poset: PathBuf,
        #[arg(long)]
        assignment: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
    },
    /// Check an assignment or labeling file.
    Check {
        #[arg(long)]
        assignment: Option<PathBuf>,
        #[arg(long)]
        labeling: Option<PathBuf>,
    },
    /// Recompute every published claim for ranks up to --max-n.
    VerifyPaper {
        #[arg(long, default_value_t = 5, value_parser = clap::value_parser!(u64).range(3..))]
        max_n: u64,
        #[command(flatten)]
        budget: Budget,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
        /// Also write JSON lines here.
        #[arg(long)]
        report: Option<PathBuf>,
        /// Include per-row runtimes.
        #[arg(long)]
        timing: bool,
    },
}

fn run(cli: Cli) -> Result<Output> {
    match cli.command {
        Command::Gen { family, n, out } => {
            let output = commands::cmd_gen(family, n)?;
            match out {
                Some(path) => {
                    std::fs::write(&path, &output.text)
                        .with_context(|| format!("writing {}", path.display()))?;
                    Ok(Output {
                        text: String::new(),
                        code: exit::OK,
                    })
                }
                None => Ok(output),
            }
        }
        Command::Flag { poset, format } => commands::cmd_flag(&read_poset(&poset)?, format),
        Command::Index {
            poset,
            basis,
            format,
        } => commands::cmd_index(&read_poset(&poset)?, basis, format),
        Command::Search {
            poset,
            mode,
            budget,
            out,
            labeling_out,
            stats,
        } => {
            let args = SearchArgs {
                limits: budget.limits(),
                with_stats: stats,
                assignment_out: out,
                labeling_out,
            };
            commands::cmd_search(&read_poset(&poset)?, mode, &args)
        }
        Command::Chains {
            poset,
            assignment,
            format,
        } => {
            let p = read_poset(&poset)?;
            let tau = match assignment {
                Some(path) => {
                    let (ap, tau) = read_assignment(&path)?;
                    anyhow::ensure!(
                        ap.to_json() == p.to_json(),
                        "assignment belongs to a different poset"
                    );
                    Some(tau)
                }
                None => None,
            };
            commands::cmd_chains(&p, tau.as_ref(), format)
        }
        Command::Check {
            assignment,
            labeling,
        } => commands::cmd_check(assignment.as_deref(), labeling.as_deref()),
        Command::VerifyPaper {
            max_n,
            budget,
            format,
            report,
            timing,
        } => {
            let opts = VerifyOptions {
                max_n: max_n as usize,
                limits: budget.limits(),
            };
            let rows = verify::verify_paper(&opts);
            if let Some(path) = report {
                std::fs::write(&path, verify::render_json_lines(&rows, timing))
                    .with_context(|| format!("writing {}", path.display()))?;
            }
            let text = match format {
                Format::Json => verify::render_json_lines(&rows, timing),
                Format::Table => verify::render_table(&rows, timing),
            };
            Ok(Output {
                text,
                code: verify::exit_code(&rows),
            })
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(out) => {
            print!("{}", out.text);
            ExitCode::from(out.code as u8)
        }
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit::INCONCLUSIVE as u8)
        }
    }
}
