use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Duration;

use admix::constraints::ConstraintFile;
use admix::parallel::{count_a12_within, default_workers};
use admix::report::{self, CountRecord, CriterionRecord, FamilyArg, Format};
use admix::{Error, Result};
use admix_core::criteria::{exact_criterion, semiregular_grid_agreement};
use admix_core::enumerate::{count_a1, count_a2};
use admix_core::lemmas::verify_lemmas;
use admix_core::MarginSpec;
use clap::{Args, Parser, Subcommand};

#[derive(Parser)]
#[command(name = "admix", version, about = "Count and compare constrained admixed arrays")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Exact size of a constraint family.
    Count {
        #[arg(long, value_enum)]
        family: FamilyArg,
        #[command(flatten)]
        spec: SpecArgs,
        #[arg(long, default_value_t = default_workers() as u64, value_parser = clap::value_parser!(u64).range(1..))]
        workers: u64,
        /// Give up on an A12 count after this many seconds (exit 3).
        #[arg(long)]
        budget_seconds: Option<f64>,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Exact and entropy decisions for |A1| > |A2|.
    Criterion {
        #[command(flatten)]
        spec: SpecArgs,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Exact, saddle-point and independence columns for N = P.
    Table2 {
        #[arg(long, default_value_t = 5, value_parser = clap::value_parser!(u64).range(2..))]
        max_exact: u64,
        /// Sizes reported without an exact count.
        #[arg(long, value_delimiter = ',', default_value = "100,1000,10000")]
        large: Vec<u64>,
        #[arg(long, default_value_t = default_workers() as u64, value_parser = clap::value_parser!(u64).range(1..))]
        workers: u64,
        /// Budget for all exact rows together (exit 3 when exceeded).
        #[arg(long)]
        budget_seconds: Option<f64>,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Semi-regular agreement heat map; the agreement fraction goes to stderr.
    Fig2 {
        #[arg(long = "N", value_parser = clap::value_parser!(u64).range(2..))]
        n: u64,
        #[arg(long = "P", value_parser = clap::value_parser!(u64).range(2..))]
        p: u64,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Numerical checks of the auxiliary lemmas (exit 1 on failure).
    Verify {
        #[arg(long, default_value_t = 6, value_parser = clap::value_parser!(u64).range(2..))]
        max_dim: u64,
        #[arg(long, default_value_t = 1_000_000, value_parser = clap::value_parser!(u64).range(2..))]
        samples: u64,
        #[arg(long, default_value_t = 2024)]
        seed: u64,
        #[command(flatten)]
        out: OutArgs,
    },
}

#[derive(Args)]
struct SpecArgs {
    /// Constraint file; replaces the inline flags.
    #[arg(long, conflicts_with_all = ["n", "p", "a", "phi0", "phi1", "semiregular"])]
    file: Option<PathBuf>,
    /// Broadcast scalar --a, --phi0, --phi1 to every row and locus.
    #[arg(long)]
    semiregular: bool,
    #[arg(long = "N", required_unless_present = "file")]
    n: Option<usize>,
    #[arg(long = "P", required_unless_present = "file")]
    p: Option<usize>,
    /// Row tallies, comma separated (zeros when omitted).
    #[arg(long, value_delimiter = ',')]
    a: Vec<usize>,
    /// Ancestry-0 dosages, comma separated (zeros when omitted).
    #[arg(long, value_delimiter = ',')]
    phi0: Vec<usize>,
    /// Ancestry-1 dosages, comma separated (zeros when omitted).
    #[arg(long, value_delimiter = ',')]
    phi1: Vec<usize>,
}

impl SpecArgs {
    fn resolve(&self) -> Result<MarginSpec> {
        if let Some(path) = &self.file {
            return ConstraintFile::read(path)?.to_spec();
        }
        let (n, p) = (self.n.unwrap_or(0), self.p.unwrap_or(0));
        let fill = |v: &[usize], len: usize, name: &str| -> Result<Vec<usize>> {
            match (v.len(), self.semiregular) {
                (0, _) => Ok(vec![0; len]),
                (1, true) => Ok(vec![v[0]; len]),
                (_, true) => Err(Error::Usage(format!("--semiregular takes a single value for --{name}"))),
                _ => Ok(v.to_vec()),
            }
        };
        Ok(MarginSpec::new(
            n,
            p,
            fill(&self.a, n, "a")?,
            fill(&self.phi0, p, "phi0")?,
            fill(&self.phi1, p, "phi1")?,
        )?)
    }
}

#[derive(Args)]
struct OutArgs {
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    #[arg(long)]
    output: Option<PathBuf>,
}

fn budget(seconds: Option<f64>) -> Result<Option<Duration>> {
    seconds
        .map(|s| {
            Duration::try_from_secs_f64(s)
                .map_err(|_| Error::Usage(format!("invalid --budget-seconds {s}")))
        })
        .transpose()
}

/// Renders into memory first so a failed command leaves no partial output.
fn emit(output: Option<&PathBuf>, render: impl FnOnce(&mut dyn Write) -> Result<()>) -> Result<()> {
    let mut buf = Vec::new();
    render(&mut buf)?;
    let io_err = |path: String| move |source| Error::Io { path, source };
    match output {
        Some(path) => {
            let shown = path.display().to_string();
            let mut file = BufWriter::new(File::create(path).map_err(io_err(shown.clone()))?);
            file.write_all(&buf).map_err(io_err(shown.clone()))?;
            file.flush().map_err(io_err(shown))
        }
        None => io::stdout().write_all(&buf).map_err(io_err("<stdout>".into())),
    }
}

fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Count {
            family,
            spec,
            workers,
            budget_seconds,
            out,
        } => {
            let spec = spec.resolve()?;
            let count = match family {
                FamilyArg::A1 => count_a1(&spec),
                FamilyArg::A2 => count_a2(&spec),
                FamilyArg::A12 => count_a12_within(&spec, workers as usize, budget(budget_seconds)?)?,
            };
            let record = CountRecord::new(family, &spec, &count);
            emit(out.output.as_ref(), |w| record.write(w, out.format))?;
        }
        Command::Criterion { spec, out } => {
            let spec = spec.resolve()?;
            let record = CriterionRecord::new(&spec, &exact_criterion(&spec));
            emit(out.output.as_ref(), |w| record.write(w, out.format))?;
        }
        Command::Table2 {
            max_exact,
            large,
            workers,
            budget_seconds,
            format,
            output,
        } => {
            let rows = report::table2(max_exact, &large, workers as usize, budget(budget_seconds)?)?;
            emit(output.as_ref(), |w| report::write_table2(&rows, w, format))?;
        }
        Command::Fig2 { n, p, format, output } => {
            let grid = semiregular_grid_agreement(n, p)?;
            emit(output.as_ref(), |w| report::write_fig2(&grid, w, format))?;
            eprintln!(
                "agreement fraction {:.6} ({} of {} grid points), N={n} P={p}",
                grid.fraction, grid.agreeing, grid.points
            );
        }
        Command::Verify {
            max_dim,
            samples,
            seed,
            out,
        } => {
            let report = verify_lemmas(max_dim as usize, samples as usize, seed)?;
            emit(out.output.as_ref(), |w| report::write_lemmas(&report, w, out.format))?;
            for c in report.failures() {
                eprintln!(
                    "FAILED {}: {} (residual {:e}, tolerance {:e})",
                    c.lemma.name(),
                    c.location,
                    c.residual,
                    c.tolerance
                );
            }
            return Ok(report.passed());
        }
    }
    Ok(true)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
