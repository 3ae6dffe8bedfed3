use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use fermijordan::{
    analyze, qbin, verify, AnalysisRequest, CliError, CouplingSource, Outcome, SectorSelection,
};

/// Jordan structure of the nearest-neighbour hopping operator on fermionic
/// Fock sectors, in exact rational arithmetic.
#[derive(Parser)]
#[command(name = "fermijordan", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Kernel profile, Jordan blocks and (optionally) chains of one sector.
    Analyze {
        /// Number of sites.
        #[arg(long)]
        ell: usize,
        /// Particle number, or `all`.
        #[arg(long, value_parser = parse_selection)]
        m: SectorSelection,
        /// `uniform`, `random`, or a file with one rational coupling per line.
        #[arg(long, default_value = "uniform")]
        couplings: String,
        /// Seed for `--couplings random`.
        #[arg(long)]
        seed: Option<u64>,
        /// Build and print an explicit Jordan chain basis.
        #[arg(long)]
        chains: bool,
        #[arg(long)]
        json: bool,
        /// Stop the kernel profile after M^dmax.
        #[arg(long)]
        dmax: Option<usize>,
    },
    /// Coefficients of the Gaussian binomial [L choose M]_q.
    Qbin {
        ell: usize,
        m: usize,
        #[arg(long)]
        json: bool,
    },
    /// Check every sector with ell <= ell-max.
    Verify {
        #[arg(long, default_value_t = 10)]
        ell_max: usize,
        /// `uniform` or `random`.
        #[arg(long, default_value = "uniform")]
        couplings: String,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        json: bool,
    },
}

fn parse_selection(s: &str) -> Result<SectorSelection, String> {
    if s.eq_ignore_ascii_case("all") {
        return Ok(SectorSelection::All);
    }
    s.parse()
        .map(SectorSelection::One)
        .map_err(|_| format!("expected a particle number or `all`, got {s:?}"))
}

fn coupling_source(spec: &str, seed: Option<u64>) -> Result<CouplingSource, CliError> {
    match (spec, seed) {
        ("random", Some(seed)) => Ok(CouplingSource::Random { seed }),
        ("random", None) => Err(CliError::Usage("--couplings random requires --seed".into())),
        (_, Some(_)) => Err(CliError::Usage(
            "--seed is only used with --couplings random".into(),
        )),
        ("uniform", None) => Ok(CouplingSource::Uniform),
        (path, None) => Ok(CouplingSource::File(PathBuf::from(path))),
    }
}

fn run(cli: Cli) -> Result<Outcome, CliError> {
    match cli.command {
        Command::Analyze {
            ell,
            m,
            couplings,
            seed,
            chains,
            json,
            dmax,
        } => analyze(&AnalysisRequest {
            ell,
            m,
            couplings: coupling_source(&couplings, seed)?,
            chains,
            json,
            dmax,
        }),
        Command::Qbin { ell, m, json } => qbin(ell, m, json),
        Command::Verify {
            ell_max,
            couplings,
            seed,
            json,
        } => match coupling_source(&couplings, seed)? {
            CouplingSource::Uniform => verify(ell_max, None, json),
            CouplingSource::Random { seed } => verify(ell_max, Some(seed), json),
            CouplingSource::File(_) => Err(CliError::Usage(
                "verify accepts --couplings uniform or random".into(),
            )),
        },
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(outcome) => {
            let mut stdout = std::io::stdout().lock();
            let _ = stdout.write_all(outcome.stdout.as_bytes());
            let _ = stdout.flush();
            if let Some(msg) = &outcome.failure {
                eprintln!("error: {msg}");
            }
            ExitCode::from(outcome.exit_code() as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
