//! `quillen`: build groups, compute Quillen posets and their homology, run
//! verdicts and the verification harness.
//!
//! Exit codes: 0 success, 1 verification mismatch, 2 configuration error,
//! 3 resource cap exceeded.

mod cache;
mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use quillen_core::analysis::{AnalysisConfig, Pipeline};
use quillen_core::homology::{Backend, BettiOptions};
use quillen_core::permgroup::Caps;
use quillen_core::Error;

#[derive(Parser)]
#[command(
    name = "quillen",
    version,
    about = "Quillen posets of finite permutation groups"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Name, degree, order, p-rank and p-core order of a group.
    Group {
        #[command(flatten)]
        group: GroupArgs,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Whether the top-degree homology of A_p(G) is nonzero.
    Qd {
        #[command(flatten)]
        group: GroupArgs,
        #[command(flatten)]
        run: RunArgs,
    },
    /// f-vector, reduced Betti numbers and the Euler characteristic two ways.
    Betti {
        #[command(flatten)]
        group: GroupArgs,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Text dump of the (reduced) poset.
    Poset {
        #[command(flatten)]
        group: GroupArgs,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Connected components, checked against the disconnected families at p = 2.
    Components {
        #[command(flatten)]
        group: GroupArgs,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Mayer-Vietoris bound for an extension given by --extend.
    Mvles {
        #[command(flatten)]
        group: GroupArgs,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Compare closed forms with brute force; exits 1 on any mismatch.
    Verify {
        /// Named suite: paper-small, or g2_3 (needs --file and --allow-hours).
        #[arg(long, conflicts_with = "family")]
        suite: Option<String>,
        /// PSL2, PGL2, PSL3, PSU3, ree-euler or psu3-bound.
        #[arg(long)]
        family: Option<String>,
        /// Comma-separated field sizes.
        #[arg(long, value_delimiter = ',')]
        q: Vec<u64>,
        /// Largest q, for the formula-only families.
        #[arg(long)]
        q_max: Option<u64>,
        /// Group file for the g2_3 suite.
        #[arg(long)]
        file: Option<PathBuf>,
        /// Permit runs that take hours.
        #[arg(long)]
        allow_hours: bool,
        /// Also write the markdown summary to this path.
        #[arg(long)]
        summary: Option<PathBuf>,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Write the shipped group files into a directory.
    Fixture {
        #[arg(long, default_value = ".")]
        dir: PathBuf,
    },
}

/// A group given by family and field size, optionally extended, or by file.
#[derive(Args, Clone)]
struct GroupArgs {
    /// PSL2, PGL2, SL2, PSL3, PGL3, PSU3, PGU3, Sym, Alt, Cyclic, Dihedral or AGL1.
    #[arg(long, required_unless_present = "file")]
    family: Option<String>,
    /// Field size, or the degree / order parameter for the non-Lie families.
    #[arg(long, required_unless_present = "file")]
    q: Option<u32>,
    /// Outer automorphisms to adjoin: field, graph, graph-field, diagonal.
    #[arg(long, value_delimiter = ',')]
    extend: Vec<String>,
    /// Group file in the quillen-group format.
    #[arg(long, conflicts_with_all = ["family", "q", "extend"])]
    file: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum, PartialEq, Eq)]
enum Format {
    Text,
    Csv,
}

#[derive(Args, Clone)]
struct RunArgs {
    #[arg(long, default_value_t = 2)]
    p: u32,
    #[arg(long, default_value = "modular")]
    backend: String,
    /// Modular primes tried before escalating.
    #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u64).range(2..))]
    primes: u64,
    /// Seed for the modular primes.
    #[arg(long, default_value_t = 0x5eed)]
    seed: u64,
    /// Fail on a modular disagreement instead of falling back to exact ranks.
    #[arg(long)]
    no_exact_fallback: bool,
    /// Largest group whose elements may be enumerated.
    #[arg(long, default_value_t = 10_000_000, value_parser = clap::value_parser!(u64).range(1..))]
    cap: u64,
    /// Largest number of faces of the order complex.
    #[arg(long, default_value_t = 50_000_000, value_parser = clap::value_parser!(u64).range(1..))]
    face_budget: u64,
    /// Cache directory; QUILLEN_CACHE_DIR is used when absent. No cache when neither is set.
    #[arg(long)]
    cache_dir: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
    /// Replace the poset by its core before building the complex.
    #[arg(long)]
    core: bool,
    /// Remove cone points before building the complex.
    #[arg(long)]
    cone: bool,
    /// Worker threads.
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
    jobs: u64,
}

/// Validated run configuration.
pub struct RunConfig {
    pub p: u32,
    pub analysis: AnalysisConfig,
    pub cache_dir: Option<PathBuf>,
    pub csv: bool,
}

impl RunArgs {
    fn resolve(&self) -> Result<RunConfig, Error> {
        if !is_prime(self.p) {
            return Err(Error::Config(format!("p = {} is not prime", self.p)));
        }
        let backend: Backend = self.backend.parse()?;
        let caps = Caps {
            scan_cap: self.cap as u128,
            ..Caps::default()
        };
        let cache_dir = self
            .cache_dir
            .clone()
            .or_else(|| std::env::var_os("QUILLEN_CACHE_DIR").map(PathBuf::from));
        rayon::ThreadPoolBuilder::new()
            .num_threads(self.jobs as usize)
            .build_global()
            .map_err(|e| Error::Config(format!("--jobs: {e}")))?;
        Ok(RunConfig {
            p: self.p,
            analysis: AnalysisConfig {
                caps,
                betti: BettiOptions {
                    backend,
                    primes: self.primes as usize,
                    seed: self.seed,
                    exact_fallback: !self.no_exact_fallback,
                },
                face_budget: self.face_budget,
                pipeline: Pipeline {
                    core: self.core,
                    cone: self.cone,
                },
            },
            cache_dir,
            csv: self.format == Format::Csv,
        })
    }
}

fn is_prime(n: u32) -> bool {
    n >= 2
        && (2..)
            .take_while(|d| d * d <= n)
            .all(|d| !n.is_multiple_of(d))
}

/// Outcome of a command that ran to completion.
pub enum Status {
    Ok,
    Mismatch,
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Resource { .. } => 3,
        // a failed internal cross-check is a mismatch
        Error::Internal(_) => 1,
        _ => 2,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Group { group, run } => {
            run.resolve().and_then(|cfg| commands::group(&group, &cfg))
        }
        Command::Qd { group, run } => run.resolve().and_then(|cfg| commands::qd(&group, &cfg)),
        Command::Betti { group, run } => {
            run.resolve().and_then(|cfg| commands::betti(&group, &cfg))
        }
        Command::Poset { group, run } => {
            run.resolve().and_then(|cfg| commands::poset(&group, &cfg))
        }
        Command::Components { group, run } => run
            .resolve()
            .and_then(|cfg| commands::components(&group, &cfg)),
        Command::Mvles { group, run } => {
            run.resolve().and_then(|cfg| commands::mvles(&group, &cfg))
        }
        Command::Verify {
            suite,
            family,
            q,
            q_max,
            file,
            allow_hours,
            summary,
            run,
        } => run.resolve().and_then(|cfg| {
            commands::verify(
                &commands::VerifyArgs {
                    suite,
                    family,
                    q,
                    q_max,
                    file,
                    allow_hours,
                    summary,
                },
                &cfg,
            )
        }),
        Command::Fixture { dir } => commands::fixture(&dir),
    };
    match result {
        Ok(Status::Ok) => ExitCode::SUCCESS,
        Ok(Status::Mismatch) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
