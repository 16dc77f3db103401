use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use k3fm::cli::{
    cmd_count, cmd_lattice, cmd_partners, cmd_verify, CommandResult, Context, CountMode,
    LatticeAction, VerifyTarget,
};
use k3fm::disc_form::isometry_bound_from_env;

#[derive(Parser)]
#[command(
    name = "k3fm",
    version,
    about = "Fourier-Mukai partner counts for K3 surfaces"
)]
struct Cli {
    /// Pretty-print the JSON output.
    #[arg(long, global = true)]
    pretty: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List the partners of a K3 surface with Picard lattice <2n>.
    Partners {
        #[arg(long)]
        n: u64,
    },
    /// Count partners.
    Count {
        #[arg(long, conflicts_with_all = ["rank2", "file"])]
        rank1: Option<u64>,
        #[arg(long, conflicts_with = "file")]
        rank2: Option<u64>,
        /// Genus representatives and Hodge image as JSON.
        #[arg(long)]
        file: Option<PathBuf>,
    },
    /// Run a verification.
    Verify {
        #[command(subcommand)]
        target: VerifyCommand,
    },
    /// Lattice invariants.
    Lattice {
        #[command(subcommand)]
        action: LatticeCommand,
    },
}

#[derive(Subcommand)]
enum VerifyCommand {
    /// Hyperbolic partner and orthogonal generator for every partner.
    #[command(alias = "lemma23")]
    Hyperbolic {
        #[arg(long)]
        n: u64,
    },
    /// Residue rigidity search over natural solutions.
    #[command(alias = "lemma25")]
    Rigidity {
        #[arg(long)]
        n: u64,
        #[arg(long, default_value_t = 12)]
        bound: u64,
        /// Also report the sweep over signed solutions (informational).
        #[arg(long)]
        signed: bool,
    },
    /// Isometry group of the discriminant form of Lambda_n.
    Nseq {
        #[arg(long)]
        n: u64,
    },
    /// All exact checks up to nmax.
    All {
        #[arg(long, default_value_t = 60)]
        nmax: u64,
    },
}

#[derive(Subcommand)]
enum LatticeCommand {
    Disc {
        file: PathBuf,
    },
    Signature {
        file: PathBuf,
    },
    GenusCheck {
        first: PathBuf,
        second: PathBuf,
    },
    /// Print a named standard lattice as JSON.
    Standard {
        name: String,
        param: Option<i64>,
    },
}

fn run(cli: &Cli) -> CommandResult {
    let bound = match isometry_bound_from_env() {
        Ok(b) => b,
        Err(e) => return CommandResult::invalid(&e),
    };
    let ctx = Context { bound };
    match &cli.command {
        Command::Partners { n } => cmd_partners(*n),
        Command::Count { rank1, rank2, file } => {
            let mode = match (rank1, rank2, file) {
                (Some(n), None, None) => CountMode::Rank1(*n),
                (None, Some(p), None) => CountMode::Rank2(*p),
                (None, None, Some(f)) => CountMode::General(f),
                _ => {
                    return CommandResult::invalid(&k3fm::Error::InvalidParameter(
                        "exactly one of --rank1, --rank2, --file is required".into(),
                    ))
                }
            };
            cmd_count(&ctx, mode)
        }
        Command::Verify { target } => {
            let target = match *target {
                VerifyCommand::Hyperbolic { n } => VerifyTarget::Hyperbolic { n },
                VerifyCommand::Rigidity { n, bound, signed } => {
                    VerifyTarget::Rigidity { n, bound, signed }
                }
                VerifyCommand::Nseq { n } => VerifyTarget::Nseq { n },
                VerifyCommand::All { nmax } => VerifyTarget::All { nmax },
            };
            cmd_verify(&ctx, target)
        }
        Command::Lattice { action } => {
            let action = match action {
                LatticeCommand::Disc { file } => LatticeAction::Disc(file),
                LatticeCommand::Signature { file } => LatticeAction::Signature(file),
                LatticeCommand::GenusCheck { first, second } => {
                    LatticeAction::GenusCheck(first, second)
                }
                LatticeCommand::Standard { name, param } => LatticeAction::Standard {
                    name,
                    param: *param,
                },
            };
            cmd_lattice(&ctx, action)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = run(&cli);
    let standard = matches!(
        cli.command,
        Command::Lattice {
            action: LatticeCommand::Standard { .. }
        }
    );
    // A standard lattice is printed bare so it can be fed back as a lattice file.
    let text = if standard && result.exit_code() == 0 {
        result.render_payload(cli.pretty)
    } else {
        result.render(cli.pretty)
    };
    let mut out = std::io::stdout().lock();
    let _ = writeln!(out, "{text}");
    ExitCode::from(result.exit_code() as u8)
}
