use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

mod commands;

/// Exit codes: 0 ok, 1 verification failed, 2 parse or i/o error,
/// 3 parameter violation, 4 player budget exceeded, 5 zero block mass.
#[derive(Parser)]
#[command(name = "nashreduce", version, about = "Reduce k-player games to bimatrix games and recover equilibria")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Reduce a game and write the result, its mapping and a parameter ledger.
    Reduce(ReduceArgs),
    /// Map an equilibrium of a reduced game back to the source game.
    Recover(RecoverArgs),
    /// Check whether a profile is an eps-well-supported Nash equilibrium.
    Verify(VerifyArgs),
    /// Find an equilibrium with one of the exact oracles.
    Solve(SolveArgs),
    /// Inspect, build and test gadgets.
    #[command(subcommand)]
    Gadget(GadgetCommand),
    /// Write a random game.
    Random(RandomArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum StageArg {
    /// Normal form to polymatrix.
    Linearize,
    /// Polymatrix to bimatrix.
    Bimatrix,
    /// Normal form to bimatrix.
    Full,
}

#[derive(Clone, Copy, ValueEnum)]
enum ConstructionArg {
    Unary,
    Log,
}

#[derive(Args)]
struct ReduceArgs {
    #[arg(long)]
    input: PathBuf,
    /// Accuracy required of recovered equilibria (linearize and full stages).
    #[arg(long)]
    eps_k: Option<String>,
    /// Polymatrix accuracy (bimatrix stage only).
    #[arg(long)]
    eps_m: Option<String>,
    #[arg(long, value_enum, default_value = "log")]
    construction: ConstructionArg,
    #[arg(long, value_enum, default_value = "full")]
    stage: StageArg,
    /// Emit the bimatrix game with payoffs normalized to [0, 1].
    #[arg(long)]
    normalize: bool,
    #[arg(long)]
    out_game: PathBuf,
    #[arg(long)]
    out_mapping: PathBuf,
    /// Also write the parameter ledger here.
    #[arg(long)]
    ledger: Option<PathBuf>,
}

#[derive(Args)]
struct RecoverArgs {
    /// The game that was reduced.
    #[arg(long)]
    source: PathBuf,
    /// The reduced game the profile belongs to.
    #[arg(long)]
    game: PathBuf,
    #[arg(long)]
    mapping: PathBuf,
    #[arg(long)]
    profile: PathBuf,
    #[arg(long)]
    out: PathBuf,
    /// Verify the recovered profile at this eps instead of the ledger's.
    #[arg(long)]
    eps: Option<String>,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long)]
    game: PathBuf,
    #[arg(long)]
    profile: PathBuf,
    #[arg(long, default_value = "0")]
    eps: String,
    /// Players exempt from the best-response check, comma separated.
    #[arg(long, value_delimiter = ',')]
    clamp: Vec<usize>,
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    /// Support enumeration (bimatrix games).
    SupportEnum,
    /// Pure profiles, then a mixed grid (normal-form games).
    BruteForce,
    /// First eps-WSNE on a probability grid (any game).
    Grid,
}

#[derive(Args)]
struct SolveArgs {
    #[arg(long)]
    game: PathBuf,
    #[arg(long, value_enum)]
    method: MethodArg,
    #[arg(long, default_value = "0")]
    eps: String,
    /// Grid step (grid and brute-force fallback).
    #[arg(long, default_value = "1/10")]
    step: String,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also print decimal approximations.
    #[arg(long)]
    approx: bool,
}

#[derive(Subcommand)]
enum GadgetCommand {
    /// List every gadget with its guarantee.
    List,
    /// Build a two-input multiplication gadget and report its size.
    BuildMult {
        #[arg(long, value_enum)]
        construction: ConstructionArg,
        #[arg(long)]
        eps: String,
        /// Write the gadget as a polymatrix game.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check a gadget's guarantee on every grid equilibrium.
    Test {
        /// Gadget name, or `all` for every standard kind.
        name: String,
        #[arg(long)]
        eps: String,
        /// Step of the internal probability grid.
        #[arg(long)]
        grid: String,
        /// Step of the input grid (defaults to --eps).
        #[arg(long)]
        input_grid: Option<String>,
        #[arg(long)]
        zeta: Option<String>,
        #[arg(long)]
        arity: Option<usize>,
        #[arg(long)]
        beta: Option<u32>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ClassArg {
    Normal,
    Polymatrix,
    Bimatrix,
}

#[derive(Args)]
struct RandomArgs {
    #[arg(long, value_enum)]
    class: ClassArg,
    /// Strategy count per player, comma separated.
    #[arg(long, value_delimiter = ',', required = true)]
    strategies: Vec<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Payoffs are multiples of 1/den.
    #[arg(long, default_value_t = 10)]
    den: i64,
    /// Normal form only: plant a strict pure equilibrium at this profile.
    #[arg(long, value_delimiter = ',')]
    pure_nash: Option<Vec<usize>>,
    #[arg(long)]
    out: PathBuf,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Reduce(a) => commands::reduce(a),
        Command::Recover(a) => commands::recover(a),
        Command::Verify(a) => commands::verify(a),
        Command::Solve(a) => commands::solve(a),
        Command::Gadget(g) => commands::gadget(g),
        Command::Random(a) => commands::random(a),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(commands::exit_code(&e))
        }
    }
}
