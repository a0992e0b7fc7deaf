use std::process::ExitCode;
use std::time::{Duration, Instant};

use clap::{ArgAction, Args, Parser, Subcommand, ValueEnum};

use osctab::cli::{self, Emission, Format, HomomesyRequest, TargetSet};
use osctab::homomesy::{Backend, Budget};
use osctab::verify::Suite;
use osctab::{Error, Limits, OscillatingTableau, Partition, PerfectMatching};

#[derive(Parser)]
#[command(name = "osctab", version, about = "Oscillating tableaux, perfect matchings and orbit certificates")]
struct Cli {
    /// Output format for tabular commands; reports are always JSON.
    #[arg(long, global = true, value_enum, default_value_t = FormatArg::Json)]
    format: FormatArg,

    /// Omit wall-clock fields so identical invocations print identical bytes.
    #[arg(long, global = true, action = ArgAction::Set, default_value_t = true)]
    deterministic: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum SetArg {
    Matchings,
    Tableaux,
}

#[derive(Clone, Copy, ValueEnum)]
enum BackendArg {
    Backtracking,
    ExactCover,
}

#[derive(Clone, Copy, ValueEnum)]
enum SuiteArg {
    Count,
    Weight,
    Diffposet,
    Rs,
    Stats,
    All,
}

#[derive(Args)]
struct WalkArgs {
    /// Final shape, e.g. "2,1"; "-" for the empty partition.
    #[arg(long, default_value = "-", allow_hyphen_values = true)]
    shape: Partition,
    /// Starting shape.
    #[arg(long, default_value = "-", allow_hyphen_values = true)]
    mu: Partition,
    /// Number of steps; defaults to |shape| - |mu| + 2n.
    #[arg(long)]
    length: Option<usize>,
    #[arg(long)]
    n: Option<usize>,
}

impl WalkArgs {
    fn length(&self) -> Result<usize, Error> {
        if let Some(l) = self.length {
            return Ok(l);
        }
        let n = self.n.ok_or_else(|| Error::Parse("one of --length or --n is required".into()))?;
        let diff = self
            .shape
            .size()
            .checked_sub(self.mu.size())
            .ok_or_else(|| Error::Parse("--length is required when |mu| > |shape|".into()))?;
        Ok(diff + 2 * n)
    }
}

#[derive(Subcommand)]
enum Command {
    /// #OT(shape, |shape| + 2n) by formula and by enumeration.
    Count {
        #[arg(long, default_value = "-", allow_hyphen_values = true)]
        shape: Partition,
        #[arg(long)]
        n: usize,
    },
    /// List the oscillating tableaux from --mu to --shape.
    Enumerate(WalkArgs),
    /// Exact average weight and size.
    AvgWeight(WalkArgs),
    /// Weight generating function against the q-table.
    Gf {
        #[arg(long, default_value = "-", allow_hyphen_values = true)]
        shape: Partition,
        #[arg(long)]
        length: Option<usize>,
        #[arg(long)]
        n: Option<usize>,
    },
    /// Up/down operator coefficient tables.
    Diffposet {
        #[command(subcommand)]
        command: DiffposetCommand,
    },
    /// Bijection between perfect matchings and closed oscillating tableaux.
    Rs {
        #[command(subcommand)]
        command: RsCommand,
    },
    /// Statistics of every matching of [2n].
    Stats {
        #[arg(long)]
        n: usize,
    },
    /// Search for a partition into triples with equal statistic sums.
    Homomesy {
        #[arg(long, value_enum)]
        set: SetArg,
        #[arg(long, default_value = "-", allow_hyphen_values = true)]
        shape: Partition,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 100_000_000)]
        budget_nodes: u64,
        /// Wall-time budget; 0 disables it.
        #[arg(long, default_value_t = 60.0)]
        budget_seconds: f64,
        #[arg(long)]
        parallel: bool,
        /// Require every triple to be closed under conjugation.
        #[arg(long)]
        conjugation_closed: bool,
        #[arg(long, value_enum)]
        backend: Option<BackendArg>,
    },
    /// Reduced denominators of average weights over skew walks.
    SkewScan {
        #[arg(long, default_value_t = 0)]
        max_mu_size: usize,
        #[arg(long, default_value_t = 4)]
        max_shape_size: usize,
        #[arg(long, default_value_t = 8)]
        max_length: usize,
        #[arg(long)]
        parallel: bool,
    },
    /// Run an invariant battery.
    Verify {
        #[arg(long, value_enum, default_value_t = SuiteArg::All)]
        suite: SuiteArg,
        #[arg(long, default_value_t = 3)]
        kmax: usize,
        #[arg(long, default_value_t = 2)]
        nmax: usize,
    },
}

#[derive(Subcommand)]
enum DiffposetCommand {
    QTable {
        #[arg(long)]
        length: usize,
    },
    BTable {
        #[arg(long)]
        length: usize,
    },
    CTable {
        #[arg(long)]
        length: usize,
    },
    VerifyEq1 {
        #[arg(long, default_value_t = 6)]
        kmax: usize,
        #[arg(long, default_value_t = 5)]
        nmax: usize,
    },
}

#[derive(Subcommand)]
enum RsCommand {
    /// Tableau to matching.
    Forward {
        /// Shapes separated by "/", e.g. "-/1/2/1/-".
        #[arg(long, allow_hyphen_values = true)]
        tableau: OscillatingTableau,
    },
    /// Matching to tableau.
    Inverse {
        /// Pairs like "1-4,2-3".
        #[arg(long)]
        matching: PerfectMatching,
    },
    /// Both round trips and the projections for every n up to --n.
    Roundtrip {
        #[arg(long)]
        n: usize,
    },
}

fn dispatch(command: Command, limits: &Limits) -> Result<Emission, Error> {
    match command {
        Command::Count { shape, n } => cli::cmd_count(&shape, n, limits),
        Command::Enumerate(w) => cli::cmd_enumerate(&w.mu, &w.shape, w.length()?, limits),
        Command::AvgWeight(w) => cli::cmd_avg_weight(&w.mu, &w.shape, w.length()?, limits),
        Command::Gf { shape, length, n } => {
            let w = WalkArgs {
                shape,
                mu: Partition::empty(),
                length,
                n,
            };
            cli::cmd_gf(&w.shape, w.length()?, limits)
        }
        Command::Diffposet { command } => match command {
            DiffposetCommand::QTable { length } => cli::cmd_q_table(length, limits),
            DiffposetCommand::BTable { length } => cli::cmd_bc_table(length, false, limits),
            DiffposetCommand::CTable { length } => cli::cmd_bc_table(length, true, limits),
            DiffposetCommand::VerifyEq1 { kmax, nmax } => cli::cmd_verify_eq1(kmax, nmax, limits),
        },
        Command::Rs { command } => match command {
            RsCommand::Forward { tableau } => cli::cmd_rs_forward(&tableau),
            RsCommand::Inverse { matching } => cli::cmd_rs_inverse(&matching),
            RsCommand::Roundtrip { n } => cli::cmd_rs_roundtrip(n, limits),
        },
        Command::Stats { n } => cli::cmd_stats(n, limits),
        Command::Homomesy {
            set,
            shape,
            n,
            budget_nodes,
            budget_seconds,
            parallel,
            conjugation_closed,
            backend,
        } => {
            if !(budget_seconds >= 0.0 && budget_seconds.is_finite()) {
                return Err(Error::Parse(format!("invalid --budget-seconds {budget_seconds}")));
            }
            let req = HomomesyRequest {
                set: match set {
                    SetArg::Matchings => TargetSet::Matchings,
                    SetArg::Tableaux => TargetSet::Tableaux,
                },
                shape,
                n,
                budget: Budget {
                    max_nodes: budget_nodes,
                    max_time: (budget_seconds > 0.0).then(|| Duration::from_secs_f64(budget_seconds)),
                },
                backend: backend.map(|b| match b {
                    BackendArg::Backtracking => Backend::Backtracking,
                    BackendArg::ExactCover => Backend::ExactCover,
                }),
                parallel,
                conjugation_closed,
            };
            cli::cmd_homomesy(&req, limits)
        }
        Command::SkewScan {
            max_mu_size,
            max_shape_size,
            max_length,
            parallel,
        } => cli::cmd_skew_scan(max_mu_size, max_shape_size, max_length, parallel),
        Command::Verify { suite, kmax, nmax } => {
            let suite = match suite {
                SuiteArg::Count => Suite::Count,
                SuiteArg::Weight => Suite::Weight,
                SuiteArg::Diffposet => Suite::Diffposet,
                SuiteArg::Rs => Suite::Rs,
                SuiteArg::Stats => Suite::Stats,
                SuiteArg::All => Suite::All,
            };
            cli::cmd_verify(suite, kmax, nmax, limits)
        }
    }
}

fn main() -> ExitCode {
    let args = Cli::parse();
    let limits = Limits::from_env();
    let format = match args.format {
        FormatArg::Csv => Format::Csv,
        FormatArg::Json => Format::Json,
    };
    let started = Instant::now();
    match dispatch(args.command, &limits) {
        Ok(mut emission) => {
            if !args.deterministic {
                emission.set_elapsed(started.elapsed());
            }
            print!("{}", emission.render(format));
            ExitCode::from(emission.exit_code() as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
