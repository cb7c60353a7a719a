use clap::{Args, Parser, Subcommand, ValueEnum};
use optcool::limits::DEFAULT_PRECISION;
use optcool::Mode;

#[derive(Debug, Parser)]
#[command(name = "optcool", version, about = "Optimal entropy compression and heat-bath algorithmic cooling")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Optimal complementary-pair swaps for one compression step.
    ///
    /// CSV columns: low,high,low_bits,high_bits
    Optswaps {
        #[command(flatten)]
        register: RegisterArgs,
        /// Qubit to cool (1-based); it is exchanged with qubit 1 first.
        #[arg(long, default_value_t = 1)]
        target: usize,
        /// Exhaustively check that no other exchange does better.
        #[arg(long)]
        verify: bool,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Per-round cooling limits.
    ///
    /// CSV columns: round,qubit,limit
    Limits {
        #[command(flatten)]
        register: RegisterArgs,
        #[command(flatten)]
        run: RunArgs,
        /// Closed-form evaluation; needs equal biases.
        #[arg(long)]
        analytic: bool,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Full cooling run with bath resets and exchange counting.
    ///
    /// CSV columns: round,qubit,limit,target
    Cool {
        #[command(flatten)]
        register: RegisterArgs,
        #[command(flatten)]
        run: RunArgs,
        #[arg(long, value_enum, default_value_t = ModeArg::Full)]
        mode: ModeArg,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Emit a `.nbmc` circuit for the optimal swaps or the limiting swap.
    Circuit {
        /// Synthesize the optimal swap set of the given register.
        #[arg(long, requires = "bias_input", conflicts_with = "lim")]
        from_biases: bool,
        /// Synthesize the limiting swap on this many wires.
        #[arg(long, value_name = "N", required_unless_present = "from_biases")]
        lim: Option<usize>,
        #[command(flatten)]
        register: OptionalRegisterArgs,
        #[arg(long, value_name = "PATH")]
        out: Option<std::path::PathBuf>,
    },
    /// Exchange counts across register sizes or default biases.
    ///
    /// CSV columns: n,complexity (with --ns) or epsilon,complexity (with --epsilons)
    Sweep {
        /// Register sizes: a list `3,4,5` or a range `3..7` (inclusive).
        #[arg(long, value_name = "SIZES", conflicts_with_all = ["epsilons", "n"], requires = "epsilon")]
        ns: Option<String>,
        /// Equal default bias, with --ns.
        #[arg(long, requires = "ns")]
        epsilon: Option<f64>,
        /// Fixed register size, with --epsilons.
        #[arg(long)]
        n: Option<usize>,
        /// Comma-separated default biases, with --n.
        #[arg(long, value_delimiter = ',', requires = "n")]
        epsilons: Vec<f64>,
        #[arg(long, default_value_t = DEFAULT_PRECISION)]
        precision: f64,
        #[arg(long, value_enum, default_value_t = ModeArg::Full)]
        mode: ModeArg,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Closed-system bounds next to the cooling limit.
    ///
    /// CSV columns: quantity,value
    Bounds {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        epsilon: f64,
        #[command(flatten)]
        output: OutputArgs,
    },
}

#[derive(Debug, Args)]
#[group(id = "bias_input", required = true, multiple = true)]
pub struct RegisterArgs {
    /// Comma-separated biases, qubit 1 first.
    #[arg(long, value_delimiter = ',', num_args = 1.., conflicts_with_all = ["n", "epsilon"])]
    pub biases: Option<Vec<f64>>,
    /// Register size, with --epsilon.
    #[arg(long, requires = "epsilon")]
    pub n: Option<usize>,
    /// Equal bias for every qubit, with --n.
    #[arg(long, requires = "n")]
    pub epsilon: Option<f64>,
}

#[derive(Debug, Args)]
#[group(id = "bias_input", required = false, multiple = true)]
pub struct OptionalRegisterArgs {
    #[arg(long, value_delimiter = ',', num_args = 1.., conflicts_with_all = ["n", "epsilon"])]
    pub biases: Option<Vec<f64>>,
    #[arg(long, requires = "epsilon")]
    pub n: Option<usize>,
    #[arg(long, requires = "n")]
    pub epsilon: Option<f64>,
}

impl From<OptionalRegisterArgs> for RegisterArgs {
    fn from(a: OptionalRegisterArgs) -> Self {
        RegisterArgs { biases: a.biases, n: a.n, epsilon: a.epsilon }
    }
}

#[derive(Debug, Args)]
pub struct RunArgs {
    /// Number of rounds; defaults to n − 2.
    #[arg(long)]
    pub rounds: Option<usize>,
    #[arg(long, default_value_t = DEFAULT_PRECISION)]
    pub precision: f64,
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    #[arg(long, value_name = "PATH")]
    pub out: Option<std::path::PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    /// Every beneficial exchange.
    Full,
    /// Only the limiting swap.
    Lim,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Full => Mode::Full,
            ModeArg::Lim => Mode::LimComp,
        }
    }
}
