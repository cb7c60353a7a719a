use std::fmt;
use std::io::Write;
use std::path::Path;

use optcool::hbac::complexity_by_bias;
use optcool::limits::{analytic_matrix, shannon_bound, sqrt_bound, LimitMatrix};
use optcool::{
    apply_swaps, bias_gain, complexity_sweep, export_text, find_optswaps, lim_comp, marginal_bias,
    nb_maxcomp, numerical_limits, probamps, register_compression, single_round_limit, verify_optimality,
    analytic_limit, Bias, HbacConfig, Mode, OptimalityReport, RegisterBiases,
};
use serde::Serialize;

use crate::args::{Command, Format, ModeArg, OutputArgs, RegisterArgs, RunArgs};

const SCHEMA: u32 = 1;

#[derive(Debug)]
pub enum CliError {
    Core(optcool::Error),
    Usage(String),
    Io(std::io::Error),
    Csv(csv::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        use optcool::Error as E;
        match self {
            CliError::Core(E::SizeCap { .. } | E::Overflow { .. }) => 3,
            CliError::Core(E::NonConvergence { .. }) => 4,
            CliError::Core(_) | CliError::Usage(_) => 2,
            CliError::Io(_) | CliError::Csv(_) => 1,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Core(e) => e.fmt(f),
            CliError::Usage(msg) => f.write_str(msg),
            CliError::Io(e) => e.fmt(f),
            CliError::Csv(e) => e.fmt(f),
        }
    }
}

impl From<optcool::Error> for CliError {
    fn from(e: optcool::Error) -> Self {
        CliError::Core(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Csv(e)
    }
}

type Result<T> = std::result::Result<T, CliError>;

pub fn run(command: Command) -> Result<()> {
    match command {
        Command::Optswaps { register, target, verify, output } => optswaps(register, target, verify, &output),
        Command::Limits { register, run, analytic, output } => limits(register, run, analytic, &output),
        Command::Cool { register, run, mode, output } => cool(register, run, mode, &output),
        Command::Circuit { from_biases, lim, register, out } => {
            let circuit = match lim {
                Some(n) if !from_biases => lim_comp(n)?,
                _ => {
                    let reg = register_from(register.into())?;
                    let dist = probamps(&reg)?;
                    nb_maxcomp(reg.len(), &find_optswaps(&dist))?
                }
            };
            emit(out.as_deref(), export_text(&circuit).as_bytes())
        }
        Command::Sweep { ns, epsilon, n, epsilons, precision, mode, output } => {
            sweep(ns, epsilon, n, epsilons, precision, mode, &output)
        }
        Command::Bounds { n, epsilon, output } => bounds(n, epsilon, &output),
    }
}

fn register_from(args: RegisterArgs) -> Result<RegisterBiases> {
    match (args.biases, args.n, args.epsilon) {
        (Some(values), None, None) => Ok(RegisterBiases::from_values(&values)?),
        (None, Some(n), Some(eps)) => Ok(RegisterBiases::uniform(n, eps)?),
        _ => Err(CliError::Usage("give either --biases or both --n and --epsilon".into())),
    }
}

fn rounds_for(run: &RunArgs, n: usize) -> Result<usize> {
    match run.rounds {
        Some(r) => Ok(r),
        None if n >= 3 => Ok(n - 2),
        None => Err(CliError::Usage(format!("a {n}-qubit register has no cooling rounds"))),
    }
}

fn emit(out: Option<&Path>, bytes: &[u8]) -> Result<()> {
    match out {
        Some(path) => std::fs::write(path, bytes)?,
        None => std::io::stdout().lock().write_all(bytes)?,
    }
    Ok(())
}

fn emit_json(output: &OutputArgs, value: &impl Serialize) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value).expect("report serializes");
    text.push('\n');
    emit(output.out.as_deref(), text.as_bytes())
}

/// Headers are written up front so an empty table still names its columns.
fn emit_csv<R: Serialize>(output: &OutputArgs, headers: &[&str], rows: impl IntoIterator<Item = R>) -> Result<()> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(Vec::new());
    w.write_record(headers)?;
    for row in rows {
        w.serialize(row)?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Io(e.into_error()))?;
    emit(output.out.as_deref(), &bytes)
}

#[derive(Serialize)]
struct SwapRow {
    low: usize,
    high: usize,
    low_bits: String,
    high_bits: String,
}

#[derive(Serialize)]
struct OptswapsReport<'a> {
    schema: u32,
    command: &'static str,
    n: usize,
    target: usize,
    biases: &'a [f64],
    swaps: &'a [SwapRow],
    gain: f64,
    target_bias_before: f64,
    target_bias_after: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    verification: Option<OptimalityReport>,
}

fn optswaps(register: RegisterArgs, target: usize, verify: bool, output: &OutputArgs) -> Result<()> {
    let reg = register_from(register)?.bring_to_front(target)?;
    let n = reg.len();
    let dist = probamps(&reg)?;
    let swaps = find_optswaps(&dist);
    let verification = if verify { Some(verify_optimality(&dist)?) } else { None };
    let after = apply_swaps(&dist, &swaps)?;
    let bits = |j: usize| format!("{j:0n$b}");
    let rows: Vec<SwapRow> = swaps
        .pairs()
        .map(|(low, high)| SwapRow { low, high, low_bits: bits(low), high_bits: bits(high) })
        .collect();
    if output.format == Format::Csv {
        return emit_csv(output, &["low", "high", "low_bits", "high_bits"], rows);
    }
    emit_json(
        output,
        &OptswapsReport {
            schema: SCHEMA,
            command: "optswaps",
            n,
            target,
            biases: &reg.values(),
            swaps: &rows,
            gain: bias_gain(&dist, &swaps),
            target_bias_before: marginal_bias(&dist, 1)?,
            target_bias_after: marginal_bias(&after, 1)?,
            verification,
        },
    )
}

#[derive(Serialize)]
struct LimitRow {
    round: usize,
    qubit: usize,
    limit: f64,
}

fn limit_rows(m: &LimitMatrix) -> impl Iterator<Item = LimitRow> + '_ {
    (1..=m.rounds()).flat_map(move |round| {
        m.row(round).iter().enumerate().map(move |(k, &limit)| LimitRow { round, qubit: k + 1, limit })
    })
}

#[derive(Serialize)]
struct LimitsReport<'a> {
    schema: u32,
    command: &'static str,
    method: &'static str,
    n: usize,
    rounds: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    precision: Option<f64>,
    biases: &'a [f64],
    limits: &'a [Vec<f64>],
}

fn limits(register: RegisterArgs, run: RunArgs, analytic: bool, output: &OutputArgs) -> Result<()> {
    let reg = register_from(register)?;
    let n = reg.len();
    let rounds = rounds_for(&run, n)?;
    let values = reg.values();
    let matrix = if analytic {
        if values.windows(2).any(|w| w[0] != w[1]) {
            return Err(CliError::Usage("--analytic needs equal biases".into()));
        }
        analytic_matrix(n, reg.biases()[0], rounds)?
    } else {
        numerical_limits(&reg, rounds, run.precision)?
    };
    if output.format == Format::Csv {
        return emit_csv(output, &["round", "qubit", "limit"], limit_rows(&matrix));
    }
    emit_json(
        output,
        &LimitsReport {
            schema: SCHEMA,
            command: "limits",
            method: if analytic { "analytic" } else { "numerical" },
            n,
            rounds,
            precision: (!analytic).then_some(run.precision),
            biases: &values,
            limits: matrix.rows(),
        },
    )
}

#[derive(Serialize)]
struct CoolRow {
    round: usize,
    qubit: usize,
    limit: f64,
    target: f64,
}

#[derive(Serialize)]
struct CoolReport<'a> {
    schema: u32,
    command: &'static str,
    mode: Mode,
    n: usize,
    rounds: usize,
    precision: f64,
    biases: &'a [f64],
    complexity: u64,
    per_round_swaps: &'a [u64],
    passes: u64,
    round_limits: &'a [Vec<f64>],
    targets: &'a [Vec<f64>],
}

fn cool(register: RegisterArgs, run: RunArgs, mode: ModeArg, output: &OutputArgs) -> Result<()> {
    let reg = register_from(register)?;
    let n = reg.len();
    let rounds = rounds_for(&run, n)?;
    let values = reg.values();
    let config = HbacConfig::new(reg).rounds(rounds).precision(run.precision).mode(mode.into());
    let report = register_compression(&config)?;
    if output.format == Format::Csv {
        let rows = limit_rows(&report.round_limits).map(|row| CoolRow {
            target: report.targets.get(row.round, row.qubit),
            round: row.round,
            qubit: row.qubit,
            limit: row.limit,
        });
        return emit_csv(output, &["round", "qubit", "limit", "target"], rows);
    }
    emit_json(
        output,
        &CoolReport {
            schema: SCHEMA,
            command: "cool",
            mode: mode.into(),
            n,
            rounds,
            precision: run.precision,
            biases: &values,
            complexity: report.complexity,
            per_round_swaps: &report.per_round_swaps,
            passes: report.passes,
            round_limits: report.round_limits.rows(),
            targets: report.targets.rows(),
        },
    )
}

fn parse_sizes(text: &str) -> Result<Vec<usize>> {
    let bad = || CliError::Usage(format!("cannot read register sizes from {text:?}"));
    if let Some((a, b)) = text.split_once("..") {
        let a: usize = a.trim().parse().map_err(|_| bad())?;
        let b: usize = b.trim().parse().map_err(|_| bad())?;
        if a > b {
            return Err(bad());
        }
        return Ok((a..=b).collect());
    }
    text.split(',').map(|s| s.trim().parse().map_err(|_| bad())).collect()
}

#[derive(Serialize)]
struct SizeRow {
    n: usize,
    complexity: u64,
}

#[derive(Serialize)]
struct BiasRow {
    epsilon: f64,
    complexity: u64,
}

#[derive(Serialize)]
struct SweepReport<'a> {
    schema: u32,
    command: &'static str,
    mode: Mode,
    precision: f64,
    rows: &'a [optcool::hbac::SweepRow],
}

fn sweep(
    ns: Option<String>,
    epsilon: Option<f64>,
    n: Option<usize>,
    epsilons: Vec<f64>,
    precision: f64,
    mode: ModeArg,
    output: &OutputArgs,
) -> Result<()> {
    let mode: Mode = mode.into();
    let by_size = ns.is_some();
    let rows = match (ns, epsilon, n) {
        (Some(ns), Some(eps), None) => complexity_sweep(parse_sizes(&ns)?, Bias::new(eps)?, precision, mode)?,
        (None, None, Some(n)) if !epsilons.is_empty() => {
            let eps: Vec<Bias> = epsilons.iter().map(|&e| Bias::new(e)).collect::<optcool::Result<_>>()?;
            complexity_by_bias(n, &eps, precision, mode)?
        }
        _ => return Err(CliError::Usage("give --ns with --epsilon, or --n with --epsilons".into())),
    };
    if output.format == Format::Csv {
        return if by_size {
            emit_csv(output, &["n", "complexity"], rows.iter().map(|r| SizeRow { n: r.n, complexity: r.complexity }))
        } else {
            emit_csv(output, &["epsilon", "complexity"], rows.iter().map(|r| BiasRow { epsilon: r.epsilon, complexity: r.complexity }))
        };
    }
    emit_json(output, &SweepReport { schema: SCHEMA, command: "sweep", mode, precision, rows: &rows })
}

#[derive(Serialize)]
struct BoundsReport {
    schema: u32,
    command: &'static str,
    n: usize,
    epsilon: f64,
    shannon_bound: f64,
    sqrt_bound: f64,
    /// One compression of qubit 1 against n − 1 fresh ancillas.
    single_round_limit: Option<f64>,
    /// Qubit 1 after all n − 2 rounds.
    analytic_limit: Option<f64>,
}

#[derive(Serialize)]
struct QuantityRow {
    quantity: &'static str,
    value: f64,
}

fn bounds(n: usize, epsilon: f64, output: &OutputArgs) -> Result<()> {
    if n == 0 {
        return Err(optcool::Error::EmptyRegister.into());
    }
    let eps = Bias::new(epsilon)?;
    let single = if n >= 2 {
        let m = u32::try_from(n - 1).map_err(|_| CliError::Usage(format!("n = {n} is too large")))?;
        Some(single_round_limit(eps, m)?.value())
    } else {
        None
    };
    let report = BoundsReport {
        schema: SCHEMA,
        command: "bounds",
        n,
        epsilon,
        shannon_bound: shannon_bound(n, eps),
        sqrt_bound: sqrt_bound(n, eps),
        single_round_limit: single,
        analytic_limit: if n >= 3 { Some(analytic_limit(n - 2, 1, n, eps)?.value()) } else { None },
    };
    if output.format == Format::Csv {
        let mut rows = vec![
            QuantityRow { quantity: "shannon_bound", value: report.shannon_bound },
            QuantityRow { quantity: "sqrt_bound", value: report.sqrt_bound },
        ];
        if let Some(v) = report.single_round_limit {
            rows.push(QuantityRow { quantity: "single_round_limit", value: v });
        }
        if let Some(v) = report.analytic_limit {
            rows.push(QuantityRow { quantity: "analytic_limit", value: v });
        }
        return emit_csv(output, &["quantity", "value"], rows);
    }
    emit_json(output, &report)
}
