//! Browser bindings. Every export takes plain values and returns a JSON
//! string; failures come back as `{"error": "..."}`.

use optcool::hbac::{register_compression_observed, CoolingObserver};
use optcool::limits::{analytic_matrix, sort_bound};
use optcool::{
    apply_swaps, bias_gain, find_optswaps, marginal_bias, numerical_limits, probamps, Bias, HbacConfig, Mode,
    RegisterBiases,
};
use serde::Serialize;
use wasm_bindgen::prelude::wasm_bindgen;

/// Largest register whose full distribution is sent back to the page.
pub const MAX_LISTED_QUBITS: usize = 10;
/// Keeps the browser responsive; cooling cost grows steeply with size.
pub const MAX_COOLING_QUBITS: usize = 7;
pub const MAX_TRACE_POINTS: usize = 2000;

fn to_json<T: Serialize>(result: Result<T, String>) -> String {
    match result {
        Ok(v) => serde_json::to_string(&v).expect("serializable"),
        Err(e) => serde_json::json!({ "error": e }).to_string(),
    }
}

fn parse_biases(text: &str) -> Result<RegisterBiases, String> {
    let values = text
        .split(|c: char| c == ',' || c.is_whitespace())
        .filter(|s| !s.is_empty())
        .map(|s| s.parse::<f64>().map_err(|_| format!("not a number: {s:?}")))
        .collect::<Result<Vec<_>, _>>()?;
    RegisterBiases::from_values(&values).map_err(|e| e.to_string())
}

#[derive(Serialize)]
struct Exchange {
    low: usize,
    high: usize,
    low_bits: String,
    high_bits: String,
}

#[derive(Serialize)]
struct SwapView {
    n: usize,
    swaps: Vec<Exchange>,
    gain: f64,
    before: f64,
    after: f64,
    sort_bound: f64,
    /// Present only for small registers.
    probamps: Option<Vec<f64>>,
    compressed: Option<Vec<f64>>,
}

/// Optimal swaps for the register `biases` (comma or space separated).
#[wasm_bindgen]
pub fn explore_optswaps(biases: &str) -> String {
    to_json((|| {
        let reg = parse_biases(biases)?;
        let n = reg.len();
        let dist = probamps(&reg).map_err(|e| e.to_string())?;
        let swaps = find_optswaps(&dist);
        let after = apply_swaps(&dist, &swaps).map_err(|e| e.to_string())?;
        let bits = |j: usize| format!("{j:0n$b}");
        let small = n <= MAX_LISTED_QUBITS;
        Ok(SwapView {
            n,
            swaps: swaps
                .pairs()
                .map(|(low, high)| Exchange { low, high, low_bits: bits(low), high_bits: bits(high) })
                .collect(),
            gain: bias_gain(&dist, &swaps),
            before: marginal_bias(&dist, 1).map_err(|e| e.to_string())?,
            after: marginal_bias(&after, 1).map_err(|e| e.to_string())?,
            sort_bound: sort_bound(&dist),
            probamps: small.then(|| dist.probamps().to_vec()),
            compressed: small.then(|| after.probamps().to_vec()),
        })
    })())
}

#[derive(Serialize)]
struct Curves {
    n: usize,
    epsilon: f64,
    analytic: Vec<Vec<f64>>,
    numerical: Vec<Vec<f64>>,
}

/// Per-round limits of an `n`-qubit register at equal bias, closed form and
/// iterated side by side.
#[wasm_bindgen]
pub fn limit_curves(n: usize, epsilon: f64) -> String {
    to_json((|| {
        if !(3..=MAX_LISTED_QUBITS).contains(&n) {
            return Err(format!("n must be in 3..={MAX_LISTED_QUBITS}"));
        }
        let eps = Bias::new(epsilon).map_err(|e| e.to_string())?;
        let reg = RegisterBiases::uniform(n, epsilon).map_err(|e| e.to_string())?;
        let analytic = analytic_matrix(n, eps, n - 2).map_err(|e| e.to_string())?;
        let numerical = numerical_limits(&reg, n - 2, 1e-9).map_err(|e| e.to_string())?;
        Ok(Curves { n, epsilon, analytic: analytic.rows().to_vec(), numerical: numerical.rows().to_vec() })
    })())
}

#[derive(Default)]
struct Trace {
    rows: Vec<(usize, Vec<f64>)>,
}

impl CoolingObserver for Trace {
    fn on_row(&mut self, round: usize, row: &[f64]) {
        self.rows.push((round, row.to_vec()));
    }
}

#[derive(Serialize)]
struct CoolingView {
    complexity: u64,
    per_round_swaps: Vec<u64>,
    round_limits: Vec<Vec<f64>>,
    targets: Vec<Vec<f64>>,
    /// `(round, biases)` after successive subspace passes, thinned to at
    /// most `MAX_TRACE_POINTS` entries.
    trace: Vec<(usize, Vec<f64>)>,
}

/// Full cooling run; `limiting_only` restricts each step to the limiting swap.
#[wasm_bindgen]
pub fn run_cooling(biases: &str, limiting_only: bool) -> String {
    to_json((|| {
        let reg = parse_biases(biases)?;
        let n = reg.len();
        if !(3..=MAX_COOLING_QUBITS).contains(&n) {
            return Err(format!("cooling needs 3..={MAX_COOLING_QUBITS} qubits"));
        }
        let mode = if limiting_only { Mode::LimComp } else { Mode::Full };
        let config = HbacConfig::new(reg).mode(mode);
        let mut trace = Trace::default();
        let report = register_compression_observed(&config, &mut trace).map_err(|e| e.to_string())?;
        let stride = trace.rows.len().div_ceil(MAX_TRACE_POINTS).max(1);
        let last = trace.rows.len().saturating_sub(1);
        let thinned = trace
            .rows
            .into_iter()
            .enumerate()
            .filter(|(i, _)| i % stride == 0 || *i == last)
            .map(|(_, r)| r)
            .collect();
        Ok(CoolingView {
            complexity: report.complexity,
            per_round_swaps: report.per_round_swaps,
            round_limits: report.round_limits.rows().to_vec(),
            targets: report.targets.rows().to_vec(),
            trace: thinned,
        })
    })())
}
