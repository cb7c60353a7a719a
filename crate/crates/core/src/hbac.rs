//! Heat-bath algorithmic cooling of a whole register.
//!
//! Each round pushes the qubits `1..=n-r-1` to their round targets (taken
//! from [`numerical_limits`]). Cooling a head qubit compresses entropy into
//! the qubits below it; after every exchange the marginals are recomputed
//! and floored at the default biases, which models the bath reset. Qubits
//! that lost bias are re-cooled before the head is pushed again, so the run
//! is a sequence of subspace passes driven by an explicit work stack.

use serde::{Deserialize, Serialize};

use crate::compress::beneficial;
use crate::error::{Error, Result};
use crate::limits::{check_rounds, numerical_limits_capped, ratio_converged, LimitMatrix};
use crate::limits::{DEFAULT_ITERATION_CAP, DEFAULT_PRECISION};
use crate::regstate::{check_cap, marginal_of, product_table, Bias, RegisterBiases, DEFAULT_SIZE_CAP};

/// Which exchanges a compression step may use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    /// Every beneficial complementary pair.
    #[default]
    Full,
    /// Only the limiting pair `|01…1⟩ ↔ |10…0⟩` of the subspace.
    LimComp,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HbacConfig {
    pub defaults: RegisterBiases,
    pub rounds: usize,
    pub precision: f64,
    pub mode: Mode,
    /// Compression passes allowed per head qubit before giving up.
    pub iteration_cap: u64,
}

impl HbacConfig {
    /// All `n − 2` rounds at the default precision.
    pub fn new(defaults: RegisterBiases) -> Self {
        let rounds = defaults.len().saturating_sub(2);
        HbacConfig {
            defaults,
            rounds,
            precision: DEFAULT_PRECISION,
            mode: Mode::Full,
            iteration_cap: DEFAULT_ITERATION_CAP,
        }
    }

    pub fn rounds(mut self, rounds: usize) -> Self {
        self.rounds = rounds;
        self
    }

    pub fn precision(mut self, precision: f64) -> Self {
        self.precision = precision;
        self
    }

    pub fn mode(mut self, mode: Mode) -> Self {
        self.mode = mode;
        self
    }

    pub fn iteration_cap(mut self, cap: u64) -> Self {
        self.iteration_cap = cap;
        self
    }

    pub fn validate(&self) -> Result<()> {
        check_cap(self.defaults.len(), DEFAULT_SIZE_CAP)?;
        check_rounds(self.rounds, self.defaults.len())?;
        if !(self.precision > 0.0) {
            return Err(Error::InvalidParameter(format!("precision {}", self.precision)));
        }
        if self.iteration_cap == 0 {
            return Err(Error::InvalidParameter("iteration cap must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoolingReport {
    /// Total number of pair exchanges.
    pub complexity: u64,
    pub per_round_swaps: Vec<u64>,
    /// Compression passes (one full scan of candidate pairs each).
    pub passes: u64,
    pub round_limits: LimitMatrix,
    pub targets: LimitMatrix,
}

/// One complementary-pair exchange, in the coordinates of the subspace
/// `sub_head..=n` it was performed on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Exchange {
    pub round: usize,
    pub head: usize,
    pub sub_head: usize,
    pub low: usize,
    pub high: usize,
}

/// Hooks into a cooling run. All methods default to no-ops.
pub trait CoolingObserver {
    fn on_exchange(&mut self, _exchange: &Exchange) {}

    /// Floored marginals of qubits `sub_head..=n` after a compression pass.
    fn on_pass(&mut self, _round: usize, _sub_head: usize, _biases: &[f64]) {}

    /// The working row of the round-limit matrix after a subspace pass.
    fn on_row(&mut self, _round: usize, _row: &[f64]) {}
}

impl CoolingObserver for () {}

pub fn register_compression(config: &HbacConfig) -> Result<CoolingReport> {
    register_compression_observed(config, &mut ())
}

pub fn register_compression_observed(
    config: &HbacConfig,
    observer: &mut dyn CoolingObserver,
) -> Result<CoolingReport> {
    config.validate()?;
    let targets = numerical_limits_capped(
        &config.defaults,
        config.rounds,
        config.precision,
        config.iteration_cap,
    )?;
    let n = config.defaults.len();
    let mut rl = LimitMatrix::zeros(config.rounds, n);
    // the register enters round 1 at its defaults
    rl.row_mut(1).copy_from_slice(&config.defaults.values());

    let mut engine = Engine {
        config,
        defaults: config.defaults.values(),
        targets: &targets,
        rl,
        passes: 0,
        observer,
    };
    let mut per_round_swaps = Vec::with_capacity(config.rounds);
    for r in 1..=config.rounds {
        let mut round_swaps = 0;
        for x in 1..=n - r - 1 {
            round_swaps += engine.subspace_compression(r, x, false)?;
        }
        if r < config.rounds {
            let row = engine.rl.row(r).to_vec();
            engine.rl.row_mut(r + 1).copy_from_slice(&row);
        }
        per_round_swaps.push(round_swaps);
    }
    Ok(CoolingReport {
        complexity: per_round_swaps.iter().sum(),
        per_round_swaps,
        passes: engine.passes,
        round_limits: engine.rl,
        targets,
    })
}

struct Engine<'a> {
    config: &'a HbacConfig,
    defaults: Vec<f64>,
    targets: &'a LimitMatrix,
    rl: LimitMatrix,
    passes: u64,
    observer: &'a mut dyn CoolingObserver,
}

/// One pending subspace pass: head qubit and whether it re-cools a qubit
/// back to its previous-round level.
type Call = (usize, bool);

impl Engine<'_> {
    fn n(&self) -> usize {
        self.defaults.len()
    }

    /// Brings qubits `x..=n` to their round-`r` levels and returns the
    /// number of exchanges. Follow-up passes run depth-first, in the order
    /// they are scheduled.
    fn subspace_compression(&mut self, r: usize, x: usize, reentry: bool) -> Result<u64> {
        let passes_at_start = self.passes;
        let mut stack: Vec<Call> = vec![(x, reentry)];
        let mut swaps = 0;
        while let Some((head, z)) = stack.pop() {
            let (count, follow_ups) = self.pass(r, head, z, passes_at_start)?;
            swaps += count;
            stack.extend(follow_ups.into_iter().rev());
        }
        Ok(swaps)
    }

    /// Bias at which compression of `v` stops early, if any.
    fn cap(&self, r: usize, x: usize, reentry: bool, v: usize) -> Option<f64> {
        if v == x && !reentry {
            Some(self.targets.get(r, v))
        } else if r > 1 {
            Some(self.targets.get(r - 1, v))
        } else {
            None
        }
    }

    fn pass(&mut self, r: usize, x: usize, z: bool, budget_start: u64) -> Result<(u64, Vec<Call>)> {
        let n = self.n();
        let before = self.rl.row(r).to_vec();
        let mut alpha = before.clone();
        let mut swaps = 0;

        for v in x..n {
            if alpha[v - 1] >= self.targets.get(r, v) {
                continue;
            }
            let cap = self.cap(r, x, z, v);
            let mut gamma = alpha[v - 1..].to_vec();
            loop {
                if self.passes - budget_start >= self.config.iteration_cap {
                    return Err(Error::NonConvergence {
                        round: r,
                        head: x,
                        iterations: self.passes - budget_start,
                        state: alpha,
                    });
                }
                self.passes += 1;
                let previous = gamma[0];
                swaps += self.compress_once(r, x, v, cap, &mut gamma);
                self.observer.on_pass(r, v, &gamma);
                if ratio_converged(gamma[0], previous, self.config.precision) {
                    break;
                }
            }
            alpha[v - 1..].copy_from_slice(&gamma);
            self.rl.row_mut(r)[v - 1..].copy_from_slice(&gamma);
        }
        self.observer.on_row(r, self.rl.row(r));

        let mut follow_ups = Vec::new();
        if self.rl.row(r) != before.as_slice() {
            if alpha[x - 1] < self.targets.get(r, x) {
                follow_ups.push((x, false));
            }
            if r > 1 {
                follow_ups.extend(
                    (x + 1..n)
                        .filter(|&i| alpha[i - 1] < self.targets.get(r - 1, i))
                        .map(|i| (i, true)),
                );
            }
        }
        Ok((swaps, follow_ups))
    }

    /// One scan over the candidate pairs of subspace `v..=n` built from the
    /// product state `gamma`; updates `gamma` to the floored marginals.
    fn compress_once(
        &mut self,
        r: usize,
        x: usize,
        v: usize,
        cap: Option<f64>,
        gamma: &mut [f64],
    ) -> u64 {
        let m = gamma.len();
        let floors = &self.defaults[v - 1..];
        let biases: Vec<Bias> = gamma.iter().map(|&g| Bias::saturating(g)).collect();
        let mut p = product_table(&biases);
        let half = p.len() / 2;
        let last = p.len() - 1;
        let candidates = match self.config.mode {
            Mode::Full => 0..half,
            Mode::LimComp => half - 1..half,
        };

        let mut head = gamma[0];
        let mut swaps = 0;
        for k in candidates {
            if cap.is_some_and(|c| head >= c) {
                break;
            }
            if beneficial(p[k], p[last - k]) {
                p.swap(k, last - k);
                swaps += 1;
                self.observer.on_exchange(&Exchange {
                    round: r,
                    head: x,
                    sub_head: v,
                    low: k,
                    high: last - k,
                });
                head = marginal_of(&p, m, 1).max(floors[0]);
            }
        }
        if swaps > 0 {
            for (i, g) in gamma.iter_mut().enumerate() {
                *g = marginal_of(&p, m, i + 1).max(floors[i]);
            }
        }
        swaps
    }
}

/// One row of a complexity sweep.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub n: usize,
    pub epsilon: f64,
    pub complexity: u64,
}

/// Runs a full `n − 2`-round cooling for each register size at equal
/// defaults `eps`.
pub fn complexity_sweep(
    ns: impl IntoIterator<Item = usize>,
    eps: Bias,
    precision: f64,
    mode: Mode,
) -> Result<Vec<SweepRow>> {
    ns.into_iter()
        .map(|n| {
            let config = HbacConfig::new(RegisterBiases::uniform(n, eps.value())?)
                .precision(precision)
                .mode(mode);
            let report = register_compression(&config)?;
            Ok(SweepRow { n, epsilon: eps.value(), complexity: report.complexity })
        })
        .collect()
}

/// Complexity at a fixed register size for each default bias.
pub fn complexity_by_bias(
    n: usize,
    epsilons: &[Bias],
    precision: f64,
    mode: Mode,
) -> Result<Vec<SweepRow>> {
    epsilons
        .iter()
        .map(|&eps| {
            let config = HbacConfig::new(RegisterBiases::uniform(n, eps.value())?)
                .precision(precision)
                .mode(mode);
            let report = register_compression(&config)?;
            Ok(SweepRow { n, epsilon: eps.value(), complexity: report.complexity })
        })
        .collect()
}

/// Least-squares line through `(x, ln y)`: `(slope, intercept, r²)`.
/// Returns `None` with fewer than two points or any non-positive `y`.
pub fn log_linear_fit(points: &[(f64, f64)]) -> Option<(f64, f64, f64)> {
    if points.len() < 2 || points.iter().any(|&(_, y)| !(y > 0.0)) {
        return None;
    }
    let len = points.len() as f64;
    let xs: Vec<f64> = points.iter().map(|p| p.0).collect();
    let ys: Vec<f64> = points.iter().map(|p| p.1.ln()).collect();
    let mx = xs.iter().sum::<f64>() / len;
    let my = ys.iter().sum::<f64>() / len;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let syy: f64 = ys.iter().map(|y| (y - my).powi(2)).sum();
    if sxx == 0.0 {
        return None;
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let r2 = if syy == 0.0 { 1.0 } else { sxy * sxy / (sxx * syy) };
    Some((slope, intercept, r2))
}
