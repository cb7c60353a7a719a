//! Cooling limits: the round/qubit exponent recursion, the closed-form limit
//! it feeds, the iterative round-by-round limit search, and the closed-system
//! bounds used as oracles.

use serde::{Deserialize, Serialize};

use crate::compress::find_optswaps;
use crate::error::{Error, Result};
use crate::regstate::{marginal_of, product_table, Bias, DiagDist, RegisterBiases};

pub const DEFAULT_PRECISION: f64 = 1e-9;

/// Iteration cap for a single target's fixed-point search.
pub const DEFAULT_ITERATION_CAP: u64 = 1_000_000;

/// Above this value of `f · ε` the closed form switches to `tanh(f · atanh ε)`.
const TANH_CROSSOVER: f64 = 30.0;

/// Per-round, per-qubit limiting biases. Row `r` (1-based) holds the bias of
/// every qubit at the end of limiting round `r`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LimitMatrix {
    n: usize,
    rows: Vec<Vec<f64>>,
}

impl LimitMatrix {
    pub fn zeros(rounds: usize, n: usize) -> Self {
        LimitMatrix {
            n,
            rows: vec![vec![0.0; n]; rounds],
        }
    }

    pub fn from_rows(rows: Vec<Vec<f64>>) -> Result<Self> {
        let n = rows.first().map_or(0, Vec::len);
        if n == 0 || rows.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidParameter("ragged or empty limit matrix".into()));
        }
        Ok(LimitMatrix { n, rows })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn rounds(&self) -> usize {
        self.rows.len()
    }

    /// Round `r` and qubit `k`, both 1-based.
    pub fn get(&self, r: usize, k: usize) -> f64 {
        self.rows[r - 1][k - 1]
    }

    pub fn set(&mut self, r: usize, k: usize, value: f64) {
        self.rows[r - 1][k - 1] = value;
    }

    pub fn row(&self, r: usize) -> &[f64] {
        &self.rows[r - 1]
    }

    pub(crate) fn row_mut(&mut self, r: usize) -> &mut Vec<f64> {
        &mut self.rows[r - 1]
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.rows
    }

    pub fn last_row(&self) -> &[f64] {
        self.rows.last().map_or(&[], Vec::as_slice)
    }
}

/// Exponents `f(r, k, n)` for one register size, filled round by round so
/// that every entry is computed once.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExponentTable {
    n: usize,
    // rows[r - 1][k - 1]
    rows: Vec<Vec<u64>>,
}

impl ExponentTable {
    /// Table for every round `1..=n-2`. Needs `n ≥ 3`.
    pub fn new(n: usize) -> Result<Self> {
        if n < 3 {
            return Err(Error::Round { round: 1, max: n.saturating_sub(2), n });
        }
        let r_max = n - 2;
        let mut rows: Vec<Vec<u64>> = Vec::with_capacity(r_max);
        rows.push(
            (1..=n)
                .map(|k| if k < n - 1 { (n - k) as u64 } else { 1 })
                .collect(),
        );
        for r in 2..=r_max {
            let prev = &rows[r - 2];
            let mut row = Vec::with_capacity(n);
            for k in 1..=n {
                let value = if k >= n - r {
                    prev[k - 1]
                } else {
                    let overflow = Error::Overflow { r, k, n };
                    // qubits k+1..n-r sit at their previous-round limits
                    let mut acc: u64 = 2;
                    for i in k + 1..=n - r {
                        acc = acc.checked_add(prev[i - 1]).ok_or(overflow.clone())?;
                    }
                    // qubits n-r+1..n-2 were last raised in rounds r-2..1
                    for j in 1..=r.saturating_sub(2) {
                        acc = acc
                            .checked_add(rows[j - 1][n - j - 2])
                            .ok_or(overflow.clone())?;
                    }
                    acc
                };
                row.push(value);
            }
            rows.push(row);
        }
        Ok(ExponentTable { n, rows })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn max_round(&self) -> usize {
        self.rows.len()
    }

    pub fn get(&self, r: usize, k: usize) -> Result<u64> {
        if r == 0 || r > self.rows.len() {
            return Err(Error::Round { round: r, max: self.rows.len(), n: self.n });
        }
        if k == 0 || k > self.n {
            return Err(Error::QubitIndex { index: k, n: self.n });
        }
        Ok(self.rows[r - 1][k - 1])
    }
}

/// Exponent of the limiting-swap balance for qubit `k` after round `r`.
pub fn f(r: usize, k: usize, n: usize) -> Result<u64> {
    ExponentTable::new(n)?.get(r, k)
}

/// `[(1+ε)^f − (1−ε)^f] / [(1+ε)^f + (1−ε)^f]`, i.e. `tanh(f · atanh ε)`.
pub fn limit_from_exponent(eps: f64, f: f64) -> f64 {
    if eps == 0.0 || f == 0.0 {
        return 0.0;
    }
    if f == 1.0 {
        return eps;
    }
    if f * eps > TANH_CROSSOVER {
        (f * eps.atanh()).tanh()
    } else {
        let up = (1.0 + eps).powf(f);
        let down = (1.0 - eps).powf(f);
        (up - down) / (up + down)
    }
}

/// Limiting bias of qubit `k` after round `r` when every qubit starts at `eps`.
pub fn analytic_limit(r: usize, k: usize, n: usize, eps: Bias) -> Result<Bias> {
    let f = f(r, k, n)?;
    Ok(Bias::saturating(limit_from_exponent(eps.value(), f as f64)))
}

/// Rounds `1..=rounds` of [`analytic_limit`] for every qubit.
pub fn analytic_matrix(n: usize, eps: Bias, rounds: usize) -> Result<LimitMatrix> {
    let table = ExponentTable::new(n)?;
    check_rounds(rounds, n)?;
    let rows = (1..=rounds)
        .map(|r| {
            (1..=n)
                .map(|k| limit_from_exponent(eps.value(), table.rows[r - 1][k - 1] as f64))
                .collect()
        })
        .collect();
    LimitMatrix::from_rows(rows)
}

/// Target bias at which the limiting swap stops paying off, with `m` ancillas
/// all at `eps`.
pub fn single_round_limit(eps: Bias, m: u32) -> Result<Bias> {
    if m == 0 {
        return Err(Error::InvalidParameter("ancilla count must be at least 1".into()));
    }
    Ok(Bias::saturating(limit_from_exponent(eps.value(), f64::from(m))))
}

pub(crate) fn check_rounds(rounds: usize, n: usize) -> Result<()> {
    let max = n.saturating_sub(2);
    if rounds == 0 || rounds > max {
        return Err(Error::Round { round: rounds, max, n });
    }
    Ok(())
}

/// True when the target's bias stopped moving: `|new / old − 1| ≤ precision`.
/// A zero starting bias counts as converged only if it stays zero.
pub(crate) fn ratio_converged(new: f64, old: f64, precision: f64) -> bool {
    if old == 0.0 {
        return new == 0.0;
    }
    (new / old - 1.0).abs() <= precision
}

pub fn numerical_limits(
    biases: &RegisterBiases,
    rounds: usize,
    precision: f64,
) -> Result<LimitMatrix> {
    numerical_limits_capped(biases, rounds, precision, DEFAULT_ITERATION_CAP)
}

/// Round-by-round limit search. In round `r` each qubit `v ≤ n − r − 1` is
/// compressed repeatedly against qubits `v+1..n`, held at their values from
/// the start of the round, until its bias stops increasing. Qubits past
/// `n − r − 1` carry their previous values forward.
pub fn numerical_limits_capped(
    biases: &RegisterBiases,
    rounds: usize,
    precision: f64,
    iteration_cap: u64,
) -> Result<LimitMatrix> {
    let n = biases.len();
    check_rounds(rounds, n)?;
    if !(precision > 0.0) {
        return Err(Error::InvalidParameter(format!("precision {precision}")));
    }
    let original = biases.values();
    let mut out = LimitMatrix::zeros(rounds, n);
    for r in 1..=rounds {
        let start: Vec<f64> = if r == 1 {
            original.clone()
        } else {
            out.row(r - 1).to_vec()
        };
        let last_cooled = n - r - 1;
        for v in 1..=last_cooled {
            let limit = compress_to_fixed_point(&start[v - 1..], precision, iteration_cap)
                .map_err(|iterations| Error::NonConvergence {
                    round: r,
                    head: v,
                    iterations,
                    state: start.clone(),
                })?;
            out.set(r, v, limit);
        }
        for k in last_cooled + 1..=n {
            out.set(r, k, start[k - 1]);
        }
    }
    Ok(out)
}

/// Iterates optimal compression of `sub[0]` against fixed ancillas `sub[1..]`.
/// Returns the iteration count on failure.
fn compress_to_fixed_point(
    sub: &[f64],
    precision: f64,
    iteration_cap: u64,
) -> std::result::Result<f64, u64> {
    let m = sub.len();
    let mut biases: Vec<Bias> = sub.iter().map(|&v| Bias::saturating(v)).collect();
    let mut target = sub[0];
    for _ in 0..iteration_cap {
        biases[0] = Bias::saturating(target);
        let mut p = product_table(&biases);
        let dist = DiagDist::from_parts(m, p.clone());
        for (a, b) in find_optswaps(&dist).pairs() {
            p.swap(a, b);
        }
        let increased = marginal_of(&p, m, 1);
        let done = ratio_converged(increased, target, precision);
        target = increased;
        if done {
            return Ok(target);
        }
    }
    Err(iteration_cap)
}

/// Largest target bias reachable by any permutation of the distribution:
/// the top half of the sorted entries minus the bottom half.
pub fn sort_bound(dist: &DiagDist) -> f64 {
    let mut p = dist.probamps().to_vec();
    p.sort_unstable_by(|a, b| b.total_cmp(a));
    let (top, bottom) = p.split_at(p.len() / 2);
    top.iter().sum::<f64>() - bottom.iter().sum::<f64>()
}

/// Base-2 entropy of a qubit with bias `eps`; 1 at `eps = 0`, 0 at `eps = 1`.
pub fn binary_entropy(eps: Bias) -> f64 {
    let h = |p: f64| if p > 0.0 { -p * p.log2() } else { 0.0 };
    h(eps.plus()) + h(eps.minus())
}

/// Upper bound `n (1 − H(ε))` on the number of qubits a closed system can purify.
pub fn shannon_bound(n: usize, eps: Bias) -> f64 {
    n as f64 * (1.0 - binary_entropy(eps))
}

/// First-order closed-system target bias `√n · ε`.
pub fn sqrt_bound(n: usize, eps: Bias) -> f64 {
    (n as f64).sqrt() * eps.value()
}
