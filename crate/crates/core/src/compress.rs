//! Complementary-pair exchanges ("optswaps") that raise the bias of qubit 1,
//! their gain, and an exhaustive check that no other exchange does better.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::regstate::DiagDist;

/// Pairs whose relative difference falls below this are ties and never swapped.
pub const NEAR_TIE_REL: f64 = 1e-12;

/// Largest register [`verify_optimality`] accepts by default.
pub const DEFAULT_VERIFY_CAP: usize = 14;

/// Counterexamples kept in a report; the total is always counted.
const MAX_RECORDED: usize = 64;

/// Exchanges `probamps[j] ↔ probamps[2^n - 1 - j]`, each listed once by its
/// 0T member `j < 2^(n-1)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SwapSet {
    n: usize,
    indices: Vec<usize>,
}

impl SwapSet {
    pub fn new(n: usize, indices: impl IntoIterator<Item = usize>) -> Result<Self> {
        if n == 0 || n >= usize::BITS as usize {
            return Err(Error::InvalidParameter(format!("register size {n}")));
        }
        let half = 1usize << (n - 1);
        let mut indices: Vec<usize> = indices.into_iter().collect();
        if let Some(&bad) = indices.iter().find(|&&j| j >= half) {
            return Err(Error::SwapIndex { index: bad, n });
        }
        indices.sort_unstable();
        indices.dedup();
        Ok(SwapSet { n, indices })
    }

    pub fn empty(n: usize) -> Self {
        SwapSet { n, indices: Vec::new() }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn contains(&self, j: usize) -> bool {
        self.indices.binary_search(&j).is_ok()
    }

    /// `(j, 2^n - 1 - j)` for every exchange.
    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let last = (1usize << self.n) - 1;
        self.indices.iter().map(move |&j| (j, last - j))
    }
}

/// True when moving `hi` into the 0T slot currently holding `lo` is a strict gain.
#[inline]
pub(crate) fn beneficial(lo: f64, hi: f64) -> bool {
    lo < hi && hi - lo > NEAR_TIE_REL * hi
}

/// Every `j` in the 0T half with `R_{j,0T} < R_{j,1T}`.
pub fn find_optswaps(dist: &DiagDist) -> SwapSet {
    let indices = (0..dist.half())
        .filter(|&j| beneficial(dist.r0(j), dist.r1(j)))
        .collect();
    SwapSet { n: dist.n(), indices }
}

pub fn apply_swaps(dist: &DiagDist, swaps: &SwapSet) -> Result<DiagDist> {
    if swaps.n() != dist.n() {
        return Err(Error::InvalidParameter(format!(
            "swap set for {} qubits applied to {} qubits",
            swaps.n(),
            dist.n()
        )));
    }
    let mut p = dist.probamps().to_vec();
    for (a, b) in swaps.pairs() {
        p.swap(a, b);
    }
    Ok(DiagDist::from_parts(dist.n(), p))
}

/// Increase in the target bias from performing `swaps`:
/// `2 Σ (R_{j,1T} − R_{j,0T})`.
pub fn bias_gain(dist: &DiagDist, swaps: &SwapSet) -> f64 {
    2.0 * swaps
        .indices()
        .iter()
        .map(|&j| dist.r1(j) - dist.r0(j))
        .sum::<f64>()
}

/// One violated comparison found while checking optimality.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Counterexample {
    pub case: u8,
    pub k: usize,
    pub l: usize,
    pub violation: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OptimalityReport {
    pub swaps_performed: usize,
    /// `None` when no swap was performed.
    pub case1_passed: Option<bool>,
    pub case2_passed: Option<bool>,
    /// Only evaluated when no swap was performed.
    pub case3_passed: Option<bool>,
    pub violations: u64,
    /// At most the first 64 violations, ordered by `(case, k, l)`.
    pub counterexamples: Vec<Counterexample>,
}

impl OptimalityReport {
    pub fn all_passed(&self) -> bool {
        [self.case1_passed, self.case2_passed, self.case3_passed]
            .iter()
            .all(|c| c.unwrap_or(true))
    }
}

pub fn verify_optimality(dist: &DiagDist) -> Result<OptimalityReport> {
    verify_optimality_capped(dist, DEFAULT_VERIFY_CAP)
}

/// Exhaustive pair-by-pair check of the three optimality conditions on the
/// pre-swap distribution:
///
/// 1. swapped `k` (gain `v`), unswapped `l`: `R_{l,1T} − R_{k,0T} ≤ v`
/// 2. swapped `k ≠ l` (gains `v1`, `v2`): `R_{l,1T} − R_{k,0T} ≤ v1 + v2`
/// 3. nothing swapped: `R_{k,0T} ≥ R_{l,1T}` for all `k`, `l`
///
/// Comparisons carry the same relative slack as the tie rule.
pub fn verify_optimality_capped(dist: &DiagDist, cap: usize) -> Result<OptimalityReport> {
    if dist.n() > cap {
        return Err(Error::SizeCap { n: dist.n(), cap });
    }
    let half = dist.half();
    let swapped: Vec<bool> = (0..half).map(|j| beneficial(dist.r0(j), dist.r1(j))).collect();
    let n_s = swapped.iter().filter(|&&s| s).count();

    let mut counts = [0u64; 3];
    let mut recorded = Vec::new();
    let mut flag = |case: u8, k: usize, l: usize, lhs: f64, rhs: f64, scale: f64| {
        let violation = lhs - rhs;
        if violation > NEAR_TIE_REL * scale {
            counts[usize::from(case - 1)] += 1;
            if recorded.len() < MAX_RECORDED {
                recorded.push(Counterexample { case, k, l, violation });
            }
        }
    };

    if n_s > 0 {
        for k in (0..half).filter(|&k| swapped[k]) {
            let (rk0, rk1) = (dist.r0(k), dist.r1(k));
            let v1 = rk1 - rk0;
            for (l, &l_swapped) in swapped.iter().enumerate() {
                let (rl0, rl1) = (dist.r0(l), dist.r1(l));
                if !l_swapped {
                    flag(1, k, l, rl1 - rk0, v1, rk1.max(rl1));
                } else if l != k {
                    let v2 = rl1 - rl0;
                    flag(2, k, l, rl1 - rk0, v1 + v2, rk1.max(rl1));
                }
            }
        }
    } else {
        for k in 0..half {
            let rk0 = dist.r0(k);
            for l in 0..half {
                let rl1 = dist.r1(l);
                flag(3, k, l, rl1, rk0, rk0.max(rl1));
            }
        }
    }
    recorded.sort_by_key(|c| (c.case, c.k, c.l));

    let (c1, c2, c3) = if n_s > 0 {
        (Some(counts[0] == 0), Some(counts[1] == 0), None)
    } else {
        (None, None, Some(counts[2] == 0))
    };
    Ok(OptimalityReport {
        swaps_performed: n_s,
        case1_passed: c1,
        case2_passed: c2,
        case3_passed: c3,
        violations: counts.iter().sum(),
        counterexamples: recorded,
    })
}
