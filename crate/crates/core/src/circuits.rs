//! Reversible circuits of multi-controlled NOT gates that realize a set of
//! complementary-pair exchanges, plus a classical simulator and a small text
//! format (`.nbmc`).
//!
//! Wires are 1-based and wire 1 is the most significant bit of a basis index.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::compress::SwapSet;
use crate::error::{Error, Result};
use crate::regstate::{check_cap, DiagDist};

/// Largest register [`circuit_permutation`] enumerates.
pub const PERMUTATION_CAP: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Polarity {
    /// Fires when the control wire is `|0⟩`.
    OnZero,
    /// Fires when the control wire is `|1⟩`.
    OnOne,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Gate {
    controls: Vec<(usize, Polarity)>,
    target: usize,
}

impl Gate {
    pub fn new(target: usize, mut controls: Vec<(usize, Polarity)>) -> Result<Self> {
        if target == 0 || controls.iter().any(|&(w, _)| w == 0) {
            return Err(Error::InvalidParameter("wires are 1-based".into()));
        }
        controls.sort_unstable_by_key(|&(w, _)| w);
        let distinct = controls.windows(2).all(|w| w[0].0 != w[1].0);
        if !distinct || controls.iter().any(|&(w, _)| w == target) {
            return Err(Error::InvalidParameter(format!(
                "gate on wire {target} has repeated wires"
            )));
        }
        Ok(Gate { controls, target })
    }

    pub fn not(target: usize) -> Result<Self> {
        Gate::new(target, Vec::new())
    }

    pub fn target(&self) -> usize {
        self.target
    }

    pub fn controls(&self) -> &[(usize, Polarity)] {
        &self.controls
    }

    fn max_wire(&self) -> usize {
        self.controls.iter().map(|c| c.0).fold(self.target, usize::max)
    }

    /// Classical action on basis index `x` of an `n`-wire register.
    #[inline]
    fn apply(&self, x: usize, n: usize) -> usize {
        let fires = self.controls.iter().all(|&(w, pol)| {
            let bit = (x >> (n - w)) & 1;
            match pol {
                Polarity::OnZero => bit == 0,
                Polarity::OnOne => bit == 1,
            }
        });
        if fires {
            x ^ (1 << (n - self.target))
        } else {
            x
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Circuit {
    n: usize,
    gates: Vec<Gate>,
}

impl Circuit {
    pub fn new(n: usize, gates: Vec<Gate>) -> Result<Self> {
        if n == 0 {
            return Err(Error::EmptyRegister);
        }
        if let Some(g) = gates.iter().find(|g| g.max_wire() > n) {
            return Err(Error::InvalidParameter(format!(
                "gate touches wire {} of a {n}-wire circuit",
                g.max_wire()
            )));
        }
        Ok(Circuit { n, gates })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    /// Every gate is its own inverse, so the inverse circuit is the reversed list.
    pub fn inverse(&self) -> Circuit {
        Circuit {
            n: self.n,
            gates: self.gates.iter().rev().cloned().collect(),
        }
    }
}

/// Circuit exchanging `|j⟩ ↔ |2^n − 1 − j⟩` for every `j` in `swaps`.
///
/// Each exchange is a three-stage gate set: CNOTs from wire 1 onto every other
/// wire make the two partners agree on wires `2..=n`, a NOT on wire 1
/// controlled by that shared pattern exchanges them, and the CNOTs are undone.
pub fn nb_maxcomp(n: usize, swaps: &SwapSet) -> Result<Circuit> {
    if swaps.n() != n {
        return Err(Error::InvalidParameter(format!(
            "swap set for {} qubits, circuit for {n}",
            swaps.n()
        )));
    }
    let fan_out: Vec<Gate> = (2..=n)
        .map(|w| Gate::new(w, vec![(1, Polarity::OnOne)]))
        .collect::<Result<_>>()?;
    let mut gates = Vec::with_capacity(swaps.len() * (2 * fan_out.len() + 1));
    for &j in swaps.indices() {
        // j sits in the 0T half, so after the fan-out its wires 2..n are unchanged
        let controls = (2..=n)
            .map(|w| {
                let pol = if (j >> (n - w)) & 1 == 1 { Polarity::OnOne } else { Polarity::OnZero };
                (w, pol)
            })
            .collect();
        gates.extend(fan_out.iter().cloned());
        gates.push(Gate::new(1, controls)?);
        gates.extend(fan_out.iter().rev().cloned());
    }
    Circuit::new(n, gates)
}

/// Circuit for the single limiting exchange `|01…1⟩ ↔ |10…0⟩`.
pub fn lim_comp(n: usize) -> Result<Circuit> {
    if n < 2 {
        return Err(Error::InvalidParameter(format!("limiting exchange needs n ≥ 2, got {n}")));
    }
    nb_maxcomp(n, &SwapSet::new(n, [(1usize << (n - 1)) - 1])?)
}

/// `perm[x]` is the image of basis state `x` under the circuit.
pub fn circuit_permutation(c: &Circuit) -> Result<Vec<usize>> {
    check_cap(c.n, PERMUTATION_CAP)?;
    let n = c.n;
    Ok((0..1usize << n)
        .map(|x| c.gates.iter().fold(x, |acc, g| g.apply(acc, n)))
        .collect())
}

/// Moves each probamp to the image of its basis state.
pub fn apply_circuit(dist: &DiagDist, c: &Circuit) -> Result<DiagDist> {
    if dist.n() != c.n {
        return Err(Error::InvalidParameter(format!(
            "{}-wire circuit applied to {} qubits",
            c.n,
            dist.n()
        )));
    }
    let perm = circuit_permutation(c)?;
    let mut out = vec![0.0; dist.len()];
    for (x, &p) in dist.probamps().iter().enumerate() {
        out[perm[x]] = p;
    }
    Ok(DiagDist::from_parts(dist.n(), out))
}

fn wire_list(controls: &[(usize, Polarity)], pol: Polarity) -> String {
    let wires: Vec<String> = controls
        .iter()
        .filter(|c| c.1 == pol)
        .map(|c| c.0.to_string())
        .collect();
    wires.join(",")
}

/// `WIRES <n>` then one `MCX t=<target> c0=[..] c1=[..]` line per gate.
pub fn export_text(c: &Circuit) -> String {
    let mut out = format!("WIRES {}\n", c.n);
    for g in &c.gates {
        let _ = writeln!(
            out,
            "MCX t={} c0=[{}] c1=[{}]",
            g.target,
            wire_list(&g.controls, Polarity::OnZero),
            wire_list(&g.controls, Polarity::OnOne)
        );
    }
    out
}

/// Inverse of [`export_text`]. Blank lines are ignored.
pub fn parse_text(text: &str) -> Result<Circuit> {
    let err = |line: usize, msg: &str| Error::Parse { line, msg: msg.to_string() };
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty());

    let (no, header) = lines.next().ok_or_else(|| err(1, "missing WIRES header"))?;
    let n: usize = header
        .strip_prefix("WIRES ")
        .and_then(|s| s.trim().parse().ok())
        .ok_or_else(|| err(no, "expected `WIRES <n>`"))?;

    let mut gates = Vec::new();
    for (no, line) in lines {
        let mut parts = line.split_whitespace();
        if parts.next() != Some("MCX") {
            return Err(err(no, "expected `MCX`"));
        }
        let target: usize = parts
            .next()
            .and_then(|p| p.strip_prefix("t="))
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| err(no, "expected `t=<wire>`"))?;
        let mut controls = Vec::new();
        for (prefix, pol) in [("c0=", Polarity::OnZero), ("c1=", Polarity::OnOne)] {
            let list = parts
                .next()
                .and_then(|p| p.strip_prefix(prefix))
                .and_then(|p| p.strip_prefix('['))
                .and_then(|p| p.strip_suffix(']'))
                .ok_or_else(|| err(no, &format!("expected `{prefix}[...]`")))?;
            for w in list.split(',').filter(|w| !w.is_empty()) {
                let w: usize = w.parse().map_err(|_| err(no, "bad wire index"))?;
                controls.push((w, pol));
            }
        }
        if parts.next().is_some() {
            return Err(err(no, "trailing input"));
        }
        gates.push(Gate::new(target, controls).map_err(|e| err(no, &e.to_string()))?);
    }
    Circuit::new(n, gates)
}
