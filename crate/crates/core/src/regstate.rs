//! Register biases and the diagonal distribution they induce.
//!
//! Qubit 1 is the most significant bit of a basis index, so the 0T half of
//! a distribution (target qubit in `|0⟩`) is exactly `[0, 2^(n-1))` and the
//! complement of index `j` is `2^n - 1 - j`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest register that [`probamps`] materializes unless told otherwise.
pub const DEFAULT_SIZE_CAP: usize = 26;

/// Tolerance on the total probability of a [`DiagDist`].
pub const NORMALIZATION_TOL: f64 = 1e-9;

/// Polarization of a single qubit towards `|0⟩`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct Bias(f64);

impl Bias {
    pub const ZERO: Bias = Bias(0.0);
    pub const ONE: Bias = Bias(1.0);

    pub fn new(value: f64) -> Result<Self> {
        if (0.0..=1.0).contains(&value) {
            Ok(Bias(value))
        } else {
            Err(Error::BiasOutOfRange(value))
        }
    }

    /// Clamps into `[0, 1]`; NaN maps to zero.
    pub fn saturating(value: f64) -> Self {
        if value.is_nan() {
            Bias(0.0)
        } else {
            Bias(value.clamp(0.0, 1.0))
        }
    }

    #[inline]
    pub fn value(self) -> f64 {
        self.0
    }

    /// Population of `|0⟩`, `(1 + ε) / 2`.
    #[inline]
    pub fn plus(self) -> f64 {
        (1.0 + self.0) / 2.0
    }

    /// Population of `|1⟩`, `(1 - ε) / 2`.
    #[inline]
    pub fn minus(self) -> f64 {
        (1.0 - self.0) / 2.0
    }
}

impl TryFrom<f64> for Bias {
    type Error = Error;
    fn try_from(value: f64) -> Result<Self> {
        Bias::new(value)
    }
}

impl From<Bias> for f64 {
    fn from(b: Bias) -> f64 {
        b.0
    }
}

/// Ordered per-qubit biases; index 0 is qubit 1, the top of the hierarchy.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegisterBiases(Vec<Bias>);

impl RegisterBiases {
    pub fn new(biases: Vec<Bias>) -> Result<Self> {
        if biases.is_empty() {
            return Err(Error::EmptyRegister);
        }
        Ok(RegisterBiases(biases))
    }

    pub fn from_values(values: &[f64]) -> Result<Self> {
        let biases = values.iter().map(|&v| Bias::new(v)).collect::<Result<Vec<_>>>()?;
        Self::new(biases)
    }

    /// `n` qubits sharing the bias `eps`.
    pub fn uniform(n: usize, eps: f64) -> Result<Self> {
        Self::new(vec![Bias::new(eps)?; n])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn biases(&self) -> &[Bias] {
        &self.0
    }

    pub fn values(&self) -> Vec<f64> {
        self.0.iter().map(|b| b.0).collect()
    }

    /// Qubit `i`, 1-based.
    pub fn get(&self, i: usize) -> Result<Bias> {
        if i == 0 || i > self.len() {
            return Err(Error::QubitIndex { index: i, n: self.len() });
        }
        Ok(self.0[i - 1])
    }

    /// Exchanges qubit `m` (1-based) with qubit 1 so that it becomes the target.
    pub fn bring_to_front(&self, m: usize) -> Result<Self> {
        self.get(m)?;
        let mut biases = self.0.clone();
        biases.swap(0, m - 1);
        Ok(RegisterBiases(biases))
    }

    /// The sub-register made of qubits `from..=n` (1-based).
    pub fn tail(&self, from: usize) -> Result<Self> {
        self.get(from)?;
        Ok(RegisterBiases(self.0[from - 1..].to_vec()))
    }
}

/// Diagonal of the global density matrix, indexed by basis state.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DiagDist {
    n: usize,
    probamps: Vec<f64>,
}

impl DiagDist {
    /// Validates length, sign and normalization.
    pub fn new(probamps: Vec<f64>) -> Result<Self> {
        let len = probamps.len();
        if len < 2 || !len.is_power_of_two() {
            return Err(Error::NotPowerOfTwo(len));
        }
        let sum: f64 = probamps.iter().sum();
        if probamps.iter().any(|p| !(*p >= 0.0)) || (sum - 1.0).abs() > NORMALIZATION_TOL {
            return Err(Error::NotNormalized { sum });
        }
        Ok(DiagDist {
            n: len.trailing_zeros() as usize,
            probamps,
        })
    }

    /// The maximally mixed state on `n` qubits.
    pub fn uniform(n: usize) -> Result<Self> {
        check_cap(n, DEFAULT_SIZE_CAP)?;
        if n == 0 {
            return Err(Error::EmptyRegister);
        }
        let len = 1usize << n;
        Ok(DiagDist {
            n,
            probamps: vec![1.0 / len as f64; len],
        })
    }

    pub(crate) fn from_parts(n: usize, probamps: Vec<f64>) -> Self {
        debug_assert_eq!(probamps.len(), 1 << n);
        DiagDist { n, probamps }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.probamps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probamps.is_empty()
    }

    pub fn probamps(&self) -> &[f64] {
        &self.probamps
    }

    pub fn into_probamps(self) -> Vec<f64> {
        self.probamps
    }

    /// Size of the 0T half, `2^(n-1)`.
    pub fn half(&self) -> usize {
        self.probamps.len() / 2
    }

    /// `R_{j,0T}`, the 0T member of complementary pair `j`.
    pub fn r0(&self, j: usize) -> f64 {
        self.probamps[j]
    }

    /// `R_{j,1T}`, the 1T member of complementary pair `j`.
    pub fn r1(&self, j: usize) -> f64 {
        self.probamps[self.probamps.len() - 1 - j]
    }
}

pub(crate) fn check_cap(n: usize, cap: usize) -> Result<()> {
    if n > cap || n >= usize::BITS as usize {
        return Err(Error::SizeCap { n, cap });
    }
    Ok(())
}

/// Product-state distribution with the default size cap.
pub fn probamps(register: &RegisterBiases) -> Result<DiagDist> {
    probamps_capped(register, DEFAULT_SIZE_CAP)
}

/// Product-state distribution: entry `j` multiplies, in qubit order 1..n,
/// `plus(ε_i)` where bit `i` of `j` is 0 and `minus(ε_i)` where it is 1.
pub fn probamps_capped(register: &RegisterBiases, cap: usize) -> Result<DiagDist> {
    let n = register.len();
    check_cap(n, cap)?;
    Ok(DiagDist::from_parts(n, product_table(register.biases())))
}

/// Builds the table by appending one less-significant bit per qubit. Each
/// entry is `((1 · q1) · q2) · … · qn`, the same order as a direct product.
pub(crate) fn product_table(biases: &[Bias]) -> Vec<f64> {
    let mut table = Vec::with_capacity(1 << biases.len());
    table.push(1.0);
    for b in biases {
        let (plus, minus) = (b.plus(), b.minus());
        let len = table.len();
        table.resize(2 * len, 0.0);
        for idx in (0..len).rev() {
            let p = table[idx];
            table[2 * idx] = p * plus;
            table[2 * idx + 1] = p * minus;
        }
    }
    table
}

/// `Σ_{bit i = 0} p_j − Σ_{bit i = 1} p_j` for qubit `i` (1-based).
pub fn marginal_bias(dist: &DiagDist, i: usize) -> Result<f64> {
    let n = dist.n();
    if i == 0 || i > n {
        return Err(Error::QubitIndex { index: i, n });
    }
    Ok(marginal_of(dist.probamps(), n, i))
}

pub(crate) fn marginal_of(probamps: &[f64], n: usize, i: usize) -> f64 {
    let mask = 1usize << (n - i);
    let (mut zero, mut one) = (0.0, 0.0);
    for (j, p) in probamps.iter().enumerate() {
        if j & mask == 0 {
            zero += p;
        } else {
            one += p;
        }
    }
    zero - one
}

/// Marginal bias of every qubit. Negative values are passed through.
pub fn marginal_register(dist: &DiagDist) -> Vec<f64> {
    (1..=dist.n()).map(|i| marginal_of(dist.probamps(), dist.n(), i)).collect()
}
