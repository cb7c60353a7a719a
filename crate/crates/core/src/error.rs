use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("bias {0} is outside [0, 1]")]
    BiasOutOfRange(f64),

    #[error("a register needs at least one qubit")]
    EmptyRegister,

    #[error("register of {n} qubits exceeds the size cap of {cap}")]
    SizeCap { n: usize, cap: usize },

    #[error("distribution length {0} is not a power of two")]
    NotPowerOfTwo(usize),

    #[error("distribution entries must be non-negative and sum to 1 (sum = {sum})")]
    NotNormalized { sum: f64 },

    #[error("qubit index {index} out of range 1..={n}")]
    QubitIndex { index: usize, n: usize },

    #[error("swap index {index} is not in the 0T half of a {n}-qubit register")]
    SwapIndex { index: usize, n: usize },

    #[error("round {round} out of range 1..={max} for a {n}-qubit register")]
    Round { round: usize, max: usize, n: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("recursion coefficient overflowed at r={r}, k={k}, n={n}")]
    Overflow { r: usize, k: usize, n: usize },

    #[error(
        "no convergence after {iterations} iterations (round {round}, head qubit {head}); state: {state:?}"
    )]
    NonConvergence {
        round: usize,
        head: usize,
        iterations: u64,
        state: Vec<f64>,
    },

    #[error("circuit text, line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

pub type Result<T> = std::result::Result<T, Error>;
