//! Optimal complementary-pair entropy compression ("optswaps") and
//! heat-bath algorithmic cooling for qubit registers in diagonal mixed
//! states.
//!
//! - [`regstate`]: biases, product-state distributions, marginals
//! - [`compress`]: optswap selection, gain, optimality verification
//! - [`limits`]: cooling-limit recursion, closed forms, iterative limits, bounds
//! - [`hbac`]: register cooling with bath resets and exchange counting
//! - [`circuits`]: multi-controlled-NOT synthesis, simulation, text export

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod circuits;
pub mod compress;
pub mod error;
pub mod hbac;
pub mod limits;
pub mod regstate;

pub use circuits::{apply_circuit, circuit_permutation, export_text, lim_comp, nb_maxcomp, parse_text};
pub use circuits::{Circuit, Gate, Polarity};
pub use compress::{apply_swaps, bias_gain, find_optswaps, verify_optimality, OptimalityReport, SwapSet};
pub use error::{Error, Result};
pub use hbac::{complexity_sweep, register_compression, CoolingReport, HbacConfig, Mode};
pub use limits::{analytic_limit, numerical_limits, single_round_limit, sort_bound, LimitMatrix};
pub use regstate::{marginal_bias, marginal_register, probamps, Bias, DiagDist, RegisterBiases};
