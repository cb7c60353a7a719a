#![allow(dead_code)]

use optcool::RegisterBiases;

/// Bias sets that stress the optimality check: mixed magnitudes, near-zero
/// targets, near-pure ancillas, exact zeros.
pub const STRESS_N5: [[f64; 5]; 5] = [
    [0.0147, 0.0893, 0.0881, 0.0448, 0.0737],
    [0.1405, 0.4176, 0.9066, 0.7843, 0.9499],
    [0.0800, 0.00001, 0.00001, 0.1000, 0.1000],
    [0.8000, 0.0001, 0.0001, 0.0002, 0.0001],
    [0.00002, 0.9000, 0.1000, 0.2000, 0.0700],
];

pub const STRESS_N9: [[f64; 9]; 5] = [
    [0.6492, 0.0354, 0.8406, 0.9247, 0.6720, 0.7502, 0.7357, 0.3883, 0.6489],
    [0.0121, 0.0495, 0.0023, 0.0195, 0.0033, 0.0069, 0.0577, 0.0487, 0.0223],
    [0.00002, 0.9000, 0.1000, 0.2000, 0.0700, 0.0900, 0.7450, 0.2000, 0.5000],
    [0.2000, 0.0001, 0.0000, 0.0002, 0.0007, 0.0001, 0.000745, 0.0020, 0.5000],
    [0.7000, 0.0009, 0.0001, 0.0020, 0.0007, 0.0090, 0.0075, 0.0020, 0.0006],
];

pub const STRESS_N14: [[f64; 14]; 5] = [
    [0.0665, 0.0025, 0.0308, 0.0268, 0.0536, 0.0557, 0.0132, 0.0343, 0.0313, 0.0453, 0.0497, 0.0529, 0.0194, 0.0476],
    [0.4586, 0.1139, 0.0833, 0.3489, 0.6718, 0.2383, 0.4097, 0.1567, 0.5259, 0.1786, 0.3542, 0.4894, 0.6236, 0.6715],
    [0.7000, 0.0009, 0.0001, 0.0020, 0.000745, 0.0090, 0.0075, 0.0020, 0.0006, 0.0009, 0.00023, 0.0001, 0.0036, 0.0001],
    [0.0003, 0.0900, 0.0100, 0.0020, 0.0007, 0.0900, 0.0075, 0.0020, 0.0060, 0.0009, 0.0230, 0.7000, 0.0036, 0.0500],
    [0.0003, 0.0900, 0.1000, 0.2000, 0.0700, 0.9000, 0.7450, 0.2000, 0.6000, 0.0900, 0.2300, 0.7000, 0.3560, 0.5000],
];

pub const STRESS_N19: [[f64; 19]; 5] = [
    [0.322, 0.93, 0.212, 0.232, 0.607, 0.569, 0.985, 0.2, 0.1, 0.732, 0.42, 0.35, 0.75, 0.23, 0.369, 0.785, 0.12, 0.21, 0.832],
    [0.4, 0.000093, 0.0000212, 0.000232, 0.000607, 0.000569, 0.000985, 0.0002, 0.0001, 0.0000732, 0.000042, 0.000035, 0.000075, 0.000023, 0.000369, 0.0000785, 0.00012, 0.00021, 0.0000832],
    [0.00004, 0.93, 0.212, 0.232, 0.607, 0.569, 0.985, 0.2, 0.1, 0.732, 0.42, 0.35, 0.75, 0.23, 0.369, 0.785, 0.12, 0.21, 0.832],
    [0.04, 0.00093, 0.00212, 0.00232, 0.0607, 0.569, 0.0985, 0.0002, 0.1, 0.0732, 0.0042, 0.35, 0.075, 0.023, 0.000369, 0.0785, 0.0012, 0.21, 0.00832],
    [0.000003, 0.000093, 0.0000212, 0.000000232, 0.00000607, 0.0000569, 0.0000985, 0.00002, 0.000001, 0.00000732, 0.000042, 0.000035, 0.000075, 0.0000023, 0.0000369, 0.00000785, 0.0000012, 0.000021, 0.0000832],
];

pub const STRESS_N23: [f64; 23] = [
    0.5359, 0.5566, 0.1308, 0.3429, 0.3119, 0.4524, 0.4966, 0.5283, 0.1932, 0.4758, 0.4586, 0.1139,
    0.0833, 0.3489, 0.6718, 0.2383, 0.4097, 0.1567, 0.5259, 0.1786, 0.3542, 0.4894, 0.6236,
];

pub fn reg(values: &[f64]) -> RegisterBiases {
    RegisterBiases::from_values(values).unwrap()
}

pub fn rel_close(a: f64, b: f64, tol: f64) -> bool {
    if a == b {
        return true;
    }
    (a - b).abs() <= tol * a.abs().max(b.abs())
}
