//! Acceptance suite: one PASS/FAIL line per criterion. Exits non-zero if
//! any criterion fails.

mod common;

use std::process::ExitCode;
use std::time::{Duration, Instant};

use common::*;
use optcool::compress::SwapSet;
use optcool::hbac::{log_linear_fit, register_compression_observed, CoolingObserver, Exchange};
use optcool::limits::{analytic_limit, f};
use optcool::{
    apply_circuit, apply_swaps, circuit_permutation, complexity_sweep, find_optswaps, lim_comp, marginal_bias,
    nb_maxcomp, numerical_limits, probamps, single_round_limit, sort_bound, verify_optimality, Bias, DiagDist,
    HbacConfig, Mode, RegisterBiases,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Check = fn() -> Outcome;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        #[allow(clippy::neg_cmp_op_on_partial_ord)]
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn ok<T, E: std::fmt::Display>(r: Result<T, E>) -> Result<T, String> {
    r.map_err(|e| e.to_string())
}

fn dist(values: &[f64]) -> Result<DiagDist, String> {
    ok(probamps(&ok(RegisterBiases::from_values(values))?))
}

fn three_qubit_recovery() -> Outcome {
    for eps in [0.01, 0.2, 0.9] {
        let d = dist(&[eps; 3])?;
        let start = Instant::now();
        let s = find_optswaps(&d);
        let took = start.elapsed();
        let pairs: Vec<_> = s.pairs().collect();
        ensure!(pairs == [(3, 4)], "eps {eps}: got {pairs:?}");
        ensure!(took < Duration::from_millis(1), "eps {eps}: {took:?}");
    }
    Ok("n=3 equal biases swap only |011> <-> |100>".into())
}

fn verify_set(values: &[f64]) -> Result<(), String> {
    let report = ok(verify_optimality(&dist(values)?))?;
    ensure!(report.all_passed(), "{values:?}: {report:?}");
    ensure!(report.violations == 0 && report.counterexamples.is_empty(), "{values:?}: counterexamples");
    Ok(())
}

fn idempotent(values: &[f64]) -> Result<usize, String> {
    let d = dist(values)?;
    let s = find_optswaps(&d);
    let after = ok(apply_swaps(&d, &s))?;
    ensure!(find_optswaps(&after).is_empty(), "{} qubits: second pass found swaps", values.len());
    Ok(s.len())
}

fn optimality_sets() -> Outcome {
    for set in &STRESS_N5 {
        verify_set(set)?;
    }
    for set in &STRESS_N9 {
        verify_set(set)?;
    }
    let start = Instant::now();
    for set in &STRESS_N14 {
        verify_set(set)?;
    }
    let t14 = start.elapsed();
    ensure!(t14 < Duration::from_secs(30), "n=14 took {t14:?}");
    for set in &STRESS_N19 {
        idempotent(set)?;
    }
    let start = Instant::now();
    let swaps = idempotent(&STRESS_N23)?;
    let t23 = start.elapsed();
    ensure!(t23 < Duration::from_secs(60), "n=23 took {t23:?}");
    Ok(format!("15 sets verified (n=14 in {t14:.1?}); n=19,23 idempotent (n=23: {swaps} swaps in {t23:.1?})"))
}

fn exponent_closed_form() -> Outcome {
    for n in 3..=16 {
        let got = ok(f(n - 2, 1, n))?;
        ensure!(got == 1u64 << (n - 2), "n={n}: {got}");
    }
    Ok("f(n-2,1,n) = 2^(n-2) for n = 3..16".into())
}

fn low_bias_limit() -> Outcome {
    let eps = ok(Bias::new(1e-5))?;
    let mut worst = 0.0f64;
    for n in 3..=12 {
        let got = ok(analytic_limit(n - 2, 1, n, eps))?.value();
        let want = (1u64 << (n - 2)) as f64 * 1e-5;
        worst = worst.max((got - want).abs() / want);
    }
    ensure!(worst <= 1e-3, "worst relative gap {worst:.3e}");
    Ok(format!("n <= 12 within {worst:.2e} of 2^(n-2) * 1e-5"))
}

fn limiting_swap_fixed_point() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let eps = ok(Bias::new(rng.gen_range(0.0..1.0)))?;
        let m: u32 = rng.gen_range(1..=30);
        let l = ok(single_round_limit(eps, m))?;
        let lhs = l.plus() * eps.minus().powi(m as i32);
        let rhs = l.minus() * eps.plus().powi(m as i32);
        worst = worst.max((lhs - rhs).abs());
    }
    ensure!(worst <= 1e-12, "worst residual {worst:.3e}");
    Ok(format!("100 random (eps, m): worst residual {worst:.2e}"))
}

fn numerical_vs_analytic() -> Outcome {
    let start = Instant::now();
    let mut worst = 0.0f64;
    for n in 3..=8 {
        for eps in [1e-5, 0.01, 0.1, 0.5] {
            let e = ok(Bias::new(eps))?;
            let m = ok(numerical_limits(&ok(RegisterBiases::uniform(n, eps))?, n - 2, 1e-9))?;
            for r in 1..=n - 2 {
                for k in 1..=n - r - 1 {
                    let want = ok(analytic_limit(r, k, n, e))?.value();
                    let got = m.get(r, k);
                    worst = worst.max((got - want).abs() / want);
                }
            }
        }
    }
    let took = start.elapsed();
    ensure!(worst <= 1e-6, "worst relative gap {worst:.3e}");
    ensure!(took < Duration::from_secs(60), "took {took:?}");
    Ok(format!("n <= 8, all rounds: worst {worst:.2e} in {took:.1?}"))
}

#[derive(Default)]
struct Counter {
    exchanges: u64,
}

impl CoolingObserver for Counter {
    fn on_exchange(&mut self, _: &Exchange) {
        self.exchanges += 1;
    }
}

fn cooling_convergence() -> Outcome {
    let precision = 1e-9;
    let mut sets: Vec<Vec<f64>> = (3..=6)
        .flat_map(|n| [1e-5, 0.01, 0.1, 0.5].map(|e| vec![e; n]))
        .collect();
    sets.extend([
        vec![0.2, 0.15, 0.1, 0.05, 0.02],
        vec![0.05, 0.1, 0.2, 0.3, 0.1, 0.07],
        vec![0.3, 0.01, 0.2, 0.1],
        vec![0.12, 0.4, 0.08, 0.25, 0.3, 0.05],
    ]);
    let mut worst = 0.0f64;
    for values in &sets {
        let config = HbacConfig::new(ok(RegisterBiases::from_values(values))?).precision(precision);
        let mut counter = Counter::default();
        let report = ok(register_compression_observed(&config, &mut counter))?;
        for (&got, &want) in report.round_limits.last_row().iter().zip(report.targets.last_row()) {
            if got != want {
                worst = worst.max((got - want).abs() / want.abs());
            }
        }
        ensure!(report.complexity > 0, "{values:?}: zero complexity");
        ensure!(report.complexity == counter.exchanges, "{values:?}: audit mismatch");
    }
    ensure!(worst <= 10.0 * precision, "worst relative gap {worst:.3e}");
    Ok(format!("{} registers, worst terminal gap {worst:.2e}, complexity audited", sets.len()))
}

fn complexity_growth() -> Outcome {
    let mut summary = Vec::new();
    for eps in [0.1, 1e-5] {
        let rows = ok(complexity_sweep(3..=7, ok(Bias::new(eps))?, 1e-9, Mode::Full))?;
        let counts: Vec<u64> = rows.iter().map(|r| r.complexity).collect();
        ensure!(counts.windows(2).all(|w| w[1] > w[0]), "eps {eps}: {counts:?}");
        let points: Vec<(f64, f64)> = rows.iter().map(|r| (r.n as f64, r.complexity as f64)).collect();
        let (slope, _, r2) = log_linear_fit(&points).ok_or("fit failed")?;
        ensure!(r2 >= 0.9, "eps {eps}: r2 {r2:.4} for {counts:?}");
        summary.push(format!("eps {eps}: {counts:?} slope {slope:.2} r2 {r2:.3}"));
    }
    Ok(summary.join("; "))
}

fn circuit_soundness() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for _ in 0..200 {
        let n = rng.gen_range(1..=8);
        let s = ok(SwapSet::new(n, (0..1usize << (n - 1)).filter(|_| rng.gen_bool(0.5))))?;
        let perm = ok(circuit_permutation(&ok(nb_maxcomp(n, &s))?))?;
        let mut want: Vec<usize> = (0..1usize << n).collect();
        for (a, b) in s.pairs() {
            want.swap(a, b);
        }
        ensure!(perm == want, "n={n} {:?}", s.indices());
        ensure!(perm.iter().enumerate().all(|(i, &x)| perm[x] == i), "not an involution");
    }
    for n in 2..=10 {
        let perm = ok(circuit_permutation(&ok(lim_comp(n))?))?;
        let h = 1usize << (n - 1);
        for (i, &x) in perm.iter().enumerate() {
            let want = if i == h - 1 { h } else if i == h { h - 1 } else { i };
            ensure!(x == want, "lim_comp({n}) sends {i} to {x}");
        }
    }
    Ok("200 random swap sets (n <= 8) and lim_comp for n = 2..10".into())
}

fn sort_bound_equivalence() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let mut worst = 0.0f64;
    for _ in 0..500 {
        let n = rng.gen_range(1..=10);
        let values: Vec<f64> = (0..n).map(|_| rng.gen_range(0.0..=1.0)).collect();
        let d = dist(&values)?;
        let after = ok(apply_swaps(&d, &find_optswaps(&d)))?;
        let got = ok(marginal_bias(&after, 1))?;
        let want = sort_bound(&d);
        if got != want {
            worst = worst.max((got - want).abs() / want.abs());
        }
    }
    ensure!(worst <= 1e-12, "worst relative gap {worst:.3e}");
    Ok(format!("500 random product states, worst {worst:.2e}"))
}

struct FloorWatch {
    defaults: Vec<f64>,
    lowest: f64,
}

impl CoolingObserver for FloorWatch {
    fn on_pass(&mut self, _: usize, sub_head: usize, biases: &[f64]) {
        for (b, d) in biases.iter().zip(&self.defaults[sub_head - 1..]) {
            self.lowest = self.lowest.min(b - d);
        }
    }

    fn on_row(&mut self, _: usize, row: &[f64]) {
        for (b, d) in row.iter().zip(&self.defaults) {
            self.lowest = self.lowest.min(b - d);
        }
    }
}

fn conservation() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let sorted = |p: &[f64]| {
        let mut v: Vec<u64> = p.iter().map(|x| x.to_bits()).collect();
        v.sort_unstable();
        v
    };
    for _ in 0..100 {
        let n = rng.gen_range(1..=8);
        let values: Vec<f64> = (0..n).map(|_| rng.gen_range(0.0..=1.0)).collect();
        let d = dist(&values)?;
        let s = ok(SwapSet::new(n, (0..1usize << (n - 1)).filter(|_| rng.gen_bool(0.5))))?;
        let by_swaps = ok(apply_swaps(&d, &s))?;
        let by_circuit = ok(apply_circuit(&d, &ok(nb_maxcomp(n, &s))?))?;
        for after in [&by_swaps, &by_circuit] {
            ensure!(sorted(after.probamps()) == sorted(d.probamps()), "multiset changed");
            let (x, y): (f64, f64) = (d.probamps().iter().sum(), after.probamps().iter().sum());
            ensure!((x - y).abs() <= 1e-14, "sum moved by {}", x - y);
        }
    }
    let mut runs = 0;
    for values in [
        vec![0.1; 5],
        vec![1e-5; 6],
        vec![0.2, 0.15, 0.1, 0.05, 0.02],
        vec![0.05, 0.1, 0.2, 0.3, 0.1, 0.07],
    ] {
        for mode in [Mode::Full, Mode::LimComp] {
            let config = HbacConfig::new(ok(RegisterBiases::from_values(&values))?).mode(mode);
            let mut watch = FloorWatch { defaults: values.clone(), lowest: f64::INFINITY };
            ok(register_compression_observed(&config, &mut watch))?;
            ensure!(watch.lowest >= 0.0, "{values:?} fell {} below a default", -watch.lowest);
            runs += 1;
        }
    }
    Ok(format!("100 swap/circuit applications conserve probamps; {runs} cooling runs stay above defaults"))
}

fn main() -> ExitCode {
    let criteria: [(&str, Check); 11] = [
        ("three-qubit compression recovered", three_qubit_recovery),
        ("optimality of swap sets", optimality_sets),
        ("exponent closed form", exponent_closed_form),
        ("low-bias limit", low_bias_limit),
        ("limiting-swap fixed point", limiting_swap_fixed_point),
        ("iterative vs closed-form limits", numerical_vs_analytic),
        ("cooling reaches targets", cooling_convergence),
        ("complexity growth", complexity_growth),
        ("circuit soundness", circuit_soundness),
        ("sort bound equivalence", sort_bound_equivalence),
        ("conservation", conservation),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        match check() {
            Ok(detail) => println!("PASS {:>2} {name} [{:.2?}]: {detail}", i + 1, start.elapsed()),
            Err(why) => {
                failed += 1;
                println!("FAIL {:>2} {name} [{:.2?}]: {why}", i + 1, start.elapsed());
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
