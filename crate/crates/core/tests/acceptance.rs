//! Acceptance criteria, one PASS/FAIL line each. Runs without the libtest
//! harness so the lines always appear in `cargo test` output; the process
//! exits nonzero when any criterion fails.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

use caputo_l1::experiments::{check_bound, order_table, DEFAULT_ALPHAS, DEFAULT_SMOOTHNESS, DEFAULT_TAU};
use caputo_l1::{
    asymptotic_optimal_constant, caputo_of_interpolant, error_constant, interpolate, interpolation_bound,
    interpolation_bound_with_modulus, l1_apply, l1_apply_all, make_test_function, weights, ErrorConstantParams,
    QuadratureConfig, SampledFunction, TestFunctionSpec, UniformGrid,
};
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Published order table; the row printed as α = 0.6 holds the α = 0.7 values.
const PUBLISHED_ORDERS: [[f64; 10]; 5] = [
    [0.0, 0.2, 0.4, 0.6, 0.8, 1.0, 1.2, 1.4, 1.59, 1.83],
    [-0.2, 0.0, 0.2, 0.4, 0.6, 0.8, 1.0, 1.2, 1.4, 1.68],
    [-0.4, -0.2, 0.0, 0.2, 0.4, 0.6, 0.8, 1.0, 1.2, 1.49],
    [-0.6, -0.4, -0.2, 0.0, 0.2, 0.4, 0.6, 0.8, 1.0, 1.29],
    [-0.8, -0.6, -0.4, -0.2, 0.0, 0.2, 0.4, 0.6, 0.8, 1.0],
];
const ORDER_TOLERANCE: f64 = 0.05;
const BOUND_SLACK: f64 = 1e-8;
const IDENTITY_TOLERANCE: f64 = 1e-10;
const INTERPOLATION_SLACK: f64 = 1e-12;
const LIMIT_TOLERANCE: f64 = 0.01;
const SMALL_ALPHA_CAP: f64 = 1e-3;
const UNIFORM_CAP: f64 = 10.0;
const TELESCOPE_TOLERANCE: f64 = 1e-12;
const LINEAR_EXACTNESS: f64 = 1e-9;

fn report(id: u32, name: &str, failures: &[String]) -> bool {
    let status = if failures.is_empty() { "PASS" } else { "FAIL" };
    println!("[{status}] criterion {id}: {name}");
    for f in failures.iter().take(20) {
        println!("        {f}");
    }
    if failures.len() > 20 {
        println!("        ... {} violations in total", failures.len());
    }
    failures.is_empty()
}

fn spec(k: u8, beta: f64) -> TestFunctionSpec {
    TestFunctionSpec::new(k, beta).unwrap()
}

fn criterion_1_order_table_reproduction() -> bool {
    let table = order_table(&DEFAULT_ALPHAS, &DEFAULT_SMOOTHNESS, DEFAULT_TAU, 1.0).unwrap();
    let mut failures = Vec::new();
    for (i, &alpha) in DEFAULT_ALPHAS.iter().enumerate() {
        for (j, &v) in DEFAULT_SMOOTHNESS.iter().enumerate() {
            let order = table.get(i, j).as_ref().unwrap().estimated_order;
            let published = PUBLISHED_ORDERS[i][j];
            if (order - published).abs() > ORDER_TOLERANCE {
                failures.push(format!(
                    "alpha={alpha} k+beta={v}: computed {order:.4}, published {published}"
                ));
            }
        }
    }
    report(1, "order table within ±0.05 of the published values", &failures)
}

fn criterion_2_truncation_bound_sweep() -> bool {
    let cfg = QuadratureConfig::default();
    let alphas: Vec<f64> = (1..=9).map(|i| i as f64 / 10.0).collect();
    let mut failures = Vec::new();
    let mut checked = 0;
    for &alpha in &alphas {
        for k in [0u8, 1] {
            for beta in [0.25, 0.5, 0.75, 1.0] {
                if (k == 0 && beta <= alpha) || k as f64 + beta <= alpha {
                    continue;
                }
                let f = make_test_function(spec(k, beta));
                for e in 4..=10 {
                    let tau = 2f64.powi(-e);
                    let check = check_bound(&f, alpha, tau, 1.0, &cfg).unwrap();
                    checked += 1;
                    if check.worst_excess > BOUND_SLACK {
                        failures.push(format!(
                            "alpha={alpha} k={k} beta={beta} tau=2^-{e}: excess {:e}",
                            check.worst_excess
                        ));
                    }
                }
            }
        }
    }
    assert!(checked > 0);
    println!("        {checked} (alpha, k, beta, tau) combinations checked at every node");
    report(2, "observed error <= truncation bound + 1e-8", &failures)
}

fn criterion_3_observed_order_optimality() -> bool {
    let alphas = [0.3, 0.5];
    let smoothness = [0.7, 1.1, 1.5];
    let table = order_table(&alphas, &smoothness, DEFAULT_TAU, 1.0).unwrap();
    let mut failures = Vec::new();
    for (i, &alpha) in alphas.iter().enumerate() {
        for (j, &v) in smoothness.iter().enumerate() {
            let order = table.get(i, j).as_ref().unwrap().estimated_order;
            if (order - (v - alpha)).abs() > ORDER_TOLERANCE {
                failures.push(format!("alpha={alpha} k+beta={v}: {order:.4}"));
            }
        }
    }
    report(3, "estimated order = k + beta - alpha within ±0.05", &failures)
}

fn criterion_4_interpolant_identity() -> bool {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let grid = UniformGrid::covering(1.0, 1.0 / 256.0).unwrap();
    let mut failures = Vec::new();
    for trial in 0..100 {
        let values: Vec<f64> = (0..=256).map(|_| rng.random_range(-1.0..1.0)).collect();
        let samples = SampledFunction::new(grid, values).unwrap();
        for alpha in [0.1, 0.5, 0.9] {
            let scheme = l1_apply_all(&samples, alpha).unwrap();
            for n in 1..=256 {
                let exact = caputo_of_interpolant(&samples, alpha, n).unwrap();
                let l1 = scheme[n - 1];
                if (exact - l1).abs() > IDENTITY_TOLERANCE * (1.0 + l1.abs()) {
                    failures.push(format!("trial {trial} alpha={alpha} n={n}: {exact} vs {l1}"));
                }
            }
        }
    }
    report(4, "Caputo derivative of the interpolant equals the scheme", &failures)
}

fn criterion_5_constant_limits() -> bool {
    let mut failures = Vec::new();
    let c = |alpha: f64, beta: f64, k: u8, n: u64| {
        error_constant(&ErrorConstantParams::new(alpha, beta, k, n).unwrap()).unwrap()
    };
    let n_grid: Vec<u64> = (0..=60).map(|i| 10f64.powf(i as f64 / 10.0).round() as u64).collect();
    for &n in &n_grid {
        let v = c(0.999, 1.0, 0, n);
        if n >= 1024 && (v - 2.0).abs() > LIMIT_TOLERANCE {
            failures.push(format!("k=0 beta=1 alpha=0.999 n={n}: {v}"));
        }
        for beta in [0.25, 1.0] {
            let v = c(0.999, beta, 1, n);
            if n >= 1024 && (v - 1.0).abs() > LIMIT_TOLERANCE {
                failures.push(format!("k=1 beta={beta} alpha=0.999 n={n}: {v}"));
            }
        }
        for (k, beta) in [
            (0u8, 0.25),
            (0, 0.5),
            (0, 0.75),
            (0, 1.0),
            (1, 0.0),
            (1, 0.25),
            (1, 0.5),
            (1, 1.0),
        ] {
            let v = c(1e-6, beta, k, n);
            if v > SMALL_ALPHA_CAP {
                failures.push(format!("alpha=1e-6 k={k} beta={beta} n={n}: {v}"));
            }
        }
        for i in 1..=99 {
            let alpha = i as f64 / 100.0;
            for (k, beta) in [(0u8, 1.0), (1, 0.0), (1, 0.5), (1, 1.0)] {
                let v = c(alpha, beta, k, n);
                if !(v <= UNIFORM_CAP) {
                    failures.push(format!("alpha={alpha} k={k} beta={beta} n={n}: {v}"));
                }
            }
        }
    }
    report(5, "error-constant limits and uniform boundedness", &failures)
}

fn criterion_6_interpolation_bound() -> bool {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut failures = Vec::new();
    // τ = 1/37 keeps the kink inside a cell, τ = 1/32 puts it on a node
    for tau_inv in [37usize, 32] {
        let tau = 1.0 / tau_inv as f64;
        let grid = UniformGrid::new(tau, tau_inv).unwrap();
        for (k, beta, label) in [
            (0u8, 0.0, "k=0 beta=0"),
            (0, 0.5, "k=0 beta=0.5"),
            (1, 0.0, "k=1 beta=0"),
            (1, 0.5, "k=1 beta=0.5"),
        ] {
            // β = 0 regimes use a Hölder member whose modulus is known exactly
            let member_beta = if beta == 0.0 { 0.5 } else { beta };
            let f = make_test_function(spec(k, member_beta));
            let samples = SampledFunction::from_fn(grid, |t| f.eval(t)).unwrap();
            let seminorm = f.known_seminorm().unwrap();
            let modulus = |d: f64| seminorm * d.min(0.5).powf(member_beta);
            for _ in 0..10_000 {
                let t: f64 = rng.random_range(0.0..grid.horizon());
                let j = ((t / tau).floor() as usize).min(tau_inv - 1);
                let t_j = grid.node(j);
                if t < t_j {
                    continue;
                }
                let err = (interpolate(&samples, t).unwrap() - f.eval(t)).abs();
                let bound = match (k, beta == 0.0) {
                    (0, true) => interpolation_bound_with_modulus(t, t_j, tau, modulus).unwrap(),
                    (1, true) => interpolation_bound(1, 0.0, t, t_j, tau, modulus(tau)).unwrap(),
                    _ => interpolation_bound(k, beta, t, t_j, tau, seminorm).unwrap(),
                };
                if err > bound + INTERPOLATION_SLACK {
                    failures.push(format!("{label} tau=1/{tau_inv} t={t}: {err:e} > {bound:e}"));
                }
            }
        }
    }
    report(6, "interpolation error within the pointwise bound", &failures)
}

fn criterion_7_weights_and_linear_exactness() -> bool {
    let mut failures = Vec::new();
    for i in 1..20 {
        let alpha = 0.05 * i as f64;
        let w = weights(alpha, 4096).unwrap();
        let b = w.as_slice();
        if b[0] != 1.0 {
            failures.push(format!("alpha={alpha}: b0 = {}", b[0]));
        }
        if !b.windows(2).all(|p| p[1] < p[0]) {
            failures.push(format!("alpha={alpha}: weights not strictly decreasing"));
        }
        let mut partial = 0.0;
        for (m, bi) in b.iter().enumerate() {
            partial += bi;
            let exact = ((m + 1) as f64).powf(1.0 - alpha);
            if ((partial - exact) / exact).abs() > TELESCOPE_TOLERANCE {
                failures.push(format!("alpha={alpha} m={}: partial sum {partial}", m + 1));
            }
        }
    }
    for alpha in [0.1, 0.3, 0.5, 0.7, 0.9] {
        for n_max in [1usize, 7, 64, 1024] {
            let grid = UniformGrid::covering(1.0, 1.0 / n_max as f64).unwrap();
            let samples = SampledFunction::from_fn(grid, |t| -1.5 * t + 0.25).unwrap();
            let scheme = l1_apply_all(&samples, alpha).unwrap();
            let g = caputo_l1::gamma(2.0 - alpha).unwrap();
            for n in 1..=n_max {
                let expected = -1.5 * grid.node(n).powf(1.0 - alpha) / g;
                if (scheme[n - 1] - expected).abs() > LINEAR_EXACTNESS {
                    failures.push(format!("alpha={alpha} N={n_max} n={n}: {}", scheme[n - 1]));
                }
            }
            let last = l1_apply(&samples, alpha, n_max).unwrap();
            if last.to_bits() != scheme[n_max - 1].to_bits() {
                failures.push(format!("alpha={alpha} N={n_max}: single-node result differs"));
            }
        }
    }
    report(7, "weight identities and exactness on linear data", &failures)
}

fn criterion_8_optimal_constant_dominance() -> bool {
    let mut failures = Vec::new();
    for i in 1..=9 {
        let alpha = i as f64 / 10.0;
        let optimal = asymptotic_optimal_constant(alpha).unwrap();
        for n in [2u64, 64, 4096] {
            let c = error_constant(&ErrorConstantParams::new(alpha, 1.0, 1, n).unwrap()).unwrap();
            if !(c > optimal) {
                failures.push(format!("alpha={alpha} n={n}: {c} <= {optimal}"));
            }
        }
    }
    report(
        8,
        "explicit constant exceeds the asymptotic optimal constant",
        &failures,
    )
}

fn criterion_9_divergence_detection() -> bool {
    let table = order_table(&DEFAULT_ALPHAS, &DEFAULT_SMOOTHNESS, DEFAULT_TAU, 1.0).unwrap();
    let mut failures = Vec::new();
    let mut cells = 0;
    for (i, &alpha) in DEFAULT_ALPHAS.iter().enumerate() {
        for (j, &v) in DEFAULT_SMOOTHNESS.iter().enumerate() {
            if v >= alpha {
                continue;
            }
            cells += 1;
            let order = table.get(i, j).as_ref().unwrap().estimated_order;
            let published = PUBLISHED_ORDERS[i][j];
            if !(order < 0.0) || (order - published).abs() > ORDER_TOLERANCE {
                failures.push(format!("alpha={alpha} k+beta={v}: {order:.4} vs {published}"));
            }
        }
    }
    assert_eq!(cells, 10);
    report(9, "negative orders where k + beta < alpha", &failures)
}

fn main() {
    let criteria: [fn() -> bool; 9] = [
        criterion_1_order_table_reproduction,
        criterion_2_truncation_bound_sweep,
        criterion_3_observed_order_optimality,
        criterion_4_interpolant_identity,
        criterion_5_constant_limits,
        criterion_6_interpolation_bound,
        criterion_7_weights_and_linear_exactness,
        criterion_8_optimal_constant_dominance,
        criterion_9_divergence_detection,
    ];
    let mut failed = Vec::new();
    for (i, criterion) in criteria.iter().enumerate() {
        let passed = std::panic::catch_unwind(criterion).unwrap_or_else(|_| {
            println!("[FAIL] criterion {}: panicked", i + 1);
            false
        });
        if !passed {
            failed.push(i + 1);
        }
    }
    println!(
        "acceptance: {} of {} criteria passed",
        criteria.len() - failed.len(),
        criteria.len()
    );
    if !failed.is_empty() {
        println!("failed criteria: {failed:?}");
        std::process::exit(1);
    }
}
