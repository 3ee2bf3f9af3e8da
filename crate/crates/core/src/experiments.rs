//! Order tables and truncation-bound sweeps over the test family.

use rayon::prelude::*;

use crate::analysis::{error_constant, estimate_order, ErrorConstantParams, OrderEstimate};
use crate::error::{invalid, Error, Result};
use crate::l1::{l1_apply_all, SampledFunction, UniformGrid};
use crate::oracle::{caputo_reference, QuadratureConfig};
use crate::testbed::{make_test_function, HolderFunction, TestFunctionSpec};

pub const DEFAULT_ALPHAS: [f64; 5] = [0.1, 0.3, 0.5, 0.7, 0.9];
pub const DEFAULT_SMOOTHNESS: [f64; 10] = [0.1, 0.3, 0.5, 0.7, 0.9, 1.1, 1.3, 1.5, 1.7, 1.9];
pub const DEFAULT_TAU: f64 = 1.0 / 1024.0;
/// A bound check passes when every observed/bound ratio stays below this.
pub const BOUND_RATIO_LIMIT: f64 = 1.0 + 1e-6;

/// Estimated orders indexed by (α, k + β), row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct OrderTable {
    pub alphas: Vec<f64>,
    pub smoothness: Vec<f64>,
    pub cells: Vec<Result<OrderEstimate>>,
}

impl OrderTable {
    pub fn get(&self, row: usize, col: usize) -> &Result<OrderEstimate> {
        &self.cells[row * self.smoothness.len() + col]
    }
}

pub fn order_table(alphas: &[f64], smoothness: &[f64], tau_base: f64, horizon: f64) -> Result<OrderTable> {
    let specs = smoothness
        .iter()
        .map(|&v| TestFunctionSpec::from_smoothness(v))
        .collect::<Result<Vec<_>>>()?;
    let functions: Vec<HolderFunction> = specs.into_iter().map(make_test_function).collect();
    let cells = alphas
        .iter()
        .flat_map(|&a| functions.iter().map(move |f| (a, f)))
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|(a, f)| estimate_order(f, a, tau_base, horizon))
        .collect();
    Ok(OrderTable {
        alphas: alphas.to_vec(),
        smoothness: smoothness.to_vec(),
        cells,
    })
}

/// Observed truncation error against the bound on one grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundCheck {
    pub alpha: f64,
    pub k: u8,
    pub beta: f64,
    pub tau: f64,
    /// max over nodes of `|D^α y(t_n) - δ^α_τ y(t_n)|`
    pub observed_max: f64,
    /// the bound at the last node, where the constant is largest
    pub bound_max: f64,
    /// max over nodes of observed / bound; 0 when both vanish
    pub worst_ratio: f64,
    /// max over nodes of observed - bound; negative when the bound holds
    pub worst_excess: f64,
    /// largest oracle error estimate over the nodes
    pub oracle_error: f64,
}

impl BoundCheck {
    pub fn passed(&self) -> bool {
        self.worst_ratio <= BOUND_RATIO_LIMIT
    }

    pub fn is_exact_zero(&self) -> bool {
        self.observed_max == 0.0 && self.bound_max == 0.0
    }
}

/// Compares the scheme with the quadrature oracle at every node of the grid
/// `τ, 2τ, …, T` and evaluates the truncation bound there.
///
/// `f` must carry its seminorm; its `(k, β)` tags select the constant.
pub fn check_bound(
    f: &HolderFunction,
    alpha: f64,
    tau: f64,
    horizon: f64,
    cfg: &QuadratureConfig,
) -> Result<BoundCheck> {
    let seminorm = f
        .known_seminorm()
        .ok_or_else(|| invalid("bound check needs a known seminorm"))?;
    let grid = UniformGrid::covering(horizon, tau)?;
    let samples = SampledFunction::from_fn(grid, |t| f.eval(t))?;
    let scheme = l1_apply_all(&samples, alpha)?;
    let order = f.smoothness() - alpha;
    let tau_power = tau.powf(order);
    let per_node = (1..=grid.n_max())
        .into_par_iter()
        .map(|n| {
            let reference = caputo_reference(f, alpha, grid.node(n), cfg)?;
            let p = ErrorConstantParams::new(alpha, f.beta(), f.k(), n as u64)?;
            let bound = error_constant(&p)? * seminorm * tau_power;
            let observed = (reference.value - scheme[n - 1]).abs();
            Ok((observed, bound, reference.error_estimate))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut check = BoundCheck {
        alpha,
        k: f.k(),
        beta: f.beta(),
        tau,
        observed_max: 0.0,
        bound_max: 0.0,
        worst_ratio: 0.0,
        worst_excess: f64::NEG_INFINITY,
        oracle_error: 0.0,
    };
    for (observed, bound, err) in per_node {
        check.observed_max = check.observed_max.max(observed);
        check.bound_max = check.bound_max.max(bound);
        check.oracle_error = check.oracle_error.max(err);
        check.worst_excess = check.worst_excess.max(observed - bound);
        let ratio = if bound > 0.0 {
            observed / bound
        } else if observed == 0.0 {
            0.0
        } else {
            f64::INFINITY
        };
        check.worst_ratio = check.worst_ratio.max(ratio);
    }
    Ok(check)
}

/// Outcome of one (α, k + β) cell of a bound sweep.
#[derive(Debug, Clone, PartialEq)]
pub enum CellOutcome {
    /// `k + β ≤ α` (or `β ≤ α` with `k = 0`): the bound does not apply.
    Skipped {
        reason: String,
    },
    Checked(Vec<BoundCheck>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundCell {
    pub alpha: f64,
    pub spec: TestFunctionSpec,
    pub outcome: std::result::Result<CellOutcome, Error>,
}

/// Runs [`check_bound`] for every cell and each `τ = tau_base · 2^j`, `j = 0..levels`.
pub fn bound_sweep(
    alphas: &[f64],
    smoothness: &[f64],
    tau_base: f64,
    levels: u32,
    horizon: f64,
    cfg: &QuadratureConfig,
) -> Result<Vec<BoundCell>> {
    let mut cells = Vec::new();
    for &alpha in alphas {
        for &v in smoothness {
            let spec = TestFunctionSpec::from_smoothness(v)?;
            let applies = if spec.k() == 0 {
                spec.beta() > alpha
            } else {
                1.0 + spec.beta() > alpha
            };
            let outcome = if !applies {
                Ok(CellOutcome::Skipped {
                    reason: format!("k + beta = {v} does not exceed alpha = {alpha}"),
                })
            } else {
                let f = make_test_function(spec);
                (0..levels)
                    .map(|j| check_bound(&f, alpha, tau_base * f64::from(1u32 << j), horizon, cfg))
                    .collect::<Result<Vec<_>>>()
                    .map(CellOutcome::Checked)
            };
            cells.push(BoundCell { alpha, spec, outcome });
        }
    }
    Ok(cells)
}
