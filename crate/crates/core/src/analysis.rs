//! Truncation-error constants, interpolation bounds and convergence orders.

use crate::error::{check_alpha, invalid, Error, Result};
use crate::l1::{l1_apply_all, SampledFunction, UniformGrid};
use crate::special_fn::{gamma, riemann_zeta};
use crate::testbed::HolderFunction;

/// Differences below this are treated as zero when estimating an order.
pub const DEGENERATE_DIFFERENCE: f64 = 1e-14;

/// Index `(α, β, k, n)` of the truncation-error constant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErrorConstantParams {
    alpha: f64,
    beta: f64,
    k: u8,
    n: u64,
}

impl ErrorConstantParams {
    /// Valid when `k + β > α`, and additionally `β > α` for `k = 0`.
    pub fn new(alpha: f64, beta: f64, k: u8, n: u64) -> Result<Self> {
        check_alpha(alpha)?;
        if !(0.0..=1.0).contains(&beta) {
            return Err(invalid(format!("beta must lie in [0, 1], got {beta}")));
        }
        if k > 1 {
            return Err(invalid(format!("k must be 0 or 1, got {k}")));
        }
        if n == 0 {
            return Err(invalid("node index n must be at least 1"));
        }
        if k as f64 + beta <= alpha {
            return Err(invalid(format!(
                "bound needs k + beta > alpha, got k + beta = {}, alpha = {alpha}",
                k as f64 + beta
            )));
        }
        Ok(Self { alpha, beta, k, n })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn k(&self) -> u8 {
        self.k
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    /// The guaranteed order `k + β - α`.
    pub fn order(&self) -> f64 {
        self.k as f64 + self.beta - self.alpha
    }
}

/// `C_{α,β,k,n}`:
///
/// ```text
/// k = 0: (1 - n^{-α}) / (2^β Γ(1-α)) + α / (Γ(1-α)(β-α)(1+β-α)) + α Γ(1+β) / Γ(2+β-α)
/// k = 1: (1 - n^{-α}) / (4(β+1) Γ(1-α)) + α / Γ(3-α)
/// ```
pub fn error_constant(p: &ErrorConstantParams) -> Result<f64> {
    let ErrorConstantParams { alpha, beta, k, n } = *p;
    let g = gamma(1.0 - alpha)?;
    // 1 - n^{-α} without cancellation for small α
    let history = -(-alpha * (n as f64).ln()).exp_m1();
    if k == 0 {
        if beta <= alpha {
            return Err(invalid(format!(
                "k = 0 requires beta > alpha, got beta = {beta}, alpha = {alpha}"
            )));
        }
        let gap = beta - alpha;
        Ok(history / (2f64.powf(beta) * g)
            + alpha / (g * gap * (1.0 + gap))
            + alpha * gamma(1.0 + beta)? / gamma(2.0 + gap)?)
    } else {
        Ok(history / (4.0 * (beta + 1.0) * g) + alpha / gamma(3.0 - alpha)?)
    }
}

/// `C_{α,β,k,n} · seminorm · τ^{k+β-α}`.
pub fn truncation_bound(p: &ErrorConstantParams, tau: f64, seminorm: f64) -> Result<f64> {
    if !(tau > 0.0) {
        return Err(invalid(format!("tau must be positive, got {tau}")));
    }
    if !(seminorm >= 0.0) {
        return Err(invalid(format!("seminorm must be nonnegative, got {seminorm}")));
    }
    Ok(error_constant(p)? * seminorm * tau.powf(p.order()))
}

fn check_local(t: f64, t_j: f64, tau: f64) -> Result<()> {
    if !(tau > 0.0) {
        return Err(invalid(format!("tau must be positive, got {tau}")));
    }
    if !(t >= t_j && t < t_j + tau) {
        return Err(invalid(format!("t = {t} lies outside [{t_j}, {})", t_j + tau)));
    }
    Ok(())
}

/// Pointwise bound on `|I_τ y(t) - y(t)|` for `t ∈ [t_j, t_j + τ)`.
///
/// `weight` is the β-seminorm of `y^{(k)}` when `β > 0`, and `Λ_{y'}(τ)` for
/// `k = 1, β = 0`. The remaining case `k = 0, β = 0` needs the modulus at two
/// separations; use [`interpolation_bound_with_modulus`].
pub fn interpolation_bound(k: u8, beta: f64, t: f64, t_j: f64, tau: f64, weight: f64) -> Result<f64> {
    check_local(t, t_j, tau)?;
    if !(0.0..=1.0).contains(&beta) {
        return Err(invalid(format!("beta must lie in [0, 1], got {beta}")));
    }
    let left = t - t_j;
    let right = t_j + tau - t;
    match (k, beta == 0.0) {
        (0, true) => Err(invalid(
            "k = 0, beta = 0 needs a modulus of continuity; use interpolation_bound_with_modulus",
        )),
        (0, false) => Ok((left * right.powf(beta) + right * left.powf(beta)) * weight / tau),
        (1, true) => Ok(left * right * weight / tau),
        (1, false) => Ok(left * right * tau.powf(beta - 1.0) * weight / (beta + 1.0)),
        _ => Err(invalid(format!("k must be 0 or 1, got {k}"))),
    }
}

/// The `k = 0, β = 0` case: `((t - t_j) Λ(t_{j+1} - t) + (t_{j+1} - t) Λ(t - t_j)) / τ`.
pub fn interpolation_bound_with_modulus(t: f64, t_j: f64, tau: f64, modulus: impl Fn(f64) -> f64) -> Result<f64> {
    check_local(t, t_j, tau)?;
    let left = t - t_j;
    let right = t_j + tau - t;
    Ok((left * modulus(right) + right * modulus(left)) / tau)
}

/// Bound on `|D^α y(t)|` for `y ∈ C^{0,β}`, `β > α`:
/// `[y] (t^{β-α}/Γ(1-α) + α/Γ(1-α) · t^{β-α}/(β-α))`.
pub fn caputo_wellposed_bound(alpha: f64, beta: f64, t: f64, seminorm: f64) -> Result<f64> {
    check_alpha(alpha)?;
    if !(beta > alpha && beta <= 1.0) {
        return Err(invalid(format!("need alpha < beta <= 1, got beta = {beta}")));
    }
    if !(t > 0.0) {
        return Err(invalid(format!("t must be positive, got {t}")));
    }
    let g = gamma(1.0 - alpha)?;
    let tp = t.powf(beta - alpha);
    Ok(seminorm * (tp / g + alpha / g * tp / (beta - alpha)))
}

/// `-ζ(α - 1) / Γ(2 - α)`, the asymptotic optimal constant for `C^2` data.
pub fn asymptotic_optimal_constant(alpha: f64) -> Result<f64> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::Domain(format!("alpha must lie in (0, 1), got {alpha}")));
    }
    Ok(-riemann_zeta(alpha - 1.0)? / gamma(2.0 - alpha)?)
}

/// Empirical convergence order from three nested grids.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OrderEstimate {
    pub alpha: f64,
    pub k: u8,
    pub beta: f64,
    pub tau_base: f64,
    pub estimated_order: f64,
    /// `max |δ_τ - δ_{τ/2}|` and `max |δ_{τ/2} - δ_{τ/4}|`.
    pub max_diffs: (f64, f64),
}

/// `log2( max|δ_τ y - δ_{τ/2} y| / max|δ_{τ/2} y - δ_{τ/4} y| )`.
///
/// Each maximum runs over the nodes of the coarser grid of its pair, where
/// both schemes are defined.
pub fn estimate_order(f: &HolderFunction, alpha: f64, tau_base: f64, horizon: f64) -> Result<OrderEstimate> {
    check_alpha(alpha)?;
    if horizon > f.horizon() * (1.0 + 1e-12) {
        return Err(invalid(format!(
            "horizon {horizon} exceeds the function's domain {}",
            f.horizon()
        )));
    }
    let coarse = UniformGrid::covering(horizon, tau_base)?;
    let schemes = [1usize, 2, 4]
        .iter()
        .map(|&m| {
            let grid = coarse.refine(m);
            let samples = SampledFunction::from_fn(grid, |t| f.eval(t.min(horizon)))?;
            l1_apply_all(&samples, alpha)
        })
        .collect::<Result<Vec<_>>>()?;
    let max_diff = |coarse: &[f64], fine: &[f64]| {
        coarse
            .iter()
            .enumerate()
            .map(|(i, c)| (c - fine[2 * i + 1]).abs())
            .fold(0.0f64, f64::max)
    };
    let first = max_diff(&schemes[0], &schemes[1]);
    let second = max_diff(&schemes[1], &schemes[2]);
    for d in [first, second] {
        if !(d >= DEGENERATE_DIFFERENCE) {
            return Err(Error::DegenerateDifference { value: d });
        }
    }
    Ok(OrderEstimate {
        alpha,
        k: f.k(),
        beta: f.beta(),
        tau_base,
        estimated_order: (first / second).log2(),
        max_diffs: (first, second),
    })
}
