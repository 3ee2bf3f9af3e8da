//! The L1 scheme on a uniform grid.
//!
//! The scheme is evaluated in difference form,
//!
//! ```text
//! δ^α_τ y(t_n) = τ^{-α} / Γ(2-α) · Σ_{j=0}^{n-1} b_j (y(t_{n-j}) - y(t_{n-j-1})),
//! b_j = (j+1)^{1-α} - j^{1-α},
//! ```
//!
//! which is the Caputo derivative of the piecewise-linear interpolant of the
//! samples evaluated at `t_n`.

use rayon::prelude::*;

use crate::error::{check_alpha, invalid, Error, Result};
use crate::special_fn::gamma;

/// Nodes `t_n = n τ` for `n = 0..=n_max`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UniformGrid {
    tau: f64,
    n_max: usize,
}

impl UniformGrid {
    pub fn new(tau: f64, n_max: usize) -> Result<Self> {
        if !(tau > 0.0 && tau.is_finite()) {
            return Err(invalid(format!("tau must be positive, got {tau}")));
        }
        if n_max == 0 {
            return Err(invalid("grid needs at least one step"));
        }
        Ok(Self { tau, n_max })
    }

    /// Grid covering `[0, horizon]` with step `tau`; `horizon / tau` must be
    /// an integer up to a relative 1e-9.
    pub fn covering(horizon: f64, tau: f64) -> Result<Self> {
        if !(horizon > 0.0 && tau > 0.0) {
            return Err(invalid("horizon and tau must be positive"));
        }
        let steps = horizon / tau;
        let n = steps.round();
        if n < 1.0 || (steps - n).abs() > 1e-9 * steps {
            return Err(invalid(format!(
                "tau = {tau} does not divide the horizon {horizon} into whole steps"
            )));
        }
        Self::new(tau, n as usize)
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    pub fn horizon(&self) -> f64 {
        self.n_max as f64 * self.tau
    }

    #[inline]
    pub fn node(&self, n: usize) -> f64 {
        n as f64 * self.tau
    }

    /// The grid with step `tau / factor` over the same horizon.
    pub fn refine(&self, factor: usize) -> Self {
        Self {
            tau: self.tau / factor as f64,
            n_max: self.n_max * factor,
        }
    }
}

/// The L1 weights `b_0, …, b_{count-1}` for a fixed order α.
#[derive(Debug, Clone, PartialEq)]
pub struct L1Weights {
    alpha: f64,
    b: Vec<f64>,
}

impl L1Weights {
    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.b
    }

    pub fn len(&self) -> usize {
        self.b.len()
    }

    pub fn is_empty(&self) -> bool {
        self.b.is_empty()
    }
}

impl std::ops::Index<usize> for L1Weights {
    type Output = f64;

    fn index(&self, i: usize) -> &f64 {
        &self.b[i]
    }
}

/// `b_i = (i+1)^{1-α} - i^{1-α}` for `i < count`.
pub fn weights(alpha: f64, count: usize) -> Result<L1Weights> {
    check_alpha(alpha)?;
    if count == 0 {
        return Err(invalid("weight count must be at least 1"));
    }
    let p = 1.0 - alpha;
    let b = (0..count)
        .map(|i| {
            if i == 0 {
                1.0
            } else {
                // i^p ((1 + 1/i)^p - 1) keeps full relative precision for large i
                let x = i as f64;
                x.powf(p) * (p * (1.0 / x).ln_1p()).exp_m1()
            }
        })
        .collect();
    Ok(L1Weights { alpha, b })
}

/// Function values `y(t_0), …, y(t_{n_max})` on a [`UniformGrid`].
#[derive(Debug, Clone, PartialEq)]
pub struct SampledFunction {
    grid: UniformGrid,
    values: Vec<f64>,
}

impl SampledFunction {
    pub fn new(grid: UniformGrid, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.n_max() + 1 {
            return Err(invalid(format!(
                "expected {} samples, got {}",
                grid.n_max() + 1,
                values.len()
            )));
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(invalid(format!("sample {i} is not finite")));
        }
        Ok(Self { grid, values })
    }

    pub fn from_fn(grid: UniformGrid, f: impl Fn(f64) -> f64) -> Result<Self> {
        let values = (0..=grid.n_max()).map(|n| f(grid.node(n))).collect();
        Self::new(grid, values)
    }

    pub fn grid(&self) -> &UniformGrid {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    fn increments(&self) -> Vec<f64> {
        self.values.windows(2).map(|w| w[1] - w[0]).collect()
    }
}

fn scale(alpha: f64, tau: f64) -> Result<f64> {
    Ok(tau.powf(-alpha) / gamma(2.0 - alpha)?)
}

/// Σ_{j<n} b_j Δ_{n-1-j}, with Δ_m = y_{m+1} - y_m.
#[inline]
fn history_sum(b: &[f64], increments: &[f64], n: usize) -> f64 {
    b[..n]
        .iter()
        .zip(increments[..n].iter().rev())
        .map(|(w, d)| w * d)
        .sum()
}

fn check_node(samples: &SampledFunction, n: usize) -> Result<()> {
    if n == 0 || n > samples.grid.n_max() {
        Err(invalid(format!(
            "node index must lie in [1, {}], got {n}",
            samples.grid.n_max()
        )))
    } else {
        Ok(())
    }
}

/// `δ^α_τ y(t_n)` for `1 ≤ n ≤ n_max`.
pub fn l1_apply(samples: &SampledFunction, alpha: f64, n: usize) -> Result<f64> {
    check_alpha(alpha)?;
    check_node(samples, n)?;
    let b = weights(alpha, n)?;
    let increments = samples.increments();
    Ok(history_sum(&b.b, &increments, n) * scale(alpha, samples.grid.tau())?)
}

/// `δ^α_τ y(t_n)` for every `n = 1..=n_max`; entry `n - 1` belongs to `t_n`.
///
/// Direct O(N²) evaluation, bit-for-bit equal to calling [`l1_apply`] per node.
pub fn l1_apply_all(samples: &SampledFunction, alpha: f64) -> Result<Vec<f64>> {
    check_alpha(alpha)?;
    let n_max = samples.grid.n_max();
    let b = weights(alpha, n_max)?;
    let increments = samples.increments();
    let c = scale(alpha, samples.grid.tau())?;
    Ok((1..=n_max)
        .into_par_iter()
        .map(|n| history_sum(&b.b, &increments, n) * c)
        .collect())
}

/// Piecewise-linear interpolant of the samples at `t ∈ [0, T]`.
pub fn interpolate(samples: &SampledFunction, t: f64) -> Result<f64> {
    let grid = samples.grid;
    let horizon = grid.horizon();
    if !(0.0..=horizon).contains(&t) {
        return Err(Error::OutOfDomain {
            value: t,
            lo: 0.0,
            hi: horizon,
        });
    }
    let tau = grid.tau();
    let j = ((t / tau).floor() as usize).min(grid.n_max() - 1);
    let left = grid.node(j);
    let offset = t - left;
    if offset == 0.0 {
        return Ok(samples.values[j]);
    }
    let right = grid.node(j + 1);
    let v = &samples.values;
    Ok((offset * v[j + 1] + (right - t) * v[j]) / tau)
}
