//! Hölder test functions and empirical smoothness estimators.

use std::fmt;
use std::sync::Arc;

use crate::error::{invalid, Result};

pub type RealFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// An evaluable function on `[0, horizon]` tagged with a smoothness class
/// `C^{k,β}`.
///
/// `kinks` lists points where the function (or its derivative) is not smooth;
/// quadrature and the estimators below split or sample at them.
#[derive(Clone)]
pub struct HolderFunction {
    eval: RealFn,
    derivative: Option<RealFn>,
    k: u8,
    beta: f64,
    horizon: f64,
    known_seminorm: Option<f64>,
    kinks: Vec<f64>,
}

impl fmt::Debug for HolderFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("HolderFunction")
            .field("k", &self.k)
            .field("beta", &self.beta)
            .field("horizon", &self.horizon)
            .field("known_seminorm", &self.known_seminorm)
            .field("kinks", &self.kinks)
            .field("has_derivative", &self.derivative.is_some())
            .finish()
    }
}

impl HolderFunction {
    pub fn new<F>(eval: F, k: u8, beta: f64, horizon: f64) -> Result<Self>
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        if k > 1 {
            return Err(invalid(format!("k must be 0 or 1, got {k}")));
        }
        if !(0.0..=1.0).contains(&beta) {
            return Err(invalid(format!("beta must lie in [0, 1], got {beta}")));
        }
        if k == 0 && beta == 0.0 {
            return Err(invalid("k + beta must be positive"));
        }
        if !(horizon > 0.0 && horizon.is_finite()) {
            return Err(invalid(format!("horizon must be positive, got {horizon}")));
        }
        Ok(Self {
            eval: Arc::new(eval),
            derivative: None,
            k,
            beta,
            horizon,
            known_seminorm: None,
            kinks: Vec::new(),
        })
    }

    /// A constant function, smooth in every class; its seminorm is zero.
    pub fn constant(value: f64, horizon: f64) -> Result<Self> {
        Self::new(move |_| value, 1, 1.0, horizon)?
            .with_derivative(|_| 0.0)
            .with_known_seminorm(0.0)
    }

    pub fn with_derivative<F>(mut self, derivative: F) -> Self
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        self.derivative = Some(Arc::new(derivative));
        self
    }

    /// Seminorm `[f^{(k)}]_{C^{0,β}}` when it is known analytically.
    pub fn with_known_seminorm(mut self, seminorm: f64) -> Result<Self> {
        if !(seminorm >= 0.0) {
            return Err(invalid(format!("seminorm must be nonnegative, got {seminorm}")));
        }
        self.known_seminorm = Some(seminorm);
        Ok(self)
    }

    pub fn with_kinks(mut self, mut kinks: Vec<f64>) -> Self {
        kinks.retain(|&c| c > 0.0 && c < self.horizon);
        kinks.sort_by(f64::total_cmp);
        kinks.dedup();
        self.kinks = kinks;
        self
    }

    #[inline]
    pub fn eval(&self, t: f64) -> f64 {
        (self.eval)(t)
    }

    pub fn derivative(&self, t: f64) -> Option<f64> {
        self.derivative.as_ref().map(|d| d(t))
    }

    /// The first derivative as a `C^{0,β}` function, when one was supplied.
    pub fn derivative_function(&self) -> Option<HolderFunction> {
        let d = self.derivative.clone()?;
        Some(HolderFunction {
            eval: d,
            derivative: None,
            k: 0,
            beta: if self.k == 1 { self.beta } else { 1.0 },
            horizon: self.horizon,
            known_seminorm: if self.k == 1 { self.known_seminorm } else { None },
            kinks: self.kinks.clone(),
        })
    }

    pub fn k(&self) -> u8 {
        self.k
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    /// `k + β`, the order of the smoothness class.
    pub fn smoothness(&self) -> f64 {
        self.k as f64 + self.beta
    }

    pub fn horizon(&self) -> f64 {
        self.horizon
    }

    pub fn known_seminorm(&self) -> Option<f64> {
        self.known_seminorm
    }

    pub fn kinks(&self) -> &[f64] {
        &self.kinks
    }
}

/// Parameters `(k, β)` of the test family `y(t) = (t - 1/2)^k |t - 1/2|^β`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TestFunctionSpec {
    k: u8,
    beta: f64,
}

impl TestFunctionSpec {
    pub fn new(k: u8, beta: f64) -> Result<Self> {
        if k > 1 {
            return Err(invalid(format!("k must be 0 or 1, got {k}")));
        }
        if !(beta > 0.0 && beta <= 1.0) {
            return Err(invalid(format!("beta must lie in (0, 1], got {beta}")));
        }
        Ok(Self { k, beta })
    }

    /// Maps a single smoothness value `v = k + β ∈ (0, 2]` onto `(k, β)`:
    /// `(0, v)` for `v ≤ 1` and `(1, v - 1)` above.
    pub fn from_smoothness(v: f64) -> Result<Self> {
        if !(v > 0.0 && v <= 2.0) {
            return Err(invalid(format!("k + beta must lie in (0, 2], got {v}")));
        }
        if v <= 1.0 {
            Self::new(0, v)
        } else {
            // strip the representation error of e.g. 1.3 - 1
            let beta = ((v - 1.0) * 1e12).round() / 1e12;
            Self::new(1, beta)
        }
    }

    pub fn k(&self) -> u8 {
        self.k
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }
}

/// `(t - 1/2)^k |t - 1/2|^β`.
pub fn y_test(spec: TestFunctionSpec, t: f64) -> f64 {
    let x = t - 0.5;
    let base = x.abs().powf(spec.beta);
    if spec.k == 1 {
        x * base
    } else {
        base
    }
}

/// The test function as a [`HolderFunction`] on `[0, 1]` with its kink at 1/2.
///
/// Known seminorms: 1 for `k = 0`; for `k = 1` the derivative is
/// `(1 + β)|t - 1/2|^β`, whose β-seminorm is `1 + β`.
pub fn make_test_function(spec: TestFunctionSpec) -> HolderFunction {
    let seminorm = if spec.k == 0 { 1.0 } else { 1.0 + spec.beta };
    let f = HolderFunction {
        eval: Arc::new(move |t| y_test(spec, t)),
        derivative: None,
        k: spec.k,
        beta: spec.beta,
        horizon: 1.0,
        known_seminorm: Some(seminorm),
        kinks: vec![0.5],
    };
    if spec.k == 1 {
        let beta = spec.beta;
        f.with_derivative(move |t| (1.0 + beta) * (t - 0.5).abs().powf(beta))
    } else {
        f
    }
}

/// Lower estimate of the modulus of continuity
/// `Λ_f(δ) = sup_{|t - s| ≤ δ} |f(t) - f(s)|` on `[0, horizon]`.
///
/// Pairs are drawn from a uniform grid of spacing `δ / samples_per_interval`
/// together with pairs straddling each declared kink.
pub fn modulus_of_continuity(f: &HolderFunction, delta: f64, samples_per_interval: usize) -> Result<f64> {
    if !(delta > 0.0) {
        return Err(invalid(format!("delta must be positive, got {delta}")));
    }
    if samples_per_interval < 2 {
        return Err(invalid("samples_per_interval must be at least 2"));
    }
    let horizon = f.horizon();
    let delta = delta.min(horizon);
    let h = delta / samples_per_interval as f64;
    let count = (horizon / h).floor() as usize;
    let values: Vec<f64> = (0..=count).map(|i| f.eval((i as f64 * h).min(horizon))).collect();
    let mut best = 0.0f64;
    for i in 0..values.len() {
        let end = (i + samples_per_interval).min(values.len() - 1);
        for j in i + 1..=end {
            best = best.max((values[i] - values[j]).abs());
        }
    }
    let mut anchors = f.kinks.clone();
    anchors.extend([0.0, horizon]);
    for &c in &anchors {
        let fc = f.eval(c);
        for s in [c - delta, c + delta] {
            if (0.0..=horizon).contains(&s) {
                best = best.max((fc - f.eval(s)).abs());
            }
        }
        for j in 0..=samples_per_interval {
            let left = (c - delta * j as f64 / samples_per_interval as f64).max(0.0);
            let right = (left + delta).min(horizon);
            best = best.max((f.eval(left) - f.eval(right)).abs());
        }
    }
    Ok(best)
}

/// Lower estimate of the Hölder seminorm
/// `[f]_{C^{0,β}} = sup_{t ≠ s} |f(t) - f(s)| / |t - s|^β`.
///
/// Combines all pairs of a `pair_samples`-point uniform grid with
/// geometrically shrinking separations `2^{-j}` (j ≤ 40) anchored at each
/// kink and at the interval ends.
pub fn holder_seminorm(f: &HolderFunction, beta: f64, pair_samples: usize) -> Result<f64> {
    if !(beta > 0.0 && beta <= 1.0) {
        return Err(invalid(format!("beta must lie in (0, 1], got {beta}")));
    }
    if pair_samples < 2 {
        return Err(invalid("pair_samples must be at least 2"));
    }
    let horizon = f.horizon();
    let h = horizon / (pair_samples - 1) as f64;
    let grid: Vec<f64> = (0..pair_samples).map(|i| i as f64 * h).collect();
    let values: Vec<f64> = grid.iter().map(|&t| f.eval(t)).collect();
    // powf of every separation is the hot part; separations on the grid are i*h
    let sep_pow: Vec<f64> = (0..pair_samples).map(|d| (d as f64 * h).powf(beta)).collect();
    let mut best = 0.0f64;
    for i in 0..pair_samples {
        for j in i + 1..pair_samples {
            best = best.max((values[i] - values[j]).abs() / sep_pow[j - i]);
        }
    }
    let quotient = |a: f64, b: f64| {
        if a == b || !(0.0..=horizon).contains(&a) || !(0.0..=horizon).contains(&b) {
            0.0
        } else {
            (f.eval(a) - f.eval(b)).abs() / (a - b).abs().powf(beta)
        }
    };
    let mut anchors = f.kinks.clone();
    anchors.extend([0.0, horizon]);
    for &c in &anchors {
        for j in 0..=40 {
            let sep = horizon * 0.5f64.powi(j);
            best = best
                .max(quotient(c, c + sep))
                .max(quotient(c, c - sep))
                .max(quotient(c - sep / 2.0, c + sep / 2.0))
                .max(quotient(c + sep, c + 2.0 * sep))
                .max(quotient(c - sep, c - 2.0 * sep));
        }
    }
    Ok(best)
}
