//! Reference values of the Caputo derivative.
//!
//! [`caputo_reference`] evaluates the derivative-free form
//!
//! ```text
//! D^α y(t) = (y(t) - y(0)) / (Γ(1-α) t^α)
//!          + α / Γ(1-α) ∫_0^t (y(t) - y(s)) / (t - s)^{1+α} ds
//! ```
//!
//! by quadrature. Near `s = t` the integrand behaves like `(t - s)^{γ-1-α}`
//! with `γ = 1` at smooth points and `γ = k + β` at a declared kink. The last
//! panel `[t - w, t]` is integrated with a Gauss–Jacobi rule carrying that
//! weight; `w` is halved until the tail agrees with its own refinement. The
//! rest of `[0, t - w]` is split at the kinks and at dyadic points
//! `t - 2^j w` and handed to a globally adaptive Gauss–Legendre bisection.
//!
//! [`caputo_of_interpolant`] applies the same formula to the piecewise-linear
//! interpolant, where every per-interval integral has a closed form.

use std::cell::RefCell;
use std::collections::BinaryHeap;
use std::num::NonZeroUsize;
use std::rc::Rc;

use gauss_quad::{FiniteAboveNegOneF64, GaussJacobi, GaussLegendre};

use crate::error::{check_alpha, invalid, Error, Result};
use crate::l1::SampledFunction;
use crate::special_fn::gamma;
use crate::testbed::HolderFunction;

/// Upper bound on adaptive panels in the smooth part before giving up.
const MAX_PANELS: usize = 20_000;

/// Multiplier on `eps · ∫ scale` used as the rounding floor of a panel sum.
const ROUNDOFF_FACTOR: f64 = 64.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureConfig {
    pub abs_tol: f64,
    pub rel_tol: f64,
    /// Number of tail halvings toward the singular endpoint.
    pub max_panel_depth: usize,
    pub nodes_per_panel: usize,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self {
            abs_tol: 1e-10,
            rel_tol: 1e-10,
            max_panel_depth: 52,
            nodes_per_panel: 16,
        }
    }
}

impl QuadratureConfig {
    pub fn with_tolerance(tol: f64) -> Self {
        Self {
            abs_tol: tol,
            rel_tol: tol,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.abs_tol > 0.0 && self.rel_tol > 0.0) {
            return Err(invalid("quadrature tolerances must be positive"));
        }
        if !(10..=60).contains(&self.max_panel_depth) {
            return Err(invalid(format!(
                "max_panel_depth must lie in [10, 60], got {}",
                self.max_panel_depth
            )));
        }
        if !(4..=64).contains(&self.nodes_per_panel) {
            return Err(invalid(format!(
                "nodes_per_panel must lie in [4, 64], got {}",
                self.nodes_per_panel
            )));
        }
        Ok(())
    }
}

/// A quadrature result with its estimated absolute error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CaputoEstimate {
    pub value: f64,
    pub error_estimate: f64,
}

thread_local! {
    static LEGENDRE: RefCell<Vec<(usize, Rc<GaussLegendre>)>> = const { RefCell::new(Vec::new()) };
    static JACOBI: RefCell<Vec<(usize, u64, Rc<GaussJacobi>)>> = const { RefCell::new(Vec::new()) };
}

fn legendre(nodes: usize) -> Rc<GaussLegendre> {
    LEGENDRE.with(|cache| {
        let mut cache = cache.borrow_mut();
        if let Some((_, rule)) = cache.iter().find(|(n, _)| *n == nodes) {
            return rule.clone();
        }
        let rule = Rc::new(GaussLegendre::new(NonZeroUsize::new(nodes).expect("validated")));
        cache.push((nodes, rule.clone()));
        rule
    })
}

/// Gauss–Jacobi rule for the weight `(1 - x)^exponent` on [-1, 1].
fn jacobi(nodes: usize, exponent: f64) -> Rc<GaussJacobi> {
    JACOBI.with(|cache| {
        let mut cache = cache.borrow_mut();
        let key = exponent.to_bits();
        if let Some((_, _, rule)) = cache.iter().find(|(n, e, _)| *n == nodes && *e == key) {
            return rule.clone();
        }
        let rule = Rc::new(GaussJacobi::new(
            NonZeroUsize::new(nodes).expect("validated"),
            FiniteAboveNegOneF64::new(exponent).expect("exponent above -1"),
            FiniteAboveNegOneF64::new(0.0).expect("zero"),
        ));
        if cache.len() > 64 {
            cache.remove(0);
        }
        cache.push((nodes, key, rule.clone()));
        rule
    })
}

struct Panel {
    a: f64,
    b: f64,
    value: f64,
    abs_value: f64,
    error: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}

impl Eq for Panel {}

impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Panel {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.error.total_cmp(&other.error)
    }
}

/// Integral of `f` over `[a, b]`, plus the same rule applied to the
/// magnitude `f` reports as the scale of its own rounding error.
fn gauss(rule: &GaussLegendre, a: f64, b: f64, f: &impl Fn(f64) -> (f64, f64)) -> (f64, f64) {
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    let (mut v, mut av) = (0.0, 0.0);
    for (x, w) in rule.iter() {
        let (fx, scale) = f(mid + half * x);
        v += w * fx;
        av += w * scale;
    }
    (v * half, av * half)
}

fn make_panel(rule: &GaussLegendre, a: f64, b: f64, f: &impl Fn(f64) -> (f64, f64)) -> Panel {
    let (whole, _) = gauss(rule, a, b, f);
    let m = 0.5 * (a + b);
    let (l, la) = gauss(rule, a, m, f);
    let (r, ra) = gauss(rule, m, b, f);
    Panel {
        a,
        b,
        value: l + r,
        abs_value: la + ra,
        error: (whole - (l + r)).abs(),
    }
}

/// Globally adaptive bisection over the given breakpoints; returns
/// (integral, error estimate).
fn adaptive(
    rule: &GaussLegendre,
    breaks: &[f64],
    f: &impl Fn(f64) -> (f64, f64),
    abs_tol: f64,
    rel_tol: f64,
) -> Result<(f64, f64)> {
    let mut heap: BinaryHeap<Panel> = breaks
        .windows(2)
        .filter(|w| w[1] > w[0])
        .map(|w| make_panel(rule, w[0], w[1], f))
        .collect();
    let mut panels = heap.len();
    loop {
        let (value, abs_value, error) = heap.iter().fold((0.0, 0.0, 0.0), |acc, p| {
            (acc.0 + p.value, acc.1 + p.abs_value, acc.2 + p.error)
        });
        let roundoff = ROUNDOFF_FACTOR * f64::EPSILON * abs_value;
        if error <= abs_tol.max(rel_tol * value.abs()) || error <= roundoff {
            return Ok((value, error + roundoff));
        }
        if panels >= MAX_PANELS {
            return Err(Error::NoConvergence(format!(
                "adaptive quadrature reached {MAX_PANELS} panels with error {error:e}"
            )));
        }
        let worst = heap.pop().expect("nonempty");
        let m = 0.5 * (worst.a + worst.b);
        if !(m > worst.a && m < worst.b) {
            return Err(Error::NoConvergence(format!(
                "panel [{}, {}] cannot be bisected further",
                worst.a, worst.b
            )));
        }
        heap.push(make_panel(rule, worst.a, m, f));
        heap.push(make_panel(rule, m, worst.b, f));
        panels += 1;
    }
}

/// `D^α f(t)` by quadrature, for `t ∈ (0, T]`.
///
/// Requires `k + β > α` on the tags of `f`; otherwise the derivative need not
/// exist and the call reports [`Error::NoConvergence`].
pub fn caputo_reference(f: &HolderFunction, alpha: f64, t: f64, cfg: &QuadratureConfig) -> Result<CaputoEstimate> {
    check_alpha(alpha)?;
    cfg.validate()?;
    if !(t > 0.0) {
        return Err(Error::Domain(format!("reference derivative needs t > 0, got {t}")));
    }
    if t > f.horizon() * (1.0 + 1e-12) {
        return Err(Error::OutOfDomain {
            value: t,
            lo: 0.0,
            hi: f.horizon(),
        });
    }
    if f.smoothness() <= alpha {
        return Err(Error::NoConvergence(format!(
            "k + beta = {} does not exceed alpha = {alpha}; the derivative need not exist",
            f.smoothness()
        )));
    }

    let gamma_1ma = gamma(1.0 - alpha)?;
    let yt = f.eval(t);
    let boundary = (yt - f.eval(0.0)) / (gamma_1ma * t.powf(alpha));
    let coeff = alpha / gamma_1ma;
    let int_abs_tol = 0.5 * cfg.abs_tol / coeff;
    let int_rel_tol = 0.5 * cfg.rel_tol;

    let kink_eps = 1e-13 * f.horizon();
    let at_kink = f.kinks().iter().any(|&c| (c - t).abs() <= kink_eps);
    let below = f
        .kinks()
        .iter()
        .copied()
        .filter(|&c| c < t - kink_eps)
        .fold(f64::NEG_INFINITY, f64::max);
    let gamma_tail = if at_kink { f.smoothness() } else { 1.0 };
    let exponent = gamma_tail - 1.0 - alpha;

    let n = cfg.nodes_per_panel;
    let gl = legendre(n);
    let gj = jacobi(n, exponent);
    // y(t) - y(s) cancels for s near t; the rounding error of the
    // numerator scales with |y(t)| + |y(s)|, reported alongside the value.
    let integrand = |s: f64| {
        let x = t - s;
        if x <= 0.0 {
            (0.0, 0.0)
        } else {
            let ys = f.eval(s);
            let d = x.powf(1.0 + alpha);
            ((yt - ys) / d, (yt.abs() + ys.abs()) / d)
        }
    };
    // ∫_{t-w}^t with the singular factor moved into the Jacobi weight
    let tail = |w: f64| {
        let scale = (0.5 * w).powf(exponent);
        let mut value = 0.0;
        let mut noise = 0.0;
        for (x, wt) in gj.iter() {
            let s = t - 0.5 * w * (1.0 - x);
            let r = t - s;
            if r > 0.0 {
                let ys = f.eval(s);
                let d = r.powf(gamma_tail);
                value += wt * (yt - ys) / d;
                noise += wt * (yt.abs() + ys.abs()) / d;
            }
        }
        let half = 0.5 * w;
        (
            scale * half * value,
            ROUNDOFF_FACTOR * f64::EPSILON * scale * half * noise,
        )
    };

    let mut w = 0.5 * t.min(t - below);
    let (mut tail_value, mut tail_noise) = tail(w);
    let mut tail_error = f64::INFINITY;
    for _ in 0..cfg.max_panel_depth {
        let (mid, mid_scale) = gauss(&gl, t - w, t - 0.5 * w, &integrand);
        let (inner, inner_noise) = tail(0.5 * w);
        let refined = inner + mid;
        let diff = (refined - tail_value).abs();
        let noise = tail_noise + inner_noise + ROUNDOFF_FACTOR * f64::EPSILON * mid_scale;
        if diff <= (0.5 * int_abs_tol).max(noise) {
            // keep the coarse panel; `diff` bounds its error
            tail_error = diff.max(tail_noise);
            break;
        }
        w *= 0.5;
        (tail_value, tail_noise) = tail(w);
    }
    let cut = t - w;
    let mut breaks = vec![0.0, cut];
    breaks.extend(f.kinks().iter().copied().filter(|&c| c > 0.0 && c < cut));
    let mut p = cut - 2.0 * w;
    let mut step = 2.0 * w;
    while p > 0.5 * cut.min(t - below) {
        breaks.push(p);
        step *= 2.0;
        p = cut - step;
    }
    breaks.sort_by(f64::total_cmp);
    breaks.dedup();
    let (body, body_error) = adaptive(&gl, &breaks, &integrand, int_abs_tol, int_rel_tol)?;

    let value = boundary + coeff * (body + tail_value);
    let error_estimate = coeff * (body_error + tail_error) + 4.0 * f64::EPSILON * value.abs();
    Ok(CaputoEstimate { value, error_estimate })
}

/// `D^α (I_τ y)(t_n)`, the Caputo derivative of the piecewise-linear
/// interpolant, assembled from exact per-interval antiderivatives.
pub fn caputo_of_interpolant(samples: &SampledFunction, alpha: f64, n: usize) -> Result<f64> {
    check_alpha(alpha)?;
    let grid = samples.grid();
    if n == 0 || n > grid.n_max() {
        return Err(invalid(format!(
            "node index must lie in [1, {}], got {n}",
            grid.n_max()
        )));
    }
    let tau = grid.tau();
    let y = samples.values();
    let yn = y[n];
    let gamma_1ma = gamma(1.0 - alpha)?;
    let tn = grid.node(n);
    let boundary = (yn - y[0]) / (gamma_1ma * tn.powf(alpha));

    // x = t_n - s; interval j spans x ∈ [(n-j-1)τ, (n-j)τ] and there
    // y_n - I(s) = c_j + m_j x.
    let p = 1.0 - alpha;
    let mut integral = 0.0;
    for j in 0..n {
        let slope = (y[j + 1] - y[j]) / tau;
        let x_far = (n - j) as f64 * tau;
        let x_near = (n - j - 1) as f64 * tau;
        let linear = slope * (x_far.powf(p) - x_near.powf(p)) / p;
        let constant = if j + 1 == n {
            0.0
        } else {
            let c = yn - y[j + 1] - slope * x_near;
            c * (x_near.powf(-alpha) - x_far.powf(-alpha)) / alpha
        };
        integral += linear + constant;
    }
    Ok(boundary + alpha / gamma_1ma * integral)
}
