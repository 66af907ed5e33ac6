//! Gauss–Legendre rules, composite panel rules on an interval and
//! per-panel polynomial interpolation of sampled data.

use crate::error::{Error, Result};
use std::f64::consts::PI;

/// `(P_n(x), P_n'(x))` by the three-term recurrence.
pub fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    if n == 0 {
        return (1.0, 0.0);
    }
    let (mut p0, mut p1) = (1.0, x);
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let nf = n as f64;
    let dp = if (1.0 - x * x).abs() < 1e-300 {
        // endpoint limit P_n'(+-1) = (+-1)^{n+1} n(n+1)/2
        x.signum().powi(n as i32 + 1) * nf * (nf + 1.0) / 2.0
    } else {
        nf * (p0 - x * p1) / (1.0 - x * x)
    };
    (p1, dp)
}

pub fn legendre(n: usize, x: f64) -> f64 {
    legendre_with_derivative(n, x).0
}

/// `n`-point Gauss–Legendre rule on `[-1, 1]`, nodes increasing.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        // Tricomi initial guess, then Newton
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        for _ in 0..100 {
            let (p, dp) = legendre_with_derivative(n, x);
            let dx = p / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, dp) = legendre_with_derivative(n, x);
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[n - 1 - i] = x;
        nodes[i] = -x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    (nodes, weights)
}

/// Barycentric weights for the given abscissae.
pub fn barycentric_weights(xs: &[f64]) -> Vec<f64> {
    let mut w = vec![1.0; xs.len()];
    for (j, wj) in w.iter_mut().enumerate() {
        for (k, &xk) in xs.iter().enumerate() {
            if k != j {
                *wj /= xs[j] - xk;
            }
        }
    }
    w
}

/// Second-form barycentric interpolation; exact at the abscissae.
pub fn barycentric_eval<T>(xs: &[f64], bw: &[f64], values: &[T], x: f64) -> T
where
    T: Copy + std::ops::Mul<f64, Output = T> + std::ops::Add<Output = T> + std::ops::Div<f64, Output = T>,
{
    let mut num: Option<T> = None;
    let mut den = 0.0;
    for ((&xk, &wk), &vk) in xs.iter().zip(bw).zip(values) {
        let d = x - xk;
        if d == 0.0 {
            return vk;
        }
        let c = wk / d;
        num = Some(match num {
            Some(acc) => acc + vk * c,
            None => vk * c,
        });
        den += c;
    }
    num.expect("non-empty abscissae") / den
}

/// Row-major `n x n` matrix `S[j][k] = ∫_{-1}^{x_j} l_k(t) dt` for the Lagrange
/// basis `l_k` on the abscissae `xs` in `[-1, 1]`.
pub fn cumulative_weights(xs: &[f64]) -> Vec<f64> {
    let n = xs.len();
    let bw = barycentric_weights(xs);
    let (gx, gw) = gauss_legendre(n);
    let mut s = vec![0.0; n * n];
    for (j, &xj) in xs.iter().enumerate() {
        let (mid, half) = (0.5 * (xj - 1.0), 0.5 * (xj + 1.0));
        for (&t, &w) in gx.iter().zip(&gw) {
            let tau = mid + half * t;
            let c: Vec<f64> = xs.iter().zip(&bw).map(|(&xk, &bk)| bk / (tau - xk)).collect();
            let den: f64 = c.iter().sum();
            for k in 0..n {
                s[j * n + k] += half * w * c[k] / den;
            }
        }
    }
    s
}

/// Composite Gauss–Legendre rule: `panels` equal panels of
/// `points_per_panel` nodes each on `[a, b]`.
#[derive(Debug, Clone, PartialEq)]
pub struct CompositeRule {
    pub a: f64,
    pub b: f64,
    pub panels: usize,
    pub points_per_panel: usize,
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    /// reference nodes on `[-1, 1]` and their barycentric weights
    ref_nodes: Vec<f64>,
    ref_weights: Vec<f64>,
    ref_bary: Vec<f64>,
    ref_cumulative: Vec<f64>,
}

impl CompositeRule {
    pub fn new(a: f64, b: f64, panels: usize, points_per_panel: usize) -> Result<Self> {
        if !(b > a) || !a.is_finite() || !b.is_finite() {
            return Err(Error::Invalid(format!("empty interval [{a}, {b}]")));
        }
        if panels == 0 || points_per_panel == 0 {
            return Err(Error::Invalid("composite rule needs at least one node".into()));
        }
        let (rn, rw) = gauss_legendre(points_per_panel);
        let h = (b - a) / panels as f64;
        let mut nodes = Vec::with_capacity(panels * points_per_panel);
        let mut weights = Vec::with_capacity(panels * points_per_panel);
        for p in 0..panels {
            let lo = a + h * p as f64;
            let mid = lo + 0.5 * h;
            for (&x, &w) in rn.iter().zip(&rw) {
                nodes.push(mid + 0.5 * h * x);
                weights.push(0.5 * h * w);
            }
        }
        let ref_bary = barycentric_weights(&rn);
        let ref_cumulative = cumulative_weights(&rn);
        Ok(CompositeRule {
            a,
            b,
            panels,
            points_per_panel,
            nodes,
            weights,
            ref_nodes: rn,
            ref_weights: rw,
            ref_bary,
            ref_cumulative,
        })
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn panel_width(&self) -> f64 {
        (self.b - self.a) / self.panels as f64
    }

    pub fn panel_bounds(&self, p: usize) -> (f64, f64) {
        let h = self.panel_width();
        let lo = self.a + h * p as f64;
        (lo, if p + 1 == self.panels { self.b } else { lo + h })
    }

    /// Panel containing `x` (clamped to the interval).
    pub fn panel_of(&self, x: f64) -> usize {
        let p = ((x - self.a) / self.panel_width()).floor();
        (p.max(0.0) as usize).min(self.panels - 1)
    }

    /// Node range of panel `p`.
    pub fn panel_nodes(&self, p: usize) -> std::ops::Range<usize> {
        p * self.points_per_panel..(p + 1) * self.points_per_panel
    }

    pub fn integrate<F: Fn(f64) -> f64>(&self, f: F) -> f64 {
        self.nodes.iter().zip(&self.weights).map(|(&x, &w)| w * f(x)).sum()
    }

    /// Polynomial interpolant of node samples on the panel containing `x`.
    pub fn interpolate<T>(&self, values: &[T], x: f64) -> T
    where
        T: Copy + std::ops::Mul<f64, Output = T> + std::ops::Add<Output = T> + std::ops::Div<f64, Output = T>,
    {
        let p = self.panel_of(x);
        let (lo, hi) = self.panel_bounds(p);
        let t = (2.0 * x - lo - hi) / (hi - lo);
        barycentric_eval(&self.ref_nodes, &self.ref_bary, &values[self.panel_nodes(p)], t)
    }

    /// Weights `c_k` with `∫_{lo}^{x_j} g ≈ Σ_k c_k g(x_k)` over the nodes of
    /// the panel that holds node `x_j`; `j` is the index within the panel.
    pub fn left_partial_weights(&self, j: usize) -> impl Iterator<Item = f64> + '_ {
        let n = self.points_per_panel;
        let half = 0.5 * self.panel_width();
        self.ref_cumulative[j * n..(j + 1) * n].iter().map(move |&c| half * c)
    }

    /// As [`Self::left_partial_weights`] for `∫_{x_j}^{hi}`.
    pub fn right_partial_weights(&self, j: usize) -> impl Iterator<Item = f64> + '_ {
        let n = self.points_per_panel;
        let half = 0.5 * self.panel_width();
        self.ref_cumulative[j * n..(j + 1) * n]
            .iter()
            .zip(&self.ref_weights)
            .map(move |(&c, &w)| half * (w - c))
    }

    /// Gauss–Legendre rule with the per-panel node count on `[lo, hi]`.
    pub fn sub_rule(&self, lo: f64, hi: f64) -> impl Iterator<Item = (f64, f64)> + '_ {
        let mid = 0.5 * (lo + hi);
        let half = 0.5 * (hi - lo);
        self.ref_nodes.iter().zip(&self.ref_weights).map(move |(&x, &w)| (mid + half * x, half * w))
    }
}
