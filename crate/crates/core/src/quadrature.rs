//! Cumulative time integrals on (possibly nonuniform) sample grids.
//!
//! Each interval `[t_i, t_{i+1}]` is integrated with the cubic through the
//! four nearest samples (two-point Gauss-Legendre on the interpolant, exact
//! for cubics), giving fourth-order accuracy on smooth integrands. Where the
//! cubic would produce a negative contribution between nonnegative samples,
//! the interval falls back to the trapezoid rule so that integrals of
//! nonnegative data stay nondecreasing.

/// `out[i] = ∫_{t_0}^{t_i} g(t) dt` from samples `values[i] = g(t_i)`.
pub fn cumulative(times: &[f64], values: &[f64]) -> Vec<f64> {
    assert_eq!(times.len(), values.len());
    let n = times.len();
    let mut out = vec![0.0; n];
    for i in 0..n.saturating_sub(1) {
        out[i + 1] = out[i] + interval(times, values, i);
    }
    out
}

/// `∫_{t_0}^{t_last} g(t) dt`.
pub fn integral(times: &[f64], values: &[f64]) -> f64 {
    cumulative(times, values).last().copied().unwrap_or(0.0)
}

/// Trapezoid-rule cumulative integral, kept for comparison.
pub fn cumulative_trapezoid(times: &[f64], values: &[f64]) -> Vec<f64> {
    assert_eq!(times.len(), values.len());
    let mut out = vec![0.0; times.len()];
    for i in 1..times.len() {
        out[i] = out[i - 1] + 0.5 * (times[i] - times[i - 1]) * (values[i] + values[i - 1]);
    }
    out
}

fn interval(t: &[f64], g: &[f64], i: usize) -> f64 {
    let (a, b) = (t[i], t[i + 1]);
    let h = b - a;
    let trapezoid = 0.5 * h * (g[i] + g[i + 1]);
    let n = t.len();
    if n < 4 {
        return trapezoid;
    }
    let start = i.saturating_sub(1).min(n - 4);
    let nodes = &t[start..start + 4];
    let vals = &g[start..start + 4];
    let r = 0.5 / 3f64.sqrt();
    let mid = 0.5 * (a + b);
    let cubic = 0.5 * h * (lagrange(nodes, vals, mid - r * h) + lagrange(nodes, vals, mid + r * h));
    if cubic < 0.0 && g[i] >= 0.0 && g[i + 1] >= 0.0 {
        trapezoid
    } else {
        cubic
    }
}

fn lagrange(nodes: &[f64], vals: &[f64], x: f64) -> f64 {
    let mut sum = 0.0;
    for (j, (&xj, &yj)) in nodes.iter().zip(vals).enumerate() {
        let mut w = 1.0;
        for (m, &xm) in nodes.iter().enumerate() {
            if m != j {
                w *= (x - xm) / (xj - xm);
            }
        }
        sum += w * yj;
    }
    sum
}

/// Cubic (four-point Lagrange) interpolation weights for evaluating a
/// sampled signal at `t`: returns the stencil start and weights.
///
/// Falls back to fewer points when the grid is short. `t` outside the grid is
/// clamped to the end samples.
pub fn cubic_stencil(times: &[f64], t: f64) -> (usize, [f64; 4], usize) {
    let n = times.len();
    assert!(n > 0);
    if n == 1 || t <= times[0] {
        return (0, [1.0, 0.0, 0.0, 0.0], 1);
    }
    if t >= times[n - 1] {
        return (n - 1, [1.0, 0.0, 0.0, 0.0], 1);
    }
    let i = locate(times, t);
    let width = n.min(4);
    let start = i.saturating_sub(1).min(n - width);
    let nodes = &times[start..start + width];
    let mut w = [0.0; 4];
    for j in 0..width {
        let mut wj = 1.0;
        for m in 0..width {
            if m != j {
                wj *= (t - nodes[m]) / (nodes[j] - nodes[m]);
            }
        }
        w[j] = wj;
    }
    (start, w, width)
}

/// Linear interpolation weights: `(i, 1 − θ, θ)` for `t ∈ [t_i, t_{i+1}]`.
pub fn linear_stencil(times: &[f64], t: f64) -> (usize, [f64; 4], usize) {
    let n = times.len();
    if n == 1 || t <= times[0] {
        return (0, [1.0, 0.0, 0.0, 0.0], 1);
    }
    if t >= times[n - 1] {
        return (n - 1, [1.0, 0.0, 0.0, 0.0], 1);
    }
    let i = locate(times, t);
    let theta = (t - times[i]) / (times[i + 1] - times[i]);
    (i, [1.0 - theta, theta, 0.0, 0.0], 2)
}

/// Index `i` with `times[i] ≤ t < times[i+1]`.
fn locate(times: &[f64], t: f64) -> usize {
    match times.binary_search_by(|x| x.partial_cmp(&t).expect("finite times")) {
        Ok(i) => i.min(times.len() - 2),
        Err(i) => i - 1,
    }
}
