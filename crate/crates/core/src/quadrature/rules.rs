//! One-dimensional rules: Gauss–Legendre panels and tanh-sinh on (0,1).

use num_complex::Complex64;
use std::f64::consts::PI;
use std::sync::OnceLock;

pub(crate) const GL_ORDER: usize = 16;

/// Nodes and weights of the 16-point Gauss–Legendre rule on [0,1].
pub(crate) fn gauss_legendre() -> &'static [(f64, f64)] {
    static RULE: OnceLock<Vec<(f64, f64)>> = OnceLock::new();
    RULE.get_or_init(|| {
        let n = GL_ORDER;
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre(n, x);
            if d != 0.0 {
                dp = d;
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            out.push((0.5 * (1.0 - x), 0.5 * w));
        }
        out.sort_by(|a, b| a.0.total_cmp(&b.0));
        out
    })
}

fn legendre(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    for k in 2..=n {
        let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// A tanh-sinh node on (0,1): τ, 1 − τ (both to full relative accuracy) and dτ/dv.
#[derive(Debug, Clone, Copy)]
pub(crate) struct TsNode {
    pub tau: f64,
    pub tau_c: f64,
    pub weight: f64,
}

/// Node at v for the map τ = (1 + tanh(π/2 sinh v))/2.
pub(crate) fn ts_node(v: f64) -> TsNode {
    let s = 0.5 * PI * v.sinh();
    let e = (-2.0 * s.abs()).exp();
    let small = e / (1.0 + e);
    let large = 1.0 / (1.0 + e);
    let (tau, tau_c) = if s >= 0.0 { (large, small) } else { (small, large) };
    // sech²(s) = 4e/(1+e)² with e = exp(−2|s|)
    let sech2 = 4.0 * e / ((1.0 + e) * (1.0 + e));
    TsNode {
        tau,
        tau_c,
        weight: 0.25 * PI * v.cosh() * sech2,
    }
}

/// Smallest endpoint distance worth evaluating.
pub(crate) const TS_FLOOR: f64 = 1e-300;

/// Outcome of an outward tanh-sinh sweep.
pub(crate) struct Sweep {
    pub sum: Complex64,
    pub abs_sum: f64,
}

/// Integrates g over (0,1) with step h, walking outward from the centre and
/// stopping on each side once terms stay below `cutoff` times the running peak.
pub(crate) fn tanh_sinh<E>(
    h: f64,
    cutoff: f64,
    max_nodes: usize,
    mut g: impl FnMut(&TsNode) -> Result<Complex64, E>,
    overflow: impl Fn() -> E,
) -> Result<Sweep, E> {
    let mut sum = Complex64::new(0.0, 0.0);
    let mut abs_sum = 0.0;
    let mut peak = 0.0f64;
    let mut nodes = 0usize;
    let centre = ts_node(0.0);
    let v0 = g(&centre)? * centre.weight;
    sum += v0;
    abs_sum += v0.norm();
    peak = peak.max(v0.norm());
    nodes += 1;
    for dir in [1.0, -1.0] {
        let mut quiet = 0;
        let mut j = 1usize;
        loop {
            let node = ts_node(dir * j as f64 * h);
            if node.tau < TS_FLOOR || node.tau_c < TS_FLOOR || node.weight == 0.0 {
                break;
            }
            let t = g(&node)? * node.weight;
            let m = t.norm();
            sum += t;
            abs_sum += m;
            peak = peak.max(m);
            nodes += 1;
            if nodes > max_nodes {
                return Err(overflow());
            }
            if m <= cutoff * peak {
                quiet += 1;
                if quiet >= 2 {
                    break;
                }
            } else {
                quiet = 0;
            }
            j += 1;
        }
    }
    Ok(Sweep {
        sum: sum * h,
        abs_sum: abs_sum * h,
    })
}

/// e^z − 1 without cancellation for small z.
pub(crate) fn cexpm1(z: Complex64) -> Complex64 {
    let ea = z.re.exp();
    let half = (0.5 * z.im).sin();
    Complex64::new(z.re.exp_m1() * z.im.cos() - 2.0 * half * half, ea * z.im.sin())
}
