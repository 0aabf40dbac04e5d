//! Polar decomposition of orthant integrals: t = Rω with ω on the simplex.
//!
//! The radial integral runs on a log-trapezoid grid whose left tail is summed
//! in closed form from the Taylor series of F. The angular integral uses
//! tanh-sinh on cells cut along the hyperplanes where a linear form vanishes.

use num_complex::Complex64;
use std::f64::consts::PI;

use super::rules::{cexpm1, gauss_legendre, tanh_sinh, TsNode, TS_FLOOR};
use crate::error::{Error, Result};
use crate::kernel::{Torus, TWO_PI};
use crate::taylor::phi_coeffs;

/// Taylor terms used for the closed-form left tail.
const TAIL_TERMS: usize = 40;
/// Fraction of the convergence radius at which the explicit grid starts.
const TAIL_FRACTION: f64 = 0.25;

/// Discretisation steps for one pass.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Grid {
    /// trapezoid step in u = ln R
    pub h: f64,
    /// tanh-sinh step for angular variables
    pub h_ang: f64,
    /// Gauss–Legendre panel width in ln(R / R_min) on contour rays
    pub panel: f64,
    /// Gauss–Legendre panels on each contour circle
    pub circle_panels: usize,
}

impl Grid {
    pub fn coarsened(&self) -> Self {
        Self {
            h: 2.0 * self.h,
            h_ang: 2.0 * self.h_ang,
            panel: 2.0 * self.panel,
            circle_panels: (self.circle_panels / 2).max(1),
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub(crate) struct Limits {
    pub cutoff: f64,
    pub max_nodes: usize,
}

/// A sum together with the sum of moduli of its terms (for rounding estimates).
#[derive(Debug, Clone, Copy, Default)]
pub(crate) struct Acc {
    pub sum: Complex64,
    pub abs: f64,
}

impl Acc {
    pub fn add(&mut self, other: Acc) {
        self.sum += other.sum;
        self.abs += other.abs;
    }

    pub fn scale(self, f: Complex64) -> Acc {
        Acc {
            sum: self.sum * f,
            abs: self.abs * f.norm(),
        }
    }
}

/// Torus data plus the Taylor coefficients of each φ factor.
pub(crate) struct Kernel {
    pub torus: Torus,
    series: Vec<Vec<Complex64>>,
    dist: Vec<f64>,
}

impl Kernel {
    pub fn new(x: &[f64], y: &[f64]) -> Result<Self> {
        let series = x
            .iter()
            .zip(y)
            .map(|(xv, yv)| phi_coeffs(*xv, *yv, TAIL_TERMS))
            .collect::<Result<Vec<_>>>()?;
        let dist = y
            .iter()
            .map(|v| {
                let f = v - v.floor();
                f.min(1.0 - f)
            })
            .collect();
        Ok(Self {
            torus: Torus::new(x, y),
            series,
            dist,
        })
    }

    pub fn r(&self) -> usize {
        self.dist.len()
    }
}

fn convolve(a: &[Complex64], b: &[Complex64]) -> Vec<Complex64> {
    let n = a.len().min(b.len());
    let mut out = vec![Complex64::new(0.0, 0.0); n];
    for i in 0..n {
        if a[i] == Complex64::new(0.0, 0.0) {
            continue;
        }
        for j in 0..n - i {
            out[i + j] += a[i] * b[j];
        }
    }
    out
}

/// ∫_0^∞ F(Rc) e(Rq) R^{S−1} dR along the ray arg R = ±π/4 (sign of q) or arg R = 0 when q = 0.
pub(crate) fn radial_origin(
    k: &Kernel,
    c: &[f64],
    q: f64,
    s: Complex64,
    h: f64,
    lim: &Limits,
) -> Result<Acc> {
    let r = k.r();
    let alpha = if q > 0.0 {
        PI / 4.0
    } else if q < 0.0 {
        -PI / 4.0
    } else {
        0.0
    };
    let rot = Complex64::from_polar(1.0, alpha);

    let mut reach = f64::INFINITY;
    for nu in 0..r {
        if c[nu] != 0.0 {
            reach = reach.min(k.dist[nu] / c[nu].abs());
        }
    }
    if q != 0.0 {
        reach = reach.min(1.0 / (TWO_PI * q.abs()));
    }
    if !reach.is_finite() {
        return Err(Error::QuadratureFailure("degenerate radial direction".into()));
    }
    let u_left = (TAIL_FRACTION * reach).ln();

    // Taylor coefficients of F(Rc) e(Rq) in R.
    let mut d = vec![Complex64::new(0.0, 0.0); TAIL_TERMS + 1];
    d[0] = Complex64::new(1.0, 0.0);
    for nu in 0..r {
        let mut f = Vec::with_capacity(TAIL_TERMS + 1);
        let mut p = 1.0;
        for n in 0..=TAIL_TERMS {
            f.push(k.series[nu][n] * p);
            p *= c[nu];
        }
        d = convolve(&d, &f);
    }
    if q != 0.0 {
        let mut f = Vec::with_capacity(TAIL_TERMS + 1);
        let mut t = Complex64::new(1.0, 0.0);
        for n in 0..=TAIL_TERMS {
            f.push(t);
            t *= Complex64::new(0.0, TWO_PI * q) / (n as f64 + 1.0);
        }
        d = convolve(&d, &f);
    }
    let base = Complex64::new(u_left, alpha);
    let mut tail = Acc::default();
    for (n, dn) in d.iter().enumerate() {
        let e = s + n as f64;
        let t = h * dn * (e * base).exp() / cexpm1(e * h);
        tail.sum += t;
        tail.abs += t.norm();
    }

    let mut acc = Acc::default();
    let mut peak = (d[0] * (s * base).exp()).norm();
    let mut quiet = 0;
    let mut lin = vec![Complex64::new(0.0, 0.0); r];
    let mut lin_re = vec![0.0; r];
    let qi = Complex64::new(0.0, TWO_PI * q);
    let mut j = 0usize;
    loop {
        let u = u_left + j as f64 * h;
        let big_r = u.exp();
        let f = if alpha == 0.0 {
            for nu in 0..r {
                lin_re[nu] = big_r * c[nu];
            }
            k.torus.f_real(&lin_re)
        } else {
            let rr = rot * big_r;
            for nu in 0..r {
                lin[nu] = rr * c[nu];
            }
            k.torus.f_complex(&lin) * (qi * rr).exp()
        };
        let g = f * (s * Complex64::new(u, alpha)).exp();
        let m = g.norm();
        acc.sum += g;
        acc.abs += m;
        peak = peak.max(m);
        if m <= lim.cutoff * peak {
            quiet += 1;
            if quiet >= 2 {
                break;
            }
        } else {
            quiet = 0;
        }
        j += 1;
        if j > lim.max_nodes {
            return Err(Error::QuadratureFailure(format!(
                "radial grid exceeded {} nodes",
                lim.max_nodes
            )));
        }
    }
    Ok(Acc {
        sum: acc.sum * h + tail.sum,
        abs: acc.abs * h + tail.abs,
    })
}

/// ∫_{R_min}^∞ F(o + Rc) R^{S−1} dR with Gauss–Legendre panels in ln(R / R_min).
pub(crate) fn radial_from(
    k: &Kernel,
    offset: &[Complex64],
    c: &[f64],
    r_min: f64,
    s: Complex64,
    panel: f64,
    lim: &Limits,
) -> Result<Acc> {
    let r = k.r();
    let rule = gauss_legendre();
    let ln_min = r_min.ln();
    let mut acc = Acc::default();
    let mut peak = 0.0f64;
    let mut quiet = 0;
    let mut lin = vec![Complex64::new(0.0, 0.0); r];
    let mut p = 0usize;
    loop {
        let mut part = Acc::default();
        for (xi, wi) in rule {
            let v = (p as f64 + xi) * panel;
            let big_r = r_min * v.exp();
            for nu in 0..r {
                lin[nu] = offset[nu] + big_r * c[nu];
            }
            let g = k.torus.f_complex(&lin) * (s * (ln_min + v)).exp() * (wi * panel);
            part.sum += g;
            part.abs += g.norm();
        }
        let m = part.sum.norm().max(part.abs * 1e-3);
        acc.add(part);
        peak = peak.max(m);
        if m <= lim.cutoff * peak {
            quiet += 1;
            if quiet >= 2 {
                break;
            }
        } else {
            quiet = 0;
        }
        p += 1;
        if p * rule.len() > lim.max_nodes {
            return Err(Error::QuadratureFailure(format!(
                "ray grid exceeded {} nodes",
                lim.max_nodes
            )));
        }
    }
    Ok(acc)
}

/// A convex cell of the simplex {ω ≥ 0, Σω = 1}, as barycentric vertices.
pub(crate) type Cell = Vec<Vec<f64>>;

fn eval_plane(h: &[f64], p: &[f64]) -> f64 {
    h.iter().zip(p).map(|(a, b)| a * b).sum()
}

// Point on segment PQ where the plane value goes from fp to fq through zero.
fn crossing(p: &[f64], q: &[f64], fp: f64, fq: f64) -> Vec<f64> {
    let den = fq - fp;
    p.iter()
        .zip(q)
        .map(|(a, b)| {
            if *a == 0.0 && *b == 0.0 {
                0.0
            } else {
                (fq * a - fp * b) / den
            }
        })
        .collect()
}

fn split_cell(cell: &Cell, h: &[f64]) -> (Option<Cell>, Option<Cell>) {
    let scale = h.iter().fold(0.0f64, |a, b| a.max(b.abs()));
    let tol = 1e-13 * scale;
    let vals: Vec<f64> = cell
        .iter()
        .map(|p| {
            let f = eval_plane(h, p);
            if f.abs() <= tol {
                0.0
            } else {
                f
            }
        })
        .collect();
    if vals.iter().all(|f| *f >= 0.0) {
        return (Some(cell.clone()), None);
    }
    if vals.iter().all(|f| *f <= 0.0) {
        return (None, Some(cell.clone()));
    }
    let n = cell.len();
    let mut pos = Vec::new();
    let mut neg = Vec::new();
    if n == 2 {
        let m = crossing(&cell[0], &cell[1], vals[0], vals[1]);
        let (a, b) = if vals[0] > 0.0 { (0, 1) } else { (1, 0) };
        pos.push(cell[a].clone());
        pos.push(m.clone());
        neg.push(m);
        neg.push(cell[b].clone());
    } else {
        for i in 0..n {
            let j = (i + 1) % n;
            let (fi, fj) = (vals[i], vals[j]);
            if fi >= 0.0 {
                pos.push(cell[i].clone());
            }
            if fi <= 0.0 {
                neg.push(cell[i].clone());
            }
            if (fi > 0.0 && fj < 0.0) || (fi < 0.0 && fj > 0.0) {
                let m = crossing(&cell[i], &cell[j], fi, fj);
                pos.push(m.clone());
                neg.push(m);
            }
        }
    }
    let keep = |c: Vec<Vec<f64>>| if c.len() >= n.min(3) && measure(&c) > 1e-15 { Some(c) } else { None };
    (keep(pos), keep(neg))
}

// Length (d = 2) or area (d = 3) in the first d − 1 coordinates.
fn measure(cell: &Cell) -> f64 {
    match cell[0].len() {
        2 => (cell[1][0] - cell[0][0]).abs(),
        3 => {
            let mut a = 0.0;
            for i in 1..cell.len() - 1 {
                a += det2(&cell[0], &cell[i], &cell[i + 1]);
            }
            a.abs() / 2.0
        }
        _ => 1.0,
    }
}

fn det2(p0: &[f64], p1: &[f64], p2: &[f64]) -> f64 {
    (p1[0] - p0[0]) * (p2[1] - p0[1]) - (p2[0] - p0[0]) * (p1[1] - p0[1])
}

/// Cells of the (d−1)-simplex cut by the hyperplanes Σ h_μ ω_μ = 0.
pub(crate) fn simplex_cells(d: usize, cuts: &[Vec<f64>]) -> Vec<Cell> {
    let whole: Cell = (0..d)
        .map(|i| (0..d).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
        .collect();
    let mut cells = vec![whole];
    if d == 1 {
        return cells;
    }
    for h in cuts {
        let mut next = Vec::new();
        for cell in &cells {
            let (p, n) = split_cell(cell, h);
            next.extend(p);
            next.extend(n);
        }
        cells = next;
    }
    cells
}

/// Hyperplanes where the linear forms (ωB)_ν change sign, for columns of mixed sign.
pub(crate) fn ridge_cuts(b: &[f64], rows: &[usize], r: usize) -> Vec<Vec<f64>> {
    let mut cuts = Vec::new();
    for nu in 0..r {
        let col: Vec<f64> = rows.iter().map(|mu| b[mu * r + nu]).collect();
        let pos = col.iter().any(|v| *v > 0.0);
        let neg = col.iter().any(|v| *v < 0.0);
        if pos && neg {
            cuts.push(col);
        }
    }
    cuts
}

/// Kinks of min_μ ω_μ: the planes ω_μ = ω_λ.
pub(crate) fn min_cuts(d: usize) -> Vec<Vec<f64>> {
    let mut cuts = Vec::new();
    for mu in 0..d {
        for la in mu + 1..d {
            let mut h = vec![0.0; d];
            h[mu] = 1.0;
            h[la] = -1.0;
            cuts.push(h);
        }
    }
    cuts
}

/// Integrates g(ω) dω over the simplex, cell by cell.
pub(crate) fn integrate_simplex(
    cells: &[Cell],
    h_ang: f64,
    lim: &Limits,
    mut g: impl FnMut(&[f64]) -> Result<Complex64>,
) -> Result<Acc> {
    let d = cells[0][0].len();
    let overflow = || Error::QuadratureFailure(format!("angular grid exceeded {} nodes", lim.max_nodes));
    let mut total = Acc::default();
    let mut w = vec![0.0; d];
    match d {
        1 => {
            let v = g(&[1.0])?;
            total.sum = v;
            total.abs = v.norm();
        }
        2 => {
            for cell in cells {
                let (p, q) = (&cell[0], &cell[1]);
                let jac = (q[0] - p[0]).abs();
                let sweep = tanh_sinh(
                    h_ang,
                    lim.cutoff,
                    lim.max_nodes,
                    |n: &TsNode| {
                        for mu in 0..2 {
                            w[mu] = p[mu] * n.tau_c + q[mu] * n.tau;
                        }
                        if w.iter().any(|v| *v < TS_FLOOR) {
                            return Ok(Complex64::new(0.0, 0.0));
                        }
                        g(&w)
                    },
                    overflow,
                )?;
                total.add(Acc {
                    sum: sweep.sum * jac,
                    abs: sweep.abs_sum * jac,
                });
            }
        }
        3 => {
            for cell in cells {
                for i in 1..cell.len() - 1 {
                    let (v0, v1, v2) = (&cell[0], &cell[i], &cell[i + 1]);
                    let jac = det2(v0, v1, v2).abs();
                    if jac == 0.0 {
                        continue;
                    }
                    let mut abs_outer = 0.0;
                    let sweep = tanh_sinh(
                        h_ang,
                        lim.cutoff,
                        lim.max_nodes,
                        |na: &TsNode| {
                            let inner = tanh_sinh(
                                h_ang,
                                lim.cutoff,
                                lim.max_nodes,
                                |nb: &TsNode| {
                                    let c0 = na.tau_c;
                                    let c1 = na.tau * nb.tau_c;
                                    let c2 = na.tau * nb.tau;
                                    for mu in 0..3 {
                                        w[mu] = c0 * v0[mu] + c1 * v1[mu] + c2 * v2[mu];
                                    }
                                    if w.iter().any(|v| *v < TS_FLOOR) {
                                        return Ok(Complex64::new(0.0, 0.0));
                                    }
                                    g(&w)
                                },
                                overflow,
                            )?;
                            abs_outer += inner.abs_sum * na.tau * na.weight;
                            Ok(inner.sum * na.tau)
                        },
                        overflow,
                    )?;
                    total.add(Acc {
                        sum: sweep.sum * jac,
                        abs: abs_outer * h_ang * jac,
                    });
                }
            }
        }
        _ => {
            return Err(Error::CapExceeded(format!(
                "quadrature supports r <= 3, got {d}"
            )))
        }
    }
    Ok(total)
}

/// ω^{s−1} = ∏ ω_μ^{s_μ − 1}.
pub(crate) fn simplex_weight(w: &[f64], s: &[Complex64]) -> Complex64 {
    let mut e = Complex64::new(0.0, 0.0);
    for (wv, sv) in w.iter().zip(s) {
        e += (sv - 1.0) * wv.ln();
    }
    e.exp()
}

/// ∫_{(0,∞)^r} F(tB) t^{s−1} dt for a row-major matrix B.
pub(crate) fn orthant(
    k: &Kernel,
    b: &[f64],
    s: &[Complex64],
    grid: &Grid,
    lim: &Limits,
) -> Result<Acc> {
    let r = k.r();
    let all: Vec<usize> = (0..r).collect();
    let cells = simplex_cells(r, &ridge_cuts(b, &all, r));
    let total_s: Complex64 = s.iter().sum();
    let mut c = vec![0.0; r];
    integrate_simplex(&cells, grid.h_ang, lim, |w| {
        for nu in 0..r {
            c[nu] = (0..r).map(|mu| w[mu] * b[mu * r + nu]).sum();
        }
        let rad = radial_origin(k, &c, 0.0, total_s, grid.h, lim)?;
        Ok(simplex_weight(w, s) * rad.sum)
    })
}

/// ∫_{(0,∞)^r} F(tB) e(t·k) dt.
pub(crate) fn orthant_fourier(
    k: &Kernel,
    b: &[f64],
    freq: &[f64],
    grid: &Grid,
    lim: &Limits,
) -> Result<Acc> {
    let r = k.r();
    let all: Vec<usize> = (0..r).collect();
    let cells = simplex_cells(r, &ridge_cuts(b, &all, r));
    let total_s = Complex64::new(r as f64, 0.0);
    let mut c = vec![0.0; r];
    integrate_simplex(&cells, grid.h_ang, lim, |w| {
        for nu in 0..r {
            c[nu] = (0..r).map(|mu| w[mu] * b[mu * r + nu]).sum();
        }
        let q: f64 = w.iter().zip(freq).map(|(a, f)| a * f).sum();
        Ok(radial_origin(k, &c, q, total_s, grid.h, lim)?.sum)
    })
}
