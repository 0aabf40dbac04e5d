//! Hankel-type loop integrals: each t_ν comes in from +∞ along arg 0, circles
//! the origin at radius ρ and leaves along arg 2π.
//!
//! Expanding the product of loops gives one term per set P of variables on
//! their circles; the others run over [ρ, ∞) and pick up the factor e(s_ν) − 1.

use num_complex::Complex64;
use std::f64::consts::PI;

use super::engine::{
    integrate_simplex, min_cuts, radial_from, ridge_cuts, simplex_cells, simplex_weight, Acc, Grid, Kernel,
    Limits,
};
use super::rules::gauss_legendre;
use super::{check_degree, check_dims, QuadConfig, ContourRadius, ROUNDING};
use crate::error::{Error, Result};
use crate::kernel::{
    check_unit_cube, e_of, gamma_c, sin_pi, EvalResult, Method, ShintaniDatum, SpectralPoint,
};

/// Default radius: half the largest ρ keeping every |(tA)_ν| inside the pole-free disc of φ_ν
/// when all |t_μ| = ρ.
pub fn auto_radius(datum: &ShintaniDatum) -> f64 {
    0.5 * clearance_bound(datum)
}

fn clearance_bound(datum: &ShintaniDatum) -> f64 {
    let dist = datum
        .y()
        .iter()
        .map(|v| {
            let f = v - v.floor();
            f.min(1.0 - f)
        })
        .fold(f64::INFINITY, f64::min);
    dist / (datum.r() as f64 * datum.max_abs_entry())
}

/// L(s, A, x, y) from the loop integral, valid for every s whose components are not positive integers.
#[allow(non_snake_case)]
pub fn contour_L(s: &SpectralPoint, datum: &ShintaniDatum, cfg: &QuadConfig) -> Result<EvalResult> {
    cfg.validate()?;
    check_dims(s, datum)?;
    check_degree(datum.r())?;
    check_unit_cube("x", datum.x())?;
    check_unit_cube("y", datum.y())?;
    for (nu, sv) in s.values().iter().enumerate() {
        if sv.im == 0.0 && sv.re >= 1.0 && sv.re == sv.re.round() {
            return Err(Error::PrefactorPole { index: nu });
        }
    }
    let bound = clearance_bound(datum);
    let rho = match cfg.contour_radius {
        ContourRadius::Auto => 0.5 * bound,
        ContourRadius::Fixed(v) if v < bound => v,
        ContourRadius::Fixed(v) => return Err(Error::PoleClearance { radius: v, bound }),
    };
    let two_i = Complex64::new(0.0, 2.0);
    let mut pref = Complex64::new(1.0, 0.0);
    let mut ray = Vec::with_capacity(s.r());
    for sv in s.values() {
        pref *= e_of(-sv / 2.0) * gamma_c(1.0 - sv)? / two_i;
        ray.push(two_i * e_of(sv / 2.0) * sin_pi(*sv));
    }
    let kernel = Kernel::new(datum.x(), datum.y())?;
    let lim = cfg.limits();
    let grid = cfg.grid();
    let fine = assemble(&kernel, datum.matrix(), s.values(), rho, &ray, &grid, &lim)?;
    let coarse = assemble(&kernel, datum.matrix(), s.values(), rho, &ray, &grid.coarsened(), &lim)?;
    let err = pref.norm() * ((fine.sum - coarse.sum).norm() + ROUNDING * fine.abs);
    Ok(EvalResult::new(pref * fine.sum, err, Method::Contour))
}

fn assemble(
    k: &Kernel,
    b: &[f64],
    s: &[Complex64],
    rho: f64,
    ray: &[Complex64],
    grid: &Grid,
    lim: &Limits,
) -> Result<Acc> {
    let r = k.r();
    let mut total = Acc::default();
    for mask in 0..(1usize << r) {
        let circles: Vec<usize> = (0..r).filter(|nu| mask >> nu & 1 == 1).collect();
        let rays: Vec<usize> = (0..r).filter(|nu| mask >> nu & 1 == 0).collect();
        let factor: Complex64 = rays.iter().map(|nu| ray[*nu]).product();
        if factor == Complex64::new(0.0, 0.0) {
            continue;
        }
        let piece = mixed_piece(k, b, s, rho, &circles, &rays, grid, lim)?;
        total.add(piece.scale(factor));
    }
    Ok(total)
}

struct CircleNode {
    t: Complex64,
    w: Complex64,
}

fn circle_nodes(rho: f64, s: Complex64, panels: usize) -> Vec<CircleNode> {
    let rule = gauss_legendre();
    let width = 2.0 * PI / panels as f64;
    let rho_s = (s * rho.ln()).exp();
    let mut out = Vec::with_capacity(panels * rule.len());
    for p in 0..panels {
        for (x, w) in rule {
            let theta = (p as f64 + x) * width;
            out.push(CircleNode {
                t: Complex64::from_polar(rho, theta),
                w: Complex64::new(0.0, w * width) * rho_s * (Complex64::new(0.0, theta) * s).exp(),
            });
        }
    }
    out
}

#[allow(clippy::too_many_arguments)]
fn mixed_piece(
    k: &Kernel,
    b: &[f64],
    s: &[Complex64],
    rho: f64,
    circles: &[usize],
    rays: &[usize],
    grid: &Grid,
    lim: &Limits,
) -> Result<Acc> {
    let r = k.r();
    let nodes: Vec<Vec<CircleNode>> = circles
        .iter()
        .map(|nu| circle_nodes(rho, s[*nu], grid.circle_panels))
        .collect();
    let ray_s: Vec<Complex64> = rays.iter().map(|mu| s[*mu]).collect();
    let total_s: Complex64 = ray_s.iter().sum();
    let cells = if rays.len() >= 2 {
        let mut cuts = min_cuts(rays.len());
        cuts.extend(ridge_cuts(b, rays, r));
        simplex_cells(rays.len(), &cuts)
    } else {
        Vec::new()
    };

    let mut total = Acc::default();
    let mut idx = vec![0usize; circles.len()];
    let mut offset = vec![Complex64::new(0.0, 0.0); r];
    let mut c = vec![0.0; r];
    loop {
        let mut weight = Complex64::new(1.0, 0.0);
        offset.iter_mut().for_each(|o| *o = Complex64::new(0.0, 0.0));
        for (j, nu) in circles.iter().enumerate() {
            let node = &nodes[j][idx[j]];
            weight *= node.w;
            for (col, o) in offset.iter_mut().enumerate() {
                *o += node.t * b[nu * r + col];
            }
        }
        let inner = match rays.len() {
            0 => {
                let v = k.torus.f_complex(&offset);
                Acc { sum: v, abs: v.norm() }
            }
            1 => {
                let mu = rays[0];
                radial_from(k, &offset, &b[mu * r..(mu + 1) * r], rho, total_s, grid.panel, lim)?
            }
            _ => integrate_simplex(&cells, grid.h_ang, lim, |w| {
                for (col, cv) in c.iter_mut().enumerate() {
                    *cv = rays.iter().zip(w).map(|(mu, wv)| wv * b[mu * r + col]).sum();
                }
                let w_min = w.iter().fold(f64::INFINITY, |a, v| a.min(*v));
                let rad = radial_from(k, &offset, &c, rho / w_min, total_s, grid.panel, lim)?;
                if rad.sum == Complex64::new(0.0, 0.0) {
                    return Ok(rad.sum);
                }
                Ok(simplex_weight(w, &ray_s) * rad.sum)
            })?,
        };
        total.add(inner.scale(weight));

        // advance the odometer over circle nodes
        let mut j = 0;
        loop {
            if j == circles.len() {
                return Ok(total);
            }
            idx[j] += 1;
            if idx[j] < nodes[j].len() {
                break;
            }
            idx[j] = 0;
            j += 1;
        }
    }
}
