//! Direct summation of the Shintani series Σ_{m≥0} e(m·y) (A(x+m))^{−s} for
//! positive A, and the bilateral one-variable series.
//!
//! The sum is truncated to a box [0, M)^r. Instead of an absolute tail (which
//! needs astronomically large M near the abscissa) each coordinate's tail
//! Σ_{m≥M} z^m g(m) is replaced by K terms of its Euler transform
//!
//!   z^M Σ_{j<K} w^j Δ^j g(M) / (1−z),   w = z/(1−z),
//!
//! whose remainder z^M w^K Σ_n z^n Δ^K g(M+n) is bounded with Cauchy estimates.
//! K = 0 recovers the plain absolute tail.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::kernel::{
    check_unit_cube, e_real, reduce_torus, EvalResult, Method, ShintaniDatum, SpectralPoint,
};

/// Largest degree summed directly.
pub const MAX_SERIES_DEGREE: usize = 3;

/// Convergence margin: Re Σ s_ν must exceed r by more than this.
pub const CONVERGENCE_MARGIN: f64 = 0.1;

const MAX_EULER_TERMS: usize = 12;
const CAUCHY_RADII: [f64; 3] = [0.25, 0.5, 0.75];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesConfig {
    /// Target absolute error.
    pub tol: f64,
    /// Cap on the box side; `None` uses [`default_max_box`].
    pub max_box: Option<usize>,
}

impl Default for SeriesConfig {
    fn default() -> Self {
        Self {
            tol: 1e-12,
            max_box: None,
        }
    }
}

pub fn default_max_box(r: usize) -> usize {
    match r {
        0 | 1 => 1_000_000,
        2 => 4000,
        _ => 300,
    }
}

impl SeriesConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.tol >= 1e-15 && self.tol.is_finite()) {
            return Err(Error::InvalidInput(format!(
                "series tol must be at least 1e-15, got {}",
                self.tol
            )));
        }
        if let Some(m) = self.max_box {
            if m < 8 {
                return Err(Error::InvalidInput(format!(
                    "series max_box must be at least 8, got {m}"
                )));
            }
        }
        Ok(())
    }

    fn max_box_for(&self, r: usize) -> usize {
        self.max_box.unwrap_or_else(|| default_max_box(r))
    }
}

/// Σ_{m ∈ N^r} e(m·y) ∏_μ (A(x+m))_μ^{−s_μ} for A with strictly positive entries.
#[allow(non_snake_case)]
pub fn dirichlet_L(s: &SpectralPoint, datum: &ShintaniDatum, cfg: &SeriesConfig) -> Result<EvalResult> {
    cfg.validate()?;
    let r = datum.r();
    if s.r() != r {
        return Err(Error::Dimension {
            expected: r,
            got: s.r(),
        });
    }
    if r > MAX_SERIES_DEGREE {
        return Err(Error::CapExceeded(format!(
            "direct summation supports r <= {MAX_SERIES_DEGREE}, got {r}"
        )));
    }
    check_positive(datum)?;
    check_unit_cube("x", datum.x())?;
    check_unit_cube("y", datum.y())?;
    let total: f64 = s.values().iter().map(|v| v.re).sum();
    if total <= r as f64 + CONVERGENCE_MARGIN {
        return Err(Error::Region(format!(
            "series needs Re Σs > {}, got {total}",
            r as f64 + CONVERGENCE_MARGIN
        )));
    }
    let (value, err) = box_sum(
        &Problem::new(datum.matrix(), datum.x(), datum.y(), s.values()),
        cfg.tol,
        cfg.max_box_for(r),
    )?;
    Ok(EvalResult::new(value, err, Method::Series))
}

/// (sgn a)/2 Σ_{m∈Z} e(my) / |a(x+m)|_χ^s with |u|_χ^s = sgn(u)^χ |u|^s, for Re s > 1.1.
pub fn bilateral_r1(
    s: Complex64,
    a: f64,
    x: f64,
    y: f64,
    chi: u8,
    cfg: &SeriesConfig,
) -> Result<EvalResult> {
    cfg.validate()?;
    if a == 0.0 {
        return Err(Error::ZeroMatrix);
    }
    if !a.is_finite() || !s.re.is_finite() || !s.im.is_finite() {
        return Err(Error::InvalidInput("non-finite input".into()));
    }
    if chi > 1 {
        return Err(Error::InvalidInput(format!("parity bit must be 0 or 1, got {chi}")));
    }
    if s.re <= 1.0 + CONVERGENCE_MARGIN {
        return Err(Error::Region(format!(
            "bilateral series needs Re s > {}, got {}",
            1.0 + CONVERGENCE_MARGIN,
            s.re
        )));
    }
    let red = reduce_torus(&[x], &[y])?;
    let (x0, y0) = (red.x0[0], red.y0[0]);
    let max_box = cfg.max_box_for(1);
    // Each half is scaled by |a|^{−σ}/2, so ask for tol·|a|^σ from it.
    let half_tol = (cfg.tol * a.abs().powf(s.re)).max(1e-300);
    let s1 = [s];
    let (pos, err_p) = box_sum(&Problem::new(&[1.0], &[x0], &[y0], &s1), half_tol, max_box)?;
    let (neg, err_n) = box_sum(&Problem::new(&[1.0], &[1.0 - x0], &[1.0 - y0], &s1), half_tol, max_box)?;
    let sg = a.signum();
    let sg_chi = if chi == 1 { sg } else { 1.0 };
    let scale = 0.5 * sg * (-s * a.abs().ln()).exp();
    let value = scale * (sg_chi * pos + mirror(sg, chi) * e_real(-y0) * neg);
    let err = scale.norm() * (err_p + err_n) + 4.0 * f64::EPSILON * value.norm();
    Ok(EvalResult::new(red.phase * value, err, Method::Series))
}

fn mirror(sg: f64, chi: u8) -> f64 {
    if chi == 1 {
        -sg
    } else {
        1.0
    }
}

/// Proven bound on the absolute tail Σ_{m ∉ [0,M)^r} |e(m·y)(A(x+m))^{−s}| given Re s.
/// Infinite when the bound does not apply (non-positive A, Re Σs ≤ r, M = 0).
pub fn tail_bound(datum: &ShintaniDatum, re_s: &[f64], m: usize) -> f64 {
    if re_s.len() != datum.r() || check_positive(datum).is_err() || m == 0 {
        return f64::INFINITY;
    }
    let zero = vec![0.0; re_s.len()];
    let p = Problem {
        a: datum.matrix().to_vec(),
        x: datum.x().to_vec(),
        y: datum.y().to_vec(),
        sigma: re_s.to_vec(),
        tau: zero,
    };
    p.bound(m, 0, 0.0, &vec![vec![0.0]; p.r()])
}

fn check_positive(datum: &ShintaniDatum) -> Result<()> {
    let r = datum.r();
    for row in 0..r {
        for col in 0..r {
            let value = datum.a(row, col);
            if !(value > 0.0) {
                return Err(Error::NonPositiveMatrix { row, col, value });
            }
        }
    }
    Ok(())
}

struct Problem {
    a: Vec<f64>,
    x: Vec<f64>,
    y: Vec<f64>,
    sigma: Vec<f64>,
    tau: Vec<f64>,
}

impl Problem {
    fn new(a: &[f64], x: &[f64], y: &[f64], s: &[Complex64]) -> Self {
        Self {
            a: a.to_vec(),
            x: x.to_vec(),
            y: y.to_vec(),
            sigma: s.iter().map(|v| v.re).collect(),
            tau: s.iter().map(|v| v.im).collect(),
        }
    }

    fn r(&self) -> usize {
        self.x.len()
    }

    /// |w_ν| = 1/|1 − e(y_ν)|.
    fn w_abs(&self, nu: usize) -> f64 {
        1.0 / (2.0 * crate::kernel::sincos_pi(self.y[nu]).0.abs())
    }

    /// C with |∏ W_μ^{−s_μ}| ≤ C n^{−Σσ}, where n = Σ_ν (x_ν + t_ν).
    fn envelope(&self) -> f64 {
        let r = self.r();
        (0..r)
            .map(|mu| {
                let row = &self.a[mu * r..(mu + 1) * r];
                let lo = row.iter().fold(f64::INFINITY, |p, v| p.min(*v));
                let hi = row.iter().fold(0.0f64, |p, v| p.max(*v));
                let sg = self.sigma[mu];
                if sg >= 0.0 {
                    lo.powf(-sg)
                } else {
                    hi.powf(-sg)
                }
            })
            .product()
    }

    /// Growth of |∏ W_μ^{−s_μ}| when every coordinate moves by at most θ(x_ν + t_ν) in C.
    fn cauchy_growth(&self, theta: f64) -> f64 {
        let arg = theta.asin();
        self.sigma
            .iter()
            .zip(&self.tau)
            .map(|(sg, tau)| {
                let radial = if *sg >= 0.0 {
                    (1.0 - theta).powf(-sg)
                } else {
                    (1.0 + theta).powf(-sg)
                };
                radial * (tau.abs() * arg).exp()
            })
            .product()
    }

    /// Bound on the error of the (M, K) scheme; `gamma_abs[ν][K]` = Σ_i |γ_i|.
    fn bound(&self, m: usize, k: usize, theta: f64, gamma_abs: &[Vec<f64>]) -> f64 {
        let r = self.r();
        let sigma: f64 = self.sigma.iter().sum();
        let c = self.envelope();
        let growth = if k == 0 { 1.0 } else { self.cauchy_growth(theta) };
        let mf = m as f64;
        let mut total = 0.0;
        for q in 1usize..(1 << r) {
            // E ranges over nonempty subsets of Q; the rest of Q uses the Euler functional.
            let mut e = q;
            while e > 0 {
                let f = q & !e;
                if k == 0 && f != 0 {
                    e = (e - 1) & q;
                    continue;
                }
                let d = r - (f.count_ones() as usize);
                if sigma <= d as f64 {
                    return f64::INFINITY;
                }
                let c0: f64 = (0..r)
                    .map(|nu| if q >> nu & 1 == 1 { mf + self.x[nu] } else { self.x[nu] })
                    .sum();
                let mut term = c * lattice_sum(d, c0, sigma);
                for nu in 0..r {
                    if f >> nu & 1 == 1 {
                        term *= gamma_abs[nu][k];
                    } else if e >> nu & 1 == 1 && k > 0 {
                        term *= growth_factor(self.w_abs(nu), k, theta, mf + self.x[nu]);
                    }
                }
                if k > 0 {
                    term *= growth;
                }
                total += term;
                e = (e - 1) & q;
            }
        }
        total
    }
}

/// |w|^K K! / (θ ξ)^K.
fn growth_factor(w: f64, k: usize, theta: f64, xi: f64) -> f64 {
    (1..=k).fold(1.0, |acc, j| acc * w * j as f64 / (theta * xi))
}

/// Σ_{m∈N^d} (c0 + |m|_1)^{−σ} ≤ [c0^{d−1−σ} + c0^{d−σ}/(σ−d)] / (d−1)!, valid for c0 ≥ d − 1, σ > d.
fn lattice_sum(d: usize, c0: f64, sigma: f64) -> f64 {
    let df = d as f64;
    let fact: f64 = (1..d).map(|j| j as f64).product();
    (c0.powf(df - 1.0 - sigma) + c0.powf(df - sigma) / (sigma - df)) / fact
}

/// Coefficients γ_i (i < K) of the Euler functional Σ_i γ_i g(M+i).
fn euler_weights(y: f64, m: usize, k: usize) -> Vec<Complex64> {
    let z = e_real(y);
    let one_minus = Complex64::new(1.0, 0.0) - z;
    let w = z / one_minus;
    let zm = e_real(y * m as f64 - (y * m as f64).floor());
    let c: Vec<Complex64> = (0..k).map(|j| zm * w.powi(j as i32) / one_minus).collect();
    (0..k)
        .map(|i| {
            let mut g = Complex64::new(0.0, 0.0);
            let mut binom = 1.0;
            for (j, cj) in c.iter().enumerate().skip(i) {
                if j > i {
                    binom = binom * j as f64 / (j - i) as f64;
                }
                let sign = if (j - i) % 2 == 0 { 1.0 } else { -1.0 };
                g += cj * sign * binom;
            }
            g
        })
        .collect()
}

/// Sizes of box side worth trying: 8, then steps of 2^{1/4}.
fn candidate_sides(max_box: usize) -> impl Iterator<Item = usize> {
    let mut v = 8.0f64;
    let mut last = 0usize;
    std::iter::from_fn(move || loop {
        let m = v.round() as usize;
        v *= 2f64.powf(0.25);
        if m > max_box {
            return None;
        }
        if m != last {
            last = m;
            return Some(m);
        }
    })
}

fn box_sum(p: &Problem, tol: f64, max_box: usize) -> Result<(Complex64, f64)> {
    let r = p.r();
    let gamma_abs: Vec<Vec<f64>> = (0..r)
        .map(|nu| {
            (0..=MAX_EULER_TERMS)
                .map(|k| euler_weights(p.y[nu], 0, k).iter().map(|g| g.norm()).sum())
                .collect()
        })
        .collect();
    let target = 0.5 * tol;
    let mut plan = None;
    'search: for m in candidate_sides(max_box) {
        for k in 0..=MAX_EULER_TERMS {
            if m + k > max_box {
                break;
            }
            let thetas: &[f64] = if k == 0 { &[0.0] } else { &CAUCHY_RADII };
            for &theta in thetas {
                let b = p.bound(m, k, theta, &gamma_abs);
                if b <= target {
                    plan = Some((m, k, b));
                    break 'search;
                }
            }
        }
    }
    let (m, k, bound) = plan.ok_or(Error::TruncationFailure { tol, max_box })?;

    let side = m + k;
    let weights: Vec<Vec<Complex64>> = (0..r)
        .map(|nu| {
            let y = p.y[nu];
            let mut v: Vec<Complex64> = (0..m).map(|j| e_real(y * j as f64 - (y * j as f64).floor())).collect();
            v.extend(euler_weights(y, m, k));
            v
        })
        .collect();
    let s: Vec<Complex64> = p
        .sigma
        .iter()
        .zip(&p.tau)
        .map(|(a, b)| Complex64::new(*a, *b))
        .collect();
    let s_norm: f64 = s.iter().map(|v| v.norm()).sum();

    let mut idx = vec![0usize; r];
    let mut sum = Complex64::new(0.0, 0.0);
    let mut abs = 0.0;
    let mut log_max = 0.0f64;
    loop {
        let mut wt = Complex64::new(1.0, 0.0);
        for nu in 0..r {
            wt *= weights[nu][idx[nu]];
        }
        let mut expo = Complex64::new(0.0, 0.0);
        for mu in 0..r {
            let lin: f64 = (0..r)
                .map(|nu| p.a[mu * r + nu] * (p.x[nu] + idx[nu] as f64))
                .sum();
            let lg = lin.ln();
            log_max = log_max.max(lg.abs());
            expo -= s[mu] * lg;
        }
        let term = wt * expo.exp();
        sum += term;
        abs += term.norm();

        let mut j = 0;
        loop {
            if j == r {
                let rounding = abs * f64::EPSILON * (8.0 + s_norm * log_max);
                return Ok((sum, bound + rounding));
            }
            idx[j] += 1;
            if idx[j] < side {
                break;
            }
            idx[j] = 0;
            j += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const CATALAN: f64 = 0.915_965_594_177_219_015_054_603_514_932_384_110_774;

    fn point(s: &[f64]) -> SpectralPoint {
        SpectralPoint::real(s).unwrap()
    }

    #[test]
    fn catalan_at_two() {
        let d = ShintaniDatum::new(vec![1.0], vec![0.5], vec![0.5]).unwrap();
        let v = dirichlet_L(&point(&[2.0]), &d, &SeriesConfig::default()).unwrap();
        assert!((v.value.re - 4.0 * CATALAN).abs() < 1e-13, "{v:?}");
        assert!(v.value.im.abs() < 1e-13);
        assert!(v.err <= 1e-12);
    }

    #[test]
    fn rejects_zero_entries() {
        let d = ShintaniDatum::new(vec![1.0, 0.0, 0.0, 1.0], vec![0.5, 0.5], vec![0.5, 0.5]);
        assert!(matches!(
            dirichlet_L(&point(&[2.0, 2.0]), &d.unwrap(), &SeriesConfig::default()),
            Err(Error::NonPositiveMatrix { row: 0, col: 1, .. })
        ));
    }

    #[test]
    fn row_scaling() {
        let cfg = SeriesConfig::default();
        let d1 = ShintaniDatum::new(vec![1.0], vec![0.3], vec![0.7]).unwrap();
        let d2 = ShintaniDatum::new(vec![2.0], vec![0.3], vec![0.7]).unwrap();
        let a = dirichlet_L(&point(&[3.0]), &d1, &cfg).unwrap();
        let b = dirichlet_L(&point(&[3.0]), &d2, &cfg).unwrap();
        assert!((b.value - a.value / 8.0).norm() < 1e-13);
    }

    #[test]
    fn near_abscissa_converges() {
        let cfg = SeriesConfig::default();
        let d = ShintaniDatum::new(vec![1.0, 0.7, 0.4, 1.3], vec![0.3, 0.6], vec![0.2, 0.85]).unwrap();
        let s = SpectralPoint::new(vec![Complex64::new(1.1, 0.4), Complex64::new(1.05, -0.3)]).unwrap();
        let v = dirichlet_L(&s, &d, &cfg).unwrap();
        assert!(v.err <= 1e-12, "{v:?}");
        let loose = dirichlet_L(&s, &d, &SeriesConfig { tol: 1e-8, ..cfg }).unwrap();
        assert!((v.value - loose.value).norm() <= 1e-8 + 1e-12);
    }

    #[test]
    fn region_errors() {
        let cfg = SeriesConfig::default();
        let d = ShintaniDatum::new(vec![1.0], vec![0.5], vec![0.5]).unwrap();
        assert!(matches!(dirichlet_L(&point(&[1.05]), &d, &cfg), Err(Error::Region(_))));
        assert!(matches!(
            bilateral_r1(Complex64::new(1.1, 0.0), 1.0, 0.5, 0.5, 1, &cfg),
            Err(Error::Region(_))
        ));
        assert_eq!(
            bilateral_r1(Complex64::new(2.0, 0.0), 0.0, 0.5, 0.5, 1, &cfg),
            Err(Error::ZeroMatrix)
        );
        let tight = SeriesConfig {
            tol: 1e-15,
            max_box: Some(8),
        };
        assert!(matches!(
            dirichlet_L(&point(&[1.2]), &d, &tight),
            Err(Error::TruncationFailure { .. })
        ));
    }

    #[test]
    fn bilateral_examples() {
        let cfg = SeriesConfig::default();
        let two = Complex64::new(2.0, 0.0);
        let v = bilateral_r1(two, 1.0, 0.5, 0.5, 1, &cfg).unwrap();
        assert!((v.value - Complex64::new(4.0 * CATALAN, 0.0)).norm() < 1e-13);
        let v = bilateral_r1(two, 1.0, 0.5, 0.5, 0, &cfg).unwrap();
        assert!(v.value.norm() < 1e-13);
        let three = Complex64::new(3.0, 0.0);
        let p = bilateral_r1(three, 1.0, 0.3, 0.7, 0, &cfg).unwrap();
        let n = bilateral_r1(three, -1.0, 0.3, 0.7, 0, &cfg).unwrap();
        assert!((p.value + n.value).norm() < 1e-13);
    }

    #[test]
    fn bilateral_quasiperiodic() {
        let cfg = SeriesConfig::default();
        let s = Complex64::new(2.3, 0.6);
        for chi in [0, 1] {
            let base = bilateral_r1(s, 1.4, 0.35, 0.8, chi, &cfg).unwrap();
            let moved = bilateral_r1(s, 1.4, 1.35, 0.8, chi, &cfg).unwrap();
            assert!((moved.value - e_real(-0.8) * base.value).norm() < 1e-12);
            let y_moved = bilateral_r1(s, 1.4, 0.35, 2.8, chi, &cfg).unwrap();
            assert!((y_moved.value - base.value).norm() < 1e-12);
        }
    }

    #[test]
    fn tail_bound_examples() {
        let d = ShintaniDatum::new(vec![1.0], vec![0.5], vec![0.5]).unwrap();
        let b: Vec<f64> = [10, 100, 1000].iter().map(|m| tail_bound(&d, &[2.0], *m)).collect();
        assert!(b[0] > b[1] && b[1] > b[2] && b[2] > 0.0);
        // exact tail Σ_{m≥100} (m + 1/2)^{-2} = ψ'(100.5)
        assert!(b[1] >= 9.975e-3, "{}", b[1]);
        assert!(tail_bound(&d, &[1.0], 10).is_infinite());
    }

    #[test]
    fn euler_functional_on_geometric_data() {
        // g(n) = ρ^n makes the tail summable: Σ_{n≥M} (zρ)^n = (zρ)^M / (1 − zρ).
        let rho: f64 = 0.97;
        for (y, m) in [(0.3, 5usize), (0.1, 17), (0.85, 40)] {
            let g = euler_weights(y, m, MAX_EULER_TERMS);
            let terms: Vec<Complex64> = g.iter().enumerate().map(|(i, gi)| gi * rho.powi((m + i) as i32)).collect();
            let approx: Complex64 = terms.iter().sum();
            let cancellation: f64 = terms.iter().map(|t| t.norm()).sum::<f64>() * 64.0 * f64::EPSILON;
            let zr = e_real(y) * rho;
            let exact = zr.powi(m as i32) / (1.0 - zr);
            assert!((approx - exact).norm() < 1e-15 + cancellation, "y = {y}");
        }
    }
}
