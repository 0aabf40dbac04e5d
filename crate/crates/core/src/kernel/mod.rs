//! Building blocks: the character e(z), the kernels φ, F, G, gamma factors,
//! parity bookkeeping and torus reduction.

mod datum;
mod gamma;
mod types;

pub use datum::{row_form, row_form_complex, ShintaniDatum};
pub use gamma::{gamma, gamma_c, gamma_chi, gamma_r, rgamma, rgamma_c};
pub use types::{
    EvalResult, Method, ParityType, Region, SignVector, SpectralPoint, DEFAULT_MARGIN,
};

use num_complex::Complex64;
use std::f64::consts::PI;

use crate::error::{Error, Result};

pub const TWO_PI: f64 = 2.0 * PI;

/// Minimum distance from the integers required of torus coordinates.
pub const INTEGER_GUARD: f64 = 1e-9;

/// (sin πx, cos πx), exact at multiples of 1/2.
pub fn sincos_pi(x: f64) -> (f64, f64) {
    let n = (2.0 * x).round();
    let r = x - 0.5 * n;
    let (s, c) = (PI * r).sin_cos();
    match (n as i64).rem_euclid(4) {
        0 => (s, c),
        1 => (c, -s),
        2 => (-s, -c),
        _ => (-c, s),
    }
}

/// sin(πz) for complex z.
pub fn sin_pi(z: Complex64) -> Complex64 {
    let (s, c) = sincos_pi(z.re);
    let b = PI * z.im;
    Complex64::new(s * b.cosh(), c * b.sinh())
}

/// e(x) = exp(2πix) for real x, with |e(x)| = 1 and exact values at quarter integers.
pub fn e_real(x: f64) -> Complex64 {
    let (s, c) = sincos_pi(2.0 * (x - x.round()));
    Complex64::new(c, s)
}

/// e(z) = exp(2πiz).
pub fn e_of(z: Complex64) -> Complex64 {
    e_real(z.re) * (-TWO_PI * z.im).exp()
}

pub(crate) fn check_non_integer(name: &'static str, v: &[f64]) -> Result<()> {
    for (index, value) in v.iter().enumerate() {
        if !value.is_finite() {
            return Err(Error::InvalidInput(format!("{name}[{index}] is not finite")));
        }
        if (value - value.round()).abs() < INTEGER_GUARD {
            return Err(Error::NearInteger {
                name,
                index,
                value: *value,
            });
        }
    }
    Ok(())
}

pub(crate) fn check_unit_cube(name: &'static str, v: &[f64]) -> Result<()> {
    for (index, value) in v.iter().enumerate() {
        if !(*value > 0.0 && *value < 1.0) {
            return Err(Error::OutOfUnitCube {
                name,
                index,
                value: *value,
            });
        }
    }
    Ok(())
}

/// φ(u) = e^{-2πux}/(1 − ey·e^{-2πu}) for complex u, where ey = e(y).
#[inline]
pub(crate) fn phi_complex(u: Complex64, x: f64, ey: Complex64) -> Complex64 {
    if u.re >= 0.0 {
        let q = (-TWO_PI * u).exp();
        (-TWO_PI * x * u).exp() / (1.0 - ey * q)
    } else {
        let p = (TWO_PI * u).exp();
        (TWO_PI * (1.0 - x) * u).exp() / (p - ey)
    }
}

/// φ(u) for real u, using only real exponentials.
#[inline]
pub(crate) fn phi_real(u: f64, x: f64, ey: Complex64) -> Complex64 {
    if u >= 0.0 {
        let q = (-TWO_PI * u).exp();
        (-TWO_PI * x * u).exp() / (1.0 - ey * q)
    } else {
        let p = (TWO_PI * u).exp();
        (TWO_PI * (1.0 - x) * u).exp() / (p - ey)
    }
}

/// φ(t, x, y) = e^{-2πtx}/(1 − e(y)e^{-2πt}).
pub fn phi(t: f64, x: f64, y: f64) -> Result<Complex64> {
    check_non_integer("y", &[y])?;
    Ok(phi_real(t, x, e_real(y)))
}

/// Precomputed torus data for repeated evaluation of F.
#[derive(Debug, Clone)]
pub(crate) struct Torus {
    pub x: Vec<f64>,
    pub ey: Vec<Complex64>,
}

impl Torus {
    pub fn new(x: &[f64], y: &[f64]) -> Self {
        Self {
            x: x.to_vec(),
            ey: y.iter().map(|v| e_real(*v)).collect(),
        }
    }

    /// ∏ φ(u_ν) for u already in linear-form coordinates.
    #[inline]
    pub fn f_real(&self, u: &[f64]) -> Complex64 {
        let mut acc = Complex64::new(1.0, 0.0);
        for ((uv, xv), ev) in u.iter().zip(&self.x).zip(&self.ey) {
            acc *= phi_real(*uv, *xv, *ev);
        }
        acc
    }

    #[inline]
    pub fn f_complex(&self, u: &[Complex64]) -> Complex64 {
        let mut acc = Complex64::new(1.0, 0.0);
        for ((uv, xv), ev) in u.iter().zip(&self.x).zip(&self.ey) {
            acc *= phi_complex(*uv, *xv, *ev);
        }
        acc
    }
}

/// F(tA, x, y) = ∏ φ((tA)_ν, x_ν, y_ν).
pub fn f_prod(t: &[f64], datum: &ShintaniDatum) -> Result<Complex64> {
    if t.len() != datum.r() {
        return Err(Error::Dimension {
            expected: datum.r(),
            got: t.len(),
        });
    }
    let u = datum.row_form(t);
    Ok(Torus::new(datum.x(), datum.y()).f_real(&u))
}

/// G(tA, x, y) = e(x·y) F(tA, x, y).
pub fn g_prod(t: &[f64], datum: &ShintaniDatum) -> Result<Complex64> {
    Ok(e_real(dot(datum.x(), datum.y())) * f_prod(t, datum)?)
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(p, q)| p * q).sum()
}

/// x = x0 + kx, y = y0 + ky with x0, y0 in (0,1)^r and phase = e(−kx·y).
#[derive(Debug, Clone, PartialEq)]
pub struct TorusReduction {
    pub x0: Vec<f64>,
    pub y0: Vec<f64>,
    pub kx: Vec<i64>,
    pub ky: Vec<i64>,
    pub phase: Complex64,
}

impl TorusReduction {
    pub fn is_trivial(&self) -> bool {
        self.kx.iter().all(|k| *k == 0) && self.ky.iter().all(|k| *k == 0)
    }
}

pub fn reduce_torus(x: &[f64], y: &[f64]) -> Result<TorusReduction> {
    if x.len() != y.len() {
        return Err(Error::Dimension {
            expected: x.len(),
            got: y.len(),
        });
    }
    check_non_integer("x", x)?;
    check_non_integer("y", y)?;
    let split = |v: &[f64]| -> (Vec<f64>, Vec<i64>) {
        v.iter()
            .map(|t| {
                let k = t.floor();
                (t - k, k as i64)
            })
            .unzip()
    };
    let (x0, kx) = split(x);
    let (y0, ky) = split(y);
    // kx·y mod 1, accumulated term by term to keep the argument small.
    let mut arg = 0.0;
    for (k, yv) in kx.iter().zip(y) {
        let term = (*k as f64) * (yv - yv.floor());
        arg += term - term.round();
    }
    Ok(TorusReduction {
        x0,
        y0,
        kx,
        ky,
        phase: e_real(-arg),
    })
}
