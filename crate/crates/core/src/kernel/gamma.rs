//! Complex gamma function and the archimedean gamma factors.

use num_complex::Complex64;
use std::f64::consts::PI;

use super::{sin_pi, ParityType};
use crate::error::{Error, Result};

// B_{2k} / (2k(2k−1)) for k = 1..10
const STIRLING: [f64; 10] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360_360.0,
    1.0 / 156.0,
    -3617.0 / 122_400.0,
    43867.0 / 244_188.0,
    -174_611.0 / 125_400.0,
];

/// Below this modulus the argument is shifted up before the asymptotic series is used.
const STIRLING_RADIUS: f64 = 17.0;

fn is_nonpositive_integer(z: Complex64) -> bool {
    z.im == 0.0 && z.re <= 0.0 && z.re == z.re.round()
}

fn ln_gamma_stirling(z: Complex64) -> Complex64 {
    let w = 1.0 / (z * z);
    let mut series = Complex64::new(STIRLING[STIRLING.len() - 1], 0.0);
    for c in STIRLING.iter().rev().skip(1) {
        series = series * w + c;
    }
    (z - 0.5) * z.ln() - z + 0.5 * (2.0 * PI).ln() + series / z
}

/// (ln Γ(z + n), ∏_{k<n} (z + k)) with |z + n| large enough for the asymptotic series.
fn shifted(z: Complex64) -> (Complex64, Complex64) {
    let mut prod = Complex64::new(1.0, 0.0);
    let mut w = z;
    while w.norm() < STIRLING_RADIUS {
        prod *= w;
        w += 1.0;
    }
    (ln_gamma_stirling(w), prod)
}

fn gamma_right(z: Complex64) -> Complex64 {
    let (lg, prod) = shifted(z);
    lg.exp() / prod
}

fn rgamma_right(z: Complex64) -> Complex64 {
    let (lg, prod) = shifted(z);
    (-lg).exp() * prod
}

/// Γ(z) for complex z. Poles at the non-positive integers are reported.
pub fn gamma(z: Complex64) -> Result<Complex64> {
    if is_nonpositive_integer(z) {
        return Err(Error::GammaPole { index: 0 });
    }
    if z.im == 0.0 && z.re >= 1.0 && z.re <= 24.0 && z.re == z.re.round() {
        let mut f = 1.0;
        for k in 2..(z.re as u32) {
            f *= k as f64;
        }
        return Ok(Complex64::new(f, 0.0));
    }
    if z.re < 0.5 {
        Ok(PI / (sin_pi(z) * gamma_right(1.0 - z)))
    } else {
        Ok(gamma_right(z))
    }
}

/// 1/Γ(z), entire; exactly zero at the poles of Γ.
pub fn rgamma(z: Complex64) -> Complex64 {
    if is_nonpositive_integer(z) {
        return Complex64::new(0.0, 0.0);
    }
    if z.re < 0.5 {
        sin_pi(z) * gamma_right(1.0 - z) / PI
    } else {
        rgamma_right(z)
    }
}

/// Γ_R(s) = π^{-s/2} Γ(s/2).
pub fn gamma_r(s: Complex64) -> Result<Complex64> {
    let g = gamma(s / 2.0)?;
    Ok((-(s / 2.0) * PI.ln()).exp() * g)
}

/// Γ_C(s) = 2 (2π)^{-s} Γ(s).
pub fn gamma_c(s: Complex64) -> Result<Complex64> {
    let g = gamma(s)?;
    Ok(2.0 * (-s * (2.0 * PI).ln()).exp() * g)
}

/// 1/Γ_C(s), entire.
pub fn rgamma_c(s: Complex64) -> Complex64 {
    0.5 * (s * (2.0 * PI).ln()).exp() * rgamma(s)
}

/// Γ_χ(s) = ∏ Γ_R(s_ν + χ_ν). A pole reports the offending index.
pub fn gamma_chi(s: &[Complex64], chi: &ParityType) -> Result<Complex64> {
    if s.len() != chi.r() {
        return Err(Error::Dimension {
            expected: chi.r(),
            got: s.len(),
        });
    }
    let mut acc = Complex64::new(1.0, 0.0);
    for (nu, (sv, b)) in s.iter().zip(chi.bits()).enumerate() {
        let g = gamma_r(*sv + f64::from(*b)).map_err(|_| Error::GammaPole { index: nu })?;
        acc *= g;
    }
    Ok(acc)
}
