//! Integral evaluators: the positive-orthant representation, the Hankel-type
//! contour representation valid for all s, and the Fourier transform of F.

mod contour;
pub(crate) mod engine;
pub(crate) mod rules;

pub use contour::{auto_radius, contour_L};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::kernel::{
    check_unit_cube, dot, e_real, f_prod, rgamma_c, EvalResult, Method, ShintaniDatum,
    SignVector, SpectralPoint, DEFAULT_MARGIN,
};
use engine::{orthant, orthant_fourier, Grid, Kernel, Limits};

/// Largest degree handled by the quadrature evaluators.
pub const MAX_QUAD_DEGREE: usize = 3;

/// Largest |k_ν| accepted by [`fourier_F`].
pub const MAX_FREQUENCY: f64 = 10.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ContourRadius {
    Auto,
    Fixed(f64),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadConfig {
    /// Trapezoid step on the log-radial axis.
    pub h: f64,
    /// Tanh-sinh step for the angular variables.
    pub angular_h: f64,
    /// Gauss–Legendre panel width (log scale) on contour rays.
    pub panel_width: f64,
    /// Gauss–Legendre panels per contour circle.
    pub circle_panels: usize,
    /// Nodes whose contribution falls below cutoff × running peak end a sweep.
    pub cutoff: f64,
    pub max_nodes_per_dim: usize,
    pub contour_radius: ContourRadius,
    /// Distance kept from Re s = 0 by the orthant evaluator.
    pub margin: f64,
}

impl Default for QuadConfig {
    fn default() -> Self {
        Self {
            h: 1.0 / 16.0,
            angular_h: 1.0 / 32.0,
            panel_width: 0.5,
            circle_panels: 8,
            cutoff: 1e-18,
            max_nodes_per_dim: 4096,
            contour_radius: ContourRadius::Auto,
            margin: DEFAULT_MARGIN,
        }
    }
}

impl QuadConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidInput(format!("quadrature config: {m}")));
        if !(self.h > 0.0 && self.h <= 0.25) {
            return bad("h must lie in (0, 1/4]");
        }
        if !(self.angular_h > 0.0 && self.angular_h <= 0.25) {
            return bad("angular_h must lie in (0, 1/4]");
        }
        if !(self.panel_width > 0.0 && self.panel_width <= 2.0) {
            return bad("panel_width must lie in (0, 2]");
        }
        if self.circle_panels < 2 {
            return bad("circle_panels must be at least 2");
        }
        if !(self.cutoff > 0.0 && self.cutoff <= 1e-12) {
            return bad("cutoff must lie in (0, 1e-12]");
        }
        if self.max_nodes_per_dim < 64 {
            return bad("max_nodes_per_dim must be at least 64");
        }
        if let ContourRadius::Fixed(r) = self.contour_radius {
            if !(r > 0.0 && r.is_finite()) {
                return bad("contour radius must be positive");
            }
        }
        if !(self.margin > 0.0 && self.margin < 0.5) {
            return bad("margin must lie in (0, 1/2)");
        }
        Ok(())
    }

    /// Same rule with every step multiplied by `f`; used to give the two sides
    /// of an identity unrelated grids.
    pub fn rescaled(&self, f: f64) -> Self {
        Self {
            h: (self.h * f).min(0.25),
            angular_h: (self.angular_h * f).min(0.25),
            panel_width: (self.panel_width * f).min(2.0),
            circle_panels: ((self.circle_panels as f64 / f).round() as usize).max(2),
            ..*self
        }
    }

    pub(crate) fn grid(&self) -> Grid {
        Grid {
            h: self.h,
            h_ang: self.angular_h,
            panel: self.panel_width,
            circle_panels: self.circle_panels,
        }
    }

    pub(crate) fn limits(&self) -> Limits {
        Limits {
            cutoff: self.cutoff,
            max_nodes: self.max_nodes_per_dim,
        }
    }
}

pub(crate) fn check_degree(r: usize) -> Result<()> {
    if r > MAX_QUAD_DEGREE {
        return Err(Error::CapExceeded(format!(
            "quadrature supports r <= {MAX_QUAD_DEGREE}, got {r}"
        )));
    }
    Ok(())
}

pub(crate) fn check_dims(s: &SpectralPoint, datum: &ShintaniDatum) -> Result<()> {
    if s.r() != datum.r() {
        return Err(Error::Dimension {
            expected: datum.r(),
            got: s.r(),
        });
    }
    Ok(())
}

/// Rounding allowance per unit of Σ|terms|.
pub(crate) const ROUNDING: f64 = 16.0 * f64::EPSILON;

/// L(s, A, x, y) = 2^r / ∏Γ_C(s_ν) · ∫_{(0,∞)^r} F(tA, x, y) t^{s−1} dt, for all Re s_ν ≥ margin.
#[allow(non_snake_case)]
pub fn integral_L(s: &SpectralPoint, datum: &ShintaniDatum, cfg: &QuadConfig) -> Result<EvalResult> {
    cfg.validate()?;
    check_dims(s, datum)?;
    check_degree(datum.r())?;
    check_unit_cube("x", datum.x())?;
    check_unit_cube("y", datum.y())?;
    if let Some((nu, v)) = s.values().iter().enumerate().find(|(_, v)| v.re < cfg.margin) {
        return Err(Error::Region(format!(
            "integral representation needs Re s_ν >= {}, but Re s_{nu} = {}",
            cfg.margin, v.re
        )));
    }
    let kernel = Kernel::new(datum.x(), datum.y())?;
    let lim = cfg.limits();
    let grid = cfg.grid();
    let fine = orthant(&kernel, datum.matrix(), s.values(), &grid, &lim)?;
    let coarse = orthant(&kernel, datum.matrix(), s.values(), &grid.coarsened(), &lim)?;
    let mut pref = Complex64::new(2f64.powi(datum.r() as i32), 0.0);
    for sv in s.values() {
        pref *= rgamma_c(*sv);
    }
    let err = pref.norm() * ((fine.sum - coarse.sum).norm() + ROUNDING * fine.abs);
    Ok(EvalResult::new(pref * fine.sum, err, Method::Integral))
}

/// Both sides of ∫_{R^r} F(tA,x,y) e(t·k) dt = (i^r/|det A|) e(−y·x) F(kA*, y, 1−x).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FourierCheck {
    pub lhs: EvalResult,
    pub rhs: Complex64,
}

impl FourierCheck {
    pub fn residual(&self) -> f64 {
        (self.lhs.value - self.rhs).norm()
    }
}

#[allow(non_snake_case)]
pub fn fourier_F(datum: &ShintaniDatum, k: &[f64], cfg: &QuadConfig) -> Result<FourierCheck> {
    cfg.validate()?;
    let r = datum.r();
    if k.len() != r {
        return Err(Error::Dimension {
            expected: r,
            got: k.len(),
        });
    }
    check_degree(r)?;
    check_unit_cube("x", datum.x())?;
    if let Some(v) = k.iter().find(|v| !(v.abs() <= MAX_FREQUENCY)) {
        return Err(Error::QuadratureFailure(format!(
            "frequency {v} exceeds the oscillation cap {MAX_FREQUENCY}"
        )));
    }
    let kernel = Kernel::new(datum.x(), datum.y())?;
    let lim = cfg.limits();
    let grid = cfg.grid();
    let mut fine = Complex64::new(0.0, 0.0);
    let mut coarse = Complex64::new(0.0, 0.0);
    let mut abs = 0.0;
    for sigma in SignVector::all(r) {
        let signs: Vec<f64> = sigma.entries().iter().map(|v| f64::from(*v)).collect();
        let b = datum.scale_rows(&signs)?;
        let freq: Vec<f64> = k.iter().zip(&signs).map(|(a, b)| a * b).collect();
        let f = orthant_fourier(&kernel, b.matrix(), &freq, &grid, &lim)?;
        let c = orthant_fourier(&kernel, b.matrix(), &freq, &grid.coarsened(), &lim)?;
        fine += f.sum;
        coarse += c.sum;
        abs += f.abs;
    }
    let err = (fine - coarse).norm() + ROUNDING * abs;
    let i_r = Complex64::new(0.0, 1.0).powi(r as i32);
    let rhs = i_r / datum.det().abs()
        * e_real(-dot(datum.y(), datum.x()))
        * f_prod(k, &datum.dual()?)?;
    Ok(FourierCheck {
        lhs: EvalResult::new(fine, err, Method::Integral),
        rhs,
    })
}
