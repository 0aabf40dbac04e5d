//! The L-function family: ordinary L, normalized L_χ, completed L̂_χ and the dual
//! R_χ, with region routing, analytic continuation by reflection and residual checks
//! for the functional equation and the derivative relations.

use num_complex::Complex64;
use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::kernel::{
    dot, e_real, gamma_chi, reduce_torus, EvalResult, Method, ParityType, Region, ShintaniDatum,
    SignVector, SpectralPoint,
};
use crate::quadrature::{contour_L, integral_L, QuadConfig};
use crate::series::{bilateral_r1, dirichlet_L, SeriesConfig};
use crate::taylor::{special_value_neg, special_value_pos, MultiIndex};

/// Step of the five-point central differences.
pub const FD_STEP: f64 = 1e-3;

/// Grid scale used for the reflected side of the functional equation.
pub const REFLECTED_GRID_SCALE: f64 = 0.8;

/// Relative accuracy credited to gamma factors and other closed-form prefactors.
const PREFACTOR_REL: f64 = 1e-13;

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Config {
    pub series: SeriesConfig,
    pub quad: QuadConfig,
}

impl Config {
    pub fn validate(&self) -> Result<()> {
        self.series.validate()?;
        self.quad.validate()
    }

    fn delta(&self) -> f64 {
        self.quad.margin
    }

    fn with_quad(&self, quad: QuadConfig) -> Self {
        Self { quad, ..*self }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Variant {
    Ordinary,
    Normalized,
    Completed,
    R,
    RCompleted,
}

impl Variant {
    pub fn as_str(&self) -> &'static str {
        match self {
            Variant::Ordinary => "ORDINARY",
            Variant::Normalized => "NORMALIZED",
            Variant::Completed => "COMPLETED",
            Variant::R => "R",
            Variant::RCompleted => "R_COMPLETED",
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "ORDINARY" => Ok(Variant::Ordinary),
            "NORMALIZED" => Ok(Variant::Normalized),
            "COMPLETED" => Ok(Variant::Completed),
            "R" => Ok(Variant::R),
            "R_COMPLETED" => Ok(Variant::RCompleted),
            _ => Err(Error::InvalidInput(format!("unknown variant {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum MethodChoice {
    #[default]
    Auto,
    Dirichlet,
    Integral,
    Contour,
}

impl MethodChoice {
    pub fn as_str(&self) -> &'static str {
        match self {
            MethodChoice::Auto => "auto",
            MethodChoice::Dirichlet => "dirichlet",
            MethodChoice::Integral => "integral",
            MethodChoice::Contour => "contour",
        }
    }
}

impl fmt::Display for MethodChoice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for MethodChoice {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "auto" => Ok(MethodChoice::Auto),
            "dirichlet" | "series" => Ok(MethodChoice::Dirichlet),
            "integral" => Ok(MethodChoice::Integral),
            "contour" => Ok(MethodChoice::Contour),
            _ => Err(Error::InvalidInput(format!("unknown method {s:?}"))),
        }
    }
}

/// One evaluation: which function, where, and how.
#[derive(Debug, Clone, PartialEq)]
pub struct LRequest {
    pub datum: ShintaniDatum,
    pub chi: ParityType,
    pub s: SpectralPoint,
    pub variant: Variant,
    pub method: MethodChoice,
}

impl LRequest {
    pub fn evaluate(&self, cfg: &Config) -> Result<EvalResult> {
        let (s, d, chi, m) = (&self.s, &self.datum, &self.chi, self.method);
        match self.variant {
            Variant::Ordinary => ordinary_with(s, d, m, cfg),
            Variant::Normalized => normalized_with(s, d, chi, m, cfg),
            Variant::Completed => complete(s, d, chi, normalized_with(s, d, chi, m, cfg)?),
            Variant::R => Ok(r_phase(d, normalized_with(s, d, chi, m, cfg)?)),
            Variant::RCompleted => {
                let l = complete(s, d, chi, normalized_with(s, d, chi, m, cfg)?)?;
                Ok(r_phase(d, l))
            }
        }
    }
}

fn check_shape(s: &SpectralPoint, datum: &ShintaniDatum, chi: Option<&ParityType>) -> Result<()> {
    let r = datum.r();
    let got = [Some(s.r()), chi.map(|c| c.r())];
    for g in got.into_iter().flatten() {
        if g != r {
            return Err(Error::Dimension { expected: r, got: g });
        }
    }
    Ok(())
}

/// The datum with x, y moved into (0,1)^r and the quasiperiodic phase e(−kx·y).
fn reduced(datum: &ShintaniDatum) -> Result<(ShintaniDatum, Complex64)> {
    let red = reduce_torus(datum.x(), datum.y())?;
    let phase = red.phase;
    Ok((datum.with_torus(red.x0, red.y0)?, phase))
}

fn all_right(s: &SpectralPoint, delta: f64) -> bool {
    s.values().iter().all(|v| v.re >= delta)
}

fn ordinary_on(s: &SpectralPoint, base: &ShintaniDatum, method: MethodChoice, cfg: &Config) -> Result<EvalResult> {
    match method {
        MethodChoice::Dirichlet => dirichlet_L(s, base, &cfg.series),
        MethodChoice::Integral => integral_L(s, base, &cfg.quad),
        MethodChoice::Contour => contour_L(s, base, &cfg.quad),
        MethodChoice::Auto if all_right(s, cfg.delta()) => integral_L(s, base, &cfg.quad),
        MethodChoice::Auto => contour_L(s, base, &cfg.quad),
    }
}

/// L(s, A, x, y). In the overlap of the series and integral regions the integral is returned.
#[allow(non_snake_case)]
pub fn L_ordinary(s: &SpectralPoint, datum: &ShintaniDatum, cfg: &Config) -> Result<EvalResult> {
    ordinary_with(s, datum, MethodChoice::Auto, cfg)
}

fn ordinary_with(s: &SpectralPoint, datum: &ShintaniDatum, method: MethodChoice, cfg: &Config) -> Result<EvalResult> {
    cfg.validate()?;
    check_shape(s, datum, None)?;
    let (base, phase) = reduced(datum)?;
    Ok(ordinary_on(s, &base, method, cfg)?.scaled(phase, 0.0))
}

/// L(s, σA, x, y) for every sign vector σ, on reduced data.
fn orthant_parts(
    s: &SpectralPoint,
    base: &ShintaniDatum,
    method: MethodChoice,
    cfg: &Config,
) -> Result<Vec<(SignVector, EvalResult)>> {
    SignVector::all(base.r())
        .map(|sigma| {
            let signs: Vec<f64> = sigma.entries().iter().map(|v| f64::from(*v)).collect();
            let part = ordinary_on(s, &base.scale_rows(&signs)?, method, cfg)?;
            Ok((sigma, part))
        })
        .collect()
}

/// 2^{−r} Σ_σ σ^{1−χ} L(s, σA, x, y).
fn combine(parts: &[(SignVector, EvalResult)], chi: &ParityType) -> EvalResult {
    let dual_bits = chi.complement();
    let mut value = Complex64::new(0.0, 0.0);
    let mut err = 0.0;
    for (sigma, part) in parts {
        value += sigma.power(dual_bits.bits()) * part.value;
        err += part.err;
    }
    let norm = 0.5f64.powi(chi.r() as i32);
    let method = parts.first().map_or(Method::Integral, |p| p.1.method);
    EvalResult::new(value * norm, err * norm, method)
}

fn orthant_combination(
    s: &SpectralPoint,
    base: &ShintaniDatum,
    chi: &ParityType,
    method: MethodChoice,
    cfg: &Config,
) -> Result<EvalResult> {
    Ok(combine(&orthant_parts(s, base, method, cfg)?, chi))
}

/// Every L_χ(s), χ ∈ {0,1}^r, from one set of orthant evaluations. `Auto` picks the
/// orthant integral when every Re s_ν ≥ δ and the contour otherwise.
pub fn parity_family(
    s: &SpectralPoint,
    datum: &ShintaniDatum,
    method: MethodChoice,
    cfg: &Config,
) -> Result<Vec<(ParityType, EvalResult)>> {
    cfg.validate()?;
    check_shape(s, datum, None)?;
    if method == MethodChoice::Dirichlet {
        return Err(Error::InvalidInput("parity family needs a quadrature method".into()));
    }
    let (base, phase) = reduced(datum)?;
    let parts = orthant_parts(s, &base, method, cfg)?;
    Ok(ParityType::all(datum.r())
        .map(|chi| {
            let v = combine(&parts, &chi).scaled(phase, 0.0);
            (chi, v)
        })
        .collect())
}

fn taylor_result(v: Complex64) -> EvalResult {
    EvalResult::new(v, 256.0 * f64::EPSILON * v.norm(), Method::Taylor)
}

/// L_χ(s, A, x, y), routed by region: lattice points with a closed form go to the
/// Taylor engine, Re s ≥ δ to the orthant integrals, Re(1−s) ≥ δ to reflection.
#[allow(non_snake_case)]
pub fn L_normalized(s: &SpectralPoint, datum: &ShintaniDatum, chi: &ParityType, cfg: &Config) -> Result<EvalResult> {
    normalized_with(s, datum, chi, MethodChoice::Auto, cfg)
}

fn normalized_with(
    s: &SpectralPoint,
    datum: &ShintaniDatum,
    chi: &ParityType,
    method: MethodChoice,
    cfg: &Config,
) -> Result<EvalResult> {
    cfg.validate()?;
    check_shape(s, datum, Some(chi))?;
    match method {
        MethodChoice::Dirichlet => {
            if datum.r() != 1 {
                return Err(Error::InvalidInput(
                    "series evaluation of L_χ exists only for r = 1 (σA is not positive otherwise)".into(),
                ));
            }
            bilateral_r1(s.values()[0], datum.a(0, 0), datum.x()[0], datum.y()[0], chi.bits()[0], &cfg.series)
        }
        MethodChoice::Integral | MethodChoice::Contour => {
            let (base, phase) = reduced(datum)?;
            Ok(orthant_combination(s, &base, chi, method, cfg)?.scaled(phase, 0.0))
        }
        MethodChoice::Auto => match s.region(cfg.delta()) {
            Region::Lattice => {
                let k = s.lattice().expect("lattice region");
                if k.iter().all(|v| *v <= 0) {
                    let idx = MultiIndex::new(k.iter().map(|v| (-v) as u32).collect());
                    return Ok(taylor_result(special_value_neg(&idx, datum, chi)?));
                }
                if k.iter().all(|v| *v >= 1) {
                    let idx = MultiIndex::new(k.iter().map(|v| *v as u32).collect());
                    if idx.congruent(chi.bits()) {
                        return Ok(taylor_result(special_value_pos(&idx, datum, chi)?));
                    }
                    return normalized_with(s, datum, chi, MethodChoice::Integral, cfg);
                }
                Err(outside(s))
            }
            Region::Right | Region::Strip => normalized_with(s, datum, chi, MethodChoice::Integral, cfg),
            Region::Left => continue_L(s, datum, chi, cfg),
            Region::Outside => Err(outside(s)),
        },
    }
}

fn outside(s: &SpectralPoint) -> Error {
    Error::Region(format!(
        "s = {:?} mixes the left and right half-planes; neither direct nor reflected evaluation applies",
        s.values()
    ))
}

fn gamma_factor(s: &SpectralPoint, chi: &ParityType) -> Result<Complex64> {
    gamma_chi(s.values(), chi)
}

/// |det A|^{1/2} Γ_χ(s) times an L_χ value.
fn complete(s: &SpectralPoint, datum: &ShintaniDatum, chi: &ParityType, l: EvalResult) -> Result<EvalResult> {
    let g = gamma_factor(s, chi)?;
    Ok(l.scaled(g * datum.det().abs().sqrt(), PREFACTOR_REL))
}

fn r_phase(datum: &ShintaniDatum, l: EvalResult) -> EvalResult {
    l.scaled(e_real(dot(datum.x(), datum.y())), 4.0 * f64::EPSILON)
}

/// L̂_χ(s, A, x, y) = |det A|^{1/2} Γ_χ(s) L_χ(s, A, x, y).
#[allow(non_snake_case)]
pub fn L_completed(s: &SpectralPoint, datum: &ShintaniDatum, chi: &ParityType, cfg: &Config) -> Result<EvalResult> {
    let l = L_normalized(s, datum, chi, cfg)?;
    complete(s, datum, chi, l)
}

/// R_χ = e(x·y) L_χ, or its completion |det A|^{1/2} Γ_χ(s) R_χ.
#[allow(non_snake_case)]
pub fn R_family(
    s: &SpectralPoint,
    datum: &ShintaniDatum,
    chi: &ParityType,
    completed: bool,
    cfg: &Config,
) -> Result<EvalResult> {
    let l = if completed {
        L_completed(s, datum, chi, cfg)?
    } else {
        L_normalized(s, datum, chi, cfg)?
    };
    Ok(r_phase(datum, l))
}

/// L_χ(s) for Re(1 − s_ν) ≥ δ through the functional equation
/// L_χ(s,A,x,y) = i_χ e(−xy) Γ_χ(1−s) / (|det A| Γ_χ(s)) · L_χ(1−s, A*, y, 1−x).
#[allow(non_snake_case)]
pub fn continue_L(s: &SpectralPoint, datum: &ShintaniDatum, chi: &ParityType, cfg: &Config) -> Result<EvalResult> {
    cfg.validate()?;
    check_shape(s, datum, Some(chi))?;
    let reflected = s.reflect();
    if !all_right(&reflected, cfg.delta()) {
        return Err(Error::Region(format!(
            "reflection needs Re(1 − s_ν) >= {} for every ν, got s = {:?}",
            cfg.delta(),
            s.values()
        )));
    }
    let g_s = gamma_factor(s, chi)?;
    let g_1s = gamma_factor(&reflected, chi)?;
    let (base, phase) = reduced(datum)?;
    let dual = ShintaniDatum::new(
        datum.dual_matrix().to_vec(),
        base.y().to_vec(),
        base.x().iter().map(|v| 1.0 - v).collect(),
    )?;
    let rhs = orthant_combination(&reflected, &dual, chi, MethodChoice::Integral, cfg)?;
    let factor = phase * chi.i_chi() * e_real(-dot(base.x(), base.y())) * g_1s / (g_s * datum.det().abs());
    let out = rhs.scaled(factor, PREFACTOR_REL);
    Ok(EvalResult::new(out.value, out.err, Method::Reflection))
}

/// L̂_χ evaluated without reflection: orthant integrals when every Re s_ν ≥ δ, contours otherwise.
fn completed_direct(s: &SpectralPoint, datum: &ShintaniDatum, chi: &ParityType, cfg: &Config) -> Result<EvalResult> {
    let method = if all_right(s, cfg.delta()) {
        MethodChoice::Integral
    } else {
        MethodChoice::Contour
    };
    let (base, phase) = reduced(datum)?;
    let l = orthant_combination(s, &base, chi, method, cfg)?.scaled(phase, 0.0);
    complete(s, datum, chi, l)
}

/// Both sides of L̂_χ(s,A,x,y) = i_χ e(−xy) L̂_χ(1−s, A*, y, 1−x), each computed
/// directly; the right side uses a grid rescaled by [`REFLECTED_GRID_SCALE`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FeCheck {
    pub lhs: EvalResult,
    pub rhs: EvalResult,
}

impl FeCheck {
    pub fn residual(&self) -> f64 {
        (self.lhs.value - self.rhs.value).norm()
    }
}

pub fn fe_sides(s: &SpectralPoint, datum: &ShintaniDatum, chi: &ParityType, cfg: &Config) -> Result<FeCheck> {
    cfg.validate()?;
    check_shape(s, datum, Some(chi))?;
    let lhs = completed_direct(s, datum, chi, cfg)?;
    let other = cfg.with_quad(cfg.quad.rescaled(REFLECTED_GRID_SCALE));
    let rhs = completed_direct(&s.reflect(), &datum.dual()?, chi, &other)?;
    let factor = chi.i_chi() * e_real(-dot(datum.x(), datum.y()));
    Ok(FeCheck {
        lhs,
        rhs: rhs.scaled(factor, 4.0 * f64::EPSILON),
    })
}

pub fn fe_residual(s: &SpectralPoint, datum: &ShintaniDatum, chi: &ParityType, cfg: &Config) -> Result<f64> {
    Ok(fe_sides(s, datum, chi, cfg)?.residual())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    /// ∂/∂x_ν of L_χ.
    X(usize),
    /// ∂/∂y_ν of R_χ.
    Y(usize),
}

/// Five-point finite difference against the closed-form right side.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DerivativeCheck {
    pub fd: Complex64,
    pub rhs: Complex64,
}

impl DerivativeCheck {
    pub fn residual(&self) -> f64 {
        (self.fd - self.rhs).norm()
    }
}

/// ∂_{x_ν} L_χ = −Σ_μ a_μν s_μ L_{χ+1_μ}(s + 1_μ) or ∂_{y_ν} R_χ = 2πi Σ_μ a*_μν R_{χ+1_μ}(s − 1_μ).
pub fn derivative_sides(
    s: &SpectralPoint,
    datum: &ShintaniDatum,
    chi: &ParityType,
    direction: Direction,
    cfg: &Config,
) -> Result<DerivativeCheck> {
    cfg.validate()?;
    check_shape(s, datum, Some(chi))?;
    let r = datum.r();
    let nu = match direction {
        Direction::X(nu) | Direction::Y(nu) => nu,
    };
    if nu >= r {
        return Err(Error::InvalidInput(format!("direction index {nu} out of range for r = {r}")));
    }
    let shifted = |h: f64| -> Result<Complex64> {
        let mut x = datum.x().to_vec();
        let mut y = datum.y().to_vec();
        match direction {
            Direction::X(_) => x[nu] += h,
            Direction::Y(_) => y[nu] += h,
        }
        let d = datum.with_torus(x, y)?;
        Ok(match direction {
            Direction::X(_) => L_normalized(s, &d, chi, cfg)?.value,
            Direction::Y(_) => R_family(s, &d, chi, false, cfg)?.value,
        })
    };
    let h = FD_STEP;
    let fd = (shifted(-2.0 * h)? - 8.0 * shifted(-h)? + 8.0 * shifted(h)? - shifted(2.0 * h)?) / (12.0 * h);
    let mut rhs = Complex64::new(0.0, 0.0);
    for mu in 0..r {
        let flipped = chi.flip(mu);
        match direction {
            Direction::X(_) => {
                let c = datum.a(mu, nu);
                if c != 0.0 {
                    let l = L_normalized(&s.shift(mu, 1.0), datum, &flipped, cfg)?;
                    rhs -= c * s.values()[mu] * l.value;
                }
            }
            Direction::Y(_) => {
                let c = datum.astar(mu, nu);
                if c != 0.0 {
                    let rv = R_family(&s.shift(mu, -1.0), datum, &flipped, false, cfg)?;
                    rhs += Complex64::new(0.0, 2.0 * PI) * c * rv.value;
                }
            }
        }
    }
    Ok(DerivativeCheck { fd, rhs })
}

pub fn derivative_residual(
    s: &SpectralPoint,
    datum: &ShintaniDatum,
    chi: &ParityType,
    direction: Direction,
    cfg: &Config,
) -> Result<f64> {
    Ok(derivative_sides(s, datum, chi, direction, cfg)?.residual())
}

/// L(s, A, x, y) by the series, the orthant integral and the contour, for positive A
/// in the region of absolute convergence.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TripleCheck {
    pub series: EvalResult,
    pub integral: EvalResult,
    pub contour: EvalResult,
}

impl TripleCheck {
    /// Largest pairwise difference.
    pub fn spread(&self) -> f64 {
        let v = [self.series.value, self.integral.value, self.contour.value];
        let mut worst = 0.0f64;
        for i in 0..3 {
            for j in i + 1..3 {
                worst = worst.max((v[i] - v[j]).norm());
            }
        }
        worst
    }
}

pub fn cross_check(s: &SpectralPoint, datum: &ShintaniDatum, cfg: &Config) -> Result<TripleCheck> {
    Ok(TripleCheck {
        series: ordinary_with(s, datum, MethodChoice::Dirichlet, cfg)?,
        integral: ordinary_with(s, datum, MethodChoice::Integral, cfg)?,
        contour: ordinary_with(s, datum, MethodChoice::Contour, cfg)?,
    })
}
