//! Seeded random instances and the verification sweeps run by the CLI and the
//! acceptance target.
//!
//! All randomness comes from `ChaCha8Rng::seed_from_u64(seed)`; a sweep is a pure
//! function of its arguments.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::kernel::{EvalResult, ParityType, ShintaniDatum, SpectralPoint};
use crate::lfunction::{
    cross_check, derivative_sides, fe_sides, parity_family, Config, Direction, MethodChoice,
};
use crate::quadrature::fourier_F;
use crate::series::bilateral_r1;
use crate::taylor::{special_value_neg, special_value_pos, MultiIndex};

pub type SuiteRng = ChaCha8Rng;

pub fn rng(seed: u64) -> SuiteRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random matrices with |det A| below this are redrawn.
pub const MIN_ABS_DET: f64 = 0.25;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Entries {
    /// Uniform on [−2, −0.5] ∪ [0.5, 2].
    Mixed,
    /// Uniform on [0.5, 2].
    Positive,
}

/// Row-major r×r matrix with entries from `entries` and |det| ≥ [`MIN_ABS_DET`].
pub fn random_matrix(rng: &mut SuiteRng, r: usize, entries: Entries) -> Vec<f64> {
    loop {
        let a: Vec<f64> = (0..r * r)
            .map(|_| {
                let m = rng.gen_range(0.5..=2.0);
                match entries {
                    Entries::Positive => m,
                    Entries::Mixed if rng.gen_bool(0.5) => -m,
                    Entries::Mixed => m,
                }
            })
            .collect();
        let det = nalgebra::DMatrix::from_row_slice(r, r, &a).determinant();
        if det.abs() >= MIN_ABS_DET {
            return a;
        }
    }
}

/// Uniform on [0.1, 0.9]^r.
pub fn random_torus(rng: &mut SuiteRng, r: usize) -> Vec<f64> {
    (0..r).map(|_| rng.gen_range(0.1..=0.9)).collect()
}

pub fn random_datum(rng: &mut SuiteRng, r: usize, entries: Entries) -> ShintaniDatum {
    let a = random_matrix(rng, r, entries);
    let x = random_torus(rng, r);
    let y = random_torus(rng, r);
    ShintaniDatum::new(a, x, y).expect("random data are valid")
}

pub fn random_parity(rng: &mut SuiteRng, r: usize) -> ParityType {
    ParityType::new((0..r).map(|_| rng.gen_range(0..=1u8)).collect()).expect("bits")
}

/// Re s_ν uniform on [lo, hi], Im s_ν uniform on [−im, im].
pub fn random_point(rng: &mut SuiteRng, r: usize, lo: f64, hi: f64, im: f64) -> SpectralPoint {
    let s = (0..r)
        .map(|_| {
            let re = rng.gen_range(lo..=hi);
            let imv = if im > 0.0 { rng.gen_range(-im..=im) } else { 0.0 };
            Complex64::new(re, imv)
        })
        .collect();
    SpectralPoint::new(s).expect("finite")
}

/// One compared pair: `lhs` against `rhs`, with the inputs that produced them.
#[derive(Debug, Clone, PartialEq)]
pub struct Case {
    pub index: usize,
    pub label: String,
    pub datum: ShintaniDatum,
    pub chi: Option<ParityType>,
    pub s: Option<SpectralPoint>,
    /// Frequency vector or multi-index, when the case has one.
    pub k: Option<Vec<f64>>,
    pub lhs: Complex64,
    pub rhs: Complex64,
    /// Combined error estimate of the two sides.
    pub err: f64,
    pub residual: f64,
    pub error: Option<String>,
}

impl Case {
    fn new(index: usize, label: impl Into<String>, datum: &ShintaniDatum) -> Self {
        Self {
            index,
            label: label.into(),
            datum: datum.clone(),
            chi: None,
            s: None,
            k: None,
            lhs: Complex64::new(0.0, 0.0),
            rhs: Complex64::new(0.0, 0.0),
            err: 0.0,
            residual: f64::INFINITY,
            error: None,
        }
    }

    fn with(mut self, chi: Option<&ParityType>, s: Option<&SpectralPoint>) -> Self {
        self.chi = chi.cloned();
        self.s = s.cloned();
        self
    }

    fn record(mut self, outcome: Result<(Complex64, Complex64, f64)>) -> Self {
        match outcome {
            Ok((lhs, rhs, err)) => {
                self.lhs = lhs;
                self.rhs = rhs;
                self.err = err;
                self.residual = (lhs - rhs).norm();
            }
            Err(e) => self.error = Some(e.to_string()),
        }
        self
    }

    pub fn failed(&self) -> bool {
        self.error.is_some() || !self.residual.is_finite()
    }
}

fn pair(a: EvalResult, b: EvalResult) -> (Complex64, Complex64, f64) {
    (a.value, b.value, a.err + b.err)
}

#[derive(Debug, Clone, PartialEq)]
pub struct SuiteReport {
    pub kind: &'static str,
    pub seed: u64,
    pub cases: Vec<Case>,
}

impl SuiteReport {
    /// Largest residual among cases that produced values.
    pub fn max_residual(&self) -> f64 {
        self.cases
            .iter()
            .filter(|c| !c.failed())
            .fold(0.0, |m, c| m.max(c.residual))
    }

    pub fn errors(&self) -> usize {
        self.cases.iter().filter(|c| c.failed()).count()
    }

    pub fn passed(&self, tol: f64) -> bool {
        self.errors() == 0 && self.max_residual() <= tol
    }
}

fn check_r(r: usize, max: usize) -> Result<()> {
    if r == 0 || r > max {
        return Err(Error::InvalidInput(format!("this sweep supports 1 <= r <= {max}, got {r}")));
    }
    Ok(())
}

/// Functional equation on mixed-sign data, Re s_ν ∈ [0.2, 0.8], |Im s_ν| ≤ 1.
pub fn fe_suite(r: usize, samples: usize, seed: u64, cfg: &Config) -> Result<SuiteReport> {
    check_r(r, 3)?;
    let mut g = rng(seed);
    let cases = (0..samples)
        .map(|i| {
            let d = random_datum(&mut g, r, Entries::Mixed);
            let chi = random_parity(&mut g, r);
            let s = random_point(&mut g, r, 0.2, 0.8, 1.0);
            Case::new(i, "fe", &d)
                .with(Some(&chi), Some(&s))
                .record(fe_sides(&s, &d, &chi, cfg).map(|c| pair(c.lhs, c.rhs)))
        })
        .collect();
    Ok(SuiteReport { kind: "fe", seed, cases })
}

/// Fourier transform of F(tA) against the closed form, k uniform on [−kmax, kmax]^r.
pub fn fourier_suite(r: usize, samples: usize, kmax: f64, seed: u64, cfg: &Config) -> Result<SuiteReport> {
    check_r(r, 3)?;
    let mut g = rng(seed);
    let cases = (0..samples)
        .map(|i| {
            let d = random_datum(&mut g, r, Entries::Mixed);
            let k: Vec<f64> = (0..r).map(|_| g.gen_range(-kmax..=kmax)).collect();
            let mut case = Case::new(i, "fourier", &d).record(
                fourier_F(&d, &k, &cfg.quad).map(|c| (c.lhs.value, c.rhs, c.lhs.err)),
            );
            case.k = Some(k);
            case
        })
        .collect();
    Ok(SuiteReport {
        kind: "fourier",
        seed,
        cases,
    })
}

/// The x-relation with Re s_ν ∈ [0.2, 0.8] and the y-relation with Re s_ν ∈ [1.2, 1.8],
/// one of each per sample; |Im s_ν| ≤ 0.5.
pub fn derivative_suite(r: usize, samples: usize, seed: u64, cfg: &Config) -> Result<SuiteReport> {
    check_r(r, 3)?;
    let mut g = rng(seed);
    let mut cases = Vec::with_capacity(2 * samples);
    for _ in 0..samples {
        let d = random_datum(&mut g, r, Entries::Mixed);
        let chi = random_parity(&mut g, r);
        let nu = g.gen_range(0..r);
        let sx = random_point(&mut g, r, 0.2, 0.8, 0.5);
        let sy = random_point(&mut g, r, 1.2, 1.8, 0.5);
        for (label, s, dir) in [("dx", sx, Direction::X(nu)), ("dy", sy, Direction::Y(nu))] {
            let case = Case::new(cases.len(), format!("{label}{nu}"), &d)
                .with(Some(&chi), Some(&s))
                .record(derivative_sides(&s, &d, &chi, dir, cfg).map(|c| (c.fd, c.rhs, 0.0)));
            cases.push(case);
        }
    }
    Ok(SuiteReport {
        kind: "derivative",
        seed,
        cases,
    })
}

/// Series, orthant integral and contour on positive data with Re s_ν ∈ [1.6, 3];
/// the residual is the largest pairwise difference. For r = 1 each sample also
/// compares the bilateral series with the orthant integral for a random parity.
pub fn oracle_suite(r: usize, samples: usize, seed: u64, cfg: &Config) -> Result<SuiteReport> {
    check_r(r, 3)?;
    let mut g = rng(seed);
    let mut cases = Vec::new();
    for _ in 0..samples {
        let d = random_datum(&mut g, r, Entries::Positive);
        let s = random_point(&mut g, r, 1.6, 3.0, 1.0);
        let triple = cross_check(&s, &d, cfg);
        let mut case = Case::new(cases.len(), "triple", &d)
            .with(None, Some(&s))
            .record(triple.clone().map(|t| {
                (t.series.value, t.integral.value, t.series.err + t.integral.err + t.contour.err)
            }));
        // the residual covers all three pairs, not only series against integral
        if let Ok(t) = triple {
            case.residual = t.spread();
        }
        cases.push(case);
        if r == 1 {
            let d = random_datum(&mut g, 1, Entries::Mixed);
            let chi = random_parity(&mut g, 1);
            let s = random_point(&mut g, 1, 1.6, 3.0, 1.0);
            let case = Case::new(cases.len(), "bilateral", &d).with(Some(&chi), Some(&s));
            let outcome = (|| {
                let series = bilateral_r1(s.values()[0], d.a(0, 0), d.x()[0], d.y()[0], chi.bits()[0], &cfg.series)?;
                let fam = parity_family(&s, &d, MethodChoice::Integral, cfg)?;
                let integral = fam.into_iter().find(|(c, _)| *c == chi).expect("all parities").1;
                Ok(pair(series, integral))
            })();
            cases.push(case.record(outcome));
        }
    }
    Ok(SuiteReport {
        kind: "oracle",
        seed,
        cases,
    })
}

/// Special values on mixed-sign data for every χ and k ∈ {0..kmax}^r: the closed form
/// at s = −k against the contour, and at s = k ≥ 1, k ≡ χ, against the orthant integral.
pub fn special_suite(r: usize, samples: usize, kmax: u32, seed: u64, cfg: &Config) -> Result<SuiteReport> {
    check_r(r, 3)?;
    let mut g = rng(seed);
    let mut cases = Vec::new();
    for _ in 0..samples {
        let d = random_datum(&mut g, r, Entries::Mixed);
        for k in MultiIndex::cube(r, kmax) {
            let kf: Vec<f64> = k.0.iter().map(|v| f64::from(*v)).collect();
            let neg = SpectralPoint::real(&kf.iter().map(|v| -v).collect::<Vec<_>>())?;
            special_cases(&mut cases, &d, &k, &neg, false, cfg);
            if k.0.iter().all(|v| *v >= 1) {
                let pos = SpectralPoint::real(&kf)?;
                special_cases(&mut cases, &d, &k, &pos, true, cfg);
            }
        }
    }
    Ok(SuiteReport {
        kind: "special",
        seed,
        cases,
    })
}

fn special_cases(
    cases: &mut Vec<Case>,
    d: &ShintaniDatum,
    k: &MultiIndex,
    s: &SpectralPoint,
    positive: bool,
    cfg: &Config,
) {
    let method = if positive {
        MethodChoice::Integral
    } else {
        MethodChoice::Contour
    };
    let family = parity_family(s, d, method, cfg);
    for chi in ParityType::all(d.r()) {
        let label = if positive {
            "positive"
        } else if k.congruent(chi.complement().bits()) {
            "negative"
        } else {
            "vanishing"
        };
        if positive && !k.congruent(chi.bits()) {
            continue;
        }
        let mut case = Case::new(cases.len(), label, d).with(Some(&chi), Some(s));
        case.k = Some(k.0.iter().map(|v| f64::from(*v)).collect());
        let outcome = match &family {
            Err(e) => Err(e.clone()),
            Ok(fam) => {
                let quad = fam.iter().find(|(c, _)| *c == chi).expect("all parities").1;
                let closed = if positive {
                    special_value_pos(k, d, &chi)
                } else {
                    special_value_neg(k, d, &chi)
                };
                closed.map(|v| (v, quad.value, quad.err))
            }
        };
        cases.push(case.record(outcome));
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generators_are_reproducible() {
        let a = random_datum(&mut rng(9), 2, Entries::Mixed);
        let b = random_datum(&mut rng(9), 2, Entries::Mixed);
        assert_eq!(a, b);
        let c = random_datum(&mut rng(10), 2, Entries::Mixed);
        assert_ne!(a, c);
    }

    #[test]
    fn generators_respect_ranges() {
        let mut g = rng(1);
        for _ in 0..200 {
            let d = random_datum(&mut g, 3, Entries::Positive);
            assert!(d.det().abs() >= MIN_ABS_DET);
            assert!(d.matrix().iter().all(|v| (0.5..=2.0).contains(v)));
            assert!(d.x().iter().chain(d.y()).all(|v| (0.1..=0.9).contains(v)));
            let m = random_matrix(&mut g, 2, Entries::Mixed);
            assert!(m.iter().all(|v| (0.5..=2.0).contains(&v.abs())));
            let s = random_point(&mut g, 2, 0.2, 0.8, 1.0);
            assert!(s.values().iter().all(|z| (0.2..=0.8).contains(&z.re) && z.im.abs() <= 1.0));
        }
    }

    #[test]
    fn small_sweeps_pass() {
        let cfg = Config::default();
        assert!(fe_suite(1, 3, 5, &cfg).unwrap().passed(1e-8));
        assert!(fourier_suite(1, 3, 2.0, 5, &cfg).unwrap().passed(1e-8));
        assert!(oracle_suite(1, 2, 5, &cfg).unwrap().passed(1e-9));
        let special = special_suite(1, 1, 2, 5, &cfg).unwrap();
        assert!(special.passed(1e-8), "{special:?}");
        assert!(special.cases.iter().any(|c| c.label == "vanishing" && c.lhs == Complex64::new(0.0, 0.0)));
    }
}
