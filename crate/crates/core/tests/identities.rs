use num_complex::Complex64;

use shintani::kernel::{e_real, ParityType, ShintaniDatum, SpectralPoint};
use shintani::lfunction::{continue_L, fe_sides, L_completed, L_normalized, L_ordinary, R_family, Config};
use shintani::quadrature::integral_L;
use shintani::suite::{random_datum, random_parity, random_point, rng, Entries};

const CATALAN: f64 = 0.915_965_594_177_219;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

#[test]
fn identity_matrix_double_series() {
    let cfg = Config::default();
    let d = ShintaniDatum::new(vec![1.0, 0.0, 0.0, 1.0], vec![0.5, 0.5], vec![0.5, 0.5]).unwrap();
    let v = integral_L(&SpectralPoint::real(&[2.0, 2.0]).unwrap(), &d, &cfg.quad).unwrap();
    let expect = (4.0 * CATALAN).powi(2);
    assert!((v.value - c(expect, 0.0)).norm() < 1e-10, "{v:?}");
}

#[test]
fn negated_matrix_r1() {
    // L(s, −A, x, y) = −e(−y) L(s, A, 1 − x, 1 − y)
    let cfg = Config::default();
    let s = SpectralPoint::real(&[2.0]).unwrap();
    let neg = L_ordinary(&s, &ShintaniDatum::new(vec![-1.0], vec![0.3], vec![0.25]).unwrap(), &cfg).unwrap();
    let pos = L_ordinary(&s, &ShintaniDatum::new(vec![1.0], vec![0.7], vec![0.75]).unwrap(), &cfg).unwrap();
    assert!((neg.value + e_real(-0.25) * pos.value).norm() < 1e-12);
}

#[test]
fn identity_matrix_fe_factorizes() {
    let cfg = Config::default();
    let (x, y) = ([0.3, 0.65], [0.4, 0.2]);
    let s = SpectralPoint::new(vec![c(0.35, 0.4), c(0.6, -0.7)]).unwrap();
    let chi = ParityType::new(vec![1, 0]).unwrap();
    let d = ShintaniDatum::new(vec![1.0, 0.0, 0.0, 1.0], x.to_vec(), y.to_vec()).unwrap();
    let full = fe_sides(&s, &d, &chi, &cfg).unwrap();
    let (mut lhs, mut rhs) = (c(1.0, 0.0), c(1.0, 0.0));
    for nu in 0..2 {
        let d1 = ShintaniDatum::new(vec![1.0], vec![x[nu]], vec![y[nu]]).unwrap();
        let s1 = SpectralPoint::new(vec![s.values()[nu]]).unwrap();
        let chi1 = ParityType::new(vec![chi.bits()[nu]]).unwrap();
        let one = fe_sides(&s1, &d1, &chi1, &cfg).unwrap();
        assert!(one.residual() < 1e-9);
        lhs *= one.lhs.value;
        rhs *= one.rhs.value;
    }
    assert!((full.lhs.value - lhs).norm() < 1e-9);
    assert!((full.rhs.value - rhs).norm() < 1e-9);
    assert!(full.residual() < 1e-9);
}

#[test]
fn fe_holds_in_extended_coordinates() {
    let cfg = Config::default();
    let mut g = rng(31);
    for r in 1..=2 {
        let d = random_datum(&mut g, r, Entries::Mixed);
        let chi = random_parity(&mut g, r);
        let s = random_point(&mut g, r, 0.2, 0.8, 1.0);
        let shifts = [(2.0, -1.0), (-3.0, 4.0)];
        let moved = d
            .with_torus(
                d.x().iter().zip(&shifts).map(|(v, k)| v + k.0).collect(),
                d.y().iter().zip(&shifts).map(|(v, k)| v + k.1).collect(),
            )
            .unwrap();
        let chk = fe_sides(&s, &moved, &chi, &cfg).unwrap();
        assert!(chk.residual() < 1e-8, "r = {r}: {chk:?}");
    }
}

#[test]
fn dual_fe_through_r_hat() {
    // L̂_χ(s, A, x, y) = i_χ R̂_χ(1 − s, A*, y, −x)
    let cfg = Config::default();
    let mut g = rng(77);
    for r in 1..=2 {
        let d = random_datum(&mut g, r, Entries::Mixed);
        let chi = random_parity(&mut g, r);
        let s = random_point(&mut g, r, 0.25, 0.75, 0.8);
        let lhs = L_completed(&s, &d, &chi, &cfg).unwrap();
        let dual = d.dual().unwrap();
        let dual = dual.with_torus(d.y().to_vec(), d.x().iter().map(|v| -v).collect()).unwrap();
        let rhs = R_family(&s.reflect(), &dual, &chi, true, &cfg).unwrap();
        assert!((lhs.value - chi.i_chi() * rhs.value).norm() < 1e-8, "r = {r}");
    }
}

#[test]
fn reflection_matches_direct_in_strip() {
    let cfg = Config::default();
    let mut g = rng(5);
    for i in 0..6 {
        let r = 1 + i % 2;
        let d = random_datum(&mut g, r, Entries::Mixed);
        let chi = random_parity(&mut g, r);
        let s = random_point(&mut g, r, 0.2, 0.8, 1.0);
        let direct = L_normalized(&s, &d, &chi, &cfg).unwrap();
        let reflected = continue_L(&s, &d, &chi, &cfg).unwrap();
        assert!((direct.value - reflected.value).norm() < 1e-8, "#{i}: {direct:?} {reflected:?}");
    }
}

#[test]
fn mixed_sign_error_estimate_at_two() {
    let cfg = Config::default();
    let d = ShintaniDatum::new(vec![1.2, -0.6, 0.7, 1.5], vec![0.3, 0.8], vec![0.45, 0.2]).unwrap();
    let s = SpectralPoint::new(vec![c(2.0, 0.0), c(2.0, 0.0)]).unwrap();
    let v = L_ordinary(&s, &d, &cfg).unwrap();
    assert!(v.err <= 1e-9, "{v:?}");
}
