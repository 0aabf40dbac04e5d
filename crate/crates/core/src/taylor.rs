//! Taylor coefficients of φ, truncated multivariate power series, the numbers
//! B_k(A, x, y) and the special values of L_χ at integers.

use num_complex::Complex64;
use std::f64::consts::PI;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::kernel::{
    check_non_integer, dot, e_real, reduce_torus, ParityType, ShintaniDatum, TWO_PI,
};

/// Largest total degree accepted by [`compose_b`].
pub const MAX_DEGREE: usize = 16;
/// Largest number of variables accepted by [`compose_b`].
pub const MAX_VARIABLES: usize = 6;

/// Coefficients c_0..c_K of φ(u, x, y) = Σ c_n u^n.
pub fn phi_coeffs(x: f64, y: f64, k: usize) -> Result<Vec<Complex64>> {
    check_non_integer("y", &[y])?;
    let ey = e_real(y);
    let inv = 1.0 / (1.0 - ey);
    // exponential coefficients (−2π)^j / j!
    let mut expc = Vec::with_capacity(k + 1);
    let mut term = 1.0;
    for j in 0..=k {
        if j > 0 {
            term *= -TWO_PI / j as f64;
        }
        expc.push(term);
    }
    let mut c: Vec<Complex64> = Vec::with_capacity(k + 1);
    let mut rhs_term = 1.0;
    for n in 0..=k {
        if n > 0 {
            rhs_term *= -TWO_PI * x / n as f64;
        }
        let mut acc = Complex64::new(0.0, 0.0);
        for (j, cj) in c.iter().enumerate() {
            acc += expc[n - j] * cj;
        }
        c.push((rhs_term + ey * acc) * inv);
    }
    Ok(c)
}

/// A multi-index k ∈ Z_{≥0}^r.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MultiIndex(pub Vec<u32>);

impl MultiIndex {
    pub fn new(k: Vec<u32>) -> Self {
        Self(k)
    }

    pub fn r(&self) -> usize {
        self.0.len()
    }

    pub fn order(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn factorial(&self) -> f64 {
        self.0.iter().map(|k| factorial(*k)).product()
    }

    /// k + 1_μ.
    pub fn plus(&self, mu: usize) -> Self {
        let mut k = self.0.clone();
        k[mu] += 1;
        Self(k)
    }

    /// k − (1,…,1), if every entry is at least 1.
    pub fn minus_ones(&self) -> Option<Self> {
        self.0
            .iter()
            .map(|k| k.checked_sub(1))
            .collect::<Option<Vec<_>>>()
            .map(Self)
    }

    /// Whether k ≡ bits (mod 2) entrywise.
    pub fn congruent(&self, bits: &[u8]) -> bool {
        self.0.iter().zip(bits).all(|(k, b)| (k % 2) as u8 == *b)
    }

    /// Every multi-index with entries in 0..=kmax, in lexicographic order.
    pub fn cube(r: usize, kmax: u32) -> Vec<MultiIndex> {
        let mut out = vec![MultiIndex(vec![])];
        for _ in 0..r {
            let mut next = Vec::new();
            for k in &out {
                for v in 0..=kmax {
                    let mut kk = k.0.clone();
                    kk.push(v);
                    next.push(MultiIndex(kk));
                }
            }
            out = next;
        }
        out
    }
}

fn factorial(n: u32) -> f64 {
    (2..=n).map(f64::from).product()
}

/// Graded monomial ordering with successor links, shared by all series of one shape.
#[derive(Debug)]
struct MonomialTable {
    r: usize,
    degree: usize,
    exps: Vec<Vec<u32>>,
    degs: Vec<usize>,
    /// succ[i*r + μ] = index of exps[i] + 1_μ, or NONE beyond the cap
    succ: Vec<usize>,
    /// first index of each total degree, plus the length
    starts: Vec<usize>,
}

const NONE: usize = usize::MAX;

impl MonomialTable {
    fn new(r: usize, degree: usize) -> Self {
        let mut exps: Vec<Vec<u32>> = Vec::new();
        let mut starts = Vec::with_capacity(degree + 2);
        for d in 0..=degree {
            starts.push(exps.len());
            let mut level = Vec::new();
            compositions(r, d as u32, &mut vec![0; r], 0, &mut level);
            exps.extend(level);
        }
        starts.push(exps.len());
        let index: std::collections::HashMap<Vec<u32>, usize> =
            exps.iter().cloned().enumerate().map(|(i, e)| (e, i)).collect();
        let degs: Vec<usize> = exps.iter().map(|e| e.iter().sum::<u32>() as usize).collect();
        let mut succ = vec![NONE; exps.len() * r];
        for (i, e) in exps.iter().enumerate() {
            if degs[i] == degree {
                continue;
            }
            for mu in 0..r {
                let mut f = e.clone();
                f[mu] += 1;
                succ[i * r + mu] = index[&f];
            }
        }
        Self {
            r,
            degree,
            exps,
            degs,
            succ,
            starts,
        }
    }

    fn len(&self) -> usize {
        self.exps.len()
    }

    fn index_of(&self, k: &[u32]) -> Option<usize> {
        let mut idx = 0;
        for (mu, e) in k.iter().enumerate() {
            for _ in 0..*e {
                idx = self.succ[idx * self.r + mu];
                if idx == NONE {
                    return None;
                }
            }
        }
        Some(idx)
    }
}

// Exponent vectors of total degree d, in reverse lexicographic order.
fn compositions(r: usize, d: u32, cur: &mut Vec<u32>, pos: usize, out: &mut Vec<Vec<u32>>) {
    if pos == r - 1 {
        cur[pos] = d;
        out.push(cur.clone());
        return;
    }
    for v in (0..=d).rev() {
        cur[pos] = v;
        compositions(r, d - v, cur, pos + 1, out);
    }
    cur[pos] = 0;
}

/// Power series in r variables truncated at total degree K.
#[derive(Debug, Clone)]
pub struct TruncatedSeries {
    table: Arc<MonomialTable>,
    coeffs: Vec<Complex64>,
}

impl TruncatedSeries {
    pub fn zero(r: usize, degree: usize) -> Self {
        let table = Arc::new(MonomialTable::new(r, degree));
        let coeffs = vec![Complex64::new(0.0, 0.0); table.len()];
        Self { table, coeffs }
    }

    fn zero_like(&self) -> Self {
        Self {
            table: Arc::clone(&self.table),
            coeffs: vec![Complex64::new(0.0, 0.0); self.table.len()],
        }
    }

    fn constant_like(&self, c: Complex64) -> Self {
        let mut s = self.zero_like();
        s.coeffs[0] = c;
        s
    }

    pub fn constant(r: usize, degree: usize, c: Complex64) -> Self {
        let mut s = Self::zero(r, degree);
        s.coeffs[0] = c;
        s
    }

    /// Σ_μ a_μ t_μ.
    pub fn linear(r: usize, degree: usize, a: &[f64]) -> Self {
        let mut s = Self::zero(r, degree);
        if degree > 0 {
            for (mu, am) in a.iter().enumerate() {
                s.coeffs[s.table.succ[mu]] = Complex64::new(*am, 0.0);
            }
        }
        s
    }

    pub fn r(&self) -> usize {
        self.table.r
    }

    pub fn degree(&self) -> usize {
        self.table.degree
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Coefficient of t^k; zero beyond the truncation degree.
    pub fn coeff(&self, k: &MultiIndex) -> Complex64 {
        self.table
            .index_of(&k.0)
            .map_or(Complex64::new(0.0, 0.0), |i| self.coeffs[i])
    }

    pub fn set_coeff(&mut self, k: &MultiIndex, v: Complex64) -> Result<()> {
        let i = self
            .table
            .index_of(&k.0)
            .ok_or_else(|| Error::CapExceeded(format!("multi-index {:?} beyond degree", k.0)))?;
        self.coeffs[i] = v;
        Ok(())
    }

    /// Iterates (exponent, coefficient) in graded order.
    pub fn terms(&self) -> impl Iterator<Item = (&[u32], Complex64)> + '_ {
        self.table.exps.iter().map(|e| e.as_slice()).zip(self.coeffs.iter().copied())
    }

    fn assert_same_shape(&self, other: &Self) {
        assert!(
            self.table.r == other.table.r && self.table.degree == other.table.degree,
            "series shapes differ"
        );
    }

    pub fn add(&self, other: &Self) -> Self {
        self.assert_same_shape(other);
        let mut out = self.clone();
        for (a, b) in out.coeffs.iter_mut().zip(&other.coeffs) {
            *a += b;
        }
        out
    }

    pub fn scale(&self, c: Complex64) -> Self {
        let mut out = self.clone();
        for a in &mut out.coeffs {
            *a *= c;
        }
        out
    }

    /// Product truncated at the common degree.
    pub fn mul(&self, other: &Self) -> Self {
        self.assert_same_shape(other);
        let t = &self.table;
        let mut out = self.zero_like();
        for (i, ci) in self.coeffs.iter().enumerate() {
            if *ci == Complex64::new(0.0, 0.0) {
                continue;
            }
            let room = t.degree - t.degs[i];
            for j in 0..t.starts[room + 1] {
                let cj = other.coeffs[j];
                if cj == Complex64::new(0.0, 0.0) {
                    continue;
                }
                let mut idx = i;
                for (mu, e) in t.exps[j].iter().enumerate() {
                    for _ in 0..*e {
                        idx = t.succ[idx * t.r + mu];
                    }
                }
                out.coeffs[idx] += ci * cj;
            }
        }
        out
    }

    /// Product with the linear form Σ_μ a_μ t_μ.
    pub fn mul_linear(&self, a: &[f64]) -> Self {
        let t = &self.table;
        let mut out = self.zero_like();
        for (i, ci) in self.coeffs.iter().enumerate() {
            if t.degs[i] == t.degree {
                break;
            }
            for (mu, am) in a.iter().enumerate() {
                out.coeffs[t.succ[i * t.r + mu]] += ci * am;
            }
        }
        out
    }

    /// Σ_n p_n L^n for the linear form L = Σ a_μ t_μ, by Horner's rule.
    pub fn compose_univariate(r: usize, degree: usize, p: &[Complex64], a: &[f64]) -> Self {
        let base = Self::zero(r, degree);
        let top = p.len().min(degree + 1);
        if top == 0 {
            return base;
        }
        let mut acc = base.constant_like(p[top - 1]);
        for n in (0..top - 1).rev() {
            acc = acc.mul_linear(a);
            acc.coeffs[0] += p[n];
        }
        acc
    }

    /// Evaluates the truncated polynomial at a point.
    pub fn eval(&self, t: &[f64]) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for (e, c) in self.terms() {
            let m: f64 = e.iter().zip(t).map(|(k, v)| v.powi(*k as i32)).product();
            acc += c * m;
        }
        acc
    }

    /// Largest coefficient modulus in the given total degree.
    pub fn degree_norm(&self, d: usize) -> f64 {
        let t = &self.table;
        self.coeffs[t.starts[d]..t.starts[d + 1]]
            .iter()
            .fold(0.0f64, |acc, c| acc.max(c.norm()))
    }
}

/// The numbers B_k(A, x, y) for |k| ≤ K, defined by F(tA, x, y) = Σ B_k (−2πt)^k / k!.
#[derive(Debug, Clone)]
pub struct BernoulliTable {
    series: TruncatedSeries,
}

impl BernoulliTable {
    /// Taylor series of F(tA, x, y) in t.
    pub fn series(&self) -> &TruncatedSeries {
        &self.series
    }

    pub fn degree(&self) -> usize {
        self.series.degree()
    }

    pub fn b(&self, k: &MultiIndex) -> Result<Complex64> {
        if k.r() != self.series.r() {
            return Err(Error::Dimension {
                expected: self.series.r(),
                got: k.r(),
            });
        }
        if k.order() as usize > self.degree() {
            return Err(Error::CapExceeded(format!(
                "|k| = {} exceeds table degree {}",
                k.order(),
                self.degree()
            )));
        }
        let scale = k.factorial() / (-TWO_PI).powi(k.order() as i32);
        Ok(self.series.coeff(k) * scale)
    }
}

/// Expands F(tA, x, y) to total degree K and exposes B_k.
pub fn compose_b(datum: &ShintaniDatum, degree: usize) -> Result<BernoulliTable> {
    let r = datum.r();
    if degree > MAX_DEGREE {
        return Err(Error::CapExceeded(format!(
            "degree {degree} exceeds {MAX_DEGREE}"
        )));
    }
    if r > MAX_VARIABLES {
        return Err(Error::CapExceeded(format!("r = {r} exceeds {MAX_VARIABLES}")));
    }
    let mut acc: Option<TruncatedSeries> = None;
    for nu in 0..r {
        let c = phi_coeffs(datum.x()[nu], datum.y()[nu], degree)?;
        let column: Vec<f64> = (0..r).map(|mu| datum.a(mu, nu)).collect();
        let factor = TruncatedSeries::compose_univariate(r, degree, &c, &column);
        acc = Some(match acc {
            None => factor,
            Some(a) => a.mul(&factor),
        });
    }
    Ok(BernoulliTable {
        series: acc.expect("r >= 1"),
    })
}

/// B_k(A, x, y) for a single multi-index.
pub fn bernoulli(datum: &ShintaniDatum, k: &MultiIndex) -> Result<Complex64> {
    compose_b(datum, k.order() as usize)?.b(k)
}

fn check_shape(k: &MultiIndex, datum: &ShintaniDatum, chi: &ParityType) -> Result<()> {
    if k.r() != datum.r() || chi.r() != datum.r() {
        return Err(Error::Dimension {
            expected: datum.r(),
            got: if k.r() != datum.r() { k.r() } else { chi.r() },
        });
    }
    Ok(())
}

/// L_χ(−k, A, x, y): B_k when k ≡ 1 − χ (mod 2), otherwise exactly zero.
pub fn special_value_neg(k: &MultiIndex, datum: &ShintaniDatum, chi: &ParityType) -> Result<Complex64> {
    check_shape(k, datum, chi)?;
    if k.order() as usize > MAX_DEGREE {
        return Err(Error::CapExceeded(format!("|k| = {} exceeds {MAX_DEGREE}", k.order())));
    }
    if !k.congruent(chi.complement().bits()) {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let red = reduce_torus(datum.x(), datum.y())?;
    let base = datum.with_torus(red.x0, red.y0)?;
    Ok(red.phase * bernoulli(&base, k)?)
}

/// L_χ(k, A, x, y) for k ≥ 1 with k ≡ χ (mod 2):
/// |det A|^{-1} e(−xy) B_{k−1}(A*, y, 1−x) (2πi)^{|k|} / (2^r (k−1)!).
pub fn special_value_pos(k: &MultiIndex, datum: &ShintaniDatum, chi: &ParityType) -> Result<Complex64> {
    check_shape(k, datum, chi)?;
    let km1 = k
        .minus_ones()
        .ok_or_else(|| Error::InvalidInput("positive special values need every k_ν >= 1".into()))?;
    if !k.congruent(chi.bits()) {
        return Err(Error::ParityMismatch {
            k: k.0.clone(),
            chi: chi.bits().to_vec(),
        });
    }
    if km1.order() as usize > MAX_DEGREE {
        return Err(Error::CapExceeded(format!("|k−1| = {} exceeds {MAX_DEGREE}", km1.order())));
    }
    let red = reduce_torus(datum.x(), datum.y())?;
    let r = datum.r();
    let dual = ShintaniDatum::new(
        datum.dual_matrix().to_vec(),
        red.y0.clone(),
        red.x0.iter().map(|v| 1.0 - v).collect(),
    )?;
    let b = bernoulli(&dual, &km1)?;
    let order = k.order() as i32;
    let two_pi_i = Complex64::new(0.0, 2.0 * PI).powi(order);
    let denom = datum.det().abs() * 2f64.powi(r as i32) * km1.factorial();
    Ok(red.phase * e_real(-dot(&red.x0, &red.y0)) * b * two_pi_i / denom)
}
