use num_complex::Complex64;

use crate::error::{Error, Result};

/// Parity type χ ∈ {0,1}^r.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ParityType {
    bits: Vec<u8>,
}

impl ParityType {
    pub fn new(bits: Vec<u8>) -> Result<Self> {
        if bits.is_empty() {
            return Err(Error::InvalidInput("parity type must have r >= 1 bits".into()));
        }
        if let Some(b) = bits.iter().find(|b| **b > 1) {
            return Err(Error::InvalidInput(format!("parity bit {b} is not 0 or 1")));
        }
        Ok(Self { bits })
    }

    pub fn zeros(r: usize) -> Self {
        Self { bits: vec![0; r] }
    }

    pub fn ones(r: usize) -> Self {
        Self { bits: vec![1; r] }
    }

    /// All 2^r parity types, in binary counting order with bit 0 first.
    pub fn all(r: usize) -> impl Iterator<Item = ParityType> {
        (0..1usize << r).map(move |m| Self {
            bits: (0..r).map(|nu| ((m >> nu) & 1) as u8).collect(),
        })
    }

    pub fn r(&self) -> usize {
        self.bits.len()
    }

    pub fn bits(&self) -> &[u8] {
        &self.bits
    }

    pub fn weight(&self) -> u32 {
        self.bits.iter().map(|b| u32::from(*b)).sum()
    }

    /// i_χ = i^{Σχ}, exact.
    pub fn i_chi(&self) -> Complex64 {
        match self.weight() % 4 {
            0 => Complex64::new(1.0, 0.0),
            1 => Complex64::new(0.0, 1.0),
            2 => Complex64::new(-1.0, 0.0),
            _ => Complex64::new(0.0, -1.0),
        }
    }

    /// χ + 1_μ in (Z/2)^r.
    pub fn flip(&self, mu: usize) -> Self {
        let mut bits = self.bits.clone();
        bits[mu] ^= 1;
        Self { bits }
    }

    /// 1 − χ.
    pub fn complement(&self) -> Self {
        Self {
            bits: self.bits.iter().map(|b| b ^ 1).collect(),
        }
    }
}

/// σ ∈ {±1}^r.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SignVector {
    sigma: Vec<i8>,
}

impl SignVector {
    pub fn new(sigma: Vec<i8>) -> Result<Self> {
        if sigma.is_empty() || sigma.iter().any(|s| *s != 1 && *s != -1) {
            return Err(Error::InvalidInput("sign vector entries must be +1 or -1".into()));
        }
        Ok(Self { sigma })
    }

    /// All 2^r sign vectors; the first is all +1.
    pub fn all(r: usize) -> impl Iterator<Item = SignVector> {
        (0..1usize << r).map(move |m| Self {
            sigma: (0..r)
                .map(|nu| if (m >> nu) & 1 == 1 { -1 } else { 1 })
                .collect(),
        })
    }

    pub fn r(&self) -> usize {
        self.sigma.len()
    }

    pub fn entries(&self) -> &[i8] {
        &self.sigma
    }

    /// ∏ σ_ν^{bit_ν}.
    pub fn power(&self, bits: &[u8]) -> f64 {
        let neg = self
            .sigma
            .iter()
            .zip(bits)
            .filter(|(s, b)| **s < 0 && **b == 1)
            .count();
        if neg % 2 == 0 {
            1.0
        } else {
            -1.0
        }
    }

    pub fn mul(&self, other: &SignVector) -> SignVector {
        Self {
            sigma: self.sigma.iter().zip(&other.sigma).map(|(a, b)| a * b).collect(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Region {
    Right,
    Left,
    Strip,
    Lattice,
    Outside,
}

/// Default distance kept from the line Re s = 0 (and Re s = 1 after reflection).
pub const DEFAULT_MARGIN: f64 = 0.05;

#[derive(Debug, Clone, PartialEq)]
pub struct SpectralPoint {
    s: Vec<Complex64>,
}

impl SpectralPoint {
    pub fn new(s: Vec<Complex64>) -> Result<Self> {
        if s.is_empty() {
            return Err(Error::InvalidInput("spectral point must have r >= 1 entries".into()));
        }
        if s.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidInput("spectral point has non-finite entries".into()));
        }
        Ok(Self { s })
    }

    pub fn real(s: &[f64]) -> Result<Self> {
        Self::new(s.iter().map(|v| Complex64::new(*v, 0.0)).collect())
    }

    pub fn r(&self) -> usize {
        self.s.len()
    }

    pub fn values(&self) -> &[Complex64] {
        &self.s
    }

    /// Integer vector if every entry is an exact integer.
    pub fn lattice(&self) -> Option<Vec<i64>> {
        self.s
            .iter()
            .map(|z| {
                if z.im == 0.0 && z.re == z.re.round() && z.re.abs() < 1e15 {
                    Some(z.re as i64)
                } else {
                    None
                }
            })
            .collect()
    }

    pub fn region(&self, delta: f64) -> Region {
        if self.lattice().is_some() {
            return Region::Lattice;
        }
        let right = self.s.iter().all(|z| z.re > delta);
        let left = self.s.iter().all(|z| 1.0 - z.re > delta);
        match (right, left) {
            (true, true) => Region::Strip,
            (true, false) => Region::Right,
            (false, true) => Region::Left,
            (false, false) => Region::Outside,
        }
    }

    pub fn reflect(&self) -> Self {
        Self {
            s: self.s.iter().map(|z| 1.0 - z).collect(),
        }
    }

    /// s + d·1_μ.
    pub fn shift(&self, mu: usize, d: f64) -> Self {
        let mut s = self.s.clone();
        s[mu] += d;
        Self { s }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    Series,
    Integral,
    Contour,
    Reflection,
    Taylor,
}

impl Method {
    pub fn as_str(&self) -> &'static str {
        match self {
            Method::Series => "series",
            Method::Integral => "integral",
            Method::Contour => "contour",
            Method::Reflection => "reflection",
            Method::Taylor => "taylor",
        }
    }
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A value with an estimated absolute error and the method that produced it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvalResult {
    pub value: Complex64,
    pub err: f64,
    pub method: Method,
}

impl EvalResult {
    pub fn new(value: Complex64, err: f64, method: Method) -> Self {
        Self { value, err, method }
    }

    pub fn exact(value: Complex64, method: Method) -> Self {
        Self::new(value, 0.0, method)
    }

    /// Multiplies by a factor known to relative accuracy `rel`.
    pub fn scaled(self, factor: Complex64, rel: f64) -> Self {
        let value = self.value * factor;
        Self {
            value,
            err: self.err * factor.norm() + rel * value.norm(),
            method: self.method,
        }
    }
}
