//! Problem files for `shintani eval`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use shintani::kernel::{ParityType, ShintaniDatum, SpectralPoint};
use shintani::lfunction::{MethodChoice, Variant};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Cplx {
    pub re: f64,
    pub im: f64,
}

impl From<Complex64> for Cplx {
    fn from(z: Complex64) -> Self {
        Self { re: z.re, im: z.im }
    }
}

impl From<Cplx> for Complex64 {
    fn from(z: Cplx) -> Self {
        Complex64::new(z.re, z.im)
    }
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum Matrix {
    Rows(Vec<Vec<f64>>),
    Flat(Vec<f64>),
}

/// Either a list of r-tuples or a flat list read r entries at a time.
#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum Points {
    Nested(Vec<Vec<Cplx>>),
    Flat(Vec<Cplx>),
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ProblemFile {
    r: usize,
    #[serde(rename = "A")]
    a: Matrix,
    x: Vec<f64>,
    y: Vec<f64>,
    #[serde(default)]
    chi: Option<Vec<u8>>,
    s: Points,
    #[serde(default)]
    variant: Option<String>,
    #[serde(default)]
    method: Option<String>,
}

#[derive(Debug, Clone)]
pub struct Problem {
    pub datum: ShintaniDatum,
    pub chi: ParityType,
    pub points: Vec<SpectralPoint>,
    pub variant: Variant,
    pub method: MethodChoice,
}

pub fn parse(text: &str) -> Result<Problem, String> {
    let file: ProblemFile = serde_json::from_str(text).map_err(|e| format!("problem file: {e}"))?;
    let r = file.r;
    if r == 0 {
        return Err("r must be at least 1".into());
    }
    let a = match file.a {
        Matrix::Flat(v) => v,
        Matrix::Rows(rows) => {
            if rows.len() != r || rows.iter().any(|row| row.len() != r) {
                return Err(format!("A must be {r}×{r}"));
            }
            rows.concat()
        }
    };
    if a.len() != r * r {
        return Err(format!("A has {} entries, expected {}", a.len(), r * r));
    }
    if file.x.len() != r || file.y.len() != r {
        return Err(format!("x and y must have {r} entries"));
    }
    let datum = ShintaniDatum::new(a, file.x, file.y).map_err(|e| e.to_string())?;

    let variant: Variant = match &file.variant {
        Some(v) => v.parse().map_err(|e: shintani::Error| e.to_string())?,
        None => Variant::Normalized,
    };
    let method: MethodChoice = match &file.method {
        Some(m) => m.parse().map_err(|e: shintani::Error| e.to_string())?,
        None => MethodChoice::Auto,
    };
    let chi = match file.chi {
        Some(bits) if bits.len() == r => ParityType::new(bits).map_err(|e| e.to_string())?,
        Some(bits) => return Err(format!("chi has {} entries, expected {r}", bits.len())),
        None if variant == Variant::Ordinary => ParityType::zeros(r),
        None => return Err(format!("chi is required for variant {variant}")),
    };

    let tuples: Vec<Vec<Cplx>> = match file.s {
        Points::Nested(v) => v,
        Points::Flat(v) => {
            if v.len() % r != 0 {
                return Err(format!("s has {} entries, not a multiple of r = {r}", v.len()));
            }
            v.chunks(r).map(<[Cplx]>::to_vec).collect()
        }
    };
    if tuples.is_empty() {
        return Err("s is empty".into());
    }
    let points = tuples
        .into_iter()
        .enumerate()
        .map(|(i, t)| {
            if t.len() != r {
                return Err(format!("s[{i}] has {} entries, expected {r}", t.len()));
            }
            SpectralPoint::new(t.into_iter().map(Complex64::from).collect()).map_err(|e| format!("s[{i}]: {e}"))
        })
        .collect::<Result<Vec<_>, _>>()?;

    Ok(Problem {
        datum,
        chi,
        points,
        variant,
        method,
    })
}
