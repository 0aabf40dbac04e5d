use nalgebra::DMatrix;
use num_complex::Complex64;

use super::check_non_integer;
use crate::error::{Error, Result};

/// The matrix A with its determinant and dual A* = (A^t)^{-1}, plus the torus point (x, y).
///
/// Matrices are stored row-major. Linear forms follow the row convention
/// (tA)_ν = Σ_μ t_μ a_μν.
#[derive(Debug, Clone, PartialEq)]
pub struct ShintaniDatum {
    r: usize,
    a: Vec<f64>,
    det: f64,
    astar: Vec<f64>,
    x: Vec<f64>,
    y: Vec<f64>,
}

impl ShintaniDatum {
    pub fn new(a: Vec<f64>, x: Vec<f64>, y: Vec<f64>) -> Result<Self> {
        let r = x.len();
        if r == 0 {
            return Err(Error::InvalidInput("degree r must be at least 1".into()));
        }
        if a.len() != r * r {
            return Err(Error::Dimension {
                expected: r * r,
                got: a.len(),
            });
        }
        if y.len() != r {
            return Err(Error::Dimension {
                expected: r,
                got: y.len(),
            });
        }
        if a.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidInput("matrix has non-finite entries".into()));
        }
        check_non_integer("x", &x)?;
        check_non_integer("y", &y)?;

        let m = DMatrix::from_row_slice(r, r, &a);
        let det = m.determinant();
        let scale = a.iter().fold(0.0f64, |acc, v| acc.max(v.abs()));
        if det == 0.0 || !det.is_finite() || det.abs() <= 1e-14 * scale.powi(r as i32) {
            return Err(Error::SingularMatrix);
        }
        let inv = m.clone().try_inverse().ok_or(Error::SingularMatrix)?;
        let astar_m = inv.transpose();
        let check = &m * astar_m.transpose();
        for i in 0..r {
            for j in 0..r {
                let target = if i == j { 1.0 } else { 0.0 };
                if (check[(i, j)] - target).abs() > 1e-12 {
                    return Err(Error::SingularMatrix);
                }
            }
        }
        let mut astar = vec![0.0; r * r];
        for i in 0..r {
            for j in 0..r {
                astar[i * r + j] = astar_m[(i, j)];
            }
        }
        Ok(Self {
            r,
            a,
            det,
            astar,
            x,
            y,
        })
    }

    pub fn from_rows(rows: &[Vec<f64>], x: Vec<f64>, y: Vec<f64>) -> Result<Self> {
        Self::new(rows.iter().flatten().copied().collect(), x, y)
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn a(&self, i: usize, j: usize) -> f64 {
        self.a[i * self.r + j]
    }

    pub fn astar(&self, i: usize, j: usize) -> f64 {
        self.astar[i * self.r + j]
    }

    pub fn matrix(&self) -> &[f64] {
        &self.a
    }

    pub fn dual_matrix(&self) -> &[f64] {
        &self.astar
    }

    pub fn det(&self) -> f64 {
        self.det
    }

    pub fn x(&self) -> &[f64] {
        &self.x
    }

    pub fn y(&self) -> &[f64] {
        &self.y
    }

    pub fn max_abs_entry(&self) -> f64 {
        self.a.iter().fold(0.0f64, |acc, v| acc.max(v.abs()))
    }

    pub fn is_positive(&self) -> bool {
        self.a.iter().all(|v| *v > 0.0)
    }

    /// Same matrix, new torus point.
    pub fn with_torus(&self, x: Vec<f64>, y: Vec<f64>) -> Result<Self> {
        Self::new(self.a.clone(), x, y)
    }

    /// (A*, y, 1 − x), the datum on the reflected side of the functional equation.
    pub fn dual(&self) -> Result<Self> {
        Self::new(
            self.astar.clone(),
            self.y.clone(),
            self.x.iter().map(|v| 1.0 - v).collect(),
        )
    }

    /// Row ν of A multiplied by factors[ν].
    pub fn scale_rows(&self, factors: &[f64]) -> Result<Self> {
        let mut a = self.a.clone();
        for (i, f) in factors.iter().enumerate() {
            for v in &mut a[i * self.r..(i + 1) * self.r] {
                *v *= f;
            }
        }
        Self::new(a, self.x.clone(), self.y.clone())
    }

    /// u = tA with t a row vector.
    pub fn row_form(&self, t: &[f64]) -> Vec<f64> {
        row_form(&self.a, self.r, t)
    }
}

/// (tB)_ν = Σ_μ t_μ b_μν for a row-major r×r matrix.
pub fn row_form(b: &[f64], r: usize, t: &[f64]) -> Vec<f64> {
    let mut u = vec![0.0; r];
    for (mu, tm) in t.iter().enumerate() {
        for nu in 0..r {
            u[nu] += tm * b[mu * r + nu];
        }
    }
    u
}

pub fn row_form_complex(b: &[f64], r: usize, t: &[Complex64]) -> Vec<Complex64> {
    let mut u = vec![Complex64::new(0.0, 0.0); r];
    for (mu, tm) in t.iter().enumerate() {
        for nu in 0..r {
            u[nu] += tm * b[mu * r + nu];
        }
    }
    u
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dual_is_inverse_transpose() {
        let d = ShintaniDatum::new(vec![1.8, -1.6, -0.9, 1.7], vec![0.15, 0.85], vec![0.1, 0.88])
            .unwrap();
        assert!((d.det() - (1.8 * 1.7 - 1.6 * 0.9)).abs() < 1e-14);
        for i in 0..2 {
            for j in 0..2 {
                let s: f64 = (0..2).map(|k| d.a(i, k) * d.astar(j, k)).sum();
                assert!((s - if i == j { 1.0 } else { 0.0 }).abs() < 1e-14);
            }
        }
        let dd = d.dual().unwrap().dual().unwrap();
        for (p, q) in dd.matrix().iter().zip(d.matrix()) {
            assert!((p - q).abs() < 1e-14);
        }
        assert!((dd.x()[0] - (1.0 - d.x()[0])).abs() < 1e-15);
        assert!((dd.y()[0] - (1.0 - d.y()[0])).abs() < 1e-15);
    }

    #[test]
    fn rejects_bad_input() {
        assert_eq!(
            ShintaniDatum::new(vec![1.0, 2.0, 2.0, 4.0], vec![0.5, 0.5], vec![0.5, 0.5]),
            Err(Error::SingularMatrix)
        );
        assert!(matches!(
            ShintaniDatum::new(vec![1.0], vec![1.0 + 1e-10], vec![0.5]),
            Err(Error::NearInteger { name: "x", .. })
        ));
        assert!(ShintaniDatum::new(vec![1.0, 0.0], vec![0.5], vec![0.5]).is_err());
    }

    #[test]
    fn row_convention() {
        let d = ShintaniDatum::new(vec![1.0, 2.0, 3.0, 4.0], vec![0.5, 0.5], vec![0.5, 0.5])
            .unwrap();
        assert_eq!(d.row_form(&[1.0, 0.0]), vec![1.0, 2.0]);
        assert_eq!(d.row_form(&[0.0, 1.0]), vec![3.0, 4.0]);
    }
}
