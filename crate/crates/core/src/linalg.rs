//! Dense eigenvalues and polynomial root finding.

use crate::error::{MocError, Result};
use nalgebra::{DMatrix, Schur};
use num_complex::Complex64;
use std::cmp::Ordering;

/// Dimension limit of [`eig_dense`].
pub const EIG_MAX_DIM: usize = 4096;

fn sort_by_modulus(v: &mut [Complex64]) {
    v.sort_by(|a, b| {
        b.norm()
            .partial_cmp(&a.norm())
            .unwrap_or(Ordering::Equal)
            .then(b.arg().partial_cmp(&a.arg()).unwrap_or(Ordering::Equal))
    });
}

/// All eigenvalues of a real square matrix, sorted by descending modulus.
pub fn eig_dense(a: &DMatrix<f64>) -> Result<Vec<Complex64>> {
    let n = a.nrows();
    if n != a.ncols() || n > EIG_MAX_DIM {
        return Err(MocError::Shape(format!("eig_dense needs a square matrix of dimension <= {EIG_MAX_DIM}")));
    }
    if n == 0 {
        return Ok(Vec::new());
    }
    if !a.iter().all(|v| v.is_finite()) {
        return Err(MocError::Shape("matrix has non-finite entries".into()));
    }
    let schur = Schur::try_new(a.clone(), f64::EPSILON, 60 * n.max(10))
        .ok_or_else(|| MocError::NoConvergence(format!("Schur iteration for dimension {n}")))?;
    let mut ev: Vec<Complex64> = schur.complex_eigenvalues().iter().copied().collect();
    sort_by_modulus(&mut ev);
    Ok(ev)
}

/// Diagonal shift for a second attempt when QR stalls, as it does on
/// spectra symmetric about zero such as `±1` with multiplicity.
const ESCAPE_SHIFT: Complex64 = Complex64::new(0.375, 0.203_125);

fn complex_schur_eigenvalues(a: DMatrix<Complex64>) -> Option<Vec<Complex64>> {
    let n = a.nrows();
    let (_, t) = Schur::try_new(a, f64::EPSILON, 60 * n.max(10))?.unpack();
    Some(t.diagonal().iter().copied().collect())
}

/// All eigenvalues of a complex square matrix, sorted by descending modulus.
pub fn eig_dense_complex(a: &DMatrix<Complex64>) -> Result<Vec<Complex64>> {
    let n = a.nrows();
    if n != a.ncols() || n > EIG_MAX_DIM {
        return Err(MocError::Shape(format!("eig_dense needs a square matrix of dimension <= {EIG_MAX_DIM}")));
    }
    if n == 0 {
        return Ok(Vec::new());
    }
    let mut ev = complex_schur_eigenvalues(a.clone())
        .or_else(|| {
            let shifted = a + DMatrix::from_diagonal_element(n, n, ESCAPE_SHIFT);
            complex_schur_eigenvalues(shifted).map(|ev| ev.into_iter().map(|z| z - ESCAPE_SHIFT).collect())
        })
        .ok_or_else(|| MocError::NoConvergence(format!("Schur iteration for dimension {n}")))?;
    sort_by_modulus(&mut ev);
    Ok(ev)
}

/// Polynomial with complex coefficients in ascending powers.
#[derive(Debug, Clone, PartialEq)]
pub struct Poly(pub Vec<Complex64>);

impl Poly {
    pub fn constant(c: Complex64) -> Self {
        Poly(vec![c])
    }

    /// `c0 + c1 x`.
    pub fn linear(c0: Complex64, c1: Complex64) -> Self {
        Poly(vec![c0, c1])
    }

    /// Product of `(x - r)` over the given roots.
    pub fn from_roots(roots: &[Complex64]) -> Self {
        roots
            .iter()
            .fold(Poly::constant(Complex64::new(1.0, 0.0)), |p, r| p.mul(&Poly::linear(-r, Complex64::new(1.0, 0.0))))
    }

    pub fn degree(&self) -> usize {
        self.0.iter().rposition(|c| *c != Complex64::new(0.0, 0.0)).unwrap_or(0)
    }

    pub fn eval(&self, x: Complex64) -> Complex64 {
        self.0.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, c| acc * x + c)
    }

    /// `Σ |c_i| |x|^i`, the natural scale of rounding errors in `eval`.
    pub fn eval_scale(&self, x: Complex64) -> f64 {
        let r = x.norm();
        self.0.iter().rev().fold(0.0, |acc, c| acc * r + c.norm())
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let n = self.0.len().max(other.0.len());
        let zero = Complex64::new(0.0, 0.0);
        Poly(
            (0..n)
                .map(|i| *self.0.get(i).unwrap_or(&zero) + *other.0.get(i).unwrap_or(&zero))
                .collect(),
        )
    }

    pub fn scale(&self, s: Complex64) -> Poly {
        Poly(self.0.iter().map(|c| c * s).collect())
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.0.is_empty() || other.0.is_empty() {
            return Poly(Vec::new());
        }
        let mut out = vec![Complex64::new(0.0, 0.0); self.0.len() + other.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in other.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly(out)
    }

    /// Removes factors of `x` (exactly zero low-order coefficients) and
    /// returns their count.
    pub fn deflate_zero_roots(&self) -> (Poly, usize) {
        let k = self.0.iter().position(|c| *c != Complex64::new(0.0, 0.0)).unwrap_or(0);
        (Poly(self.0[k..].to_vec()), k)
    }
}

const DK_STEP_TOL: f64 = 1e-14;
const DK_MAX_ITER: usize = 500;
const DK_RESIDUAL_TOL: f64 = 1e-10;

/// All complex roots with multiplicity, by Durand–Kerner simultaneous
/// iteration. Every root is checked against `|p(z)| <= 1e-10 Σ|c_i||z|^i`.
pub fn poly_roots(p: &Poly) -> Result<Vec<Complex64>> {
    let n = p.degree();
    if n == 0 {
        return Err(MocError::InvalidPolynomial("degree must be at least 1".into()));
    }
    if !p.0.iter().all(|c| c.re.is_finite() && c.im.is_finite()) {
        return Err(MocError::InvalidPolynomial("non-finite coefficient".into()));
    }
    let lead = p.0[n];
    let monic = Poly(p.0[..=n].iter().map(|c| c / lead).collect());
    if n == 1 {
        return Ok(vec![-monic.0[0]]);
    }
    // Fujiwara bound on the root moduli
    let bound = (0..n)
        .map(|i| {
            let c = monic.0[i].norm();
            if i == 0 {
                (c / 2.0).powf(1.0 / n as f64)
            } else {
                c.powf(1.0 / (n - i) as f64)
            }
        })
        .fold(0.0f64, f64::max)
        * 2.0;
    let radius = if bound > 0.0 { bound } else { 1.0 };
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| Complex64::from_polar(radius, 0.4 + 2.0 * std::f64::consts::PI * k as f64 / n as f64))
        .collect();
    for _ in 0..DK_MAX_ITER {
        let mut max_step = 0.0f64;
        for k in 0..n {
            let mut den = Complex64::new(1.0, 0.0);
            for j in 0..n {
                if j != k {
                    den *= z[k] - z[j];
                }
            }
            if den == Complex64::new(0.0, 0.0) {
                // coincident iterates: nudge apart
                z[k] += Complex64::new(1e-8, 1e-8) * radius;
                max_step = f64::INFINITY;
                continue;
            }
            let delta = monic.eval(z[k]) / den;
            z[k] -= delta;
            max_step = max_step.max(delta.norm() / z[k].norm().max(1.0));
        }
        if max_step < DK_STEP_TOL {
            break;
        }
    }
    for r in &z {
        let res = monic.eval(*r).norm();
        if !(res <= DK_RESIDUAL_TOL * monic.eval_scale(*r)) {
            return Err(MocError::NoConvergence(format!("root {r} has residual {res:e}")));
        }
    }
    Ok(z)
}
