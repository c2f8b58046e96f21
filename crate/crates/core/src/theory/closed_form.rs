//! Closed-form predictions for the simple-Euler nonreflecting spectrum.

use num_complex::Complex64;

type C = Complex64;

#[derive(Debug, Clone, PartialEq)]
pub struct SeLambdaPrediction {
    /// Roots of `2z² + (9cos2L − 1)z + 8 = 0`.
    pub z: [C; 2],
    /// `4M` eigenvalues: for each of the four values of `√z`, `M` values at
    /// phases `2πl/M`. The `O(1/M)` phase correction is dropped, so pairs
    /// sharing `|z|` coincide.
    pub lambda_set: Vec<C>,
    /// Predicted `|λ|^{2M}` in the middle of the spectrum (`λ² ≈ −1`), using
    /// the larger `|z|`.
    pub magnitude_2m: f64,
}

/// Roots of the boundary-matching quadratic for domain length `length`.
pub fn z_roots(length: f64) -> [C; 2] {
    let b = 1.0 - 9.0 * (2.0 * length).cos();
    let disc = C::new(b * b - 64.0, 0.0).sqrt();
    [(b + disc) / 4.0, (b - disc) / 4.0]
}

/// Eigenvalue predictions for the SE scheme with nonreflecting boundaries.
/// Meaningful while `length·h` stays of order one.
pub fn se_lambda_predictions(length: f64, h: f64) -> SeLambdaPrediction {
    let m = (length / h).round() as usize;
    let z = z_roots(length);
    let growth = (1.5 * length * h).exp() * h;
    let mut lambda_set = Vec::with_capacity(4 * m);
    for zk in z {
        let amplitude = growth * zk.norm().sqrt();
        for _sign in 0..2 {
            for l in 0..m {
                let phase = 2.0 * std::f64::consts::PI * l as f64 / m as f64;
                lambda_set.push(C::from_polar(modulus_fixed_point(amplitude, phase, m), phase));
            }
        }
    }
    let zmax = z[0].norm().max(z[1].norm());
    SeLambdaPrediction { z, lambda_set, magnitude_2m: h * h * (3.0 * length * h).exp() * zmax / 4.0 }
}

/// Solves `r^M |r² e^{2iθ} − 1| = amplitude` for `r`.
fn modulus_fixed_point(amplitude: f64, phase: f64, m: usize) -> f64 {
    let inv_m = 1.0 / m as f64;
    let mut r = 1.0;
    for _ in 0..200 {
        let gap = (C::from_polar(r * r, 2.0 * phase) - 1.0).norm().max(f64::MIN_POSITIVE);
        let next = (amplitude / gap).powf(inv_m);
        if (next - r).abs() <= 1e-15 * r {
            return next;
        }
        r = next;
    }
    r
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RhoHatPower {
    pub exact: C,
    pub asymptotic: C,
}

/// `(1 + iεh + (c_R + i c_I)h²)^M` and its large-`M` form
/// `exp[(c_R + ½)Lh] · exp[i(εL + c_I Lh)]` with `L = Mh`.
pub fn rho_hat_power(c_r: f64, c_i: f64, epsilon: f64, h: f64, m: u32) -> RhoHatPower {
    let base = C::new(1.0 + c_r * h * h, epsilon * h + c_i * h * h);
    let length = m as f64 * h;
    RhoHatPower {
        exact: base.powu(m),
        asymptotic: C::from_polar(
            ((c_r + 0.5) * length * h).exp(),
            epsilon * length + c_i * length * h,
        ),
    }
}
