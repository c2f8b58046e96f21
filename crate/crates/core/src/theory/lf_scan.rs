//! Leapfrog modes near `λ = i`: `λ = i(1 + hα)`, `ρ = ±i + hβ` with real `β`,
//! and the boundary-matching determinant as a function of `α`.

use super::amplification::von_neumann_factors;
use super::matrices::euler_parts;
use crate::error::{MocError, Result};
use crate::schemes::{SchemeId, Startup};
use nalgebra::{Matrix4, Vector4};
use num_complex::Complex64;
use std::f64::consts::{FRAC_PI_2, PI, SQRT_2};

type C = Complex64;

/// Window of `α` with four real `β`.
pub const ALPHA_MIN: f64 = SQRT_2;
pub const ALPHA_MAX: f64 = 1.5;

/// Normalized `|det Φ₊|` below which a local minimum counts as a root.
pub const ROOT_THRESHOLD: f64 = 1e-3;

const WINDOW_SLACK: f64 = 1e-12;

fn check_alpha(alpha: f64) -> Result<()> {
    if !(ALPHA_MIN - WINDOW_SLACK..=ALPHA_MAX + WINDOW_SLACK).contains(&alpha) {
        return Err(MocError::RangeError { lo: ALPHA_MIN, hi: ALPHA_MAX });
    }
    Ok(())
}

/// The four real `β` at growth rate `α`: `±√(3 − α² + √(9 − 4α²))`, then
/// `±√(3 − α² − √(9 − 4α²))`.
pub fn lf_betas(alpha: f64) -> Result<[f64; 4]> {
    check_alpha(alpha)?;
    let root = (9.0 - 4.0 * alpha * alpha).max(0.0).sqrt();
    let hi = (3.0 - alpha * alpha + root).max(0.0).sqrt();
    let lo = (3.0 - alpha * alpha - root).max(0.0).sqrt();
    Ok([hi, -hi, lo, -lo])
}

/// First-order eigenvector for `ρ = sign·i + hβ`, with last component 1.
pub fn lf_xi(alpha: f64, beta: f64, sign: f64) -> Vector4<C> {
    let ib = C::new(0.0, sign * beta);
    let a = C::new(alpha, 0.0);
    let norm2 = alpha * alpha + beta * beta;
    let phase = (a + ib) / (a - ib);
    Vector4::new(
        phase * (a - ib * 3.0) * sign / norm2,
        -phase,
        -(a + ib * 3.0) * sign / norm2,
        C::new(1.0, 0.0),
    )
}

/// First-order mode matrix whose null vectors are [`lf_xi`]:
/// `rβ(Ω₀ − Γ₀) − iαI + ir(Ω₁ − Γ₁)` for `ρ = r·i + hβ`.
pub fn lf_first_order_matrix(alpha: f64, beta: f64, sign: f64) -> Matrix4<C> {
    let (g0, g1, o0, o1) = euler_parts();
    let re = |m: Matrix4<f64>| m.map(|v| C::new(v, 0.0));
    re(o0 - g0) * C::new(sign * beta, 0.0) - Matrix4::identity() * C::new(0.0, alpha)
        + re(o1 - g1) * C::new(0.0, sign)
}

#[derive(Debug, Clone, PartialEq)]
pub struct LfPhi {
    pub phi: Matrix4<C>,
    pub det: C,
    /// `|det Φ|` divided by the product of row norms.
    pub normalized: f64,
}

/// Boundary-matching matrix for the `sign` family: rows 1–2 hold `ξ⁺`,
/// rows 3–4 hold `ρ^M ξ⁻` with `ρ^M ≈ (sign·i)^M e^{−sign·iβL}`.
pub fn lf_phi(alpha: f64, length: f64, h: f64, sign: f64) -> Result<LfPhi> {
    let betas = lf_betas(alpha)?;
    let m = (length / h).round() as u64;
    let quarter = C::new(0.0, sign).powu((m % 4) as u32);
    let mut phi = Matrix4::<C>::zeros();
    for (j, beta) in betas.iter().enumerate() {
        let xi = lf_xi(alpha, *beta, sign);
        let power = quarter * C::from_polar(1.0, -sign * beta * length);
        phi[(0, j)] = xi[0];
        phi[(1, j)] = xi[1];
        phi[(2, j)] = power * xi[2];
        phi[(3, j)] = power * xi[3];
    }
    let det = phi.determinant();
    let rows: f64 = (0..4).map(|r| phi.row(r).norm()).product();
    Ok(LfPhi { phi, det, normalized: det.norm() / rows })
}

#[derive(Debug, Clone, PartialEq)]
pub struct LfScan {
    pub alphas: Vec<f64>,
    pub normalized_det: Vec<f64>,
    /// `α` at interior minima of the normalized determinant below
    /// [`ROOT_THRESHOLD`], refined by golden-section search, ascending.
    pub roots_nonreflecting: Vec<f64>,
    /// Growth rates `(max|λ| − 1)/h` of the periodic problem for the
    /// resolvable wavenumbers with real `β`, descending.
    pub alphas_periodic: Vec<f64>,
}

/// Scans `|det Φ₊(α)|` over `range` and collects the periodic reference.
pub fn lf_alpha_scan(length: f64, h: f64, range: (f64, f64), n_points: usize) -> Result<LfScan> {
    let (lo, hi) = range;
    check_alpha(lo)?;
    check_alpha(hi)?;
    if !(lo < hi) || n_points < 3 {
        return Err(MocError::RangeError { lo: ALPHA_MIN, hi: ALPHA_MAX });
    }
    let f = |a: f64| lf_phi(a, length, h, 1.0).map(|p| p.normalized);
    let alphas: Vec<f64> = (0..n_points).map(|i| lo + (hi - lo) * i as f64 / (n_points - 1) as f64).collect();
    let values = alphas.iter().map(|a| f(*a)).collect::<Result<Vec<_>>>()?;
    let mut roots = Vec::new();
    for i in 1..n_points - 1 {
        if values[i] <= values[i - 1] && values[i] < values[i + 1] {
            let (a, v) = golden_min(&f, alphas[i - 1], alphas[i + 1])?;
            // the window edges are degenerate (coinciding β), not modes
            let edge = (a - ALPHA_MIN).abs() < 1e-6 || (ALPHA_MAX - a).abs() < 1e-6;
            if v < ROOT_THRESHOLD && !edge {
                roots.push(a);
            }
        }
    }
    Ok(LfScan {
        alphas,
        normalized_det: values,
        roots_nonreflecting: roots,
        alphas_periodic: periodic_alphas(length, h)?,
    })
}

fn golden_min(f: &impl Fn(f64) -> Result<f64>, mut a: f64, mut b: f64) -> Result<(f64, f64)> {
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - g * (b - a);
    let mut d = a + g * (b - a);
    let (mut fc, mut fd) = (f(c)?, f(d)?);
    for _ in 0..80 {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = f(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = f(d)?;
        }
        if (b - a).abs() < 1e-13 {
            break;
        }
    }
    Ok(if fc < fd { (c, fc) } else { (d, fd) })
}

/// Periodic growth rates at `k = 2πl/L` with `|k − π/(2h)| ≤ √2 + Δk`.
fn periodic_alphas(length: f64, h: f64) -> Result<Vec<f64>> {
    let dk = 2.0 * PI / length;
    let kc = FRAC_PI_2 / h;
    let reach = SQRT_2 + dk;
    let first = ((kc - reach) / dk).ceil() as i64;
    let last = ((kc + reach) / dk).floor() as i64;
    let mut out = Vec::new();
    for l in first..=last {
        let kh = l as f64 * dk * h;
        let lambdas = von_neumann_factors(SchemeId::Lf(Startup::Me), kh, h)?;
        let top = lambdas.iter().map(|l| l.norm()).fold(0.0, f64::max);
        out.push((top - 1.0) / h);
    }
    out.sort_by(|a, b| b.total_cmp(a));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn betas_at_window_edges() {
        let b = lf_betas(1.5).unwrap();
        for v in b {
            assert!((v.abs() - 3f64.sqrt() / 2.0).abs() < 1e-12);
        }
        let b = lf_betas(SQRT_2).unwrap();
        assert!((b[0] - SQRT_2).abs() < 1e-7 && b[2].abs() < 1e-7);
        assert!(matches!(lf_betas(1.6), Err(MocError::RangeError { .. })));
        assert!(matches!(lf_betas(1.3), Err(MocError::RangeError { .. })));
    }

    #[test]
    fn betas_satisfy_quartic() {
        for alpha in [1.42, 1.45, 1.49] {
            for beta in lf_betas(alpha).unwrap() {
                let s = alpha * alpha + beta * beta;
                assert!((s * s - 2.0 * alpha * alpha - 6.0 * beta * beta).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn eigenvectors_solve_first_order_equation() {
        for alpha in [1.42, 1.45, 1.49] {
            for beta in lf_betas(alpha).unwrap() {
                for sign in [1.0, -1.0] {
                    let xi = lf_xi(alpha, beta, sign);
                    let res = lf_first_order_matrix(alpha, beta, sign) * xi;
                    assert!(res.norm() < 1e-12, "α={alpha} β={beta} r={sign}: {res}");
                }
            }
        }
    }

    #[test]
    fn conjugation_relations() {
        let alpha = 1.45;
        for beta in lf_betas(alpha).unwrap() {
            let plus = lf_xi(alpha, beta, 1.0);
            let minus = lf_xi(alpha, beta, -1.0);
            let flipped = -Vector4::new(plus[0].conj(), -plus[1].conj(), plus[2].conj(), -plus[3].conj());
            assert!((minus - flipped).norm() < 1e-14);
        }
        for (length, h) in [(50.0, 0.01), (50.0, 0.0125), (25.0, 0.01)] {
            let p = lf_phi(alpha, length, h, 1.0).unwrap();
            let m = lf_phi(alpha, length, h, -1.0).unwrap();
            assert!((m.det - p.det.conj()).norm() < 1e-12 * p.det.norm().max(1e-300));
        }
    }

    #[test]
    fn scan_roots_track_periodic_rates() {
        let scan = lf_alpha_scan(50.0, 0.01, (ALPHA_MIN, ALPHA_MAX), 2001).unwrap();
        assert!(scan.roots_nonreflecting.len() > 5);
        assert!(scan.roots_nonreflecting.iter().all(|a| (ALPHA_MIN..=ALPHA_MAX).contains(a)));
        let top = scan.roots_nonreflecting.last().unwrap();
        let periodic = scan.alphas_periodic[0];
        assert!((top / periodic - 1.0).abs() <= 0.02, "{top} vs {periodic}");
        assert!(matches!(lf_alpha_scan(50.0, 0.01, (1.3, 1.5), 10), Err(MocError::RangeError { .. })));
    }
}
