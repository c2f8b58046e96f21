//! Mode ansatz `s_m^n = λ^n ρ^m ξ` for nonreflecting boundaries: spatial
//! ratios `ρ(λ)`, eigenvectors `ξ` and the boundary-matching matrix `Φ(λ)`.

use super::matrices::{assemble_gamma_omega, euler_parts};
use crate::error::{MocError, Result};
use crate::grid::Grid1D;
use crate::linalg::{poly_roots, Poly};
use crate::schemes::SchemeId;
use nalgebra::{Matrix2, Matrix4, Vector2, Vector4};
use num_complex::Complex64;

type C = Complex64;

/// Validity band of the small-`h` expansions: `|λ² − 1| ≥ GUARD · h`.
pub const PERTURBATIVE_GUARD: f64 = 10.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    Numeric,
    Perturbative,
}

fn c(re: f64) -> C {
    C::new(re, 0.0)
}

fn to_complex(m: &Matrix4<f64>) -> Matrix4<C> {
    m.map(c)
}

/// One row of the mode matrix, multiplied through by the power of `ρ`
/// that makes every entry a polynomial.
struct LaurentRow {
    entries: [Vec<C>; 4],
}

/// Laurent-polynomial mode matrix whose determinant is the characteristic
/// polynomial in `ρ`.
fn mode_matrix_rows(scheme: SchemeId, lambda: C, h: f64) -> Result<Vec<LaurentRow>> {
    let (terms, low): (Vec<(i32, Matrix4<C>)>, i32) = match scheme {
        SchemeId::Se | SchemeId::Me => {
            let sm = assemble_gamma_omega(scheme, h)?;
            (
                vec![
                    (-1, to_complex(&sm.gamma)),
                    (0, Matrix4::identity() * -lambda),
                    (1, to_complex(&sm.omega)),
                ],
                -1,
            )
        }
        SchemeId::Lf(_) => {
            let (g0, g1, o0, o1) = euler_parts();
            let inv = lambda.inv();
            (
                vec![
                    (-2, to_complex(&g0) * inv),
                    (-1, to_complex(&g1) * c(2.0 * h)),
                    (0, Matrix4::identity() * -lambda),
                    (1, to_complex(&o1) * c(2.0 * h)),
                    (2, to_complex(&o0) * inv),
                ],
                -2,
            )
        }
    };
    let width = (terms.last().unwrap().0 - low + 1) as usize;
    let mut rows = Vec::with_capacity(4);
    for r in 0..4 {
        let mut entries: [Vec<C>; 4] = std::array::from_fn(|_| vec![c(0.0); width]);
        for (p, m) in &terms {
            for (col, e) in entries.iter_mut().enumerate() {
                e[(p - low) as usize] += m[(r, col)];
            }
        }
        // multiply the row by the power of ρ that clears its negative powers
        let first = (0..width)
            .find(|k| entries.iter().any(|e| e[*k] != c(0.0)))
            .unwrap_or(0);
        for e in entries.iter_mut() {
            e.drain(..first);
        }
        rows.push(LaurentRow { entries });
    }
    Ok(rows)
}

fn permutations_4() -> Vec<([usize; 4], f64)> {
    let mut out = Vec::with_capacity(24);
    for a in 0..4 {
        for b in (0..4).filter(|&b| b != a) {
            for c in (0..4).filter(|&c| c != a && c != b) {
                let p = [a, b, c, 6 - a - b - c];
                out.push((p, permutation_sign(&p)));
            }
        }
    }
    out
}

/// Characteristic polynomial in `ρ` of the mode equation, with factors of
/// `ρ` removed. SE: degree 4; ME: degree 8 (four spurious roots with `|ρ|`
/// of order `1/h` or `h`); LF: degree 8.
pub fn characteristic_poly(scheme: SchemeId, lambda: C, h: f64) -> Result<Poly> {
    let rows = mode_matrix_rows(scheme, lambda, h)?;
    let mut det = Poly(vec![c(0.0)]);
    for (perm, sign) in permutations_4().iter() {
        let mut term = Poly::constant(c(*sign));
        for (r, row) in rows.iter().enumerate() {
            term = term.mul(&Poly(row.entries[perm[r]].clone()));
        }
        det = det.add(&term);
    }
    let n = det.degree();
    det.0.truncate(n + 1);
    Ok(det.deflate_zero_roots().0)
}

fn check_guard(lambda: C, h: f64) -> Result<()> {
    let gap = (lambda * lambda - 1.0).norm();
    if gap < PERTURBATIVE_GUARD * h {
        return Err(MocError::ValidityViolation(format!(
            "|λ²−1| = {gap:.3e} is inside the band {PERTURBATIVE_GUARD}·h = {:.3e}",
            PERTURBATIVE_GUARD * h
        )));
    }
    Ok(())
}

/// Small-`h` roots in the order `ρ1(+), ρ1(−), ρ2(+), ρ2(−)`. SE carries the
/// second-order terms; ME shares the roots through first order.
fn perturbative_roots(scheme: SchemeId, lambda: C, h: f64) -> Result<[C; 4]> {
    check_guard(lambda, h)?;
    let i = C::i();
    let l2 = lambda * lambda;
    let (q1, q2) = match scheme {
        SchemeId::Se => (-2.0 * h * h / (l2 - 1.0), -(l2 - 3.0) * h * h / (l2 - 1.0)),
        SchemeId::Me => (c(0.0), c(0.0)),
        SchemeId::Lf(_) => {
            return Err(MocError::UnsupportedScheme(
                "leapfrog roots near ±i are parametrized by lf_betas".into(),
            ))
        }
    };
    let inv = lambda.inv();
    Ok([
        inv * (1.0 - i * h + q1),
        inv * (1.0 + i * h + q1),
        lambda * (1.0 + i * h + q2),
        lambda * (1.0 - i * h + q2),
    ])
}

/// Physical roots: for ME the four roots with the smallest `|ln|ρ||`.
fn numeric_roots(scheme: SchemeId, lambda: C, h: f64) -> Result<Vec<C>> {
    let p = characteristic_poly(scheme, lambda, h)?;
    let mut roots = poly_roots(&p)?;
    if scheme == SchemeId::Me {
        roots.sort_by(|a, b| a.norm().ln().abs().total_cmp(&b.norm().ln().abs()));
        roots.truncate(4);
    }
    Ok(roots)
}

/// Orders numeric roots like the perturbative labels when the latter are
/// valid, otherwise by ascending modulus.
fn label_roots(scheme: SchemeId, lambda: C, h: f64, mut roots: Vec<C>) -> Vec<C> {
    if roots.len() == 4 {
        if let Ok(pert) = perturbative_roots(scheme, lambda, h) {
            let mut out = Vec::with_capacity(4);
            for p in pert {
                let (k, _) = roots
                    .iter()
                    .enumerate()
                    .min_by(|a, b| (a.1 - p).norm().total_cmp(&(b.1 - p).norm()))
                    .unwrap();
                out.push(roots.swap_remove(k));
            }
            return out;
        }
    }
    roots.sort_by(|a, b| a.norm().total_cmp(&b.norm()).then(a.arg().total_cmp(&b.arg())));
    roots
}

/// Spatial ratios `ρ_j(λ)`: 4 for SE/ME, 8 for LF (numeric branch only).
pub fn rho_of_lambda(scheme: SchemeId, lambda: C, h: f64, branch: Branch) -> Result<Vec<C>> {
    match branch {
        Branch::Perturbative => Ok(perturbative_roots(scheme, lambda, h)?.to_vec()),
        Branch::Numeric => {
            let roots = numeric_roots(scheme, lambda, h)?;
            Ok(label_roots(scheme, lambda, h, roots))
        }
    }
}

/// `ρΩ + ρ⁻¹Γ − λI` (SE, ME) or its leapfrog counterpart.
pub fn mode_matrix(scheme: SchemeId, rho: C, lambda: C, h: f64) -> Result<Matrix4<C>> {
    let id = Matrix4::<C>::identity();
    Ok(match scheme {
        SchemeId::Se | SchemeId::Me => {
            let sm = assemble_gamma_omega(scheme, h)?;
            to_complex(&sm.omega) * rho + to_complex(&sm.gamma) / rho - id * lambda
        }
        SchemeId::Lf(_) => {
            let (g0, g1, o0, o1) = euler_parts();
            (to_complex(&g0) / (rho * rho) + to_complex(&o0) * (rho * rho)) / lambda
                + (to_complex(&g1) / rho + to_complex(&o1) * rho) * c(2.0 * h)
                - id * lambda
        }
    })
}

fn normalize_max(v: Vector4<C>) -> Vector4<C> {
    let k = v.icamax();
    v / v[k]
}

/// Null vector of the mode matrix, scaled so its largest component is 1.
pub fn xi_eigenvector(scheme: SchemeId, rho: C, lambda: C, h: f64) -> Result<Vector4<C>> {
    let k = mode_matrix(scheme, rho, lambda, h)?;
    let svd = k.svd(false, true);
    let v_t = svd.v_t.ok_or_else(|| MocError::NoConvergence("SVD".into()))?;
    let (imin, smin) = svd
        .singular_values
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(b.1))
        .map(|(i, s)| (i, *s))
        .unwrap();
    let smax = svd.singular_values.max().max(1.0);
    if smin > 1e-8 * smax {
        return Err(MocError::NotAnEigenpair(smin / smax));
    }
    let xi: Vector4<C> = v_t.row(imin).adjoint();
    Ok(normalize_max(xi))
}

/// Leading-order eigenvectors for the perturbative roots, in the order of
/// [`rho_of_lambda`]. ME differs from SE by the factor `(λ²+1)/2` in the
/// coupling to the other field.
pub fn xi_perturbative(scheme: SchemeId, lambda: C, h: f64) -> Result<[Vector4<C>; 4]> {
    check_guard(lambda, h)?;
    let i = C::i();
    let l2 = lambda * lambda;
    let coupling = match scheme {
        SchemeId::Se => c(h) / (l2 - 1.0),
        SchemeId::Me => c(0.5 * h) * (l2 + 1.0) / (l2 - 1.0),
        SchemeId::Lf(_) => return Err(MocError::UnsupportedScheme("use lf_xi".into())),
    };
    let one = c(1.0);
    let mut out = [Vector4::zeros(); 4];
    for (k, s) in [1.0, -1.0].into_iter().enumerate() {
        out[k] = Vector4::new(one, i * s, coupling * i * (2.0 * s), coupling);
        out[2 + k] = Vector4::new(-coupling * i * (-2.0 * s), -coupling, one, -i * s);
    }
    Ok(out)
}

/// Determinant kept in log form so that `|ρ|^M` may overflow.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogDet {
    pub ln_abs: f64,
    pub arg: f64,
}

impl LogDet {
    pub fn from_value(z: C) -> Self {
        LogDet { ln_abs: z.norm().ln(), arg: z.arg() }
    }

    /// The determinant itself; infinite or zero when not representable.
    pub fn value(&self) -> C {
        C::from_polar(self.ln_abs.exp(), self.arg)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ModeSolution {
    pub lambda: C,
    pub rhos: Vec<C>,
    pub xis: Vec<Vector4<C>>,
    /// `Φ` with rows `ξ⁺_j` and `ρ_j^M ξ⁻_j`; entries overflow to infinity
    /// when `|ρ|^M` is not representable, in which case only `det` is valid.
    pub phi: Matrix4<C>,
    pub det: LogDet,
    /// `det Φ / ‖Φ‖_F⁴` in log form (scale-free singularity measure).
    pub ln_rel_det: f64,
}

/// Above this `|M ln|ρ||` the determinant is evaluated by block elimination.
const DIRECT_LOG_LIMIT: f64 = 300.0;

fn column_block(xi: &Vector4<C>, upper: bool) -> Vector2<C> {
    if upper {
        Vector2::new(xi[0], xi[1])
    } else {
        Vector2::new(xi[2], xi[3])
    }
}

/// Boundary-matching matrix for the nonreflecting problem.
pub fn phi_matrix(scheme: SchemeId, lambda: C, grid: Grid1D) -> Result<ModeSolution> {
    phi_matrix_with_limit(scheme, lambda, grid, DIRECT_LOG_LIMIT)
}

fn phi_matrix_with_limit(scheme: SchemeId, lambda: C, grid: Grid1D, limit: f64) -> Result<ModeSolution> {
    if matches!(scheme, SchemeId::Lf(_)) {
        return Err(MocError::UnsupportedScheme("leapfrog uses lf_phi".into()));
    }
    let h = grid.h;
    check_guard(lambda, h)?;
    let rhos = rho_of_lambda(scheme, lambda, h, Branch::Numeric)?;
    let xis = rhos
        .iter()
        .map(|r| xi_eigenvector(scheme, *r, lambda, h))
        .collect::<Result<Vec<_>>>()?;
    let mf = grid.m as f64;
    let logs: Vec<C> = rhos.iter().map(|r| r.ln() * mf).collect();
    let mut phi = Matrix4::<C>::zeros();
    for j in 0..4 {
        let p = logs[j].exp();
        phi[(0, j)] = xis[j][0];
        phi[(1, j)] = xis[j][1];
        phi[(2, j)] = p * xis[j][2];
        phi[(3, j)] = p * xis[j][3];
    }
    let big = logs.iter().map(|l| l.re.abs()).fold(0.0, f64::max);
    let det = if big < limit {
        LogDet::from_value(phi.determinant())
    } else {
        // Columns of the two smallest |ρ| first, then Schur complement:
        // det = det T1 · det(B2 − B1 D1 T1⁻¹ T2 D2⁻¹) · det D2.
        let mut order: Vec<usize> = (0..4).collect();
        order.sort_by(|a, b| rhos[*a].norm().total_cmp(&rhos[*b].norm()));
        let sign = permutation_sign(&order);
        let col = |k: usize, upper: bool| column_block(&xis[order[k]], upper);
        let t1 = Matrix2::from_columns(&[col(0, true), col(1, true)]);
        let t2 = Matrix2::from_columns(&[col(2, true), col(3, true)]);
        let b1 = Matrix2::from_columns(&[col(0, false), col(1, false)]);
        let b2 = Matrix2::from_columns(&[col(2, false), col(3, false)]);
        let t1_inv = t1
            .try_inverse()
            .ok_or_else(|| MocError::NoConvergence("singular forward block in Φ".into()))?;
        // D1 X D2⁻¹ entrywise: ρ_i^M / ρ_j^M
        let x = t1_inv * t2;
        let mut scaled = Matrix2::<C>::zeros();
        for r in 0..2 {
            for s in 0..2 {
                scaled[(r, s)] = x[(r, s)] * (logs[order[r]] - logs[order[2 + s]]).exp();
            }
        }
        let schur = b2 - b1 * scaled;
        let d = t1.determinant() * schur.determinant() * sign;
        let ln_d2 = logs[order[2]] + logs[order[3]];
        LogDet { ln_abs: d.norm().ln() + ln_d2.re, arg: d.arg() + ln_d2.im }
    };
    let ln_norm = ln_frobenius(&xis, &logs);
    Ok(ModeSolution {
        lambda,
        rhos,
        xis,
        phi,
        det,
        ln_rel_det: det.ln_abs - 4.0 * ln_norm,
    })
}

/// `ln ‖Φ‖_F` without forming overflowing entries.
fn ln_frobenius(xis: &[Vector4<C>], logs: &[C]) -> f64 {
    let mut terms = Vec::new();
    for (xi, l) in xis.iter().zip(logs) {
        terms.push((xi[0].norm_sqr() + xi[1].norm_sqr()).ln());
        terms.push((xi[2].norm_sqr() + xi[3].norm_sqr()).ln() + 2.0 * l.re);
    }
    let top = terms.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    0.5 * (top + terms.iter().map(|t| (t - top).exp()).sum::<f64>().ln())
}

fn permutation_sign(p: &[usize]) -> f64 {
    let mut inv = 0;
    for i in 0..p.len() {
        for j in i + 1..p.len() {
            if p[i] > p[j] {
                inv += 1;
            }
        }
    }
    if inv % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::make_grid;
    use crate::schemes::Startup;

    #[test]
    fn permutations_are_complete() {
        let mut seen = std::collections::HashSet::new();
        let total: f64 = permutations_4().iter().map(|(p, s)| {
            seen.insert(*p);
            *s
        }).sum();
        assert_eq!(seen.len(), 24);
        assert_eq!(total, 0.0);
    }

    #[test]
    fn zero_step_roots() {
        let lam = C::from_polar(0.9, 1.1);
        let roots = rho_of_lambda(SchemeId::Se, lam, 0.0, Branch::Numeric).unwrap();
        for target in [lam, lam.inv()] {
            assert_eq!(roots.iter().filter(|r| (*r - target).norm() < 1e-6).count(), 2);
        }
    }

    #[test]
    fn se_root_at_i() {
        // ρ1(+) at λ = i, h = 0.02: −i(1 − 0.02i + 0.0004)
        let roots = rho_of_lambda(SchemeId::Se, C::i(), 0.02, Branch::Perturbative).unwrap();
        assert!((roots[0] - C::new(-0.02, -1.0004)).norm() < 1e-15);
        let numeric = rho_of_lambda(SchemeId::Se, C::i(), 0.02, Branch::Numeric).unwrap();
        assert!((numeric[0] - roots[0]).norm() < 2e-5);
    }

    #[test]
    fn guard_band() {
        let lam = C::from_polar(1.0, 0.01);
        assert!(matches!(
            rho_of_lambda(SchemeId::Se, lam, 0.01, Branch::Perturbative),
            Err(MocError::ValidityViolation(_))
        ));
        assert!(rho_of_lambda(SchemeId::Se, lam, 0.01, Branch::Numeric).is_ok());
    }

    #[test]
    fn me_physical_roots_follow_first_order() {
        let h = 0.01;
        let lam = C::from_polar(0.999, 1.3);
        let num = rho_of_lambda(SchemeId::Me, lam, h, Branch::Numeric).unwrap();
        let pert = rho_of_lambda(SchemeId::Me, lam, h, Branch::Perturbative).unwrap();
        for (a, b) in num.iter().zip(&pert) {
            assert!((a - b).norm() < 10.0 * h * h, "{a} vs {b}");
        }
        let all = poly_roots(&characteristic_poly(SchemeId::Me, lam, h).unwrap()).unwrap();
        assert_eq!(all.len(), 8);
    }

    #[test]
    fn leapfrog_polynomial_matches_closed_form() {
        let h = 0.03;
        let lam = C::new(0.1, 1.02);
        let p = characteristic_poly(SchemeId::Lf(Startup::Me), lam, h).unwrap();
        assert_eq!(p.degree(), 8);
        let closed = |r: C| {
            let (a, b, cc, d) = (r - lam.inv(), r + lam.inv(), r - lam, r + lam);
            let q1 = a * b;
            let q2 = cc * d;
            q1 * q1 * q2 * q2
                + r * r * 4.0 * h * h * (lam * lam * q1 * q1 + q2 * q2 / (lam * lam) - q1 * q2 * 4.0)
        };
        // same roots: compare ratios at sample points
        let z0 = C::new(0.3, 0.7);
        let k = p.eval(z0) / closed(z0);
        for z in [C::new(-1.1, 0.2), C::new(0.5, -0.4), C::new(2.0, 1.0)] {
            assert!((p.eval(z) / closed(z) - k).norm() < 1e-10 * k.norm());
        }
        // at h = 0 the roots are ±λ^{±1}, each double
        let roots = rho_of_lambda(SchemeId::Lf(Startup::Me), lam, 0.0, Branch::Numeric).unwrap();
        for t in [lam, -lam, lam.inv(), -lam.inv()] {
            assert_eq!(roots.iter().filter(|r| (*r - t).norm() < 1e-5).count(), 2);
        }
    }

    #[test]
    fn eigenvectors_satisfy_mode_equation() {
        let h = 0.02;
        for scheme in [SchemeId::Se, SchemeId::Me] {
            let lam = C::from_polar(0.995, 1.7);
            let roots = rho_of_lambda(scheme, lam, h, Branch::Numeric).unwrap();
            let pert = xi_perturbative(scheme, lam, h).unwrap();
            for (r, xp) in roots.iter().zip(&pert) {
                let xi = xi_eigenvector(scheme, *r, lam, h).unwrap();
                let res = mode_matrix(scheme, *r, lam, h).unwrap() * xi;
                assert!(res.norm() <= 1e-10 * xi.norm());
                // perturbative vector agrees to O(h) after matching scale
                let k = xp.icamax();
                let xs = xi * (xp[k] / xi[k]);
                assert!((xs - xp).norm() < 3.0 * h, "{scheme:?}: {xs} vs {xp}");
            }
        }
        assert!(matches!(
            xi_eigenvector(SchemeId::Se, C::new(0.3, 0.1), C::i(), h),
            Err(MocError::NotAnEigenpair(_))
        ));
    }

    #[test]
    fn log_and_direct_determinants_agree() {
        let grid = make_grid(20.0, 0.1, false).unwrap();
        for lam in [C::from_polar(0.97, 1.4), C::from_polar(1.02, 2.5)] {
            let a = phi_matrix_with_limit(SchemeId::Se, lam, grid, f64::INFINITY).unwrap();
            let b = phi_matrix_with_limit(SchemeId::Se, lam, grid, 0.0).unwrap();
            assert!((a.det.ln_abs - b.det.ln_abs).abs() < 1e-9);
            assert!((a.det.value() - b.det.value()).norm() < 1e-9 * a.det.value().norm());
        }
        let far = phi_matrix(SchemeId::Se, C::from_polar(0.97, 1.4), make_grid(2000.0, 0.1, false).unwrap()).unwrap();
        assert!(far.det.ln_abs.is_finite() && far.ln_rel_det.is_finite());
    }

    #[test]
    fn se_perturbative_roots_are_third_order() {
        let lam = C::from_polar(0.98, 1.2);
        let err = |h: f64| {
            let n = rho_of_lambda(SchemeId::Se, lam, h, Branch::Numeric).unwrap();
            let p = rho_of_lambda(SchemeId::Se, lam, h, Branch::Perturbative).unwrap();
            n.iter().zip(&p).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
        };
        let (e1, e2) = (err(0.02), err(0.01));
        let order = (e1 / e2).log2();
        assert!((2.6..3.4).contains(&order), "order {order}");
    }
}
