//! Propagator blocks of the linearized one-step schemes.
//!
//! The error at node `m` is `s = (s1+, s3+, s1-, s3-)` and one step reads
//! `s_m <- Γ s_{m-1} + Ω s_{m+1}`.

use crate::error::{MocError, Result};
use crate::model::{coupling_matrices, CouplingMatrices};
use crate::schemes::SchemeId;
use nalgebra::{Matrix2, Matrix4};

#[derive(Debug, Clone, PartialEq)]
pub struct SchemeMatrices {
    pub scheme: SchemeId,
    pub h: f64,
    pub coupling: CouplingMatrices,
    pub gamma0: Matrix4<f64>,
    pub gamma1: Matrix4<f64>,
    pub gamma2: Matrix4<f64>,
    pub omega0: Matrix4<f64>,
    pub omega1: Matrix4<f64>,
    pub omega2: Matrix4<f64>,
    pub gamma: Matrix4<f64>,
    pub omega: Matrix4<f64>,
}

/// Assembles a 4×4 matrix from its forward/backward 2×2 blocks.
pub fn blocks(pp: &Matrix2<f64>, pm: &Matrix2<f64>, mp: &Matrix2<f64>, mm: &Matrix2<f64>) -> Matrix4<f64> {
    let mut out = Matrix4::zeros();
    out.fixed_view_mut::<2, 2>(0, 0).copy_from(pp);
    out.fixed_view_mut::<2, 2>(0, 2).copy_from(pm);
    out.fixed_view_mut::<2, 2>(2, 0).copy_from(mp);
    out.fixed_view_mut::<2, 2>(2, 2).copy_from(mm);
    out
}

/// Order-zero and order-one blocks of the simple-Euler propagator. The
/// leapfrog scheme is built from these directly.
pub fn euler_parts() -> (Matrix4<f64>, Matrix4<f64>, Matrix4<f64>, Matrix4<f64>) {
    let c = coupling_matrices();
    let (i, o) = (Matrix2::identity(), Matrix2::zeros());
    let gamma0 = blocks(&i, &o, &o, &o);
    let omega0 = blocks(&o, &o, &o, &i);
    let gamma1 = blocks(&c.p_pp(), &c.p_pm(), &o, &o);
    let omega1 = blocks(&o, &o, &c.p_mp(), &c.p_mm());
    (gamma0, gamma1, omega0, omega1)
}

/// `Γ`, `Ω` and their expansion parts in powers of `h` for SE and ME.
pub fn assemble_gamma_omega(scheme: SchemeId, h: f64) -> Result<SchemeMatrices> {
    if !(h >= 0.0 && h.is_finite()) {
        return Err(MocError::InvalidGrid(format!("step h = {h} must be non-negative")));
    }
    let c = coupling_matrices();
    let (gamma0, se_gamma1, omega0, se_omega1) = euler_parts();
    let o = Matrix2::zeros();
    let (gamma1, gamma2, omega1, omega2) = match scheme {
        SchemeId::Se => (se_gamma1, Matrix4::zeros(), se_omega1, Matrix4::zeros()),
        SchemeId::Me => (
            blocks(&c.p_pp(), &(c.p_pm() * 0.5), &(c.p_mp() * 0.5), &o),
            c.p * se_gamma1,
            blocks(&o, &(c.p_pm() * 0.5), &(c.p_mp() * 0.5), &c.p_mm()),
            c.p * se_omega1,
        ),
        SchemeId::Lf(_) => {
            return Err(MocError::UnsupportedScheme(
                "leapfrog is a two-level scheme; use euler_parts".into(),
            ))
        }
    };
    let gamma = gamma0 + gamma1 * h + gamma2 * (0.5 * h * h);
    let omega = omega0 + omega1 * h + omega2 * (0.5 * h * h);
    Ok(SchemeMatrices {
        scheme,
        h,
        coupling: c,
        gamma0,
        gamma1,
        gamma2,
        omega0,
        omega1,
        omega2,
        gamma,
        omega,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::schemes::Startup;

    #[test]
    fn zero_step_gives_shift_blocks() {
        for s in [SchemeId::Se, SchemeId::Me] {
            let m = assemble_gamma_omega(s, 0.0).unwrap();
            assert_eq!(m.gamma, m.gamma0);
            assert_eq!(m.omega, m.omega0);
            assert_eq!(m.gamma0 + m.omega0, Matrix4::identity());
        }
        assert!(matches!(
            assemble_gamma_omega(SchemeId::Lf(Startup::Me), 0.1),
            Err(MocError::UnsupportedScheme(_))
        ));
        assert!(assemble_gamma_omega(SchemeId::Se, -0.1).is_err());
    }

    #[test]
    fn modified_euler_blocks() {
        let m = assemble_gamma_omega(SchemeId::Me, 0.1).unwrap();
        let c = coupling_matrices();
        assert_eq!(m.gamma1.fixed_view::<2, 2>(0, 2).into_owned(), c.p_pm() * 0.5);
        assert_eq!(m.omega1.fixed_view::<2, 2>(2, 0).into_owned(), c.p_mp() * 0.5);
        assert_eq!(m.omega1.fixed_view::<2, 2>(2, 2).into_owned(), c.p_mm());
    }

    #[test]
    fn schemes_agree_to_first_order() {
        for h in [0.1, 0.05, 0.025] {
            let se = assemble_gamma_omega(SchemeId::Se, h).unwrap();
            let me = assemble_gamma_omega(SchemeId::Me, h).unwrap();
            // both Γ+Ω agree through O(h); the split between them differs
            let diff = (se.gamma + se.omega - me.gamma - me.omega).norm();
            assert!(diff <= 5.0 * h * h, "h={h} diff={diff}");
        }
    }
}
