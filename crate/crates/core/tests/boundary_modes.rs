//! Nonreflecting eigenvalues of the dense amplification matrix against the
//! boundary-matching determinant and the spatial shape of their eigenvectors.

mod common;

use common::{det_phi_on_dense_eigenvalues, growing_family_profile};
use moclab::linalg::eig_dense;
use moclab::schemes::SchemeId;
use moclab::theory::{assemble_amplification_matrix, phi_matrix, se_lambda_predictions};
use moclab::make_grid;
use num_complex::Complex64;

type C = Complex64;

#[test]
fn det_phi_vanishes_on_dense_eigenvalues() {
    let grid = make_grid(3.2, 0.05, false).unwrap();
    assert_eq!(grid.m, 64);
    let (checked, worst) = det_phi_on_dense_eigenvalues(grid);
    assert!(checked > 20, "only {checked} eigenvalues in range");
    assert!(worst < (1e-6f64).ln(), "max ln rel det {worst}");

    // a generic point on |λ| = 0.999 is not a root
    for arg in [1.1, 1.9, 2.3] {
        let l = C::from_polar(0.999, arg);
        let sol = phi_matrix(SchemeId::Se, l, grid).unwrap();
        assert!(sol.ln_rel_det > (1e-3f64).ln(), "arg {arg}: {}", sol.ln_rel_det);
    }
}

#[test]
fn eigenvectors_grow_monotonically_across_the_domain() {
    let length = 3.2;
    let (r64, ripple) = growing_family_profile(length, 64);
    assert!(ripple <= 3.0, "ripple {ripple}");
    let c64 = r64 / (length / 64.0);
    for m in [128usize, 256] {
        let (r, ripple) = growing_family_profile(length, m);
        let c = r / (length / m as f64);
        eprintln!("M={m}: C={c} (M=64: {c64}) ripple {ripple}");
        assert!(ripple <= 3.0, "M={m}: ripple {ripple}");
        assert!((0.5 * c64..=1.5 * c64).contains(&c), "M={m}: {c} vs {c64}");
    }
}

#[test]
fn mid_spectrum_modulus_matches_closed_form() {
    let grid = make_grid(16.0, 0.25, false).unwrap();
    let a = assemble_amplification_matrix(SchemeId::Se, grid).unwrap();
    let eigs = eig_dense(&a.matrix).unwrap();
    let measured = eigs
        .iter()
        .filter(|l| ((**l * **l).arg().abs() - std::f64::consts::PI).abs() < 0.5)
        .map(|l| l.norm())
        .fold(0.0, f64::max);
    let predicted = se_lambda_predictions(16.0, 0.25).magnitude_2m.powf(1.0 / 128.0);
    eprintln!("measured {measured} predicted {predicted}");
    assert!((measured / predicted - 1.0).abs() < 0.02);
}
