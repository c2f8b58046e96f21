//! The linearized steppers and the dense amplification matrices must
//! describe the same linear map.

mod common;

use common::{leapfrog_residual, one_step_residual};
use moclab::make_grid;
use moclab::model::BoundaryKind;
use moclab::schemes::SchemeId;

#[test]
fn one_step_schemes_match_matrix_action() {
    for m in [8usize, 32, 128] {
        let grid = make_grid(m as f64 * 0.05, 0.05, false).unwrap();
        for bc in [BoundaryKind::Nonreflecting, BoundaryKind::Periodic] {
            for scheme in [SchemeId::Se, SchemeId::Me] {
                let e = one_step_residual(scheme, grid, bc, 100, 7 + m as u64);
                assert!(e < 1e-12, "{scheme:?} {bc:?} M={m}: {e:e}");
            }
        }
    }
}

#[test]
fn leapfrog_matches_companion_action() {
    for m in [8usize, 32] {
        let grid = make_grid(m as f64 * 0.1, 0.1, false).unwrap();
        for bc in [BoundaryKind::Nonreflecting, BoundaryKind::Periodic] {
            let e = leapfrog_residual(grid, bc, 50, 11 + m as u64);
            assert!(e < 1e-12, "{bc:?} M={m}: {e:e}");
        }
    }
}
