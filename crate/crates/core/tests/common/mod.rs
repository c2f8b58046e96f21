//! Checks shared by the integration tests and the acceptance target.
#![allow(dead_code)]

use moclab::linalg::eig_dense;
use moclab::make_grid;
use moclab::model::{BoundaryKind, BoundarySpec, FieldState, Model};
use moclab::schemes::{step_lf, step_me, step_se, SchemeId, Startup};
use moclab::theory::{assemble_amplification_matrix, assemble_amplification_matrix_with_bc, phi_matrix, stack_state};
use moclab::Grid1D;
use nalgebra::{DMatrix, DVector, Matrix4, Vector4};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type C = Complex64;

pub fn random_state(grid: Grid1D, rng: &mut ChaCha8Rng) -> FieldState {
    let mut s = FieldState::zeros(Model::linearized(), grid);
    for v in s.plus.iter_mut().chain(s.minus.iter_mut()) {
        *v = rng.random_range(-1.0..1.0);
    }
    s
}

/// Pins boundary data so the state lies in the space the matrix acts on.
pub fn conform(s: &mut FieldState, bc: BoundaryKind) {
    let last = s.grid.m;
    match bc {
        BoundaryKind::Nonreflecting => {
            s.plus[0..2].fill(0.0);
            s.minus[2 * last..2 * last + 2].fill(0.0);
        }
        BoundaryKind::Periodic => {
            s.plus.copy_within(0..2, 2 * last);
            s.minus.copy_within(0..2, 2 * last);
        }
    }
}

pub fn rel_err(a: &[f64], b: &[f64]) -> f64 {
    let d: f64 = a.iter().zip(b).map(|(x, y)| (x - y).powi(2)).sum::<f64>().sqrt();
    let n: f64 = b.iter().map(|y| y * y).sum::<f64>().sqrt();
    d / n.max(1e-300)
}

/// Worst relative gap between one SE or ME step and the matrix action
/// over `trials` random states.
pub fn one_step_residual(scheme: SchemeId, grid: Grid1D, bc: BoundaryKind, trials: usize, seed: u64) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let spec = BoundarySpec::of_kind(bc, Model::linearized());
    let a = assemble_amplification_matrix_with_bc(scheme, grid, bc).unwrap();
    let nodes = a.nodes();
    (0..trials)
        .map(|_| {
            let mut s = random_state(grid, &mut rng);
            conform(&mut s, bc);
            let next = match scheme {
                SchemeId::Se => step_se(&s, &spec),
                _ => step_me(&s, &spec),
            };
            let w = &a.matrix * DVector::from_vec(stack_state(&s.plus, &s.minus, nodes));
            rel_err(w.as_slice(), &stack_state(&next.plus, &next.minus, nodes))
        })
        .fold(0.0, f64::max)
}

/// As [`one_step_residual`] for leapfrog on stacked `(s^n, s^{n-1})`.
/// Panics if the lower half of the companion action is not an exact copy.
pub fn leapfrog_residual(grid: Grid1D, bc: BoundaryKind, trials: usize, seed: u64) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let spec = BoundarySpec::of_kind(bc, Model::linearized());
    let a = assemble_amplification_matrix_with_bc(SchemeId::Lf(Startup::Se), grid, bc).unwrap();
    let nodes = a.nodes();
    (0..trials)
        .map(|_| {
            let mut cur = random_state(grid, &mut rng);
            let mut prev = random_state(grid, &mut rng);
            conform(&mut cur, bc);
            conform(&mut prev, bc);
            let next = step_lf(&cur, Some(&prev), &spec, Startup::Se).unwrap();
            let mut v = stack_state(&cur.plus, &cur.minus, nodes);
            v.extend(stack_state(&prev.plus, &prev.minus, nodes));
            let w = &a.matrix * DVector::from_vec(v);
            let (top, bottom) = w.as_slice().split_at(4 * nodes);
            assert_eq!(bottom, &stack_state(&cur.plus, &cur.minus, nodes)[..]);
            rel_err(top, &stack_state(&next.plus, &next.minus, nodes))
        })
        .fold(0.0, f64::max)
}

pub fn away_from_unit_square(l: C) -> bool {
    (l * l - 1.0).norm() > 0.5
}

/// Number of SE dense eigenvalues with `|λ²−1| > 0.5` and the largest
/// `ln` relative determinant of the boundary matrix among them.
pub fn det_phi_on_dense_eigenvalues(grid: Grid1D) -> (usize, f64) {
    let a = assemble_amplification_matrix(SchemeId::Se, grid).unwrap();
    let eigs = eig_dense(&a.matrix).unwrap();
    let mut checked = 0;
    let mut worst = f64::NEG_INFINITY;
    for l in eigs.iter().filter(|l| l.norm() > 1e-3 && away_from_unit_square(**l)) {
        worst = worst.max(phi_matrix(SchemeId::Se, *l, grid).unwrap().ln_rel_det);
        checked += 1;
    }
    (checked, worst)
}

/// Eigenvector of `a` for eigenvalue `l` by one step of inverse iteration.
pub fn eigenvector(a: &DMatrix<f64>, l: C) -> DVector<C> {
    let n = a.nrows();
    let shifted = a.map(|v| C::new(v, 0.0)) - DMatrix::<C>::identity(n, n) * (l * (1.0 + 1e-12));
    let lu = shifted.lu();
    let mut x = DVector::from_fn(n, |i, _| C::new(1.0 + (i % 7) as f64, (i % 3) as f64));
    for _ in 0..3 {
        x = lu.solve(&x).unwrap();
        x /= C::new(x.norm(), 0.0);
    }
    x
}

/// Amplitude of the right-growing mode family (`|ρ| > 1`) at each node,
/// from the decomposition of the dense eigenvector in the local mode basis.
/// Returns the worst boundary ratio and worst monotonicity violation over a
/// sample of eigenvalues.
pub fn growing_family_profile(length: f64, m: usize) -> (f64, f64) {
    let h = length / m as f64;
    let grid = make_grid(length, h, false).unwrap();
    let a = assemble_amplification_matrix(SchemeId::Se, grid).unwrap();
    let eigs = eig_dense(&a.matrix).unwrap();
    let picked: Vec<C> = eigs.into_iter().filter(|l| l.norm() > 1e-3 && away_from_unit_square(*l)).collect();
    let stride = (picked.len() / 8).max(1);
    let (mut ratio, mut ripple): (f64, f64) = (0.0, 0.0);
    for l in picked.iter().step_by(stride) {
        let x = eigenvector(&a.matrix, *l);
        let sol = phi_matrix(SchemeId::Se, *l, grid).unwrap();
        let basis = Matrix4::from_columns(&[sol.xis[0], sol.xis[1], sol.xis[2], sol.xis[3]]);
        let inv = basis.try_inverse().unwrap();
        let growing: Vec<usize> = (0..4).filter(|j| sol.rhos[*j].norm() > 1.0).collect();
        assert_eq!(growing.len(), 2);
        let prof: Vec<f64> = (1..m)
            .map(|k| {
                let c = inv * Vector4::new(x[4 * k], x[4 * k + 1], x[4 * k + 2], x[4 * k + 3]);
                growing.iter().map(|j| sol.xis[*j] * c[*j]).fold(Vector4::zeros(), |acc, v| acc + v).norm()
            })
            .collect();
        ratio = ratio.max(prof[0] / prof[prof.len() - 1]);
        let mut running_max: f64 = 0.0;
        for p in &prof {
            running_max = running_max.max(*p);
            ripple = ripple.max(running_max / p);
        }
    }
    (ratio, ripple)
}
