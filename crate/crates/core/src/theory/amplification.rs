//! One-step amplification operators: the dense matrix acting on the whole
//! stacked error vector and the von Neumann symbol for Fourier modes.

use super::matrices::{assemble_gamma_omega, euler_parts};
use crate::error::{MocError, Result};
use crate::grid::Grid1D;
use crate::linalg::eig_dense_complex;
use crate::model::BoundaryKind;
use crate::schemes::SchemeId;
use nalgebra::{DMatrix, Matrix4};
use num_complex::Complex64;

/// Largest `M` accepted for dense assembly.
pub const DENSE_MAX_M: usize = 512;

#[derive(Debug, Clone, PartialEq)]
pub struct AmplificationMatrix {
    pub scheme: SchemeId,
    pub grid: Grid1D,
    pub bc: BoundaryKind,
    /// Acts on `(s_0, …, s_M)` (nonreflecting) or `(s_0, …, s_{M-1})`
    /// (periodic), each `s_m` a 4-vector; leapfrog stacks `(s^n, s^{n-1})`.
    pub matrix: DMatrix<f64>,
}

impl AmplificationMatrix {
    /// Number of grid nodes carried by one time level.
    pub fn nodes(&self) -> usize {
        match self.bc {
            BoundaryKind::Periodic => self.grid.m,
            BoundaryKind::Nonreflecting => self.grid.m + 1,
        }
    }
}

fn put(mat: &mut DMatrix<f64>, row: usize, col: usize, block: &Matrix4<f64>, rows: std::ops::Range<usize>) {
    for r in rows {
        for c in 0..4 {
            mat[(row + r, col + c)] += block[(r, c)];
        }
    }
}

/// Neighbour `m + d` of node `m`, or `None` when it falls off a
/// nonreflecting domain.
fn neighbour(bc: BoundaryKind, nodes: usize, m: usize, d: i64) -> Option<usize> {
    let j = m as i64 + d;
    match bc {
        BoundaryKind::Periodic => Some(j.rem_euclid(nodes as i64) as usize),
        BoundaryKind::Nonreflecting => (0..nodes as i64).contains(&j).then_some(j as usize),
    }
}

/// Dense amplification matrix for nonreflecting boundaries.
pub fn assemble_amplification_matrix(scheme: SchemeId, grid: Grid1D) -> Result<AmplificationMatrix> {
    assemble_amplification_matrix_with_bc(scheme, grid, BoundaryKind::Nonreflecting)
}

pub fn assemble_amplification_matrix_with_bc(scheme: SchemeId, grid: Grid1D, bc: BoundaryKind) -> Result<AmplificationMatrix> {
    if grid.m > DENSE_MAX_M {
        return Err(MocError::GridTooLarge { m: grid.m, cap: DENSE_MAX_M });
    }
    let nodes = match bc {
        BoundaryKind::Periodic => grid.m,
        BoundaryKind::Nonreflecting => grid.m + 1,
    };
    let n = 4 * nodes;
    let h = grid.h;
    let (all, plus, minus) = (0..4, 0..2, 2..4);
    let matrix = match scheme {
        SchemeId::Se | SchemeId::Me => {
            let sm = assemble_gamma_omega(scheme, h)?;
            let mut mat = DMatrix::zeros(n, n);
            for m in 0..nodes {
                if let Some(j) = neighbour(bc, nodes, m, -1) {
                    put(&mut mat, 4 * m, 4 * j, &sm.gamma, all.clone());
                }
                if let Some(j) = neighbour(bc, nodes, m, 1) {
                    put(&mut mat, 4 * m, 4 * j, &sm.omega, all.clone());
                }
            }
            if bc == BoundaryKind::Nonreflecting {
                for r in [0, 1, 4 * grid.m + 2, 4 * grid.m + 3] {
                    mat.row_mut(r).fill(0.0);
                }
            }
            mat
        }
        SchemeId::Lf(_) => {
            let (g0, g1, o0, o1) = euler_parts();
            let (se_g, se_o) = (g0 + g1 * h, o0 + o1 * h);
            let mut mat = DMatrix::zeros(2 * n, 2 * n);
            let (g1h, o1h) = (g1 * (2.0 * h), o1 * (2.0 * h));
            for m in 0..nodes {
                let row = 4 * m;
                // forward field
                let startup_plus = bc == BoundaryKind::Nonreflecting && m <= 1;
                if bc == BoundaryKind::Nonreflecting && m == 1 {
                    put(&mut mat, row, 0, &se_g, plus.clone());
                } else if !startup_plus {
                    let j1 = neighbour(bc, nodes, m, -1).expect("interior node");
                    let j2 = neighbour(bc, nodes, m, -2).expect("interior node");
                    put(&mut mat, row, 4 * j1, &g1h, plus.clone());
                    put(&mut mat, row, n + 4 * j2, &g0, plus.clone());
                }
                // backward field
                let last = grid.m;
                let startup_minus = bc == BoundaryKind::Nonreflecting && m + 1 >= last;
                if bc == BoundaryKind::Nonreflecting && m + 1 == last {
                    put(&mut mat, row, 4 * last, &se_o, minus.clone());
                } else if !startup_minus {
                    let j1 = neighbour(bc, nodes, m, 1).expect("interior node");
                    let j2 = neighbour(bc, nodes, m, 2).expect("interior node");
                    put(&mut mat, row, 4 * j1, &o1h, minus.clone());
                    put(&mut mat, row, n + 4 * j2, &o0, minus.clone());
                }
            }
            for i in 0..n {
                mat[(n + i, i)] = 1.0;
            }
            mat
        }
    };
    Ok(AmplificationMatrix { scheme, grid, bc, matrix })
}

/// Amplification factors of the Fourier mode `ρ = e^{i kh}`: the 4
/// eigenvalues of `ρ⁻¹Γ + ρΩ` (SE, ME) or the 8 roots of the leapfrog
/// quadratic eigenproblem, sorted by descending modulus.
pub fn von_neumann_factors(scheme: SchemeId, kh: f64, h: f64) -> Result<Vec<Complex64>> {
    let rho = Complex64::from_polar(1.0, kh);
    let cx = |m: &Matrix4<f64>| m.map(|v| Complex64::new(v, 0.0));
    match scheme {
        SchemeId::Se | SchemeId::Me => {
            let sm = assemble_gamma_omega(scheme, h)?;
            let sym = cx(&sm.gamma) / rho + cx(&sm.omega) * rho;
            eig_dense_complex(&DMatrix::from_iterator(4, 4, sym.iter().copied()))
        }
        SchemeId::Lf(_) => {
            let (g0, g1, o0, o1) = euler_parts();
            let c1 = (cx(&g1) / rho + cx(&o1) * rho) * Complex64::new(2.0 * h, 0.0);
            let c0 = cx(&g0) / (rho * rho) + cx(&o0) * (rho * rho);
            let mut comp = DMatrix::<Complex64>::zeros(8, 8);
            comp.view_mut((0, 0), (4, 4)).copy_from(&c1);
            comp.view_mut((0, 4), (4, 4)).copy_from(&c0);
            for i in 0..4 {
                comp[(4 + i, i)] = Complex64::new(1.0, 0.0);
            }
            eig_dense_complex(&comp)
        }
    }
}

/// Stacks a field state of the linear model into the node-major error
/// vector used by [`AmplificationMatrix`].
pub fn stack_state(plus: &[f64], minus: &[f64], nodes: usize) -> Vec<f64> {
    let mut v = Vec::with_capacity(4 * nodes);
    for m in 0..nodes {
        v.extend_from_slice(&plus[2 * m..2 * m + 2]);
        v.extend_from_slice(&minus[2 * m..2 * m + 2]);
    }
    v
}
