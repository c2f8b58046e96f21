//! Physical models, their exact background solutions, boundary data and
//! seeded noise.
//!
//! A [`FieldState`] stores the forward (`plus`) and backward (`minus`)
//! fields as flat arrays with `ncomp` real components per node:
//! three for the coupled-wave model, two (re, im) for Gross–Neveu and two
//! for the linearized coupled-wave system `(s1, s3)`.

use crate::error::{MocError, Result};
use crate::grid::Grid1D;
use nalgebra::{Matrix2, Matrix4};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use serde::Serialize;

/// Diagonal of the anisotropy matrix in `S± × Ĵ S∓`.
pub const J_HAT: [f64; 3] = [1.0, -1.0, -2.0];

/// Name of the noise generator, recorded in run metadata.
pub const NOISE_GENERATOR: &str = "ChaCha20 (rand_chacha), uniform [-a, a] per real component";

/// `A`, `B` and the 4×4 linearization `P = [[-A, B], [-B, A]]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CouplingMatrices {
    pub a: Matrix2<f64>,
    pub b: Matrix2<f64>,
    pub p: Matrix4<f64>,
}

impl CouplingMatrices {
    pub fn p_pp(&self) -> Matrix2<f64> {
        self.p.fixed_view::<2, 2>(0, 0).into_owned()
    }
    pub fn p_pm(&self) -> Matrix2<f64> {
        self.p.fixed_view::<2, 2>(0, 2).into_owned()
    }
    pub fn p_mp(&self) -> Matrix2<f64> {
        self.p.fixed_view::<2, 2>(2, 0).into_owned()
    }
    pub fn p_mm(&self) -> Matrix2<f64> {
        self.p.fixed_view::<2, 2>(2, 2).into_owned()
    }
}

/// Linearization of the coupled-wave model about `S± = (0, ±1, 0)`.
pub fn coupling_matrices() -> CouplingMatrices {
    let a = Matrix2::new(0.0, 1.0, -1.0, 0.0);
    let b = Matrix2::new(0.0, -2.0, -1.0, 0.0);
    let mut p = Matrix4::zeros();
    p.fixed_view_mut::<2, 2>(0, 0).copy_from(&(-a));
    p.fixed_view_mut::<2, 2>(0, 2).copy_from(&b);
    p.fixed_view_mut::<2, 2>(2, 0).copy_from(&(-b));
    p.fixed_view_mut::<2, 2>(2, 2).copy_from(&a);
    CouplingMatrices { a, b, p }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Model {
    /// `S±_t ± S±_x = S± × Ĵ S∓` with 3-vector fields.
    CoupledWave,
    /// Gross–Neveu equations for complex `u` (forward) and `v` (backward).
    GrossNeveu { omega: f64 },
    /// `s_t + Σ s_x = P s` for the four components `(s1+, s3+, s1-, s3-)`.
    #[serde(skip)]
    Linear(Matrix4<f64>),
}

impl Model {
    pub fn linearized() -> Self {
        Model::Linear(coupling_matrices().p)
    }

    pub fn ncomp(&self) -> usize {
        match self {
            Model::CoupledWave => 3,
            Model::GrossNeveu { .. } | Model::Linear(_) => 2,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Model::CoupledWave => "coupled-wave",
            Model::GrossNeveu { .. } => "gross-neveu",
            Model::Linear(_) => "linear",
        }
    }

    /// Right-hand sides `f+` and `f-` at a single node.
    #[inline]
    pub fn rhs(&self, plus: &[f64], minus: &[f64], f_plus: &mut [f64], f_minus: &mut [f64]) {
        match self {
            Model::CoupledWave => {
                cross_j(plus, minus, f_plus);
                cross_j(minus, plus, f_minus);
            }
            Model::GrossNeveu { .. } => {
                let u = Complex64::new(plus[0], plus[1]);
                let v = Complex64::new(minus[0], minus[1]);
                let fu = gross_neveu_rhs(u, v);
                let fv = gross_neveu_rhs(v, u);
                f_plus[0] = fu.re;
                f_plus[1] = fu.im;
                f_minus[0] = fv.re;
                f_minus[1] = fv.im;
            }
            Model::Linear(p) => {
                let s = [plus[0], plus[1], minus[0], minus[1]];
                for r in 0..2 {
                    f_plus[r] = (0..4).map(|c| p[(r, c)] * s[c]).sum();
                    f_minus[r] = (0..4).map(|c| p[(r + 2, c)] * s[c]).sum();
                }
            }
        }
    }
}

/// Coupled-wave right-hand side of a field given its partner: `own × Ĵ other`.
#[inline(always)]
pub(crate) fn coupled_wave_flux(own: &[f64; 3], other: &[f64; 3]) -> [f64; 3] {
    let jt = [J_HAT[0] * other[0], J_HAT[1] * other[1], J_HAT[2] * other[2]];
    [
        own[1] * jt[2] - own[2] * jt[1],
        own[2] * jt[0] - own[0] * jt[2],
        own[0] * jt[1] - own[1] * jt[0],
    ]
}

/// Gross–Neveu right-hand side of one field, as `(re, im)`.
#[inline(always)]
pub(crate) fn gross_neveu_flux(own: &[f64; 2], other: &[f64; 2]) -> [f64; 2] {
    let f = gross_neveu_rhs(Complex64::new(own[0], own[1]), Complex64::new(other[0], other[1]));
    [f.re, f.im]
}

/// `out = s × Ĵ t`.
#[inline]
fn cross_j(s: &[f64], t: &[f64], out: &mut [f64]) {
    let jt = [J_HAT[0] * t[0], J_HAT[1] * t[1], J_HAT[2] * t[2]];
    out[0] = s[1] * jt[2] - s[2] * jt[1];
    out[1] = s[2] * jt[0] - s[0] * jt[2];
    out[2] = s[0] * jt[1] - s[1] * jt[0];
}

/// `i(|w|² z + w² z*) − i w` for the field `z` coupled to `w`.
#[inline]
fn gross_neveu_rhs(z: Complex64, w: Complex64) -> Complex64 {
    let i = Complex64::i();
    i * (w.norm_sqr() * z + w * w * z.conj()) - i * w
}

/// Standing Gross–Neveu soliton profile `(U(x), V(x))`.
pub fn soliton_profile(omega: f64, x: f64) -> (Complex64, Complex64) {
    let beta = (1.0 - omega * omega).sqrt();
    let mu = ((1.0 - omega) / (1.0 + omega)).sqrt();
    let (c, s) = ((beta * x).cosh(), (beta * x).sinh());
    // cosh² − μ² sinh² written to avoid overflow for large |x|
    let denom = c * c - mu * mu * s * s;
    let amp = (1.0 - omega).sqrt();
    if !denom.is_finite() {
        // deep tails: the profile is below the smallest normal double
        return (Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0));
    }
    let u = Complex64::new(c, mu * s) * (amp / denom);
    let v = Complex64::new(c, -mu * s) * (amp / denom);
    (u, v)
}

#[derive(Debug, Clone, PartialEq)]
pub struct FieldState {
    pub model: Model,
    pub grid: Grid1D,
    pub plus: Vec<f64>,
    pub minus: Vec<f64>,
    pub time: f64,
}

impl FieldState {
    pub fn zeros(model: Model, grid: Grid1D) -> Self {
        let n = model.ncomp() * grid.nodes();
        FieldState {
            model,
            grid,
            plus: vec![0.0; n],
            minus: vec![0.0; n],
            time: 0.0,
        }
    }

    pub fn ncomp(&self) -> usize {
        self.model.ncomp()
    }

    pub fn plus_at(&self, m: usize) -> &[f64] {
        let c = self.ncomp();
        &self.plus[m * c..(m + 1) * c]
    }

    pub fn minus_at(&self, m: usize) -> &[f64] {
        let c = self.ncomp();
        &self.minus[m * c..(m + 1) * c]
    }

    pub fn check(&self) -> Result<()> {
        let n = self.ncomp() * self.grid.nodes();
        if self.plus.len() != n || self.minus.len() != n {
            return Err(MocError::Shape(format!(
                "expected {n} values per field, got {} and {}",
                self.plus.len(),
                self.minus.len()
            )));
        }
        if self.plus.iter().chain(&self.minus).any(|v| !v.is_finite()) {
            return Err(MocError::Shape("non-finite entry".into()));
        }
        Ok(())
    }

    /// Largest absolute entry over both fields.
    pub fn max_abs(&self) -> f64 {
        self.plus
            .iter()
            .chain(&self.minus)
            .fold(0.0f64, |acc, v| acc.max(v.abs()))
    }
}

/// Exact solution at time `t`: the constant background for the coupled-wave
/// model, the rotating soliton for Gross–Neveu, zero for the linear system.
pub fn exact_state(model: Model, grid: Grid1D, t: f64) -> Result<FieldState> {
    let mut state = FieldState::zeros(model, grid);
    state.time = t;
    match model {
        Model::CoupledWave => {
            for m in 0..grid.nodes() {
                state.plus[3 * m + 1] = 1.0;
                state.minus[3 * m + 1] = -1.0;
            }
        }
        Model::GrossNeveu { omega } => {
            if !(omega > 0.0 && omega < 1.0) {
                return Err(MocError::InvalidOmega(omega));
            }
            let phase = Complex64::from_polar(1.0, -omega * t);
            for m in 0..grid.nodes() {
                let (u, v) = soliton_profile(omega, grid.x(m));
                let (u, v) = (u * phase, v * phase);
                state.plus[2 * m] = u.re;
                state.plus[2 * m + 1] = u.im;
                state.minus[2 * m] = v.re;
                state.minus[2 * m + 1] = v.im;
            }
        }
        Model::Linear(_) => {}
    }
    Ok(state)
}

pub fn background_state(model: Model, grid: Grid1D) -> Result<FieldState> {
    exact_state(model, grid, 0.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum BoundaryKind {
    Periodic,
    Nonreflecting,
}

/// Boundary handling plus the prescribed inflow values: the forward field
/// at the left edge and the backward field at the right edge.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundarySpec {
    pub kind: BoundaryKind,
    pub plus_left: Vec<f64>,
    pub minus_right: Vec<f64>,
}

impl BoundarySpec {
    pub fn periodic() -> Self {
        BoundarySpec {
            kind: BoundaryKind::Periodic,
            plus_left: Vec::new(),
            minus_right: Vec::new(),
        }
    }

    /// Nonreflecting data matching the model's background: `(0, 1, 0)` and
    /// `(0, -1, 0)` for the coupled-wave model, zeros otherwise.
    pub fn nonreflecting(model: Model) -> Self {
        let (plus_left, minus_right) = match model {
            Model::CoupledWave => (vec![0.0, 1.0, 0.0], vec![0.0, -1.0, 0.0]),
            _ => (vec![0.0; 2], vec![0.0; 2]),
        };
        BoundarySpec {
            kind: BoundaryKind::Nonreflecting,
            plus_left,
            minus_right,
        }
    }

    pub fn of_kind(kind: BoundaryKind, model: Model) -> Self {
        match kind {
            BoundaryKind::Periodic => Self::periodic(),
            BoundaryKind::Nonreflecting => Self::nonreflecting(model),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NoiseSpec {
    pub amplitude: f64,
    pub seed: u64,
}

/// Perturbs every real degree of freedom by an independent uniform draw in
/// `[-a, a]`. Draws are consumed for every entry in a fixed order (plus
/// field, then minus field, node-major), so periodic and nonreflecting runs
/// with the same seed share their interior noise. Inflow entries pinned by a
/// nonreflecting boundary keep their values; a periodic state keeps node `M`
/// equal to node `0`.
pub fn add_noise(state: &FieldState, spec: NoiseSpec, bc: BoundaryKind) -> FieldState {
    let mut out = state.clone();
    if spec.amplitude == 0.0 {
        return out;
    }
    let c = state.ncomp();
    let last = state.grid.m;
    let mut rng = ChaCha20Rng::seed_from_u64(spec.seed);
    let draw = |rng: &mut ChaCha20Rng| spec.amplitude * (2.0 * rng.random::<f64>() - 1.0);
    for (i, v) in out.plus.iter_mut().enumerate() {
        let d = draw(&mut rng);
        if !(bc == BoundaryKind::Nonreflecting && i / c == 0) {
            *v += d;
        }
    }
    for (i, v) in out.minus.iter_mut().enumerate() {
        let d = draw(&mut rng);
        if !(bc == BoundaryKind::Nonreflecting && i / c == last) {
            *v += d;
        }
    }
    if bc == BoundaryKind::Periodic {
        for k in 0..c {
            out.plus[last * c + k] = out.plus[k];
            out.minus[last * c + k] = out.minus[k];
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::make_grid;

    #[test]
    fn p_matches_block_layout() {
        let cm = coupling_matrices();
        let row0: Vec<f64> = (0..4).map(|c| cm.p[(0, c)]).collect();
        assert_eq!(row0, vec![0.0, -1.0, 0.0, -2.0]);
        let nonzero = cm.p.iter().filter(|v| **v != 0.0).count();
        assert_eq!(nonzero, 8);
        assert!(cm.p.iter().all(|v| [0.0, 1.0, -1.0, 2.0, -2.0].contains(v)));
        assert_eq!(cm.a + cm.a.transpose(), Matrix2::zeros());
        let sym = cm.p + cm.p.transpose();
        assert_eq!(sym.fixed_view::<2, 2>(0, 0).into_owned(), Matrix2::zeros());
        assert_eq!(sym.fixed_view::<2, 2>(2, 2).into_owned(), Matrix2::zeros());
    }

    #[test]
    fn linear_rhs_is_jacobian_of_coupled_wave() {
        // finite-difference Jacobian of the nonlinear right-hand side at the
        // background, restricted to components 1 and 3
        let model = Model::CoupledWave;
        let base_p = [0.0, 1.0, 0.0];
        let base_m = [0.0, -1.0, 0.0];
        let eps = 1e-7;
        let p = coupling_matrices().p;
        let idx = [0usize, 2];
        for col in 0..4 {
            let mut sp = base_p;
            let mut sm = base_m;
            if col < 2 {
                sp[idx[col]] += eps;
            } else {
                sm[idx[col - 2]] += eps;
            }
            let (mut fp, mut fm) = ([0.0; 3], [0.0; 3]);
            model.rhs(&sp, &sm, &mut fp, &mut fm);
            let column = [fp[0] / eps, fp[2] / eps, fm[0] / eps, fm[2] / eps];
            for row in 0..4 {
                assert!((column[row] - p[(row, col)]).abs() < 1e-6, "P[{row},{col}]");
            }
        }
    }

    #[test]
    fn background_is_stationary() {
        let g = make_grid(10.0, 0.5, false).unwrap();
        let s = background_state(Model::CoupledWave, g).unwrap();
        let (mut fp, mut fm) = ([1.0; 3], [1.0; 3]);
        Model::CoupledWave.rhs(s.plus_at(3), s.minus_at(3), &mut fp, &mut fm);
        assert_eq!(fp, [0.0; 3]);
        assert_eq!(fm, [0.0; 3]);
        assert_eq!(s.plus_at(0), &[0.0, 1.0, 0.0]);
        assert_eq!(s.minus_at(20), &[0.0, -1.0, 0.0]);
    }

    #[test]
    fn soliton_center_and_tails() {
        let (u, v) = soliton_profile(0.7, 0.0);
        assert!((u.re - 0.3f64.sqrt()).abs() < 1e-15 && u.im == 0.0);
        assert_eq!(u, v);
        assert!((u.re - 0.54772).abs() < 1e-5);
        // far tail: |U| -> 2 sqrt(1-Ω) sqrt(1+μ²)/(1-μ²) e^{-βx}
        let (u, v) = soliton_profile(0.7, 32.0);
        let (beta, mu2): (f64, f64) = ((1.0 - 0.49f64).sqrt(), 0.3 / 1.7);
        let tail = 2.0 * 0.3f64.sqrt() * (1.0 + mu2).sqrt() / (1.0 - mu2) * (-beta * 32.0).exp();
        assert!((u.norm() / tail - 1.0).abs() < 1e-9);
        assert!(u.norm() < 2e-10 && v.norm() == u.norm());
    }

    #[test]
    fn soliton_symmetry() {
        let g = make_grid(64.0, 0.25, true).unwrap();
        for m in 0..=g.m {
            let (u, v) = soliton_profile(0.7, g.x(m));
            let (um, vm) = soliton_profile(0.7, g.x(g.m - m));
            assert!((u.norm() - um.norm()).abs() < 1e-14);
            assert!((v - u.conj()).norm() < 1e-14);
            assert!((v - um).norm() < 1e-14);
            assert!((u - vm).norm() < 1e-14);
        }
    }

    #[test]
    fn invalid_omega() {
        let g = make_grid(10.0, 0.5, true).unwrap();
        assert_eq!(
            background_state(Model::GrossNeveu { omega: 1.0 }, g),
            Err(MocError::InvalidOmega(1.0))
        );
        assert!(background_state(Model::GrossNeveu { omega: 0.0 }, g).is_err());
    }

    #[test]
    fn zero_noise_is_identity() {
        let g = make_grid(10.0, 0.5, false).unwrap();
        let s = background_state(Model::CoupledWave, g).unwrap();
        let n = add_noise(&s, NoiseSpec { amplitude: 0.0, seed: 3 }, BoundaryKind::Nonreflecting);
        assert_eq!(n, s);
    }

    #[test]
    fn noise_is_reproducible_and_bounded() {
        let g = make_grid(64.0, 64.0 / 4096.0, true).unwrap();
        let model = Model::GrossNeveu { omega: 0.7 };
        let s = background_state(model, g).unwrap();
        let spec = NoiseSpec { amplitude: 1e-12, seed: 42 };
        let a = add_noise(&s, spec, BoundaryKind::Nonreflecting);
        let b = add_noise(&s, spec, BoundaryKind::Nonreflecting);
        assert_eq!(a, b);
        let dev = a
            .plus
            .iter()
            .zip(&s.plus)
            .chain(a.minus.iter().zip(&s.minus))
            .map(|(x, y)| (x - y).abs())
            .fold(0.0, f64::max);
        assert!(dev <= 1e-12 && dev > 0.0);
        let other = add_noise(&s, NoiseSpec { amplitude: 1e-12, seed: 43 }, BoundaryKind::Nonreflecting);
        assert_ne!(a, other);
    }

    #[test]
    fn pinned_and_periodic_entries() {
        let g = make_grid(4.0, 0.5, false).unwrap();
        let s = background_state(Model::CoupledWave, g).unwrap();
        let spec = NoiseSpec { amplitude: 0.1, seed: 1 };
        let nr = add_noise(&s, spec, BoundaryKind::Nonreflecting);
        assert_eq!(nr.plus_at(0), s.plus_at(0));
        assert_eq!(nr.minus_at(g.m), s.minus_at(g.m));
        assert_ne!(nr.minus_at(0), s.minus_at(0));
        let pe = add_noise(&s, spec, BoundaryKind::Periodic);
        assert_eq!(pe.plus_at(0), pe.plus_at(g.m));
        assert_eq!(pe.minus_at(0), pe.minus_at(g.m));
        // shared interior noise
        assert_eq!(pe.plus_at(2), nr.plus_at(2));
    }
}
