//! Method-of-characteristics time steppers at unit CFL number.
//!
//! Forward fields travel from node `m-1` to node `m` in one step and
//! backward fields from `m+1` to `m`. Under nonreflecting boundaries the
//! forward field at node `0` and the backward field at node `M` are reset to
//! their prescribed values after every step; under periodic boundaries node
//! `M` is identified with node `0`.

use crate::error::{MocError, Result};
use crate::grid::Grid1D;
use crate::model::{
    add_noise, coupled_wave_flux, exact_state, gross_neveu_flux, BoundaryKind, BoundarySpec, FieldState, Model, NoiseSpec};
use serde::Serialize;

/// One-step method used for the first leapfrog step and for the forward
/// (backward) field next to the left (right) boundary.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Startup {
    Se,
    #[default]
    Me,
    Rk4,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SchemeId {
    Se,
    Me,
    Lf(Startup),
}

impl SchemeId {
    pub fn name(&self) -> String {
        match self {
            SchemeId::Se => "se".into(),
            SchemeId::Me => "me".into(),
            SchemeId::Lf(s) => format!("lf({})", startup_name(*s)),
        }
    }
}

fn startup_name(s: Startup) -> &'static str {
    match s {
        Startup::Se => "se",
        Startup::Me => "me",
        Startup::Rk4 => "rk4",
    }
}

/// Error max-norm above which a run is aborted.
pub const BLOWUP_THRESHOLD: f64 = 1e10;

/// Scratch buffers shared by the steppers.
#[derive(Debug, Clone)]
struct Work {
    fp: Vec<f64>,
    fm: Vec<f64>,
    bar_p: Vec<f64>,
    bar_m: Vec<f64>,
}

impl Work {
    fn new(len: usize) -> Self {
        Work {
            fp: vec![0.0; len],
            fm: vec![0.0; len],
            bar_p: vec![0.0; len],
            bar_m: vec![0.0; len],
        }
    }
}

fn eval_rhs(model: &Model, c: usize, plus: &[f64], minus: &[f64], fp: &mut [f64], fm: &mut [f64]) {
    for (((p, m), a), b) in plus
        .chunks_exact(c)
        .zip(minus.chunks_exact(c))
        .zip(fp.chunks_exact_mut(c))
        .zip(fm.chunks_exact_mut(c))
    {
        model.rhs(p, m, a, b);
    }
}

/// Node the forward field arrives from.
#[inline]
fn src_plus(kind: BoundaryKind, m: usize, last: usize, offset: usize) -> usize {
    match kind {
        BoundaryKind::Periodic => (m + last - offset % last) % last,
        BoundaryKind::Nonreflecting => m - offset,
    }
}

#[inline]
fn src_minus(kind: BoundaryKind, m: usize, last: usize, offset: usize) -> usize {
    match kind {
        BoundaryKind::Periodic => (m + offset) % last,
        BoundaryKind::Nonreflecting => m + offset,
    }
}

/// Writes boundary data: inflow values for nonreflecting boundaries, the
/// node-`M` copy of node `0` for periodic ones.
fn apply_bc(bc: &BoundarySpec, c: usize, last: usize, plus: &mut [f64], minus: &mut [f64]) {
    match bc.kind {
        BoundaryKind::Nonreflecting => {
            plus[..c].copy_from_slice(&bc.plus_left);
            minus[last * c..(last + 1) * c].copy_from_slice(&bc.minus_right);
        }
        BoundaryKind::Periodic => {
            plus.copy_within(0..c, last * c);
            minus.copy_within(0..c, last * c);
        }
    }
}

/// Range of nodes updated by the interior rule for each field.
fn update_ranges(kind: BoundaryKind, last: usize) -> (std::ops::Range<usize>, std::ops::Range<usize>) {
    match kind {
        BoundaryKind::Periodic => (0..last, 0..last),
        BoundaryKind::Nonreflecting => (1..last + 1, 0..last),
    }
}

/// Simple-Euler transport: `out = s(src) + h f(src)` with `f` given.
#[allow(clippy::too_many_arguments)]
fn euler_transport(
    bc: &BoundarySpec,
    c: usize,
    last: usize,
    h: f64,
    plus: &[f64],
    minus: &[f64],
    fp: &[f64],
    fm: &[f64],
    out_p: &mut [f64],
    out_m: &mut [f64],
) {
    let (rp, rm) = update_ranges(bc.kind, last);
    for m in rp {
        let s = src_plus(bc.kind, m, last, 1);
        for k in 0..c {
            out_p[m * c + k] = plus[s * c + k] + h * fp[s * c + k];
        }
    }
    for m in rm {
        let s = src_minus(bc.kind, m, last, 1);
        for k in 0..c {
            out_m[m * c + k] = minus[s * c + k] + h * fm[s * c + k];
        }
    }
    apply_bc(bc, c, last, out_p, out_m);
}

fn se_into(state: &FieldState, bc: &BoundarySpec, work: &mut Work, out: &mut FieldState) {
    dispatch(state, bc, work, out, false);
}

fn me_into(state: &FieldState, bc: &BoundarySpec, work: &mut Work, out: &mut FieldState) {
    dispatch(state, bc, work, out, true);
}

fn dispatch(state: &FieldState, bc: &BoundarySpec, work: &mut Work, out: &mut FieldState, corrector: bool) {
    match state.model {
        Model::CoupledWave => fused_step::<3>(state, bc, work, out, corrector, coupled_wave_flux, coupled_wave_flux),
        Model::GrossNeveu { .. } => fused_step::<2>(state, bc, work, out, corrector, gross_neveu_flux, gross_neveu_flux),
        Model::Linear(p) => {
            let fwd = move |own: &[f64; 2], other: &[f64; 2]| {
                [
                    p[(0, 0)] * own[0] + p[(0, 1)] * own[1] + p[(0, 2)] * other[0] + p[(0, 3)] * other[1],
                    p[(1, 0)] * own[0] + p[(1, 1)] * own[1] + p[(1, 2)] * other[0] + p[(1, 3)] * other[1],
                ]
            };
            let bwd = move |own: &[f64; 2], other: &[f64; 2]| {
                [
                    p[(2, 0)] * other[0] + p[(2, 1)] * other[1] + p[(2, 2)] * own[0] + p[(2, 3)] * own[1],
                    p[(3, 0)] * other[0] + p[(3, 1)] * other[1] + p[(3, 2)] * own[0] + p[(3, 3)] * own[1],
                ]
            };
            fused_step::<2>(state, bc, work, out, corrector, fwd, bwd)
        }
    }
    out.time = state.time + state.grid.h;
}

#[inline(always)]
fn arr<const C: usize>(s: &[f64]) -> &[f64; C] {
    s.try_into().unwrap()
}

/// `out_j = a_j + h f(a_j, b_j)` (and `half_j = a_j + ½h f` when given) for
/// node-aligned slices.
#[inline(always)]
fn transport<const C: usize>(
    a: &[f64],
    b: &[f64],
    out: &mut [f64],
    mut half: Option<&mut [f64]>,
    h: f64,
    f: impl Fn(&[f64; C], &[f64; C]) -> [f64; C],
) {
    let chunks = a.chunks_exact(C).zip(b.chunks_exact(C)).zip(out.chunks_exact_mut(C));
    match half.as_deref_mut() {
        None => {
            for ((a, b), o) in chunks {
                let (a, b) = (arr::<C>(a), arr::<C>(b));
                let r = f(a, b);
                for k in 0..C {
                    o[k] = a[k] + h * r[k];
                }
            }
        }
        Some(half) => {
            for (((a, b), o), q) in chunks.zip(half.chunks_exact_mut(C)) {
                let (a, b) = (arr::<C>(a), arr::<C>(b));
                let r = f(a, b);
                for k in 0..C {
                    o[k] = a[k] + h * r[k];
                    q[k] = a[k] + 0.5 * h * r[k];
                }
            }
        }
    }
}

/// `out_j += ½h f(a_j, b_j)`.
#[inline(always)]
fn add_half<const C: usize>(a: &[f64], b: &[f64], out: &mut [f64], h: f64, f: impl Fn(&[f64; C], &[f64; C]) -> [f64; C]) {
    for ((a, b), o) in a.chunks_exact(C).zip(b.chunks_exact(C)).zip(out.chunks_exact_mut(C)) {
        let r = f(arr::<C>(a), arr::<C>(b));
        for k in 0..C {
            o[k] += 0.5 * h * r[k];
        }
    }
}

/// Modified-Euler step with nonreflecting boundaries in a single sweep. The
/// predictor at node `m` needs the right-hand sides at `m − 1` and `m + 1`,
/// so a three-node window replaces the predictor arrays.
fn me_streaming<const C: usize>(
    state: &FieldState,
    bc: &BoundarySpec,
    out: &mut FieldState,
    fwd: impl Fn(&[f64; C], &[f64; C]) -> [f64; C] + Copy,
    bwd: impl Fn(&[f64; C], &[f64; C]) -> [f64; C] + Copy,
) {
    let last = state.grid.m;
    let h = state.grid.h;
    let (p, q) = (&state.plus, &state.minus);
    let left: [f64; C] = bc.plus_left[..].try_into().unwrap();
    let right: [f64; C] = bc.minus_right[..].try_into().unwrap();
    // Euler values `x + h f` and half-step values `x + ½h f` transported
    // from source node `s`: forward to `s + 1`, backward to `s − 1`
    let source = |s: usize| {
        let (ps, qs) = (arr::<C>(&p[s * C..s * C + C]), arr::<C>(&q[s * C..s * C + C]));
        let (fp, fm) = (fwd(ps, qs), bwd(qs, ps));
        let mut r = [[0.0; C]; 4];
        for k in 0..C {
            r[0][k] = ps[k] + h * fp[k];
            r[1][k] = ps[k] + 0.5 * h * fp[k];
            r[2][k] = qs[k] + h * fm[k];
            r[3][k] = qs[k] + 0.5 * h * fm[k];
        }
        r
    };
    let corrected = |half: &[f64; C], g: [f64; C], o: &mut [f64]| {
        for k in 0..C {
            o[k] = half[k] + 0.5 * h * g[k];
        }
    };
    // forward predictor / half values at nodes s − 1 (a) and s (b)
    let s0 = source(0);
    let s1 = source(1);
    corrected(&s1[3], bwd(&s1[2], &left), &mut out.minus[..C]);
    let (mut bar_a, mut half_a) = (s0[0], s0[1]);
    let (mut bar_b, mut half_b) = (s1[0], s1[1]);
    for (s, (op, om)) in (2..=last).zip(out.plus[C..].chunks_exact_mut(C).zip(out.minus[C..].chunks_exact_mut(C))) {
        let [bar_c, half_c, bar_m, half_m] = source(s);
        // node s − 1
        corrected(&half_m, bwd(&bar_m, &bar_a), om);
        corrected(&half_a, fwd(&bar_a, &bar_m), op);
        (bar_a, half_a) = (bar_b, half_b);
        (bar_b, half_b) = (bar_c, half_c);
    }
    corrected(&half_a, fwd(&bar_a, &right), &mut out.plus[last * C..]);
    apply_bc(bc, C, last, &mut out.plus, &mut out.minus);
}

/// Simple-Euler step, or modified-Euler when `corrector` is set. The
/// forward field moves one node right and the backward field one node left.
#[allow(clippy::too_many_arguments)]
fn fused_step<const C: usize>(
    state: &FieldState,
    bc: &BoundarySpec,
    work: &mut Work,
    out: &mut FieldState,
    corrector: bool,
    fwd: impl Fn(&[f64; C], &[f64; C]) -> [f64; C] + Copy,
    bwd: impl Fn(&[f64; C], &[f64; C]) -> [f64; C] + Copy,
) {
    if corrector && bc.kind == BoundaryKind::Nonreflecting {
        return me_streaming::<C>(state, bc, out, fwd, bwd);
    }
    let last = state.grid.m;
    let h = state.grid.h;
    let n = last * C;
    let (p, q) = (&state.plus[..], &state.minus[..]);
    // Euler transport; for ME into the predictor, with the first half of the
    // corrector in `out`
    #[allow(clippy::type_complexity)]
    let (tp, tq, mut half_p, mut half_q): (&mut [f64], &mut [f64], Option<&mut [f64]>, Option<&mut [f64]>) = if corrector {
        (&mut work.bar_p, &mut work.bar_m, Some(&mut out.plus), Some(&mut out.minus))
    } else {
        (&mut out.plus, &mut out.minus, None, None)
    };
    match bc.kind {
        BoundaryKind::Nonreflecting => {
            transport::<C>(&p[..n], &q[..n], &mut tp[C..], half_p.as_deref_mut().map(|s| &mut s[C..]), h, fwd);
            transport::<C>(&q[C..], &p[C..], &mut tq[..n], half_q.as_deref_mut().map(|s| &mut s[..n]), h, bwd);
        }
        BoundaryKind::Periodic => {
            let k = n - C;
            transport::<C>(&p[..k], &q[..k], &mut tp[C..n], half_p.as_deref_mut().map(|s| &mut s[C..n]), h, fwd);
            transport::<C>(&p[k..n], &q[k..n], &mut tp[..C], half_p.as_deref_mut().map(|s| &mut s[..C]), h, fwd);
            transport::<C>(&q[C..n], &p[C..n], &mut tq[..k], half_q.as_deref_mut().map(|s| &mut s[..k]), h, bwd);
            transport::<C>(&q[..C], &p[..C], &mut tq[k..n], half_q.as_deref_mut().map(|s| &mut s[k..n]), h, bwd);
        }
    }
    if corrector {
        // predictor with inflow values prescribed
        apply_bc(bc, C, last, &mut work.bar_p, &mut work.bar_m);
        let (bp, bq) = (&work.bar_p[..], &work.bar_m[..]);
        let (rp, rq) = match bc.kind {
            BoundaryKind::Nonreflecting => (C..n + C, 0..n),
            BoundaryKind::Periodic => (0..n, 0..n),
        };
        add_half::<C>(&bp[rp.clone()], &bq[rp.clone()], &mut out.plus[rp], h, fwd);
        add_half::<C>(&bq[rq.clone()], &bp[rq.clone()], &mut out.minus[rq], h, bwd);
    }
    apply_bc(bc, C, last, &mut out.plus, &mut out.minus);
}

/// Classical RK4 along the characteristic arriving at node `m`. The cross
/// field along the characteristic is interpolated linearly in time between
/// its value at the departure node (level `n`) and its Euler prediction at
/// the arrival node (level `n+1`).
fn rk4_node(model: &Model, c: usize, h: f64, s0: &[f64], cross_a: &[f64], cross_b: &[f64], forward: bool, out: &mut [f64]) {
    let mut cross_mid = [0.0; 3];
    for k in 0..c {
        cross_mid[k] = 0.5 * (cross_a[k] + cross_b[k]);
    }
    let f = |s: &[f64], cross: &[f64], res: &mut [f64]| {
        let mut other = [0.0; 3];
        if forward {
            model.rhs(s, cross, res, &mut other[..c]);
        } else {
            model.rhs(cross, s, &mut other[..c], res);
        }
    };
    let (mut k1, mut k2, mut k3, mut k4, mut tmp) = ([0.0; 3], [0.0; 3], [0.0; 3], [0.0; 3], [0.0; 3]);
    f(s0, cross_a, &mut k1[..c]);
    for k in 0..c {
        tmp[k] = s0[k] + 0.5 * h * k1[k];
    }
    f(&tmp[..c], &cross_mid[..c], &mut k2[..c]);
    for k in 0..c {
        tmp[k] = s0[k] + 0.5 * h * k2[k];
    }
    f(&tmp[..c], &cross_mid[..c], &mut k3[..c]);
    for k in 0..c {
        tmp[k] = s0[k] + h * k3[k];
    }
    f(&tmp[..c], cross_b, &mut k4[..c]);
    for k in 0..c {
        out[k] = s0[k] + h / 6.0 * (k1[k] + 2.0 * k2[k] + 2.0 * k3[k] + k4[k]);
    }
}

/// One-step value of the forward field at node `m` (`forward = true`) or of
/// the backward field at node `m`, computed from level `n` by `method`.
/// Requires `work.fp/fm` to hold the right-hand side of `state` and
/// `work.bar_p/bar_m` its Euler prediction.
fn one_step_node(state: &FieldState, bc: &BoundarySpec, work: &Work, method: Startup, m: usize, forward: bool, out: &mut [f64]) {
    let c = state.ncomp();
    let last = state.grid.m;
    let h = state.grid.h;
    let (field, f_field, bar_field) = if forward {
        (&state.plus, &work.fp, &work.bar_p)
    } else {
        (&state.minus, &work.fm, &work.bar_m)
    };
    let s = if forward { src_plus(bc.kind, m, last, 1) } else { src_minus(bc.kind, m, last, 1) };
    match method {
        Startup::Se => out.copy_from_slice(&bar_field[m * c..(m + 1) * c]),
        Startup::Me => {
            let mut gp = [0.0; 3];
            let mut gm = [0.0; 3];
            state.model.rhs(
                &work.bar_p[m * c..(m + 1) * c],
                &work.bar_m[m * c..(m + 1) * c],
                &mut gp[..c],
                &mut gm[..c],
            );
            let g = if forward { &gp } else { &gm };
            for k in 0..c {
                out[k] = 0.5 * (field[s * c + k] + bar_field[m * c + k] + h * g[k]);
            }
        }
        Startup::Rk4 => {
            let (cross, cross_bar) = if forward {
                (&state.minus, &work.bar_m)
            } else {
                (&state.plus, &work.bar_p)
            };
            rk4_node(
                &state.model,
                c,
                h,
                &field[s * c..(s + 1) * c],
                &cross[s * c..(s + 1) * c],
                &cross_bar[m * c..(m + 1) * c],
                forward,
                out,
            );
        }
    }
    let _ = f_field;
}

fn prepare_predictor(state: &FieldState, bc: &BoundarySpec, work: &mut Work) {
    let c = state.ncomp();
    let last = state.grid.m;
    eval_rhs(&state.model, c, &state.plus, &state.minus, &mut work.fp, &mut work.fm);
    euler_transport(
        bc, c, last, state.grid.h, &state.plus, &state.minus, &work.fp, &work.fm, &mut work.bar_p,
        &mut work.bar_m,
    );
}

fn one_step_into(state: &FieldState, bc: &BoundarySpec, method: Startup, work: &mut Work, out: &mut FieldState) {
    match method {
        Startup::Se => se_into(state, bc, work, out),
        Startup::Me => me_into(state, bc, work, out),
        Startup::Rk4 => {
            let c = state.ncomp();
            let last = state.grid.m;
            prepare_predictor(state, bc, work);
            let (rp, rm) = update_ranges(bc.kind, last);
            let mut buf = [0.0; 3];
            for m in rp {
                one_step_node(state, bc, work, Startup::Rk4, m, true, &mut buf[..c]);
                out.plus[m * c..(m + 1) * c].copy_from_slice(&buf[..c]);
            }
            for m in rm {
                one_step_node(state, bc, work, Startup::Rk4, m, false, &mut buf[..c]);
                out.minus[m * c..(m + 1) * c].copy_from_slice(&buf[..c]);
            }
            apply_bc(bc, c, last, &mut out.plus, &mut out.minus);
            out.time = state.time + state.grid.h;
        }
    }
}

fn lf_into(current: &FieldState, previous: &FieldState, bc: &BoundarySpec, startup: Startup, work: &mut Work, out: &mut FieldState) {
    let c = current.ncomp();
    let last = current.grid.m;
    let h = current.grid.h;
    match bc.kind {
        BoundaryKind::Nonreflecting => prepare_predictor(current, bc, work),
        BoundaryKind::Periodic => {
            eval_rhs(&current.model, c, &current.plus, &current.minus, &mut work.fp, &mut work.fm)
        }
    }
    let (rp, rm) = match bc.kind {
        BoundaryKind::Periodic => (0..last, 0..last),
        BoundaryKind::Nonreflecting => (2..last + 1, 0..last - 1),
    };
    for m in rp {
        let s1 = src_plus(bc.kind, m, last, 1);
        let s2 = src_plus(bc.kind, m, last, 2);
        for k in 0..c {
            out.plus[m * c + k] = previous.plus[s2 * c + k] + 2.0 * h * work.fp[s1 * c + k];
        }
    }
    for m in rm {
        let s1 = src_minus(bc.kind, m, last, 1);
        let s2 = src_minus(bc.kind, m, last, 2);
        for k in 0..c {
            out.minus[m * c + k] = previous.minus[s2 * c + k] + 2.0 * h * work.fm[s1 * c + k];
        }
    }
    if bc.kind == BoundaryKind::Nonreflecting {
        let mut buf = [0.0; 3];
        one_step_node(current, bc, work, startup, 1, true, &mut buf[..c]);
        out.plus[c..2 * c].copy_from_slice(&buf[..c]);
        one_step_node(current, bc, work, startup, last - 1, false, &mut buf[..c]);
        out.minus[(last - 1) * c..last * c].copy_from_slice(&buf[..c]);
    }
    apply_bc(bc, c, last, &mut out.plus, &mut out.minus);
    out.time = current.time + h;
}

/// One MoC simple-Euler step.
pub fn step_se(state: &FieldState, bc: &BoundarySpec) -> FieldState {
    let mut work = Work::new(state.plus.len());
    let mut out = state.clone();
    se_into(state, bc, &mut work, &mut out);
    out
}

/// One MoC modified-Euler (Heun) step.
pub fn step_me(state: &FieldState, bc: &BoundarySpec) -> FieldState {
    let mut work = Work::new(state.plus.len());
    let mut out = state.clone();
    me_into(state, bc, &mut work, &mut out);
    out
}

/// One step of the one-step method used to start the leapfrog scheme.
pub fn step_startup(state: &FieldState, bc: &BoundarySpec, method: Startup) -> FieldState {
    let mut work = Work::new(state.plus.len());
    let mut out = state.clone();
    one_step_into(state, bc, method, &mut work, &mut out);
    out
}

/// One MoC leapfrog step from levels `n` (`current`) and `n-1` (`previous`).
pub fn step_lf(current: &FieldState, previous: Option<&FieldState>, bc: &BoundarySpec, startup: Startup) -> Result<FieldState> {
    let previous = previous.ok_or(MocError::MissingHistory)?;
    if previous.plus.len() != current.plus.len() {
        return Err(MocError::Shape("time levels differ in size".into()));
    }
    let mut work = Work::new(current.plus.len());
    let mut out = current.clone();
    lf_into(current, previous, bc, startup, &mut work, &mut out);
    Ok(out)
}

/// Time integrator that owns its state and scratch memory.
#[derive(Debug, Clone)]
pub struct Simulation {
    scheme: SchemeId,
    bc: BoundarySpec,
    current: FieldState,
    previous: Option<FieldState>,
    next: FieldState,
    work: Work,
    steps: usize,
}

impl Simulation {
    pub fn new(initial: FieldState, scheme: SchemeId, bc: BoundarySpec) -> Result<Self> {
        initial.check()?;
        let c = initial.ncomp();
        if bc.kind == BoundaryKind::Nonreflecting && (bc.plus_left.len() != c || bc.minus_right.len() != c) {
            return Err(MocError::Shape("boundary values do not match the model".into()));
        }
        let len = initial.plus.len();
        Ok(Simulation {
            scheme,
            bc,
            next: initial.clone(),
            current: initial,
            previous: None,
            work: Work::new(len),
            steps: 0,
        })
    }

    pub fn state(&self) -> &FieldState {
        &self.current
    }

    pub fn steps(&self) -> usize {
        self.steps
    }

    pub fn time(&self) -> f64 {
        self.steps as f64 * self.current.grid.h
    }

    pub fn step(&mut self) {
        match self.scheme {
            SchemeId::Se => se_into(&self.current, &self.bc, &mut self.work, &mut self.next),
            SchemeId::Me => me_into(&self.current, &self.bc, &mut self.work, &mut self.next),
            SchemeId::Lf(startup) => match &self.previous {
                None => one_step_into(&self.current, &self.bc, startup, &mut self.work, &mut self.next),
                Some(prev) => lf_into(&self.current, prev, &self.bc, startup, &mut self.work, &mut self.next),
            },
        }
        self.steps += 1;
        if let SchemeId::Lf(_) = self.scheme {
            let prev = self.previous.get_or_insert_with(|| self.current.clone());
            std::mem::swap(prev, &mut self.current);
            // previous <- old current, current <- next
        }
        std::mem::swap(&mut self.current, &mut self.next);
        self.current.time = self.time();
    }

    pub fn advance(&mut self, n: usize) {
        for _ in 0..n {
            self.step();
        }
    }
}

/// Inputs of a single simulation.
#[derive(Debug, Clone, PartialEq)]
pub struct RunSpec {
    pub model: Model,
    pub scheme: SchemeId,
    pub bc: BoundaryKind,
    pub grid: Grid1D,
    pub noise: NoiseSpec,
    pub t_final: f64,
    pub sample_every: f64,
}

/// Numerical error `numeric − exact` sampled in time.
#[derive(Debug, Clone, PartialEq)]
pub struct ErrorSeries {
    pub times: Vec<f64>,
    pub errors: Vec<FieldState>,
    /// `sqrt(Σ_m |Δu_m|² + |Δv_m|²)` over all nodes and components.
    pub norms: Vec<f64>,
}

/// Difference `numeric − exact` as a state of the same model.
pub fn error_field(numeric: &FieldState, exact: &FieldState) -> FieldState {
    let mut e = numeric.clone();
    for (a, b) in e.plus.iter_mut().zip(&exact.plus) {
        *a -= b;
    }
    for (a, b) in e.minus.iter_mut().zip(&exact.minus) {
        *a -= b;
    }
    e
}

pub fn total_error_norm(err: &FieldState) -> f64 {
    err.plus.iter().chain(&err.minus).map(|v| v * v).sum::<f64>().sqrt()
}

/// Perturbed exact solution used as the initial condition of every run.
pub fn initial_state(model: Model, grid: Grid1D, bc: BoundaryKind, noise: NoiseSpec) -> Result<FieldState> {
    let exact = exact_state(model, grid, 0.0)?;
    let mut init = add_noise(&exact, noise, bc);
    let spec = BoundarySpec::of_kind(bc, model);
    apply_bc(&spec, init.ncomp(), grid.m, &mut init.plus, &mut init.minus);
    Ok(init)
}

/// Runs a simulation, invoking `observe(time, error)` at `t = 0` and at every
/// multiple of `sample_every` up to `t_final`.
pub fn run_with<F>(spec: &RunSpec, mut observe: F) -> Result<()>
where
    F: FnMut(f64, &FieldState) -> Result<()>,
{
    let grid = spec.grid;
    let n_final = grid
        .steps_in(spec.t_final)
        .ok_or_else(|| MocError::InvalidGrid(format!("t_final = {} is not a multiple of h", spec.t_final)))?;
    let stride = grid
        .steps_in(spec.sample_every)
        .filter(|s| *s > 0)
        .ok_or_else(|| MocError::InvalidGrid(format!("sample_every = {} is not a positive multiple of h", spec.sample_every)))?;
    let bc = BoundarySpec::of_kind(spec.bc, spec.model);
    let init = initial_state(spec.model, grid, spec.bc, spec.noise)?;
    let mut sim = Simulation::new(init, spec.scheme, bc)?;
    let mut exact = exact_state(spec.model, grid, 0.0)?;
    let time_dependent = matches!(spec.model, Model::GrossNeveu { .. });
    let guard_every = 64.min(stride);
    let mut n = 0;
    loop {
        if n % stride == 0 {
            let t = sim.time();
            if time_dependent {
                exact = exact_state(spec.model, grid, t)?;
            }
            let err = error_field(sim.state(), &exact);
            let norm = err.max_abs();
            if !(norm <= BLOWUP_THRESHOLD) {
                return Err(MocError::ErrorBlowup { time: t, norm });
            }
            observe(t, &err)?;
        } else if n % guard_every == 0 {
            let dev = sim.state().max_abs();
            if !dev.is_finite() || dev > 2.0 * BLOWUP_THRESHOLD {
                return Err(MocError::ErrorBlowup { time: sim.time(), norm: dev });
            }
        }
        if n == n_final {
            break;
        }
        sim.step();
        n += 1;
    }
    Ok(())
}

/// Runs a simulation and keeps every sampled error field.
pub fn run(spec: &RunSpec) -> Result<ErrorSeries> {
    let mut series = ErrorSeries {
        times: Vec::new(),
        errors: Vec::new(),
        norms: Vec::new(),
    };
    run_with(spec, |t, err| {
        series.times.push(t);
        series.norms.push(total_error_norm(err));
        series.errors.push(err.clone());
        Ok(())
    })?;
    Ok(series)
}
