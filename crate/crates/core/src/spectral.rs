//! Error spectra and the statistics extracted from them: windowing, DFT,
//! averaged spectral norms, staircase regression and log-log slopes.

use crate::error::{MocError, Result};
use crate::grid::Grid1D;
use crate::model::{FieldState, Model};
use num_complex::Complex64;
use rustfft::FftPlanner;
use std::f64::consts::PI;

type C = Complex64;

/// Exponent of the super-Gaussian window.
pub const WINDOW_ORDER: i32 = 8;

/// `exp[−((x − x_c)/(L/3))⁸]` centered at the domain midpoint.
pub fn window_value(grid: &Grid1D, x: f64) -> f64 {
    let u = (x - grid.midpoint()) / (grid.length / 3.0);
    (-u.powi(WINDOW_ORDER)).exp()
}

/// Multiplies every component by the window.
pub fn window_error(err: &FieldState) -> FieldState {
    let mut out = err.clone();
    let c = err.ncomp();
    for m in 0..err.grid.nodes() {
        let w = window_value(&err.grid, err.grid.x(m));
        for k in 0..c {
            out.plus[m * c + k] *= w;
            out.minus[m * c + k] *= w;
        }
    }
    out
}

/// The complex signals whose spectra are analysed, one per spectral
/// component: the four linear-perturbation components for the coupled-wave
/// models, `u` and `v` for Gross–Neveu.
pub fn spectral_components(err: &FieldState) -> Vec<Vec<C>> {
    let m = err.grid.m;
    let c = err.ncomp();
    let pick = |field: &[f64], k: usize| (0..m).map(|i| C::new(field[i * c + k], 0.0)).collect::<Vec<_>>();
    let complex = |field: &[f64]| (0..m).map(|i| C::new(field[i * c], field[i * c + 1])).collect::<Vec<_>>();
    match err.model {
        Model::CoupledWave => vec![pick(&err.plus, 0), pick(&err.plus, 2), pick(&err.minus, 0), pick(&err.minus, 2)],
        Model::Linear(_) => vec![pick(&err.plus, 0), pick(&err.plus, 1), pick(&err.minus, 0), pick(&err.minus, 1)],
        Model::GrossNeveu { .. } => vec![complex(&err.plus), complex(&err.minus)],
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    pub time: f64,
    /// Bin spacing `2π/L`; bin `j` sits at `k = jΔk`, `kh = 2πj/M`.
    pub dk: f64,
    pub h: f64,
    pub windowed: bool,
    /// Forward DFT with `1/M` normalization, one array of `M` bins per
    /// component.
    pub amplitudes: Vec<Vec<C>>,
}

impl Spectrum {
    pub fn bins(&self) -> usize {
        self.amplitudes.first().map_or(0, Vec::len)
    }

    /// Euclidean norm of the spectral vector at one bin.
    pub fn norm_at(&self, bin: usize) -> f64 {
        self.amplitudes.iter().map(|a| a[bin].norm_sqr()).sum::<f64>().sqrt()
    }
}

/// DFT of the nodes `0..M` of each spectral component.
pub fn spectrum(err: &FieldState, windowed: bool) -> Result<Spectrum> {
    let grid = err.grid;
    if grid.m < 8 {
        return Err(MocError::DegenerateGrid { m: grid.m });
    }
    let source = if windowed { window_error(err) } else { err.clone() };
    let fft = FftPlanner::new().plan_fft_forward(grid.m);
    let scale = 1.0 / grid.m as f64;
    let amplitudes = spectral_components(&source)
        .into_iter()
        .map(|mut v| {
            fft.process(&mut v);
            v.iter_mut().for_each(|z| *z *= scale);
            v
        })
        .collect();
    Ok(Spectrum { time: err.time, dk: 2.0 * PI / grid.length, h: grid.h, windowed, amplitudes })
}

/// RMS of the bin norms over `round(k_center/Δk) ± m_ave`.
pub fn averaged_norm(spec: &Spectrum, k_center: f64, m_ave: usize) -> Result<f64> {
    let center = (k_center / spec.dk).round() as i64;
    let (lo, hi) = (center - m_ave as i64, center + m_ave as i64);
    let len = spec.bins();
    if lo < 0 || hi >= len as i64 {
        return Err(MocError::StencilOverflow { lo, hi, len });
    }
    let sum: f64 = (lo..=hi).map(|b| spec.norm_at(b as usize).powi(2)).sum();
    Ok((sum / (2 * m_ave + 1) as f64).sqrt())
}

/// Wavenumber of the middle of the spectrum, `kh = π/2`.
pub fn mid_wavenumber(h: f64) -> f64 {
    0.5 * PI / h
}

fn linear_fit(xs: &[f64], ys: &[f64]) -> Option<(f64, f64)> {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    if sxx <= 0.0 {
        return None;
    }
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    Some((slope, my - slope * mx))
}

/// `|λ| = 10^{h r}` with `r` the least-squares slope of `log₁₀ norm` against
/// `t`. Samples must be at consecutive multiples of `L`.
pub fn staircase_lambda(times: &[f64], norms: &[f64], length: f64, h: f64) -> Result<f64> {
    if times.len() != norms.len() {
        return Err(MocError::Shape(format!("{} times for {} norms", times.len(), norms.len())));
    }
    if times.len() < 4 {
        return Err(MocError::InsufficientSamples { need: 4, got: times.len() });
    }
    if norms.iter().any(|n| !(*n > 0.0)) {
        return Err(MocError::NonPositiveNorm);
    }
    let tol = 1e-9 * length;
    let on_multiple = times.iter().all(|t| ((t / length).round() * length - t).abs() <= tol * t.max(1.0));
    let consecutive = times.windows(2).all(|w| (w[1] - w[0] - length).abs() <= tol * w[1].max(1.0));
    if !on_multiple || !consecutive {
        return Err(MocError::IrregularSampling);
    }
    let logs: Vec<f64> = norms.iter().map(|n| n.log10()).collect();
    let (slope, _) = linear_fit(times, &logs).ok_or(MocError::IrregularSampling)?;
    Ok(10f64.powf(h * slope))
}

/// Least-squares slope of `ln y` against `ln h` for pairs `(h, y)`.
pub fn loglog_slope(pairs: &[(f64, f64)]) -> Result<f64> {
    if pairs.len() < 3 {
        return Err(MocError::DegenerateFit(format!("{} points, need 3", pairs.len())));
    }
    if pairs.iter().any(|(h, y)| !(*h > 0.0 && *y > 0.0)) {
        return Err(MocError::DegenerateFit("non-positive value".into()));
    }
    let xs: Vec<f64> = pairs.iter().map(|p| p.0.ln()).collect();
    let ys: Vec<f64> = pairs.iter().map(|p| p.1.ln()).collect();
    linear_fit(&xs, &ys).map(|f| f.0).ok_or_else(|| MocError::DegenerateFit("repeated h".into()))
}

/// Successive ratios of the change of `ln` averaged norm in the narrow box
/// to that in the wide box, both centered at `kh = π/2`.
pub fn dip_ratio(spectra: [&Spectrum; 3], m_near: usize, m_away: usize) -> Result<(f64, f64)> {
    dip_ratio_with_reference(spectra, m_near, m_away, mid_wavenumber(spectra[0].h))
}

/// As [`dip_ratio`], with the reference box centered at `k_away`.
pub fn dip_ratio_with_reference(spectra: [&Spectrum; 3], m_near: usize, m_away: usize, k_away: f64) -> Result<(f64, f64)> {
    let k = mid_wavenumber(spectra[0].h);
    let mut near = [0.0; 3];
    let mut away = [0.0; 3];
    for (i, s) in spectra.iter().enumerate() {
        near[i] = averaged_norm(s, k, m_near)?.ln();
        away[i] = averaged_norm(s, k_away, m_away)?.ln();
    }
    Ok(((near[1] - near[0]) / (away[1] - away[0]), (near[2] - near[1]) / (away[2] - away[1])))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::make_grid;
    use proptest::prelude::*;

    fn linear_state(grid: Grid1D, f: impl Fn(usize, usize) -> f64) -> FieldState {
        let mut s = FieldState::zeros(Model::linearized(), grid);
        for m in 0..grid.nodes() {
            for c in 0..2 {
                s.plus[2 * m + c] = f(m, c);
                s.minus[2 * m + c] = f(m, c + 2);
            }
        }
        s
    }

    #[test]
    fn window_shape() {
        let grid = make_grid(30.0, 0.1, false).unwrap();
        assert_eq!(window_value(&grid, 15.0), 1.0);
        let edge = window_value(&grid, 0.0);
        assert!((edge - (-(1.5f64).powi(8)).exp()).abs() < 1e-25);
        assert!(edge < 8e-12 && edge > 7e-12);
        let ones = linear_state(grid, |_, _| 1.0);
        let w = window_error(&ones);
        for m in 0..=grid.m {
            assert!((w.plus[2 * m] - w.plus[2 * (grid.m - m)]).abs() < 1e-14);
        }
        assert!(w.plus[0] <= 1e-11 * w.max_abs());
    }

    #[test]
    fn harmonic_occupies_one_bin() {
        let grid = make_grid(12.8, 0.1, false).unwrap();
        let m = grid.m;
        let s = linear_state(grid, |i, c| if c == 0 { (2.0 * PI * 5.0 * i as f64 / m as f64).cos() } else { 0.0 });
        let spec = spectrum(&s, false).unwrap();
        for b in 0..m {
            let expected = if b == 5 || b == m - 5 { 0.5 } else { 0.0 };
            assert!((spec.norm_at(b) - expected).abs() < 1e-12, "bin {b}");
        }
    }

    proptest! {
        #[test]
        fn parseval(m in 8usize..200, seed in 0u64..1000) {
            let grid = make_grid(m as f64 * 0.05, 0.05, false).unwrap();
            let s = linear_state(grid, |i, c| ((i * 31 + c * 7) as f64 + seed as f64).sin());
            let spec = spectrum(&s, false).unwrap();
            let field: f64 = spectral_components(&s).iter().flatten().map(|z| z.norm_sqr()).sum::<f64>() / m as f64;
            let bins: f64 = (0..m).map(|b| spec.norm_at(b).powi(2)).sum();
            prop_assert!((field - bins).abs() <= 1e-12 * field.max(1.0));
        }

        #[test]
        fn staircase_recovers_planted_rate(r in -0.5f64..0.5, c in 0.1f64..10.0) {
            let length = 25.0;
            let times: Vec<f64> = (1..=6).map(|j| j as f64 * length).collect();
            let norms: Vec<f64> = times.iter().map(|t| c * 10f64.powf(r * t / length)).collect();
            let lam = staircase_lambda(&times, &norms, length, 0.01).unwrap();
            let expected = 10f64.powf(0.01 * r / length);
            prop_assert!((lam / expected - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn averaged_norm_of_flat_spectrum() {
        let spec = Spectrum { time: 0.0, dk: 1.0, h: 0.1, windowed: false, amplitudes: vec![vec![C::new(0.6, 0.0); 64], vec![C::new(0.0, 0.8); 64]] };
        for m_ave in [0, 3, 10] {
            assert!((averaged_norm(&spec, 32.0, m_ave).unwrap() - 1.0).abs() < 1e-15);
        }
        assert!(matches!(averaged_norm(&spec, 60.0, 10), Err(MocError::StencilOverflow { .. })));
    }

    #[test]
    fn staircase_errors_and_constant_norms() {
        let t = [25.0, 50.0, 75.0, 100.0];
        assert_eq!(staircase_lambda(&t, &[2.0; 4], 25.0, 0.05).unwrap(), 1.0);
        assert!(matches!(staircase_lambda(&t[..3], &[1.0; 3], 25.0, 0.05), Err(MocError::InsufficientSamples { .. })));
        assert!(matches!(staircase_lambda(&t, &[1.0, 0.0, 1.0, 1.0], 25.0, 0.05), Err(MocError::NonPositiveNorm)));
        assert!(matches!(staircase_lambda(&[25.0, 50.0, 80.0, 100.0], &[1.0; 4], 25.0, 0.05), Err(MocError::IrregularSampling)));
    }

    #[test]
    fn loglog_slopes() {
        for power in [2.0, 4.0] {
            let pairs: Vec<(f64, f64)> = [0.01, 0.005, 0.0025].iter().map(|h: &f64| (*h, 3.0 * h.powf(power))).collect();
            assert!((loglog_slope(&pairs).unwrap() - power).abs() < 1e-8);
        }
        assert!(loglog_slope(&[(0.1, 1.0), (0.1, 2.0), (0.1, 3.0)]).is_err());
        assert!(loglog_slope(&[(0.1, 1.0), (0.2, 2.0)]).is_err());
    }

    #[test]
    fn dip_ratio_of_planted_rates() {
        // narrow box decays at twice the rate of the rest
        let make = |t: f64| {
            let m = 400;
            let amp = (0..m)
                .map(|b| {
                    let rate = if (b as i64 - 100).abs() <= 40 { 2.0 } else { 1.0 };
                    C::new((-rate * t / 25.0).exp(), 0.0)
                })
                .collect();
            Spectrum { time: t, dk: 2.0 * PI / 20.0, h: 0.05, windowed: true, amplitudes: vec![amp] }
        };
        let (a, b, c) = (make(25.0), make(50.0), make(75.0));
        let (r1, r2) = dip_ratio([&a, &b, &c], 10, 40).unwrap();
        assert!((r1 - 1.0).abs() < 1e-12 && (r2 - 1.0).abs() < 1e-12);
        let (r1, _) = dip_ratio([&a, &b, &c], 10, 100).unwrap();
        assert!(r1 > 1.0);
    }
}
