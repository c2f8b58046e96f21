//! Measurement protocols behind the scenarios. Each turns a validated
//! section into metrics and data files under the section's directory.

use super::config::{Protocol, ScenarioConfig, Trend};
use super::output::{derive_seed, label, write_csv};
use super::{ExperimentError, Metric};
use crate::error::{MocError, Result as MocResult};
use crate::grid::{make_grid, Grid1D};
use crate::model::{BoundaryKind, Model, NoiseSpec};
use crate::schemes::{run_with, RunSpec, SchemeId, Startup};
use crate::spectral::{
    averaged_norm, dip_ratio_with_reference, loglog_slope, mid_wavenumber, spectrum, staircase_lambda, Spectrum,
};
use crate::theory::{lf_alpha_scan, se_lambda_predictions, von_neumann_factors};
use std::collections::BTreeSet;
use std::f64::consts::PI;
use std::path::Path;

type Outcome = Result<Vec<Metric>, ExperimentError>;

/// Averaging half-width used when a section gives none, capped at `M/8`.
const DEFAULT_M_AVE: usize = 20;

pub(crate) fn execute(cfg: &ScenarioConfig, dir: &Path) -> Outcome {
    match cfg.protocol {
        Protocol::Spectra => spectra(cfg, dir),
        Protocol::Staircase => staircase(cfg, dir),
        Protocol::MeSlope => me_slope(cfg, dir),
        Protocol::Dip => dip(cfg, dir),
        Protocol::Growth => growth(cfg, dir),
        Protocol::Peak => peak(cfg, dir),
        Protocol::LfScan => lf_scan(cfg, dir),
        Protocol::LfGrowth => lf_growth(cfg, dir),
        Protocol::VnCurves => vn_curves(cfg, dir),
    }
}

fn grid_for(cfg: &ScenarioConfig, length: f64, h: f64) -> MocResult<Grid1D> {
    make_grid(length, h, matches!(cfg.model, Model::GrossNeveu { .. }))
}

/// Box half-widths: explicit `m_ave`, else fractions of `M`, else the default.
fn boxes(cfg: &ScenarioConfig, m: usize) -> Vec<usize> {
    if !cfg.m_ave.is_empty() {
        cfg.m_ave.clone()
    } else if !cfg.m_ave_fraction.is_empty() {
        cfg.m_ave_fraction.iter().map(|f| (f * m as f64).floor() as usize).collect()
    } else {
        vec![DEFAULT_M_AVE.min(m / 8)]
    }
}

fn period_times(length: f64, periods: usize) -> Vec<f64> {
    (1..=periods).map(|k| k as f64 * length).collect()
}

struct Observation {
    times: Vec<f64>,
    /// One series per box.
    norms: Vec<Vec<f64>>,
    spectra: Vec<Spectrum>,
}

struct Probe<'a> {
    model: Model,
    scheme: SchemeId,
    bc: BoundaryKind,
    grid: Grid1D,
    noise: NoiseSpec,
    windowed: bool,
    /// `(k_center, m_ave)` of every averaged norm to record.
    boxes: &'a [(f64, usize)],
    keep_spectra: bool,
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Runs one simulation and records averaged spectral norms at `times`.
fn observe(p: &Probe, times: &[f64]) -> MocResult<Observation> {
    let grid = p.grid;
    let steps: Vec<usize> = times
        .iter()
        .map(|t| grid.steps_in(*t).ok_or_else(|| MocError::InvalidGrid(format!("t = {t} is not a multiple of h"))))
        .collect::<MocResult<_>>()?;
    let stride = steps.iter().fold(0, |g, s| gcd(g, *s)).max(1);
    let wanted: BTreeSet<usize> = steps.iter().copied().collect();
    let last = *steps.iter().max().unwrap_or(&0);
    let spec = RunSpec {
        model: p.model,
        scheme: p.scheme,
        bc: p.bc,
        grid,
        noise: p.noise,
        t_final: last as f64 * grid.h,
        sample_every: stride as f64 * grid.h,
    };
    let mut obs = Observation { times: Vec::new(), norms: vec![Vec::new(); p.boxes.len()], spectra: Vec::new() };
    run_with(&spec, |t, err| {
        let n = (t / grid.h).round() as usize;
        if !wanted.contains(&n) {
            return Ok(());
        }
        let s = spectrum(err, p.windowed)?;
        obs.times.push(t);
        for (series, (k, m)) in obs.norms.iter_mut().zip(p.boxes) {
            series.push(averaged_norm(&s, *k, *m)?);
        }
        if p.keep_spectra {
            obs.spectra.push(s);
        }
        Ok(())
    })?;
    Ok(obs)
}

fn component_names(n: usize) -> Vec<&'static str> {
    match n {
        2 => vec!["u", "v"],
        _ => vec!["s1_plus", "s3_plus", "s1_minus", "s3_minus"],
    }
}

fn write_spectrum(dir: &Path, s: &Spectrum) -> Result<(), ExperimentError> {
    let mut header = vec!["k".to_string(), "kh".to_string()];
    header.extend(component_names(s.amplitudes.len()).iter().map(|c| format!("abs_{c}")));
    let rows: Vec<Vec<f64>> = (0..s.bins())
        .map(|j| {
            let k = j as f64 * s.dk;
            let mut row = vec![k, k * s.h];
            row.extend(s.amplitudes.iter().map(|a| a[j].norm()));
            row
        })
        .collect();
    write_csv(&dir.join(format!("spectrum_{}.csv", label(s.time))), &header, &rows)
}

fn write_series(dir: &Path, obs: &Observation, names: &[String]) -> Result<(), ExperimentError> {
    let mut header = vec!["t".to_string()];
    header.extend(names.iter().cloned());
    let rows: Vec<Vec<f64>> = (0..obs.times.len())
        .map(|i| std::iter::once(obs.times[i]).chain(obs.norms.iter().map(|s| s[i])).collect())
        .collect();
    write_csv(&dir.join("series.csv"), &header, &rows)
}

fn mave_names(ms: &[usize]) -> Vec<String> {
    ms.iter().map(|m| format!("norm_mave{m}")).collect()
}

/// Smallest successive ratio (increasing) or largest (non-increasing).
fn trend_metric(name: &str, norms: &[f64], expect: Trend) -> Metric {
    let ratios = norms.windows(2).map(|w| w[1] / w[0]);
    match expect {
        Trend::Increasing => {
            let v = ratios.fold(f64::INFINITY, f64::min);
            Metric::check_strict_above(name, v, 1.0)
        }
        Trend::Nonincreasing => {
            let v = ratios.fold(f64::NEG_INFINITY, f64::max);
            Metric::check(name, v, None, Some(1.0))
        }
    }
}

fn simulation_probe<'a>(cfg: &ScenarioConfig, grid: Grid1D, seed: u64, boxes: &'a [(f64, usize)], keep: bool) -> Probe<'a> {
    Probe {
        model: cfg.model,
        scheme: cfg.scheme,
        bc: cfg.bc,
        grid,
        noise: NoiseSpec { amplitude: cfg.noise, seed },
        windowed: cfg.windowed,
        boxes,
        keep_spectra: keep,
    }
}

fn spectra(cfg: &ScenarioConfig, dir: &Path) -> Outcome {
    let (l, h) = cfg.cases()[0];
    let grid = grid_for(cfg, l, h)?;
    let m = boxes(cfg, grid.m)[0];
    // the second box sits on the kh = π end of the spectrum
    let bx = [(mid_wavenumber(h), m), (PI / h, m)];
    let times = if cfg.times.is_empty() {
        std::iter::once(0.0).chain(period_times(l, cfg.periods)).collect()
    } else {
        cfg.times.clone()
    };
    let obs = observe(&simulation_probe(cfg, grid, derive_seed(cfg.seed, &cfg.id), &bx, true), &times)?;
    for s in &obs.spectra {
        write_spectrum(dir, s)?;
    }
    write_series(dir, &obs, &[format!("mid_mave{m}"), format!("end_mave{m}")])?;
    let mut metrics = Vec::new();
    for (i, t) in obs.times.iter().enumerate() {
        metrics.push(Metric::info(&format!("mid_norm_t{}", label(*t)), obs.norms[0][i]));
        metrics.push(Metric::info(&format!("end_norm_t{}", label(*t)), obs.norms[1][i]));
    }
    let start = obs.times.iter().position(|t| *t > 0.0).unwrap_or(0);
    if let Some(expect) = cfg.checks.expect {
        metrics.push(trend_metric("mid_norm_trend", &obs.norms[0][start..], expect));
    }
    if let Some(expect) = cfg.checks.expect_ends {
        metrics.push(trend_metric("end_norm_trend", &obs.norms[1][start..], expect));
    }
    Ok(metrics)
}

/// `|λ|^{2M}` from the staircase of the first box over `t = L, …, periods·L`.
fn lambda_2m(obs: &Observation, series: usize, grid: Grid1D) -> MocResult<f64> {
    let lam = staircase_lambda(&obs.times, &obs.norms[series], grid.length, grid.h)?;
    Ok(lam.powf(2.0 * grid.m as f64))
}

fn staircase(cfg: &ScenarioConfig, dir: &Path) -> Outcome {
    let mut metrics = Vec::new();
    let mut pairs = Vec::new();
    for (i, (l, h)) in cfg.cases().into_iter().enumerate() {
        let grid = grid_for(cfg, l, h)?;
        let ms = boxes(cfg, grid.m);
        let bx = [(mid_wavenumber(h), ms[0])];
        let seed = derive_seed(cfg.seed, &format!("{}/case{i}", cfg.id));
        let obs = observe(&simulation_probe(cfg, grid, seed, &bx, false), &period_times(l, cfg.periods))?;
        write_series(&dir.join(format!("L{}_h{}", label(l), label(h))), &obs, &mave_names(&ms[..1]))?;
        let measured = lambda_2m(&obs, 0, grid)?;
        let tag = format!("L{}_h{}", label(l), label(h));
        metrics.push(Metric::info(&format!("lambda2m_{tag}"), measured));
        if let Some(f) = cfg.checks.ratio_factor {
            let predicted = se_lambda_predictions(l, h).magnitude_2m;
            metrics.push(Metric::check(&format!("ratio_{tag}"), measured / predicted, Some(1.0 / f), Some(f)));
        }
        pairs.push((h, measured));
    }
    // a slope only makes sense along an h ladder at fixed L
    if cfg.lengths.len() == 1 && pairs.len() >= 3 {
        let slope = loglog_slope(&pairs)?;
        metrics.push(match cfg.checks.slope_range {
            Some((lo, hi)) => Metric::check("slope", slope, Some(lo), Some(hi)),
            None => Metric::info("slope", slope),
        });
    }
    Ok(metrics)
}

fn me_slope(cfg: &ScenarioConfig, dir: &Path) -> Outcome {
    let l = cfg.lengths[0];
    let mut per_fraction: Vec<Vec<(f64, f64)>> = vec![Vec::new(); cfg.m_ave_fraction.len()];
    let mut metrics = Vec::new();
    for &h in &cfg.steps {
        let grid = grid_for(cfg, l, h)?;
        let ms = boxes(cfg, grid.m);
        let bx: Vec<(f64, usize)> = ms.iter().map(|m| (mid_wavenumber(h), *m)).collect();
        let mut sums = vec![0.0; ms.len()];
        let mut rows = Vec::new();
        for r in 0..cfg.realizations {
            let seed = derive_seed(cfg.seed, &format!("{}/h{}/r{r}", cfg.id, label(h)));
            let obs = observe(&simulation_probe(cfg, grid, seed, &bx, false), &period_times(l, cfg.periods))?;
            for (j, sum) in sums.iter_mut().enumerate() {
                *sum += lambda_2m(&obs, j, grid)?;
            }
            for (i, t) in obs.times.iter().enumerate() {
                rows.push([r as f64, *t].into_iter().chain(obs.norms.iter().map(|s| s[i])).collect());
            }
        }
        let mut header = vec!["realization".to_string(), "t".to_string()];
        header.extend(mave_names(&ms));
        write_csv(&dir.join(format!("L{}_h{}", label(l), label(h))).join("series.csv"), &header, &rows)?;
        for (j, sum) in sums.iter().enumerate() {
            let mean = sum / cfg.realizations as f64;
            metrics.push(Metric::info(&format!("lambda2m_frac{}_h{}", cfg.m_ave_fraction[j], label(h)), mean));
            per_fraction[j].push((h, mean));
        }
    }
    for (j, pairs) in per_fraction.iter().enumerate() {
        let slope = loglog_slope(pairs)?;
        let name = format!("slope_frac{}", cfg.m_ave_fraction[j]);
        metrics.push(match (cfg.checks.slope_target.get(j), cfg.checks.slope_tol) {
            (Some(t), Some(tol)) => Metric::check(&name, slope, Some(t - tol), Some(t + tol)),
            _ => Metric::info(&name, slope),
        });
    }
    Ok(metrics)
}

fn dip(cfg: &ScenarioConfig, dir: &Path) -> Outcome {
    let (l, h) = cfg.cases()[0];
    let grid = grid_for(cfg, l, h)?;
    let ms = boxes(cfg, grid.m);
    let (near, away) = (ms[0], ms[1]);
    let times = if cfg.times.is_empty() { period_times(l, 3) } else { cfg.times.clone() };
    let k_away = cfg.away_kh / h;
    let bx = [(mid_wavenumber(h), near), (k_away, away)];
    let all: Vec<f64> = std::iter::once(0.0).chain(times.iter().copied()).collect();
    let obs = observe(&simulation_probe(cfg, grid, derive_seed(cfg.seed, &cfg.id), &bx, true), &all)?;
    for s in &obs.spectra {
        write_spectrum(dir, s)?;
    }
    write_series(dir, &obs, &[format!("near_mave{near}"), format!("away_mave{away}")])?;
    let (r12, r23) = dip_ratio_with_reference([&obs.spectra[1], &obs.spectra[2], &obs.spectra[3]], near, away, k_away)?;
    let (lo, hi) = match cfg.checks.ratio_range {
        Some((lo, hi)) => (Some(lo), Some(hi)),
        None => (None, None),
    };
    Ok(vec![Metric::check("dip_ratio_12", r12, lo, hi), Metric::check("dip_ratio_23", r23, lo, hi)])
}

fn growth(cfg: &ScenarioConfig, dir: &Path) -> Outcome {
    let (l, h) = cfg.cases()[0];
    let grid = grid_for(cfg, l, h)?;
    let ms = boxes(cfg, grid.m);
    let bx = [(mid_wavenumber(h), ms[0])];
    let times = if cfg.times.is_empty() { period_times(l, cfg.periods) } else { cfg.times.clone() };
    let all: Vec<f64> = std::iter::once(0.0).chain(times.iter().copied()).collect();
    let obs = observe(&simulation_probe(cfg, grid, derive_seed(cfg.seed, &cfg.id), &bx, true), &all)?;
    for s in &obs.spectra {
        write_spectrum(dir, s)?;
    }
    write_series(dir, &obs, &mave_names(&ms[..1]))?;
    let norms = &obs.norms[0][1..];
    let mut metrics: Vec<Metric> =
        times.iter().zip(norms).map(|(t, n)| Metric::info(&format!("mid_norm_t{}", label(*t)), *n)).collect();
    if let Some((lo, hi)) = cfg.checks.growth_range {
        let span = (times[times.len() - 1] - times[0]) / l;
        let factor = (norms[norms.len() - 1] / norms[0]).powf(1.0 / span);
        metrics.push(Metric::check("growth_per_period", factor, Some(lo), Some(hi)));
    }
    if let Some(expect) = cfg.checks.expect {
        metrics.push(trend_metric("mid_norm_trend", norms, expect));
    }
    Ok(metrics)
}

/// Excluded margin around `kh = 0` and `kh = π` when locating the peak.
const PEAK_MARGIN: f64 = 0.2;

fn peak(cfg: &ScenarioConfig, dir: &Path) -> Outcome {
    let (l, h) = cfg.cases()[0];
    let grid = grid_for(cfg, l, h)?;
    let ms = boxes(cfg, grid.m);
    let bx = [(mid_wavenumber(h), ms[0])];
    let t_final = cfg.t_final.expect("validated");
    let obs = observe(&simulation_probe(cfg, grid, derive_seed(cfg.seed, &cfg.id), &bx, true), &[0.0, t_final])?;
    for s in &obs.spectra {
        write_spectrum(dir, s)?;
    }
    write_series(dir, &obs, &mave_names(&ms[..1]))?;
    let last = &obs.spectra[1];
    let kh_of = |j: usize| j as f64 * last.dk * h;
    let peak_bin = (0..=last.bins() / 2)
        .filter(|j| (PEAK_MARGIN..=PI - PEAK_MARGIN).contains(&kh_of(*j)))
        .max_by(|a, b| last.norm_at(*a).total_cmp(&last.norm_at(*b)))
        .ok_or(MocError::DegenerateGrid { m: grid.m })?;
    let offset = (kh_of(peak_bin) - 0.5 * PI).abs();
    let gain = obs.norms[0][1] / obs.norms[0][0];
    Ok(vec![
        Metric::info("peak_kh", kh_of(peak_bin)),
        match cfg.checks.peak_tol {
            Some(tol) => Metric::check("peak_offset_from_half_pi", offset, None, Some(tol)),
            None => Metric::info("peak_offset_from_half_pi", offset),
        },
        match cfg.checks.min_growth {
            Some(g) => Metric::check("mid_growth", gain, Some(g), None),
            None => Metric::info("mid_growth", gain),
        },
    ])
}

fn lf_scan(cfg: &ScenarioConfig, dir: &Path) -> Outcome {
    let (l, h) = cfg.cases()[0];
    let scan = lf_alpha_scan(l, h, cfg.alpha_range, cfg.scan_points)?;
    let rows: Vec<Vec<f64>> = scan.alphas.iter().zip(&scan.normalized_det).map(|(a, d)| vec![*a, *d]).collect();
    write_csv(&dir.join("detphi_scan.csv"), &["alpha".into(), "abs_det_phi_plus".into()], &rows)?;
    let roots = &scan.roots_nonreflecting;
    let (window_lo, window_hi) = (2f64.sqrt(), 1.5);
    let mut metrics = vec![Metric::check("root_count", roots.len() as f64, Some(1.0), None)];
    let Some(&top) = roots.last() else {
        return Ok(metrics);
    };
    metrics.push(Metric::check("root_min", roots[0], Some(window_lo), Some(window_hi)));
    metrics.push(Metric::check("root_max", top, Some(window_lo), Some(window_hi)));
    let periodic = scan.alphas_periodic.first().copied().unwrap_or(f64::NAN);
    metrics.push(Metric::info("periodic_alpha_max", periodic));
    let gap = (top - periodic).abs() / periodic;
    metrics.push(match cfg.checks.gap_max {
        Some(g) => Metric::check("root_gap_vs_periodic", gap, None, Some(g)),
        None => Metric::info("root_gap_vs_periodic", gap),
    });
    Ok(metrics)
}

/// Least-squares slope of `ln norm` against `t` over the second half.
fn late_exponent(obs: &Observation) -> MocResult<f64> {
    let t_end = *obs.times.last().unwrap_or(&0.0);
    let pts: Vec<(f64, f64)> = obs
        .times
        .iter()
        .zip(&obs.norms[0])
        .filter(|(t, _)| **t >= 0.5 * t_end)
        .map(|(t, n)| (*t, n.ln()))
        .collect();
    if pts.len() < 3 || pts.iter().any(|p| !p.1.is_finite()) {
        return Err(MocError::DegenerateFit("too few usable samples for the growth exponent".into()));
    }
    let n = pts.len() as f64;
    let (mt, my) = pts.iter().fold((0.0, 0.0), |a, p| (a.0 + p.0 / n, a.1 + p.1 / n));
    let sxx: f64 = pts.iter().map(|p| (p.0 - mt).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mt) * (p.1 - my)).sum();
    Ok(sxy / sxx)
}

fn lf_growth(cfg: &ScenarioConfig, dir: &Path) -> Outcome {
    let (l, h) = cfg.cases()[0];
    let grid = grid_for(cfg, l, h)?;
    let root = lf_alpha_scan(l, h, cfg.alpha_range, cfg.scan_points)?
        .roots_nonreflecting
        .last()
        .copied()
        .ok_or_else(|| MocError::NoConvergence("the determinant scan found no root".into()))?;
    let t_final = cfg.t_final.expect("validated");
    let every = cfg.sample_every.unwrap_or(1.0);
    let times: Vec<f64> = (0..).map(|k| k as f64 * every).take_while(|t| *t <= t_final * (1.0 + 1e-12)).collect();
    let ms = boxes(cfg, grid.m);
    let bx = [(mid_wavenumber(h), ms[0])];
    let seed = derive_seed(cfg.seed, &cfg.id);
    let mut metrics = vec![Metric::info("scan_root_max", root)];
    for bc in [BoundaryKind::Periodic, BoundaryKind::Nonreflecting] {
        let bc_name = match bc {
            BoundaryKind::Periodic => "periodic",
            BoundaryKind::Nonreflecting => "nonreflecting",
        };
        let mut alphas = Vec::new();
        for startup in [Startup::Se, Startup::Me, Startup::Rk4] {
            let probe = Probe {
                model: cfg.model,
                scheme: SchemeId::Lf(startup),
                bc,
                grid,
                noise: NoiseSpec { amplitude: cfg.noise, seed },
                windowed: cfg.windowed,
                boxes: &bx,
                keep_spectra: false,
            };
            let obs = observe(&probe, &times)?;
            let st = format!("{startup:?}").to_lowercase();
            write_series(&dir.join(format!("{bc_name}_{st}")), &obs, &mave_names(&ms[..1]))?;
            let alpha = late_exponent(&obs)?;
            metrics.push(Metric::info(&format!("alpha_{bc_name}_{st}"), alpha));
            alphas.push(alpha);
        }
        let reference = alphas[1];
        let rel = (reference - root).abs() / root;
        metrics.push(match cfg.checks.alpha_tol {
            Some(t) => Metric::check(&format!("alpha_{bc_name}_vs_root"), rel, None, Some(t)),
            None => Metric::info(&format!("alpha_{bc_name}_vs_root"), rel),
        });
        let (lo, hi) = alphas.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |a, v| (a.0.min(*v), a.1.max(*v)));
        let spread = (hi - lo) / reference.abs();
        metrics.push(match cfg.checks.startup_tol {
            Some(t) => Metric::check(&format!("startup_spread_{bc_name}"), spread, None, Some(t)),
            None => Metric::info(&format!("startup_spread_{bc_name}"), spread),
        });
    }
    Ok(metrics)
}

/// Largest amplification factor modulus on `n` evenly spaced `kh ∈ [0, π]`.
pub fn vn_table(scheme: SchemeId, h: f64, n: usize) -> MocResult<Vec<(f64, f64)>> {
    (0..n)
        .map(|i| {
            let kh = PI * i as f64 / (n - 1) as f64;
            let f = von_neumann_factors(scheme, kh, h)?;
            Ok((kh, f.iter().map(|z| z.norm()).fold(0.0, f64::max)))
        })
        .collect()
}

fn vn_curves(cfg: &ScenarioConfig, dir: &Path) -> Outcome {
    let h = cfg.steps[0];
    let n = cfg.scan_points.max(3);
    let se = vn_table(SchemeId::Se, h, n)?;
    let me = vn_table(SchemeId::Me, h, n)?;
    let lf = vn_table(SchemeId::Lf(Startup::Me), h, n)?;
    let rows: Vec<Vec<f64>> = (0..n).map(|i| vec![se[i].0, se[i].1, me[i].1, lf[i].1]).collect();
    let header = ["kh", "max_abs_se", "max_abs_me", "max_abs_lf"].map(String::from);
    write_csv(&dir.join("vn.csv"), &header, &rows)?;
    let band = |target: f64, tol: Option<f64>| match tol {
        Some(t) => (Some(target * (1.0 - t)), Some(target * (1.0 + t))),
        None => (None, None),
    };
    let (se_lo, se_hi) = band(3.0, cfg.checks.se_tol);
    let (lf_lo, lf_hi) = band(1.5, cfg.checks.lf_tol);
    let excess2 = |v: f64| (v - 1.0) / (h * h);
    let (lf_kh, lf_max) = lf.iter().fold((0.0, f64::NEG_INFINITY), |a, p| if p.1 > a.1 { *p } else { a });
    let me_peak = me.iter().map(|p| p.1).fold(f64::NEG_INFINITY, f64::max);
    Ok(vec![
        Metric::check("se_excess_kh0", excess2(se[0].1), se_lo, se_hi),
        Metric::check("se_excess_khpi", excess2(se[n - 1].1), se_lo, se_hi),
        Metric::check("lf_peak_excess", (lf_max - 1.0) / h, lf_lo, lf_hi),
        Metric::check("lf_peak_offset_from_half_pi", (lf_kh - 0.5 * PI).abs(), None, Some(0.1)),
        Metric::info("me_peak_excess", me_peak - 1.0),
    ])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::experiment::config::parse_config;

    #[test]
    fn observe_records_requested_times_only() {
        let grid = make_grid(8.0, 0.1, false).unwrap();
        let bx = [(mid_wavenumber(0.1), 2)];
        let p = Probe {
            model: Model::CoupledWave,
            scheme: SchemeId::Se,
            bc: BoundaryKind::Nonreflecting,
            grid,
            noise: NoiseSpec { amplitude: 1e-8, seed: 3 },
            windowed: true,
            boxes: &bx,
            keep_spectra: true,
        };
        let obs = observe(&p, &[0.0, 1.2, 2.0]).unwrap();
        assert_eq!(obs.times.len(), 3);
        assert!((obs.times[1] - 1.2).abs() < 1e-12);
        assert_eq!(obs.spectra.len(), 3);
    }

    #[test]
    fn trend_checks() {
        assert!(trend_metric("t", &[1.0, 2.0, 3.0], Trend::Increasing).pass);
        assert!(!trend_metric("t", &[1.0, 1.0], Trend::Increasing).pass);
        assert!(trend_metric("t", &[3.0, 3.0, 1.0], Trend::Nonincreasing).pass);
        assert!(!trend_metric("t", &[1.0, 1.5], Trend::Nonincreasing).pass);
    }

    #[test]
    fn small_growth_section_runs() {
        let cfg = &parse_config("protocol = growth\nL = 4\nh = 0.05\nm_ave = 3\nperiods = 2\nexpect = nonincreasing").unwrap()[0];
        let dir = tempfile::tempdir().unwrap();
        let m = execute(cfg, dir.path()).unwrap();
        assert!(m.iter().any(|m| m.name == "mid_norm_trend"));
        assert!(dir.path().join("spectrum_8.csv").exists());
        assert!(dir.path().join("series.csv").exists());
    }
}
