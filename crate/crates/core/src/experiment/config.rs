//! Scenario configuration files: flat `key = value` lines grouped under
//! `[section]` headers, one section per scenario (or scenario part).

use crate::grid::make_grid;
use crate::model::{BoundaryKind, Model};
use crate::schemes::{SchemeId, Startup};
use serde::Serialize;
use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt;
use thiserror::Error;

/// Section name used when keys appear before any header.
pub const DEFAULT_SECTION: &str = "custom";

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConfigIssue {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("line {line}: `{key}`: {message}")]
    Validation { line: usize, key: String, message: String },
}

/// Every problem found in a configuration, in line order.
#[derive(Debug, Clone, PartialEq, Error)]
pub struct ConfigErrors(pub Vec<ConfigIssue>);

impl fmt::Display for ConfigErrors {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} configuration error(s)", self.0.len())?;
        for issue in &self.0 {
            write!(f, "\n  {issue}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Protocol {
    /// Sampled spectra and mid-spectrum norms of one run.
    Spectra,
    /// `|λ|^{2M}` from staircase regression, against the SE closed form
    /// and as a log-log slope over `h`.
    Staircase,
    /// Realization-averaged `|λ|^{2M}` slopes for several box widths.
    MeSlope,
    /// Decay of the `kh = π/2` dip relative to a reference box.
    Dip,
    /// Mid-spectrum norm at a list of times: trend and per-period factor.
    Growth,
    /// Location of the spectral maximum and growth at `kh = π/2`.
    Peak,
    /// Leapfrog boundary-determinant scan.
    LfScan,
    /// Leapfrog growth exponents under both boundary kinds and all startups.
    LfGrowth,
    /// Von Neumann amplification curves of the three schemes.
    VnCurves,
}

impl Protocol {
    const ALL: [(Protocol, &'static str); 9] = [
        (Protocol::Spectra, "spectra"),
        (Protocol::Staircase, "staircase"),
        (Protocol::MeSlope, "me-slope"),
        (Protocol::Dip, "dip"),
        (Protocol::Growth, "growth"),
        (Protocol::Peak, "peak"),
        (Protocol::LfScan, "lf-scan"),
        (Protocol::LfGrowth, "lf-growth"),
        (Protocol::VnCurves, "vn-curves"),
    ];

    pub fn name(self) -> &'static str {
        Self::ALL.iter().find(|(p, _)| *p == self).map(|(_, n)| *n).unwrap_or("?")
    }

    fn parse(s: &str) -> Option<Self> {
        Self::ALL.iter().find(|(_, n)| *n == s).map(|(p, _)| *p)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Trend {
    Increasing,
    Nonincreasing,
}

/// Pass bands of the metric checks; `None` leaves the metric informational.
#[derive(Debug, Clone, PartialEq, Serialize, Default)]
pub struct Checks {
    pub ratio_factor: Option<f64>,
    pub slope_range: Option<(f64, f64)>,
    pub slope_target: Vec<f64>,
    pub slope_tol: Option<f64>,
    pub ratio_range: Option<(f64, f64)>,
    pub growth_range: Option<(f64, f64)>,
    pub expect: Option<Trend>,
    /// Trend of the box at `kh = π` (spectra protocol).
    pub expect_ends: Option<Trend>,
    pub peak_tol: Option<f64>,
    pub min_growth: Option<f64>,
    pub gap_max: Option<f64>,
    pub alpha_tol: Option<f64>,
    pub startup_tol: Option<f64>,
    pub se_tol: Option<f64>,
    pub lf_tol: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScenarioConfig {
    /// Section name: a scenario id, optionally followed by `/part`.
    pub id: String,
    pub protocol: Protocol,
    pub model: Model,
    pub scheme: SchemeId,
    pub bc: BoundaryKind,
    /// Domain lengths; zipped with `steps`, a single entry broadcasts.
    pub lengths: Vec<f64>,
    pub steps: Vec<f64>,
    /// Sample times; empty means `L, 2L, …, periods·L`.
    pub times: Vec<f64>,
    pub periods: usize,
    pub t_final: Option<f64>,
    pub sample_every: Option<f64>,
    pub noise: f64,
    /// Master seed; per-run seeds are derived from it and the id.
    pub seed: u64,
    pub realizations: usize,
    pub m_ave: Vec<usize>,
    pub m_ave_fraction: Vec<f64>,
    pub windowed: bool,
    /// Center of the reference box of the dip protocol.
    pub away_kh: f64,
    pub alpha_range: (f64, f64),
    pub scan_points: usize,
    pub startup: Startup,
    pub checks: Checks,
}

impl ScenarioConfig {
    /// Scenario id without the part suffix.
    pub fn scenario(&self) -> &str {
        self.id.split('/').next().unwrap_or(&self.id)
    }

    /// `(L, h)` pairs with single entries broadcast.
    pub fn cases(&self) -> Vec<(f64, f64)> {
        let n = self.lengths.len().max(self.steps.len());
        (0..n)
            .map(|i| {
                let l = self.lengths[if self.lengths.len() == 1 { 0 } else { i }];
                let h = self.steps[if self.steps.len() == 1 { 0 } else { i }];
                (l, h)
            })
            .collect()
    }

    fn defaults(id: &str) -> Self {
        ScenarioConfig {
            id: id.to_string(),
            protocol: Protocol::Spectra,
            model: Model::CoupledWave,
            scheme: SchemeId::Se,
            bc: BoundaryKind::Nonreflecting,
            lengths: Vec::new(),
            steps: Vec::new(),
            times: Vec::new(),
            periods: 4,
            t_final: None,
            sample_every: None,
            noise: 1e-10,
            seed: 1,
            realizations: 1,
            m_ave: Vec::new(),
            m_ave_fraction: Vec::new(),
            windowed: true,
            away_kh: 0.5 * PI,
            alpha_range: (2f64.sqrt(), 1.5),
            scan_points: 2001,
            startup: Startup::Me,
            checks: Checks::default(),
        }
    }
}

struct Entry {
    key: String,
    value: String,
    line: usize,
}

struct Section {
    name: String,
    line: usize,
    entries: Vec<Entry>,
}

fn split_sections(text: &str, issues: &mut Vec<ConfigIssue>) -> Vec<Section> {
    let mut sections: Vec<Section> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        if let Some(rest) = content.strip_prefix('[') {
            match rest.strip_suffix(']').map(str::trim) {
                Some(name) if !name.is_empty() && name.chars().all(|c| c.is_ascii_alphanumeric() || "-_/.".contains(c)) => {
                    if sections.iter().any(|s| s.name == name) {
                        issues.push(ConfigIssue::Parse { line, message: format!("duplicate section [{name}]") });
                    }
                    sections.push(Section { name: name.to_string(), line, entries: Vec::new() });
                }
                _ => issues.push(ConfigIssue::Parse { line, message: format!("malformed section header `{content}`") }),
            }
            continue;
        }
        let Some((key, value)) = content.split_once('=') else {
            issues.push(ConfigIssue::Parse { line, message: format!("expected `key = value`, got `{content}`") });
            continue;
        };
        let (key, value) = (key.trim(), value.trim());
        if key.is_empty() || value.is_empty() {
            issues.push(ConfigIssue::Parse { line, message: "empty key or value".into() });
            continue;
        }
        if sections.is_empty() {
            sections.push(Section { name: DEFAULT_SECTION.into(), line: 0, entries: Vec::new() });
        }
        let section = sections.last_mut().expect("a section exists");
        section.entries.push(Entry { key: key.to_string(), value: value.to_string(), line });
    }
    sections
}

type Setter = fn(&mut ScenarioConfig, &str) -> Result<(), String>;

fn num(v: &str) -> Result<f64, String> {
    let x = match v {
        "pi" => PI,
        _ => match v.split_once("pi/") {
            Some(("", d)) => PI / d.trim().parse::<f64>().map_err(|_| format!("not a number: `{v}`"))?,
            _ => v.parse::<f64>().map_err(|_| format!("not a number: `{v}`"))?,
        },
    };
    if x.is_finite() {
        Ok(x)
    } else {
        Err(format!("not finite: `{v}`"))
    }
}

fn positive(v: &str) -> Result<f64, String> {
    let x = num(v)?;
    if x > 0.0 {
        Ok(x)
    } else {
        Err(format!("must be positive, got {x}"))
    }
}

fn list<T>(v: &str, item: impl Fn(&str) -> Result<T, String>) -> Result<Vec<T>, String> {
    v.split(',').map(|s| item(s.trim())).collect()
}

fn pair(v: &str) -> Result<(f64, f64), String> {
    match list(v, num)?.as_slice() {
        [lo, hi] if lo <= hi => Ok((*lo, *hi)),
        _ => Err(format!("expected `lo, hi` with lo <= hi, got `{v}`")),
    }
}

fn count(v: &str) -> Result<usize, String> {
    v.parse::<usize>().map_err(|_| format!("not a non-negative integer: `{v}`"))
}

fn flag(v: &str) -> Result<bool, String> {
    match v {
        "true" | "yes" => Ok(true),
        "false" | "no" => Ok(false),
        _ => Err(format!("expected true or false, got `{v}`")),
    }
}

use Protocol::*;

/// Protocols that take each key; empty means all.
fn key_table() -> Vec<(&'static str, &'static [Protocol], Setter)> {
    const SIM: &[Protocol] = &[Spectra, Staircase, MeSlope, Dip, Growth, Peak, LfGrowth];
    const SPEC: &[Protocol] = &[Spectra, Staircase, MeSlope, Dip, Growth, Peak, LfGrowth];
    vec![
        ("protocol", &[], |_, _| Ok(())),
        ("model", SIM, |c, v| {
            c.model = match v {
                "coupled-wave" => Model::CoupledWave,
                "gross-neveu" => Model::GrossNeveu { omega: 0.7 },
                _ => return Err(format!("unknown model `{v}` (coupled-wave, gross-neveu)")),
            };
            Ok(())
        }),
        ("omega", SIM, |_, v| {
            let w = num(v)?;
            if w > 0.0 && w < 1.0 {
                Ok(())
            } else {
                Err(format!("must lie in (0, 1), got {w}"))
            }
        }),
        ("scheme", SIM, |c, v| {
            c.scheme = match v {
                "se" => SchemeId::Se,
                "me" => SchemeId::Me,
                "lf" => SchemeId::Lf(c.startup),
                _ => return Err(format!("unknown scheme `{v}` (se, me, lf)")),
            };
            Ok(())
        }),
        ("startup", &[Spectra, Dip, Growth, Peak], |c, v| {
            c.startup = match v {
                "se" => Startup::Se,
                "me" => Startup::Me,
                "rk4" => Startup::Rk4,
                _ => return Err(format!("unknown startup `{v}` (se, me, rk4)")),
            };
            Ok(())
        }),
        ("bc", &[Spectra, Staircase, MeSlope, Dip, Growth, Peak], |c, v| {
            c.bc = match v {
                "periodic" => BoundaryKind::Periodic,
                "nonreflecting" => BoundaryKind::Nonreflecting,
                _ => return Err(format!("unknown boundary kind `{v}` (periodic, nonreflecting)")),
            };
            Ok(())
        }),
        ("L", &[], |c, v| {
            c.lengths = list(v, positive)?;
            Ok(())
        }),
        ("h", &[], |c, v| {
            c.steps = list(v, positive)?;
            Ok(())
        }),
        ("times", &[Spectra, Dip, Growth], |c, v| {
            let t = list(v, num)?;
            if t.windows(2).all(|w| w[0] < w[1]) && t.first().is_some_and(|t0| *t0 >= 0.0) {
                c.times = t;
                Ok(())
            } else {
                Err("times must be non-negative and strictly increasing".into())
            }
        }),
        ("periods", &[Spectra, Staircase, MeSlope, Growth], |c, v| {
            c.periods = count(v)?;
            Ok(())
        }),
        ("t_final", &[Peak, LfGrowth], |c, v| {
            c.t_final = Some(positive(v)?);
            Ok(())
        }),
        ("sample_every", &[LfGrowth], |c, v| {
            c.sample_every = Some(positive(v)?);
            Ok(())
        }),
        ("noise", SIM, |c, v| {
            let a = num(v)?;
            if a >= 0.0 {
                c.noise = a;
                Ok(())
            } else {
                Err(format!("must be non-negative, got {a}"))
            }
        }),
        ("seed", &[], |c, v| {
            c.seed = v.parse().map_err(|_| format!("not a 64-bit seed: `{v}`"))?;
            Ok(())
        }),
        ("realizations", &[MeSlope], |c, v| {
            c.realizations = count(v)?;
            Ok(())
        }),
        ("m_ave", SPEC, |c, v| {
            c.m_ave = list(v, count)?;
            Ok(())
        }),
        ("m_ave_fraction", &[MeSlope, Dip, Staircase, Growth], |c, v| {
            c.m_ave_fraction = list(v, positive)?;
            if c.m_ave_fraction.iter().all(|f| *f < 0.25) {
                Ok(())
            } else {
                Err("fractions of M must stay below 1/4".into())
            }
        }),
        ("windowed", SPEC, |c, v| {
            c.windowed = flag(v)?;
            Ok(())
        }),
        ("away_kh", &[Dip], |c, v| {
            c.away_kh = positive(v)?;
            Ok(())
        }),
        ("alpha_range", &[LfScan, LfGrowth], |c, v| {
            c.alpha_range = pair(v)?;
            Ok(())
        }),
        ("scan_points", &[LfScan, LfGrowth], |c, v| {
            c.scan_points = count(v)?;
            Ok(())
        }),
        ("ratio_factor", &[Staircase], |c, v| {
            c.checks.ratio_factor = Some(positive(v)?);
            Ok(())
        }),
        ("slope_range", &[Staircase], |c, v| {
            c.checks.slope_range = Some(pair(v)?);
            Ok(())
        }),
        ("slope_target", &[MeSlope], |c, v| {
            c.checks.slope_target = list(v, num)?;
            Ok(())
        }),
        ("slope_tol", &[MeSlope], |c, v| {
            c.checks.slope_tol = Some(positive(v)?);
            Ok(())
        }),
        ("ratio_range", &[Dip], |c, v| {
            c.checks.ratio_range = Some(pair(v)?);
            Ok(())
        }),
        ("growth_range", &[Growth], |c, v| {
            c.checks.growth_range = Some(pair(v)?);
            Ok(())
        }),
        ("expect", &[Spectra, Growth], |c, v| {
            c.checks.expect = Some(match v {
                "increasing" => Trend::Increasing,
                "nonincreasing" => Trend::Nonincreasing,
                _ => return Err(format!("expected increasing or nonincreasing, got `{v}`")),
            });
            Ok(())
        }),
        ("expect_ends", &[Spectra], |c, v| {
            c.checks.expect_ends = Some(match v {
                "increasing" => Trend::Increasing,
                "nonincreasing" => Trend::Nonincreasing,
                _ => return Err(format!("expected increasing or nonincreasing, got `{v}`")),
            });
            Ok(())
        }),
        ("peak_tol", &[Peak], |c, v| {
            c.checks.peak_tol = Some(positive(v)?);
            Ok(())
        }),
        ("min_growth", &[Peak], |c, v| {
            c.checks.min_growth = Some(positive(v)?);
            Ok(())
        }),
        ("gap_max", &[LfScan], |c, v| {
            c.checks.gap_max = Some(positive(v)?);
            Ok(())
        }),
        ("alpha_tol", &[LfGrowth], |c, v| {
            c.checks.alpha_tol = Some(positive(v)?);
            Ok(())
        }),
        ("startup_tol", &[LfGrowth], |c, v| {
            c.checks.startup_tol = Some(positive(v)?);
            Ok(())
        }),
        ("se_tol", &[VnCurves], |c, v| {
            c.checks.se_tol = Some(positive(v)?);
            Ok(())
        }),
        ("lf_tol", &[VnCurves], |c, v| {
            c.checks.lf_tol = Some(positive(v)?);
            Ok(())
        }),
    ]
}

fn parse_section(section: &Section, issues: &mut Vec<ConfigIssue>) -> Option<ScenarioConfig> {
    let start = issues.len();
    let mut cfg = ScenarioConfig::defaults(&section.name);
    let invalid = |e: &Entry, message: String| ConfigIssue::Validation { line: e.line, key: e.key.clone(), message };
    let mut seen: BTreeMap<&str, usize> = BTreeMap::new();
    for e in &section.entries {
        if let Some(first) = seen.insert(&e.key, e.line) {
            issues.push(invalid(e, format!("duplicate key (first set on line {first})")));
        }
    }
    if let Some(e) = section.entries.iter().find(|e| e.key == "protocol") {
        match Protocol::parse(&e.value) {
            Some(p) => cfg.protocol = p,
            None => {
                let names: Vec<&str> = Protocol::ALL.iter().map(|(_, n)| *n).collect();
                issues.push(invalid(e, format!("unknown protocol `{}` ({})", e.value, names.join(", "))));
            }
        }
    }
    let table = key_table();
    // startup before scheme so `scheme = lf` picks it up
    let mut ordered: Vec<&Entry> = section.entries.iter().collect();
    ordered.sort_by_key(|e| e.key != "startup");
    let mut omega = None;
    for e in ordered {
        let Some((_, protocols, set)) = table.iter().find(|(k, _, _)| *k == e.key) else {
            issues.push(invalid(e, "unknown key".into()));
            continue;
        };
        if !protocols.is_empty() && !protocols.contains(&cfg.protocol) {
            issues.push(invalid(e, format!("not used by protocol {}", cfg.protocol.name())));
            continue;
        }
        match set(&mut cfg, &e.value) {
            Ok(()) if e.key == "omega" => omega = Some((e, num(&e.value).unwrap_or(0.7))),
            Ok(()) => {}
            Err(m) => issues.push(invalid(e, m)),
        }
    }
    if let Some((e, w)) = omega {
        match &mut cfg.model {
            Model::GrossNeveu { omega } => *omega = w,
            _ => issues.push(invalid(e, "only meaningful for model = gross-neveu".into())),
        }
    }
    validate(&cfg, section, issues);
    (issues.len() == start).then_some(cfg)
}

fn validate(cfg: &ScenarioConfig, section: &Section, issues: &mut Vec<ConfigIssue>) {
    let line_of = |key: &str| section.entries.iter().find(|e| e.key == key).map_or(section.line, |e| e.line);
    let mut fail = |key: &str, message: String| {
        issues.push(ConfigIssue::Validation { line: line_of(key), key: key.to_string(), message });
    };
    let needs_length = cfg.protocol != VnCurves;
    if needs_length && cfg.lengths.is_empty() {
        fail("L", "missing".into());
    }
    if cfg.steps.is_empty() {
        fail("h", "missing".into());
    }
    let (nl, nh) = (cfg.lengths.len(), cfg.steps.len());
    if nl > 1 && nh > 1 && nl != nh {
        fail("h", format!("{nh} steps do not pair with {nl} lengths"));
    }
    if needs_length && nl > 0 && nh > 0 && (nl == nh || nl == 1 || nh == 1) {
        for (l, h) in cfg.cases() {
            if let Err(e) = make_grid(l, h, false) {
                fail("h", format!("L = {l}, h = {h}: {e}"));
            }
        }
    }
    let single = matches!(cfg.protocol, Spectra | Dip | Growth | Peak | LfScan | LfGrowth | VnCurves);
    if single && (nl > 1 || nh > 1) {
        fail("L", format!("protocol {} takes a single L and h", cfg.protocol.name()));
    }
    let uses_time_grid = |t: f64| cfg.cases().iter().all(|(l, h)| make_grid(*l, *h, false).is_ok_and(|g| g.steps_in(t).is_some()));
    for (key, t) in [("t_final", cfg.t_final), ("sample_every", cfg.sample_every)] {
        if let Some(t) = t {
            if nh > 0 && !uses_time_grid(t) {
                fail(key, format!("{t} is not a multiple of h"));
            }
        }
    }
    if nh > 0 && cfg.times.iter().any(|t| !uses_time_grid(*t)) {
        fail("times", "every time must be a multiple of h".into());
    }
    match cfg.protocol {
        Staircase => {
            if cfg.scheme != SchemeId::Se && cfg.checks.ratio_factor.is_some() {
                fail("ratio_factor", "the closed-form prediction exists for scheme = se only".into());
            }
            if cfg.periods < 4 {
                fail("periods", "staircase regression needs at least 4 periods".into());
            }
        }
        MeSlope => {
            if cfg.m_ave_fraction.is_empty() {
                fail("m_ave_fraction", "missing".into());
            }
            if cfg.checks.slope_target.len() != cfg.m_ave_fraction.len() && !cfg.checks.slope_target.is_empty() {
                fail("slope_target", "needs one target per m_ave_fraction".into());
            }
            if cfg.realizations == 0 {
                fail("realizations", "must be at least 1".into());
            }
            if cfg.periods < 4 {
                fail("periods", "staircase regression needs at least 4 periods".into());
            }
        }
        Dip => {
            if cfg.m_ave.len() + cfg.m_ave_fraction.len() != 2 {
                fail("m_ave", "give exactly two box half-widths (near, away) via m_ave or m_ave_fraction".into());
            }
            if !cfg.times.is_empty() && cfg.times.len() != 3 {
                fail("times", "the dip protocol compares exactly three times".into());
            }
        }
        Growth => {
            let n = if cfg.times.is_empty() { cfg.periods } else { cfg.times.len() };
            if n < 2 {
                fail("times", "need at least two sample times".into());
            }
        }
        Peak | LfGrowth => {
            if cfg.t_final.is_none() {
                fail("t_final", "missing".into());
            }
        }
        LfScan => {
            if cfg.scan_points < 3 {
                fail("scan_points", "need at least 3 points".into());
            }
        }
        Spectra | VnCurves => {}
    }
    if matches!(cfg.protocol, Staircase | MeSlope) && cfg.scheme == SchemeId::Lf(cfg.startup) {
        fail("scheme", "staircase measurements assume a one-step scheme".into());
    }
    if matches!(cfg.model, Model::GrossNeveu { .. }) && matches!(cfg.protocol, Staircase | MeSlope) {
        fail("model", "the staircase measurements are defined for the coupled-wave model".into());
    }
    if cfg.protocol == LfGrowth && !matches!(cfg.scheme, SchemeId::Lf(_)) {
        fail("scheme", "protocol lf-growth needs scheme = lf".into());
    }
}

/// Parses every section of a configuration file. All problems are
/// collected before returning.
pub fn parse_config(text: &str) -> Result<Vec<ScenarioConfig>, ConfigErrors> {
    let mut issues = Vec::new();
    let sections = split_sections(text, &mut issues);
    if sections.is_empty() && issues.is_empty() {
        issues.push(ConfigIssue::Parse { line: 0, message: "no keys found".into() });
    }
    let configs: Vec<ScenarioConfig> = sections.iter().filter_map(|s| parse_section(s, &mut issues)).collect();
    if issues.is_empty() {
        Ok(configs)
    } else {
        issues.sort_by_key(|i| match i {
            ConfigIssue::Parse { line, .. } | ConfigIssue::Validation { line, .. } => *line,
        });
        Err(ConfigErrors(issues))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn keys(err: &ConfigErrors) -> Vec<String> {
        err.0
            .iter()
            .map(|i| match i {
                ConfigIssue::Validation { key, .. } => key.clone(),
                ConfigIssue::Parse { .. } => "<parse>".into(),
            })
            .collect()
    }

    #[test]
    fn skeleton() {
        let cfgs = parse_config("scheme = me\nL = 25\nh = 0.05").unwrap();
        assert_eq!(cfgs.len(), 1);
        let c = &cfgs[0];
        assert_eq!((c.id.as_str(), c.scheme, c.protocol), (DEFAULT_SECTION, SchemeId::Me, Protocol::Spectra));
        assert_eq!(c.cases(), vec![(25.0, 0.05)]);
    }

    #[test]
    fn non_integer_ratio() {
        let err = parse_config("h = 0.3\nL = 1").unwrap_err();
        assert_eq!(keys(&err), vec!["h"]);
        assert!(err.to_string().contains("line 1"), "{err}");
    }

    #[test]
    fn unknown_scheme_and_everything_else_reported() {
        let err = parse_config("scheme = cranknicolson").unwrap_err();
        let k = keys(&err);
        assert!(k.contains(&"scheme".to_string()), "{err}");
        assert!(k.contains(&"L".to_string()) && k.contains(&"h".to_string()), "{err}");
    }

    #[test]
    fn unknown_duplicate_and_misplaced_keys() {
        let text = "[a]\nprotocol = dip\nL = 25\nh = 0.05\nm_ave = 1, 2\nfoo = 1\nh = 0.05\nslope_tol = 0.5\n[b]\nbogus line\n";
        let err = parse_config(text).unwrap_err();
        let lines: Vec<usize> = err
            .0
            .iter()
            .map(|i| match i {
                ConfigIssue::Parse { line, .. } | ConfigIssue::Validation { line, .. } => *line,
            })
            .collect();
        // section b also lacks L and h, reported at its header
        assert_eq!(lines, vec![6, 7, 8, 9, 9, 10], "{err}");
    }

    #[test]
    fn sections_lists_and_pi() {
        let text = "[fig4/b]\nprotocol = staircase\nL = 50, 25\nh = 0.02, 0.0125\nratio_factor = 2\n[fig7]\nprotocol = dip\nscheme = me\nL = 25\nh = 0.05\nm_ave_fraction = 0.025, 0.1\naway_kh = pi/4\n";
        let cfgs = parse_config(text).unwrap();
        assert_eq!(cfgs[0].scenario(), "fig4");
        assert_eq!(cfgs[0].cases(), vec![(50.0, 0.02), (25.0, 0.0125)]);
        assert!((cfgs[1].away_kh - PI / 4.0).abs() < 1e-15);
    }

    #[test]
    fn lf_scheme_takes_startup_regardless_of_order() {
        let c = &parse_config("scheme = lf\nstartup = rk4\nL = 50\nh = 0.01").unwrap()[0];
        assert_eq!(c.scheme, SchemeId::Lf(Startup::Rk4));
    }
}
