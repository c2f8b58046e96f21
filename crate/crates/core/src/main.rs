use clap::{Parser, Subcommand, ValueEnum};
use moclab::experiment::output::{fmt_num, write_csv};
use moclab::experiment::{reproduce, run_config, ExperimentError, RunSummary};
use moclab::linalg::eig_dense;
use moclab::schemes::{SchemeId, Startup};
use moclab::theory::{assemble_amplification_matrix, lf_alpha_scan, von_neumann_factors};
use moclab::{make_grid, MocError};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "moclab", version, about = "Method-of-characteristics stability laboratory")]
struct Cli {
    /// Directory for every output file.
    #[arg(long, global = true, default_value = "moclab-out")]
    out: PathBuf,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a built-in figure scenario.
    Reproduce { scenario: String },
    /// Run every scenario in a configuration file.
    Run { config: PathBuf },
    /// Von Neumann amplification factors on kh in [0, pi].
    Vn {
        #[arg(long, value_enum)]
        scheme: SchemeArg,
        #[arg(long)]
        h: f64,
        #[arg(long, default_value_t = 1001)]
        points: usize,
    },
    /// Eigenvalues of the nonreflecting amplification matrix.
    Eigs {
        #[arg(long, value_enum)]
        scheme: SchemeArg,
        #[arg(long = "L")]
        length: f64,
        #[arg(long)]
        h: f64,
    },
    /// Scan |det Phi+| over the leapfrog growth exponent.
    ScanLf {
        #[arg(long = "L")]
        length: f64,
        #[arg(long)]
        h: f64,
        #[arg(long, default_value_t = 2001)]
        points: usize,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum SchemeArg {
    Se,
    Me,
    Lf,
}

impl From<SchemeArg> for SchemeId {
    fn from(s: SchemeArg) -> Self {
        match s {
            SchemeArg::Se => SchemeId::Se,
            SchemeArg::Me => SchemeId::Me,
            SchemeArg::Lf => SchemeId::Lf(Startup::Me),
        }
    }
}

const EXIT_METRIC: u8 = 2;
const EXIT_CONFIG: u8 = 3;

fn master_seed() -> Result<Option<u64>, String> {
    match std::env::var("MOCLAB_SEED") {
        Ok(v) => v.trim().parse().map(Some).map_err(|_| format!("MOCLAB_SEED is not a 64-bit integer: `{v}`")),
        Err(_) => Ok(None),
    }
}

fn report(summaries: &[RunSummary], out: &Path) -> u8 {
    for s in summaries {
        println!("{} ({}): {}", s.scenario, s.figure, if s.pass { "PASS" } else { "FAIL" });
        for m in &s.metrics {
            let band = m.tolerance.map_or(String::new(), |b| {
                let lo = b.lo.map_or("-inf".into(), |v| v.to_string());
                let hi = b.hi.map_or("inf".into(), |v| v.to_string());
                let open = if b.strict_lo { "(" } else { "[" };
                format!(" {open}{lo}, {hi}]")
            });
            let flag = if m.pass { "ok" } else { "FAIL" };
            println!("  {:<40} {:>24}{band} {flag}", m.name, fmt_num(m.value));
        }
        println!("  wall time {:.1} s, summary in {}", s.wall_time_s, out.join(&s.scenario).display());
    }
    if summaries.iter().all(|s| s.pass) {
        0
    } else {
        EXIT_METRIC
    }
}

fn numeric(e: MocError) -> ExperimentError {
    ExperimentError::Numeric(e)
}

fn execute(cli: Cli) -> Result<u8, ExperimentError> {
    let out = cli.out;
    match cli.command {
        Command::Reproduce { scenario } => {
            let seed = master_seed().map_err(|m| config_error(&m))?;
            Ok(report(&[reproduce(&scenario, &out, seed)?], &out))
        }
        Command::Run { config } => {
            let seed = master_seed().map_err(|m| config_error(&m))?;
            let text = std::fs::read_to_string(&config)
                .map_err(|e| config_error(&format!("cannot read {}: {e}", config.display())))?;
            Ok(report(&run_config(&text, &out, seed)?, &out))
        }
        Command::Vn { scheme, h, points } => {
            if points < 2 {
                return Err(config_error("--points must be at least 2"));
            }
            let id = SchemeId::from(scheme);
            let mut rows = Vec::with_capacity(points);
            for i in 0..points {
                let kh = std::f64::consts::PI * i as f64 / (points - 1) as f64;
                let mut mags: Vec<f64> = von_neumann_factors(id, kh, h).map_err(numeric)?.iter().map(|z| z.norm()).collect();
                mags.sort_by(|a, b| b.total_cmp(a));
                rows.push(std::iter::once(kh).chain(mags).collect::<Vec<f64>>());
            }
            let mut header = vec!["kh".to_string()];
            header.extend((1..rows[0].len()).map(|j| format!("abs_lambda_{j}")));
            let path = out.join("vn.csv");
            write_csv(&path, &header, &rows)?;
            let (kh, top) = rows.iter().map(|r| (r[0], r[1])).fold((0.0, 0.0), |a, p| if p.1 > a.1 { p } else { a });
            println!("max |lambda| = {} at kh = {}; table in {}", fmt_num(top), fmt_num(kh), path.display());
            Ok(0)
        }
        Command::Eigs { scheme, length, h } => {
            let grid = make_grid(length, h, false).map_err(numeric)?;
            let a = assemble_amplification_matrix(scheme.into(), grid).map_err(numeric)?;
            let mut eigs = eig_dense(&a.matrix).map_err(numeric)?;
            eigs.sort_by(|x, y| y.norm().total_cmp(&x.norm()));
            let rows: Vec<Vec<f64>> = eigs.iter().map(|z| vec![z.re, z.im, z.norm()]).collect();
            let path = out.join("eigs.csv");
            write_csv(&path, &["re".into(), "im".into(), "abs".into()], &rows)?;
            let top = eigs.first().map_or(0.0, |z| z.norm());
            println!("{} eigenvalues, max |lambda| = {}, |lambda|^(2M) = {}; list in {}",
                eigs.len(), fmt_num(top), fmt_num(top.powf(2.0 * grid.m as f64)), path.display());
            Ok(0)
        }
        Command::ScanLf { length, h, points } => {
            let scan = lf_alpha_scan(length, h, (2f64.sqrt(), 1.5), points).map_err(numeric)?;
            let rows: Vec<Vec<f64>> = scan.alphas.iter().zip(&scan.normalized_det).map(|(a, d)| vec![*a, *d]).collect();
            let path = out.join("detphi_scan.csv");
            write_csv(&path, &["alpha".into(), "abs_det_phi_plus".into()], &rows)?;
            let roots: Vec<String> = scan.roots_nonreflecting.iter().map(|r| format!("{r:.6}")).collect();
            println!("{} roots: {}", roots.len(), roots.join(" "));
            if let Some(p) = scan.alphas_periodic.first() {
                println!("periodic growth exponent {p:.6}");
            }
            println!("scan in {}", path.display());
            Ok(0)
        }
    }
}

fn config_error(message: &str) -> ExperimentError {
    ExperimentError::Config(moclab::experiment::ConfigErrors(vec![moclab::experiment::ConfigIssue::Parse {
        line: 0,
        message: message.to_string(),
    }]))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_CONFIG } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match execute(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
