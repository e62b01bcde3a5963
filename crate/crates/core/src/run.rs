//! Executes a [`RunConfig`]: each command writes `<output>.csv`,
//! `<output>.plot.dat` and a plain-text `<output>.report.txt`.

use std::fmt::Write as _;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use thiserror::Error;

use crate::config::{Command, FamilySpec, RunConfig};
use crate::contour::{spectral_cluster, Contour};
use crate::error::Error;
use crate::expr::parse_expression;
use crate::family::HermitianFamily;
use crate::gallery::{eigenvector_jump, holder_quotient, resolvent_weak_vs_norm};
use crate::linalg::hermitian_eig;
use crate::output::{branch_csv, plot_data, table_csv};
use crate::scalar::Cplx;
use crate::tracker::{
    counting_defect, estimate_gronwall_constant, extend_parameterization, gronwall_screen, track_on_grid,
    uniform_grid, BranchSet, PairSelection,
};

#[derive(Debug, Error)]
pub enum RunError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("numerical failure: {0}")]
    Numerical(Error),
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: io::Error },
}

impl RunError {
    /// Process exit status: 2 for configuration problems, 3 for numerical
    /// failures, 1 for I/O.
    pub fn exit_code(&self) -> i32 {
        match self {
            RunError::Config(_) => 2,
            RunError::Numerical(_) => 3,
            RunError::Io { .. } => 1,
        }
    }
}

impl From<Error> for RunError {
    fn from(e: Error) -> Self {
        if e.is_numerical() {
            RunError::Numerical(e)
        } else {
            RunError::Config(e.to_string())
        }
    }
}

/// Paths written by a run, plus the report text.
#[derive(Debug, Clone)]
pub struct RunSummary {
    pub csv: PathBuf,
    pub plot: PathBuf,
    pub report_path: PathBuf,
    pub report: String,
}

struct Artifacts {
    csv: String,
    plot: String,
    report: String,
}

/// Compact decimal for report lines: ten significant digits, trailing
/// zeros dropped.
fn short(x: f64) -> String {
    if x == 0.0 {
        return "0.0".into();
    }
    let mag = x.abs().log10().floor();
    if !(-4.0..10.0).contains(&mag) {
        return format!("{x:.9e}");
    }
    let decimals = (9.0 - mag).max(1.0) as usize;
    let s = format!("{x:.decimals$}");
    let s = s.trim_end_matches('0');
    if s.ends_with('.') {
        format!("{s}0")
    } else {
        s.to_string()
    }
}

/// `t` rounded to ten decimals for listing crossings.
fn location(t: f64) -> String {
    let r = (t * 1e10).round() / 1e10 + 0.0;
    format!("{r}")
}

fn list(v: &[f64]) -> String {
    let items: Vec<String> = v.iter().map(|&x| short(x)).collect();
    format!("[{}]", items.join(", "))
}

fn family_of(cfg: &RunConfig) -> Result<Box<dyn HermitianFamily<f64>>, RunError> {
    let spec = cfg
        .family
        .as_ref()
        .ok_or_else(|| RunError::Config(format!("command `{}` needs a family", cfg.command)))?;
    Ok(spec.build()?)
}

/// Runs `cfg`, writing artifacts into `out_dir` (created if missing).
pub fn run(cfg: &RunConfig, out_dir: &Path, verbose: bool) -> Result<RunSummary, RunError> {
    let log = |msg: &str| {
        if verbose {
            eprintln!("[spectral-branch] {msg}");
        }
    };
    log(&format!("command {}", cfg.command));
    let art = match cfg.command {
        Command::Track => track(cfg, "track", &log)?,
        Command::Schrodinger => track(cfg, "schrodinger", &log)?,
        Command::Project => project(cfg)?,
        Command::CounterexampleHolder => holder(cfg)?,
        Command::CounterexampleResolvent => resolvent(cfg)?,
        Command::Extend => extend(cfg, &log)?,
    };
    fs::create_dir_all(out_dir).map_err(|source| RunError::Io {
        path: out_dir.to_path_buf(),
        source,
    })?;
    let write = |ext: &str, body: &str| -> Result<PathBuf, RunError> {
        let path = out_dir.join(format!("{}.{ext}", cfg.output));
        fs::write(&path, body).map_err(|source| RunError::Io {
            path: path.clone(),
            source,
        })?;
        log(&format!("wrote {}", path.display()));
        Ok(path)
    };
    Ok(RunSummary {
        csv: write("csv", &art.csv)?,
        plot: write("plot.dat", &art.plot)?,
        report_path: write("report.txt", &art.report)?,
        report: art.report,
    })
}

fn branch_plot(set: &BranchSet<f64>) -> String {
    let series: Vec<(String, Vec<f64>)> = set
        .by_branch()
        .into_iter()
        .enumerate()
        .map(|(j, b)| (format!("branch_{j}"), b))
        .collect();
    plot_data(&set.grid, &series)
}

fn header(cfg: &RunConfig, r: &mut String) {
    let _ = writeln!(r, "command: {}", cfg.command);
    if let Some(f) = &cfg.family {
        let _ = writeln!(r, "family: {}", f.name());
    }
    let _ = writeln!(
        r,
        "grid: {} points on [{}, {}]",
        cfg.grid_size,
        short(cfg.t_range.0),
        short(cfg.t_range.1)
    );
}

fn describe_branches(cfg: &RunConfig, family: &dyn HermitianFamily<f64>, set: &BranchSet<f64>, r: &mut String) -> Result<(), RunError> {
    let _ = writeln!(r, "order: {}", set.order.as_u8());
    let _ = writeln!(r, "branches: {}", set.len());
    let locs: Vec<String> = set.crossings.iter().map(|c| location(c.t_star)).collect();
    if locs.is_empty() {
        let _ = writeln!(r, "crossings: 0");
    } else {
        let _ = writeln!(r, "crossings: {} at t={}", locs.len(), locs.join(", "));
    }
    for (i, c) in set.crossings.iter().enumerate() {
        let m = &c.report;
        let _ = writeln!(
            r,
            "crossing {i}: t={} grid_index={} on_grid={} branches={:?}",
            short(c.t_star),
            c.grid_index,
            c.on_grid,
            c.branches
        );
        let _ = writeln!(r, "  compressed derivative spectrum {}", list(&c.compressed));
        let _ = writeln!(r, "  left {} right {}", list(&m.left), list(&m.right));
        if let (Some(l2), Some(r2)) = (&m.left_second, &m.right_second) {
            let _ = writeln!(r, "  left second {} right second {}", list(l2), list(r2));
        }
        let _ = writeln!(r, "  pairing {:?} residual {:.3e}", m.pairing, m.residual);
    }
    let max_res = set.max_match_residual();
    let bound = cfg.tolerances.deriv;
    let _ = writeln!(
        r,
        "residual: max {:.3e} ({} {:.0e})",
        max_res,
        if max_res <= bound { "<=" } else { ">" },
        bound
    );
    let defect = set.multiset_defect(&family)?;
    let _ = writeln!(r, "multiset defect: {defect:.3e}");

    let bound_est = estimate_gronwall_constant(&family, &set.grid, &cfg.tolerances)?;
    let a = cfg.gronwall_factor * bound_est;
    let g = gronwall_screen(&set.grid, &set.by_branch(), a, &PairSelection::All);
    let held = g.holds.iter().filter(|&&h| h).count();
    let _ = writeln!(
        r,
        "gronwall: a = {} ({} x estimated bound {}), holds for {held}/{} branches over {} pairs, min margin {:.3e}",
        short(a),
        short(cfg.gronwall_factor),
        short(bound_est),
        g.holds.len(),
        g.pairs_checked,
        g.min_margin
    );
    for v in &g.violations {
        let _ = writeln!(
            r,
            "  violation: branch {} between t={} and t={}: {:.3e} > {:.3e}",
            v.branch,
            short(set.grid[v.i1]),
            short(set.grid[v.i2]),
            v.lhs,
            v.rhs
        );
    }
    if set.warnings.is_empty() {
        let _ = writeln!(r, "warnings: none");
    } else {
        for w in &set.warnings {
            let _ = writeln!(r, "warning: {w}");
        }
    }
    Ok(())
}

fn track(cfg: &RunConfig, what: &str, log: &dyn Fn(&str)) -> Result<Artifacts, RunError> {
    let family = family_of(cfg)?;
    let grid = uniform_grid(cfg.t_range.0, cfg.t_range.1, cfg.grid_size)?;
    log(&format!("tracking {} on {} points", family.name(), grid.len()));
    let set = track_on_grid(&family, grid, cfg.order, &cfg.tolerances)?;
    log(&format!("{} crossings", set.crossings.len()));
    let mut r = String::new();
    header(cfg, &mut r);
    describe_branches(cfg, &*family, &set, &mut r)?;
    if what == "schrodinger" {
        if let Some(FamilySpec::Schrodinger { potential, .. }) = &cfg.family {
            let pi2 = std::f64::consts::PI.powi(2);
            let low = set.values[0][0];
            let _ = writeln!(
                r,
                "lowest eigenvalue at t={}: {} (pi^2 = {}, relative difference {:.3e}, potential {potential})",
                short(set.grid[0]),
                short(low),
                short(pi2),
                ((low - pi2) / pi2).abs()
            );
            let slopes: Vec<f64> = set.derivs[0].iter().take(5).copied().collect();
            let _ = writeln!(r, "slopes at t={}: lowest {}", short(set.grid[0]), list(&slopes));
        }
    }
    Ok(Artifacts {
        csv: branch_csv(&set, true),
        plot: branch_plot(&set),
        report: r,
    })
}

fn project(cfg: &RunConfig) -> Result<Artifacts, RunError> {
    let family = family_of(cfg)?;
    let (Some(c), Some(rad)) = (cfg.contour.center, cfg.contour.radius) else {
        return Err(RunError::Config("command `project` needs a contour center and radius".into()));
    };
    let gamma = Contour::new(Cplx::new(c, 0.0), rad, cfg.contour.nodes)?;
    let grid = uniform_grid(cfg.t_range.0, cfg.t_range.1, cfg.grid_size)?;
    let mut rows = Vec::with_capacity(grid.len());
    let mut ranks = Vec::with_capacity(grid.len());
    let (mut idem, mut herm) = (0.0f64, 0.0f64);
    for &t in &grid {
        let cl = spectral_cluster(&family, t, &gamma, &cfg.tolerances).map_err(|e| match e {
            Error::RankDrift { expected, found, .. } => Error::RankDrift { t, expected, found },
            other => other,
        })?;
        let ev = cl.scaled_eigenvalues();
        let (lo, hi) = ev.iter().fold((f64::NAN, f64::NAN), |(lo, hi), &x| (x.min(lo), x.max(hi)));
        let sum: f64 = ev.iter().sum();
        idem = idem.max(cl.idempotency_defect());
        herm = herm.max(cl.hermiticity_defect());
        ranks.push(cl.rank);
        rows.push(vec![t, cl.rank as f64, cl.idempotency_defect(), cl.hermiticity_defect(), sum, lo, hi]);
    }
    let header_row: Vec<String> = ["t", "rank", "idempotency", "hermiticity", "cluster_sum", "cluster_min", "cluster_max"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    let mut r = String::new();
    header(cfg, &mut r);
    let _ = writeln!(r, "contour: center {} radius {} nodes {}", short(c), short(rad), cfg.contour.nodes);
    let constant = ranks.windows(2).all(|w| w[0] == w[1]);
    let _ = writeln!(
        r,
        "rank: {} ({})",
        ranks.first().copied().unwrap_or(0),
        if constant { "constant" } else { "varies" }
    );
    let _ = writeln!(r, "max idempotency defect: {idem:.3e}");
    let _ = writeln!(r, "max hermiticity defect: {herm:.3e}");
    let series = vec![
        ("rank".to_string(), rows.iter().map(|w| w[1]).collect()),
        ("cluster_sum".to_string(), rows.iter().map(|w| w[4]).collect()),
    ];
    Ok(Artifacts {
        csv: table_csv(&header_row, &rows),
        plot: plot_data(&grid, &series),
        report: r,
    })
}

fn holder(cfg: &RunConfig) -> Result<Artifacts, RunError> {
    let h = &cfg.holder;
    let mut rows = Vec::new();
    let mut r = String::new();
    let _ = writeln!(r, "command: {}", cfg.command);
    let _ = writeln!(r, "prefactor rescaling: {}", h.prefactor);
    for (&n, &alpha) in h.n.iter().zip(&h.alpha) {
        let q = holder_quotient::<f64>(n, alpha, h.prefactor, &cfg.tolerances)?;
        let jump = eigenvector_jump::<f64>(n.max(2))?;
        let _ = writeln!(
            r,
            "n={n} alpha={}: closed-form {}, numerical {} (relative difference {:.3e}); eigenvector jump {}",
            short(alpha),
            short(q.closed_form),
            short(q.numerical),
            q.relative_difference,
            short(jump)
        );
        rows.push(vec![n as f64, alpha, q.closed_form, q.numerical, q.analytic, q.relative_difference, jump]);
    }
    let header_row: Vec<String> = ["n", "alpha", "closed_form", "numerical", "analytic", "relative_difference", "eigenvector_jump"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    let ns: Vec<f64> = rows.iter().map(|w| w[0]).collect();
    let series = vec![
        ("closed_form".to_string(), rows.iter().map(|w| w[2]).collect()),
        ("numerical".to_string(), rows.iter().map(|w| w[3]).collect()),
    ];
    Ok(Artifacts {
        csv: table_csv(&header_row, &rows),
        plot: plot_data(&ns, &series),
        report: r,
    })
}

fn resolvent(cfg: &RunConfig) -> Result<Artifacts, RunError> {
    let s = &cfg.resolvent;
    let mut rows = Vec::with_capacity(s.t.len());
    for &t in &s.t {
        let w = resolvent_weak_vs_norm(s.m, t, s.k)?;
        rows.push(vec![t, w.pointwise_max, w.norm_quotient]);
    }
    let min_norm = rows.iter().map(|w| w[2]).fold(f64::INFINITY, f64::min);
    let max_point = rows.iter().map(|w| w[1]).fold(0.0, f64::max);
    let mut r = String::new();
    let _ = writeln!(r, "command: {}", cfg.command);
    let _ = writeln!(r, "truncation m={} pointwise K={} samples {}", s.m, s.k, s.t.len());
    let _ = writeln!(r, "min norm quotient: {}", short(min_norm));
    let _ = writeln!(r, "max pointwise quotient: {}", short(max_point));
    let header_row: Vec<String> = ["t", "pointwise_max", "norm_quotient"].iter().map(|s| s.to_string()).collect();
    let ts: Vec<f64> = rows.iter().map(|w| w[0]).collect();
    let series = vec![
        ("pointwise_max".to_string(), rows.iter().map(|w| w[1]).collect()),
        ("norm_quotient".to_string(), rows.iter().map(|w| w[2]).collect()),
    ];
    Ok(Artifacts {
        csv: table_csv(&header_row, &rows),
        plot: plot_data(&ts, &series),
        report: r,
    })
}

fn extend(cfg: &RunConfig, log: &dyn Fn(&str)) -> Result<Artifacts, RunError> {
    let family = family_of(cfg)?;
    let grid = uniform_grid(cfg.t_range.0, cfg.t_range.1, cfg.grid_size)?;
    let mut mu = Vec::with_capacity(cfg.given.len());
    for src in &cfg.given {
        let e = parse_expression(src).map_err(Error::from)?;
        let vals = grid
            .iter()
            .map(|&t| e.eval(t).map(|z| z.re).map_err(Error::from))
            .collect::<Result<Vec<f64>, Error>>()?;
        mu.push(vals);
    }
    log(&format!("tracking {} with {} given branches", family.name(), mu.len()));
    let set = track_on_grid(&family, grid.clone(), cfg.order, &cfg.tolerances)?;
    let ext = extend_parameterization(&set, &mu, cfg.order, &cfg.tolerances)?;

    let mut worst = 0.0f64;
    let mut rows = Vec::with_capacity(grid.len());
    for (k, &t) in grid.iter().enumerate() {
        let mut union: Vec<f64> = mu.iter().map(|m| m[k]).collect();
        union.extend(ext.values.iter().map(|v| v[k]));
        worst = worst.max(counting_defect(&set.values[k], &union));
        let mut row = vec![t];
        row.extend(&union);
        rows.push(row);
    }
    let mut header_row = vec!["t".to_string()];
    header_row.extend((0..mu.len()).map(|j| format!("given_{j}")));
    header_row.extend((0..ext.values.len()).map(|j| format!("completion_{j}")));

    // Eigenvalues of the family itself, to confirm the tracked multiset.
    let mut direct = 0.0f64;
    for (k, &t) in grid.iter().enumerate() {
        let e = hermitian_eig(&crate::family::eval_scaled(&family, t)?)?;
        for (a, b) in e.eigenvalues.iter().zip(&set.values[k]) {
            direct = direct.max((a - b).abs());
        }
    }
    let mut r = String::new();
    header(cfg, &mut r);
    let _ = writeln!(r, "given: {}", cfg.given.join(", "));
    let _ = writeln!(r, "completion branches: {}", ext.values.len());
    let _ = writeln!(r, "counting defect: {worst:.3e}");
    let _ = writeln!(r, "tracked vs direct eigenvalues: {direct:.3e}");
    let series: Vec<(String, Vec<f64>)> = header_row[1..]
        .iter()
        .enumerate()
        .map(|(j, name)| (name.clone(), rows.iter().map(|w| w[j + 1]).collect()))
        .collect();
    Ok(Artifacts {
        csv: table_csv(&header_row, &rows),
        plot: plot_data(&grid, &series),
        report: r,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::parse_config;

    #[test]
    fn short_format() {
        assert_eq!(short(2.0), "2.0");
        assert_eq!(short(0.70710678118654757), "0.7071067812");
        assert_eq!(short(362.03867196751236), "362.038672");
        assert_eq!(location(-1e-17), "0");
        assert_eq!(location(0.5), "0.5");
    }

    #[test]
    fn track_report_for_swap_family() {
        let cfg = parse_config(
            "[run]\ncommand = track\nt_range = -1, 1\ngrid_size = 101\n[family]\nname = expr\ndim = 2\nentries = 0, t, t, 0\n",
        )
        .unwrap();
        let dir = tempfile::tempdir().unwrap();
        let s = run(&cfg, dir.path(), false).unwrap();
        assert!(s.report.contains("crossings: 1 at t=0\n"), "{}", s.report);
        assert!(s.report.contains("(<= 1e-8)") || s.report.contains("(<= 1e-6)"), "{}", s.report);
        let csv = fs::read_to_string(&s.csv).unwrap();
        assert!(csv.starts_with("t,branch_0,branch_1,dbranch_0,dbranch_1\n"));
    }

    #[test]
    fn holder_report_line() {
        let cfg = parse_config("[run]\ncommand = counterexample-holder\n[holder]\nn = 6\nalpha = 0.25\n").unwrap();
        let dir = tempfile::tempdir().unwrap();
        let s = run(&cfg, dir.path(), false).unwrap();
        assert!(s.report.contains("closed-form 2.0, numerical 2.0"), "{}", s.report);
    }

    #[test]
    fn numerical_errors_exit_3() {
        let e: RunError = Error::RankDrift { t: 0.0, expected: 1, found: 2 }.into();
        assert_eq!(e.exit_code(), 3);
        let e: RunError = Error::InvalidArgument("x".into()).into();
        assert_eq!(e.exit_code(), 2);
    }
}
