//! Scenario execution: single runs, parameter sweeps, convergence studies
//! and the oracle cross-check.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::thread;

use anyhow::{bail, Context, Result};
use sgcrack_core::fields::crack_face_displacement;
use sgcrack_core::oracle::{compare_solutions, nystrom_solve_mode, Discrepancy, SpectralField};
use sgcrack_core::spectral::ModeSolution;
use sgcrack_core::spectral::{equation_residuals, eval_solution, solve_problem, tip_row_residuals, EquationResiduals};
use sgcrack_core::{Coefficients, Face, Mode, Params, Solution};

use crate::config::{Resolved, RunConfig, Value};
use crate::output::{
    create_bundle_dir, face_grid, fmt_float, solution_table, write_csv, write_solution_csv, CONVERGENCE_FILE,
    DIAGNOSTICS_FILE, MANIFEST_FILE, ORACLE_FILE, SOLUTION_FILE, SUMMARY_FILE,
};

/// Points at which the governing equations are checked: uniform on
/// `|t| <= 0.9`.
pub const RESIDUAL_GRID_POINTS: usize = 181;
pub const RESIDUAL_GRID_HALF_WIDTH: f64 = 0.9;
/// The oracle comparison grid is uniform on `|t| <= 0.95`.
pub const ORACLE_GRID_HALF_WIDTH: f64 = 0.95;
/// Noise floor below which a growing residual is not flagged.
pub const RESIDUAL_NOISE_FLOOR: f64 = 1e-12;

/// Limits above which a run exits with a nonzero status.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Thresholds {
    /// Tip rows and jump values at `t = ±1`.
    pub tip: f64,
    /// Residual of the governing equations on `|t| <= 0.9`.
    pub residual: f64,
    /// Relative L∞ discrepancy against the Nyström oracle.
    pub oracle: f64,
}

impl Default for Thresholds {
    fn default() -> Self {
        Self {
            tip: 1e-8,
            residual: 1e-5,
            oracle: 5e-3,
        }
    }
}

/// One thresholded quantity.
#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub limit: f64,
}

impl Check {
    fn new(name: impl Into<String>, value: f64, limit: f64) -> Self {
        Self {
            name: name.into(),
            value,
            limit,
        }
    }

    /// NaN never passes.
    pub fn passed(&self) -> bool {
        self.value <= self.limit
    }
}

/// Per-mode solver diagnostics.
#[derive(Debug, Clone, PartialEq)]
pub struct ModeDiagnostics {
    pub mode: Mode,
    pub unknowns: usize,
    pub condition: f64,
    pub relative_residual: f64,
    /// Residuals of the two tip rows at `t = +1` and `t = -1`.
    pub tip_rows: [f64; 2],
}

/// Diagnostics of one solved scenario.
#[derive(Debug, Clone, PartialEq)]
pub struct Diagnostics {
    pub modes: [ModeDiagnostics; 2],
    /// `max |G(±1)|, |G'(±1)|, |Q(±1)|` over both components.
    pub tip_values: f64,
    pub equations: EquationResiduals<f64>,
    pub checks: Vec<Check>,
}

impl Diagnostics {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(Check::passed)
    }

    pub fn tip_rows_max(&self) -> f64 {
        self.modes
            .iter()
            .flat_map(|m| m.tip_rows.iter())
            .fold(0.0_f64, |a, r| a.max(r.abs()))
    }

    pub fn render(&self) -> String {
        let mut s = String::new();
        for m in &self.modes {
            let key = match m.mode {
                Mode::I => "mode_i",
                Mode::II => "mode_ii",
            };
            let _ = writeln!(s, "{key}.unknowns = {}", m.unknowns);
            let _ = writeln!(s, "{key}.condition = {}", fmt_float(m.condition));
            let _ = writeln!(s, "{key}.relative_residual = {}", fmt_float(m.relative_residual));
            let _ = writeln!(s, "{key}.tip_row_plus = {}", fmt_float(m.tip_rows[0]));
            let _ = writeln!(s, "{key}.tip_row_minus = {}", fmt_float(m.tip_rows[1]));
        }
        let _ = writeln!(s, "tip_values_max = {}", fmt_float(self.tip_values));
        let e = &self.equations;
        let _ = writeln!(s, "equation.shear_balance = {}", fmt_float(e.shear_balance));
        let _ = writeln!(s, "equation.normal_balance = {}", fmt_float(e.normal_balance));
        let _ = writeln!(s, "equation.im_q_relation = {}", fmt_float(e.im_q_relation));
        let _ = writeln!(s, "equation.re_q_relation = {}", fmt_float(e.re_q_relation));
        render_checks(&mut s, &self.checks);
        s
    }
}

fn render_checks(s: &mut String, checks: &[Check]) {
    for c in checks {
        let status = if c.passed() { "pass" } else { "FAIL" };
        let _ = writeln!(
            s,
            "check.{} = {status} (value {}, limit {})",
            c.name,
            fmt_float(c.value),
            fmt_float(c.limit)
        );
    }
}

/// Uniform grid of `n` points on `[-h, h]`.
pub fn symmetric_grid(h: f64, n: usize) -> Vec<f64> {
    (0..n).map(|i| -h + 2.0 * h * i as f64 / (n - 1) as f64).collect()
}

/// Diagnose a solved problem against the thresholds.
pub fn diagnose(params: &Params, sol: &Solution, thresholds: &Thresholds) -> Result<Diagnostics> {
    let kappa = params.kappa();
    let mode_diag = |m: &ModeSolution<f64>| ModeDiagnostics {
        mode: m.coefficients.mode,
        unknowns: 2 * m.coefficients.n + 4,
        condition: m.condition,
        relative_residual: m.relative_residual,
        tip_rows: tip_row_residuals(&m.coefficients, kappa),
    };
    let modes = [mode_diag(&sol.mode_i), mode_diag(&sol.mode_ii)];
    let mut tip_values = 0.0_f64;
    for t in [-1.0, 1.0] {
        let v = eval_solution(&sol.coefficients, t)?;
        for z in [v.g, v.g_prime, v.q] {
            tip_values = tip_values.max(z.re.abs()).max(z.im.abs());
        }
    }
    let grid = symmetric_grid(RESIDUAL_GRID_HALF_WIDTH, RESIDUAL_GRID_POINTS);
    let equations = equation_residuals(&sol.coefficients, params, &grid)?;
    let mut d = Diagnostics {
        modes,
        tip_values,
        equations,
        checks: Vec::new(),
    };
    d.checks = vec![
        Check::new("tip_rows", d.tip_rows_max(), thresholds.tip),
        Check::new("tip_values", tip_values, thresholds.tip),
        Check::new("equation_residual", equations.max(), thresholds.residual),
    ];
    Ok(d)
}

/// Scalar observables of one run, used by sweep summaries and convergence
/// reports.
#[derive(Debug, Clone, PartialEq)]
pub struct Observables {
    /// `u2+ - u2-` at `t = 0`.
    pub opening_at_centre: f64,
    /// `max |sigma22±|` over the face grid.
    pub max_abs_s22: f64,
    /// `max |sigma12±|` over the face grid.
    pub max_abs_s12: f64,
}

fn observables(set: &Coefficients, params: &Params, rows: &[[f64; 16]]) -> Result<Observables> {
    let (_, up) = crack_face_displacement(set, params, 0.0, Face::Plus)?;
    let (_, um) = crack_face_displacement(set, params, 0.0, Face::Minus)?;
    let col_max = |cols: [usize; 2]| {
        rows.iter()
            .flat_map(|r| cols.map(|c| r[c].abs()))
            .fold(0.0_f64, f64::max)
    };
    Ok(Observables {
        opening_at_centre: up - um,
        max_abs_s22: col_max([7, 8]),
        max_abs_s12: col_max([5, 6]),
    })
}

/// Result of [`run_scenario`].
#[derive(Debug, Clone)]
pub struct BundleReport {
    pub directory: PathBuf,
    pub resolved: Resolved,
    pub diagnostics: Diagnostics,
    pub observables: Observables,
}

impl BundleReport {
    pub fn passed(&self) -> bool {
        self.diagnostics.passed()
    }
}

fn derived_values(params: &Params) -> Vec<(&'static str, Value)> {
    let g = params.gammas;
    vec![
        ("gamma1", Value::Float(g.g1)),
        ("gamma2", Value::Float(g.g2)),
        ("gamma3", Value::Float(g.g3)),
        ("gamma4", Value::Float(g.g4)),
        ("kappa", Value::Float(params.kappa())),
    ]
}

fn solve(resolved: &Resolved) -> Result<Solution> {
    solve_problem(&resolved.params, resolved.order, resolved.quad_nodes)
        .with_context(|| format!("solving the spectral system at N = {}", resolved.order))
}

/// Solve both modes, evaluate the face fields and the classical reference on
/// the grid, and write `solution.csv`, `manifest.toml` and
/// `diagnostics.txt` into a new directory (`out`, or the configured one).
pub fn run_scenario(config: &RunConfig, out: Option<&Path>, thresholds: &Thresholds) -> Result<BundleReport> {
    let config = match out {
        Some(dir) => config.with_directory(dir),
        None => config.clone(),
    };
    let resolved = config.resolve()?;
    let sol = solve(&resolved)?;
    let diagnostics = diagnose(&resolved.params, &sol, thresholds)?;
    let rows = solution_table(&sol.coefficients, &resolved.params, &face_grid(resolved.grid_points))?;
    let observables = observables(&sol.coefficients, &resolved.params, &rows)?;

    let dir = create_bundle_dir(&resolved.directory)?;
    write_solution_csv(&dir.join(SOLUTION_FILE), &rows)?;
    fs::write(
        dir.join(MANIFEST_FILE),
        config.to_toml_string(&derived_values(&resolved.params)),
    )?;
    fs::write(dir.join(DIAGNOSTICS_FILE), diagnostics.render())?;
    Ok(BundleReport {
        directory: dir,
        resolved,
        diagnostics,
        observables,
    })
}

/// Name of the bundle subdirectory for entry `index` of a sweep.
fn entry_dir(root: &Path, index: usize, leaf: &str, value: &str) -> PathBuf {
    root.join(format!("{index:02}_{leaf}_{value}"))
}

fn run_entries(configs: Vec<(RunConfig, PathBuf)>, thresholds: &Thresholds) -> Result<Vec<BundleReport>> {
    // entries are independent: each writes only to its own subdirectory
    thread::scope(|s| {
        let handles: Vec<_> = configs
            .iter()
            .map(|(cfg, dir)| s.spawn(move || run_scenario(cfg, Some(dir), thresholds)))
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().unwrap_or_else(|_| bail!("scenario thread panicked")))
            .collect()
    })
}

/// Result of [`sweep`].
#[derive(Debug, Clone)]
pub struct SweepReport {
    pub directory: PathBuf,
    pub key: &'static str,
    pub values: Vec<f64>,
    pub bundles: Vec<BundleReport>,
}

impl SweepReport {
    pub fn passed(&self) -> bool {
        self.bundles.iter().all(BundleReport::passed)
    }
}

pub const SUMMARY_COLUMNS: [&str; 9] = [
    "parameter",
    "value",
    "opening_t0",
    "max_abs_s22",
    "max_abs_s12",
    "tip_rows_max",
    "tip_values_max",
    "equation_residual",
    "bundle",
];

/// Run one bundle per value of `path` and write `summary.csv`.
pub fn sweep(
    config: &RunConfig,
    path: &str,
    values: &[f64],
    out: Option<&Path>,
    thresholds: &Thresholds,
) -> Result<SweepReport> {
    if values.is_empty() {
        bail!("sweep needs at least one value");
    }
    let key = crate::config::resolve_parameter_path(path)?;
    let leaf = key.rsplit_once('.').map_or(key, |(_, l)| l);
    let root = create_bundle_dir(&root_directory(config, out)?)?;
    let mut entries = Vec::with_capacity(values.len());
    for (i, &v) in values.iter().enumerate() {
        let cfg = config.with_parameter(key, v)?;
        cfg.resolve()?;
        entries.push((cfg, entry_dir(&root, i, leaf, &v.to_string())));
    }
    let bundles = run_entries(entries, thresholds)?;
    let rows = values.iter().zip(&bundles).map(|(v, b)| {
        let d = &b.diagnostics;
        let o = &b.observables;
        vec![
            key.to_string(),
            fmt_float(*v),
            fmt_float(o.opening_at_centre),
            fmt_float(o.max_abs_s22),
            fmt_float(o.max_abs_s12),
            fmt_float(d.tip_rows_max()),
            fmt_float(d.tip_values),
            fmt_float(d.equations.max()),
            dir_name(&b.directory),
        ]
    });
    write_csv(&root.join(SUMMARY_FILE), &SUMMARY_COLUMNS, rows)?;
    Ok(SweepReport {
        directory: root,
        key,
        values: values.to_vec(),
        bundles,
    })
}

fn dir_name(p: &Path) -> String {
    p.file_name()
        .map_or_else(String::new, |n| n.to_string_lossy().into_owned())
}

fn root_directory(config: &RunConfig, out: Option<&Path>) -> Result<PathBuf> {
    Ok(match out {
        Some(dir) => dir.to_path_buf(),
        None => config.resolve()?.directory,
    })
}

/// One row of a convergence report.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceRow {
    pub order: usize,
    pub equation_residual: f64,
    pub max_abs_s22: f64,
    pub max_abs_s12: f64,
    pub tip_rows_max: f64,
    pub condition_max: f64,
    /// Residual grew by more than the noise floor since the previous order.
    pub non_monotone: bool,
}

/// Result of [`convergence_study`].
#[derive(Debug, Clone)]
pub struct ConvergenceReport {
    pub directory: PathBuf,
    pub rows: Vec<ConvergenceRow>,
    pub bundles: Vec<BundleReport>,
}

impl ConvergenceReport {
    pub fn passed(&self) -> bool {
        self.bundles.iter().all(BundleReport::passed)
    }
}

pub const CONVERGENCE_COLUMNS: [&str; 7] = [
    "N",
    "equation_residual",
    "max_abs_s22",
    "max_abs_s12",
    "tip_rows_max",
    "condition_max",
    "non_monotone",
];

/// Run one bundle per polynomial order and write `convergence.csv`.
pub fn convergence_study(
    config: &RunConfig,
    orders: &[usize],
    out: Option<&Path>,
    thresholds: &Thresholds,
) -> Result<ConvergenceReport> {
    if orders.is_empty() {
        bail!("convergence study needs at least one order");
    }
    if !orders.windows(2).all(|w| w[0] < w[1]) {
        bail!("orders must be strictly increasing, got {orders:?}");
    }
    let root = create_bundle_dir(&root_directory(config, out)?)?;
    let mut entries = Vec::with_capacity(orders.len());
    for (i, &n) in orders.iter().enumerate() {
        let mut cfg = config.with_parameter("numerics.N", n as f64)?;
        // an explicit quadrature size must keep up with the order
        if let Some(Value::Int(q)) = cfg.get("numerics.quad_nodes").cloned() {
            cfg.set("numerics.quad_nodes", Value::Int(q.max(n as i64 + 4)))?;
        }
        cfg.resolve()?;
        entries.push((cfg, entry_dir(&root, i, "N", &n.to_string())));
    }
    let bundles = run_entries(entries, thresholds)?;
    let mut rows: Vec<ConvergenceRow> = Vec::with_capacity(bundles.len());
    for (b, &n) in bundles.iter().zip(orders) {
        let d = &b.diagnostics;
        let residual = d.equations.max();
        let non_monotone = rows
            .last()
            .is_some_and(|prev| residual > prev.equation_residual + RESIDUAL_NOISE_FLOOR);
        rows.push(ConvergenceRow {
            order: n,
            equation_residual: residual,
            max_abs_s22: b.observables.max_abs_s22,
            max_abs_s12: b.observables.max_abs_s12,
            tip_rows_max: d.tip_rows_max(),
            condition_max: d.modes[0].condition.max(d.modes[1].condition),
            non_monotone,
        });
    }
    let csv_rows = rows.iter().map(|r| {
        vec![
            r.order.to_string(),
            fmt_float(r.equation_residual),
            fmt_float(r.max_abs_s22),
            fmt_float(r.max_abs_s12),
            fmt_float(r.tip_rows_max),
            fmt_float(r.condition_max),
            r.non_monotone.to_string(),
        ]
    });
    write_csv(&root.join(CONVERGENCE_FILE), &CONVERGENCE_COLUMNS, csv_rows)?;
    Ok(ConvergenceReport {
        directory: root,
        rows,
        bundles,
    })
}

/// Result of [`oracle_check`].
#[derive(Debug, Clone)]
pub struct OracleReport {
    pub directory: PathBuf,
    pub nodes: usize,
    pub discrepancies: [(Mode, Discrepancy<f64>); 2],
    pub checks: Vec<Check>,
}

impl OracleReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(Check::passed)
    }
}

pub const ORACLE_COLUMNS: [&str; 7] = ["mode", "N", "M", "g_linf", "g_l2", "q_linf", "q_l2"];

/// Compare the spectral solution with the Nyström oracle in both modes and
/// write `oracle.csv`, `manifest.toml` and `diagnostics.txt`.
pub fn oracle_check(
    config: &RunConfig,
    nodes: Option<usize>,
    out: Option<&Path>,
    thresholds: &Thresholds,
) -> Result<OracleReport> {
    let mut config = match out {
        Some(dir) => config.with_directory(dir),
        None => config.clone(),
    };
    if let Some(m) = nodes {
        config.set("numerics.oracle_nodes", Value::Int(m as i64))?;
    }
    let resolved = config.resolve()?;
    let sol = solve(&resolved)?;
    let grid = symmetric_grid(ORACLE_GRID_HALF_WIDTH, resolved.grid_points);
    let m = resolved.oracle_nodes;
    let compare = |mode: Mode| -> Result<Discrepancy<f64>> {
        let oracle = nystrom_solve_mode(&resolved.params, mode, m)
            .with_context(|| format!("Nyström solve of mode {mode} with M = {m}"))?;
        let field = SpectralField {
            coefficients: &sol.coefficients,
            mode,
        };
        Ok(compare_solutions(&field, &oracle, &grid)?)
    };
    let discrepancies = [(Mode::I, compare(Mode::I)?), (Mode::II, compare(Mode::II)?)];
    let checks = discrepancies
        .iter()
        .map(|(mode, d)| Check::new(format!("oracle_mode_{mode}"), d.max_linf(), thresholds.oracle))
        .collect::<Vec<_>>();

    let dir = create_bundle_dir(&resolved.directory)?;
    let rows = discrepancies.iter().map(|(mode, d)| {
        vec![
            mode.to_string(),
            resolved.order.to_string(),
            m.to_string(),
            fmt_float(d.g_linf),
            fmt_float(d.g_l2),
            fmt_float(d.q_linf),
            fmt_float(d.q_l2),
        ]
    });
    write_csv(&dir.join(ORACLE_FILE), &ORACLE_COLUMNS, rows)?;
    fs::write(
        dir.join(MANIFEST_FILE),
        config.to_toml_string(&derived_values(&resolved.params)),
    )?;
    let mut text = String::new();
    render_checks(&mut text, &checks);
    fs::write(dir.join(DIAGNOSTICS_FILE), text)?;
    Ok(OracleReport {
        directory: dir,
        nodes: m,
        discrepancies,
        checks,
    })
}
