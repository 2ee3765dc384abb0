//! Output files: the solution CSV, the face grid, and append-only bundle
//! directories.

use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use sgcrack_core::fields::{
    classical_face_stresses, classical_reference, crack_face_displacement, crack_face_stresses,
};
use sgcrack_core::spectral::eval_solution;
use sgcrack_core::{Coefficients, Face, Params};

/// Column names of `solution.csv`, in order. All quantities are
/// nondimensional: stresses over `mu`, displacements over `ell`.
pub const SOLUTION_COLUMNS: [&str; 16] = [
    "t",
    "ReGp",
    "ImGp",
    "ReQ",
    "ImQ",
    "s12_plus",
    "s12_minus",
    "s22_plus",
    "s22_minus",
    "u1_plus",
    "u1_minus",
    "u2_plus",
    "u2_minus",
    "s12_classical",
    "s22_classical",
    "u2jump_classical",
];

pub const SOLUTION_FILE: &str = "solution.csv";
pub const MANIFEST_FILE: &str = "manifest.toml";
pub const DIAGNOSTICS_FILE: &str = "diagnostics.txt";
pub const SUMMARY_FILE: &str = "summary.csv";
pub const CONVERGENCE_FILE: &str = "convergence.csv";
pub const ORACLE_FILE: &str = "oracle.csv";

/// Chebyshev–Lobatto points on `[-1, 1]`, increasing, mirrored exactly about
/// the centre, with exact endpoints (and an exact `0` for odd counts).
pub fn face_grid(points: usize) -> Vec<f64> {
    assert!(points >= 2, "a face grid needs both endpoints");
    let last = points - 1;
    let mut grid = vec![0.0; points];
    for i in 0..points.div_ceil(2) {
        let t = -(std::f64::consts::PI * i as f64 / last as f64).cos();
        grid[i] = t;
        grid[last - i] = -t;
    }
    grid[0] = -1.0;
    grid[last] = 1.0;
    if points % 2 == 1 {
        grid[last / 2] = 0.0;
    }
    grid
}

/// Format a float as the shortest scientific string that parses back to the
/// same value.
pub fn fmt_float(x: f64) -> String {
    format!("{x:e}")
}

/// One row of the solution CSV.
pub fn solution_row(set: &Coefficients, params: &Params, t: f64) -> Result<[f64; 16]> {
    let jump = eval_solution(set, t)?;
    let plus = crack_face_stresses(set, params, t, Face::Plus)?;
    let minus = crack_face_stresses(set, params, t, Face::Minus)?;
    let (u1p, u2p) = crack_face_displacement(set, params, t, Face::Plus)?;
    let (u1m, u2m) = crack_face_displacement(set, params, t, Face::Minus)?;
    let classical = classical_face_stresses(params, t, Face::Plus)?;
    // the classical opening vanishes at the tips, where its formula is not defined
    let u2jump_classical = if t.abs() < 1.0 {
        classical_reference(params, t)?.u2_jump
    } else {
        0.0
    };
    Ok([
        t,
        jump.g_prime.re,
        jump.g_prime.im,
        jump.q.re,
        jump.q.im,
        plus.sigma12,
        minus.sigma12,
        plus.sigma22,
        minus.sigma22,
        u1p,
        u1m,
        u2p,
        u2m,
        classical.sigma12,
        classical.sigma22,
        u2jump_classical,
    ])
}

/// Evaluate every column on `grid`.
pub fn solution_table(set: &Coefficients, params: &Params, grid: &[f64]) -> Result<Vec<[f64; 16]>> {
    grid.iter().map(|&t| solution_row(set, params, t)).collect()
}

/// Write a header row followed by numeric rows.
pub fn write_csv<R: AsRef<[String]>>(path: &Path, header: &[&str], rows: impl IntoIterator<Item = R>) -> Result<()> {
    let mut w = csv::Writer::from_path(path).with_context(|| format!("creating {}", path.display()))?;
    w.write_record(header)?;
    for row in rows {
        w.write_record(row.as_ref())?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_solution_csv(path: &Path, rows: &[[f64; 16]]) -> Result<()> {
    write_csv(
        path,
        &SOLUTION_COLUMNS,
        rows.iter().map(|r| r.iter().map(|&x| fmt_float(x)).collect::<Vec<_>>()),
    )
}

/// Read a CSV back as a header and rows of floats.
pub fn read_numeric_csv(path: &Path) -> Result<(Vec<String>, Vec<Vec<f64>>)> {
    let mut r = csv::Reader::from_path(path).with_context(|| format!("reading {}", path.display()))?;
    let header = r.headers()?.iter().map(str::to_string).collect();
    let mut rows = Vec::new();
    for rec in r.records() {
        let rec = rec?;
        let row = rec
            .iter()
            .map(|s| {
                s.parse::<f64>()
                    .with_context(|| format!("value `{s}` in {}", path.display()))
            })
            .collect::<Result<Vec<_>>>()?;
        rows.push(row);
    }
    Ok((header, rows))
}

/// Create a fresh output directory. Existing directories are never reused,
/// so earlier results are never overwritten.
pub fn create_bundle_dir(dir: &Path) -> Result<PathBuf> {
    if let Some(parent) = dir.parent().filter(|p| !p.as_os_str().is_empty()) {
        fs::create_dir_all(parent).with_context(|| format!("creating {}", parent.display()))?;
    }
    match fs::create_dir(dir) {
        Ok(()) => Ok(dir.to_path_buf()),
        Err(e) if e.kind() == io::ErrorKind::AlreadyExists => {
            bail!(
                "output directory {} already exists; refusing to overwrite it",
                dir.display()
            )
        }
        Err(e) => Err(e).with_context(|| format!("creating {}", dir.display())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_is_symmetric_with_exact_endpoints() {
        for n in [16, 17, 201] {
            let g = face_grid(n);
            assert_eq!(g.len(), n);
            assert_eq!((g[0], g[n - 1]), (-1.0, 1.0));
            assert!(g.windows(2).all(|w| w[0] < w[1]));
            for i in 0..n {
                assert_eq!(g[i], -g[n - 1 - i]);
            }
        }
        assert_eq!(face_grid(201)[100], 0.0);
    }

    #[test]
    fn floats_round_trip_through_text() {
        for x in [0.1, -2.5e-300, 1.0 / 3.0, 26.3e9, 0.0, f64::MIN_POSITIVE] {
            assert_eq!(fmt_float(x).parse::<f64>().unwrap().to_bits(), x.to_bits());
        }
    }
}
