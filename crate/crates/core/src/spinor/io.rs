use std::fmt::Write;

use num_complex::Complex64;

use super::ColumnField;
use crate::error::{Error, Result};
use crate::grid::{fmt_float, Grid, GridField};

/// Coordinates must agree with the grid to this fraction of the spacing.
const COORD_TOL: f64 = 1e-6;

/// One whitespace-separated record per grid point:
/// `x [y z] Re(psi1) Im(psi1) [Re(psi2) Im(psi2)]`.
pub fn write_spinor_file(field: &ColumnField) -> String {
    let grid = field.grid();
    let mut out = String::new();
    let names = ["x", "y", "z"];
    out.push('#');
    for n in &names[..grid.dim()] {
        write!(out, " {n}").unwrap();
    }
    for k in 1..=field.components().len() {
        write!(out, " re_psi{k} im_psi{k}").unwrap();
    }
    out.push('\n');
    for i in 0..grid.len() {
        let p = grid.point(i);
        let mut cells: Vec<String> = (0..grid.dim()).map(|a| fmt_float(p[a])).collect();
        for c in field.components() {
            cells.push(fmt_float(c[i].re));
            cells.push(fmt_float(c[i].im));
        }
        out.push_str(&cells.join(" "));
        out.push('\n');
    }
    out
}

/// Parses a spinor file onto `grid`. Records must list the grid points in
/// storage order (x fastest); blank lines and `#` comments are skipped.
pub fn read_spinor_file(text: &str, grid: Grid) -> Result<ColumnField> {
    let dim = grid.dim();
    let mut width = None;
    let mut values: Vec<Vec<Complex64>> = Vec::new();
    let mut count = 0;
    for (n, raw) in text.lines().enumerate() {
        let line = n + 1;
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let nums = body
            .split_whitespace()
            .map(|t| {
                t.parse::<f64>().map_err(|_| Error::Parse {
                    line,
                    message: format!("`{t}` is not a number"),
                })
            })
            .collect::<Result<Vec<f64>>>()?;
        let w = *width.get_or_insert(nums.len());
        if nums.len() != w || (w != dim + 2 && w != dim + 4) {
            return Err(Error::Parse {
                line,
                message: format!("expected {} or {} columns, got {}", dim + 2, dim + 4, nums.len()),
            });
        }
        if count >= grid.len() {
            return Err(Error::Parse {
                line,
                message: format!("more records than the {} grid points", grid.len()),
            });
        }
        let p = grid.point(count);
        for a in 0..dim {
            if (nums[a] - p[a]).abs() > COORD_TOL * grid.spacing(a) {
                return Err(Error::Parse {
                    line,
                    message: format!("coordinate {} does not match grid point {}", nums[a], p[a]),
                });
            }
        }
        values.push(nums[dim..].chunks(2).map(|c| Complex64::new(c[0], c[1])).collect());
        count += 1;
    }
    if count != grid.len() {
        return Err(Error::Parse {
            line: text.lines().count(),
            message: format!("expected {} records, got {count}", grid.len()),
        });
    }
    let ncomp = values[0].len();
    let comps = (0..ncomp)
        .map(|k| GridField::from_index(grid, |i| values[i][k]))
        .collect();
    ColumnField::from_components(comps)
}
