//! CSV output: header row, LF line endings, 17 significant digits.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use fracdyn::integrate::Trajectory;
use fracdyn::processes::SamplePath;

use crate::error::Result;

/// 17 significant digits, locale-independent.
pub fn format_float(x: f64) -> String {
    format!("{x:.16e}")
}

pub enum Field {
    Index(usize),
    Value(f64),
    Text(String),
}

pub fn render(header: &str, rows: impl IntoIterator<Item = Vec<Field>>) -> String {
    let mut out = String::new();
    out.push_str(header);
    out.push('\n');
    for row in rows {
        let mut first = true;
        for field in row {
            if !first {
                out.push(',');
            }
            first = false;
            match field {
                Field::Index(n) => {
                    let _ = write!(out, "{n}");
                }
                Field::Value(x) => out.push_str(&format_float(x)),
                Field::Text(s) => out.push_str(&s),
            }
        }
        out.push('\n');
    }
    out
}

pub fn write_file(path: &Path, content: &str) -> Result<()> {
    if let Some(parent) = path.parent() {
        fs::create_dir_all(parent)?;
    }
    fs::write(path, content)?;
    Ok(())
}

/// Trajectory rows `n,s,x_1..x_n` (named `q,p` by the caller's header).
pub fn trajectory_rows(trajectory: &Trajectory) -> impl Iterator<Item = Vec<Field>> + '_ {
    let grid = trajectory.grid();
    trajectory.states().iter().enumerate().map(move |(n, state)| {
        let mut row = vec![Field::Index(n), Field::Value(grid.point(n))];
        row.extend(state.iter().map(|&x| Field::Value(x)));
        row
    })
}

/// Driving-path rows `n,s,increment,value`.
pub fn path_rows(path: &impl SamplePath) -> Vec<Vec<Field>> {
    let grid = path.grid();
    let values = path.values();
    (0..=grid.n_steps())
        .map(|n| {
            let increment = if n == 0 { 0.0 } else { path.increments()[n - 1] };
            vec![
                Field::Index(n),
                Field::Value(grid.point(n)),
                Field::Value(increment),
                Field::Value(values[n]),
            ]
        })
        .collect()
}
