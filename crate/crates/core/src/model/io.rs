use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::model::radial::Radial;

/// Two-column text: `#`-prefixed header lines, then `node value` rows.
pub fn to_columns<S>(f: &Radial<S>, header: &[(&str, String)]) -> String {
    let mut out = String::new();
    for (key, value) in header {
        writeln!(out, "# {key} = {value}").unwrap();
    }
    let grid = f.grid();
    writeln!(out, "# order = {}", grid.order()).unwrap();
    let breaks: Vec<String> = grid.breaks().iter().map(|b| format!("{b:e}")).collect();
    writeln!(out, "# breaks = {}", breaks.join(",")).unwrap();
    for (x, v) in f.nodes().iter().zip(f.values()) {
        writeln!(out, "{x:.17e} {v:.17e}").unwrap();
    }
    out
}

/// Reads the first two numeric columns, skipping `#` comments and blank lines.
pub fn read_columns(text: &str) -> Result<(Vec<f64>, Vec<f64>)> {
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut cols = line.split_whitespace().map(str::parse::<f64>);
        match (cols.next(), cols.next()) {
            (Some(Ok(x)), Some(Ok(y))) => {
                xs.push(x);
                ys.push(y);
            }
            _ => {
                return Err(Error::Parse(format!(
                    "line {}: expected two numeric columns",
                    lineno + 1
                )))
            }
        }
    }
    Ok((xs, ys))
}

/// Writes `contents` to a sibling temp file and renames it into place.
pub fn write_atomic(path: &Path, contents: &[u8]) -> Result<()> {
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty());
    if let Some(dir) = dir {
        fs::create_dir_all(dir)?;
    }
    let name = path
        .file_name()
        .ok_or_else(|| Error::InvalidParameter {
            name: "path",
            reason: format!("{} has no file name", path.display()),
        })?
        .to_string_lossy();
    let tmp = path.with_file_name(format!(".{name}.tmp"));
    fs::write(&tmp, contents)?;
    fs::rename(&tmp, path)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::grid::RadialGrid;
    use crate::model::radial::RadialFunction;

    #[test]
    fn columns_round_trip() {
        let grid = RadialGrid::uniform(0.0, 2.0, 2, 4).unwrap();
        let f = RadialFunction::from_fn(grid, |r| r.sin());
        let text = to_columns(&f, &[("quantity", "sin".into())]);
        assert!(text.starts_with("# quantity = sin\n# order = 4\n"));
        let (x, y) = read_columns(&text).unwrap();
        assert_eq!(x, f.nodes());
        assert_eq!(y, f.values());
    }

    #[test]
    fn rejects_ragged_rows() {
        assert!(read_columns("1 2\n3\n").is_err());
    }

    #[test]
    fn atomic_write_replaces_file() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("out/a.txt");
        write_atomic(&path, b"one").unwrap();
        write_atomic(&path, b"two").unwrap();
        assert_eq!(fs::read_to_string(&path).unwrap(), "two");
        assert_eq!(fs::read_dir(path.parent().unwrap()).unwrap().count(), 1);
    }
}
