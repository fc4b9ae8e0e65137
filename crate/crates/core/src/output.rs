//! CSV snapshots and JSON manifests, written atomically.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::error::{Error, Result};

/// Shortest decimal that parses back to the same `f64`; `−0` prints as `0.0`.
pub fn fmt_f64(v: f64) -> String {
    format!("{:?}", if v == 0.0 { 0.0 } else { v })
}

/// `<runid>_t<time>.csv`
pub fn snapshot_name(run_id: &str, t: f64) -> String {
    format!("{run_id}_t{}.csv", fmt_f64(t))
}

/// `<runid>_manifest.json`
pub fn manifest_name(run_id: &str) -> String {
    format!("{run_id}_manifest.json")
}

/// Renders named columns of equal length as CSV with a header row.
pub fn csv_string(columns: &[(&str, &[f64])]) -> Result<String> {
    let rows = columns.first().map_or(0, |c| c.1.len());
    if columns.iter().any(|c| c.1.len() != rows) {
        return Err(Error::Config("CSV columns differ in length".into()));
    }
    let mut out = columns.iter().map(|c| c.0).collect::<Vec<_>>().join(",");
    out.push('\n');
    for i in 0..rows {
        let row: Vec<String> = columns.iter().map(|c| fmt_f64(c.1[i])).collect();
        out.push_str(&row.join(","));
        out.push('\n');
    }
    Ok(out)
}

/// Writes through a temporary sibling and renames it into place.
pub fn write_atomic(path: &Path, contents: &[u8]) -> Result<()> {
    let dir = path
        .parent()
        .filter(|p| !p.as_os_str().is_empty())
        .unwrap_or(Path::new("."));
    fs::create_dir_all(dir)?;
    let name = path
        .file_name()
        .ok_or_else(|| Error::Config(format!("not a file path: {}", path.display())))?;
    let tmp: PathBuf = dir.join(format!(".{}.tmp", name.to_string_lossy()));
    {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(contents)?;
        f.sync_all()?;
    }
    fs::rename(&tmp, path)?;
    Ok(())
}

pub fn write_csv(path: &Path, columns: &[(&str, &[f64])]) -> Result<()> {
    write_atomic(path, csv_string(columns)?.as_bytes())
}

/// Pretty JSON with a trailing newline; key order follows the type.
pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    write_atomic(path, s.as_bytes())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_round_trip() {
        for v in [0.1, -2.5, 1e-300, 12.0, 1.0 / 3.0, f64::MAX] {
            assert_eq!(fmt_f64(v).parse::<f64>().unwrap(), v);
        }
        assert_eq!(fmt_f64(0.1), "0.1");
        assert_eq!(fmt_f64(-0.0), "0.0");
        assert_eq!(snapshot_name("run", 16.0), "run_t16.0.csv");
        assert_eq!(snapshot_name("run", -75.0), "run_t-75.0.csv");
    }

    #[test]
    fn csv_layout() {
        let s = csv_string(&[("x", &[0.0, 0.5]), ("u", &[1.0, 2.0])]).unwrap();
        assert_eq!(s, "x,u\n0.0,1.0\n0.5,2.0\n");
        assert!(csv_string(&[("x", &[0.0]), ("u", &[])]).is_err());
    }
}
