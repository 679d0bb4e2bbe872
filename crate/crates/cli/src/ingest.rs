//! Reading and writing the plain-text data formats.
//!
//! Series: one value per line, or a single-column CSV whose first line may be
//! a header. Surfaces: comma-delimited rows of equal length. Blank lines are
//! ignored in both.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use mfdma_core::{Series, Surface};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum SeriesFormat {
    /// One value per line, no header.
    Text,
    /// Single-column CSV, optional header on line 1.
    Csv,
}

impl SeriesFormat {
    /// `csv` for a `.csv` extension, `text` otherwise.
    pub fn from_path(path: &Path) -> SeriesFormat {
        match path.extension().and_then(|e| e.to_str()) {
            Some(ext) if ext.eq_ignore_ascii_case("csv") => SeriesFormat::Csv,
            _ => SeriesFormat::Text,
        }
    }
}

pub fn read_bytes(path: &Path) -> Result<Vec<u8>> {
    fs::read(path).map_err(|e| CliError::io(path, e))
}

fn as_text<'a>(path: &Path, bytes: &'a [u8]) -> Result<&'a str> {
    std::str::from_utf8(bytes).map_err(|e| {
        let line = bytes[..e.valid_up_to()].iter().filter(|&&b| b == b'\n').count() + 1;
        CliError::Parse {
            path: path.to_path_buf(),
            line,
            message: "invalid UTF-8".into(),
        }
    })
}

fn parse_value(path: &Path, line: usize, field: &str) -> Result<f64> {
    let field = field.trim();
    let parse_err = |message: String| CliError::Parse {
        path: path.to_path_buf(),
        line,
        message,
    };
    let v: f64 = field
        .parse()
        .map_err(|_| parse_err(format!("not a number: {field:?}")))?;
    if !v.is_finite() {
        return Err(parse_err(format!("non-finite value: {field:?}")));
    }
    Ok(v)
}

pub fn ingest_series(path: &Path, format: SeriesFormat) -> Result<Series> {
    let bytes = read_bytes(path)?;
    parse_series(path, &bytes, format)
}

/// Parses series bytes; `path` is only used in error messages.
pub fn parse_series(path: &Path, bytes: &[u8], format: SeriesFormat) -> Result<Series> {
    let text = as_text(path, bytes)?;
    let mut values = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let raw = raw.trim();
        if raw.is_empty() {
            continue;
        }
        if format == SeriesFormat::Csv && raw.contains(',') {
            return Err(CliError::Parse {
                path: path.to_path_buf(),
                line,
                message: "expected a single column".into(),
            });
        }
        match parse_value(path, line, raw) {
            Ok(v) => values.push(v),
            Err(_) if format == SeriesFormat::Csv && line == 1 => {} // header
            Err(e) => return Err(e),
        }
    }
    if values.is_empty() {
        return Err(CliError::Validation(format!("{}: no values", path.display())));
    }
    Series::new(values).map_err(|e| CliError::analysis(path.display().to_string(), e))
}

pub fn ingest_surface(path: &Path) -> Result<Surface> {
    let bytes = read_bytes(path)?;
    parse_surface(path, &bytes)
}

pub fn parse_surface(path: &Path, bytes: &[u8]) -> Result<Surface> {
    let text = as_text(path, bytes)?;
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        if raw.trim().is_empty() {
            continue;
        }
        let row = raw
            .split(',')
            .map(|f| parse_value(path, line, f))
            .collect::<Result<Vec<f64>>>()?;
        if let Some(first) = rows.first() {
            if row.len() != first.len() {
                return Err(CliError::Parse {
                    path: path.to_path_buf(),
                    line,
                    message: format!(
                        "row {} has {} columns, expected {}",
                        rows.len() + 1,
                        row.len(),
                        first.len()
                    ),
                });
            }
        }
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(CliError::Validation(format!("{}: no values", path.display())));
    }
    Surface::from_rows(&rows).map_err(|e| CliError::analysis(path.display().to_string(), e))
}

/// Shortest representation that parses back to the same `f64`.
pub fn fmt_f64(v: f64) -> String {
    format!("{v:?}")
}

pub fn series_to_string(values: &[f64]) -> String {
    let mut out = String::with_capacity(values.len() * 24);
    for v in values {
        out.push_str(&fmt_f64(*v));
        out.push('\n');
    }
    out
}

pub fn surface_to_string(surface: &Surface) -> String {
    let m = surface.matrix();
    let mut out = String::with_capacity(m.as_slice().len() * 24);
    for r in 0..m.rows() {
        for (c, v) in m.row(r).iter().enumerate() {
            if c > 0 {
                out.push(',');
            }
            let _ = write!(out, "{v:?}");
        }
        out.push('\n');
    }
    out
}

pub fn write_file(path: &Path, contents: &str) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    }
    fs::write(path, contents).map_err(|e| CliError::io(path, e))
}

pub fn write_series(path: &Path, series: &Series) -> Result<()> {
    write_file(path, &series_to_string(series.values()))
}

pub fn write_surface(path: &Path, surface: &Surface) -> Result<()> {
    write_file(path, &surface_to_string(surface))
}

/// Lowercase hex SHA-256.
pub fn sha256_hex(bytes: &[u8]) -> String {
    use sha2::{Digest, Sha256};
    hex::encode(Sha256::digest(bytes))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn series(text: &str, format: SeriesFormat) -> Result<Vec<f64>> {
        parse_series(Path::new("in"), text.as_bytes(), format).map(|s| s.values().to_vec())
    }

    #[test]
    fn plain_and_header() {
        assert_eq!(series("1\n2\n3\n", SeriesFormat::Text).unwrap(), vec![1.0, 2.0, 3.0]);
        assert_eq!(series("ret\n0.5\n", SeriesFormat::Csv).unwrap(), vec![0.5]);
        assert_eq!(series("1\r\n\r\n2\r\n", SeriesFormat::Text).unwrap(), vec![1.0, 2.0]);
    }

    #[test]
    fn bad_line_is_named() {
        let text = "1\n2\n3\n4\n5\n6\nabc\n8\n";
        for format in [SeriesFormat::Text, SeriesFormat::Csv] {
            match series(text, format) {
                Err(CliError::Parse { line, .. }) => assert_eq!(line, 7),
                other => panic!("{other:?}"),
            }
        }
        // a header is only tolerated on line 1 and only for CSV
        assert!(matches!(series("ret\n1\n", SeriesFormat::Text), Err(CliError::Parse { line: 1, .. })));
        assert!(matches!(series("1\nret\n", SeriesFormat::Csv), Err(CliError::Parse { line: 2, .. })));
        assert!(matches!(series("1\nnan\n", SeriesFormat::Text), Err(CliError::Parse { line: 2, .. })));
        assert!(matches!(series("1,2\n", SeriesFormat::Csv), Err(CliError::Parse { line: 1, .. })));
    }

    #[test]
    fn empty_inputs() {
        assert!(matches!(series("", SeriesFormat::Text), Err(CliError::Validation(_))));
        assert!(matches!(series("ret\n", SeriesFormat::Csv), Err(CliError::Validation(_))));
        assert!(matches!(parse_surface(Path::new("s"), b"\n"), Err(CliError::Validation(_))));
    }

    #[test]
    fn surfaces() {
        let s = parse_surface(Path::new("s"), b"1,2\n3,4\n").unwrap();
        assert_eq!(s.matrix().as_slice(), &[1.0, 2.0, 3.0, 4.0]);
        let one = parse_surface(Path::new("s"), b"1,2,3,4,5\n").unwrap();
        assert_eq!((one.rows(), one.cols()), (1, 5));
        match parse_surface(Path::new("s"), b"1,2\n3,4\n5\n") {
            Err(CliError::Parse { line, message, .. }) => {
                assert_eq!(line, 3);
                assert!(message.contains("row 3"), "{message}");
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn writers_round_trip() {
        let values = vec![0.1, 1e-300, -2.5, 1.0, 123456789.123];
        let text = series_to_string(&values);
        assert_eq!(series(&text, SeriesFormat::Text).unwrap(), values);
        let s = Surface::from_rows(&[vec![0.3, 1e-20], vec![7.0, -0.0]]).unwrap();
        let back = parse_surface(Path::new("s"), surface_to_string(&s).as_bytes()).unwrap();
        assert_eq!(back.matrix(), s.matrix());
    }

    #[test]
    fn digest() {
        assert_eq!(
            sha256_hex(b"abc"),
            "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad"
        );
    }
}
