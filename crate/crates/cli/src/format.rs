//! Matrix file formats.
//!
//! * JSON (exact): `{"n": 2, "entries": [[0, "1/2"], ["1/2", 0]]}`. Entries
//!   are integers or strings holding `p/q`, an integer, or a decimal. A bare
//!   nested array without the `n` wrapper is also accepted.
//! * CSV (float): one row per line, comma-separated decimal numbers.
//!
//! Both are loaded into exact rationals; CSV decimals are read exactly
//! (`0.1` is `1/10`), so the float backend sees the nearest doubles.

use std::path::Path;

use serde_json::{json, Value};
use submat::scalar::{format_rational, parse_rational};
use submat::{DenseMatrix, Rational};

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

impl Format {
    /// From the extension, falling back to the first non-blank byte.
    pub fn detect(path: &Path, text: &str) -> Format {
        match path.extension().and_then(|e| e.to_str()) {
            Some(e) if e.eq_ignore_ascii_case("json") => Format::Json,
            Some(e) if e.eq_ignore_ascii_case("csv") => Format::Csv,
            _ => match text.trim_start().as_bytes().first() {
                Some(b'{') | Some(b'[') => Format::Json,
                _ => Format::Csv,
            },
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Format::Json => "json_exact",
            Format::Csv => "csv_float",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MatrixFile {
    pub format: Format,
    pub entries: DenseMatrix<Rational>,
}

impl MatrixFile {
    pub fn n(&self) -> usize {
        self.entries.rows()
    }
}

pub fn parse(text: &str, format: Format) -> Result<MatrixFile, CliError> {
    let entries = match format {
        Format::Json => parse_json(text)?,
        Format::Csv => parse_csv(text)?,
    };
    Ok(MatrixFile { format, entries })
}

fn square(rows: Vec<Vec<Rational>>, line: usize) -> Result<DenseMatrix<Rational>, CliError> {
    let n = rows.len();
    if n == 0 {
        return Err(CliError::parse(line, 1, "matrix has no rows"));
    }
    if let Some(i) = rows.iter().position(|r| r.len() != n) {
        return Err(CliError::parse(
            line,
            1,
            format!(
                "matrix must be square: row {} has {} entries, expected {n}",
                i + 1,
                rows[i].len()
            ),
        ));
    }
    Ok(DenseMatrix::from_rows(rows).expect("checked square"))
}

fn parse_json(text: &str) -> Result<DenseMatrix<Rational>, CliError> {
    let value: Value = serde_json::from_str(text)
        .map_err(|e| CliError::parse(e.line(), e.column(), e.to_string()))?;
    let (declared, rows) = match &value {
        Value::Array(rows) => (None, rows),
        Value::Object(map) => {
            let rows = match map.get("entries") {
                Some(Value::Array(rows)) => rows,
                _ => return Err(CliError::parse(1, 1, "missing \"entries\" array")),
            };
            let n = match map.get("n") {
                None => None,
                Some(v) => Some(
                    v.as_u64()
                        .ok_or_else(|| CliError::parse(1, 1, "\"n\" must be a positive integer"))?
                        as usize,
                ),
            };
            (n, rows)
        }
        _ => {
            return Err(CliError::parse(
                1,
                1,
                "expected an object or a nested array",
            ))
        }
    };
    let mut out = Vec::with_capacity(rows.len());
    for (i, row) in rows.iter().enumerate() {
        let row = row
            .as_array()
            .ok_or_else(|| CliError::parse(1, 1, format!("row {} is not an array", i + 1)))?;
        let mut parsed = Vec::with_capacity(row.len());
        for (j, cell) in row.iter().enumerate() {
            let text = match cell {
                Value::Number(x) => x.to_string(),
                Value::String(s) => s.clone(),
                _ => String::new(),
            };
            let r = parse_rational(&text).ok_or_else(|| {
                CliError::parse(
                    1,
                    1,
                    format!("entry ({}, {}) is not a rational: {cell}", i + 1, j + 1),
                )
            })?;
            parsed.push(r);
        }
        out.push(parsed);
    }
    if let Some(n) = declared {
        if n != out.len() {
            return Err(CliError::parse(
                1,
                1,
                format!("\"n\" is {n} but {} rows were given", out.len()),
            ));
        }
    }
    square(out, 1)
}

fn parse_csv(text: &str) -> Result<DenseMatrix<Rational>, CliError> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_reader(text.as_bytes());
    let mut rows = Vec::new();
    let mut last_line = 1;
    for record in reader.records() {
        let record = record.map_err(|e| {
            let line = e.position().map_or(0, |p| p.line() as usize);
            CliError::parse(line, 1, e.to_string())
        })?;
        let line = record.position().map_or(0, |p| p.line() as usize);
        last_line = line;
        if record.iter().all(str::is_empty) {
            continue;
        }
        let mut row = Vec::with_capacity(record.len());
        for (j, field) in record.iter().enumerate() {
            let r = parse_rational(field)
                .ok_or_else(|| CliError::parse(line, j + 1, format!("not a number: {field:?}")))?;
            row.push(r);
        }
        rows.push(row);
    }
    square(rows, last_line)
}

pub fn load(path: &Path, format: Option<Format>) -> Result<(MatrixFile, Vec<u8>), CliError> {
    let bytes = std::fs::read(path).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })?;
    let text = String::from_utf8_lossy(&bytes);
    let format = format.unwrap_or_else(|| Format::detect(path, &text));
    Ok((parse(&text, format)?, bytes))
}

/// Entry as written to JSON: an integer when it fits, else `"p/q"`.
pub fn rational_value(r: &Rational) -> Value {
    if r.is_integer() {
        if let Ok(i) = format_rational(r).parse::<i64>() {
            return json!(i);
        }
    }
    Value::String(format_rational(r))
}

pub fn matrix_value(m: &DenseMatrix<Rational>) -> Value {
    let entries: Vec<Vec<Value>> = m
        .row_iter()
        .map(|row| row.iter().map(rational_value).collect())
        .collect();
    json!({ "n": m.rows(), "entries": entries })
}

/// Canonical JSON text of a matrix file: one row per line,
/// newline-terminated.
pub fn to_json_exact(m: &DenseMatrix<Rational>) -> String {
    let rows: Vec<String> = m
        .row_iter()
        .map(|row| {
            let cells: Vec<Value> = row.iter().map(rational_value).collect();
            format!(
                "    {}",
                serde_json::to_string(&cells).expect("serializable")
            )
        })
        .collect();
    format!(
        "{{\n  \"n\": {},\n  \"entries\": [\n{}\n  ]\n}}\n",
        m.rows(),
        rows.join(",\n")
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    #[test]
    fn json_forms() {
        let m = parse(r#"[[0,"1/2"],["1/2",0]]"#, Format::Json).unwrap();
        assert_eq!(m.entries.at(1, 2), &q(1, 2));
        let m = parse(
            r#"{"n": 2, "entries": [[1, "-3/6"], [0.25, "7"]]}"#,
            Format::Json,
        )
        .unwrap();
        assert_eq!(m.entries.at(1, 2), &q(-1, 2));
        assert_eq!(m.entries.at(2, 1), &q(1, 4));
        assert_eq!(m.n(), 2);
    }

    #[test]
    fn json_errors_carry_location() {
        let err = parse("[[1, 2],\n [3, ", Format::Json).unwrap_err();
        assert!(matches!(err, CliError::Parse { line: 2, .. }), "{err}");
        let err = parse(r#"[[1, "x"], [1, 2]]"#, Format::Json).unwrap_err();
        assert!(err.to_string().contains("entry (1, 2)"), "{err}");
        let err = parse(r#"[[1, 2, 3], [1, 2, 3]]"#, Format::Json).unwrap_err();
        assert!(err.to_string().contains("square"), "{err}");
        let err = parse(r#"{"n": 3, "entries": [[1]]}"#, Format::Json).unwrap_err();
        assert!(err.to_string().contains("\"n\" is 3"), "{err}");
        assert_eq!(err.exit_code(), 3);
    }

    #[test]
    fn csv_parsing() {
        let m = parse("0.5,0.6\n0.1,0.2\n", Format::Csv).unwrap();
        assert_eq!(m.entries.at(1, 2), &q(3, 5));
        let err = parse("0.5,0.6\n0.1,abc\n", Format::Csv).unwrap_err();
        match err {
            CliError::Parse { line, column, .. } => assert_eq!((line, column), (2, 2)),
            e => panic!("{e}"),
        }
        let err = parse("1,2\n3\n", Format::Csv).unwrap_err();
        assert!(err.to_string().contains("square"));
    }

    #[test]
    fn json_round_trip() {
        let m =
            DenseMatrix::from_rows(vec![vec![q(1, 2), q(0, 1)], vec![q(-7, 3), q(4, 1)]]).unwrap();
        let text = to_json_exact(&m);
        assert_eq!(
            text,
            "{\n  \"n\": 2,\n  \"entries\": [\n    [\"1/2\",0],\n    [\"-7/3\",4]\n  ]\n}\n"
        );
        assert_eq!(parse(&text, Format::Json).unwrap().entries, m);
    }

    #[test]
    fn format_detection() {
        assert_eq!(Format::detect(Path::new("a.JSON"), "1,2"), Format::Json);
        assert_eq!(Format::detect(Path::new("a.csv"), "[["), Format::Csv);
        assert_eq!(
            Format::detect(Path::new("a.txt"), "  {\"n\":1}"),
            Format::Json
        );
        assert_eq!(Format::detect(Path::new("a"), "1,2"), Format::Csv);
    }
}
