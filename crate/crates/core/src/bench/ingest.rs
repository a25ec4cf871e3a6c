//! Matrix Market and dense CSV readers.

use std::fs::File;
use std::io::{BufRead, BufReader, Read};
use std::path::Path;
use std::str::FromStr;

use crate::matcore::Matrix;
use crate::{Error, Result};

/// Largest accepted row or column count unless overridden.
pub const DEFAULT_MAX_DIM: usize = 2000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InputFormat {
    MatrixMarket,
    DenseCsv,
}

impl InputFormat {
    /// `.mtx` / `.mm` are Matrix Market, anything else is CSV.
    pub fn guess(path: &Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some("mtx") | Some("mm") => InputFormat::MatrixMarket,
            _ => InputFormat::DenseCsv,
        }
    }
}

impl FromStr for InputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "mm" | "mtx" | "matrix-market" => Ok(InputFormat::MatrixMarket),
            "csv" | "dense-csv" => Ok(InputFormat::DenseCsv),
            other => Err(Error::Argument(format!("unknown input format '{other}'"))),
        }
    }
}

pub fn ingest(path: &Path, format: InputFormat, max_dim: usize) -> Result<Matrix> {
    let file = File::open(path)?;
    match format {
        InputFormat::MatrixMarket => read_matrix_market(BufReader::new(file), max_dim),
        InputFormat::DenseCsv => read_dense_csv(file, max_dim),
    }
}

fn check_dims(rows: usize, cols: usize, max_dim: usize) -> Result<()> {
    if rows > max_dim || cols > max_dim {
        return Err(Error::InvalidInput(format!(
            "{rows}x{cols} exceeds the dimension cap of {max_dim}"
        )));
    }
    Ok(())
}

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

fn field<T: FromStr>(tok: Option<&str>, line: usize, what: &str) -> Result<T> {
    let tok = tok.ok_or_else(|| parse_err(line, format!("missing {what}")))?;
    tok.parse()
        .map_err(|_| parse_err(line, format!("cannot parse {what} from '{tok}'")))
}

/// Reads real `coordinate` or `array` Matrix Market data, `general` or `symmetric`.
/// Symmetric files are expanded to full storage.
pub fn read_matrix_market<R: BufRead>(reader: R, max_dim: usize) -> Result<Matrix> {
    let mut lines = reader.lines().enumerate().map(|(i, l)| (i + 1, l));
    let (_, header) = lines
        .next()
        .ok_or_else(|| parse_err(1, "empty file"))?;
    let header = header?;
    let tokens: Vec<String> = header.split_whitespace().map(|t| t.to_ascii_lowercase()).collect();
    if tokens.len() != 5 || tokens[0] != "%%matrixmarket" || tokens[1] != "matrix" {
        return Err(parse_err(1, "expected '%%MatrixMarket matrix <format> <field> <symmetry>'"));
    }
    let coordinate = match tokens[2].as_str() {
        "coordinate" => true,
        "array" => false,
        other => return Err(parse_err(1, format!("unsupported format '{other}'"))),
    };
    if !matches!(tokens[3].as_str(), "real" | "double" | "integer") {
        return Err(parse_err(1, format!("unsupported field '{}'", tokens[3])));
    }
    let symmetric = match tokens[4].as_str() {
        "general" => false,
        "symmetric" => true,
        other => return Err(parse_err(1, format!("unsupported symmetry '{other}'"))),
    };

    let mut data = lines.filter_map(|(n, l)| match l {
        Ok(l) if l.trim().is_empty() || l.trim_start().starts_with('%') => None,
        other => Some((n, other)),
    });
    let (size_line, size) = data
        .next()
        .ok_or_else(|| parse_err(1, "missing size line"))?;
    let size = size?;
    let mut it = size.split_whitespace();
    let rows: usize = field(it.next(), size_line, "row count")?;
    let cols: usize = field(it.next(), size_line, "column count")?;
    check_dims(rows, cols, max_dim)?;
    if symmetric && rows != cols {
        return Err(parse_err(size_line, "symmetric matrix must be square"));
    }
    let mut a = Matrix::zeros(rows, cols);

    if coordinate {
        let nnz: usize = field(it.next(), size_line, "entry count")?;
        let mut seen = 0;
        for (n, line) in data {
            let line = line?;
            let mut t = line.split_whitespace();
            let i: usize = field(t.next(), n, "row index")?;
            let j: usize = field(t.next(), n, "column index")?;
            let v: f64 = field(t.next(), n, "value")?;
            if i == 0 || j == 0 || i > rows || j > cols {
                return Err(parse_err(n, format!("index ({i}, {j}) outside {rows}x{cols}")));
            }
            if !v.is_finite() {
                return Err(parse_err(n, "non-finite value"));
            }
            seen += 1;
            if seen > nnz {
                return Err(parse_err(n, format!("more than the declared {nnz} entries")));
            }
            a[(i - 1, j - 1)] += v;
            if symmetric && i != j {
                a[(j - 1, i - 1)] += v;
            }
        }
        if seen != nnz {
            return Err(parse_err(size_line, format!("declared {nnz} entries, found {seen}")));
        }
    } else {
        // column-major; symmetric files list the lower triangle only
        let slots: Vec<(usize, usize)> = (0..cols)
            .flat_map(|j| {
                let start = if symmetric { j } else { 0 };
                (start..rows).map(move |i| (i, j))
            })
            .collect();
        let mut k = 0;
        for (n, line) in data {
            let line = line?;
            for tok in line.split_whitespace() {
                let v: f64 = field(Some(tok), n, "value")?;
                if !v.is_finite() {
                    return Err(parse_err(n, "non-finite value"));
                }
                let &(i, j) = slots
                    .get(k)
                    .ok_or_else(|| parse_err(n, format!("more than {} values", slots.len())))?;
                a[(i, j)] = v;
                if symmetric {
                    a[(j, i)] = v;
                }
                k += 1;
            }
        }
        if k != slots.len() {
            return Err(parse_err(size_line, format!("expected {} values, found {k}", slots.len())));
        }
    }
    Ok(a)
}

/// Reads a headerless CSV of numbers; every row must have the same length.
pub fn read_dense_csv<R: Read>(reader: R, max_dim: usize) -> Result<Matrix> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .from_reader(reader);
    let mut values = Vec::new();
    let mut rows = 0;
    let mut cols = None;
    for rec in rdr.records() {
        let rec = rec.map_err(|e| {
            let line = e.position().map(|p| p.line() as usize).unwrap_or(0);
            match e.into_kind() {
                csv::ErrorKind::Io(io) => Error::Io(io),
                kind => parse_err(line, format!("{kind:?}")),
            }
        })?;
        let line = rec.position().map(|p| p.line() as usize).unwrap_or(rows + 1);
        if rec.len() == 1 && rec[0].is_empty() {
            continue;
        }
        if let Some(c) = cols {
            if rec.len() != c {
                return Err(parse_err(line, format!("expected {c} fields, found {}", rec.len())));
            }
        }
        cols = Some(rec.len());
        for tok in rec.iter() {
            let v: f64 = field(Some(tok), line, "value")?;
            if !v.is_finite() {
                return Err(parse_err(line, "non-finite value"));
            }
            values.push(v);
        }
        rows += 1;
        check_dims(rows, rec.len(), max_dim)?;
    }
    let cols = cols.ok_or_else(|| parse_err(1, "no data rows"))?;
    Ok(Matrix::from_row_slice(rows, cols, &values))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mm(s: &str) -> Result<Matrix> {
        read_matrix_market(s.as_bytes(), DEFAULT_MAX_DIM)
    }

    #[test]
    fn csv_identity() {
        let a = read_dense_csv("1,0\n0,1\n".as_bytes(), 10).unwrap();
        assert_eq!(a, Matrix::identity(2, 2));
    }

    #[test]
    fn csv_errors_carry_lines() {
        match read_dense_csv("1,2\n3,x\n".as_bytes(), 10) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("{other:?}"),
        }
        match read_dense_csv("1,2\n3\n".as_bytes(), 10) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("{other:?}"),
        }
        assert!(matches!(read_dense_csv("1,2,3\n".as_bytes(), 2), Err(Error::InvalidInput(_))));
    }

    #[test]
    fn coordinate_general() {
        let a = mm("%%MatrixMarket matrix coordinate real general\n% note\n2 2 1\n1 2 3.5\n").unwrap();
        assert_eq!(a, Matrix::from_row_slice(2, 2, &[0.0, 3.5, 0.0, 0.0]));
    }

    #[test]
    fn coordinate_symmetric_expands() {
        let a = mm("%%MatrixMarket matrix coordinate real symmetric\n3 3 4\n1 1 2\n2 1 -1\n3 2 -1\n3 3 2\n").unwrap();
        assert_eq!(a, a.transpose());
        assert_eq!(a[(0, 1)], -1.0);
        assert_eq!(a[(1, 2)], -1.0);
        assert_eq!(a[(1, 1)], 0.0);
    }

    #[test]
    fn array_formats() {
        let a = mm("%%MatrixMarket matrix array real general\n2 3\n1\n2\n3\n4\n5\n6\n").unwrap();
        assert_eq!(a, Matrix::from_row_slice(2, 3, &[1.0, 3.0, 5.0, 2.0, 4.0, 6.0]));
        let s = mm("%%MatrixMarket matrix array real symmetric\n2 2\n1\n2\n3\n").unwrap();
        assert_eq!(s, Matrix::from_row_slice(2, 2, &[1.0, 2.0, 2.0, 3.0]));
    }

    #[test]
    fn malformed_inputs() {
        let bad_header = mm("%%MatrixMarket matrix coordinate complex general\n1 1 1\n1 1 1\n");
        assert!(matches!(bad_header, Err(Error::Parse { line: 1, .. })));
        let bad_entry = mm("%%MatrixMarket matrix coordinate real general\n2 2 2\n1 1 1\n1 q 2\n");
        assert!(matches!(bad_entry, Err(Error::Parse { line: 4, .. })));
        let out_of_range = mm("%%MatrixMarket matrix coordinate real general\n2 2 1\n3 1 1\n");
        assert!(matches!(out_of_range, Err(Error::Parse { line: 3, .. })));
        let short = mm("%%MatrixMarket matrix coordinate real general\n2 2 2\n1 1 1\n");
        assert!(matches!(short, Err(Error::Parse { .. })));
        let big = read_matrix_market("%%MatrixMarket matrix array real general\n5 5\n".as_bytes(), 4);
        assert!(matches!(big, Err(Error::InvalidInput(_))));
    }

    #[test]
    fn format_guess() {
        assert_eq!(InputFormat::guess(Path::new("x.mtx")), InputFormat::MatrixMarket);
        assert_eq!(InputFormat::guess(Path::new("x.csv")), InputFormat::DenseCsv);
        assert!("xml".parse::<InputFormat>().is_err());
    }
}
