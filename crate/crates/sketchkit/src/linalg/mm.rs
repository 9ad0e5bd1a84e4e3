//! Matrix Market I/O: coordinate (sparse) and array (dense) formats,
//! real or integer fields, general or symmetric symmetry. Values are
//! written with enough digits to round-trip f64 exactly.

use super::{CsrMatrix, DenseMatrix};
use crate::error::{Result, SketchError};
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

#[derive(Debug, Clone)]
pub enum MatrixData {
    Sparse(CsrMatrix),
    Dense(DenseMatrix),
}

impl MatrixData {
    pub fn to_csr(&self) -> CsrMatrix {
        match self {
            MatrixData::Sparse(a) => a.clone(),
            MatrixData::Dense(a) => CsrMatrix::from_dense(a, 0.0),
        }
    }

    pub fn to_dense(&self) -> DenseMatrix {
        match self {
            MatrixData::Sparse(a) => a.to_dense(),
            MatrixData::Dense(a) => a.clone(),
        }
    }

    pub fn dims(&self) -> (usize, usize) {
        match self {
            MatrixData::Sparse(a) => (a.n_rows(), a.n_cols()),
            MatrixData::Dense(a) => (a.n_rows(), a.n_cols()),
        }
    }
}

pub fn read_matrix_market(path: impl AsRef<Path>) -> Result<MatrixData> {
    let file = std::fs::File::open(path.as_ref())?;
    read_matrix_market_from(BufReader::new(file))
}

pub fn read_matrix_market_from(reader: impl BufRead) -> Result<MatrixData> {
    let mut lines = reader.lines();
    let header = lines
        .next()
        .ok_or_else(|| SketchError::Parse("empty file".into()))??;
    let tokens: Vec<String> = header.split_whitespace().map(|t| t.to_lowercase()).collect();
    if tokens.len() < 5 || tokens[0] != "%%matrixmarket" || tokens[1] != "matrix" {
        return Err(SketchError::Parse(format!(
            "bad MatrixMarket header: {header}"
        )));
    }
    let layout = tokens[2].as_str();
    let field = tokens[3].as_str();
    let symmetry = tokens[4].as_str();
    if !matches!(field, "real" | "integer") {
        return Err(SketchError::Parse(format!("unsupported field: {field}")));
    }
    if !matches!(symmetry, "general" | "symmetric") {
        return Err(SketchError::Parse(format!(
            "unsupported symmetry: {symmetry}"
        )));
    }

    let mut body = lines.filter_map(|l| match l {
        Ok(s) => {
            let t = s.trim().to_string();
            if t.is_empty() || t.starts_with('%') {
                None
            } else {
                Some(Ok(t))
            }
        }
        Err(e) => Some(Err(e)),
    });

    let size_line = body
        .next()
        .ok_or_else(|| SketchError::Parse("missing size line".into()))??;
    let sizes: Vec<usize> = size_line
        .split_whitespace()
        .map(|t| {
            t.parse::<usize>()
                .map_err(|_| SketchError::Parse(format!("bad size entry: {t}")))
        })
        .collect::<Result<_>>()?;

    match layout {
        "coordinate" => {
            if sizes.len() != 3 {
                return Err(SketchError::Parse("coordinate size line needs 3 ints".into()));
            }
            let (n_rows, n_cols, nnz) = (sizes[0], sizes[1], sizes[2]);
            let mut triplets = Vec::with_capacity(nnz);
            for _ in 0..nnz {
                let line = body
                    .next()
                    .ok_or_else(|| SketchError::Parse("truncated coordinate data".into()))??;
                let mut it = line.split_whitespace();
                let i: usize = parse_tok(it.next(), "row index")?;
                let j: usize = parse_tok(it.next(), "col index")?;
                let v: f64 = parse_tok(it.next(), "value")?;
                if i == 0 || j == 0 || i > n_rows || j > n_cols {
                    return Err(SketchError::Parse(format!("index out of range: {i} {j}")));
                }
                triplets.push((i - 1, j - 1, v));
                if symmetry == "symmetric" && i != j {
                    triplets.push((j - 1, i - 1, v));
                }
            }
            Ok(MatrixData::Sparse(CsrMatrix::from_triplets(
                n_rows, n_cols, triplets,
            )?))
        }
        "array" => {
            if sizes.len() != 2 {
                return Err(SketchError::Parse("array size line needs 2 ints".into()));
            }
            let (n_rows, n_cols) = (sizes[0], sizes[1]);
            // Array format is column-major.
            let mut data = vec![0.0; n_rows * n_cols];
            if symmetry == "symmetric" {
                for j in 0..n_cols {
                    for i in j..n_rows {
                        let v: f64 = parse_value(&mut body)?;
                        data[i * n_cols + j] = v;
                        data[j * n_cols + i] = v;
                    }
                }
            } else {
                for j in 0..n_cols {
                    for i in 0..n_rows {
                        data[i * n_cols + j] = parse_value(&mut body)?;
                    }
                }
            }
            Ok(MatrixData::Dense(DenseMatrix::from_vec(
                n_rows, n_cols, data,
            )?))
        }
        other => Err(SketchError::Parse(format!("unsupported layout: {other}"))),
    }
}

fn parse_tok<T: std::str::FromStr>(tok: Option<&str>, what: &str) -> Result<T> {
    tok.ok_or_else(|| SketchError::Parse(format!("missing {what}")))?
        .parse::<T>()
        .map_err(|_| SketchError::Parse(format!("bad {what}")))
}

fn parse_value(
    body: &mut impl Iterator<Item = std::io::Result<String>>,
) -> Result<f64> {
    let line = body
        .next()
        .ok_or_else(|| SketchError::Parse("truncated array data".into()))??;
    line.split_whitespace()
        .next()
        .ok_or_else(|| SketchError::Parse("empty array entry".into()))?
        .parse::<f64>()
        .map_err(|_| SketchError::Parse(format!("bad array value: {line}")))
}

pub fn write_coordinate(path: impl AsRef<Path>, a: &CsrMatrix) -> Result<()> {
    let file = std::fs::File::create(path.as_ref())?;
    let mut w = BufWriter::new(file);
    writeln!(w, "%%MatrixMarket matrix coordinate real general")?;
    writeln!(w, "{} {} {}", a.n_rows(), a.n_cols(), a.nnz())?;
    for (i, j, v) in a.iter_triplets() {
        writeln!(w, "{} {} {:.17e}", i + 1, j + 1, v)?;
    }
    Ok(())
}

pub fn write_array(path: impl AsRef<Path>, a: &DenseMatrix) -> Result<()> {
    let file = std::fs::File::create(path.as_ref())?;
    let mut w = BufWriter::new(file);
    writeln!(w, "%%MatrixMarket matrix array real general")?;
    writeln!(w, "{} {}", a.n_rows(), a.n_cols())?;
    for j in 0..a.n_cols() {
        for i in 0..a.n_rows() {
            writeln!(w, "{:.17e}", a.get(i, j))?;
        }
    }
    Ok(())
}

pub fn write_vector(path: impl AsRef<Path>, v: &[f64]) -> Result<()> {
    write_array(
        path,
        &DenseMatrix::from_vec(v.len(), 1, v.to_vec()).expect("vector"),
    )
}

pub fn read_vector(path: impl AsRef<Path>) -> Result<Vec<f64>> {
    let m = read_matrix_market(path)?.to_dense();
    if m.n_cols() == 1 {
        Ok((0..m.n_rows()).map(|i| m.get(i, 0)).collect())
    } else if m.n_rows() == 1 {
        Ok(m.row(0).to_vec())
    } else {
        Err(SketchError::Parse(format!(
            "expected a vector, got {}x{}",
            m.n_rows(),
            m.n_cols()
        )))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn coordinate_roundtrip_exact() {
        let a = CsrMatrix::from_triplets(
            3,
            4,
            vec![(0, 0, 1.0 / 3.0), (1, 3, -2.5e-17), (2, 1, 7.0)],
        )
        .unwrap();
        let dir = std::env::temp_dir().join("sketchkit_mm_test");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("coord.mtx");
        write_coordinate(&path, &a).unwrap();
        let b = read_matrix_market(&path).unwrap().to_csr();
        assert_eq!(a, b);
    }

    #[test]
    fn array_roundtrip_exact() {
        let a = DenseMatrix::from_fn(4, 3, |i, j| ((i * 13 + j * 7) as f64).sin());
        let dir = std::env::temp_dir().join("sketchkit_mm_test");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("array.mtx");
        write_array(&path, &a).unwrap();
        let b = read_matrix_market(&path).unwrap().to_dense();
        assert_eq!(a, b);
    }

    #[test]
    fn reads_symmetric_coordinate() {
        let text = "%%MatrixMarket matrix coordinate real symmetric\n3 3 2\n1 1 2.0\n3 1 5.0\n";
        let m = read_matrix_market_from(text.as_bytes()).unwrap().to_csr();
        assert_eq!(m.nnz(), 3);
        let d = m.to_dense();
        assert_eq!(d.get(0, 2), 5.0);
        assert_eq!(d.get(2, 0), 5.0);
    }

    #[test]
    fn rejects_garbage() {
        assert!(read_matrix_market_from("not a header\n1 1 1".as_bytes()).is_err());
        assert!(read_matrix_market_from(
            "%%MatrixMarket matrix coordinate complex general\n1 1 1\n1 1 1 0".as_bytes()
        )
        .is_err());
    }
}
