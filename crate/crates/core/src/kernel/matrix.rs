use std::fmt;

use serde::Serialize;
use sha2::{Digest, Sha256};

use super::KernelError;
use crate::family::{content_lines, parse_assignment};

/// Dense row-major integer matrix. Rows index the unknowns of a left-kernel
/// problem, columns index the equations.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<i64>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    /// Builds a matrix from rows that must all have length `cols`.
    pub fn from_rows(cols: usize, rows: Vec<Vec<i64>>) -> Result<Self, KernelError> {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for row in &rows {
            if row.len() != cols {
                return Err(KernelError::DimensionMismatch {
                    expected: cols,
                    found: row.len(),
                });
            }
            data.extend_from_slice(row);
        }
        Ok(IntMatrix {
            rows: rows.len(),
            cols,
            data,
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: i64) {
        self.data[i * self.cols + j] = value;
    }

    pub fn row(&self, i: usize) -> &[i64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    /// Largest absolute entry, 0 for an empty matrix.
    pub fn max_abs_entry(&self) -> u64 {
        self.data
            .iter()
            .map(|x| x.unsigned_abs())
            .max()
            .unwrap_or(0)
    }

    /// `m=<rows> n=<cols>` header, then one line of integers per row.
    pub fn to_text(&self) -> String {
        let mut out = format!("m={} n={}\n", self.rows, self.cols);
        for i in 0..self.rows {
            let line: Vec<String> = self.row(i).iter().map(i64::to_string).collect();
            out.push_str(&line.join(" "));
            out.push('\n');
        }
        out
    }

    pub fn parse(input: &str) -> Result<Self, KernelError> {
        let parse_err = |line: usize, message: String| KernelError::Parse { line, message };
        let mut lines = content_lines(input);
        let (header_line, header) = lines
            .next()
            .ok_or_else(|| parse_err(1, "missing `m=<int> n=<int>` header".into()))?;
        let mut fields = header.split_whitespace();
        let (Some(m_tok), Some(n_tok), None) = (fields.next(), fields.next(), fields.next()) else {
            return Err(parse_err(
                header_line,
                format!("malformed header `{header}`"),
            ));
        };
        let rows = parse_assignment(m_tok, "m").map_err(|e| parse_err(header_line, e))?;
        let cols = parse_assignment(n_tok, "n").map_err(|e| parse_err(header_line, e))?;

        let mut data = Vec::with_capacity(rows * cols);
        let mut seen = 0;
        for (line_no, line) in lines {
            seen += 1;
            if seen > rows {
                return Err(parse_err(line_no, format!("more than {rows} rows")));
            }
            let row = line
                .split_whitespace()
                .map(|tok| {
                    tok.parse::<i64>()
                        .map_err(|_| parse_err(line_no, format!("`{tok}` is not an integer")))
                })
                .collect::<Result<Vec<_>, _>>()?;
            if row.len() != cols {
                return Err(parse_err(
                    line_no,
                    format!("expected {cols} entries, found {}", row.len()),
                ));
            }
            data.extend(row);
        }
        // A zero-column matrix has no visible rows.
        if seen != rows && cols > 0 {
            return Err(parse_err(
                header_line,
                format!("expected {rows} rows, found {seen}"),
            ));
        }
        Ok(IntMatrix { rows, cols, data })
    }

    /// `sha256:<hex>` over the canonical text form.
    pub fn digest(&self) -> String {
        format!(
            "sha256:{}",
            hex::encode(Sha256::digest(self.to_text().as_bytes()))
        )
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}
