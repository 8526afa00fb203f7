use std::fmt;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

/// Sparse integer matrix, column-major. Each column holds `(row, value)`
/// pairs sorted by row with no explicit zeros.
#[derive(Clone, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    columns: Vec<Vec<(usize, BigInt)>>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            columns: vec![Vec::new(); cols],
        }
    }

    pub fn from_dense(data: &[Vec<i64>]) -> Self {
        let rows = data.len();
        let cols = data.first().map_or(0, Vec::len);
        let mut m = Self::zeros(rows, cols);
        for (r, row) in data.iter().enumerate() {
            assert_eq!(row.len(), cols, "ragged dense matrix");
            for (c, &v) in row.iter().enumerate() {
                if v != 0 {
                    m.columns[c].push((r, BigInt::from(v)));
                }
            }
        }
        m
    }

    /// Builds from per-column entry lists; entries are sorted and zeros dropped.
    pub fn from_columns(rows: usize, columns: Vec<Vec<(usize, BigInt)>>) -> Self {
        let cols = columns.len();
        let columns = columns
            .into_iter()
            .map(|mut col| {
                col.retain(|(_, v)| !v.is_zero());
                col.sort_by_key(|&(r, _)| r);
                assert!(col.iter().all(|&(r, _)| r < rows), "row index out of range");
                assert!(
                    col.windows(2).all(|w| w[0].0 < w[1].0),
                    "duplicate entry in column"
                );
                col
            })
            .collect();
        Self {
            rows,
            cols,
            columns,
        }
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn nnz(&self) -> usize {
        self.columns.iter().map(Vec::len).sum()
    }

    pub fn column(&self, c: usize) -> &[(usize, BigInt)] {
        &self.columns[c]
    }

    pub fn get(&self, r: usize, c: usize) -> BigInt {
        self.columns[c]
            .binary_search_by_key(&r, |&(i, _)| i)
            .map(|i| self.columns[c][i].1.clone())
            .unwrap_or_default()
    }

    pub fn set(&mut self, r: usize, c: usize, v: BigInt) {
        assert!(r < self.rows && c < self.cols);
        let col = &mut self.columns[c];
        match col.binary_search_by_key(&r, |&(i, _)| i) {
            Ok(i) if v.is_zero() => {
                col.remove(i);
            }
            Ok(i) => col[i].1 = v,
            Err(_) if v.is_zero() => {}
            Err(i) => col.insert(i, (r, v)),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.columns.iter().all(Vec::is_empty)
    }

    /// Entries as row lists of `i64`, or `None` when some entry does not fit.
    pub(crate) fn to_small_rows(&self) -> Option<Vec<Vec<(u32, i64)>>> {
        let mut rows: Vec<Vec<(u32, i64)>> = vec![Vec::new(); self.rows];
        for (c, col) in self.columns.iter().enumerate() {
            for (r, v) in col {
                rows[*r].push((c as u32, v.to_i64()?));
            }
        }
        Some(rows)
    }

    pub(crate) fn to_big_rows(&self) -> Vec<Vec<(u32, BigInt)>> {
        let mut rows: Vec<Vec<(u32, BigInt)>> = vec![Vec::new(); self.rows];
        for (c, col) in self.columns.iter().enumerate() {
            for (r, v) in col {
                rows[*r].push((c as u32, v.clone()));
            }
        }
        rows
    }

    pub fn mul(&self, rhs: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch");
        let columns = rhs
            .columns
            .iter()
            .map(|rcol| {
                let mut acc: std::collections::BTreeMap<usize, BigInt> = Default::default();
                for (k, b) in rcol {
                    for (i, a) in &self.columns[*k] {
                        *acc.entry(*i).or_default() += a * b;
                    }
                }
                acc.into_iter().filter(|(_, v)| !v.is_zero()).collect()
            })
            .collect();
        IntMatrix {
            rows: self.rows,
            cols: rhs.cols,
            columns,
        }
    }

    pub fn to_dense(&self) -> Vec<Vec<BigInt>> {
        let mut out = vec![vec![BigInt::zero(); self.cols]; self.rows];
        for (c, col) in self.columns.iter().enumerate() {
            for (r, v) in col {
                out[*r][c] = v.clone();
            }
        }
        out
    }

    pub fn transpose(&self) -> IntMatrix {
        let mut columns: Vec<Vec<(usize, BigInt)>> = vec![Vec::new(); self.rows];
        for (c, col) in self.columns.iter().enumerate() {
            for (r, v) in col {
                columns[*r].push((c, v.clone()));
            }
        }
        IntMatrix {
            rows: self.cols,
            cols: self.rows,
            columns,
        }
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.rows * self.cols <= 400 {
            for row in self.to_dense() {
                let cells: Vec<String> = row.iter().map(|v| format!("{v:>3}")).collect();
                writeln!(f, "[{}]", cells.join(" "))?;
            }
            Ok(())
        } else {
            write!(
                f,
                "IntMatrix({}x{}, nnz={})",
                self.rows,
                self.cols,
                self.nnz()
            )
        }
    }
}
