//! Plain integer matrices over a symbol alphabet, shared by arrays and
//! difference schemes.

use crate::error::{Error, Result};

/// Row-major matrix of nonnegative symbols.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymbolMatrix {
    rows: usize,
    cols: usize,
    data: Vec<u32>,
}

impl SymbolMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<u32>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::invalid(format!(
                "matrix data length {} does not match {rows}x{cols}",
                data.len()
            )));
        }
        Ok(SymbolMatrix { rows, cols, data })
    }

    pub fn from_rows(rows: &[Vec<u32>]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::invalid("ragged rows"));
        }
        let data = rows.iter().flatten().copied().collect();
        SymbolMatrix::new(r, c, data)
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        SymbolMatrix {
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: u32) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[u32] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_iter(&self) -> impl Iterator<Item = &[u32]> {
        self.data.chunks_exact(self.cols.max(1))
    }

    pub fn data(&self) -> &[u32] {
        &self.data
    }

    pub fn max_symbol(&self) -> Option<u32> {
        self.data.iter().copied().max()
    }
}

/// Kronecker sum `A ⊕ B` over `Z_d`: the block at position `(i, j)` is
/// `a[i][j] + B (mod d)`. Output row `(i, i')` and column `(j, j')` are laid
/// out row-major, so the result has `rows(A)·rows(B)` rows and
/// `cols(A)·cols(B)` columns.
pub fn kron_sum(a: &SymbolMatrix, b: &SymbolMatrix, d: u32) -> SymbolMatrix {
    let rows = a.rows() * b.rows();
    let cols = a.cols() * b.cols();
    let mut out = SymbolMatrix::zeros(rows, cols);
    for i in 0..a.rows() {
        for ip in 0..b.rows() {
            let r = i * b.rows() + ip;
            for j in 0..a.cols() {
                let shift = a.get(i, j);
                for jp in 0..b.cols() {
                    out.set(r, j * b.cols() + jp, (shift + b.get(ip, jp)) % d);
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kron_sum_zero_shift_reproduces_rhs() {
        let a = SymbolMatrix::new(1, 1, vec![0]).unwrap();
        let b = SymbolMatrix::new(2, 3, vec![0, 1, 2, 2, 1, 0]).unwrap();
        assert_eq!(kron_sum(&a, &b, 3), b);
    }

    #[test]
    fn kron_sum_column_vectors() {
        let a = SymbolMatrix::new(2, 1, vec![0, 1]).unwrap();
        let b = SymbolMatrix::new(2, 1, vec![0, 1]).unwrap();
        let s = kron_sum(&a, &b, 2);
        assert_eq!(s.data(), &[0, 1, 1, 0]);
    }

    #[test]
    fn kron_sum_block_layout() {
        // a = [[1]], b = 2x2 -> single shifted block
        let a = SymbolMatrix::new(1, 1, vec![1]).unwrap();
        let b = SymbolMatrix::new(2, 2, vec![0, 1, 2, 0]).unwrap();
        let s = kron_sum(&a, &b, 3);
        assert_eq!(s.data(), &[1, 2, 0, 1]);
    }
}
