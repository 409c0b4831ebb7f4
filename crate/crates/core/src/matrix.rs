//! Dense boolean matrix used for label assignments and predictions.

use crate::error::{Error, Result};

/// Row-major instances x labels boolean matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BinaryMatrix {
    rows: usize,
    cols: usize,
    data: Vec<bool>,
}

impl BinaryMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        BinaryMatrix {
            rows,
            cols,
            data: vec![false; rows * cols],
        }
    }

    pub fn from_rows(rows: &[Vec<bool>]) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.len());
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::Contract("ragged rows in binary matrix".into()));
        }
        Ok(BinaryMatrix {
            rows: rows.len(),
            cols,
            data: rows.iter().flatten().copied().collect(),
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, row: usize, col: usize) -> bool {
        self.data[row * self.cols + col]
    }

    pub fn set(&mut self, row: usize, col: usize, value: bool) {
        self.data[row * self.cols + col] = value;
    }

    pub fn row(&self, row: usize) -> &[bool] {
        &self.data[row * self.cols..(row + 1) * self.cols]
    }

    pub fn set_row(&mut self, row: usize, values: &[bool]) {
        assert_eq!(values.len(), self.cols, "row length mismatch");
        self.data[row * self.cols..(row + 1) * self.cols].copy_from_slice(values);
    }

    /// Values of one column, in row order.
    pub fn column(&self, col: usize) -> Vec<bool> {
        (0..self.rows).map(|r| self.get(r, col)).collect()
    }

    pub fn count_in_column(&self, col: usize) -> usize {
        (0..self.rows).filter(|&r| self.get(r, col)).count()
    }

    pub fn same_shape(&self, other: &BinaryMatrix) -> bool {
        self.rows == other.rows && self.cols == other.cols
    }
}
