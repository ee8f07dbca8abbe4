use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Clone, PartialEq, Eq, Debug, Error)]
pub enum DiophantineError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("the system is not homogeneous")]
    NotHomogeneous,
    #[error("value {0} does not fit a signed 64-bit entry")]
    OutOfRange(u64),
    #[error("solver explored {nodes} nodes without finishing")]
    ResourceLimit { nodes: usize },
}

/// `Ax = b` over `ℕ`, stored by columns, with one opaque tag per column.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct LinearSystem {
    rows: usize,
    columns: Vec<Vec<i64>>,
    rhs: Vec<i64>,
    tags: Vec<String>,
}

impl LinearSystem {
    /// From a row-major matrix.
    pub fn new(matrix: Vec<Vec<i64>>, rhs: Vec<i64>) -> Result<Self, DiophantineError> {
        let rows = matrix.len();
        if rhs.len() != rows {
            return Err(DiophantineError::DimensionMismatch {
                expected: rows,
                found: rhs.len(),
            });
        }
        let n = matrix.first().map_or(0, Vec::len);
        if let Some(r) = matrix.iter().find(|r| r.len() != n) {
            return Err(DiophantineError::DimensionMismatch {
                expected: n,
                found: r.len(),
            });
        }
        let columns = (0..n)
            .map(|j| matrix.iter().map(|r| r[j]).collect())
            .collect();
        Ok(LinearSystem::untagged(rows, columns, rhs))
    }

    pub fn from_columns(columns: Vec<Vec<i64>>, rhs: Vec<i64>) -> Result<Self, DiophantineError> {
        let rows = rhs.len();
        if let Some(c) = columns.iter().find(|c| c.len() != rows) {
            return Err(DiophantineError::DimensionMismatch {
                expected: rows,
                found: c.len(),
            });
        }
        Ok(LinearSystem::untagged(rows, columns, rhs))
    }

    fn untagged(rows: usize, columns: Vec<Vec<i64>>, rhs: Vec<i64>) -> Self {
        let tags = (0..columns.len()).map(|j| format!("x{j}")).collect();
        LinearSystem {
            rows,
            columns,
            rhs,
            tags,
        }
    }

    pub fn with_tags(mut self, tags: Vec<String>) -> Result<Self, DiophantineError> {
        if tags.len() != self.columns.len() {
            return Err(DiophantineError::DimensionMismatch {
                expected: self.columns.len(),
                found: tags.len(),
            });
        }
        self.tags = tags;
        Ok(self)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.columns.len()
    }

    pub fn columns(&self) -> &[Vec<i64>] {
        &self.columns
    }

    pub fn rhs(&self) -> &[i64] {
        &self.rhs
    }

    pub fn tags(&self) -> &[String] {
        &self.tags
    }

    pub fn is_homogeneous(&self) -> bool {
        self.rhs.iter().all(|&b| b == 0)
    }

    /// Exact check of `Ax = b`.
    pub fn satisfied_by(&self, x: &[u64]) -> bool {
        if x.len() != self.cols() {
            return false;
        }
        (0..self.rows).all(|i| {
            let lhs: BigInt = self
                .columns
                .iter()
                .zip(x)
                .map(|(c, &k)| BigInt::from(c[i]) * BigInt::from(k))
                .sum();
            lhs == BigInt::from(self.rhs[i])
        })
    }
}

/// `base + ℕ·periods`.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct LinearSet {
    pub base: Vec<u64>,
    pub periods: Vec<Vec<u64>>,
}

impl LinearSet {
    pub fn new(base: Vec<u64>, periods: Vec<Vec<u64>>) -> Result<Self, DiophantineError> {
        if let Some(p) = periods.iter().find(|p| p.len() != base.len()) {
            return Err(DiophantineError::DimensionMismatch {
                expected: base.len(),
                found: p.len(),
            });
        }
        Ok(LinearSet { base, periods })
    }

    pub fn dim(&self) -> usize {
        self.base.len()
    }
}
