use std::fmt;
use std::ops::Mul;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::AlgebraError;

/// Dense integer matrix, row-major, arbitrary precision.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<BigInt>,
}

impl IntMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<BigInt>) -> Result<Self, AlgebraError> {
        if entries.len() != rows * cols {
            return Err(AlgebraError::EntryCount {
                expected: rows * cols,
                got: entries.len(),
            });
        }
        Ok(Self { rows, cols, entries })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            entries: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.entries[i * n + i] = BigInt::one();
        }
        m
    }

    pub fn diagonal<T: Into<BigInt> + Clone>(diag: &[T]) -> Self {
        let n = diag.len();
        let mut m = Self::zeros(n, n);
        for (i, d) in diag.iter().enumerate() {
            m.entries[i * n + i] = d.clone().into();
        }
        m
    }

    /// Builds a matrix from nested rows. An empty outer vector gives the 0x0 matrix.
    pub fn from_rows<T: Into<BigInt> + Clone>(rows: &[Vec<T>]) -> Result<Self, AlgebraError> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut entries = Vec::with_capacity(r * c);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != c {
                return Err(AlgebraError::RaggedRows {
                    row: i,
                    expected: c,
                    got: row.len(),
                });
            }
            entries.extend(row.iter().cloned().map(Into::into));
        }
        Self::new(r, c, entries)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: BigInt) {
        self.entries[i * self.cols + j] = value;
    }

    pub fn entries(&self) -> &[BigInt] {
        &self.entries
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.entries[j * self.rows + i] = self.get(i, j).clone();
            }
        }
        t
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square() && (0..self.rows).all(|i| (i + 1..self.cols).all(|j| self.get(i, j) == self.get(j, i)))
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Zero::is_zero)
    }

    pub fn max_abs(&self) -> BigInt {
        self.entries.iter().map(Signed::abs).max().unwrap_or_else(BigInt::zero)
    }

    pub fn diagonal_entries(&self) -> Vec<BigInt> {
        (0..self.rows.min(self.cols)).map(|i| self.get(i, i).clone()).collect()
    }

    /// Block-diagonal sum `self ⊕ other`.
    pub fn direct_sum(&self, other: &IntMatrix) -> IntMatrix {
        let mut m = Self::zeros(self.rows + other.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m.set(i, j, self.get(i, j).clone());
            }
        }
        for i in 0..other.rows {
            for j in 0..other.cols {
                m.set(self.rows + i, self.cols + j, other.get(i, j).clone());
            }
        }
        m
    }

    /// Assembles `[[a, b], [c, d]]` from four blocks with compatible shapes.
    pub fn block(a: &IntMatrix, b: &IntMatrix, c: &IntMatrix, d: &IntMatrix) -> Result<IntMatrix, AlgebraError> {
        if a.rows != b.rows || c.rows != d.rows || a.cols != c.cols || b.cols != d.cols {
            return Err(AlgebraError::DimensionMismatch(format!(
                "blocks {}x{}, {}x{}, {}x{}, {}x{}",
                a.rows, a.cols, b.rows, b.cols, c.rows, c.cols, d.rows, d.cols
            )));
        }
        let mut m = Self::zeros(a.rows + c.rows, a.cols + b.cols);
        for (blk, r0, c0) in [(a, 0, 0), (b, 0, a.cols), (c, a.rows, 0), (d, a.rows, a.cols)] {
            for i in 0..blk.rows {
                for j in 0..blk.cols {
                    m.set(r0 + i, c0 + j, blk.get(i, j).clone());
                }
            }
        }
        Ok(m)
    }

    /// Sub-matrix on the given row and column indices.
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> IntMatrix {
        let mut m = Self::zeros(rows.len(), cols.len());
        for (a, &i) in rows.iter().enumerate() {
            for (b, &j) in cols.iter().enumerate() {
                m.set(a, b, self.get(i, j).clone());
            }
        }
        m
    }

    /// Removes row `i` and column `i` from a square matrix.
    pub fn remove_index(&self, i: usize) -> IntMatrix {
        let keep: Vec<usize> = (0..self.rows).filter(|&k| k != i).collect();
        let keep_c: Vec<usize> = (0..self.cols).filter(|&k| k != i).collect();
        self.select(&keep, &keep_c)
    }

    pub fn checked_mul(&self, rhs: &IntMatrix) -> Result<IntMatrix, AlgebraError> {
        if self.cols != rhs.rows {
            return Err(AlgebraError::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = rhs.get(k, j);
                    if !b.is_zero() {
                        out.entries[i * rhs.cols + j] += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    // Elementary operations, used by the normal forms and congruence moves.

    pub fn add_row_multiple(&mut self, dst: usize, src: usize, factor: &BigInt) {
        if factor.is_zero() {
            return;
        }
        for j in 0..self.cols {
            let v = self.get(src, j) * factor;
            self.entries[dst * self.cols + j] += v;
        }
    }

    pub fn add_col_multiple(&mut self, dst: usize, src: usize, factor: &BigInt) {
        if factor.is_zero() {
            return;
        }
        for i in 0..self.rows {
            let v = self.get(i, src) * factor;
            self.entries[i * self.cols + dst] += v;
        }
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.entries.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.entries.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    pub fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            let v = -std::mem::take(&mut self.entries[i * self.cols + j]);
            self.entries[i * self.cols + j] = v;
        }
    }

    pub fn negate_col(&mut self, j: usize) {
        for i in 0..self.rows {
            let v = -std::mem::take(&mut self.entries[i * self.cols + j]);
            self.entries[i * self.cols + j] = v;
        }
    }
}

impl Mul for &IntMatrix {
    type Output = IntMatrix;

    /// Panics on a shape mismatch; use [`IntMatrix::checked_mul`] otherwise.
    fn mul(self, rhs: &IntMatrix) -> IntMatrix {
        self.checked_mul(rhs).expect("matrix shapes must agree")
    }
}

/// Literal syntax `[[a,b],[c,d]]`; `[]` is the 0x0 matrix.
impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "[")?;
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{}", self.get(i, j))?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

impl FromStr for IntMatrix {
    type Err = AlgebraError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let inner = compact
            .strip_prefix('[')
            .and_then(|t| t.strip_suffix(']'))
            .ok_or_else(|| AlgebraError::Parse(format!("expected outer brackets in {s:?}")))?;
        if inner.is_empty() {
            return Ok(IntMatrix::zeros(0, 0));
        }
        let mut rows: Vec<Vec<BigInt>> = Vec::new();
        let mut rest = inner;
        loop {
            let body = rest
                .strip_prefix('[')
                .ok_or_else(|| AlgebraError::Parse(format!("expected '[' at {rest:?}")))?;
            let end = body
                .find(']')
                .ok_or_else(|| AlgebraError::Parse("unterminated row".into()))?;
            let row = &body[..end];
            let parsed = if row.is_empty() {
                Vec::new()
            } else {
                row.split(',')
                    .map(|t| {
                        t.parse::<BigInt>()
                            .map_err(|_| AlgebraError::Parse(format!("bad integer {t:?}")))
                    })
                    .collect::<Result<Vec<_>, _>>()?
            };
            rows.push(parsed);
            rest = &body[end + 1..];
            if rest.is_empty() {
                break;
            }
            rest = rest
                .strip_prefix(',')
                .ok_or_else(|| AlgebraError::Parse(format!("expected ',' between rows at {rest:?}")))?;
        }
        IntMatrix::from_rows(&rows)
    }
}
