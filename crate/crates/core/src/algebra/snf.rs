use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use super::IntMatrix;

/// Smith normal form together with its unimodular transforms: `u * m * v == d`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SnfResult {
    pub d: IntMatrix,
    pub u: IntMatrix,
    pub v: IntMatrix,
}

impl SnfResult {
    /// Diagonal entries `d[i][i]` for `i < min(rows, cols)`.
    pub fn divisors(&self) -> Vec<BigInt> {
        self.d.diagonal_entries()
    }

    pub fn rank(&self) -> usize {
        self.divisors().iter().filter(|x| !x.is_zero()).count()
    }

    /// Checks `u * m * v == d` for the matrix this result was computed from.
    pub fn certifies(&self, m: &IntMatrix) -> bool {
        match self.u.checked_mul(m).and_then(|um| um.checked_mul(&self.v)) {
            Ok(p) => p == self.d,
            Err(_) => false,
        }
    }
}

struct Reducer {
    d: IntMatrix,
    u: IntMatrix,
    v: IntMatrix,
}

impl Reducer {
    fn swap_rows(&mut self, a: usize, b: usize) {
        self.d.swap_rows(a, b);
        self.u.swap_rows(a, b);
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        self.d.swap_cols(a, b);
        self.v.swap_cols(a, b);
    }

    fn add_row(&mut self, dst: usize, src: usize, k: &BigInt) {
        self.d.add_row_multiple(dst, src, k);
        self.u.add_row_multiple(dst, src, k);
    }

    fn add_col(&mut self, dst: usize, src: usize, k: &BigInt) {
        self.d.add_col_multiple(dst, src, k);
        self.v.add_col_multiple(dst, src, k);
    }

    /// Smallest nonzero |entry| over the given positions; first one wins on ties.
    fn smallest(&self, positions: impl Iterator<Item = (usize, usize)>) -> Option<(usize, usize)> {
        let mut best: Option<((usize, usize), BigInt)> = None;
        for (i, j) in positions {
            let a = self.d.get(i, j);
            if a.is_zero() {
                continue;
            }
            let abs = a.abs();
            if best.as_ref().is_none_or(|(_, b)| abs < *b) {
                best = Some(((i, j), abs));
            }
        }
        best.map(|(p, _)| p)
    }

    fn place(&mut self, t: usize, (i, j): (usize, usize)) {
        self.swap_rows(t, i);
        self.swap_cols(t, j);
    }

    fn reduce_at(&mut self, t: usize) {
        let (rows, cols) = (self.d.rows(), self.d.cols());
        loop {
            let p = self.d.get(t, t).clone();
            for i in t + 1..rows {
                let q = self.d.get(i, t).div_floor(&p);
                self.add_row(i, t, &-q);
            }
            for j in t + 1..cols {
                let q = self.d.get(t, j).div_floor(&p);
                self.add_col(j, t, &-q);
            }
            let line = (t + 1..rows).map(|i| (i, t)).chain((t + 1..cols).map(|j| (t, j)));
            if let Some(pos) = self.smallest(line) {
                self.place(t, pos);
                continue;
            }
            let stray = (t + 1..rows)
                .flat_map(|i| (t + 1..cols).map(move |j| (i, j)))
                .find(|&(i, j)| !self.d.get(i, j).is_multiple_of(&p));
            match stray {
                Some((i, _)) => self.add_row(t, i, &BigInt::from(1)),
                None => break,
            }
        }
        if self.d.get(t, t).is_negative() {
            self.d.negate_row(t);
            self.u.negate_row(t);
        }
    }
}

/// Smith normal form by elementary row and column operations.
///
/// Pivots are chosen as the nonzero entry of smallest absolute value in the
/// remaining block, ties going to the first entry in row-major order, so the
/// transforms are a deterministic function of the input.
pub fn smith_normal_form(m: &IntMatrix) -> SnfResult {
    let (rows, cols) = (m.rows(), m.cols());
    let mut r = Reducer {
        d: m.clone(),
        u: IntMatrix::identity(rows),
        v: IntMatrix::identity(cols),
    };
    for t in 0..rows.min(cols) {
        let block = (t..rows).flat_map(|i| (t..cols).map(move |j| (i, j)));
        let Some(pos) = r.smallest(block) else {
            break;
        };
        r.place(t, pos);
        r.reduce_at(t);
    }
    SnfResult { d: r.d, u: r.u, v: r.v }
}
