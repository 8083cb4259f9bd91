use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::{smith_normal_form, AlgebraError, IntMatrix};

/// Counts of positive, negative and zero eigenvalues of a symmetric form.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Inertia {
    pub positive: usize,
    pub negative: usize,
    pub zero: usize,
}

impl Inertia {
    pub fn signature(&self) -> i64 {
        self.positive as i64 - self.negative as i64
    }

    pub fn rank(&self) -> usize {
        self.positive + self.negative
    }
}

/// Even forms have only even diagonal entries.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Parity {
    Even,
    Odd,
}

impl fmt::Display for Parity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Parity::Even => "even",
            Parity::Odd => "odd",
        })
    }
}

/// The congruence invariants checked before any search.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FormInvariants {
    pub dimension: usize,
    pub rank: usize,
    pub signature: i64,
    pub determinant: BigInt,
    pub parity: Parity,
}

impl FormInvariants {
    pub fn of(s: &IntMatrix) -> Result<Self, AlgebraError> {
        let inertia = inertia(s)?;
        Ok(Self {
            dimension: s.rows(),
            rank: inertia.rank(),
            signature: inertia.signature(),
            determinant: determinant(s)?,
            parity: parity(s)?,
        })
    }
}

fn require_symmetric(s: &IntMatrix) -> Result<(), AlgebraError> {
    if s.is_symmetric() {
        Ok(())
    } else {
        Err(AlgebraError::NonSymmetric)
    }
}

/// Inertia by symmetric Gaussian elimination over the rationals.
///
/// A nonzero diagonal pivot is eliminated directly. When every remaining
/// diagonal entry vanishes but some off-diagonal `b = s[i][j]` does not, the
/// hyperbolic block `[[0, b], [b, 0]]` is split off as one positive and one
/// negative direction.
pub fn inertia(s: &IntMatrix) -> Result<Inertia, AlgebraError> {
    require_symmetric(s)?;
    let n = s.rows();
    let mut a: Vec<Vec<BigRational>> = (0..n)
        .map(|i| (0..n).map(|j| BigRational::from_integer(s.get(i, j).clone())).collect())
        .collect();
    let mut active: Vec<usize> = (0..n).collect();
    let (mut pos, mut neg) = (0usize, 0usize);

    loop {
        if let Some(k) = active.iter().position(|&i| !a[i][i].is_zero()) {
            let p = active.remove(k);
            let d = a[p][p].clone();
            if d.is_positive() {
                pos += 1;
            } else {
                neg += 1;
            }
            for &r in &active {
                if a[r][p].is_zero() {
                    continue;
                }
                let f = &a[r][p] / &d;
                for &c in &active {
                    let delta = &f * &a[p][c];
                    a[r][c] -= delta;
                }
            }
            continue;
        }
        let pair = active
            .iter()
            .enumerate()
            .find_map(|(x, &i)| active[x + 1..].iter().find(|&&j| !a[i][j].is_zero()).map(|&j| (i, j)));
        let Some((i, j)) = pair else {
            break;
        };
        pos += 1;
        neg += 1;
        active.retain(|&k| k != i && k != j);
        let b = a[i][j].clone();
        for &r in &active {
            for &c in &active {
                let delta = (&a[r][i] * &a[j][c] + &a[r][j] * &a[i][c]) / &b;
                a[r][c] -= delta;
            }
        }
    }
    Ok(Inertia {
        positive: pos,
        negative: neg,
        zero: n - pos - neg,
    })
}

/// Number of positive minus number of negative eigenvalues, computed exactly.
pub fn signature(s: &IntMatrix) -> Result<i64, AlgebraError> {
    inertia(s).map(|i| i.signature())
}

pub fn parity(s: &IntMatrix) -> Result<Parity, AlgebraError> {
    require_symmetric(s)?;
    if s.diagonal_entries().iter().all(|d| d.is_even()) {
        Ok(Parity::Even)
    } else {
        Ok(Parity::Odd)
    }
}

pub fn rank(m: &IntMatrix) -> usize {
    smith_normal_form(m).rank()
}

/// Fraction-free (Bareiss) determinant. The 0x0 determinant is 1.
pub fn determinant(m: &IntMatrix) -> Result<BigInt, AlgebraError> {
    if !m.is_square() {
        return Err(AlgebraError::NotSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    let n = m.rows();
    let mut a = m.to_rows();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n {
        if a[k][k].is_zero() {
            let Some(swap) = (k + 1..n).find(|&i| !a[i][k].is_zero()) else {
                return Ok(BigInt::zero());
            };
            a.swap(k, swap);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
                a[i][j] = v;
            }
        }
        prev = a[k][k].clone();
    }
    Ok(if n == 0 { sign } else { sign * prev })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mat(rows: &[Vec<i64>]) -> IntMatrix {
        IntMatrix::from_rows(rows).unwrap()
    }

    #[test]
    fn diagonal_signature() {
        assert_eq!(signature(&IntMatrix::diagonal(&[1, -1, -1])).unwrap(), -1);
        assert_eq!(signature(&IntMatrix::zeros(0, 0)).unwrap(), 0);
    }

    #[test]
    fn hyperbolic_block() {
        let h = mat(&[vec![0, 1], vec![1, 0]]);
        let i = inertia(&h).unwrap();
        assert_eq!((i.positive, i.negative, i.zero), (1, 1, 0));
        assert_eq!(parity(&h).unwrap(), Parity::Even);
    }

    #[test]
    fn degenerate_form() {
        let m = mat(&[vec![1, 1], vec![1, 1]]);
        let i = inertia(&m).unwrap();
        assert_eq!((i.positive, i.negative, i.zero), (1, 0, 1));
    }

    #[test]
    fn non_symmetric_rejected() {
        let m = mat(&[vec![0, 1], vec![2, 0]]);
        assert_eq!(signature(&m), Err(AlgebraError::NonSymmetric));
        assert_eq!(parity(&m), Err(AlgebraError::NonSymmetric));
    }

    #[test]
    fn determinants() {
        assert_eq!(determinant(&IntMatrix::zeros(0, 0)).unwrap(), BigInt::one());
        assert_eq!(determinant(&mat(&[vec![0, 1], vec![1, 0]])).unwrap(), BigInt::from(-1));
        assert_eq!(
            determinant(&mat(&[vec![2, 0, 1], vec![1, 3, 2], vec![1, 1, 2]])).unwrap(),
            BigInt::from(6)
        );
        assert_eq!(determinant(&mat(&[vec![1, 2], vec![2, 4]])).unwrap(), BigInt::zero());
        assert!(determinant(&IntMatrix::zeros(1, 2)).is_err());
    }
}
