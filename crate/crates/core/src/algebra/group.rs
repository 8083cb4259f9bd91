use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::{smith_normal_form, IntMatrix};

/// Finitely generated abelian group `Z^free_rank ⊕ Z/d1 ⊕ ... ⊕ Z/dt` with
/// every `di >= 2` and `di | d(i+1)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct AbelianGroup {
    free_rank: usize,
    torsion: Vec<BigInt>,
}

impl AbelianGroup {
    pub fn trivial() -> Self {
        Self::default()
    }

    pub fn free(rank: usize) -> Self {
        Self {
            free_rank: rank,
            torsion: Vec::new(),
        }
    }

    /// Canonicalises arbitrary cyclic orders: zeros become free summands, units vanish.
    pub fn from_cyclic_orders(free_rank: usize, orders: &[BigInt]) -> Self {
        let diag: Vec<BigInt> = orders.to_vec();
        let m = IntMatrix::diagonal(&diag);
        let mut g = cokernel(&m);
        g.free_rank += free_rank;
        g
    }

    pub fn free_rank(&self) -> usize {
        self.free_rank
    }

    pub fn torsion_divisors(&self) -> &[BigInt] {
        &self.torsion
    }

    pub fn is_trivial(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }

    pub fn is_free(&self) -> bool {
        self.torsion.is_empty()
    }

    /// Group order, `None` when infinite.
    pub fn order(&self) -> Option<BigInt> {
        (self.free_rank == 0).then(|| self.torsion.iter().product())
    }

    /// Direct sum, re-canonicalised.
    pub fn sum(&self, other: &AbelianGroup) -> AbelianGroup {
        let orders: Vec<BigInt> = self.torsion.iter().chain(&other.torsion).cloned().collect();
        Self::from_cyclic_orders(self.free_rank + other.free_rank, &orders)
    }
}

/// `0`, `Z`, `Z^2 + Z/2 + Z/6`.
impl fmt::Display for AbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_trivial() {
            return write!(f, "0");
        }
        let mut parts = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        parts.extend(self.torsion.iter().map(|d| format!("Z/{d}")));
        write!(f, "{}", parts.join(" + "))
    }
}

/// Cokernel of `m` viewed as a map `Z^cols -> Z^rows`.
pub fn cokernel(m: &IntMatrix) -> AbelianGroup {
    let snf = smith_normal_form(m);
    let divisors = snf.divisors();
    let nonzero = divisors.iter().filter(|d| !d.is_zero()).count();
    let torsion = divisors.into_iter().filter(|d| !d.is_zero() && !d.is_one()).collect();
    AbelianGroup {
        free_rank: m.rows() - nonzero,
        torsion,
    }
}

/// A basis of the integer kernel of `m`, as the columns of the returned
/// `cols x (cols - rank)` matrix.
pub fn kernel_basis(m: &IntMatrix) -> IntMatrix {
    let snf = smith_normal_form(m);
    let rank = snf.rank();
    let keep: Vec<usize> = (rank..m.cols()).collect();
    let all: Vec<usize> = (0..m.cols()).collect();
    snf.v.select(&all, &keep)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mat(rows: &[Vec<i64>]) -> IntMatrix {
        IntMatrix::from_rows(rows).unwrap()
    }

    #[test]
    fn basic_cokernels() {
        assert!(cokernel(&mat(&[vec![1]])).is_trivial());
        assert_eq!(cokernel(&mat(&[vec![0]])), AbelianGroup::free(1));
        assert_eq!(cokernel(&mat(&[vec![2]])).to_string(), "Z/2");
        assert_eq!(cokernel(&IntMatrix::zeros(3, 0)), AbelianGroup::free(3));
        assert!(cokernel(&IntMatrix::zeros(0, 0)).is_trivial());
    }

    #[test]
    fn display_and_sum() {
        let g = AbelianGroup::from_cyclic_orders(2, &[BigInt::from(4), BigInt::from(6), BigInt::from(0)]);
        assert_eq!(g.to_string(), "Z^3 + Z/2 + Z/12");
        let h = AbelianGroup::from_cyclic_orders(0, &[BigInt::from(3)]);
        assert_eq!(h.sum(&h).to_string(), "Z/3 + Z/3");
        assert_eq!(h.order(), Some(BigInt::from(3)));
        assert_eq!(g.order(), None);
    }

    #[test]
    fn kernel_of_rank_one() {
        let m = mat(&[vec![1, 2, 3]]);
        let k = kernel_basis(&m);
        assert_eq!((k.rows(), k.cols()), (3, 2));
        assert!((&m * &k).is_zero());
    }
}
