//! Five-manifolds given by open books with identity monodromy.
//!
//! With page `P` (a 4-dimensional handlebody given by a Kirby diagram) and
//! identity monodromy the manifold is `M = P x S1 ∪ ∂P x D2 = ∂(P x D2)`.
//! A handle of index `i` in `P` gives handles of index `i` and `6 - i` in
//! `M`: `P x D2` has the same handles as `P`, and turning it upside down gives
//! the dual ones. The resulting cellular chain complex is
//!
//! ```text
//! Z <- Z^g1 <- Z^k <- Z^k <- Z^g1 <- Z
//! ```
//!
//! with the incidence matrix as the only nonzero boundary on the lower half
//! and its transpose on the upper half.

use std::fmt;

use thiserror::Error;

use crate::algebra::{cokernel, kernel_basis, smith_normal_form, AbelianGroup, IntMatrix};
use crate::kirby::KirbyDiagram;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OpenBookError {
    #[error("page mixes {one_handles} 1-handles with {two_handles} 2-handles")]
    UnsupportedPage { one_handles: usize, two_handles: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Monodromy {
    Identity,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OpenBook {
    pub page: KirbyDiagram,
    pub monodromy: Monodromy,
}

impl OpenBook {
    pub fn new(page: KirbyDiagram) -> Self {
        Self {
            page,
            monodromy: Monodromy::Identity,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiveManifoldInvariants {
    /// `H_0` through `H_5`.
    pub homology: [AbelianGroup; 6],
    /// Framings mod 2 of the 2-handles, present when the page has no 1-handles.
    pub w2_parity: Option<Vec<bool>>,
}

impl FiveManifoldInvariants {
    pub fn euler_characteristic(&self) -> i64 {
        self.homology
            .iter()
            .enumerate()
            .map(|(i, h)| if i % 2 == 0 { 1 } else { -1 } * h.free_rank() as i64)
            .sum()
    }
}

/// `H = (Z, 0, Z, Z, 0, Z) w2=[0]`
impl fmt::Display for FiveManifoldInvariants {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let groups: Vec<String> = self.homology.iter().map(|g| g.to_string()).collect();
        write!(f, "H = ({})", groups.join(", "))?;
        match &self.w2_parity {
            Some(p) => {
                let bits: Vec<&str> = p.iter().map(|&b| if b { "1" } else { "0" }).collect();
                write!(f, " w2=[{}]", bits.join(","))
            }
            None => write!(f, " w2=n/a"),
        }
    }
}

/// Homology of `ker d_in / im d_out` for `d_in: C_i -> C_{i-1}` and
/// `d_out: C_{i+1} -> C_i`, both given as matrices.
fn homology_at(dim: usize, d_in: &IntMatrix, d_out: &IntMatrix) -> AbelianGroup {
    let z = kernel_basis(d_in);
    if z.cols() == 0 {
        return AbelianGroup::trivial();
    }
    // Express im d_out in the kernel basis. The kernel basis columns form part
    // of a unimodular matrix, so the coordinates are exact integers.
    let coords = solve_in_basis(&z, d_out);
    debug_assert_eq!(z.rows(), dim);
    cokernel(&coords)
}

/// Coordinates `c` with `basis * c = vectors`, for a basis that extends to a
/// unimodular matrix.
fn solve_in_basis(basis: &IntMatrix, vectors: &IntMatrix) -> IntMatrix {
    let n = basis.rows();
    let r = basis.cols();
    // u * basis * v = [I_r; 0], so v * (first r rows of u) is a left inverse
    let snf = smith_normal_form(basis);
    let rows: Vec<usize> = (0..r).collect();
    let all: Vec<usize> = (0..n).collect();
    let left = &snf.v * &snf.u.select(&rows, &all);
    &left * vectors
}

/// Homology and the framing-parity vector of `∂(page x D2)`.
pub fn five_invariants(ob: &OpenBook) -> Result<FiveManifoldInvariants, OpenBookError> {
    let d = &ob.page;
    let (g1, k) = (d.one_handle_count(), d.two_handle_count());
    if g1 > 0 && k > 0 {
        return Err(OpenBookError::UnsupportedPage {
            one_handles: g1,
            two_handles: k,
        });
    }
    let dims = [1, g1, k, k, g1, 1];
    // boundaries d_i: C_i -> C_{i-1}, i = 1..5; d_6 and d_0 are zero maps
    let inc = d.incidence().clone();
    let d: Vec<IntMatrix> = vec![
        IntMatrix::zeros(0, 1),
        IntMatrix::zeros(1, g1),
        inc.clone(),
        IntMatrix::zeros(k, k),
        inc.transpose(),
        IntMatrix::zeros(g1, 1),
        IntMatrix::zeros(1, 0),
    ];
    let homology: [AbelianGroup; 6] = std::array::from_fn(|i| homology_at(dims[i], &d[i], &d[i + 1]));
    debug_assert!(d.windows(2).all(|w| (&w[0] * &w[1]).is_zero()));
    let w2_parity = (g1 == 0).then(|| ob.page.linking().diagonal_entries().iter().map(|m| m.bit(0)).collect());
    Ok(FiveManifoldInvariants { homology, w2_parity })
}

/// Names the identity-monodromy examples: empty page `S5`, one 1-handle
/// `S1xS4`, one unknot with framing `m`: `S2xS3` for even `m` and the twisted
/// bundle `S2x~S3` for odd `m`.
pub fn identify_known(ob: &OpenBook) -> Option<&'static str> {
    let d = &ob.page;
    match (d.one_handle_count(), d.two_handle_count()) {
        (0, 0) => Some("S5"),
        (1, 0) => Some("S1xS4"),
        (0, 1) => {
            if d.linking().get(0, 0).bit(0) {
                Some("S2x~S3")
            } else {
                Some("S2xS3")
            }
        }
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn groups(ob: &OpenBook) -> Vec<String> {
        five_invariants(ob)
            .unwrap()
            .homology
            .iter()
            .map(|g| g.to_string())
            .collect()
    }

    #[test]
    fn examples() {
        assert_eq!(
            groups(&OpenBook::new(KirbyDiagram::empty())),
            ["Z", "0", "0", "0", "0", "Z"]
        );
        assert_eq!(
            groups(&OpenBook::new(KirbyDiagram::one_handles_only(1))),
            ["Z", "Z", "0", "0", "Z", "Z"]
        );
        assert_eq!(
            groups(&OpenBook::new(KirbyDiagram::unknot(0))),
            ["Z", "0", "Z", "Z", "0", "Z"]
        );
        assert_eq!(
            groups(&OpenBook::new(KirbyDiagram::one_handles_only(2))),
            ["Z", "Z^2", "0", "0", "Z^2", "Z"]
        );
    }

    #[test]
    fn names() {
        assert_eq!(identify_known(&OpenBook::new(KirbyDiagram::unknot(2))), Some("S2xS3"));
        assert_eq!(identify_known(&OpenBook::new(KirbyDiagram::unknot(-3))), Some("S2x~S3"));
        assert_eq!(identify_known(&OpenBook::new(KirbyDiagram::hopf(0, 0))), None);
        assert_eq!(identify_known(&OpenBook::new(KirbyDiagram::empty())), Some("S5"));
    }

    #[test]
    fn parity_vector() {
        let a = five_invariants(&OpenBook::new(KirbyDiagram::unknot(3))).unwrap();
        let b = five_invariants(&OpenBook::new(KirbyDiagram::unknot(4))).unwrap();
        assert_eq!(a.homology, b.homology);
        assert_eq!(a.w2_parity, Some(vec![true]));
        assert_eq!(b.w2_parity, Some(vec![false]));
        assert_eq!(a.euler_characteristic(), 0);
        assert_eq!(a.to_string(), "H = (Z, 0, Z, Z, 0, Z) w2=[1]");
    }

    #[test]
    fn mixed_pages_rejected() {
        let d = KirbyDiagram::new(1, IntMatrix::diagonal(&[0]), IntMatrix::diagonal(&[1])).unwrap();
        assert_eq!(
            five_invariants(&OpenBook::new(d)),
            Err(OpenBookError::UnsupportedPage {
                one_handles: 1,
                two_handles: 1
            })
        );
    }
}
