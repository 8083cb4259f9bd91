//! Kirby diagrams at linking-matrix level.
//!
//! A diagram has `g1` 1-handles, `k` framed 2-handles, the symmetric `k x k`
//! linking matrix (framings on the diagonal) and the `g1 x k` matrix of
//! algebraic run-over counts of each attaching circle through each 1-handle.
//! Two diagrams with the same matrices are identified: knotting beyond linking
//! numbers is not represented.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::algebra::{
    cokernel, congruence_search, kernel_basis, parity, signature, AbelianGroup, AlgebraError, CongruenceCert,
    CongruenceMove, FormInvariants, IntMatrix, Parity,
};

/// State budget used by [`prove_prop_dim4`].
pub const PROP_DIM4_BUDGET: usize = 100_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum KirbyError {
    #[error("linking matrix must be symmetric")]
    NonSymmetric,
    #[error("inconsistent dimensions: {0}")]
    Dimension(String),
    #[error("diagram has {0} 1-handles; the intersection form needs a 2-handlebody without them")]
    HasOneHandles(usize),
    #[error("handle {index} out of range (diagram has {count} 2-handles)")]
    IndexOutOfRange { index: usize, count: usize },
    #[error("cannot slide handle {0} over itself")]
    SameHandle(usize),
    #[error("handle {handle} cannot be blown down: {residual}")]
    NotBlowDownable { handle: usize, residual: String },
    #[error("boundary H1 = {0} has torsion, so the boundary is not a connected sum of S1xS2")]
    NotClosable(AbelianGroup),
    #[error("no certificate within a budget of {0} states")]
    SearchBudget(usize),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KirbyDiagram {
    one_handles: usize,
    labels: Vec<String>,
    linking: IntMatrix,
    incidence: IntMatrix,
}

impl KirbyDiagram {
    /// Labels default to `h1..hk`.
    pub fn new(one_handles: usize, linking: IntMatrix, incidence: IntMatrix) -> Result<Self, KirbyError> {
        let labels = (1..=linking.rows()).map(|k| format!("h{k}")).collect();
        Self::with_labels(one_handles, labels, linking, incidence)
    }

    pub fn with_labels(
        one_handles: usize,
        labels: Vec<String>,
        linking: IntMatrix,
        incidence: IntMatrix,
    ) -> Result<Self, KirbyError> {
        if !linking.is_square() {
            return Err(KirbyError::Dimension(format!(
                "linking matrix is {}x{}",
                linking.rows(),
                linking.cols()
            )));
        }
        if !linking.is_symmetric() {
            return Err(KirbyError::NonSymmetric);
        }
        let k = linking.rows();
        if labels.len() != k {
            return Err(KirbyError::Dimension(format!(
                "{} labels for {k} 2-handles",
                labels.len()
            )));
        }
        if incidence.rows() != one_handles || incidence.cols() != k {
            return Err(KirbyError::Dimension(format!(
                "incidence is {}x{}, expected {one_handles}x{k}",
                incidence.rows(),
                incidence.cols()
            )));
        }
        Ok(Self {
            one_handles,
            labels,
            linking,
            incidence,
        })
    }

    /// 2-handles only; incidence is empty.
    pub fn from_linking(linking: IntMatrix) -> Result<Self, KirbyError> {
        let k = linking.cols();
        Self::new(0, linking, IntMatrix::zeros(0, k))
    }

    pub fn empty() -> Self {
        Self::from_linking(IntMatrix::zeros(0, 0)).expect("empty diagram")
    }

    /// `g` 1-handles and nothing else.
    pub fn one_handles_only(g: usize) -> Self {
        Self::new(g, IntMatrix::zeros(0, 0), IntMatrix::zeros(g, 0)).expect("consistent")
    }

    pub fn unknot(framing: i64) -> Self {
        Self::from_linking(IntMatrix::diagonal(&[framing])).expect("1x1 is symmetric")
    }

    /// Hopf link with the given framings.
    pub fn hopf(a: i64, b: i64) -> Self {
        Self::from_linking(IntMatrix::from_rows(&[vec![a, 1], vec![1, b]]).unwrap()).expect("symmetric")
    }

    pub fn one_handle_count(&self) -> usize {
        self.one_handles
    }

    pub fn two_handle_count(&self) -> usize {
        self.linking.rows()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn linking(&self) -> &IntMatrix {
        &self.linking
    }

    pub fn incidence(&self) -> &IntMatrix {
        &self.incidence
    }

    fn check_index(&self, i: usize) -> Result<(), KirbyError> {
        let count = self.two_handle_count();
        if i >= count {
            return Err(KirbyError::IndexOutOfRange { index: i + 1, count });
        }
        Ok(())
    }

    fn fresh_label(&self) -> String {
        (1..)
            .map(|k| format!("h{k}"))
            .find(|l| !self.labels.contains(l))
            .expect("unbounded label supply")
    }
}

/// `g1=1 k=2 linking=[[0,1],[1,0]] incidence=[[0,0]]`
impl fmt::Display for KirbyDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "g1={} k={} linking={} incidence={}",
            self.one_handles,
            self.two_handle_count(),
            self.linking,
            self.incidence
        )
    }
}

/// The linking matrix read as the intersection form of the closed manifold.
pub fn intersection_form(d: &KirbyDiagram) -> Result<IntMatrix, KirbyError> {
    if d.one_handles > 0 {
        return Err(KirbyError::HasOneHandles(d.one_handles));
    }
    Ok(d.linking.clone())
}

/// Slides 2-handle `i` over 2-handle `j` (0-based): the class `e_i` becomes
/// `e_i + eps * e_j`, so row and column `i` of the linking matrix gain `eps`
/// times row and column `j`, and incidence column `i` gains `eps` times
/// column `j`.
pub fn handle_slide(d: &KirbyDiagram, i: usize, j: usize, eps: i8) -> Result<KirbyDiagram, KirbyError> {
    d.check_index(i)?;
    d.check_index(j)?;
    if i == j {
        return Err(KirbyError::SameHandle(i + 1));
    }
    assert!(eps == 1 || eps == -1, "slide sign must be ±1");
    let linking = CongruenceMove::AddMultiple {
        target: i,
        source: j,
        sign: eps,
    }
    .apply(&d.linking)
    .expect("indices checked");
    let mut incidence = d.incidence.clone();
    incidence.add_col_multiple(i, j, &BigInt::from(eps));
    Ok(KirbyDiagram {
        linking,
        incidence,
        ..d.clone()
    })
}

/// Adds a split `sign`-framed unknot (`sign` = ±1).
pub fn blow_up(d: &KirbyDiagram, sign: i8) -> KirbyDiagram {
    assert!(sign == 1 || sign == -1, "blow-up sign must be ±1");
    let mut labels = d.labels.clone();
    labels.push(d.fresh_label());
    let linking = d.linking.direct_sum(&IntMatrix::diagonal(&[sign as i64]));
    let mut incidence = IntMatrix::zeros(d.one_handles, labels.len());
    for r in 0..d.one_handles {
        for c in 0..d.two_handle_count() {
            incidence.set(r, c, d.incidence.get(r, c).clone());
        }
    }
    KirbyDiagram {
        one_handles: d.one_handles,
        labels,
        linking,
        incidence,
    }
}

/// The slides `(target, source, eps)` that make handle `i` orthogonal to every
/// other 2-handle, assuming its framing is ±1.
fn clearing_slides(d: &KirbyDiagram, i: usize) -> Vec<(usize, usize, i8)> {
    let unit = d.linking.get(i, i).clone();
    let mut slides = Vec::new();
    for j in 0..d.two_handle_count() {
        if j == i {
            continue;
        }
        let lij = d.linking.get(j, i);
        // sliding j over i changes L_ji by eps * L_ii
        let eps: i8 = if (lij * &unit).is_positive() { -1 } else { 1 };
        let times = lij.abs();
        let mut n = BigInt::zero();
        while n < times {
            slides.push((j, i, eps));
            n += 1;
        }
    }
    slides
}

/// Removes 2-handle `i` (0-based) after sliding every other 2-handle off it.
/// Needs framing ±1 and no run-over through 1-handles.
pub fn blow_down(d: &KirbyDiagram, i: usize) -> Result<KirbyDiagram, KirbyError> {
    d.check_index(i)?;
    let framing = d.linking.get(i, i);
    if !framing.abs().is_one() {
        return Err(KirbyError::NotBlowDownable {
            handle: i + 1,
            residual: format!("framing {framing} is not ±1"),
        });
    }
    if let Some(r) = (0..d.one_handles).find(|&r| !d.incidence.get(r, i).is_zero()) {
        return Err(KirbyError::NotBlowDownable {
            handle: i + 1,
            residual: format!("runs {} times over 1-handle {}", d.incidence.get(r, i), r + 1),
        });
    }
    let mut cur = d.clone();
    for (t, s, eps) in clearing_slides(d, i) {
        cur = handle_slide(&cur, t, s, eps)?;
    }
    debug_assert!((0..cur.two_handle_count()).all(|j| j == i || cur.linking.get(i, j).is_zero()));
    let keep: Vec<usize> = (0..cur.two_handle_count()).filter(|&j| j != i).collect();
    let rows: Vec<usize> = (0..cur.one_handles).collect();
    let mut labels = cur.labels.clone();
    labels.remove(i);
    Ok(KirbyDiagram {
        one_handles: cur.one_handles,
        labels,
        linking: cur.linking.remove_index(i),
        incidence: cur.incidence.select(&rows, &keep),
    })
}

/// `H_1` of the boundary 3-manifold. Each 1-handle is replaced by a 0-framed
/// unknot linked with the 2-handles according to the incidence matrix, and the
/// answer is the cokernel of the combined linking matrix.
pub fn boundary_h1(d: &KirbyDiagram) -> AbelianGroup {
    let g = d.one_handles;
    let m = IntMatrix::block(
        &IntMatrix::zeros(g, g),
        &d.incidence,
        &d.incidence.transpose(),
        &d.linking,
    )
    .expect("block shapes agree");
    cokernel(&m)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClosedInvariants {
    pub euler_characteristic: i64,
    pub signature: i64,
    /// Only reported without 1-handles.
    pub parity: Option<Parity>,
    pub three_handles: usize,
    pub h1_boundary: AbelianGroup,
}

/// Invariants of the closed 4-manifold obtained by adding 3-handles and a
/// 4-handle. A torsion-free boundary `H_1` is necessary for the boundary to be
/// `#g S1xS2`, but not sufficient; only the necessary condition is checked.
pub fn closed_invariants(d: &KirbyDiagram) -> Result<ClosedInvariants, KirbyError> {
    let h = boundary_h1(d);
    if !h.is_free() {
        return Err(KirbyError::NotClosable(h));
    }
    let g3 = h.free_rank();
    let k = d.two_handle_count() as i64;
    // H_2 of the 2-handlebody is the kernel of the incidence map
    let form = if d.one_handles == 0 {
        d.linking.clone()
    } else {
        let b = kernel_basis(&d.incidence);
        &(&b.transpose() * &d.linking) * &b
    };
    Ok(ClosedInvariants {
        euler_characteristic: 2 - d.one_handles as i64 + k - g3 as i64,
        signature: signature(&form)?,
        parity: if d.one_handles == 0 {
            Some(parity(&d.linking)?)
        } else {
            None
        },
        three_handles: g3,
        h1_boundary: h,
    })
}

/// The two intersection forms of `(S2xS2) # -CP2` and `CP2 # -CP2 # -CP2`.
pub fn prop_dim4_forms() -> (IntMatrix, IntMatrix) {
    let hyperbolic = IntMatrix::from_rows(&[vec![0, 1], vec![1, 0]]).unwrap();
    (
        hyperbolic.direct_sum(&IntMatrix::diagonal(&[-1])),
        IntMatrix::diagonal(&[1, -1, -1]),
    )
}

/// A verified congruence certificate between [`prop_dim4_forms`].
pub fn prove_prop_dim4() -> Result<CongruenceCert, KirbyError> {
    let (a, b) = prop_dim4_forms();
    debug_assert_eq!(FormInvariants::of(&a)?, FormInvariants::of(&b)?);
    match congruence_search(&a, &b, PROP_DIM4_BUDGET)? {
        Some(cert) if cert.verify() => Ok(cert),
        _ => Err(KirbyError::SearchBudget(PROP_DIM4_BUDGET)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mat(rows: &[Vec<i64>]) -> IntMatrix {
        IntMatrix::from_rows(rows).unwrap()
    }

    #[test]
    fn slides() {
        let d = KirbyDiagram::from_linking(IntMatrix::diagonal(&[1, 0])).unwrap();
        assert_eq!(
            handle_slide(&d, 1, 0, 1).unwrap().linking(),
            &mat(&[vec![1, 1], vec![1, 1]])
        );
        let h = KirbyDiagram::hopf(0, 0);
        let s = handle_slide(&h, 0, 1, 1).unwrap();
        assert_eq!(s.linking(), &mat(&[vec![2, 1], vec![1, 0]]));
        assert_eq!(handle_slide(&s, 0, 1, -1).unwrap(), h);
        assert_eq!(handle_slide(&h, 0, 0, 1), Err(KirbyError::SameHandle(1)));
        assert_eq!(
            handle_slide(&h, 0, 2, 1),
            Err(KirbyError::IndexOutOfRange { index: 3, count: 2 })
        );
    }

    #[test]
    fn slide_moves_incidence() {
        let d = KirbyDiagram::new(1, IntMatrix::diagonal(&[0, 0]), mat(&[vec![1, 2]])).unwrap();
        let s = handle_slide(&d, 0, 1, -1).unwrap();
        assert_eq!(s.incidence(), &mat(&[vec![-1, 2]]));
    }

    #[test]
    fn blow_ups() {
        let up = blow_up(&KirbyDiagram::empty(), 1);
        assert_eq!(up.linking(), &IntMatrix::diagonal(&[1]));
        assert_eq!(blow_down(&KirbyDiagram::unknot(-1), 0).unwrap(), KirbyDiagram::empty());
        assert!(matches!(
            blow_down(&KirbyDiagram::hopf(0, 0), 0),
            Err(KirbyError::NotBlowDownable { .. })
        ));

        // a -1 unknot linking a 0-framed one twice; two slides clear it
        let d = KirbyDiagram::from_linking(mat(&[vec![0, 2], vec![2, -1]])).unwrap();
        let down = blow_down(&d, 1).unwrap();
        assert_eq!(down.linking(), &IntMatrix::diagonal(&[4]));
        assert_eq!(boundary_h1(&down), boundary_h1(&d));
    }

    #[test]
    fn boundaries() {
        assert_eq!(boundary_h1(&KirbyDiagram::one_handles_only(1)), AbelianGroup::free(1));
        assert_eq!(boundary_h1(&KirbyDiagram::unknot(5)).to_string(), "Z/5");
        assert_eq!(boundary_h1(&KirbyDiagram::unknot(0)), AbelianGroup::free(1));
        assert!(boundary_h1(&KirbyDiagram::hopf(0, 0)).is_trivial());
        // 2-handle running once over the 1-handle cancels it
        let cancel = KirbyDiagram::new(1, IntMatrix::diagonal(&[3]), mat(&[vec![1]])).unwrap();
        assert!(boundary_h1(&cancel).is_trivial());
    }

    #[test]
    fn closed() {
        let s4 = closed_invariants(&KirbyDiagram::empty()).unwrap();
        assert_eq!((s4.euler_characteristic, s4.signature, s4.three_handles), (2, 0, 0));
        let s1s3 = closed_invariants(&KirbyDiagram::one_handles_only(1)).unwrap();
        assert_eq!(
            (s1s3.euler_characteristic, s1s3.three_handles, s1s3.parity),
            (0, 1, None)
        );
        let s2s2 = closed_invariants(&KirbyDiagram::hopf(0, 0)).unwrap();
        assert_eq!(
            (s2s2.euler_characteristic, s2s2.signature, s2s2.parity),
            (4, 0, Some(Parity::Even))
        );
        let cp2 = closed_invariants(&KirbyDiagram::unknot(1)).unwrap();
        assert_eq!(
            (cp2.euler_characteristic, cp2.signature, cp2.parity),
            (3, 1, Some(Parity::Odd))
        );
        assert!(matches!(
            closed_invariants(&KirbyDiagram::unknot(2)),
            Err(KirbyError::NotClosable(_))
        ));
        assert_eq!(
            intersection_form(&KirbyDiagram::empty()).unwrap(),
            IntMatrix::zeros(0, 0)
        );
        assert_eq!(
            intersection_form(&KirbyDiagram::one_handles_only(1)),
            Err(KirbyError::HasOneHandles(1))
        );
    }

    #[test]
    fn prop_dim4() {
        let cert = prove_prop_dim4().unwrap();
        let (a, b) = prop_dim4_forms();
        assert_eq!(cert.source, a);
        assert_eq!(cert.replay().unwrap(), b);
    }
}
