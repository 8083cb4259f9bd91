use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use super::{AlgebraError, FormInvariants, IntMatrix};

/// One elementary congruence move on a symmetric matrix. Indices are 0-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CongruenceMove {
    /// Add `sign` times row/col `source` to row/col `target` (basis change `e_t += sign * e_s`).
    AddMultiple {
        target: usize,
        source: usize,
        sign: i8,
    },
    Swap {
        a: usize,
        b: usize,
    },
    Negate {
        index: usize,
    },
    /// Append a `sign` (±1) diagonal block.
    AppendUnit {
        sign: i8,
    },
    /// Remove index `index`, which must be an isolated ±1 diagonal block.
    RemoveUnit {
        index: usize,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ReplayError {
    #[error("step {step}: {reason}")]
    Inapplicable { step: usize, reason: String },
    #[error("replay ends at {reached}, certificate claims {claimed}")]
    WrongTarget { reached: IntMatrix, claimed: IntMatrix },
}

impl CongruenceMove {
    pub fn apply(&self, m: &IntMatrix) -> Result<IntMatrix, String> {
        let n = m.rows();
        let in_range = |i: usize| {
            if i < n {
                Ok(())
            } else {
                Err(format!("index {} out of range for dimension {n}", i + 1))
            }
        };
        let mut out = m.clone();
        match *self {
            CongruenceMove::AddMultiple { target, source, sign } => {
                in_range(target)?;
                in_range(source)?;
                if target == source {
                    return Err("add needs two distinct indices".into());
                }
                if sign != 1 && sign != -1 {
                    return Err(format!("sign must be ±1, got {sign}"));
                }
                let k = BigInt::from(sign);
                out.add_row_multiple(target, source, &k);
                out.add_col_multiple(target, source, &k);
            }
            CongruenceMove::Swap { a, b } => {
                in_range(a)?;
                in_range(b)?;
                out.swap_rows(a, b);
                out.swap_cols(a, b);
            }
            CongruenceMove::Negate { index } => {
                in_range(index)?;
                out.negate_row(index);
                out.negate_col(index);
            }
            CongruenceMove::AppendUnit { sign } => {
                if sign != 1 && sign != -1 {
                    return Err(format!("sign must be ±1, got {sign}"));
                }
                out = m.direct_sum(&IntMatrix::diagonal(&[sign as i64]));
            }
            CongruenceMove::RemoveUnit { index } => {
                in_range(index)?;
                if !m.get(index, index).abs().is_one() {
                    return Err(format!("diagonal entry {} is not ±1", index + 1));
                }
                if (0..n).any(|j| j != index && !m.get(index, j).is_zero()) {
                    return Err(format!("index {} is not an isolated block", index + 1));
                }
                out = m.remove_index(index);
            }
        }
        Ok(out)
    }

    pub fn inverse(&self) -> Option<CongruenceMove> {
        Some(match *self {
            CongruenceMove::AddMultiple { target, source, sign } => CongruenceMove::AddMultiple {
                target,
                source,
                sign: -sign,
            },
            m @ (CongruenceMove::Swap { .. } | CongruenceMove::Negate { .. }) => m,
            // Appending and removing only invert each other relative to a known dimension.
            CongruenceMove::AppendUnit { .. } | CongruenceMove::RemoveUnit { .. } => return None,
        })
    }
}

/// Trace-file syntax, with 1-based indices: `add i=1 j=3 eps=1`.
impl fmt::Display for CongruenceMove {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            CongruenceMove::AddMultiple { target, source, sign } => {
                write!(f, "add i={} j={} eps={}", target + 1, source + 1, sign)
            }
            CongruenceMove::Swap { a, b } => write!(f, "swap i={} j={}", a + 1, b + 1),
            CongruenceMove::Negate { index } => write!(f, "negate i={}", index + 1),
            CongruenceMove::AppendUnit { sign } => write!(f, "append sign={sign}"),
            CongruenceMove::RemoveUnit { index } => write!(f, "remove i={}", index + 1),
        }
    }
}

impl std::str::FromStr for CongruenceMove {
    type Err = AlgebraError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = |msg: String| AlgebraError::Parse(msg);
        let mut parts = s.split_whitespace();
        let kind = parts.next().ok_or_else(|| bad("empty move".into()))?;
        let mut params = HashMap::new();
        for p in parts {
            let (k, v) = p
                .split_once('=')
                .ok_or_else(|| bad(format!("parameter {p:?} is not key=value")))?;
            params.insert(k, v);
        }
        let get = |k: &str| {
            params
                .get(k)
                .copied()
                .ok_or_else(|| bad(format!("{kind} needs parameter {k}")))
        };
        let index = |k: &str| -> Result<usize, AlgebraError> {
            let v = get(k)?;
            match v.parse::<usize>() {
                Ok(n) if n >= 1 => Ok(n - 1),
                _ => Err(bad(format!("{k}={v} is not a 1-based index"))),
            }
        };
        let unit = |k: &str| -> Result<i8, AlgebraError> {
            match get(k)? {
                "1" | "+1" | "+" => Ok(1),
                "-1" | "-" => Ok(-1),
                v => Err(bad(format!("{k}={v} is not ±1"))),
            }
        };
        match kind {
            "add" => Ok(CongruenceMove::AddMultiple {
                target: index("i")?,
                source: index("j")?,
                sign: unit("eps")?,
            }),
            "swap" => Ok(CongruenceMove::Swap {
                a: index("i")?,
                b: index("j")?,
            }),
            "negate" => Ok(CongruenceMove::Negate { index: index("i")? }),
            "append" => Ok(CongruenceMove::AppendUnit { sign: unit("sign")? }),
            "remove" => Ok(CongruenceMove::RemoveUnit { index: index("i")? }),
            _ => Err(bad(format!("unknown congruence move {kind:?}"))),
        }
    }
}

/// A replayable proof that `source` is integrally congruent to `target`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CongruenceCert {
    pub source: IntMatrix,
    pub target: IntMatrix,
    pub moves: Vec<CongruenceMove>,
}

impl CongruenceCert {
    /// Replays the moves from `source`; succeeds only if every step applies
    /// and the result equals `target` exactly.
    pub fn replay(&self) -> Result<IntMatrix, ReplayError> {
        let mut m = self.source.clone();
        for (step, mv) in self.moves.iter().enumerate() {
            m = mv
                .apply(&m)
                .map_err(|reason| ReplayError::Inapplicable { step, reason })?;
        }
        if m != self.target {
            return Err(ReplayError::WrongTarget {
                reached: m,
                claimed: self.target.clone(),
            });
        }
        Ok(m)
    }

    pub fn verify(&self) -> bool {
        self.replay().is_ok()
    }
}

/// How many ±1 blocks of each sign to append so that a form of dimension
/// `dim` and signature `sig` reaches `(target_dim, target_sig)`.
fn unit_padding(dim: usize, sig: i64, target_dim: usize, target_sig: i64) -> Option<(usize, usize)> {
    let d = target_dim.checked_sub(dim)? as i64;
    let delta = target_sig - sig;
    if (d + delta) % 2 != 0 || delta.abs() > d {
        return None;
    }
    Some((((d + delta) / 2) as usize, ((d - delta) / 2) as usize))
}

fn pad(m: &IntMatrix, positive: usize, negative: usize) -> (IntMatrix, Vec<CongruenceMove>) {
    let mut moves = Vec::new();
    let mut out = m.clone();
    for sign in std::iter::repeat_n(1i8, positive).chain(std::iter::repeat_n(-1i8, negative)) {
        let mv = CongruenceMove::AppendUnit { sign };
        out = mv.apply(&out).expect("append always applies");
        moves.push(mv);
    }
    (out, moves)
}

fn alphabet(n: usize) -> Vec<CongruenceMove> {
    let mut moves = Vec::new();
    for target in 0..n {
        for source in 0..n {
            if source != target {
                for sign in [1, -1] {
                    moves.push(CongruenceMove::AddMultiple { target, source, sign });
                }
            }
        }
    }
    for a in 0..n {
        for b in a + 1..n {
            moves.push(CongruenceMove::Swap { a, b });
        }
    }
    for index in 0..n {
        moves.push(CongruenceMove::Negate { index });
    }
    moves
}

struct Side {
    states: Vec<(IntMatrix, Option<(usize, CongruenceMove)>)>,
    index: HashMap<IntMatrix, usize>,
    frontier: Vec<usize>,
}

impl Side {
    fn new(root: IntMatrix) -> Self {
        let mut index = HashMap::new();
        index.insert(root.clone(), 0);
        Self {
            states: vec![(root, None)],
            index,
            frontier: vec![0],
        }
    }

    fn path_to(&self, mut id: usize) -> Vec<CongruenceMove> {
        let mut path = Vec::new();
        while let Some((parent, mv)) = self.states[id].1 {
            path.push(mv);
            id = parent;
        }
        path.reverse();
        path
    }
}

/// Searches for a certificate transforming `a` into `b`.
///
/// Forms of different dimension are first stabilised with ±1 blocks. The
/// congruence invariants (rank, signature, determinant, parity) must agree
/// or the search returns `None` without exploring. Otherwise a bidirectional
/// breadth-first search runs over add/swap/negate moves, with intermediate
/// entries bounded by two more than the largest endpoint entry. `max_steps`
/// caps the number of states generated. `None` means inconclusive, not
/// "not congruent". For a fixed `max_steps` the certificate is deterministic.
pub fn congruence_search(
    a: &IntMatrix,
    b: &IntMatrix,
    max_steps: usize,
) -> Result<Option<CongruenceCert>, AlgebraError> {
    let ia = FormInvariants::of(a)?;
    let ib = FormInvariants::of(b)?;

    let (dim, sig) = if ia.dimension >= ib.dimension {
        (ia.dimension, ia.signature)
    } else {
        (ib.dimension, ib.signature)
    };
    let Some((ap, an)) = unit_padding(ia.dimension, ia.signature, dim, sig) else {
        return Ok(None);
    };
    let Some((bp, bn)) = unit_padding(ib.dimension, ib.signature, dim, sig) else {
        return Ok(None);
    };
    let (a_pad, prefix) = pad(a, ap, an);
    let (b_pad, _) = pad(b, bp, bn);
    let suffix: Vec<CongruenceMove> = (ib.dimension..dim)
        .rev()
        .map(|index| CongruenceMove::RemoveUnit { index })
        .collect();

    if FormInvariants::of(&a_pad)? != FormInvariants::of(&b_pad)? {
        return Ok(None);
    }

    let Some(middle) = bidirectional(&a_pad, &b_pad, max_steps) else {
        return Ok(None);
    };
    let moves = prefix.into_iter().chain(middle).chain(suffix).collect();
    let cert = CongruenceCert {
        source: a.clone(),
        target: b.clone(),
        moves,
    };
    debug_assert!(cert.verify());
    Ok(Some(cert))
}

fn bidirectional(a: &IntMatrix, b: &IntMatrix, max_steps: usize) -> Option<Vec<CongruenceMove>> {
    if a == b {
        return Some(Vec::new());
    }
    let n = a.rows();
    let moves = alphabet(n);
    let bound = a.max_abs().max(b.max_abs()) + BigInt::from(2);
    let mut fwd = Side::new(a.clone());
    let mut bwd = Side::new(b.clone());
    let mut generated = 0usize;

    loop {
        if fwd.frontier.is_empty() || bwd.frontier.is_empty() {
            return None;
        }
        let forward = fwd.frontier.len() <= bwd.frontier.len();
        let (grow, other) = if forward { (&mut fwd, &bwd) } else { (&mut bwd, &fwd) };
        let mut next = Vec::new();
        for &id in &std::mem::take(&mut grow.frontier) {
            for mv in &moves {
                let m = mv.apply(&grow.states[id].0).expect("alphabet moves apply");
                if grow.index.contains_key(&m) || m.max_abs() > bound {
                    continue;
                }
                generated += 1;
                if generated > max_steps {
                    return None;
                }
                let new_id = grow.states.len();
                grow.index.insert(m.clone(), new_id);
                grow.states.push((m.clone(), Some((id, *mv))));
                if let Some(&meet) = other.index.get(&m) {
                    let (f_id, b_id) = if forward { (new_id, meet) } else { (meet, new_id) };
                    let mut path = fwd.path_to(f_id);
                    let back = bwd.path_to(b_id);
                    path.extend(
                        back.iter()
                            .rev()
                            .map(|mv| mv.inverse().expect("add/swap/negate invert")),
                    );
                    return Some(path);
                }
                next.push(new_id);
            }
        }
        let grow = if forward { &mut fwd } else { &mut bwd };
        grow.frontier = next;
    }
}
