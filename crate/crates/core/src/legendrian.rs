//! Legendrian links in standard contact 3-space, given by front projections.
//!
//! A front is read left to right as a sequence of events acting on the strands
//! present at that moment, numbered from the top starting at 0:
//!
//! - `LeftCusp(s)` inserts a new pair of strands at positions `s` and `s + 1`;
//! - `RightCusp(s)` joins strands `s` and `s + 1`;
//! - `Crossing(s)` exchanges strands `s` and `s + 1`.
//!
//! There is no over/under data. At a crossing the strand of smaller slope (the
//! one moving down, from `s` to `s + 1`) is in front.
//!
//! Every x-monotone arc runs from a left cusp to a right cusp. Components are
//! numbered by their first left cusp. A component is oriented so that the upper
//! arc leaving its first left cusp points right, unless it is marked reversed.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::algebra::IntMatrix;
use crate::kirby::KirbyDiagram;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FrontError {
    #[error("front ends with {0} open strands")]
    OpenStrands(usize),
    #[error("event {event}: slot {slot} out of range with {strands} strands")]
    SlotOutOfRange { event: usize, slot: usize, strands: usize },
    #[error("no component {component}; the front has {count}")]
    NoSuchComponent { component: usize, count: usize },
    #[error("cannot parse front: {0}")]
    Parse(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FrontEvent {
    LeftCusp(usize),
    RightCusp(usize),
    Crossing(usize),
}

/// `Lc0`, `Rc1`, `X2`.
impl fmt::Display for FrontEvent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FrontEvent::LeftCusp(s) => write!(f, "Lc{s}"),
            FrontEvent::RightCusp(s) => write!(f, "Rc{s}"),
            FrontEvent::Crossing(s) => write!(f, "X{s}"),
        }
    }
}

impl FromStr for FrontEvent {
    type Err = FrontError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let (ctor, rest): (fn(usize) -> FrontEvent, &str) = if let Some(r) = s.strip_prefix("Lc") {
            (FrontEvent::LeftCusp, r)
        } else if let Some(r) = s.strip_prefix("Rc") {
            (FrontEvent::RightCusp, r)
        } else if let Some(r) = s.strip_prefix('X') {
            (FrontEvent::Crossing, r)
        } else {
            return Err(FrontError::Parse(format!("unknown event {s:?}")));
        };
        rest.parse()
            .map(ctor)
            .map_err(|_| FrontError::Parse(format!("bad slot in {s:?}")))
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct FrontDiagram {
    events: Vec<FrontEvent>,
    reversed: BTreeSet<usize>,
}

impl FrontDiagram {
    pub fn new(events: Vec<FrontEvent>) -> Self {
        Self {
            events,
            reversed: BTreeSet::new(),
        }
    }

    /// `[LeftCusp(0), RightCusp(0)]`: tb = -1, rot = 0.
    pub fn standard_unknot() -> Self {
        Self::new(vec![FrontEvent::LeftCusp(0), FrontEvent::RightCusp(0)])
    }

    /// Two stacked left cusps, three crossings between the middle strands.
    pub fn right_handed_trefoil() -> Self {
        use FrontEvent::*;
        Self::new(vec![
            LeftCusp(0),
            LeftCusp(2),
            Crossing(1),
            Crossing(1),
            Crossing(1),
            RightCusp(2),
            RightCusp(0),
        ])
    }

    pub fn events(&self) -> &[FrontEvent] {
        &self.events
    }

    pub fn is_reversed(&self, component: usize) -> bool {
        self.reversed.contains(&component)
    }

    /// Toggles the orientation of one component.
    pub fn reverse_component(&self, component: usize) -> Result<FrontDiagram, FrontError> {
        let count = self.component_count()?;
        if component >= count {
            return Err(FrontError::NoSuchComponent { component, count });
        }
        let mut out = self.clone();
        if !out.reversed.remove(&component) {
            out.reversed.insert(component);
        }
        Ok(out)
    }

    pub fn component_count(&self) -> Result<usize, FrontError> {
        Ok(trace(self)?.components)
    }
}

impl fmt::Display for FrontDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (k, e) in self.events.iter().enumerate() {
            if k > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{e}")?;
        }
        f.write_str("]")
    }
}

/// `[Lc0, Lc2, X1, Rc2, Rc0]`; brackets optional.
impl FromStr for FrontDiagram {
    type Err = FrontError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let body = s.trim();
        let body = body.strip_prefix('[').unwrap_or(body);
        let body = body.strip_suffix(']').unwrap_or(body);
        if body.trim().is_empty() {
            return Ok(FrontDiagram::default());
        }
        body.split(',')
            .map(str::parse)
            .collect::<Result<Vec<_>, _>>()
            .map(FrontDiagram::new)
    }
}

/// Checks strand bookkeeping only.
pub fn validate_front(f: &FrontDiagram) -> Result<(), FrontError> {
    let mut n = 0usize;
    for (event, e) in f.events.iter().enumerate() {
        let (slot, ok) = match *e {
            FrontEvent::LeftCusp(s) => (s, s <= n),
            FrontEvent::RightCusp(s) | FrontEvent::Crossing(s) => (s, s + 1 < n),
        };
        if !ok {
            return Err(FrontError::SlotOutOfRange {
                event: event + 1,
                slot,
                strands: n,
            });
        }
        match e {
            FrontEvent::LeftCusp(_) => n += 2,
            FrontEvent::RightCusp(_) => n -= 2,
            FrontEvent::Crossing(_) => {}
        }
    }
    if n != 0 {
        return Err(FrontError::OpenStrands(n));
    }
    Ok(())
}

struct Cusp {
    upper: usize,
    lower: usize,
}

struct Traced {
    components: usize,
    /// Per arc: owning component and whether it is traversed to the right.
    component: Vec<usize>,
    rightward: Vec<bool>,
    left_cusps: Vec<Cusp>,
    right_cusps: Vec<Cusp>,
    /// (over, under) arcs at each crossing.
    crossings: Vec<(usize, usize)>,
    /// Event index of each left cusp.
    left_cusp_event: Vec<usize>,
}

fn trace(f: &FrontDiagram) -> Result<Traced, FrontError> {
    validate_front(f)?;
    let mut strands: Vec<usize> = Vec::new();
    let mut arcs = 0usize;
    let mut left_cusps = Vec::new();
    let mut left_cusp_event = Vec::new();
    let mut right_cusps = Vec::new();
    let mut crossings = Vec::new();
    // per arc: index of its left and right cusp
    let mut starts_at = Vec::new();
    let mut ends_at = vec![];
    for (k, e) in f.events.iter().enumerate() {
        match *e {
            FrontEvent::LeftCusp(s) => {
                let (a, b) = (arcs, arcs + 1);
                arcs += 2;
                strands.splice(s..s, [a, b]);
                starts_at.extend([left_cusps.len(); 2]);
                ends_at.extend([usize::MAX; 2]);
                left_cusps.push(Cusp { upper: a, lower: b });
                left_cusp_event.push(k);
            }
            FrontEvent::RightCusp(s) => {
                let (a, b) = (strands[s], strands[s + 1]);
                strands.drain(s..s + 2);
                ends_at[a] = right_cusps.len();
                ends_at[b] = right_cusps.len();
                right_cusps.push(Cusp { upper: a, lower: b });
            }
            FrontEvent::Crossing(s) => {
                crossings.push((strands[s], strands[s + 1]));
                strands.swap(s, s + 1);
            }
        }
    }

    let mut component = vec![usize::MAX; arcs];
    let mut rightward = vec![false; arcs];
    let mut components = 0;
    for (c, cusp) in left_cusps.iter().enumerate() {
        if component[cusp.upper] != usize::MAX {
            continue;
        }
        let id = components;
        components += 1;
        let forward = !f.reversed.contains(&id);
        // walk the closed curve starting rightward along the upper arc
        let mut arc = cusp.upper;
        let mut going_right = true;
        loop {
            component[arc] = id;
            rightward[arc] = going_right == forward;
            let other = if going_right {
                let rc = &right_cusps[ends_at[arc]];
                if rc.upper == arc {
                    rc.lower
                } else {
                    rc.upper
                }
            } else {
                let lc = &left_cusps[starts_at[arc]];
                if lc.upper == arc {
                    lc.lower
                } else {
                    lc.upper
                }
            };
            arc = other;
            going_right = !going_right;
            if arc == cusp.upper {
                break;
            }
        }
        debug_assert!(starts_at[cusp.upper] == c);
    }
    Ok(Traced {
        components,
        component,
        rightward,
        left_cusps,
        right_cusps,
        crossings,
        left_cusp_event,
    })
}

impl Traced {
    fn crossing_sign(&self, over: usize, under: usize) -> i64 {
        if self.rightward[over] == self.rightward[under] {
            1
        } else {
            -1
        }
    }

    /// A cusp is traversed downward iff the walk enters on its upper arc.
    fn cusp_counts(&self, comp: usize) -> (i64, i64) {
        let (mut down, mut up) = (0, 0);
        for c in &self.right_cusps {
            if self.component[c.upper] == comp {
                if self.rightward[c.upper] {
                    down += 1
                } else {
                    up += 1
                }
            }
        }
        for c in &self.left_cusps {
            if self.component[c.upper] == comp {
                if self.rightward[c.upper] {
                    up += 1
                } else {
                    down += 1
                }
            }
        }
        (down, up)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ClassicalInvariants {
    pub writhe: i64,
    pub cusps: i64,
    pub tb: i64,
    pub rotation: i64,
}

/// Thurston-Bennequin number `writhe - cusps/2` and rotation number
/// `(down cusps - up cusps)/2`, per component.
pub fn classical_invariants(f: &FrontDiagram) -> Result<Vec<ClassicalInvariants>, FrontError> {
    let t = trace(f)?;
    Ok((0..t.components)
        .map(|comp| {
            let writhe = t
                .crossings
                .iter()
                .filter(|&&(o, u)| t.component[o] == comp && t.component[u] == comp)
                .map(|&(o, u)| t.crossing_sign(o, u))
                .sum();
            let (down, up) = t.cusp_counts(comp);
            let cusps = down + up;
            ClassicalInvariants {
                writhe,
                cusps,
                tb: writhe - cusps / 2,
                rotation: (down - up) / 2,
            }
        })
        .collect())
}

/// Linking numbers between distinct components; the diagonal is zero.
pub fn linking_numbers(f: &FrontDiagram) -> Result<IntMatrix, FrontError> {
    let t = trace(f)?;
    let k = t.components;
    let mut twice = vec![vec![0i64; k]; k];
    for &(o, u) in &t.crossings {
        let (a, b) = (t.component[o], t.component[u]);
        if a != b {
            let s = t.crossing_sign(o, u);
            twice[a][b] += s;
            twice[b][a] += s;
        }
    }
    let rows: Vec<Vec<i64>> = twice
        .into_iter()
        .map(|r| r.into_iter().map(|x| x / 2).collect())
        .collect();
    Ok(IntMatrix::from_rows(&rows).unwrap_or_else(|_| IntMatrix::zeros(0, 0)))
}

/// [`stabilize_component`] on component 0.
pub fn stabilize(f: &FrontDiagram, sign: i8) -> Result<FrontDiagram, FrontError> {
    stabilize_component(f, 0, sign)
}

/// Adds a zigzag next to the first left cusp of `component`. The result has
/// tb one lower and rotation changed by `sign` (±1).
pub fn stabilize_component(f: &FrontDiagram, component: usize, sign: i8) -> Result<FrontDiagram, FrontError> {
    assert!(sign == 1 || sign == -1, "stabilization sign must be ±1");
    let t = trace(f)?;
    if component >= t.components {
        return Err(FrontError::NoSuchComponent {
            component,
            count: t.components,
        });
    }
    let c = (0..t.left_cusps.len())
        .find(|&c| t.component[t.left_cusps[c].upper] == component)
        .expect("every component has a left cusp");
    let at = t.left_cusp_event[c];
    let FrontEvent::LeftCusp(s) = f.events[at] else {
        unreachable!("left cusp event")
    };
    // On a rightward strand a Z-shaped zigzag adds two down cusps, an S-shaped
    // one two up cusps.
    let rightward = t.rightward[t.left_cusps[c].upper];
    let z_shape = (sign == 1) == rightward;
    let zigzag = if z_shape {
        [FrontEvent::LeftCusp(s + 1), FrontEvent::RightCusp(s)]
    } else {
        [FrontEvent::LeftCusp(s), FrontEvent::RightCusp(s + 1)]
    };
    let mut events = f.events.clone();
    events.splice(at + 1..at + 1, zigzag);
    Ok(FrontDiagram {
        events,
        reversed: f.reversed.clone(),
    })
}

/// 2-handles attached along the components of the fronts with framing
/// `tb - 1`. Several fronts are placed side by side, hence unlinked.
pub fn to_kirby(fs: &[FrontDiagram]) -> Result<KirbyDiagram, FrontError> {
    let mut tbs = Vec::new();
    let mut blocks = Vec::new();
    for f in fs {
        tbs.extend(classical_invariants(f)?.into_iter().map(|c| c.tb));
        blocks.push(linking_numbers(f)?);
    }
    let mut linking = blocks.iter().fold(IntMatrix::zeros(0, 0), |acc, b| acc.direct_sum(b));
    for (i, tb) in tbs.into_iter().enumerate() {
        linking.set(i, i, (tb - 1).into());
    }
    Ok(KirbyDiagram::from_linking(linking).expect("linking numbers are symmetric"))
}
