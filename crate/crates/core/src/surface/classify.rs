use std::fmt;

use super::{label_name, ArrowToken, Sign, SurfaceError, SurfaceWord};

/// Closed surface up to homeomorphism: `#g T²` or `#h RP²`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct SurfaceClass {
    pub orientable: bool,
    /// Genus when orientable, number of crosscaps otherwise.
    pub count: usize,
}

impl SurfaceClass {
    pub fn sphere() -> Self {
        Self {
            orientable: true,
            count: 0,
        }
    }

    pub fn genus(g: usize) -> Self {
        Self {
            orientable: true,
            count: g,
        }
    }

    /// Panics when `h == 0`: there is no non-orientable surface without crosscaps.
    pub fn crosscaps(h: usize) -> Self {
        assert!(h > 0, "non-orientable surfaces have at least one crosscap");
        Self {
            orientable: false,
            count: h,
        }
    }

    pub fn euler_characteristic(&self) -> i64 {
        if self.orientable {
            2 - 2 * self.count as i64
        } else {
            2 - self.count as i64
        }
    }
}

impl fmt::Display for SurfaceClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.orientable {
            write!(f, "orientable genus {}", self.count)
        } else {
            write!(f, "non-orientable crosscaps {}", self.count)
        }
    }
}

/// Number of boundary circles of the 0-handle with all 1-handles attached.
///
/// Cut the circle at the `2n` interval endpoints into arcs (arc `k` joins the
/// right end of token `k` to the left end of token `k+1`, cyclically). Each
/// band adds two edges along its sides: tail to tail and head to head. Every
/// endpoint then has one arc edge and one band edge, and the boundary circles
/// are the cycles of the resulting 2-regular graph.
pub fn boundary_components(w: &SurfaceWord) -> Result<usize, SurfaceError> {
    w.validate()?;
    let tokens = w.tokens();
    let m = tokens.len();
    if m == 0 {
        return Ok(1);
    }
    let left = |k: usize| 2 * k;
    let right = |k: usize| 2 * k + 1;
    let tail = |k: usize| match tokens[k].sign {
        Sign::Plus => left(k),
        Sign::Minus => right(k),
    };
    let head = |k: usize| match tokens[k].sign {
        Sign::Plus => right(k),
        Sign::Minus => left(k),
    };

    let mut arc = vec![0usize; 2 * m];
    for k in 0..m {
        let next = (k + 1) % m;
        arc[right(k)] = left(next);
        arc[left(next)] = right(k);
    }
    let mut band = vec![0usize; 2 * m];
    for k in 0..m {
        let p = w.partner(k).expect("validated word");
        band[tail(k)] = tail(p);
        band[head(k)] = head(p);
    }

    let mut seen = vec![false; 2 * m];
    let mut cycles = 0;
    for start in 0..2 * m {
        if seen[start] {
            continue;
        }
        cycles += 1;
        let mut v = start;
        loop {
            seen[v] = true;
            let u = arc[v];
            seen[u] = true;
            v = band[u];
            if v == start {
                break;
            }
        }
    }
    Ok(cycles)
}

/// True iff no handle is twisted.
pub fn orientable(w: &SurfaceWord) -> Result<bool, SurfaceError> {
    w.validate()?;
    Ok(w.labels().into_iter().all(|l| w.is_twisted(l) == Some(false)))
}

/// Class of the closed surface obtained by capping every boundary circle.
///
/// With `n` handles and `b` boundary circles the capped surface has Euler
/// characteristic `1 - n + b`.
pub fn classify(w: &SurfaceWord) -> Result<SurfaceClass, SurfaceError> {
    let b = boundary_components(w)? as i64;
    let n = w.handle_count() as i64;
    let chi = 1 - n + b;
    if orientable(w)? {
        if chi % 2 != 0 || chi > 2 {
            return Err(SurfaceError::ParityError { chi });
        }
        Ok(SurfaceClass::genus(((2 - chi) / 2) as usize))
    } else {
        Ok(SurfaceClass::crosscaps((2 - chi) as usize))
    }
}

/// Model word for a class: `g` blocks `x+ y+ x- y-`, or `h` blocks `x+ x+`,
/// labelled `a, b, c, ...`. The sphere is the empty word.
pub fn canonical_word(c: SurfaceClass) -> SurfaceWord {
    let mut tokens = Vec::new();
    if c.orientable {
        for k in 0..c.count {
            let (x, y) = (label_name(2 * k), label_name(2 * k + 1));
            tokens.push(ArrowToken::new(x.clone(), Sign::Plus));
            tokens.push(ArrowToken::new(y.clone(), Sign::Plus));
            tokens.push(ArrowToken::new(x, Sign::Minus));
            tokens.push(ArrowToken::new(y, Sign::Minus));
        }
    } else {
        for k in 0..c.count {
            let x = label_name(k);
            tokens.push(ArrowToken::new(x.clone(), Sign::Plus));
            tokens.push(ArrowToken::new(x, Sign::Plus));
        }
    }
    SurfaceWord::new(tokens)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> SurfaceWord {
        s.parse().unwrap()
    }

    #[test]
    fn boundary_counts() {
        assert_eq!(boundary_components(&SurfaceWord::empty()).unwrap(), 1);
        assert_eq!(boundary_components(&w("a+ a+")).unwrap(), 1);
        assert_eq!(boundary_components(&w("a+ a-")).unwrap(), 2);
        assert_eq!(boundary_components(&w("a+ b+ a- b-")).unwrap(), 1);
        assert_eq!(boundary_components(&w("a+ a- b+ b-")).unwrap(), 3);
    }

    #[test]
    fn orientability() {
        assert!(orientable(&w("a+ b+ a- b-")).unwrap());
        assert!(!orientable(&w("a+ a+")).unwrap());
        assert!(orientable(&SurfaceWord::empty()).unwrap());
    }

    #[test]
    fn classes() {
        assert_eq!(classify(&w("a+ b+ a- b-")).unwrap(), SurfaceClass::genus(1));
        assert_eq!(classify(&w("1+ 2+ 1- 2- 3+ 3+")).unwrap(), SurfaceClass::crosscaps(3));
        assert_eq!(classify(&SurfaceWord::empty()).unwrap(), SurfaceClass::sphere());
        // Capping convention: an annulus caps off to a sphere.
        assert_eq!(classify(&w("a+ a-")).unwrap(), SurfaceClass::sphere());
        assert_eq!(classify(&w("a+ b+ a+ b+")).unwrap(), SurfaceClass::crosscaps(1));
    }

    #[test]
    fn canonical_words() {
        assert!(canonical_word(SurfaceClass::sphere()).is_empty());
        assert_eq!(canonical_word(SurfaceClass::genus(2)), w("a+ b+ a- b- c+ d+ c- d-"));
        assert_eq!(canonical_word(SurfaceClass::crosscaps(2)), w("a+ a+ b+ b+"));
        for c in [
            SurfaceClass::genus(0),
            SurfaceClass::genus(1),
            SurfaceClass::genus(3),
            SurfaceClass::crosscaps(1),
            SurfaceClass::crosscaps(4),
        ] {
            let word = canonical_word(c);
            assert_eq!(boundary_components(&word).unwrap(), 1);
            assert_eq!(classify(&word).unwrap(), c);
        }
    }
}
