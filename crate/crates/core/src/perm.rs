//! Permutations of `{0, .., n-1}` stored as image vectors.
//!
//! Products follow function composition: `a.compose(&b)` applies `b` first,
//! so `(a * b)(i) = a(b(i))`. Text form is 1-based disjoint-cycle notation,
//! e.g. `(1 2 3 4)(5 6)`, with `()` for the identity.

use std::fmt;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PermError {
    #[error("image vector is not a permutation of 0..{degree}")]
    NotBijective { degree: usize },
    #[error("cycle notation: {0}")]
    Syntax(String),
    #[error("point {point} out of range for degree {degree}")]
    OutOfRange { point: usize, degree: usize },
    #[error("point {0} repeated in cycle notation")]
    Repeated(usize),
    #[error("degree mismatch: {0} vs {1}")]
    DegreeMismatch(usize, usize),
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Perm {
    images: Vec<usize>,
}

impl Perm {
    pub fn identity(degree: usize) -> Self {
        Perm {
            images: (0..degree).collect(),
        }
    }

    /// Builds a permutation from its image vector, rejecting non-bijections.
    pub fn from_images(images: Vec<usize>) -> Result<Self, PermError> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &i in &images {
            if i >= n || seen[i] {
                return Err(PermError::NotBijective { degree: n });
            }
            seen[i] = true;
        }
        Ok(Perm { images })
    }

    /// Parses 1-based cycle notation such as `(1 2)(3 4 5)`.
    pub fn from_cycles(degree: usize, text: &str) -> Result<Self, PermError> {
        let mut images: Vec<usize> = (0..degree).collect();
        let mut used = vec![false; degree];
        let mut rest = text.trim();
        if rest.is_empty() {
            return Err(PermError::Syntax("empty permutation text".into()));
        }
        while !rest.is_empty() {
            let body_start = rest
                .strip_prefix('(')
                .ok_or_else(|| PermError::Syntax(format!("expected '(' at `{rest}`")))?;
            let close = body_start
                .find(')')
                .ok_or_else(|| PermError::Syntax("unclosed '('".into()))?;
            let body = &body_start[..close];
            let mut cycle = Vec::new();
            for tok in body.split(|ch: char| ch.is_whitespace() || ch == ',') {
                if tok.is_empty() {
                    continue;
                }
                let p: usize = tok
                    .parse()
                    .map_err(|_| PermError::Syntax(format!("bad point `{tok}`")))?;
                if p == 0 || p > degree {
                    return Err(PermError::OutOfRange { point: p, degree });
                }
                if used[p - 1] {
                    return Err(PermError::Repeated(p));
                }
                used[p - 1] = true;
                cycle.push(p - 1);
            }
            for k in 0..cycle.len() {
                images[cycle[k]] = cycle[(k + 1) % cycle.len()];
            }
            rest = body_start[close + 1..].trim_start();
        }
        Ok(Perm { images })
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn apply(&self, i: usize) -> usize {
        self.images[i]
    }

    /// `self ∘ other`: apply `other`, then `self`.
    pub fn compose(&self, other: &Perm) -> Perm {
        debug_assert_eq!(self.degree(), other.degree());
        Perm {
            images: other.images.iter().map(|&i| self.images[i]).collect(),
        }
    }

    pub fn inverse(&self) -> Perm {
        let mut inv = vec![0; self.images.len()];
        for (i, &j) in self.images.iter().enumerate() {
            inv[j] = i;
        }
        Perm { images: inv }
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &j)| i == j)
    }

    /// Disjoint cycles of length at least two, each starting at its least point.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.degree()];
        let mut out = Vec::new();
        for start in 0..self.degree() {
            if seen[start] {
                continue;
            }
            let mut cycle = vec![start];
            seen[start] = true;
            let mut cur = self.images[start];
            while cur != start {
                seen[cur] = true;
                cycle.push(cur);
                cur = self.images[cur];
            }
            if cycle.len() > 1 {
                out.push(cycle);
            }
        }
        out
    }

    pub fn order(&self) -> usize {
        let mut acc = 1usize;
        for c in self.cycles() {
            acc = lcm(acc, c.len());
        }
        acc
    }
}

/// Formats a permutation given as an image slice in 1-based cycle notation,
/// relabelling point `i` as `labels[i]`.
pub fn cycles_with_labels(images: &[usize], labels: &[usize]) -> String {
    let p = Perm {
        images: images.to_vec(),
    };
    let cycles = p.cycles();
    if cycles.is_empty() {
        return "()".into();
    }
    let mut s = String::new();
    for c in cycles {
        s.push('(');
        let parts: Vec<String> = c.iter().map(|&i| (labels[i] + 1).to_string()).collect();
        s.push_str(&parts.join(" "));
        s.push(')');
    }
    s
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn lcm(a: usize, b: usize) -> usize {
    a / gcd(a, b) * b
}

impl fmt::Display for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let labels: Vec<usize> = (0..self.degree()).collect();
        f.write_str(&cycles_with_labels(&self.images, &labels))
    }
}

impl fmt::Debug for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Perm{self}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_print() {
        let p = Perm::from_cycles(6, "(1 2 3 4)(5 6)").unwrap();
        assert_eq!(p.images(), &[1, 2, 3, 0, 5, 4]);
        assert_eq!(p.to_string(), "(1 2 3 4)(5 6)");
        assert_eq!(Perm::identity(3).to_string(), "()");
        assert_eq!(Perm::from_cycles(3, "()").unwrap(), Perm::identity(3));
    }

    #[test]
    fn compose_applies_right_factor_first() {
        let a = Perm::from_cycles(3, "(1 2)").unwrap();
        let b = Perm::from_cycles(3, "(2 3)").unwrap();
        // b sends 0 to 0, then a sends 0 to 1.
        assert_eq!(a.compose(&b).apply(0), 1);
        assert_eq!(a.compose(&b).to_string(), "(1 2 3)");
    }

    #[test]
    fn rejects_bad_input() {
        assert!(Perm::from_images(vec![0, 0, 1]).is_err());
        assert!(matches!(
            Perm::from_cycles(3, "(1 4)"),
            Err(PermError::OutOfRange { .. })
        ));
        assert!(matches!(
            Perm::from_cycles(3, "(1 2)(2 3)"),
            Err(PermError::Repeated(2))
        ));
        assert!(Perm::from_cycles(3, "1 2").is_err());
        assert!(Perm::from_cycles(3, "").is_err());
    }

    #[test]
    fn order_is_lcm_of_cycle_lengths() {
        assert_eq!(Perm::from_cycles(5, "(1 2)(3 4 5)").unwrap().order(), 6);
        assert_eq!(Perm::identity(4).order(), 1);
    }
}
