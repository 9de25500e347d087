//! Permutations of `{0..n-1}` acting on the right (`x^g = images[x]`).

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn identity(degree: usize) -> Self {
        Permutation {
            images: (0..degree).collect(),
        }
    }

    pub fn from_images(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &y in &images {
            if y >= n || std::mem::replace(&mut seen[y], true) {
                return Err(Error::usage(format!("{images:?} is not a bijection of 0..{n}")));
            }
        }
        Ok(Permutation { images })
    }

    /// Builds a permutation from disjoint cycles; fixed points may be omitted.
    pub fn from_cycles(degree: usize, cycles: &[Vec<usize>]) -> Result<Self> {
        let mut images: Vec<usize> = (0..degree).collect();
        let mut moved = vec![false; degree];
        for cycle in cycles {
            for (i, &x) in cycle.iter().enumerate() {
                if x >= degree {
                    return Err(Error::usage(format!("point {x} outside degree {degree}")));
                }
                if std::mem::replace(&mut moved[x], true) {
                    return Err(Error::usage(format!("point {x} appears in two cycles")));
                }
                images[x] = cycle[(i + 1) % cycle.len()];
            }
        }
        Ok(Permutation { images })
    }

    /// Parses cycle notation such as `"(0 1 2 3)(4 5)"`; `"()"` and `"id"`
    /// are the identity.
    pub fn parse_cycles(degree: usize, text: &str) -> Result<Self> {
        let text = text.trim();
        if text.is_empty() || text == "id" || text == "e" {
            return Ok(Permutation::identity(degree));
        }
        let mut cycles = Vec::new();
        let mut rest = text;
        while !rest.is_empty() {
            let Some(body) = rest.strip_prefix('(') else {
                return Err(Error::parse(format!("expected '(' in {text:?}")));
            };
            let Some(close) = body.find(')') else {
                return Err(Error::parse(format!("unclosed cycle in {text:?}")));
            };
            let cycle = body[..close]
                .split(|c: char| c.is_whitespace() || c == ',')
                .filter(|t| !t.is_empty())
                .map(|t| t.parse::<usize>().map_err(|_| Error::parse(format!("bad point {t:?} in {text:?}"))))
                .collect::<Result<Vec<_>>>()?;
            cycles.push(cycle);
            rest = body[close + 1..].trim_start();
        }
        Permutation::from_cycles(degree, &cycles)
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    #[inline]
    pub fn apply(&self, x: usize) -> usize {
        self.images[x]
    }

    /// `self` then `other`: `x^(self*other) = (x^self)^other`.
    pub fn then(&self, other: &Permutation) -> Permutation {
        Permutation {
            images: self.images.iter().map(|&y| other.images[y]).collect(),
        }
    }

    pub fn inverse(&self) -> Permutation {
        let mut images = vec![0; self.images.len()];
        for (x, &y) in self.images.iter().enumerate() {
            images[y] = x;
        }
        Permutation { images }
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(x, &y)| x == y)
    }

    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.degree()];
        let mut out = Vec::new();
        for start in 0..self.degree() {
            if seen[start] || self.images[start] == start {
                continue;
            }
            let mut cycle = vec![start];
            seen[start] = true;
            let mut x = self.images[start];
            while x != start {
                seen[x] = true;
                cycle.push(x);
                x = self.images[x];
            }
            out.push(cycle);
        }
        out
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return write!(f, "()");
        }
        for c in cycles {
            let parts: Vec<String> = c.iter().map(usize::to_string).collect();
            write!(f, "({})", parts.join(" "))?;
        }
        Ok(())
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Splits a generator list such as `"(0 1 2),(0 1)"` at commas or
/// semicolons outside parentheses and parses each piece.
pub fn parse_generators(degree: usize, text: &str) -> Result<Vec<Permutation>> {
    let mut pieces = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, c) in text.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' | ';' if depth == 0 => {
                pieces.push(&text[start..i]);
                start = i + 1;
            }
            _ => {}
        }
        if depth < 0 {
            return Err(Error::parse(format!("unbalanced parentheses in {text:?}")));
        }
    }
    if depth != 0 {
        return Err(Error::parse(format!("unbalanced parentheses in {text:?}")));
    }
    pieces.push(&text[start..]);
    pieces
        .into_iter()
        .filter(|p| !p.trim().is_empty())
        .map(|p| Permutation::parse_cycles(degree, p))
        .collect()
}

impl FromStr for Permutation {
    type Err = Error;

    /// Degree is taken as one more than the largest point mentioned.
    fn from_str(s: &str) -> Result<Self> {
        let max = s
            .split(|c: char| !c.is_ascii_digit())
            .filter_map(|t| t.parse::<usize>().ok())
            .max();
        Permutation::parse_cycles(max.map_or(0, |m| m + 1), s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_display() {
        let p = Permutation::parse_cycles(6, "(0 1 2 3)(4 5)").unwrap();
        assert_eq!(p.images(), &[1, 2, 3, 0, 5, 4]);
        assert_eq!(p.to_string(), "(0 1 2 3)(4 5)");
        assert_eq!(Permutation::parse_cycles(3, "()").unwrap(), Permutation::identity(3));
        assert_eq!("(0 2)".parse::<Permutation>().unwrap().degree(), 3);
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(Permutation::parse_cycles(3, "(0 1"), Err(Error::Parse(_))));
        assert!(matches!(Permutation::parse_cycles(3, "(0 x)"), Err(Error::Parse(_))));
        assert!(matches!(Permutation::parse_cycles(3, "(0 3)"), Err(Error::Usage(_))));
        assert!(Permutation::parse_cycles(3, "(0 1)(1 2)").is_err());
        assert!(parse_generators(3, "(0 1)),(2").is_err());
    }

    #[test]
    fn generator_lists() {
        let gens = parse_generators(3, "(0 1 2),(0 1)").unwrap();
        assert_eq!(gens.len(), 2);
        assert_eq!(gens[1].images(), &[1, 0, 2]);
        assert_eq!(parse_generators(4, "(0,1)(2,3); (0 2)").unwrap().len(), 2);
    }

    #[test]
    fn composition_acts_on_the_right() {
        let a = Permutation::parse_cycles(3, "(0 1)").unwrap();
        let b = Permutation::parse_cycles(3, "(1 2)").unwrap();
        // 0 -a-> 1 -b-> 2
        assert_eq!(a.then(&b).apply(0), 2);
        assert!(a.then(&a.inverse()).is_identity());
        assert!(Permutation::from_images(vec![0, 0]).is_err());
    }
}
