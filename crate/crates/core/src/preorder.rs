//! Reflexive, transitive relations on `{0..n-1}`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A preorder stored as a row-major `n × n` boolean matrix; `rel(x, y)`
/// reads "x → y".
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Preorder {
    n: usize,
    rel: Vec<bool>,
}

impl fmt::Debug for Preorder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Preorder(n={}, ", self.n)?;
        f.debug_list().entries(self.pairs().filter(|(x, y)| x != y)).finish()?;
        write!(f, ")")
    }
}

impl Preorder {
    /// Checks reflexivity and transitivity of a row-major matrix.
    pub fn new(n: usize, rel: Vec<bool>) -> Result<Self> {
        if rel.len() != n * n {
            return Err(Error::usage(format!("relation matrix has {} entries, expected {}", rel.len(), n * n)));
        }
        let p = Preorder { n, rel };
        if let Some(x) = (0..n).find(|&x| !p.relates(x, x)) {
            return Err(Error::usage(format!("relation is not reflexive at {x}")));
        }
        if let Some((x, y, z)) = p.transitivity_violation() {
            return Err(Error::usage(format!("relation is not transitive: {x}→{y}→{z} but not {x}→{z}")));
        }
        Ok(p)
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> bool) -> Result<Self> {
        let rel = (0..n * n).map(|i| i / n == i % n || f(i / n, i % n)).collect();
        Preorder::new(n, rel)
    }

    pub(crate) fn from_matrix_unchecked(n: usize, rel: Vec<bool>) -> Self {
        debug_assert_eq!(rel.len(), n * n);
        Preorder { n, rel }
    }

    pub fn equality(n: usize) -> Self {
        Preorder::from_matrix_unchecked(n, (0..n * n).map(|i| i / n == i % n).collect())
    }

    pub fn universal(n: usize) -> Self {
        Preorder::from_matrix_unchecked(n, vec![true; n * n])
    }

    /// Equivalence relation whose classes are the given blocks.
    pub fn from_partition(n: usize, blocks: &[Vec<usize>]) -> Result<Self> {
        let mut class = vec![usize::MAX; n];
        for (b, block) in blocks.iter().enumerate() {
            for &x in block {
                if x >= n || class[x] != usize::MAX {
                    return Err(Error::usage(format!("point {x} misplaced in partition")));
                }
                class[x] = b;
            }
        }
        if class.contains(&usize::MAX) {
            return Err(Error::usage("partition does not cover every point"));
        }
        Ok(Preorder::from_matrix_unchecked(n, (0..n * n).map(|i| class[i / n] == class[i % n]).collect()))
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn relates(&self, x: usize, y: usize) -> bool {
        self.rel[x * self.n + y]
    }

    pub fn matrix(&self) -> &[bool] {
        &self.rel
    }

    /// All related pairs, row-major.
    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n * self.n)
            .filter(|&i| self.rel[i])
            .map(|i| (i / self.n, i % self.n))
    }

    pub fn is_reflexive(&self) -> bool {
        (0..self.n).all(|x| self.relates(x, x))
    }

    pub fn transitivity_violation(&self) -> Option<(usize, usize, usize)> {
        let n = self.n;
        for x in 0..n {
            for y in (0..n).filter(|&y| self.relates(x, y)) {
                if let Some(z) = (0..n).find(|&z| self.relates(y, z) && !self.relates(x, z)) {
                    return Some((x, y, z));
                }
            }
        }
        None
    }

    pub fn is_transitive(&self) -> bool {
        self.transitivity_violation().is_none()
    }

    pub fn is_antisymmetric(&self) -> bool {
        self.pairs().all(|(x, y)| x == y || !self.relates(y, x))
    }

    pub fn is_equality(&self) -> bool {
        *self == Preorder::equality(self.n)
    }

    pub fn is_universal(&self) -> bool {
        self.rel.iter().all(|&b| b)
    }

    /// Invariant under the full symmetric group.
    pub fn is_trivial(&self) -> bool {
        self.is_equality() || self.is_universal()
    }

    /// `U_x = {y : x → y}` as a bitmask (requires `n <= 32`).
    pub fn up_set(&self, x: usize) -> u32 {
        (0..self.n).filter(|&y| self.relates(x, y)).fold(0, |m, y| m | 1 << y)
    }

    /// Row-per-line `0/1` text.
    pub fn to_matrix_text(&self) -> String {
        let mut out = String::new();
        for x in 0..self.n {
            let row: String = (0..self.n).map(|y| if self.relates(x, y) { '1' } else { '0' }).collect();
            out.push_str(&row);
            out.push('\n');
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_relations() {
        assert!(Preorder::new(2, vec![true, false, false, false]).is_err());
        // 0→1, 1→2 but not 0→2
        let rel = vec![true, true, false, false, true, true, false, false, true];
        assert!(matches!(Preorder::new(3, rel), Err(Error::Usage(_))));
    }

    #[test]
    fn trivial_relations() {
        assert!(Preorder::equality(3).is_trivial());
        assert!(Preorder::universal(3).is_trivial());
        let blocks = Preorder::from_partition(4, &[vec![0, 2], vec![1, 3]]).unwrap();
        assert!(!blocks.is_trivial());
        assert!(!blocks.is_antisymmetric());
        assert_eq!(blocks.up_set(0), 0b0101);
        assert!(Preorder::equality(1).is_universal());
    }

    #[test]
    fn matrix_text() {
        let chain = Preorder::from_fn(2, |x, y| x <= y).unwrap();
        assert_eq!(chain.to_matrix_text(), "11\n01\n");
    }
}
