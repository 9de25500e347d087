//! Finite permutation groups given by generators.
//!
//! Everything here works from the generators: orbits and blocks by closure,
//! orbitals by closure on ordered pairs, and group elements by breadth-first
//! search over generator words (capped at [`ELEMENT_CAP`]).

use std::collections::{HashSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::perm::{parse_generators, Permutation};
use crate::preorder::Preorder;
use crate::sets::{OmegaSet, Universe};

/// Largest group enumerated element by element.
pub const ELEMENT_CAP: usize = 1_000_000;

/// Largest orbital count accepted by [`PermGroup::invariant_preorders`].
pub const ORBITAL_CAP: usize = 20;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PermGroup {
    degree: usize,
    generators: Vec<Permutation>,
}

/// A partition of the points into blocks of imprimitivity.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockSystem {
    pub blocks: Vec<Vec<usize>>,
}

impl BlockSystem {
    pub fn is_trivial(&self) -> bool {
        self.blocks.len() <= 1 || self.blocks.iter().all(|b| b.len() == 1)
    }
}

/// An orbit of the group on ordered pairs.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Orbital {
    pub pairs: Vec<(usize, usize)>,
}

impl Orbital {
    pub fn is_diagonal(&self) -> bool {
        self.pairs[0].0 == self.pairs[0].1
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InvariantPreorder {
    pub preorder: Preorder,
    /// Invariant under the full symmetric group (equality or universal).
    pub trivial: bool,
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect() }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Returns false when already merged.
    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        let (lo, hi) = (ra.min(rb), ra.max(rb));
        self.parent[hi] = lo;
        true
    }
}

impl PermGroup {
    pub fn new(degree: usize, generators: Vec<Permutation>) -> Result<Self> {
        if let Some(g) = generators.iter().find(|g| g.degree() != degree) {
            return Err(Error::usage(format!("generator {g} has degree {} not {degree}", g.degree())));
        }
        Ok(PermGroup { degree, generators })
    }

    /// Parses a comma-separated list of permutations in cycle notation.
    pub fn parse(degree: usize, text: &str) -> Result<Self> {
        PermGroup::new(degree, parse_generators(degree, text)?)
    }

    pub fn trivial(degree: usize) -> Self {
        PermGroup {
            degree,
            generators: Vec::new(),
        }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn generators(&self) -> &[Permutation] {
        &self.generators
    }

    fn universe(&self) -> Universe {
        Universe::Finite(self.degree as u64)
    }

    fn check_point(&self, x: usize) -> Result<()> {
        if x >= self.degree {
            return Err(Error::usage(format!("point {x} outside degree {}", self.degree)));
        }
        Ok(())
    }

    fn orbit_points(&self, x: usize) -> Vec<usize> {
        let mut seen = vec![false; self.degree];
        let mut queue = VecDeque::from([x]);
        seen[x] = true;
        while let Some(y) = queue.pop_front() {
            for g in &self.generators {
                let z = g.apply(y);
                if !std::mem::replace(&mut seen[z], true) {
                    queue.push_back(z);
                }
            }
        }
        (0..self.degree).filter(|&y| seen[y]).collect()
    }

    pub fn orbit(&self, x: usize) -> Result<OmegaSet> {
        self.check_point(x)?;
        OmegaSet::finite(self.universe(), self.orbit_points(x).into_iter().map(|y| y as u64))
    }

    pub fn is_transitive(&self) -> bool {
        self.degree >= 1 && self.orbit_points(0).len() == self.degree
    }

    /// Finest invariant partition in which `x` and `y` share a block
    /// (Atkinson's union-find closure).
    pub fn block_system(&self, x: usize, y: usize) -> Result<BlockSystem> {
        self.check_point(x)?;
        self.check_point(y)?;
        let mut uf = UnionFind::new(self.degree);
        let mut queue = VecDeque::new();
        if uf.union(x, y) {
            queue.push_back((x, y));
        }
        while let Some((a, b)) = queue.pop_front() {
            for g in &self.generators {
                let (c, d) = (g.apply(a), g.apply(b));
                if uf.union(c, d) {
                    queue.push_back((c, d));
                }
            }
        }
        let mut blocks: Vec<Vec<usize>> = Vec::new();
        let mut index = vec![usize::MAX; self.degree];
        for p in 0..self.degree {
            let r = uf.find(p);
            if index[r] == usize::MAX {
                index[r] = blocks.len();
                blocks.push(Vec::new());
            }
            blocks[index[r]].push(p);
        }
        Ok(BlockSystem { blocks })
    }

    /// Smallest block containing `x` and `y`.
    pub fn minimal_block(&self, x: usize, y: usize) -> Result<OmegaSet> {
        if !self.is_transitive() {
            return Err(Error::usage("minimal_block needs a transitive group"));
        }
        if x == y {
            return Err(Error::usage("minimal_block needs distinct points"));
        }
        let system = self.block_system(x, y)?;
        let block = system.blocks.into_iter().find(|b| b.contains(&x)).expect("x lies in some block");
        OmegaSet::finite(self.universe(), block.into_iter().map(|p| p as u64))
    }

    pub fn is_primitive(&self) -> bool {
        self.is_transitive()
            && (1..self.degree).all(|y| {
                self.block_system(0, y)
                    .map(|s| s.blocks.len() == 1)
                    .unwrap_or(false)
            })
    }

    /// A non-trivial block system, if the group is transitive and imprimitive.
    pub fn nontrivial_block_system(&self) -> Option<BlockSystem> {
        if !self.is_transitive() {
            return None;
        }
        (1..self.degree)
            .filter_map(|y| self.block_system(0, y).ok())
            .find(|s| s.blocks.len() > 1)
    }

    /// Breadth-first walk over the group in generator-word order, calling
    /// `visit` on each new element until it returns `true`.
    fn walk(&self, mut visit: impl FnMut(&Permutation) -> bool) -> Result<Option<Permutation>> {
        let id = Permutation::identity(self.degree);
        if visit(&id) {
            return Ok(Some(id));
        }
        let mut seen = HashSet::from([id.clone()]);
        let mut queue = VecDeque::from([id]);
        while let Some(h) = queue.pop_front() {
            for g in &self.generators {
                let next = h.then(g);
                if seen.contains(&next) {
                    continue;
                }
                if seen.len() >= ELEMENT_CAP {
                    return Err(Error::resource(format!("group has more than {ELEMENT_CAP} elements")));
                }
                if visit(&next) {
                    return Ok(Some(next));
                }
                seen.insert(next.clone());
                queue.push_back(next);
            }
        }
        Ok(None)
    }

    /// Every element, identity first, in breadth-first generator-word order.
    pub fn elements(&self) -> Result<Vec<Permutation>> {
        let mut out = Vec::new();
        self.walk(|g| {
            out.push(g.clone());
            false
        })?;
        Ok(out)
    }

    pub fn order(&self) -> Result<usize> {
        Ok(self.elements()?.len())
    }

    /// Orbits on ordered pairs; diagonal orbitals first, each group in order
    /// of its least pair.
    pub fn orbitals(&self) -> Vec<Orbital> {
        let n = self.degree;
        let mut seen = vec![false; n * n];
        let mut diagonal = Vec::new();
        let mut off = Vec::new();
        let starts = (0..n).map(|x| (x, x)).chain((0..n * n).map(|i| (i / n, i % n)).filter(|(a, b)| a != b));
        for (a, b) in starts {
            if seen[a * n + b] {
                continue;
            }
            seen[a * n + b] = true;
            let mut pairs = vec![(a, b)];
            let mut i = 0;
            while i < pairs.len() {
                let (x, y) = pairs[i];
                for g in &self.generators {
                    let (u, v) = (g.apply(x), g.apply(y));
                    if !std::mem::replace(&mut seen[u * n + v], true) {
                        pairs.push((u, v));
                    }
                }
                i += 1;
            }
            pairs.sort_unstable();
            if a == b {
                diagonal.push(Orbital { pairs });
            } else {
                off.push(Orbital { pairs });
            }
        }
        diagonal.extend(off);
        diagonal
    }

    /// Every invariant preorder: the diagonal plus a transitively closed
    /// union of non-diagonal orbitals.
    pub fn invariant_preorders(&self) -> Result<Vec<InvariantPreorder>> {
        let orbitals = self.orbitals();
        if orbitals.len() > ORBITAL_CAP {
            return Err(Error::resource(format!(
                "{} orbitals exceed the enumeration guard of {ORBITAL_CAP}",
                orbitals.len()
            )));
        }
        let n = self.degree;
        let off: Vec<&Orbital> = orbitals.iter().filter(|o| !o.is_diagonal()).collect();
        let mut out = Vec::new();
        for mask in 0u32..1 << off.len() {
            let mut rel: Vec<bool> = (0..n * n).map(|i| i / n == i % n).collect();
            for (k, o) in off.iter().enumerate() {
                if mask >> k & 1 == 1 {
                    for &(x, y) in &o.pairs {
                        rel[x * n + y] = true;
                    }
                }
            }
            let p = Preorder::from_matrix_unchecked(n, rel);
            if p.is_transitive() {
                out.push(InvariantPreorder {
                    trivial: p.is_trivial(),
                    preorder: p,
                });
            }
        }
        Ok(out)
    }

    pub fn is_strongly_primitive(&self) -> Result<bool> {
        Ok(self.invariant_preorders()?.iter().all(|p| p.trivial))
    }

    /// First element `g` in breadth-first word order with `x^g ∈ Δ` and
    /// `y^g ∉ Δ`.
    pub fn separation_witness(&self, delta: &OmegaSet, x: usize, y: usize) -> Result<Option<Permutation>> {
        self.check_point(x)?;
        self.check_point(y)?;
        if x == y {
            return Err(Error::usage("separation needs distinct points"));
        }
        if delta.universe() != self.universe() {
            return Err(Error::usage("Δ must be a subset of the group's points"));
        }
        let members = delta.finite_elements().expect("finite universe sets are exact");
        if members.is_empty() || members.len() == self.degree {
            return Err(Error::usage("Δ must be a non-empty proper subset"));
        }
        let inside = |p: usize| members.binary_search(&(p as u64)).is_ok();
        self.walk(|g| inside(g.apply(x)) && !inside(g.apply(y)))
    }
}

/// Small named groups used by tests, examples and the CLI corpus.
pub mod named {
    use super::*;

    fn group(degree: usize, cycles: &[&[&[usize]]]) -> PermGroup {
        let gens = cycles
            .iter()
            .map(|c| {
                let owned: Vec<Vec<usize>> = c.iter().map(|v| v.to_vec()).collect();
                Permutation::from_cycles(degree, &owned).expect("well-formed named generator")
            })
            .collect();
        PermGroup::new(degree, gens).expect("uniform degree")
    }

    fn rotation(n: usize) -> Permutation {
        Permutation::from_images((0..n).map(|i| (i + 1) % n).collect()).expect("rotation")
    }

    fn reflection(n: usize) -> Permutation {
        Permutation::from_images((0..n).map(|i| (n - i) % n).collect()).expect("reflection")
    }

    pub fn cyclic(n: usize) -> PermGroup {
        PermGroup::new(n, vec![rotation(n)]).expect("cyclic")
    }

    pub fn dihedral(n: usize) -> PermGroup {
        PermGroup::new(n, vec![rotation(n), reflection(n)]).expect("dihedral")
    }

    pub fn symmetric(n: usize) -> PermGroup {
        if n < 2 {
            return PermGroup::trivial(n);
        }
        let swap = Permutation::from_cycles(n, &[vec![0, 1]]).expect("transposition");
        PermGroup::new(n, vec![rotation(n), swap]).expect("symmetric")
    }

    /// Alternating group via the 3-cycles `(0 1 k)`.
    pub fn alternating(n: usize) -> PermGroup {
        let gens = (2..n)
            .map(|k| Permutation::from_cycles(n, &[vec![0, 1, k]]).expect("3-cycle"))
            .collect();
        PermGroup::new(n, gens).expect("alternating")
    }

    /// Klein four-group acting regularly on 4 points.
    pub fn klein_four() -> PermGroup {
        group(4, &[&[&[0, 1], &[2, 3]], &[&[0, 2], &[1, 3]]])
    }

    /// `C2 wr C2` on 4 points (the dihedral group of order 8).
    pub fn c2_wr_c2() -> PermGroup {
        group(4, &[&[&[0, 1]], &[&[0, 2], &[1, 3]]])
    }

    /// `AGL(1,5)`: x ↦ x+1 and x ↦ 2x on ℤ/5.
    pub fn agl_1_5() -> PermGroup {
        group(5, &[&[&[0, 1, 2, 3, 4]], &[&[1, 2, 4, 3]]])
    }

    /// `PSL(2,5) ≅ A5` on the projective line over GF(5), `∞` as point 5.
    pub fn psl_2_5() -> PermGroup {
        // x ↦ x+1 and x ↦ -1/x
        group(6, &[&[&[0, 1, 2, 3, 4]], &[&[0, 5], &[1, 4]]])
    }

    /// `S3` acting regularly on itself (6 points).
    pub fn s3_regular() -> PermGroup {
        group(6, &[&[&[0, 1, 2], &[3, 4, 5]], &[&[0, 3], &[1, 5], &[2, 4]]])
    }

    /// `S3 wr S2`-style product action split as two blocks of three.
    pub fn s3_wr_c2() -> PermGroup {
        group(6, &[&[&[0, 1, 2]], &[&[0, 1]], &[&[0, 3], &[1, 4], &[2, 5]]])
    }

    /// Labelled corpus of transitive groups of degree at most 6.
    pub fn transitive_corpus() -> Vec<(String, PermGroup)> {
        let mut out = Vec::new();
        for n in 2..=6 {
            out.push((format!("C{n}"), cyclic(n)));
        }
        for n in 3..=6 {
            out.push((format!("D{n}"), dihedral(n)));
        }
        for n in 2..=6 {
            out.push((format!("S{n}"), symmetric(n)));
        }
        for n in 3..=6 {
            out.push((format!("A{n}"), alternating(n)));
        }
        out.push(("C2xC2".into(), klein_four()));
        out.push(("C2wrC2".into(), c2_wr_c2()));
        out.push(("AGL(1,5)".into(), agl_1_5()));
        out.push(("PSL(2,5)".into(), psl_2_5()));
        out.push(("S3-regular".into(), s3_regular()));
        out.push(("S3wrC2".into(), s3_wr_c2()));
        out
    }
}
