//! Small explicit simple graphs.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Undirected loopless graph on `{0..n-1}` stored as a symmetric matrix.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SimpleGraph {
    n: usize,
    adj: Vec<bool>,
}

impl fmt::Debug for SimpleGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SimpleGraph(n={}, ", self.n)?;
        f.debug_list().entries(self.edges()).finish()?;
        write!(f, ")")
    }
}

impl SimpleGraph {
    pub fn empty(n: usize) -> Self {
        SimpleGraph {
            n,
            adj: vec![false; n * n],
        }
    }

    pub fn complete(n: usize) -> Self {
        Self::from_fn(n, |_, _| true)
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> bool) -> Self {
        let mut g = SimpleGraph::empty(n);
        for i in 0..n {
            for j in i + 1..n {
                if f(i, j) {
                    g.add_edge(i, j);
                }
            }
        }
        g
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut g = SimpleGraph::empty(n);
        for &(a, b) in edges {
            if a >= n || b >= n || a == b {
                return Err(Error::usage(format!("bad edge ({a},{b}) for {n} vertices")));
            }
            g.add_edge(a, b);
        }
        Ok(g)
    }

    /// Parses a 0/1 adjacency matrix, one row per line. Whitespace inside a
    /// row is ignored; the matrix must be symmetric with a zero diagonal.
    pub fn parse_matrix(text: &str) -> Result<Self> {
        let rows: Vec<Vec<bool>> = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'))
            .map(|l| {
                l.chars()
                    .filter(|c| !c.is_whitespace())
                    .map(|c| match c {
                        '0' => Ok(false),
                        '1' => Ok(true),
                        other => Err(Error::parse(format!("unexpected {other:?} in adjacency matrix"))),
                    })
                    .collect()
            })
            .collect::<Result<_>>()?;
        let n = rows.len();
        if let Some(r) = rows.iter().position(|r| r.len() != n) {
            return Err(Error::parse(format!("row {r} has {} entries, expected {n}", rows[r].len())));
        }
        for i in 0..n {
            if rows[i][i] {
                return Err(Error::parse(format!("loop at vertex {i}")));
            }
            for j in 0..n {
                if rows[i][j] != rows[j][i] {
                    return Err(Error::parse(format!("matrix not symmetric at ({i},{j})")));
                }
            }
        }
        Ok(SimpleGraph {
            n,
            adj: rows.into_iter().flatten().collect(),
        })
    }

    pub fn to_matrix_text(&self) -> String {
        (0..self.n)
            .map(|i| (0..self.n).map(|j| if self.adjacent(i, j) { '1' } else { '0' }).collect::<String>() + "\n")
            .collect()
    }

    fn add_edge(&mut self, a: usize, b: usize) {
        self.adj[a * self.n + b] = true;
        self.adj[b * self.n + a] = true;
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn adjacent(&self, a: usize, b: usize) -> bool {
        a < self.n && b < self.n && self.adj[a * self.n + b]
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n).flat_map(move |i| (i + 1..self.n).filter(move |&j| self.adjacent(i, j)).map(move |j| (i, j)))
    }

    pub fn complement(&self) -> Self {
        Self::from_fn(self.n, |i, j| !self.adjacent(i, j))
    }

    pub fn is_complete(&self) -> bool {
        self.edges().count() == self.n * self.n.saturating_sub(1) / 2
    }

    pub fn is_edgeless(&self) -> bool {
        self.edges().next().is_none()
    }

    /// Connected components, each sorted, in order of least vertex.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut comp = vec![usize::MAX; self.n];
        let mut out = Vec::new();
        for s in 0..self.n {
            if comp[s] != usize::MAX {
                continue;
            }
            let id = out.len();
            let mut stack = vec![s];
            let mut members = Vec::new();
            comp[s] = id;
            while let Some(v) = stack.pop() {
                members.push(v);
                for w in 0..self.n {
                    if self.adjacent(v, w) && comp[w] == usize::MAX {
                        comp[w] = id;
                        stack.push(w);
                    }
                }
            }
            members.sort_unstable();
            out.push(members);
        }
        out
    }

    pub fn is_clique(&self, vertices: &[usize]) -> bool {
        vertices
            .iter()
            .enumerate()
            .all(|(i, &a)| vertices[i + 1..].iter().all(|&b| self.adjacent(a, b)))
    }

    /// Part sizes (largest first) when the graph is complete multipartite,
    /// i.e. its complement is a disjoint union of cliques.
    pub fn complete_multipartite_parts(&self) -> Option<Vec<usize>> {
        self.complete_multipartite_partition()
            .map(|parts| parts.iter().map(Vec::len).collect())
    }

    /// The parts themselves, ordered by size (largest first) then least vertex.
    pub fn complete_multipartite_partition(&self) -> Option<Vec<Vec<usize>>> {
        let co = self.complement();
        let mut parts = co.components();
        if !parts.iter().all(|p| co.is_clique(p)) {
            return None;
        }
        parts.sort_by(|a, b| b.len().cmp(&a.len()).then(a[0].cmp(&b[0])));
        Some(parts)
    }

    pub fn to_dot(&self, name: &str) -> String {
        let mut out = format!("graph {name} {{\n");
        for v in 0..self.n {
            out.push_str(&format!("  {v};\n"));
        }
        for (a, b) in self.edges() {
            out.push_str(&format!("  {a} -- {b};\n"));
        }
        out.push_str("}\n");
        out
    }
}

/// Complete-multipartite recognition; see
/// [`SimpleGraph::complete_multipartite_parts`].
pub fn is_complete_multipartite(g: &SimpleGraph) -> Option<Vec<usize>> {
    g.complete_multipartite_parts()
}
