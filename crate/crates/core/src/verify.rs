//! Definitional checks for perfect forests and parity-flip subgraphs.
//!
//! Nothing here touches the GF(2) machinery or the finder; every answer is
//! recomputed from the graph and the candidate edge set alone.

use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::graph::{Edge, Graph};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VerifyError {
    #[error("edge {0} is not in the graph")]
    EdgeNotInGraph(Edge),
    #[error("edge {0} is listed twice")]
    RepeatedEdge(Edge),
    #[error("vertex count mismatch: {expected} vs {found}")]
    VertexCountMismatch { expected: usize, found: usize },
}

/// One way a candidate fails the definition.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind")]
pub enum Violation {
    /// A vertex missing from the forest. Unreachable when the forest is given
    /// over the full vertex set: a missing vertex has degree 0 and is
    /// reported as [`Violation::EvenDegree`].
    NotSpanning { vertex: usize },
    /// The edge closes a cycle with forest edges listed before it.
    ContainsCycle { edge: Edge },
    EvenDegree { vertex: usize, degree: usize },
    /// A graph edge inside a tree's vertex set that the tree does not use.
    NotInduced { edge: Edge, tree: Vec<usize> },
    ParityUnchanged { vertex: usize, degree_g: usize, degree_h: usize },
    EdgeBound { edges_h: usize, bound: i64 },
}

impl Violation {
    pub fn detail(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NotSpanning { vertex } => write!(f, "vertex {vertex} is not covered"),
            Violation::ContainsCycle { edge } => write!(f, "edge {edge} closes a cycle"),
            Violation::EvenDegree { vertex, degree } => {
                write!(f, "vertex {vertex} has even degree {degree}")
            }
            Violation::NotInduced { edge, tree } => {
                write!(f, "edge {edge} lies inside tree {tree:?} but is not a tree edge")
            }
            Violation::ParityUnchanged {
                vertex,
                degree_g,
                degree_h,
            } => write!(
                f,
                "vertex {vertex} keeps its parity (degree {degree_g} in G, {degree_h} in H)"
            ),
            Violation::EdgeBound { edges_h, bound } => {
                write!(f, "H has {edges_h} edges, fewer than the bound {bound}")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Valid,
    Invalid(Vec<Violation>),
}

impl Verdict {
    pub fn is_valid(&self) -> bool {
        matches!(self, Verdict::Valid)
    }

    pub fn violations(&self) -> &[Violation] {
        match self {
            Verdict::Valid => &[],
            Verdict::Invalid(v) => v,
        }
    }

    fn from_violations(v: Vec<Violation>) -> Self {
        if v.is_empty() {
            Verdict::Valid
        } else {
            Verdict::Invalid(v)
        }
    }
}

struct Dsu {
    parent: Vec<usize>,
}

impl Dsu {
    fn new(n: usize) -> Self {
        Self {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.parent[ra.max(rb)] = ra.min(rb);
        true
    }
}

/// Checks that `forest` is acyclic, gives every vertex odd degree and
/// contains every graph edge between vertices of the same tree.
///
/// All violations are reported: cycle-closing edges first, then even-degree
/// vertices ascending, then non-induced edges ascending.
pub fn verify_perfect_forest(g: &Graph, forest: &[Edge]) -> Result<Verdict, VerifyError> {
    let mut sorted = forest.to_vec();
    sorted.sort_unstable();
    for w in sorted.windows(2) {
        if w[0] == w[1] {
            return Err(VerifyError::RepeatedEdge(w[0]));
        }
    }
    if let Some(&e) = sorted.iter().find(|&&e| !g.contains_edge(e)) {
        return Err(VerifyError::EdgeNotInGraph(e));
    }

    let n = g.order();
    let mut violations = Vec::new();
    let mut dsu = Dsu::new(n + 1);
    let mut degree = vec![0usize; n + 1];
    for &e in &sorted {
        let (a, b) = e.endpoints();
        degree[a] += 1;
        degree[b] += 1;
        if !dsu.union(a, b) {
            violations.push(Violation::ContainsCycle { edge: e });
        }
    }
    for (x, &d) in degree.iter().enumerate().skip(1) {
        if d.is_multiple_of(2) {
            violations.push(Violation::EvenDegree { vertex: x, degree: d });
        }
    }

    let mut members: Vec<Vec<usize>> = vec![Vec::new(); n + 1];
    for x in 1..=n {
        let r = dsu.find(x);
        members[r].push(x);
    }
    for &e in g.edges() {
        let (a, b) = e.endpoints();
        let r = dsu.find(a);
        if r == dsu.find(b) && sorted.binary_search(&e).is_err() {
            violations.push(Violation::NotInduced {
                edge: e,
                tree: members[r].clone(),
            });
        }
    }
    Ok(Verdict::from_violations(violations))
}

/// Checks that every vertex has different degree parity in `g` and `h`, and
/// that `|E(h)| >= |E(g)| - 2n + 2`.
pub fn verify_parity_flip(g: &Graph, h: &Graph) -> Result<Verdict, VerifyError> {
    if g.order() != h.order() {
        return Err(VerifyError::VertexCountMismatch {
            expected: g.order(),
            found: h.order(),
        });
    }
    if let Some(&e) = h.edges().iter().find(|&&e| !g.contains_edge(e)) {
        return Err(VerifyError::EdgeNotInGraph(e));
    }
    let mut violations: Vec<Violation> = g
        .vertices()
        .filter(|&x| g.degree(x) % 2 == h.degree(x) % 2)
        .map(|x| Violation::ParityUnchanged {
            vertex: x,
            degree_g: g.degree(x),
            degree_h: h.degree(x),
        })
        .collect();
    let bound = parity_flip_bound(g);
    if (h.size() as i64) < bound {
        violations.push(Violation::EdgeBound {
            edges_h: h.size(),
            bound,
        });
    }
    Ok(Verdict::from_violations(violations))
}

/// `|E(g)| - 2n + 2`.
pub fn parity_flip_bound(g: &Graph) -> i64 {
    g.size() as i64 - 2 * g.order() as i64 + 2
}
