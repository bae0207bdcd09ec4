//! Simple undirected graphs on vertices `1..=n`, connectivity, BFS spanning
//! trees, tree paths and induced subgraphs.

use std::collections::VecDeque;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("self-loop ({0},{0})")]
    SelfLoop(usize),
    #[error("duplicate edge ({0},{1})")]
    DuplicateEdge(usize, usize),
    #[error("edge ({u},{v}) has an endpoint outside 1..={n}")]
    VertexOutOfRange { u: usize, v: usize, n: usize },
    #[error("vertex {vertex} is not in the component")]
    NotInComponent { vertex: usize },
    #[error("vertex set with smallest vertex {smallest} is not connected")]
    Disconnected { smallest: usize },
    #[error("empty vertex set")]
    EmptyComponent,
}

/// An unordered vertex pair stored with the smaller endpoint first.
///
/// The derived order is lexicographic on `(lo, hi)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(into = "[usize; 2]", from = "[usize; 2]")]
pub struct Edge {
    lo: usize,
    hi: usize,
}

impl Edge {
    pub fn new(a: usize, b: usize) -> Self {
        Self {
            lo: a.min(b),
            hi: a.max(b),
        }
    }

    pub fn lo(self) -> usize {
        self.lo
    }

    pub fn hi(self) -> usize {
        self.hi
    }

    pub fn endpoints(self) -> (usize, usize) {
        (self.lo, self.hi)
    }

    pub fn other(self, x: usize) -> usize {
        if x == self.lo {
            self.hi
        } else {
            self.lo
        }
    }
}

impl From<[usize; 2]> for Edge {
    fn from([a, b]: [usize; 2]) -> Self {
        Edge::new(a, b)
    }
}

impl From<Edge> for [usize; 2] {
    fn from(e: Edge) -> Self {
        [e.lo, e.hi]
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.lo, self.hi)
    }
}

/// A simple undirected graph. Vertices are `1..=n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    edges: Vec<Edge>,
    adj: Vec<Vec<usize>>,
}

impl Graph {
    /// Validates and normalizes an edge list. Pairs may be given in either
    /// orientation; self-loops, repeated pairs and out-of-range endpoints
    /// are rejected.
    pub fn new<I>(n: usize, pairs: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut edges = Vec::new();
        for (u, v) in pairs {
            if u == 0 || v == 0 || u > n || v > n {
                return Err(GraphError::VertexOutOfRange { u, v, n });
            }
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            edges.push(Edge::new(u, v));
        }
        edges.sort_unstable();
        if let Some(w) = edges.windows(2).find(|w| w[0] == w[1]) {
            return Err(GraphError::DuplicateEdge(w[0].lo, w[0].hi));
        }
        Ok(Self::from_sorted_edges(n, edges))
    }

    /// The graph with no edges.
    pub fn empty(n: usize) -> Self {
        Self::from_sorted_edges(n, Vec::new())
    }

    pub(crate) fn from_sorted_edges(n: usize, edges: Vec<Edge>) -> Self {
        let mut adj = vec![Vec::new(); n];
        for e in &edges {
            adj[e.lo - 1].push(e.hi);
            adj[e.hi - 1].push(e.lo);
        }
        for list in adj.iter_mut() {
            list.sort_unstable();
        }
        Self { n, edges, adj }
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn size(&self) -> usize {
        self.edges.len()
    }

    /// Edges in ascending lexicographic order.
    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn vertices(&self) -> std::ops::RangeInclusive<usize> {
        1..=self.n
    }

    /// Neighbors of `x` in ascending order.
    pub fn neighbors(&self, x: usize) -> &[usize] {
        &self.adj[x - 1]
    }

    pub fn degree(&self, x: usize) -> usize {
        self.adj[x - 1].len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        if u == 0 || v == 0 || u > self.n || v > self.n {
            return false;
        }
        self.adj[u - 1].binary_search(&v).is_ok()
    }

    pub fn contains_edge(&self, e: Edge) -> bool {
        self.has_edge(e.lo, e.hi)
    }

    /// Position of `e` in [`Graph::edges`].
    pub fn edge_index(&self, e: Edge) -> Option<usize> {
        self.edges.binary_search(&e).ok()
    }

    /// Vertex sets of the connected components, each sorted, ordered by
    /// smallest vertex.
    pub fn connected_components(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.n + 1];
        let mut parts = Vec::new();
        let mut queue = VecDeque::new();
        for s in 1..=self.n {
            if seen[s] {
                continue;
            }
            seen[s] = true;
            queue.push_back(s);
            let mut part = Vec::new();
            while let Some(x) = queue.pop_front() {
                part.push(x);
                for &y in self.neighbors(x) {
                    if !seen[y] {
                        seen[y] = true;
                        queue.push_back(y);
                    }
                }
            }
            part.sort_unstable();
            parts.push(part);
        }
        parts
    }

    pub fn is_connected(&self) -> bool {
        self.connected_components().len() <= 1
    }

    /// Breadth-first spanning tree of `component`, rooted at its smallest
    /// vertex with neighbors visited in ascending order.
    pub fn spanning_tree(&self, component: &[usize]) -> Result<SpanningTree, GraphError> {
        let mut vertices = component.to_vec();
        vertices.sort_unstable();
        vertices.dedup();
        let &root = vertices.first().ok_or(GraphError::EmptyComponent)?;
        if let Some(&x) = vertices.iter().find(|&&x| x == 0 || x > self.n) {
            return Err(GraphError::NotInComponent { vertex: x });
        }
        let slot = |x: usize| vertices.binary_search(&x).ok();
        let mut parent = vec![None; vertices.len()];
        let mut depth = vec![usize::MAX; vertices.len()];
        let mut order = Vec::with_capacity(vertices.len());
        let mut edges = Vec::with_capacity(vertices.len().saturating_sub(1));
        let mut queue = VecDeque::from([root]);
        depth[0] = 0;
        while let Some(x) = queue.pop_front() {
            order.push(x);
            let dx = depth[slot(x).expect("queued vertices are members")];
            for &y in self.neighbors(x) {
                let Some(sy) = slot(y) else { continue };
                if depth[sy] == usize::MAX {
                    depth[sy] = dx + 1;
                    let e = Edge::new(x, y);
                    parent[sy] = Some((x, e));
                    edges.push(e);
                    queue.push_back(y);
                }
            }
        }
        if order.len() != vertices.len() {
            return Err(GraphError::Disconnected { smallest: root });
        }
        Ok(SpanningTree {
            host_order: self.n,
            vertices,
            root,
            parent,
            depth,
            order,
            edges,
        })
    }

    /// Subgraph induced by `s`, relabeled to `1..=|s|` in ascending order of
    /// the original labels. The returned map sends new label `k` to
    /// `map[k - 1]`.
    pub fn induced_subgraph(&self, s: &[usize]) -> (Graph, Vec<usize>) {
        let mut map: Vec<usize> = s.iter().copied().filter(|&x| (1..=self.n).contains(&x)).collect();
        map.sort_unstable();
        map.dedup();
        let mut edges = Vec::new();
        for (a, &x) in map.iter().enumerate() {
            for &y in self.neighbors(x) {
                if y > x {
                    if let Ok(b) = map.binary_search(&y) {
                        edges.push(Edge::new(a + 1, b + 1));
                    }
                }
            }
        }
        edges.sort_unstable();
        (Graph::from_sorted_edges(map.len(), edges), map)
    }
}

/// A rooted spanning tree of one connected component.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpanningTree {
    host_order: usize,
    vertices: Vec<usize>,
    root: usize,
    /// Aligned with `vertices`: parent vertex and connecting edge.
    parent: Vec<Option<(usize, Edge)>>,
    depth: Vec<usize>,
    /// Breadth-first visiting order.
    order: Vec<usize>,
    edges: Vec<Edge>,
}

impl SpanningTree {
    /// Vertex count of the graph the tree was built in.
    pub fn host_order(&self) -> usize {
        self.host_order
    }

    /// Component vertices, ascending.
    pub fn vertices(&self) -> &[usize] {
        &self.vertices
    }

    pub fn root(&self) -> usize {
        self.root
    }

    /// Tree edges in discovery order.
    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    /// Vertices in breadth-first order; every vertex appears after its parent.
    pub fn bfs_order(&self) -> &[usize] {
        &self.order
    }

    pub fn contains(&self, x: usize) -> bool {
        self.vertices.binary_search(&x).is_ok()
    }

    pub fn parent(&self, x: usize) -> Result<Option<(usize, Edge)>, GraphError> {
        Ok(self.parent[self.slot(x)?])
    }

    fn slot(&self, x: usize) -> Result<usize, GraphError> {
        self.vertices
            .binary_search(&x)
            .map_err(|_| GraphError::NotInComponent { vertex: x })
    }

    /// Edges of the unique `i`-`j` path, walking from `i` up to the lowest
    /// common ancestor and then down to `j`.
    pub fn path(&self, i: usize, j: usize) -> Result<Vec<Edge>, GraphError> {
        let (mut a, mut b) = (self.slot(i)?, self.slot(j)?);
        let mut up = Vec::new();
        let mut down = Vec::new();
        let step = |s: usize| {
            let (p, e) = self.parent[s].expect("non-root has a parent");
            (self.slot(p).expect("parent is in the tree"), e)
        };
        while self.depth[a] > self.depth[b] {
            let (p, e) = step(a);
            up.push(e);
            a = p;
        }
        while self.depth[b] > self.depth[a] {
            let (p, e) = step(b);
            down.push(e);
            b = p;
        }
        while a != b {
            let (pa, ea) = step(a);
            let (pb, eb) = step(b);
            up.push(ea);
            down.push(eb);
            a = pa;
            b = pb;
        }
        up.extend(down.into_iter().rev());
        Ok(up)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c4() -> Graph {
        Graph::new(4, [(1, 2), (2, 3), (3, 4), (1, 4)]).unwrap()
    }

    fn e(a: usize, b: usize) -> Edge {
        Edge::new(a, b)
    }

    #[test]
    fn build() {
        let k2 = Graph::new(2, [(1, 2)]).unwrap();
        assert_eq!(k2.edges(), &[e(1, 2)]);
        let g = Graph::new(4, [(4, 1), (3, 2), (1, 2), (4, 3)]).unwrap();
        assert_eq!(g, c4());
        assert_eq!(g.edges(), &[e(1, 2), e(1, 4), e(2, 3), e(3, 4)]);
        assert_eq!(g.neighbors(1), &[2, 4]);
        assert_eq!(Graph::new(3, [(1, 1)]), Err(GraphError::SelfLoop(1)));
        assert_eq!(
            Graph::new(3, [(1, 2), (2, 1)]),
            Err(GraphError::DuplicateEdge(1, 2))
        );
        assert_eq!(
            Graph::new(3, [(1, 4)]),
            Err(GraphError::VertexOutOfRange { u: 1, v: 4, n: 3 })
        );
        assert!(Graph::new(3, [(0, 1)]).is_err());
    }

    #[test]
    fn components() {
        assert_eq!(c4().connected_components(), vec![vec![1, 2, 3, 4]]);
        let g = Graph::new(4, [(1, 2)]).unwrap();
        assert_eq!(g.connected_components(), vec![vec![1, 2], vec![3], vec![4]]);
        assert_eq!(Graph::empty(2).connected_components(), vec![vec![1], vec![2]]);
        let g = Graph::new(5, [(4, 2), (5, 1)]).unwrap();
        assert_eq!(g.connected_components(), vec![vec![1, 5], vec![2, 4], vec![3]]);
    }

    #[test]
    fn bfs_tree() {
        let t = c4().spanning_tree(&[1, 2, 3, 4]).unwrap();
        let mut edges = t.edges().to_vec();
        edges.sort();
        assert_eq!(edges, vec![e(1, 2), e(1, 4), e(2, 3)]);
        assert_eq!(t.root(), 1);
        assert_eq!(t.bfs_order(), &[1, 2, 4, 3]);

        let k2 = Graph::new(2, [(1, 2)]).unwrap();
        assert_eq!(k2.spanning_tree(&[1, 2]).unwrap().edges(), &[e(1, 2)]);

        let star = Graph::new(4, [(1, 2), (1, 3), (1, 4)]).unwrap();
        assert_eq!(star.spanning_tree(&[1, 2, 3, 4]).unwrap().edges(), star.edges());

        let two = Graph::new(4, [(1, 2), (3, 4)]).unwrap();
        assert_eq!(
            two.spanning_tree(&[1, 2, 3, 4]),
            Err(GraphError::Disconnected { smallest: 1 })
        );
        assert_eq!(two.spanning_tree(&[]), Err(GraphError::EmptyComponent));
    }

    #[test]
    fn paths() {
        let p4 = Graph::new(4, [(1, 2), (2, 3), (3, 4)]).unwrap();
        let t = p4.spanning_tree(&[1, 2, 3, 4]).unwrap();
        assert_eq!(t.path(1, 4).unwrap(), vec![e(1, 2), e(2, 3), e(3, 4)]);
        assert_eq!(t.path(4, 1).unwrap(), vec![e(3, 4), e(2, 3), e(1, 2)]);
        assert_eq!(t.path(2, 2).unwrap(), vec![]);

        let t = c4().spanning_tree(&[1, 2, 3, 4]).unwrap();
        assert_eq!(t.path(3, 4).unwrap(), vec![e(2, 3), e(1, 2), e(1, 4)]);
        assert_eq!(t.path(3, 5), Err(GraphError::NotInComponent { vertex: 5 }));
    }

    #[test]
    fn induced() {
        let k4 = Graph::new(4, [(1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4)]).unwrap();
        let (tri, map) = k4.induced_subgraph(&[1, 2, 3]);
        assert_eq!(tri, Graph::new(3, [(1, 2), (1, 3), (2, 3)]).unwrap());
        assert_eq!(map, vec![1, 2, 3]);

        let (g, map) = c4().induced_subgraph(&[3, 1]);
        assert_eq!(g, Graph::empty(2));
        assert_eq!(map, vec![1, 3]);

        let (g, map) = c4().induced_subgraph(&[]);
        assert_eq!(g.order(), 0);
        assert!(map.is_empty());

        let (g, map) = c4().induced_subgraph(&[2, 3, 4]);
        assert_eq!(g.edges(), &[e(1, 2), e(2, 3)]);
        assert_eq!(map, vec![2, 3, 4]);
    }
}
