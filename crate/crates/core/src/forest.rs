//! Perfect-forest construction.
//!
//! Every vertex of a component `C` of even order can be covered by an edge
//! set `L` of a spanning tree whose edge vectors sum to the indicator of `C`
//! (equivalently: every vertex has odd degree in `L`). As long as some edge
//! `e` of the graph outside `L` has `v(e)` in the span of `L`, the members
//! `L'` summing to `v(e)` are swapped out for `e`, which strictly shrinks
//! `L`. When no such edge remains, the components of `(C, L)` are induced
//! trees with odd degrees everywhere.
//!
//! Two realizations of the span test are provided. [`Strategy::Algebraic`]
//! keeps an [`EdgeBasis`] over `L` and restarts the edge scan after every
//! substitution. [`Strategy::UnionFind`] uses the fact that for edge vectors
//! `v(ij)` lies in the span of an acyclic `L` exactly when `i` and `j` are in
//! the same tree of `(C, L)`, with `L'` the tree path between them.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::gf2::{self, edge_vector, xor_sum, BitVector, EdgeBasis, Gf2Error, Insertion};
use crate::graph::{Edge, Graph, GraphError, SpanningTree};
use crate::par::{self, Execution};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ForestError {
    #[error(
        "component containing vertex {smallest} has odd order {order}; \
         a perfect forest exists only when every component has even order"
    )]
    OddComponent { smallest: usize, order: usize },
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Algebra(#[from] Gf2Error),
    #[error("invalid representation: {0}")]
    InvalidRepresentation(String),
    #[error("span test disagrees with forest connectivity at edge {edge}: {detail}")]
    AlgebraMismatch { edge: Edge, detail: String },
}

/// How dependency of a candidate edge on `L` is decided.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Strategy {
    /// Connectivity of the forest `(C, L)`, maintained incrementally.
    #[default]
    UnionFind,
    /// Gaussian elimination over GF(2) with a full rescan after each swap.
    Algebraic,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct FinderOptions {
    pub strategy: Strategy,
    /// With [`Strategy::UnionFind`], answer every span query a second time
    /// with an [`EdgeBasis`] and fail on any disagreement. Also re-checks the
    /// loop invariant after each substitution.
    pub check_algebra: bool,
    pub execution: Execution,
}

/// An edge set `L` of one component whose edge vectors are independent and
/// sum to the component's indicator vector.
#[derive(Debug, Clone)]
pub struct Representation {
    component: Vec<usize>,
    edges: Vec<Edge>,
    basis: EdgeBasis<Edge>,
}

impl Representation {
    /// Checks that `edges` lie in `g` inside `component`, are independent and
    /// give every component vertex odd degree.
    pub fn new(g: &Graph, component: &[usize], edges: &[Edge]) -> Result<Self, ForestError> {
        let mut component = component.to_vec();
        component.sort_unstable();
        component.dedup();
        let mut sorted = edges.to_vec();
        sorted.sort_unstable();
        for &e in &sorted {
            if !g.contains_edge(e) {
                return Err(ForestError::InvalidRepresentation(format!("{e} is not an edge")));
            }
            if component.binary_search(&e.lo()).is_err() || component.binary_search(&e.hi()).is_err() {
                return Err(ForestError::InvalidRepresentation(format!(
                    "{e} leaves the component"
                )));
            }
        }
        let rep = Self::from_edges(g.order(), component, sorted)?;
        rep.check_invariants()?;
        Ok(rep)
    }

    fn from_edges(n: usize, component: Vec<usize>, edges: Vec<Edge>) -> Result<Self, ForestError> {
        let mut basis = EdgeBasis::new(n);
        for &e in &edges {
            if let Insertion::Dependent(_) = basis.try_insert(e, edge_vector(e.lo(), e.hi(), n)?)? {
                return Err(ForestError::InvalidRepresentation(format!(
                    "{e} depends on the other members"
                )));
            }
        }
        Ok(Self {
            component,
            edges,
            basis,
        })
    }

    pub fn component(&self) -> &[usize] {
        &self.component
    }

    /// Members of `L`, ascending.
    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn basis(&self) -> &EdgeBasis<Edge> {
        &self.basis
    }

    /// Re-derives independence (by a fresh elimination) and the sum of `L`.
    pub fn check_invariants(&self) -> Result<(), ForestError> {
        let vectors: Vec<BitVector> = self.basis.members().iter().map(|(_, v)| v.clone()).collect();
        if gf2::rank(&vectors) != vectors.len() {
            return Err(ForestError::InvalidRepresentation("members are dependent".into()));
        }
        let target = BitVector::indicator(self.basis.dimension(), &self.component);
        if xor_sum(self.basis.dimension(), &vectors)? != target {
            return Err(ForestError::InvalidRepresentation(
                "members do not sum to the component indicator".into(),
            ));
        }
        Ok(())
    }
}

/// Result of one scan for a dependent edge.
#[derive(Debug, Clone)]
pub enum Refinement {
    Reduced {
        rep: Representation,
        added: Edge,
        removed: Vec<Edge>,
    },
    Stable,
}

/// Edges of `t` whose vectors sum to the indicator of the tree's vertex set.
///
/// Vertices are processed leaves-first; a vertex takes its parent edge iff
/// its degree among the edges chosen so far is even. The solution is unique
/// since tree edge vectors are independent.
pub fn tree_parity_edges(t: &SpanningTree) -> Result<Vec<Edge>, ForestError> {
    let verts = t.vertices();
    if verts.len() % 2 == 1 {
        return Err(ForestError::OddComponent {
            smallest: t.root(),
            order: verts.len(),
        });
    }
    let slot = |x: usize| verts.binary_search(&x).expect("tree vertex");
    let mut odd = vec![false; verts.len()];
    let mut chosen = Vec::with_capacity(verts.len() / 2);
    for &x in t.bfs_order().iter().rev() {
        let Some((p, e)) = t.parent(x)? else { continue };
        if !odd[slot(x)] {
            chosen.push(e);
            odd[slot(x)] = true;
            let sp = slot(p);
            odd[sp] = !odd[sp];
        }
    }
    debug_assert!(odd.iter().all(|&o| o));
    chosen.sort_unstable();
    Ok(chosen)
}

/// The representation of the component's all-ones vector by tree edges.
pub fn all_ones_representation(t: &SpanningTree) -> Result<Representation, ForestError> {
    let edges = tree_parity_edges(t)?;
    Representation::from_edges(t.host_order(), t.vertices().to_vec(), edges)
}

/// Scans the component's non-`L` edges in ascending order and performs the
/// first available substitution.
pub fn refine_once(g: &Graph, rep: &Representation) -> Result<Refinement, ForestError> {
    let n = g.order();
    let comp = rep.component();
    for e in component_edges(g, comp, false) {
        if rep.edges.binary_search(&e).is_ok() {
            continue;
        }
        let v = edge_vector(e.lo(), e.hi(), n)?;
        if let Some(removed) = rep.basis.represent(&v)? {
            let mut edges: Vec<Edge> = rep
                .edges
                .iter()
                .copied()
                .filter(|f| !removed.contains(f))
                .chain(std::iter::once(e))
                .collect();
            edges.sort_unstable();
            let next = Representation::from_edges(n, comp.to_vec(), edges)?;
            return Ok(Refinement::Reduced {
                rep: next,
                added: e,
                removed,
            });
        }
    }
    Ok(Refinement::Stable)
}

/// One tree of a perfect forest.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Tree {
    pub vertices: Vec<usize>,
    pub edges: Vec<Edge>,
}

/// Per-component bookkeeping of the refinement.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ComponentReport {
    pub smallest: usize,
    pub order: usize,
    /// `|L|` taken from the spanning tree.
    pub initial_size: usize,
    pub final_size: usize,
    /// Number of substitutions performed.
    pub substitutions: usize,
}

/// A spanning forest with odd degrees and induced trees, plus how it was
/// reached.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PerfectForest {
    order: usize,
    edges: Vec<Edge>,
    trees: Vec<Tree>,
    components: Vec<ComponentReport>,
    algebra_checks: usize,
}

impl PerfectForest {
    /// Vertex count of the host graph.
    pub fn order(&self) -> usize {
        self.order
    }

    /// Forest edges, ascending.
    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    /// Trees ordered by smallest vertex.
    pub fn trees(&self) -> &[Tree] {
        &self.trees
    }

    pub fn components(&self) -> &[ComponentReport] {
        &self.components
    }

    /// Total substitutions across components.
    pub fn iterations(&self) -> usize {
        self.components.iter().map(|c| c.substitutions).sum()
    }

    /// Number of span queries answered twice when checking was enabled.
    pub fn algebra_checks(&self) -> usize {
        self.algebra_checks
    }
}

pub fn find_perfect_forest(g: &Graph) -> Result<PerfectForest, ForestError> {
    find_perfect_forest_with(g, &FinderOptions::default())
}

/// Finds a perfect forest of every component independently and merges them
/// in component order.
pub fn find_perfect_forest_with(g: &Graph, opts: &FinderOptions) -> Result<PerfectForest, ForestError> {
    let components = g.connected_components();
    if let Some(c) = components.iter().find(|c| c.len() % 2 == 1) {
        return Err(ForestError::OddComponent {
            smallest: c[0],
            order: c.len(),
        });
    }
    let results = par::map_slice(opts.execution, &components, |c| solve_component(g, c, opts));
    let mut forest = PerfectForest {
        order: g.order(),
        edges: Vec::new(),
        trees: Vec::new(),
        components: Vec::with_capacity(components.len()),
        algebra_checks: 0,
    };
    for r in results {
        let r = r?;
        forest.edges.extend(r.trees.iter().flat_map(|t| t.edges.iter().copied()));
        forest.trees.extend(r.trees);
        forest.components.push(r.report);
        forest.algebra_checks += r.algebra_checks;
    }
    forest.edges.sort_unstable();
    forest.trees.sort_by_key(|t| t.vertices[0]);
    Ok(forest)
}

/// `g` with the edges of a perfect forest removed; every degree changes
/// parity.
pub fn parity_flip_subgraph(g: &Graph) -> Result<Graph, ForestError> {
    let forest = find_perfect_forest(g)?;
    let kept = g
        .edges()
        .iter()
        .copied()
        .filter(|e| forest.edges.binary_search(e).is_err())
        .collect();
    Ok(Graph::from_sorted_edges(g.order(), kept))
}

struct ComponentResult {
    trees: Vec<Tree>,
    report: ComponentReport,
    algebra_checks: usize,
}

fn solve_component(g: &Graph, comp: &[usize], opts: &FinderOptions) -> Result<ComponentResult, ForestError> {
    let tree = g.spanning_tree(comp)?;
    let (l_edges, initial_size, substitutions, algebra_checks) = match opts.strategy {
        Strategy::Algebraic => {
            let mut rep = all_ones_representation(&tree)?;
            let initial = rep.edges.len();
            let mut steps = 0;
            while let Refinement::Reduced { rep: next, .. } = refine_once(g, &rep)? {
                debug_assert!(next.check_invariants().is_ok());
                if opts.check_algebra {
                    next.check_invariants()?;
                }
                rep = next;
                steps += 1;
            }
            (rep.edges, initial, steps, 0)
        }
        Strategy::UnionFind => {
            let initial = tree_parity_edges(&tree)?;
            let mut state = LocalForest::new(g, comp, &initial);
            let checks = state.refine(opts.check_algebra)?;
            (state.l_edges(), initial.len(), state.substitutions, checks)
        }
    };
    assert!(
        substitutions <= comp.len() && substitutions < initial_size.max(1),
        "substitution count {substitutions} exceeds the bound"
    );
    Ok(ComponentResult {
        trees: split_trees(comp, &l_edges),
        report: ComponentReport {
            smallest: comp[0],
            order: comp.len(),
            initial_size,
            final_size: l_edges.len(),
            substitutions,
        },
        algebra_checks,
    })
}

/// Edges with both ends in `comp`, ascending. When `closed` is set the
/// caller guarantees `comp` is a union of connected components.
fn component_edges<'a>(g: &'a Graph, comp: &'a [usize], closed: bool) -> impl Iterator<Item = Edge> + 'a {
    comp.iter().flat_map(move |&x| {
        g.neighbors(x)
            .iter()
            .filter(move |&&y| y > x && (closed || comp.binary_search(&y).is_ok()))
            .map(move |&y| Edge::new(x, y))
    })
}

/// Connected components of `(comp, edges)` as trees ordered by smallest vertex.
fn split_trees(comp: &[usize], edges: &[Edge]) -> Vec<Tree> {
    let slot = |x: usize| comp.binary_search(&x).expect("component vertex");
    let mut adj = vec![Vec::new(); comp.len()];
    for &e in edges {
        adj[slot(e.lo())].push(slot(e.hi()));
        adj[slot(e.hi())].push(slot(e.lo()));
    }
    let mut label = vec![usize::MAX; comp.len()];
    let mut count = 0;
    for s in 0..comp.len() {
        if label[s] != usize::MAX {
            continue;
        }
        label[s] = count;
        let mut stack = vec![s];
        while let Some(a) = stack.pop() {
            for &b in &adj[a] {
                if label[b] == usize::MAX {
                    label[b] = count;
                    stack.push(b);
                }
            }
        }
        count += 1;
    }
    let mut trees = vec![
        Tree {
            vertices: Vec::new(),
            edges: Vec::new()
        };
        count
    ];
    for (s, &x) in comp.iter().enumerate() {
        trees[label[s]].vertices.push(x);
    }
    for &e in edges {
        trees[label[slot(e.lo())]].edges.push(e);
    }
    trees
}

/// Component-local state of the connectivity-based refinement.
struct LocalForest<'g> {
    g: &'g Graph,
    comp: &'g [usize],
    /// Component edges as local endpoint pairs, ascending.
    edges: Vec<(usize, usize)>,
    in_l: Vec<bool>,
    /// Forest adjacency: (neighbor, edge index).
    adj: Vec<Vec<(usize, usize)>>,
    label: Vec<usize>,
    next_label: usize,
    substitutions: usize,
}

impl<'g> LocalForest<'g> {
    fn new(g: &'g Graph, comp: &'g [usize], initial: &[Edge]) -> Self {
        let slot = |x: usize| comp.binary_search(&x).expect("component vertex");
        let edges: Vec<(usize, usize)> = component_edges(g, comp, true)
            .map(|e| (slot(e.lo()), slot(e.hi())))
            .collect();
        let mut this = Self {
            g,
            comp,
            in_l: vec![false; edges.len()],
            adj: vec![Vec::new(); comp.len()],
            label: vec![usize::MAX; comp.len()],
            next_label: 0,
            substitutions: 0,
            edges,
        };
        for e in initial {
            let k = this
                .edges
                .binary_search(&(slot(e.lo()), slot(e.hi())))
                .expect("tree edge is a component edge");
            this.link(k);
        }
        for s in 0..comp.len() {
            if this.label[s] == usize::MAX {
                this.flood(s);
            }
        }
        this
    }

    fn link(&mut self, k: usize) {
        let (a, b) = self.edges[k];
        self.in_l[k] = true;
        self.adj[a].push((b, k));
        self.adj[b].push((a, k));
    }

    fn unlink(&mut self, k: usize) {
        let (a, b) = self.edges[k];
        self.in_l[k] = false;
        self.adj[a].retain(|&(_, j)| j != k);
        self.adj[b].retain(|&(_, j)| j != k);
    }

    fn flood(&mut self, s: usize) {
        let l = self.next_label;
        self.next_label += 1;
        self.label[s] = l;
        let mut stack = vec![s];
        while let Some(a) = stack.pop() {
            for i in 0..self.adj[a].len() {
                let b = self.adj[a][i].0;
                if self.label[b] != l {
                    self.label[b] = l;
                    stack.push(b);
                }
            }
        }
    }

    /// Breadth-first walk of the tree containing `a`; returns the visited
    /// vertices and the edge indices of the path from `a` to `b`.
    fn tree_path(&self, a: usize, b: usize) -> (Vec<usize>, Vec<usize>) {
        let mut via: Vec<Option<(usize, usize)>> = vec![None; self.comp.len()];
        let mut seen = vec![a];
        let mut queue = VecDeque::from([a]);
        let mut visited = vec![false; self.comp.len()];
        visited[a] = true;
        while let Some(x) = queue.pop_front() {
            for &(y, k) in &self.adj[x] {
                if !visited[y] {
                    visited[y] = true;
                    via[y] = Some((x, k));
                    seen.push(y);
                    queue.push_back(y);
                }
            }
        }
        let mut path = Vec::new();
        let mut x = b;
        while let Some((p, k)) = via[x] {
            path.push(k);
            x = p;
        }
        (seen, path)
    }

    fn to_edge(&self, k: usize) -> Edge {
        let (a, b) = self.edges[k];
        Edge::new(self.comp[a], self.comp[b])
    }

    fn l_edges(&self) -> Vec<Edge> {
        (0..self.edges.len())
            .filter(|&k| self.in_l[k])
            .map(|k| self.to_edge(k))
            .collect()
    }

    /// Runs the scan to completion. Returns the number of cross-checked span
    /// queries.
    ///
    /// A substitution only splits trees of `(C, L)` into smaller ones (the
    /// swapped-in edge reconnects two pieces of the same old tree) and the
    /// removed edges end up joining different trees, so no edge before the
    /// scan position can become dependent. A single pass therefore sees the
    /// same substitutions as restarting from the first edge.
    fn refine(&mut self, check: bool) -> Result<usize, ForestError> {
        let mut checks = 0;
        let mut basis = None;
        if check {
            let b = self.algebra_basis()?;
            checks += self.cross_check(&b)?;
            basis = Some(b);
        }
        for k in 0..self.edges.len() {
            if self.in_l[k] {
                continue;
            }
            let (a, b) = self.edges[k];
            if self.label[a] != self.label[b] {
                continue;
            }
            let (old_tree, path) = self.tree_path(a, b);
            for &p in &path {
                self.unlink(p);
            }
            self.link(k);
            for &x in &old_tree {
                self.label[x] = usize::MAX;
            }
            for &x in &old_tree {
                if self.label[x] == usize::MAX {
                    self.flood(x);
                }
            }
            self.substitutions += 1;
            if let Some(old) = basis.as_mut() {
                let b = self.algebra_basis()?;
                let rep = Representation {
                    component: self.comp.to_vec(),
                    edges: self.l_edges(),
                    basis: b.clone(),
                };
                rep.check_invariants()?;
                checks += self.cross_check(&b)?;
                *old = b;
            }
        }
        Ok(checks)
    }

    fn algebra_basis(&self) -> Result<EdgeBasis<Edge>, ForestError> {
        let n = self.g.order();
        let mut basis = EdgeBasis::new(n);
        for e in self.l_edges() {
            if let Insertion::Dependent(_) = basis.try_insert(e, edge_vector(e.lo(), e.hi(), n)?)? {
                return Err(ForestError::AlgebraMismatch {
                    edge: e,
                    detail: "forest edge depends on the other forest edges".into(),
                });
            }
        }
        Ok(basis)
    }

    /// Compares the span test against forest connectivity for every non-`L`
    /// edge of the component.
    fn cross_check(&self, basis: &EdgeBasis<Edge>) -> Result<usize, ForestError> {
        let n = self.g.order();
        let mut checks = 0;
        for k in 0..self.edges.len() {
            if self.in_l[k] {
                continue;
            }
            let e = self.to_edge(k);
            let (a, b) = self.edges[k];
            let same = self.label[a] == self.label[b];
            let algebraic = basis.represent(&edge_vector(e.lo(), e.hi(), n)?)?;
            checks += 1;
            match (same, algebraic) {
                (false, None) => {}
                (true, Some(mut combo)) => {
                    let mut path: Vec<Edge> = self.tree_path(a, b).1.into_iter().map(|p| self.to_edge(p)).collect();
                    path.sort_unstable();
                    combo.sort_unstable();
                    if path != combo {
                        return Err(ForestError::AlgebraMismatch {
                            edge: e,
                            detail: format!("path {path:?} but combination {combo:?}"),
                        });
                    }
                }
                (same, combo) => {
                    return Err(ForestError::AlgebraMismatch {
                        edge: e,
                        detail: format!("same tree: {same}, in span: {}", combo.is_some()),
                    });
                }
            }
        }
        Ok(checks)
    }
}
