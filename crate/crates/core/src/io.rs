//! Edge-list and forest documents, and the seeded random graph generator.
//!
//! Edge lists are ASCII text: a header line `n m`, then `m` lines `i j`
//! with `1 <= i < j <= n`. Lines starting with `#` are comments. Output is
//! written with single spaces and LF line endings.

use std::collections::{BinaryHeap, HashMap};
use std::cmp::Reverse;
use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::forest::{PerfectForest, Tree};
use crate::graph::{Edge, Graph};
use crate::verify::parity_flip_bound;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("missing header line `n m`")]
    MissingHeader,
    #[error("expected a non-negative integer, found `{0}`")]
    BadInteger(String),
    #[error("expected exactly two fields")]
    FieldCount,
    #[error("self-loop ({0},{0})")]
    SelfLoop(usize),
    #[error("pair ({0},{1}) must be written with the smaller vertex first")]
    Descending(usize, usize),
    #[error("vertex {vertex} outside 1..={n}")]
    OutOfRange { vertex: usize, n: usize },
    #[error("edge ({0},{1}) repeats line {2}")]
    Duplicate(usize, usize, usize),
    #[error("header declares {declared} edges but {found} were given")]
    CountMismatch { declared: usize, found: usize },
    #[error("unrecognized line")]
    UnknownLine,
    #[error("malformed structured document: {0}")]
    Json(String),
}

/// A parse failure at a 1-based line and column.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}, column {column}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub kind: ParseErrorKind,
}

/// Whitespace-separated tokens of a line with their 1-based columns.
fn tokens(line: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, c) in line.char_indices() {
        match (c.is_ascii_whitespace(), start) {
            (true, Some(s)) => {
                out.push((s + 1, &line[s..i]));
                start = None;
            }
            (false, None) => start = Some(i),
            _ => {}
        }
    }
    if let Some(s) = start {
        out.push((s + 1, &line[s..]));
    }
    out
}

fn integer(line: usize, (column, tok): (usize, &str)) -> Result<usize, ParseError> {
    tok.parse().map_err(|_| ParseError {
        line,
        column,
        kind: ParseErrorKind::BadInteger(tok.to_string()),
    })
}

/// Non-comment, non-blank lines with their 1-based line numbers.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l))
        .filter(|(_, l)| !l.trim().is_empty() && !l.trim_start().starts_with('#'))
}

fn pair(line: usize, toks: &[(usize, &str)]) -> Result<(usize, usize), ParseError> {
    if toks.len() != 2 {
        let column = toks.get(2).map_or(1, |t| t.0);
        return Err(ParseError {
            line,
            column,
            kind: ParseErrorKind::FieldCount,
        });
    }
    Ok((integer(line, toks[0])?, integer(line, toks[1])?))
}

pub fn parse_edge_list(text: &str) -> Result<Graph, ParseError> {
    let mut lines = content_lines(text);
    let (hline, header) = lines.next().ok_or(ParseError {
        line: 1,
        column: 1,
        kind: ParseErrorKind::MissingHeader,
    })?;
    let (n, m) = pair(hline, &tokens(header))?;
    let mut seen: HashMap<(usize, usize), usize> = HashMap::with_capacity(m);
    let mut pairs = Vec::with_capacity(m);
    let mut last_line = hline;
    for (line, body) in lines {
        last_line = line;
        let toks = tokens(body);
        let (i, j) = pair(line, &toks)?;
        let at = |column, kind| ParseError { line, column, kind };
        for (k, v) in [(0, i), (1, j)] {
            if v == 0 || v > n {
                return Err(at(toks[k].0, ParseErrorKind::OutOfRange { vertex: v, n }));
            }
        }
        if i == j {
            return Err(at(toks[1].0, ParseErrorKind::SelfLoop(i)));
        }
        if i > j {
            return Err(at(toks[0].0, ParseErrorKind::Descending(i, j)));
        }
        if let Some(&prev) = seen.get(&(i, j)) {
            return Err(at(toks[0].0, ParseErrorKind::Duplicate(i, j, prev)));
        }
        seen.insert((i, j), line);
        pairs.push((i, j));
    }
    if pairs.len() != m {
        return Err(ParseError {
            line: last_line,
            column: 1,
            kind: ParseErrorKind::CountMismatch {
                declared: m,
                found: pairs.len(),
            },
        });
    }
    Ok(Graph::new(n, pairs).expect("pairs validated above"))
}

pub fn write_edge_list(g: &Graph) -> String {
    let mut out = String::with_capacity(12 * (g.size() + 1));
    writeln!(out, "{} {}", g.order(), g.size()).unwrap();
    for e in g.edges() {
        writeln!(out, "{} {}", e.lo(), e.hi()).unwrap();
    }
    out
}

/// Output rendering selected on the command line.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Text,
    /// JSON.
    Structured,
}

/// Serializable view of a perfect forest.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ForestDocument {
    pub component_count: usize,
    pub iterations: usize,
    pub trees: Vec<Tree>,
}

impl From<&PerfectForest> for ForestDocument {
    fn from(f: &PerfectForest) -> Self {
        Self {
            component_count: f.components().len(),
            iterations: f.iterations(),
            trees: f.trees().to_vec(),
        }
    }
}

impl ForestDocument {
    /// All tree edges, ascending.
    pub fn edges(&self) -> Vec<Edge> {
        let mut edges: Vec<Edge> = self.trees.iter().flat_map(|t| t.edges.iter().copied()).collect();
        edges.sort_unstable();
        edges
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Structured => {
                let mut s = serde_json::to_string_pretty(self).expect("plain data");
                s.push('\n');
                s
            }
            Format::Text => {
                let mut out = String::new();
                writeln!(
                    out,
                    "forest trees {} components {} iterations {}",
                    self.trees.len(),
                    self.component_count,
                    self.iterations
                )
                .unwrap();
                for (k, t) in self.trees.iter().enumerate() {
                    write!(out, "tree {} vertices", k + 1).unwrap();
                    for v in &t.vertices {
                        write!(out, " {v}").unwrap();
                    }
                    out.push('\n');
                    for e in &t.edges {
                        writeln!(out, "edge {} {}", e.lo(), e.hi()).unwrap();
                    }
                }
                out
            }
        }
    }

    /// Reads either rendering; JSON is recognized by a leading `{`.
    pub fn parse(text: &str) -> Result<Self, ParseError> {
        if text.trim_start().starts_with('{') {
            return serde_json::from_str(text).map_err(|e| ParseError {
                line: e.line(),
                column: e.column(),
                kind: ParseErrorKind::Json(e.to_string()),
            });
        }
        let mut doc = ForestDocument {
            component_count: 0,
            iterations: 0,
            trees: Vec::new(),
        };
        for (line, body) in content_lines(text) {
            let toks = tokens(body);
            let bad = |column| ParseError {
                line,
                column,
                kind: ParseErrorKind::UnknownLine,
            };
            match toks[0].1 {
                "forest" => {
                    let fields = &toks[1..];
                    if fields.len() != 6 {
                        return Err(bad(1));
                    }
                    for kv in fields.chunks(2) {
                        let value = integer(line, kv[1])?;
                        match kv[0].1 {
                            "trees" => {}
                            "components" => doc.component_count = value,
                            "iterations" => doc.iterations = value,
                            _ => return Err(bad(kv[0].0)),
                        }
                    }
                }
                "tree" => {
                    if toks.len() < 3 || toks[2].1 != "vertices" {
                        return Err(bad(1));
                    }
                    let vertices = toks[3..].iter().map(|&t| integer(line, t)).collect::<Result<_, _>>()?;
                    doc.trees.push(Tree {
                        vertices,
                        edges: Vec::new(),
                    });
                }
                "edge" => {
                    let (i, j) = pair(line, &toks[1..])?;
                    let tree = doc.trees.last_mut().ok_or_else(|| bad(1))?;
                    tree.edges.push(Edge::new(i, j));
                }
                _ => return Err(bad(toks[0].0)),
            }
        }
        Ok(doc)
    }
}

/// Degree data certifying that `h` flips every degree parity of `g`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FlipCertificate {
    pub order: usize,
    pub edges_g: usize,
    pub edges_h: usize,
    /// `|E(G)| - 2n + 2`.
    pub bound: i64,
    /// `|E(G)| - (n - 1)`, the sharper bound from a forest's edge count.
    pub forest_bound: i64,
    pub vertices: Vec<VertexParity>,
    pub edges: Vec<Edge>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VertexParity {
    pub vertex: usize,
    pub degree_g: usize,
    pub degree_h: usize,
}

impl FlipCertificate {
    pub fn new(g: &Graph, h: &Graph) -> Self {
        Self {
            order: g.order(),
            edges_g: g.size(),
            edges_h: h.size(),
            bound: parity_flip_bound(g),
            forest_bound: g.size() as i64 - (g.order() as i64 - 1),
            vertices: g
                .vertices()
                .map(|x| VertexParity {
                    vertex: x,
                    degree_g: g.degree(x),
                    degree_h: h.degree(x),
                })
                .collect(),
            edges: h.edges().to_vec(),
        }
    }

    /// The text form is a valid edge list for `h` with the certificate in
    /// leading comment lines.
    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Structured => {
                let mut s = serde_json::to_string_pretty(self).expect("plain data");
                s.push('\n');
                s
            }
            Format::Text => {
                let parity = |d: usize| if d.is_multiple_of(2) { "even" } else { "odd" };
                let mut out = String::new();
                writeln!(
                    out,
                    "# parity flip: |E(G)| = {}, |E(H)| = {}, |E(G)| - 2n + 2 = {}, |E(G)| - (n - 1) = {}",
                    self.edges_g, self.edges_h, self.bound, self.forest_bound
                )
                .unwrap();
                for v in &self.vertices {
                    writeln!(
                        out,
                        "# vertex {}: d_G = {} ({}), d_H = {} ({})",
                        v.vertex,
                        v.degree_g,
                        parity(v.degree_g),
                        v.degree_h,
                        parity(v.degree_h)
                    )
                    .unwrap();
                }
                writeln!(out, "{} {}", self.order, self.edges.len()).unwrap();
                for e in &self.edges {
                    writeln!(out, "{} {}", e.lo(), e.hi()).unwrap();
                }
                out
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GenerateError {
    #[error("edge probability must lie in [0, 1], got {0}")]
    InvalidProbability(f64),
    #[error("vertex count must be at least 1")]
    NoVertices,
}

/// A connected random graph determined by `(n, p, seed)`.
///
/// The stream is ChaCha8 seeded with `seed`. First `n - 2` labels drawn
/// uniformly from `1..=n` form a Prüfer sequence, decoded with the smallest
/// available leaf first; this yields a uniformly random labeled spanning
/// tree. Then every pair `(i, j)`, `i < j`, not in the tree is visited in
/// lexicographic order and kept when a uniform draw from `[0, 1)` is below
/// `p`.
pub fn generate_random_graph(n: usize, p: f64, seed: u64) -> Result<Graph, GenerateError> {
    if !(0.0..=1.0).contains(&p) {
        return Err(GenerateError::InvalidProbability(p));
    }
    if n == 0 {
        return Err(GenerateError::NoVertices);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let tree = random_tree(n, &mut rng);

    let mut above: Vec<Vec<usize>> = vec![Vec::new(); n + 1];
    for e in &tree {
        above[e.lo()].push(e.hi());
    }
    let mut edges = Vec::with_capacity(tree.len());
    for (i, row) in above.iter_mut().enumerate().skip(1) {
        row.sort_unstable();
        let mut skip = row.iter().peekable();
        for j in i + 1..=n {
            if skip.peek() == Some(&&j) {
                skip.next();
                edges.push(Edge::new(i, j));
            } else if p > 0.0 && rng.random::<f64>() < p {
                edges.push(Edge::new(i, j));
            }
        }
    }
    Ok(Graph::from_sorted_edges(n, edges))
}

fn random_tree(n: usize, rng: &mut ChaCha8Rng) -> Vec<Edge> {
    if n < 2 {
        return Vec::new();
    }
    let code: Vec<usize> = (0..n - 2).map(|_| rng.random_range(1..=n)).collect();
    let mut degree = vec![1usize; n + 1];
    for &x in &code {
        degree[x] += 1;
    }
    let mut leaves: BinaryHeap<Reverse<usize>> = (1..=n).filter(|&x| degree[x] == 1).map(Reverse).collect();
    let mut edges = Vec::with_capacity(n - 1);
    for &x in &code {
        let Reverse(leaf) = leaves.pop().expect("a Prüfer sequence always leaves a leaf");
        edges.push(Edge::new(leaf, x));
        degree[x] -= 1;
        if degree[x] == 1 {
            leaves.push(Reverse(x));
        }
    }
    let Reverse(a) = leaves.pop().expect("two leaves remain");
    let Reverse(b) = leaves.pop().expect("two leaves remain");
    edges.push(Edge::new(a, b));
    edges
}
