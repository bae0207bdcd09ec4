//! Brute-force ground truth on small graphs.
//!
//! [`enumerate_perfect_forests`] scans every edge subset through the
//! verifier. [`exhaustive_theorem_check`] runs the finder on every labeled
//! connected graph of a given even order, and confirms that no connected
//! graph of small odd order has a perfect forest at all.

use serde::Serialize;
use thiserror::Error;

use crate::forest::{find_perfect_forest_with, FinderOptions};
use crate::graph::{Edge, Graph};
use crate::par::{self, Execution};
use crate::verify::verify_perfect_forest;

pub const DEFAULT_EDGE_CAP: usize = 24;
pub const DEFAULT_VERTEX_CAP: usize = 6;
/// Largest order whose labeled graphs fit in a 64-bit edge mask.
pub const MAX_LABELED_ORDER: usize = 11;
const CHUNK_BITS: u32 = 12;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("graph has {edges} edges, above the enumeration cap {cap}")]
    TooManyEdges { edges: usize, cap: usize },
    #[error("exhaustive check needs an even order between 2 and {cap}, got {n}")]
    InvalidOrder { n: usize, cap: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleReport {
    pub graph: Graph,
    /// Every perfect forest, ascending by bitmask over the sorted edge list.
    pub forests: Vec<Vec<Edge>>,
    pub subsets_scanned: u64,
}

/// Lists every perfect forest of `g` by scanning all `2^|E|` edge subsets.
///
/// Subsets in which some vertex has even degree are discarded before the
/// full verifier runs; the verifier would reject them anyway.
pub fn enumerate_perfect_forests(g: &Graph, cap: usize, exec: Execution) -> Result<OracleReport, OracleError> {
    let m = g.size();
    if m > cap || m >= 63 {
        return Err(OracleError::TooManyEdges { edges: m, cap });
    }
    let total: u64 = 1 << m;
    let chunk: u64 = 1 << CHUNK_BITS.min(m as u32);
    let chunks = (total / chunk) as usize;
    let edges = g.edges();
    let words = g.order().div_ceil(64).max(1);
    let mut full = vec![!0u64; words];
    if !g.order().is_multiple_of(64) {
        full[words - 1] = (1u64 << (g.order() % 64)) - 1;
    }
    if g.order() == 0 {
        full[0] = 0;
    }

    let found = par::map_range(exec, 0, chunks, |c| {
        let start = c as u64 * chunk;
        let mut parity = vec![0u64; words];
        let mut out = Vec::new();
        for mask in start..start + chunk {
            parity.iter_mut().for_each(|w| *w = 0);
            let mut rest = mask;
            while rest != 0 {
                let e = edges[rest.trailing_zeros() as usize];
                rest &= rest - 1;
                for x in [e.lo() - 1, e.hi() - 1] {
                    parity[x / 64] ^= 1 << (x % 64);
                }
            }
            if parity != full {
                continue;
            }
            let subset: Vec<Edge> = (0..m).filter(|k| mask >> k & 1 == 1).map(|k| edges[k]).collect();
            if verify_perfect_forest(g, &subset)
                .expect("subsets of E(G) are valid input")
                .is_valid()
            {
                out.push(subset);
            }
        }
        out
    });
    Ok(OracleReport {
        graph: g.clone(),
        forests: found.into_iter().flatten().collect(),
        subsets_scanned: total,
    })
}

/// All pairs `(i, j)` with `1 <= i < j <= n` in lexicographic order; bit `k`
/// of a labeled-graph mask selects pair `k`.
pub fn vertex_pairs(n: usize) -> Vec<(usize, usize)> {
    (1..=n).flat_map(|i| (i + 1..=n).map(move |j| (i, j))).collect()
}

pub fn graph_from_mask(n: usize, mask: u64) -> Graph {
    let pairs = vertex_pairs(n);
    Graph::new(n, (0..pairs.len()).filter(|k| mask >> k & 1 == 1).map(|k| pairs[k]))
        .expect("distinct in-range pairs")
}

/// Connectivity of the labeled graph `mask` via bitset flooding.
pub fn mask_is_connected(n: usize, mask: u64) -> bool {
    if n <= 1 {
        return true;
    }
    let mut adj = vec![0u64; n];
    for (k, (i, j)) in vertex_pairs(n).into_iter().enumerate() {
        if mask >> k & 1 == 1 {
            adj[i - 1] |= 1 << (j - 1);
            adj[j - 1] |= 1 << (i - 1);
        }
    }
    let mut reached = 1u64;
    let mut frontier = 1u64;
    while frontier != 0 {
        let mut next = 0;
        let mut f = frontier;
        while f != 0 {
            next |= adj[f.trailing_zeros() as usize];
            f &= f - 1;
        }
        frontier = next & !reached;
        reached |= next;
    }
    reached.count_ones() as usize == n
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckFailure {
    pub mask: u64,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConverseSummary {
    pub order: usize,
    pub graphs_checked: usize,
    /// Connected graphs of this odd order that have a perfect forest.
    pub graphs_with_forests: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TheoremSummary {
    pub order: usize,
    pub masks_scanned: u64,
    pub graphs_checked: usize,
    pub failures: Vec<CheckFailure>,
    /// Odd orders below `order` (at most 5) with an empty oracle listing
    /// expected for every connected graph.
    pub converse: Vec<ConverseSummary>,
    /// Largest substitution count seen on a single component.
    pub max_substitutions: usize,
}

impl TheoremSummary {
    pub fn passed(&self) -> bool {
        self.failures.is_empty() && self.converse.iter().all(|c| c.graphs_with_forests == 0)
    }
}

/// Runs finder and verifier on every connected labeled graph of even order
/// `n`.
pub fn exhaustive_theorem_check(n: usize, vertex_cap: usize, exec: Execution) -> Result<TheoremSummary, OracleError> {
    let cap = vertex_cap.min(MAX_LABELED_ORDER);
    if n < 2 || n % 2 == 1 || n > cap {
        return Err(OracleError::InvalidOrder { n, cap });
    }
    let pairs = vertex_pairs(n).len();
    let total = 1u64 << pairs;
    let opts = FinderOptions {
        execution: Execution::Sequential,
        ..FinderOptions::default()
    };
    let chunk = 1u64 << CHUNK_BITS.min(pairs as u32);
    let per_chunk = par::map_range(exec, 0, (total / chunk) as usize, |c| {
        let mut checked = 0usize;
        let mut max_subs = 0usize;
        let mut failures = Vec::new();
        for mask in c as u64 * chunk..(c as u64 + 1) * chunk {
            if !mask_is_connected(n, mask) {
                continue;
            }
            checked += 1;
            let g = graph_from_mask(n, mask);
            let outcome = find_perfect_forest_with(&g, &opts)
                .map_err(|e| e.to_string())
                .and_then(|f| {
                    let verdict = verify_perfect_forest(&g, f.edges()).map_err(|e| e.to_string())?;
                    if let Some(v) = verdict.violations().first() {
                        return Err(v.to_string());
                    }
                    Ok(f.components().iter().map(|r| r.substitutions).max().unwrap_or(0))
                });
            match outcome {
                Ok(s) => max_subs = max_subs.max(s),
                Err(reason) => failures.push(CheckFailure { mask, reason }),
            }
        }
        (checked, max_subs, failures)
    });
    let mut summary = TheoremSummary {
        order: n,
        masks_scanned: total,
        graphs_checked: 0,
        failures: Vec::new(),
        converse: Vec::new(),
        max_substitutions: 0,
    };
    for (checked, subs, failures) in per_chunk {
        summary.graphs_checked += checked;
        summary.max_substitutions = summary.max_substitutions.max(subs);
        summary.failures.extend(failures);
    }
    summary.converse = (1..n.min(6))
        .step_by(2)
        .map(|m| converse_check(m, exec))
        .collect();
    Ok(summary)
}

/// Counts connected labeled graphs of order `m` that have a perfect forest.
pub fn converse_check(m: usize, exec: Execution) -> ConverseSummary {
    let total = 1u64 << vertex_pairs(m).len();
    let masks: Vec<u64> = (0..total).filter(|&mask| mask_is_connected(m, mask)).collect();
    let nonempty = par::map_slice(exec, &masks, |&mask| {
        let g = graph_from_mask(m, mask);
        let report = enumerate_perfect_forests(&g, DEFAULT_EDGE_CAP, Execution::Sequential)
            .expect("at most 10 edges");
        !report.forests.is_empty()
    });
    ConverseSummary {
        order: m,
        graphs_checked: masks.len(),
        graphs_with_forests: nonempty.into_iter().filter(|&b| b).count(),
    }
}
