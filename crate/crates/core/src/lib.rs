//! Perfect forests: spanning forests in which every vertex has odd degree
//! and every tree is an induced subgraph.
//!
//! A connected graph has one exactly when its order is even, and a graph
//! with several components has one exactly when every component has even
//! order. [`find_perfect_forest`] constructs one by GF(2) elimination over
//! edge vectors; [`verify`] checks the definition directly and [`oracle`]
//! enumerates all perfect forests of small graphs by brute force.
//!
//! ```
//! use perfect_forest::{find_perfect_forest, verify_perfect_forest, Graph};
//!
//! let c4 = Graph::new(4, [(1, 2), (2, 3), (3, 4), (1, 4)]).unwrap();
//! let forest = find_perfect_forest(&c4).unwrap();
//! assert_eq!(forest.trees().len(), 2);
//! assert!(verify_perfect_forest(&c4, forest.edges()).unwrap().is_valid());
//! ```

pub mod cli;
pub mod forest;
pub mod gf2;
pub mod graph;
pub mod io;
pub mod oracle;
pub mod par;
pub mod verify;

pub use forest::{
    all_ones_representation, find_perfect_forest, find_perfect_forest_with, parity_flip_subgraph, refine_once,
    FinderOptions, ForestError, PerfectForest, Refinement, Representation, Strategy,
};
pub use gf2::{edge_vector, xor_sum, BitVector, EdgeBasis, Insertion};
pub use graph::{Edge, Graph, GraphError, SpanningTree};
pub use par::Execution;
pub use verify::{verify_parity_flip, verify_perfect_forest, Verdict, Violation};
