//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails.

use std::io::Cursor;
use std::time::{Duration, Instant};

use perfect_forest::cli;
use perfect_forest::forest::{find_perfect_forest_with, parity_flip_subgraph, FinderOptions};
use perfect_forest::io::{generate_random_graph, write_edge_list};
use perfect_forest::oracle::{
    converse_check, enumerate_perfect_forests, exhaustive_theorem_check, graph_from_mask, mask_is_connected,
    vertex_pairs, DEFAULT_EDGE_CAP, DEFAULT_VERTEX_CAP,
};
use perfect_forest::{verify_parity_flip, verify_perfect_forest, Execution, Graph, PerfectForest};

const THEOREM_TIME_LIMIT: Duration = Duration::from_secs(60);
const SCALE_TIME_LIMIT: Duration = Duration::from_secs(5);
const SCALE_ORDER: usize = 10_000;
/// Expected extra edges: p * (C(n,2) - (n-1)) ~ 20,000 on top of the tree.
const SCALE_P: f64 = 20_000.0 / 49_985_001.0;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

/// Small random corpus: connected even-order graphs with at most 16 edges.
fn small_corpus(count: usize) -> Vec<Graph> {
    let mut out = Vec::with_capacity(count);
    let mut seed = 0u64;
    while out.len() < count {
        let n = 2 + 2 * (seed % 5) as usize;
        let p = [0.0, 0.1, 0.2, 0.35, 0.5][(seed / 5 % 5) as usize];
        let g = generate_random_graph(n, p, seed).unwrap();
        seed += 1;
        if g.size() <= 16 {
            out.push(g);
        }
    }
    out
}

fn even_corpus(count: usize, max_n: usize) -> Vec<Graph> {
    (0..count as u64)
        .map(|seed| {
            let n = 2 + 2 * (seed as usize % (max_n / 2));
            let p = (seed % 13) as f64 / 20.0;
            generate_random_graph(n, p, 1_000_000 + seed).unwrap()
        })
        .collect()
}

fn checked() -> FinderOptions {
    FinderOptions {
        check_algebra: true,
        execution: Execution::Sequential,
        ..FinderOptions::default()
    }
}

fn ac1_theorem() -> Outcome {
    let start = Instant::now();
    let mut counts = Vec::new();
    let mut failures = 0;
    for n in [2, 4, 6] {
        let s = exhaustive_theorem_check(n, DEFAULT_VERTEX_CAP, Execution::Parallel).unwrap();
        failures += s.failures.len();
        counts.push(s.graphs_checked);
    }
    let elapsed = start.elapsed();
    outcome(
        failures == 0 && counts[0] == 1 && counts[1] == 38 && elapsed < THEOREM_TIME_LIMIT,
        format!(
            "connected graphs n=2,4,6: {counts:?}, {failures} failures, {:.2}s (limit {}s)",
            elapsed.as_secs_f64(),
            THEOREM_TIME_LIMIT.as_secs()
        ),
    )
}

fn ac2_converse() -> Outcome {
    let mut parts = Vec::new();
    let mut bad = 0;
    for m in [3, 5] {
        let c = converse_check(m, Execution::Parallel);
        bad += c.graphs_with_forests;
        parts.push(format!("n={}: {} graphs", m, c.graphs_checked));
    }
    outcome(bad == 0, format!("{}, {bad} with a perfect forest", parts.join(", ")))
}

fn ac3_membership() -> Outcome {
    let corpus = small_corpus(500);
    let mut members = 0;
    for g in &corpus {
        let f = find_perfect_forest_with(g, &FinderOptions::default()).unwrap();
        let report = enumerate_perfect_forests(g, DEFAULT_EDGE_CAP, Execution::Parallel).unwrap();
        if report.forests.iter().any(|s| s.as_slice() == f.edges()) {
            members += 1;
        }
    }
    outcome(
        members == corpus.len(),
        format!("{members}/{} finder outputs found in the oracle listing", corpus.len()),
    )
}

fn all_connected(n: usize) -> impl Iterator<Item = Graph> {
    (0..1u64 << vertex_pairs(n).len())
        .filter(move |&m| mask_is_connected(n, m))
        .map(move |m| graph_from_mask(n, m))
}

fn ac4_algebra() -> Outcome {
    let mut graphs = 0;
    let mut queries = 0;
    let mut disagreements = Vec::new();
    for n in [2, 4, 6] {
        for g in all_connected(n) {
            graphs += 1;
            match find_perfect_forest_with(&g, &checked()) {
                Ok(f) => queries += f.algebra_checks(),
                Err(e) => disagreements.push(e.to_string()),
            }
        }
    }
    outcome(
        disagreements.is_empty() && queries > 0,
        format!(
            "{graphs} graphs, {queries} span queries cross-checked, {} disagreements{}",
            disagreements.len(),
            disagreements.first().map(|d| format!(" (first: {d})")).unwrap_or_default()
        ),
    )
}

fn bound_violations(f: &PerfectForest) -> usize {
    f.components()
        .iter()
        .filter(|c| c.substitutions > c.order || c.substitutions + 1 > c.initial_size.max(1))
        .count()
}

fn ac5_iterations() -> Outcome {
    let mut components = 0;
    let mut violations = 0;
    let mut worst = 0;
    let corpus = all_connected(2)
        .chain(all_connected(4))
        .chain(all_connected(6))
        .chain(small_corpus(500))
        .chain(even_corpus(1000, 40));
    for g in corpus {
        let f = find_perfect_forest_with(&g, &FinderOptions::default()).unwrap();
        components += f.components().len();
        violations += bound_violations(&f);
        worst = worst.max(f.components().iter().map(|c| c.substitutions).max().unwrap_or(0));
    }
    outcome(
        violations == 0,
        format!("{components} components, max substitutions {worst}, {violations} bound violations"),
    )
}

fn ac6_parity_flip() -> Outcome {
    let corpus = even_corpus(1000, 40);
    let mut bad = 0;
    for g in &corpus {
        let h = parity_flip_subgraph(g).unwrap();
        if !verify_parity_flip(g, &h).unwrap().is_valid() {
            bad += 1;
        }
    }
    outcome(bad == 0, format!("{} graphs, {bad} violations", corpus.len()))
}

fn ac7_scale() -> Outcome {
    let g = generate_random_graph(SCALE_ORDER, SCALE_P, 2024).unwrap();
    let start = Instant::now();
    let f = find_perfect_forest_with(&g, &FinderOptions::default()).unwrap();
    let valid = verify_perfect_forest(&g, f.edges()).unwrap().is_valid();
    let elapsed = start.elapsed();
    outcome(
        valid && elapsed < SCALE_TIME_LIMIT,
        format!(
            "n={}, m={}, {} trees, {} substitutions, valid={valid}, {:.3}s (limit {}s)",
            g.order(),
            g.size(),
            f.trees().len(),
            f.iterations(),
            elapsed.as_secs_f64(),
            SCALE_TIME_LIMIT.as_secs()
        ),
    )
}

fn run_cli(args: &[&str], stdin: &str) -> (i32, Vec<u8>, Vec<u8>) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = cli::run(
        std::iter::once("perfect-forest").chain(args.iter().copied()),
        &mut Cursor::new(stdin.as_bytes().to_vec()),
        &mut out,
        &mut err,
    );
    (code, out, err)
}

fn ac8_determinism() -> Outcome {
    let dir = std::env::temp_dir().join(format!("perfect-forest-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let graph = dir.join("g.txt");
    let forest = dir.join("f.txt");
    let g = generate_random_graph(24, 0.2, 99).unwrap();
    std::fs::write(&graph, write_edge_list(&g)).unwrap();
    let (_, doc, _) = run_cli(&["find", graph.to_str().unwrap()], "");
    std::fs::write(&forest, &doc).unwrap();
    let small = "6 7\n1 2\n1 3\n2 3\n3 4\n4 5\n4 6\n5 6\n";
    let gp = graph.to_str().unwrap();
    let fp = forest.to_str().unwrap();
    let cases: Vec<(Vec<&str>, &str)> = vec![
        (vec!["find", gp], ""),
        (vec!["find", gp, "--format", "structured", "--check-algebra"], ""),
        (vec!["find", "--strategy", "algebraic"], small),
        (vec!["verify", gp, fp], ""),
        (vec!["verify", gp, fp, "--format", "structured"], ""),
        (vec!["enumerate"], small),
        (vec!["enumerate", "--format", "structured"], small),
        (vec!["gen", "--n", "50", "--p", "0.1", "--seed", "7"], ""),
        (vec!["check", "--n", "4"], ""),
        (vec!["check", "--n", "4", "--format", "structured"], ""),
        (vec!["flip", gp], ""),
        (vec!["flip", "--format", "structured"], small),
    ];
    let mut unstable = Vec::new();
    let mut nonzero = Vec::new();
    for (args, stdin) in &cases {
        let a = run_cli(args, stdin);
        let b = run_cli(args, stdin);
        if a != b {
            unstable.push(args.join(" "));
        }
        if a.0 != 0 {
            nonzero.push(args.join(" "));
        }
    }
    let _ = std::fs::remove_dir_all(&dir);
    outcome(
        unstable.is_empty() && nonzero.is_empty(),
        format!(
            "{} invocations run twice, {} differ {:?}, {} nonzero exits {:?}",
            cases.len(),
            unstable.len(),
            unstable,
            nonzero.len(),
            nonzero
        ),
    )
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 8] = [
        ("AC1 exhaustive theorem reproduction", ac1_theorem),
        ("AC2 odd-order converse", ac2_converse),
        ("AC3 oracle membership", ac3_membership),
        ("AC4 algebra/graph equivalence", ac4_algebra),
        ("AC5 iteration bound", ac5_iterations),
        ("AC6 parity-flip application", ac6_parity_flip),
        ("AC7 scale target", ac7_scale),
        ("AC8 CLI determinism", ac8_determinism),
    ];
    let mut failed = 0;
    for (name, check) in criteria {
        let o = check();
        println!("[{}] {name}: {}", if o.pass { "PASS" } else { "FAIL" }, o.detail);
        if !o.pass {
            failed += 1;
        }
    }
    println!("acceptance: {}/{} criteria passed", 8 - failed, 8);
    if failed > 0 {
        std::process::exit(1);
    }
}
