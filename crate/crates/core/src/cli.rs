//! Command-line front end. `main` only forwards to [`run`], which keeps the
//! whole surface testable in-process.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::fs;
use std::io::{Read, Write};
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

use crate::forest::{find_perfect_forest_with, parity_flip_subgraph, FinderOptions, ForestError, Strategy};
use crate::graph::Graph;
use crate::io::{
    generate_random_graph, parse_edge_list, write_edge_list, FlipCertificate, ForestDocument, Format,
};
use crate::oracle::{
    enumerate_perfect_forests, exhaustive_theorem_check, OracleError, DEFAULT_EDGE_CAP, DEFAULT_VERTEX_CAP,
};
use crate::par::Execution;
use crate::verify::{verify_parity_flip, verify_perfect_forest, Verdict};

pub const EXIT_OK: i32 = 0;
/// A verification or exhaustive check failed.
pub const EXIT_INVALID: i32 = 1;
/// Some component has odd order.
pub const EXIT_PARITY: i32 = 2;
pub const EXIT_USAGE: i32 = 64;
/// Unreadable or malformed input.
pub const EXIT_DATA: i32 = 65;

#[derive(Debug, Parser)]
#[command(name = "perfect-forest", version, about = "Find and check perfect forests of graphs")]
struct Cli {
    /// Output rendering.
    #[arg(long, global = true, value_enum, default_value_t = FormatArg::Text)]
    format: FormatArg,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum FormatArg {
    Text,
    Structured,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum StrategyArg {
    UnionFind,
    Algebraic,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Compute a perfect forest of an edge-list graph.
    Find {
        /// Edge-list file; `-` or absent reads stdin.
        graph: Option<PathBuf>,
        /// Answer every span query by GF(2) elimination as well and fail on
        /// disagreement.
        #[arg(long)]
        check_algebra: bool,
        #[arg(long, value_enum, default_value_t = StrategyArg::UnionFind)]
        strategy: StrategyArg,
    },
    /// Check a forest document against a graph.
    Verify { graph: PathBuf, forest: PathBuf },
    /// List every perfect forest by brute force.
    Enumerate {
        graph: Option<PathBuf>,
        /// Largest edge count accepted.
        #[arg(long, default_value_t = DEFAULT_EDGE_CAP)]
        cap: usize,
    },
    /// Emit a seeded random connected graph.
    Gen {
        #[arg(long)]
        n: usize,
        /// Probability of each non-tree pair.
        #[arg(long, default_value_t = 0.1)]
        p: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Run the finder on every connected labeled graph of even order n.
    Check {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = DEFAULT_VERTEX_CAP)]
        vertex_cap: usize,
    },
    /// Remove a perfect forest, flipping every degree parity.
    Flip { graph: Option<PathBuf> },
}

struct Io<'a> {
    stdin: &'a mut dyn Read,
    out: &'a mut dyn Write,
    err: &'a mut dyn Write,
}

impl Io<'_> {
    fn read(&mut self, path: Option<&PathBuf>) -> Result<String, String> {
        match path {
            Some(p) if p.as_os_str() != "-" => {
                fs::read_to_string(p).map_err(|e| format!("{}: {e}", p.display()))
            }
            _ => {
                let mut s = String::new();
                self.stdin
                    .read_to_string(&mut s)
                    .map_err(|e| format!("stdin: {e}"))?;
                Ok(s)
            }
        }
    }

    fn graph(&mut self, path: Option<&PathBuf>) -> Result<Graph, String> {
        let text = self.read(path)?;
        let name = path.map_or("<stdin>".into(), |p| p.display().to_string());
        parse_edge_list(&text).map_err(|e| format!("{name}: {e}"))
    }

    fn fail(&mut self, code: i32, msg: impl AsRef<str>) -> i32 {
        let _ = writeln!(self.err, "error: {}", msg.as_ref());
        code
    }

    fn emit(&mut self, s: &str) -> i32 {
        match self.out.write_all(s.as_bytes()) {
            Ok(()) => EXIT_OK,
            Err(e) => {
                let _ = writeln!(self.err, "error: {e}");
                EXIT_DATA
            }
        }
    }
}

/// Parses `args` (including the program name) and executes the command.
/// Returns the process exit code.
pub fn run<I, T>(args: I, stdin: &mut dyn Read, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let rendered = e.render().to_string();
            if e.use_stderr() {
                let _ = err.write_all(rendered.as_bytes());
            } else {
                let _ = out.write_all(rendered.as_bytes());
            }
            return code;
        }
    };
    let format = match cli.format {
        FormatArg::Text => Format::Text,
        FormatArg::Structured => Format::Structured,
    };
    let mut io = Io { stdin, out, err };
    match cli.command {
        Command::Find {
            graph,
            check_algebra,
            strategy,
        } => find(&mut io, graph.as_ref(), format, check_algebra, strategy),
        Command::Verify { graph, forest } => verify(&mut io, &graph, &forest, format),
        Command::Enumerate { graph, cap } => enumerate(&mut io, graph.as_ref(), cap, format),
        Command::Gen { n, p, seed } => match generate_random_graph(n, p, seed) {
            Ok(g) => io.emit(&write_edge_list(&g)),
            Err(e) => io.fail(EXIT_USAGE, e.to_string()),
        },
        Command::Check { n, vertex_cap } => check(&mut io, n, vertex_cap, format),
        Command::Flip { graph } => flip(&mut io, graph.as_ref(), format),
    }
}

fn forest_error(io: &mut Io<'_>, e: ForestError) -> i32 {
    match e {
        ForestError::OddComponent { .. } => io.fail(EXIT_PARITY, e.to_string()),
        ForestError::AlgebraMismatch { .. } => io.fail(EXIT_INVALID, e.to_string()),
        other => io.fail(EXIT_DATA, other.to_string()),
    }
}

fn find(io: &mut Io<'_>, path: Option<&PathBuf>, format: Format, check_algebra: bool, strategy: StrategyArg) -> i32 {
    let g = match io.graph(path) {
        Ok(g) => g,
        Err(e) => return io.fail(EXIT_DATA, e),
    };
    let opts = FinderOptions {
        strategy: match strategy {
            StrategyArg::UnionFind => Strategy::UnionFind,
            StrategyArg::Algebraic => Strategy::Algebraic,
        },
        check_algebra,
        execution: Execution::default(),
    };
    match find_perfect_forest_with(&g, &opts) {
        Ok(f) => io.emit(&ForestDocument::from(&f).render(format)),
        Err(e) => forest_error(io, e),
    }
}

fn render_verdict(v: &Verdict, format: Format) -> String {
    match format {
        Format::Structured => {
            let doc = serde_json::json!({
                "valid": v.is_valid(),
                "violations": v.violations(),
            });
            let mut s = serde_json::to_string_pretty(&doc).expect("plain data");
            s.push('\n');
            s
        }
        Format::Text => {
            let mut s = String::new();
            match v {
                Verdict::Valid => s.push_str("valid\n"),
                Verdict::Invalid(vs) => {
                    writeln!(s, "invalid: {} violations", vs.len()).unwrap();
                    for x in vs {
                        writeln!(s, "{x}").unwrap();
                    }
                }
            }
            s
        }
    }
}

fn verify(io: &mut Io<'_>, graph: &PathBuf, forest: &PathBuf, format: Format) -> i32 {
    let g = match io.graph(Some(graph)) {
        Ok(g) => g,
        Err(e) => return io.fail(EXIT_DATA, e),
    };
    let doc = match io
        .read(Some(forest))
        .and_then(|t| ForestDocument::parse(&t).map_err(|e| format!("{}: {e}", forest.display())))
    {
        Ok(d) => d,
        Err(e) => return io.fail(EXIT_DATA, e),
    };
    match verify_perfect_forest(&g, &doc.edges()) {
        Ok(v) => {
            let code = io.emit(&render_verdict(&v, format));
            if v.is_valid() {
                code
            } else {
                EXIT_INVALID
            }
        }
        Err(e) => io.fail(EXIT_DATA, e.to_string()),
    }
}

fn enumerate(io: &mut Io<'_>, path: Option<&PathBuf>, cap: usize, format: Format) -> i32 {
    let g = match io.graph(path) {
        Ok(g) => g,
        Err(e) => return io.fail(EXIT_DATA, e),
    };
    let report = match enumerate_perfect_forests(&g, cap, Execution::default()) {
        Ok(r) => r,
        Err(e @ OracleError::TooManyEdges { .. }) => {
            return io.fail(EXIT_USAGE, format!("{e}; raise it with --cap"))
        }
        Err(e) => return io.fail(EXIT_USAGE, e.to_string()),
    };
    let s = match format {
        Format::Structured => {
            let doc = serde_json::json!({
                "subsets_scanned": report.subsets_scanned,
                "forests": report.forests,
            });
            let mut s = serde_json::to_string_pretty(&doc).expect("plain data");
            s.push('\n');
            s
        }
        Format::Text => {
            let mut s = format!(
                "{} perfect forests, {} subsets scanned\n",
                report.forests.len(),
                report.subsets_scanned
            );
            for f in &report.forests {
                let line: Vec<String> = f.iter().map(|e| format!("{}-{}", e.lo(), e.hi())).collect();
                writeln!(s, "{}", line.join(" ")).unwrap();
            }
            s
        }
    };
    io.emit(&s)
}

fn check(io: &mut Io<'_>, n: usize, vertex_cap: usize, format: Format) -> i32 {
    let summary = match exhaustive_theorem_check(n, vertex_cap, Execution::default()) {
        Ok(s) => s,
        Err(e) => return io.fail(EXIT_USAGE, e.to_string()),
    };
    let s = match format {
        Format::Structured => {
            let mut s = serde_json::to_string_pretty(&summary).expect("plain data");
            s.push('\n');
            s
        }
        Format::Text => {
            let mut s = format!(
                "{} graphs, {} failures\n",
                summary.graphs_checked,
                summary.failures.len()
            );
            writeln!(
                s,
                "order {}: {} edge masks, max substitutions per component {}",
                n, summary.masks_scanned, summary.max_substitutions
            )
            .unwrap();
            for f in &summary.failures {
                writeln!(s, "failure at mask {:#x}: {}", f.mask, f.reason).unwrap();
            }
            for c in &summary.converse {
                writeln!(
                    s,
                    "odd order {}: {} connected graphs, {} with a perfect forest",
                    c.order, c.graphs_checked, c.graphs_with_forests
                )
                .unwrap();
            }
            s
        }
    };
    let code = io.emit(&s);
    if summary.passed() {
        code
    } else {
        EXIT_INVALID
    }
}

fn flip(io: &mut Io<'_>, path: Option<&PathBuf>, format: Format) -> i32 {
    let g = match io.graph(path) {
        Ok(g) => g,
        Err(e) => return io.fail(EXIT_DATA, e),
    };
    let h = match parity_flip_subgraph(&g) {
        Ok(h) => h,
        Err(e) => return forest_error(io, e),
    };
    let verdict = verify_parity_flip(&g, &h).expect("H is a spanning subgraph of G");
    let code = io.emit(&FlipCertificate::new(&g, &h).render(format));
    if verdict.is_valid() {
        code
    } else {
        io.fail(EXIT_INVALID, render_verdict(&verdict, Format::Text))
    }
}
