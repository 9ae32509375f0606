//! Command-line front end. `cli_main` parses arguments, runs one command and
//! returns the process exit code.

use std::ffi::OsString;
use std::fmt;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use binedge::constructors::{
    block_bar, corpus_graph, star_product, whiskered_star_product, CORPUS_NAMES,
};
use binedge::cutsets::{decompose, enumerate_cutsets_with};
use binedge::harness::{
    search_conjecture, verify_block_theorem, verify_gluing_theorem, verify_regular_classification,
    verify_star_theorem, FamilySource, FamilySpec, GluingPair, SuiteOptions, SuiteReport,
    DEFAULT_STAR_TRIPLES, MAX_GENERATED_N,
};
use binedge::io::{
    analyze, encode_graph6, parse_edge_list, parse_graph6, parse_props, render_decomposition,
    render_report, write_edge_list, AnalyzeOptions,
};
use binedge::properties::Checker;
use binedge::{Budget, Error, Graph};
use clap::{Args, Parser, Subcommand, ValueEnum};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FOUND: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;

#[derive(Parser, Debug)]
#[command(
    name = "binedge",
    version,
    about = "Combinatorial checks for binomial edge ideals"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Cutsets and property verdicts for a graph file.
    Analyze {
        file: PathBuf,
        #[command(flatten)]
        input: InputArgs,
        /// Comma-separated: unmixed, accessible, su, rcut=R, cm.
        #[arg(long)]
        props: Option<String>,
        /// List every cutset even above the summary threshold.
        #[arg(long)]
        cutsets: bool,
        #[arg(long)]
        json: bool,
        #[arg(long)]
        timing: bool,
        /// Per-graph time budget in seconds.
        #[arg(long)]
        budget: Option<f64>,
    },
    /// Primary decomposition table: T, c(T), height.
    Decompose {
        file: PathBuf,
        #[command(flatten)]
        input: InputArgs,
        #[arg(long)]
        json: bool,
    },
    /// Print each block, or each block with whiskers at its cut vertices.
    Blocks {
        file: PathBuf,
        #[command(flatten)]
        input: InputArgs,
        #[arg(long)]
        whiskered: bool,
    },
    /// Build a graph and print it.
    Construct {
        #[command(subcommand)]
        what: Construct,
        /// Print graph6 instead of an edge list.
        #[arg(long, global = true)]
        graph6: bool,
    },
    /// Run a theorem-verification suite and print its report as JSON.
    Verify {
        suite: Suite,
        /// corpus, exhaustive:N, random:COUNT:MAXN, graph6:PATH, stars:R,
        /// or a path to a JSON family description.
        #[arg(long)]
        family: Option<String>,
        /// Seed for random families.
        #[arg(long)]
        seed: Option<u64>,
        /// Per-graph time budget in seconds.
        #[arg(long)]
        budget: Option<f64>,
        /// Matching size for the regular classification suite.
        #[arg(long, default_value_t = 2)]
        r: usize,
        /// Largest r for the star suite.
        #[arg(long, default_value_t = 5)]
        r_max: u32,
    },
    /// Search for counterexamples.
    Search {
        #[command(subcommand)]
        what: Search,
    },
}

#[derive(Args, Debug)]
struct InputArgs {
    #[arg(long, value_enum, default_value_t = Format::Edgelist)]
    format: Format,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Format {
    Edgelist,
    Graph6,
}

#[derive(Subcommand, Debug)]
enum Construct {
    /// K_M and K_N joined by R matching edges.
    Star {
        m: u32,
        n: u32,
        r: u32,
        #[arg(long)]
        whiskered: bool,
    },
    /// A named corpus graph.
    Corpus { name: String },
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum Suite {
    Block,
    Star,
    Regular,
    Gluing,
}

#[derive(Subcommand, Debug)]
enum Search {
    /// Accessible graphs that are not strongly unmixed.
    Conjecture {
        #[arg(long, conflicts_with = "graph6")]
        max_n: Option<usize>,
        #[arg(long)]
        graph6: Option<PathBuf>,
        #[arg(long)]
        budget: Option<f64>,
    },
}

/// Failure carrying its exit code.
#[derive(Debug)]
struct Fail {
    code: i32,
    message: String,
}

impl fmt::Display for Fail {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        let code = if e.is_budget() {
            EXIT_BUDGET
        } else {
            EXIT_USAGE
        };
        Fail {
            code,
            message: e.to_string(),
        }
    }
}

fn usage(message: impl Into<String>) -> Fail {
    Fail {
        code: EXIT_USAGE,
        message: message.into(),
    }
}

type Out<'a> = &'a mut dyn Write;

/// Runs the command line `argv` (including the program name) and returns the
/// exit code. Reports go to `out`, diagnostics to `err`.
pub fn run<I, T>(argv: I, out: Out, err: Out) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                err.write_all(text.as_bytes())
            } else {
                out.write_all(text.as_bytes())
            };
            return code;
        }
    };
    match dispatch(cli.command, out, err) {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {f}");
            f.code
        }
    }
}

/// Entry point used by the binary.
pub fn cli_main<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run(argv, &mut stdout.lock(), &mut stderr.lock())
}

fn write(out: Out, text: &str) -> Result<(), Fail> {
    out.write_all(text.as_bytes())
        .map_err(|e| Fail::from(Error::from(e)))
}

/// Pretty JSON with object keys sorted.
fn to_json<T: serde::Serialize>(v: &T) -> String {
    let value = serde_json::to_value(v).expect("report serializes");
    let mut s = serde_json::to_string_pretty(&value).expect("value serializes");
    s.push('\n');
    s
}

fn read_graphs(path: &Path, format: Format, err: Out) -> Result<Vec<Graph>, Fail> {
    let text =
        std::fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))?;
    match format {
        Format::Edgelist => {
            let doc = parse_edge_list(&text)?;
            for w in &doc.warnings {
                let _ = writeln!(err, "warning: {}: {w}", path.display());
            }
            Ok(vec![doc.graph])
        }
        Format::Graph6 => {
            let gs = parse_graph6(&text)?;
            if gs.is_empty() {
                return Err(usage(format!("{}: no graphs", path.display())));
            }
            Ok(gs)
        }
    }
}

fn budget_secs(flag: Option<f64>) -> Result<SuiteOptions, Fail> {
    match flag {
        Some(s) if s > 0.0 && s.is_finite() => Ok(SuiteOptions::from_env().with_secs(s)),
        Some(s) => Err(usage(format!("budget must be positive, got {s}"))),
        None => Ok(SuiteOptions::from_env()),
    }
}

fn dispatch(cmd: Command, out: Out, err: Out) -> Result<i32, Fail> {
    match cmd {
        Command::Analyze {
            file,
            input,
            props,
            cutsets,
            json,
            timing,
            budget,
        } => {
            let mut opts = AnalyzeOptions {
                force_cutsets: cutsets,
                timing,
                ..Default::default()
            };
            if let Some(p) = props {
                opts.props = parse_props(&p)?;
            }
            let per_graph = budget_secs(budget)?.per_graph;
            let graphs = read_graphs(&file, input.format, err)?;
            let mut reports = Vec::new();
            for g in &graphs {
                let mut c = Checker::new(Budget::default());
                c.set_deadline(Some(Instant::now() + per_graph));
                reports.push(analyze(g, &opts, &mut c)?);
            }
            if json {
                if reports.len() == 1 {
                    write(out, &to_json(&reports[0]))?;
                } else {
                    write(out, &to_json(&reports))?;
                }
            } else {
                for (i, r) in reports.iter().enumerate() {
                    if reports.len() > 1 {
                        write(out, &format!("# graph {}\n", i + 1))?;
                    }
                    write(out, &render_report(r))?;
                }
            }
            Ok(EXIT_OK)
        }
        Command::Decompose { file, input, json } => {
            for g in read_graphs(&file, input.format, err)? {
                let fam = enumerate_cutsets_with(&g, &Budget::default())?;
                let d = decompose(&fam)?;
                write(
                    out,
                    &if json {
                        to_json(&d)
                    } else {
                        render_decomposition(&d)
                    },
                )?;
            }
            Ok(EXIT_OK)
        }
        Command::Blocks {
            file,
            input,
            whiskered,
        } => {
            for g in read_graphs(&file, input.format, err)? {
                for b in g.blocks().blocks {
                    let h = if whiskered {
                        block_bar(&g, &b)?
                    } else {
                        g.induced(&b)?
                    };
                    let labels: Vec<String> = b.iter().map(|v| v.to_string()).collect();
                    write(out, &format!("# block {}\n", labels.join(" ")))?;
                    write(out, &write_edge_list(&h))?;
                }
            }
            Ok(EXIT_OK)
        }
        Command::Construct { what, graph6 } => {
            let g = match what {
                Construct::Star {
                    m,
                    n,
                    r,
                    whiskered: true,
                } => whiskered_star_product(m, n, r)?,
                Construct::Star {
                    m,
                    n,
                    r,
                    whiskered: false,
                } => star_product(m, n, r)?,
                Construct::Corpus { name } => corpus_graph(&name).ok_or_else(|| {
                    usage(format!(
                        "unknown corpus graph {name:?}; known: {}",
                        CORPUS_NAMES.join(", ")
                    ))
                })?,
            };
            if graph6 {
                write(out, &format!("{}\n", encode_graph6(&g.compact())))?;
            } else {
                write(out, &write_edge_list(&g))?;
            }
            Ok(EXIT_OK)
        }
        Command::Verify {
            suite,
            family,
            seed,
            budget,
            r,
            r_max,
        } => {
            let opts = budget_secs(budget)?;
            let report = match suite {
                Suite::Block => {
                    let fam = parse_family(family.as_deref().unwrap_or("corpus"), seed)?;
                    verify_block_theorem(&fam, &opts)?
                }
                Suite::Star => {
                    if family.is_some() {
                        return Err(usage("the star suite builds its own family; drop --family"));
                    }
                    verify_star_theorem(r_max, DEFAULT_STAR_TRIPLES, &opts)?
                }
                Suite::Regular => {
                    let default = format!("exhaustive:{MAX_GENERATED_N}");
                    let fam = parse_family(family.as_deref().unwrap_or(&default), seed)?;
                    verify_regular_classification(&fam, r, &opts)?
                }
                Suite::Gluing => {
                    if family.is_some() {
                        return Err(usage(
                            "the gluing suite uses the corpus pairs; drop --family",
                        ));
                    }
                    verify_gluing_theorem(&corpus_gluing_pairs()?, &opts)?
                }
            };
            finish(report, out, err)
        }
        Command::Search {
            what:
                Search::Conjecture {
                    max_n,
                    graph6,
                    budget,
                },
        } => {
            let opts = budget_secs(budget)?;
            let fam = match (max_n, graph6) {
                (_, Some(p)) => FamilySpec::graph6_file(p),
                (Some(n), None) if n == 0 || n > MAX_GENERATED_N => {
                    return Err(usage(format!("--max-n must be in 1..={MAX_GENERATED_N}")))
                }
                (n, None) => FamilySpec::exhaustive_connected(n.unwrap_or(6)),
            };
            finish(search_conjecture(&fam, &opts)?, out, err)
        }
    }
}

/// Every pairing of a leaf of the first corpus graph with a leaf of the
/// second.
fn corpus_gluing_pairs() -> Result<Vec<GluingPair>, Fail> {
    let g = corpus_graph("fig1a_G").expect("corpus graph");
    let h = corpus_graph("fig1b_H").expect("corpus graph");
    let leaves = |x: &Graph| -> Vec<u32> {
        x.vertices()
            .iter()
            .copied()
            .filter(|&v| x.degree(v) == Ok(1))
            .collect()
    };
    let mut pairs = Vec::new();
    for a in leaves(&g) {
        for b in leaves(&h) {
            pairs.push(GluingPair::at_leaves(g.clone(), a, h.clone(), b)?);
        }
    }
    Ok(pairs)
}

fn finish(report: SuiteReport, out: Out, err: Out) -> Result<i32, Fail> {
    write(out, &to_json(&report))?;
    let _ = writeln!(
        err,
        "{}: {} examined, {} skipped, {} violations, {} candidates, {} ms",
        report.suite,
        report.examined,
        report.skipped.len(),
        report.violations.len(),
        report.candidates.len(),
        report.elapsed_ms
    );
    if !report.candidates.is_empty() {
        let _ = writeln!(
            err,
            "accessible graphs that are not strongly unmixed were found; \
             these are counterexample candidates for the open conjecture, not defects"
        );
    }
    Ok(if !report.passed() || !report.candidates.is_empty() {
        EXIT_FOUND
    } else if report.budget_skips() > 0 {
        EXIT_BUDGET
    } else {
        EXIT_OK
    })
}

fn parse_family(s: &str, seed: Option<u64>) -> Result<FamilySpec, Fail> {
    let bad = || usage(format!("bad family {s:?}"));
    let num = |t: &str| t.parse::<usize>().map_err(|_| bad());
    let parts: Vec<&str> = s.splitn(2, ':').collect();
    let source = match parts.as_slice() {
        ["corpus"] => FamilySource::Corpus,
        ["exhaustive", n] => {
            let max_n = num(n)?;
            if max_n == 0 || max_n > MAX_GENERATED_N {
                return Err(usage(format!(
                    "exhaustive families stop at {MAX_GENERATED_N} vertices"
                )));
            }
            FamilySource::ExhaustiveConnected { max_n }
        }
        ["random", rest] => {
            let (count, max_n) = rest.split_once(':').ok_or_else(bad)?;
            FamilySource::RandomBlockTrees {
                count: num(count)?,
                max_n: num(max_n)?,
                seed: seed.unwrap_or(2024),
            }
        }
        ["graph6", path] => FamilySource::Graph6File {
            path: PathBuf::from(path),
        },
        ["stars", r] => FamilySource::StarFamily {
            r_max: num(r)? as u32,
        },
        [path] if path.ends_with(".json") => {
            let text = std::fs::read_to_string(path).map_err(|e| usage(format!("{path}: {e}")))?;
            let mut spec: FamilySpec =
                serde_json::from_str(&text).map_err(|e| usage(format!("{path}: {e}")))?;
            if let (Some(sd), FamilySource::RandomBlockTrees { seed, .. }) =
                (seed, &mut spec.source)
            {
                *seed = sd;
            }
            return Ok(spec);
        }
        _ => return Err(bad()),
    };
    Ok(FamilySpec::new(source))
}
