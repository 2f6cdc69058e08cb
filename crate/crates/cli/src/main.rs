use std::fs;
use std::io::{self, Read};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use glk::chord::{self, ChordDiagram};
use glk::invariants::{self, DEFAULT_STATE_LIMIT};
use glk::moves::{self, MoveKind};
use glk::orbit::{self, Equivalence, OrbitBounds};
use glk::{Error, ErrorClass, LabeledGraph, LaurentPoly};
use serde::Serialize;

const DEFAULT_SEED: u64 = 20_130_501;
const DEFAULT_TRIALS: usize = 50;

#[derive(Parser)]
#[command(
    name = "glk",
    version,
    about = "Invariants and moves for labeled graphs as knot diagrams"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Input {
    /// Input file (graph `.glg` or chord diagram `.cd`); stdin when omitted
    file: Option<PathBuf>,
    /// Inline input instead of a file
    #[arg(
        short = 'i',
        long = "inline",
        value_name = "INLINE",
        conflicts_with = "file"
    )]
    inline: Option<String>,
    /// Print JSON instead of text
    #[arg(long)]
    json: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Kauffman bracket
    Bracket {
        #[command(flatten)]
        input: Input,
        /// Largest graph for the exhaustive state sum
        #[arg(long, default_value_t = DEFAULT_STATE_LIMIT)]
        max_n: usize,
    },
    /// Jones polynomial (graph-knots only)
    Jones {
        #[command(flatten)]
        input: Input,
        #[arg(long, default_value_t = DEFAULT_STATE_LIMIT)]
        max_n: usize,
    },
    /// Writhe (graph-knots only)
    Writhe {
        #[command(flatten)]
        input: Input,
    },
    /// Circle counts, genus, adequacy, span and the vertex lower bound
    Props {
        #[command(flatten)]
        input: Input,
        #[arg(long, default_value_t = DEFAULT_STATE_LIMIT)]
        max_n: usize,
    },
    /// Apply a move script, or list applicable sites when no script is given
    Moves {
        #[command(flatten)]
        input: Input,
        /// Script file or inline script, e.g. "R1_add +; R4 1 2"
        #[arg(long, value_name = "SCRIPT")]
        moves: Option<String>,
        /// Restrict listed sites to these kinds (comma separated)
        #[arg(long, value_delimiter = ',')]
        kinds: Vec<MoveKind>,
    },
    /// Bounded breadth-first search of the move graph
    Orbit {
        #[command(flatten)]
        input: Input,
        /// Also decide bounded equivalence with this graph (file or inline)
        #[arg(long, value_name = "GRAPH")]
        compare: Option<String>,
        /// Default: n + 2
        #[arg(long)]
        max_vertices: Option<usize>,
        #[arg(long, default_value_t = OrbitBounds::DEFAULT_DEPTH)]
        max_depth: usize,
        #[arg(long, default_value_t = OrbitBounds::DEFAULT_STATES)]
        max_states: usize,
    },
    /// Intersection graph and surgery bracket of a chord diagram
    Chord {
        #[command(flatten)]
        input: Input,
        #[arg(long, default_value_t = chord::DEFAULT_SURGERY_LIMIT)]
        max_n: usize,
    },
    /// Search for a chord diagram whose intersection graph is the input
    Realize {
        #[command(flatten)]
        input: Input,
        /// Stop after this many matchings
        #[arg(long)]
        budget: Option<u64>,
        #[arg(long, default_value_t = chord::DEFAULT_REALIZE_LIMIT)]
        max_n: usize,
    },
    /// Randomized property checks
    Selftest {
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_TRIALS)]
        trials: usize,
        #[arg(long, default_value_t = 8)]
        max_n: usize,
        #[arg(long)]
        json: bool,
    },
}

/// Failure carrying its exit code.
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e.class() {
            ErrorClass::Domain => 1,
            ErrorClass::Parse => 2,
            ErrorClass::Resource => 3,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn input_failure(message: String) -> Failure {
    Failure { code: 2, message }
}

impl Input {
    fn read(&self) -> Result<String, Failure> {
        match (&self.inline, &self.file) {
            (Some(text), _) => Ok(text.clone()),
            (None, Some(path)) => fs::read_to_string(path)
                .map_err(|e| input_failure(format!("{}: {e}", path.display()))),
            (None, None) => {
                let mut buf = String::new();
                io::stdin()
                    .read_to_string(&mut buf)
                    .map_err(|e| input_failure(format!("stdin: {e}")))?;
                Ok(buf)
            }
        }
    }

    fn graph(&self) -> Result<LabeledGraph, Failure> {
        Ok(LabeledGraph::parse(&self.read()?)?)
    }
}

/// A flag value naming a file if one exists, else taken literally.
fn file_or_inline(value: &str) -> Result<String, Failure> {
    let path = std::path::Path::new(value);
    if path.is_file() {
        fs::read_to_string(path).map_err(|e| input_failure(format!("{value}: {e}")))
    } else {
        Ok(value.to_string())
    }
}

fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string(value).expect("output is serializable")
}

#[derive(Serialize)]
struct BracketOut<'a> {
    bracket: &'a LaurentPoly,
}

#[derive(Serialize)]
struct JonesOut<'a> {
    writhe: i32,
    jones: &'a LaurentPoly,
}

#[derive(Serialize)]
struct WritheOut {
    writhe: i32,
}

#[derive(Serialize)]
struct SitesOut {
    sites: Vec<String>,
}

#[derive(Serialize)]
struct CompareOut {
    result: Equivalence,
}

#[derive(Serialize)]
struct ChordOut<'a> {
    graph: &'a LabeledGraph,
    bracket: &'a LaurentPoly,
}

#[derive(Serialize)]
struct RealizeOut {
    witness: Option<String>,
    exhausted: bool,
    examined: u64,
}

fn run(cli: Cli) -> Result<String, Failure> {
    Ok(match cli.command {
        Command::Bracket { input, max_n } => {
            let p = invariants::kauffman_bracket_with_limit(&input.graph()?, max_n)?;
            if input.json {
                to_json(&BracketOut { bracket: &p })
            } else {
                p.to_string()
            }
        }
        Command::Jones { input, max_n } => {
            let g = input.graph()?;
            let w = invariants::writhe(&g)?;
            let p = invariants::jones_with_limit(&g, max_n)?;
            if input.json {
                to_json(&JonesOut {
                    writhe: w,
                    jones: &p,
                })
            } else {
                p.to_string()
            }
        }
        Command::Writhe { input } => {
            let w = invariants::writhe(&input.graph()?)?;
            if input.json {
                to_json(&WritheOut { writhe: w })
            } else {
                w.to_string()
            }
        }
        Command::Props { input, max_n } => {
            let r = invariants::analyze_with_limit(&input.graph()?, max_n);
            if input.json {
                to_json(&r)
            } else {
                let opt = |v: Option<u32>| v.map_or("unavailable".to_string(), |v| v.to_string());
                [
                    format!("n: {}", r.n),
                    format!("k: {}", r.k),
                    format!("l: {}", r.l),
                    format!("genus: {}", r.genus),
                    format!("alternating: {}", r.alternating),
                    format!("adequate: {}", r.adequate),
                    format!("non_split: {}", r.non_split),
                    format!("graph_knot: {}", r.graph_knot),
                    format!("span: {}", opt(r.span)),
                    format!("vertex_lower_bound: {}", opt(r.vertex_lower_bound)),
                    format!("minimal_certified: {}", r.minimal_certified),
                ]
                .join("\n")
            }
        }
        Command::Moves {
            input,
            moves: script,
            kinds,
        } => {
            let g = input.graph()?;
            match script {
                Some(script) => {
                    let sites = moves::parse_script(&file_or_inline(&script)?)?;
                    let h = moves::apply_script(&g, &sites)?;
                    if input.json {
                        h.to_json()
                    } else {
                        h.to_compact()
                    }
                }
                None => {
                    let kinds = if kinds.is_empty() {
                        MoveKind::ALL.to_vec()
                    } else {
                        kinds
                    };
                    let sites = moves::enumerate_sites(&g, &kinds);
                    if input.json {
                        let names: Vec<String> = sites.iter().map(|s| s.to_string()).collect();
                        to_json(&SitesOut { sites: names })
                    } else {
                        moves::format_script(&sites).trim_end().to_string()
                    }
                }
            }
        }
        Command::Orbit {
            input,
            compare,
            max_vertices,
            max_depth,
            max_states,
        } => {
            let g = input.graph()?;
            let defaults = OrbitBounds::for_graph(&g);
            let bounds = OrbitBounds {
                max_vertices: max_vertices.unwrap_or(defaults.max_vertices),
                max_depth,
                max_states,
            };
            if max_states == 0 {
                return Err(Failure {
                    code: 1,
                    message: "--max-states must be positive".into(),
                });
            }
            match compare {
                Some(other) => {
                    let h = LabeledGraph::parse(&file_or_inline(&other)?)?;
                    let verdict = orbit::are_equivalent_bounded(&g, &h, bounds);
                    if input.json {
                        to_json(&CompareOut { result: verdict })
                    } else {
                        verdict.to_string()
                    }
                }
                None => {
                    let r = orbit::bfs_orbit(&g, bounds);
                    if input.json {
                        to_json(&r)
                    } else {
                        let mut out = format!(
                            "visited: {}\nmin_vertices: {}\ntruncated: {}\nwitness:",
                            r.visited, r.min_vertices, r.truncated
                        );
                        for line in r.witness.lines() {
                            out.push_str("\n  ");
                            out.push_str(line);
                        }
                        out
                    }
                }
            }
        }
        Command::Chord { input, max_n } => {
            let d = ChordDiagram::parse(&input.read()?)?;
            let g = d.intersection_graph();
            let p = d.bracket_via_surgery(max_n)?;
            if input.json {
                to_json(&ChordOut {
                    graph: &g,
                    bracket: &p,
                })
            } else {
                format!("graph: {}\nbracket: {p}", g.to_compact())
            }
        }
        Command::Realize {
            input,
            budget,
            max_n,
        } => {
            let r = chord::realizability_search(&input.graph()?, budget, max_n)?;
            if input.json {
                to_json(&RealizeOut {
                    witness: r.witness.as_ref().map(|d| d.to_text()),
                    exhausted: r.exhausted,
                    examined: r.examined,
                })
            } else {
                match &r.witness {
                    Some(d) => d.to_text(),
                    None if r.exhausted => {
                        format!("none (exhausted after {} matchings)", r.examined)
                    }
                    None => format!("none within budget ({} matchings examined)", r.examined),
                }
            }
        }
        Command::Selftest {
            seed,
            trials,
            max_n,
            json,
        } => {
            if trials == 0 {
                eprintln!("glk: warning: --trials 0 runs no checks");
            }
            let outcomes = glk::checks::selftest(seed, trials, max_n);
            let out = if json {
                to_json(&outcomes)
            } else {
                outcomes
                    .iter()
                    .map(|o| {
                        let verdict = if o.passed { "PASS" } else { "FAIL" };
                        let detail = if o.detail.is_empty() {
                            String::new()
                        } else {
                            format!(": {}", o.detail)
                        };
                        format!("{verdict} {} ({} trials){detail}", o.name, o.trials)
                    })
                    .collect::<Vec<_>>()
                    .join("\n")
            };
            if outcomes.iter().any(|o| !o.passed) {
                println!("{out}");
                return Err(Failure {
                    code: 1,
                    message: "self-test failed".into(),
                });
            }
            out
        }
    })
}

fn configure_threads() -> Result<(), Failure> {
    let Ok(value) = std::env::var("GLK_THREADS") else {
        return Ok(());
    };
    let threads: usize = value
        .trim()
        .parse()
        .ok()
        .filter(|&t| t > 0)
        .ok_or_else(|| {
            input_failure(format!(
                "GLK_THREADS must be a positive integer, got {value:?}"
            ))
        })?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| input_failure(e.to_string()))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match configure_threads().and_then(|()| run(cli)) {
        Ok(out) => {
            println!("{out}");
            ExitCode::SUCCESS
        }
        Err(f) => {
            eprintln!("glk: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
