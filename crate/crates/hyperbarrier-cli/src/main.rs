//! Command-line front end: generate named instance families, classify
//! instances against matching obstructions, run the exact fractional
//! relaxation, search for transferrals, and run self-check suites.
//!
//! Exit codes: 0 success (for `analyze`, a perfect matching); 1 failed
//! verify suite; 2 barrier certificate found; 3 inconclusive; 64 usage
//! errors; 65 malformed or unusable input data.

mod render;
mod suites;

use std::fs;
use std::io::Read;
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Parser, Subcommand, ValueEnum};
use num_rational::BigRational;
use serde_json::{json, Value};

use hyperbarrier::constructions::{equal_mod_three, even_first_coordinate};
use hyperbarrier::geometry::fpm_or_certificate;
use hyperbarrier::solver::{analyze, default_min_part, AnalyzeParams};
use hyperbarrier::transferral::{find_transferral, MatchedSystem};
use hyperbarrier::{ConstructionSpec, Instance};

#[derive(Parser)]
#[command(name = "hyperbarrier", version, about = "Hypergraph matching barriers workbench")]
struct Cli {
    /// Output format for reports.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Worker cap; HYPERBARRIER_JOBS is used when absent, all cores otherwise.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a named instance family as instance JSON.
    Gen {
        #[command(subcommand)]
        family: Family,
    },
    /// Classify an instance: perfect matching, barrier certificates, or inconclusive.
    Analyze {
        /// Instance JSON path; '-' reads stdin.
        #[arg(long, default_value = "-")]
        input: String,
        /// Allowed fraction of violating edges for the containment barrier.
        #[arg(long, value_parser = parse_rational, default_value = "1/100")]
        beta: BigRational,
        /// Robustness fraction for the lattice barrier.
        #[arg(long, value_parser = parse_rational, default_value = "1/100")]
        mu: BigRational,
        /// Part-size floor for candidate partitions; derived from the codegree when absent.
        #[arg(long)]
        min_part: Option<usize>,
        /// Report path; stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Exact fractional relaxation: edge weights or an infeasibility functional.
    Fpm {
        /// Instance JSON path; '-' reads stdin.
        #[arg(long, default_value = "-")]
        input: String,
        /// Report path; stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Minimum transferral between two vertices of an instance with a matching block.
    Transferral {
        /// Instance JSON path ('-' for stdin); must carry a "matching" block.
        #[arg(long, default_value = "-")]
        input: String,
        /// Source vertex.
        #[arg(long)]
        u: usize,
        /// Target vertex.
        #[arg(long)]
        v: usize,
        /// Largest fold to try.
        #[arg(long, default_value_t = 3)]
        b: usize,
        /// Largest size to try.
        #[arg(long, default_value_t = 4)]
        c: usize,
        /// Report path; stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a registered self-check suite.
    Verify {
        /// Suite name; see --help for the registered names.
        suite: String,
    },
}

#[derive(Subcommand)]
enum Family {
    /// Restriction complex over a marked vertex set {0, .., s-1}.
    Space {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        j: usize,
        #[arg(long)]
        s: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Partite restriction complex; s vertices of each part are marked.
    PartiteSpace {
        /// Part size.
        #[arg(long)]
        n: usize,
        /// Number of parts.
        #[arg(long)]
        r: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        j: usize,
        #[arg(long)]
        s: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Graph of the k-sets whose per-part counts lie in a fixed lattice.
    Divisibility {
        /// Comma-separated part sizes, e.g. 3,3.
        #[arg(long, value_delimiter = ',', required = true)]
        part_sizes: Vec<usize>,
        #[arg(long)]
        k: usize,
        /// Built-in lattice name.
        #[arg(long, value_enum, required_unless_present = "basis", conflicts_with = "basis")]
        lattice: Option<NamedLattice>,
        /// Semicolon-separated generator rows, e.g. "2,0;0,1".
        #[arg(long, value_parser = parse_basis)]
        basis: Option<Basis>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Four-part 3-graph whose tetrahedra all meet the odd first part evenly.
    Pikhurko {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Seeded k-partite 2-graph with a partite minimum degree floor.
    MultipartiteHs {
        /// Number of parts.
        #[arg(long)]
        k: usize,
        /// Part size.
        #[arg(long)]
        n: usize,
        #[arg(long)]
        delta_star: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Seeded k-graph with a minimum codegree floor.
    RandomMinCodegree {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        /// Codegree floor.
        #[arg(long)]
        t: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum NamedLattice {
    /// Vectors in Z^2 with even first coordinate.
    EvenFirstCoordinate,
    /// Vectors in Z^3 whose last two coordinates agree mod 3.
    EqualModThree,
}

#[derive(Clone)]
struct Basis(Vec<Vec<i64>>);

fn parse_basis(s: &str) -> Result<Basis, String> {
    let rows: Result<Vec<Vec<i64>>, String> = s
        .split(';')
        .map(|row| {
            row.split(',')
                .map(|x| x.trim().parse::<i64>().map_err(|e| format!("bad entry {x:?}: {e}")))
                .collect()
        })
        .collect();
    let rows = rows?;
    if rows.iter().any(|r| r.len() != rows[0].len()) {
        return Err("generator rows have unequal lengths".into());
    }
    Ok(Basis(rows))
}

fn parse_rational(s: &str) -> Result<BigRational, String> {
    BigRational::from_str(s).map_err(|e| format!("expected a rational like 1/100: {e}"))
}

fn main() {
    let code = match Cli::try_parse() {
        Ok(cli) => run(cli),
        Err(e) => {
            use clap::error::ErrorKind;
            let _ = e.print();
            match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 64,
            }
        }
    };
    std::process::exit(code);
}

fn run(cli: Cli) -> i32 {
    configure_jobs(cli.jobs);
    match cli.command {
        Command::Gen { family } => cmd_gen(family),
        Command::Analyze { input, beta, mu, min_part, out } => {
            cmd_analyze(cli.format, &input, beta, mu, min_part, out)
        }
        Command::Fpm { input, out } => cmd_fpm(cli.format, &input, out),
        Command::Transferral { input, u, v, b, c, out } => {
            cmd_transferral(cli.format, &input, u, v, b, c, out)
        }
        Command::Verify { suite } => cmd_verify(cli.format, &suite),
    }
}

fn configure_jobs(flag: Option<usize>) {
    let jobs = flag.or_else(|| {
        std::env::var("HYPERBARRIER_JOBS").ok().and_then(|s| s.parse::<usize>().ok())
    });
    if let Some(n) = jobs {
        if n >= 1 {
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
        }
    }
}

fn data_error(msg: impl std::fmt::Display) -> i32 {
    eprintln!("error: {msg}");
    65
}

fn read_input(path: &str) -> std::io::Result<String> {
    if path == "-" {
        let mut buf = String::new();
        std::io::stdin().read_to_string(&mut buf)?;
        Ok(buf)
    } else {
        fs::read_to_string(path)
    }
}

fn write_text(out: Option<&PathBuf>, body: &str) -> i32 {
    match out {
        Some(path) => match fs::write(path, body) {
            Ok(()) => 0,
            Err(e) => data_error(format!("cannot write {}: {e}", path.display())),
        },
        None => {
            print!("{body}");
            0
        }
    }
}

fn emit(format: Format, out: Option<&PathBuf>, json: Value, text: Vec<String>) -> i32 {
    let body = match format {
        Format::Json => format!("{:#}\n", json),
        Format::Text => text.join("\n") + "\n",
    };
    write_text(out, &body)
}

fn load_instance(path: &str) -> Result<Instance, String> {
    let raw = read_input(path).map_err(|e| format!("cannot read {path}: {e}"))?;
    Instance::from_json_str(&raw).map_err(|e| e.to_string())
}

fn cmd_gen(family: Family) -> i32 {
    let (spec, out) = match family {
        Family::Space { n, k, j, s, out } => (ConstructionSpec::Space { n, k, j, s }, out),
        Family::PartiteSpace { n, r, k, j, s, out } => {
            (ConstructionSpec::PartiteSpace { n, r, k, j, s }, out)
        }
        Family::Divisibility { part_sizes, k, lattice, basis, out } => {
            let basis = match (lattice, basis) {
                (Some(named), _) => {
                    let l = match named {
                        NamedLattice::EvenFirstCoordinate => even_first_coordinate(),
                        NamedLattice::EqualModThree => equal_mod_three(),
                    };
                    l.basis()
                        .iter()
                        .map(|row| {
                            row.iter()
                                .map(|x| i64::try_from(x).expect("built-in basis entries are small"))
                                .collect()
                        })
                        .collect()
                }
                (None, Some(b)) => b.0,
                (None, None) => unreachable!("clap enforces lattice xor basis"),
            };
            (ConstructionSpec::Divisibility { part_sizes, k, basis }, out)
        }
        Family::Pikhurko { n, out } => (ConstructionSpec::Pikhurko { n }, out),
        Family::MultipartiteHs { k, n, delta_star, seed, out } => {
            (ConstructionSpec::MultipartiteHs { k, n, delta_star, seed }, out)
        }
        Family::RandomMinCodegree { n, k, t, seed, out } => {
            (ConstructionSpec::RandomMinCodegree { n, k, t, seed }, out)
        }
    };
    match spec.generate() {
        Ok(generated) => {
            let inst = Instance::from_generated(&generated, Some(spec));
            write_text(out.as_ref(), &(inst.to_json_string() + "\n"))
        }
        Err(e) => data_error(e),
    }
}

fn cmd_analyze(
    format: Format,
    input: &str,
    beta: BigRational,
    mu: BigRational,
    min_part: Option<usize>,
    out: Option<PathBuf>,
) -> i32 {
    let inst = match load_instance(input) {
        Ok(i) => i,
        Err(e) => return data_error(e),
    };
    let complex = match inst.to_complex() {
        Ok(j) => j,
        Err(e) => return data_error(e),
    };
    // Resolve the floor here so the report logs the value actually used.
    let min_part = Some(min_part.unwrap_or_else(|| default_min_part(&complex, &mu)));
    let params = AnalyzeParams { beta, mu, min_part };
    match analyze(&complex, params) {
        Ok(report) => {
            let code = report.exit_code();
            let status = emit(
                format,
                out.as_ref(),
                render::report_json(&report, complex.n(), complex.k()),
                render::report_text(&report, complex.n(), complex.k()),
            );
            if status != 0 {
                return status;
            }
            code
        }
        Err(e) => data_error(e),
    }
}

fn cmd_fpm(format: Format, input: &str, out: Option<PathBuf>) -> i32 {
    let inst = match load_instance(input) {
        Ok(i) => i,
        Err(e) => return data_error(e),
    };
    let graph = match inst.to_graph() {
        Ok(g) => g,
        Err(e) => return data_error(e),
    };
    let outcome = fpm_or_certificate(&graph);
    emit(
        format,
        out.as_ref(),
        render::fpm_json(&outcome, graph.n(), graph.k()),
        render::fpm_text(&outcome),
    )
}

fn cmd_transferral(
    format: Format,
    input: &str,
    u: usize,
    v: usize,
    b: usize,
    c: usize,
    out: Option<PathBuf>,
) -> i32 {
    let inst = match load_instance(input) {
        Ok(i) => i,
        Err(e) => return data_error(e),
    };
    let matching = match &inst.matching {
        Some(m) => m.clone(),
        None => return data_error("instance carries no \"matching\" block"),
    };
    let graph = match inst.to_graph() {
        Ok(g) => g,
        Err(e) => return data_error(e),
    };
    if u >= graph.n() || v >= graph.n() {
        return data_error(format!("vertices ({u},{v}) out of range for n = {}", graph.n()));
    }
    let sys = match MatchedSystem::new(graph, matching) {
        Ok(s) => s,
        Err(e) => return data_error(e),
    };
    let found = find_transferral(&sys, u, v, b, c);
    emit(
        format,
        out.as_ref(),
        render::transferral_json(u, v, b, c, found.as_ref()),
        render::transferral_text(u, v, b, c, found.as_ref()),
    )
}

fn cmd_verify(format: Format, suite: &str) -> i32 {
    let Some(checks) = suites::run_suite(suite) else {
        eprintln!(
            "error: unknown suite {suite:?}; registered: {}",
            suites::suite_names().join(", ")
        );
        return 64;
    };
    let pass = checks.iter().all(|c| c.pass);
    let json = json!({
        "command": "verify",
        "suite": suite,
        "pass": pass,
        "checks": checks.iter().map(|c| json!({
            "name": c.name,
            "pass": c.pass,
            "detail": c.detail,
        })).collect::<Vec<_>>(),
    });
    let mut text: Vec<String> = checks
        .iter()
        .map(|c| format!("{} {} ({})", if c.pass { "PASS" } else { "FAIL" }, c.name, c.detail))
        .collect();
    text.push(format!("suite {suite}: {}", if pass { "PASS" } else { "FAIL" }));
    let status = emit(format, None, json, text);
    if status != 0 {
        return status;
    }
    if pass {
        0
    } else {
        1
    }
}
