use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use multab::certify::CertificateDoc;
use multab::oracle::{self, BRUTE_MAX_SIDE, MAX_EDGES, TABLE_MAX_N};
use multab::sweeps::{lemma_sweeps, SweepRanges};
use multab::{
    certify_pipeline, generate, verify_certificate, BipartiteMultigraph, Error, ProfileMode,
    ScaleProfile,
};

#[derive(Parser)]
#[command(
    name = "multab",
    version,
    about = "Certified lower bounds on multiplication tables of bipartite graphs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Threshold profile for the half-regular case analysis.
    #[arg(long, global = true, default_value = "scaled")]
    profile: ProfileMode,

    /// Seed for random generators.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Write the main output here instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Work cap: smallest-side limit for `oracle`, largest n for `table`,
    /// largest m for `conjecture`.
    #[arg(long, global = true)]
    budget: Option<u64>,

    /// Keep at most this many certificate entries.
    #[arg(long, global = true)]
    max_entries: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Write a generated graph in the text format.
    Gen {
        #[command(subcommand)]
        kind: GenKind,
    },
    /// Certify a lower bound on |M(G)| and write the certificate as JSON.
    Certify {
        graph: PathBuf,
        /// Also write the pipeline statistics as JSON.
        #[arg(long)]
        stats: Option<PathBuf>,
    },
    /// Check a certificate against its graph.
    Verify { graph: PathBuf, cert: PathBuf },
    /// Print M(G) exactly.
    Oracle { graph: PathBuf },
    /// CSV of |[n]·[n]| and its density for n in lo..=hi.
    Table { lo: u64, hi: u64 },
    /// Minimum |M(G)| over simple bipartite graphs with m edges, m ≤ max_m.
    Conjecture {
        max_m: usize,
        /// Total vertex cap; defaults to 2·m.
        #[arg(long)]
        max_vertices: Option<usize>,
    },
    /// Run the exhaustive property sweeps.
    Lemmas {
        #[arg(long, value_enum, default_value_t = SweepSize::Small)]
        sweep: SweepSize,
    },
}

#[derive(Subcommand)]
enum GenKind {
    Complete {
        a: usize,
        b: usize,
    },
    /// Path on n vertices.
    Path {
        n: usize,
    },
    /// Cycle on n vertices, n even and at least 4.
    Cycle {
        n: usize,
    },
    /// K_{1,n}.
    Star {
        n: usize,
    },
    /// Each pair present with probability p.
    Random {
        nx: usize,
        ny: usize,
        p: f64,
    },
    Matching {
        n: usize,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum SweepSize {
    Small,
    Full,
}

enum Failure {
    Usage(String),
    Rejected(String),
    Bug(String),
    Budget(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Rejected(_) => 1,
            Failure::Usage(_) => 2,
            Failure::Bug(_) => 3,
            Failure::Budget(_) => 4,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::Rejected(m) | Failure::Bug(m) | Failure::Budget(m) => m,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Budget { .. } => Failure::Budget(e.to_string()),
            Error::Verification(_) => Failure::Bug(e.to_string()),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

type CmdResult = std::result::Result<(), Failure>;

fn read(path: &Path) -> std::result::Result<String, Failure> {
    fs::read_to_string(path)
        .map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))
}

fn read_graph(path: &Path) -> std::result::Result<BipartiteMultigraph, Failure> {
    BipartiteMultigraph::parse(&read(path)?)
        .map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn emit(out: Option<&Path>, text: &str) -> CmdResult {
    match out {
        Some(p) => fs::write(p, text)
            .map_err(|e| Failure::Usage(format!("cannot write {}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn within(budget: Option<u64>, what: &str, needed: u64) -> CmdResult {
    match budget {
        Some(limit) if needed > limit => Err(Failure::Budget(format!(
            "budget exceeded for {what}: need {needed}, limit {limit}"
        ))),
        _ => Ok(()),
    }
}

fn run(cli: Cli) -> CmdResult {
    let out = cli.out.as_deref();
    match cli.command {
        Command::Gen { kind } => {
            let g = match kind {
                GenKind::Complete { a, b } => generate::complete(a, b),
                GenKind::Path { n } => generate::path(n),
                GenKind::Cycle { n } => generate::cycle(n),
                GenKind::Star { n } => generate::star(n),
                GenKind::Random { nx, ny, p } => generate::random(nx, ny, p, cli.seed),
                GenKind::Matching { n } => generate::matching(n),
            }?;
            emit(out, &g.to_text())
        }
        Command::Certify { graph, stats } => {
            let g = read_graph(&graph)?;
            let mut profile = ScaleProfile::with_mode(cli.profile);
            if let Some(n) = cli.max_entries {
                profile.max_entries = n;
            }
            let report = certify_pipeline(&g, &profile)?;
            let doc = CertificateDoc::from_report(&report);
            let summary = format!(
                "m = {}, path = {}, |certificate| = {}, trivial baseline = {}",
                report.stats.m,
                report.path,
                report.certificate.len(),
                report.stats.trivial_size
            );
            match out {
                Some(_) => {
                    emit(out, &doc.to_json())?;
                    println!("{summary}");
                }
                None => {
                    println!("{}", doc.to_json());
                    eprintln!("{summary}");
                }
            }
            if let Some(p) = stats {
                let json = serde_json::to_string_pretty(&report.stats).expect("stats serialize");
                emit(Some(&p), &json)?;
            }
            Ok(())
        }
        Command::Verify { graph, cert } => {
            let g = read_graph(&graph)?;
            let doc = CertificateDoc::from_json(&read(&cert)?)?;
            let verdict = verify_certificate(&g, &doc.certificate())?;
            if verdict.is_ok() {
                println!("{verdict}");
                Ok(())
            } else {
                Err(Failure::Rejected(verdict.to_string()))
            }
        }
        Command::Oracle { graph } => {
            let g = read_graph(&graph)?;
            let side = g.nx().min(g.ny()) as u64;
            within(
                cli.budget.or(Some(BRUTE_MAX_SIDE as u64)),
                "oracle subset sweep",
                side,
            )?;
            let sizes: Vec<String> = oracle::brute_multiplication_table(&g)?
                .iter()
                .map(|s| s.to_string())
                .collect();
            emit(out, &format!("{}\n", sizes.join(" ")))
        }
        Command::Table { lo, hi } => {
            if lo == 0 || lo > hi {
                return Err(Failure::Usage(format!("need 1 ≤ lo ≤ hi, got {lo}..{hi}")));
            }
            within(cli.budget.or(Some(TABLE_MAX_N)), "product table", hi)?;
            emit(out, &oracle::table_csv(lo..=hi)?)
        }
        Command::Conjecture {
            max_m,
            max_vertices,
        } => {
            within(
                cli.budget.or(Some(MAX_EDGES as u64)),
                "conjecture search edges",
                max_m as u64,
            )?;
            let rows = oracle::conjecture_table(max_m, max_vertices.unwrap_or(2 * max_m))?;
            let mut text = String::new();
            for row in rows {
                text.push_str(&format!(
                    "m = {}: min |M| = {}, {} graphs, {} minimizers\n",
                    row.m,
                    row.min,
                    row.graphs,
                    row.minimizers.len()
                ));
                for g in &row.minimizers {
                    let edges: Vec<String> =
                        g.pairs().map(|(x, y, _)| format!("{x}-{y}")).collect();
                    text.push_str(&format!("  {}x{}: {}\n", g.nx(), g.ny(), edges.join(" ")));
                }
            }
            emit(out, &text)
        }
        Command::Lemmas { sweep } => {
            let ranges = match sweep {
                SweepSize::Small => SweepRanges::small(),
                SweepSize::Full => SweepRanges::full(),
            };
            let reports = lemma_sweeps(&ranges)?;
            let text: String = reports.iter().map(|r| format!("{r}\n")).collect();
            emit(out, &text)?;
            let failed = reports.iter().filter(|r| !r.passed()).count();
            if failed > 0 {
                return Err(Failure::Bug(format!("{failed} sweeps reported violations")));
            }
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Ok(v) = std::env::var("MULTAB_THREADS") {
        match v.parse::<usize>() {
            Ok(n) if n > 0 => {
                rayon::ThreadPoolBuilder::new()
                    .num_threads(n)
                    .build_global()
                    .expect("global pool is built once");
            }
            _ => {
                eprintln!("error: MULTAB_THREADS must be a positive integer, got {v:?}");
                return ExitCode::from(2);
            }
        }
    }
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}
