//! The `webaudit` command line.
//!
//! Exit codes: 0 success (or verdict plausible), 1 usage/IO/parse error,
//! 2 verdict outlier, 3 verdict inconclusive, 4 PageRank did not converge.
//! Results go to standard output or to the named files; diagnostics go to
//! standard error.

use std::ffi::OsString;
use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::components;
use crate::compress::{bits_per_link, CompressionParams};
use crate::graph::{CsrGraph, EdgeList};
use crate::grayorder::{apply_permutation, gray_permutation};
use crate::ingest::GraphFormat;
use crate::pagerank::{self, DanglingStrategy, PageRankConfig, Preference, RankOperator};
use crate::par;
use crate::report::{self, ReportFormat, Verdict};
use crate::synth::{self, CopyModelParams};

pub const EXIT_OK: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_OUTLIER: i32 = 2;
pub const EXIT_INCONCLUSIVE: i32 = 3;
pub const EXIT_NOT_CONVERGED: i32 = 4;

#[derive(Debug, Parser)]
#[command(name = "webaudit", version, about = "Check whether a directed graph looks like a web graph")]
struct Cli {
    /// Worker threads for the parallel passes (0 = all cores). Output does not depend on it.
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum DanglingArg {
    Strong,
    Weak,
    None,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum OrderArg {
    Natural,
    Gray,
}

#[derive(Debug, clap::Args)]
struct Input {
    input: PathBuf,
    /// edges or mtx; guessed from the extension when omitted
    #[arg(long)]
    format: Option<GraphFormat>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Realism audit; exit 0 plausible, 2 outlier, 3 inconclusive
    Audit {
        #[command(flatten)]
        input: Input,
        #[arg(long, default_value_t = crate::compress::DEFAULT_WINDOW)]
        window: usize,
        #[arg(long)]
        json: Option<PathBuf>,
        #[arg(long)]
        markdown: Option<PathBuf>,
    },
    /// PageRank as a node<TAB>rank file; exit 4 if not converged
    Pagerank {
        #[command(flatten)]
        input: Input,
        #[arg(long, default_value_t = 0.85)]
        alpha: f64,
        #[arg(long, value_enum, default_value_t = DanglingArg::Strong)]
        dangling: DanglingArg,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
        #[arg(long)]
        max_iters: Option<usize>,
        #[arg(short = 'o', long = "output")]
        output: PathBuf,
    },
    /// SCC, terminal and bucket summary as JSON
    Components {
        #[command(flatten)]
        input: Input,
    },
    /// Gray-code permutation file (line i holds the new id of node i)
    Grayperm {
        #[command(flatten)]
        input: Input,
        #[arg(short = 'o', long = "output")]
        output: PathBuf,
    },
    /// Model bits per link
    Bits {
        #[command(flatten)]
        input: Input,
        #[arg(long, default_value_t = crate::compress::DEFAULT_WINDOW)]
        window: usize,
        #[arg(long, value_enum, default_value_t = OrderArg::Natural)]
        order: OrderArg,
    },
    /// Bucket and core rank mass for each damping factor
    Sweep {
        #[command(flatten)]
        input: Input,
        #[arg(long, value_delimiter = ',', required = true)]
        alphas: Vec<f64>,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
    },
    /// Convert between edge lists and MatrixMarket
    Convert {
        input: PathBuf,
        output: PathBuf,
        #[arg(long)]
        from: Option<GraphFormat>,
        #[arg(long)]
        to: Option<GraphFormat>,
        /// Reverse every arc (for matrices stored column = source)
        #[arg(long)]
        transpose: bool,
    },
    /// Seeded synthetic graphs
    Synth {
        #[command(subcommand)]
        model: SynthModel,
    },
}

#[derive(Debug, Subcommand)]
enum SynthModel {
    /// Copy model with injected dangling nodes and 2-cycle buckets
    Copy {
        #[arg(long)]
        nodes: usize,
        #[arg(long, default_value_t = 25.0)]
        out_mean: f64,
        #[arg(long, default_value_t = 0.5)]
        copy_prob: f64,
        #[arg(long, default_value_t = 0.12)]
        dangling: f64,
        #[arg(long, default_value_t = 0.07)]
        buckets: f64,
        #[arg(long)]
        seed: u64,
        #[arg(short = 'o', long = "output")]
        output: PathBuf,
        #[arg(long)]
        format: Option<GraphFormat>,
    },
    /// Uniform random graph with an exact arc count
    Er {
        #[arg(long)]
        nodes: usize,
        #[arg(long)]
        arcs: u64,
        #[arg(long)]
        seed: u64,
        #[arg(short = 'o', long = "output")]
        output: PathBuf,
        #[arg(long)]
        format: Option<GraphFormat>,
    },
}

/// Parses `args` (program name first) and runs the command; returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_ERROR } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    let threads = cli.threads;
    match par::with_threads(threads, move || execute(cli.command)) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            EXIT_ERROR
        }
    }
}

fn load_edges(path: &Path, format: Option<GraphFormat>) -> Result<EdgeList> {
    let format = format.unwrap_or_else(|| GraphFormat::from_path(path));
    let file = File::open(path).with_context(|| format!("cannot open {}", path.display()))?;
    format
        .parse(BufReader::with_capacity(1 << 20, file))
        .with_context(|| path.display().to_string())
}

fn load_graph(input: &Input) -> Result<CsrGraph> {
    let edges = load_edges(&input.input, input.format)?;
    CsrGraph::from_edges(&edges).with_context(|| input.input.display().to_string())
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    let file = File::create(path).with_context(|| format!("cannot create {}", path.display()))?;
    Ok(BufWriter::new(file))
}

fn write_graph(g: &CsrGraph, path: &Path, format: Option<GraphFormat>) -> Result<()> {
    let format = format.unwrap_or_else(|| GraphFormat::from_path(path));
    format
        .export(g, create(path)?)
        .with_context(|| format!("cannot write {}", path.display()))
}

fn execute(command: Command) -> Result<i32> {
    match command {
        Command::Audit {
            input,
            window,
            json,
            markdown,
        } => {
            let g = load_graph(&input)?;
            let params = CompressionParams::with_window(window)?;
            let r = report::audit(&g, params)?;
            let text = report::render_report(&r, ReportFormat::Json);
            println!("{text}");
            if let Some(path) = json {
                std::fs::write(&path, format!("{text}\n"))
                    .with_context(|| format!("cannot write {}", path.display()))?;
            }
            if let Some(path) = markdown {
                std::fs::write(&path, report::render_report(&r, ReportFormat::Markdown))
                    .with_context(|| format!("cannot write {}", path.display()))?;
            }
            eprintln!("verdict: {}", r.verdict.as_str());
            Ok(match r.verdict {
                Verdict::Plausible => EXIT_OK,
                Verdict::Outlier => EXIT_OUTLIER,
                Verdict::Inconclusive => EXIT_INCONCLUSIVE,
            })
        }
        Command::Pagerank {
            input,
            alpha,
            dangling,
            tol,
            max_iters,
            output,
        } => {
            // Load arcs reversed: only the transpose is ever materialized.
            let edges = load_edges(&input.input, input.format)?.reversed();
            let transpose = CsrGraph::from_edges(&edges).with_context(|| input.input.display().to_string())?;
            drop(edges);
            let op = RankOperator::from_transpose(transpose);
            let strategy = match dangling {
                DanglingArg::Strong => DanglingStrategy::StronglyPreferential,
                DanglingArg::Weak => DanglingStrategy::WeaklyPreferential,
                DanglingArg::None => DanglingStrategy::LinearSystem,
            };
            let mut cfg = PageRankConfig::new(alpha, tol).with_dangling(strategy);
            if let Some(k) = max_iters {
                cfg = cfg.with_max_iterations(k);
            }
            let res = op.run(&cfg)?;
            pagerank::write_ranks_tsv(&res.ranks, create(&output)?)?;
            eprintln!(
                "iterations: {}  residual: {:e}  l1_norm: {}  converged: {}",
                res.iterations, res.final_residual, res.l1_norm, res.converged
            );
            if strategy == DanglingStrategy::LinearSystem {
                eprintln!("residual relative to the vector norm: {:e}", res.scaled_residual());
            }
            Ok(if res.converged { EXIT_OK } else { EXIT_NOT_CONVERGED })
        }
        Command::Components { input } => {
            let g = load_graph(&input)?;
            let summary = components::analyze(&g).summary();
            let mut value = serde_json::to_value(&summary)?;
            value["nodes"] = json!(g.num_nodes());
            println!("{}", serde_json::to_string_pretty(&value)?);
            Ok(EXIT_OK)
        }
        Command::Grayperm { input, output } => {
            let g = load_graph(&input)?;
            gray_permutation(&g).write(create(&output)?)?;
            Ok(EXIT_OK)
        }
        Command::Bits {
            input,
            window,
            order,
        } => {
            let mut g = load_graph(&input)?;
            if let OrderArg::Gray = order {
                g = apply_permutation(&g, &gray_permutation(&g))?;
            }
            let est = bits_per_link(&g, CompressionParams::with_window(window)?)?;
            println!("{}", est.bits_per_link);
            eprintln!("total bits: {}  arcs: {}", est.total_bits, est.num_arcs);
            Ok(EXIT_OK)
        }
        Command::Sweep { input, alphas, tol } => {
            let g = load_graph(&input)?;
            let info = components::analyze(&g);
            let points = pagerank::alpha_sweep_bucket_mass(&g, &info, &alphas, &Preference::Uniform, tol)?;
            let stdout = std::io::stdout();
            let mut out = stdout.lock();
            writeln!(out, "alpha\tbucket_mass\tcore_mass\tnon_bucket_mass\titerations\tconverged")?;
            for p in &points {
                writeln!(
                    out,
                    "{}\t{:.16e}\t{:.16e}\t{:.16e}\t{}\t{}",
                    p.alpha, p.bucket_mass, p.core_mass, p.non_bucket_mass, p.iterations, p.converged
                )?;
            }
            Ok(EXIT_OK)
        }
        Command::Convert {
            input,
            output,
            from,
            to,
            transpose,
        } => {
            let mut edges = load_edges(&input, from)?;
            if transpose {
                edges = edges.reversed();
            }
            let g = CsrGraph::from_edges(&edges).with_context(|| input.display().to_string())?;
            write_graph(&g, &output, to)?;
            Ok(EXIT_OK)
        }
        Command::Synth { model } => {
            let (g, output, format) = match model {
                SynthModel::Copy {
                    nodes,
                    out_mean,
                    copy_prob,
                    dangling,
                    buckets,
                    seed,
                    output,
                    format,
                } => {
                    let params = CopyModelParams {
                        nodes,
                        out_mean,
                        copy_prob,
                        dangling_target: dangling,
                        bucket_target: buckets,
                        seed,
                    };
                    (synth::generate_copy_model(&params)?, output, format)
                }
                SynthModel::Er {
                    nodes,
                    arcs,
                    seed,
                    output,
                    format,
                } => (synth::generate_er(nodes, arcs, seed)?, output, format),
            };
            write_graph(&g, &output, format)?;
            eprintln!("nodes: {}  arcs: {}", g.num_nodes(), g.num_arcs());
            Ok(EXIT_OK)
        }
    }
}
