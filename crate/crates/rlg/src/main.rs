//! rlg: sample random regular graphs, count their non-backtracking
//! loops exactly and spectrally, evaluate closed-form expectations, and
//! run reproducible Monte Carlo sweeps.

use clap::{Parser, Subcommand};
use serde::Serialize;
use std::path::PathBuf;
use std::process::ExitCode;

use rlg::census;
use rlg::experiments::{self, MethodSet, Model, SweepBudgets, SweepConfig};
use rlg::multigraph::Multigraph;
use rlg::plot;
use rlg::rng::RngStream;
use rlg::sampler;
use rlg::spectra;
use rlg::theory;

#[derive(Parser)]
#[command(name = "rlg", version, about = "Random regular graph loop census", max_term_width = 100)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sample a d-regular graph and write it as JSON.
    Sample {
        #[arg(long)]
        d: usize,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Stream index within the seed, for independent draws.
        #[arg(long, default_value_t = 0)]
        stream: u64,
        #[arg(long, value_parser = parse_model, default_value = "configuration")]
        model: Model,
        /// Rejection budget for the uniform-simple model.
        #[arg(long, default_value_t = 100_000)]
        max_attempts: u64,
        /// Output path; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Exact loop counts of a graph at one length.
    Census {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        k: usize,
        /// Comma list drawn from dfs, exact-trace, spectral.
        #[arg(long, default_value = "dfs,exact-trace")]
        methods: String,
        #[arg(long, default_value_t = census::DEFAULT_DFS_NODE_BUDGET)]
        budget_dfs_nodes: u64,
        #[arg(long, default_value_t = census::DEFAULT_TRACE_PRODUCT_BUDGET)]
        budget_trace_products: u64,
        #[arg(long, default_value_t = spectra::DEFAULT_DIRECT_DIM)]
        budget_direct_diag: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Adjacency and non-backtracking spectra of a graph.
    Spectrum {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long, default_value_t = spectra::DEFAULT_DIRECT_DIM)]
        budget_direct_diag: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Exact expected simple-loop count under the configuration model.
    Expect {
        #[arg(long)]
        d: usize,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
    },
    /// Monte Carlo sweep over an (n, k) grid; writes CSV and JSON.
    Sweep {
        #[arg(long)]
        d: usize,
        /// Comma list of vertex counts.
        #[arg(long, value_delimiter = ',', required = true)]
        n: Vec<usize>,
        /// Comma list of loop lengths.
        #[arg(long, value_delimiter = ',', required = true)]
        k_grid: Vec<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        replicates: usize,
        #[arg(long, value_parser = parse_model, default_value = "configuration")]
        model: Model,
        /// Comma list drawn from dfs, exact-trace, spectral, walk-sample.
        #[arg(long, default_value = "dfs,exact-trace")]
        methods: String,
        #[arg(long, default_value_t = census::DEFAULT_DFS_NODE_BUDGET)]
        budget_dfs_nodes: u64,
        #[arg(long, default_value_t = census::DEFAULT_TRACE_PRODUCT_BUDGET)]
        budget_trace_products: u64,
        #[arg(long, default_value_t = spectra::DEFAULT_DIRECT_DIM)]
        budget_direct_diag: usize,
        #[arg(long, default_value_t = 100_000)]
        budget_rejection: u64,
        #[arg(long, default_value_t = 100_000)]
        budget_walks: u64,
        #[arg(long, default_value_t = 0.25)]
        concentration_epsilon: f64,
        #[arg(long, default_value_t = 0.1)]
        gap_epsilon: f64,
        /// Output prefix; writes <out>.csv and <out>.json.
        #[arg(long)]
        out: PathBuf,
    },
    /// Render a line chart from a sweep CSV as a standalone SVG.
    Plot {
        #[arg(long)]
        csv: PathBuf,
        #[arg(long, default_value = "k")]
        x: String,
        #[arg(long, default_value = "ratio_R")]
        y: String,
        #[arg(long)]
        logx: bool,
        #[arg(long)]
        out: PathBuf,
    },
}

fn parse_model(s: &str) -> Result<Model, String> {
    match s {
        "configuration" => Ok(Model::Configuration),
        "uniform-simple" => Ok(Model::UniformSimple),
        other => Err(format!("unknown model {other:?} (expected configuration or uniform-simple)")),
    }
}

#[derive(Serialize)]
struct CensusOut {
    k: usize,
    n_simp: Option<String>,
    n_prim: Option<String>,
    n_tr: Option<String>,
    n_all: Option<String>,
}

#[derive(Serialize)]
struct SpectrumOut {
    adjacency: Vec<f64>,
    lambda: Option<f64>,
    mu: Option<f64>,
    nb: Vec<[f64; 2]>,
    residual: f64,
}

fn load_graph(path: &PathBuf) -> Result<Multigraph, String> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    Multigraph::from_json(&text).map_err(|e| e.to_string())
}

fn write_output(out: Option<&PathBuf>, text: &str) -> Result<(), String> {
    match out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| format!("cannot write {}: {e}", path.display())),
        None => {
            println!("{}", text.trim_end());
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<(), String> {
    match cli.command {
        Command::Sample { d, n, seed, stream, model, max_attempts, out } => {
            let s = RngStream::new(seed, stream);
            let g = match model {
                Model::Configuration => sampler::sample_configuration(d, n, s),
                Model::UniformSimple => sampler::sample_uniform_simple(d, n, s, max_attempts),
            }
            .map_err(|e| e.to_string())?;
            write_output(out.as_ref(), &(g.to_json() + "\n"))
        }
        Command::Census {
            graph,
            k,
            methods,
            budget_dfs_nodes,
            budget_trace_products,
            budget_direct_diag,
            out,
        } => {
            let g = load_graph(&graph)?;
            let set = MethodSet::parse(&methods).map_err(|e| e.to_string())?;
            let mut result = CensusOut { k, n_simp: None, n_prim: None, n_tr: None, n_all: None };
            if set.dfs {
                let n_simp = if k <= g.vertices() {
                    census::count_simple_loops_upto(&g, k, budget_dfs_nodes)
                        .map(|c| c[k].to_string())
                        .map_err(|e| e.to_string())?
                } else {
                    "0".to_string()
                };
                result.n_simp = Some(n_simp);
            }
            if set.exact_trace {
                let traces = census::nb_traces_upto(&g, k, budget_trace_products)
                    .map_err(|e| e.to_string())?;
                result.n_tr = Some(traces[k].to_string());
                result.n_prim = Some(
                    census::count_primitive_loops_from_traces(&traces, k)
                        .map_err(|e| e.to_string())?
                        .to_string(),
                );
                let mut all = num::BigUint::ZERO;
                for r in census::divisors(k as u64) {
                    all += census::count_primitive_loops_from_traces(&traces, r as usize)
                        .map_err(|e| e.to_string())?;
                }
                result.n_all = Some(all.to_string());
            }
            if set.spectral {
                let t = census::count_closed_nb_walks_spectral(&g, k, budget_direct_diag)
                    .map_err(|e| e.to_string())?;
                eprintln!(
                    "spectral trace: {:.6} (relative error estimate {:.2e})",
                    t.value, t.rel_error
                );
            }
            let text = serde_json::to_string(&result).expect("census serializes");
            write_output(out.as_ref(), &(text + "\n"))
        }
        Command::Spectrum { graph, budget_direct_diag, out } => {
            let g = load_graph(&graph)?;
            let report =
                spectra::spectral_report(&g, budget_direct_diag).map_err(|e| e.to_string())?;
            let result = SpectrumOut {
                adjacency: report.adjacency_eigenvalues,
                lambda: report.lambda_gap,
                mu: report.mu_second,
                nb: report.nb_eigenvalues.iter().map(|c| [c.re, c.im]).collect(),
                residual: report.residual_bound,
            };
            let text = serde_json::to_string(&result).expect("spectrum serializes");
            write_output(out.as_ref(), &(text + "\n"))
        }
        Command::Expect { d, n, k } => {
            let value = theory::exact_expected_simple(d, n, k).map_err(|e| e.to_string())?;
            println!("{}/{}", value.numer(), value.denom());
            println!("{}", theory::format_decimal(&value, 12));
            Ok(())
        }
        Command::Sweep {
            d,
            n,
            k_grid,
            seed,
            replicates,
            model,
            methods,
            budget_dfs_nodes,
            budget_trace_products,
            budget_direct_diag,
            budget_rejection,
            budget_walks,
            concentration_epsilon,
            gap_epsilon,
            out,
        } => {
            let config = SweepConfig {
                d,
                n_values: n,
                k_values: k_grid,
                replicates,
                seed,
                model,
                methods: MethodSet::parse(&methods).map_err(|e| e.to_string())?,
                budgets: SweepBudgets {
                    dfs_nodes: budget_dfs_nodes,
                    trace_products: budget_trace_products,
                    direct_diag: budget_direct_diag,
                    rejection_attempts: budget_rejection,
                    walks_per_replicate: budget_walks,
                },
                concentration_epsilon,
                gap_epsilon,
            };
            let result = experiments::run_sweep(&config).map_err(|e| e.to_string())?;
            let csv_path = out.with_extension("csv");
            let json_path = out.with_extension("json");
            std::fs::write(&csv_path, result.to_csv())
                .map_err(|e| format!("cannot write {}: {e}", csv_path.display()))?;
            std::fs::write(&json_path, result.to_json())
                .map_err(|e| format!("cannot write {}: {e}", json_path.display()))?;
            eprintln!("wrote {} and {}", csv_path.display(), json_path.display());
            Ok(())
        }
        Command::Plot { csv, x, y, logx, out } => {
            let text = std::fs::read_to_string(&csv)
                .map_err(|e| format!("cannot read {}: {e}", csv.display()))?;
            let svg = plot::emit_plot(&text, &x, &y, logx).map_err(|e| e.to_string())?;
            std::fs::write(&out, svg)
                .map_err(|e| format!("cannot write {}: {e}", out.display()))?;
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    if let Ok(threads) = std::env::var("RLG_THREADS") {
        if let Ok(t) = threads.parse::<usize>() {
            if t >= 1 {
                let _ = rayon::ThreadPoolBuilder::new().num_threads(t).build_global();
            }
        }
    }
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // clap exits 2 on usage errors, 0 on --help/--version.
            let _ = e.print();
            return ExitCode::from(e.exit_code() as u8);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::FAILURE
        }
    }
}
