//! `cgedit`: recognize cographs, print modular decomposition trees, edit
//! graphs into cographs, generate planted instances, and run benchmarks.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use cgedit::editing::{
    brute_force_optimal_edit, exact_edit, heuristic_edit, heuristic_edit_randomized,
    random_pair_edit, verify_edit_result, TieBreak,
};
use cgedit::io::{
    generate_perturbed_cograph, parse_bench_config, parse_graph, run_benchmark,
    serialize_edit_set, serialize_graph, serialize_mdtree, serialize_trace,
};
use cgedit::merge::pairwise_merge_sequence;
use cgedit::{find_p4, modular_decomposition_tree};

#[derive(Parser)]
#[command(name = "cgedit", version, about = "Modular decomposition and cograph editing")]
struct Cli {
    /// Output format (only `text` is currently implemented).
    #[arg(long, global = true, default_value = "text")]
    format: String,
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum MethodArg {
    Bruteforce,
    Exact,
    Greedy,
    GreedyRand,
    RandomPair,
}

#[derive(Subcommand)]
enum Command {
    /// Decide whether a graph is a cograph; prints a P4 witness if not.
    Recognize { graph: PathBuf },
    /// Print the modular decomposition tree of a graph.
    Mdtree { graph: PathBuf },
    /// Compute a cograph edit set; the set goes to stdout, the cost to stderr.
    Edit {
        graph: PathBuf,
        #[arg(long, value_enum)]
        method: MethodArg,
        /// Seed for the randomized methods.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Write the pairwise merge trace of the edit set to this file.
        #[arg(long)]
        trace: Option<PathBuf>,
        /// Re-check the result independently and fail if anything is off.
        #[arg(long)]
        verify: bool,
    },
    /// Generate a perturbed planted cograph and print it as a graph document.
    Gen {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Also emit the planted cotree and applied flips as comment lines.
        #[arg(long)]
        emit_planted: bool,
    },
    /// Run a benchmark sweep from a key-value config file; CSV on stdout.
    Bench {
        #[arg(long)]
        config: PathBuf,
    },
}

fn read_graph(path: &PathBuf) -> Result<cgedit::Graph, String> {
    let text = fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    parse_graph(&text).map_err(|e| format!("{}: {e}", path.display()))
}

fn run(cli: Cli) -> Result<ExitCode, String> {
    if cli.format != "text" {
        return Err(format!("unsupported format `{}`", cli.format));
    }
    match cli.command {
        Command::Recognize { graph } => {
            let g = read_graph(&graph)?;
            match find_p4(&g) {
                None => {
                    println!("cograph");
                    Ok(ExitCode::SUCCESS)
                }
                Some((a, b, c, d)) => {
                    println!("not-cograph witness: {a} {b} {c} {d}");
                    Ok(ExitCode::FAILURE)
                }
            }
        }
        Command::Mdtree { graph } => {
            let g = read_graph(&graph)?;
            let tree = modular_decomposition_tree(&g).map_err(|e| e.to_string())?;
            println!("{}", serialize_mdtree(&tree.root));
            Ok(ExitCode::SUCCESS)
        }
        Command::Edit { graph, method, seed, trace, verify } => {
            let g = read_graph(&graph)?;
            let result = match method {
                MethodArg::Bruteforce => brute_force_optimal_edit(&g),
                MethodArg::Exact => exact_edit(&g),
                MethodArg::Greedy => heuristic_edit(&g, TieBreak::Deterministic),
                MethodArg::GreedyRand => heuristic_edit_randomized(&g, seed),
                MethodArg::RandomPair => random_pair_edit(&g, seed),
            }
            .map_err(|e| e.to_string())?;
            if let Some(path) = trace {
                // Heuristic methods do not carry a trace (their flips are not
                // incremental), so recompute one from the final edit set.
                let t = match &result.trace {
                    Some(t) => t.clone(),
                    None => pairwise_merge_sequence(&g, &result.edits, true)
                        .map_err(|e| e.to_string())?,
                };
                fs::write(&path, serialize_trace(&t))
                    .map_err(|e| format!("{}: {e}", path.display()))?;
            }
            if verify {
                let report = verify_edit_result(&g, &result).map_err(|e| e.to_string())?;
                if !report.all_ok() {
                    return Err(format!("verification failed: {report:?}"));
                }
            }
            print!("{}", serialize_edit_set(&result.edits));
            eprintln!("cost {}", result.cost);
            Ok(ExitCode::SUCCESS)
        }
        Command::Gen { n, k, seed, emit_planted } => {
            let (g, planted, flips) =
                generate_perturbed_cograph(n, k, seed).map_err(|e| e.to_string())?;
            if emit_planted {
                println!("# planted {}", serialize_mdtree(planted.root()));
                for (u, v) in flips.iter() {
                    println!("# flip {u} {v}");
                }
            }
            print!("{}", serialize_graph(&g));
            Ok(ExitCode::SUCCESS)
        }
        Command::Bench { config } => {
            let text =
                fs::read_to_string(&config).map_err(|e| format!("{}: {e}", config.display()))?;
            let cfg = parse_bench_config(&text).map_err(|e| e.to_string())?;
            let mut stdout = std::io::stdout();
            let (_, summary) = run_benchmark(&cfg, &mut stdout).map_err(|e| e.to_string())?;
            for (method, mean) in summary.mean_cost {
                eprintln!("mean-cost {} {mean:.3}", method.name());
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
