use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use eulerpath::cycles::decompose_into_cycles;
use eulerpath::graph::io::{parse_edge_list, write_edge_list};
use eulerpath::lab::{
    generate, oracle_longest_cycle, oracle_longest_path_from, oracle_max_density_eulerian_subgraph, plot_csv,
    run_experiment, to_csv, verify_graph, ExperimentConfig, GeneratorSpec, DEFAULT_CYCLE_CAP, DEFAULT_ORACLE_CAP,
};
use eulerpath::{long_path_from, Digraph, PipelineConfig};

#[derive(Parser)]
#[command(name = "eulerpath", version, about = "Long directed paths in Eulerian digraphs")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Write a generated graph as an edge list.
    Gen {
        /// e.g. `blowup(3,2)` or `random_cycle_union(50,40,6,1)`
        spec: String,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Print a cycle decomposition, one cycle per line.
    Decompose {
        #[arg(long)]
        input: PathBuf,
    },
    /// Run the pipeline from one vertex.
    Longpath {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        start: usize,
        #[arg(long)]
        c: Option<f64>,
        #[arg(long)]
        eps: Option<f64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Extra `key = value` pipeline settings.
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        emit_trace: Option<PathBuf>,
    },
    /// Exact answers on small graphs.
    Oracle {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = OracleKind::Path)]
        kind: OracleKind,
        #[arg(long, default_value_t = 0)]
        start: usize,
        #[arg(long, default_value_t = DEFAULT_ORACLE_CAP)]
        cap: usize,
    },
    /// Run an experiment config and write CSV.
    Experiment {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Plot an experiment CSV as SVG.
    Plot {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        output: PathBuf,
        #[arg(long, default_value_t = 0.01)]
        c: f64,
        #[arg(long, default_value_t = 0.025)]
        eps: f64,
    },
    /// Run the invariant suite on a graph file.
    Verify {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum OracleKind {
    Path,
    Cycle,
    Density,
}

/// Exit status 2: bad input of any kind.
struct Invalid(String);

impl<E: std::fmt::Display> From<E> for Invalid {
    fn from(e: E) -> Self {
        Invalid(e.to_string())
    }
}

fn read_graph(path: &PathBuf) -> Result<Digraph, Invalid> {
    let text = fs::read_to_string(path).map_err(|e| Invalid(format!("{}: {e}", path.display())))?;
    Ok(parse_edge_list(&text)?)
}

fn emit(output: Option<&PathBuf>, text: &str) -> Result<(), Invalid> {
    match output {
        Some(p) => fs::write(p, text).map_err(|e| Invalid(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode, Invalid> {
    match cli.cmd {
        Cmd::Gen { spec, output } => {
            let spec: GeneratorSpec = spec.parse()?;
            emit(output.as_ref(), &write_edge_list(&generate(&spec)?))?;
        }
        Cmd::Decompose { input } => {
            let g = read_graph(&input)?;
            print!("{}", decompose_into_cycles(&g)?.to_text());
        }
        Cmd::Longpath {
            input,
            start,
            c,
            eps,
            seed,
            config,
            emit_trace,
        } => {
            let g = read_graph(&input)?;
            let mut cfg = match config {
                Some(p) => PipelineConfig::parse(&fs::read_to_string(&p)?)?,
                None => PipelineConfig::default(),
            };
            if let Some(c) = c {
                cfg.c = c;
            }
            if let Some(e) = eps {
                cfg.eps = e;
            }
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let o = long_path_from(&g, start, &cfg, &mut rng)?;
            let path: Vec<String> = o.path.vertices.iter().map(|v| v.to_string()).collect();
            println!("path={}", path.join(","));
            println!("length={}", o.path.len());
            println!("d={:.6}", o.d);
            println!("phi={:.6}", o.phi);
            println!("target={}", o.target);
            println!("certified={}", o.certified);
            println!("truncated={}", o.truncated);
            if let Some(p) = emit_trace {
                fs::write(&p, o.trace.to_text()).map_err(|e| Invalid(format!("{}: {e}", p.display())))?;
            }
        }
        Cmd::Oracle { input, kind, start, cap } => {
            let g = read_graph(&input)?;
            match kind {
                OracleKind::Path => println!("{}", oracle_longest_path_from(&g, start, cap)?),
                OracleKind::Cycle => println!("{}", oracle_longest_cycle(&g, cap)?),
                OracleKind::Density => {
                    let (h, dens) = oracle_max_density_eulerian_subgraph(&g, cap, DEFAULT_CYCLE_CAP)?;
                    println!("density={dens}");
                    print!("{}", write_edge_list(&h.without_isolated()));
                }
            }
        }
        Cmd::Experiment { config, output } => {
            let cfg = ExperimentConfig::parse(&fs::read_to_string(&config)?)?;
            emit(output.as_ref(), &to_csv(&run_experiment(&cfg)?))?;
        }
        Cmd::Plot { input, output, c, eps } => {
            let n = plot_csv(&fs::read_to_string(&input)?, &output, c, eps)?;
            eprintln!("plotted {n} points to {}", output.display());
        }
        Cmd::Verify { input, seed } => {
            let g = read_graph(&input)?;
            let report = verify_graph(&g, &PipelineConfig::default(), seed);
            print!("{}", report.to_text());
            if !report.all_ok() {
                return Ok(ExitCode::from(3));
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(Invalid(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
