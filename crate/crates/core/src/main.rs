use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use fairtcim::experiment::{
    cmd_budget, cmd_cover, cmd_gen, cmd_prep_rice, cmd_sweep, GraphSource, RiceOptions, RunConfig,
    RunMode, SummaryRow, SweepBase, SweepSpec,
};
use fairtcim::synth::SynthConfig;
use fairtcim::{load_edge_list, load_groups, validate, CoverMode, Deadline, GroupAssignment};

#[derive(Parser)]
#[command(
    name = "fairtcim",
    version,
    about = "Time-critical influence maximization with group-fair objectives"
)]
struct Cli {
    /// Worker threads (defaults to all cores). Output does not depend on it.
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a two-group synthetic graph.
    Gen {
        #[command(flatten)]
        synth: SynthArgs,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Output edge list.
        #[arg(long)]
        graph: PathBuf,
        /// Output group file.
        #[arg(long)]
        groups: PathBuf,
    },
    /// Greedy seed selection under a budget.
    Budget {
        #[command(flatten)]
        run: RunArgs,
        #[arg(long)]
        budget: usize,
        /// total | concave:log1p | concave:sqrt | concave:pow:<r>
        #[arg(long, default_value = "total")]
        objective: String,
        #[arg(long, value_delimiter = ',')]
        lambda: Option<Vec<f64>>,
        /// Divide group utilities by group size before the concave function.
        #[arg(long)]
        normalize: bool,
    },
    /// Greedy seed selection until a coverage quota is met.
    Cover {
        #[command(flatten)]
        run: RunArgs,
        #[arg(long)]
        quota: f64,
        #[arg(long, value_enum, default_value_t = ModeArg::Total)]
        mode: ModeArg,
    },
    /// Parameter sweep comparing plain and fair methods.
    Sweep {
        /// tau | budget | quota | p_act | group_fraction | het_hom_ratio
        #[arg(long)]
        param: String,
        #[arg(long, value_delimiter = ',', required = true)]
        values: Vec<String>,
        /// Replicate seeds; defaults to 0..replicates.
        #[arg(long, value_delimiter = ',')]
        seeds: Option<Vec<u64>>,
        #[arg(long, default_value_t = 5)]
        replicates: u64,
        /// Use a fixed graph instead of regenerating one per replicate.
        #[arg(long)]
        graph: Option<PathBuf>,
        #[arg(long, requires = "graph")]
        groups: Option<PathBuf>,
        #[arg(long)]
        undirected: bool,
        #[command(flatten)]
        synth: SynthArgs,
        #[arg(long, default_value = "20")]
        tau: String,
        #[arg(long, default_value_t = 200)]
        samples: usize,
        #[arg(long, conflicts_with = "quota")]
        budget: Option<usize>,
        #[arg(long)]
        quota: Option<f64>,
        #[arg(long, default_value_t = 0.0)]
        gamma: f64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Convert the raw Rice-Facebook files to the interchange formats.
    PrepRice {
        #[arg(long)]
        raw_edges: PathBuf,
        #[arg(long)]
        raw_attributes: PathBuf,
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        groups: PathBuf,
        #[arg(long)]
        stats: Option<PathBuf>,
        #[arg(long, default_value_t = 2)]
        age_column: usize,
        #[arg(long, default_value_t = 0.01)]
        p_act: f64,
    },
    /// Print node, group and edge statistics.
    Validate {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        groups: Option<PathBuf>,
        #[arg(long)]
        undirected: bool,
    },
}

#[derive(Args)]
struct SynthArgs {
    #[arg(long, default_value_t = 500)]
    n: usize,
    #[arg(long, default_value_t = 0.7)]
    group_fraction: f64,
    #[arg(long, default_value_t = 0.025)]
    p_hom: f64,
    #[arg(long, default_value_t = 0.001)]
    p_het: f64,
    #[arg(long, default_value_t = 0.05)]
    p_act: f64,
}

impl SynthArgs {
    fn config(&self, seed: u64) -> SynthConfig {
        SynthConfig {
            n: self.n,
            group_fraction: self.group_fraction,
            p_hom: self.p_hom,
            p_het: self.p_het,
            p_act: self.p_act,
            seed,
        }
    }
}

#[derive(Args)]
struct RunArgs {
    #[arg(long)]
    graph: PathBuf,
    #[arg(long)]
    groups: Option<PathBuf>,
    /// Treat each edge line as an undirected edge.
    #[arg(long)]
    undirected: bool,
    /// Deadline in steps, or `inf`.
    #[arg(long, default_value = "20")]
    tau: String,
    #[arg(long, default_value_t = 200)]
    samples: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Disparity weight for the reported penalized objectives.
    #[arg(long, default_value_t = 0.0)]
    gamma: f64,
    /// Per-iteration CSV.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Summary CSV.
    #[arg(long)]
    summary: Option<PathBuf>,
    /// Record wall time in the summary.
    #[arg(long)]
    timing: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Total,
    PerGroup,
}

impl RunArgs {
    fn config(self, mode: RunMode) -> Result<RunConfig> {
        Ok(RunConfig {
            graph: self.graph,
            groups: self.groups,
            undirected: self.undirected,
            deadline: self.tau.parse()?,
            samples: self.samples,
            seed: self.seed,
            mode,
            gamma: self.gamma,
            out: self.out,
            summary: self.summary,
            timing: self.timing,
        })
    }
}

fn print_summary(row: &SummaryRow) {
    print!("{}", row.csv());
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Gen {
            synth,
            seed,
            graph,
            groups,
        } => {
            let report = cmd_gen(&synth.config(seed), &graph, &groups)?;
            print!("{report}");
        }
        Command::Budget {
            run,
            budget,
            objective,
            lambda,
            normalize,
        } => {
            let config = run.config(RunMode::Budget {
                budget,
                objective,
                lambda,
                normalize,
            })?;
            print_summary(&cmd_budget(&config)?.summary);
        }
        Command::Cover { run, quota, mode } => {
            let mode = match mode {
                ModeArg::Total => CoverMode::Total,
                ModeArg::PerGroup => CoverMode::PerGroup,
            };
            let config = run.config(RunMode::Cover { quota, mode })?;
            print_summary(&cmd_cover(&config)?.summary);
        }
        Command::Sweep {
            param,
            values,
            seeds,
            replicates,
            graph,
            groups,
            undirected,
            synth,
            tau,
            samples,
            budget,
            quota,
            gamma,
            out,
        } => {
            let source = match graph {
                Some(graph) => GraphSource::Files {
                    graph,
                    groups,
                    undirected,
                },
                None => GraphSource::Synthetic(synth.config(0)),
            };
            let budget = match (budget, quota) {
                (None, None) => Some(30),
                (b, _) => b,
            };
            let base = SweepBase {
                source,
                deadline: tau.parse::<Deadline>()?,
                samples,
                budget,
                quota,
                gamma,
            };
            let spec = SweepSpec {
                param: param.parse()?,
                values,
                replicates: seeds.unwrap_or_else(|| (0..replicates).collect()),
            };
            let rows = cmd_sweep(&base, &spec, &out)?;
            eprintln!("wrote {} rows to {}", rows.len(), out.display());
        }
        Command::PrepRice {
            raw_edges,
            raw_attributes,
            graph,
            groups,
            stats,
            age_column,
            p_act,
        } => {
            let options = RiceOptions { age_column, p_act };
            let prep = cmd_prep_rice(
                &raw_edges,
                &raw_attributes,
                &graph,
                &groups,
                stats.as_deref(),
                &options,
            )?;
            print!("{}", prep.report);
        }
        Command::Validate {
            graph,
            groups,
            undirected,
        } => {
            let g = load_edge_list(&graph, !undirected)?;
            let groups = match groups {
                Some(path) => load_groups(path, g.num_nodes())?,
                None => GroupAssignment::single(g.num_nodes())?,
            };
            print!("{}", validate(&g, &groups)?);
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let result = (|| -> Result<()> {
        if let Some(threads) = cli.threads {
            if threads == 0 {
                bail!("--threads must be at least 1");
            }
            rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build_global()
                .context("configuring thread pool")?;
        }
        run(cli)
    })();
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
