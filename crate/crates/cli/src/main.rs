//! `ipsummary`: summarize IPv4 address sets into CIDR prefix lists,
//! simulate the two-level directory, or dump the underlying trie.
//!
//! Exit codes: 0 on success, 2 on usage or input errors. Errors go to
//! stderr; all requested output goes to stdout or `--output`.

use std::fmt;
use std::fs;
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};

use ipsummary::report::{
    render_simulate, render_summarize, MergedRecord, OutputFormat, RunRecord, SimulateReport,
    SimulateRun,
};
use ipsummary::{
    decrease, load_manifest, load_registry_file, publish_and_merge, summarize, summarize_single,
    PatriciaTree, SummaryConfig,
};

#[derive(Parser)]
#[command(
    name = "ipsummary",
    version,
    about = "Summarize IPv4 address sets into CIDR prefix lists"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Summarize one address file into a prefix list with statistics
    Summarize(SummarizeArgs),
    /// Run the two-level directory simulation over a registry manifest
    Simulate(SimulateArgs),
    /// Print the trie built from an address file
    Tree(TreeArgs),
}

/// Threshold selection shared by summarize and simulate. Granularity
/// picks the built-in threshold pair; the expert flags bypass it and
/// must be given together.
#[derive(Args)]
struct ThresholdArgs {
    /// Granularity level, 0 (finest) to 3 (coarsest)
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u8).range(0..=3))]
    granularity: u8,

    /// Minimum subnet mask: emitted subnets must be strictly longer
    #[arg(long = "min-mask", default_value_t = 8, value_parser = clap::value_parser!(u8).range(0..=32))]
    min_mask: u8,

    /// Expert distance threshold in bits (bypasses --granularity; needs --density)
    #[arg(long, requires = "density", value_parser = clap::value_parser!(u8).range(1..=32))]
    distance: Option<u8>,

    /// Expert density threshold in (0, 1] (bypasses --granularity; needs --distance)
    #[arg(long, requires = "distance")]
    density: Option<f64>,
}

impl ThresholdArgs {
    fn to_config(&self) -> Result<SummaryConfig, CliError> {
        let config = match (self.distance, self.density) {
            (Some(dist), Some(dens)) => SummaryConfig::from_thresholds(dist, dens, self.min_mask)?,
            // clap's `requires` rejects one flag without the other
            _ => SummaryConfig::from_granularity(self.granularity, self.min_mask)?,
        };
        Ok(config)
    }
}

#[derive(Args)]
struct OutputArgs {
    /// Output format
    #[arg(long, default_value = "table", value_parser = OutputFormat::from_str)]
    format: OutputFormat,

    /// Write to this file instead of stdout
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct SummarizeArgs {
    /// Address file: one dotted-quad per line, '#' starts a comment
    input: PathBuf,

    #[command(flatten)]
    thresholds: ThresholdArgs,

    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Mode {
    Distributed,
    Single,
    Both,
}

impl FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "distributed" => Ok(Mode::Distributed),
            "single" => Ok(Mode::Single),
            "both" => Ok(Mode::Both),
            other => Err(format!(
                "unknown mode '{other}': expected distributed, single, or both"
            )),
        }
    }
}

#[derive(Args)]
struct SimulateArgs {
    /// Registry manifest: 'name=path' per line, paths relative to it
    manifest: PathBuf,

    /// Which directory views to compute
    #[arg(long, default_value = "both", value_parser = Mode::from_str)]
    mode: Mode,

    /// Run every granularity 0-3 and append a comparison table
    #[arg(long, conflicts_with_all = ["granularity", "distance", "density"])]
    sweep: bool,

    /// Cap the number of worker threads (default: all cores)
    #[arg(long, value_parser = clap::value_parser!(usize))]
    jobs: Option<usize>,

    #[command(flatten)]
    thresholds: ThresholdArgs,

    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Args)]
struct TreeArgs {
    /// Address file: one dotted-quad per line, '#' starts a comment
    input: PathBuf,

    /// Write to this file instead of stdout
    #[arg(long)]
    output: Option<PathBuf>,
}

/// One error type so every failure path prints the same way and maps
/// to exit code 2.
#[derive(Debug)]
struct CliError(String);

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl<E: std::error::Error> From<E> for CliError {
    fn from(err: E) -> Self {
        CliError(err.to_string())
    }
}

fn main() {
    let cli = Cli::parse();
    if let Err(err) = run(cli) {
        eprintln!("error: {err}");
        std::process::exit(2);
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Summarize(args) => {
            let text = cmd_summarize(&args)?;
            emit(args.out.output.as_deref(), &text)
        }
        Command::Simulate(args) => {
            let text = cmd_simulate(&args)?;
            emit(args.out.output.as_deref(), &text)
        }
        Command::Tree(args) => {
            let text = cmd_tree(&args)?;
            emit(args.output.as_deref(), &text)
        }
    }
}

fn emit(path: Option<&std::path::Path>, text: &str) -> Result<(), CliError> {
    match path {
        Some(path) => {
            fs::write(path, text).map_err(|e| CliError(format!("{}: {e}", path.display())))
        }
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn cmd_summarize(args: &SummarizeArgs) -> Result<String, CliError> {
    let config = args.thresholds.to_config()?;
    let registry = load_registry_file(&args.input)?;
    let tree = PatriciaTree::from_addresses(registry.addresses().iter().copied());
    let result = summarize(&tree, &config);
    let record = RunRecord::from_summary(registry.name(), &result, &config);
    Ok(render_summarize(&record, args.out.format))
}

fn cmd_simulate(args: &SimulateArgs) -> Result<String, CliError> {
    let registries = load_manifest(&args.manifest)?;
    let configs: Vec<SummaryConfig> = if args.sweep {
        (0..=3)
            .map(|g| SummaryConfig::from_granularity(g, args.thresholds.min_mask))
            .collect::<Result<_, _>>()?
    } else {
        vec![args.thresholds.to_config()?]
    };

    let simulate_all = || -> Result<Vec<SimulateRun>, CliError> {
        configs
            .iter()
            .map(|config| {
                let dist = match args.mode {
                    Mode::Distributed | Mode::Both => {
                        Some(publish_and_merge(&registries, config)?)
                    }
                    Mode::Single => None,
                };
                let single = match args.mode {
                    Mode::Single | Mode::Both => Some(summarize_single(&registries, config)?),
                    Mode::Distributed => None,
                };
                let dec = match (&dist, &single) {
                    (Some(d), Some(s)) => decrease(d, s),
                    _ => None,
                };
                Ok(SimulateRun {
                    granularity: config.granularity(),
                    distributed: dist.map(|m| MergedRecord::from_merged(&m, config)),
                    single: single.map(|m| MergedRecord::from_merged(&m, config)),
                    decrease: dec,
                })
            })
            .collect()
    };

    // summarization order is fixed by the manifest, so the thread cap
    // changes scheduling only, never output
    let runs = match args.jobs {
        Some(jobs) => rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build()
            .map_err(|e| CliError(e.to_string()))?
            .install(simulate_all),
        None => simulate_all(),
    }?;

    let report = SimulateReport {
        min_subnet_mask: args.thresholds.min_mask,
        runs,
    };
    Ok(render_simulate(&report, args.out.format))
}

fn cmd_tree(args: &TreeArgs) -> Result<String, CliError> {
    let registry = load_registry_file(&args.input)?;
    let tree = PatriciaTree::from_addresses(registry.addresses().iter().copied());
    Ok(tree.dump())
}
