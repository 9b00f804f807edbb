use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Duration;

use clap::{Parser, ValueEnum};

use miskernel::io::{read_metis, write_kernel, write_mis};
use miskernel::kernelizer::PartitionSource;
use miskernel::oracle::{brute_force_mis, BRUTE_FORCE_LIMIT};
use miskernel::partition::load_partition;
use miskernel::reductions::RuleConfig;
use miskernel::{kernelize, KernelError, KernelizerConfig, Mode};

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ModeArg {
    Quasi,
    Full,
}

/// Kernelize a graph for the maximum independent set problem.
#[derive(Debug, Parser)]
#[command(name = "miskernel", version)]
struct Cli {
    /// Input graph in METIS format.
    #[arg(long)]
    input: PathBuf,
    #[arg(long, default_value_t = 1)]
    threads: usize,
    /// Number of blocks; defaults to the thread count.
    #[arg(long)]
    blocks: Option<usize>,
    /// One block id per line, per input vertex.
    #[arg(long)]
    partition_file: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = ModeArg::Quasi)]
    mode: ModeArg,
    #[arg(long, default_value_t = 0.05)]
    tracking_threshold: f64,
    #[arg(long, default_value_t = 10)]
    sample_interval_ms: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output prefix; defaults to `<input stem>.kernel`.
    #[arg(long)]
    output: Option<PathBuf>,
    /// Solve kernels of at most 40 vertices exactly and write `<prefix>.mis`.
    #[arg(long)]
    solve_exact: bool,
    #[arg(long)]
    no_tracking: bool,
    /// Re-check blockwise unconfined removals with the unrestricted test.
    #[arg(long)]
    audit: bool,
    #[arg(long)]
    disable_degree_one: bool,
    #[arg(long)]
    disable_degree_two_path: bool,
    #[arg(long)]
    disable_isolated_clique: bool,
    #[arg(long)]
    disable_fold: bool,
    #[arg(long)]
    disable_twin: bool,
    #[arg(long)]
    disable_unconfined: bool,
    #[arg(long)]
    disable_diamond: bool,
    #[arg(long)]
    disable_lp: bool,
}

impl Cli {
    fn config(&self) -> Result<KernelizerConfig, KernelError> {
        let rules = RuleConfig {
            degree_one: !self.disable_degree_one,
            degree_two_paths: !self.disable_degree_two_path,
            isolated_clique: !self.disable_isolated_clique,
            fold: !self.disable_fold,
            twin: !self.disable_twin,
            unconfined: !self.disable_unconfined,
            diamond: !self.disable_diamond,
            lp: !self.disable_lp,
            ..RuleConfig::default()
        };
        Ok(KernelizerConfig {
            workers: self.threads,
            blocks: self.blocks.unwrap_or(self.threads),
            tracking: !self.no_tracking,
            tracking_threshold: self.tracking_threshold,
            sample_interval: Duration::from_millis(self.sample_interval_ms),
            mode: match self.mode {
                ModeArg::Quasi => Mode::Quasi,
                ModeArg::Full => Mode::Full,
            },
            seed: self.seed,
            partition: PartitionSource::Internal,
            rules,
            audit: self.audit,
        })
    }

    fn prefix(&self) -> PathBuf {
        self.output.clone().unwrap_or_else(|| self.input.with_extension("kernel"))
    }
}

fn run(cli: &Cli) -> Result<(), KernelError> {
    let mut cfg = cli.config()?;
    cfg.validate()?;
    let prefix = cli.prefix();
    let mut graph_out = prefix.clone().into_os_string();
    graph_out.push(".graph");
    if cli.input.as_os_str() == graph_out {
        return Err(KernelError::Usage(format!("output prefix {} would overwrite the input", prefix.display())));
    }
    let g = read_metis(&cli.input)?;
    if let Some(path) = &cli.partition_file {
        let p = load_partition(path, g.capacity())?;
        cfg.blocks = p.k();
        cfg.partition = PartitionSource::Given(p);
    }
    let result = kernelize(&g, &cfg)?;
    write_kernel(&result, &cfg, &prefix)?;
    eprintln!(
        "kernel: {} vertices, {} edges, offset {} ({} rounds)",
        result.kernel.live_count(),
        result.kernel.edge_count(),
        result.offset,
        result.stats.rounds
    );
    if cli.solve_exact {
        if result.kernel.live_count() > BRUTE_FORCE_LIMIT {
            eprintln!(
                "kernel has {} vertices, more than {BRUTE_FORCE_LIMIT}; not solving",
                result.kernel.live_count()
            );
        } else {
            let k = brute_force_mis(&result.kernel)?;
            let mis = result.lift(&k.witness)?;
            if !miskernel::oracle::validate_independent(&g, &mis)? {
                return Err(KernelError::Invariant("lifted set is not independent".into()));
            }
            let path = write_mis(&mis, &prefix)?;
            eprintln!("independent set of size {} written to {}", mis.len(), path.display());
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 64 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(match e {
                KernelError::MalformedInput(_) => 2,
                KernelError::Invariant(_) => 3,
                KernelError::Usage(_) => 64,
                KernelError::TooLarge { .. } | KernelError::Io(_) => 1,
            })
        }
    }
}
