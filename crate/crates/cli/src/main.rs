//! `imatch`: hash images, rank candidates, run benchmark sweeps and rebuild reports.
//!
//! Exit codes: 0 success, 1 usage error, 2 data error, 3 internal error.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use imatch_core::bench::{
    generate_configs, rank_query, regenerate_report, run_sweep, workers_from_env, OutputLock, RunConfig,
    RunOptions, SweepGrid,
};
use imatch_core::fuzzy_hash::{hash_image, tlsh_hash, HashAlgorithm};
use imatch_core::imaging::{load_image, to_grayscale};
use imatch_core::model::{load_ground_truth, Dataset, DatasetEntry};
use imatch_core::Error;
use log::info;

#[derive(Debug, Parser)]
#[command(name = "imatch", version, about = "Benchmark image-matching algorithms on screenshot corpora")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print `<id> <algo> <hex>` for each image.
    Hash {
        #[arg(required = true)]
        images: Vec<PathBuf>,
        /// Hash token (AHASH, DHASH_H, DHASH_V, PHASH, PHASH_SIMPLE, WHASH, TLSH) or `all`
        /// for the six perceptual hashes.
        #[arg(long, default_value = "all")]
        algo: String,
    },
    /// Rank the images of a directory against a query, best first.
    Match {
        query: PathBuf,
        candidates_dir: PathBuf,
        /// Run configuration JSON.
        #[arg(long)]
        config: PathBuf,
        #[arg(short, long, default_value_t = 3)]
        k: usize,
    },
    /// Run a configuration sweep over a dataset directory.
    Bench {
        dataset_dir: PathBuf,
        /// Clique ground truth; without it no report is written.
        #[arg(long)]
        ground_truth: Option<PathBuf>,
        /// Sweep grid JSON; defaults to the published grid.
        #[arg(long)]
        sweep: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
        /// Write side-by-side images of every query with its candidates.
        #[arg(long)]
        export_pairs: bool,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Rebuild report/ from the graphs and stats stored in an output directory.
    Report { out_dir: PathBuf },
}

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] Error),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Core(e) => match e {
                Error::Other(_) => 3,
                _ => 2,
            },
        }
    }
}

fn read_file(path: &Path) -> Result<Vec<u8>, CliError> {
    std::fs::read(path).map_err(|source| {
        Error::Io {
            path: path.to_path_buf(),
            source,
        }
        .into()
    })
}

fn cmd_hash(images: &[PathBuf], algo: &str) -> Result<(), CliError> {
    let tlsh = algo.eq_ignore_ascii_case("TLSH");
    let algos: Vec<HashAlgorithm> = if algo.eq_ignore_ascii_case("all") {
        HashAlgorithm::ALL.to_vec()
    } else if tlsh {
        Vec::new()
    } else {
        vec![algo
            .parse()
            .map_err(|_| CliError::Usage(format!("unknown hash algorithm `{algo}`")))?]
    };
    for path in images {
        let entry = DatasetEntry::from_path(path)?;
        let gray = to_grayscale(&load_image(&entry.path)?);
        for &a in &algos {
            println!("{} {} {}", entry.id, a.token(), hash_image(&gray, a).to_hex());
        }
        if tlsh {
            println!("{} TLSH {}", entry.id, tlsh_hash(gray.pixels())?.to_hex());
        }
    }
    Ok(())
}

fn cmd_match(query: &Path, candidates_dir: &Path, config: &Path, k: usize) -> Result<(), CliError> {
    if k == 0 {
        return Err(CliError::Usage("-k must be at least 1".into()));
    }
    let cfg = RunConfig::from_json(&read_file(config)?)?;
    let query = DatasetEntry::from_path(query)?;
    let candidates = Dataset::scan(candidates_dir)?;
    let opts = RunOptions {
        workers: workers_from_env(),
        top_k: k,
    };
    for (id, score) in rank_query(&cfg, &query, &candidates, &opts)? {
        println!("{id} {score:.6}");
    }
    Ok(())
}

fn cmd_bench(
    dataset_dir: &Path,
    ground_truth: Option<&Path>,
    sweep: Option<&Path>,
    out: &Path,
    export_pairs: bool,
    seed: Option<u64>,
) -> Result<(), CliError> {
    let mut grid = match sweep {
        Some(path) => SweepGrid::from_json(&read_file(path)?)?,
        None => SweepGrid::published(),
    };
    grid.export_pairs |= export_pairs;
    if let Some(seed) = seed {
        grid.seed = seed;
    }
    let mut configs = generate_configs(&grid)?;
    let dataset = Dataset::scan(dataset_dir)?;
    let gt = ground_truth.map(load_ground_truth).transpose()?;
    for cfg in &mut configs {
        cfg.dataset = Some(dataset_dir.to_path_buf());
        cfg.ground_truth = ground_truth.map(Path::to_path_buf);
    }
    let _lock = OutputLock::acquire(out)?;
    let opts = RunOptions {
        workers: workers_from_env(),
        ..RunOptions::default()
    };
    let entries = run_sweep(&configs, &dataset, gt.as_ref(), out, &opts)?;
    for e in &entries {
        match e.stats.raw_tp {
            Some(tp) => println!("{} {tp:.5}", e.config.canonical_name()),
            None => println!("{}", e.config.canonical_name()),
        }
    }
    info!("wrote {} configurations to {}", entries.len(), out.display());
    Ok(())
}

fn cmd_report(out_dir: &Path) -> Result<(), CliError> {
    if !out_dir.is_dir() {
        return Err(Error::InvalidInput(format!("{} is not a directory", out_dir.display())).into());
    }
    let _lock = OutputLock::acquire(out_dir)?;
    let bundle = regenerate_report(out_dir)?;
    if let Some(text) = bundle.get(Path::new("report/overview.txt")) {
        print!("{}", String::from_utf8_lossy(text));
    }
    Ok(())
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Hash { images, algo } => cmd_hash(&images, &algo),
        Command::Match {
            query,
            candidates_dir,
            config,
            k,
        } => cmd_match(&query, &candidates_dir, &config, k),
        Command::Bench {
            dataset_dir,
            ground_truth,
            sweep,
            out,
            export_pairs,
            seed,
        } => cmd_bench(
            &dataset_dir,
            ground_truth.as_deref(),
            sweep.as_deref(),
            &out,
            export_pairs,
            seed,
        ),
        Command::Report { out_dir } => cmd_report(&out_dir),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match std::panic::catch_unwind(|| run(cli)) {
        Ok(Ok(())) => ExitCode::SUCCESS,
        Ok(Err(e)) => {
            eprintln!("imatch: {e}");
            ExitCode::from(e.exit_code())
        }
        Err(_) => ExitCode::from(3),
    }
}
