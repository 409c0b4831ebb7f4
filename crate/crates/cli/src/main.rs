//! Experiment CLI: embed a corpus, run cross-validated multi-label
//! experiments, compare runs with rank statistics, and generate synthetic
//! fixtures.
//!
//! Exit codes: 0 success, 1 usage error, 2 data error, 3 internal error.
//! `ICDLAB_THREADS` caps the worker pool.

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use icdlab_core::experiment::{
    cmd_compare, cmd_embed, cmd_run, parse_config_file, ExperimentConfig,
};
use icdlab_core::synth::{write_fixture, SynthConfig};

#[derive(Parser)]
#[command(name = "icdlab", version, about = "Multi-label medical-code prediction experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compose document embeddings and write the admission x embedding matrix
    Embed(RunArgs),
    /// Run a cross-validated experiment and write report.json + per-label F1
    Run(RunArgs),
    /// Compare run reports with the Friedman test and a Nemenyi CD plot
    Compare {
        /// Significance level (0.05 or 0.10)
        #[arg(long, default_value_t = 0.05)]
        alpha: f64,
        /// Output directory for comparison.json, scoretable.csv, cd_plot.svg
        #[arg(long)]
        out: PathBuf,
        /// Paths to at least two report.json files from `icdlab run`
        #[arg(required = true, num_args = 2..)]
        reports: Vec<PathBuf>,
    },
    /// Generate a synthetic corpus, labels and vector file
    Synth {
        /// Output directory
        #[arg(long)]
        out: PathBuf,
        /// Number of admissions
        #[arg(long, default_value_t = 100)]
        n: usize,
        /// Number of labels (18 covers every top-level group)
        #[arg(long, default_value_t = 18)]
        labels: usize,
        /// Word-vector dimension
        #[arg(long, default_value_t = 25)]
        dim: usize,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Planted signal strength in [0, 1]; 0 makes text independent of labels
        #[arg(long, default_value_t = 1.0)]
        signal: f64,
    },
}

/// Flags shared by `embed` and `run`; every flag overrides the config file.
#[derive(Args)]
struct RunArgs {
    /// Flat key=value config file
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    corpus: Option<PathBuf>,
    #[arg(long)]
    labels: Option<PathBuf>,
    #[arg(long)]
    vectors: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    folds: Option<usize>,
    /// top18, sub155 or top50codes
    #[arg(long = "label-mode")]
    label_mode: Option<String>,
    /// sum_norm, section_concat or stat_concat
    #[arg(long)]
    composition: Option<String>,
    /// br, cc, ecc(I) or mlknn(k,s)
    #[arg(long)]
    strategy: Option<String>,
    /// Output directory
    #[arg(long)]
    out: Option<PathBuf>,
}

impl RunArgs {
    fn resolve(&self) -> Result<ExperimentConfig, icdlab_core::Error> {
        let mut pairs: BTreeMap<String, String> = match &self.config {
            Some(path) => parse_config_file(path)?,
            None => BTreeMap::new(),
        };
        let mut set = |key: &str, value: Option<String>| {
            if let Some(v) = value {
                pairs.insert(key.to_string(), v);
            }
        };
        set("corpus", self.corpus.as_ref().map(|p| p.display().to_string()));
        set("labels", self.labels.as_ref().map(|p| p.display().to_string()));
        set("vectors", self.vectors.as_ref().map(|p| p.display().to_string()));
        set("seed", self.seed.map(|s| s.to_string()));
        set("folds", self.folds.map(|f| f.to_string()));
        set("label_mode", self.label_mode.clone());
        set("composition", self.composition.clone());
        set("strategy", self.strategy.clone());
        set("out", self.out.as_ref().map(|p| p.display().to_string()));
        ExperimentConfig::from_pairs(&pairs)
    }
}

fn configure_threads() {
    if let Ok(value) = std::env::var("ICDLAB_THREADS") {
        if let Ok(threads) = value.parse::<usize>() {
            if threads > 0 {
                let _ = rayon::ThreadPoolBuilder::new()
                    .num_threads(threads)
                    .build_global();
            }
        }
    }
}

fn dispatch(command: Command) -> Result<(), icdlab_core::Error> {
    match command {
        Command::Embed(args) => {
            let config = args.resolve()?;
            let path = cmd_embed(&config)?;
            println!("embeddings written to {}", path.display());
        }
        Command::Run(args) => {
            let config = args.resolve()?;
            let report = cmd_run(&config)?;
            println!(
                "run {} ({}) finished: micro F1 {:.4}, macro F1 {:.4} over {} labels",
                report.config_hash,
                report.strategy,
                report.micro_f1,
                report.macro_f1,
                report.labels.len()
            );
            for warning in &report.warnings {
                eprintln!("warning: {warning}");
            }
            println!(
                "report written to {}",
                config.output_dir.join("report.json").display()
            );
        }
        Command::Compare {
            alpha,
            out,
            reports,
        } => {
            let compare = cmd_compare(&reports, alpha, &out)?;
            println!(
                "friedman chi2 {:.4}{}: {}",
                compare.chi2,
                match compare.f_stat {
                    Some(f) => format!(", corrected F {f:.4}"),
                    None => ", correction singular (chi-square fallback)".to_string(),
                },
                if compare.reject {
                    "methods differ significantly"
                } else {
                    "no significant difference"
                }
            );
            println!("critical difference {:.4}", compare.critical_difference);
            for (a, b) in &compare.significant_pairs {
                println!("  {a} vs {b}: rank gap exceeds CD");
            }
            println!("outputs written to {}", out.display());
        }
        Command::Synth {
            out,
            n,
            labels,
            dim,
            seed,
            signal,
        } => {
            let cfg = SynthConfig {
                n_admissions: n,
                n_labels: labels,
                dimension: dim,
                seed,
                signal,
            };
            let paths = write_fixture(&cfg, &out)?;
            let conf_path = out.join("run.conf");
            let conf = format!(
                "corpus={}\nlabels={}\nvectors={}\nout={}\nlabel_mode=top18\n\
                 composition=sum_norm\nstrategy=br\nfolds=10\nseed={seed}\n",
                paths.corpus.display(),
                paths.labels.display(),
                paths.vectors.display(),
                out.join("run-out").display()
            );
            std::fs::write(&conf_path, conf).map_err(|e| icdlab_core::Error::Io {
                path: conf_path.clone(),
                source: e,
            })?;
            println!("fixture written to {}", out.display());
            println!("starter config at {}", conf_path.display());
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let code = if err.use_stderr() { 1 } else { 0 };
            let _ = err.print();
            return ExitCode::from(code);
        }
    };
    configure_threads();
    match dispatch(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code() as u8)
        }
    }
}
