//! Command-line front end: argument definitions and subcommand dispatch.
//!
//! The `dti` binary is a thin wrapper over [`run`].

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::dataset::{dataset_stats, validate_dataset, DatasetStats, DtiDataset};
use crate::ensemble::{EnsembleConfig, SamplingStrategy};
use crate::error::{Error, Result};
use crate::eval::{
    rank_novel_with, run_cv, tune_hyperparameters, write_novel_csv, CvPlan, LearnerSpec, Method,
    ParamChoice, ParamGrid,
};
use crate::imbalance::{imbalance_report, ImbalanceReport};
use crate::io::{load_dataset_from, write_labeled_matrix_file, DatasetPaths, Orientation};
use crate::model::{KnnParams, Setting};
use crate::wknnir::build_recovery;

#[derive(Debug, Parser)]
#[command(
    name = "dti",
    version,
    about = "Weighted nearest-neighbor drug-target interaction prediction"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check a dataset and list its findings.
    Validate(DataArgs),
    /// Size, sparsity and local imbalance as JSON.
    Stats(StatsArgs),
    /// Write the recovered interaction matrices as TSV.
    Recover(RecoverArgs),
    /// Repeated cross-validation; per-fold AUPR as CSV.
    Cv(RunArgs),
    /// Grid search over (k, eta); JSON.
    Tune(RunArgs),
    /// Highest-scoring unobserved pairs from held-out predictions; CSV.
    RankNovel(RankArgs),
}

#[derive(Debug, Clone, Args)]
pub struct DataArgs {
    /// Interaction matrix (TSV with row and column ids).
    #[arg(long, requires_all = ["drug_sim", "target_sim"], conflicts_with = "dataset")]
    pub interactions: Option<PathBuf>,
    /// Drug similarity matrix.
    #[arg(long)]
    pub drug_sim: Option<PathBuf>,
    /// Target similarity matrix.
    #[arg(long)]
    pub target_sim: Option<PathBuf>,
    /// Gold-standard dataset name (nr, ic, gpcr, e) looked up in --data-dir.
    #[arg(long, required_unless_present = "interactions")]
    pub dataset: Option<String>,
    /// Directory holding the gold-standard files.
    #[arg(long, env = "DTI_DATA_DIR", default_value = ".")]
    pub data_dir: PathBuf,
    /// Row convention of the interaction file. Defaults to drug-rows for
    /// explicit paths and target-rows for gold-standard files.
    #[arg(long, value_enum)]
    pub orientation: Option<Orientation>,
}

impl DataArgs {
    pub fn paths(&self) -> (DatasetPaths, Orientation) {
        match (&self.interactions, &self.dataset) {
            (Some(y), _) => (
                DatasetPaths {
                    interactions: y.clone(),
                    drug_sim: self.drug_sim.clone().unwrap_or_default(),
                    target_sim: self.target_sim.clone().unwrap_or_default(),
                },
                self.orientation.unwrap_or(Orientation::DrugRows),
            ),
            (None, Some(name)) => (
                DatasetPaths::gold_standard(&self.data_dir, name),
                self.orientation.unwrap_or(Orientation::TargetRows),
            ),
            (None, None) => unreachable!("clap requires one of the two"),
        }
    }

    pub fn load(&self) -> Result<DtiDataset> {
        let (paths, orientation) = self.paths();
        load_dataset_from(&paths, orientation)
    }
}

#[derive(Debug, Clone, Args)]
pub struct StatsArgs {
    #[command(flatten)]
    pub data: DataArgs,
    /// Neighborhood size for local imbalance.
    #[arg(long, default_value_t = 5)]
    pub k: usize,
    /// Output file (default: stdout).
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct RecoverArgs {
    #[command(flatten)]
    pub data: DataArgs,
    #[arg(long, default_value_t = 5)]
    pub k: usize,
    #[arg(long, default_value_t = 0.9)]
    pub eta: f64,
    /// Directory receiving y_drug.tsv, y_target.tsv and y_joint.tsv
    /// (drug rows).
    #[arg(long)]
    pub output_dir: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum EnsembleArg {
    None,
    Ers,
    Egs,
    Els,
}

#[derive(Debug, Clone, Args)]
pub struct LearnerArgs {
    #[arg(long, value_enum, default_value_t = Method::Wknnir)]
    pub method: Method,
    /// Fixed neighborhood size; with --eta disables tuning.
    #[arg(long)]
    pub k: Option<usize>,
    /// Fixed rank decay; with --k disables tuning.
    #[arg(long)]
    pub eta: Option<f64>,
    /// Candidate k values for tuning.
    #[arg(long, value_delimiter = ',', default_values_t = [1usize, 2, 3, 5, 7, 9])]
    pub grid_k: Vec<usize>,
    /// Candidate eta values for tuning.
    #[arg(long, value_delimiter = ',', default_values_t = [0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0])]
    pub grid_eta: Vec<f64>,
    /// Inner-CV folds for tuning (default: 5 for S2/S3, 2 for S4; 10 and 3
    /// for the nr gold-standard set).
    #[arg(long)]
    pub inner_folds: Option<usize>,
    #[arg(long, value_enum, default_value_t = EnsembleArg::Els)]
    pub ensemble: EnsembleArg,
    /// Ensemble members.
    #[arg(long, default_value_t = 30)]
    pub q: usize,
    /// Fraction of drugs and targets per member.
    #[arg(long, default_value_t = 0.95)]
    pub ratio: f64,
    /// Smoothing of the sampling probabilities.
    #[arg(long, default_value_t = 0.1)]
    pub sigma: f64,
    /// Neighborhood size for local-imbalance sampling.
    #[arg(long, default_value_t = 5)]
    pub li_k: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

impl LearnerArgs {
    fn grid(&self) -> ParamGrid {
        ParamGrid {
            k: self.grid_k.clone(),
            eta: self.grid_eta.clone(),
        }
    }

    pub fn spec(&self) -> Result<LearnerSpec> {
        let params = match (self.k, self.eta) {
            (Some(k), Some(eta)) => ParamChoice::Fixed(KnnParams::new(k, eta)?),
            _ => {
                self.grid().cells()?;
                ParamChoice::Tuned {
                    grid: self.grid(),
                    inner_folds: self.inner_folds,
                }
            }
        };
        let strategy = match self.ensemble {
            EnsembleArg::None => None,
            EnsembleArg::Ers => Some(SamplingStrategy::uniform()),
            EnsembleArg::Egs => Some(SamplingStrategy::global(self.sigma)),
            EnsembleArg::Els => Some(SamplingStrategy::local(self.sigma, self.li_k)),
        };
        let ensemble = strategy
            .map(|strategy| {
                let cfg = EnsembleConfig {
                    q: self.q,
                    ratio: self.ratio,
                    strategy,
                    seed: self.seed,
                };
                cfg.validate().map(|_| cfg)
            })
            .transpose()?;
        Ok(LearnerSpec {
            method: self.method,
            params,
            ensemble,
        })
    }
}

#[derive(Debug, Clone, Args)]
pub struct RunArgs {
    #[command(flatten)]
    pub data: DataArgs,
    #[command(flatten)]
    pub learner: LearnerArgs,
    /// Prediction setting: S2 (new drugs), S3 (new targets), S4 (both).
    #[arg(long, default_value = "S2")]
    pub setting: Setting,
    /// Folds per partitioned side (default: 10 for S2/S3, 3 for S4).
    #[arg(long)]
    pub folds: Option<usize>,
    #[arg(long, default_value_t = 2)]
    pub repetitions: usize,
    /// Output file (default: stdout).
    #[arg(long)]
    pub output: Option<PathBuf>,
}

impl RunArgs {
    /// The small nuclear-receptor set uses finer inner CV by default.
    pub fn spec(&self) -> Result<LearnerSpec> {
        let mut spec = self.learner.spec()?;
        let is_nr = self.data.interactions.is_none()
            && self
                .data
                .dataset
                .as_deref()
                .is_some_and(|d| d.eq_ignore_ascii_case("nr"));
        if let ParamChoice::Tuned {
            inner_folds: folds @ None,
            ..
        } = &mut spec.params
        {
            if is_nr {
                *folds = Some(nr_inner_folds(self.setting));
            }
        }
        Ok(spec)
    }

    fn plan(&self) -> CvPlan {
        CvPlan::new(self.setting)
            .with_folds(
                self.folds
                    .unwrap_or_else(|| CvPlan::default_folds(self.setting)),
            )
            .with_repetitions(self.repetitions)
            .with_seed(self.learner.seed)
    }
}

pub fn nr_inner_folds(setting: Setting) -> usize {
    match setting {
        Setting::S2 | Setting::S3 => 10,
        Setting::S4 => 3,
    }
}

#[derive(Debug, Clone, Args)]
pub struct RankArgs {
    #[command(flatten)]
    pub run: RunArgs,
    /// Number of candidates to report.
    #[arg(long, default_value_t = 20)]
    pub top_n: usize,
}

#[derive(Serialize)]
struct StatsOutput {
    stats: DatasetStats,
    imbalance: ImbalanceReport,
}

fn output(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).map_err(|e| Error::io(p, e))?,
        )),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn write_json<T: Serialize>(value: &T, path: Option<&Path>) -> Result<()> {
    let mut w = output(path)?;
    serde_json::to_writer_pretty(&mut w, value).map_err(|e| Error::Output(e.to_string()))?;
    writeln!(w)
        .and_then(|_| w.flush())
        .map_err(|e| Error::Output(e.to_string()))
}

/// Runs one parsed command line, honoring `--threads`.
pub fn run(cli: &Cli) -> Result<()> {
    match cli.threads {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| Error::param(format!("thread pool: {e}")))?
            .install(|| dispatch(&cli.command)),
        None => dispatch(&cli.command),
    }
}

fn dispatch(command: &Command) -> Result<()> {
    match command {
        Command::Validate(data) => {
            let ds = data.load()?;
            let findings = validate_dataset(&ds);
            let mut w = output(None)?;
            let fail = |e: io::Error| Error::Output(e.to_string());
            for f in &findings {
                writeln!(w, "{f}").map_err(fail)?;
            }
            writeln!(
                w,
                "ok: {} drugs, {} targets, {} interactions, {} warning(s)",
                ds.n_drugs(),
                ds.n_targets(),
                ds.interactions().count_ones(),
                findings.len()
            )
            .and_then(|_| w.flush())
            .map_err(fail)
        }
        Command::Stats(args) => {
            let ds = args.data.load()?;
            let out = StatsOutput {
                stats: dataset_stats(&ds, args.k)?,
                imbalance: imbalance_report(&ds, args.k)?,
            };
            write_json(&out, args.output.as_deref())
        }
        Command::Recover(args) => {
            let ds = args.data.load()?;
            let rec = build_recovery(&ds, args.k, args.eta)?;
            std::fs::create_dir_all(&args.output_dir)
                .map_err(|e| Error::io(&args.output_dir, e))?;
            for (name, m) in [
                ("y_drug.tsv", &rec.y_drug),
                ("y_target.tsv", &rec.y_target),
                ("y_joint.tsv", &rec.y_joint),
            ] {
                write_labeled_matrix_file(
                    args.output_dir.join(name),
                    ds.drug_ids(),
                    ds.target_ids(),
                    m.view(),
                )?;
            }
            Ok(())
        }
        Command::Cv(args) => {
            let ds = args.data.load()?;
            let result = run_cv(&ds, &args.spec()?, &args.plan())?;
            result.write_csv(output(args.output.as_deref())?)
        }
        Command::Tune(args) => {
            let ds = args.data.load()?;
            let mut plan = args.plan();
            plan.repetitions = 1;
            let result =
                tune_hyperparameters(&ds, args.learner.method, &args.learner.grid(), &plan)?;
            write_json(&result, args.output.as_deref())
        }
        Command::RankNovel(args) => {
            let ds = args.run.data.load()?;
            let top = rank_novel_with(&ds, &args.run.spec()?, &args.run.plan(), args.top_n)?;
            write_novel_csv(&top, output(args.run.output.as_deref())?)
        }
    }
}
