use std::io::{self, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use winpred::csvio::{create, load_dataset, write_matches, write_metrics};
use winpred::error::{Error, Result};
use winpred::grid::{parse_grid, RunSpec};
use winpred::model::{read_model, write_model, ModelInfo};
use winpred::reports::{percent, write_durations, write_quadrant_points};
use winpred::sweep::{report_row, run_grid, write_markdown, write_report, RunOutcome, REPORT_HEADER};
use winpred::vectors::{window_file_name, write_hero_vectors, write_window_vectors, HERO_FILE_NAME};
use winpred_core::data::duration_histogram;
use winpred_core::eval::{choose_columns, quadrant_stats, split, Confusion};
use winpred_core::features::{build_hero_dataset, build_window_dataset, MIN_WINDOW_END};
use winpred_core::synth::synthesize;
use winpred_core::{MatchDataset, Selection, SynthConfig, DEFAULT_ROSTER_SIZE};

#[derive(Parser)]
#[command(name = "winpred", version, about = "Match outcome prediction from hero picks and in-game metrics")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Input {
    /// Match table (`matches.csv`).
    #[arg(long)]
    matches: PathBuf,
    /// Per-minute metrics (`metrics.csv`); required for in-game features.
    #[arg(long)]
    metrics: Option<PathBuf>,
    #[arg(long, default_value_t = DEFAULT_ROSTER_SIZE)]
    roster_size: u16,
}

impl Input {
    fn load(&self) -> Result<MatchDataset> {
        load_dataset(&self.matches, self.metrics.as_deref(), self.roster_size)
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum FeatureKind {
    Hero,
    Ingame,
}

#[derive(Subcommand)]
enum Command {
    /// Validate input files and rewrite them in canonical form.
    Ingest {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        out_dir: PathBuf,
    },
    /// Generate a synthetic dataset with a known best achievable accuracy.
    Synth {
        #[arg(long)]
        out_dir: PathBuf,
        #[arg(long, visible_alias = "n", default_value_t = 1000)]
        n_matches: usize,
        #[arg(long, default_value_t = DEFAULT_ROSTER_SIZE)]
        roster_size: u16,
        #[arg(long, default_value_t = 40.0)]
        mean_duration: f64,
        /// How strongly the minute-t kills leader wins, in [0, 1].
        #[arg(long, default_value_t = 0.5)]
        signal: f64,
        /// Probability that Radiant leads in kills.
        #[arg(long, default_value_t = 0.5)]
        radiant_bias: f64,
        #[arg(long, default_value_t = 0.14)]
        pro_fraction: f64,
        #[arg(long, default_value = "synth-major")]
        tournament_id: String,
        /// Late professional matches tagged with --tournament-id.
        #[arg(long, default_value_t = 0)]
        tournament_matches: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
    /// Write hero or window feature vectors.
    Featurize {
        #[command(flatten)]
        input: Input,
        #[arg(long, value_enum)]
        representation: FeatureKind,
        #[arg(long, default_value_t = 20, value_parser = clap::value_parser!(u32).range(MIN_WINDOW_END as i64..))]
        t: u32,
        #[arg(long)]
        out_dir: PathBuf,
    },
    /// Fit a model on the training side of --split and save it.
    Train {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        run: RunSpec,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long)]
        model_out: PathBuf,
    },
    /// Evaluate one configuration, or a saved model on the test side of --split.
    Eval {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        run: RunSpec,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Score this saved model instead of training a new one.
        #[arg(long)]
        model: Option<PathBuf>,
    },
    /// Evaluate every run of a grid file.
    Sweep {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        grid: PathBuf,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Report CSV; printed to stdout when omitted.
        #[arg(long)]
        report: Option<PathBuf>,
        /// Accuracy tables in Markdown.
        #[arg(long)]
        markdown: Option<PathBuf>,
    },
    /// Kills difference at minute t against the winner.
    Quadrant {
        #[command(flatten)]
        input: Input,
        #[arg(long, default_value_t = 10, value_parser = clap::value_parser!(u32).range(1..))]
        t: u32,
        /// Scatter points CSV.
        #[arg(long)]
        points: Option<PathBuf>,
    },
    /// Histogram of match durations.
    Durations {
        #[command(flatten)]
        input: Input,
        /// Count professional matches only.
        #[arg(long)]
        pro_only: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            let usage = e.is_usage() || matches!(e, Error::Core(winpred_core::Error::UnknownFeature(_)));
            ExitCode::from(if usage { 2 } else { 1 })
        }
    }
}

fn out_file(dir: &Path, name: &str) -> Result<BufWriter<std::fs::File>> {
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    Ok(BufWriter::new(create(&dir.join(name))?))
}

fn run(command: Command) -> Result<()> {
    let stdout = io::stdout();
    match command {
        Command::Ingest { input, out_dir } => {
            let ds = input.load()?;
            write_matches(out_file(&out_dir, "matches.csv")?, ds.matches())?;
            if ds.has_metrics() {
                write_metrics(out_file(&out_dir, "metrics.csv")?, &ds)?;
            }
            println!("{} matches valid", ds.matches().len());
        }
        Command::Synth {
            out_dir,
            n_matches,
            roster_size,
            mean_duration,
            signal,
            radiant_bias,
            pro_fraction,
            tournament_id,
            tournament_matches,
            seed,
        } => {
            let config = SynthConfig {
                n_matches,
                roster_size,
                mean_duration_minutes: mean_duration,
                kill_signal_strength: signal,
                radiant_bias,
                seed,
                pro_fraction,
                tournament_id,
                tournament_matches,
            };
            config.validate().map_err(|e| Error::Usage(e.to_string()))?;
            let ds = synthesize(&config)?;
            write_matches(out_file(&out_dir, "matches.csv")?, ds.matches())?;
            write_metrics(out_file(&out_dir, "metrics.csv")?, &ds)?;
            println!(
                "{} matches written, best achievable accuracy {:.4}",
                n_matches,
                config.bayes_accuracy()
            );
        }
        Command::Featurize {
            input,
            representation,
            t,
            out_dir,
        } => {
            let ds = input.load()?;
            match representation {
                FeatureKind::Hero => {
                    let vectors = build_hero_dataset(ds.matches(), input.roster_size)?;
                    write_hero_vectors(out_file(&out_dir, HERO_FILE_NAME)?, &vectors, input.roster_size)?;
                    println!("{} hero vectors", vectors.len());
                }
                FeatureKind::Ingame => {
                    let built = build_window_dataset(&ds, t)?;
                    write_window_vectors(out_file(&out_dir, &window_file_name(t))?, &built.vectors)?;
                    println!(
                        "{} window vectors, {} matches shorter than {t} minutes skipped",
                        built.vectors.len(),
                        built.skipped
                    );
                }
            }
        }
        Command::Train {
            input,
            run,
            seed,
            model_out,
        } => {
            let config = RunSpec { roster_size: input.roster_size, ..run }.to_config(seed)?;
            let ds = input.load()?;
            let (train_m, _) = split(ds.matches(), &config.split)?;
            let (train, _) = config.representation.build(&ds, train_m)?;
            let (subset, _) = choose_columns(&config, &train)?;
            let train_x = train.select_columns(subset.indices());
            let model = config.learner.adapted_to(train_x.n_features()).train(&train_x)?;
            let info = ModelInfo {
                representation: config.representation.to_string(),
                selection: config.selection.to_string(),
            };
            write_model(BufWriter::new(create(&model_out)?), &model, &info)?;
            println!(
                "trained {} on {} rows, features: {}",
                config.learner.label(),
                train_x.n_rows(),
                train_x.names().join(";")
            );
        }
        Command::Eval {
            input,
            run,
            seed,
            model,
        } => {
            let config = RunSpec { roster_size: input.roster_size, ..run }.to_config(seed)?;
            let ds = input.load()?;
            let result = match model {
                None => winpred_core::eval::evaluate(&config, &ds),
                Some(path) => {
                    let file = std::fs::File::open(&path).map_err(|e| Error::io(&path, e))?;
                    let (model, info) = read_model(BufReader::new(file))?;
                    score_saved(&config, &ds, &model, &info)
                }
            };
            let outcome = RunOutcome {
                id: "eval".into(),
                config: result.as_ref().map_or(config, |r| r.config.clone()),
                result,
            };
            let report = outcome.result.as_ref().map_err(|e| Error::Core(e.clone()))?;
            let mut out = stdout.lock();
            writeln!(out, "{REPORT_HEADER}")?;
            writeln!(out, "{}", report_row(&outcome))?;
            if report.skipped > 0 {
                log::warn!("{} matches shorter than the window end were skipped", report.skipped);
            }
        }
        Command::Sweep {
            input,
            grid,
            seed,
            report,
            markdown,
        } => {
            let text = std::fs::read_to_string(&grid).map_err(|e| Error::io(&grid, e))?;
            let runs = parse_grid(&text, seed, input.roster_size)?;
            let ds = input.load()?;
            let outcomes = run_grid(&runs, &ds)?;
            match report {
                Some(p) => write_report(BufWriter::new(create(&p)?), &outcomes)?,
                None => write_report(stdout.lock(), &outcomes)?,
            }
            if let Some(p) = markdown {
                write_markdown(BufWriter::new(create(&p)?), &outcomes)?;
            }
            let failed = outcomes.iter().filter(|o| o.result.is_err()).count();
            if failed > 0 {
                log::warn!("{failed} of {} runs failed", outcomes.len());
            }
        }
        Command::Quadrant { input, t, points } => {
            let ds = input.load()?;
            let stats = quadrant_stats(&ds, t)?;
            if let Some(p) = points {
                write_quadrant_points(BufWriter::new(create(&p)?), &stats)?;
            }
            println!("kills difference at minute {t}");
            println!(
                "radiant ahead: {} matches, radiant won {}",
                stats.above,
                percent(stats.radiant_above())
            );
            println!(
                "dire ahead: {} matches, dire won {}",
                stats.below,
                percent(stats.dire_below())
            );
            println!("tied: {} matches, shorter than {t} minutes: {}", stats.zero, stats.skipped);
        }
        Command::Durations { input, pro_only, out } => {
            let matches = winpred::csvio::load_matches(&input.matches, input.roster_size)?;
            let hist = duration_histogram(&matches, pro_only)?;
            if let Some(p) = out {
                write_durations(BufWriter::new(create(&p)?), &hist)?;
            }
            println!(
                "{} matches, {} lasting at least 20 minutes ({:.2}%)",
                hist.total(),
                hist.count_at_least(20),
                100.0 * hist.fraction_at_least(20)
            );
        }
    }
    Ok(())
}

/// Scores a saved model on the test side of the run's split, using the
/// model's own columns.
fn score_saved(
    config: &winpred_core::RunConfig,
    ds: &MatchDataset,
    model: &winpred_core::TrainedModel,
    info: &ModelInfo,
) -> winpred_core::Result<winpred_core::EvalReport> {
    let (train_m, test_m) = split(ds.matches(), &config.split)?;
    let (train, skipped_train) = config.representation.build(ds, train_m)?;
    let (test, skipped) = config.representation.build(ds, test_m)?;
    let mut config = config.clone();
    config.learner = match model {
        winpred_core::TrainedModel::Lr(m) => winpred_core::Learner::Lr(m.config),
        winpred_core::TrainedModel::Rf(m) => winpred_core::Learner::Rf(m.config),
    };
    config.selection = match info.selection.as_str() {
        "cfs" => Selection::Cfs,
        "wrapper" => Selection::Wrapper,
        s => match s.strip_prefix("single:") {
            Some(name) => Selection::SingleFeature(name.to_string()),
            None => Selection::All,
        },
    };
    let cols = model
        .feature_names()
        .iter()
        .map(|n| {
            test.feature_index(n)
                .ok_or_else(|| winpred_core::Error::UnknownFeature(n.clone()))
        })
        .collect::<winpred_core::Result<Vec<_>>>()?;
    let test_x = test.select_columns(&cols);
    let predicted = model.predict_table(&test_x)?;
    let confusion = Confusion::tally(&predicted, test_x.labels());
    Ok(winpred_core::EvalReport {
        config,
        accuracy: confusion.accuracy(),
        confusion,
        selected_features: model.feature_names().to_vec(),
        selection_score: None,
        train_size: train.n_rows(),
        test_size: test_x.n_rows(),
        skipped: skipped_train + skipped,
    })
}
