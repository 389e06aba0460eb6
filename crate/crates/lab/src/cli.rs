//! The `trplab` command line.
//!
//! Every subcommand prints a one-line summary to stdout and, with
//! `--out`, writes a JSON result (plus optional CSV row files) and a side
//! manifest `<out>.manifest.json`. Exit codes: 0 success, 1 domain error
//! (unreadable file, counting guard, infeasible experiment), 2 usage
//! error (unknown flag, out-of-range parameter).

use std::path::PathBuf;

use anyhow::anyhow;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;
use trp_core::counting::{self, Method};
use trp_core::leave::LeaveGraph;
use trp_core::model::{cyclic_square, PartialLatinSquare};
use trp_core::quasirand::{self, CheckMode};
use trp_core::rng::{for_trial, RNG_ID};

use crate::experiments::coupling_mc::{conflict_idempotence_mc, couple_mc, transfer_study};
use crate::experiments::extension_ratio::{
    extension_csv_rows, extension_ratio_experiment, ExtensionRatioParams, EXTENSION_CSV_HEADER,
};
use crate::experiments::order_profile::{random_order_profile, OrderProfileParams};
use crate::experiments::ratio_study::{
    history_ratio_study, ratio_csv_rows, RatioStudyParams, RATIO_CSV_HEADER,
};
use crate::experiments::trp_trial::{
    trajectory_csv_rows, trp_trial, TrpTrialParams, TRAJECTORY_CSV_HEADER,
};
use crate::io::{read_square, write_square, SquareFormat};
use crate::manifest::{write_csv, write_json, write_manifest, ExperimentConfig};

/// Errors that decide the exit code.
pub enum CliError {
    Usage(String),
    Domain(anyhow::Error),
}

impl From<anyhow::Error> for CliError {
    fn from(e: anyhow::Error) -> Self {
        CliError::Domain(e)
    }
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

#[derive(Parser)]
#[command(
    name = "trplab",
    version,
    about = "Triangle removal process lab: generate squares, run seeded experiments, count completions"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Common {
    /// Master seed (default: $TRPLAB_SEED, else 0).
    #[arg(long)]
    seed: Option<u64>,
    /// Trial-level parallelism (0 = auto).
    #[arg(long, default_value_t = 0)]
    jobs: usize,
    /// Primary output file (JSON); a manifest lands next to it.
    #[arg(long)]
    out: Option<PathBuf>,
}

impl Common {
    fn seed(&self) -> u64 {
        self.seed.unwrap_or_else(|| {
            std::env::var("TRPLAB_SEED")
                .ok()
                .and_then(|s| s.parse().ok())
                .unwrap_or(0)
        })
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum GenerateKind {
    Cyclic,
    Trp,
}

#[derive(Clone, Copy, ValueEnum)]
enum OutFormat {
    Triples,
    Grid,
}

#[derive(Clone, Copy, ValueEnum)]
enum CountMethod {
    Naive,
    Mrv,
    Both,
}

#[derive(Clone, Copy, ValueEnum)]
enum RatioKind {
    History,
    Extension,
}

#[derive(Subcommand)]
enum Command {
    /// Emit a square: the cyclic fixture or one seeded process run.
    Generate {
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value_t = GenerateKind::Cyclic)]
        kind: GenerateKind,
        /// Steps as a fraction of N (trp kind).
        #[arg(long, default_value_t = 1.0)]
        alpha: f64,
        /// Record the triangle count before every removal (trp kind).
        #[arg(long)]
        q_trace: bool,
        #[arg(long, value_enum, default_value_t = OutFormat::Triples)]
        format: OutFormat,
        #[command(flatten)]
        common: Common,
    },
    /// Seeded Monte Carlo runs of the triangle removal process.
    TrpRun {
        #[arg(long)]
        n: usize,
        /// Step budget fraction of N.
        #[arg(long, default_value_t = 1.0)]
        alpha: f64,
        /// Deep-run horizon fraction (overrides --alpha).
        #[arg(long)]
        horizon: Option<f64>,
        #[arg(long, default_value_t = 1)]
        trials: usize,
        /// Enable checkpointed quasirandomness reports at this tolerance.
        #[arg(long)]
        epsilon: Option<f64>,
        #[arg(long, default_value_t = 2)]
        h: usize,
        /// Checkpoint prefix sizes (default: geometric grid + endpoint).
        #[arg(long, value_delimiter = ',')]
        checkpoints: Option<Vec<usize>>,
        /// Track trajectory envelopes.
        #[arg(long)]
        track: bool,
        /// Envelope exponent C in e(i) = p(i)^-C eps^c.
        #[arg(long = "C", default_value_t = 10.0)]
        big_c: f64,
        /// Envelope exponent c.
        #[arg(long = "c", default_value_t = 0.5)]
        small_c: f64,
        /// Tracked sets per (q, k).
        #[arg(long, default_value_t = 20)]
        tracked: usize,
        /// Samples per (q, k) for k >= 3 checks.
        #[arg(long, default_value_t = 100_000)]
        samples: usize,
        /// Embed per-trial rows in the JSON result.
        #[arg(long)]
        rows: bool,
        /// Write trajectory points as CSV.
        #[arg(long)]
        trajectory_csv: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
    /// Quasirandomness report for the leave graph of a square.
    QuasiCheck {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, default_value = "auto")]
        in_format: SquareFormat,
        #[arg(long)]
        epsilon: f64,
        #[arg(long, default_value_t = 2)]
        h: usize,
        /// Force exact enumeration for every subset size.
        #[arg(long)]
        exact: bool,
        #[arg(long, default_value_t = 100_000)]
        samples: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Random-ordering profile of a full Latin square.
    OrderProfile {
        /// Square file (mutually exclusive with --cyclic).
        #[arg(long = "in")]
        input: Option<PathBuf>,
        #[arg(long, default_value = "auto")]
        in_format: SquareFormat,
        /// Use the cyclic square of this order as the input.
        #[arg(long)]
        cyclic: Option<usize>,
        #[arg(long)]
        alpha: f64,
        #[arg(long)]
        epsilon: f64,
        #[arg(long, default_value_t = 2)]
        h: usize,
        #[arg(long, value_delimiter = ',')]
        checkpoints: Option<Vec<usize>>,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 100_000)]
        samples: usize,
        #[arg(long)]
        rows: bool,
        #[command(flatten)]
        common: Common,
    },
    /// Coupled binomial/greedy draws; checks the containment invariant.
    Couple {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        alpha: f64,
        #[arg(long, default_value_t = 10_000)]
        trials: usize,
        /// Conflict-deletion idempotence trials (0 skips).
        #[arg(long, default_value_t = 0)]
        idem_trials: usize,
        /// Also run the monotone-transfer study at this row-coverage
        /// threshold.
        #[arg(long)]
        transfer_threshold: Option<usize>,
        #[arg(long)]
        rows: bool,
        #[command(flatten)]
        common: Common,
    },
    /// Exact completion counting of a partial square.
    Count {
        /// Square file, triple-list format.
        #[arg(long = "in", conflicts_with = "grid")]
        input: Option<PathBuf>,
        /// Square file, grid format.
        #[arg(long)]
        grid: Option<PathBuf>,
        #[arg(long, default_value = "auto")]
        in_format: SquareFormat,
        #[arg(long, value_enum, default_value_t = CountMethod::Both)]
        method: CountMethod,
        /// Also report log of the ordered extension count.
        #[arg(long)]
        ordered: bool,
        #[command(flatten)]
        common: Common,
    },
    /// Closed-form completion-count bounds.
    Bounds {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        alpha: f64,
        #[command(flatten)]
        common: Common,
    },
    /// History-probability or extension-count ratio study.
    RatioStudy {
        #[arg(long, value_enum, default_value_t = RatioKind::History)]
        kind: RatioKind,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        alpha: f64,
        #[arg(long, default_value_t = 100)]
        pairs: usize,
        /// Quasirandomness filter tolerance (extension kind; default:
        /// tolerance ladder).
        #[arg(long)]
        epsilon: Option<f64>,
        #[arg(long)]
        csv: Option<PathBuf>,
        #[arg(long)]
        rows: bool,
        #[command(flatten)]
        common: Common,
    },
    /// Closed form of the integral identity.
    Integral {
        #[arg(long = "C")]
        big_c: f64,
        #[command(flatten)]
        common: Common,
    },
}

/// Parses argv and runs; returns the process exit code.
pub fn run<I: IntoIterator<Item = String>>(argv: I) -> i32 {
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            // clap renders help/version itself with exit code 0
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(cli.command) {
        Ok(()) => 0,
        Err(CliError::Usage(msg)) => {
            eprintln!("usage error: {msg}");
            2
        }
        Err(CliError::Domain(e)) => {
            eprintln!("error: {e}");
            1
        }
    }
}

fn strip_rows(mut v: serde_json::Value, keep: bool) -> serde_json::Value {
    if !keep {
        if let Some(obj) = v.as_object_mut() {
            obj.remove("per_trial");
            obj.remove("per_pair");
        }
    }
    v
}

fn emit(
    common: &Common,
    config: &ExperimentConfig,
    body: serde_json::Value,
    summary_line: String,
) -> Result<(), CliError> {
    println!("{summary_line}");
    if let Some(out) = &common.out {
        write_json(out, config, body)?;
        write_manifest(out, config, &[out])?;
    }
    Ok(())
}

fn dispatch(cmd: Command) -> Result<(), CliError> {
    match cmd {
        Command::Generate { n, kind, alpha, q_trace, format, common } => {
            if n == 0 {
                return Err(usage("--n must be at least 1"));
            }
            let seed = common.seed();
            let mut config = ExperimentConfig::new("generate", seed);
            config.n = Some(n);
            config.jobs = common.jobs;
            let fmt = match format {
                OutFormat::Triples => SquareFormat::TripleList,
                OutFormat::Grid => SquareFormat::Grid,
            };
            match kind {
                GenerateKind::Cyclic => {
                    config.kind = Some("cyclic".into());
                    let sq = cyclic_square(n).map_err(|e| usage(e.to_string()))?;
                    println!("generate kind=cyclic n={n} triples={}", sq.len());
                    if let Some(out) = &common.out {
                        write_square(out, &sq, fmt)?;
                        write_manifest(out, &config, &[out])?;
                    }
                }
                GenerateKind::Trp => {
                    if !(alpha > 0.0 && alpha <= 1.0) {
                        return Err(usage(format!("--alpha {alpha} outside (0, 1]")));
                    }
                    config.kind = Some("trp".into());
                    config.alpha = Some(alpha);
                    let m = (alpha * (n * n) as f64) as usize;
                    config.steps = Some(m);
                    let start = PartialLatinSquare::empty(n).expect("n >= 1");
                    let state = trp_core::process::TrpState::from_start_with_rng(
                        start,
                        for_trial(seed, 0),
                    );
                    let out_run = state.run_to_end(m, q_trace);
                    println!(
                        "generate kind=trp n={n} steps={m} accepted={} frozen_at={:?}",
                        out_run.square.len(),
                        out_run.frozen_at
                    );
                    if let Some(out) = &common.out {
                        write_square(out, &out_run.square, fmt)?;
                        // run outcome manifest: {n, m, seed, rng_id,
                        // frozen_at, q_trace?}
                        let mut doc = json!({
                            "n": n,
                            "m": m,
                            "seed": seed,
                            "rng_id": RNG_ID,
                            "frozen_at": out_run.frozen_at,
                        });
                        if let Some(tr) = &out_run.q_trace {
                            doc["q_trace"] = json!(tr);
                        }
                        let run_path = out.with_extension("run.json");
                        std::fs::write(
                            &run_path,
                            serde_json::to_string_pretty(&doc).map_err(anyhow::Error::from)?
                                + "\n",
                        )
                        .map_err(anyhow::Error::from)?;
                        write_manifest(out, &config, &[out, &run_path])?;
                    }
                }
            }
            Ok(())
        }

        Command::TrpRun {
            n, alpha, horizon, trials, epsilon, h, checkpoints, track,
            big_c, small_c, tracked, samples, rows, trajectory_csv, common,
        } => {
            if n == 0 {
                return Err(usage("--n must be at least 1"));
            }
            if !(alpha > 0.0 && alpha <= 1.0) {
                return Err(usage(format!("--alpha {alpha} outside (0, 1]")));
            }
            if let Some(hz) = horizon {
                if !(hz > 0.0 && hz <= 1.0) {
                    return Err(usage(format!("--horizon {hz} outside (0, 1]")));
                }
            }
            let seed = common.seed();
            let mut params = TrpTrialParams::new(n, alpha, trials, seed);
            params.horizon = horizon;
            params.h = h;
            params.envelope_big_c = big_c;
            params.envelope_small_c = small_c;
            params.tracked_per_slot = tracked;
            params.samples = samples;
            params.jobs = common.jobs;
            params.checkpoints = checkpoints.clone();
            params.track_trajectories = track;
            if let Some(eps) = epsilon {
                params.epsilon = eps;
                params.check_quasirandomness = true;
            }
            let summary = trp_trial(&params)?;

            let mut config = ExperimentConfig::new("trp-run", seed);
            config.n = Some(n);
            config.alpha = Some(alpha);
            config.horizon = horizon;
            config.epsilon = epsilon;
            config.h = epsilon.map(|_| h);
            config.envelope_big_c = track.then_some(big_c);
            config.envelope_small_c = track.then_some(small_c);
            config.trials = Some(trials);
            config.checkpoints = Some(summary.checkpoint_grid.clone());
            config.samples = Some(samples);
            config.jobs = common.jobs;
            config.out = common.out.as_ref().map(|p| p.display().to_string());

            if let Some(csv_path) = &trajectory_csv {
                let rows = trajectory_csv_rows(&summary);
                write_csv(csv_path, &config, TRAJECTORY_CSV_HEADER, &rows)?;
            }
            let body = strip_rows(serde_json::to_value(&summary).map_err(anyhow::Error::from)?, rows);
            let line = format!(
                "trp-run n={n} trials={trials} steps={} freeze_rate={} frozen={} breached={} quasirandom_all={} max_dev={}",
                summary.steps,
                summary.freeze_rate,
                summary.frozen,
                summary.breached,
                summary.quasirandom_all,
                summary.max_dev_max
            );
            emit(&common, &config, body, line)
        }

        Command::QuasiCheck { input, in_format, epsilon, h, exact, samples, common } => {
            if h == 0 {
                return Err(usage("--h must be at least 1"));
            }
            let seed = common.seed();
            let square = read_square(&input, in_format)?;
            let leave = LeaveGraph::from_square(&square);
            let mode = if exact {
                CheckMode::Exact
            } else {
                CheckMode::Auto(samples)
            };
            let mut rng = for_trial(seed, 0);
            let report = quasirand::check(&leave, epsilon, h, mode, &mut rng);
            let mut config = ExperimentConfig::new("quasi-check", seed);
            config.n = Some(square.n());
            config.epsilon = Some(epsilon);
            config.h = Some(h);
            config.samples = (!exact).then_some(samples);
            config.input = Some(input.display().to_string());
            let body = json!({
                "d": report.density_f64(),
                "d_rational": [report.density.0, report.density.1],
                "mode": if exact { "exact".to_string() } else { format!("auto({samples})") },
                "quasirandom": report.quasirandom,
                "entries": report.entries.iter().map(|e| json!({
                    "q": e.q.to_string(),
                    "k": e.k,
                    "worst_dev": e.worst_dev,
                    "worst_dev_rational": e.worst_dev_rational.map(|(a, b)| json!([a.to_string(), b.to_string()])),
                    "witness": e.witness.iter().map(|v| v.global(square.n())).collect::<Vec<_>>(),
                    "exact": e.exact,
                })).collect::<Vec<_>>(),
            });
            let line = format!(
                "quasi-check n={} m={} d={} quasirandom={} worst_dev={}",
                square.n(),
                square.len(),
                report.density_f64(),
                report.quasirandom,
                report.worst_deviation()
            );
            emit(&common, &config, body, line)
        }

        Command::OrderProfile {
            input, in_format, cyclic, alpha, epsilon, h, checkpoints,
            trials, samples, rows, common,
        } => {
            let square = match (&input, cyclic) {
                (Some(path), None) => read_square(path, in_format)?,
                (None, Some(n)) => cyclic_square(n).map_err(|e| usage(e.to_string()))?,
                _ => return Err(usage("give exactly one of --in or --cyclic")),
            };
            let seed = common.seed();
            let params = OrderProfileParams {
                alpha,
                epsilon,
                h,
                checkpoints: checkpoints.clone(),
                trials,
                seed,
                samples,
                jobs: common.jobs,
            };
            let summary = random_order_profile(&square, &params)?;
            let mut config = ExperimentConfig::new("order-profile", seed);
            config.n = Some(square.n());
            config.alpha = Some(alpha);
            config.epsilon = Some(epsilon);
            config.h = Some(h);
            config.trials = Some(trials);
            config.checkpoints = Some(summary.checkpoint_grid.clone());
            config.samples = Some(samples);
            config.jobs = common.jobs;
            config.input = input.as_ref().map(|p| p.display().to_string());
            let line = format!(
                "order-profile n={} trials={trials} pass_rate={} worst_dev={}",
                square.n(),
                summary.pass_rate,
                summary
                    .checkpoint_max_dev
                    .iter()
                    .fold(0.0f64, |a, &b| a.max(b))
            );
            let body = strip_rows(serde_json::to_value(&summary).map_err(anyhow::Error::from)?, rows);
            emit(&common, &config, body, line)
        }

        Command::Couple { n, alpha, trials, idem_trials, transfer_threshold, rows, common } => {
            if n == 0 {
                return Err(usage("--n must be at least 1"));
            }
            let seed = common.seed();
            let summary = couple_mc(n, alpha, trials, seed, common.jobs)?;
            let idem_violations = if idem_trials > 0 {
                Some(conflict_idempotence_mc(n, alpha / n as f64, idem_trials, seed ^ 1, common.jobs))
            } else {
                None
            };
            let transfer = transfer_threshold
                .map(|t| transfer_study(n, alpha, t, trials, seed ^ 2, common.jobs))
                .transpose()?;
            let mut config = ExperimentConfig::new("couple", seed);
            config.n = Some(n);
            config.alpha = Some(alpha);
            config.trials = Some(trials);
            config.jobs = common.jobs;
            let mut body = strip_rows(
                serde_json::to_value(&summary).map_err(anyhow::Error::from)?,
                rows,
            );
            if let Some(v) = idem_violations {
                body["idempotence_trials"] = json!(idem_trials);
                body["idempotence_violations"] = json!(v);
            }
            if let Some(t) = &transfer {
                body["transfer"] = serde_json::to_value(t).map_err(anyhow::Error::from)?;
            }
            let line = format!(
                "couple n={n} trials={trials} applicable={} violations={} frozen={}{}",
                summary.applicable,
                summary.violations,
                summary.frozen,
                idem_violations
                    .map(|v| format!(" idem_violations={v}"))
                    .unwrap_or_default()
            );
            emit(&common, &config, body, line)
        }

        Command::Count { input, grid, in_format, method, ordered, common } => {
            let (path, fmt) = match (&input, &grid) {
                (Some(p), None) => (p.clone(), in_format),
                (None, Some(p)) => (p.clone(), SquareFormat::Grid),
                _ => return Err(usage("give exactly one of --in or --grid")),
            };
            let square = read_square(&path, fmt)?;
            let run_one = |m: Method| -> Result<counting::CompletionCount, CliError> {
                counting::exact_completions(&square, m)
                    .map_err(|e| CliError::Domain(anyhow!("{e}")))
            };
            let (result, method_name) = match method {
                CountMethod::Naive => (run_one(Method::NaiveDfs)?, "naive-dfs"),
                CountMethod::Mrv => (run_one(Method::MrvDfs)?, "mrv-dfs"),
                CountMethod::Both => {
                    let a = run_one(Method::NaiveDfs)?;
                    let b = run_one(Method::MrvDfs)?;
                    if a.exact != b.exact {
                        return Err(CliError::Domain(anyhow!(
                            "counter disagreement: naive-dfs {} vs mrv-dfs {}",
                            a.exact,
                            b.exact
                        )));
                    }
                    (b, "both")
                }
            };
            let ordered_log = if ordered {
                Some(
                    counting::ordered_extension_count(&square, result.method)
                        .map_err(|e| CliError::Domain(anyhow!("{e}")))?,
                )
            } else {
                None
            };
            let seed = common.seed();
            let mut config = ExperimentConfig::new("count", seed);
            config.n = Some(square.n());
            config.method = Some(method_name.to_string());
            config.input = Some(path.display().to_string());
            let body = json!({
                "n": square.n(),
                "m": square.len(),
                "exact": result.exact.to_string(),
                "log_value": result.log_value,
                "method": method_name,
                "ordered_extension_log": ordered_log,
            });
            let line = format!(
                "count n={} m={} method={method_name} exact={} log_value={}{}",
                square.n(),
                square.len(),
                result.exact,
                result.log_value,
                ordered_log
                    .map(|v| format!(" ordered_extension_log={v}"))
                    .unwrap_or_default()
            );
            emit(&common, &config, body, line)
        }

        Command::Bounds { n, alpha, common } => {
            if n == 0 {
                return Err(usage("--n must be at least 1"));
            }
            let eval = counting::entropy_upper_bound_log(n, alpha)
                .map_err(|e| usage(e.to_string()))?;
            let seed = common.seed();
            let mut config = ExperimentConfig::new("bounds", seed);
            config.n = Some(n);
            config.alpha = Some(alpha);
            let body = json!({
                "n": eval.n,
                "alpha": eval.alpha,
                "upper_log": eval.upper_log,
                "lower_log": eval.lower_log,
                "slack": eval.slack,
            });
            let line = format!(
                "bounds n={n} alpha={alpha} upper_log={} lower_log={} slack=\"{}\"",
                eval.upper_log, eval.lower_log, eval.slack
            );
            emit(&common, &config, body, line)
        }

        Command::RatioStudy { kind, n, alpha, pairs, epsilon, csv, rows, common } => {
            let seed = common.seed();
            match kind {
                RatioKind::History => {
                    let mut params = RatioStudyParams::new(n, alpha, pairs, seed);
                    params.jobs = common.jobs;
                    let summary = history_ratio_study(&params)?;
                    let mut config = ExperimentConfig::new("ratio-study", seed);
                    config.kind = Some("history".into());
                    config.n = Some(n);
                    config.alpha = Some(alpha);
                    config.pairs = Some(pairs);
                    config.jobs = common.jobs;
                    if let Some(csv_path) = &csv {
                        write_csv(csv_path, &config, RATIO_CSV_HEADER, &ratio_csv_rows(&summary))?;
                    }
                    let line = format!(
                        "ratio-study kind=history n={n} pairs={pairs} steps={} max_abs_log_ratio={} term_violations={} bound_violations={} discarded={}",
                        summary.steps,
                        summary.max_abs_log_ratio,
                        summary.total_term_violations,
                        summary.bound_violations,
                        summary.total_discarded_frozen
                    );
                    let body =
                        strip_rows(serde_json::to_value(&summary).map_err(anyhow::Error::from)?, rows);
                    emit(&common, &config, body, line)
                }
                RatioKind::Extension => {
                    let mut params = ExtensionRatioParams::new(n, alpha, pairs, seed);
                    params.epsilon = epsilon;
                    params.jobs = common.jobs;
                    let summary = extension_ratio_experiment(&params)?;
                    let mut config = ExperimentConfig::new("ratio-study", seed);
                    config.kind = Some("extension".into());
                    config.n = Some(n);
                    config.alpha = Some(alpha);
                    config.pairs = Some(pairs);
                    config.epsilon = Some(summary.epsilon_used);
                    config.jobs = common.jobs;
                    if let Some(csv_path) = &csv {
                        write_csv(
                            csv_path,
                            &config,
                            EXTENSION_CSV_HEADER,
                            &extension_csv_rows(&summary),
                        )?;
                    }
                    let line = format!(
                        "ratio-study kind=extension n={n} pairs={pairs} m={} epsilon_used={} max_abs_log_ratio={} mean_abs_log_ratio={}",
                        summary.m,
                        summary.epsilon_used,
                        summary.max_abs_log_ratio,
                        summary.mean_abs_log_ratio
                    );
                    let body =
                        strip_rows(serde_json::to_value(&summary).map_err(anyhow::Error::from)?, rows);
                    emit(&common, &config, body, line)
                }
            }
        }

        Command::Integral { big_c, common } => {
            let value = counting::integral_identity(big_c)
                .map_err(|e| CliError::Domain(anyhow!("{e}")))?;
            let seed = common.seed();
            let mut config = ExperimentConfig::new("integral", seed);
            config.big_c = Some(big_c);
            let body = json!({ "C": big_c, "value": value });
            emit(&common, &config, body, format!("integral C={big_c} value={value}"))
        }
    }
}
