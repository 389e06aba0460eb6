//! Removal-process trials with checkpointed quasirandomness reports and
//! per-step trajectory monitoring.
//!
//! Each trial runs the process from `K_{n,n,n}` (or a supplied start) for
//! `floor(alpha N)` steps, or to `floor(horizon N)` in deep-run mode. At
//! every checkpoint the leave graph gets a quasirandomness report; in
//! between, a fixed family of tracked vertex sets is monitored against
//! the predicted trajectory `p(i)^k n` with the error tube
//! `e(i) = p(i)^-C eps^c`. A run that exhausts its triangles freezes and
//! stops; freezing is an outcome, not an error.

use anyhow::{bail, Result};
use rand::Rng;
use serde::Serialize;
use trp_core::model::{Part, PartialLatinSquare, Vertex};
use trp_core::process::{Step, TrpState};
use trp_core::quasirand::{self, CheckMode};
use trp_core::rng::for_trial;
use trp_core::bits::multi_and_popcount;

use super::{geometric_checkpoints, quantile, run_trials};

#[derive(Clone, Debug)]
pub struct TrpTrialParams {
    pub n: usize,
    /// Step budget as a fraction of `N = n²`; `m = floor(alpha N)`.
    pub alpha: f64,
    /// Quasirandomness tolerance, and the `eps` of the envelope.
    pub epsilon: f64,
    pub h: usize,
    /// Envelope exponents: `e(i) = p(i)^-big_c * eps^small_c`.
    pub envelope_big_c: f64,
    pub envelope_small_c: f64,
    /// Prefix sizes to inspect; `None` = geometric grid plus the endpoint.
    pub checkpoints: Option<Vec<usize>>,
    pub trials: usize,
    pub seed: u64,
    /// Tracked sets per `(q, k)` slot; full enumeration when `n <= 10`.
    pub tracked_per_slot: usize,
    /// Deep-run mode: run to `floor(horizon N)` instead of `alpha N`.
    pub horizon: Option<f64>,
    /// Sample count for `k >= 3` checkpoint checks.
    pub samples: usize,
    pub jobs: usize,
    pub start: Option<PartialLatinSquare>,
    /// Skip checkpoint checks entirely (freeze-rate studies).
    pub check_quasirandomness: bool,
    /// Monitor trajectories.
    pub track_trajectories: bool,
}

impl TrpTrialParams {
    pub fn new(n: usize, alpha: f64, trials: usize, seed: u64) -> Self {
        TrpTrialParams {
            n,
            alpha,
            epsilon: 0.25,
            h: 2,
            envelope_big_c: 10.0,
            envelope_small_c: 0.5,
            checkpoints: None,
            trials,
            seed,
            tracked_per_slot: 20,
            horizon: None,
            samples: 100_000,
            jobs: 0,
            start: None,
            check_quasirandomness: false,
            track_trajectories: false,
        }
    }
}

/// One tracked set's time series (points recorded at checkpoints, breach
/// scanned at every step).
#[derive(Clone, Debug, Serialize)]
pub struct TrajectoryRecord {
    pub a_id: usize,
    /// Target part the common neighbourhood lives in.
    pub q: String,
    pub k: usize,
    /// Global vertex labels of the tracked set.
    pub vertices: Vec<u32>,
    pub breach_step: Option<usize>,
    pub points: Vec<TrajPoint>,
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct TrajPoint {
    pub i: usize,
    pub y: u64,
    pub predicted: f64,
    pub envelope: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckpointReport {
    pub i: usize,
    pub worst_dev: f64,
    pub quasirandom: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct TrialResult {
    pub trial: u64,
    pub frozen_at: Option<usize>,
    pub checkpoints: Vec<CheckpointReport>,
    pub quasirandom_all: bool,
    pub breached: bool,
    pub max_dev: f64,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub trajectories: Vec<TrajectoryRecord>,
}

/// Aggregate over all trials. The four outcome tallies partition the
/// trials: frozen, else breached, else quasirandom at all checkpoints,
/// else other.
#[derive(Clone, Debug, Serialize)]
pub struct TrialSummary {
    pub trials: usize,
    pub steps: usize,
    pub checkpoint_grid: Vec<usize>,
    pub frozen: usize,
    pub breached: usize,
    pub quasirandom_all: usize,
    pub other: usize,
    pub freeze_rate: f64,
    pub max_dev_p50: f64,
    pub max_dev_p90: f64,
    pub max_dev_max: f64,
    pub per_trial: Vec<TrialResult>,
}

struct TrackedSet {
    q: Part,
    vertices: Vec<Vertex>,
}

fn sample_tracked_sets(n: usize, h: usize, per_slot: usize, rng: &mut impl Rng) -> Vec<TrackedSet> {
    let mut sets = Vec::new();
    for q in Part::ALL {
        let pool: Vec<Vertex> = q
            .others()
            .iter()
            .flat_map(|&p| (0..n as u32).map(move |i| Vertex::new(p, i)))
            .collect();
        for k in 1..=h.min(pool.len()) {
            if n <= 10 {
                // full enumeration at desk scale
                enumerate_k_subsets(&pool, k, &mut |set| {
                    sets.push(TrackedSet { q, vertices: set.to_vec() });
                });
            } else {
                for _ in 0..per_slot {
                    let mut idx: Vec<usize> = Vec::with_capacity(k);
                    while idx.len() < k {
                        let i = rng.gen_range(0..pool.len());
                        if !idx.contains(&i) {
                            idx.push(i);
                        }
                    }
                    sets.push(TrackedSet {
                        q,
                        vertices: idx.iter().map(|&i| pool[i]).collect(),
                    });
                }
            }
        }
    }
    sets
}

fn enumerate_k_subsets(pool: &[Vertex], k: usize, f: &mut impl FnMut(&[Vertex])) {
    fn rec(pool: &[Vertex], k: usize, start: usize, acc: &mut Vec<Vertex>, f: &mut impl FnMut(&[Vertex])) {
        if acc.len() == k {
            f(acc);
            return;
        }
        for i in start..pool.len() {
            acc.push(pool[i]);
            rec(pool, k, i + 1, acc, f);
            acc.pop();
        }
    }
    rec(pool, k, 0, &mut Vec::new(), f);
}

pub fn trp_trial(params: &TrpTrialParams) -> Result<TrialSummary> {
    let n = params.n;
    if n == 0 {
        bail!("--n must be at least 1");
    }
    let frac = params.horizon.unwrap_or(params.alpha);
    if !(0.0..=1.0).contains(&frac) || frac == 0.0 {
        bail!("step fraction {frac} outside (0, 1]");
    }
    let big_n = n * n;
    let start = match &params.start {
        Some(s) => s.clone(),
        None => PartialLatinSquare::empty(n).expect("n >= 1"),
    };
    let budget = ((frac * big_n as f64) as usize).min(big_n).saturating_sub(start.len());
    let grid = params
        .checkpoints
        .clone()
        .unwrap_or_else(|| geometric_checkpoints(budget));

    let per_trial = run_trials(params.jobs, params.trials, |trial| {
        run_one_trial(params, &start, budget, &grid, trial)
    });

    let frozen = per_trial.iter().filter(|t| t.frozen_at.is_some()).count();
    let breached = per_trial
        .iter()
        .filter(|t| t.frozen_at.is_none() && t.breached)
        .count();
    let quasirandom_all = per_trial
        .iter()
        .filter(|t| t.frozen_at.is_none() && !t.breached && t.quasirandom_all)
        .count();
    let other = params.trials - frozen - breached - quasirandom_all;
    let mut devs: Vec<f64> = per_trial.iter().map(|t| t.max_dev).collect();
    devs.sort_by(f64::total_cmp);
    Ok(TrialSummary {
        trials: params.trials,
        steps: budget,
        checkpoint_grid: grid,
        frozen,
        breached,
        quasirandom_all,
        other,
        freeze_rate: frozen as f64 / params.trials.max(1) as f64,
        max_dev_p50: quantile(&devs, 0.5),
        max_dev_p90: quantile(&devs, 0.9),
        max_dev_max: devs.last().copied().unwrap_or(f64::NAN),
        per_trial,
    })
}

fn run_one_trial(
    params: &TrpTrialParams,
    start: &PartialLatinSquare,
    budget: usize,
    grid: &[usize],
    trial: u64,
) -> TrialResult {
    let n = params.n;
    let big_n = (n * n) as f64;
    let mut rng = for_trial(params.seed, trial);
    let tracked = if params.track_trajectories {
        sample_tracked_sets(n, params.h, params.tracked_per_slot, &mut rng)
    } else {
        Vec::new()
    };
    let mut state = TrpState::from_start_with_rng(start.clone(), rng);

    let mut checkpoints = Vec::new();
    let mut quasirandom_all = true;
    let mut max_dev: f64 = 0.0;
    let mut trajectories: Vec<TrajectoryRecord> = tracked
        .iter()
        .enumerate()
        .map(|(id, s)| TrajectoryRecord {
            a_id: id,
            q: s.q.to_string(),
            k: s.vertices.len(),
            vertices: s.vertices.iter().map(|v| v.global(n)).collect(),
            breach_step: None,
            points: Vec::new(),
        })
        .collect();
    let eps_pow = params.epsilon.powf(params.envelope_small_c);

    let mut check_rng = for_trial(params.seed, trial ^ 0x9e37_79b9_7f4a_7c15);
    for i in 0..=budget {
        let at_checkpoint = grid.contains(&i);
        if at_checkpoint && params.check_quasirandomness {
            let report = quasirand::check(
                state.leave(),
                params.epsilon,
                params.h,
                CheckMode::Auto(params.samples),
                &mut check_rng,
            );
            let worst = report.worst_deviation();
            max_dev = max_dev.max(worst);
            quasirandom_all &= report.quasirandom;
            checkpoints.push(CheckpointReport {
                i,
                worst_dev: worst,
                quasirandom: report.quasirandom,
            });
        }
        if params.track_trajectories {
            let p = 1.0 - i as f64 / big_n;
            let envelope = p.powf(-params.envelope_big_c) * eps_pow;
            for (set, rec) in tracked.iter().zip(trajectories.iter_mut()) {
                let rows: Vec<&[u64]> = set
                    .vertices
                    .iter()
                    .map(|&v| state.leave().neighbourhood(v, set.q))
                    .collect();
                let y = multi_and_popcount(&rows) as u64;
                let predicted = p.powi(set.vertices.len() as i32) * n as f64;
                if rec.breach_step.is_none()
                    && (y as f64 - predicted).abs() > envelope * predicted
                {
                    rec.breach_step = Some(i);
                }
                if at_checkpoint {
                    rec.points.push(TrajPoint { i, y, predicted, envelope });
                }
            }
        }
        if i == budget {
            break;
        }
        if matches!(state.step(), Step::Frozen) {
            break;
        }
    }

    TrialResult {
        trial,
        frozen_at: state.frozen_at(),
        quasirandom_all,
        breached: trajectories.iter().any(|t| t.breach_step.is_some()),
        max_dev,
        checkpoints,
        trajectories,
    }
}

/// CSV rows `trial, A_id, q, k, i, Y, predicted, envelope, breached`
/// (one row per recorded trajectory point).
pub fn trajectory_csv_rows(summary: &TrialSummary) -> Vec<String> {
    let mut rows = Vec::new();
    for t in &summary.per_trial {
        for rec in &t.trajectories {
            for p in &rec.points {
                rows.push(format!(
                    "{},{},{},{},{},{},{},{},{}",
                    t.trial,
                    rec.a_id,
                    rec.q,
                    rec.k,
                    p.i,
                    p.y,
                    crate::manifest::fmt_f64(p.predicted),
                    crate::manifest::fmt_f64(p.envelope),
                    rec.breach_step.is_some_and(|b| b <= p.i) as u8,
                ));
            }
        }
    }
    rows
}

pub const TRAJECTORY_CSV_HEADER: &str = "trial,A_id,q,k,i,Y,predicted,envelope,breached";

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_two_freeze_rate_matches_process_tree() {
        // exact enumeration gives Pr(freeze) = 1/4
        let mut p = TrpTrialParams::new(2, 1.0, 4000, 9);
        p.jobs = 1;
        let s = trp_trial(&p).unwrap();
        assert!((s.freeze_rate - 0.25).abs() < 0.03, "rate {}", s.freeze_rate);
        // every freeze happens after exactly 2 removals
        for t in &s.per_trial {
            if let Some(f) = t.frozen_at {
                assert_eq!(f, 2);
            }
        }
    }

    #[test]
    fn trajectories_start_exact() {
        let mut p = TrpTrialParams::new(12, 0.5, 2, 3);
        p.track_trajectories = true;
        p.tracked_per_slot = 3;
        let s = trp_trial(&p).unwrap();
        for t in &s.per_trial {
            for rec in &t.trajectories {
                let first = rec.points.first().unwrap();
                assert_eq!(first.i, 0);
                assert_eq!(first.y, 12, "Y_A(0) = n on the complete graph");
                assert_eq!(first.predicted, 12.0);
            }
        }
    }

    #[test]
    fn summary_is_jobs_independent() {
        let mut p = TrpTrialParams::new(6, 0.8, 24, 5);
        p.check_quasirandomness = true;
        p.jobs = 1;
        let a = trp_trial(&p).unwrap();
        p.jobs = 4;
        let b = trp_trial(&p).unwrap();
        assert_eq!(
            serde_json::to_string(&a).unwrap(),
            serde_json::to_string(&b).unwrap()
        );
    }

    #[test]
    fn tallies_partition_trials() {
        let mut p = TrpTrialParams::new(5, 1.0, 60, 1);
        p.check_quasirandomness = true;
        p.epsilon = 0.9;
        let s = trp_trial(&p).unwrap();
        assert_eq!(s.frozen + s.breached + s.quasirandom_all + s.other, s.trials);
    }
}
