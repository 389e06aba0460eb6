//! History-probability ratio study.
//!
//! Draws pairs of independent process histories of the same length,
//! replays each to get the exact per-step triangle counts and the exact
//! `h = 2` deviation of every prefix, and relates the per-step
//! probability ratio terms `Q'(i)/Q(i)` to the measured deviations: each
//! term must lie within `1 ± 4 dev_i` (with `dev_i` the larger of the two
//! prefix deviations) and the paired `|log ratio|` within
//! `sum_i 4 dev_i`. Frozen runs are discarded and resampled, with the
//! discard count reported.

use anyhow::{bail, Result};
use serde::Serialize;
use trp_core::model::PartialLatinSquare;
use trp_core::process::{Step, TrpState};
use trp_core::quasirand;
use trp_core::rng::for_trial;

use super::run_trials;

#[derive(Clone, Debug)]
pub struct RatioStudyParams {
    pub n: usize,
    pub alpha: f64,
    pub pairs: usize,
    pub seed: u64,
    pub jobs: usize,
    /// Attempts allowed per run slot before giving up on freezes.
    pub max_resamples: usize,
}

impl RatioStudyParams {
    pub fn new(n: usize, alpha: f64, pairs: usize, seed: u64) -> Self {
        RatioStudyParams {
            n,
            alpha,
            pairs,
            seed,
            jobs: 0,
            max_resamples: 100,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct RatioPairRow {
    pub pair: u64,
    pub log_pr_l: f64,
    pub log_pr_lp: f64,
    pub abs_log_ratio: f64,
    /// `sum_i 4 dev_i`, the term-wise bound budget.
    pub sum_4dev: f64,
    /// Per-step terms `Q'(i)/Q(i)` falling outside `1 ± 4 dev_i`.
    pub term_violations: usize,
    /// Smallest margin `min(term - lower, upper - term)` over all steps.
    pub min_term_margin: f64,
    pub discarded_frozen: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct RatioSummary {
    pub pairs: usize,
    pub steps: usize,
    pub max_abs_log_ratio: f64,
    pub total_term_violations: usize,
    pub bound_violations: usize,
    pub total_discarded_frozen: usize,
    pub per_pair: Vec<RatioPairRow>,
}

/// One run of `m` steps together with the per-prefix exact data the study
/// needs: `Q(i)` and the exact worst `h = 2` deviation of each prefix
/// `i = 0..m-1`.
struct ReplayedRun {
    qs: Vec<u64>,
    devs: Vec<f64>,
}

fn run_with_prefix_data(n: usize, m: usize, seed: u64, stream: u64) -> Option<ReplayedRun> {
    let start = PartialLatinSquare::empty(n).expect("n >= 1");
    let mut state = TrpState::from_start_with_rng(start, for_trial(seed, stream));
    let mut qs = Vec::with_capacity(m);
    let mut devs = Vec::with_capacity(m);
    for _ in 0..m {
        qs.push(state.leave().triangle_count());
        devs.push(quasirand::check_exact(state.leave(), 0.0, 2).worst_deviation());
        if matches!(state.step(), Step::Frozen) {
            return None;
        }
    }
    Some(ReplayedRun { qs, devs })
}

pub fn history_ratio_study(params: &RatioStudyParams) -> Result<RatioSummary> {
    if params.n > 64 {
        bail!("ratio study replays exactly; --n is limited to 64");
    }
    if !(params.alpha > 0.0 && params.alpha <= 1.0) {
        bail!("--alpha {} outside (0, 1]", params.alpha);
    }
    let m = (params.alpha * (params.n * params.n) as f64) as usize;

    let per_pair = run_trials(params.jobs, params.pairs, |pair| {
        // deterministic stream allocation: each (pair, side, attempt)
        // has its own stream, so resampling keeps trials independent
        let mut discarded = 0usize;
        let mut fetch = |side: u64| {
            for attempt in 0..params.max_resamples as u64 {
                let stream = pair * 2 * params.max_resamples as u64
                    + side * params.max_resamples as u64
                    + attempt;
                match run_with_prefix_data(params.n, m, params.seed, stream) {
                    Some(r) => return Some(r),
                    None => discarded += 1,
                }
            }
            None
        };
        let l = fetch(0);
        let lp = fetch(1);
        let (l, lp) = match (l, lp) {
            (Some(a), Some(b)) => (a, b),
            _ => {
                return RatioPairRow {
                    pair,
                    log_pr_l: f64::NAN,
                    log_pr_lp: f64::NAN,
                    abs_log_ratio: f64::NAN,
                    sum_4dev: f64::NAN,
                    term_violations: usize::MAX,
                    min_term_margin: f64::NAN,
                    discarded_frozen: discarded,
                }
            }
        };
        let log_pr_l: f64 = l.qs.iter().map(|&q| -(q as f64).ln()).sum();
        let log_pr_lp: f64 = lp.qs.iter().map(|&q| -(q as f64).ln()).sum();
        let mut sum_4dev = 0.0;
        let mut term_violations = 0usize;
        let mut min_term_margin = f64::INFINITY;
        for i in 0..m {
            let dev = l.devs[i].max(lp.devs[i]);
            let term = lp.qs[i] as f64 / l.qs[i] as f64;
            let (lo, hi) = (1.0 - 4.0 * dev, 1.0 + 4.0 * dev);
            let margin = (term - lo).min(hi - term);
            min_term_margin = min_term_margin.min(margin);
            if margin < 0.0 {
                term_violations += 1;
            }
            sum_4dev += 4.0 * dev;
        }
        RatioPairRow {
            pair,
            log_pr_l,
            log_pr_lp,
            abs_log_ratio: (log_pr_l - log_pr_lp).abs(),
            sum_4dev,
            term_violations,
            min_term_margin,
            discarded_frozen: discarded,
        }
    });

    let max_abs_log_ratio = per_pair
        .iter()
        .map(|r| r.abs_log_ratio)
        .fold(0.0, f64::max);
    let total_term_violations = per_pair.iter().map(|r| r.term_violations).sum();
    let bound_violations = per_pair
        .iter()
        .filter(|r| r.abs_log_ratio > r.sum_4dev)
        .count();
    let total_discarded_frozen = per_pair.iter().map(|r| r.discarded_frozen).sum();
    Ok(RatioSummary {
        pairs: params.pairs,
        steps: m,
        max_abs_log_ratio,
        total_term_violations,
        bound_violations,
        total_discarded_frozen,
        per_pair,
    })
}

pub const RATIO_CSV_HEADER: &str =
    "pair,log_pr_l,log_pr_lp,abs_log_ratio,sum_4dev,term_violations,min_term_margin,discarded_frozen";

pub fn ratio_csv_rows(summary: &RatioSummary) -> Vec<String> {
    summary
        .per_pair
        .iter()
        .map(|r| {
            format!(
                "{},{},{},{},{},{},{},{}",
                r.pair,
                crate::manifest::fmt_f64(r.log_pr_l),
                crate::manifest::fmt_f64(r.log_pr_lp),
                crate::manifest::fmt_f64(r.abs_log_ratio),
                crate::manifest::fmt_f64(r.sum_4dev),
                r.term_violations,
                crate::manifest::fmt_f64(r.min_term_margin),
                r.discarded_frozen
            )
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identical_histories_have_zero_ratio() {
        // n = 2 completed squares all have probability 1/64, so any two
        // non-frozen runs of length 4 have |log ratio| = 0
        let mut p = RatioStudyParams::new(2, 1.0, 10, 3);
        p.jobs = 1;
        let s = history_ratio_study(&p).unwrap();
        for r in &s.per_pair {
            assert!((r.log_pr_l - (1.0f64 / 64.0).ln()).abs() < 1e-12);
            assert!(r.abs_log_ratio < 1e-12);
        }
    }

    #[test]
    fn small_study_obeys_bounds() {
        let mut p = RatioStudyParams::new(8, 0.5, 5, 7);
        p.jobs = 1;
        let s = history_ratio_study(&p).unwrap();
        assert_eq!(s.total_term_violations, 0);
        assert_eq!(s.bound_violations, 0);
        assert!(s.max_abs_log_ratio.is_finite());
    }
}
