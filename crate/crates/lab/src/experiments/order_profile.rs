//! Random-ordering profile of a fixed full Latin square.
//!
//! Each trial orders the square's `N` hyperedges uniformly at random and
//! checks the leave graph of selected prefixes for quasirandomness; the
//! summary reports the fraction of trials whose every checkpoint passed.

use anyhow::{bail, Result};
use rand::seq::SliceRandom;
use serde::Serialize;
use trp_core::leave::LeaveGraph;
use trp_core::model::PartialLatinSquare;
use trp_core::quasirand::{self, CheckMode};
use trp_core::rng::for_trial;

use super::{geometric_checkpoints, run_trials};

#[derive(Clone, Debug)]
pub struct OrderProfileParams {
    pub alpha: f64,
    pub epsilon: f64,
    pub h: usize,
    pub checkpoints: Option<Vec<usize>>,
    pub trials: usize,
    pub seed: u64,
    pub samples: usize,
    pub jobs: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct OrderProfileTrial {
    pub trial: u64,
    pub pass: bool,
    /// Worst deviation per checkpoint, aligned with the grid.
    pub worst_devs: Vec<f64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct OrderProfileSummary {
    pub trials: usize,
    pub checkpoint_grid: Vec<usize>,
    pub passed: usize,
    pub pass_rate: f64,
    /// Max worst deviation per checkpoint across trials.
    pub checkpoint_max_dev: Vec<f64>,
    pub per_trial: Vec<OrderProfileTrial>,
}

pub fn random_order_profile(
    square: &PartialLatinSquare,
    params: &OrderProfileParams,
) -> Result<OrderProfileSummary> {
    if !square.is_full() {
        bail!(
            "order profile needs a full Latin square ({} of {} triples present)",
            square.len(),
            square.capacity()
        );
    }
    if !(params.alpha > 0.0 && params.alpha < 1.0) {
        bail!("--alpha {} outside (0, 1)", params.alpha);
    }
    let big_n = square.capacity();
    let m = (params.alpha * big_n as f64) as usize;
    let grid = params
        .checkpoints
        .clone()
        .unwrap_or_else(|| geometric_checkpoints(m));
    if let Some(&bad) = grid.iter().find(|&&i| i > m) {
        bail!("checkpoint {bad} beyond the step budget {m}");
    }

    let per_trial = run_trials(params.jobs, params.trials, |trial| {
        let mut rng = for_trial(params.seed, trial);
        let mut order: Vec<_> = square.triples().to_vec();
        order.shuffle(&mut rng);
        // walk the prefix through the leave graph, checking at checkpoints
        let mut leave = LeaveGraph::complete(square.n());
        let mut worst_devs = Vec::with_capacity(grid.len());
        let mut pass = true;
        let mut next_cp = 0usize;
        for i in 0..=m {
            if next_cp < grid.len() && grid[next_cp] == i {
                let report = quasirand::check(
                    &leave,
                    params.epsilon,
                    params.h,
                    CheckMode::Auto(params.samples),
                    &mut rng,
                );
                worst_devs.push(report.worst_deviation());
                pass &= report.quasirandom;
                next_cp += 1;
            }
            if i == m {
                break;
            }
            // every triple of a Latin square is a triangle of the leave
            // graph of any prefix not containing it
            leave
                .remove_triangle(order[i])
                .expect("prefix triples are triangles");
        }
        OrderProfileTrial { trial, pass, worst_devs }
    });

    let passed = per_trial.iter().filter(|t| t.pass).count();
    let checkpoint_max_dev = (0..grid.len())
        .map(|c| {
            per_trial
                .iter()
                .map(|t| t.worst_devs[c])
                .fold(0.0, f64::max)
        })
        .collect();
    Ok(OrderProfileSummary {
        trials: params.trials,
        checkpoint_grid: grid,
        passed,
        pass_rate: passed as f64 / params.trials.max(1) as f64,
        checkpoint_max_dev,
        per_trial,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use trp_core::model::cyclic_square;

    fn base_params() -> OrderProfileParams {
        OrderProfileParams {
            alpha: 0.5,
            epsilon: 0.4,
            h: 2,
            checkpoints: None,
            trials: 4,
            seed: 2,
            samples: 1000,
            jobs: 1,
        }
    }

    #[test]
    fn rejects_partial_squares_and_bad_alpha() {
        let sq = cyclic_square(3).unwrap();
        let partial = sq.prefix(5).unwrap();
        assert!(random_order_profile(&partial, &base_params()).is_err());
        let mut p = base_params();
        p.alpha = 1.0;
        assert!(random_order_profile(&sq, &p).is_err());
    }

    #[test]
    fn checkpoint_zero_always_passes() {
        let sq = cyclic_square(4).unwrap();
        let mut p = base_params();
        p.checkpoints = Some(vec![0]);
        let s = random_order_profile(&sq, &p).unwrap();
        assert_eq!(s.pass_rate, 1.0);
        assert_eq!(s.checkpoint_max_dev, vec![0.0]);
    }

    #[test]
    fn order_two_first_prefix_deviation_is_one_third() {
        // by symmetry of the order-2 square every first triple gives the
        // same k=1 deviation 1/3
        let sq = cyclic_square(2).unwrap();
        let mut p = base_params();
        p.checkpoints = Some(vec![1]);
        p.trials = 8;
        p.h = 1;
        let s = random_order_profile(&sq, &p).unwrap();
        for t in &s.per_trial {
            assert!((t.worst_devs[0] - 1.0 / 3.0).abs() < 1e-12);
        }
    }
}
