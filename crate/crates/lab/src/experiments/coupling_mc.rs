//! Monte Carlo studies of the permutation coupling between the removal
//! process and the binomial-plus-conflict-deletion model.

use anyhow::{bail, Result};
use serde::Serialize;
use trp_core::coupling::{binomial_sample, conflict_delete, coupled_run, Hypergraph};
use trp_core::rng::for_trial;

use super::run_trials;

#[derive(Clone, Debug, Serialize)]
pub struct CoupleTrialRow {
    pub trial: u64,
    pub b: usize,
    pub frozen: bool,
    pub applicable: bool,
    pub invariant_holds: bool,
    pub l_star_len: usize,
    pub accepted: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct CoupleSummary {
    pub trials: usize,
    pub alpha_n: usize,
    pub applicable: usize,
    pub violations: usize,
    pub frozen: usize,
    pub mean_b: f64,
    pub mean_l_star: f64,
    pub per_trial: Vec<CoupleTrialRow>,
}

/// Runs `trials` coupled draws and checks `l_star ⊆ L` on every
/// applicable one (`B <= αN`, greedy not frozen).
pub fn couple_mc(n: usize, alpha: f64, trials: usize, seed: u64, jobs: usize) -> Result<CoupleSummary> {
    if !(alpha > 0.0 && alpha < 1.0) {
        bail!("--alpha {alpha} outside (0, 1)");
    }
    let per_trial = run_trials(jobs, trials, |trial| {
        let mut rng = for_trial(seed, trial);
        let cr = coupled_run(n, alpha, &mut rng);
        CoupleTrialRow {
            trial,
            b: cr.b,
            frozen: cr.run.is_frozen(),
            applicable: cr.applicable(),
            invariant_holds: cr.invariant_holds(),
            l_star_len: cr.l_star.len(),
            accepted: cr.run.square.len(),
        }
    });
    let applicable = per_trial.iter().filter(|t| t.applicable).count();
    let violations = per_trial.iter().filter(|t| !t.invariant_holds).count();
    let frozen = per_trial.iter().filter(|t| t.frozen).count();
    let mean_b = per_trial.iter().map(|t| t.b as f64).sum::<f64>() / trials.max(1) as f64;
    let mean_l_star =
        per_trial.iter().map(|t| t.l_star_len as f64).sum::<f64>() / trials.max(1) as f64;
    Ok(CoupleSummary {
        trials,
        alpha_n: (alpha * (n * n) as f64) as usize,
        applicable,
        violations,
        frozen,
        mean_b,
        mean_l_star,
        per_trial,
    })
}

/// Re-deletes the survivors of `trials` random hypergraphs; returns how
/// many were not fixed points (must be 0: survivors never conflict).
pub fn conflict_idempotence_mc(n: usize, p: f64, trials: usize, seed: u64, jobs: usize) -> usize {
    run_trials(jobs, trials, |trial| {
        let mut rng = for_trial(seed, trial);
        let h = binomial_sample(n, p, &mut rng);
        let once = conflict_delete(&h);
        let twice = conflict_delete(&Hypergraph {
            n,
            edges: once.triples().to_vec(),
        });
        usize::from(!once.same_triples(&twice))
    })
    .into_iter()
    .sum()
}

#[derive(Clone, Debug, Serialize)]
pub struct TransferSummary {
    pub trials: usize,
    /// Row-coverage threshold `t` in the monotone property
    /// "at least `t` triples use row 1".
    pub threshold: usize,
    pub p_process_fail_not_frozen: f64,
    pub p_deletion_fail: f64,
    /// Ratio of the two, the empirical transfer constant.
    pub fitted_k: f64,
}

/// Empirical check of the monotone-property transfer: compares
/// `Pr(not P and not frozen)` under the process against `Pr(not P)` under
/// the deletion model, for the monotone property "contains at least
/// `threshold` triples covering row 1".
pub fn transfer_study(
    n: usize,
    alpha: f64,
    threshold: usize,
    trials: usize,
    seed: u64,
    jobs: usize,
) -> Result<TransferSummary> {
    if !(alpha > 0.0 && alpha < 1.0) {
        bail!("--alpha {alpha} outside (0, 1)");
    }
    let alpha_n = (alpha * (n * n) as f64) as usize;
    let rows = run_trials(jobs, trials, |trial| {
        let mut rng = for_trial(seed, trial);
        // process side, via the greedy form on the same trial generator
        let cr = coupled_run(n, alpha, &mut rng);
        let proc_row1 = cr
            .run
            .square
            .triples()
            .iter()
            .filter(|t| t.row == 0)
            .count();
        let proc_fail_not_frozen = !cr.run.is_frozen() && proc_row1 < threshold;
        // independent deletion-model side
        let mut rng2 = for_trial(seed ^ 0x5bd1_e995, trial);
        let h = binomial_sample(n, alpha / n as f64, &mut rng2);
        let del = conflict_delete(&h);
        let del_row1 = del.triples().iter().filter(|t| t.row == 0).count();
        let del_fail = del_row1 < threshold;
        (proc_fail_not_frozen, del_fail)
    });
    let _ = alpha_n;
    let p_proc = rows.iter().filter(|r| r.0).count() as f64 / trials.max(1) as f64;
    let p_del = rows.iter().filter(|r| r.1).count() as f64 / trials.max(1) as f64;
    let fitted_k = if p_del > 0.0 { p_proc / p_del } else { f64::INFINITY };
    Ok(TransferSummary {
        trials,
        threshold,
        p_process_fail_not_frozen: p_proc,
        p_deletion_fail: p_del,
        fitted_k,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_coupling_run_is_clean() {
        let s = couple_mc(6, 0.3, 200, 3, 1).unwrap();
        assert_eq!(s.violations, 0);
        assert!(s.applicable > 20);
        // E[B] = alpha n² = 10.8
        assert!((s.mean_b - 10.8).abs() < 1.5, "mean B {}", s.mean_b);
    }

    #[test]
    fn idempotence_never_fails() {
        assert_eq!(conflict_idempotence_mc(5, 0.1, 200, 4, 1), 0);
    }

    #[test]
    fn transfer_constant_is_finite_and_small() {
        let s = transfer_study(10, 0.3, 2, 400, 5, 1).unwrap();
        assert!(s.p_deletion_fail > 0.0);
        assert!(s.fitted_k <= 10.0, "K = {}", s.fitted_k);
    }
}
