//! Monte Carlo harnesses over the core process.
//!
//! Trials are embarrassingly parallel: trial `t` draws its generator from
//! `(master_seed, t)` via the ChaCha stream mechanism, and results are
//! aggregated by trial index, so summaries are identical for any `--jobs`
//! value.

pub mod coupling_mc;
pub mod extension_ratio;
pub mod order_profile;
pub mod ratio_study;
pub mod trp_trial;

use rayon::prelude::*;

/// Geometric checkpoint grid: 0, 1, 2, 4, ... plus the endpoint `m`.
pub fn geometric_checkpoints(m: usize) -> Vec<usize> {
    let mut cps = vec![0];
    let mut i = 1;
    while i < m {
        cps.push(i);
        i *= 2;
    }
    if m > 0 {
        cps.push(m);
    }
    cps.dedup();
    cps
}

/// Runs `trials` independent jobs on a scoped thread pool (`jobs = 0`
/// means the rayon default) and returns results in trial order.
pub fn run_trials<T: Send>(
    jobs: usize,
    trials: usize,
    f: impl Fn(u64) -> T + Sync + Send,
) -> Vec<T> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .expect("thread pool");
    pool.install(|| (0..trials as u64).into_par_iter().map(f).collect())
}

/// Quantile of a sorted slice by nearest-rank.
pub fn quantile(sorted: &[f64], q: f64) -> f64 {
    if sorted.is_empty() {
        return f64::NAN;
    }
    let rank = ((sorted.len() as f64 * q).ceil() as usize).clamp(1, sorted.len());
    sorted[rank - 1]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn checkpoint_grids() {
        assert_eq!(geometric_checkpoints(0), vec![0]);
        assert_eq!(geometric_checkpoints(1), vec![0, 1]);
        assert_eq!(geometric_checkpoints(10), vec![0, 1, 2, 4, 8, 10]);
        assert_eq!(geometric_checkpoints(8), vec![0, 1, 2, 4, 8]);
    }

    #[test]
    fn trial_order_is_scheduling_independent() {
        let a = run_trials(1, 16, |t| t * t);
        let b = run_trials(4, 16, |t| t * t);
        assert_eq!(a, b);
    }
}
