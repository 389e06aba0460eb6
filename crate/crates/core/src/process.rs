//! The triangle removal process and history replay.

use alloc::vec::Vec;
use core::fmt;

use crate::leave::LeaveGraph;
use crate::math;
use crate::model::{PartialLatinSquare, Triple};
use crate::rng::{for_trial, TrpRng};

/// Live state of one process execution. Confined to a single thread;
/// parallelism happens across independent runs.
#[derive(Clone, Debug)]
pub struct TrpState {
    leave: LeaveGraph,
    history: PartialLatinSquare,
    frozen_at: Option<usize>,
    rng: TrpRng,
}

/// One step of the process.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Step {
    Removed(Triple),
    /// No triangle left before the step; the state stays frozen.
    Frozen,
}

impl TrpState {
    /// Process on the complete `K_{n,n,n}`.
    pub fn new(n: usize, seed: u64) -> Self {
        let start = PartialLatinSquare::empty(n).expect("n >= 1");
        Self::from_start_with_rng(start, for_trial(seed, 0))
    }

    /// Process restarted from an existing partial square (its leave graph
    /// is the starting graph).
    pub fn from_start(start: PartialLatinSquare, seed: u64) -> Self {
        Self::from_start_with_rng(start, for_trial(seed, 0))
    }

    pub fn from_start_with_rng(start: PartialLatinSquare, rng: TrpRng) -> Self {
        let leave = LeaveGraph::from_square(&start);
        TrpState {
            leave,
            history: start,
            frozen_at: None,
            rng,
        }
    }

    #[inline]
    pub fn leave(&self) -> &LeaveGraph {
        &self.leave
    }

    /// Removed triples so far, in order (a valid ordered partial square).
    #[inline]
    pub fn history(&self) -> &PartialLatinSquare {
        &self.history
    }

    #[inline]
    pub fn frozen_at(&self) -> Option<usize> {
        self.frozen_at
    }

    /// Samples and removes one uniformly random triangle. Freezing is a
    /// value, never a panic; once frozen every further step returns
    /// [`Step::Frozen`].
    pub fn step(&mut self) -> Step {
        if self.frozen_at.is_some() {
            return Step::Frozen;
        }
        match self.leave.sample_triangle(&mut self.rng) {
            None => {
                self.frozen_at = Some(self.history.len());
                Step::Frozen
            }
            Some(t) => {
                self.leave
                    .remove_triangle(t)
                    .expect("sampled triangles are triangles");
                self.history.push(t).expect("removed triangles never reuse pairs");
                Step::Removed(t)
            }
        }
    }

    /// Runs `steps` more steps (or to the freeze) and returns the outcome.
    pub fn run_to_end(mut self, steps: usize, record_q: bool) -> RunOutcome {
        let mut q_trace = record_q.then(Vec::new);
        for _ in 0..steps {
            if let Some(tr) = q_trace.as_mut() {
                tr.push(self.leave.triangle_count());
            }
            if matches!(self.step(), Step::Frozen) {
                // the recorded Q for the freeze step is 0; drop it so the
                // trace covers exactly the performed removals
                if let Some(tr) = q_trace.as_mut() {
                    tr.pop();
                }
                break;
            }
        }
        RunOutcome {
            square: self.history,
            frozen_at: self.frozen_at,
            q_trace,
        }
    }
}

/// Result of a finished run: the ordered square built so far, the freeze
/// step if the triangles ran out early, and optionally the triangle count
/// before each performed removal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunOutcome {
    pub square: PartialLatinSquare,
    pub frozen_at: Option<usize>,
    pub q_trace: Option<Vec<u64>>,
}

impl RunOutcome {
    #[inline]
    pub fn is_frozen(&self) -> bool {
        self.frozen_at.is_some()
    }
}

/// Run-parameter errors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RunError {
    TooManySteps { requested: usize, max: usize },
}

impl fmt::Display for RunError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RunError::TooManySteps { requested, max } => {
                write!(f, "requested {requested} steps but only {max} cells remain")
            }
        }
    }
}

impl core::error::Error for RunError {}

/// `m` steps of the process from `start`, deterministic in `seed`.
/// Stops at the freeze and reports `frozen_at`, never resampling.
pub fn run(
    start: PartialLatinSquare,
    m: usize,
    seed: u64,
    record_q: bool,
) -> Result<RunOutcome, RunError> {
    let max = start.capacity() - start.len();
    if m > max {
        return Err(RunError::TooManySteps { requested: m, max });
    }
    Ok(TrpState::from_start(start, seed).run_to_end(m, record_q))
}

/// Replay failure: a triple that is not a triangle of the leave graph of
/// the preceding prefix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnreachableStep {
    pub step: usize,
    pub triple: Triple,
}

impl fmt::Display for UnreachableStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "step {}: triple ({}, {}, {}) is not a triangle of the prefix leave graph",
            self.step, self.triple.row, self.triple.col, self.triple.sym
        )
    }
}

impl core::error::Error for UnreachableStep {}

/// The exact triangle counts `Q(L_0), ..., Q(L_{m-1})` seen by a process
/// emitting exactly `square`, obtained by replaying its removals.
pub fn history_q_sequence(square: &PartialLatinSquare) -> Result<Vec<u64>, UnreachableStep> {
    let mut leave = LeaveGraph::complete(square.n());
    let mut qs = Vec::with_capacity(square.len());
    for (i, &t) in square.triples().iter().enumerate() {
        qs.push(leave.triangle_count());
        leave
            .remove_triangle(t)
            .map_err(|_| UnreachableStep { step: i, triple: t })?;
    }
    Ok(qs)
}

/// `log Pr(process emits exactly this ordered square)`, i.e.
/// `sum_i -log Q(L_i)`.
pub fn history_probability(square: &PartialLatinSquare) -> Result<f64, UnreachableStep> {
    let qs = history_q_sequence(square)?;
    Ok(qs.iter().map(|&q| -math::ln(q as f64)).sum())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::cyclic_square;

    #[test]
    fn order_one_completes() {
        let out = run(PartialLatinSquare::empty(1).unwrap(), 1, 5, true).unwrap();
        assert!(!out.is_frozen());
        assert_eq!(out.square.triples(), &[Triple::new(0, 0, 0)]);
        assert_eq!(out.q_trace, Some(alloc::vec![1]));
    }

    #[test]
    fn step_budget_guard() {
        let start = PartialLatinSquare::empty(2).unwrap();
        assert!(run(start.clone(), 5, 0, false).is_err());
        assert!(run(start, 4, 0, false).is_ok());
    }

    #[test]
    fn determinism_bit_for_bit() {
        let a = run(PartialLatinSquare::empty(6).unwrap(), 36, 99, true).unwrap();
        let b = run(PartialLatinSquare::empty(6).unwrap(), 36, 99, true).unwrap();
        assert_eq!(a, b);
        let c = run(PartialLatinSquare::empty(6).unwrap(), 36, 100, true).unwrap();
        assert_ne!(a.square.triples(), c.square.triples());
    }

    #[test]
    fn freeze_is_sticky_and_recorded() {
        for seed in 0..50 {
            let out = run(PartialLatinSquare::empty(2).unwrap(), 4, seed, true).unwrap();
            match out.frozen_at {
                Some(step) => {
                    assert_eq!(step, 2, "order 2 can only freeze after two removals");
                    assert_eq!(out.square.len(), 2);
                    assert_eq!(out.q_trace.as_ref().unwrap().len(), 2);
                }
                None => assert_eq!(out.square.len(), 4),
            }
        }
    }

    #[test]
    fn restart_from_partial_square() {
        let pls = PartialLatinSquare::from_triples(2, [Triple::new(0, 0, 0)]).unwrap();
        let out = run(pls, 3, 1, true).unwrap();
        assert!(out.square.len() <= 4);
        assert_eq!(out.q_trace.as_ref().unwrap()[0], 4);
    }

    #[test]
    fn history_probability_trivial_and_exact() {
        let one = cyclic_square(1).unwrap();
        assert_eq!(history_probability(&one).unwrap(), 0.0);

        // ((1,3,5),(1,4,6),(2,3,6),(2,4,5)) has Q-sequence 8,4,2,1
        let sq = PartialLatinSquare::from_triples(
            2,
            [
                Triple::new(0, 0, 0),
                Triple::new(0, 1, 1),
                Triple::new(1, 0, 1),
                Triple::new(1, 1, 0),
            ],
        )
        .unwrap();
        assert_eq!(history_q_sequence(&sq).unwrap(), alloc::vec![8, 4, 2, 1]);
        let lp = history_probability(&sq).unwrap();
        assert!((lp - (1.0f64 / 64.0).ln()).abs() < 1e-12);
    }

    #[test]
    fn unreachable_step_is_named() {
        // second triple reuses no pair but after removing (0,0,0) the
        // triple (1,1,1)... is still a triangle; craft a real conflict:
        // (0,1,0) shares symbol-column pair with nothing, but (1,1,0)
        // after (0,1,0) lacks the (c=1,s=0) pair
        let sq = PartialLatinSquare::from_triples(
            2,
            [Triple::new(0, 1, 0), Triple::new(1, 0, 0)],
        )
        .unwrap();
        // both triples use symbol 0 with different rows/cols; replay works
        assert!(history_q_sequence(&sq).is_ok());

        // now a genuinely unreachable history: same symbol in same column
        // cannot be built as a PartialLatinSquare, so instead check the
        // error through a prefix whose leave lacks the pair: remove the
        // conflicting pair first via a manual leave walk
        let mut leave = LeaveGraph::complete(2);
        leave.remove_triangle(Triple::new(0, 0, 0)).unwrap();
        assert!(leave.remove_triangle(Triple::new(0, 1, 0)).is_err());
    }
}
