//! Exact completion counting for small orders, and the closed-form
//! quantities behind the completion-count bounds.
//!
//! Two independent backtracking counters are kept deliberately: the naive
//! one fills cells in row-major order, the MRV one always branches on the
//! cell with the fewest admissible symbols. They must agree exactly on
//! every input, which is the crate's counting oracle.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigUint;
use num_traits::ToPrimitive;

use crate::math;
use crate::model::PartialLatinSquare;

/// Which backtracking strategy to use.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    /// Row-major cell order; guard `n <= 7`.
    NaiveDfs,
    /// Minimum-remaining-values cell choice, ties broken by lowest
    /// `(row, column)`; guard `n <= 9`.
    MrvDfs,
}

impl Method {
    pub fn guard(self) -> usize {
        match self {
            Method::NaiveDfs => 7,
            Method::MrvDfs => 9,
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Method::NaiveDfs => write!(f, "naive-dfs"),
            Method::MrvDfs => write!(f, "mrv-dfs"),
        }
    }
}

/// Exact number of full Latin squares containing a given partial square.
#[derive(Clone, Debug, PartialEq)]
pub struct CompletionCount {
    pub exact: BigUint,
    /// Natural log of `exact` (`-inf` when the count is zero).
    pub log_value: f64,
    pub method: Method,
}

#[derive(Clone, Debug, PartialEq)]
pub enum CountError {
    /// Order too large for exhaustive counting; the bound evaluator
    /// (`entropy_upper_bound_log`) covers large orders.
    GuardExceeded { n: usize, method: Method },
    BadAlpha(f64),
    NegativeC(f64),
}

impl fmt::Display for CountError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CountError::GuardExceeded { n, method } => write!(
                f,
                "order {n} exceeds the {method} guard (max {}); use the closed-form bound evaluator instead",
                method.guard()
            ),
            CountError::BadAlpha(a) => write!(f, "alpha {a} outside [0, 1]"),
            CountError::NegativeC(c) => write!(f, "integral parameter C = {c} must be nonnegative"),
        }
    }
}

impl core::error::Error for CountError {}

struct Solver {
    /// symbol bitmasks already used per row / column
    row_used: Vec<u32>,
    col_used: Vec<u32>,
    /// empty cells in row-major order
    cells: Vec<(usize, usize)>,
    filled: Vec<bool>,
    full_mask: u32,
}

impl Solver {
    fn new(p: &PartialLatinSquare) -> Self {
        let n = p.n();
        let mut row_used = vec![0u32; n];
        let mut col_used = vec![0u32; n];
        for t in p.triples() {
            let bit = 1u32 << t.sym;
            row_used[t.row as usize] |= bit;
            col_used[t.col as usize] |= bit;
        }
        let grid = p.to_grid();
        let cells: Vec<(usize, usize)> = (0..n * n)
            .filter(|&i| grid.cells()[i] == 0)
            .map(|i| (i / n, i % n))
            .collect();
        let filled = vec![false; cells.len()];
        Solver {
            row_used,
            col_used,
            cells,
            filled,
            full_mask: if n == 32 { u32::MAX } else { (1u32 << n) - 1 },
        }
    }

    #[inline]
    fn candidates(&self, r: usize, c: usize) -> u32 {
        !(self.row_used[r] | self.col_used[c]) & self.full_mask
    }

    fn count_naive(&mut self, idx: usize) -> u128 {
        if idx == self.cells.len() {
            return 1;
        }
        let (r, c) = self.cells[idx];
        let mut cand = self.candidates(r, c);
        let mut total = 0u128;
        while cand != 0 {
            let bit = cand & cand.wrapping_neg();
            cand &= cand - 1;
            self.row_used[r] |= bit;
            self.col_used[c] |= bit;
            total += self.count_naive(idx + 1);
            self.row_used[r] &= !bit;
            self.col_used[c] &= !bit;
        }
        total
    }

    fn count_mrv(&mut self, remaining: usize) -> u128 {
        if remaining == 0 {
            return 1;
        }
        // lowest (row, col) among the minimum-candidate cells; the cell
        // list is row-major so the first strict minimum wins
        let mut best: Option<(usize, u32)> = None;
        for i in 0..self.cells.len() {
            if self.filled[i] {
                continue;
            }
            let (r, c) = self.cells[i];
            let k = self.candidates(r, c).count_ones();
            if k == 0 {
                return 0;
            }
            if best.map_or(true, |(_, bk)| k < bk) {
                best = Some((i, k));
                if k == 1 {
                    break;
                }
            }
        }
        let (i, _) = best.expect("remaining > 0 means an empty cell exists");
        let (r, c) = self.cells[i];
        let mut cand = self.candidates(r, c);
        let mut total = 0u128;
        self.filled[i] = true;
        while cand != 0 {
            let bit = cand & cand.wrapping_neg();
            cand &= cand - 1;
            self.row_used[r] |= bit;
            self.col_used[c] |= bit;
            total += self.count_mrv(remaining - 1);
            self.row_used[r] &= !bit;
            self.col_used[c] &= !bit;
        }
        self.filled[i] = false;
        total
    }
}

/// Counts the full Latin squares of order `n` that contain `p`.
pub fn exact_completions(
    p: &PartialLatinSquare,
    method: Method,
) -> Result<CompletionCount, CountError> {
    let n = p.n();
    if n > method.guard() {
        return Err(CountError::GuardExceeded { n, method });
    }
    let mut solver = Solver::new(p);
    let count = match method {
        Method::NaiveDfs => solver.count_naive(0),
        Method::MrvDfs => {
            let remaining = solver.cells.len();
            solver.count_mrv(remaining)
        }
    };
    let exact = BigUint::from(count);
    Ok(CompletionCount {
        log_value: ln_big(&exact),
        exact,
        method,
    })
}

/// `ln x` for a big integer; `-inf` at zero.
pub fn ln_big(x: &BigUint) -> f64 {
    if let Some(v) = x.to_u64() {
        return if v == 0 { f64::NEG_INFINITY } else { math::ln(v as f64) };
    }
    let bits = x.bits();
    let shift = bits - 53;
    let mant = (x >> shift).to_u64().expect("53-bit mantissa fits u64");
    math::ln(mant as f64) + shift as f64 * core::f64::consts::LN_2
}

/// `log |ext(P)| = log |L*(P)| + log((N - m)!)`: the number of *ordered*
/// Latin squares extending the ordered square `P`.
pub fn ordered_extension_count(
    p: &PartialLatinSquare,
    method: Method,
) -> Result<f64, CountError> {
    let count = exact_completions(p, method)?;
    let remaining = (p.capacity() - p.len()) as u64;
    Ok(count.log_value + math::ln_factorial(remaining))
}

/// Symbolic description of the multiplicative error of the closed-form
/// bounds; kept out of the numbers on purpose — at small `n` it dominates.
pub const BOUND_SLACK: &str = "per-cell factor 1 + O(n^-a + n^-1/2), not folded in";

/// The two closed-form bounds on `log |L*(L)|` for a quasirandom `L` with
/// `αN` triples. Upper and lower agree in the leading term
/// `N(1-α) (log((1-α)² n) - 2)`; the error factors differ only in the
/// slack, which is reported symbolically.
#[derive(Clone, Debug)]
pub struct BoundEvaluation {
    pub n: usize,
    pub alpha: f64,
    pub upper_log: f64,
    pub lower_log: f64,
    pub slack: &'static str,
}

/// Leading term `N(1-α)(log((1-α)² n) - 2)` shared by both bounds.
/// `alpha = 1` gives the empty product, 0.
pub fn entropy_upper_bound_log(n: usize, alpha: f64) -> Result<BoundEvaluation, CountError> {
    if !(0.0..=1.0).contains(&alpha) {
        return Err(CountError::BadAlpha(alpha));
    }
    let value = entropy_bound_leading_term(n as f64, alpha);
    Ok(BoundEvaluation {
        n,
        alpha,
        upper_log: value,
        lower_log: value,
        slack: BOUND_SLACK,
    })
}

/// Float-order form of the leading term, exposed for the cancellation
/// point `n = e²` where `log n - 2 = 0`.
pub fn entropy_bound_leading_term(n: f64, alpha: f64) -> f64 {
    if alpha >= 1.0 {
        return 0.0;
    }
    let big_n = n * n;
    let rem = 1.0 - alpha;
    big_n * rem * (math::ln(rem * rem * n) - 2.0)
}

/// Closed form of `∫₀¹ log(1 + C t²) dt`:
/// `log(1+C) - 2 + 2 arctan(√C)/√C`, with the limit 0 at `C = 0`.
pub fn integral_identity(c: f64) -> Result<f64, CountError> {
    if c < 0.0 || c.is_nan() {
        return Err(CountError::NegativeC(c));
    }
    if c == 0.0 {
        return Ok(0.0);
    }
    let sq = math::sqrt(c);
    Ok(math::ln(1.0 + c) - 2.0 + 2.0 * math::atan(sq) / sq)
}
