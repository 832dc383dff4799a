//! Closed-form distance bounds and exact formulas, all computed from cycle
//! statistics of `π` and of its encoding `π̄`.

use num_rational::Ratio;
use serde::Serialize;

use crate::cycle_graph::encode;
use crate::error::{Error, Result};
use crate::perm::{Bijection, Permutation};

/// The empty permutation counts as starting with 1.
fn starts_sorted(p: &Permutation) -> bool {
    p.is_empty() || p.at(1) == 1
}

/// `π̃ = ⟨0 π_1 ⋯ π_n n+1⟩`.
fn framed(p: &Permutation) -> Vec<usize> {
    let mut t = Vec::with_capacity(p.len() + 2);
    t.push(0);
    t.extend_from_slice(p.one_line());
    t.push(p.len() + 1);
    t
}

/// Pairs `(π̃_i, π̃_{i+1})`, `0 <= i <= n`, with `π̃_{i+1} = π̃_i + 1`.
pub fn adjacency_count(p: &Permutation) -> usize {
    framed(p).windows(2).filter(|w| w[1] == w[0] + 1).count()
}

/// Prefix transposition breakpoints by direct scan: every non-adjacent pair
/// of `π̃`, where the pair at `i = 0` always counts.
pub fn ptb_by_scan(p: &Permutation) -> usize {
    let t = framed(p);
    1 + t[1..].windows(2).filter(|w| w[1] != w[0] + 1).count()
}

/// Prefix transposition breakpoints from the fixed points of `π̄`.
pub fn ptb_by_cycles(p: &Permutation) -> usize {
    let fixed = encode(p).alt_cycles().fixed_points();
    p.len() + 1 - fixed + usize::from(starts_sorted(p))
}

/// Both computations, which must agree.
pub fn ptb(p: &Permutation) -> usize {
    let scan = ptb_by_scan(p);
    let cycles = ptb_by_cycles(p);
    assert_eq!(scan, cycles, "breakpoint counts disagree on {p}");
    scan
}

/// Unrounded `(ptb - 1) / 2`.
pub fn dm_raw(p: &Permutation) -> Ratio<i64> {
    Ratio::new(ptb(p) as i64 - 1, 2)
}

/// `⌈(ptb - 1) / 2⌉`.
pub fn dm_lower_bound(p: &Permutation) -> usize {
    dm_raw(p).ceil().to_integer() as usize
}

/// `π - 1`, a permutation of `{0..n-1}`.
fn zero_based(p: &Permutation) -> Vec<usize> {
    p.one_line().iter().map(|v| v - 1).collect()
}

/// Number of strips: maximal runs joined by adjacencies `q_{i+1} = q_i + 1`
/// in the 0-based form `q`, not counting a final strip that already ends in
/// place (at `n - 1`).
pub fn strips(p: &Permutation) -> usize {
    let q = zero_based(p);
    let Some(&last) = q.last() else { return 0 };
    let runs = 1 + q.windows(2).filter(|w| w[1] != w[0] + 1).count();
    runs - usize::from(last == q.len() - 1)
}

/// Clans of length at least 3: maximal runs joined by anti-adjacencies
/// `q_i = q_{i+1} + 1`, as 1-based inclusive position intervals.
pub fn clans(p: &Permutation) -> Vec<(usize, usize)> {
    let q = zero_based(p);
    let mut out = Vec::new();
    let mut start = 0;
    for i in 0..q.len() {
        let continues = i + 1 < q.len() && q[i] == q[i + 1] + 1;
        if !continues {
            if i + 1 - start >= 3 {
                out.push((start + 1, i + 1));
            }
            start = i + 1;
        }
    }
    out
}

/// Unrounded `(s + Σ (|C| - 2) / 3) / 2` over strips `s` and clans `C`.
pub fn cs_raw(p: &Permutation) -> Ratio<i64> {
    let excess: i64 = clans(p).iter().map(|&(a, b)| (b + 1 - a) as i64 - 2).sum();
    (Ratio::from_integer(strips(p) as i64) + Ratio::new(excess, 3)) / 2
}

pub fn cs_lower_bound(p: &Permutation) -> usize {
    cs_raw(p).ceil().to_integer() as usize
}

/// `(N + c(q)) / 2 - c_1(q) - [q moves the distinguished element]` for an
/// even `q` on `N` elements: the number of 3-cycles through the
/// distinguished element needed to write `q`.
pub fn d13(q: &Bijection, distinguished: usize) -> Result<usize> {
    if distinguished >= q.size() {
        return Err(Error::InvalidIndices(format!(
            "distinguished element {distinguished} outside a ground set of size {}",
            q.size()
        )));
    }
    let cycles = q.cycles();
    if !cycles.is_even() {
        return Err(Error::OddPermutation);
    }
    let moved = usize::from(!q.fixes(distinguished));
    Ok((q.size() + cycles.count()) / 2 - cycles.fixed_points() - moved)
}

/// `(n + 1 + c(π̄)) / 2 - c_1(π̄) - [π_1 ≠ 1]`.
pub fn ptd_new_lower_bound(p: &Permutation) -> usize {
    let c = encode(p).alt_cycles();
    (p.len() + 1 + c.count()) / 2 - c.fixed_points() - usize::from(!starts_sorted(p))
}

/// `(n + 1 - c(π̄)) / 2`; exact for block-interchanges.
pub fn bid_lower_bound(p: &Permutation) -> usize {
    (p.len() + 1 - encode(p).alt_cycles().count()) / 2
}

/// `(n + 1 - c_odd(π̄)) / 2`.
pub fn td_lower_bound(p: &Permutation) -> usize {
    (p.len() + 1 - encode(p).alt_cycles().count_odd()) / 2
}

/// `n - c_odd(Γ(π))`, using the cycles of `π` itself.
pub fn td_upper_bound(p: &Permutation) -> usize {
    p.len() - p.cycles().count_odd()
}

/// `n + c(π) - 2 c_1(π)`, minus 2 unless `π_1 = 1`.
pub fn pexc_exact(p: &Permutation) -> usize {
    let c = p.cycles();
    let correction = if starts_sorted(p) { 0 } else { 2 };
    p.len() + c.count() - 2 * c.fixed_points() - correction
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct CorollaryChecks {
    /// `2 c_odd(π) <= n - 1 + c_odd(π̄)`
    pub odd_cycles: bool,
    /// `2 c(π) <= n - 1 + c(π̄)`
    pub all_cycles: bool,
}

impl CorollaryChecks {
    pub fn holds(&self) -> bool {
        self.odd_cycles && self.all_cycles
    }
}

pub fn corollary_checks(p: &Permutation) -> CorollaryChecks {
    let n = p.len();
    let own = p.cycles();
    let enc = encode(p).alt_cycles();
    CorollaryChecks {
        odd_cycles: 2 * own.count_odd() < n + enc.count_odd(),
        all_cycles: 2 * own.count() < n + enc.count(),
    }
}

/// Every bound for one permutation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BoundReport {
    pub ptb: usize,
    pub dm_lb: usize,
    pub cs_lb: usize,
    pub new_lb: usize,
    pub bid_lb: usize,
    pub td_lb: usize,
    pub td_ub: usize,
    #[serde(rename = "pexc")]
    pub pexc_exact: usize,
    #[serde(skip)]
    pub strips: usize,
    #[serde(skip)]
    pub clans: Vec<(usize, usize)>,
}

impl BoundReport {
    pub fn new(p: &Permutation) -> Self {
        BoundReport {
            ptb: ptb(p),
            dm_lb: dm_lower_bound(p),
            cs_lb: cs_lower_bound(p),
            new_lb: ptd_new_lower_bound(p),
            bid_lb: bid_lower_bound(p),
            td_lb: td_lower_bound(p),
            td_ub: td_upper_bound(p),
            pexc_exact: pexc_exact(p),
            strips: strips(p),
            clans: clans(p),
        }
    }
}
