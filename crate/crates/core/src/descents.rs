//! Descents of a permutation and how they distribute over the alternating
//! cycles of its cycle graph.

use rayon::prelude::*;
use serde::Serialize;

use crate::cycle_graph::build_graph;
use crate::error::{Error, Result};
use crate::oracle::HARD_CAP;
use crate::perm::{factorial, PermRank, Permutation};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CycleDescents {
    /// Cycle of the encoding, as the tails of its black arcs.
    pub cycle: Vec<usize>,
    pub descents: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DescentReport {
    /// Positions `i` with `π_i < π_{i-1}`, always within `2..=n`.
    pub positions: Vec<usize>,
    pub des: usize,
    pub per_cycle: Vec<CycleDescents>,
}

impl DescentReport {
    /// Each cycle of length `ℓ >= 2` holds between 1 and `ℓ - 1` descents,
    /// 1-cycles hold none, and the counts add up to `des`.
    pub fn within_bounds(&self) -> bool {
        let total: usize = self.per_cycle.iter().map(|c| c.descents).sum();
        total == self.des
            && self.per_cycle.iter().all(|c| match c.cycle.len() {
                1 => c.descents == 0,
                l => (1..l).contains(&c.descents),
            })
    }
}

/// The descent at position `i` belongs to the cycle owning the black arc
/// `(π_i, π_{i-1})`. The arc into `π_0` and the wrap arc never carry one.
pub fn descent_report(p: &Permutation) -> DescentReport {
    let n = p.len();
    let positions: Vec<usize> = (2..=n).filter(|&i| p.at(i) < p.at(i - 1)).collect();
    let g = build_graph(p);
    let per_cycle = g
        .alt_cycles()
        .iter()
        .map(|c| CycleDescents {
            cycle: c.tails(),
            descents: c
                .arcs
                .iter()
                .filter(|a| (2..=n).contains(&a.position) && a.tail < a.head)
                .count(),
        })
        .collect();
    DescentReport { des: positions.len(), positions, per_cycle }
}

/// Whether every permutation of `S_n` satisfies [`DescentReport::within_bounds`].
pub fn check_descent_bounds(n: usize) -> Result<bool> {
    if n > HARD_CAP {
        return Err(Error::CapExceeded { n, cap: HARD_CAP });
    }
    let total = factorial(n).expect("n <= 12");
    Ok((0..total).into_par_iter().all(|r| {
        let p = Permutation::unrank(PermRank(r), n).expect("rank in range");
        descent_report(&p).within_bounds()
    }))
}
