//! The property suite behind `permcycle verify`: every identity and bound
//! checked against exhaustive enumeration or the search oracle.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::bounds::{
    bid_lower_bound, corollary_checks, dm_lower_bound, pexc_exact, ptb_by_cycles, ptb_by_scan,
    ptd_new_lower_bound, td_lower_bound, td_upper_bound,
};
use crate::cycle_graph::{
    compose_identity_check, composed_inverse_encoding, encode, inverse_encoding,
    reverse_complement_encoding, toric_encodings, toric_shift,
};
use crate::descents::{check_descent_bounds, descent_report};
use crate::diameter::{sort_two_permutation, two_permutations, verify_diameter_family, TwoPermutation};
use crate::error::Result;
use crate::oracle::{bfs, SearchOptions};
use crate::ops::FamilyTag;
use crate::perm::{Bijection, Permutation};

#[derive(Clone, Debug)]
pub struct VerifyOptions {
    /// Largest `n` for the exhaustive bound checks.
    pub max_n: usize,
    pub search: SearchOptions,
    /// Random instances of size 10 per algebraic identity.
    pub random_instances: usize,
    pub seed: u64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions { max_n: 8, search: SearchOptions::default(), random_instances: 10_000, seed: 1 }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub checked: u64,
    pub failures: u64,
}

impl CheckOutcome {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

/// Counts instances and failures of `check` over all of `S_n` for each `n`.
fn exhaustive(ns: impl IntoIterator<Item = usize>, check: impl Fn(&Permutation) -> bool + Sync) -> (u64, u64) {
    let mut checked = 0;
    let mut failures = 0;
    for n in ns {
        let all: Vec<Permutation> = Permutation::all(n).collect();
        checked += all.len() as u64;
        failures += all.par_iter().filter(|p| !check(p)).count() as u64;
    }
    (checked, failures)
}

fn pairs(n: usize, check: impl Fn(&Permutation, &Permutation) -> bool + Sync) -> (u64, u64) {
    let all: Vec<Permutation> = Permutation::all(n).collect();
    let failures = all
        .par_iter()
        .map(|a| all.iter().filter(|b| !check(a, b)).count() as u64)
        .sum();
    ((all.len() * all.len()) as u64, failures)
}

fn random_perm(rng: &mut ChaCha8Rng, n: usize) -> Permutation {
    let mut v: Vec<usize> = (1..=n).collect();
    v.shuffle(rng);
    Permutation::new(v).expect("a shuffle of 1..n")
}

fn toric_holds(p: &Permutation) -> bool {
    let size = p.len() + 1;
    let base = encode(p).into_bijection();
    let shifted_ok = (0..size).all(|m| {
        let rotated = base.conjugate(&Bijection::rotation(size, m)).expect("same size");
        encode(&toric_shift(p, m)).into_bijection() == rotated
    });
    let class: std::collections::BTreeSet<Bijection> =
        (0..size).map(|m| encode(&toric_shift(p, m)).into_bijection()).collect();
    shifted_ok && class == toric_encodings(p)
}

fn add(acc: (u64, u64), more: (u64, u64)) -> (u64, u64) {
    (acc.0 + more.0, acc.1 + more.1)
}

pub fn run_suite(opts: &VerifyOptions) -> Result<Vec<CheckOutcome>> {
    let mut out = Vec::new();
    let mut push = |name, (checked, failures): (u64, u64)| {
        out.push(CheckOutcome { name, checked, failures });
    };
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let randoms: Vec<(Permutation, Permutation)> = (0..opts.random_instances)
        .map(|_| (random_perm(&mut rng, 10), random_perm(&mut rng, 10)))
        .collect();
    let on_randoms = |f: &(dyn Fn(&Permutation, &Permutation) -> bool + Sync)| -> (u64, u64) {
        let failures = randoms.par_iter().filter(|(a, b)| !f(a, b)).count() as u64;
        (randoms.len() as u64, failures)
    };

    let composition = |a: &Permutation, b: &Permutation| compose_identity_check(a, b).unwrap_or(false);
    let mut acc = (0, 0);
    for n in 0..=5 {
        acc = add(acc, pairs(n, composition));
    }
    push("composition identity", add(acc, on_randoms(&composition)));

    let inverse = |a: &Permutation, _: &Permutation| inverse_encoding(a).is_ok();
    let acc = exhaustive(0..=5, |a| inverse(a, a));
    push("inverse encoding", add(acc, on_randoms(&inverse)));

    let composed = |a: &Permutation, b: &Permutation| composed_inverse_encoding(a, b).is_ok();
    let mut acc = (0, 0);
    for n in 0..=5 {
        acc = add(acc, pairs(n, composed));
    }
    push("composed inverse encoding", add(acc, on_randoms(&composed)));

    let chi = |a: &Permutation, _: &Permutation| reverse_complement_encoding(a).is_ok();
    let acc = exhaustive(0..=5, |a| chi(a, a));
    push("reverse complement encoding", add(acc, on_randoms(&chi)));

    let toric = |a: &Permutation, _: &Permutation| toric_holds(a);
    let acc = exhaustive(0..=5, toric_holds);
    push("toric conjugation", add(acc, on_randoms(&toric)));

    let max_n = opts.max_n;
    push("breakpoint formulas agree", exhaustive(1..=max_n, |p| ptb_by_scan(p) == ptb_by_cycles(p)));
    push("dominance over the breakpoint bound", exhaustive(1..=max_n, |p| {
        ptd_new_lower_bound(p) >= dm_lower_bound(p)
    }));
    push("corollary inequalities", exhaustive(1..=max_n.min(7), |p| corollary_checks(p).holds()));

    let small = 6.min(opts.search.cap);
    let bid = bfs(small, FamilyTag::Bid, &opts.search)?;
    let td = bfs(small, FamilyTag::Td, &opts.search)?;
    let pexc = bfs(small, FamilyTag::Pexc, &opts.search)?;
    let ptd = bfs(small, FamilyTag::Ptd, &opts.search)?;
    let at = |t: &crate::oracle::DistanceTable, p: &Permutation| t.distance(p).expect("size matches") as usize;
    push("block-interchange formula is exact", exhaustive([small], |p| at(&bid, p) == bid_lower_bound(p)));
    push("prefix exchange formula is exact", exhaustive([small], |p| at(&pexc, p) == pexc_exact(p)));
    push("transposition sandwich", exhaustive([small], |p| {
        let d = at(&td, p);
        td_lower_bound(p) <= d && d <= td_upper_bound(p)
    }));
    push("prefix transposition lower bound", exhaustive([small], |p| ptd_new_lower_bound(p) <= at(&ptd, p)));

    let family = verify_diameter_family(max_n.max(3), &opts.search)?;
    let failures = family.rows.iter().filter(|r| !r.holds).count() as u64;
    push("extremal family", (family.rows.len() as u64, failures));

    let sevens = two_permutations(7);
    let table7 = bfs(7, FamilyTag::Ptd, &opts.search)?;
    let failures = sevens
        .par_iter()
        .filter(|q| {
            let t = TwoPermutation::new((*q).clone()).expect("enumerated 2-permutation");
            let sorted = sort_two_permutation(&t);
            !matches!(sorted, Ok(s) if s.len() == 5 && s.result().is_identity())
                || table7.distance(q).expect("size matches") != 5
                || descent_report(q).des != 4
        })
        .count() as u64;
    push("2-permutation sorter", (sevens.len() as u64, failures));

    let mut descents = (0, 0);
    for n in 0..=7 {
        descents = add(descents, (1, u64::from(!check_descent_bounds(n)?)));
    }
    push("descents per cycle", descents);

    Ok(out)
}
