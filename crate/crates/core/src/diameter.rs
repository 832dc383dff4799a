//! Permutations far from the identity under prefix transpositions, and an
//! optimal sorter for 2-permutations (those whose encoding consists of
//! 2-cycles only).

use std::fmt;

use serde::Serialize;

use crate::bounds::ptd_new_lower_bound;
use crate::cycle_graph::{build_graph, encode, pullback, AltCycle, CycleGraph};
use crate::error::{Error, Result};
use crate::oracle::{bfs, SearchOptions};
use crate::ops::{FamilyTag, Rearrangement};
use crate::perm::{Bijection, Permutation};

pub fn is_two_permutation(p: &Permutation) -> bool {
    !p.is_empty() && encode(p).alt_cycles().cycles().iter().all(|c| c.len() == 2)
}

/// A permutation whose encoding is a product of `(n+1)/2` disjoint
/// 2-cycles. Only exists for `n ≡ 3 (mod 4)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TwoPermutation(Permutation);

impl TwoPermutation {
    pub fn new(p: Permutation) -> Result<Self> {
        if !is_two_permutation(&p) {
            return Err(Error::NotTwoPermutation);
        }
        Ok(TwoPermutation(p))
    }

    pub fn permutation(&self) -> &Permutation {
        &self.0
    }

    /// `(3n - 1) / 4`
    pub fn distance(&self) -> usize {
        (3 * self.0.len() - 1) / 4
    }
}

/// All 2-permutations of `S_n`, in lexicographic order: pullbacks of the
/// fixed-point-free involutions on `{0..n}`.
pub fn two_permutations(n: usize) -> Vec<Permutation> {
    let m = n + 1;
    if n == 0 || !m.is_multiple_of(4) {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut map = vec![usize::MAX; m];
    fn pair_up(map: &mut Vec<usize>, out: &mut Vec<Permutation>) {
        let Some(a) = map.iter().position(|&x| x == usize::MAX) else {
            let q = Bijection::new(map.clone()).expect("an involution");
            if let Some(p) = pullback(&q) {
                out.push(p);
            }
            return;
        };
        for b in a + 1..map.len() {
            if map[b] == usize::MAX {
                map[a] = b;
                map[b] = a;
                pair_up(map, out);
                map[a] = usize::MAX;
                map[b] = usize::MAX;
            }
        }
    }
    pair_up(&mut map, &mut out);
    out.sort();
    out
}

/// The 2-permutation `⟨3 2 1 4 7 6 5 8 11 10 9 ⋯⟩` for `n ≡ 3 (mod 4)`:
/// reversed triples, each followed by the next value in place.
fn interleaved_two_permutation(n: usize) -> Permutation {
    let mut image = Vec::with_capacity(n);
    let mut base = 0;
    while base < n {
        image.extend([base + 3, base + 2, base + 1]);
        base += 3;
        if base < n {
            image.push(base + 1);
            base += 1;
        }
    }
    Permutation::from_vec_unchecked(image)
}

/// Inserts a new fixed point at element `at` of an encoding, shifting every
/// element `>= at` up by one.
pub fn insert_fixed_point(q: &Bijection, at: usize) -> Bijection {
    let shift = |x: usize| if x >= at { x + 1 } else { x };
    let mut map = vec![0; q.size() + 1];
    for x in 0..q.size() {
        map[shift(x)] = shift(q.apply(x));
    }
    map[at] = at;
    Bijection::from_vec_unchecked(map)
}

fn pull_back_checked(q: &Bijection, expected_type: &[usize]) -> Result<Permutation> {
    let p = pullback(q)
        .ok_or_else(|| Error::IdentityViolation(format!("{q} is not the encoding of a permutation")))?;
    let got = encode(&p).bijection().cycle_type();
    if got != expected_type {
        return Err(Error::IdentityViolation(format!(
            "pulled back {p} has cycle type {got:?}, expected {expected_type:?}"
        )));
    }
    Ok(p)
}

fn type_of(ones: usize, twos: usize, threes: usize) -> Vec<usize> {
    let mut t = vec![1; ones];
    t.extend(std::iter::repeat_n(2, twos));
    t.extend(std::iter::repeat_n(3, threes));
    t
}

/// A permutation of `S_n`, `n >= 3`, whose cycle-graph lower bound on the
/// prefix transposition distance is `⌊3n/4⌋`.
pub fn construct_extremal(n: usize) -> Result<Permutation> {
    if n < 3 {
        return Err(Error::TooSmall(n));
    }
    match n % 4 {
        3 => {
            let p = interleaved_two_permutation(n);
            pull_back_checked(encode(&p).bijection(), &type_of(0, n.div_ceil(2), 0))
        }
        0 => {
            let base = encode(&interleaved_two_permutation(n - 1)).into_bijection();
            pull_back_checked(&insert_fixed_point(&base, 1), &type_of(1, n / 2, 0))
        }
        1 => {
            let base = encode(&interleaved_two_permutation(n - 2)).into_bijection();
            let q = insert_fixed_point(&insert_fixed_point(&base, 1), 1);
            pull_back_checked(&q, &type_of(2, (n - 1) / 2, 0))
        }
        _ => {
            let mut image = if n >= 6 {
                interleaved_two_permutation(n - 3).one_line().to_vec()
            } else {
                Vec::new()
            };
            image.extend([n - 2, n, n - 1]);
            let p = Permutation::new(image)?;
            pull_back_checked(encode(&p).bijection(), &type_of(0, (n - 2) / 2, 1))
        }
    }
}

/// Another cycle whose black arcs interleave those of the 2-cycle `c1`:
/// positions `a < c < b < d` or `c < a < d < b`. Candidates are scanned by
/// the position of their arcs, smallest first.
pub fn find_crossing(g: &CycleGraph, c1: &AltCycle) -> Result<AltCycle> {
    if c1.len() != 2 {
        return Err(Error::NoCrossing(format!("expected a 2-cycle, got length {}", c1.len())));
    }
    let own = c1.positions();
    let (a, b) = (own[0], own[1]);
    let inside = |x: usize| a < x && x < b;
    for arc in g.black_arcs() {
        let candidate = g.cycle_of(arc.position);
        if candidate.positions() == own {
            continue;
        }
        let pos = candidate.positions();
        let has_inside = pos.iter().any(|&x| inside(x));
        let has_outside = pos.iter().any(|&x| x < a || x > b);
        if has_inside && has_outside {
            return Ok(candidate.clone());
        }
    }
    Err(Error::NoCrossing(format!("arcs at positions {a} and {b}")))
}

/// Prefix transpositions that, right-composed onto `start` in order, sort it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SortingSequence {
    pub start: Permutation,
    pub ops: Vec<Rearrangement>,
}

impl SortingSequence {
    pub fn len(&self) -> usize {
        self.ops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }

    /// `start` followed by the permutation after each operation.
    pub fn intermediates(&self) -> Vec<Permutation> {
        let mut out = vec![self.start.clone()];
        for op in &self.ops {
            let next = out.last().unwrap().compose(&op.realise()).expect("same size");
            out.push(next);
        }
        out
    }

    pub fn result(&self) -> Permutation {
        self.intermediates().pop().unwrap()
    }

    pub fn tokens(&self) -> Vec<String> {
        self.ops.iter().map(|op| op.to_string()).collect()
    }
}

impl fmt::Display for SortingSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.tokens().join(" "))
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SortingReport {
    pub start: String,
    pub ops: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub intermediates: Option<Vec<String>>,
}

impl SortingSequence {
    pub fn report(&self, with_intermediates: bool) -> SortingReport {
        SortingReport {
            start: self.start.to_string(),
            ops: self.tokens(),
            intermediates: with_intermediates
                .then(|| self.intermediates().iter().map(|p| p.to_string()).collect()),
        }
    }
}

fn fixed_points(p: &Permutation) -> usize {
    encode(p).alt_cycles().fixed_points()
}

/// Sorts a 2-permutation with `(3n - 1) / 4` prefix transpositions.
///
/// While `π_1 ≠ 1` the 2-cycle through the first black arc is resolved with
/// a crossing 2-cycle in two moves, creating four adjacencies. Once
/// `π_1 = 1`, one move carries the sorted prefix behind the next 2-cycle
/// without changing the cycle structure.
pub fn sort_two_permutation(p: &TwoPermutation) -> Result<SortingSequence> {
    let n = p.0.len();
    let mut current = p.0.clone();
    let mut ops = Vec::new();
    let apply = |current: &mut Permutation, ops: &mut Vec<Rearrangement>, j, l| -> Result<()> {
        let op = Rearrangement::prefix_transposition(n, j, l)?;
        *current = current.compose(&op.realise())?;
        ops.push(op);
        Ok(())
    };
    while !current.is_identity() {
        let g = build_graph(&current);
        if current.at(1) != 1 {
            let before = fixed_points(&current);
            let c1 = g.cycle_of(1).clone();
            let j = c1.positions()[1];
            let c2 = find_crossing(&g, &c1)?;
            let (i, k) = match c2.positions()[..] {
                [i, k] if 1 < i && i < j && j < k => (i, k),
                _ => {
                    return Err(Error::NoCrossing(format!(
                        "{current}: partner {:?} of arcs 1, {j} is not a crossing 2-cycle",
                        c2.positions()
                    )))
                }
            };
            apply(&mut current, &mut ops, i, k)?;
            apply(&mut current, &mut ops, j - i + 1, k - i + 1)?;
            if fixed_points(&current) != before + 4 {
                return Err(Error::IdentityViolation(format!(
                    "resolving a crossing pair did not create four adjacencies in {current}"
                )));
            }
        } else {
            let v = g.vertices();
            let first = (1..=n).find(|&x| v[x] != v[x - 1] + 1).expect("not the identity");
            let c = g.cycle_of(first);
            let k = *c.positions().last().unwrap();
            let before = encode(&current).bijection().cycle_type();
            apply(&mut current, &mut ops, first, k)?;
            if encode(&current).bijection().cycle_type() != before {
                return Err(Error::IdentityViolation(format!(
                    "repositioning the sorted prefix changed the cycle type of {current}"
                )));
            }
        }
    }
    if ops.len() != p.distance() {
        return Err(Error::IdentityViolation(format!(
            "sorted {} in {} moves instead of {}",
            p.0,
            ops.len(),
            p.distance()
        )));
    }
    Ok(SortingSequence { start: p.0.clone(), ops })
}

#[derive(Clone, Debug, Serialize)]
pub struct DiameterRow {
    pub n: usize,
    pub permutation: String,
    pub floor_three_quarters: usize,
    pub new_lb: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exact_ptd: Option<u8>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sorter_len: Option<usize>,
    pub holds: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct DiameterReport {
    pub rows: Vec<DiameterRow>,
    pub holds: bool,
}

/// Checks the extremal family for `3 <= n <= n_max`: the lower bound always,
/// the exact distance where the search cap allows, and the sorter length
/// whenever the member is a 2-permutation.
pub fn verify_diameter_family(n_max: usize, opts: &SearchOptions) -> Result<DiameterReport> {
    let mut rows = Vec::new();
    for n in 3..=n_max {
        let p = construct_extremal(n)?;
        let floor = 3 * n / 4;
        let new_lb = ptd_new_lower_bound(&p);
        let exact_ptd = if n <= opts.cap.min(crate::oracle::HARD_CAP) {
            Some(bfs(n, FamilyTag::Ptd, opts)?.distance(&p)?)
        } else {
            None
        };
        let sorter_len = match TwoPermutation::new(p.clone()) {
            Ok(t) => Some(sort_two_permutation(&t)?.len()),
            Err(_) => None,
        };
        let holds = new_lb >= floor
            && exact_ptd.is_none_or(|d| d as usize >= floor)
            && sorter_len.is_none_or(|l| l == new_lb);
        rows.push(DiameterRow {
            n,
            permutation: p.to_string(),
            floor_three_quarters: floor,
            new_lb,
            exact_ptd,
            sorter_len,
            holds,
        });
    }
    let holds = rows.iter().all(|r| r.holds);
    Ok(DiameterReport { rows, holds })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cycle_graph::BlackArc;
    use crate::descents::descent_report;
    use crate::oracle::bfs;
    use rand::seq::SliceRandom;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn p(s: &str) -> Permutation {
        s.parse().unwrap()
    }

    #[test]
    fn recognises_two_permutations() {
        assert!(is_two_permutation(&p("3 2 1")));
        for n in 1..6 {
            assert!(!is_two_permutation(&Permutation::identity(n)));
        }
        assert!(TwoPermutation::new(p("2 1")).is_err());
    }

    #[test]
    fn enumeration_matches_filter() {
        for n in 1..=7 {
            let filtered: Vec<Permutation> =
                Permutation::all(n).filter(is_two_permutation).collect();
            assert_eq!(two_permutations(n), filtered, "n = {n}");
        }
        assert_eq!(two_permutations(3), vec![p("3 2 1")]);
        assert_eq!(two_permutations(7).len(), 21);
    }

    #[test]
    fn extremal_examples() {
        let three = construct_extremal(3).unwrap();
        assert_eq!(three, p("3 2 1"));
        assert_eq!(encode(&three).to_string(), "(0,2)(1,3)");
        assert_eq!(ptd_new_lower_bound(&three), 2);

        let seven = construct_extremal(7).unwrap();
        assert!(is_two_permutation(&seven));
        assert_eq!(encode(&seven).bijection().cycle_type(), vec![2; 4]);
        assert_eq!(ptd_new_lower_bound(&seven), 5);

        assert_eq!(ptd_new_lower_bound(&construct_extremal(4).unwrap()), 3);
        assert_eq!(ptd_new_lower_bound(&construct_extremal(6).unwrap()), 4);
        assert!(matches!(construct_extremal(2), Err(Error::TooSmall(2))));
    }

    #[test]
    fn extremal_bounds_and_types_up_to_sixty() {
        for n in 3..=60 {
            let q = construct_extremal(n).unwrap();
            let ty = encode(&q).bijection().cycle_type();
            let expected = match n % 4 {
                3 => type_of(0, n.div_ceil(2), 0),
                0 => type_of(1, n / 2, 0),
                1 => type_of(2, (n - 1) / 2, 0),
                _ => type_of(0, (n - 2) / 2, 1),
            };
            assert_eq!(ty, expected, "n = {n}");
            let value = match n % 4 {
                3 => (3 * n - 1) / 4,
                0 => 3 * n / 4,
                1 => (3 * n - 3) / 4,
                _ => (3 * n - 2) / 4,
            };
            assert_eq!(ptd_new_lower_bound(&q), value);
            assert_eq!(value, 3 * n / 4);
        }
    }

    #[test]
    fn fixed_point_insertion_prepends_a_sorted_element() {
        let base = p("3 2 1");
        let q = insert_fixed_point(encode(&base).bijection(), 1);
        assert_eq!(pullback(&q).unwrap(), p("1 4 3 2"));
    }

    #[test]
    fn crossing_in_reverse() {
        let g = build_graph(&p("3 2 1"));
        assert_eq!(g.alt_cycles().len(), 2);
        let c1 = g.alt_cycles()[0].clone();
        let c2 = find_crossing(&g, &c1).unwrap();
        assert_eq!(c1.positions(), vec![1, 3]);
        assert_eq!(c2.positions(), vec![2, 4]);
        assert_eq!(find_crossing(&g, &c2).unwrap(), c1);
    }

    #[test]
    fn every_two_cycle_crosses_in_s7() {
        for q in two_permutations(7) {
            let g = build_graph(&q);
            for c in g.alt_cycles() {
                let partner = find_crossing(&g, c).unwrap();
                assert_eq!(partner.len(), 2);
            }
        }
    }

    #[test]
    fn lone_two_cycle_has_no_partner() {
        // arcs 1 and 2 form a 2-cycle, arcs 3 and 4 are trivial
        let arc = |position, tail, head| BlackArc { position, tail, head };
        let c1 = AltCycle { arcs: vec![arc(1, 2, 0), arc(2, 1, 2)] };
        let cycles = vec![
            c1.clone(),
            AltCycle { arcs: vec![arc(3, 3, 1)] },
            AltCycle { arcs: vec![arc(4, 0, 3)] },
        ];
        let g = CycleGraph::from_parts(3, vec![0, 2, 1, 3], cycles);
        assert!(matches!(find_crossing(&g, &c1), Err(Error::NoCrossing(_))));
        let trivial = g.alt_cycles()[1].clone();
        assert!(find_crossing(&g, &trivial).is_err());
    }

    #[test]
    fn sorts_reverse_in_two_moves() {
        let s = sort_two_permutation(&TwoPermutation::new(p("3 2 1")).unwrap()).unwrap();
        assert_eq!(s.len(), 2);
        assert!(s.result().is_identity());
        assert!(s.ops.iter().all(Rearrangement::is_prefix));
    }

    #[test]
    fn sorter_is_optimal_on_all_of_s7() {
        let table = bfs(7, FamilyTag::Ptd, &SearchOptions::default()).unwrap();
        for q in two_permutations(7) {
            let s = sort_two_permutation(&TwoPermutation::new(q.clone()).unwrap()).unwrap();
            assert_eq!(s.len(), 5);
            assert!(s.result().is_identity());
            assert_eq!(table.distance(&q).unwrap(), 5);
            assert_eq!(descent_report(&q).des, 4);
        }
    }

    #[test]
    fn sorter_on_all_of_s11() {
        let all = two_permutations(11);
        assert!(!all.is_empty());
        for q in all {
            let t = TwoPermutation::new(q).unwrap();
            let s = sort_two_permutation(&t).unwrap();
            assert_eq!(s.len(), 8);
            assert_eq!(ptd_new_lower_bound(t.permutation()), 8);
            assert!(s.result().is_identity());
        }
    }

    #[test]
    fn sorter_on_sampled_n15() {
        let mut rng = ChaCha8Rng::seed_from_u64(15);
        let all = two_permutations(15);
        for q in all.choose_multiple(&mut rng, 300) {
            let s = sort_two_permutation(&TwoPermutation::new(q.clone()).unwrap()).unwrap();
            assert_eq!(s.len(), 11);
            assert!(s.result().is_identity());
        }
    }

    #[test]
    fn diameter_family_report() {
        let report = verify_diameter_family(8, &SearchOptions::default()).unwrap();
        assert!(report.holds);
        let seven = &report.rows[4];
        assert_eq!((seven.n, seven.new_lb, seven.sorter_len), (7, 5, Some(5)));
        let six = &report.rows[3];
        assert_eq!((six.new_lb, six.floor_three_quarters), (4, 4));
    }
}
