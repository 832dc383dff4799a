//! Permutation algebra.
//!
//! Two concrete types live here. [`Permutation`] is an element of `S_n`
//! acting on `{1..n}` and is written in one-line notation, positions and
//! values both 1-based. [`Bijection`] acts on `{0..m-1}`; it is the natural
//! home for cycle-graph encodings, which live on `{0..n}`.
//!
//! Composition is right-to-left everywhere: `a.compose(&b)` maps `x` to
//! `a(b(x))`.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Largest `n` whose factorial fits in a `u64`.
pub const MAX_RANKABLE: usize = 20;

pub fn factorial(n: usize) -> Option<u64> {
    (1..=n as u64).try_fold(1u64, |acc, k| acc.checked_mul(k))
}

/// Disjoint cycles in canonical form: every cycle starts at its minimum and
/// cycles are sorted by that minimum. Fixed points are kept as 1-cycles.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CycleDecomposition {
    cycles: Vec<Vec<usize>>,
}

impl CycleDecomposition {
    /// Follows orbits of `map` over `domain`, scanned in increasing order so
    /// that each new cycle is opened at its minimum.
    fn from_map(domain: std::ops::Range<usize>, map: impl Fn(usize) -> usize) -> Self {
        let offset = domain.start;
        let mut seen = vec![false; domain.len()];
        let mut cycles = Vec::new();
        for start in domain {
            if seen[start - offset] {
                continue;
            }
            let mut cycle = Vec::new();
            let mut x = start;
            while !seen[x - offset] {
                seen[x - offset] = true;
                cycle.push(x);
                x = map(x);
            }
            cycles.push(cycle);
        }
        CycleDecomposition { cycles }
    }

    pub fn cycles(&self) -> &[Vec<usize>] {
        &self.cycles
    }

    /// `c`: number of cycles, fixed points included.
    pub fn count(&self) -> usize {
        self.cycles.len()
    }

    pub fn count_odd(&self) -> usize {
        self.cycles.iter().filter(|c| c.len() % 2 == 1).count()
    }

    pub fn count_even(&self) -> usize {
        self.cycles.iter().filter(|c| c.len() % 2 == 0).count()
    }

    /// `c_k`
    pub fn count_of_length(&self, k: usize) -> usize {
        self.cycles.iter().filter(|c| c.len() == k).count()
    }

    /// `c_1`
    pub fn fixed_points(&self) -> usize {
        self.count_of_length(1)
    }

    /// Cycle lengths in non-decreasing order.
    pub fn cycle_type(&self) -> Vec<usize> {
        let mut t: Vec<usize> = self.cycles.iter().map(Vec::len).collect();
        t.sort_unstable();
        t
    }

    /// Size of the ground set.
    pub fn support_size(&self) -> usize {
        self.cycles.iter().map(Vec::len).sum()
    }

    /// Even iff the number of even-length cycles is even.
    pub fn is_even(&self) -> bool {
        self.count_even().is_multiple_of(2)
    }

    /// Cycle notation such as `(0,4,1,5,3)(2,7,6)`. The identity prints as
    /// `()` when fixed points are omitted.
    pub fn notation(&self, with_fixed_points: bool) -> String {
        let mut out = String::new();
        for c in &self.cycles {
            if c.len() == 1 && !with_fixed_points {
                continue;
            }
            out.push('(');
            let body: Vec<String> = c.iter().map(usize::to_string).collect();
            out.push_str(&body.join(","));
            out.push(')');
        }
        if out.is_empty() {
            out.push_str("()");
        }
        out
    }
}

impl fmt::Display for CycleDecomposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.notation(true))
    }
}

/// Lexicographic (Lehmer-code) rank of a permutation of `S_n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PermRank(pub u64);

/// An element of `S_n` in one-line notation `⟨π_1 π_2 ⋯ π_n⟩`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    // image[i - 1] = π_i, values in 1..=n
    image: Vec<usize>,
}

impl Permutation {
    pub fn new(image: Vec<usize>) -> Result<Self> {
        let n = image.len();
        let mut seen = vec![false; n];
        for &v in &image {
            if v == 0 || v > n || seen[v - 1] {
                return Err(Error::NotAPermutation(format!("{image:?}")));
            }
            seen[v - 1] = true;
        }
        Ok(Permutation { image })
    }

    pub(crate) fn from_vec_unchecked(image: Vec<usize>) -> Self {
        debug_assert!(Permutation::new(image.clone()).is_ok());
        Permutation { image }
    }

    pub fn identity(n: usize) -> Self {
        Permutation { image: (1..=n).collect() }
    }

    /// `χ = ⟨n n-1 ⋯ 1⟩`.
    pub fn reverse(n: usize) -> Self {
        Permutation { image: (1..=n).rev().collect() }
    }

    /// Builds a permutation of `{1..n}` from (not necessarily complete)
    /// disjoint cycles.
    pub fn from_cycles(n: usize, cycles: &[&[usize]]) -> Result<Self> {
        let mut image: Vec<usize> = (1..=n).collect();
        let mut used = vec![false; n + 1];
        for c in cycles {
            for &x in c.iter() {
                if x == 0 || x > n || used[x] {
                    return Err(Error::NotAPermutation(format!("{cycles:?}")));
                }
                used[x] = true;
            }
            for (k, &x) in c.iter().enumerate() {
                image[x - 1] = c[(k + 1) % c.len()];
            }
        }
        Permutation::new(image)
    }

    pub fn len(&self) -> usize {
        self.image.len()
    }

    pub fn is_empty(&self) -> bool {
        self.image.is_empty()
    }

    /// `π_i` for a 1-based position `i`.
    pub fn at(&self, i: usize) -> usize {
        self.image[i - 1]
    }

    pub fn one_line(&self) -> &[usize] {
        &self.image
    }

    pub fn is_identity(&self) -> bool {
        self.image.iter().enumerate().all(|(i, &v)| v == i + 1)
    }

    fn check_size(&self, other: &Permutation) -> Result<()> {
        if self.len() != other.len() {
            return Err(Error::SizeMismatch { left: self.len(), right: other.len() });
        }
        Ok(())
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Permutation) -> Result<Permutation> {
        self.check_size(other)?;
        Ok(Permutation { image: other.image.iter().map(|&x| self.image[x - 1]).collect() })
    }

    pub fn inverse(&self) -> Permutation {
        let mut image = vec![0; self.len()];
        for (i, &v) in self.image.iter().enumerate() {
            image[v - 1] = i + 1;
        }
        Permutation { image }
    }

    /// `self^by = by ∘ self ∘ by⁻¹`, i.e. every element `i` in the cycles of
    /// `self` is relabelled `by(i)`.
    pub fn conjugate(&self, by: &Permutation) -> Result<Permutation> {
        self.check_size(by)?;
        let mut image = vec![0; self.len()];
        for (i, &v) in self.image.iter().enumerate() {
            image[by.image[i] - 1] = by.image[v - 1];
        }
        Ok(Permutation { image })
    }

    pub fn cycles(&self) -> CycleDecomposition {
        CycleDecomposition::from_map(1..self.len() + 1, |x| self.image[x - 1])
    }

    pub fn is_even(&self) -> bool {
        self.cycles().is_even()
    }

    /// `⟨0 π_1 ⋯ π_n⟩` as a bijection on `{0..n}` fixing 0.
    pub fn extended(&self) -> Bijection {
        let mut map = Vec::with_capacity(self.len() + 1);
        map.push(0);
        map.extend_from_slice(&self.image);
        Bijection { map }
    }

    pub fn rank(&self) -> Result<PermRank> {
        let n = self.len();
        if n > MAX_RANKABLE {
            return Err(Error::RankOverflow(n));
        }
        let mut unused: u32 = if n == 0 { 0 } else { (1u32 << n) - 1 };
        let mut r: u64 = 0;
        for (i, &v) in self.image.iter().enumerate() {
            let bit = 1u32 << (v - 1);
            let smaller = (unused & (bit - 1)).count_ones() as u64;
            r = r * (n - i) as u64 + smaller;
            unused &= !bit;
        }
        Ok(PermRank(r))
    }

    pub fn unrank(rank: PermRank, n: usize) -> Result<Permutation> {
        if n > MAX_RANKABLE {
            return Err(Error::RankOverflow(n));
        }
        let total = factorial(n).expect("n <= 20");
        if rank.0 >= total {
            return Err(Error::RankOutOfRange { rank: rank.0, n });
        }
        // Lehmer digits, most significant first.
        let mut digits = vec![0usize; n];
        let mut r = rank.0;
        for i in (0..n).rev() {
            let base = (n - i) as u64;
            digits[i] = (r % base) as usize;
            r /= base;
        }
        let mut pool: Vec<usize> = (1..=n).collect();
        let image = digits.into_iter().map(|d| pool.remove(d)).collect();
        Ok(Permutation { image })
    }

    /// All of `S_n` in rank order.
    pub fn all(n: usize) -> impl Iterator<Item = Permutation> {
        let total = factorial(n).expect("n <= 20");
        (0..total).map(move |r| Permutation::unrank(PermRank(r), n).expect("rank in range"))
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.image.iter().map(usize::to_string).collect();
        f.write_str(&parts.join(" "))
    }
}

impl FromStr for Permutation {
    type Err = Error;

    /// Whitespace- or comma-separated one-line notation, optionally wrapped
    /// in `<>`, `⟨⟩` or `[]`.
    fn from_str(s: &str) -> Result<Self> {
        let parse_err = || Error::Parse { what: "permutation", input: s.to_string() };
        let trimmed = s
            .trim()
            .trim_start_matches(['<', '⟨', '['])
            .trim_end_matches(['>', '⟩', ']']);
        let image = trimmed
            .split(|c: char| c.is_whitespace() || c == ',')
            .filter(|t| !t.is_empty())
            .map(|t| t.parse::<usize>().map_err(|_| parse_err()))
            .collect::<Result<Vec<_>>>()?;
        if image.is_empty() {
            return Err(parse_err());
        }
        Permutation::new(image)
    }
}

/// A bijection on `{0..m-1}`. Encodings of permutations of `S_n` are
/// bijections on `{0..n}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Bijection {
    map: Vec<usize>,
}

impl Bijection {
    pub fn new(map: Vec<usize>) -> Result<Self> {
        let m = map.len();
        let mut seen = vec![false; m];
        for &v in &map {
            if v >= m || seen[v] {
                return Err(Error::NotAPermutation(format!("{map:?}")));
            }
            seen[v] = true;
        }
        Ok(Bijection { map })
    }

    pub(crate) fn from_vec_unchecked(map: Vec<usize>) -> Self {
        debug_assert!(Bijection::new(map.clone()).is_ok());
        Bijection { map }
    }

    pub fn identity(m: usize) -> Self {
        Bijection { map: (0..m).collect() }
    }

    /// `(0,1,2,…,m-1)^k`: adds `k` modulo `m`.
    pub fn rotation(m: usize, k: usize) -> Self {
        Bijection { map: (0..m).map(|x| (x + k) % m).collect() }
    }

    /// Builds a bijection of `{0..m-1}` from disjoint cycles.
    pub fn from_cycles(m: usize, cycles: &[&[usize]]) -> Result<Self> {
        let mut map: Vec<usize> = (0..m).collect();
        let mut used = vec![false; m];
        for c in cycles {
            for &x in c.iter() {
                if x >= m || used[x] {
                    return Err(Error::NotAPermutation(format!("{cycles:?}")));
                }
                used[x] = true;
            }
            for (k, &x) in c.iter().enumerate() {
                map[x] = c[(k + 1) % c.len()];
            }
        }
        Ok(Bijection { map })
    }

    pub fn size(&self) -> usize {
        self.map.len()
    }

    pub fn apply(&self, x: usize) -> usize {
        self.map[x]
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.map
    }

    pub fn fixes(&self, x: usize) -> bool {
        self.map[x] == x
    }

    pub fn is_identity(&self) -> bool {
        self.map.iter().enumerate().all(|(i, &v)| i == v)
    }

    fn check_size(&self, other: &Bijection) -> Result<()> {
        if self.size() != other.size() {
            return Err(Error::SizeMismatch { left: self.size(), right: other.size() });
        }
        Ok(())
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Bijection) -> Result<Bijection> {
        self.check_size(other)?;
        Ok(Bijection { map: other.map.iter().map(|&x| self.map[x]).collect() })
    }

    pub fn inverse(&self) -> Bijection {
        let mut map = vec![0; self.size()];
        for (i, &v) in self.map.iter().enumerate() {
            map[v] = i;
        }
        Bijection { map }
    }

    /// `by ∘ self ∘ by⁻¹`.
    pub fn conjugate(&self, by: &Bijection) -> Result<Bijection> {
        self.check_size(by)?;
        let mut map = vec![0; self.size()];
        for (i, &v) in self.map.iter().enumerate() {
            map[by.map[i]] = by.map[v];
        }
        Ok(Bijection { map })
    }

    pub fn cycles(&self) -> CycleDecomposition {
        CycleDecomposition::from_map(0..self.size(), |x| self.map[x])
    }

    pub fn is_even(&self) -> bool {
        self.cycles().is_even()
    }

    pub fn cycle_type(&self) -> Vec<usize> {
        self.cycles().cycle_type()
    }

    /// Restriction to `{1..m-1}` when `0` is fixed.
    pub fn restricted(&self) -> Option<Permutation> {
        if !self.fixes(0) {
            return None;
        }
        Some(Permutation::from_vec_unchecked(self.map[1..].to_vec()))
    }
}

impl fmt::Display for Bijection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.cycles().notation(false))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(s: &str) -> Permutation {
        s.parse().unwrap()
    }

    #[test]
    fn compose_examples() {
        assert_eq!(p("2 1 3").compose(&p("1 3 2")).unwrap(), p("2 3 1"));
        let pi = p("4 1 6 2 5 7 3");
        assert_eq!(pi.compose(&Permutation::identity(7)).unwrap(), pi);
        assert!(matches!(
            pi.compose(&Permutation::identity(3)),
            Err(Error::SizeMismatch { left: 7, right: 3 })
        ));
    }

    #[test]
    fn compose_on_zero_based_cycles() {
        let grey = Bijection::from_cycles(8, &[&[0, 1, 2, 3, 4, 5, 6, 7]]).unwrap();
        let black = Bijection::from_cycles(8, &[&[0, 3, 7, 5, 2, 6, 1, 4]]).unwrap();
        let prod = grey.compose(&black).unwrap();
        assert_eq!(prod.to_string(), "(0,4,1,5,3)(2,7,6)");
    }

    #[test]
    fn inverse_examples() {
        assert_eq!(p("2 3 1").inverse(), p("3 1 2"));
        assert_eq!(Permutation::identity(5).inverse(), Permutation::identity(5));
        assert_eq!(p("4 1 6 2 5 7 3").inverse(), p("2 4 7 1 5 3 6"));
    }

    #[test]
    fn conjugate_examples() {
        let pi = p("4 1 6 2 5 7 3");
        assert_eq!(pi.conjugate(&Permutation::identity(7)).unwrap(), pi);
        let a = Permutation::from_cycles(3, &[&[1, 3]]).unwrap();
        let s = Permutation::from_cycles(3, &[&[1, 2, 3]]).unwrap();
        let expected = Permutation::from_cycles(3, &[&[1, 2]]).unwrap();
        assert_eq!(a.conjugate(&s).unwrap(), expected);
        assert_eq!(a.conjugate(&s).unwrap().cycles().to_string(), "(1,2)(3)");
    }

    #[test]
    fn conjugation_preserves_cycle_type_exhaustively() {
        for n in 1..=5 {
            let all: Vec<_> = Permutation::all(n).collect();
            for a in &all {
                for s in &all {
                    let c = a.conjugate(s).unwrap();
                    assert_eq!(c.cycles().cycle_type(), a.cycles().cycle_type());
                    // relabelling definition agrees with s ∘ a ∘ s⁻¹
                    let direct = s.compose(a).unwrap().compose(&s.inverse()).unwrap();
                    assert_eq!(c, direct);
                }
            }
        }
    }

    #[test]
    fn cycle_decomposition_examples() {
        let d = p("4 1 6 2 5 7 3").cycles();
        assert_eq!(d.to_string(), "(1,4,2)(3,6,7)(5)");
        assert_eq!((d.count(), d.count_odd(), d.count_even(), d.fixed_points()), (3, 3, 0, 1));
        let id = Permutation::identity(5).cycles();
        assert_eq!(id.fixed_points(), 5);
        assert_eq!(id.count(), 5);
    }

    /// Independent orbit oracle: cycle length of each element by repeated
    /// application, then counts from the per-element lengths.
    #[test]
    fn cycle_counts_match_orbit_oracle_on_s6() {
        for pi in Permutation::all(6) {
            let n = pi.len();
            let orbit_len = |x: usize| {
                let mut y = pi.at(x);
                let mut k = 1;
                while y != x {
                    y = pi.at(y);
                    k += 1;
                }
                k
            };
            let mut c = 0f64;
            let mut c_k = [0f64; 7];
            for x in 1..=n {
                let l = orbit_len(x);
                c += 1.0 / l as f64;
                c_k[l] += 1.0 / l as f64;
            }
            let d = pi.cycles();
            assert_eq!(d.count(), c.round() as usize);
            for (k, expected) in c_k.iter().enumerate().skip(1) {
                assert_eq!(d.count_of_length(k), expected.round() as usize);
            }
            assert_eq!(d.count(), d.count_odd() + d.count_even());
            assert_eq!((1..=6).map(|k| k * d.count_of_length(k)).sum::<usize>(), n);
        }
    }

    #[test]
    fn parity_matches_transposition_count() {
        for n in 1..=6 {
            for pi in Permutation::all(n) {
                let d = pi.cycles();
                assert_eq!(pi.is_even(), (n - d.count()) % 2 == 0);
            }
        }
    }

    #[test]
    fn rank_examples() {
        assert_eq!(Permutation::identity(4).rank().unwrap(), PermRank(0));
        assert_eq!(Permutation::unrank(PermRank(23), 4).unwrap(), p("4 3 2 1"));
        assert!(matches!(
            Permutation::unrank(PermRank(24), 4),
            Err(Error::RankOutOfRange { rank: 24, n: 4 })
        ));
        assert!(matches!(Permutation::identity(21).rank(), Err(Error::RankOverflow(21))));
    }

    #[test]
    fn rank_round_trip_over_s7() {
        let mut prev: Option<Permutation> = None;
        for r in 0..factorial(7).unwrap() {
            let pi = Permutation::unrank(PermRank(r), 7).unwrap();
            assert_eq!(pi.rank().unwrap(), PermRank(r));
            if let Some(q) = &prev {
                assert!(q < &pi, "rank order must be lexicographic");
            }
            prev = Some(pi);
        }
    }

    #[test]
    fn reverse_chi() {
        assert_eq!(Permutation::reverse(3), p("3 2 1"));
        let chi = Permutation::reverse(6);
        assert!(chi.compose(&chi).unwrap().is_identity());
        let pi = p("4 1 6 2 5 7 3");
        let rc = pi.conjugate(&Permutation::reverse(7)).unwrap();
        let n = pi.len();
        for i in 1..=n {
            assert_eq!(rc.at(i), n + 1 - pi.at(n + 1 - i));
        }
    }

    #[test]
    fn parsing() {
        assert_eq!(p("4,1,6 2 5,7 3"), p("4 1 6 2 5 7 3"));
        assert_eq!(p("⟨3 1 2⟩"), p("3 1 2"));
        assert!("1 1 2".parse::<Permutation>().is_err());
        assert!("".parse::<Permutation>().is_err());
        assert!("1 x".parse::<Permutation>().is_err());
        assert!("0 1".parse::<Permutation>().is_err());
    }

    #[test]
    fn restricted_requires_fixed_zero() {
        let pi = p("3 1 2");
        assert_eq!(pi.extended().restricted(), Some(pi));
        assert_eq!(Bijection::rotation(3, 1).restricted(), None);
    }

    fn arb_perm(max_n: usize) -> impl Strategy<Value = Permutation> {
        (1..=max_n).prop_flat_map(|n| {
            Just((1..=n).collect::<Vec<_>>())
                .prop_shuffle()
                .prop_map(|v| Permutation::new(v).unwrap())
        })
    }

    proptest! {
        #[test]
        fn compose_with_inverse_is_identity(pi in arb_perm(12)) {
            prop_assert!(pi.compose(&pi.inverse()).unwrap().is_identity());
            prop_assert!(pi.inverse().compose(&pi).unwrap().is_identity());
        }

        #[test]
        fn composition_is_associative(v in (1usize..10).prop_flat_map(|n| {
            let s = Just((1..=n).collect::<Vec<_>>()).prop_shuffle();
            (s.clone(), s.clone(), s)
        })) {
            let (a, b, c) = (
                Permutation::new(v.0).unwrap(),
                Permutation::new(v.1).unwrap(),
                Permutation::new(v.2).unwrap(),
            );
            let left = a.compose(&b).unwrap().compose(&c).unwrap();
            let right = a.compose(&b.compose(&c).unwrap()).unwrap();
            prop_assert_eq!(left, right);
        }

        #[test]
        fn display_parse_round_trip(pi in arb_perm(15)) {
            prop_assert_eq!(pi.to_string().parse::<Permutation>().unwrap(), pi);
        }
    }
}
