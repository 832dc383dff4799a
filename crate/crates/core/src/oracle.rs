//! Exact distances by breadth-first search over the Cayley graph of `S_n`.
//!
//! Distances are kept in a dense byte array indexed by Lehmer rank. The
//! search is level-synchronous: at level `d` either every frontier state
//! pushes `d + 1` onto its unseen neighbours, or, once fewer states are
//! unseen than on the frontier, every unseen state pulls `d + 1` from any
//! neighbour at distance `d`. Every write in a level stores the same value,
//! so the table does not depend on scheduling.

use std::io::{Read, Write};
use std::sync::atomic::{AtomicU8, Ordering};

use rayon::prelude::*;
use serde::Serialize;

use crate::bounds::{cs_raw, ptb, ptd_new_lower_bound};
use crate::error::{Error, Result};
use crate::ops::{FamilyTag, GeneratorFamily};
use crate::perm::{factorial, PermRank, Permutation};

/// Largest `n` searched unless the caller raises the cap.
pub const DEFAULT_CAP: usize = 10;
/// Largest `n` the search supports at all.
pub const HARD_CAP: usize = 12;

const UNSEEN: u8 = u8::MAX;
const MAGIC: &[u8; 4] = b"PCDT";
const DUMP_VERSION: u16 = 1;
const HEADER_LEN: usize = 8;
const CHUNK: usize = 1 << 12;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchOptions {
    pub cap: usize,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions { cap: DEFAULT_CAP }
    }
}

impl SearchOptions {
    pub fn with_cap(cap: usize) -> Self {
        SearchOptions { cap }
    }

    /// Fails with [`Error::CapExceeded`] when `n` is beyond the cap.
    pub fn check(&self, n: usize) -> Result<()> {
        let cap = self.cap.min(HARD_CAP);
        if n > cap {
            return Err(Error::CapExceeded { n, cap });
        }
        Ok(())
    }
}

/// Bytes needed for the distance table of `S_n`.
pub fn memory_estimate(n: usize) -> Option<u64> {
    factorial(n)
}

/// Exact distances to the identity for every permutation of `S_n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DistanceTable {
    n: usize,
    family: FamilyTag,
    dist: Vec<u8>,
}

impl DistanceTable {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn family(&self) -> FamilyTag {
        self.family
    }

    /// Distances indexed by rank.
    pub fn distances(&self) -> &[u8] {
        &self.dist
    }

    pub fn generated_count(&self) -> usize {
        self.dist.len()
    }

    pub fn at_rank(&self, rank: PermRank) -> u8 {
        self.dist[rank.0 as usize]
    }

    pub fn distance(&self, p: &Permutation) -> Result<u8> {
        if p.len() != self.n {
            return Err(Error::SizeMismatch { left: self.n, right: p.len() });
        }
        Ok(self.at_rank(p.rank()?))
    }

    /// The family's diameter on `S_n`.
    pub fn max(&self) -> u8 {
        self.dist.iter().copied().max().unwrap_or(0)
    }

    /// Number of permutations at each distance.
    pub fn histogram(&self) -> Vec<u64> {
        let mut h = vec![0u64; self.max() as usize + 1];
        for &d in &self.dist {
            h[d as usize] += 1;
        }
        h
    }

    pub fn write_to<W: Write>(&self, mut w: W) -> Result<()> {
        w.write_all(MAGIC)?;
        w.write_all(&DUMP_VERSION.to_le_bytes())?;
        w.write_all(&[self.n as u8, self.family.code()])?;
        w.write_all(&self.dist)?;
        w.flush()?;
        Ok(())
    }

    pub fn read_from<R: Read>(mut r: R) -> Result<Self> {
        let mut header = [0u8; HEADER_LEN];
        r.read_exact(&mut header)
            .map_err(|e| Error::BadDump(format!("short header: {e}")))?;
        if &header[..4] != MAGIC {
            return Err(Error::BadDump("bad magic".into()));
        }
        let version = u16::from_le_bytes([header[4], header[5]]);
        if version != DUMP_VERSION {
            return Err(Error::BadDump(format!("unsupported version {version}")));
        }
        let n = header[6] as usize;
        if n > HARD_CAP {
            return Err(Error::BadDump(format!("n = {n} is beyond the supported range")));
        }
        let family = FamilyTag::from_code(header[7])
            .ok_or_else(|| Error::BadDump(format!("unknown family code {}", header[7])))?;
        let expected = factorial(n).expect("n <= 12") as usize;
        let mut dist = Vec::with_capacity(expected);
        r.read_to_end(&mut dist)?;
        if dist.len() != expected {
            return Err(Error::BadDump(format!(
                "expected {expected} distances for n = {n}, found {}",
                dist.len()
            )));
        }
        if dist.contains(&UNSEEN) {
            return Err(Error::BadDump("table contains unreached states".into()));
        }
        Ok(DistanceTable { n, family, dist })
    }
}

struct Ranker {
    n: usize,
    // fact[k] = k!
    fact: [u64; HARD_CAP + 1],
}

impl Ranker {
    fn new(n: usize) -> Self {
        let mut fact = [1u64; HARD_CAP + 1];
        for k in 1..=HARD_CAP {
            fact[k] = fact[k - 1] * k as u64;
        }
        Ranker { n, fact }
    }

    /// Rank of a 0-based image.
    fn rank(&self, v: &[u8]) -> u64 {
        let mut unused: u32 = (1u32 << self.n) - 1;
        let mut r = 0u64;
        for (i, &x) in v.iter().enumerate() {
            let bit = 1u32 << x;
            r += (unused & (bit - 1)).count_ones() as u64 * self.fact[self.n - 1 - i];
            unused &= !bit;
        }
        r
    }

    fn unrank(&self, mut r: u64, out: &mut [u8]) {
        let mut unused: u32 = (1u32 << self.n) - 1;
        for (i, slot) in out.iter_mut().enumerate().take(self.n) {
            let f = self.fact[self.n - 1 - i];
            let mut d = r / f;
            r %= f;
            let mut bits = unused;
            while d > 0 {
                bits &= bits - 1;
                d -= 1;
            }
            let x = bits.trailing_zeros();
            *slot = x as u8;
            unused &= !(1u32 << x);
        }
    }
}

/// Full breadth-first search from the identity.
pub fn bfs(n: usize, tag: FamilyTag, opts: &SearchOptions) -> Result<DistanceTable> {
    opts.check(n)?;
    let family = GeneratorFamily::new(tag, n);
    if n == 0 {
        return Err(Error::EmptyFamily { family: tag, n });
    }
    if !family.is_symmetric() {
        return Err(Error::NotSymmetric(tag));
    }
    let gens: Vec<Vec<u8>> = family
        .permutations()
        .iter()
        .map(|g| g.one_line().iter().map(|&x| (x - 1) as u8).collect())
        .collect();

    let total = factorial(n).expect("n <= 12") as usize;
    let ranker = Ranker::new(n);
    let dist: Vec<AtomicU8> = (0..total).map(|_| AtomicU8::new(UNSEEN)).collect();
    dist[0].store(0, Ordering::Relaxed);

    let neighbour_rank = |pi: &[u8], g: &[u8], buf: &mut [u8]| {
        for (slot, &gi) in buf.iter_mut().zip(g) {
            *slot = pi[gi as usize];
        }
        ranker.rank(buf) as usize
    };

    let mut level: u8 = 0;
    let mut frontier = 1usize;
    let mut unseen = total - 1;
    while frontier > 0 && unseen > 0 {
        let next = level + 1;
        if unseen < frontier {
            (0..total).into_par_iter().with_min_len(CHUNK).for_each_init(
                || ([0u8; HARD_CAP], [0u8; HARD_CAP]),
                |(pi, buf), r| {
                    if dist[r].load(Ordering::Relaxed) != UNSEEN {
                        return;
                    }
                    ranker.unrank(r as u64, &mut pi[..n]);
                    for g in &gens {
                        let s = neighbour_rank(&pi[..n], g, &mut buf[..n]);
                        if dist[s].load(Ordering::Relaxed) == level {
                            dist[r].store(next, Ordering::Relaxed);
                            break;
                        }
                    }
                },
            );
        } else {
            (0..total).into_par_iter().with_min_len(CHUNK).for_each_init(
                || ([0u8; HARD_CAP], [0u8; HARD_CAP]),
                |(pi, buf), r| {
                    if dist[r].load(Ordering::Relaxed) != level {
                        return;
                    }
                    ranker.unrank(r as u64, &mut pi[..n]);
                    for g in &gens {
                        let s = neighbour_rank(&pi[..n], g, &mut buf[..n]);
                        if dist[s].load(Ordering::Relaxed) == UNSEEN {
                            dist[s].store(next, Ordering::Relaxed);
                        }
                    }
                },
            );
        }
        frontier = dist
            .par_iter()
            .with_min_len(CHUNK)
            .filter(|d| d.load(Ordering::Relaxed) == next)
            .count();
        unseen -= frontier;
        level = next;
    }
    if unseen > 0 {
        return Err(Error::IdentityViolation(format!(
            "{tag} does not generate S_{n}: {unseen} permutations unreached"
        )));
    }
    let dist = dist.into_iter().map(AtomicU8::into_inner).collect();
    Ok(DistanceTable { n, family: tag, dist })
}

pub fn exact_distance(p: &Permutation, tag: FamilyTag, opts: &SearchOptions) -> Result<u8> {
    bfs(p.len(), tag, opts)?.distance(p)
}

pub fn diameter_of(n: usize, tag: FamilyTag, opts: &SearchOptions) -> Result<u8> {
    Ok(bfs(n, tag, opts)?.max())
}

/// Counts of permutations whose exact prefix transposition distance equals
/// each lower bound, the first two taken unrounded.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Table1Row {
    pub n: usize,
    pub total: u64,
    pub tight_dm: u64,
    pub tight_cs: u64,
    pub tight_new: u64,
}

/// Counts of permutations whose exact prefix transposition distance exceeds
/// the cycle-graph lower bound by each gap.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Table2Row {
    pub n: usize,
    pub total: u64,
    pub gaps: Vec<u64>,
}

/// Column counts of one table from an existing prefix transposition table.
pub fn table1_row(table: &DistanceTable) -> Result<Table1Row> {
    check_ptd(table)?;
    let n = table.n;
    let counts = table
        .dist
        .par_iter()
        .enumerate()
        .with_min_len(CHUNK)
        .map(|(r, &d)| {
            let p = Permutation::unrank(PermRank(r as u64), n).expect("rank in range");
            let d = d as i64;
            [
                u64::from(ptb(&p) as i64 - 1 == 2 * d),
                u64::from(cs_raw(&p) == d.into()),
                u64::from(ptd_new_lower_bound(&p) as i64 == d),
            ]
        })
        .reduce(|| [0; 3], |a, b| [a[0] + b[0], a[1] + b[1], a[2] + b[2]]);
    Ok(Table1Row {
        n,
        total: table.dist.len() as u64,
        tight_dm: counts[0],
        tight_cs: counts[1],
        tight_new: counts[2],
    })
}

pub fn table2_row(table: &DistanceTable) -> Result<Table2Row> {
    check_ptd(table)?;
    let n = table.n;
    let gaps = table
        .dist
        .par_iter()
        .enumerate()
        .with_min_len(CHUNK)
        .fold(Vec::new, |mut acc: Vec<u64>, (r, &d)| {
            let p = Permutation::unrank(PermRank(r as u64), n).expect("rank in range");
            let lb = ptd_new_lower_bound(&p);
            let gap = (d as usize).checked_sub(lb).unwrap_or_else(|| {
                panic!("lower bound {lb} exceeds exact distance {d} for {p}")
            });
            if acc.len() <= gap {
                acc.resize(gap + 1, 0);
            }
            acc[gap] += 1;
            acc
        })
        .reduce(Vec::new, |a, b| {
            let (mut long, short) = if a.len() >= b.len() { (a, b) } else { (b, a) };
            for (x, y) in long.iter_mut().zip(short) {
                *x += y;
            }
            long
        });
    Ok(Table2Row { n, total: table.dist.len() as u64, gaps })
}

fn check_ptd(table: &DistanceTable) -> Result<()> {
    if table.family != FamilyTag::Ptd {
        return Err(Error::WrongFamily { expected: FamilyTag::Ptd, found: table.family });
    }
    Ok(())
}

pub fn table1(max_n: usize, opts: &SearchOptions) -> Result<Vec<Table1Row>> {
    opts.check(max_n)?;
    (1..=max_n).map(|n| table1_row(&bfs(n, FamilyTag::Ptd, opts)?)).collect()
}

pub fn table2(max_n: usize, opts: &SearchOptions) -> Result<Vec<Table2Row>> {
    opts.check(max_n)?;
    (1..=max_n).map(|n| table2_row(&bfs(n, FamilyTag::Ptd, opts)?)).collect()
}

pub fn table1_tsv(rows: &[Table1Row]) -> String {
    let mut out = String::from("n\tn!\ttight_dm\ttight_cs\ttight_new\n");
    for r in rows {
        out.push_str(&format!(
            "{}\t{}\t{}\t{}\t{}\n",
            r.n, r.total, r.tight_dm, r.tight_cs, r.tight_new
        ));
    }
    out
}

/// At least the gaps 0 through 3, more if any row needs them.
pub fn table2_tsv(rows: &[Table2Row]) -> String {
    let width = rows.iter().map(|r| r.gaps.len()).max().unwrap_or(0).max(4);
    let mut out = String::from("n\tn!");
    for g in 0..width {
        out.push_str(&format!("\tdelta{g}"));
    }
    out.push('\n');
    for r in rows {
        out.push_str(&format!("{}\t{}", r.n, r.total));
        for g in 0..width {
            out.push_str(&format!("\t{}", r.gaps.get(g).copied().unwrap_or(0)));
        }
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bounds::{bid_lower_bound, pexc_exact, td_lower_bound, td_upper_bound};
    use std::collections::{HashMap, VecDeque};

    fn opts() -> SearchOptions {
        SearchOptions::default()
    }

    /// Plain queue-based search over one-line vectors.
    fn naive_bfs(n: usize, tag: FamilyTag) -> HashMap<Permutation, u8> {
        let gens = GeneratorFamily::new(tag, n).permutations();
        let mut dist = HashMap::new();
        let mut queue = VecDeque::new();
        dist.insert(Permutation::identity(n), 0u8);
        queue.push_back(Permutation::identity(n));
        while let Some(p) = queue.pop_front() {
            let d = dist[&p];
            for g in &gens {
                let q = p.compose(g).unwrap();
                if !dist.contains_key(&q) {
                    dist.insert(q.clone(), d + 1);
                    queue.push_back(q);
                }
            }
        }
        dist
    }

    #[test]
    fn ranker_matches_permutation_rank() {
        for n in 1..=7 {
            let ranker = Ranker::new(n);
            let mut buf = [0u8; HARD_CAP];
            for (r, p) in Permutation::all(n).enumerate() {
                let v: Vec<u8> = p.one_line().iter().map(|&x| (x - 1) as u8).collect();
                assert_eq!(ranker.rank(&v), r as u64);
                ranker.unrank(r as u64, &mut buf[..n]);
                assert_eq!(&buf[..n], &v[..]);
            }
        }
    }

    #[test]
    fn matches_naive_search() {
        for n in 1..=6 {
            for tag in FamilyTag::ALL {
                let table = bfs(n, tag, &opts()).unwrap();
                let naive = naive_bfs(n, tag);
                assert_eq!(naive.len(), table.generated_count());
                for (p, d) in naive {
                    assert_eq!(table.distance(&p).unwrap(), d, "{tag} {p}");
                }
            }
        }
    }

    #[test]
    fn small_ptd_values() {
        let t = bfs(3, FamilyTag::Ptd, &opts()).unwrap();
        assert_eq!(t.distance(&"3 2 1".parse().unwrap()).unwrap(), 2);
        assert_eq!(t.distance(&Permutation::identity(3)).unwrap(), 0);
        assert_eq!(t.max(), 2);
        let one = bfs(1, FamilyTag::Ptd, &opts()).unwrap();
        assert_eq!(one.distances(), &[0]);
        assert_eq!(
            exact_distance(&"3 2 1".parse().unwrap(), FamilyTag::Ptd, &opts()).unwrap(),
            2
        );
    }

    #[test]
    fn running_example_ptd() {
        let pi: Permutation = "4 1 6 2 5 7 3".parse().unwrap();
        let d = exact_distance(&pi, FamilyTag::Ptd, &opts()).unwrap();
        assert!((4..=6).contains(&d), "{d}");
        assert!(d as usize >= ptd_new_lower_bound(&pi));
    }

    #[test]
    fn pexc_diameter_matches_formula_max() {
        let formula_max = Permutation::all(3).map(|p| pexc_exact(&p)).max().unwrap();
        assert_eq!(diameter_of(3, FamilyTag::Pexc, &opts()).unwrap() as usize, formula_max);
    }

    #[test]
    fn tables_are_symmetric_and_edge_consistent() {
        for n in 1..=6 {
            for tag in FamilyTag::ALL {
                let t = bfs(n, tag, &opts()).unwrap();
                let gens = GeneratorFamily::new(tag, n).permutations();
                for p in Permutation::all(n) {
                    let d = t.distance(&p).unwrap();
                    assert_eq!(d, t.distance(&p.inverse()).unwrap());
                    for g in &gens {
                        let e = t.distance(&p.compose(g).unwrap()).unwrap();
                        assert!(d.abs_diff(e) <= 1);
                    }
                }
            }
        }
    }

    #[test]
    fn exact_formulas_and_sandwich_on_s6() {
        let bid = bfs(6, FamilyTag::Bid, &opts()).unwrap();
        let td = bfs(6, FamilyTag::Td, &opts()).unwrap();
        let pexc = bfs(6, FamilyTag::Pexc, &opts()).unwrap();
        for p in Permutation::all(6) {
            assert_eq!(bid.distance(&p).unwrap() as usize, bid_lower_bound(&p));
            assert_eq!(pexc.distance(&p).unwrap() as usize, pexc_exact(&p));
            let d = td.distance(&p).unwrap() as usize;
            assert!(td_lower_bound(&p) <= d && d <= td_upper_bound(&p));
        }
    }

    #[test]
    fn cap_is_enforced() {
        assert!(matches!(
            bfs(11, FamilyTag::Ptd, &opts()),
            Err(Error::CapExceeded { n: 11, cap: 10 })
        ));
        assert!(matches!(
            bfs(13, FamilyTag::Ptd, &SearchOptions::with_cap(20)),
            Err(Error::CapExceeded { n: 13, cap: 12 })
        ));
        assert!(matches!(table1(11, &opts()), Err(Error::CapExceeded { .. })));
    }

    #[test]
    fn small_table_rows() {
        let rows = table1(5, &opts()).unwrap();
        assert_eq!(rows[0], Table1Row { n: 1, total: 1, tight_dm: 1, tight_cs: 1, tight_new: 1 });
        assert_eq!((rows[4].total, rows[4].tight_dm, rows[4].tight_new), (120, 41, 106));
        let rows = table2(6, &opts()).unwrap();
        assert_eq!(rows[5].gaps, vec![574, 143, 3]);
        let tsv = table2_tsv(&rows);
        assert_eq!(tsv.lines().last().unwrap(), "6\t720\t574\t143\t3\t0");
        assert_eq!(tsv.lines().next().unwrap(), "n\tn!\tdelta0\tdelta1\tdelta2\tdelta3");
    }

    #[test]
    fn determinism() {
        let a = bfs(7, FamilyTag::Ptd, &opts()).unwrap();
        let b = bfs(7, FamilyTag::Ptd, &opts()).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn dump_round_trip() {
        let t = bfs(5, FamilyTag::Td, &opts()).unwrap();
        let mut bytes = Vec::new();
        t.write_to(&mut bytes).unwrap();
        assert_eq!(&bytes[..4], b"PCDT");
        assert_eq!(bytes.len(), 8 + 120);
        assert_eq!(DistanceTable::read_from(&bytes[..]).unwrap(), t);
        assert!(DistanceTable::read_from(&bytes[..100]).is_err());
        let mut bad = bytes.clone();
        bad[0] = b'X';
        assert!(matches!(DistanceTable::read_from(&bad[..]), Err(Error::BadDump(_))));
    }

    #[test]
    fn ptd_diameter_reaches_three_quarters() {
        for n in 3..=8 {
            let d = diameter_of(n, FamilyTag::Ptd, &opts()).unwrap() as usize;
            assert!(d >= 3 * n / 4, "n = {n}: {d}");
        }
    }
}
