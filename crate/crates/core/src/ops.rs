//! Rearrangement operations and the generator families built from them.
//!
//! Every operation is a permutation `g` acting on the *positions* of a
//! permutation `π` by right-composition: `π ∘ g` moves segments of `π`'s
//! one-line form around.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::cycle_graph::encode;
use crate::error::{Error, Result};
use crate::perm::{Bijection, Permutation};

/// Index tuple of an operation. Prefix variants are the `i = 1` cases.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum OpKind {
    /// Swaps the segments `[i, j-1]` and `[k, l-1]`; `1 <= i < j <= k < l <= n+1`.
    BlockInterchange { i: usize, j: usize, k: usize, l: usize },
    /// Swaps the adjacent segments `[i, j-1]` and `[j, l-1]`.
    Transposition { i: usize, j: usize, l: usize },
    /// Swaps the entries at positions `i < k`.
    Exchange { i: usize, k: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Rearrangement {
    n: usize,
    kind: OpKind,
}

impl Rearrangement {
    pub fn block_interchange(n: usize, i: usize, j: usize, k: usize, l: usize) -> Result<Self> {
        if !(1 <= i && i < j && j <= k && k < l && l <= n + 1) {
            return Err(Error::InvalidIndices(format!("b({i},{j},{k},{l}) with n = {n}")));
        }
        Ok(Rearrangement { n, kind: OpKind::BlockInterchange { i, j, k, l } })
    }

    pub fn transposition(n: usize, i: usize, j: usize, l: usize) -> Result<Self> {
        if !(1 <= i && i < j && j < l && l <= n + 1) {
            return Err(Error::InvalidIndices(format!("t({i},{j},{l}) with n = {n}")));
        }
        Ok(Rearrangement { n, kind: OpKind::Transposition { i, j, l } })
    }

    pub fn exchange(n: usize, i: usize, k: usize) -> Result<Self> {
        if !(1 <= i && i < k && k <= n) {
            return Err(Error::InvalidIndices(format!("e({i},{k}) with n = {n}")));
        }
        Ok(Rearrangement { n, kind: OpKind::Exchange { i, k } })
    }

    pub fn prefix_transposition(n: usize, j: usize, l: usize) -> Result<Self> {
        Self::transposition(n, 1, j, l)
    }

    pub fn prefix_exchange(n: usize, k: usize) -> Result<Self> {
        Self::exchange(n, 1, k)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn kind(&self) -> OpKind {
        self.kind
    }

    pub fn is_prefix(&self) -> bool {
        let (i, _, _, _) = self.as_block_interchange();
        i == 1
    }

    /// The `(i, j, k, l)` tuple of the block-interchange this operation is.
    pub fn as_block_interchange(&self) -> (usize, usize, usize, usize) {
        match self.kind {
            OpKind::BlockInterchange { i, j, k, l } => (i, j, k, l),
            OpKind::Transposition { i, j, l } => (i, j, j, l),
            OpKind::Exchange { i, k } => (i, i + 1, k, k + 1),
        }
    }

    /// The permutation `g` such that `π ∘ g` performs the segment move:
    /// `⟨1..i-1, k..l-1, j..k-1, i..j-1, l..n⟩`.
    pub fn realise(&self) -> Permutation {
        let (i, j, k, l) = self.as_block_interchange();
        let mut image = Vec::with_capacity(self.n);
        image.extend(1..i);
        image.extend(k..l);
        image.extend(j..k);
        image.extend(i..j);
        image.extend(l..=self.n);
        Permutation::from_vec_unchecked(image)
    }

    /// Closed form of the encoding: `(j,l) ∘ (i,k)` for a block-interchange,
    /// with every index read modulo `n+1`.
    pub fn encode_formula(&self) -> Bijection {
        let m = self.n + 1;
        let (i, j, k, l) = self.as_block_interchange();
        let (i, j, k, l) = (i % m, j % m, k % m, l % m);
        let first = swap(m, i, k);
        let second = swap(m, j, l);
        second.compose(&first).expect("same ground set")
    }

    /// The encoding of the operation, computed in closed form and checked
    /// against the encoding of its realisation.
    pub fn encode_op(&self) -> Result<Bijection> {
        let formula = self.encode_formula();
        let direct = encode(&self.realise()).into_bijection();
        if formula != direct {
            return Err(Error::IdentityViolation(format!(
                "encoding of {self}: formula {formula} vs direct {direct}"
            )));
        }
        Ok(formula)
    }

    /// Parses `t(i,j,l)`, `b(i,j,k,l)` or `e(i,k)` for permutations of size `n`.
    pub fn parse(s: &str, n: usize) -> Result<Self> {
        let parse_err = || Error::Parse { what: "rearrangement", input: s.to_string() };
        let s = s.trim();
        let open = s.find('(').ok_or_else(parse_err)?;
        if !s.ends_with(')') {
            return Err(parse_err());
        }
        let args = s[open + 1..s.len() - 1]
            .split(',')
            .map(|t| t.trim().parse::<usize>().map_err(|_| parse_err()))
            .collect::<Result<Vec<_>>>()?;
        match (s[..open].trim(), args.as_slice()) {
            ("b", &[i, j, k, l]) => Self::block_interchange(n, i, j, k, l),
            ("t", &[i, j, l]) => Self::transposition(n, i, j, l),
            ("e", &[i, k]) => Self::exchange(n, i, k),
            _ => Err(parse_err()),
        }
    }
}

fn swap(m: usize, a: usize, b: usize) -> Bijection {
    let mut map: Vec<usize> = (0..m).collect();
    map.swap(a, b);
    Bijection::from_vec_unchecked(map)
}

impl fmt::Display for Rearrangement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            OpKind::BlockInterchange { i, j, k, l } => write!(f, "b({i},{j},{k},{l})"),
            OpKind::Transposition { i, j, l } => write!(f, "t({i},{j},{l})"),
            OpKind::Exchange { i, k } => write!(f, "e({i},{k})"),
        }
    }
}

/// Which edit distance a generator family defines.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FamilyTag {
    /// block-interchanges
    Bid,
    /// transpositions
    Td,
    /// exchanges
    Exc,
    /// prefix transpositions
    Ptd,
    /// prefix exchanges
    Pexc,
}

impl FamilyTag {
    pub const ALL: [FamilyTag; 5] =
        [FamilyTag::Bid, FamilyTag::Td, FamilyTag::Exc, FamilyTag::Ptd, FamilyTag::Pexc];

    pub fn name(self) -> &'static str {
        match self {
            FamilyTag::Bid => "bid",
            FamilyTag::Td => "td",
            FamilyTag::Exc => "exc",
            FamilyTag::Ptd => "ptd",
            FamilyTag::Pexc => "pexc",
        }
    }

    /// Byte used in distance-table dumps.
    pub fn code(self) -> u8 {
        match self {
            FamilyTag::Bid => 0,
            FamilyTag::Td => 1,
            FamilyTag::Exc => 2,
            FamilyTag::Ptd => 3,
            FamilyTag::Pexc => 4,
        }
    }

    pub fn from_code(code: u8) -> Option<FamilyTag> {
        FamilyTag::ALL.into_iter().find(|f| f.code() == code)
    }
}

impl fmt::Display for FamilyTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FamilyTag {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        FamilyTag::ALL
            .into_iter()
            .find(|f| f.name().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| Error::Parse { what: "generator family", input: s.to_string() })
    }
}

/// All generators of one family for a fixed `n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct GeneratorFamily {
    pub tag: FamilyTag,
    pub n: usize,
}

impl GeneratorFamily {
    pub fn new(tag: FamilyTag, n: usize) -> Self {
        GeneratorFamily { tag, n }
    }

    /// Every valid index tuple of the family, in lexicographic order.
    pub fn enumerate(&self) -> Vec<Rearrangement> {
        let n = self.n;
        let mut out = Vec::new();
        let block = |i, j, k, l| Rearrangement { n, kind: OpKind::BlockInterchange { i, j, k, l } };
        let trans = |i, j, l| Rearrangement { n, kind: OpKind::Transposition { i, j, l } };
        let exch = |i, k| Rearrangement { n, kind: OpKind::Exchange { i, k } };
        match self.tag {
            FamilyTag::Bid => {
                for i in 1..=n {
                    for j in i + 1..=n {
                        for k in j..=n {
                            for l in k + 1..=n + 1 {
                                out.push(block(i, j, k, l));
                            }
                        }
                    }
                }
            }
            FamilyTag::Td | FamilyTag::Ptd => {
                let last_i = if self.tag == FamilyTag::Ptd { n.min(1) } else { n };
                for i in 1..=last_i {
                    for j in i + 1..=n {
                        for l in j + 1..=n + 1 {
                            out.push(trans(i, j, l));
                        }
                    }
                }
            }
            FamilyTag::Exc | FamilyTag::Pexc => {
                let last_i = if self.tag == FamilyTag::Pexc { n.min(1) } else { n };
                for i in 1..=last_i {
                    for k in i + 1..=n {
                        out.push(exch(i, k));
                    }
                }
            }
        }
        out
    }

    /// Realisations of every generator, in enumeration order.
    pub fn permutations(&self) -> Vec<Permutation> {
        self.enumerate().iter().map(Rearrangement::realise).collect()
    }

    /// Whether the inverse of every generator is again a generator.
    pub fn is_symmetric(&self) -> bool {
        let gens: std::collections::HashSet<Permutation> = self.permutations().into_iter().collect();
        gens.iter().all(|g| gens.contains(&g.inverse()))
    }
}
