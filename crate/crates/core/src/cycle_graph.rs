//! The cycle graph of a permutation, both as an explicit bicoloured graph
//! and as the even permutation
//!
//! ```text
//! π̄ = (0,1,2,…,n) ∘ (0,π_n,π_{n-1},…,π_1)
//! ```
//!
//! on `{0..n}`, whose disjoint cycles are the alternating cycles of the
//! graph.

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};
use crate::ops::Rearrangement;
use crate::perm::{Bijection, CycleDecomposition, Permutation};

/// The encoding `π̄` of a permutation `π ∈ S_n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CycleGraphEncoding {
    n: usize,
    perm: Bijection,
}

impl CycleGraphEncoding {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn bijection(&self) -> &Bijection {
        &self.perm
    }

    pub fn into_bijection(self) -> Bijection {
        self.perm
    }

    /// Disjoint cycles of `π̄`, one per alternating cycle of the graph.
    pub fn alt_cycles(&self) -> CycleDecomposition {
        self.perm.cycles()
    }
}

impl fmt::Display for CycleGraphEncoding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.perm.fmt(f)
    }
}

/// `π̄(π_x) = π_{x-1} + 1 (mod n+1)` with `π_0 = 0`, and `π̄(0) = π_n + 1`.
pub fn encode(p: &Permutation) -> CycleGraphEncoding {
    let n = p.len();
    let m = n + 1;
    let mut map = vec![0; m];
    let mut prev = 0;
    for &v in p.one_line() {
        map[v] = (prev + 1) % m;
        prev = v;
    }
    map[0] = (prev + 1) % m;
    CycleGraphEncoding { n, perm: Bijection::from_vec_unchecked(map) }
}

/// `(0, π_n, π_{n-1}, …, π_1)` as a bijection on `{0..n}`.
pub fn black_cycle(p: &Permutation) -> Bijection {
    let mut cycle = vec![0];
    cycle.extend(p.one_line().iter().rev());
    Bijection::from_cycles(p.len() + 1, &[&cycle]).expect("a single cycle over {0..n}")
}

/// Inverse of [`encode`]: the permutation whose encoding is `q`, if any.
///
/// `q` has a preimage exactly when `(0,1,…,n)⁻¹ ∘ q` is a single
/// `(n+1)`-cycle; the one-line form is then read off that cycle backwards
/// from 0.
pub fn pullback(q: &Bijection) -> Option<Permutation> {
    let m = q.size();
    if m == 0 {
        return None;
    }
    let back = |x: usize| (q.apply(x) + m - 1) % m;
    let mut reversed = Vec::with_capacity(m - 1);
    let mut x = back(0);
    while x != 0 {
        if reversed.len() == m - 1 {
            return None;
        }
        reversed.push(x);
        x = back(x);
    }
    if reversed.len() != m - 1 {
        return None;
    }
    reversed.reverse();
    Some(Permutation::from_vec_unchecked(reversed))
}

/// A black arc `(π̃_x, π̃_{x-1})`, identified by its position `x ∈ 1..=n+1`.
/// Position `n+1` is the wrap arc `(0, π_n)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BlackArc {
    pub position: usize,
    pub tail: usize,
    pub head: usize,
}

/// One alternating cycle: its black arcs in traversal order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AltCycle {
    pub arcs: Vec<BlackArc>,
}

impl AltCycle {
    pub fn len(&self) -> usize {
        self.arcs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.arcs.is_empty()
    }

    /// Arc positions in increasing order.
    pub fn positions(&self) -> Vec<usize> {
        let mut p: Vec<usize> = self.arcs.iter().map(|a| a.position).collect();
        p.sort_unstable();
        p
    }

    /// Tails of the black arcs in traversal order; this is a cycle of `π̄`.
    pub fn tails(&self) -> Vec<usize> {
        self.arcs.iter().map(|a| a.tail).collect()
    }
}

/// The bicoloured graph on `π̃ = (0, π_1, …, π_n)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CycleGraph {
    n: usize,
    vertices: Vec<usize>,
    black: Vec<BlackArc>,
    cycles: Vec<AltCycle>,
}

impl CycleGraph {
    pub fn n(&self) -> usize {
        self.n
    }

    /// `π̃_0 = 0, π̃_1, …, π̃_n`.
    pub fn vertices(&self) -> &[usize] {
        &self.vertices
    }

    /// Black arcs indexed by position `1..=n+1` (stored at `position - 1`).
    pub fn black_arcs(&self) -> &[BlackArc] {
        &self.black
    }

    pub fn black_arc(&self, position: usize) -> BlackArc {
        self.black[position - 1]
    }

    /// Grey arcs `(v, v+1 mod n+1)`.
    pub fn grey_arcs(&self) -> Vec<(usize, usize)> {
        let m = self.n + 1;
        (0..m).map(|v| (v, (v + 1) % m)).collect()
    }

    pub fn alt_cycles(&self) -> &[AltCycle] {
        &self.cycles
    }

    /// Sorted alternating-cycle lengths.
    pub fn cycle_type(&self) -> Vec<usize> {
        let mut t: Vec<usize> = self.cycles.iter().map(AltCycle::len).collect();
        t.sort_unstable();
        t
    }

    /// The alternating cycle owning the black arc at `position`.
    pub fn cycle_of(&self, position: usize) -> &AltCycle {
        self.cycles
            .iter()
            .find(|c| c.arcs.iter().any(|a| a.position == position))
            .expect("every arc lies on a cycle")
    }

    /// Builds a graph from explicit cycles of black-arc positions. Only used
    /// to exercise precondition failures on graphs that no permutation has.
    pub fn from_parts(n: usize, vertices: Vec<usize>, cycles: Vec<AltCycle>) -> Self {
        let mut black: Vec<BlackArc> = cycles.iter().flat_map(|c| c.arcs.iter().copied()).collect();
        black.sort_unstable();
        CycleGraph { n, vertices, black, cycles }
    }
}

/// Follows black then grey arcs from every unvisited black arc, in order of
/// position.
pub fn build_graph(p: &Permutation) -> CycleGraph {
    let n = p.len();
    let m = n + 1;
    let mut vertices = Vec::with_capacity(m);
    vertices.push(0);
    vertices.extend_from_slice(p.one_line());

    let black: Vec<BlackArc> = (1..=m)
        .map(|x| BlackArc { position: x, tail: vertices[x % m], head: vertices[x - 1] })
        .collect();
    // position of the black arc leaving each vertex
    let mut out_arc = vec![0; m];
    for a in &black {
        out_arc[a.tail] = a.position;
    }

    let mut visited = vec![false; m + 1];
    let mut cycles = Vec::new();
    for start in 1..=m {
        if visited[start] {
            continue;
        }
        let mut arcs = Vec::new();
        let mut pos = start;
        while !visited[pos] {
            visited[pos] = true;
            let arc = black[pos - 1];
            arcs.push(arc);
            let grey_target = (arc.head + 1) % m;
            pos = out_arc[grey_target];
        }
        cycles.push(AltCycle { arcs });
    }
    CycleGraph { n, vertices, black, cycles }
}

/// Checks `encode(p ∘ s) = encode(p) ∘ encode(s)^p`, with `p` extended to
/// fix 0.
pub fn compose_identity_check(p: &Permutation, s: &Permutation) -> Result<bool> {
    let lhs = encode(&p.compose(s)?).into_bijection();
    let rhs = encode(p).perm.compose(&encode(s).perm.conjugate(&p.extended())?)?;
    Ok(lhs == rhs)
}

/// Rewrites a factorisation `p = ops[0] ∘ ops[1] ∘ ⋯ ∘ ops[t-1]` into a
/// factorisation of `encode(p)` whose `k`-th factor is the encoding of
/// `ops[k]` conjugated by `ops[0] ∘ ⋯ ∘ ops[k-1]`.
pub fn translate_factorisation(p: &Permutation, ops: &[Rearrangement]) -> Result<Vec<Bijection>> {
    let n = p.len();
    let mut prefix = Permutation::identity(n);
    let mut factors = Vec::with_capacity(ops.len());
    for op in ops {
        if op.n() != n {
            return Err(Error::SizeMismatch { left: n, right: op.n() });
        }
        factors.push(op.encode_op()?.conjugate(&prefix.extended())?);
        prefix = prefix.compose(&op.realise())?;
    }
    if prefix != *p {
        return Err(Error::FactorisationMismatch);
    }
    let mut product = Bijection::identity(n + 1);
    for f in &factors {
        product = product.compose(f)?;
    }
    if product != encode(p).perm {
        return Err(Error::IdentityViolation(format!("factor product {product} for {p}")));
    }
    Ok(factors)
}

/// `encode(p⁻¹)`, checked against `(encode(p)⁻¹)^(p⁻¹)`.
pub fn inverse_encoding(p: &Permutation) -> Result<Bijection> {
    let inv = p.inverse();
    let direct = encode(&inv).perm;
    let via = encode(p).perm.inverse().conjugate(&inv.extended())?;
    if direct != via {
        return Err(Error::IdentityViolation(format!("inverse encoding of {p}")));
    }
    Ok(direct)
}

/// `encode((p ∘ s)⁻¹)`, checked against `(encode(s)⁻¹ ∘ encode(p⁻¹))^(s⁻¹)`.
pub fn composed_inverse_encoding(p: &Permutation, s: &Permutation) -> Result<Bijection> {
    let direct = encode(&p.compose(s)?.inverse()).perm;
    let via = encode(s)
        .perm
        .inverse()
        .compose(&encode(&p.inverse()).perm)?
        .conjugate(&s.inverse().extended())?;
    if direct != via {
        return Err(Error::IdentityViolation(format!("composed inverse encoding of {p}, {s}")));
    }
    Ok(direct)
}

/// `encode(p^χ)`, checked against `((encode(p)⁻¹)^χ)^(0,1,…,n)` where `χ`
/// fixes 0 and reverses `1..n`.
pub fn reverse_complement_encoding(p: &Permutation) -> Result<Bijection> {
    let n = p.len();
    let chi = Permutation::reverse(n);
    let direct = encode(&p.conjugate(&chi)?).perm;
    let via = encode(p)
        .perm
        .inverse()
        .conjugate(&chi.extended())?
        .conjugate(&Bijection::rotation(n + 1, 1))?;
    if direct != via {
        return Err(Error::IdentityViolation(format!("reverse-complement encoding of {p}")));
    }
    Ok(direct)
}

/// The linear permutation read from the circular form `m + π°`: start after
/// the 0 and drop it.
pub fn toric_shift(p: &Permutation, m: usize) -> Permutation {
    let size = p.len() + 1;
    let mut circular = Vec::with_capacity(size);
    circular.push(m % size);
    circular.extend(p.one_line().iter().map(|&v| (v + m) % size));
    let zero = circular.iter().position(|&v| v == 0).expect("0 is present");
    let image = (1..size).map(|k| circular[(zero + k) % size]).collect();
    Permutation::from_vec_unchecked(image)
}

/// All permutations torically equivalent to `p`.
pub fn toric_class(p: &Permutation) -> BTreeSet<Permutation> {
    (0..=p.len()).map(|m| toric_shift(p, m)).collect()
}

/// `{ encode(p)^((0,1,…,n)^m) : 0 <= m <= n }`.
pub fn toric_encodings(p: &Permutation) -> BTreeSet<Bijection> {
    let size = p.len() + 1;
    let base = encode(p).perm;
    (0..size)
        .map(|m| base.conjugate(&Bijection::rotation(size, m)).expect("same ground set"))
        .collect()
}
