//! Combinatorics of the simplicial lattice `T^n_k`: multi-indices of length
//! `n+1` with fixed sum `k`, sub-simplex algebra, graph distance, lattice
//! tubes and planes.
//!
//! Intended working range is desk scale (`n ≤ 6`, `k ≤ 32`); the limits are
//! soft — counting helpers are overflow-checked rather than hard-capped.

use crate::arith::{binomial, ArithError};
use std::cmp::Ordering;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LatticeError {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("mismatched operands: {0}")]
    Mismatch(String),
    #[error(transparent)]
    Arith(#[from] ArithError),
}

/// A lattice node: `n+1` nonnegative entries with a fixed sum (the degree).
///
/// The derived ordering is lexicographic on the entry vector, which fixes the
/// canonical enumeration order used everywhere downstream.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MultiIndex {
    entries: Vec<u32>,
}

impl MultiIndex {
    pub fn new(entries: Vec<u32>) -> Self {
        assert!(!entries.is_empty(), "multi-index needs at least one entry");
        MultiIndex { entries }
    }

    /// Ambient dimension `n` (one less than the number of entries).
    pub fn n(&self) -> usize {
        self.entries.len() - 1
    }

    /// The degree `k = |α|`.
    pub fn degree(&self) -> u32 {
        self.entries.iter().sum()
    }

    pub fn entries(&self) -> &[u32] {
        &self.entries
    }

    pub fn entry(&self, i: usize) -> u32 {
        self.entries[i]
    }

    /// Indices with a positive entry, sorted.
    pub fn support(&self) -> Vec<usize> {
        (0..self.entries.len()).filter(|&i| self.entries[i] > 0).collect()
    }

    /// Entries at the given index positions, in their order.
    pub fn restrict(&self, indices: &[usize]) -> Vec<u32> {
        indices.iter().map(|&i| self.entries[i]).collect()
    }

    /// Degree-`k` unit node `k·e_i`.
    pub fn vertex_node(i: usize, n: usize, k: u32) -> Self {
        let mut entries = vec![0u32; n + 1];
        entries[i] = k;
        MultiIndex { entries }
    }
}

impl fmt::Debug for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.entries)
    }
}

/// A sub-simplex of the `n`-simplex, identified with a sorted subset of the
/// vertex labels `{0..n}`.
///
/// The empty value only arises as the opposite of the full simplex (`f = T`
/// has no `f*`); operations that need a nonempty set reject it.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SubSimplex {
    indices: Vec<usize>,
    ambient: usize,
}

impl SubSimplex {
    pub fn new(indices: Vec<usize>, ambient: usize) -> Result<Self, LatticeError> {
        if indices.is_empty() {
            return Err(LatticeError::InvalidArgument("sub-simplex must be nonempty".into()));
        }
        if !indices.windows(2).all(|w| w[0] < w[1]) {
            return Err(LatticeError::InvalidArgument(format!(
                "sub-simplex labels must be strictly increasing, got {indices:?}"
            )));
        }
        if *indices.last().unwrap() > ambient {
            return Err(LatticeError::InvalidArgument(format!(
                "label {} outside 0..={ambient}",
                indices.last().unwrap()
            )));
        }
        Ok(SubSimplex { indices, ambient })
    }

    pub fn vertex(i: usize, ambient: usize) -> Self {
        assert!(i <= ambient);
        SubSimplex { indices: vec![i], ambient }
    }

    /// The full simplex `{0..n}`.
    pub fn full(ambient: usize) -> Self {
        SubSimplex { indices: (0..=ambient).collect(), ambient }
    }

    /// The distinguished empty value (only the complement of the full simplex).
    pub fn empty(ambient: usize) -> Self {
        SubSimplex { indices: Vec::new(), ambient }
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.indices.len() == self.ambient + 1
    }

    /// Geometric dimension `ℓ = |f| − 1`; requires a nonempty set.
    pub fn dim(&self) -> usize {
        assert!(!self.is_empty(), "dimension of the empty sub-simplex");
        self.indices.len() - 1
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn contains(&self, label: usize) -> bool {
        self.indices.binary_search(&label).is_ok()
    }

    /// The opposite sub-simplex `f*` (complementary label set).
    pub fn complement(&self) -> SubSimplex {
        let indices = (0..=self.ambient).filter(|i| !self.contains(*i)).collect();
        SubSimplex { indices, ambient: self.ambient }
    }

    /// All `ℓ`-dimensional sub-simplices of this one, in canonical order.
    pub fn sub_simplices(&self, ell: usize) -> Vec<SubSimplex> {
        combinations(&self.indices, ell + 1)
            .into_iter()
            .map(|indices| SubSimplex { indices, ambient: self.ambient })
            .collect()
    }
}

impl fmt::Debug for SubSimplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "f{:?}", self.indices)
    }
}

impl Ord for SubSimplex {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.indices.len(), &self.indices, self.ambient).cmp(&(
            other.indices.len(),
            &other.indices,
            other.ambient,
        ))
    }
}

impl PartialOrd for SubSimplex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// `Δ_ℓ(T)`: all `ℓ`-dimensional sub-simplices of the `n`-simplex, in
/// canonical (lexicographic) order.
pub fn delta(ell: usize, n: usize) -> Vec<SubSimplex> {
    SubSimplex::full(n).sub_simplices(ell)
}

fn combinations(pool: &[usize], take: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if take == 0 || take > pool.len() {
        return out;
    }
    let mut current = Vec::with_capacity(take);
    fn rec(pool: &[usize], take: usize, start: usize, current: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if current.len() == take {
            out.push(current.clone());
            return;
        }
        for i in start..pool.len() {
            if pool.len() - i < take - current.len() {
                break;
            }
            current.push(pool[i]);
            rec(pool, take, i + 1, current, out);
            current.pop();
        }
    }
    rec(pool, take, 0, &mut current, &mut out);
    out
}

/// An ordered, deduplicated set of lattice nodes sharing the same `n` and `k`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct LatticeSet {
    n: usize,
    k: u32,
    nodes: Vec<MultiIndex>,
}

impl LatticeSet {
    pub fn from_nodes(n: usize, k: u32, mut nodes: Vec<MultiIndex>) -> Result<Self, LatticeError> {
        for node in &nodes {
            if node.n() != n || node.degree() != k {
                return Err(LatticeError::Mismatch(format!(
                    "node {node:?} does not lie in T^{n}_{k}"
                )));
            }
        }
        nodes.sort();
        nodes.dedup();
        Ok(LatticeSet { n, k, nodes })
    }

    pub fn empty(n: usize, k: u32) -> Self {
        LatticeSet { n, k, nodes: Vec::new() }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn contains(&self, node: &MultiIndex) -> bool {
        self.nodes.binary_search(node).is_ok()
    }

    pub fn iter(&self) -> impl Iterator<Item = &MultiIndex> {
        self.nodes.iter()
    }

    pub fn nodes(&self) -> &[MultiIndex] {
        &self.nodes
    }
}

/// Enumerates `T^n_k`, all multi-indices of length `n+1` summing to `k`, in
/// lexicographic order. Cardinality is `C(n+k, k)`.
pub fn enumerate_lattice(n: usize, k: u32) -> Result<LatticeSet, LatticeError> {
    let count = binomial((n as u64) + (k as u64), k as u64)?;
    let mut nodes = Vec::with_capacity(count as usize);
    let mut current = vec![0u32; n + 1];
    fn rec(pos: usize, remaining: u32, current: &mut Vec<u32>, nodes: &mut Vec<MultiIndex>) {
        if pos == current.len() - 1 {
            current[pos] = remaining;
            nodes.push(MultiIndex::new(current.clone()));
            return;
        }
        for v in 0..=remaining {
            current[pos] = v;
            rec(pos + 1, remaining - v, current, nodes);
        }
        current[pos] = 0;
    }
    rec(0, k, &mut current, &mut nodes);
    debug_assert_eq!(nodes.len() as u64, count);
    Ok(LatticeSet { n, k, nodes })
}

/// Enumerates multi-indices over `len` slots with sum exactly `total`, in
/// lexicographic order (plain vectors, no degree constraint carried).
pub fn enumerate_compositions(len: usize, total: u32) -> Vec<Vec<u32>> {
    if len == 0 {
        return if total == 0 { vec![Vec::new()] } else { Vec::new() };
    }
    let mut out = Vec::new();
    let mut current = vec![0u32; len];
    fn rec(pos: usize, remaining: u32, current: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if pos == current.len() - 1 {
            current[pos] = remaining;
            out.push(current.clone());
            return;
        }
        for v in 0..=remaining {
            current[pos] = v;
            rec(pos + 1, remaining - v, current, out);
        }
        current[pos] = 0;
    }
    rec(0, total, &mut current, &mut out);
    out
}

/// Graph distance `½ Σ|a_i − b_i|` between two nodes of the same lattice.
pub fn graph_distance(a: &MultiIndex, b: &MultiIndex) -> Result<u32, LatticeError> {
    if a.n() != b.n() || a.degree() != b.degree() {
        return Err(LatticeError::Mismatch(format!(
            "distance between {a:?} and {b:?} of different lattices"
        )));
    }
    let l1: u32 = a
        .entries()
        .iter()
        .zip(b.entries())
        .map(|(&x, &y)| x.abs_diff(y))
        .sum();
    Ok(l1 / 2)
}

/// Splits `α` into its components on `f` and on the opposite `f*`:
/// `(α_f, α_{f*})` with `|α_f| + |α_{f*}| = |α|`.
pub fn split(a: &MultiIndex, f: &SubSimplex) -> (Vec<u32>, Vec<u32>) {
    debug_assert_eq!(a.n(), f.ambient());
    (a.restrict(f.indices()), a.restrict(f.complement().indices()))
}

/// Extension operator `E`: places the components of `a_f` at the labels of
/// `f` and zero elsewhere, producing a node of the full lattice.
pub fn extend(a_f: &[u32], f: &SubSimplex) -> Result<MultiIndex, LatticeError> {
    if f.is_empty() {
        if a_f.is_empty() {
            return Ok(MultiIndex::new(vec![0; f.ambient() + 1]));
        }
        return Err(LatticeError::InvalidArgument("extension from the empty sub-simplex".into()));
    }
    if a_f.len() != f.dim() + 1 {
        return Err(LatticeError::Mismatch(format!(
            "extension needs {} components for {f:?}, got {}",
            f.dim() + 1,
            a_f.len()
        )));
    }
    let mut entries = vec![0u32; f.ambient() + 1];
    for (slot, &value) in f.indices().iter().zip(a_f) {
        entries[*slot] = value;
    }
    Ok(MultiIndex::new(entries))
}

/// Distance of a node to a sub-simplex: `dist(α, f) = |α_{f*}|`.
pub fn dist_to_face(a: &MultiIndex, f: &SubSimplex) -> u32 {
    debug_assert_eq!(a.n(), f.ambient());
    f.complement().indices().iter().map(|&i| a.entry(i)).sum()
}

/// Distance between sub-simplices: `min` of `dist(α, f)` over nodes on `e`.
/// Equals 0 when they intersect and `k` when `e ⊆ f*`.
pub fn face_distance(e: &SubSimplex, f: &SubSimplex, k: u32) -> u32 {
    // minimised by putting all mass of the node on e ∩ f when possible
    if e.indices().iter().any(|i| f.contains(*i)) {
        0
    } else {
        k
    }
}

/// Lattice tube `D(f, r)`: nodes within distance `r` of `f`.
pub fn tube(f: &SubSimplex, r: u32, k: u32) -> Result<LatticeSet, LatticeError> {
    let all = enumerate_lattice(f.ambient(), k)?;
    let nodes = all.iter().filter(|a| dist_to_face(a, f) <= r).cloned().collect();
    Ok(LatticeSet { n: f.ambient(), k, nodes })
}

/// Lattice plane `L(f, s)`: nodes at distance exactly `s` from `f`.
/// Satisfies `L(f, s) = L(f*, k − s)`.
pub fn plane(f: &SubSimplex, s: u32, k: u32) -> Result<LatticeSet, LatticeError> {
    if s > k {
        return Err(LatticeError::InvalidArgument(format!("plane distance {s} exceeds degree {k}")));
    }
    let all = enumerate_lattice(f.ambient(), k)?;
    let nodes = all.iter().filter(|a| dist_to_face(a, f) == s).cloned().collect();
    Ok(LatticeSet { n: f.ambient(), k, nodes })
}

/// Interior lattice `T^ℓ_{k,1}(f)`: nodes supported exactly on `f` with every
/// entry on `f` positive, extended into the full lattice.
pub fn interior_nodes(f: &SubSimplex, k: u32) -> Result<LatticeSet, LatticeError> {
    let ell = f.dim();
    if k < (ell + 1) as u32 {
        return Ok(LatticeSet::empty(f.ambient(), k));
    }
    // shift bijection: T^ℓ_{k−(ℓ+1)}(f) → T^ℓ_{k,1}(f), w ↦ w + 1
    let inner = enumerate_lattice(ell, k - (ell as u32 + 1))?;
    let mut nodes = Vec::with_capacity(inner.len());
    for w in inner.iter() {
        nodes.push(interior_shift_up(w.entries(), f)?);
    }
    LatticeSet::from_nodes(f.ambient(), k, nodes)
}

/// The explicit bijection `T^ℓ_{k−(ℓ+1)}(f) → T^ℓ_{k,1}(f)`, `w ↦ w + 1`,
/// returning the extended node of the full lattice.
pub fn interior_shift_up(w: &[u32], f: &SubSimplex) -> Result<MultiIndex, LatticeError> {
    let shifted: Vec<u32> = w.iter().map(|&x| x + 1).collect();
    extend(&shifted, f)
}

/// Inverse of [`interior_shift_up`]: requires `α` interior to `f`.
pub fn interior_shift_down(a: &MultiIndex, f: &SubSimplex) -> Result<Vec<u32>, LatticeError> {
    let (on_f, off_f) = split(a, f);
    if off_f.iter().any(|&x| x > 0) || on_f.contains(&0) {
        return Err(LatticeError::InvalidArgument(format!(
            "{a:?} is not interior to {f:?}"
        )));
    }
    Ok(on_f.iter().map(|&x| x - 1).collect())
}
