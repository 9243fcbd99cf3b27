//! Vertex partitions, equitability and quotient matrices.
//!
//! A [`Partition`] keeps its blocks in the order they were given, since
//! block indices are meaningful to the conditions built on top (layer order
//! of a distance partition, class order matching a character table). Two
//! partitions compare equal when they have the same blocks in any order.

use std::collections::BTreeMap;
use std::hash::{Hash, Hasher};
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bitset::BitSet;
use crate::graph::{distance_partition, CayleyGraph, Graph, GraphError};
use crate::group::{conjugacy_classes, left_cosets, Subgroup};
use crate::linalg::{float_spectrum, ratio, RationalMatrix, MERGE_TOL};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct NotEquitableWitness {
    /// Block whose vertices disagree.
    pub i: usize,
    /// Block being counted into.
    pub j: usize,
    pub v: usize,
    pub v_prime: usize,
    pub count_v: usize,
    pub count_v_prime: usize,
}

#[derive(Debug, Error)]
pub enum PartitionError {
    #[error("invalid partition: {0}")]
    Invalid(String),
    #[error(
        "not equitable: vertices {} and {} of block {} have {} and {} neighbours in block {}",
        .0.v, .0.v_prime, .0.i, .0.count_v, .0.count_v_prime, .0.j
    )]
    NotEquitable(NotEquitableWitness),
    #[error("graph is not regular")]
    NotRegular,
    #[error("graph is not connected")]
    NotConnected,
    #[error("Cayley graph is not normal")]
    NotNormal,
    #[error("permutation {perm} is not an automorphism: edge ({u}, {v}) maps to a non-edge")]
    NotAnAutomorphism { perm: usize, u: usize, v: usize },
    #[error("permutation {perm} is not a permutation of 0..{n}")]
    NotAPermutation { perm: usize, n: usize },
    #[error("invalid perfect-set parameters: {0}")]
    InvalidSpec(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Linalg(#[from] crate::linalg::LinalgError),
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

#[derive(Debug, Clone, Eq)]
pub struct Partition {
    n: usize,
    blocks: Vec<Vec<usize>>,
    block_of: Vec<usize>,
}

impl PartialEq for Partition {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.canonical_blocks() == other.canonical_blocks()
    }
}

impl Hash for Partition {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.n.hash(state);
        self.canonical_blocks().hash(state);
    }
}

impl Partition {
    /// Blocks are sorted internally; their order is kept.
    pub fn new(n: usize, blocks: Vec<Vec<usize>>) -> Result<Self, PartitionError> {
        let mut block_of = vec![usize::MAX; n];
        let mut blocks = blocks;
        for (bi, block) in blocks.iter_mut().enumerate() {
            if block.is_empty() {
                return Err(PartitionError::Invalid(format!("block {bi} is empty")));
            }
            block.sort_unstable();
            for &v in block.iter() {
                if v >= n {
                    return Err(PartitionError::Invalid(format!("vertex {v} out of range")));
                }
                if block_of[v] != usize::MAX {
                    return Err(PartitionError::Invalid(format!("vertex {v} appears twice")));
                }
                block_of[v] = bi;
            }
        }
        if let Some(v) = block_of.iter().position(|&b| b == usize::MAX) {
            return Err(PartitionError::Invalid(format!("vertex {v} is not covered")));
        }
        Ok(Partition { n, blocks, block_of })
    }

    pub fn discrete(n: usize) -> Self {
        Self::new(n, (0..n).map(|v| vec![v]).collect()).unwrap()
    }

    /// The one-block partition `{V}`.
    pub fn trivial(n: usize) -> Self {
        Self::new(n, vec![(0..n).collect()]).unwrap()
    }

    /// `{W, V \ W}` with `W` first.
    pub fn two_block(n: usize, w: &[usize]) -> Result<Self, PartitionError> {
        let set = BitSet::from_indices(n, w.iter().copied());
        let rest: Vec<usize> = (0..n).filter(|&v| !set.contains(v)).collect();
        Self::new(n, vec![set.to_vec(), rest])
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn block(&self, i: usize) -> &[usize] {
        &self.blocks[i]
    }

    pub fn block_of(&self, v: usize) -> usize {
        self.block_of[v]
    }

    pub fn block_sets(&self) -> Vec<BitSet> {
        self.blocks.iter().map(|b| BitSet::from_indices(self.n, b.iter().copied())).collect()
    }

    fn canonical_blocks(&self) -> Vec<Vec<usize>> {
        let mut b = self.blocks.clone();
        b.sort_by_key(|blk| blk[0]);
        b
    }

    /// Same blocks, ordered by least vertex.
    pub fn canonical(&self) -> Partition {
        Self::new(self.n, self.canonical_blocks()).unwrap()
    }

    /// True iff every block of `self` lies inside a block of `coarser`.
    pub fn refines(&self, coarser: &Partition) -> bool {
        self.blocks
            .iter()
            .all(|b| b.iter().all(|&v| coarser.block_of(v) == coarser.block_of(b[0])))
    }

    /// One line per block, space-separated vertices.
    pub fn to_partition_file(&self) -> String {
        self.blocks
            .iter()
            .map(|b| b.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(" ") + "\n")
            .collect()
    }
}

/// Parses blocks separated by newlines or `;`, vertices by whitespace.
pub fn parse_partition(n: usize, text: &str) -> Result<Partition, PartitionError> {
    let mut blocks = Vec::new();
    for (lno, line) in text.split(['\n', ';']).enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let block = line
            .split_whitespace()
            .map(|t| t.parse::<usize>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| PartitionError::Parse { line: lno + 1, msg: e.to_string() })?;
        blocks.push(block);
    }
    Partition::new(n, blocks)
}

pub fn read_partition_file(n: usize, path: impl AsRef<Path>) -> Result<Partition, PartitionError> {
    parse_partition(n, &std::fs::read_to_string(path)?)
}

/// `b_ij` = neighbours in `V_j` of any vertex of `V_i`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuotientMatrix {
    entries: Vec<Vec<usize>>,
}

impl QuotientMatrix {
    pub fn from_entries(entries: Vec<Vec<usize>>) -> Self {
        QuotientMatrix { entries }
    }

    pub fn size(&self) -> usize {
        self.entries.len()
    }

    pub fn get(&self, i: usize, j: usize) -> usize {
        self.entries[i][j]
    }

    pub fn entries(&self) -> &[Vec<usize>] {
        &self.entries
    }

    pub fn row_sum(&self, i: usize) -> usize {
        self.entries[i].iter().sum()
    }

    pub fn to_i64(&self) -> Vec<Vec<i64>> {
        self.entries.iter().map(|r| r.iter().map(|&x| x as i64).collect()).collect()
    }

    pub fn to_f64(&self) -> Vec<Vec<f64>> {
        self.entries.iter().map(|r| r.iter().map(|&x| x as f64).collect()).collect()
    }

    pub fn to_rational(&self) -> RationalMatrix {
        RationalMatrix::from_i64(&self.to_i64())
    }

    pub fn is_tridiagonal(&self) -> bool {
        let m = self.size();
        (0..m).all(|i| (0..m).all(|j| i.abs_diff(j) <= 1 || self.entries[i][j] == 0))
    }
}

/// Quotient matrix of `pi`, or the first `(i, j)` with two disagreeing vertices.
pub fn quotient_matrix(g: &Graph, pi: &Partition) -> Result<QuotientMatrix, PartitionError> {
    if pi.n() != g.n() {
        return Err(PartitionError::Invalid(format!(
            "partition is on {} vertices, graph has {}",
            pi.n(),
            g.n()
        )));
    }
    let sets = pi.block_sets();
    let mut entries = vec![vec![0; pi.len()]; pi.len()];
    for (i, block) in pi.blocks().iter().enumerate() {
        let v = block[0];
        for (j, set) in sets.iter().enumerate() {
            let count_v = g.induced_degree_count(v, set);
            if let Some(&v_prime) = block[1..].iter().find(|&&u| g.induced_degree_count(u, set) != count_v) {
                return Err(PartitionError::NotEquitable(NotEquitableWitness {
                    i,
                    j,
                    v,
                    v_prime,
                    count_v,
                    count_v_prime: g.induced_degree_count(v_prime, set),
                }));
            }
            entries[i][j] = count_v;
        }
    }
    Ok(QuotientMatrix { entries })
}

pub fn is_equitable(g: &Graph, pi: &Partition) -> bool {
    quotient_matrix(g, pi).is_ok()
}

/// `(a, b)` for a `k`-regular graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PerfectSetSpec {
    pub a: usize,
    pub b: usize,
    pub k: usize,
}

impl PerfectSetSpec {
    pub fn new(a: usize, b: usize, k: usize) -> Result<Self, PartitionError> {
        if k == 0 || a >= k || b == 0 || b > k {
            return Err(PartitionError::InvalidSpec(format!(
                "need 0 <= a <= k-1 and 1 <= b <= k, got a={a}, b={b}, k={k}"
            )));
        }
        Ok(PerfectSetSpec { a, b, k })
    }

    /// `k − a + b`.
    pub fn denominator(&self) -> usize {
        self.k - self.a + self.b
    }

    /// `a − b`, the eigenvalue every `(a, b)`-perfect set forces.
    pub fn eigenvalue(&self) -> i64 {
        self.a as i64 - self.b as i64
    }

    /// `|W1| = b|V| / (k − a + b)` when integral.
    pub fn forced_size(&self, n: usize) -> Option<usize> {
        let num = self.b * n;
        (num % self.denominator() == 0).then(|| num / self.denominator())
    }

    /// `[[a, k−a], [b, k−b]]`.
    pub fn quotient(&self) -> QuotientMatrix {
        QuotientMatrix { entries: vec![vec![self.a, self.k - self.a], vec![self.b, self.k - self.b]] }
    }
}

/// True iff `{W1, V \ W1}` is equitable with quotient `[[a, k−a], [b, k−b]]`.
pub fn is_perfect_set(g: &Graph, w1: &[usize], spec: &PerfectSetSpec) -> bool {
    let n = g.n();
    if g.regular_degree() != Some(spec.k) {
        return false;
    }
    let set = BitSet::from_indices(n, w1.iter().copied());
    let size = set.count();
    if size == 0 || size == n {
        return false;
    }
    let ok = (0..n).all(|v| {
        let want = if set.contains(v) { spec.a } else { spec.b };
        g.induced_degree_count(v, &set) == want
    });
    if ok {
        // (k − a)|V1| = b|V2|
        assert_eq!((spec.k - spec.a) * size, spec.b * (n - size), "counting identity");
    }
    ok
}

/// Colour refinement: the coarsest equitable partition refining `seed`,
/// blocks ordered by least vertex.
pub fn coarsest_equitable_refinement(g: &Graph, seed: &Partition) -> Partition {
    let n = g.n();
    let mut current = seed.canonical();
    loop {
        let sets = current.block_sets();
        let mut groups: BTreeMap<(usize, Vec<usize>), Vec<usize>> = BTreeMap::new();
        for v in 0..n {
            let sig: Vec<usize> = sets.iter().map(|s| g.induced_degree_count(v, s)).collect();
            groups.entry((current.block_of(v), sig)).or_default().push(v);
        }
        if groups.len() == current.len() {
            return current;
        }
        let mut blocks: Vec<Vec<usize>> = groups.into_values().collect();
        blocks.sort_by_key(|b| b[0]);
        current = Partition::new(n, blocks).expect("refinement of a partition");
    }
}

/// Conjugacy classes as vertex blocks, in canonical class order.
pub fn conjugacy_class_partition(cg: &CayleyGraph) -> Result<Partition, PartitionError> {
    if !cg.is_normal() {
        return Err(PartitionError::NotNormal);
    }
    let classes = conjugacy_classes(cg.group());
    let p = Partition::new(cg.group().order(), classes.classes().to_vec())?;
    assert!(is_equitable(cg.graph(), &p), "class partition of a normal Cayley graph is equitable");
    Ok(p)
}

/// Left cosets `xH`, the orbits of `H` acting by right multiplication.
pub fn coset_partition(cg: &CayleyGraph, h: &Subgroup) -> Partition {
    let p = left_cosets(cg.group(), h);
    assert!(is_equitable(cg.graph(), &p), "coset partition of a Cayley graph is equitable");
    p
}

/// Checks each permutation is an automorphism, reporting the first broken edge.
pub fn verify_automorphisms(g: &Graph, perms: &[Vec<usize>]) -> Result<(), PartitionError> {
    let n = g.n();
    let edges = g.edges();
    for (pi, p) in perms.iter().enumerate() {
        let mut seen = vec![false; n];
        if p.len() != n || p.iter().any(|&x| x >= n || std::mem::replace(&mut seen[x], true)) {
            return Err(PartitionError::NotAPermutation { perm: pi, n });
        }
        if let Some(&(u, v)) = edges.iter().find(|&&(u, v)| !g.adjacent(p[u], p[v])) {
            return Err(PartitionError::NotAnAutomorphism { perm: pi, u, v });
        }
    }
    Ok(())
}

/// Orbits of the group generated by `perms`, blocks ordered by least vertex.
pub fn orbit_partition(g: &Graph, perms: &[Vec<usize>]) -> Result<Partition, PartitionError> {
    verify_automorphisms(g, perms)?;
    let n = g.n();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for p in perms {
        for v in 0..n {
            let (a, b) = (find(&mut parent, v), find(&mut parent, p[v]));
            if a != b {
                parent[a.max(b)] = a.min(b);
            }
        }
    }
    let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for v in 0..n {
        let r = find(&mut parent, v);
        groups.entry(r).or_default().push(v);
    }
    let p = Partition::new(n, groups.into_values().collect())?;
    assert!(is_equitable(g, &p), "orbit partition of an automorphism group is equitable");
    Ok(p)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompletelyRegular {
    pub is_completely_regular: bool,
    pub covering_radius: usize,
    pub distance_partition: Partition,
    pub quotient: Option<QuotientMatrix>,
}

/// Whether the distance partition of `c` is equitable.
pub fn is_completely_regular(g: &Graph, c: &[usize]) -> Result<CompletelyRegular, PartitionError> {
    let dp = distance_partition(g, c)?;
    let quotient = quotient_matrix(g, &dp).ok();
    if let Some(q) = &quotient {
        assert!(q.is_tridiagonal(), "distance-partition quotient is tridiagonal");
    }
    Ok(CompletelyRegular {
        is_completely_regular: quotient.is_some(),
        covering_radius: dp.len() - 1,
        distance_partition: dp,
        quotient,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct MuEquitable {
    pub is_mu_equitable: bool,
    /// `None` when no non-degree eigenvalue exists or it is not unique.
    pub mu: Option<f64>,
}

/// All eigenvalues of the quotient other than (one copy of) `k` equal one `μ`.
pub fn mu_equitable_check(g: &Graph, pi: &Partition) -> Result<MuEquitable, PartitionError> {
    let k = g.regular_degree().ok_or(PartitionError::NotRegular)?;
    if !g.is_connected() {
        return Err(PartitionError::NotConnected);
    }
    let q = quotient_matrix(g, pi)?;
    let spec = float_spectrum(&q.to_f64())?;
    let mut rest: Vec<(f64, usize)> = spec.entries.iter().map(|e| (e.value, e.multiplicity)).collect();
    let top = rest
        .iter()
        .position(|(v, _)| (v - k as f64).abs() <= MERGE_TOL)
        .expect("degree is an eigenvalue of the quotient");
    assert_eq!(rest[top].1, 1, "degree is simple for a connected graph");
    rest.remove(top);
    Ok(match rest.as_slice() {
        [] => MuEquitable { is_mu_equitable: true, mu: None },
        [(mu, _)] => MuEquitable { is_mu_equitable: true, mu: Some(*mu) },
        _ => MuEquitable { is_mu_equitable: false, mu: None },
    })
}

/// Matrix of the averaging projection, `P_uv = 1_{π[u]}(v) / |π[u]|`.
pub fn projection_matrix(pi: &Partition) -> RationalMatrix {
    let n = pi.n();
    let mut p = RationalMatrix::zeros(n, n);
    for block in pi.blocks() {
        let w = ratio(1, block.len() as i64);
        for &u in block {
            for &v in block {
                p[(u, v)] = w.clone();
            }
        }
    }
    p
}

/// Exact check of `PA = AP`.
pub fn projection_commutes(g: &Graph, pi: &Partition) -> bool {
    let a = RationalMatrix::from_i64(&g.adjacency_matrix());
    let p = projection_matrix(pi);
    p.mul(&a) == a.mul(&p)
}
