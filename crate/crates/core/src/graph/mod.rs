//! Simple undirected graphs stored as adjacency bit-rows.

mod cayley;

pub use cayley::{cayley_graph, CayleyGraph};

use std::collections::VecDeque;
use std::path::Path;

use thiserror::Error;

use crate::bitset::BitSet;
use crate::partition::Partition;

#[derive(Debug, Error)]
pub enum GraphError {
    #[error("loop edge at vertex {0}")]
    LoopEdge(usize),
    #[error("vertex {vertex} out of range for a graph on {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("identity element is in the connection set")]
    IdentityInS,
    #[error("connection set is not inverse-closed: inverse of {0} is missing")]
    NotInverseClosed(usize),
    #[error("vertex set is empty")]
    EmptySet,
    #[error("vertex {0} is at infinite distance from the set")]
    Disconnected(usize),
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

#[derive(Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    rows: Vec<BitSet>,
    degree: Vec<usize>,
    collapsed_duplicates: usize,
}

impl std::fmt::Debug for Graph {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Graph")
            .field("n", &self.n)
            .field("edges", &self.edge_count())
            .finish()
    }
}

impl Graph {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn degree(&self, v: usize) -> usize {
        self.degree[v]
    }

    /// The common degree if the graph is regular.
    pub fn regular_degree(&self) -> Option<usize> {
        let k = *self.degree.first()?;
        self.degree.iter().all(|&d| d == k).then_some(k)
    }

    pub fn neighbours(&self, v: usize) -> &BitSet {
        &self.rows[v]
    }

    #[inline]
    pub fn adjacent(&self, u: usize, v: usize) -> bool {
        self.rows[u].contains(v)
    }

    pub fn edge_count(&self) -> usize {
        self.degree.iter().sum::<usize>() / 2
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        (0..self.n)
            .flat_map(|u| self.rows[u].iter().filter(move |&v| v > u).map(move |v| (u, v)))
            .collect()
    }

    /// Number of duplicate edges dropped while building from an edge list.
    pub fn collapsed_duplicates(&self) -> usize {
        self.collapsed_duplicates
    }

    pub fn adjacency_matrix(&self) -> Vec<Vec<i64>> {
        (0..self.n)
            .map(|u| (0..self.n).map(|v| self.adjacent(u, v) as i64).collect())
            .collect()
    }

    pub fn is_connected(&self) -> bool {
        if self.n == 0 {
            return true;
        }
        bfs_layers(self, &BitSet::from_indices(self.n, [0])).1.iter().all(|d| d.is_some())
    }

    /// `|Γ(v) ∩ X|`.
    #[inline]
    pub fn induced_degree_count(&self, v: usize, x: &BitSet) -> usize {
        self.rows[v].intersection_count(x)
    }

    pub fn cycle(n: usize) -> Graph {
        graph_from_edges(n, &(0..n).map(|i| (i, (i + 1) % n)).collect::<Vec<_>>()).expect("cycle")
    }

    pub fn complete(n: usize) -> Graph {
        let edges: Vec<_> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
        graph_from_edges(n, &edges).expect("complete graph")
    }

    /// Outer 5-cycle `0..5`, inner pentagram `5..10`, spokes `i ~ i+5`.
    pub fn petersen() -> Graph {
        let mut edges = Vec::new();
        for i in 0..5 {
            edges.push((i, (i + 1) % 5));
            edges.push((5 + i, 5 + (i + 2) % 5));
            edges.push((i, i + 5));
        }
        graph_from_edges(10, &edges).expect("petersen")
    }

    /// Serializes in the edge-list format (`n m` then one `u v` per line).
    pub fn to_edge_file(&self) -> String {
        let edges = self.edges();
        let mut out = format!("{} {}\n", self.n, edges.len());
        for (u, v) in edges {
            out.push_str(&format!("{u} {v}\n"));
        }
        out
    }
}

/// Builds a simple graph; duplicate edges are collapsed and counted.
pub fn graph_from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Graph, GraphError> {
    let mut rows = vec![BitSet::new(n); n];
    let mut dups = 0;
    for &(u, v) in edges {
        for w in [u, v] {
            if w >= n {
                return Err(GraphError::VertexOutOfRange { vertex: w, n });
            }
        }
        if u == v {
            return Err(GraphError::LoopEdge(u));
        }
        if rows[u].contains(v) {
            dups += 1;
            continue;
        }
        rows[u].insert(v);
        rows[v].insert(u);
    }
    let degree = rows.iter().map(BitSet::count).collect();
    Ok(Graph { n, rows, degree, collapsed_duplicates: dups })
}

/// Parses the edge-list format: `n m`, then `m` lines `u v` (0-indexed).
pub fn parse_edge_file(text: &str) -> Result<Graph, GraphError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    let pair = |line: usize, l: &str| -> Result<(usize, usize), GraphError> {
        let nums: Vec<usize> = l
            .split_whitespace()
            .map(|t| t.parse())
            .collect::<Result<_, _>>()
            .map_err(|e: std::num::ParseIntError| GraphError::Parse { line, msg: e.to_string() })?;
        match nums[..] {
            [a, b] => Ok((a, b)),
            _ => Err(GraphError::Parse { line, msg: format!("expected two integers, got {l:?}") }),
        }
    };
    let (lno, header) = lines.next().ok_or(GraphError::Parse { line: 1, msg: "empty file".into() })?;
    let (n, m) = pair(lno, header)?;
    let edges = lines.map(|(lno, l)| pair(lno, l)).collect::<Result<Vec<_>, _>>()?;
    if edges.len() != m {
        return Err(GraphError::Parse {
            line: lno,
            msg: format!("header declares {m} edges but {} follow", edges.len()),
        });
    }
    graph_from_edges(n, &edges)
}

pub fn read_edge_file(path: impl AsRef<Path>) -> Result<Graph, GraphError> {
    parse_edge_file(&std::fs::read_to_string(path)?)
}

/// Multi-source BFS; returns visit order and the distance of every vertex.
fn bfs_layers(g: &Graph, sources: &BitSet) -> (Vec<usize>, Vec<Option<usize>>) {
    let mut dist = vec![None; g.n];
    let mut queue: VecDeque<usize> = sources.iter().collect();
    for s in sources.iter() {
        dist[s] = Some(0);
    }
    let mut order = Vec::with_capacity(g.n);
    while let Some(u) = queue.pop_front() {
        order.push(u);
        let du = dist[u].unwrap();
        for v in g.rows[u].iter() {
            if dist[v].is_none() {
                dist[v] = Some(du + 1);
                queue.push_back(v);
            }
        }
    }
    (order, dist)
}

/// Distance partition `{C_0 = C, C_1, .., C_rho}` in layer order.
pub fn distance_partition(g: &Graph, c: &[usize]) -> Result<Partition, GraphError> {
    if c.is_empty() {
        return Err(GraphError::EmptySet);
    }
    if let Some(&v) = c.iter().find(|&&v| v >= g.n) {
        return Err(GraphError::VertexOutOfRange { vertex: v, n: g.n });
    }
    let (_, dist) = bfs_layers(g, &BitSet::from_indices(g.n, c.iter().copied()));
    let mut layers: Vec<Vec<usize>> = Vec::new();
    for (v, d) in dist.iter().enumerate() {
        let d = d.ok_or(GraphError::Disconnected(v))?;
        if layers.len() <= d {
            layers.resize(d + 1, Vec::new());
        }
        layers[d].push(v);
    }
    Ok(Partition::new(g.n, layers).expect("BFS layers partition V"))
}

/// Reads a vertex-set literal: comma-separated indices, or `@file` with one index per line.
pub fn parse_vertex_set(spec: &str) -> Result<Vec<usize>, GraphError> {
    let text;
    let (body, sep): (&str, &[char]) = if let Some(path) = spec.strip_prefix('@') {
        text = std::fs::read_to_string(path)?;
        (&text, &['\n', '\r', ',', ' ', '\t'])
    } else {
        (spec, &[','])
    };
    let mut out: Vec<usize> = body
        .split(sep)
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| t.parse().map_err(|_| GraphError::Parse { line: 1, msg: format!("bad vertex index {t:?}") }))
        .collect::<Result<_, _>>()?;
    out.sort_unstable();
    out.dedup();
    Ok(out)
}
