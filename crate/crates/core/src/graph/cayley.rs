use super::{graph_from_edges, Graph, GraphError};
use crate::group::{conjugacy_classes, subgroup_generated, FiniteGroup};

/// `Cay(G, S)`: vertices are group elements, `x ~ y` iff `y x^{-1} ∈ S`.
#[derive(Debug, Clone)]
pub struct CayleyGraph {
    graph: Graph,
    group: FiniteGroup,
    connection_set: Vec<usize>,
    is_normal: bool,
    is_connected: bool,
}

impl CayleyGraph {
    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    /// Sorted connection set.
    pub fn connection_set(&self) -> &[usize] {
        &self.connection_set
    }

    pub fn degree(&self) -> usize {
        self.connection_set.len()
    }

    pub fn is_normal(&self) -> bool {
        self.is_normal
    }

    pub fn is_connected(&self) -> bool {
        self.is_connected
    }

    /// Right translation `v ↦ v x` as a vertex permutation.
    pub fn right_translation(&self, x: usize) -> Vec<usize> {
        self.group.elements().map(|v| self.group.mul(v, x)).collect()
    }

    /// Left translation `v ↦ x v` as a vertex permutation.
    pub fn left_translation(&self, x: usize) -> Vec<usize> {
        self.group.elements().map(|v| self.group.mul(x, v)).collect()
    }

    /// All right translations, indexed by the translating element.
    pub fn right_translations(&self) -> Vec<Vec<usize>> {
        self.group.elements().map(|x| self.right_translation(x)).collect()
    }

    /// `W x = {w x : w ∈ W}`, sorted.
    pub fn right_translate(&self, w: &[usize], x: usize) -> Vec<usize> {
        let mut out: Vec<usize> = w.iter().map(|&v| self.group.mul(v, x)).collect();
        out.sort_unstable();
        out
    }
}

pub fn cayley_graph(group: &FiniteGroup, s: &[usize]) -> Result<CayleyGraph, GraphError> {
    let n = group.order();
    let mut conn = s.to_vec();
    conn.sort_unstable();
    conn.dedup();
    if let Some(&bad) = conn.iter().find(|&&g| g >= n) {
        return Err(GraphError::VertexOutOfRange { vertex: bad, n });
    }
    if conn.contains(&group.identity()) {
        return Err(GraphError::IdentityInS);
    }
    if let Some(&g) = conn.iter().find(|&&g| conn.binary_search(&group.inv(g)).is_err()) {
        return Err(GraphError::NotInverseClosed(g));
    }
    let mut edges = Vec::with_capacity(n * conn.len() / 2);
    for x in 0..n {
        for &g in &conn {
            let y = group.mul(g, x);
            if x < y {
                edges.push((x, y));
            }
        }
    }
    let graph = graph_from_edges(n, &edges)?;
    debug_assert!(graph.regular_degree().unwrap_or(0) == conn.len());

    let is_normal = conjugacy_classes(group).is_union_of_classes(&conn);
    let is_connected = graph.is_connected();
    let generated = subgroup_generated(group, &conn).expect("S is in range").order();
    assert_eq!(is_connected, generated == n, "BFS connectivity disagrees with <S> = G");

    Ok(CayleyGraph { graph, group: group.clone(), connection_set: conn, is_normal, is_connected })
}
