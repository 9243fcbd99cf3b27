#![allow(dead_code)]

use eqpart::graph::{cayley_graph, distance_partition, graph_from_edges, CayleyGraph, Graph};
use eqpart::group::{
    builtin_character_table, conjugacy_classes, elementary_abelian_and_cyclic, subgroup_generated, CharacterTable,
    Subgroup, TableFamily,
};
use eqpart::partition::{
    conjugacy_class_partition, coset_partition, is_equitable, Partition, PerfectSetSpec,
};
use eqpart::search::{brute_force_oracle, dihedral_demo_graph};
use num_rational::BigRational;

pub struct Entry {
    pub name: &'static str,
    pub graph: Graph,
    pub cayley: Option<(CayleyGraph, CharacterTable)>,
}

fn cayley_entry(name: &'static str, cg: CayleyGraph, family: TableFamily) -> Entry {
    let table = builtin_character_table(cg.group(), family).unwrap();
    Entry { name, graph: cg.graph().clone(), cayley: Some((cg, table)) }
}

pub fn k4() -> Entry {
    let g = elementary_abelian_and_cyclic(2, 2);
    cayley_entry("K4", cayley_graph(&g, &[1, 2, 3]).unwrap(), TableFamily::ElementaryAbelian)
}

pub fn cycle(n: usize) -> Entry {
    let g = elementary_abelian_and_cyclic(n, 1);
    let name = match n {
        4 => "C4",
        6 => "C6",
        _ => "cycle",
    };
    cayley_entry(name, cayley_graph(&g, &[1, n - 1]).unwrap(), TableFamily::Cyclic)
}

pub fn q3() -> Entry {
    let g = elementary_abelian_and_cyclic(2, 3);
    cayley_entry("Q3", cayley_graph(&g, &[1, 2, 4]).unwrap(), TableFamily::ElementaryAbelian)
}

pub fn d26() -> Entry {
    cayley_entry("D26", dihedral_demo_graph(13).unwrap(), TableFamily::DihedralOdd)
}

pub fn petersen() -> Entry {
    Entry { name: "Petersen", graph: Graph::petersen(), cayley: None }
}

pub fn two_triangles() -> Entry {
    let g = graph_from_edges(6, &[(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3)]).unwrap();
    Entry { name: "two triangles", graph: g, cayley: None }
}

pub fn corpus() -> Vec<Entry> {
    vec![k4(), cycle(6), cycle(4), q3(), d26(), petersen(), two_triangles()]
}

pub fn normal_cayley_corpus() -> Vec<Entry> {
    vec![k4(), cycle(6), cycle(4), q3(), d26()]
}

pub fn small_corpus() -> Vec<Entry> {
    corpus().into_iter().filter(|e| e.graph.n() <= 14).collect()
}

pub fn all_specs(k: usize) -> impl Iterator<Item = PerfectSetSpec> {
    (0..k).flat_map(move |a| (1..=k).map(move |b| PerfectSetSpec::new(a, b, k).unwrap()))
}

/// Every perfect set of a small graph, by the oracle.
pub fn perfect_sets(g: &Graph) -> Vec<(PerfectSetSpec, Vec<usize>)> {
    let k = g.regular_degree().unwrap();
    all_specs(k)
        .flat_map(|s| brute_force_oracle(g, &s).unwrap().into_iter().map(move |w| (s, w)))
        .collect()
}

fn push_unique(out: &mut Vec<(String, Partition)>, label: String, p: Partition) {
    if p.len() >= 1 && !out.iter().any(|(_, q)| *q == p) {
        out.push((label, p));
    }
}

/// Equitable partitions from the named constructions.
pub fn equitable_partitions(e: &Entry) -> Vec<(String, Partition)> {
    let g = &e.graph;
    let n = g.n();
    let mut out = Vec::new();
    push_unique(&mut out, "trivial".into(), Partition::trivial(n));
    push_unique(&mut out, "discrete".into(), Partition::discrete(n));
    for v in 0..n {
        if let Ok(p) = distance_partition(g, &[v]) {
            if is_equitable(g, &p) {
                push_unique(&mut out, format!("distance from {v}"), p);
            }
        }
    }
    if n <= 14 {
        for (s, w) in perfect_sets(g) {
            let label = format!("({}, {})-perfect {:?}", s.a, s.b, w);
            push_unique(&mut out, label.clone(), Partition::two_block(n, &w).unwrap());
            if let Ok(p) = distance_partition(g, &w) {
                push_unique(&mut out, format!("distance from {label}"), p);
            }
        }
    } else {
        let rotations: Vec<usize> = (0..n / 2).collect();
        push_unique(&mut out, "rotations".into(), Partition::two_block(n, &rotations).unwrap());
    }
    if let Some((cg, _)) = &e.cayley {
        if let Ok(p) = conjugacy_class_partition(cg) {
            push_unique(&mut out, "conjugacy classes".into(), p);
        }
        for h in subgroups(cg) {
            push_unique(&mut out, format!("cosets of {:?}", h.elements()), coset_partition(cg, &h));
        }
    }
    out
}

/// Cyclic subgroups and subgroups generated by pairs.
pub fn subgroups(cg: &CayleyGraph) -> Vec<Subgroup> {
    let g = cg.group();
    let mut out: Vec<Subgroup> = Vec::new();
    let mut add = |h: Subgroup| {
        if !out.iter().any(|x| x.elements() == h.elements()) {
            out.push(h);
        }
    };
    for x in g.elements() {
        add(subgroup_generated(g, &[x]).unwrap());
    }
    if g.order() <= 16 {
        for x in g.elements() {
            for y in g.elements().filter(|&y| y > x) {
                add(subgroup_generated(g, &[x, y]).unwrap());
            }
        }
    }
    out
}

pub fn classes_count(cg: &CayleyGraph) -> usize {
    conjugacy_classes(cg.group()).len()
}

pub fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

/// Adjacency product over rationals.
pub fn adj_mul(g: &Graph, h: &[BigRational]) -> Vec<BigRational> {
    (0..g.n())
        .map(|u| (0..g.n()).filter(|&v| g.adjacent(u, v)).map(|v| h[v].clone()).sum())
        .collect()
}

/// Neighbour counts from adjacency, independent of the library quotient.
pub fn block_counts(g: &Graph, p: &Partition) -> Option<Vec<Vec<usize>>> {
    let mut m = vec![vec![0usize; p.len()]; p.len()];
    for (i, block) in p.blocks().iter().enumerate() {
        for (jdx, other) in p.blocks().iter().enumerate() {
            let counts: Vec<usize> =
                block.iter().map(|&u| other.iter().filter(|&&v| g.adjacent(u, v)).count()).collect();
            if counts.iter().any(|&c| c != counts[0]) {
                return None;
            }
            m[i][jdx] = counts[0];
        }
    }
    Some(m)
}
