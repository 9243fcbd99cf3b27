mod common;

use common::{block_counts, Entry};
use eqpart::conditions::{
    coro_perfect_vs_partition, lemma_right_count, lemma_translate_invariance, thm_vt_bound, Verdict,
};
use eqpart::graph::distance_partition;
use eqpart::group::conjugacy_classes;
use eqpart::linalg::{cayley_spectrum_from_characters, float_spectrum, float_spectrum_of_integers};
use eqpart::partition::{coarsest_equitable_refinement, is_equitable, quotient_matrix, Partition};

fn cayley(e: &Entry) -> Option<&eqpart::graph::CayleyGraph> {
    e.cayley.as_ref().map(|(cg, _)| cg)
}

#[test]
fn group_axioms_on_corpus() {
    for e in common::corpus() {
        let Some(cg) = cayley(&e) else { continue };
        let g = cg.group();
        for x in g.elements() {
            assert_eq!(g.mul(x, g.inv(x)), g.identity());
            for y in g.elements() {
                for z in g.elements() {
                    assert_eq!(g.mul(g.mul(x, y), z), g.mul(x, g.mul(y, z)), "{}", e.name);
                }
            }
        }
        let cc = conjugacy_classes(g);
        for class in cc.classes() {
            for &x in class {
                for y in g.elements() {
                    assert_eq!(cc.class_of(g.conjugate(x, y)), cc.class_of(x));
                }
            }
        }
    }
}

#[test]
fn character_tables_are_orthogonal() {
    for e in common::normal_cayley_corpus() {
        let (cg, table) = e.cayley.as_ref().unwrap();
        assert!(table.orthogonality_residual() < 1e-9, "{}", e.name);
        let sum: u32 = table.degrees().iter().map(|d| d * d).sum();
        assert_eq!(sum as usize, cg.group().order());
        table.check_against(cg.group()).unwrap();
    }
}

#[test]
fn dihedral_degree_two_values_are_cosines() {
    let e = common::d26();
    let (_, table) = e.cayley.as_ref().unwrap();
    let twos: Vec<usize> = (0..table.num_characters()).filter(|&c| table.degrees()[c] == 2).collect();
    assert_eq!(twos.len(), 6);
    for c in twos {
        for class in 0..table.class_sizes().len() {
            let v = table.value(c, class);
            assert!(v.im.abs() < 1e-12);
            let mut hits = (1..13).map(|t| 2.0 * (2.0 * std::f64::consts::PI * t as f64 / 13.0).cos());
            assert!(v.re.abs() < 1e-12 || (v.re - 2.0).abs() < 1e-12 || hits.any(|x| (x - v.re).abs() < 1e-9));
        }
    }
}

#[test]
fn cayley_graphs_are_translation_invariant() {
    for e in common::corpus() {
        let Some(cg) = cayley(&e) else { continue };
        assert_eq!(e.graph.regular_degree(), Some(cg.degree()));
        for x in cg.group().elements() {
            for perm in [cg.left_translation(x), cg.right_translation(x)] {
                for (u, v) in e.graph.edges() {
                    assert!(e.graph.adjacent(perm[u], perm[v]), "{} translation by {x}", e.name);
                }
            }
        }
    }
}

#[test]
fn distance_layers_are_consistent() {
    for e in common::corpus() {
        let Ok(p) = distance_partition(&e.graph, &[0]) else {
            assert!(!e.graph.is_connected());
            continue;
        };
        for (i, block) in p.blocks().iter().enumerate() {
            for &u in block {
                for v in (0..e.graph.n()).filter(|&v| e.graph.adjacent(u, v)) {
                    assert!(p.block_of(v).abs_diff(i) <= 1, "{}", e.name);
                }
            }
        }
    }
}

#[test]
fn quotients_match_independent_counts() {
    for e in common::corpus() {
        let k = e.graph.regular_degree().unwrap();
        for (label, p) in common::equitable_partitions(&e) {
            assert!(is_equitable(&e.graph, &p), "{} {label}", e.name);
            let q = quotient_matrix(&e.graph, &p).unwrap();
            assert_eq!(Some(q.entries().to_vec()), block_counts(&e.graph, &p), "{} {label}", e.name);
            assert!((0..q.size()).all(|i| q.row_sum(i) == k));
            let r = coarsest_equitable_refinement(&e.graph, &p);
            assert_eq!(r, p, "{} {label} refinement", e.name);
        }
        let seed = Partition::two_block(e.graph.n(), &[0]).unwrap();
        let r = coarsest_equitable_refinement(&e.graph, &seed);
        assert!(is_equitable(&e.graph, &r) && r.refines(&seed));
        assert_eq!(coarsest_equitable_refinement(&e.graph, &r), r);
    }
}

#[test]
fn quotient_eigenvalues_lie_in_the_spectrum() {
    for e in common::corpus() {
        let spec = float_spectrum_of_integers(&e.graph.adjacency_matrix()).unwrap();
        for (label, p) in common::equitable_partitions(&e) {
            let q = quotient_matrix(&e.graph, &p).unwrap();
            for entry in float_spectrum(&q.to_f64()).unwrap().entries {
                assert!(spec.contains(entry.value), "{} {label}: {}", e.name, entry.value);
                assert!(entry.multiplicity <= spec.multiplicity_of(entry.value));
            }
        }
    }
}

#[test]
fn character_spectrum_matches_adjacency() {
    for e in common::normal_cayley_corpus() {
        let (cg, table) = e.cayley.as_ref().unwrap();
        let adj = float_spectrum_of_integers(&e.graph.adjacency_matrix()).unwrap();
        let chr = cayley_spectrum_from_characters(cg.group(), cg.connection_set(), table).unwrap();
        assert!(adj.max_deviation(&chr).is_some_and(|d| d < 1e-7), "{}", e.name);
    }
}

#[test]
fn translation_lemmas_on_every_partition() {
    for e in common::corpus() {
        let Some(cg) = cayley(&e) else { continue };
        for (label, p) in common::equitable_partitions(&e) {
            let a = lemma_translate_invariance(cg, &p).unwrap();
            let b = lemma_right_count(cg, &p).unwrap();
            assert_eq!(a.verdict, Verdict::Holds, "{} {label}: {}", e.name, a.narrative);
            assert_eq!(b.verdict, Verdict::Holds, "{} {label}: {}", e.name, b.narrative);
        }
    }
}

#[test]
fn perfect_sets_against_constructed_partitions() {
    for e in common::small_corpus() {
        let parts = common::equitable_partitions(&e);
        for (spec, w) in common::perfect_sets(&e.graph) {
            for (label, p) in &parts {
                let r = coro_perfect_vs_partition(&e.graph, p, &w, &spec).unwrap();
                assert_ne!(r.verdict, Verdict::Fails, "{} {w:?} vs {label}: {}", e.name, r.narrative);
            }
        }
    }
}

#[test]
fn translation_bound_for_cayley_sets() {
    for e in common::small_corpus() {
        let Some(cg) = cayley(&e) else { continue };
        let autos = cg.right_translations();
        for (spec, w) in common::perfect_sets(&e.graph) {
            let r = thm_vt_bound(&e.graph, &autos, &w, &spec).unwrap();
            assert_eq!(r.verdict, Verdict::Holds, "{} {w:?}: {}", e.name, r.narrative);
        }
    }
}
