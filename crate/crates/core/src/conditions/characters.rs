use std::collections::BTreeSet;

use num_complex::Complex64;

use super::report::{ConditionReport, ExactRational, Verdict, WitnessValue};
use super::ConditionError;
use crate::bitset::BitSet;
use crate::graph::CayleyGraph;
use crate::group::{conjugacy_classes, left_cosets, CharacterTable, Subgroup};
use crate::linalg::{
    character_eigenvalues, float_rank, integer_eigenvalue_multiplicity, integer_rank, ratio, DEFAULT_RANK_TOL,
    MERGE_TOL,
};
use crate::partition::{is_perfect_set, quotient_matrix, Partition, PerfectSetSpec};

/// Largest group order for which the `2|G| × 2|G|` block matrix is built.
pub const DEFAULT_SCALE_CAP: usize = 512;

/// Residual allowed when rounding permutation-character multiplicities.
const MULTIPLICITY_ROUNDING_TOL: f64 = 1e-6;

pub(crate) fn spec_noun(spec: &PerfectSetSpec) -> String {
    match (spec.a, spec.b) {
        (0, 1) => "perfect code".into(),
        (1, 1) => "total perfect code".into(),
        (a, b) => format!("({a}, {b})-perfect set"),
    }
}

fn cayley_precondition(cg: &CayleyGraph) -> Option<String> {
    if !cg.is_normal() {
        Some("Cayley graph is not normal".into())
    } else if !cg.is_connected() {
        Some("Cayley graph is not connected".into())
    } else {
        None
    }
}

fn check_vertices(n: usize, w: &[usize]) -> Result<(), ConditionError> {
    match w.iter().find(|&&v| v >= n) {
        Some(v) => Err(ConditionError::Invalid(format!("vertex {v} out of range for {n} vertices"))),
        None => Ok(()),
    }
}

fn indicator(n: usize, set: &[usize]) -> Vec<i64> {
    let mut v = vec![0; n];
    for &x in set {
        v[x] = 1;
    }
    v
}

/// Distinct right translates `W x`, sorted.
fn right_translates(cg: &CayleyGraph, w: &[usize]) -> Vec<Vec<usize>> {
    let set: BTreeSet<Vec<usize>> = cg.group().elements().map(|x| cg.right_translate(w, x)).collect();
    set.into_iter().collect()
}

fn labels(table: &CharacterTable, idx: &[usize]) -> WitnessValue {
    WitnessValue::Labels(idx.iter().map(|&c| table.labels()[c].clone()).collect())
}

/// Rank and multiplicity bounds from the character table, in three parts.
pub fn thm_nec_cond(
    cg: &CayleyGraph,
    table: &CharacterTable,
    w1: &[usize],
    spec: &PerfectSetSpec,
    scale_cap: usize,
) -> Result<ConditionReport, ConditionError> {
    const ID: &str = "thm_nec_cond";
    let n = cg.group().order();
    check_vertices(n, w1)?;
    if let Some(p) = cayley_precondition(cg) {
        return Ok(ConditionReport::inapplicable(ID, p));
    }
    if !is_perfect_set(cg.graph(), w1, spec) {
        return Ok(ConditionReport::inapplicable(ID, format!("W1 is not a {}", spec_noun(spec))));
    }
    let ev = character_eigenvalues(cg.group(), cg.connection_set(), table)?;
    let lambda = spec.eigenvalue();
    let q: Vec<usize> = (0..ev.len()).filter(|&c| (ev[c] - lambda as f64).abs() <= MERGE_TOL).collect();
    let char_mult: usize = q.iter().map(|&c| (table.degrees()[c] as usize).pow(2)).sum();
    let translates = right_translates(cg, w1);
    let adj = cg.graph().adjacency_matrix();

    // (a)
    let part_a = if n > scale_cap {
        ConditionReport::inapplicable(
            &format!("{ID}.a"),
            format!("scale cap: |G| = {n} exceeds the block-matrix cap {scale_cap}"),
        )
    } else {
        let (a, b, k) = (spec.a as i64, spec.b as i64, spec.k as i64);
        let mut block = vec![vec![0i64; 2 * n]; 2 * n];
        for u in 0..n {
            for v in 0..n {
                block[u][v] = adj[u][v] - if u == v { a } else { 0 };
                block[n + u][n + v] = adj[u][v] - if u == v { k - b } else { 0 };
            }
            block[u][n + u] = -b;
            block[n + u][u] = -(k - a);
        }
        let stacked: Vec<Vec<i64>> = translates
            .iter()
            .map(|t| {
                let mut v = indicator(n, t);
                v.extend(indicator(n, t).into_iter().map(|x| 1 - x));
                v
            })
            .collect();
        let in_kernel = stacked
            .iter()
            .all(|v| block.iter().all(|row| row.iter().zip(v).map(|(x, y)| x * y).sum::<i64>() == 0));
        let block_rank = integer_rank(&block);
        let r_w1 = integer_rank(&stacked);
        let bound = 2 * n - r_w1;
        ConditionReport::check(
            &format!("{ID}.a"),
            block_rank <= bound && in_kernel,
            format!("rank of the block matrix {block_rank} <= 2|G| - r_W1 = {bound}"),
        )
        .with("block_matrix_size", WitnessValue::Integer(2 * n as i64))
        .with("block_rank", WitnessValue::Integer(block_rank as i64))
        .with("r_w1", WitnessValue::Integer(r_w1 as i64))
        .with("bound", WitnessValue::Integer(bound as i64))
        .with("translates_in_kernel", WitnessValue::Bool(in_kernel))
    };

    // (b)
    let rows: Vec<Vec<i64>> = translates.iter().map(|t| indicator(n, t)).collect();
    let r = integer_rank(&rows);
    let mult = integer_eigenvalue_multiplicity(&adj, lambda);
    let size_ratio = ratio(n as i64, w1.len() as i64);
    let ok_mult = mult + 1 >= r;
    let ok_ratio = r * w1.len() >= n;
    let part_b = ConditionReport::check(
        &format!("{ID}.b"),
        ok_mult && ok_ratio && mult == char_mult,
        format!(
            "multiplicity({lambda}) = {mult} >= r - 1 = {} >= |G|/|W1| - 1 = {}",
            r as i64 - 1,
            ExactRational::from(&(size_ratio.clone() - ratio(1, 1)))
        ),
    )
    .with("r", WitnessValue::Integer(r as i64))
    .with("distinct_translates", WitnessValue::Integer(translates.len() as i64))
    .with("multiplicity", WitnessValue::Integer(mult as i64))
    .with("character_multiplicity", WitnessValue::Integer(char_mult as i64))
    .with("size_ratio", WitnessValue::rational(&size_ratio))
    .with("multiplicity_bound_holds", WitnessValue::Bool(ok_mult))
    .with("size_bound_holds", WitnessValue::Bool(ok_ratio));

    // (c)
    let classes = conjugacy_classes(cg.group());
    let class_sets: Vec<BitSet> =
        classes.classes().iter().map(|k| BitSet::from_indices(n, k.iter().copied())).collect();
    let counts: Vec<Vec<i64>> = class_sets
        .iter()
        .map(|k| {
            translates
                .iter()
                .map(|t| k.intersection_count(&BitSet::from_indices(n, t.iter().copied())) as i64)
                .collect()
        })
        .collect();
    let count_rank = integer_rank(&counts);
    let char_matrix: Vec<Vec<Complex64>> = (0..classes.len())
        .map(|i| q.iter().map(|&c| table.value(c, i) * classes.classes()[i].len() as f64).collect())
        .collect();
    let char_rank = if q.is_empty() { 0 } else { float_rank(&char_matrix, DEFAULT_RANK_TOL) };
    let ok_c = char_rank + 1 >= count_rank && q.len() + 1 >= count_rank && q.len() >= char_rank;
    let part_c = ConditionReport::check(
        &format!("{ID}.c"),
        ok_c,
        format!(
            "|Q| = {} >= rank[|K_i| chi(K_i)] = {char_rank} >= rank[|K_i ∩ W1x|] - 1 = {}",
            q.len(),
            count_rank as i64 - 1
        ),
    )
    .with("q", labels(table, &q))
    .with("q_size", WitnessValue::Integer(q.len() as i64))
    .with("character_rank", WitnessValue::Integer(char_rank as i64))
    .with("character_rank_tolerance", WitnessValue::Float(DEFAULT_RANK_TOL))
    .with("class_count_rank", WitnessValue::Integer(count_rank as i64))
    .with("class_counts", WitnessValue::IntegerMatrix(counts));

    let mut report = ConditionReport::combine(
        ID,
        format!("character bounds for a {} with a - b = {lambda}", spec_noun(spec)),
        vec![part_a, part_b, part_c],
    );
    report.push("eigenvalue", WitnessValue::Integer(lambda));
    report.push("character_eigenvalues", WitnessValue::FloatVector(ev));
    Ok(report)
}

/// The `(1,1)` and `(0,1)` specializations, compared against the general check.
pub fn coro_perfect_code_specialization(
    cg: &CayleyGraph,
    table: &CharacterTable,
    w1: &[usize],
    spec: &PerfectSetSpec,
    scale_cap: usize,
) -> Result<ConditionReport, ConditionError> {
    let (id, mult_bound) = match (spec.a, spec.b) {
        (1, 1) => ("coro_total_perfect_code", cg.degree().saturating_sub(1)),
        (0, 1) => ("coro_perfect_code", cg.degree()),
        _ => {
            return Ok(ConditionReport::inapplicable(
                "coro_perfect_code_specialization",
                format!("(a, b) = ({}, {}) is neither (1, 1) nor (0, 1)", spec.a, spec.b),
            ))
        }
    };
    let general = thm_nec_cond(cg, table, w1, spec, scale_cap)?;
    if general.verdict == Verdict::Inapplicable {
        let p = general.unmet_precondition.clone().unwrap_or_default();
        return Ok(ConditionReport::inapplicable(id, p).with_child(general));
    }
    let get = |part: &str, name: &str| {
        general
            .find(&format!("thm_nec_cond.{part}"))
            .and_then(|c| c.witness(name))
            .and_then(WitnessValue::as_integer)
            .expect("general report carries the witness") as usize
    };
    let (r, mult, q_size, count_rank) = (get("b", "r"), get("b", "multiplicity"), get("c", "q_size"), get("c", "class_count_rank"));
    let s = conjugacy_classes(cg.group()).classes_in(cg.connection_set()).len();

    let mult_ok = mult >= mult_bound;
    let q_ok = q_size >= s;
    let general_mult_dominates = r >= mult_bound + 1;
    let general_class_dominates = count_rank >= s + 1;
    let ok = mult_ok && q_ok && general_mult_dominates && general_class_dominates;
    let agree = (ok && general.verdict == Verdict::Holds) || (!ok && general.verdict == Verdict::Fails);
    let mut report = ConditionReport::check(
        id,
        ok && agree,
        format!(
            "multiplicity({}) = {mult} >= {mult_bound}; |Q| = {q_size} >= {s} classes in S; general bounds r - 1 = {} and rank - 1 = {} dominate",
            spec.eigenvalue(),
            r as i64 - 1,
            count_rank as i64 - 1
        ),
    )
    .with("multiplicity", WitnessValue::Integer(mult as i64))
    .with("specialized_multiplicity_bound", WitnessValue::Integer(mult_bound as i64))
    .with("general_multiplicity_bound", WitnessValue::Integer(r as i64 - 1))
    .with("q_size", WitnessValue::Integer(q_size as i64))
    .with("classes_in_s", WitnessValue::Integer(s as i64))
    .with("general_class_bound", WitnessValue::Integer(count_rank as i64 - 1))
    .with("verdicts_agree", WitnessValue::Bool(agree));
    report.children.push(general);
    Ok(report)
}

/// Multiplicity of each irreducible character in the permutation character on
/// left cosets of `h`, with the worst rounding residual.
pub fn permutation_character_multiplicities(
    cg: &CayleyGraph,
    table: &CharacterTable,
    h: &Subgroup,
) -> Result<(Vec<usize>, f64), ConditionError> {
    let group = cg.group();
    table.check_against(group)?;
    let n = group.order();
    let classes = conjugacy_classes(group);
    let fix: Vec<f64> = classes
        .classes()
        .iter()
        .map(|k| {
            let g = k[0];
            let hits = group.elements().filter(|&x| h.contains(group.conjugate(g, x))).count();
            hits as f64 / h.order() as f64
        })
        .collect();
    let mut worst: f64 = 0.0;
    let mults = (0..table.num_characters())
        .map(|c| {
            let s: Complex64 = (0..classes.len())
                .map(|i| table.value(c, i).conj() * (classes.classes()[i].len() as f64 * fix[i]))
                .sum::<Complex64>()
                / n as f64;
            let rounded = s.re.round();
            worst = worst.max((s - Complex64::new(rounded, 0.0)).norm());
            rounded.max(0.0) as usize
        })
        .collect();
    if worst > MULTIPLICITY_ROUNDING_TOL {
        return Err(ConditionError::Invalid(format!(
            "permutation character does not decompose integrally (residual {worst:.3e})"
        )));
    }
    Ok((mults, worst))
}

/// Coset-count condition for a subgroup `h`, with nonexistence when the
/// forced intersection is not integral.
pub fn thm_nec_cd(
    cg: &CayleyGraph,
    table: &CharacterTable,
    h: &Subgroup,
    spec: &PerfectSetSpec,
    w1: Option<&[usize]>,
) -> Result<ConditionReport, ConditionError> {
    const ID: &str = "thm_nec_cd";
    let n = cg.group().order();
    if let Some(w) = w1 {
        check_vertices(n, w)?;
    }
    if let Some(p) = cayley_precondition(cg) {
        return Ok(ConditionReport::inapplicable(ID, p));
    }
    let ev = character_eigenvalues(cg.group(), cg.connection_set(), table)?;
    let (mults, residual) = permutation_character_multiplicities(cg, table, h)?;
    let constituents: Vec<usize> = (0..mults.len()).filter(|&c| mults[c] > 0).collect();
    let lambda = spec.eigenvalue();
    let offending: Vec<usize> =
        constituents.iter().copied().filter(|&c| (ev[c] - lambda as f64).abs() <= MERGE_TOL).collect();
    let witnesses = |r: ConditionReport| {
        r.with("subgroup", WitnessValue::VertexSet(h.elements().to_vec()))
            .with("constituents", labels(table, &constituents))
            .with(
                "constituent_multiplicities",
                WitnessValue::IntegerVector(constituents.iter().map(|&c| mults[c] as i64).collect()),
            )
            .with("constituent_eigenvalues", WitnessValue::FloatVector(constituents.iter().map(|&c| ev[c]).collect()))
            .with("decomposition_residual", WitnessValue::Float(residual))
    };
    if !offending.is_empty() {
        let r = ConditionReport::inapplicable(
            ID,
            format!("a constituent of the coset permutation character has eigenvalue a - b = {lambda}"),
        );
        return Ok(witnesses(r).with("offending_characters", labels(table, &offending)));
    }
    let d = spec.denominator();
    let bh = spec.b * h.order();
    let noun = spec_noun(spec);
    if bh % d != 0 {
        let r = ConditionReport::fails(
            ID,
            format!("no {noun} exists: k - a + b = {d} does not divide b|H| = {bh}"),
        )
        .with("k_minus_a_plus_b", WitnessValue::Integer(d as i64))
        .with("b_times_h", WitnessValue::Integer(bh as i64))
        .with("nonexistence", WitnessValue::Bool(true));
        return Ok(witnesses(r));
    }
    let per_coset = bh / d;
    let mut report = witnesses(ConditionReport::holds(
        ID,
        format!("every {noun} meets each left coset of H in exactly {per_coset} elements"),
    ))
    .with("coset_intersection", WitnessValue::Integer(per_coset as i64))
    .with("nonexistence", WitnessValue::Bool(false));

    if let Some(w) = w1 {
        let child_id = format!("{ID}.cosets");
        let child = if !is_perfect_set(cg.graph(), w, spec) {
            ConditionReport::inapplicable(&child_id, format!("W1 is not a {noun}"))
        } else {
            let set = BitSet::from_indices(n, w.iter().copied());
            let cosets = left_cosets(cg.group(), h);
            let counts: Vec<i64> =
                cosets.blocks().iter().map(|c| c.iter().filter(|&&x| set.contains(x)).count() as i64).collect();
            let ok = counts.iter().all(|&c| c == per_coset as i64);
            ConditionReport::check(
                &child_id,
                ok,
                format!("coset intersections {counts:?}, expected {per_coset} each"),
            )
            .with("coset_counts", WitnessValue::IntegerVector(counts))
            .with("expected", WitnessValue::rational(&ratio(spec.b as i64, d as i64)))
        };
        if child.verdict == Verdict::Fails {
            report.verdict = Verdict::Fails;
            report.narrative = "a coset intersection deviates from b|H|/(k - a + b)".into();
        }
        report.children.push(child);
    }
    Ok(report)
}

fn check_tau(cg: &CayleyGraph, tau: &Partition) -> Result<crate::partition::QuotientMatrix, ConditionError> {
    if tau.n() != cg.group().order() {
        return Err(ConditionError::Invalid("partition size differs from the group order".into()));
    }
    Ok(quotient_matrix(cg.graph(), tau)?)
}

/// `tau x` is equitable with the same quotient matrix for every `x`.
pub fn lemma_translate_invariance(cg: &CayleyGraph, tau: &Partition) -> Result<ConditionReport, ConditionError> {
    const ID: &str = "lemma_translate_invariance";
    let m = check_tau(cg, tau)?;
    let n = tau.n();
    let bad = cg.group().elements().find(|&x| {
        let moved = tau.blocks().iter().map(|b| cg.right_translate(b, x)).collect();
        let p = Partition::new(n, moved).expect("translation is a bijection");
        quotient_matrix(cg.graph(), &p).map(|q| q != m).unwrap_or(true)
    });
    Ok(match bad {
        None => ConditionReport::holds(ID, format!("all {n} right translates share the quotient matrix"))
            .with("quotient", WitnessValue::usize_matrix(m.entries())),
        Some(x) => ConditionReport::fails(ID, format!("translate by {x} changes the quotient"))
            .with("element", WitnessValue::Integer(x as i64)),
    })
}

/// `|{g ∈ S : x ∈ g W_j}| = |{g ∈ S : x ∈ W_j g}| = c_ij` for `x ∈ W_i`.
pub fn lemma_right_count(cg: &CayleyGraph, tau: &Partition) -> Result<ConditionReport, ConditionError> {
    const ID: &str = "lemma_right_count";
    let m = check_tau(cg, tau)?;
    if !cg.is_normal() {
        return Ok(ConditionReport::inapplicable(ID, "Cayley graph is not normal"));
    }
    let g = cg.group();
    let n = tau.n();
    for x in 0..n {
        let i = tau.block_of(x);
        for j in 0..tau.len() {
            let left = cg.connection_set().iter().filter(|&&s| tau.block_of(g.mul(g.inv(s), x)) == j).count();
            let right = cg.connection_set().iter().filter(|&&s| tau.block_of(g.mul(x, g.inv(s))) == j).count();
            if left != m.get(i, j) || right != m.get(i, j) {
                return Ok(ConditionReport::fails(ID, format!("count mismatch at x = {x}, j = {j}"))
                    .with("x", WitnessValue::Integer(x as i64))
                    .with("j", WitnessValue::Integer(j as i64))
                    .with("left_count", WitnessValue::Integer(left as i64))
                    .with("right_count", WitnessValue::Integer(right as i64))
                    .with("c_ij", WitnessValue::Integer(m.get(i, j) as i64)));
            }
        }
    }
    Ok(ConditionReport::holds(ID, "left and right counts equal c_ij for every vertex"))
}
