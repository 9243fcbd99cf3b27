use std::collections::BTreeSet;

use super::characters::spec_noun;
use super::report::{ConditionReport, WitnessValue};
use super::ConditionError;
use crate::graph::Graph;
use crate::linalg::{integer_eigenvalue_multiplicity, integer_rank};
use crate::partition::{is_perfect_set, orbit_partition, verify_automorphisms, PerfectSetSpec};

/// Rank bound for a perfect set under a list of graph automorphisms.
///
/// `W1` always counts among the images. The size-ratio clause requires the
/// images to cover every vertex.
pub fn thm_vt_bound(
    g: &Graph,
    autos: &[Vec<usize>],
    w1: &[usize],
    spec: &PerfectSetSpec,
) -> Result<ConditionReport, ConditionError> {
    const ID: &str = "thm_vt_bound";
    verify_automorphisms(g, autos)?;
    let n = g.n();
    if let Some(v) = w1.iter().find(|&&v| v >= n) {
        return Err(ConditionError::Invalid(format!("vertex {v} out of range for {n} vertices")));
    }
    if !is_perfect_set(g, w1, spec) {
        return Ok(ConditionReport::inapplicable(ID, format!("W1 is not a {}", spec_noun(spec))));
    }
    let mut images: BTreeSet<Vec<usize>> = BTreeSet::new();
    images.insert({
        let mut w = w1.to_vec();
        w.sort_unstable();
        w
    });
    for p in autos {
        let mut img: Vec<usize> = w1.iter().map(|&v| p[v]).collect();
        img.sort_unstable();
        images.insert(img);
    }
    let rows: Vec<Vec<i64>> = images
        .iter()
        .map(|s| {
            let mut v = vec![0i64; n];
            s.iter().for_each(|&x| v[x] = 1);
            v
        })
        .collect();
    let r = integer_rank(&rows);
    let lambda = spec.eigenvalue();
    let mult = integer_eigenvalue_multiplicity(&g.adjacency_matrix(), lambda);
    let covered: BTreeSet<usize> = images.iter().flatten().copied().collect();
    let transitive = orbit_partition(g, autos).map(|p| p.len() == 1).unwrap_or(false);

    let mult_part = ConditionReport::check(
        &format!("{ID}.multiplicity"),
        mult + 1 >= r,
        format!("multiplicity({lambda}) = {mult} >= r - 1 = {}", r as i64 - 1),
    )
    .with("r", WitnessValue::Integer(r as i64))
    .with("multiplicity", WitnessValue::Integer(mult as i64));
    let ratio_id = format!("{ID}.size_ratio");
    let ratio_part = if covered.len() == n {
        ConditionReport::check(
            &ratio_id,
            r * w1.len() >= n,
            format!("r |W1| = {} >= |V| = {n}", r * w1.len()),
        )
        .with("r", WitnessValue::Integer(r as i64))
        .with("w1_size", WitnessValue::Integer(w1.len() as i64))
    } else {
        ConditionReport::inapplicable(
            &ratio_id,
            format!("images of W1 cover {} of {n} vertices", covered.len()),
        )
    };
    let mut report = ConditionReport::combine(
        ID,
        format!("rank bound over {} images of W1", images.len()),
        vec![mult_part, ratio_part],
    );
    report.push("distinct_images", WitnessValue::Integer(images.len() as i64));
    report.push("generated_group_transitive", WitnessValue::Bool(transitive));
    Ok(report)
}
