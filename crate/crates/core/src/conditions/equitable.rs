use num_traits::{One, Zero};

use super::report::{ConditionReport, Verdict, WitnessValue};
use super::{intersection_fractions, ri, ConditionError};
use crate::bitset::BitSet;
use crate::graph::Graph;
use crate::linalg::{exact_solve, LinalgError, Rational, RationalMatrix};
use crate::partition::{is_perfect_set, quotient_matrix, Partition, PerfectSetSpec, QuotientMatrix};

/// Two equitable partitions of one regular graph.
#[derive(Debug, Clone)]
pub struct TwoPartitionInstance<'g> {
    graph: &'g Graph,
    k: usize,
    pi: Partition,
    m_pi: QuotientMatrix,
    tau: Partition,
    m_tau: QuotientMatrix,
}

impl<'g> TwoPartitionInstance<'g> {
    pub fn new(graph: &'g Graph, pi: Partition, tau: Partition) -> Result<Self, ConditionError> {
        let k = graph.regular_degree().ok_or(crate::partition::PartitionError::NotRegular)?;
        let m_pi = quotient_matrix(graph, &pi)?;
        let m_tau = quotient_matrix(graph, &tau)?;
        Ok(TwoPartitionInstance { graph, k, pi, m_pi, tau, m_tau })
    }

    pub fn graph(&self) -> &Graph {
        self.graph
    }

    pub fn degree(&self) -> usize {
        self.k
    }

    pub fn pi(&self) -> &Partition {
        &self.pi
    }

    pub fn tau(&self) -> &Partition {
        &self.tau
    }

    pub fn m_pi(&self) -> &QuotientMatrix {
        &self.m_pi
    }

    pub fn m_tau(&self) -> &QuotientMatrix {
        &self.m_tau
    }
}

/// One solution `d` of the tau-system with its `h` vector.
#[derive(Debug, Clone)]
pub(crate) struct HSolution {
    pub label: String,
    pub d: Vec<Rational>,
    pub h: Vec<Rational>,
}

pub(crate) struct CoreResult {
    pub report: ConditionReport,
    pub r: Rational,
    pub solutions: Vec<HSolution>,
}

/// Shared engine. `q[t][l] = |V_t ∩ W_l| / |V_t|` relates the rows of `m_pi`
/// to the rows of `m_tau`.
pub(crate) fn two_equ_core(
    id: &str,
    k: usize,
    m_pi: &QuotientMatrix,
    m_tau: &QuotientMatrix,
    q: &[Vec<Rational>],
    i: usize,
    j: usize,
) -> CoreResult {
    let n = m_tau.size();
    let m = m_pi.size();
    let c = |x: usize, y: usize| ri(m_tau.get(x, y) as i64);
    let denom = ri(k as i64) + c(i, j) - c(j, j);
    let base = ConditionReport::holds(id, "")
        .with("i", WitnessValue::Integer(i as i64))
        .with("j", WitnessValue::Integer(j as i64));
    if denom.is_zero() {
        let mut r = ConditionReport::inapplicable(
            id,
            format!("k + c_ij - c_jj = 0 for (i, j) = ({i}, {j}): block {j} is a union of connected components"),
        );
        r.witnesses = base.witnesses;
        return CoreResult { report: r, r: Rational::zero(), solutions: Vec::new() };
    }
    let shift = c(i, j) - c(j, j);
    let r_ij = c(i, j) / &denom;
    let delta = |a: usize, b: usize| if a == b { Rational::one() } else { Rational::zero() };

    let system = m_tau.to_rational().add_scalar_identity(&shift);
    let rhs: Vec<Rational> = (0..n).map(|l| (c(l, j) - c(i, j)) + delta(l, j) * &shift).collect();
    let closed: Vec<Rational> = (0..n).map(|l| delta(l, j) - &r_ij).collect();
    let closed_ok = system.mul_vec(&closed) == rhs;

    let mut report = base
        .with("shift", WitnessValue::rational(&shift))
        .with("r_ij", WitnessValue::rational(&r_ij))
        .with("system_matrix", WitnessValue::rational_matrix(&system.to_rows()))
        .with("rhs", WitnessValue::rational_vector(&rhs))
        .with("closed_form_solution", WitnessValue::rational_vector(&closed))
        .with("closed_form_satisfies_system", WitnessValue::Bool(closed_ok));

    let sol = match exact_solve(&system, &rhs) {
        Ok(s) => s,
        Err(LinalgError::Inconsistent { certificate }) => {
            report.verdict = Verdict::Fails;
            report.narrative = "system is inconsistent".into();
            report.push("inconsistency_certificate", WitnessValue::rational_vector(&certificate));
            return CoreResult { report, r: r_ij, solutions: Vec::new() };
        }
        Err(e) => unreachable!("square system: {e}"),
    };
    report.push("particular_solution", WitnessValue::rational_vector(&sol.particular));
    report.push("nullspace_basis", WitnessValue::rational_matrix(&sol.nullspace));

    let h_of = |d: &[Rational]| -> Vec<Rational> {
        (0..m)
            .map(|t| {
                let s: Rational = (0..n).map(|l| &q[t][l] * (&d[l] - delta(l, j))).sum();
                -(&r_ij) - s
            })
            .collect()
    };
    let mut solutions = vec![
        HSolution { label: "closed_form".into(), h: h_of(&closed), d: closed },
        HSolution { label: "particular".into(), h: h_of(&sol.particular), d: sol.particular.clone() },
    ];
    for (g, v) in sol.nullspace.iter().enumerate() {
        let d: Vec<Rational> = sol.particular.iter().zip(v).map(|(p, x)| p + x).collect();
        solutions.push(HSolution { label: format!("generator_{g}"), h: h_of(&d), d });
    }

    let kernel = m_pi.to_rational().add_scalar_identity(&shift);
    let mut all_in_kernel = true;
    for s in &solutions {
        let ok = kernel.mul_vec(&s.h).iter().all(Zero::is_zero);
        all_in_kernel &= ok;
        report.push(&format!("h_{}", s.label), WitnessValue::rational_vector(&s.h));
        report.push(&format!("h_{}_in_kernel", s.label), WitnessValue::Bool(ok));
    }
    let closed_h_zero = solutions[0].h.iter().all(Zero::is_zero);
    report.push("closed_form_h_is_zero", WitnessValue::Bool(closed_h_zero));

    let eigen = -shift.clone();
    let nonzero = solutions.iter().find(|s| s.h.iter().any(|x| !x.is_zero()));
    match nonzero {
        Some(s) => {
            report.push("eigenvalue", WitnessValue::rational(&eigen));
            report.push("eigenvector", WitnessValue::rational_vector(&s.h));
            report.narrative = format!(
                "consistent; h in the kernel for every solution; c_jj - c_ij = {} is an eigenvalue (eigenvector from {} solution)",
                super::report::ExactRational::from(&eigen),
                s.label
            );
        }
        None => {
            report.narrative = "consistent; h = 0 for every solution".into();
        }
    }
    if !(closed_ok && all_in_kernel && closed_h_zero) {
        report.verdict = Verdict::Fails;
        report.narrative = format!(
            "violation: closed form solves system = {closed_ok}, all h in kernel = {all_in_kernel}, closed-form h = 0: {closed_h_zero}"
        );
    }
    CoreResult { report, r: r_ij, solutions }
}

/// The two-partition linear system for one ordered pair `(i, j)` of blocks of tau.
pub fn thm_2equ(inst: &TwoPartitionInstance, i: usize, j: usize) -> Result<ConditionReport, ConditionError> {
    let n = inst.tau.len();
    if i == j || i >= n || j >= n {
        return Err(ConditionError::Invalid(format!("need distinct block indices below {n}, got ({i}, {j})")));
    }
    let q = intersection_fractions(&inst.pi, &inst.tau);
    Ok(two_equ_core(&format!("thm_2equ[{i},{j}]"), inst.k, &inst.m_pi, &inst.m_tau, &q, i, j).report)
}

/// Every ordered pair `i != j`; pairs failing the component precondition are
/// reported inapplicable individually.
pub fn thm_2equ_all_pairs(inst: &TwoPartitionInstance) -> ConditionReport {
    let n = inst.tau.len();
    if n < 2 {
        return ConditionReport::inapplicable("thm_2equ", "tau has a single block, so no pair i != j exists");
    }
    let children: Vec<ConditionReport> = (0..n)
        .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
        .map(|(i, j)| thm_2equ(inst, i, j).expect("indices in range"))
        .collect();
    let total = children.len();
    let held = children.iter().filter(|c| c.verdict == Verdict::Holds).count();
    ConditionReport::combine("thm_2equ", format!("{held} of {total} ordered pairs hold, the rest inapplicable"), children)
}

fn vertex_set(n: usize, w: &[usize]) -> Result<BitSet, ConditionError> {
    if let Some(&v) = w.iter().find(|&&v| v >= n) {
        return Err(ConditionError::Invalid(format!("vertex {v} out of range for {n} vertices")));
    }
    Ok(BitSet::from_indices(n, w.iter().copied()))
}

fn perfect_precondition(g: &Graph, w1: &[usize], spec: &PerfectSetSpec) -> Option<String> {
    if !g.is_connected() {
        return Some("graph is not connected".into());
    }
    (!is_perfect_set(g, w1, spec)).then(|| format!("W1 is not a ({}, {})-perfect set", spec.a, spec.b))
}

/// Perfect set against an arbitrary equitable partition, both directions.
pub fn coro_perfect_vs_partition(
    g: &Graph,
    pi: &Partition,
    w1: &[usize],
    spec: &PerfectSetSpec,
) -> Result<ConditionReport, ConditionError> {
    const ID: &str = "coro_perfect_vs_partition";
    let n = g.n();
    let set = vertex_set(n, w1)?;
    if let Some(p) = perfect_precondition(g, w1, spec) {
        return Ok(ConditionReport::inapplicable(ID, p));
    }
    let m_pi = quotient_matrix(g, pi)?;
    let k = spec.k;
    let target = Rational::new((spec.b as i64).into(), (spec.denominator() as i64).into());

    // (a)
    let h: Vec<Rational> = pi
        .blocks()
        .iter()
        .map(|blk| {
            let hits = blk.iter().filter(|&&v| set.contains(v)).count();
            Rational::new((hits as i64).into(), (blk.len() as i64).into()) - &target
        })
        .collect();
    let shift = ri(spec.b as i64 - spec.a as i64);
    let in_kernel = m_pi.to_rational().add_scalar_identity(&shift).mul_vec(&h).iter().all(Zero::is_zero);
    let h_zero = h.iter().all(Zero::is_zero);
    let narrative = match (in_kernel, h_zero) {
        (false, _) => "h is not in the kernel of M_pi + (b - a) I".to_string(),
        (true, true) => format!(
            "h = 0: every block meets W1 in proportion {}",
            super::report::ExactRational::from(&target)
        ),
        (true, false) => format!("a - b = {} is an eigenvalue of M_pi with eigenvector h", spec.eigenvalue()),
    };
    let mut part_a = ConditionReport::check(&format!("{ID}.a"), in_kernel, narrative)
        .with("h", WitnessValue::rational_vector(&h))
        .with("h_is_zero", WitnessValue::Bool(h_zero))
        .with("in_kernel", WitnessValue::Bool(in_kernel));
    if in_kernel && !h_zero {
        part_a.push("eigenvalue", WitnessValue::Integer(spec.eigenvalue()));
    }

    // (b): roles swapped, tau' = pi and pi' = {W1, W2}
    let mut w2 = set.complement().to_vec();
    w2.sort_unstable();
    let two = Partition::new(n, vec![set.to_vec(), w2]).expect("proper subset");
    let q = intersection_fractions(&two, pi);
    let m = pi.len();
    let part_b = if m < 2 {
        ConditionReport::inapplicable(&format!("{ID}.b"), "pi has a single block, so no pair i != j exists")
    } else {
        let mut children = Vec::new();
        for i in 0..m {
            for j in (0..m).filter(|&j| j != i) {
                let core = two_equ_core(&format!("{ID}.b[{i},{j}]"), k, &spec.quotient(), &m_pi, &q, i, j);
                let mut rep = core.report;
                if rep.verdict != Verdict::Inapplicable {
                    let gap = m_pi.get(j, j) as i64 - m_pi.get(i, j) as i64;
                    let applies = gap != k as i64 && gap != spec.eigenvalue();
                    rep.push("part_iii_applies", WitnessValue::Bool(applies));
                    if applies {
                        let target = -core.r.clone();
                        let ok = core.solutions.iter().all(|s| {
                            q.iter().all(|row| {
                                let sum: Rational = row
                                    .iter()
                                    .enumerate()
                                    .map(|(l, x)| x * (&s.d[l] - if l == j { Rational::one() } else { Rational::zero() }))
                                    .sum();
                                sum == target
                            })
                        });
                        rep.push("part_iii_sums_equal_minus_r", WitnessValue::Bool(ok));
                        if !ok && rep.verdict == Verdict::Holds {
                            rep.verdict = Verdict::Fails;
                            rep.narrative = "weighted sums differ from -b_ij/(k + b_ij - b_jj)".into();
                        }
                    }
                }
                children.push(rep);
            }
        }
        ConditionReport::combine(&format!("{ID}.b"), "every ordered pair of blocks of pi", children)
    };
    Ok(ConditionReport::combine(ID, "perfect set against an equitable partition", vec![part_a, part_b]))
}

/// `h(alpha)` constant on W1 and on its complement, an eigenvector for `a − b`.
pub fn coro_eigenvector_family(
    g: &Graph,
    w1: &[usize],
    spec: &PerfectSetSpec,
    alpha: &Rational,
) -> Result<ConditionReport, ConditionError> {
    const ID: &str = "coro_eigenvector_family";
    let set = vertex_set(g.n(), w1)?;
    if let Some(p) = perfect_precondition(g, w1, spec) {
        return Ok(ConditionReport::inapplicable(ID, p));
    }
    let inv = Rational::new(1.into(), (spec.denominator() as i64).into());
    let excluded = Rational::one() - &inv;
    if *alpha == excluded {
        return Ok(ConditionReport::inapplicable(
            ID,
            format!(
                "alpha = 1 - 1/(k - a + b) = {} makes h identically zero",
                super::report::ExactRational::from(&excluded)
            ),
        )
        .with("h", WitnessValue::rational_vector(&vec![Rational::zero(); g.n()])));
    }
    let factor = &inv - (Rational::one() - alpha);
    let h_in = ri((spec.k - spec.a) as i64) * &factor;
    let h_out = -ri(spec.b as i64) * &factor;
    let h: Vec<Rational> = (0..g.n()).map(|v| if set.contains(v) { h_in.clone() } else { h_out.clone() }).collect();
    let a = RationalMatrix::from_i64(&g.adjacency_matrix());
    let lambda = ri(spec.eigenvalue());
    let ok = a.mul_vec(&h).iter().zip(&h).all(|(x, y)| *x == &lambda * y);
    Ok(ConditionReport::check(
        ID,
        ok,
        if ok {
            format!("A h = ({}) h with h nonzero", spec.eigenvalue())
        } else {
            "A h differs from (a - b) h".to_string()
        },
    )
    .with("alpha", WitnessValue::rational(alpha))
    .with("h_on_w1", WitnessValue::rational(&h_in))
    .with("h_off_w1", WitnessValue::rational(&h_out))
    .with("eigenvalue", WitnessValue::Integer(spec.eigenvalue()))
    .with("verified", WitnessValue::Bool(ok)))
}

/// `(k − a + b) | b|V|` and `|V| ≥ k − a + b`.
pub fn divisibility_gate(n: usize, spec: &PerfectSetSpec) -> ConditionReport {
    const ID: &str = "divisibility_gate";
    let d = spec.denominator();
    let bn = spec.b * n;
    let divides = bn % d == 0;
    let large = n >= d;
    let narrative = match (divides, large) {
        (true, true) => format!("{d} divides {bn}; |W1| forced to {}", bn / d),
        (false, _) => format!("{d} does not divide b|V| = {bn}; no ({}, {})-perfect set", spec.a, spec.b),
        (true, false) => format!("|V| = {n} < k - a + b = {d}; no ({}, {})-perfect set", spec.a, spec.b),
    };
    let mut r = ConditionReport::check(ID, divides && large, narrative)
        .with("k_minus_a_plus_b", WitnessValue::Integer(d as i64))
        .with("b_times_v", WitnessValue::Integer(bn as i64))
        .with("remainder", WitnessValue::Integer((bn % d) as i64))
        .with("order", WitnessValue::Integer(n as i64));
    if divides {
        r.push("forced_size", WitnessValue::Integer((bn / d) as i64));
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{distance_partition, graph_from_edges};
    use crate::linalg::ratio;

    fn rv(xs: &[(i64, i64)]) -> WitnessValue {
        WitnessValue::rational_vector(&xs.iter().map(|&(a, b)| ratio(a, b)).collect::<Vec<_>>())
    }

    #[test]
    fn c6_distance_partition_against_perfect_code() {
        let c6 = Graph::cycle(6);
        let pi = distance_partition(&c6, &[0]).unwrap();
        let tau = Partition::new(6, vec![vec![0, 3], vec![1, 2, 4, 5]]).unwrap();
        let inst = TwoPartitionInstance::new(&c6, pi, tau).unwrap();
        let r = thm_2equ(&inst, 1, 0).unwrap();
        assert_eq!(r.verdict, Verdict::Holds);
        assert_eq!(r.witness("h_particular"), Some(&rv(&[(2, 3), (-1, 3), (-1, 3), (2, 3)])));
        assert_eq!(r.witness("eigenvalue"), Some(&WitnessValue::rational(&ratio(-1, 1))));
        assert_eq!(r.witness("closed_form_h_is_zero"), Some(&WitnessValue::Bool(true)));
        assert!(r.is_well_formed());
        let all = thm_2equ_all_pairs(&inst);
        assert_eq!(all.verdict, Verdict::Holds);
        assert_eq!(all.children.len(), 2);
    }

    #[test]
    fn identical_partitions_give_zero_closed_form_h() {
        let c6 = Graph::cycle(6);
        let pi = distance_partition(&c6, &[0]).unwrap();
        let inst = TwoPartitionInstance::new(&c6, pi.clone(), pi).unwrap();
        let all = thm_2equ_all_pairs(&inst);
        assert_eq!(all.verdict, Verdict::Holds);
        for c in &all.children {
            let WitnessValue::RationalVector(h) = c.witness("h_closed_form").unwrap() else { panic!() };
            assert!(h.iter().all(|x| x.num == 0));
        }
    }

    #[test]
    fn component_block_is_inapplicable() {
        let g = graph_from_edges(6, &[(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3)]).unwrap();
        let tau = Partition::new(6, vec![vec![0, 1, 2], vec![3, 4, 5]]).unwrap();
        let inst = TwoPartitionInstance::new(&g, Partition::discrete(6), tau).unwrap();
        let all = thm_2equ_all_pairs(&inst);
        assert_eq!(all.verdict, Verdict::Inapplicable);
        assert!(all.children.iter().all(|c| c.verdict == Verdict::Inapplicable));
        assert!(all.is_well_formed());
        assert!(thm_2equ(&inst, 0, 0).is_err());
    }

    #[test]
    fn perfect_code_against_partitions() {
        let c6 = Graph::cycle(6);
        let spec = PerfectSetSpec::new(0, 1, 2).unwrap();
        let pi = distance_partition(&c6, &[0]).unwrap();
        let r = coro_perfect_vs_partition(&c6, &pi, &[0, 3], &spec).unwrap();
        assert_eq!(r.verdict, Verdict::Holds, "{r:#?}");
        let a = r.child("coro_perfect_vs_partition.a").unwrap();
        assert_eq!(a.witness("h"), Some(&rv(&[(2, 3), (-1, 3), (-1, 3), (2, 3)])));
        assert_eq!(a.witness("eigenvalue"), Some(&WitnessValue::Integer(-1)));

        let cosets = Partition::new(6, vec![vec![0, 2, 4], vec![1, 3, 5]]).unwrap();
        let r = coro_perfect_vs_partition(&c6, &cosets, &[0, 3], &spec).unwrap();
        let a = r.child("coro_perfect_vs_partition.a").unwrap();
        assert_eq!(a.witness("h_is_zero"), Some(&WitnessValue::Bool(true)));
        assert_eq!(r.verdict, Verdict::Holds);

        let r = coro_perfect_vs_partition(&c6, &Partition::trivial(6), &[0, 3], &spec).unwrap();
        let a = r.child("coro_perfect_vs_partition.a").unwrap();
        assert_eq!(a.witness("h_is_zero"), Some(&WitnessValue::Bool(true)));
        assert_eq!(r.child("coro_perfect_vs_partition.b").unwrap().verdict, Verdict::Inapplicable);

        let r = coro_perfect_vs_partition(&c6, &pi, &[0, 2], &spec).unwrap();
        assert_eq!(r.verdict, Verdict::Inapplicable);
    }

    #[test]
    fn eigenvector_family() {
        let c6 = Graph::cycle(6);
        let spec = PerfectSetSpec::new(0, 1, 2).unwrap();
        let r = coro_eigenvector_family(&c6, &[0, 3], &spec, &ratio(0, 1)).unwrap();
        assert_eq!(r.verdict, Verdict::Holds);
        assert_eq!(r.witness("h_on_w1"), Some(&WitnessValue::rational(&ratio(-4, 3))));
        assert_eq!(r.witness("h_off_w1"), Some(&WitnessValue::rational(&ratio(2, 3))));
        let r = coro_eigenvector_family(&c6, &[0, 3], &spec, &ratio(2, 3)).unwrap();
        assert_eq!(r.verdict, Verdict::Inapplicable);
        assert!(r.is_well_formed());

        let k4 = Graph::complete(4);
        let spec = PerfectSetSpec::new(0, 1, 3).unwrap();
        let r = coro_eigenvector_family(&k4, &[0], &spec, &ratio(0, 1)).unwrap();
        assert_eq!(r.verdict, Verdict::Holds);
        assert_eq!(r.witness("h_on_w1"), Some(&WitnessValue::rational(&ratio(-9, 4))));
        assert_eq!(r.witness("h_off_w1"), Some(&WitnessValue::rational(&ratio(3, 4))));
    }

    #[test]
    fn divisibility() {
        let spec = PerfectSetSpec::new(0, 1, 2).unwrap();
        let r = divisibility_gate(4, &spec);
        assert_eq!(r.verdict, Verdict::Fails);
        assert!(r.is_well_formed());
        assert_eq!(divisibility_gate(6, &spec).verdict, Verdict::Holds);
        let r = divisibility_gate(26, &PerfectSetSpec::new(2, 13, 15).unwrap());
        assert_eq!(r.verdict, Verdict::Holds);
        assert_eq!(r.witness("forced_size"), Some(&WitnessValue::Integer(13)));
        // 4 divides b|V| = 4 but |V| = 2 < k - a + b = 4
        let r = divisibility_gate(2, &PerfectSetSpec::new(0, 2, 2).unwrap());
        assert_eq!(r.verdict, Verdict::Fails);
        assert_eq!(r.witness("remainder"), Some(&WitnessValue::Integer(0)));
    }
}
