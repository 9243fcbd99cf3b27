use std::fmt::Write;
use std::time::Duration;

use eqpart::conditions::{
    coro_eigenvector_family, coro_perfect_code_specialization, coro_perfect_vs_partition, divisibility_gate,
    lemma_right_count, lemma_translate_invariance, thm_2equ_all_pairs, thm_nec_cd, thm_nec_cond, thm_vt_bound,
    ConditionReport, TwoPartitionInstance, DEFAULT_SCALE_CAP,
};
use eqpart::linalg::{
    cayley_spectrum_from_characters, float_spectrum, float_spectrum_of_integers, integer_eigenvalue_multiplicity,
    Spectrum, MERGE_TOL,
};
use eqpart::partition::{
    is_perfect_set, projection_commutes, quotient_matrix, NotEquitableWitness, PartitionError, PerfectSetSpec,
};
use eqpart::search::{
    dihedral_demo, enumerate_perfect_sets, enumerate_perfect_sets_cayley, scan_all_specs, scan_all_specs_cayley,
    DihedralReport, ScanConfig, ScanRow, SearchConfig, SearchOutcome,
};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::args::{
    CheckPartitionArgs, ConditionsArgs, DihedralDemoArgs, FindPerfectArgs, LimitArgs, ScanArgs, SpectrumArgs,
};
use crate::error::CliError;
use crate::input::{
    env_usize, load_partition, load_source, load_subgroup, parse_index_list, parse_permutations, parse_rational,
    Source,
};
use crate::manifest::InputLog;
use crate::render;

pub struct Output {
    pub report: Value,
    pub text: String,
}

fn output<T: Serialize>(report: &T, text: String) -> Result<Output, CliError> {
    Ok(Output { report: serde_json::to_value(report)?, text })
}

fn threads() -> Result<Option<usize>, CliError> {
    env_usize("EQPART_THREADS")
}

fn budget(limits: &LimitArgs) -> Result<Option<Duration>, CliError> {
    match limits.time_budget {
        None => Ok(None),
        Some(s) if s.is_finite() && s > 0.0 => Ok(Some(Duration::from_secs_f64(s))),
        Some(s) => Err(CliError::input(format!("--time-budget must be positive, got {s}"))),
    }
}

fn max_results(limits: &LimitArgs) -> Result<Option<usize>, CliError> {
    match limits.max_results {
        Some(0) => Err(CliError::input("--max-results must be at least 1")),
        m => Ok(m),
    }
}

fn spec_for(source: &Source, a: usize, b: usize) -> Result<PerfectSetSpec, CliError> {
    let k = source.graph().regular_degree().ok_or_else(|| CliError::input("graph is not regular"))?;
    Ok(PerfectSetSpec::new(a, b, k)?)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumLine {
    pub value: f64,
    pub multiplicity: usize,
    /// Set when the value is an integer, with its multiplicity by exact elimination.
    pub exact_multiplicity: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CharacterSpectrum {
    pub entries: Vec<SpectrumLine>,
    pub agreement_residual: Option<f64>,
    pub multiplicities_agree: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumReport {
    pub vertices: usize,
    pub edges: usize,
    pub degree: Option<usize>,
    pub adjacency: Vec<SpectrumLine>,
    pub merge_ambiguous: bool,
    pub character: Option<CharacterSpectrum>,
    pub note: Option<String>,
}

fn lines(s: &Spectrum, adj: &[Vec<i64>]) -> Vec<SpectrumLine> {
    s.entries
        .iter()
        .map(|e| {
            let r = e.value.round();
            let exact = ((e.value - r).abs() <= MERGE_TOL).then(|| integer_eigenvalue_multiplicity(adj, r as i64));
            SpectrumLine { value: e.value, multiplicity: e.multiplicity, exact_multiplicity: exact }
        })
        .collect()
}

fn spectrum_text(entries: &[SpectrumLine]) -> String {
    entries
        .iter()
        .map(|l| {
            let exact = match l.exact_multiplicity {
                Some(m) if m == l.multiplicity => "  (exact)".to_string(),
                Some(m) => format!("  (exact multiplicity {m})"),
                None => String::new(),
            };
            format!("  {:>14}  x{}{exact}", render::number(l.value), l.multiplicity)
        })
        .collect::<Vec<_>>()
        .join("\n")
}

pub fn spectrum(args: &SpectrumArgs, log: &mut InputLog) -> Result<Output, CliError> {
    let source = load_source(&args.source, log)?;
    let g = source.graph();
    let adj = g.adjacency_matrix();
    let adj_spec = float_spectrum_of_integers(&adj)?;
    let adjacency = lines(&adj_spec, &adj);
    let mut note = source.table_note().map(str::to_string);
    let character = match (source.cayley(), source.table()) {
        (Some(cg), Some(t)) if cg.is_normal() => {
            let cs = cayley_spectrum_from_characters(cg.group(), cg.connection_set(), t)?;
            let residual = adj_spec.max_deviation(&cs);
            Some(CharacterSpectrum { entries: lines(&cs, &adj), agreement_residual: residual, multiplicities_agree: residual.is_some() })
        }
        (Some(cg), _) if !cg.is_normal() => {
            note = Some("connection set is not closed under conjugation".into());
            None
        }
        _ => None,
    };
    let report = SpectrumReport {
        vertices: g.n(),
        edges: g.edge_count(),
        degree: g.regular_degree(),
        adjacency,
        merge_ambiguous: adj_spec.merge_ambiguous,
        character,
        note,
    };
    let mut text = format!(
        "{} vertices, {} edges, degree {}\nadjacency spectrum:\n{}\n",
        report.vertices,
        report.edges,
        report.degree.map_or("irregular".into(), |k| k.to_string()),
        spectrum_text(&report.adjacency)
    );
    if let Some(c) = &report.character {
        let _ = writeln!(text, "character-derived spectrum:\n{}", spectrum_text(&c.entries));
        match c.agreement_residual {
            Some(r) => {
                let _ = writeln!(text, "agreement: multiplicities equal, max eigenvalue deviation {r:.3e}");
            }
            None => text.push_str("agreement: MULTIPLICITIES DIFFER\n"),
        }
    }
    if let Some(n) = &report.note {
        let _ = writeln!(text, "note: {n}");
    }
    output(&report, text)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PerfectPair {
    pub a: usize,
    pub b: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PartitionReport {
    pub blocks: Vec<Vec<usize>>,
    pub equitable: bool,
    pub quotient: Option<Vec<Vec<usize>>>,
    pub witness: Option<NotEquitableWitness>,
    pub quotient_spectrum: Option<Vec<f64>>,
    pub projection_commutes: bool,
    pub perfect_set: Option<PerfectPair>,
}

pub fn check_partition(args: &CheckPartitionArgs, log: &mut InputLog) -> Result<Output, CliError> {
    let source = load_source(&args.source, log)?;
    let g = source.graph();
    let pi = load_partition(g.n(), args.part.blocks.as_deref(), args.part.partition.as_deref(), log)?
        .ok_or_else(|| CliError::input("check-partition needs --blocks or --partition"))?;
    let (quotient, witness) = match quotient_matrix(g, &pi) {
        Ok(q) => (Some(q), None),
        Err(PartitionError::NotEquitable(w)) => (None, Some(w)),
        Err(e) => return Err(e.into()),
    };
    let quotient_spectrum = match &quotient {
        Some(q) => Some(
            float_spectrum(&q.to_f64())?
                .entries
                .iter()
                .flat_map(|e| std::iter::repeat_n(e.value, e.multiplicity))
                .collect(),
        ),
        None => None,
    };
    let perfect_set = quotient.as_ref().filter(|q| q.size() == 2 && g.regular_degree().is_some()).and_then(|q| {
        let (a, b) = (q.get(0, 0), q.get(1, 0));
        (b >= 1).then_some(PerfectPair { a, b })
    });
    let report = PartitionReport {
        blocks: pi.blocks().to_vec(),
        equitable: quotient.is_some(),
        quotient: quotient.as_ref().map(|q| q.entries().to_vec()),
        witness,
        quotient_spectrum,
        projection_commutes: projection_commutes(g, &pi),
        perfect_set,
    };
    let mut text = String::new();
    match (&report.quotient, &report.witness) {
        (Some(q), _) => {
            let _ = writeln!(text, "equitable: yes\nquotient matrix:\n{}", render::matrix(q, "  "));
            if let Some(s) = &report.quotient_spectrum {
                let _ = writeln!(text, "quotient eigenvalues: {}", s.iter().map(|x| render::number(*x)).collect::<Vec<_>>().join(", "));
            }
            if let Some(p) = &report.perfect_set {
                let _ = writeln!(text, "first block is a ({}, {})-perfect set", p.a, p.b);
            }
        }
        (None, Some(w)) => {
            let _ = writeln!(
                text,
                "equitable: no\nvertices {} and {} of block {} have {} and {} neighbours in block {}",
                w.v, w.v_prime, w.i, w.count_v, w.count_v_prime, w.j
            );
        }
        (None, None) => unreachable!("either a quotient or a witness"),
    }
    let _ = writeln!(text, "projection commutes with A: {}", report.projection_commutes);
    output(&report, text)
}

fn outcome_text(o: &SearchOutcome) -> String {
    let mut text = format!(
        "(a, b) = ({}, {}), k = {}, |W1| = {}\n{} set(s), complete = {}, nodes explored = {}\n",
        o.a,
        o.b,
        o.k,
        o.set_size.map_or("not integral".into(), |s| s.to_string()),
        o.sets.len(),
        o.complete,
        o.nodes_explored
    );
    for r in &o.reasons {
        let _ = writeln!(text, "reason: {r}");
    }
    for s in &o.sets {
        let _ = writeln!(text, "  {}", render::set(s));
    }
    text
}

pub fn find_perfect(args: &FindPerfectArgs, log: &mut InputLog) -> Result<Output, CliError> {
    let source = load_source(&args.source, log)?;
    let cfg = SearchConfig {
        spec: spec_for(&source, args.spec.a, args.spec.b)?,
        max_results: max_results(&args.limits)?,
        canonical_only: args.canonical,
        time_budget: budget(&args.limits)?,
        threads: threads()?,
    };
    let outcome = match source.cayley() {
        Some(cg) => enumerate_perfect_sets_cayley(cg, &cfg)?,
        None if args.canonical => return Err(CliError::input("--canonical needs a --cayley source")),
        None => enumerate_perfect_sets(source.graph(), &cfg)?,
    };
    let text = outcome_text(&outcome);
    output(&outcome, text)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanReport {
    pub degree: usize,
    pub rows: Vec<ScanRow>,
}

fn scan_text(rows: &[ScanRow], show_all: bool) -> String {
    let mut text = String::from("   a    b  count  complete  reason\n");
    for r in rows.iter().filter(|r| show_all || r.searched || r.count > 0) {
        let reason = r.reasons.iter().map(ToString::to_string).collect::<Vec<_>>().join("; ");
        let _ = writeln!(text, "{:>4} {:>4} {:>6}  {:>8}  {reason}", r.a, r.b, r.count, r.complete);
        if let Some(s) = &r.sample {
            let _ = writeln!(text, "           sample {}", render::set(s));
        }
    }
    text
}

pub fn scan(args: &ScanArgs, log: &mut InputLog) -> Result<Output, CliError> {
    let source = load_source(&args.source, log)?;
    let degree = source.graph().regular_degree().ok_or_else(|| CliError::input("graph is not regular"))?;
    let cfg = ScanConfig {
        max_results: max_results(&args.limits)?,
        time_budget: budget(&args.limits)?,
        threads: threads()?,
        canonical_only: args.canonical,
    };
    let rows = match source.cayley() {
        Some(cg) => scan_all_specs_cayley(cg, &cfg)?,
        None if args.canonical => return Err(CliError::input("--canonical needs a --cayley source")),
        None => scan_all_specs(source.graph(), &cfg)?,
    };
    let gated = rows.iter().filter(|r| !r.searched).count();
    let mut text = scan_text(&rows, false);
    let _ = writeln!(text, "{gated} of {} pairs ruled out by divisibility or the spectrum", rows.len());
    output(&ScanReport { degree, rows }, text)
}

pub fn conditions(args: &ConditionsArgs, log: &mut InputLog) -> Result<Output, CliError> {
    let source = load_source(&args.source, log)?;
    let g = source.graph();
    let n = g.n();
    let spec = spec_for(&source, args.spec.a, args.spec.b)?;
    let w1 = args.w1.as_deref().map(|s| parse_index_list(s, n, log)).transpose()?;
    let pi = load_partition(n, args.part.blocks.as_deref(), args.part.partition.as_deref(), log)?;
    let tau = load_partition(n, args.tau_blocks.as_deref(), args.tau_partition.as_deref(), log)?;
    let scale_cap = env_usize("EQPART_SCALE_CAP")?.unwrap_or(DEFAULT_SCALE_CAP);

    let mut children: Vec<ConditionReport> = vec![divisibility_gate(n, &spec)];
    if let (Some(p), Some(t)) = (&pi, &tau) {
        let inst = TwoPartitionInstance::new(g, p.clone(), t.clone())?;
        children.push(thm_2equ_all_pairs(&inst));
    } else if tau.is_some() {
        return Err(CliError::input("a second partition needs a first one via --blocks or --partition"));
    }
    if let Some(w) = &w1 {
        if let Some(p) = &pi {
            children.push(coro_perfect_vs_partition(g, p, w, &spec)?);
        }
        if let Some(a) = &args.alpha {
            children.push(coro_eigenvector_family(g, w, &spec, &parse_rational(a)?)?);
        }
        let autos = match (&args.autos, source.cayley()) {
            (Some(path), _) => Some(parse_permutations(&log.read(path)?, n)?),
            (None, Some(cg)) => Some(cg.right_translations()),
            (None, None) => None,
        };
        if let Some(autos) = autos {
            children.push(thm_vt_bound(g, &autos, w, &spec)?);
        }
    } else if args.alpha.is_some() {
        return Err(CliError::input("--alpha needs --w1"));
    }
    if let Some(cg) = source.cayley() {
        if let Some(table) = source.table() {
            if let Some(w) = &w1 {
                children.push(thm_nec_cond(cg, table, w, &spec, scale_cap)?);
                if matches!((spec.a, spec.b), (0, 1) | (1, 1)) {
                    children.push(coro_perfect_code_specialization(cg, table, w, &spec, scale_cap)?);
                }
            }
            if let Some(h) = &args.source.subgroup {
                let h = load_subgroup(cg.group(), h, log)?;
                children.push(thm_nec_cd(cg, table, &h, &spec, w1.as_deref())?);
            }
        } else if let Some(note) = source.table_note() {
            children.push(ConditionReport::inapplicable("character_conditions", note.to_string()));
        }
        if let Some(p) = &pi {
            if quotient_matrix(g, p).is_ok() {
                children.push(lemma_translate_invariance(cg, p)?);
                children.push(lemma_right_count(cg, p)?);
            }
        }
    } else if args.source.subgroup.is_some() {
        return Err(CliError::input("--subgroup needs a --cayley source"));
    }
    let mut report = ConditionReport::combine(
        "conditions",
        format!("necessary conditions for ({}, {})-perfect sets with k = {}", spec.a, spec.b, spec.k),
        children,
    );
    if let Some(w) = &w1 {
        report.push("w1", eqpart::conditions::WitnessValue::VertexSet(w.clone()));
        report.push("w1_is_perfect", eqpart::conditions::WitnessValue::Bool(is_perfect_set(g, w, &spec)));
    }
    let text = render::report(&report);
    output(&report, text)
}

pub fn dihedral(args: &DihedralDemoArgs, _log: &mut InputLog) -> Result<Output, CliError> {
    let cfg = ScanConfig {
        max_results: max_results(&args.limits)?,
        time_budget: budget(&args.limits)?,
        threads: threads()?,
        canonical_only: false,
    };
    let r: DihedralReport = dihedral_demo(args.n, &cfg)?;
    let mut text = format!("Cay(D_{}, {{r, r^-1}} + reflections), degree {}\n", r.order, r.degree);
    if !r.claims_apply {
        text.push_str("n < 13: output is descriptive only\n");
    }
    text.push_str("spectrum (adjacency / characters):\n");
    for s in &r.spectrum {
        let _ = writeln!(text, "  {:>14}  x{} / x{}", render::number(s.value), s.adjacency_multiplicity, s.character_multiplicity);
    }
    let _ = writeln!(
        text,
        "spectrum residual {:.3e}, matches the expected table: {}",
        r.spectrum_residual, r.spectrum_matches_table
    );
    let _ = writeln!(text, "pairs surviving both gates: {}", r.surviving_pairs.iter().map(|(a, b)| format!("({a}, {b})")).collect::<Vec<_>>().join(" "));
    text.push_str(&scan_text(&r.rows, false));
    for c in &r.claimed_sets {
        let _ = writeln!(text, "{}: perfect = {}, found by search = {}", c.name, c.is_perfect, c.found_by_search);
    }
    for (a, b, s) in &r.unexpected_sets {
        let _ = writeln!(text, "other ({a}, {b})-perfect set: {}", render::set(s));
    }
    if let Some(e) = r.minus_one_branch_empty {
        let _ = writeln!(text, "no (b-1, b)-perfect sets: {e}");
    }
    let _ = writeln!(
        text,
        "complete = {}, budget exceeded = {}, nodes explored = {}\nclassification confirmed: {}",
        r.complete, r.budget_exceeded, r.nodes_explored, r.classification_confirmed
    );
    output(&r, text)
}
