//! Backtracking enumeration of `(a,b)`-perfect sets, a brute-force oracle,
//! and the dihedral classification driver.
//!
//! The search assigns each vertex `in`, `out` or leaves it undecided and
//! propagates the local count constraints after every decision. A vertex in
//! the set needs exactly `a` neighbours in the set and a vertex outside needs
//! exactly `b`, so whenever a count becomes tight the remaining undecided
//! neighbours are forced.

use std::fmt;
use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{cayley_graph, CayleyGraph, Graph};
use crate::group::{builtin_character_table, dihedral_group, TableFamily};
use crate::linalg::{cayley_spectrum_from_characters, float_spectrum_of_integers, integer_eigenvalue_multiplicity, Spectrum};
use crate::partition::{is_perfect_set, PerfectSetSpec};

/// Oracle limits.
pub const ORACLE_MAX_VERTICES: usize = 28;
pub const ORACLE_MAX_SUBSETS: u128 = 100_000_000;

const BUDGET_CHECK_INTERVAL: u64 = 256;
const PARALLEL_DEPTH: usize = 2;

#[derive(Debug, Error)]
pub enum SearchError {
    #[error("graph is not regular")]
    NotRegular,
    #[error("graph has degree {found} but k = {expected} was requested")]
    DegreeMismatch { expected: usize, found: usize },
    #[error("oracle refused: {n} vertices and {subsets} subsets of size {size}")]
    TooLarge { n: usize, size: usize, subsets: u128 },
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("thread pool: {0}")]
    ThreadPool(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchConfig {
    pub spec: PerfectSetSpec,
    pub max_results: Option<usize>,
    /// Keep only the lexicographically least right translate (Cayley input only).
    pub canonical_only: bool,
    pub time_budget: Option<Duration>,
    /// Worker count; `None` uses the global pool.
    pub threads: Option<usize>,
}

impl SearchConfig {
    pub fn new(spec: PerfectSetSpec) -> Self {
        SearchConfig { spec, max_results: None, canonical_only: false, time_budget: None, threads: None }
    }

    fn validate(&self) -> Result<(), SearchError> {
        if self.max_results == Some(0) {
            return Err(SearchError::InvalidConfig("max_results must be at least 1".into()));
        }
        if self.threads == Some(0) {
            return Err(SearchError::InvalidConfig("thread count must be at least 1".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SearchReason {
    Divisibility { denominator: usize, b_times_v: usize },
    SpectralGate { eigenvalue: i64, multiplicity: usize },
    Exhausted,
    LimitReached { max_results: usize },
    BudgetExceeded { budget_ms: u128 },
}

impl fmt::Display for SearchReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SearchReason::Divisibility { denominator, b_times_v } => {
                write!(f, "k - a + b = {denominator} does not divide b|V| = {b_times_v}")
            }
            SearchReason::SpectralGate { eigenvalue, multiplicity } => {
                write!(f, "a - b = {eigenvalue} is not an eigenvalue (multiplicity({eigenvalue}) = {multiplicity})")
            }
            SearchReason::Exhausted => f.write_str("search space exhausted"),
            SearchReason::LimitReached { max_results } => write!(f, "stopped after {max_results} results"),
            SearchReason::BudgetExceeded { budget_ms } => write!(f, "time budget of {budget_ms} ms exceeded"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchOutcome {
    pub a: usize,
    pub b: usize,
    pub k: usize,
    pub set_size: Option<usize>,
    pub sets: Vec<Vec<usize>>,
    pub complete: bool,
    pub nodes_explored: u64,
    /// Every failing gate, or the single way the search ended.
    pub reasons: Vec<SearchReason>,
}

impl SearchOutcome {
    fn gated(spec: &PerfectSetSpec, set_size: Option<usize>, reasons: Vec<SearchReason>) -> Self {
        SearchOutcome {
            a: spec.a,
            b: spec.b,
            k: spec.k,
            set_size,
            sets: Vec::new(),
            complete: true,
            nodes_explored: 0,
            reasons,
        }
    }

    /// True when a gate ruled out every set without searching.
    pub fn gated_out(&self) -> bool {
        self.reasons.iter().any(|r| matches!(r, SearchReason::Divisibility { .. } | SearchReason::SpectralGate { .. }))
    }
}

const UND: u8 = 0;
const IN: u8 = 1;
const OUT: u8 = 2;

struct Ctx<'a> {
    adj: Vec<Vec<usize>>,
    graph: &'a Graph,
    spec: PerfectSetSpec,
    a: u32,
    b: u32,
    target: usize,
    cayley: Option<&'a CayleyGraph>,
    limit: Option<usize>,
    deadline: Option<Instant>,
    nodes: AtomicU64,
    aborted: AtomicBool,
}

#[derive(Clone)]
struct State {
    status: Vec<u8>,
    in_cnt: Vec<u32>,
    und_cnt: Vec<u32>,
    n_in: usize,
    n_und: usize,
}

impl State {
    fn new(ctx: &Ctx) -> Self {
        let n = ctx.adj.len();
        State {
            status: vec![UND; n],
            in_cnt: vec![0; n],
            und_cnt: ctx.adj.iter().map(|l| l.len() as u32).collect(),
            n_in: 0,
            n_und: n,
        }
    }

    /// Returns false on a conflict.
    fn set(&mut self, ctx: &Ctx, v: usize, val: u8, stack: &mut Vec<usize>) -> bool {
        match self.status[v] {
            UND => {}
            s => return s == val,
        }
        self.status[v] = val;
        self.n_und -= 1;
        if val == IN {
            self.n_in += 1;
        }
        for &u in &ctx.adj[v] {
            self.und_cnt[u] -= 1;
            if val == IN {
                self.in_cnt[u] += 1;
            }
            stack.push(u);
        }
        stack.push(v);
        true
    }

    fn force_neighbours(&mut self, ctx: &Ctx, w: usize, val: u8, stack: &mut Vec<usize>) -> bool {
        for &u in &ctx.adj[w] {
            if self.status[u] == UND && !self.set(ctx, u, val, stack) {
                return false;
            }
        }
        true
    }

    fn propagate(&mut self, ctx: &Ctx, stack: &mut Vec<usize>) -> bool {
        loop {
            while let Some(w) = stack.pop() {
                let (i, u) = (self.in_cnt[w], self.und_cnt[w]);
                match self.status[w] {
                    UND => {
                        let fits_in = i <= ctx.a && ctx.a <= i + u;
                        let fits_out = i <= ctx.b && ctx.b <= i + u;
                        let ok = match (fits_in, fits_out) {
                            (false, false) => false,
                            (true, false) => self.set(ctx, w, IN, stack),
                            (false, true) => self.set(ctx, w, OUT, stack),
                            (true, true) => true,
                        };
                        if !ok {
                            return false;
                        }
                    }
                    s => {
                        let req = if s == IN { ctx.a } else { ctx.b };
                        if i > req || i + u < req {
                            return false;
                        }
                        if u > 0 {
                            let forced = if i == req { OUT } else if i + u == req { IN } else { continue };
                            if !self.force_neighbours(ctx, w, forced, stack) {
                                return false;
                            }
                        }
                    }
                }
            }
            if self.n_in > ctx.target || self.n_in + self.n_und < ctx.target {
                return false;
            }
            if self.n_und == 0 {
                return true;
            }
            let forced = if self.n_in == ctx.target {
                OUT
            } else if self.n_in + self.n_und == ctx.target {
                IN
            } else {
                return true;
            };
            for v in 0..self.status.len() {
                if self.status[v] == UND && !self.set(ctx, v, forced, stack) {
                    return false;
                }
            }
        }
    }

    fn decide(&mut self, ctx: &Ctx, v: usize, val: u8) -> bool {
        let mut stack = Vec::new();
        self.set(ctx, v, val, &mut stack) && self.propagate(ctx, &mut stack)
    }

    /// Undecided vertex with the fewest undecided neighbours, lowest index first.
    fn branch_vertex(&self) -> Option<usize> {
        (0..self.status.len()).filter(|&v| self.status[v] == UND).min_by_key(|&v| (self.und_cnt[v], v))
    }

    fn members(&self) -> Vec<usize> {
        (0..self.status.len()).filter(|&v| self.status[v] == IN).collect()
    }
}

impl Ctx<'_> {
    fn out_of_time(&self) -> bool {
        if self.aborted.load(Ordering::Relaxed) {
            return true;
        }
        let count = self.nodes.fetch_add(1, Ordering::Relaxed) + 1;
        if let Some(d) = self.deadline {
            if count % BUDGET_CHECK_INTERVAL == 0 && Instant::now() >= d {
                self.aborted.store(true, Ordering::Relaxed);
                return true;
            }
        }
        false
    }

    fn is_canonical(&self, set: &[usize]) -> bool {
        match self.cayley {
            None => true,
            Some(cg) => cg.group().elements().all(|x| cg.right_translate(set, x).as_slice() >= set),
        }
    }

    fn full(&self, found: &[Vec<usize>]) -> bool {
        self.limit.is_some_and(|l| found.len() >= l)
    }

    fn dfs(&self, st: State, depth: usize, found: &mut Vec<Vec<usize>>) {
        if self.out_of_time() || self.full(found) {
            return;
        }
        let Some(v) = st.branch_vertex() else {
            let set = st.members();
            debug_assert!(is_perfect_set(self.graph, &set, &self.spec));
            if self.is_canonical(&set) && is_perfect_set(self.graph, &set, &self.spec) {
                found.push(set);
            }
            return;
        };
        let child = |val: u8| {
            let mut s = st.clone();
            s.decide(self, v, val).then_some(s)
        };
        if depth < PARALLEL_DEPTH {
            let (left, right) = rayon::join(
                || self.run_child(child(IN), depth),
                || self.run_child(child(OUT), depth),
            );
            found.extend(left);
            found.extend(right);
            if let Some(l) = self.limit {
                found.truncate(l);
            }
        } else {
            for val in [IN, OUT] {
                if let Some(s) = child(val) {
                    self.dfs(s, depth + 1, found);
                }
            }
        }
    }

    fn run_child(&self, st: Option<State>, depth: usize) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        if let Some(s) = st {
            self.dfs(s, depth + 1, &mut out);
        }
        out
    }
}

fn check_graph(g: &Graph, spec: &PerfectSetSpec) -> Result<(), SearchError> {
    let k = g.regular_degree().ok_or(SearchError::NotRegular)?;
    if k != spec.k {
        return Err(SearchError::DegreeMismatch { expected: spec.k, found: k });
    }
    Ok(())
}

/// Forced set size, or the gated outcome when divisibility or the spectrum
/// rules every set out.
fn gates(
    g: &Graph,
    spec: &PerfectSetSpec,
    multiplicity: &dyn Fn(i64) -> usize,
) -> Result<Result<usize, SearchOutcome>, SearchError> {
    check_graph(g, spec)?;
    let n = g.n();
    let size = spec.forced_size(n);
    let mut failed = Vec::new();
    if size.is_none() {
        failed.push(SearchReason::Divisibility { denominator: spec.denominator(), b_times_v: spec.b * n });
    }
    let lambda = spec.eigenvalue();
    if multiplicity(lambda) == 0 {
        failed.push(SearchReason::SpectralGate { eigenvalue: lambda, multiplicity: 0 });
    }
    match size {
        Some(s) if failed.is_empty() => Ok(Ok(s)),
        _ => Ok(Err(SearchOutcome::gated(spec, size, failed))),
    }
}

fn run(
    g: &Graph,
    cayley: Option<&CayleyGraph>,
    cfg: &SearchConfig,
    multiplicity: &dyn Fn(i64) -> usize,
) -> Result<SearchOutcome, SearchError> {
    cfg.validate()?;
    let size = match gates(g, &cfg.spec, multiplicity)? {
        Ok(s) => s,
        Err(outcome) => return Ok(outcome),
    };
    let ctx = Ctx {
        adj: (0..g.n()).map(|v| g.neighbours(v).to_vec()).collect(),
        graph: g,
        spec: cfg.spec,
        a: cfg.spec.a as u32,
        b: cfg.spec.b as u32,
        target: size,
        cayley: cayley.filter(|_| cfg.canonical_only),
        limit: cfg.max_results,
        deadline: cfg.time_budget.map(|d| Instant::now() + d),
        nodes: AtomicU64::new(0),
        aborted: AtomicBool::new(false),
    };
    let search = || {
        let mut root = State::new(&ctx);
        let mut stack: Vec<usize> = (0..g.n()).collect();
        let mut ok = root.propagate(&ctx, &mut stack);
        if let Some(cg) = ctx.cayley {
            ok = ok && root.decide(&ctx, cg.group().identity(), IN);
        }
        let mut found = Vec::new();
        if ok {
            ctx.dfs(root, 0, &mut found);
        }
        found
    };
    let mut sets = match cfg.threads {
        None => search(),
        Some(t) => rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build()
            .map_err(|e| SearchError::ThreadPool(e.to_string()))?
            .install(search),
    };
    let limited = ctx.full(&sets);
    sets.sort();
    let (complete, reason) = if ctx.aborted.load(Ordering::Relaxed) {
        (false, SearchReason::BudgetExceeded { budget_ms: cfg.time_budget.unwrap_or_default().as_millis() })
    } else if limited {
        (false, SearchReason::LimitReached { max_results: cfg.max_results.unwrap_or_default() })
    } else {
        (true, SearchReason::Exhausted)
    };
    Ok(SearchOutcome {
        a: cfg.spec.a,
        b: cfg.spec.b,
        k: cfg.spec.k,
        set_size: Some(size),
        sets,
        complete,
        nodes_explored: ctx.nodes.load(Ordering::Relaxed),
        reasons: vec![reason],
    })
}

fn exact_multiplicity(g: &Graph) -> impl Fn(i64) -> usize {
    let adj = g.adjacency_matrix();
    move |lambda| integer_eigenvalue_multiplicity(&adj, lambda)
}

/// All `(a,b)`-perfect sets of a regular graph; `canonical_only` is ignored.
pub fn enumerate_perfect_sets(g: &Graph, cfg: &SearchConfig) -> Result<SearchOutcome, SearchError> {
    run(g, None, cfg, &exact_multiplicity(g))
}

/// As [`enumerate_perfect_sets`], optionally one representative per
/// right-translation class.
pub fn enumerate_perfect_sets_cayley(cg: &CayleyGraph, cfg: &SearchConfig) -> Result<SearchOutcome, SearchError> {
    run(cg.graph(), Some(cg), cfg, &exact_multiplicity(cg.graph()))
}

fn binomial(n: usize, r: usize) -> u128 {
    let r = r.min(n - r);
    (0..r).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

/// Every subset of the forced size tested against the definition.
pub fn brute_force_oracle(g: &Graph, spec: &PerfectSetSpec) -> Result<Vec<Vec<usize>>, SearchError> {
    check_graph(g, spec)?;
    let n = g.n();
    let denom = spec.k - spec.a + spec.b;
    if (spec.b * n) % denom != 0 {
        return Ok(Vec::new());
    }
    let size = spec.b * n / denom;
    let subsets = binomial(n, size);
    if n > ORACLE_MAX_VERTICES || subsets > ORACLE_MAX_SUBSETS {
        return Err(SearchError::TooLarge { n, size, subsets });
    }
    if size == 0 || size == n {
        return Ok(Vec::new());
    }
    let nbr: Vec<u32> = (0..n).map(|v| (0..n).filter(|&u| g.adjacent(v, u)).fold(0, |m, u| m | 1 << u)).collect();
    let (a, b) = (spec.a as u32, spec.b as u32);
    let mut out = Vec::new();
    let mut mask: u32 = (1u32 << size) - 1;
    let end = 1u64 << n;
    while (mask as u64) < end {
        if (0..n).all(|v| {
            let c = (nbr[v] & mask).count_ones();
            if mask >> v & 1 == 1 { c == a } else { c == b }
        }) {
            out.push((0..n).filter(|&v| mask >> v & 1 == 1).collect());
        }
        let low = mask & mask.wrapping_neg();
        let ripple = mask as u64 + low as u64;
        if ripple >= end {
            break;
        }
        let ripple = ripple as u32;
        mask = (((ripple ^ mask) >> 2) / low) | ripple;
    }
    out.sort();
    Ok(out)
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ScanConfig {
    pub max_results: Option<usize>,
    /// Shared by the whole scan.
    pub time_budget: Option<Duration>,
    pub threads: Option<usize>,
    pub canonical_only: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanRow {
    pub a: usize,
    pub b: usize,
    pub count: usize,
    pub sample: Option<Vec<usize>>,
    pub complete: bool,
    pub searched: bool,
    pub nodes_explored: u64,
    pub reasons: Vec<SearchReason>,
}

fn scan(g: &Graph, cayley: Option<&CayleyGraph>, cfg: &ScanConfig) -> Result<Vec<ScanRow>, SearchError> {
    let k = g.regular_degree().ok_or(SearchError::NotRegular)?;
    let deadline = cfg.time_budget.map(|d| Instant::now() + d);
    let adj = g.adjacency_matrix();
    let cache = std::cell::RefCell::new(std::collections::BTreeMap::new());
    let multiplicity = |lambda: i64| {
        *cache.borrow_mut().entry(lambda).or_insert_with(|| integer_eigenvalue_multiplicity(&adj, lambda))
    };
    let mut rows = Vec::new();
    for a in 0..k {
        for b in 1..=k {
            let spec = PerfectSetSpec::new(a, b, k).expect("range is valid");
            let remaining = deadline.map(|d| d.saturating_duration_since(Instant::now()));
            let search = SearchConfig {
                spec,
                max_results: cfg.max_results,
                canonical_only: cfg.canonical_only,
                time_budget: remaining,
                threads: cfg.threads,
            };
            let o = run(g, cayley, &search, &multiplicity)?;
            let searched = !o.gated_out();
            rows.push(ScanRow {
                a,
                b,
                count: o.sets.len(),
                sample: o.sets.first().cloned(),
                complete: o.complete,
                searched,
                nodes_explored: o.nodes_explored,
                reasons: o.reasons,
            });
        }
    }
    Ok(rows)
}

/// Every `(a,b)` with `0 ≤ a < k` and `1 ≤ b ≤ k`, gated then searched.
pub fn scan_all_specs(g: &Graph, cfg: &ScanConfig) -> Result<Vec<ScanRow>, SearchError> {
    scan(g, None, cfg)
}

pub fn scan_all_specs_cayley(cg: &CayleyGraph, cfg: &ScanConfig) -> Result<Vec<ScanRow>, SearchError> {
    scan(cg.graph(), Some(cg), cfg)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumRow {
    pub value: f64,
    pub adjacency_multiplicity: usize,
    pub character_multiplicity: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClaimedSet {
    pub name: String,
    pub set: Vec<usize>,
    pub is_perfect: bool,
    pub found_by_search: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DihedralReport {
    pub n: usize,
    pub order: usize,
    pub degree: usize,
    /// Below 13 the output is descriptive only.
    pub claims_apply: bool,
    pub spectrum: Vec<SpectrumRow>,
    pub spectrum_residual: f64,
    pub spectrum_matches_table: bool,
    pub surviving_pairs: Vec<(usize, usize)>,
    pub rows: Vec<ScanRow>,
    pub claimed_sets: Vec<ClaimedSet>,
    pub unexpected_sets: Vec<(usize, usize, Vec<usize>)>,
    pub minus_one_branch_empty: Option<bool>,
    pub complete: bool,
    pub budget_exceeded: bool,
    pub classification_confirmed: bool,
    pub nodes_explored: u64,
}

/// `Cay(D_2n, {r, r⁻¹} ∪ reflections)` for odd `n ≥ 3`.
pub fn dihedral_demo_graph(n: usize) -> Result<CayleyGraph, SearchError> {
    if n < 3 || n % 2 == 0 {
        return Err(SearchError::InvalidConfig(format!("n must be odd and at least 3, got {n}")));
    }
    let (d, gens) = dihedral_group(n);
    let mut s = vec![gens.r, d.inv(gens.r)];
    s.extend(n..2 * n);
    cayley_graph(&d, &s).map_err(|e| SearchError::InvalidConfig(e.to_string()))
}

pub fn dihedral_demo(n: usize, cfg: &ScanConfig) -> Result<DihedralReport, SearchError> {
    let cg = dihedral_demo_graph(n)?;
    let k = cg.degree();
    let table = builtin_character_table(cg.group(), TableFamily::DihedralOdd)
        .map_err(|e| SearchError::InvalidConfig(e.to_string()))?;
    let adj_spec = float_spectrum_of_integers(&cg.graph().adjacency_matrix())
        .map_err(|e| SearchError::InvalidConfig(e.to_string()))?;
    let chr_spec = cayley_spectrum_from_characters(cg.group(), cg.connection_set(), &table)
        .map_err(|e| SearchError::InvalidConfig(e.to_string()))?;
    let spectrum = adj_spec
        .entries
        .iter()
        .map(|e| SpectrumRow {
            value: e.value,
            adjacency_multiplicity: e.multiplicity,
            character_multiplicity: chr_spec.multiplicity_of(e.value),
        })
        .collect();
    let spectrum_residual = adj_spec.max_deviation(&chr_spec).unwrap_or(f64::INFINITY);
    let spectrum_matches_table = adj_spec.max_deviation(&expected_dihedral_spectrum(n)).is_some();

    let rows = scan_all_specs_cayley(&cg, cfg)?;
    let rotations: Vec<usize> = (0..n).collect();
    let reflections: Vec<usize> = (n..2 * n).collect();
    let spec = PerfectSetSpec::new(2, n, k).expect("valid for n >= 3");
    let found: Vec<Vec<usize>> = match rows.iter().find(|r| (r.a, r.b) == (2, n)) {
        Some(r) if r.count > 0 => {
            let o = enumerate_perfect_sets_cayley(
                &cg,
                &SearchConfig { spec, max_results: cfg.max_results, canonical_only: false, time_budget: cfg.time_budget, threads: cfg.threads },
            )?;
            o.sets
        }
        _ => Vec::new(),
    };
    let claimed_sets = [("rotations", rotations), ("reflections", reflections)]
        .into_iter()
        .map(|(name, set)| ClaimedSet {
            name: name.into(),
            is_perfect: is_perfect_set(cg.graph(), &set, &spec),
            found_by_search: found.contains(&set),
            set,
        })
        .collect::<Vec<_>>();
    let mut unexpected_sets = Vec::new();
    for r in &rows {
        if (r.a, r.b) == (2, n) {
            for s in found.iter().filter(|s| !claimed_sets.iter().any(|c| &c.set == *s)) {
                unexpected_sets.push((r.a, r.b, s.clone()));
            }
        } else if let Some(s) = &r.sample {
            unexpected_sets.push((r.a, r.b, s.clone()));
        }
    }
    let minus_one_branch_empty = (n % 3 == 0)
        .then(|| rows.iter().filter(|r| r.a as i64 - r.b as i64 == -1).all(|r| r.count == 0));
    let complete = rows.iter().all(|r| r.complete);
    let budget_exceeded =
        rows.iter().any(|r| r.reasons.iter().any(|x| matches!(x, SearchReason::BudgetExceeded { .. })));
    let others_empty = rows.iter().filter(|r| (r.a, r.b) != (2, n)).all(|r| r.count == 0);
    let classification_confirmed = complete
        && others_empty
        && found.len() == 2
        && claimed_sets.iter().all(|c| c.is_perfect && c.found_by_search);
    Ok(DihedralReport {
        n,
        order: 2 * n,
        degree: k,
        claims_apply: n >= 13,
        spectrum,
        spectrum_residual,
        spectrum_matches_table,
        surviving_pairs: rows.iter().filter(|r| r.searched).map(|r| (r.a, r.b)).collect(),
        nodes_explored: rows.iter().map(|r| r.nodes_explored).sum(),
        rows,
        claimed_sets,
        unexpected_sets,
        minus_one_branch_empty,
        complete,
        budget_exceeded,
        classification_confirmed,
    })
}

/// `n+2` and `2-n` once each and `2cos(2πj/n)` four times for `1 ≤ j ≤ (n-1)/2`.
pub fn expected_dihedral_spectrum(n: usize) -> Spectrum {
    let mut values = vec![(n as f64 + 2.0, 1), (2.0 - n as f64, 1)];
    for j in 1..=(n - 1) / 2 {
        values.push((2.0 * (2.0 * std::f64::consts::PI * j as f64 / n as f64).cos(), 4));
    }
    Spectrum::from_weighted(values)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::elementary_abelian_and_cyclic;

    fn spec(a: usize, b: usize, k: usize) -> PerfectSetSpec {
        PerfectSetSpec::new(a, b, k).unwrap()
    }

    #[test]
    fn c6_codes() {
        let g = Graph::cycle(6);
        let o = enumerate_perfect_sets(&g, &SearchConfig::new(spec(0, 1, 2))).unwrap();
        assert_eq!(o.sets, vec![vec![0, 3], vec![1, 4], vec![2, 5]]);
        assert!(o.complete);
        assert_eq!(o.reasons, vec![SearchReason::Exhausted]);
        assert_eq!(brute_force_oracle(&g, &spec(0, 1, 2)).unwrap(), o.sets);
    }

    #[test]
    fn petersen_gate() {
        let o = enumerate_perfect_sets(&Graph::petersen(), &SearchConfig::new(spec(0, 1, 3))).unwrap();
        assert!(o.sets.is_empty() && o.complete);
        assert!(o.reasons.contains(&SearchReason::SpectralGate { eigenvalue: -1, multiplicity: 0 }));
        assert_eq!(o.reasons[1].to_string(), "a - b = -1 is not an eigenvalue (multiplicity(-1) = 0)");
    }

    #[test]
    fn k4_singletons() {
        let g = Graph::complete(4);
        let o = brute_force_oracle(&g, &spec(0, 1, 3)).unwrap();
        assert_eq!(o, vec![vec![0], vec![1], vec![2], vec![3]]);
    }

    #[test]
    fn divisibility_reason() {
        let o = enumerate_perfect_sets(&Graph::cycle(4), &SearchConfig::new(spec(0, 1, 2))).unwrap();
        assert_eq!(o.reasons[0], SearchReason::Divisibility { denominator: 3, b_times_v: 4 });
        let prism = crate::graph::graph_from_edges(
            6,
            &[(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3), (0, 3), (1, 4), (2, 5)],
        )
        .unwrap();
        let o = enumerate_perfect_sets(&prism, &SearchConfig::new(spec(0, 2, 3))).unwrap();
        assert_eq!(o.reasons, vec![SearchReason::Divisibility { denominator: 5, b_times_v: 12 }]);
        assert_eq!(o.set_size, None);
    }

    #[test]
    fn limits_and_canonical() {
        let g6 = elementary_abelian_and_cyclic(6, 1);
        let cg = cayley_graph(&g6, &[1, 5]).unwrap();
        let mut cfg = SearchConfig::new(spec(0, 1, 2));
        cfg.canonical_only = true;
        let o = enumerate_perfect_sets_cayley(&cg, &cfg).unwrap();
        assert_eq!(o.sets, vec![vec![0, 3]]);
        cfg.canonical_only = false;
        cfg.max_results = Some(2);
        let o = enumerate_perfect_sets_cayley(&cg, &cfg).unwrap();
        assert_eq!(o.sets.len(), 2);
        assert!(!o.complete);
        cfg.max_results = Some(0);
        assert!(enumerate_perfect_sets(cg.graph(), &cfg).is_err());
    }

    #[test]
    fn oracle_refuses_large() {
        let g = Graph::cycle(30);
        assert!(matches!(brute_force_oracle(&g, &spec(0, 1, 2)), Err(SearchError::TooLarge { .. })));
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(26, 13), 10_400_600);
        assert_eq!(binomial(5, 0), 1);
    }
}
