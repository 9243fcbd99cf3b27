//! Finite groups given by a dense multiplication table.
//!
//! Elements are the indices `0..order`, with the identity always at index 0.
//! The [`dihedral_group`] constructor encodes `r^i` as `i` and `r^i s` as
//! `n + i`; [`elementary_abelian_and_cyclic`] encodes `(x_0, .., x_{n-1})` in
//! `Z_q^n` as the mixed-radix integer `sum x_t q^t`.

mod chartab;

pub use chartab::{builtin_character_table, import_character_table, parse_character_table, CharacterTable, TableFamily};

use std::fmt;
use std::path::Path;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use thiserror::Error;

use crate::partition::Partition;

/// Largest order for which associativity is checked over all triples.
pub const EXHAUSTIVE_ASSOCIATIVITY_LIMIT: usize = 256;
const SAMPLED_TRIPLES: usize = 250_000;

#[derive(Debug, Error)]
pub enum GroupError {
    #[error("table row {row} has {len} entries, expected {expected}")]
    NotSquare { row: usize, len: usize, expected: usize },
    #[error("table entry ({row}, {col}) = {value} is out of range")]
    EntryOutOfRange { row: usize, col: usize, value: usize },
    #[error("not a group: {0}")]
    NotAGroup(Violation),
    #[error("element {0} is out of range")]
    ElementOutOfRange(usize),
    #[error("unsupported character table family: {0}")]
    UnsupportedFamily(String),
    #[error("character table fails orthogonality (worst residual {residual:.3e})")]
    OrthogonalityViolation { residual: f64 },
    #[error("invalid character table: {0}")]
    InvalidTable(String),
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    Empty,
    RowNotPermutation { row: usize },
    ColumnNotPermutation { col: usize },
    NoIdentity,
    NonAssociative { x: usize, y: usize, z: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Empty => write!(f, "empty table"),
            Violation::RowNotPermutation { row } => write!(f, "row {row} is not a permutation"),
            Violation::ColumnNotPermutation { col } => {
                write!(f, "column {col} is not a permutation")
            }
            Violation::NoIdentity => write!(f, "no two-sided identity"),
            Violation::NonAssociative { x, y, z } => {
                write!(f, "({x}*{y})*{z} != {x}*({y}*{z})")
            }
        }
    }
}

/// Which built-in constructor produced a group.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GroupFamily {
    Dihedral { n: usize },
    /// `Z_q^n`; the cyclic group is `n = 1`.
    Abelian { q: usize, n: usize },
}

#[derive(Clone, PartialEq, Eq)]
pub struct FiniteGroup {
    order: usize,
    mul: Vec<usize>,
    inv: Vec<usize>,
    family: Option<GroupFamily>,
}

impl fmt::Debug for FiniteGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FiniteGroup")
            .field("order", &self.order)
            .field("family", &self.family)
            .finish()
    }
}

impl FiniteGroup {
    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> usize {
        0
    }

    pub fn family(&self) -> Option<GroupFamily> {
        self.family
    }

    #[inline]
    pub fn mul(&self, x: usize, y: usize) -> usize {
        self.mul[x * self.order + y]
    }

    #[inline]
    pub fn inv(&self, x: usize) -> usize {
        self.inv[x]
    }

    /// `g^{-1} x g`.
    pub fn conjugate(&self, x: usize, g: usize) -> usize {
        self.mul(self.mul(self.inv(g), x), g)
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.order).all(|x| (0..x).all(|y| self.mul(x, y) == self.mul(y, x)))
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.order
    }

    /// Rows of the multiplication table, `row[x][y] = x*y`.
    pub fn table(&self) -> Vec<Vec<usize>> {
        self.mul.chunks(self.order).map(|r| r.to_vec()).collect()
    }

    /// Serializes in the group-file format (`order n` then the table rows).
    pub fn to_group_file(&self) -> String {
        let mut out = format!("order {}\n", self.order);
        for row in self.mul.chunks(self.order) {
            let line: Vec<String> = row.iter().map(|v| v.to_string()).collect();
            out.push_str(&line.join(" "));
            out.push('\n');
        }
        out
    }

    fn with_family(mut self, family: GroupFamily) -> Self {
        self.family = Some(family);
        self
    }
}

/// Validates a Cayley table and relabels its identity to index 0.
pub fn group_from_table(table: &[Vec<usize>]) -> Result<FiniteGroup, GroupError> {
    let n = table.len();
    if n == 0 {
        return Err(GroupError::NotAGroup(Violation::Empty));
    }
    for (row, r) in table.iter().enumerate() {
        if r.len() != n {
            return Err(GroupError::NotSquare { row, len: r.len(), expected: n });
        }
        if let Some((col, &value)) = r.iter().enumerate().find(|(_, &v)| v >= n) {
            return Err(GroupError::EntryOutOfRange { row, col, value });
        }
    }
    let at = |x: usize, y: usize| table[x][y];

    let mut seen = vec![false; n];
    for row in 0..n {
        seen.iter_mut().for_each(|s| *s = false);
        for col in 0..n {
            if std::mem::replace(&mut seen[at(row, col)], true) {
                return Err(GroupError::NotAGroup(Violation::RowNotPermutation { row }));
            }
        }
    }
    for col in 0..n {
        seen.iter_mut().for_each(|s| *s = false);
        for row in 0..n {
            if std::mem::replace(&mut seen[at(row, col)], true) {
                return Err(GroupError::NotAGroup(Violation::ColumnNotPermutation { col }));
            }
        }
    }

    let e = (0..n)
        .find(|&e| (0..n).all(|x| at(e, x) == x && at(x, e) == x))
        .ok_or(GroupError::NotAGroup(Violation::NoIdentity))?;

    let assoc = |x: usize, y: usize, z: usize| at(at(x, y), z) == at(x, at(y, z));
    if n <= EXHAUSTIVE_ASSOCIATIVITY_LIMIT {
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    if !assoc(x, y, z) {
                        return Err(GroupError::NotAGroup(Violation::NonAssociative { x, y, z }));
                    }
                }
            }
        }
    } else {
        let mut rng = StdRng::seed_from_u64(0x5eed_0f_6709);
        for _ in 0..SAMPLED_TRIPLES {
            let (x, y, z) = (rng.random_range(0..n), rng.random_range(0..n), rng.random_range(0..n));
            if !assoc(x, y, z) {
                return Err(GroupError::NotAGroup(Violation::NonAssociative { x, y, z }));
            }
        }
    }

    // relabel by the transposition (0 e)
    let swap = |v: usize| {
        if v == e {
            0
        } else if v == 0 {
            e
        } else {
            v
        }
    };
    let mut mul = vec![0; n * n];
    for x in 0..n {
        for y in 0..n {
            mul[swap(x) * n + swap(y)] = swap(at(x, y));
        }
    }
    let mut inv = vec![0; n];
    for x in 0..n {
        let y = (0..n).find(|&y| mul[x * n + y] == 0).expect("latin square row contains identity");
        inv[x] = y;
    }
    Ok(FiniteGroup { order: n, mul, inv, family: None })
}

/// Parses the group-file format: `order n` followed by `n` rows of `n` indices.
pub fn parse_group_file(text: &str) -> Result<FiniteGroup, GroupError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    let (lno, header) = lines.next().ok_or(GroupError::Parse { line: 1, msg: "empty file".into() })?;
    let order: usize = header
        .strip_prefix("order")
        .and_then(|r| r.trim().parse().ok())
        .ok_or_else(|| GroupError::Parse { line: lno, msg: format!("expected `order n`, got {header:?}") })?;
    let mut table = Vec::with_capacity(order);
    for (lno, line) in lines {
        let row = line
            .split_whitespace()
            .map(|t| t.parse::<usize>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| GroupError::Parse { line: lno, msg: e.to_string() })?;
        table.push(row);
    }
    if table.len() != order {
        return Err(GroupError::Parse {
            line: 1,
            msg: format!("declared order {order} but found {} rows", table.len()),
        });
    }
    group_from_table(&table)
}

pub fn read_group_file(path: impl AsRef<Path>) -> Result<FiniteGroup, GroupError> {
    parse_group_file(&std::fs::read_to_string(path)?)
}

/// Generators of the dihedral group as element indices.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DihedralGenerators {
    pub r: usize,
    pub s: usize,
}

/// `D_{2n} = <r, s | r^n = s^2 = 1, s^{-1} r s = r^{-1}>`.
///
/// Index `i < n` is `r^i`; index `n + i` is `r^i s`.
pub fn dihedral_group(n: usize) -> (FiniteGroup, DihedralGenerators) {
    assert!(n >= 3, "dihedral_group requires n >= 3");
    let order = 2 * n;
    let table: Vec<Vec<usize>> = (0..order)
        .map(|x| {
            (0..order)
                .map(|y| {
                    let (a, xs) = (x % n, x >= n);
                    let (b, ys) = (y % n, y >= n);
                    // r^a s^xs * r^b s^ys = r^(a + (-1)^xs b) s^(xs + ys)
                    let exp = if xs { (a + n - b) % n } else { (a + b) % n };
                    if xs ^ ys {
                        n + exp
                    } else {
                        exp
                    }
                })
                .collect()
        })
        .collect();
    let g = group_from_table(&table).expect("dihedral table is a group");
    (g.with_family(GroupFamily::Dihedral { n }), DihedralGenerators { r: 1, s: n })
}

/// `Z_q^n` with mixed-radix encoding; `n = 1` gives the cyclic group `Z_q`.
pub fn elementary_abelian_and_cyclic(q: usize, n: usize) -> FiniteGroup {
    assert!(q >= 2 && n >= 1, "Z_q^n requires q >= 2, n >= 1");
    let order = q.checked_pow(n as u32).expect("group order overflows");
    let add = |mut x: usize, mut y: usize| {
        let mut out = 0;
        let mut place = 1;
        for _ in 0..n {
            out += ((x % q + y % q) % q) * place;
            x /= q;
            y /= q;
            place *= q;
        }
        out
    };
    let table: Vec<Vec<usize>> = (0..order).map(|x| (0..order).map(|y| add(x, y)).collect()).collect();
    group_from_table(&table)
        .expect("Z_q^n table is a group")
        .with_family(GroupFamily::Abelian { q, n })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConjugacyClasses {
    classes: Vec<Vec<usize>>,
    class_of: Vec<usize>,
}

impl ConjugacyClasses {
    pub fn classes(&self) -> &[Vec<usize>] {
        &self.classes
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn class_of(&self, x: usize) -> usize {
        self.class_of[x]
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.classes.iter().map(Vec::len).collect()
    }

    /// True iff `set` is a union of classes.
    pub fn is_union_of_classes(&self, set: &[usize]) -> bool {
        let mut hits = vec![0usize; self.classes.len()];
        let mut uniq = set.to_vec();
        uniq.sort_unstable();
        uniq.dedup();
        for &x in &uniq {
            hits[self.class_of[x]] += 1;
        }
        hits.iter().zip(&self.classes).all(|(&h, c)| h == 0 || h == c.len())
    }

    /// Indices of the classes contained in `set`, assuming it is a union of classes.
    pub fn classes_in(&self, set: &[usize]) -> Vec<usize> {
        let mut ids: Vec<usize> = set.iter().map(|&x| self.class_of[x]).collect();
        ids.sort_unstable();
        ids.dedup();
        ids
    }
}

/// Conjugacy classes sorted by size, ties broken by least element.
pub fn conjugacy_classes(g: &FiniteGroup) -> ConjugacyClasses {
    let n = g.order();
    let mut assigned = vec![false; n];
    let mut classes = Vec::new();
    for x in 0..n {
        if assigned[x] {
            continue;
        }
        let mut class: Vec<usize> = (0..n).map(|h| g.conjugate(x, h)).collect();
        class.sort_unstable();
        class.dedup();
        for &y in &class {
            assigned[y] = true;
        }
        classes.push(class);
    }
    classes.sort_by_key(|c| (c.len(), c[0]));
    let mut class_of = vec![0; n];
    for (i, c) in classes.iter().enumerate() {
        for &x in c {
            class_of[x] = i;
        }
    }
    ConjugacyClasses { classes, class_of }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subgroup {
    elements: Vec<usize>,
}

impl Subgroup {
    pub fn elements(&self) -> &[usize] {
        &self.elements
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn contains(&self, x: usize) -> bool {
        self.elements.binary_search(&x).is_ok()
    }

    pub fn whole(g: &FiniteGroup) -> Subgroup {
        Subgroup { elements: g.elements().collect() }
    }
}

/// The subgroup generated by `gens` (the trivial subgroup when `gens` is empty).
pub fn subgroup_generated(g: &FiniteGroup, gens: &[usize]) -> Result<Subgroup, GroupError> {
    if let Some(&bad) = gens.iter().find(|&&x| x >= g.order()) {
        return Err(GroupError::ElementOutOfRange(bad));
    }
    let mut member = vec![false; g.order()];
    member[0] = true;
    let mut frontier = vec![0];
    while let Some(x) = frontier.pop() {
        for &s in gens {
            let y = g.mul(x, s);
            if !member[y] {
                member[y] = true;
                frontier.push(y);
            }
        }
    }
    let elements: Vec<usize> = (0..g.order()).filter(|&x| member[x]).collect();
    assert_eq!(g.order() % elements.len(), 0, "Lagrange");
    debug_assert!(elements.iter().all(|&x| member[g.inv(x)]));
    Ok(Subgroup { elements })
}

/// Left cosets `xH`, ordered by least element (so `H` itself comes first).
pub fn left_cosets(g: &FiniteGroup, h: &Subgroup) -> Partition {
    let mut seen = vec![false; g.order()];
    let mut blocks = Vec::new();
    for x in 0..g.order() {
        if seen[x] {
            continue;
        }
        let mut coset: Vec<usize> = h.elements().iter().map(|&y| g.mul(x, y)).collect();
        coset.sort_unstable();
        for &y in &coset {
            seen[y] = true;
        }
        blocks.push(coset);
    }
    Partition::new(g.order(), blocks).expect("cosets partition the group")
}
