use eqpart::graph::{cayley_graph, parse_edge_file, CayleyGraph, Graph};
use eqpart::group::{
    builtin_character_table, conjugacy_classes, dihedral_group, elementary_abelian_and_cyclic, parse_character_table,
    parse_group_file, subgroup_generated, CharacterTable, FiniteGroup, GroupFamily, Subgroup, TableFamily,
};
use eqpart::linalg::{ratio, Rational};
use eqpart::partition::{parse_partition, Partition};

use crate::args::SourceArgs;
use crate::error::CliError;
use crate::manifest::InputLog;

pub enum Source {
    Plain(Graph),
    Cayley { cg: CayleyGraph, table: Option<CharacterTable>, table_note: Option<String> },
}

impl Source {
    pub fn graph(&self) -> &Graph {
        match self {
            Source::Plain(g) => g,
            Source::Cayley { cg, .. } => cg.graph(),
        }
    }

    pub fn cayley(&self) -> Option<&CayleyGraph> {
        match self {
            Source::Plain(_) => None,
            Source::Cayley { cg, .. } => Some(cg),
        }
    }

    pub fn table(&self) -> Option<&CharacterTable> {
        match self {
            Source::Plain(_) => None,
            Source::Cayley { table, .. } => table.as_ref(),
        }
    }

    pub fn table_note(&self) -> Option<&str> {
        match self {
            Source::Plain(_) => None,
            Source::Cayley { table_note, .. } => table_note.as_deref(),
        }
    }
}

fn parse_usize(s: &str, what: &str) -> Result<usize, CliError> {
    s.trim().parse().map_err(|_| CliError::input(format!("bad {what}: {s:?}")))
}

pub fn load_source(args: &SourceArgs, log: &mut InputLog) -> Result<Source, CliError> {
    match (&args.edges, &args.cayley) {
        (Some(path), None) => {
            if args.conn.is_some() || args.chars.is_some() {
                return Err(CliError::input("--conn and --chars need a --cayley source"));
            }
            Ok(Source::Plain(parse_edge_file(&log.read(path)?)?))
        }
        (None, Some(family)) => {
            let group = parse_group_spec(family, log)?;
            let conn = args.conn.as_deref().ok_or_else(|| CliError::input("--cayley needs --conn"))?;
            let s = parse_connection_set(&group, conn)?;
            let cg = cayley_graph(&group, &s)?;
            let (table, table_note) = match &args.chars {
                Some(path) => {
                    let t = parse_character_table(&log.read(path)?)?;
                    t.check_against(&group)?;
                    (Some(t), None)
                }
                None => match builtin_family(&group) {
                    Some(f) => match builtin_character_table(&group, f) {
                        Ok(t) => (Some(t), None),
                        Err(e) => (None, Some(e.to_string())),
                    },
                    None => (None, Some("no built-in character table for this group; pass --chars".into())),
                },
            };
            Ok(Source::Cayley { cg, table, table_note })
        }
        (None, None) => Err(CliError::input("give a graph with --edges FILE or --cayley FAMILY:PARAMS")),
        (Some(_), Some(_)) => Err(CliError::input("--edges and --cayley are mutually exclusive")),
    }
}

fn builtin_family(g: &FiniteGroup) -> Option<TableFamily> {
    match g.family()? {
        GroupFamily::Dihedral { n } if n % 2 == 1 => Some(TableFamily::DihedralOdd),
        GroupFamily::Abelian { n: 1, .. } => Some(TableFamily::Cyclic),
        GroupFamily::Abelian { .. } => Some(TableFamily::ElementaryAbelian),
        _ => None,
    }
}

/// `dihedral:N`, `cyclic:N`, `elementary:Q,N` or `table:PATH`.
pub fn parse_group_spec(spec: &str, log: &mut InputLog) -> Result<FiniteGroup, CliError> {
    let (family, params) =
        spec.split_once(':').ok_or_else(|| CliError::input(format!("expected FAMILY:PARAMS, got {spec:?}")))?;
    match family {
        "dihedral" => {
            let n = parse_usize(params, "dihedral parameter")?;
            if n < 3 {
                return Err(CliError::input("dihedral:N needs N >= 3"));
            }
            Ok(dihedral_group(n).0)
        }
        "cyclic" => {
            let n = parse_usize(params, "cyclic order")?;
            if n < 2 {
                return Err(CliError::input("cyclic:N needs N >= 2"));
            }
            Ok(elementary_abelian_and_cyclic(n, 1))
        }
        "elementary" => {
            let (q, n) = params
                .split_once(',')
                .ok_or_else(|| CliError::input(format!("expected elementary:Q,N, got {spec:?}")))?;
            let (q, n) = (parse_usize(q, "prime")?, parse_usize(n, "rank")?);
            if q < 2 || n < 1 || q.checked_pow(n as u32).is_none_or(|o| o > 1 << 16) {
                return Err(CliError::input(format!("unsupported elementary abelian group Z_{q}^{n}")));
            }
            Ok(elementary_abelian_and_cyclic(q, n))
        }
        "table" => Ok(parse_group_file(&log.read(params)?)?),
        other => Err(CliError::input(format!("unknown group family {other:?}"))),
    }
}

/// Comma-separated tokens: `rot1`, `rot:I`, `reflections`, `class:I`,
/// `basis`, `all` or element indices.
pub fn parse_connection_set(g: &FiniteGroup, spec: &str) -> Result<Vec<usize>, CliError> {
    let order = g.order();
    let mut out = Vec::new();
    let rotation_order = match g.family() {
        Some(GroupFamily::Dihedral { n }) => Some(n),
        Some(GroupFamily::Abelian { q, n: 1 }) => Some(q),
        _ => None,
    };
    for tok in spec.split(',').map(str::trim).filter(|t| !t.is_empty()) {
        let rot = |i: usize, out: &mut Vec<usize>| -> Result<(), CliError> {
            let m = rotation_order.ok_or_else(|| CliError::input(format!("{tok:?} needs a dihedral or cyclic group")))?;
            if i % m == 0 {
                return Err(CliError::input(format!("{tok:?} names the identity")));
            }
            out.extend([i % m, (m - i % m) % m]);
            Ok(())
        };
        if tok == "rot1" {
            rot(1, &mut out)?;
        } else if let Some(i) = tok.strip_prefix("rot:") {
            rot(parse_usize(i, "rotation exponent")?, &mut out)?;
        } else if tok == "reflections" {
            match g.family() {
                Some(GroupFamily::Dihedral { n }) => out.extend(n..2 * n),
                _ => return Err(CliError::input("reflections needs a dihedral group")),
            }
        } else if let Some(i) = tok.strip_prefix("class:") {
            let classes = conjugacy_classes(g);
            let i = parse_usize(i, "class index")?;
            let class = classes
                .classes()
                .get(i)
                .ok_or_else(|| CliError::input(format!("class {i} out of range ({} classes)", classes.len())))?;
            out.extend(class.iter().copied());
        } else if tok == "basis" {
            match g.family() {
                Some(GroupFamily::Abelian { q, n }) => {
                    for j in 0..n {
                        let e = q.pow(j as u32);
                        out.extend([e, (q - 1) * e]);
                    }
                }
                _ => return Err(CliError::input("basis needs an elementary abelian group")),
            }
        } else if tok == "all" {
            out.extend((0..order).filter(|&x| x != g.identity()));
        } else {
            let x = parse_usize(tok, "connection-set element")?;
            if x >= order {
                return Err(CliError::input(format!("element {x} out of range for order {order}")));
            }
            out.push(x);
        }
    }
    out.sort_unstable();
    out.dedup();
    Ok(out)
}

/// Indices separated by commas or whitespace, or `@FILE`.
pub fn parse_index_list(spec: &str, n: usize, log: &mut InputLog) -> Result<Vec<usize>, CliError> {
    let text = match spec.strip_prefix('@') {
        Some(path) => log.read(path)?,
        None => spec.to_string(),
    };
    let mut out = Vec::new();
    for tok in text.split(|c: char| c == ',' || c.is_whitespace()).filter(|t| !t.is_empty()) {
        let v = parse_usize(tok, "index")?;
        if v >= n {
            return Err(CliError::input(format!("index {v} out of range for {n} elements")));
        }
        out.push(v);
    }
    out.sort_unstable();
    out.dedup();
    Ok(out)
}

pub fn load_partition(
    n: usize,
    blocks: Option<&str>,
    file: Option<&str>,
    log: &mut InputLog,
) -> Result<Option<Partition>, CliError> {
    match (blocks, file) {
        (Some(b), None) => Ok(Some(parse_partition(n, b)?)),
        (None, Some(f)) => Ok(Some(parse_partition(n, &log.read(f)?)?)),
        (None, None) => Ok(None),
        (Some(_), Some(_)) => Err(CliError::input("give a partition inline or as a file, not both")),
    }
}

pub fn parse_rational(s: &str) -> Result<Rational, CliError> {
    let bad = || CliError::input(format!("bad rational {s:?}; expected p or p/q"));
    let (p, q) = match s.split_once('/') {
        Some((p, q)) => (p.trim().parse::<i64>().map_err(|_| bad())?, q.trim().parse::<i64>().map_err(|_| bad())?),
        None => (s.trim().parse::<i64>().map_err(|_| bad())?, 1),
    };
    if q == 0 {
        return Err(bad());
    }
    Ok(ratio(p, q))
}

/// One permutation per line as whitespace-separated images.
pub fn parse_permutations(text: &str, n: usize) -> Result<Vec<Vec<usize>>, CliError> {
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .enumerate()
        .map(|(i, l)| {
            let p = l
                .split_whitespace()
                .map(|t| parse_usize(t, "permutation image"))
                .collect::<Result<Vec<_>, _>>()?;
            if p.len() != n {
                return Err(CliError::input(format!("permutation {} has {} entries, expected {n}", i + 1, p.len())));
            }
            Ok(p)
        })
        .collect()
}

pub fn load_subgroup(g: &FiniteGroup, spec: &str, log: &mut InputLog) -> Result<Subgroup, CliError> {
    let gens = parse_index_list(spec, g.order(), log)?;
    Ok(subgroup_generated(g, &gens)?)
}

pub fn env_usize(name: &str) -> Result<Option<usize>, CliError> {
    match std::env::var(name) {
        Ok(v) if !v.trim().is_empty() => {
            let n = parse_usize(&v, name)?;
            if n == 0 {
                return Err(CliError::input(format!("{name} must be at least 1")));
            }
            Ok(Some(n))
        }
        _ => Ok(None),
    }
}
