use std::f64::consts::PI;
use std::fmt::Write as _;
use std::path::Path;

use num_complex::Complex64;

use super::{conjugacy_classes, FiniteGroup, GroupError, GroupFamily};

/// Tolerance for the orthogonality relations of any table.
pub const ORTHOGONALITY_TOL: f64 = 1e-8;

/// Irreducible characters evaluated on conjugacy classes.
///
/// Column `i` refers to class `i` in the canonical order produced by
/// [`conjugacy_classes`]; `class_sizes` records that order's sizes so a table
/// can be checked against the group it is used with.
#[derive(Debug, Clone, PartialEq)]
pub struct CharacterTable {
    degrees: Vec<u32>,
    values: Vec<Vec<Complex64>>,
    labels: Vec<String>,
    class_sizes: Vec<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TableFamily {
    DihedralOdd,
    Cyclic,
    ElementaryAbelian,
}

impl std::str::FromStr for TableFamily {
    type Err = GroupError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "dihedral-odd" => Ok(TableFamily::DihedralOdd),
            "cyclic" => Ok(TableFamily::Cyclic),
            "elementary-abelian" => Ok(TableFamily::ElementaryAbelian),
            other => Err(GroupError::UnsupportedFamily(other.to_string())),
        }
    }
}

impl CharacterTable {
    /// Builds and validates a table.
    pub fn new(
        degrees: Vec<u32>,
        values: Vec<Vec<Complex64>>,
        labels: Vec<String>,
        class_sizes: Vec<usize>,
    ) -> Result<Self, GroupError> {
        let t = CharacterTable { degrees, values, labels, class_sizes };
        t.validate()?;
        Ok(t)
    }

    pub fn degrees(&self) -> &[u32] {
        &self.degrees
    }

    pub fn values(&self) -> &[Vec<Complex64>] {
        &self.values
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn class_sizes(&self) -> &[usize] {
        &self.class_sizes
    }

    pub fn num_characters(&self) -> usize {
        self.degrees.len()
    }

    pub fn group_order(&self) -> usize {
        self.class_sizes.iter().sum()
    }

    pub fn value(&self, chi: usize, class: usize) -> Complex64 {
        self.values[chi][class]
    }

    /// Largest deviation from the row and column orthogonality relations,
    /// both normalized so the diagonal target is 1.
    pub fn orthogonality_residual(&self) -> f64 {
        let order = self.group_order() as f64;
        let h = self.values.len();
        let mut worst = 0.0f64;
        for a in 0..h {
            for b in 0..h {
                let s: Complex64 = (0..self.class_sizes.len())
                    .map(|i| self.values[a][i] * self.values[b][i].conj() * self.class_sizes[i] as f64)
                    .sum();
                let target = if a == b { 1.0 } else { 0.0 };
                worst = worst.max((s / order - target).norm());
            }
        }
        let m = self.class_sizes.len();
        for i in 0..m {
            for j in 0..m {
                let s: Complex64 = (0..h).map(|c| self.values[c][i] * self.values[c][j].conj()).sum();
                let target = if i == j { order / self.class_sizes[i] as f64 } else { 0.0 };
                worst = worst.max((s - target).norm() * self.class_sizes[i] as f64 / order);
            }
        }
        worst
    }

    fn validate(&self) -> Result<(), GroupError> {
        let h = self.degrees.len();
        let m = self.class_sizes.len();
        if h == 0 || h != m {
            return Err(GroupError::InvalidTable(format!("{h} characters but {m} classes")));
        }
        if self.values.len() != h || self.values.iter().any(|r| r.len() != m) {
            return Err(GroupError::InvalidTable("value matrix shape mismatch".into()));
        }
        if self.labels.len() != h {
            return Err(GroupError::InvalidTable("one label per character required".into()));
        }
        if self.class_sizes[0] != 1 {
            return Err(GroupError::InvalidTable("first class must be the identity class".into()));
        }
        for (c, (&d, row)) in self.degrees.iter().zip(&self.values).enumerate() {
            if d == 0 || (row[0] - Complex64::new(d as f64, 0.0)).norm() > ORTHOGONALITY_TOL {
                return Err(GroupError::InvalidTable(format!(
                    "character {c}: value at identity {} does not equal degree {d}",
                    row[0]
                )));
            }
        }
        let sum_sq: u64 = self.degrees.iter().map(|&d| (d as u64) * (d as u64)).sum();
        let residual = self.orthogonality_residual();
        if residual > ORTHOGONALITY_TOL {
            return Err(GroupError::OrthogonalityViolation { residual });
        }
        if sum_sq != self.group_order() as u64 {
            return Err(GroupError::InvalidTable(format!(
                "sum of squared degrees {sum_sq} != group order {}",
                self.group_order()
            )));
        }
        Ok(())
    }

    /// Confirms the table's class sizes match the canonical classes of `g`.
    pub fn check_against(&self, g: &FiniteGroup) -> Result<(), GroupError> {
        let sizes = conjugacy_classes(g).sizes();
        if sizes != self.class_sizes {
            return Err(GroupError::InvalidTable(format!(
                "table class sizes {:?} do not match group class sizes {sizes:?}",
                self.class_sizes
            )));
        }
        Ok(())
    }

    /// Renders in the character CSV format read by [`import_character_table`].
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        let sizes: Vec<String> = self.class_sizes.iter().map(|s| s.to_string()).collect();
        let _ = writeln!(out, "# sizes,{}", sizes.join(","));
        let _ = writeln!(out, "# labels,{}", self.labels.join(","));
        let header: Vec<String> = (1..=self.class_sizes.len()).map(|i| format!("K_{i}")).collect();
        let _ = writeln!(out, "degree,{}", header.join(","));
        for (d, row) in self.degrees.iter().zip(&self.values) {
            let cells: Vec<String> = row.iter().map(|&z| format_complex(z)).collect();
            let _ = writeln!(out, "{d},{}", cells.join(","));
        }
        out
    }
}

fn format_complex(z: Complex64) -> String {
    if z.im == 0.0 {
        format!("{}", z.re)
    } else if z.im.is_sign_negative() {
        format!("{}-{}i", z.re, -z.im)
    } else {
        format!("{}+{}i", z.re, z.im)
    }
}

/// Parses `a`, `bi`, `a+bi` or `a-bi` with ordinary decimal literals.
pub(crate) fn parse_complex(s: &str) -> Option<Complex64> {
    let s = s.trim();
    if s.is_empty() {
        return None;
    }
    let Some(body) = s.strip_suffix('i') else {
        return s.parse::<f64>().ok().map(|re| Complex64::new(re, 0.0));
    };
    // split at the last sign that is not a leading sign or an exponent sign
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&p| (bytes[p] == b'+' || bytes[p] == b'-') && !matches!(bytes[p - 1], b'e' | b'E'));
    let parse_im = |t: &str| -> Option<f64> {
        match t {
            "" | "+" => Some(1.0),
            "-" => Some(-1.0),
            t => t.parse().ok(),
        }
    };
    match split {
        Some(p) => {
            let re = body[..p].parse::<f64>().ok()?;
            let im = parse_im(&body[p..])?;
            Some(Complex64::new(re, im))
        }
        None => Some(Complex64::new(0.0, parse_im(body)?)),
    }
}

/// Parses the character CSV format.
///
/// ```text
/// # sizes,1,1
/// degree,K_1,K_2
/// 1,1,1
/// 1,1,-1
/// ```
pub fn parse_character_table(text: &str) -> Result<CharacterTable, GroupError> {
    let mut sizes: Option<Vec<usize>> = None;
    let mut labels: Option<Vec<String>> = None;
    let mut header_seen = false;
    let mut degrees = Vec::new();
    let mut values = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        let perr = |msg: String| GroupError::Parse { line: line_no, msg };
        if let Some(comment) = line.strip_prefix('#') {
            let comment = comment.trim();
            if let Some(rest) = comment.strip_prefix("sizes,") {
                let parsed = rest
                    .split(',')
                    .map(|t| t.trim().parse::<usize>())
                    .collect::<Result<Vec<_>, _>>()
                    .map_err(|e| perr(format!("bad class size: {e}")))?;
                sizes = Some(parsed);
            } else if let Some(rest) = comment.strip_prefix("labels,") {
                labels = Some(rest.split(',').map(|t| t.trim().to_string()).collect());
            }
            continue;
        }
        if !header_seen {
            let cols: Vec<&str> = line.split(',').map(str::trim).collect();
            if cols.first() != Some(&"degree") {
                return Err(perr(format!("expected header `degree,K_1,...`, got {line:?}")));
            }
            header_seen = true;
            continue;
        }
        let mut cells = line.split(',').map(str::trim);
        let degree = cells
            .next()
            .and_then(|d| d.parse::<u32>().ok())
            .ok_or_else(|| perr("degree must be a positive integer".into()))?;
        let row = cells
            .map(|c| parse_complex(c).ok_or_else(|| perr(format!("bad character value {c:?}"))))
            .collect::<Result<Vec<_>, _>>()?;
        degrees.push(degree);
        values.push(row);
    }
    let sizes = sizes.ok_or(GroupError::Parse { line: 1, msg: "missing `# sizes,...` line".into() })?;
    let labels = labels.unwrap_or_else(|| (1..=degrees.len()).map(|i| format!("chi_{i}")).collect());
    CharacterTable::new(degrees, values, labels, sizes)
}

pub fn import_character_table(path: impl AsRef<Path>) -> Result<CharacterTable, GroupError> {
    parse_character_table(&std::fs::read_to_string(path)?)
}

/// Character tables for the built-in group families.
///
/// Dihedral (odd `n`): trivial `chi_1`, sign `chi_2` (−1 on reflections) and
/// `psi_j(r^i) = 2cos(2 pi j i / n)`, `psi_j(s) = 0` for `1 <= j <= (n-1)/2`.
/// `Z_q^n`: `chi_c(x) = exp(2 pi i (c . x) / q)`.
pub fn builtin_character_table(g: &FiniteGroup, family: TableFamily) -> Result<CharacterTable, GroupError> {
    let classes = conjugacy_classes(g);
    let sizes = classes.sizes();
    let reps: Vec<usize> = classes.classes().iter().map(|c| c[0]).collect();
    match (family, g.family()) {
        (TableFamily::DihedralOdd, Some(GroupFamily::Dihedral { n })) if n % 2 == 1 => {
            let mut degrees = vec![1, 1];
            let mut labels = vec!["chi_1".to_string(), "chi_2".to_string()];
            let is_reflection = |x: usize| x >= n;
            let mut values = vec![
                vec![Complex64::new(1.0, 0.0); reps.len()],
                reps.iter()
                    .map(|&x| Complex64::new(if is_reflection(x) { -1.0 } else { 1.0 }, 0.0))
                    .collect(),
            ];
            for j in 1..=(n - 1) / 2 {
                degrees.push(2);
                labels.push(format!("psi_{j}"));
                values.push(
                    reps.iter()
                        .map(|&x| {
                            if is_reflection(x) {
                                Complex64::new(0.0, 0.0)
                            } else {
                                let angle = 2.0 * PI * (j * x) as f64 / n as f64;
                                Complex64::new(2.0 * angle.cos(), 0.0)
                            }
                        })
                        .collect(),
                );
            }
            CharacterTable::new(degrees, values, labels, sizes)
        }
        (TableFamily::Cyclic, Some(GroupFamily::Abelian { q, n: 1 }))
        | (TableFamily::ElementaryAbelian, Some(GroupFamily::Abelian { q, .. })) => {
            let Some(GroupFamily::Abelian { n, .. }) = g.family() else { unreachable!() };
            let digits = |mut x: usize| -> Vec<usize> {
                (0..n)
                    .map(|_| {
                        let d = x % q;
                        x /= q;
                        d
                    })
                    .collect()
            };
            let order = g.order();
            let mut values = Vec::with_capacity(order);
            for c in 0..order {
                let cd = digits(c);
                values.push(
                    reps.iter()
                        .map(|&x| {
                            let dot: usize = cd.iter().zip(digits(x)).map(|(a, b)| a * b).sum::<usize>() % q;
                            Complex64::from_polar(1.0, 2.0 * PI * dot as f64 / q as f64)
                        })
                        .collect(),
                );
            }
            let labels = (0..order).map(|c| format!("chi_{c}")).collect();
            CharacterTable::new(vec![1; order], values, labels, sizes)
        }
        (fam, gf) => Err(GroupError::UnsupportedFamily(format!("{fam:?} table for group family {gf:?}"))),
    }
}
