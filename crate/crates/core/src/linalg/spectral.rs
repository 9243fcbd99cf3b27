use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::LinalgError;
use crate::group::{conjugacy_classes, CharacterTable, FiniteGroup};

/// Eigenvalues closer than this are one eigenvalue.
pub const MERGE_TOL: f64 = 1e-7;
/// Imaginary parts of character sums must vanish to this tolerance.
pub const CHARACTER_IMAG_TOL: f64 = 1e-8;
pub const DEFAULT_RANK_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectrumEntry {
    pub value: f64,
    pub multiplicity: usize,
}

/// Distinct eigenvalues, descending, with multiplicities.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Spectrum {
    pub entries: Vec<SpectrumEntry>,
    /// Set when two distinct clusters lie within ten times the merge tolerance.
    pub merge_ambiguous: bool,
}

impl Spectrum {
    /// Groups weighted values into clusters within [`MERGE_TOL`].
    pub fn from_weighted(mut values: Vec<(f64, usize)>) -> Spectrum {
        values.sort_by(|a, b| b.0.total_cmp(&a.0));
        let mut clusters: Vec<(Vec<f64>, usize)> = Vec::new();
        for (x, w) in values {
            match clusters.last_mut() {
                Some((members, mult)) if members.last().unwrap() - x <= MERGE_TOL => {
                    members.push(x);
                    *mult += w;
                }
                _ => clusters.push((vec![x], w)),
            }
        }
        let entries: Vec<SpectrumEntry> = clusters
            .into_iter()
            .map(|(members, multiplicity)| SpectrumEntry {
                value: members.iter().sum::<f64>() / members.len() as f64,
                multiplicity,
            })
            .collect();
        let merge_ambiguous = entries.windows(2).any(|w| w[0].value - w[1].value < 10.0 * MERGE_TOL);
        Spectrum { entries, merge_ambiguous }
    }

    pub fn from_values(values: Vec<f64>) -> Spectrum {
        Self::from_weighted(values.into_iter().map(|v| (v, 1)).collect())
    }

    pub fn dimension(&self) -> usize {
        self.entries.iter().map(|e| e.multiplicity).sum()
    }

    /// Multiplicity of the cluster containing `value`, 0 if absent.
    pub fn multiplicity_of(&self, value: f64) -> usize {
        self.entries
            .iter()
            .find(|e| (e.value - value).abs() <= MERGE_TOL)
            .map_or(0, |e| e.multiplicity)
    }

    pub fn contains(&self, value: f64) -> bool {
        self.multiplicity_of(value) > 0
    }

    /// Largest eigenvalue distance to `other` when both have identical
    /// multiplicity patterns; `None` if the patterns differ.
    pub fn max_deviation(&self, other: &Spectrum) -> Option<f64> {
        if self.entries.len() != other.entries.len() {
            return None;
        }
        let mut worst = 0.0f64;
        for (a, b) in self.entries.iter().zip(&other.entries) {
            if a.multiplicity != b.multiplicity {
                return None;
            }
            worst = worst.max((a.value - b.value).abs());
        }
        Some(worst)
    }
}

/// Diagonal `d` with `d_i m_ij = d_j m_ji`, found by propagating ratios
/// along the nonzero pattern. Block sizes of an equitable partition are one
/// such diagonal.
fn symmetrizer(m: &DMatrix<f64>) -> Option<Vec<f64>> {
    let n = m.nrows();
    let mut d: Vec<Option<f64>> = vec![None; n];
    for root in 0..n {
        if d[root].is_some() {
            continue;
        }
        d[root] = Some(1.0);
        let mut stack = vec![root];
        while let Some(i) = stack.pop() {
            let di = d[i].unwrap();
            for j in 0..n {
                if i == j {
                    continue;
                }
                let (mij, mji) = (m[(i, j)], m[(j, i)]);
                if (mij == 0.0) != (mji == 0.0) || mij * mji < 0.0 {
                    return None;
                }
                if mij == 0.0 {
                    continue;
                }
                let dj = di * mij / mji;
                match d[j] {
                    None => {
                        d[j] = Some(dj);
                        stack.push(j);
                    }
                    Some(existing) if ((existing - dj) / existing).abs() > 1e-9 => return None,
                    Some(_) => {}
                }
            }
        }
    }
    d.into_iter().collect()
}

/// Spectrum of a real square matrix that is symmetric or diagonally
/// similar to a symmetric one (quotient matrices are, via block sizes).
/// Anything else goes through a general Schur decomposition and must have
/// real eigenvalues.
pub fn float_spectrum(m: &[Vec<f64>]) -> Result<Spectrum, LinalgError> {
    let n = m.len();
    if m.iter().any(|r| r.len() != n) {
        return Err(LinalgError::NotSquare);
    }
    if n == 0 {
        return Ok(Spectrum { entries: Vec::new(), merge_ambiguous: false });
    }
    let mat = DMatrix::from_fn(n, n, |i, j| m[i][j]);
    if let Some(d) = symmetrizer(&mat) {
        let sq: Vec<f64> = d.iter().map(|x| x.sqrt()).collect();
        let mut sym = DMatrix::from_fn(n, n, |i, j| sq[i] * mat[(i, j)] / sq[j]);
        // remove rounding asymmetry
        let t = sym.transpose();
        sym = (sym + t) * 0.5;
        let eig = SymmetricEigen::new(sym);
        return Ok(Spectrum::from_values(eig.eigenvalues.iter().copied().collect()));
    }
    let eig = mat.complex_eigenvalues();
    let worst = eig.iter().map(|z| z.im.abs()).fold(0.0, f64::max);
    if worst > MERGE_TOL {
        return Err(LinalgError::NonRealEigenvalue { imag: worst });
    }
    Ok(Spectrum::from_values(eig.iter().map(|z| z.re).collect()))
}

pub fn float_spectrum_of_integers(m: &[Vec<i64>]) -> Result<Spectrum, LinalgError> {
    let f: Vec<Vec<f64>> = m.iter().map(|r| r.iter().map(|&x| x as f64).collect()).collect();
    float_spectrum(&f)
}

/// `(1/χ(1)) Σ_{g∈S} χ(g)` for every character, in table order.
pub fn character_eigenvalues(
    group: &FiniteGroup,
    s: &[usize],
    table: &CharacterTable,
) -> Result<Vec<f64>, LinalgError> {
    let classes = conjugacy_classes(group);
    if !classes.is_union_of_classes(s) {
        return Err(LinalgError::NotNormal);
    }
    table.check_against(group).map_err(|e| LinalgError::TableMismatch(e.to_string()))?;
    let in_s = classes.classes_in(s);
    (0..table.num_characters())
        .map(|c| {
            let sum: Complex64 = in_s
                .iter()
                .map(|&k| table.value(c, k) * classes.classes()[k].len() as f64)
                .sum();
            let lambda = sum / table.degrees()[c] as f64;
            if lambda.im.abs() > CHARACTER_IMAG_TOL {
                return Err(LinalgError::NonRealEigenvalue { imag: lambda.im.abs() });
            }
            Ok(lambda.re)
        })
        .collect()
}

/// Spectrum of a normal Cayley graph from its character table; each
/// character contributes `χ(1)^2` to the multiplicity of its eigenvalue.
pub fn cayley_spectrum_from_characters(
    group: &FiniteGroup,
    s: &[usize],
    table: &CharacterTable,
) -> Result<Spectrum, LinalgError> {
    let ev = character_eigenvalues(group, s, table)?;
    let weighted = ev
        .into_iter()
        .zip(table.degrees())
        .map(|(v, &d)| (v, (d as usize) * (d as usize)))
        .collect();
    Ok(Spectrum::from_weighted(weighted))
}

/// Numerical rank by complete-pivoting elimination; entries below
/// `tol * max|entry|` count as zero.
pub fn float_rank(m: &[Vec<Complex64>], tol: f64) -> usize {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut a: Vec<Vec<Complex64>> = m.to_vec();
    let scale = a.iter().flatten().map(|z| z.norm()).fold(0.0, f64::max);
    if scale == 0.0 {
        return 0;
    }
    let threshold = tol * scale;
    let mut rank = 0;
    let mut col_perm: Vec<usize> = (0..cols).collect();
    while rank < rows.min(cols) {
        let mut best = (0.0, rank, rank);
        for (i, row) in a.iter().enumerate().skip(rank) {
            for (jj, &j) in col_perm.iter().enumerate().skip(rank) {
                let v = row[j].norm();
                if v > best.0 {
                    best = (v, i, jj);
                }
            }
        }
        if best.0 <= threshold {
            break;
        }
        a.swap(rank, best.1);
        col_perm.swap(rank, best.2);
        let pc = col_perm[rank];
        let pivot = a[rank][pc];
        let pivot_row = a[rank].clone();
        for row in a.iter_mut().skip(rank + 1) {
            let f = row[pc] / pivot;
            if f.norm() == 0.0 {
                continue;
            }
            for &j in &col_perm[rank..] {
                row[j] -= f * pivot_row[j];
            }
        }
        rank += 1;
    }
    rank
}

pub fn float_rank_real(m: &[Vec<f64>], tol: f64) -> usize {
    let c: Vec<Vec<Complex64>> = m.iter().map(|r| r.iter().map(|&x| Complex64::new(x, 0.0)).collect()).collect();
    float_rank(&c, tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Graph;
    use crate::group::{builtin_character_table, elementary_abelian_and_cyclic, TableFamily};
    use std::f64::consts::PI;

    fn entries(s: &Spectrum) -> Vec<(f64, usize)> {
        s.entries.iter().map(|e| (e.value, e.multiplicity)).collect()
    }

    fn assert_spectrum(s: &Spectrum, want: &[(f64, usize)]) {
        let got = entries(s);
        assert_eq!(got.len(), want.len(), "{got:?} vs {want:?}");
        for ((gv, gm), (wv, wm)) in got.iter().zip(want) {
            assert!((gv - wv).abs() < 1e-9, "{got:?} vs {want:?}");
            assert_eq!(gm, wm);
        }
    }

    #[test]
    fn quotient_spectrum() {
        // λ² − λ − 2
        let s = float_spectrum(&[vec![0.0, 2.0], vec![1.0, 1.0]]).unwrap();
        assert_spectrum(&s, &[(2.0, 1), (-1.0, 1)]);
    }

    #[test]
    fn cycle_spectrum() {
        let s = float_spectrum_of_integers(&Graph::cycle(6).adjacency_matrix()).unwrap();
        // 2cos(2πj/6)
        assert_spectrum(&s, &[(2.0, 1), (1.0, 2), (-1.0, 2), (-2.0, 1)]);
        assert_eq!(s.dimension(), 6);
        assert!(!s.merge_ambiguous);
    }

    #[test]
    fn non_real_spectrum_is_rejected() {
        // rotation by 90 degrees, pattern not symmetrizable
        let r = float_spectrum(&[vec![0.0, -1.0], vec![1.0, 0.0]]);
        assert!(matches!(r, Err(LinalgError::NonRealEigenvalue { .. })));
        // non-symmetrizable but real spectrum (upper triangular)
        let s = float_spectrum(&[vec![1.0, 5.0], vec![0.0, 3.0]]).unwrap();
        assert_spectrum(&s, &[(3.0, 1), (1.0, 1)]);
    }

    #[test]
    fn close_clusters_flag_ambiguity() {
        let s = Spectrum::from_values(vec![1.0, 1.0 + 5e-7, 0.0]);
        assert_eq!(s.entries.len(), 3);
        assert!(s.merge_ambiguous);
        let s = Spectrum::from_values(vec![1.0, 1.0 + 5e-8]);
        assert_eq!(s.entries.len(), 1);
        assert_eq!(s.entries[0].multiplicity, 2);
    }

    #[test]
    fn k4_from_characters() {
        let g = elementary_abelian_and_cyclic(2, 2);
        let t = builtin_character_table(&g, TableFamily::ElementaryAbelian).unwrap();
        let s = cayley_spectrum_from_characters(&g, &[1, 2, 3], &t).unwrap();
        assert_spectrum(&s, &[(3.0, 1), (-1.0, 3)]);
    }

    #[test]
    fn c6_characters_match_adjacency() {
        let g = elementary_abelian_and_cyclic(6, 1);
        let t = builtin_character_table(&g, TableFamily::Cyclic).unwrap();
        let ev = character_eigenvalues(&g, &[1, 5], &t).unwrap();
        for (j, v) in ev.iter().enumerate() {
            assert!((v - 2.0 * (PI * j as f64 / 3.0).cos()).abs() < 1e-12);
        }
        let from_chars = cayley_spectrum_from_characters(&g, &[1, 5], &t).unwrap();
        let from_adj = float_spectrum_of_integers(&Graph::cycle(6).adjacency_matrix()).unwrap();
        assert!(from_chars.max_deviation(&from_adj).unwrap() < 1e-7);
    }

    #[test]
    fn non_normal_set_is_rejected() {
        let (g, _) = crate::group::dihedral_group(5);
        let t = builtin_character_table(&g, TableFamily::DihedralOdd).unwrap();
        assert!(matches!(character_eigenvalues(&g, &[5], &t), Err(LinalgError::NotNormal)));
    }

    #[test]
    fn float_ranks() {
        assert_eq!(float_rank_real(&vec![vec![0.0; 3]; 3], DEFAULT_RANK_TOL), 0);
        let u: Vec<f64> = (0..8).map(|i| if i % 3 == 0 { 1.0 } else { -1.0 }).collect();
        let w: Vec<f64> = (0..8).map(|i| if i % 2 == 0 { -1.0 } else { 1.0 }).collect();
        let outer: Vec<Vec<f64>> = u.iter().map(|a| w.iter().map(|b| a * b).collect()).collect();
        assert_eq!(float_rank_real(&outer, DEFAULT_RANK_TOL), 1);
        let i3: Vec<Vec<f64>> = (0..3).map(|i| (0..3).map(|j| (i == j) as u8 as f64).collect()).collect();
        assert_eq!(float_rank_real(&i3, DEFAULT_RANK_TOL), 3);
    }
}
