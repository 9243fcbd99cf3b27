use std::fmt;
use std::ops::{Index, IndexMut};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::LinalgError;

pub type Rational = BigRational;

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Dense matrix of reduced rationals.
#[derive(Clone, PartialEq, Eq)]
pub struct RationalMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl fmt::Debug for RationalMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "RationalMatrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            let row: Vec<String> = self.row(r).iter().map(|x| x.to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

impl Index<(usize, usize)> for RationalMatrix {
    type Output = Rational;
    fn index(&self, (r, c): (usize, usize)) -> &Rational {
        &self.data[r * self.cols + c]
    }
}

impl IndexMut<(usize, usize)> for RationalMatrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut Rational {
        &mut self.data[r * self.cols + c]
    }
}

impl RationalMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RationalMatrix { rows, cols, data: vec![Rational::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Rational::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged matrix");
        RationalMatrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    pub fn from_i64(rows: &[Vec<i64>]) -> Self {
        Self::from_rows(rows.iter().map(|r| r.iter().map(|&x| rat(x)).collect()).collect())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, r: usize) -> &[Rational] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<Rational>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t[(c, r)] = self[(r, c)].clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &RationalMatrix) -> RationalMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Vec<Rational> {
        assert_eq!(self.cols, v.len(), "dimension mismatch");
        (0..self.rows)
            .map(|r| {
                self.row(r)
                    .iter()
                    .zip(v)
                    .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                    .map(|(a, b)| a * b)
                    .fold(Rational::zero(), |acc, x| acc + x)
            })
            .collect()
    }

    /// `self + s I`.
    pub fn add_scalar_identity(&self, s: &Rational) -> RationalMatrix {
        assert_eq!(self.rows, self.cols);
        let mut out = self.clone();
        for i in 0..self.rows {
            out[(i, i)] += s;
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }
}

/// Rank by fraction-free (Bareiss) elimination over the integers after
/// clearing each row's denominators.
pub fn exact_rank(m: &RationalMatrix) -> usize {
    let mut a: Vec<Vec<BigInt>> = (0..m.rows())
        .map(|r| {
            let row = m.row(r);
            let l = row.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
            row.iter().map(|x| x.numer() * (&l / x.denom())).collect()
        })
        .collect();
    bareiss_rank(&mut a)
}

/// Rank of an integer matrix, exactly.
///
/// Rank modulo a prime never exceeds the rational rank, so a full rank
/// mod `p` is already exact; otherwise falls back to Bareiss.
pub fn integer_rank(m: &[Vec<i64>]) -> usize {
    let full = m.len().min(m.first().map_or(0, Vec::len));
    if modular_rank(m, MODULUS) == full {
        return full;
    }
    let mut a: Vec<Vec<BigInt>> = m.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
    bareiss_rank(&mut a)
}

const MODULUS: u64 = 2_147_483_647;

fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    acc
}

fn modular_rank(m: &[Vec<i64>], p: u64) -> usize {
    let mut a: Vec<Vec<u64>> = m
        .iter()
        .map(|r| r.iter().map(|&x| x.rem_euclid(p as i64) as u64).collect())
        .collect();
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(piv) = (r..rows).find(|&i| a[i][c] != 0) else {
            continue;
        };
        a.swap(r, piv);
        let inv = pow_mod(a[r][c], p - 2, p);
        let (head, tail) = a.split_at_mut(r + 1);
        let pivot_row = &head[r];
        for row in tail.iter_mut() {
            if row[c] == 0 {
                continue;
            }
            let f = row[c] * inv % p;
            for j in c..cols {
                row[j] = (row[j] + p - f * pivot_row[j] % p) % p;
            }
        }
        r += 1;
    }
    r
}

fn bareiss_rank(a: &mut [Vec<BigInt>]) -> usize {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut prev = BigInt::one();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let (head, tail) = a.split_at_mut(r + 1);
        let pivot_row = &head[r];
        let pivot = &pivot_row[c];
        for row in tail.iter_mut() {
            let factor = row[c].clone();
            for j in c + 1..cols {
                let v = pivot * &row[j] - &factor * &pivot_row[j];
                // exact by Sylvester's identity
                row[j] = if prev.is_one() { v } else { v / &prev };
            }
            row[c] = BigInt::zero();
        }
        prev = a[r][c].clone();
        r += 1;
    }
    r
}

/// Reduced row echelon form; returns the pivot column of each nonzero row.
fn rref(m: &mut RationalMatrix, pivot_cols_limit: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..pivot_cols_limit {
        if r == m.rows {
            break;
        }
        let Some(p) = (r..m.rows).find(|&i| !m[(i, c)].is_zero()) else {
            continue;
        };
        if p != r {
            for j in 0..m.cols {
                m.data.swap(p * m.cols + j, r * m.cols + j);
            }
        }
        let inv = m[(r, c)].recip();
        for j in 0..m.cols {
            let v = &m[(r, j)] * &inv;
            m[(r, j)] = v;
        }
        for i in 0..m.rows {
            if i == r || m[(i, c)].is_zero() {
                continue;
            }
            let f = m[(i, c)].clone();
            for j in 0..m.cols {
                if m[(r, j)].is_zero() {
                    continue;
                }
                let v = &m[(i, j)] - &f * &m[(r, j)];
                m[(i, j)] = v;
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

fn nullspace_from_rref(m: &RationalMatrix, pivots: &[usize], ncols: usize) -> Vec<Vec<Rational>> {
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![Rational::zero(); ncols];
            v[f] = Rational::one();
            for (row, &pc) in pivots.iter().enumerate() {
                v[pc] = -m[(row, f)].clone();
            }
            v
        })
        .collect()
}

/// Basis of `{x : M x = 0}`, one vector per free column.
pub fn exact_nullspace(m: &RationalMatrix) -> Vec<Vec<Rational>> {
    let mut w = m.clone();
    let pivots = rref(&mut w, m.cols);
    nullspace_from_rref(&w, &pivots, m.cols)
}

/// Solution set of `M x = rhs` as a particular solution plus a homogeneous basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolutionSet {
    pub particular: Vec<Rational>,
    pub nullspace: Vec<Vec<Rational>>,
}

/// Solves `M x = rhs` exactly. On inconsistency the error carries a
/// certificate `y` with `y^T M = 0` and `y^T rhs != 0`.
pub fn exact_solve(m: &RationalMatrix, rhs: &[Rational]) -> Result<SolutionSet, LinalgError> {
    if rhs.len() != m.rows {
        return Err(LinalgError::DimensionMismatch { expected: m.rows, found: rhs.len() });
    }
    // [M | rhs | I] so row operations are recorded in the trailing block
    let width = m.cols + 1 + m.rows;
    let mut aug = RationalMatrix::zeros(m.rows, width);
    for r in 0..m.rows {
        for c in 0..m.cols {
            aug[(r, c)] = m[(r, c)].clone();
        }
        aug[(r, m.cols)] = rhs[r].clone();
        aug[(r, m.cols + 1 + r)] = Rational::one();
    }
    let pivots = rref(&mut aug, m.cols);
    for r in pivots.len()..m.rows {
        if !aug[(r, m.cols)].is_zero() {
            let certificate = (0..m.rows).map(|j| aug[(r, m.cols + 1 + j)].clone()).collect();
            return Err(LinalgError::Inconsistent { certificate });
        }
    }
    let mut particular = vec![Rational::zero(); m.cols];
    for (row, &pc) in pivots.iter().enumerate() {
        particular[pc] = aug[(row, m.cols)].clone();
    }
    let nullspace = nullspace_from_rref(&aug, &pivots, m.cols);
    Ok(SolutionSet { particular, nullspace })
}

/// `dim − rank(A − λI)`, the geometric (= algebraic, for symmetric `A`)
/// multiplicity of the integer `λ`.
pub fn integer_eigenvalue_multiplicity(a: &[Vec<i64>], lambda: i64) -> usize {
    let n = a.len();
    assert!(a.iter().all(|r| r.len() == n), "square matrix required");
    let shifted: Vec<Vec<i64>> = a
        .iter()
        .enumerate()
        .map(|(i, row)| row.iter().enumerate().map(|(j, &x)| if i == j { x - lambda } else { x }).collect())
        .collect();
    n - integer_rank(&shifted)
}

/// True iff the rational is an integer; returns it.
pub fn as_integer(x: &Rational) -> Option<BigInt> {
    x.is_integer().then(|| x.to_integer())
}

pub fn is_nonnegative(x: &Rational) -> bool {
    !x.is_negative()
}
