//! Dense exact linear algebra over the rationals.
//!
//! Everything here is Gaussian elimination in one form or another. Matrices
//! are small (a few dozen rows at most), so no attempt is made at fraction-free
//! tricks beyond the integer determinant.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::Rational;

pub type Matrix = Vec<Vec<Rational>>;

pub fn zero_matrix(rows: usize, cols: usize) -> Matrix {
    vec![vec![Rational::zero(); cols]; rows]
}

pub fn identity(n: usize) -> Matrix {
    let mut m = zero_matrix(n, n);
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = Rational::one();
    }
    m
}

pub fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter()
        .zip(b)
        .filter(|(x, y)| !x.is_zero() && !y.is_zero())
        .fold(Rational::zero(), |acc, (x, y)| acc + x * y)
}

pub fn mat_vec(m: &Matrix, v: &[Rational]) -> Vec<Rational> {
    m.iter().map(|row| dot(row, v)).collect()
}

/// vᵀ·M·w.
pub fn bilinear(m: &Matrix, v: &[Rational], w: &[Rational]) -> Rational {
    dot(v, &mat_vec(m, w))
}

pub fn transpose(m: &Matrix, cols: usize) -> Matrix {
    (0..cols)
        .map(|j| m.iter().map(|row| row[j].clone()).collect())
        .collect()
}

pub fn is_symmetric(m: &Matrix) -> bool {
    let n = m.len();
    m.iter().all(|row| row.len() == n) && (0..n).all(|i| (0..i).all(|j| m[i][j] == m[j][i]))
}

/// Reduced row echelon form.
#[derive(Clone, Debug)]
pub struct Echelon {
    pub rows: Matrix,
    pub pivots: Vec<usize>,
    pub cols: usize,
}

impl Echelon {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }
}

pub fn rref(m: &Matrix, cols: usize) -> Echelon {
    let mut a: Matrix = m.to_vec();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == a.len() {
            break;
        }
        let Some(p) = (r..a.len()).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let inv = a[r][c].recip();
        for x in a[r].iter_mut() {
            *x *= &inv;
        }
        let pivot_row = a[r].clone();
        for (i, row) in a.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (x, y) in row.iter_mut().zip(&pivot_row) {
                if !y.is_zero() {
                    *x -= &f * y;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    a.truncate(r);
    Echelon { rows: a, pivots, cols }
}

pub fn rank(m: &Matrix, cols: usize) -> usize {
    rref(m, cols).rank()
}

/// Basis of { x : m·x = 0 }.
pub fn nullspace(m: &Matrix, cols: usize) -> Vec<Vec<Rational>> {
    let e = rref(m, cols);
    let free: Vec<usize> = (0..cols).filter(|c| !e.pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![Rational::zero(); cols];
            v[f] = Rational::one();
            for (row, &p) in e.rows.iter().zip(&e.pivots) {
                v[p] = -row[f].clone();
            }
            v
        })
        .collect()
}

/// A particular solution of m·x = rhs with all free variables set to zero.
pub fn solve(m: &Matrix, cols: usize, rhs: &[Rational]) -> Option<Vec<Rational>> {
    let augmented: Matrix = m
        .iter()
        .zip(rhs)
        .map(|(row, b)| {
            let mut r = row.clone();
            r.push(b.clone());
            r
        })
        .collect();
    let e = rref(&augmented, cols + 1);
    if e.pivots.last() == Some(&cols) {
        return None;
    }
    let mut x = vec![Rational::zero(); cols];
    for (row, &p) in e.rows.iter().zip(&e.pivots) {
        x[p] = row[cols].clone();
    }
    Some(x)
}

/// Nontrivial coefficients c with Σ c_i·rows_i = 0, if the rows are dependent.
pub fn row_dependency(rows: &Matrix, cols: usize) -> Option<Vec<Rational>> {
    let t = transpose(rows, cols);
    nullspace(&t, rows.len()).into_iter().next()
}

/// Rank tracker fed one row at a time.
#[derive(Clone, Debug, Default)]
pub struct IncrementalRank {
    basis: Vec<(usize, Vec<Rational>)>,
}

impl IncrementalRank {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    /// Returns true when the row was independent of everything seen so far.
    pub fn insert(&mut self, mut row: Vec<Rational>) -> bool {
        for (p, b) in &self.basis {
            if row[*p].is_zero() {
                continue;
            }
            let f = row[*p].clone();
            for (x, y) in row.iter_mut().zip(b) {
                if !y.is_zero() {
                    *x -= &f * y;
                }
            }
        }
        let Some(p) = row.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = row[p].recip();
        for x in row.iter_mut() {
            *x *= &inv;
        }
        self.basis.push((p, row));
        true
    }
}

/// Congruence diagonalization of a symmetric matrix: returns (d, p) with
/// p·g·pᵀ = diag(d). Rows of p are the new basis vectors.
pub fn diagonalize_symmetric(g: &Matrix) -> (Vec<Rational>, Matrix) {
    let n = g.len();
    let mut a = g.to_vec();
    let mut p = identity(n);
    for k in 0..n {
        if a[k][k].is_zero() {
            if let Some(i) = (k + 1..n).find(|&i| !a[i][i].is_zero()) {
                swap_sym(&mut a, &mut p, k, i);
            } else if let Some((i, j)) = (k..n)
                .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
                .find(|&(i, j)| !a[i][j].is_zero())
            {
                // all remaining diagonal entries vanish: b_i += b_j gives 2·a_ij on the diagonal
                add_sym(&mut a, &mut p, i, j, &Rational::one());
                swap_sym(&mut a, &mut p, k, i);
            } else {
                break;
            }
        }
        for j in k + 1..n {
            if a[j][k].is_zero() {
                continue;
            }
            let f = -(&a[j][k] / &a[k][k]);
            add_sym(&mut a, &mut p, j, k, &f);
        }
    }
    ((0..n).map(|i| a[i][i].clone()).collect(), p)
}

fn swap_sym(a: &mut Matrix, p: &mut Matrix, i: usize, j: usize) {
    if i == j {
        return;
    }
    a.swap(i, j);
    for row in a.iter_mut() {
        row.swap(i, j);
    }
    p.swap(i, j);
}

/// Basis change b_i ← b_i + f·b_j applied as a congruence.
fn add_sym(a: &mut Matrix, p: &mut Matrix, i: usize, j: usize, f: &Rational) {
    let n = a.len();
    let row_j = a[j].clone();
    for c in 0..n {
        a[i][c] += f * &row_j[c];
    }
    for row in a.iter_mut() {
        let v = f * &row[j];
        row[i] += v;
    }
    let pj = p[j].clone();
    for (x, y) in p[i].iter_mut().zip(&pj) {
        *x += f * y;
    }
}

/// Determinant of an integer matrix by fraction-free (Bareiss) elimination.
pub fn integer_determinant(m: &[Vec<BigInt>]) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut a = m.to_vec();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            let Some(i) = (k + 1..n).find(|&i| !a[i][k].is_zero()) else {
                return BigInt::zero();
            };
            a.swap(k, i);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
                a[i][j] = v;
            }
        }
        prev = a[k][k].clone();
    }
    sign * &a[n - 1][n - 1]
}

/// Counts of positive and negative entries.
pub fn inertia(diagonal: &[Rational]) -> (usize, usize) {
    let pos = diagonal.iter().filter(|x| x.is_positive()).count();
    let neg = diagonal.iter().filter(|x| x.is_negative()).count();
    (pos, neg)
}
