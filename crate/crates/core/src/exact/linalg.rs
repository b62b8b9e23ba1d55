//! Dense linear algebra over the rationals for the small matrices this crate
//! handles (rank ≤ 6 or so). Matrices are row-major `Vec<Vec<Rational>>`.

use num_traits::{One, Signed, Zero};

use super::rational::{int, Rational};

pub type Matrix = Vec<Vec<Rational>>;

pub fn from_i64(rows: &[Vec<i64>]) -> Matrix {
    rows.iter().map(|r| r.iter().map(|&x| int(x)).collect()).collect()
}

pub fn vec_from_i64(v: &[i64]) -> Vec<Rational> {
    v.iter().map(|&x| int(x)).collect()
}

pub fn identity(n: usize) -> Matrix {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { Rational::one() } else { Rational::zero() }).collect())
        .collect()
}

pub fn transpose(a: &Matrix) -> Matrix {
    if a.is_empty() {
        return vec![];
    }
    (0..a[0].len())
        .map(|j| a.iter().map(|row| row[j].clone()).collect())
        .collect()
}

pub fn mul(a: &Matrix, b: &Matrix) -> Matrix {
    let inner = b.len();
    let cols = b.first().map_or(0, |r| r.len());
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| (0..inner).fold(Rational::zero(), |acc, k| acc + &row[k] * &b[k][j]))
                .collect()
        })
        .collect()
}

pub fn mat_vec(a: &Matrix, v: &[Rational]) -> Vec<Rational> {
    a.iter().map(|row| dot(row, v)).collect()
}

pub fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).fold(Rational::zero(), |acc, (x, y)| acc + x * y)
}

/// `xᵀ G y`.
pub fn bilinear(g: &Matrix, x: &[Rational], y: &[Rational]) -> Rational {
    dot(x, &mat_vec(g, y))
}

pub fn is_symmetric(a: &Matrix) -> bool {
    let n = a.len();
    a.iter().all(|r| r.len() == n) && (0..n).all(|i| (0..i).all(|j| a[i][j] == a[j][i]))
}

/// Row echelon form in place; returns pivot columns.
fn echelon(m: &mut Matrix) -> Vec<usize> {
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].recip();
        for j in c..cols {
            m[r][j] = &m[r][j] * &inv;
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in c..cols {
                    let delta = &f * &m[r][j];
                    m[i][j] -= delta;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank(a: &Matrix) -> usize {
    let mut m = a.clone();
    echelon(&mut m).len()
}

pub fn det(a: &Matrix) -> Rational {
    let n = a.len();
    let mut m = a.clone();
    let mut d = Rational::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !m[i][c].is_zero()) else {
            return Rational::zero();
        };
        if p != c {
            m.swap(p, c);
            d = -d;
        }
        d *= &m[c][c];
        for i in c + 1..n {
            if !m[i][c].is_zero() {
                let f = &m[i][c] / &m[c][c];
                for j in c..n {
                    let delta = &f * &m[c][j];
                    m[i][j] -= delta;
                }
            }
        }
    }
    d
}

pub fn inverse(a: &Matrix) -> Option<Matrix> {
    let n = a.len();
    let mut aug: Matrix = a
        .iter()
        .zip(identity(n))
        .map(|(row, id)| row.iter().cloned().chain(id).collect())
        .collect();
    let pivots = echelon(&mut aug);
    if pivots.len() < n || pivots.iter().enumerate().any(|(i, &c)| i != c) {
        return None;
    }
    Some(aug.into_iter().map(|row| row[n..].to_vec()).collect())
}

/// Unique solution of `A x = b` for square nonsingular `A`.
pub fn solve(a: &Matrix, b: &[Rational]) -> Option<Vec<Rational>> {
    inverse(a).map(|inv| mat_vec(&inv, b))
}

/// Inertia `(positive, negative, zero)` of a symmetric matrix by exact
/// congruence diagonalization.
pub fn inertia(a: &Matrix) -> (usize, usize, usize) {
    let mut m = a.clone();
    let mut active: Vec<usize> = (0..m.len()).collect();
    let (mut pos, mut neg, mut zero) = (0, 0, 0);
    while !active.is_empty() {
        let pivot = match active.iter().copied().find(|&i| !m[i][i].is_zero()) {
            Some(p) => p,
            None => {
                let pair = active.iter().flat_map(|&i| active.iter().map(move |&j| (i, j)))
                    .find(|&(i, j)| i != j && !m[i][j].is_zero());
                let Some((i, j)) = pair else {
                    zero += active.len();
                    break;
                };
                // e_i ← e_i + e_j makes the (i, i) entry 2·m_ij ≠ 0
                for k in 0..m.len() {
                    let v = m[j][k].clone();
                    m[i][k] += v;
                }
                for k in 0..m.len() {
                    let v = m[k][j].clone();
                    m[k][i] += v;
                }
                i
            }
        };
        let d = m[pivot][pivot].clone();
        if d.is_positive() {
            pos += 1;
        } else {
            neg += 1;
        }
        active.retain(|&i| i != pivot);
        for &r in &active {
            for &c in &active {
                let delta = &m[r][pivot] * &m[pivot][c] / &d;
                m[r][c] -= delta;
            }
        }
    }
    (pos, neg, zero)
}

pub fn is_negative_definite(a: &Matrix) -> bool {
    let (p, n, z) = inertia(a);
    p == 0 && z == 0 && n == a.len()
}
