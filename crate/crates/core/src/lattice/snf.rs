//! Smith normal form and integer row echelon bases over `BigInt`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

pub type IntMatrix = Vec<Vec<BigInt>>;

/// `U · M · V = D` with `U`, `V` unimodular and `D` diagonal with
/// nonnegative entries `d₁ | d₂ | …`.
#[derive(Clone, Debug)]
pub struct SmithForm {
    pub diagonal: Vec<BigInt>,
    pub u: IntMatrix,
    pub v: IntMatrix,
}

fn identity(n: usize) -> IntMatrix {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
        .collect()
}

fn add_row(m: &mut IntMatrix, dst: usize, src: usize, f: &BigInt) {
    if f.is_zero() {
        return;
    }
    let s = m[src].clone();
    for (d, x) in m[dst].iter_mut().zip(s) {
        *d += f * x;
    }
}

fn add_col(m: &mut IntMatrix, dst: usize, src: usize, f: &BigInt) {
    if f.is_zero() {
        return;
    }
    for row in m.iter_mut() {
        let x = row[src].clone();
        row[dst] += f * x;
    }
}

fn swap_cols(m: &mut IntMatrix, a: usize, b: usize) {
    for row in m.iter_mut() {
        row.swap(a, b);
    }
}

pub fn smith_normal_form(m: &IntMatrix) -> SmithForm {
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    let mut a = m.clone();
    let mut u = identity(rows);
    let mut v = identity(cols);

    for k in 0..rows.min(cols) {
        loop {
            // smallest nonzero entry of the trailing block goes to (k, k)
            let mut best: Option<(usize, usize)> = None;
            for i in k..rows {
                for j in k..cols {
                    if !a[i][j].is_zero()
                        && best.is_none_or(|(bi, bj)| a[i][j].abs() < a[bi][bj].abs())
                    {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else {
                break;
            };
            a.swap(k, pi);
            u.swap(k, pi);
            swap_cols(&mut a, k, pj);
            swap_cols(&mut v, k, pj);

            let p = a[k][k].clone();
            let mut dirty = false;
            for i in k + 1..rows {
                let q = -a[i][k].div_floor(&p);
                add_row(&mut a, i, k, &q);
                add_row(&mut u, i, k, &q);
                dirty |= !a[i][k].is_zero();
            }
            for j in k + 1..cols {
                let q = -a[k][j].div_floor(&p);
                add_col(&mut a, j, k, &q);
                add_col(&mut v, j, k, &q);
                dirty |= !a[k][j].is_zero();
            }
            if dirty {
                continue;
            }
            // enforce divisibility of the trailing block by the pivot
            let offender = (k + 1..rows)
                .flat_map(|i| (k + 1..cols).map(move |j| (i, j)))
                .find(|&(i, j)| !a[i][j].is_multiple_of(&p));
            match offender {
                Some((i, _)) => {
                    let one = BigInt::one();
                    add_row(&mut a, k, i, &one);
                    add_row(&mut u, k, i, &one);
                }
                None => break,
            }
        }
    }
    for k in 0..rows.min(cols) {
        if a[k][k].is_negative() {
            for x in a[k].iter_mut() {
                *x = -x.clone();
            }
            for x in u[k].iter_mut() {
                *x = -x.clone();
            }
        }
    }
    SmithForm {
        diagonal: (0..rows.min(cols)).map(|k| a[k][k].clone()).collect(),
        u,
        v,
    }
}

/// A basis (as rows, in echelon form) of the integer row space of `rows`.
pub fn row_space_basis(rows: &IntMatrix) -> IntMatrix {
    let mut a: IntMatrix = rows.iter().filter(|r| r.iter().any(|x| !x.is_zero())).cloned().collect();
    let cols = a.first().map_or(0, |r| r.len());
    let mut out = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        // Euclid on column c among rows r.. until a single nonzero remains
        loop {
            let nz: Vec<usize> = (r..a.len()).filter(|&i| !a[i][c].is_zero()).collect();
            if nz.len() <= 1 {
                break;
            }
            let p = *nz.iter().min_by_key(|&&i| a[i][c].abs()).unwrap();
            for &i in &nz {
                if i != p {
                    let q = -a[i][c].div_floor(&a[p][c]);
                    add_row(&mut a, i, p, &q);
                }
            }
        }
        if let Some(p) = (r..a.len()).find(|&i| !a[i][c].is_zero()) {
            a.swap(r, p);
            if a[r][c].is_negative() {
                for x in a[r].iter_mut() {
                    *x = -x.clone();
                }
            }
            out.push(a[r].clone());
            r += 1;
        }
    }
    out
}
