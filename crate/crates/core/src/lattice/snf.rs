//! Smith normal form and column reduction over `Z`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

pub type IntMatrix = Vec<Vec<BigInt>>;

pub fn identity(n: usize) -> IntMatrix {
    (0..n).map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect()).collect()
}

/// `(P, D, R)` with `P·A·R = D` diagonal, `P`, `R` unimodular, the diagonal
/// nonnegative and each entry dividing the next.
pub struct Smith {
    pub p: IntMatrix,
    pub d: Vec<BigInt>,
    pub r: IntMatrix,
}

fn swap_cols(m: &mut IntMatrix, a: usize, b: usize) {
    for row in m.iter_mut() {
        row.swap(a, b);
    }
}

/// `col[dst] += k · col[src]`
fn add_col(m: &mut IntMatrix, dst: usize, src: usize, k: &BigInt) {
    for row in m.iter_mut() {
        let v = &row[src] * k;
        row[dst] += v;
    }
}

/// `row[dst] += k · row[src]`
fn add_row(m: &mut IntMatrix, dst: usize, src: usize, k: &BigInt) {
    let src_row = m[src].clone();
    for (x, s) in m[dst].iter_mut().zip(src_row) {
        *x += s * k;
    }
}

pub fn smith_normal_form(a: &IntMatrix) -> Smith {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut m = a.clone();
    let mut p = identity(rows);
    let mut r = identity(cols);
    let mut t = 0;
    while t < rows.min(cols) {
        // smallest nonzero entry of the remaining block
        let pivot = (t..rows)
            .flat_map(|i| (t..cols).map(move |j| (i, j)))
            .filter(|&(i, j)| !m[i][j].is_zero())
            .min_by(|&(i, j), &(k, l)| m[i][j].abs().cmp(&m[k][l].abs()));
        let Some((pi, pj)) = pivot else { break };
        m.swap(t, pi);
        p.swap(t, pi);
        swap_cols(&mut m, t, pj);
        swap_cols(&mut r, t, pj);

        let mut dirty = false;
        for i in t + 1..rows {
            if m[i][t].is_zero() {
                continue;
            }
            let q = -m[i][t].div_floor(&m[t][t]);
            add_row(&mut m, i, t, &q);
            add_row(&mut p, i, t, &q);
            dirty |= !m[i][t].is_zero();
        }
        for j in t + 1..cols {
            if m[t][j].is_zero() {
                continue;
            }
            let q = -m[t][j].div_floor(&m[t][t]);
            add_col(&mut m, j, t, &q);
            add_col(&mut r, j, t, &q);
            dirty |= !m[t][j].is_zero();
        }
        if dirty {
            continue;
        }
        // the pivot must divide the rest of the block
        let bad = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| !m[i][j].is_multiple_of(&m[t][t])));
        if let Some(i) = bad {
            let one = BigInt::one();
            add_row(&mut m, t, i, &one);
            add_row(&mut p, t, i, &one);
            continue;
        }
        if m[t][t].is_negative() {
            for x in m[t].iter_mut() {
                *x = -x.clone();
            }
            for x in p[t].iter_mut() {
                *x = -x.clone();
            }
        }
        t += 1;
    }
    let d = (0..rows.min(cols)).map(|i| m[i][i].clone()).collect();
    Smith { p, d, r }
}

/// Unimodular `V` with `A·V = [H | 0]`, `H` of full column rank; returns
/// `(V, rank)`.
pub fn column_reduce(a: &IntMatrix) -> (IntMatrix, usize) {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut m = a.clone();
    let mut v = identity(cols);
    let mut pc = 0;
    for i in 0..rows {
        if pc == cols {
            break;
        }
        loop {
            let nz: Vec<usize> = (pc..cols).filter(|&j| !m[i][j].is_zero()).collect();
            if nz.len() <= 1 {
                if let Some(&j) = nz.first() {
                    swap_cols(&mut m, pc, j);
                    swap_cols(&mut v, pc, j);
                    pc += 1;
                }
                break;
            }
            let &j0 = nz.iter().min_by(|&&x, &&y| m[i][x].abs().cmp(&m[i][y].abs())).unwrap();
            for &j in &nz {
                if j != j0 {
                    let q = -m[i][j].div_floor(&m[i][j0]);
                    add_col(&mut m, j, j0, &q);
                    add_col(&mut v, j, j0, &q);
                }
            }
        }
    }
    (v, pc)
}
