//! Exact rational linear algebra for the certifier: reduced row echelon
//! form, nullspaces, and a phase-one simplex for `{x ≥ 0 : Ax = b}`.

use num_traits::{One, Signed, Zero};

use crate::rational::Rational;

pub type Matrix = Vec<Vec<Rational>>;

/// Reduces `m` in place; returns the pivot column of each nonzero row.
pub fn rref(m: &mut Matrix, ncols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..ncols {
        if row == m.len() {
            break;
        }
        let Some(p) = (row..m.len()).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(row, p);
        let inv = m[row][col].recip();
        for v in m[row].iter_mut() {
            *v *= &inv;
        }
        for r in 0..m.len() {
            if r != row && !m[r][col].is_zero() {
                let f = m[r][col].clone();
                for c in 0..ncols {
                    let delta = &f * &m[row][c];
                    m[r][c] -= delta;
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    pivots
}

/// Basis of `{x : Ax = 0}` for a matrix with `ncols` columns.
pub fn nullspace(a: &Matrix, ncols: usize) -> Vec<Vec<Rational>> {
    let mut m = a.clone();
    let pivots = rref(&mut m, ncols);
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![Rational::zero(); ncols];
            v[f] = Rational::one();
            for (r, &p) in pivots.iter().enumerate() {
                v[p] = -m[r][f].clone();
            }
            v
        })
        .collect()
}

pub fn rank(a: &Matrix, ncols: usize) -> usize {
    let mut m = a.clone();
    rref(&mut m, ncols).len()
}

/// Finds some `x ≥ 0` with `Ax = b`, or `None` if none exists.
///
/// Phase-one simplex on `[A | I]` with artificial variables, Bland's rule
/// for both entering and leaving choices, exact arithmetic throughout.
pub fn nonneg_solution(a: &Matrix, b: &[Rational], ncols: usize) -> Option<Vec<Rational>> {
    let m = a.len();
    let n = ncols;
    if m == 0 {
        return Some(vec![Rational::zero(); n]);
    }
    let width = n + m + 1;
    let rhs = n + m;
    let mut t: Matrix = (0..m)
        .map(|i| {
            let flip = b[i].is_negative();
            let mut row = Vec::with_capacity(width);
            for j in 0..n {
                row.push(if flip { -a[i][j].clone() } else { a[i][j].clone() });
            }
            for k in 0..m {
                row.push(if k == i { Rational::one() } else { Rational::zero() });
            }
            row.push(if flip { -b[i].clone() } else { b[i].clone() });
            row
        })
        .collect();
    let mut basis: Vec<usize> = (n..n + m).collect();
    let cost = |j: usize| if j >= n { Rational::one() } else { Rational::zero() };

    loop {
        let reduced = |j: usize, t: &Matrix, basis: &[usize]| {
            let mut r = cost(j);
            for (i, &bj) in basis.iter().enumerate() {
                if bj >= n {
                    r -= &t[i][j];
                }
            }
            r
        };
        let entering = (0..n + m)
            .filter(|j| !basis.contains(j))
            .find(|&j| reduced(j, &t, &basis).is_negative());
        let Some(j) = entering else { break };
        let mut leave: Option<(usize, Rational)> = None;
        for i in 0..m {
            if t[i][j].is_positive() {
                let ratio = &t[i][rhs] / &t[i][j];
                let better = match &leave {
                    None => true,
                    Some((li, lr)) => ratio < *lr || (ratio == *lr && basis[i] < basis[*li]),
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
        }
        // Phase one is bounded below by zero, so a leaving row always exists.
        let (p, _) = leave?;
        let inv = t[p][j].recip();
        for v in t[p].iter_mut() {
            *v *= &inv;
        }
        for r in 0..m {
            if r != p && !t[r][j].is_zero() {
                let f = t[r][j].clone();
                for c in 0..width {
                    let delta = &f * &t[p][c];
                    t[r][c] -= delta;
                }
            }
        }
        basis[p] = j;
    }

    let infeasibility: Rational = basis
        .iter()
        .enumerate()
        .filter(|(_, &bj)| bj >= n)
        .map(|(i, _)| t[i][rhs].clone())
        .sum();
    if !infeasibility.is_zero() {
        return None;
    }
    let mut x = vec![Rational::zero(); n];
    for (i, &bj) in basis.iter().enumerate() {
        if bj < n {
            x[bj] = t[i][rhs].clone();
        }
    }
    Some(x)
}
