//! Dense exact Gaussian elimination over `Q`.
#![allow(clippy::needless_range_loop)]

use num_traits::{One, Zero};

use crate::rational::{Point, Rational};

/// Determinant of a square matrix given as rows.
pub fn det(rows: &[Point]) -> Rational {
    let n = rows.len();
    let mut m: Vec<Point> = rows.to_vec();
    let mut result = Rational::one();
    for col in 0..n {
        let Some(pivot) = (col..n).find(|&r| !m[r][col].is_zero()) else {
            return Rational::zero();
        };
        if pivot != col {
            m.swap(pivot, col);
            result = -result;
        }
        let p = m[col][col].clone();
        result *= &p;
        for r in col + 1..n {
            if m[r][col].is_zero() {
                continue;
            }
            let factor = &m[r][col] / &p;
            for c in col..n {
                let delta = &factor * &m[col][c];
                m[r][c] -= delta;
            }
        }
    }
    result
}

/// Reduced row echelon form in place; returns the pivot columns.
pub fn rref(m: &mut [Point]) -> Vec<usize> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(p, r);
        let inv = m[r][c].recip();
        for x in m[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..rows {
            if i == r || m[i][c].is_zero() {
                continue;
            }
            let factor = m[i][c].clone();
            for j in c..cols {
                let delta = &factor * &m[r][j];
                m[i][j] -= delta;
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank(rows: &[Point]) -> usize {
    let mut m = rows.to_vec();
    rref(&mut m).len()
}

/// Basis of `{x : rows * x = 0}`.
pub fn nullspace(rows: &[Point], cols: usize) -> Vec<Point> {
    let mut m = rows.to_vec();
    let pivots = rref(&mut m);
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![Rational::zero(); cols];
            v[f] = Rational::one();
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = -m[r][f].clone();
            }
            v
        })
        .collect()
}

/// Solves `a x = b` for square non-singular `a`; `None` when singular.
pub fn solve(a: &[Point], b: &[Rational]) -> Option<Point> {
    let n = a.len();
    let mut m: Vec<Point> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    let pivots = rref(&mut m);
    if pivots.len() < n || pivots.iter().enumerate().any(|(i, &p)| i != p) {
        return None;
    }
    Some(m.into_iter().map(|mut row| row.pop().unwrap()).collect())
}

pub fn transpose(rows: &[Point]) -> Vec<Point> {
    let cols = rows.first().map_or(0, Vec::len);
    (0..cols).map(|c| rows.iter().map(|r| r[c].clone()).collect()).collect()
}

/// Dimension of the affine hull of `points` (-1 for the empty set is reported as `None`).
pub fn affine_dim(points: &[Point]) -> Option<usize> {
    let (first, rest) = points.split_first()?;
    let diffs: Vec<Point> = rest.iter().map(|p| crate::rational::sub(p, first)).collect();
    Some(rank(&diffs))
}
