//! Exact linear algebra over the rationals.
//!
//! Matrices are row-major `Vec<Vec<Rational>>`. Everything here is plain
//! Gauss-Jordan elimination; sizes in this crate stay small (tens of rows).

use num_traits::{One, Zero};

use crate::rational::Rational;

pub type RMatrix = Vec<Vec<Rational>>;

pub fn zeros(rows: usize, cols: usize) -> RMatrix {
    vec![vec![Rational::zero(); cols]; rows]
}

pub fn identity(n: usize) -> RMatrix {
    let mut m = zeros(n, n);
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = Rational::one();
    }
    m
}

pub fn transpose(m: &RMatrix) -> RMatrix {
    let cols = m.first().map_or(0, Vec::len);
    (0..cols)
        .map(|j| m.iter().map(|row| row[j].clone()).collect())
        .collect()
}

pub fn mat_vec(m: &RMatrix, v: &[Rational]) -> Vec<Rational> {
    m.iter()
        .map(|row| {
            row.iter()
                .zip(v)
                .fold(Rational::zero(), |acc, (a, b)| acc + a * b)
        })
        .collect()
}

pub fn mat_mul(a: &RMatrix, b: &RMatrix) -> RMatrix {
    let inner = b.len();
    let cols = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| {
                    (0..inner).fold(Rational::zero(), |acc, k| acc + &row[k] * &b[k][j])
                })
                .collect()
        })
        .collect()
}

pub fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter()
        .zip(b)
        .fold(Rational::zero(), |acc, (x, y)| acc + x * y)
}

/// Reduced row echelon form in place; returns the pivot columns.
pub fn rref(m: &mut RMatrix) -> Vec<usize> {
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
        m.swap(r, p);
        let inv = Rational::one() / &m[r][c];
        for x in m[r].iter_mut() {
            *x *= &inv;
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

pub fn rank(m: &RMatrix) -> usize {
    let mut work = m.clone();
    rref(&mut work).len()
}

/// Basis of `{x : m x = 0}`.
pub fn nullspace(m: &RMatrix, cols: usize) -> Vec<Vec<Rational>> {
    let mut work = m.clone();
    let pivots = rref(&mut work);
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![Rational::zero(); cols];
            v[f] = Rational::one();
            for (row, &pc) in pivots.iter().enumerate() {
                v[pc] = -work[row][f].clone();
            }
            v
        })
        .collect()
}

/// Solves `m x = b`; `None` when the system is inconsistent. Free variables
/// are set to zero.
pub fn solve(m: &RMatrix, b: &[Rational]) -> Option<Vec<Rational>> {
    let cols = m.first().map_or(0, Vec::len);
    let mut aug: RMatrix = m
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    let pivots = rref(&mut aug);
    if pivots.contains(&cols) {
        return None;
    }
    let mut x = vec![Rational::zero(); cols];
    for (row, &pc) in pivots.iter().enumerate() {
        x[pc] = aug[row][cols].clone();
    }
    Some(x)
}

pub fn inverse(m: &RMatrix) -> Option<RMatrix> {
    let n = m.len();
    let mut aug: RMatrix = m
        .iter()
        .zip(identity(n))
        .map(|(row, id)| row.iter().cloned().chain(id).collect())
        .collect();
    let pivots = rref(&mut aug);
    if pivots.len() < n || pivots[n - 1] >= n {
        return None;
    }
    Some(aug.into_iter().map(|row| row[n..].to_vec()).collect())
}

/// True when the row space of `rows` annihilates exactly `ker q`, i.e. the
/// common kernel of the covectors equals the kernel of `q` (both `cols` wide).
pub fn common_kernel_equals(rows: &RMatrix, q: &RMatrix, cols: usize) -> bool {
    let ker_q = nullspace(q, cols);
    let annihilates = rows
        .iter()
        .all(|r| ker_q.iter().all(|v| dot(r, v).is_zero()));
    annihilates && rank(rows) == rank(q)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, int};

    fn m(rows: &[&[i64]]) -> RMatrix {
        rows.iter()
            .map(|r| r.iter().map(|&x| int(x)).collect())
            .collect()
    }

    #[test]
    fn rank_and_nullspace() {
        let a = m(&[&[1, 2, 3], &[2, 4, 6], &[0, 1, 1]]);
        assert_eq!(rank(&a), 2);
        let ns = nullspace(&a, 3);
        assert_eq!(ns.len(), 1);
        assert!(mat_vec(&a, &ns[0]).iter().all(Zero::is_zero));
    }

    #[test]
    fn solve_consistent_and_inconsistent() {
        let a = m(&[&[1, 0], &[0, 2]]);
        assert_eq!(solve(&a, &[int(3), int(1)]).unwrap(), vec![int(3), frac(1, 2)]);
        let b = m(&[&[1, 1], &[1, 1]]);
        assert!(solve(&b, &[int(1), int(2)]).is_none());
    }

    #[test]
    fn inverse_of_diagonal() {
        let a = m(&[&[1, 0, 0], &[0, 2, 0], &[0, 0, 3]]);
        let inv = inverse(&a).unwrap();
        assert_eq!(mat_mul(&a, &inv), identity(3));
        assert!(inverse(&m(&[&[1, 1], &[2, 2]])).is_none());
    }

    #[test]
    fn kernel_comparison() {
        let q = m(&[&[1, 0]]);
        assert!(common_kernel_equals(&m(&[&[2, 0]]), &q, 2));
        assert!(!common_kernel_equals(&m(&[&[0, 1]]), &q, 2));
        assert!(!common_kernel_equals(&m(&[&[1, 0], &[0, 1]]), &q, 2));
    }
}
