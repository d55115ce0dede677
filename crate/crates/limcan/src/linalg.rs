//! Dense exact linear algebra over ℚ: reduced row-echelon form, rank, kernels and solves.
//!
//! Matrices are plain `Vec<Vec<Q>>` in row-major order. Every routine is exact; pivots are the
//! first nonzero entry in each column scan, so results are canonical and comparable with `==`.

use num_traits::{One, Zero};

use crate::rat::Q;

pub type Matrix = Vec<Vec<Q>>;

/// Reduced row-echelon form. Returns the nonzero rows and their pivot columns.
pub fn rref(m: &[Vec<Q>], ncols: usize) -> (Matrix, Vec<usize>) {
    let mut a: Matrix = m.to_vec();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == a.len() {
            break;
        }
        let Some(p) = (r..a.len()).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let inv = Q::one() / &a[r][c];
        if !inv.is_one() {
            for x in a[r].iter_mut().skip(c) {
                *x *= &inv;
            }
        }
        let pivot_row = a[r].clone();
        for (i, row) in a.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (x, y) in row.iter_mut().zip(&pivot_row).skip(c) {
                if !y.is_zero() {
                    *x -= &f * y;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    a.truncate(r);
    (a, pivots)
}

/// Rank of a matrix with `ncols` columns.
pub fn rank(m: &[Vec<Q>], ncols: usize) -> usize {
    // Plain forward elimination; cheaper than a full rref.
    let mut a: Matrix = m.to_vec();
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..a.len()).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let pivot_row = a[r].clone();
        for row in a.iter_mut().skip(r + 1) {
            if row[c].is_zero() {
                continue;
            }
            let f = &row[c] / &pivot_row[c];
            for (x, y) in row.iter_mut().zip(&pivot_row).skip(c) {
                if !y.is_zero() {
                    *x -= &f * y;
                }
            }
        }
        r += 1;
        if r == a.len() {
            break;
        }
    }
    r
}

/// Basis of `{x : m·x = 0}` in reduced row-echelon form.
pub fn kernel(m: &[Vec<Q>], ncols: usize) -> Matrix {
    let (r, pivots) = rref(m, ncols);
    let mut is_pivot = vec![false; ncols];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    let mut basis = Vec::new();
    for free in (0..ncols).filter(|&c| !is_pivot[c]) {
        let mut v = vec![Q::zero(); ncols];
        v[free] = Q::one();
        for (row, &p) in r.iter().zip(&pivots) {
            v[p] = -row[free].clone();
        }
        basis.push(v);
    }
    rref(&basis, ncols).0
}

/// One solution of `a·x = b`, or `None` if inconsistent.
pub fn solve(a: &[Vec<Q>], b: &[Q], ncols: usize) -> Option<Vec<Q>> {
    let aug: Matrix = a
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            let mut r = row.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    let (r, pivots) = rref(&aug, ncols + 1);
    if pivots.last() == Some(&ncols) {
        return None;
    }
    let mut x = vec![Q::zero(); ncols];
    for (row, &p) in r.iter().zip(&pivots) {
        x[p] = row[ncols].clone();
    }
    Some(x)
}

/// Determinant of a square matrix.
pub fn det(m: &[Vec<Q>]) -> Q {
    let n = m.len();
    let mut a: Matrix = m.to_vec();
    let mut d = Q::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !a[i][c].is_zero()) else {
            return Q::zero();
        };
        if p != c {
            a.swap(p, c);
            d = -d;
        }
        d *= &a[c][c];
        let pivot_row = a[c].clone();
        for row in a.iter_mut().skip(c + 1) {
            if row[c].is_zero() {
                continue;
            }
            let f = &row[c] / &pivot_row[c];
            for (x, y) in row.iter_mut().zip(&pivot_row).skip(c) {
                *x -= &f * y;
            }
        }
    }
    d
}

/// Columns `cols` of `m`, in the given order.
pub fn select_cols(m: &[Vec<Q>], cols: &[usize]) -> Matrix {
    m.iter()
        .map(|row| cols.iter().map(|&c| row[c].clone()).collect())
        .collect()
}

/// Matrix product `a·b`.
pub fn mul(a: &[Vec<Q>], b: &[Vec<Q>], bcols: usize) -> Matrix {
    a.iter()
        .map(|row| {
            (0..bcols)
                .map(|j| {
                    row.iter()
                        .zip(b)
                        .filter(|(x, _)| !x.is_zero())
                        .fold(Q::zero(), |acc, (x, brow)| acc + x * &brow[j])
                })
                .collect()
        })
        .collect()
}

/// `m·v`.
pub fn mul_vec(m: &[Vec<Q>], v: &[Q]) -> Vec<Q> {
    m.iter().map(|row| dot(row, v)).collect()
}

pub fn dot(a: &[Q], b: &[Q]) -> Q {
    a.iter()
        .zip(b)
        .filter(|(x, y)| !x.is_zero() && !y.is_zero())
        .fold(Q::zero(), |acc, (x, y)| acc + x * y)
}

pub fn transpose(m: &[Vec<Q>], ncols: usize) -> Matrix {
    (0..ncols)
        .map(|j| m.iter().map(|row| row[j].clone()).collect())
        .collect()
}

/// Rows of `basis` combined by the coefficient rows of `coeffs`.
pub fn combine(coeffs: &[Vec<Q>], basis: &[Vec<Q>], ncols: usize) -> Matrix {
    mul(coeffs, basis, ncols)
}

/// The subspace of `rowspace(basis)` on which all `constraints` (as linear forms) vanish.
pub fn restrict(basis: &[Vec<Q>], constraints: &[Vec<Q>], ncols: usize) -> Matrix {
    if basis.is_empty() || constraints.is_empty() {
        return rref(basis, ncols).0;
    }
    // y·B must satisfy C·(y·B)ᵀ = 0, i.e. (C·Bᵀ)·yᵀ = 0.
    let bt = transpose(basis, ncols);
    let cb = mul(constraints, &bt, basis.len());
    let ys = kernel(&cb, basis.len());
    rref(&combine(&ys, basis, ncols), ncols).0
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{q, qr};

    fn m(rows: &[&[i64]]) -> Matrix {
        rows.iter().map(|r| r.iter().map(|&x| q(x)).collect()).collect()
    }

    #[test]
    fn kernel_of_rank_one() {
        let a = m(&[&[1, 1, 1], &[2, 2, 2]]);
        assert_eq!(rank(&a, 3), 1);
        let k = kernel(&a, 3);
        assert_eq!(k.len(), 2);
        for v in &k {
            assert!(mul_vec(&a, v).iter().all(Zero::is_zero));
        }
    }

    #[test]
    fn solve_and_det() {
        let a = m(&[&[2, 1], &[1, 3]]);
        assert_eq!(det(&a), q(5));
        let x = solve(&a, &[q(3), q(5)], 2).unwrap();
        assert_eq!(x, vec![qr(4, 5), qr(7, 5)]);
        assert!(solve(&m(&[&[1, 1], &[1, 1]]), &[q(0), q(1)], 2).is_none());
    }

    #[test]
    fn restrict_to_hyperplane() {
        let basis = m(&[&[1, 0, 0], &[0, 1, 0]]);
        let c = m(&[&[1, 1, 0]]);
        let r = restrict(&basis, &c, 3);
        assert_eq!(r, m(&[&[1, -1, 0]]));
    }
}
