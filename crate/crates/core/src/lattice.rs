//! Exact integer linear algebra: determinants, ranks, convex-position
//! predicates over Q, and unimodular diagonalization of integer matrices.

use itertools::Itertools;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Determinant of a square integer matrix by fraction-free (Bareiss)
/// elimination. Exact as long as intermediates fit in i128, which holds for
/// the small edge-direction matrices this crate produces.
pub fn det_i128(m: &[Vec<i64>]) -> i128 {
    let n = m.len();
    if n == 0 {
        return 1;
    }
    debug_assert!(m.iter().all(|r| r.len() == n));
    let mut a: Vec<Vec<i128>> = m
        .iter()
        .map(|r| r.iter().map(|&x| x as i128).collect())
        .collect();
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n - 1 {
        if a[k][k] == 0 {
            let Some(p) = (k + 1..n).find(|&i| a[i][k] != 0) else {
                return 0;
            };
            a.swap(k, p);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (a[k][k] * a[i][j] - a[i][k] * a[k][j]) / prev;
            }
            a[i][k] = 0;
        }
        prev = a[k][k];
    }
    sign * a[n - 1][n - 1]
}

fn to_rational_rows(rows: &[Vec<i64>]) -> Vec<Vec<BigRational>> {
    rows.iter()
        .map(|r| {
            r.iter()
                .map(|&x| BigRational::from_integer(BigInt::from(x)))
                .collect()
        })
        .collect()
}

fn rational_rank(mut m: Vec<Vec<BigRational>>) -> usize {
    if m.is_empty() {
        return 0;
    }
    let cols = m[0].len();
    let mut rank = 0;
    let mut row = 0;
    for col in 0..cols {
        let Some(p) = (row..m.len()).find(|&i| !m[i][col].is_zero()) else {
            continue;
        };
        m.swap(row, p);
        let pivot = m[row][col].clone();
        for i in row + 1..m.len() {
            if m[i][col].is_zero() {
                continue;
            }
            let factor = &m[i][col] / &pivot;
            for j in col..cols {
                let t = &m[row][j] * &factor;
                m[i][j] = &m[i][j] - t;
            }
        }
        rank += 1;
        row += 1;
        if row == m.len() {
            break;
        }
    }
    rank
}

/// Rank over Q of a set of integer row vectors.
pub fn rank_int(rows: &[Vec<i64>]) -> usize {
    rational_rank(to_rational_rows(rows))
}

/// Solves M·λ = rhs exactly over Q when M has full column rank, returning
/// `None` when the system is inconsistent or the columns are dependent.
fn solve_exact(columns: &[Vec<BigRational>], rhs: &[BigRational]) -> Option<Vec<BigRational>> {
    let rows = rhs.len();
    let cols = columns.len();
    debug_assert!(columns.iter().all(|c| c.len() == rows));
    // augmented row-major matrix [M | rhs]
    let mut m: Vec<Vec<BigRational>> = (0..rows)
        .map(|i| {
            let mut r: Vec<BigRational> = columns.iter().map(|c| c[i].clone()).collect();
            r.push(rhs[i].clone());
            r
        })
        .collect();
    let mut pivot_rows: Vec<usize> = Vec::with_capacity(cols);
    let mut row = 0;
    for col in 0..cols {
        let Some(p) = (row..rows).find(|&i| !m[i][col].is_zero()) else {
            return None; // dependent columns
        };
        m.swap(row, p);
        let pivot = m[row][col].clone();
        for i in 0..rows {
            if i == row || m[i][col].is_zero() {
                continue;
            }
            let factor = &m[i][col] / &pivot;
            for j in col..=cols {
                let t = &m[row][j] * &factor;
                m[i][j] = &m[i][j] - t;
            }
        }
        pivot_rows.push(row);
        row += 1;
    }
    // consistency: zero rows of M must carry zero rhs
    for i in row..rows {
        if !m[i][cols].is_zero() {
            return None;
        }
    }
    let mut sol = vec![BigRational::zero(); cols];
    for (col, &r) in pivot_rows.iter().enumerate() {
        sol[col] = &m[r][cols] / &m[r][col];
    }
    Some(sol)
}

/// Exact test for x ∈ conv(pts) with integer coordinates.
///
/// Enumerates affinely independent subsets of size ≤ dim+1 (Carathéodory)
/// and solves the barycentric system over Q. Intended for the small point
/// sets that arise as supports of exponential polynomials.
pub fn point_in_conv(x: &[i64], pts: &[Vec<i64>]) -> bool {
    let d = x.len();
    if pts.is_empty() {
        return false;
    }
    // cheap bounding-box reject
    for j in 0..d {
        let lo = pts.iter().map(|p| p[j]).min().unwrap();
        let hi = pts.iter().map(|p| p[j]).max().unwrap();
        if x[j] < lo || x[j] > hi {
            return false;
        }
    }
    if pts.iter().any(|p| p.as_slice() == x) {
        return true;
    }
    let rhs: Vec<BigRational> = x
        .iter()
        .map(|&v| BigRational::from_integer(BigInt::from(v)))
        .chain(std::iter::once(BigRational::one()))
        .collect();
    let lifted: Vec<Vec<BigRational>> = pts
        .iter()
        .map(|p| {
            p.iter()
                .map(|&v| BigRational::from_integer(BigInt::from(v)))
                .chain(std::iter::once(BigRational::one()))
                .collect()
        })
        .collect();
    let max_size = (d + 1).min(pts.len());
    for size in 2..=max_size {
        for subset in (0..pts.len()).combinations(size) {
            let cols: Vec<Vec<BigRational>> =
                subset.iter().map(|&i| lifted[i].clone()).collect();
            if let Some(sol) = solve_exact(&cols, &rhs) {
                if sol.iter().all(|l| !l.is_negative()) {
                    return true;
                }
            }
        }
    }
    false
}

/// A diagonalization R·C·S = diag(d) with unimodular R and S.
///
/// This is the computational core of the Smith normal form; the divisibility
/// chain is not needed for solving modular systems, so it is not enforced.
#[derive(Debug, Clone)]
pub struct Diagonalization {
    pub diag: Vec<i128>,
    /// Row transform R (left factor), unimodular.
    pub row_ops: Vec<Vec<i128>>,
    /// Column transform S (right factor), unimodular.
    pub col_ops: Vec<Vec<i128>>,
}

/// Diagonalizes a square integer matrix by unimodular row and column
/// operations (gcd reduction), returning R, S with R·C·S diagonal and the
/// diagonal made nonnegative.
pub fn unimodular_diagonalize(c: &[Vec<i64>]) -> Diagonalization {
    let n = c.len();
    debug_assert!(c.iter().all(|r| r.len() == n));
    let mut m: Vec<Vec<i128>> = c
        .iter()
        .map(|r| r.iter().map(|&x| x as i128).collect())
        .collect();
    let mut r: Vec<Vec<i128>> = identity(n);
    let mut s: Vec<Vec<i128>> = identity(n);

    for t in 0..n {
        loop {
            // smallest nonzero entry in the trailing block becomes the pivot
            let mut pivot: Option<(usize, usize)> = None;
            for i in t..n {
                for j in t..n {
                    if m[i][j] != 0
                        && pivot.map_or(true, |(pi, pj)| m[i][j].abs() < m[pi][pj].abs())
                    {
                        pivot = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = pivot else {
                break; // trailing block is zero
            };
            if pi != t {
                m.swap(pi, t);
                r.swap(pi, t);
            }
            if pj != t {
                swap_cols(&mut m, pj, t);
                swap_cols(&mut s, pj, t);
            }
            let mut clean = true;
            for i in t + 1..n {
                if m[i][t] != 0 {
                    let q = div_round(m[i][t], m[t][t]);
                    if q != 0 {
                        row_sub(&mut m, i, t, q);
                        row_sub(&mut r, i, t, q);
                    }
                    if m[i][t] != 0 {
                        clean = false;
                    }
                }
            }
            for j in t + 1..n {
                if m[t][j] != 0 {
                    let q = div_round(m[t][j], m[t][t]);
                    if q != 0 {
                        col_sub(&mut m, j, t, q);
                        col_sub(&mut s, j, t, q);
                    }
                    if m[t][j] != 0 {
                        clean = false;
                    }
                }
            }
            if clean && (t + 1..n).all(|i| m[i][t] == 0) && (t + 1..n).all(|j| m[t][j] == 0) {
                break;
            }
        }
        if m[t][t] < 0 {
            for x in m[t].iter_mut() {
                *x = -*x;
            }
            for x in r[t].iter_mut() {
                *x = -*x;
            }
        }
    }

    Diagonalization {
        diag: (0..n).map(|i| m[i][i]).collect(),
        row_ops: r,
        col_ops: s,
    }
}

fn identity(n: usize) -> Vec<Vec<i128>> {
    (0..n)
        .map(|i| (0..n).map(|j| i128::from(i == j)).collect())
        .collect()
}

fn swap_cols(m: &mut [Vec<i128>], a: usize, b: usize) {
    for row in m.iter_mut() {
        row.swap(a, b);
    }
}

fn row_sub(m: &mut [Vec<i128>], i: usize, t: usize, q: i128) {
    for j in 0..m[i].len() {
        m[i][j] -= q * m[t][j];
    }
}

fn col_sub(m: &mut [Vec<i128>], j: usize, t: usize, q: i128) {
    for row in m.iter_mut() {
        let v = row[t];
        row[j] -= q * v;
    }
}

/// Rounded integer division, minimizing the remainder magnitude.
fn div_round(a: i128, b: i128) -> i128 {
    let q = a / b;
    let rem = a - q * b;
    if 2 * rem.abs() > b.abs() {
        q + rem.signum() * b.signum()
    } else {
        q
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn det_small_cases() {
        assert_eq!(det_i128(&[vec![1, 0], vec![0, 1]]), 1);
        assert_eq!(det_i128(&[vec![1, 1], vec![0, -1]]), -1);
        assert_eq!(det_i128(&[vec![2, 0], vec![0, 3]]), 6);
        assert_eq!(det_i128(&[vec![1, 2], vec![2, 4]]), 0);
        assert_eq!(
            det_i128(&[vec![1, 2, 3], vec![4, 5, 6], vec![7, 8, 10]]),
            -3
        );
    }

    #[test]
    fn rank_of_rows() {
        assert_eq!(rank_int(&[vec![1, 0], vec![0, 1]]), 2);
        assert_eq!(rank_int(&[vec![2, 4], vec![1, 2]]), 1);
        assert_eq!(rank_int(&[vec![0, 0]]), 0);
    }

    #[test]
    fn membership_triangle() {
        let pts = vec![vec![0, 0], vec![4, 0], vec![0, 4]];
        assert!(point_in_conv(&[1, 1], &pts));
        assert!(point_in_conv(&[2, 2], &pts)); // on the hypotenuse
        assert!(point_in_conv(&[0, 0], &pts));
        assert!(!point_in_conv(&[3, 3], &pts));
        assert!(!point_in_conv(&[-1, 0], &pts));
    }

    #[test]
    fn membership_segment_in_3d() {
        let pts = vec![vec![0, 0, 0], vec![2, 2, 2]];
        assert!(point_in_conv(&[1, 1, 1], &pts));
        assert!(!point_in_conv(&[1, 1, 0], &pts));
    }

    #[test]
    fn diagonalization_reconstructs() {
        let cases = vec![
            vec![vec![2, 1], vec![0, 3]],
            vec![vec![1, 0], vec![0, 1]],
            vec![vec![4, 6], vec![2, 8]],
            vec![vec![3, 1, 2], vec![0, 2, -1], vec![1, 1, 1]],
        ];
        for c in cases {
            let n = c.len();
            let d = unimodular_diagonalize(&c);
            // R·C·S must equal diag(d)
            let mut rc = vec![vec![0i128; n]; n];
            for i in 0..n {
                for j in 0..n {
                    for k in 0..n {
                        rc[i][j] += d.row_ops[i][k] * c[k][j] as i128;
                    }
                }
            }
            let mut rcs = vec![vec![0i128; n]; n];
            for i in 0..n {
                for j in 0..n {
                    for k in 0..n {
                        rcs[i][j] += rc[i][k] * d.col_ops[k][j];
                    }
                }
            }
            for i in 0..n {
                for j in 0..n {
                    let want = if i == j { d.diag[i] } else { 0 };
                    assert_eq!(rcs[i][j], want, "entry ({i},{j}) of {c:?}");
                }
            }
            let prod: i128 = d.diag.iter().product();
            let det = det_i128(&c.iter().map(|r| r.to_vec()).collect::<Vec<_>>());
            assert_eq!(prod.abs(), det.abs());
        }
    }
}
