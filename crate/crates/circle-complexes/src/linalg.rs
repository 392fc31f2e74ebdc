//! Small dense linear algebra, generic over the scalar so the same routines
//! serve both the floating-point and the exact-rational paths. Matrices here
//! are tiny (at most 18×10), so plain Gaussian elimination is all we need.

use crate::scalar::Scalar;
use nalgebra::DMatrix;

pub type Mat<S> = Vec<Vec<S>>;

pub fn mat_mul<S: Scalar>(a: &Mat<S>, b: &Mat<S>) -> Mat<S> {
    let n = a.len();
    let m = b[0].len();
    let k = b.len();
    let mut out = vec![vec![S::zero(); m]; n];
    for i in 0..n {
        for j in 0..m {
            let mut acc = S::zero();
            for l in 0..k {
                acc = acc + a[i][l].clone() * b[l][j].clone();
            }
            out[i][j] = acc;
        }
    }
    out
}

pub fn mat_vec<S: Scalar>(a: &Mat<S>, x: &[S]) -> Vec<S> {
    a.iter()
        .map(|row| {
            let mut acc = S::zero();
            for (c, v) in row.iter().zip(x) {
                acc = acc + c.clone() * v.clone();
            }
            acc
        })
        .collect()
}

pub fn transpose<S: Scalar>(a: &Mat<S>) -> Mat<S> {
    let n = a.len();
    let m = a[0].len();
    let mut out = vec![vec![S::zero(); n]; m];
    for i in 0..n {
        for j in 0..m {
            out[j][i] = a[i][j].clone();
        }
    }
    out
}

/// Determinant by elimination with (magnitude) pivoting.
pub fn det<S: Scalar>(m: &Mat<S>) -> S {
    let n = m.len();
    let mut a: Mat<S> = m.to_vec();
    let mut sign_flip = false;
    let mut result = S::one();
    for col in 0..n {
        let pivot = (col..n).max_by(|&i, &j| {
            a[i][col]
                .mag()
                .partial_cmp(&a[j][col].mag())
                .unwrap_or(std::cmp::Ordering::Equal)
        });
        let p = match pivot {
            Some(p) if !a[p][col].is_zero() => p,
            _ => return S::zero(),
        };
        if p != col {
            a.swap(p, col);
            sign_flip = !sign_flip;
        }
        let pv = a[col][col].clone();
        result = result * pv.clone();
        for row in col + 1..n {
            if a[row][col].is_zero() {
                continue;
            }
            let factor = a[row][col].clone() / pv.clone();
            for c in col..n {
                let delta = factor.clone() * a[col][c].clone();
                a[row][c] = a[row][c].clone() - delta;
            }
        }
    }
    if sign_flip {
        -result
    } else {
        result
    }
}

/// Solve `A x = b` for square nonsingular `A`. Returns `None` when a pivot
/// degenerates (exactly zero in exact mode, below `tol` relative in floats).
pub fn solve<S: Scalar>(m: &Mat<S>, b: &[S], tol: f64) -> Option<Vec<S>> {
    let n = m.len();
    let mut a: Mat<S> = m
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    let scale = a
        .iter()
        .flat_map(|r| r.iter())
        .map(|v| v.mag())
        .fold(0.0, f64::max)
        .max(1.0);
    for col in 0..n {
        let p = (col..n).max_by(|&i, &j| {
            a[i][col]
                .mag()
                .partial_cmp(&a[j][col].mag())
                .unwrap_or(std::cmp::Ordering::Equal)
        })?;
        if a[p][col].is_zero() || (!S::EXACT && a[p][col].mag() < tol * scale) {
            return None;
        }
        a.swap(p, col);
        let pv = a[col][col].clone();
        for row in 0..n {
            if row == col || a[row][col].is_zero() {
                continue;
            }
            let factor = a[row][col].clone() / pv.clone();
            for c in col..=n {
                let delta = factor.clone() * a[col][c].clone();
                a[row][c] = a[row][c].clone() - delta;
            }
        }
    }
    Some(
        (0..n)
            .map(|i| a[i][n].clone() / a[i][i].clone())
            .collect(),
    )
}

/// Exact kernel basis via reduced row echelon form. The `rows × cols` input
/// may be rectangular; returns `(rank, basis of the null space)`.
pub fn null_space_exact<S: Scalar>(m: &Mat<S>) -> (usize, Vec<Vec<S>>) {
    let rows = m.len();
    if rows == 0 {
        return (0, Vec::new());
    }
    let cols = m[0].len();
    let mut a = m.to_vec();
    let mut pivot_cols = Vec::new();
    let mut r = 0usize;
    for c in 0..cols {
        let p = (r..rows).max_by(|&i, &j| {
            a[i][c]
                .mag()
                .partial_cmp(&a[j][c].mag())
                .unwrap_or(std::cmp::Ordering::Equal)
        });
        let p = match p {
            Some(p) if !a[p][c].is_zero() => p,
            _ => continue,
        };
        a.swap(p, r);
        let pv = a[r][c].clone();
        for col in c..cols {
            a[r][col] = a[r][col].clone() / pv.clone();
        }
        for row in 0..rows {
            if row == r || a[row][c].is_zero() {
                continue;
            }
            let factor = a[row][c].clone();
            for col in c..cols {
                let delta = factor.clone() * a[r][col].clone();
                a[row][col] = a[row][col].clone() - delta;
            }
        }
        pivot_cols.push(c);
        r += 1;
        if r == rows {
            break;
        }
    }
    let rank = pivot_cols.len();
    let mut basis = Vec::new();
    for free in 0..cols {
        if pivot_cols.contains(&free) {
            continue;
        }
        let mut v = vec![S::zero(); cols];
        v[free] = S::one();
        for (row, &pc) in pivot_cols.iter().enumerate() {
            v[pc] = -a[row][free].clone();
        }
        basis.push(v);
    }
    (rank, basis)
}

/// Exact rank of a rectangular matrix.
pub fn rank_exact<S: Scalar>(m: &Mat<S>) -> usize {
    null_space_exact(m).0
}

/// Rank-revealing kernel extraction, dispatched on the scalar: SVD for
/// floats, exact row reduction for rationals.
pub trait Kernel: Scalar {
    /// Returns `(rank, gap_ratio, kernel basis)`. The gap ratio measures how
    /// confidently the numerical rank is separated; exact scalars report ∞.
    fn kernel(m: &Mat<Self>) -> (usize, f64, Vec<Vec<Self>>);
}

impl Kernel for f64 {
    fn kernel(m: &Mat<Self>) -> (usize, f64, Vec<Vec<f64>>) {
        null_space_svd(m, 1e-11)
    }
}

impl Kernel for num::BigRational {
    fn kernel(m: &Mat<Self>) -> (usize, f64, Vec<Vec<Self>>) {
        let (rank, basis) = null_space_exact(m);
        (rank, f64::INFINITY, basis)
    }
}

/// SVD-based kernel for the float path. Returns `(rank, gap_ratio, basis)`
/// where `gap_ratio` is the jump between the smallest kept and the largest
/// dropped singular value; a confident rank decision has a large ratio.
pub fn null_space_svd(m: &Mat<f64>, rel_tol: f64) -> (usize, f64, Vec<Vec<f64>>) {
    let rows = m.len();
    let cols = m[0].len();
    // Pad wide matrices with zero rows: the thin SVD of an r×c matrix with
    // r < c does not carry the kernel directions in V^T.
    let rows_eff = rows.max(cols);
    let a = DMatrix::from_fn(rows_eff, cols, |i, j| if i < rows { m[i][j] } else { 0.0 });
    let svd = a.svd(false, true);
    let vt = svd.v_t.expect("SVD requested with V^T");
    let mut sv: Vec<f64> = svd.singular_values.iter().copied().collect();
    sv.resize(cols, 0.0);
    let smax = sv.iter().copied().fold(0.0, f64::max).max(f64::MIN_POSITIVE);
    let rank = sv.iter().filter(|&&s| s > rel_tol * smax).count();
    let gap = if rank == 0 || rank >= cols {
        f64::INFINITY
    } else {
        let kept = sv[rank - 1];
        let dropped = sv[rank].max(f64::MIN_POSITIVE * smax).max(1e-300);
        kept / dropped
    };
    let basis = (rank..cols.min(vt.nrows()))
        .map(|k| vt.row(k).iter().copied().collect())
        .collect();
    (rank, gap, basis)
}
