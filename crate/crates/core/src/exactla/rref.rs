use super::Matrix;
use crate::error::{FrobError, Result};

/// Output of Gauss-Jordan elimination: `transform * input = reduced`.
#[derive(Clone, Debug)]
pub struct Rref {
    pub reduced: Matrix,
    pub pivots: Vec<usize>,
    pub rank: usize,
    pub transform: Matrix,
}

fn eliminate(m: &Matrix, track: bool) -> (Matrix, Vec<usize>, Option<Matrix>) {
    let f = m.field();
    let (rows, cols) = (m.rows(), m.cols());
    let mut a = m.clone();
    let mut t = if track {
        Some(Matrix::identity(f, rows))
    } else {
        None
    };
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(pr) = (r..rows).find(|&i| a.get(i, c) != 0) else {
            continue;
        };
        if pr != r {
            swap_rows(&mut a, pr, r);
            if let Some(t) = t.as_mut() {
                swap_rows(t, pr, r);
            }
        }
        let inv = f.inv(a.get(r, c));
        scale_row(&mut a, r, inv);
        if let Some(t) = t.as_mut() {
            scale_row(t, r, inv);
        }
        for i in 0..rows {
            if i == r {
                continue;
            }
            let factor = a.get(i, c);
            if factor != 0 {
                let neg = f.neg(factor);
                axpy_row(&mut a, i, r, neg, c);
                if let Some(t) = t.as_mut() {
                    axpy_row(t, i, r, neg, 0);
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    (a, pivots, t)
}

fn swap_rows(m: &mut Matrix, i: usize, j: usize) {
    if i == j {
        return;
    }
    let cols = m.cols();
    let (lo, hi) = if i < j { (i, j) } else { (j, i) };
    let data = m.data_mut();
    let (head, tail) = data.split_at_mut(hi * cols);
    head[lo * cols..(lo + 1) * cols].swap_with_slice(&mut tail[..cols]);
}

fn scale_row(m: &mut Matrix, i: usize, c: u32) {
    let f = m.field();
    for x in m.row_mut(i) {
        *x = f.mul(*x, c);
    }
}

/// row_i += c * row_src, touching only columns >= start.
fn axpy_row(m: &mut Matrix, i: usize, src: usize, c: u32, start: usize) {
    let f = m.field();
    let p = f.p() as u64;
    let cols = m.cols();
    let data = m.data_mut();
    let (di, ds) = if i < src {
        let (h, t) = data.split_at_mut(src * cols);
        (&mut h[i * cols..(i + 1) * cols], &t[..cols])
    } else {
        let (h, t) = data.split_at_mut(i * cols);
        (&mut t[..cols], &h[src * cols..(src + 1) * cols])
    };
    let c = c as u64;
    for j in start..cols {
        let s = ds[j];
        if s != 0 {
            di[j] = ((di[j] as u64 + c * s as u64) % p) as u32;
        }
    }
}

pub fn rref(m: &Matrix) -> Rref {
    let (reduced, pivots, t) = eliminate(m, true);
    Rref {
        rank: pivots.len(),
        reduced,
        pivots,
        transform: t.unwrap(),
    }
}

/// Reduced form and pivots without the transform.
pub fn rref_only(m: &Matrix) -> (Matrix, Vec<usize>) {
    let (reduced, pivots, _) = eliminate(m, false);
    (reduced, pivots)
}

pub fn rank(m: &Matrix) -> usize {
    if m.rows() == 0 || m.cols() == 0 {
        return 0;
    }
    eliminate(m, false).1.len()
}

/// Solves `a * x = b` column-wise. Returns the particular solution (if consistent) and a
/// basis of the right kernel of `a` as column vectors.
pub fn solve(a: &Matrix, b: &Matrix) -> Result<(Option<Matrix>, Vec<Matrix>)> {
    if a.rows() != b.rows() {
        return Err(FrobError::DimensionMismatch(format!(
            "solve: a has {} rows, b has {}",
            a.rows(),
            b.rows()
        )));
    }
    let f = a.field();
    let r = rref(a);
    let tb = r.transform.mul(b);
    let n = a.cols();
    let consistent = (r.rank..tb.rows()).all(|i| tb.row(i).iter().all(|&x| x == 0));
    let particular = consistent.then(|| {
        let mut x = Matrix::zeros(f, n, b.cols());
        for (k, &pc) in r.pivots.iter().enumerate() {
            x.row_mut(pc).copy_from_slice(tb.row(k));
        }
        x
    });
    let null = kernel_from_rref(&r.reduced, &r.pivots)
        .into_iter()
        .map(|v| Matrix::from_data(f, n, 1, v))
        .collect();
    Ok((particular, null))
}

fn kernel_from_rref(reduced: &Matrix, pivots: &[usize]) -> Vec<Vec<u32>> {
    let f = reduced.field();
    let n = reduced.cols();
    let mut is_pivot = vec![false; n];
    for &c in pivots {
        is_pivot[c] = true;
    }
    let mut out = Vec::new();
    for j in (0..n).filter(|&j| !is_pivot[j]) {
        let mut v = vec![0u32; n];
        v[j] = 1;
        for (k, &pc) in pivots.iter().enumerate() {
            v[pc] = f.neg(reduced.get(k, j));
        }
        out.push(v);
    }
    out
}

/// Basis (as rows) of `{x : m * x = 0}`.
pub fn right_kernel(m: &Matrix) -> Matrix {
    let f = m.field();
    let (reduced, pivots) = rref_only(m);
    Matrix::from_row_vectors(f, m.cols(), &kernel_from_rref(&reduced, &pivots))
}

/// Basis (as rows) of `{x : x * m = 0}`.
pub fn left_kernel(m: &Matrix) -> Matrix {
    right_kernel(&m.transpose())
}

pub fn invert(m: &Matrix) -> Result<Matrix> {
    if !m.is_square() {
        return Err(FrobError::DimensionMismatch(format!(
            "invert: {}x{} is not square",
            m.rows(),
            m.cols()
        )));
    }
    let r = rref(m);
    if r.rank < m.rows() {
        return Err(FrobError::Singular);
    }
    Ok(r.transform)
}

/// Solves `x * a = b` for row vectors x (one per row of b). None if inconsistent.
pub fn solve_left(a: &Matrix, b: &Matrix) -> Result<Option<Matrix>> {
    let (x, _) = solve(&a.transpose(), &b.transpose())?;
    Ok(x.map(|x| x.transpose()))
}

/// Row-echelon basis of the row space of `m` (nonzero rows of the reduced form).
pub fn row_space(m: &Matrix) -> Matrix {
    let (reduced, pivots) = rref_only(m);
    reduced.select_rows(&(0..pivots.len()).collect::<Vec<_>>())
}
