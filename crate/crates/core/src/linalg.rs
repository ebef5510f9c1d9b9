//! Small dense linear-algebra helpers shared across the crate.

use nalgebra::{DMatrix, DVector};

use crate::{Error, Result};

/// Largest absolute entry of a matrix (0 for empty).
pub(crate) fn max_abs(m: &DMatrix<f64>) -> f64 {
    m.iter().fold(0.0_f64, |acc, &x| acc.max(x.abs()))
}

/// Maximum absolute asymmetry `max |M - M^T|`.
pub(crate) fn asymmetry(m: &DMatrix<f64>) -> f64 {
    let mut worst = 0.0_f64;
    for i in 0..m.nrows() {
        for j in (i + 1)..m.ncols() {
            worst = worst.max((m[(i, j)] - m[(j, i)]).abs());
        }
    }
    worst
}

/// Symmetrize in place: `(M + M^T) / 2`.
pub(crate) fn symmetrize(m: &DMatrix<f64>) -> DMatrix<f64> {
    (m + m.transpose()) * 0.5
}

/// Eigendecomposition of a symmetric matrix, eigenvalues sorted descending.
///
/// Returns `(values, vectors)` with `vectors.column(k)` the unit eigenvector
/// of `values[k]`.
pub(crate) fn sym_eigen_desc(m: &DMatrix<f64>) -> Result<(DVector<f64>, DMatrix<f64>)> {
    let n = m.nrows();
    let eig = m
        .clone()
        .try_symmetric_eigen(f64::EPSILON, 0)
        .ok_or_else(|| Error::DecompositionFailed("symmetric eigensolver did not converge".into()))?;
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    let values = DVector::from_iterator(n, order.iter().map(|&k| eig.eigenvalues[k]));
    let mut vectors = DMatrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        vectors.set_column(dst, &eig.eigenvectors.column(src));
    }
    Ok((values, vectors))
}

/// Square root and inverse square root of a symmetric positive-definite matrix.
pub(crate) fn sym_sqrt_invsqrt(m: &DMatrix<f64>) -> Result<(DMatrix<f64>, DMatrix<f64>)> {
    let (vals, vecs) = sym_eigen_desc(m)?;
    let min_eig = vals[vals.len() - 1];
    if min_eig <= 0.0 {
        return Err(Error::NotPositiveDefinite { min_eig });
    }
    let sqrt_d = DMatrix::from_diagonal(&vals.map(f64::sqrt));
    let isqrt_d = DMatrix::from_diagonal(&vals.map(|x| 1.0 / x.sqrt()));
    let sqrt = &vecs * sqrt_d * vecs.transpose();
    let isqrt = &vecs * isqrt_d * vecs.transpose();
    Ok((symmetrize(&sqrt), symmetrize(&isqrt)))
}

/// Canonical form of a nonsingular antisymmetric matrix.
///
/// Finds orthogonal `R` and positive `lambdas` (descending, length `n/2`) with
/// `R^T K R = [[0, L], [-L, 0]]` where `L = diag(lambdas)`, via the real Schur
/// form: a quasi-triangular matrix similar to an antisymmetric one is block
/// diagonal with 2x2 rotation-generator blocks.
pub(crate) fn antisymmetric_canonical(k: &DMatrix<f64>) -> Result<(DMatrix<f64>, Vec<f64>)> {
    let n = k.nrows();
    if n % 2 != 0 || k.ncols() != n {
        return Err(Error::InvalidShape {
            expected: "even square".into(),
            got: format!("{}x{}", n, k.ncols()),
        });
    }
    let half = n / 2;
    let scale = max_abs(k).max(f64::MIN_POSITIVE);
    let schur = k
        .clone()
        .try_schur(f64::EPSILON, 0)
        .ok_or_else(|| Error::DecompositionFailed("Schur iteration did not converge".into()))?;
    let (q, t) = schur.unpack();

    // Extract the 2x2 diagonal blocks. A 1x1 block means a zero eigenvalue,
    // which a nonsingular antisymmetric matrix cannot have.
    let mut slots: Vec<(f64, usize, usize)> = Vec::with_capacity(half);
    let mut i = 0;
    while i < n {
        let coupled = i + 1 < n && t[(i + 1, i)].abs() > 1e-12 * scale;
        if !coupled {
            return Err(Error::DecompositionFailed(
                "antisymmetric canonical form found a near-zero eigenvalue".into(),
            ));
        }
        let lambda = 0.5 * (t[(i, i + 1)].abs() + t[(i + 1, i)].abs());
        // Orient each block so that K u = -lambda v, K v = +lambda u.
        let (u_col, v_col) = if t[(i + 1, i)] < 0.0 { (i, i + 1) } else { (i + 1, i) };
        slots.push((lambda, u_col, v_col));
        i += 2;
    }
    slots.sort_by(|a, b| b.0.total_cmp(&a.0));

    let mut r = DMatrix::zeros(n, n);
    let mut lambdas = Vec::with_capacity(half);
    for (m, &(lambda, u_col, v_col)) in slots.iter().enumerate() {
        r.set_column(m, &q.column(u_col));
        r.set_column(half + m, &q.column(v_col));
        lambdas.push(lambda);
    }
    Ok((r, lambdas))
}

/// Eigenvalues of the Hermitian matrix `re + i*im`, sorted ascending.
///
/// Uses the real symmetric embedding `[[re, -im], [im, re]]`, whose spectrum
/// is the Hermitian spectrum doubled; consecutive duplicates are merged.
pub(crate) fn hermitian_eigenvalues(re: &DMatrix<f64>, im: &DMatrix<f64>) -> Result<Vec<f64>> {
    let n = re.nrows();
    let mut embed = DMatrix::zeros(2 * n, 2 * n);
    embed.view_mut((0, 0), (n, n)).copy_from(re);
    embed.view_mut((n, n), (n, n)).copy_from(re);
    embed.view_mut((0, n), (n, n)).copy_from(&(-im));
    embed.view_mut((n, 0), (n, n)).copy_from(im);
    let (vals, _) = sym_eigen_desc(&symmetrize(&embed))?;
    let mut out: Vec<f64> = Vec::with_capacity(n);
    // vals is descending and holds each eigenvalue twice; take every other one.
    for k in 0..n {
        out.push(0.5 * (vals[2 * k] + vals[2 * k + 1]));
    }
    out.reverse();
    Ok(out)
}
