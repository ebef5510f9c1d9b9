//! Symplectic linear algebra over the `[x_1..x_M, p_1..p_M]` quadrature
//! ordering.
//!
//! Conventions: the symplectic form is `Omega = [[0, I], [-I, 0]]` in M×M
//! blocks, a matrix `S` is symplectic iff `S Omega S^T = Omega`, and an
//! orthogonal symplectic matrix has the block layout `[[X, -Y], [Y, X]]`
//! with `U = X - iY` unitary (the passive linear-optics transformations).

use nalgebra::{Complex, DMatrix};

use crate::linalg;
use crate::{Error, Result};

/// Default tolerance for symplecticity checks.
pub const SYMPLECTIC_TOL: f64 = 1e-10;

/// The symplectic form `[[0, I], [-I, 0]]` for `modes` modes.
pub fn omega(modes: usize) -> Result<DMatrix<f64>> {
    if modes == 0 {
        return Err(Error::InvalidModeCount { got: 0, min: 1 });
    }
    let mut o = DMatrix::zeros(2 * modes, 2 * modes);
    for m in 0..modes {
        o[(m, modes + m)] = 1.0;
        o[(modes + m, m)] = -1.0;
    }
    Ok(o)
}

/// Checks `||S Omega S^T - Omega||_max <= tol`.
///
/// Errors on odd-dimensioned or non-square input.
pub fn is_symplectic(s: &DMatrix<f64>, tol: f64) -> Result<bool> {
    let n = s.nrows();
    if n != s.ncols() || n % 2 != 0 || n == 0 {
        return Err(Error::InvalidShape {
            expected: "even square 2Mx2M".into(),
            got: format!("{}x{}", n, s.ncols()),
        });
    }
    Ok(symplectic_defect(s)? <= tol)
}

/// `||S Omega S^T - Omega||_max`.
pub fn symplectic_defect(s: &DMatrix<f64>) -> Result<f64> {
    let n = s.nrows();
    if n != s.ncols() || n % 2 != 0 || n == 0 {
        return Err(Error::InvalidShape {
            expected: "even square 2Mx2M".into(),
            got: format!("{}x{}", n, s.ncols()),
        });
    }
    let o = omega(n / 2)?;
    Ok(linalg::max_abs(&(s * &o * s.transpose() - &o)))
}

/// Condition-number guard for the Cayley map; beyond this the parametrization
/// is treated as singular and the caller must reject the step.
pub const CAYLEY_COND_LIMIT: f64 = 1e12;

/// Cayley parametrization of the symplectic group.
///
/// Maps a real symmetric `T` to `S = (I + Omega T/2)(I - Omega T/2)^{-1}`,
/// which is symplectic wherever the inverse exists. `T` is symmetrized
/// defensively; a condition number above [`CAYLEY_COND_LIMIT`] is reported
/// as [`Error::SingularParametrization`].
pub fn cayley_symplectic(t: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    cayley_with_inverse(t).map(|(s, _)| s)
}

/// As [`cayley_symplectic`], additionally returning `(I - Omega T/2)^{-1}`,
/// which the likelihood gradient reuses.
pub fn cayley_with_inverse(t: &DMatrix<f64>) -> Result<(DMatrix<f64>, DMatrix<f64>)> {
    let n = t.nrows();
    if n != t.ncols() || n % 2 != 0 || n == 0 {
        return Err(Error::InvalidShape {
            expected: "even square 2Mx2M".into(),
            got: format!("{}x{}", n, t.ncols()),
        });
    }
    let t = linalg::symmetrize(t);
    let o = omega(n / 2)?;
    let half_ot = &o * &t * 0.5;
    let a = DMatrix::identity(n, n) + &half_ot;
    let b = DMatrix::identity(n, n) - &half_ot;

    let svd = b.clone().svd(false, false);
    let smax = svd.singular_values.max();
    let smin = svd.singular_values.min();
    let cond = if smin > 0.0 { smax / smin } else { f64::INFINITY };
    if !cond.is_finite() || cond > CAYLEY_COND_LIMIT {
        return Err(Error::SingularParametrization { cond });
    }
    let b_inv = b
        .lu()
        .try_inverse()
        .ok_or(Error::SingularParametrization { cond })?;
    Ok((a * &b_inv, b_inv))
}

/// Symplectic eigenvalues of a symmetric positive-definite matrix,
/// sorted descending.
///
/// These are the moduli of the eigenvalues of `i Omega V`, which come in
/// `±lambda` pairs; each pair yields one entry. Pairs whose two moduli
/// disagree by more than a 1e-8 relative tolerance indicate a failed
/// computation.
pub fn symplectic_eigenvalues(v: &DMatrix<f64>) -> Result<Vec<f64>> {
    let n = v.nrows();
    if n != v.ncols() || n % 2 != 0 || n == 0 {
        return Err(Error::InvalidShape {
            expected: "even square 2Mx2M".into(),
            got: format!("{}x{}", n, v.ncols()),
        });
    }
    let asym = linalg::asymmetry(v);
    if asym > 1e-8 * linalg::max_abs(v).max(1.0) {
        return Err(Error::NotSymmetric { asym, tol: 1e-8 });
    }
    if v.clone().cholesky().is_none() {
        let (vals, _) = linalg::sym_eigen_desc(v)?;
        return Err(Error::NotPositiveDefinite {
            min_eig: vals[n - 1],
        });
    }
    let moduli = omega_spectrum_moduli(v)?;
    pair_moduli(&moduli, 1e-8)
}

/// Moduli of the eigenvalues of `Omega V`, descending, without any pairing
/// or positive-definiteness requirements.
///
/// For a physical covariance these moduli are the symplectic eigenvalues,
/// each twice; the lenient form also gives a usable `lambda_min` summary for
/// the indefinite matrices direct reconstruction can produce.
pub fn omega_spectrum_moduli(v: &DMatrix<f64>) -> Result<Vec<f64>> {
    let o = omega(v.nrows() / 2)?;
    let eigs = (o * v).complex_eigenvalues();
    let mut moduli: Vec<f64> = eigs.iter().map(|z| z.norm()).collect();
    moduli.sort_by(|a, b| b.total_cmp(a));
    Ok(moduli)
}

/// Smallest symplectic-eigenvalue modulus of a symmetric matrix, tolerant of
/// unphysical and indefinite input.
pub fn min_symplectic_eigenvalue_lenient(v: &DMatrix<f64>) -> Result<f64> {
    let moduli = omega_spectrum_moduli(v)?;
    let half = v.nrows() / 2;
    // Average the two members of the smallest pair.
    Ok(0.5 * (moduli[2 * half - 2] + moduli[2 * half - 1]))
}

fn pair_moduli(moduli: &[f64], rel_tol: f64) -> Result<Vec<f64>> {
    let half = moduli.len() / 2;
    let mut out = Vec::with_capacity(half);
    for m in 0..half {
        let hi = moduli[2 * m];
        let lo = moduli[2 * m + 1];
        if (hi - lo).abs() > rel_tol * hi.max(1.0) {
            return Err(Error::DecompositionFailed(format!(
                "symplectic eigenvalue pairing failed: {hi} vs {lo}"
            )));
        }
        out.push(0.5 * (hi + lo));
    }
    Ok(out)
}

/// Result of the Williamson normal form `V = S diag(L, L) S^T`.
#[derive(Debug, Clone)]
pub struct WilliamsonResult {
    /// Symplectic matrix `S`.
    pub s: DMatrix<f64>,
    /// Symplectic eigenvalues, descending.
    pub lambdas: Vec<f64>,
}

impl WilliamsonResult {
    /// `diag(L, L)` as a full matrix.
    pub fn diagonal(&self) -> DMatrix<f64> {
        let half = self.lambdas.len();
        let mut d = DMatrix::zeros(2 * half, 2 * half);
        for (m, &l) in self.lambdas.iter().enumerate() {
            d[(m, m)] = l;
            d[(half + m, half + m)] = l;
        }
        d
    }

    /// Reassembles `S diag(L, L) S^T`.
    pub fn reconstruct(&self) -> DMatrix<f64> {
        &self.s * self.diagonal() * self.s.transpose()
    }
}

/// Williamson decomposition of a symmetric positive-definite matrix.
///
/// Computes `V^{1/2}`, brings the antisymmetric kernel `V^{1/2} Omega V^{1/2}`
/// to canonical form with an orthogonal `R`, and assembles
/// `S = V^{1/2} R diag(L, L)^{-1/2}`.
pub fn williamson(v: &DMatrix<f64>) -> Result<WilliamsonResult> {
    let n = v.nrows();
    if n != v.ncols() || n % 2 != 0 || n == 0 {
        return Err(Error::InvalidShape {
            expected: "even square 2Mx2M".into(),
            got: format!("{}x{}", n, v.ncols()),
        });
    }
    let half = n / 2;
    let v = linalg::symmetrize(v);
    let (sqrt_v, _) = linalg::sym_sqrt_invsqrt(&v)?;
    let o = omega(half)?;
    let kernel = &sqrt_v * &o * &sqrt_v;
    // Clean the roundoff so the kernel is exactly antisymmetric.
    let kernel = (&kernel - kernel.transpose()) * 0.5;
    let (r, lambdas) = linalg::antisymmetric_canonical(&kernel)?;

    let mut isqrt_d = DMatrix::zeros(n, n);
    for (m, &l) in lambdas.iter().enumerate() {
        let il = 1.0 / l.sqrt();
        isqrt_d[(m, m)] = il;
        isqrt_d[(half + m, half + m)] = il;
    }
    let s = &sqrt_v * &r * isqrt_d;
    Ok(WilliamsonResult { s, lambdas })
}

/// Result of the Bloch-Messiah factorization `S = O2 D O1` with
/// `D = diag(e^{r_1}..e^{r_M}, e^{-r_1}..e^{-r_M})`.
#[derive(Debug, Clone)]
pub struct BlochMessiahResult {
    /// Left orthogonal-symplectic factor.
    pub o2: DMatrix<f64>,
    /// Squeezing parameters, descending and non-negative.
    pub rs: Vec<f64>,
    /// Right orthogonal-symplectic factor.
    pub o1: DMatrix<f64>,
}

impl BlochMessiahResult {
    /// `diag(e^{r}, e^{-r})` as a full matrix.
    pub fn squeezer(&self) -> DMatrix<f64> {
        let half = self.rs.len();
        let mut d = DMatrix::zeros(2 * half, 2 * half);
        for (m, &r) in self.rs.iter().enumerate() {
            d[(m, m)] = r.exp();
            d[(half + m, half + m)] = (-r).exp();
        }
        d
    }

    /// Reassembles `O2 D O1`.
    pub fn reconstruct(&self) -> DMatrix<f64> {
        &self.o2 * self.squeezer() * &self.o1
    }
}

/// Bloch-Messiah decomposition of a symplectic matrix.
///
/// Polar-decomposes `S = O P`, then splits the symmetric symplectic factor
/// `P = Op D Op^T` with `Op` orthogonal symplectic, pairing each `e^{r}`
/// eigenvector with its `Omega`-partner in the `e^{-r}` eigenspace. Ties in
/// degenerate eigenspaces are resolved by a deterministic pivot and sign rule.
pub fn bloch_messiah(s: &DMatrix<f64>) -> Result<BlochMessiahResult> {
    if !is_symplectic(s, 1e-8)? {
        let defect = symplectic_defect(s)?;
        return Err(Error::NotSymplectic { defect, tol: 1e-8 });
    }
    let n = s.nrows();
    let half = n / 2;
    let o = omega(half)?;

    let sts = linalg::symmetrize(&(s.transpose() * s));
    let (vals, vecs) = linalg::sym_eigen_desc(&sts)?;
    if vals[n - 1] <= 0.0 {
        return Err(Error::NotPositiveDefinite { min_eig: vals[n - 1] });
    }
    // P = (S^T S)^{1/2}; its eigenvalues e^{r} pair with e^{-r}.
    let mu: Vec<f64> = vals.iter().map(|&x| x.sqrt()).collect();
    for m in 0..half {
        let prod = mu[m] * mu[n - 1 - m];
        if (prod - 1.0).abs() > 1e-6 {
            return Err(Error::DecompositionFailed(format!(
                "polar factor eigenvalues do not pair: {} * {} != 1",
                mu[m],
                mu[n - 1 - m]
            )));
        }
    }

    // Partner construction: slot m takes a unit vector a_m from the mu_m
    // eigenspace (orthogonalized against everything already chosen) and the
    // partner b_m = -Omega a_m, an eigenvector of 1/mu_m. Near mu = 1 the two
    // eigenspaces merge, so candidates are drawn from the whole near-1 group.
    let near_one = |x: f64| (x - 1.0).abs() <= 1e-7;
    let mut used = vec![false; n];
    let mut basis_a: Vec<nalgebra::DVector<f64>> = Vec::with_capacity(half);
    let mut basis_b: Vec<nalgebra::DVector<f64>> = Vec::with_capacity(half);
    let mut rs = Vec::with_capacity(half);

    for m in 0..half {
        let target = mu[m];
        let pool: Vec<usize> = if near_one(target) {
            (0..n).filter(|&i| !used[i] && near_one(mu[i])).collect()
        } else {
            (0..half)
                .filter(|&i| !used[i] && (mu[i] - target).abs() <= 1e-7 * target)
                .collect()
        };
        // Deterministic pivot: the candidate with the largest residual after
        // projecting out all previously chosen directions.
        let mut best: Option<(usize, nalgebra::DVector<f64>, f64)> = None;
        for &cand in &pool {
            let mut w = vecs.column(cand).clone_owned();
            for a in &basis_a {
                let c = a.dot(&w);
                w.axpy(-c, a, 1.0);
            }
            for b in &basis_b {
                let c = b.dot(&w);
                w.axpy(-c, b, 1.0);
            }
            let norm = w.norm();
            if best.as_ref().map_or(true, |(_, _, bn)| norm > *bn + 1e-12) {
                best = Some((cand, w, norm));
            }
        }
        let (chosen, mut a_vec, norm) = best.ok_or_else(|| {
            Error::DecompositionFailed("ran out of eigenvector candidates".into())
        })?;
        if norm < 1e-6 {
            return Err(Error::DecompositionFailed(
                "degenerate eigenspace pairing collapsed".into(),
            ));
        }
        a_vec /= norm;
        // Fix the overall sign: largest-magnitude component made positive.
        let pivot = a_vec
            .iter()
            .enumerate()
            .max_by(|x, y| x.1.abs().total_cmp(&y.1.abs()))
            .map(|(i, _)| i)
            .unwrap_or(0);
        if a_vec[pivot] < 0.0 {
            a_vec = -a_vec;
        }
        let b_vec = -(&o * &a_vec);
        used[chosen] = true;
        rs.push(target.ln());
        basis_a.push(a_vec);
        basis_b.push(b_vec);
    }

    let mut op = DMatrix::zeros(n, n);
    for m in 0..half {
        op.set_column(m, &basis_a[m]);
        op.set_column(half + m, &basis_b[m]);
    }

    // S = O P with P = Op D Op^T, hence O2 = O Op and O1 = Op^T.
    let mut d_inv = DMatrix::zeros(n, n);
    for (m, &r) in rs.iter().enumerate() {
        d_inv[(m, m)] = (-r).exp();
        d_inv[(half + m, half + m)] = r.exp();
    }
    let p = &op
        * {
            let mut d = DMatrix::zeros(n, n);
            for (m, &r) in rs.iter().enumerate() {
                d[(m, m)] = r.exp();
                d[(half + m, half + m)] = (-r).exp();
            }
            d
        }
        * op.transpose();
    let p_inv = &op * d_inv * op.transpose();
    let big_o = s * &p_inv;

    let result = BlochMessiahResult {
        o2: &big_o * &op,
        rs,
        o1: op.transpose(),
    };
    // Internal consistency: the factorization must reproduce S.
    let err = linalg::max_abs(&(result.reconstruct() - s));
    let scale = linalg::max_abs(&p).max(1.0);
    if err > 1e-7 * scale {
        return Err(Error::DecompositionFailed(format!(
            "Bloch-Messiah roundtrip error {err}"
        )));
    }
    Ok(result)
}

/// Block structure check for an orthogonal symplectic matrix; returns the
/// `(X, Y)` blocks of `[[X, -Y], [Y, X]]`.
fn ortho_symplectic_blocks(o: &DMatrix<f64>) -> Result<(DMatrix<f64>, DMatrix<f64>)> {
    let n = o.nrows();
    if n != o.ncols() || n % 2 != 0 || n == 0 {
        return Err(Error::InvalidShape {
            expected: "even square 2Mx2M".into(),
            got: format!("{}x{}", n, o.ncols()),
        });
    }
    let half = n / 2;
    let ortho_defect = linalg::max_abs(&(o * o.transpose() - DMatrix::identity(n, n)));
    if ortho_defect > 1e-8 {
        return Err(Error::NotOrthoSymplectic(format!(
            "orthogonality defect {ortho_defect:.3e}"
        )));
    }
    if !is_symplectic(o, 1e-8)? {
        return Err(Error::NotOrthoSymplectic(format!(
            "symplecticity defect {:.3e}",
            symplectic_defect(o)?
        )));
    }
    let x = o.view((0, 0), (half, half)).clone_owned();
    let y = o.view((half, 0), (half, half)).clone_owned();
    let block_defect = linalg::max_abs(&(o.view((half, half), (half, half)).clone_owned() - &x))
        .max(linalg::max_abs(
            &(o.view((0, half), (half, half)).clone_owned() + &y),
        ));
    if block_defect > 1e-8 {
        return Err(Error::NotOrthoSymplectic(format!(
            "block layout defect {block_defect:.3e}"
        )));
    }
    Ok((x, y))
}

/// Complex mode basis `U = X - iY` of an orthogonal symplectic matrix
/// `[[X, -Y], [Y, X]]`; the columns of `U` are the mode-basis vectors.
pub fn ortho_to_modebasis(o: &DMatrix<f64>) -> Result<DMatrix<Complex<f64>>> {
    let (x, y) = ortho_symplectic_blocks(o)?;
    let half = x.nrows();
    Ok(DMatrix::from_fn(half, half, |i, j| {
        Complex::new(x[(i, j)], -y[(i, j)])
    }))
}

/// Phase-space rotation on a single mode: phase `phi` maps
/// `x -> x cos(phi) + p sin(phi)` and `p -> -x sin(phi) + p cos(phi)`,
/// identity on the other modes. `mode` is a zero-based index.
pub fn phase_shift_symplectic(modes: usize, mode: usize, phi: f64) -> Result<DMatrix<f64>> {
    if modes == 0 {
        return Err(Error::InvalidModeCount { got: 0, min: 1 });
    }
    if mode >= modes {
        return Err(Error::ModeOutOfRange { mode, modes });
    }
    let mut s = DMatrix::identity(2 * modes, 2 * modes);
    let (c, sn) = (phi.cos(), phi.sin());
    s[(mode, mode)] = c;
    s[(mode, modes + mode)] = sn;
    s[(modes + mode, mode)] = -sn;
    s[(modes + mode, modes + mode)] = c;
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::max_abs;
    use nalgebra::DMatrix;
    use rand::prelude::*;
    use rand_chacha::ChaCha12Rng;

    pub(crate) fn random_symmetric(n: usize, amp: f64, rng: &mut impl Rng) -> DMatrix<f64> {
        let mut t = DMatrix::zeros(n, n);
        for i in 0..n {
            for j in i..n {
                let x = rng.random_range(-amp..amp);
                t[(i, j)] = x;
                t[(j, i)] = x;
            }
        }
        t
    }

    #[test]
    fn omega_small_cases() {
        let o1 = omega(1).unwrap();
        assert_eq!(o1, DMatrix::from_row_slice(2, 2, &[0.0, 1.0, -1.0, 0.0]));
        let o2 = omega(2).unwrap();
        assert_eq!(o2[(0, 2)], 1.0);
        assert_eq!(o2[(2, 0)], -1.0);
        assert_eq!(o2[(1, 3)], 1.0);
        assert_eq!(o2[(3, 1)], -1.0);
        assert_eq!(o2.iter().filter(|&&x| x != 0.0).count(), 4);
        // Omega^2 = -I for a few sizes.
        for m in [1usize, 2, 5] {
            let o = omega(m).unwrap();
            let sq = &o * &o;
            assert!(max_abs(&(sq + DMatrix::identity(2 * m, 2 * m))) < 1e-15);
        }
        assert!(omega(0).is_err());
    }

    #[test]
    fn is_symplectic_examples() {
        assert!(is_symplectic(&DMatrix::identity(2, 2), 1e-10).unwrap());
        let squeeze = DMatrix::from_row_slice(2, 2, &[2.0, 0.0, 0.0, 0.5]);
        assert!(is_symplectic(&squeeze, 1e-10).unwrap());
        let scale = DMatrix::from_row_slice(2, 2, &[2.0, 0.0, 0.0, 2.0]);
        assert!(!is_symplectic(&scale, 1e-10).unwrap());
        assert!(is_symplectic(&DMatrix::identity(3, 3), 1e-10).is_err());
    }

    #[test]
    fn cayley_identity_and_symplecticity() {
        let s = cayley_symplectic(&DMatrix::zeros(4, 4)).unwrap();
        assert!(max_abs(&(s - DMatrix::identity(4, 4))) < 1e-15);

        let mut rng = ChaCha12Rng::seed_from_u64(11);
        let t = random_symmetric(2, 1.0, &mut rng);
        let s = cayley_symplectic(&t).unwrap();
        assert!(symplectic_defect(&s).unwrap() < 1e-10);

        for _ in 0..100 {
            let t = random_symmetric(6, 1.0, &mut rng);
            let s = cayley_symplectic(&t).unwrap();
            assert!(is_symplectic(&s, 1e-9).unwrap());
        }
    }

    #[test]
    fn symplectic_eigenvalues_examples() {
        let vals = symplectic_eigenvalues(&DMatrix::identity(6, 6)).unwrap();
        assert!(vals.iter().all(|&l| (l - 1.0).abs() < 1e-12));

        let r = 0.6;
        let v = DMatrix::from_row_slice(2, 2, &[(2.0 * r).exp(), 0.0, 0.0, (-2.0 * r).exp()]);
        let vals = symplectic_eigenvalues(&v).unwrap();
        assert!((vals[0] - 1.0).abs() < 1e-12);

        assert!(symplectic_eigenvalues(&DMatrix::from_row_slice(
            2,
            2,
            &[1.0, 0.0, 0.0, -1.0]
        ))
        .is_err());
    }

    #[test]
    fn symplectic_eigenvalues_invariant_under_conjugation() {
        let mut rng = ChaCha12Rng::seed_from_u64(5);
        for _ in 0..20 {
            let t = random_symmetric(6, 0.7, &mut rng);
            let s = cayley_symplectic(&t).unwrap();
            let base = random_symmetric(6, 0.4, &mut rng);
            let v = &base * base.transpose() + DMatrix::identity(6, 6) * 1.5;
            let v1 = symplectic_eigenvalues(&v).unwrap();
            let v2 = symplectic_eigenvalues(&crate::linalg::symmetrize(
                &(&s * &v * s.transpose()),
            ))
            .unwrap();
            for (a, b) in v1.iter().zip(&v2) {
                assert!((a - b).abs() < 1e-8 * a.max(1.0), "{a} vs {b}");
            }
        }
    }

    #[test]
    fn williamson_isotropic() {
        let v = DMatrix::identity(4, 4) * 3.0;
        let w = williamson(&v).unwrap();
        assert!(w.lambdas.iter().all(|&l| (l - 3.0).abs() < 1e-10));
        assert!(max_abs(&(w.reconstruct() - &v)) < 1e-9);
        assert!(is_symplectic(&w.s, 1e-9).unwrap());

        let w = williamson(&DMatrix::identity(6, 6)).unwrap();
        assert!(w.lambdas.iter().all(|&l| (l - 1.0).abs() < 1e-12));
    }

    #[test]
    fn williamson_random_roundtrip() {
        let mut rng = ChaCha12Rng::seed_from_u64(23);
        for &half in &[1usize, 2, 4] {
            for _ in 0..20 {
                let t = random_symmetric(2 * half, 0.6, &mut rng);
                let s = cayley_symplectic(&t).unwrap();
                let mut d = DMatrix::zeros(2 * half, 2 * half);
                for m in 0..half {
                    let l = rng.random_range(1.0..5.0);
                    d[(m, m)] = l;
                    d[(half + m, half + m)] = l;
                }
                let v = crate::linalg::symmetrize(&(&s * &d * s.transpose()));
                let w = williamson(&v).unwrap();
                let rel = max_abs(&(w.reconstruct() - &v)) / max_abs(&v);
                assert!(rel < 1e-8, "roundtrip rel err {rel}");
                assert!(is_symplectic(&w.s, 1e-8).unwrap());
                // Lambdas agree with the direct spectrum computation.
                let direct = symplectic_eigenvalues(&v).unwrap();
                for (a, b) in w.lambdas.iter().zip(&direct) {
                    assert!((a - b).abs() < 1e-9 * a.max(1.0));
                }
            }
        }
    }

    #[test]
    fn bloch_messiah_identity_and_diagonal() {
        let bm = bloch_messiah(&DMatrix::identity(4, 4)).unwrap();
        assert!(bm.rs.iter().all(|&r| r.abs() < 1e-12));
        assert!(max_abs(&(bm.reconstruct() - DMatrix::identity(4, 4))) < 1e-10);

        let r = 0.69;
        let s = DMatrix::from_row_slice(2, 2, &[r.exp(), 0.0, 0.0, (-r).exp()]);
        let bm = bloch_messiah(&s).unwrap();
        assert!((bm.rs[0] - r).abs() < 1e-12);
        assert!(max_abs(&(bm.reconstruct() - &s)) < 1e-12);
        // Factors are +/- identity here.
        assert!(max_abs(&(&bm.o1 * &bm.o2 - DMatrix::identity(2, 2))) < 1e-12);
    }

    #[test]
    fn bloch_messiah_random_roundtrip() {
        let mut rng = ChaCha12Rng::seed_from_u64(31);
        for _ in 0..25 {
            let t = random_symmetric(8, 0.8, &mut rng);
            let s = cayley_symplectic(&t).unwrap();
            let bm = bloch_messiah(&s).unwrap();
            let rel = max_abs(&(bm.reconstruct() - &s)) / max_abs(&s).max(1.0);
            assert!(rel < 1e-8, "roundtrip rel err {rel}");
            assert!(ortho_symplectic_blocks(&bm.o1).is_ok());
            assert!(ortho_symplectic_blocks(&bm.o2).is_ok());
            assert!(bm.rs.windows(2).all(|w| w[0] >= w[1]));
            // e^{r} are the singular values >= 1 of S.
            let mut sv: Vec<f64> = s.clone().svd(false, false).singular_values.iter().copied().collect();
            sv.sort_by(|a, b| b.total_cmp(a));
            for (m, &r) in bm.rs.iter().enumerate() {
                assert!((r.exp() - sv[m]).abs() < 1e-8 * sv[m]);
            }
        }
    }

    #[test]
    fn modebasis_examples() {
        let u = ortho_to_modebasis(&DMatrix::identity(4, 4)).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                let expect = if i == j { 1.0 } else { 0.0 };
                assert!((u[(i, j)] - Complex::new(expect, 0.0)).norm() < 1e-15);
            }
        }
        // Single-mode phase shift maps to e^{-i phi}.
        let phi = 0.37;
        let o = DMatrix::from_row_slice(2, 2, &[phi.cos(), -phi.sin(), phi.sin(), phi.cos()]);
        let u = ortho_to_modebasis(&o).unwrap();
        assert!((u[(0, 0)] - Complex::from_polar(1.0, -phi)).norm() < 1e-15);
    }

    #[test]
    fn modebasis_homomorphism() {
        let mut rng = ChaCha12Rng::seed_from_u64(47);
        for _ in 0..10 {
            let t = random_symmetric(6, 0.8, &mut rng);
            let s = cayley_symplectic(&t).unwrap();
            let bm = bloch_messiah(&s).unwrap();
            let (a, b) = (&bm.o2, crate::linalg::symmetrize(&DMatrix::identity(6, 6)));
            let _ = b;
            let o1t = bm.o1.transpose();
            let prod = a * &o1t;
            let ua = ortho_to_modebasis(a).unwrap();
            let ub = ortho_to_modebasis(&o1t).unwrap();
            let uprod = ortho_to_modebasis(&prod).unwrap();
            let err = (&ua * &ub - &uprod).iter().map(|z| z.norm()).fold(0.0_f64, f64::max);
            assert!(err < 1e-10, "homomorphism defect {err}");
            // Unitarity.
            let uu = &ua * ua.adjoint();
            let udef = (0..3)
                .flat_map(|i| (0..3).map(move |j| (i, j)))
                .map(|(i, j)| {
                    let expect = if i == j { 1.0 } else { 0.0 };
                    (uu[(i, j)] - Complex::new(expect, 0.0)).norm()
                })
                .fold(0.0_f64, f64::max);
            assert!(udef < 1e-10);
        }
    }

    #[test]
    fn phase_shift_conventions() {
        let s = phase_shift_symplectic(1, 0, 0.0).unwrap();
        assert!(max_abs(&(s - DMatrix::identity(2, 2))) < 1e-15);
        let s = phase_shift_symplectic(1, 0, 2.0 * std::f64::consts::PI).unwrap();
        assert!(max_abs(&(s - DMatrix::identity(2, 2))) < 1e-12);

        // phi = -pi/2 sends the x axis to the p axis.
        let s = phase_shift_symplectic(1, 0, -std::f64::consts::FRAC_PI_2).unwrap();
        let mapped = &s * nalgebra::DVector::from_row_slice(&[1.0, 0.0]);
        assert!((mapped[0] - 0.0).abs() < 1e-15);
        assert!((mapped[1] - 1.0).abs() < 1e-15);
        assert!(is_symplectic(&s, 1e-12).unwrap());

        assert!(phase_shift_symplectic(2, 2, 0.1).is_err());
    }
}
