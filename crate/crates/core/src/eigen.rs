//! Numeric kernels over complex doubles: Hermitian Jacobi diagonalization,
//! Schur decomposition by shifted QR, general eigenpairs, and the
//! singular-value-thresholded nullspace used for rank decisions at a
//! tolerance.

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::scalar::ComplexF;
use num_traits::Zero;

pub type CMatrix = Matrix<ComplexF>;

const JACOBI_SWEEPS: usize = 60;
const QR_ITER_PER_EIGENVALUE: usize = 80;

/// Frobenius norm.
pub fn frobenius(m: &CMatrix) -> f64 {
    m.entries().iter().map(|e| e.norm_sqr()).sum::<f64>().sqrt()
}

pub(crate) fn conj_transpose(m: &CMatrix) -> CMatrix {
    Matrix::from_fn(m.cols(), m.rows(), |i, j| m[(j, i)].conj())
}

/// Singular values (descending) and right singular vectors by one-sided
/// Jacobi: columns of the working copy are rotated pairwise until mutually
/// orthogonal, so small singular values keep high relative accuracy.
pub fn svd_right(m: &CMatrix) -> Result<(Vec<f64>, CMatrix)> {
    let rows = m.rows();
    let n = m.cols();
    let mut a = m.clone();
    let mut v: CMatrix = Matrix::identity(n);
    if n <= 1 || rows == 0 {
        let vals = (0..n)
            .map(|j| (0..rows).map(|i| a[(i, j)].norm_sqr()).sum::<f64>().sqrt())
            .collect();
        return Ok((vals, v));
    }
    for sweep in 0..JACOBI_SWEEPS {
        let mut rotated = false;
        for p in 0..n {
            for q in (p + 1)..n {
                let mut app = 0.0;
                let mut aqq = 0.0;
                let mut apq = ComplexF::zero();
                for i in 0..rows {
                    app += a[(i, p)].norm_sqr();
                    aqq += a[(i, q)].norm_sqr();
                    apq += a[(i, p)].conj() * a[(i, q)];
                }
                let abs_apq = apq.norm();
                if abs_apq <= 1e-15 * (app * aqq).sqrt() || abs_apq <= 1e-300 {
                    continue;
                }
                rotated = true;
                // Unitary 2x2 diagonalizing the Gram block
                // [[app, apq], [conj(apq), aqq]].
                let tau = (aqq - app) / (2.0 * abs_apq);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let phase = apq / abs_apq;
                let s = phase * (t * c);
                for i in 0..rows {
                    let aip = a[(i, p)];
                    let aiq = a[(i, q)];
                    a[(i, p)] = aip * c - aiq * s.conj();
                    a[(i, q)] = aip * s + aiq * c;
                }
                for i in 0..n {
                    let vip = v[(i, p)];
                    let viq = v[(i, q)];
                    v[(i, p)] = vip * c - viq * s.conj();
                    v[(i, q)] = vip * s + viq * c;
                }
            }
        }
        if !rotated {
            let mut pairs: Vec<(f64, usize)> = (0..n)
                .map(|j| {
                    let norm = (0..rows).map(|i| a[(i, j)].norm_sqr()).sum::<f64>().sqrt();
                    (norm, j)
                })
                .collect();
            pairs.sort_by(|x, y| y.0.partial_cmp(&x.0).unwrap());
            let vals: Vec<f64> = pairs.iter().map(|&(s, _)| s).collect();
            let vecs = Matrix::from_fn(n, n, |i, j| v[(i, pairs[j].1)]);
            return Ok((vals, vecs));
        }
        let _ = sweep;
    }
    Err(Error::EigenConvergence)
}

/// Reduces to upper Hessenberg form by Householder reflections,
/// accumulating the unitary similarity.
fn hessenberg(a: &mut CMatrix, q: &mut CMatrix) {
    let n = a.rows();
    for k in 0..n.saturating_sub(2) {
        // Householder vector for column k below the subdiagonal.
        let mut norm2 = 0.0;
        for i in (k + 1)..n {
            norm2 += a[(i, k)].norm_sqr();
        }
        if norm2 <= 1e-300 {
            continue;
        }
        let x0 = a[(k + 1, k)];
        let alpha = if x0.norm() > 0.0 {
            -(x0 / x0.norm()) * norm2.sqrt()
        } else {
            ComplexF::new(-norm2.sqrt(), 0.0)
        };
        let mut v: Vec<ComplexF> = vec![ComplexF::zero(); n];
        v[k + 1] = x0 - alpha;
        for i in (k + 2)..n {
            v[i] = a[(i, k)];
        }
        let vnorm2: f64 = v.iter().map(|e| e.norm_sqr()).sum();
        if vnorm2 <= 1e-300 {
            continue;
        }
        let beta = 2.0 / vnorm2;
        // A <- (I - beta v v^H) A
        for j in 0..n {
            let mut dot = ComplexF::zero();
            for i in (k + 1)..n {
                dot += v[i].conj() * a[(i, j)];
            }
            dot *= beta;
            for i in (k + 1)..n {
                let t = v[i] * dot;
                a[(i, j)] -= t;
            }
        }
        // A <- A (I - beta v v^H)
        for i in 0..n {
            let mut dot = ComplexF::zero();
            for j in (k + 1)..n {
                dot += a[(i, j)] * v[j];
            }
            dot *= beta;
            for j in (k + 1)..n {
                let t = dot * v[j].conj();
                a[(i, j)] -= t;
            }
        }
        // Q <- Q (I - beta v v^H)
        for i in 0..n {
            let mut dot = ComplexF::zero();
            for j in (k + 1)..n {
                dot += q[(i, j)] * v[j];
            }
            dot *= beta;
            for j in (k + 1)..n {
                let t = dot * v[j].conj();
                q[(i, j)] -= t;
            }
        }
    }
}

/// Wilkinson shift from the trailing 2x2 block.
fn wilkinson_shift(a: &CMatrix, hi: usize) -> ComplexF {
    let t = a[(hi, hi)];
    if hi == 0 {
        return t;
    }
    let s = a[(hi - 1, hi - 1)];
    let b = a[(hi - 1, hi)];
    let c = a[(hi, hi - 1)];
    let tr = s + t;
    let det = s * t - b * c;
    let disc = (tr * tr - det * 4.0).sqrt();
    let l1 = (tr + disc) * 0.5;
    let l2 = (tr - disc) * 0.5;
    if (l1 - t).norm() <= (l2 - t).norm() {
        l1
    } else {
        l2
    }
}

/// Complex Schur decomposition: returns unitary Q and upper triangular T
/// with M = Q T Q^H. Shifted QR with Givens rotations on Hessenberg form.
pub fn schur(m: &CMatrix) -> Result<(CMatrix, CMatrix)> {
    if !m.is_square() {
        return Err(Error::DimensionMismatch("schur needs a square matrix".into()));
    }
    let n = m.rows();
    let mut t = m.clone();
    let mut q: CMatrix = Matrix::identity(n);
    if n <= 1 {
        return Ok((q, t));
    }
    hessenberg(&mut t, &mut q);
    let scale = frobenius(&t).max(1.0);
    let eps = 1e-15;

    let mut hi = n - 1;
    let mut budget = QR_ITER_PER_EIGENVALUE * n;
    loop {
        // Deflate converged subdiagonals.
        while hi > 0 {
            let sub = t[(hi, hi - 1)].norm();
            let local = t[(hi, hi)].norm() + t[(hi - 1, hi - 1)].norm();
            if sub <= eps * (local + scale * 1e-2) {
                t[(hi, hi - 1)] = ComplexF::zero();
                hi -= 1;
            } else {
                break;
            }
        }
        if hi == 0 {
            return Ok((q, t));
        }
        if budget == 0 {
            return Err(Error::EigenConvergence);
        }
        budget -= 1;

        // Active block [lo..=hi]: walk up until a zero subdiagonal.
        let mut lo = hi;
        while lo > 0 {
            let sub = t[(lo, lo - 1)].norm();
            let local = t[(lo, lo)].norm() + t[(lo - 1, lo - 1)].norm();
            if sub <= eps * (local + scale * 1e-2) {
                t[(lo, lo - 1)] = ComplexF::zero();
                break;
            }
            lo -= 1;
        }

        let shift = wilkinson_shift(&t, hi);
        // Implicit shifted QR sweep on the active block via Givens rotations.
        let mut x = t[(lo, lo)] - shift;
        let mut y = t[(lo + 1, lo)];
        let mut rotations: Vec<(usize, ComplexF, ComplexF)> = Vec::new();
        for k in lo..hi {
            // Givens zeroing y against x: [c, s; -conj(s), c]^H applied to rows k,k+1
            let r = (x.norm_sqr() + y.norm_sqr()).sqrt();
            let (c, s) = if r <= 1e-300 {
                (1.0, ComplexF::zero())
            } else {
                ((x.norm() / r), {
                    let phase =
                        if x.norm() > 0.0 { x / x.norm() } else { ComplexF::new(1.0, 0.0) };
                    phase * y.conj() / r
                })
            };
            // Row update: rows k, k+1
            for j in 0..n {
                let tkj = t[(k, j)];
                let tk1j = t[(k + 1, j)];
                t[(k, j)] = tkj * c + tk1j * s;
                t[(k + 1, j)] = -tkj * s.conj() + tk1j * c;
            }
            // Column update: cols k, k+1
            for i in 0..n {
                let tik = t[(i, k)];
                let tik1 = t[(i, k + 1)];
                t[(i, k)] = tik * c + tik1 * s.conj();
                t[(i, k + 1)] = -tik * s + tik1 * c;
            }
            rotations.push((k, ComplexF::new(c, 0.0), s));
            if k < hi.saturating_sub(1) {
                x = t[(k + 1, k)];
                y = t[(k + 2, k)];
            }
        }
        for (k, c, s) in rotations {
            for i in 0..n {
                let qik = q[(i, k)];
                let qik1 = q[(i, k + 1)];
                q[(i, k)] = qik * c.re + qik1 * s.conj();
                q[(i, k + 1)] = -qik * s + qik1 * c.re;
            }
        }
    }
}

/// One eigenpair cluster: a representative value, the cluster size from the
/// Schur diagonal, and a unit eigenvector.
#[derive(Debug, Clone)]
pub struct EigenPair {
    pub value: ComplexF,
    pub multiplicity: usize,
    pub vector: Vec<ComplexF>,
}

/// Full eigen-decomposition: Schur values merged within `tol`, one
/// eigenvector per merged value, each with residual |Mv - lambda v| <=
/// tol * |M| (verified; failure reports non-convergence).
pub fn eigen(m: &CMatrix, tol: f64) -> Result<Vec<EigenPair>> {
    if !m.is_square() {
        return Err(Error::DimensionMismatch("eigen needs a square matrix".into()));
    }
    let n = m.rows();
    if n == 0 {
        return Ok(vec![]);
    }
    let (_, t) = schur(m)?;
    let mut values: Vec<ComplexF> = (0..n).map(|i| t[(i, i)]).collect();
    values.sort_by(|a, b| {
        a.re.partial_cmp(&b.re).unwrap().then(a.im.partial_cmp(&b.im).unwrap())
    });
    let scale = frobenius(m).max(1.0);
    let merge_tol = tol * scale;

    let mut clusters: Vec<(ComplexF, usize)> = Vec::new();
    for v in values {
        match clusters.last_mut() {
            Some((rep, count)) if (*rep - v).norm() <= merge_tol => {
                // running mean keeps the representative centered
                *rep = (*rep * (*count as f64) + v) / (*count as f64 + 1.0);
                *count += 1;
            }
            _ => clusters.push((v, 1)),
        }
    }

    let mut out = Vec::new();
    for (value, multiplicity) in clusters {
        let shifted = m.sub(&Matrix::identity(n).scale(&value));
        let basis = nullspace_numeric(&shifted, (tol * 1e3).min(1e-6).max(tol));
        let vector = basis
            .into_iter()
            .next()
            .ok_or(Error::EigenConvergence)?;
        let mv = m.mul_vec(&vector);
        let resid: f64 = mv
            .iter()
            .zip(&vector)
            .map(|(a, b)| (*a - *b * value).norm_sqr())
            .sum::<f64>()
            .sqrt();
        if resid > tol * scale * 10.0 {
            return Err(Error::EigenConvergence);
        }
        out.push(EigenPair { value, multiplicity, vector });
    }
    Ok(out)
}

/// Orthonormal basis of the numeric right kernel: right singular vectors
/// whose singular values fall at or below `tol * sigma_max`.
pub fn nullspace_numeric(m: &CMatrix, tol: f64) -> Vec<Vec<ComplexF>> {
    nullspace_numeric_scaled(m, tol, 0.0)
}

/// Kernel with an explicit scale floor: the cut is tol * max(sigma_max,
/// scale_floor). Systems whose rows cancel down to noise (all entries far
/// below their natural magnitude) then report the full space instead of a
/// noise-rank decision.
pub fn nullspace_numeric_scaled(m: &CMatrix, tol: f64, scale_floor: f64) -> Vec<Vec<ComplexF>> {
    let c = m.cols();
    if c == 0 {
        return vec![];
    }
    if m.rows() == 0 {
        return (0..c)
            .map(|j| {
                let mut v = vec![ComplexF::zero(); c];
                v[j] = ComplexF::new(1.0, 0.0);
                v
            })
            .collect();
    }
    let (sigma, vecs) = match svd_right(m) {
        Ok(r) => r,
        Err(_) => return vec![],
    };
    let sigma_max = sigma.first().copied().unwrap_or(0.0);
    let thresh = tol * sigma_max.max(scale_floor);
    let mut out = Vec::new();
    for (j, &s) in sigma.iter().enumerate() {
        if s <= thresh || sigma_max == 0.0 {
            out.push((0..c).map(|i| vecs[(i, j)]).collect());
        }
    }
    out
}

/// Numeric rank at the same threshold convention.
pub fn rank_numeric(m: &CMatrix, tol: f64) -> usize {
    m.cols() - nullspace_numeric(m, tol).len()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Scalar;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn cmat(rows: &[&[i64]]) -> CMatrix {
        Matrix::from_i64(rows)
    }

    #[test]
    fn svd_diagonal() {
        let (vals, vecs) = svd_right(&cmat(&[&[1, 0], &[0, 2]])).unwrap();
        assert!((vals[0] - 2.0).abs() < 1e-12);
        assert!((vals[1] - 1.0).abs() < 1e-12);
        // columns unit-length
        for j in 0..2 {
            let norm: f64 = (0..2).map(|i| vecs[(i, j)].norm_sqr()).sum();
            assert!((norm - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn svd_reconstructs_column_space() {
        // [[2,1],[1,2]] symmetric: singular values 3, 1, and A v_j has
        // norm sigma_j.
        let m = cmat(&[&[2, 1], &[1, 2]]);
        let (vals, vecs) = svd_right(&m).unwrap();
        assert!((vals[0] - 3.0).abs() < 1e-12);
        assert!((vals[1] - 1.0).abs() < 1e-12);
        for j in 0..2 {
            let v: Vec<ComplexF> = (0..2).map(|i| vecs[(i, j)]).collect();
            let mv = m.mul_vec(&v);
            let norm: f64 = mv.iter().map(|e| e.norm_sqr()).sum::<f64>().sqrt();
            assert!((norm - vals[j]).abs() < 1e-10);
        }
        // tiny singular values stay resolvable well below sqrt(eps)
        let near = cmat(&[&[1, 1], &[1, 1]]);
        let eps_row = Matrix::from_fn(2, 2, |i, j| {
            near[(i, j)] + if i == 1 && j == 1 { ComplexF::new(1e-12, 0.0) } else { ComplexF::zero() }
        });
        let (vals, _) = svd_right(&eps_row).unwrap();
        assert!(vals[1] > 1e-13 && vals[1] < 1e-11, "sigma_min = {:e}", vals[1]);
    }

    #[test]
    fn schur_triangularizes() {
        let mut rng = StdRng::seed_from_u64(7);
        for _ in 0..5 {
            let n = 5;
            let m: CMatrix = Matrix::from_fn(n, n, |_, _| {
                ComplexF::new(rng.gen_range(-3..4) as f64, rng.gen_range(-2..3) as f64)
            });
            let (q, t) = schur(&m).unwrap();
            // Q unitary
            let qhq = conj_transpose(&q).mul(&q);
            for i in 0..n {
                for j in 0..n {
                    let expect = if i == j { 1.0 } else { 0.0 };
                    assert!((qhq[(i, j)] - ComplexF::new(expect, 0.0)).norm() < 1e-9);
                }
            }
            // T triangular
            for i in 0..n {
                for j in 0..i {
                    assert!(t[(i, j)].norm() < 1e-8 * frobenius(&m).max(1.0));
                }
            }
            // M = Q T Q^H
            let recon = q.mul(&t).mul(&conj_transpose(&q));
            for i in 0..n {
                for j in 0..n {
                    assert!((recon[(i, j)] - m[(i, j)]).norm() < 1e-8 * frobenius(&m).max(1.0));
                }
            }
        }
    }

    #[test]
    fn eigen_diag_and_nilpotent() {
        let pairs = eigen(&cmat(&[&[1, 0], &[0, 2]]), 1e-9).unwrap();
        assert_eq!(pairs.len(), 2);
        let mut vals: Vec<f64> = pairs.iter().map(|p| p.value.re).collect();
        vals.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert!((vals[0] - 1.0).abs() < 1e-9 && (vals[1] - 2.0).abs() < 1e-9);

        // nilpotent: single merged eigenvalue 0 with multiplicity 2
        let pairs = eigen(&cmat(&[&[0, 1], &[0, 0]]), 1e-9).unwrap();
        assert_eq!(pairs.len(), 1);
        assert!(pairs[0].value.norm() < 1e-9);
        assert_eq!(pairs[0].multiplicity, 2);
        let total: usize = pairs.iter().map(|p| p.multiplicity).sum();
        assert_eq!(total, 2);
    }

    #[test]
    fn eigen_recovers_known_spectrum() {
        // PDP^-1 with D = diag(1,2,3,4) and an invertible integer P.
        let p: CMatrix = cmat(&[&[1, 1, 0, 2], &[0, 1, 1, -1], &[2, 0, 1, 0], &[1, 0, 0, 2]]);
        let d: CMatrix = cmat(&[&[1, 0, 0, 0], &[0, 2, 0, 0], &[0, 0, 3, 0], &[0, 0, 0, 4]]);
        let pinv = p.inverse().unwrap();
        let m = p.mul(&d).mul(&pinv);
        let pairs = eigen(&m, 1e-9).unwrap();
        let mut vals: Vec<f64> = pairs.iter().map(|p| p.value.re).collect();
        vals.sort_by(|a, b| a.partial_cmp(b).unwrap());
        for (got, want) in vals.iter().zip([1.0, 2.0, 3.0, 4.0]) {
            assert!((got - want).abs() < 1e-9, "got {} want {}", got, want);
        }
        let scale = frobenius(&m);
        for pr in &pairs {
            let mv = m.mul_vec(&pr.vector);
            let resid: f64 = mv
                .iter()
                .zip(&pr.vector)
                .map(|(a, b)| (*a - *b * pr.value).norm_sqr())
                .sum::<f64>()
                .sqrt();
            assert!(resid <= 1e-9 * scale * 10.0);
        }
    }

    #[test]
    fn numeric_nullspace_threshold() {
        // rank-1 matrix: kernel dim 2 of a 3-column matrix
        let m = cmat(&[&[1, 2, 3], &[2, 4, 6]]);
        let ns = nullspace_numeric(&m, 1e-9);
        assert_eq!(ns.len(), 2);
        for v in &ns {
            let mv = m.mul_vec(v);
            assert!(mv.iter().map(|e| e.norm()).sum::<f64>() < 1e-9);
        }
        assert_eq!(rank_numeric(&m, 1e-9), 1);
        // orthonormality
        let dot: ComplexF =
            ns[0].iter().zip(&ns[1]).map(|(a, b)| a.conj() * b).sum();
        assert!(dot.norm() < 1e-10);

        let id: CMatrix = Matrix::identity(3);
        assert!(nullspace_numeric(&id, 1e-9).is_empty());

        let z: CMatrix = Matrix::zero(2, 2);
        assert_eq!(nullspace_numeric(&z, 1e-9).len(), 2);
    }

    #[test]
    fn random_spectra_match_trace() {
        let mut rng = StdRng::seed_from_u64(42);
        for round in 0..10 {
            let n = 3 + (round % 3);
            let m: CMatrix =
                Matrix::from_fn(n, n, |_, _| ComplexF::from_i64(rng.gen_range(-5..6)));
            let (_, t) = schur(&m).unwrap();
            let tr_m: ComplexF = (0..n).map(|i| m[(i, i)]).sum();
            let tr_t: ComplexF = (0..n).map(|i| t[(i, i)]).sum();
            assert!((tr_m - tr_t).norm() < 1e-8 * frobenius(&m).max(1.0));
        }
    }
}
