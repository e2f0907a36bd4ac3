//! Hermitian eigendecomposition by cyclic Jacobi sweeps, plus the spectral
//! helpers built on it (clustered spectral projections, range projections,
//! pseudo-inverse square roots).

use crate::error::{Error, Result};
use crate::mat::{CMatrix, C64, ONE};
use crate::tol::Tol;

const OFF_TARGET: f64 = 1e-12;
const MAX_SWEEPS: usize = 100;

fn off_diagonal_norm(a: &CMatrix) -> f64 {
    let n = a.rows();
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += a.get(i, j).norm_sqr();
            }
        }
    }
    s.sqrt()
}

/// Eigenvalues (ascending) and a unitary whose columns are the eigenvectors.
/// Input must be self-adjoint within `tol.eq`.
pub fn hermitian_eig(a: &CMatrix, tol: &Tol) -> Result<(Vec<f64>, CMatrix)> {
    if !a.is_square() {
        return Err(Error::Input(
            "eigendecomposition of a non-square matrix".into(),
        ));
    }
    let scale = a.hs_norm().max(1.0);
    if a.hs_dist(&a.adjoint()) > tol.eq * scale {
        return Err(Error::Input(
            "eigendecomposition of a non-self-adjoint matrix".into(),
        ));
    }
    let n = a.rows();
    // Symmetrize away the admissible drift before sweeping.
    let mut m = (&a.clone() + &a.adjoint()).scaled(C64::new(0.5, 0.0));
    let mut v = CMatrix::identity(n);

    let mut converged = false;
    for _ in 0..MAX_SWEEPS {
        if off_diagonal_norm(&m) <= OFF_TARGET * scale {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = m.get(p, q);
                let b = apq.norm();
                if b <= OFF_TARGET * scale / (n as f64) {
                    continue;
                }
                let app = m.get(p, p).re;
                let aqq = m.get(q, q).re;
                let phase = apq / C64::new(b, 0.0); // e^{i beta}
                let tau = (aqq - app) / (2.0 * b);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    1.0 / (tau - (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                // 2x2 unitary U = diag(1, conj(phase)) * [[c, s], [-s, c]]:
                // U_pp = c, U_pq = s, U_qp = -s*conj(phase), U_qq = c*conj(phase).
                let upp = C64::new(c, 0.0);
                let upq = C64::new(s, 0.0);
                let uqp = -C64::new(s, 0.0) * phase.conj();
                let uqq = C64::new(c, 0.0) * phase.conj();

                // m <- U* m U: columns then rows.
                for i in 0..n {
                    let mip = m.get(i, p);
                    let miq = m.get(i, q);
                    m.set(i, p, mip * upp + miq * uqp);
                    m.set(i, q, mip * upq + miq * uqq);
                }
                for j in 0..n {
                    let mpj = m.get(p, j);
                    let mqj = m.get(q, j);
                    m.set(p, j, upp.conj() * mpj + uqp.conj() * mqj);
                    m.set(q, j, upq.conj() * mpj + uqq.conj() * mqj);
                }
                // v <- v U.
                for i in 0..n {
                    let vip = v.get(i, p);
                    let viq = v.get(i, q);
                    v.set(i, p, vip * upp + viq * uqp);
                    v.set(i, q, vip * upq + viq * uqq);
                }
            }
        }
    }
    if !converged && off_diagonal_norm(&m) > OFF_TARGET * scale {
        return Err(Error::InternalLimit(format!(
            "jacobi sweeps did not converge within {MAX_SWEEPS} passes"
        )));
    }

    let mut pairs: Vec<(f64, usize)> = (0..n).map(|i| (m.get(i, i).re, i)).collect();
    pairs.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    let eigenvalues: Vec<f64> = pairs.iter().map(|&(l, _)| l).collect();
    let vectors = CMatrix::from_fn(n, n, |i, j| v.get(i, pairs[j].1));
    Ok((eigenvalues, vectors))
}

/// Spectral decomposition of a self-adjoint matrix with eigenvalues clustered
/// when gaps are at most `tau_cluster * max(1, |A|)`. Returns ascending
/// `(eigenvalue, projection)` pairs whose projections sum to the identity.
pub fn spectral_projections(
    a: &CMatrix,
    tau_cluster: f64,
    tol: &Tol,
) -> Result<Vec<(f64, CMatrix)>> {
    let (eigenvalues, v) = hermitian_eig(a, tol)?;
    let n = a.rows();
    let scale = a.hs_norm().max(1.0);
    let mut out: Vec<(f64, CMatrix)> = Vec::new();
    let mut start = 0;
    while start < n {
        let mut end = start + 1;
        while end < n && eigenvalues[end] - eigenvalues[end - 1] <= tau_cluster * scale {
            end += 1;
        }
        let mut p = CMatrix::zeros(n, n);
        for k in start..end {
            let col: Vec<C64> = (0..n).map(|i| v.get(i, k)).collect();
            p.axpy(ONE, &CMatrix::outer(&col, &col));
        }
        let mean = eigenvalues[start..end].iter().sum::<f64>() / (end - start) as f64;
        out.push((mean, p));
        start = end;
    }
    Ok(out)
}

/// Projection onto the range of `m`, computed from the nonzero spectrum of
/// `m m†`.
pub fn range_projection(m: &CMatrix, tol: &Tol) -> Result<CMatrix> {
    let h = m.matmul(&m.adjoint());
    let (eigenvalues, v) = hermitian_eig(&h, tol)?;
    let top = eigenvalues.iter().fold(0.0_f64, |a, &b| a.max(b));
    let n = m.rows();
    let mut p = CMatrix::zeros(n, n);
    for (k, &l) in eigenvalues.iter().enumerate() {
        if l > tol.rank * top.max(1.0) {
            let col: Vec<C64> = (0..n).map(|i| v.get(i, k)).collect();
            p.axpy(ONE, &CMatrix::outer(&col, &col));
        }
    }
    Ok(p)
}

/// Pseudo-inverse square root of a positive semidefinite matrix.
pub fn pinv_sqrt(h: &CMatrix, tol: &Tol) -> Result<CMatrix> {
    let (eigenvalues, v) = hermitian_eig(h, tol)?;
    let top = eigenvalues.iter().fold(0.0_f64, |a, &b| a.max(b));
    let n = h.rows();
    let mut out = CMatrix::zeros(n, n);
    for (k, &l) in eigenvalues.iter().enumerate() {
        if l > tol.rank * top.max(1.0) {
            let col: Vec<C64> = (0..n).map(|i| v.get(i, k)).collect();
            out.axpy(C64::new(1.0 / l.sqrt(), 0.0), &CMatrix::outer(&col, &col));
        }
    }
    Ok(out)
}

/// Smallest eigenvalue of a self-adjoint matrix.
pub fn min_eigenvalue(a: &CMatrix, tol: &Tol) -> Result<f64> {
    let (eigenvalues, _) = hermitian_eig(a, tol)?;
    Ok(eigenvalues.first().copied().unwrap_or(0.0))
}
