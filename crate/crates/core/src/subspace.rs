//! Linear subspaces of d×d matrix space, kept as Hilbert-Schmidt-orthonormal
//! bases. Commutants, centers and homogeneous parts all live here.

use crate::error::{Error, Result};
use crate::mat::{orthonormalize_vectors, vec_norm, CMatrix, C64, ZERO};
use crate::tol::Tol;

#[derive(Clone, Debug)]
pub struct MatSubspace {
    ambient: usize,
    basis: Vec<CMatrix>,
}

/// Orthonormal basis of the span of `mats` (modified Gram-Schmidt with one
/// reorthogonalization pass). A candidate is discarded when its residual after
/// projection is at most `tau_rank` times the largest input HS norm (or 1 if
/// all inputs are zero).
pub fn orthonormalize(mats: &[CMatrix], tau_rank: f64) -> Result<MatSubspace> {
    let ambient = match mats.first() {
        Some(m) => m.rows(),
        None => {
            return Err(Error::Input(
                "orthonormalize needs at least one matrix to fix the ambient dimension".into(),
            ))
        }
    };
    MatSubspace::span(ambient, mats, tau_rank)
}

impl MatSubspace {
    pub fn empty(ambient: usize) -> Self {
        MatSubspace {
            ambient,
            basis: Vec::new(),
        }
    }

    /// Orthonormalize `mats` into a basis of their span.
    pub fn span(ambient: usize, mats: &[CMatrix], tau_rank: f64) -> Result<Self> {
        for m in mats {
            if m.rows() != ambient || m.cols() != ambient {
                return Err(Error::DimensionMismatch(format!(
                    "expected {ambient}x{ambient}, found {}x{}",
                    m.rows(),
                    m.cols()
                )));
            }
        }
        let scale = mats
            .iter()
            .map(|m| m.hs_norm())
            .fold(0.0_f64, f64::max)
            .max(1.0);
        let mut s = MatSubspace::empty(ambient);
        for m in mats {
            s.push_within(m.clone(), tau_rank * scale);
        }
        Ok(s)
    }

    /// Wrap a basis that is already orthonormal (coefficient combinations of
    /// an orthonormal family, unitary conjugates, Kronecker pairs).
    pub(crate) fn from_orthonormal(ambient: usize, basis: Vec<CMatrix>) -> Self {
        MatSubspace { ambient, basis }
    }

    fn push_within(&mut self, mut m: CMatrix, threshold: f64) -> bool {
        for _ in 0..2 {
            for b in &self.basis {
                let c = b.hs_inner(&m);
                m.axpy(-c, b);
            }
        }
        let n = m.hs_norm();
        if n > threshold {
            let inv = C64::new(1.0 / n, 0.0);
            self.basis.push(m.scaled(inv));
            true
        } else {
            false
        }
    }

    /// Incremental add used by algebra closure: keeps `m / |m|` when its
    /// residual exceeds `tau_rank * max(1, |m|)`.
    pub fn try_push(&mut self, m: CMatrix, tau_rank: f64) -> bool {
        let threshold = tau_rank * m.hs_norm().max(1.0);
        self.push_within(m, threshold)
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    /// Dimension of the subspace.
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[CMatrix] {
        &self.basis
    }

    pub fn project(&self, a: &CMatrix) -> CMatrix {
        let mut p = CMatrix::zeros(self.ambient, self.ambient);
        for b in &self.basis {
            p.axpy(b.hs_inner(a), b);
        }
        p
    }

    pub fn residual_norm(&self, a: &CMatrix) -> f64 {
        let mut r = a.clone();
        for b in &self.basis {
            let c = b.hs_inner(&r);
            r.axpy(-c, b);
        }
        r.hs_norm()
    }

    /// Membership test: `|A - proj(A)| <= tau_eq * max(1, |A|)`.
    pub fn contains(&self, a: &CMatrix, tau_eq: f64) -> Result<bool> {
        if a.rows() != self.ambient || a.cols() != self.ambient {
            return Err(Error::DimensionMismatch(format!(
                "expected {0}x{0}, found {1}x{2}",
                self.ambient,
                a.rows(),
                a.cols()
            )));
        }
        Ok(self.residual_norm(a) <= tau_eq * a.hs_norm().max(1.0))
    }

    /// Equality of spans: equal dimensions and mutual containment.
    pub fn equal(&self, other: &MatSubspace, tau_eq: f64) -> Result<bool> {
        if self.ambient != other.ambient {
            return Err(Error::DimensionMismatch(format!(
                "ambient {} vs {}",
                self.ambient, other.ambient
            )));
        }
        if self.dim() != other.dim() {
            return Ok(false);
        }
        for b in &self.basis {
            if !other.contains(b, tau_eq)? {
                return Ok(false);
            }
        }
        for b in &other.basis {
            if !self.contains(b, tau_eq)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Intersection, computed as the nullspace of the project-out map
    /// `X -> X - P_other(X)` restricted to this subspace.
    pub fn intersect(&self, other: &MatSubspace, tol: &Tol) -> Result<MatSubspace> {
        if self.ambient != other.ambient {
            return Err(Error::DimensionMismatch(format!(
                "ambient {} vs {}",
                self.ambient, other.ambient
            )));
        }
        if self.basis.is_empty() || other.basis.is_empty() {
            return Ok(MatSubspace::empty(self.ambient));
        }
        let cols: Vec<Vec<C64>> = self
            .basis
            .iter()
            .map(|b| {
                let r = b - &other.project(b);
                r.data().to_vec()
            })
            .collect();
        let null = nullspace_cols(&cols, self.ambient * self.ambient, tol.rank);
        let mats: Vec<CMatrix> = null
            .iter()
            .map(|coef| {
                let mut m = CMatrix::zeros(self.ambient, self.ambient);
                for (c, b) in coef.iter().zip(self.basis.iter()) {
                    m.axpy(*c, b);
                }
                m
            })
            .collect();
        // Orthonormal coefficients over an orthonormal basis stay orthonormal.
        Ok(MatSubspace::from_orthonormal(self.ambient, mats))
    }

    /// Image under `m -> u m u†` for unitary `u`; orthonormality is preserved.
    pub fn conjugated(&self, u: &CMatrix) -> MatSubspace {
        MatSubspace::from_orthonormal(
            self.ambient,
            self.basis.iter().map(|b| b.conj_by(u)).collect(),
        )
    }

    pub fn is_star_closed(&self, tau_eq: f64) -> bool {
        self.basis
            .iter()
            .all(|b| self.residual_norm(&b.adjoint()) <= tau_eq)
    }

    /// Orthonormal basis of self-adjoint matrices spanning the same space;
    /// requires the span to be *-closed.
    pub fn self_adjoint_basis(&self, tol: &Tol) -> Result<Vec<CMatrix>> {
        let mut candidates = Vec::with_capacity(2 * self.basis.len());
        for b in &self.basis {
            let bd = b.adjoint();
            candidates.push((b + &bd).scaled(C64::new(0.5, 0.0)));
            candidates.push((b - &bd).scaled(C64::new(0.0, -0.5)));
        }
        let s = MatSubspace::span(self.ambient, &candidates, tol.rank)?;
        if s.dim() != self.dim() {
            return Err(Error::InvariantViolation(format!(
                "self-adjoint basis of a non-*-closed span: dim {} vs {}",
                s.dim(),
                self.dim()
            )));
        }
        // Gram-Schmidt over self-adjoint inputs with real coefficients keeps
        // every basis vector self-adjoint.
        Ok(s.basis)
    }
}

/// Orthonormal basis of the joint kernel of the coefficient map
/// `c -> sum_j c_j cols[j]` (columns of length `nrows`).
///
/// Left-looking Gaussian elimination with partial pivoting; each column is
/// augmented with a coordinate tail so that a dependent column directly
/// yields its null combination.
pub(crate) fn nullspace_cols(cols: &[Vec<C64>], nrows: usize, tau_rank: f64) -> Vec<Vec<C64>> {
    let k = cols.len();
    if k == 0 {
        return Vec::new();
    }
    let scale = cols
        .iter()
        .map(|c| vec_norm(c))
        .fold(0.0_f64, f64::max)
        .max(1.0);
    let threshold = tau_rank * scale;

    // Augmented columns: [ M e_j ; e_j ].
    let mut work: Vec<Vec<C64>> = cols
        .iter()
        .enumerate()
        .map(|(j, c)| {
            assert_eq!(c.len(), nrows);
            let mut w = Vec::with_capacity(nrows + k);
            w.extend_from_slice(c);
            w.extend(std::iter::repeat_n(ZERO, k));
            w[nrows + j] = C64::new(1.0, 0.0);
            w
        })
        .collect();

    let mut pivots: Vec<(usize, usize)> = Vec::new(); // (row, col)
    let mut row_used = vec![false; nrows];
    let mut null: Vec<Vec<C64>> = Vec::new();

    for col in 0..k {
        for &(rp, cp) in &pivots {
            let f = work[col][rp] / work[cp][rp];
            if f == ZERO {
                continue;
            }
            let (src, dst) = if cp < col {
                let (a, b) = work.split_at_mut(col);
                (&a[cp], &mut b[0])
            } else {
                unreachable!("pivot columns precede the current column")
            };
            for (d, &s) in dst.iter_mut().zip(src.iter()) {
                *d -= f * s;
            }
        }
        let (mut best_row, mut best) = (0usize, 0.0_f64);
        for (r, used) in row_used.iter().enumerate() {
            if !used {
                let v = work[col][r].norm();
                if v > best {
                    best = v;
                    best_row = r;
                }
            }
        }
        if best > threshold {
            row_used[best_row] = true;
            pivots.push((best_row, col));
        } else {
            // Dependent column: the tail holds the combination mapping to ~0.
            null.push(work[col][nrows..].to_vec());
        }
    }
    orthonormalize_vectors(&null, tau_rank)
}

/// Orthonormal basis of `{X : XA = AX for every generator A and its adjoint}`,
/// computed as the joint nullspace of the maps `X -> XA - AX` on coordinate
/// space. An empty generator list yields all of `B(C^d)`; the identity is
/// always contained.
pub fn commutant_solve(gens: &[CMatrix], d: usize, tol: &Tol) -> Result<MatSubspace> {
    for g in gens {
        if g.rows() != d || g.cols() != d {
            return Err(Error::DimensionMismatch(format!(
                "generator is {}x{}, expected {d}x{d}",
                g.rows(),
                g.cols()
            )));
        }
    }
    let mut ops: Vec<CMatrix> = Vec::new();
    for g in gens {
        for cand in [g.clone(), g.adjoint()] {
            // The scalar part commutes with everything; strip it.
            let tr = cand.trace() / C64::new(d as f64, 0.0);
            let mut c = cand;
            let id = CMatrix::identity(d);
            c.axpy(-tr, &id);
            if c.hs_norm() <= tol.rank_for(1.0) {
                continue;
            }
            if ops.iter().any(|o| o.hs_dist(&c) <= 1e-12) {
                continue;
            }
            ops.push(c);
        }
    }

    let full_units = || -> Vec<CMatrix> {
        let mut units = Vec::with_capacity(d * d);
        for i in 0..d {
            for j in 0..d {
                units.push(CMatrix::unit(d, i, j));
            }
        }
        units
    };

    if ops.is_empty() {
        return Ok(MatSubspace::from_orthonormal(d, full_units()));
    }

    let mut basis: Vec<CMatrix> = full_units();
    for a in &ops {
        if basis.len() <= 1 {
            break;
        }
        let cols: Vec<Vec<C64>> = basis
            .iter()
            .map(|x| (&x.matmul(a) - &a.matmul(x)).data().to_vec())
            .collect();
        let null = nullspace_cols(&cols, d * d, tol.rank);
        basis = null
            .iter()
            .map(|coef| {
                let mut m = CMatrix::zeros(d, d);
                for (c, b) in coef.iter().zip(basis.iter()) {
                    m.axpy(*c, b);
                }
                m
            })
            .collect();
    }
    Ok(MatSubspace::from_orthonormal(d, basis))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mat::{C64, ONE, ZERO};
    use rand::Rng;
    use rand::SeedableRng;

    fn tol() -> Tol {
        Tol::default()
    }

    #[test]
    fn collinear_inputs_collapse() {
        let i2 = CMatrix::identity(2);
        let s = orthonormalize(&[i2.clone(), i2.scaled(C64::new(2.0, 0.0))], 1e-9).unwrap();
        assert_eq!(s.dim(), 1);
        assert!((s.basis()[0].hs_norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn orthogonal_pair_keeps_both() {
        let s = orthonormalize(
            &[CMatrix::identity(2), CMatrix::diag_real(&[1.0, -1.0])],
            1e-9,
        )
        .unwrap();
        assert_eq!(s.dim(), 2);
    }

    /// Independent rank oracle: plain row reduction on coordinate vectors.
    #[allow(clippy::needless_range_loop)]
    fn rank_by_row_reduction(mats: &[CMatrix]) -> usize {
        let mut rows: Vec<Vec<C64>> = mats.iter().map(|m| m.data().to_vec()).collect();
        let ncols = rows[0].len();
        let mut rank = 0;
        let mut col = 0;
        while col < ncols && rank < rows.len() {
            let (mut best, mut best_row) = (0.0, rank);
            for (r, row) in rows.iter().enumerate().skip(rank) {
                if row[col].norm() > best {
                    best = row[col].norm();
                    best_row = r;
                }
            }
            if best > 1e-10 {
                rows.swap(rank, best_row);
                for r in 0..rows.len() {
                    if r != rank {
                        let f = rows[r][col] / rows[rank][col];
                        for c in col..ncols {
                            let s = rows[rank][c];
                            rows[r][c] -= f * s;
                        }
                    }
                }
                rank += 1;
            }
            col += 1;
        }
        rank
    }

    #[test]
    fn random_mats_plus_pairwise_sums_have_rank_four() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let mut mats: Vec<CMatrix> = (0..4)
            .map(|_| {
                CMatrix::from_fn(3, 3, |_, _| {
                    C64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5)
                })
            })
            .collect();
        let sums: Vec<CMatrix> = (0..4)
            .flat_map(|i| ((i + 1)..4).map(move |j| (i, j)))
            .map(|(i, j)| &mats[i].clone() + &mats[j].clone())
            .collect();
        mats.extend(sums);
        assert_eq!(rank_by_row_reduction(&mats), 4);
        let s = orthonormalize(&mats, 1e-9).unwrap();
        assert_eq!(s.dim(), 4);
    }

    #[test]
    fn contains_scalars_and_rejects_traceless() {
        let s = orthonormalize(&[CMatrix::identity(2)], 1e-9).unwrap();
        assert!(s
            .contains(&CMatrix::identity(2).scaled(C64::new(3.0, 0.0)), 1e-8)
            .unwrap());
        assert!(!s.contains(&CMatrix::diag_real(&[1.0, -1.0]), 1e-8).unwrap());
    }

    #[test]
    fn contains_dimension_mismatch_is_an_error() {
        let s = orthonormalize(&[CMatrix::identity(2)], 1e-9).unwrap();
        assert!(s.contains(&CMatrix::identity(3), 1e-8).is_err());
    }

    #[test]
    fn commutant_of_full_matrix_algebra_is_scalar() {
        // Oracle for membership: the commutant of M_2 is exactly the scalars,
        // solved directly from X E12 = E12 X and X E21 = E21 X.
        let gens = vec![CMatrix::unit(2, 0, 1), CMatrix::unit(2, 1, 0)];
        let s = commutant_solve(&gens, 2, &tol()).unwrap();
        assert_eq!(s.dim(), 1);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for _ in 0..20 {
            let a = CMatrix::from_fn(2, 2, |_, _| {
                C64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5)
            });
            let scalar_part = a.trace() / C64::new(2.0, 0.0);
            let mut traceless = a.clone();
            traceless.axpy(-scalar_part, &CMatrix::identity(2));
            let is_scalar = traceless.hs_norm() < 1e-10;
            assert_eq!(s.contains(&a, 1e-8).unwrap(), is_scalar);
        }
    }

    #[test]
    fn commutant_of_empty_generators_is_everything() {
        let s = commutant_solve(&[], 3, &tol()).unwrap();
        assert_eq!(s.dim(), 9);
    }

    #[test]
    fn commutant_of_generic_diagonal_is_diagonal() {
        // By hand: X diag(1,2) = diag(1,2) X forces X12 = 2 X12 and
        // 2 X21 = X21, so X is diagonal.
        let s = commutant_solve(&[CMatrix::diag_real(&[1.0, 2.0])], 2, &tol()).unwrap();
        assert_eq!(s.dim(), 2);
        assert!(s.contains(&CMatrix::diag_real(&[5.0, -1.0]), 1e-8).unwrap());
        assert!(!s.contains(&CMatrix::unit(2, 0, 1), 1e-8).unwrap());
    }

    #[test]
    fn even_part_of_m2_under_diagonal_grading_is_diagonal() {
        let g = CMatrix::diag_real(&[1.0, -1.0]);
        let units = [
            CMatrix::unit(2, 0, 0),
            CMatrix::unit(2, 0, 1),
            CMatrix::unit(2, 1, 0),
            CMatrix::unit(2, 1, 1),
        ];
        let even: Vec<CMatrix> = units
            .iter()
            .map(|u| (&u.clone() + &u.conj_by(&g)).scaled(C64::new(0.5, 0.0)))
            .collect();
        let even_space = MatSubspace::span(2, &even, 1e-9).unwrap();
        let diagonals =
            MatSubspace::span(2, &[CMatrix::unit(2, 0, 0), CMatrix::unit(2, 1, 1)], 1e-9).unwrap();
        assert!(even_space.equal(&diagonals, 1e-8).unwrap());
    }

    #[test]
    fn same_span_with_rescaled_basis_is_equal() {
        let a = orthonormalize(&[CMatrix::identity(3)], 1e-9).unwrap();
        let b = orthonormalize(&[CMatrix::identity(3).scaled(C64::new(2.0, 0.0))], 1e-9).unwrap();
        assert!(a.equal(&b, 1e-8).unwrap());
    }

    #[test]
    fn intersect_diagonal_with_scalar_plus_sigma_x() {
        let diag =
            MatSubspace::span(2, &[CMatrix::unit(2, 0, 0), CMatrix::unit(2, 1, 1)], 1e-9).unwrap();
        let sx = CMatrix::from_rows(vec![vec![ZERO, ONE], vec![ONE, ZERO]]);
        let other = MatSubspace::span(2, &[CMatrix::identity(2), sx], 1e-9).unwrap();
        let inter = diag.intersect(&other, &tol()).unwrap();
        assert_eq!(inter.dim(), 1);
        assert!(inter.contains(&CMatrix::identity(2), 1e-8).unwrap());
    }

    #[test]
    fn intersect_disjoint_blocks_is_zero() {
        let mut top = Vec::new();
        let mut bottom = Vec::new();
        for i in 0..2 {
            for j in 0..2 {
                top.push(CMatrix::unit(4, i, j));
                bottom.push(CMatrix::unit(4, i + 2, j + 2));
            }
        }
        let s = MatSubspace::span(4, &top, 1e-9).unwrap();
        let t = MatSubspace::span(4, &bottom, 1e-9).unwrap();
        assert_eq!(s.intersect(&t, &tol()).unwrap().dim(), 0);
    }

    #[test]
    fn nullspace_finds_known_kernel() {
        // cols = [v, 2v, w] has exactly one independent null direction
        // (2, -1, 0) up to scale.
        let v = vec![ONE, ZERO, ONE];
        let v2 = vec![C64::new(2.0, 0.0), ZERO, C64::new(2.0, 0.0)];
        let w = vec![ZERO, ONE, ZERO];
        let null = nullspace_cols(&[v.clone(), v2, w], 3, 1e-9);
        assert_eq!(null.len(), 1);
        let c = &null[0];
        // Check sum c_j col_j = 0.
        let combo0 = c[0] * v[0] + c[1] * C64::new(2.0, 0.0) + c[2] * ZERO;
        assert!(combo0.norm() < 1e-10);
        assert!(c[2].norm() < 1e-10);
    }
}
