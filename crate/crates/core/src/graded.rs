//! Gradings: a self-adjoint unitary Γ normalizing an algebra, even/odd
//! decomposition, central/balanced decision procedures, the twist algebra
//! `R^(0) + R^(1)Γ`, the V-conjugation onto it, and center splitting.

use crate::algebra::{rank_of, VNAlgebra};
use crate::eig::pinv_sqrt;
use crate::error::{Error, Result};
use crate::mat::{orthonormalize_vectors, CMatrix, C64, ONE};
use crate::random::{random_element, rng_from};
use crate::subspace::{nullspace_cols, MatSubspace};
use crate::tol::Tol;

const MAX_ISOMETRY_ATTEMPTS: u32 = 8;

/// A von Neumann algebra together with a grading operator: a self-adjoint
/// unitary Γ with `Γ A Γ = A`.
#[derive(Clone, Debug)]
pub struct GradedAlgebra {
    alg: VNAlgebra,
    gamma: CMatrix,
}

/// Even/odd decomposition of a graded algebra.
#[derive(Clone, Debug)]
pub struct GradedSplit {
    pub even: MatSubspace,
    pub odd: MatSubspace,
}

impl GradedAlgebra {
    /// Validates that `gamma` is a self-adjoint unitary normalizing the
    /// algebra.
    pub fn new(alg: VNAlgebra, gamma: CMatrix) -> Result<Self> {
        let d = alg.hilbert_dim();
        let tol = *alg.tol();
        if gamma.rows() != d || gamma.cols() != d {
            return Err(Error::DimensionMismatch(format!(
                "grading is {}x{}, algebra acts on C^{d}",
                gamma.rows(),
                gamma.cols()
            )));
        }
        if !gamma.is_self_adjoint(tol.eq) {
            return Err(Error::Validation("grading not self-adjoint".into()));
        }
        let id = CMatrix::identity(d);
        if gamma.matmul(&gamma).hs_dist(&id) > tol.eq {
            return Err(Error::Validation("grading not involutive".into()));
        }
        for b in alg.space().basis() {
            if !alg.contains(&b.conj_by(&gamma))? {
                return Err(Error::Validation(
                    "grading does not normalize algebra".into(),
                ));
            }
        }
        Ok(GradedAlgebra { alg, gamma })
    }

    /// Trivial grading Γ = I (odd part {0}).
    pub fn trivially_graded(alg: VNAlgebra) -> Self {
        let d = alg.hilbert_dim();
        GradedAlgebra {
            gamma: CMatrix::identity(d),
            alg,
        }
    }

    pub fn alg(&self) -> &VNAlgebra {
        &self.alg
    }

    pub fn gamma(&self) -> &CMatrix {
        &self.gamma
    }

    pub fn hilbert_dim(&self) -> usize {
        self.alg.hilbert_dim()
    }

    pub fn tol(&self) -> &Tol {
        self.alg.tol()
    }

    /// `Γ x Γ`.
    pub fn theta(&self, x: &CMatrix) -> CMatrix {
        x.conj_by(&self.gamma)
    }

    /// Even/odd spans of `(B ± ΓBΓ)/2` over the algebra basis.
    pub fn split(&self) -> Result<GradedSplit> {
        split_by(self.alg.space(), &self.gamma, self.tol())
    }

    /// `x = x0 + x1` with `x0 = (x + ΓxΓ)/2`, `x1 = (x - ΓxΓ)/2`.
    pub fn homogeneous_parts(&self, x: &CMatrix) -> Result<(CMatrix, CMatrix)> {
        if !self.alg.contains(x)? {
            return Err(Error::Input("element lies outside the algebra".into()));
        }
        Ok(homogeneous_parts_of(x, &self.gamma))
    }

    /// Degree of a homogeneous element (0 even, 1 odd), or None.
    pub fn degree_of(&self, x: &CMatrix) -> Option<u8> {
        let t = self.theta(x);
        let tau = self.tol().eq_for(x.hs_norm());
        if t.hs_dist(x) <= tau {
            Some(0)
        } else if (&t + x).hs_norm() <= tau {
            Some(1)
        } else {
            None
        }
    }

    /// The center with the same grading; its construction checks that Γ
    /// normalizes the center.
    pub fn graded_center(&self) -> Result<GradedAlgebra> {
        GradedAlgebra::new(self.alg.center()?, self.gamma.clone())
    }

    /// Whether the even part of the center is the scalars.
    pub fn is_central(&self) -> Result<bool> {
        let center = self.alg.center()?;
        let split = self.split()?;
        let even_center = center.space().intersect(&split.even, self.tol())?;
        Ok(even_center.dim() == 1)
    }

    /// The odd part of the center: empty, or the line `C b` spanned by a
    /// self-adjoint unitary `b` (phase fixed so the first significant entry
    /// in row-major order is positive). Requires a central grading; an odd
    /// center of dimension >= 2 violates the structure and is an error.
    pub fn odd_center_line(&self) -> Result<Option<CMatrix>> {
        if !self.is_central()? {
            return Err(Error::Precondition(
                "odd center line requires a central grading".into(),
            ));
        }
        let center = self.alg.center()?;
        let split = self.split()?;
        let line = center.space().intersect(&split.odd, self.tol())?;
        match line.dim() {
            0 => Ok(None),
            1 => {
                let v = &line.basis()[0];
                let vd = v.adjoint();
                let mut s = (v + &vd).scaled(C64::new(0.5, 0.0));
                if s.hs_norm() <= self.tol().rank_for(1.0) {
                    // v anti-self-adjoint: i v is self-adjoint on the line.
                    s = (v - &vd).scaled(C64::new(0.0, 0.5));
                }
                let d = self.hilbert_dim();
                let s2 = s.matmul(&s);
                let c = s2.trace().re / d as f64;
                if c <= 0.0
                    || s2.hs_dist(&CMatrix::identity(d).scaled(C64::new(c, 0.0)))
                        > self.tol().eq_for(c)
                {
                    return Err(Error::InvariantViolation(
                        "odd central element does not square to a scalar".into(),
                    ));
                }
                let b = fix_sign(&s.scaled(C64::new(1.0 / c.sqrt(), 0.0)), self.tol());
                Ok(Some(b))
            }
            n => Err(Error::InvariantViolation(format!(
                "odd center has dimension {n}, expected at most a line"
            ))),
        }
    }

    /// The twist algebra spanned by the even part and `{BΓ : B odd}`, graded
    /// by the same Γ.
    pub fn twist(&self) -> Result<GradedAlgebra> {
        let split = self.split()?;
        let mut mats: Vec<CMatrix> = split.even.basis().to_vec();
        for b in split.odd.basis() {
            mats.push(b.matmul(&self.gamma));
        }
        // Even ⊥ odd·Γ in HS, and B -> BΓ preserves orthonormality.
        let space = MatSubspace::from_orthonormal(self.hilbert_dim(), mats);
        let alg = VNAlgebra::from_space(space, *self.tol())?;
        GradedAlgebra::new(alg, self.gamma.clone())
    }

    /// `V = (1-i)/2 I + (1+i)/2 Γ` and the conjugated algebra
    /// `{V† B V}`, which coincides with the twist algebra; on elements,
    /// `V† A V = A^(0) + i A^(1) Γ`.
    pub fn v_conjugate(&self) -> Result<(CMatrix, VNAlgebra)> {
        let d = self.hilbert_dim();
        let half = C64::new(0.5, 0.0);
        let mut v = CMatrix::identity(d).scaled(C64::new(0.5, -0.5));
        v.axpy(C64::new(1.0, 1.0) * half, &self.gamma);
        if !v.is_unitary(self.tol().eq) {
            return Err(Error::NumericalInconsistency(
                "V-conjugation operator is not unitary".into(),
            ));
        }
        let vd = v.adjoint();
        let image_mats: Vec<CMatrix> = self
            .alg
            .space()
            .basis()
            .iter()
            .map(|b| vd.matmul(b).matmul(&v))
            .collect();
        let space = MatSubspace::from_orthonormal(d, image_mats);
        let image = VNAlgebra::from_space(space, *self.tol())?;
        Ok((v, image))
    }

    /// Splits the center under the grading: `P` sums the Γ-fixed minimal
    /// central projections, `Q` picks one representative per swapped pair
    /// (lowest enumeration index), so that `ΓQΓ = (I - P) - Q`.
    pub fn center_grading_split(&self, seed: u64) -> Result<(CMatrix, CMatrix)> {
        let d = self.hilbert_dim();
        let zs = self.alg.minimal_central_projections(seed)?;
        let pairing = self.pair_projections(&zs)?;
        let mut p = CMatrix::zeros(d, d);
        let mut q = CMatrix::zeros(d, d);
        for (i, &j) in pairing.iter().enumerate() {
            if i == j {
                p.axpy(ONE, zs[i].matrix());
            } else if i < j {
                q.axpy(ONE, zs[i].matrix());
            }
        }
        let lhs = q.conj_by(&self.gamma);
        let mut rhs = CMatrix::identity(d);
        rhs.axpy(-ONE, &p);
        rhs.axpy(-ONE, &q);
        if lhs.hs_dist(&rhs) > self.tol().eq_for(1.0) {
            return Err(Error::NumericalInconsistency(
                "center splitting failed: Γ Q Γ != (I - P) - Q".into(),
            ));
        }
        Ok((p, q))
    }

    /// For each minimal central projection index, the index of its image
    /// under Γ-conjugation (an involutive permutation).
    pub(crate) fn pair_projections(
        &self,
        zs: &[crate::algebra::ProjectionHandle],
    ) -> Result<Vec<usize>> {
        let mut pairing = vec![usize::MAX; zs.len()];
        for (i, z) in zs.iter().enumerate() {
            let image = z.matrix().conj_by(&self.gamma);
            let mut found = None;
            for (j, w) in zs.iter().enumerate() {
                if image.hs_dist(w.matrix()) <= self.tol().eq_for(1.0) {
                    found = Some(j);
                    break;
                }
            }
            pairing[i] = found.ok_or_else(|| {
                Error::NumericalInconsistency(
                    "grading does not permute the minimal central projections".into(),
                )
            })?;
        }
        for (i, &j) in pairing.iter().enumerate() {
            if pairing[j] != i {
                return Err(Error::NumericalInconsistency(
                    "grading action on central projections is not involutive".into(),
                ));
            }
        }
        Ok(pairing)
    }

    /// Decides "balanced" structurally and constructs an odd self-adjoint
    /// unitary when one exists:
    /// swapped central pairs contribute `z - ΓzΓ`; a Γ-fixed summand
    /// contributes a block off-diagonal symmetry when the implementing
    /// symmetry of the summand has balanced signature, and obstructs
    /// otherwise.
    pub fn find_odd_symmetry(&self, seed: u64) -> Result<Option<CMatrix>> {
        let d = self.hilbert_dim();
        let tol = *self.tol();
        let zs = self.alg.minimal_central_projections(seed)?;
        let pairing = self.pair_projections(&zs)?;
        let mut total = CMatrix::zeros(d, d);
        let mut rng = rng_from(seed ^ 0x9e37_79b9_7f4a_7c15);
        for (i, &j) in pairing.iter().enumerate() {
            if i < j {
                // Swapped pair: z - ΓzΓ is odd, self-adjoint, squares to the
                // pair's identity.
                total.axpy(ONE, zs[i].matrix());
                total.axpy(-ONE, zs[j].matrix());
            } else if i == j {
                let z = zs[i].matrix();
                let summand = self.alg.compress(z)?;
                let theta_images: Vec<CMatrix> =
                    summand.basis().iter().map(|b| self.theta(b)).collect();
                let u = implementing_symmetry(&summand, z, &theta_images, &tol)?;
                // Signature balance: tr(u) = (p - q) * multiplicity.
                if u.trace().re.abs() > 0.5 {
                    return Ok(None);
                }
                let w = odd_symmetry_on_summand(&summand, z, &u, &mut rng, &tol, seed)?;
                total.axpy(ONE, &w);
            }
        }
        // Verify: in algebra, odd, self-adjoint, unitary.
        let tau = tol.eq_for(1.0);
        let id = CMatrix::identity(d);
        let ok = self.alg.contains(&total)?
            && (&self.theta(&total) + &total).hs_norm() <= tau * 4.0
            && total.is_self_adjoint(tau * 4.0)
            && total.matmul(&total).hs_dist(&id) <= tau * 4.0;
        if !ok {
            return Err(Error::NumericalInconsistency(
                "constructed odd symmetry failed verification".into(),
            ));
        }
        Ok(Some(total))
    }

    /// Conjugate the whole structure by a unitary: `(QAQ†, QΓQ†)`.
    pub fn conjugated_by(&self, q: &CMatrix) -> Result<GradedAlgebra> {
        if !q.is_unitary(self.tol().eq) {
            return Err(Error::Input("conjugation requires a unitary".into()));
        }
        let space = self.alg.space().conjugated(q);
        let gens: Vec<CMatrix> = self.alg.generators().iter().map(|g| g.conj_by(q)).collect();
        let alg = VNAlgebra::from_space(space, *self.tol())?.with_generators(gens);
        GradedAlgebra::new(alg, self.gamma.conj_by(q))
    }
}

pub(crate) fn homogeneous_parts_of(x: &CMatrix, gamma: &CMatrix) -> (CMatrix, CMatrix) {
    let t = x.conj_by(gamma);
    let half = C64::new(0.5, 0.0);
    ((x + &t).scaled(half), (x - &t).scaled(half))
}

/// Even/odd spans of an arbitrary Γ-invariant subspace.
pub fn split_by(space: &MatSubspace, gamma: &CMatrix, tol: &Tol) -> Result<GradedSplit> {
    let d = space.ambient_dim();
    let mut evens = Vec::with_capacity(space.dim());
    let mut odds = Vec::with_capacity(space.dim());
    for b in space.basis() {
        let (e, o) = homogeneous_parts_of(b, gamma);
        evens.push(e);
        odds.push(o);
    }
    let even = MatSubspace::span(d, &evens, tol.rank)?;
    let odd = MatSubspace::span(d, &odds, tol.rank)?;
    if even.dim() + odd.dim() != space.dim() {
        return Err(Error::NumericalInconsistency(format!(
            "even/odd split dimensions {} + {} != {}",
            even.dim(),
            odd.dim(),
            space.dim()
        )));
    }
    Ok(GradedSplit { even, odd })
}

/// Normalize the global sign of a self-adjoint matrix: the first entry of
/// significant modulus (row-major) gets positive real part (or positive
/// imaginary part when its real part vanishes).
pub(crate) fn fix_sign(m: &CMatrix, tol: &Tol) -> CMatrix {
    for &z in m.data() {
        if z.norm() > tol.eq_for(1.0) {
            let flip = if z.re.abs() > 1e-12 {
                z.re < 0.0
            } else {
                z.im < 0.0
            };
            return if flip { -m } else { m.clone() };
        }
    }
    m.clone()
}

/// Finds the self-adjoint unitary of a factor summand implementing a given
/// involutive automorphism from the images of a basis: solves the
/// intertwining system `θ(B_i) u = u B_i` inside the summand (the solution
/// space must be a line), normalizes to a unitary, and rephases so the
/// result is self-adjoint and squares to the summand's unit.
pub fn implementing_symmetry(
    summand: &MatSubspace,
    unit: &CMatrix,
    theta_images: &[CMatrix],
    tol: &Tol,
) -> Result<CMatrix> {
    if theta_images.len() != summand.dim() {
        return Err(Error::Input(
            "need one automorphism image per summand basis element".into(),
        ));
    }
    let d = summand.ambient_dim();
    let k = summand.dim();
    let cols: Vec<Vec<C64>> = (0..k)
        .map(|j| {
            let s = &summand.basis()[j];
            let mut col = Vec::with_capacity(k * d * d);
            for (i, b) in summand.basis().iter().enumerate() {
                let m = &theta_images[i].matmul(s) - &s.matmul(b);
                col.extend_from_slice(m.data());
            }
            col
        })
        .collect();
    let null = nullspace_cols(&cols, k * d * d, tol.rank);
    if null.len() != 1 {
        return Err(Error::Input(format!(
            "intertwiner space has dimension {}, summand is not a factor or the map is not an automorphism",
            null.len()
        )));
    }
    let mut u0 = CMatrix::zeros(d, d);
    for (c, b) in null[0].iter().zip(summand.basis().iter()) {
        u0.axpy(*c, b);
    }
    // u0† u0 is a positive scalar multiple of the unit.
    let g = u0.adjoint().matmul(&u0);
    let unit_rank = rank_of(unit)? as f64;
    let c = g.trace().re / unit_rank;
    if c <= 0.0 || g.hs_dist(&unit.scaled(C64::new(c, 0.0))) > tol.eq_for(c) {
        return Err(Error::NumericalInconsistency(
            "intertwiner is not a unitary multiple".into(),
        ));
    }
    let u1 = u0.scaled(C64::new(1.0 / c.sqrt(), 0.0));
    // u1² = α·unit with |α| = 1; rephase by e^{-iφ/2}.
    let alpha = u1.matmul(&u1).trace() / C64::new(unit_rank, 0.0);
    if (alpha.norm() - 1.0).abs() > tol.eq_for(1.0) {
        return Err(Error::NumericalInconsistency(
            "squared intertwiner is not a unimodular multiple of the unit".into(),
        ));
    }
    let phi = alpha.arg();
    let u2 = u1.scaled(C64::from_polar(1.0, -phi / 2.0));
    let tau = tol.eq_for(1.0) * 4.0;
    if !u2.is_self_adjoint(tau) || u2.matmul(&u2).hs_dist(unit) > tau {
        return Err(Error::NumericalInconsistency(
            "rephased intertwiner is not a self-adjoint involution".into(),
        ));
    }
    let u = fix_sign(&u2, tol);
    // Confirm the intertwining on the basis.
    for (b, img) in summand.basis().iter().zip(theta_images.iter()) {
        if u.matmul(b).matmul(&u).hs_dist(img) > tol.eq_for(b.hs_norm()) * 4.0 {
            return Err(Error::NumericalInconsistency(
                "implementing symmetry fails on a basis element".into(),
            ));
        }
    }
    Ok(u)
}

/// Builds an odd self-adjoint unitary on a Γ-fixed factor summand with
/// balanced implementing symmetry `u`: a partial isometry `v` from the +1 to
/// the -1 eigenspace of `u` inside the summand gives `w = v + v†`.
fn odd_symmetry_on_summand(
    summand: &MatSubspace,
    unit: &CMatrix,
    u: &CMatrix,
    rng: &mut rand_chacha::ChaCha8Rng,
    tol: &Tol,
    seed: u64,
) -> Result<CMatrix> {
    let half = C64::new(0.5, 0.0);
    let p_plus = (unit + u).scaled(half);
    let p_minus = (unit - u).scaled(half);
    let tau = tol.eq_for(1.0) * 8.0;
    for _ in 0..MAX_ISOMETRY_ATTEMPTS {
        let y = random_element(rng, summand);
        let x = p_minus.matmul(&y).matmul(&p_plus);
        let g = x.adjoint().matmul(&x);
        let s = pinv_sqrt(&g, tol)?;
        let v = x.matmul(&s);
        if v.adjoint().matmul(&v).hs_dist(&p_plus) <= tau
            && v.matmul(&v.adjoint()).hs_dist(&p_minus) <= tau
        {
            return Ok(&v + &v.adjoint());
        }
    }
    Err(Error::DegenerateSpectrum {
        seed,
        attempts: MAX_ISOMETRY_ATTEMPTS,
        context: "partial isometry between eigenspaces stayed rank-deficient".into(),
    })
}

/// An orthogonal family of rank-one even projections summing to the
/// identity, built from eigenbases of the two spectral halves of Γ.
pub fn minimal_even_projections(d: usize, gamma: &CMatrix, tol: &Tol) -> Result<Vec<CMatrix>> {
    if gamma.rows() != d || gamma.cols() != d {
        return Err(Error::DimensionMismatch(format!(
            "grading is {}x{}, expected {d}x{d}",
            gamma.rows(),
            gamma.cols()
        )));
    }
    let id = CMatrix::identity(d);
    if !gamma.is_self_adjoint(tol.eq) || gamma.matmul(gamma).hs_dist(&id) > tol.eq_for(1.0) {
        return Err(Error::Input(
            "grading must be a self-adjoint unitary".into(),
        ));
    }
    let half = C64::new(0.5, 0.0);
    let p = (&id + gamma).scaled(half);
    let q = (&id - gamma).scaled(half);
    let mut out = Vec::with_capacity(d);
    for part in [p, q] {
        let cols: Vec<Vec<C64>> = (0..d)
            .map(|j| (0..d).map(|i| part.get(i, j)).collect())
            .collect();
        for v in orthonormalize_vectors(&cols, tol.rank) {
            out.push(CMatrix::outer(&v, &v));
        }
    }
    if out.len() != d {
        return Err(Error::NumericalInconsistency(format!(
            "even projection family has {} members, expected {d}",
            out.len()
        )));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mat::ZERO;

    fn tol() -> Tol {
        Tol::default()
    }

    fn sigma_x() -> CMatrix {
        CMatrix::from_rows(vec![vec![ZERO, ONE], vec![ONE, ZERO]])
    }

    /// C ⊕ C with the swap grading (the minimal central non-factor example).
    fn sp1() -> GradedAlgebra {
        let alg = VNAlgebra::generate(&[CMatrix::unit(2, 0, 0), CMatrix::unit(2, 1, 1)], 2, tol())
            .unwrap();
        GradedAlgebra::new(alg, sigma_x()).unwrap()
    }

    fn m2_diag_graded() -> GradedAlgebra {
        let alg = VNAlgebra::full(2, tol());
        GradedAlgebra::new(alg, CMatrix::diag_real(&[1.0, -1.0])).unwrap()
    }

    #[test]
    fn negated_identity_grading_is_accepted() {
        let alg = VNAlgebra::full(2, tol());
        let g = GradedAlgebra::new(alg, CMatrix::identity(2).scaled(C64::new(-1.0, 0.0))).unwrap();
        let s = g.split().unwrap();
        assert_eq!((s.even.dim(), s.odd.dim()), (4, 0));
    }

    #[test]
    fn trivial_grading_has_no_odd_part() {
        let g = GradedAlgebra::trivially_graded(VNAlgebra::full(2, tol()));
        let s = g.split().unwrap();
        assert_eq!(s.even.dim(), 4);
        assert_eq!(s.odd.dim(), 0);
    }

    #[test]
    fn diagonal_grading_splits_m2_into_diagonal_and_antidiagonal() {
        let g = m2_diag_graded();
        let s = g.split().unwrap();
        assert_eq!((s.even.dim(), s.odd.dim()), (2, 2));
        assert!(s.even.contains(&CMatrix::unit(2, 0, 0), 1e-8).unwrap());
        assert!(s.odd.contains(&CMatrix::unit(2, 0, 1), 1e-8).unwrap());
    }

    #[test]
    fn swap_grading_on_c2_splits_into_scalars_and_signs() {
        let g = sp1();
        let s = g.split().unwrap();
        assert_eq!((s.even.dim(), s.odd.dim()), (1, 1));
        assert!(s.even.contains(&CMatrix::identity(2), 1e-8).unwrap());
        assert!(s
            .odd
            .contains(&CMatrix::diag_real(&[1.0, -1.0]), 1e-8)
            .unwrap());
    }

    #[test]
    fn homogeneous_parts_recover_components() {
        let g = m2_diag_graded();
        let x = &CMatrix::identity(2) + &sigma_x();
        let (x0, x1) = g.homogeneous_parts(&x).unwrap();
        assert!(x0.hs_dist(&CMatrix::identity(2)) < 1e-12);
        assert!(x1.hs_dist(&sigma_x()) < 1e-12);
        let outside = CMatrix::unit(3, 0, 0);
        assert!(g.homogeneous_parts(&outside).is_err());
    }

    #[test]
    fn centrality_decisions() {
        assert!(m2_diag_graded().is_central().unwrap());
        assert!(sp1().is_central().unwrap());
        // M2 ⊕ M2 trivially graded: even center has dimension 2.
        let gens = vec![
            CMatrix::from_fn(4, 4, |i, j| if i == 0 && j == 1 { ONE } else { ZERO }),
            CMatrix::from_fn(4, 4, |i, j| if i == 1 && j == 0 { ONE } else { ZERO }),
            CMatrix::from_fn(4, 4, |i, j| if i == 2 && j == 3 { ONE } else { ZERO }),
            CMatrix::from_fn(4, 4, |i, j| if i == 3 && j == 2 { ONE } else { ZERO }),
        ];
        let a = VNAlgebra::generate(&gens, 4, tol()).unwrap();
        let g = GradedAlgebra::trivially_graded(a);
        assert!(!g.is_central().unwrap());
    }

    #[test]
    fn odd_center_line_of_swap_grading() {
        let b = sp1().odd_center_line().unwrap().unwrap();
        assert!(b.hs_dist(&CMatrix::diag_real(&[1.0, -1.0])) < 1e-8);
        // Factor with diagonal grading: center is scalars, no odd line.
        assert!(m2_diag_graded().odd_center_line().unwrap().is_none());
    }

    #[test]
    fn implementing_symmetry_recovers_sigma_x() {
        // M2 with θ = Ad_{σx}, given only the θ-images of a basis.
        let full = VNAlgebra::full(2, tol());
        let sx = sigma_x();
        let images: Vec<CMatrix> = full
            .space()
            .basis()
            .iter()
            .map(|b| b.conj_by(&sx))
            .collect();
        let u =
            implementing_symmetry(full.space(), &CMatrix::identity(2), &images, &tol()).unwrap();
        assert!(u.hs_dist(&sx) < 1e-8 || u.hs_dist(&-&sx) < 1e-8);
    }

    #[test]
    fn implementing_identity_gives_the_unit() {
        let full = VNAlgebra::full(3, tol());
        let images: Vec<CMatrix> = full.space().basis().to_vec();
        let u =
            implementing_symmetry(full.space(), &CMatrix::identity(3), &images, &tol()).unwrap();
        assert!(u.hs_dist(&CMatrix::identity(3)) < 1e-8);
    }

    #[test]
    fn balanced_decisions() {
        // Swap grading: balanced via the swapped-pair rule.
        let u = sp1().find_odd_symmetry(1).unwrap().unwrap();
        assert!(u.hs_dist(&CMatrix::diag_real(&[1.0, -1.0])) < 1e-7);

        // Balanced factor grading diag(1,-1) on M2: signature (1,1).
        let w = m2_diag_graded().find_odd_symmetry(1).unwrap().unwrap();
        assert!(w.is_self_adjoint(1e-8));
        assert!((&w.conj_by(&CMatrix::diag_real(&[1.0, -1.0])) + &w).hs_norm() < 1e-7);

        // Unbalanced factor grading diag(1,1,-1) on M3: signature (2,1).
        let g = GradedAlgebra::new(
            VNAlgebra::full(3, tol()),
            CMatrix::diag_real(&[1.0, 1.0, -1.0]),
        )
        .unwrap();
        assert!(g.find_odd_symmetry(1).unwrap().is_none());

        // Trivially graded: odd part is {0}.
        let t = GradedAlgebra::trivially_graded(VNAlgebra::full(2, tol()));
        assert!(t.find_odd_symmetry(1).unwrap().is_none());
    }

    #[test]
    fn twist_of_swap_grading_is_scalars_plus_i_sigma_y() {
        let g = sp1();
        let l = g.twist().unwrap();
        assert_eq!(l.alg().dim(), 2);
        // diag(1,-1)·σx = [[0,1],[-1,0]].
        let expected = CMatrix::from_rows(vec![vec![ZERO, ONE], vec![-ONE, ZERO]]);
        assert!(l.alg().contains(&expected).unwrap());
        // Twist is an involution.
        let back = l.twist().unwrap();
        assert!(back.alg().space().equal(g.alg().space(), 1e-8).unwrap());
    }

    #[test]
    fn twist_of_trivial_grading_is_identity_map() {
        let g = GradedAlgebra::trivially_graded(VNAlgebra::full(2, tol()));
        let l = g.twist().unwrap();
        assert!(l.alg().space().equal(g.alg().space(), 1e-8).unwrap());
    }

    #[test]
    fn v_conjugation_matches_twist_and_formula() {
        for g in [sp1(), m2_diag_graded()] {
            let (v, image) = g.v_conjugate().unwrap();
            assert!(v.is_unitary(1e-10));
            let twist = g.twist().unwrap();
            assert!(image.space().equal(twist.alg().space(), 1e-8).unwrap());
            let vd = v.adjoint();
            for b in g.alg().space().basis() {
                let lhs = vd.matmul(b).matmul(&v);
                let (b0, b1) = g.homogeneous_parts(b).unwrap();
                let mut rhs = b0;
                rhs.axpy(C64::new(0.0, 1.0), &b1.matmul(g.gamma()));
                assert!(lhs.hs_dist(&rhs) < 1e-9);
            }
        }
    }

    #[test]
    fn center_split_for_swap_and_mixed_gradings() {
        // Swap: both center projections swapped, P = 0, Q = e1.
        let (p, q) = sp1().center_grading_split(3).unwrap();
        assert!(p.hs_norm() < 1e-9);
        assert!((q.trace().re - 1.0).abs() < 1e-9);

        // Diagonal algebra on C^4 with Γ swapping e1<->e2 and fixing e3, e4.
        let gens: Vec<CMatrix> = (0..4).map(|i| CMatrix::unit(4, i, i)).collect();
        let alg = VNAlgebra::generate(&gens, 4, tol()).unwrap();
        let mut gamma = CMatrix::zeros(4, 4);
        gamma.set(0, 1, ONE);
        gamma.set(1, 0, ONE);
        gamma.set(2, 2, ONE);
        gamma.set(3, 3, ONE);
        let g = GradedAlgebra::new(alg, gamma).unwrap();
        let (p, q) = g.center_grading_split(3).unwrap();
        assert!(p.hs_dist(&CMatrix::diag_real(&[0.0, 0.0, 1.0, 1.0])) < 1e-8);
        assert!((q.trace().re - 1.0).abs() < 1e-9);
        let lhs = q.conj_by(g.gamma());
        let mut rhs = CMatrix::identity(4);
        rhs.axpy(-ONE, &p);
        rhs.axpy(-ONE, &q);
        assert!(lhs.hs_dist(&rhs) < 1e-9);
    }

    #[test]
    fn minimal_even_projection_families() {
        // Γ = I: coordinate projections.
        let fam = minimal_even_projections(2, &CMatrix::identity(2), &tol()).unwrap();
        assert_eq!(fam.len(), 2);
        // Γ = σx: projections onto (e1 ± e2)/√2.
        let fam = minimal_even_projections(2, &sigma_x(), &tol()).unwrap();
        let mut sum = CMatrix::zeros(2, 2);
        for p in &fam {
            assert!(p.is_projection(1e-10));
            assert!((p.trace().re - 1.0).abs() < 1e-10);
            assert!(p.conj_by(&sigma_x()).hs_dist(p) < 1e-10, "even");
            sum.axpy(ONE, p);
        }
        assert!(sum.hs_dist(&CMatrix::identity(2)) < 1e-10);
        // Γ diagonal with mixed signs: coordinate projections again.
        let fam =
            minimal_even_projections(3, &CMatrix::diag_real(&[1.0, -1.0, 1.0]), &tol()).unwrap();
        assert_eq!(fam.len(), 3);
    }

    #[test]
    fn graded_center_is_graded() {
        for g in [sp1(), m2_diag_graded()] {
            let zc = g.graded_center().unwrap();
            assert!(zc.alg().dim() >= 1);
        }
    }
}
