//! Finite-dimensional von Neumann algebras on `C^d`: generation and closure,
//! commutant, center, minimal central projections, factor decomposition into
//! matrix-block summands, and the projection calculus.

use crate::eig::spectral_projections;
use crate::error::{Error, Result};
use crate::mat::{CMatrix, ONE};
use crate::random::{random_self_adjoint_element, rng_from};
use crate::subspace::{commutant_solve, MatSubspace};
use crate::tol::Tol;
use std::sync::OnceLock;

const MAX_CLOSURE_ROUNDS: usize = 64;
const MAX_SEPARATION_ATTEMPTS: u32 = 8;
const INTEGER_TOL: f64 = 1e-6;

/// A unital, *-closed, multiplicatively closed span of d×d matrices with a
/// retained generating set. The commutant space is memoized: values are
/// immutable, so the cache never invalidates, and it survives clones.
#[derive(Clone, Debug)]
pub struct VNAlgebra {
    hilbert_dim: usize,
    space: MatSubspace,
    generators: Vec<CMatrix>,
    tol: Tol,
    commutant_cache: OnceLock<MatSubspace>,
}

impl VNAlgebra {
    /// Smallest unital *-closed multiplicatively closed span containing the
    /// generators: seed with `{I} ∪ gens ∪ adjoints`, then saturate products
    /// until the dimension stabilizes.
    pub fn generate(gens: &[CMatrix], d: usize, tol: Tol) -> Result<Self> {
        for g in gens {
            if g.rows() != d || g.cols() != d {
                return Err(Error::DimensionMismatch(format!(
                    "generator is {}x{}, expected {d}x{d}",
                    g.rows(),
                    g.cols()
                )));
            }
        }
        let mut seed: Vec<CMatrix> = vec![CMatrix::identity(d)];
        for g in gens {
            seed.push(g.clone());
            seed.push(g.adjoint());
        }
        let mut space = MatSubspace::span(d, &seed, tol.rank)?;

        // Saturate: only products involving elements added last round can be new.
        let mut frontier_start = 0usize;
        let mut rounds = 0usize;
        loop {
            rounds += 1;
            if rounds > MAX_CLOSURE_ROUNDS {
                return Err(Error::InternalLimit(format!(
                    "algebra closure did not stabilize within {MAX_CLOSURE_ROUNDS} rounds"
                )));
            }
            let old_dim = space.dim();
            let mut products: Vec<CMatrix> = Vec::new();
            for i in 0..old_dim {
                for j in 0..old_dim {
                    if i < frontier_start && j < frontier_start {
                        continue;
                    }
                    products.push(space.basis()[i].matmul(&space.basis()[j]));
                }
            }
            for p in products {
                space.try_push(p, tol.rank);
            }
            if space.dim() == old_dim {
                break;
            }
            frontier_start = old_dim;
        }
        Ok(VNAlgebra {
            hilbert_dim: d,
            space,
            generators: gens.to_vec(),
            tol,
            commutant_cache: OnceLock::new(),
        })
    }

    /// All of B(C^d), with the matrix-unit basis and a tridiagonal generating
    /// set.
    pub fn full(d: usize, tol: Tol) -> Self {
        let mut basis = Vec::with_capacity(d * d);
        for i in 0..d {
            for j in 0..d {
                basis.push(CMatrix::unit(d, i, j));
            }
        }
        let mut gens = Vec::new();
        for i in 0..d.saturating_sub(1) {
            gens.push(CMatrix::unit(d, i, i + 1));
            gens.push(CMatrix::unit(d, i + 1, i));
        }
        if d == 1 {
            gens.push(CMatrix::identity(1));
        }
        VNAlgebra {
            hilbert_dim: d,
            space: MatSubspace::from_orthonormal(d, basis),
            generators: gens,
            tol,
            commutant_cache: OnceLock::new(),
        }
    }

    /// Wrap a span that is already known to be an algebra. Cheap checks only
    /// (identity membership, *-closedness); multiplicative closure is the
    /// caller's contract and is exercised by `check_invariants`.
    pub fn from_span(mats: &[CMatrix], d: usize, tol: Tol) -> Result<Self> {
        let space = MatSubspace::span(d, mats, tol.rank)?;
        Self::from_space(space, tol)
    }

    pub(crate) fn from_space(space: MatSubspace, tol: Tol) -> Result<Self> {
        let d = space.ambient_dim();
        let id = CMatrix::identity(d);
        if !space.contains(&id, tol.eq)? {
            return Err(Error::Validation(
                "span does not contain the identity".into(),
            ));
        }
        if !space.is_star_closed(tol.eq) {
            return Err(Error::Validation(
                "span is not closed under adjoints".into(),
            ));
        }
        let generators = space.basis().to_vec();
        Ok(VNAlgebra {
            hilbert_dim: d,
            space,
            generators,
            tol,
            commutant_cache: OnceLock::new(),
        })
    }

    pub fn hilbert_dim(&self) -> usize {
        self.hilbert_dim
    }

    pub fn space(&self) -> &MatSubspace {
        &self.space
    }

    /// Linear dimension of the algebra.
    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    pub fn generators(&self) -> &[CMatrix] {
        &self.generators
    }

    pub(crate) fn with_generators(mut self, gens: Vec<CMatrix>) -> Self {
        self.generators = gens;
        self
    }

    pub fn tol(&self) -> &Tol {
        &self.tol
    }

    pub fn contains(&self, a: &CMatrix) -> Result<bool> {
        self.space.contains(a, self.tol.eq)
    }

    /// Full invariant check: identity, adjoints, and all basis products stay
    /// in the span. Quadratic in the dimension; meant for tests and the
    /// verification suite.
    pub fn check_invariants(&self) -> Result<()> {
        let id = CMatrix::identity(self.hilbert_dim);
        if !self.contains(&id)? {
            return Err(Error::InvariantViolation("identity not in algebra".into()));
        }
        for b in self.space.basis() {
            if !self.contains(&b.adjoint())? {
                return Err(Error::InvariantViolation(
                    "not closed under adjoints".into(),
                ));
            }
        }
        for x in self.space.basis() {
            for y in self.space.basis() {
                if !self.contains(&x.matmul(y))? {
                    return Err(Error::InvariantViolation(
                        "not closed under products".into(),
                    ));
                }
            }
        }
        Ok(())
    }

    /// The commutant `{X : [X, A] = 0 for all A in the algebra}`.
    pub fn commutant(&self) -> Result<VNAlgebra> {
        if let Some(space) = self.commutant_cache.get() {
            return VNAlgebra::from_space(space.clone(), self.tol);
        }
        // The commutant of the algebra equals the commutant of any generating
        // family; use whichever of (generators, basis) is smaller.
        let family: &[CMatrix] =
            if !self.generators.is_empty() && self.generators.len() <= self.dim() {
                &self.generators
            } else {
                self.space.basis()
            };
        let space = commutant_solve(family, self.hilbert_dim, &self.tol)?;
        let space = self.commutant_cache.get_or_init(|| space).clone();
        VNAlgebra::from_space(space, self.tol)
    }

    /// The center `Z(A) = A ∩ A'` (automatically commutative).
    pub fn center(&self) -> Result<VNAlgebra> {
        let com = self.commutant()?;
        let space = self.space.intersect(com.space(), &self.tol)?;
        VNAlgebra::from_space(space, self.tol)
    }

    /// Span of `{ z B z : B basis }` — the compression by a projection.
    pub fn compress(&self, z: &CMatrix) -> Result<MatSubspace> {
        let mats: Vec<CMatrix> = self
            .space
            .basis()
            .iter()
            .map(|b| z.matmul(b).matmul(z))
            .collect();
        MatSubspace::span(self.hilbert_dim, &mats, self.tol.rank)
    }

    /// The minimal projections of the (commutative) center, found by
    /// splitting the spectrum of a random self-adjoint central element.
    /// Each returned projection is certified minimal (its central compression
    /// has dimension 1); failed separation retries with a fresh draw.
    pub fn minimal_central_projections(&self, seed: u64) -> Result<Vec<ProjectionHandle>> {
        let center = self.center()?;
        self.minimal_projections_of(&center, seed)
    }

    /// Minimal projections of a commutative subalgebra of `self` (used for
    /// the center, and for maximal families in factors via
    /// `minimal_projection_family`).
    fn minimal_projections_of(&self, sub: &VNAlgebra, seed: u64) -> Result<Vec<ProjectionHandle>> {
        let d = self.hilbert_dim;
        if sub.dim() == 1 {
            return Ok(vec![ProjectionHandle::trusted(CMatrix::identity(d))]);
        }
        let sa_basis = sub.space().self_adjoint_basis(&self.tol)?;
        let sa_space = MatSubspace::from_orthonormal(d, sa_basis);
        let mut rng = rng_from(seed);
        let mut last_err = String::new();
        for _attempt in 0..MAX_SEPARATION_ATTEMPTS {
            let x = random_self_adjoint_element(&mut rng, &sa_space);
            let spectral = spectral_projections(&x, self.tol.cluster, &self.tol)?;
            let mut projections = Vec::with_capacity(spectral.len());
            let mut ok = true;
            for (_, p) in &spectral {
                if !sub.contains(p)? {
                    ok = false;
                    last_err = "spectral projection left the subalgebra".into();
                    break;
                }
                let compressed = sub.compress(p)?;
                if compressed.dim() != 1 {
                    ok = false;
                    last_err = format!(
                        "projection not minimal: compression dimension {}",
                        compressed.dim()
                    );
                    break;
                }
                projections.push(p.clone());
            }
            if ok && projections.len() == sub.dim() {
                sort_projections(&mut projections);
                return Ok(projections
                    .into_iter()
                    .map(ProjectionHandle::trusted)
                    .collect());
            }
            if ok {
                last_err = format!("separated {} of {} summands", projections.len(), sub.dim());
            }
        }
        Err(Error::DegenerateSpectrum {
            seed,
            attempts: MAX_SEPARATION_ATTEMPTS,
            context: last_err,
        })
    }

    /// A maximal orthogonal family of minimal projections of the algebra
    /// (meaningful when the algebra is a factor: the family then consists of
    /// mutually equivalent abelian projections summing to the identity).
    pub fn minimal_projection_family(&self, seed: u64) -> Result<Vec<ProjectionHandle>> {
        let d = self.hilbert_dim;
        let sa_basis = self.space.self_adjoint_basis(&self.tol)?;
        let sa_space = MatSubspace::from_orthonormal(d, sa_basis);
        let mut rng = rng_from(seed);
        let mut last_err = String::new();
        for _attempt in 0..MAX_SEPARATION_ATTEMPTS {
            let x = random_self_adjoint_element(&mut rng, &sa_space);
            let spectral = spectral_projections(&x, self.tol.cluster, &self.tol)?;
            let mut projections = Vec::with_capacity(spectral.len());
            let mut ok = true;
            for (_, p) in &spectral {
                if !self.contains(p)? {
                    ok = false;
                    last_err = "spectral projection left the algebra".into();
                    break;
                }
                let compressed = self.compress(p)?;
                if compressed.dim() != 1 {
                    ok = false;
                    last_err = format!(
                        "projection not minimal: compression dimension {}",
                        compressed.dim()
                    );
                    break;
                }
                projections.push(p.clone());
            }
            if ok {
                sort_projections(&mut projections);
                return Ok(projections
                    .into_iter()
                    .map(ProjectionHandle::trusted)
                    .collect());
            }
        }
        Err(Error::DegenerateSpectrum {
            seed,
            attempts: MAX_SEPARATION_ATTEMPTS,
            context: last_err,
        })
    }

    /// Factor decomposition: for each minimal central projection `z`, the
    /// compression `zAz` is a full matrix block of size `n` with multiplicity
    /// `m = rank(z)/n`. Both must round to exact integers.
    pub fn factor_decomposition(&self, seed: u64) -> Result<TypeReport> {
        let zs = self.minimal_central_projections(seed)?;
        let mut summands = Vec::with_capacity(zs.len());
        for z in &zs {
            let compressed = self.compress(z.matrix())?;
            let block_dim = compressed.dim();
            let n_f = (block_dim as f64).sqrt();
            let n = n_f.round() as usize;
            if (n_f - n as f64).abs() > INTEGER_TOL || n == 0 {
                return Err(Error::NumericalInconsistency(format!(
                    "summand dimension {block_dim} is not a perfect square"
                )));
            }
            let rank = rank_of(z.matrix())?;
            if rank % n != 0 {
                return Err(Error::NumericalInconsistency(format!(
                    "central rank {rank} is not a multiple of block size {n}"
                )));
            }
            summands.push(TypeSummand {
                block_size: n,
                multiplicity: rank / n,
                central_projection: z.matrix().clone(),
            });
        }
        let report = TypeReport::new(summands);
        let total: usize = report
            .summands
            .iter()
            .map(|s| s.block_size * s.multiplicity)
            .sum();
        if total != self.hilbert_dim {
            return Err(Error::NumericalInconsistency(format!(
                "summand ranks sum to {total}, expected {}",
                self.hilbert_dim
            )));
        }
        let dim_sum: usize = report
            .summands
            .iter()
            .map(|s| s.block_size * s.block_size)
            .sum();
        if dim_sum != self.dim() {
            return Err(Error::NumericalInconsistency(format!(
                "summand dimensions sum to {dim_sum}, expected {}",
                self.dim()
            )));
        }
        Ok(report)
    }

    /// Murray-von Neumann equivalence at finite dimension: equal ranks under
    /// every minimal central projection.
    pub fn proj_equivalent(&self, e: &ProjectionHandle, f: &ProjectionHandle) -> Result<bool> {
        let zs = self.minimal_central_projections(crate::DEFAULT_SEED)?;
        self.proj_equivalent_with(&zs, e, f)
    }

    pub fn proj_equivalent_with(
        &self,
        zs: &[ProjectionHandle],
        e: &ProjectionHandle,
        f: &ProjectionHandle,
    ) -> Result<bool> {
        self.validate_projection(e)?;
        self.validate_projection(f)?;
        for z in zs {
            let re = rank_of(&z.matrix().matmul(e.matrix()))?;
            let rf = rank_of(&z.matrix().matmul(f.matrix()))?;
            if re != rf {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Smallest central projection `C` with `C e = e`.
    pub fn central_support(&self, e: &ProjectionHandle, seed: u64) -> Result<CMatrix> {
        self.validate_projection(e)?;
        let zs = self.minimal_central_projections(seed)?;
        let mut c = CMatrix::zeros(self.hilbert_dim, self.hilbert_dim);
        for z in &zs {
            if z.matrix().matmul(e.matrix()).hs_norm() > self.tol.eq {
                c.axpy(ONE, z.matrix());
            }
        }
        Ok(c)
    }

    /// Whether the compression `e A e` is commutative.
    pub fn is_abelian_projection(&self, e: &ProjectionHandle) -> Result<bool> {
        self.validate_projection(e)?;
        let compressed = self.compress(e.matrix())?;
        for (i, x) in compressed.basis().iter().enumerate() {
            for y in compressed.basis().iter().skip(i + 1) {
                let comm = x.commutator(y);
                if comm.hs_norm() > self.tol.eq_for(x.hs_norm() * y.hs_norm()) {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    fn validate_projection(&self, e: &ProjectionHandle) -> Result<()> {
        let m = e.matrix();
        let scale = m.hs_norm().max(1.0);
        if !m.is_projection(self.tol.eq * scale) {
            return Err(Error::Input("matrix is not a projection".into()));
        }
        if !self.contains(m)? {
            return Err(Error::Input("projection lies outside the algebra".into()));
        }
        Ok(())
    }
}

/// Rank of a projection by trace rounding; the trace of an idempotent is an
/// integer, so a large rounding error flags a numerical problem.
pub fn rank_of(p: &CMatrix) -> Result<usize> {
    let t = p.trace();
    let r = t.re.round();
    if (t.re - r).abs() > INTEGER_TOL || t.im.abs() > INTEGER_TOL || r < -0.5 {
        return Err(Error::NumericalInconsistency(format!(
            "projection trace {t} does not round to an integer rank"
        )));
    }
    Ok(r as usize)
}

/// Canonical deterministic order: descending rank, then lexicographic on
/// coarsely rounded entries.
fn sort_projections(ps: &mut [CMatrix]) {
    ps.sort_by(|a, b| {
        let (ta, tb) = (a.trace().re, b.trace().re);
        if (ta - tb).abs() > 0.5 {
            return tb.partial_cmp(&ta).unwrap();
        }
        for (x, y) in a.data().iter().zip(b.data().iter()) {
            for (u, v) in [(x.re, y.re), (x.im, y.im)] {
                if (u - v).abs() > INTEGER_TOL {
                    return v.partial_cmp(&u).unwrap();
                }
            }
        }
        std::cmp::Ordering::Equal
    });
}

/// A projection known to lie in some algebra.
#[derive(Clone, Debug)]
pub struct ProjectionHandle {
    matrix: CMatrix,
}

impl ProjectionHandle {
    pub fn new(parent: &VNAlgebra, matrix: CMatrix) -> Result<Self> {
        let handle = ProjectionHandle { matrix };
        parent.validate_projection(&handle)?;
        Ok(handle)
    }

    pub(crate) fn trusted(matrix: CMatrix) -> Self {
        ProjectionHandle { matrix }
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn rank(&self) -> Result<usize> {
        rank_of(&self.matrix)
    }
}

/// One matrix-block summand of a type decomposition.
#[derive(Clone, Debug)]
pub struct TypeSummand {
    pub block_size: usize,
    pub multiplicity: usize,
    pub central_projection: CMatrix,
}

/// The answer to "what type is this algebra": block sizes with
/// multiplicities, plus the factor flag and a printable label.
#[derive(Clone, Debug)]
pub struct TypeReport {
    pub summands: Vec<TypeSummand>,
    pub is_factor: bool,
    pub type_label: String,
}

impl TypeReport {
    fn new(summands: Vec<TypeSummand>) -> Self {
        let is_factor = summands.len() == 1;
        let type_label = summands
            .iter()
            .map(|s| format!("I_{}", s.block_size))
            .collect::<Vec<_>>()
            .join(" ⊕ ");
        TypeReport {
            summands,
            is_factor,
            type_label,
        }
    }

    /// Sorted list of (block size, multiplicity) pairs.
    pub fn shape(&self) -> Vec<(usize, usize)> {
        let mut v: Vec<(usize, usize)> = self
            .summands
            .iter()
            .map(|s| (s.block_size, s.multiplicity))
            .collect();
        v.sort();
        v
    }

    /// *-isomorphism class at finite dimension: the multiset of block sizes.
    pub fn same_type(&self, other: &TypeReport) -> bool {
        let mut a: Vec<usize> = self.summands.iter().map(|s| s.block_size).collect();
        let mut b: Vec<usize> = other.summands.iter().map(|s| s.block_size).collect();
        a.sort();
        b.sort();
        a == b
    }
}
