/// Numerical tolerances, all relative to the largest Hilbert-Schmidt norm in
/// play. The constructions themselves are exact up to rounding, so these only
/// absorb floating-point drift.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tol {
    /// Equality / membership threshold.
    pub eq: f64,
    /// Rank decision threshold (orthonormalization residuals, pivots).
    pub rank: f64,
    /// Eigenvalue clustering threshold.
    pub cluster: f64,
}

impl Default for Tol {
    fn default() -> Self {
        Tol {
            eq: 1e-8,
            rank: 1e-9,
            cluster: 1e-6,
        }
    }
}

impl Tol {
    /// Membership threshold scaled for an operand of HS norm `norm`.
    pub fn eq_for(&self, norm: f64) -> f64 {
        self.eq * norm.max(1.0)
    }

    /// Rank threshold scaled for an operand of HS norm `norm`.
    pub fn rank_for(&self, norm: f64) -> f64 {
        self.rank * norm.max(1.0)
    }
}
