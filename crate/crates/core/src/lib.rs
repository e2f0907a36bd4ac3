//! Finite-dimensional graded von Neumann algebras.
//!
//! Everything acts on `C^d` through dense complex matrices. A von Neumann
//! algebra is kept as a Hilbert-Schmidt-orthonormal basis of its linear span
//! together with a retained generating set; a grading is a self-adjoint
//! unitary `Γ` normalizing the algebra. On top of that the crate builds the
//! graded tensor product (Koszul sign rules realized spatially through
//! `π(A ⊗̂ B) = A Γ₁^{∂B} ⊗ B`), commutant and center machinery, type
//! classification into matrix-block summands, and a verification suite that
//! checks the structural identities numerically.

pub mod algebra;
pub mod eig;
pub mod error;
pub mod graded;
pub mod io;
pub mod mat;
pub mod presets;
pub mod random;
pub mod subspace;
pub mod tensor;
pub mod tol;
pub mod verify;

pub use algebra::{ProjectionHandle, TypeReport, TypeSummand, VNAlgebra};
pub use error::{Error, Result};
pub use graded::{GradedAlgebra, GradedSplit};
pub use mat::{CMatrix, C64};
pub use presets::{build_preset, PresetSpec};
pub use subspace::{commutant_solve, orthonormalize, MatSubspace};
pub use tensor::{graded_tensor, ordinary_tensor, GradedTensorProduct, HomogeneousTensor};
pub use tol::Tol;

/// Default seed for every randomized procedure (minimal projection draws,
/// partial isometry construction, verification sampling).
pub const DEFAULT_SEED: u64 = 0xC1F0;
