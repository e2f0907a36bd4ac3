//! Seeded sampling helpers. Every randomized procedure in the crate threads a
//! `u64` seed through these so runs are reproducible.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::mat::{orthonormalize_vectors, CMatrix, C64};
use crate::subspace::MatSubspace;

pub fn rng_from(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Derive a stream-specific seed from a master seed and a label, so
/// independent cases never share a stream.
pub fn derive_seed(master: u64, label: &str) -> u64 {
    // FNV-1a over the label, mixed with the master seed.
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in label.bytes() {
        h ^= b as u64;
        h = h.wrapping_mul(0x1000_0000_01b3);
    }
    h ^ master
}

pub fn standard_normal(rng: &mut ChaCha8Rng) -> f64 {
    // Box-Muller.
    let u1: f64 = rng.gen_range(f64::MIN_POSITIVE..1.0);
    let u2: f64 = rng.gen();
    (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
}

pub fn random_complex(rng: &mut ChaCha8Rng) -> C64 {
    C64::new(standard_normal(rng), standard_normal(rng))
        * C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0)
}

pub fn random_matrix(rng: &mut ChaCha8Rng, d: usize) -> CMatrix {
    CMatrix::from_fn(d, d, |_, _| random_complex(rng))
}

/// Haar-like random unitary: Gram-Schmidt on the columns of a Ginibre matrix.
pub fn random_unitary(rng: &mut ChaCha8Rng, d: usize) -> CMatrix {
    loop {
        let g = random_matrix(rng, d);
        let cols: Vec<Vec<C64>> = (0..d)
            .map(|j| (0..d).map(|i| g.get(i, j)).collect())
            .collect();
        let ortho = orthonormalize_vectors(&cols, 1e-9);
        if ortho.len() == d {
            return CMatrix::from_fn(d, d, |i, j| ortho[j][i]);
        }
    }
}

/// Random element of a subspace with complex normal coefficients, normalized
/// to unit HS norm (zero subspace yields the zero matrix).
pub fn random_element(rng: &mut ChaCha8Rng, space: &MatSubspace) -> CMatrix {
    let d = space.ambient_dim();
    let mut m = CMatrix::zeros(d, d);
    for b in space.basis() {
        m.axpy(random_complex(rng), b);
    }
    let n = m.hs_norm();
    if n > 0.0 {
        m = m.scaled(C64::new(1.0 / n, 0.0));
    }
    m
}

/// Random self-adjoint element of a *-closed subspace, unit HS norm.
pub fn random_self_adjoint_element(rng: &mut ChaCha8Rng, space: &MatSubspace) -> CMatrix {
    let x = random_element(rng, space);
    let mut m = (&x + &x.adjoint()).scaled(C64::new(0.5, 0.0));
    let n = m.hs_norm();
    if n > 0.0 {
        m = m.scaled(C64::new(1.0 / n, 0.0));
    }
    m
}

pub fn random_unit_vector(rng: &mut ChaCha8Rng, d: usize) -> Vec<C64> {
    loop {
        let v: Vec<C64> = (0..d).map(|_| random_complex(rng)).collect();
        let n = v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
        if n > 1e-6 {
            return v.iter().map(|&x| x / C64::new(n, 0.0)).collect();
        }
    }
}
