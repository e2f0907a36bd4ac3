//! Canonical graded-algebra constructions and the `kind:params` spec syntax
//! used by the command line.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::graded::GradedAlgebra;
use crate::mat::{CMatrix, ONE, ZERO};
use crate::subspace::MatSubspace;
use crate::tensor::graded_tensor;
use crate::tol::Tol;
use crate::VNAlgebra;

/// A named graded-algebra construction.
#[derive(Clone, Debug, PartialEq)]
pub enum PresetSpec {
    /// Full `B(C^{p+q})` graded by `diag(I_p, -I_q)`: a type I_{p+q} factor,
    /// balanced exactly when `p = q`.
    Mf { p: usize, q: usize },
    /// `M_n ⊕ M_n` on `C^{2n}` with the block swap grading: central,
    /// balanced, not a factor.
    Sp { n: usize },
    /// k-fold graded tensor power of `sp:1`.
    Clifford { k: usize },
    /// The diagonal algebra on `C^d` graded by the permutation matrix of an
    /// involution (0-based image table).
    Diag { d: usize, perm: Vec<usize> },
    /// Algebra generated by explicit matrices, trivially graded.
    Trivial { d: usize, gens: Vec<CMatrix> },
}

impl PresetSpec {
    pub fn hilbert_dim(&self) -> usize {
        match self {
            PresetSpec::Mf { p, q } => p + q,
            PresetSpec::Sp { n } => 2 * n,
            PresetSpec::Clifford { k } => 1usize << k,
            PresetSpec::Diag { d, .. } => *d,
            PresetSpec::Trivial { d, .. } => *d,
        }
    }
}

impl fmt::Display for PresetSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PresetSpec::Mf { p, q } => write!(f, "mf:{p},{q}"),
            PresetSpec::Sp { n } => write!(f, "sp:{n}"),
            PresetSpec::Clifford { k } => write!(f, "clifford:{k}"),
            PresetSpec::Diag { d, perm } => {
                write!(f, "diag:{d}:")?;
                let mut seen = vec![false; *d];
                for i in 0..*d {
                    if !seen[i] {
                        seen[i] = true;
                        if perm[i] == i {
                            write!(f, "({})", i + 1)?;
                        } else {
                            seen[perm[i]] = true;
                            write!(f, "({},{})", i + 1, perm[i] + 1)?;
                        }
                    }
                }
                Ok(())
            }
            PresetSpec::Trivial { d, gens } => write!(f, "trivial:{d}:{} generators", gens.len()),
        }
    }
}

impl FromStr for PresetSpec {
    type Err = Error;

    /// `sp:3`, `mf:2,1`, `clifford:4`, `diag:4:(12)(3)(4)` (cycle points may
    /// be comma- or space-separated; bare digit runs work below dimension 10).
    fn from_str(s: &str) -> Result<Self> {
        let (kind, rest) = s
            .split_once(':')
            .ok_or_else(|| Error::Parse(format!("preset `{s}` is missing `kind:params`")))?;
        match kind {
            "sp" => {
                let n: usize = rest
                    .parse()
                    .map_err(|_| Error::Parse(format!("sp parameter `{rest}` is not a count")))?;
                if n == 0 {
                    return Err(Error::Input("sp needs n >= 1".into()));
                }
                Ok(PresetSpec::Sp { n })
            }
            "mf" => {
                let (p, q) = rest
                    .split_once(',')
                    .ok_or_else(|| Error::Parse(format!("mf needs `p,q`, got `{rest}`")))?;
                let p: usize = p
                    .trim()
                    .parse()
                    .map_err(|_| Error::Parse(format!("mf parameter `{p}` is not a count")))?;
                let q: usize = q
                    .trim()
                    .parse()
                    .map_err(|_| Error::Parse(format!("mf parameter `{q}` is not a count")))?;
                if p == 0 || q == 0 {
                    return Err(Error::Input("mf needs p, q >= 1".into()));
                }
                Ok(PresetSpec::Mf { p, q })
            }
            "clifford" => {
                let k: usize = rest.parse().map_err(|_| {
                    Error::Parse(format!("clifford parameter `{rest}` is not a count"))
                })?;
                if k == 0 {
                    return Err(Error::Input("clifford needs k >= 1".into()));
                }
                Ok(PresetSpec::Clifford { k })
            }
            "diag" => {
                let (dstr, cycles) = rest
                    .split_once(':')
                    .ok_or_else(|| Error::Parse(format!("diag needs `d:cycles`, got `{rest}`")))?;
                let d: usize = dstr
                    .parse()
                    .map_err(|_| Error::Parse(format!("diag dimension `{dstr}` is not a count")))?;
                let perm = parse_involution(cycles, d)?;
                Ok(PresetSpec::Diag { d, perm })
            }
            other => Err(Error::Parse(format!("unknown preset kind `{other}`"))),
        }
    }
}

/// Parse cycle notation like `(12)(3)(4)` or `(1,2)(3 4)` into a 0-based
/// involution table; unmentioned points are fixed.
fn parse_involution(text: &str, d: usize) -> Result<Vec<usize>> {
    let mut perm: Vec<usize> = (0..d).collect();
    let compact = text.trim();
    if compact.is_empty() {
        return Ok(perm);
    }
    let mut rest = compact;
    while !rest.is_empty() {
        let open = rest
            .find('(')
            .ok_or_else(|| Error::Parse(format!("expected `(` in cycles `{text}`")))?;
        let close = rest[open..]
            .find(')')
            .ok_or_else(|| Error::Parse(format!("unclosed cycle in `{text}`")))?
            + open;
        let body = &rest[open + 1..close];
        let points: Vec<usize> = if body.contains(',') || body.contains(' ') {
            body.split([',', ' '])
                .filter(|t| !t.is_empty())
                .map(|t| {
                    t.parse::<usize>()
                        .map_err(|_| Error::Parse(format!("bad cycle point `{t}`")))
                })
                .collect::<Result<_>>()?
        } else if d < 10 {
            body.chars()
                .map(|c| {
                    c.to_digit(10)
                        .map(|v| v as usize)
                        .ok_or_else(|| Error::Parse(format!("bad cycle point `{c}`")))
                })
                .collect::<Result<_>>()?
        } else {
            vec![body
                .parse::<usize>()
                .map_err(|_| Error::Parse(format!("bad cycle `{body}`")))?]
        };
        match points.len() {
            1 => {}
            2 => {
                let (a, b) = (points[0], points[1]);
                if a == 0 || b == 0 || a > d || b > d {
                    return Err(Error::Input(format!(
                        "cycle point out of range 1..={d} in `{text}`"
                    )));
                }
                perm[a - 1] = b - 1;
                perm[b - 1] = a - 1;
            }
            _ => {
                return Err(Error::Input(format!(
                "cycle ({body}) is longer than a transposition; the grading must be an involution"
            )))
            }
        }
        rest = &rest[close + 1..];
    }
    for i in 0..d {
        if perm[perm[i]] != i {
            return Err(Error::Input("permutation is not an involution".into()));
        }
    }
    Ok(perm)
}

fn direct_sum(a: &CMatrix, b: &CMatrix) -> CMatrix {
    let (n, m) = (a.rows(), b.rows());
    CMatrix::from_fn(n + m, n + m, |i, j| {
        if i < n && j < n {
            a.get(i, j)
        } else if i >= n && j >= n {
            b.get(i - n, j - n)
        } else {
            ZERO
        }
    })
}

/// Sparse generating set for a full matrix algebra: the tridiagonal ladder
/// units plus a corner unit (needed when the ladder is empty).
fn full_matrix_generators(n: usize) -> Vec<CMatrix> {
    let mut gens = Vec::new();
    for i in 0..n.saturating_sub(1) {
        gens.push(CMatrix::unit(n, i, i + 1));
        gens.push(CMatrix::unit(n, i + 1, i));
    }
    gens.push(CMatrix::unit(n, 0, 0));
    gens
}

/// Construct a preset graded algebra.
pub fn build_preset(spec: &PresetSpec, tol: Tol) -> Result<GradedAlgebra> {
    match spec {
        PresetSpec::Mf { p, q } => {
            let d = p + q;
            let mut alg = VNAlgebra::full(d, tol);
            alg = alg.with_generators(full_matrix_generators(d));
            let mut signs = vec![1.0; *p];
            signs.extend(std::iter::repeat_n(-1.0, *q));
            GradedAlgebra::new(alg, CMatrix::diag_real(&signs))
        }
        PresetSpec::Sp { n } => {
            let d = 2 * n;
            let mut basis = Vec::with_capacity(2 * n * n);
            for i in 0..*n {
                for j in 0..*n {
                    basis.push(direct_sum(
                        &CMatrix::unit(*n, i, j),
                        &CMatrix::zeros(*n, *n),
                    ));
                    basis.push(direct_sum(
                        &CMatrix::zeros(*n, *n),
                        &CMatrix::unit(*n, i, j),
                    ));
                }
            }
            let mut gens = Vec::new();
            for u in full_matrix_generators(*n) {
                gens.push(direct_sum(&u, &CMatrix::zeros(*n, *n)));
                gens.push(direct_sum(&CMatrix::zeros(*n, *n), &u));
            }
            let space = MatSubspace::span(d, &basis, tol.rank)?;
            let alg = VNAlgebra::from_space(space, tol)?.with_generators(gens);
            let mut gamma = CMatrix::zeros(d, d);
            for i in 0..*n {
                gamma.set(i, n + i, ONE);
                gamma.set(n + i, i, ONE);
            }
            GradedAlgebra::new(alg, gamma)
        }
        PresetSpec::Clifford { k } => {
            let sp1 = build_preset(&PresetSpec::Sp { n: 1 }, tol)?;
            let mut g = sp1.clone();
            for _ in 1..*k {
                g = graded_tensor(&g, &sp1)?.result;
            }
            Ok(g)
        }
        PresetSpec::Diag { d, perm } => {
            if perm.len() != *d {
                return Err(Error::Input(format!(
                    "permutation table has {} entries for dimension {d}",
                    perm.len()
                )));
            }
            for (i, &j) in perm.iter().enumerate() {
                if j >= *d || perm[j] != i {
                    return Err(Error::Input("permutation is not an involution".into()));
                }
            }
            let gens: Vec<CMatrix> = (0..*d).map(|i| CMatrix::unit(*d, i, i)).collect();
            let space = MatSubspace::span(*d, &gens, tol.rank)?;
            let alg = VNAlgebra::from_space(space, tol)?.with_generators(gens);
            let mut gamma = CMatrix::zeros(*d, *d);
            for (i, &j) in perm.iter().enumerate() {
                gamma.set(j, i, ONE);
            }
            GradedAlgebra::new(alg, gamma)
        }
        PresetSpec::Trivial { d, gens } => {
            let alg = VNAlgebra::generate(gens, *d, tol)?;
            Ok(GradedAlgebra::trivially_graded(alg))
        }
    }
}
