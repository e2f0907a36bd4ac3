//! Text documents for user-supplied graded algebras.
//!
//! Schema (keys always emitted in sorted order):
//! `{"generators": [[[ [re,im], ... ] ...] ...], "grading": [[[re,im],...]...],
//!   "hilbert_dim": int, "name": str}`.
//! Matrices are lists of rows, entries are `[re, im]` pairs, floats are
//! written with 17 significant digits so parse∘serialize is the identity.

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::graded::GradedAlgebra;
use crate::mat::{CMatrix, C64};
use crate::tol::Tol;
use crate::VNAlgebra;

#[derive(Deserialize)]
struct AlgebraDoc {
    name: String,
    hilbert_dim: usize,
    generators: Vec<Vec<Vec<[f64; 2]>>>,
    grading: Vec<Vec<[f64; 2]>>,
}

fn matrix_from_doc(doc: &[Vec<[f64; 2]>], d: usize, what: &str) -> Result<CMatrix> {
    if doc.len() != d || doc.iter().any(|row| row.len() != d) {
        return Err(Error::Validation(format!("{what} is not a {d}x{d} matrix")));
    }
    Ok(CMatrix::from_fn(d, d, |i, j| {
        C64::new(doc[i][j][0], doc[i][j][1])
    }))
}

/// Parse an algebra document: generators are closed into an algebra, the
/// grading is validated as a self-adjoint involution normalizing it.
pub fn parse_algebra(text: &str, tol: Tol) -> Result<(String, GradedAlgebra)> {
    let doc: AlgebraDoc =
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("malformed document: {e}")))?;
    let d = doc.hilbert_dim;
    if d == 0 {
        return Err(Error::Validation("hilbert_dim must be positive".into()));
    }
    let gamma = matrix_from_doc(&doc.grading, d, "grading")?;
    if !gamma.is_self_adjoint(tol.eq) {
        return Err(Error::Validation("grading not self-adjoint".into()));
    }
    if gamma.matmul(&gamma).hs_dist(&CMatrix::identity(d)) > tol.eq {
        return Err(Error::Validation("grading not involutive".into()));
    }
    let gens: Vec<CMatrix> = doc
        .generators
        .iter()
        .enumerate()
        .map(|(k, g)| matrix_from_doc(g, d, &format!("generator {k}")))
        .collect::<Result<_>>()?;
    let alg = VNAlgebra::generate(&gens, d, tol)?;
    for b in alg.space().basis() {
        if !alg.contains(&b.conj_by(&gamma))? {
            return Err(Error::Validation(
                "grading does not normalize algebra".into(),
            ));
        }
    }
    let graded = GradedAlgebra::new(alg, gamma)?;
    Ok((doc.name, graded))
}

fn fmt_f64(x: f64) -> String {
    // 17 significant digits; normalize the sign of zero for byte stability.
    let x = if x == 0.0 { 0.0 } else { x };
    format!("{x:.16e}")
}

fn write_matrix(out: &mut String, m: &CMatrix, indent: &str) {
    out.push_str("[\n");
    for i in 0..m.rows() {
        out.push_str(indent);
        out.push_str("  [");
        for j in 0..m.cols() {
            if j > 0 {
                out.push_str(", ");
            }
            let z = m.get(i, j);
            out.push('[');
            out.push_str(&fmt_f64(z.re));
            out.push_str(", ");
            out.push_str(&fmt_f64(z.im));
            out.push(']');
        }
        out.push(']');
        if i + 1 < m.rows() {
            out.push(',');
        }
        out.push('\n');
    }
    out.push_str(indent);
    out.push(']');
}

/// Canonical serialization of a graded algebra (its retained generators and
/// grading operator). Byte-stable across runs.
pub fn serialize_algebra(g: &GradedAlgebra, name: &str) -> String {
    let mut out = String::new();
    out.push_str("{\n");
    out.push_str("  \"generators\": [\n");
    let gens = g.alg().generators();
    for (k, gen) in gens.iter().enumerate() {
        out.push_str("    ");
        write_matrix(&mut out, gen, "    ");
        if k + 1 < gens.len() {
            out.push(',');
        }
        out.push('\n');
    }
    out.push_str("  ],\n");
    out.push_str("  \"grading\": ");
    write_matrix(&mut out, g.gamma(), "  ");
    out.push_str(",\n");
    out.push_str(&format!("  \"hilbert_dim\": {},\n", g.hilbert_dim()));
    out.push_str(&format!(
        "  \"name\": {}\n",
        serde_json::to_string(name).expect("string serialization")
    ));
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presets::{build_preset, PresetSpec};

    fn tol() -> Tol {
        Tol::default()
    }

    #[test]
    fn round_trip_presets() {
        for spec in ["sp:1", "sp:2", "mf:2,1", "clifford:2"] {
            let spec: PresetSpec = spec.parse().unwrap();
            let g = build_preset(&spec, tol()).unwrap();
            let text = serialize_algebra(&g, &spec.to_string());
            let (name, parsed) = parse_algebra(&text, tol()).unwrap();
            assert_eq!(name, spec.to_string());
            assert!(parsed.alg().space().equal(g.alg().space(), 1e-8).unwrap());
            assert_eq!(parsed.gamma(), g.gamma());
            // Serialization is idempotent byte-for-byte.
            assert_eq!(serialize_algebra(&parsed, &name), text);
        }
    }

    #[test]
    fn serialization_is_byte_stable() {
        let g = build_preset(&PresetSpec::Sp { n: 1 }, tol()).unwrap();
        assert_eq!(serialize_algebra(&g, "sp:1"), serialize_algebra(&g, "sp:1"));
    }

    #[test]
    fn golden_clifford_square() {
        let pinned = include_str!("../tests/data/clifford2.json");
        let g = build_preset(&PresetSpec::Clifford { k: 2 }, tol()).unwrap();
        assert_eq!(serialize_algebra(&g, "clifford:2"), pinned);
        let (name, parsed) = parse_algebra(pinned, tol()).unwrap();
        assert_eq!(name, "clifford:2");
        assert!(parsed.alg().space().equal(g.alg().space(), 1e-8).unwrap());
    }

    #[test]
    fn zero_generator_document_encodes_scalars() {
        let text = r#"{"generators": [], "grading": [[[1.0,0.0],[0.0,0.0]],[[0.0,0.0],[1.0,0.0]]], "hilbert_dim": 2, "name": "scalars"}"#;
        let (_, g) = parse_algebra(text, tol()).unwrap();
        assert_eq!(g.alg().dim(), 1);
    }

    #[test]
    fn non_involutive_grading_is_diagnosed() {
        let text = r#"{"generators": [], "grading": [[[0.0,0.0],[1.0,0.0]],[[0.0,0.0],[0.0,0.0]]], "hilbert_dim": 2, "name": "bad"}"#;
        let err = parse_algebra(text, tol()).unwrap_err();
        assert!(err.to_string().contains("not self-adjoint"), "{err}");

        let text = r#"{"generators": [], "grading": [[[2.0,0.0],[0.0,0.0]],[[0.0,0.0],[2.0,0.0]]], "hilbert_dim": 2, "name": "bad"}"#;
        let err = parse_algebra(text, tol()).unwrap_err();
        assert!(err.to_string().contains("not involutive"), "{err}");
    }

    #[test]
    fn grading_outside_normalizer_is_diagnosed() {
        // Algebra C ⊕ M_1... use diagonal projections on C^2 with a grading
        // rotating them outside the span: (e1+e2)/sqrt2 basis change fixes
        // the span, so use a genuine non-normalizing unitary instead:
        // the algebra span{I, e11} with grading sigma_x maps e11 to e22 which
        // IS in the span; take instead span{I, E11} on C^3 with a grading
        // swapping basis vectors 1 and 2... E11 -> E22 outside the span.
        let text = r#"{
            "generators": [[[[1.0,0.0],[0.0,0.0],[0.0,0.0]],[[0.0,0.0],[0.0,0.0],[0.0,0.0]],[[0.0,0.0],[0.0,0.0],[0.0,0.0]]]],
            "grading": [[[0.0,0.0],[1.0,0.0],[0.0,0.0]],[[1.0,0.0],[0.0,0.0],[0.0,0.0]],[[0.0,0.0],[0.0,0.0],[1.0,0.0]]],
            "hilbert_dim": 3,
            "name": "non-normalizing"
        }"#;
        let err = parse_algebra(text, tol()).unwrap_err();
        assert!(err.to_string().contains("does not normalize"), "{err}");
    }

    #[test]
    fn malformed_document_is_a_parse_error() {
        assert!(matches!(
            parse_algebra("{not json", tol()),
            Err(Error::Parse(_))
        ));
        assert!(matches!(
            parse_algebra(r#"{"name": "x"}"#, tol()),
            Err(Error::Parse(_))
        ));
    }
}
