//! Property-based invariants for the linear-algebra and algebra layers.

use gvna::eig::{min_eigenvalue, spectral_projections};
use gvna::subspace::commutant_solve;
use gvna::{
    build_preset, orthonormalize, CMatrix, MatSubspace, PresetSpec, ProjectionHandle, Tol,
    VNAlgebra, C64, DEFAULT_SEED,
};
use proptest::prelude::*;

fn tol() -> Tol {
    Tol::default()
}

fn small_matrix(d: usize) -> impl Strategy<Value = CMatrix> {
    prop::collection::vec(
        (-1.0f64..1.0, -1.0f64..1.0).prop_map(|(re, im)| C64::new(re, im)),
        d * d,
    )
    .prop_map(move |entries| CMatrix::from_vec(d, d, entries))
}

fn matrix_list(d: usize, max_len: usize) -> impl Strategy<Value = Vec<CMatrix>> {
    prop::collection::vec(small_matrix(d), 1..=max_len)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn orthonormalize_is_idempotent(mats in matrix_list(3, 6)) {
        let s = orthonormalize(&mats, 1e-9).unwrap();
        if s.dim() > 0 {
            let again = orthonormalize(s.basis(), 1e-9).unwrap();
            prop_assert_eq!(again.dim(), s.dim());
            prop_assert!(again.equal(&s, 1e-8).unwrap());
        }
    }

    #[test]
    fn intersection_is_symmetric(a in matrix_list(3, 4), b in matrix_list(3, 4)) {
        let s = orthonormalize(&a, 1e-9).unwrap();
        let t = orthonormalize(&b, 1e-9).unwrap();
        let st = s.intersect(&t, &tol()).unwrap();
        let ts = t.intersect(&s, &tol()).unwrap();
        prop_assert!(st.equal(&ts, 1e-8).unwrap());
        // Dimension bound dim(S∩T) >= dim S + dim T - d².
        let lower = (s.dim() + t.dim()).saturating_sub(9);
        prop_assert!(st.dim() >= lower);
    }

    #[test]
    fn double_commutant_contains_star_closed_spans(g in small_matrix(3)) {
        // The span of {I, g, g†} is *-closed; its double commutant must
        // contain every element of the span.
        let mats = vec![CMatrix::identity(3), g.clone(), g.adjoint()];
        let span = orthonormalize(&mats, 1e-9).unwrap();
        let first = commutant_solve(&[g], 3, &tol()).unwrap();
        let second = commutant_solve(first.basis(), 3, &tol()).unwrap();
        for b in span.basis() {
            prop_assert!(second.contains(b, 1e-8).unwrap());
        }
    }

    #[test]
    fn spectral_resolution_invariants(x in small_matrix(4)) {
        let a = {
            let mut m = x.clone();
            m.axpy(C64::new(1.0, 0.0), &x.adjoint());
            m.scaled(C64::new(0.5, 0.0))
        };
        let ps = spectral_projections(&a, 1e-12, &tol()).unwrap();
        let mut sum = CMatrix::zeros(4, 4);
        let mut rec = CMatrix::zeros(4, 4);
        for (l, p) in &ps {
            sum.axpy(C64::new(1.0, 0.0), p);
            rec.axpy(C64::new(*l, 0.0), p);
        }
        prop_assert!(sum.hs_dist(&CMatrix::identity(4)) <= 1e-9);
        prop_assert!(rec.hs_dist(&a) <= 1e-8);
        for i in 0..ps.len() {
            for j in 0..ps.len() {
                if i != j {
                    prop_assert!(ps[i].1.matmul(&ps[j].1).hs_norm() <= 1e-9);
                }
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn generate_is_a_closure_operator(gens in matrix_list(3, 2)) {
        let a = VNAlgebra::generate(&gens, 3, tol()).unwrap();
        let again = VNAlgebra::generate(a.space().basis(), 3, tol()).unwrap();
        prop_assert_eq!(again.dim(), a.dim());
        prop_assert!(again.space().equal(a.space(), 1e-8).unwrap());
    }

    #[test]
    fn type_report_sums_hold(gens in matrix_list(3, 2)) {
        let a = VNAlgebra::generate(&gens, 3, tol()).unwrap();
        let report = a.factor_decomposition(DEFAULT_SEED).unwrap();
        let rank_sum: usize = report
            .summands
            .iter()
            .map(|s| s.block_size * s.multiplicity)
            .sum();
        let dim_sum: usize = report
            .summands
            .iter()
            .map(|s| s.block_size * s.block_size)
            .sum();
        prop_assert_eq!(rank_sum, 3);
        prop_assert_eq!(dim_sum, a.dim());
    }
}

#[test]
fn double_commutant_on_random_generated_algebras() {
    use gvna::random::{random_matrix, rng_from};
    let mut rng = rng_from(0x5eed);
    for case in 0..50 {
        let d = 2 + (case % 7); // up to 8
        let n_gens = 1 + case % 2;
        let gens: Vec<CMatrix> = (0..n_gens).map(|_| random_matrix(&mut rng, d)).collect();
        let a = VNAlgebra::generate(&gens, d, tol()).unwrap();
        let dc = a.commutant().unwrap().commutant().unwrap();
        assert!(
            dc.space().equal(a.space(), 1e-8).unwrap(),
            "double commutant failed at case {case} (d = {d})"
        );
    }
}

#[test]
fn projection_equivalence_is_an_equivalence_relation() {
    let g = build_preset(&PresetSpec::Sp { n: 2 }, tol()).unwrap();
    let a = g.alg();
    let mut projections: Vec<ProjectionHandle> = Vec::new();
    for p in a.minimal_central_projections(DEFAULT_SEED).unwrap() {
        projections.push(p);
    }
    for p in a.minimal_projection_family(DEFAULT_SEED).unwrap() {
        projections.push(p);
    }
    projections.push(ProjectionHandle::new(a, CMatrix::identity(4)).unwrap());
    let n = projections.len();
    let related: Vec<Vec<bool>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| a.proj_equivalent(&projections[i], &projections[j]).unwrap())
                .collect()
        })
        .collect();
    for i in 0..n {
        assert!(related[i][i], "reflexive");
        for j in 0..n {
            assert_eq!(related[i][j], related[j][i], "symmetric");
            for k in 0..n {
                if related[i][j] && related[j][k] {
                    assert!(related[i][k], "transitive");
                }
            }
        }
    }
}

#[test]
fn central_support_dominates_the_projection() {
    let g = build_preset(&PresetSpec::Sp { n: 2 }, tol()).unwrap();
    let a = g.alg();
    for e in a.minimal_projection_family(DEFAULT_SEED).unwrap() {
        let c = a.central_support(&e, DEFAULT_SEED).unwrap();
        let mut diff = c.clone();
        diff.axpy(C64::new(-1.0, 0.0), e.matrix());
        let lowest = min_eigenvalue(&diff, &tol()).unwrap();
        assert!(lowest >= -1e-8, "support must dominate: min eig {lowest}");
    }
}

#[test]
fn swapped_tensor_products_share_type_reports() {
    let presets = ["sp:1", "sp:2", "mf:1,1", "mf:2,1"];
    for p1 in presets {
        for p2 in presets {
            let g1 = build_preset(&p1.parse::<PresetSpec>().unwrap(), tol()).unwrap();
            let g2 = build_preset(&p2.parse::<PresetSpec>().unwrap(), tol()).unwrap();
            let forward = gvna::graded_tensor(&g1, &g2).unwrap();
            let backward = gvna::graded_tensor(&g2, &g1).unwrap();
            let rf = forward
                .result
                .alg()
                .factor_decomposition(DEFAULT_SEED)
                .unwrap();
            let rb = backward
                .result
                .alg()
                .factor_decomposition(DEFAULT_SEED)
                .unwrap();
            assert_eq!(rf.shape(), rb.shape(), "{p1} x {p2}");
        }
    }
}

#[test]
fn commutant_dimension_matches_type_report() {
    // For a decomposition into blocks of size n_k with multiplicity m_k, the
    // commutant has dimension sum m_k².
    let check = |label: &str, a: &VNAlgebra| {
        let report = a.factor_decomposition(DEFAULT_SEED).unwrap();
        let expected: usize = report
            .summands
            .iter()
            .map(|s| s.multiplicity * s.multiplicity)
            .sum();
        assert_eq!(a.commutant().unwrap().dim(), expected, "{label}");
    };
    let presets = ["sp:1", "sp:2", "mf:2,1", "diag:4:(12)(3)(4)"];
    for p in presets {
        let g = build_preset(&p.parse::<PresetSpec>().unwrap(), tol()).unwrap();
        check(p, g.alg());
    }
    for p1 in ["sp:1", "sp:2", "mf:1,1"] {
        for p2 in ["sp:1", "mf:2,1"] {
            let g1 = build_preset(&p1.parse::<PresetSpec>().unwrap(), tol()).unwrap();
            let g2 = build_preset(&p2.parse::<PresetSpec>().unwrap(), tol()).unwrap();
            let t = gvna::graded_tensor(&g1, &g2).unwrap();
            check(&format!("{p1} x {p2}"), t.result.alg());
        }
    }
}

#[test]
fn subspace_intersection_with_self_is_identity_map() {
    let space =
        MatSubspace::span(3, &[CMatrix::identity(3), CMatrix::unit(3, 0, 1)], 1e-9).unwrap();
    let same = space.intersect(&space, &tol()).unwrap();
    assert!(same.equal(&space, 1e-8).unwrap());
}
