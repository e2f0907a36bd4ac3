//! The verification suite: every structural identity the library realizes is
//! checked numerically over a matrix of preset algebras, with one named case
//! per identity. The command line's `verify` subcommand is a thin wrapper
//! around `run_verification`.

use serde::Serialize;

use crate::algebra::{ProjectionHandle, VNAlgebra};
use crate::eig::spectral_projections;
use crate::error::Result;
use crate::graded::{implementing_symmetry, minimal_even_projections, GradedAlgebra};
use crate::mat::{CMatrix, C64, ONE};
use crate::presets::{build_preset, PresetSpec};
use crate::random::{
    derive_seed, random_element, random_self_adjoint_element, random_unitary, rng_from,
};
use crate::subspace::MatSubspace;
use crate::tensor::{
    abelian_grid, central_support_compare, commutant_formula, even_part_identity,
    factor_case_identity, graded_tensor, ordinary_tensor, swap_isomorphism, tensor_center_formula,
    verify_sign_rules, CondExpectation,
};
use crate::tol::Tol;

#[derive(Clone, Copy, Debug)]
pub struct VerifyConfig {
    pub seed: u64,
    pub tol: Tol,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            seed: crate::DEFAULT_SEED,
            tol: Tol::default(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CaseResult {
    pub id: String,
    pub statement: String,
    pub passed: bool,
    pub max_residual: f64,
    pub details: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct VerifyReport {
    pub seed: String,
    pub tol_eq: f64,
    pub tol_rank: f64,
    pub cases: Vec<CaseResult>,
    pub all_passed: bool,
}

impl VerifyReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialization")
    }

    pub fn render_human(&self) -> String {
        let mut out = String::new();
        for c in &self.cases {
            let flag = if c.passed { "PASS" } else { "FAIL" };
            out.push_str(&format!(
                "{flag}  {:<32} {} (max residual {:.3e})\n",
                c.id, c.statement, c.max_residual
            ));
            if !c.passed {
                for d in &c.details {
                    out.push_str(&format!("      - {d}\n"));
                }
            }
        }
        let flag = if self.all_passed { "PASS" } else { "FAIL" };
        out.push_str(&format!(
            "{flag}: {}/{} checks\n",
            self.cases.iter().filter(|c| c.passed).count(),
            self.cases.len()
        ));
        out
    }
}

/// Collects assertions and residuals for one case.
struct Check {
    ok: bool,
    max_residual: f64,
    details: Vec<String>,
}

impl Check {
    fn new() -> Self {
        Check {
            ok: true,
            max_residual: 0.0,
            details: Vec::new(),
        }
    }

    fn require(&mut self, label: &str, cond: bool) {
        if !cond {
            self.ok = false;
            self.details.push(format!("failed: {label}"));
        }
    }

    fn residual(&mut self, label: &str, r: f64, bound: f64) {
        self.max_residual = self.max_residual.max(r);
        if r > bound {
            self.ok = false;
            self.details
                .push(format!("residual {r:.3e} > {bound:.1e}: {label}"));
        }
    }
}

fn run_case(id: &str, statement: &str, body: impl FnOnce(&mut Check) -> Result<()>) -> CaseResult {
    let mut check = Check::new();
    let outcome = body(&mut check);
    if let Err(e) = outcome {
        check.ok = false;
        check.details.push(format!("error: {e}"));
    }
    CaseResult {
        id: id.to_string(),
        statement: statement.to_string(),
        passed: check.ok,
        max_residual: check.max_residual,
        details: check.details,
    }
}

fn preset_matrix(tol: Tol) -> Result<Vec<(String, GradedAlgebra)>> {
    ["sp:1", "sp:2", "mf:1,1", "mf:2,1", "diag:4:(12)(3)(4)"]
        .iter()
        .map(|s| {
            let spec: PresetSpec = s.parse()?;
            Ok((s.to_string(), build_preset(&spec, tol)?))
        })
        .collect()
}

fn sp(n: usize, tol: Tol) -> Result<GradedAlgebra> {
    build_preset(&PresetSpec::Sp { n }, tol)
}

fn even_algebra(g: &GradedAlgebra) -> Result<VNAlgebra> {
    let split = g.split()?;
    VNAlgebra::from_space(
        MatSubspace::span(g.hilbert_dim(), split.even.basis(), g.tol().rank)?,
        *g.tol(),
    )
}

/// Run the whole suite. Deterministic for a fixed seed.
pub fn run_verification(cfg: &VerifyConfig) -> VerifyReport {
    let tol = cfg.tol;
    let seed = cfg.seed;
    let mut cases: Vec<CaseResult> = Vec::new();

    // -- 01: preset profiles ------------------------------------------------
    cases.push(run_case(
        "01-preset-profiles",
        "preset algebras satisfy their documented type/central/balanced profile",
        |c| {
            type Profile = (&'static str, &'static [(usize, usize)], bool, bool);
            let profiles: &[Profile] = &[
                ("sp:1", &[(1, 1), (1, 1)], true, true),
                ("sp:2", &[(2, 1), (2, 1)], true, true),
                ("sp:3", &[(3, 1), (3, 1)], true, true),
                ("mf:1,1", &[(2, 1)], true, true),
                ("mf:2,1", &[(3, 1)], true, false),
                ("mf:2,2", &[(4, 1)], true, true),
                ("mf:3,1", &[(4, 1)], true, false),
                ("mf:1,2", &[(3, 1)], true, false),
                ("mf:1,3", &[(4, 1)], true, false),
                ("mf:2,3", &[(5, 1)], true, false),
                ("mf:3,2", &[(5, 1)], true, false),
                ("mf:3,3", &[(6, 1)], true, true),
                ("diag:4:(12)(3)(4)", &[(1, 1); 4], false, false),
                ("diag:4:(12)(34)", &[(1, 1); 4], false, true),
            ];
            for (name, shape, central, balanced) in profiles {
                let g = build_preset(&name.parse::<PresetSpec>()?, tol)?;
                g.alg().check_invariants()?;
                let report = g.alg().factor_decomposition(derive_seed(seed, name))?;
                c.require(&format!("{name} type"), report.shape() == *shape);
                c.require(&format!("{name} central"), g.is_central()? == *central);
                c.require(
                    &format!("{name} balanced"),
                    g.find_odd_symmetry(derive_seed(seed, name))?.is_some() == *balanced,
                );
            }
            Ok(())
        },
    ));

    // -- 02: even/odd decomposition -----------------------------------------
    cases.push(run_case(
        "02-even-odd-split",
        "R = R^(0) ⊕ R^(1) with x^(σ) = (x ± ΓxΓ)/2 and ΓBΓ = ±B on the parts",
        |c| {
            let mut rng = rng_from(derive_seed(seed, "02"));
            for (name, g) in preset_matrix(tol)? {
                let split = g.split()?;
                c.require(
                    &format!("{name} dimensions add up"),
                    split.even.dim() + split.odd.dim() == g.alg().dim(),
                );
                for b in split.even.basis() {
                    c.residual(&format!("{name} even sign"), g.theta(b).hs_dist(b), tol.eq);
                }
                for b in split.odd.basis() {
                    c.residual(
                        &format!("{name} odd sign"),
                        (&g.theta(b) + b).hs_norm(),
                        tol.eq,
                    );
                }
                let x = random_element(&mut rng, g.alg().space());
                let (x0, x1) = g.homogeneous_parts(&x)?;
                c.residual(
                    &format!("{name} reconstruction"),
                    (&(&x0 + &x1) - &x).hs_norm(),
                    1e-12,
                );
                c.residual(
                    &format!("{name} even part sign"),
                    g.theta(&x0).hs_dist(&x0),
                    tol.eq,
                );
            }
            Ok(())
        },
    ));

    // -- 03/04: sign rules under pi ------------------------------------------
    let pairs: Vec<(String, GradedAlgebra, String, GradedAlgebra)> = {
        let m = preset_matrix(tol).expect("preset matrix");
        let mut v = Vec::new();
        for (n1, g1) in &m {
            for (n2, g2) in &m {
                v.push((n1.clone(), g1.clone(), n2.clone(), g2.clone()));
            }
        }
        v
    };

    cases.push(run_case(
        "03-sign-rule-product",
        "π(t₁)π(t₂) = (-1)^{∂B₁∂A₂} π(A₁A₂ ⊗̂ B₁B₂)",
        |c| {
            for (n1, g1, n2, g2) in &pairs {
                let r = verify_sign_rules(g1, g2, 50, derive_seed(seed, &format!("03{n1}{n2}")))?;
                c.residual(&format!("{n1} x {n2}"), r.max_product_residual, 1e-10);
            }
            Ok(())
        },
    ));

    cases.push(run_case(
        "04-sign-rule-adjoint",
        "π(t)† = (-1)^{∂A∂B} π(A† ⊗̂ B†)",
        |c| {
            for (n1, g1, n2, g2) in &pairs {
                let r = verify_sign_rules(g1, g2, 50, derive_seed(seed, &format!("04{n1}{n2}")))?;
                c.residual(&format!("{n1} x {n2}"), r.max_adjoint_residual, 1e-10);
            }
            Ok(())
        },
    ));

    // -- 05: degree correctness of the embedding ------------------------------
    cases.push(run_case(
        "05-pi-degree",
        "Ad_{Γ₁⊗Γ₂} π(t) = (-1)^{∂A+∂B} π(t) for homogeneous t",
        |c| {
            let mut rng = rng_from(derive_seed(seed, "05"));
            for (n1, g1, n2, g2) in &pairs {
                let s1 = g1.split()?;
                let s2 = g2.split()?;
                let gg = g1.gamma().kron(g2.gamma());
                for (da, part1) in [(0u8, &s1.even), (1u8, &s1.odd)] {
                    for (db, part2) in [(0u8, &s2.even), (1u8, &s2.odd)] {
                        if part1.dim() == 0 || part2.dim() == 0 {
                            continue;
                        }
                        let a = random_element(&mut rng, part1);
                        let b = random_element(&mut rng, part2);
                        let m = if db == 0 {
                            a.kron(&b)
                        } else {
                            a.matmul(g1.gamma()).kron(&b)
                        };
                        let sign = if (da + db) % 2 == 1 { -ONE } else { ONE };
                        c.residual(
                            &format!("{n1} x {n2} degrees ({da},{db})"),
                            m.conj_by(&gg).hs_dist(&m.scaled(sign)),
                            1e-10,
                        );
                    }
                }
            }
            Ok(())
        },
    ));

    // -- 06/07: twist algebra and V-conjugation -------------------------------
    cases.push(run_case(
        "06-twist-algebra",
        "L = R^(0) + R^(1)Γ is a graded von Neumann algebra with L^(0) = R^(0), L^(1) = R^(1)Γ; twisting twice returns R",
        |c| {
            let mut targets = preset_matrix(tol)?;
            let s1 = sp(1, tol)?;
            targets.push(("sp:1⊗̂sp:1".to_string(), graded_tensor(&s1, &s1)?.result));
            for (name, g) in &targets {
                let l = g.twist()?;
                l.alg().check_invariants()?;
                let ls = l.split()?;
                let rs = g.split()?;
                c.require(
                    &format!("{name} L^(0) = R^(0)"),
                    ls.even.equal(&rs.even, tol.eq)?,
                );
                let twisted_odd: Vec<CMatrix> = rs
                    .odd
                    .basis()
                    .iter()
                    .map(|b| b.matmul(g.gamma()))
                    .collect();
                let twisted_odd = MatSubspace::span(g.hilbert_dim(), &twisted_odd, tol.rank)?;
                c.require(
                    &format!("{name} L^(1) = R^(1)Γ"),
                    ls.odd.equal(&twisted_odd, tol.eq)?,
                );
                let back = l.twist()?;
                c.require(
                    &format!("{name} twist involution"),
                    back.alg().space().equal(g.alg().space(), tol.eq)?,
                );
            }
            Ok(())
        },
    ));

    cases.push(run_case(
        "07-v-conjugation",
        "V = (1-i)/2 I + (1+i)/2 Γ is unitary, V†RV = L, and V†AV = A^(0) + iA^(1)Γ",
        |c| {
            for (name, g) in &preset_matrix(tol)? {
                let (v, image) = g.v_conjugate()?;
                c.require(&format!("{name} V unitary"), v.is_unitary(tol.eq));
                let twist = g.twist()?;
                c.require(
                    &format!("{name} image is the twist algebra"),
                    image.space().equal(twist.alg().space(), tol.eq)?,
                );
                let vd = v.adjoint();
                for b in g.alg().space().basis() {
                    let lhs = vd.matmul(b).matmul(&v);
                    let (b0, b1) = g.homogeneous_parts(b)?;
                    let mut rhs = b0;
                    rhs.axpy(C64::new(0.0, 1.0), &b1.matmul(g.gamma()));
                    c.residual(
                        &format!("{name} conjugation formula"),
                        lhs.hs_dist(&rhs),
                        tol.eq,
                    );
                }
            }
            Ok(())
        },
    ));

    // -- 08: swap isomorphism --------------------------------------------------
    cases.push(run_case(
        "08-swap",
        "Ad_U Ad_{Γ₁⊗Γ₂} Ad_V Ad_{V₁⊗V₂} carries R₁⊗̂R₂ onto R₂⊗̂R₁ with the four displayed tensor images",
        |c| {
            for (n1, g1, n2, g2) in &pairs {
                let r = swap_isomorphism(g1, g2, 20, derive_seed(seed, &format!("08{n1}{n2}")))?;
                c.require(&format!("{n1} x {n2} subspace"), r.equal);
                c.residual(
                    &format!("{n1} x {n2} tensor images"),
                    r.max_identity_residual,
                    tol.eq,
                );
            }
            Ok(())
        },
    ));

    // -- 09: commutant formula ---------------------------------------------------
    cases.push(run_case(
        "09-commutant-formula",
        "(R₁⊗̂R₂)' is generated by (R₁')^(0) ⊗ R₂' and (R₁')^(1) ⊗ R₂'Γ₂",
        |c| {
            for (n1, g1, n2, g2) in &pairs {
                let formula = commutant_formula(g1, g2)?;
                let direct = graded_tensor(g1, g2)?.result.alg().commutant()?;
                c.require(
                    &format!("{n1} x {n2}"),
                    formula.space().equal(direct.space(), tol.eq)?,
                );
            }
            Ok(())
        },
    ));

    // -- 10: center formula -------------------------------------------------------
    cases.push(run_case(
        "10-center-formula",
        "Z(R₁⊗̂R₂) = Z(R₁)^(0) ⊗̄ Z(R₂)^(0) when both graded centers are balanced",
        |c| {
            for m in [1usize, 2] {
                for n in [1usize, 2] {
                    let g1 = sp(m, tol)?;
                    let g2 = sp(n, tol)?;
                    let r = tensor_center_formula(&g1, &g2, derive_seed(seed, "10"))?;
                    c.require(&format!("sp:{m} x sp:{n} equal"), r.equal);
                    c.require(&format!("sp:{m} x sp:{n} factor"), r.lhs.dim() == 1);
                }
            }
            Ok(())
        },
    ));

    // -- 11/12: even part identities ------------------------------------------------
    cases.push(run_case(
        "11-even-part-product-grading",
        "under Ad_{I⊗Γ₂}: (R₁⊗̂R₂)^{<0>} = R₁ ⊗̄ R₂^(0)",
        |c| {
            for (n1, g1, n2, g2) in &pairs {
                let r = even_part_identity(g1, g2, derive_seed(seed, &format!("11{n1}{n2}")))?;
                c.require(&format!("{n1} x {n2}"), r.product_grading_equal);
            }
            Ok(())
        },
    ));

    cases.push(run_case(
        "12-even-part-diagonal-grading",
        "under Ad_{Γ₁⊗Γ₂}: (R₁⊗̂R₂)^(0) is *-isomorphic to R₁ ⊗̄ R₂^(0) when Z(R₂) is balanced",
        |c| {
            for (n1, g1) in &preset_matrix(tol)? {
                for n in [1usize, 2] {
                    let g2 = sp(n, tol)?;
                    let r =
                        even_part_identity(g1, &g2, derive_seed(seed, &format!("12{n1}sp{n}")))?;
                    let diag = r.diagonal_grading.expect("sp graded center is balanced");
                    c.require(&format!("{n1} x sp:{n} twist image"), diag.twist_equal);
                    c.require(&format!("{n1} x sp:{n} type"), diag.same_type);
                }
            }
            Ok(())
        },
    ));

    // -- 13..17: graded-center structure ------------------------------------------------
    cases.push(run_case(
        "13-center-closed-under-grading",
        "Z(R) is closed under Ad_Γ",
        |c| {
            for (name, g) in &preset_matrix(tol)? {
                let zc = g.graded_center()?;
                c.require(&name.to_string(), zc.alg().dim() >= 1);
            }
            Ok(())
        },
    ));

    cases.push(run_case(
        "14-center-inclusions",
        "Z(R) ⊆ Z(R^(0)) when the graded center is trivially graded; Z(R^(0)) ⊆ Z(R) when it is balanced",
        |c| {
            for (name, g) in &preset_matrix(tol)? {
                let z = g.alg().center()?;
                let even = even_algebra(g)?;
                let z_even = even.center()?;
                let zc = g.graded_center()?;
                let odd_center_dim = zc.split()?.odd.dim();
                if odd_center_dim == 0 {
                    for b in z.space().basis() {
                        c.require(
                            &format!("{name} Z(R) ⊆ Z(R^(0))"),
                            z_even.contains(b)?,
                        );
                    }
                } else {
                    for b in z_even.space().basis() {
                        c.require(
                            &format!("{name} Z(R^(0)) ⊆ Z(R)"),
                            z.contains(b)?,
                        );
                    }
                }
            }
            Ok(())
        },
    ));

    cases.push(run_case(
        "15-abelian-transfer",
        "abelian projections of R^(0) are abelian in R when the graded center is balanced",
        |c| {
            let mut rng = rng_from(derive_seed(seed, "15"));
            for (name, g) in &preset_matrix(tol)? {
                let zc = g.graded_center()?;
                if zc.find_odd_symmetry(derive_seed(seed, name))?.is_none() {
                    continue;
                }
                let even = even_algebra(g)?;
                // Random spectral projections of even elements.
                for _ in 0..4 {
                    let x = random_self_adjoint_element(&mut rng, even.space());
                    for (_, p) in spectral_projections(&x, tol.cluster, &tol)? {
                        if !even.contains(&p)? {
                            continue;
                        }
                        let handle = ProjectionHandle::new(&even, p.clone())?;
                        if even.is_abelian_projection(&handle)? {
                            let in_big = ProjectionHandle::new(g.alg(), p)?;
                            c.require(
                                &format!("{name} transfer"),
                                g.alg().is_abelian_projection(&in_big)?,
                            );
                        }
                    }
                }
            }
            Ok(())
        },
    ));

    cases.push(run_case(
        "16-even-part-factor",
        "for a central non-factor of type I_n, R^(0) is a type I_n factor",
        |c| {
            for n in 1..=3usize {
                let g = sp(n, tol)?;
                let even = even_algebra(&g)?;
                let report = even.factor_decomposition(derive_seed(seed, "16"))?;
                c.require(&format!("sp:{n} factor"), report.is_factor);
                c.require(
                    &format!("sp:{n} block size"),
                    report.summands[0].block_size == n,
                );
            }
            Ok(())
        },
    ));

    cases.push(run_case(
        "17-odd-center-line",
        "for a central grading, Z(R) ∩ R^(1) is {0} or a line C·b spanned by a self-adjoint unitary",
        |c| {
            for (name, g) in &preset_matrix(tol)? {
                if !g.is_central()? {
                    continue;
                }
                match g.odd_center_line()? {
                    None => {
                        c.require(
                            &format!("{name} factor has even center"),
                            g.alg().center()?.dim() == 1,
                        );
                    }
                    Some(b) => {
                        let d = g.hilbert_dim();
                        c.residual(
                            &format!("{name} b self-adjoint"),
                            b.hs_dist(&b.adjoint()),
                            tol.eq,
                        );
                        c.residual(
                            &format!("{name} b unitary"),
                            b.matmul(&b).hs_dist(&CMatrix::identity(d)),
                            tol.eq,
                        );
                        c.require(&format!("{name} b odd"), g.degree_of(&b) == Some(1));
                    }
                }
            }
            // sp:3 gives b = I₃ ⊕ (-I₃).
            let g = sp(3, tol)?;
            let b = g.odd_center_line()?.expect("sp odd center");
            let expected = CMatrix::diag_real(&[1.0, 1.0, 1.0, -1.0, -1.0, -1.0]);
            c.residual("sp:3 b explicit", b.hs_dist(&expected), tol.eq);
            Ok(())
        },
    ));

    // -- 18..20: types of graded tensor products ---------------------------------
    cases.push(run_case(
        "18-type-doubling-2mn",
        "central non-factors of types I_m, I_n: R₁⊗̂R₂ is a type I_{2mn} factor",
        |c| {
            for (m, n) in [(1usize, 1usize), (2, 1), (2, 2), (2, 3)] {
                let t = graded_tensor(&sp(m, tol)?, &sp(n, tol)?)?;
                let report = t
                    .result
                    .alg()
                    .factor_decomposition(derive_seed(seed, &format!("18-{m}{n}")))?;
                c.require(&format!("sp:{m} x sp:{n} factor"), report.is_factor);
                c.require(
                    &format!("sp:{m} x sp:{n} shape"),
                    report.shape() == vec![(2 * m * n, 2)],
                );
            }
            Ok(())
        },
    ));

    cases.push(run_case(
        "19-ordinary-baseline",
        "the ordinary product of the same pairs stays type I_{mn} (four blocks, no doubling)",
        |c| {
            for (m, n) in [(1usize, 1usize), (2, 1), (2, 2), (2, 3)] {
                let ord = ordinary_tensor(sp(m, tol)?.alg(), sp(n, tol)?.alg())?;
                let report = ord.factor_decomposition(derive_seed(seed, &format!("19-{m}{n}")))?;
                c.require(&format!("sp:{m} x sp:{n} non-factor"), !report.is_factor);
                c.require(
                    &format!("sp:{m} x sp:{n} shape"),
                    report.shape() == vec![(m * n, 1); 4],
                );
            }
            Ok(())
        },
    ));

    cases.push(run_case(
        "20-abelian-grid",
        "the projections ((I±U₁)/2 E_a) ⊗ F_b are 2mn equivalent abelian projections summing to I with full central support",
        |c| {
            for (m, n) in [(1usize, 1usize), (2, 1)] {
                let r = abelian_grid(
                    &sp(m, tol)?,
                    &sp(n, tol)?,
                    derive_seed(seed, &format!("20-{m}{n}")),
                )?;
                c.require(
                    &format!("sp:{m} x sp:{n} count"),
                    r.projections.len() == 2 * m * n,
                );
                c.require(&format!("sp:{m} x sp:{n} checks"), r.all_pass());
                c.residual(
                    &format!("sp:{m} x sp:{n} sum"),
                    r.sum_identity_residual,
                    tol.eq,
                );
            }
            Ok(())
        },
    ));

    // -- 21: conditional expectations ---------------------------------------------
    cases.push(run_case(
        "21-conditional-expectation",
        "Φ_z = I ⊗ Ψ_z is a unital positive expectation with Ψ_z(A⊗(B+B'Γ₂)+…) = <Az,z>(B+B'Γ₂), the module property, and a faithful sweep",
        |c| {
            let combos = [("sp:1", "sp:1"), ("sp:1", "sp:2"), ("mf:1,1", "sp:1")];
            for (n1, n2) in combos {
                let g1 = build_preset(&n1.parse::<PresetSpec>()?, tol)?;
                let g2 = build_preset(&n2.parse::<PresetSpec>()?, tol)?;
                let ce = CondExpectation::new(&g1, &g2)?;
                let mut rng = rng_from(derive_seed(seed, &format!("21{n1}{n2}")));
                let s1 = g1.split()?;
                let s2 = g2.split()?;
                let z = crate::random::random_unit_vector(&mut rng, g1.hilbert_dim());
                let d = g1.hilbert_dim() * g2.hilbert_dim();
                let id = CMatrix::identity(d);
                c.residual(
                    &format!("{n1} x {n2} unital"),
                    ce.phi(&z, &id)?.hs_dist(&id),
                    tol.eq,
                );
                for _ in 0..12 {
                    let a = random_element(&mut rng, &s1.even);
                    let b = random_element(&mut rng, &s2.even);
                    let mut second = b.clone();
                    if s2.odd.dim() > 0 {
                        let bp = random_element(&mut rng, &s2.odd);
                        second.axpy(ONE, &bp.matmul(g2.gamma()));
                    }
                    let mut t = a.kron(&second);
                    if s1.odd.dim() > 0 {
                        let cm = random_element(&mut rng, &s1.odd);
                        let dm = random_element(&mut rng, &s2.even);
                        t.axpy(ONE, &cm.matmul(g1.gamma()).kron(&dm.matmul(g2.gamma())));
                        if s2.odd.dim() > 0 {
                            let e = random_element(&mut rng, &s1.odd);
                            let f = random_element(&mut rng, &s2.odd);
                            t.axpy(ONE, &e.matmul(g1.gamma()).kron(&f));
                        }
                    }
                    let psi = ce.psi(&z, &t)?;
                    let az = a.apply(&z);
                    let scalar = crate::mat::vec_dot(&z, &az);
                    c.residual(
                        &format!("{n1} x {n2} compression formula"),
                        psi.hs_dist(&second.scaled(scalar)),
                        1e-10,
                    );
                }
                let sub = ce.subalgebra()?;
                for _ in 0..6 {
                    let t = random_element(&mut rng, ce.twist_space());
                    let x = random_element(&mut rng, sub.space());
                    let y = random_element(&mut rng, sub.space());
                    let lhs = ce.phi(&z, &x.matmul(&t).matmul(&y))?;
                    let rhs = x.matmul(&ce.phi(&z, &t)?).matmul(&y);
                    c.residual(&format!("{n1} x {n2} module"), lhs.hs_dist(&rhs), tol.eq);
                }
                for k in 0..5u64 {
                    let s = random_element(&mut rng, ce.twist_space());
                    let t = s.adjoint().matmul(&s);
                    c.require(
                        &format!("{n1} x {n2} positivity"),
                        ce.psi_min_eigenvalue(&z, &t)? > -tol.eq,
                    );
                    c.require(
                        &format!("{n1} x {n2} faithfulness"),
                        ce.faithfulness_witness(&t, derive_seed(seed, &format!("21w{k}")))?
                            .is_some(),
                    );
                }
            }
            Ok(())
        },
    ));

    // -- 22: central supports agree ---------------------------------------------
    cases.push(run_case(
        "22-central-support-compare",
        "for even A, B the central support of A⊗B agrees in R₁⊗̂R₂ and R₁⊗̄R₂",
        |c| {
            let mut rng = rng_from(derive_seed(seed, "22"));
            let combos = [("sp:1", "sp:1"), ("sp:2", "sp:2"), ("mf:1,1", "sp:2")];
            for (n1, n2) in combos {
                let g1 = build_preset(&n1.parse::<PresetSpec>()?, tol)?;
                let g2 = build_preset(&n2.parse::<PresetSpec>()?, tol)?;
                let s1 = g1.split()?;
                let s2 = g2.split()?;
                for _ in 0..3 {
                    let a = random_self_adjoint_element(&mut rng, &s1.even);
                    let b = random_self_adjoint_element(&mut rng, &s2.even);
                    let r = central_support_compare(
                        &g1,
                        &g2,
                        &a,
                        &b,
                        derive_seed(seed, &format!("22{n1}{n2}")),
                    )?;
                    c.require(&format!("{n1} x {n2}"), r.equal);
                }
            }
            Ok(())
        },
    ));

    // -- 23: the factor case ------------------------------------------------------
    cases.push(run_case(
        "23-factor-case",
        "R₁ = B(H) graded, R₂ balanced: R₁⊗̂R₂ coincides with R₁⊗̄R₂",
        |c| {
            for (p, q) in [(1usize, 1usize), (2, 2)] {
                for n in [1usize, 2] {
                    let g1 = build_preset(&PresetSpec::Mf { p, q }, tol)?;
                    let g2 = sp(n, tol)?;
                    let r = factor_case_identity(&g1, &g2, derive_seed(seed, "23"))?;
                    c.require(&format!("mf:{p},{q} x sp:{n} subspace"), r.equal_subspace);
                    c.require(&format!("mf:{p},{q} x sp:{n} type"), r.reports_equal);
                }
            }
            Ok(())
        },
    ));

    // -- 24: inner implementation of the grading ----------------------------------
    cases.push(run_case(
        "24-implementing-symmetry",
        "an involutive automorphism of a matrix factor is Ad_u for a self-adjoint unitary u recovered from the intertwining system",
        |c| {
            for name in ["mf:1,1", "mf:2,1", "mf:2,2"] {
                let g = build_preset(&name.parse::<PresetSpec>()?, tol)?;
                let images: Vec<CMatrix> =
                    g.alg().space().basis().iter().map(|b| g.theta(b)).collect();
                let u = implementing_symmetry(
                    g.alg().space(),
                    &CMatrix::identity(g.hilbert_dim()),
                    &images,
                    &tol,
                )?;
                c.require(&format!("{name} u self-adjoint"), u.is_self_adjoint(tol.eq));
                c.residual(
                    &format!("{name} u implements the grading"),
                    u.hs_dist(g.gamma()).min(u.hs_dist(&-g.gamma())),
                    tol.eq,
                );
            }
            Ok(())
        },
    ));

    // -- 25: center splitting -------------------------------------------------------
    cases.push(run_case(
        "25-center-split",
        "there are central projections P, Q with every central q ≤ P even and ΓQΓ = (I-P) - Q",
        |c| {
            for (name, g) in &preset_matrix(tol)? {
                let (p, q) = g.center_grading_split(derive_seed(seed, name))?;
                let d = g.hilbert_dim();
                c.residual(
                    &format!("{name} P even"),
                    p.conj_by(g.gamma()).hs_dist(&p),
                    tol.eq,
                );
                let lhs = q.conj_by(g.gamma());
                let mut rhs = CMatrix::identity(d);
                rhs.axpy(-ONE, &p);
                rhs.axpy(-ONE, &q);
                c.residual(&format!("{name} ΓQΓ = (I-P)-Q"), lhs.hs_dist(&rhs), tol.eq);
            }
            Ok(())
        },
    ));

    // -- 26: minimal even projections ------------------------------------------------
    cases.push(run_case(
        "26-minimal-even-projections",
        "B(H) with any grading has an orthogonal family of minimal even projections summing to I",
        |c| {
            for (name, g) in &preset_matrix(tol)? {
                let d = g.hilbert_dim();
                let fam = minimal_even_projections(d, g.gamma(), &tol)?;
                c.require(&format!("{name} count"), fam.len() == d);
                let mut sum = CMatrix::zeros(d, d);
                for p in &fam {
                    c.require(&format!("{name} projection"), p.is_projection(tol.eq));
                    c.residual(
                        &format!("{name} even"),
                        p.conj_by(g.gamma()).hs_dist(p),
                        tol.eq,
                    );
                    c.require(
                        &format!("{name} minimal"),
                        (p.trace().re - 1.0).abs() < 1e-8,
                    );
                    sum.axpy(ONE, p);
                }
                c.residual(
                    &format!("{name} resolution of identity"),
                    sum.hs_dist(&CMatrix::identity(d)),
                    tol.eq,
                );
            }
            Ok(())
        },
    ));

    // -- 27: double commutant ----------------------------------------------------------
    cases.push(run_case(
        "27-double-commutant",
        "R'' = R for every preset and for a graded tensor product",
        |c| {
            let mut targets = preset_matrix(tol)?;
            let s1 = sp(1, tol)?;
            let s2 = sp(2, tol)?;
            targets.push(("sp:1⊗̂sp:2".into(), graded_tensor(&s1, &s2)?.result));
            for (name, g) in &targets {
                let dc = g.alg().commutant()?.commutant()?;
                c.require(
                    &name.to_string(),
                    dc.space().equal(g.alg().space(), tol.eq)?,
                );
            }
            Ok(())
        },
    ));

    // -- 28: the Clifford ladder --------------------------------------------------------
    cases.push(run_case(
        "28-clifford-ladder",
        "k-fold graded powers of sp:1 follow complex Clifford periodicity; the product is associative at the type level",
        |c| {
            let expected: [&[(usize, usize)]; 4] = [
                &[(1, 1), (1, 1)],
                &[(2, 2)],
                &[(2, 2), (2, 2)],
                &[(4, 4)],
            ];
            for (k, shape) in expected.iter().enumerate() {
                let g = build_preset(&PresetSpec::Clifford { k: k + 1 }, tol)?;
                let report = g
                    .alg()
                    .factor_decomposition(derive_seed(seed, &format!("28-{k}")))?;
                c.require(&format!("clifford:{} shape", k + 1), report.shape() == *shape);
            }
            let s1 = sp(1, tol)?;
            let left = graded_tensor(&graded_tensor(&s1, &s1)?.result, &s1)?.result;
            let right = graded_tensor(&s1, &graded_tensor(&s1, &s1)?.result)?.result;
            let lr = left.alg().factor_decomposition(derive_seed(seed, "28l"))?;
            let rr = right.alg().factor_decomposition(derive_seed(seed, "28r"))?;
            c.require("associativity of type", lr.shape() == rr.shape());
            Ok(())
        },
    ));

    // -- 29: the type-I multiplication table --------------------------------------------
    cases.push(run_case(
        "29-multiplication-table",
        "type I table rows: I_m ⊗̂ I_n = I_{mn} in the irreducible-factor regime, I_{2mn} in the central non-factor regime",
        |c| {
            // Irreducible factor x balanced: mf:1,1 x sp:n and mf:1,1 x mf:1,1.
            let r = factor_case_identity(
                &build_preset(&PresetSpec::Mf { p: 1, q: 1 }, tol)?,
                &build_preset(&PresetSpec::Mf { p: 1, q: 1 }, tol)?,
                derive_seed(seed, "29"),
            )?;
            c.require("I_2 ⊗̂ I_2 = I_4", r.graded_report.shape() == vec![(4, 1)]);
            // Central non-factor: sp:1 x sp:2 -> I_4 = I_{2·1·2}.
            let t = graded_tensor(&sp(1, tol)?, &sp(2, tol)?)?;
            let report = t.result.alg().factor_decomposition(derive_seed(seed, "29c"))?;
            c.require("I_1 ⊗̂ I_2 = I_4 (doubled)", report.shape() == vec![(4, 2)]);
            Ok(())
        },
    ));

    // -- 30: randomized conjugation robustness -------------------------------------------
    cases.push(run_case(
        "30-randomized-conjugation",
        "the graded-center facts survive conjugating every preset by random unitaries",
        |c| {
            let names = ["sp:1", "sp:2", "mf:1,1", "mf:2,1", "diag:4:(12)(3)(4)"];
            let mut rng = rng_from(derive_seed(seed, "30"));
            for round in 0..3 {
                for name in names {
                    let g = build_preset(&name.parse::<PresetSpec>()?, tol)?;
                    let u = random_unitary(&mut rng, g.hilbert_dim());
                    let gc = g.conjugated_by(&u)?;
                    let tag = format!("{name}#{round}");
                    gc.graded_center()?;
                    let (p, q) = gc.center_grading_split(derive_seed(seed, &tag))?;
                    let lhs = q.conj_by(gc.gamma());
                    let mut rhs = CMatrix::identity(gc.hilbert_dim());
                    rhs.axpy(-ONE, &p);
                    rhs.axpy(-ONE, &q);
                    c.residual(&format!("{tag} ΓQΓ"), lhs.hs_dist(&rhs), tol.eq);
                    c.require(
                        &format!("{tag} centrality invariant"),
                        gc.is_central()? == g.is_central()?,
                    );
                    let balanced = g.find_odd_symmetry(derive_seed(seed, name))?.is_some();
                    c.require(
                        &format!("{tag} balance invariant"),
                        gc.find_odd_symmetry(derive_seed(seed, &tag))?.is_some() == balanced,
                    );
                }
            }
            Ok(())
        },
    ));

    cases.sort_by(|a, b| a.id.cmp(&b.id));
    let all_passed = cases.iter().all(|c| c.passed);
    VerifyReport {
        seed: format!("{:#x}", cfg.seed),
        tol_eq: tol.eq,
        tol_rank: tol.rank,
        cases,
        all_passed,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn report_serialization_is_deterministic() {
        let report = VerifyReport {
            seed: "0xc1f0".into(),
            tol_eq: 1e-8,
            tol_rank: 1e-9,
            cases: vec![CaseResult {
                id: "x".into(),
                statement: "s".into(),
                passed: true,
                max_residual: 1.25e-12,
                details: vec![],
            }],
            all_passed: true,
        };
        assert_eq!(report.to_json(), report.to_json());
        assert!(report.render_human().contains("PASS"));
    }
}
