//! Command-line front end: classify algebras, compute graded and ordinary
//! tensor products side by side, run the verification suite, and print the
//! type multiplication table.

use std::fmt::Write as _;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use gvna::graded::GradedAlgebra;
use gvna::io::parse_algebra;
use gvna::tensor::{factor_case_identity, graded_tensor, ordinary_tensor};
use gvna::verify::{run_verification, VerifyConfig};
use gvna::{build_preset, Error, PresetSpec, Tol, TypeReport};

const EXIT_OK: i32 = 0;
const EXIT_VERIFY_FAILED: i32 = 1;
const EXIT_USAGE: i32 = 2;
const EXIT_NUMERICAL: i32 = 3;

#[derive(Parser)]
#[command(
    name = "gvna",
    about = "Finite-dimensional graded von Neumann algebras: classification, graded tensor products, verification",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Human,
    Json,
}

#[derive(Args)]
struct CommonOpts {
    /// Seed for every randomized internal procedure (hex like 0xc1f0 or decimal).
    #[arg(long, default_value = "0xc1f0", value_parser = parse_seed)]
    seed: u64,
    /// Equality / membership tolerance.
    #[arg(long, default_value_t = 1e-8)]
    tol_eq: f64,
    /// Rank decision tolerance.
    #[arg(long, default_value_t = 1e-9)]
    tol_rank: f64,
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Human)]
    format: Format,
}

impl CommonOpts {
    fn tol(&self) -> Tol {
        Tol {
            eq: self.tol_eq,
            rank: self.tol_rank,
            ..Tol::default()
        }
    }
}

#[derive(Args)]
struct InputOpts {
    /// Preset algebra spec (sp:N, mf:P,Q, clifford:K, diag:D:(cycles)); repeatable.
    #[arg(long = "preset")]
    presets: Vec<String>,
    /// Path to an algebra document; repeatable. Files follow presets in order.
    #[arg(long = "file")]
    files: Vec<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Classify one algebra: type, centrality, balance, center dimensions.
    Report {
        #[command(flatten)]
        input: InputOpts,
        #[command(flatten)]
        opts: CommonOpts,
    },
    /// Graded and ordinary tensor products of two algebras, side by side.
    Tensor {
        #[command(flatten)]
        input: InputOpts,
        #[command(flatten)]
        opts: CommonOpts,
    },
    /// Run the full verification suite.
    Verify {
        #[command(flatten)]
        opts: CommonOpts,
    },
    /// Print the type multiplication table (finite-dimensional rows).
    Table {
        #[command(flatten)]
        opts: CommonOpts,
    },
    /// List the available preset constructions with computed profiles.
    Presets {
        #[command(flatten)]
        opts: CommonOpts,
    },
}

fn parse_seed(s: &str) -> Result<u64, String> {
    let s = s.trim();
    if let Some(hex) = s.strip_prefix("0x").or_else(|| s.strip_prefix("0X")) {
        u64::from_str_radix(hex, 16).map_err(|e| e.to_string())
    } else {
        s.parse()
            .map_err(|e: std::num::ParseIntError| e.to_string())
    }
}

fn exit_code_for(err: &Error) -> i32 {
    match err {
        Error::NumericalInconsistency(_)
        | Error::DegenerateSpectrum { .. }
        | Error::InternalLimit(_)
        | Error::InvariantViolation(_) => EXIT_NUMERICAL,
        _ => EXIT_USAGE,
    }
}

fn load_inputs(input: &InputOpts, tol: Tol) -> gvna::Result<Vec<(String, GradedAlgebra)>> {
    let mut out = Vec::new();
    for p in &input.presets {
        let spec: PresetSpec = p.parse()?;
        out.push((spec.to_string(), build_preset(&spec, tol)?));
    }
    for f in &input.files {
        let text = std::fs::read_to_string(f)
            .map_err(|e| Error::Input(format!("cannot read {f}: {e}")))?;
        let (name, g) = parse_algebra(&text, tol)?;
        out.push((name, g));
    }
    Ok(out)
}

#[derive(Serialize)]
struct AlgebraSummary {
    name: String,
    hilbert_dim: usize,
    algebra_dim: usize,
    type_label: String,
    summands: Vec<(usize, usize)>,
    is_factor: bool,
    central: bool,
    balanced: bool,
    center_dim: usize,
    even_center_dim: usize,
    odd_center_dim: usize,
}

fn summarize(name: &str, g: &GradedAlgebra, seed: u64) -> gvna::Result<AlgebraSummary> {
    let report = g.alg().factor_decomposition(seed)?;
    let center = g.alg().center()?;
    let split = g.split()?;
    let even_center = center.space().intersect(&split.even, g.tol())?;
    let odd_center = center.space().intersect(&split.odd, g.tol())?;
    Ok(AlgebraSummary {
        name: name.to_string(),
        hilbert_dim: g.hilbert_dim(),
        algebra_dim: g.alg().dim(),
        type_label: report.type_label.clone(),
        summands: report.shape(),
        is_factor: report.is_factor,
        central: g.is_central()?,
        balanced: g.find_odd_symmetry(seed)?.is_some(),
        center_dim: center.dim(),
        even_center_dim: even_center.dim(),
        odd_center_dim: odd_center.dim(),
    })
}

fn render_summary(s: &AlgebraSummary) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "algebra: {}", s.name);
    let _ = writeln!(out, "  hilbert dim: {}", s.hilbert_dim);
    let _ = writeln!(out, "  algebra dim: {}", s.algebra_dim);
    let _ = writeln!(
        out,
        "  type: {} ({})",
        s.type_label,
        if s.is_factor {
            "factor"
        } else {
            "not a factor"
        }
    );
    let _ = writeln!(out, "  central: {}", if s.central { "yes" } else { "no" });
    let _ = writeln!(out, "  balanced: {}", if s.balanced { "yes" } else { "no" });
    let _ = writeln!(
        out,
        "  center dim: {} (even {}, odd {})",
        s.center_dim, s.even_center_dim, s.odd_center_dim
    );
    out
}

#[derive(Serialize)]
struct TensorOutput {
    left: AlgebraSummary,
    right: AlgebraSummary,
    graded: ProductSummary,
    ordinary: ProductSummary,
    doubling_rule: Option<DoublingNote>,
}

#[derive(Serialize)]
struct ProductSummary {
    type_label: String,
    summands: Vec<(usize, usize)>,
    is_factor: bool,
    algebra_dim: usize,
}

#[derive(Serialize)]
struct DoublingNote {
    m: usize,
    n: usize,
    doubled_index: usize,
    observed: bool,
}

fn product_summary(report: &TypeReport, dim: usize) -> ProductSummary {
    ProductSummary {
        type_label: report.type_label.clone(),
        summands: report.shape(),
        is_factor: report.is_factor,
        algebra_dim: dim,
    }
}

/// Uniform block size of a homogeneous type I report, when there is one.
fn homogeneous_index(summary: &AlgebraSummary) -> Option<usize> {
    let first = summary.summands.first()?.0;
    summary
        .summands
        .iter()
        .all(|&(b, _)| b == first)
        .then_some(first)
}

fn run_tensor(inputs: &[(String, GradedAlgebra)], opts: &CommonOpts) -> gvna::Result<String> {
    let (lname, left) = &inputs[0];
    let (rname, right) = &inputs[1];
    let ls = summarize(lname, left, opts.seed)?;
    let rs = summarize(rname, right, opts.seed)?;
    let t = graded_tensor(left, right)?;
    let graded_report = t.result.alg().factor_decomposition(opts.seed)?;
    let ord = ordinary_tensor(left.alg(), right.alg())?;
    let ordinary_report = ord.factor_decomposition(opts.seed)?;

    let doubling_rule = match (homogeneous_index(&ls), homogeneous_index(&rs)) {
        (Some(m), Some(n)) if ls.central && rs.central && !ls.is_factor && !rs.is_factor => {
            let doubled = 2 * m * n;
            Some(DoublingNote {
                m,
                n,
                doubled_index: doubled,
                observed: graded_report.is_factor
                    && graded_report.summands.first().map(|s| s.block_size) == Some(doubled),
            })
        }
        _ => None,
    };

    let out = TensorOutput {
        left: ls,
        right: rs,
        graded: product_summary(&graded_report, t.result.alg().dim()),
        ordinary: product_summary(&ordinary_report, ord.dim()),
        doubling_rule,
    };

    Ok(match opts.format {
        Format::Json => serde_json::to_string_pretty(&out).expect("serialization") + "\n",
        Format::Human => {
            let mut s = String::new();
            let _ = writeln!(
                s,
                "graded tensor   {} ⊗̂ {}: {} ({}), dim {}",
                out.left.name,
                out.right.name,
                out.graded.type_label,
                if out.graded.is_factor {
                    "factor"
                } else {
                    "not a factor"
                },
                out.graded.algebra_dim
            );
            let _ = writeln!(
                s,
                "ordinary tensor {} ⊗̄ {}: {} ({}), dim {}",
                out.left.name,
                out.right.name,
                out.ordinary.type_label,
                if out.ordinary.is_factor {
                    "factor"
                } else {
                    "not a factor"
                },
                out.ordinary.algebra_dim
            );
            if let Some(d) = &out.doubling_rule {
                let _ = writeln!(
                    s,
                    "doubling rule: 2·{}·{} = {} {}",
                    d.m,
                    d.n,
                    d.doubled_index,
                    if d.observed { "✓" } else { "NOT OBSERVED" }
                );
            }
            s
        }
    })
}

#[derive(Serialize)]
struct TableCell {
    rule: String,
    verified_by: Vec<String>,
}

#[derive(Serialize)]
struct TableOutput {
    rows: Vec<(String, String, TableCell)>,
    out_of_scope: String,
}

fn run_table(opts: &CommonOpts) -> gvna::Result<String> {
    let tol = opts.tol();
    let seed = opts.seed;
    // Irreducible type I factor against a balanced algebra: no doubling.
    let mut factor_instances = Vec::new();
    for (g1s, g2s) in [("mf:1,1", "mf:1,1"), ("mf:1,1", "sp:1"), ("mf:2,2", "sp:2")] {
        let g1 = build_preset(&g1s.parse::<PresetSpec>()?, tol)?;
        let g2 = build_preset(&g2s.parse::<PresetSpec>()?, tol)?;
        let r = factor_case_identity(&g1, &g2, seed)?;
        if !(r.equal_subspace && r.reports_equal) {
            return Err(Error::NumericalInconsistency(format!(
                "factor-case table cell failed on {g1s} x {g2s}"
            )));
        }
        factor_instances.push(format!("{g1s} ⊗̂ {g2s} -> {}", r.graded_report.type_label));
    }
    // Central non-factor pairs: the index doubles.
    let mut doubled_instances = Vec::new();
    for (m, n) in [(1usize, 1usize), (2, 1), (2, 2)] {
        let g1 = build_preset(&PresetSpec::Sp { n: m }, tol)?;
        let g2 = build_preset(&PresetSpec::Sp { n }, tol)?;
        let t = graded_tensor(&g1, &g2)?;
        let report = t.result.alg().factor_decomposition(seed)?;
        if !(report.is_factor && report.shape() == vec![(2 * m * n, 2)]) {
            return Err(Error::NumericalInconsistency(format!(
                "doubling table cell failed on sp:{m} x sp:{n}"
            )));
        }
        doubled_instances.push(format!("sp:{m} ⊗̂ sp:{n} -> {}", report.type_label));
    }

    let out = TableOutput {
        rows: vec![
            (
                "I_m (irreducible factor)".into(),
                "I_n (balanced)".into(),
                TableCell {
                    rule: "I_{mn}".into(),
                    verified_by: factor_instances,
                },
            ),
            (
                "I_m (central, not a factor)".into(),
                "I_n (central, not a factor)".into(),
                TableCell {
                    rule: "I_{2mn}".into(),
                    verified_by: doubled_instances,
                },
            ),
        ],
        out_of_scope: "rows and columns II_1, II_∞, III: out of scope (infinite-dimensional)"
            .into(),
    };
    Ok(match opts.format {
        Format::Json => serde_json::to_string_pretty(&out).expect("serialization") + "\n",
        Format::Human => {
            let mut s = String::new();
            let _ = writeln!(
                s,
                "type multiplication table, graded tensor product (type I rows)"
            );
            for (r1, r2, cell) in &out.rows {
                let _ = writeln!(s, "  {r1} ⊗̂ {r2} -> {}", cell.rule);
                for v in &cell.verified_by {
                    let _ = writeln!(s, "      verified: {v}");
                }
            }
            let _ = writeln!(s, "  {}", out.out_of_scope);
            s
        }
    })
}

fn run_presets(opts: &CommonOpts) -> gvna::Result<String> {
    let tol = opts.tol();
    let examples = [
        ("sp:N", "sp:2", "M_N ⊕ M_N with the block swap grading"),
        (
            "mf:P,Q",
            "mf:2,1",
            "full B(C^{P+Q}) graded by diag(I_P, -I_Q)",
        ),
        (
            "clifford:K",
            "clifford:2",
            "K-fold graded tensor power of sp:1",
        ),
        (
            "diag:D:(cycles)",
            "diag:4:(12)(3)(4)",
            "diagonal algebra graded by an involutive permutation",
        ),
    ];
    #[derive(Serialize)]
    struct PresetLine {
        syntax: String,
        description: String,
        example: AlgebraSummary,
    }
    let mut lines = Vec::new();
    for (syntax, example, description) in examples {
        let g = build_preset(&example.parse::<PresetSpec>()?, tol)?;
        lines.push(PresetLine {
            syntax: syntax.into(),
            description: description.into(),
            example: summarize(example, &g, opts.seed)?,
        });
    }
    Ok(match opts.format {
        Format::Json => serde_json::to_string_pretty(&lines).expect("serialization") + "\n",
        Format::Human => {
            let mut s = String::new();
            for line in &lines {
                let _ = writeln!(s, "{:<18} {}", line.syntax, line.description);
                let _ = writeln!(
                    s,
                    "{:<18}   e.g. {}: {} ({}; central: {}, balanced: {})",
                    "",
                    line.example.name,
                    line.example.type_label,
                    if line.example.is_factor {
                        "factor"
                    } else {
                        "not a factor"
                    },
                    if line.example.central { "yes" } else { "no" },
                    if line.example.balanced { "yes" } else { "no" },
                );
            }
            s
        }
    })
}

/// Run a parsed command; returns (exit code, stdout payload).
fn dispatch(cli: Cli) -> (i32, String) {
    let outcome: gvna::Result<(i32, String)> = (|| match &cli.command {
        Command::Report { input, opts } => {
            let inputs = load_inputs(input, opts.tol())?;
            if inputs.len() != 1 {
                return Err(Error::Input(format!(
                    "report takes exactly one algebra, got {}",
                    inputs.len()
                )));
            }
            let summary = summarize(&inputs[0].0, &inputs[0].1, opts.seed)?;
            let text = match opts.format {
                Format::Json => {
                    serde_json::to_string_pretty(&summary).expect("serialization") + "\n"
                }
                Format::Human => render_summary(&summary),
            };
            Ok((EXIT_OK, text))
        }
        Command::Tensor { input, opts } => {
            let inputs = load_inputs(input, opts.tol())?;
            if inputs.len() != 2 {
                return Err(Error::Input(format!(
                    "tensor takes exactly two algebras, got {}",
                    inputs.len()
                )));
            }
            Ok((EXIT_OK, run_tensor(&inputs, opts)?))
        }
        Command::Verify { opts } => {
            let report = run_verification(&VerifyConfig {
                seed: opts.seed,
                tol: opts.tol(),
            });
            let text = match opts.format {
                Format::Json => report.to_json() + "\n",
                Format::Human => report.render_human(),
            };
            let code = if report.all_passed {
                EXIT_OK
            } else {
                EXIT_VERIFY_FAILED
            };
            Ok((code, text))
        }
        Command::Table { opts } => Ok((EXIT_OK, run_table(opts)?)),
        Command::Presets { opts } => Ok((EXIT_OK, run_presets(opts)?)),
    })();
    match outcome {
        Ok((code, text)) => (code, text),
        Err(e) => (exit_code_for(&e), format!("error: {e}\n")),
    }
}

/// Entry point used by the binary and by tests: parse `args` (not including
/// the program name) and run.
pub fn run_with_args<I, S>(args: I) -> (i32, String)
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let mut full: Vec<std::ffi::OsString> = vec!["gvna".into()];
    full.extend(args.into_iter().map(Into::into));
    match Cli::try_parse_from(full) {
        Ok(cli) => dispatch(cli),
        Err(e) => {
            // Help/version requests are successful exits; true usage errors
            // carry clap's standard exit code 2.
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            (code, e.to_string())
        }
    }
}

pub fn main_entry() -> i32 {
    let (code, text) = run_with_args(std::env::args_os().skip(1));
    print!("{text}");
    code
}
