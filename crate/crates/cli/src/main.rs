//! arcform: exact-arithmetic toolbox for integral skew-symmetric forms,
//! unimodular-coset arc complexes, simplicial homology, CDGA homology over
//! Q, and homological-stability tables.
//!
//! Exit codes: 0 success/consistent, 1 usage or IO error, 2 a checked
//! claim failed (counterexample), 3 inconclusive at this truncation,
//! 4 resource limit hit.

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, Context};
use clap::{Args, Parser, Subcommand};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde_json::{json, Value};

use arcform::arc::{self, ValidAlgebraicData, Verdict};
use arcform::error::Error as CoreError;
use arcform::exec::Caps;
use arcform::forms::{Order, SkewForm};
use arcform::halgebra::{
    self, cdga_homology, free_gca_series, quotient_by_slope_zero_generator, vanishing_line_check,
    BigradedSeries, GenSpec, Parity,
};
use arcform::homology::{homological_connectivity, reduced_homology};
use arcform::jsonio::{ComplexJson, FormJson, MatrixJson, PresentationJson, SeriesJson};
use arcform::pi1::pi1_trivial;
use arcform::simplicial::SimplicialComplex;
use arcform::stability::{self, Coefficients, StabilityQuery};

#[derive(Parser)]
#[command(name = "arcform", version, about = "Exact skew-form and arc-complex toolbox")]
struct Cli {
    #[command(subcommand)]
    command: Commands,
    #[command(flatten)]
    global: GlobalArgs,
}

#[derive(Args, Clone)]
struct GlobalArgs {
    /// Write the report to this file instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Seed recorded in the report (randomized sweeps live in the test
    /// suite; the CLI itself is deterministic).
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Cap on enumerated coset-complex vertices.
    #[arg(long, global = true, default_value_t = 5000)]
    vertex_cap: usize,
    /// Cap on boundary-matrix nonzeros.
    #[arg(long, global = true, default_value_t = 2_000_000)]
    nnz_cap: usize,
    /// Emit the JSON report (default).
    #[arg(long, global = true, conflicts_with = "text")]
    json: bool,
    /// Emit a human-readable text report.
    #[arg(long, global = true)]
    text: bool,
}

#[derive(Subcommand)]
enum Commands {
    /// Skew-form classification and invariants.
    Forms {
        #[command(subcommand)]
        cmd: FormsCmd,
    },
    /// Arc/coset complexes and weakly Cohen-Macaulay checks.
    Arc {
        #[command(subcommand)]
        cmd: ArcCmd,
    },
    /// General simplicial complexes and posets.
    Complexes {
        #[command(subcommand)]
        cmd: ComplexesCmd,
    },
    /// Bigraded series and CDGA homology.
    Halgebra {
        #[command(subcommand)]
        cmd: HalgebraCmd,
    },
    /// Stability range predicates and tables.
    Stability {
        #[command(subcommand)]
        cmd: StabilityCmd,
    },
}

#[derive(Subcommand)]
enum FormsCmd {
    /// Canonical decomposition of a skew form.
    Canon { file: PathBuf },
    /// Arf invariant of a quadratic refinement (form JSON with qvals).
    Arf { file: PathBuf },
    /// Restrict the form to the kernels of the given functionals.
    Cut {
        file: PathBuf,
        /// A functional as comma-separated coordinates; repeatable.
        #[arg(long = "alpha", required = true)]
        alphas: Vec<String>,
    },
    /// A maximal-order generator of the boundary group.
    Delta { file: PathBuf },
}

#[derive(Subcommand)]
enum ArcCmd {
    /// Build the truncated arc complex of a form.
    Build {
        #[arg(long)]
        form: PathBuf,
        /// "auto" picks a maximal-order boundary generator; "zero" the
        /// zero class; otherwise comma-separated dual coordinates.
        #[arg(long, default_value = "auto")]
        delta: String,
        #[arg(long)]
        height: i64,
        #[arg(long, default_value_t = 2)]
        max_dim: usize,
    },
    /// Check the weakly Cohen-Macaulay thresholds at bounded height.
    VerifyWcm {
        #[arg(long)]
        form: PathBuf,
        #[arg(long, default_value = "auto")]
        delta: String,
        #[arg(long)]
        height: i64,
        /// Cap on the simplex dimensions checked.
        #[arg(long, default_value_t = 2)]
        check_dim: usize,
    },
    /// t(N, N') for a generator matrix.
    TPair {
        #[arg(long)]
        ambient_rank: usize,
        /// Matrix JSON file whose columns generate N'.
        #[arg(long)]
        gens: PathBuf,
    },
}

#[derive(Subcommand)]
enum ComplexesCmd {
    /// Reduced integral homology of a complex file.
    Homology {
        file: PathBuf,
        #[arg(long, default_value_t = 3)]
        max_degree: usize,
    },
    /// Join of two complex files.
    Join { left: PathBuf, right: PathBuf },
    /// Bounded fundamental-group check.
    Pi1 { file: PathBuf },
}

#[derive(Subcommand)]
enum HalgebraCmd {
    /// Dimension series of the free graded-commutative algebra on the
    /// generators of a presentation file.
    Series {
        file: PathBuf,
        #[arg(long, default_value_t = 8)]
        max_g: u32,
        #[arg(long, default_value_t = 8)]
        max_d: u32,
    },
    /// Quotient of the free series by its unique (1,0) generator.
    Quotient {
        file: PathBuf,
        #[arg(long, default_value_t = 8)]
        max_g: u32,
        #[arg(long, default_value_t = 8)]
        max_d: u32,
        /// Name of the slope-zero generator to divide by.
        #[arg(long)]
        by: Option<String>,
    },
    /// Homology of a free CDGA presentation.
    Cdga {
        file: PathBuf,
        #[arg(long, default_value_t = 6)]
        max_g: u32,
        #[arg(long, default_value_t = 6)]
        max_d: u32,
    },
    /// The two closed-form computations at the bottom of the filtration:
    /// homology of (Lambda(s1, rho), d rho = s1^2) and the quotient of
    /// Lambda(s0, [s0,s0]) by s0, for bracket degree k - 1.
    Step0 {
        #[arg(long, default_value_t = 3)]
        k: u32,
        #[arg(long, default_value_t = 8)]
        max_g: u32,
    },
}

#[derive(Subcommand)]
enum StabilityCmd {
    /// Verdict table over a genus/degree grid.
    Table {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        coeffs: String,
        #[arg(long, default_value_t = 20)]
        max_g: u64,
        #[arg(long)]
        max_d: Option<u64>,
    },
    /// One verdict with its clause citation.
    Check {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        coeffs: String,
        #[arg(long)]
        g: u64,
        #[arg(long)]
        d: u64,
    },
}

struct Report {
    subcommand: String,
    params: Value,
    inputs: Vec<String>,
    citations: Vec<String>,
    result: Value,
    text: String,
    verdict: Option<Verdict>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let caps = Caps {
        vertex_cap: cli.global.vertex_cap,
        nnz_cap: cli.global.nnz_cap,
        ..Caps::default()
    };
    match run(&cli.command, &caps) {
        Ok(report) => {
            let code = match report.verdict {
                None | Some(Verdict::Consistent) => ExitCode::SUCCESS,
                Some(Verdict::Counterexample) => ExitCode::from(2),
                Some(Verdict::InconclusiveTruncation) => ExitCode::from(3),
            };
            if let Err(e) = emit(&cli.global, &caps, report) {
                eprintln!("arcform: {e}");
                return ExitCode::from(1);
            }
            code
        }
        Err(e) => {
            eprintln!("arcform: {e:#}");
            let code = match e.downcast_ref::<CoreError>() {
                Some(CoreError::ResourceLimit { .. }) => 4,
                _ => 1,
            };
            ExitCode::from(code)
        }
    }
}

fn emit(global: &GlobalArgs, caps: &Caps, report: Report) -> anyhow::Result<()> {
    let payload = if global.text {
        report.text
    } else {
        let doc = json!({
            "tool": "arcform",
            "subcommand": report.subcommand,
            "manifest": {
                "params": report.params,
                "inputs": report.inputs,
                "seed": global.seed,
                "caps": {"vertex_cap": caps.vertex_cap, "nnz_cap": caps.nnz_cap},
            },
            "citations": report.citations,
            "result": report.result,
        });
        format!("{}\n", serde_json::to_string_pretty(&doc)?)
    };
    match &global.out {
        Some(path) => std::fs::write(path, payload).context("writing report")?,
        None => print!("{payload}"),
    }
    Ok(())
}

fn run(cmd: &Commands, caps: &Caps) -> anyhow::Result<Report> {
    match cmd {
        Commands::Forms { cmd } => run_forms(cmd),
        Commands::Arc { cmd } => run_arc(cmd, caps),
        Commands::Complexes { cmd } => run_complexes(cmd, caps),
        Commands::Halgebra { cmd } => run_halgebra(cmd, caps),
        Commands::Stability { cmd } => run_stability(cmd),
    }
}

fn load_form(path: &PathBuf) -> anyhow::Result<(SkewForm, FormJson)> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("reading {}", path.display()))?;
    let j: FormJson = serde_json::from_str(&text).context("parsing form JSON")?;
    let form = j.to_form()?;
    Ok((form, j))
}

fn load_complex(path: &PathBuf) -> anyhow::Result<SimplicialComplex> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("reading {}", path.display()))?;
    let j: ComplexJson = serde_json::from_str(&text).context("parsing complex JSON")?;
    Ok(j.to_complex()?)
}

fn parse_vector(s: &str) -> anyhow::Result<Vec<BigInt>> {
    s.split(',')
        .map(|p| {
            p.trim()
                .parse::<BigInt>()
                .map_err(|e| anyhow!("bad coordinate {p:?}: {e}"))
        })
        .collect()
}

fn order_json(order: &Order) -> Value {
    match order {
        Order::Infinite => json!("infinite"),
        Order::Finite(d) => json!(d.to_string()),
    }
}

fn run_forms(cmd: &FormsCmd) -> anyhow::Result<Report> {
    match cmd {
        FormsCmd::Canon { file } => {
            let (form, _) = load_form(file)?;
            let c = form.canonical_decomposition();
            let boundary = form.boundary_group();
            let result = json!({
                "rank": form.rank(),
                "genus": c.genus,
                "torsion_pairs": c.torsion_pairs.iter().map(|d| d.to_string()).collect::<Vec<_>>(),
                "zero_rank": c.zero_rank,
                "r_invariant": c.torsion_pairs.len(),
                "t_invariant": 2 * c.genus,
                "boundary_group": boundary.to_string(),
            });
            let mut text = String::new();
            text.push_str(&format!("{:<14} {}\n", "rank", form.rank()));
            text.push_str(&format!("{:<14} {}\n", "genus", c.genus));
            text.push_str(&format!(
                "{:<14} [{}]\n",
                "torsion pairs",
                c.torsion_pairs
                    .iter()
                    .map(|d| d.to_string())
                    .collect::<Vec<_>>()
                    .join(", ")
            ));
            text.push_str(&format!("{:<14} {}\n", "zero rank", c.zero_rank));
            text.push_str(&format!("{:<14} {}\n", "t invariant", 2 * c.genus));
            text.push_str(&format!("{:<14} {}\n", "boundary", boundary));
            Ok(Report {
                subcommand: "forms canon".into(),
                params: json!({"file": file.display().to_string()}),
                inputs: vec![file.display().to_string()],
                citations: vec![
                    "canonical form: hyperbolic part, torsion pairs d_1 | ... | d_r, zero block"
                        .into(),
                ],
                result,
                text,
                verdict: None,
            })
        }
        FormsCmd::Arf { file } => {
            let text = std::fs::read_to_string(file)?;
            let j: FormJson = serde_json::from_str(&text)?;
            let (_, q) = j.to_refinement()?;
            let arf = q.arf();
            Ok(Report {
                subcommand: "forms arf".into(),
                params: json!({"file": file.display().to_string()}),
                inputs: vec![file.display().to_string()],
                citations: vec![
                    "Arf = sum of q(e_i) q(f_i) mod 2 over a hyperbolic basis".into(),
                ],
                result: json!({"genus": q.genus(), "arf": arf, "hyperbolic_qvals": q.values()}),
                text: format!("arf {arf}\n"),
                verdict: None,
            })
        }
        FormsCmd::Cut { file, alphas } => {
            let (form, _) = load_form(file)?;
            let vectors: Vec<Vec<BigInt>> = alphas
                .iter()
                .map(|a| parse_vector(a))
                .collect::<anyhow::Result<_>>()?;
            let cut = form.cut(&vectors)?;
            let c = cut.canonical_decomposition();
            Ok(Report {
                subcommand: "forms cut".into(),
                params: json!({"file": file.display().to_string(), "alphas": alphas}),
                inputs: vec![file.display().to_string()],
                citations: vec![
                    "restriction to the intersection of kernels of a unimodular set drops the rank by the number of functionals"
                        .into(),
                ],
                result: json!({
                    "gram": MatrixJson::from_matrix(cut.gram()),
                    "rank": cut.rank(),
                    "genus": c.genus,
                    "torsion_pairs": c.torsion_pairs.iter().map(|d| d.to_string()).collect::<Vec<_>>(),
                    "zero_rank": c.zero_rank,
                }),
                text: format!("rank {} genus {}\n", cut.rank(), c.genus),
                verdict: None,
            })
        }
        FormsCmd::Delta { file } => {
            let (form, _) = load_form(file)?;
            let delta = form.max_order_delta()?;
            Ok(Report {
                subcommand: "forms delta".into(),
                params: json!({"file": file.display().to_string()}),
                inputs: vec![file.display().to_string()],
                citations: vec![
                    "a generator of a cyclic direct summand of maximal order; infinite order ranks above all finite orders"
                        .into(),
                ],
                result: json!({
                    "representative": delta.representative.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
                    "order": order_json(&delta.order),
                    "boundary_group": delta.ambient.to_string(),
                }),
                text: format!(
                    "delta ({}) of order {}\n",
                    delta
                        .representative
                        .iter()
                        .map(|x| x.to_string())
                        .collect::<Vec<_>>()
                        .join(","),
                    delta.order
                ),
                verdict: None,
            })
        }
    }
}

fn resolve_data(form: SkewForm, delta: &str) -> anyhow::Result<ValidAlgebraicData> {
    match delta {
        "auto" => Ok(ValidAlgebraicData::with_max_order_delta(form)?),
        "zero" => Ok(ValidAlgebraicData::with_zero_delta(form)?),
        coords => {
            let rep = parse_vector(coords)?;
            let pres = form.boundary_presentation();
            let elt = pres.element(&rep)?;
            Ok(ValidAlgebraicData::new(form, elt)?)
        }
    }
}

fn run_arc(cmd: &ArcCmd, caps: &Caps) -> anyhow::Result<Report> {
    match cmd {
        ArcCmd::Build {
            form,
            delta,
            height,
            max_dim,
        } => {
            let (f, _) = load_form(form)?;
            let data = resolve_data(f, delta)?;
            let spec = data.coset_spec(*height, *max_dim);
            let built = arc::build_complex(&spec, caps)?;
            let complex_json = ComplexJson::from_complex(&built.complex);
            let counts: Vec<usize> = (0..=built.complex.dim().max(0) as usize)
                .map(|k| built.complex.count(k))
                .collect();
            Ok(Report {
                subcommand: "arc build".into(),
                params: json!({
                    "form": form.display().to_string(),
                    "delta": delta,
                    "height": height,
                    "max_dim": max_dim,
                }),
                inputs: vec![form.display().to_string()],
                citations: vec![
                    "vertices: unimodular dual vectors in the boundary coset; simplices: jointly unimodular subsets"
                        .into(),
                ],
                result: json!({
                    "vertex_count": built.vertices.len(),
                    "simplex_counts": counts,
                    "complex": complex_json,
                }),
                text: format!(
                    "vertices {} simplices {:?}\n",
                    built.vertices.len(),
                    (0..=built.complex.dim().max(0) as usize)
                        .map(|k| built.complex.count(k))
                        .collect::<Vec<_>>()
                ),
                verdict: None,
            })
        }
        ArcCmd::VerifyWcm {
            form,
            delta,
            height,
            check_dim,
        } => {
            let (f, _) = load_form(form)?;
            let data = resolve_data(f, delta)?;
            let t = data.t_value() as i64;
            let spec = data.coset_spec(*height, *check_dim + 1);
            let report = arc::verify_wcm(&spec, t - 2, *check_dim, caps)?;
            let thresholds: Vec<Value> = report
                .thresholds
                .iter()
                .map(|c| {
                    json!({
                        "condition": c.condition,
                        "required": c.required,
                        "checked": c.checked,
                        "failures": c.failures,
                        "detail": c.detail,
                    })
                })
                .collect();
            let homology: Vec<Value> = report
                .homology
                .iter()
                .map(|(d, g)| json!({"degree": d, "group": g}))
                .collect();
            let mut text = format!(
                "wcm dimension {} (t = {}), height {}\n",
                report.wcm_dimension, t, report.height
            );
            for c in &report.thresholds {
                text.push_str(&format!(
                    "  {:<28} required {:>3}  checked {:>8}  failures {}\n",
                    c.condition, c.required, c.checked, c.failures
                ));
            }
            text.push_str(&format!("  pi1: {}\n", report.pi1_status));
            text.push_str(&format!("verdict: {}\n", report.verdict));
            let verdict = report.verdict;
            Ok(Report {
                subcommand: "arc verify-wcm".into(),
                params: json!({
                    "form": form.display().to_string(),
                    "delta": delta,
                    "height": height,
                    "check_dim": check_dim,
                }),
                inputs: vec![form.display().to_string()],
                citations: vec![
                    "weakly Cohen-Macaulay of dimension t - 2: the complex is (t-3)-connected and links of p-simplices are (t-4-p)-connected"
                        .into(),
                ],
                result: json!({
                    "wcm_dimension": report.wcm_dimension,
                    "t_value": t,
                    "vertex_count": report.vertex_count,
                    "simplex_counts": report.simplex_counts,
                    "thresholds": thresholds,
                    "homology_tables": homology,
                    "pi1_status": report.pi1_status.to_string(),
                    "verdict": report.verdict.to_string(),
                    "note": report.note,
                }),
                text,
                verdict: Some(verdict),
            })
        }
        ArcCmd::TPair { ambient_rank, gens } => {
            let text = std::fs::read_to_string(gens)?;
            let j: MatrixJson = serde_json::from_str(&text)?;
            let m = j.to_matrix()?;
            let t = arc::t_of_pair(*ambient_rank, &m)?;
            Ok(Report {
                subcommand: "arc t-pair".into(),
                params: json!({"ambient_rank": ambient_rank, "gens": gens.display().to_string()}),
                inputs: vec![gens.display().to_string()],
                citations: vec![
                    "t(N, N'): maximal rank of a submodule of N' that is a direct summand of N; the number of unit invariant factors"
                        .into(),
                ],
                result: json!({"t": t}),
                text: format!("t {t}\n"),
                verdict: None,
            })
        }
    }
}

fn run_complexes(cmd: &ComplexesCmd, caps: &Caps) -> anyhow::Result<Report> {
    match cmd {
        ComplexesCmd::Homology { file, max_degree } => {
            let c = load_complex(file)?;
            let table = reduced_homology(&c, *max_degree, caps)?;
            let conn = homological_connectivity(&c, *max_degree as i64, caps)?;
            let groups: Vec<Value> = table
                .iter()
                .map(|(d, g)| json!({"degree": d, "group": g.to_string()}))
                .collect();
            let mut text = String::new();
            for (d, g) in table.iter() {
                text.push_str(&format!("H~_{d} = {g}\n"));
            }
            text.push_str(&format!("homological connectivity: {conn}\n"));
            Ok(Report {
                subcommand: "complexes homology".into(),
                params: json!({"file": file.display().to_string(), "max_degree": max_degree}),
                inputs: vec![file.display().to_string()],
                citations: vec!["reduced integral homology via Smith normal form".into()],
                result: json!({
                    "groups": groups,
                    "connectivity": conn.to_string(),
                    "euler_characteristic": c.euler_characteristic(),
                }),
                text,
                verdict: None,
            })
        }
        ComplexesCmd::Join { left, right } => {
            let a = load_complex(left)?;
            let b = load_complex(right)?;
            let j = a.join(&b);
            Ok(Report {
                subcommand: "complexes join".into(),
                params: json!({
                    "left": left.display().to_string(),
                    "right": right.display().to_string(),
                }),
                inputs: vec![left.display().to_string(), right.display().to_string()],
                citations: vec![
                    "join connectivity adds: conn(X * Y) >= conn(X) + conn(Y) + 2".into(),
                ],
                result: json!({"complex": ComplexJson::from_complex(&j)}),
                text: format!(
                    "join has {} vertices, {} simplices\n",
                    j.count(0),
                    j.total_simplices()
                ),
                verdict: None,
            })
        }
        ComplexesCmd::Pi1 { file } => {
            let c = load_complex(file)?;
            let status = pi1_trivial(&c);
            Ok(Report {
                subcommand: "complexes pi1".into(),
                params: json!({"file": file.display().to_string()}),
                inputs: vec![file.display().to_string()],
                citations: vec![
                    "edge-path group presentation from a spanning tree, bounded Tietze simplification; unknown is an honest verdict"
                        .into(),
                ],
                result: json!({"pi1_status": status.to_string()}),
                text: format!("pi1: {status}\n"),
                verdict: None,
            })
        }
    }
}

fn series_result(series: &BigradedSeries) -> Value {
    serde_json::to_value(SeriesJson::from_series(series)).expect("series serializes")
}

fn series_text(series: &BigradedSeries) -> String {
    let mut text = String::from("  g\\d");
    for d in 0..=series.max_d() {
        text.push_str(&format!("{d:>6}"));
    }
    text.push('\n');
    for g in 0..=series.max_g() {
        text.push_str(&format!("{g:>5}"));
        for d in 0..=series.max_d() {
            text.push_str(&format!("{:>6}", series.get(g, d).to_string()));
        }
        text.push('\n');
    }
    text
}

fn load_presentation(path: &PathBuf) -> anyhow::Result<PresentationJson> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).context("parsing presentation JSON")
}

fn run_halgebra(cmd: &HalgebraCmd, caps: &Caps) -> anyhow::Result<Report> {
    match cmd {
        HalgebraCmd::Series { file, max_g, max_d } => {
            let pres = load_presentation(file)?;
            let gens = pres.to_generators()?;
            let series = free_gca_series(&gens, *max_g, *max_d)?;
            Ok(Report {
                subcommand: "halgebra series".into(),
                params: json!({"file": file.display().to_string(), "max_g": max_g, "max_d": max_d}),
                inputs: vec![file.display().to_string()],
                citations: vec![
                    "free graded-commutative algebra: polynomial on even parity, exterior on odd".into(),
                ],
                result: series_result(&series),
                text: series_text(&series),
                verdict: None,
            })
        }
        HalgebraCmd::Quotient {
            file,
            max_g,
            max_d,
            by,
        } => {
            let pres = load_presentation(file)?;
            let gens = pres.to_generators()?;
            let series = free_gca_series(&gens, *max_g, *max_d)?;
            let divisor = match by {
                Some(name) => gens
                    .iter()
                    .find(|g| &g.name == name)
                    .ok_or_else(|| anyhow!("no generator named {name}"))?
                    .clone(),
                None => gens
                    .iter()
                    .find(|g| g.grading == 1 && g.degree == 0)
                    .ok_or_else(|| anyhow!("no generator in bidegree (1, 0)"))?
                    .clone(),
            };
            let q = quotient_by_slope_zero_generator(&series, &divisor)?;
            Ok(Report {
                subcommand: "halgebra quotient".into(),
                params: json!({
                    "file": file.display().to_string(),
                    "max_g": max_g,
                    "max_d": max_d,
                    "by": divisor.name,
                }),
                inputs: vec![file.display().to_string()],
                citations: vec![
                    "free quotient by a (1,0) generator: new(g,d) = old(g,d) - old(g-1,d)".into(),
                ],
                result: series_result(&q),
                text: series_text(&q),
                verdict: None,
            })
        }
        HalgebraCmd::Cdga { file, max_g, max_d } => {
            let pres = load_presentation(file)?.to_presentation()?;
            let h = cdga_homology(&pres, *max_g, *max_d, caps)?;
            Ok(Report {
                subcommand: "halgebra cdga".into(),
                params: json!({"file": file.display().to_string(), "max_g": max_g, "max_d": max_d}),
                inputs: vec![file.display().to_string()],
                citations: vec![
                    "homology per bidegree from the monomial basis, Leibniz differential with Koszul signs, exact ranks"
                        .into(),
                ],
                result: series_result(&h),
                text: series_text(&h),
                verdict: None,
            })
        }
        HalgebraCmd::Step0 { k, max_g } => {
            if *k < 3 {
                return Err(anyhow!("step0 needs k >= 3"));
            }
            // Part 1: homology of (Lambda(s1, rho), d rho = s1^2) with rho
            // in bidegree (2, 1): the truncated polynomial ring Q[s1]/(s1^2).
            let gens = vec![
                GenSpec::new("s1", 1, 0),
                GenSpec::with_parity("rho", 2, 1, Parity::Odd),
            ];
            let d_rho = halgebra::parse_polynomial(&gens, "s1^2")?;
            let pres = halgebra::FreeCdgaPresentation::new(gens, vec![None, Some(d_rho)])?;
            let h = cdga_homology(&pres, *max_g, 3, caps)?;
            let mut truncated_ok = true;
            for g in 0..=*max_g {
                for d in 0..=3u32 {
                    let expect_one = (g == 0 || g == 1) && d == 0;
                    let v = h.get(g, d);
                    if expect_one != v.is_one() || (!expect_one && !v.is_zero()) {
                        truncated_ok = false;
                    }
                }
            }

            // Part 2: Lambda(s0, tau) with tau = [s0, s0] exterior in
            // bidegree (2, k-1), quotiented by s0: supported on (0,0) and
            // (2, k-1), i.e. on the line of slope (k-1)/2.
            let s0 = GenSpec::new("s0", 1, 0);
            let tau = GenSpec::with_parity("tau", 2, *k - 1, Parity::Odd);
            let free = free_gca_series(&[s0.clone(), tau], *max_g, *k - 1)?;
            let quotient = quotient_by_slope_zero_generator(&free, &s0)?;
            let slope = BigRational::new(BigInt::from(*k - 1), BigInt::from(2));
            let (on_line, witness) =
                vanishing_line_check(&quotient, &slope, &BigRational::from_integer(0.into()));

            let verdict = if truncated_ok && on_line {
                Verdict::Consistent
            } else {
                Verdict::Counterexample
            };
            let mut text = format!(
                "truncated polynomial ring reproduced: {truncated_ok}\nquotient supported on the slope-{}/2 line: {on_line}\n",
                k - 1
            );
            text.push_str(&series_text(&quotient));
            Ok(Report {
                subcommand: "halgebra step0".into(),
                params: json!({"k": k, "max_g": max_g}),
                inputs: vec![],
                citations: vec![
                    "homology of (Lambda(s1, rho), d rho = s1^2) is Q[s1]/(s1^2)".into(),
                    "Lambda(s0, [s0,s0]) / s0 = Lambda([s0,s0]), supported on the line of slope (k-1)/2 through the origin"
                        .into(),
                ],
                result: json!({
                    "truncated_polynomial_ok": truncated_ok,
                    "homology": series_result(&h),
                    "quotient": series_result(&quotient),
                    "quotient_on_slope_line": on_line,
                    "first_violation": witness.map(|(g, d)| json!([g, d])),
                    "verdict": verdict.to_string(),
                }),
                text,
                verdict: Some(verdict),
            })
        }
    }
}

fn run_stability(cmd: &StabilityCmd) -> anyhow::Result<Report> {
    match cmd {
        StabilityCmd::Table {
            n,
            coeffs,
            max_g,
            max_d,
        } => {
            let coeffs = Coefficients::parse(coeffs)?;
            let max_d = max_d.unwrap_or(*max_g);
            let (rows, citation) = stability::stability_table(*n, coeffs, *max_g, max_d)?;
            let entries: Vec<Value> = rows
                .iter()
                .map(|r| {
                    json!({
                        "g": r.g,
                        "d": r.d,
                        "surjective": r.surjective,
                        "isomorphism": r.isomorphism,
                        "clause": r.case_label,
                    })
                })
                .collect();
            // Text grid: I = isomorphism, S = surjective only, . = neither.
            let mut text = format!(
                "stability table: n = {n}, coefficients {}\nclause: {citation}\nrows g = 1..{max_g}, columns d = 0..{max_d}; I isomorphism, S surjective only, . neither\n\n",
                coeffs.label()
            );
            text.push_str("  g\\d");
            for d in 0..=max_d {
                text.push_str(&format!("{:>3}", d % 100));
            }
            text.push('\n');
            for g in 1..=*max_g {
                text.push_str(&format!("{g:>5}"));
                for d in 0..=max_d {
                    let r = &rows[((g - 1) * (max_d + 1) + d) as usize];
                    let ch = if r.isomorphism {
                        'I'
                    } else if r.surjective {
                        'S'
                    } else {
                        '.'
                    };
                    text.push_str(&format!("{ch:>3}"));
                }
                text.push('\n');
            }
            Ok(Report {
                subcommand: "stability table".into(),
                params: json!({
                    "n": n,
                    "coeffs": coeffs.label(),
                    "max_g": max_g,
                    "max_d": max_d,
                }),
                inputs: vec![],
                citations: vec![citation],
                result: json!({"entries": entries}),
                text,
                verdict: None,
            })
        }
        StabilityCmd::Check { n, coeffs, g, d } => {
            let coeffs = Coefficients::parse(coeffs)?;
            let v = stability::theorem_a(&StabilityQuery::new(*n, coeffs, *g, *d)?)?;
            Ok(Report {
                subcommand: "stability check".into(),
                params: json!({"n": n, "coeffs": coeffs.label(), "g": g, "d": d}),
                inputs: vec![],
                citations: vec![v.citation.clone()],
                result: json!({
                    "surjective": v.surjective,
                    "isomorphism": v.isomorphism,
                    "clause": v.case_label,
                }),
                text: format!(
                    "clause {}: surjective {}, isomorphism {}\n",
                    v.case_label, v.surjective, v.isomorphism
                ),
                verdict: None,
            })
        }
    }
}
