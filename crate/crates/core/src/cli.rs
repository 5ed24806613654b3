//! Command dispatch for the `gencx` binary.

use std::path::PathBuf;

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use crate::bundle::{
    construct_rho, curvature_type, local_product_b, regular_gcs_check, BundleModel, ProductOutcome, FLAT_PREDICATE,
};
use crate::coeff::ExactPoint;
use crate::document::{parse_constant, parse_model, ModelDocument};
use crate::dolbeault::{compare_b_transform, gh_cohomology, CohomologyTable};
use crate::error::{Error, Result};
use crate::exterior::{Form, ModelRef};
use crate::generalized::{annihilator, integrability_witness, pure_spinor, type_at, GcsSpec, Witness};
use crate::report::{ErrorInfo, FileResult, Report};
use crate::spectral::{build_filtration, e2_identification, fiber_null_space, kunneth_check, pages};
use crate::suites::closed_b_fields;

#[derive(Parser, Debug)]
#[command(name = "gencx", version, about = "Verify generalized complex structures on coframe models")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Emit a JSON report instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Seed for generated suites (random B-fields).
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Fiber rank parameter for `kunneth`.
    #[arg(long, global = true)]
    l: Option<usize>,
    /// Extra sample point, e.g. `z=1/2+i,t1=1` (angles in quarter turns).
    #[arg(long, global = true)]
    point: Vec<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Kind {
    Check,
    Cohomology,
    BundleVerify,
    Kunneth,
    Spectral,
    Btransform,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Pure spinor, integrability witness, annihilator and type.
    Check {
        #[arg(required = true)]
        files: Vec<PathBuf>,
    },
    /// Generalized Dolbeault cohomology table.
    Cohomology {
        #[arg(required = true)]
        files: Vec<PathBuf>,
    },
    /// Curvature type, closedness of rho and local product structure.
    BundleVerify {
        #[arg(required = true)]
        files: Vec<PathBuf>,
    },
    /// Product formula for M x T^2l.
    Kunneth {
        #[arg(required = true)]
        files: Vec<PathBuf>,
    },
    /// Spectral sequence of the fiber filtration.
    Spectral {
        #[arg(required = true)]
        files: Vec<PathBuf>,
    },
    /// Invariance of GH under closed B-fields.
    Btransform {
        #[arg(required = true)]
        files: Vec<PathBuf>,
    },
}

impl Command {
    fn split(&self) -> (Kind, &[PathBuf]) {
        match self {
            Command::Check { files } => (Kind::Check, files),
            Command::Cohomology { files } => (Kind::Cohomology, files),
            Command::BundleVerify { files } => (Kind::BundleVerify, files),
            Command::Kunneth { files } => (Kind::Kunneth, files),
            Command::Spectral { files } => (Kind::Spectral, files),
            Command::Btransform { files } => (Kind::Btransform, files),
        }
    }
}

impl Kind {
    fn name(self) -> &'static str {
        match self {
            Kind::Check => "check",
            Kind::Cohomology => "cohomology",
            Kind::BundleVerify => "bundle-verify",
            Kind::Kunneth => "kunneth",
            Kind::Spectral => "spectral",
            Kind::Btransform => "btransform",
        }
    }
}

/// Captured process outcome.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

struct Opts {
    seed: u64,
    l: Option<usize>,
    points: Vec<String>,
}

/// Run with `args` excluding the program name.
pub fn run<I, S>(args: I) -> Outcome
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let argv = std::iter::once(std::ffi::OsString::from("gencx")).chain(args.into_iter().map(Into::into));
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            return if code == 0 {
                Outcome { code, stdout: text, stderr: String::new() }
            } else {
                Outcome { code, stdout: String::new(), stderr: text }
            };
        }
    };
    let (kind, files) = cli.command.split();
    let flags = json!({"seed": cli.seed, "l": cli.l, "point": cli.point});
    let opts = Opts { seed: cli.seed, l: cli.l, points: cli.point.clone() };
    let mut report = Report::new(kind.name(), flags);
    for path in files {
        let label = path.display().to_string();
        let text = match std::fs::read_to_string(path) {
            Ok(t) => t,
            Err(e) => {
                report.error = Some(ErrorInfo {
                    kind: "Io".into(),
                    message: format!("cannot read: {e}"),
                    file: Some(label),
                    line: None,
                    column: None,
                });
                break;
            }
        };
        report.add_input(&label, text.as_bytes());
        match parse_model(&text).and_then(|doc| dispatch(kind, &doc, &opts)) {
            Ok(mut r) => {
                r.file = label;
                report.results.push(r);
            }
            Err(e) => {
                report.error = Some(ErrorInfo::from_error(&e, Some(&label)));
                break;
            }
        }
    }
    let code = report.exit_code();
    let stdout = if cli.json { report.render_json() } else { report.render_text() };
    let stderr = match (&report.error, cli.json) {
        (Some(e), true) => format!("error: {}\n", e.message),
        _ => String::new(),
    };
    Outcome { code, stdout, stderr }
}

fn result(verdict: bool, predicate: &str, details: Value, lines: Vec<String>) -> FileResult {
    FileResult { file: String::new(), verdict, predicate: predicate.to_string(), details, lines }
}

fn dispatch(kind: Kind, doc: &ModelDocument, opts: &Opts) -> Result<FileResult> {
    match kind {
        Kind::Check => check(doc, opts),
        Kind::Cohomology => cohomology(doc),
        Kind::BundleVerify => bundle_verify(doc),
        Kind::Kunneth => kunneth(doc, opts),
        Kind::Spectral => spectral(doc),
        Kind::Btransform => btransform(doc, opts),
    }
}

fn parse_point(spec: &str, model: &ModelRef) -> Result<ExactPoint> {
    let vars = model.vars();
    let mut p = ExactPoint::origin(vars);
    for part in spec.split(',').filter(|s| !s.trim().is_empty()) {
        let (name, value) = part
            .split_once('=')
            .ok_or_else(|| Error::Precondition(format!("--point entry `{part}` is not name=value")))?;
        match vars.lookup(name.trim())? {
            crate::coeff::Var::Z(a) => p.z[a] = parse_constant(value.trim())?,
            crate::coeff::Var::T(j) => {
                p.quarter_turns[j] = value.trim().parse().map_err(|_| {
                    Error::Precondition(format!("angle `{name}` takes an integer number of quarter turns"))
                })?
            }
            crate::coeff::Var::Zb(_) => {
                return Err(Error::Precondition(format!("set `{name}` through its holomorphic variable")))
            }
        }
    }
    Ok(p)
}

fn table_line(t: &CohomologyTable) -> String {
    let cells: Vec<String> = t.dims.iter().map(|(k, v)| format!("GH^{k}={v}")).collect();
    format!("{}  (total {})", cells.join(" "), t.total())
}

fn document_bundle(doc: &ModelDocument) -> Result<(BundleModel, Option<Form>)> {
    let b = doc.bundle_model()?.ok_or_else(|| Error::Precondition("this command needs a [bundle] section".into()))?;
    let eta = doc.bundle_eta(&b)?;
    Ok((b, eta))
}

fn spec_of(doc: &ModelDocument) -> Result<GcsSpec> {
    if let Some(g) = &doc.gcs {
        return Ok(g.spec.clone());
    }
    let (b, eta) = document_bundle(doc)?;
    let bfield = eta.unwrap_or_else(|| Form::zero(&b.total));
    GcsSpec::new(bfield, b.omega.clone(), b.big_omega.clone())
}

fn check(doc: &ModelDocument, opts: &Opts) -> Result<FileResult> {
    let spec = spec_of(doc)?;
    let model = spec.model().clone();
    let extra: Vec<ExactPoint> = opts.points.iter().map(|p| parse_point(p, &model)).collect::<Result<_>>()?;
    let predicate = "rho is a pure spinor with nondegenerate pairing and d rho = u.rho";
    let ps = match pure_spinor(&spec, &extra) {
        Ok(ps) => ps,
        Err(e @ Error::DegeneratePairing { .. }) => {
            return Ok(result(
                false,
                predicate,
                json!({"pure_spinor": false, "reason": e.to_string()}),
                vec![e.to_string()],
            ));
        }
        Err(e) => return Err(e),
    };
    let witness = integrability_witness(&ps.rho)?;
    let (integrability, integrable) = match &witness {
        Witness::Closed => ("d rho = 0".to_string(), true),
        Witness::Found(u) => (format!("d rho = u.rho with u = {u}"), true),
        Witness::NoWitnessInRing { d_rho } => (format!("no u found for d rho = {d_rho}"), false),
    };
    let mut points: Vec<ExactPoint> = ExactPoint::sample_grid(model.vars()).into_iter().take(4).collect();
    points.extend(extra);
    // non-constant spinors: annihilator at the first sample point
    let ann = annihilator(&ps.rho, None).or_else(|_| annihilator(&ps.rho, points.first())).map(|a| a.basis.len());
    let types: Vec<usize> = points.iter().map(|p| type_at(&ps.rho, p)).collect::<Result<_>>()?;
    let lines = vec![
        format!("rho = {}", ps.rho),
        format!("pure spinor: {}", serde_json::to_string(&ps.nondegeneracy).expect("json")),
        format!("integrability: {integrability}"),
        match &ann {
            Ok(r) => format!("annihilator rank: {r}"),
            Err(e) => format!("annihilator: {e}"),
        },
        format!("types at sample points: {types:?}"),
    ];
    let details = json!({
        "rho": ps.rho.to_string(),
        "pure_spinor": true,
        "nondegeneracy": ps.nondegeneracy,
        "d_rho_zero": matches!(witness, Witness::Closed),
        "integrable": integrable,
        "integrability": integrability,
        "annihilator_rank": ann.as_ref().ok(),
        "types": types,
    });
    Ok(result(integrable, predicate, details, lines))
}

fn cohomology(doc: &ModelDocument) -> Result<FileResult> {
    let rho = doc.rho()?;
    let predicate = "d respects the U^k grading so that GH = ker dbar / im dbar is defined";
    match gh_cohomology(&rho) {
        Ok(t) => {
            let lines = vec![table_line(&t), format!("euler characteristic: {}", t.euler())];
            Ok(result(true, predicate, json!({"table": t.to_json(), "total": t.total(), "euler": t.euler()}), lines))
        }
        Err(e @ Error::NotIntegrable(_)) => {
            Ok(result(false, predicate, json!({"reason": e.to_string()}), vec![e.to_string()]))
        }
        Err(e) => Err(e),
    }
}

fn bundle_verify(doc: &ModelDocument) -> Result<FileResult> {
    let (b, eta) = document_bundle(doc)?;
    let curv = curvature_type(&b)?;
    let rho = construct_rho(&b, eta.as_ref())?;
    let closed = rho.is_closed();
    let mut lines = vec![format!("curvature is (1,1): {}", curv.is_11), format!("d rho = 0: {closed}")];
    for (j, w) in &curv.witness {
        lines.push(format!("curvature {j} has a (2,0)+(0,2) part: {w}"));
    }
    let mut details = json!({
        "flat": b.is_flat(),
        "curvature": curv,
        "d_rho_zero": closed,
        "d_rho": rho.d().to_string(),
    });
    if b.is_chart() {
        let outcome = local_product_b(&b, None)?;
        let verdict = matches!(&outcome, ProductOutcome::Certificate(c) if c.verified());
        match &outcome {
            ProductOutcome::Certificate(c) => {
                lines.push(format!("B-hat = {}", c.bhat));
                let vars = b.base.vars();
                lines.push(format!(
                    "gauge = {:?}",
                    c.gauge.iter().map(|g| g.display(vars).to_string()).collect::<Vec<_>>()
                ));
                for (k, v) in &c.checks {
                    lines.push(format!("{k}: {v}"));
                }
            }
            ProductOutcome::Obstructed(o) => {
                lines.push(format!("no local product certificate: {} fails", o.predicate));
                for (j, r) in &o.residuals {
                    lines.push(format!("residual on beta_{j}: {r}"));
                }
            }
        }
        details["local_product"] = outcome.to_json();
        return Ok(result(verdict, FLAT_PREDICATE, details, lines));
    }
    let v = regular_gcs_check(&b, eta.as_ref(), 4)?;
    lines.push(format!("types: {:?} (base complex dimension {})", v.types, b.n()));
    details["regular"] = serde_json::to_value(&v).expect("json");
    Ok(result(
        v.d_rho_zero && v.agree,
        "d rho = 0 and the type equals the complex dimension of the base at every sample point",
        details,
        lines,
    ))
}

fn kunneth(doc: &ModelDocument, opts: &Opts) -> Result<FileResult> {
    if !doc.model.is_invariant() {
        return Err(Error::Unsupported("kunneth needs an invariant base model".into()));
    }
    let l = opts.l.or(doc.bundle.as_ref().map(|b| b.l)).unwrap_or(1);
    let v = kunneth_check(&doc.model, l)?;
    let lines = vec![
        format!("GH(M x T^{}): {}", 2 * l, table_line(&v.lhs)),
        format!("convolution:  {}", table_line(&v.rhs)),
        format!("degree-wise equality: {}", v.holds),
        format!("equality with the unshifted indexing: {}", v.shifted_holds),
    ];
    let mut details = v.to_json();
    details["l"] = json!(l);
    Ok(result(v.holds, "GH^c(M x T^2l) = sum over a+b=c of GH^a(M) x GH^b(T^2l) for every c", details, lines))
}

fn spectral(doc: &ModelDocument) -> Result<FileResult> {
    let (b, eta) = document_bundle(doc)?;
    let rho = construct_rho(&b, eta.as_ref())?;
    let s = fiber_null_space(&b)?;
    let predicate = "pages satisfy E_(r+1) = H(E_r, d_r) and converge to GH^(n-k) in total degree k";
    let lf = match build_filtration(&rho, &s) {
        Ok(lf) => lf,
        Err(e @ Error::NotIntegrable(_)) => {
            return Ok(result(false, predicate, json!({"reason": e.to_string()}), vec![e.to_string()]))
        }
        Err(e) => return Err(e),
    };
    let rep = pages(&lf.complex, 4)?;
    let gh = gh_cohomology(&rho)?;
    let matches_gh = rep.total_cohomology.dims.iter().all(|(k, v)| *v == gh.get(lf.n - k))
        && gh.dims.iter().all(|(i, v)| *v == rep.total_cohomology.get(lf.n - i));
    let e2 = match e2_identification(&b) {
        Ok(t) => Some(t),
        Err(Error::Unsupported(_)) => None,
        Err(e) => return Err(e),
    };
    let e2_matches = e2.as_ref().map(|t| rep.page(2) == Some(t));
    let verdict =
        rep.recurrence_agrees && rep.d_squared_zero && rep.converges && matches_gh && e2_matches != Some(false);
    let mut lines = vec![
        format!("S rank {}, L rank {}", lf.s_rank, lf.l_basis.len()),
        format!("stabilizes at r = {}", rep.stabilization_index),
        format!("recurrence agrees: {}, d_r^2 = 0: {}", rep.recurrence_agrees, rep.d_squared_zero),
        format!("sum of E_inf equals total cohomology: {}", rep.converges),
        format!("total cohomology in degree k equals GH^(n-k): {matches_gh}"),
    ];
    match e2_matches {
        Some(m) => lines.push(format!("E_2 equals GH^(n-p)(M) x H^(l-q)(T): {m}")),
        None => lines.push("E_2 identification not available for this bundle".into()),
    }
    for r in 0..=rep.stabilization_index.min(3) {
        lines.push(format!("E_{r}:"));
        lines.extend(rep.grid(r).lines().map(|l| format!("  {l}")));
    }
    let mut details = rep.to_json();
    details["matches_gh"] = json!(matches_gh);
    details["e2_identification_matches"] = json!(e2_matches);
    Ok(result(verdict, predicate, details, lines))
}

fn btransform(doc: &ModelDocument, opts: &Opts) -> Result<FileResult> {
    let (rho0, model) = match &doc.gcs {
        Some(g) => {
            let s = &g.spec;
            (GcsSpec::new(Form::zero(s.model()), s.omega.clone(), s.big_omega.clone())?.rho()?, s.model().clone())
        }
        None => {
            let (b, _) = document_bundle(doc)?;
            (construct_rho(&b, None)?, b.total.clone())
        }
    };
    let mut fields = Vec::new();
    if let Some(g) = &doc.gcs {
        if !g.spec.b.is_zero() {
            fields.push(g.spec.b.clone());
        }
    }
    fields.extend(closed_b_fields(&model, opts.seed, 10));
    let predicate = "GH(e^B rho) = GH(rho) for every closed real B tested";
    let mut all = true;
    let mut cases = Vec::new();
    let mut lines = Vec::new();
    for bf in &fields {
        match compare_b_transform(&rho0, bf) {
            Ok((same, before, after)) => {
                all &= same;
                lines.push(format!("B = {bf}: unchanged = {same}"));
                cases.push(json!({"B": bf.to_string(), "unchanged": same, "before": before.to_json(), "after": after.to_json()}));
            }
            Err(e @ Error::NotIntegrable(_)) => {
                all = false;
                lines.push(format!("B = {bf}: {e}"));
                cases.push(json!({"B": bf.to_string(), "error": e.to_string()}));
            }
            Err(e) => return Err(e),
        }
    }
    Ok(result(all, predicate, json!({"cases": cases, "count": fields.len()}), lines))
}
