//! Model-definition files: a TOML document declaring variables, generators, named forms,
//! an optional pure-spinor datum and an optional torus bundle over the model.
//!
//! ```toml
//! [vars]
//! chart = ["z"]
//! angles = []
//!
//! [generator.e4]
//! grade = "F"
//! diff = "e1^e2"
//!
//! [form.w]
//! expr = "e1^e2 + e3^e4"
//!
//! [gcs]
//! omega = "w"
//!
//! [bundle]
//! l = 1
//! beta = ["0", "0"]
//! ```
//!
//! Chart variables get implicit exact generators `d<name>` (and `d<name>b` for the
//! conjugate). Generators of grade `H`/`A` name their partner with `conj`.

mod expr;

use std::fmt::Write as _;
use std::ops::Range;

use indexmap::IndexMap;
use serde::Deserialize;
use toml::Spanned;

use crate::bundle::{build_curved_bundle, construct_rho, BundleModel};
use crate::coeff::VariableTable;
use crate::error::{Error, Result};
use crate::exterior::{Form, Grade, ModelBuilder, ModelRef};
use crate::generalized::GcsSpec;

pub use expr::{parse_constant, parse_expr, parse_form, Bindings, ExprError};

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawDoc {
    vars: Option<RawVars>,
    #[serde(default)]
    generator: IndexMap<String, Spanned<RawGenerator>>,
    #[serde(default)]
    form: IndexMap<String, RawForm>,
    gcs: Option<RawGcs>,
    bundle: Option<Spanned<RawBundle>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawVars {
    #[serde(default)]
    chart: Vec<Spanned<String>>,
    #[serde(default)]
    angles: Vec<Spanned<String>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawGenerator {
    grade: Spanned<String>,
    diff: Option<Spanned<String>>,
    conj: Option<Spanned<String>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawForm {
    expr: Spanned<String>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawGcs {
    #[serde(rename = "B")]
    b: Option<Spanned<String>>,
    omega: Option<Spanned<String>>,
    #[serde(rename = "Omega")]
    big_omega: Option<Spanned<String>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawBundle {
    base: Option<String>,
    l: usize,
    #[serde(default)]
    beta: Vec<Spanned<String>>,
    #[serde(default)]
    structure: Vec<Spanned<String>>,
    eta: Option<Spanned<String>>,
}

/// A declared (non-exact) generator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratorDecl {
    pub name: String,
    pub grade: Grade,
    pub conj: Option<String>,
}

/// `[gcs]` section: `ρ = e^{B + iω} ∧ Ω`.
#[derive(Clone, Debug)]
pub struct GcsDecl {
    pub spec: GcsSpec,
}

/// `[bundle]` section over the document's model.
#[derive(Clone, Debug)]
pub struct BundleDecl {
    pub base: Option<String>,
    pub l: usize,
    pub beta: Vec<Form>,
    pub structure: Vec<Form>,
    pub eta: Option<Form>,
}

#[derive(Clone, Debug)]
pub struct ModelDocument {
    pub source: String,
    pub model: ModelRef,
    pub generators: Vec<GeneratorDecl>,
    pub forms: IndexMap<String, Form>,
    pub gcs: Option<GcsDecl>,
    pub bundle: Option<BundleDecl>,
}

struct Locator<'a> {
    text: &'a str,
}

impl Locator<'_> {
    fn at(&self, offset: usize, message: impl Into<String>) -> Error {
        let offset = offset.min(self.text.len());
        let before = &self.text[..offset];
        let line = before.matches('\n').count() + 1;
        let column = before.rfind('\n').map_or(offset, |p| offset - p - 1) + 1;
        Error::Parse { line, column, message: message.into() }
    }

    fn span(&self, span: Range<usize>, message: impl Into<String>) -> Error {
        self.at(span.start, message)
    }

    /// Map an offset inside a quoted TOML string value to the document.
    fn inside(&self, s: &Spanned<String>, e: ExprError) -> Error {
        self.at(s.span().start + 1 + e.offset, e.message)
    }

    fn semantic(&self, s: &Spanned<String>, what: &str, e: Error) -> Error {
        self.span(s.span(), format!("{what}: {e}"))
    }

    fn form(&self, s: &Spanned<String>, model: &ModelRef, bindings: &Bindings) -> Result<Form> {
        parse_form(s.get_ref(), model, bindings).map_err(|e| self.inside(s, e))
    }
}

/// Parse a model document; syntax and semantic failures carry line and column.
pub fn parse_model(text: &str) -> Result<ModelDocument> {
    let loc = Locator { text };
    let raw: RawDoc = toml::from_str(text).map_err(|e| {
        let start = e.span().map_or(0, |s| s.start);
        loc.at(start, e.message().to_string())
    })?;
    let (chart, angles) = match &raw.vars {
        Some(v) => (v.chart.clone(), v.angles.clone()),
        None => (Vec::new(), Vec::new()),
    };
    let vars =
        VariableTable::new(chart.iter().map(|s| s.get_ref().clone()), angles.iter().map(|s| s.get_ref().clone()))
            .map_err(|e| {
                let at = chart.first().or(angles.first()).map_or(0, |s| s.span().start);
                loc.at(at, e.to_string())
            })?;

    let mut b = ModelBuilder::new(vars);
    b.add_missing_exact();
    let mut decls = Vec::new();
    for (name, g) in &raw.generator {
        let span = g.span();
        let g = g.get_ref();
        if name == "i" || name == "d" || name == "E" || name == "conj" || name == "exp" {
            return Err(loc.span(span, format!("reserved generator name `{name}`")));
        }
        if b.index_of(name).is_some() {
            return Err(loc.span(span, format!("generator `{name}` is implicit or declared twice")));
        }
        let grade = Grade::parse(g.grade.get_ref()).ok_or_else(|| {
            loc.span(g.grade.span(), format!("unknown grade `{}` (expected H, A, F or R)", g.grade.get_ref()))
        })?;
        b.add_generator(name, grade);
        decls.push(GeneratorDecl { name: name.clone(), grade, conj: g.conj.as_ref().map(|c| c.get_ref().clone()) });
    }
    for (name, g) in &raw.generator {
        if let Some(c) = &g.get_ref().conj {
            let a = b.index_of(name).expect("declared");
            let j = b
                .index_of(c.get_ref())
                .ok_or_else(|| loc.span(c.span(), format!("unknown generator `{}`", c.get_ref())))?;
            b.set_conj(a, j);
        }
    }
    let sk = b.skeleton().map_err(|e| loc.at(0, e.to_string()))?;
    let empty = Bindings::new();
    for (name, g) in &raw.generator {
        if let Some(d) = &g.get_ref().diff {
            let f = loc.form(d, &sk, &empty)?;
            let i = b.index_of(name).expect("declared");
            b.set_diff(i, &f).map_err(|e| loc.semantic(d, &format!("diff of `{name}`"), e))?;
        }
    }
    let model = b.build().map_err(|e| {
        let at = raw.generator.values().next().map_or(0, |g| g.span().start);
        loc.at(at, e.to_string())
    })?;

    let mut forms = Bindings::new();
    for (name, f) in &raw.form {
        if model.index_of(name).is_some() || model.vars().lookup(name).is_ok() {
            return Err(loc.span(f.expr.span(), format!("form name `{name}` shadows a generator or variable")));
        }
        let v = loc.form(&f.expr, &model, &forms)?;
        forms.insert(name.clone(), v);
    }

    let opt = |s: &Option<Spanned<String>>| -> Result<Option<Form>> {
        s.as_ref().map(|s| loc.form(s, &model, &forms)).transpose()
    };
    let gcs = match &raw.gcs {
        Some(g) => {
            let bf = opt(&g.b)?.unwrap_or_else(|| Form::zero(&model));
            let omega = opt(&g.omega)?.unwrap_or_else(|| Form::zero(&model));
            let big = opt(&g.big_omega)?.unwrap_or_else(|| Form::one(&model));
            let first = g.b.as_ref().or(g.omega.as_ref()).or(g.big_omega.as_ref());
            let spec = GcsSpec::new(bf, omega, big).map_err(|e| match first {
                Some(s) => loc.semantic(s, "gcs", e),
                None => loc.at(0, format!("gcs: {e}")),
            })?;
            Some(GcsDecl { spec })
        }
        None => None,
    };

    let bundle = match &raw.bundle {
        Some(sb) => {
            let rb = sb.get_ref();
            let list = |v: &[Spanned<String>], what: &str| -> Result<Vec<Form>> {
                if !v.is_empty() && v.len() != 2 * rb.l {
                    return Err(loc.span(sb.span(), format!("{what} needs {} entries, got {}", 2 * rb.l, v.len())));
                }
                if v.is_empty() {
                    return Ok(vec![Form::zero(&model); 2 * rb.l]);
                }
                v.iter().map(|s| loc.form(s, &model, &forms)).collect()
            };
            let beta = list(&rb.beta, "beta")?;
            let structure = list(&rb.structure, "structure")?;
            let eta = opt(&rb.eta)?;
            let decl = BundleDecl { base: rb.base.clone(), l: rb.l, beta, structure, eta };
            let built = build_curved_bundle(&model, &decl.structure, &decl.beta)
                .map_err(|e| loc.span(sb.span(), format!("bundle: {e}")))?;
            if let Some(eta) = &decl.eta {
                let lifted = eta.rebased(&built.total).map_err(|e| loc.span(sb.span(), format!("bundle eta: {e}")))?;
                construct_rho(&built, Some(&lifted)).map_err(|e| loc.span(sb.span(), format!("bundle eta: {e}")))?;
            }
            Some(decl)
        }
        None => None,
    };

    Ok(ModelDocument { source: text.to_string(), model, generators: decls, forms, gcs, bundle })
}

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

fn quoted_list(v: &[Form]) -> String {
    let items: Vec<String> = v.iter().map(|f| quote(&f.to_string())).collect();
    format!("[{}]", items.join(", "))
}

impl ModelDocument {
    pub fn bundle_model(&self) -> Result<Option<BundleModel>> {
        self.bundle.as_ref().map(|b| build_curved_bundle(&self.model, &b.structure, &b.beta)).transpose()
    }

    /// `η` of the bundle section lifted to the total space.
    pub fn bundle_eta(&self, bundle: &BundleModel) -> Result<Option<Form>> {
        match self.bundle.as_ref().and_then(|b| b.eta.as_ref()) {
            Some(e) => Ok(Some(e.rebased(&bundle.total)?)),
            None => Ok(None),
        }
    }

    /// The spinor of the `[gcs]` section, or the bundle's `ρ` when there is none.
    pub fn rho(&self) -> Result<Form> {
        if let Some(g) = &self.gcs {
            return g.spec.rho();
        }
        if let Some(b) = self.bundle_model()? {
            let eta = self.bundle_eta(&b)?;
            return construct_rho(&b, eta.as_ref());
        }
        Err(Error::Precondition("document has neither a [gcs] nor a [bundle] section".into()))
    }

    /// Canonical text; `parse_model(print()).print() == print()`.
    pub fn print(&self) -> String {
        let mut out = String::new();
        let vars = self.model.vars();
        if !vars.is_empty() {
            let names = |v: &[String]| v.iter().map(|s| quote(s)).collect::<Vec<_>>().join(", ");
            let _ = writeln!(
                out,
                "[vars]\nchart = [{}]\nangles = [{}]\n",
                names(vars.chart_names()),
                names(vars.angle_names())
            );
        }
        for g in &self.generators {
            let _ = writeln!(out, "[generator.{}]\ngrade = {}", g.name, quote(g.grade.as_str()));
            if let Some(c) = &g.conj {
                let _ = writeln!(out, "conj = {}", quote(c));
            }
            let i = self.model.index_of(&g.name).expect("generator");
            let d = Form::generator(&self.model, i).d();
            if !d.is_zero() {
                let _ = writeln!(out, "diff = {}", quote(&d.to_string()));
            }
            out.push('\n');
        }
        for (name, f) in &self.forms {
            let _ = writeln!(out, "[form.{name}]\nexpr = {}\n", quote(&f.to_string()));
        }
        if let Some(g) = &self.gcs {
            out.push_str("[gcs]\n");
            if !g.spec.b.is_zero() {
                let _ = writeln!(out, "B = {}", quote(&g.spec.b.to_string()));
            }
            if !g.spec.omega.is_zero() {
                let _ = writeln!(out, "omega = {}", quote(&g.spec.omega.to_string()));
            }
            let _ = writeln!(out, "Omega = {}", quote(&g.spec.big_omega.to_string()));
            out.push('\n');
        }
        if let Some(b) = &self.bundle {
            out.push_str("[bundle]\n");
            if let Some(base) = &b.base {
                let _ = writeln!(out, "base = {}", quote(base));
            }
            let _ = writeln!(out, "l = {}", b.l);
            if b.beta.iter().any(|f| !f.is_zero()) {
                let _ = writeln!(out, "beta = {}", quoted_list(&b.beta));
            }
            if b.structure.iter().any(|f| !f.is_zero()) {
                let _ = writeln!(out, "structure = {}", quoted_list(&b.structure));
            }
            if let Some(e) = &b.eta {
                let _ = writeln!(out, "eta = {}", quote(&e.to_string()));
            }
            out.push('\n');
        }
        while out.ends_with("\n\n") {
            out.pop();
        }
        out
    }
}

/// Load a document from disk.
pub fn load(path: &std::path::Path) -> Result<ModelDocument> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::InvalidModel(format!("cannot read {}: {e}", path.display())))?;
    parse_model(&text)
}
