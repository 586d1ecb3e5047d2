use std::io::Read;
use std::path::{Path, PathBuf};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};
use twistcolor_core::algebra::{AlgebraError, Biquandle, ElementMap, FiniteQuandle};
use twistcolor_core::coloring::{
    count_colorings, delta_set, detect_nonvirtual, fm_twisted_jones_closed_form, ColoringError, CountOptions,
};
use twistcolor_core::diagram::{make_fm, EditSite, KinkEntry, Sign, TwistedDiagram};
use twistcolor_core::files::{load_structure, FileError, Structure, StructureFile};
use twistcolor_core::moves::{check_family, MoveFamily};
use twistcolor_core::structures::{standard_twisted_product, twisted_product, StructureError, VtStructure};

use crate::config::{Format, RunConfig};

/// A failed run: exit code plus message for stderr.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

pub const EXIT_CHECK: u8 = 1;
pub const EXIT_USAGE: u8 = 2;
pub const EXIT_RESOURCE: u8 = 3;

impl Failure {
    pub fn usage(e: impl std::fmt::Display) -> Self {
        Self { code: EXIT_USAGE, message: e.to_string() }
    }

    fn check(e: impl std::fmt::Display) -> Self {
        Self { code: EXIT_CHECK, message: e.to_string() }
    }

    fn resource(e: impl std::fmt::Display) -> Self {
        Self { code: EXIT_RESOURCE, message: e.to_string() }
    }
}

impl From<ColoringError> for Failure {
    fn from(e: ColoringError) -> Self {
        match e {
            e if e.is_resource() => Failure::resource(e),
            e @ ColoringError::Unverified(_) => Failure::check(e),
            e => Failure::usage(e),
        }
    }
}

impl From<FileError> for Failure {
    fn from(e: FileError) -> Self {
        match e {
            e @ FileError::Algebra(AlgebraError::AxiomsFailed(_)) => Failure::check(e),
            e @ FileError::Structure(
                StructureError::VAxiomsFailed(_) | StructureError::TAxiomsFailed(_),
            ) => Failure::check(e),
            e => Failure::usage(e),
        }
    }
}

/// Successful output. `text` replaces the generic rendering in text mode.
pub struct Outcome {
    pub value: Value,
    pub text: Option<String>,
    pub code: u8,
}

impl Outcome {
    fn new(value: impl Serialize) -> Self {
        Self { value: serde_json::to_value(value).expect("serializable"), text: None, code: 0 }
    }

    fn code(mut self, code: u8) -> Self {
        self.code = code;
        self
    }

    pub fn render(&self, format: Format) -> String {
        match (format, &self.text) {
            (Format::Json, _) => format!("{}\n", self.value),
            (Format::Text, Some(text)) => text.clone(),
            (Format::Text, None) => render_text(&self.value),
        }
    }
}

fn render_text(value: &Value) -> String {
    match value {
        Value::Object(map) => map
            .iter()
            .map(|(k, v)| match v {
                Value::String(s) => format!("{k}: {s}\n"),
                other => format!("{k}: {other}\n"),
            })
            .collect(),
        Value::Array(items) => items.iter().map(render_text).collect(),
        other => format!("{other}\n"),
    }
}

fn read_text(path: &Path) -> Result<String, Failure> {
    if path == Path::new("-") {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).map_err(Failure::usage)?;
        return Ok(s);
    }
    std::fs::read_to_string(path).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))
}

fn read_diagram(path: &Path) -> Result<TwistedDiagram, Failure> {
    TwistedDiagram::parse(&read_text(path)?).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))
}

fn read_structure(path: &Path, verify: bool) -> Result<Structure, Failure> {
    load_structure(&read_text(path)?, verify).map_err(|e| {
        let mut f = Failure::from(e);
        f.message = format!("{}: {}", path.display(), f.message);
        f
    })
}

fn read_quandle(path: &Path) -> Result<FiniteQuandle, Failure> {
    read_structure(path, true)?.into_quandle().map_err(Failure::usage)
}

/// A vt file as is, or a quandle file through its standard twisted product.
fn read_coloring_structure(path: &Path, verify: bool) -> Result<VtStructure, Failure> {
    match read_structure(path, verify)? {
        Structure::Vt(s) => Ok(s),
        Structure::Quandle(q) => Ok(standard_twisted_product(&q)),
        Structure::Biquandle(_) => Err(Failure::usage(
            "a biquandle file has no v-/t-structure; build one with `make twisted-product`",
        )),
    }
}

fn display(path: &Path) -> String {
    path.display().to_string()
}

pub fn check(path: &Path) -> Result<Outcome, Failure> {
    let file = StructureFile::parse(&read_text(path)?)?;
    let suites = file.check()?;
    let pass = suites.iter().all(|(_, r)| r.all_passed());
    let kind = file.load(false).map(|s| s.kind()).unwrap_or(match file {
        StructureFile::Quandle { .. } => "quandle",
        StructureFile::Biquandle { .. } => "biquandle",
        StructureFile::Vt { .. } => "vt",
    });
    let suites: Vec<Value> = suites
        .iter()
        .map(|(name, report)| json!({"suite": name, "pass": report.all_passed(), "checks": report.checks}))
        .collect();
    let mut text = format!("{}: {} {}\n", display(path), kind, if pass { "PASS" } else { "FAIL" });
    for suite in &suites {
        for check in suite["checks"].as_array().unwrap() {
            let mark = if check["passed"] == Value::Bool(true) { "ok  " } else { "FAIL" };
            let witness = check.get("witness").map(|w| format!(" witness {w}")).unwrap_or_default();
            text.push_str(&format!("  {mark} {}{witness}\n", check["axiom"].as_str().unwrap()));
        }
    }
    let outcome = Outcome::new(json!({"file": display(path), "kind": kind, "pass": pass, "suites": suites}));
    Ok(Outcome { text: Some(text), ..outcome.code(if pass { 0 } else { EXIT_CHECK }) })
}

#[derive(clap::Args, Debug, Clone)]
#[group(required = true, multiple = false)]
pub struct QuandleSource {
    /// Dihedral quandle of order N.
    #[arg(long, value_name = "N")]
    pub dihedral: Option<usize>,
    /// Alexander quandle `N,T`: a ∗ b = T·a + (1 − T)·b mod N.
    #[arg(long, value_name = "N,T", value_parser = parse_alexander)]
    pub alexander: Option<(usize, i64)>,
    /// Quandle JSON file.
    #[arg(long, value_name = "FILE")]
    pub quandle: Option<PathBuf>,
}

fn parse_alexander(s: &str) -> Result<(usize, i64), String> {
    let (n, t) = s.split_once(',').ok_or("expected N,T")?;
    Ok((n.trim().parse().map_err(|e| format!("{e}"))?, t.trim().parse().map_err(|e| format!("{e}"))?))
}

impl QuandleSource {
    fn build(&self) -> Result<FiniteQuandle, Failure> {
        if let Some(n) = self.dihedral {
            return FiniteQuandle::dihedral(n).map_err(Failure::usage);
        }
        if let Some((n, t)) = self.alexander {
            return FiniteQuandle::alexander(n, t).map_err(Failure::usage);
        }
        read_quandle(self.quandle.as_ref().expect("clap enforces one source"))
    }
}

#[derive(clap::Subcommand, Debug, Clone)]
pub enum MakeKind {
    /// Dihedral quandle `a ∗ b = 2b − a mod N`.
    Dihedral { n: usize },
    /// Alexander quandle `a ∗ b = T·a + (1 − T)·b mod N`.
    Alexander {
        n: usize,
        #[arg(allow_negative_numbers = true)]
        t: i64,
    },
    /// Derived biquandle `R(x, y) = (y, x ∗ y)`.
    Derived(QuandleSource),
    /// Standard twisted product `B(Q)` as a vt file.
    StandardTwistedProduct(QuandleSource),
    /// Twisted product of the derived biquandle of a quandle, or of a biquandle file.
    TwistedProduct {
        #[command(flatten)]
        source: TwistedSource,
        /// Automorphism `f` as a comma list of images (default identity).
        #[arg(long, value_parser = parse_list)]
        f: Option<Images>,
        /// Automorphism `g` as a comma list of images (default identity).
        #[arg(long, value_parser = parse_list)]
        g: Option<Images>,
    },
    /// Direct product of two biquandle files.
    DirectProduct { left: PathBuf, right: PathBuf },
}

#[derive(clap::Args, Debug, Clone)]
#[group(required = true, multiple = false)]
pub struct TwistedSource {
    #[arg(long, value_name = "N")]
    pub dihedral: Option<usize>,
    #[arg(long, value_name = "N,T", value_parser = parse_alexander)]
    pub alexander: Option<(usize, i64)>,
    #[arg(long, value_name = "FILE")]
    pub quandle: Option<PathBuf>,
    #[arg(long, value_name = "FILE")]
    pub biquandle: Option<PathBuf>,
}

/// Images of `0, 1, ...` under a map of the carrier.
#[derive(Clone, Debug)]
pub struct Images(Vec<usize>);

fn parse_list(s: &str) -> Result<Images, String> {
    s.split(',')
        .map(|x| x.trim().parse().map_err(|e| format!("`{x}`: {e}")))
        .collect::<Result<_, _>>()
        .map(Images)
}

fn read_biquandle(path: &Path) -> Result<Biquandle, Failure> {
    match read_structure(path, true)? {
        Structure::Biquandle(b) => Ok(b),
        Structure::Quandle(q) => Ok(Biquandle::derived(&q)),
        Structure::Vt(_) => Err(Failure::usage("expected a biquandle or quandle file")),
    }
}

pub fn make(kind: &MakeKind, output: Option<&Path>) -> Result<Outcome, Failure> {
    let file = match kind {
        MakeKind::Dihedral { n } => StructureFile::quandle(&FiniteQuandle::dihedral(*n).map_err(Failure::usage)?),
        MakeKind::Alexander { n, t } => {
            StructureFile::quandle(&FiniteQuandle::alexander(*n, *t).map_err(Failure::usage)?)
        }
        MakeKind::Derived(src) => StructureFile::biquandle(&Biquandle::derived(&src.build()?)),
        MakeKind::StandardTwistedProduct(src) => StructureFile::vt(&standard_twisted_product(&src.build()?)),
        MakeKind::TwistedProduct { source, f, g } => {
            let x0 = match source {
                TwistedSource { biquandle: Some(p), .. } => read_biquandle(p)?,
                TwistedSource { dihedral, alexander, quandle, .. } => Biquandle::derived(
                    &QuandleSource { dihedral: *dihedral, alexander: *alexander, quandle: quandle.clone() }.build()?,
                ),
            };
            let map = |images: &Option<Images>| match images {
                None => Ok(ElementMap::identity(x0.n())),
                Some(Images(v)) => ElementMap::new(x0.n(), v.clone()).map_err(Failure::usage),
            };
            let (f, g) = (map(f)?, map(g)?);
            match twisted_product(&x0, &f, &g) {
                Ok(s) => StructureFile::vt(&s),
                Err(e @ (StructureError::TwistedPrecondition { .. } | StructureError::InvalidAutomorphism(_))) => {
                    return Err(Failure::check(e));
                }
                Err(e) => return Err(Failure::usage(e)),
            }
        }
        MakeKind::DirectProduct { left, right } => {
            StructureFile::biquandle(&read_biquandle(left)?.direct_product(&read_biquandle(right)?))
        }
    };
    let json = file.to_json();
    if let Some(path) = output {
        std::fs::write(path, format!("{json}\n")).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?;
        let summary = json!({"output": display(path), "kind": kind_name(&file), "n": file_n(&file)});
        return Ok(Outcome::new(summary));
    }
    let value: Value = serde_json::from_str(&json).expect("valid JSON");
    Ok(Outcome { text: Some(format!("{json}\n")), ..Outcome::new(value) })
}

fn kind_name(f: &StructureFile) -> &'static str {
    match f {
        StructureFile::Quandle { .. } => "quandle",
        StructureFile::Biquandle { .. } => "biquandle",
        StructureFile::Vt { .. } => "vt",
    }
}

fn file_n(f: &StructureFile) -> usize {
    match f {
        StructureFile::Quandle { n, .. } | StructureFile::Biquandle { n, .. } | StructureFile::Vt { n, .. } => *n,
    }
}

pub fn automorphisms(path: &Path, config: &RunConfig) -> Result<Outcome, Failure> {
    let b = read_biquandle(path)?;
    let autos = b.automorphisms(config.automorphism_cap).map_err(|e| match e {
        AlgebraError::SearchLimit { .. } => Failure::resource(e),
        e => Failure::usage(e),
    })?;
    let list: Vec<&[usize]> = autos.iter().map(|h| h.as_slice()).collect();
    Ok(Outcome::new(json!({"file": display(path), "n": b.n(), "count": list.len(), "automorphisms": list})))
}

pub fn color(diagram: &Path, structure: &Path, emit: bool, force: bool, config: &RunConfig) -> Result<Outcome, Failure> {
    let d = read_diagram(diagram)?;
    let s = read_coloring_structure(structure, config.verify && !force)?;
    let options = CountOptions { emit, force: force || !config.verify, limits: config.limits() };
    let result = count_colorings(&d, &s, &options)?;
    let mut value = json!({
        "diagram": display(diagram),
        "structure": display(structure),
        "count": result.count.to_string(),
    });
    if let Some(list) = result.colorings {
        value["edges"] = json!(d.edges());
        value["colorings"] = json!(list
            .iter()
            .map(|c| if d.free_loops() > 0 { json!({"edges": c.edges, "free_loops": c.free_loops}) } else { json!(c.edges) })
            .collect::<Vec<_>>());
    }
    Ok(Outcome::new(value))
}

pub fn fm(m: usize) -> Result<Outcome, Failure> {
    let d = make_fm(m).map_err(Failure::usage)?;
    let text = d.serialize();
    Ok(Outcome { text: Some(text.clone()), ..Outcome::new(json!({"m": m, "diagram": text})) })
}

pub fn delta(quandle: &Path, m: usize) -> Result<Outcome, Failure> {
    let q = read_quandle(quandle)?;
    let set = delta_set(&q, m)?;
    let members: Vec<[usize; 2]> = set.members.iter().map(|&(a, b)| [a, b]).collect();
    Ok(Outcome::new(json!({"quandle": display(quandle), "m": m, "n": q.n(), "size": set.len(), "members": members})))
}

pub fn detect(diagram: &Path, quandle: &Path, config: &RunConfig) -> Result<Outcome, Failure> {
    let d = read_diagram(diagram)?;
    let q = read_quandle(quandle)?;
    let r = detect_nonvirtual(&d, &q, &config.limits())?;
    Ok(Outcome::new(json!({
        "diagram": display(diagram),
        "quandle": display(quandle),
        "count": r.count.to_string(),
        "threshold": r.threshold.to_string(),
        "nonvirtual": r.nonvirtual,
    })))
}

pub fn moves(structure: &Path, families: &[MoveFamily], config: &RunConfig) -> Result<Outcome, Failure> {
    let s = read_coloring_structure(structure, config.verify)?;
    let families: Vec<MoveFamily> = if families.is_empty() { MoveFamily::ALL.to_vec() } else { families.to_vec() };
    let mut reports = Vec::new();
    let mut text = String::new();
    for f in families {
        let report = check_family(f, &s, &config.limits()).map_err(Failure::resource)?;
        let failed = report.variants.iter().filter(|v| !v.pass).count();
        text.push_str(&format!(
            "{} {} ({} variants, {} failing)\n",
            f,
            if report.passed() { "PASS" } else { "FAIL" },
            report.variants.len(),
            failed
        ));
        for v in report.variants.iter().filter(|v| !v.pass) {
            if let Some(w) = &v.witness {
                text.push_str(&format!("  {}: inputs {:?} = {:?}\n", v.id, w.endpoints, w.colors));
            }
        }
        reports.push(report);
    }
    let pass = reports.iter().all(|r| r.passed());
    Ok(Outcome { text: Some(text), ..Outcome::new(&reports).code(if pass { 0 } else { EXIT_CHECK }) })
}

pub fn jones_fm(m: usize) -> Result<Outcome, Failure> {
    let p = fm_twisted_jones_closed_form(m)?;
    let terms: Vec<[i64; 2]> = p.terms().map(|(e, c)| [e, c]).collect();
    let text = format!("{p}\n");
    Ok(Outcome { text: Some(text), ..Outcome::new(json!({"m": m, "polynomial": p.to_string(), "terms": terms})) })
}

/// Applies seeded random local moves and checks that the coloring count never changes.
pub fn invariance(diagram: &Path, structure: &Path, trials: usize, config: &RunConfig) -> Result<Outcome, Failure> {
    let mut d = read_diagram(diagram)?;
    let s = read_coloring_structure(structure, config.verify)?;
    let options = CountOptions { force: !config.verify, limits: config.limits(), ..Default::default() };
    let base = count_colorings(&d, &s, &options)?.count;
    if d.edges().is_empty() && d.free_loops() == 0 {
        return Err(Failure::usage("the empty diagram has no site for a local move"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut edits = Vec::new();
    let mut pass = true;
    for _ in 0..trials {
        let site = if d.edges().is_empty() || (d.free_loops() > 0 && rng.gen_bool(0.2)) {
            EditSite::FreeLoop
        } else {
            EditSite::Edge(d.edges()[rng.gen_range(0..d.edges().len())].clone())
        };
        let entry = if rng.gen_bool(0.5) { KinkEntry::First } else { KinkEntry::Second };
        let (name, next) = match rng.gen_range(0..4) {
            0 => ("kink+", d.with_kink(&site, Sign::Positive, entry)),
            1 => ("kink-", d.with_kink(&site, Sign::Negative, entry)),
            2 => ("virtual-kink", d.with_virtual_kink(&site, entry)),
            _ => ("bar-pair", d.with_bar_pair(&site)),
        };
        let next = next.map_err(Failure::usage)?;
        let count = count_colorings(&next, &s, &options)?.count;
        let ok = count == base;
        pass &= ok;
        let at = match &site {
            EditSite::Edge(e) => e.clone(),
            EditSite::FreeLoop => "free loop".to_owned(),
        };
        edits.push(json!({"edit": name, "at": at, "count": count.to_string(), "pass": ok}));
        d = next;
    }
    let value = json!({
        "seed": config.seed,
        "diagram": display(diagram),
        "structure": display(structure),
        "trials": trials,
        "count": base.to_string(),
        "pass": pass,
        "edits": edits,
    });
    Ok(Outcome::new(value).code(if pass { 0 } else { EXIT_CHECK }))
}
