//! One function per subcommand. Each returns the JSON payload plus what the
//! grid and SVG formats need.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use motivic_core::fpt::{
    check_torsion_powers, check_torsion_powers_ind, check_u_sequences, classify_divisible, decompose, FptModule,
    IndFptModule,
};
use motivic_core::graded::BigradedChart;
use motivic_core::hopf::{build_algebroid, ext_chart_with, AlgebroidKind, ExtChart, ExtOptions};
use motivic_core::milnor::{complete_kmw, milnor_witt, Catalog, FieldDescriptor, KMWChart};
use motivic_core::stems::synthetic::{SyntheticChart, SyntheticTable, Table};
use motivic_core::stems::tensor::{kmw_basis, shifted_sum};
use motivic_core::stems::{anss_e1, mgl_homotopy, stem_sources, synthetic_stems, SyntheticSource, Window};
use motivic_core::{CoreError, Result};
use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::{json, Value};

use crate::cache::Cache;
use crate::checks;
use crate::render::{renderers, Axes};

pub struct Output {
    pub json: String,
    pub chart: Option<(BigradedChart, Axes)>,
    pub report: Option<String>,
    pub success: bool,
}

impl Output {
    fn chart(json: String, chart: BigradedChart, axes: Axes) -> Self {
        Output { json, chart: Some((chart, axes)), report: None, success: true }
    }

    /// The document for `format`, always newline-terminated.
    pub fn render(&self, format: &str) -> Result<String> {
        let mut s = match (format, &self.chart, &self.report) {
            ("json", _, _) => self.json.clone(),
            (f, Some((c, axes)), _) => renderers().get(f)?.render(c, axes),
            ("grid", None, Some(r)) => r.clone(),
            ("grid", None, None) => self.json.clone(),
            (f, None, _) => return Err(CoreError::Precondition(format!("format `{f}` needs a chart-valued command"))),
        };
        if !s.ends_with('\n') {
            s.push('\n');
        }
        Ok(s)
    }
}

pub struct Context {
    pub catalog: Catalog,
    pub cache: Option<Cache>,
}

fn to_json<T: Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("payloads serialize")
}

fn parse_err(e: serde_json::Error) -> CoreError {
    CoreError::Parse(e.to_string())
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| CoreError::Io(format!("{}: {e}", path.display())))
}

impl Context {
    pub fn new(catalog_path: Option<&Path>, cache_dir: Option<&Path>) -> Result<Self> {
        let catalog = match catalog_path {
            Some(p) => Catalog::load(p)?,
            None => Catalog::builtin(),
        };
        let cache = match cache_dir {
            Some(d) => Some(Cache::open(d, motivic_core::ENGINE_VERSION).map_err(|e| CoreError::Io(e.to_string()))?),
            None => None,
        };
        Ok(Context { catalog, cache })
    }

    /// Looks `(command, params)` up in the cache, computing and storing on a
    /// miss. A corrupt entry is reported on stderr and recomputed.
    fn cached<T: Serialize + DeserializeOwned>(
        &self,
        command: &str,
        params: &Value,
        compute: impl FnOnce() -> Result<T>,
    ) -> Result<(T, String)> {
        let Some(cache) = &self.cache else {
            let v = compute()?;
            let s = to_json(&v);
            return Ok((v, s));
        };
        match cache.load(command, params) {
            Ok(Some(payload)) => match serde_json::from_str(&payload) {
                Ok(v) => return Ok((v, payload)),
                Err(e) => eprintln!("warning: cached payload for `{command}` unreadable ({e}); recomputing"),
            },
            Ok(None) => {}
            Err(e) => eprintln!("warning: {e}; recomputing"),
        }
        let v = compute()?;
        let s = to_json(&v);
        if let Err(e) = cache.store(command, params, &s) {
            eprintln!("warning: {e}");
        }
        Ok((v, s))
    }

    fn field(&self, name: &str) -> Result<FieldDescriptor> {
        self.catalog.resolve(name)
    }
}

/// Parses `LO..HI` (or a single integer).
pub fn parse_range(s: &str) -> Result<(i64, i64)> {
    let bad = || CoreError::Parse(format!("bad range `{s}`, expected LO..HI"));
    let (a, b) = s.split_once("..").unwrap_or((s, s));
    let lo = a.trim().parse().map_err(|_| bad())?;
    let hi = b.trim().parse().map_err(|_| bad())?;
    Ok((lo, hi))
}

pub struct ExtArgs {
    pub prime: u64,
    pub s_max: u32,
    pub t_max: u32,
    pub precision: u32,
    pub universal: bool,
    pub unnormalized: bool,
    pub bidegree_view: bool,
}

pub fn ext(ctx: &Context, a: &ExtArgs) -> Result<Output> {
    let kind = if a.universal { AlgebroidKind::Universal } else { AlgebroidKind::PTypical(a.prime) };
    let params = json!({
        "algebroid": kind.to_string(),
        "prime": a.prime,
        "precision": a.precision,
        "s_max": a.s_max,
        "t_max": a.t_max,
        "normalized": !a.unnormalized,
    });
    let (e, json) = ctx.cached("ext", &params, || -> Result<ExtChart> {
        let h = build_algebroid(kind, a.t_max.div_ceil(2).max(1))?;
        ext_chart_with(&h, a.prime, a.precision, a.s_max, a.t_max, ExtOptions { normalized: !a.unnormalized, parallel: true })
    })?;
    let (chart, axes) = if a.bidegree_view {
        (e.chart.clone(), Axes::new("s", "t"))
    } else {
        (e.chart.reindex(|s, t| (t - s, s))?, Axes::stem_filtration())
    };
    Ok(Output::chart(json, chart, axes))
}

/// `K^MW_n` placed at `(-n, -n)`, where it sits on the zero line.
fn kmw_zero_line(c: &KMWChart) -> BigradedChart {
    let mut out = BigradedChart::new(format!("K^MW of {}", c.field.name), c.completed_at);
    for (&n, g) in &c.kmw {
        out.set(-n, -n, g.clone());
    }
    out
}

pub fn kmw(ctx: &Context, field: &str, range: (i64, i64), complete: Option<u64>) -> Result<Output> {
    let k = ctx.field(field)?;
    let params = json!({ "field": k, "range": [range.0, range.1], "complete": complete });
    let (c, json) = ctx.cached("kmw", &params, || {
        let c = milnor_witt(&k, range)?;
        match complete {
            Some(p) => complete_kmw(&c, p),
            None => Ok(c),
        }
    })?;
    Ok(Output::chart(json, kmw_zero_line(&c), Axes::stem_weight()))
}

pub struct StemsArgs {
    pub field: Option<String>,
    pub prime: u64,
    pub stem_max: i64,
    pub source: Option<String>,
    pub table_file: Option<PathBuf>,
}

pub fn stems(ctx: &Context, a: &StemsArgs) -> Result<Output> {
    let p = a.prime;
    let table = a.table_file.as_deref().map(SyntheticTable::load).transpose()?;
    let source: std::sync::Arc<dyn SyntheticSource> = match (&table, a.source.as_deref()) {
        (Some(t), None | Some("table")) => std::sync::Arc::new(Table { label: "table-file".into(), table: Some(t.clone()) }),
        (Some(_), Some(other)) => {
            return Err(CoreError::Precondition(format!("--table-file conflicts with --source {other}")))
        }
        (None, Some(name)) => stem_sources().get(name)?,
        (None, None) => motivic_core::stems::tensor::default_source(p)?,
    };
    let field = a.field.as_deref().map(|f| ctx.field(f)).transpose()?;
    let params = json!({
        "field": field,
        "prime": p,
        "stem_max": a.stem_max,
        "source": source.name(),
        "table": table,
    });
    match field {
        None => {
            let (c, json) = ctx.cached("stems", &params, || -> Result<SyntheticChart> {
                synthetic_stems(p, a.stem_max, source.as_ref())
            })?;
            Ok(Output::chart(json, c.chart, Axes::stem_weight()))
        }
        Some(k) => {
            let (c, json) = ctx.cached("stems", &params, || -> Result<BigradedChart> {
                let basis = kmw_basis(&k, p, a.stem_max.max(6))?;
                let syn = synthetic_stems(p, a.stem_max, source.as_ref())?;
                let mut out = shifted_sum(&syn, &basis)?;
                out.label = format!("stems of {} at {p}", k.name);
                Ok(out)
            })?;
            Ok(Output::chart(json, c.clone(), Axes::stem_weight()))
        }
    }
}

pub struct MglArgs {
    pub field: String,
    pub prime: u64,
    pub stems: (i64, i64),
    pub weights: (i64, i64),
    pub filtration: Option<u32>,
}

pub fn mgl(ctx: &Context, a: &MglArgs) -> Result<Output> {
    let k = ctx.field(&a.field)?;
    let w = Window::new(a.stems, a.weights);
    let params = json!({
        "field": k,
        "prime": a.prime,
        "stems": [a.stems.0, a.stems.1],
        "weights": [a.weights.0, a.weights.1],
        "filtration": a.filtration,
    });
    let (c, json) = ctx.cached("mgl", &params, || -> Result<BigradedChart> {
        match a.filtration {
            Some(s) => anss_e1(&k, a.prime, s, &w),
            None => mgl_homotopy(&k, a.prime, &w),
        }
    })?;
    Ok(Output::chart(json, c.clone(), Axes::stem_weight()))
}

pub fn decompose_file(path: &Path) -> Result<Output> {
    let text = read(path)?;
    let raw: Value = serde_json::from_str(&text).map_err(parse_err)?;
    let (value, report) = if raw.get("stages").is_some() {
        let ind = IndFptModule::from_json(&text)?;
        let d = classify_divisible(&ind)?;
        let tp = check_torsion_powers_ind(&ind)?;
        let mut r = describe(&d.profile(), &d.divisible_rank.to_string(), ind.p);
        writeln!(r, "torsion orders are powers of p: {}", tp.holds).unwrap();
        (json!({ "kind": "ind", "decomposition": d, "torsion_powers": tp }), r)
    } else {
        let m = FptModule::from_json(&text)?;
        let d = decompose(&m)?;
        let tp = check_torsion_powers(&m)?;
        let u = check_u_sequences(&m)?;
        let mut r = describe(&d.profile(), "0", m.p);
        writeln!(r, "torsion orders are powers of p: {}", tp.holds).unwrap();
        writeln!(r, "u-sequences exact: {u}").unwrap();
        (json!({ "kind": "finite", "decomposition": d, "torsion_powers": tp, "u_sequences_exact": u }), r)
    };
    Ok(Output { json: to_json(&value), chart: None, report: Some(report), success: true })
}

fn describe(profile: &[(u32, u32)], divisible: &str, p: u64) -> String {
    let mut r = String::new();
    if profile.is_empty() {
        writeln!(r, "no free parts").unwrap();
    }
    for &(e, m) in profile {
        writeln!(r, "(F_{p}[t]/t^{e})^{m}").unwrap();
    }
    writeln!(r, "Prüfer rank: {divisible}").unwrap();
    r
}

pub fn check(ctx: &Context, suite: &str) -> Result<Output> {
    let results = checks::run(suite, &ctx.catalog)?;
    let mut report = String::new();
    for c in &results {
        let status = if c.passed { "PASS" } else { "FAIL" };
        if c.detail.is_empty() {
            writeln!(report, "{status} [{}] {}", c.suite, c.name).unwrap();
        } else {
            writeln!(report, "{status} [{}] {}: {}", c.suite, c.name, c.detail).unwrap();
        }
    }
    let success = results.iter().all(|c| c.passed);
    Ok(Output { json: to_json(&results), chart: None, report: Some(report), success })
}

pub fn catalog(ctx: &Context, name: Option<&str>) -> Result<Output> {
    match name {
        Some(n) => {
            let f = ctx.field(n)?;
            Ok(Output { json: to_json(&f), chart: None, report: None, success: true })
        }
        None => {
            let mut report = String::new();
            for f in &ctx.catalog.fields {
                writeln!(report, "{:<28} {:<22} char {}", f.name, f.variant_name(), f.characteristic()).unwrap();
            }
            Ok(Output { json: ctx.catalog.to_json(), chart: None, report: Some(report), success: true })
        }
    }
}
