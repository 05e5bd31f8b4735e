//! Self-check suites run by `motivic check --suite NAME`.

use std::sync::Arc;

use motivic_core::fpt::{check_torsion_powers, check_u_sequences, decompose, satisfies_pn, FptModule, Mat};
use motivic_core::graded::{chow_degree, AbGroupDesc, Chow, Coefficients, ExtNat, Fd, TruncationMode, WeightFunction};
use motivic_core::hopf::{build_algebroid, ext_chart, ext_chart_with, AlgebroidKind, CobarComplex, ExtOptions};
use motivic_core::milnor::{complete_kmw, milnor_witt, Catalog};
use motivic_core::registry::Registry;
use motivic_core::stems::synthetic::{Computed, Table};
use motivic_core::stems::{completed_zero_line, mgl_homotopy, milnor_witt_row, synthetic_stems, tensor_formula, Window};
use motivic_core::Result;
use serde::Serialize;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckResult {
    pub suite: String,
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

pub trait CheckSuite: Send + Sync {
    fn description(&self) -> &'static str;
    fn run(&self, catalog: &Catalog) -> Vec<(String, std::result::Result<(), String>)>;
}

fn outcome(ok: bool, detail: impl FnOnce() -> String) -> std::result::Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(detail())
    }
}

fn flatten(r: Result<std::result::Result<(), String>>) -> std::result::Result<(), String> {
    r.unwrap_or_else(|e| Err(e.to_string()))
}

struct Algebroids;
struct Cobar;
struct ExtTables;
struct Weights;
struct Kmw;
struct Modules;
struct Stems;

const KINDS: [AlgebroidKind; 4] =
    [AlgebroidKind::Universal, AlgebroidKind::PTypical(2), AlgebroidKind::PTypical(3), AlgebroidKind::PTypical(5)];

impl CheckSuite for Algebroids {
    fn description(&self) -> &'static str {
        "Hopf algebroid axioms on generators"
    }

    fn run(&self, _: &Catalog) -> Vec<(String, std::result::Result<(), String>)> {
        KINDS
            .iter()
            .map(|&kind| (format!("{kind} to degree 6"), flatten(build_algebroid(kind, 6).and_then(|h| h.verify()).map(Ok))))
            .collect()
    }
}

impl CheckSuite for Cobar {
    fn description(&self) -> &'static str {
        "d∘d = 0 on cobar slices"
    }

    fn run(&self, _: &Catalog) -> Vec<(String, std::result::Result<(), String>)> {
        let mut out = Vec::new();
        for (kind, bound) in [(AlgebroidKind::Universal, 4), (AlgebroidKind::PTypical(2), 6), (AlgebroidKind::PTypical(3), 8)] {
            for normalized in [true, false] {
                let r = build_algebroid(kind, bound).and_then(|h| {
                    let c = CobarComplex::new(&h, 3, 2 * bound, normalized)?;
                    for t in (0..=2 * bound).step_by(2) {
                        let sl = c.slice(t)?;
                        for s in 1..sl.differentials.len() {
                            if !sl.differentials[s].compose(&sl.differentials[s - 1]).is_zero() {
                                return Ok(Err(format!("nonzero at s={s}, t={t}")));
                            }
                        }
                    }
                    Ok(Ok(()))
                });
                let form = if normalized { "normalized" } else { "unnormalized" };
                out.push((format!("{kind} {form}, s ≤ 3, t ≤ {}", 2 * bound), flatten(r)));
            }
        }
        out
    }
}

/// Ext in the stem range of the bundled tables, as `(stem, s, order)` with
/// order 0 for the free class on the zero line.
fn expected_ext(p: u64) -> Vec<(i64, i64, u64)> {
    match p {
        3 => vec![(0, 0, 0), (3, 1, 3), (7, 1, 3), (10, 2, 3), (11, 1, 9)],
        5 => vec![(0, 0, 0), (7, 1, 5), (15, 1, 5)],
        _ => Vec::new(),
    }
}

fn ext_matches(p: u64, stem_max: i64, s_max: u32, normalized: bool) -> Result<std::result::Result<(), String>> {
    let t_max = (stem_max + s_max as i64) as u32;
    let h = build_algebroid(AlgebroidKind::PTypical(p), t_max.div_ceil(2))?;
    let e = ext_chart_with(&h, p, 10, s_max, t_max, ExtOptions { normalized, parallel: true })?;
    let got: Vec<(i64, i64, AbGroupDesc)> = e.by_stem().into_iter().filter(|(n, _, _)| *n <= stem_max).collect();
    let want = expected_ext(p);
    if got.len() != want.len() {
        return Ok(Err(format!("{} nonzero entries, expected {}", got.len(), want.len())));
    }
    for (n, s, o) in want {
        let g = e.get(s as u32, (n + s) as u32);
        let ok = if o == 0 {
            g.free_rank == ExtNat::ONE && g.torsion.is_empty()
        } else {
            g.same_group(&AbGroupDesc::cyclic(o))
        };
        if !ok {
            return Ok(Err(format!("({n},{s}) is {}", g.pretty())));
        }
    }
    Ok(Ok(()))
}

impl CheckSuite for ExtTables {
    fn description(&self) -> &'static str {
        "Adams–Novikov Ext against classical low stems"
    }

    fn run(&self, _: &Catalog) -> Vec<(String, std::result::Result<(), String>)> {
        vec![
            ("p=3, stems ≤ 12, s ≤ 6".into(), flatten(ext_matches(3, 12, 6, true))),
            ("p=3, stems ≤ 12, s ≤ 3, unnormalized".into(), flatten(ext_matches(3, 12, 3, false))),
            ("p=5, stems ≤ 16, s ≤ 3".into(), flatten(ext_matches(5, 16, 3, true))),
            (
                "p=3 precision 4 vs 10".into(),
                flatten(build_algebroid(AlgebroidKind::PTypical(3), 9).and_then(|h| {
                    let a = ext_chart(&h, 3, 4, 4, 18)?;
                    let b = ext_chart(&h, 3, 10, 4, 18)?;
                    let same = a.chart.same_groups(&b.chart) && b.chart.same_groups(&a.chart);
                    Ok(outcome(same, || "charts differ".into()))
                })),
            ),
        ]
    }
}

impl CheckSuite for Weights {
    fn description(&self) -> &'static str {
        "weight functions, Chow degree and truncations"
    }

    fn run(&self, catalog: &Catalog) -> Vec<(String, std::result::Result<(), String>)> {
        let mut out = Vec::new();
        for d in 1..=10 {
            let r = Fd::new(d).and_then(|f| f.superadditivity_violation(50)).map(|v| {
                outcome(v.is_none(), || format!("violated at {:?}", v.unwrap()))
            });
            out.push((format!("f_{d} superadditive on |a|,|b| ≤ 50"), flatten(r)));
        }
        let shift_ok = (-30..=30).all(|i| (-30..=30).all(|j| chow_degree(i + 2, j + 1) == chow_degree(i, j)));
        out.push(("Chow degree invariant under (2,1)".into(), outcome(shift_ok, || "shift changed the degree".into())));
        for k in &catalog.fields {
            let Ok(c) = mgl_homotopy(k, 3, &Window::new((-6, 12), (-6, 6))) else { continue };
            let r = (|| -> Result<std::result::Result<(), String>> {
                if c.truncate(&Chow, 0, TruncationMode::Ge)? != c {
                    return Ok(Err("negative Chow degree present".into()));
                }
                for d in [0i64, 1, 3] {
                    let f: Box<dyn WeightFunction> = if d == 0 { Box::new(Chow) } else { Box::new(Fd::new(d)?) };
                    for s in [-2, 0, 3] {
                        let ge = c.truncate(f.as_ref(), s, TruncationMode::Ge)?;
                        let lt = c.truncate(f.as_ref(), s, TruncationMode::Lt)?;
                        if ge.truncate(f.as_ref(), s, TruncationMode::Ge)? != ge || !ge.direct_sum(&lt)?.same_groups(&c) {
                            return Ok(Err(format!("{} at threshold {s}", f.name())));
                        }
                    }
                }
                Ok(Ok(()))
            })();
            out.push((format!("MGL of {} at 3: Chow ≥ 0, truncations split", k.name), flatten(r)));
        }
        out
    }
}

impl CheckSuite for Kmw {
    fn description(&self) -> &'static str {
        "Milnor–Witt K-theory of catalog fields"
    }

    fn run(&self, catalog: &Catalog) -> Vec<(String, std::result::Result<(), String>)> {
        let mut out = Vec::new();
        for k in &catalog.fields {
            for p in [2u64, 3, 5] {
                if k.characteristic() == p {
                    continue;
                }
                let Ok(c) = milnor_witt(k, (-6, 6)) else { continue };
                let r = (|| -> Result<std::result::Result<(), String>> {
                    let Ok(once) = complete_kmw(&c, p) else { return Ok(Ok(())) };
                    if complete_kmw(&once, p)? != once {
                        return Ok(Err("completion is not idempotent".into()));
                    }
                    if k.is_tate_orientable(p) {
                        let t = tensor_formula(k, p, 12)?;
                        let z = completed_zero_line(k, p, (-5, 5))?;
                        if let Some(m) = (-5..=5).find(|&m| !t.get(m, m).same_group(&z.get(m, m))) {
                            return Ok(Err(format!("diagonal differs at {m}")));
                        }
                    }
                    Ok(Ok(()))
                })();
                out.push((format!("{} at {p}", k.name), flatten(r)));
            }
        }
        out
    }
}

/// Jordan type from ranks of powers, independent of the splitting code.
fn jordan_type(m: &FptModule) -> Vec<(u32, u32)> {
    let n = m.dim;
    let ranks: Vec<usize> = (0..=n as u64 + 1).map(|e| m.t_power(e).rank()).collect();
    (1..=n)
        .filter_map(|k| {
            let c = ranks[k - 1] + ranks[k + 1] - 2 * ranks[k];
            (c > 0).then_some((k as u32, c as u32))
        })
        .collect()
}

fn each_nilpotent(p: u64, n: usize, mut f: impl FnMut(FptModule)) {
    let cells = (n * n) as u32;
    for idx in 0..p.pow(cells) {
        let rows: Vec<Vec<u64>> =
            (0..n).map(|i| (0..n).map(|j| idx / p.pow((i * n + j) as u32) % p).collect()).collect();
        if let Ok(m) = FptModule::new(Mat::from_rows(p, &rows, n)) {
            f(m);
        }
    }
}

impl CheckSuite for Modules {
    fn description(&self) -> &'static str {
        "𝔽_p[[t]]-module decompositions on all small modules"
    }

    fn run(&self, _: &Catalog) -> Vec<(String, std::result::Result<(), String>)> {
        let mut out = Vec::new();
        for p in [2u64, 3] {
            let mut failure: Option<String> = None;
            let mut count = 0;
            for n in 0..=3 {
                each_nilpotent(p, n, |m| {
                    if failure.is_some() {
                        return;
                    }
                    count += 1;
                    let ty = jordan_type(&m);
                    let r = (|| -> Result<Option<String>> {
                        if decompose(&m)?.profile() != ty {
                            return Ok(Some("profile differs from Jordan type".into()));
                        }
                        for e in 0..=n as u32 {
                            if ty.iter().any(|&(s, _)| s > e + 1) {
                                continue;
                            }
                            let free = ty.iter().all(|&(s, _)| s == e + 1);
                            if satisfies_pn(&m, e).holds != free {
                                return Ok(Some(format!("P_{e} disagrees with freeness")));
                            }
                        }
                        if check_u_sequences(&m)? && !check_torsion_powers(&m)?.holds {
                            return Ok(Some("u-sequences exact but torsion powers fail".into()));
                        }
                        Ok(None)
                    })();
                    match r {
                        Ok(None) => {}
                        Ok(Some(msg)) => failure = Some(format!("{:?}: {msg}", m.t.to_rows())),
                        Err(e) => failure = Some(format!("{:?}: {e}", m.t.to_rows())),
                    }
                });
            }
            out.push((format!("p={p}, all {count} modules of dimension ≤ 3"), failure.map_or(Ok(()), Err)));
        }
        out
    }
}

impl CheckSuite for Stems {
    fn description(&self) -> &'static str {
        "synthetic stems: tables against the engine, stem-0 rows"
    }

    fn run(&self, _: &Catalog) -> Vec<(String, std::result::Result<(), String>)> {
        let table = Table { label: "table".into(), table: None };
        let mut out = vec![(
            "p=3 table agrees with Ext through stem 20".to_string(),
            flatten((|| {
                let a = synthetic_stems(3, 20, &Computed)?;
                let b = synthetic_stems(3, 20, &table)?;
                Ok(outcome(a.chart.same_groups(&b.chart) && b.chart.same_groups(&a.chart), || "charts differ".into()))
            })()),
        )];
        out.push((
            "p=2 stem-0 row is ℤ_2[η]/2η".into(),
            flatten(synthetic_stems(2, 5, &table).map(|c| {
                let row = milnor_witt_row(&c.chart, 0);
                let unit = AbGroupDesc::free_over(ExtNat::ONE, Coefficients::Complete(2));
                let ok = row.get(&0).is_some_and(|g| g.same_group(&unit))
                    && (1..=5).all(|k| row.get(&k).is_some_and(|g| g.same_group(&AbGroupDesc::cyclic(2))));
                outcome(ok, || format!("row is {row:?}"))
            })),
        ));
        for p in [3u64, 5] {
            out.push((
                format!("p={p} stem-0 row is ℤ_{p}"),
                flatten(synthetic_stems(p, 12, &Computed).map(|c| {
                    let row = milnor_witt_row(&c.chart, 0);
                    let unit = AbGroupDesc::free_over(ExtNat::ONE, Coefficients::Complete(p));
                    outcome(row.len() == 1 && row.get(&0).is_some_and(|g| g.same_group(&unit)), || format!("row is {row:?}"))
                })),
            ));
        }
        out
    }
}

pub fn suites() -> Registry<dyn CheckSuite> {
    let mut r: Registry<dyn CheckSuite> = Registry::new();
    r.register("algebroid", Arc::new(Algebroids));
    r.register("cobar", Arc::new(Cobar));
    r.register("ext", Arc::new(ExtTables));
    r.register("weights", Arc::new(Weights));
    r.register("kmw", Arc::new(Kmw));
    r.register("fpt", Arc::new(Modules));
    r.register("stems", Arc::new(Stems));
    r
}

/// Runs one suite, or every suite for `all`.
pub fn run(name: &str, catalog: &Catalog) -> Result<Vec<CheckResult>> {
    let reg = suites();
    let names: Vec<String> =
        if name == "all" { reg.names().into_iter().map(String::from).collect() } else { vec![name.to_string()] };
    let mut out = Vec::new();
    for n in names {
        let suite = reg.get(&n)?;
        for (check, r) in suite.run(catalog) {
            out.push(CheckResult {
                suite: n.clone(),
                name: check,
                passed: r.is_ok(),
                detail: r.err().unwrap_or_default(),
            });
        }
    }
    Ok(out)
}
