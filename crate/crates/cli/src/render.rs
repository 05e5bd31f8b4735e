//! Text-grid and SVG views of a bigraded chart.
//!
//! Renderers only read the chart; the JSON payload of a command is emitted
//! separately and is never derived from a rendering.

use std::fmt::Write as _;
use std::sync::Arc;

use motivic_core::graded::{AbGroupDesc, BigradedChart, ExtNat};
use motivic_core::registry::Registry;

/// Axis names for the horizontal (`i`) and vertical (`j`) coordinates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Axes {
    pub x: String,
    pub y: String,
}

impl Axes {
    pub fn new(x: &str, y: &str) -> Self {
        Axes { x: x.into(), y: y.into() }
    }

    pub fn bidegree() -> Self {
        Axes::new("i", "j")
    }

    pub fn stem_weight() -> Self {
        Axes::new("stem", "weight")
    }

    pub fn stem_filtration() -> Self {
        Axes::new("stem t-s", "s")
    }
}

pub trait Renderer: Send + Sync {
    fn render(&self, chart: &BigradedChart, axes: &Axes) -> String;
}

pub struct Grid;
pub struct Svg;

pub fn renderers() -> Registry<dyn Renderer> {
    let mut r: Registry<dyn Renderer> = Registry::new();
    r.register("grid", Arc::new(Grid));
    r.register("svg", Arc::new(Svg));
    r
}

fn multiplicity(m: ExtNat) -> String {
    match m {
        ExtNat::Finite(k) => k.to_string(),
        ExtNat::Infinite => "∞".into(),
    }
}

fn prime_power(order: u64) -> String {
    let p = (2..=order).find(|d| order.is_multiple_of(*d)).unwrap_or(order);
    let mut k = 0;
    let mut x = order;
    while x > 1 && x.is_multiple_of(p) {
        x /= p;
        k += 1;
    }
    if k <= 1 {
        p.to_string()
    } else {
        format!("{p}^{k}")
    }
}

/// Cell text: `·` for zero, `ℤ` for a free summand, `p^k` for `ℤ/p^k`,
/// `D` for divisible and `T` for unlisted torsion, joined by `+`;
/// multiplicities are written `m·`.
pub fn shorthand(g: &AbGroupDesc) -> String {
    if g.is_zero() {
        return "·".into();
    }
    let mut parts = Vec::new();
    let push = |parts: &mut Vec<String>, base: String, m: ExtNat| {
        if m == ExtNat::ONE {
            parts.push(base);
        } else {
            parts.push(format!("{}·{base}", multiplicity(m)));
        }
    };
    if !g.free_rank.is_zero() {
        push(&mut parts, "ℤ".into(), g.free_rank);
    }
    for (&o, &m) in &g.torsion {
        push(&mut parts, prime_power(o), m);
    }
    if !g.divisible_rank.is_zero() {
        push(&mut parts, "D".into(), g.divisible_rank);
    }
    if g.unlisted_torsion_outside.is_some() {
        parts.push("T".into());
    }
    parts.join("+")
}

fn extent(chart: &BigradedChart) -> ((i64, i64), (i64, i64)) {
    chart.bounding_box().unwrap_or(((0, 0), (0, 0)))
}

fn width(s: &str) -> usize {
    s.chars().count()
}

fn pad(s: &str, w: usize) -> String {
    format!("{}{s}", " ".repeat(w.saturating_sub(width(s))))
}

impl Renderer for Grid {
    fn render(&self, chart: &BigradedChart, axes: &Axes) -> String {
        let ((i0, i1), (j0, j1)) = extent(chart);
        let corner = format!("{}\\{}", axes.y, axes.x);
        let label_w = (j0..=j1).map(|j| width(&j.to_string())).max().unwrap_or(1).max(width(&corner));
        let cols: Vec<(i64, usize)> = (i0..=i1)
            .map(|i| {
                let w = (j0..=j1).map(|j| width(&shorthand(&chart.get(i, j)))).max().unwrap_or(1);
                (i, w.max(width(&i.to_string())))
            })
            .collect();
        let mut out = String::new();
        if !chart.label.is_empty() {
            writeln!(out, "{}", chart.label).unwrap();
        }
        let mut header = pad(&corner, label_w);
        for &(i, w) in &cols {
            header.push_str("  ");
            header.push_str(&pad(&i.to_string(), w));
        }
        writeln!(out, "{}", header.trim_end()).unwrap();
        for j in (j0..=j1).rev() {
            let mut line = pad(&j.to_string(), label_w);
            for &(i, w) in &cols {
                line.push_str("  ");
                line.push_str(&pad(&shorthand(&chart.get(i, j)), w));
            }
            writeln!(out, "{}", line.trim_end()).unwrap();
        }
        out
    }
}

const CELL: i64 = 40;
const MARGIN: i64 = 60;

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

/// Exponent `k` of `ℤ/p^k`, used to choose the number of rings.
fn exponent(order: u64) -> usize {
    prime_power(order).split_once('^').map_or(1, |(_, k)| k.parse().unwrap_or(1))
}

/// One glyph per summand: squares for free, discs with `k-1` rings for
/// `ℤ/p^k`, diamonds for divisible parts.
fn glyphs(g: &AbGroupDesc) -> Vec<String> {
    let mut out = Vec::new();
    let count = |m: ExtNat| m.finite().map_or(1, |k| k.min(3) as usize);
    for _ in 0..count(g.free_rank) {
        out.push("free".to_string());
    }
    for (&o, &m) in &g.torsion {
        for _ in 0..count(m) {
            out.push(format!("torsion:{}", exponent(o)));
        }
    }
    for _ in 0..count(g.divisible_rank) {
        out.push("divisible".to_string());
    }
    if g.unlisted_torsion_outside.is_some() {
        out.push("divisible".to_string());
    }
    out
}

impl Renderer for Svg {
    fn render(&self, chart: &BigradedChart, axes: &Axes) -> String {
        let ((i0, i1), (j0, j1)) = extent(chart);
        let (nx, ny) = (i1 - i0 + 1, j1 - j0 + 1);
        let (w, h) = (2 * MARGIN + nx * CELL, 2 * MARGIN + ny * CELL);
        let px = |i: i64| MARGIN + (i - i0) * CELL + CELL / 2;
        let py = |j: i64| MARGIN + (j1 - j) * CELL + CELL / 2;
        let mut s = String::new();
        writeln!(s, r##"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"##).unwrap();
        writeln!(s, r##"<title>{}</title>"##, escape(&chart.label)).unwrap();
        writeln!(s, r##"<rect x="0" y="0" width="{w}" height="{h}" fill="#ffffff"/>"##).unwrap();
        writeln!(s, r##"<g class="grid" stroke="#dddddd" stroke-width="1">"##).unwrap();
        for i in i0..=i1 {
            writeln!(s, r##"<line x1="{x}" y1="{}" x2="{x}" y2="{}"/>"##, MARGIN, MARGIN + ny * CELL, x = px(i)).unwrap();
        }
        for j in j0..=j1 {
            writeln!(s, r##"<line x1="{}" y1="{y}" x2="{}" y2="{y}"/>"##, MARGIN, MARGIN + nx * CELL, y = py(j)).unwrap();
        }
        writeln!(s, "</g>").unwrap();
        writeln!(s, r##"<g class="axes" font-family="monospace" font-size="11" fill="#000000">"##).unwrap();
        for i in i0..=i1 {
            writeln!(s, r##"<text x="{}" y="{}" text-anchor="middle">{i}</text>"##, px(i), MARGIN + ny * CELL + 16).unwrap();
        }
        for j in j0..=j1 {
            writeln!(s, r##"<text x="{}" y="{}" text-anchor="end">{j}</text>"##, MARGIN - 8, py(j) + 4).unwrap();
        }
        writeln!(
            s,
            r##"<text class="x-label" x="{}" y="{}" text-anchor="middle">{}</text>"##,
            MARGIN + nx * CELL / 2,
            h - 12,
            escape(&axes.x)
        )
        .unwrap();
        writeln!(
            s,
            r##"<text class="y-label" x="14" y="{}" text-anchor="middle" transform="rotate(-90 14 {})">{}</text>"##,
            MARGIN + ny * CELL / 2,
            MARGIN + ny * CELL / 2,
            escape(&axes.y)
        )
        .unwrap();
        writeln!(s, "</g>").unwrap();
        writeln!(s, r##"<g class="entries" fill="#000000" stroke="#000000">"##).unwrap();
        for (b, g) in chart.iter() {
            let gl = glyphs(g);
            writeln!(
                s,
                r##"<g class="entry" data-i="{}" data-j="{}" data-group="{}">"##,
                b.i,
                b.j,
                escape(&g.pretty())
            )
            .unwrap();
            let n = gl.len() as i64;
            for (k, kind) in gl.iter().enumerate() {
                let cx = px(b.i) + (2 * k as i64 - (n - 1)) * 5;
                let cy = py(b.j);
                match kind.as_str() {
                    "free" => {
                        writeln!(s, r##"<rect x="{}" y="{}" width="8" height="8"/>"##, cx - 4, cy - 4).unwrap();
                    }
                    "divisible" => {
                        writeln!(
                            s,
                            r##"<polygon points="{},{} {},{} {},{} {},{}"/>"##,
                            cx,
                            cy - 5,
                            cx + 5,
                            cy,
                            cx,
                            cy + 5,
                            cx - 5,
                            cy
                        )
                        .unwrap();
                    }
                    t => {
                        let e: i64 = t.trim_start_matches("torsion:").parse().unwrap_or(1);
                        writeln!(s, r##"<circle cx="{cx}" cy="{cy}" r="3"/>"##).unwrap();
                        for ring in 1..e {
                            writeln!(s, r##"<circle cx="{cx}" cy="{cy}" r="{}" fill="none"/>"##, 3 + 2 * ring).unwrap();
                        }
                    }
                }
            }
            writeln!(s, "</g>").unwrap();
        }
        writeln!(s, "</g>").unwrap();
        writeln!(s, "</svg>").unwrap();
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_chart_is_a_dot() {
        let g = Grid.render(&BigradedChart::new("", None), &Axes::bidegree());
        let lines: Vec<&str> = g.lines().collect();
        assert_eq!(lines.len(), 2);
        assert!(lines[1].ends_with('·'));
        assert_eq!(lines[1].chars().filter(|&c| c == '·').count(), 1);
    }

    #[test]
    fn unit_chart_has_one_integer_cell() {
        let g = Grid.render(&BigradedChart::unit(), &Axes::bidegree());
        let lines: Vec<&str> = g.lines().collect();
        assert_eq!(lines, vec!["unit", "j\\i  0", "  0  ℤ"]);
    }

    #[test]
    fn shorthand_forms() {
        assert_eq!(shorthand(&AbGroupDesc::zero()), "·");
        assert_eq!(shorthand(&AbGroupDesc::cyclic(9)), "3^2");
        assert_eq!(shorthand(&AbGroupDesc::cyclic(2).with_torsion(2, 1)), "2·2");
        assert_eq!(shorthand(&AbGroupDesc::free(1).with_torsion(5, 1)), "ℤ+5");
    }

    #[test]
    fn rendering_leaves_chart_untouched() {
        let mut c = BigradedChart::new("c", Some(3));
        c.set(3, 2, AbGroupDesc::cyclic(3));
        c.set(-1, 0, AbGroupDesc::free(2));
        let before = c.to_json();
        let a = Svg.render(&c, &Axes::stem_weight());
        let b = Svg.render(&c, &Axes::stem_weight());
        assert_eq!(a, b);
        assert_eq!(c.to_json(), before);
        assert!(a.contains(r##"data-i="3" data-j="2""##));
        assert!(a.contains(">stem<") && a.contains(">weight<"));
    }
}
