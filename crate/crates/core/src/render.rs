//! Schematic SVG of a plan: one bed outline per lay, stacked top to bottom,
//! with templates drawn as abutting blocks along the bed length.
//!
//! One length unit is one SVG user unit; block heights are the lay's layer
//! total in the same units.

use std::fmt::Write;

use crate::error::Result;
use crate::model::{lay_volume, CuttingPlan, Instance};

const MARGIN: i64 = 10;
const LABEL: i64 = 14;

fn fill(figure: usize) -> String {
    // Golden-angle hue steps keep neighbouring figures apart.
    let hue = (figure as f64 * 137.508) % 360.0;
    format!("hsl({hue:.1},55%,65%)")
}

pub fn render_plan_svg(plan: &CuttingPlan, inst: &Instance) -> Result<String> {
    let slot = LABEL + inst.bed_height + MARGIN;
    let width = inst.bed_length + 2 * MARGIN;
    let height = MARGIN + slot * plan.lays.len() as i64;
    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" viewBox="0 0 {width} {height}" font-family="sans-serif" font-size="10">"#
    );
    let _ = writeln!(svg, "<title>{} ({} lays)</title>", escape(&plan.instance), plan.k);

    for (k, lay) in plan.lays.iter().enumerate() {
        let top = MARGIN + slot * k as i64;
        let bed_top = top + LABEL;
        let layers = lay.total_height();
        let ur = lay_volume(lay, inst)? as f64 / inst.bed_volume() as f64 * 100.0;
        let _ = writeln!(svg, r#"<g id="lay{}">"#, k + 1);
        let _ = writeln!(
            svg,
            r#"<text x="{MARGIN}" y="{}">lay {}: heights {:?}, {layers} layers, UR {ur:.2}%</text>"#,
            top + LABEL - 3,
            k + 1,
            lay.heights
        );
        let _ = writeln!(
            svg,
            r##"<rect class="bed" x="{MARGIN}" y="{bed_top}" width="{}" height="{}" fill="none" stroke="#333"/>"##,
            inst.bed_length, inst.bed_height
        );
        let mut x = MARGIN;
        for (i, (&q, &l)) in lay.counts.iter().zip(&inst.lengths).enumerate() {
            if q == 0 {
                continue;
            }
            let w = l * q;
            let _ = writeln!(
                svg,
                r##"<rect class="column" x="{x}" y="{}" width="{w}" height="{layers}" fill="{}" stroke="#555"><title>figure {} x{q}</title></rect>"##,
                bed_top + inst.bed_height - layers,
                fill(i),
                i + 1
            );
            x += w;
        }
        svg.push_str("</g>\n");
    }
    svg.push_str("</svg>\n");
    Ok(svg)
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
