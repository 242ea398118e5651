//! SVG rendering of floorplan solutions.
//!
//! Chiplet rectangles with labels, hotspot dots with their margin rings,
//! and an optional traffic overlay connecting chiplet centers with line
//! widths proportional to the pair frequency. Geometry is scaled by a
//! fixed factor so coordinates in the file are placement values times
//! [`SVG_SCALE`].

use crate::error::{Error, Result};
use crate::schema::SolutionDocument;
use crate::traffic::FrequencyMatrix;

/// Pixels per micrometer.
pub const SVG_SCALE: f64 = 0.1;

/// Margin around the board, already in pixels.
const PAD: f64 = 10.0;
/// Widest overlay stroke; widths scale linearly with `f / f_max`.
const MAX_STROKE: f64 = 6.0;

fn fill_for(function: &str) -> &'static str {
    match function {
        "core" => "#7aa6d6",
        "cache" => "#8fce91",
        "accel" => "#e0a667",
        "mem" => "#c5a3d3",
        "io" => "#d6c07a",
        _ => "#bcbcbc",
    }
}

/// Renders a solution document, with an optional frequency overlay.
/// The matrix dimension must match the placement.
pub fn solution_svg(doc: &SolutionDocument, freq: Option<&FrequencyMatrix>) -> Result<String> {
    let n = doc.placement.len();
    if let Some(f) = freq {
        if f.dim() != n {
            return Err(Error::DimensionMismatch { expected: n, found: f.dim() });
        }
    }
    let bw = doc.board.width_um * SVG_SCALE;
    let bh = doc.board.height_um * SVG_SCALE;
    // Flip y so the origin sits bottom-left like the placement's.
    let tx = |x: f64| PAD + x * SVG_SCALE;
    let ty = |y: f64| PAD + bh - y * SVG_SCALE;

    let mut svg = String::new();
    svg.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{:.3}\" height=\"{:.3}\" viewBox=\"0 0 {:.3} {:.3}\">\n",
        bw + 2.0 * PAD,
        bh + 2.0 * PAD,
        bw + 2.0 * PAD,
        bh + 2.0 * PAD
    ));
    // Board outline as a path so rect elements stay chiplets-only.
    svg.push_str(&format!(
        "  <path d=\"M {:.3} {:.3} H {:.3} V {:.3} H {:.3} Z\" fill=\"none\" stroke=\"#333\" stroke-width=\"1\"/>\n",
        tx(0.0),
        ty(doc.board.height_um),
        tx(doc.board.width_um),
        ty(0.0),
        tx(0.0)
    ));

    for p in &doc.placement {
        svg.push_str(&format!(
            "  <rect x=\"{:.3}\" y=\"{:.3}\" width=\"{:.3}\" height=\"{:.3}\" fill=\"{}\" fill-opacity=\"0.8\" stroke=\"#222\" stroke-width=\"0.8\"/>\n",
            tx(p.x_um),
            ty(p.y_um + p.height_eff_um),
            p.width_eff_um * SVG_SCALE,
            p.height_eff_um * SVG_SCALE,
            fill_for(&p.function),
        ));
        svg.push_str(&format!(
            "  <text x=\"{:.3}\" y=\"{:.3}\" font-size=\"9\" text-anchor=\"middle\" fill=\"#111\">{}</text>\n",
            tx(p.x_um + p.width_eff_um / 2.0),
            ty(p.y_um + p.height_eff_um / 2.0),
            xml_escape(&p.name),
        ));
    }

    for h in &doc.bumps.hotspots {
        svg.push_str(&format!(
            "  <circle cx=\"{:.3}\" cy=\"{:.3}\" r=\"2.5\" fill=\"#c33\"/>\n",
            tx(h.x_um),
            ty(h.y_um)
        ));
        if doc.bumps.margin_radius_um > 0.0 {
            svg.push_str(&format!(
                "  <circle cx=\"{:.3}\" cy=\"{:.3}\" r=\"{:.3}\" fill=\"none\" stroke=\"#c33\" stroke-dasharray=\"3 2\" stroke-width=\"0.8\"/>\n",
                tx(h.x_um),
                ty(h.y_um),
                doc.bumps.margin_radius_um * SVG_SCALE
            ));
        }
    }

    if let Some(f) = freq {
        let f_max = (0..n)
            .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
            .map(|(i, j)| f.get(i, j))
            .max()
            .unwrap_or(0);
        if f_max > 0 {
            for i in 0..n {
                for j in (i + 1)..n {
                    let fij = f.get(i, j);
                    if fij == 0 {
                        continue;
                    }
                    let (a, b) = (&doc.placement[i], &doc.placement[j]);
                    let width = MAX_STROKE * fij as f64 / f_max as f64;
                    svg.push_str(&format!(
                        "  <line x1=\"{:.3}\" y1=\"{:.3}\" x2=\"{:.3}\" y2=\"{:.3}\" stroke=\"#06a\" stroke-opacity=\"0.6\" stroke-width=\"{:.3}\"/>\n",
                        tx(a.x_um + a.width_eff_um / 2.0),
                        ty(a.y_um + a.height_eff_um / 2.0),
                        tx(b.x_um + b.width_eff_um / 2.0),
                        ty(b.y_um + b.height_eff_um / 2.0),
                        width
                    ));
                }
            }
        }
    }

    svg.push_str("</svg>\n");
    Ok(svg)
}

fn xml_escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
