//! SVG renderings of CX layers and of the disentangled final form.
//! 32 px per lattice unit, origin top-left, y downward.

use std::fmt::Write;

use toricc_core::{Coord, FinalFormSummary, Lattice, Layer, Pauli, TypeForm};

pub const UNIT: i64 = 32;
const MARGIN: i64 = 2 * UNIT;

pub const PALETTE: [&str; 12] = [
    "#e6194b", "#3cb44b", "#4363d8", "#f58231", "#911eb4", "#42d4f4", "#f032e6", "#9a6324",
    "#808000", "#000075", "#469990", "#800000",
];

pub const X_COLOR: &str = "#d62728";
pub const Z_COLOR: &str = "#1f77b4";

fn px(v: i64) -> i64 {
    MARGIN + UNIT * v
}

fn header(lat: &Lattice, extra_height: i64) -> String {
    let w = 2 * MARGIN + UNIT * (lat.side() as i64 - 1);
    format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w}\" height=\"{h}\" viewBox=\"0 0 {w} {h}\">\n",
        h = w + extra_height
    )
}

fn dots(out: &mut String, lat: &Lattice) {
    for q in lat.qubit_sites() {
        writeln!(
            out,
            "<circle class=\"qubit\" cx=\"{}\" cy=\"{}\" r=\"3\" fill=\"#444\"/>",
            px(q.x as i64),
            px(q.y as i64)
        )
        .unwrap();
    }
}

/// Line segments from `a` to `b` along the shortest torus displacement. A
/// segment that leaves the fundamental domain is split into two pieces, one
/// leaving from `a` and one arriving at `b`.
fn segments(lat: &Lattice, a: Coord, b: Coord) -> Vec<[i64; 4]> {
    let (dx, dy) = lat.displacement(a, b);
    let (ax, ay) = (a.x as i64, a.y as i64);
    let (bx, by) = (b.x as i64, b.y as i64);
    if ax + dx == bx && ay + dy == by {
        vec![[ax, ay, bx, by]]
    } else {
        vec![[ax, ay, ax + dx, ay + dy], [bx - dx, by - dy, bx, by]]
    }
}

fn line(out: &mut String, [x1, y1, x2, y2]: [i64; 4], attrs: &str) {
    writeln!(
        out,
        "<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" {attrs}/>",
        px(x1),
        px(y1),
        px(x2),
        px(y2)
    )
    .unwrap();
}

/// One arrow per gate, tail at the control and head at the target, colored
/// by layer index. Hadamard sites, when given, are drawn as open squares.
pub fn render_layers_svg(lat: &Lattice, layers: &[Layer], h_sites: &[Coord]) -> String {
    let mut out = header(lat, 0);
    out.push_str("<defs>\n");
    for (k, color) in PALETTE.iter().enumerate() {
        writeln!(
            out,
            "<marker id=\"head{k}\" viewBox=\"0 0 10 10\" refX=\"9\" refY=\"5\" markerWidth=\"6\" markerHeight=\"6\" orient=\"auto\"><path d=\"M0,0 L10,5 L0,10 z\" fill=\"{color}\"/></marker>"
        )
        .unwrap();
    }
    out.push_str("</defs>\n");
    dots(&mut out, lat);
    for &s in h_sites {
        writeln!(
            out,
            "<rect class=\"hadamard\" x=\"{}\" y=\"{}\" width=\"12\" height=\"12\" fill=\"none\" stroke=\"#000\"/>",
            px(s.x as i64) - 6,
            px(s.y as i64) - 6
        )
        .unwrap();
    }
    for (k, layer) in layers.iter().enumerate() {
        let hue = k % PALETTE.len();
        let color = PALETTE[hue];
        for g in layer.iter() {
            writeln!(out, "<g class=\"gate\" data-layer=\"{k}\">").unwrap();
            let segs = segments(lat, g.control, g.target);
            let last = segs.len() - 1;
            for (i, s) in segs.into_iter().enumerate() {
                let head = if i == last {
                    format!(" marker-end=\"url(#head{hue})\"")
                } else {
                    String::new()
                };
                line(
                    &mut out,
                    s,
                    &format!("stroke=\"{color}\" stroke-width=\"2\"{head}"),
                );
            }
            out.push_str("</g>\n");
        }
    }
    out.push_str("</svg>\n");
    out
}

fn glyph(out: &mut String, p: Pauli, c: Coord) {
    let (x, y) = (px(c.x as i64), px(c.y as i64));
    match p {
        Pauli::Z => writeln!(
            out,
            "<circle cx=\"{x}\" cy=\"{y}\" r=\"7\" fill=\"none\" stroke=\"{Z_COLOR}\" stroke-width=\"2\"/>"
        )
        .unwrap(),
        _ => writeln!(
            out,
            "<path d=\"M{} {} L{} {} M{} {} L{} {}\" stroke=\"{X_COLOR}\" stroke-width=\"2\"/>",
            x - 6,
            y - 6,
            x + 6,
            y + 6,
            x - 6,
            y + 6,
            x + 6,
            y - 6
        )
        .unwrap(),
    }
}

fn type_groups(out: &mut String, lat: &Lattice, t: &TypeForm) {
    let p = t.pauli.symbol();
    let color = if t.pauli == Pauli::Z {
        Z_COLOR
    } else {
        X_COLOR
    };
    for ch in &t.chains {
        writeln!(
            out,
            "<g class=\"chain\" data-pauli=\"{p}\" data-length=\"{}\">",
            ch.len()
        )
        .unwrap();
        writeln!(out, "<g class=\"generator field\" data-pauli=\"{p}\">").unwrap();
        glyph(out, t.pauli, ch.field());
        out.push_str("</g>\n");
        for (a, b) in ch.couplings() {
            writeln!(out, "<g class=\"generator coupling\" data-pauli=\"{p}\">").unwrap();
            for s in segments(lat, a, b) {
                line(out, s, &format!("stroke=\"{color}\" stroke-width=\"3\""));
            }
            glyph(out, t.pauli, a);
            glyph(out, t.pauli, b);
            out.push_str("</g>\n");
        }
        out.push_str("</g>\n");
    }
    for &s in &t.singles {
        writeln!(out, "<g class=\"generator single\" data-pauli=\"{p}\">").unwrap();
        glyph(out, t.pauli, s);
        out.push_str("</g>\n");
    }
}

/// Draws every kept generator of both types with the trivial sites ringed.
pub fn render_final_form_svg(lat: &Lattice, summary: &FinalFormSummary) -> String {
    let mut out = header(lat, UNIT);
    dots(&mut out, lat);
    for t in summary.trivial_sites {
        writeln!(
            out,
            "<circle class=\"trivial\" cx=\"{}\" cy=\"{}\" r=\"11\" fill=\"#ffd700\" fill-opacity=\"0.5\" stroke=\"#000\"/>",
            px(t.x as i64),
            px(t.y as i64)
        )
        .unwrap();
    }
    type_groups(&mut out, lat, &summary.x);
    type_groups(&mut out, lat, &summary.z);
    let side = lat.side() as i64;
    writeln!(
        out,
        "<text class=\"legend\" x=\"{}\" y=\"{}\" font-family=\"sans-serif\" font-size=\"14\">red = X, blue = Z</text>",
        px(0),
        px(side - 1) + MARGIN
    )
    .unwrap();
    out.push_str("</svg>\n");
    out
}
