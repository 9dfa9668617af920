//! Sparsity rasters (plain PBM) and SVG drawings of frames with their cycles.

use std::fmt::Write as _;
use std::path::Path;

use nalgebra::DMatrix;

use crate::basis::CycleBasis;
use crate::error::{Error, Result};
use crate::model::{Dimension, StructuralModel};

/// Dark/light cells, one per entry (`block == 1`) or per `block`×`block` tile.
pub fn sparsity_pattern(a: &DMatrix<f64>, block: usize) -> Vec<Vec<bool>> {
    let block = block.max(1);
    let (rows, cols) = (a.nrows().div_ceil(block), a.ncols().div_ceil(block));
    (0..rows)
        .map(|i| {
            (0..cols)
                .map(|j| {
                    let h = block.min(a.nrows() - i * block);
                    let w = block.min(a.ncols() - j * block);
                    a.view((i * block, j * block), (h, w)).iter().any(|&v| v != 0.0)
                })
                .collect()
        })
        .collect()
}

/// Plain (P1) portable bitmap; 1 is a dark pixel.
pub fn pbm(pattern: &[Vec<bool>]) -> String {
    let h = pattern.len();
    let w = pattern.first().map_or(0, Vec::len);
    let mut out = format!("P1\n# flexcycle sparsity format_version=1\n{w} {h}\n");
    for row in pattern {
        let line: Vec<&str> = row.iter().map(|&d| if d { "1" } else { "0" }).collect();
        out.push_str(&line.join(" "));
        out.push('\n');
    }
    out
}

pub fn render_sparsity(a: &DMatrix<f64>, block: usize, path: &Path) -> Result<()> {
    write(path, &pbm(&sparsity_pattern(a, block)))
}

const PALETTE: [&str; 10] = [
    "#d62728", "#1f77b4", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#17becf", "#bcbd22", "#7f7f7f",
];

/// SVG of the frame in its x–y plane (x–z elevation for spatial frames, with
/// the y coordinate drawn as an oblique offset). Supports get a short link to
/// a common ground line; each cycle is drawn dashed and pulled toward its
/// centroid.
pub fn frame_svg(model: &StructuralModel, basis: Option<&CycleBasis>) -> String {
    let project = |n: usize| -> (f64, f64) {
        let c = model.coords(n);
        match model.dimension() {
            Dimension::Planar => (c[0], c[1]),
            Dimension::Spatial => (c[0] + 0.5 * c[1], c[2] + 0.35 * c[1]),
        }
    };
    let pts: Vec<(f64, f64)> = (0..model.nodes().len()).map(project).collect();
    let (mut xmin, mut xmax, mut ymin, mut ymax) = (f64::MAX, f64::MIN, f64::MAX, f64::MIN);
    for &(x, y) in &pts {
        xmin = xmin.min(x);
        xmax = xmax.max(x);
        ymin = ymin.min(y);
        ymax = ymax.max(y);
    }
    let span = (xmax - xmin).max(ymax - ymin).max(1e-9);
    let scale = 600.0 / span;
    let margin = 40.0;
    let ground_drop = 0.08 * span;
    let width = (xmax - xmin) * scale + 2.0 * margin;
    let height = (ymax - ymin + ground_drop) * scale + 2.0 * margin;
    let map = |(x, y): (f64, f64)| ((x - xmin) * scale + margin, (ymax - y) * scale + margin);

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{:.1}" height="{:.1}" viewBox="0 0 {:.1} {:.1}">"#,
        width, height, width, height
    );
    let _ = writeln!(s, "<!-- flexcycle frame format_version=1 -->");
    let _ = writeln!(s, r##"<rect width="100%" height="100%" fill="#ffffff"/>"##);

    let ground_y = (ymax - ymin + ground_drop) * scale + margin;
    let _ = writeln!(s, r##"<g id="supports" stroke="#c9a400" stroke-width="2">"##);
    for sup in model.supports() {
        if let Some(n) = model.node_index(sup.node) {
            let (x, y) = map(pts[n]);
            let _ = writeln!(s, r#"<line x1="{x:.2}" y1="{y:.2}" x2="{x:.2}" y2="{ground_y:.2}"/>"#);
        }
    }
    let _ = writeln!(
        s,
        r#"<line x1="{:.2}" y1="{ground_y:.2}" x2="{:.2}" y2="{ground_y:.2}" stroke-width="3"/>"#,
        margin * 0.5,
        width - margin * 0.5
    );
    let _ = writeln!(s, "</g>");

    let _ = writeln!(s, r##"<g id="members" stroke="#222222">"##);
    for (i, m) in model.members().iter().enumerate() {
        let (a, b) = model.member_ends(i);
        let ((x1, y1), (x2, y2)) = (map(pts[a]), map(pts[b]));
        let w = if m.section == crate::grid::LIGHT { 1.5 } else { 3.0 };
        let _ = writeln!(
            s,
            r#"<line data-member="{}" x1="{x1:.2}" y1="{y1:.2}" x2="{x2:.2}" y2="{y2:.2}" stroke-width="{w}"/>"#,
            m.id
        );
    }
    let _ = writeln!(s, "</g>");

    if let Some(basis) = basis {
        let _ = writeln!(s, r#"<g id="cycles" fill="none" stroke-width="2" stroke-dasharray="6 3">"#);
        for (k, cycle) in basis.cycles().iter().enumerate() {
            // shrink each member toward the cycle centroid so shared members stay visible
            let mids: Vec<(f64, f64)> = cycle
                .members()
                .iter()
                .flat_map(|&m| {
                    let (a, b) = model.member_ends(m);
                    [map(pts[a]), map(pts[b])]
                })
                .collect();
            let cx = mids.iter().map(|p| p.0).sum::<f64>() / mids.len() as f64;
            let cy = mids.iter().map(|p| p.1).sum::<f64>() / mids.len() as f64;
            let inset = |(x, y): (f64, f64)| (cx + 0.85 * (x - cx), cy + 0.85 * (y - cy));
            let colour = PALETTE[k % PALETTE.len()];
            let _ = writeln!(s, r#"<g data-cycle="{k}" stroke="{colour}">"#);
            for &m in cycle.members() {
                let (a, b) = model.member_ends(m);
                let ((x1, y1), (x2, y2)) = (inset(map(pts[a])), inset(map(pts[b])));
                let _ = writeln!(s, r#"<line x1="{x1:.2}" y1="{y1:.2}" x2="{x2:.2}" y2="{y2:.2}"/>"#);
            }
            let _ = writeln!(s, "</g>");
        }
        let _ = writeln!(s, "</g>");
    }
    s.push_str("</svg>\n");
    s
}

pub fn render_frame(model: &StructuralModel, basis: Option<&CycleBasis>, path: &Path) -> Result<()> {
    write(path, &frame_svg(model, basis))
}

fn write(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}
