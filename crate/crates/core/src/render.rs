//! Deterministic SVG drawings of the diagram sets of an intermediate cube.

use std::fmt::Write as _;

use crate::compositions::Composition;
use crate::cubes::build_bifactorization;
use crate::error::{Error, Result};
use crate::fiber::{collapse_all, collapse_order, initial_cube_of};
use crate::perm::Perm;

/// Layout constants shared by all drawings.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SvgLayout {
    /// Horizontal distance between strand anchors.
    pub strand_gap: f64,
    /// Padding between a box edge and its outer anchors.
    pub box_pad: f64,
    /// Height of a composition box.
    pub box_height: f64,
    /// Vertical extent of the strands.
    pub strand_height: f64,
    /// Horizontal gap between diagrams.
    pub diagram_gap: f64,
    /// Outer margin.
    pub margin: f64,
    /// Height reserved for the caption under each diagram.
    pub caption_height: f64,
    /// Caption font size.
    pub font_size: f64,
    /// Stroke width of strands and boxes.
    pub stroke: f64,
}

impl Default for SvgLayout {
    fn default() -> Self {
        SvgLayout {
            strand_gap: 24.0,
            box_pad: 8.0,
            box_height: 10.0,
            strand_height: 64.0,
            diagram_gap: 32.0,
            margin: 16.0,
            caption_height: 20.0,
            font_size: 12.0,
            stroke: 1.5,
        }
    }
}

/// A straight strand from a bottom anchor to a top anchor.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Segment {
    /// Bottom anchor `x`.
    pub x0: f64,
    /// Bottom anchor `y`.
    pub y0: f64,
    /// Top anchor `x`.
    pub x1: f64,
    /// Top anchor `y`.
    pub y1: f64,
}

impl SvgLayout {
    fn diagram_width(&self, n: usize) -> f64 {
        2.0 * self.box_pad + (n.saturating_sub(1)) as f64 * self.strand_gap
    }

    fn anchor(&self, left: f64, i: usize) -> f64 {
        left + self.box_pad + i as f64 * self.strand_gap
    }

    fn top_y(&self) -> f64 {
        self.margin + self.box_height
    }

    fn bottom_y(&self) -> f64 {
        self.top_y() + self.strand_height
    }

    /// The strands of `w`, drawn from position `i` at the bottom to `w(i)` at the top.
    pub fn segments(&self, w: &Perm, left: f64) -> Vec<Segment> {
        (0..w.degree())
            .map(|i| Segment { x0: self.anchor(left, i), y0: self.bottom_y(), x1: self.anchor(left, w.apply(i)), y1: self.top_y() })
            .collect()
    }
}

/// Number of pairwise intersections among straight strands.
pub fn crossing_count(segments: &[Segment]) -> usize {
    let mut count = 0;
    for (k, s) in segments.iter().enumerate() {
        for t in &segments[k + 1..] {
            if (s.x0 - t.x0) * (s.x1 - t.x1) < 0.0 {
                count += 1;
            }
        }
    }
    count
}

fn boxes(out: &mut String, layout: &SvgLayout, left: f64, y: f64, blocks: &Composition) {
    let mut start = 0;
    for &p in blocks.parts() {
        let x = layout.anchor(left, start) - layout.box_pad / 2.0;
        let w = (p - 1) as f64 * layout.strand_gap + layout.box_pad;
        let _ = writeln!(
            out,
            r#"  <rect x="{x:.1}" y="{y:.1}" width="{w:.1}" height="{:.1}" fill="none" stroke="black" stroke-width="{:.1}"/>"#,
            layout.box_height, layout.stroke
        );
        start += p;
    }
}

/// Draws diagrams side by side with the source blocks at the bottom and the target blocks at the top.
pub fn render_svg(diagrams: &[Perm], bottom: &Composition, top: &Composition, title: &str, layout: &SvgLayout) -> String {
    let n = bottom.n_total();
    let dw = layout.diagram_width(n);
    let count = diagrams.len().max(1);
    let width = 2.0 * layout.margin + count as f64 * dw + (count - 1) as f64 * layout.diagram_gap;
    let height = layout.bottom_y() + layout.box_height + layout.caption_height + layout.margin;
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width:.1}" height="{height:.1}" viewBox="0 0 {width:.1} {height:.1}">"#
    );
    let _ = writeln!(out, "  <title>{title}</title>");
    for (k, w) in diagrams.iter().enumerate() {
        let left = layout.margin + k as f64 * (dw + layout.diagram_gap);
        let _ = writeln!(out, r#" <g class="diagram" data-perm="{w}">"#);
        boxes(&mut out, layout, left, layout.margin, top);
        boxes(&mut out, layout, left, layout.bottom_y(), bottom);
        for s in layout.segments(w, left) {
            let _ = writeln!(
                out,
                r#"  <line x1="{:.1}" y1="{:.1}" x2="{:.1}" y2="{:.1}" stroke="black" stroke-width="{:.1}"/>"#,
                s.x0, s.y0, s.x1, s.y1, layout.stroke
            );
        }
        let cx = left + dw / 2.0;
        let cy = layout.bottom_y() + layout.box_height + layout.caption_height * 0.75;
        let _ = writeln!(
            out,
            r#"  <text x="{cx:.1}" y="{cy:.1}" font-family="monospace" font-size="{:.1}" text-anchor="middle">{w}</text>"#,
            layout.font_size
        );
        let _ = writeln!(out, " </g>");
    }
    out.push_str("</svg>\n");
    out
}

/// One drawn vertex of an intermediate cube.
#[derive(Clone, Debug, PartialEq)]
pub struct RenderedVertex {
    /// Suggested file name.
    pub file_name: String,
    /// Index bits of the vertex.
    pub index_bits: String,
    /// Number of diagrams drawn.
    pub diagrams: usize,
    /// The SVG text.
    pub svg: String,
}

/// Draws every vertex of the intermediate cube with `level` remaining axes.
pub fn render_level(source: &Composition, target: &Composition, level: usize, layout: &SvgLayout) -> Result<Vec<RenderedVertex>> {
    let cube = build_bifactorization(source, target)?;
    let max = cube.dimension() - 1;
    if level > max {
        return Err(Error::LevelOutOfRange { level, max });
    }
    let order = collapse_order(&cube);
    let stages = collapse_all(initial_cube_of(&cube)?, &order[..max - level])?;
    let stage = stages.last().expect("nonempty");
    let dash = |c: &Composition| c.parts().iter().map(|p| p.to_string()).collect::<Vec<_>>().join("-");
    let mut out = Vec::new();
    for x in crate::cubes::colex_indices(level) {
        let bits: String = x.iter().map(|&b| if b { '1' } else { '0' }).collect();
        let perms: Vec<Perm> = stage.sets[&x].perms().cloned().collect();
        let axes: Vec<String> = stage.axes.iter().map(|a| a.to_string()).collect();
        let title = format!("{source} {target} level {level} ({}) = {bits}", axes.join(","));
        let suffix = if bits.is_empty() { String::new() } else { format!("_{bits}") };
        out.push(RenderedVertex {
            file_name: format!("{}_{}_L{level}{suffix}.svg", dash(source), dash(target)),
            index_bits: bits,
            diagrams: perms.len(),
            svg: render_svg(&perms, source, target, &title, layout),
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn comp(s: &str) -> Composition {
        s.parse().unwrap()
    }

    #[test]
    fn level_one_has_two_vertices_of_three() {
        let files = render_level(&comp("2,3"), &comp("2,3"), 1, &SvgLayout::default()).unwrap();
        assert_eq!(files.iter().map(|f| f.diagrams).collect::<Vec<_>>(), vec![3, 3]);
        assert!(files.iter().all(|f| f.svg.matches("class=\"diagram\"").count() == 3));
    }

    #[test]
    fn bottom_layer_identity_vertex() {
        let files = render_level(&comp("2,3"), &comp("2,3"), 3, &SvgLayout::default()).unwrap();
        let v = files.iter().find(|f| f.index_bits == "001").unwrap();
        assert_eq!(v.diagrams, 1);
        assert!(v.svg.contains(">12345</text>"));
    }

    #[test]
    fn crossings_equal_inversions() {
        let layout = SvgLayout::default();
        assert_eq!(crossing_count(&layout.segments(&Perm::identity(5), 0.0)), 0);
        let w = Perm::parse_digits("34125").unwrap();
        assert_eq!(crossing_count(&layout.segments(&w, 0.0)), w.length());
    }

    #[test]
    fn output_is_deterministic() {
        let a = render_level(&comp("1,2"), &comp("2,1"), 0, &SvgLayout::default()).unwrap();
        let b = render_level(&comp("1,2"), &comp("2,1"), 0, &SvgLayout::default()).unwrap();
        assert_eq!(a, b);
        assert!(render_level(&comp("1,2"), &comp("2,1"), 2, &SvgLayout::default()).is_err());
    }
}
