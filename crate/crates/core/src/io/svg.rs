//! SVG 1.1 pictures of a mesh, optionally shaded by a vertex field.
//!
//! The picture is fitted to the bounding box of the nodes plus a margin of
//! 2% of its larger side, scaled so that side is 1000 user units, with `y`
//! pointing up. Strokes are 0.2% of the box diagonal. Each element becomes
//! one `<polygon>`; with a field, its fill is the mean of the element's
//! vertex values mapped linearly from `[min, max]` onto a dark blue to
//! yellow ramp.

use std::fmt::Write as _;
use std::path::Path;

use super::{write, IoError};
use crate::mesh::Mesh;

const CANVAS: f64 = 1000.0;
const MARGIN: f64 = 0.02;
const STROKE: f64 = 0.002;
const LOW: [f64; 3] = [49.0, 54.0, 149.0];
const HIGH: [f64; 3] = [253.0, 231.0, 37.0];
const PLAIN_FILL: &str = "#f2f2f2";

fn ramp(t: f64) -> String {
    let c: Vec<u8> = (0..3).map(|k| (LOW[k] + t * (HIGH[k] - LOW[k])).round() as u8).collect();
    format!("#{:02x}{:02x}{:02x}", c[0], c[1], c[2])
}

/// The SVG document as a string.
pub fn svg_document(mesh: &Mesh, field: Option<&[f64]>) -> Result<String, IoError> {
    if let Some(values) = field {
        if values.len() != mesh.num_nodes() {
            return Err(IoError::FieldLength { expected: mesh.num_nodes(), found: values.len() });
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(IoError::NonFinite(i));
        }
    }
    let (mut x0, mut y0, mut x1, mut y1) = (f64::INFINITY, f64::INFINITY, f64::NEG_INFINITY, f64::NEG_INFINITY);
    for p in &mesh.nodes {
        x0 = x0.min(p.x);
        y0 = y0.min(p.y);
        x1 = x1.max(p.x);
        y1 = y1.max(p.y);
    }
    let side = if mesh.nodes.is_empty() { 1.0 } else { (x1 - x0).max(y1 - y0) };
    let side = if side > 0.0 { side } else { 1.0 };
    let margin = MARGIN * side;
    let scale = CANVAS / side;
    let (width, height) = if mesh.nodes.is_empty() {
        (CANVAS, CANVAS)
    } else {
        ((x1 - x0 + 2.0 * margin) * scale, (y1 - y0 + 2.0 * margin) * scale)
    };
    let stroke = STROKE * (x1 - x0).hypot(y1 - y0).max(0.0) * scale;
    let stroke = if stroke > 0.0 { stroke } else { STROKE * CANVAS };

    let (lo, hi) = field
        .map(|v| v.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &x| (a.min(x), b.max(x))))
        .unwrap_or((0.0, 0.0));

    let mut out = String::new();
    writeln!(out, r#"<?xml version="1.0" encoding="UTF-8"?>"#).unwrap();
    writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{width:.3}" height="{height:.3}" viewBox="0 0 {width:.3} {height:.3}">"#
    )
    .unwrap();
    writeln!(out, r##"<g stroke="#202020" stroke-width="{stroke:.3}" stroke-linejoin="round">"##).unwrap();
    for elem in &mesh.elements {
        let pts: Vec<String> = elem
            .iter()
            .map(|&n| {
                let p = mesh.nodes[n];
                format!("{:.3},{:.3}", (p.x - x0 + margin) * scale, (y1 + margin - p.y) * scale)
            })
            .collect();
        let fill = match field {
            Some(values) => {
                let mean = elem.iter().map(|&n| values[n]).sum::<f64>() / elem.len() as f64;
                let t = if hi > lo { ((mean - lo) / (hi - lo)).clamp(0.0, 1.0) } else { 0.5 };
                ramp(t)
            }
            None => PLAIN_FILL.to_string(),
        };
        writeln!(out, r#"<polygon points="{}" fill="{fill}"/>"#, pts.join(" ")).unwrap();
    }
    out.push_str("</g>\n</svg>\n");
    Ok(out)
}

pub fn render_svg(mesh: &Mesh, field: Option<&[f64]>, path: impl AsRef<Path>) -> Result<(), IoError> {
    write(path.as_ref(), &svg_document(mesh, field)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::refine::refine;

    fn polygons(svg: &str) -> usize {
        svg.matches("<polygon ").count()
    }

    #[test]
    fn one_polygon_per_element() {
        let square = Mesh::unit_square_grid(1, 1);
        assert_eq!(polygons(&svg_document(&square, None).unwrap()), 1);
        let refined = refine(&square, &[0]).unwrap();
        assert_eq!(polygons(&svg_document(&refined, None).unwrap()), 4);
    }

    #[test]
    fn unit_square_geometry() {
        // side 1: margin 0.02, canvas 1040 x 1040, stroke 0.002 * sqrt(2) * 1000
        let svg = svg_document(&Mesh::unit_square_grid(1, 1), None).unwrap();
        assert!(svg.contains(r#"viewBox="0 0 1040.000 1040.000""#), "{svg}");
        assert!(svg.contains(r#"stroke-width="2.828""#));
        assert!(svg.contains(r#"points="20.000,1020.000 1020.000,1020.000 1020.000,20.000 20.000,20.000""#));
    }

    #[test]
    fn field_colors_follow_the_ramp() {
        let m = Mesh::unit_square_grid(2, 1);
        // element means 0 and 1 on a field ranging over [0, 2]
        let svg = svg_document(&m, Some(&[0.0, 0.0, 2.0, 0.0, 0.0, 2.0])).unwrap();
        assert!(svg.contains(&format!(r#"fill="{}""#, ramp(0.0))));
        assert!(svg.contains(&format!(r#"fill="{}""#, ramp(0.5))));
        assert_eq!(ramp(0.5), "#978f5d");
        assert_eq!(ramp(0.0), "#313695");
        assert_eq!(ramp(1.0), "#fde725");
        assert!(matches!(svg_document(&m, Some(&[0.0])), Err(IoError::FieldLength { expected: 6, found: 1 })));
    }

    #[test]
    fn output_is_deterministic() {
        let m = refine(&Mesh::unit_square_grid(3, 3), &[4, 0]).unwrap();
        let f: Vec<f64> = m.nodes.iter().map(|p| p.x * p.y).collect();
        assert_eq!(svg_document(&m, Some(&f)).unwrap(), svg_document(&m, Some(&f)).unwrap());
    }
}
