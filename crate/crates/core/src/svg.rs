//! SVG rendering of a signed partial-sum path in the plane.

use std::fmt::Write;

use crate::admissible::Sign;
use crate::error::{Error, Result};
use crate::norms::{NormSpec, Vector};

/// Half-width of the square viewport.
const HALF_VIEW: f64 = 200.0;

/// Draws one `<line class="step">` per input from each partial sum to the
/// next, and the outline of `bound` times the unit ball as a single
/// element with class `bound`. The scale makes the larger of the bound ball
/// and the path fill the 400-unit viewport.
pub fn render_trajectory(
    vectors: &[Vector],
    signs: &[Sign],
    spec: &NormSpec,
    bound: f64,
) -> Result<String> {
    if let Some(v) = vectors.iter().find(|v| v.dim() != 2) {
        return Err(Error::DimensionMismatch {
            expected: 2,
            found: v.dim(),
        });
    }
    if signs.len() != vectors.len() {
        return Err(Error::InvariantViolated(format!(
            "{} signs for {} vectors",
            signs.len(),
            vectors.len()
        )));
    }

    let mut points = vec![[0.0, 0.0]];
    for (v, s) in vectors.iter().zip(signs) {
        let [x, y] = *points.last().unwrap();
        points.push([x + s.value() * v.coords()[0], y + s.value() * v.coords()[1]]);
    }
    let path_extent = points
        .iter()
        .map(|p| p[0].abs().max(p[1].abs()))
        .fold(0.0, f64::max);
    let extent = (bound * spec.unit_ball_extent()).max(path_extent);
    let scale = if extent > 0.0 { HALF_VIEW / extent } else { 1.0 };
    // SVG's y axis points down.
    let map = |p: [f64; 2]| (p[0] * scale, -p[1] * scale);

    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="{} {} {} {}" width="400" height="400">"#,
        -HALF_VIEW,
        -HALF_VIEW,
        2.0 * HALF_VIEW,
        2.0 * HALF_VIEW
    );
    let r = bound * scale;
    let outline: Vec<[f64; 2]> = match spec {
        NormSpec::Euclidean => Vec::new(),
        NormSpec::L1 => vec![[1.0, 0.0], [0.0, 1.0], [-1.0, 0.0], [0.0, -1.0]],
        NormSpec::Linf => vec![[1.0, 1.0], [-1.0, 1.0], [-1.0, -1.0], [1.0, -1.0]],
        NormSpec::Polygon(g) => g.vertices().to_vec(),
    };
    if outline.is_empty() {
        let _ = writeln!(
            out,
            r#"  <circle class="bound" cx="0" cy="0" r="{r:.3}" fill="none" stroke="gray" stroke-dasharray="4 2"/>"#
        );
    } else {
        let pts: Vec<String> = outline
            .iter()
            .map(|p| {
                let (x, y) = map([p[0] * bound, p[1] * bound]);
                format!("{x:.3},{y:.3}")
            })
            .collect();
        let _ = writeln!(
            out,
            r#"  <polygon class="bound" points="{}" fill="none" stroke="gray" stroke-dasharray="4 2"/>"#,
            pts.join(" ")
        );
    }
    for pair in points.windows(2) {
        let (x1, y1) = map(pair[0]);
        let (x2, y2) = map(pair[1]);
        let _ = writeln!(
            out,
            r#"  <line class="step" x1="{x1:.3}" y1="{y1:.3}" x2="{x2:.3}" y2="{y2:.3}" stroke="black"/>"#
        );
    }
    out.push_str("</svg>\n");
    Ok(out)
}
