//! Hand-written SVG for point clouds and barcodes. Output depends only on
//! the artifact, so identical inputs give identical bytes.

use std::fmt::Write;

use thiserror::Error;
use topoperiod::{PersistenceDiagram, PointCloud};

pub const WIDTH: f64 = 800.0;
pub const HEIGHT: f64 = 400.0;
const MARGIN: f64 = 40.0;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RenderError {
    #[error("nothing to render: the artifact is empty")]
    EmptyArtifact,
    #[error("cannot plot a {0}-dimensional cloud")]
    UnsupportedDimension(usize),
}

impl RenderError {
    pub fn kind(&self) -> &'static str {
        match self {
            RenderError::EmptyArtifact => "EmptyArtifact",
            RenderError::UnsupportedDimension(_) => "UnsupportedDimension",
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub enum Artifact<'a> {
    Cloud(&'a PointCloud),
    Diagram(&'a PersistenceDiagram),
}

pub fn render_svg(artifact: Artifact<'_>) -> Result<String, RenderError> {
    match artifact {
        Artifact::Cloud(c) => render_cloud(c),
        Artifact::Diagram(d) => render_barcode(d),
    }
}

fn header(out: &mut String, title: &str) {
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    );
    let _ = writeln!(
        out,
        r#"<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#
    );
    let _ = writeln!(
        out,
        r#"<text x="{MARGIN}" y="24" font-family="sans-serif" font-size="14">{title}</text>"#
    );
}

/// Scatter plot of the first two coordinates with equal axis scales.
fn render_cloud(cloud: &PointCloud) -> Result<String, RenderError> {
    if cloud.is_empty() {
        return Err(RenderError::EmptyArtifact);
    }
    if cloud.dim() < 2 {
        return Err(RenderError::UnsupportedDimension(cloud.dim()));
    }
    let (mut x0, mut x1, mut y0, mut y1) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
    for p in cloud.points() {
        x0 = x0.min(p[0]);
        x1 = x1.max(p[0]);
        y0 = y0.min(p[1]);
        y1 = y1.max(p[1]);
    }
    let span = (x1 - x0).max(y1 - y0);
    let scale = if span > 0.0 {
        ((WIDTH - 2.0 * MARGIN) / (x1 - x0).max(f64::MIN_POSITIVE))
            .min((HEIGHT - 2.0 * MARGIN) / (y1 - y0).max(f64::MIN_POSITIVE))
    } else {
        1.0
    };
    let (cx, cy) = ((x0 + x1) / 2.0, (y0 + y1) / 2.0);

    let mut out = String::new();
    let title = if cloud.dim() > 2 {
        format!("{} points (first 2 of {} coordinates)", cloud.len(), cloud.dim())
    } else {
        format!("{} points", cloud.len())
    };
    header(&mut out, &title);
    out.push_str("<g fill=\"steelblue\">\n");
    for p in cloud.points() {
        let x = WIDTH / 2.0 + (p[0] - cx) * scale;
        let y = HEIGHT / 2.0 - (p[1] - cy) * scale;
        let _ = writeln!(out, r#"<circle class="point" cx="{x:.2}" cy="{y:.2}" r="2"/>"#);
    }
    out.push_str("</g>\n</svg>\n");
    Ok(out)
}

/// One horizontal bar per interval, grouped by dimension in diagram order.
/// Infinite bars run to the right edge of the plot and carry an arrow head.
fn render_barcode(d: &PersistenceDiagram) -> Result<String, RenderError> {
    if d.is_empty() {
        return Err(RenderError::EmptyArtifact);
    }
    let finite_max = d
        .intervals()
        .iter()
        .flat_map(|i| [i.birth, i.death])
        .filter(|v| v.is_finite())
        .fold(0.0f64, f64::max);
    let x_max = if finite_max > 0.0 { finite_max * 1.1 } else { 1.0 };
    let plot_w = WIDTH - 2.0 * MARGIN;
    let x_of = |v: f64| MARGIN + (v.min(x_max) / x_max) * plot_w;

    let mut dims: Vec<usize> = d.intervals().iter().map(|i| i.dim).collect();
    dims.dedup();
    let top = MARGIN;
    let gap = 12.0;
    let rows_h = HEIGHT - 2.0 * MARGIN - gap * (dims.len() - 1) as f64;
    let row = rows_h / d.len() as f64;
    let bar_h = (row * 0.7).max(0.5);

    let mut out = String::new();
    header(&mut out, &format!("barcode: {} intervals", d.len()));
    let axis_y = HEIGHT - MARGIN + 4.0;
    let _ = writeln!(
        out,
        r#"<line x1="{MARGIN}" y1="{axis_y}" x2="{:.2}" y2="{axis_y}" stroke="black"/>"#,
        MARGIN + plot_w
    );
    for k in 0..=4 {
        let v = x_max * k as f64 / 4.0;
        let _ = writeln!(
            out,
            r#"<text x="{:.2}" y="{:.2}" font-family="sans-serif" font-size="10" text-anchor="middle">{v:.3}</text>"#,
            x_of(v),
            axis_y + 14.0
        );
    }

    let mut y = top;
    let mut current = None;
    for i in d.intervals() {
        if current != Some(i.dim) {
            if current.is_some() {
                y += gap;
            }
            current = Some(i.dim);
            let _ = writeln!(
                out,
                r#"<text x="4" y="{:.2}" font-family="sans-serif" font-size="12">H{}</text>"#,
                y + 10.0,
                i.dim
            );
        }
        let x = x_of(i.birth);
        let end = if i.is_finite() { x_of(i.death) } else { MARGIN + plot_w };
        let w = (end - x).max(1.0);
        let color = if i.dim == 0 { "steelblue" } else { "firebrick" };
        let _ = writeln!(
            out,
            r#"<rect class="bar" data-dim="{}" x="{x:.2}" y="{y:.2}" width="{w:.2}" height="{bar_h:.2}" fill="{color}"/>"#,
            i.dim
        );
        if !i.is_finite() {
            let mid = y + bar_h / 2.0;
            let _ = writeln!(
                out,
                r#"<polygon class="infinite" points="{:.2},{:.2} {:.2},{mid:.2} {:.2},{:.2}" fill="black"/>"#,
                end,
                y - 1.0,
                end + 6.0,
                end,
                y + bar_h + 1.0
            );
        }
        y += row;
    }
    out.push_str("</svg>\n");
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use topoperiod::Interval;

    fn count(svg: &str, needle: &str) -> usize {
        svg.matches(needle).count()
    }

    #[test]
    fn three_intervals_three_bars() {
        let d = PersistenceDiagram::new(vec![
            Interval::new(0, 0.0, f64::INFINITY),
            Interval::new(0, 0.0, 1.0),
            Interval::new(1, 1.0, 2f64.sqrt()),
        ]);
        let svg = render_svg(Artifact::Diagram(&d)).unwrap();
        assert_eq!(count(&svg, r#"class="bar""#), 3);
        assert_eq!(count(&svg, r#"class="infinite""#), 1);
        assert!(svg.starts_with("<svg") && svg.ends_with("</svg>\n"));
    }

    #[test]
    fn one_marker_per_point() {
        let c = PointCloud::from_points(2, &[[0.0, 0.0], [1.0, 0.0], [0.5, 2.0], [3.0, 3.0]]).unwrap();
        let svg = render_svg(Artifact::Cloud(&c)).unwrap();
        assert_eq!(count(&svg, r#"class="point""#), 4);
    }

    #[test]
    fn empty_artifacts_are_rejected() {
        let d = PersistenceDiagram::new(vec![]);
        assert_eq!(render_svg(Artifact::Diagram(&d)), Err(RenderError::EmptyArtifact));
        let c = PointCloud::empty(2).unwrap();
        assert_eq!(render_svg(Artifact::Cloud(&c)), Err(RenderError::EmptyArtifact));
    }

    #[test]
    fn single_point_cloud_renders() {
        let c = PointCloud::from_points(2, &[[1.0, 1.0]]).unwrap();
        let svg = render_svg(Artifact::Cloud(&c)).unwrap();
        assert!(svg.contains(r#"cx="400.00" cy="200.00""#));
    }
}
