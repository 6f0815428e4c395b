//! Scatter-plot SVG output for 2-D views of a clustering.
//!
//! Hand-emitted SVG keeps the crate free of imaging dependencies. The two
//! plotted dimensions share one scale factor so that ball circles stay
//! circular.

use std::fmt::Write as _;

use crate::ball::BallSet;
use crate::dataset::{Dataset, NOISE_LABEL};
use crate::error::{Error, Result};

/// Categorical palette; label -1 draws gray, other labels cycle.
const PALETTE: [&str; 10] = [
    "#4e79a7", "#f28e2b", "#59a14f", "#e15759", "#b07aa1", "#76b7b2", "#edc948", "#ff9da7",
    "#9c755f", "#86bcb6",
];
const NOISE_COLOR: &str = "#bab0ac";

#[derive(Debug, Clone)]
pub struct PlotOptions {
    /// Which two dataset dimensions to plot.
    pub dims: (usize, usize),
    /// Canvas width/height in pixels.
    pub size: u32,
    /// Draw ball outlines (center + max radius) on top of the points.
    pub balls: bool,
}

impl Default for PlotOptions {
    fn default() -> Self {
        Self { dims: (0, 1), size: 640, balls: false }
    }
}

/// Renders the dataset as an SVG scatter plot, one marker per point,
/// colored by `labels`, optionally overlaying ball circles.
pub fn scatter_svg(
    ds: &Dataset,
    labels: &[i32],
    balls: Option<&BallSet>,
    opts: &PlotOptions,
) -> Result<String> {
    if labels.len() != ds.len() {
        return Err(Error::LengthMismatch { left: labels.len(), right: ds.len() });
    }
    let (dx, dy) = opts.dims;
    if dx >= ds.dim() || dy >= ds.dim() {
        return Err(Error::InvalidParameter(format!(
            "plot dimensions ({dx}, {dy}) out of range for a {}-dimensional dataset",
            ds.dim()
        )));
    }

    let (lo, hi) = ds.bounding_box();
    let margin = 0.05 * (opts.size as f64);
    let span_x = (hi[dx] - lo[dx]).max(f64::MIN_POSITIVE);
    let span_y = (hi[dy] - lo[dy]).max(f64::MIN_POSITIVE);
    // One scale for both axes keeps circles circular.
    let scale = (opts.size as f64 - 2.0 * margin) / span_x.max(span_y);
    let px = |v: f64| margin + (v - lo[dx]) * scale;
    // SVG y grows downward; flip so larger coordinates plot higher.
    let py = |v: f64| opts.size as f64 - margin - (v - lo[dy]) * scale;

    let mut out = String::new();
    writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{0}" height="{0}" viewBox="0 0 {0} {0}">"#,
        opts.size
    )
    .expect("string write");
    writeln!(out, r#"<rect width="{0}" height="{0}" fill="white"/>"#, opts.size)
        .expect("string write");

    if opts.balls {
        if let Some(set) = balls {
            for b in set.balls() {
                writeln!(
                    out,
                    r##"<circle cx="{:.2}" cy="{:.2}" r="{:.2}" fill="none" stroke="#888888" stroke-width="1" opacity="0.6"/>"##,
                    px(b.center()[dx]),
                    py(b.center()[dy]),
                    (b.max_radius() * scale).max(1.0),
                )
                .expect("string write");
            }
        }
    }

    for (p, &l) in ds.points().zip(labels) {
        let color = if l == NOISE_LABEL {
            NOISE_COLOR
        } else {
            PALETTE[(l.max(0) as usize) % PALETTE.len()]
        };
        writeln!(
            out,
            r#"<circle class="pt" cx="{:.2}" cy="{:.2}" r="3" fill="{}"/>"#,
            px(p[dx]),
            py(p[dy]),
            color,
        )
        .expect("string write");
    }
    out.push_str("</svg>\n");
    Ok(out)
}
