use std::fmt::Write as _;
use std::fs;
use std::io::BufReader;
use std::path::{Path, PathBuf};

use num_complex::Complex64;

use super::{HarnessError, Result};
use crate::esd::read_points_csv;

const SIZE: f64 = 480.0;
const MARGIN: f64 = 40.0;

/// Square SVG scatter of `points` in the complex plane, equal aspect ratio,
/// axis ticks at −1, 0, 1 and an optional unit circle. Point glyphs are
/// `<rect>` elements, so the overlay is the only `<circle>`. Coordinates use
/// six decimals, which keeps the output byte-stable.
pub fn scatter_svg(points: &[Complex64], overlay_unit_circle: bool) -> String {
    let extent = points.iter().map(|z| z.re.abs().max(z.im.abs())).fold(1.0f64, f64::max) * 1.1;
    let span = SIZE - 2.0 * MARGIN;
    let px = |x: f64| MARGIN + (x + extent) / (2.0 * extent) * span;
    let py = |y: f64| MARGIN + (extent - y) / (2.0 * extent) * span;
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE:.0}" height="{SIZE:.0}" viewBox="0 0 {SIZE:.0} {SIZE:.0}">"#
    );
    let _ = writeln!(
        s,
        r#"<rect class="background" x="0" y="0" width="{SIZE:.0}" height="{SIZE:.0}" fill="white"/>"#
    );
    let _ = writeln!(
        s,
        r##"<g class="axes" stroke="#888" stroke-width="0.5"><line x1="{:.6}" y1="{:.6}" x2="{:.6}" y2="{:.6}"/><line x1="{:.6}" y1="{:.6}" x2="{:.6}" y2="{:.6}"/></g>"##,
        px(-extent),
        py(0.0),
        px(extent),
        py(0.0),
        px(0.0),
        py(-extent),
        px(0.0),
        py(extent)
    );
    s.push_str(r#"<g class="ticks" font-size="10" font-family="sans-serif" text-anchor="middle">"#);
    for t in [-1.0f64, 0.0, 1.0] {
        let _ = write!(
            s,
            r##"<line x1="{x:.6}" y1="{y0:.6}" x2="{x:.6}" y2="{y1:.6}" stroke="#444"/><text x="{x:.6}" y="{ty:.6}">{t}</text>"##,
            x = px(t),
            y0 = py(0.0) - 3.0,
            y1 = py(0.0) + 3.0,
            ty = SIZE - MARGIN / 2.0,
        );
        let _ = write!(
            s,
            r##"<line x1="{x0:.6}" y1="{y:.6}" x2="{x1:.6}" y2="{y:.6}" stroke="#444"/><text x="{tx:.6}" y="{ty:.6}">{t}</text>"##,
            y = py(t),
            x0 = px(0.0) - 3.0,
            x1 = px(0.0) + 3.0,
            tx = MARGIN / 2.0,
            ty = py(t) + 3.0,
        );
    }
    s.push_str("</g>\n");
    if overlay_unit_circle {
        let _ = writeln!(
            s,
            r##"<circle class="unit-circle" cx="{:.6}" cy="{:.6}" r="{:.6}" fill="none" stroke="#d33" stroke-width="1"/>"##,
            px(0.0),
            py(0.0),
            span / (2.0 * extent)
        );
    }
    s.push_str(r##"<g class="points" fill="#1f4e9a">"##);
    s.push('\n');
    for z in points {
        let _ = writeln!(
            s,
            r#"<rect x="{:.6}" y="{:.6}" width="1.5" height="1.5"/>"#,
            px(z.re) - 0.75,
            py(z.im) - 0.75
        );
    }
    s.push_str("</g>\n</svg>\n");
    s
}

/// Reads a `re,im` CSV and writes its scatter plot. Nothing is written when
/// the input is missing, malformed or empty.
pub fn render_scatter(points_file: &Path, out_svg: &Path, overlay_unit_circle: bool) -> Result<PathBuf> {
    let file = fs::File::open(points_file).map_err(|e| HarnessError::io(points_file, e))?;
    let points = read_points_csv(BufReader::new(file)).map_err(|source| HarnessError::Parse {
        path: points_file.to_path_buf(),
        source,
    })?;
    fs::write(out_svg, scatter_svg(&points, overlay_unit_circle)).map_err(|e| HarnessError::io(out_svg, e))?;
    Ok(out_svg.to_path_buf())
}
