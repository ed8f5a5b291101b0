//! Standalone SVG plots of a bivariate sample with depth regions on top.
//!
//! Output depends only on the inputs: coordinates are printed with a fixed
//! number of decimals and nothing time- or environment-dependent is written.

use std::fmt::Write as _;
use std::path::Path;

use mdepth::{Region2D, Sample};

use crate::error::{CliError, CliResult};

const SIZE: f64 = 560.0;
const MARGIN: f64 = 20.0;
const FILLS: [&str; 6] = ["#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b"];

struct Frame {
    xmin: f64,
    ymax: f64,
    scale: f64,
    width: f64,
    height: f64,
}

impl Frame {
    fn new(sample: &Sample<f64>) -> Self {
        let b = sample.bounds();
        let (mut xmin, mut xmax) = b[0];
        let (mut ymin, mut ymax) = b[1];
        let pad = 0.05 * (xmax - xmin).max(ymax - ymin).max(1e-12);
        xmin -= pad;
        xmax += pad;
        ymin -= pad;
        ymax += pad;
        let scale = SIZE / (xmax - xmin).max(ymax - ymin);
        Frame {
            xmin,
            ymax,
            scale,
            width: (xmax - xmin) * scale + 2.0 * MARGIN,
            height: (ymax - ymin) * scale + 2.0 * MARGIN,
        }
    }

    fn map(&self, p: &[f64]) -> (f64, f64) {
        (MARGIN + (p[0] - self.xmin) * self.scale, MARGIN + (self.ymax - p[1]) * self.scale)
    }
}

/// Renders the sample and the regions, first region at the bottom.
pub fn render_regions_svg(regions: &[Region2D<f64>], sample: &Sample<f64>) -> CliResult<String> {
    if sample.dim() != 2 {
        return Err(CliError::Data("plots need bivariate data".into()));
    }
    let f = Frame::new(sample);
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w:.0}" height="{h:.0}" viewBox="0 0 {w:.3} {h:.3}">"#,
        w = f.width,
        h = f.height
    );
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(s, r##"<g fill="#444444" fill-opacity="0.6">"##);
    for row in sample.rows() {
        let (x, y) = f.map(row);
        let _ = writeln!(s, r#"<circle cx="{x:.3}" cy="{y:.3}" r="1.5"/>"#);
    }
    let _ = writeln!(s, "</g>");
    let mut notes = Vec::new();
    for (k, region) in regions.iter().enumerate() {
        if region.is_empty() {
            notes.push(if regions.len() == 1 {
                "empty region".to_string()
            } else {
                format!("region {} is empty", k + 1)
            });
            continue;
        }
        let points: Vec<String> = region
            .vertices
            .iter()
            .map(|v| {
                let (x, y) = f.map(v);
                format!("{x:.3},{y:.3}")
            })
            .collect();
        let color = FILLS[k % FILLS.len()];
        let _ = writeln!(
            s,
            r#"<polygon points="{}" fill="{color}" fill-opacity="0.25" stroke="{color}" stroke-width="1.5"/>"#,
            points.join(" ")
        );
    }
    for (k, note) in notes.iter().enumerate() {
        let _ = writeln!(
            s,
            r##"<text x="{:.3}" y="{:.3}" font-family="sans-serif" font-size="14" fill="#aa0000">{note}</text>"##,
            MARGIN,
            MARGIN + 14.0 * (k + 1) as f64
        );
    }
    s.push_str("</svg>\n");
    Ok(s)
}

/// Writes one region over the sample.
pub fn write_region_svg(region: &Region2D<f64>, sample: &Sample<f64>, path: &Path) -> CliResult<()> {
    write_regions_svg(std::slice::from_ref(region), sample, path)
}

/// Writes nested regions as layered polygons.
pub fn write_regions_svg(regions: &[Region2D<f64>], sample: &Sample<f64>, path: &Path) -> CliResult<()> {
    let text = render_regions_svg(regions, sample)?;
    std::fs::write(path, text).map_err(|e| CliError::io(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;
    use mdepth::{depth_region_2d, LossSpec, Order};

    fn sample() -> Sample<f64> {
        Sample::from_rows(&[vec![0.0, 0.0], vec![2.0, 0.0], vec![0.0, 1.0], vec![2.0, 1.0], vec![1.0, 0.5]]).unwrap()
    }

    #[test]
    fn layered_polygons() {
        let s = sample();
        let regs: Vec<_> = [0.1, 0.3]
            .iter()
            .map(|&a| depth_region_2d(&s, &LossSpec::Quadratic, Order::new(a).unwrap(), 60).unwrap())
            .collect();
        let svg = render_regions_svg(&regs, &s).unwrap();
        assert_eq!(svg.matches("<polygon").count(), 2);
        assert_eq!(svg.matches("<circle").count(), 5);
        assert!(!svg.contains("<text"));
    }

    #[test]
    fn empty_region_is_annotated() {
        let s = sample();
        let r = depth_region_2d(&s, &LossSpec::Absolute, Order::new(0.9).unwrap(), 60).unwrap();
        assert!(r.is_empty());
        let svg = render_regions_svg(std::slice::from_ref(&r), &s).unwrap();
        assert_eq!(svg.matches("<polygon").count(), 0);
        assert!(svg.contains(">empty region</text>"));
    }

    #[test]
    fn rejects_other_dimensions() {
        let s = Sample::from_rows(&[vec![0.0], vec![1.0]]).unwrap();
        assert!(render_regions_svg(&[], &s).is_err());
    }
}
