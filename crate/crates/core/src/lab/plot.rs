use std::path::Path;

use plotters::prelude::*;

use super::{LabError, CSV_HEADER};

/// One CSV row as the plot sees it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlotPoint {
    pub d: f64,
    pub achieved: f64,
    pub certified: bool,
}

pub(crate) fn read_points(csv: &str) -> Result<Vec<PlotPoint>, LabError> {
    let mut lines = csv.lines();
    if lines.next().map(str::trim) != Some(CSV_HEADER) {
        return Err(LabError::Plot("missing or unexpected CSV header".into()));
    }
    lines
        .filter(|l| !l.trim().is_empty())
        .enumerate()
        .map(|(i, l)| {
            let f: Vec<&str> = l.split(',').collect();
            let bad = || LabError::Plot(format!("row {}: malformed", i + 2));
            if f.len() != 11 {
                return Err(bad());
            }
            Ok(PlotPoint {
                d: f[5].parse().map_err(|_| bad())?,
                achieved: f[7].parse().map_err(|_| bad())?,
                certified: f[8].parse().map_err(|_| bad())?,
            })
        })
        .collect()
}

/// Writes an SVG of achieved length against measured average degree, with
/// `c d^(1/2 + eps)` drawn over it. Certified points are filled.
pub fn plot_csv(csv: &str, out: &Path, c: f64, eps: f64) -> Result<usize, LabError> {
    let pts = read_points(csv)?;
    let err = |e: String| LabError::Plot(e);
    let d_max = pts.iter().map(|p| p.d).fold(1.0, f64::max) * 1.05;
    let phi = |d: f64| c * d.powf(0.5 + eps);
    let y_max = pts.iter().map(|p| p.achieved).fold(phi(d_max), f64::max).max(1.0) * 1.05;

    let root = SVGBackend::new(out, (800, 600)).into_drawing_area();
    root.fill(&WHITE).map_err(|e| err(e.to_string()))?;
    let mut chart = ChartBuilder::on(&root)
        .margin(20)
        .x_label_area_size(40)
        .y_label_area_size(50)
        .build_cartesian_2d(0.0..d_max, 0.0..y_max)
        .map_err(|e| err(e.to_string()))?;
    chart
        .configure_mesh()
        .x_desc("measured average degree d")
        .y_desc("path length")
        .draw()
        .map_err(|e| err(e.to_string()))?;
    chart
        .draw_series(
            pts.iter()
                .map(|p| Circle::new((p.d, p.achieved), 3, BLUE.stroke_width(1).filled_if(p.certified))),
        )
        .map_err(|e| err(e.to_string()))?;
    let curve = (0..=200).map(|i| {
        let d = d_max * i as f64 / 200.0;
        (d, phi(d))
    });
    chart
        .draw_series(LineSeries::new(curve, &RED))
        .map_err(|e| err(e.to_string()))?;
    root.present().map_err(|e| err(e.to_string()))?;
    Ok(pts.len())
}

trait FilledIf {
    fn filled_if(self, yes: bool) -> ShapeStyle;
}

impl FilledIf for ShapeStyle {
    fn filled_if(self, yes: bool) -> ShapeStyle {
        if yes {
            self.filled()
        } else {
            self
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn writes_svg() {
        let csv = format!("{CSV_HEADER}\ncycle,n=5,0,5,5,1.000000,0.010000,4,true,,0\n");
        let dir = tempfile::tempdir().unwrap();
        let out = dir.path().join("p.svg");
        assert_eq!(plot_csv(&csv, &out, 0.01, 0.025).unwrap(), 1);
        let svg = std::fs::read_to_string(&out).unwrap();
        assert!(svg.contains("<svg"));
    }

    #[test]
    fn rejects_bad_csv() {
        assert!(read_points("a,b\n").is_err());
        assert!(read_points(&format!("{CSV_HEADER}\n1,2\n")).is_err());
    }
}
