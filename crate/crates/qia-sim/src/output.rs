//! Result persistence: diffable CSV files and a dependency-free SVG chart.
//!
//! CSV layout is fixed: comma separation, a header row, LF line endings and
//! `.` decimal points. A `# generated-unix <seconds>` comment line leads the
//! file unless deterministic output is requested.

use std::io::Write;
use std::path::Path;

use crate::config::ConfigError;
use crate::experiment::ResultRow;
use qia_core::analysis::detection_probability;

fn timestamp_line() -> String {
    let secs = std::time::SystemTime::now()
        .duration_since(std::time::UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0);
    format!("# generated-unix {secs}\n")
}

/// Appends rows to a CSV file, writing the header (and, unless
/// `deterministic`, a timestamp comment) only when the file starts empty.
pub fn append_result_rows(
    path: &Path,
    rows: &[ResultRow],
    deterministic: bool,
) -> Result<(), ConfigError> {
    let exists = path.exists() && std::fs::metadata(path).map(|m| m.len() > 0).unwrap_or(false);
    let mut file = std::fs::OpenOptions::new()
        .create(true)
        .append(true)
        .open(path)
        .map_err(|e| ConfigError::Io(format!("{}: {e}", path.display())))?;
    let mut out = String::new();
    if !exists {
        if !deterministic {
            out.push_str(&timestamp_line());
        }
        out.push_str(ResultRow::CSV_HEADER);
        out.push('\n');
    }
    for row in rows {
        out.push_str(&row.to_csv_line());
        out.push('\n');
    }
    file.write_all(out.as_bytes())
        .map_err(|e| ConfigError::Io(format!("{}: {e}", path.display())))
}

/// One row of the information-quantity table.
#[derive(Debug, Clone)]
pub struct InfoRow {
    pub protocol: &'static str,
    pub quantity: &'static str,
    pub closed_form: f64,
    pub monte_carlo: f64,
    pub tolerance: f64,
}

impl InfoRow {
    pub fn within(&self) -> bool {
        (self.closed_form - self.monte_carlo).abs() <= self.tolerance
    }
}

pub fn write_info_rows(
    path: &Path,
    rows: &[InfoRow],
    deterministic: bool,
) -> Result<(), ConfigError> {
    let mut out = String::new();
    if !deterministic {
        out.push_str(&timestamp_line());
    }
    out.push_str("protocol,quantity,closed_form,monte_carlo,tolerance,within\n");
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{}\n",
            r.protocol,
            r.quantity,
            r.closed_form,
            r.monte_carlo,
            r.tolerance,
            r.within()
        ));
    }
    std::fs::write(path, out).map_err(|e| ConfigError::Io(format!("{}: {e}", path.display())))
}

/// Renders the detection curve: the closed form 1 − (1/4)^n as a polyline
/// with the empirical points (and their Wilson intervals) on top.
pub fn write_curve_svg(path: &Path, rows: &[ResultRow]) -> Result<(), ConfigError> {
    let (width, height) = (640.0f64, 420.0f64);
    let (ml, mr, mt, mb) = (60.0f64, 20.0f64, 20.0f64, 50.0f64);
    let n_min = rows.iter().map(|r| r.n).min().unwrap_or(1) as f64;
    let n_max = rows.iter().map(|r| r.n).max().unwrap_or(1) as f64;
    let x = |n: f64| {
        if n_max > n_min {
            ml + (n - n_min) / (n_max - n_min) * (width - ml - mr)
        } else {
            (ml + width - mr) / 2.0
        }
    };
    let y = |p: f64| height - mb - p * (height - mt - mb);

    let mut svg = String::new();
    svg.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{width}\" height=\"{height}\" viewBox=\"0 0 {width} {height}\">\n"
    ));
    svg.push_str("<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n");
    // axes
    svg.push_str(&format!(
        "<line x1=\"{ml}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"black\"/>\n",
        height - mb,
        width - mr,
        height - mb
    ));
    svg.push_str(&format!(
        "<line x1=\"{ml}\" y1=\"{mt}\" x2=\"{ml}\" y2=\"{}\" stroke=\"black\"/>\n",
        height - mb
    ));
    for tick in 0..=4 {
        let p = tick as f64 / 4.0;
        svg.push_str(&format!(
            "<line x1=\"{}\" y1=\"{}\" x2=\"{ml}\" y2=\"{}\" stroke=\"black\"/>\n",
            ml - 5.0,
            y(p),
            y(p)
        ));
        svg.push_str(&format!(
            "<text x=\"{}\" y=\"{}\" font-size=\"12\" text-anchor=\"end\">{p:.2}</text>\n",
            ml - 8.0,
            y(p) + 4.0
        ));
    }
    for row in rows {
        let n = row.n as f64;
        svg.push_str(&format!(
            "<text x=\"{}\" y=\"{}\" font-size=\"12\" text-anchor=\"middle\">{}</text>\n",
            x(n),
            height - mb + 18.0,
            row.n
        ));
    }
    svg.push_str(&format!(
        "<text x=\"{}\" y=\"{}\" font-size=\"13\" text-anchor=\"middle\">rounds n</text>\n",
        (ml + width - mr) / 2.0,
        height - 12.0
    ));
    svg.push_str(&format!(
        "<text x=\"16\" y=\"{}\" font-size=\"13\" text-anchor=\"middle\" transform=\"rotate(-90 16 {})\">detection probability</text>\n",
        (mt + height - mb) / 2.0,
        (mt + height - mb) / 2.0
    ));

    // closed form sampled densely over the n range
    let mut points = Vec::new();
    let samples = 200;
    for i in 0..=samples {
        let n = n_min + (n_max - n_min) * i as f64 / samples as f64;
        let p = 1.0 - 0.25f64.powf(n);
        points.push(format!("{:.2},{:.2}", x(n), y(p)));
    }
    svg.push_str(&format!(
        "<polyline points=\"{}\" fill=\"none\" stroke=\"steelblue\" stroke-width=\"2\"/>\n",
        points.join(" ")
    ));

    // empirical points with Wilson whiskers
    for row in rows {
        let cx = x(row.n as f64);
        svg.push_str(&format!(
            "<line x1=\"{cx:.2}\" y1=\"{:.2}\" x2=\"{cx:.2}\" y2=\"{:.2}\" stroke=\"firebrick\"/>\n",
            y(row.ci_low),
            y(row.ci_high)
        ));
        svg.push_str(&format!(
            "<circle cx=\"{cx:.2}\" cy=\"{:.2}\" r=\"4\" fill=\"firebrick\"/>\n",
            y(row.detection_rate)
        ));
        // sanity: the closed-form column matches the formula exactly
        debug_assert_eq!(row.closed_form, Some(detection_probability(row.n as u32)));
    }
    svg.push_str("</svg>\n");
    std::fs::write(path, svg).map_err(|e| ConfigError::Io(format!("{}: {e}", path.display())))
}
