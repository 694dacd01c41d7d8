//! Deterministic SVG line plots: fixed viewbox, fixed formatting, no
//! timestamps, so identical input renders byte-identical output.

use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum SvgError {
    #[error("no series to plot")]
    Empty,
    #[error("series '{label}' has {got} points, need >= 2")]
    TooFewPoints { label: String, got: usize },
    #[error("series '{label}' has no positive values on a log axis")]
    LogDomain { label: String },
}

#[derive(Debug, Clone)]
pub struct Series {
    pub label: String,
    pub points: Vec<(f64, f64)>,
}

#[derive(Debug, Clone)]
pub struct Axes {
    pub title: String,
    pub x_label: String,
    pub y_label: String,
    pub log_x: bool,
    pub log_y: bool,
}

const WIDTH: f64 = 840.0;
const HEIGHT: f64 = 600.0;
const MARGIN_L: f64 = 80.0;
const MARGIN_R: f64 = 30.0;
const MARGIN_T: f64 = 50.0;
const MARGIN_B: f64 = 60.0;
const COLORS: [&str; 4] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd"];

pub fn emit_svg(series: &[Series], axes: &Axes) -> Result<String, SvgError> {
    if series.is_empty() {
        return Err(SvgError::Empty);
    }
    for s in series {
        if s.points.len() < 2 {
            return Err(SvgError::TooFewPoints {
                label: s.label.clone(),
                got: s.points.len(),
            });
        }
    }
    let tx = |v: f64| if axes.log_x { v.log10() } else { v };
    let ty = |v: f64| if axes.log_y { v.log10() } else { v };
    let usable = |s: &Series, v: (f64, f64)| {
        (!axes.log_x || v.0 > 0.0) && (!axes.log_y || v.1 > 0.0) && {
            let _ = s;
            v.0.is_finite() && v.1.is_finite()
        }
    };
    let mut xmin = f64::INFINITY;
    let mut xmax = f64::NEG_INFINITY;
    let mut ymin = f64::INFINITY;
    let mut ymax = f64::NEG_INFINITY;
    for s in series {
        let mut any = false;
        for &p in &s.points {
            if usable(s, p) {
                any = true;
                xmin = xmin.min(tx(p.0));
                xmax = xmax.max(tx(p.0));
                ymin = ymin.min(ty(p.1));
                ymax = ymax.max(ty(p.1));
            }
        }
        if !any {
            return Err(SvgError::LogDomain {
                label: s.label.clone(),
            });
        }
    }
    if xmax <= xmin {
        xmax = xmin + 1.0;
    }
    if ymax <= ymin {
        ymax = ymin + 1.0;
    }
    let plot_w = WIDTH - MARGIN_L - MARGIN_R;
    let plot_h = HEIGHT - MARGIN_T - MARGIN_B;
    let px = |x: f64| MARGIN_L + (x - xmin) / (xmax - xmin) * plot_w;
    let py = |y: f64| HEIGHT - MARGIN_B - (y - ymin) / (ymax - ymin) * plot_h;

    let mut out = String::new();
    out.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 {WIDTH} {HEIGHT}\">\n"
    ));
    out.push_str("<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n");
    out.push_str(&format!(
        "<text x=\"{:.1}\" y=\"28\" font-family=\"monospace\" font-size=\"16\" text-anchor=\"middle\">{}</text>\n",
        WIDTH / 2.0,
        escape(&axes.title)
    ));
    // frame
    out.push_str(&format!(
        "<rect x=\"{MARGIN_L}\" y=\"{MARGIN_T}\" width=\"{plot_w}\" height=\"{plot_h}\" fill=\"none\" stroke=\"black\"/>\n"
    ));
    // ticks
    for (t, label) in ticks(xmin, xmax, axes.log_x) {
        let x = px(t);
        out.push_str(&format!(
            "<line x1=\"{x:.2}\" y1=\"{:.2}\" x2=\"{x:.2}\" y2=\"{:.2}\" stroke=\"#cccccc\"/>\n",
            MARGIN_T,
            HEIGHT - MARGIN_B
        ));
        out.push_str(&format!(
            "<text x=\"{x:.2}\" y=\"{:.2}\" font-family=\"monospace\" font-size=\"11\" text-anchor=\"middle\">{label}</text>\n",
            HEIGHT - MARGIN_B + 16.0
        ));
    }
    for (t, label) in ticks(ymin, ymax, axes.log_y) {
        let y = py(t);
        out.push_str(&format!(
            "<line x1=\"{MARGIN_L}\" y1=\"{y:.2}\" x2=\"{:.2}\" y2=\"{y:.2}\" stroke=\"#cccccc\"/>\n",
            WIDTH - MARGIN_R
        ));
        out.push_str(&format!(
            "<text x=\"{:.2}\" y=\"{:.2}\" font-family=\"monospace\" font-size=\"11\" text-anchor=\"end\">{label}</text>\n",
            MARGIN_L - 6.0,
            y + 4.0
        ));
    }
    // axis labels
    out.push_str(&format!(
        "<text x=\"{:.1}\" y=\"{:.1}\" font-family=\"monospace\" font-size=\"13\" text-anchor=\"middle\">{}</text>\n",
        MARGIN_L + plot_w / 2.0,
        HEIGHT - 14.0,
        escape(&axes.x_label)
    ));
    out.push_str(&format!(
        "<text x=\"18\" y=\"{:.1}\" font-family=\"monospace\" font-size=\"13\" text-anchor=\"middle\" transform=\"rotate(-90 18 {:.1})\">{}</text>\n",
        MARGIN_T + plot_h / 2.0,
        MARGIN_T + plot_h / 2.0,
        escape(&axes.y_label)
    ));
    // polylines
    for (i, s) in series.iter().enumerate() {
        let color = COLORS[i % COLORS.len()];
        let mut path = String::new();
        for &p in &s.points {
            if usable(s, p) {
                path.push_str(&format!("{:.2},{:.2} ", px(tx(p.0)), py(ty(p.1))));
            }
        }
        out.push_str(&format!(
            "<polyline points=\"{}\" fill=\"none\" stroke=\"{color}\" stroke-width=\"1.5\"/>\n",
            path.trim_end()
        ));
        // legend
        let ly = MARGIN_T + 16.0 + 18.0 * i as f64;
        out.push_str(&format!(
            "<line x1=\"{:.1}\" y1=\"{ly:.1}\" x2=\"{:.1}\" y2=\"{ly:.1}\" stroke=\"{color}\" stroke-width=\"2\"/>\n",
            WIDTH - MARGIN_R - 170.0,
            WIDTH - MARGIN_R - 140.0
        ));
        out.push_str(&format!(
            "<text x=\"{:.1}\" y=\"{:.1}\" font-family=\"monospace\" font-size=\"12\">{}</text>\n",
            WIDTH - MARGIN_R - 132.0,
            ly + 4.0,
            escape(&s.label)
        ));
    }
    out.push_str("</svg>\n");
    Ok(out)
}

/// Tick positions in transformed coordinates with their labels.
fn ticks(lo: f64, hi: f64, log: bool) -> Vec<(f64, String)> {
    if log {
        let first = lo.ceil() as i64;
        let last = hi.floor() as i64;
        let mut out = Vec::new();
        let mut step = 1i64;
        if last - first > 8 {
            step = ((last - first) as f64 / 8.0).ceil() as i64;
        }
        let mut k = first;
        while k <= last {
            out.push((k as f64, format!("1e{k}")));
            k += step;
        }
        if out.is_empty() {
            out.push((lo, format!("{lo:.2}")));
            out.push((hi, format!("{hi:.2}")));
        }
        out
    } else {
        (0..=5)
            .map(|i| {
                let t = lo + (hi - lo) * i as f64 / 5.0;
                (t, format!("{t:.3}"))
            })
            .collect()
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}
