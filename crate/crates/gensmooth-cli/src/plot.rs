//! Minimal static SVG plots: polyline charts and histograms. Output is
//! self-contained, with inline styling only.

use std::fmt::Write;

const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 500.0;
const LEFT: f64 = 70.0;
const RIGHT: f64 = 770.0;
const TOP: f64 = 50.0;
const BOTTOM: f64 = 450.0;

const PALETTE: [&str; 6] = [
    "#1f6fb4", "#c23b3b", "#2e8b57", "#8a5cad", "#d58c2a", "#4f666a",
];

pub struct Series {
    pub label: String,
    pub points: Vec<(f64, f64)>,
}

struct Axis {
    lo: f64,
    hi: f64,
    log: bool,
}

impl Axis {
    fn fit(values: impl Iterator<Item = f64>, log: bool) -> Self {
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for v in values {
            let v = if log { v.log10() } else { v };
            if v.is_finite() {
                lo = lo.min(v);
                hi = hi.max(v);
            }
        }
        if !lo.is_finite() || !hi.is_finite() {
            lo = 0.0;
            hi = 1.0;
        }
        if hi - lo < 1e-12 {
            lo -= 0.5;
            hi += 0.5;
        }
        let pad = 0.04 * (hi - lo);
        Self {
            lo: lo - pad,
            hi: hi + pad,
            log,
        }
    }

    fn place(&self, v: f64, px_lo: f64, px_hi: f64) -> Option<f64> {
        let v = if self.log { v.log10() } else { v };
        if !v.is_finite() {
            return None;
        }
        Some(px_lo + (v - self.lo) / (self.hi - self.lo) * (px_hi - px_lo))
    }

    fn ticks(&self) -> Vec<(f64, String)> {
        (0..=4)
            .map(|i| {
                let v = self.lo + (self.hi - self.lo) * i as f64 / 4.0;
                let shown = if self.log { 10f64.powf(v) } else { v };
                (v, tick_label(shown))
            })
            .collect()
    }

    fn from_tick(&self, tick: f64, px_lo: f64, px_hi: f64) -> f64 {
        px_lo + (tick - self.lo) / (self.hi - self.lo) * (px_hi - px_lo)
    }
}

fn tick_label(v: f64) -> String {
    if v == 0.0 {
        return "0".to_owned();
    }
    let magnitude = v.abs();
    if (1e-3..1e5).contains(&magnitude) {
        let mut text = format!("{v:.3}");
        while text.contains('.') && (text.ends_with('0') || text.ends_with('.')) {
            text.pop();
        }
        text
    } else {
        format!("{v:.2e}")
    }
}

fn header(title: &str) -> String {
    let mut svg = String::new();
    let _ = write!(
        svg,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 {WIDTH} {HEIGHT}\" \
         font-family=\"sans-serif\" font-size=\"13\">\n\
         <rect width=\"{WIDTH}\" height=\"{HEIGHT}\" fill=\"white\"/>\n\
         <text x=\"{}\" y=\"26\" text-anchor=\"middle\" font-size=\"16\">{}</text>\n",
        WIDTH / 2.0,
        escape(title)
    );
    svg
}

fn frame(svg: &mut String, x: &Axis, y: &Axis, x_label: &str, y_label: &str) {
    let _ = write!(
        svg,
        "<rect x=\"{LEFT}\" y=\"{TOP}\" width=\"{}\" height=\"{}\" fill=\"none\" \
         stroke=\"#999\"/>\n",
        RIGHT - LEFT,
        BOTTOM - TOP
    );
    for (tick, label) in x.ticks() {
        let px = x.from_tick(tick, LEFT, RIGHT);
        let _ = write!(
            svg,
            "<line x1=\"{px:.2}\" y1=\"{BOTTOM}\" x2=\"{px:.2}\" y2=\"{}\" stroke=\"#999\"/>\n\
             <text x=\"{px:.2}\" y=\"{}\" text-anchor=\"middle\">{label}</text>\n",
            BOTTOM + 5.0,
            BOTTOM + 20.0
        );
    }
    for (tick, label) in y.ticks() {
        let py = y.from_tick(tick, BOTTOM, TOP);
        let _ = write!(
            svg,
            "<line x1=\"{}\" y1=\"{py:.2}\" x2=\"{LEFT}\" y2=\"{py:.2}\" stroke=\"#999\"/>\n\
             <text x=\"{}\" y=\"{:.2}\" text-anchor=\"end\">{label}</text>\n",
            LEFT - 5.0,
            LEFT - 9.0,
            py + 4.0
        );
    }
    let _ = write!(
        svg,
        "<text x=\"{}\" y=\"{}\" text-anchor=\"middle\">{}</text>\n\
         <text x=\"18\" y=\"{}\" text-anchor=\"middle\" transform=\"rotate(-90 18 {})\">{}</text>\n",
        (LEFT + RIGHT) / 2.0,
        HEIGHT - 8.0,
        escape(x_label),
        (TOP + BOTTOM) / 2.0,
        (TOP + BOTTOM) / 2.0,
        escape(y_label)
    );
}

/// Polyline chart. Log axes skip points that do not fit on them.
pub fn line_plot(
    title: &str,
    x_label: &str,
    y_label: &str,
    series: &[Series],
    log_x: bool,
    log_y: bool,
) -> String {
    let x = Axis::fit(
        series.iter().flat_map(|s| s.points.iter().map(|p| p.0)),
        log_x,
    );
    let y = Axis::fit(
        series.iter().flat_map(|s| s.points.iter().map(|p| p.1)),
        log_y,
    );
    let mut svg = header(title);
    frame(&mut svg, &x, &y, x_label, y_label);
    for (i, s) in series.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        let mut path = String::new();
        for &(px, py) in &s.points {
            if let (Some(cx), Some(cy)) = (x.place(px, LEFT, RIGHT), y.place(py, BOTTOM, TOP)) {
                let _ = write!(path, "{cx:.2},{cy:.2} ");
            }
        }
        let _ = write!(
            svg,
            "<polyline points=\"{}\" fill=\"none\" stroke=\"{color}\" stroke-width=\"1.6\"/>\n",
            path.trim_end()
        );
        let _ = write!(
            svg,
            "<text x=\"{}\" y=\"{:.2}\" fill=\"{color}\">{}</text>\n",
            RIGHT - 180.0,
            TOP + 18.0 + 18.0 * i as f64,
            escape(&s.label)
        );
    }
    svg.push_str("</svg>\n");
    svg
}

/// Histogram of a sample, with a fixed bin count over the data range.
pub fn histogram(title: &str, x_label: &str, values: &[f64], bins: usize) -> String {
    let finite: Vec<f64> = values.iter().copied().filter(|v| v.is_finite()).collect();
    let (lo, hi) = finite
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| {
            (lo.min(v), hi.max(v))
        });
    let (lo, hi) = if !lo.is_finite() || hi - lo < 1e-12 {
        (lo.min(0.0) - 0.5, hi.max(0.0) + 0.5)
    } else {
        (lo, hi)
    };
    let bins = bins.max(1);
    let mut counts = vec![0usize; bins];
    for &v in &finite {
        let idx = (((v - lo) / (hi - lo)) * bins as f64) as usize;
        counts[idx.min(bins - 1)] += 1;
    }
    let top = counts.iter().copied().max().unwrap_or(1).max(1) as f64;
    let x = Axis {
        lo,
        hi,
        log: false,
    };
    let y = Axis {
        lo: 0.0,
        hi: top * 1.05,
        log: false,
    };
    let mut svg = header(title);
    frame(&mut svg, &x, &y, x_label, "count");
    let bar = (RIGHT - LEFT) / bins as f64;
    for (i, &count) in counts.iter().enumerate() {
        if count == 0 {
            continue;
        }
        let x0 = LEFT + bar * i as f64;
        let h = count as f64 / y.hi * (BOTTOM - TOP);
        let _ = write!(
            svg,
            "<rect x=\"{:.2}\" y=\"{:.2}\" width=\"{:.2}\" height=\"{h:.2}\" \
             fill=\"#1f6fb4\" stroke=\"white\" stroke-width=\"0.5\"/>\n",
            x0,
            BOTTOM - h,
            bar
        );
    }
    svg.push_str("</svg>\n");
    svg
}

fn escape(text: &str) -> String {
    text.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
