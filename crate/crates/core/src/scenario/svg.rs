//! Minimal deterministic SVG charts. Coordinates are printed with fixed
//! precision so identical data gives identical bytes.

use std::fmt::Write;

const WIDTH: f64 = 720.0;
const HEIGHT: f64 = 440.0;
const LEFT: f64 = 80.0;
const RIGHT: f64 = 160.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 60.0;
const PALETTE: [&str; 8] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#e377c2", "#17becf",
];

#[derive(Debug, Clone, PartialEq)]
pub struct Series {
    pub label: String,
    pub points: Vec<(f64, f64)>,
}

impl Series {
    pub fn new(label: impl Into<String>, points: Vec<(f64, f64)>) -> Self {
        Self {
            label: label.into(),
            points,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Chart {
    pub title: String,
    pub x_label: String,
    pub y_label: String,
    pub log_y: bool,
}

impl Chart {
    pub fn new(title: &str, x_label: &str, y_label: &str) -> Self {
        Self {
            title: title.into(),
            x_label: x_label.into(),
            y_label: y_label.into(),
            log_y: false,
        }
    }

    pub fn log_y(mut self) -> Self {
        self.log_y = true;
        self
    }

    fn y_value(&self, y: f64) -> Option<f64> {
        if self.log_y {
            (y > 0.0).then(|| y.log10())
        } else {
            Some(y)
        }
    }

    fn frame(&self, out: &mut String) {
        let _ = writeln!(
            out,
            r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
        );
        let _ = writeln!(out, r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#);
        let _ = writeln!(
            out,
            r#"<text x="{:.1}" y="24" text-anchor="middle" font-size="15">{}</text>"#,
            (LEFT + WIDTH - RIGHT) / 2.0,
            escape(&self.title)
        );
        let _ = writeln!(
            out,
            r#"<text x="{:.1}" y="{:.1}" text-anchor="middle">{}</text>"#,
            (LEFT + WIDTH - RIGHT) / 2.0,
            HEIGHT - 16.0,
            escape(&self.x_label)
        );
        let y_label = if self.log_y {
            format!("log10 {}", self.y_label)
        } else {
            self.y_label.clone()
        };
        let _ = writeln!(
            out,
            r#"<text x="18" y="{:.1}" text-anchor="middle" transform="rotate(-90 18 {:.1})">{}</text>"#,
            (TOP + HEIGHT - BOTTOM) / 2.0,
            (TOP + HEIGHT - BOTTOM) / 2.0,
            escape(&y_label)
        );
        let _ = writeln!(
            out,
            r#"<rect x="{LEFT}" y="{TOP}" width="{:.1}" height="{:.1}" fill="none" stroke="black"/>"#,
            WIDTH - LEFT - RIGHT,
            HEIGHT - TOP - BOTTOM
        );
    }

    fn legend(out: &mut String, labels: &[&str]) {
        for (i, label) in labels.iter().enumerate() {
            let y = TOP + 14.0 + 18.0 * i as f64;
            let x = WIDTH - RIGHT + 12.0;
            let _ = writeln!(
                out,
                r#"<rect x="{x:.1}" y="{:.1}" width="12" height="12" fill="{}"/><text x="{:.1}" y="{y:.1}">{}</text>"#,
                y - 10.0,
                PALETTE[i % PALETTE.len()],
                x + 18.0,
                escape(label)
            );
        }
    }

    /// Line chart of every series on shared axes.
    pub fn lines(&self, series: &[Series]) -> String {
        let points: Vec<(f64, f64)> = series
            .iter()
            .flat_map(|s| s.points.iter().filter_map(|&(x, y)| Some((x, self.y_value(y)?))))
            .filter(|(x, y)| x.is_finite() && y.is_finite())
            .collect();
        let x_range = span(points.iter().map(|p| p.0));
        let y_range = span(points.iter().map(|p| p.1));
        let mut out = String::new();
        self.frame(&mut out);
        axis_ticks(&mut out, x_range, y_range);
        for (i, s) in series.iter().enumerate() {
            let path: Vec<String> = s
                .points
                .iter()
                .filter_map(|&(x, y)| Some((x, self.y_value(y)?)))
                .filter(|(x, y)| x.is_finite() && y.is_finite())
                .map(|(x, y)| format!("{:.2},{:.2}", px(x, x_range), py(y, y_range)))
                .collect();
            let _ = writeln!(
                out,
                r#"<polyline fill="none" stroke="{}" stroke-width="1.8" points="{}"/>"#,
                PALETTE[i % PALETTE.len()],
                path.join(" ")
            );
        }
        let labels: Vec<&str> = series.iter().map(|s| s.label.as_str()).collect();
        Self::legend(&mut out, &labels);
        out.push_str("</svg>\n");
        out
    }

    /// Grouped bars: one group per category, one bar per series value.
    pub fn bars(&self, categories: &[String], series: &[(String, Vec<f64>)]) -> String {
        let values: Vec<f64> = series
            .iter()
            .flat_map(|(_, v)| v.iter().filter_map(|&y| self.y_value(y)))
            .filter(|y| y.is_finite())
            .collect();
        let (lo, hi) = span(values.iter().copied().chain([0.0]));
        let y_range = (lo.min(0.0), hi);
        let mut out = String::new();
        self.frame(&mut out);
        axis_ticks(&mut out, (0.0, 0.0), y_range);
        let plot_w = WIDTH - LEFT - RIGHT;
        let group_w = plot_w / categories.len().max(1) as f64;
        let bar_w = 0.8 * group_w / series.len().max(1) as f64;
        for (c, category) in categories.iter().enumerate() {
            let x0 = LEFT + group_w * c as f64 + 0.1 * group_w;
            for (s, (_, data)) in series.iter().enumerate() {
                let Some(y) = data.get(c).and_then(|&v| self.y_value(v)).filter(|v| v.is_finite())
                else {
                    continue;
                };
                let (top, base) = (py(y.max(0.0), y_range), py(y.min(0.0), y_range));
                let _ = writeln!(
                    out,
                    r#"<rect x="{:.2}" y="{:.2}" width="{:.2}" height="{:.2}" fill="{}"/>"#,
                    x0 + bar_w * s as f64,
                    top,
                    bar_w,
                    (base - top).max(0.0),
                    PALETTE[s % PALETTE.len()]
                );
            }
            let _ = writeln!(
                out,
                r#"<text x="{:.2}" y="{:.1}" text-anchor="middle">{}</text>"#,
                LEFT + group_w * (c as f64 + 0.5),
                HEIGHT - BOTTOM + 16.0,
                escape(category)
            );
        }
        let labels: Vec<&str> = series.iter().map(|(l, _)| l.as_str()).collect();
        Self::legend(&mut out, &labels);
        out.push_str("</svg>\n");
        out
    }
}

fn span(values: impl Iterator<Item = f64>) -> (f64, f64) {
    let (lo, hi) = values.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| {
        (lo.min(v), hi.max(v))
    });
    if !lo.is_finite() {
        (0.0, 1.0)
    } else if hi - lo < 1e-12 * hi.abs().max(1.0) {
        (lo - 0.5, hi + 0.5)
    } else {
        (lo, hi)
    }
}

fn px(x: f64, (lo, hi): (f64, f64)) -> f64 {
    LEFT + (x - lo) / (hi - lo) * (WIDTH - LEFT - RIGHT)
}

fn py(y: f64, (lo, hi): (f64, f64)) -> f64 {
    HEIGHT - BOTTOM - (y - lo) / (hi - lo) * (HEIGHT - TOP - BOTTOM)
}

fn axis_ticks(out: &mut String, x_range: (f64, f64), y_range: (f64, f64)) {
    for i in 0..=4 {
        let f = i as f64 / 4.0;
        let y = y_range.0 + f * (y_range.1 - y_range.0);
        let _ = writeln!(
            out,
            r#"<text x="{:.1}" y="{:.2}" text-anchor="end">{}</text>"#,
            LEFT - 6.0,
            py(y, y_range) + 4.0,
            tick(y)
        );
        if x_range.1 > x_range.0 {
            let x = x_range.0 + f * (x_range.1 - x_range.0);
            let _ = writeln!(
                out,
                r#"<text x="{:.2}" y="{:.1}" text-anchor="middle">{}</text>"#,
                px(x, x_range),
                HEIGHT - BOTTOM + 16.0,
                tick(x)
            );
        }
    }
}

fn tick(v: f64) -> String {
    if v != 0.0 && (v.abs() >= 1e5 || v.abs() < 1e-2) {
        format!("{v:.2e}")
    } else {
        format!("{v:.2}")
    }
}

fn escape(text: &str) -> String {
    text.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn line_chart_is_deterministic_and_well_formed() {
        let series = vec![Series::new("a<b", vec![(0.0, 1.0), (1.0, 10.0), (2.0, 100.0)])];
        let chart = Chart::new("growth", "year", "Y").log_y();
        let svg = chart.lines(&series);
        assert_eq!(svg, chart.lines(&series));
        assert!(svg.starts_with("<svg") && svg.ends_with("</svg>\n"));
        assert!(svg.contains("a&lt;b"));
        assert_eq!(svg.matches("<polyline").count(), 1);
    }

    #[test]
    fn bar_chart_draws_one_rect_per_value() {
        let svg = Chart::new("t", "f", "m").bars(
            &["0.05".into(), "0.1".into()],
            &[("x".into(), vec![1.0, 2.0]), ("y".into(), vec![3.0, 4.0])],
        );
        // background, frame, two legend swatches, four bars
        assert_eq!(svg.matches("<rect").count(), 8);
    }
}
