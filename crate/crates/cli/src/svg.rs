//! Minimal self-contained SVG line plots and heatmaps: text output with
//! axes and ticks, no external assets, deterministic formatting.

pub struct Series<'a> {
    pub label: &'a str,
    pub color: &'a str,
    pub points: Vec<(f64, f64)>,
}

pub struct Band {
    pub y0: f64,
    pub y1: f64,
    pub color: &'static str,
}

pub struct Plot<'a> {
    pub title: &'a str,
    pub x_label: &'a str,
    pub y_label: &'a str,
    pub series: Vec<Series<'a>>,
    pub bands: Vec<Band>,
    pub markers: Vec<(f64, f64, &'a str)>,
    pub x_range: Option<(f64, f64)>,
    pub y_range: Option<(f64, f64)>,
}

const W: f64 = 720.0;
const H: f64 = 480.0;
const ML: f64 = 72.0;
const MR: f64 = 24.0;
const MT: f64 = 40.0;
const MB: f64 = 56.0;

fn nice(v: f64) -> String {
    if v == 0.0 {
        return "0".to_string();
    }
    if v.abs() >= 0.01 && v.abs() < 10000.0 {
        let s = format!("{v:.4}");
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        format!("{v:.3e}")
    }
}

impl<'a> Plot<'a> {
    pub fn new(title: &'a str, x_label: &'a str, y_label: &'a str) -> Self {
        Plot {
            title,
            x_label,
            y_label,
            series: Vec::new(),
            bands: Vec::new(),
            markers: Vec::new(),
            x_range: None,
            y_range: None,
        }
    }

    fn ranges(&self) -> ((f64, f64), (f64, f64)) {
        let mut x_min = f64::INFINITY;
        let mut x_max = f64::NEG_INFINITY;
        let mut y_min = f64::INFINITY;
        let mut y_max = f64::NEG_INFINITY;
        for s in &self.series {
            for &(x, y) in &s.points {
                if x.is_finite() && y.is_finite() {
                    x_min = x_min.min(x);
                    x_max = x_max.max(x);
                    y_min = y_min.min(y);
                    y_max = y_max.max(y);
                }
            }
        }
        for b in &self.bands {
            y_min = y_min.min(b.y0);
            y_max = y_max.max(b.y1);
        }
        let (x_min, x_max) = self.x_range.unwrap_or((x_min, x_max));
        let (y_min, mut y_max) = self.y_range.unwrap_or((y_min, y_max));
        if y_max - y_min < 1e-300 {
            y_max = y_min + 1.0;
        }
        let pad = 0.05 * (y_max - y_min);
        ((x_min, x_max), (y_min - pad, y_max + pad))
    }

    pub fn render(&self) -> String {
        let ((x0, x1), (y0, y1)) = self.ranges();
        let px = |x: f64| ML + (x - x0) / (x1 - x0) * (W - ML - MR);
        let py = |y: f64| H - MB - (y - y0) / (y1 - y0) * (H - MT - MB);
        let mut s = String::new();
        s.push_str(&format!(
            "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{W}\" height=\"{H}\" viewBox=\"0 0 {W} {H}\">\n"
        ));
        s.push_str("<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n");
        s.push_str(&format!(
            "<text x=\"{:.1}\" y=\"24\" font-family=\"sans-serif\" font-size=\"16\" text-anchor=\"middle\">{}</text>\n",
            0.5 * W, self.title
        ));
        for b in &self.bands {
            let top = py(b.y1);
            let height = (py(b.y0) - py(b.y1)).abs();
            s.push_str(&format!(
                "<rect x=\"{:.2}\" y=\"{top:.2}\" width=\"{:.2}\" height=\"{height:.2}\" fill=\"{}\" opacity=\"0.35\"/>\n",
                ML,
                W - ML - MR,
                b.color
            ));
        }
        // Axes.
        s.push_str(&format!(
            "<line x1=\"{ML}\" y1=\"{:.1}\" x2=\"{:.1}\" y2=\"{:.1}\" stroke=\"black\"/>\n",
            H - MB,
            W - MR,
            H - MB
        ));
        s.push_str(&format!(
            "<line x1=\"{ML}\" y1=\"{MT}\" x2=\"{ML}\" y2=\"{:.1}\" stroke=\"black\"/>\n",
            H - MB
        ));
        for k in 0..=5 {
            let fx = x0 + (x1 - x0) * k as f64 / 5.0;
            let fy = y0 + (y1 - y0) * k as f64 / 5.0;
            s.push_str(&format!(
                "<line x1=\"{:.2}\" y1=\"{:.1}\" x2=\"{:.2}\" y2=\"{:.1}\" stroke=\"black\"/>\n",
                px(fx),
                H - MB,
                px(fx),
                H - MB + 5.0
            ));
            s.push_str(&format!(
                "<text x=\"{:.2}\" y=\"{:.1}\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"middle\">{}</text>\n",
                px(fx),
                H - MB + 18.0,
                nice(fx)
            ));
            s.push_str(&format!(
                "<line x1=\"{:.1}\" y1=\"{:.2}\" x2=\"{:.1}\" y2=\"{:.2}\" stroke=\"black\"/>\n",
                ML - 5.0,
                py(fy),
                ML,
                py(fy)
            ));
            s.push_str(&format!(
                "<text x=\"{:.1}\" y=\"{:.2}\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"end\">{}</text>\n",
                ML - 8.0,
                py(fy) + 4.0,
                nice(fy)
            ));
        }
        s.push_str(&format!(
            "<text x=\"{:.1}\" y=\"{:.1}\" font-family=\"sans-serif\" font-size=\"13\" text-anchor=\"middle\">{}</text>\n",
            0.5 * W,
            H - 12.0,
            self.x_label
        ));
        s.push_str(&format!(
            "<text x=\"18\" y=\"{:.1}\" font-family=\"sans-serif\" font-size=\"13\" text-anchor=\"middle\" transform=\"rotate(-90 18 {:.1})\">{}</text>\n",
            0.5 * H,
            0.5 * H,
            self.y_label
        ));
        for (i, series) in self.series.iter().enumerate() {
            let mut path = String::new();
            let mut pen_down = false;
            for &(x, y) in &series.points {
                if !(x.is_finite() && y.is_finite()) || x < x0 || x > x1 {
                    pen_down = false;
                    continue;
                }
                path.push_str(&format!(
                    "{}{:.2},{:.2} ",
                    if pen_down { "L" } else { "M" },
                    px(x),
                    py(y.clamp(y0, y1))
                ));
                pen_down = true;
            }
            s.push_str(&format!(
                "<path d=\"{}\" fill=\"none\" stroke=\"{}\" stroke-width=\"1.6\"/>\n",
                path.trim_end(),
                series.color
            ));
            // Legend entry.
            let ly = MT + 16.0 * i as f64 + 6.0;
            s.push_str(&format!(
                "<line x1=\"{:.1}\" y1=\"{ly:.1}\" x2=\"{:.1}\" y2=\"{ly:.1}\" stroke=\"{}\" stroke-width=\"2\"/>\n",
                ML + 10.0,
                ML + 34.0,
                series.color
            ));
            s.push_str(&format!(
                "<text x=\"{:.1}\" y=\"{:.1}\" font-family=\"sans-serif\" font-size=\"12\">{}</text>\n",
                ML + 40.0,
                ly + 4.0,
                series.label
            ));
        }
        for &(x, y, color) in &self.markers {
            s.push_str(&format!(
                "<circle cx=\"{:.2}\" cy=\"{:.2}\" r=\"4\" fill=\"{color}\"/>\n",
                px(x),
                py(y)
            ));
        }
        s.push_str("</svg>\n");
        s
    }
}

/// Diverging blue-white-red fill for a value in [-1, 1].
fn diverging(v: f64) -> String {
    let v = v.clamp(-1.0, 1.0);
    let (r, g, b) = if v < 0.0 {
        let t = 1.0 + v;
        (60.0 + 195.0 * t, 90.0 + 165.0 * t, 255.0)
    } else {
        let t = 1.0 - v;
        (255.0, 90.0 + 165.0 * t, 60.0 + 195.0 * t)
    };
    format!("rgb({},{},{})", r as u8, g as u8, b as u8)
}

/// Polar heatmap of `(r, theta, value)` samples on a regular grid.
pub fn polar_heatmap(title: &str, rows: &[(f64, f64, f64)]) -> String {
    let size = 560.0;
    let center = size / 2.0;
    let r_max = rows.iter().map(|(r, _, _)| *r).fold(0.0_f64, f64::max);
    let v_max = rows.iter().map(|(_, _, v)| v.abs()).fold(0.0_f64, f64::max).max(1e-300);
    let mut radii: Vec<f64> = rows.iter().map(|(r, _, _)| *r).collect();
    radii.sort_by(|a, b| a.partial_cmp(b).unwrap());
    radii.dedup();
    let mut thetas: Vec<f64> = rows.iter().map(|(_, t, _)| *t).collect();
    thetas.sort_by(|a, b| a.partial_cmp(b).unwrap());
    thetas.dedup();
    let dr = if radii.len() > 1 { radii[1] - radii[0] } else { r_max };
    let dt = if thetas.len() > 1 { thetas[1] - thetas[0] } else { std::f64::consts::TAU };
    let scale = (center - 24.0) / r_max;

    let mut s = String::new();
    s.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{size}\" height=\"{size}\" viewBox=\"0 0 {size} {size}\">\n"
    ));
    s.push_str("<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n");
    s.push_str(&format!(
        "<text x=\"{center:.1}\" y=\"20\" font-family=\"sans-serif\" font-size=\"15\" text-anchor=\"middle\">{title}</text>\n"
    ));
    for &(r, theta, v) in rows {
        if r == 0.0 {
            continue;
        }
        let r0 = r * scale;
        let r1 = (r + dr) * scale;
        let (t0, t1) = (theta - 0.5 * dt, theta + 0.5 * dt);
        let (x00, y00) = (center + r0 * t0.cos(), center - r0 * t0.sin());
        let (x01, y01) = (center + r1 * t0.cos(), center - r1 * t0.sin());
        let (x11, y11) = (center + r1 * t1.cos(), center - r1 * t1.sin());
        let (x10, y10) = (center + r0 * t1.cos(), center - r0 * t1.sin());
        s.push_str(&format!(
            "<path d=\"M{x00:.2},{y00:.2} L{x01:.2},{y01:.2} A{r1:.2},{r1:.2} 0 0 0 {x11:.2},{y11:.2} L{x10:.2},{y10:.2} A{r0:.2},{r0:.2} 0 0 1 {x00:.2},{y00:.2} Z\" fill=\"{}\" stroke=\"none\"/>\n",
            diverging(v / v_max)
        ));
    }
    s.push_str("</svg>\n");
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn renders_self_contained_svg() {
        let mut plot = Plot::new("test", "x", "y");
        plot.series.push(Series {
            label: "one",
            color: "#1f77b4",
            points: (0..10).map(|i| (i as f64, (i * i) as f64)).collect(),
        });
        let svg = plot.render();
        assert!(svg.starts_with("<svg"));
        assert!(svg.ends_with("</svg>\n"));
        assert!(!svg.contains("href"));
        // Deterministic.
        assert_eq!(svg, plot.render());
    }
}
