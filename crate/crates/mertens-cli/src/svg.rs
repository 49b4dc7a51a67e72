//! Minimal deterministic single-series SVG line plots.
//!
//! Output is plain SVG markup built from fixed-precision number formatting,
//! so identical inputs yield identical bytes on every run and thread count.
//! No external assets: fonts fall back through generic families, all styling
//! is inline.

/// Canvas and margin geometry (pixels).
const WIDTH: f64 = 960.0;
const HEIGHT: f64 = 540.0;
const MARGIN_LEFT: f64 = 78.0;
const MARGIN_RIGHT: f64 = 24.0;
const MARGIN_TOP: f64 = 46.0;
const MARGIN_BOTTOM: f64 = 58.0;
const TICKS: usize = 6;

/// Formats a tick label: fixed notation in the friendly range, scientific
/// outside it, trailing zeros trimmed.  Pure string manipulation on top of
/// Rust's deterministic float formatting.
fn fmt_tick(v: f64) -> String {
    if v == 0.0 {
        return "0".to_string();
    }
    let a = v.abs();
    let s = if (1e-3..1e7).contains(&a) {
        format!("{v:.6}")
    } else {
        return format!("{v:.3e}");
    };
    let s = s.trim_end_matches('0').trim_end_matches('.');
    s.to_string()
}

fn xml_escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}

/// Renders one series as a line plot with axes, ticks, and labels.
/// Degenerate ranges (single point, constant series) are padded so the
/// geometry stays finite.
pub fn line_plot(title: &str, x_label: &str, y_label: &str, points: &[(f64, f64)]) -> String {
    let (mut x0, mut x1) = (f64::INFINITY, f64::NEG_INFINITY);
    let (mut y0, mut y1) = (f64::INFINITY, f64::NEG_INFINITY);
    for &(x, y) in points {
        x0 = x0.min(x);
        x1 = x1.max(x);
        y0 = y0.min(y);
        y1 = y1.max(y);
    }
    if points.is_empty() {
        (x0, x1, y0, y1) = (0.0, 1.0, 0.0, 1.0);
    }
    if x0 == x1 {
        x0 -= 0.5;
        x1 += 0.5;
    }
    if y0 == y1 {
        y0 -= 0.5;
        y1 += 0.5;
    }
    let pad = 0.05 * (y1 - y0);
    y0 -= pad;
    y1 += pad;

    let plot_w = WIDTH - MARGIN_LEFT - MARGIN_RIGHT;
    let plot_h = HEIGHT - MARGIN_TOP - MARGIN_BOTTOM;
    let sx = |x: f64| MARGIN_LEFT + (x - x0) / (x1 - x0) * plot_w;
    let sy = |y: f64| MARGIN_TOP + (y1 - y) / (y1 - y0) * plot_h;

    let mut out = String::with_capacity(4096 + 16 * points.len());
    out.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 {WIDTH} {HEIGHT}\" \
         width=\"{WIDTH}\" height=\"{HEIGHT}\">\n"
    ));
    out.push_str("<rect width=\"100%\" height=\"100%\" fill=\"#ffffff\"/>\n");
    out.push_str(&format!(
        "<text x=\"{:.1}\" y=\"24\" font-family=\"sans-serif\" font-size=\"16\" \
         text-anchor=\"middle\" fill=\"#111111\">{}</text>\n",
        WIDTH / 2.0,
        xml_escape(title)
    ));

    // Gridlines, ticks, and labels.
    for i in 0..TICKS {
        let f = i as f64 / (TICKS - 1) as f64;
        let xv = x0 + f * (x1 - x0);
        let yv = y0 + f * (y1 - y0);
        let px = sx(xv);
        let py = sy(yv);
        out.push_str(&format!(
            "<line x1=\"{px:.2}\" y1=\"{:.2}\" x2=\"{px:.2}\" y2=\"{:.2}\" \
             stroke=\"#dddddd\" stroke-width=\"1\"/>\n",
            MARGIN_TOP,
            MARGIN_TOP + plot_h
        ));
        out.push_str(&format!(
            "<line x1=\"{:.2}\" y1=\"{py:.2}\" x2=\"{:.2}\" y2=\"{py:.2}\" \
             stroke=\"#dddddd\" stroke-width=\"1\"/>\n",
            MARGIN_LEFT,
            MARGIN_LEFT + plot_w
        ));
        out.push_str(&format!(
            "<text x=\"{px:.2}\" y=\"{:.2}\" font-family=\"sans-serif\" font-size=\"12\" \
             text-anchor=\"middle\" fill=\"#333333\">{}</text>\n",
            MARGIN_TOP + plot_h + 18.0,
            fmt_tick(xv)
        ));
        out.push_str(&format!(
            "<text x=\"{:.2}\" y=\"{:.2}\" font-family=\"sans-serif\" font-size=\"12\" \
             text-anchor=\"end\" fill=\"#333333\">{}</text>\n",
            MARGIN_LEFT - 8.0,
            py + 4.0,
            fmt_tick(yv)
        ));
    }

    // Axes on top of the grid.
    out.push_str(&format!(
        "<line x1=\"{l:.2}\" y1=\"{b:.2}\" x2=\"{r:.2}\" y2=\"{b:.2}\" \
         stroke=\"#222222\" stroke-width=\"1.5\"/>\n\
         <line x1=\"{l:.2}\" y1=\"{t:.2}\" x2=\"{l:.2}\" y2=\"{b:.2}\" \
         stroke=\"#222222\" stroke-width=\"1.5\"/>\n",
        l = MARGIN_LEFT,
        r = MARGIN_LEFT + plot_w,
        t = MARGIN_TOP,
        b = MARGIN_TOP + plot_h
    ));
    out.push_str(&format!(
        "<text x=\"{:.1}\" y=\"{:.1}\" font-family=\"sans-serif\" font-size=\"13\" \
         text-anchor=\"middle\" fill=\"#111111\">{}</text>\n",
        MARGIN_LEFT + plot_w / 2.0,
        HEIGHT - 14.0,
        xml_escape(x_label)
    ));
    out.push_str(&format!(
        "<text x=\"20\" y=\"{:.1}\" font-family=\"sans-serif\" font-size=\"13\" \
         text-anchor=\"middle\" fill=\"#111111\" transform=\"rotate(-90 20 {:.1})\">{}</text>\n",
        MARGIN_TOP + plot_h / 2.0,
        MARGIN_TOP + plot_h / 2.0,
        xml_escape(y_label)
    ));

    if !points.is_empty() {
        out.push_str("<polyline fill=\"none\" stroke=\"#1f6feb\" stroke-width=\"1.5\" points=\"");
        for (i, &(x, y)) in points.iter().enumerate() {
            if i > 0 {
                out.push(' ');
            }
            out.push_str(&format!("{:.2},{:.2}", sx(x), sy(y)));
        }
        out.push_str("\"/>\n");
    }
    out.push_str("</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn structure_and_determinism() {
        let pts: Vec<(f64, f64)> = (0..100)
            .map(|i| (i as f64, (i as f64 * 0.1).sin()))
            .collect();
        let a = line_plot("E_K(x) vs log x", "log x", "E_K", &pts);
        let b = line_plot("E_K(x) vs log x", "log x", "E_K", &pts);
        assert_eq!(a, b);
        assert!(a.starts_with("<svg"));
        assert!(a.contains("polyline"));
        assert!(a.contains("E_K(x) vs log x"));
        assert!(a.ends_with("</svg>\n"));
        // no external references of any kind
        assert!(!a.contains("http://") || a.contains("xmlns=\"http://www.w3.org/2000/svg\""));
        assert!(!a.contains("href"));
    }

    #[test]
    fn degenerate_inputs_render() {
        let one = line_plot("t", "x", "y", &[(2.0, 3.0)]);
        assert!(one.contains("polyline"));
        let flat = line_plot("t", "x", "y", &[(0.0, 1.0), (1.0, 1.0)]);
        assert!(flat.contains("polyline"));
        let empty = line_plot("t", "x", "y", &[]);
        assert!(empty.contains("<svg"));
        assert!(!empty.contains("polyline"));
    }

    #[test]
    fn tick_formats() {
        assert_eq!(fmt_tick(0.0), "0");
        assert_eq!(fmt_tick(2.5), "2.5");
        assert_eq!(fmt_tick(-14.0), "-14");
        assert_eq!(fmt_tick(1.0e8), "1.000e8");
        assert!(fmt_tick(1.0e-9).contains('e'));
        // titles with markup characters are escaped
        assert_eq!(xml_escape("a < b & c"), "a &lt; b &amp; c");
    }
}
