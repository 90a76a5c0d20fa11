//! Minimal SVG line plots.

const W: f64 = 640.0;
const H: f64 = 400.0;
const PAD: f64 = 56.0;

/// One polyline of `(x, y)` points with linear axes, or `log10 y` when
/// `log_y` is set (nonpositive values dropped).
pub fn line_plot(title: &str, x_label: &str, y_label: &str, points: &[(f64, f64)], log_y: bool) -> String {
    let pts: Vec<(f64, f64)> = points
        .iter()
        .filter(|(x, y)| x.is_finite() && y.is_finite() && (!log_y || *y > 0.0))
        .map(|&(x, y)| (x, if log_y { y.log10() } else { y }))
        .collect();
    let mut s = format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{W}\" height=\"{H}\" viewBox=\"0 0 {W} {H}\">\n\
         <rect width=\"{W}\" height=\"{H}\" fill=\"white\"/>\n\
         <text x=\"{}\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"15\">{}</text>\n",
        W / 2.0,
        escape(title)
    );
    let (x0, x1) = span(pts.iter().map(|p| p.0));
    let (y0, y1) = span(pts.iter().map(|p| p.1));
    let sx = |x: f64| PAD + (x - x0) / (x1 - x0) * (W - 2.0 * PAD);
    let sy = |y: f64| H - PAD - (y - y0) / (y1 - y0) * (H - 2.0 * PAD);
    s.push_str(&format!(
        "<path d=\"M{PAD} {PAD} V{} H{}\" fill=\"none\" stroke=\"black\"/>\n",
        H - PAD,
        W - PAD
    ));
    let ylab = if log_y { format!("log10 {y_label}") } else { y_label.to_string() };
    for (v, anchor, x, y) in [
        (x0, "start", PAD, H - PAD + 18.0),
        (x1, "end", W - PAD, H - PAD + 18.0),
    ] {
        s.push_str(&tick(&fmt(v), anchor, x, y));
    }
    for (v, y) in [(y0, H - PAD), (y1, PAD)] {
        s.push_str(&tick(&fmt(v), "end", PAD - 6.0, y + 4.0));
    }
    s.push_str(&tick(&escape(x_label), "middle", W / 2.0, H - 12.0));
    s.push_str(&format!(
        "<text x=\"16\" y=\"{}\" transform=\"rotate(-90 16 {})\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">{}</text>\n",
        H / 2.0,
        H / 2.0,
        escape(&ylab)
    ));
    if !pts.is_empty() {
        let coords: Vec<String> = pts.iter().map(|&(x, y)| format!("{:.2},{:.2}", sx(x), sy(y))).collect();
        s.push_str(&format!(
            "<polyline points=\"{}\" fill=\"none\" stroke=\"#1f5fa8\" stroke-width=\"1.5\"/>\n",
            coords.join(" ")
        ));
    }
    s.push_str("</svg>\n");
    s
}

fn span(values: impl Iterator<Item = f64>) -> (f64, f64) {
    let (lo, hi) = values.fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), v| (a.min(v), b.max(v)));
    if !lo.is_finite() {
        (0.0, 1.0)
    } else if hi - lo < 1e-300 {
        (lo - 0.5, hi + 0.5)
    } else {
        (lo, hi)
    }
}

fn tick(text: &str, anchor: &str, x: f64, y: f64) -> String {
    format!(
        "<text x=\"{x:.1}\" y=\"{y:.1}\" text-anchor=\"{anchor}\" font-family=\"sans-serif\" font-size=\"11\">{text}</text>\n"
    )
}

fn fmt(v: f64) -> String {
    if v != 0.0 && (v.abs() < 1e-3 || v.abs() >= 1e4) {
        format!("{v:.2e}")
    } else {
        format!("{v:.3}")
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn plot_is_well_formed() {
        let s = line_plot("R <along> Γ", "s", "R", &[(0.0, 1.0), (1.0, 0.5), (2.0, 0.25)], false);
        assert!(s.starts_with("<svg") && s.ends_with("</svg>\n"));
        assert!(s.contains("R &lt;along&gt; Γ"));
        assert_eq!(s.matches("<polyline").count(), 1);
        let log = line_plot("r", "k", "res", &[(0.0, 1.0), (1.0, 0.0), (2.0, 1e-3)], true);
        assert!(log.contains("log10 res"));
        // a single finite point still plots
        assert!(line_plot("", "", "", &[(1.0, 1.0)], false).contains("<polyline"));
    }
}
