//! Static SVG charts for the analysis outputs. No styling dependencies;
//! the charts are plain standalone documents.

/// Colors cycled across series.
const PALETTE: [&str; 6] = [
    "#4c78a8", "#f58518", "#54a24b", "#e45756", "#72b7b2", "#b279a2",
];

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 400.0;
const MARGIN_L: f64 = 60.0;
const MARGIN_R: f64 = 20.0;
const MARGIN_T: f64 = 40.0;
const MARGIN_B: f64 = 50.0;

fn header(title: &str) -> String {
    format!(
        concat!(
            "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w}\" height=\"{h}\" ",
            "viewBox=\"0 0 {w} {h}\" font-family=\"sans-serif\" font-size=\"12\">\n",
            "<rect width=\"{w}\" height=\"{h}\" fill=\"white\"/>\n",
            "<text x=\"{cx}\" y=\"24\" text-anchor=\"middle\" font-size=\"16\">{title}</text>\n"
        ),
        w = WIDTH,
        h = HEIGHT,
        cx = WIDTH / 2.0,
        title = escape(title),
    )
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}

/// Vertical bar chart over labeled fractions/values in `[0, max]`.
pub fn bar_chart(title: &str, bars: &[(String, f64)]) -> String {
    let mut out = header(title);
    let plot_w = WIDTH - MARGIN_L - MARGIN_R;
    let plot_h = HEIGHT - MARGIN_T - MARGIN_B;
    let max = bars
        .iter()
        .map(|(_, v)| *v)
        .fold(0.0_f64, f64::max)
        .max(1e-9);
    let slot = plot_w / bars.len().max(1) as f64;
    let bar_w = slot * 0.6;

    for tick in 0..=4 {
        let frac = tick as f64 / 4.0;
        let y = MARGIN_T + plot_h * (1.0 - frac);
        out.push_str(&format!(
            "<line x1=\"{x1}\" y1=\"{y:.1}\" x2=\"{x2}\" y2=\"{y:.1}\" stroke=\"#ddd\"/>\n",
            x1 = MARGIN_L,
            x2 = WIDTH - MARGIN_R,
        ));
        out.push_str(&format!(
            "<text x=\"{x}\" y=\"{ty:.1}\" text-anchor=\"end\">{v:.2}</text>\n",
            x = MARGIN_L - 6.0,
            ty = y + 4.0,
            v = max * frac,
        ));
    }
    for (i, (label, value)) in bars.iter().enumerate() {
        let h = plot_h * (value / max);
        let x = MARGIN_L + slot * i as f64 + (slot - bar_w) / 2.0;
        let y = MARGIN_T + plot_h - h;
        let color = PALETTE[i % PALETTE.len()];
        out.push_str(&format!(
            "<rect x=\"{x:.1}\" y=\"{y:.1}\" width=\"{bar_w:.1}\" height=\"{h:.1}\" fill=\"{color}\"/>\n"
        ));
        out.push_str(&format!(
            "<text x=\"{cx:.1}\" y=\"{ly:.1}\" text-anchor=\"middle\">{t}</text>\n",
            cx = x + bar_w / 2.0,
            ly = MARGIN_T + plot_h + 16.0,
            t = escape(label),
        ));
        out.push_str(&format!(
            "<text x=\"{cx:.1}\" y=\"{vy:.1}\" text-anchor=\"middle\" font-size=\"10\">{value:.3}</text>\n",
            cx = x + bar_w / 2.0,
            vy = y - 4.0,
        ));
    }
    out.push_str("</svg>\n");
    out
}

/// Multi-series line chart over points in `[0,1] x [0,1]` (fractions).
pub fn line_chart(title: &str, series: &[(String, Vec<(f64, f64)>)]) -> String {
    let mut out = header(title);
    let plot_w = WIDTH - MARGIN_L - MARGIN_R;
    let plot_h = HEIGHT - MARGIN_T - MARGIN_B;
    let sx = |x: f64| MARGIN_L + plot_w * x;
    let sy = |y: f64| MARGIN_T + plot_h * (1.0 - y);

    for tick in 0..=4 {
        let frac = tick as f64 / 4.0;
        out.push_str(&format!(
            "<line x1=\"{x1}\" y1=\"{y:.1}\" x2=\"{x2}\" y2=\"{y:.1}\" stroke=\"#ddd\"/>\n",
            x1 = MARGIN_L,
            x2 = WIDTH - MARGIN_R,
            y = sy(frac),
        ));
        out.push_str(&format!(
            "<text x=\"{x}\" y=\"{ty:.1}\" text-anchor=\"end\">{frac:.2}</text>\n",
            x = MARGIN_L - 6.0,
            ty = sy(frac) + 4.0,
        ));
        out.push_str(&format!(
            "<text x=\"{tx:.1}\" y=\"{y}\" text-anchor=\"middle\">{frac:.2}</text>\n",
            tx = sx(frac),
            y = HEIGHT - MARGIN_B + 18.0,
        ));
    }
    for (i, (name, points)) in series.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        let path: Vec<String> = points
            .iter()
            .map(|(x, y)| format!("{:.2},{:.2}", sx(*x), sy(*y)))
            .collect();
        out.push_str(&format!(
            "<polyline points=\"{}\" fill=\"none\" stroke=\"{color}\" stroke-width=\"2\"/>\n",
            path.join(" ")
        ));
        out.push_str(&format!(
            "<text x=\"{x}\" y=\"{y}\" fill=\"{color}\">{t}</text>\n",
            x = MARGIN_L + 8.0,
            y = MARGIN_T + 16.0 * (i + 1) as f64,
            t = escape(name),
        ));
    }
    out.push_str("</svg>\n");
    out
}
