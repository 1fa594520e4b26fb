//! Minimal SVG scatter plots: denotation projections of Lab space and the
//! context ease vs. informativeness scatter. Output is plain text with fixed
//! styling and fixed float precision so reruns are byte-identical.

use std::fmt::Write as _;

use crate::colorspace::LabColor;

const PALETTE: [&str; 6] = [
    "#1f4e9c", "#c0392b", "#1e8449", "#7d3c98", "#b9770e", "#17202a",
];

#[derive(Debug, Clone, Copy)]
enum Marker {
    Circle,
    Square,
    Triangle,
}

impl Marker {
    fn nth(i: usize) -> Self {
        match i % 3 {
            0 => Marker::Circle,
            1 => Marker::Square,
            _ => Marker::Triangle,
        }
    }

    fn draw(self, out: &mut String, x: f64, y: f64, r: f64, fill: &str, stroke: &str) {
        let _ = match self {
            Marker::Circle => writeln!(
                out,
                r#"<circle cx="{x:.2}" cy="{y:.2}" r="{r:.2}" fill="{fill}" stroke="{stroke}" stroke-width="0.8"/>"#
            ),
            Marker::Square => writeln!(
                out,
                r#"<rect x="{:.2}" y="{:.2}" width="{:.2}" height="{:.2}" fill="{fill}" stroke="{stroke}" stroke-width="0.8"/>"#,
                x - r,
                y - r,
                2.0 * r,
                2.0 * r
            ),
            Marker::Triangle => writeln!(
                out,
                r#"<polygon points="{:.2},{:.2} {:.2},{:.2} {:.2},{:.2}" fill="{fill}" stroke="{stroke}" stroke-width="0.8"/>"#,
                x,
                y - r * 1.2,
                x - r * 1.1,
                y + r * 0.8,
                x + r * 1.1,
                y + r * 0.8
            ),
        };
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

/// Round step sizes of 1, 2 or 5 times a power of ten.
fn nice_ticks(lo: f64, hi: f64, target: usize) -> Vec<f64> {
    let span = hi - lo;
    if !(span.is_finite() && span > 0.0) {
        return vec![lo];
    }
    let raw = span / target.max(1) as f64;
    let mag = 10f64.powf(raw.log10().floor());
    let step = [1.0, 2.0, 5.0, 10.0]
        .iter()
        .map(|m| m * mag)
        .find(|s| *s >= raw)
        .unwrap_or(10.0 * mag);
    let first = (lo / step).ceil() as i64;
    let last = (hi / step).floor() as i64;
    (first..=last).map(|i| i as f64 * step).collect()
}

fn tick_label(v: f64) -> String {
    let s = format!("{v:.2}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" {
        "0".to_string()
    } else {
        s.to_string()
    }
}

#[derive(Debug, Clone, Copy)]
struct Frame {
    left: f64,
    top: f64,
    width: f64,
    height: f64,
    x: (f64, f64),
    y: (f64, f64),
}

impl Frame {
    fn px(&self, v: f64) -> f64 {
        self.left + (v - self.x.0) / (self.x.1 - self.x.0) * self.width
    }

    fn py(&self, v: f64) -> f64 {
        self.top + self.height - (v - self.y.0) / (self.y.1 - self.y.0) * self.height
    }

    fn axes(&self, out: &mut String, x_label: &str, y_label: &str, x_ticks: bool) {
        let _ = writeln!(
            out,
            r##"<rect x="{:.2}" y="{:.2}" width="{:.2}" height="{:.2}" fill="none" stroke="#444" stroke-width="1"/>"##,
            self.left, self.top, self.width, self.height
        );
        if x_ticks {
            for t in nice_ticks(self.x.0, self.x.1, 6) {
                let x = self.px(t);
                let y = self.top + self.height;
                let _ = writeln!(
                    out,
                    r##"<line x1="{x:.2}" y1="{y:.2}" x2="{x:.2}" y2="{:.2}" stroke="#444"/><text x="{x:.2}" y="{:.2}" font-size="10" text-anchor="middle">{}</text>"##,
                    y + 4.0,
                    y + 15.0,
                    tick_label(t)
                );
            }
        }
        for t in nice_ticks(self.y.0, self.y.1, 6) {
            let y = self.py(t);
            let _ = writeln!(
                out,
                r##"<line x1="{:.2}" y1="{y:.2}" x2="{:.2}" y2="{y:.2}" stroke="#444"/><text x="{:.2}" y="{:.2}" font-size="10" text-anchor="end">{}</text>"##,
                self.left - 4.0,
                self.left,
                self.left - 6.0,
                y + 3.5,
                tick_label(t)
            );
        }
        let _ = writeln!(
            out,
            r#"<text x="{:.2}" y="{:.2}" font-size="12" text-anchor="middle">{}</text>"#,
            self.left + self.width / 2.0,
            self.top + self.height + 32.0,
            escape(x_label)
        );
        let cx = self.left - 40.0;
        let cy = self.top + self.height / 2.0;
        let _ = writeln!(
            out,
            r#"<text x="{cx:.2}" y="{cy:.2}" font-size="12" text-anchor="middle" transform="rotate(-90 {cx:.2} {cy:.2})">{}</text>"#,
            escape(y_label)
        );
    }
}

fn padded_range(values: impl Iterator<Item = f64>) -> (f64, f64) {
    let (lo, hi) = values.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| {
        (lo.min(v), hi.max(v))
    });
    if !lo.is_finite() {
        return (0.0, 1.0);
    }
    let pad = ((hi - lo) * 0.05).max(1.0);
    (lo - pad, hi + pad)
}

fn open_svg(out: &mut String, width: u32, height: u32, comment: &str, title: &str) {
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" viewBox="0 0 {width} {height}" font-family="sans-serif">"#
    );
    let _ = writeln!(out, "<!-- {} -->", comment.replace("--", "- -"));
    let _ = writeln!(
        out,
        r#"<rect width="{width}" height="{height}" fill="white"/>"#
    );
    let _ = writeln!(
        out,
        r#"<text x="{:.1}" y="22" font-size="14" text-anchor="middle">{}</text>"#,
        width as f64 / 2.0,
        escape(title)
    );
}

/// One labelled chip set for [`denotation_svg`].
pub struct DenotationSeries<'a> {
    pub word: &'a str,
    pub chips: &'a [LabColor],
    pub i_w: Option<f64>,
}

/// a*-b* scatter of each word's chips with an L* strip to the right.
/// Markers are filled with the chip color and outlined per word.
pub fn denotation_svg(series: &[DenotationSeries<'_>], comment: &str) -> String {
    let mut out = String::new();
    let words: Vec<&str> = series.iter().map(|s| s.word).collect();
    let strip_w = (50.0 * series.len().max(1) as f64).min(200.0);
    let label_w = series.iter().map(|s| s.word.chars().count()).max().unwrap_or(0) * 7 + 140;
    open_svg(
        &mut out,
        620 + strip_w as u32 + label_w as u32,
        560,
        comment,
        &format!("Denotation in CIELAB: {}", words.join(", ")),
    );

    let all = || series.iter().flat_map(|s| s.chips.iter());
    let ab = Frame {
        left: 70.0,
        top: 45.0,
        width: 440.0,
        height: 440.0,
        x: padded_range(all().map(|c| c.a_star)),
        y: padded_range(all().map(|c| c.b_star)),
    };
    let strip = Frame {
        left: 590.0,
        top: 45.0,
        width: strip_w,
        height: 440.0,
        x: (0.0, series.len().max(1) as f64),
        y: (0.0, 100.0),
    };
    ab.axes(&mut out, "a*", "b*", true);
    strip.axes(&mut out, "", "L*", false);

    for (k, s) in series.iter().enumerate() {
        let stroke = PALETTE[k % PALETTE.len()];
        let marker = Marker::nth(k);
        let _ = writeln!(out, r#"<g class="series" data-word="{}">"#, escape(s.word));
        for (i, c) in s.chips.iter().enumerate() {
            let fill = c.to_srgb_clamped().to_hex();
            marker.draw(
                &mut out,
                ab.px(c.a_star),
                ab.py(c.b_star),
                3.5,
                &fill,
                stroke,
            );
            // deterministic horizontal jitter inside the word's column
            let jitter = ((i as u64).wrapping_mul(2_654_435_761) % 1000) as f64 / 1000.0;
            let x = strip.px(k as f64 + 0.15 + 0.7 * jitter);
            marker.draw(&mut out, x, strip.py(c.l_star), 3.0, &fill, stroke);
        }
        let _ = writeln!(out, "</g>");
        let label = match s.i_w {
            Some(v) => format!("{} (n={}, I={v:.2})", s.word, s.chips.len()),
            None => format!("{} (n={})", s.word, s.chips.len()),
        };
        let ly = 60.0 + 20.0 * k as f64;
        marker.draw(
            &mut out,
            600.0 + strip.width,
            ly - 4.0,
            4.0,
            "white",
            stroke,
        );
        let _ = writeln!(
            out,
            r#"<text x="{:.2}" y="{ly:.2}" font-size="11">{}</text>"#,
            610.0 + strip.width,
            escape(&label)
        );
        let _ = writeln!(
            out,
            r#"<text x="{:.2}" y="{:.2}" font-size="10" text-anchor="middle">{}</text>"#,
            strip.px(k as f64 + 0.5),
            strip.top + strip.height + 15.0,
            escape(s.word)
        );
    }
    out.push_str("</svg>\n");
    out
}

/// One point per (context ease, informativeness) pair.
pub fn ease_vs_iw_svg(points: &[(f64, f64)], comment: &str) -> String {
    let mut out = String::new();
    open_svg(
        &mut out,
        640,
        480,
        comment,
        "Context ease vs. word informativeness",
    );
    let frame = Frame {
        left: 70.0,
        top: 45.0,
        width: 540.0,
        height: 370.0,
        x: padded_range(points.iter().map(|p| p.0)),
        y: padded_range(points.iter().map(|p| p.1)),
    };
    frame.axes(&mut out, "context ease (CIELAB distance)", "I_w", true);
    let _ = writeln!(
        out,
        r#"<g class="points" fill="{}" fill-opacity="0.35">"#,
        PALETTE[0]
    );
    for &(x, y) in points {
        let _ = writeln!(
            out,
            r#"<circle cx="{:.2}" cy="{:.2}" r="2"/>"#,
            frame.px(x),
            frame.py(y)
        );
    }
    out.push_str("</g>\n</svg>\n");
    out
}
