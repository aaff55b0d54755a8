use std::fmt::Write as _;
use std::path::Path;

use hypgrowth::experiments::{SpectrumTable, TightReport};
use hypgrowth::GrowthTable;

pub fn growth_csv(table: &GrowthTable) -> Result<String, csv::Error> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["n", "sphere", "ball"])?;
    for (n, (s, b)) in table.spheres.iter().zip(&table.balls).enumerate() {
        w.write_record([n.to_string(), s.to_string(), b.to_string()])?;
    }
    Ok(String::from_utf8(w.into_inner().expect("in-memory writer")).expect("ascii"))
}

pub fn spectrum_csv(t: &SpectrumTable) -> Result<String, csv::Error> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["class", "set", "point_estimate", "certified_upper", "certified_lower", "merged", "minimum"])?;
    for r in &t.rows {
        w.write_record([
            r.class_id.to_string(),
            r.set.join(" "),
            r.estimate.point_estimate.to_string(),
            r.estimate.certified_upper.to_string(),
            r.lower.as_ref().map(|l| l.bound.to_string()).unwrap_or_default(),
            r.merged.to_string(),
            r.minimum.to_string(),
        ])?;
    }
    Ok(String::from_utf8(w.into_inner().expect("in-memory writer")).expect("ascii"))
}

pub fn tight_csv(r: &TightReport) -> Result<String, csv::Error> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["k", "source", "image", "strict", "witness_radius"])?;
    for row in &r.rows {
        w.write_record([
            row.k.to_string(),
            row.source.to_string(),
            row.image.to_string(),
            row.strict.to_string(),
            row.witness_radius.map(|k| k.to_string()).unwrap_or_default(),
        ])?;
    }
    Ok(String::from_utf8(w.into_inner().expect("in-memory writer")).expect("ascii"))
}

const W: f64 = 640.0;
const H: f64 = 360.0;
const PAD: f64 = 48.0;

fn frame(title: &str, y_lo: f64, y_hi: f64) -> String {
    let mut s = String::new();
    let _ = writeln!(s, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" font-family="sans-serif" font-size="11">"#);
    let _ = writeln!(s, r#"<rect width="{W}" height="{H}" fill="white"/>"#);
    let _ = writeln!(s, r#"<text x="{PAD}" y="20">{title}</text>"#);
    let _ = writeln!(
        s,
        r#"<line x1="{PAD}" y1="{b}" x2="{r}" y2="{b}" stroke="black"/><line x1="{PAD}" y1="{PAD}" x2="{PAD}" y2="{b}" stroke="black"/>"#,
        b = H - PAD,
        r = W - PAD
    );
    let _ = writeln!(s, r#"<text x="4" y="{}">{:.3}</text>"#, H - PAD, y_lo);
    let _ = writeln!(s, r#"<text x="4" y="{}">{:.3}</text>"#, PAD + 4.0, y_hi);
    s
}

fn y_of(v: f64, lo: f64, hi: f64) -> f64 {
    let span = if hi > lo { hi - lo } else { 1.0 };
    H - PAD - (v - lo) / span * (H - 2.0 * PAD)
}

/// Sorted spectrum: one point per row with its certified bracket as a bar.
pub fn spectrum_svg(t: &SpectrumTable) -> String {
    let lows: Vec<f64> = t.rows.iter().map(|r| r.lower.as_ref().map_or(1.0, |l| l.bound)).collect();
    let lo = lows.iter().cloned().fold(f64::INFINITY, f64::min).min(1.0);
    let hi = t.rows.iter().map(|r| r.estimate.certified_upper).fold(1.0, f64::max);
    let mut s = frame(&format!("{} spectrum of {}", t.kind, t.model), lo, hi);
    let n = t.rows.len().max(1) as f64;
    for (i, r) in t.rows.iter().enumerate() {
        let x = PAD + (i as f64 + 0.5) / n * (W - 2.0 * PAD);
        let _ = writeln!(
            s,
            r##"<line x1="{x:.1}" y1="{:.1}" x2="{x:.1}" y2="{:.1}" stroke="#888"/>"##,
            y_of(lows[i], lo, hi),
            y_of(r.estimate.certified_upper, lo, hi)
        );
        let colour = if r.minimum { "#c00" } else { "#036" };
        let _ = writeln!(
            s,
            r#"<circle cx="{x:.1}" cy="{:.1}" r="3" fill="{colour}"><title>{}: {}</title></circle>"#,
            y_of(r.estimate.point_estimate, lo, hi),
            r.set.join(" "),
            r.estimate.point_estimate
        );
    }
    s.push_str("</svg>\n");
    s
}

/// `log β_k` for `S` and `f(S)`.
pub fn tight_svg(r: &TightReport) -> String {
    let hi = r.rows.iter().map(|x| (x.source as f64).ln()).fold(1.0, f64::max);
    let mut s = frame("log ball sizes, S (blue) and f(S) (red)", 0.0, hi);
    let n = r.rows.len().max(2) as f64 - 1.0;
    for (col, colour) in [(0, "#036"), (1, "#c00")] {
        let pts: Vec<String> = r
            .rows
            .iter()
            .map(|x| {
                let v = if col == 0 { x.source } else { x.image } as f64;
                format!("{:.1},{:.1}", PAD + x.k as f64 / n * (W - 2.0 * PAD), y_of(v.ln(), 0.0, hi))
            })
            .collect();
        let _ = writeln!(s, r#"<polyline fill="none" stroke="{colour}" points="{}"/>"#, pts.join(" "));
    }
    s.push_str("</svg>\n");
    s
}

pub fn write_file(path: &Path, text: &str) -> std::io::Result<()> {
    std::fs::write(path, text)
}
