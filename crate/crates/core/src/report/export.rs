use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use super::correlation::correlation_matrix;
use super::stats::quartiles;
use crate::circuit::Method;
use crate::error::{Error, Result};
use crate::runner::{
    graph_witnesses, heatmap_from_witnesses, scores_from_witnesses, Heatmap, ResultSet, WitnessKind,
};

pub const HISTOGRAM_BINS: usize = 50;
pub const HISTOGRAM_RANGE: (f64, f64) = (-1.1, 1.1);

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum ExportKind {
    HeatmapCsv,
    ScoresJson,
    QuartilesCsv,
    CorrCsv,
    HeatmapSvg,
    HistogramSvg,
}

impl ExportKind {
    pub const ALL: [ExportKind; 6] = [
        ExportKind::HeatmapCsv,
        ExportKind::ScoresJson,
        ExportKind::QuartilesCsv,
        ExportKind::CorrCsv,
        ExportKind::HeatmapSvg,
        ExportKind::HistogramSvg,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ExportKind::HeatmapCsv => "heatmap-csv",
            ExportKind::ScoresJson => "scores-json",
            ExportKind::QuartilesCsv => "quartiles-csv",
            ExportKind::CorrCsv => "corr-csv",
            ExportKind::HeatmapSvg => "heatmap-svg",
            ExportKind::HistogramSvg => "histogram-svg",
        }
    }
}

impl FromStr for ExportKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ExportKind::ALL
            .into_iter()
            .find(|k| k.as_str() == s)
            .ok_or_else(|| Error::InvalidConfig(format!("unknown export `{s}`")))
    }
}

fn opt(v: Option<f64>) -> String {
    v.map(|x| format!("{x:.6}")).unwrap_or_default()
}

fn has_mitigated(rs: &ResultSet) -> bool {
    rs.records.iter().any(|r| r.mitigated.is_some())
}

fn heatmaps(rs: &ResultSet) -> Vec<Heatmap> {
    let w = graph_witnesses(&rs.records);
    let mut out = Vec::new();
    for m in rs.methods() {
        for kind in [WitnessKind::Genuine, WitnessKind::Biseparable] {
            for mitigated in [false, true] {
                if mitigated && !has_mitigated(rs) {
                    continue;
                }
                out.push(heatmap_from_witnesses(&w, m, kind, mitigated));
            }
        }
    }
    out
}

fn heatmap_csv(rs: &ResultSet) -> String {
    let mut s = String::from("method,witness,mitigated,n,treewidth,median,count\n");
    for h in heatmaps(rs) {
        let kind = match h.witness {
            WitnessKind::Genuine => "genuine",
            WitnessKind::Biseparable => "biseparable",
        };
        for c in &h.cells {
            writeln!(
                s,
                "{},{kind},{},{},{},{:.6},{}",
                h.method, h.mitigated, c.n, c.treewidth, c.median, c.count
            )
            .unwrap();
        }
    }
    s
}

fn scores_json(rs: &ResultSet) -> String {
    let w = graph_witnesses(&rs.records);
    let v = serde_json::json!({
        "raw": scores_from_witnesses(&w, false),
        "mitigated": has_mitigated(rs).then(|| scores_from_witnesses(&w, true)),
    });
    let mut s = serde_json::to_string_pretty(&v).expect("scores serialize");
    s.push('\n');
    s
}

fn generator_values(rs: &ResultSet, mitigated: bool) -> BTreeMap<(Method, usize), Vec<f64>> {
    let mut out: BTreeMap<(Method, usize), Vec<f64>> = BTreeMap::new();
    for r in rs.records.iter().filter(|r| r.is_ok() && !r.is_identity()) {
        let v = if mitigated { r.mitigated } else { r.raw };
        if let Some(v) = v {
            out.entry((r.method, r.width)).or_default().push(v);
        }
    }
    out
}

fn quartiles_csv(rs: &ResultSet) -> Result<String> {
    let mut s = String::from("method,n,mitigated,count,q1,median,q3\n");
    for mitigated in [false, true] {
        for ((m, n), v) in generator_values(rs, mitigated) {
            let (q1, q2, q3) = quartiles(&v)?;
            writeln!(s, "{m},{n},{mitigated},{},{q1:.6},{q2:.6},{q3:.6}", v.len()).unwrap();
        }
    }
    Ok(s)
}

fn corr_csv(rs: &ResultSet) -> Result<String> {
    let mut s = String::from("mitigated,feature_a,feature_b,r,p,dof\n");
    for mitigated in [false, true] {
        let m = match correlation_matrix(&rs.records, mitigated) {
            Ok(m) => m,
            Err(Error::TooFewSamples { .. }) => continue,
            Err(e) => return Err(e),
        };
        for i in 0..m.features.len() {
            for j in i + 1..m.features.len() {
                writeln!(
                    s,
                    "{mitigated},{},{},{},{},{}",
                    m.features[i],
                    m.features[j],
                    opt(m.r[i][j]),
                    m.p[i][j].map(|p| format!("{p:.6e}")).unwrap_or_default(),
                    m.dof
                )
                .unwrap();
            }
        }
    }
    Ok(s)
}

/// Diverging blue (negative) to red (positive) on `[−1, 1]`.
fn color(v: f64) -> String {
    let t = v.clamp(-1.0, 1.0);
    let (r, g, b) = if t < 0.0 {
        let a = -t;
        (255.0 - 200.0 * a, 255.0 - 150.0 * a, 255.0)
    } else {
        (255.0, 255.0 - 180.0 * t, 255.0 - 200.0 * t)
    };
    format!(
        "#{:02x}{:02x}{:02x}",
        r.round() as u8,
        g.round() as u8,
        b.round() as u8
    )
}

fn svg_open(w: f64, h: f64) -> String {
    format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w}\" height=\"{h}\" viewBox=\"0 0 {w} {h}\" \
         font-family=\"sans-serif\" font-size=\"11\">\n<rect width=\"{w}\" height=\"{h}\" fill=\"white\"/>\n"
    )
}

/// Cells split along the anti-diagonal: raw values in the upper triangle,
/// mitigated values in the lower one.
fn heatmap_svg(raw: &Heatmap, mitigated: Option<&Heatmap>) -> String {
    let mut ns: Vec<usize> = raw.cells.iter().map(|c| c.n).collect();
    let mut tws: Vec<usize> = raw.cells.iter().map(|c| c.treewidth).collect();
    ns.sort();
    ns.dedup();
    tws.sort();
    tws.dedup();
    let cell = 56.0;
    let (left, top) = (50.0, 40.0);
    let w = left + cell * tws.len().max(1) as f64 + 20.0;
    let h = top + cell * ns.len().max(1) as f64 + 40.0;
    let mut s = svg_open(w, h);
    let kind = match raw.witness {
        WitnessKind::Genuine => "genuine",
        WitnessKind::Biseparable => "biseparable",
    };
    writeln!(
        s,
        "<text x=\"{left}\" y=\"20\">median {kind} witness, {}</text>",
        raw.method
    )
    .unwrap();
    for (i, n) in ns.iter().enumerate() {
        let y = top + cell * i as f64;
        writeln!(
            s,
            "<text x=\"{}\" y=\"{:.1}\" text-anchor=\"end\">n={n}</text>",
            left - 6.0,
            y + cell / 2.0 + 4.0
        )
        .unwrap();
        for (j, tw) in tws.iter().enumerate() {
            let x = left + cell * j as f64;
            let Some(rv) = raw.get(*n, *tw) else {
                writeln!(s, "<rect x=\"{x}\" y=\"{y}\" width=\"{cell}\" height=\"{cell}\" fill=\"#eeeeee\" stroke=\"white\"/>")
                    .unwrap();
                continue;
            };
            let mv = mitigated.and_then(|m| m.get(*n, *tw));
            match mv {
                Some(mv) => {
                    writeln!(
                        s,
                        "<polygon points=\"{x},{y} {},{y} {},{}\" fill=\"{}\"/>",
                        x + cell,
                        x + cell,
                        y + cell,
                        color(rv)
                    )
                    .unwrap();
                    writeln!(
                        s,
                        "<polygon points=\"{x},{y} {},{} {x},{}\" fill=\"{}\"/>",
                        x + cell,
                        y + cell,
                        y + cell,
                        color(mv)
                    )
                    .unwrap();
                    writeln!(
                        s,
                        "<text x=\"{:.1}\" y=\"{:.1}\" text-anchor=\"end\">{rv:.2}</text>",
                        x + cell - 3.0,
                        y + 14.0
                    )
                    .unwrap();
                    writeln!(
                        s,
                        "<text x=\"{:.1}\" y=\"{:.1}\">{mv:.2}</text>",
                        x + 3.0,
                        y + cell - 5.0
                    )
                    .unwrap();
                }
                None => {
                    writeln!(s, "<rect x=\"{x}\" y=\"{y}\" width=\"{cell}\" height=\"{cell}\" fill=\"{}\"/>", color(rv))
                        .unwrap();
                    writeln!(
                        s,
                        "<text x=\"{:.1}\" y=\"{:.1}\" text-anchor=\"middle\">{rv:.2}</text>",
                        x + cell / 2.0,
                        y + cell / 2.0 + 4.0
                    )
                    .unwrap();
                }
            }
        }
    }
    for (j, tw) in tws.iter().enumerate() {
        let x = left + cell * j as f64 + cell / 2.0;
        writeln!(
            s,
            "<text x=\"{x:.1}\" y=\"{:.1}\" text-anchor=\"middle\">tw={tw}</text>",
            top + cell * ns.len() as f64 + 16.0
        )
        .unwrap();
    }
    s.push_str("</svg>\n");
    s
}

/// Bin counts over [`HISTOGRAM_RANGE`]; values outside are dropped.
pub fn histogram(values: &[f64]) -> Vec<usize> {
    let (lo, hi) = HISTOGRAM_RANGE;
    let width = (hi - lo) / HISTOGRAM_BINS as f64;
    let mut bins = vec![0; HISTOGRAM_BINS];
    for &v in values {
        if (lo..=hi).contains(&v) {
            let k = (((v - lo) / width) as usize).min(HISTOGRAM_BINS - 1);
            bins[k] += 1;
        }
    }
    bins
}

fn histogram_svg(method: Method, raw: &[f64], mitigated: &[f64]) -> String {
    let (w, h) = (560.0, 300.0);
    let (left, right, top, bottom) = (40.0, 20.0, 30.0, 40.0);
    let pw = w - left - right;
    let ph = h - top - bottom;
    let (lo, hi) = HISTOGRAM_RANGE;
    let xs = |v: f64| left + (v - lo) / (hi - lo) * pw;
    let hr = histogram(raw);
    let hm = histogram(mitigated);
    let peak = hr.iter().chain(&hm).copied().max().unwrap_or(0).max(1) as f64;
    let mut s = svg_open(w, h);
    writeln!(
        s,
        "<text x=\"{left}\" y=\"18\">stabilizer expectations, {method}</text>"
    )
    .unwrap();
    for (a, b) in [(lo, -1.0), (1.0, hi)] {
        writeln!(
            s,
            "<rect x=\"{:.2}\" y=\"{top}\" width=\"{:.2}\" height=\"{ph}\" fill=\"#f0e0e0\"/>",
            xs(a),
            xs(b) - xs(a)
        )
        .unwrap();
    }
    let bw = pw / HISTOGRAM_BINS as f64;
    for (k, &c) in hr.iter().enumerate().filter(|(_, &c)| c > 0) {
        let bh = c as f64 / peak * ph;
        writeln!(
            s,
            "<rect x=\"{:.2}\" y=\"{:.2}\" width=\"{:.2}\" height=\"{bh:.2}\" fill=\"#8899aa\"/>",
            left + bw * k as f64,
            top + ph - bh,
            bw
        )
        .unwrap();
    }
    for (k, &c) in hm.iter().enumerate().filter(|(_, &c)| c > 0) {
        let bh = c as f64 / peak * ph;
        writeln!(
            s,
            "<rect x=\"{:.2}\" y=\"{:.2}\" width=\"{:.2}\" height=\"{bh:.2}\" fill=\"none\" stroke=\"#cc5500\"/>",
            left + bw * k as f64,
            top + ph - bh,
            bw
        )
        .unwrap();
    }
    writeln!(
        s,
        "<line x1=\"{left}\" y1=\"{:.2}\" x2=\"{:.2}\" y2=\"{:.2}\" stroke=\"black\"/>",
        top + ph,
        left + pw,
        top + ph
    )
    .unwrap();
    for t in [-1.0, -0.5, 0.0, 0.5, 1.0] {
        writeln!(
            s,
            "<text x=\"{:.2}\" y=\"{:.2}\" text-anchor=\"middle\">{t}</text>",
            xs(t),
            top + ph + 16.0
        )
        .unwrap();
    }
    s.push_str("</svg>\n");
    s
}

/// File name and contents of every file `kind` produces for `rs`.
pub fn render(rs: &ResultSet, kind: ExportKind) -> Result<Vec<(String, String)>> {
    Ok(match kind {
        ExportKind::HeatmapCsv => vec![("heatmap.csv".into(), heatmap_csv(rs))],
        ExportKind::ScoresJson => vec![("scores.json".into(), scores_json(rs))],
        ExportKind::QuartilesCsv => vec![("quartiles.csv".into(), quartiles_csv(rs)?)],
        ExportKind::CorrCsv => vec![("correlations.csv".into(), corr_csv(rs)?)],
        ExportKind::HeatmapSvg => {
            let maps = heatmaps(rs);
            maps.iter()
                .filter(|h| !h.mitigated)
                .map(|h| {
                    let mit = maps
                        .iter()
                        .find(|m| m.mitigated && m.method == h.method && m.witness == h.witness);
                    let kind = match h.witness {
                        WitnessKind::Genuine => "genuine",
                        WitnessKind::Biseparable => "biseparable",
                    };
                    (
                        format!("heatmap_{kind}_{}.svg", h.method),
                        heatmap_svg(h, mit),
                    )
                })
                .collect()
        }
        ExportKind::HistogramSvg => {
            let raw = generator_values(rs, false);
            let mit = generator_values(rs, true);
            rs.methods()
                .into_iter()
                .map(|m| {
                    let pick = |t: &BTreeMap<(Method, usize), Vec<f64>>| -> Vec<f64> {
                        t.iter()
                            .filter(|((mm, _), _)| *mm == m)
                            .flat_map(|(_, v)| v.iter().copied())
                            .collect()
                    };
                    (
                        format!("histogram_{m}.svg"),
                        histogram_svg(m, &pick(&raw), &pick(&mit)),
                    )
                })
                .collect()
        }
    })
}

/// Writes the files of `kind` into `dir` and returns their paths.
pub fn export(rs: &ResultSet, kind: ExportKind, dir: &Path) -> Result<Vec<PathBuf>> {
    std::fs::create_dir_all(dir)?;
    render(rs, kind)?
        .into_iter()
        .map(|(name, body)| {
            let p = dir.join(name);
            std::fs::write(&p, body)?;
            Ok(p)
        })
        .collect()
}
