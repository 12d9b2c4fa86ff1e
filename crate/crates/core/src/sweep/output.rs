//! CSV and SVG writers for sweep rows.

use std::fmt::Write as _;
use std::io::{Read, Write};

use super::{PlotMetric, SweepRow};
use crate::{Error, Relaying, Result};

pub const CSV_HEADER: [&str; 16] = [
    "variable",
    "value",
    "mode",
    "pu_analytic",
    "su_analytic",
    "pu_oracle",
    "su_oracle",
    "pu_mc",
    "pu_mc_se",
    "su_mc",
    "su_mc_se",
    "se",
    "ee",
    "methods",
    "fallback",
    "error",
];

fn num(x: f64) -> String {
    format!("{x:.8e}")
}

fn opt(x: Option<f64>) -> String {
    x.map(num).unwrap_or_default()
}

/// Writes a header and one record per row. Numbers carry nine significant
/// digits; missing values are empty fields.
pub fn write_csv<W: Write>(rows: &[SweepRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_HEADER)?;
    for r in rows {
        w.write_record([
            r.variable.clone(),
            num(r.value),
            r.mode.as_str().to_string(),
            opt(r.pu_analytic),
            opt(r.su_analytic),
            opt(r.pu_oracle),
            opt(r.su_oracle),
            opt(r.pu_mc),
            opt(r.pu_mc_se),
            opt(r.su_mc),
            opt(r.su_mc_se),
            opt(r.se),
            opt(r.ee),
            r.methods.clone(),
            r.fallback.clone(),
            r.error.clone(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// Reads back a file produced by [`write_csv`].
pub fn read_csv<R: Read>(input: R) -> Result<Vec<SweepRow>> {
    let mut rd = csv::Reader::from_reader(input);
    let header = rd.headers()?.clone();
    if header.iter().ne(CSV_HEADER.iter().copied()) {
        return Err(Error::Config("unexpected CSV header".into()));
    }
    let mut rows = Vec::new();
    for (i, rec) in rd.records().enumerate() {
        let rec = rec?;
        let field = |k: usize| rec.get(k).unwrap_or("");
        let parse = |k: usize| -> Result<Option<f64>> {
            let s = field(k);
            if s.is_empty() {
                return Ok(None);
            }
            s.parse().map(Some).map_err(|_| {
                Error::Config(format!(
                    "record {}: bad number `{s}` in `{}`",
                    i + 1,
                    CSV_HEADER[k]
                ))
            })
        };
        let value =
            parse(1)?.ok_or_else(|| Error::Config(format!("record {}: missing value", i + 1)))?;
        rows.push(SweepRow {
            variable: field(0).to_string(),
            value,
            mode: field(2).parse::<Relaying>()?,
            pu_analytic: parse(3)?,
            su_analytic: parse(4)?,
            pu_oracle: parse(5)?,
            su_oracle: parse(6)?,
            pu_mc: parse(7)?,
            pu_mc_se: parse(8)?,
            su_mc: parse(9)?,
            su_mc_se: parse(10)?,
            se: parse(11)?,
            ee: parse(12)?,
            methods: field(13).to_string(),
            fallback: field(14).to_string(),
            error: field(15).to_string(),
        });
    }
    Ok(rows)
}

struct Series {
    label: String,
    color: &'static str,
    dashed: bool,
    markers: bool,
    points: Vec<(f64, f64)>,
}

const PALETTE: [&str; 8] = [
    "#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#17becf", "#7f7f7f",
];

fn collect_series(rows: &[SweepRow], metric: PlotMetric) -> Vec<Series> {
    type Pick = fn(&SweepRow) -> Option<f64>;
    let mut picks: Vec<(&str, Pick, bool, bool)> = Vec::new();
    let pu: [(&str, Pick, bool, bool); 3] = [
        ("PU analytic", |r| r.pu_analytic, false, false),
        ("PU oracle", |r| r.pu_oracle, true, false),
        ("PU MC", |r| r.pu_mc, false, true),
    ];
    let su: [(&str, Pick, bool, bool); 3] = [
        ("SU analytic", |r| r.su_analytic, false, false),
        ("SU oracle", |r| r.su_oracle, true, false),
        ("SU MC", |r| r.su_mc, false, true),
    ];
    match metric {
        PlotMetric::Outage => {
            picks.extend(pu);
            picks.extend(su);
        }
        PlotMetric::PuOutage => picks.extend(pu),
        PlotMetric::SuOutage => picks.extend(su),
        PlotMetric::Se => picks.push(("SE", |r| r.se, false, false)),
        PlotMetric::Ee => picks.push(("EE", |r| r.ee, false, false)),
    }
    let mut modes: Vec<Relaying> = rows.iter().map(|r| r.mode).collect();
    modes.sort();
    modes.dedup();
    let mut out = Vec::new();
    for mode in modes {
        for &(label, pick, dashed, markers) in &picks {
            let points: Vec<(f64, f64)> = rows
                .iter()
                .filter(|r| r.mode == mode)
                .filter_map(|r| pick(r).map(|y| (r.value, y)))
                .filter(|(x, y)| x.is_finite() && y.is_finite())
                .collect();
            if points.is_empty() {
                continue;
            }
            out.push(Series {
                label: format!("{} {label}", mode.as_str()),
                color: PALETTE[out.len() % PALETTE.len()],
                dashed,
                markers,
                points,
            });
        }
    }
    out
}

const LOG_FLOOR: f64 = 1e-7;

/// A standalone SVG line chart of `metric` against the swept variable.
/// Outage metrics use a log axis floored at 1e-7.
pub fn render_svg(rows: &[SweepRow], metric: PlotMetric) -> String {
    let (w, h) = (820.0, 520.0);
    let (ml, mr, mt, mb) = (80.0, 200.0, 30.0, 60.0);
    let (pw, ph) = (w - ml - mr, h - mt - mb);
    let series = collect_series(rows, metric);
    let log_y = matches!(
        metric,
        PlotMetric::Outage | PlotMetric::PuOutage | PlotMetric::SuOutage
    );
    let ty = |y: f64| if log_y { y.max(LOG_FLOOR).log10() } else { y };

    let xs = series.iter().flat_map(|s| s.points.iter().map(|p| p.0));
    let (mut x0, mut x1) = xs.fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), x| {
        (a.min(x), b.max(x))
    });
    let ys = series.iter().flat_map(|s| s.points.iter().map(|p| ty(p.1)));
    let (mut y0, mut y1) = ys.fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), y| {
        (a.min(y), b.max(y))
    });
    if !x0.is_finite() {
        (x0, x1, y0, y1) = (0.0, 1.0, 0.0, 1.0);
    }
    if x1 <= x0 {
        x1 = x0 + 1.0;
    }
    if log_y {
        y0 = y0.floor();
        y1 = y1.ceil().max(y0 + 1.0);
    } else {
        y0 = y0.min(0.0);
        if y1 <= y0 {
            y1 = y0 + 1.0;
        }
        y1 *= 1.05;
    }
    let px = |x: f64| ml + (x - x0) / (x1 - x0) * pw;
    let py = |y: f64| mt + ph - (ty(y) - y0) / (y1 - y0) * ph;

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(s, r#"<rect width="{w}" height="{h}" fill="white"/>"#);
    let _ = writeln!(
        s,
        r#"<rect x="{ml}" y="{mt}" width="{pw}" height="{ph}" fill="none" stroke="black"/>"#
    );
    for i in 0..=5 {
        let x = x0 + (x1 - x0) * i as f64 / 5.0;
        let xp = px(x);
        let _ = writeln!(
            s,
            r#"<line x1="{xp:.1}" y1="{b:.1}" x2="{xp:.1}" y2="{t:.1}" stroke="lightgray"/><text x="{xp:.1}" y="{ty:.1}" text-anchor="middle">{x:.3}</text>"#,
            b = mt + ph,
            t = mt,
            ty = mt + ph + 18.0
        );
    }
    let yticks: Vec<f64> = if log_y {
        (y0 as i32..=y1 as i32).map(f64::from).collect()
    } else {
        (0..=5).map(|i| y0 + (y1 - y0) * i as f64 / 5.0).collect()
    };
    for t in yticks {
        let yp = mt + ph - (t - y0) / (y1 - y0) * ph;
        let label = if log_y {
            format!("1e{}", t as i32)
        } else {
            format!("{t:.3}")
        };
        let _ = writeln!(
            s,
            r#"<line x1="{ml}" y1="{yp:.1}" x2="{r:.1}" y2="{yp:.1}" stroke="lightgray"/><text x="{lx:.1}" y="{ly:.1}" text-anchor="end">{label}</text>"#,
            r = ml + pw,
            lx = ml - 6.0,
            ly = yp + 4.0
        );
    }
    let xlabel = rows.first().map(|r| r.variable.as_str()).unwrap_or("");
    let ylabel = match metric {
        PlotMetric::Outage => "outage probability",
        PlotMetric::PuOutage => "PU outage probability",
        PlotMetric::SuOutage => "SU outage probability",
        PlotMetric::Se => "spectrum efficiency (bps/Hz)",
        PlotMetric::Ee => "energy efficiency (bps/Hz/W)",
    };
    let _ = writeln!(
        s,
        r#"<text x="{x:.1}" y="{y:.1}" text-anchor="middle">{xlabel}</text>"#,
        x = ml + pw / 2.0,
        y = h - 15.0
    );
    let _ = writeln!(
        s,
        r#"<text transform="translate(18,{y:.1}) rotate(-90)" text-anchor="middle">{ylabel}</text>"#,
        y = mt + ph / 2.0
    );
    for (k, ser) in series.iter().enumerate() {
        let dash = if ser.dashed {
            r#" stroke-dasharray="6,4""#
        } else {
            ""
        };
        if ser.markers {
            for &(x, y) in &ser.points {
                let _ = writeln!(
                    s,
                    r#"<circle cx="{:.1}" cy="{:.1}" r="3" fill="none" stroke="{}"/>"#,
                    px(x),
                    py(y),
                    ser.color
                );
            }
        } else {
            let pts: Vec<String> = ser
                .points
                .iter()
                .map(|&(x, y)| format!("{:.1},{:.1}", px(x), py(y)))
                .collect();
            let _ = writeln!(
                s,
                r#"<polyline points="{}" fill="none" stroke="{}" stroke-width="1.5"{dash}/>"#,
                pts.join(" "),
                ser.color
            );
        }
        let ly = mt + 10.0 + 18.0 * k as f64;
        let lx = ml + pw + 15.0;
        if ser.markers {
            let _ = writeln!(
                s,
                r#"<circle cx="{:.1}" cy="{ly:.1}" r="3" fill="none" stroke="{}"/>"#,
                lx + 12.5,
                ser.color
            );
        } else {
            let _ = writeln!(
                s,
                r#"<line x1="{lx:.1}" y1="{ly:.1}" x2="{:.1}" y2="{ly:.1}" stroke="{}" stroke-width="1.5"{dash}/>"#,
                lx + 25.0,
                ser.color
            );
        }
        let _ = writeln!(
            s,
            r#"<text x="{:.1}" y="{:.1}">{}</text>"#,
            lx + 32.0,
            ly + 4.0,
            ser.label
        );
    }
    s.push_str("</svg>\n");
    s
}
