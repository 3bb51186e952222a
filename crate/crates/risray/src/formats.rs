//! CSV and JSON encodings of maps, probe reports, traces and metrics.
//!
//! All numbers are written with six decimals so that repeated runs produce
//! byte-identical files.

use std::fmt::Write as _;

use risray_core::{DbStats, PowerMap, ProbeReport, SimulationTrace, StatDeltas};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum FormatError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("empty trace file")]
    Empty,
}

/// Power map as CSV. The first line carries the grid metadata:
/// `# origin_x=<x>,origin_y=<y>,resolution=<r>,nx=<nx>,ny=<ny>`; then `ny`
/// rows of `nx` values, lowest y first.
pub fn power_map_csv(map: &PowerMap) -> String {
    let mut out = String::with_capacity(map.values.len() * 12 + 64);
    let _ = writeln!(
        out,
        "# origin_x={:.6},origin_y={:.6},resolution={:.6},nx={},ny={}",
        map.origin.x, map.origin.y, map.resolution, map.nx, map.ny
    );
    for j in 0..map.ny {
        push_row(&mut out, map.row(j).iter());
    }
    out
}

fn push_row<'a>(out: &mut String, values: impl Iterator<Item = &'a f64>) {
    for (i, v) in values.enumerate() {
        if i > 0 {
            out.push(',');
        }
        let _ = write!(out, "{v:.6}");
    }
    out.push('\n');
}

/// Probe report as CSV: `setting_index,angle_deg,<rx-id>...`.
pub fn probe_csv(report: &ProbeReport, angles_deg: &[f64]) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "setting_index,angle_deg,{}",
        report.receiver_ids.join(",")
    );
    for (i, row) in report.rows.iter().enumerate() {
        let _ = write!(out, "{i},{:.6},", angles_deg[i]);
        push_row(&mut out, row.iter());
    }
    out
}

/// Trace as CSV: `step,setting_index,<rx-id>...`.
pub fn trace_csv(trace: &SimulationTrace) -> String {
    let mut out = String::with_capacity(trace.steps() * 48 + 64);
    let _ = writeln!(out, "step,setting_index,{}", trace.receiver_ids.join(","));
    for (k, (s, row)) in trace.settings.iter().zip(&trace.powers).enumerate() {
        let _ = write!(out, "{k},{s},");
        push_row(&mut out, row.iter());
    }
    out
}

/// Reads a trace written by [`trace_csv`].
pub fn parse_trace_csv(text: &str) -> Result<SimulationTrace, FormatError> {
    let mut lines = text
        .lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty());
    let (_, header) = lines.next().ok_or(FormatError::Empty)?;
    let cols: Vec<&str> = header.split(',').map(str::trim).collect();
    if cols.len() < 3 || cols[0] != "step" || cols[1] != "setting_index" {
        return Err(FormatError::Parse {
            line: 1,
            message: "expected header `step,setting_index,<rx-id>...`".into(),
        });
    }
    let receiver_ids: Vec<String> = cols[2..].iter().map(|s| s.to_string()).collect();
    let mut settings = Vec::new();
    let mut powers = Vec::new();
    for (idx, line) in lines {
        let err = |message: String| FormatError::Parse {
            line: idx + 1,
            message,
        };
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        if fields.len() != cols.len() {
            return Err(err(format!(
                "expected {} fields, got {}",
                cols.len(),
                fields.len()
            )));
        }
        let step: usize = fields[0].parse().map_err(|_| err("bad step".into()))?;
        if step != settings.len() {
            return Err(err(format!("expected step {}, got {step}", settings.len())));
        }
        settings.push(
            fields[1]
                .parse()
                .map_err(|_| err("bad setting index".into()))?,
        );
        let row = fields[2..]
            .iter()
            .map(|f| {
                f.parse::<f64>()
                    .map_err(|_| err(format!("bad power {f:?}")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        powers.push(row);
    }
    Ok(SimulationTrace {
        receiver_ids,
        settings,
        powers,
    })
}

/// Per-receiver entry of the run metrics.
#[derive(Debug, Clone, PartialEq)]
pub struct ReceiverMetrics {
    pub receiver: String,
    pub role: &'static str,
    pub threshold_dbm: f64,
    pub satisfaction_fraction: f64,
    pub satisfaction_fraction_post_probe: f64,
    pub stats: DbStats,
    pub stats_post_probe: DbStats,
    /// Against the plain-wall baseline, whole trace.
    pub deltas: Option<StatDeltas>,
    /// Against the plain-wall baseline, steps after the probe phase.
    pub deltas_post_probe: Option<StatDeltas>,
}

/// Metrics written by `run`.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricsReport {
    pub policy: &'static str,
    pub steps: usize,
    pub probe_steps: usize,
    pub receivers: Vec<ReceiverMetrics>,
}

fn num(v: f64) -> String {
    // JSON has no NaN/inf; a non-finite value would be a bug upstream.
    debug_assert!(v.is_finite());
    format!("{v:.6}")
}

/// `"key": {mean, median, p10, p90}` on one line.
fn four(out: &mut String, indent: &str, key: &str, v: [f64; 4], last: bool) {
    let _ = writeln!(
        out,
        "{indent}\"{key}\": {{\"mean\": {}, \"median\": {}, \"p10\": {}, \"p90\": {}}}{}",
        num(v[0]),
        num(v[1]),
        num(v[2]),
        num(v[3]),
        if last { "" } else { "," }
    );
}

fn stats_entry(out: &mut String, indent: &str, key: &str, s: &DbStats, last: bool) {
    four(out, indent, key, [s.mean, s.median, s.p10, s.p90], last);
}

fn deltas_entry(out: &mut String, indent: &str, key: &str, d: &Option<StatDeltas>, last: bool) {
    match d {
        Some(d) => four(out, indent, key, [d.mean, d.median, d.p10, d.p90], last),
        None => {
            let _ = writeln!(
                out,
                "{indent}\"{key}\": null{}",
                if last { "" } else { "," }
            );
        }
    }
}

fn json_string(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            c if (c as u32) < 0x20 => {
                let _ = write!(out, "\\u{:04x}", c as u32);
            }
            c => out.push(c),
        }
    }
    out.push('"');
    out
}

pub fn metrics_json(report: &MetricsReport) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{{");
    let _ = writeln!(out, "  \"policy\": {},", json_string(report.policy));
    let _ = writeln!(out, "  \"steps\": {},", report.steps);
    let _ = writeln!(out, "  \"probe_steps\": {},", report.probe_steps);
    let _ = writeln!(out, "  \"receivers\": [");
    for (i, r) in report.receivers.iter().enumerate() {
        let ind = "      ";
        let _ = writeln!(out, "    {{");
        let _ = writeln!(out, "{ind}\"receiver\": {},", json_string(&r.receiver));
        let _ = writeln!(out, "{ind}\"role\": {},", json_string(r.role));
        let _ = writeln!(out, "{ind}\"threshold_dbm\": {},", num(r.threshold_dbm));
        let _ = writeln!(
            out,
            "{ind}\"satisfaction_fraction\": {},",
            num(r.satisfaction_fraction)
        );
        let _ = writeln!(
            out,
            "{ind}\"satisfaction_fraction_post_probe\": {},",
            num(r.satisfaction_fraction_post_probe)
        );
        stats_entry(&mut out, ind, "stats", &r.stats, false);
        stats_entry(
            &mut out,
            ind,
            "stats_post_probe",
            &r.stats_post_probe,
            false,
        );
        deltas_entry(&mut out, ind, "deltas", &r.deltas, false);
        deltas_entry(
            &mut out,
            ind,
            "deltas_post_probe",
            &r.deltas_post_probe,
            true,
        );
        let _ = writeln!(
            out,
            "    }}{}",
            if i + 1 < report.receivers.len() {
                ","
            } else {
                ""
            }
        );
    }
    let _ = writeln!(out, "  ]");
    let _ = writeln!(out, "}}");
    out
}

/// Output of `compare`: baseline minus trace, per receiver.
pub fn deltas_json(skip_steps: usize, deltas: &[(String, StatDeltas)]) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{{");
    let _ = writeln!(out, "  \"skip_steps\": {skip_steps},");
    let _ = writeln!(out, "  \"receivers\": [");
    for (i, (id, d)) in deltas.iter().enumerate() {
        let _ = writeln!(out, "    {{");
        let _ = writeln!(out, "      \"receiver\": {},", json_string(id));
        deltas_entry(&mut out, "      ", "deltas", &Some(*d), true);
        let _ = writeln!(out, "    }}{}", if i + 1 < deltas.len() { "," } else { "" });
    }
    let _ = writeln!(out, "  ]");
    let _ = writeln!(out, "}}");
    out
}
