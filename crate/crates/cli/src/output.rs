//! Result serialization: CSV and JSON payloads, the metadata sidecar, and
//! atomic writes.
//!
//! Payload bytes are a pure function of the run configuration: floats are
//! printed with Rust's shortest round-trip formatting, so identical runs
//! produce identical files and `parse(emit(x)) = x` holds exactly. The
//! `.meta.json` sidecar additionally carries wall time, which varies.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde_json::{json, Value};

use crate::config::{config_error, OutputFormat};

/// One result row of a frame-potential style table.
#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    /// Sweep key columns present only in the sweep schemas.
    pub t_max: Option<f64>,
    pub n_qubits: Option<u32>,
    pub k: u32,
    pub f_mean: f64,
    pub f_stderr: f64,
    pub f_haar: f64,
    pub delta_f: f64,
    pub prediction: f64,
    pub p0: f64,
    pub n_pairs: u64,
    pub n_critical: Option<Option<u32>>,
    pub status: Option<String>,
}

/// Which key columns a table carries.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Schema {
    /// `k,F_mean,F_stderr,F_haar,delta_F,prediction,p0,n_pairs`
    FramePotential,
    /// Adds a leading `T` column and a trailing `status`.
    SweepTime,
    /// Adds leading `k,N`, trailing `n_critical,status`.
    SweepSize,
}

impl Schema {
    pub fn header(self) -> &'static str {
        match self {
            Schema::FramePotential => "k,F_mean,F_stderr,F_haar,delta_F,prediction,p0,n_pairs",
            Schema::SweepTime => "T,k,F_mean,F_stderr,F_haar,delta_F,prediction,p0,n_pairs,status",
            Schema::SweepSize => {
                "k,N,F_mean,F_stderr,F_haar,delta_F,prediction,p0,n_pairs,n_critical,status"
            }
        }
    }
}

fn fmt_f64(x: f64) -> String {
    format!("{x}")
}

fn core_fields(row: &Row) -> String {
    format!(
        "{},{},{},{},{},{},{}",
        fmt_f64(row.f_mean),
        fmt_f64(row.f_stderr),
        fmt_f64(row.f_haar),
        fmt_f64(row.delta_f),
        fmt_f64(row.prediction),
        fmt_f64(row.p0),
        row.n_pairs
    )
}

pub fn to_csv(schema: Schema, rows: &[Row]) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{}", schema.header());
    for row in rows {
        match schema {
            Schema::FramePotential => {
                let _ = writeln!(out, "{},{}", row.k, core_fields(row));
            }
            Schema::SweepTime => {
                let _ = writeln!(
                    out,
                    "{},{},{},{}",
                    fmt_f64(row.t_max.expect("sweep-time rows carry T")),
                    row.k,
                    core_fields(row),
                    row.status.as_deref().unwrap_or("ok")
                );
            }
            Schema::SweepSize => {
                let n_crit = match row.n_critical.expect("sweep-size rows carry n_critical") {
                    Some(n) => n.to_string(),
                    None => "-".to_string(),
                };
                let _ = writeln!(
                    out,
                    "{},{},{},{},{}",
                    row.k,
                    row.n_qubits.expect("sweep-size rows carry N"),
                    core_fields(row),
                    n_crit,
                    row.status.as_deref().unwrap_or("ok")
                );
            }
        }
    }
    out
}

pub fn parse_csv(schema: Schema, text: &str) -> anyhow::Result<Vec<Row>> {
    let mut lines = text.lines();
    let header = lines.next().ok_or_else(|| config_error("empty csv"))?;
    if header != schema.header() {
        return Err(config_error(format!("unexpected csv header {header:?}")));
    }
    let mut rows = Vec::new();
    for line in lines {
        if line.is_empty() {
            continue;
        }
        let cells: Vec<&str> = line.split(',').collect();
        let expected = schema.header().split(',').count();
        if cells.len() != expected {
            return Err(config_error(format!(
                "row has {} cells, expected {expected}",
                cells.len()
            )));
        }
        let f = |s: &str| -> anyhow::Result<f64> {
            s.parse()
                .map_err(|_| config_error(format!("bad float {s:?}")))
        };
        let row = match schema {
            Schema::FramePotential => Row {
                t_max: None,
                n_qubits: None,
                k: cells[0].parse()?,
                f_mean: f(cells[1])?,
                f_stderr: f(cells[2])?,
                f_haar: f(cells[3])?,
                delta_f: f(cells[4])?,
                prediction: f(cells[5])?,
                p0: f(cells[6])?,
                n_pairs: cells[7].parse()?,
                n_critical: None,
                status: None,
            },
            Schema::SweepTime => Row {
                t_max: Some(f(cells[0])?),
                n_qubits: None,
                k: cells[1].parse()?,
                f_mean: f(cells[2])?,
                f_stderr: f(cells[3])?,
                f_haar: f(cells[4])?,
                delta_f: f(cells[5])?,
                prediction: f(cells[6])?,
                p0: f(cells[7])?,
                n_pairs: cells[8].parse()?,
                n_critical: None,
                status: Some(cells[9].to_string()),
            },
            Schema::SweepSize => Row {
                t_max: None,
                n_qubits: Some(cells[1].parse()?),
                k: cells[0].parse()?,
                f_mean: f(cells[2])?,
                f_stderr: f(cells[3])?,
                f_haar: f(cells[4])?,
                delta_f: f(cells[5])?,
                prediction: f(cells[6])?,
                p0: f(cells[7])?,
                n_pairs: cells[8].parse()?,
                n_critical: Some(match cells[9] {
                    "-" => None,
                    s => Some(s.parse()?),
                }),
                status: Some(cells[10].to_string()),
            },
        };
        rows.push(row);
    }
    Ok(rows)
}

fn row_to_json(schema: Schema, row: &Row) -> Value {
    let mut v = json!({
        "k": row.k,
        "F_mean": row.f_mean,
        "F_stderr": row.f_stderr,
        "F_haar": row.f_haar,
        "delta_F": row.delta_f,
        "prediction": row.prediction,
        "p0": row.p0,
        "n_pairs": row.n_pairs,
    });
    let obj = v.as_object_mut().expect("object");
    match schema {
        Schema::FramePotential => {}
        Schema::SweepTime => {
            obj.insert("T".into(), json!(row.t_max));
            obj.insert("status".into(), json!(row.status.as_deref().unwrap_or("ok")));
        }
        Schema::SweepSize => {
            obj.insert("N".into(), json!(row.n_qubits));
            obj.insert("n_critical".into(), json!(row.n_critical.flatten()));
            obj.insert("status".into(), json!(row.status.as_deref().unwrap_or("ok")));
        }
    }
    v
}

pub fn to_json(schema: Schema, rows: &[Row]) -> String {
    let rows: Vec<Value> = rows.iter().map(|r| row_to_json(schema, r)).collect();
    let mut text = serde_json::to_string_pretty(&json!({ "rows": rows })).expect("serializable");
    text.push('\n');
    text
}

pub fn parse_json(schema: Schema, text: &str) -> anyhow::Result<Vec<Row>> {
    let v: Value = serde_json::from_str(text)?;
    let rows = v["rows"]
        .as_array()
        .ok_or_else(|| config_error("json payload lacks rows"))?;
    rows.iter()
        .map(|r| {
            let g = |key: &str| -> anyhow::Result<f64> {
                r[key]
                    .as_f64()
                    .ok_or_else(|| config_error(format!("missing field {key}")))
            };
            Ok(Row {
                t_max: r.get("T").and_then(|x| x.as_f64()),
                n_qubits: r.get("N").and_then(|x| x.as_u64()).map(|x| x as u32),
                k: r["k"].as_u64().ok_or_else(|| config_error("missing k"))? as u32,
                f_mean: g("F_mean")?,
                f_stderr: g("F_stderr")?,
                f_haar: g("F_haar")?,
                delta_f: g("delta_F")?,
                prediction: g("prediction")?,
                p0: g("p0")?,
                n_pairs: r["n_pairs"]
                    .as_u64()
                    .ok_or_else(|| config_error("missing n_pairs"))?,
                n_critical: match schema {
                    Schema::SweepSize => Some(
                        r.get("n_critical")
                            .and_then(|x| x.as_u64())
                            .map(|x| x as u32),
                    ),
                    _ => None,
                },
                status: r
                    .get("status")
                    .and_then(|x| x.as_str())
                    .map(|s| s.to_string()),
            })
        })
        .collect()
}

pub fn render(schema: Schema, rows: &[Row], format: OutputFormat) -> String {
    let text = match format {
        OutputFormat::Csv => to_csv(schema, rows),
        OutputFormat::Json => to_json(schema, rows),
    };
    // parse(emit(x)) = x, checked on every write in debug builds.
    #[cfg(debug_assertions)]
    {
        let parsed = match format {
            OutputFormat::Csv => parse_csv(schema, &text),
            OutputFormat::Json => parse_json(schema, &text),
        };
        debug_assert!(
            matches!(&parsed, Ok(p) if rows_equal_bits(p, rows)),
            "serialized payload failed to round-trip"
        );
    }
    text
}

/// Row equality with floats compared by bit pattern, so NaN cells from
/// skipped sweep cells compare equal to themselves after a round trip.
pub fn rows_equal_bits(a: &[Row], b: &[Row]) -> bool {
    let feq = |x: f64, y: f64| x.to_bits() == y.to_bits();
    let ofeq = |x: Option<f64>, y: Option<f64>| match (x, y) {
        (None, None) => true,
        (Some(x), Some(y)) => feq(x, y),
        _ => false,
    };
    a.len() == b.len()
        && a.iter().zip(b).all(|(r, s)| {
            ofeq(r.t_max, s.t_max)
                && r.n_qubits == s.n_qubits
                && r.k == s.k
                && feq(r.f_mean, s.f_mean)
                && feq(r.f_stderr, s.f_stderr)
                && feq(r.f_haar, s.f_haar)
                && feq(r.delta_f, s.delta_f)
                && feq(r.prediction, s.prediction)
                && feq(r.p0, s.p0)
                && r.n_pairs == s.n_pairs
                && r.n_critical == s.n_critical
                && r.status == s.status
        })
}

/// Write via a temp file in the same directory plus rename.
pub fn write_atomic(path: &Path, contents: &str) -> anyhow::Result<()> {
    let tmp = temp_path(path);
    std::fs::write(&tmp, contents)?;
    std::fs::rename(&tmp, path)?;
    Ok(())
}

fn temp_path(path: &Path) -> PathBuf {
    let mut name = path.file_name().unwrap_or_default().to_os_string();
    name.push(".tmp");
    path.with_file_name(name)
}

/// Path of the metadata sidecar: `results.csv` -> `results.meta.json`.
pub fn meta_path(path: &Path) -> PathBuf {
    let stem = path.file_stem().unwrap_or_default().to_string_lossy();
    path.with_file_name(format!("{stem}.meta.json"))
}

/// Write the `.meta.json` sidecar recording the effective configuration,
/// seed schedule, wall time, and library version.
pub fn write_meta(
    output: &Path,
    command: &str,
    config: Value,
    seeds: Value,
    extras: Value,
    wall_time_s: f64,
) -> anyhow::Result<()> {
    let meta = json!({
        "command": command,
        "version": env!("CARGO_PKG_VERSION"),
        "config": config,
        "seeds": seeds,
        "extras": extras,
        "wall_time_s": wall_time_s,
    });
    let mut text = serde_json::to_string_pretty(&meta)?;
    text.push('\n');
    write_atomic(&meta_path(output), &text)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample_rows() -> Vec<Row> {
        vec![
            Row {
                t_max: None,
                n_qubits: None,
                k: 2,
                f_mean: 2.0182345678901234,
                f_stderr: 0.0229,
                f_haar: 2.0,
                delta_f: 0.0091,
                prediction: 2.000244140625,
                p0: 6.103515625e-5,
                n_pairs: 159600,
                n_critical: None,
                status: None,
            },
            Row {
                t_max: None,
                n_qubits: None,
                k: 3,
                f_mean: 6.1466,
                f_stderr: 0.135,
                f_haar: 6.0,
                delta_f: 0.0244,
                prediction: 6.0056,
                p0: 6.103515625e-5,
                n_pairs: 159600,
                n_critical: None,
                status: None,
            },
        ]
    }

    #[test]
    fn csv_round_trips_exactly() {
        let rows = sample_rows();
        let text = to_csv(Schema::FramePotential, &rows);
        let parsed = parse_csv(Schema::FramePotential, &text).unwrap();
        assert_eq!(rows, parsed);
    }

    #[test]
    fn json_round_trips_exactly() {
        let rows = sample_rows();
        let text = to_json(Schema::FramePotential, &rows);
        let parsed = parse_json(Schema::FramePotential, &text).unwrap();
        assert_eq!(rows, parsed);
    }

    #[test]
    fn sweep_size_round_trips_with_unreachable_critical_size() {
        let rows = vec![Row {
            t_max: None,
            n_qubits: Some(5),
            k: 3,
            f_mean: 7.5,
            f_stderr: 0.3,
            f_haar: 6.0,
            delta_f: 0.25,
            prediction: 6.01,
            p0: 0.03125,
            n_pairs: 159600,
            n_critical: Some(None),
            status: Some("ok".into()),
        }];
        let text = to_csv(Schema::SweepSize, &rows);
        assert!(text.contains(",-,ok"));
        let parsed = parse_csv(Schema::SweepSize, &text).unwrap();
        assert_eq!(rows, parsed);
    }

    #[test]
    fn meta_path_replaces_extension() {
        assert_eq!(
            meta_path(Path::new("/tmp/out/fp.csv")),
            Path::new("/tmp/out/fp.meta.json")
        );
    }
}
